//! Simple elements: finite combinations of characteristics, the Banach
//! algebra `L∞(Ω)`, the spaces `L1(Ω, μ)` and their integral maps.
//!
//! A simple element is stored by its value on each atom. The canonical
//! representation groups atoms by value: blocks are the nonempty level sets
//! of nonzero values, so blocks are disjoint and coefficients distinct.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::boolalg::{BoolAlg, Coproduct, Element, StoneSpace};
use crate::error::{Error, Result};
use crate::finban::{projective_tensor, FinBanSpace, Flavor, IsoWitness, LinMap};
use crate::linalg::Matrix;
use crate::measures::{MeasureAlgebra, VectorMeasure};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimpleElement {
    algebra: BoolAlg,
    values: Vec<Rational>,
}

impl fmt::Debug for SimpleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self.blocks().iter().map(|(e, k)| format!("{k}·χ{:?}", self.algebra.atom_names(*e))).collect();
        write!(f, "SimpleElement[{}]", blocks.join(" + "))
    }
}

/// One raw term `k·χ(E)` of a linear combination.
#[derive(Debug, Clone)]
pub struct Term {
    pub algebra: BoolAlg,
    pub element: Element,
    pub coefficient: Rational,
}

/// The canonical form of `Σ kᵢ χ(Eᵢ)`. All terms must live in `algebra`.
pub fn canonicalize(algebra: &BoolAlg, terms: &[Term]) -> Result<SimpleElement> {
    let mut values = vec![Rational::zero(); algebra.n_atoms()];
    for t in terms {
        if t.algebra != *algebra || !algebra.contains(t.element) {
            return Err(Error::AlgebraMismatch);
        }
        for i in t.element.atoms() {
            values[i] += &t.coefficient;
        }
    }
    Ok(SimpleElement { algebra: algebra.clone(), values })
}

impl SimpleElement {
    pub fn from_atom_values(algebra: &BoolAlg, values: Vec<Rational>) -> Result<Self> {
        if values.len() != algebra.n_atoms() {
            return Err(Error::DimensionMismatch(format!("{} values for {} atoms", values.len(), algebra.n_atoms())));
        }
        Ok(SimpleElement { algebra: algebra.clone(), values })
    }

    pub fn zero(algebra: &BoolAlg) -> Self {
        SimpleElement { algebra: algebra.clone(), values: vec![Rational::zero(); algebra.n_atoms()] }
    }

    /// `χ(E)`.
    pub fn chi(algebra: &BoolAlg, e: Element) -> Self {
        let values = (0..algebra.n_atoms()).map(|i| if e.has_atom(i) { Rational::one() } else { Rational::zero() }).collect();
        SimpleElement { algebra: algebra.clone(), values }
    }

    pub fn algebra(&self) -> &BoolAlg {
        &self.algebra
    }

    pub fn atom_values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value_at(&self, atom: usize) -> &Rational {
        &self.values[atom]
    }

    /// Canonical blocks `(Eₙ, kₙ)`, sorted by least atom.
    pub fn blocks(&self) -> Vec<(Element, Rational)> {
        let mut out: Vec<(Element, Rational)> = Vec::new();
        for (i, v) in self.values.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            match out.iter_mut().find(|(_, k)| k == v) {
                Some((e, _)) => *e = e.join(Element::atom(i)),
                None => out.push((Element::atom(i), v.clone())),
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// The element where the function is nonzero.
    pub fn support(&self) -> Element {
        Element::from_atoms(self.values.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| i))
    }

    /// `‖f‖∞ = max |kₙ|`.
    pub fn linf_norm(&self) -> Rational {
        self.values.iter().map(Signed::abs).max().unwrap_or_default()
    }

    fn check(&self, other: &SimpleElement) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &SimpleElement) -> Result<SimpleElement> {
        self.check(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(SimpleElement { algebra: self.algebra.clone(), values })
    }

    pub fn scale(&self, k: &Rational) -> SimpleElement {
        SimpleElement { algebra: self.algebra.clone(), values: self.values.iter().map(|v| v * k).collect() }
    }

    pub fn multiply(&self, other: &SimpleElement) -> Result<SimpleElement> {
        self.check(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(SimpleElement { algebra: self.algebra.clone(), values })
    }

    /// Restriction to the atoms below `e` (multiplication by `χ(E)`).
    pub fn restrict(&self, e: Element) -> SimpleElement {
        let values = self.values.iter().enumerate().map(|(i, v)| if e.has_atom(i) { v.clone() } else { Rational::zero() }).collect();
        SimpleElement { algebra: self.algebra.clone(), values }
    }

    /// `φ✶f` for a Boolean morphism `φ` out of this function's algebra,
    /// determined by `χ(E) ↦ χ(φ(E))`.
    pub fn push(&self, phi: &crate::boolalg::BoolMorphism) -> Result<SimpleElement> {
        if phi.source() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let mut values = vec![Rational::zero(); phi.target().n_atoms()];
        for (i, &img) in phi.atom_images().iter().enumerate() {
            for t in img.atoms() {
                values[t] += &self.values[i];
            }
        }
        Ok(SimpleElement { algebra: phi.target().clone(), values })
    }
}

/// `L∞(Ω)` as a normed space: functions on atoms with the sup norm.
pub fn linf_space(algebra: &BoolAlg) -> FinBanSpace {
    FinBanSpace::linf(algebra.n_atoms()).with_labels(algebra.atoms().to_vec()).expect("one label per atom")
}

/// The universal measure `χ: Ω -> L∞(Ω)`.
pub fn chi_measure(algebra: &BoolAlg) -> VectorMeasure {
    let space = linf_space(algebra);
    let values = (0..algebra.n_atoms()).map(|i| space.basis_vector(i)).collect();
    VectorMeasure::new(algebra.clone(), space, values).expect("one value per atom")
}

/// `∫ f dν = Σ kₙ ν(Eₙ)`.
pub fn integrate(f: &SimpleElement, nu: &VectorMeasure) -> Result<Vec<Rational>> {
    if f.algebra() != nu.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let mut out = vec![Rational::zero(); nu.target().dim()];
    for (e, k) in f.blocks() {
        for (o, v) in out.iter_mut().zip(nu.eval(e)) {
            *o += v * &k;
        }
    }
    Ok(out)
}

/// The lift `∫ dν: L∞(Ω) -> B`; column `i` is `ν` of atom `i`.
pub fn integral_map(nu: &VectorMeasure) -> LinMap {
    let cols: Vec<Vec<Rational>> = nu.atom_values().to_vec();
    let m = Matrix::from_columns(nu.target().dim(), &cols);
    LinMap::new(linf_space(nu.algebra()), nu.target().clone(), m).expect("shape by construction")
}

/// `L1(Ω, μ)`: a.e. classes of simple functions, weighted ℓ1 on the atoms of
/// positive mass.
#[derive(Debug, Clone)]
pub struct L1Space {
    mu: MeasureAlgebra,
    kept: Vec<usize>,
    space: FinBanSpace,
}

pub fn l1_space(mu: &MeasureAlgebra) -> L1Space {
    let alg = mu.algebra();
    let kept: Vec<usize> = (0..alg.n_atoms()).filter(|&i| !mu.atom_mass(i).is_zero()).collect();
    let labels = kept.iter().map(|&i| alg.atoms()[i].clone()).collect();
    let weights = kept.iter().map(|&i| mu.atom_mass(i).clone()).collect();
    let space = FinBanSpace::new(labels, weights, Flavor::Sum).expect("positive masses");
    L1Space { mu: mu.clone(), kept, space }
}

impl L1Space {
    pub fn space(&self) -> &FinBanSpace {
        &self.space
    }

    pub fn measure(&self) -> &MeasureAlgebra {
        &self.mu
    }

    /// Atoms of positive mass, in basis order.
    pub fn kept_atoms(&self) -> &[usize] {
        &self.kept
    }

    /// The class of `f`: its values on atoms of positive mass.
    pub fn class_of(&self, f: &SimpleElement) -> Result<Vec<Rational>> {
        if f.algebra() != self.mu.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self.kept.iter().map(|&i| f.values[i].clone()).collect())
    }

    /// `‖f‖₁ = Σ |kₙ| μ(Eₙ)`.
    pub fn norm(&self, f: &SimpleElement) -> Result<Rational> {
        Ok(self.space.norm(&self.class_of(f)?))
    }

    /// The extension of `f ↦ Σ kₙ ν(Eₙ)` to `L1(Ω, μ)`; needs `ν` to vanish
    /// on `μ`-null atoms. Its norm is the Lipschitz norm of `ν`.
    pub fn integral_map(&self, nu: &VectorMeasure) -> Result<LinMap> {
        if nu.algebra() != self.mu.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        let alg = nu.algebra();
        if let Some(i) = (0..alg.n_atoms()).find(|i| !self.kept.contains(i) && !nu.is_null_atom(*i)) {
            return Err(Error::SupportError(format!("measure charges the μ-null atom `{}`", alg.atoms()[i])));
        }
        let cols: Vec<Vec<Rational>> = self.kept.iter().map(|&i| nu.atom_value(i).to_vec()).collect();
        LinMap::new(self.space.clone(), nu.target().clone(), Matrix::from_columns(nu.target().dim(), &cols))
    }
}

/// A simple function with values in a weighted ℓ1 space `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSimple {
    algebra: BoolAlg,
    space: FinBanSpace,
    values: Vec<Vec<Rational>>,
}

impl VectorSimple {
    pub fn new(algebra: &BoolAlg, space: &FinBanSpace, values: Vec<Vec<Rational>>) -> Result<Self> {
        if !space.is_sum_like() {
            return Err(Error::FlavorMismatch("vector simple functions take values in weighted ℓ1 spaces".into()));
        }
        if values.len() != algebra.n_atoms() || values.iter().any(|v| v.len() != space.dim()) {
            return Err(Error::DimensionMismatch("one vector of the space's dimension per atom".into()));
        }
        Ok(VectorSimple { algebra: algebra.clone(), space: space.clone(), values })
    }

    /// `χ(E) ⊗ b`.
    pub fn elementary(algebra: &BoolAlg, space: &FinBanSpace, e: Element, b: &[Rational]) -> Result<Self> {
        let zero = vec![Rational::zero(); space.dim()];
        let values = (0..algebra.n_atoms()).map(|i| if e.has_atom(i) { b.to_vec() } else { zero.clone() }).collect();
        VectorSimple::new(algebra, space, values)
    }

    pub fn algebra(&self) -> &BoolAlg {
        &self.algebra
    }

    pub fn space(&self) -> &FinBanSpace {
        &self.space
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.values
    }

    /// `T ∘ f`.
    pub fn map(&self, t: &LinMap) -> Result<VectorSimple> {
        if !t.source().same_norm(&self.space) {
            return Err(Error::DimensionMismatch("map does not start at the value space".into()));
        }
        VectorSimple::new(&self.algebra, t.target(), self.values.iter().map(|v| t.apply(v)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bochner {
    pub integral: Vec<Rational>,
    pub l1_norm: Rational,
}

/// `∫ f dμ = Σ μ(Eₙ) bₙ` and `‖f‖₁ = Σ μ(Eₙ) ‖bₙ‖`.
pub fn bochner(f: &VectorSimple, mu: &MeasureAlgebra) -> Result<Bochner> {
    if f.algebra() != mu.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let mut integral = vec![Rational::zero(); f.space.dim()];
    let mut l1_norm = Rational::zero();
    for (i, v) in f.values.iter().enumerate() {
        let m = mu.atom_mass(i);
        if m.is_zero() {
            continue;
        }
        for (o, x) in integral.iter_mut().zip(v) {
            *o += x * m;
        }
        l1_norm += f.space.norm(v) * m;
    }
    Ok(Bochner { integral, l1_norm })
}

/// `L1(Ω, μ, B)`: classes of `B`-valued simple functions, coordinates
/// atom-major, normed by `Σ μ(a) ‖f(a)‖`.
pub fn vector_l1_space(mu: &MeasureAlgebra, b: &FinBanSpace) -> Result<FinBanSpace> {
    if !b.is_sum_like() {
        return Err(Error::FlavorMismatch("B must be weighted ℓ1".into()));
    }
    let l1 = l1_space(mu);
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    for (k, &i) in l1.kept.iter().enumerate() {
        for j in 0..b.dim() {
            labels.push(format!("{}@{}", b.labels()[j], mu.algebra().atoms()[i]));
            weights.push(&l1.space.weights()[k] * &b.weights()[j]);
        }
    }
    FinBanSpace::new(labels, weights, Flavor::Sum)
}

/// Coordinates of `f` in [`vector_l1_space`].
pub fn vector_l1_class(f: &VectorSimple, mu: &MeasureAlgebra) -> Result<Vec<Rational>> {
    if f.algebra() != mu.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let l1 = l1_space(mu);
    Ok(l1.kept.iter().flat_map(|&i| f.values[i].iter().cloned()).collect())
}

/// `L1(Ω, μ, B) ≅ L1(Ω, μ) ⊗ B`, sending the class of `χ(a) ⊗ eⱼ` to
/// `[χ(a)] ⊗ eⱼ`.
pub fn l1_tensor_witness(mu: &MeasureAlgebra, b: &FinBanSpace) -> Result<IsoWitness> {
    let source = vector_l1_space(mu, b)?;
    let tensor = projective_tensor(l1_space(mu).space(), b)?;
    let n = l1_space(mu).kept.len();
    let perm: Vec<usize> = (0..n * b.dim()).map(|k| tensor.index(k / b.dim(), k % b.dim())).collect();
    IsoWitness::from_permutation(&source, tensor.space(), &perm)
}

#[derive(Debug, Clone)]
pub struct Fubini {
    pub joint: Rational,
    /// `∫_Ω (∫_Σ f dν) dμ`
    pub left_outer: Rational,
    /// `∫_Σ (∫_Ω f dμ) dν`
    pub right_outer: Rational,
    pub witness: IsoWitness,
}

/// Integrates `f` on `Ω ⊗ Σ` against `μ ⊗ ν` and both ways iteratively,
/// and builds `L1(Ω ⊗ Σ, μ ⊗ ν) ≅ L1(Ω, μ) ⊗ L1(Σ, ν)`.
pub fn fubini(f: &SimpleElement, c: &Coproduct, mu: &MeasureAlgebra, nu: &MeasureAlgebra) -> Result<Fubini> {
    if f.algebra() != c.algebra() || mu.algebra() != c.left() || nu.algebra() != c.right() {
        return Err(Error::AlgebraMismatch);
    }
    let (n, m) = (c.left().n_atoms(), c.right().n_atoms());
    let (_, joint_measure) = crate::measures::product_measure(mu.measure(), nu.measure())?;
    let joint = integrate(f, &joint_measure)?.remove(0);
    // inner integrals are simple functions on one factor
    let over_right: Vec<Rational> =
        (0..n).map(|i| (0..m).map(|j| f.value_at(c.pair_atom(i, j)) * nu.atom_mass(j)).sum()).collect();
    let over_left: Vec<Rational> =
        (0..m).map(|j| (0..n).map(|i| f.value_at(c.pair_atom(i, j)) * mu.atom_mass(i)).sum()).collect();
    let left_outer = integrate(&SimpleElement::from_atom_values(c.left(), over_right)?, mu.measure())?.remove(0);
    let right_outer = integrate(&SimpleElement::from_atom_values(c.right(), over_left)?, nu.measure())?.remove(0);

    let joint_l1 = l1_space(&MeasureAlgebra::from_measure(joint_measure)?);
    let (l, r) = (l1_space(mu), l1_space(nu));
    let tensor = projective_tensor(l.space(), r.space())?;
    let perm = joint_l1
        .kept
        .iter()
        .map(|&k| {
            let (i, j) = c.split_atom(k);
            let li = l.kept.iter().position(|&x| x == i).expect("positive mass on both factors");
            let rj = r.kept.iter().position(|&x| x == j).expect("positive mass on both factors");
            tensor.index(li, rj)
        })
        .collect::<Vec<_>>();
    let witness = IsoWitness::from_permutation(joint_l1.space(), tensor.space(), &perm)?;
    Ok(Fubini { joint, left_outer, right_outer, witness })
}

/// `f` as a function on the Stone space: its value at the point `uf:a` is
/// its value on `a`.
pub fn stone_transfer(f: &SimpleElement, stone: &StoneSpace) -> Result<SimpleElement> {
    if f.algebra() != stone.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let values = stone.points().iter().map(|p| f.values[p.atom].clone()).collect();
    SimpleElement::from_atom_values(stone.clopens(), values)
}

/// The measure `U ↦ ν(η⁻¹(U))` on the clopens of the Stone space.
pub fn stone_transfer_measure(nu: &VectorMeasure, stone: &StoneSpace) -> Result<VectorMeasure> {
    if nu.algebra() != stone.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let values = stone.points().iter().map(|p| nu.atom_value(p.atom).to_vec()).collect();
    VectorMeasure::new(stone.clopens().clone(), nu.target().clone(), values)
}

/// A morphism `E -> F` in the category of simple elements: a simple function
/// supported in `E ∧ F`. Composition is multiplication; `χ(E)` is the
/// identity on `E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleMorphism {
    source: Element,
    target: Element,
    function: SimpleElement,
}

impl SimpleMorphism {
    pub fn new(source: Element, target: Element, function: SimpleElement) -> Result<Self> {
        if !function.support().is_below(source.meet(target)) {
            return Err(Error::SupportError("simple morphism is not supported in E ∧ F".into()));
        }
        Ok(SimpleMorphism { source, target, function })
    }

    pub fn identity(algebra: &BoolAlg, e: Element) -> Self {
        SimpleMorphism { source: e, target: e, function: SimpleElement::chi(algebra, e) }
    }

    pub fn source(&self) -> Element {
        self.source
    }

    pub fn target(&self) -> Element {
        self.target
    }

    pub fn function(&self) -> &SimpleElement {
        &self.function
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SimpleMorphism) -> Result<SimpleMorphism> {
        if inner.target != self.source {
            return Err(Error::DimensionMismatch("composable simple morphisms share an object".into()));
        }
        SimpleMorphism::new(inner.source, self.target, self.function.multiply(&inner.function)?)
    }
}

/// An idempotent `e` split through `χ(G)`: `e = s ∘ r` and `r ∘ s = id_G`.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub support: Element,
    pub retraction: SimpleMorphism,
    pub section: SimpleMorphism,
}

/// Splits an idempotent endomorphism `e` of `E`.
pub fn split_idempotent(e: &SimpleMorphism) -> Result<Splitting> {
    if e.source != e.target {
        return Err(Error::NotIdempotent);
    }
    let f = &e.function;
    if f.multiply(f)? != *f {
        return Err(Error::NotIdempotent);
    }
    let g = f.support();
    let chi = SimpleElement::chi(f.algebra(), g);
    let retraction = SimpleMorphism::new(e.source, g, chi.clone())?;
    let section = SimpleMorphism::new(g, e.source, chi)?;
    Ok(Splitting { support: g, retraction, section })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolalg::{coproduct, stone_space};
    use crate::rational::{frac, int};

    fn abc() -> BoolAlg {
        BoolAlg::numbered(3).unwrap()
    }

    fn term(alg: &BoolAlg, atoms: &[usize], k: i64) -> Term {
        Term { algebra: alg.clone(), element: Element::from_atoms(atoms.iter().copied()), coefficient: int(k) }
    }

    #[test]
    fn canonical_forms() {
        let alg = abc();
        let f = canonicalize(&alg, &[term(&alg, &[0, 1], 1), term(&alg, &[1, 2], 1)]).unwrap();
        assert_eq!(f.blocks(), vec![(Element::from_atoms([0, 2]), int(1)), (Element::atom(1), int(2))]);
        let z = canonicalize(&alg, &[term(&alg, &[0], 1), term(&alg, &[0], -1)]).unwrap();
        assert!(z.blocks().is_empty());
        let other = BoolAlg::numbered(2).unwrap();
        assert_eq!(canonicalize(&alg, &[term(&other, &[0], 1)]).unwrap_err(), Error::AlgebraMismatch);
    }

    #[test]
    fn sup_norm_and_products() {
        let alg = abc();
        let f = canonicalize(&alg, &[term(&alg, &[0], 2), term(&alg, &[1], -3)]).unwrap();
        assert_eq!(f.linf_norm(), int(3));
        let e = SimpleElement::chi(&alg, Element::from_atoms([0, 1]));
        let g = SimpleElement::chi(&alg, Element::from_atoms([1, 2]));
        assert_eq!(e.multiply(&g).unwrap(), SimpleElement::chi(&alg, Element::atom(1)));
    }

    #[test]
    fn integration() {
        let alg = abc();
        let mu = VectorMeasure::scalar(alg.clone(), vec![frac(1, 3); 3]).unwrap();
        let f = SimpleElement::chi(&alg, Element::atom(0)).scale(&int(6));
        assert_eq!(integrate(&f, &mu).unwrap(), vec![int(2)]);
        assert_eq!(integrate(&SimpleElement::zero(&alg), &mu).unwrap(), vec![int(0)]);
        let chi = chi_measure(&alg);
        assert_eq!(chi.semivariation(alg.top()).unwrap(), int(1));
        assert_eq!(integral_map(&chi).operator_norm().unwrap(), int(1));
    }

    #[test]
    fn bochner_elementary() {
        let alg = abc();
        let mu = MeasureAlgebra::new(alg.clone(), vec![int(1), frac(1, 2), int(0)]).unwrap();
        let b = FinBanSpace::sum(vec![int(1), int(3)]).unwrap();
        let f = VectorSimple::elementary(&alg, &b, Element::atom(1), &[int(2), int(-1)]).unwrap();
        let r = bochner(&f, &mu).unwrap();
        assert_eq!(r.integral, vec![int(1), frac(-1, 2)]);
        assert_eq!(r.l1_norm, frac(5, 2));
        let w = l1_tensor_witness(&mu, &b).unwrap();
        assert!(w.is_isometric().unwrap());
    }

    #[test]
    fn fubini_rectangle() {
        let (a, b) = (BoolAlg::numbered(2).unwrap(), abc());
        let c = coproduct(&a, &b).unwrap();
        let mu = MeasureAlgebra::new(a.clone(), vec![frac(1, 2), int(2)]).unwrap();
        let nu = MeasureAlgebra::new(b.clone(), vec![int(1), frac(1, 3), int(0)]).unwrap();
        let f = SimpleElement::chi(c.algebra(), c.rectangle(Element::atom(1), Element::atom(1)));
        let r = fubini(&f, &c, &mu, &nu).unwrap();
        assert_eq!(r.joint, frac(2, 3));
        assert_eq!(r.left_outer, r.joint);
        assert_eq!(r.right_outer, r.joint);
        assert!(r.witness.is_isometric().unwrap());
    }

    #[test]
    fn stone_indicator() {
        let alg = abc();
        let stone = stone_space(&alg);
        let e = Element::from_atoms([0, 2]);
        let t = stone_transfer(&SimpleElement::chi(&alg, e), &stone).unwrap();
        assert_eq!(t, SimpleElement::chi(stone.clopens(), stone.eta(e)));
    }

    #[test]
    fn idempotents_split() {
        let alg = abc();
        let top = alg.top();
        let e = SimpleMorphism::new(top, top, SimpleElement::chi(&alg, Element::atom(1))).unwrap();
        let s = split_idempotent(&e).unwrap();
        assert_eq!(s.support, Element::atom(1));
        assert_eq!(s.section.compose(&s.retraction).unwrap(), e);
        assert_eq!(s.retraction.compose(&s.section).unwrap(), SimpleMorphism::identity(&alg, Element::atom(1)));
        let zero = SimpleMorphism::new(top, top, SimpleElement::zero(&alg)).unwrap();
        assert!(split_idempotent(&zero).unwrap().support.is_bottom());
        let two = SimpleMorphism::new(top, top, SimpleElement::chi(&alg, top).scale(&int(2))).unwrap();
        assert_eq!(split_idempotent(&two).unwrap_err(), Error::NotIdempotent);
    }
}
