//! Presheaves and precosheaves on a finite Boolean algebra, for the finite
//! topology: covers are finite partitions.
//!
//! A diagram assigns a space to every element and a structure map to every
//! pair `F ⊆ E`. Construction takes the maps on covering pairs
//! (`|E ∖ F| = 1`), composes them along chains and rejects diagrams where two
//! chains disagree. Cosheaf fibers are ℓ1-like and sheaf fibers ℓ∞-like, so
//! that the partition maps can be isometric.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::boolalg::{binary_partitions, partitions_of, BoolAlg, Element, Partition, StoneSpace};
use crate::error::{Error, Result};
use crate::finban::{coproduct_of, end, operator_norm, product_of, End, EndRelation, FinBanSpace, Flavor, HomSpace, LinMap};
use crate::linalg::Matrix;
use crate::rational::{frac, Rational};
use crate::simple::{SimpleElement, SimpleMorphism};

/// Diagrams are stored for every pair of elements, so the algebra is capped.
pub const DIAGRAM_ATOM_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Variance {
    Co,
    Contra,
}

/// Shared storage. `maps[(F, E)]` for `F ⊊ E` is `μ(F) -> μ(E)` when
/// covariant and `ξ(E) -> ξ(F)` when contravariant.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Diagram {
    algebra: BoolAlg,
    spaces: Vec<FinBanSpace>,
    maps: BTreeMap<(Element, Element), Matrix>,
    variance: Variance,
}

fn covers(e: Element) -> impl Iterator<Item = (Element, Element)> {
    e.atoms().map(move |a| (e.minus(Element::atom(a)), e))
}

impl Diagram {
    fn build(algebra: &BoolAlg, spaces: Vec<FinBanSpace>, given: Vec<(Element, Element, Matrix)>, variance: Variance) -> Result<Self> {
        algebra.ensure_enumerable(DIAGRAM_ATOM_LIMIT)?;
        if spaces.len() != 1 << algebra.n_atoms() {
            return Err(Error::DimensionMismatch(format!(
                "{} spaces for an algebra with {} elements",
                spaces.len(),
                1u64 << algebra.n_atoms()
            )));
        }
        let mut d = Diagram { algebra: algebra.clone(), spaces, maps: BTreeMap::new(), variance };
        let mut supplied = BTreeMap::new();
        for (f, e, m) in given {
            if !algebra.contains(e) || !f.is_below(e) {
                return Err(Error::InvalidModel(format!("structure map on a pair that is not F ⊆ E: {f:?}, {e:?}")));
            }
            if f == e {
                if !m.is_identity() {
                    return Err(Error::NotAFunctor("the map on E ⊆ E is not the identity".into()));
                }
                continue;
            }
            let (rows, cols) = d.shape(f, e);
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::DimensionMismatch(format!("structure map has shape {}x{}, expected {rows}x{cols}", m.rows(), m.cols())));
            }
            if supplied.insert((f, e), m).is_some() {
                return Err(Error::InvalidModel("structure map given twice".into()));
            }
        }
        let mut pairs: Vec<(Element, Element)> =
            algebra.elements().flat_map(|e| e.subelements().filter(move |f| *f != e).map(move |f| (f, e))).collect();
        pairs.sort_by_key(|(f, e)| e.minus(*f).count());
        for (f, e) in pairs {
            let gap = e.minus(f);
            let m = if gap.count() == 1 {
                match supplied.remove(&(f, e)) {
                    Some(m) => m,
                    None => {
                        let (rows, cols) = d.shape(f, e);
                        if rows * cols != 0 {
                            return Err(Error::NotAFunctor(format!(
                                "no structure map between {:?} and {:?}",
                                algebra.atom_names(f),
                                algebra.atom_names(e)
                            )));
                        }
                        Matrix::zeros(rows, cols)
                    }
                }
            } else {
                let a = Element::atom(gap.min_atom().expect("gap is nonzero"));
                let composite = d.through(f, f.join(a), e);
                if let Some(m) = supplied.remove(&(f, e)) {
                    if m != composite {
                        return Err(Error::NotAFunctor(format!(
                            "given map between {:?} and {:?} is not the composite",
                            algebra.atom_names(f),
                            algebra.atom_names(e)
                        )));
                    }
                }
                composite
            };
            d.maps.insert((f, e), m);
        }
        // every chain through any intermediate atom must agree
        for (&(f, e), m) in &d.maps {
            for a in e.minus(f).atoms() {
                let mid = f.join(Element::atom(a));
                if mid != e && d.through(f, mid, e) != *m {
                    return Err(Error::NotAFunctor(format!(
                        "two chains from {:?} to {:?} give different maps",
                        algebra.atom_names(f),
                        algebra.atom_names(e)
                    )));
                }
            }
        }
        Ok(d)
    }

    fn shape(&self, f: Element, e: Element) -> (usize, usize) {
        let (df, de) = (self.space(f).dim(), self.space(e).dim());
        match self.variance {
            Variance::Co => (de, df),
            Variance::Contra => (df, de),
        }
    }

    fn space(&self, e: Element) -> &FinBanSpace {
        &self.spaces[e.bits() as usize]
    }

    fn map(&self, f: Element, e: Element) -> Result<Matrix> {
        if !self.algebra.contains(e) || !f.is_below(e) {
            return Err(Error::InvalidModel("structure maps exist only for F ⊆ E".into()));
        }
        if f == e {
            return Ok(Matrix::identity(self.space(e).dim()));
        }
        Ok(self.maps[&(f, e)].clone())
    }

    fn through(&self, f: Element, mid: Element, e: Element) -> Matrix {
        let inner = self.map(f, mid).expect("f ⊆ mid");
        let outer = self.map(mid, e).expect("mid ⊆ e");
        match self.variance {
            Variance::Co => outer.mul(&inner),
            Variance::Contra => inner.mul(&outer),
        }
    }

    fn is_contractive(&self) -> Result<bool> {
        for (&(f, e), m) in &self.maps {
            let n = match self.variance {
                Variance::Co => operator_norm(m, self.space(f), self.space(e))?,
                Variance::Contra => operator_norm(m, self.space(e), self.space(f))?,
            };
            if n > Rational::one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Why the partition map of `p` fails to be an isometric isomorphism.
    fn partition_failure(&self, p: &Partition) -> Result<Option<String>> {
        let e = p.parent();
        let parts: Vec<FinBanSpace> = p.blocks().iter().map(|b| self.space(*b).clone()).collect();
        let legs: Vec<Matrix> = p.blocks().iter().map(|b| self.map(*b, e)).collect::<Result<_>>()?;
        let legs: Vec<&Matrix> = legs.iter().collect();
        let (map, sum, whole) = match self.variance {
            Variance::Co => {
                let sum = coproduct_of(&parts)?;
                (Matrix::hstack(&legs, self.space(e).dim()), sum.space().clone(), self.space(e).clone())
            }
            Variance::Contra => {
                let sum = product_of(&parts)?;
                (Matrix::vstack(&legs, self.space(e).dim()), sum.space().clone(), self.space(e).clone())
            }
        };
        let (source, target) = match self.variance {
            Variance::Co => (sum, whole),
            Variance::Contra => (whole, sum),
        };
        if source.dim() != target.dim() {
            return Ok(Some(format!("dimensions {} and {} differ", source.dim(), target.dim())));
        }
        let Ok(inverse) = map.inverse() else {
            return Ok(Some("the partition map is singular".into()));
        };
        let forward = operator_norm(&map, &source, &target)?;
        let backward = operator_norm(&inverse, &target, &source)?;
        if forward > Rational::one() || backward > Rational::one() {
            return Ok(Some(format!("the partition map is not isometric (norms {forward} and {backward})")));
        }
        Ok(None)
    }

    fn check_condition(&self, exhaustive: bool) -> Result<Verdict> {
        for e in self.algebra.nonzero_elements() {
            let candidates: Vec<Partition> = if exhaustive {
                partitions_of(&self.algebra, e, usize::MAX)?.filter(|p| p.len() >= 2).collect()
            } else {
                binary_partitions(e).map(|(f, g)| Partition::new(e, vec![f, g])).collect::<Result<_>>()?
            };
            for p in candidates {
                if let Some(reason) = self.partition_failure(&p)? {
                    return Ok(Verdict::Fails(Counterexample { partition: p, reason }));
                }
            }
        }
        // the empty partition of the bottom element: μ(⊥) must vanish
        let bottom = Partition::new(Element::BOTTOM, Vec::new())?;
        if let Some(reason) = self.partition_failure(&bottom)? {
            return Ok(Verdict::Fails(Counterexample { partition: bottom, reason }));
        }
        Ok(Verdict::Holds)
    }
}

/// A precosheaf: `E ↦ μ(E)` with extensions `μ_{F,E}: μ(F) -> μ(E)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreCosheaf(Diagram);

/// A presheaf: `E ↦ ξ(E)` with restrictions `p_{E,F}: ξ(E) -> ξ(F)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreSheaf(Diagram);

impl PreCosheaf {
    /// `spaces` is indexed by element bits; `maps` holds `(F, E, μ_{F,E})`
    /// for at least every covering pair with nonzero fibers.
    pub fn new(algebra: &BoolAlg, spaces: Vec<FinBanSpace>, maps: Vec<(Element, Element, Matrix)>) -> Result<Self> {
        if let Some(s) = spaces.iter().find(|s| !s.is_sum_like()) {
            return Err(Error::FlavorMismatch(format!("cosheaf fiber of flavor {:?}", s.flavor())));
        }
        Ok(PreCosheaf(Diagram::build(algebra, spaces, maps, Variance::Co)?))
    }

    /// Builds from a fiber function and the extension on covering pairs.
    pub fn from_fn(
        algebra: &BoolAlg,
        space: impl Fn(Element) -> FinBanSpace,
        extension: impl Fn(Element, Element) -> Matrix,
    ) -> Result<Self> {
        let spaces = algebra.elements().map(&space).collect();
        let maps = algebra.elements().flat_map(covers).map(|(f, e)| (f, e, extension(f, e))).collect();
        PreCosheaf::new(algebra, spaces, maps)
    }

    pub fn zero(algebra: &BoolAlg) -> Result<Self> {
        PreCosheaf::from_fn(algebra, |_| FinBanSpace::zero(), |_, _| Matrix::zeros(0, 0))
    }

    /// `E ↦ B` with identity extensions, including at the bottom element.
    pub fn constant(algebra: &BoolAlg, b: &FinBanSpace) -> Result<Self> {
        PreCosheaf::from_fn(algebra, |_| b.clone(), |_, _| Matrix::identity(b.dim()))
    }

    pub fn algebra(&self) -> &BoolAlg {
        &self.0.algebra
    }

    pub fn space(&self, e: Element) -> &FinBanSpace {
        self.0.space(e)
    }

    /// `μ_{F,E}` for `F ⊆ E`.
    pub fn extension(&self, f: Element, e: Element) -> Result<Matrix> {
        self.0.map(f, e)
    }

    pub fn extension_map(&self, f: Element, e: Element) -> Result<LinMap> {
        LinMap::new(self.space(f).clone(), self.space(e).clone(), self.extension(f, e)?)
    }

    pub fn is_contractive(&self) -> Result<bool> {
        self.0.is_contractive()
    }
}

impl PreSheaf {
    /// `spaces` is indexed by element bits; `maps` holds `(F, E, p_{E,F})`.
    pub fn new(algebra: &BoolAlg, spaces: Vec<FinBanSpace>, maps: Vec<(Element, Element, Matrix)>) -> Result<Self> {
        if let Some(s) = spaces.iter().find(|s| !s.is_sup_like()) {
            return Err(Error::FlavorMismatch(format!("sheaf fiber of flavor {:?}", s.flavor())));
        }
        Ok(PreSheaf(Diagram::build(algebra, spaces, maps, Variance::Contra)?))
    }

    /// Builds from a fiber function and `restriction(E, F)` on covering
    /// pairs `F ⊂ E`.
    pub fn from_fn(
        algebra: &BoolAlg,
        space: impl Fn(Element) -> FinBanSpace,
        restriction: impl Fn(Element, Element) -> Matrix,
    ) -> Result<Self> {
        let spaces = algebra.elements().map(&space).collect();
        let maps = algebra.elements().flat_map(covers).map(|(f, e)| (f, e, restriction(e, f))).collect();
        PreSheaf::new(algebra, spaces, maps)
    }

    pub fn zero(algebra: &BoolAlg) -> Result<Self> {
        PreSheaf::from_fn(algebra, |_| FinBanSpace::zero(), |_, _| Matrix::zeros(0, 0))
    }

    pub fn algebra(&self) -> &BoolAlg {
        &self.0.algebra
    }

    pub fn space(&self, e: Element) -> &FinBanSpace {
        self.0.space(e)
    }

    /// `p_{E,F}` for `F ⊆ E`.
    pub fn restriction(&self, e: Element, f: Element) -> Result<Matrix> {
        self.0.map(f, e)
    }

    pub fn restriction_map(&self, e: Element, f: Element) -> Result<LinMap> {
        LinMap::new(self.space(e).clone(), self.space(f).clone(), self.restriction(e, f)?)
    }

    pub fn is_contractive(&self) -> Result<bool> {
        self.0.is_contractive()
    }
}

/// A partition whose comparison map is not an isometric isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub partition: Partition,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Counterexample),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(c) => Some(c),
        }
    }
}

/// Checks that `ε: ⊕_F μ(F) -> μ(E)` is an isometric isomorphism for the
/// empty partition of the bottom element and every binary partition, or
/// every partition with `exhaustive`. Binary partitions suffice by induction
/// on the number of blocks; the exhaustive mode checks that argument.
pub fn is_cosheaf(mu: &PreCosheaf, exhaustive: bool) -> Result<Verdict> {
    mu.0.check_condition(exhaustive)
}

/// The dual check: `ξ(E) -> Π_F ξ(F)` is an isometric isomorphism onto the
/// ℓ∞-product.
pub fn is_sheaf(xi: &PreSheaf, exhaustive: bool) -> Result<Verdict> {
    xi.0.check_condition(exhaustive)
}

/// A precosheaf known to satisfy the cosheaf condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cosheaf {
    pre: PreCosheaf,
}

impl Cosheaf {
    pub fn new(pre: PreCosheaf) -> Result<Self> {
        match is_cosheaf(&pre, false)? {
            Verdict::Holds => Ok(Cosheaf { pre }),
            Verdict::Fails(c) => Err(Error::NotACosheaf(format!(
                "partition {:?} of {:?}: {}",
                c.partition.blocks().iter().map(|b| pre.algebra().atom_names(*b)).collect::<Vec<_>>(),
                pre.algebra().atom_names(c.partition.parent()),
                c.reason
            ))),
        }
    }

    pub fn precosheaf(&self) -> &PreCosheaf {
        &self.pre
    }

    pub fn algebra(&self) -> &BoolAlg {
        self.pre.algebra()
    }

    pub fn space(&self, e: Element) -> &FinBanSpace {
        self.pre.space(e)
    }

    /// The projection `p_{E,F}: μ(E) -> μ(F)` for `F ⊆ E`, the unique map
    /// with `p μ_{F,E} = id` and `p μ_{E∖F,E} = 0`.
    pub fn projection(&self, e: Element, f: Element) -> Result<Matrix> {
        let rest = e.minus(f);
        let (df, dr) = (self.space(f).dim(), self.space(rest).dim());
        let eps = Matrix::hstack(&[&self.pre.extension(f, e)?, &self.pre.extension(rest, e)?], self.space(e).dim());
        // p ε = [I | 0], solved as εᵀ pᵀ = [I | 0]ᵀ
        let rhs = Matrix::from_fn(df + dr, df, |i, j| if i == j { Rational::one() } else { Rational::zero() });
        Ok(eps.transpose().solve(&rhs)?.transpose())
    }
}

/// The spectral measure `E ↦ P_E = μ_{E,⊤} p_{⊤,E}` on `μ(⊤)`.
#[derive(Debug, Clone)]
pub struct SpectralData {
    algebra: BoolAlg,
    carrier: FinBanSpace,
    projections: Vec<Matrix>,
}

pub fn spectral_measure(mu: &Cosheaf) -> Result<SpectralData> {
    let alg = mu.algebra();
    let top = alg.top();
    let projections =
        alg.elements().map(|e| Ok(mu.pre.extension(e, top)?.mul(&mu.projection(top, e)?))).collect::<Result<_>>()?;
    Ok(SpectralData { algebra: alg.clone(), carrier: mu.space(top).clone(), projections })
}

impl SpectralData {
    pub fn carrier(&self) -> &FinBanSpace {
        &self.carrier
    }

    pub fn projection(&self, e: Element) -> &Matrix {
        &self.projections[e.bits() as usize]
    }

    pub fn projection_map(&self, e: Element) -> LinMap {
        LinMap::new(self.carrier.clone(), self.carrier.clone(), self.projection(e).clone()).expect("square by construction")
    }

    /// Join of the atoms whose projection is nonzero.
    pub fn support(&self) -> Element {
        Element::from_atoms((0..self.algebra.n_atoms()).filter(|&a| !self.projection(Element::atom(a)).is_zero()))
    }

    /// `f ↦ Σ kₙ P_{Eₙ}` over the canonical blocks of `f`.
    pub fn action(&self, f: &SimpleElement) -> Result<LinMap> {
        if f.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let n = self.carrier.dim();
        let m = f.blocks().iter().fold(Matrix::zeros(n, n), |acc, (e, k)| acc.add(&self.projection(*e).scale(k)));
        LinMap::new(self.carrier.clone(), self.carrier.clone(), m)
    }

    /// The first violated law, checked over all elements and pairs.
    pub fn law_violation(&self) -> Option<String> {
        if !self.projection(self.algebra.top()).is_identity() {
            return Some("P_⊤ is not the identity".into());
        }
        if !self.projection(Element::BOTTOM).is_zero() {
            return Some("P_⊥ is not zero".into());
        }
        for e in self.algebra.elements() {
            let pe = self.projection(e);
            if pe.mul(pe) != *pe {
                return Some(format!("P{:?} is not idempotent", self.algebra.atom_names(e)));
            }
            for f in self.algebra.elements() {
                let pf = self.projection(f);
                if *self.projection(e.meet(f)) != pe.mul(pf) {
                    return Some(format!("P of the meet of {:?} and {:?} is not the product", e, f));
                }
                if e.is_disjoint(f) && *self.projection(e.join(f)) != pe.add(pf) {
                    return Some(format!("P of the disjoint join of {:?} and {:?} is not the sum", e, f));
                }
            }
        }
        None
    }
}

/// `∫f dμ = Σ kₙ μ_{Eₙ,F} p_{E,Eₙ}: μ(E) -> μ(F)`.
pub fn integrate_simple_morphism(f: &SimpleMorphism, mu: &Cosheaf) -> Result<LinMap> {
    if f.function().algebra() != mu.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let (e, target) = (f.source(), f.target());
    let mut m = Matrix::zeros(mu.space(target).dim(), mu.space(e).dim());
    for (block, k) in f.function().blocks() {
        let piece = mu.pre.extension(block, target)?.mul(&mu.projection(e, block)?);
        m = m.add(&piece.scale(&k));
    }
    LinMap::new(mu.space(e).clone(), mu.space(target).clone(), m)
}

/// `χ(E)`: `F ↦ L∞` on the atoms below `E ∧ F`, restricting by coordinates.
pub fn characteristic_sheaf(algebra: &BoolAlg, e: Element) -> Result<PreSheaf> {
    let fiber = |f: Element| {
        let g = e.meet(f);
        let labels = algebra.atom_names(g).into_iter().map(String::from).collect();
        FinBanSpace::linf(g.count()).with_labels(labels).expect("one label per atom")
    };
    PreSheaf::from_fn(algebra, fiber, |big, small| coordinate_projection(e.meet(big), e.meet(small)))
}

/// The 0/1 matrix keeping the coordinates of the atoms of `small` among
/// those of `big`.
fn coordinate_projection(big: Element, small: Element) -> Matrix {
    let cols: Vec<usize> = big.atoms().collect();
    let rows: Vec<usize> = small.atoms().collect();
    Matrix::from_fn(rows.len(), cols.len(), |i, j| if rows[i] == cols[j] { Rational::one() } else { Rational::zero() })
}

/// Natural transformations between two diagrams of the same variance, as the
/// end of the component hom spaces cut out by the naturality squares on
/// covering pairs.
#[derive(Debug, Clone)]
pub struct NatSpace {
    algebra: BoolAlg,
    homs: Vec<HomSpace>,
    end: End,
}

fn nat_space(source: &Diagram, target: &Diagram) -> Result<NatSpace> {
    if source.algebra != target.algebra {
        return Err(Error::AlgebraMismatch);
    }
    let alg = &source.algebra;
    let homs: Vec<HomSpace> =
        alg.elements().map(|e| HomSpace::new(source.space(e), target.space(e))).collect::<Result<_>>()?;
    let mut relations = Vec::new();
    for (f, e) in alg.elements().flat_map(covers) {
        let (s, t) = (source.map(f, e)?, target.map(f, e)?);
        let (fi, ei) = (f.bits() as usize, e.bits() as usize);
        let relation = match source.variance {
            // t α_F = α_E s in Hom(μ(F), ν(E))
            Variance::Co => EndRelation {
                from: fi,
                to: ei,
                left: HomSpace::conjugation_matrix(&Matrix::identity(source.space(f).dim()), &t),
                right: HomSpace::conjugation_matrix(&s, &Matrix::identity(target.space(e).dim())),
            },
            // t α_E = α_F s in Hom(ξ(E), ζ(F))
            Variance::Contra => EndRelation {
                from: ei,
                to: fi,
                left: HomSpace::conjugation_matrix(&Matrix::identity(source.space(e).dim()), &t),
                right: HomSpace::conjugation_matrix(&s, &Matrix::identity(target.space(f).dim())),
            },
        };
        relations.push(relation);
    }
    let diagonal: Vec<FinBanSpace> = homs.iter().map(|h| h.space().clone()).collect();
    Ok(NatSpace { algebra: alg.clone(), homs, end: end(&diagonal, &relations)? })
}

impl NatSpace {
    pub fn dim(&self) -> usize {
        self.end.dim()
    }

    pub fn end(&self) -> &End {
        &self.end
    }

    /// Components `α_E`, indexed by element bits, of the transformation with
    /// the given coordinates.
    pub fn transformation(&self, coords: &[Rational]) -> Vec<Matrix> {
        self.algebra
            .elements()
            .map(|e| {
                let k = e.bits() as usize;
                self.homs[k].unvectorize(&self.end.component(k).mul_vec(coords))
            })
            .collect()
    }

    pub fn basis_transformation(&self, k: usize) -> Vec<Matrix> {
        let mut coords = vec![Rational::zero(); self.dim()];
        coords[k] = Rational::one();
        self.transformation(&coords)
    }

    /// Coordinates of a family of components, or `NotAFunctor` when the
    /// family is not natural.
    pub fn coordinates(&self, components: &[Matrix]) -> Result<Vec<Rational>> {
        let v: Vec<Rational> = components.iter().zip(&self.homs).flat_map(|(m, h)| h.vectorize(m)).collect();
        self.end.subspace().coordinates(&v).map_err(|_| Error::NotAFunctor("components are not natural".into()))
    }
}

/// Natural transformations `ξ => ζ` between presheaves.
pub fn sheaf_hom(xi: &PreSheaf, zeta: &PreSheaf) -> Result<NatSpace> {
    nat_space(&xi.0, &zeta.0)
}

/// Natural transformations `μ => ν` between precosheaves.
pub fn cosheaf_hom(mu: &PreCosheaf, nu: &PreCosheaf) -> Result<NatSpace> {
    nat_space(&mu.0, &nu.0)
}

/// `Hom(χ(E), χ(F))` presented as `L∞(E ∧ F)`: the map sending a function
/// `c` on the atoms of `E ∧ F` to the transformation acting by `c` on every
/// component, as a matrix into natural-transformation coordinates.
pub fn characteristic_hom_presentation(algebra: &BoolAlg, e: Element, f: Element) -> Result<(FinBanSpace, NatSpace, Matrix)> {
    let hom = sheaf_hom(&characteristic_sheaf(algebra, e)?, &characteristic_sheaf(algebra, f)?)?;
    let g = e.meet(f);
    let atoms: Vec<usize> = g.atoms().collect();
    let mut columns = Vec::with_capacity(atoms.len());
    for &a in &atoms {
        let components: Vec<Matrix> = algebra
            .elements()
            .map(|h| {
                let (src, dst) = (e.meet(h), f.meet(h));
                let (cols, rows): (Vec<usize>, Vec<usize>) = (src.atoms().collect(), dst.atoms().collect());
                Matrix::from_fn(rows.len(), cols.len(), |i, j| {
                    if rows[i] == a && cols[j] == a { Rational::one() } else { Rational::zero() }
                })
            })
            .collect();
        columns.push(hom.coordinates(&components)?);
    }
    let linf = FinBanSpace::linf(atoms.len());
    let m = Matrix::from_columns(hom.dim(), &columns);
    Ok((linf, hom, m))
}

/// Result of [`cosheafify`].
#[derive(Debug, Clone)]
pub struct Cosheafification {
    pub cosheaf: PreCosheaf,
    /// `ε_E: ⊕_{a ≤ E} θ(a) -> θ(E)`, indexed by element bits.
    pub counit: Vec<Matrix>,
}

/// `E ↦ ⊕_{a ≤ E} V_a` with block inclusions, for one space per atom.
pub fn atomic_cosheaf(algebra: &BoolAlg, atom_fibers: &[FinBanSpace]) -> Result<PreCosheaf> {
    if atom_fibers.len() != algebra.n_atoms() {
        return Err(Error::DimensionMismatch(format!("{} fibers for {} atoms", atom_fibers.len(), algebra.n_atoms())));
    }
    let fiber = |e: Element| -> Result<FinBanSpace> {
        let parts: Vec<FinBanSpace> = e.atoms().map(|a| atom_fibers[a].prefixed(&algebra.atoms()[a])).collect();
        let sum = coproduct_of(&parts)?;
        let labels = (0..sum.space().dim()).map(|i| strip_index(&sum.space().labels()[i])).collect();
        sum.space().clone().with_labels(labels)
    };
    let spaces: Vec<FinBanSpace> = algebra.elements().map(fiber).collect::<Result<_>>()?;
    let offset = |e: Element, a: usize| e.atoms().take_while(|&b| b < a).map(|b| atom_fibers[b].dim()).sum::<usize>();
    let inclusion = |f: Element, e: Element| {
        let mut m = Matrix::zeros(spaces[e.bits() as usize].dim(), spaces[f.bits() as usize].dim());
        for a in f.atoms() {
            let (from, to) = (offset(f, a), offset(e, a));
            for i in 0..atom_fibers[a].dim() {
                m[(to + i, from + i)] = Rational::one();
            }
        }
        m
    };
    let maps = algebra.elements().flat_map(covers).map(|(f, e)| (f, e, inclusion(f, e))).collect();
    PreCosheaf::new(algebra, spaces, maps)
}

/// Drops the `k:` prefix added by direct sums.
fn strip_index(label: &str) -> String {
    label.split_once(':').map_or(label, |(_, rest)| rest).to_string()
}

/// The fibers of a precosheaf at the atoms.
pub fn atom_data(mu: &PreCosheaf) -> Vec<FinBanSpace> {
    (0..mu.algebra().n_atoms()).map(|a| mu.space(Element::atom(a)).clone()).collect()
}

/// The coreflection into cosheaves. The atomic partition refines every
/// other, so the limit over partitions is the sum over atoms.
pub fn cosheafify(theta: &PreCosheaf) -> Result<Cosheafification> {
    let alg = theta.algebra();
    let cosheaf = atomic_cosheaf(alg, &atom_data(theta))?;
    let counit = alg
        .elements()
        .map(|e| {
            let legs: Vec<Matrix> = e.atoms().map(|a| theta.extension(Element::atom(a), e)).collect::<Result<_>>()?;
            Ok(Matrix::hstack(&legs.iter().collect::<Vec<_>>(), theta.space(e).dim()))
        })
        .collect::<Result<_>>()?;
    Ok(Cosheafification { cosheaf, counit })
}

impl Cosheafification {
    /// Whether every `ε_E` is an isometric isomorphism.
    pub fn counit_is_isometric_iso(&self, theta: &PreCosheaf) -> Result<bool> {
        for e in theta.algebra().elements() {
            let k = e.bits() as usize;
            let (src, dst) = (self.cosheaf.space(e), theta.space(e));
            let Ok(inv) = self.counit[k].inverse() else { return Ok(false) };
            if operator_norm(&self.counit[k], src, dst)? > Rational::one() || operator_norm(&inv, dst, src)? > Rational::one() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A natural transformation between precosheaves, validated on construction.
#[derive(Debug, Clone)]
pub struct PreCosheafMap {
    source: PreCosheaf,
    target: PreCosheaf,
    components: Vec<Matrix>,
}

impl PreCosheafMap {
    pub fn new(source: &PreCosheaf, target: &PreCosheaf, components: Vec<Matrix>) -> Result<Self> {
        if source.algebra() != target.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        let alg = source.algebra();
        if components.len() != 1 << alg.n_atoms() {
            return Err(Error::DimensionMismatch("one component per element".into()));
        }
        for e in alg.elements() {
            let c = &components[e.bits() as usize];
            if c.rows() != target.space(e).dim() || c.cols() != source.space(e).dim() {
                return Err(Error::DimensionMismatch("component has the wrong shape".into()));
            }
        }
        for (f, e) in alg.elements().flat_map(covers) {
            let left = target.extension(f, e)?.mul(&components[f.bits() as usize]);
            let right = components[e.bits() as usize].mul(&source.extension(f, e)?);
            if left != right {
                return Err(Error::NotAFunctor(format!(
                    "naturality fails on {:?} ⊆ {:?}",
                    alg.atom_names(f),
                    alg.atom_names(e)
                )));
            }
        }
        Ok(PreCosheafMap { source: source.clone(), target: target.clone(), components })
    }

    pub fn source(&self) -> &PreCosheaf {
        &self.source
    }

    pub fn target(&self) -> &PreCosheaf {
        &self.target
    }

    pub fn component(&self, e: Element) -> &Matrix {
        &self.components[e.bits() as usize]
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }
}

/// The factorization `ν -> cosheafify(θ)` of a map `φ: ν -> θ` out of a
/// cosheaf, and whether it is the only one.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub map: PreCosheafMap,
    pub unique: bool,
}

/// `φ̃_E = (φ_a p_{E,a})_{a ≤ E}`. Uniqueness is decided by solving for
/// every transformation `ψ: ν -> cosheafify(θ)` and checking that
/// `ψ ↦ ε ψ` is injective.
pub fn factor_through_cosheafification(nu: &Cosheaf, theta: &PreCosheaf, phi: &PreCosheafMap) -> Result<Factorization> {
    if phi.source() != nu.precosheaf() || phi.target() != theta {
        return Err(Error::DimensionMismatch("φ does not go from ν to θ".into()));
    }
    let alg = theta.algebra();
    let c = cosheafify(theta)?;
    let components: Vec<Matrix> = alg
        .elements()
        .map(|e| {
            let rows: Vec<Matrix> =
                e.atoms().map(|a| Ok(phi.component(Element::atom(a)).mul(&nu.projection(e, Element::atom(a))?))).collect::<Result<_>>()?;
            Ok(Matrix::vstack(&rows.iter().collect::<Vec<_>>(), nu.space(e).dim()))
        })
        .collect::<Result<_>>()?;
    let map = PreCosheafMap::new(nu.precosheaf(), &c.cosheaf, components)?;
    for e in alg.elements() {
        if c.counit[e.bits() as usize].mul(map.component(e)) != *phi.component(e) {
            return Err(Error::NotAFunctor("the factorization does not close the triangle".into()));
        }
    }
    let nat = cosheaf_hom(nu.precosheaf(), &c.cosheaf)?;
    let images: Vec<Vec<Rational>> = (0..nat.dim())
        .map(|k| {
            nat.basis_transformation(k)
                .iter()
                .zip(&c.counit)
                .flat_map(|(psi, eps)| {
                    let m = eps.mul(psi);
                    (0..m.cols()).flat_map(move |j| m.column(j)).collect::<Vec<_>>()
                })
                .collect()
        })
        .collect();
    let len = images.first().map_or(0, Vec::len);
    let unique = Matrix::from_columns(len, &images).rank() == nat.dim();
    Ok(Factorization { map, unique })
}

/// `bva(E, B)`: `B`-valued measures on the ideal below `E`, stored by their
/// atom values. The variation norm of such a measure is the weighted ℓ1 norm
/// of the stacked values.
pub fn bva_cosheaf(algebra: &BoolAlg, b: &FinBanSpace) -> Result<PreCosheaf> {
    if !b.is_sum_like() {
        return Err(Error::FlavorMismatch("bounded-variation measures need an ℓ1-like target".into()));
    }
    atomic_cosheaf(algebra, &vec![b.clone(); algebra.n_atoms()])
}

/// Evaluation at the top of the ideal: `bva(E, B) -> B`, `ν ↦ ν(E)`.
pub fn total_value(e: Element, b: &FinBanSpace) -> Matrix {
    let blocks: Vec<Matrix> = e.atoms().map(|_| Matrix::identity(b.dim())).collect();
    Matrix::hstack(&blocks.iter().collect::<Vec<_>>(), b.dim())
}

/// The map `θ -> bva(-, B)` induced by a transformation `τ: θ -> B` into the
/// constant precosheaf: `m ∈ θ(E)` goes to the measure `F ↦ τ_F(p_{E,F} m)`.
pub fn constant_universal_map(theta: &Cosheaf, b: &FinBanSpace, tau: &[Matrix]) -> Result<PreCosheafMap> {
    let alg = theta.algebra();
    let constant = PreCosheaf::constant(alg, b)?;
    PreCosheafMap::new(theta.precosheaf(), &constant, tau.to_vec())?;
    let bva = bva_cosheaf(alg, b)?;
    let components: Vec<Matrix> = alg
        .elements()
        .map(|e| {
            let rows: Vec<Matrix> = e
                .atoms()
                .map(|a| Ok(tau[Element::atom(a).bits() as usize].mul(&theta.projection(e, Element::atom(a))?)))
                .collect::<Result<_>>()?;
            Ok(Matrix::vstack(&rows.iter().collect::<Vec<_>>(), theta.space(e).dim()))
        })
        .collect::<Result<_>>()?;
    PreCosheafMap::new(theta.precosheaf(), &bva, components)
}

/// The presheaf `Hom(-, a)`: scalars below `a`, zero elsewhere.
pub fn yoneda_presheaf(algebra: &BoolAlg, a: Element) -> Result<PreSheaf> {
    PreSheaf::from_fn(
        algebra,
        |e| if e.is_below(a) { FinBanSpace::linf(1) } else { FinBanSpace::zero() },
        |big, small| {
            let (r, c) = (usize::from(small.is_below(a)), usize::from(big.is_below(a)));
            Matrix::from_fn(r, c, |_, _| Rational::one())
        },
    )
}

/// The precosheaf `Hom(a, -)`: scalars above `a`, zero elsewhere.
pub fn yoneda_precosheaf(algebra: &BoolAlg, a: Element) -> Result<PreCosheaf> {
    PreCosheaf::from_fn(
        algebra,
        |e| if a.is_below(e) { FinBanSpace::l1(1) } else { FinBanSpace::zero() },
        |small, big| {
            let (r, c) = (usize::from(a.is_below(big)), usize::from(a.is_below(small)));
            Matrix::from_fn(r, c, |_, _| Rational::one())
        },
    )
}

/// One side of Isbell conjugation: the conjugate diagram together with the
/// natural-transformation space presenting each fiber.
#[derive(Debug, Clone)]
pub struct Conjugate<D> {
    pub diagram: D,
    pub fibers: Vec<NatSpace>,
}

/// `Lξ(a) = Hom(ξ, Hom(-, a))`. Fibers carry unit-weight ℓ1 norms on the
/// solved basis; only the linear structure is canonical here.
pub fn isbell(xi: &PreSheaf) -> Result<Conjugate<PreCosheaf>> {
    let alg = xi.algebra();
    let fibers: Vec<NatSpace> = alg.elements().map(|a| sheaf_hom(xi, &yoneda_presheaf(alg, a)?)).collect::<Result<_>>()?;
    // a ⊆ b acts by postcomposing with Hom(-, a) -> Hom(-, b)
    let push = |a: Element, b: Element| -> Result<Matrix> {
        let (src, dst) = (&fibers[a.bits() as usize], &fibers[b.bits() as usize]);
        let cols: Vec<Vec<Rational>> = (0..src.dim())
            .map(|k| {
                let alpha = src.basis_transformation(k);
                let moved: Vec<Matrix> = alg
                    .elements()
                    .map(|e| {
                        let m = &alpha[e.bits() as usize];
                        if e.is_below(b) && !e.is_below(a) { Matrix::zeros(1, m.cols()) } else { m.clone() }
                    })
                    .collect();
                dst.coordinates(&moved)
            })
            .collect::<Result<_>>()?;
        Ok(Matrix::from_columns(dst.dim(), &cols))
    };
    let spaces = fibers.iter().map(|n| FinBanSpace::l1(n.dim())).collect();
    let maps = alg.elements().flat_map(covers).map(|(f, e)| Ok((f, e, push(f, e)?))).collect::<Result<_>>()?;
    Ok(Conjugate { diagram: PreCosheaf::new(alg, spaces, maps)?, fibers })
}

/// `Rμ(a) = Hom(μ, Hom(a, -))`, with unit-weight ℓ∞ norms on the solved
/// basis.
pub fn isbell_adjoint(mu: &PreCosheaf) -> Result<Conjugate<PreSheaf>> {
    let alg = mu.algebra();
    let fibers: Vec<NatSpace> = alg.elements().map(|a| cosheaf_hom(mu, &yoneda_precosheaf(alg, a)?)).collect::<Result<_>>()?;
    // f ⊆ e acts by postcomposing with Hom(e, -) -> Hom(f, -)
    let pull = |e: Element, f: Element| -> Result<Matrix> {
        let (src, dst) = (&fibers[e.bits() as usize], &fibers[f.bits() as usize]);
        let cols: Vec<Vec<Rational>> = (0..src.dim())
            .map(|k| {
                let alpha = src.basis_transformation(k);
                let moved: Vec<Matrix> = alg
                    .elements()
                    .map(|g| {
                        let m = &alpha[g.bits() as usize];
                        if f.is_below(g) && !e.is_below(g) { Matrix::zeros(1, m.cols()) } else { m.clone() }
                    })
                    .collect();
                dst.coordinates(&moved)
            })
            .collect::<Result<_>>()?;
        Ok(Matrix::from_columns(dst.dim(), &cols))
    };
    let spaces = fibers.iter().map(|n| FinBanSpace::linf(n.dim())).collect();
    let maps = alg.elements().flat_map(covers).map(|(f, e)| Ok((f, e, pull(e, f)?))).collect::<Result<_>>()?;
    Ok(Conjugate { diagram: PreSheaf::new(alg, spaces, maps)?, fibers })
}

/// The transposition `Hom(ξ, Rμ) -> Hom(μ, Lξ)` of the Isbell adjunction, as
/// a matrix between natural-transformation coordinates. Both sides encode
/// pairings `ξ(E) × μ(G) -> K` for `E ⊆ G`; a transformation on the left is
/// read off as such a pairing and re-curried the other way. Fails with
/// `NotAFunctor` if the re-curried family is not natural.
pub fn isbell_transposition(xi: &PreSheaf, mu: &PreCosheaf) -> Result<(NatSpace, NatSpace, Matrix)> {
    let alg = xi.algebra();
    let l = isbell(xi)?;
    let r = isbell_adjoint(mu)?;
    let left = sheaf_hom(xi, &r.diagram)?;
    let right = cosheaf_hom(mu, &l.diagram)?;
    let mut columns = Vec::with_capacity(left.dim());
    for k in 0..left.dim() {
        let psi = left.basis_transformation(k);
        // pairing[E][G] is a dim μ(G) x dim ξ(E) matrix
        let pairing = |e: Element, g: Element| -> Matrix {
            let fiber = &r.fibers[e.bits() as usize];
            let psi_e = &psi[e.bits() as usize];
            let rows: Vec<Vec<Rational>> = (0..psi_e.cols())
                .map(|x| {
                    let gamma = fiber.transformation(&psi_e.column(x));
                    let comp = &gamma[g.bits() as usize];
                    if comp.rows() == 0 { vec![Rational::zero(); mu.space(g).dim()] } else { comp.row(0).to_vec() }
                })
                .collect();
            Matrix::from_columns(mu.space(g).dim(), &rows)
        };
        let mut phi = Vec::with_capacity(1 << alg.n_atoms());
        for g in alg.elements() {
            let fiber = &l.fibers[g.bits() as usize];
            let cols: Vec<Vec<Rational>> = (0..mu.space(g).dim())
                .map(|m| {
                    let comps: Vec<Matrix> = alg
                        .elements()
                        .map(|e| {
                            if e.is_below(g) {
                                Matrix::from_rows(xi.space(e).dim(), vec![pairing(e, g).transpose().column(m)]).expect("row length")
                            } else {
                                Matrix::zeros(0, xi.space(e).dim())
                            }
                        })
                        .collect();
                    fiber.coordinates(&comps)
                })
                .collect::<Result<_>>()?;
            phi.push(Matrix::from_columns(fiber.dim(), &cols));
        }
        columns.push(right.coordinates(&phi)?);
    }
    let m = Matrix::from_columns(right.dim(), &columns);
    Ok((left, right, m))
}

/// The sheaf on the clopens of the Stone space with `ξ'(U) = ξ(η⁻¹ U)`.
pub fn sheaf_to_stone(xi: &PreSheaf, stone: &StoneSpace) -> Result<PreSheaf> {
    if stone.algebra() != xi.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let back = |u: Element| stone.eta_inverse(u);
    PreSheaf::from_fn(stone.clopens(), |u| xi.space(back(u)).clone(), |u, v| {
        xi.restriction(back(u), back(v)).expect("η⁻¹ preserves order")
    })
}

/// The inverse transfer, `ξ(E) = ξ'(η E)`.
pub fn sheaf_from_stone(xi: &PreSheaf, stone: &StoneSpace) -> Result<PreSheaf> {
    if stone.clopens() != xi.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let there = |e: Element| stone.eta(e);
    PreSheaf::from_fn(stone.algebra(), |e| xi.space(there(e)).clone(), |e, f| {
        xi.restriction(there(e), there(f)).expect("η preserves order")
    })
}

/// `E ↦ Π_{a ≤ E} V_a` with coordinate projections: the sheaf on a finite
/// discrete space with the given stalks.
pub fn sheaf_from_stalks(algebra: &BoolAlg, stalks: &[FinBanSpace]) -> Result<PreSheaf> {
    if stalks.len() != algebra.n_atoms() {
        return Err(Error::DimensionMismatch(format!("{} stalks for {} atoms", stalks.len(), algebra.n_atoms())));
    }
    let fiber = |e: Element| -> Result<FinBanSpace> {
        let parts: Vec<FinBanSpace> = e.atoms().map(|a| stalks[a].clone()).collect();
        let p = product_of(&parts)?;
        // products of ℓ∞-like stalks are ℓ∞-like
        FinBanSpace::new(p.space().labels().to_vec(), p.space().weights().to_vec(), Flavor::Sup)
    };
    let spaces: Vec<FinBanSpace> = algebra.elements().map(fiber).collect::<Result<_>>()?;
    let offset = |e: Element, a: usize| e.atoms().take_while(|&b| b < a).map(|b| stalks[b].dim()).sum::<usize>();
    let projection = |e: Element, f: Element| {
        let mut m = Matrix::zeros(spaces[f.bits() as usize].dim(), spaces[e.bits() as usize].dim());
        for a in f.atoms() {
            for i in 0..stalks[a].dim() {
                m[(offset(f, a) + i, offset(e, a) + i)] = Rational::one();
            }
        }
        m
    };
    let maps = algebra.elements().flat_map(covers).map(|(f, e)| (f, e, projection(e, f))).collect();
    PreSheaf::new(algebra, spaces, maps)
}

/// Stalks of a presheaf: its fibers at the atoms.
pub fn stalks(xi: &PreSheaf) -> Vec<FinBanSpace> {
    (0..xi.algebra().n_atoms()).map(|a| xi.space(Element::atom(a)).clone()).collect()
}

/// The comparison `ξ(E) -> Π_{a ≤ E} ξ(a)`, indexed by element bits.
pub fn stalk_comparison(xi: &PreSheaf) -> Result<Vec<Matrix>> {
    xi.algebra()
        .elements()
        .map(|e| {
            let legs: Vec<Matrix> = e.atoms().map(|a| xi.restriction(e, Element::atom(a))).collect::<Result<_>>()?;
            Ok(Matrix::vstack(&legs.iter().collect::<Vec<_>>(), xi.space(e).dim()))
        })
        .collect()
}

/// Families of random precosheaves used by the property checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomKind {
    /// `E ↦ B` with identity maps; never a cosheaf on two or more atoms.
    Constant,
    /// An ℓ1 cosheaf with every fiber re-based by a random signed,
    /// rescaled permutation; always a cosheaf.
    ScrambledL1,
    /// A scrambled ℓ1 cosheaf with `μ_{F,E}` multiplied by `λ^{|E∖F|}` for a
    /// random `λ ∈ (0, 1]`; a cosheaf exactly when `λ = 1` or all fibers
    /// vanish.
    Scaled,
}

fn random_space<R: Rng>(rng: &mut R, dim: usize) -> FinBanSpace {
    crate::random::space(rng, dim, true)
}

/// A random precosheaf of the given kind with fiber dims at most `max_dim`
/// per atom (or overall, for constants).
pub fn random_precosheaf<R: Rng>(rng: &mut R, algebra: &BoolAlg, kind: RandomKind, max_dim: usize) -> Result<PreCosheaf> {
    match kind {
        RandomKind::Constant => {
            let dim = rng.random_range(1..=max_dim.max(1));
            PreCosheaf::constant(algebra, &random_space(rng, dim))
        }
        RandomKind::ScrambledL1 => scrambled(rng, algebra, max_dim, &Rational::one()),
        RandomKind::Scaled => {
            let lambda = if rng.random_bool(0.25) { Rational::one() } else { frac(rng.random_range(1..=3), 4) };
            scrambled(rng, algebra, max_dim, &lambda)
        }
    }
}

fn scrambled<R: Rng>(rng: &mut R, algebra: &BoolAlg, max_dim: usize, lambda: &Rational) -> Result<PreCosheaf> {
    let atoms: Vec<FinBanSpace> = (0..algebra.n_atoms()).map(|_| {
        let d = rng.random_range(0..=max_dim);
        random_space(rng, d)
    }).collect();
    let canonical = atomic_cosheaf(algebra, &atoms)?;
    // per element: new basis vector k is s_k c_k e_{π(k)} with weight c_k w_{π(k)}
    let mut spaces = Vec::new();
    let mut to_canonical = Vec::new();
    for e in algebra.elements() {
        let base = canonical.space(e);
        let n = base.dim();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let mut s = Matrix::zeros(n, n);
        let mut weights = Vec::with_capacity(n);
        for (k, &p) in perm.iter().enumerate() {
            let c = frac(rng.random_range(1..=3), rng.random_range(1..=2));
            let sign = if rng.random_bool(0.5) { Rational::one() } else { -Rational::one() };
            weights.push(&c * &base.weights()[p]);
            s[(p, k)] = sign * c;
        }
        spaces.push(FinBanSpace::sum(weights)?);
        to_canonical.push(s);
    }
    let maps = algebra
        .elements()
        .flat_map(covers)
        .map(|(f, e)| {
            let (sf, se) = (&to_canonical[f.bits() as usize], &to_canonical[e.bits() as usize]);
            let m = se.inverse()?.mul(&canonical.extension(f, e)?).mul(sf).scale(lambda);
            Ok((f, e, m))
        })
        .collect::<Result<_>>()?;
    PreCosheaf::new(algebra, spaces, maps)
}

/// The ℓ1 cosheaf of a positive measure: `E ↦ ℓ1` on the atoms below `E`
/// weighted by their masses.
pub fn l1_cosheaf(mu: &crate::measures::MeasureAlgebra) -> Result<PreCosheaf> {
    let alg = mu.algebra();
    if let Some(a) = (0..alg.n_atoms()).find(|&a| *mu.atom_mass(a) <= Rational::zero()) {
        return Err(Error::InvalidModel(format!("atom {} has no positive mass", alg.atoms()[a])));
    }
    let fibers: Vec<FinBanSpace> =
        (0..alg.n_atoms()).map(|a| FinBanSpace::sum(vec![mu.atom_mass(a).clone()]).expect("positive mass")).collect();
    atomic_cosheaf(alg, &fibers)
}
