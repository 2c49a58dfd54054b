//! Finitely additive scalar and vector measures on finite Boolean algebras.
//!
//! A measure is stored by its values on atoms; the value on an element is
//! the sum over the atoms below it. Finite additivity and `ν(⊥) = 0` are
//! therefore representation invariants.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::boolalg::{coproduct, BoolAlg, BoolMorphism, Coproduct, Element};
use crate::error::{Error, Result};
use crate::finban::{FinBanSpace, LinMap};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct VectorMeasure {
    algebra: BoolAlg,
    target: FinBanSpace,
    atom_values: Vec<Vec<Rational>>,
}

impl fmt::Debug for VectorMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<Vec<String>> =
            self.atom_values.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect();
        write!(f, "VectorMeasure({:?} -> dim {}, {:?})", self.algebra.atoms(), self.target.dim(), vals)
    }
}

impl VectorMeasure {
    pub fn new(algebra: BoolAlg, target: FinBanSpace, atom_values: Vec<Vec<Rational>>) -> Result<Self> {
        if atom_values.len() != algebra.n_atoms() {
            return Err(Error::DimensionMismatch(format!(
                "{} atom values for {} atoms",
                atom_values.len(),
                algebra.n_atoms()
            )));
        }
        if let Some(v) = atom_values.iter().find(|v| v.len() != target.dim()) {
            return Err(Error::DimensionMismatch(format!("value of length {} in a space of dim {}", v.len(), target.dim())));
        }
        Ok(VectorMeasure { algebra, target, atom_values })
    }

    /// A scalar measure, valued in the one-dimensional space.
    pub fn scalar(algebra: BoolAlg, values: Vec<Rational>) -> Result<Self> {
        VectorMeasure::new(algebra, FinBanSpace::scalars(), values.into_iter().map(|v| vec![v]).collect())
    }

    pub fn zero(algebra: &BoolAlg, target: &FinBanSpace) -> Self {
        let atom_values = vec![vec![Rational::zero(); target.dim()]; algebra.n_atoms()];
        VectorMeasure { algebra: algebra.clone(), target: target.clone(), atom_values }
    }

    pub fn algebra(&self) -> &BoolAlg {
        &self.algebra
    }

    pub fn target(&self) -> &FinBanSpace {
        &self.target
    }

    pub fn atom_values(&self) -> &[Vec<Rational>] {
        &self.atom_values
    }

    pub fn atom_value(&self, i: usize) -> &[Rational] {
        &self.atom_values[i]
    }

    pub fn is_scalar(&self) -> bool {
        self.target.dim() == 1
    }

    pub fn eval(&self, e: Element) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.target.dim()];
        for i in e.atoms() {
            for (o, v) in out.iter_mut().zip(&self.atom_values[i]) {
                *o += v;
            }
        }
        out
    }

    /// `ν(E)` for a scalar measure.
    pub fn eval_scalar(&self, e: Element) -> Rational {
        assert!(self.is_scalar(), "eval_scalar on a vector measure");
        e.atoms().map(|i| self.atom_values[i][0].clone()).sum()
    }

    /// `T ∘ ν`.
    pub fn push(&self, t: &LinMap) -> Result<VectorMeasure> {
        if !t.source().same_norm(&self.target) {
            return Err(Error::DimensionMismatch("map does not start at the measure's target".into()));
        }
        let atom_values = self.atom_values.iter().map(|v| t.apply(v)).collect();
        Ok(VectorMeasure { algebra: self.algebra.clone(), target: t.target().clone(), atom_values })
    }

    pub fn add(&self, other: &VectorMeasure) -> Result<VectorMeasure> {
        self.check_same(other)?;
        let atom_values = self
            .atom_values
            .iter()
            .zip(&other.atom_values)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(VectorMeasure { algebra: self.algebra.clone(), target: self.target.clone(), atom_values })
    }

    pub fn scale(&self, k: &Rational) -> VectorMeasure {
        let atom_values = self.atom_values.iter().map(|v| v.iter().map(|x| x * k).collect()).collect();
        VectorMeasure { algebra: self.algebra.clone(), target: self.target.clone(), atom_values }
    }

    fn check_same(&self, other: &VectorMeasure) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        if !self.target.same_norm(&other.target) {
            return Err(Error::DimensionMismatch("measures with different targets".into()));
        }
        Ok(())
    }

    pub fn is_null_atom(&self, i: usize) -> bool {
        self.atom_values[i].iter().all(Zero::is_zero)
    }

    /// `E` is null when `ν` vanishes on every element below it.
    pub fn is_null(&self, e: Element) -> bool {
        e.atoms().all(|i| self.is_null_atom(i))
    }

    /// The largest element whose complement is null.
    pub fn support(&self) -> Element {
        Element::from_atoms((0..self.algebra.n_atoms()).filter(|&i| !self.is_null_atom(i)))
    }

    /// Total variation `|ν|(E)`: the supremum over partitions of `E` of
    /// `Σ ‖ν(F)‖` is attained at the atomic partition.
    pub fn variation(&self, e: Element) -> Rational {
        e.atoms().map(|i| self.target.norm(&self.atom_values[i])).sum()
    }

    /// Semivariation `‖ν‖(E) = sup_{‖φ‖ ≤ 1} |φ ∘ ν|(E)`. For a fixed `φ` the
    /// partition supremum is attained at the atoms, and the outer supremum of
    /// a convex function over the dual ball is attained at one of its
    /// finitely many extreme points.
    pub fn semivariation(&self, e: Element) -> Result<Rational> {
        let mut best = Rational::zero();
        for phi in self.target.dual_vertices()? {
            let s: Rational = e.atoms().map(|i| dot(&phi, &self.atom_values[i]).abs()).sum();
            if s > best {
                best = s;
            }
        }
        Ok(best)
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A finite measure algebra `(Ω, μ)` with `μ ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureAlgebra {
    measure: VectorMeasure,
}

impl MeasureAlgebra {
    pub fn new(algebra: BoolAlg, values: Vec<Rational>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| v.is_negative()) {
            return Err(Error::InvalidModel(format!("negative mass {v} in a measure algebra")));
        }
        Ok(MeasureAlgebra { measure: VectorMeasure::scalar(algebra, values)? })
    }

    pub fn from_measure(measure: VectorMeasure) -> Result<Self> {
        if !measure.is_scalar() {
            return Err(Error::FlavorMismatch("a measure algebra carries a scalar measure".into()));
        }
        let values = measure.atom_values.iter().map(|v| v[0].clone()).collect();
        MeasureAlgebra::new(measure.algebra, values)
    }

    pub fn algebra(&self) -> &BoolAlg {
        self.measure.algebra()
    }

    pub fn measure(&self) -> &VectorMeasure {
        &self.measure
    }

    pub fn mass(&self, e: Element) -> Rational {
        self.measure.eval_scalar(e)
    }

    pub fn atom_mass(&self, i: usize) -> &Rational {
        &self.measure.atom_values[i][0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lipschitz {
    Finite(Rational),
    Unbounded,
}

impl Lipschitz {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Lipschitz::Finite(c) => Some(c),
            Lipschitz::Unbounded => None,
        }
    }
}

/// Least `C` with `‖ν(E)‖ ≤ C μ(E)` for all `E`, or `Unbounded` when `ν` is
/// not supported by `μ`.
///
/// The atoms suffice: `‖ν(E)‖ ≤ Σ_{a ≤ E} ‖ν(a)‖ ≤ C Σ_{a ≤ E} μ(a)` once the
/// bound holds on each atom, and atoms are elements.
pub fn lipschitz_norm(nu: &VectorMeasure, mu: &MeasureAlgebra) -> Result<Lipschitz> {
    if nu.algebra() != mu.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let mut best = Rational::zero();
    for i in 0..nu.algebra().n_atoms() {
        let n = nu.target().norm(nu.atom_value(i));
        let m = mu.atom_mass(i);
        if m.is_zero() {
            if !n.is_zero() {
                return Ok(Lipschitz::Unbounded);
            }
            continue;
        }
        let r = n / m;
        if r > best {
            best = r;
        }
    }
    Ok(Lipschitz::Finite(best))
}

/// `(φ*ν)(E) = ν(φ(E))`.
pub fn pullback(phi: &BoolMorphism, nu: &VectorMeasure) -> Result<VectorMeasure> {
    if phi.target() != nu.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let atom_values = phi.atom_images().iter().map(|&e| nu.eval(e)).collect();
    VectorMeasure::new(phi.source().clone(), nu.target().clone(), atom_values)
}

/// `μ ⊗ ν` on the coproduct algebra, `(a, b) ↦ μ(a) ν(b)`.
pub fn product_measure(mu: &VectorMeasure, nu: &VectorMeasure) -> Result<(Coproduct, VectorMeasure)> {
    if !mu.is_scalar() || !nu.is_scalar() {
        return Err(Error::FlavorMismatch("product measures are formed from scalar measures".into()));
    }
    let c = coproduct(mu.algebra(), nu.algebra())?;
    let mut values = vec![Rational::zero(); c.algebra().n_atoms()];
    for i in 0..mu.algebra().n_atoms() {
        for j in 0..nu.algebra().n_atoms() {
            values[c.pair_atom(i, j)] = &mu.atom_values[i][0] * &nu.atom_values[j][0];
        }
    }
    let m = VectorMeasure::scalar(c.algebra().clone(), values)?;
    Ok((c, m))
}

/// A bilinear product on coordinate vectors.
pub type Product = dyn Fn(&[Rational], &[Rational]) -> Vec<Rational>;

/// An associative product on a measure's target space with its unit.
pub struct AlgebraStructure<'a> {
    pub product: &'a Product,
    pub unit: Vec<Rational>,
}

/// Pointwise multiplication on `ℚⁿ`, the algebra `L∞` of an `n`-atom algebra.
pub fn pointwise(n: usize) -> impl Fn(&[Rational], &[Rational]) -> Vec<Rational> {
    move |a, b| {
        assert_eq!(a.len(), n);
        a.iter().zip(b).map(|(x, y)| x * y).collect()
    }
}

/// Product of column-major vectorized `n x n` matrices.
pub fn matrix_product(n: usize) -> impl Fn(&[Rational], &[Rational]) -> Vec<Rational> {
    move |a, b| {
        let mut out = vec![Rational::zero(); n * n];
        for j in 0..n {
            for k in 0..n {
                let bkj = &b[j * n + k];
                if bkj.is_zero() {
                    continue;
                }
                for i in 0..n {
                    out[j * n + i] += &a[k * n + i] * bkj;
                }
            }
        }
        out
    }
}

/// Column-major vectorized identity matrix.
pub fn matrix_unit(n: usize) -> Vec<Rational> {
    (0..n * n).map(|k| if k % n == k / n { Rational::one() } else { Rational::zero() }).collect()
}

/// Spectral: unital and multiplicative. By bilinearity it is enough that
/// `ν(a) ν(b) = δ_ab ν(a)` on atoms.
pub fn is_spectral(nu: &VectorMeasure, structure: &AlgebraStructure<'_>) -> bool {
    if nu.eval(nu.algebra().top()) != structure.unit {
        return false;
    }
    let n = nu.algebra().n_atoms();
    let zero = vec![Rational::zero(); nu.target().dim()];
    (0..n).all(|a| {
        (0..n).all(|b| {
            let p = (structure.product)(nu.atom_value(a), nu.atom_value(b));
            if a == b {
                p == nu.atom_value(a)
            } else {
                p == zero
            }
        })
    })
}

/// `Ω -> Ω/Null(ν)`: the quotient keeps the atoms of nonzero measure.
#[derive(Debug, Clone)]
pub struct NullQuotient {
    algebra: BoolAlg,
    projection: BoolMorphism,
    kept: Vec<usize>,
    measure: VectorMeasure,
}

pub fn quotient_by_null(nu: &VectorMeasure) -> Result<NullQuotient> {
    let source = nu.algebra();
    let kept: Vec<usize> = (0..source.n_atoms()).filter(|&i| !nu.is_null_atom(i)).collect();
    if kept.is_empty() {
        return Err(Error::DegenerateQuotient);
    }
    let algebra = BoolAlg::new(kept.iter().map(|&i| source.atoms()[i].clone()))?;
    let images = (0..source.n_atoms())
        .map(|i| kept.iter().position(|&k| k == i).map_or(Element::BOTTOM, Element::atom))
        .collect();
    let projection = BoolMorphism::new(source.clone(), algebra.clone(), images)?;
    let measure = VectorMeasure::new(algebra.clone(), nu.target().clone(), kept.iter().map(|&i| nu.atom_values[i].clone()).collect())?;
    Ok(NullQuotient { algebra, projection, kept, measure })
}

impl NullQuotient {
    pub fn algebra(&self) -> &BoolAlg {
        &self.algebra
    }

    pub fn projection(&self) -> &BoolMorphism {
        &self.projection
    }

    /// Source atoms that survive, in quotient atom order.
    pub fn kept_atoms(&self) -> &[usize] {
        &self.kept
    }

    /// The measure induced on the quotient.
    pub fn measure(&self) -> &VectorMeasure {
        &self.measure
    }

    /// The unique `ν̄` on the quotient with `ν = π*ν̄`; it exists iff every
    /// null element of the quotiented measure is `ν`-null.
    pub fn factor_through(&self, nu: &VectorMeasure) -> Result<VectorMeasure> {
        if nu.algebra() != self.projection.source() {
            return Err(Error::AlgebraMismatch);
        }
        if let Some(i) = (0..nu.algebra().n_atoms()).find(|&i| !self.kept.contains(&i) && !nu.is_null_atom(i)) {
            return Err(Error::SupportError(format!("measure is nonzero on the null atom `{}`", nu.algebra().atoms()[i])));
        }
        VectorMeasure::new(self.algebra.clone(), nu.target().clone(), self.kept.iter().map(|&i| nu.atom_values[i].clone()).collect())
    }
}
