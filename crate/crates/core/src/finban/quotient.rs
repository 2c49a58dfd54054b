use num_traits::{One, Zero};

use super::map::LinMap;
use super::space::{Flavor, FinBanSpace};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lp::{minimize, weighted_l1_distance, LpOutcome};
use crate::rational::Rational;

/// `A / span(W)` for a weighted ℓ1 space `A`.
///
/// Quotient coordinates are the ambient coordinates outside the pivot set of
/// `span(W)` in reduced echelon form. The unit ball is the image of the
/// ambient ball, i.e. the convex hull of `±π(eⱼ)/wⱼ`, so norms out of the
/// quotient follow a column rule and norms into it need one LP per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSpace {
    ambient: FinBanSpace,
    span: Matrix,
    complement: Vec<usize>,
    projection: Matrix,
}

pub fn quotient(ambient: &FinBanSpace, generators: &[Vec<Rational>]) -> Result<QuotientSpace> {
    if !ambient.is_sum_like() {
        return Err(Error::FlavorMismatch("quotients are taken of weighted ℓ1 spaces".into()));
    }
    let n = ambient.dim();
    if let Some(g) = generators.iter().find(|g| g.len() != n) {
        return Err(Error::DimensionMismatch(format!("generator of length {} in a space of dim {n}", g.len())));
    }
    let rows = Matrix::from_rows(n, generators.to_vec())?;
    let ech = rows.echelon();
    let rank = ech.pivots.len();
    let complement: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
    let span = Matrix::from_fn(n, rank, |i, k| ech.matrix[(k, i)].clone());
    // v ↦ v - Σₖ v_{pₖ} rₖ zeroes the pivot coordinates; keep the rest
    let projection = Matrix::from_fn(complement.len(), n, |r, j| {
        let c = complement[r];
        if j == c {
            Rational::one()
        } else if let Some(k) = ech.pivots.iter().position(|&p| p == j) {
            -ech.matrix[(k, c)].clone()
        } else {
            Rational::zero()
        }
    });
    Ok(QuotientSpace { ambient: ambient.clone(), span, complement, projection })
}

impl QuotientSpace {
    pub fn ambient(&self) -> &FinBanSpace {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// Basis of the subspace being killed, as columns.
    pub fn span(&self) -> &Matrix {
        &self.span
    }

    /// `π: A -> A/W` in quotient coordinates.
    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    /// A linear section of `π`: quotient coordinates placed back on the
    /// complement coordinates.
    pub fn section(&self) -> Matrix {
        let mut s = Matrix::zeros(self.ambient.dim(), self.dim());
        for (r, &c) in self.complement.iter().enumerate() {
            s[(c, r)] = Rational::one();
        }
        s
    }

    pub fn project(&self, v: &[Rational]) -> Vec<Rational> {
        self.projection.mul_vec(v)
    }

    /// `‖[v]‖ = min_{w ∈ W} ‖v - w‖`, solved exactly.
    pub fn norm(&self, u: &[Rational]) -> Rational {
        let v = self.section().mul_vec(u);
        weighted_l1_distance(&v, &self.span, self.ambient.weights())
    }

    /// Norm of `t: A/W -> target`, given as a matrix on quotient coordinates.
    pub fn norm_from(&self, t: &Matrix, target: &FinBanSpace) -> Result<Rational> {
        super::map::operator_norm(&t.mul(&self.projection), &self.ambient, target)
    }

    /// Norm of `a: source -> A/W` for an ℓ1-like source.
    pub fn norm_into(&self, a: &Matrix, source: &FinBanSpace) -> Result<Rational> {
        if !source.is_sum_like() {
            return Err(Error::FlavorMismatch("maps into a quotient need an ℓ1-like source".into()));
        }
        if a.rows() != self.dim() || a.cols() != source.dim() {
            return Err(Error::DimensionMismatch("map into quotient has the wrong shape".into()));
        }
        let mut best = Rational::zero();
        for j in 0..a.cols() {
            let v = self.norm(&a.column(j)) / &source.weights()[j];
            if v > best {
                best = v;
            }
        }
        Ok(best)
    }

    /// Recognizes the quotient as a weighted ℓ1 space: succeeds when the
    /// extreme images `π(eⱼ)/wⱼ` are, up to sign, a basis. Returns the space
    /// and the coordinate change `c` taking quotient coordinates to it.
    pub fn as_l1(&self) -> Option<(FinBanSpace, Matrix)> {
        let d = self.dim();
        // normalized images q = π(eⱼ)/wⱼ, deduplicated up to sign
        let mut points: Vec<(Vec<Rational>, usize)> = Vec::new();
        for j in 0..self.ambient.dim() {
            let w = &self.ambient.weights()[j];
            let q: Vec<Rational> = self.projection.column(j).iter().map(|x| x / w).collect();
            if q.iter().all(Zero::is_zero) {
                continue;
            }
            let neg: Vec<Rational> = q.iter().map(|x| -x.clone()).collect();
            if !points.iter().any(|(p, _)| *p == q || *p == neg) {
                points.push((q, j));
            }
        }
        let extreme: Vec<&(Vec<Rational>, usize)> =
            points.iter().enumerate().filter(|(i, _)| !in_hull_of_others(&points, *i)).map(|(_, p)| p).collect();
        if extreme.len() != d {
            return None;
        }
        // the ball is the cross-polytope on the qₖ, so in the basis π(eⱼ)
        // the norm is weighted ℓ1 with weights wⱼ
        let basis = Matrix::from_columns(d, &extreme.iter().map(|p| self.projection.column(p.1)).collect::<Vec<_>>());
        let change = basis.inverse().ok()?;
        let weights: Vec<Rational> = extreme.iter().map(|p| self.ambient.weights()[p.1].clone()).collect();
        let labels = extreme.iter().map(|p| self.ambient.labels()[p.1].clone()).collect();
        let space = FinBanSpace::new(labels, weights, Flavor::Sum).ok()?;
        Some((space, change))
    }

    /// `π` as a map onto the recognized ℓ1 presentation, if there is one.
    pub fn projection_map(&self) -> Option<LinMap> {
        let (space, change) = self.as_l1()?;
        LinMap::new(self.ambient.clone(), space, change.mul(&self.projection)).ok()
    }
}

/// Whether `points[i]` is a convex combination of `±points[k]`, `k ≠ i`.
fn in_hull_of_others(points: &[(Vec<Rational>, usize)], i: usize) -> bool {
    let target = &points[i].0;
    let d = target.len();
    let others: Vec<&Vec<Rational>> = points.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, p)| &p.0).collect();
    if others.is_empty() {
        return false;
    }
    // λ⁺ₖ, λ⁻ₖ ≥ 0 with Σ (λ⁺ₖ - λ⁻ₖ) pₖ = target and Σ λ = 1
    let cols = 2 * others.len();
    let a = Matrix::from_fn(d + 1, cols, |r, c| {
        if r == d {
            return Rational::one();
        }
        let v = &others[c / 2][r];
        if c % 2 == 0 { v.clone() } else { -v.clone() }
    });
    let mut b = target.clone();
    b.push(Rational::one());
    !matches!(minimize(&vec![Rational::zero(); cols], &a, &b), LpOutcome::Infeasible)
}

/// A linear subspace of a space, with the restricted norm. The basis is
/// stored as the columns of `basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: FinBanSpace,
    basis: Matrix,
}

impl Subspace {
    /// The subspace spanned by the columns of `generators`; dependent
    /// columns are dropped.
    pub fn spanned_by(ambient: &FinBanSpace, generators: &Matrix) -> Result<Self> {
        if generators.rows() != ambient.dim() {
            return Err(Error::DimensionMismatch("subspace generators have the wrong length".into()));
        }
        let ech = generators.echelon();
        let basis = generators.select(&(0..generators.rows()).collect::<Vec<_>>(), &ech.pivots);
        Ok(Subspace { ambient: ambient.clone(), basis })
    }

    /// `ker(a)` for a matrix acting on the ambient space.
    pub fn kernel(ambient: &FinBanSpace, a: &Matrix) -> Result<Self> {
        if a.cols() != ambient.dim() {
            return Err(Error::DimensionMismatch("kernel of a map from another space".into()));
        }
        Ok(Subspace { ambient: ambient.clone(), basis: a.nullspace() })
    }

    pub fn ambient(&self) -> &FinBanSpace {
        &self.ambient
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn norm(&self, y: &[Rational]) -> Rational {
        self.ambient.norm(&self.basis.mul_vec(y))
    }

    /// Norm of `a: source -> self`, given on subspace coordinates. The
    /// norm is inherited, so this is the norm of the composite into the
    /// ambient space.
    pub fn norm_into(&self, a: &Matrix, source: &FinBanSpace) -> Result<Rational> {
        super::map::operator_norm(&self.basis.mul(a), source, &self.ambient)
    }

    /// Coordinates of an ambient vector lying in the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        let rhs = Matrix::from_columns(v.len(), &[v.to_vec()]);
        let x = self.basis.solve(&rhs).map_err(|_| Error::Singular("vector is not in the subspace".into()))?;
        Ok(x.column(0))
    }
}
