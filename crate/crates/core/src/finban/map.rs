use num_traits::{One, Zero};

use super::space::{Flavor, FinBanSpace};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;

/// Exact operator norm of `m: source -> target`.
///
/// ℓ1-like sources use the column rule (extreme points `±eⱼ/wⱼ`); ℓ∞-like
/// targets use the row rule with the dual norm of each row. The remaining
/// pairs maximize the source dual norm of `mᵀφ` over the extreme points `φ`
/// of the target dual ball.
pub fn operator_norm(m: &Matrix, source: &FinBanSpace, target: &FinBanSpace) -> Result<Rational> {
    if m.rows() != target.dim() || m.cols() != source.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix between spaces of dims {} -> {}",
            m.rows(),
            m.cols(),
            source.dim(),
            target.dim()
        )));
    }
    if source.dim() == 0 || target.dim() == 0 {
        return Ok(Rational::zero());
    }
    let mut best = Rational::zero();
    if source.is_sum_like() {
        for j in 0..m.cols() {
            let v = target.norm(&m.column(j)) / &source.weights()[j];
            if v > best {
                best = v;
            }
        }
    } else if target.is_sup_like() {
        for i in 0..m.rows() {
            let v = source.dual_norm(m.row(i)) * &target.weights()[i];
            if v > best {
                best = v;
            }
        }
    } else {
        let mt = m.transpose();
        for phi in target.dual_vertices()? {
            let v = source.dual_norm(&mt.mul_vec(&phi));
            if v > best {
                best = v;
            }
        }
    }
    Ok(best)
}

/// A bounded linear map between finite-dimensional spaces; the matrix is
/// target-rows by source-columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinMap {
    source: FinBanSpace,
    target: FinBanSpace,
    matrix: Matrix,
}

impl LinMap {
    pub fn new(source: FinBanSpace, target: FinBanSpace, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{} but spaces have dims {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source.dim(),
                target.dim()
            )));
        }
        Ok(LinMap { source, target, matrix })
    }

    pub fn identity(space: &FinBanSpace) -> Self {
        LinMap { source: space.clone(), target: space.clone(), matrix: Matrix::identity(space.dim()) }
    }

    pub fn zero(source: &FinBanSpace, target: &FinBanSpace) -> Self {
        LinMap { source: source.clone(), target: target.clone(), matrix: Matrix::zeros(target.dim(), source.dim()) }
    }

    pub fn source(&self) -> &FinBanSpace {
        &self.source
    }

    pub fn target(&self) -> &FinBanSpace {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.matrix.mul_vec(v)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinMap) -> Result<LinMap> {
        if !inner.target.same_norm(&self.source) {
            return Err(Error::DimensionMismatch("composition of maps through different spaces".into()));
        }
        Ok(LinMap { source: inner.source.clone(), target: self.target.clone(), matrix: self.matrix.mul(&inner.matrix) })
    }

    pub fn add(&self, other: &LinMap) -> Result<LinMap> {
        if !self.source.same_norm(&other.source) || !self.target.same_norm(&other.target) {
            return Err(Error::DimensionMismatch("sum of maps between different spaces".into()));
        }
        Ok(LinMap { source: self.source.clone(), target: self.target.clone(), matrix: self.matrix.add(&other.matrix) })
    }

    pub fn scale(&self, k: &Rational) -> LinMap {
        LinMap { source: self.source.clone(), target: self.target.clone(), matrix: self.matrix.scale(k) }
    }

    pub fn operator_norm(&self) -> Result<Rational> {
        operator_norm(&self.matrix, &self.source, &self.target)
    }

    pub fn is_contractive(&self) -> Result<bool> {
        Ok(self.operator_norm()? <= Rational::one())
    }

    pub fn is_identity(&self) -> bool {
        self.source.same_norm(&self.target) && self.matrix.is_identity()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// An isomorphism together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    forward: LinMap,
    backward: LinMap,
}

impl IsoWitness {
    pub fn new(forward: LinMap, backward: LinMap) -> Result<Self> {
        let there_and_back = backward.compose(&forward)?;
        let back_and_there = forward.compose(&backward)?;
        if !there_and_back.matrix.is_identity() || !back_and_there.matrix.is_identity() {
            return Err(Error::NotInverse("forward and backward do not compose to identities".into()));
        }
        Ok(IsoWitness { forward, backward })
    }

    /// Witness for an invertible map, inverting it exactly.
    pub fn from_invertible(forward: LinMap) -> Result<Self> {
        let inv = forward.matrix.inverse()?;
        let backward = LinMap::new(forward.target.clone(), forward.source.clone(), inv)?;
        IsoWitness::new(forward, backward)
    }

    /// Witness for a basis bijection: basis vector `j` of `source` goes to
    /// basis vector `perm[j]` of `target`.
    pub fn from_permutation(source: &FinBanSpace, target: &FinBanSpace, perm: &[usize]) -> Result<Self> {
        if perm.len() != source.dim() || source.dim() != target.dim() {
            return Err(Error::DimensionMismatch("permutation length".into()));
        }
        let mut m = Matrix::zeros(target.dim(), source.dim());
        for (j, &i) in perm.iter().enumerate() {
            if i >= target.dim() {
                return Err(Error::DimensionMismatch("permutation index out of range".into()));
            }
            m[(i, j)] = Rational::one();
        }
        let forward = LinMap::new(source.clone(), target.clone(), m.clone())?;
        let backward = LinMap::new(target.clone(), source.clone(), m.transpose())?;
        IsoWitness::new(forward, backward)
    }

    pub fn forward(&self) -> &LinMap {
        &self.forward
    }

    pub fn backward(&self) -> &LinMap {
        &self.backward
    }

    pub fn inverse(&self) -> IsoWitness {
        IsoWitness { forward: self.backward.clone(), backward: self.forward.clone() }
    }

    /// Both directions have operator norm at most one.
    pub fn is_isometric(&self) -> Result<bool> {
        Ok(self.forward.is_contractive()? && self.backward.is_contractive()?)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &IsoWitness) -> Result<IsoWitness> {
        IsoWitness::new(other.forward.compose(&self.forward)?, self.backward.compose(&other.backward)?)
    }
}

/// The space of linear maps `source -> target` with the operator norm,
/// vectorized column-major (entry `(i, j)` at `j * target.dim() + i`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSpace {
    space: FinBanSpace,
    source: FinBanSpace,
    target: FinBanSpace,
}

impl HomSpace {
    /// Supported when the operator norm is itself a max of weighted ℓ1
    /// norms: ℓ1-like sources (any target) and ℓ∞-like pairs.
    pub fn new(source: &FinBanSpace, target: &FinBanSpace) -> Result<Self> {
        let (n, m) = (source.dim(), target.dim());
        let mut weights = vec![Rational::zero(); n * m];
        let mut labels = vec![String::new(); n * m];
        for j in 0..n {
            for i in 0..m {
                weights[j * m + i] = &target.weights()[i] / &source.weights()[j];
                labels[j * m + i] = format!("{}<-{}", target.labels()[i], source.labels()[j]);
            }
        }
        let blocks: Vec<Vec<usize>> = if n * m == 0 {
            Vec::new()
        } else if source.is_sum_like() {
            (0..n).flat_map(|j| target.blocks().into_iter().map(move |b| b.iter().map(|i| j * m + i).collect())).collect()
        } else if target.is_sup_like() && source.is_sup_like() {
            (0..m).map(|i| (0..n).map(|j| j * m + i).collect()).collect()
        } else {
            return Err(Error::FlavorMismatch(format!(
                "operator norm {:?} -> {:?} is not a max of weighted ℓ1 norms",
                source.flavor(),
                target.flavor()
            )));
        };
        let space = FinBanSpace::new(labels, weights, Flavor::SupOfSums(blocks))?;
        Ok(HomSpace { space, source: source.clone(), target: target.clone() })
    }

    pub fn space(&self) -> &FinBanSpace {
        &self.space
    }

    pub fn source(&self) -> &FinBanSpace {
        &self.source
    }

    pub fn target(&self) -> &FinBanSpace {
        &self.target
    }

    pub fn vectorize(&self, m: &Matrix) -> Vec<Rational> {
        let rows = self.target.dim();
        (0..self.space.dim()).map(|k| m[(k % rows, k / rows)].clone()).collect()
    }

    pub fn unvectorize(&self, v: &[Rational]) -> Matrix {
        let rows = self.target.dim();
        Matrix::from_fn(rows, self.source.dim(), |i, j| v[j * rows + i].clone())
    }

    /// The linear map `T ↦ post ∘ T ∘ pre` between hom spaces, as a matrix
    /// acting on vectorizations: `vec(P T Q) = (Qᵀ ⊗ P) vec(T)`.
    pub fn conjugation_matrix(pre: &Matrix, post: &Matrix) -> Matrix {
        pre.transpose().kronecker(post)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows[0].len(), rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    /// Oracle: maximize the target norm over all source unit-ball vertices.
    fn norm_by_vertices(m: &Matrix, s: &FinBanSpace, t: &FinBanSpace) -> Rational {
        s.unit_ball_vertices().unwrap().iter().map(|v| t.norm(&m.mul_vec(v))).max().unwrap_or_default()
    }

    #[test]
    fn column_rule_example() {
        let m = mat(&[&[1, 2], &[3, 4]]);
        let l1 = FinBanSpace::l1(2);
        assert_eq!(operator_norm(&m, &l1, &l1).unwrap(), int(6));
        assert_eq!(norm_by_vertices(&m, &l1, &l1), int(6));
        assert_eq!(LinMap::identity(&l1).operator_norm().unwrap(), int(1));
        assert_eq!(LinMap::zero(&l1, &l1).operator_norm().unwrap(), int(0));
    }

    #[test]
    fn all_flavor_pairs_match_vertex_oracle() {
        let spaces = [
            FinBanSpace::sum(vec![int(1), frac(1, 2), int(3)]).unwrap(),
            FinBanSpace::sup(vec![int(2), int(1), frac(2, 3)]).unwrap(),
            FinBanSpace::new(
                vec!["a".into(), "b".into(), "c".into()],
                vec![int(1), int(2), frac(1, 2)],
                Flavor::SupOfSums(vec![vec![0, 1], vec![2]]),
            )
            .unwrap(),
        ];
        let m = mat(&[&[1, -2, 0], &[3, 1, -1], &[0, 2, 5]]);
        for s in &spaces {
            for t in &spaces {
                assert_eq!(operator_norm(&m, s, t).unwrap(), norm_by_vertices(&m, s, t), "{s:?} -> {t:?}");
            }
        }
    }

    #[test]
    fn hom_space_norm_is_operator_norm() {
        let s = FinBanSpace::sum(vec![int(1), int(2)]).unwrap();
        let t = FinBanSpace::sum(vec![frac(1, 2), int(3), int(1)]).unwrap();
        let h = HomSpace::new(&s, &t).unwrap();
        let m = mat(&[&[1, -1], &[2, 0], &[0, 7]]);
        assert_eq!(h.space().norm(&h.vectorize(&m)), operator_norm(&m, &s, &t).unwrap());
        assert_eq!(h.unvectorize(&h.vectorize(&m)), m);
        let s = FinBanSpace::sup(vec![int(1), int(2)]).unwrap();
        let t = FinBanSpace::sup(vec![frac(1, 2), int(3), int(1)]).unwrap();
        let h = HomSpace::new(&s, &t).unwrap();
        assert_eq!(h.space().norm(&h.vectorize(&m)), operator_norm(&m, &s, &t).unwrap());
        assert!(HomSpace::new(&s, &FinBanSpace::l1(2)).is_err());
    }

    #[test]
    fn conjugation_matches_products() {
        let p = mat(&[&[1, 2], &[0, 1], &[1, 1]]);
        let q = mat(&[&[2], &[1]]);
        let t = mat(&[&[1, 3], &[4, -1]]);
        let h = HomSpace::new(&FinBanSpace::l1(1), &FinBanSpace::l1(3)).unwrap();
        let h_in = HomSpace::new(&FinBanSpace::l1(2), &FinBanSpace::l1(2)).unwrap();
        let direct = h.vectorize(&p.mul(&t).mul(&q));
        let via = HomSpace::conjugation_matrix(&q, &p).mul_vec(&h_in.vectorize(&t));
        assert_eq!(direct, via);
    }

    #[test]
    fn iso_witness_checks_inverses() {
        let l1 = FinBanSpace::l1(2);
        let swap = IsoWitness::from_permutation(&l1, &l1, &[1, 0]).unwrap();
        assert!(swap.is_isometric().unwrap());
        let double = LinMap::new(l1.clone(), l1.clone(), Matrix::identity(2).scale(&int(2))).unwrap();
        let w = IsoWitness::from_invertible(double.clone()).unwrap();
        assert!(!w.is_isometric().unwrap());
        assert!(IsoWitness::new(double.clone(), double).is_err());
    }
}
