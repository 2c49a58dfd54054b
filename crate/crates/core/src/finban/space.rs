use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Cap on the number of extreme points any exhaustive routine will visit.
pub const VERTEX_LIMIT: usize = 1 << 20;

/// How the coordinates of a [`FinBanSpace`] are combined into a norm.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Weighted ℓ1: `Σ wᵢ|vᵢ|`. The coproduct side.
    Sum,
    /// Weighted ℓ∞: `max wᵢ|vᵢ|`. The product side.
    Sup,
    /// ℓ∞-sum of weighted ℓ1 blocks: `max_b Σ_{i∈b} wᵢ|vᵢ|`. This is the
    /// shape of operator-norm spaces of matrices between weighted spaces.
    SupOfSums(Vec<Vec<usize>>),
}

impl fmt::Debug for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Sum => write!(f, "Sum"),
            Flavor::Sup => write!(f, "Sup"),
            Flavor::SupOfSums(b) => write!(f, "SupOfSums{b:?}"),
        }
    }
}

/// A finite-dimensional rational normed space with a weighted polyhedral
/// norm. Basis labels are cosmetic; norms and maps only see indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinBanSpace {
    labels: Vec<String>,
    weights: Vec<Rational>,
    flavor: Flavor,
}

impl fmt::Debug for FinBanSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(ToString::to_string).collect();
        write!(f, "FinBanSpace({:?}, dim {}, weights [{}])", self.flavor, self.dim(), w.join(" "))
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

impl FinBanSpace {
    pub fn new(labels: Vec<String>, weights: Vec<Rational>, flavor: Flavor) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} weights",
                labels.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::InvalidModel(format!("non-positive weight {w}")));
        }
        let flavor = match flavor {
            Flavor::SupOfSums(blocks) => normalize_blocks(blocks, weights.len())?,
            other => other,
        };
        Ok(FinBanSpace { labels, weights, flavor })
    }

    pub fn sum(weights: Vec<Rational>) -> Result<Self> {
        FinBanSpace::new(default_labels(weights.len()), weights, Flavor::Sum)
    }

    pub fn sup(weights: Vec<Rational>) -> Result<Self> {
        FinBanSpace::new(default_labels(weights.len()), weights, Flavor::Sup)
    }

    /// `ℓ1(n)` with unit weights.
    pub fn l1(n: usize) -> Self {
        FinBanSpace { labels: default_labels(n), weights: vec![Rational::one(); n], flavor: Flavor::Sum }
    }

    /// `ℓ∞(n)` with unit weights.
    pub fn linf(n: usize) -> Self {
        FinBanSpace { labels: default_labels(n), weights: vec![Rational::one(); n], flavor: Flavor::Sup }
    }

    /// The ground field as a one-dimensional space.
    pub fn scalars() -> Self {
        FinBanSpace { labels: vec!["1".into()], weights: vec![Rational::one()], flavor: Flavor::Sum }
    }

    pub fn zero() -> Self {
        FinBanSpace { labels: Vec::new(), weights: Vec::new(), flavor: Flavor::Sum }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim() {
            return Err(Error::DimensionMismatch("label count".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn flavor(&self) -> &Flavor {
        &self.flavor
    }

    /// Canonical block structure: the norm is the max over blocks of the
    /// weighted ℓ1 norm on each block.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        if n == 0 {
            return Vec::new();
        }
        match &self.flavor {
            Flavor::Sum => vec![(0..n).collect()],
            Flavor::Sup => (0..n).map(|i| vec![i]).collect(),
            Flavor::SupOfSums(b) => b.clone(),
        }
    }

    /// ℓ1-like: a single block (weighted ℓ1), including every space of
    /// dimension at most one.
    pub fn is_sum_like(&self) -> bool {
        self.blocks().len() <= 1
    }

    /// ℓ∞-like: singleton blocks only.
    pub fn is_sup_like(&self) -> bool {
        self.blocks().iter().all(|b| b.len() == 1)
    }

    /// Same dimension, weights and block structure; labels are ignored.
    pub fn same_norm(&self, other: &FinBanSpace) -> bool {
        self.weights == other.weights && self.blocks() == other.blocks()
    }

    pub fn norm(&self, v: &[Rational]) -> Rational {
        assert_eq!(v.len(), self.dim(), "vector length does not match the space");
        let mut best = Rational::zero();
        for b in self.blocks() {
            let s: Rational = b.iter().map(|&i| v[i].abs() * &self.weights[i]).sum();
            if s > best {
                best = s;
            }
        }
        best
    }

    /// Norm of a linear functional `φ` on this space (the dual norm).
    pub fn dual_norm(&self, phi: &[Rational]) -> Rational {
        assert_eq!(phi.len(), self.dim(), "functional length does not match the space");
        self.blocks()
            .iter()
            .map(|b| {
                b.iter().map(|&i| phi[i].abs() / &self.weights[i]).fold(Rational::zero(), |m, x| if x > m { x } else { m })
            })
            .sum()
    }

    /// Extreme points of the unit ball: per block a choice of `±eᵢ/wᵢ`.
    pub fn unit_ball_vertices(&self) -> Result<Vec<Vec<Rational>>> {
        let blocks = self.blocks();
        let count = blocks.iter().try_fold(1usize, |acc, b| acc.checked_mul(2 * b.len()));
        match count {
            Some(c) if c <= VERTEX_LIMIT => {}
            _ => return Err(Error::TooLarge("unit ball has too many extreme points".into())),
        }
        let mut out = vec![vec![Rational::zero(); self.dim()]];
        for b in &blocks {
            let mut next = Vec::with_capacity(out.len() * 2 * b.len());
            for v in &out {
                for &i in b {
                    for sign in [1, -1] {
                        let mut w = v.clone();
                        w[i] = Rational::from_integer(sign.into()) / &self.weights[i];
                        next.push(w);
                    }
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Extreme points of the dual unit ball: a block `b` and signs on it,
    /// `φᵢ = ±wᵢ` for `i ∈ b`, zero elsewhere.
    pub fn dual_vertices(&self) -> Result<Vec<Vec<Rational>>> {
        let blocks = self.blocks();
        let count = blocks.iter().try_fold(0usize, |acc, b| {
            1usize.checked_shl(b.len() as u32).filter(|c| *c <= VERTEX_LIMIT).and_then(|c| acc.checked_add(c))
        });
        match count {
            Some(c) if c <= VERTEX_LIMIT => {}
            _ => return Err(Error::TooLarge("dual unit ball has too many extreme points".into())),
        }
        let mut out = Vec::new();
        for b in &blocks {
            for mask in 0u64..(1u64 << b.len()) {
                let mut phi = vec![Rational::zero(); self.dim()];
                for (k, &i) in b.iter().enumerate() {
                    phi[i] = if mask >> k & 1 == 1 { -self.weights[i].clone() } else { self.weights[i].clone() };
                }
                out.push(phi);
            }
        }
        if out.is_empty() {
            out.push(Vec::new());
        }
        Ok(out)
    }

    /// Copy with every label prefixed, used when forming sums.
    pub fn prefixed(&self, prefix: &str) -> FinBanSpace {
        let mut s = self.clone();
        s.labels = self.labels.iter().map(|l| format!("{prefix}{l}")).collect();
        s
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[i] = Rational::one();
        v
    }
}

fn normalize_blocks(mut blocks: Vec<Vec<usize>>, n: usize) -> Result<Flavor> {
    let mut seen = vec![false; n];
    for b in &mut blocks {
        b.sort_unstable();
        for &i in b.iter() {
            if i >= n || seen[i] {
                return Err(Error::InvalidModel("norm blocks must partition the basis".into()));
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidModel("norm blocks must cover the basis".into()));
    }
    blocks.retain(|b| !b.is_empty());
    blocks.sort();
    Ok(if blocks.len() <= 1 {
        Flavor::Sum
    } else if blocks.iter().all(|b| b.len() == 1) {
        Flavor::Sup
    } else {
        Flavor::SupOfSums(blocks)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn norms() {
        let s = FinBanSpace::sum(vec![int(1), int(2)]).unwrap();
        assert_eq!(s.norm(&[int(1), int(-2)]), int(5));
        let s = FinBanSpace::sup(vec![int(1), int(2)]).unwrap();
        assert_eq!(s.norm(&[int(3), int(-2)]), int(4));
        let m = FinBanSpace::new(default_labels(3), vec![int(1); 3], Flavor::SupOfSums(vec![vec![0, 1], vec![2]])).unwrap();
        assert_eq!(m.norm(&[int(1), int(1), int(3)]), int(3));
        assert_eq!(m.norm(&[int(2), int(2), int(3)]), int(4));
    }

    #[test]
    fn weights_must_be_positive() {
        assert!(FinBanSpace::sum(vec![int(0)]).is_err());
        assert!(FinBanSpace::sup(vec![frac(-1, 2)]).is_err());
    }

    #[test]
    fn block_normalization() {
        let m = FinBanSpace::new(default_labels(2), vec![int(1); 2], Flavor::SupOfSums(vec![vec![0], vec![1]])).unwrap();
        assert_eq!(m.flavor(), &Flavor::Sup);
        let m = FinBanSpace::new(default_labels(2), vec![int(1); 2], Flavor::SupOfSums(vec![vec![1, 0]])).unwrap();
        assert_eq!(m.flavor(), &Flavor::Sum);
        assert!(FinBanSpace::new(default_labels(2), vec![int(1); 2], Flavor::SupOfSums(vec![vec![0]])).is_err());
    }

    #[test]
    fn vertices_have_unit_norm() {
        let s = FinBanSpace::new(
            default_labels(3),
            vec![int(2), frac(1, 3), int(5)],
            Flavor::SupOfSums(vec![vec![0, 2], vec![1]]),
        )
        .unwrap();
        let verts = s.unit_ball_vertices().unwrap();
        assert_eq!(verts.len(), 8);
        assert!(verts.iter().all(|v| s.norm(v) == int(1)));
        for phi in s.dual_vertices().unwrap() {
            assert_eq!(s.dual_norm(&phi), int(1));
        }
    }
}
