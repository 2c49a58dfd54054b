use num_traits::One;

use super::map::LinMap;
use super::space::{Flavor, FinBanSpace};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;

/// Whether a direct sum carries the ℓ1 (coproduct) or ℓ∞ (product) norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumKind {
    Coproduct,
    Product,
}

/// A finite direct sum with its injections and projections.
#[derive(Debug, Clone)]
pub struct DirectSum {
    space: FinBanSpace,
    summands: Vec<FinBanSpace>,
    offsets: Vec<usize>,
    kind: SumKind,
}

/// Direct sum of spaces sharing a flavor: ℓ1-sum of `Sum` spaces (the
/// coproduct) or ℓ∞-sum of `Sup` spaces (the product). Spaces of dimension at
/// most one fit either flavor.
pub fn direct_sum(spaces: &[FinBanSpace]) -> Result<DirectSum> {
    let wide: Vec<&FinBanSpace> = spaces.iter().filter(|s| s.dim() > 1).collect();
    if wide.iter().all(|s| s.flavor() == &Flavor::Sum) {
        coproduct_of(spaces)
    } else if wide.iter().all(|s| s.flavor() == &Flavor::Sup) {
        product_of(spaces)
    } else {
        Err(Error::FlavorMismatch("direct sum of spaces with different flavors".into()))
    }
}

/// ℓ1-sum: `‖(v, w)‖ = ‖v‖ + ‖w‖`. Needs ℓ1-like summands.
pub fn coproduct_of(spaces: &[FinBanSpace]) -> Result<DirectSum> {
    if let Some(s) = spaces.iter().find(|s| !s.is_sum_like()) {
        return Err(Error::FlavorMismatch(format!("ℓ1-sum of a {:?} space", s.flavor())));
    }
    assemble(spaces, SumKind::Coproduct)
}

/// ℓ∞-sum: `‖(v, w)‖ = max(‖v‖, ‖w‖)`. Any summands; blocks are kept.
pub fn product_of(spaces: &[FinBanSpace]) -> Result<DirectSum> {
    assemble(spaces, SumKind::Product)
}

fn assemble(spaces: &[FinBanSpace], kind: SumKind) -> Result<DirectSum> {
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    let mut blocks = Vec::new();
    let mut offsets = Vec::with_capacity(spaces.len());
    for (k, s) in spaces.iter().enumerate() {
        let off = weights.len();
        offsets.push(off);
        labels.extend(s.labels().iter().map(|l| format!("{k}:{l}")));
        weights.extend(s.weights().iter().cloned());
        blocks.extend(s.blocks().into_iter().map(|b| b.into_iter().map(|i| i + off).collect::<Vec<_>>()));
    }
    let flavor = match kind {
        SumKind::Coproduct => Flavor::Sum,
        SumKind::Product => Flavor::SupOfSums(blocks),
    };
    let space = FinBanSpace::new(labels, weights, flavor)?;
    Ok(DirectSum { space, summands: spaces.to_vec(), offsets, kind })
}

impl DirectSum {
    pub fn space(&self) -> &FinBanSpace {
        &self.space
    }

    pub fn summands(&self) -> &[FinBanSpace] {
        &self.summands
    }

    pub fn kind(&self) -> SumKind {
        self.kind
    }

    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    pub fn injection(&self, k: usize) -> LinMap {
        let s = &self.summands[k];
        let mut m = Matrix::zeros(self.space.dim(), s.dim());
        for i in 0..s.dim() {
            m[(self.offsets[k] + i, i)] = Rational::one();
        }
        LinMap::new(s.clone(), self.space.clone(), m).expect("shape by construction")
    }

    pub fn projection(&self, k: usize) -> LinMap {
        let s = &self.summands[k];
        let m = self.injection(k).into_matrix().transpose();
        LinMap::new(self.space.clone(), s.clone(), m).expect("shape by construction")
    }

    /// Concatenates vectors of the summands.
    pub fn join(&self, parts: &[Vec<Rational>]) -> Vec<Rational> {
        parts.concat()
    }

    /// The mediating map out of the sum for a cocone `fₖ: Sₖ -> T`.
    pub fn copair(&self, cocone: &[LinMap]) -> Result<LinMap> {
        self.check_legs(cocone.iter().map(LinMap::source))?;
        let target = common(cocone.iter().map(LinMap::target), "cocone")?;
        let blocks: Vec<&Matrix> = cocone.iter().map(LinMap::matrix).collect();
        let m = Matrix::hstack(&blocks, target.as_ref().map_or(0, FinBanSpace::dim));
        LinMap::new(self.space.clone(), target.unwrap_or_else(FinBanSpace::zero), m)
    }

    /// The mediating map into the sum for a cone `fₖ: T -> Sₖ`.
    pub fn pair(&self, cone: &[LinMap]) -> Result<LinMap> {
        self.check_legs(cone.iter().map(LinMap::target))?;
        let source = common(cone.iter().map(LinMap::source), "cone")?;
        let blocks: Vec<&Matrix> = cone.iter().map(LinMap::matrix).collect();
        let m = Matrix::vstack(&blocks, source.as_ref().map_or(0, FinBanSpace::dim));
        LinMap::new(source.unwrap_or_else(FinBanSpace::zero), self.space.clone(), m)
    }

    fn check_legs<'a>(&self, legs: impl Iterator<Item = &'a FinBanSpace>) -> Result<()> {
        let legs: Vec<&FinBanSpace> = legs.collect();
        if legs.len() != self.summands.len() || legs.iter().zip(&self.summands).any(|(l, s)| !l.same_norm(s)) {
            return Err(Error::DimensionMismatch("cone legs do not match the summands".into()));
        }
        Ok(())
    }
}

fn common<'a>(mut spaces: impl Iterator<Item = &'a FinBanSpace>, what: &str) -> Result<Option<FinBanSpace>> {
    let Some(first) = spaces.next() else { return Ok(None) };
    if spaces.any(|s| !s.same_norm(first)) {
        return Err(Error::DimensionMismatch(format!("{what} legs do not share a vertex")));
    }
    Ok(Some(first.clone()))
}

/// The projective tensor product of two ℓ1-like spaces.
///
/// For weighted ℓ1 factors the projective norm is again weighted ℓ1 on the
/// product basis with multiplied weights. Basis order is left-major:
/// `eᵢ ⊗ fⱼ` sits at `i * right.dim() + j`.
#[derive(Debug, Clone)]
pub struct TensorProduct {
    space: FinBanSpace,
    left: FinBanSpace,
    right: FinBanSpace,
}

pub fn projective_tensor(left: &FinBanSpace, right: &FinBanSpace) -> Result<TensorProduct> {
    if !left.is_sum_like() || !right.is_sum_like() {
        return Err(Error::FlavorMismatch("projective tensor needs weighted ℓ1 factors".into()));
    }
    let mut labels = Vec::with_capacity(left.dim() * right.dim());
    let mut weights = Vec::with_capacity(left.dim() * right.dim());
    for i in 0..left.dim() {
        for j in 0..right.dim() {
            labels.push(format!("{}⊗{}", left.labels()[i], right.labels()[j]));
            weights.push(&left.weights()[i] * &right.weights()[j]);
        }
    }
    let space = FinBanSpace::new(labels, weights, Flavor::Sum)?;
    Ok(TensorProduct { space, left: left.clone(), right: right.clone() })
}

impl TensorProduct {
    pub fn space(&self) -> &FinBanSpace {
        &self.space
    }

    pub fn left(&self) -> &FinBanSpace {
        &self.left
    }

    pub fn right(&self) -> &FinBanSpace {
        &self.right
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.right.dim() + j
    }

    /// The bilinear embedding `(a, b) ↦ a ⊗ b`.
    pub fn embed(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
    }
}

/// `f ⊗ g` between the projective tensor products of the sources and targets.
pub fn tensor_maps(f: &LinMap, g: &LinMap) -> Result<LinMap> {
    let s = projective_tensor(f.source(), g.source())?;
    let t = projective_tensor(f.target(), g.target())?;
    LinMap::new(s.space, t.space, f.matrix().kronecker(g.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn l1_sums_add_norms() {
        let d = direct_sum(&[FinBanSpace::l1(2), FinBanSpace::l1(3)]).unwrap();
        assert_eq!(d.space().dim(), 5);
        let d = direct_sum(&[FinBanSpace::l1(1), FinBanSpace::l1(1)]).unwrap();
        assert_eq!(d.space().norm(&[int(1), int(-2)]), int(3));
    }

    #[test]
    fn sum_map_is_the_mediator_of_identities() {
        let k = FinBanSpace::l1(1);
        let d = direct_sum(&[k.clone(), k.clone()]).unwrap();
        let sum = d.copair(&[LinMap::identity(&k), LinMap::identity(&k)]).unwrap();
        assert_eq!(sum.matrix().row(0), &[int(1), int(1)]);
        assert_eq!(sum.operator_norm().unwrap(), int(1));
        for k in 0..2 {
            assert!(sum.compose(&d.injection(k)).unwrap().is_identity());
        }
    }

    #[test]
    fn product_pairs_and_projects() {
        let a = FinBanSpace::linf(2);
        let d = direct_sum(&[a.clone(), a.clone()]).unwrap();
        assert_eq!(d.kind(), SumKind::Product);
        assert_eq!(d.space().norm(&[int(1), int(-3), int(2), int(0)]), int(3));
        let diag = d.pair(&[LinMap::identity(&a), LinMap::identity(&a)]).unwrap();
        assert_eq!(diag.operator_norm().unwrap(), int(1));
        assert!(d.projection(1).compose(&diag).unwrap().is_identity());
    }

    #[test]
    fn mixed_flavors_rejected() {
        let err = direct_sum(&[FinBanSpace::l1(2), FinBanSpace::linf(2)]).unwrap_err();
        assert!(matches!(err, Error::FlavorMismatch(_)));
        assert!(direct_sum(&[FinBanSpace::l1(2), FinBanSpace::linf(1)]).is_ok());
    }

    #[test]
    fn tensor_of_l1() {
        let t = projective_tensor(&FinBanSpace::l1(2), &FinBanSpace::l1(3)).unwrap();
        assert_eq!(t.space().dim(), 6);
        let a = FinBanSpace::sum(vec![int(2), int(3)]).unwrap();
        let b = FinBanSpace::sum(vec![int(5)]).unwrap();
        let t = projective_tensor(&a, &b).unwrap();
        assert_eq!(t.space().norm(&t.embed(&a.basis_vector(1), &b.basis_vector(0))), int(15));
        assert!(projective_tensor(&FinBanSpace::linf(2), &FinBanSpace::l1(2)).is_err());
    }
}
