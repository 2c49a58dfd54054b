//! Seeded generators for randomized checks. Values are small rationals so
//! that exact arithmetic stays cheap.

use num_traits::Zero;
use rand::Rng;

use crate::boolalg::{BoolAlg, Element};
use crate::error::Result;
use crate::finban::{FinBanSpace, Flavor};
use crate::measures::{MeasureAlgebra, VectorMeasure};
use crate::rational::{frac, Rational};
use crate::simple::SimpleElement;

/// A rational `p/q` with `|p| ≤ 4`, `1 ≤ q ≤ 3`.
pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    frac(rng.random_range(-4..=4), rng.random_range(1..=3))
}

/// A positive rational `p/q` with `1 ≤ p ≤ 4`, `1 ≤ q ≤ 3`.
pub fn positive<R: Rng>(rng: &mut R) -> Rational {
    frac(rng.random_range(1..=4), rng.random_range(1..=3))
}

pub fn vector<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rational(rng)).collect()
}

/// A weighted space of the given flavor with random positive weights.
pub fn space<R: Rng>(rng: &mut R, dim: usize, sum: bool) -> FinBanSpace {
    let weights = (0..dim).map(|_| positive(rng)).collect();
    let flavor = if sum { Flavor::Sum } else { Flavor::Sup };
    let labels = (0..dim).map(|i| format!("e{i}")).collect();
    FinBanSpace::new(labels, weights, flavor).expect("positive weights")
}

/// A nonzero element of the algebra.
pub fn element<R: Rng>(rng: &mut R, algebra: &BoolAlg) -> Element {
    let n = algebra.n_atoms();
    Element::from_bits(rng.random_range(1..(1u64 << n)))
}

/// Any element, possibly the bottom.
pub fn any_element<R: Rng>(rng: &mut R, algebra: &BoolAlg) -> Element {
    Element::from_bits(rng.random_range(0..(1u64 << algebra.n_atoms())))
}

pub fn measure<R: Rng>(rng: &mut R, algebra: &BoolAlg, target: &FinBanSpace) -> Result<VectorMeasure> {
    let values = (0..algebra.n_atoms()).map(|_| vector(rng, target.dim())).collect();
    VectorMeasure::new(algebra.clone(), target.clone(), values)
}

/// A measure algebra with positive mass on every atom.
pub fn positive_measure<R: Rng>(rng: &mut R, algebra: &BoolAlg) -> Result<MeasureAlgebra> {
    MeasureAlgebra::new(algebra.clone(), (0..algebra.n_atoms()).map(|_| positive(rng)).collect())
}

pub fn simple<R: Rng>(rng: &mut R, algebra: &BoolAlg) -> SimpleElement {
    SimpleElement::from_atom_values(algebra, vector(rng, algebra.n_atoms())).expect("one value per atom")
}

/// A simple function vanishing off `e`.
pub fn simple_on<R: Rng>(rng: &mut R, algebra: &BoolAlg, e: Element) -> SimpleElement {
    let values = (0..algebra.n_atoms()).map(|i| if e.has_atom(i) { rational(rng) } else { Rational::zero() }).collect();
    SimpleElement::from_atom_values(algebra, values).expect("one value per atom")
}
