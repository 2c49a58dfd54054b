//! Finite-dimensional rational spaces with weighted ℓ1/ℓ∞ norms, the maps
//! between them and the (co)limits used elsewhere in the crate.

mod coend;
mod map;
mod quotient;
mod space;
mod sums;

pub use coend::{
    coend, end, hom_end, kan_extension, nat_end, yoneda_coend, Coend, CoendRelation, End, EndRelation,
    FinCategory, FinFunctor, KanExtension,
};
pub use map::{operator_norm, HomSpace, IsoWitness, LinMap};
pub use quotient::{quotient, QuotientSpace, Subspace};
pub use space::{FinBanSpace, Flavor, VERTEX_LIMIT};
pub use sums::{coproduct_of, direct_sum, product_of, projective_tensor, tensor_maps, DirectSum, SumKind, TensorProduct};
