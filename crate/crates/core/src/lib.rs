pub mod boolalg;
pub mod bundles;
pub mod error;
pub mod finban;
pub mod linalg;
pub mod lp;
pub mod measures;
pub mod random;
pub mod rational;
pub mod shcosh;
pub mod simple;

pub use error::{Error, Result};
