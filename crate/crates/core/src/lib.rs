pub mod bigjson;
pub mod detline;
pub mod enumerate;
pub mod error;
pub mod hbounds;
pub mod invariants;
pub mod lattice;
pub mod linalg;
pub mod polynomial;

pub use error::{Error, Result};
