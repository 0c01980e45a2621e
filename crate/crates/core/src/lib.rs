pub mod algebras;
pub mod congruence;
pub mod digraph;
pub mod error;
pub mod fixtures;
pub mod gruenberg;
pub mod linalg;
pub mod simplicial;
pub mod magnitude;

pub use error::{Error, Result};
