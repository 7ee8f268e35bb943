pub mod conditioning;
pub mod error;
pub mod extremal;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod optimizer;
pub mod reproduce;

pub use error::{Error, Result};
