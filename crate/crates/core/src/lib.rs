pub mod error;
pub mod fermion;
pub mod game;
pub mod linalg;
pub mod metts;
pub mod model;
pub mod pauli;
pub mod thermal;

pub use error::{Error, Result};
