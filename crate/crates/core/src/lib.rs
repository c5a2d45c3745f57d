pub mod cli;
pub mod decomposition;
pub mod error;
pub mod io;
pub mod linalg;
pub mod morphisms;
pub mod path_algebra;
pub mod quiver;
pub mod rational;
pub mod representation;
pub mod sample;
pub mod tda;

pub use error::{Error, Result};
