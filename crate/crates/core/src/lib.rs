pub mod error;
pub mod intlin;
pub mod complexes;
pub mod dga;
pub mod hochschild;
pub mod cyclic;
pub mod filtered;
pub mod ktheory;
pub mod cli;

pub use error::{Error, Result};
