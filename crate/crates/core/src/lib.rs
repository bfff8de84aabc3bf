pub mod band;
pub mod cyclemap;
pub mod ensemble;
pub mod error;
pub mod experiment;
pub mod propagator;
pub mod su2;
pub mod thermo;

pub use error::{Error, Result};
