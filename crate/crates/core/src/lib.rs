pub mod asymptotics;
pub mod delta;
pub mod error;
pub mod matrix;
pub mod local_model;
pub mod model;
pub mod numerics;
pub mod pde;
pub mod phase;
pub mod scattering;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
