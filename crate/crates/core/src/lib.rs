//! Standard QAOA and ADAPT-QAOA for feature-selection QUBOs on an ideal
//! statevector simulator, an exact classical reference solver, and a
//! hardware model that estimates time-to-solution and total error
//! probability from device topology and calibration data.

pub mod adapt;
pub mod classical;
pub mod error;
pub mod hardware;
pub mod optimizer;
pub mod problem;
pub mod qaoa;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
