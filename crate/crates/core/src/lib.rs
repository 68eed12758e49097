pub mod circuit;
pub mod cli;
pub mod config;
pub mod entanglement;
pub mod error;
pub mod fock;
pub mod format;
pub mod ode;
pub mod poisson;
pub mod readout;

pub use error::{Error, Result};
