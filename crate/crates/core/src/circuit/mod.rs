//! Circuit parameters, the classical validation simulator and its spectral probe.

pub mod classical;
pub mod params;
pub mod spectrum;

pub use classical::{
    averaging_check, circuit_energy, energy_drift, coupling_coefficient, normal_mode_frequencies, simulate_classical_circuit, CircuitState,
    AveragingReport, ClassicalCircuitConfig, TimeFunction, Trajectory,
};
pub use params::{
    effective_params, effective_params_with, equilibrium_capacitance, x_rms, EffectiveOptions, EffectiveParams,
    PhysicalCircuitParams, ScaledCouplings, EPS0, HBAR,
};
pub use spectrum::estimate_dominant_frequency;
