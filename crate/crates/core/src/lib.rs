//! Interference analysis for RIS-assisted D-band networks.
//!
//! Two models of the same system, built to cross-validate each other:
//!
//! - [`analytic`]: closed-form far-field link gains and expected aggregate
//!   interference of a Poisson interferer field around a wall-mounted RIS,
//!   with an adaptive quadrature kernel for the attenuation integral;
//! - [`phase_sim`]: an element-level coherent field simulator summing exact
//!   per-element-pair responses, valid in the near field of large arrays;
//! - [`monte_carlo`]: seeded Poisson drops, orientation modes and ensemble
//!   statistics over the phase simulator;
//! - [`experiments`]: the canned sweeps exposed by the `ris-sim` CLI.
//!
//! All lengths are SI meters, powers watts and gains linear; dB appears only
//! at I/O boundaries.

pub mod analytic;
pub mod config;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod monte_carlo;
pub mod phase_sim;
pub mod quadrature;
pub mod table;
pub mod vec3;

pub use analytic::{
    los_interference_gain, los_link_gain, mean_los_interference, mean_ris_incident_interference,
    mean_ris_relayed_interference, ris_link_gain, to_db, LinkBudget, StochasticPopulation,
};
pub use error::SimError;
pub use geometry::{
    aperture_area, near_field_radius, path_between, PlanarArray, RayPath, Scene, SPEED_OF_LIGHT,
};
pub use monte_carlo::{
    assign_orientations, run_ensemble, sample_interferers, simulate_realization, EnsembleStats,
    InterfererField, InterfererNode, OrientationMode, Target,
};
pub use phase_sim::{
    incident_field_at_ris, received_power_direct, received_power_via_ris, ris_reflection_phases,
    steering_phases, IncidentField, PhaseProfile,
};
pub use quadrature::attenuation_integral;
pub use vec3::Vec3;
