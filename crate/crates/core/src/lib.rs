//! Simulators and calculators for Aharonov-Bohm phases in setups where no
//! single charged particle encircles the flux.
//!
//! * [`fock`]: sparse second-quantized states with phased vertices.
//! * [`geometry`]: fluxons, particle paths, and gauge realizations.
//! * [`scenarios`]: pair-creation/annihilation interferometers.
//! * [`ring`]: ring-condensate Faraday rotation and the AB-Zeeman spectrum.
//! * [`birefringence`]: the Euler-Heisenberg / orientation-weighted loop toy.
//! * [`setup`]: the `.abl` layout language (parse, validate, compile, format).

pub mod angle;
pub mod birefringence;
pub mod constants;
pub mod fock;
pub mod geometry;
pub mod grid;
pub mod ring;
pub mod scenarios;
pub mod setup;

pub use fock::{FockError, FockState, Mode, ModeKind, ModeRegistry, VertexPhase};
pub use geometry::{ChargeSign, Fluxon, GaugeChoice, GeometryError, ParticlePath, Vec2};
pub use scenarios::{JonesVector, ScenarioError, ScenarioResult};
pub use setup::{Diagnostic, Setup, Severity};
