//! Vacuum nonlinearity: the Euler-Heisenberg quartic Lagrangian and a toy
//! model of virtual electron-positron loops threaded by a magnetic field.
//!
//! A loop and its charge-conjugate partner pick up opposite AB phases, so
//! with equal weights the odd part cancels. Weighting the two orientations
//! by their magnetic-moment energy leaves a net phase `≈ εφ ∝ e⁴B²/m⁴`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::constants::{C, E_CHARGE, ELECTRON_MASS, FINE_STRUCTURE, HBAR};
use crate::grid;

/// Largest |φ| or |ε| accepted by the scaling fits.
pub const REGIME_LIMIT: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BirefringenceError {
    #[error("model out of range: epsilon = {0} (need |epsilon| < 1)")]
    EpsilonOutOfRange(f64),
    #[error("regime violation at {parameter} = {value:e}: phi = {phi:e}, epsilon = {epsilon:e} (limit {REGIME_LIMIT})")]
    RegimeViolation { parameter: &'static str, value: f64, phi: f64, epsilon: f64 },
    #[error("grid must span at least two decades with positive values")]
    GridTooNarrow,
    #[error("net phase vanishes at some grid points but not all")]
    PartialZero,
    #[error("invalid loop parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}

pub type Result<T> = std::result::Result<T, BirefringenceError>;

/// Weights of the two invariants in `(E²−B²)² + 7(E·B)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EhCoefficients {
    pub quadratic: f64,
    pub pseudoscalar: f64,
}

impl Default for EhCoefficients {
    fn default() -> Self {
        EhCoefficients { quadratic: 1.0, pseudoscalar: 7.0 }
    }
}

pub type Vec3 = [f64; 3];

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldConfiguration {
    /// Electric field (statvolt/cm, or natural units).
    pub e: Vec3,
    /// Magnetic field (gauss, or natural units).
    pub b: Vec3,
}

impl FieldConfiguration {
    pub fn new(e: Vec3, b: Vec3) -> Self {
        FieldConfiguration { e, b }
    }

    pub fn is_finite(&self) -> bool {
        self.e.iter().chain(&self.b).all(|x| x.is_finite())
    }

    /// `E² − B²`.
    pub fn scalar_invariant(&self) -> f64 {
        dot(self.e, self.e) - dot(self.b, self.b)
    }

    /// `E·B`.
    pub fn pseudoscalar_invariant(&self) -> f64 {
        dot(self.e, self.b)
    }
}

fn eh_bracket(fields: &FieldConfiguration, coeffs: EhCoefficients) -> f64 {
    let s = fields.scalar_invariant();
    let p = fields.pseudoscalar_invariant();
    coeffs.quadratic * s * s + coeffs.pseudoscalar * p * p
}

/// `2α²/(45(4π)²m⁴)·[(E²−B²)² + 7(E·B)²]` with ħ = c = 1; fields and mass
/// share one energy unit.
pub fn eh_lagrangian_natural(fields: &FieldConfiguration, mass: f64, coeffs: EhCoefficients) -> f64 {
    let pre = 2.0 * FINE_STRUCTURE * FINE_STRUCTURE / (45.0 * (4.0 * PI).powi(2) * mass.powi(4));
    pre * eh_bracket(fields, coeffs)
}

/// Euler-Heisenberg energy density (erg/cm³) for Gaussian fields and the
/// electron mass.
pub fn eh_lagrangian(fields: &FieldConfiguration) -> f64 {
    eh_lagrangian_cgs(fields, ELECTRON_MASS, EhCoefficients::default())
}

/// Gaussian form: the natural-units prefactor times `(ħc)³/(mc²)⁴`.
pub fn eh_lagrangian_cgs(fields: &FieldConfiguration, mass: f64, coeffs: EhCoefficients) -> f64 {
    let rest = mass * C * C;
    let pre = 2.0 * FINE_STRUCTURE * FINE_STRUCTURE / (45.0 * (4.0 * PI).powi(2))
        * (HBAR * C).powi(3)
        / rest.powi(4);
    pre * eh_bracket(fields, coeffs)
}

/// Which strong field the probe wave travels through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Background {
    Magnetic,
    Electric,
}

/// Second derivative of the Lagrangian in the amplitude of a plane probe
/// wave along z, background along x. `parallel` puts the probe field of the
/// other kind along x, so a magnetic background sees a parallel probe E.
fn probe_curvature(background: Background, parallel: bool, coeffs: EhCoefficients) -> f64 {
    let strength = 1.0;
    let x = [1.0, 0.0, 0.0];
    let y = [0.0, 1.0, 0.0];
    // e along p, b = ẑ × e
    let (e_dir, b_dir) = match (background, parallel) {
        (Background::Magnetic, true) | (Background::Electric, false) => (x, y),
        (Background::Magnetic, false) | (Background::Electric, true) => (y, scale(x, -1.0)),
    };
    let eval = |amp: f64| {
        let (mut e, mut b) = (scale(e_dir, amp), scale(b_dir, amp));
        match background {
            Background::Magnetic => b = add(b, scale(x, strength)),
            Background::Electric => e = add(e, scale(x, strength)),
        }
        eh_lagrangian_natural(&FieldConfiguration::new(e, b), 1.0, coeffs)
    };
    let h = f64::EPSILON.powf(0.25) * strength;
    (eval(h) - 2.0 * eval(0.0) + eval(-h)) / (h * h)
}

/// `(n∥−1)/(n⊥−1)` for a probe in a strong background, read off from
/// finite-difference probe curvatures of the Lagrangian.
pub fn eh_birefringence_ratio_with(background: Background, coeffs: EhCoefficients) -> f64 {
    probe_curvature(background, true, coeffs) / probe_curvature(background, false, coeffs)
}

/// Birefringence ratio in a magnetic background with the standard weights.
pub fn eh_birefringence_ratio() -> f64 {
    eh_birefringence_ratio_with(Background::Magnetic, EhCoefficients::default())
}

/// A virtual pair loop of Compton size in a magnetic field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopModel {
    /// Particle mass (g).
    pub mass: f64,
    /// Field strength (gauss).
    pub b_field: f64,
    /// Angle between the loop plane and the field (rad).
    pub theta: f64,
    /// Loop area (cm²).
    pub area: f64,
    /// Fixed orientation asymmetry; `None` uses μB/(mc²).
    pub epsilon_override: Option<f64>,
}

impl LoopModel {
    /// Electron loop with area `(ħ/mc)²`.
    pub fn electron(b_field: f64, theta: f64) -> Self {
        Self::with_mass(ELECTRON_MASS, b_field, theta)
    }

    pub fn with_mass(mass: f64, b_field: f64, theta: f64) -> Self {
        let compton = HBAR / (mass * C);
        LoopModel { mass, b_field, theta, area: compton * compton, epsilon_override: None }
    }

    /// Same model with the Compton area of a different mass.
    pub fn rescaled_mass(&self, mass: f64) -> Self {
        Self::with_mass(mass, self.b_field, self.theta).with_epsilon(self.epsilon_override)
    }

    pub fn with_field(&self, b_field: f64) -> Self {
        LoopModel { b_field, ..*self }
    }

    pub fn with_epsilon(self, epsilon: Option<f64>) -> Self {
        LoopModel { epsilon_override: epsilon, ..self }
    }

    /// Loop magnetic moment `e·A·ω/c` with `ω = mc²/ħ`.
    pub fn magnetic_moment(&self) -> f64 {
        E_CHARGE * self.area * (self.mass * C * C / HBAR) / C
    }

    /// `μB/(mc²)` unless overridden.
    pub fn epsilon(&self) -> f64 {
        self.epsilon_override
            .unwrap_or_else(|| self.magnetic_moment() * self.b_field / (self.mass * C * C))
    }

    fn validate(&self) -> Result<()> {
        for (name, value) in [("mass", self.mass), ("area", self.area)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(BirefringenceError::InvalidParameter { name, value });
            }
        }
        for (name, value) in [("b_field", self.b_field), ("theta", self.theta)] {
            if !value.is_finite() {
                return Err(BirefringenceError::InvalidParameter { name, value });
            }
        }
        Ok(())
    }
}

/// `(e/ħc)·B·A·sin θ`.
pub fn loop_ab_phase(model: &LoopModel) -> f64 {
    E_CHARGE / (HBAR * C) * model.b_field * model.area * model.theta.sin()
}

/// `w₊e^{iφ} + w₋e^{−iφ}` with `w± = (1±ε)/2`, i.e. `cos φ + iε sin φ`.
pub fn orientation_sum(phi: f64, epsilon: f64) -> Result<Complex64> {
    if epsilon.is_nan() || epsilon.abs() >= 1.0 {
        return Err(BirefringenceError::EpsilonOutOfRange(epsilon));
    }
    Ok(Complex64::new(phi.cos(), epsilon * phi.sin()))
}

pub fn two_orientation_amplitude(model: &LoopModel) -> Result<Complex64> {
    model.validate()?;
    orientation_sum(loop_ab_phase(model), model.epsilon())
}

/// Net phase `arg` of the weighted two-orientation amplitude.
pub fn net_phase(model: &LoopModel) -> Result<f64> {
    Ok(two_orientation_amplitude(model)?.arg())
}

fn regime_checked(model: &LoopModel, parameter: &'static str, value: f64) -> Result<f64> {
    let (phi, epsilon) = (loop_ab_phase(model), model.epsilon());
    if phi.abs() > REGIME_LIMIT || epsilon.abs() > REGIME_LIMIT {
        return Err(BirefringenceError::RegimeViolation { parameter, value, phi, epsilon });
    }
    net_phase(model)
}

fn fit_power(xs: &[f64], phases: &[f64]) -> Result<Option<f64>> {
    let zeros = phases.iter().filter(|p| **p == 0.0).count();
    if zeros == phases.len() {
        return Ok(None);
    }
    if zeros > 0 {
        return Err(BirefringenceError::PartialZero);
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = phases.iter().map(|p| p.abs().ln()).collect();
    Ok(grid::fit_slope(&lx, &ly))
}

fn check_span(values: &[f64]) -> Result<()> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(0.0, f64::max);
    if !(lo > 0.0 && hi / lo >= 100.0 * (1.0 - 1e-12)) {
        return Err(BirefringenceError::GridTooNarrow);
    }
    Ok(())
}

/// Net phase at each field on the grid.
pub fn net_phase_sweep(base: &LoopModel, fields: &[f64]) -> Result<Vec<f64>> {
    fields
        .iter()
        .map(|&b| regime_checked(&base.with_field(b), "b_field", b))
        .collect()
}

/// Fitted exponent of |net phase| against B; `None` when every phase is
/// exactly zero.
pub fn net_phase_scaling(base: &LoopModel, fields: &[f64]) -> Result<Option<f64>> {
    check_span(fields)?;
    fit_power(fields, &net_phase_sweep(base, fields)?)
}

/// Fitted exponent of |net phase| against the loop mass.
pub fn net_phase_mass_scaling(base: &LoopModel, masses: &[f64]) -> Result<Option<f64>> {
    check_span(masses)?;
    let phases = masses
        .iter()
        .map(|&m| regime_checked(&base.rescaled_mass(m), "mass", m))
        .collect::<Result<Vec<_>>>()?;
    fit_power(masses, &phases)
}
