//! Charged ring threaded by flux: AB-Zeeman levels and the linear response
//! of a ring condensate to circularly polarized light.
//!
//! Gaussian CGS units throughout.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::{self, C, HBAR};

/// Relative distance from `|β|ω₀` below which the drive counts as resonant.
pub const RESONANCE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RingError {
    #[error("invalid ring parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("resonant denominator at omega = {omega:e} rad/s (|beta| omega0 = {resonance:e})")]
    Resonance { omega: f64, resonance: f64 },
    #[error("closed-form rotation requires a single particle, got N = {0}")]
    NotSingleParticle(u32),
    #[error("m_range must be at least 2, got {0}")]
    MRangeTooSmall(i64),
    #[error("lambda_bar = {lambda_bar:e} does not match c/omega = {expected:e}")]
    InconsistentWavelength { lambda_bar: f64, expected: f64 },
}

pub type Result<T> = std::result::Result<T, RingError>;

/// Denominator convention for the S-matrix entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignConvention {
    /// `ω ∓ βω₀`, the same structure as the currents and forward amplitudes.
    #[default]
    ResponseChain,
    /// `ω ± βω₀`.
    AsPrinted,
}

impl SignConvention {
    fn sign(self) -> f64 {
        match self {
            SignConvention::ResponseChain => -1.0,
            SignConvention::AsPrinted => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingParams {
    /// Ring radius (cm).
    pub radius: f64,
    /// Flux in units of the flux quantum.
    pub beta: f64,
    pub n_particles: u32,
    /// Particle mass (g).
    pub mass: f64,
    /// Particle charge (esu).
    pub charge: f64,
    /// Drive angular frequency (rad/s).
    pub omega: f64,
    /// Reduced wavelength c/ω (cm).
    pub lambda_bar: f64,
}

impl RingParams {
    /// Electrons on a ring driven at angular frequency `omega`.
    pub fn electron(radius: f64, beta: f64, n_particles: u32, omega: f64) -> Self {
        RingParams {
            radius,
            beta,
            n_particles,
            mass: constants::ELECTRON_MASS,
            charge: constants::E_CHARGE,
            omega,
            lambda_bar: C / omega,
        }
    }

    /// Electrons on a ring driven at reduced wavelength `lambda_bar`.
    pub fn electron_at_wavelength(radius: f64, beta: f64, n_particles: u32, lambda_bar: f64) -> Self {
        Self::electron(radius, beta, n_particles, C / lambda_bar)
    }

    /// Linear density N/2πR (1/cm).
    pub fn n_density(&self) -> f64 {
        self.n_particles as f64 / (TAU * self.radius)
    }

    pub fn wavenumber(&self) -> f64 {
        1.0 / self.lambda_bar
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("radius", self.radius),
            ("mass", self.mass),
            ("omega", self.omega),
            ("lambda_bar", self.lambda_bar),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(RingError::InvalidParameter { name, value });
            }
        }
        if !self.beta.is_finite() {
            return Err(RingError::InvalidParameter { name: "beta", value: self.beta });
        }
        if !self.charge.is_finite() || self.charge == 0.0 {
            return Err(RingError::InvalidParameter { name: "charge", value: self.charge });
        }
        if self.n_particles == 0 {
            return Err(RingError::InvalidParameter { name: "n_particles", value: 0.0 });
        }
        let expected = C / self.omega;
        if ((self.lambda_bar - expected) / expected).abs() > 1e-9 {
            return Err(RingError::InconsistentWavelength { lambda_bar: self.lambda_bar, expected });
        }
        Ok(())
    }

    fn check_drive(&self) -> Result<()> {
        self.validate()?;
        let resonance = self.beta.abs() * omega0(self);
        if (self.omega - resonance).abs() <= RESONANCE_TOLERANCE * self.omega {
            return Err(RingError::Resonance { omega: self.omega, resonance });
        }
        Ok(())
    }

    fn classical_radius(&self) -> f64 {
        constants::classical_radius(self.charge, self.mass)
    }
}

/// ω₀ = ħ/(2mR²).
pub fn omega0(params: &RingParams) -> f64 {
    HBAR / (2.0 * params.mass * params.radius * params.radius)
}

/// Phase-response amplitudes per unit incident `A±`:
/// `(1/√2)(eR/c)·βω₀/(βω₀ ± ω)`.
pub fn response_coefficients(params: &RingParams) -> Result<(f64, f64)> {
    params.check_drive()?;
    let bw = params.beta * omega0(params);
    let pre = FRAC_1_SQRT_2 * params.charge * params.radius / C;
    Ok((pre * bw / (bw + params.omega), pre * bw / (bw - params.omega)))
}

/// Ring current densities per unit `A±`:
/// `±i(n e²/mc)·ω/(ω ∓ βω₀)/√2`.
pub fn ring_currents(params: &RingParams) -> Result<(Complex64, Complex64)> {
    params.check_drive()?;
    let bw = params.beta * omega0(params);
    let w = params.omega;
    let pre = params.n_density() * params.charge * params.charge / (params.mass * C) * FRAC_1_SQRT_2;
    Ok((
        Complex64::new(0.0, pre * w / (w - bw)),
        Complex64::new(0.0, -pre * w / (w + bw)),
    ))
}

/// Forward scattering amplitudes `(N/2)·r₀·ω/(ω ∓ βω₀)` (cm).
pub fn forward_amplitude(params: &RingParams) -> Result<(Complex64, Complex64)> {
    params.check_drive()?;
    let bw = params.beta * omega0(params);
    let w = params.omega;
    let pre = 0.5 * params.n_particles as f64 * params.classical_radius();
    Ok((Complex64::new(pre * w / (w - bw), 0.0), Complex64::new(pre * w / (w + bw), 0.0)))
}

/// Imaginary parts `x±` of the S-matrix entries `1 + i x±` and their
/// difference, the latter formed without cancellation.
fn s_matrix_parts(params: &RingParams, convention: SignConvention) -> Result<(f64, f64, f64)> {
    params.check_drive()?;
    let bw = convention.sign() * params.beta * omega0(params);
    let w = params.omega;
    let pre = params.n_particles as f64 * params.classical_radius() * params.wavenumber();
    let x_plus = pre * w / (w + bw);
    let x_minus = pre * w / (w - bw);
    let diff = -pre * w * 2.0 * bw / ((w + bw) * (w - bw));
    Ok((x_plus, x_minus, diff))
}

/// S-matrix entries `1 + i N r₀ k ω/(ω ∓ βω₀)`; at N = 1 this is the
/// single-electron form `1 + i r₀ω/(λ̄(ω ∓ βω₀))`.
pub fn s_matrix(params: &RingParams, convention: SignConvention) -> Result<(Complex64, Complex64)> {
    let (xp, xm, _) = s_matrix_parts(params, convention)?;
    Ok((Complex64::new(1.0, xp), Complex64::new(1.0, xm)))
}

/// Rotation angle `arg S₊ − arg S₋`.
pub fn faraday_rotation(params: &RingParams, convention: SignConvention) -> Result<f64> {
    let (xp, xm, diff) = s_matrix_parts(params, convention)?;
    Ok((diff / (1.0 + xp * xm)).atan())
}

/// Single-particle closed form `r₀·β·ħ/(m c R²)`.
pub fn faraday_rotation_closed_form(params: &RingParams) -> Result<f64> {
    params.validate()?;
    if params.n_particles != 1 {
        return Err(RingError::NotSingleParticle(params.n_particles));
    }
    Ok(params.classical_radius() * params.beta * HBAR / (params.mass * C * params.radius * params.radius))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResponseResult {
    pub s_plus: f64,
    pub s_minus: f64,
    pub j_plus: Complex64,
    pub j_minus: Complex64,
    pub f_plus: Complex64,
    pub f_minus: Complex64,
    pub smat_plus: Complex64,
    pub smat_minus: Complex64,
    pub delta_theta: f64,
}

pub fn response(params: &RingParams, convention: SignConvention) -> Result<ResponseResult> {
    let (s_plus, s_minus) = response_coefficients(params)?;
    let (j_plus, j_minus) = ring_currents(params)?;
    let (f_plus, f_minus) = forward_amplitude(params)?;
    let (smat_plus, smat_minus) = s_matrix(params, convention)?;
    Ok(ResponseResult {
        s_plus,
        s_minus,
        j_plus,
        j_minus,
        f_plus,
        f_minus,
        smat_plus,
        smat_minus,
        delta_theta: faraday_rotation(params, convention)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeemanSpectrum {
    pub alpha: f64,
    /// E_m (erg) for |m| ≤ m_range.
    pub levels: BTreeMap<i64, f64>,
    pub ground_energy: f64,
    /// Every m within relative 1e-12 of the ground energy, ascending.
    pub ground_m: Vec<i64>,
}

impl ZeemanSpectrum {
    pub fn is_degenerate(&self) -> bool {
        self.ground_m.len() > 1
    }
}

/// Single-channel ring levels `E_m = ħ²(m−α)²/(2mR²)`.
pub fn ab_zeeman_spectrum(alpha: f64, m_range: i64, ring: &RingParams) -> Result<ZeemanSpectrum> {
    if m_range < 2 {
        return Err(RingError::MRangeTooSmall(m_range));
    }
    if !(ring.radius.is_finite() && ring.radius > 0.0) {
        return Err(RingError::InvalidParameter { name: "radius", value: ring.radius });
    }
    if !(ring.mass.is_finite() && ring.mass > 0.0) {
        return Err(RingError::InvalidParameter { name: "mass", value: ring.mass });
    }
    let unit = HBAR * HBAR / (2.0 * ring.mass * ring.radius * ring.radius);
    let levels: BTreeMap<i64, f64> = (-m_range..=m_range)
        .map(|m| {
            let d = m as f64 - alpha;
            (m, unit * d * d)
        })
        .collect();
    let ground_energy = levels.values().copied().fold(f64::INFINITY, f64::min);
    let tol = 1e-12 * ground_energy.max(unit * 1e-12);
    let ground_m = levels
        .iter()
        .filter(|(_, &e)| e - ground_energy <= tol)
        .map(|(&m, _)| m)
        .collect();
    Ok(ZeemanSpectrum { alpha, levels, ground_energy, ground_m })
}
