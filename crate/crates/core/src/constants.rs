//! Physical constants in Gaussian CGS units (CODATA 2018).
//!
//! Every calculator in this crate that needs a dimensionful constant reads
//! it from here.

/// Reduced Planck constant, erg·s.
pub const HBAR: f64 = 1.054_571_817e-27;

/// Speed of light in vacuum, cm/s.
pub const C: f64 = 2.997_924_58e10;

/// Elementary charge, statcoulomb (esu).
pub const E_CHARGE: f64 = 4.803_204_712_570_263e-10;

/// Electron rest mass, g.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-28;

/// Fine-structure constant (dimensionless).
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;

/// Classical electron radius e²/(m c²), cm.
pub fn classical_radius(charge: f64, mass: f64) -> f64 {
    charge * charge / (mass * C * C)
}

/// Reduced Compton wavelength ħ/(m c), cm.
pub fn reduced_compton(mass: f64) -> f64 {
    HBAR / (mass * C)
}
