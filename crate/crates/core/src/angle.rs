use std::f64::consts::{PI, TAU};

/// Reduces an angle to the half-open interval (−π, π].
pub fn wrap(angle: f64) -> f64 {
    let mut r = angle % TAU;
    if r <= -PI {
        r += TAU;
    } else if r > PI {
        r -= TAU;
    }
    r
}

/// Smallest absolute difference between two angles, modulo 2π.
pub fn distance(a: f64, b: f64) -> f64 {
    wrap(a - b).abs()
}
