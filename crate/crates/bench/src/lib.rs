//! Benchmark fixtures shared by the criterion suites.

use std::sync::Arc;

use abflux_core::fock::{FockState, Mode, ModeKind, ModeRegistry};
use abflux_core::ring::RingParams;

/// `n` photon modes of capacity `cap`, with one photon in each of the first
/// half, beam-split pairwise so the support is wide.
pub fn photon_state(n: usize, cap: u8) -> FockState {
    let modes = (0..n).map(|i| Mode::with_capacity(format!("p{i}"), ModeKind::Photon, cap)).collect();
    let reg = Arc::new(ModeRegistry::new(modes).expect("distinct names"));
    let occ: Vec<u8> = (0..n).map(|i| u8::from(i < n / 2)).collect();
    let mut s = FockState::new(reg, &occ).expect("within capacity");
    for i in 0..n / 2 {
        s = s.beam_splitter(&format!("p{i}"), &format!("p{}", i + n / 2)).expect("valid modes");
    }
    s
}

/// The ring from the reference estimate, driven at `omega`.
pub fn reference_ring(omega: f64) -> RingParams {
    RingParams::electron(1e-4, 1.0, 1, omega)
}
