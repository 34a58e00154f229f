//! The pair-creation/annihilation interferometers.
//!
//! Every layout puts a single fluxon at the origin. Electrons and holes are
//! split by beam splitters, travel along arcs that never close a loop on
//! their own, and recombine into photons; postselecting on full
//! recombination leaves the AB phase in the relative phase of the photon
//! state.
//!
//! Beam-splitter input ports are chosen so that at zero flux every output is
//! the symmetric superposition. With the symmetric splitter and the
//! Jordan-Wigner ordering this requires one flipped input port in the
//! `n`-pair ring when `n` is even (the wrap-around pairing reorders an odd
//! number of fermions).

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::angle;
use crate::fock::{FockError, FockState, Mode, ModeKind, ModeRegistry, VertexPhase};
use crate::geometry::{self, ChargeSign, Fluxon, GaugeChoice, GeometryError, ParticlePath, Vec2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("pair count {0} out of range 2..=4")]
    PairCountOutOfRange(usize),
    #[error("state has support outside the two reference kets")]
    SupportOutsideSubspace,
    #[error("result has no reference kets")]
    NoReferenceKets,
    #[error("Jones vector is not normalized (|ex|²+|ey|² = {0})")]
    UnnormalizedJones(f64),
}

pub type Result<T> = std::result::Result<T, ScenarioError>;

/// Postselected output of an interferometer run.
#[derive(Debug, Clone)]
pub struct ScenarioResult {
    /// Normalized postselected state. Its global phase is fixed so the first
    /// reference ket (or the lexicographically largest ket) has a real,
    /// positive amplitude.
    pub final_state: FockState,
    pub postselection_probability: f64,
    /// `arg(amp_b) − arg(amp_a)` in (−π, π] between the reference kets.
    pub relative_phase: Option<f64>,
    pub reference_kets: Option<(Vec<u8>, Vec<u8>)>,
    pub gauge_used: GaugeChoice,
    /// AB phase accumulated along each charged mode's path, by mode name.
    pub branch_phases: BTreeMap<String, f64>,
}

impl ScenarioResult {
    /// Overlap magnitude between two results' final states.
    pub fn fidelity_with(&self, other: &FockState) -> Result<f64> {
        Ok(self.final_state.overlap(other)?.norm())
    }
}

/// Builds a `ScenarioResult` from a postselected state.
pub(crate) fn finish(
    state: FockState,
    probability: f64,
    reference_kets: Option<(Vec<u8>, Vec<u8>)>,
    gauge: &GaugeChoice,
    branch_phases: BTreeMap<String, f64>,
) -> Result<ScenarioResult> {
    let anchor = match &reference_kets {
        Some((a, _)) => Some(a.clone()),
        None => state.terms().next_back().map(|(k, _)| k.to_vec()),
    };
    let final_state = match anchor {
        Some(k) => {
            let a = state.amplitude(&k);
            if a.norm() > 0.0 {
                state.scaled(a.conj() / a.norm())
            } else {
                state
            }
        }
        None => state,
    };
    let relative_phase = match &reference_kets {
        Some((a, b)) => Some(final_state.relative_phase(a, b)?),
        None => None,
    };
    Ok(ScenarioResult {
        final_state,
        postselection_probability: probability,
        relative_phase,
        reference_kets,
        gauge_used: gauge.clone(),
        branch_phases,
    })
}

fn registry(modes: Vec<Mode>) -> Result<Arc<ModeRegistry>> {
    Ok(Arc::new(ModeRegistry::new(modes)?))
}

fn no_charges(reg: &ModeRegistry) -> impl Fn(&[u8]) -> bool + '_ {
    move |occ: &[u8]| {
        reg.modes().iter().zip(occ).all(|(m, &n)| !m.kind.is_charged() || n == 0)
    }
}

fn phases_of(
    paths: &[(String, ParticlePath)],
    fluxons: &[Fluxon],
    gauge: &GaugeChoice,
) -> Result<BTreeMap<String, f64>> {
    paths
        .iter()
        .map(|(name, p)| Ok((name.clone(), geometry::ab_phase(p, fluxons, gauge)?)))
        .collect()
}

fn arc(charge: ChargeSign, start: f64, end: f64) -> Result<ParticlePath> {
    // Two chords per quarter turn.
    let segments = ((end - start).abs() / FRAC_PI_2 * 2.0).ceil().max(2.0) as usize;
    Ok(ParticlePath::arc(charge, Vec2::new(0.0, 0.0), 1.0, start, end, segments)?)
}

/// Charged-particle trajectories of a layout, keyed by mode name.
#[derive(Debug, Clone)]
pub struct Layout {
    pub fluxon_position: Vec2,
    pub paths: Vec<(String, ParticlePath)>,
}

impl Layout {
    /// Completed loops of every single particle around the fluxon.
    pub fn single_particle_loops(&self) -> Result<Vec<(String, i64)>> {
        self.paths
            .iter()
            .map(|(n, p)| Ok((n.clone(), geometry::completed_loops(p, self.fluxon_position)?)))
            .collect()
    }
}

/// Trajectories of the half-loop pair interferometer: electron split at
/// (0, 1), hole split at (0, −1), recombination at (−1, 0) and (1, 0).
pub fn pair_half_loop_layout() -> Result<Layout> {
    Ok(Layout {
        fluxon_position: Vec2::new(0.0, 0.0),
        paths: vec![
            ("e_L".into(), arc(ChargeSign::Electron, FRAC_PI_2, PI)?),
            ("e_R".into(), arc(ChargeSign::Electron, FRAC_PI_2, 0.0)?),
            ("h_L".into(), arc(ChargeSign::Hole, -FRAC_PI_2, -PI)?),
            ("h_R".into(), arc(ChargeSign::Hole, -FRAC_PI_2, 0.0)?),
        ],
    })
}

/// Electron and hole each split into left and right movers around the
/// fluxon and may recombine on either side; postselecting on "no electron,
/// no hole" leaves `(|1_L 0_R⟩ + e^{2πiα}|0_L 1_R⟩)/√2`.
pub fn run_pair_half_loop(alpha: f64, gauge: &GaugeChoice) -> Result<ScenarioResult> {
    let reg = registry(vec![
        Mode::new("e_L", ModeKind::Electron),
        Mode::new("e_R", ModeKind::Electron),
        Mode::new("h_L", ModeKind::Hole),
        Mode::new("h_R", ModeKind::Hole),
        Mode::new("g_L", ModeKind::Photon),
        Mode::new("g_R", ModeKind::Photon),
    ])?;
    let fluxons = [Fluxon::at_origin(alpha)];
    let layout = pair_half_loop_layout()?;
    let phases = phases_of(&layout.paths, &fluxons, gauge)?;

    let initial = reg.occupation(&[("e_R", 1), ("h_L", 1)])?;
    let state = FockState::new(reg.clone(), &initial)?
        .beam_splitter("e_L", "e_R")?
        .beam_splitter("h_L", "h_R")?
        .pair_recombination("e_L", "h_L", "g_L", VertexPhase(phases["e_L"] + phases["h_L"]))?
        .pair_recombination("e_R", "h_R", "g_R", VertexPhase(phases["e_R"] + phases["h_R"]))?;
    let (kept, probability) = state.postselect(no_charges(&reg))?;

    let kets = (reg.occupation(&[("g_L", 1)])?, reg.occupation(&[("g_R", 1)])?);
    finish(kept, probability, Some(kets), gauge, phases)
}

fn atom_registry() -> Arc<ModeRegistry> {
    Arc::new(
        ModeRegistry::new(vec![Mode::new("A_L", ModeKind::Atom), Mode::new("A_R", ModeKind::Atom)])
            .expect("static registry"),
    )
}

/// `(|e,g⟩ + e^{iφ}|g,e⟩)/√2` on the two-atom registry `A_L, A_R`.
pub fn atom_bell_state(phase: f64) -> FockState {
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    FockState::from_terms(
        atom_registry(),
        [(vec![1, 0], Complex64::new(amp, 0.0)), (vec![0, 1], Complex64::from_polar(amp, phase))],
    )
    .expect("static kets")
}

/// Hands the photon state over to two atoms: `|1_L 0_R⟩ → |e,g⟩` and
/// `|0_L 1_R⟩ → |g,e⟩`, amplitudes unchanged.
pub fn transfer_to_atoms(result: &ScenarioResult) -> Result<FockState> {
    let (a, b) = result.reference_kets.as_ref().ok_or(ScenarioError::NoReferenceKets)?;
    let state = &result.final_state;
    if state.terms().any(|(k, _)| k != a.as_slice() && k != b.as_slice()) {
        return Err(ScenarioError::SupportOutsideSubspace);
    }
    Ok(FockState::from_terms(
        atom_registry(),
        [(vec![1, 0], state.amplitude(a)), (vec![0, 1], state.amplitude(b))],
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Bit {
    Zero,
    One,
}

impl From<bool> for Bit {
    fn from(b: bool) -> Self {
        if b {
            Bit::One
        } else {
            Bit::Zero
        }
    }
}

/// Flux setting and target atom state for one classical bit: `0 → ψ⁺` at
/// zero flux, `1 → ψ⁻` at half a flux quantum.
pub fn encode_bit(bit: Bit) -> (f64, FockState) {
    match bit {
        Bit::Zero => (0.0, atom_bell_state(0.0)),
        Bit::One => (0.5, atom_bell_state(PI)),
    }
}

fn species(j: usize) -> (ModeKind, ChargeSign, char) {
    if j.is_multiple_of(2) {
        (ModeKind::Hole, ChargeSign::Hole, 'h')
    } else {
        (ModeKind::Electron, ChargeSign::Electron, 'e')
    }
}

/// Trajectories of the `n`-pair ring: particle `j` enters at angle
/// `(2j+1)π/2n` (holes at even `j`), and its clockwise and counter-clockwise
/// movers reach the neighbouring recombination points at `kπ/n`.
pub fn n_pair_layout(n: usize) -> Result<Layout> {
    if !(2..=4).contains(&n) {
        return Err(ScenarioError::PairCountOutOfRange(n));
    }
    let step = PI / (2 * n) as f64;
    let mut paths = Vec::with_capacity(4 * n);
    for j in 0..2 * n {
        let (_, charge, tag) = species(j);
        let theta = (2 * j + 1) as f64 * step;
        paths.push((format!("{tag}{j}_cw"), arc(charge, theta, theta - step)?));
        paths.push((format!("{tag}{j}_ccw"), arc(charge, theta, theta + step)?));
    }
    Ok(Layout { fluxon_position: Vec2::new(0.0, 0.0), paths })
}

/// `n` electrons and `n` holes approach the fluxon from `2n` directions;
/// full recombination leaves photons either on all even arms or on all odd
/// arms: `(|1010…⟩ + e^{2πiα}|0101…⟩)/√2`.
pub fn run_n_pair(n: usize, alpha: f64, gauge: &GaugeChoice) -> Result<ScenarioResult> {
    let layout = n_pair_layout(n)?;
    let particles = 2 * n;
    let mut modes: Vec<Mode> = layout
        .paths
        .iter()
        .enumerate()
        .map(|(i, (name, _))| Mode::new(name.clone(), species(i / 2).0))
        .collect();
    modes.extend((0..particles).map(|k| Mode::new(format!("g{k}"), ModeKind::Photon)));
    let reg = registry(modes)?;
    let name = |j: usize, dir: &str| format!("{}{j}_{dir}", species(j).2);

    let fluxons = [Fluxon::at_origin(alpha)];
    let phases = phases_of(&layout.paths, &fluxons, gauge)?;

    let mut sources: Vec<(String, u8)> = (0..particles).map(|j| (name(j, "ccw"), 1)).collect();
    if n.is_multiple_of(2) {
        sources[particles - 1].0 = name(particles - 1, "cw");
    }
    let source_refs: Vec<(&str, u8)> = sources.iter().map(|(s, o)| (s.as_str(), *o)).collect();
    let mut state = FockState::new(reg.clone(), &reg.occupation(&source_refs)?)?;
    for j in 0..particles {
        state = state.beam_splitter(&name(j, "cw"), &name(j, "ccw"))?;
    }
    for k in 0..particles {
        let arriving_ccw = name((k + particles - 1) % particles, "ccw");
        let arriving_cw = name(k, "cw");
        let (e, h) = if k % 2 == 0 { (arriving_ccw, arriving_cw) } else { (arriving_cw, arriving_ccw) };
        let phase = VertexPhase(phases[&e] + phases[&h]);
        state = state.pair_recombination(&e, &h, &format!("g{k}"), phase)?;
    }
    let (kept, probability) = state.postselect(no_charges(&reg))?;

    let arms = |parity: usize| -> Result<Vec<u8>> {
        let names: Vec<String> = (0..particles).filter(|k| k % 2 == parity).map(|k| format!("g{k}")).collect();
        let refs: Vec<(&str, u8)> = names.iter().map(|s| (s.as_str(), 1)).collect();
        Ok(reg.occupation(&refs)?)
    };
    finish(kept, probability, Some((arms(0)?, arms(1)?)), gauge, phases)
}

/// Detection probabilities at the two Mach-Zehnder output ports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MachZehnderOutcome {
    pub p_bright: f64,
    pub p_dark: f64,
}

/// Trajectories of the photon-arm pair loop: created at (−1, 0), electron
/// over the top, hole underneath, recombined at (1, 0).
pub fn mz_layout() -> Result<Layout> {
    Ok(Layout {
        fluxon_position: Vec2::new(0.0, 0.0),
        paths: vec![
            ("e".into(), arc(ChargeSign::Electron, PI, 0.0)?),
            ("h".into(), arc(ChargeSign::Hole, PI, TAU)?),
        ],
    })
}

/// Mach-Zehnder interferometer with an electron-hole loop in the upper arm.
/// The bright port is the lower output, lit with probability 1 at zero
/// flux and `extra_phase`.
pub fn run_mz_photon(alpha: f64, extra_phase: f64, gauge: &GaugeChoice) -> Result<MachZehnderOutcome> {
    let reg = registry(vec![
        Mode::new("e", ModeKind::Electron),
        Mode::new("h", ModeKind::Hole),
        Mode::new("g_u", ModeKind::Photon),
        Mode::new("g_d", ModeKind::Photon),
    ])?;
    let fluxons = [Fluxon::at_origin(alpha)];
    let layout = mz_layout()?;
    let phases = phases_of(&layout.paths, &fluxons, gauge)?;

    let state = FockState::new(reg.clone(), &reg.occupation(&[("g_u", 1)])?)?
        .beam_splitter("g_u", "g_d")?
        .pair_creation("g_u", "e", "h", VertexPhase::ZERO)?
        .pair_recombination("e", "h", "g_u", VertexPhase(phases["e"] + phases["h"]))?
        .apply_phase_shift("g_u", extra_phase)?
        .beam_splitter("g_u", "g_d")?;
    let total = state.norm_sqr();
    let lit = |mode: &str| -> Result<f64> {
        let idx = reg.index_of(mode)?;
        Ok(state.filter(|o| o[idx] == 1 && o[0] == 0 && o[1] == 0).norm_sqr() / total)
    };
    Ok(MachZehnderOutcome { p_bright: lit("g_d")?, p_dark: lit("g_u")? })
}

/// Two-component polarization amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesVector {
    pub ex: Complex64,
    pub ey: Complex64,
}

impl JonesVector {
    pub fn new(ex: Complex64, ey: Complex64) -> Result<Self> {
        let n = ex.norm_sqr() + ey.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(ScenarioError::UnnormalizedJones(n));
        }
        Ok(JonesVector { ex, ey })
    }

    pub fn x() -> Self {
        JonesVector { ex: Complex64::new(1.0, 0.0), ey: Complex64::new(0.0, 0.0) }
    }

    pub fn y() -> Self {
        JonesVector { ex: Complex64::new(0.0, 0.0), ey: Complex64::new(1.0, 0.0) }
    }

    /// Linear polarization at `angle` from x.
    pub fn linear(angle: f64) -> Self {
        JonesVector { ex: Complex64::new(angle.cos(), 0.0), ey: Complex64::new(angle.sin(), 0.0) }
    }

    /// Stokes parameters `[S0, S1, S2, S3]`.
    pub fn stokes(&self) -> [f64; 4] {
        let (x, y) = (self.ex, self.ey);
        [
            x.norm_sqr() + y.norm_sqr(),
            x.norm_sqr() - y.norm_sqr(),
            2.0 * (x.conj() * y).re,
            2.0 * (x.conj() * y).im,
        ]
    }

    /// `|⟨other|self⟩|`, insensitive to global phase.
    pub fn overlap_magnitude(&self, other: &JonesVector) -> f64 {
        (other.ex.conj() * self.ex + other.ey.conj() * self.ey).norm()
    }
}

/// Polarization after the two exciton branches: the right-circular part
/// `(x − iy)/√2` (exciting X₊) gains `e^{+2πiα}`, the left-circular part
/// `(x + iy)/√2` (exciting X₋) gains `e^{−2πiα}`. Linear polarization
/// rotates by `2πα`.
pub fn exciton_polarization_rotation(alpha: f64, input: JonesVector) -> Result<JonesVector> {
    let input = JonesVector::new(input.ex, input.ey)?;
    let i = Complex64::i();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let right = (input.ex + i * input.ey) * s;
    let left = (input.ex - i * input.ey) * s;
    let theta = TAU * alpha;
    let right = right * Complex64::from_polar(1.0, theta);
    let left = left * Complex64::from_polar(1.0, -theta);
    // R = (x − iy)/√2, L = (x + iy)/√2
    Ok(JonesVector { ex: (right + left) * s, ey: (left - right) * i * s })
}

/// Wrapped distance between a relative phase and the full-loop phase 2πα.
pub fn full_loop_mismatch(relative_phase: f64, alpha: f64) -> f64 {
    angle::distance(relative_phase, TAU * alpha)
}

/// Description of a built-in scenario for listings.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScenarioInfo {
    pub name: &'static str,
    pub layout_file: Option<&'static str>,
    pub summary: &'static str,
}

pub const CATALOG: &[ScenarioInfo] = &[
    ScenarioInfo {
        name: "pair-half-loop",
        layout_file: Some("fig1.abl"),
        summary: "electron and hole each cover half the loop and recombine left or right; photon pair state carries 2πα",
    },
    ScenarioInfo {
        name: "mach-zehnder",
        layout_file: Some("fig2.abl"),
        summary: "photon arm converts to an electron-hole loop; output port probabilities oscillate with period 1 in α",
    },
    ScenarioInfo {
        name: "n-pair",
        layout_file: Some("fig3.abl"),
        summary: "n electrons and n holes on 2n arms; photons on even or odd arms with relative phase 2πα",
    },
    ScenarioInfo {
        name: "exciton-rotation",
        layout_file: None,
        summary: "opposite AB phases on the two circular exciton branches rotate linear polarization by 2πα",
    },
    ScenarioInfo {
        name: "bit-encoding",
        layout_file: None,
        summary: "flux 0 or 1/2 encodes a classical bit into ψ⁺ or ψ⁻ of two atoms",
    },
];

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn half_loop_zero_flux_is_symmetric() {
        let r = run_pair_half_loop(0.0, &GaugeChoice::SubtendedAngle).unwrap();
        let (a, b) = r.reference_kets.clone().unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.final_state.amplitude(&a) - Complex64::new(s, 0.0)).norm() < TOL);
        assert!((r.final_state.amplitude(&b) - Complex64::new(s, 0.0)).norm() < TOL);
        assert!((r.postselection_probability - 0.5).abs() < TOL);
    }

    #[test]
    fn half_loop_half_flux_gives_pi() {
        let r = run_pair_half_loop(0.5, &GaugeChoice::SubtendedAngle).unwrap();
        assert!(angle::distance(r.relative_phase.unwrap(), PI) < TOL);
    }

    #[test]
    fn half_loop_quarter_flux() {
        let r = run_pair_half_loop(0.25, &GaugeChoice::cut_at_angle(1.0, 1)).unwrap();
        assert!((r.relative_phase.unwrap() - FRAC_PI_2).abs() < TOL);
        assert!((r.postselection_probability - 0.5).abs() < TOL);
    }

    #[test]
    fn branch_segments_add_to_full_loop() {
        let alpha = 0.37;
        let r = run_pair_half_loop(alpha, &GaugeChoice::SubtendedAngle).unwrap();
        let p = &r.branch_phases;
        let diff = (p["e_R"] + p["h_R"]) - (p["e_L"] + p["h_L"]);
        assert!((diff - TAU * alpha).abs() < TOL);
    }

    #[test]
    fn n_pair_zero_flux_symmetric_for_all_sizes() {
        for n in 2..=4 {
            let r = run_n_pair(n, 0.0, &GaugeChoice::SubtendedAngle).unwrap();
            assert!(r.relative_phase.unwrap().abs() < TOL, "n={n}: {:?}", r.relative_phase);
            assert_eq!(r.final_state.len(), 2);
        }
    }

    #[test]
    fn n_pair_relative_phase_tracks_flux() {
        for n in 2..=4 {
            for &alpha in &[0.1, 0.25, 0.5, 0.8] {
                let r = run_n_pair(n, alpha, &GaugeChoice::SubtendedAngle).unwrap();
                assert!(full_loop_mismatch(r.relative_phase.unwrap(), alpha) < TOL, "n={n} α={alpha}");
            }
        }
    }

    #[test]
    fn n_pair_range() {
        assert_eq!(
            run_n_pair(1, 0.0, &GaugeChoice::SubtendedAngle).unwrap_err(),
            ScenarioError::PairCountOutOfRange(1)
        );
        assert!(run_n_pair(5, 0.0, &GaugeChoice::SubtendedAngle).is_err());
    }

    #[test]
    fn n_pair_particles_never_close_a_loop() {
        let layout = n_pair_layout(2).unwrap();
        for (name, path) in &layout.paths {
            let closed = path.closed_by_chord();
            assert_eq!(geometry::winding_number(&closed, layout.fluxon_position).unwrap(), 0, "{name}");
        }
    }

    #[test]
    fn mach_zehnder_limits() {
        let g = GaugeChoice::SubtendedAngle;
        let o = run_mz_photon(0.0, 0.0, &g).unwrap();
        assert!((o.p_bright - 1.0).abs() < TOL && o.p_dark.abs() < TOL);
        let o = run_mz_photon(0.5, 0.0, &g).unwrap();
        assert!(o.p_bright.abs() < TOL && (o.p_dark - 1.0).abs() < TOL);
        let o = run_mz_photon(0.0, PI, &g).unwrap();
        assert!(o.p_bright.abs() < TOL);
    }

    #[test]
    fn transfer_preserves_phase() {
        let r = run_pair_half_loop(0.3, &GaugeChoice::SubtendedAngle).unwrap();
        let atoms = transfer_to_atoms(&r).unwrap();
        let phase = atoms.relative_phase(&[1, 0], &[0, 1]).unwrap();
        assert!(full_loop_mismatch(phase, 0.3) < TOL);
        assert!((atoms.overlap(&atom_bell_state(TAU * 0.3)).unwrap().norm() - 1.0).abs() < TOL);
    }

    #[test]
    fn transfer_rejects_wrong_support() {
        let mut r = run_pair_half_loop(0.3, &GaugeChoice::SubtendedAngle).unwrap();
        let reg = r.final_state.registry().clone();
        r.final_state = FockState::vacuum(reg);
        assert_eq!(transfer_to_atoms(&r).unwrap_err(), ScenarioError::SupportOutsideSubspace);
    }

    #[test]
    fn bit_targets_are_orthogonal() {
        let (a0, t0) = encode_bit(Bit::Zero);
        let (a1, t1) = encode_bit(Bit::One);
        assert_eq!((a0, a1), (0.0, 0.5));
        assert!(t0.overlap(&t1).unwrap().norm() < TOL);
    }

    #[test]
    fn exciton_rotation() {
        let y = exciton_polarization_rotation(0.25, JonesVector::x()).unwrap();
        assert!((y.overlap_magnitude(&JonesVector::y()) - 1.0).abs() < TOL);
        let same = exciton_polarization_rotation(0.0, JonesVector::linear(0.4)).unwrap();
        assert!((same.ex - Complex64::new(0.4f64.cos(), 0.0)).norm() < TOL);
        assert!((same.ey - Complex64::new(0.4f64.sin(), 0.0)).norm() < TOL);
        assert!(exciton_polarization_rotation(0.1, JonesVector { ex: Complex64::new(2.0, 0.0), ey: Complex64::new(0.0, 0.0) }).is_err());
    }
}
