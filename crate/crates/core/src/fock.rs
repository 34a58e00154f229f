//! Sparse second-quantized state vectors.
//!
//! A [`FockState`] is a map from occupation vectors to complex amplitudes over
//! a fixed [`ModeRegistry`]. The canonical basis ket for an occupation vector
//! `(n_0, n_1, ..)` is
//!
//! ```text
//! |n_0 n_1 ..⟩ = (c_0†)^n_0 (c_1†)^n_1 .. |vac⟩ / sqrt(n_0! n_1! ..)
//! ```
//!
//! with mode 0 leftmost. Electron and hole modes anticommute with each other
//! (one Jordan-Wigner string over registry order); photon and atom modes are
//! bosonic. Every operation is pure and returns a fresh state.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle;

/// Amplitudes with smaller magnitude are pruned after every operation.
pub const DROP_TOLERANCE: f64 = 1e-15;
/// Tolerance used for norm and comparison checks.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Postselection below this probability is reported as an empty branch.
pub const MIN_POSTSELECTION_PROBABILITY: f64 = 1e-14;
/// Largest allowed occupancy of a bosonic mode.
pub const MAX_BOSONIC_OCCUPANCY: u8 = 4;

/// Amplitudes below this magnitude do not define a phase.
const PHASE_MAGNITUDE_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("duplicate mode name `{0}`")]
    DuplicateMode(String),
    #[error("mode `{mode}` ({kind}) cannot have max_occupancy {max}")]
    InvalidCapacity { mode: String, kind: ModeKind, max: u8 },
    #[error("mode `{mode}`: occupancy {occupancy} exceeds max_occupancy {max}")]
    OccupancyViolation { mode: String, occupancy: u8, max: u8 },
    #[error("occupation vector has {found} entries, registry has {expected} modes")]
    LengthMismatch { expected: usize, found: usize },
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    #[error("{operation}: {detail}")]
    KindMismatch { operation: &'static str, detail: String },
    #[error("beam splitter output exceeds max_occupancy of mode `{0}`")]
    CapacityExceeded(String),
    #[error("empty postselection (probability {probability:e})")]
    EmptyPostselection { probability: f64 },
    #[error("undefined relative phase: ket {0:?} has no amplitude")]
    UndefinedRelativePhase(Vec<u8>),
    #[error("states live on different mode registries")]
    RegistryMismatch,
    #[error("cannot normalize the zero state")]
    ZeroState,
}

pub type Result<T> = std::result::Result<T, FockError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Electron,
    Hole,
    Photon,
    Atom,
}

impl ModeKind {
    pub fn is_fermionic(self) -> bool {
        matches!(self, ModeKind::Electron | ModeKind::Hole)
    }

    pub fn is_charged(self) -> bool {
        self.is_fermionic()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModeKind::Electron => "electron",
            ModeKind::Hole => "hole",
            ModeKind::Photon => "photon",
            ModeKind::Atom => "atom",
        }
    }
}

impl fmt::Display for ModeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "electron" => Ok(ModeKind::Electron),
            "hole" => Ok(ModeKind::Hole),
            "photon" => Ok(ModeKind::Photon),
            "atom" => Ok(ModeKind::Atom),
            other => Err(format!("unknown mode kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mode {
    pub name: String,
    pub kind: ModeKind,
    pub max_occupancy: u8,
}

impl Mode {
    /// A mode with the default capacity of 1.
    pub fn new(name: impl Into<String>, kind: ModeKind) -> Self {
        Mode { name: name.into(), kind, max_occupancy: 1 }
    }

    pub fn with_capacity(name: impl Into<String>, kind: ModeKind, max_occupancy: u8) -> Self {
        Mode { name: name.into(), kind, max_occupancy }
    }
}

/// Ordered, immutable set of modes. The order fixes the occupation-vector
/// layout and the fermionic sign convention.
#[derive(Debug, Clone)]
pub struct ModeRegistry {
    modes: Vec<Mode>,
    index: HashMap<String, usize>,
}

impl PartialEq for ModeRegistry {
    fn eq(&self, other: &Self) -> bool {
        self.modes == other.modes
    }
}

impl ModeRegistry {
    pub fn new(modes: Vec<Mode>) -> Result<Self> {
        let mut index = HashMap::with_capacity(modes.len());
        for (i, m) in modes.iter().enumerate() {
            let ok = if m.kind.is_fermionic() {
                m.max_occupancy == 1
            } else {
                (1..=MAX_BOSONIC_OCCUPANCY).contains(&m.max_occupancy)
            };
            if !ok {
                return Err(FockError::InvalidCapacity {
                    mode: m.name.clone(),
                    kind: m.kind,
                    max: m.max_occupancy,
                });
            }
            if index.insert(m.name.clone(), i).is_some() {
                return Err(FockError::DuplicateMode(m.name.clone()));
            }
        }
        Ok(ModeRegistry { modes, index })
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn mode(&self, index: usize) -> &Mode {
        &self.modes[index]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| FockError::UnknownMode(name.to_string()))
    }

    /// Occupation vector with the named modes set and every other mode empty.
    pub fn occupation(&self, occupied: &[(&str, u8)]) -> Result<Vec<u8>> {
        let mut occ = vec![0; self.len()];
        for &(name, n) in occupied {
            occ[self.index_of(name)?] = n;
        }
        self.check_occupation(&occ)?;
        Ok(occ)
    }

    pub fn check_occupation(&self, occ: &[u8]) -> Result<()> {
        if occ.len() != self.len() {
            return Err(FockError::LengthMismatch { expected: self.len(), found: occ.len() });
        }
        for (m, &n) in self.modes.iter().zip(occ) {
            if n > m.max_occupancy {
                return Err(FockError::OccupancyViolation {
                    mode: m.name.clone(),
                    occupancy: n,
                    max: m.max_occupancy,
                });
            }
        }
        Ok(())
    }

    /// Jordan-Wigner sign for acting on mode `index` of `occ`.
    fn ordering_sign(&self, occ: &[u8], index: usize) -> f64 {
        if !self.modes[index].kind.is_fermionic() {
            return 1.0;
        }
        let preceding: u32 = self.modes[..index]
            .iter()
            .zip(occ)
            .filter(|(m, _)| m.kind.is_fermionic())
            .map(|(_, &n)| u32::from(n))
            .sum();
        if preceding.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// Gauge phase attached to an operator application, in radians.
///
/// Stored unreduced; only `Display` folds it into (−π, π].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VertexPhase(pub f64);

impl VertexPhase {
    pub const ZERO: VertexPhase = VertexPhase(0.0);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn factor(self) -> Complex64 {
        Complex64::from_polar(1.0, self.0)
    }
}

impl From<f64> for VertexPhase {
    fn from(v: f64) -> Self {
        VertexPhase(v)
    }
}

impl fmt::Display for VertexPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6} rad", angle::wrap(self.0))
    }
}

/// Sparse superposition of occupation-number kets.
#[derive(Debug, Clone)]
pub struct FockState {
    registry: Arc<ModeRegistry>,
    terms: BTreeMap<Vec<u8>, Complex64>,
}

impl FockState {
    /// Single basis ket with amplitude 1.
    pub fn new(registry: impl Into<Arc<ModeRegistry>>, occupation: &[u8]) -> Result<Self> {
        let registry = registry.into();
        registry.check_occupation(occupation)?;
        let mut terms = BTreeMap::new();
        terms.insert(occupation.to_vec(), Complex64::new(1.0, 0.0));
        Ok(FockState { registry, terms })
    }

    pub fn vacuum(registry: impl Into<Arc<ModeRegistry>>) -> Self {
        let registry = registry.into();
        let occ = vec![0; registry.len()];
        FockState::new(registry, &occ).expect("vacuum respects every capacity")
    }

    pub fn zero(registry: impl Into<Arc<ModeRegistry>>) -> Self {
        FockState { registry: registry.into(), terms: BTreeMap::new() }
    }

    /// Builds a state from explicit terms; repeated kets are summed.
    pub fn from_terms<I>(registry: impl Into<Arc<ModeRegistry>>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u8>, Complex64)>,
    {
        let registry = registry.into();
        let mut map = BTreeMap::new();
        for (occ, amp) in terms {
            registry.check_occupation(&occ)?;
            *map.entry(occ).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        Ok(FockState::from_map(registry, map))
    }

    fn from_map(registry: Arc<ModeRegistry>, mut terms: BTreeMap<Vec<u8>, Complex64>) -> Self {
        terms.retain(|_, a| a.norm() >= DROP_TOLERANCE);
        FockState { registry, terms }
    }

    pub fn registry(&self) -> &Arc<ModeRegistry> {
        &self.registry
    }

    /// Terms in ascending lexicographic order of occupation vector.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u8], Complex64)> + '_ {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn amplitude(&self, occupation: &[u8]) -> Complex64 {
        self.terms.get(occupation).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn normalized(&self) -> Result<FockState> {
        let n = self.norm_sqr();
        if n == 0.0 {
            return Err(FockError::ZeroState);
        }
        Ok(self.scaled(Complex64::new(1.0 / n.sqrt(), 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> FockState {
        let terms = self.terms.iter().map(|(k, &a)| (k.clone(), a * factor)).collect();
        FockState::from_map(self.registry.clone(), terms)
    }

    pub fn add(&self, other: &FockState) -> Result<FockState> {
        self.same_registry(other)?;
        let mut terms = self.terms.clone();
        for (k, &a) in &other.terms {
            *terms.entry(k.clone()).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        Ok(FockState::from_map(self.registry.clone(), terms))
    }

    /// Keeps only terms matching the predicate, without renormalizing.
    pub fn filter(&self, mut keep: impl FnMut(&[u8]) -> bool) -> FockState {
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| keep(k))
            .map(|(k, &a)| (k.clone(), a))
            .collect();
        FockState { registry: self.registry.clone(), terms }
    }

    fn same_registry(&self, other: &FockState) -> Result<()> {
        if Arc::ptr_eq(&self.registry, &other.registry) || *self.registry == *other.registry {
            Ok(())
        } else {
            Err(FockError::RegistryMismatch)
        }
    }

    /// Applies a linear map defined on basis kets.
    fn map_terms<F>(&self, mut f: F) -> FockState
    where
        F: FnMut(&[u8], Complex64, &mut BTreeMap<Vec<u8>, Complex64>),
    {
        let mut out = BTreeMap::new();
        for (k, &a) in &self.terms {
            f(k, a, &mut out);
        }
        FockState::from_map(self.registry.clone(), out)
    }

    /// `e^{i·phase} c†` on the named mode.
    pub fn apply_creation(&self, mode: &str, phase: VertexPhase) -> Result<FockState> {
        let idx = self.registry.index_of(mode)?;
        let factor = phase.factor();
        let reg = self.registry.clone();
        Ok(self.map_terms(|occ, amp, out| {
            if let Some((next, c)) = raise(&reg, occ, idx) {
                *out.entry(next).or_default() += amp * c * factor;
            }
        }))
    }

    pub fn apply_annihilation(&self, mode: &str) -> Result<FockState> {
        let idx = self.registry.index_of(mode)?;
        let reg = self.registry.clone();
        Ok(self.map_terms(|occ, amp, out| {
            if let Some((next, c)) = lower(&reg, occ, idx) {
                *out.entry(next).or_default() += amp * c;
            }
        }))
    }

    /// Phase shifter `e^{i·angle·n}` on one mode.
    pub fn apply_phase_shift(&self, mode: &str, angle: f64) -> Result<FockState> {
        let idx = self.registry.index_of(mode)?;
        Ok(self.map_terms(|occ, amp, out| {
            let f = Complex64::from_polar(1.0, angle * f64::from(occ[idx]));
            *out.entry(occ.to_vec()).or_default() += amp * f;
        }))
    }

    /// Symmetric 50/50 beam splitter:
    /// `a† → (a† + i b†)/√2`, `b† → (i a† + b†)/√2`.
    ///
    /// Each ket is rebuilt from the vacuum by applying its creation operators
    /// right to left with the substitution above, so fermionic ordering signs
    /// come out of [`raise`] directly.
    pub fn beam_splitter(&self, mode_a: &str, mode_b: &str) -> Result<FockState> {
        let a = self.registry.index_of(mode_a)?;
        let b = self.registry.index_of(mode_b)?;
        let (ka, kb) = (self.registry.mode(a).kind, self.registry.mode(b).kind);
        if ka != kb {
            return Err(FockError::KindMismatch {
                operation: "beam_splitter",
                detail: format!("`{mode_a}` is {ka}, `{mode_b}` is {kb}"),
            });
        }
        if a == b {
            return Err(FockError::KindMismatch {
                operation: "beam_splitter",
                detail: format!("needs two distinct modes, got `{mode_a}` twice"),
            });
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let t = Complex64::new(s, 0.0);
        let r = Complex64::new(0.0, s);
        let reg = &self.registry;
        let mut out: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
        for (occ, &amp) in &self.terms {
            let mut partial: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
            let norm: f64 = occ.iter().map(|&n| factorial(n)).product::<f64>().sqrt();
            partial.insert(vec![0; reg.len()], amp / norm);
            for idx in (0..reg.len()).rev() {
                let targets: Vec<(usize, Complex64)> = if idx == a {
                    vec![(a, t), (b, r)]
                } else if idx == b {
                    vec![(a, r), (b, t)]
                } else {
                    vec![(idx, Complex64::new(1.0, 0.0))]
                };
                for _ in 0..occ[idx] {
                    let mut next = BTreeMap::new();
                    for (p, &pa) in &partial {
                        for &(target, coeff) in &targets {
                            match raise(reg, p, target) {
                                Some((k, c)) => {
                                    *next.entry(k).or_insert(Complex64::new(0.0, 0.0)) += pa * coeff * c;
                                }
                                // Pauli exclusion: the term vanishes.
                                None if reg.mode(target).kind.is_fermionic() => {}
                                None => {
                                    return Err(FockError::CapacityExceeded(reg.mode(target).name.clone()))
                                }
                            }
                        }
                    }
                    partial = next;
                }
            }
            for (k, v) in partial {
                *out.entry(k).or_insert(Complex64::new(0.0, 0.0)) += v;
            }
        }
        Ok(FockState::from_map(self.registry.clone(), out))
    }

    fn check_pair_kinds(&self, operation: &'static str, e: &str, h: &str, photon: &str) -> Result<()> {
        let expect = [(e, ModeKind::Electron), (h, ModeKind::Hole), (photon, ModeKind::Photon)];
        for (name, kind) in expect {
            let found = self.registry.mode(self.registry.index_of(name)?).kind;
            if found != kind {
                return Err(FockError::KindMismatch {
                    operation,
                    detail: format!("`{name}` must be {kind}, found {found}"),
                });
            }
        }
        Ok(())
    }

    /// `e^{i·phase} a_γ† a_h a_e`: an electron-hole pair recombines into a
    /// photon. This is the adjoint of [`FockState::pair_vertex_create`], so a
    /// canonically ordered pair `|1_e 1_h⟩` maps to `+|1_γ⟩`.
    pub fn pair_vertex_annihilate(
        &self,
        e_mode: &str,
        h_mode: &str,
        photon_mode: &str,
        phase: VertexPhase,
    ) -> Result<FockState> {
        self.check_pair_kinds("pair_vertex_annihilate", e_mode, h_mode, photon_mode)?;
        self.apply_annihilation(e_mode)?
            .apply_annihilation(h_mode)?
            .apply_creation(photon_mode, phase)
    }

    /// `e^{i·phase} a_e† a_h† a_γ`: a photon converts into an electron-hole pair.
    pub fn pair_vertex_create(
        &self,
        photon_mode: &str,
        e_mode: &str,
        h_mode: &str,
        phase: VertexPhase,
    ) -> Result<FockState> {
        self.check_pair_kinds("pair_vertex_create", e_mode, h_mode, photon_mode)?;
        self.apply_annihilation(photon_mode)?
            .apply_creation(h_mode, VertexPhase::ZERO)?
            .apply_creation(e_mode, phase)
    }

    /// Recombination event at a vertex: terms holding both the electron and
    /// the hole are converted by [`FockState::pair_vertex_annihilate`], all
    /// other terms pass through unchanged.
    pub fn pair_recombination(
        &self,
        e_mode: &str,
        h_mode: &str,
        photon_mode: &str,
        phase: VertexPhase,
    ) -> Result<FockState> {
        self.check_pair_kinds("pair_recombination", e_mode, h_mode, photon_mode)?;
        let (e, h) = (self.registry.index_of(e_mode)?, self.registry.index_of(h_mode)?);
        let has_pair = |occ: &[u8]| occ[e] > 0 && occ[h] > 0;
        let converted = self.filter(has_pair).pair_vertex_annihilate(e_mode, h_mode, photon_mode, phase)?;
        converted.add(&self.filter(|occ| !has_pair(occ)))
    }

    /// Pair-creation event: terms with a photon present and both charge
    /// modes empty are converted, all other terms pass through.
    pub fn pair_creation(
        &self,
        photon_mode: &str,
        e_mode: &str,
        h_mode: &str,
        phase: VertexPhase,
    ) -> Result<FockState> {
        self.check_pair_kinds("pair_creation", e_mode, h_mode, photon_mode)?;
        let g = self.registry.index_of(photon_mode)?;
        let (e, h) = (self.registry.index_of(e_mode)?, self.registry.index_of(h_mode)?);
        let can_convert = |occ: &[u8]| occ[g] > 0 && occ[e] == 0 && occ[h] == 0;
        let converted = self.filter(can_convert).pair_vertex_create(photon_mode, e_mode, h_mode, phase)?;
        converted.add(&self.filter(|occ| !can_convert(occ)))
    }

    /// Keeps the terms satisfying `predicate` and renormalizes them.
    /// Returns the kept state together with its probability.
    pub fn postselect(&self, predicate: impl Fn(&[u8]) -> bool) -> Result<(FockState, f64)> {
        let total = self.norm_sqr();
        let kept = self.filter(|occ| predicate(occ));
        let probability = if total > 0.0 { kept.norm_sqr() / total } else { 0.0 };
        if probability < MIN_POSTSELECTION_PROBABILITY {
            return Err(FockError::EmptyPostselection { probability });
        }
        let state = kept.normalized()?;
        Ok((state, probability))
    }

    /// `arg(amp_b) − arg(amp_a)` folded into (−π, π].
    pub fn relative_phase(&self, ket_a: &[u8], ket_b: &[u8]) -> Result<f64> {
        let a = self.amplitude(ket_a);
        let b = self.amplitude(ket_b);
        for (ket, amp) in [(ket_a, a), (ket_b, b)] {
            if amp.norm() <= PHASE_MAGNITUDE_FLOOR {
                return Err(FockError::UndefinedRelativePhase(ket.to_vec()));
            }
        }
        Ok(angle::wrap((b * a.conj()).arg()))
    }

    /// `⟨target|self⟩`.
    pub fn overlap(&self, target: &FockState) -> Result<Complex64> {
        self.same_registry(target)?;
        let (small, large, conj_small) = if self.terms.len() <= target.terms.len() {
            (&self.terms, &target.terms, false)
        } else {
            (&target.terms, &self.terms, true)
        };
        Ok(small
            .iter()
            .filter_map(|(k, &a)| large.get(k).map(|&b| if conj_small { a.conj() * b } else { b.conj() * a }))
            .sum())
    }

    /// `⟨ψ|n_mode|ψ⟩`.
    pub fn expected_occupancy(&self, mode: &str) -> Result<f64> {
        let idx = self.registry.index_of(mode)?;
        Ok(self.terms.iter().map(|(k, a)| f64::from(k[idx]) * a.norm_sqr()).sum())
    }

    /// Single-mode reduced density matrix in the occupation basis
    /// `0..=max_occupancy`.
    pub fn reduced_density_matrix(&self, mode: &str) -> Result<Vec<Vec<Complex64>>> {
        let idx = self.registry.index_of(mode)?;
        let dim = usize::from(self.registry.mode(idx).max_occupancy) + 1;
        let mut rho = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        let mut by_rest: BTreeMap<Vec<u8>, Vec<(usize, Complex64)>> = BTreeMap::new();
        for (k, &a) in &self.terms {
            let mut rest = k.clone();
            rest[idx] = 0;
            by_rest.entry(rest).or_default().push((usize::from(k[idx]), a));
        }
        for group in by_rest.values() {
            for &(n, a) in group {
                for &(m, b) in group {
                    rho[n][m] += a * b.conj();
                }
            }
        }
        Ok(rho)
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let ket: Vec<String> = k.iter().map(u8::to_string).collect();
            write!(f, "({:.6}{:+.6}i)|{}⟩", a.re, a.im, ket.join(","))?;
        }
        Ok(())
    }
}

fn factorial(n: u8) -> f64 {
    (1..=u32::from(n)).map(f64::from).product()
}

/// `c†` on a basis ket: new ket and coefficient `sign·√(n+1)`, or `None` at
/// capacity.
fn raise(reg: &ModeRegistry, occ: &[u8], idx: usize) -> Option<(Vec<u8>, f64)> {
    let n = occ[idx];
    if n >= reg.mode(idx).max_occupancy {
        return None;
    }
    let sign = reg.ordering_sign(occ, idx);
    let mut next = occ.to_vec();
    next[idx] = n + 1;
    Some((next, sign * f64::from(n + 1).sqrt()))
}

/// `c` on a basis ket: new ket and coefficient `sign·√n`, or `None` when empty.
fn lower(reg: &ModeRegistry, occ: &[u8], idx: usize) -> Option<(Vec<u8>, f64)> {
    let n = occ[idx];
    if n == 0 {
        return None;
    }
    let sign = reg.ordering_sign(occ, idx);
    let mut next = occ.to_vec();
    next[idx] = n - 1;
    Some((next, sign * f64::from(n).sqrt()))
}
