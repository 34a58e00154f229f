//! Dense-matrix reference implementation of the Fock operators and shared
//! randomized campaigns.

#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use abflux_core::fock::{FockState, Mode, ModeKind, ModeRegistry, VertexPhase};
use abflux_core::setup;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Full occupation basis of a registry with explicit operator matrices.
pub struct Dense {
    pub registry: Arc<ModeRegistry>,
    pub basis: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl Dense {
    pub fn new(registry: Arc<ModeRegistry>) -> Self {
        let mut basis: Vec<Vec<u8>> = vec![vec![]];
        for m in registry.modes() {
            basis = basis
                .into_iter()
                .flat_map(|prefix| {
                    (0..=m.max_occupancy).map(move |n| {
                        let mut k = prefix.clone();
                        k.push(n);
                        k
                    })
                })
                .collect();
        }
        let index = basis.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        Dense { registry, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vector(&self, state: &FockState) -> CVector {
        let mut v = CVector::zeros(self.dim());
        for (k, a) in state.terms() {
            v[self.index[k]] = a;
        }
        v
    }

    pub fn state(&self, v: &CVector) -> FockState {
        FockState::from_terms(
            self.registry.clone(),
            self.basis.iter().zip(v.iter()).filter(|(_, a)| a.norm() > 0.0).map(|(k, a)| (k.clone(), *a)),
        )
        .expect("basis kets are valid")
    }

    /// Creation operator with the Jordan-Wigner string over all preceding
    /// fermionic modes, truncated at each mode's capacity.
    pub fn creation(&self, mode: usize) -> DMatrix<f64> {
        let modes = self.registry.modes();
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for (col, ket) in self.basis.iter().enumerate() {
            let n = ket[mode];
            if n >= modes[mode].max_occupancy {
                continue;
            }
            let mut string = 1.0;
            if modes[mode].kind.is_fermionic() {
                for j in 0..mode {
                    if modes[j].kind.is_fermionic() && ket[j] % 2 == 1 {
                        string = -string;
                    }
                }
            }
            let mut target = ket.clone();
            target[mode] += 1;
            m[(self.index[&target], col)] = string * f64::from(n + 1).sqrt();
        }
        m
    }

    pub fn annihilation(&self, mode: usize) -> DMatrix<f64> {
        self.creation(mode).transpose()
    }

    pub fn number(&self, mode: usize) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_iterator(self.dim(), self.basis.iter().map(|k| f64::from(k[mode]))))
    }

    /// `exp(iπ/4·(a†b + b†a))` from the eigendecomposition of the generator.
    pub fn beam_splitter(&self, a: usize, b: usize) -> CMatrix {
        let (ca, cb) = (self.creation(a), self.creation(b));
        let g = &ca * cb.transpose() + &cb * ca.transpose();
        let g = (&g + g.transpose()) * 0.5;
        let eig = SymmetricEigen::new(g);
        let theta = std::f64::consts::FRAC_PI_4;
        let phases = DVector::from_iterator(
            self.dim(),
            eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, theta * l)),
        );
        let v = complex(&eig.eigenvectors);
        &v * CMatrix::from_diagonal(&phases) * v.transpose()
    }

    /// Diagonal projector onto the kets satisfying `keep`.
    pub fn projector(&self, keep: impl Fn(&[u8]) -> bool) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.basis.iter().map(|k| if keep(k) { 1.0 } else { 0.0 }),
        ))
    }

    pub fn phase_shift(&self, mode: usize, angle: f64) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.basis.iter().map(|k| Complex64::from_polar(1.0, angle * f64::from(k[mode]))),
        ))
    }
}

pub fn complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn max_diff(a: &CVector, b: &CVector) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

const KINDS: [ModeKind; 4] = [ModeKind::Electron, ModeKind::Hole, ModeKind::Photon, ModeKind::Atom];

/// Random registry of 2..=6 modes containing at least one electron, hole
/// and photon when `with_pair` is set. At most two bosonic modes get
/// capacity 2.
pub fn random_registry(rng: &mut StdRng, with_pair: bool) -> Arc<ModeRegistry> {
    let n = rng.gen_range(if with_pair { 3..=6 } else { 2..=6 });
    let mut kinds: Vec<ModeKind> = (0..n).map(|_| KINDS[rng.gen_range(0..4)]).collect();
    if with_pair {
        let slots = rand::seq::index::sample(rng, n, 3);
        kinds[slots.index(0)] = ModeKind::Electron;
        kinds[slots.index(1)] = ModeKind::Hole;
        kinds[slots.index(2)] = ModeKind::Photon;
    }
    let mut doubled = 0;
    let modes = kinds
        .into_iter()
        .enumerate()
        .map(|(i, k)| {
            let cap = if !k.is_fermionic() && doubled < 2 && rng.gen_bool(0.5) {
                doubled += 1;
                2
            } else {
                1
            };
            Mode::with_capacity(format!("m{i}"), k, cap)
        })
        .collect();
    Arc::new(ModeRegistry::new(modes).unwrap())
}

/// Random normalized state supported on a random subset of the basis.
pub fn random_state(rng: &mut StdRng, dense: &Dense) -> FockState {
    let support = rng.gen_range(1..=dense.dim().min(8));
    let kets = rand::seq::index::sample(rng, dense.dim(), support);
    let terms: Vec<(Vec<u8>, Complex64)> = kets
        .iter()
        .map(|i| (dense.basis[i].clone(), Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    FockState::from_terms(dense.registry.clone(), terms).unwrap().normalized().unwrap()
}

fn modes_of(reg: &ModeRegistry, kind: ModeKind) -> Vec<usize> {
    (0..reg.len()).filter(|&i| reg.mode(i).kind == kind).collect()
}

fn pick(rng: &mut StdRng, v: &[usize]) -> usize {
    v[rng.gen_range(0..v.len())]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Creation,
    Annihilation,
    PhaseShift,
    BeamSplitter,
    VertexAnnihilate,
    VertexCreate,
    Recombination,
    PairCreation,
    Overlap,
    Postselect,
    ExpectedOccupancy,
    RelativePhase,
}

pub const ALL_OPS: [Op; 12] = [
    Op::Creation,
    Op::Annihilation,
    Op::PhaseShift,
    Op::BeamSplitter,
    Op::VertexAnnihilate,
    Op::VertexCreate,
    Op::Recombination,
    Op::PairCreation,
    Op::Overlap,
    Op::Postselect,
    Op::ExpectedOccupancy,
    Op::RelativePhase,
];

/// Outcome of one operation's campaign.
#[derive(Debug, Clone, Copy)]
pub struct CampaignReport {
    pub op: Op,
    pub compared: usize,
    pub max_error: f64,
}

/// Runs `cases` random cases of `op` against the dense oracle and returns
/// the largest deviation seen.
pub fn oracle_campaign(op: Op, seed: u64, cases: usize) -> Result<CampaignReport, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut max_error: f64 = 0.0;
    let mut compared = 0;
    while compared < cases {
        let pair = matches!(op, Op::VertexAnnihilate | Op::VertexCreate | Op::Recombination | Op::PairCreation);
        let reg = random_registry(&mut rng, pair);
        let dense = Dense::new(reg.clone());
        let psi = random_state(&mut rng, &dense);
        let v = dense.vector(&psi);
        let name = |i: usize| reg.mode(i).name.clone();
        let phase = rng.gen_range(-10.0..10.0);
        let factor = Complex64::from_polar(1.0, phase);
        let err = match op {
            Op::Creation => {
                let i = rng.gen_range(0..reg.len());
                let got = psi.apply_creation(&name(i), VertexPhase(phase)).map_err(|e| e.to_string())?;
                max_diff(&dense.vector(&got), &(complex(&dense.creation(i)) * &v * factor))
            }
            Op::Annihilation => {
                let i = rng.gen_range(0..reg.len());
                let got = psi.apply_annihilation(&name(i)).map_err(|e| e.to_string())?;
                max_diff(&dense.vector(&got), &(complex(&dense.annihilation(i)) * &v))
            }
            Op::PhaseShift => {
                let i = rng.gen_range(0..reg.len());
                let got = psi.apply_phase_shift(&name(i), phase).map_err(|e| e.to_string())?;
                max_diff(&dense.vector(&got), &(dense.phase_shift(i, phase) * &v))
            }
            Op::BeamSplitter => {
                let fermionic = rng.gen_bool(0.5);
                let candidates: Vec<Vec<usize>> = KINDS
                    .iter()
                    .filter(|k| k.is_fermionic() == fermionic)
                    .map(|&k| modes_of(&reg, k))
                    .filter(|v| v.len() >= 2)
                    .collect();
                if candidates.is_empty() {
                    continue;
                }
                let group = &candidates[rng.gen_range(0..candidates.len())];
                let pair = rand::seq::index::sample(&mut rng, group.len(), 2);
                let (a, b) = (group[pair.index(0)], group[pair.index(1)]);
                let cap = reg.mode(a).max_occupancy.min(reg.mode(b).max_occupancy);
                let fits = psi.terms().all(|(k, _)| fermionic || k[a] + k[b] <= cap);
                match psi.beam_splitter(&name(a), &name(b)) {
                    Ok(got) => {
                        if !fits {
                            return Err(format!("beam splitter accepted an overflowing state {psi}"));
                        }
                        max_diff(&dense.vector(&got), &(dense.beam_splitter(a, b) * &v))
                    }
                    Err(_) if !fits => continue,
                    Err(e) => return Err(format!("beam splitter failed on {psi}: {e}")),
                }
            }
            Op::VertexAnnihilate | Op::VertexCreate | Op::Recombination | Op::PairCreation => {
                let e = pick(&mut rng, &modes_of(&reg, ModeKind::Electron));
                let h = pick(&mut rng, &modes_of(&reg, ModeKind::Hole));
                let g = pick(&mut rng, &modes_of(&reg, ModeKind::Photon));
                let (ce, ch, cg) = (dense.creation(e), dense.creation(h), dense.creation(g));
                let annihilate = complex(&(&cg * ch.transpose() * ce.transpose())) * factor;
                let create = complex(&(&ce * &ch * cg.transpose())) * factor;
                let (ne, nh) = (dense.number(e), dense.number(h));
                let id = DMatrix::<f64>::identity(dense.dim(), dense.dim());
                // Projectors onto "pair present" and "photon present, pair absent".
                let has_pair = &ne * &nh;
                let empty_e = &id - &ne;
                let empty_h = &id - &nh;
                let photon_present = dense.projector(|k| k[g] > 0);
                let convertible = &photon_present * &empty_e * &empty_h;
                let (got, expected) = match op {
                    Op::VertexAnnihilate => (
                        psi.pair_vertex_annihilate(&name(e), &name(h), &name(g), VertexPhase(phase)),
                        &annihilate * &v,
                    ),
                    Op::VertexCreate => (
                        psi.pair_vertex_create(&name(g), &name(e), &name(h), VertexPhase(phase)),
                        &create * &v,
                    ),
                    Op::Recombination => (
                        psi.pair_recombination(&name(e), &name(h), &name(g), VertexPhase(phase)),
                        &annihilate * complex(&has_pair) * &v + complex(&(&id - &has_pair)) * &v,
                    ),
                    _ => (
                        psi.pair_creation(&name(g), &name(e), &name(h), VertexPhase(phase)),
                        &create * complex(&convertible) * &v + complex(&(&id - &convertible)) * &v,
                    ),
                };
                let got = got.map_err(|e| e.to_string())?;
                max_diff(&dense.vector(&got), &expected)
            }
            Op::Overlap => {
                let phi = random_state(&mut rng, &dense);
                let got = psi.overlap(&phi).map_err(|e| e.to_string())?;
                let expected = dense.vector(&phi).dotc(&v);
                (got - expected).norm()
            }
            Op::Postselect => {
                let i = rng.gen_range(0..reg.len());
                let keep = rng.gen_range(0..=reg.mode(i).max_occupancy);
                let projector = complex(&dense.projector(|k| k[i] == keep));
                let kept = &projector * &v;
                let p = kept.norm_squared();
                match psi.postselect(|occ| occ[i] == keep) {
                    Ok((state, prob)) => {
                        (prob - p).abs().max(max_diff(&dense.vector(&state), &(kept / Complex64::new(p.sqrt(), 0.0))))
                    }
                    Err(_) if p < 1e-14 => continue,
                    Err(e) => return Err(e.to_string()),
                }
            }
            Op::ExpectedOccupancy => {
                let i = rng.gen_range(0..reg.len());
                let got = psi.expected_occupancy(&name(i)).map_err(|e| e.to_string())?;
                let expected = v.dotc(&(complex(&dense.number(i)) * &v)).re;
                (got - expected).abs()
            }
            Op::RelativePhase => {
                let kets: Vec<usize> = (0..dense.dim()).filter(|&j| v[j].norm() > 1e-3).collect();
                if kets.len() < 2 {
                    continue;
                }
                let (a, b) = (kets[0], kets[kets.len() - 1]);
                let got = psi.relative_phase(&dense.basis[a], &dense.basis[b]).map_err(|e| e.to_string())?;
                let expected = (v[b] / v[a]).arg();
                abflux_core::angle::distance(got, expected)
            }
        };
        if err.is_nan() || err > 1e-10 {
            return Err(format!("{op:?}: deviation {err:e} on state {psi}"));
        }
        max_error = max_error.max(err);
        compared += 1;
    }
    Ok(CampaignReport { op, compared, max_error })
}

/// Feeds `cases` random byte strings and mutated shipped layouts to the
/// parser (and the validator when a layout parses). Returns how many
/// inputs parsed successfully.
pub fn fuzz_parse(seed: u64, cases: usize) -> usize {
    const WORDS: [&str; 16] = [
        "fluxon", "mode", "source", "path", "bs", "create", "annih", "detect", "keep", "->", "@", "electron",
        "hole", "photon", "atom", "=",
    ];
    let mut rng = StdRng::seed_from_u64(seed);
    let corpus: Vec<&[u8]> = setup::SHIPPED_LAYOUTS.iter().map(|(_, t)| t.as_bytes()).collect();
    let mut parsed = 0;
    for i in 0..cases {
        let bytes: Vec<u8> = match i % 3 {
            0 => (0..rng.gen_range(0..200)).map(|_| rng.gen()).collect(),
            1 => {
                let mut b = corpus[rng.gen_range(0..corpus.len())].to_vec();
                for _ in 0..rng.gen_range(1..8) {
                    let pos = rng.gen_range(0..=b.len());
                    match rng.gen_range(0..4) {
                        0 if pos < b.len() => b[pos] = rng.gen(),
                        1 if pos < b.len() => {
                            b.remove(pos);
                        }
                        2 => b.insert(pos, rng.gen()),
                        _ => {
                            let end = (pos + rng.gen_range(0..40)).min(b.len());
                            b.drain(pos..end);
                        }
                    }
                }
                b
            }
            _ => {
                let mut s = String::new();
                for _ in 0..rng.gen_range(1..12) {
                    for _ in 0..rng.gen_range(1..9) {
                        match rng.gen_range(0..4) {
                            0 => s.push_str(WORDS[rng.gen_range(0..WORDS.len())]),
                            1 => s.push_str(&format!("{}", rng.gen_range(-3.0..3.0f64))),
                            2 => s.push_str(&format!("m{}", rng.gen_range(0..4))),
                            _ => s.push_str(&format!("{}={}", ["m0", "m1", "e", "g"][rng.gen_range(0..4)], rng.gen_range(0..3))),
                        }
                        s.push(' ');
                    }
                    s.push('\n');
                }
                s.into_bytes()
            }
        };
        let (setup, diagnostics) = setup::parse_bytes(&bytes);
        assert!(diagnostics.iter().all(|d| d.line >= 1 && d.column >= 1));
        if let Some(s) = setup {
            parsed += 1;
            let _ = setup::validate(&s);
        }
    }
    parsed
}
