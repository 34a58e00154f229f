use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::{Event, Setup};
use crate::fock::{FockError, FockState, VertexPhase};
use crate::geometry::{self, Fluxon, GaugeChoice, GeometryError};
use crate::scenarios::{self, ScenarioError, ScenarioResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompileErrorKind {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("no fluxon named '{0}'")]
    UnknownFluxon(String),
    #[error("layout does not validate: {0}")]
    Invalid(String),
}

/// A compile failure, tagged with the source line of the offending element
/// where there is one.
#[derive(Debug, Clone, PartialEq)]
pub struct CompileError {
    pub line: Option<usize>,
    pub kind: CompileErrorKind,
}

impl CompileError {
    fn at(line: usize, kind: impl Into<CompileErrorKind>) -> Self {
        CompileError { line: Some(line), kind: kind.into() }
    }

    fn global(kind: impl Into<CompileErrorKind>) -> Self {
        CompileError { line: None, kind: kind.into() }
    }
}

impl fmt::Display for CompileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl std::error::Error for CompileError {}

impl From<ScenarioError> for CompileErrorKind {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Fock(f) => CompileErrorKind::Fock(f),
            ScenarioError::Geometry(g) => CompileErrorKind::Geometry(g),
            other => CompileErrorKind::Invalid(other.to_string()),
        }
    }
}

/// Runs a layout: sources fill the initial ket, events apply in file order,
/// each annihilation vertex carries the AB phases of the electron and hole
/// paths, and detect lines postselect.
///
/// When exactly two kets survive, they are the reference pair in descending
/// occupation order.
pub fn compile(
    setup: &Setup,
    alpha_overrides: &BTreeMap<String, f64>,
    gauge: &GaugeChoice,
) -> Result<ScenarioResult, CompileError> {
    if let Some(d) = super::validate(setup).into_iter().find(|d| d.is_error()) {
        return Err(CompileError::at(d.line, CompileErrorKind::Invalid(d.message)));
    }
    for name in alpha_overrides.keys() {
        if setup.fluxon(name).is_none() {
            return Err(CompileError::global(CompileErrorKind::UnknownFluxon(name.clone())));
        }
    }
    let fluxons: Vec<Fluxon> = setup
        .fluxons
        .iter()
        .map(|f| match alpha_overrides.get(&f.name) {
            Some(&alpha) => Fluxon::new(f.fluxon.position, alpha),
            None => f.fluxon,
        })
        .collect();

    let mut phases = BTreeMap::new();
    for decl in &setup.paths {
        let phase = geometry::ab_phase(&decl.path, &fluxons, gauge).map_err(|e| CompileError::at(decl.line, e))?;
        phases.insert(decl.mode.clone(), phase);
    }

    let reg = setup.registry.clone();
    let mut occupation = vec![0u8; reg.len()];
    for src in &setup.sources {
        let i = reg.index_of(&src.mode).map_err(|e| CompileError::at(src.line, e))?;
        occupation[i] = occupation[i].saturating_add(src.occupancy);
        reg.check_occupation(&occupation).map_err(|e| CompileError::at(src.line, e))?;
    }
    let mut state = FockState::new(reg.clone(), &occupation).map_err(CompileError::global)?;

    for event in &setup.events {
        let step = match &event.value {
            Event::BeamSplitter { a, b } => state.beam_splitter(a, b),
            Event::PairCreate { photon, electron, hole, .. } => {
                state.pair_creation(photon, electron, hole, VertexPhase::ZERO)
            }
            Event::PairAnnihilate { electron, hole, photon, .. } => {
                let phase = phases.get(electron).copied().unwrap_or(0.0) + phases.get(hole).copied().unwrap_or(0.0);
                state.pair_recombination(electron, hole, photon, VertexPhase(phase))
            }
        };
        state = step.map_err(|e| CompileError::at(event.line, e))?;
    }

    let (kept, probability) = if setup.detectors.is_empty() {
        let p = state.norm_sqr();
        (state.normalized().map_err(CompileError::global)?, p)
    } else {
        let conditions: Vec<Vec<(usize, u8)>> = setup
            .detectors
            .iter()
            .map(|d| d.keep.iter().map(|(m, o)| Ok((reg.index_of(m)?, *o))).collect::<Result<_, FockError>>())
            .collect::<Result<_, _>>()
            .map_err(CompileError::global)?;
        let line = setup.detectors[0].line;
        state
            .postselect(|occ| conditions.iter().any(|c| c.iter().all(|&(i, o)| occ[i] == o)))
            .map_err(|e| CompileError::at(line, e))?
    };

    let reference = {
        let kets: Vec<Vec<u8>> = kept.terms().rev().map(|(k, _)| k.to_vec()).collect();
        match kets.as_slice() {
            [a, b] => Some((a.clone(), b.clone())),
            _ => None,
        }
    };
    scenarios::finish(kept, probability, reference, gauge, phases).map_err(CompileError::global)
}
