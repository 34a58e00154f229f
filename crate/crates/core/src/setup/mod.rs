//! The `.abl` layout language.
//!
//! One declaration per line, `#` starts a comment:
//!
//! ```text
//! fluxon  <name> <x> <y> <alpha>
//! mode    <name> <electron|hole|photon|atom> [max_occ]
//! source  <mode> <x> <y> <occupancy>
//! path    <mode> <x1> <y1> <x2> <y2> [...more points]
//! bs      <modeA> <modeB>
//! create  <photon_mode> -> <e_mode> <h_mode> @ <x> <y>
//! annih   <e_mode> <h_mode> -> <photon_mode> @ <x> <y>
//! detect  keep <mode>=<occ> [<mode>=<occ> ...]
//! ```
//!
//! Events run in file order. Detect lines are alternatives: a ket survives
//! postselection if it satisfies every condition of at least one line.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::fock::ModeRegistry;
use crate::geometry::{Fluxon, ParticlePath, Vec2};

mod compile;
mod format;
mod parse;
mod validate;

pub use compile::{compile, CompileError, CompileErrorKind};
pub use format::format;
pub use parse::{parse, parse_bytes};
pub use validate::{validate, VERTEX_TOLERANCE};

/// A value with the source line it came from. Equality ignores the line.
#[derive(Debug, Clone)]
pub struct Spanned<T> {
    pub value: T,
    pub line: usize,
}

impl<T> Spanned<T> {
    pub fn new(value: T, line: usize) -> Self {
        Spanned { value, line }
    }
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl<T> std::ops::Deref for Spanned<T> {
    type Target = T;

    fn deref(&self) -> &T {
        &self.value
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedFluxon {
    pub name: String,
    pub fluxon: Fluxon,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Source {
    pub mode: String,
    pub position: Vec2,
    pub occupancy: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathDecl {
    pub mode: String,
    pub path: ParticlePath,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    BeamSplitter { a: String, b: String },
    PairCreate { photon: String, electron: String, hole: String, at: Vec2 },
    PairAnnihilate { electron: String, hole: String, photon: String, at: Vec2 },
}

impl Event {
    pub fn modes(&self) -> Vec<&str> {
        match self {
            Event::BeamSplitter { a, b } => vec![a, b],
            Event::PairCreate { photon, electron, hole, .. } => vec![photon, electron, hole],
            Event::PairAnnihilate { electron, hole, photon, .. } => vec![electron, hole, photon],
        }
    }

    pub fn is_vertex(&self) -> bool {
        !matches!(self, Event::BeamSplitter { .. })
    }
}

/// One postselection alternative: every listed mode has the given occupancy.
#[derive(Debug, Clone, PartialEq)]
pub struct Detector {
    pub keep: Vec<(String, u8)>,
}

/// Equality compares content only, not source lines.
#[derive(Debug, Clone)]
pub struct Setup {
    pub fluxons: Vec<Spanned<NamedFluxon>>,
    pub registry: Arc<ModeRegistry>,
    /// Declaration line of each registry mode, in registry order.
    pub mode_lines: Vec<usize>,
    pub sources: Vec<Spanned<Source>>,
    pub paths: Vec<Spanned<PathDecl>>,
    pub events: Vec<Spanned<Event>>,
    pub detectors: Vec<Spanned<Detector>>,
}

impl PartialEq for Setup {
    fn eq(&self, other: &Self) -> bool {
        self.fluxons == other.fluxons
            && self.registry == other.registry
            && self.sources == other.sources
            && self.paths == other.paths
            && self.events == other.events
            && self.detectors == other.detectors
    }
}

impl Setup {
    pub fn path_of(&self, mode: &str) -> Option<&ParticlePath> {
        self.paths.iter().find(|p| p.mode == mode).map(|p| &p.path)
    }

    pub fn vertex_count(&self) -> usize {
        self.events.iter().filter(|e| e.is_vertex()).count()
    }

    pub fn fluxon(&self, name: &str) -> Option<&Fluxon> {
        self.fluxons.iter().find(|f| f.name == name).map(|f| &f.fluxon)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn error(line: usize, column: usize, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, line: line.max(1), column: column.max(1), message: message.into() }
    }

    pub fn warning(line: usize, column: usize, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, line: line.max(1), column: column.max(1), message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {}: {}", self.line, self.column, sev, self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

/// Layout files embedded in the library.
pub const SHIPPED_LAYOUTS: &[(&str, &str)] = &[
    ("fig1.abl", include_str!("../../layouts/fig1.abl")),
    ("fig2.abl", include_str!("../../layouts/fig2.abl")),
    ("fig3.abl", include_str!("../../layouts/fig3.abl")),
];

/// Embedded layout by file name, with or without the `.abl` extension.
pub fn shipped_layout(name: &str) -> Option<&'static str> {
    let base = name.strip_suffix(".abl").unwrap_or(name);
    SHIPPED_LAYOUTS
        .iter()
        .find(|(file, _)| file.strip_suffix(".abl") == Some(base))
        .map(|(_, text)| *text)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::geometry::GaugeChoice;
    use crate::scenarios;

    fn load(name: &str) -> Setup {
        let (setup, diags) = parse(shipped_layout(name).unwrap());
        assert!(diags.is_empty(), "{name}: {diags:?}");
        setup.unwrap()
    }

    fn alpha(a: f64) -> BTreeMap<String, f64> {
        BTreeMap::from([("F".to_string(), a)])
    }

    #[test]
    fn shipped_files_are_clean() {
        for (name, _) in SHIPPED_LAYOUTS {
            let setup = load(name);
            assert_eq!(validate(&setup), vec![], "{name}");
        }
        let fig1 = load("fig1");
        assert_eq!((fig1.fluxons.len(), fig1.registry.len(), fig1.vertex_count()), (1, 6, 2));
        assert!(shipped_layout("fig4.abl").is_none());
    }

    #[test]
    fn fig1_matches_pipeline() {
        let setup = load("fig1.abl");
        let g = GaugeChoice::SubtendedAngle;
        let compiled = compile(&setup, &alpha(0.25), &g).unwrap();
        let direct = scenarios::run_pair_half_loop(0.25, &g).unwrap();
        assert!((compiled.relative_phase.unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let overlap = compiled.final_state.overlap(&direct.final_state).unwrap().norm();
        assert!((overlap - 1.0).abs() < 1e-12);
        assert!((compiled.postselection_probability - direct.postselection_probability).abs() < 1e-12);
    }

    #[test]
    fn fig2_and_fig3() {
        let g = GaugeChoice::SubtendedAngle;
        let r = compile(&load("fig2"), &BTreeMap::new(), &g).unwrap();
        assert!((r.postselection_probability - 1.0).abs() < 1e-12);
        let r = compile(&load("fig3"), &BTreeMap::new(), &g).unwrap();
        assert!((r.relative_phase.unwrap().abs() - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn round_trip() {
        for (name, text) in SHIPPED_LAYOUTS {
            let first = parse(text).0.unwrap();
            let printed = format(&first);
            let (second, diags) = parse(&printed);
            assert!(diags.is_empty(), "{name}: {diags:?}");
            assert_eq!(second.unwrap(), first, "{name}");
        }
    }

    #[test]
    fn full_loop_is_flagged() {
        let text = "fluxon F 0 0 0.5\nmode e electron\nmode g photon\nmode h hole\n\
                    create g -> e h @ 1 0\npath e 1 0 0 1 -1 0 0 -1 1 0\npath h 1 0 1.5 0\n\
                    source g 2 0 1\n";
        let (setup, diags) = parse(text);
        assert!(diags.is_empty(), "{diags:?}");
        let d = validate(&setup.unwrap());
        assert!(d.iter().any(|d| d.severity == Severity::Warning && d.message == "particle e singly encircles fluxon F"), "{d:?}");
        assert!(!d.iter().any(|d| d.message.contains("particle h")));
    }

    #[test]
    fn path_through_fluxon_is_an_error() {
        let text = shipped_layout("fig1").unwrap().replace("fluxon F 0 0 0.25", "fluxon F -0.7071067811865475 0.7071067811865476 0.25");
        let setup = parse(&text).0.unwrap();
        let d = validate(&setup);
        assert!(d.iter().any(|d| d.is_error() && d.message.contains("passes through fluxon")), "{d:?}");
        assert!(compile(&setup, &BTreeMap::new(), &GaugeChoice::SubtendedAngle).is_err());
    }

    #[test]
    fn event_order_is_checked() {
        let text = shipped_layout("fig1").unwrap().replace("bs h_L h_R\n", "") + "bs h_L h_R\n";
        let setup = parse(&text).0.unwrap();
        let d = validate(&setup);
        assert!(d.iter().any(|d| d.is_error() && d.message.contains("consumed")), "{d:?}");
    }

    #[test]
    fn endpoints_must_meet_vertices() {
        let text = shipped_layout("fig1").unwrap().replace("annih e_L h_L -> g_L @ -1 0", "annih e_L h_L -> g_L @ -1 0.1");
        let d = validate(&parse(&text).0.unwrap());
        assert!(d.iter().any(|d| d.is_error() && d.message.contains("ends at")), "{d:?}");
    }

    #[test]
    fn unused_mode_warning() {
        let text = shipped_layout("fig1").unwrap().to_string() + "mode spare photon\n";
        let d = validate(&parse(&text).0.unwrap());
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("'spare' is never referenced"));
    }

    #[test]
    fn unknown_override() {
        let err = compile(&load("fig1"), &BTreeMap::from([("G".to_string(), 0.1)]), &GaugeChoice::SubtendedAngle);
        assert_eq!(err.unwrap_err().kind, CompileErrorKind::UnknownFluxon("G".into()));
    }
}
