use std::collections::{HashMap, HashSet};

use super::{Diagnostic, Event, Setup};
use crate::geometry::{self, GeometryError, Vec2};

/// Largest distance between a path endpoint and the vertex it must meet.
pub const VERTEX_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
enum Liveness {
    Dormant,
    Live { origin: Option<Vec2> },
    Consumed { line: usize },
}

fn pt(v: Vec2) -> String {
    format!("({}, {})", v.x, v.y)
}

struct Checker<'a> {
    setup: &'a Setup,
    diagnostics: Vec<Diagnostic>,
    state: HashMap<&'a str, Liveness>,
}

impl<'a> Checker<'a> {
    fn error(&mut self, line: usize, message: String) {
        self.diagnostics.push(Diagnostic::error(line, 1, message));
    }

    fn get(&self, mode: &str) -> Liveness {
        self.state.get(mode).copied().unwrap_or(Liveness::Dormant)
    }

    fn require_live(&mut self, mode: &str, line: usize) -> Option<Option<Vec2>> {
        match self.get(mode) {
            Liveness::Live { origin } => Some(origin),
            Liveness::Dormant => {
                self.error(line, format!("mode '{mode}' is consumed before it is created"));
                None
            }
            Liveness::Consumed { line: at } => {
                self.error(line, format!("mode '{mode}' is used after it was consumed on line {at}"));
                None
            }
        }
    }

    fn check_endpoints(&mut self, mode: &str, origin: Option<Vec2>, vertex: Vec2, line: usize) {
        let Some(path) = self.setup.path_of(mode) else {
            self.error(line, format!("charged mode '{mode}' reaches a vertex without a path"));
            return;
        };
        if path.end().distance(vertex) > VERTEX_TOLERANCE {
            let msg = format!("path of '{mode}' ends at {}, but the vertex is at {}", pt(path.end()), pt(vertex));
            self.error(line, msg);
        }
        if let Some(o) = origin {
            if path.start().distance(o) > VERTEX_TOLERANCE {
                let msg = format!("path of '{mode}' starts at {}, but the mode originates at {}", pt(path.start()), pt(o));
                self.error(line, msg);
            }
        }
    }

    fn event(&mut self, event: &'a Event, line: usize) {
        match event {
            Event::BeamSplitter { a, b } => {
                let (sa, sb) = (self.get(a), self.get(b));
                for (m, s) in [(a, sa), (b, sb)] {
                    if let Liveness::Consumed { line: at } = s {
                        self.error(line, format!("mode '{m}' is used after it was consumed on line {at}"));
                        return;
                    }
                }
                let origin = match (sa, sb) {
                    (Liveness::Live { origin }, _) | (_, Liveness::Live { origin }) => origin,
                    _ => {
                        let msg = format!("beam splitter on '{a}' and '{b}' acts before either mode is populated");
                        self.diagnostics.push(Diagnostic::warning(line, 1, msg));
                        None
                    }
                };
                self.state.insert(a, Liveness::Live { origin });
                self.state.insert(b, Liveness::Live { origin });
            }
            Event::PairCreate { photon, electron, hole, at } => {
                self.require_live(photon, line);
                self.state.insert(electron, Liveness::Live { origin: Some(*at) });
                self.state.insert(hole, Liveness::Live { origin: Some(*at) });
            }
            Event::PairAnnihilate { electron, hole, photon, at } => {
                for m in [electron, hole] {
                    if let Some(origin) = self.require_live(m, line) {
                        self.check_endpoints(m, origin, *at, line);
                    }
                    self.state.insert(m, Liveness::Consumed { line });
                }
                if let Liveness::Consumed { line: at } = self.get(photon) {
                    self.error(line, format!("mode '{photon}' is used after it was consumed on line {at}"));
                }
                self.state.insert(photon, Liveness::Live { origin: Some(*at) });
            }
        }
    }
}

/// Structural and topological checks on a parsed layout.
///
/// Errors: paths touching a fluxon, events out of order, path endpoints
/// that miss their vertices. Warnings: a single particle winding around a
/// fluxon, unused modes.
pub fn validate(setup: &Setup) -> Vec<Diagnostic> {
    let mut checker = Checker { setup, diagnostics: Vec::new(), state: HashMap::new() };

    for decl in &setup.paths {
        for f in &setup.fluxons {
            match geometry::completed_loops(&decl.path, f.fluxon.position) {
                Ok(0) => {}
                Ok(_) => {
                    let msg = format!("particle {} singly encircles fluxon {}", decl.mode, f.name);
                    checker.diagnostics.push(Diagnostic::warning(decl.line, 1, msg));
                }
                Err(GeometryError::PointOnPath(_)) | Err(GeometryError::SingularTrajectory { .. }) => {
                    checker.error(decl.line, format!("path of '{}' passes through fluxon '{}'", decl.mode, f.name));
                }
                Err(e) => checker.error(decl.line, format!("path of '{}': {e}", decl.mode)),
            }
        }
    }

    for src in &setup.sources {
        if src.occupancy == 0 {
            continue;
        }
        if let Some(path) = setup.path_of(&src.mode) {
            if path.start().distance(src.position) > VERTEX_TOLERANCE {
                let msg = format!(
                    "source of '{}' at {} is not where its path starts, {}",
                    src.mode,
                    pt(src.position),
                    pt(path.start())
                );
                checker.error(src.line, msg);
            }
        }
        checker.state.insert(&src.mode, Liveness::Live { origin: Some(src.position) });
    }

    for event in &setup.events {
        checker.event(&event.value, event.line);
    }

    let mut used: HashSet<&str> = HashSet::new();
    used.extend(setup.sources.iter().map(|s| s.mode.as_str()));
    used.extend(setup.paths.iter().map(|p| p.mode.as_str()));
    used.extend(setup.events.iter().flat_map(|e| e.modes()));
    used.extend(setup.detectors.iter().flat_map(|d| d.keep.iter().map(|(m, _)| m.as_str())));
    for (mode, &line) in setup.registry.modes().iter().zip(&setup.mode_lines) {
        if !used.contains(mode.name.as_str()) {
            let msg = format!("mode '{}' is never referenced", mode.name);
            checker.diagnostics.push(Diagnostic::warning(line, 1, msg));
        }
    }

    let mut diagnostics = checker.diagnostics;
    diagnostics.sort_by_key(|d| (d.line, d.column, d.severity));
    diagnostics
}
