use std::fmt::Write;

use super::{Event, Setup};
use crate::geometry::Vec2;

fn num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v)
    } else {
        format!("{:?}", v)
    }
}

fn pt(v: Vec2) -> String {
    format!("{} {}", num(v.x), num(v.y))
}

/// Canonical text for a layout: declarations grouped by kind in the order
/// fluxons, modes, sources, paths, events, detectors. Comments are dropped.
pub fn format(setup: &Setup) -> String {
    let mut out = String::new();
    for f in &setup.fluxons {
        let _ = writeln!(out, "fluxon {} {} {}", f.name, pt(f.fluxon.position), num(f.fluxon.alpha));
    }
    for m in setup.registry.modes() {
        if m.max_occupancy == 1 {
            let _ = writeln!(out, "mode {} {}", m.name, m.kind);
        } else {
            let _ = writeln!(out, "mode {} {} {}", m.name, m.kind, m.max_occupancy);
        }
    }
    for s in &setup.sources {
        let _ = writeln!(out, "source {} {} {}", s.mode, pt(s.position), s.occupancy);
    }
    for p in &setup.paths {
        let points: Vec<String> = p.path.points().iter().map(|&v| pt(v)).collect();
        let _ = writeln!(out, "path {} {}", p.mode, points.join(" "));
    }
    for e in &setup.events {
        let _ = match &e.value {
            Event::BeamSplitter { a, b } => writeln!(out, "bs {a} {b}"),
            Event::PairCreate { photon, electron, hole, at } => {
                writeln!(out, "create {photon} -> {electron} {hole} @ {}", pt(*at))
            }
            Event::PairAnnihilate { electron, hole, photon, at } => {
                writeln!(out, "annih {electron} {hole} -> {photon} @ {}", pt(*at))
            }
        };
    }
    for d in &setup.detectors {
        let keep: Vec<String> = d.keep.iter().map(|(m, o)| format!("{m}={o}")).collect();
        let _ = writeln!(out, "detect keep {}", keep.join(" "));
    }
    out
}
