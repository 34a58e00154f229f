mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use abflux_core::fock::{Mode, ModeKind, ModeRegistry};
use abflux_core::geometry::{ChargeSign, Fluxon, GaugeChoice, ParticlePath, Vec2};
use abflux_core::grid;
use abflux_core::scenarios;
use abflux_core::setup::{
    self, compile, format, parse, shipped_layout, validate, Detector, Event, NamedFluxon, PathDecl, Setup,
    Severity, Source, Spanned,
};

const TOL: f64 = 1e-12;

fn load(name: &str) -> Setup {
    let (s, d) = parse(shipped_layout(name).unwrap());
    assert!(d.is_empty(), "{d:?}");
    s.unwrap()
}

fn alpha(a: f64) -> BTreeMap<String, f64> {
    BTreeMap::from([("F".to_string(), a)])
}

fn quarter(charge: ChargeSign, via: Vec2, end: Vec2, start: Vec2) -> ParticlePath {
    ParticlePath::new(charge, vec![start, via, end]).unwrap()
}

#[test]
fn fig1_parses_to_hand_built_setup() {
    let (top, bottom, left, right) = (Vec2::new(0.0, 1.0), Vec2::new(0.0, -1.0), Vec2::new(-1.0, 0.0), Vec2::new(1.0, 0.0));
    fn sp<T>(v: T) -> Spanned<T> {
        Spanned::new(v, 0)
    }
    let names = [("e_L", ModeKind::Electron), ("e_R", ModeKind::Electron), ("h_L", ModeKind::Hole), ("h_R", ModeKind::Hole), ("g_L", ModeKind::Photon), ("g_R", ModeKind::Photon)];
    let path = |mode: &str, charge, via, start, end| sp(PathDecl { mode: mode.into(), path: quarter(charge, via, end, start) });
    let expected = Setup {
        fluxons: vec![sp(NamedFluxon { name: "F".into(), fluxon: Fluxon::at_origin(0.25) })],
        registry: Arc::new(ModeRegistry::new(names.iter().map(|&(n, k)| Mode::new(n, k)).collect()).unwrap()),
        mode_lines: vec![],
        sources: vec![
            sp(Source { mode: "e_R".into(), position: top, occupancy: 1 }),
            sp(Source { mode: "h_L".into(), position: bottom, occupancy: 1 }),
        ],
        paths: vec![
            path("e_L", ChargeSign::Electron, Vec2::from_angle(0.75 * PI), top, left),
            path("e_R", ChargeSign::Electron, Vec2::from_angle(0.25 * PI), top, right),
            path("h_L", ChargeSign::Hole, Vec2::from_angle(-0.75 * PI), bottom, left),
            path("h_R", ChargeSign::Hole, Vec2::from_angle(-0.25 * PI), bottom, right),
        ],
        events: vec![
            sp(Event::BeamSplitter { a: "e_L".into(), b: "e_R".into() }),
            sp(Event::BeamSplitter { a: "h_L".into(), b: "h_R".into() }),
            sp(Event::PairAnnihilate { electron: "e_L".into(), hole: "h_L".into(), photon: "g_L".into(), at: left }),
            sp(Event::PairAnnihilate { electron: "e_R".into(), hole: "h_R".into(), photon: "g_R".into(), at: right }),
        ],
        detectors: vec![sp(Detector { keep: ["e_L", "e_R", "h_L", "h_R"].iter().map(|m| (m.to_string(), 0)).collect() })],
    };
    let parsed = load("fig1.abl");
    assert_eq!(parsed, expected);
    assert_eq!(parsed.vertex_count(), 2);
}

#[test]
fn shipped_layouts_validate_without_winding_warnings() {
    for (name, _) in setup::SHIPPED_LAYOUTS {
        let d = validate(&load(name));
        assert!(d.is_empty(), "{name}: {d:?}");
    }
}

#[test]
fn compiled_fig1_equals_pipeline_on_grid() {
    let setup = load("fig1");
    for gauge in [GaugeChoice::SubtendedAngle, GaugeChoice::cut_at_angle(1.3, 1)] {
        for a in grid::linear(0.0, 1.0, 16) {
            let compiled = compile(&setup, &alpha(a), &gauge).unwrap();
            let direct = scenarios::run_pair_half_loop(a, &gauge).unwrap();
            let overlap = compiled.final_state.overlap(&direct.final_state).unwrap().norm();
            assert!(overlap >= 1.0 - TOL, "alpha {a}");
            assert!((compiled.relative_phase.unwrap() - direct.relative_phase.unwrap()).abs() < TOL);
            assert!((compiled.postselection_probability - direct.postselection_probability).abs() < TOL);
        }
    }
}

#[test]
fn compiled_fig3_equals_pipeline_on_grid() {
    let setup = load("fig3");
    for a in grid::linear(0.0, 1.0, 16) {
        let compiled = compile(&setup, &alpha(a), &GaugeChoice::SubtendedAngle).unwrap();
        let direct = scenarios::run_n_pair(2, a, &GaugeChoice::SubtendedAngle).unwrap();
        let overlap = compiled.final_state.overlap(&direct.final_state).unwrap().norm();
        assert!(overlap >= 1.0 - TOL, "alpha {a}");
        assert!((compiled.relative_phase.unwrap() - direct.relative_phase.unwrap()).abs() < TOL);
    }
    let half = compile(&setup, &BTreeMap::new(), &GaugeChoice::SubtendedAngle).unwrap();
    assert!((half.relative_phase.unwrap().abs() - std::f64::consts::PI).abs() < TOL);
}

#[test]
fn compiled_fig2_is_the_bright_port() {
    let setup = load("fig2");
    for a in grid::linear(0.0, 1.0, 16) {
        let compiled = compile(&setup, &alpha(a), &GaugeChoice::SubtendedAngle).unwrap();
        let direct = scenarios::run_mz_photon(a, 0.0, &GaugeChoice::SubtendedAngle).unwrap();
        assert!((compiled.postselection_probability - direct.p_bright).abs() < TOL, "alpha {a}");
    }
}

#[test]
fn dark_port_postselection_reports_source_line() {
    let text = shipped_layout("fig2").unwrap();
    let setup = parse(text).0.unwrap();
    let err = compile(&setup, &alpha(0.5), &GaugeChoice::SubtendedAngle).unwrap_err();
    let detect_line = text.lines().position(|l| l.starts_with("detect")).unwrap() + 1;
    assert_eq!(err.line, Some(detect_line));
    assert!(err.to_string().starts_with(&format!("line {detect_line}:")));
}

#[test]
fn standard_ab_ring_is_flagged() {
    let text = "\
fluxon F 0 0 0.5
mode e electron
mode g photon
mode h hole
source g 2 0 1
create g -> e h @ 1 0
path e 1 0 0 1 -1 0 0 -1 1 0
path h 1 0 1.5 0 1 0
annih e h -> g @ 1 0
";
    let (setup, d) = parse(text);
    assert!(d.is_empty(), "{d:?}");
    let d = validate(&setup.unwrap());
    let winding: Vec<_> = d.iter().filter(|d| d.message.contains("singly encircles")).collect();
    assert_eq!(winding.len(), 1);
    assert_eq!(winding[0].severity, Severity::Warning);
    assert_eq!(winding[0].message, "particle e singly encircles fluxon F");
    assert_eq!(winding[0].line, 7);
}

#[test]
fn diagnostics_carry_positions() {
    let (_, d) = parse("mode g photon\nfluxon F 0 0\n  bs g zz\n");
    assert_eq!(d.len(), 2);
    assert_eq!((d[0].line, d[0].column), (2, 1));
    assert!(d[0].message.contains("expected 4 fields"));
    assert_eq!((d[1].line, d[1].column), (3, 8));
    assert_eq!(d[1].to_string(), "3:8: error: unknown mode 'zz'");
}

#[test]
fn round_trip_is_stable() {
    for (name, text) in setup::SHIPPED_LAYOUTS {
        let once = format(&parse(text).0.unwrap());
        let twice = format(&parse(&once).0.unwrap());
        assert_eq!(once, twice, "{name}");
    }
}

#[test]
fn fuzzed_input_never_panics() {
    let parsed = common::fuzz_parse(11, 20_000);
    assert!(parsed > 0);
}
