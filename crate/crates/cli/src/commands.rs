use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::io::ErrorKind;
use std::path::Path;

use abflux_core::birefringence::{self, LoopModel};
use abflux_core::constants::{C, E_CHARGE, ELECTRON_MASS, HBAR};
use abflux_core::geometry::GaugeChoice;
use abflux_core::ring::{self, RingParams, SignConvention};
use abflux_core::scenarios::{self, Bit, JonesVector, CATALOG};
use abflux_core::setup::{compile, parse_bytes, shipped_layout, validate, Setup};
use abflux_core::{angle, Diagnostic};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde_json::json;

use crate::sweep::SweepSpec;
use crate::table::{Cell, Table};

/// Exit code 1 for bad input or physics errors, 2 for I/O.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Io(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Io(m) => write!(f, "error: {m}"),
        }
    }
}

fn input<E: fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

pub enum Flux {
    Sweep(SweepSpec),
    Fixed(f64),
    FromLayout,
}

pub enum Gauge {
    Angle,
    Cut { angle: Option<f64>, seed: u64 },
}

impl Gauge {
    fn resolve(&self, fluxons: usize) -> GaugeChoice {
        match *self {
            Gauge::Angle => GaugeChoice::SubtendedAngle,
            Gauge::Cut { angle: Some(a), .. } => GaugeChoice::cut_at_angle(a, fluxons),
            Gauge::Cut { angle: None, seed } => {
                GaugeChoice::cut_at_angle(StdRng::seed_from_u64(seed).gen_range(0.0..TAU), fluxons)
            }
        }
    }
}

pub fn parse_mass(text: &str) -> Result<f64, Failure> {
    if text.eq_ignore_ascii_case("electron") {
        return Ok(ELECTRON_MASS);
    }
    match text.parse::<f64>() {
        Ok(m) if m.is_finite() && m > 0.0 => Ok(m),
        _ => Err(Failure::Input(format!("mass must be 'electron' or a positive number of grams, got '{text}'"))),
    }
}

fn read_layout(file: &Path) -> Result<(String, Vec<u8>), Failure> {
    let label = file.display().to_string();
    match std::fs::read(file) {
        Ok(bytes) => Ok((label, bytes)),
        Err(e) if e.kind() == ErrorKind::NotFound => {
            let name = file.file_name().and_then(|n| n.to_str()).unwrap_or_default();
            match shipped_layout(name) {
                Some(text) if file.components().count() == 1 => Ok((label, text.as_bytes().to_vec())),
                _ => Err(Failure::Io(format!("cannot read {label}: {e}"))),
            }
        }
        Err(e) => Err(Failure::Io(format!("cannot read {label}: {e}"))),
    }
}

fn report(label: &str, diagnostics: &[Diagnostic]) -> Result<(), Failure> {
    for d in diagnostics {
        eprintln!("{label}:{d}");
    }
    let errors = diagnostics.iter().filter(|d| d.is_error()).count();
    if errors > 0 {
        return Err(Failure::Input(format!("{label}: {errors} error(s)")));
    }
    Ok(())
}

fn load(file: &Path) -> Result<Setup, Failure> {
    let (label, bytes) = read_layout(file)?;
    let (parsed, diagnostics) = parse_bytes(&bytes);
    report(&label, &diagnostics)?;
    let setup = parsed.ok_or_else(|| Failure::Input(format!("{label}: no layout")))?;
    report(&label, &validate(&setup))?;
    Ok(setup)
}

/// Flux shown in the `alpha` column and the overrides for one row.
type FluxPoint = (Option<f64>, BTreeMap<String, f64>);

fn flux_points(setup: &Setup, flux: &Flux) -> Result<Vec<FluxPoint>, Failure> {
    let all = |v: f64| setup.fluxons.iter().map(|f| (f.name.clone(), v)).collect::<BTreeMap<_, _>>();
    Ok(match flux {
        Flux::FromLayout => vec![(setup.fluxons.first().map(|f| f.fluxon.alpha), BTreeMap::new())],
        Flux::Fixed(v) => vec![(Some(*v), all(*v))],
        Flux::Sweep(spec) => match spec.parameter.as_deref() {
            None | Some("alpha") => spec.values().into_iter().map(|v| (Some(v), all(v))).collect(),
            Some(name) => {
                if setup.fluxon(name).is_none() {
                    return Err(Failure::Input(format!("no fluxon named '{name}'")));
                }
                spec.values().into_iter().map(|v| (Some(v), BTreeMap::from([(name.to_string(), v)]))).collect()
            }
        },
    })
}

pub fn simulate(file: &Path, flux: &Flux, gauge: &Gauge) -> Result<Table, Failure> {
    let setup = load(file)?;
    let gauge = gauge.resolve(setup.fluxons.len());
    let points = flux_points(&setup, flux)?;
    let modes: Vec<&str> = setup.paths.iter().map(|p| p.mode.as_str()).collect();

    let mut columns = vec!["alpha".to_string(), "relative_phase".into(), "probability".into()];
    columns.extend(modes.iter().map(|m| format!("phase_{m}")));
    let mut table = Table::new("simulate", columns);

    let rows = points
        .par_iter()
        .map(|(alpha, overrides)| {
            let r = compile(&setup, overrides, &gauge).map_err(input)?;
            let mut row: Vec<Cell> = vec![
                (*alpha).into(),
                r.relative_phase.map(angle::wrap).into(),
                r.postselection_probability.into(),
            ];
            row.extend(modes.iter().map(|m| Cell::from(r.branch_phases.get(*m).copied())));
            Ok(row)
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    rows.into_iter().for_each(|r| table.push(r));
    table.note("gauge", json!(gauge.label()));
    if let GaugeChoice::SingularCut { directions } = &gauge {
        let angles: Vec<f64> = directions.iter().map(|d| d.y.atan2(d.x)).collect();
        table.note("cut_angles", json!(angles));
    }
    Ok(table)
}

pub enum Drive {
    Omega(f64),
    Lambda(f64),
    Sweep(SweepSpec),
}

pub struct RingRequest {
    pub radius: f64,
    pub beta: f64,
    pub n_particles: u32,
    pub mass: f64,
    pub drive: Drive,
    pub convention: SignConvention,
}

impl RingRequest {
    fn at(&self, omega: f64, lambda_bar: f64) -> RingParams {
        RingParams {
            radius: self.radius,
            beta: self.beta,
            n_particles: self.n_particles,
            mass: self.mass,
            charge: E_CHARGE,
            omega,
            lambda_bar,
        }
    }
}

const RING_COLUMNS: [&str; 14] = [
    "omega",
    "lambda_bar",
    "s_plus",
    "s_minus",
    "j_plus_im",
    "j_minus_im",
    "f_plus",
    "f_minus",
    "smat_plus_re",
    "smat_plus_im",
    "smat_minus_re",
    "smat_minus_im",
    "delta_theta",
    "delta_theta_closed_form",
];

pub fn ring(req: &RingRequest) -> Result<Table, Failure> {
    let params: Vec<RingParams> = match &req.drive {
        Drive::Omega(w) => vec![req.at(*w, C / w)],
        Drive::Lambda(l) => vec![req.at(C / l, *l)],
        Drive::Sweep(spec) => spec.values().into_iter().map(|w| req.at(w, C / w)).collect(),
    };
    let rows = params
        .par_iter()
        .map(|p| {
            let r = ring::response(p, req.convention).map_err(input)?;
            let closed = if p.n_particles == 1 { ring::faraday_rotation_closed_form(p).ok() } else { None };
            Ok(vec![
                p.omega.into(),
                p.lambda_bar.into(),
                r.s_plus.into(),
                r.s_minus.into(),
                r.j_plus.im.into(),
                r.j_minus.im.into(),
                r.f_plus.re.into(),
                r.f_minus.re.into(),
                r.smat_plus.re.into(),
                r.smat_plus.im.into(),
                r.smat_minus.re.into(),
                r.smat_minus.im.into(),
                r.delta_theta.into(),
                closed.into(),
            ])
        })
        .collect::<Result<Vec<Vec<Cell>>, Failure>>()?;
    let mut table = Table::new("ring", RING_COLUMNS.iter().map(|c| c.to_string()).collect());
    rows.into_iter().for_each(|r| table.push(r));
    if let Some(p) = params.first() {
        table.note("omega0", json!(ring::omega0(p)));
    }
    let convention = match req.convention {
        SignConvention::ResponseChain => "response-chain",
        SignConvention::AsPrinted => "as-printed",
    };
    table.note("sign_convention", json!(convention));
    Ok(table)
}

fn flux_values(spec: &SweepSpec) -> Result<Vec<f64>, Failure> {
    match spec.parameter.as_deref() {
        None | Some("alpha") => Ok(spec.values()),
        Some(other) => Err(Failure::Input(format!("can only sweep alpha here, not '{other}'"))),
    }
}

pub fn zeeman(spec: &SweepSpec, m_range: i64, radius: f64, mass: f64) -> Result<Table, Failure> {
    let ring = RingParams { radius, mass, ..RingParams::electron(radius, 0.0, 1, 1.0) };
    let alphas = flux_values(spec)?;
    let spectra = alphas
        .par_iter()
        .map(|&a| ring::ab_zeeman_spectrum(a, m_range, &ring).map_err(input))
        .collect::<Result<Vec<_>, _>>()?;

    let columns = ["alpha", "ground_energy", "ground_m", "degenerate"];
    let mut table = Table::new("zeeman", columns.iter().map(|c| c.to_string()).collect());
    let mut crossings = Vec::new();
    let mut previous: Option<&[i64]> = None;
    for s in &spectra {
        let ms: Vec<String> = s.ground_m.iter().map(i64::to_string).collect();
        table.push(vec![s.alpha.into(), s.ground_energy.into(), ms.join(" ").into(), s.is_degenerate().into()]);
        let changed = previous.is_some_and(|p| p.len() == 1 && s.ground_m.len() == 1 && p != s.ground_m.as_slice());
        if s.is_degenerate() || changed {
            crossings.push(s.alpha);
        }
        previous = Some(&s.ground_m);
    }
    table.note("crossings", json!(crossings));
    table.note("energy_unit", json!(HBAR * HBAR / (2.0 * mass * radius * radius)));
    Ok(table)
}

pub fn eh(spec: &SweepSpec, mass: f64, theta: f64, epsilon: Option<f64>) -> Result<Table, Failure> {
    let base = LoopModel::with_mass(mass, spec.start, theta).with_epsilon(epsilon);
    let fields = spec.values();
    let phases = birefringence::net_phase_sweep(&base, &fields).map_err(input)?;
    let exponent = birefringence::net_phase_scaling(&base, &fields).map_err(input)?;

    let columns = ["b_field", "phi", "epsilon", "net_phase"];
    let mut table = Table::new("eh", columns.iter().map(|c| c.to_string()).collect());
    for (&b, &net) in fields.iter().zip(&phases) {
        let m = base.with_field(b);
        table.push(vec![b.into(), birefringence::loop_ab_phase(&m).into(), m.epsilon().into(), net.into()]);
    }
    table.note("b_exponent", exponent.map_or(json!("none"), |e| json!(e)));
    table.note("birefringence_ratio", json!(birefringence::eh_birefringence_ratio()));
    Ok(table)
}

pub fn scenario_list() -> Table {
    let mut table = Table::new("scenarios list", vec!["name".into(), "layout".into(), "summary".into()]);
    for s in CATALOG {
        table.push(vec![s.name.into(), s.layout_file.map_or(Cell::Missing, Cell::from), s.summary.into()]);
    }
    table
}

pub struct ScenarioOptions {
    pub pairs: usize,
    pub extra_phase: f64,
}

fn scenario_alphas(flux: &Flux) -> Result<Vec<f64>, Failure> {
    match flux {
        Flux::Sweep(spec) => flux_values(spec),
        Flux::Fixed(v) => Ok(vec![*v]),
        Flux::FromLayout => Ok(abflux_core::grid::linear(0.0, 1.0, 17)),
    }
}

fn named_table(command: &str, columns: &[&str], rows: Vec<Vec<Cell>>) -> Table {
    let mut table = Table::new(command, columns.iter().map(|c| c.to_string()).collect());
    rows.into_iter().for_each(|r| table.push(r));
    table
}

pub fn scenario_run(name: &str, flux: &Flux, gauge: &Gauge, opts: &ScenarioOptions) -> Result<Table, Failure> {
    let command = format!("scenarios run {name}");
    let g = gauge.resolve(1);
    match name {
        "pair-half-loop" | "n-pair" => {
            let rows = scenario_alphas(flux)?
                .par_iter()
                .map(|&a| {
                    let r = if name == "n-pair" {
                        scenarios::run_n_pair(opts.pairs, a, &g)
                    } else {
                        scenarios::run_pair_half_loop(a, &g)
                    }
                    .map_err(input)?;
                    let phase = r.relative_phase.ok_or_else(|| Failure::Input("no relative phase".into()))?;
                    Ok(vec![
                        a.into(),
                        angle::wrap(phase).into(),
                        r.postselection_probability.into(),
                        scenarios::full_loop_mismatch(phase, a).into(),
                    ])
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            Ok(named_table(&command, &["alpha", "relative_phase", "probability", "loop_mismatch"], rows))
        }
        "mach-zehnder" => {
            let rows = scenario_alphas(flux)?
                .par_iter()
                .map(|&a| {
                    let o = scenarios::run_mz_photon(a, opts.extra_phase, &g).map_err(input)?;
                    Ok(vec![a.into(), o.p_bright.into(), o.p_dark.into()])
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            Ok(named_table(&command, &["alpha", "p_bright", "p_dark"], rows))
        }
        "exciton-rotation" => {
            let rows = scenario_alphas(flux)?
                .into_iter()
                .map(|a| {
                    let out = scenarios::exciton_polarization_rotation(a, JonesVector::x()).map_err(input)?;
                    let s = out.stokes();
                    Ok(vec![a.into(), (0.5 * s[2].atan2(s[1])).into(), s[1].into(), s[2].into(), s[3].into()])
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            Ok(named_table(&command, &["alpha", "rotation", "s1", "s2", "s3"], rows))
        }
        "bit-encoding" => {
            let mut rows = Vec::new();
            let mut targets = Vec::new();
            for (label, bit) in [(0i64, Bit::Zero), (1, Bit::One)] {
                let (alpha, target) = scenarios::encode_bit(bit);
                let r = scenarios::run_pair_half_loop(alpha, &g).map_err(input)?;
                let atoms = scenarios::transfer_to_atoms(&r).map_err(input)?;
                let fidelity = atoms.overlap(&target).map_err(input)?.norm();
                rows.push(vec![label.into(), alpha.into(), fidelity.into()]);
                targets.push(target);
            }
            let mut table = named_table(&command, &["bit", "alpha", "fidelity"], rows);
            let mutual = targets[0].overlap(&targets[1]).map_err(input)?.norm();
            table.note("mutual_overlap", json!(mutual));
            Ok(table)
        }
        other => {
            let known: Vec<&str> = CATALOG.iter().map(|s| s.name).collect();
            Err(Failure::Input(format!("unknown scenario '{other}'; known: {}", known.join(", "))))
        }
    }
}
