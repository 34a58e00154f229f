mod commands;
mod sweep;
mod table;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use abflux_core::ring::SignConvention;
use commands::Failure;
use sweep::SweepSpec;
use table::OutputFormat;

#[derive(Parser, Debug)]
#[command(name = "abflux", version, about = "AB phases from setups where no single charge closes a loop")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct OutputArgs {
    /// Output format.
    #[arg(long = "out", value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GaugeKind {
    Angle,
    Cut,
}

#[derive(Args, Debug, Clone)]
struct GaugeArgs {
    /// Gauge for the open-path phases.
    #[arg(long, value_enum, default_value_t = GaugeKind::Angle)]
    gauge: GaugeKind,
    /// Direction of the singular cut (rad); drawn from --seed when omitted.
    #[arg(long, allow_hyphen_values = true)]
    cut_angle: Option<f64>,
    /// Seed for randomized cut directions.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Clone)]
struct FluxArgs {
    /// Flux sweep, `alpha=start:stop:steps[:log]` or `<fluxon>=...`.
    #[arg(long, conflicts_with = "alpha")]
    sweep: Option<SweepSpec>,
    /// Single flux value (flux quanta) for every fluxon.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse, validate and run a layout file.
    Simulate {
        /// Layout path; shipped names such as fig1.abl also work.
        file: PathBuf,
        #[command(flatten)]
        flux: FluxArgs,
        #[command(flatten)]
        gauge: GaugeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Linear response of a flux-threaded ring to circular light (CGS).
    Ring {
        /// Ring radius (cm).
        #[arg(long = "R", default_value_t = 1e-4)]
        radius: f64,
        /// Flux through the ring (flux quanta).
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        beta: f64,
        /// Drive angular frequency (rad/s).
        #[arg(long, conflicts_with_all = ["lambda", "omega_sweep"])]
        omega: Option<f64>,
        /// Reduced wavelength c/ω (cm); 1e-4 when no frequency is given.
        #[arg(long, conflicts_with = "omega_sweep")]
        lambda: Option<f64>,
        /// Frequency sweep (rad/s), `start:stop:steps[:log]`.
        #[arg(long)]
        omega_sweep: Option<SweepSpec>,
        /// Particles on the ring.
        #[arg(long = "N", default_value_t = 1)]
        n_particles: u32,
        /// Particle mass: `electron` or grams.
        #[arg(long, default_value = "electron")]
        mass: String,
        /// S-matrix denominator convention.
        #[arg(long, value_enum, default_value_t = Convention::ResponseChain)]
        sign_convention: Convention,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Ground level of a flux-threaded ring against flux.
    Zeeman {
        /// Flux sweep, `alpha=start:stop:steps`.
        #[arg(long, default_value = "alpha=0:1:101")]
        sweep: SweepSpec,
        /// Angular momenta |m| ≤ m-range are considered.
        #[arg(long, default_value_t = 8)]
        m_range: i64,
        /// Ring radius (cm).
        #[arg(long = "R", default_value_t = 1e-4)]
        radius: f64,
        /// Particle mass: `electron` or grams.
        #[arg(long, default_value = "electron")]
        mass: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Net phase of virtual pair loops in a magnetic field, and the
    /// Euler-Heisenberg birefringence ratio.
    Eh {
        /// Field sweep (gauss), `start:stop:steps[:log]`; log by default.
        #[arg(long, default_value = "1:100:21")]
        b_sweep: SweepSpec,
        /// Treat --b-sweep as linear.
        #[arg(long)]
        linear: bool,
        /// Loop particle mass: `electron` or grams.
        #[arg(long, default_value = "electron")]
        mass: String,
        /// Angle between the loop plane and the field (rad).
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_hyphen_values = true)]
        theta: f64,
        /// Fixed orientation asymmetry instead of μB/mc².
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Built-in scenarios.
    Scenarios {
        #[command(subcommand)]
        action: ScenarioAction,
    },
}

#[derive(Subcommand, Debug)]
enum ScenarioAction {
    /// List the built-in scenarios.
    List {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run a built-in scenario over a flux sweep.
    Run {
        name: String,
        #[command(flatten)]
        flux: FluxArgs,
        #[command(flatten)]
        gauge: GaugeArgs,
        /// Pairs for n-pair.
        #[arg(long, default_value_t = 2)]
        pairs: usize,
        /// Extra phase in the photon arm for mach-zehnder (rad).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        extra_phase: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Convention {
    ResponseChain,
    AsPrinted,
}

impl From<Convention> for SignConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::ResponseChain => SignConvention::ResponseChain,
            Convention::AsPrinted => SignConvention::AsPrinted,
        }
    }
}

fn run(cli: Cli) -> Result<(table::Table, OutputFormat), Failure> {
    match cli.command {
        Command::Simulate { file, flux, gauge, out } => {
            Ok((commands::simulate(&file, &flux.into(), &gauge.into())?, out.format))
        }
        Command::Ring { radius, beta, omega, lambda, omega_sweep, n_particles, mass, sign_convention, out } => {
            let drive = match (omega, lambda, omega_sweep) {
                (Some(w), _, _) => commands::Drive::Omega(w),
                (_, Some(l), _) => commands::Drive::Lambda(l),
                (_, _, Some(s)) => commands::Drive::Sweep(s),
                _ => commands::Drive::Lambda(1e-4),
            };
            let req = commands::RingRequest {
                radius,
                beta,
                n_particles,
                mass: commands::parse_mass(&mass)?,
                drive,
                convention: sign_convention.into(),
            };
            Ok((commands::ring(&req)?, out.format))
        }
        Command::Zeeman { sweep, m_range, radius, mass, out } => {
            Ok((commands::zeeman(&sweep, m_range, radius, commands::parse_mass(&mass)?)?, out.format))
        }
        Command::Eh { b_sweep, linear, mass, theta, epsilon, out } => {
            let scale = if linear { sweep::Scale::Linear } else { sweep::Scale::Log };
            let sweep = b_sweep.with_scale(scale).map_err(Failure::Input)?;
            Ok((commands::eh(&sweep, commands::parse_mass(&mass)?, theta, epsilon)?, out.format))
        }
        Command::Scenarios { action: ScenarioAction::List { out } } => Ok((commands::scenario_list(), out.format)),
        Command::Scenarios { action: ScenarioAction::Run { name, flux, gauge, pairs, extra_phase, out } } => {
            let opts = commands::ScenarioOptions { pairs, extra_phase };
            Ok((commands::scenario_run(&name, &flux.into(), &gauge.into(), &opts)?, out.format))
        }
    }
}

impl From<FluxArgs> for commands::Flux {
    fn from(a: FluxArgs) -> Self {
        match (a.sweep, a.alpha) {
            (Some(s), _) => commands::Flux::Sweep(s),
            (None, Some(v)) => commands::Flux::Fixed(v),
            (None, None) => commands::Flux::FromLayout,
        }
    }
}

impl From<GaugeArgs> for commands::Gauge {
    fn from(a: GaugeArgs) -> Self {
        match a.gauge {
            GaugeKind::Angle => commands::Gauge::Angle,
            GaugeKind::Cut => commands::Gauge::Cut { angle: a.cut_angle, seed: a.seed },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout().lock();
    let stderr = io::stderr();
    match run(cli) {
        Ok((table, format)) => match table.write(format, stdout, stderr.lock()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                let _ = writeln!(stderr.lock(), "error: {e}");
                ExitCode::from(2)
            }
        },
        Err(f) => {
            let _ = writeln!(stderr.lock(), "{f}");
            ExitCode::from(f.code())
        }
    }
}
