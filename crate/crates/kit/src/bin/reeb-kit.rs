use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use reeb_core::asym_op::{spectral_cz, spectrum, DEFAULT_WINDOW};
use reeb_core::contact_models::{neck_profile, ChartPoint, ContactError, RadialProfile};
use reeb_core::reeb_flow::{
    equatorial_orbit_with_steps, integrate, FlowError, DEFAULT_ORBIT_STEPS,
};
use reeb_core::sp_paths::{classify_endpoint, conley_zehnder, SymplecticMatrix};
use reeb_kit::error::read_json;
use reeb_kit::formats::{OperatorFile, PathFile};
use reeb_kit::ledger_file::{check_ledger, parse_ledger};
use reeb_kit::{run_connect_sum_verification, trace, KitError, ScenarioConfig};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "reeb-kit",
    version,
    about = "Reeb dynamics and curve ledger checks for the connected-sum neck"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Conley-Zehnder indices.
    #[command(subcommand)]
    Cz(CzCommand),
    #[command(subcommand)]
    Flow(FlowCommand),
    #[command(subcommand)]
    Orbit(OrbitCommand),
    /// Windowed spectrum of an asymptotic operator.
    Spectrum {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
        window: Option<Vec<f64>>,
    },
    #[command(subcommand)]
    Ledger(LedgerCommand),
    #[command(subcommand)]
    Report(ReportCommand),
}

#[derive(Subcommand)]
enum CzCommand {
    /// Index of a sampled or generated symplectic path.
    Path { file: PathBuf },
    /// Index of an asymptotic operator from its spectrum.
    Spectral { file: PathBuf },
}

#[derive(Subcommand)]
enum FlowCommand {
    /// RK4 trajectory of the neck Reeb field from a polar-chart start.
    Trace {
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long)]
        duration: f64,
        #[arg(long)]
        step: f64,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        /// Write the trajectory as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OrbitCommand {
    /// Period, Floquet matrix and index of the equatorial orbit.
    Analyze {
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_ORBIT_STEPS)]
        steps: usize,
    },
}

#[derive(Subcommand)]
enum LedgerCommand {
    Check { file: PathBuf },
}

#[derive(Subcommand)]
enum ReportCommand {
    /// Full verification of the connected-sum neck and the surgered foliation.
    ConnectSum {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// What a subcommand produced: the JSON document, whether its checks passed
/// and a one-line summary.
struct Outcome {
    value: Value,
    pass: bool,
    summary: String,
}

fn flow_error(e: FlowError) -> KitError {
    match e {
        FlowError::BadStep { .. }
        | FlowError::InvalidProfile { .. }
        | FlowError::NotNeckChart(_) => KitError::input("arguments", e),
        FlowError::Contact(
            ContactError::OutOfDomain { .. }
            | ContactError::NearPole(_)
            | ContactError::NonPositiveEpsilon(_),
        ) => KitError::input("arguments", e),
        e => KitError::computation(e),
    }
}

fn cz_path(file: PathBuf) -> Result<Outcome, KitError> {
    let spec: PathFile = read_json(&file)?;
    let path = spec.build()?;
    let end = SymplecticMatrix::new(path.endpoint()).map_err(|e| KitError::input("path", e))?;
    let class = classify_endpoint(&end);
    let cz = conley_zehnder(&path).map_err(KitError::computation)?;
    let m = path.endpoint();
    let value = json!({
        "cz": cz,
        "endpoint": class.kind.as_str(),
        "endpoint_matrix": [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]],
        "samples": path.len(),
    });
    Ok(Outcome {
        value,
        pass: true,
        summary: format!("cz = {cz} ({})", class.kind.as_str()),
    })
}

fn cz_spectral(file: PathBuf) -> Result<Outcome, KitError> {
    let spec: OperatorFile = read_json(&file)?;
    let op = spec.build()?;
    let cz = spectral_cz(&op).map_err(KitError::computation)?;
    let value = json!({ "alpha": cz.alpha, "parity": cz.parity, "mu": cz.mu, "resolution": op.resolution() });
    Ok(Outcome {
        value,
        pass: true,
        summary: format!("alpha = {}, p = {}, mu = {}", cz.alpha, cz.parity, cz.mu),
    })
}

fn spectrum_cmd(file: PathBuf, window: Option<Vec<f64>>) -> Result<Outcome, KitError> {
    let spec: OperatorFile = read_json(&file)?;
    let op = spec.build()?;
    let window = match window.as_deref() {
        Some([lo, hi]) if lo < hi => (*lo, *hi),
        Some(w) => {
            return Err(KitError::input(
                "arguments",
                format!("window {w:?} is not an interval"),
            ))
        }
        None => DEFAULT_WINDOW,
    };
    let slices = spectrum(&op, window).map_err(KitError::computation)?;
    let summary = format!(
        "{} eigenvalue clusters in [{}, {}]",
        slices.len(),
        window.0,
        window.1
    );
    let value =
        json!({ "window": [window.0, window.1], "resolution": op.resolution(), "slices": slices });
    Ok(Outcome {
        value,
        pass: true,
        summary,
    })
}

#[allow(clippy::too_many_arguments)]
fn flow_trace(
    rho: f64,
    theta: f64,
    phi: f64,
    duration: f64,
    step: f64,
    epsilon: f64,
    csv: Option<PathBuf>,
) -> Result<Outcome, KitError> {
    let profile = neck_profile(epsilon).map_err(|e| KitError::input("arguments", e))?;
    let start = ChartPoint::polar(rho, theta, phi).map_err(|e| KitError::input("arguments", e))?;
    let traj = integrate(&profile, &start, duration, step).map_err(flow_error)?;
    if let Some(path) = csv {
        let file = std::fs::File::create(&path)
            .map_err(|e| KitError::input("io", format!("{}: {e}", path.display())))?;
        trace::write_csv(&traj, file).map_err(|e| KitError::input("io", e))?;
    }
    let value = trace::summary(&traj);
    let pass = value["z_monotone"].as_bool() == Some(true);
    let summary = format!(
        "{} points, {} chart changes, Z {}",
        traj.points().len(),
        traj.transitions().len(),
        if pass { "nondecreasing" } else { "DECREASES" }
    );
    Ok(Outcome {
        value,
        pass,
        summary,
    })
}

fn orbit_analyze(epsilon: f64, steps: usize) -> Result<Outcome, KitError> {
    let profile = neck_profile(epsilon).map_err(|e| KitError::input("arguments", e))?;
    let rec = equatorial_orbit_with_steps(&profile, steps).map_err(flow_error)?;
    let m = rec.floquet.matrix();
    let value = json!({
        "epsilon": epsilon,
        "f0": profile.f(0.0),
        "period": rec.period,
        "action": rec.action,
        "residual": rec.residual,
        "floquet": [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]],
        "endpoint": rec.classification.kind.as_str(),
        "cz": rec.cz_index,
    });
    let summary = format!("period = {}, cz = {}", rec.period, rec.cz_index);
    Ok(Outcome {
        value,
        pass: true,
        summary,
    })
}

fn ledger_check(file: PathBuf) -> Result<Outcome, KitError> {
    let text = std::fs::read_to_string(&file)
        .map_err(|e| KitError::input("io", format!("{}: {e}", file.display())))?;
    let loaded = parse_ledger(&text)?;
    let (pass, value) = check_ledger(&loaded);
    let summary = format!("ledger {}", if pass { "passes" } else { "FAILS" });
    Ok(Outcome {
        value,
        pass,
        summary,
    })
}

fn connect_sum(config: Option<PathBuf>) -> Result<Outcome, KitError> {
    let config = match config {
        Some(p) => ScenarioConfig::load(&p)?,
        None => ScenarioConfig::default(),
    };
    let report = run_connect_sum_verification(&config)?;
    let value = serde_json::to_value(&report).expect("report serializes");
    Ok(Outcome {
        value,
        pass: report.pass,
        summary: report.summary(),
    })
}

/// Writes a JSON document to stdout; a closed pipe is not an error.
fn emit(value: &Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(value).expect("json");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn run(cli: Cli) -> Result<Outcome, KitError> {
    match cli.command {
        Command::Cz(CzCommand::Path { file }) => cz_path(file),
        Command::Cz(CzCommand::Spectral { file }) => cz_spectral(file),
        Command::Spectrum { file, window } => spectrum_cmd(file, window),
        Command::Flow(FlowCommand::Trace {
            rho,
            theta,
            phi,
            duration,
            step,
            epsilon,
            csv,
        }) => flow_trace(rho, theta, phi, duration, step, epsilon, csv),
        Command::Orbit(OrbitCommand::Analyze { epsilon, steps }) => orbit_analyze(epsilon, steps),
        Command::Ledger(LedgerCommand::Check { file }) => ledger_check(file),
        Command::Report(ReportCommand::ConnectSum { config }) => connect_sum(config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let err = KitError::input("arguments", e.kind());
            emit(&err.to_json());
            return ExitCode::from(2);
        }
    };
    let started = Instant::now();
    match run(cli) {
        Ok(out) => {
            emit(&out.value);
            eprint!("{}", out.summary);
            if !out.summary.ends_with('\n') {
                eprintln!();
            }
            eprintln!("elapsed {:.2} s", started.elapsed().as_secs_f64());
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            emit(&e.to_json());
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
