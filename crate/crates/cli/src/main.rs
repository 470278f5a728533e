//! `parity-mzi`: parity, phase-uncertainty, SNR and joint-distribution
//! sweeps as CSV or JSON, plus the oracle verification suite.
//!
//! Exit codes: 0 success, 1 numeric-domain or I/O error, 2 usage error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parity_mzi::checks::{run_all, VerifyConfig};
use parity_mzi::states::{
    pcs_coeffs_auto, tmsvs_coeffs_auto, twin_fock_coeffs, PairCoherentParam, SqueezeParam,
};
use parity_mzi::sweeps::{
    coeffs_for_total_mean, default_total_means, export_joint, scan_parity, scan_parity_ecs,
    scan_parity_noon, scan_snr, scan_uncertainty, uniform_grid, InputFamily, ScanFamily,
    ScanRecord, Stage, SWEEP_TAIL_TOLERANCE,
};
use parity_mzi::{DiagonalCoeffs, StateFamily};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "parity-mzi",
    version,
    about = "Parity-detection Mach-Zehnder sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parity expectation against phase.
    Parity(ParityArgs),
    /// Phase uncertainty against total mean photon number.
    Uncertainty(MeanScanArgs),
    /// Signal-to-noise ratio against total mean photon number.
    Snr(MeanScanArgs),
    /// Joint photon-number distribution before or after the first splitter.
    Joint(JointArgs),
    /// Cross-check analytic results against Fock-space propagation.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    TwinFock,
    Tmsvs,
    Pcs,
    Noon,
    Ecs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MeanFamily {
    TwinFock,
    Tmsvs,
    Pcs,
}

impl From<MeanFamily> for InputFamily {
    fn from(f: MeanFamily) -> Self {
        match f {
            MeanFamily::TwinFock => InputFamily::TwinFock,
            MeanFamily::Tmsvs => InputFamily::Tmsvs,
            MeanFamily::Pcs => InputFamily::Pcs,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum StageArg {
    Before,
    After,
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

/// Parameters selecting one input state.
#[derive(Args, Debug)]
struct StateArgs {
    /// Total mean photon number of both modes (twin-fock, tmsvs, pcs).
    #[arg(long)]
    total_mean: Option<f64>,
    /// Photons per mode for twin-fock, or total photons for noon.
    #[arg(long)]
    n: Option<usize>,
    /// TMSVS squeezing parameter, |xi| < 1.
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<f64>,
    /// PCS parameter.
    #[arg(long, allow_hyphen_values = true)]
    zeta: Option<f64>,
    /// N00N relative phase.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phase: f64,
    /// Mean photon number of the entangled coherent state.
    #[arg(long)]
    n_bar: Option<f64>,
    /// Truncation tail tolerance for tmsvs and pcs.
    #[arg(long, default_value_t = SWEEP_TAIL_TOLERANCE)]
    tail_tolerance: f64,
}

#[derive(Args, Debug)]
struct ParityArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi_min: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_hyphen_values = true)]
    phi_max: f64,
    #[arg(long, default_value_t = 2001)]
    points: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct MeanScanArgs {
    #[arg(long, value_enum)]
    family: MeanFamily,
    /// Operating phase.
    #[arg(long, default_value_t = 1e-4, allow_hyphen_values = true)]
    phi: f64,
    /// Comma-separated total mean photon numbers [default: 2,4,...,60].
    #[arg(long, value_delimiter = ',')]
    means: Option<Vec<f64>>,
    #[arg(long, default_value_t = SWEEP_TAIL_TOLERANCE)]
    tail_tolerance: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct JointArgs {
    #[arg(long, value_enum)]
    family: MeanFamily,
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum, default_value = "after")]
    stage: StageArg,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<parity_mzi::Error> for Failure {
    fn from(e: parity_mzi::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(format!("i/o error: {e}"))
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Parity(a) => cmd_parity(a),
        Command::Uncertainty(a) => cmd_mean_scan(a, false),
        Command::Snr(a) => cmd_mean_scan(a, true),
        Command::Joint(a) => cmd_joint(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f).unwrap_or_default()
}

fn emit(output: &Output, body: &str) -> CliResult<()> {
    match &output.out {
        Some(path) => std::fs::write(path, body)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Meta {
    family: &'static str,
    params: Value,
    cutoff: usize,
    tail_bound: f64,
    version: &'static str,
}

fn json_doc<R: Serialize>(meta: Meta, rows: &[R]) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(&json!({ "meta": meta, "rows": rows }))
        .map_err(|e| Failure::Numeric(format!("serialisation failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn meta(family: &'static str, params: Value, records: &[ScanRecord]) -> Meta {
    Meta {
        family,
        params,
        cutoff: records
            .iter()
            .map(|r| r.truncation_cutoff)
            .max()
            .unwrap_or(0),
        tail_bound: records.iter().map(|r| r.tail_bound).fold(0.0, f64::max),
        version: env!("CARGO_PKG_VERSION"),
    }
}

fn require<T>(value: Option<T>, flag: &str, family: &str) -> CliResult<T> {
    value.ok_or_else(|| usage(format!("--{flag} is required for --family {family}")))
}

fn finite(value: f64, flag: &str) -> CliResult<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(usage(format!("--{flag} must be finite, got {value}")))
    }
}

/// Builds coefficients from whichever of `--total-mean`, `--n`, `--xi`,
/// `--zeta` applies to the family.
fn diagonal_coeffs(family: MeanFamily, s: &StateArgs) -> CliResult<DiagonalCoeffs> {
    let tol = s.tail_tolerance;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(usage(format!(
            "--tail-tolerance must lie in (0, 1), got {tol}"
        )));
    }
    let given = [
        s.total_mean.is_some(),
        s.n.is_some(),
        s.xi.is_some(),
        s.zeta.is_some(),
    ];
    if given.iter().filter(|&&g| g).count() > 1 {
        return Err(usage("give only one of --total-mean, --n, --xi, --zeta"));
    }
    match (family, s.total_mean) {
        (_, Some(m)) => {
            let m = finite(m, "total-mean")?;
            if m < 0.0 {
                return Err(usage(format!("--total-mean must be >= 0, got {m}")));
            }
            if family == MeanFamily::TwinFock && (0.5 * m).fract() != 0.0 {
                return Err(usage(format!(
                    "--total-mean must be an even integer for twin-fock, got {m}"
                )));
            }
            Ok(coeffs_for_total_mean(family.into(), m, tol)?)
        }
        (MeanFamily::TwinFock, None) => {
            let n = require(s.n, "n", "twin-fock")?;
            Ok(twin_fock_coeffs(n, n)?)
        }
        (MeanFamily::Tmsvs, None) => {
            let xi = finite(require(s.xi, "xi", "tmsvs (or --total-mean)")?, "xi")?;
            let xi = SqueezeParam::real(xi)
                .map_err(|_| usage(format!("--xi must satisfy |xi| < 1, got {xi}")))?;
            Ok(tmsvs_coeffs_auto(xi, tol)?)
        }
        (MeanFamily::Pcs, None) => {
            let zeta = finite(require(s.zeta, "zeta", "pcs (or --total-mean)")?, "zeta")?;
            Ok(pcs_coeffs_auto(PairCoherentParam::real(zeta)?, tol)?)
        }
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::TwinFock => "twin-fock",
        Family::Tmsvs => "tmsvs",
        Family::Pcs => "pcs",
        Family::Noon => "noon",
        Family::Ecs => "ecs",
    }
}

fn mean_family_name(f: MeanFamily) -> &'static str {
    family_name(match f {
        MeanFamily::TwinFock => Family::TwinFock,
        MeanFamily::Tmsvs => Family::Tmsvs,
        MeanFamily::Pcs => Family::Pcs,
    })
}

fn state_params(coeffs: &DiagonalCoeffs) -> Value {
    match coeffs.family() {
        StateFamily::TwinFock { n } => json!({ "n": n }),
        StateFamily::Tmsvs { xi } => json!({ "xi": xi.re, "xi_im": xi.im }),
        StateFamily::Pcs { zeta } => json!({ "zeta": zeta.re, "zeta_im": zeta.im }),
        StateFamily::Custom => json!({}),
    }
}

fn cmd_parity(a: ParityArgs) -> CliResult<ExitCode> {
    let lo = finite(a.phi_min, "phi-min")?;
    let hi = finite(a.phi_max, "phi-max")?;
    if hi < lo {
        return Err(usage(format!("--phi-max ({hi}) is below --phi-min ({lo})")));
    }
    if a.points == 0 {
        return Err(usage("--points must be at least 1"));
    }
    let grid = uniform_grid(lo, hi, a.points);
    let (records, params) = match a.family {
        Family::Noon => {
            let n = require(a.state.n, "n", "noon")?;
            if n == 0 {
                return Err(usage("--n must be at least 1 for --family noon"));
            }
            let phase = finite(a.state.phase, "phase")?;
            (
                scan_parity_noon(n, phase, &grid)?,
                json!({ "n": n, "phase": phase }),
            )
        }
        Family::Ecs => {
            let n_bar = finite(require(a.state.n_bar, "n-bar", "ecs")?, "n-bar")?;
            if n_bar < 0.0 {
                return Err(usage(format!("--n-bar must be >= 0, got {n_bar}")));
            }
            (scan_parity_ecs(n_bar, &grid)?, json!({ "n_bar": n_bar }))
        }
        Family::TwinFock | Family::Tmsvs | Family::Pcs => {
            let family = match a.family {
                Family::TwinFock => MeanFamily::TwinFock,
                Family::Tmsvs => MeanFamily::Tmsvs,
                _ => MeanFamily::Pcs,
            };
            let coeffs = diagonal_coeffs(family, &a.state)?;
            let mut params = state_params(&coeffs);
            params["total_mean"] = json!(coeffs.mean_total());
            (scan_parity(&coeffs, &grid)?, params)
        }
    };
    let body = match a.output.format {
        Format::Csv => {
            let mut s = String::from("phi,parity,cutoff,tail_bound\n");
            for r in &records {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    fmt_f(r.x),
                    fmt_opt(r.parity),
                    r.truncation_cutoff,
                    fmt_f(r.tail_bound)
                );
            }
            s
        }
        Format::Json => json_doc(meta(family_name(a.family), params, &records), &records)?,
    };
    emit(&a.output, &body)?;
    Ok(ExitCode::SUCCESS)
}

/// Family parameter of a scan row: `N` for twin-Fock, `xi` or `zeta`
/// otherwise.
fn row_param(r: &ScanRecord) -> String {
    match r.family {
        ScanFamily::Diagonal(StateFamily::TwinFock { n }) => n.to_string(),
        ScanFamily::Diagonal(StateFamily::Tmsvs { xi }) => fmt_f(xi.re),
        ScanFamily::Diagonal(StateFamily::Pcs { zeta }) => fmt_f(zeta.re),
        _ => String::new(),
    }
}

fn cmd_mean_scan(a: MeanScanArgs, snr_scan: bool) -> CliResult<ExitCode> {
    let phi = finite(a.phi, "phi")?;
    let tol = a.tail_tolerance;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(usage(format!(
            "--tail-tolerance must lie in (0, 1), got {tol}"
        )));
    }
    let means = a.means.clone().unwrap_or_else(default_total_means);
    if means.is_empty() {
        return Err(usage("--means must list at least one value"));
    }
    for &m in &means {
        if m <= 0.0 || !m.is_finite() {
            return Err(usage(format!("--means entries must be positive, got {m}")));
        }
        if a.family == MeanFamily::TwinFock && (0.5 * m).fract() != 0.0 {
            return Err(usage(format!(
                "--means entries must be even integers for twin-fock, got {m}"
            )));
        }
    }
    if phi == 0.0 {
        return Err(Failure::Numeric(if snr_scan {
            "SNR diverges at --phi 0: the parity variance vanishes".into()
        } else {
            "phase uncertainty is undefined at --phi 0: parity and its slope both vanish".into()
        }));
    }
    let family = InputFamily::from(a.family);
    let records = if snr_scan {
        scan_snr(family, &means, phi, tol)?
    } else {
        scan_uncertainty(family, &means, phi, tol)?
    };
    let body = match a.output.format {
        Format::Csv => {
            let mut s = String::from(if snr_scan {
                "total_mean,snr,log10_snr,sql,hl,flag,parity,param,cutoff,tail_bound\n"
            } else {
                "total_mean,delta_phi,sql,hl,flag,parity,param,cutoff,tail_bound\n"
            });
            for r in &records {
                let lead = if snr_scan {
                    format!("{},{}", fmt_opt(r.snr), fmt_opt(r.log10_snr))
                } else {
                    fmt_opt(r.delta_phi)
                };
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    fmt_f(r.x),
                    lead,
                    fmt_opt(r.sql),
                    fmt_opt(r.hl),
                    r.flag.map(|f| f.as_str()).unwrap_or(""),
                    fmt_opt(r.parity),
                    row_param(r),
                    r.truncation_cutoff,
                    fmt_f(r.tail_bound)
                );
            }
            s
        }
        Format::Json => {
            let params = json!({ "phi": phi, "tail_tolerance": tol, "means": means });
            json_doc(meta(mean_family_name(a.family), params, &records), &records)?
        }
    };
    emit(&a.output, &body)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct JointRow {
    n1: usize,
    n2: usize,
    p: f64,
}

fn cmd_joint(a: JointArgs) -> CliResult<ExitCode> {
    let coeffs = diagonal_coeffs(a.family, &a.state)?;
    let stage = match a.stage {
        StageArg::Before => Stage::Before,
        StageArg::After => Stage::After,
    };
    let dist = export_joint(&coeffs, stage);
    let body = match a.output.format {
        Format::Csv => dist.to_csv(),
        Format::Json => {
            let d = dist.cutoff() + 1;
            let rows: Vec<JointRow> = (0..d)
                .flat_map(|n1| (0..d).map(move |n2| (n1, n2)))
                .map(|(n1, n2)| JointRow {
                    n1,
                    n2,
                    p: dist.get(n1, n2),
                })
                .collect();
            let mut params = state_params(&coeffs);
            params["total_mean"] = json!(coeffs.mean_total());
            params["stage"] = json!(stage);
            let meta = Meta {
                family: mean_family_name(a.family),
                params,
                cutoff: dist.cutoff(),
                tail_bound: dist.tail_mass_bound(),
                version: env!("CARGO_PKG_VERSION"),
            };
            json_doc(meta, &rows)?
        }
    };
    emit(&a.output, &body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> CliResult<ExitCode> {
    if a.tolerance <= 0.0 || !a.tolerance.is_finite() {
        return Err(usage(format!(
            "--tolerance must be positive, got {}",
            a.tolerance
        )));
    }
    let config = VerifyConfig {
        max_n: a.max_n,
        tolerance: a.tolerance,
    };
    let results = run_all(&config)?;
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for r in &results {
        let _ = writeln!(
            s,
            "{:<4}  {:<width$}  error {:.3e}  tolerance {:.3e}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.error,
            r.tolerance,
        );
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(
        s,
        "{} of {} checks passed",
        results.len() - failed,
        results.len()
    );
    print!("{s}");
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
