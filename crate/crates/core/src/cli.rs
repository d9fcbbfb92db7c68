//! `phasecart` command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 singular path, 3 invalid
//! arguments or configuration, 4 internal consistency failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::apparatus::{ApparatusConfig, Mode, ParameterPoint};
use crate::cartographer::{charge_sum_with, find_singularities, Rect};
use crate::error::Error;
use crate::output::{self, fmt_g, num};
use crate::phase::{trace_path, ParameterPath, DEFAULT_STEPS_PER_SEGMENT};
use crate::scenarios;
use crate::spin::Spin;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_SINGULAR: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_CONSISTENCY: i32 = 4;

pub const THREADS_ENV: &str = "PHASECART_THREADS";

#[derive(Debug, Parser)]
#[command(name = "phasecart", version, about = "Pancharatnam phase maps of a dual-flipper neutron interferometer")]
struct Cli {
    /// JSON file overriding apparatus defaults.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Trace the unwrapped phase along a polyline.
    Trace(TraceArgs),
    /// Locate zeros of c in a rectangle and report their charges.
    Scan(ScanArgs),
    /// The three I→F paths via A, B and C.
    Figure1(OutDir),
    /// Field reversal I → vias → F.
    Reversal(ReversalArgs),
    /// Phase against the rotation δβ of one dual flipper.
    Dbeta(DbetaArgs),
    /// δβ scan of the stretched spin-n/2 state.
    SpinScan(SpinScanArgs),
    /// Half-wave-plate pair analogue.
    Optics(OutDir),
}

#[derive(Debug, Args)]
struct OutDir {
    /// Output directory (created if missing).
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct TraceArgs {
    /// Path JSON: {"vertices": [[b1y, b2y], ...], "closed": bool, "steps_per_segment": n}.
    #[arg(long, value_name = "FILE")]
    path: PathBuf,
    /// Overrides the file's steps_per_segment.
    #[arg(long)]
    steps: Option<usize>,
    /// CSV output.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Optional full JSON trace.
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, num_args = 4, required = true, value_names = ["B1_MIN", "B1_MAX", "B2_MIN", "B2_MAX"], allow_negative_numbers = true)]
    rect: Vec<f64>,
    #[arg(long, default_value_t = crate::cartographer::DEFAULT_GRID)]
    grid: usize,
    /// JSON list of singularities.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Also cross-check the boundary winding against the interior charges.
    #[arg(long)]
    check: bool,
}

#[derive(Debug, Args)]
struct ReversalArgs {
    /// Intermediate vertex; repeat for a multi-vertex path. Defaults to A = q(179, 179).
    #[arg(long, num_args = 2, value_names = ["B1Y", "B2Y"], action = clap::ArgAction::Append, allow_negative_numbers = true)]
    via: Vec<f64>,
    /// Use I→A→F→B→I→A→F, which winds once more around q(180, 180).
    #[arg(long, conflicts_with = "via")]
    r#loop: bool,
    #[arg(long, default_value_t = DEFAULT_STEPS_PER_SEGMENT)]
    steps: usize,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ScanRange {
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    range: Option<Vec<f64>>,
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Debug, Args)]
struct DbetaArgs {
    /// Flip model; defaults to the configured mode.
    #[arg(long)]
    mode: Option<Mode>,
    /// Spin j of the stretched input state; defaults to the configured input state.
    #[arg(long)]
    j: Option<f64>,
    #[command(flatten)]
    scan: ScanRange,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SpinScanArgs {
    /// Twice the spin.
    #[arg(long)]
    n: u32,
    /// Use the cos(δβ/2) flip model instead of exact flips.
    #[arg(long)]
    realistic: bool,
    #[command(flatten)]
    scan: ScanRange,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathFile {
    vertices: Vec<[f64; 2]>,
    #[serde(default)]
    closed: bool,
    steps_per_segment: Option<usize>,
}

#[derive(Debug)]
enum Failure {
    Model(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Io(..) => EXIT_IO,
            Failure::Usage(_) => EXIT_INVALID,
            Failure::Model(e) => match e {
                Error::Singular { .. } | Error::SingularEvolution { .. } | Error::SingularScan { .. } => EXIT_SINGULAR,
                Error::Consistency(_) => EXIT_CONSISTENCY,
                _ => EXIT_INVALID,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Model(e) => e.to_string(),
            Failure::Io(p, e) => format!("{}: {e}", p.display()),
            Failure::Usage(m) => m.clone(),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let pool = match thread_pool() {
        Ok(pool) => pool,
        Err(f) => return report(f),
    };
    match pool.install(|| execute(cli)) {
        Ok(line) => {
            println!("{line}");
            EXIT_OK
        }
        Err(f) => report(f),
    }
}

fn report(f: Failure) -> i32 {
    eprintln!("phasecart: {}", f.message());
    f.exit_code()
}

fn thread_pool() -> std::result::Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Failure::Usage(format!("cannot start thread pool: {e}")))
}

fn load_config(path: Option<&Path>) -> std::result::Result<ApparatusConfig<f64>, Failure> {
    match path {
        None => Ok(ApparatusConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            Ok(ApparatusConfig::from_json(&text)?)
        }
    }
}

fn write(path: &Path, contents: &str) -> std::result::Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn ensure_dir(dir: &Path) -> std::result::Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Io(dir.to_path_buf(), e))
}

fn execute(cli: Cli) -> Outcome {
    let config = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Trace(a) => trace(a, &config),
        Command::Scan(a) => scan(a, &config),
        Command::Figure1(a) => figure1(a, &config),
        Command::Reversal(a) => reversal(a, &config),
        Command::Dbeta(a) => dbeta(a, &config),
        Command::SpinScan(a) => spin_scan(a, &config),
        Command::Optics(a) => optics(a, &config),
    }
}

fn trace(a: TraceArgs, config: &ApparatusConfig<f64>) -> Outcome {
    let text = fs::read_to_string(&a.path).map_err(|e| Failure::Usage(format!("{}: {e}", a.path.display())))?;
    let file: PathFile =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", a.path.display())))?;
    let steps = a.steps.or(file.steps_per_segment).unwrap_or(DEFAULT_STEPS_PER_SEGMENT);
    let vertices = file.vertices.iter().map(|v| ParameterPoint::new(v[0], v[1])).collect();
    let path = ParameterPath::new(vertices, steps, file.closed)?;
    let t = trace_path(&path, config)?;
    write(&a.out, &output::trace_csv(&t))?;
    if let Some(j) = &a.json {
        write(j, &output::to_text(&output::trace_json(&t, config)))?;
    }
    Ok(format!(
        "trace: total_phase_deg={} min_contrast={} samples={}",
        fmt_g(t.total_phase_deg),
        fmt_g(t.min_contrast),
        t.samples.len()
    ))
}

fn scan(a: ScanArgs, config: &ApparatusConfig<f64>) -> Outcome {
    let rect = Rect::new(a.rect[0], a.rect[1], a.rect[2], a.rect[3])?;
    let found = find_singularities(&rect, a.grid, config)?;
    let net: i64 = found.iter().map(|s| s.charge).sum();
    if a.check {
        charge_sum_with(&rect, a.grid, config)?;
    }
    write(&a.out, &output::to_text(&output::singularities_json(&found)))?;
    let unresolved = found.iter().filter(|s| s.unresolved).count();
    Ok(format!("scan: singularities={} net_charge={net} unresolved={unresolved}", found.len()))
}

fn figure1(a: OutDir, config: &ApparatusConfig<f64>) -> Outcome {
    let fig = scenarios::run_figure1(config)?;
    ensure_dir(&a.out)?;
    let mut traces = Map::new();
    for (name, t) in fig.traces() {
        write(&a.out.join(format!("{name}.csv")), &output::trace_csv(t))?;
        traces.insert(name.into(), output::trace_summary(t));
    }
    let mut fields = Map::new();
    fields.insert("traces".into(), Value::Object(traces));
    fields.insert("iaf_minus_ibf_deg".into(), num(fig.split_deg()));
    fields.insert("icf_fraction_within_20".into(), num(fig.icf_concentration(20.0)));
    fields.insert("icf_max_slope_deg_per_unit".into(), num(fig.icf.max_slope_deg_per_unit()));
    write(&a.out.join("summary.json"), &output::to_text(&output::summary("figure1", config, fields)))?;
    Ok(format!(
        "figure1: IAF={} IBF={} ICF={} split={}",
        fmt_g(fig.iaf.total_phase_deg),
        fmt_g(fig.ibf.total_phase_deg),
        fmt_g(fig.icf.total_phase_deg),
        fmt_g(fig.split_deg())
    ))
}

fn reversal(a: ReversalArgs, config: &ApparatusConfig<f64>) -> Outcome {
    let vias: Vec<ParameterPoint<f64>> = if a.r#loop {
        scenarios::looping_vias()
    } else if a.via.is_empty() {
        vec![scenarios::point_a()]
    } else {
        a.via.chunks(2).map(|c| ParameterPoint::new(c[0], c[1])).collect()
    };
    let t = trace_path(&scenarios::reversal_path(&vias, a.steps)?, config)?;
    ensure_dir(&a.out)?;
    write(&a.out.join("reversal.csv"), &output::trace_csv(&t))?;
    let mut fields = Map::new();
    fields.insert("trace".into(), output::trace_summary(&t));
    fields.insert("half_turns".into(), num(t.total_phase_deg / 180.0));
    write(&a.out.join("summary.json"), &output::to_text(&output::summary("reversal", config, fields)))?;
    Ok(format!("reversal: total_phase_deg={} min_contrast={}", fmt_g(t.total_phase_deg), fmt_g(t.min_contrast)))
}

fn range_of(r: &ScanRange, default_range: (f64, f64), default_steps: usize) -> ((f64, f64), usize) {
    let range = r.range.as_ref().map_or(default_range, |v| (v[0], v[1]));
    (range, r.steps.unwrap_or(default_steps))
}

fn write_scan(
    kind: &str,
    out: &Path,
    rows: &[scenarios::DbetaRow<f64>],
    spin: Spin,
    mode: Mode,
    config: &ApparatusConfig<f64>,
) -> Outcome {
    ensure_dir(out)?;
    write(&out.join(format!("{kind}.csv")), &output::dbeta_csv(rows))?;
    let first = rows.first().expect("scan has rows");
    let last = rows.last().expect("scan has rows");
    let slope = if last.delta_beta_deg != first.delta_beta_deg {
        (last.total_deg - first.total_deg) / (last.delta_beta_deg - first.delta_beta_deg)
    } else {
        f64::NAN
    };
    let max_dyn = rows.iter().fold(0.0_f64, |m, r| m.max(r.dynamical_deg.abs()));
    let max_dev = rows.iter().fold(0.0_f64, |m, r| m.max(r.deviation_deg(spin).abs()));
    let mut fields = Map::new();
    fields.insert("mode".into(), json!(mode.as_str()));
    fields.insert("twice_j".into(), json!(spin.twice()));
    fields.insert("rows".into(), json!(rows.len()));
    fields.insert("first".into(), json!({"delta_beta_deg": num(first.delta_beta_deg), "total_deg": num(first.total_deg)}));
    fields.insert("last".into(), json!({"delta_beta_deg": num(last.delta_beta_deg), "total_deg": num(last.total_deg)}));
    fields.insert("end_to_end_slope".into(), num(slope));
    fields.insert("max_abs_dynamical_deg".into(), num(max_dyn));
    fields.insert("max_abs_deviation_from_line_deg".into(), num(max_dev));
    write(&out.join("summary.json"), &output::to_text(&output::summary(kind, config, fields)))?;
    Ok(format!(
        "{kind}: rows={} slope={} max_dynamical={} max_deviation={}",
        rows.len(),
        fmt_g(slope),
        fmt_g(max_dyn),
        fmt_g(max_dev)
    ))
}

fn dbeta(a: DbetaArgs, config: &ApparatusConfig<f64>) -> Outcome {
    let mode = a.mode.unwrap_or(config.mode);
    let input = match a.j {
        Some(j) => crate::spin::SpinState::stretched(Spin::from_f64(j)?),
        None => config.input_state.clone(),
    };
    let (range, steps) = range_of(&a.scan, (-40.0, 40.0), 80);
    let rows = scenarios::dbeta_scan_with_input(mode, &input, range, steps)?;
    write_scan("dbeta", &a.out, &rows, input.spin(), mode, config)
}

fn spin_scan(a: SpinScanArgs, config: &ApparatusConfig<f64>) -> Outcome {
    let spin = Spin::from_twice(a.n)?;
    let mode = if a.realistic { Mode::RealisticGuide } else { Mode::IdealTransverse };
    let (range, steps) = range_of(&a.scan, (-180.0, 180.0), 360);
    let rows = scenarios::run_dbeta_scan(mode, spin, range, steps)?;
    write_scan("spin_scan", &a.out, &rows, spin, mode, config)
}

fn optics(a: OutDir, config: &ApparatusConfig<f64>) -> Outcome {
    let r = scenarios::run_optics_hwp::<f64>()?;
    ensure_dir(&a.out)?;
    write(&a.out.join("optics.csv"), &output::optics_csv(&r))?;
    let mut fields = Map::new();
    fields.insert("anticommutation_phase_deg".into(), num(r.anticommutation_phase_deg));
    fields.insert("sign_residual".into(), num(r.sign_residual));
    fields.insert("identity_phase_deg".into(), num(r.identity_phase_deg));
    fields.insert(
        "plate_convention".into(),
        json!("HWP(phi) = half turn about the equatorial Poincare axis at azimuth 2*phi"),
    );
    write(&a.out.join("summary.json"), &output::to_text(&output::summary("optics", config, fields)))?;
    Ok(format!(
        "optics: anticommutation_phase_deg={} sign_residual={}",
        fmt_g(r.anticommutation_phase_deg),
        fmt_g(r.sign_residual)
    ))
}
