//! Command-line front end for the `cayley-ising` pipeline.
//!
//! Five subcommands cover the pipeline end to end: `sweep` for full records
//! over `phi` grids, `thresholds` for criterion roots, `classify` for regime
//! labels, `fixed-points` for the scalar boundary-law census, and `entropy`
//! for the two chain entropy rates. Output is CSV or JSON, to standard
//! output or a file.
//!
//! Exit codes: 0 on success, 1 on I/O failure, 2 on usage errors, 3 when
//! the library rejects the requested parameters.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cayley_ising::criteria::{criterion_thresholds_with_tol, regime_thresholds, Criterion};
use cayley_ising::entropy::entropy_record;
use cayley_ising::model::ModelParams;
use cayley_ising::recursion::{
    find_scalar_fixed_points, lift_scalar_fixed_point, DEFAULT_Z_MAX, DEFAULT_Z_MIN,
};
use cayley_ising::sweep::{phi_grid, sweep_record, GridScale, SWEEP_CSV_HEADER};
use cayley_ising::tolerances::{FIXED_POINT_SCAN_POINTS, THRESHOLD_BISECT_TOL};

const THRESHOLDS_CSV_HEADER: &str = "s,criterion,phi_low,phi_high";
const CLASSIFY_CSV_HEADER: &str =
    "s,k,phi,regime,stab_low,stab_high,dob_low,dob_high,ks_low,ks_high";
const ENTROPY_CSV_HEADER: &str = "s,k,phi,h_psi,h_phi";

/// Analytic pipeline for the mixed spin-(s, 1/2) Ising model on an order-k
/// Cayley tree.
#[derive(Parser)]
#[command(name = "cayley-ising", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline records over a grid of thermal parameters.
    Sweep(SweepArgs),
    /// Criterion roots in phi, one row per spin and criterion.
    Thresholds(ThresholdsArgs),
    /// Regime label of one point, with the thresholds that define it.
    Classify(ClassifyArgs),
    /// Census of scalar boundary-law fixed points at one point.
    FixedPoints(FixedPointsArgs),
    /// Entropy rates of both two-step chains.
    Entropy(EntropyArgs),
}

/// Spin magnitudes given as `3`, `1,2,5`, or `1-5`.
#[derive(Debug, Clone)]
struct SpinList(Vec<u32>);

impl std::str::FromStr for SpinList {
    type Err = String;

    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let mut values = Vec::new();
        for item in raw.split(',') {
            let item = item.trim();
            if let Some((lo, hi)) = item.split_once('-') {
                let lo: u32 = lo
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad spin range '{item}'"))?;
                let hi: u32 = hi
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad spin range '{item}'"))?;
                if lo > hi {
                    return Err(format!("descending spin range '{item}'"));
                }
                values.extend(lo..=hi);
            } else {
                values.push(
                    item.parse()
                        .map_err(|_| format!("bad spin value '{item}'"))?,
                );
            }
        }
        if values.is_empty() {
            return Err(format!("empty spin list '{raw}'"));
        }
        values.sort_unstable();
        values.dedup();
        Ok(SpinList(values))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scale {
    Log,
    Linear,
}

impl From<Scale> for GridScale {
    fn from(scale: Scale) -> Self {
        match scale {
            Scale::Log => GridScale::Log,
            Scale::Linear => GridScale::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Stability,
    Dobrushin,
    Ks,
    All,
}

impl CriterionArg {
    fn selected(self) -> Vec<Criterion> {
        match self {
            CriterionArg::Stability => vec![Criterion::Stability],
            CriterionArg::Dobrushin => vec![Criterion::Dobrushin],
            CriterionArg::Ks => vec![Criterion::KestenStigum],
            CriterionArg::All => vec![
                Criterion::Stability,
                Criterion::Dobrushin,
                Criterion::KestenStigum,
            ],
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Destination file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PhiSelection {
    /// Single thermal parameter; mutually exclusive with the grid flags.
    #[arg(long, conflicts_with_all = ["phi_min", "phi_max", "points", "scale"])]
    phi: Option<f64>,
    /// Lower grid endpoint.
    #[arg(long, requires = "phi_max")]
    phi_min: Option<f64>,
    /// Upper grid endpoint.
    #[arg(long, requires = "phi_min")]
    phi_max: Option<f64>,
    /// Number of grid points.
    #[arg(long, default_value_t = 64)]
    points: usize,
    /// Grid spacing.
    #[arg(long, value_enum, default_value_t = Scale::Log)]
    scale: Scale,
}

impl PhiSelection {
    fn resolve(&self) -> Result<Vec<f64>, AppError> {
        match (self.phi, self.phi_min, self.phi_max) {
            (Some(phi), None, None) => Ok(vec![phi]),
            (None, Some(min), Some(max)) => {
                Ok(phi_grid(min, max, self.points, self.scale.into())?)
            }
            _ => Err(AppError::Usage(
                "provide either --phi or both --phi-min and --phi-max".into(),
            )),
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Spin magnitudes, e.g. `3`, `1,2,5`, or `1-5`.
    #[arg(long)]
    s: SpinList,
    /// Branching number of the tree.
    #[arg(long, default_value_t = 3)]
    k: u32,
    #[command(flatten)]
    phi: PhiSelection,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ThresholdsArgs {
    /// Spin magnitudes, e.g. `3`, `1,2,5`, or `1-5`.
    #[arg(long)]
    s: SpinList,
    /// Branching number of the tree.
    #[arg(long, default_value_t = 3)]
    k: u32,
    /// Which criterion roots to compute.
    #[arg(long, value_enum, default_value_t = CriterionArg::All)]
    criterion: CriterionArg,
    /// Absolute width to which each root bracket is bisected.
    #[arg(long, default_value_t = THRESHOLD_BISECT_TOL)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Spin magnitude.
    #[arg(long)]
    s: u32,
    /// Branching number of the tree.
    #[arg(long, default_value_t = 3)]
    k: u32,
    /// Thermal parameter.
    #[arg(long)]
    phi: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FixedPointsArgs {
    /// Spin magnitude.
    #[arg(long)]
    s: u32,
    /// Branching number of the tree.
    #[arg(long, default_value_t = 3)]
    k: u32,
    /// Thermal parameter.
    #[arg(long)]
    phi: f64,
    /// Lower endpoint of the scanned z window.
    #[arg(long, default_value_t = DEFAULT_Z_MIN)]
    z_min: f64,
    /// Upper endpoint of the scanned z window.
    #[arg(long, default_value_t = DEFAULT_Z_MAX)]
    z_max: f64,
    /// Number of scan points in the z window.
    #[arg(long, default_value_t = FIXED_POINT_SCAN_POINTS)]
    grid_points: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EntropyArgs {
    /// Spin magnitudes, e.g. `3`, `1,2,5`, or `1-5`.
    #[arg(long)]
    s: SpinList,
    /// Branching number of the tree.
    #[arg(long, default_value_t = 3)]
    k: u32,
    #[command(flatten)]
    phi: PhiSelection,
    #[command(flatten)]
    output: OutputArgs,
}

enum AppError {
    Usage(String),
    Domain(cayley_ising::Error),
    Io(std::io::Error),
}

impl From<cayley_ising::Error> for AppError {
    fn from(err: cayley_ising::Error) -> Self {
        AppError::Domain(err)
    }
}

impl From<std::io::Error> for AppError {
    fn from(err: std::io::Error) -> Self {
        AppError::Io(err)
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(()) => return,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(AppError::Domain(err)) => {
            eprintln!("error: {err}");
            3
        }
        Err(AppError::Io(err)) => {
            eprintln!("error: {err}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: &Cli) -> Result<(), AppError> {
    match &cli.command {
        Command::Sweep(args) => run_sweep(args),
        Command::Thresholds(args) => run_thresholds(args),
        Command::Classify(args) => run_classify(args),
        Command::FixedPoints(args) => run_fixed_points(args),
        Command::Entropy(args) => run_entropy(args),
    }
}

fn emit(
    output: &OutputArgs,
    header: &str,
    csv_rows: &[String],
    json_rows: Vec<Value>,
) -> Result<(), AppError> {
    let text = match output.format {
        Format::Csv => {
            let mut text = String::new();
            text.push_str(header);
            text.push('\n');
            for row in csv_rows {
                text.push_str(row);
                text.push('\n');
            }
            text
        }
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&Value::Array(json_rows))
                .expect("plain data serialises");
            text.push('\n');
            text
        }
    };
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run_sweep(args: &SweepArgs) -> Result<(), AppError> {
    let grid = args.phi.resolve()?;
    let mut csv_rows = Vec::new();
    let mut json_rows = Vec::new();
    for &s in &args.s.0 {
        let thresholds = regime_thresholds(s, args.k)?;
        for &phi in &grid {
            let params = ModelParams::new(s, args.k, phi)?;
            let record = sweep_record(&params, &thresholds)?;
            csv_rows.push(record.to_csv_row());
            json_rows.push(serde_json::to_value(&record).expect("record serialises"));
        }
    }
    emit(&args.output, SWEEP_CSV_HEADER, &csv_rows, json_rows)
}

fn run_thresholds(args: &ThresholdsArgs) -> Result<(), AppError> {
    let mut csv_rows = Vec::new();
    let mut json_rows = Vec::new();
    for &s in &args.s.0 {
        for criterion in args.criterion.selected() {
            let (phi_low, phi_high) = criterion_thresholds_with_tol(s, args.k, criterion, args.tol)?;
            csv_rows.push(format!("{s},{criterion},{phi_low},{phi_high}"));
            json_rows.push(json!({
                "s": s,
                "criterion": criterion.to_string(),
                "phi_low": phi_low,
                "phi_high": phi_high,
            }));
        }
    }
    emit(&args.output, THRESHOLDS_CSV_HEADER, &csv_rows, json_rows)
}

fn run_classify(args: &ClassifyArgs) -> Result<(), AppError> {
    let params = ModelParams::new(args.s, args.k, args.phi)?;
    let thresholds = regime_thresholds(args.s, args.k)?;
    let regime = thresholds.classify(params.phi());
    let csv_rows = vec![format!(
        "{},{},{},{},{},{},{},{},{},{}",
        args.s,
        args.k,
        params.phi(),
        regime,
        thresholds.stability.0,
        thresholds.stability.1,
        thresholds.dobrushin.0,
        thresholds.dobrushin.1,
        thresholds.kesten_stigum.0,
        thresholds.kesten_stigum.1,
    )];
    let json_rows = vec![json!({
        "s": args.s,
        "k": args.k,
        "phi": params.phi(),
        "regime": regime.to_string(),
        "stab_low": thresholds.stability.0,
        "stab_high": thresholds.stability.1,
        "dob_low": thresholds.dobrushin.0,
        "dob_high": thresholds.dobrushin.1,
        "ks_low": thresholds.kesten_stigum.0,
        "ks_high": thresholds.kesten_stigum.1,
    })];
    emit(&args.output, CLASSIFY_CSV_HEADER, &csv_rows, json_rows)
}

fn run_fixed_points(args: &FixedPointsArgs) -> Result<(), AppError> {
    let params = ModelParams::new(args.s, args.k, args.phi)?;
    let roots = find_scalar_fixed_points(&params, args.z_min, args.z_max, args.grid_points)?;
    let spins: Vec<i32> = (-(args.s as i32)..=args.s as i32)
        .filter(|&i| i != 0)
        .collect();
    let mut header = String::from("z_star,derivative_abs,stability");
    for &i in &spins {
        header.push_str(&format!(",x_{i}"));
    }
    let mut csv_rows = Vec::new();
    let mut json_rows = Vec::new();
    for root in &roots {
        let state = lift_scalar_fixed_point(&params, root.z_star)?;
        let mut row = format!("{},{},{}", root.z_star, root.derivative_abs, root.stability);
        let mut object = serde_json::Map::new();
        object.insert("z_star".into(), json!(root.z_star));
        object.insert("derivative_abs".into(), json!(root.derivative_abs));
        object.insert("stability".into(), json!(root.stability.to_string()));
        for &i in &spins {
            row.push_str(&format!(",{}", state.x(i)));
            object.insert(format!("x_{i}"), json!(state.x(i)));
        }
        csv_rows.push(row);
        json_rows.push(Value::Object(object));
    }
    emit(&args.output, &header, &csv_rows, json_rows)
}

fn run_entropy(args: &EntropyArgs) -> Result<(), AppError> {
    let grid = args.phi.resolve()?;
    let mut csv_rows = Vec::new();
    let mut json_rows = Vec::new();
    for &s in &args.s.0 {
        for &phi in &grid {
            let record = entropy_record(&ModelParams::new(s, args.k, phi)?)?;
            csv_rows.push(format!(
                "{},{},{},{},{}",
                record.s, record.k, record.phi, record.h_psi, record.h_phi
            ));
            json_rows.push(json!({
                "s": record.s,
                "k": record.k,
                "phi": record.phi,
                "h_psi": record.h_psi,
                "h_phi": record.h_phi,
            }));
        }
    }
    emit(&args.output, ENTROPY_CSV_HEADER, &csv_rows, json_rows)
}
