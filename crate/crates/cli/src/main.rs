use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use qca_core::designs;
use qca_core::energy::{self, EnergyError, EnergyParams};
use qca_core::fmt::sig;
use qca_core::metrics;
use qca_core::model::{validate, Layout};
use qca_core::oracle::{self, truth_table, GateNetwork, OracleError, TruthTable};
use qca_core::qlf::{parse_layout, serialize_layout};
use qca_core::sim::{extract_truth_table, run_simulation, ExtractError, SimError, SimParams};

const DEFAULT_SAMPLES: usize = 16_000;
/// Runs with more unconverged samples than this fraction fail.
const MAX_UNCONVERGED: f64 = 0.01;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{unconverged} of {samples} samples did not converge")]
    NonConvergence { unconverged: usize, samples: usize },
    #[error("{0}")]
    Undecided(String),
    #[error("{0} mismatching rows")]
    Mismatch(usize),
    #[error("{0}")]
    TooManyInputs(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::NonConvergence { .. } => 3,
            CliError::Undecided(_) => 4,
            CliError::Mismatch(_) => 5,
            CliError::TooManyInputs(_) => 6,
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<ExtractError> for CliError {
    fn from(e: ExtractError) -> Self {
        match e {
            ExtractError::Undecided { .. } => CliError::Undecided(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooManyInputs(_) => CliError::TooManyInputs(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<EnergyError> for CliError {
    fn from(e: EnergyError) -> Self {
        match e {
            EnergyError::TooManyInputs(_) => CliError::TooManyInputs(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qcasim",
    version,
    about = "Simulate, verify and measure QCA layouts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Accepted for scripting; every run is deterministic anyway.
    #[arg(long, global = true)]
    seedless: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Args, Clone)]
struct SimArgs {
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long = "radius-nm", default_value_t = 65.0)]
    radius_nm: f64,
    #[arg(long = "eps-r", default_value_t = 12.9)]
    eps_r: f64,
}

impl SimArgs {
    fn params(&self) -> Result<SimParams, CliError> {
        let p = SimParams {
            num_samples: self.samples,
            convergence_tol: self.tol,
            radius_of_effect: self.radius_nm,
            relative_permittivity: self.eps_r,
            ..SimParams::default()
        };
        p.check().map_err(|e| CliError::Invalid(e.to_string()))?;
        Ok(p)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sweep every input vector and write the polarization trace as CSV.
    Simulate {
        /// Layout file, or the name of a bundled design.
        layout: String,
        #[command(flatten)]
        sim: SimArgs,
        /// Directory for `<name>_trace.csv`; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate and compare the extracted truth table with a reference.
    Verify {
        layout: String,
        #[command(flatten)]
        sim: SimArgs,
        /// Expected truth-table CSV; defaults to the design's oracle.
        #[arg(long)]
        expect: Option<PathBuf>,
        /// Oracle to compare against when no CSV is given.
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Cell count, area, latency and interface counts.
    Metrics {
        layout: String,
        /// Gate network supplying constant-input and garbage-output counts.
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Dissipation averaged over all ordered input-vector pairs.
    Energy {
        layout: String,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long = "temp-k", default_value_t = 2.0)]
        temp_k: f64,
        /// Tunneling level in units of the layout's kink energy: 0.5, 1.0, 1.5 or all.
        #[arg(long = "ek-factor", default_value = "1.0")]
        ek_factor: String,
        /// Same as `--ek-factor all`.
        #[arg(long)]
        all: bool,
        /// Directory for the report CSV, power-map matrix and PGM.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print a reference truth table (maj, xor, feynman, rqg, addsub).
    Oracle {
        name: String,
        #[arg(long)]
        check_reversible: bool,
    },
    /// List the bundled designs, or write them as layout files.
    Designs {
        /// Write every design as `<name>.qlf` into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn designs_dir() -> PathBuf {
    std::env::var_os("QCASIM_DESIGNS")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../designs"))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

/// A path to a layout file, or a bundled design name looked up in the
/// designs directory.
fn load_layout(arg: &str) -> Result<Layout, CliError> {
    let direct = Path::new(arg);
    let path = if direct.exists() {
        direct.to_path_buf()
    } else {
        let named = designs_dir().join(format!("{arg}.qlf"));
        if !named.exists() {
            return Err(CliError::Io(format!(
                "{arg}: no such file or bundled design"
            )));
        }
        named
    };
    let layout = parse_layout(&read(&path)?)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    let violations = validate(&layout);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(CliError::Invalid(format!(
            "{}: {}",
            path.display(),
            list.join("; ")
        )));
    }
    Ok(layout)
}

fn network_for(
    layout: &Layout,
    oracle_name: Option<&str>,
) -> Result<Option<GateNetwork>, CliError> {
    if let Some(name) = oracle_name {
        return Ok(Some(oracle::by_name(name)?));
    }
    Ok(designs::build(&layout.name).ok().map(|d| d.oracle))
}

fn check_convergence(stats: &qca_core::sim::RunStats) -> Result<(), CliError> {
    if stats.unconverged_fraction() > MAX_UNCONVERGED {
        return Err(CliError::NonConvergence {
            unconverged: stats.unconverged,
            samples: stats.samples,
        });
    }
    Ok(())
}

fn latency(layout: &Layout) -> Result<f64, CliError> {
    metrics::latency(layout).map_err(|e| CliError::Invalid(e.to_string()))
}

fn simulate(layout: &str, sim: &SimArgs, out: Option<&Path>) -> Result<String, CliError> {
    let layout = load_layout(layout)?;
    let trace = run_simulation(&layout, &sim.params()?)?;
    let csv = trace.to_csv();
    let text = match out {
        Some(dir) => {
            create_dir(dir)?;
            let path = dir.join(format!("{}_trace.csv", layout.name));
            write(&path, &csv)?;
            format!("wrote {}\n", path.display())
        }
        None => csv,
    };
    if let Err(e) = check_convergence(&trace.stats) {
        emit(&text);
        return Err(e);
    }
    Ok(text)
}

fn verify(
    layout: &str,
    sim: &SimArgs,
    expect: Option<&Path>,
    oracle_name: Option<&str>,
    format: Format,
) -> Result<String, CliError> {
    let layout = load_layout(layout)?;
    let params = sim.params()?;
    let lat = latency(&layout)?;
    let trace = run_simulation(&layout, &params)?;
    check_convergence(&trace.stats)?;
    let actual = extract_truth_table(&trace, lat, &params)?;
    let expected = match expect {
        Some(path) => TruthTable::from_csv(&read(path)?, actual.output_labels().len())?,
        None => match network_for(&layout, oracle_name)? {
            Some(net) => truth_table(&net)?,
            None => {
                return Err(CliError::Invalid(format!(
                    "no reference for `{}`: pass --expect or --oracle",
                    layout.name
                )))
            }
        },
    };
    let actual = actual.reordered(expected.input_labels(), expected.output_labels())?;
    let diffs = expected.diff(&actual)?;
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("row,inputs,expected,actual\n");
            for d in &diffs {
                let bits = |v: &[bool]| {
                    v.iter()
                        .map(|&b| if b { '1' } else { '0' })
                        .collect::<String>()
                };
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    d.row,
                    bits(&d.inputs),
                    bits(&d.expected),
                    bits(&d.actual)
                );
            }
        }
        Format::Text => {
            for d in &diffs {
                let _ = writeln!(out, "{d}");
            }
            let _ = writeln!(
                out,
                "{}: {} rows, {} mismatches",
                layout.name,
                expected.rows().len(),
                diffs.len()
            );
        }
    }
    if diffs.is_empty() {
        Ok(out)
    } else {
        emit(&out);
        Err(CliError::Mismatch(diffs.len()))
    }
}

fn table(format: Format, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for r in rows {
                out.push_str(&r.join(","));
                out.push('\n');
            }
        }
        Format::Text => {
            let widths: Vec<usize> = (0..header.len())
                .map(|i| {
                    rows.iter()
                        .map(|r| r[i].len())
                        .chain([header[i].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            out.push_str(&line(header.to_vec()));
            for r in rows {
                out.push_str(&line(r.iter().map(String::as_str).collect()));
            }
        }
    }
    out
}

fn metrics_cmd(
    layout: &str,
    oracle_name: Option<&str>,
    format: Format,
) -> Result<String, CliError> {
    let layout = load_layout(layout)?;
    let area = metrics::area(&layout).map_err(|e| CliError::Invalid(e.to_string()))?;
    let lat = latency(&layout)?;
    let (constants, garbage) = match network_for(&layout, oracle_name)? {
        Some(net) => {
            let m = oracle::interface_metrics(&net);
            (m.constant_inputs.to_string(), m.garbage_outputs.to_string())
        }
        None => (
            layout
                .cells()
                .iter()
                .filter(|c| c.kind.is_fixed())
                .count()
                .to_string(),
            "-".to_string(),
        ),
    };
    let header = [
        "design",
        "cells",
        "rotated",
        "layers",
        "area_um2",
        "latency_cycles",
        "constant_inputs",
        "garbage_outputs",
    ];
    let row = vec![
        layout.name.clone(),
        metrics::cell_count(&layout).to_string(),
        metrics::rotated_count(&layout).to_string(),
        metrics::layer_count(&layout).to_string(),
        sig(area, 6),
        sig(lat, 6),
        constants,
        garbage,
    ];
    Ok(match format {
        Format::Csv => table(format, &header, &[row]),
        Format::Text => header
            .iter()
            .zip(&row)
            .map(|(h, v)| format!("{h:<16}{v}\n"))
            .collect(),
    })
}

fn parse_factors(arg: &str, all: bool) -> Result<Vec<f64>, CliError> {
    if all || arg == "all" {
        return Ok(vec![0.5, 1.0, 1.5]);
    }
    match arg.parse::<f64>() {
        Ok(f) if f > 0.0 => Ok(vec![f]),
        _ => Err(CliError::Invalid(format!(
            "--ek-factor must be a positive number or `all` (got `{arg}`)"
        ))),
    }
}

fn energy_cmd(
    layout: &str,
    sim: &SimArgs,
    temp_k: f64,
    factors: &[f64],
    out: &Path,
    format: Format,
) -> Result<String, CliError> {
    let layout = load_layout(layout)?;
    let params = sim.params()?;
    create_dir(out)?;
    let mut rows = Vec::new();
    for &f in factors {
        let eparams = EnergyParams {
            temperature: temp_k,
            tunneling_factor: f,
        };
        let report = energy::analyze(&layout, &eparams, &params)?;
        let map = energy::power_map(&report, &layout)?;
        let stem = format!("{}_{f:.1}ek", layout.name);
        write(&out.join(format!("{stem}_energy.csv")), report.to_csv())?;
        write(&out.join(format!("{stem}_power.txt")), map.to_text())?;
        write(&out.join(format!("{stem}_power.pgm")), map.to_pgm())?;
        rows.push(vec![
            format!("{f:.1}"),
            sig(report.avg_leakage, 6),
            sig(report.avg_switching, 6),
            sig(report.total, 6),
        ]);
    }
    Ok(table(
        format,
        &["ek_factor", "leakage_eV", "switching_eV", "total_eV"],
        &rows,
    ))
}

fn oracle_cmd(name: &str, check_reversible: bool) -> Result<String, CliError> {
    let t = truth_table(&oracle::by_name(name)?)?;
    let mut out = t.to_csv();
    if check_reversible {
        let verdict = match oracle::is_reversible(&t) {
            Ok(true) => "yes".to_string(),
            Ok(false) => "no".to_string(),
            Err(e) => format!("n/a ({e})"),
        };
        let _ = writeln!(out, "reversible: {verdict}");
    }
    Ok(out)
}

fn designs_cmd(out: Option<&Path>, format: Format) -> Result<String, CliError> {
    let mut rows = Vec::new();
    let mut written = String::new();
    if let Some(dir) = out {
        create_dir(dir)?;
    }
    for name in designs::NAMES {
        let d = designs::build(name).map_err(|e| CliError::Invalid(e.to_string()))?;
        let l = &d.layout;
        if let Some(dir) = out {
            let path = dir.join(format!("{name}.qlf"));
            write(&path, serialize_layout(l))?;
            let _ = writeln!(written, "wrote {}", path.display());
        }
        rows.push(vec![
            name.to_string(),
            metrics::cell_count(l).to_string(),
            sig(
                metrics::area(l).map_err(|e| CliError::Invalid(e.to_string()))?,
                6,
            ),
            sig(latency(l)?, 6),
            l.inputs().len().to_string(),
            l.outputs().len().to_string(),
        ]);
    }
    Ok(table(
        format,
        &[
            "design",
            "cells",
            "area_um2",
            "latency_cycles",
            "inputs",
            "outputs",
        ],
        &rows,
    ) + &written)
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Simulate { layout, sim, out } => simulate(&layout, &sim, out.as_deref()),
        Command::Verify {
            layout,
            sim,
            expect,
            oracle,
            format,
        } => verify(&layout, &sim, expect.as_deref(), oracle.as_deref(), format),
        Command::Metrics {
            layout,
            oracle,
            format,
        } => metrics_cmd(&layout, oracle.as_deref(), format),
        Command::Energy {
            layout,
            sim,
            temp_k,
            ek_factor,
            all,
            out,
            format,
        } => {
            let factors = parse_factors(&ek_factor, all)?;
            energy_cmd(&layout, &sim, temp_k, &factors, &out, format)
        }
        Command::Oracle {
            name,
            check_reversible,
        } => oracle_cmd(&name, check_reversible),
        Command::Designs { out, format } => designs_cmd(out.as_deref(), format),
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    use std::io::Write as _;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qcasim: {e}");
            ExitCode::from(e.code())
        }
    }
}
