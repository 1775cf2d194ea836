//! `spinbus` command-line frontend.
//!
//! Three subcommands share one option set:
//!
//! * `compile`: one circuit (QASM file or generator), one or all strategies;
//! * `bench`: every family at one size, every strategy, spectral and random
//!   placement;
//! * `sweep`: random-over-spectral improvement ratios across sizes.
//!
//! Options may also come from a JSON file given with `--config`; flags take
//! precedence. Exit codes: 0 success, 1 unparsable circuit, 2 invalid
//! configuration or I/O failure, 3 schedule validation failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use spinbus_core::benchgen::{generate, BenchmarkSpec, Family};
use spinbus_core::harness::{self, BenchConfig, PlacementMode, SweepConfig};
use spinbus_core::metrics::{self, CompilationReport, RatioRow};
use spinbus_core::{
    parse_qasm_named, ArchitectureConfig, ArchitectureSpec, Circuit, ErrorModelConfig, ErrorModelParams, Strategy,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("schedule validation failed:\n{0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl From<spinbus_core::Error> for CliError {
    fn from(e: spinbus_core::Error) -> Self {
        match e {
            spinbus_core::Error::Qasm(q) => CliError::Parse(q.to_string()),
            spinbus_core::Error::Mapping(m) => CliError::Validation(m),
            other => CliError::Config(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "spinbus", version, about = "Compile quantum circuits onto a spin-qubit shuttling bus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile one circuit with one or all strategies.
    Compile(CommonArgs),
    /// Compare all strategies on every benchmark family.
    Bench(CommonArgs),
    /// Measure the benefit of spectral placement across qubit counts.
    Sweep(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlacementKind {
    Spectral,
    Random,
    Identity,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// OpenQASM 2.0 input file.
    #[arg(long, conflicts_with = "gen")]
    pub input: Option<PathBuf>,
    /// Benchmark family to generate instead of reading a file.
    #[arg(long)]
    pub gen: Option<String>,
    /// Qubit count (generator size and architecture sites).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Strategy tag or `all`.
    #[arg(long)]
    pub strategy: Option<String>,
    #[arg(long, value_enum)]
    pub placement: Option<PlacementKind>,
    /// Random placements per cell.
    #[arg(long)]
    pub runs: Option<usize>,
    /// Architecture JSON (µm, ns, m/s).
    #[arg(long)]
    pub arch_config: Option<PathBuf>,
    /// Error-model JSON (nm, µs, µeV, π/nm).
    #[arg(long)]
    pub error_config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output formats.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
    /// Families for bench and sweep, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub families: Option<Vec<String>>,
    /// Sweep sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// JSON run configuration; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub gen: Option<String>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub strategy: Option<String>,
    pub placement: Option<PlacementKind>,
    pub runs: Option<usize>,
    pub arch: Option<ArchitectureConfig>,
    pub error: Option<ErrorModelConfig>,
    pub arch_config: Option<PathBuf>,
    pub error_config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<Vec<Format>>,
    pub families: Option<Vec<String>>,
    pub sizes: Option<Vec<usize>>,
}

/// Flags merged over the config file, with defaults filled in.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub input: Option<PathBuf>,
    pub gen: Option<Family>,
    pub n: Option<usize>,
    pub seed: u64,
    pub strategies: Vec<Strategy>,
    pub placement: PlacementKind,
    pub runs: usize,
    pub arch: Option<ArchitectureSpec>,
    pub params: ErrorModelParams,
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub families: Vec<Family>,
    pub sizes: Vec<usize>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn json_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn parse_strategies(s: &str) -> Result<Vec<Strategy>> {
    if s == "all" {
        return Ok(Strategy::ALL.to_vec());
    }
    s.split(',')
        .map(|t| t.trim().parse::<Strategy>().map_err(|e| CliError::Config(e.to_string())))
        .collect()
}

fn parse_family(s: &str) -> Result<Family> {
    s.parse().map_err(|e: spinbus_core::Error| CliError::Config(e.to_string()))
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<Resolved> {
        let file: RunConfig = match &self.config {
            Some(p) => json_file(p)?,
            None => RunConfig::default(),
        };
        let input = self.input.clone().or(if self.gen.is_some() { None } else { file.input });
        let gen = match self.gen.clone().or(if self.input.is_some() { None } else { file.gen }) {
            Some(g) => Some(parse_family(&g)?),
            None => None,
        };
        let arch = match (self.arch_config.clone().or(file.arch_config), file.arch) {
            (Some(p), _) => Some(json_file::<ArchitectureSpec>(&p)?),
            (None, Some(a)) => Some(ArchitectureSpec::try_from(a)?),
            (None, None) => None,
        };
        let params = match (self.error_config.clone().or(file.error_config), file.error) {
            (Some(p), _) => json_file::<ErrorModelParams>(&p)?,
            (None, Some(e)) => ErrorModelParams::try_from(e)?,
            (None, None) => ErrorModelParams::default(),
        };
        let runs = self.runs.or(file.runs).unwrap_or(10);
        if runs == 0 {
            return Err(CliError::Config("--runs must be at least 1".into()));
        }
        let families = match self.families.clone().or(file.families) {
            Some(list) => list.iter().map(|f| parse_family(f)).collect::<Result<_>>()?,
            None => Family::ALL.to_vec(),
        };
        let formats = self.format.clone().or(file.format).unwrap_or_else(|| vec![Format::Json, Format::Csv]);
        Ok(Resolved {
            input,
            gen,
            n: self.n.or(file.n),
            seed: self.seed.or(file.seed).unwrap_or(0),
            strategies: parse_strategies(self.strategy.as_deref().or(file.strategy.as_deref()).unwrap_or("all"))?,
            placement: self.placement.or(file.placement).unwrap_or(PlacementKind::Spectral),
            runs,
            arch,
            params,
            out: self.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from("spinbus-out")),
            formats,
            families,
            sizes: self.sizes.clone().or(file.sizes).unwrap_or_else(|| vec![10, 15, 20, 25, 30]),
        })
    }
}

impl Resolved {
    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    /// Architecture with `n_sites` sites: the configured one resized, or the
    /// defaults.
    fn arch_with(&self, n_sites: usize) -> Result<ArchitectureSpec> {
        let spec = match self.arch {
            Some(a) => ArchitectureSpec { n_sites, ..a },
            None => ArchitectureSpec::new(n_sites)?,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn make_out_dir(&self) -> Result<()> {
        fs::create_dir_all(&self.out).map_err(|source| CliError::Io { path: self.out.clone(), source })
    }
}

fn load_circuit(r: &Resolved) -> Result<Circuit> {
    match (&r.input, r.gen) {
        (Some(path), None) => {
            let name = path.file_stem().map_or("circuit".into(), |s| s.to_string_lossy().into_owned());
            parse_qasm_named(&read(path)?, &name).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
        }
        (None, Some(family)) => Ok(generate(&BenchmarkSpec::new(family, r.n.unwrap_or(16), r.seed))?),
        (Some(_), Some(_)) => Err(CliError::Config("give either --input or --gen, not both".into())),
        (None, None) => Err(CliError::Config("one of --input or --gen is required".into())),
    }
}

fn violations_error(label: &str, v: &[spinbus_core::Violation]) -> CliError {
    let lines: Vec<String> = v.iter().take(20).map(|x| format!("  {label}: {x}")).collect();
    CliError::Validation(lines.join("\n"))
}

fn fmt_ratio(r: Option<f64>) -> String {
    r.map_or_else(|| "nan".into(), |x| format!("{x:?}"))
}

fn compare_csv(rows: &[RatioRow]) -> String {
    let mut out = String::from("strategy,time_ratio,error_ratio\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.strategy, fmt_ratio(r.time_ratio), fmt_ratio(r.error_ratio)));
    }
    out
}

fn print_report(r: &CompilationReport) {
    println!(
        "{:<17} time {:>12.3} ns  mean dC {:.4e}  std dC {:.4e}  shuttles {}",
        r.strategy.tag(),
        r.total_time * 1e9,
        r.mean_error,
        r.std_error,
        r.n_shuttles
    );
}

/// Compiles one circuit and writes schedules, reports and a ratio table.
pub fn cmd_compile(args: &CommonArgs) -> Result<()> {
    let r = args.resolve()?;
    let circuit = load_circuit(&r)?;
    let n_sites = match (r.arch, r.n) {
        (Some(a), _) => a.n_sites,
        (None, Some(n)) => n.max(circuit.num_qubits),
        (None, None) => circuit.num_qubits,
    };
    let spec = r.arch_with(n_sites.max(2))?;
    let sc = harness::prepare(&circuit, &spec);
    r.make_out_dir()?;
    let name = circuit.name.clone();

    let modes: Vec<PlacementMode> = match r.placement {
        PlacementKind::Spectral => vec![PlacementMode::Spectral],
        PlacementKind::Identity => vec![PlacementMode::Identity],
        PlacementKind::Random => (0..r.runs as u64).map(|k| PlacementMode::Random(r.seed.wrapping_add(k))).collect(),
    };
    let mut per_mode = Vec::with_capacity(modes.len());
    for &mode in &modes {
        let placement = harness::place(&sc, spec.n_sites, mode)?;
        let runs = harness::compile_strategies(&sc, &spec, &r.params, &placement, &r.strategies)?;
        for c in &runs {
            if !c.violations.is_empty() {
                return Err(violations_error(c.report.strategy.tag(), &c.violations));
            }
        }
        per_mode.push((mode, runs));
    }

    let suffix = |mode: PlacementMode| match mode {
        PlacementMode::Random(s) if modes.len() > 1 => format!("_seed{s}"),
        _ => String::new(),
    };
    for (mode, runs) in &per_mode {
        let sfx = suffix(*mode);
        let reports: Vec<CompilationReport> = runs.iter().map(|c| c.report.clone()).collect();
        if r.wants(Format::Json) {
            for c in runs {
                write(&r.out.join(format!("{name}_{}{sfx}.schedule.json", c.report.strategy)), &c.schedule.to_json())?;
            }
            let text = serde_json::to_string_pretty(&reports).expect("reports serialise");
            write(&r.out.join(format!("{name}{sfx}_report.json")), &text)?;
        }
        if r.wants(Format::Csv) {
            write(&r.out.join(format!("{name}{sfx}_report.csv")), &metrics::reports_csv(&reports))?;
        }
        if let Some(table) = metrics::compare(&reports, Strategy::Baseline) {
            if r.wants(Format::Csv) {
                write(&r.out.join(format!("{name}{sfx}_compare.csv")), &compare_csv(&table))?;
            }
            if r.wants(Format::Json) {
                let text = serde_json::to_string_pretty(&table).expect("ratios serialise");
                write(&r.out.join(format!("{name}{sfx}_compare.json")), &text)?;
            }
        }
    }

    if per_mode.len() == 1 {
        per_mode[0].1.iter().for_each(|c| print_report(&c.report));
    } else {
        // Mean and spread across random placements.
        for (k, st) in r.strategies.iter().enumerate() {
            let times: Vec<f64> = per_mode.iter().map(|(_, runs)| runs[k].report.total_time).collect();
            let errs: Vec<f64> = per_mode.iter().map(|(_, runs)| runs[k].report.mean_error).collect();
            let (tm, ts) = metrics::mean_std(&times);
            let (em, es) = metrics::mean_std(&errs);
            println!(
                "{:<17} time {:>12.3} ± {:.3} ns  mean dC {:.4e} ± {:.2e}  ({} runs)",
                st.tag(),
                tm * 1e9,
                ts * 1e9,
                em,
                es,
                per_mode.len()
            );
        }
    }
    Ok(())
}

/// Every family × strategy under spectral and random placement.
pub fn cmd_bench(args: &CommonArgs) -> Result<()> {
    let r = args.resolve()?;
    let n = r.n.unwrap_or(16);
    let spec = r.arch_with(n)?;
    let cfg = BenchConfig { n, seed: r.seed, runs: r.runs, families: r.families.clone(), strategies: r.strategies.clone() };
    let rows = harness::run_bench(&cfg, &spec, &r.params)?;
    let summary = harness::summarize_bench(&rows);
    r.make_out_dir()?;
    if r.wants(Format::Csv) {
        write(&r.out.join("bench.csv"), &harness::bench_csv(&rows))?;
        write(&r.out.join("bench_summary.csv"), &harness::summary_csv(&summary))?;
    }
    if r.wants(Format::Json) {
        write(&r.out.join("bench.json"), &serde_json::to_string_pretty(&rows).expect("rows serialise"))?;
        write(&r.out.join("bench_summary.json"), &serde_json::to_string_pretty(&summary).expect("rows serialise"))?;
    }
    for s in &summary {
        println!(
            "{:<12} {:<17} {:<9} time {:>12.3} ns  mean dC {:.4e}",
            s.family.tag(),
            s.strategy.tag(),
            s.placement,
            s.total_time_mean * 1e9,
            s.mean_error_mean
        );
    }
    let bad: Vec<String> = rows
        .iter()
        .filter(|row| row.violations > 0)
        .map(|row| format!("  {} {} {} seed {}: {} violations", row.family, row.strategy, row.placement, row.seed, row.violations))
        .collect();
    if !bad.is_empty() {
        return Err(CliError::Validation(bad.join("\n")));
    }
    Ok(())
}

/// Random-over-spectral ratios for each size, family and strategy.
pub fn cmd_sweep(args: &CommonArgs) -> Result<()> {
    let r = args.resolve()?;
    if r.sizes.is_empty() {
        return Err(CliError::Config("no sweep sizes given".into()));
    }
    let base = r.arch_with(r.sizes.iter().copied().max().unwrap_or(2).max(2))?;
    let cfg = SweepConfig {
        sizes: r.sizes.clone(),
        seed: r.seed,
        runs: r.runs,
        families: r.families.clone(),
        strategies: r.strategies.clone(),
    };
    let rows = harness::run_sweep(&cfg, &base, &r.params)?;
    r.make_out_dir()?;
    if r.wants(Format::Csv) {
        write(&r.out.join("sweep.csv"), &harness::sweep_csv(&rows))?;
    }
    if r.wants(Format::Json) {
        write(&r.out.join("sweep.json"), &serde_json::to_string_pretty(&rows).expect("rows serialise"))?;
    }
    for row in &rows {
        println!(
            "{:<12} n={:<3} depth={:<4} {:<17} time x{}  error x{}",
            row.family.tag(),
            row.n,
            row.depth,
            row.strategy.tag(),
            fmt_ratio(row.time_ratio),
            fmt_ratio(row.error_ratio)
        );
    }
    let bad = rows.iter().filter(|row| row.violations > 0).count();
    if bad > 0 {
        return Err(CliError::Validation(format!("{bad} sweep cells produced invalid schedules")));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Compile(a) => cmd_compile(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

/// Parses arguments, runs, reports errors on stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("spinbus: {e}");
            e.exit_code()
        }
    }
}
