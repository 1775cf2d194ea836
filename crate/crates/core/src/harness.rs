//! End-to-end pipeline and the benchmark and sweep experiments.
//!
//! Independent cells run on the rayon pool; results are collected in input
//! order and then sorted by key, so output never depends on scheduling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::architecture::{ArchitectureSpec, NS};
use crate::benchgen::{generate, BenchmarkSpec, Family};
use crate::circuit::{decompose, slice_with, Circuit, SliceOptions, SlicedCircuit};
use crate::error::{Error, Result};
use crate::error_model::ErrorModelParams;
use crate::mapper::{map, validate_schedule, Schedule, Strategy, Violation};
use crate::metrics::{mean_std, ratio, summarize, CompilationReport, Ratio};
use crate::placement::{build_interaction_graph, random_placement, spectral_placement, Placement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlacementMode {
    Identity,
    Spectral,
    Random(u64),
}

impl PlacementMode {
    pub fn tag(self) -> &'static str {
        match self {
            PlacementMode::Identity => "identity",
            PlacementMode::Spectral => "spectral",
            PlacementMode::Random(_) => "random",
        }
    }
}

impl fmt::Display for PlacementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Parses `identity`, `spectral`, `random` (seed 0) or `random:<seed>`.
impl FromStr for PlacementMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(PlacementMode::Identity),
            "spectral" => Ok(PlacementMode::Spectral),
            "random" => Ok(PlacementMode::Random(0)),
            _ => s
                .strip_prefix("random:")
                .and_then(|seed| seed.parse().ok())
                .map(PlacementMode::Random)
                .ok_or_else(|| Error::InvalidPlacement(format!("unknown placement mode `{s}`"))),
        }
    }
}

/// Lowers to the native basis and slices. Measurements survive only when the
/// architecture gives them a duration.
pub fn prepare(c: &Circuit, spec: &ArchitectureSpec) -> SlicedCircuit {
    slice_with(&decompose(c), SliceOptions { keep_measure: spec.t_measure.is_some() })
}

/// Placement over all `n_sites` virtual qubits. Under spectral placement the
/// circuit's qubits fill the leftmost sites and idle ones follow in order.
pub fn place(sc: &SlicedCircuit, n_sites: usize, mode: PlacementMode) -> Result<Placement> {
    if sc.num_qubits() > n_sites {
        return Err(Error::Mapping(format!(
            "circuit needs {} qubits but the architecture has {n_sites} sites",
            sc.num_qubits()
        )));
    }
    match mode {
        PlacementMode::Identity => Ok(Placement::identity(n_sites)),
        PlacementMode::Random(seed) => Ok(random_placement(n_sites, seed)),
        PlacementMode::Spectral => {
            let p = spectral_placement(&build_interaction_graph(sc))?;
            let mut perm = p.as_slice().to_vec();
            perm.extend(sc.num_qubits()..n_sites);
            Placement::new(perm)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub schedule: Schedule,
    pub report: CompilationReport,
    pub violations: Vec<Violation>,
}

pub fn compile_sliced(
    sc: &SlicedCircuit,
    spec: &ArchitectureSpec,
    params: &ErrorModelParams,
    placement: &Placement,
    strategy: Strategy,
) -> Result<Compiled> {
    let schedule = map(strategy, sc, spec, placement, params)?;
    let report = summarize(&schedule);
    let violations = validate_schedule(&schedule);
    Ok(Compiled { schedule, report, violations })
}

pub fn compile(
    c: &Circuit,
    spec: &ArchitectureSpec,
    params: &ErrorModelParams,
    mode: PlacementMode,
    strategy: Strategy,
) -> Result<Compiled> {
    let sc = prepare(c, spec);
    let placement = place(&sc, spec.n_sites, mode)?;
    compile_sliced(&sc, spec, params, &placement, strategy)
}

/// Every strategy on one prepared circuit and placement, in the given order.
pub fn compile_strategies(
    sc: &SlicedCircuit,
    spec: &ArchitectureSpec,
    params: &ErrorModelParams,
    placement: &Placement,
    strategies: &[Strategy],
) -> Result<Vec<Compiled>> {
    strategies.par_iter().map(|&s| compile_sliced(sc, spec, params, placement, s)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub n: usize,
    /// Seed of the circuit generators; random placements use `seed + r`.
    pub seed: u64,
    pub runs: usize,
    pub families: Vec<Family>,
    pub strategies: Vec<Strategy>,
}

impl BenchConfig {
    pub fn new(n: usize, seed: u64, runs: usize) -> Self {
        BenchConfig { n, seed, runs, families: Family::ALL.to_vec(), strategies: Strategy::ALL.to_vec() }
    }
}

/// One compiled cell of the benchmark experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: Family,
    pub strategy: Strategy,
    pub placement: PlacementMode,
    /// Placement seed for random rows, generator seed otherwise.
    pub seed: u64,
    pub total_time: f64,
    pub mean_error: f64,
    pub std_error: f64,
    pub violations: usize,
}

impl BenchRow {
    fn sort_key(&self) -> (Family, Strategy, u8, u64) {
        let p = match self.placement {
            PlacementMode::Identity => 0,
            PlacementMode::Spectral => 1,
            PlacementMode::Random(_) => 2,
        };
        (self.family, self.strategy, p, self.seed)
    }
}

fn check_runs(runs: usize) -> Result<()> {
    if runs == 0 {
        return Err(Error::InvalidPlacement("random placement needs at least one run".into()));
    }
    Ok(())
}

/// Every family × strategy under spectral placement and `runs` random
/// placements. Rows are sorted by family, strategy, placement, seed.
pub fn run_bench(cfg: &BenchConfig, spec: &ArchitectureSpec, params: &ErrorModelParams) -> Result<Vec<BenchRow>> {
    check_runs(cfg.runs)?;
    let mut placements = vec![(PlacementMode::Spectral, cfg.seed)];
    placements.extend((0..cfg.runs as u64).map(|r| {
        let seed = cfg.seed.wrapping_add(r);
        (PlacementMode::Random(seed), seed)
    }));

    let circuits: Vec<(Family, SlicedCircuit)> = cfg
        .families
        .par_iter()
        .map(|&f| Ok((f, prepare(&generate(&BenchmarkSpec::new(f, cfg.n, cfg.seed))?, spec))))
        .collect::<Result<_>>()?;

    let cells: Vec<(usize, PlacementMode, u64)> = (0..circuits.len())
        .flat_map(|ci| placements.iter().map(move |&(m, s)| (ci, m, s)))
        .collect();
    let nested: Vec<Vec<BenchRow>> = cells
        .par_iter()
        .map(|&(ci, mode, seed)| {
            let (family, sc) = &circuits[ci];
            let placement = place(sc, spec.n_sites, mode)?;
            let compiled = compile_strategies(sc, spec, params, &placement, &cfg.strategies)?;
            Ok(compiled
                .into_iter()
                .map(|c| BenchRow {
                    family: *family,
                    strategy: c.report.strategy,
                    placement: mode,
                    seed,
                    total_time: c.report.total_time,
                    mean_error: c.report.mean_error,
                    std_error: c.report.std_error,
                    violations: c.violations.len(),
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<BenchRow> = nested.into_iter().flatten().collect();
    rows.sort_by_key(BenchRow::sort_key);
    Ok(rows)
}

pub const BENCH_CSV_HEADER: &str = "family,strategy,placement,seed,total_time_ns,mean_dC,std_dC";

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(BENCH_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{:?},{:?},{:?}\n",
            r.family,
            r.strategy,
            r.placement,
            r.seed,
            r.total_time * NS,
            r.mean_error,
            r.std_error
        ));
    }
    out
}

/// Mean and spread across seeds of one (family, strategy, placement) group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSummary {
    pub family: Family,
    pub strategy: Strategy,
    pub placement: &'static str,
    pub runs: usize,
    pub total_time_mean: f64,
    pub total_time_std: f64,
    pub mean_error_mean: f64,
    pub mean_error_std: f64,
}

pub fn summarize_bench(rows: &[BenchRow]) -> Vec<BenchSummary> {
    let mut out: Vec<BenchSummary> = Vec::new();
    let mut group: Vec<&BenchRow> = Vec::new();
    let flush = |group: &mut Vec<&BenchRow>, out: &mut Vec<BenchSummary>| {
        if let Some(first) = group.first() {
            let times: Vec<f64> = group.iter().map(|r| r.total_time).collect();
            let errs: Vec<f64> = group.iter().map(|r| r.mean_error).collect();
            let (tm, ts) = mean_std(&times);
            let (em, es) = mean_std(&errs);
            out.push(BenchSummary {
                family: first.family,
                strategy: first.strategy,
                placement: first.placement.tag(),
                runs: group.len(),
                total_time_mean: tm,
                total_time_std: ts,
                mean_error_mean: em,
                mean_error_std: es,
            });
        }
        group.clear();
    };
    for r in rows {
        if let Some(g) = group.first() {
            if (g.family, g.strategy, g.placement.tag()) != (r.family, r.strategy, r.placement.tag()) {
                flush(&mut group, &mut out);
            }
        }
        group.push(r);
    }
    flush(&mut group, &mut out);
    out
}

pub const SUMMARY_CSV_HEADER: &str =
    "family,strategy,placement,runs,total_time_ns_mean,total_time_ns_std,mean_dC_mean,mean_dC_std";

pub fn summary_csv(rows: &[BenchSummary]) -> String {
    let mut out = String::from(SUMMARY_CSV_HEADER);
    out.push('\n');
    for s in rows {
        out.push_str(&format!(
            "{},{},{},{},{:?},{:?},{:?},{:?}\n",
            s.family,
            s.strategy,
            s.placement,
            s.runs,
            s.total_time_mean * NS,
            s.total_time_std * NS,
            s.mean_error_mean,
            s.mean_error_std
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
    pub seed: u64,
    pub runs: usize,
    pub families: Vec<Family>,
    pub strategies: Vec<Strategy>,
}

/// Random-over-spectral improvement for one (family, n, strategy).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: Family,
    pub n: usize,
    /// Layer count of the native circuit.
    pub depth: usize,
    pub strategy: Strategy,
    /// Mean random-placement time over spectral-placement time.
    pub time_ratio: Ratio,
    /// Mean random-placement mean error over spectral-placement mean error.
    pub error_ratio: Ratio,
    pub violations: usize,
}

pub fn run_sweep(cfg: &SweepConfig, base: &ArchitectureSpec, params: &ErrorModelParams) -> Result<Vec<SweepRow>> {
    check_runs(cfg.runs)?;
    let cells: Vec<(Family, usize)> =
        cfg.families.iter().flat_map(|&f| cfg.sizes.iter().map(move |&n| (f, n))).collect();
    let nested: Vec<Vec<SweepRow>> = cells
        .par_iter()
        .map(|&(family, n)| {
            let spec = ArchitectureSpec { n_sites: n, ..*base };
            spec.validate()?;
            let sc = prepare(&generate(&BenchmarkSpec::new(family, n, cfg.seed))?, &spec);
            let spectral = place(&sc, n, PlacementMode::Spectral)?;
            let spec_runs = compile_strategies(&sc, &spec, params, &spectral, &cfg.strategies)?;
            let mut time_sum = vec![0.0; cfg.strategies.len()];
            let mut err_sum = vec![0.0; cfg.strategies.len()];
            let mut violations: Vec<usize> = spec_runs.iter().map(|c| c.violations.len()).collect();
            for r in 0..cfg.runs as u64 {
                let p = place(&sc, n, PlacementMode::Random(cfg.seed.wrapping_add(r)))?;
                for (k, c) in compile_strategies(&sc, &spec, params, &p, &cfg.strategies)?.iter().enumerate() {
                    time_sum[k] += c.report.total_time;
                    err_sum[k] += c.report.mean_error;
                    violations[k] += c.violations.len();
                }
            }
            let runs = cfg.runs as f64;
            Ok(spec_runs
                .iter()
                .enumerate()
                .map(|(k, c)| SweepRow {
                    family,
                    n,
                    depth: sc.depth(),
                    strategy: c.report.strategy,
                    time_ratio: ratio(time_sum[k] / runs, c.report.total_time),
                    error_ratio: ratio(err_sum[k] / runs, c.report.mean_error),
                    violations: violations[k],
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<SweepRow> = nested.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.family, r.n, r.strategy));
    Ok(rows)
}

pub const SWEEP_CSV_HEADER: &str = "family,n,depth,strategy,time_ratio,error_ratio";

fn fmt_ratio(r: Ratio) -> String {
    r.map_or_else(|| "nan".to_string(), |x| format!("{x:?}"))
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.family,
            r.n,
            r.depth,
            r.strategy,
            fmt_ratio(r.time_ratio),
            fmt_ratio(r.error_ratio)
        ));
    }
    out
}
