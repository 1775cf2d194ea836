//! Schedule summaries and cross-strategy ratios.

use serde::Serialize;

use crate::architecture::{NS, UM};
use crate::mapper::{Op, Schedule, Strategy};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompilationReport {
    pub strategy: Strategy,
    /// s.
    pub total_time: f64,
    /// `δC` per architecture qubit.
    pub qubit_errors: Vec<f64>,
    pub mean_error: f64,
    /// Population standard deviation over all architecture qubits.
    pub std_error: f64,
    pub n_shuttles: usize,
    /// m.
    pub total_distance: f64,
    pub n_gates_1q: usize,
    pub n_gates_2q: usize,
}

/// Population mean and standard deviation. Zero for an empty slice.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn summarize(s: &Schedule) -> CompilationReport {
    let (mean_error, std_error) = mean_std(&s.per_qubit_error);
    let mut r = CompilationReport {
        strategy: s.strategy,
        total_time: s.total_time,
        qubit_errors: s.per_qubit_error.clone(),
        mean_error,
        std_error,
        n_shuttles: 0,
        total_distance: 0.0,
        n_gates_1q: 0,
        n_gates_2q: 0,
    };
    for op in &s.ops {
        match op {
            Op::Shuttle(sh) => {
                r.n_shuttles += 1;
                r.total_distance += s.spec.distance(sh.from, sh.to);
            }
            Op::Gate(g) if g.qubits.len() == 2 => r.n_gates_2q += 1,
            Op::Gate(_) => r.n_gates_1q += 1,
        }
    }
    r
}

/// A quotient that may be undefined because its denominator is zero.
pub type Ratio = Option<f64>;

pub fn ratio(num: f64, den: f64) -> Ratio {
    (den != 0.0 && num.is_finite() && den.is_finite()).then(|| num / den)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub strategy: Strategy,
    /// Baseline time over this strategy's time.
    pub time_ratio: Ratio,
    /// Baseline mean error over this strategy's mean error.
    pub error_ratio: Ratio,
}

/// Ratios of every report against the report tagged `baseline`. Returns
/// `None` when no report carries that tag.
pub fn compare(reports: &[CompilationReport], baseline: Strategy) -> Option<Vec<RatioRow>> {
    let base = reports.iter().find(|r| r.strategy == baseline)?;
    Some(
        reports
            .iter()
            .map(|r| RatioRow {
                strategy: r.strategy,
                time_ratio: ratio(base.total_time, r.total_time),
                error_ratio: ratio(base.mean_error, r.mean_error),
            })
            .collect(),
    )
}

pub const REPORT_CSV_HEADER: &str = "strategy,total_time_ns,mean_dC,std_dC,n_shuttles,total_distance_um";

impl CompilationReport {
    /// One CSV row matching [`REPORT_CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.strategy,
            fmt_f64(self.total_time * NS),
            fmt_f64(self.mean_error),
            fmt_f64(self.std_error),
            self.n_shuttles,
            fmt_f64(self.total_distance * UM),
        )
    }
}

/// Shortest representation that parses back to the same value.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn reports_csv(reports: &[CompilationReport]) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}
