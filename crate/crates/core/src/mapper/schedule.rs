use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::layout::LayoutState;
use crate::architecture::{ArchitectureSpec, Location, NS};
use crate::error::{Error, Result};
use crate::error_model::ErrorModelParams;
use crate::placement::Placement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Baseline,
    Parallel,
    MinReturn,
    TunableVelocity,
    SwapReturn,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Baseline,
        Strategy::Parallel,
        Strategy::MinReturn,
        Strategy::TunableVelocity,
        Strategy::SwapReturn,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Strategy::Baseline => "baseline",
            Strategy::Parallel => "parallel",
            Strategy::MinReturn => "min_return",
            Strategy::TunableVelocity => "tunable_velocity",
            Strategy::SwapReturn => "swap_return",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.tag() == s)
            .ok_or_else(|| Error::Format(format!("unknown strategy `{s}`")))
    }
}

/// Transport of one qubit between two locations, `Ω(from, to)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShuttleOp {
    pub qubit: usize,
    pub from: Location,
    pub to: Location,
    /// Departure time, s.
    pub start: f64,
    /// m/s.
    pub velocity: f64,
    /// Distance over velocity, s.
    pub duration: f64,
    /// Phase error incurred by this shuttle.
    pub delta_c: f64,
}

impl ShuttleOp {
    pub fn end(&self) -> f64 {
        self.start + self.duration
    }
}

/// Execution of one circuit gate in a manipulation zone.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    /// Index into the scheduled circuit's gate list.
    pub gate: usize,
    pub qubits: Vec<usize>,
    pub zone: usize,
    pub start: f64,
    pub duration: f64,
}

impl GateOp {
    pub fn end(&self) -> f64 {
        self.start + self.duration
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    Shuttle(ShuttleOp),
    Gate(GateOp),
}

impl Op {
    pub fn start(&self) -> f64 {
        match self {
            Op::Shuttle(s) => s.start,
            Op::Gate(g) => g.start,
        }
    }

    pub fn end(&self) -> f64 {
        match self {
            Op::Shuttle(s) => s.end(),
            Op::Gate(g) => g.end(),
        }
    }
}

/// A timed sequence of shuttles and gates with its accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub strategy: Strategy,
    pub spec: ArchitectureSpec,
    pub placement: Placement,
    pub params: ErrorModelParams,
    /// Ordered by start time.
    pub ops: Vec<Op>,
    /// s.
    pub total_time: f64,
    /// Accumulated `δC` per architecture qubit.
    pub per_qubit_error: Vec<f64>,
    pub final_layout: LayoutState,
}

impl Schedule {
    pub fn shuttles(&self) -> impl Iterator<Item = &ShuttleOp> {
        self.ops.iter().filter_map(|op| match op {
            Op::Shuttle(s) => Some(s),
            Op::Gate(_) => None,
        })
    }

    pub fn gates(&self) -> impl Iterator<Item = &GateOp> {
        self.ops.iter().filter_map(|op| match op {
            Op::Gate(g) => Some(g),
            Op::Shuttle(_) => None,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ScheduleFile::from(self)).expect("schedule serialises")
    }

    /// Rebuilds a schedule from its JSON form. Durations are recomputed from
    /// the geometry; times carry the 1 ps rounding of the file.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScheduleFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        file.try_into()
    }
}

fn round_ps(seconds: f64) -> f64 {
    (seconds * NS * 1e3).round() / 1e3
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum OpRecord {
    Shuttle {
        q: usize,
        from: Location,
        to: Location,
        t0_ns: f64,
        v_mps: f64,
        #[serde(rename = "dC")]
        dc: f64,
    },
    Gate {
        gate: usize,
        qubits: Vec<usize>,
        zone: usize,
        t0_ns: f64,
        dur_ns: f64,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct ScheduleFile {
    strategy: Strategy,
    spec: ArchitectureSpec,
    placement: Placement,
    error_params: ErrorModelParams,
    total_time_ns: f64,
    #[serde(rename = "per_qubit_dC")]
    per_qubit_dc: Vec<f64>,
    final_layout: LayoutState,
    ops: Vec<OpRecord>,
}

impl From<&Schedule> for ScheduleFile {
    fn from(s: &Schedule) -> Self {
        let ops = s
            .ops
            .iter()
            .map(|op| match op {
                Op::Shuttle(sh) => OpRecord::Shuttle {
                    q: sh.qubit,
                    from: sh.from,
                    to: sh.to,
                    t0_ns: round_ps(sh.start),
                    v_mps: sh.velocity,
                    dc: sh.delta_c,
                },
                Op::Gate(g) => OpRecord::Gate {
                    gate: g.gate,
                    qubits: g.qubits.clone(),
                    zone: g.zone,
                    t0_ns: round_ps(g.start),
                    dur_ns: round_ps(g.duration),
                },
            })
            .collect();
        ScheduleFile {
            strategy: s.strategy,
            spec: s.spec,
            placement: s.placement.clone(),
            error_params: s.params,
            total_time_ns: round_ps(s.total_time),
            per_qubit_dc: s.per_qubit_error.clone(),
            final_layout: s.final_layout.clone(),
            ops,
        }
    }
}

impl TryFrom<ScheduleFile> for Schedule {
    type Error = Error;

    fn try_from(f: ScheduleFile) -> Result<Self> {
        let spec = f.spec;
        let mut ops = Vec::with_capacity(f.ops.len());
        for rec in f.ops {
            ops.push(match rec {
                OpRecord::Shuttle { q, from, to, t0_ns, v_mps, dc } => {
                    if !spec.contains(from) || !spec.contains(to) {
                        return Err(Error::Format(format!("shuttle of q{q} leaves the architecture")));
                    }
                    if !(v_mps.is_finite() && v_mps > 0.0) {
                        return Err(Error::InvalidVelocity(v_mps));
                    }
                    Op::Shuttle(ShuttleOp {
                        qubit: q,
                        from,
                        to,
                        start: t0_ns / NS,
                        velocity: v_mps,
                        duration: spec.distance(from, to) / v_mps,
                        delta_c: dc,
                    })
                }
                OpRecord::Gate { gate, qubits, zone, t0_ns, dur_ns } => {
                    Op::Gate(GateOp { gate, qubits, zone, start: t0_ns / NS, duration: dur_ns / NS })
                }
            });
        }
        Ok(Schedule {
            strategy: f.strategy,
            spec,
            placement: f.placement,
            params: f.error_params,
            ops,
            total_time: f.total_time_ns / NS,
            per_qubit_error: f.per_qubit_dc,
            final_layout: f.final_layout,
        })
    }
}
