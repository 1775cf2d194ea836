//! Independent replay of a schedule against the movement rules.

use std::fmt;

use serde::Serialize;

use super::schedule::{Op, Schedule, ShuttleOp};
use crate::architecture::Location;
use crate::error_model::phase_error;

/// Slack on time comparisons, s. Covers the 1 ps rounding of serialised
/// schedules.
const EPS_TIME: f64 = 2e-12;
/// Slack on position comparisons, m.
const EPS_POS: f64 = 1e-13;
const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// (a) gate operands sit in the gate's zone for the whole gate.
    GateOperands,
    /// (b) at most two qubits per zone.
    ZoneCapacity,
    /// (c) at most one qubit per storage site.
    SiteCapacity,
    /// (d) simultaneous moves never cross.
    Crossing,
    /// (e) every qubit ends parked.
    FinalStorage,
    /// (f) stored per-qubit error equals the sum over shuttles.
    ErrorAccounting,
    /// (g) total time equals the latest op end.
    TotalTime,
    /// Ops are time-ordered and each shuttle starts where its qubit is.
    Continuity,
    /// Shuttle durations, errors and gate durations agree with the model.
    Kinematics,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::GateOperands => "gate-operands",
            Rule::ZoneCapacity => "zone-capacity",
            Rule::SiteCapacity => "site-capacity",
            Rule::Crossing => "crossing",
            Rule::FinalStorage => "final-storage",
            Rule::ErrorAccounting => "error-accounting",
            Rule::TotalTime => "total-time",
            Rule::Continuity => "continuity",
            Rule::Kinematics => "kinematics",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Index into `Schedule::ops`, when one op is to blame.
    pub op: Option<usize>,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.op {
            Some(i) => write!(f, "op {i}: {}: {}", self.rule, self.message),
            None => write!(f, "{}: {}", self.rule, self.message),
        }
    }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-300
}

/// Checks every movement and accounting rule. An empty result means the
/// schedule is valid.
pub fn validate_schedule(s: &Schedule) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |op: Option<usize>, rule: Rule, message: String| out.push(Violation { op, rule, message });
    let spec = &s.spec;
    let n = spec.n_sites;

    if let Err(e) = spec.validate() {
        push(None, Rule::Kinematics, e.to_string());
        return out;
    }
    if s.placement.len() != n {
        push(None, Rule::Continuity, format!("placement covers {} qubits, architecture has {n} sites", s.placement.len()));
        return out;
    }

    // Replay per qubit.
    let mut loc: Vec<Location> = s.placement.as_slice().iter().map(|&p| Location::Site(p)).collect();
    let mut busy_until = vec![f64::NEG_INFINITY; n];
    let mut error_sum = vec![0.0; n];
    // Shuttles per qubit, as (op index, shuttle).
    let mut per_qubit: Vec<Vec<(usize, &ShuttleOp)>> = vec![Vec::new(); n];
    let mut shuttles: Vec<(usize, &ShuttleOp)> = Vec::new();
    let mut last_start = f64::NEG_INFINITY;
    let mut max_end = 0.0f64;

    for (i, op) in s.ops.iter().enumerate() {
        if op.start() < last_start - EPS_TIME {
            push(Some(i), Rule::Continuity, "ops are not ordered by start time".into());
        }
        last_start = last_start.max(op.start());
        max_end = max_end.max(op.end());
        if !(op.start().is_finite() && op.start() >= -EPS_TIME) {
            push(Some(i), Rule::Kinematics, format!("start time {} is not a finite non-negative time", op.start()));
        }
        let Op::Shuttle(sh) = op else { continue };
        let q = sh.qubit;
        if q >= n {
            push(Some(i), Rule::Continuity, format!("qubit q{q} does not exist"));
            continue;
        }
        if !spec.contains(sh.from) || !spec.contains(sh.to) {
            push(Some(i), Rule::Kinematics, format!("shuttle {}→{} leaves the architecture", sh.from, sh.to));
            continue;
        }
        if sh.from != loc[q] {
            push(Some(i), Rule::Continuity, format!("q{q} departs {} but is at {}", sh.from, loc[q]));
        }
        if sh.start < busy_until[q] - EPS_TIME {
            push(Some(i), Rule::Continuity, format!("q{q} starts moving before its previous shuttle ends"));
        }
        let dist = spec.distance(sh.from, sh.to);
        if dist == 0.0 {
            push(Some(i), Rule::Kinematics, "zero-length shuttle".into());
        } else if !(sh.velocity.is_finite() && sh.velocity > 0.0) {
            push(Some(i), Rule::Kinematics, format!("velocity {} is not positive", sh.velocity));
        } else {
            if !close(sh.duration, dist / sh.velocity, 1e-9) {
                push(Some(i), Rule::Kinematics, format!("duration {} s differs from distance/velocity {} s", sh.duration, dist / sh.velocity));
            }
            match phase_error(sh.velocity, dist, &s.params) {
                Ok(dc) if close(sh.delta_c, dc, REL_TOL) => {}
                Ok(dc) => push(Some(i), Rule::Kinematics, format!("δC {} differs from the model's {dc}", sh.delta_c)),
                Err(e) => push(Some(i), Rule::Kinematics, e.to_string()),
            }
        }
        loc[q] = sh.to;
        busy_until[q] = sh.end();
        error_sum[q] += sh.delta_c;
        per_qubit[q].push((i, sh));
        shuttles.push((i, sh));
    }

    // (a) operands in place for the whole gate.
    for (i, op) in s.ops.iter().enumerate() {
        let Op::Gate(g) = op else { continue };
        if g.zone >= spec.n_zones() {
            push(Some(i), Rule::GateOperands, format!("zone O{} does not exist", g.zone));
            continue;
        }
        let allowed: &[Option<f64>] = match g.qubits.len() {
            1 => &[Some(spec.t_1q), spec.t_measure],
            2 => &[Some(spec.t_2q)],
            k => {
                push(Some(i), Rule::GateOperands, format!("gate with {k} operands"));
                continue;
            }
        };
        if !allowed.iter().flatten().any(|&t| (t - g.duration).abs() <= EPS_TIME) {
            push(Some(i), Rule::Kinematics, format!("gate duration {} s matches no gate time", g.duration));
        }
        if g.qubits.len() == 2 && g.qubits[0] == g.qubits[1] {
            push(Some(i), Rule::GateOperands, "repeated operand".into());
        }
        for &q in &g.qubits {
            if q >= n {
                push(Some(i), Rule::GateOperands, format!("qubit q{q} does not exist"));
                continue;
            }
            let (a, b) = (g.start, g.end());
            let mut at = Location::Site(s.placement.site(q));
            let mut last_end = f64::NEG_INFINITY;
            let mut moving = false;
            for &(_, sh) in &per_qubit[q] {
                if sh.end() <= a + EPS_TIME && sh.end() >= last_end {
                    at = sh.to;
                    last_end = sh.end();
                }
                if sh.start < b - EPS_TIME && sh.end() > a + EPS_TIME {
                    moving = true;
                }
            }
            if moving {
                push(Some(i), Rule::GateOperands, format!("q{q} moves during the gate"));
            } else if at != Location::Zone(g.zone) {
                push(Some(i), Rule::GateOperands, format!("q{q} is at {at}, not O{}", g.zone));
            }
        }
    }

    // (b), (c) occupancy over time. Each qubit's stays are the intervals
    // between its shuttles; stays of zero length do not count.
    let key = |t: f64| (t * 1e12).round() as i64;
    let mut events: Vec<(Location, i64, i8, Option<usize>)> = Vec::with_capacity(2 * shuttles.len() + 2 * n);
    for (q, list) in per_qubit.iter().enumerate() {
        let mut at = Location::Site(s.placement.site(q));
        let mut since = i64::MIN;
        let mut arrived_by: Option<usize> = None;
        for &(i, sh) in list {
            let leave = key(sh.start);
            if leave > since {
                events.push((at, since, 1, arrived_by));
                events.push((at, leave, -1, arrived_by));
            }
            at = sh.to;
            since = key(sh.end());
            arrived_by = Some(i);
        }
        events.push((at, since, 1, arrived_by));
    }
    // Per location, departures before arrivals at equal times.
    events.sort_by_key(|e| (e.0, e.1, e.2, e.3));
    let mut count = 0usize;
    let mut current: Option<Location> = None;
    for (at, _, delta, op) in events {
        if current != Some(at) {
            current = Some(at);
            count = 0;
        }
        if delta < 0 {
            count -= 1;
            continue;
        }
        count += 1;
        match at {
            Location::Site(x) if count > 1 => {
                push(op, Rule::SiteCapacity, format!("site Q{x} holds {count} qubits"));
            }
            Location::Zone(x) if count > super::ZONE_CAPACITY => {
                push(op, Rule::ZoneCapacity, format!("zone O{x} holds {count} qubits"));
            }
            _ => {}
        }
    }

    // (d) no crossing between overlapping moves.
    let mut by_start = shuttles.clone();
    by_start.sort_by(|a, b| a.1.start.total_cmp(&b.1.start).then(a.0.cmp(&b.0)));
    let pos = |sh: &ShuttleOp, t: f64| {
        let (x0, x1) = (spec.position(sh.from), spec.position(sh.to));
        let f = if sh.duration > 0.0 { ((t - sh.start) / sh.duration).clamp(0.0, 1.0) } else { 1.0 };
        x0 + (x1 - x0) * f
    };
    for (k, &(ia, a)) in by_start.iter().enumerate() {
        for &(ib, b) in &by_start[k + 1..] {
            if b.start >= a.end() - EPS_TIME {
                break;
            }
            if a.qubit == b.qubit || a.from == b.from {
                continue;
            }
            let t0 = a.start.max(b.start);
            let t1 = a.end().min(b.end());
            if t1 - t0 <= EPS_TIME {
                continue;
            }
            let d0 = pos(a, t0) - pos(b, t0);
            let d1 = pos(a, t1) - pos(b, t1);
            if (d0 > EPS_POS && d1 < -EPS_POS) || (d0 < -EPS_POS && d1 > EPS_POS) {
                push(
                    Some(ia.max(ib)),
                    Rule::Crossing,
                    format!("q{} and q{} cross while moving (ops {ia} and {ib})", a.qubit, b.qubit),
                );
            }
        }
    }

    // (e) parked at the end, and the stored final layout agrees.
    for (q, l) in loc.iter().enumerate() {
        if !l.is_site() {
            push(None, Rule::FinalStorage, format!("q{q} ends in {l}"));
        }
    }
    if s.final_layout.assignment() != loc.as_slice() {
        push(None, Rule::Continuity, "stored final layout differs from the replayed one".into());
    }

    // (f) error accounting.
    if s.per_qubit_error.len() != n {
        push(None, Rule::ErrorAccounting, format!("{} error entries for {n} qubits", s.per_qubit_error.len()));
    } else {
        for (q, (&stored, &sum)) in s.per_qubit_error.iter().zip(&error_sum).enumerate() {
            if !close(stored, sum, REL_TOL) {
                push(None, Rule::ErrorAccounting, format!("q{q}: stored δC {stored}, shuttles sum to {sum}"));
            }
        }
    }

    // (g) total time.
    if (s.total_time - max_end).abs() > EPS_TIME {
        push(None, Rule::TotalTime, format!("total time {} s, latest op ends at {max_end} s", s.total_time));
    }
    out
}
