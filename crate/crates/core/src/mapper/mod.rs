//! Shuttle scheduling strategies.
//!
//! Every strategy turns a native-basis circuit into a [`Schedule`] of timed
//! shuttles and gates:
//!
//! * **baseline**: one gate at a time. A single-qubit gate on site `i` runs
//!   in zone `i`; a two-qubit gate on sites `i, j` runs in zone
//!   `⌈(i+j)/2⌉`. Qubits go back to their own sites afterwards.
//! * **parallel**: one ASAP layer at a time. Two-qubit gates run in zone
//!   `max(i, j)`, so every outbound move is rightward and a whole layer moves
//!   at once. Qubits go back to their own sites.
//! * **min_return**: like parallel, but returning qubits take the nearest
//!   free sites at or left of their zone, so the layout drifts over time.
//! * **tunable_velocity**: min_return movements, with each outbound and each
//!   return phase run at the velocity minimising `δC` for that phase's
//!   longest shuttle.
//! * **swap_return**: tunable_velocity, but the two qubits leaving a shared
//!   zone choose between their two return sites by looking at where their
//!   next interaction partners are.

mod layout;
mod schedule;
mod validate;

use std::collections::{BTreeSet, HashMap};

pub use layout::{LayoutState, ZONE_CAPACITY};
pub use schedule::{GateOp, Op, Schedule, ShuttleOp, Strategy};
pub use validate::{validate_schedule, Rule, Violation};

use crate::architecture::{shuttle_time, ArchitectureSpec, Location};
use crate::circuit::{Circuit, Gate, GateKind, SlicedCircuit};
use crate::error::{Error, Result};
use crate::error_model::{optimal_velocity, phase_error, ErrorModelParams, DEFAULT_V_MAX, DEFAULT_V_MIN};
use crate::placement::Placement;

/// Runs `strategy` on a sliced circuit. The baseline walks `sc.circuit` in
/// gate order; the others walk the layers.
pub fn map(
    strategy: Strategy,
    sc: &SlicedCircuit,
    spec: &ArchitectureSpec,
    placement: &Placement,
    params: &ErrorModelParams,
) -> Result<Schedule> {
    match strategy {
        Strategy::Baseline => map_baseline(&sc.circuit, spec, placement, params),
        Strategy::Parallel => map_parallel(sc, spec, placement, params),
        Strategy::MinReturn => map_min_return(sc, spec, placement, params),
        Strategy::TunableVelocity => map_tunable_velocity(sc, spec, placement, params),
        Strategy::SwapReturn => map_swap_return(sc, spec, placement, params),
    }
}

pub fn map_baseline(
    c: &Circuit,
    spec: &ArchitectureSpec,
    placement: &Placement,
    params: &ErrorModelParams,
) -> Result<Schedule> {
    check_inputs(c, spec, placement, params)?;
    let mut b = Builder::new(spec, params, placement);
    let mut now = 0.0;
    for (gi, g) in c.gates.iter().enumerate() {
        if !b.schedulable(g) {
            continue;
        }
        let sites: Vec<usize> = g.qubits.iter().map(|&q| b.parked_site(q)).collect::<Result<_>>()?;
        let zone = match sites.as_slice() {
            [i] => *i,
            [i, j] => (i + j).div_ceil(2),
            _ => unreachable!("gate arity checked"),
        };
        let v = spec.default_velocity;
        let mut t_gate = now;
        for &q in &g.qubits {
            t_gate = f64::max(t_gate, b.shuttle(q, Location::Zone(zone), now, v)?);
        }
        let t_ret = b.gate(gi, g, zone, t_gate)?;
        let mut end = t_ret;
        for (&q, &s) in g.qubits.iter().zip(&sites) {
            end = f64::max(end, b.shuttle(q, Location::Site(s), t_ret, v)?);
        }
        now = end;
    }
    Ok(b.finish(Strategy::Baseline, placement))
}

pub fn map_parallel(
    sc: &SlicedCircuit,
    spec: &ArchitectureSpec,
    placement: &Placement,
    params: &ErrorModelParams,
) -> Result<Schedule> {
    run_layers(sc, spec, placement, params, Strategy::Parallel)
}

pub fn map_min_return(
    sc: &SlicedCircuit,
    spec: &ArchitectureSpec,
    placement: &Placement,
    params: &ErrorModelParams,
) -> Result<Schedule> {
    run_layers(sc, spec, placement, params, Strategy::MinReturn)
}

pub fn map_tunable_velocity(
    sc: &SlicedCircuit,
    spec: &ArchitectureSpec,
    placement: &Placement,
    params: &ErrorModelParams,
) -> Result<Schedule> {
    run_layers(sc, spec, placement, params, Strategy::TunableVelocity)
}

pub fn map_swap_return(
    sc: &SlicedCircuit,
    spec: &ArchitectureSpec,
    placement: &Placement,
    params: &ErrorModelParams,
) -> Result<Schedule> {
    run_layers(sc, spec, placement, params, Strategy::SwapReturn)
}

fn check_inputs(
    c: &Circuit,
    spec: &ArchitectureSpec,
    placement: &Placement,
    params: &ErrorModelParams,
) -> Result<()> {
    spec.validate()?;
    params.validate()?;
    if placement.len() != spec.n_sites {
        return Err(Error::SizeMismatch { expected: spec.n_sites, actual: placement.len() });
    }
    if c.num_qubits > spec.n_sites {
        return Err(Error::Mapping(format!(
            "circuit needs {} qubits but the architecture has {} sites",
            c.num_qubits, spec.n_sites
        )));
    }
    if let Some(g) = c.gates.iter().find(|g| !(g.kind.is_native() || matches!(g.kind, GateKind::Measure | GateKind::Barrier))) {
        return Err(Error::Mapping(format!("gate `{g}` is not in the native basis")));
    }
    Ok(())
}

fn run_layers(
    sc: &SlicedCircuit,
    spec: &ArchitectureSpec,
    placement: &Placement,
    params: &ErrorModelParams,
    strategy: Strategy,
) -> Result<Schedule> {
    check_inputs(&sc.circuit, spec, placement, params)?;
    let tunable = matches!(strategy, Strategy::TunableVelocity | Strategy::SwapReturn);
    let lookahead = (strategy == Strategy::SwapReturn).then(|| Lookahead::new(sc));

    let mut b = Builder::new(spec, params, placement);
    let mut now = 0.0;
    for (l, layer) in sc.layers.iter().enumerate() {
        // Zone assignment on the current layout.
        let mut items: Vec<(usize, &Gate, usize)> = Vec::with_capacity(layer.len());
        let mut origins: Vec<(usize, usize)> = Vec::new();
        for &gi in layer {
            let g = &sc.circuit.gates[gi];
            if !b.schedulable(g) {
                continue;
            }
            let mut zone = 0;
            for &q in &g.qubits {
                let s = b.parked_site(q)?;
                origins.push((q, s));
                zone = zone.max(s);
            }
            items.push((gi, g, zone));
        }
        if items.is_empty() {
            continue;
        }

        // Outbound phase: everyone moves right at once.
        let zone_of = |q: usize| items.iter().find(|it| it.1.qubits.contains(&q)).map(|it| it.2).expect("operand");
        let v_out = if tunable {
            let d = origins
                .iter()
                .map(|&(q, s)| spec.distance(Location::Site(s), Location::Zone(zone_of(q))))
                .fold(0.0, f64::max);
            b.optimal_velocity(d)?
        } else {
            spec.default_velocity
        };
        let mut t_gate = now;
        for &(q, _) in &origins {
            t_gate = f64::max(t_gate, b.shuttle(q, Location::Zone(zone_of(q)), now, v_out)?);
        }

        let mut t_ret = t_gate;
        for &(gi, g, zone) in &items {
            t_ret = f64::max(t_ret, b.gate(gi, g, zone, t_gate)?);
        }

        let targets: Vec<(usize, usize)> = match strategy {
            Strategy::Parallel => origins.clone(),
            _ => {
                let zones: Vec<(usize, Vec<usize>)> = items
                    .iter()
                    .map(|&(_, g, z)| {
                        let mut occ = g.qubits.clone();
                        occ.sort_unstable();
                        (z, occ)
                    })
                    .collect();
                let freed: Vec<usize> = origins.iter().map(|&(_, s)| s).collect();
                assign_returns(&b.layout, spec, &zones, &freed, lookahead.as_ref().map(|la| (la, l)))?
            }
        };

        let v_ret = if tunable {
            let d = targets
                .iter()
                .map(|&(q, s)| spec.distance(b.layout.location(q), Location::Site(s)))
                .fold(0.0, f64::max);
            b.optimal_velocity(d)?
        } else {
            spec.default_velocity
        };
        let mut end = t_ret;
        for &(q, s) in &targets {
            end = f64::max(end, b.shuttle(q, Location::Site(s), t_ret, v_ret)?);
        }
        now = end;
    }
    Ok(b.finish(strategy, placement))
}

/// Next two-qubit partner of every qubit, by layer.
struct Lookahead {
    // Per qubit: (layer, partner) for each two-qubit gate, in layer order.
    interactions: Vec<Vec<(usize, usize)>>,
}

impl Lookahead {
    fn new(sc: &SlicedCircuit) -> Self {
        let mut interactions = vec![Vec::new(); sc.num_qubits()];
        for (l, layer) in sc.layers.iter().enumerate() {
            for &gi in layer {
                let g = &sc.circuit.gates[gi];
                if g.is_two_qubit() {
                    let (a, b) = (g.qubits[0], g.qubits[1]);
                    interactions[a].push((l, b));
                    interactions[b].push((l, a));
                }
            }
        }
        Lookahead { interactions }
    }

    /// Partner in the earliest two-qubit gate on `q` after `layer`.
    fn next_partner(&self, q: usize, layer: usize) -> Option<usize> {
        let list = self.interactions.get(q)?;
        let k = list.partition_point(|&(l, _)| l <= layer);
        list.get(k).map(|&(_, p)| p)
    }
}

/// Return sites for the occupants of every zone used in a layer.
///
/// Zones are served right to left; each takes the rightmost free sites at or
/// left of itself. Within a shared zone the smaller virtual index gets the
/// right-hand site unless the lookahead decides otherwise.
fn assign_returns(
    layout: &LayoutState,
    spec: &ArchitectureSpec,
    zones: &[(usize, Vec<usize>)],
    freed: &[usize],
    lookahead: Option<(&Lookahead, usize)>,
) -> Result<Vec<(usize, usize)>> {
    let mut free: BTreeSet<usize> = freed.iter().copied().collect();
    let mut order: Vec<&(usize, Vec<usize>)> = zones.iter().collect();
    order.sort_by_key(|z| std::cmp::Reverse(z.0));

    let mut pending: HashMap<usize, usize> = HashMap::new();
    let mut out = Vec::with_capacity(freed.len());
    for (zone, occupants) in order {
        let picked: Vec<usize> = free.range(..=*zone).rev().take(occupants.len()).copied().collect();
        if picked.len() < occupants.len() {
            return Err(Error::Mapping(format!("no free storage site left of zone O{zone}")));
        }
        for s in &picked {
            free.remove(s);
        }
        let chosen: Vec<(usize, usize)> = match (occupants.as_slice(), picked.as_slice()) {
            ([q], [s]) => vec![(*q, *s)],
            ([qi, qj], [hi, lo]) => {
                let keep = match lookahead {
                    Some((la, layer)) => {
                        let partner_loc = |q: usize| {
                            la.next_partner(q, layer)
                                .map(|p| pending.get(&p).map_or(layout.location(p), |&s| Location::Site(s)))
                        };
                        keep_default_pair(spec, (*hi, *lo), partner_loc(*qi), partner_loc(*qj))
                    }
                    None => true,
                };
                if keep {
                    vec![(*qi, *hi), (*qj, *lo)]
                } else {
                    vec![(*qi, *lo), (*qj, *hi)]
                }
            }
            _ => unreachable!("zones hold one or two qubits"),
        };
        for &(q, s) in &chosen {
            pending.insert(q, s);
        }
        out.extend(chosen);
    }
    Ok(out)
}

/// Whether the default pairing `q_i → hi`, `q_j → lo` should stand, given
/// the current locations of each qubit's next partner. With both partners
/// known the pairing stands when `d(hi, p_i) <= d(lo, p_j)`; with one known,
/// that qubit takes whichever site is closer to its partner.
fn keep_default_pair(
    spec: &ArchitectureSpec,
    (hi, lo): (usize, usize),
    partner_i: Option<Location>,
    partner_j: Option<Location>,
) -> bool {
    let d = |s: usize, p: Location| spec.distance(Location::Site(s), p);
    match (partner_i, partner_j) {
        (Some(pi), Some(pj)) => d(hi, pi) <= d(lo, pj),
        (Some(pi), None) => d(hi, pi) <= d(lo, pi),
        (None, Some(pj)) => d(lo, pj) <= d(hi, pj),
        (None, None) => true,
    }
}

struct Builder<'a> {
    spec: &'a ArchitectureSpec,
    params: &'a ErrorModelParams,
    layout: LayoutState,
    ops: Vec<Op>,
    errors: Vec<f64>,
    // Keyed by distance in picometres.
    velocity_cache: HashMap<u64, f64>,
}

impl<'a> Builder<'a> {
    fn new(spec: &'a ArchitectureSpec, params: &'a ErrorModelParams, placement: &Placement) -> Self {
        Builder {
            spec,
            params,
            layout: LayoutState::from_placement(placement),
            ops: Vec::new(),
            errors: vec![0.0; spec.n_sites],
            velocity_cache: HashMap::new(),
        }
    }

    fn schedulable(&self, g: &Gate) -> bool {
        match g.kind {
            GateKind::Barrier => false,
            GateKind::Measure => self.spec.t_measure.is_some(),
            _ => true,
        }
    }

    fn parked_site(&self, q: usize) -> Result<usize> {
        self.layout
            .site_of(q)
            .ok_or_else(|| Error::Mapping(format!("q{q} is not parked at the start of a gate episode")))
    }

    fn optimal_velocity(&mut self, distance: f64) -> Result<f64> {
        let key = (distance * 1e12).round() as u64;
        if let Some(&v) = self.velocity_cache.get(&key) {
            return Ok(v);
        }
        let v = optimal_velocity(distance, self.params, DEFAULT_V_MIN, DEFAULT_V_MAX)?;
        self.velocity_cache.insert(key, v);
        Ok(v)
    }

    /// Emits `Ω(current, to)` departing at `start`; returns the arrival time.
    /// Zero-length moves are skipped.
    fn shuttle(&mut self, q: usize, to: Location, start: f64, velocity: f64) -> Result<f64> {
        let from = self.layout.location(q);
        let distance = self.spec.distance(from, to);
        if distance == 0.0 {
            return Ok(start);
        }
        let duration = shuttle_time(distance, velocity)?;
        let delta_c = phase_error(velocity, distance, self.params)?;
        self.layout.move_qubit(q, to)?;
        self.errors[q] += delta_c;
        self.ops.push(Op::Shuttle(ShuttleOp { qubit: q, from, to, start, velocity, duration, delta_c }));
        Ok(start + duration)
    }

    fn gate(&mut self, index: usize, g: &Gate, zone: usize, start: f64) -> Result<f64> {
        let duration = match g.kind {
            GateKind::Measure => self.spec.t_measure.ok_or_else(|| Error::Mapping("measurement without a duration".into()))?,
            k if k.is_two_qubit() => self.spec.t_2q,
            _ => self.spec.t_1q,
        };
        for &q in &g.qubits {
            if self.layout.location(q) != Location::Zone(zone) {
                return Err(Error::Mapping(format!("q{q} is not in zone O{zone} for gate {index}")));
            }
        }
        self.ops.push(Op::Gate(GateOp { gate: index, qubits: g.qubits.clone(), zone, start, duration }));
        Ok(start + duration)
    }

    fn finish(mut self, strategy: Strategy, placement: &Placement) -> Schedule {
        self.ops.sort_by(|a, b| a.start().total_cmp(&b.start()));
        let total_time = self.ops.iter().map(Op::end).fold(0.0, f64::max);
        Schedule {
            strategy,
            spec: *self.spec,
            placement: placement.clone(),
            params: *self.params,
            ops: self.ops,
            total_time,
            per_qubit_error: self.errors,
            final_layout: self.layout,
        }
    }
}
