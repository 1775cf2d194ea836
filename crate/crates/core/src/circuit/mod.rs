//! Circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered gate list over virtual qubits. Input circuits
//! may use the extended gate set accepted by the QASM reader; [`decompose`]
//! lowers them to the native basis `{rx, rz, h, cz}` and [`slice`] groups the
//! native stream into layers of gates acting on disjoint qubits.

mod decompose;
pub mod qasm;
mod slice;
mod unitary;

use std::fmt;

pub use decompose::{decompose, decompose_gate};
pub use slice::{slice, slice_with, SliceOptions, SlicedCircuit};
pub use unitary::{equal_up_to_global_phase, unitary_of, Matrix};

use crate::error::{Error, Result};

/// Gate kinds. Rotation kinds carry their angle in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    Rx(f64),
    Rz(f64),
    H,
    Cz,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Ry(f64),
    Cx,
    Swap,
    Measure,
    Barrier,
}

impl GateKind {
    /// Whether the kind belongs to the hardware basis `{rx, rz, h, cz}`.
    pub fn is_native(self) -> bool {
        matches!(self, GateKind::Rx(_) | GateKind::Rz(_) | GateKind::H | GateKind::Cz)
    }

    pub fn is_two_qubit(self) -> bool {
        matches!(self, GateKind::Cz | GateKind::Cx | GateKind::Swap)
    }

    pub fn angle(self) -> Option<f64> {
        match self {
            GateKind::Rx(a) | GateKind::Rz(a) | GateKind::Ry(a) => Some(a),
            _ => None,
        }
    }

    /// Lower-case QASM mnemonic.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::Rx(_) => "rx",
            GateKind::Rz(_) => "rz",
            GateKind::H => "h",
            GateKind::Cz => "cz",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Ry(_) => "ry",
            GateKind::Cx => "cx",
            GateKind::Swap => "swap",
            GateKind::Measure => "measure",
            GateKind::Barrier => "barrier",
        }
    }
}

/// A gate applied to an ordered list of virtual qubits.
///
/// Barriers may span any number of qubits; every other kind takes exactly one
/// operand, or two for `cz`, `cx` and `swap`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Self {
        Gate { kind, qubits }
    }

    pub fn one(kind: GateKind, q: usize) -> Self {
        Gate { kind, qubits: vec![q] }
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Self {
        Gate { kind, qubits: vec![a, b] }
    }

    pub fn angle(&self) -> Option<f64> {
        self.kind.angle()
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind.is_two_qubit()
    }

    /// Checks operand arity, distinctness and range against `num_qubits`.
    pub fn check(&self, num_qubits: usize) -> Result<()> {
        let arity_ok = match self.kind {
            GateKind::Barrier => !self.qubits.is_empty(),
            k if k.is_two_qubit() => self.qubits.len() == 2,
            _ => self.qubits.len() == 1,
        };
        if !arity_ok {
            return Err(Error::InvalidGate(format!(
                "{} takes {} operand(s), got {}",
                self.kind.name(),
                if self.kind.is_two_qubit() { 2 } else { 1 },
                self.qubits.len()
            )));
        }
        for (i, &q) in self.qubits.iter().enumerate() {
            if q >= num_qubits {
                return Err(Error::InvalidGate(format!(
                    "{}: qubit {q} out of range for {num_qubits} qubits",
                    self.kind.name()
                )));
            }
            if self.qubits[..i].contains(&q) {
                return Err(Error::InvalidGate(format!(
                    "{}: repeated operand {q}",
                    self.kind.name()
                )));
            }
        }
        if let Some(a) = self.angle() {
            if !a.is_finite() {
                return Err(Error::InvalidGate(format!("{}: non-finite angle", self.kind.name())));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        if let Some(a) = self.angle() {
            write!(f, "({a})")?;
        }
        let qs: Vec<String> = self.qubits.iter().map(|q| format!("q{q}")).collect();
        write!(f, " {}", qs.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub name: String,
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, num_qubits: usize) -> Self {
        Circuit { name: name.into(), num_qubits, gates: Vec::new() }
    }

    /// Builds a circuit from a gate list, validating every gate.
    pub fn from_gates(name: impl Into<String>, num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.check(num_qubits)?;
        }
        Ok(Circuit { name: name.into(), num_qubits, gates })
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.check(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn is_native(&self) -> bool {
        self.gates
            .iter()
            .all(|g| g.kind.is_native() || matches!(g.kind, GateKind::Measure | GateKind::Barrier))
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }
}
