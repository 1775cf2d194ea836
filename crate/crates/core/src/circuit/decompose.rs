use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::{Circuit, Gate, GateKind};

/// Rewrites one gate into the native basis. Native gates, measurements and
/// barriers pass through unchanged. Every rewrite equals the original up to a
/// global phase.
pub fn decompose_gate(g: &Gate) -> Vec<Gate> {
    let one = |kind| Gate::one(kind, g.qubits[0]);
    match g.kind {
        GateKind::Rx(_)
        | GateKind::Rz(_)
        | GateKind::H
        | GateKind::Cz
        | GateKind::Measure
        | GateKind::Barrier => vec![g.clone()],
        GateKind::X => vec![one(GateKind::Rx(PI))],
        GateKind::Y => ry(g.qubits[0], PI),
        GateKind::Z => vec![one(GateKind::Rz(PI))],
        GateKind::S => vec![one(GateKind::Rz(FRAC_PI_2))],
        GateKind::Sdg => vec![one(GateKind::Rz(-FRAC_PI_2))],
        GateKind::T => vec![one(GateKind::Rz(FRAC_PI_4))],
        GateKind::Tdg => vec![one(GateKind::Rz(-FRAC_PI_4))],
        GateKind::Ry(theta) => ry(g.qubits[0], theta),
        GateKind::Cx => cx(g.qubits[0], g.qubits[1]),
        GateKind::Swap => {
            let (a, b) = (g.qubits[0], g.qubits[1]);
            let mut out = cx(a, b);
            out.extend(cx(b, a));
            out.extend(cx(a, b));
            out
        }
    }
}

// RY(θ) = RZ(π/2)·RX(θ)·RZ(−π/2); listed in application order.
fn ry(q: usize, theta: f64) -> Vec<Gate> {
    vec![
        Gate::one(GateKind::Rz(-FRAC_PI_2), q),
        Gate::one(GateKind::Rx(theta), q),
        Gate::one(GateKind::Rz(FRAC_PI_2), q),
    ]
}

// CX(a,b) = H(b)·CZ(a,b)·H(b)
fn cx(a: usize, b: usize) -> Vec<Gate> {
    vec![Gate::one(GateKind::H, b), Gate::two(GateKind::Cz, a, b), Gate::one(GateKind::H, b)]
}

/// Lowers a circuit to the native basis, gate by gate, preserving order.
/// No cancellation or merging is performed.
pub fn decompose(c: &Circuit) -> Circuit {
    Circuit {
        name: c.name.clone(),
        num_qubits: c.num_qubits,
        gates: c.gates.iter().flat_map(decompose_gate).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{equal_up_to_global_phase, unitary_of};

    fn assert_equivalent(g: Gate, n: usize) {
        let rewritten = decompose_gate(&g);
        assert!(rewritten.iter().all(|r| r.kind.is_native()), "{g} not lowered");
        let lhs = unitary_of(&rewritten, n).unwrap();
        let rhs = unitary_of(std::slice::from_ref(&g), n).unwrap();
        assert!(equal_up_to_global_phase(&lhs, &rhs, 1e-9), "{g} mismatch");
    }

    #[test]
    fn cx_becomes_h_cz_h() {
        let out = decompose_gate(&Gate::two(GateKind::Cx, 0, 1));
        assert_eq!(
            out,
            vec![
                Gate::one(GateKind::H, 1),
                Gate::two(GateKind::Cz, 0, 1),
                Gate::one(GateKind::H, 1)
            ]
        );
        assert_equivalent(Gate::two(GateKind::Cx, 0, 1), 2);
        assert_equivalent(Gate::two(GateKind::Cx, 1, 0), 2);
    }

    #[test]
    fn native_gates_pass_through() {
        let h = Gate::one(GateKind::H, 0);
        assert_eq!(decompose_gate(&h), vec![h]);
    }

    #[test]
    fn swap_is_nine_native_gates() {
        let out = decompose_gate(&Gate::two(GateKind::Swap, 0, 1));
        assert_eq!(out.len(), 9);
        assert_eq!(out.iter().filter(|g| g.kind == GateKind::Cz).count(), 3);
        assert_equivalent(Gate::two(GateKind::Swap, 0, 1), 2);
    }

    #[test]
    fn single_qubit_identities() {
        for kind in [
            GateKind::X,
            GateKind::Y,
            GateKind::Z,
            GateKind::S,
            GateKind::Sdg,
            GateKind::T,
            GateKind::Tdg,
            GateKind::Ry(0.37),
            GateKind::Ry(-2.9),
        ] {
            assert_equivalent(Gate::one(kind, 0), 1);
            assert_equivalent(Gate::one(kind, 1), 2);
        }
    }

    #[test]
    fn per_qubit_order_is_preserved() {
        let c = Circuit::from_gates(
            "t",
            2,
            vec![Gate::one(GateKind::X, 0), Gate::two(GateKind::Cx, 0, 1), Gate::one(GateKind::T, 1)],
        )
        .unwrap();
        let d = decompose(&c);
        assert!(d.is_native());
        let kinds: Vec<_> = d.gates.iter().map(|g| g.kind.name()).collect();
        assert_eq!(kinds, ["rx", "h", "cz", "h", "rz"]);
    }
}
