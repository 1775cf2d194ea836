use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Mul;

use num_complex::Complex64;

use super::{Gate, GateKind};
use crate::error::{Error, Result};

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Matrix { dim, data }
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            assert_eq!(r.len(), dim, "matrix must be square");
            data.extend_from_slice(r);
        }
        Matrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn scale(&self, s: Complex64) -> Matrix {
        Matrix { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn adjoint(&self) -> Matrix {
        let n = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for c in 0..n {
                data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        Matrix { dim: n, data }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        Matrix { dim: n, data }
    }
}

/// Whether `a = e^{iφ} b` for some global phase φ, within `tol` in max-norm.
pub fn equal_up_to_global_phase(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    if a.dim != b.dim {
        return false;
    }
    // Align phases on the entry of `b` with the largest modulus.
    let (idx, _) = b
        .data
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
    let (pa, pb) = (a.data[idx], b.data[idx]);
    if pa.norm() < tol {
        return a.max_abs_diff(b) <= tol;
    }
    let phase = pb / pa;
    let phase = phase / phase.norm();
    a.scale(phase).max_abs_diff(b) <= tol
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single_qubit_matrix(kind: GateKind) -> Result<[[Complex64; 2]; 2]> {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let m = match kind {
        GateKind::H => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            [[h, h], [h, -h]]
        }
        GateKind::X => [[z, one], [one, z]],
        GateKind::Y => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        GateKind::Z => [[one, z], [z, -one]],
        GateKind::S => [[one, z], [z, c(0.0, 1.0)]],
        GateKind::Sdg => [[one, z], [z, c(0.0, -1.0)]],
        GateKind::T => [[one, z], [z, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]],
        GateKind::Tdg => [[one, z], [z, Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)]],
        GateKind::Rx(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        GateKind::Ry(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        GateKind::Rz(t) => [
            [Complex64::from_polar(1.0, -t / 2.0), z],
            [z, Complex64::from_polar(1.0, t / 2.0)],
        ],
        other => return Err(Error::NonUnitary(other.name().to_string())),
    };
    Ok(m)
}

// Qubit 0 is the most significant bit of the basis index.
fn bit(index: usize, q: usize, n: usize) -> usize {
    (index >> (n - 1 - q)) & 1
}

fn gate_matrix(gate: &Gate, n: usize) -> Result<Matrix> {
    let dim = 1 << n;
    let mut m = Matrix { dim, data: vec![c(0.0, 0.0); dim * dim] };
    match gate.kind {
        GateKind::Barrier => return Ok(Matrix::identity(dim)),
        GateKind::Measure => return Err(Error::NonUnitary("measure".into())),
        GateKind::Cz | GateKind::Cx | GateKind::Swap => {
            let (a, b) = (gate.qubits[0], gate.qubits[1]);
            for col in 0..dim {
                let (ba, bb) = (bit(col, a, n), bit(col, b, n));
                let (row, amp) = match gate.kind {
                    GateKind::Cz => (col, if ba == 1 && bb == 1 { -1.0 } else { 1.0 }),
                    GateKind::Cx => (if ba == 1 { col ^ (1 << (n - 1 - b)) } else { col }, 1.0),
                    _ => {
                        let mut row = col & !(1 << (n - 1 - a)) & !(1 << (n - 1 - b));
                        row |= bb << (n - 1 - a);
                        row |= ba << (n - 1 - b);
                        (row, 1.0)
                    }
                };
                m.data[row * dim + col] = c(amp, 0.0);
            }
        }
        kind => {
            let u = single_qubit_matrix(kind)?;
            let q = gate.qubits[0];
            let mask = 1 << (n - 1 - q);
            for r in 0..dim {
                for col in 0..dim {
                    if r & !mask == col & !mask {
                        m.data[r * dim + col] = u[bit(r, q, n)][bit(col, q, n)];
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Unitary of a gate sequence on `n ≤ 2` qubits; the first gate is applied
/// first, so the result is `G_k ⋯ G_1`.
pub fn unitary_of(gates: &[Gate], n: usize) -> Result<Matrix> {
    if n > 2 {
        return Err(Error::TooManyQubits(n));
    }
    let mut u = Matrix::identity(1 << n);
    for g in gates {
        g.check(n)?;
        u = &gate_matrix(g, n)? * &u;
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn hadamard_matrix() {
        let u = unitary_of(&[Gate::one(GateKind::H, 0)], 1).unwrap();
        let h = FRAC_1_SQRT_2;
        let expected = Matrix::from_rows(&[&[c(h, 0.0), c(h, 0.0)], &[c(h, 0.0), c(-h, 0.0)]]);
        assert!(u.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn empty_product_is_identity() {
        assert_eq!(unitary_of(&[], 2).unwrap(), Matrix::identity(4));
    }

    #[test]
    fn rz_pi_squared_is_identity_up_to_phase() {
        let g = Gate::one(GateKind::Rz(PI), 0);
        let u = unitary_of(&[g.clone(), g], 1).unwrap();
        // RZ(π)² = diag(-1, -1)
        assert!(u.max_abs_diff(&Matrix::identity(2).scale(c(-1.0, 0.0))) < 1e-15);
        assert!(equal_up_to_global_phase(&u, &Matrix::identity(2), 1e-12));
    }

    #[test]
    fn three_qubits_rejected() {
        assert!(matches!(unitary_of(&[], 3), Err(Error::TooManyQubits(3))));
    }

    #[test]
    fn cx_control_is_first_operand() {
        // |10> -> |11> with qubit 0 as the most significant bit.
        let u = unitary_of(&[Gate::two(GateKind::Cx, 0, 1)], 2).unwrap();
        assert_eq!(u.get(3, 2), c(1.0, 0.0));
        assert_eq!(u.get(1, 1), c(1.0, 0.0));
        let u = unitary_of(&[Gate::two(GateKind::Cx, 1, 0)], 2).unwrap();
        assert_eq!(u.get(3, 1), c(1.0, 0.0));
    }

    #[test]
    fn gate_unitaries_are_unitary() {
        let gates = [
            Gate::one(GateKind::Rx(0.3), 0),
            Gate::one(GateKind::Ry(-1.1), 1),
            Gate::one(GateKind::T, 0),
            Gate::two(GateKind::Swap, 0, 1),
            Gate::two(GateKind::Cz, 1, 0),
        ];
        let u = unitary_of(&gates, 2).unwrap();
        assert!((&u.adjoint() * &u).max_abs_diff(&Matrix::identity(4)) < 1e-12);
    }

    #[test]
    fn global_phase_mismatch_detected() {
        let x = unitary_of(&[Gate::one(GateKind::X, 0)], 1).unwrap();
        let z = unitary_of(&[Gate::one(GateKind::Z, 0)], 1).unwrap();
        assert!(!equal_up_to_global_phase(&x, &z, 1e-9));
        assert!(equal_up_to_global_phase(&x.scale(c(0.0, 1.0)), &x, 1e-12));
    }
}
