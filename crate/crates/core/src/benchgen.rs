//! Seeded generators for the benchmark circuit families.
//!
//! Circuits are emitted in the extended gate set (before decomposition).
//! Controlled phases are spelled out with `rz`/`cx`:
//! `CP(θ) c,t = rz(θ/2) c; cx c,t; rz(−θ/2) t; cx c,t; rz(θ/2) t`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::rng::SeededRng;

pub const MIN_QUBITS: usize = 2;
pub const MAX_QUBITS: usize = 64;
/// Edge probability of the seeded random graphs.
pub const EDGE_PROBABILITY: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Ghz,
    GraphState,
    Dj,
    Qft,
    Qpe,
    Qaoa,
    Random,
}

impl Family {
    pub const ALL: [Family; 7] =
        [Family::Ghz, Family::GraphState, Family::Dj, Family::Qft, Family::Qpe, Family::Qaoa, Family::Random];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Ghz => "ghz",
            Family::GraphState => "graph_state",
            Family::Dj => "dj",
            Family::Qft => "qft",
            Family::Qpe => "qpe",
            Family::Qaoa => "qaoa",
            Family::Random => "random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| Error::InvalidBenchmark(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    /// QAOA rounds.
    #[serde(default = "default_rounds")]
    pub qaoa_rounds: usize,
    /// Layer count of random circuits; `2n` when unset.
    #[serde(default)]
    pub random_depth: Option<usize>,
    /// Probability that a candidate CX pair is kept in a random circuit layer.
    #[serde(default = "default_density")]
    pub cx_density: f64,
}

fn default_rounds() -> usize {
    1
}

fn default_density() -> f64 {
    0.5
}

impl BenchmarkSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        BenchmarkSpec {
            family,
            n,
            seed,
            qaoa_rounds: default_rounds(),
            random_depth: None,
            cx_density: default_density(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_QUBITS..=MAX_QUBITS).contains(&self.n) {
            return Err(Error::InvalidBenchmark(format!(
                "n must lie in [{MIN_QUBITS}, {MAX_QUBITS}], got {}",
                self.n
            )));
        }
        if self.qaoa_rounds == 0 {
            return Err(Error::InvalidBenchmark("qaoa needs at least one round".into()));
        }
        if !(0.0..=1.0).contains(&self.cx_density) {
            return Err(Error::InvalidBenchmark(format!("cx density {} outside [0, 1]", self.cx_density)));
        }
        Ok(())
    }
}

/// Edges `(i, j)`, `i < j`, each kept with probability `p`, drawn in
/// lexicographic order.
pub fn erdos_renyi(n: usize, p: f64, rng: &mut SeededRng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.bernoulli(p) {
                edges.push((i, j));
            }
        }
    }
    edges
}

pub fn generate(spec: &BenchmarkSpec) -> Result<Circuit> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = SeededRng::new(spec.seed);
    let mut b = Builder::default();
    match spec.family {
        Family::Ghz => {
            b.one(GateKind::H, 0);
            for i in 0..n - 1 {
                b.two(GateKind::Cx, i, i + 1);
            }
        }
        Family::GraphState => {
            for q in 0..n {
                b.one(GateKind::H, q);
            }
            for (i, j) in erdos_renyi(n, EDGE_PROBABILITY, &mut rng) {
                b.two(GateKind::Cz, i, j);
            }
        }
        Family::Dj => deutsch_jozsa(&mut b, n, &mut rng),
        Family::Qft => {
            let qubits: Vec<usize> = (0..n).collect();
            qft(&mut b, &qubits);
        }
        Family::Qpe => phase_estimation(&mut b, n, &mut rng),
        Family::Qaoa => {
            let edges = erdos_renyi(n, EDGE_PROBABILITY, &mut rng);
            for q in 0..n {
                b.one(GateKind::H, q);
            }
            for _ in 0..spec.qaoa_rounds {
                let gamma = rng.uniform(0.0, PI);
                let beta = rng.uniform(0.0, PI);
                for &(i, j) in &edges {
                    b.two(GateKind::Cx, i, j);
                    b.one(GateKind::Rz(2.0 * gamma), j);
                    b.two(GateKind::Cx, i, j);
                }
                for q in 0..n {
                    b.one(GateKind::Rx(2.0 * beta), q);
                }
            }
        }
        Family::Random => {
            let depth = spec.random_depth.unwrap_or(2 * n);
            let mut order: Vec<usize> = (0..n).collect();
            for layer in 0..depth {
                if layer % 2 == 0 {
                    for q in 0..n {
                        let theta = rng.uniform(0.0, 2.0 * PI);
                        let kind = match rng.index(3) {
                            0 => GateKind::Rx(theta),
                            1 => GateKind::Ry(theta),
                            _ => GateKind::Rz(theta),
                        };
                        b.one(kind, q);
                    }
                } else {
                    rng.shuffle(&mut order);
                    for pair in order.chunks_exact(2) {
                        if rng.bernoulli(spec.cx_density) {
                            b.two(GateKind::Cx, pair[0], pair[1]);
                        }
                    }
                }
            }
        }
    }
    Circuit::from_gates(spec.family.tag(), n, b.gates)
}

#[derive(Default)]
struct Builder {
    gates: Vec<Gate>,
}

impl Builder {
    fn one(&mut self, kind: GateKind, q: usize) {
        self.gates.push(Gate::one(kind, q));
    }

    fn two(&mut self, kind: GateKind, a: usize, b: usize) {
        self.gates.push(Gate::two(kind, a, b));
    }

    /// Controlled phase `diag(1, 1, 1, e^{iθ})`, up to global phase.
    fn cphase(&mut self, theta: f64, c: usize, t: usize) {
        self.one(GateKind::Rz(theta / 2.0), c);
        self.two(GateKind::Cx, c, t);
        self.one(GateKind::Rz(-theta / 2.0), t);
        self.two(GateKind::Cx, c, t);
        self.one(GateKind::Rz(theta / 2.0), t);
    }
}

/// QFT with the textbook bit-reversal swaps at the end.
fn qft(b: &mut Builder, qs: &[usize]) {
    let m = qs.len();
    for j in 0..m {
        b.one(GateKind::H, qs[j]);
        for k in j + 1..m {
            b.cphase(PI / (1u64 << (k - j)) as f64, qs[k], qs[j]);
        }
    }
    for i in 0..m / 2 {
        b.two(GateKind::Swap, qs[i], qs[m - 1 - i]);
    }
}

/// Exact inverse of [`qft`].
fn inverse_qft(b: &mut Builder, qs: &[usize]) {
    let m = qs.len();
    for i in 0..m / 2 {
        b.two(GateKind::Swap, qs[i], qs[m - 1 - i]);
    }
    for j in (0..m).rev() {
        for k in (j + 1..m).rev() {
            b.cphase(-PI / (1u64 << (k - j)) as f64, qs[k], qs[j]);
        }
        b.one(GateKind::H, qs[j]);
    }
}

/// Inputs `0..n-1`, ancilla `n-1`. The oracle `f(x) = s·x mod 2` with a
/// seeded nonzero `s` is balanced; a seeded mask of X gates conjugates it.
fn deutsch_jozsa(b: &mut Builder, n: usize, rng: &mut SeededRng) {
    let inputs = n - 1;
    let anc = n - 1;
    let mut s: Vec<bool> = (0..inputs).map(|_| rng.bernoulli(0.5)).collect();
    if !s.iter().any(|&x| x) {
        let k = rng.index(inputs);
        s[k] = true;
    }
    let mask: Vec<bool> = (0..inputs).map(|_| rng.bernoulli(0.5)).collect();

    b.one(GateKind::X, anc);
    for q in 0..n {
        b.one(GateKind::H, q);
    }
    for q in (0..inputs).filter(|&q| mask[q]) {
        b.one(GateKind::X, q);
    }
    for q in (0..inputs).filter(|&q| s[q]) {
        b.two(GateKind::Cx, q, anc);
    }
    for q in (0..inputs).filter(|&q| mask[q]) {
        b.one(GateKind::X, q);
    }
    for q in 0..inputs {
        b.one(GateKind::H, q);
    }
}

/// Counting register `0..n-1` (qubit 0 most significant after the inverse
/// QFT), target `n-1` prepared in `|1⟩`, phase `k / 2^(n-1)` with seeded `k`.
/// `U = diag(1, e^{2πiφ})`, so the counting register ends in `|k⟩` exactly.
fn phase_estimation(b: &mut Builder, n: usize, rng: &mut SeededRng) {
    let m = n - 1;
    let target = n - 1;
    let modulus = 1u128 << m;
    let k = rng.below((modulus - 1).min(u64::MAX as u128) as u64 + 1) as u128;

    b.one(GateKind::X, target);
    for q in 0..m {
        b.one(GateKind::H, q);
    }
    // Counting qubit j (from the least significant end) applies U^(2^j).
    for j in 0..m {
        let power = (k << j) % modulus;
        let theta = 2.0 * PI * power as f64 / modulus as f64;
        b.cphase(theta, m - 1 - j, target);
    }
    let counting: Vec<usize> = (0..m).collect();
    inverse_qft(b, &counting);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz_three() {
        let c = generate(&BenchmarkSpec::new(Family::Ghz, 3, 0)).unwrap();
        assert_eq!(
            c.gates,
            vec![Gate::one(GateKind::H, 0), Gate::two(GateKind::Cx, 0, 1), Gate::two(GateKind::Cx, 1, 2)]
        );
    }

    #[test]
    fn size_limits() {
        assert!(generate(&BenchmarkSpec::new(Family::Ghz, 1, 0)).is_err());
        assert!(generate(&BenchmarkSpec::new(Family::Ghz, 65, 0)).is_err());
        assert!(generate(&BenchmarkSpec::new(Family::Qpe, 64, 3)).is_ok());
    }

    #[test]
    fn family_tags_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.tag().parse::<Family>().unwrap(), f);
        }
        assert!("vqe".parse::<Family>().is_err());
    }
}
