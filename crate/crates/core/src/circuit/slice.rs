use super::{Circuit, Gate, GateKind};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SliceOptions {
    /// Keep measurements as schedulable single-qubit operations. When false
    /// they are dropped.
    pub keep_measure: bool,
}

/// A circuit partitioned into ASAP layers of gates on disjoint qubits.
///
/// `circuit` holds only schedulable gates: barriers are consumed as layering
/// fences and measurements are dropped unless requested. `layers` indexes
/// into `circuit.gates`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlicedCircuit {
    pub circuit: Circuit,
    pub layers: Vec<Vec<usize>>,
}

impl SlicedCircuit {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.circuit.num_qubits
    }

    pub fn layer_gates(&self, layer: usize) -> impl Iterator<Item = (usize, &Gate)> + '_ {
        self.layers[layer].iter().map(move |&i| (i, &self.circuit.gates[i]))
    }

    /// Layer index of every gate.
    pub fn layer_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.circuit.gates.len()];
        for (l, layer) in self.layers.iter().enumerate() {
            for &g in layer {
                out[g] = l;
            }
        }
        out
    }

    /// Gates in layer order.
    pub fn flattened(&self) -> Circuit {
        Circuit {
            name: self.circuit.name.clone(),
            num_qubits: self.circuit.num_qubits,
            gates: self.layers.iter().flatten().map(|&i| self.circuit.gates[i].clone()).collect(),
        }
    }
}

pub fn slice(c: &Circuit) -> SlicedCircuit {
    slice_with(c, SliceOptions::default())
}

pub fn slice_with(c: &Circuit, opts: SliceOptions) -> SlicedCircuit {
    // Earliest layer the next gate on each qubit may occupy.
    let mut ready = vec![0usize; c.num_qubits];
    let mut gates = Vec::with_capacity(c.gates.len());
    let mut layers: Vec<Vec<usize>> = Vec::new();

    for g in &c.gates {
        match g.kind {
            GateKind::Barrier => {
                let fence = g.qubits.iter().map(|&q| ready[q]).max().unwrap_or(0);
                for &q in &g.qubits {
                    ready[q] = fence;
                }
            }
            GateKind::Measure if !opts.keep_measure => {}
            _ => {
                let layer = g.qubits.iter().map(|&q| ready[q]).max().unwrap_or(0);
                for &q in &g.qubits {
                    ready[q] = layer + 1;
                }
                if layers.len() <= layer {
                    layers.resize_with(layer + 1, Vec::new);
                }
                layers[layer].push(gates.len());
                gates.push(g.clone());
            }
        }
    }

    SlicedCircuit {
        circuit: Circuit { name: c.name.clone(), num_qubits: c.num_qubits, gates },
        layers,
    }
}
