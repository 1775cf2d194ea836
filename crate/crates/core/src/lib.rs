//! Compilation of quantum circuits onto a one-dimensional spin-qubit
//! shuttling bus.
//!
//! The pipeline reads or generates a circuit, lowers it to the native basis
//! `{rx, rz, h, cz}`, slices it into layers, chooses an initial placement of
//! virtual qubits on storage sites, and schedules shuttles and gates with one
//! of five strategies. Schedules carry the accumulated phase error of every
//! qubit and can be checked by an independent validator.
//!
//! ```
//! use spinbus_core::{benchgen, harness, ArchitectureSpec, ErrorModelParams, PlacementMode, Strategy};
//!
//! let c = benchgen::generate(&benchgen::BenchmarkSpec::new(benchgen::Family::Ghz, 4, 0)).unwrap();
//! let spec = ArchitectureSpec::new(4).unwrap();
//! let run = harness::compile(&c, &spec, &ErrorModelParams::default(), PlacementMode::Spectral, Strategy::MinReturn).unwrap();
//! assert!(spinbus_core::validate_schedule(&run.schedule).is_empty());
//! ```

pub mod architecture;
pub mod benchgen;
pub mod circuit;
pub mod error;
pub mod error_model;
pub mod harness;
pub mod mapper;
pub mod metrics;
pub mod optimize;
pub mod placement;
pub mod rng;

pub use architecture::{ArchitectureConfig, ArchitectureSpec, Location};
pub use circuit::qasm::{parse_qasm, parse_qasm_named, to_qasm, QasmError, QasmErrorKind};
pub use circuit::{decompose, slice, slice_with, Circuit, Gate, GateKind, SliceOptions, SlicedCircuit};
pub use error::{Error, Result};
pub use error_model::{optimal_velocity, phase_error, phase_error_terms, ErrorModelConfig, ErrorModelParams};
pub use harness::PlacementMode;
pub use mapper::{map, validate_schedule, LayoutState, Op, Rule, Schedule, Strategy, Violation};
pub use metrics::{compare, summarize, CompilationReport, Ratio};
pub use placement::{build_interaction_graph, random_placement, spectral_placement, InteractionGraph, Placement};
