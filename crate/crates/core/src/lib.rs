//! Exact and stabilizer semantics for ZX diagrams and stabilizer circuits,
//! together with rule-based rewriting of both.

pub mod circuit;
pub mod circuit_rules;
pub mod derivation;
pub mod error;
pub mod matrix;
pub mod phase;
pub mod random;
pub mod rules;
pub mod scalar;
pub mod selftest;
pub mod stab;
pub mod zx;
pub mod zx_rules;

pub use circuit::{circuit_compose, circuit_tensor, circuit_to_matrix, parse_circuit, print_circuit, Circuit, GateKind, Instr};
pub use error::{Error, Result};
pub use matrix::{mat_mul, mat_proportional, mat_tensor, ExactMatrix, Ratio, Verdict, MAX_QUBITS};
pub use phase::Phase;
pub use scalar::CliffordScalar;
