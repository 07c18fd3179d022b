pub mod circuit;
pub mod decomp;
pub mod driver;
pub mod dense;
pub mod generate;
pub mod graph;
pub mod qasm;
pub mod random;
pub mod scalar;
pub mod simplify;
pub mod tensor;

pub use circuit::{Basis, Circuit, Gate, Pauli, StateSpec};
pub use decomp::StrategyKind;
pub use graph::{Diagram, EdgeKind, Phase, VertexKind, V};
pub use scalar::ExactScalar;
pub use driver::{amplitude, run_simulation, RunStats, SimOptions, SimResult};
