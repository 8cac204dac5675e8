//! Two-qubit amplitude damping and entanglement fidelity.
//!
//! This crate models what happens to a shared Bell pair when one or both
//! qubits pass through an amplitude-damping channel. It provides:
//!
//! * [`qmat`]: dense complex matrices, a Hermitian eigensolver, and
//!   validated density matrices;
//! * [`channels`]: Kraus-operator channels, amplitude damping, and its
//!   extension to either half of a two-qubit pair;
//! * [`fidelity`]: the fully entangled fraction (spectral and sampling
//!   routes), closed-form fidelity curves, the improvement bound for
//!   repairing a damped pair by damping the other qubit, and Wootters
//!   concurrence;
//! * [`scenarios`]: end-to-end damping pipelines for each Bell source;
//! * [`cli`]: the command implementations behind the `qdamp` binary.
//!
//! The headline effect: a Φ-type Bell pair whose second qubit was damped
//! with strength above 3/4 can have its teleportation fidelity *increased*
//! by deliberately damping the first qubit as well.

pub mod channels;
pub mod cli;
pub mod fidelity;
pub mod qmat;
pub mod scenarios;
pub mod tol;

pub use channels::{adc, DampingStrength, KrausChannel, QubitSite};
pub use fidelity::{Fef, FefReport, TeleportClass};
pub use qmat::{ComplexMatrix, DensityMatrix, EigenDecomposition};
pub use scenarios::{bell, BellKind, DampingScenario, ScenarioResult};
