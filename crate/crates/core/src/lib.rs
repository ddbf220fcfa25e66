//! Quantum-correlation toolkit for three qubits in independent zero-temperature
//! amplitude-damping reservoirs.
//!
//! The crate computes the Hilbert-Schmidt geometric discord of two- and
//! three-qubit states, a total quantum correlation built from three successive
//! one-qubit measurements, and the exact reduced dynamics of three
//! non-interacting qubits each coupled to its own Lorentzian reservoir.
//! Everything works on small fixed-size arrays; there are no external
//! linear-algebra dependencies.
//!
//! Basis convention, used everywhere: per qubit the excited state comes first,
//! so the 8-dimensional product basis is |111>, |110>, |101>, |100>, |011>,
//! |010>, |001>, |000> (qubit 1 is the leftmost factor). Time is the
//! dimensionless product of the spontaneous-emission rate and physical time.

pub mod discord;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod qstate;
pub mod states;

pub use discord::{DiscordReport, GridResolution, MeasurementAxis};
pub use dynamics::{ReservoirParams, SurvivalAmplitude};
pub use error::{Error, Result};
pub use experiments::{StateFamily, SweepConfig, VerifyConfig, VerifyReport};
pub use qstate::{
    BlochDecomposition, CoefficientTensor, DensityMatrix4, DensityMatrix8, Qubit, QubitPair,
};
pub use states::{GhzSpec, WSpec};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
