//! Certification of EPR steerability for rank-2 (and rank-1) two-qubit states.
//!
//! The library builds the canonical five-angle/one-weight family of rank-2
//! density matrices, computes concurrence by two independent routes, tests
//! the M = M† separability criterion in Alice's measurement frame, and
//! evaluates the state-dependent steering inequality (classical bound,
//! quantum maxima, certificate) together with the 3-setting linear
//! inequality and the CHSH value. Every closed form is cross-checked
//! against brute-force oracles in [`oracle`] and the acceptance runner in
//! [`verify`].

pub mod cmat;
pub mod decomp;
pub mod entangle;
pub mod oracle;
pub mod par;
pub mod states;
pub mod steer;
pub mod verify;

pub use cmat::{CMat, C64, TOL_LINALG};
pub use decomp::{ConditionalDecomposition, MeasurementFrame, ResidualTriple};
pub use entangle::ConcurrenceReport;
pub use states::{PureState2Q, Rank2Params, SchmidtResult, SwapUnitary};
pub use steer::{LinearSteeringSettings, SteeringCertificate, SteeringVectors, Verdict};
