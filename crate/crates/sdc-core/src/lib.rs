//! Simulation library for superdense coding of quantum states.
//!
//! Two parties share maximal entanglement. To hand over a pure state the
//! sender, who knows the state's classical description, applies its
//! encoding matrix to her half of the entangled pair through a
//! two-outcome generalized measurement and transmits her register: a
//! 2l-qubit state travels as roughly l qubits. The measurement succeeds
//! with probability 1/(1 + eps), where eps measures how far the state is
//! from maximally entangled. Shared random bits remove the state
//! dependence: a pre-agreed ensemble of Haar isometries flattens any
//! target with high probability, and the receiver undoes the chosen
//! isometry afterwards. A third variant shares states that remain
//! entangled with a register the sender keeps.
//!
//! The crate is organized as:
//!
//! * [`linalg`] — seedable complex dense linear algebra (Haar sampling,
//!   partial traces, operator norms, fidelity);
//! * [`states`] — pure states, the encoding-matrix correspondence, and
//!   entanglement flatness;
//! * [`protocols`] — the exact, randomized, and entangled-sharing
//!   protocols as runnable party-level simulations;
//! * [`concentration`] — tail-bound formulas with log-space twins, and
//!   Monte Carlo experiments probing flatness concentration;
//! * [`resources`] — closed-form qubit/ebit/shared-bit accounting.
//!
//! Everything stochastic draws from a [`RandomStream`] keyed by
//! `(seed, stream)`, making every experiment bit-for-bit reproducible.

pub mod concentration;
pub mod error;
pub mod linalg;
pub mod protocols;
pub mod resources;
pub mod rng;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, DensityMatrix};
pub use protocols::{
    EntangledSharing, ExactPreparation, IsometryEnsemble, KrausPair, ProtocolOutcome,
    RandomizedPreparation, ResourceTally,
};
pub use rng::RandomStream;
pub use states::{EncodingMatrix, PureState};
