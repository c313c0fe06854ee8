//! Executable form of the exact correspondence between a quantum harmonic
//! oscillator truncated to `N` levels and a classical particle hopping around
//! `N` sites of a circle.
//!
//! - [`hilbert`]: state vectors and the unitary basis change between energy
//!   levels and circle sites.
//! - [`operators`]: `a`, `a†`, `x`, `p`, `H` and their circle-site matrices.
//! - [`auxfun`]: the series `G`, `F`, `g`, `f`, the two-sheeted map and the
//!   zeros of the truncated `G_N`.
//! - [`dynamics`]: classical rotation, quantum phase evolution and the
//!   transport of Born weights between them.

// `!(x <= tol)` is deliberate: NaN has to fail range checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod dense;

pub mod auxfun;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod operators;

pub use error::{Error, Result};
pub use hilbert::{build_duality_map, to_energy, to_ontological, AngleGrid, BasisTag, DualityMap, StateVector};
pub use operators::{
    build_hamiltonian, build_ladder, build_xp, commutator, conjugate_to_ontological, ontological_element, LadderOp,
    OperatorMatrix, OscillatorConfig,
};
