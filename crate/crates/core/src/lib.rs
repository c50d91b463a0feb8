//! Coherence lifetimes of a finite-sized atomic Bose-Einstein condensate.
//!
//! The library computes how long a condensate keeps a definite order-parameter
//! phase before number-dependent phase dispersion destroys it:
//!
//! * [`states`] builds truncated Fock-basis representations of the initial
//!   states (coherent, squeezed-coherent, displaced number states, and
//!   Boltzmann-weighted mixtures of them).
//! * [`dynamics`] evolves them under the single-mode interaction Hamiltonian,
//!   producing order-parameter decay series, Husimi Q-function snapshots, and
//!   collapse/revival times.
//! * [`thinspec`] implements the thin-spectrum decoherence laws for the
//!   reduced density matrix of a two-state system and of Bogoliubov
//!   quasi-particle excitations, each paired with a brute-force discrete-sum
//!   oracle.
//! * [`specfun`] holds the numerically stable special-function kernels
//!   (log-factorial, Hermite, generalized Laguerre) the amplitude formulas
//!   consume.
//!
//! All constructors and evaluators are pure functions of their arguments; the
//! produced values are immutable and freely shareable across threads.

// Validation guards are written as `!(x > 0.0)` so that NaN inputs are
// rejected; the clippy-suggested `x <= 0.0` would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
mod kahan;
pub mod dynamics;
pub mod specfun;
pub mod states;
pub mod thinspec;

pub use dynamics::{DecaySeries, PhysicalParams, QField, QGrid, Spectrum};
pub use states::{FockVector, NumberEnsemble, SqueezeSpec};
pub use thinspec::{CondensateLevels, OffDiagSeries, ThinSpectrumModel};
