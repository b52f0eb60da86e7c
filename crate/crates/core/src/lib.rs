//! Exact simulation and statistical verification of a quantum solver for the
//! noisy linear problem (NLP/LWE) over a prime field, together with the
//! random-unitary-channel machinery used to shrink its quantum sample size.
//!
//! The crate has three layers:
//!
//! - exact arithmetic and state simulation: [`fields`] (F_q vectors, centered
//!   modular distance), [`qstate`] (dense qudit statevectors, QFT over Z_q,
//!   Born-rule measurement);
//! - the solver pipeline: [`nlp`] (quantum samples, the Bernstein-Vazirani
//!   round, the test-candidate filter, closed-form success/failure bounds) and
//!   [`eqram`] (the net-point reduction to `m* = ceil(sqrt(d ln d))` registers
//!   and the reduced solver);
//! - channel verification: [`ruc`] (Haar ensembles, `Λ(ρ) = (1/m) Σ U ρ U†`,
//!   Schatten norms, the randomizing-cardinality formula), [`net`] (greedy
//!   ε-nets on pure states) and [`concentration`] (expectation and tail bounds
//!   checked by Monte Carlo).
//!
//! All floating-point math is generic over a [`Real`] scalar; `f64` aliases
//! for the main types live at the crate root. Field arithmetic is exact
//! (`u64` residues). Every randomized routine takes either an explicit RNG or
//! a `(seed, label, index)` substream from [`rng::substream`], so runs are
//! reproducible and safe to parallelize.

pub mod concentration;
pub mod eqram;
pub mod error;
pub mod fields;
pub mod net;
pub mod nlp;
pub mod qstate;
pub mod rng;
pub mod ruc;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::{Complex, Real};

/// Hard cap on dense statevector length (`q^(d+1)` amplitudes).
pub const MAX_AMPLITUDES: u128 = 1 << 22;

// Concrete f64 aliases for the main domain types.
pub type StateVector64 = qstate::StateVector<f64>;
pub type PureState64 = qstate::PureState<f64>;
pub type SampleState64 = nlp::SampleState<f64>;
pub type NlpRunReport64 = nlp::NlpRunReport<f64>;
