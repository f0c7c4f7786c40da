//! Jacobi theta functions, Dedekind sums and the exact multiplier systems of
//! the theta transformation laws under `SL(2, Z)` and `Γ(2)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`exact`]: arbitrary-precision rationals, Jacobi symbols and unit phases
//!   `e^{πit}` stored as exact rationals `t mod 2`.
//! - [`theta`]: direct q-series evaluation of `θ₁ … θ₄` with certified truncation.
//! - [`dedekind`]: exact Dedekind sums and their reciprocity law.
//! - [`modular`]: `SL(2, Z)` matrices, the Möbius action and generator words.
//! - [`multipliers`]: `ε(A)`, `ε₁(A)`, the `Γ(2)` prefactors and the lemma identities.
//! - [`transform`]: the assembled transformation laws and argument-reduced evaluation.
//! - [`verify`]: the verification suites behind the `jtheta verify` command.
//!
//! Trial loops run on rayon when the `parallel` feature is enabled (the
//! default); [`exec::Exec`] selects the strategy at runtime.

pub mod dedekind;
pub mod error;
pub mod exact;
pub mod exec;
pub mod modular;
pub mod multipliers;
pub mod theta;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{Rational, UnitPhase};
pub use modular::{GeneratorWord, Letter, Sl2Matrix};
pub use theta::{LatticePoint, ThetaKind};

/// Complex numbers used throughout the numerical layers.
pub type Complex = num_complex::Complex64;
