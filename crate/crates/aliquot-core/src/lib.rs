//! Exact arithmetic-function censuses over integer ranges.
//!
//! The crate sieves the classical multiplicative functions (σ, τ, φ, μ, ω, Ω,
//! smallest/largest prime factor) over ranges of u64, and builds on that to
//! classify integers by how close σ(n) is to a rational multiple of n:
//!
//! * [`within`] — membership counts for |σ(n) − ℓn| < k(n) under exact
//!   threshold families (constant, nᵉ, linear, n/ln n), plus spike histograms
//!   of σ(n) − ℓn and exact equality counts σ(n) = ℓn + k.
//! * [`congruence`] — solutions of b·σ(n) ≡ k (mod n) split into the
//!   structured product form and the leftover sporadic solutions.
//! * [`nearperfect`] — representations of the abundance σ(n) − 2n as a sum of
//!   distinct proper divisors with bounded cardinality, censuses thereof, and
//!   the structural searches the density constants are built from.
//! * [`densities`] — empirical distribution of σ(n)/n, exact rational density
//!   constants, admissible-family machinery, and even perfect numbers.
//! * [`report`] — fixed report grids (census tables, spike ranks, constants)
//!   shared by the CLI and the acceptance tests, with CSV/JSON rendering.
//!
//! Everything numeric is exact: u64/u128 checked arithmetic, arbitrary
//! precision for power comparisons, and directed-rounding brackets for the
//! single transcendental threshold. Floats only appear in rendered output and
//! as a guarded fast path that always falls back to the exact comparison.
//!
//! Scans parallelize over segments with ordered reduction, so results are
//! identical regardless of thread count.

pub mod arith;
pub mod congruence;
pub mod densities;
pub mod error;
pub mod nearperfect;
pub mod report;
pub mod threshold;
pub mod within;

pub use error::{Error, Result};

/// Exact rational used for constants and census ratios.
pub type ExactRational = num::BigRational;
/// Arbitrary-precision unsigned integer used by exact power comparisons.
pub type BigUint = num::BigUint;
