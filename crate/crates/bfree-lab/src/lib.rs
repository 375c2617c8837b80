//! Exact-arithmetic toolkit for simultaneous Diophantine approximation with
//! divisibility-constrained denominator sets.
//!
//! Everything numeric is exact unless a function explicitly says otherwise:
//! integers are arbitrary precision, fractions are reduced rationals, and
//! statements about irrational limits are three-valued (proven true, proven
//! false, or inconclusive at the available depth) rather than floating-point
//! guesses.
//!
//! The crate is organized as:
//!
//! - [`exact`] — modular powers, multiplicative orders (with a closed-form
//!   fast path for prime-power moduli), and exact comparison of a rational
//!   against `q^(-a/b)`.
//! - [`cf`] — continued fractions with cached convergents, error brackets
//!   valid for every continuation of a stored prefix, and a filter for the
//!   `|x - p/q| < 1/(2q^2)` convergent criterion.
//! - [`qfree`] — denominator sets closed under divisors (k-free integers,
//!   integers coprime to m, B-free integers, explicit tables), their prime
//!   support, exponent of convergence, and Euler-product partial sums.
//! - [`liouville`] — constructions of continued fractions whose convergent
//!   denominators alternate between powers of two fixed primes, together
//!   with verification and approximation-evidence reports.
//! - [`plane`] — rational hyperplanes: lifting, the bi-Lipschitz constant,
//!   the dependence threshold above which good approximations must satisfy
//!   the hyperplane's rational relation, and seeded scans for points whose
//!   good denominators avoid a target set.
//! - [`dimension`] — closed-form Hausdorff-dimension values for the three
//!   approximation families and a desk-scale estimator that locates the
//!   convergence abscissa of the natural cover series.
//! - [`cli`] — argument parsing and JSON/CSV emission for the `bfree-lab`
//!   binary.

pub mod cf;
pub mod cli;
mod decimal;
pub mod dimension;
pub mod exact;
pub mod liouville;
pub mod plane;
pub mod qfree;

pub use decimal::DecimalInterval;

/// Error type shared by every module in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument was outside the documented domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An index or range argument did not fit the data it addresses.
    #[error("range error: {0}")]
    Range(String),
    /// A brute-force search hit its configured iteration cap.
    #[error("iteration cap exceeded: {0}")]
    CapExceeded(String),
    /// Input text (CLI flag, spec literal, table file) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
    /// An identity the code relies on failed to hold; indicates a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
