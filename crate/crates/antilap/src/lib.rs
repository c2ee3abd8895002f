//! Exact and numerical tools for radial anti-Laplacian operators in n
//! dimensions and the solution families they annihilate.
//!
//! The operators act in an `(r, z)` half-plane frame obtained by splitting
//! `R^n = R^2 x R^(n-2)` and keeping the two radii, or in a single radial
//! coordinate `x`. Alongside the ordinary radial Laplacian, three "anti"
//! variants appear in which first-order terms enter with flipped sign; their
//! fundamental solutions are exact rational combinations of powers of `r`,
//! `z` and `Rbar = sqrt(r^2 + z^2)`, with ring-source counterparts given by
//! one-dimensional integrals over the ring angle.
//!
//! Module map:
//!
//! * [`coeff`] - exact coefficient families (double factorials, the odd and
//!   even coefficient triangles, their sums, sphere areas).
//! * [`termalg`] - exact symbolic term sums over the `(r, z, Rbar, log)`
//!   basis, derivatives, the six operators, dimension-shift transforms, and
//!   operator rearrangement identities.
//! * [`solutions`] - construction of the point and ring solution families,
//!   their distributional sources, and evaluation.
//! * [`numerics`] - adaptive quadrature, finite-difference operator
//!   residuals, integral and structural identity checks, distributional
//!   pairings via excised surface integrals, and asymptotic slope fits.
//! * [`suites`] - named verification suites shared by the command line
//!   interface and the acceptance tests.
//! * [`cli`] - the command line front end used by the `antilap` binary.

use std::fmt;

pub mod cli;
pub mod coeff;
pub mod numerics;
pub mod solutions;
pub mod suites;
pub mod termalg;

/// Domain violation: a query outside an operation's documented range
/// (wrong parity, dimension too small, frame mismatch, malformed input).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainError {
    pub message: String,
}

impl DomainError {
    pub fn new(message: impl Into<String>) -> Self {
        DomainError {
            message: message.into(),
        }
    }
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "domain error: {}", self.message)
    }
}

impl std::error::Error for DomainError {}

/// Shorthand used across the crate for `Err(DomainError::new(msg))`.
pub(crate) fn domain_err<T>(message: impl Into<String>) -> Result<T, DomainError> {
    Err(DomainError::new(message))
}
