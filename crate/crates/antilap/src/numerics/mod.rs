//! Floating-point machinery: adaptive quadrature, finite-difference
//! stencils, integral-identity checks, structural operator relations,
//! excision-surface pairings, and asymptotic slope fits.

pub mod identities;
pub mod pairing;
pub mod quad;
pub mod slope;
pub mod stencil;
pub mod structural;

pub use identities::{integral_identity_check, IdentityCheck, IntegralIdentity};
pub use pairing::{pairing, BumpTrial, Extrapolation, PairingReport, PairingSpec, PairingStep};
pub use quad::{integrate, QuadMethod, QuadResult, QuadratureSpec};
pub use slope::{ring_point_gap, slope_fit, FitDirection, FitKind, SlopeReport, SlopeSpec};
pub use stencil::{fd_apply, fd_apply_x, residual_grid, ResidualReport, StencilSpec};
pub use structural::{structural_check, StructuralRelation, StructuralReport};

/// Render a float with 17 significant digits, enough to round-trip `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}
