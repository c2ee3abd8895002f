//! Angular integral identities satisfied by the ring kernels.
//!
//! Each identity is an integral over the ring angle `alpha` in `[0, pi]`
//! whose exact value is zero; the integrand mixes the kernel
//! `R(alpha) = sqrt(r^2 + a^2 - 2 a r cos(alpha) + z^2)` with its first two
//! `r`-derivative combinations. They are what makes the cos-weighted ring
//! fields satisfy the same operator as their point kernels.

use crate::numerics::quad::{integrate, QuadratureSpec};
use crate::{domain_err, DomainError};
use serde::{Deserialize, Serialize};
use std::fmt;

/// An angular identity whose exact value is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum IntegralIdentity {
    /// `int_0^pi cos(a) [R^(2-k) - (k-2) a r cos(a) R^-k
    ///  + k (k-2) a^2 r^2 sin^2(a) R^-(k+2)] da = 0` for odd `k >= 3`.
    CosPower { k: u32 },
    /// The logarithmic limit of the power family:
    /// `int_0^pi cos(a) [ln(1/R) - a r cos(a) R^-2 + 2 a^2 r^2 sin^2(a) R^-4] da = 0`.
    CosLog,
    /// `CosLog` restricted to the source plane `z = 0`, where `R` becomes
    /// the in-plane distance; needs `r != a`.
    CosLogPlanar,
    /// The plain antiderivative identity
    /// `int_0^pi [cos(a) R^-k - k a r sin^2(a) R^-(k+2)] da = 0`
    /// (the integrand is the alpha-derivative of `sin(a) R^-k`).
    PlainPower { k: u32 },
}

impl fmt::Display for IntegralIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegralIdentity::CosPower { k } => write!(f, "cos-power-{k}"),
            IntegralIdentity::CosLog => write!(f, "cos-log"),
            IntegralIdentity::CosLogPlanar => write!(f, "cos-log-planar"),
            IntegralIdentity::PlainPower { k } => write!(f, "plain-power-{k}"),
        }
    }
}

/// Outcome of evaluating one identity at one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: IntegralIdentity,
    pub r: f64,
    pub z: f64,
    pub a: f64,
    pub value: f64,
    pub err_estimate: f64,
    pub pass: bool,
    pub tolerance: f64,
}

/// Evaluate `identity` at `(r, z, a)` and compare `|value|` against
/// `tolerance`. The planar identity ignores `z`.
pub fn integral_identity_check(
    identity: IntegralIdentity,
    r: f64,
    z: f64,
    a: f64,
    tolerance: f64,
    quad: &QuadratureSpec,
) -> Result<IdentityCheck, DomainError> {
    if !(r > 0.0) || !(a > 0.0) {
        return domain_err(format!("identity parameters need r > 0 and a > 0, got r = {r}, a = {a}"));
    }
    if !(tolerance > 0.0) {
        return domain_err(format!("identity tolerance must be positive, got {tolerance}"));
    }
    match identity {
        IntegralIdentity::CosPower { k } | IntegralIdentity::PlainPower { k } => {
            if k < 3 || k % 2 == 0 {
                return domain_err(format!("power identities need odd k >= 3, got {k}"));
            }
        }
        _ => {}
    }
    let planar = identity == IntegralIdentity::CosLogPlanar;
    let z_eff = if planar { 0.0 } else { z };
    if r == a && z_eff == 0.0 {
        return domain_err(format!(
            "kernel is singular at (r, z) = ({r}, {z_eff}) on the ring a = {a}"
        ));
    }
    let mut f = |alpha: f64| {
        let (s, c) = alpha.sin_cos();
        let rr2 = r * r + a * a - 2.0 * a * r * c + z_eff * z_eff;
        let rr = rr2.sqrt();
        let ar = a * r;
        match identity {
            IntegralIdentity::CosPower { k } => {
                let kf = k as f64;
                c * (rr.powi(2 - k as i32) - (kf - 2.0) * ar * c * rr.powi(-(k as i32))
                    + kf * (kf - 2.0) * ar * ar * s * s * rr.powi(-(k as i32 + 2)))
            }
            IntegralIdentity::CosLog | IntegralIdentity::CosLogPlanar => {
                c * (-rr.ln() - ar * c / rr2 + 2.0 * ar * ar * s * s / (rr2 * rr2))
            }
            IntegralIdentity::PlainPower { k } => {
                let kf = k as f64;
                c * rr.powi(-(k as i32)) - kf * ar * s * s * rr.powi(-(k as i32 + 2))
            }
        }
    };
    let q = integrate(&mut f, 0.0, std::f64::consts::PI, quad)?;
    Ok(IdentityCheck {
        identity,
        r,
        z: z_eff,
        a,
        value: q.value,
        err_estimate: q.err_estimate,
        pass: q.value.abs() <= tolerance,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight() -> QuadratureSpec {
        QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            ..QuadratureSpec::default()
        }
    }

    #[test]
    fn identities_vanish_at_fixed_parameters() {
        let quad = tight();
        for k in [3u32, 5, 7, 9] {
            for (r, z, a) in [(0.8, 1.1, 1.2), (1.3, 0.9, 0.7)] {
                let c = integral_identity_check(
                    IntegralIdentity::CosPower { k },
                    r,
                    z,
                    a,
                    1e-9,
                    &quad,
                )
                .unwrap();
                assert!(c.pass, "cos-power k = {k} at ({r}, {z}, {a}): {}", c.value);
                let p = integral_identity_check(
                    IntegralIdentity::PlainPower { k },
                    r,
                    z,
                    a,
                    1e-9,
                    &quad,
                )
                .unwrap();
                assert!(p.pass, "plain-power k = {k}: {}", p.value);
            }
        }
        let c = integral_identity_check(IntegralIdentity::CosLog, 1.1, 0.8, 0.9, 1e-9, &quad)
            .unwrap();
        assert!(c.pass, "cos-log: {}", c.value);
        let p =
            integral_identity_check(IntegralIdentity::CosLogPlanar, 0.6, 7.0, 1.7, 1e-9, &quad)
                .unwrap();
        assert!(p.pass, "cos-log planar: {}", p.value);
        assert_eq!(p.z, 0.0);
    }

    #[test]
    fn wrong_integrand_is_caught() {
        // Drop the sin^2 correction term: the remainder does not vanish.
        let quad = tight();
        let mut f = |alpha: f64| {
            let c = alpha.cos();
            let rr2 = 1.0 + 0.81 - 2.0 * 0.9 * c + 0.5;
            c * (-rr2.sqrt().ln() - 0.9 * c / rr2)
        };
        let q = integrate(&mut f, 0.0, std::f64::consts::PI, &quad).unwrap();
        assert!(q.value.abs() > 1e-3, "got {}", q.value);
    }

    #[test]
    fn bad_parameters_are_rejected() {
        let quad = tight();
        assert!(integral_identity_check(
            IntegralIdentity::CosPower { k: 4 },
            1.0,
            1.0,
            1.0,
            1e-9,
            &quad
        )
        .is_err());
        assert!(integral_identity_check(
            IntegralIdentity::CosLogPlanar,
            1.0,
            0.0,
            1.0,
            1e-9,
            &quad
        )
        .is_err());
        assert!(
            integral_identity_check(IntegralIdentity::CosLog, -1.0, 1.0, 1.0, 1e-9, &quad)
                .is_err()
        );
    }
}
