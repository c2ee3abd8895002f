//! Exact symbolic term sums and the operators acting on them.
//!
//! Two frames are supported. The `(r, z)` frame uses monomials
//! `c * r^i * z^p * Rbar^t * ln(1/Rbar)^e * ln(1/r)^f` with
//! `Rbar = sqrt(r^2 + z^2)` and `e, f in {0, 1}`; the single-radius `x`
//! frame uses `c * x^i * ln(1/x)^e`. Coefficients are exact rationals, so
//! operator identities can be checked by canonicalizing a difference to the
//! empty sum rather than by sampling.
//!
//! The `(r, z)` basis carries one algebraic relation, `r^2 = Rbar^2 - z^2`.
//! Canonical forms eagerly reduce positive even powers of `r`; sums whose
//! terms carry negative `r` powers (these arise inside operator images, e.g.
//! the radial Laplacian of `r` is `1/r`) are normalized by factoring out the
//! smallest such power. See [`term2d::TermSum2D`].

mod rearrange;
mod term1d;
mod term2d;

pub use rearrange::{check_rearrangement, check_rearrangement_x, RearrangementId};
pub use term1d::{Monomial1D, TermSum1D};
pub use term2d::{EvalError, Monomial2D, TermSum2D};

use crate::coeff::{rat, rat_int};
use crate::{domain_err, DomainError};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// The six operators. Four act in the `(r, z)` frame; the trailing two act
/// in the single-radius `x` frame.
///
/// With `s = n - 3` (the power in the `z` weight) the `(r, z)` forms are:
///
/// * `LaplaceRz`  : `d_rr + (1/r) d_r + d_zz + (s/z) d_z`
/// * `AntiR`      : `d_rr - (1/r) d_r + d_zz + (s/z) d_z`
/// * `AntiZ`      : `d_rr + (1/r) d_r + d_zz - (s/z) d_z`
/// * `AntiDouble` : `d_rr - (1/r) d_r + d_zz - (s/z) d_z`
///
/// The `z` part is present only for `n >= 3`; at `n = 2` all four reduce to
/// their pure `r` parts. In the `x` frame:
///
/// * `LaplaceX` : `d_xx + ((n-1)/x) d_x`
/// * `AntiX`    : `d_xx - ((n-1)/x) d_x`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    LaplaceRz,
    AntiR,
    AntiZ,
    AntiDouble,
    LaplaceX,
    AntiX,
}

impl OperatorKind {
    pub fn is_rz_frame(self) -> bool {
        !matches!(self, OperatorKind::LaplaceX | OperatorKind::AntiX)
    }

    pub fn parse(s: &str) -> Result<Self, DomainError> {
        match s {
            "laplace-rz" => Ok(OperatorKind::LaplaceRz),
            "anti-r" => Ok(OperatorKind::AntiR),
            "anti-z" => Ok(OperatorKind::AntiZ),
            "anti-double" => Ok(OperatorKind::AntiDouble),
            "laplace-x" => Ok(OperatorKind::LaplaceX),
            "anti-x" => Ok(OperatorKind::AntiX),
            other => domain_err(format!("unknown operator {other:?}")),
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OperatorKind::LaplaceRz => "laplace-rz",
            OperatorKind::AntiR => "anti-r",
            OperatorKind::AntiZ => "anti-z",
            OperatorKind::AntiDouble => "anti-double",
            OperatorKind::LaplaceX => "laplace-x",
            OperatorKind::AntiX => "anti-x",
        };
        write!(f, "{s}")
    }
}

/// Apply an `(r, z)`-frame operator of dimension `n >= 2` to a term sum.
pub fn apply_operator(
    kind: OperatorKind,
    n: u32,
    ts: &TermSum2D,
) -> Result<TermSum2D, DomainError> {
    if !kind.is_rz_frame() {
        return domain_err(format!(
            "operator {kind} acts in the x frame, not on an (r, z) term sum"
        ));
    }
    if n < 2 {
        return domain_err(format!("operator dimension must be >= 2, got {n}"));
    }
    let r_sign = match kind {
        OperatorKind::LaplaceRz | OperatorKind::AntiZ => 1,
        _ => -1,
    };
    let z_sign = match kind {
        OperatorKind::LaplaceRz | OperatorKind::AntiR => 1,
        _ => -1,
    };
    let dr = ts.d_r();
    let mut acc = dr.d_r();
    acc = acc.add(&dr.mul_powers(-1, 0, 0).scale(&rat_int(r_sign)));
    if n >= 3 {
        let dz = ts.d_z();
        acc = acc.add(&dz.d_z());
        let w = rat_int(z_sign * (n as i64 - 3));
        acc = acc.add(&dz.mul_powers(0, -1, 0).scale(&w));
    }
    Ok(acc)
}

/// Apply an `x`-frame operator of dimension `n >= 2` to a 1-D term sum.
pub fn apply_operator_x(
    kind: OperatorKind,
    n: u32,
    ts: &TermSum1D,
) -> Result<TermSum1D, DomainError> {
    if kind.is_rz_frame() {
        return domain_err(format!(
            "operator {kind} acts in the (r, z) frame, not on an x term sum"
        ));
    }
    if n < 1 {
        return domain_err(format!("operator dimension must be >= 1, got {n}"));
    }
    let sign = match kind {
        OperatorKind::LaplaceX => 1,
        _ => -1,
    };
    let dx = ts.d_x();
    let first = dx.mul_power(-1).scale(&rat_int(sign * (n as i64 - 1)));
    Ok(dx.d_x().add(&first))
}

/// Dimension-raising transform for the Laplace-frame point family:
/// `F -> -(1/(n-4)) (1/z) d_z F`, defined for `n >= 5`.
///
/// Applied to the dimension `n - 2` solution it yields the dimension `n`
/// one; the even chain starts at `n = 4` (the `n = 2` log solution is not a
/// valid seed because the transform is undefined at `n = 4`).
pub fn transform_fl(n: u32, ts: &TermSum2D) -> Result<TermSum2D, DomainError> {
    if n < 5 {
        return domain_err(format!("Laplace-frame lift needs n >= 5, got {n}"));
    }
    let scale = rat(-1, n as i64 - 4);
    Ok(ts.d_z().mul_powers(0, -1, 0).scale(&scale))
}

/// Dimension-raising transform for the anti-z point family:
/// `F -> -(z^(n-3)/(n-4)) d_z (z^(4-n) F)`, defined for `n >= 5`.
pub fn transform_fa(n: u32, ts: &TermSum2D) -> Result<TermSum2D, DomainError> {
    if n < 5 {
        return domain_err(format!("anti-frame lift needs n >= 5, got {n}"));
    }
    let scale = rat(-1, n as i64 - 4);
    Ok(ts
        .mul_powers(0, 4 - n as i32, 0)
        .d_z()
        .mul_powers(0, n as i32 - 3, 0)
        .scale(&scale))
}

/// Point solution of the `x`-frame Laplacian: `x^(2-n)/(n-2)` for `n > 2`,
/// `ln(1/x)` at `n = 2`.
pub fn phi_x(n: u32) -> Result<TermSum1D, DomainError> {
    if n < 2 {
        return domain_err(format!("x-frame point solution needs n >= 2, got {n}"));
    }
    if n == 2 {
        Ok(TermSum1D::new(vec![Monomial1D {
            coeff: rat_int(1),
            x_pow: 0,
            log: 1,
        }]))
    } else {
        Ok(TermSum1D::new(vec![Monomial1D {
            coeff: rat(1, n as i64 - 2),
            x_pow: 2 - n as i32,
            log: 0,
        }]))
    }
}

/// Dimension-raising transform in the `x` frame:
/// `F -> -(1/(n-2)) (1/x) d_x F`, defined for `n >= 3`; for `n >= 4` it maps
/// the dimension `n - 2` point solution to the dimension `n` one (including
/// `n = 4` from the log seed).
pub fn transform_x(n: u32, ts: &TermSum1D) -> Result<TermSum1D, DomainError> {
    if n < 3 {
        return domain_err(format!("x-frame lift needs n >= 3, got {n}"));
    }
    let scale = rat(-1, n as i64 - 2);
    Ok(ts.d_x().mul_power(-1).scale(&scale))
}

/// Random `(r, z)` term sum for identity fuzzing. Exponents stay in ranges
/// where every rearrangement weight keeps terms representable: `r` power in
/// {0, 1}, `z` power in [-2, 4], `Rbar` power in [-6, 1]; about one term in
/// ten carries `ln(1/Rbar)` and one in twenty `ln(1/r)`.
pub fn random_termsum_2d(rng: &mut impl Rng, max_terms: usize) -> TermSum2D {
    let count = rng.gen_range(1..=max_terms.max(1));
    let mut terms = Vec::with_capacity(count);
    for _ in 0..count {
        let num = loop {
            let v = rng.gen_range(-9i64..=9);
            if v != 0 {
                break v;
            }
        };
        let den = rng.gen_range(1i64..=9);
        terms.push(Monomial2D {
            coeff: rat(num, den),
            r_pow: rng.gen_range(0..=1),
            z_pow: rng.gen_range(-2..=4),
            rbar_pow: rng.gen_range(-6..=1),
            log_rbar: u8::from(rng.gen_range(0..10) == 0),
            log_r: u8::from(rng.gen_range(0..20) == 0),
        });
    }
    TermSum2D::new(terms)
}

/// Random `x` term sum for identity fuzzing: powers in [-5, 3], one term in
/// ten carries `ln(1/x)`.
pub fn random_termsum_1d(rng: &mut impl Rng, max_terms: usize) -> TermSum1D {
    let count = rng.gen_range(1..=max_terms.max(1));
    let mut terms = Vec::with_capacity(count);
    for _ in 0..count {
        let num = loop {
            let v = rng.gen_range(-9i64..=9);
            if v != 0 {
                break v;
            }
        };
        let den = rng.gen_range(1i64..=9);
        terms.push(Monomial1D {
            coeff: rat(num, den),
            x_pow: rng.gen_range(-5..=3),
            log: u8::from(rng.gen_range(0..10) == 0),
        });
    }
    TermSum1D::new(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, Rational};

    fn term(c: Rational, r: i32, z: i32, rbar: i32) -> Monomial2D {
        Monomial2D {
            coeff: c,
            r_pow: r,
            z_pow: z,
            rbar_pow: rbar,
            log_rbar: 0,
            log_r: 0,
        }
    }

    #[test]
    fn laplacian_of_inverse_rbar_in_3d_vanishes() {
        // 1/Rbar is the point solution in n = 3.
        let ts = TermSum2D::new(vec![term(rat(1, 1), 0, 0, -1)]);
        let out = apply_operator(OperatorKind::LaplaceRz, 3, &ts).unwrap();
        assert!(out.is_zero(), "got {out}");
    }

    #[test]
    fn anti_z_of_log_matches_closed_form() {
        // AntiZ in dimension n of ln(1/Rbar) is (n-4)/Rbar^2.
        for n in 4u32..=12 {
            let ts = TermSum2D::new(vec![Monomial2D {
                coeff: rat(1, 1),
                r_pow: 0,
                z_pow: 0,
                rbar_pow: 0,
                log_rbar: 1,
                log_r: 0,
            }]);
            let out = apply_operator(OperatorKind::AntiZ, n, &ts).unwrap();
            let want = TermSum2D::new(vec![term(rat(n as i64 - 4, 1), 0, 0, -2)]);
            assert_eq!(out, want, "n = {n}");
        }
    }

    #[test]
    fn x_frame_point_solutions_annihilate() {
        for n in 2u32..=12 {
            let phi = phi_x(n).unwrap();
            let out = apply_operator_x(OperatorKind::LaplaceX, n, &phi).unwrap();
            assert!(out.is_zero(), "n = {n}, got {out}");
        }
    }

    #[test]
    fn x_frame_lift_steps_through_dimensions() {
        for n in 4u32..=12 {
            let lifted = transform_x(n, &phi_x(n - 2).unwrap()).unwrap();
            assert_eq!(lifted, phi_x(n).unwrap(), "n = {n}");
        }
        assert!(transform_x(2, &phi_x(2).unwrap()).is_err());
    }

    #[test]
    fn laplace_lift_reproduces_inverse_cube() {
        // Lifting 1/Rbar from n = 3 to n = 5 gives Rbar^-3.
        let base = TermSum2D::new(vec![term(rat(1, 1), 0, 0, -1)]);
        let lifted = transform_fl(5, &base).unwrap();
        let want = TermSum2D::new(vec![term(rat(1, 1), 0, 0, -3)]);
        assert_eq!(lifted, want);
        assert!(transform_fl(4, &base).is_err());
    }

    #[test]
    fn anti_lift_from_log_seed() {
        // Lifting ln(1/Rbar) from n = 4 to n = 6 gives ln(1/Rbar) + z^2/(2 Rbar^2).
        let base = TermSum2D::new(vec![Monomial2D {
            coeff: rat(1, 1),
            r_pow: 0,
            z_pow: 0,
            rbar_pow: 0,
            log_rbar: 1,
            log_r: 0,
        }]);
        let lifted = transform_fa(6, &base).unwrap();
        let want = TermSum2D::new(vec![
            Monomial2D {
                coeff: rat(1, 1),
                r_pow: 0,
                z_pow: 0,
                rbar_pow: 0,
                log_rbar: 1,
                log_r: 0,
            },
            term(rat(1, 2), 0, 2, -2),
        ]);
        assert_eq!(lifted, want);
    }

    #[test]
    fn frame_mismatch_is_rejected() {
        let ts = TermSum2D::new(vec![term(rat(1, 1), 0, 0, -1)]);
        assert!(apply_operator(OperatorKind::LaplaceX, 3, &ts).is_err());
        let tx = phi_x(3).unwrap();
        assert!(apply_operator_x(OperatorKind::LaplaceRz, 3, &tx).is_err());
    }
}
