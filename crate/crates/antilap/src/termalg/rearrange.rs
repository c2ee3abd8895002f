//! Operator rearrangement identities.
//!
//! Each identity states that a first-order weight operator conjugates one
//! radial operator into another, e.g. `r d_r` carries the `(r, z)` Laplacian
//! onto the r-anti operator. The checks return the exact difference
//! `LHS - RHS`, which must canonicalize to the empty sum for every term sum;
//! they hold identically, not just on solutions.

use super::{apply_operator, apply_operator_x, transform_x, OperatorKind, TermSum1D, TermSum2D};
use crate::{domain_err, DomainError};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Identity catalogue. The first four live in the `x` frame, the rest in
/// the `(r, z)` frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RearrangementId {
    /// `(1/x) d_x (Laplace_x^(n-2) F) = Laplace_x^(n) ((1/x) d_x F)`
    LaplaceXDimStep,
    /// Same step written with the normalized lift transform.
    TransformXDimStep,
    /// `x^(n-1) d_x (Laplace_x F) = Anti_x (x^(n-1) d_x F)`
    LaplaceToAntiX,
    /// `x^(1-n) d_x (Anti_x F) = Laplace_x (x^(1-n) d_x F)`
    AntiToLaplaceX,
    /// `r d_r (Laplace_rz F) = Anti_r (r d_r F)`
    LaplaceToAntiR,
    /// `z^(n-3) d_z (Laplace_rz F) = Anti_z (z^(n-3) d_z F)`
    LaplaceToAntiZ,
    /// `z^(n-3) d_z (Anti_r F) = Anti_double (z^(n-3) d_z F)`
    AntiRToAntiDouble,
    /// `z^(3-n) d_z (Anti_z F) = Laplace_rz (z^(3-n) d_z F)`
    AntiZToLaplace,
}

impl RearrangementId {
    pub const ALL: [RearrangementId; 8] = [
        RearrangementId::LaplaceXDimStep,
        RearrangementId::TransformXDimStep,
        RearrangementId::LaplaceToAntiX,
        RearrangementId::AntiToLaplaceX,
        RearrangementId::LaplaceToAntiR,
        RearrangementId::LaplaceToAntiZ,
        RearrangementId::AntiRToAntiDouble,
        RearrangementId::AntiZToLaplace,
    ];

    pub fn is_rz_frame(self) -> bool {
        matches!(
            self,
            RearrangementId::LaplaceToAntiR
                | RearrangementId::LaplaceToAntiZ
                | RearrangementId::AntiRToAntiDouble
                | RearrangementId::AntiZToLaplace
        )
    }

    pub fn parse(s: &str) -> Result<Self, DomainError> {
        match s {
            "laplace-x-dim-step" => Ok(RearrangementId::LaplaceXDimStep),
            "transform-x-dim-step" => Ok(RearrangementId::TransformXDimStep),
            "laplace-to-anti-x" => Ok(RearrangementId::LaplaceToAntiX),
            "anti-to-laplace-x" => Ok(RearrangementId::AntiToLaplaceX),
            "laplace-to-anti-r" => Ok(RearrangementId::LaplaceToAntiR),
            "laplace-to-anti-z" => Ok(RearrangementId::LaplaceToAntiZ),
            "anti-r-to-anti-double" => Ok(RearrangementId::AntiRToAntiDouble),
            "anti-z-to-laplace" => Ok(RearrangementId::AntiZToLaplace),
            other => domain_err(format!("unknown rearrangement identity {other:?}")),
        }
    }
}

impl fmt::Display for RearrangementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RearrangementId::LaplaceXDimStep => "laplace-x-dim-step",
            RearrangementId::TransformXDimStep => "transform-x-dim-step",
            RearrangementId::LaplaceToAntiX => "laplace-to-anti-x",
            RearrangementId::AntiToLaplaceX => "anti-to-laplace-x",
            RearrangementId::LaplaceToAntiR => "laplace-to-anti-r",
            RearrangementId::LaplaceToAntiZ => "laplace-to-anti-z",
            RearrangementId::AntiRToAntiDouble => "anti-r-to-anti-double",
            RearrangementId::AntiZToLaplace => "anti-z-to-laplace",
        };
        write!(f, "{s}")
    }
}

/// Exact difference `LHS - RHS` of an `(r, z)`-frame identity applied to
/// `ts` in dimension `n >= 3`. A correct implementation returns the empty
/// sum for every input.
pub fn check_rearrangement(
    id: RearrangementId,
    n: u32,
    ts: &TermSum2D,
) -> Result<TermSum2D, DomainError> {
    if !id.is_rz_frame() {
        return domain_err(format!("identity {id} lives in the x frame"));
    }
    if n < 3 {
        return domain_err(format!("(r, z) rearrangements need n >= 3, got {n}"));
    }
    let s = n as i32 - 3;
    use OperatorKind::*;
    let (lhs, rhs) = match id {
        RearrangementId::LaplaceToAntiR => {
            let lhs = apply_operator(LaplaceRz, n, ts)?.d_r().mul_powers(1, 0, 0);
            let rhs = apply_operator(AntiR, n, &ts.d_r().mul_powers(1, 0, 0))?;
            (lhs, rhs)
        }
        RearrangementId::LaplaceToAntiZ => {
            let lhs = apply_operator(LaplaceRz, n, ts)?.d_z().mul_powers(0, s, 0);
            let rhs = apply_operator(AntiZ, n, &ts.d_z().mul_powers(0, s, 0))?;
            (lhs, rhs)
        }
        RearrangementId::AntiRToAntiDouble => {
            let lhs = apply_operator(AntiR, n, ts)?.d_z().mul_powers(0, s, 0);
            let rhs = apply_operator(AntiDouble, n, &ts.d_z().mul_powers(0, s, 0))?;
            (lhs, rhs)
        }
        RearrangementId::AntiZToLaplace => {
            let lhs = apply_operator(AntiZ, n, ts)?.d_z().mul_powers(0, -s, 0);
            let rhs = apply_operator(LaplaceRz, n, &ts.d_z().mul_powers(0, -s, 0))?;
            (lhs, rhs)
        }
        _ => unreachable!(),
    };
    Ok(lhs.sub(&rhs))
}

/// Exact difference `LHS - RHS` of an `x`-frame identity applied to `ts` in
/// dimension `n >= 3` (the dimension-step identities relate `n - 2` to `n`).
pub fn check_rearrangement_x(
    id: RearrangementId,
    n: u32,
    ts: &TermSum1D,
) -> Result<TermSum1D, DomainError> {
    if id.is_rz_frame() {
        return domain_err(format!("identity {id} lives in the (r, z) frame"));
    }
    if n < 3 {
        return domain_err(format!("x-frame rearrangements need n >= 3, got {n}"));
    }
    use OperatorKind::*;
    let (lhs, rhs) = match id {
        RearrangementId::LaplaceXDimStep => {
            let low = apply_operator_x(LaplaceX, n - 2, ts)?;
            let lhs = low.d_x().mul_power(-1);
            let rhs = apply_operator_x(LaplaceX, n, &ts.d_x().mul_power(-1))?;
            (lhs, rhs)
        }
        RearrangementId::TransformXDimStep => {
            let low = apply_operator_x(LaplaceX, n - 2, ts)?;
            let lhs = transform_x(n, &low)?;
            let rhs = apply_operator_x(LaplaceX, n, &transform_x(n, ts)?)?;
            (lhs, rhs)
        }
        RearrangementId::LaplaceToAntiX => {
            let w = n as i32 - 1;
            let lhs = apply_operator_x(LaplaceX, n, ts)?.d_x().mul_power(w);
            let rhs = apply_operator_x(AntiX, n, &ts.d_x().mul_power(w))?;
            (lhs, rhs)
        }
        RearrangementId::AntiToLaplaceX => {
            let w = 1 - n as i32;
            let lhs = apply_operator_x(AntiX, n, ts)?.d_x().mul_power(w);
            let rhs = apply_operator_x(LaplaceX, n, &ts.d_x().mul_power(w))?;
            (lhs, rhs)
        }
        _ => unreachable!(),
    };
    Ok(lhs.sub(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::termalg::{random_termsum_1d, random_termsum_2d};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identities_cancel_on_random_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for id in RearrangementId::ALL {
            for n in 3u32..=9 {
                for trial in 0..10 {
                    if id.is_rz_frame() {
                        let ts = random_termsum_2d(&mut rng, 4);
                        let diff = check_rearrangement(id, n, &ts).unwrap();
                        assert!(
                            diff.is_zero(),
                            "{id} failed at n = {n}, trial {trial}: F = {ts}, diff = {diff}"
                        );
                    } else {
                        let ts = random_termsum_1d(&mut rng, 4);
                        let diff = check_rearrangement_x(id, n, &ts).unwrap();
                        assert!(
                            diff.is_zero(),
                            "{id} failed at n = {n}, trial {trial}: F = {ts}, diff = {diff}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn frame_mismatch_rejected() {
        let ts2 = random_termsum_2d(&mut ChaCha8Rng::seed_from_u64(1), 3);
        assert!(check_rearrangement(RearrangementId::LaplaceToAntiX, 5, &ts2).is_err());
        let ts1 = random_termsum_1d(&mut ChaCha8Rng::seed_from_u64(1), 3);
        assert!(check_rearrangement_x(RearrangementId::LaplaceToAntiR, 5, &ts1).is_err());
    }
}
