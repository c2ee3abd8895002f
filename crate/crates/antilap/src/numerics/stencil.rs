//! Finite-difference application of the radial operators to black-box
//! fields, and residual/convergence-order reports.

use crate::termalg::{EvalError, OperatorKind};
use crate::{domain_err, DomainError};
use serde::{Deserialize, Serialize};

/// Central-difference controls: step `h` and order (2 or 4).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StencilSpec {
    pub h: f64,
    pub order: u8,
}

impl Default for StencilSpec {
    fn default() -> Self {
        StencilSpec { h: 1e-3, order: 2 }
    }
}

impl StencilSpec {
    pub fn validate(&self) -> Result<(), DomainError> {
        if !(self.h > 0.0) || !self.h.is_finite() {
            return domain_err(format!("stencil step must be positive, got {}", self.h));
        }
        if self.order != 2 && self.order != 4 {
            return domain_err(format!("stencil order must be 2 or 4, got {}", self.order));
        }
        Ok(())
    }

    pub fn halved(&self) -> StencilSpec {
        StencilSpec {
            h: 0.5 * self.h,
            order: self.order,
        }
    }
}

/// A field sampled pointwise; evaluation may fail (singular point).
pub type Field2 <'a> = dyn FnMut(f64, f64) -> Result<f64, EvalError> + 'a;
/// One-coordinate field.
pub type Field1<'a> = dyn FnMut(f64) -> Result<f64, EvalError> + 'a;

/// First derivative along one axis by central differences.
fn d1(
    samples: &mut dyn FnMut(f64) -> Result<f64, EvalError>,
    h: f64,
    order: u8,
) -> Result<f64, EvalError> {
    if order == 2 {
        Ok((samples(h)? - samples(-h)?) / (2.0 * h))
    } else {
        Ok((-samples(2.0 * h)? + 8.0 * samples(h)? - 8.0 * samples(-h)? + samples(-2.0 * h)?)
            / (12.0 * h))
    }
}

/// Second derivative along one axis by central differences.
fn d2(
    samples: &mut dyn FnMut(f64) -> Result<f64, EvalError>,
    h: f64,
    order: u8,
) -> Result<f64, EvalError> {
    if order == 2 {
        Ok((samples(h)? - 2.0 * samples(0.0)? + samples(-h)?) / (h * h))
    } else {
        Ok((-samples(2.0 * h)? + 16.0 * samples(h)? - 30.0 * samples(0.0)?
            + 16.0 * samples(-h)?
            - samples(-2.0 * h)?)
            / (12.0 * h * h))
    }
}

/// Apply an `(r, z)`-frame operator to a sampled field at `(r, z)` by
/// central differences.
pub fn fd_apply(
    kind: OperatorKind,
    n: u32,
    field: &mut Field2,
    r: f64,
    z: f64,
    spec: &StencilSpec,
) -> Result<f64, DomainError> {
    if !kind.is_rz_frame() {
        return domain_err(format!("operator {kind} acts in the x frame"));
    }
    if n < 2 {
        return domain_err(format!("operator dimension must be >= 2, got {n}"));
    }
    spec.validate()?;
    let wrap = |e: EvalError| DomainError::new(format!("field evaluation failed: {e}"));
    let (h, order) = (spec.h, spec.order);

    let d_rr = d2(&mut |d| field(r + d, z), h, order).map_err(wrap)?;
    let d_r = d1(&mut |d| field(r + d, z), h, order).map_err(wrap)?;
    let r_sign = match kind {
        OperatorKind::LaplaceRz | OperatorKind::AntiZ => 1.0,
        _ => -1.0,
    };
    let mut acc = d_rr + r_sign / r * d_r;
    if n >= 3 {
        let d_zz = d2(&mut |d| field(r, z + d), h, order).map_err(wrap)?;
        let d_z = d1(&mut |d| field(r, z + d), h, order).map_err(wrap)?;
        let z_sign = match kind {
            OperatorKind::LaplaceRz | OperatorKind::AntiR => 1.0,
            _ => -1.0,
        };
        acc += d_zz + z_sign * (n as f64 - 3.0) / z * d_z;
    }
    Ok(acc)
}

/// Apply an `x`-frame operator to a sampled field at `x`.
pub fn fd_apply_x(
    kind: OperatorKind,
    n: u32,
    field: &mut Field1,
    x: f64,
    spec: &StencilSpec,
) -> Result<f64, DomainError> {
    if kind.is_rz_frame() {
        return domain_err(format!("operator {kind} acts in the (r, z) frame"));
    }
    if n < 1 {
        return domain_err(format!("operator dimension must be >= 1, got {n}"));
    }
    spec.validate()?;
    let wrap = |e: EvalError| DomainError::new(format!("field evaluation failed: {e}"));
    let (h, order) = (spec.h, spec.order);
    let d_xx = d2(&mut |d| field(x + d), h, order).map_err(wrap)?;
    let d_x = d1(&mut |d| field(x + d), h, order).map_err(wrap)?;
    let sign = match kind {
        OperatorKind::LaplaceX => 1.0,
        _ => -1.0,
    };
    Ok(d_xx + sign * (n as f64 - 1.0) / x * d_x)
}

/// Residuals of an operator applied to a field that it should annihilate,
/// evaluated at `points` with steps `h` and `h/2`; `order_estimate` is the
/// median observed convergence order and `pass` requires it to reach
/// `tolerance`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualReport {
    pub op: OperatorKind,
    pub n: u32,
    pub points: Vec<[f64; 2]>,
    pub residuals: Vec<f64>,
    pub order_estimate: f64,
    pub pass: bool,
    pub tolerance: f64,
}

/// Compute a [`ResidualReport`] for `kind` in dimension `n` over `points`.
/// `order_tolerance` is the minimum acceptable convergence order.
pub fn residual_grid(
    kind: OperatorKind,
    n: u32,
    field: &mut Field2,
    points: &[[f64; 2]],
    spec: &StencilSpec,
    order_tolerance: f64,
) -> Result<ResidualReport, DomainError> {
    if points.is_empty() {
        return domain_err("residual grid needs at least one point");
    }
    let mut residuals = Vec::with_capacity(points.len());
    let mut orders = Vec::with_capacity(points.len());
    let half = spec.halved();
    for &[r, z] in points {
        let res = fd_apply(kind, n, field, r, z, spec)?.abs();
        let res_half = fd_apply(kind, n, field, r, z, &half)?.abs();
        residuals.push(res);
        if res_half > 0.0 {
            orders.push((res / res_half).log2());
        } else {
            orders.push(f64::INFINITY);
        }
    }
    let mut sorted = orders.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let order_estimate = sorted[sorted.len() / 2];
    Ok(ResidualReport {
        op: kind,
        n,
        points: points.to_vec(),
        residuals,
        order_estimate,
        pass: order_estimate >= order_tolerance,
        tolerance: order_tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::termalg::{apply_operator, Monomial2D, TermSum2D};

    #[test]
    fn fd_matches_symbolic_operator() {
        // Compare FD application against the exact symbolic image on a
        // nontrivial term sum.
        let ts = TermSum2D::new(vec![
            Monomial2D::power(rat(3, 2), 1, 2, -4),
            Monomial2D::log_rbar(rat(1, 3)),
        ]);
        // h balances truncation against roundoff amplification in the
        // second-derivative stencils (both near 1e-9 at this h).
        let spec = StencilSpec { h: 1e-3, order: 4 };
        for kind in [
            OperatorKind::LaplaceRz,
            OperatorKind::AntiR,
            OperatorKind::AntiZ,
            OperatorKind::AntiDouble,
        ] {
            for n in [3u32, 4, 7] {
                let exact_ts = apply_operator(kind, n, &ts).unwrap();
                let (r, z) = (0.9, 1.3);
                let exact = exact_ts.eval(r, z).unwrap();
                let mut field = |r: f64, z: f64| ts.eval(r, z);
                let fd = fd_apply(kind, n, &mut field, r, z, &spec).unwrap();
                assert!(
                    (fd - exact).abs() < 1e-7 * exact.abs().max(1.0),
                    "{kind} n = {n}: fd {fd} vs exact {exact}"
                );
            }
        }
    }

    #[test]
    fn residual_order_for_annihilated_field() {
        // LaplaceRz annihilates Rbar^-1 in n = 3; FD residual must shrink at
        // second order.
        let ts = TermSum2D::new(vec![Monomial2D::power(rat(1, 1), 0, 0, -1)]);
        let mut field = |r: f64, z: f64| ts.eval(r, z);
        let points = [[0.7, 0.9], [1.1, 0.4], [0.5, 1.2]];
        let spec = StencilSpec { h: 1e-2, order: 2 };
        let report = residual_grid(
            OperatorKind::LaplaceRz,
            3,
            &mut field,
            &points,
            &spec,
            1.9,
        )
        .unwrap();
        assert!(report.pass, "order estimate {}", report.order_estimate);
        assert!(report.order_estimate > 1.9 && report.order_estimate < 2.6);
    }

    #[test]
    fn x_frame_fd() {
        use crate::termalg::{apply_operator_x, phi_x};
        // AntiX on x^2: d_xx - (n-1)/x d_x of x^2 = 2 - 2(n-1).
        let ts = crate::termalg::TermSum1D::new(vec![crate::termalg::Monomial1D::power(
            rat(1, 1),
            2,
        )]);
        let mut field = |x: f64| ts.eval(x);
        let spec = StencilSpec { h: 1e-4, order: 2 };
        let fd = fd_apply_x(OperatorKind::AntiX, 5, &mut field, 1.1, &spec).unwrap();
        assert!((fd - (2.0 - 8.0)).abs() < 1e-6, "got {fd}");
        // and the point solution is annihilated
        let phi = phi_x(5).unwrap();
        let exact = apply_operator_x(OperatorKind::LaplaceX, 5, &phi).unwrap();
        assert!(exact.is_zero());
        let mut pf = |x: f64| phi.eval(x);
        let fd0 = fd_apply_x(OperatorKind::LaplaceX, 5, &mut pf, 0.8, &spec).unwrap();
        assert!(fd0.abs() < 1e-5, "got {fd0}");
    }

    #[test]
    fn bad_specs_rejected() {
        let ts = TermSum2D::new(vec![Monomial2D::power(rat(1, 1), 0, 0, -1)]);
        let mut field = |r: f64, z: f64| ts.eval(r, z);
        let bad = StencilSpec { h: -1.0, order: 2 };
        assert!(fd_apply(OperatorKind::LaplaceRz, 3, &mut field, 1.0, 1.0, &bad).is_err());
        let bad2 = StencilSpec { h: 1e-3, order: 3 };
        assert!(fd_apply(OperatorKind::LaplaceRz, 3, &mut field, 1.0, 1.0, &bad2).is_err());
        assert!(fd_apply(OperatorKind::LaplaceX, 3, &mut field, 1.0, 1.0, &StencilSpec::default()).is_err());
    }
}
