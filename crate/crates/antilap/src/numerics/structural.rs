//! Structural relations between the anti-form operators and full
//! Laplacians in more variables.
//!
//! Each relation states that multiplying a profile by a specific angular
//! factor turns an anti-form radial operator into a genuine Laplacian:
//!
//! - `cartesian-lift`: `Lap_n (x_k x^-n F(x)) = (x_k / x^n) AntiLap_x F`,
//!   where `Lap_n` is the n-dimensional Cartesian Laplacian;
//! - `cos-phi-lift`: `Lap_{r,phi,z} ((cos phi / r) F(r,z)) =
//!   (cos phi / r) AntiLap_r F`;
//! - `cos-theta-lift`: `Lap_{r,z,theta} ((cos theta / z^(n-3)) F(r,z)) =
//!   (cos theta / z^(n-3)) AntiLap_z F` for `n >= 4`;
//! - `double-angular-lift`: both factors at once, reaching the doubly
//!   anti-form operator.
//!
//! The left side is applied by central finite differences to the composite
//! product; the right side is exact via the symbolic term algebra. The
//! difference must shrink at the stencil order as `h` is halved.

use crate::numerics::stencil::StencilSpec;
use crate::termalg::{apply_operator, apply_operator_x, OperatorKind, TermSum1D, TermSum2D};
use crate::{domain_err, DomainError};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// One of the angular-factor lift relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum StructuralRelation {
    /// Cartesian lift through the component `x_k` (0-indexed).
    CartesianLift { component: usize },
    CosPhiLift,
    CosThetaLift,
    DoubleAngularLift,
}

impl fmt::Display for StructuralRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructuralRelation::CartesianLift { component } => {
                write!(f, "cartesian-lift-x{}", component + 1)
            }
            StructuralRelation::CosPhiLift => write!(f, "cos-phi-lift"),
            StructuralRelation::CosThetaLift => write!(f, "cos-theta-lift"),
            StructuralRelation::DoubleAngularLift => write!(f, "double-angular-lift"),
        }
    }
}

/// Outcome of checking one relation at a set of points for one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralReport {
    pub relation: StructuralRelation,
    pub n: u32,
    /// Sample points; coordinate layout depends on the relation
    /// (Cartesian: the full n-vector; angular: `(r, z, phi)`, `(r, z, theta)`
    /// or `(r, z, phi, theta)`).
    pub points: Vec<Vec<f64>>,
    pub residual_coarse: Vec<f64>,
    pub residual_fine: Vec<f64>,
    pub orders: Vec<f64>,
    pub order_estimate: f64,
    pub pass: bool,
    pub tolerance: f64,
}

/// Fixed smooth 1-D profile used by the Cartesian relation: mixes a
/// negative power, a positive power, and a logarithm.
pub fn cartesian_profile() -> TermSum1D {
    use crate::coeff::rat;
    use crate::termalg::Monomial1D;
    TermSum1D::new(vec![
        Monomial1D {
            coeff: rat(1, 1),
            x_pow: -1,
            log: 0,
        },
        Monomial1D {
            coeff: rat(1, 3),
            x_pow: 2,
            log: 0,
        },
        Monomial1D {
            coeff: rat(1, 5),
            x_pow: 0,
            log: 1,
        },
    ])
}

/// Fixed smooth 2-D profile used by the angular relations.
pub fn angular_profile() -> TermSum2D {
    use crate::coeff::rat;
    use crate::termalg::Monomial2D;
    TermSum2D::new(vec![
        Monomial2D::power(rat(1, 1), 0, 1, -3),
        Monomial2D::power(rat(1, 3), 1, 2, 0),
        Monomial2D::log_rbar(rat(1, 2)),
    ])
}

fn cartesian_residual(
    component: usize,
    n: u32,
    f: &TermSum1D,
    rhs_profile: &TermSum1D,
    x: &[f64],
    h: f64,
) -> Result<f64, DomainError> {
    let norm = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
    let g = |v: &[f64]| -> Result<f64, DomainError> {
        let len = norm(v);
        let fx = f
            .eval(len)
            .map_err(|e| DomainError::new(format!("profile evaluation failed: {e}")))?;
        Ok(v[component] * len.powi(-(n as i32)) * fx)
    };
    let mut lap = 0.0;
    let center = g(x)?;
    let mut v = x.to_vec();
    for i in 0..n as usize {
        let orig = v[i];
        v[i] = orig + h;
        let plus = g(&v)?;
        v[i] = orig - h;
        let minus = g(&v)?;
        v[i] = orig;
        lap += (plus - 2.0 * center + minus) / (h * h);
    }
    let len = norm(x);
    let anti = rhs_profile
        .eval(len)
        .map_err(|e| DomainError::new(format!("lifted profile evaluation failed: {e}")))?;
    let rhs = x[component] * len.powi(-(n as i32)) * anti;
    Ok((lap - rhs).abs())
}

#[allow(clippy::too_many_arguments)]
fn angular_residual(
    relation: StructuralRelation,
    n: u32,
    f: &TermSum2D,
    rhs_profile: &TermSum2D,
    point: &[f64],
    h: f64,
) -> Result<f64, DomainError> {
    let s = n as f64 - 3.0;
    let eval2 = |ts: &TermSum2D, r: f64, z: f64| -> Result<f64, DomainError> {
        ts.eval(r, z)
            .map_err(|e| DomainError::new(format!("profile evaluation failed: {e}")))
    };
    match relation {
        StructuralRelation::CosPhiLift => {
            let (r, z, phi) = (point[0], point[1], point[2]);
            let sample = |dr: f64, dz: f64, dphi: f64| -> Result<f64, DomainError> {
                let rr = r + dr;
                Ok((phi + dphi).cos() / rr * eval2(f, rr, z + dz)?)
            };
            let d2r = (sample(h, 0.0, 0.0)? - 2.0 * sample(0.0, 0.0, 0.0)? + sample(-h, 0.0, 0.0)?)
                / (h * h);
            let d1r = (sample(h, 0.0, 0.0)? - sample(-h, 0.0, 0.0)?) / (2.0 * h);
            let d2z = (sample(0.0, h, 0.0)? - 2.0 * sample(0.0, 0.0, 0.0)? + sample(0.0, -h, 0.0)?)
                / (h * h);
            let d1z = (sample(0.0, h, 0.0)? - sample(0.0, -h, 0.0)?) / (2.0 * h);
            let d2phi = (sample(0.0, 0.0, h)? - 2.0 * sample(0.0, 0.0, 0.0)?
                + sample(0.0, 0.0, -h)?)
                / (h * h);
            let lhs = d2r + d1r / r + d2phi / (r * r) + d2z + s / z * d1z;
            let rhs = phi.cos() / r * eval2(rhs_profile, r, z)?;
            Ok((lhs - rhs).abs())
        }
        StructuralRelation::CosThetaLift => {
            let (r, z, theta) = (point[0], point[1], point[2]);
            let zw = -s;
            let sample = |dr: f64, dz: f64, dtheta: f64| -> Result<f64, DomainError> {
                let zz = z + dz;
                Ok((theta + dtheta).cos() * zz.powf(zw) * eval2(f, r + dr, zz)?)
            };
            let d2r = (sample(h, 0.0, 0.0)? - 2.0 * sample(0.0, 0.0, 0.0)? + sample(-h, 0.0, 0.0)?)
                / (h * h);
            let d1r = (sample(h, 0.0, 0.0)? - sample(-h, 0.0, 0.0)?) / (2.0 * h);
            let d2z = (sample(0.0, h, 0.0)? - 2.0 * sample(0.0, 0.0, 0.0)? + sample(0.0, -h, 0.0)?)
                / (h * h);
            let d1z = (sample(0.0, h, 0.0)? - sample(0.0, -h, 0.0)?) / (2.0 * h);
            let d2t = (sample(0.0, 0.0, h)? - 2.0 * sample(0.0, 0.0, 0.0)?
                + sample(0.0, 0.0, -h)?)
                / (h * h);
            let d1t = (sample(0.0, 0.0, h)? - sample(0.0, 0.0, -h)?) / (2.0 * h);
            let cot = theta.cos() / theta.sin();
            let lhs = d2r + d1r / r + d2z + s / z * d1z
                + (d2t + (n as f64 - 4.0) * cot * d1t) / (z * z);
            let rhs = theta.cos() * z.powf(zw) * eval2(rhs_profile, r, z)?;
            Ok((lhs - rhs).abs())
        }
        StructuralRelation::DoubleAngularLift => {
            let (r, z, phi, theta) = (point[0], point[1], point[2], point[3]);
            let zw = -s;
            let sample =
                |dr: f64, dz: f64, dphi: f64, dtheta: f64| -> Result<f64, DomainError> {
                    let zz = z + dz;
                    let rr = r + dr;
                    Ok((phi + dphi).cos() / rr
                        * (theta + dtheta).cos()
                        * zz.powf(zw)
                        * eval2(f, rr, zz)?)
                };
            let center = sample(0.0, 0.0, 0.0, 0.0)?;
            let d2r = (sample(h, 0.0, 0.0, 0.0)? - 2.0 * center + sample(-h, 0.0, 0.0, 0.0)?)
                / (h * h);
            let d1r = (sample(h, 0.0, 0.0, 0.0)? - sample(-h, 0.0, 0.0, 0.0)?) / (2.0 * h);
            let d2z = (sample(0.0, h, 0.0, 0.0)? - 2.0 * center + sample(0.0, -h, 0.0, 0.0)?)
                / (h * h);
            let d1z = (sample(0.0, h, 0.0, 0.0)? - sample(0.0, -h, 0.0, 0.0)?) / (2.0 * h);
            let d2phi = (sample(0.0, 0.0, h, 0.0)? - 2.0 * center + sample(0.0, 0.0, -h, 0.0)?)
                / (h * h);
            let d2t = (sample(0.0, 0.0, 0.0, h)? - 2.0 * center + sample(0.0, 0.0, 0.0, -h)?)
                / (h * h);
            let d1t = (sample(0.0, 0.0, 0.0, h)? - sample(0.0, 0.0, 0.0, -h)?) / (2.0 * h);
            let cot = theta.cos() / theta.sin();
            let lhs = d2r + d1r / r + d2phi / (r * r) + d2z + s / z * d1z
                + (d2t + (n as f64 - 4.0) * cot * d1t) / (z * z);
            let rhs = phi.cos() / r * theta.cos() * z.powf(zw) * eval2(rhs_profile, r, z)?;
            Ok((lhs - rhs).abs())
        }
        StructuralRelation::CartesianLift { .. } => {
            domain_err("cartesian relation takes an x-frame profile".to_string())
        }
    }
}

/// Check one structural relation in dimension `n` at `num_points` random
/// points, comparing the finite-difference residual at `spec.h` and
/// `spec.h / 2`; the median observed order must reach `order_tolerance`.
pub fn structural_check<R: Rng>(
    relation: StructuralRelation,
    n: u32,
    rng: &mut R,
    num_points: usize,
    spec: &StencilSpec,
    order_tolerance: f64,
) -> Result<StructuralReport, DomainError> {
    spec.validate()?;
    if num_points == 0 {
        return domain_err("structural check needs at least one point".to_string());
    }
    match relation {
        StructuralRelation::CartesianLift { component } => {
            if n < 2 {
                return domain_err(format!("cartesian relation needs n >= 2, got {n}"));
            }
            if component >= n as usize {
                return domain_err(format!(
                    "component index {component} out of range for n = {n}"
                ));
            }
        }
        StructuralRelation::CosPhiLift => {
            if n < 3 {
                return domain_err(format!("cos-phi relation needs n >= 3, got {n}"));
            }
        }
        StructuralRelation::CosThetaLift | StructuralRelation::DoubleAngularLift => {
            if n < 4 {
                return domain_err(format!("{relation} needs n >= 4, got {n}"));
            }
        }
    }
    let mut points = Vec::with_capacity(num_points);
    let mut residual_coarse = Vec::with_capacity(num_points);
    let mut residual_fine = Vec::with_capacity(num_points);
    let mut orders = Vec::with_capacity(num_points);
    let h = spec.h;
    for _ in 0..num_points {
        let (coarse, fine, point) = match relation {
            StructuralRelation::CartesianLift { component } => {
                let f = cartesian_profile();
                let rhs = apply_operator_x(OperatorKind::AntiX, n, &f)?;
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.0)).collect();
                let coarse = cartesian_residual(component, n, &f, &rhs, &x, h)?;
                let fine = cartesian_residual(component, n, &f, &rhs, &x, 0.5 * h)?;
                (coarse, fine, x)
            }
            StructuralRelation::CosPhiLift => {
                let f = angular_profile();
                let rhs = apply_operator(OperatorKind::AntiR, n, &f)?;
                let p = vec![
                    rng.gen_range(0.7..1.5),
                    rng.gen_range(0.7..1.5),
                    rng.gen_range(0.4..2.6),
                ];
                let coarse = angular_residual(relation, n, &f, &rhs, &p, h)?;
                let fine = angular_residual(relation, n, &f, &rhs, &p, 0.5 * h)?;
                (coarse, fine, p)
            }
            StructuralRelation::CosThetaLift => {
                let f = angular_profile();
                let rhs = apply_operator(OperatorKind::AntiZ, n, &f)?;
                let p = vec![
                    rng.gen_range(0.7..1.5),
                    rng.gen_range(0.7..1.5),
                    rng.gen_range(0.5..2.6),
                ];
                let coarse = angular_residual(relation, n, &f, &rhs, &p, h)?;
                let fine = angular_residual(relation, n, &f, &rhs, &p, 0.5 * h)?;
                (coarse, fine, p)
            }
            StructuralRelation::DoubleAngularLift => {
                let f = angular_profile();
                let rhs = apply_operator(OperatorKind::AntiDouble, n, &f)?;
                let p = vec![
                    rng.gen_range(0.7..1.5),
                    rng.gen_range(0.7..1.5),
                    rng.gen_range(0.4..2.6),
                    rng.gen_range(0.5..2.6),
                ];
                let coarse = angular_residual(relation, n, &f, &rhs, &p, h)?;
                let fine = angular_residual(relation, n, &f, &rhs, &p, 0.5 * h)?;
                (coarse, fine, p)
            }
        };
        orders.push((coarse / fine).log2());
        residual_coarse.push(coarse);
        residual_fine.push(fine);
        points.push(point);
    }
    let mut sorted = orders.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let order_estimate = sorted[sorted.len() / 2];
    Ok(StructuralReport {
        relation,
        n,
        points,
        residual_coarse,
        residual_fine,
        orders,
        order_estimate,
        pass: order_estimate >= order_tolerance,
        tolerance: order_tolerance,
    })
}
