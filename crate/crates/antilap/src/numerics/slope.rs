//! Asymptotic behavior of the solution families, measured by least-squares
//! fits over log-spaced samples.
//!
//! A power-law fit regresses `ln |v|` on `ln t` and reports the exponent; a
//! log fit regresses `v` on `ln(1/t)` and reports the coefficient. The odd
//! anti-z families fall off like `1/r` far away (the three-dimensional
//! signature in every odd dimension), the even ones grow like `ln(1/r)`
//! (the two-dimensional signature).

use crate::numerics::quad::QuadratureSpec;
use crate::solutions::{build, eval_solution, Solution, SolutionFamily};
use crate::{domain_err, DomainError};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Which ray of the `(r, z)` half-plane is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitDirection {
    /// `r` grows with `z` fixed (far zone).
    RLarge,
    /// `z` grows with `r` fixed (far zone along the axis).
    ZLarge,
    /// `r` shrinks with `z` fixed (near zone; reported without threshold).
    RSmall,
    /// `r` varies on the source plane `z = 0`.
    ZAxis,
}

impl FitDirection {
    pub fn parse(s: &str) -> Result<Self, DomainError> {
        match s {
            "r-large" => Ok(FitDirection::RLarge),
            "z-large" => Ok(FitDirection::ZLarge),
            "r-small" => Ok(FitDirection::RSmall),
            "z-axis" => Ok(FitDirection::ZAxis),
            other => domain_err(format!("unknown fit direction {other:?}")),
        }
    }
}

impl fmt::Display for FitDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FitDirection::RLarge => "r-large",
            FitDirection::ZLarge => "z-large",
            FitDirection::RSmall => "r-small",
            FitDirection::ZAxis => "z-axis",
        };
        write!(f, "{s}")
    }
}

/// Fit model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    /// `v ~ C t^p`: report `p`.
    PowerLaw,
    /// `v ~ C ln(1/t) + d`: report `C`.
    LogCoefficient,
}

impl FitKind {
    pub fn parse(s: &str) -> Result<Self, DomainError> {
        match s {
            "power" => Ok(FitKind::PowerLaw),
            "log" => Ok(FitKind::LogCoefficient),
            other => domain_err(format!("unknown fit kind {other:?} (expected power or log)")),
        }
    }
}

impl fmt::Display for FitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitKind::PowerLaw => write!(f, "power"),
            FitKind::LogCoefficient => write!(f, "log"),
        }
    }
}

/// Sampling window for a fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeSpec {
    pub samples: usize,
    /// Lower end of the varying coordinate.
    pub lo: f64,
    /// Upper end of the varying coordinate.
    pub hi: f64,
    /// Value of the frozen coordinate.
    pub fixed: f64,
}

impl SlopeSpec {
    /// Conventional window for each direction: far zone `[1e2, 1e4]` at
    /// `z = 1` (or `r = 1`), near zone `[1e-4, 1e-2]` at `z = 1`, source
    /// plane `[1e-3, 1e-1]` at `z = 0`; 32 samples everywhere.
    pub fn for_direction(direction: FitDirection) -> Self {
        match direction {
            FitDirection::RLarge | FitDirection::ZLarge => SlopeSpec {
                samples: 32,
                lo: 1e2,
                hi: 1e4,
                fixed: 1.0,
            },
            FitDirection::RSmall => SlopeSpec {
                samples: 32,
                lo: 1e-4,
                hi: 1e-2,
                fixed: 1.0,
            },
            FitDirection::ZAxis => SlopeSpec {
                samples: 32,
                lo: 1e-3,
                hi: 1e-1,
                fixed: 0.0,
            },
        }
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        if self.samples < 3 {
            return domain_err(format!("slope fit needs at least 3 samples, got {}", self.samples));
        }
        if !(self.lo > 0.0 && self.hi > self.lo) {
            return domain_err(format!(
                "slope fit needs 0 < lo < hi, got [{}, {}]",
                self.lo, self.hi
            ));
        }
        if !self.fixed.is_finite() || self.fixed < 0.0 {
            return domain_err(format!("fixed coordinate must be nonnegative, got {}", self.fixed));
        }
        Ok(())
    }
}

/// Result of one fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub family: SolutionFamily,
    pub n: u32,
    pub a: Option<f64>,
    pub direction: FitDirection,
    pub kind: FitKind,
    pub fixed: f64,
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

fn ols(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64), DomainError> {
    let m = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        sxx += (x - xbar) * (x - xbar);
        sxy += (x - xbar) * (y - ybar);
        syy += (y - ybar) * (y - ybar);
    }
    if sxx == 0.0 {
        return domain_err("degenerate fit: all abscissae equal".to_string());
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| {
            let p = slope * x + intercept;
            (y - p) * (y - p)
        })
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok((slope, intercept, r_squared))
}

/// Fit the asymptotic behavior of `family` (dimension `n`, ring radius `a`
/// where needed) along `direction`.
pub fn slope_fit(
    family: SolutionFamily,
    n: u32,
    a: Option<f64>,
    direction: FitDirection,
    kind: FitKind,
    spec: &SlopeSpec,
    quad: &QuadratureSpec,
) -> Result<SlopeReport, DomainError> {
    spec.validate()?;
    let sol = build(family, n)?;
    if family.is_ring() && a.is_none() {
        return domain_err(format!("ring family {family} needs a ring radius a"));
    }
    if let Solution::PointX { .. } = sol {
        return domain_err(format!(
            "slope fit samples the (r, z) half-plane; {family} lives in the x frame"
        ));
    }
    let m = spec.samples;
    let ratio = (spec.hi / spec.lo).powf(1.0 / (m as f64 - 1.0));
    let mut xs = Vec::with_capacity(m);
    let mut ys = Vec::with_capacity(m);
    for i in 0..m {
        let t = spec.lo * ratio.powi(i as i32);
        let (r, z) = match direction {
            FitDirection::RLarge | FitDirection::RSmall | FitDirection::ZAxis => (t, spec.fixed),
            FitDirection::ZLarge => (spec.fixed, t),
        };
        let v = eval_solution(&sol, r, z, a, quad)
            .map_err(|e| DomainError::new(format!("evaluation failed at t = {t}: {e}")))?
            .value;
        match kind {
            FitKind::PowerLaw => {
                if v == 0.0 || !v.is_finite() {
                    return domain_err(format!(
                        "power-law fit needs nonzero finite samples, got {v} at t = {t}"
                    ));
                }
                xs.push(t.ln());
                ys.push(v.abs().ln());
            }
            FitKind::LogCoefficient => {
                if !v.is_finite() {
                    return domain_err(format!("log fit needs finite samples, got {v} at t = {t}"));
                }
                xs.push((1.0 / t).ln());
                ys.push(v);
            }
        }
    }
    let (slope, intercept, r_squared) = ols(&xs, &ys)?;
    Ok(SlopeReport {
        family,
        n,
        a,
        direction,
        kind,
        fixed: spec.fixed,
        lo: spec.lo,
        hi: spec.hi,
        samples: m,
        slope,
        intercept,
        r_squared,
    })
}

/// Largest deviation between the unweighted ring field and its point limit
/// over a fixed set of off-source field points; shrinks like the square of
/// the ring radius.
pub fn ring_point_gap(
    n: u32,
    a: f64,
    points: &[(f64, f64)],
    quad: &QuadratureSpec,
) -> Result<f64, DomainError> {
    let ring = build(SolutionFamily::Chi, n)?;
    let point = if n % 2 == 1 {
        build(SolutionFamily::PsiBar, n)?
    } else {
        build(SolutionFamily::Psi, n)?
    };
    let mut worst = 0.0f64;
    for &(r, z) in points {
        let rv = eval_solution(&ring, r, z, Some(a), quad)
            .map_err(|e| DomainError::new(format!("ring evaluation failed: {e}")))?
            .value;
        let pv = eval_solution(&point, r, z, None, quad)
            .map_err(|e| DomainError::new(format!("point evaluation failed: {e}")))?
            .value;
        worst = worst.max((rv - pv).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ols_recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [1.5, 3.5, 5.5, 7.5];
        let (slope, intercept, r2) = ols(&xs, &ys).unwrap();
        assert!((slope - 2.0).abs() < 1e-12);
        assert!((intercept + 0.5).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn point_family_far_zone_exponents() {
        let quad = QuadratureSpec::default();
        let spec = SlopeSpec::for_direction(FitDirection::RLarge);
        // Odd anti-z families decay like 1/r whatever the dimension.
        for n in [3u32, 7] {
            let rep = slope_fit(
                SolutionFamily::PsiBar,
                n,
                None,
                FitDirection::RLarge,
                FitKind::PowerLaw,
                &spec,
                &quad,
            )
            .unwrap();
            assert!((rep.slope + 1.0).abs() < 0.05, "n = {n}: slope {}", rep.slope);
        }
        // The Laplace kernel keeps the standard fall-off.
        for n in [3u32, 5] {
            let rep = slope_fit(
                SolutionFamily::Xi,
                n,
                None,
                FitDirection::RLarge,
                FitKind::PowerLaw,
                &spec,
                &quad,
            )
            .unwrap();
            let want = -(n as f64 - 2.0);
            assert!((rep.slope - want).abs() < 0.02, "n = {n}: slope {}", rep.slope);
        }
    }

    #[test]
    fn even_family_log_growth() {
        let quad = QuadratureSpec::default();
        let spec = SlopeSpec::for_direction(FitDirection::RLarge);
        let rep = slope_fit(
            SolutionFamily::Psi,
            6,
            None,
            FitDirection::RLarge,
            FitKind::LogCoefficient,
            &spec,
            &quad,
        )
        .unwrap();
        assert!((rep.slope - 1.0).abs() < 0.05, "coefficient {}", rep.slope);
    }

    #[test]
    fn source_plane_behavior_is_exact() {
        let quad = QuadratureSpec::default();
        let spec = SlopeSpec::for_direction(FitDirection::ZAxis);
        let rep = slope_fit(
            SolutionFamily::PsiBar,
            7,
            None,
            FitDirection::ZAxis,
            FitKind::PowerLaw,
            &spec,
            &quad,
        )
        .unwrap();
        assert!((rep.slope + 1.0).abs() < 1e-6, "slope {}", rep.slope);
        let rep = slope_fit(
            SolutionFamily::Psi,
            6,
            None,
            FitDirection::ZAxis,
            FitKind::LogCoefficient,
            &spec,
            &quad,
        )
        .unwrap();
        assert!((rep.slope - 1.0).abs() < 1e-6, "coefficient {}", rep.slope);
        assert!(rep.intercept.abs() < 1e-9, "intercept {}", rep.intercept);
    }

    #[test]
    fn ring_field_converges_to_point_field() {
        let quad = QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            ..QuadratureSpec::default()
        };
        let points = [(0.9, 0.7), (1.4, 0.3), (0.5, 1.2)];
        let gaps: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&a| ring_point_gap(5, a, &points, &quad).unwrap())
            .collect();
        assert!(gaps[0] / gaps[1] > 1.8, "gaps {gaps:?}");
        assert!(gaps[1] / gaps[2] > 1.8, "gaps {gaps:?}");
    }

    #[test]
    fn invalid_requests_are_rejected() {
        let quad = QuadratureSpec::default();
        let spec = SlopeSpec::for_direction(FitDirection::RLarge);
        assert!(slope_fit(
            SolutionFamily::PsiRing,
            5,
            None,
            FitDirection::RLarge,
            FitKind::PowerLaw,
            &spec,
            &quad
        )
        .is_err());
        assert!(slope_fit(
            SolutionFamily::Phi,
            5,
            None,
            FitDirection::RLarge,
            FitKind::PowerLaw,
            &spec,
            &quad
        )
        .is_err());
        let bad = SlopeSpec { samples: 2, ..spec };
        assert!(slope_fit(
            SolutionFamily::Xi,
            3,
            None,
            FitDirection::RLarge,
            FitKind::PowerLaw,
            &bad,
            &quad
        )
        .is_err());
    }
}
