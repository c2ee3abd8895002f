//! Distributional pairing of a point-source field against a smooth trial
//! function, computed by excising a small rectangle `[0, eps] x [0, eta]`
//! around the source and integrating the flux over the two cut surfaces.
//!
//! For a field `S` annihilated away from the origin, the pairing of its
//! source with a compactly supported trial `phi` equals the limit of
//! `J_r + J_z` as the excision shrinks, where
//!
//! - `J_r = int_0^eps r [phi T - phi_z S] dr` on the line `z = eta`, and
//! - `J_z = int_0^eta eps [phi S_r - phi_r S] dz` on the line `r = eps`
//!
//! for the anti-z families (`T` is the flux weight of the operator: the
//! `z`-derivative taken on the kernel factor only for the odd families,
//! `S_z - (n-3) S / z` for the even ones), and the same structure with the
//! volume weight `z^(n-3)` and `T = S_z` for the plain Laplace family.
//!
//! The shrinking sequence is geometric; the limit is accelerated by two
//! passes of Richardson extrapolation. For the odd and Laplace families the
//! two iterated limit orders (`eps` first or `eta` first) converge to the
//! same value and both are reported; for the even families only the joint
//! diagonal limit converges, so the iterated values are omitted.

use crate::numerics::quad::{integrate, QuadratureSpec};
use crate::solutions::{build, source_spec, Solution, SolutionFamily};
use crate::termalg::{Monomial2D, TermSum2D};
use crate::{domain_err, DomainError};
use num::ToPrimitive;
use serde::{Deserialize, Serialize};

/// The standard compactly supported trial function
/// `phi(r, z) = exp(1 - 1/(1 - s))` with `s = (r^2 + z^2) / rho0^2`,
/// supported on the disc `s < 1` and equal to 1 at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpTrial {
    pub rho0: f64,
}

impl BumpTrial {
    pub fn new(rho0: f64) -> Result<Self, DomainError> {
        if !(rho0 > 0.0) || !rho0.is_finite() {
            return domain_err(format!("trial radius must be positive, got {rho0}"));
        }
        Ok(BumpTrial { rho0 })
    }

    fn w(&self, r: f64, z: f64) -> f64 {
        1.0 - (r * r + z * z) / (self.rho0 * self.rho0)
    }

    /// Trial value; zero outside the support disc.
    pub fn value(&self, r: f64, z: f64) -> f64 {
        let w = self.w(r, z);
        if w > 0.0 {
            (1.0 - 1.0 / w).exp()
        } else {
            0.0
        }
    }

    /// Radial derivative `phi_r = -2 r phi / (rho0^2 w^2)`.
    pub fn d_r(&self, r: f64, z: f64) -> f64 {
        let w = self.w(r, z);
        if w > 0.0 {
            -2.0 * r * self.value(r, z) / (self.rho0 * self.rho0 * w * w)
        } else {
            0.0
        }
    }

    /// Axial derivative `phi_z = -2 z phi / (rho0^2 w^2)`.
    pub fn d_z(&self, r: f64, z: f64) -> f64 {
        let w = self.w(r, z);
        if w > 0.0 {
            -2.0 * z * self.value(r, z) / (self.rho0 * self.rho0 * w * w)
        } else {
            0.0
        }
    }
}

/// How the excision sequence is turned into a limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extrapolation {
    LastValue,
    Richardson,
}

/// Controls for the excision limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingSpec {
    /// Trial support radius; the excision starts at half of it.
    pub rho0: f64,
    /// Geometric shrink factor between consecutive excisions.
    pub eps_ratio: f64,
    /// Number of excisions in the sequence.
    pub steps: u32,
    pub extrapolation: Extrapolation,
    /// Acceptance tolerance: relative for a nonzero expected value,
    /// absolute when the expected value is zero.
    pub tolerance: f64,
}

impl Default for PairingSpec {
    fn default() -> Self {
        PairingSpec {
            rho0: 0.5,
            eps_ratio: 0.5,
            steps: 8,
            extrapolation: Extrapolation::Richardson,
            tolerance: 1e-2,
        }
    }
}

impl PairingSpec {
    pub fn validate(&self) -> Result<(), DomainError> {
        if !(self.rho0 > 0.0) || !self.rho0.is_finite() {
            return domain_err(format!("pairing rho0 must be positive, got {}", self.rho0));
        }
        if !(self.eps_ratio > 0.0 && self.eps_ratio < 1.0) {
            return domain_err(format!(
                "pairing shrink ratio must lie in (0, 1), got {}",
                self.eps_ratio
            ));
        }
        let min_steps = match self.extrapolation {
            Extrapolation::Richardson => 3,
            Extrapolation::LastValue => 1,
        };
        if self.steps < min_steps {
            return domain_err(format!(
                "pairing needs at least {min_steps} steps for this extrapolation, got {}",
                self.steps
            ));
        }
        if !(self.tolerance > 0.0) {
            return domain_err(format!("pairing tolerance must be positive, got {}", self.tolerance));
        }
        Ok(())
    }
}

/// One excision of the shrinking sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingStep {
    pub eps: f64,
    pub eta: f64,
    pub j_r: f64,
    pub j_z: f64,
    pub total: f64,
}

/// Outcome of a pairing computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub family: SolutionFamily,
    pub n: u32,
    pub rho0: f64,
    /// Joint diagonal sequence `eps = eta`, largest excision first.
    pub sequence: Vec<PairingStep>,
    /// Extrapolated joint limit.
    pub extrapolated: f64,
    /// Iterated limit taking `eps -> 0` first, where it converges.
    pub eps_first: Option<f64>,
    /// Iterated limit taking `eta -> 0` first, where it converges.
    pub eta_first: Option<f64>,
    /// Expected value (source strength times the trial value at the
    /// origin), when the pairing is a multiple of the origin value.
    pub expected: Option<f64>,
    pub pass: Option<bool>,
    pub tolerance: f64,
}

#[derive(Clone, Copy, PartialEq)]
enum FluxForm {
    /// Plain Laplace flux with the `z^(n-3)` volume weight.
    Laplace,
    /// Anti-z flux; whether both iterated limit orders converge.
    AntiZ { iterated_limits: bool },
}

/// `z`-derivative applied to the kernel factor only: each `Rbar` power or
/// logarithm is differentiated, explicit `z` powers are left alone.
fn d_z_on_rbar(ts: &TermSum2D) -> TermSum2D {
    use crate::coeff::rat_int;
    let mut out = Vec::new();
    for t in ts.terms() {
        if t.rbar_pow != 0 {
            out.push(Monomial2D {
                coeff: &t.coeff * rat_int(t.rbar_pow as i64),
                r_pow: t.r_pow,
                z_pow: t.z_pow + 1,
                rbar_pow: t.rbar_pow - 2,
                log_rbar: t.log_rbar,
                log_r: t.log_r,
            });
        }
        if t.log_rbar == 1 {
            out.push(Monomial2D {
                coeff: -&t.coeff,
                r_pow: t.r_pow,
                z_pow: t.z_pow + 1,
                rbar_pow: t.rbar_pow - 2,
                log_rbar: 0,
                log_r: t.log_r,
            });
        }
    }
    TermSum2D::new(out)
}

/// One pass of geometric-sequence extrapolation at shrink ratio `q`.
fn richardson_pass(seq: &[f64], q: f64) -> Vec<f64> {
    seq.windows(2).map(|w| (w[1] - q * w[0]) / (1.0 - q)).collect()
}

fn extrapolate(seq: &[f64], q: f64, mode: Extrapolation) -> f64 {
    match mode {
        Extrapolation::LastValue => *seq.last().expect("nonempty sequence"),
        Extrapolation::Richardson => {
            let once = richardson_pass(seq, q);
            let twice = richardson_pass(&once, q);
            *twice.last().expect("sequence of length >= 3")
        }
    }
}

/// Compute the pairing of `family`'s source (dimension `n`) against the
/// standard bump trial. Only the point families of the `(r, z)` frame are
/// supported.
pub fn pairing(
    family: SolutionFamily,
    n: u32,
    spec: &PairingSpec,
    quad: &QuadratureSpec,
) -> Result<PairingReport, DomainError> {
    spec.validate()?;
    if family.is_ring() {
        return domain_err(format!(
            "pairing is defined for point families, not the ring family {family}"
        ));
    }
    let source = source_spec(family, n)?;
    let s = match build(family, n)? {
        Solution::PointRz { sum } => sum,
        _ => {
            return domain_err(format!(
                "pairing is defined for (r, z) point families, not {family}"
            ))
        }
    };
    let flux = match family {
        SolutionFamily::Xi => FluxForm::Laplace,
        SolutionFamily::Psi | SolutionFamily::PsiBar | SolutionFamily::PsiTilde4 => {
            FluxForm::AntiZ {
                iterated_limits: n % 2 == 1,
            }
        }
        _ => unreachable!("ring and x-frame families already rejected"),
    };
    let s_r = s.d_r();
    let t = match flux {
        FluxForm::Laplace => s.d_z(),
        FluxForm::AntiZ { .. } => {
            if n % 2 == 1 {
                d_z_on_rbar(&s)
            } else {
                let weight = crate::coeff::rat_int(n as i64 - 3);
                s.d_z().sub(&s.mul_powers(0, -1, 0).scale(&weight))
            }
        }
    };
    let trial = BumpTrial::new(spec.rho0)?;
    let zpow = n as i32 - 3;

    let j_r = |eps: f64, eta: f64| -> Result<f64, DomainError> {
        let mut f = |r: f64| -> f64 {
            if r == 0.0 {
                // The r prefactor kills the at-most-logarithmic growth of
                // the kernels on the axis.
                return 0.0;
            }
            let phi = trial.value(r, eta);
            let phi_z = trial.d_z(r, eta);
            let sv = s.eval(r, eta).unwrap_or(f64::NAN);
            let tv = t.eval(r, eta).unwrap_or(f64::NAN);
            r * (phi * tv - phi_z * sv)
        };
        let q = integrate(&mut f, 0.0, eps, quad)?;
        let v = match flux {
            FluxForm::Laplace => eta.powi(zpow) * q.value,
            FluxForm::AntiZ { .. } => q.value,
        };
        if !v.is_finite() {
            return domain_err(format!("surface integral J_r diverged at eps = {eps}, eta = {eta}"));
        }
        Ok(v)
    };
    let j_z = |eps: f64, eta: f64| -> Result<f64, DomainError> {
        let mut f = |z: f64| -> f64 {
            let phi = trial.value(eps, z);
            let phi_r = trial.d_r(eps, z);
            let sv = s.eval(eps, z).unwrap_or(f64::NAN);
            let srv = s_r.eval(eps, z).unwrap_or(f64::NAN);
            let base = eps * (phi * srv - phi_r * sv);
            match flux {
                FluxForm::Laplace => z.powi(zpow) * base,
                FluxForm::AntiZ { .. } => base,
            }
        };
        let q = integrate(&mut f, 0.0, eta, quad)?;
        if !q.value.is_finite() {
            return domain_err(format!("surface integral J_z diverged at eps = {eps}, eta = {eta}"));
        }
        Ok(q.value)
    };

    let m = spec.steps as usize;
    let cuts: Vec<f64> = (0..m)
        .map(|i| 0.5 * spec.rho0 * spec.eps_ratio.powi(i as i32))
        .collect();

    let iterated = match flux {
        FluxForm::Laplace => true,
        FluxForm::AntiZ { iterated_limits } => iterated_limits,
    };

    let mut sequence = Vec::with_capacity(m);
    let (eps_first, eta_first) = if iterated {
        // Full grid: row index is eps, column index is eta.
        let mut grid = vec![vec![0.0f64; m]; m];
        let mut rows_jr = vec![vec![0.0f64; m]; m];
        for (i, &eps) in cuts.iter().enumerate() {
            for (j, &eta) in cuts.iter().enumerate() {
                let a = j_r(eps, eta)?;
                let b = j_z(eps, eta)?;
                grid[i][j] = a + b;
                rows_jr[i][j] = a;
            }
        }
        for i in 0..m {
            sequence.push(PairingStep {
                eps: cuts[i],
                eta: cuts[i],
                j_r: rows_jr[i][i],
                j_z: grid[i][i] - rows_jr[i][i],
                total: grid[i][i],
            });
        }
        let q = spec.eps_ratio;
        let col_limits: Vec<f64> = (0..m)
            .map(|j| extrapolate(&(0..m).map(|i| grid[i][j]).collect::<Vec<_>>(), q, spec.extrapolation))
            .collect();
        let eps_first = extrapolate(&col_limits, q, spec.extrapolation);
        let row_limits: Vec<f64> = (0..m)
            .map(|i| extrapolate(&grid[i], q, spec.extrapolation))
            .collect();
        let eta_first = extrapolate(&row_limits, q, spec.extrapolation);
        (Some(eps_first), Some(eta_first))
    } else {
        for &cut in &cuts {
            let a = j_r(cut, cut)?;
            let b = j_z(cut, cut)?;
            sequence.push(PairingStep {
                eps: cut,
                eta: cut,
                j_r: a,
                j_z: b,
                total: a + b,
            });
        }
        (None, None)
    };

    let totals: Vec<f64> = sequence.iter().map(|st| st.total).collect();
    let extrapolated = extrapolate(&totals, spec.eps_ratio, spec.extrapolation);

    let expected = source
        .expected_pairing
        .as_ref()
        .and_then(|e| e.to_f64())
        .map(|e| e * trial.value(0.0, 0.0));
    let pass = expected.map(|e| {
        if e == 0.0 {
            extrapolated.abs() <= spec.tolerance
        } else {
            (extrapolated - e).abs() <= spec.tolerance * e.abs()
        }
    });
    Ok(PairingReport {
        family,
        n,
        rho0: spec.rho0,
        sequence,
        extrapolated,
        eps_first,
        eta_first,
        expected,
        pass,
        tolerance: spec.tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_trial_shape() {
        let b = BumpTrial::new(0.5).unwrap();
        assert_eq!(b.value(0.0, 0.0), 1.0);
        assert_eq!(b.value(0.5, 0.0), 0.0);
        assert_eq!(b.value(0.6, 0.3), 0.0);
        let v = b.value(0.25, 0.0);
        assert!((v - (-1.0f64 / 3.0).exp()).abs() < 1e-15, "got {v}");
        // derivative against central difference
        let h = 1e-6;
        let fd = (b.value(0.2 + h, 0.1) - b.value(0.2 - h, 0.1)) / (2.0 * h);
        assert!((b.d_r(0.2, 0.1) - fd).abs() < 1e-8);
        let fd = (b.value(0.2, 0.1 + h) - b.value(0.2, 0.1 - h)) / (2.0 * h);
        assert!((b.d_z(0.2, 0.1) - fd).abs() < 1e-8);
    }

    #[test]
    fn richardson_kills_geometric_error() {
        // v_i = 3 + 2 q^i converges to 3; one pass should nail it.
        let q = 0.5f64;
        let seq: Vec<f64> = (0..6).map(|i| 3.0 + 2.0 * q.powi(i)).collect();
        let once = richardson_pass(&seq, q);
        for v in &once {
            assert!((v - 3.0).abs() < 1e-12);
        }
        assert!((extrapolate(&seq, q, Extrapolation::Richardson) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn unit_source_pairing_in_three_dimensions() {
        let spec = PairingSpec::default();
        let quad = QuadratureSpec::default();
        let report = pairing(SolutionFamily::PsiBar, 3, &spec, &quad).unwrap();
        assert_eq!(report.expected, Some(-1.0));
        assert!(
            (report.extrapolated + 1.0).abs() < 1e-2,
            "extrapolated {}",
            report.extrapolated
        );
        assert_eq!(report.pass, Some(true));
        let ef = report.eps_first.unwrap();
        let tf = report.eta_first.unwrap();
        assert!((ef - tf).abs() < 1e-2, "iterated limits {ef} vs {tf}");
    }

    #[test]
    fn normalized_source_pairing_in_five_dimensions() {
        let spec = PairingSpec::default();
        let quad = QuadratureSpec::default();
        let report = pairing(SolutionFamily::Psi, 5, &spec, &quad).unwrap();
        assert_eq!(report.expected, Some(-2.0));
        assert!(
            (report.extrapolated + 2.0).abs() < 2.0 * 1e-2,
            "extrapolated {}",
            report.extrapolated
        );
        assert_eq!(report.pass, Some(true));
    }

    #[test]
    fn laplace_pairing_counts_the_point_charge() {
        let spec = PairingSpec::default();
        let quad = QuadratureSpec::default();
        for n in [3u32, 4] {
            let report = pairing(SolutionFamily::Xi, n, &spec, &quad).unwrap();
            assert!(
                (report.extrapolated + 1.0).abs() < 1e-2,
                "n = {n}: extrapolated {}",
                report.extrapolated
            );
            assert_eq!(report.pass, Some(true), "n = {n}");
        }
    }

    #[test]
    fn even_pairing_vanishes() {
        let spec = PairingSpec {
            steps: 12,
            ..PairingSpec::default()
        };
        let quad = QuadratureSpec::default();
        let report = pairing(SolutionFamily::Psi, 4, &spec, &quad).unwrap();
        assert_eq!(report.expected, Some(0.0));
        assert!(report.eps_first.is_none() && report.eta_first.is_none());
        assert!(
            report.extrapolated.abs() < 1e-2,
            "extrapolated {}",
            report.extrapolated
        );
        assert_eq!(report.pass, Some(true));
    }

    #[test]
    fn unsupported_families_are_rejected() {
        let spec = PairingSpec::default();
        let quad = QuadratureSpec::default();
        assert!(pairing(SolutionFamily::PsiRing, 5, &spec, &quad).is_err());
        assert!(pairing(SolutionFamily::Phi, 5, &spec, &quad).is_err());
        let bad = PairingSpec {
            eps_ratio: 1.5,
            ..PairingSpec::default()
        };
        assert!(pairing(SolutionFamily::PsiBar, 3, &bad, &quad).is_err());
    }
}
