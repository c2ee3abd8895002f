//! Point- and ring-source solution families for the radial operators.
//!
//! Point families are exact term sums; ring families are integrals over the
//! ring angle `alpha` of the same basis with
//! `R(alpha) = sqrt(r^2 + a^2 - 2 a r cos(alpha) + z^2)`:
//!
//! | family       | frame     | operator      | closed form |
//! |--------------|-----------|---------------|-------------|
//! | `phi`        | `x`       | `laplace-x`   | `x^(2-n)/(n-2)` (`ln(1/x)` at n = 2) |
//! | `xi`         | `(r, z)`  | `laplace-rz`  | `Rbar^(2-n)` (`ln(1/r)` at n = 2) |
//! | `psi`        | `(r, z)`  | `anti-z`      | odd: `sum a(k,n) z^(k-3) Rbar^(2-k)`; even: `ln(1/Rbar) + sum z^(l-4) Rbar^(4-l)/(l-4)` |
//! | `psi-bar`    | `(r, z)`  | `anti-z`      | odd `psi` with unit-sum `b` coefficients |
//! | `psi-tilde-4`| `(r, z)`  | `anti-z`      | `ln(1/Rbar) - ln(1/r)`, n = 4 only |
//! | `psi-ring`   | ring      | `anti-double` | cos-weighted ring integral, `r` prefactor |
//! | `psi-ring-2` | ring      | `anti-double` | planar (n = 2) ring integral, no `1/pi` |
//! | `chi`        | ring      | `anti-z`      | unweighted ring integral, no prefactor |
//! | `xi-ring`    | ring      | `laplace-rz`  | cos-weighted `R^(2-n)` integral |

use crate::coeff::{
    a_coeff, a_coeff_even, b_coeff, rat_int, rational_string, PiRational, Rational,
};
use crate::numerics::quad::{integrate, QuadratureSpec};
use crate::termalg::{Monomial2D, OperatorKind, TermSum1D, TermSum2D};
use crate::{domain_err, DomainError};
use num::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::fmt;

pub use crate::termalg::EvalError;

/// The solution families this crate can build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionFamily {
    Phi,
    Xi,
    Psi,
    PsiBar,
    PsiTilde4,
    PsiRing,
    PsiRing2,
    Chi,
    XiRing,
}

impl SolutionFamily {
    pub const ALL: [SolutionFamily; 9] = [
        SolutionFamily::Phi,
        SolutionFamily::Xi,
        SolutionFamily::Psi,
        SolutionFamily::PsiBar,
        SolutionFamily::PsiTilde4,
        SolutionFamily::PsiRing,
        SolutionFamily::PsiRing2,
        SolutionFamily::Chi,
        SolutionFamily::XiRing,
    ];

    pub fn parse(s: &str) -> Result<Self, DomainError> {
        match s {
            "phi" => Ok(SolutionFamily::Phi),
            "xi" => Ok(SolutionFamily::Xi),
            "psi" => Ok(SolutionFamily::Psi),
            "psi-bar" => Ok(SolutionFamily::PsiBar),
            "psi-tilde-4" => Ok(SolutionFamily::PsiTilde4),
            "psi-ring" => Ok(SolutionFamily::PsiRing),
            "psi-ring-2" => Ok(SolutionFamily::PsiRing2),
            "chi" => Ok(SolutionFamily::Chi),
            "xi-ring" => Ok(SolutionFamily::XiRing),
            other => domain_err(format!("unknown solution family {other:?}")),
        }
    }

    pub fn is_ring(self) -> bool {
        matches!(
            self,
            SolutionFamily::PsiRing
                | SolutionFamily::PsiRing2
                | SolutionFamily::Chi
                | SolutionFamily::XiRing
        )
    }

    /// The operator the family is a fundamental solution of.
    pub fn operator(self) -> OperatorKind {
        match self {
            SolutionFamily::Phi => OperatorKind::LaplaceX,
            SolutionFamily::Xi => OperatorKind::LaplaceRz,
            // The cos-weighted ring average of the radial kernel carries a
            // hidden cos(phi) factor; peeling it off swaps the r-part of the
            // operator into anti form.
            SolutionFamily::XiRing => OperatorKind::AntiR,
            SolutionFamily::Psi
            | SolutionFamily::PsiBar
            | SolutionFamily::PsiTilde4
            | SolutionFamily::Chi => OperatorKind::AntiZ,
            SolutionFamily::PsiRing | SolutionFamily::PsiRing2 => OperatorKind::AntiDouble,
        }
    }
}

impl fmt::Display for SolutionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SolutionFamily::Phi => "phi",
            SolutionFamily::Xi => "xi",
            SolutionFamily::Psi => "psi",
            SolutionFamily::PsiBar => "psi-bar",
            SolutionFamily::PsiTilde4 => "psi-tilde-4",
            SolutionFamily::PsiRing => "psi-ring",
            SolutionFamily::PsiRing2 => "psi-ring-2",
            SolutionFamily::Chi => "chi",
            SolutionFamily::XiRing => "xi-ring",
        };
        write!(f, "{s}")
    }
}

/// Angular weight of a ring integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingWeight {
    CosAlpha,
    One,
}

/// One term of a ring integrand: `c * z^p * R(alpha)^t * ln(1/R)^e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingTerm {
    #[serde(rename = "c", with = "rational_string")]
    pub coeff: Rational,
    #[serde(rename = "z")]
    pub z_pow: u32,
    #[serde(rename = "R")]
    pub big_r_pow: i32,
    #[serde(rename = "log")]
    pub log: u8,
}

/// A ring-source field
/// `scale * (1/pi)^inv_pi * r^r_prefactor * integral_0^pi weight(alpha) * sum(terms) dalpha`.
///
/// The ring radius `a` is supplied at evaluation time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingIntegrand {
    #[serde(with = "rational_string")]
    pub scale: Rational,
    pub inv_pi: bool,
    pub r_prefactor: u8,
    pub weight: RingWeight,
    pub terms: Vec<RingTerm>,
}

/// A built solution: an exact term sum in one of the two frames, or a ring
/// integrand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Solution {
    PointRz { sum: TermSum2D },
    PointX { sum: TermSum1D },
    Ring { integrand: RingIntegrand },
}

fn odd_anti_point(n: u32, use_a: bool) -> Result<TermSum2D, DomainError> {
    let mut terms = Vec::new();
    let mut k = 3u32;
    while k <= n {
        let c = if use_a { a_coeff(k, n)? } else { b_coeff(k, n)? };
        terms.push(Monomial2D::power(c, 0, k as i32 - 3, 2 - k as i32));
        k += 2;
    }
    Ok(TermSum2D::new(terms))
}

fn even_anti_point(n: u32) -> Result<TermSum2D, DomainError> {
    let mut terms = vec![Monomial2D::log_rbar(rat_int(1))];
    let mut l = 6u32;
    while l <= n {
        let c = a_coeff_even(l, n)?;
        terms.push(Monomial2D::power(c, 0, l as i32 - 4, 4 - l as i32));
        l += 2;
    }
    Ok(TermSum2D::new(terms))
}

fn ring_terms_odd(n: u32) -> Result<Vec<RingTerm>, DomainError> {
    let mut terms = Vec::new();
    let mut k = 3u32;
    while k <= n {
        terms.push(RingTerm {
            coeff: b_coeff(k, n)?,
            z_pow: k - 3,
            big_r_pow: 2 - k as i32,
            log: 0,
        });
        k += 2;
    }
    Ok(terms)
}

fn ring_terms_even(n: u32) -> Result<Vec<RingTerm>, DomainError> {
    let mut terms = vec![RingTerm {
        coeff: rat_int(1),
        z_pow: 0,
        big_r_pow: 0,
        log: 1,
    }];
    let mut l = 6u32;
    while l <= n {
        terms.push(RingTerm {
            coeff: a_coeff_even(l, n)?,
            z_pow: l - 4,
            big_r_pow: 4 - l as i32,
            log: 0,
        });
        l += 2;
    }
    Ok(terms)
}

/// Build the solution of `family` in dimension `n`.
pub fn build(family: SolutionFamily, n: u32) -> Result<Solution, DomainError> {
    match family {
        SolutionFamily::Phi => Ok(Solution::PointX {
            sum: crate::termalg::phi_x(n)?,
        }),
        SolutionFamily::Xi => {
            if n < 2 {
                return domain_err(format!("xi needs n >= 2, got {n}"));
            }
            let sum = if n == 2 {
                TermSum2D::new(vec![Monomial2D::log_r(rat_int(1))])
            } else {
                TermSum2D::new(vec![Monomial2D::power(rat_int(1), 0, 0, 2 - n as i32)])
            };
            Ok(Solution::PointRz { sum })
        }
        SolutionFamily::Psi => {
            if n < 3 {
                return domain_err(format!("psi needs n >= 3, got {n}"));
            }
            let sum = if n % 2 == 1 {
                odd_anti_point(n, true)?
            } else {
                even_anti_point(n)?
            };
            Ok(Solution::PointRz { sum })
        }
        SolutionFamily::PsiBar => {
            if n < 3 || n % 2 == 0 {
                return domain_err(format!("psi-bar needs odd n >= 3, got {n}"));
            }
            Ok(Solution::PointRz {
                sum: odd_anti_point(n, false)?,
            })
        }
        SolutionFamily::PsiTilde4 => {
            if n != 4 {
                return domain_err(format!("psi-tilde-4 exists only at n = 4, got {n}"));
            }
            Ok(Solution::PointRz {
                sum: TermSum2D::new(vec![
                    Monomial2D::log_rbar(rat_int(1)),
                    Monomial2D::log_r(rat_int(-1)),
                ]),
            })
        }
        SolutionFamily::PsiRing => {
            if n < 3 {
                return domain_err(format!("psi-ring needs n >= 3, got {n}"));
            }
            let terms = if n % 2 == 1 {
                ring_terms_odd(n)?
            } else {
                ring_terms_even(n)?
            };
            Ok(Solution::Ring {
                integrand: RingIntegrand {
                    scale: rat_int(1),
                    inv_pi: true,
                    r_prefactor: 1,
                    weight: RingWeight::CosAlpha,
                    terms,
                },
            })
        }
        SolutionFamily::PsiRing2 => {
            if n != 2 {
                return domain_err(format!("psi-ring-2 exists only at n = 2, got {n}"));
            }
            // Planar family: R reduces to the in-plane distance at z = 0,
            // which is where this field is meaningful.
            Ok(Solution::Ring {
                integrand: RingIntegrand {
                    scale: rat_int(1),
                    inv_pi: false,
                    r_prefactor: 1,
                    weight: RingWeight::CosAlpha,
                    terms: vec![RingTerm {
                        coeff: rat_int(1),
                        z_pow: 0,
                        big_r_pow: 0,
                        log: 1,
                    }],
                },
            })
        }
        SolutionFamily::Chi => {
            if n < 3 {
                return domain_err(format!("chi needs n >= 3, got {n}"));
            }
            let terms = if n % 2 == 1 {
                ring_terms_odd(n)?
            } else {
                ring_terms_even(n)?
            };
            Ok(Solution::Ring {
                integrand: RingIntegrand {
                    scale: rat_int(1),
                    inv_pi: true,
                    r_prefactor: 0,
                    weight: RingWeight::One,
                    terms,
                },
            })
        }
        SolutionFamily::XiRing => {
            if n < 3 {
                return domain_err(format!("xi-ring needs n >= 3, got {n}"));
            }
            Ok(Solution::Ring {
                integrand: RingIntegrand {
                    scale: rat_int(1),
                    inv_pi: true,
                    r_prefactor: 1,
                    weight: RingWeight::CosAlpha,
                    terms: vec![RingTerm {
                        coeff: rat_int(1),
                        z_pow: 0,
                        big_r_pow: 2 - n as i32,
                        log: 0,
                    }],
                },
            })
        }
    }
}

/// Distribution kind of a family's source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    DeltaPoint,
    DeltaRing,
    ThetaPoint,
    ThetaRing,
    DeltaRingWeighted,
}

/// The distributional source a family satisfies under its operator, with
/// the exact normalization and, where the excision pairing is implemented,
/// the expected pairing value in units of the trial value at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub family: SolutionFamily,
    pub n: u32,
    pub operator: OperatorKind,
    pub kind: SourceKind,
    pub normalization: PiRational,
    pub description: String,
    #[serde(with = "optional_rational_string")]
    pub expected_pairing: Option<Rational>,
}

mod optional_rational_string {
    use super::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(value: &Option<Rational>, ser: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => ser.serialize_some(&v.to_string()),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(de)?;
        match s {
            None => Ok(None),
            Some(s) => Rational::from_str(&s)
                .map(Some)
                .map_err(|e| D::Error::custom(format!("bad rational {s:?}: {e}"))),
        }
    }
}

/// Source description for `family` at dimension `n`. Errors for `phi`,
/// whose frame has no implemented pairing.
pub fn source_spec(family: SolutionFamily, n: u32) -> Result<SourceSpec, DomainError> {
    // Validates n by building.
    let _ = build(family, n)?;
    let operator = family.operator();
    let minus_one = PiRational::from_rational(rat_int(-1));
    let spec = match family {
        SolutionFamily::Phi => {
            return domain_err(
                "no source spec for phi: the x-frame pairing is not implemented".to_string(),
            )
        }
        SolutionFamily::Xi => SourceSpec {
            family,
            n,
            operator,
            kind: SourceKind::DeltaPoint,
            normalization: minus_one,
            description: "-delta_+(r)/r * delta_+(z)/z^(n-3), paired in the r z^(n-3) dr dz measure"
                .to_string(),
            expected_pairing: Some(rat_int(-1)),
        },
        SolutionFamily::Psi => {
            if n % 2 == 1 {
                let strength = crate::coeff::coeff_sums(n)?.sum_a;
                SourceSpec {
                    family,
                    n,
                    operator,
                    kind: SourceKind::DeltaPoint,
                    normalization: PiRational::from_rational(-&strength),
                    description: "-((n-3)!!/(n-4)!!) delta_+(r)/r * delta_+(z)".to_string(),
                    expected_pairing: Some(-strength),
                }
            } else {
                SourceSpec {
                    family,
                    n,
                    operator,
                    kind: SourceKind::ThetaPoint,
                    normalization: minus_one,
                    description: "-delta_+(r)/r * (1 - Theta_+(z)); whole-space pairing vanishes"
                        .to_string(),
                    expected_pairing: Some(rat_int(0)),
                }
            }
        }
        SolutionFamily::PsiBar => SourceSpec {
            family,
            n,
            operator,
            kind: SourceKind::DeltaPoint,
            normalization: minus_one,
            description: "-delta_+(r)/r * delta_+(z)".to_string(),
            expected_pairing: Some(rat_int(-1)),
        },
        SolutionFamily::PsiTilde4 => SourceSpec {
            family,
            n,
            operator,
            kind: SourceKind::ThetaPoint,
            normalization: PiRational::from_rational(rat_int(1)),
            description: "+delta_+(r)/r * Theta_+(z); pairing is an axis integral of the trial, \
                          not a multiple of its origin value"
                .to_string(),
            expected_pairing: None,
        },
        SolutionFamily::PsiRing => {
            if n % 2 == 1 {
                SourceSpec {
                    family,
                    n,
                    operator,
                    kind: SourceKind::DeltaRing,
                    normalization: minus_one,
                    description: "-delta(r-a) * delta_+(z)".to_string(),
                    expected_pairing: None,
                }
            } else {
                SourceSpec {
                    family,
                    n,
                    operator,
                    kind: SourceKind::ThetaRing,
                    normalization: minus_one,
                    description: "-delta(r-a) * (1 - Theta_+(z))".to_string(),
                    expected_pairing: None,
                }
            }
        }
        SolutionFamily::PsiRing2 => SourceSpec {
            family,
            n,
            operator,
            kind: SourceKind::DeltaRing,
            normalization: PiRational::new(rat_int(-1), 1),
            description: "-pi delta(r-a); constant derived from the closed planar form \
                          (pi r^2/(2a) inside, pi a/2 outside)"
                .to_string(),
            expected_pairing: None,
        },
        SolutionFamily::Chi => {
            if n % 2 == 1 {
                SourceSpec {
                    family,
                    n,
                    operator,
                    kind: SourceKind::DeltaRingWeighted,
                    normalization: minus_one,
                    description: "-delta(r-a)/r * delta_+(z)".to_string(),
                    expected_pairing: None,
                }
            } else {
                SourceSpec {
                    family,
                    n,
                    operator,
                    kind: SourceKind::ThetaRing,
                    normalization: minus_one,
                    description: "-delta(r-a)/r * (1 - Theta_+(z))".to_string(),
                    expected_pairing: None,
                }
            }
        }
        SolutionFamily::XiRing => SourceSpec {
            family,
            n,
            operator,
            kind: SourceKind::DeltaRingWeighted,
            normalization: minus_one,
            description: "-delta(r-a) * delta_+(z)/z^(n-3)".to_string(),
            expected_pairing: None,
        },
    };
    Ok(spec)
}

/// Coefficients of the anti-z odd point solution as a combination of the
/// Laplace point solutions: pairs `(a(k, n), k)` such that the solution is
/// `sum a(k,n) z^(k-3) xi_k`.
pub fn decompose_a_in_l(n: u32) -> Result<Vec<(Rational, u32)>, DomainError> {
    if n < 3 || n % 2 == 0 {
        return domain_err(format!("decomposition needs odd n >= 3, got {n}"));
    }
    let mut out = Vec::new();
    let mut k = 3u32;
    while k <= n {
        out.push((a_coeff(k, n)?, k));
        k += 2;
    }
    Ok(out)
}

/// Evaluate an `(r, z)` term sum at a point. See [`TermSum2D::eval`].
pub fn eval_termsum(ts: &TermSum2D, r: f64, z: f64) -> Result<f64, EvalError> {
    ts.eval(r, z)
}

/// Evaluate an `x` term sum at a point. See [`TermSum1D::eval`].
pub fn eval_termsum_x(ts: &TermSum1D, x: f64) -> Result<f64, EvalError> {
    ts.eval(x)
}

/// Value and quadrature error estimate of a ring field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingEval {
    pub value: f64,
    pub err_estimate: f64,
    pub evals: u64,
}

/// Evaluate a ring integrand at field point `(r, z)` for ring radius
/// `a > 0`. Errors on the ring itself (`r = a`, `z = 0`), where every
/// negative power or logarithm of `R(alpha)` is singular at `alpha = 0`.
pub fn eval_ring(
    ri: &RingIntegrand,
    r: f64,
    z: f64,
    a: f64,
    quad: &QuadratureSpec,
) -> Result<RingEval, EvalError> {
    if !r.is_finite() || !z.is_finite() || !a.is_finite() {
        return Err(EvalError::NonFiniteInput {
            at: format!("(r, z, a) = ({r}, {z}, {a})"),
        });
    }
    if a <= 0.0 {
        return Err(EvalError::NonFiniteInput {
            at: format!("ring radius must be positive, got a = {a}"),
        });
    }
    if r < 0.0 {
        return Err(EvalError::NonFiniteInput {
            at: format!("field radius must be nonnegative, got r = {r}"),
        });
    }
    let needs_positive_r_dist = ri
        .terms
        .iter()
        .any(|t| t.big_r_pow < 0 || t.log == 1);
    if needs_positive_r_dist && (r - a).abs() == 0.0 && z == 0.0 {
        return Err(EvalError::SingularTerm {
            term: "ring integrand".to_string(),
            at: format!("(r, z) = ({r}, {z}) lies on the source ring a = {a}"),
        });
    }
    let coeffs: Vec<f64> = ri
        .terms
        .iter()
        .map(|t| t.coeff.to_f64().unwrap_or(f64::NAN))
        .collect();
    let mut f = |alpha: f64| {
        let rr = (r * r + a * a - 2.0 * a * r * alpha.cos() + z * z).sqrt();
        let w = match ri.weight {
            RingWeight::CosAlpha => alpha.cos(),
            RingWeight::One => 1.0,
        };
        let mut acc = 0.0;
        for (t, c) in ri.terms.iter().zip(coeffs.iter()) {
            let mut v = c * z.powi(t.z_pow as i32) * rr.powi(t.big_r_pow);
            if t.log == 1 {
                v *= -rr.ln();
            }
            acc += v;
        }
        w * acc
    };
    let q = integrate(&mut f, 0.0, std::f64::consts::PI, quad)
        .map_err(|e| EvalError::NonFiniteInput { at: e.message })?;
    let mut scale = ri.scale.to_f64().unwrap_or(f64::NAN);
    if ri.inv_pi {
        scale /= std::f64::consts::PI;
    }
    if ri.r_prefactor == 1 {
        scale *= r;
    }
    let value = scale * q.value;
    if !value.is_finite() {
        return Err(EvalError::SingularTerm {
            term: "ring integrand".to_string(),
            at: format!("(r, z) = ({r}, {z}), a = {a}"),
        });
    }
    Ok(RingEval {
        value,
        err_estimate: scale.abs() * q.err_estimate,
        evals: q.evals,
    })
}

/// Evaluate any built solution at a point. Ring families need `a`;
/// `x`-frame families read the first coordinate as `x`.
pub fn eval_solution(
    sol: &Solution,
    r: f64,
    z: f64,
    a: Option<f64>,
    quad: &QuadratureSpec,
) -> Result<RingEval, EvalError> {
    match sol {
        Solution::PointRz { sum } => Ok(RingEval {
            value: sum.eval(r, z)?,
            err_estimate: 0.0,
            evals: 0,
        }),
        Solution::PointX { sum } => Ok(RingEval {
            value: sum.eval(r)?,
            err_estimate: 0.0,
            evals: 0,
        }),
        Solution::Ring { integrand } => {
            let a = a.ok_or_else(|| EvalError::NonFiniteInput {
                at: "ring families need a ring radius a".to_string(),
            })?;
            eval_ring(integrand, r, z, a, quad)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::termalg::apply_operator;

    fn point_sum(family: SolutionFamily, n: u32) -> TermSum2D {
        match build(family, n).unwrap() {
            Solution::PointRz { sum } => sum,
            other => panic!("expected point solution, got {other:?}"),
        }
    }

    fn ring(family: SolutionFamily, n: u32) -> RingIntegrand {
        match build(family, n).unwrap() {
            Solution::Ring { integrand } => integrand,
            other => panic!("expected ring solution, got {other:?}"),
        }
    }

    #[test]
    fn anti_z_annihilates_point_families() {
        for n in (3u32..=21).step_by(2) {
            let psi = point_sum(SolutionFamily::Psi, n);
            assert!(apply_operator(OperatorKind::AntiZ, n, &psi).unwrap().is_zero(), "psi n = {n}");
            let bar = point_sum(SolutionFamily::PsiBar, n);
            assert!(apply_operator(OperatorKind::AntiZ, n, &bar).unwrap().is_zero(), "bar n = {n}");
        }
        for n in (4u32..=20).step_by(2) {
            let psi = point_sum(SolutionFamily::Psi, n);
            assert!(apply_operator(OperatorKind::AntiZ, n, &psi).unwrap().is_zero(), "psi n = {n}");
        }
        let tilde = point_sum(SolutionFamily::PsiTilde4, 4);
        assert!(apply_operator(OperatorKind::AntiZ, 4, &tilde).unwrap().is_zero());
    }

    #[test]
    fn laplace_annihilates_xi() {
        for n in 2u32..=20 {
            let xi = point_sum(SolutionFamily::Xi, n);
            assert!(
                apply_operator(OperatorKind::LaplaceRz, n, &xi).unwrap().is_zero(),
                "xi n = {n}"
            );
        }
    }

    #[test]
    fn even_psi_z_derivative_closed_form() {
        // d_z psi_n = -z^(n-3) Rbar^(2-n) for even n.
        for n in (4u32..=20).step_by(2) {
            let psi = point_sum(SolutionFamily::Psi, n);
            let want = TermSum2D::new(vec![Monomial2D::power(
                rat_int(-1),
                0,
                n as i32 - 3,
                2 - n as i32,
            )]);
            assert_eq!(psi.d_z(), want, "n = {n}");
        }
    }

    #[test]
    fn psi_4_splits_into_tilde_plus_planar_log() {
        let psi4 = point_sum(SolutionFamily::Psi, 4);
        let tilde = point_sum(SolutionFamily::PsiTilde4, 4);
        let log_r = TermSum2D::new(vec![Monomial2D::log_r(rat_int(1))]);
        assert_eq!(tilde.add(&log_r), psi4);
    }

    #[test]
    fn decomposition_reassembles_psi() {
        for n in (3u32..=15).step_by(2) {
            let mut acc = TermSum2D::zero();
            for (c, k) in decompose_a_in_l(n).unwrap() {
                let xi_k = point_sum(SolutionFamily::Xi, k);
                acc = acc.add(&xi_k.mul_powers(0, k as i32 - 3, 0).scale(&c));
            }
            assert_eq!(acc, point_sum(SolutionFamily::Psi, n), "n = {n}");
        }
        let d9 = decompose_a_in_l(9).unwrap();
        let want: Vec<(Rational, u32)> = vec![
            (rat_int(1), 3),
            (rat(3, 5), 5),
            (rat(3, 5), 7),
            (rat_int(1), 9),
        ];
        assert_eq!(d9, want);
    }

    #[test]
    fn eval_spot_values() {
        let psi5 = point_sum(SolutionFamily::Psi, 5);
        assert!((eval_termsum(&psi5, 3.0, 4.0).unwrap() - 0.328).abs() < 1e-15);
        let xi4 = point_sum(SolutionFamily::Xi, 4);
        assert!((eval_termsum(&xi4, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn chi_4_on_axis_matches_closed_form() {
        // On the axis R is constant sqrt(a^2 + z^2): chi_4(0, 1; a = 1) =
        // ln(1/sqrt(2)) = -ln(2)/2.
        let chi4 = ring(SolutionFamily::Chi, 4);
        let quad = QuadratureSpec::default();
        let got = eval_ring(&chi4, 0.0, 1.0, 1.0, &quad).unwrap();
        let want = -0.5 * std::f64::consts::LN_2;
        assert!((got.value - want).abs() < 1e-12, "got {}", got.value);
    }

    #[test]
    fn psi_ring_3_matches_fixed_grid_oracle() {
        // Independent composite-Simpson oracle on a fine fixed grid.
        let psi3 = ring(SolutionFamily::PsiRing, 3);
        let (r, z, a) = (2.0, 1.0, 1.0);
        let f = |alpha: f64| {
            let rr = (r * r + a * a - 2.0 * a * r * alpha.cos() + z * z).sqrt();
            alpha.cos() / rr
        };
        let panels = 200_000;
        let h = std::f64::consts::PI / panels as f64;
        let mut acc = f(0.0) + f(std::f64::consts::PI);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(i as f64 * h);
        }
        let oracle = r / std::f64::consts::PI * (acc * h / 3.0);
        let quad = QuadratureSpec::default();
        let got = eval_ring(&psi3, r, z, a, &quad).unwrap();
        assert!(
            (got.value - oracle).abs() < 1e-10,
            "got {}, oracle {oracle}",
            got.value
        );
    }

    #[test]
    fn planar_ring_matches_piecewise_closed_form() {
        // psi-ring-2 at z = 0 is pi r^2 / (2 a) inside and pi a / 2 outside.
        let ring2 = ring(SolutionFamily::PsiRing2, 2);
        let quad = QuadratureSpec::default();
        let a = 1.3;
        for r in [0.2, 0.7, 1.0] {
            let got = eval_ring(&ring2, r, 0.0, a, &quad).unwrap();
            let want = std::f64::consts::PI * r * r / (2.0 * a);
            assert!((got.value - want).abs() < 1e-9, "inside r = {r}: {}", got.value);
        }
        for r in [1.5, 2.0, 4.0] {
            let got = eval_ring(&ring2, r, 0.0, a, &quad).unwrap();
            let want = std::f64::consts::PI * a / 2.0;
            assert!((got.value - want).abs() < 1e-9, "outside r = {r}: {}", got.value);
        }
    }

    #[test]
    fn ring_singularities_and_domains() {
        let xi3 = ring(SolutionFamily::XiRing, 3);
        let quad = QuadratureSpec::default();
        assert!(eval_ring(&xi3, 1.0, 0.0, 1.0, &quad).is_err());
        assert!(eval_ring(&xi3, 1.0, 0.5, -1.0, &quad).is_err());
        assert!(eval_ring(&xi3, 1.0, 0.5, 1.0, &quad).is_ok());
        assert!(build(SolutionFamily::PsiBar, 4).is_err());
        assert!(build(SolutionFamily::PsiTilde4, 6).is_err());
        assert!(build(SolutionFamily::PsiRing2, 3).is_err());
        assert!(build(SolutionFamily::Psi, 2).is_err());
    }

    #[test]
    fn source_specs() {
        assert!(source_spec(SolutionFamily::Phi, 5).is_err());
        let xi = source_spec(SolutionFamily::Xi, 4).unwrap();
        assert_eq!(xi.kind, SourceKind::DeltaPoint);
        assert_eq!(xi.expected_pairing, Some(rat_int(-1)));
        let psi7 = source_spec(SolutionFamily::Psi, 7).unwrap();
        assert_eq!(psi7.expected_pairing, Some(rat(-8, 3)));
        let psi6 = source_spec(SolutionFamily::Psi, 6).unwrap();
        assert_eq!(psi6.kind, SourceKind::ThetaPoint);
        assert_eq!(psi6.expected_pairing, Some(rat_int(0)));
        let ring2 = source_spec(SolutionFamily::PsiRing2, 2).unwrap();
        assert_eq!(ring2.normalization, PiRational::new(rat_int(-1), 1));
        let chi5 = source_spec(SolutionFamily::Chi, 5).unwrap();
        assert_eq!(chi5.kind, SourceKind::DeltaRingWeighted);
        assert!(chi5.expected_pairing.is_none());
        let bar = source_spec(SolutionFamily::PsiBar, 9).unwrap();
        assert_eq!(bar.expected_pairing, Some(rat_int(-1)));
    }

    #[test]
    fn solution_serde_round_trip() {
        let sol = build(SolutionFamily::PsiRing, 5).unwrap();
        let json = serde_json::to_string(&sol).unwrap();
        assert!(json.contains("\"inv_pi\":true"));
        let back: Solution = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sol);
        let spec = source_spec(SolutionFamily::Psi, 5).unwrap();
        let sj = serde_json::to_string(&spec).unwrap();
        let back: SourceSpec = serde_json::from_str(&sj).unwrap();
        assert_eq!(back, spec);
    }
}
