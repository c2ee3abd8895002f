//! Canonical term sums over the `(r, z, Rbar)` basis.

use crate::coeff::{rat_int, rational_string, Rational};
use num::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// One exact term `c * r^i * z^p * Rbar^t * ln(1/Rbar)^e * ln(1/r)^f`.
///
/// In a canonical sum the `r` power lies in `{0, 1}` shifted down by a
/// common factored-out power (see [`TermSum2D`]); built-in solution families
/// always have `r_pow` in `{0, 1}` and `z_pow >= 0`. `log` and `log_r` are
/// 0/1 flags; no operation here ever produces a squared logarithm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial2D {
    #[serde(rename = "c", with = "rational_string")]
    pub coeff: Rational,
    #[serde(rename = "r")]
    pub r_pow: i32,
    #[serde(rename = "z")]
    pub z_pow: i32,
    #[serde(rename = "Rbar")]
    pub rbar_pow: i32,
    #[serde(rename = "log")]
    pub log_rbar: u8,
    #[serde(rename = "log_r", default, skip_serializing_if = "u8_is_zero")]
    pub log_r: u8,
}

fn u8_is_zero(v: &u8) -> bool {
    *v == 0
}

impl Monomial2D {
    pub fn power(coeff: Rational, r_pow: i32, z_pow: i32, rbar_pow: i32) -> Self {
        Monomial2D {
            coeff,
            r_pow,
            z_pow,
            rbar_pow,
            log_rbar: 0,
            log_r: 0,
        }
    }

    pub fn log_rbar(coeff: Rational) -> Self {
        Monomial2D {
            coeff,
            r_pow: 0,
            z_pow: 0,
            rbar_pow: 0,
            log_rbar: 1,
            log_r: 0,
        }
    }

    pub fn log_r(coeff: Rational) -> Self {
        Monomial2D {
            coeff,
            r_pow: 0,
            z_pow: 0,
            rbar_pow: 0,
            log_rbar: 0,
            log_r: 1,
        }
    }

    fn key(&self) -> (i32, i32, i32, u8, u8) {
        (self.r_pow, self.z_pow, self.rbar_pow, self.log_rbar, self.log_r)
    }
}

impl fmt::Display for Monomial2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coeff)?;
        if self.r_pow != 0 {
            write!(f, " r^{}", self.r_pow)?;
        }
        if self.z_pow != 0 {
            write!(f, " z^{}", self.z_pow)?;
        }
        if self.rbar_pow != 0 {
            write!(f, " Rbar^{}", self.rbar_pow)?;
        }
        if self.log_rbar != 0 {
            write!(f, " ln(1/Rbar)")?;
        }
        if self.log_r != 0 {
            write!(f, " ln(1/r)")?;
        }
        Ok(())
    }
}

/// Evaluation failure for a term sum at a concrete point.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    /// A term is singular at the requested point; carries the printed term.
    SingularTerm { term: String, at: String },
    /// An input coordinate was NaN or infinite.
    NonFiniteInput { at: String },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::SingularTerm { term, at } => {
                write!(f, "term {term} is singular at {at}")
            }
            EvalError::NonFiniteInput { at } => write!(f, "non-finite input point {at}"),
        }
    }
}

impl std::error::Error for EvalError {}

/// A canonical sum of [`Monomial2D`] terms.
///
/// Canonical form: positive powers of `r` are reduced with
/// `r^2 = Rbar^2 - z^2` until every `r` power is 0 or 1; equal keys are
/// merged and zero coefficients dropped; if negative `r` powers remain the
/// whole sum is written as `r^-J * G` with `J` minimal and `G` reduced as
/// above (so the stored `r` powers are `{-J, 1-J}`). Minimality of `J` makes
/// the representation unique: `{1, r}` is a free basis over Laurent
/// polynomials in `z` and `Rbar` once even `r` powers are eliminated, per
/// log sector. The zero sum is the empty term list, so exact operator
/// identities are decided by canonicalizing a difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermSum2D {
    terms: Vec<Monomial2D>,
}

impl Serialize for TermSum2D {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            terms: &'a [Monomial2D],
        }
        Raw { terms: &self.terms }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TermSum2D {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            terms: Vec<Monomial2D>,
        }
        Ok(TermSum2D::new(Raw::deserialize(de)?.terms))
    }
}

impl TermSum2D {
    pub fn new(terms: Vec<Monomial2D>) -> Self {
        TermSum2D {
            terms: canonicalize(terms),
        }
    }

    pub fn zero() -> Self {
        TermSum2D { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Monomial2D] {
        &self.terms
    }

    pub fn add(&self, other: &TermSum2D) -> TermSum2D {
        let mut all = self.terms.clone();
        all.extend(other.terms.iter().cloned());
        TermSum2D::new(all)
    }

    pub fn sub(&self, other: &TermSum2D) -> TermSum2D {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TermSum2D {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.coeff = -&t.coeff;
                t
            })
            .collect();
        TermSum2D { terms }
    }

    pub fn scale(&self, s: &Rational) -> TermSum2D {
        if s.is_zero() {
            return TermSum2D::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.coeff = &t.coeff * s;
                t
            })
            .collect();
        TermSum2D { terms }
    }

    /// Multiply by the monomial `r^dr * z^dz * Rbar^dt`.
    pub fn mul_powers(&self, dr: i32, dz: i32, dt: i32) -> TermSum2D {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.r_pow += dr;
                t.z_pow += dz;
                t.rbar_pow += dt;
                t
            })
            .collect();
        TermSum2D::new(terms)
    }

    /// Exact derivative in `r`.
    pub fn d_r(&self) -> TermSum2D {
        let mut out = Vec::new();
        for t in &self.terms {
            if t.r_pow != 0 {
                let mut u = t.clone();
                u.coeff = &t.coeff * rat_int(t.r_pow as i64);
                u.r_pow -= 1;
                out.push(u);
            }
            if t.rbar_pow != 0 {
                let mut u = t.clone();
                u.coeff = &t.coeff * rat_int(t.rbar_pow as i64);
                u.r_pow += 1;
                u.rbar_pow -= 2;
                out.push(u);
            }
            if t.log_rbar == 1 {
                let mut u = t.clone();
                u.coeff = -&t.coeff;
                u.r_pow += 1;
                u.rbar_pow -= 2;
                u.log_rbar = 0;
                out.push(u);
            }
            if t.log_r == 1 {
                let mut u = t.clone();
                u.coeff = -&t.coeff;
                u.r_pow -= 1;
                u.log_r = 0;
                out.push(u);
            }
        }
        TermSum2D::new(out)
    }

    /// Exact derivative in `z`.
    pub fn d_z(&self) -> TermSum2D {
        let mut out = Vec::new();
        for t in &self.terms {
            if t.z_pow != 0 {
                let mut u = t.clone();
                u.coeff = &t.coeff * rat_int(t.z_pow as i64);
                u.z_pow -= 1;
                out.push(u);
            }
            if t.rbar_pow != 0 {
                let mut u = t.clone();
                u.coeff = &t.coeff * rat_int(t.rbar_pow as i64);
                u.z_pow += 1;
                u.rbar_pow -= 2;
                out.push(u);
            }
            if t.log_rbar == 1 {
                let mut u = t.clone();
                u.coeff = -&t.coeff;
                u.z_pow += 1;
                u.rbar_pow -= 2;
                u.log_rbar = 0;
                out.push(u);
            }
        }
        TermSum2D::new(out)
    }

    /// Evaluate at a concrete point. Fails with the offending term when a
    /// negative power or logarithm hits a zero coordinate.
    pub fn eval(&self, r: f64, z: f64) -> Result<f64, EvalError> {
        if !r.is_finite() || !z.is_finite() {
            return Err(EvalError::NonFiniteInput {
                at: format!("(r, z) = ({r}, {z})"),
            });
        }
        let rbar = (r * r + z * z).sqrt();
        let mut acc = 0.0;
        for t in &self.terms {
            let singular = (r == 0.0 && (t.r_pow < 0 || t.log_r == 1))
                || (z == 0.0 && t.z_pow < 0)
                || (rbar == 0.0 && (t.rbar_pow < 0 || t.log_rbar == 1));
            if singular {
                return Err(EvalError::SingularTerm {
                    term: t.to_string(),
                    at: format!("(r, z) = ({r}, {z})"),
                });
            }
            let mut v = t.coeff.to_f64().unwrap_or(f64::NAN);
            v *= r.powi(t.r_pow);
            v *= z.powi(t.z_pow);
            v *= rbar.powi(t.rbar_pow);
            if t.log_rbar == 1 {
                v *= -rbar.ln();
            }
            if t.log_r == 1 {
                v *= -r.ln();
            }
            acc += v;
        }
        Ok(acc)
    }
}

impl fmt::Display for TermSum2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Reduce every term to `r` power <= 1 using `r^2 = Rbar^2 - z^2`.
fn reduce_r_powers(terms: Vec<Monomial2D>) -> Vec<Monomial2D> {
    let mut work = terms;
    let mut out = Vec::with_capacity(work.len());
    while let Some(t) = work.pop() {
        if t.r_pow >= 2 {
            let mut a = t.clone();
            a.r_pow -= 2;
            a.rbar_pow += 2;
            let mut b = t;
            b.coeff = -&b.coeff;
            b.r_pow -= 2;
            b.z_pow += 2;
            work.push(a);
            work.push(b);
        } else {
            out.push(t);
        }
    }
    out
}

/// Merge equal keys, drop zeros, sort.
fn merge(terms: Vec<Monomial2D>) -> Vec<Monomial2D> {
    let mut map: BTreeMap<(i32, i32, i32, u8, u8), Rational> = BTreeMap::new();
    for t in terms {
        let entry = map.entry(t.key()).or_insert_with(Rational::zero);
        *entry += t.coeff;
    }
    map.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((r_pow, z_pow, rbar_pow, log_rbar, log_r), coeff)| Monomial2D {
            coeff,
            r_pow,
            z_pow,
            rbar_pow,
            log_rbar,
            log_r,
        })
        .collect()
}

/// Try to divide a merged, `r`-reduced sum `G = A + r B` by `r`, i.e. check
/// that the `r^0` component `A` is divisible by `Rbar^2 - z^2` per log
/// sector; on success return `B + r * (A / (Rbar^2 - z^2))`.
fn divide_by_r(terms: &[Monomial2D]) -> Option<Vec<Monomial2D>> {
    let mut result: Vec<Monomial2D> = Vec::new();
    // Group the r^0 part by log sector; pass the r^1 part through.
    let mut sectors: BTreeMap<(u8, u8), Vec<&Monomial2D>> = BTreeMap::new();
    for t in terms {
        match t.r_pow {
            0 => sectors.entry((t.log_rbar, t.log_r)).or_default().push(t),
            1 => {
                let mut u = t.clone();
                u.r_pow = 0;
                result.push(u);
            }
            _ => return None,
        }
    }
    for ((log_rbar, log_r), sector) in sectors {
        // Shift exponents to be nonnegative: A = z^z0 Rbar^t0 * P(z, Rbar).
        let z0 = sector.iter().map(|t| t.z_pow).min().unwrap();
        let t0 = sector.iter().map(|t| t.rbar_pow).min().unwrap();
        let mut poly: BTreeMap<(i32, i32), Rational> = BTreeMap::new();
        for t in &sector {
            *poly
                .entry((t.z_pow - z0, t.rbar_pow - t0))
                .or_insert_with(Rational::zero) += t.coeff.clone();
        }
        poly.retain(|_, c| !c.is_zero());
        // Long division of P by (Rbar^2 - z^2) along the Rbar degree.
        let mut quotient: BTreeMap<(i32, i32), Rational> = BTreeMap::new();
        while let Some((&(zp, tp), _)) = poly.iter().max_by_key(|((_, tp), _)| *tp) {
            if tp < 2 {
                break;
            }
            let c = poly.remove(&(zp, tp)).unwrap();
            *quotient.entry((zp, tp - 2)).or_insert_with(Rational::zero) += c.clone();
            let low = poly.entry((zp + 2, tp - 2)).or_insert_with(Rational::zero);
            *low += c;
            if low.is_zero() {
                poly.remove(&(zp + 2, tp - 2));
            }
        }
        if !poly.is_empty() {
            return None;
        }
        for ((zp, tp), c) in quotient {
            result.push(Monomial2D {
                coeff: c,
                r_pow: 1,
                z_pow: zp + z0,
                rbar_pow: tp + t0,
                log_rbar,
                log_r,
            });
        }
    }
    Some(merge(result))
}

fn canonicalize(terms: Vec<Monomial2D>) -> Vec<Monomial2D> {
    let mut reduced = merge(reduce_r_powers(terms));
    if reduced.is_empty() {
        return reduced;
    }
    let min_r = reduced.iter().map(|t| t.r_pow).min().unwrap();
    if min_r >= 0 {
        return reduced;
    }
    // Factor the sum as r^-J * G with G reduced to r powers {0, 1}.
    let mut j = -min_r;
    for t in &mut reduced {
        t.r_pow += j;
    }
    let mut g = merge(reduce_r_powers(reduced));
    while j > 0 && !g.is_empty() {
        match divide_by_r(&g) {
            Some(next) => {
                g = next;
                j -= 1;
            }
            None => break,
        }
    }
    if g.is_empty() {
        return g;
    }
    for t in &mut g {
        t.r_pow -= j;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    fn pw(n: i64, d: i64, r: i32, z: i32, t: i32) -> Monomial2D {
        Monomial2D::power(rat(n, d), r, z, t)
    }

    #[test]
    fn even_r_powers_reduce() {
        // r^2 == Rbar^2 - z^2
        let lhs = TermSum2D::new(vec![pw(1, 1, 2, 0, 0)]);
        let rhs = TermSum2D::new(vec![pw(1, 1, 0, 0, 2), pw(-1, 1, 0, 2, 0)]);
        assert_eq!(lhs, rhs);
        // r^4 reduces too
        let lhs4 = TermSum2D::new(vec![pw(1, 1, 4, 0, 0)]);
        let rhs4 = TermSum2D::new(vec![
            pw(1, 1, 0, 0, 4),
            pw(-2, 1, 0, 2, 2),
            pw(1, 1, 0, 4, 0),
        ]);
        assert_eq!(lhs4, rhs4);
    }

    #[test]
    fn zero_detection_with_negative_r_powers() {
        // r^-1 Rbar^2 - r^-1 z^2 - r == 0
        let ts = TermSum2D::new(vec![
            pw(1, 1, -1, 0, 2),
            pw(-1, 1, -1, 2, 0),
            pw(-1, 1, 1, 0, 0),
        ]);
        assert!(ts.is_zero(), "got {ts}");
    }

    #[test]
    fn negative_r_power_normal_form_is_minimal() {
        // r^-2 Rbar^2 - r^-2 z^2 is just 1 (as a function), J must drop to 0.
        let ts = TermSum2D::new(vec![pw(1, 1, -2, 0, 2), pw(-1, 1, -2, 2, 0)]);
        let one = TermSum2D::new(vec![pw(1, 1, 0, 0, 0)]);
        assert_eq!(ts, one);
        // A genuinely irreducible 1/r stays put.
        let inv = TermSum2D::new(vec![pw(1, 1, -1, 0, 0)]);
        assert_eq!(inv.terms().len(), 1);
        assert_eq!(inv.terms()[0].r_pow, -1);
    }

    #[test]
    fn derivative_of_rbar_powers() {
        // d_r Rbar^-1 = -r Rbar^-3 ; d_z Rbar^-1 = -z Rbar^-3
        let ts = TermSum2D::new(vec![pw(1, 1, 0, 0, -1)]);
        assert_eq!(ts.d_r(), TermSum2D::new(vec![pw(-1, 1, 1, 0, -3)]));
        assert_eq!(ts.d_z(), TermSum2D::new(vec![pw(-1, 1, 0, 1, -3)]));
    }

    #[test]
    fn derivative_of_logs() {
        let lg = TermSum2D::new(vec![Monomial2D::log_rbar(rat(1, 1))]);
        assert_eq!(lg.d_r(), TermSum2D::new(vec![pw(-1, 1, 1, 0, -2)]));
        assert_eq!(lg.d_z(), TermSum2D::new(vec![pw(-1, 1, 0, 1, -2)]));
        let lr = TermSum2D::new(vec![Monomial2D::log_r(rat(1, 1))]);
        assert_eq!(lr.d_r(), TermSum2D::new(vec![pw(-1, 1, -1, 0, 0)]));
        assert!(lr.d_z().is_zero());
    }

    #[test]
    fn mixed_derivatives_commute() {
        let ts = TermSum2D::new(vec![
            pw(3, 5, 1, 2, -4),
            pw(-1, 2, 0, 0, -1),
            Monomial2D::log_rbar(rat(7, 3)),
            Monomial2D::log_r(rat(-1, 4)),
        ]);
        assert_eq!(ts.d_r().d_z(), ts.d_z().d_r());
    }

    #[test]
    fn eval_matches_closed_form() {
        // Psi_5 at (3, 4): 1/Rbar + z^2/Rbar^3 with Rbar = 5.
        let ts = TermSum2D::new(vec![pw(1, 1, 0, 0, -1), pw(1, 1, 0, 2, -3)]);
        let v = ts.eval(3.0, 4.0).unwrap();
        assert!((v - 0.328).abs() < 1e-15, "got {v}");
    }

    #[test]
    fn eval_flags_singular_terms() {
        let ts = TermSum2D::new(vec![pw(1, 1, 0, 0, -1)]);
        let err = ts.eval(0.0, 0.0).unwrap_err();
        match err {
            EvalError::SingularTerm { term, .. } => assert!(term.contains("Rbar^-1")),
            other => panic!("unexpected error {other:?}"),
        }
        let lr = TermSum2D::new(vec![Monomial2D::log_r(rat(1, 1))]);
        assert!(lr.eval(0.0, 1.0).is_err());
        assert!(lr.eval(0.5, 1.0).is_ok());
        assert!(ts.eval(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let ts = TermSum2D::new(vec![
            pw(-3, 5, 0, 2, -3),
            Monomial2D::log_rbar(rat(1, 1)),
            Monomial2D::log_r(rat(-1, 1)),
        ]);
        let json = serde_json::to_string(&ts).unwrap();
        assert!(json.contains("\"Rbar\":-3"));
        assert!(json.contains("\"c\":\"-3/5\""));
        let back: TermSum2D = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ts);
        // log-free terms do not carry the log_r field
        let plain = TermSum2D::new(vec![pw(1, 2, 0, 0, -1)]);
        let pj = serde_json::to_string(&plain).unwrap();
        assert!(!pj.contains("log_r"));
        assert!(pj.contains("\"log\":0"));
    }
}
