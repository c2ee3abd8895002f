//! Canonical term sums in a single radial coordinate `x`.

use super::term2d::EvalError;
use crate::coeff::{rat_int, rational_string, Rational};
use num::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// One exact term `c * x^i * ln(1/x)^e`, `e in {0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial1D {
    #[serde(rename = "c", with = "rational_string")]
    pub coeff: Rational,
    #[serde(rename = "x")]
    pub x_pow: i32,
    #[serde(rename = "log")]
    pub log: u8,
}

impl Monomial1D {
    pub fn power(coeff: Rational, x_pow: i32) -> Self {
        Monomial1D {
            coeff,
            x_pow,
            log: 0,
        }
    }
}

impl fmt::Display for Monomial1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coeff)?;
        if self.x_pow != 0 {
            write!(f, " x^{}", self.x_pow)?;
        }
        if self.log != 0 {
            write!(f, " ln(1/x)")?;
        }
        Ok(())
    }
}

/// A canonical sum of [`Monomial1D`] terms. The basis has no relations, so
/// canonical form is merely merged, sorted, and free of zero coefficients;
/// the zero sum is the empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermSum1D {
    terms: Vec<Monomial1D>,
}

impl Serialize for TermSum1D {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            terms: &'a [Monomial1D],
        }
        Raw { terms: &self.terms }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TermSum1D {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            terms: Vec<Monomial1D>,
        }
        Ok(TermSum1D::new(Raw::deserialize(de)?.terms))
    }
}

impl TermSum1D {
    pub fn new(terms: Vec<Monomial1D>) -> Self {
        let mut map: BTreeMap<(i32, u8), Rational> = BTreeMap::new();
        for t in terms {
            *map.entry((t.x_pow, t.log)).or_insert_with(Rational::zero) += t.coeff;
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((x_pow, log), coeff)| Monomial1D { coeff, x_pow, log })
            .collect();
        TermSum1D { terms }
    }

    pub fn zero() -> Self {
        TermSum1D { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Monomial1D] {
        &self.terms
    }

    pub fn add(&self, other: &TermSum1D) -> TermSum1D {
        let mut all = self.terms.clone();
        all.extend(other.terms.iter().cloned());
        TermSum1D::new(all)
    }

    pub fn sub(&self, other: &TermSum1D) -> TermSum1D {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TermSum1D {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.coeff = -&t.coeff;
                t
            })
            .collect();
        TermSum1D { terms }
    }

    pub fn scale(&self, s: &Rational) -> TermSum1D {
        if s.is_zero() {
            return TermSum1D::zero();
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
        TermSum1D { terms }
    }

    /// Multiply by `x^d`.
    pub fn mul_power(&self, d: i32) -> TermSum1D {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.x_pow += d;
                t
            })
            .collect();
        TermSum1D { terms }
    }

    /// Exact derivative in `x`.
    pub fn d_x(&self) -> TermSum1D {
        let mut out = Vec::new();
        for t in &self.terms {
            if t.x_pow != 0 {
                let mut u = t.clone();
                u.coeff = &t.coeff * rat_int(t.x_pow as i64);
                u.x_pow -= 1;
                out.push(u);
            }
            if t.log == 1 {
                let mut u = t.clone();
                u.coeff = -&t.coeff;
                u.x_pow -= 1;
                u.log = 0;
                out.push(u);
            }
        }
        TermSum1D::new(out)
    }

    /// Evaluate at `x`. Fails on a zero coordinate against a negative power
    /// or a logarithm, naming the offending term.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        if !x.is_finite() {
            return Err(EvalError::NonFiniteInput {
                at: format!("x = {x}"),
            });
        }
        let mut acc = 0.0;
        for t in &self.terms {
            if x == 0.0 && (t.x_pow < 0 || t.log == 1) {
                return Err(EvalError::SingularTerm {
                    term: t.to_string(),
                    at: format!("x = {x}"),
                });
            }
            let mut v = t.coeff.to_f64().unwrap_or(f64::NAN);
            v *= x.powi(t.x_pow);
            if t.log == 1 {
                v *= -x.ln();
            }
            acc += v;
        }
        Ok(acc)
    }
}

impl fmt::Display for TermSum1D {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    #[test]
    fn merge_and_zero() {
        let ts = TermSum1D::new(vec![
            Monomial1D::power(rat(1, 2), -3),
            Monomial1D::power(rat(1, 2), -3),
            Monomial1D::power(rat(-1, 1), -3),
        ]);
        assert!(ts.is_zero());
    }

    #[test]
    fn derivative_with_log() {
        // d/dx [x^2 ln(1/x)] = 2x ln(1/x) - x
        let ts = TermSum1D::new(vec![Monomial1D {
            coeff: rat(1, 1),
            x_pow: 2,
            log: 1,
        }]);
        let want = TermSum1D::new(vec![
            Monomial1D {
                coeff: rat(2, 1),
                x_pow: 1,
                log: 1,
            },
            Monomial1D::power(rat(-1, 1), 1),
        ]);
        assert_eq!(ts.d_x(), want);
    }

    #[test]
    fn eval_and_errors() {
        let ts = TermSum1D::new(vec![Monomial1D::power(rat(1, 2), -2)]);
        assert!((ts.eval(2.0).unwrap() - 0.125).abs() < 1e-15);
        assert!(ts.eval(0.0).is_err());
        let lg = TermSum1D::new(vec![Monomial1D {
            coeff: rat(1, 1),
            x_pow: 0,
            log: 1,
        }]);
        let v = lg.eval(0.5).unwrap();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn serde_round_trip() {
        let ts = TermSum1D::new(vec![Monomial1D {
            coeff: rat(-2, 7),
            x_pow: -1,
            log: 1,
        }]);
        let json = serde_json::to_string(&ts).unwrap();
        assert_eq!(json, r#"{"terms":[{"c":"-2/7","x":-1,"log":1}]}"#);
        let back: TermSum1D = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ts);
    }
}
