//! Exact coefficient families for the radial solution expansions.
//!
//! Everything here is integer/rational arithmetic; no floating point enters
//! except through the explicit `to_f64` conversions. Two coefficient
//! triangles drive the odd-dimension solution families:
//!
//! * `b(k, n)` - the unit-sum family, `b(k,n) = (k-4)!!(n-k-1)!! / ((k-3)!!(n-k)!!)`
//!   for odd `k = 3, 5, ..., n`;
//! * `a(k, n)` - the same rows rescaled so the end entries are 1,
//!   `a(k,n) = ((n-3)!!/(n-4)!!) * b(k,n)`.
//!
//! Even dimensions use the much simpler `a_even(4, n) = 1`,
//! `a_even(l, n) = 1/(l-4)` for even `l >= 6`.

use crate::{domain_err, DomainError};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for small integers as rationals.
pub fn rat_int(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// Double factorial `m!!` with the empty-product conventions
/// `(-1)!! = 0!! = 1`. Defined for `m >= -1`.
pub fn double_factorial(m: i64) -> Result<BigInt, DomainError> {
    if m < -1 {
        return domain_err(format!("double factorial needs m >= -1, got {m}"));
    }
    let mut acc = BigInt::one();
    let mut k = m;
    while k >= 2 {
        acc *= k;
        k -= 2;
    }
    Ok(acc)
}

/// An exact multiple of an integer power of pi: `coeff * pi^pi_power`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiRational {
    #[serde(with = "rational_string")]
    pub coeff: Rational,
    pub pi_power: u32,
}

impl PiRational {
    pub fn new(coeff: Rational, pi_power: u32) -> Self {
        PiRational { coeff, pi_power }
    }

    /// A plain rational (pi power zero).
    pub fn from_rational(coeff: Rational) -> Self {
        PiRational {
            coeff,
            pi_power: 0,
        }
    }

    pub fn mul(&self, other: &PiRational) -> PiRational {
        PiRational {
            coeff: &self.coeff * &other.coeff,
            pi_power: self.pi_power + other.pi_power,
        }
    }

    pub fn scale(&self, s: &Rational) -> PiRational {
        PiRational {
            coeff: &self.coeff * s,
            pi_power: self.pi_power,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.coeff.to_f64().unwrap_or(f64::NAN);
        c * std::f64::consts::PI.powi(self.pi_power as i32)
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            0 => write!(f, "{}", self.coeff),
            1 => write!(f, "{} pi", self.coeff),
            p => write!(f, "{} pi^{}", self.coeff, p),
        }
    }
}

/// serde helpers representing a `Rational` as its canonical `"p/q"` string.
pub mod rational_string {
    use super::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(value: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(de)?;
        Rational::from_str(&s).map_err(|e| D::Error::custom(format!("bad rational {s:?}: {e}")))
    }
}

/// Which coefficient triangle a query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoeffFamily {
    AOdd,
    BOdd,
    AEven,
}

impl CoeffFamily {
    pub fn parse(s: &str) -> Result<Self, DomainError> {
        match s {
            "a" | "a-odd" => Ok(CoeffFamily::AOdd),
            "b" | "b-odd" => Ok(CoeffFamily::BOdd),
            "a-even" => Ok(CoeffFamily::AEven),
            other => domain_err(format!(
                "unknown coefficient family {other:?} (expected a, b, or a-even)"
            )),
        }
    }
}

impl fmt::Display for CoeffFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CoeffFamily::AOdd => "a",
            CoeffFamily::BOdd => "b",
            CoeffFamily::AEven => "a-even",
        };
        write!(f, "{s}")
    }
}

fn check_odd_pair(k: u32, n: u32) -> Result<(), DomainError> {
    if n < 3 || n % 2 == 0 {
        return domain_err(format!("odd-family dimension must be odd and >= 3, got n = {n}"));
    }
    if k < 3 || k > n || k % 2 == 0 {
        return domain_err(format!(
            "odd-family index must be odd with 3 <= k <= n, got k = {k}, n = {n}"
        ));
    }
    Ok(())
}

/// Unit-sum triangle entry `b(k, n)` for odd `k`, odd `n`, `3 <= k <= n`.
pub fn b_coeff(k: u32, n: u32) -> Result<Rational, DomainError> {
    check_odd_pair(k, n)?;
    let (k, n) = (k as i64, n as i64);
    let num = double_factorial(k - 4)? * double_factorial(n - k - 1)?;
    let den = double_factorial(k - 3)? * double_factorial(n - k)?;
    Ok(Rational::new(num, den))
}

/// End-normalized triangle entry `a(k, n) = ((n-3)!!/(n-4)!!) b(k, n)`.
pub fn a_coeff(k: u32, n: u32) -> Result<Rational, DomainError> {
    check_odd_pair(k, n)?;
    let scale = Rational::new(
        double_factorial(n as i64 - 3)?,
        double_factorial(n as i64 - 4)?,
    );
    Ok(scale * b_coeff(k, n)?)
}

/// `a(k, n)` by the two-step recurrence
/// `a(k+2, n) = a(k, n) (k-2)(n-k) / ((k-1)(n-k-1))`, `a(3, n) = 1`.
///
/// Must agree with [`a_coeff`] everywhere both are defined.
pub fn a_coeff_recurrence(k: u32, n: u32) -> Result<Rational, DomainError> {
    check_odd_pair(k, n)?;
    let n = n as i64;
    let mut acc = Rational::one();
    let mut j = 3i64;
    while j + 2 <= k as i64 {
        acc *= rat((j - 2) * (n - j), (j - 1) * (n - j - 1));
        j += 2;
    }
    Ok(acc)
}

/// `a(k, n)` from the row of dimension `n - 2` via
/// `a(k, n) = a(k, n-2) (n-3)(n-k-1) / ((n-4)(n-k))`, valid for
/// odd `n >= 5` and `3 <= k <= n - 2`.
pub fn a_coeff_dim_step(k: u32, n: u32) -> Result<Rational, DomainError> {
    check_odd_pair(k, n)?;
    if n < 5 || k > n - 2 {
        return domain_err(format!(
            "dimension-step form needs odd n >= 5 and k <= n - 2, got k = {k}, n = {n}"
        ));
    }
    let (k, n) = (k as i64, n as i64);
    let prev = a_coeff(k as u32, (n - 2) as u32)?;
    Ok(prev * rat((n - 3) * (n - k - 1), (n - 4) * (n - k)))
}

fn check_even_pair(l: u32, n: u32) -> Result<(), DomainError> {
    if n < 4 || n % 2 == 1 {
        return domain_err(format!("even-family dimension must be even and >= 4, got n = {n}"));
    }
    if l < 4 || l > n || l % 2 == 1 {
        return domain_err(format!(
            "even-family index must be even with 4 <= l <= n, got l = {l}, n = {n}"
        ));
    }
    Ok(())
}

/// Even-dimension family: `a_even(4, n) = 1`, `a_even(l, n) = 1/(l-4)` for
/// even `l >= 6`. Independent of `n` except through the range `l <= n`.
pub fn a_coeff_even(l: u32, n: u32) -> Result<Rational, DomainError> {
    check_even_pair(l, n)?;
    if l == 4 {
        Ok(Rational::one())
    } else {
        Ok(rat(1, l as i64 - 4))
    }
}

/// Even family by recurrence: bases `a_even(4) = 1`, `a_even(6) = 1/2`,
/// then `a_even(l+2, n) = a_even(l, n) (l-4)/(l-2)` for even `l >= 6`.
pub fn a_coeff_even_recurrence(l: u32, n: u32) -> Result<Rational, DomainError> {
    check_even_pair(l, n)?;
    match l {
        4 => Ok(Rational::one()),
        6 => Ok(rat(1, 2)),
        _ => {
            let mut acc = rat(1, 2);
            let mut j = 6i64;
            while j + 2 <= l as i64 {
                acc *= rat(j - 4, j - 2);
                j += 2;
            }
            Ok(acc)
        }
    }
}

/// One row of a coefficient triangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleRow {
    pub n: u32,
    #[serde(with = "rational_vec_string")]
    pub values: Vec<Rational>,
}

mod rational_vec_string {
    use super::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(values: &[Rational], ser: S) -> Result<S::Ok, S::Error> {
        values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rational>, D::Error> {
        let strings = Vec::<String>::deserialize(de)?;
        strings
            .into_iter()
            .map(|s| {
                Rational::from_str(&s)
                    .map_err(|e| D::Error::custom(format!("bad rational {s:?}: {e}")))
            })
            .collect()
    }
}

/// All triangle rows of `family` with dimension `n <= max_n`.
pub fn triangle(family: CoeffFamily, max_n: u32) -> Result<Vec<TriangleRow>, DomainError> {
    let (start, needs) = match family {
        CoeffFamily::AOdd | CoeffFamily::BOdd => (3u32, "odd"),
        CoeffFamily::AEven => (4u32, "even"),
    };
    if max_n < start {
        return domain_err(format!(
            "triangle for {family} needs max_n >= {start} ({needs} rows), got {max_n}"
        ));
    }
    let mut rows = Vec::new();
    let mut n = start;
    while n <= max_n {
        let mut values = Vec::new();
        let mut k = start;
        while k <= n {
            let v = match family {
                CoeffFamily::AOdd => a_coeff(k, n)?,
                CoeffFamily::BOdd => b_coeff(k, n)?,
                CoeffFamily::AEven => a_coeff_even(k, n)?,
            };
            values.push(v);
            k += 2;
        }
        rows.push(TriangleRow { n, values });
        n += 2;
    }
    Ok(rows)
}

/// Row sums and auxiliary alternating sums for an odd dimension `n`.
///
/// `sum_a = (n-3)!!/(n-4)!!` and `sum_b = 1` exactly; the two auxiliary sums
/// `sum_k a(k,n)/(k-4)` and `sum_k a(k,n)/(n-k-1)` vanish for `n >= 5` and
/// are undefined at `n = 3` (the lone term divides by zero weight -1 and 1
/// respectively but the identities only hold from n = 5).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffSums {
    pub n: u32,
    pub sum_a: Rational,
    pub sum_b: Rational,
    pub aux_inv_k_minus_4: Option<Rational>,
    pub aux_inv_n_minus_k_minus_1: Option<Rational>,
}

/// Exact sums over an odd triangle row. See [`CoeffSums`].
pub fn coeff_sums(n: u32) -> Result<CoeffSums, DomainError> {
    if n < 3 || n % 2 == 0 {
        return domain_err(format!("row sums need odd n >= 3, got {n}"));
    }
    let mut sum_a = Rational::zero();
    let mut sum_b = Rational::zero();
    let mut aux1 = Rational::zero();
    let mut aux2 = Rational::zero();
    let mut k = 3u32;
    while k <= n {
        let a = a_coeff(k, n)?;
        sum_a += &a;
        sum_b += b_coeff(k, n)?;
        aux1 += &a * rat(1, k as i64 - 4);
        if n > 3 {
            aux2 += &a * rat(1, n as i64 - k as i64 - 1);
        }
        k += 2;
    }
    let aux = if n >= 5 {
        (Some(aux1), Some(aux2))
    } else {
        (None, None)
    };
    Ok(CoeffSums {
        n,
        sum_a,
        sum_b,
        aux_inv_k_minus_4: aux.0,
        aux_inv_n_minus_k_minus_1: aux.1,
    })
}

/// Surface area of the unit sphere in `R^n` as an exact pi-multiple:
/// `sigma(2m) = (2/(m-1)!) pi^m`, `sigma(2m+1) = (2^(m+1)/(2m-1)!!) pi^m`.
pub fn sigma(n: u32) -> Result<PiRational, DomainError> {
    if n < 1 {
        return domain_err(format!("sphere area needs n >= 1, got {n}"));
    }
    let m = (n / 2) as i64;
    let coeff = if n % 2 == 0 {
        let mut fact = BigInt::one();
        for j in 2..m {
            fact *= j;
        }
        Rational::new(BigInt::from(2), fact)
    } else {
        let num = BigInt::from(2).pow(m as u32 + 1);
        Rational::new(num, double_factorial(2 * m - 1)?)
    };
    Ok(PiRational::new(coeff, m as u32))
}
