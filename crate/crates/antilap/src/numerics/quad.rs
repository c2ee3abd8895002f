//! One-dimensional quadrature with error estimates.

use crate::{domain_err, DomainError};
use serde::{Deserialize, Serialize};

/// Quadrature rule selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadMethod {
    AdaptiveSimpson,
    GaussLegendreComposite,
}

/// Quadrature controls. `abs_tol`/`rel_tol` bound the accepted error
/// estimate; `max_depth` caps bisection depth (adaptive Simpson) or the
/// number of panel doublings (composite Gauss-Legendre).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub method: QuadMethod,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            method: QuadMethod::AdaptiveSimpson,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 40,
        }
    }
}

/// Integral value with an error estimate and the number of integrand
/// evaluations spent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub evals: u64,
}

/// Integrate `f` over `[lo, hi]`.
pub fn integrate(
    f: &mut dyn FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, DomainError> {
    if !lo.is_finite() || !hi.is_finite() {
        return domain_err(format!("quadrature bounds must be finite, got [{lo}, {hi}]"));
    }
    if !(spec.abs_tol > 0.0) || !(spec.rel_tol >= 0.0) {
        return domain_err(format!(
            "quadrature tolerances must be positive, got abs {} rel {}",
            spec.abs_tol, spec.rel_tol
        ));
    }
    if lo == hi {
        return Ok(QuadResult {
            value: 0.0,
            err_estimate: 0.0,
            evals: 0,
        });
    }
    match spec.method {
        QuadMethod::AdaptiveSimpson => Ok(adaptive_simpson(f, lo, hi, spec)),
        QuadMethod::GaussLegendreComposite => Ok(gauss_composite(f, lo, hi, spec)),
    }
}

fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

struct SimpsonState<'a> {
    f: &'a mut dyn FnMut(f64) -> f64,
    evals: u64,
    err: f64,
}

impl SimpsonState<'_> {
    fn eval(&mut self, x: f64) -> f64 {
        self.evals += 1;
        (self.f)(x)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = self.eval(0.5 * (a + m));
        let rm = self.eval(0.5 * (m + b));
        let left = simpson(fa, lm, fm, a, m);
        let right = simpson(fm, rm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            self.err += delta.abs() / 15.0;
            return left + right + delta / 15.0;
        }
        self.refine(a, m, fa, lm, fm, left, 0.5 * tol, depth - 1)
            + self.refine(m, b, fm, rm, fb, right, 0.5 * tol, depth - 1)
    }
}

fn adaptive_simpson(f: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64, spec: &QuadratureSpec) -> QuadResult {
    let mut st = SimpsonState { f, evals: 0, err: 0.0 };
    let fa = st.eval(lo);
    let fm = st.eval(0.5 * (lo + hi));
    let fb = st.eval(hi);
    let whole = simpson(fa, fm, fb, lo, hi);
    let tol = spec.abs_tol.max(spec.rel_tol * whole.abs());
    let value = st.refine(lo, hi, fa, fm, fb, whole, tol, spec.max_depth);
    QuadResult {
        value,
        err_estimate: st.err,
        evals: st.evals,
    }
}

/// Nodes and weights of the `m`-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre polynomial.
pub fn gauss_legendre_nodes(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        // Chebyshev-like initial guess for the i-th positive root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(m, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// Legendre polynomial `P_m(x)` and derivative by the three-term recurrence.
fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gauss_composite(f: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64, spec: &QuadratureSpec) -> QuadResult {
    let (nodes, weights) = gauss_legendre_nodes(16);
    let mut evals = 0u64;
    let mut rule = |a: f64, b: f64, evals: &mut u64| -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            acc += w * f(c + h * x);
        }
        *evals += nodes.len() as u64;
        acc * h
    };
    let mut panels = 1usize;
    let mut prev = rule(lo, hi, &mut evals);
    let mut err = f64::INFINITY;
    for _ in 0..spec.max_depth {
        panels *= 2;
        let mut acc = 0.0;
        let step = (hi - lo) / panels as f64;
        for i in 0..panels {
            let a = lo + step * i as f64;
            acc += rule(a, a + step, &mut evals);
        }
        err = (acc - prev).abs();
        prev = acc;
        if err <= spec.abs_tol.max(spec.rel_tol * acc.abs()) {
            break;
        }
    }
    QuadResult {
        value: prev,
        err_estimate: err,
        evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let spec = QuadratureSpec::default();
        let mut f = |x: f64| 3.0 * x * x;
        let got = integrate(&mut f, 0.0, 2.0, &spec).unwrap();
        assert!((got.value - 8.0).abs() < 1e-12, "got {}", got.value);
    }

    #[test]
    fn smooth_transcendental_both_methods() {
        // integral of cos on [0, pi/2] is 1
        for method in [QuadMethod::AdaptiveSimpson, QuadMethod::GaussLegendreComposite] {
            let spec = QuadratureSpec {
                method,
                ..QuadratureSpec::default()
            };
            let mut f = |x: f64| x.cos();
            let got = integrate(&mut f, 0.0, std::f64::consts::FRAC_PI_2, &spec).unwrap();
            assert!(
                (got.value - 1.0).abs() < 1e-10,
                "{method:?} gave {}",
                got.value
            );
            assert!(got.err_estimate < 1e-8);
        }
    }

    #[test]
    fn mildly_singular_endpoint() {
        // integral of sqrt on [0, 1] = 2/3; derivative blows up at 0.
        let spec = QuadratureSpec::default();
        let mut f = |x: f64| x.sqrt();
        let got = integrate(&mut f, 0.0, 1.0, &spec).unwrap();
        assert!((got.value - 2.0 / 3.0).abs() < 1e-8, "got {}", got.value);
    }

    #[test]
    fn gauss_nodes_are_symmetric_and_normalized() {
        let (nodes, weights) = gauss_legendre_nodes(16);
        let wsum: f64 = weights.iter().sum();
        assert!((wsum - 2.0).abs() < 1e-13);
        for i in 0..16 {
            assert!((nodes[i] + nodes[15 - i]).abs() < 1e-14);
        }
        // 16-point rule integrates x^30 exactly: 2/31.
        let acc: f64 = nodes
            .iter()
            .zip(weights.iter())
            .map(|(x, w)| w * x.powi(30))
            .sum();
        assert!((acc - 2.0 / 31.0).abs() < 1e-14, "got {acc}");
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let spec = QuadratureSpec::default();
        assert!(integrate(&mut |x| x, f64::NAN, 1.0, &spec).is_err());
        let bad = QuadratureSpec {
            abs_tol: 0.0,
            ..QuadratureSpec::default()
        };
        assert!(integrate(&mut |x| x, 0.0, 1.0, &bad).is_err());
    }
}
