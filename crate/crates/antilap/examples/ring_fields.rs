//! Evaluate the ring-source fields by adaptive quadrature, confirm by
//! finite differences that their operators annihilate them off the ring,
//! and watch the ring collapse to its point limit.
//!
//! Run with `cargo run --example ring_fields`.

use antilap::numerics::{
    fmt_f64, residual_grid, ring_point_gap, QuadratureSpec, StencilSpec,
};
use antilap::solutions::{build, eval_solution, SolutionFamily};

fn main() {
    let quad = QuadratureSpec::default();

    // The double-anti ring field in a few dimensions at one field point,
    // with the quadrature error estimate.
    println!("psi-ring values at (r, z) = (2, 1) with ring radius a = 1:");
    for n in [3u32, 5, 8] {
        let sol = build(SolutionFamily::PsiRing, n).unwrap();
        let ev = eval_solution(&sol, 2.0, 1.0, Some(1.0), &quad).unwrap();
        println!(
            "  n = {n}:  value = {}  (err estimate {}, {} integrand evaluations)",
            fmt_f64(ev.value),
            fmt_f64(ev.err_estimate),
            ev.evals
        );
    }
    println!();

    // The planar n = 2 member has a piecewise closed form: a paraboloid
    // pi r^2 / (2 a) inside the ring, the constant pi a / 2 outside. The
    // library evaluates it by quadrature; compare against the formula.
    println!("planar member against its closed form (a = 1, z = 0):");
    let planar = build(SolutionFamily::PsiRing2, 2).unwrap();
    let a = 1.0f64;
    for r in [0.5f64, 2.0] {
        let qv = eval_solution(&planar, r, 0.0, Some(a), &quad).unwrap().value;
        let cv = if r <= a {
            std::f64::consts::PI * r * r / (2.0 * a)
        } else {
            std::f64::consts::PI * a / 2.0
        };
        println!(
            "  r = {r}:  quadrature {}  closed {}  |diff| = {:.2e}",
            fmt_f64(qv),
            fmt_f64(cv),
            (qv - cv).abs()
        );
    }
    println!();

    // Finite-difference residuals: the operator applied to the quadrature
    // field should vanish as the stencil step shrinks, at second order.
    println!("finite-difference residual convergence (step 1e-2 -> 5e-3):");
    let spec = StencilSpec { h: 1e-2, order: 2 };
    let points = [[1.6f64, 0.9f64], [0.7, 1.4], [1.2, 1.1]];
    for (family, n) in [
        (SolutionFamily::PsiRing, 5u32),
        (SolutionFamily::Chi, 4),
        (SolutionFamily::XiRing, 3),
    ] {
        let sol = build(family, n).unwrap();
        let mut field = |r: f64, z: f64| {
            eval_solution(&sol, r, z, Some(1.0), &quad).map(|ev| ev.value)
        };
        let report =
            residual_grid(family.operator(), n, &mut field, &points, &spec, 1.9).unwrap();
        println!(
            "  {} on {family} n = {n}: median observed order {:.3} (pass: {})",
            family.operator(),
            report.order_estimate,
            report.pass
        );
    }
    println!();

    // Shrinking the ring radius sends the unweighted ring field to its
    // point-source limit; the largest gap over a fixed point set decays
    // like the square of the radius.
    println!("ring-to-point gap of the plain-weight ring field (n = 5):");
    let gap_points = [(0.9f64, 1.1f64), (1.3, 0.7), (0.6, 1.4)];
    let mut previous: Option<f64> = None;
    for a in [0.2f64, 0.1, 0.05] {
        let gap = ring_point_gap(5, a, &gap_points, &quad).unwrap();
        match previous {
            Some(p) => println!(
                "  a = {a:<4}: gap = {:.6e}  (shrank by {:.2}x)",
                gap,
                p / gap
            ),
            None => println!("  a = {a:<4}: gap = {gap:.6e}"),
        }
        previous = Some(gap);
    }
}
