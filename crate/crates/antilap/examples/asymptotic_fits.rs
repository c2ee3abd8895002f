//! Measure the asymptotic laws of the solution families with log-log and
//! log-linear least-squares fits.
//!
//! The anti-z point fields fall off like 1/distance in the far zone in
//! every odd dimension, unlike the classical 1/x^(n-2) law; the even
//! members grow a bare logarithm instead. Both behaviors are measured
//! here, with the Laplace family as the control.
//!
//! Run with `cargo run --example asymptotic_fits`.

use antilap::numerics::{slope_fit, FitDirection, FitKind, QuadratureSpec, SlopeSpec};
use antilap::solutions::SolutionFamily;

fn main() {
    let quad = QuadratureSpec::default();

    // Far zone along z = 1, r in [1e2, 1e4]: the odd anti families hug
    // exponent -1 regardless of dimension.
    println!("far-zone power-law exponents (z = 1, r in [1e2, 1e4]):");
    let far = SlopeSpec::for_direction(FitDirection::RLarge);
    for n in [3u32, 5, 7, 9] {
        let report = slope_fit(
            SolutionFamily::PsiBar,
            n,
            None,
            FitDirection::RLarge,
            FitKind::PowerLaw,
            &far,
            &quad,
        )
        .unwrap();
        println!(
            "  psi-bar n = {n}: exponent {:+.5}  (r^2 of fit {:.6})",
            report.slope, report.r_squared
        );
    }
    // The classical control falls off like r^-(n-2) instead.
    for n in [3u32, 4, 5, 6] {
        let report = slope_fit(
            SolutionFamily::Xi,
            n,
            None,
            FitDirection::RLarge,
            FitKind::PowerLaw,
            &far,
            &quad,
        )
        .unwrap();
        println!("  xi      n = {n}: exponent {:+.5}", report.slope);
    }
    println!();

    // Even dimensions: the field is asymptotically ln(1/r) plus bounded
    // corrections, so a log-linear fit recovers coefficient 1.
    println!("far-zone logarithm coefficients (even dimensions):");
    for n in [4u32, 6, 8] {
        let report = slope_fit(
            SolutionFamily::Psi,
            n,
            None,
            FitDirection::RLarge,
            FitKind::LogCoefficient,
            &far,
            &quad,
        )
        .unwrap();
        println!("  psi n = {n}: coefficient {:+.5}", report.slope);
    }
    println!();

    // On the source plane z = 0 the odd field is exactly a multiple of
    // 1/r, so the fitted exponent is -1 to near machine precision, and the
    // even field is exactly ln(1/r): slope 1, intercept 0 in ln(1/r).
    println!("source-plane laws (z = 0, r in [1e-3, 1e-1]):");
    let plane = SlopeSpec::for_direction(FitDirection::ZAxis);
    let odd = slope_fit(
        SolutionFamily::PsiBar,
        5,
        None,
        FitDirection::ZAxis,
        FitKind::PowerLaw,
        &plane,
        &quad,
    )
    .unwrap();
    println!(
        "  psi-bar n = 5: exponent {:+.12} (deviation from -1: {:.2e})",
        odd.slope,
        (odd.slope + 1.0).abs()
    );
    let even = slope_fit(
        SolutionFamily::Psi,
        4,
        None,
        FitDirection::ZAxis,
        FitKind::LogCoefficient,
        &plane,
        &quad,
    )
    .unwrap();
    println!(
        "  psi     n = 4: log coefficient {:+.12}, intercept {:+.2e}",
        even.slope, even.intercept
    );
    println!();

    // The ring fields obey the same far-zone laws as their point limits.
    println!("ring-source far zone (a = 1):");
    for (family, n, kind, label) in [
        (SolutionFamily::PsiRing, 5u32, FitKind::PowerLaw, "exponent"),
        (SolutionFamily::Chi, 4, FitKind::LogCoefficient, "log coefficient"),
    ] {
        let report = slope_fit(family, n, Some(1.0), FitDirection::RLarge, kind, &far, &quad)
            .unwrap();
        println!("  {family} n = {n}: {label} {:+.5}", report.slope);
    }
}
