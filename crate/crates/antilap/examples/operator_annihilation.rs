//! Build each point solution family and check symbolically, in exact
//! rational arithmetic, that its operator annihilates it.
//!
//! Run with `cargo run --example operator_annihilation`.

use antilap::solutions::{build, Solution, SolutionFamily};
use antilap::termalg::{apply_operator, apply_operator_x, OperatorKind};

fn rz_sum(family: SolutionFamily, n: u32) -> antilap::termalg::TermSum2D {
    match build(family, n).unwrap() {
        Solution::PointRz { sum } => sum,
        other => panic!("expected an (r, z) point solution, got {other:?}"),
    }
}

fn main() {
    // The anti-z family in a small odd and a small even dimension, written
    // out term by term, then hit with its operator.
    for n in [5u32, 6] {
        let psi = rz_sum(SolutionFamily::Psi, n);
        let image = apply_operator(OperatorKind::AntiZ, n, &psi).unwrap();
        println!("psi in n = {n}:");
        println!("  field          = {psi}");
        println!(
            "  anti-z image   = {}",
            if image.is_zero() { "0".to_string() } else { image.to_string() }
        );
        println!();
    }

    // Sweep every family across a range of dimensions and report whether
    // the image is the empty sum.
    let cases: [(SolutionFamily, Vec<u32>); 4] = [
        (SolutionFamily::Psi, (3..=30).collect()),
        (SolutionFamily::PsiBar, (3..=29).step_by(2).collect()),
        (SolutionFamily::PsiTilde4, vec![4]),
        (SolutionFamily::Xi, (2..=30).collect()),
    ];
    for (family, dims) in cases {
        let op = family.operator();
        let mut all_zero = true;
        for &n in &dims {
            let sum = rz_sum(family, n);
            all_zero &= apply_operator(op, n, &sum).unwrap().is_zero();
        }
        println!(
            "{op} annihilates {family} for n = {}..{}: {}",
            dims.first().unwrap(),
            dims.last().unwrap(),
            all_zero
        );
    }

    // The x-frame control: the ordinary radial Laplacian kills the
    // classical point solution in every dimension.
    let mut all_zero = true;
    for n in 2u32..=30 {
        let phi = match build(SolutionFamily::Phi, n).unwrap() {
            Solution::PointX { sum } => sum,
            other => panic!("expected an x-frame solution, got {other:?}"),
        };
        all_zero &= apply_operator_x(OperatorKind::LaplaceX, n, &phi)
            .unwrap()
            .is_zero();
    }
    println!("laplace-x annihilates phi for n = 2..30: {all_zero}");
}
