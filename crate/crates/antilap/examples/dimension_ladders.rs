//! Climb the solution ladders with the two dimension-shift transforms and
//! rebuild the anti-z family from Laplace kernels.
//!
//! Both transforms map a solution in dimension n to one in n + 2, so a
//! whole family follows from its two lowest members. The decomposition at
//! the end writes the anti-z field as an a-weighted sum of shifted Laplace
//! fundamental solutions, which is how the two ladders are related.
//!
//! Run with `cargo run --example dimension_ladders`.

use antilap::solutions::{build, decompose_a_in_l, Solution, SolutionFamily};
use antilap::termalg::{transform_fa, transform_fl, TermSum2D};

fn rz_sum(family: SolutionFamily, n: u32) -> TermSum2D {
    match build(family, n).unwrap() {
        Solution::PointRz { sum } => sum,
        other => panic!("expected an (r, z) point solution, got {other:?}"),
    }
}

fn main() {
    // Laplace ladder: apply the f_L lift repeatedly to the n = 3 and n = 4
    // seeds and compare with the directly built fields.
    println!("Laplace ladder from the n = 3 and n = 4 seeds:");
    for seed in [3u32, 4] {
        let mut field = rz_sum(SolutionFamily::Xi, seed);
        let mut n = seed;
        while n + 2 <= 12 {
            field = transform_fl(n + 2, &field).unwrap();
            n += 2;
            let direct = rz_sum(SolutionFamily::Xi, n);
            let agree = field.sub(&direct).is_zero();
            println!("  lifted to n = {n:>2}: matches direct construction: {agree}");
        }
    }
    println!();

    // Anti ladder: same game with the f_A lift on the anti-z family.
    println!("anti ladder from the n = 3 and n = 4 seeds:");
    for seed in [3u32, 4] {
        let mut field = rz_sum(SolutionFamily::Psi, seed);
        let mut n = seed;
        while n + 2 <= 12 {
            field = transform_fa(n + 2, &field).unwrap();
            n += 2;
            let direct = rz_sum(SolutionFamily::Psi, n);
            let agree = field.sub(&direct).is_zero();
            println!("  lifted to n = {n:>2}: matches direct construction: {agree}");
        }
    }
    println!();

    // Kernel decomposition: the odd anti-z field is an exact a-weighted sum
    // of z-shifted Laplace kernels of lower dimensions.
    println!("kernel decomposition of the odd anti-z field:");
    for n in [5u32, 9, 13] {
        let parts = decompose_a_in_l(n).unwrap();
        let weights: Vec<String> = parts
            .iter()
            .map(|(c, k)| format!("{c} * z^{} * xi_{k}", k - 3))
            .collect();
        let mut rebuilt = TermSum2D::zero();
        for (c, k) in &parts {
            let kernel = rz_sum(SolutionFamily::Xi, *k);
            rebuilt = rebuilt.add(&kernel.mul_powers(0, *k as i32 - 3, 0).scale(c));
        }
        let agree = rebuilt.sub(&rz_sum(SolutionFamily::Psi, n)).is_zero();
        println!("  psi_{n} = {}", weights.join(" + "));
        println!("      exact match: {agree}");
    }
}
