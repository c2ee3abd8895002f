//! Print the exact coefficient triangles, their closed-form row sums, and
//! the sphere-area identity that ties the source normalizations together.
//!
//! Run with `cargo run --example coefficient_triangles`.

use antilap::coeff::{coeff_sums, rat_int, sigma, triangle, CoeffFamily};

fn main() {
    // The two odd-dimension triangles; row n lists k = 3, 5, ..., n. The
    // a-row carries the solution decomposition weights, the b-row the
    // uniformly normalized variant.
    for name in ["a", "b"] {
        let family = CoeffFamily::parse(name).unwrap();
        println!("{name}-triangle rows up to n = 11:");
        for row in triangle(family, 11).unwrap() {
            let cells: Vec<String> = row.values.iter().map(|v| v.to_string()).collect();
            println!("  n = {:>2}:  {}", row.n, cells.join("  "));
        }
        println!();
    }

    // The even triangle starts at n = 4 with a bare logarithm, so its rows
    // begin at l = 4 and the l >= 6 entries are simply 1/(l - 4).
    println!("a-even triangle rows up to n = 10:");
    for row in triangle(CoeffFamily::AEven, 10).unwrap() {
        let cells: Vec<String> = row.values.iter().map(|v| v.to_string()).collect();
        println!("  n = {:>2}:  {}", row.n, cells.join("  "));
    }
    println!();

    // Row sums have exact closed forms: every b-row sums to 1, the a-row to
    // a double-factorial ratio, and from n = 5 on two harmonically weighted
    // sums vanish identically.
    println!("odd row sums (sum b, sum a, the two weighted aux sums):");
    for n in [5u32, 9, 15, 21, 51] {
        let sums = coeff_sums(n).unwrap();
        println!(
            "  n = {:>2}:  {}  {}  {}  {}",
            n,
            sums.sum_b,
            sums.sum_a,
            sums.aux_inv_k_minus_4.unwrap(),
            sums.aux_inv_n_minus_k_minus_1.unwrap()
        );
    }
    println!();

    // Unit-sphere areas in rational-times-pi-power arithmetic satisfy
    // sigma(n) (n - 2) = sigma(2) sigma(n - 2) exactly.
    println!("sphere areas and the product identity:");
    for n in [4u32, 5, 8, 13] {
        let lhs = sigma(n).unwrap().scale(&rat_int(n as i64 - 2));
        let rhs = sigma(2).unwrap().mul(&sigma(n - 2).unwrap());
        println!(
            "  n = {:>2}:  sigma = {},  sigma(n)(n-2) = {} = sigma(2)sigma(n-2) = {}  ({})",
            n,
            sigma(n).unwrap(),
            lhs,
            rhs,
            if lhs == rhs { "equal" } else { "MISMATCH" }
        );
    }
}
