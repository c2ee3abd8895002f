//! Sample a solution family on a rectangular (r, z) grid and emit CSV rows,
//! the same table the `plotdata` subcommand produces.
//!
//! Grid nodes that land on a singular set (here the origin, where the
//! field diverges) are emitted with an empty value cell rather than
//! aborting the table.
//!
//! Run with `cargo run --example field_grids`.

use antilap::numerics::{fmt_f64, QuadratureSpec};
use antilap::solutions::{build, eval_solution, SolutionFamily};

fn main() {
    let quad = QuadratureSpec::default();
    let sol = build(SolutionFamily::PsiBar, 5).unwrap();

    let r_axis: Vec<f64> = (0..5).map(|i| 0.5 * i as f64).collect();
    let z_axis: Vec<f64> = (0..5).map(|i| 0.5 * i as f64).collect();

    let mut singular = 0u32;
    println!("r,z,value");
    for &r in &r_axis {
        for &z in &z_axis {
            match eval_solution(&sol, r, z, None, &quad) {
                Ok(ev) if ev.value.is_finite() => {
                    println!("{},{},{}", fmt_f64(r), fmt_f64(z), fmt_f64(ev.value));
                }
                _ => {
                    singular += 1;
                    println!("{},{},", fmt_f64(r), fmt_f64(z));
                }
            }
        }
    }
    if singular > 0 {
        eprintln!(
            "warning: {singular} of {} grid points are singular and were left empty",
            r_axis.len() * z_axis.len()
        );
    }
}
