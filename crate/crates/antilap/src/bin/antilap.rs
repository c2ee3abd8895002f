//! Thin binary wrapper around the library's command-line front end.

use std::io::{stderr, stdout};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let code = antilap::cli::run(&args, &mut stdout().lock(), &mut stderr().lock());
    std::process::exit(code);
}
