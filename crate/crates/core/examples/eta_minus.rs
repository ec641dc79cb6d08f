//! Locating the threshold where the dimension first reaches a target value.

use std::error::Error;

use lagrange_spectra::analysis::{eta_minus, full_shift_dimension, Resolution};
use lagrange_spectra::interval::parse_rational;

pub fn run() -> Result<(), Box<dyn Error>> {
    let res = Resolution::new(3, 3);
    let tol = parse_rational("1/32")?;
    println!("dimension of the full shift: {}", full_shift_dimension(&res)?);
    for eta in [0.0, 0.2, 0.4] {
        let e = eta_minus(eta, &tol, &res)?;
        let status = if e.degenerate {
            "degenerate"
        } else if e.indeterminate {
            "indeterminate"
        } else {
            "certified"
        };
        println!(
            "eta = {eta}: threshold in [{}, {}], dHi {:.4} -> {:.4} ({status})",
            e.left, e.right, e.d_hi_left, e.d_hi_right
        );
        if let Some(c) = &e.certified_right {
            println!("  dLo reaches eta by {c}");
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
