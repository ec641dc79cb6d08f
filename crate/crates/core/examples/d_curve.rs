//! Certified brackets for the dimension of the part of the Lagrange spectrum
//! below `t`, along a grid of thresholds.

use std::error::Error;

use lagrange_spectra::analysis::{d_curve, parse_grid, Resolution};

pub fn run() -> Result<(), Box<dyn Error>> {
    let res = Resolution::new(3, 2);
    let grid = parse_grid("2.9:3.6:1/10")?;
    println!("{:>6}  {:>8}  {:>8}  {:>8}  {:>8}", "t", "dLo", "dHi", "L_lo", "L_hi");
    for p in d_curve(&grid, &res)? {
        let (l_lo, l_hi) = p.l_bracket();
        println!(
            "{:>6}  {:>8.5}  {:>8.5}  {:>8.5}  {:>8.5}",
            p.t.to_string(),
            p.d_lo,
            p.d_hi,
            l_lo,
            l_hi
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
