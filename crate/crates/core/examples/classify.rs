//! Labelling thresholds by how high-dimensional pieces of the sublevel set
//! approach them.

use std::error::Error;

use lagrange_spectra::analysis::{classify_point, Resolution};
use lagrange_spectra::interval::parse_rational;

pub fn run() -> Result<(), Box<dyn Error>> {
    let res = Resolution::new(3, 3);
    let eps = ["1/4", "1/8", "1/16"]
        .iter()
        .map(|e| parse_rational(e))
        .collect::<Result<Vec<_>, _>>()?;
    for t in ["2.9", "3.1", "3.5", "3.7"] {
        let c = classify_point(&parse_rational(t)?, &eps, &res)?;
        let outcomes: Vec<_> = c.per_eps.iter().map(|v| v.outcome).collect();
        print!("t = {t:<4} {:<14} D in [{:.4}, {:.4}] {outcomes:?}", c.label.to_string(), c.d.d_lo, c.d.d_hi);
        match &c.left_gap {
            Some((a, b)) => println!(" gap ({a}, {b})"),
            None => println!(),
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
