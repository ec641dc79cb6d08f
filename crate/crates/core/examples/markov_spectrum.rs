//! Markov triples, the discrete part of the spectrum below 3, and the exact
//! Markov and Lagrange values of periodic continued fractions.

use std::error::Error;

use lagrange_spectra::cf::PeriodicSeq;
use lagrange_spectra::spectrum::{default_tol, lagrange_value, low_spectrum_crosscheck, markov_triples, markov_value};

pub fn run() -> Result<(), Box<dyn Error>> {
    let tol = default_tol();
    println!("first Markov triples and their spectrum points:");
    for t in markov_triples(8) {
        let p = t.spectrum_point(&tol)?;
        println!("  ({:>3}, {:>3}, {:>4})  {}  ~ {}", t.x, t.y, t.z, p.exact, p.exact.to_decimal(15));
    }

    let report = low_spectrum_crosscheck(6, 10, &tol)?;
    println!("\nperiodic witnesses over {{1,2}} (period <= {}):", report.max_period);
    for e in &report.entries {
        match &e.witness {
            Some(w) => println!("  z = {:>3}: {}", e.triple.z, w.witness),
            None => println!("  z = {:>3}: none found", e.triple.z),
        }
    }

    println!("\nperiodic sequences:");
    for (pre, per) in [(vec![], vec![1]), (vec![], vec![2]), (vec![], vec![1, 1, 2, 2]), (vec![3], vec![1, 2])] {
        let s = PeriodicSeq::new(pre, per)?;
        let l = lagrange_value(&s, &tol)?;
        match markov_value(&s, &tol) {
            Ok(m) => println!("  {:<14} M = {:<22} L = {}", s.to_string(), m.value.exact, l.value.exact),
            Err(_) => println!("  {:<14} {:<26} L = {}", s.to_string(), "(not bi-infinite)", l.value.exact),
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
