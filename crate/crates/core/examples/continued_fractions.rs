//! Continuants, cylinder intervals and the window enclosures of `f` that the
//! sublevel automata are built from.

use std::error::Error;

use lagrange_spectra::cf::{convergents, cylinder_interval, cylinder_scale, f_window_range, Word};

pub fn run() -> Result<(), Box<dyn Error>> {
    let w = Word::new(vec![2, 1, 1, 2, 1])?;
    let c = convergents(&w);
    println!("word {w}: p/q = {}/{}, previous {}/{}", c.p, c.q, c.p_prev, c.q_prev);
    println!("determinant {}", c.determinant());

    let cyl = cylinder_interval(&w);
    println!("cylinder [{}, {}], length {}", cyl.lo, cyl.hi, cyl.length);
    println!("scale index {}", cylinder_scale(&w)?);

    println!("\nf over the centre of 1...1 as the window grows:");
    for half in 1..=6 {
        let ones = Word::new(vec![1; 2 * half + 1])?;
        let r = f_window_range(&ones, half)?;
        println!("  window {half}: [{:.12}, {:.12}]  width {:.2e}", r.lo_f64(), r.hi_f64(), r.width_f64());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
