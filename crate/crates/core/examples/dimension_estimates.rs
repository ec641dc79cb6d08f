//! Dimension of bounded-type Cantor sets by the pressure method and by box
//! counting, plus the box dimension of an arithmetic sumset.

use std::error::Error;

use lagrange_spectra::dimension::{automaton_pressure_dim, boxdim_estimate, sumset_boxdim, Alphabet, CoverTarget};
use lagrange_spectra::sft::{full_shift_over, DEFAULT_STATE_BUDGET};

pub fn run() -> Result<(), Box<dyn Error>> {
    for symbols in [vec![1, 2], vec![1, 2, 3], vec![2, 3]] {
        let alphabet = Alphabet::new(symbols.clone())?;
        let shift = full_shift_over(&symbols, 3, DEFAULT_STATE_BUDGET)?;
        let pressure = automaton_pressure_dim(&shift, 1e-9)?;
        let boxes = boxdim_estimate(CoverTarget::Alphabet(&alphabet), 18, 10_000_000)?;
        println!("E{alphabet}: pressure {pressure}, box counting {boxes}");
    }

    let b = Alphabet::new(vec![1, 2])?;
    let sum = sumset_boxdim(&b, &b, 10, 10_000_000)?;
    println!("\nE{{1,2}} + E{{1,2}}: {sum}");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
