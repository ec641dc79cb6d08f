//! Outer and inner sublevel automata of the shift on `{1,...,N}` and their
//! decomposition into subhorseshoes and transient states.

use std::error::Error;

use lagrange_spectra::interval::parse_rational;
use lagrange_spectra::sft::{scc_decompose, sublevel_automaton, Level, PruneMode, DEFAULT_STATE_BUDGET};

pub fn run() -> Result<(), Box<dyn Error>> {
    let (n, window) = (3, 3);
    for t in ["2.9", "3", "3.05", "3.3"] {
        let level = Level::Finite(parse_rational(t)?);
        for mode in [PruneMode::Outer, PruneMode::Inner] {
            let a = sublevel_automaton(n, window, &level, mode, DEFAULT_STATE_BUDGET)?;
            let d = scc_decompose(&a);
            let sizes: Vec<usize> = d.subhorseshoes.iter().map(Vec::len).collect();
            println!(
                "t = {t:<5} {mode:?}: {:>4} states, {:>4} transitions, subhorseshoes {sizes:?}, {} transient",
                a.len(),
                a.transition_count(),
                d.transient_states.len()
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
