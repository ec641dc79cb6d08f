//! Whether two subhorseshoes below `t` merge once the level is raised by `eps`.

use std::error::Error;

use lagrange_spectra::analysis::{connect_check, words_of, Resolution, Sublevel};
use lagrange_spectra::interval::parse_rational;
use lagrange_spectra::sft::PruneMode;

pub fn run() -> Result<(), Box<dyn Error>> {
    let res = Resolution::new(3, 3);
    let t = parse_rational("2.98")?;
    let s = Sublevel::compute(&t, PruneMode::Outer, &res)?;
    let comps: Vec<_> = s
        .decomposition
        .subhorseshoes
        .iter()
        .map(|c| words_of(&s.automaton, c))
        .collect();
    println!("{} subhorseshoes below t = 2.98", comps.len());
    for eps in ["0", "1/50", "1/10"] {
        let eps = parse_rational(eps)?;
        for i in 0..comps.len() {
            for j in i + 1..comps.len() {
                let v = connect_check(&comps[i], &comps[j], &t, &eps, &res)?;
                let size = v.enclosing.as_ref().map_or(0, Vec::len);
                println!("  eps {eps:<5} {i} <-> {j}: connected {} (enclosing size {size})", v.connected);
            }
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
