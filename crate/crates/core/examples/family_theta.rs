//! An increasing family of subhorseshoes and a sequence built from it whose
//! Lagrange value lands inside the last stage.

use std::error::Error;

use lagrange_spectra::analysis::{increasing_family, theta_generate, GapSchedule, Resolution};
use lagrange_spectra::interval::parse_rational;

pub fn run() -> Result<(), Box<dyn Error>> {
    let res = Resolution::new(2, 4);
    let family = increasing_family(0.3, &parse_rational("1/8")?, 2, &res)?;
    println!(
        "eta- in [{}, {}]",
        family.eta_minus.left, family.eta_minus.right
    );
    for (k, s) in family.stages.iter().enumerate() {
        let linked = s.link.as_ref().map(|l| l.connected);
        println!(
            "stage {k}: level {}, {} states, dim {}, max f {}, linked {linked:?}",
            s.level,
            s.component.len(),
            s.dim,
            s.max_f
        );
    }
    if let Some(d) = &family.diagnostic {
        println!("note: {d}");
    }
    let Some(first) = family.stages.first() else {
        return Ok(());
    };
    let base = vec![first.component[0].clone()];
    let gaps = GapSchedule::new(1, 2)?;
    let theta = theta_generate(&res, &base, &family.stages, 3, &gaps)?;
    let slower = theta_generate(&res, &base, &family.stages, 3, &gaps.doubled())?;
    println!(
        "theta: {} symbols, L in {}, inside last stage: {}",
        theta.word.len(),
        theta.lagrange,
        theta.within_final
    );
    println!("stable under doubled gaps: {}", theta.stable_against(&slower));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
