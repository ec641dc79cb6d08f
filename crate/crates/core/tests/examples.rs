#[allow(dead_code)]
#[path = "../examples/markov_spectrum.rs"]
mod markov_spectrum;

#[allow(dead_code)]
#[path = "../examples/continued_fractions.rs"]
mod continued_fractions;

#[allow(dead_code)]
#[path = "../examples/sublevel_prune.rs"]
mod sublevel_prune;

#[allow(dead_code)]
#[path = "../examples/dimension_estimates.rs"]
mod dimension_estimates;

#[allow(dead_code)]
#[path = "../examples/d_curve.rs"]
mod d_curve;

#[allow(dead_code)]
#[path = "../examples/eta_minus.rs"]
mod eta_minus;

#[allow(dead_code)]
#[path = "../examples/connections.rs"]
mod connections;

#[allow(dead_code)]
#[path = "../examples/family_theta.rs"]
mod family_theta;

#[allow(dead_code)]
#[path = "../examples/classify.rs"]
mod classify;

#[allow(dead_code)]
#[path = "../examples/result_cache.rs"]
mod result_cache;


#[test]
fn markov_spectrum_runs() {
    markov_spectrum::run().unwrap();
}

#[test]
fn continued_fractions_runs() {
    continued_fractions::run().unwrap();
}

#[test]
fn sublevel_prune_runs() {
    sublevel_prune::run().unwrap();
}

#[test]
fn dimension_estimates_runs() {
    dimension_estimates::run().unwrap();
}

#[test]
fn d_curve_runs() {
    d_curve::run().unwrap();
}

#[test]
fn eta_minus_runs() {
    eta_minus::run().unwrap();
}

#[test]
fn connections_runs() {
    connections::run().unwrap();
}

#[test]
fn family_theta_runs() {
    family_theta::run().unwrap();
}

#[test]
fn classify_runs() {
    classify::run().unwrap();
}

#[test]
fn result_cache_runs() {
    result_cache::run().unwrap();
}
