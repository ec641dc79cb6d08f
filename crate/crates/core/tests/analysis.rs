use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use lagrange_spectra::analysis::{
    classify_components, classify_point, connect_check, d_curve, eta_minus, increasing_family, parse_grid,
    stage_at, theta_generate, ComponentReport, DimMethod, EpsOutcome, GapSchedule, Label, Resolution, Sublevel,
    Tier,
};
use lagrange_spectra::dimension::{Diagnostics, DimensionEstimate, Method};
use lagrange_spectra::interval::{parse_rational, RatInterval};
use lagrange_spectra::sft::PruneMode;
use lagrange_spectra::Error;

fn q(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn estimate(lo: f64, hi: f64) -> DimensionEstimate {
    DimensionEstimate {
        lo,
        hi,
        method: Method::Pressure,
        diagnostics: Diagnostics::None,
    }
}

fn report(dim: (f64, f64), max_f: (&str, &str), outer_best: bool) -> ComponentReport {
    ComponentReport {
        size: 4,
        dim: estimate(dim.0, dim.1),
        max_f: RatInterval::new(q(max_f.0), q(max_f.1)),
        periodic_values: Vec::new(),
        contains_outer_best: outer_best,
    }
}

#[test]
fn d_curve_vanishes_below_three() {
    let res = Resolution::new(2, 3).with_r_max(20).with_method(DimMethod::BoxCount);
    let grid = vec![q("2"), q("2.5"), q("2.9")];
    for p in d_curve(&grid, &res).unwrap() {
        assert!(p.d_lo <= p.d_hi);
        assert!(p.d_hi <= 0.05, "D({}) = {}", p.t, p.d_hi);
    }
}

#[test]
fn d_curve_rejects_unsorted_grids() {
    let res = Resolution::new(2, 2);
    assert!(d_curve(&[q("3.1"), q("3")], &res).is_err());
    assert!(parse_grid("3:2:1/10").is_err());
    assert_eq!(parse_grid("3:3.2:1/10").unwrap(), vec![q("3"), q("3.1"), q("3.2")]);
}

#[test]
fn eta_minus_edge_cases() {
    let res = Resolution::new(3, 3);
    let zero = eta_minus(0.0, &q("1/16"), &res).unwrap();
    assert!(zero.degenerate);
    assert!(zero.left <= zero.right && zero.right - zero.left <= q("1/16"));
    assert!(matches!(eta_minus(-0.1, &q("1/16"), &res), Err(Error::EtaOutOfRange { .. })));
    assert!(matches!(eta_minus(1.5, &q("1/16"), &res), Err(Error::EtaOutOfRange { .. })));
}

#[test]
fn a_component_connects_to_itself() {
    let res = Resolution::new(3, 3);
    let t = q("3.1");
    let s = Sublevel::compute(&t, PruneMode::Outer, &res).unwrap();
    let comp = lagrange_spectra::analysis::words_of(&s.automaton, &s.decomposition.subhorseshoes[s.best().unwrap()]);
    let v = connect_check(&comp, &comp, &t, &BigRational::zero(), &res).unwrap();
    assert!(v.connected);
    assert_eq!(v.enclosing.unwrap(), comp);
    assert!(connect_check(&comp, &comp, &t, &q("-1/10"), &res).is_err());
}

#[test]
fn oversized_eps_leaves_a_diagnostic() {
    let res = Resolution::new(2, 2);
    let fam = increasing_family(0.05, &q("1/1000"), 3, &res).unwrap();
    assert!(fam.stages.len() < 3);
    assert!(fam.diagnostic.is_some());
    assert!(increasing_family(0.05, &BigRational::zero(), 3, &res).is_err());
}

#[test]
fn theta_over_the_golden_cycle_has_value_root_five() {
    let res = Resolution::new(2, 3);
    let stage = stage_at(&q("2.4"), &q("2.5"), &res).unwrap().unwrap();
    assert_eq!(stage.component.len(), 1);
    assert!(stage.component[0].symbols().iter().all(|&a| a == 1));
    let gaps = GapSchedule::new(1, 2).unwrap();
    let demo = theta_generate(&res, &stage.component, std::slice::from_ref(&stage), 2, &gaps).unwrap();
    assert!(demo.word.iter().all(|&a| a == 1));
    let five = BigRational::from_integer(BigInt::from(5));
    assert!(demo.lagrange.lo.is_positive());
    assert!(&demo.lagrange.lo * &demo.lagrange.lo <= five && five <= &demo.lagrange.hi * &demo.lagrange.hi);
    assert!(demo.within_final);
    assert!(GapSchedule::new(0, 2).is_err() && GapSchedule::new(1, 1).is_err());
}

#[test]
fn classifier_on_synthetic_components() {
    let t = q("3.5");
    let eps = q("1/10");
    let high_far = report((0.6, 0.62), ("3.1", "3.2"), true);
    let low_near = report((0.1, 0.12), ("3.49", "3.51"), false);
    let v = classify_components(&t, &eps, 0.5, 0.6, &[high_far.clone(), low_near.clone()]);
    assert_eq!(v.tiers, vec![Tier::High, Tier::Low]);
    assert_eq!(v.outcome, EpsOutcome::Misses);

    let high_near = report((0.61, 0.63), ("3.49", "3.51"), false);
    let v = classify_components(&t, &eps, 0.5, 0.6, &[high_far.clone(), high_near]);
    assert_eq!(v.outcome, EpsOutcome::Meets);

    let ambiguous = report((0.55, 0.58), ("3.1", "3.2"), false);
    let v = classify_components(&t, &eps, 0.5, 0.6, &[high_far, ambiguous]);
    assert_eq!(v.tiers[1], Tier::Ambiguous);
    assert_eq!(v.outcome, EpsOutcome::Unknown);
}

#[test]
fn labels_are_consistent_under_refinement() {
    let res = Resolution::new(3, 3);
    let coarse = [q("1/4"), q("1/8")];
    let fine = [q("1/4"), q("1/8"), q("1/16")];
    for t in ["3.1", "3.5"] {
        let a = classify_point(&q(t), &coarse, &res).unwrap();
        let b = classify_point(&q(t), &fine, &res).unwrap();
        assert_eq!(a.per_eps, b.per_eps[..2]);
        if a.label == Label::JtildeLike {
            assert_eq!(b.label, Label::JtildeLike);
        }
        if matches!(b.label, Label::JLike | Label::FLike) {
            assert!(matches!(a.label, Label::JLike | Label::FLike));
        }
    }
    assert!(classify_point(&q("3.1"), &[q("1/8"), q("1/4")], &res).is_err());
    let zero = classify_point(&q("2.9"), &coarse, &Resolution::new(2, 3)).unwrap();
    assert_eq!(zero.label, Label::ZeroDimension);
}
