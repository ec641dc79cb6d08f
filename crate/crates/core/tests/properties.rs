use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use lagrange_spectra::cf::{
    cf_value, convergents, cylinder_interval, f_window_range, Continuants, PeriodicSeq, Symbol, Word,
};
use lagrange_spectra::dimension::{automaton_pressure_dim, DimensionEstimate};
use lagrange_spectra::interval::parse_rational;
use lagrange_spectra::quadratic::Quadratic;
use lagrange_spectra::sft::{build_full_shift, full_shift_over, scc_decompose, Level, PruneMode, SubshiftAutomaton, DEFAULT_STATE_BUDGET};
use lagrange_spectra::spectrum::{lagrange_value, markov_value, periodic_markov_enclosure};

fn word(symbols: Vec<Symbol>) -> Word {
    Word::new(symbols).unwrap()
}

fn words(max_symbol: Symbol, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Symbol>> {
    prop::collection::vec(1..=max_symbol, len)
}

fn r(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn continuant_determinant_and_coprimality(s in words(9, 1..=60)) {
        let c = convergents(&word(s));
        prop_assert!(c.determinant().abs().is_one());
        prop_assert!(c.p.gcd(&c.q).is_one());
        prop_assert!(c.q >= c.q_prev && !c.q_prev.is_negative());
    }

    #[test]
    fn continuant_reversal_symmetry(s in words(9, 1..=60)) {
        let w = word(s);
        prop_assert_eq!(convergents(&w).q, convergents(&w.reversed()).q);
    }

    #[test]
    fn cylinder_shape_and_nesting(s in words(6, 1..=20), b in 1u8..=6) {
        let w = word(s.clone());
        let c = cylinder_interval(&w);
        prop_assert!(c.lo.is_positive() && c.lo < c.hi && c.hi <= BigRational::one());
        prop_assert_eq!(&c.hi - &c.lo, c.length.clone());
        let child = cylinder_interval(&word([s, vec![b]].concat()));
        prop_assert!(c.lo <= child.lo && child.hi <= c.hi);
    }

    #[test]
    fn product_distortion_bounds(a in words(6, 1..=12), b in words(6, 1..=12)) {
        let la = cylinder_interval(&word(a.clone())).length;
        let lb = cylinder_interval(&word(b.clone())).length;
        let lab = cylinder_interval(&word([a, b].concat())).length;
        let ratio = lab / (la * lb);
        prop_assert!(ratio >= r(1, 8) && ratio <= r(4, 1));
    }

    #[test]
    fn geometric_length_bounds(n in 1u8..=6, s in words(6, 1..=14)) {
        let s: Vec<Symbol> = s.into_iter().map(|x| 1 + (x - 1) % n).collect();
        let len = s.len() as u32;
        let inv = cylinder_interval(&word(s)).length.recip().to_integer();
        prop_assert!(inv <= BigInt::from(2) * BigInt::from(n as u32 + 1).pow(2 * len));
        // φ^{2(n-1)} ≤ 1/|I|
        let phi_sq = Quadratic::new(3.into(), 1.into(), 2.into(), 5.into()).unwrap();
        let mut bound = Quadratic::from_integer(1);
        for _ in 1..len {
            bound = bound.mul(&phi_sq).unwrap();
        }
        prop_assert!(Quadratic::from_integer(inv).try_cmp(&bound).unwrap().is_ge());
    }

    #[test]
    fn periodic_value_satisfies_shift_relation(pre in words(4, 0..=3), per in words(4, 1..=4)) {
        let tol = r(1, 1_000_000);
        let s = PeriodicSeq::new(pre.clone(), per.clone()).unwrap();
        let v = cf_value(&s, &tol).unwrap();
        prop_assert!(v.enclosure.width() <= tol);
        let (head, shifted) = if pre.is_empty() {
            let rotated = [&per[1..], &per[..1]].concat();
            (per[0], PeriodicSeq::purely_periodic(rotated).unwrap())
        } else {
            (pre[0], PeriodicSeq::new(pre[1..].to_vec(), per).unwrap())
        };
        let next = cf_value(&shifted, &tol).unwrap().exact;
        let expected = Quadratic::from_integer(1)
            .div(&Quadratic::from_integer(head).add(&next).unwrap())
            .unwrap();
        prop_assert_eq!(v.exact, expected);
    }

    #[test]
    fn markov_value_invariant_under_rotation_and_repetition(per in words(3, 1..=5), k in 0usize..5) {
        let tol = r(1, 1_000_000_000);
        let base = markov_value(&PeriodicSeq::purely_periodic(per.clone()).unwrap(), &tol).unwrap();
        let k = k % per.len();
        let rotated = [&per[k..], &per[..k]].concat();
        let rot = markov_value(&PeriodicSeq::purely_periodic(rotated).unwrap(), &tol).unwrap();
        let doubled = markov_value(&PeriodicSeq::purely_periodic([per.clone(), per.clone()].concat()).unwrap(), &tol).unwrap();
        prop_assert_eq!(&base.value.exact, &rot.value.exact);
        prop_assert_eq!(&base.value.exact, &doubled.value.exact);
        let lag = lagrange_value(&PeriodicSeq::purely_periodic(per.clone()).unwrap(), &tol).unwrap();
        prop_assert_eq!(&base.value.exact, &lag.value.exact);
        let enclosure = periodic_markov_enclosure(&per, &r(1, 1_000_000)).unwrap();
        prop_assert!(enclosure.overlaps(&base.value.enclosure));
    }
}

#[test]
fn window_ranges_shrink_geometrically_on_ones() {
    let widths: Vec<BigRational> = (1..=12)
        .map(|l| f_window_range(&word(vec![1; 2 * l + 1]), l).unwrap().width())
        .collect();
    for pair in widths.windows(2) {
        assert!(pair[1] <= &pair[0] * r(7, 10), "{} then {}", pair[0], pair[1]);
    }
}

fn all_words(n: Symbol, len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| (1..=n).map(move |a| [p.clone(), vec![a]].concat()))
            .collect();
    }
    out
}

/// Value of `[0; c, y]` for a tail `y`, given the continuants of `c`.
fn mobius(c: &Continuants, y: &BigRational) -> BigRational {
    let p = BigRational::from_integer(c.p.clone()) + BigRational::from_integer(c.p_prev.clone()) * y;
    let q = BigRational::from_integer(c.q.clone()) + BigRational::from_integer(c.q_prev.clone()) * y;
    p / q
}

/// Pieces of the Cantor set `K_N` inside distinct child cylinders are disjoint
/// and separated proportionally to the parent. Tails of `K_N` lie in
/// `[1/(N+1), (N+1)/(N+2)]`; on `[0, 1]` the derivative of the parent's Möbius
/// map is at least `|I(α)|/2`, so the separation at the empty word halves at
/// worst. For `N = 2` the gap also exceeds `|I(α)|/8`.
#[test]
fn child_pieces_are_separated() {
    for n in 2..=4u8 {
        let t_lo = r(1, n as i64 + 1);
        let t_hi = r(n as i64 + 1, n as i64 + 2);
        let piece = |c: &Continuants, b: Symbol| -> (BigRational, BigRational) {
            let mut cb = c.clone();
            cb.push(b);
            let (x, y) = (mobius(&cb, &t_lo), mobius(&cb, &t_hi));
            if x < y { (x, y) } else { (y, x) }
        };
        let root = Continuants::empty();
        let base_gap = (1..n)
            .map(|b| piece(&root, b).0 - piece(&root, b + 1).1)
            .min()
            .unwrap();
        assert!(base_gap.is_positive());
        let max_len = if n == 4 { 7 } else { 8 };
        let mut checked = 0usize;
        for len in 0..=max_len {
            for alpha in all_words(n, len) {
                let mut c = Continuants::empty();
                for &a in &alpha {
                    c.push(a);
                }
                let parent = BigRational::new(BigInt::one(), &c.q * (&c.q + &c.q_prev));
                let pieces: Vec<_> = (1..=n).map(|b| piece(&c, b)).collect();
                for i in 0..pieces.len() {
                    for j in i + 1..pieces.len() {
                        let (a, b) = (&pieces[i], &pieces[j]);
                        let gap = if a.1 < b.0 { &b.0 - &a.1 } else { &a.0 - &b.1 };
                        assert!(gap.is_positive(), "pieces {i},{j} of {alpha:?} overlap");
                        assert!(gap >= &parent * &base_gap / BigInt::from(2));
                        if n == 2 {
                            assert!(gap * BigInt::from(8) >= parent, "{alpha:?}");
                        }
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 0);
    }
}

fn state_set(a: &SubshiftAutomaton) -> BTreeSet<Vec<Symbol>> {
    a.states().iter().map(|w| w.symbols().to_vec()).collect()
}

fn level(num: i64, den: i64) -> Level {
    Level::Finite(r(num, den))
}

fn mode(outer: bool) -> PruneMode {
    if outer { PruneMode::Outer } else { PruneMode::Inner }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pruning_is_monotone_nested_and_idempotent(
        n in 2u8..=3,
        window in 1usize..=2,
        t1 in 250i64..=450,
        dt in 0i64..=60,
    ) {
        let full = build_full_shift(n, window, DEFAULT_STATE_BUDGET).unwrap();
        let (l1, l2) = (level(t1, 100), level(t1 + dt, 100));
        let outer1 = full.prune_sublevel(&l1, PruneMode::Outer);
        let outer2 = full.prune_sublevel(&l2, PruneMode::Outer);
        let inner1 = full.prune_sublevel(&l1, PruneMode::Inner);
        let inner2 = full.prune_sublevel(&l2, PruneMode::Inner);
        prop_assert!(state_set(&outer1).is_subset(&state_set(&outer2)));
        prop_assert!(state_set(&inner1).is_subset(&state_set(&inner2)));
        prop_assert!(state_set(&inner1).is_subset(&state_set(&outer1)));
        for (a, outer) in [(&outer1, true), (&inner1, false)] {
            let again = a.prune_sublevel(&l1, mode(outer));
            prop_assert_eq!(state_set(a), state_set(&again));
            prop_assert_eq!(a.transitions().collect::<Vec<_>>(), again.transitions().collect::<Vec<_>>());
            for (u, v) in a.transitions() {
                prop_assert_eq!(&a.state(u).symbols()[1..], &a.state(v).symbols()[..a.word_len() - 1]);
            }
        }
    }

    #[test]
    fn longer_windows_refine_outer_prunes(n in 2u8..=3, t in 280i64..=420) {
        let l = level(t, 100);
        let short = build_full_shift(n, 1, DEFAULT_STATE_BUDGET).unwrap().prune_sublevel(&l, PruneMode::Outer);
        let long = build_full_shift(n, 2, DEFAULT_STATE_BUDGET).unwrap().prune_sublevel(&l, PruneMode::Outer);
        let short_states = state_set(&short);
        for w in long.states() {
            let s = w.symbols();
            prop_assert!(short_states.contains(&s[1..s.len() - 1]), "{:?} has no parent window", s);
        }
    }

    #[test]
    fn decomposition_partitions_states(n in 2u8..=3, window in 1usize..=2, t in 280i64..=420, outer in any::<bool>()) {
        let a = build_full_shift(n, window, DEFAULT_STATE_BUDGET).unwrap().prune_sublevel(&level(t, 100), mode(outer));
        let d = scc_decompose(&a);
        let mut seen = vec![0u8; a.len()];
        for (k, comp) in d.subhorseshoes.iter().enumerate() {
            for &s in comp {
                seen[s] += 1;
                prop_assert_eq!(d.component_of[s], Some(k));
            }
        }
        for &s in d.transient_states.iter().chain(&d.orphan_states) {
            seen[s] += 1;
            prop_assert_eq!(d.component_of[s], None);
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        for &(i, j) in &d.transient_pairs {
            prop_assert!(i != j);
            let path = lagrange_spectra::sft::reach_witness(&a, &d.subhorseshoes[i], &d.subhorseshoes[j]);
            prop_assert!(path.is_some());
        }
        // the cleanup leaves no dead ends
        let preds = a.predecessors();
        for s in 0..a.len() {
            prop_assert!(!a.successors(s).is_empty() && !preds[s].is_empty());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pressure_brackets_are_ordered_and_nested(symbols in prop::collection::btree_set(1u8..=5, 2..=3)) {
        let symbols: Vec<Symbol> = symbols.into_iter().collect();
        let mut prev: Option<DimensionEstimate> = None;
        for window in 1..=2 {
            let shift = full_shift_over(&symbols, window, DEFAULT_STATE_BUDGET).unwrap();
            let d = automaton_pressure_dim(&shift, 1e-9).unwrap();
            prop_assert!(d.lo <= d.hi, "{:?}: {}", symbols, d);
            if let Some(p) = &prev {
                prop_assert!(d.overlaps(p), "{:?}: {} vs {}", symbols, d, p);
                prop_assert!(d.width() <= p.width() + 1e-9);
            }
            prev = Some(d);
        }
    }
}

#[test]
fn unbounded_level_keeps_everything() {
    let full = build_full_shift(2, 2, DEFAULT_STATE_BUDGET).unwrap();
    assert_eq!(full.prune_sublevel(&Level::Unbounded, PruneMode::Inner).len(), full.len());
    let top = parse_rational("100").unwrap();
    assert_eq!(full.prune_sublevel(&Level::Finite(top), PruneMode::Inner).len(), full.len());
    assert!(full.prune_sublevel(&Level::Finite(BigRational::zero()), PruneMode::Outer).is_empty());
}
