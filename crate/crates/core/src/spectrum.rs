//! Exact Markov and Lagrange values of periodic sequences, the Markov tree,
//! and certified maxima of `f` over subhorseshoes.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cf::{purely_periodic_value, window_f_range, PeriodicSeq, Symbol, Word};
use crate::interval::RatInterval;
use crate::quadratic::{Quadratic, QuadraticValue};
use crate::sft::{tarjan, SubshiftAutomaton};
use crate::{Error, Result};

/// Default enclosure width for spectrum values.
pub fn default_tol() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Markov,
    Lagrange,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumPoint {
    pub value: QuadraticValue,
    pub witness: PeriodicSeq,
    pub kind: ValueKind,
}

fn rotate(symbols: &[Symbol], k: usize) -> Vec<Symbol> {
    symbols[k..].iter().chain(&symbols[..k]).copied().collect()
}

/// Exact `f` at position `k` of the bi-infinite periodic sequence `…www…`.
fn shift_value(period: &[Symbol], k: usize) -> Result<Quadratic> {
    let n = period.len();
    let forward = Word::new(rotate(period, (k + 1) % n))?;
    let backward: Vec<Symbol> = rotate(period, k).into_iter().rev().collect();
    let backward = Word::new(backward)?;
    let x = purely_periodic_value(&forward)?;
    let y = purely_periodic_value(&backward)?;
    Quadratic::from_integer(period[k]).add(&x)?.add(&y)
}

fn shift_max(period: &Word) -> Result<Quadratic> {
    let mut best = shift_value(period.symbols(), 0)?;
    for k in 1..period.len() {
        let v = shift_value(period.symbols(), k)?;
        if v.try_cmp(&best)? == Ordering::Greater {
            best = v;
        }
    }
    Ok(best)
}

/// `m(θ) = sup_i f(σ^i θ)` for the purely periodic `θ`, exact.
pub fn markov_value(s: &PeriodicSeq, tol: &BigRational) -> Result<SpectrumPoint> {
    if !s.is_purely_periodic() {
        return Err(Error::NotPurelyPeriodic);
    }
    Ok(SpectrumPoint {
        value: QuadraticValue::new(shift_max(&s.period)?, tol)?,
        witness: s.clone(),
        kind: ValueKind::Markov,
    })
}

/// `ℓ(θ) = limsup_{i→∞} f(σ^i θ)`: only the periodic tail matters.
pub fn lagrange_value(s: &PeriodicSeq, tol: &BigRational) -> Result<SpectrumPoint> {
    Ok(SpectrumPoint {
        value: QuadraticValue::new(shift_max(&s.period)?, tol)?,
        witness: s.clone(),
        kind: ValueKind::Lagrange,
    })
}

/// Enclosure of the Markov value of `…www…` without exact arithmetic: each
/// shift is enclosed by a window of repeated periods until the width is at
/// most `tol`. Useful when the exact discriminant is too large to factor.
pub fn periodic_markov_enclosure(period: &[Symbol], tol: &BigRational) -> Result<RatInterval> {
    if period.is_empty() {
        return Err(Error::EmptyPeriod);
    }
    let n = period.len();
    let mut reps = 1usize;
    loop {
        let mut best: Option<RatInterval> = None;
        for k in 0..n {
            let rotated = rotate(period, k);
            let mut word = Vec::with_capacity(n * (2 * reps + 1));
            for _ in 0..(2 * reps + 1) {
                word.extend_from_slice(&rotated);
            }
            let r = window_f_range(&word, reps * n)?;
            best = Some(match best {
                None => r,
                Some(b) => b.max(&r),
            });
        }
        let best = best.expect("non-empty period");
        if &best.width() <= tol {
            return Ok(best);
        }
        reps *= 2;
    }
}

/// A solution of `x² + y² + z² = 3xyz` with `x ≤ y ≤ z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkovTriple {
    pub x: BigUint,
    pub y: BigUint,
    pub z: BigUint,
}

impl MarkovTriple {
    fn sorted(mut v: [BigUint; 3]) -> Self {
        v.sort();
        let [x, y, z] = v;
        MarkovTriple { x, y, z }
    }

    pub fn satisfies_equation(&self) -> bool {
        let lhs = &self.x * &self.x + &self.y * &self.y + &self.z * &self.z;
        lhs == BigUint::from(3u32) * &self.x * &self.y * &self.z
    }

    /// The radicand `9z² − 4` of the spectrum point `√(9z² − 4)/z`.
    pub fn radicand(&self) -> BigUint {
        BigUint::from(9u32) * &self.z * &self.z - BigUint::from(4u32)
    }

    /// `√(9 − 4/z²)`, exactly.
    pub fn spectrum_point(&self, tol: &BigRational) -> Result<QuadraticValue> {
        let q = Quadratic::sqrt_over(BigInt::from(self.radicand()), BigInt::from(self.z.clone()))?;
        QuadraticValue::new(q, tol)
    }

    fn neighbours(&self) -> [MarkovTriple; 3] {
        let three = BigUint::from(3u32);
        let (x, y, z) = (&self.x, &self.y, &self.z);
        // Vieta: the other root of the quadratic in one coordinate; it is
        // positive because the product of the roots is a² + b².
        let flip = |a: &BigUint, b: &BigUint, c: &BigUint| &three * a * b - c;
        [
            MarkovTriple::sorted([x.clone(), y.clone(), flip(x, y, z)]),
            MarkovTriple::sorted([x.clone(), z.clone(), flip(x, z, y)]),
            MarkovTriple::sorted([y.clone(), z.clone(), flip(y, z, x)]),
        ]
    }
}

/// The first `limit` Markov triples in increasing order of `z`, walking the
/// Markov tree from `(1, 1, 1)` by Vieta mutations.
pub fn markov_triples(limit: usize) -> Vec<MarkovTriple> {
    let one = BigUint::one();
    let root = MarkovTriple::sorted([one.clone(), one.clone(), one]);
    let mut heap = BinaryHeap::new();
    let mut seen = BTreeSet::new();
    heap.push(Reverse((root.z.clone(), root.clone())));
    seen.insert(root);
    let mut out = Vec::with_capacity(limit);
    while out.len() < limit {
        let Some(Reverse((_, t))) = heap.pop() else { break };
        for next in t.neighbours() {
            if seen.insert(next.clone()) {
                heap.push(Reverse((next.z.clone(), next)));
            }
        }
        out.push(t);
    }
    out
}

/// Primitive words over `{1, 2}` up to `max_len`, one per rotation class.
fn primitive_necklaces(max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for bits in 0u64..(1u64 << len) {
            let w: Vec<Symbol> = (0..len).map(|i| 1 + ((bits >> (len - 1 - i)) & 1) as Symbol).collect();
            let is_min = (1..len).all(|k| rotate(&w, k) > w);
            if is_min {
                out.push(w);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosscheckEntry {
    pub triple: MarkovTriple,
    pub point: QuadraticValue,
    /// A periodic sequence whose Markov value overlaps the spectrum point.
    pub witness: Option<SpectrumPoint>,
}

impl CrosscheckEntry {
    pub fn exact_match(&self) -> bool {
        self.witness
            .as_ref()
            .is_some_and(|w| w.value.exact == self.point.exact)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub entries: Vec<CrosscheckEntry>,
    pub max_period: usize,
}

impl CrosscheckReport {
    pub fn matches(&self) -> usize {
        self.entries.iter().filter(|e| e.witness.is_some()).count()
    }

    pub fn misses(&self) -> Vec<&MarkovTriple> {
        self.entries
            .iter()
            .filter(|e| e.witness.is_none())
            .map(|e| &e.triple)
            .collect()
    }
}

/// Pairs each of the first `count` points `√(9 − 4/z²)` with a periodic
/// sequence over `{1, 2}` of period at most `max_period` whose Markov value
/// overlaps it at tolerance `tol`.
pub fn low_spectrum_crosscheck(count: usize, max_period: usize, tol: &BigRational) -> Result<CrosscheckReport> {
    let candidates = primitive_necklaces(max_period)
        .into_iter()
        .map(|w| markov_value(&PeriodicSeq::purely_periodic(w)?, tol))
        .collect::<Result<Vec<_>>>()?;
    let entries = markov_triples(count)
        .into_iter()
        .map(|triple| {
            let point = triple.spectrum_point(tol)?;
            let witness = candidates
                .iter()
                .find(|c| c.value.enclosure.overlaps(&point.enclosure))
                .cloned();
            Ok(CrosscheckEntry {
                triple,
                point,
                witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CrosscheckReport {
        entries,
        max_period,
    })
}

/// Writes the triple table with columns `x,y,z,value_num_isqrt_form,decimal_60`.
pub fn write_triples_csv<W: Write>(triples: &[MarkovTriple], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "z", "value_num_isqrt_form", "decimal_60"])?;
    for t in triples {
        let v = Quadratic::sqrt_over(BigInt::from(t.radicand()), BigInt::from(t.z.clone()))?;
        w.write_record([
            t.x.to_string(),
            t.y.to_string(),
            t.z.to_string(),
            format!("sqrt({})/{}", t.radicand(), t.z),
            v.to_decimal(60),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Certified interval for `max f` over the subhorseshoe `comp` of `a`: every
/// path of `2k+1` states inside the component yields a window of half-width
/// `ℓ + k`, and the answer is `[max lo, max hi]` over those windows.
pub fn max_f_over_component(
    a: &SubshiftAutomaton,
    comp: &[usize],
    refinement: usize,
    budget: u128,
) -> Result<RatInterval> {
    let mut comp = comp.to_vec();
    comp.sort_unstable();
    comp.dedup();
    if comp.is_empty() {
        return Err(Error::NotStronglyConnected);
    }
    let local = |s: usize| comp.binary_search(&s).ok();
    let adj: Vec<Vec<usize>> = comp
        .iter()
        .map(|&s| a.successors(s).iter().filter_map(|&j| local(j)).collect())
        .collect();
    let sccs = tarjan(&adj);
    if sccs.len() != 1 || (comp.len() == 1 && adj[0].is_empty()) {
        return Err(Error::NotStronglyConnected);
    }
    let pred: Vec<Vec<usize>> = {
        let mut p = vec![Vec::new(); comp.len()];
        for (i, out) in adj.iter().enumerate() {
            for &j in out {
                p[j].push(i);
            }
        }
        p
    };
    let len = a.word_len();
    let mut best: Option<RatInterval> = None;
    let mut visited = 0u128;
    // Extend each center state k steps back and k steps forward.
    let mut lefts: Vec<Vec<Symbol>> = Vec::new();
    let mut rights: Vec<Vec<Symbol>> = Vec::new();
    for c in 0..comp.len() {
        lefts.clear();
        rights.clear();
        collect_extensions(&pred, c, refinement, &mut Vec::new(), &mut lefts, |s| {
            a.state(comp[s]).symbols()[0]
        });
        collect_extensions(&adj, c, refinement, &mut Vec::new(), &mut rights, |s| {
            a.state(comp[s]).symbols()[len - 1]
        });
        visited += lefts.len() as u128 * rights.len() as u128;
        if visited > budget {
            return Err(Error::Budget {
                what: "component refinement paths".into(),
                needed: visited,
                budget,
            });
        }
        for l in &lefts {
            for r in &rights {
                let mut word: Vec<Symbol> = l.iter().rev().copied().collect();
                word.extend_from_slice(a.state(comp[c]).symbols());
                word.extend_from_slice(r);
                let range = window_f_range(&word, refinement + a.window())?;
                best = Some(match best {
                    None => range,
                    Some(b) => b.max(&range),
                });
            }
        }
    }
    best.ok_or(Error::NotStronglyConnected)
}

/// All symbol sequences read along `k`-step walks from `start` in `adj`,
/// one symbol per step as given by `symbol_of(next state)`.
fn collect_extensions(
    adj: &[Vec<usize>],
    start: usize,
    k: usize,
    prefix: &mut Vec<Symbol>,
    out: &mut Vec<Vec<Symbol>>,
    symbol_of: impl Fn(usize) -> Symbol + Copy,
) {
    if prefix.len() == k {
        out.push(prefix.clone());
        return;
    }
    for &next in &adj[start] {
        prefix.push(symbol_of(next));
        collect_extensions(adj, next, k, prefix, out, symbol_of);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::{build_full_shift, DEFAULT_STATE_BUDGET};

    fn periodic(w: &[Symbol]) -> PeriodicSeq {
        PeriodicSeq::purely_periodic(w.to_vec()).unwrap()
    }

    #[test]
    fn anchor_markov_values() {
        let tol = default_tol();
        let v = markov_value(&periodic(&[1]), &tol).unwrap();
        assert_eq!(v.value.exact, Quadratic::sqrt_over(5, 1).unwrap());
        let v = markov_value(&periodic(&[2]), &tol).unwrap();
        assert_eq!(v.value.exact, Quadratic::sqrt_over(8, 1).unwrap());
        let v = markov_value(&periodic(&[2, 2, 1, 1]), &tol).unwrap();
        assert_eq!(v.value.exact, Quadratic::sqrt_over(221, 5).unwrap());
        assert!(matches!(
            markov_value(&PeriodicSeq::new(vec![2], vec![1]).unwrap(), &tol),
            Err(Error::NotPurelyPeriodic)
        ));
    }

    #[test]
    fn periodic_enclosure_contains_exact_value() {
        let tol = default_tol();
        let r = periodic_markov_enclosure(&[2, 2, 1, 1], &tol).unwrap();
        let exact = markov_value(&periodic(&[2, 2, 1, 1]), &tol).unwrap();
        assert!(r.overlaps(&exact.value.enclosure));
        assert!(r.width() <= tol);
    }

    #[test]
    fn lagrange_ignores_preperiod() {
        let tol = default_tol();
        let v = lagrange_value(&PeriodicSeq::new(vec![2, 2, 2], vec![1]).unwrap(), &tol).unwrap();
        assert_eq!(v.value.exact, Quadratic::sqrt_over(5, 1).unwrap());
        assert_eq!(v.kind, ValueKind::Lagrange);
    }

    #[test]
    fn first_markov_numbers() {
        let z: Vec<u64> = markov_triples(9)
            .iter()
            .map(|t| t.z.to_string().parse().unwrap())
            .collect();
        assert_eq!(z, vec![1, 2, 5, 13, 29, 34, 89, 169, 194]);
        assert!(markov_triples(40).iter().all(MarkovTriple::satisfies_equation));
    }

    #[test]
    fn necklaces_are_canonical() {
        let n = primitive_necklaces(4);
        // 2 + 1 + 2 + 3 primitive binary necklaces of lengths 1..4.
        assert_eq!(n.len(), 8);
        assert!(n.contains(&vec![1, 1, 2, 2]));
    }

    #[test]
    fn component_maxima() {
        let one = SubshiftAutomaton::from_states(2, 1, vec![vec![1, 1, 1]]).unwrap();
        let r = max_f_over_component(&one, &[0], 2, DEFAULT_STATE_BUDGET).unwrap();
        assert!(r.lo_f64() <= 5f64.sqrt() && 5f64.sqrt() <= r.hi_f64());
        assert!(r.width() <= BigRational::new(1.into(), 3.into()));
        let full = build_full_shift(4, 1, DEFAULT_STATE_BUDGET).unwrap();
        let all: Vec<usize> = (0..full.len()).collect();
        let r = max_f_over_component(&full, &all, 2, DEFAULT_STATE_BUDGET).unwrap();
        assert!(r.lo_f64() <= 32f64.sqrt() && 32f64.sqrt() <= r.hi_f64(), "{r}");
        let chain = SubshiftAutomaton::from_states(2, 1, vec![vec![1, 1, 1], vec![1, 1, 2]]).unwrap();
        assert!(matches!(
            max_f_over_component(&chain, &[0, 1], 1, DEFAULT_STATE_BUDGET),
            Err(Error::NotStronglyConnected)
        ));
    }
}
