//! Dimension estimators for the unstable Cantor sets of window automata and
//! Gauss–Cantor alphabets: minimal covering counts, a cylinder-weighted
//! pressure solver, sumset box counts, and the finite-type combination rule.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cf::{exp_thresholds, scale_of_inverse_length, tail_range, Symbol, MAX_SCALE};
use crate::interval::{rat_to_f64, RatInterval};
use crate::sft::{tarjan, ComponentDecomposition, SubshiftAutomaton};
use crate::{Error, Result};

/// Default node budget for covering enumerations.
pub const DEFAULT_COUNT_BUDGET: u64 = 2_000_000_000;

/// Largest covering scale supported by the machine-integer enumeration.
pub const MAX_COUNT_SCALE: u32 = MAX_SCALE - 7;

/// A finite set of partial quotients defining the Gauss–Cantor set `K(B)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet(Vec<Symbol>);

impl Alphabet {
    pub fn new(mut symbols: Vec<Symbol>) -> Result<Self> {
        symbols.sort_unstable();
        symbols.dedup();
        if symbols.is_empty() || symbols[0] == 0 {
            return Err(Error::InvalidArgument(
                "an alphabet needs at least one symbol, all ≥ 1".into(),
            ));
        }
        Ok(Alphabet(symbols))
    }

    /// `{1, …, n}`, the alphabet of `C_n`.
    pub fn full(n: Symbol) -> Result<Self> {
        Alphabet::new((1..=n).collect())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }
}

impl FromStr for Alphabet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<Symbol>()
                    .map_err(|_| Error::InvalidArgument(format!("bad alphabet symbol {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Alphabet::new(symbols)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    BoxCount,
    Pressure,
    /// Known exactly without running a solver (empty sets, single cycles).
    Exact,
    FiniteType,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::BoxCount => "boxcount",
            Method::Pressure => "pressure",
            Method::Exact => "exact",
            Method::FiniteType => "finitetype",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BisectionStep {
    pub s: f64,
    pub radius_lo: f64,
    pub radius_hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Diagnostics {
    None,
    /// `counts[r]` for each scale and the slopes that produced the bracket.
    Counts { counts: Vec<u64>, slopes: Vec<f64> },
    /// Bisection traces for the lower-weight and upper-weight matrices.
    Bisection {
        lower: Vec<BisectionStep>,
        upper: Vec<BisectionStep>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub lo: f64,
    pub hi: f64,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

impl DimensionEstimate {
    pub fn exact_zero() -> Self {
        DimensionEstimate {
            lo: 0.0,
            hi: 0.0,
            method: Method::Exact,
            diagnostics: Diagnostics::None,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, other: &DimensionEstimate) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

impl fmt::Display for DimensionEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.9}, {:.9}] ({})", self.lo, self.hi, self.method)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedEdge {
    pub to: usize,
    pub lo: f64,
    pub hi: f64,
}

/// A directed graph whose edges carry weight intervals `[lo, hi] ⊂ (0, ∞)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedAutomaton {
    edges: Vec<Vec<WeightedEdge>>,
}

fn ratio(rho: &BigRational, b: Symbol) -> f64 {
    let one = BigRational::from_integer(1.into());
    let b = BigRational::from_integer(b.into());
    let r = (&one + rho) / ((&b + rho) * (&b + &one + rho));
    rat_to_f64(&r)
}

/// Range of `ratio` over `ρ ∈ rho`. The ratio increases up to
/// `ρ* = √(b² − b) − 1` and decreases after it.
fn ratio_range(rho: &RatInterval, b: Symbol) -> (f64, f64) {
    let (x, y) = (ratio(&rho.lo, b), ratio(&rho.hi, b));
    let mut hi = x.max(y);
    let b = f64::from(b);
    let peak = (b * (b - 1.0)).sqrt() - 1.0;
    if rho.lo_f64() < peak && peak < rho.hi_f64() {
        hi = hi.max((1.0 + peak) / ((b + peak) * (b + 1.0 + peak)));
    }
    (x.min(y), hi)
}

impl WeightedAutomaton {
    /// Edge `u → v` appending symbol `b` gets the ratio `|I(αb)| / |I(α)|`
    /// `= (1+ρ)/((b+ρ)(b+1+ρ))`, `ρ = q_{n−1}/q_n`, bracketed over all `ρ` in the
    /// cylinder of the reversed source word.
    pub fn from_cylinder_ratios(a: &SubshiftAutomaton) -> Self {
        let edges = (0..a.len())
            .into_par_iter()
            .map(|u| {
                let rev: Vec<Symbol> = a.state(u).symbols().iter().rev().copied().collect();
                let rho = tail_range(&rev);
                a.successors(u)
                    .iter()
                    .map(|&v| {
                        let b = *a.state(v).symbols().last().expect("non-empty");
                        let (lo, hi) = ratio_range(&rho, b);
                        WeightedEdge {
                            to: v,
                            lo: lo * (1.0 - 4.0 * f64::EPSILON),
                            hi: hi * (1.0 + 4.0 * f64::EPSILON),
                        }
                    })
                    .collect()
            })
            .collect();
        WeightedAutomaton { edges }
    }

    /// Explicit graph with exact weights; parallel edges are allowed.
    pub fn synthetic(states: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut out = vec![Vec::new(); states];
        for &(from, to, w) in edges {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidWeight(w));
            }
            if from >= states || to >= states {
                return Err(Error::InvalidArgument(format!(
                    "edge ({from}, {to}) outside {states} states"
                )));
            }
            out[from].push(WeightedEdge { to, lo: w, hi: w });
        }
        Ok(WeightedAutomaton { edges: out })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self, i: usize) -> &[WeightedEdge] {
        &self.edges[i]
    }

    fn is_strongly_connected(&self) -> bool {
        let adj: Vec<Vec<usize>> = self
            .edges
            .iter()
            .map(|out| out.iter().map(|e| e.to).collect())
            .collect();
        let comps = tarjan(&adj);
        comps.len() == 1 && (self.len() > 1 || !self.edges[0].is_empty())
    }

    fn is_single_cycle(&self) -> bool {
        self.edges.iter().all(|out| out.len() == 1)
    }
}

/// Power iteration on `M(s) + I` with Collatz–Wielandt bounds, warm-started
/// across calls.
struct RadiusSolver<'a> {
    log_weights: Vec<Vec<(usize, f64)>>,
    x: Vec<f64>,
    _graph: &'a WeightedAutomaton,
}

const MAX_POWER_ITERATIONS: usize = 100_000;

impl<'a> RadiusSolver<'a> {
    fn new(graph: &'a WeightedAutomaton, upper: bool) -> Self {
        let log_weights = graph
            .edges
            .iter()
            .map(|out| {
                out.iter()
                    .map(|e| (e.to, if upper { e.hi } else { e.lo }.ln()))
                    .collect()
            })
            .collect();
        RadiusSolver {
            log_weights,
            x: vec![1.0; graph.len()],
            _graph: graph,
        }
    }

    /// Bounds on the spectral radius of `M(s)`, refined until they decide the
    /// comparison with 1 or reach relative width `rel_tol`.
    fn bounds(&mut self, s: f64, rel_tol: f64) -> (f64, f64) {
        let weights: Vec<Vec<(usize, f64)>> = self
            .log_weights
            .iter()
            .map(|out| out.iter().map(|&(j, lw)| (j, (s * lw).exp())).collect())
            .collect();
        let mut lo = 0.0;
        let mut hi = f64::INFINITY;
        for _ in 0..MAX_POWER_ITERATIONS {
            let x = &self.x;
            let y: Vec<f64> = weights
                .par_iter()
                .enumerate()
                .map(|(i, out)| x[i] + out.iter().map(|&(j, w)| w * x[j]).sum::<f64>())
                .collect();
            let (mut rmin, mut rmax) = (f64::INFINITY, 0.0f64);
            for (yi, xi) in y.iter().zip(x) {
                let r = yi / xi;
                rmin = rmin.min(r);
                rmax = rmax.max(r);
            }
            lo = rmin - 1.0;
            hi = rmax - 1.0;
            let scale = y.iter().copied().fold(0.0f64, f64::max);
            self.x = y.into_iter().map(|v| v / scale).collect();
            if lo > 1.0 || hi < 1.0 || hi - lo <= rel_tol * hi.max(1.0) {
                break;
            }
        }
        (lo, hi)
    }
}

/// Dyadic bisection for the root of `ρ(M(s)) = 1`; returns a bracket.
fn root_bracket(solver: &mut RadiusSolver<'_>, tol: f64) -> (f64, f64, Vec<BisectionStep>) {
    let mut trace = Vec::new();
    let (mut a, mut b) = (0.0f64, 1.0f64);
    for _ in 0..64 {
        let (lo, hi) = solver.bounds(b, 1e-15);
        trace.push(BisectionStep {
            s: b,
            radius_lo: lo,
            radius_hi: hi,
        });
        if lo > 1.0 {
            a = b;
            b *= 2.0;
        } else {
            break;
        }
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        let (lo, hi) = solver.bounds(m, 1e-15);
        trace.push(BisectionStep {
            s: m,
            radius_lo: lo,
            radius_hi: hi,
        });
        if hi < 1.0 {
            b = m;
        } else if lo > 1.0 {
            a = m;
        } else {
            // ρ(M(m)) is 1 to working precision; certify each side separately.
            let mut step = tol / 4.0;
            let (mut left, mut right) = (a, b);
            while m - step > a {
                let (lo, hi) = solver.bounds(m - step, 1e-15);
                trace.push(BisectionStep { s: m - step, radius_lo: lo, radius_hi: hi });
                if lo > 1.0 {
                    left = m - step;
                    break;
                }
                step *= 2.0;
            }
            step = tol / 4.0;
            while m + step < b {
                let (lo, hi) = solver.bounds(m + step, 1e-15);
                trace.push(BisectionStep { s: m + step, radius_lo: lo, radius_hi: hi });
                if hi < 1.0 {
                    right = m + step;
                    break;
                }
                step *= 2.0;
            }
            a = left;
            b = right;
            break;
        }
    }
    (a, b, trace)
}

/// Root `s*` of `ρ(M(s)) = 1` for a strongly connected weighted graph; the
/// bracket covers the roots for both the lower and the upper edge weights.
pub fn pressure_dim(w: &WeightedAutomaton, tol: f64) -> Result<DimensionEstimate> {
    if !(tol > 0.0) {
        return Err(Error::NonPositiveTolerance);
    }
    if w.is_empty() || !w.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    if w.is_single_cycle() {
        return Ok(DimensionEstimate::exact_zero());
    }
    let (lo, _, lower) = root_bracket(&mut RadiusSolver::new(w, false), tol);
    let (_, hi, upper) = root_bracket(&mut RadiusSolver::new(w, true), tol);
    Ok(DimensionEstimate {
        lo,
        hi,
        method: Method::Pressure,
        diagnostics: Diagnostics::Bisection { lower, upper },
    })
}

/// Pressure dimension of the unstable set carried by a strongly connected automaton.
pub fn automaton_pressure_dim(a: &SubshiftAutomaton, tol: f64) -> Result<DimensionEstimate> {
    pressure_dim(&WeightedAutomaton::from_cylinder_ratios(a), tol)
}

/// What a covering count enumerates: all words over an alphabet, or the words
/// read along paths of an automaton.
#[derive(Clone, Copy, Debug)]
pub enum CoverTarget<'a> {
    Alphabet(&'a Alphabet),
    Automaton(&'a SubshiftAutomaton),
}

#[derive(Clone, Copy, Debug)]
enum Pos {
    Free,
    /// Words shorter than a state: the states in `lo..hi` share this prefix.
    Prefix { lo: usize, hi: usize, depth: usize },
    State(usize),
}

#[derive(Clone, Copy, Debug)]
struct Node {
    q: u128,
    q_prev: u128,
    parent_scale: i64,
    pos: Pos,
}

fn children(target: CoverTarget<'_>, pos: Pos, out: &mut Vec<(Symbol, Pos)>) {
    out.clear();
    match (target, pos) {
        (CoverTarget::Alphabet(b), _) => out.extend(b.symbols().iter().map(|&s| (s, Pos::Free))),
        (CoverTarget::Automaton(a), Pos::Prefix { lo, hi, depth }) => {
            let mut start = lo;
            while start < hi {
                let b = a.state(start).symbols()[depth];
                let mut end = start + 1;
                while end < hi && a.state(end).symbols()[depth] == b {
                    end += 1;
                }
                let pos = if depth + 1 == a.word_len() {
                    Pos::State(start)
                } else {
                    Pos::Prefix {
                        lo: start,
                        hi: end,
                        depth: depth + 1,
                    }
                };
                out.push((b, pos));
                start = end;
            }
        }
        (CoverTarget::Automaton(a), Pos::State(s)) => out.extend(
            a.successors(s)
                .iter()
                .map(|&j| (*a.state(j).symbols().last().expect("non-empty"), Pos::State(j))),
        ),
        (CoverTarget::Automaton(_), Pos::Free) => unreachable!("automaton walks start from a prefix"),
    }
}

fn root_pos(target: CoverTarget<'_>) -> Pos {
    match target {
        CoverTarget::Alphabet(_) => Pos::Free,
        CoverTarget::Automaton(a) => Pos::Prefix {
            lo: 0,
            hi: a.len(),
            depth: 0,
        },
    }
}

fn count_subtree(
    target: CoverTarget<'_>,
    start: Node,
    r_max: u32,
    nodes: &AtomicU64,
    budget: u64,
) -> Option<Vec<u64>> {
    let mut table = vec![0u64; r_max as usize + 1];
    let mut stack = vec![start];
    let mut kids = Vec::new();
    let mut local = 0u64;
    while let Some(node) = stack.pop() {
        local += 1;
        if local % 4096 == 0 && nodes.fetch_add(4096, AtomicOrdering::Relaxed) + 4096 > budget {
            return None;
        }
        let inv = node.q * (node.q + node.q_prev);
        let r = scale_of_inverse_length(inv) as i64;
        let top = r.min(r_max as i64);
        for k in (node.parent_scale + 1)..=top {
            table[k as usize] += 1;
        }
        if r >= r_max as i64 {
            continue;
        }
        children(target, node.pos, &mut kids);
        for &(b, pos) in kids.iter().rev() {
            stack.push(Node {
                q: b as u128 * node.q + node.q_prev,
                q_prev: node.q,
                parent_scale: r,
                pos,
            });
        }
    }
    nodes.fetch_add(local % 4096, AtomicOrdering::Relaxed);
    Some(table)
}

fn count_once(target: CoverTarget<'_>, r_max: u32, budget: u64) -> Option<Vec<u64>> {
    let mut first = Vec::new();
    children(target, root_pos(target), &mut first);
    let nodes = AtomicU64::new(0);
    let tables: Vec<Option<Vec<u64>>> = first
        .par_iter()
        .map(|&(b, pos)| {
            let start = Node {
                q: b as u128,
                q_prev: 1,
                parent_scale: -1,
                pos,
            };
            count_subtree(target, start, r_max, &nodes, budget)
        })
        .collect();
    let mut total = vec![0u64; r_max as usize + 1];
    for t in tables {
        for (acc, v) in total.iter_mut().zip(t?) {
            *acc += v;
        }
    }
    Some(total)
}

/// `|𝒞_u(X, r)|` for every `r ≤ r_max`: the number of words `α` with
/// `r(α) ≥ r > r(parent of α)`, `r(α) = ⌊log(1/|I(α)|)⌋`. The empty word
/// never covers, so at `r = 0` every single letter counts.
pub fn covering_counts(target: CoverTarget<'_>, r_max: u32, budget: u64) -> Result<Vec<u64>> {
    if r_max > MAX_COUNT_SCALE {
        return Err(Error::InvalidArgument(format!(
            "covering scale {r_max} exceeds the supported maximum {MAX_COUNT_SCALE}"
        )));
    }
    if let CoverTarget::Automaton(a) = target {
        if a.is_empty() {
            return Ok(vec![0; r_max as usize + 1]);
        }
    }
    if let Some(t) = count_once(target, r_max, budget) {
        return Ok(t);
    }
    let mut r = r_max;
    let partial = loop {
        if r == 0 {
            break Vec::new();
        }
        r -= 1;
        if let Some(t) = count_once(target, r, budget) {
            break t;
        }
    };
    Err(Error::CountBudget {
        budget,
        scale: partial.len() as u32,
        partial,
    })
}

pub fn covering_count(target: CoverTarget<'_>, r: u32, budget: u64) -> Result<u64> {
    Ok(covering_counts(target, r, budget)?[r as usize])
}

/// Slopes of `log count` against scale between `r_max` and every scale in
/// `[r_max/2, r_max)`; their min and max form the bracket.
pub fn tail_slopes(counts: &[u64]) -> Vec<f64> {
    let r_max = counts.len() - 1;
    let top = (counts[r_max].max(1) as f64).ln();
    (r_max / 2..r_max)
        .map(|r| (top - (counts[r].max(1) as f64).ln()) / (r_max - r) as f64)
        .collect()
}

fn bracket_from_counts(counts: Vec<u64>) -> DimensionEstimate {
    let slopes = tail_slopes(&counts);
    let lo = slopes.iter().copied().fold(f64::INFINITY, f64::min).max(0.0);
    let hi = slopes.iter().copied().fold(0.0f64, f64::max);
    DimensionEstimate {
        lo,
        hi,
        method: Method::BoxCount,
        diagnostics: Diagnostics::Counts { counts, slopes },
    }
}

/// Limit-capacity bracket from the covering counts at scales `r_max/2 ..= r_max`.
pub fn boxdim_estimate(target: CoverTarget<'_>, r_max: u32, budget: u64) -> Result<DimensionEstimate> {
    if r_max < 4 {
        return Err(Error::InvalidArgument("box counting needs r_max ≥ 4".into()));
    }
    Ok(bracket_from_counts(covering_counts(target, r_max, budget)?))
}

/// `(lo, hi)` endpoints of every depth-`depth` cylinder of `K(B)`, merged.
fn cylinder_cover(b: &Alphabet, depth: usize, budget: u64) -> Result<Vec<(f64, f64)>> {
    let count = (b.symbols().len() as u128).saturating_pow(depth as u32);
    if count > budget as u128 {
        return Err(Error::Budget {
            what: "sumset cylinders".into(),
            needed: count,
            budget: budget as u128,
        });
    }
    let mut pieces = Vec::with_capacity(count as usize);
    let mut stack: Vec<(u128, u128, u128, u128, usize)> = vec![(0, 1, 1, 0, 0)];
    while let Some((p, q, p_prev, q_prev, d)) = stack.pop() {
        if d == depth {
            let x = p as f64 / q as f64;
            let y = (p + p_prev) as f64 / (q + q_prev) as f64;
            pieces.push((x.min(y), x.max(y)));
            continue;
        }
        for &s in b.symbols() {
            let s = s as u128;
            stack.push((s * p + p_prev, s * q + q_prev, p, q, d + 1));
        }
    }
    Ok(merge_sorted(pieces))
}

fn merge_sorted(mut pieces: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pieces.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
    for (lo, hi) in pieces {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    merged
}

/// Greedy minimal number of closed intervals of length `delta` covering a
/// union of intervals fed in order of left endpoint.
#[derive(Clone, Debug)]
struct GreedyCover {
    delta: f64,
    end: f64,
    count: u64,
}

impl GreedyCover {
    fn new(delta: f64) -> Self {
        GreedyCover {
            delta,
            end: f64::NEG_INFINITY,
            count: 0,
        }
    }

    fn feed(&mut self, lo: f64, hi: f64) {
        if hi <= self.end {
            return;
        }
        let start = if lo > self.end { lo } else { self.end };
        let n = (((hi - start) / self.delta).ceil() as u64).max(1);
        self.count += n;
        self.end = start + n as f64 * self.delta;
    }
}

#[derive(PartialEq)]
struct HeapItem {
    lo: f64,
    hi: f64,
    row: usize,
    col: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .lo
            .total_cmp(&self.lo)
            .then(other.hi.total_cmp(&self.hi))
            .then(other.row.cmp(&self.row))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Box-counting bracket for `K(B1) + K(B2)`: depth-`depth` cylinders of each
/// factor are summed pairwise and the union is covered at scales `e^{-k}`
/// no finer than the widest summed piece.
pub fn sumset_boxdim(b1: &Alphabet, b2: &Alphabet, depth: usize, budget: u64) -> Result<DimensionEstimate> {
    if depth == 0 {
        return Err(Error::InvalidArgument("sumset depth must be at least 1".into()));
    }
    let u1 = cylinder_cover(b1, depth, budget)?;
    let u2 = cylinder_cover(b2, depth, budget)?;
    let pairs = u1.len() as u128 * u2.len() as u128;
    if pairs > budget as u128 {
        return Err(Error::Budget {
            what: "sumset pieces".into(),
            needed: pairs,
            budget: budget as u128,
        });
    }
    let widest = u1.iter().map(|p| p.1 - p.0).fold(0.0, f64::max)
        + u2.iter().map(|p| p.1 - p.0).fold(0.0, f64::max);
    let k_max = ((1.0 / widest).ln().floor() as u32).max(4);
    let mut covers: Vec<GreedyCover> = (0..=k_max).map(|k| GreedyCover::new((-(k as f64)).exp())).collect();
    let mut heap: BinaryHeap<HeapItem> = u1
        .iter()
        .enumerate()
        .map(|(row, a)| HeapItem {
            lo: a.0 + u2[0].0,
            hi: a.1 + u2[0].1,
            row,
            col: 0,
        })
        .collect();
    while let Some(item) = heap.pop() {
        for c in covers.iter_mut() {
            c.feed(item.lo, item.hi);
        }
        let col = item.col + 1;
        if col < u2.len() {
            let a = u1[item.row];
            heap.push(HeapItem {
                lo: a.0 + u2[col].0,
                hi: a.1 + u2[col].1,
                row: item.row,
                col,
            });
        }
    }
    Ok(bracket_from_counts(covers.into_iter().map(|c| c.count).collect()))
}

/// Planar dimension of a finite-type set from per-subhorseshoe unstable and
/// stable estimates: the max of `2·D_u(Λ̃_i)` over subhorseshoes and of
/// `D_s(Λ̃_i) + D_u(Λ̃_j)` over transient pairs `(i, j)`, whose orbits leave
/// `Λ̃_i` in the past and accumulate on `Λ̃_j` in the future.
pub fn dim_finite_type(
    d: &ComponentDecomposition,
    unstable: &[DimensionEstimate],
    stable: &[DimensionEstimate],
) -> Result<DimensionEstimate> {
    let k = d.subhorseshoes.len();
    if unstable.len() < k {
        return Err(Error::MissingEstimate(unstable.len()));
    }
    if stable.len() < k {
        return Err(Error::MissingEstimate(stable.len()));
    }
    let mut lo = 0.0f64;
    let mut hi = 0.0f64;
    for u in &unstable[..k] {
        lo = lo.max(2.0 * u.lo);
        hi = hi.max(2.0 * u.hi);
    }
    for &(i, j) in &d.transient_pairs {
        lo = lo.max(stable[i].lo + unstable[j].lo);
        hi = hi.max(stable[i].hi + unstable[j].hi);
    }
    Ok(DimensionEstimate {
        lo,
        hi,
        method: Method::FiniteType,
        diagnostics: Diagnostics::None,
    })
}

/// Threshold table for external checks: `⌈e^r⌉` for `r ≤ MAX_SCALE`.
pub fn scale_thresholds() -> &'static [u128] {
    exp_thresholds()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::{build_full_shift, scc_decompose, DEFAULT_STATE_BUDGET};

    #[test]
    fn ratio_range_covers_samples() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        for b in 1..=6 {
            for (lo, hi) in [(r(0, 1), r(1, 1)), (r(1, 5), r(3, 5)), (r(1, 3), r(1, 2)), (r(2, 3), r(3, 4))] {
                let (min, max) = ratio_range(&RatInterval::new(lo.clone(), hi.clone()), b);
                assert!(min <= max);
                for k in 0..=1000 {
                    let rho = &lo + (&hi - &lo) * r(k, 1000);
                    let v = ratio(&rho, b);
                    assert!(min * (1.0 - 1e-15) <= v && v <= max * (1.0 + 1e-15), "b={b} rho={rho}");
                }
            }
        }
    }

    #[test]
    fn self_similar_pressure() {
        for (k, lambda) in [(2usize, 0.25f64), (3, 1.0 / 3.0), (2, 0.5), (5, 0.1)] {
            let edges: Vec<_> = (0..k).map(|_| (0, 0, lambda)).collect();
            let w = WeightedAutomaton::synthetic(1, &edges).unwrap();
            let est = pressure_dim(&w, 1e-10).unwrap();
            let exact = (k as f64).ln() / (1.0 / lambda).ln();
            assert!((est.lo - exact).abs() < 1e-8 && (est.hi - exact).abs() < 1e-8, "{k} {lambda}: {est}");
        }
        assert!(matches!(
            WeightedAutomaton::synthetic(1, &[(0, 0, 0.0)]),
            Err(Error::InvalidWeight(_))
        ));
    }

    #[test]
    fn pressure_rejects_disconnected_and_zeroes_cycles() {
        let w = WeightedAutomaton::synthetic(2, &[(0, 0, 0.3), (0, 1, 0.3), (1, 1, 0.3)]).unwrap();
        assert!(matches!(pressure_dim(&w, 1e-6), Err(Error::NotStronglyConnected)));
        let cycle = WeightedAutomaton::synthetic(2, &[(0, 1, 0.3), (1, 0, 0.2)]).unwrap();
        assert_eq!(pressure_dim(&cycle, 1e-6).unwrap(), DimensionEstimate::exact_zero());
    }

    #[test]
    fn small_covering_counts() {
        let ones = Alphabet::new(vec![1]).unwrap();
        let counts = covering_counts(CoverTarget::Alphabet(&ones), 12, DEFAULT_COUNT_BUDGET).unwrap();
        assert!(counts.iter().all(|&c| c == 1));
        let two = Alphabet::full(2).unwrap();
        assert_eq!(covering_count(CoverTarget::Alphabet(&two), 0, DEFAULT_COUNT_BUDGET).unwrap(), 2);
        assert!(matches!(
            covering_counts(CoverTarget::Alphabet(&two), 20, 1000),
            Err(Error::CountBudget { .. })
        ));
    }

    #[test]
    fn automaton_counts_match_alphabet_counts_for_full_shift() {
        let two = Alphabet::full(2).unwrap();
        let a = build_full_shift(2, 2, DEFAULT_STATE_BUDGET).unwrap();
        let x = covering_counts(CoverTarget::Alphabet(&two), 14, DEFAULT_COUNT_BUDGET).unwrap();
        let y = covering_counts(CoverTarget::Automaton(&a), 14, DEFAULT_COUNT_BUDGET).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn finite_type_combination() {
        let a = SubshiftAutomaton::from_states(
            2,
            1,
            vec![vec![1, 1, 1], vec![1, 1, 2], vec![1, 2, 2], vec![2, 2, 2]],
        )
        .unwrap();
        let d = scc_decompose(&a);
        let zero = DimensionEstimate::exact_zero();
        let est = dim_finite_type(&d, &[zero.clone(), zero.clone()], &[zero.clone(), zero.clone()]).unwrap();
        assert_eq!((est.lo, est.hi), (0.0, 0.0));
        assert!(matches!(
            dim_finite_type(&d, &[zero.clone()], &[zero.clone(), zero]),
            Err(Error::MissingEstimate(1))
        ));
    }

    #[test]
    fn c2_pressure_brackets_reference() {
        let a = build_full_shift(2, 4, DEFAULT_STATE_BUDGET).unwrap();
        let est = automaton_pressure_dim(&a, 1e-9).unwrap();
        assert!(est.contains(0.531280506), "{est}");
        assert!(est.width() < 1e-2, "{est}");
    }
}
