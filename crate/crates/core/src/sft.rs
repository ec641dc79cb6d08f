//! Window automata over `{1..N}`: states are words of length `2ℓ+1`, an edge
//! `u → v` exists when `v` continues `u` by one symbol. Pruning by certified
//! `f`-ranges approximates sublevel sets from outside and inside.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cf::{window_f_range, Symbol, Word};
use crate::interval::RatInterval;
use crate::{Error, Result};

/// Default cap on the number of states any construction may materialize.
pub const DEFAULT_STATE_BUDGET: u128 = 4_000_000;

/// Threshold for sublevel pruning; `Unbounded` keeps every state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    Finite(BigRational),
    Unbounded,
}

impl Level {
    pub fn finite(t: BigRational) -> Self {
        Level::Finite(t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PruneMode {
    /// Keep states whose `f`-range reaches down to the level (a superset).
    Outer,
    /// Keep states whose whole `f`-range lies below the level (a subset).
    Inner,
}

impl std::str::FromStr for PruneMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "outer" => Ok(PruneMode::Outer),
            "inner" => Ok(PruneMode::Inner),
            _ => Err(Error::InvalidArgument(format!("unknown prune mode {s:?}"))),
        }
    }
}

fn keeps(range: &RatInterval, level: &Level, mode: PruneMode) -> bool {
    match level {
        Level::Unbounded => true,
        Level::Finite(t) => match mode {
            PruneMode::Outer => &range.lo <= t,
            PruneMode::Inner => &range.hi <= t,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubshiftAutomaton {
    n: Symbol,
    window: usize,
    states: Vec<Word>,
    succ: Vec<Vec<usize>>,
    f_ranges: Vec<RatInterval>,
}

impl SubshiftAutomaton {
    /// Induced automaton on an arbitrary set of words of length `2·window+1`.
    /// Words are sorted and deduplicated; every overlap edge among them is present.
    pub fn from_states(n: Symbol, window: usize, words: Vec<Vec<Symbol>>) -> Result<Self> {
        let len = 2 * window + 1;
        let mut states = Vec::with_capacity(words.len());
        for w in words {
            if w.len() != len {
                return Err(Error::InvalidWord(format!(
                    "state {w:?} does not have length {len}"
                )));
            }
            states.push(Word::with_bound(w, n)?);
        }
        states.sort();
        states.dedup();
        let f_ranges = states
            .par_iter()
            .map(|w| window_f_range(w.symbols(), window))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(n, window, states, f_ranges))
    }

    fn assemble(n: Symbol, window: usize, states: Vec<Word>, f_ranges: Vec<RatInterval>) -> Self {
        let succ = states
            .par_iter()
            .map(|u| {
                let mut key = u.symbols()[1..].to_vec();
                key.push(0);
                let mut out = Vec::new();
                for b in 1..=n {
                    *key.last_mut().expect("non-empty") = b;
                    if let Ok(j) = states.binary_search_by(|w| w.symbols().cmp(&key[..])) {
                        out.push(j);
                    }
                }
                out
            })
            .collect();
        SubshiftAutomaton {
            n,
            window,
            states,
            succ,
            f_ranges,
        }
    }

    pub fn alphabet_bound(&self) -> Symbol {
        self.n
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn word_len(&self) -> usize {
        2 * self.window + 1
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Word] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &Word {
        &self.states[i]
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.succ[i]
    }

    pub fn f_range(&self, i: usize) -> &RatInterval {
        &self.f_ranges[i]
    }

    pub fn f_ranges(&self) -> &[RatInterval] {
        &self.f_ranges
    }

    pub fn transition_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// All transitions `(i, j)` in lexicographic order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(i, out)| out.iter().map(move |&j| (i, j)))
    }

    pub fn index_of(&self, word: &[Symbol]) -> Option<usize> {
        self.states.binary_search_by(|w| w.symbols().cmp(word)).ok()
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (i, j) in self.transitions() {
            pred[j].push(i);
        }
        pred
    }

    /// Widest certified `f`-range among the states, the window error.
    pub fn max_range_width(&self) -> BigRational {
        self.f_ranges
            .iter()
            .map(RatInterval::width)
            .max()
            .unwrap_or_else(|| BigRational::from_integer(BigInt::from(0)))
    }

    /// Induced sub-automaton on a subset of state indices (no cleanup).
    pub fn restrict(&self, keep: &[usize]) -> SubshiftAutomaton {
        let mut mask = vec![false; self.len()];
        for &i in keep {
            mask[i] = true;
        }
        self.retain_mask(&mask)
    }

    fn retain_mask(&self, mask: &[bool]) -> SubshiftAutomaton {
        let mut new_index = vec![usize::MAX; self.len()];
        let mut states = Vec::new();
        let mut f_ranges = Vec::new();
        for (i, &keep) in mask.iter().enumerate() {
            if keep {
                new_index[i] = states.len();
                states.push(self.states[i].clone());
                f_ranges.push(self.f_ranges[i].clone());
            }
        }
        let succ = (0..self.len())
            .filter(|&i| mask[i])
            .map(|i| {
                self.succ[i]
                    .iter()
                    .filter(|&&j| mask[j])
                    .map(|&j| new_index[j])
                    .collect()
            })
            .collect();
        SubshiftAutomaton {
            n: self.n,
            window: self.window,
            states,
            succ,
            f_ranges,
        }
    }

    /// Removes, repeatedly, states without an incoming or outgoing edge.
    pub fn cleanup(&self) -> SubshiftAutomaton {
        let mask = vec![true; self.len()];
        self.retain_mask(&self.recurrent_mask(mask))
    }

    fn recurrent_mask(&self, mut alive: Vec<bool>) -> Vec<bool> {
        let pred = self.predecessors();
        let mut indeg = vec![0usize; self.len()];
        let mut outdeg = vec![0usize; self.len()];
        for (i, j) in self.transitions() {
            if alive[i] && alive[j] {
                outdeg[i] += 1;
                indeg[j] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..self.len())
            .filter(|&i| alive[i] && (indeg[i] == 0 || outdeg[i] == 0))
            .collect();
        while let Some(i) = queue.pop_front() {
            if !alive[i] {
                continue;
            }
            alive[i] = false;
            for &j in &self.succ[i] {
                if alive[j] {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        queue.push_back(j);
                    }
                }
            }
            for &j in &pred[i] {
                if alive[j] {
                    outdeg[j] -= 1;
                    if outdeg[j] == 0 {
                        queue.push_back(j);
                    }
                }
            }
        }
        alive
    }

    /// Keeps the states admitted by `level` in `mode`, then removes every state
    /// that cannot be continued in both directions.
    pub fn prune_sublevel(&self, level: &Level, mode: PruneMode) -> SubshiftAutomaton {
        let mask = self.f_ranges.iter().map(|r| keeps(r, level, mode)).collect();
        self.retain_mask(&self.recurrent_mask(mask))
    }

    /// Reverses every state word and every transition.
    pub fn transpose(&self) -> SubshiftAutomaton {
        let words = self
            .states
            .iter()
            .map(|w| w.reversed().into_inner())
            .collect();
        Self::from_states(self.n, self.window, words).expect("reversed states are valid")
    }

    pub fn to_json(&self) -> AutomatonJson {
        AutomatonJson {
            n: self.n,
            window: self.window,
            states: self.states.iter().map(|w| w.symbols().to_vec()).collect(),
            transitions: self.transitions().collect(),
            f_ranges: self
                .f_ranges
                .iter()
                .map(|r| {
                    [
                        r.lo.numer().to_string(),
                        r.lo.denom().to_string(),
                        r.hi.numer().to_string(),
                        r.hi.denom().to_string(),
                    ]
                })
                .collect(),
        }
    }

    /// Rebuilds an automaton from its JSON form, checking every invariant.
    pub fn from_json(j: &AutomatonJson) -> Result<Self> {
        let rebuilt = Self::from_states(j.n, j.window, j.states.clone())?;
        let parse = |s: &String| {
            s.parse::<BigInt>()
                .map_err(|_| Error::InvalidArgument(format!("bad integer {s:?} in automaton JSON")))
        };
        let mut f_ranges = Vec::with_capacity(j.f_ranges.len());
        for r in &j.f_ranges {
            let lo = BigRational::new(parse(&r[0])?, parse(&r[1])?);
            let hi = BigRational::new(parse(&r[2])?, parse(&r[3])?);
            f_ranges.push(RatInterval::spanning(lo, hi));
        }
        let transitions: Vec<(usize, usize)> = rebuilt.transitions().collect();
        if rebuilt.states.len() != j.states.len()
            || f_ranges != rebuilt.f_ranges
            || transitions != j.transitions
        {
            return Err(Error::InvalidArgument(
                "automaton JSON is inconsistent with its states".into(),
            ));
        }
        Ok(rebuilt)
    }
}

/// Serialized automaton: `{N, window, states, transitions, fRanges}` with
/// rational endpoints as decimal numerator/denominator strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonJson {
    #[serde(rename = "N")]
    pub n: Symbol,
    pub window: usize,
    pub states: Vec<Vec<Symbol>>,
    pub transitions: Vec<(usize, usize)>,
    #[serde(rename = "fRanges")]
    pub f_ranges: Vec<[String; 4]>,
}

fn check_budget(what: &str, needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::Budget {
            what: what.into(),
            needed,
            budget,
        })
    } else {
        Ok(())
    }
}

fn check_shape(n: Symbol, window: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("alphabet bound N must be at least 1".into()));
    }
    if window == 0 {
        return Err(Error::InvalidArgument("window must be at least 1".into()));
    }
    Ok(())
}

/// Every word of length `2·window+1` over `{1..N}` with all overlap transitions.
pub fn build_full_shift(n: Symbol, window: usize, budget: u128) -> Result<SubshiftAutomaton> {
    check_shape(n, window)?;
    full_shift_over(&(1..=n).collect::<Vec<_>>(), window, budget)
}

/// Full shift on an arbitrary finite alphabet of positive symbols.
pub fn full_shift_over(symbols: &[Symbol], window: usize, budget: u128) -> Result<SubshiftAutomaton> {
    let n = symbols.iter().copied().max().unwrap_or(0);
    check_shape(n, window)?;
    let mut symbols = symbols.to_vec();
    symbols.sort_unstable();
    symbols.dedup();
    let len = 2 * window + 1;
    let count = (symbols.len() as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    check_budget("full shift states", count, budget)?;
    let mut words = Vec::with_capacity(count as usize);
    let mut digits = vec![0usize; len];
    loop {
        words.push(digits.iter().map(|&d| symbols[d]).collect());
        let mut k = len;
        loop {
            if k == 0 {
                return SubshiftAutomaton::from_states(n, window, words);
            }
            k -= 1;
            if digits[k] + 1 < symbols.len() {
                digits[k] += 1;
                break;
            }
            digits[k] = 0;
        }
    }
}

/// Equals `build_full_shift(n, window).prune_sublevel(level, mode)` but grows
/// the window one step at a time from the outer survivors, so only words whose
/// every central sub-window survives are ever materialized.
pub fn sublevel_automaton(
    n: Symbol,
    window: usize,
    level: &Level,
    mode: PruneMode,
    budget: u128,
) -> Result<SubshiftAutomaton> {
    check_shape(n, window)?;
    if matches!(level, Level::Unbounded) {
        return build_full_shift(n, window, budget);
    }
    let mut current = if window == 1 {
        return Ok(build_full_shift(n, 1, budget)?.prune_sublevel(level, mode));
    } else {
        build_full_shift(n, 1, budget)?.prune_sublevel(level, PruneMode::Outer)
    };
    for w in 2..=window {
        let step_mode = if w == window { mode } else { PruneMode::Outer };
        let needed = current.len() as u128 * (n as u128) * (n as u128);
        check_budget("sublevel candidates", needed, budget)?;
        let mut candidates = Vec::with_capacity(needed as usize);
        for a in 1..=n {
            for s in current.states() {
                for b in 1..=n {
                    let mut word = Vec::with_capacity(2 * w + 1);
                    word.push(a);
                    word.extend_from_slice(s.symbols());
                    word.push(b);
                    candidates.push(word);
                }
            }
        }
        let kept: Vec<(Word, RatInterval)> = candidates
            .into_par_iter()
            .filter_map(|word| {
                let range = window_f_range(&word, w).expect("center is in range");
                keeps(&range, level, step_mode).then(|| (Word::new(word).expect("valid"), range))
            })
            .collect();
        let (states, f_ranges): (Vec<Word>, Vec<RatInterval>) = kept.into_iter().unzip();
        current = SubshiftAutomaton::assemble(n, w, states, f_ranges).cleanup();
    }
    Ok(current)
}

/// Partition of an automaton into subhorseshoes (strongly connected components
/// carrying a cycle) and the transient states joining them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDecomposition {
    /// State indices of each subhorseshoe, sorted; components ordered by first state.
    pub subhorseshoes: Vec<Vec<usize>>,
    /// `(i, j)` with `i ≠ j` when subhorseshoe `j` is reachable from subhorseshoe `i`.
    pub transient_pairs: Vec<(usize, usize)>,
    /// States outside every subhorseshoe lying on a path between two of them.
    pub transient_states: Vec<usize>,
    /// States on no cycle and on no path between subhorseshoes.
    pub orphan_states: Vec<usize>,
    /// Subhorseshoe index of each state, if any.
    pub component_of: Vec<Option<usize>>,
}

/// Strongly connected components of the automaton's graph.
pub fn strongly_connected_components(a: &SubshiftAutomaton) -> Vec<Vec<usize>> {
    tarjan(&a.succ)
}

/// Iterative Tarjan over adjacency lists; components sorted, in completion order.
pub fn tarjan(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0usize;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut k)) = call.last_mut() {
            if let Some(&w) = succ[v].get(*k) {
                *k += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

fn has_cycle(a: &SubshiftAutomaton, comp: &[usize]) -> bool {
    comp.len() > 1 || a.successors(comp[0]).contains(&comp[0])
}

fn reachable_from(a: &SubshiftAutomaton, sources: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; a.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in sources {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in a.successors(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

pub fn scc_decompose(a: &SubshiftAutomaton) -> ComponentDecomposition {
    let mut subhorseshoes: Vec<Vec<usize>> = strongly_connected_components(a)
        .into_iter()
        .filter(|c| has_cycle(a, c))
        .collect();
    subhorseshoes.sort();
    let mut component_of = vec![None; a.len()];
    for (k, comp) in subhorseshoes.iter().enumerate() {
        for &s in comp {
            component_of[s] = Some(k);
        }
    }
    let forward: Vec<Vec<bool>> = subhorseshoes
        .par_iter()
        .map(|comp| reachable_from(a, comp))
        .collect();
    let mut transient_pairs = Vec::new();
    for (i, reach) in forward.iter().enumerate() {
        for (j, comp) in subhorseshoes.iter().enumerate() {
            if i != j && reach[comp[0]] {
                transient_pairs.push((i, j));
            }
        }
    }
    let all_cyclic: Vec<usize> = subhorseshoes.iter().flatten().copied().collect();
    let from_cycles = reachable_from(a, &all_cyclic);
    let to_cycles = reachable_from(&a_reversed_graph(a), &all_cyclic);
    let mut transient_states = Vec::new();
    let mut orphan_states = Vec::new();
    for s in 0..a.len() {
        if component_of[s].is_some() {
            continue;
        }
        if from_cycles[s] && to_cycles[s] {
            transient_states.push(s);
        } else {
            orphan_states.push(s);
        }
    }
    ComponentDecomposition {
        subhorseshoes,
        transient_pairs,
        transient_states,
        orphan_states,
        component_of,
    }
}

/// Same states with every edge reversed; only the graph is meaningful.
fn a_reversed_graph(a: &SubshiftAutomaton) -> SubshiftAutomaton {
    SubshiftAutomaton {
        n: a.n,
        window: a.window,
        states: a.states.clone(),
        succ: a.predecessors(),
        f_ranges: a.f_ranges.clone(),
    }
}

/// True when every state of `comp` has exactly one successor inside it.
pub fn is_single_cycle(a: &SubshiftAutomaton, comp: &[usize]) -> bool {
    comp.iter().all(|&s| {
        a.successors(s)
            .iter()
            .filter(|j| comp.binary_search(j).is_ok())
            .count()
            == 1
    })
}

/// A shortest directed path from any state of `from` to any state of `to`.
pub fn reach_witness(a: &SubshiftAutomaton, from: &[usize], to: &[usize]) -> Option<Vec<usize>> {
    let mut target = vec![false; a.len()];
    for &t in to {
        target[t] = true;
    }
    let mut parent = vec![usize::MAX; a.len()];
    let mut seen = vec![false; a.len()];
    let mut queue = VecDeque::new();
    let mut sources = from.to_vec();
    sources.sort_unstable();
    for s in sources {
        if target[s] {
            return Some(vec![s]);
        }
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in a.successors(v) {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            parent[w] = v;
            if target[w] {
                let mut path = vec![w];
                let mut cur = w;
                while parent[cur] != usize::MAX {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}

/// The symbol sequence read along a state path: the first state's word followed
/// by the last symbol of every later state.
pub fn path_word(a: &SubshiftAutomaton, path: &[usize]) -> Vec<Symbol> {
    let mut out = a.state(path[0]).symbols().to_vec();
    for &s in &path[1..] {
        out.push(*a.state(s).symbols().last().expect("non-empty"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::parse_rational;

    fn level(s: &str) -> Level {
        Level::Finite(parse_rational(s).unwrap())
    }

    fn chain() -> SubshiftAutomaton {
        SubshiftAutomaton::from_states(
            2,
            1,
            vec![vec![1, 1, 1], vec![1, 1, 2], vec![1, 2, 2], vec![2, 2, 2]],
        )
        .unwrap()
    }

    #[test]
    fn full_shift_counts() {
        let a = build_full_shift(1, 1, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a.transition_count(), 1);
        assert!(a.f_range(0).lo_f64() <= 5f64.sqrt() && 5f64.sqrt() <= a.f_range(0).hi_f64());
        let a = build_full_shift(2, 1, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!((a.len(), a.transition_count()), (8, 16));
        let a = build_full_shift(2, 2, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!((a.len(), a.transition_count()), (32, 64));
        assert!(matches!(build_full_shift(4, 8, 1000), Err(Error::Budget { .. })));
    }

    #[test]
    fn pruning_examples() {
        let full = build_full_shift(2, 1, DEFAULT_STATE_BUDGET).unwrap();
        // Brute-force oracle: only (2,1,2) has fRange.max ≤ 2, and it has no successor below 2.
        let two = parse_rational("2").unwrap();
        let low: Vec<usize> = (0..full.len()).filter(|&i| full.f_range(i).hi <= two).collect();
        assert_eq!(low, vec![full.index_of(&[2, 1, 2]).unwrap()]);
        assert!(full.prune_sublevel(&level("2"), PruneMode::Inner).is_empty());
        assert_eq!(full.prune_sublevel(&Level::Unbounded, PruneMode::Inner), full);

        let w3 = build_full_shift(2, 3, DEFAULT_STATE_BUDGET).unwrap();
        let pruned = w3.prune_sublevel(&level("3.1"), PruneMode::Outer);
        let d = scc_decompose(&pruned);
        for fixed in [[1u8; 7], [2u8; 7]] {
            let i = pruned.index_of(&fixed).expect("fixed word survives");
            assert!(d.component_of[i].is_some());
        }
    }

    #[test]
    fn chain_decomposition_transpose_and_reach() {
        let a = chain();
        let d = scc_decompose(&a);
        assert_eq!(d.subhorseshoes, vec![vec![0], vec![3]]);
        assert_eq!(d.transient_pairs, vec![(0, 1)]);
        assert_eq!(d.transient_states, vec![1, 2]);
        assert!(d.orphan_states.is_empty());
        assert_eq!(reach_witness(&a, &[0], &[3]), Some(vec![0, 1, 2, 3]));
        assert_eq!(reach_witness(&a, &[3], &[0]), None);
        assert_eq!(reach_witness(&a, &[0], &[0]), Some(vec![0]));
        assert_eq!(path_word(&a, &[0, 1, 2, 3]), vec![1, 1, 1, 2, 2, 2]);

        let t = a.transpose();
        let dt = scc_decompose(&t);
        // Reversed words: 111, 211, 221, 222; the chain now runs from 222 to 111.
        let one = t.index_of(&[1, 1, 1]).unwrap();
        let two = t.index_of(&[2, 2, 2]).unwrap();
        assert!(reach_witness(&t, &[two], &[one]).is_some());
        assert!(reach_witness(&t, &[one], &[two]).is_none());
        assert_eq!(dt.transient_pairs.len(), 1);
        assert_eq!(t.transpose(), a);
    }

    #[test]
    fn full_shift_is_one_subhorseshoe() {
        let a = build_full_shift(2, 2, DEFAULT_STATE_BUDGET).unwrap();
        let d = scc_decompose(&a);
        assert_eq!(d.subhorseshoes.len(), 1);
        assert_eq!(d.subhorseshoes[0].len(), 32);
        assert!(d.transient_pairs.is_empty());
        assert_eq!(a.transpose(), a);
    }

    #[test]
    fn incremental_matches_direct_prune() {
        for (n, window, t) in [(2u8, 3usize, "3.1"), (3, 3, "3.3"), (4, 2, "3.4"), (2, 2, "2.9")] {
            let full = build_full_shift(n, window, DEFAULT_STATE_BUDGET).unwrap();
            for mode in [PruneMode::Outer, PruneMode::Inner] {
                let direct = full.prune_sublevel(&level(t), mode);
                let grown = sublevel_automaton(n, window, &level(t), mode, DEFAULT_STATE_BUDGET).unwrap();
                assert_eq!(direct, grown, "n={n} window={window} t={t} {mode:?}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let a = build_full_shift(2, 2, DEFAULT_STATE_BUDGET)
            .unwrap()
            .prune_sublevel(&level("3.2"), PruneMode::Outer);
        let j = a.to_json();
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.starts_with("{\"N\":2,\"window\":2,"));
        let back: AutomatonJson = serde_json::from_str(&text).unwrap();
        assert_eq!(SubshiftAutomaton::from_json(&back).unwrap(), a);
    }
}
