//! Sublevel dimension curves and the objects built on them: the two-sided
//! bracket for `D(t)`, its left inverse `η⁻`, connection of subhorseshoes,
//! increasing families, the `Θ` concatenation and the point classifier.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cf::{Symbol, Word};
use crate::dimension::{
    automaton_pressure_dim, boxdim_estimate, CoverTarget, DimensionEstimate, DEFAULT_COUNT_BUDGET,
};
use crate::interval::{parse_rational, RatInterval};
use crate::sft::{
    is_single_cycle, path_word, reach_witness, scc_decompose, sublevel_automaton, build_full_shift,
    ComponentDecomposition, Level, PruneMode, SubshiftAutomaton, DEFAULT_STATE_BUDGET,
};
use crate::spectrum::{max_f_over_component, periodic_markov_enclosure};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DimMethod {
    Pressure,
    #[value(name = "boxcount")]
    BoxCount,
}

/// Everything that fixes the accuracy and cost of a sublevel computation.
#[derive(Clone, Debug, PartialEq)]
pub struct Resolution {
    pub n: Symbol,
    pub window: usize,
    pub r_max: u32,
    pub tol: f64,
    pub method: DimMethod,
    pub state_budget: u128,
    pub count_budget: u64,
}

impl Resolution {
    pub fn new(n: Symbol, window: usize) -> Self {
        Resolution {
            n,
            window,
            r_max: 25,
            tol: 1e-9,
            method: DimMethod::Pressure,
            state_budget: DEFAULT_STATE_BUDGET,
            count_budget: DEFAULT_COUNT_BUDGET,
        }
    }

    pub fn with_r_max(mut self, r_max: u32) -> Self {
        self.r_max = r_max;
        self
    }

    pub fn with_method(mut self, method: DimMethod) -> Self {
        self.method = method;
        self
    }

    pub fn automaton(&self, t: &BigRational, mode: PruneMode) -> Result<SubshiftAutomaton> {
        sublevel_automaton(self.n, self.window, &Level::Finite(t.clone()), mode, self.state_budget)
    }
}

pub fn words_of(a: &SubshiftAutomaton, comp: &[usize]) -> Vec<Word> {
    comp.iter().map(|&i| a.state(i).clone()).collect()
}

pub fn indices_of(a: &SubshiftAutomaton, words: &[Word]) -> Result<Vec<usize>> {
    let mut out = words
        .iter()
        .map(|w| a.index_of(w.symbols()).ok_or_else(|| Error::UnknownState(w.to_string())))
        .collect::<Result<Vec<_>>>()?;
    out.sort_unstable();
    Ok(out)
}

/// Unstable dimension of one subhorseshoe of `a`.
pub fn component_dimension(a: &SubshiftAutomaton, comp: &[usize], res: &Resolution) -> Result<DimensionEstimate> {
    if is_single_cycle(a, comp) {
        return Ok(DimensionEstimate::exact_zero());
    }
    let sub = a.restrict(comp);
    match res.method {
        DimMethod::Pressure => automaton_pressure_dim(&sub, res.tol),
        DimMethod::BoxCount => boxdim_estimate(CoverTarget::Automaton(&sub), res.r_max, res.count_budget),
    }
}

/// A pruned automaton with its decomposition and per-subhorseshoe dimensions.
#[derive(Clone, Debug)]
pub struct Sublevel {
    pub automaton: SubshiftAutomaton,
    pub decomposition: ComponentDecomposition,
    pub dims: Vec<DimensionEstimate>,
}

impl Sublevel {
    pub fn compute(t: &BigRational, mode: PruneMode, res: &Resolution) -> Result<Self> {
        Self::from_automaton(res.automaton(t, mode)?, res)
    }

    pub fn from_automaton(automaton: SubshiftAutomaton, res: &Resolution) -> Result<Self> {
        let decomposition = scc_decompose(&automaton);
        let dims = decomposition
            .subhorseshoes
            .par_iter()
            .map(|c| component_dimension(&automaton, c, res))
            .collect::<Result<Vec<_>>>()?;
        Ok(Sublevel {
            automaton,
            decomposition,
            dims,
        })
    }

    /// Index of the subhorseshoe with the largest upper dimension bound.
    pub fn best(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, d) in self.dims.iter().enumerate() {
            if best.is_none_or(|b| d.hi > self.dims[b].hi) {
                best = Some(i);
            }
        }
        best
    }

    pub fn max_hi(&self) -> f64 {
        self.dims.iter().map(|d| d.hi).fold(0.0, f64::max)
    }

    pub fn max_lo(&self) -> f64 {
        self.dims.iter().map(|d| d.lo).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DCurvePoint {
    pub t: BigRational,
    pub d_lo: f64,
    pub d_hi: f64,
    pub window: usize,
    pub r_max: u32,
}

impl DCurvePoint {
    /// `L(t) = min{1, 2D(t)}` bracket.
    pub fn l_bracket(&self) -> (f64, f64) {
        ((2.0 * self.d_lo).min(1.0), (2.0 * self.d_hi).min(1.0))
    }
}

/// Upper bound for `D(t)` from the outer prune: the largest subhorseshoe.
pub fn d_hi_at(t: &BigRational, res: &Resolution) -> Result<f64> {
    Ok(Sublevel::compute(t, PruneMode::Outer, res)?.max_hi())
}

/// Lower bound for `D(t)` from the inner prune: its best subhorseshoe.
pub fn d_lo_at(t: &BigRational, res: &Resolution) -> Result<f64> {
    Ok(Sublevel::compute(t, PruneMode::Inner, res)?.max_lo())
}

pub fn d_of_t(t: &BigRational, res: &Resolution) -> Result<DCurvePoint> {
    let (d_lo, d_hi) = rayon::join(|| d_lo_at(t, res), || d_hi_at(t, res));
    Ok(DCurvePoint {
        t: t.clone(),
        d_lo: d_lo?,
        d_hi: d_hi?,
        window: res.window,
        r_max: res.r_max,
    })
}

pub fn d_curve(grid: &[BigRational], res: &Resolution) -> Result<Vec<DCurvePoint>> {
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("grid must be sorted".into()));
    }
    grid.par_iter().map(|t| d_of_t(t, res)).collect()
}

/// Parses `a:b:step` into the exact grid `a, a+step, …` up to `b`.
pub fn parse_grid(spec: &str) -> Result<Vec<BigRational>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, step] = parts[..] else {
        return Err(Error::InvalidArgument(format!("grid {spec:?} is not of the form a:b:step")));
    };
    let (a, b, step) = (parse_rational(a)?, parse_rational(b)?, parse_rational(step)?);
    if !step.is_positive() || b < a {
        return Err(Error::InvalidArgument(format!("grid {spec:?} is empty or has a non-positive step")));
    }
    let count = ((&b - &a) / &step).floor().to_integer().to_usize().unwrap_or(usize::MAX);
    if count > 100_000 {
        return Err(Error::InvalidArgument(format!("grid {spec:?} has too many points")));
    }
    Ok((0..=count).map(|k| &a + &step * BigInt::from(k)).collect())
}

/// Dimension bracket of the full shift on `{1..N}`, from a small window.
pub fn full_shift_dimension(res: &Resolution) -> Result<DimensionEstimate> {
    let mut window = 1;
    while (res.n as u128).pow(2 * (window as u32 + 1) + 1) <= 5000 && window < res.window {
        window += 1;
    }
    let a = build_full_shift(res.n, window, res.state_budget)?;
    automaton_pressure_dim(&a, res.tol)
}

/// Result of the monotone search for `η⁻ = min{t : D(t) = η}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaMinus {
    pub eta: f64,
    /// `dHi(left) < η ≤ dHi(right)`, `right − left = step`.
    pub left: BigRational,
    pub right: BigRational,
    pub d_hi_left: f64,
    pub d_hi_right: f64,
    /// Smallest grid point with `dLo ≥ η`, if found; `η⁻ ∈ (left, certified_right]`.
    pub certified_right: Option<BigRational>,
    pub indeterminate: bool,
    /// `η = 0`: the bracket locates where `dHi` first becomes positive.
    pub degenerate: bool,
    pub step: BigRational,
}

const GRID_ORIGIN: i64 = 2;
const DLO_GALLOP_LIMIT: u32 = 6;

fn dyadic_step(tol: &BigRational) -> Result<BigRational> {
    if !tol.is_positive() {
        return Err(Error::NonPositiveTolerance);
    }
    let mut h = BigRational::one();
    while &h > tol {
        h /= BigInt::from(2);
    }
    while &(&h * BigInt::from(2)) <= tol {
        h *= BigInt::from(2);
    }
    Ok(h)
}

/// Memoized monotone predicate over the grid `origin + j·h`.
struct GridSearch<'a, F: Fn(&BigRational) -> Result<f64>> {
    h: BigRational,
    origin: BigRational,
    eval: F,
    values: BTreeMap<u64, f64>,
    _res: &'a Resolution,
}

impl<F: Fn(&BigRational) -> Result<f64>> GridSearch<'_, F> {
    fn t(&self, j: u64) -> BigRational {
        &self.origin + &self.h * BigInt::from(j)
    }

    fn value(&mut self, j: u64) -> Result<f64> {
        if let Some(&v) = self.values.get(&j) {
            return Ok(v);
        }
        let v = (self.eval)(&self.t(j))?;
        self.values.insert(j, v);
        Ok(v)
    }

    /// Smallest `j` in `(lo, hi]` with `pred`, given `!pred(lo)` and `pred(hi)`.
    fn bisect(&mut self, mut lo: u64, mut hi: u64, pred: impl Fn(f64) -> bool) -> Result<u64> {
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if pred(self.value(mid)?) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

pub fn eta_minus(eta: f64, tol_t: &BigRational, res: &Resolution) -> Result<EtaMinus> {
    let full = full_shift_dimension(res)?;
    if !(eta >= 0.0) || eta > full.hi {
        return Err(Error::EtaOutOfRange { eta, max: full.hi });
    }
    let degenerate = eta == 0.0;
    let reached = move |d: f64| if degenerate { d > 0.0 } else { d >= eta };
    let h = dyadic_step(tol_t)?;
    let origin = BigRational::from_integer(GRID_ORIGIN.into());
    let three_index = ((BigRational::from_integer(3.into()) - &origin) / &h)
        .ceil()
        .to_integer()
        .to_u64()
        .expect("small grid");
    let t_cap = BigRational::from_integer((res.n as i64 + 2).into());

    let mut upper = GridSearch {
        h: h.clone(),
        origin: origin.clone(),
        eval: |t: &BigRational| d_hi_at(t, res),
        values: BTreeMap::new(),
        _res: res,
    };
    if reached(upper.value(0)?) {
        return Err(Error::InvalidArgument(format!(
            "dHi already reaches {eta} at the grid origin {GRID_ORIGIN}"
        )));
    }
    let (lo, hi) = if reached(upper.value(three_index)?) {
        (0, three_index)
    } else {
        let mut lo = three_index;
        let mut step = 1u64;
        loop {
            let j = three_index + step;
            if upper.t(j) > t_cap {
                return Err(Error::EtaOutOfRange { eta, max: full.hi });
            }
            if reached(upper.value(j)?) {
                break (lo, j);
            }
            lo = j;
            step *= 2;
        }
    };
    let j_b = upper.bisect(lo, hi, reached)?;
    let left = upper.t(j_b - 1);
    let right = upper.t(j_b);
    let d_hi_left = upper.value(j_b - 1)?;
    let d_hi_right = upper.value(j_b)?;

    let certified_right = if degenerate {
        None
    } else {
        let mut lower = GridSearch {
            h: h.clone(),
            origin,
            eval: |t: &BigRational| d_lo_at(t, res),
            values: BTreeMap::new(),
            _res: res,
        };
        let ok = |d: f64| d >= eta;
        if ok(lower.value(j_b)?) {
            Some(lower.t(j_b))
        } else {
            let mut found = None;
            let mut lo = j_b;
            for k in 0..DLO_GALLOP_LIMIT {
                let j = j_b + (1u64 << k);
                if lower.t(j) > t_cap {
                    break;
                }
                if ok(lower.value(j)?) {
                    found = Some(lower.bisect(lo, j, ok)?);
                    break;
                }
                lo = j;
            }
            found.map(|j| lower.t(j))
        }
    };
    let indeterminate = match &certified_right {
        Some(tc) => &(tc - &left) > tol_t,
        None => true,
    };
    Ok(EtaMinus {
        eta,
        left,
        right,
        d_hi_left,
        d_hi_right,
        certified_right,
        indeterminate,
        degenerate,
        step: h,
    })
}

/// Outcome of asking whether two subhorseshoes connect before `t + ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectVerdict {
    pub connected: bool,
    /// State words along a shortest path from the first component to the second.
    pub forward: Option<Vec<Word>>,
    pub backward: Option<Vec<Word>>,
    /// The subhorseshoe of the outer prune at `t + ε` holding both, when connected.
    pub enclosing: Option<Vec<Word>>,
}

/// Connection test inside an already pruned automaton (the one at `t + ε`).
pub fn connect_in(a: &SubshiftAutomaton, comp1: &[Word], comp2: &[Word]) -> Result<ConnectVerdict> {
    let i1 = indices_of(a, comp1).map_err(|_| Error::ComponentVanished)?;
    let i2 = indices_of(a, comp2).map_err(|_| Error::ComponentVanished)?;
    if i1.is_empty() || i2.is_empty() {
        return Err(Error::InvalidArgument("components must be non-empty".into()));
    }
    let to_words = |p: Vec<usize>| words_of(a, &p);
    let forward = reach_witness(a, &i1, &i2).map(to_words);
    let backward = reach_witness(a, &i2, &i1).map(to_words);
    let connected = forward.is_some() && backward.is_some();
    let enclosing = if connected {
        let d = scc_decompose(a);
        d.component_of[i1[0]].map(|k| words_of(a, &d.subhorseshoes[k]))
    } else {
        None
    };
    Ok(ConnectVerdict {
        connected,
        forward,
        backward,
        enclosing,
    })
}

/// Do `comp1` and `comp2` (subhorseshoes of the outer prune at `t`) lie in a
/// common subhorseshoe of the outer prune at `t + eps`?
pub fn connect_check(
    comp1: &[Word],
    comp2: &[Word],
    t: &BigRational,
    eps: &BigRational,
    res: &Resolution,
) -> Result<ConnectVerdict> {
    if eps.is_negative() {
        return Err(Error::InvalidArgument("eps must be nonnegative".into()));
    }
    let a = res.automaton(&(t + eps), PruneMode::Outer)?;
    connect_in(&a, comp1, comp2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyStage {
    pub t_n: BigRational,
    /// The level `t_{n+1}` whose inner prune contains the component.
    pub level: BigRational,
    pub component: Vec<Word>,
    pub dim: DimensionEstimate,
    pub max_f: RatInterval,
    /// Connection with the next stage's component before the next level.
    pub link: Option<ConnectVerdict>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Family {
    pub eta_minus: EtaMinus,
    pub stages: Vec<FamilyStage>,
    pub diagnostic: Option<String>,
}

/// The largest-dimension subhorseshoe of the inner prune at `level`.
pub fn stage_at(t_n: &BigRational, level: &BigRational, res: &Resolution) -> Result<Option<FamilyStage>> {
    let s = Sublevel::compute(level, PruneMode::Inner, res)?;
    let Some(best) = s.best() else {
        return Ok(None);
    };
    let comp = &s.decomposition.subhorseshoes[best];
    let max_f = max_f_over_component(&s.automaton, comp, 1, res.state_budget)?;
    Ok(Some(FamilyStage {
        t_n: t_n.clone(),
        level: level.clone(),
        component: words_of(&s.automaton, comp),
        dim: s.dims[best].clone(),
        max_f,
        link: None,
    }))
}

/// Greedy increasing family below the `η⁻` estimate: candidate levels step by
/// `eps/(4·n_max)` from `η⁻ − eps`; a level becomes a stage when its best
/// inner subhorseshoe is strictly higher-dimensional than the previous stage
/// and its certified `max f` lies between the previous level and this one.
pub fn increasing_family(eta: f64, eps: &BigRational, n_max: usize, res: &Resolution) -> Result<Family> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let em = eta_minus(eta, &(eps / BigInt::from(4)), res)?;
    let top = em.right.clone();
    let t0 = &top - eps;
    let sub = eps / BigInt::from(4 * n_max as u64);
    let mut stages: Vec<FamilyStage> = Vec::new();
    let mut prev_level = t0.clone();
    for k in 1..=(4 * n_max) {
        if stages.len() == n_max {
            break;
        }
        let level = &t0 + &sub * BigInt::from(k as u64);
        let Some(stage) = stage_at(&prev_level, &level, res)? else {
            continue;
        };
        let higher = stages.last().is_none_or(|p| stage.dim.lo > p.dim.hi);
        let straddles = stage.max_f.hi > prev_level && stage.max_f.lo < level;
        if higher && straddles {
            prev_level = level;
            stages.push(stage);
        }
    }
    for i in 0..stages.len().saturating_sub(1) {
        let a = res.automaton(&stages[i + 1].level, PruneMode::Inner)?;
        stages[i].link = Some(connect_in(&a, &stages[i].component, &stages[i + 1].component)?);
    }
    let diagnostic = (stages.len() < n_max).then(|| {
        format!(
            "window {} separated {} of {} requested stages",
            res.window,
            stages.len(),
            n_max
        )
    });
    Ok(Family {
        eta_minus: em,
        stages,
        diagnostic,
    })
}

/// Geometric gap schedule `g(n) = base · ratio^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSchedule {
    pub base: usize,
    pub ratio: usize,
}

impl GapSchedule {
    pub fn new(base: usize, ratio: usize) -> Result<Self> {
        if base == 0 || ratio < 2 {
            return Err(Error::InvalidArgument(
                "gap schedule needs base ≥ 1 and ratio ≥ 2 to be strictly increasing".into(),
            ));
        }
        Ok(GapSchedule { base, ratio })
    }

    pub fn gap(&self, n: usize) -> usize {
        self.base * self.ratio.pow(n as u32)
    }

    pub fn doubled(&self) -> Self {
        GapSchedule {
            base: 2 * self.base,
            ratio: self.ratio,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaDemo {
    pub word: Vec<Symbol>,
    /// `[max lo, max hi]` of the `f`-ranges over the last stage block.
    pub lagrange: RatInterval,
    pub window_error: BigRational,
    pub final_max_f: RatInterval,
    pub within_final: bool,
}

impl ThetaDemo {
    /// Both endpoints of the two estimates agree to within the larger window error.
    pub fn stable_against(&self, other: &ThetaDemo) -> bool {
        let err = self.window_error.clone().max(other.window_error.clone());
        (&self.lagrange.lo - &other.lagrange.lo).abs() <= err
            && (&self.lagrange.hi - &other.lagrange.hi).abs() <= err
    }
}

fn cycle_through(a: &SubshiftAutomaton, s: usize) -> Result<Vec<usize>> {
    let back = reach_witness(a, a.successors(s), &[s])
        .ok_or_else(|| Error::ConnectorNotFound(format!("no cycle through {}", a.state(s))))?;
    let mut cycle = vec![s];
    cycle.extend_from_slice(&back[..back.len() - 1]);
    Ok(cycle)
}

fn connector(a: &SubshiftAutomaton, from: usize, to: usize) -> Result<Vec<usize>> {
    let p = reach_witness(a, &[from], &[to]).ok_or_else(|| {
        Error::ConnectorNotFound(format!("{} to {}", a.state(from), a.state(to)))
    })?;
    Ok(p[1..].to_vec())
}

/// Concatenates base blocks, connectors and spikes at each stage's
/// near-maximizer into one admissible word, and encloses its Lagrange value
/// by the `f`-ranges met during the last stage block.
pub fn theta_generate(
    res: &Resolution,
    base: &[Word],
    family: &[FamilyStage],
    stages: usize,
    gaps: &GapSchedule,
) -> Result<ThetaDemo> {
    let last = family
        .last()
        .ok_or_else(|| Error::InvalidArgument("family has no stages".into()))?;
    if stages == 0 || base.is_empty() {
        return Err(Error::InvalidArgument("need at least one stage and a non-empty base".into()));
    }
    let a = res.automaton(&last.level, PruneMode::Inner)?;
    let base_idx = indices_of(&a, base)?;
    let base_state = base_idx[0];
    let base_cycle = cycle_through(&a, base_state)?;
    let mut path: Vec<usize> = vec![base_state];
    let mut last_block_start = 0;
    for n in 0..stages {
        let stage = &family[n.min(family.len() - 1)];
        if n == stages - 1 {
            last_block_start = path.len() - 1;
        }
        for _ in 0..gaps.gap(n) {
            path.extend_from_slice(&base_cycle[1..]);
            path.push(base_state);
        }
        let comp = indices_of(&a, &stage.component)?;
        let spike = *comp
            .iter()
            .max_by(|&&x, &&y| a.f_range(x).hi.cmp(&a.f_range(y).hi).then(y.cmp(&x)))
            .expect("non-empty component");
        path.extend(connector(&a, base_state, spike)?);
        let spike_cycle = cycle_through(&a, spike)?;
        for _ in 0..=n {
            path.extend_from_slice(&spike_cycle[1..]);
            path.push(spike);
        }
        path.extend(connector(&a, spike, base_state)?);
    }
    let late = &path[last_block_start..];
    let mut lagrange = a.f_range(late[0]).clone();
    for &s in &late[1..] {
        lagrange = lagrange.max(a.f_range(s));
    }
    let final_comp = indices_of(&a, &last.component)?;
    let window_error = final_comp
        .iter()
        .map(|&s| a.f_range(s).width())
        .max()
        .unwrap_or_else(BigRational::zero);
    let final_max_f = last.max_f.clone();
    let within_final = final_max_f.widen(&window_error).contains_interval(&lagrange);
    Ok(ThetaDemo {
        word: path_word(&a, &path),
        lagrange,
        window_error,
        final_max_f,
        within_final,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "J-like")]
    JLike,
    #[serde(rename = "F-like")]
    FLike,
    #[serde(rename = "Jtilde-like")]
    JtildeLike,
    #[serde(rename = "indeterminate")]
    Indeterminate,
    /// `D` vanishes at `t`, which the `D > 0` requirement excludes.
    #[serde(rename = "zero-dimension")]
    ZeroDimension,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::JLike => "J-like",
            Label::FLike => "F-like",
            Label::JtildeLike => "Jtilde-like",
            Label::Indeterminate => "indeterminate",
            Label::ZeroDimension => "zero-dimension",
        })
    }
}

/// What the classifier needs to know about one subhorseshoe.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentReport {
    pub size: usize,
    pub dim: DimensionEstimate,
    pub max_f: RatInterval,
    /// Markov values of sampled periodic orbits of the component.
    pub periodic_values: Vec<RatInterval>,
    /// The component contains the best subhorseshoe of the outer prune at `t`.
    pub contains_outer_best: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    High,
    Low,
    Ambiguous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsOutcome {
    /// Some high-dimension component has a Lagrange value near `t`.
    Meets,
    /// Every high-dimension component certifiably misses the window.
    Misses,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsVerdict {
    pub eps: BigRational,
    pub tiers: Vec<Tier>,
    pub outcome: EpsOutcome,
}

fn open_contains(lo: &BigRational, hi: &BigRational, r: &RatInterval) -> bool {
    lo < &r.lo && &r.hi < hi
}

/// Splits components by dimension against `[d_lo, d_hi]` and asks whether the
/// high ones have Lagrange values in `(t − eps/4, t + eps/4)`.
pub fn classify_components(
    t: &BigRational,
    eps: &BigRational,
    d_lo: f64,
    d_hi: f64,
    comps: &[ComponentReport],
) -> EpsVerdict {
    let quarter = eps / BigInt::from(4);
    let lo = t - &quarter;
    let hi = t + &quarter;
    let tiers: Vec<Tier> = comps
        .iter()
        .map(|c| {
            if c.contains_outer_best || c.dim.lo >= d_hi {
                Tier::High
            } else if c.dim.hi < d_lo {
                Tier::Low
            } else {
                Tier::Ambiguous
            }
        })
        .collect();
    let meets = |c: &ComponentReport| {
        open_contains(&lo, &hi, &c.max_f) || c.periodic_values.iter().any(|v| open_contains(&lo, &hi, v))
    };
    let misses = |c: &ComponentReport| c.max_f.hi <= lo;
    let high = || comps.iter().zip(&tiers).filter(|(_, t)| **t == Tier::High).map(|(c, _)| c);
    let outcome = if high().any(meets) {
        EpsOutcome::Meets
    } else if !tiers.contains(&Tier::Ambiguous) && high().all(misses) {
        EpsOutcome::Misses
    } else {
        EpsOutcome::Unknown
    };
    EpsVerdict {
        eps: eps.clone(),
        tiers,
        outcome,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub t: BigRational,
    pub label: Label,
    pub d: DCurvePoint,
    pub per_eps: Vec<EpsVerdict>,
    /// `(t − δ, t − r)` on which `D` is certified constant, when found.
    pub left_gap: Option<(BigRational, BigRational)>,
}

/// Cycles sampled per component when certifying nearby Lagrange values.
const SAMPLED_CYCLES: usize = 16;

fn component_report(
    a: &SubshiftAutomaton,
    comp: &[usize],
    dim: &DimensionEstimate,
    outer_best: &[Word],
    res: &Resolution,
) -> Result<ComponentReport> {
    let max_f = max_f_over_component(a, comp, 1, res.state_budget)?;
    let sub = a.restrict(comp);
    let mut order: Vec<usize> = (0..sub.len()).collect();
    order.sort_by(|&x, &y| sub.f_range(y).hi.cmp(&sub.f_range(x).hi).then(x.cmp(&y)));
    let tol = BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12));
    let mut periodic_values = Vec::new();
    for &s in order.iter().take(SAMPLED_CYCLES) {
        let cycle = cycle_through(&sub, s)?;
        let period: Vec<Symbol> = cycle
            .iter()
            .map(|&k| *sub.state(k).symbols().last().expect("non-empty"))
            .collect();
        periodic_values.push(periodic_markov_enclosure(&period, &tol)?);
    }
    let words: std::collections::BTreeSet<&Word> = comp.iter().map(|&i| a.state(i)).collect();
    let contains_outer_best = !outer_best.is_empty() && outer_best.iter().all(|w| words.contains(w));
    Ok(ComponentReport {
        size: comp.len(),
        dim: dim.clone(),
        max_f,
        periodic_values,
        contains_outer_best,
    })
}

fn subhorseshoe_sets(s: &Sublevel) -> Vec<std::collections::BTreeSet<Word>> {
    s.decomposition
        .subhorseshoes
        .iter()
        .map(|c| words_of(&s.automaton, c).into_iter().collect())
        .collect()
}

/// Labels `t` by certified interval tests at each `eps` of a strictly
/// decreasing grid: `Jtilde-like` if at some scale every high-dimension
/// component misses `(t − ε/4, t + ε/4)`, `J-like` if at every scale one meets
/// it, `F-like` when additionally `D` is certified constant on a left gap.
pub fn classify_point(t: &BigRational, eps_grid: &[BigRational], res: &Resolution) -> Result<Classification> {
    if eps_grid.is_empty()
        || eps_grid.iter().any(|e| !e.is_positive())
        || eps_grid.windows(2).any(|w| w[0] <= w[1])
    {
        return Err(Error::InvalidArgument(
            "eps grid must be non-empty, positive and strictly decreasing".into(),
        ));
    }
    let outer_t = Sublevel::compute(t, PruneMode::Outer, res)?;
    let inner_t = Sublevel::compute(t, PruneMode::Inner, res)?;
    let d = DCurvePoint {
        t: t.clone(),
        d_lo: inner_t.max_lo(),
        d_hi: outer_t.max_hi(),
        window: res.window,
        r_max: res.r_max,
    };
    if d.d_hi == 0.0 {
        return Ok(Classification {
            t: t.clone(),
            label: Label::ZeroDimension,
            d,
            per_eps: Vec::new(),
            left_gap: None,
        });
    }
    let outer_best: Vec<Word> = outer_t
        .best()
        .map(|b| words_of(&outer_t.automaton, &outer_t.decomposition.subhorseshoes[b]))
        .unwrap_or_default();
    let per_eps = eps_grid
        .iter()
        .map(|eps| {
            let level = t + eps / BigInt::from(4);
            let s = Sublevel::compute(&level, PruneMode::Outer, res)?;
            let reports = s
                .decomposition
                .subhorseshoes
                .iter()
                .zip(&s.dims)
                .map(|(c, dim)| component_report(&s.automaton, c, dim, &outer_best, res))
                .collect::<Result<Vec<_>>>()?;
            Ok(classify_components(t, eps, d.d_lo, d.d_hi, &reports))
        })
        .collect::<Result<Vec<_>>>()?;
    let label = if per_eps.iter().any(|v| v.outcome == EpsOutcome::Misses) {
        Label::JtildeLike
    } else if per_eps.iter().all(|v| v.outcome == EpsOutcome::Meets) {
        Label::JLike
    } else {
        Label::Indeterminate
    };
    let mut left_gap = None;
    if label == Label::JLike {
        let r = eps_grid.last().expect("non-empty") / BigInt::from(4);
        let upper = Sublevel::compute(&(t - &r), PruneMode::Outer, res)?;
        let upper_sets = subhorseshoe_sets(&upper);
        for delta in eps_grid.iter().filter(|e| **e > r) {
            let lower = Sublevel::compute(&(t - delta), PruneMode::Inner, res)?;
            let lower_sets = subhorseshoe_sets(&lower);
            let covered = !upper_sets.is_empty()
                && upper_sets
                    .iter()
                    .all(|u| lower_sets.iter().any(|l| u.is_subset(l)));
            if covered {
                left_gap = Some((t - delta, t - &r));
                break;
            }
        }
    }
    let label = if left_gap.is_some() { Label::FLike } else { label };
    Ok(Classification {
        t: t.clone(),
        label,
        d,
        per_eps,
        left_gap,
    })
}
