//! Exact continued-fraction arithmetic: continuants, cylinder intervals,
//! values of eventually periodic expansions and enclosures of
//! `f(θ) = θ₀ + [0; θ₁, θ₂, …] + [0; θ₋₁, θ₋₂, …]` over symbolic windows.
//!
//! Everything here is exact; no floating point enters an endpoint.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::interval::RatInterval;
use crate::quadratic::{Quadratic, QuadraticValue};
use crate::{Error, Result};

/// A partial quotient. Alphabets are small, so a byte is plenty.
pub type Symbol = u8;

/// A non-empty finite word of partial quotients, each at least 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Symbol>", into = "Vec<Symbol>")]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        if symbols.contains(&0) {
            return Err(Error::InvalidWord(format!("{symbols:?} contains 0")));
        }
        Ok(Word(symbols))
    }

    /// A word whose symbols are additionally bounded by `n`.
    pub fn with_bound(symbols: Vec<Symbol>, n: Symbol) -> Result<Self> {
        if let Some(&s) = symbols.iter().find(|&&s| s > n) {
            return Err(Error::InvalidWord(format!(
                "symbol {s} exceeds alphabet bound {n}"
            )));
        }
        Word::new(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn max_symbol(&self) -> Symbol {
        *self.0.iter().max().expect("non-empty")
    }

    pub fn into_inner(self) -> Vec<Symbol> {
        self.0
    }
}

impl TryFrom<Vec<Symbol>> for Word {
    type Error = Error;
    fn try_from(v: Vec<Symbol>) -> Result<Self> {
        Word::new(v)
    }
}

impl From<Word> for Vec<Symbol> {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Numerators and denominators of the last two convergents of `[0; a₁, …, aₙ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Continuants {
    pub p: BigInt,
    pub q: BigInt,
    pub p_prev: BigInt,
    pub q_prev: BigInt,
}

impl Continuants {
    /// Seed `p₋₁/q₋₁ = 1/0`, `p₀/q₀ = 0/1`: the continuants of the empty word.
    pub fn empty() -> Self {
        Continuants {
            p: BigInt::zero(),
            q: BigInt::one(),
            p_prev: BigInt::one(),
            q_prev: BigInt::zero(),
        }
    }

    pub fn push(&mut self, a: Symbol) {
        let a = BigInt::from(a);
        let p = &a * &self.p + &self.p_prev;
        let q = &a * &self.q + &self.q_prev;
        self.p_prev = std::mem::replace(&mut self.p, p);
        self.q_prev = std::mem::replace(&mut self.q, q);
    }

    /// `p·q_prev − p_prev·q`, always ±1.
    pub fn determinant(&self) -> BigInt {
        &self.p * &self.q_prev - &self.p_prev * &self.q
    }
}

fn continuants_of(symbols: &[Symbol]) -> Continuants {
    let mut c = Continuants::empty();
    for &a in symbols {
        c.push(a);
    }
    c
}

pub fn convergents(w: &Word) -> Continuants {
    continuants_of(w.symbols())
}

/// The cylinder `I(α)` of reals `[0; α, tail]` with an arbitrary tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub length: BigRational,
}

impl CylinderInterval {
    pub fn as_interval(&self) -> RatInterval {
        RatInterval::new(self.lo.clone(), self.hi.clone())
    }
}

fn cylinder_of(symbols: &[Symbol]) -> CylinderInterval {
    let c = continuants_of(symbols);
    let a = BigRational::new(c.p.clone(), c.q.clone());
    let b = BigRational::new(&c.p + &c.p_prev, &c.q + &c.q_prev);
    let length = BigRational::new(BigInt::one(), &c.q * (&c.q + &c.q_prev));
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    CylinderInterval { lo, hi, length }
}

pub fn cylinder_interval(w: &Word) -> CylinderInterval {
    cylinder_of(w.symbols())
}

/// Range of `[0; symbols, *]` over every tail; the unit interval for no symbols.
pub fn tail_range(symbols: &[Symbol]) -> RatInterval {
    if symbols.is_empty() {
        RatInterval::unit()
    } else {
        cylinder_of(symbols).as_interval()
    }
}

/// `⌈e^r⌉` for integer `r ≥ 1` (then `e^r` is irrational), from the exponential
/// series in fixed point with floor/ceil rounding and a rigorous remainder bound.
fn exp_ceil_exact(r: u32) -> BigUint {
    assert!(r >= 1);
    let bits = 64 + 2 * r as usize;
    let one = BigUint::one() << bits;
    let x = BigUint::from(r);
    let (mut lo_term, mut hi_term) = (one.clone(), one.clone());
    let (mut lo_sum, mut hi_sum) = (one.clone(), one.clone());
    let mut k = 0u32;
    loop {
        k += 1;
        let kk = BigUint::from(k);
        lo_term = &lo_term * &x / &kk;
        hi_term = (&hi_term * &x).div_ceil(&kk);
        lo_sum += &lo_term;
        hi_sum += &hi_term;
        // Once k + 2 > 2r the remainder after term k is at most 2·term·r/(k+1).
        if k + 2 > 2 * r {
            let tail = (&hi_term * &x * 2u32).div_ceil(&BigUint::from(k + 1));
            let lo = &lo_sum >> bits;
            let hi = (&hi_sum + &tail) >> bits;
            if lo == hi {
                return lo + 1u32;
            }
        }
    }
}

/// Thresholds `T_r = ⌈e^r⌉` as `u128`, valid for `r ≤ 87`.
pub(crate) fn exp_thresholds() -> &'static [u128] {
    static TABLE: OnceLock<Vec<u128>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![1u128];
        for r in 1..=87 {
            t.push(exp_ceil_exact(r).to_u128().expect("fits u128 for r ≤ 87"));
        }
        t
    })
}

/// Largest scale index supported by [`exp_thresholds`].
pub const MAX_SCALE: u32 = 87;

/// `r(α) = ⌊log(1/|I(α)|)⌋` (natural log) from the integer `1/|I(α)| = q(q+q')`.
pub(crate) fn scale_of_inverse_length(inv_len: u128) -> u32 {
    let t = exp_thresholds();
    // e^r ≤ inv_len ⟺ inv_len ≥ ⌈e^r⌉ for r ≥ 1.
    match t[1..].binary_search(&inv_len) {
        Ok(i) => (i + 1) as u32,
        Err(i) => i as u32,
    }
}

/// `r^u(α) = ⌊log(1/|I(α)|)⌋`, the scale index of a cylinder.
pub fn cylinder_scale(w: &Word) -> Result<u32> {
    let c = convergents(w);
    let inv = &c.q * (&c.q + &c.q_prev);
    let inv = inv
        .to_u128()
        .filter(|&v| v < exp_thresholds()[MAX_SCALE as usize])
        .ok_or_else(|| Error::InvalidArgument(format!("word {w} is too deep for scale tables")))?;
    Ok(scale_of_inverse_length(inv))
}

/// An eventually periodic one-sided sequence `preperiod · period^∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodicSeq {
    pub preperiod: Vec<Symbol>,
    pub period: Word,
}

impl PeriodicSeq {
    pub fn new(preperiod: Vec<Symbol>, period: Vec<Symbol>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        if preperiod.contains(&0) {
            return Err(Error::InvalidWord("preperiod contains 0".into()));
        }
        Ok(PeriodicSeq {
            preperiod,
            period: Word::new(period)?,
        })
    }

    pub fn purely_periodic(period: Vec<Symbol>) -> Result<Self> {
        PeriodicSeq::new(Vec::new(), period)
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    /// The `i`-th symbol (0-based) of the one-sided sequence.
    pub fn symbol(&self, i: usize) -> Symbol {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            let p = self.period.symbols();
            p[(i - self.preperiod.len()) % p.len()]
        }
    }
}

impl fmt::Display for PeriodicSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre: Vec<String> = self.preperiod.iter().map(|s| s.to_string()).collect();
        let per: Vec<String> = self.period.symbols().iter().map(|s| s.to_string()).collect();
        write!(f, "{}[{}]", if pre.is_empty() { String::new() } else { pre.join(",") + "," }, per.join(","))
    }
}

/// Möbius action of a word: `[0; w, y]` for a tail value `y ∈ [0, 1]`,
/// i.e. `(p + p_prev·y) / (q + q_prev·y)`.
fn apply_word(c: &Continuants, y: &Quadratic) -> Result<Quadratic> {
    let num = Quadratic::from_integer(c.p.clone()).add(&Quadratic::from_integer(c.p_prev.clone()).mul(y)?)?;
    let den = Quadratic::from_integer(c.q.clone()).add(&Quadratic::from_integer(c.q_prev.clone()).mul(y)?)?;
    num.div(&den)
}

/// Exact value of the purely periodic `[0; w, w, w, …]`: the root in (0, 1) of
/// `q'x² + (q − p')x − p = 0`.
pub fn purely_periodic_value(w: &Word) -> Result<Quadratic> {
    let c = convergents(w);
    let b = &c.q - &c.p_prev;
    let disc = &b * &b + BigInt::from(4) * &c.p * &c.q_prev;
    Quadratic::new(-b, BigInt::one(), BigInt::from(2) * &c.q_prev, disc)
}

/// Exact value `[0; θ₁, θ₂, …]` of an eventually periodic expansion, with an
/// enclosure of width at most `tol`.
pub fn cf_value(s: &PeriodicSeq, tol: &BigRational) -> Result<QuadraticValue> {
    if !tol.is_positive() {
        return Err(Error::NonPositiveTolerance);
    }
    let tail = purely_periodic_value(&s.period)?;
    let exact = if s.preperiod.is_empty() {
        tail
    } else {
        apply_word(&continuants_of(&s.preperiod), &tail)?
    };
    QuadraticValue::new(exact, tol)
}

/// Certified enclosure of `f = a₀ + [0; a₁, …, a_ℓ, *] + [0; a₋₁, …, a₋ℓ, *]`
/// over every completion of the window `center` with `a₀ = center[pos]`.
pub fn f_window_range(center: &Word, pos: usize) -> Result<RatInterval> {
    window_f_range(center.symbols(), pos)
}

pub(crate) fn window_f_range(symbols: &[Symbol], pos: usize) -> Result<RatInterval> {
    if pos >= symbols.len() {
        return Err(Error::PositionOutOfRange {
            pos,
            len: symbols.len(),
        });
    }
    let a0 = BigRational::from_integer(BigInt::from(symbols[pos]));
    let forward = tail_range(&symbols[pos + 1..]);
    let backward: Vec<Symbol> = symbols[..pos].iter().rev().copied().collect();
    let backward = tail_range(&backward);
    Ok(forward.add(&backward).shift(&a0))
}

/// `gcd`-reduced check used by tests: `p/q` is in lowest terms.
pub fn is_reduced(c: &Continuants) -> bool {
    c.p.gcd(&c.q).abs().is_one()
}
