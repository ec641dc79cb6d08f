//! Exact arithmetic in real quadratic fields.
//!
//! A [`Quadratic`] is `(a + b·√d)/c` kept in normal form: `c > 0`, `d` square-free
//! (`d = 1` exactly when `b = 0`), and `gcd(a, b, c) = 1`. Two values are equal
//! iff their fields are equal, so equality is syntactic.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::interval::{rat_to_decimal, RatInterval};
use crate::{Error, Result};

/// Trial division bound for the square-free kernel. Cofactors below the cube
/// of this bound are resolved exactly.
const TRIAL_LIMIT: u128 = 2_000_000;

/// Splits `n ≥ 1` as `s²·k` with `k` square-free. Returns `(s, k)`.
pub fn square_free_split(n: &BigInt) -> Result<(BigInt, BigInt)> {
    assert!(n.is_positive(), "square_free_split needs a positive argument");
    let Some(mut m) = n.to_u128() else {
        return Err(Error::FactorizationLimit(n.to_string()));
    };
    let mut square = 1u128;
    let mut kernel = 1u128;
    let mut p = 2u128;
    while p <= TRIAL_LIMIT && p * p * p <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            square *= p.pow(e / 2);
            if e % 2 == 1 {
                kernel *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        // Every prime factor of m exceeds p, so m is p1, p1·p2 or p1² whenever m < p³.
        let r = m.sqrt();
        if r * r == m {
            square *= r;
        } else if p <= TRIAL_LIMIT || m < TRIAL_LIMIT.pow(3) {
            kernel *= m;
        } else {
            return Err(Error::FactorizationLimit(n.to_string()));
        }
    }
    Ok((BigInt::from(square), BigInt::from(kernel)))
}

/// Sign of `a + b·√d` for integers `a, b` and `d > 0` not a perfect square.
fn sign_of(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.sign();
    let sb = b.sign();
    match (sa, sb) {
        (Sign::NoSign, Sign::NoSign) => Ordering::Equal,
        (_, Sign::NoSign) => a.cmp(&BigInt::zero()),
        (Sign::NoSign, _) => b.cmp(&BigInt::zero()),
        (Sign::Plus, Sign::Plus) => Ordering::Greater,
        (Sign::Minus, Sign::Minus) => Ordering::Less,
        (Sign::Plus, Sign::Minus) => (a * a).cmp(&(b * b * d)),
        (Sign::Minus, Sign::Plus) => (b * b * d).cmp(&(a * a)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quadratic {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Quadratic {
    /// Builds `(a + b·√d)/c` and brings it to normal form. `d` must be nonnegative
    /// and `c` nonzero.
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        if d.is_negative() {
            return Err(Error::InvalidArgument("negative radicand".into()));
        }
        let (mut a, mut b, mut c, mut d) = (a, b, c, d);
        if d.is_zero() {
            b = BigInt::zero();
        }
        if !b.is_zero() {
            let (s, k) = square_free_split(&d)?;
            b *= s;
            d = k;
            if d.is_one() {
                a += &b;
                b = BigInt::zero();
            }
        }
        if b.is_zero() {
            d = BigInt::one();
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(Quadratic { a, b, c, d })
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Quadratic {
            a: n.into(),
            b: BigInt::zero(),
            c: BigInt::one(),
            d: BigInt::one(),
        }
    }

    pub fn from_rational(x: &BigRational) -> Self {
        Quadratic {
            a: x.numer().clone(),
            b: BigInt::zero(),
            c: x.denom().clone(),
            d: BigInt::one(),
        }
    }

    /// `√n / m`, e.g. `sqrt_over(221, 5)`.
    pub fn sqrt_over(n: impl Into<BigInt>, m: impl Into<BigInt>) -> Result<Self> {
        Quadratic::new(BigInt::zero(), BigInt::one(), m.into(), n.into())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn common_field(&self, other: &Quadratic) -> Result<BigInt> {
        if self.is_rational() {
            Ok(other.d.clone())
        } else if other.is_rational() || self.d == other.d {
            Ok(self.d.clone())
        } else {
            Err(Error::FieldMismatch(self.d.to_string(), other.d.to_string()))
        }
    }

    pub fn add(&self, other: &Quadratic) -> Result<Quadratic> {
        let d = self.common_field(other)?;
        Quadratic::new(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            &self.c * &other.c,
            d,
        )
    }

    pub fn neg(&self) -> Quadratic {
        Quadratic {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn sub(&self, other: &Quadratic) -> Result<Quadratic> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Quadratic) -> Result<Quadratic> {
        let d = self.common_field(other)?;
        Quadratic::new(
            &self.a * &other.a + &self.b * &other.b * &d,
            &self.a * &other.b + &other.a * &self.b,
            &self.c * &other.c,
            d,
        )
    }

    pub fn div(&self, other: &Quadratic) -> Result<Quadratic> {
        let d = self.common_field(other)?;
        let norm = &other.a * &other.a - &other.b * &other.b * &d;
        if norm.is_zero() {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        // x / y = x · conj(y) · c_y / (a_y² − b_y² d)
        let na = &self.a * &other.a - &self.b * &other.b * &d;
        let nb = &self.b * &other.a - &self.a * &other.b;
        Quadratic::new(
            na * &other.c,
            nb * &other.c,
            &self.c * norm,
            d,
        )
    }

    /// Exact comparison; both values must live in the same field (or be rational).
    pub fn try_cmp(&self, other: &Quadratic) -> Result<Ordering> {
        let diff = self.sub(other)?;
        Ok(sign_of(&diff.a, &diff.b, &diff.d))
    }

    /// Rational interval of width at most `tol` containing the value.
    pub fn enclosure(&self, tol: &BigRational) -> Result<RatInterval> {
        if !tol.is_positive() {
            return Err(Error::NonPositiveTolerance);
        }
        if self.b.is_zero() {
            return Ok(RatInterval::point(BigRational::new(
                self.a.clone(),
                self.c.clone(),
            )));
        }
        // √d ∈ [s/M, (s+1)/M] with s = ⌊√(d·M²)⌋; width |b|/(c·M) ≤ tol.
        let scale = BigRational::new(self.b.abs(), self.c.clone()) / tol;
        let m = scale.ceil().to_integer().max(BigInt::one());
        let s = (&self.d * &m * &m).sqrt();
        let root_lo = BigRational::new(s.clone(), m.clone());
        let root_hi = BigRational::new(s + 1u32, m);
        let a = BigRational::from_integer(self.a.clone());
        let b = BigRational::from_integer(self.b.clone());
        let c = BigRational::from_integer(self.c.clone());
        Ok(RatInterval::spanning(
            (&a + &b * root_lo) / &c,
            (&a + &b * root_hi) / &c,
        ))
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let c = self.c.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        (a + b * d.sqrt()) / c
    }

    /// Decimal expansion to `digits` places, truncated from the lower end of a
    /// tight enclosure (off by at most one unit in the last place).
    pub fn to_decimal(&self, digits: usize) -> String {
        let tol = BigRational::new(
            BigInt::one(),
            num_traits::pow(BigInt::from(10u32), digits + 4),
        );
        let enc = self.enclosure(&tol).expect("positive tolerance");
        rat_to_decimal(&enc.lo, digits)
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => self.a.to_string(),
            (true, false) if self.b.is_one() => format!("sqrt({})", self.d),
            (true, false) => format!("{}*sqrt({})", self.b, self.d),
            (false, false) if self.b.is_negative() => {
                format!("({} - {}*sqrt({}))", self.a, -&self.b, self.d)
            }
            (false, false) => format!("({} + {}*sqrt({}))", self.a, self.b, self.d),
        };
        if self.c.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/{}", self.c)
        }
    }
}

/// An exact quadratic irrational together with a certified rational enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticValue {
    pub exact: Quadratic,
    pub enclosure: RatInterval,
}

impl QuadraticValue {
    pub fn new(exact: Quadratic, tol: &BigRational) -> Result<Self> {
        let enclosure = exact.enclosure(tol)?;
        Ok(QuadraticValue { exact, enclosure })
    }

    pub fn to_f64(&self) -> f64 {
        self.exact.to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, c: i64, d: i64) -> Quadratic {
        Quadratic::new(a.into(), b.into(), c.into(), d.into()).unwrap()
    }

    #[test]
    fn normal_form_extracts_squares_and_gcd() {
        let x = q(0, 2, 4, 8); // 2√8/4 = √2
        assert_eq!(x, q(0, 1, 1, 2));
        let y = q(6, 3, -3, 9); // (6 + 3·3)/(-3) = -5
        assert_eq!(y, Quadratic::from_integer(-5));
        assert_eq!(y.d(), &BigInt::one());
    }

    #[test]
    fn square_free_split_handles_large_prime_squares() {
        let p = BigInt::from(1_000_003u64);
        let (s, k) = square_free_split(&(&p * &p * 7)).unwrap();
        assert_eq!(s, p);
        assert_eq!(k, BigInt::from(7));
        let (s, k) = square_free_split(&BigInt::from(221)).unwrap();
        assert_eq!((s, k), (BigInt::one(), BigInt::from(221)));
    }

    #[test]
    fn field_arithmetic() {
        let phi = q(1, 1, 2, 5);
        let inv = Quadratic::from_integer(1).div(&phi).unwrap();
        assert_eq!(inv, q(-1, 1, 2, 5));
        let sq = phi.mul(&phi).unwrap();
        assert_eq!(sq, phi.add(&Quadratic::from_integer(1)).unwrap());
    }

    #[test]
    fn comparison_is_exact() {
        let a = Quadratic::sqrt_over(221, 5).unwrap();
        let b = Quadratic::sqrt_over(8, 1).unwrap();
        assert!(a.mul(&a).unwrap().try_cmp(&b.mul(&b).unwrap()).unwrap() == Ordering::Greater);
        assert_eq!(
            q(3, -1, 1, 2).try_cmp(&Quadratic::from_integer(1)).unwrap(),
            Ordering::Greater
        );
        assert!(a.try_cmp(&b).is_err());
    }

    #[test]
    fn enclosure_contains_value_within_tolerance() {
        let tol = BigRational::new(1.into(), BigInt::from(10u64).pow(12));
        let x = q(-1, 1, 2, 5);
        let enc = x.enclosure(&tol).unwrap();
        assert!(enc.width() <= tol);
        let f = x.to_f64();
        assert!((enc.lo_f64() - f).abs() < 1e-11 && (enc.hi_f64() - f).abs() < 1e-11);
        assert_eq!(x.to_decimal(10), "0.6180339887");
    }
}
