//! Exact integer and rational arithmetic plus certified real intervals.
//!
//! Every count in the crate is a [`BigInt`] and every probability a
//! [`BigRational`]. Irrational quantities (roots, exponentials, fixed points)
//! are only ever represented by a [`RealInterval`] with rational endpoints, and
//! comparisons against them go through [`decide`], which refines the interval
//! until the answer is certain or the refinement cap is reached.

use std::cmp::Ordering;
use std::fmt;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Binomial coefficient `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binom(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` extended by zero to negative `n`. Used by the closed forms whose
/// upper index can drop below zero at the edge of the parameter range.
pub fn binom_or_zero(n: i64, k: i64) -> BigInt {
    if n < 0 {
        BigInt::zero()
    } else {
        binom(n as u64, k)
    }
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int_rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// `1 / 10^e`.
pub fn ten_pow_neg(e: u32) -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), e as usize))
}

/// Refinement floor used by [`decide`]: `10^-30`.
pub fn refinement_cap() -> BigRational {
    ten_pow_neg(30)
}

/// Parses decimal or fraction literals such as `0.05`, `1e-9`, `3/7`, `-2`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::param(format!("not a rational number: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(digits);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

/// Renders `x` rounded half-away-from-zero to `digits` places after the point.
pub fn rational_to_decimal(x: &BigRational, digits: u32) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let scaled = x * BigRational::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let neg = rounded.is_negative();
    let abs = rounded.abs();
    let (int_part, frac_part) = abs.div_rem(&scale);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if digits > 0 {
        let frac = frac_part.to_string();
        out.push('.');
        for _ in frac.len()..digits as usize {
            out.push('0');
        }
        out.push_str(&frac);
    }
    out
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    // Numerator and denominator can each overflow f64 while the ratio is tame.
    let n = x.numer().bits() as i64;
    let d = x.denom().bits() as i64;
    let shift = (n - d).clamp(-1000, 1000);
    let (num, den) = if shift > 60 {
        (x.numer().clone(), x.denom() << ((shift - 60) as usize))
    } else if shift < -60 {
        (x.numer() << ((-shift - 60) as usize), x.denom().clone())
    } else {
        (x.numer().clone(), x.denom().clone())
    };
    let scaled = BigRational::new(num, den);
    let base = big_ratio_to_f64(&scaled);
    if shift > 60 {
        base * 2f64.powi((shift - 60) as i32)
    } else if shift < -60 {
        base / 2f64.powi((-shift - 60) as i32)
    } else {
        base
    }
}

fn big_ratio_to_f64(x: &BigRational) -> f64 {
    // |x| is within 2^±61 here; scale to 64 significant bits and divide.
    let bits = x.denom().bits().max(x.numer().bits());
    let drop = bits.saturating_sub(64) as usize;
    let n = (x.numer() >> drop).to_f64().unwrap_or(f64::NAN);
    let d = (x.denom() >> drop).to_f64().unwrap_or(f64::NAN);
    n / d
}

fn pow_rat(x: &BigRational, e: u32) -> BigRational {
    num_traits::pow(x.clone(), e as usize)
}

fn floor_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits as usize;
    let scaled = (x * BigRational::from_integer(scale.clone())).floor().to_integer();
    BigRational::new(scaled, scale)
}

fn ceil_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits as usize;
    let scaled = (x * BigRational::from_integer(scale.clone())).ceil().to_integer();
    BigRational::new(scaled, scale)
}

/// A closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RealInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::param("interval with lo > hi"));
        }
        Ok(RealInterval { lo, hi })
    }

    pub fn point(x: BigRational) -> Self {
        RealInterval { lo: x.clone(), hi: x }
    }

    pub fn from_integer(x: &BigInt) -> Self {
        Self::point(int_rat(x))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn add(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn mul(&self, other: &RealInterval) -> RealInterval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        RealInterval { lo, hi }
    }

    pub fn scale(&self, c: &BigRational) -> RealInterval {
        self.mul(&RealInterval::point(c.clone()))
    }

    pub fn add_rational(&self, c: &BigRational) -> RealInterval {
        RealInterval {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    /// Integer power. Exact for non-negative intervals; otherwise falls back
    /// to repeated interval multiplication (still an enclosure).
    pub fn pow(&self, e: u32) -> RealInterval {
        if e == 0 {
            return RealInterval::point(BigRational::one());
        }
        if !self.lo.is_negative() {
            return RealInterval {
                lo: pow_rat(&self.lo, e),
                hi: pow_rat(&self.hi, e),
            };
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn recip(&self) -> Result<RealInterval> {
        if self.contains(&BigRational::zero()) {
            return Err(Error::param("reciprocal of an interval containing zero"));
        }
        Ok(RealInterval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    /// Widens the endpoints to multiples of `2^-bits` so denominators stay small.
    pub fn round_outward(&self, bits: u32) -> RealInterval {
        RealInterval {
            lo: floor_dyadic(&self.lo, bits),
            hi: ceil_dyadic(&self.hi, bits),
        }
    }

    /// `Some(ordering of every point against x)` when it is the same for all points.
    pub fn cmp_rational(&self, x: &BigRational) -> Option<Ordering> {
        if &self.hi < x {
            Some(Ordering::Less)
        } else if &self.lo > x {
            Some(Ordering::Greater)
        } else if self.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn cmp_interval(&self, other: &RealInterval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Floor shared by every point of the interval, if there is one.
    pub fn floor(&self) -> Option<BigInt> {
        let a = self.lo.floor().to_integer();
        let b = self.hi.floor().to_integer();
        (a == b).then_some(a)
    }

    pub fn ceil(&self) -> Option<BigInt> {
        let a = self.lo.ceil().to_integer();
        let b = self.hi.ceil().to_integer();
        (a == b).then_some(a)
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.midpoint())
    }

    pub fn to_decimal(&self, digits: u32) -> String {
        rational_to_decimal(&self.midpoint(), digits)
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            rational_to_decimal(&self.lo, 15),
            rational_to_decimal(&self.hi, 15)
        )
    }
}

fn exact_root(x: &BigInt, d: u32) -> Option<BigInt> {
    let r = x.nth_root(d);
    (num_traits::pow(r.clone(), d as usize) == *x).then_some(r)
}

/// Interval of width at most `tol` containing `x^(1/d)`, by bisection on exact
/// rationals. Perfect `d`-th powers come back as a point interval.
pub fn nth_root_interval(x: &BigRational, d: u32, tol: &BigRational) -> Result<RealInterval> {
    if !tol.is_positive() {
        return Err(Error::param("tolerance must be positive"));
    }
    if x.is_negative() {
        return Err(Error::param("root of a negative number"));
    }
    if d == 0 {
        return Err(Error::param("root degree must be at least 1"));
    }
    if let (Some(n), Some(m)) = (exact_root(x.numer(), d), exact_root(x.denom(), d)) {
        return Ok(RealInterval::point(BigRational::new(n, m)));
    }
    let one = BigRational::one();
    let mut lo = BigRational::zero();
    let mut hi = if *x > one { x.clone() } else { one };
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        if pow_rat(&mid, d) <= *x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RealInterval { lo, hi })
}

/// Repeatedly evaluates an enclosure at shrinking tolerances until `pick`
/// returns a verdict. Fails with [`Error::Undecidable`] once the tolerance
/// reaches [`refinement_cap`] without a verdict.
pub fn decide<T>(
    mut eval: impl FnMut(&BigRational) -> Result<RealInterval>,
    pick: impl Fn(&RealInterval) -> Option<T>,
) -> Result<T> {
    let cap = refinement_cap();
    let mut tol = BigRational::new(BigInt::one(), BigInt::one() << 16);
    loop {
        let iv = eval(&tol)?;
        if let Some(v) = pick(&iv) {
            return Ok(v);
        }
        if tol <= cap {
            return Err(Error::Undecidable {
                tolerance: "1e-30".into(),
            });
        }
        tol = (tol / BigRational::from_integer(BigInt::one() << 24)).max(cap.clone());
    }
}

/// Enclosure of `e^y` of width at most `tol`.
pub fn exp_interval(y: &BigRational, tol: &BigRational) -> Result<RealInterval> {
    if !tol.is_positive() {
        return Err(Error::param("tolerance must be positive"));
    }
    if y.is_zero() {
        return Ok(RealInterval::point(BigRational::one()));
    }
    if y.is_negative() {
        // e^-|y| lies in (0, 1], so the reciprocal is at most as wide as e^|y|
        // scaled by e^-2|y|; tighten until the result meets tol.
        let mut inner = tol.clone();
        loop {
            let pos = exp_interval(&-y, &inner)?;
            let out = pos.recip()?;
            if out.width() <= *tol {
                return Ok(out);
            }
            inner /= BigRational::from_integer(BigInt::from(1u64 << 20));
        }
    }
    let half = rat(1, 2);
    let two = BigRational::from_integer(BigInt::from(2));
    let mut m = 0u32;
    let mut z = y.clone();
    while z > half {
        z /= &two;
        m += 1;
    }
    let tol_bits = (tol.denom().bits() as i64 - tol.numer().bits() as i64).max(0) as u32;
    let mut bits = tol_bits + 2 * m + 32;
    loop {
        let eps = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
        let mut sum_lo = BigRational::zero();
        let mut sum_hi = BigRational::zero();
        let mut term_lo = BigRational::one();
        let mut term_hi = BigRational::one();
        let mut j = 0u64;
        while term_hi > eps {
            sum_lo += &term_lo;
            sum_hi += &term_hi;
            j += 1;
            let jr = BigRational::from_integer(BigInt::from(j));
            term_lo = floor_dyadic(&(&term_lo * &z / &jr), bits + 8);
            term_hi = ceil_dyadic(&(&term_hi * &z / &jr), bits + 8);
            sum_lo = floor_dyadic(&sum_lo, bits + 8);
            sum_hi = ceil_dyadic(&sum_hi, bits + 8);
        }
        // z <= 1/2 makes the tail at most twice its first term.
        let tail = &term_hi * &two;
        let mut acc = RealInterval {
            lo: sum_lo,
            hi: sum_hi + tail,
        };
        for _ in 0..m {
            acc = acc.mul(&acc).round_outward(bits + 8);
        }
        if acc.width() <= *tol {
            return Ok(acc);
        }
        bits += bits / 2 + 16;
    }
}
