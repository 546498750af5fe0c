//! Biased random walks and their probability of touching `y = (r-1)x + t`.
//!
//! A `p`-walk of length `n` goes up with probability `p` and right otherwise.
//! Its hitting probability obeys
//! `f(n+1, t) = p·f(n, t-1) + (1-p)·f(n, t+r-1)` with `f(·, t ≤ 0) = 1` and
//! `f(0, t ≥ 1) = 0`; as `n → ∞` it tends to `γ^t`, where `γ` is the least
//! root of `x = p + (1-p)x^r` in `(0, 1]`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{binom, exp_interval, nth_root_interval, rat, refinement_cap, BigInt, BigRational, RealInterval};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkParams {
    pub r: u32,
    pub t: i64,
    pub p: BigRational,
}

impl WalkParams {
    pub fn new(r: u32, t: i64, p: BigRational) -> Result<WalkParams> {
        if r < 2 {
            return Err(Error::param("walk needs r >= 2"));
        }
        if p.is_negative() || p > BigRational::one() {
            return Err(Error::param("p must lie in [0, 1]"));
        }
        Ok(WalkParams { r, t, p })
    }
}

/// `f(m, t)` for every `m = 0..=n_max` at the given offset `t`.
///
/// Builds the table row by row; row `m` stores `f(m, τ)` for `1 ≤ τ ≤ m`
/// (larger offsets are unreachable, hence zero).
pub fn f_series(n_max: u32, params: &WalkParams) -> Vec<BigRational> {
    let one = BigRational::one();
    let q = &one - &params.p;
    let r = params.r as i64;
    let lookup = |row: &Vec<BigRational>, m: i64, tau: i64| -> BigRational {
        if tau <= 0 {
            BigRational::one()
        } else if tau > m {
            BigRational::zero()
        } else {
            row[(tau - 1) as usize].clone()
        }
    };
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut row: Vec<BigRational> = Vec::new();
    out.push(lookup(&row, 0, params.t));
    for m in 1..=n_max as i64 {
        let next: Vec<BigRational> = (1..=m)
            .map(|tau| &params.p * lookup(&row, m - 1, tau - 1) + &q * lookup(&row, m - 1, tau + r - 1))
            .collect();
        row = next;
        out.push(lookup(&row, m, params.t));
    }
    out
}

/// Exact probability that a `p`-walk of length `n` touches the line.
pub fn f_finite(n: u32, params: &WalkParams) -> BigRational {
    if params.t <= 0 {
        return BigRational::one();
    }
    if params.t > n as i64 {
        return BigRational::zero();
    }
    f_series(n, params).pop().expect("series is non-empty")
}

fn fixed_point_gap(r: u32, p: &BigRational, x: &BigRational) -> BigRational {
    p + (BigRational::one() - p) * num_traits::pow(x.clone(), r as usize) - x
}

/// Least root `γ` of `x = p + (1-p)x^r` in `(0, 1]`, enclosed to width `tol`.
///
/// An interior root exists exactly when `p < (r-1)/r`; otherwise the walk
/// touches the line almost surely and `[1, 1]` is returned.
pub fn gamma_root(r: u32, p: &BigRational, tol: &BigRational) -> Result<RealInterval> {
    if !tol.is_positive() {
        return Err(Error::param("tolerance must be positive"));
    }
    if r < 2 {
        return Err(Error::param("r must be at least 2"));
    }
    if !p.is_positive() || *p >= BigRational::one() {
        return Err(Error::param("p must lie strictly between 0 and 1"));
    }
    if *p >= rat(r as i64 - 1, r as i64) {
        return Ok(RealInterval::point(BigRational::one()));
    }
    if r == 2 {
        // (x - 1)((1-p)x - p) = 0.
        return Ok(RealInterval::point(p / (BigRational::one() - p)));
    }
    // The gap is positive on [0, γ) and negative on (γ, 1).
    let mut lo = BigRational::zero();
    let mut hi = BigRational::one();
    let two = rat(2, 1);
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        let gap = fixed_point_gap(r, p, &mid);
        if gap.is_zero() {
            return Ok(RealInterval::point(mid));
        }
        if gap.is_positive() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RealInterval::new(lo, hi)
}

/// `α_r`: the root at `p = 1/2`.
pub fn alpha(r: u32, tol: &BigRational) -> Result<RealInterval> {
    if r < 3 {
        return Err(Error::param("alpha needs r >= 3"));
    }
    gamma_root(r, &rat(1, 2), tol)
}

/// Enclosure of `x^e` for `x` inside the interval `base` (all non-negative).
fn pow_enclosure(base: &RealInterval, e: u32) -> RealInterval {
    base.pow(e)
}

/// Enclosure of `α_r^t · C(n, k)`, a bound on `r`-wise `t`-intersecting
/// `k`-uniform families when `n ≥ 2k`.
pub fn prob_bound_alpha(n: u32, k: u32, r: u32, t: u32) -> Result<RealInterval> {
    if n < 2 * k {
        return Err(Error::pre(format!("bound needs n >= 2k, got n={n}, k={k}")));
    }
    let total = binom(n as u64, k as i64);
    if t == 0 {
        return Ok(RealInterval::from_integer(&total));
    }
    // Width of α^t·C is about t·C·width(α); aim for an absolute width of 2^-40.
    let scale = BigInt::from(t) * &total * BigInt::from(1u64 << 40);
    let tol = BigRational::new(BigInt::one(), scale);
    let a = alpha(r, &tol)?;
    Ok(pow_enclosure(&a, t).scale(&BigRational::from_integer(total)))
}

/// Integer bound implied by [`prob_bound_alpha`]: the floor of its upper endpoint.
pub fn prob_bound_alpha_floor(n: u32, k: u32, r: u32, t: u32) -> Result<BigInt> {
    Ok(prob_bound_alpha(n, k, r, t)?.hi().floor().to_integer())
}

/// Enclosure of `e^{-a²/(2λ)}`.
pub fn chernoff_lower_tail(lambda: &BigRational, a: &BigRational) -> Result<RealInterval> {
    if !lambda.is_positive() {
        return Err(Error::param("lambda must be positive"));
    }
    if a.is_negative() {
        return Err(Error::param("a must be non-negative"));
    }
    let exponent = -(a * a) / (lambda * rat(2, 1));
    exp_interval(&exponent, &refinement_cap())
}

/// Exact `Pr(X < m)` for `X ~ Bin(n, p)`.
pub fn binomial_lower_tail(n: u32, p: &BigRational, m: u32) -> BigRational {
    let q = BigRational::one() - p;
    (0..m.min(n + 1))
        .map(|j| {
            BigRational::from_integer(binom(n as u64, j as i64))
                * num_traits::pow(p.clone(), j as usize)
                * num_traits::pow(q.clone(), (n - j) as usize)
        })
        .sum()
}

/// `α_3 = (√5 - 1)/2`, enclosed via a square root.
pub fn alpha3_closed_form(tol: &BigRational) -> Result<RealInterval> {
    let s = nth_root_interval(&rat(5, 1), 2, tol)?;
    Ok(s.add_rational(&rat(-1, 1)).scale(&rat(1, 2)))
}
