//! Threshold formulas for the full `t`-star, and exact scans comparing it
//! with the Frankl families `A_i`.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::canonical::{size_frankl, FranklFamilySpec};
use crate::error::{Error, Result};
use crate::exactmath::{binom, binom_or_zero, decide, nth_root_interval, rat, BigInt, BigRational, RealInterval};
use crate::search::{max_uniform, SearchConfig};
use crate::walks::alpha;

/// Width used for threshold enclosures.
fn tol() -> BigRational {
    crate::exactmath::ten_pow_neg(20)
}

/// `(2.5t)^{1/(r-1)}(k-t) + k` for `r ∈ {3, 4}` and `(2t)^{1/(r-1)}(k-t) + k`
/// for `r ≥ 5`: above this the full `t`-star is optimal.
pub fn n0_upper_bound(k: u32, r: u32, t: u32) -> Result<RealInterval> {
    if r < 3 {
        return Err(Error::param(format!("need r >= 3, got {r}")));
    }
    if t < 1 || k < t + r {
        return Err(Error::pre(format!("need t >= 1 and k >= t+r, got k={k}, r={r}, t={t}")));
    }
    let base = if r <= 4 { rat(5 * t as i64, 2) } else { rat(2 * t as i64, 1) };
    let root = nth_root_interval(&base, r - 1, &tol())?;
    Ok(root.scale(&rat((k - t) as i64, 1)).add_rational(&rat(k as i64, 1)))
}

/// `((t+r)/2)^{1/(r-1)}(k-t)`: below this the full `t`-star is not optimal
/// for large `t`, so the exponent `1/(r-1)` cannot be improved.
pub fn n0_lower_companion(k: u32, r: u32, t: u32) -> Result<RealInterval> {
    if r < 2 || k < t {
        return Err(Error::param("need r >= 2 and k >= t"));
    }
    let root = nth_root_interval(&rat((t + r) as i64, 2), r - 1, &tol())?;
    Ok(root.scale(&rat((k - t) as i64, 1)))
}

/// `⌊((t+r)/2)^{1/(r-1)}(k-t-r+2) + t+r-2⌋`, where `A_1` beats the star
/// once `t ≥ 2^r - r`.
pub fn lower_companion_point(k: u32, r: u32, t: u32) -> Result<u32> {
    if r < 2 || k + 2 < t + r {
        return Err(Error::param("need r >= 2 and k >= t+r-2"));
    }
    let base = rat((t + r) as i64, 2);
    let factor = rat((k + 2 - t - r) as i64, 1);
    let shift = rat((t + r - 2) as i64, 1);
    let floor = decide(
        |tol| Ok(nth_root_interval(&base, r - 1, tol)?.scale(&factor).add_rational(&shift)),
        |iv| iv.floor(),
    )?;
    u32::try_from(floor).map_err(|_| Error::param("threshold out of range"))
}

/// `|A_1(n,k,r,t)|`, or `None` when `A_1` is undefined (`n < t + r`).
fn a1_size(n: u32, k: u32, r: u32, t: u32) -> Result<Option<BigInt>> {
    if n < t + r || k > n {
        return Ok(None);
    }
    size_frankl(&FranklFamilySpec::uniform(n, k, r, t, 1)).map(Some)
}

fn star_size(n: u32, k: u32, t: u32) -> BigInt {
    binom_or_zero(n as i64 - t as i64, k as i64 - t as i64)
}

/// `max_i |A_i(n,k,r,t)|` over every `i` with `t + ri ≤ n`, and the first maximiser.
pub fn max_frankl(n: u32, k: u32, r: u32, t: u32) -> Result<(u32, BigInt)> {
    if k > n || t > n {
        return Err(Error::param("need t <= n and k <= n"));
    }
    let mut best = (0, size_frankl(&FranklFamilySpec::uniform(n, k, r, t, 0))?);
    let mut i = 1;
    while t + r * i <= n {
        let s = size_frankl(&FranklFamilySpec::uniform(n, k, r, t, i))?;
        if s > best.1 {
            best = (i, s);
        }
        i += 1;
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub n: u32,
    pub a1: BigInt,
    pub star: BigInt,
    /// Sign of `|A_1| - C(n-t, k-t)`.
    pub sign: Ordering,
    pub max_frankl: BigInt,
    /// Sign of `max_i |A_i| - C(n-t, k-t)`.
    pub max_sign: Ordering,
    /// Exact optimum when a search was requested and feasible.
    pub optimum: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdScan {
    pub k: u32,
    pub r: u32,
    pub t: u32,
    pub n_from: u32,
    pub n_to: u32,
    pub rows: Vec<ScanRow>,
    /// Every sign was decided by exact integer comparison.
    pub certified: bool,
}

fn sign_char(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "-",
        Ordering::Equal => "0",
        Ordering::Greater => "+",
    }
}

impl ThresholdScan {
    /// Plot data with columns `n,A1,star,sign`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,A1,star,sign\n");
        for row in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", row.n, row.a1, row.star, sign_char(row.sign));
        }
        out
    }

    /// Rows where `A_1` is at least as large as the star.
    pub fn a1_not_smaller(&self) -> impl Iterator<Item = &ScanRow> {
        self.rows.iter().filter(|r| r.sign != Ordering::Less)
    }
}

/// Exact sign of `|A_1(n,k,r,t)| - C(n-t,k-t)` for each `n` in the range at
/// which `A_1` is defined (`n ≥ max(k, t+r)`). When `cfg` is given, the true
/// optimum is added wherever the search is within its cap.
pub fn star_vs_a1_scan(
    k: u32,
    r: u32,
    t: u32,
    n_range: std::ops::RangeInclusive<u32>,
    cfg: Option<&SearchConfig>,
) -> Result<ThresholdScan> {
    if r < 2 || t < 1 {
        return Err(Error::param("need r >= 2 and t >= 1"));
    }
    let mut rows = Vec::new();
    for n in n_range.clone() {
        let Some(a1) = a1_size(n, k, r, t)? else {
            continue;
        };
        let star = star_size(n, k, t);
        let (_, max_frankl) = max_frankl(n, k, r, t)?;
        let optimum = match cfg {
            Some(c) if n <= 64 && binom(n as u64, k as i64) <= BigInt::from(c.cap) => {
                Some(max_uniform(n, k, r, t, false, c)?.optimum)
            }
            _ => None,
        };
        rows.push(ScanRow {
            n,
            sign: a1.cmp(&star),
            max_sign: max_frankl.cmp(&star),
            a1,
            star,
            max_frankl,
            optimum,
        });
    }
    Ok(ThresholdScan {
        k,
        r,
        t,
        n_from: *n_range.start(),
        n_to: *n_range.end(),
        rows,
        certified: true,
    })
}

/// Comparison of the best Frankl family with the full star, and with the
/// true optimum when a search is feasible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FranklVerdict {
    pub best_i: u32,
    pub max_frankl: BigInt,
    pub star: BigInt,
    pub frankl_beats_star: bool,
    pub optimum: Option<BigInt>,
    /// Whether the optimum equals `max_i |A_i|`, when the optimum is known.
    pub frankl_is_optimal: Option<bool>,
}

pub fn max_frankl_vs_star(n: u32, k: u32, r: u32, t: u32, cfg: Option<&SearchConfig>) -> Result<FranklVerdict> {
    let (best_i, max_frankl) = max_frankl(n, k, r, t)?;
    let star = star_size(n, k, t);
    let optimum = match cfg {
        Some(c) if binom(n as u64, k as i64) <= BigInt::from(c.cap) => Some(max_uniform(n, k, r, t, false, c)?.optimum),
        _ => None,
    };
    Ok(FranklVerdict {
        best_i,
        frankl_beats_star: max_frankl > star,
        frankl_is_optimal: optimum.as_ref().map(|o| *o == max_frankl),
        star,
        max_frankl,
        optimum,
    })
}

/// Enclosure of `ρ_t = (√(4t+9) - 1)/2`.
pub fn rho(t: u32, tol: &BigRational) -> Result<RealInterval> {
    let root = nth_root_interval(&rat(4 * t as i64 + 9, 1), 2, tol)?;
    Ok(root.add_rational(&rat(-1, 1)).scale(&rat(1, 2)))
}

/// `⌈ρ_t·k⌉`, computed exactly: `n ≥ ρ_t·k` iff `(2n+k)² ≥ (4t+9)k²`.
pub fn rho_ceil(k: u32, t: u32) -> u32 {
    let (k, d) = (k as u64, 4 * t as u64 + 9);
    let mut n = k;
    while (2 * n + k).pow(2) < d * k * k {
        n += 1;
    }
    n as u32
}

/// `⌊(ρ_t - ε)·k⌋`, decided on interval endpoints.
pub fn rho_minus_eps_floor(k: u32, t: u32, eps: &BigRational) -> Result<u32> {
    let kq = rat(k as i64, 1);
    let shift = -(eps * &kq);
    let floor = decide(|tol| Ok(rho(t, tol)?.scale(&kq).add_rational(&shift)), |iv| iv.floor())?;
    u32::try_from(floor).map_err(|_| Error::param("threshold out of range"))
}

/// Scan of `A_1` against the star for `r = 3` over `n` within `span` of
/// `⌈ρ_t·k⌉`.
pub fn rho_scan(k: u32, t: u32, span: u32, cfg: Option<&SearchConfig>) -> Result<ThresholdScan> {
    let centre = rho_ceil(k, t);
    star_vs_a1_scan(k, 3, t, centre.saturating_sub(span)..=centre + span, cfg)
}

/// One `(k, n)` point where `A_1` is not smaller than the star although
/// `n ≥ ⌈ρ_t k⌉`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarRegimeViolation {
    pub k: u32,
    pub n: u32,
    pub a1: BigInt,
    pub star: BigInt,
}

/// For `r = 3`, checks `|A_1| < C(n-t,k-t)` at every `n` from `⌈ρ_t k⌉`
/// to `n_max`, for each `k` in `ks`. Returns the violations.
pub fn star_regime_violations(
    t: u32,
    ks: std::ops::RangeInclusive<u32>,
    n_max: impl Fn(u32) -> u32,
) -> Result<Vec<StarRegimeViolation>> {
    let mut out = Vec::new();
    for k in ks {
        let scan = star_vs_a1_scan(k, 3, t, rho_ceil(k, t)..=n_max(k), None)?;
        out.extend(scan.a1_not_smaller().map(|row| StarRegimeViolation {
            k,
            n: row.n,
            a1: row.a1.clone(),
            star: row.star.clone(),
        }));
    }
    Ok(out)
}

/// Outcome of the check just below `ρ_t k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct A1RegimeCheck {
    pub n: u32,
    pub a1: BigInt,
    pub star: BigInt,
    pub a1_wins: bool,
}

/// With `0 < ε < 1/10` and `k ≥ (t²+2t)/(2ε)`, compares `|A_1(n,k,3,t)|`
/// with the star at `n = ⌊(ρ_t - ε)k⌋`.
pub fn a1_regime_check(k: u32, t: u32, eps: &BigRational) -> Result<A1RegimeCheck> {
    if !(eps > &BigRational::zero() && eps < &rat(1, 10)) {
        return Err(Error::param("need 0 < eps < 1/10"));
    }
    let k_floor = rat((t * t + 2 * t) as i64, 1) / (eps * rat(2, 1));
    if rat(k as i64, 1) < k_floor {
        return Err(Error::pre(format!("need k >= (t^2+2t)/(2 eps) = {k_floor}")));
    }
    let n = rho_minus_eps_floor(k, t, eps)?;
    let a1 = a1_size(n, k, 3, t)?.ok_or_else(|| Error::pre("A_1 undefined at this n"))?;
    let star = star_size(n, k, t);
    Ok(A1RegimeCheck {
        n,
        a1_wins: a1 > star,
        a1,
        star,
    })
}

/// Labelled exact or certified inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCheck {
    pub label: String,
    pub holds: bool,
}

fn check(label: impl Into<String>, holds: bool) -> ChainCheck {
    ChainCheck {
        label: label.into(),
        holds,
    }
}

/// `value(α) < bound`, certified on interval endpoints.
fn alpha_below(r: u32, f: impl Fn(&RealInterval) -> RealInterval, bound: &BigRational) -> Result<bool> {
    decide(
        |tol| Ok(f(&alpha(r, tol)?)),
        |iv| match iv.cmp_rational(bound) {
            Some(Ordering::Less) => Some(true),
            Some(_) => Some(false),
            None => None,
        },
    )
}

fn b(n: i64, k: i64) -> BigRational {
    BigRational::from_integer(binom_or_zero(n, k))
}

fn q(x: i64, y: i64) -> BigRational {
    rat(x, y)
}

/// The inequality chains bounding each case of the structural argument for
/// `m(2k, k, 4, 3)` (with `α_3`, `α_4` bounds and binomial identities at
/// `n = 2k`). Binomial steps are checked for every `k` in `ks` from the least
/// `k` at which the step is used: 11 for the 3-wise 8-intersecting case and
/// 9 for the 3-wise 7-intersecting case, where smaller `k` forces a star.
pub fn case_bound_chains(ks: std::ops::RangeInclusive<u32>) -> Result<Vec<ChainCheck>> {
    let mut out = Vec::new();
    let one = BigRational::one();

    out.push(check("3·α_3^3 < 1", alpha_below(3, |a| a.pow(3).scale(&q(3, 1)), &one)?));
    out.push(check("α_3^5 < 0.0902", alpha_below(3, |a| a.pow(5), &q(902, 10_000))?));
    out.push(check("α_3^3 < 0.24", alpha_below(3, |a| a.pow(3), &q(24, 100))?));
    out.push(check(
        "α_3^8·(19/8)^4 < 1",
        alpha_below(3, |a| a.pow(8).scale(&(q(19, 8) * q(19, 8) * q(19, 8) * q(19, 8))), &one)?,
    ));
    out.push(check("4·α_4^4 < 4/11", alpha_below(4, |a| a.pow(4).scale(&q(4, 1)), &q(4, 11))?));
    out.push(check("4/11 < 1", q(4, 11) < one));
    out.push(check("14·α_4^6 < 1", alpha_below(4, |a| a.pow(6).scale(&q(14, 1)), &one)?));
    out.push(check("(14/11^1.5)^2 = 196/1331 < 1", q(196, 1331) < one));
    out.push(check("α_4 < 0.9", alpha_below(4, |a| a.clone(), &q(9, 10))?));
    out.push(check(
        "18·α_4^5 < (18/11)·α_4",
        alpha_below(4, |a| a.pow(4).scale(&q(11, 1)), &one)?,
    ));
    out.push(check("18/11 < 2", q(18, 11) < q(2, 1)));
    out.push(check("34·α_4^9 < 17/72", alpha_below(4, |a| a.pow(9).scale(&q(34, 1)), &q(17, 72))?));
    out.push(check("34/11^2·(1/2+1/16) < 17/72 < 0.6", {
        let v = q(34, 121) * (q(1, 2) + q(1, 16));
        v < q(17, 72) && q(17, 72) < q(6, 10)
    }));

    // `from` is the least k at which the step is used.
    let mut per_k = |label: &str, from: u32, f: &dyn Fn(i64) -> bool| {
        let range = (*ks.start()).max(from)..=*ks.end();
        let bad: Vec<u32> = range.clone().filter(|&k| !f(k as i64)).collect();
        out.push(check(
            if bad.is_empty() {
                format!("{label} for k in {}..={}", range.start(), range.end())
            } else {
                format!("{label} fails at k = {bad:?}")
            },
            bad.is_empty(),
        ));
    };
    per_k("C(2k-3,k-3)/C(2k,k) = (k-2)/(4(2k-1))", 7, &|k| {
        b(2 * k - 3, k - 3) / b(2 * k, k) == q(k - 2, 4 * (2 * k - 1))
    });
    per_k("0.0902·4·(2k-1)/(k-2) < 1", 7, &|k| q(902, 10_000) * q(4 * (2 * k - 1), k - 2) < one);
    per_k("4·C(n-8,k-7) = 4(k-5)(k-6)/((n-6)(n-7))·C(n-6,k-5) < C(n-6,k-5)", 7, &|k| {
        let n = 2 * k;
        let lhs = b(n - 8, k - 7) * q(4, 1);
        let mid = q(4 * (k - 5) * (k - 6), (n - 6) * (n - 7)) * b(n - 6, k - 5);
        lhs == mid && mid < b(n - 6, k - 5)
    });
    per_k("C(n-6,k-6) + C(n-6,k-4) + 2·C(n-6,k-5) = C(n-4,k-4)", 7, &|k| {
        let n = 2 * k;
        b(n - 6, k - 6) + b(n - 6, k - 4) + q(2, 1) * b(n - 6, k - 5) == b(n - 4, k - 4)
    });
    per_k("C(2k,k) < ((2k-3)/(k-3))^4·C(2k-4,k-4) with (2k-3)/(k-3) <= 19/8", 11, &|k| {
        let ratio = q(2 * k - 3, k - 3);
        b(2 * k, k) < ratio.clone() * ratio.clone() * ratio.clone() * ratio.clone() * b(2 * k - 4, k - 4)
            && ratio <= q(19, 8)
    });
    per_k("4·C(n-8,k-7) < 3.4·(k-6)/(n-7)·C(n-7,k-6) + 0.6·C(n-7,k-7)", 9, &|k| {
        let n = 2 * k;
        q(4, 1) * b(n - 8, k - 7) < q(34, 10) * q(k - 6, n - 7) * b(n - 7, k - 6) + q(6, 10) * b(n - 7, k - 7)
    });
    per_k("3.4·(k-6)/(2k-7) < 1.8", 9, &|k| q(34, 10) * q(k - 6, 2 * k - 7) < q(18, 10));
    per_k(
        "0.24·C(n-4,k-4) + 0.6·Σ_j C(3,j)·C(n-7,k-4-j) = 0.84·C(n-4,k-4)",
        9,
        &|k| {
            let n = 2 * k;
            let sum = b(n - 7, k - 4) + q(3, 1) * b(n - 7, k - 5) + q(3, 1) * b(n - 7, k - 6) + b(n - 7, k - 7);
            q(24, 100) * b(n - 4, k - 4) + q(6, 10) * sum == q(84, 100) * b(n - 4, k - 4)
        },
    );
    Ok(out)
}
