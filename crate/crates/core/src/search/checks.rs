//! Exhaustive checks built on the uniform search.

use crate::error::{Error, Result};
use crate::exactmath::{binom, BigInt};
use crate::setfamilies::{is_t_star, Family};
use crate::shifting::is_saturated;

use super::engine::{for_each_family, Universe};
use super::{check_rt, max_uniform, SearchConfig};

/// The three optima compared by [`verify_deletion_recursion`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionRecursion {
    pub whole: BigInt,
    pub without_n: BigInt,
    pub with_n: BigInt,
    pub holds: bool,
}

fn optimum_or_zero(n: u32, k: u32, r: u32, t: u32, cfg: &SearchConfig) -> Result<BigInt> {
    if k > n {
        return Ok(BigInt::from(0));
    }
    Ok(max_uniform(n, k, r, t, false, cfg)?.optimum)
}

/// Checks `m(n,k,r,t) ≤ m(n-1,k,r,t) + m(n-1,k-1,r,t)` by three exact
/// searches. Needs `(r-1)·n > r·k - t`.
pub fn verify_deletion_recursion(n: u32, k: u32, r: u32, t: u32, cfg: &SearchConfig) -> Result<DeletionRecursion> {
    check_rt(r, t)?;
    if k == 0 || n < 2 {
        return Err(Error::param("need k >= 1 and n >= 2"));
    }
    if (r as i64 - 1) * n as i64 <= r as i64 * k as i64 - t as i64 {
        return Err(Error::pre(format!(
            "need (r-1)n > rk-t, got n={n}, k={k}, r={r}, t={t}"
        )));
    }
    let whole = optimum_or_zero(n, k, r, t, cfg)?;
    let without_n = optimum_or_zero(n - 1, k, r, t, cfg)?;
    let with_n = optimum_or_zero(n - 1, k - 1, r, t, cfg)?;
    let holds = whole <= &without_n + &with_n;
    Ok(DeletionRecursion {
        whole,
        without_n,
        with_n,
        holds,
    })
}

/// Largest `C(n,k)` for which every intersecting family is enumerated.
pub const MAX_MAXIMAL_SCAN: u64 = 28;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalScan {
    pub maximal_families: u64,
    pub non_star_maximal: u64,
    pub holds: bool,
    pub counterexample: Option<Family>,
}

/// Enumerates every maximal `r`-wise `t`-intersecting `k`-uniform family on
/// `[n]` and checks that each one that is not a `t`-star has `k ≥ t+r`, or
/// `k = t+r-1` with all members inside one `(k+1)`-set.
pub fn scan_maximal_families(n: u32, k: u32, r: u32, t: u32) -> Result<MaximalScan> {
    check_rt(r, t)?;
    if k > n || n > 64 {
        return Err(Error::param(format!("need k <= n <= 64, got k={k}, n={n}")));
    }
    let total = binom(n as u64, k as i64);
    if total > BigInt::from(MAX_MAXIMAL_SCAN) {
        return Err(Error::CapExceeded {
            what: "C(n,k) for maximal-family enumeration".into(),
            value: u128::try_from(total).unwrap_or(u128::MAX),
            cap: MAX_MAXIMAL_SCAN as u128,
        });
    }
    let u = Universe::free(n, k, t);
    let mut scan = MaximalScan {
        maximal_families: 0,
        non_star_maximal: 0,
        holds: true,
        counterexample: None,
    };
    let complete = for_each_family(&u, r, t, 50_000_000, &mut |members| {
        let fam = Family::uniform(n, k, members.iter().copied()).expect("members are k-sets of [n]");
        if fam.is_empty() || !is_saturated(&fam, r, t) {
            return;
        }
        scan.maximal_families += 1;
        if is_t_star(&fam, t) {
            return;
        }
        scan.non_star_maximal += 1;
        let ok = k >= t + r || (k + 1 == t + r && fam.support().len() <= k + 1);
        if !ok && scan.holds {
            scan.holds = false;
            scan.counterexample = Some(fam);
        }
    });
    if !complete {
        return Err(Error::CapExceeded {
            what: "families enumerated".into(),
            value: 50_000_000,
            cap: 50_000_000,
        });
    }
    Ok(scan)
}

/// Boolean form of [`scan_maximal_families`].
pub fn check_non_star_maximal(n: u32, k: u32, r: u32, t: u32) -> Result<bool> {
    Ok(scan_maximal_families(n, k, r, t)?.holds)
}

/// Every shifted `r`-wise `t`-intersecting family on the given universe,
/// for exhaustive structural checks.
pub(crate) fn shifted_families(n: u32, k: u32, r: u32, t: u32, limit: u64) -> Result<Vec<Family>> {
    check_rt(r, t)?;
    let u = Universe::shifted(n, k, r, t);
    let mut out = Vec::new();
    let complete = for_each_family(&u, r, t, limit, &mut |m| {
        out.push(Family::uniform(n, k, m.iter().copied()).expect("members are k-sets of [n]"));
    });
    if !complete {
        return Err(Error::CapExceeded {
            what: "shifted families enumerated".into(),
            value: limit as u128,
            cap: limit as u128,
        });
    }
    Ok(out)
}
