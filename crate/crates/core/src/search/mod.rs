//! Exact maxima of `r`-wise `t`-intersecting families at desk scale.

mod checks;
mod engine;
mod nonuniform;

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::exactmath::{binom, BigInt};
use crate::lattice::{count_hitting_paths, shifted_bound, LatticeLine};
use crate::setfamilies::{is_rwise_t_intersecting, is_t_star, Family};
use crate::walks::prob_bound_alpha_floor;

pub use checks::{
    check_non_star_maximal, scan_maximal_families, verify_deletion_recursion, DeletionRecursion, MaximalScan, MAX_MAXIMAL_SCAN,
};
pub(crate) use checks::shifted_families;
pub use nonuniform::{max_nonuniform, MAX_NONUNIFORM_SEARCH_N};

use engine::{Restriction, Search, Universe};

/// Default cap on `C(n, k)` for uniform searches.
pub const DEFAULT_CAP: u64 = 300;

/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "INTERSECTLAB_CAP";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest `C(n, k)` a uniform search will accept.
    pub cap: u64,
    /// Restrict unrestricted searches to shifted families.
    pub shift_reduction: bool,
    /// Node budget for deciding whether every optimum is a `t`-star; zero skips the check.
    pub star_check_node_cap: u64,
    /// Optional node budget for the main search; exceeding it is an error.
    pub node_cap: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            cap: DEFAULT_CAP,
            shift_reduction: true,
            star_check_node_cap: 50_000_000,
            node_cap: None,
        }
    }
}

impl SearchConfig {
    /// Defaults with the cap taken from `INTERSECTLAB_CAP` when set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = SearchConfig::default();
        if let Ok(v) = std::env::var(CAP_ENV) {
            cfg.cap = v
                .trim()
                .parse()
                .map_err(|_| Error::param(format!("{CAP_ENV} must be a positive integer, got {v:?}")))?;
            if cfg.cap == 0 {
                return Err(Error::param(format!("{CAP_ENV} must be positive")));
            }
        }
        Ok(cfg)
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn without_star_check(mut self) -> Self {
        self.star_check_node_cap = 0;
        self
    }

    pub fn without_shift_reduction(mut self) -> Self {
        self.shift_reduction = false;
        self
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub n: u32,
    /// `None` for searches over all subsets of `[n]`.
    pub k: Option<u32>,
    pub r: u32,
    pub t: u32,
    pub nontrivial: bool,
    pub optimum: BigInt,
    pub witness: Family,
    /// `None` when the check ran out of budget or does not apply.
    pub all_optima_are_t_stars: Option<bool>,
    pub nodes_explored: u64,
    /// The optimum is the empty family.
    pub empty: bool,
    /// `k < t`: no `k`-set can be `t`-intersecting with anything.
    pub infeasible: bool,
    pub wall_time: Duration,
}

pub(crate) fn check_rt(r: u32, t: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::param(format!("need r >= 2, got {r}")));
    }
    if t < 1 {
        return Err(Error::param("need t >= 1"));
    }
    Ok(())
}

fn check_cap(n: u32, k: u32, cfg: &SearchConfig) -> Result<()> {
    if n > 64 {
        return Err(Error::param(format!("ground set of {n} exceeds 64")));
    }
    if k > n {
        return Err(Error::param(format!("k = {k} exceeds n = {n}")));
    }
    let total = binom(n as u64, k as i64);
    if total > BigInt::from(cfg.cap) {
        return Err(Error::CapExceeded {
            what: "C(n,k)".into(),
            value: u128::try_from(total).unwrap_or(u128::MAX),
            cap: cfg.cap as u128,
        });
    }
    Ok(())
}

/// Smallest certified upper bound on `m(n,k,r,t)` among: sets whose path
/// touches the line, the shifted-family bound, and `α_r^t·C(n,k)`.
pub fn certified_ceiling(n: u32, k: u32, r: u32, t: u32) -> Result<BigInt> {
    let line = LatticeLine::new(r, t)?;
    let mut best = count_hitting_paths(n, k, line)?;
    if r >= 3 && n + t >= 2 * k {
        if let Ok(b) = shifted_bound(n, k, r, t) {
            best = best.min(b);
        }
    }
    if r >= 3 && n >= 2 * k {
        best = best.min(prob_bound_alpha_floor(n, k, r, t)?);
    }
    Ok(best)
}

fn to_usize(x: &BigInt) -> usize {
    usize::try_from(x).unwrap_or(usize::MAX)
}

/// `m(n,k,r,t)`, or `m*(n,k,r,t)` when `nontrivial` (families with empty
/// common intersection), with a witness and a structure flag.
pub fn max_uniform(n: u32, k: u32, r: u32, t: u32, nontrivial: bool, cfg: &SearchConfig) -> Result<SearchReport> {
    check_rt(r, t)?;
    check_cap(n, k, cfg)?;
    let started = Instant::now();
    let mut report = SearchReport {
        n,
        k: Some(k),
        r,
        t,
        nontrivial,
        optimum: BigInt::from(0),
        witness: Family::empty(n),
        all_optima_are_t_stars: None,
        nodes_explored: 0,
        empty: true,
        infeasible: k < t,
        wall_time: Duration::ZERO,
    };
    if k < t {
        report.witness = Family::uniform(n, k, [])?;
        report.wall_time = started.elapsed();
        return Ok(report);
    }

    let ceiling = to_usize(&certified_ceiling(n, k, r, t)?);
    let outcome = if nontrivial {
        let u = Universe::free(n, k, t);
        Search::new(&u, r, t, Restriction::CommonBelow(1))
            .with_ceiling(ceiling)
            .with_node_cap(cfg.node_cap)
            .run(true)
    } else if cfg.shift_reduction {
        let u = Universe::shifted(n, k, r, t);
        Search::new(&u, r, t, Restriction::None)
            .with_ceiling(ceiling)
            .with_node_cap(cfg.node_cap)
            .run(false)
    } else {
        let u = Universe::free(n, k, t);
        Search::new(&u, r, t, Restriction::None)
            .with_ceiling(ceiling)
            .with_node_cap(cfg.node_cap)
            .run(true)
    };
    if outcome.aborted {
        return Err(Error::CapExceeded {
            what: "search nodes".into(),
            value: outcome.nodes as u128,
            cap: cfg.node_cap.unwrap_or(u64::MAX) as u128,
        });
    }
    report.nodes_explored = outcome.nodes;
    report.optimum = BigInt::from(outcome.best);
    report.empty = outcome.best == 0;
    report.witness = Family::uniform(n, k, outcome.witness)?;
    debug_assert!(is_rwise_t_intersecting(&report.witness, r, t));

    report.all_optima_are_t_stars = if nontrivial {
        (!report.empty).then_some(false)
    } else if report.empty {
        Some(true)
    } else if !is_t_star(&report.witness, t) {
        Some(false)
    } else if cfg.star_check_node_cap == 0 {
        None
    } else {
        // Look for an equally large family whose common part has fewer than t points.
        let u = Universe::free(n, k, t);
        let probe = Search::new(&u, r, t, Restriction::CommonBelow(t))
            .with_floor(outcome.best - 1)
            .with_ceiling(outcome.best)
            .with_node_cap(Some(cfg.star_check_node_cap))
            .run(true);
        report.nodes_explored += probe.nodes;
        if probe.best >= outcome.best && !probe.witness.is_empty() {
            Some(false)
        } else if probe.aborted {
            None
        } else {
            Some(true)
        }
    };
    report.wall_time = started.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfamilies::{common_intersection, k_subsets, Subset};

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    /// Exhaustive optimum over all subfamilies of the `k`-sets (tiny cases only).
    fn brute_max(n: u32, k: u32, r: u32, t: u32, nontrivial: bool) -> usize {
        let sets: Vec<Subset> = k_subsets(n, k).collect();
        assert!(sets.len() <= 16);
        let mut best = 0;
        for mask in 0u32..(1 << sets.len()) {
            let members: Vec<Subset> = (0..sets.len()).filter(|i| mask >> i & 1 == 1).map(|i| sets[i]).collect();
            if members.len() <= best {
                continue;
            }
            let fam = Family::uniform(n, k, members).unwrap();
            if !is_rwise_t_intersecting(&fam, r, t) {
                continue;
            }
            if nontrivial && !common_intersection(&fam).unwrap().is_empty() {
                continue;
            }
            best = fam.len();
        }
        best
    }

    #[test]
    fn listed_examples() {
        let a = max_uniform(6, 2, 2, 1, false, &cfg()).unwrap();
        assert_eq!(a.optimum, BigInt::from(5));
        let b = max_uniform(7, 3, 3, 2, false, &cfg()).unwrap();
        assert_eq!(b.optimum, BigInt::from(5));
        assert_eq!(b.all_optima_are_t_stars, Some(true));
        // Below r·k/(r-1) with t = 1 every k-set fits.
        let c = max_uniform(4, 3, 3, 1, false, &cfg()).unwrap();
        assert_eq!(c.optimum, BigInt::from(4));
        let d = max_uniform(5, 3, 3, 1, false, &cfg()).unwrap();
        assert_eq!(d.optimum, BigInt::from(6));
    }

    #[test]
    fn small_cases_match_exhaustive_enumeration() {
        for n in 2..=6u32 {
            for k in 1..=n {
                if binom(n as u64, k as i64) > BigInt::from(16) {
                    continue;
                }
                for r in 2..=4 {
                    for t in 1..=3 {
                        for nontrivial in [false, true] {
                            let expect = brute_max(n, k, r, t, nontrivial);
                            let rep = max_uniform(n, k, r, t, nontrivial, &cfg()).unwrap();
                            assert_eq!(rep.optimum, BigInt::from(expect), "n={n} k={k} r={r} t={t} nt={nontrivial}");
                            assert_eq!(rep.witness.len(), expect);
                            assert!(is_rwise_t_intersecting(&rep.witness, r, t));
                            if nontrivial && expect > 0 {
                                assert!(common_intersection(&rep.witness).unwrap().is_empty());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn shifted_reduction_agrees_with_full_search() {
        let full = cfg().without_shift_reduction();
        for n in 2..=9u32 {
            for k in 1..=n {
                if binom(n as u64, k as i64) > BigInt::from(60) {
                    continue;
                }
                for r in 2..=4 {
                    for t in 1..=3 {
                        let a = max_uniform(n, k, r, t, false, &cfg()).unwrap();
                        let b = max_uniform(n, k, r, t, false, &full).unwrap();
                        assert_eq!(a.optimum, b.optimum, "n={n} k={k} r={r} t={t}");
                        assert!(is_rwise_t_intersecting(&b.witness, r, t));
                    }
                }
            }
        }
    }

    #[test]
    fn optimum_respects_certified_bounds() {
        for n in 4..=10u32 {
            for k in 2..=n / 2 {
                for (r, t) in [(3, 1), (3, 2), (4, 2), (3, 3)] {
                    if binom(n as u64, k as i64) > BigInt::from(120) || k < t {
                        continue;
                    }
                    let rep = max_uniform(n, k, r, t, false, &cfg()).unwrap();
                    let line = LatticeLine::new(r, t).unwrap();
                    assert!(rep.optimum <= count_hitting_paths(n, k, line).unwrap());
                    if n + t >= 2 * k {
                        assert!(rep.optimum <= shifted_bound(n, k, r, t).unwrap());
                    }
                    if n >= 2 * k {
                        assert!(rep.optimum <= prob_bound_alpha_floor(n, k, r, t).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn infeasible_and_capped() {
        let r = max_uniform(6, 1, 3, 2, false, &cfg()).unwrap();
        assert!(r.infeasible && r.empty);
        assert_eq!(r.optimum, BigInt::from(0));
        assert!(matches!(
            max_uniform(12, 6, 3, 2, false, &cfg()),
            Err(Error::CapExceeded { .. })
        ));
        assert!(max_uniform(6, 3, 1, 1, false, &cfg()).is_err());
        assert!(max_uniform(6, 3, 3, 0, false, &cfg()).is_err());
    }

    #[test]
    fn optimum_in_n_is_monotone_and_density_falls() {
        for (k, r, t) in [(3, 3, 2), (3, 3, 1), (4, 3, 2), (3, 4, 2)] {
            let mut prev: Option<BigInt> = None;
            let mut prev_density: Option<crate::BigRational> = None;
            for n in 2 * k..=10 {
                let rep = max_uniform(n, k, r, t, false, &cfg()).unwrap();
                let density = crate::BigRational::new(rep.optimum.clone(), binom(n as u64, k as i64));
                if let Some(p) = &prev {
                    assert!(rep.optimum >= *p);
                }
                if let Some(d) = &prev_density {
                    assert!(density <= *d);
                }
                prev = Some(rep.optimum);
                prev_density = Some(density);
            }
        }
    }
}
