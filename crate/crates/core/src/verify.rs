//! Named acceptance suites. Each suite runs one finite, exact check and
//! reports a single pass/fail verdict with a short detail line.

use std::cmp::Ordering;
use std::fmt;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canonical::{build_frankl, FranklFamilySpec};
use crate::error::{Error, Result};
use crate::exactmath::{binom, decide, rat, ten_pow_neg, BigInt, BigRational};
use crate::lattice::{count_hitting_paths, g_uniform, hits_line_by_walk, LatticeLine};
use crate::search::{max_nonuniform, max_uniform, shifted_families, verify_deletion_recursion, SearchConfig};
use crate::setfamilies::{is_rwise_t_intersecting, k_subsets, Family, Subset};
use crate::shadows::{lower_shadow, shadow_bound};
use crate::shifting::{is_fixed_by_all_shifts, is_shifted, shift, shift_to_fixpoint, witness_s, ShiftStep};
use crate::thresholds::{a1_regime_check, case_bound_chains, rho_ceil, star_regime_violations};
use crate::walks::{alpha, alpha3_closed_form, f_finite, gamma_root, WalkParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} [{}]: {} - {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

pub struct Suite {
    pub id: u8,
    pub name: &'static str,
    run: fn() -> Result<(bool, String)>,
}

impl Suite {
    pub fn run(&self) -> CriterionResult {
        let (passed, detail) = match (self.run)() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        CriterionResult {
            id: self.id,
            name: self.name,
            passed,
            detail,
        }
    }
}

/// All suites in order.
pub const SUITES: &[Suite] = &[
    Suite { id: 1, name: "two-star-optimality", run: two_star_optimality },
    Suite { id: 2, name: "intersecting-dichotomy", run: intersecting_dichotomy },
    Suite { id: 3, name: "four-wise-three-intersecting", run: four_wise_three_intersecting },
    Suite { id: 4, name: "lattice-path-oracle", run: lattice_path_oracle },
    Suite { id: 5, name: "uniform-walk-monotonicity", run: uniform_walk_monotonicity },
    Suite { id: 6, name: "walk-root-bounds", run: walk_root_bounds },
    Suite { id: 7, name: "total-probability", run: total_probability },
    Suite { id: 8, name: "a1-versus-star", run: a1_versus_star },
    Suite { id: 9, name: "nonuniform-maxima", run: nonuniform_maxima },
    Suite { id: 10, name: "shadow-bounds", run: shadow_bounds },
    Suite { id: 11, name: "shifting-suite", run: shifting_suite },
    Suite { id: 12, name: "deletion-recursion", run: deletion_recursion },
];

/// Names accepted by [`run_suite`], besides `all`.
pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// Runs one suite by name or number, or every suite for `all`.
pub fn run_suite(name: &str) -> Result<Vec<CriterionResult>> {
    if name == "all" {
        return Ok(SUITES.iter().map(Suite::run).collect());
    }
    let suite = SUITES
        .iter()
        .find(|s| s.name == name || s.id.to_string() == name)
        .ok_or_else(|| Error::param(format!("unknown suite {name:?}; known: all, {}", suite_names().join(", "))))?;
    Ok(vec![suite.run()])
}

fn quiet() -> SearchConfig {
    SearchConfig::default().without_star_check()
}

fn first_failures(fails: &[String]) -> String {
    let shown: Vec<&str> = fails.iter().take(5).map(String::as_str).collect();
    format!("{} failure(s), e.g. {}", fails.len(), shown.join("; "))
}

fn verdict(checked: usize, what: &str, fails: Vec<String>) -> (bool, String) {
    if fails.is_empty() {
        (true, format!("{checked} {what}"))
    } else {
        (false, first_failures(&fails))
    }
}

/// `m(n,k,3,2) = C(n-2,k-2)` with only full 2-stars optimal, `2 ≤ k ≤ 5`, `2k < n ≤ 10`.
fn two_star_optimality() -> Result<(bool, String)> {
    let cfg = SearchConfig::default();
    let mut fails = Vec::new();
    let mut checked = 0;
    for k in 2..=5u32 {
        for n in 2 * k + 1..=10 {
            let rep = max_uniform(n, k, 3, 2, false, &cfg)?;
            let want = binom(n as u64 - 2, k as i64 - 2);
            checked += 1;
            if rep.optimum != want || rep.all_optima_are_t_stars != Some(true) {
                fails.push(format!(
                    "n={n} k={k}: optimum {} (want {want}), all stars {:?}",
                    rep.optimum, rep.all_optima_are_t_stars
                ));
            }
        }
    }
    Ok(verdict(checked, "points: optimum is C(n-2,k-2) and every optimum is a full 2-star", fails))
}

/// `m(n,k,r,1)` is `C(n-1,k-1)` when `(r-1)n ≥ rk` and `C(n,k)` otherwise.
fn intersecting_dichotomy() -> Result<(bool, String)> {
    let cfg = quiet();
    let mut fails = Vec::new();
    let mut checked = 0;
    for r in 2..=4u32 {
        for k in 1..=4u32 {
            for n in 4..=10u32 {
                let rep = max_uniform(n, k, r, 1, false, &cfg)?;
                let want = if (r - 1) * n >= r * k {
                    binom(n as u64 - 1, k as i64 - 1)
                } else {
                    binom(n as u64, k as i64)
                };
                checked += 1;
                if rep.optimum != want {
                    fails.push(format!("r={r} k={k} n={n}: {} vs {want}", rep.optimum));
                }
            }
        }
    }
    Ok(verdict(checked, "points match exactly", fails))
}

/// `m(2k,k,4,3) = C(2k-3,k-3)` at `k = 7` (cap raised to `C(14,7)`), plus
/// the closed-form case-bound chains.
fn four_wise_three_intersecting() -> Result<(bool, String)> {
    let k = 7u32;
    let n = 2 * k;
    let cfg = quiet().with_cap(u64::try_from(binom(n as u64, k as i64)).expect("small"));
    let rep = max_uniform(n, k, 4, 3, false, &cfg)?;
    let want = binom(n as u64 - 3, k as i64 - 3);
    let chains = case_bound_chains(7..=60)?;
    let bad: Vec<&str> = chains.iter().filter(|c| !c.holds).map(|c| c.label.as_str()).collect();
    let ok = rep.optimum == want && bad.is_empty();
    Ok((
        ok,
        format!(
            "m({n},{k},4,3) = {} (want {want}), nodes_explored = {}, cap raised to {}; {} of {} case-bound inequalities hold{}",
            rep.optimum,
            rep.nodes_explored,
            cfg.cap,
            chains.len() - bad.len(),
            chains.len(),
            if bad.is_empty() { String::new() } else { format!(", failing: {bad:?}") }
        ),
    ))
}

/// Path-count DP against direct enumeration.
fn lattice_path_oracle() -> Result<(bool, String)> {
    let mut fails = Vec::new();
    let mut checked = 0;
    for r in 3..=5u32 {
        for t in 1..=4u32 {
            let line = LatticeLine::new(r, t)?;
            for n in 0..=14u32 {
                for k in 0..=n {
                    let brute = k_subsets(n, k).filter(|&f| hits_line_by_walk(f, n, line)).count();
                    let dp = count_hitting_paths(n, k, line)?;
                    checked += 1;
                    if dp != BigInt::from(brute) {
                        fails.push(format!("n={n} k={k} r={r} t={t}: {dp} vs {brute}"));
                    }
                }
            }
        }
    }
    Ok(verdict(checked, "counts agree", fails))
}

/// `g(n,i) ≤ g(n,i+1)`, `g(n+1,k) ≤ g(n,k)`, and `g(2k,k) ≤ g(2k+2,k+1)`.
fn uniform_walk_monotonicity() -> Result<(bool, String)> {
    let mut fails = Vec::new();
    let mut checked = 0;
    for r in 2..=5u32 {
        for t in 1..=4u32 {
            let line = LatticeLine::new(r, t)?;
            for n in 1..=20u32 {
                for i in 0..n {
                    checked += 1;
                    if g_uniform(n, i, line)? > g_uniform(n, i + 1, line)? {
                        fails.push(format!("in i: n={n} i={i} r={r} t={t}"));
                    }
                }
                for k in 0..=n {
                    checked += 1;
                    if g_uniform(n + 1, k, line)? > g_uniform(n, k, line)? {
                        fails.push(format!("in n: n={n} k={k} r={r} t={t}"));
                    }
                }
            }
            if r >= 3 && t >= 2 {
                for k in 1..=12u32 {
                    checked += 1;
                    if g_uniform(2 * k, k, line)? > g_uniform(2 * k + 2, k + 1, line)? {
                        fails.push(format!("central: k={k} r={r} t={t}"));
                    }
                }
            }
        }
    }
    Ok(verdict(checked, "exact comparisons hold", fails))
}

/// `γ_3(1/2)` brackets `(√5-1)/2` within `10^-12`; `1/(2^r-r) < α_r^r ≤ 1/(2^r-r-1)`.
fn walk_root_bounds() -> Result<(bool, String)> {
    let tol = ten_pow_neg(12);
    let g = gamma_root(3, &rat(1, 2), &tol)?;
    let closed = alpha3_closed_form(&ten_pow_neg(30))?;
    let brackets = g.lo() <= closed.lo() && closed.hi() <= g.hi() && g.width() <= tol;
    let mut fails = Vec::new();
    for r in 3..=16u32 {
        let lower = rat(1, (1i64 << r) - r as i64);
        let upper = rat(1, (1i64 << r) - r as i64 - 1);
        let above = decide(|tol| Ok(alpha(r, tol)?.pow(r)), |iv| iv.cmp_rational(&lower))?;
        let below = decide(|tol| Ok(alpha(r, tol)?.pow(r)), |iv| iv.cmp_rational(&upper))?;
        if above != Ordering::Greater || below == Ordering::Greater {
            fails.push(format!("r={r}"));
        }
    }
    Ok((
        brackets && fails.is_empty(),
        format!(
            "gamma(3,1/2) in [{}, {}] (width {}), contains (sqrt5-1)/2: {brackets}; alpha_r^r bounds for r=3..16: {}",
            crate::exactmath::rational_to_decimal(g.lo(), 15),
            crate::exactmath::rational_to_decimal(g.hi(), 15),
            crate::exactmath::rational_to_decimal(&g.width(), 15),
            if fails.is_empty() { "all certified".to_string() } else { format!("failing {fails:?}") }
        ),
    ))
}

/// `f(n,r,t,1/2) = Σ_k C(n,k)·g(n,k,r,t)/2^n`.
fn total_probability() -> Result<(bool, String)> {
    let mut fails = Vec::new();
    let mut checked = 0;
    for r in 3..=4u32 {
        for t in 1..=3u32 {
            let line = LatticeLine::new(r, t)?;
            let params = WalkParams::new(r, t as i64, rat(1, 2))?;
            for n in 0..=16u32 {
                let direct = f_finite(n, &params);
                let mut mixed = BigRational::from_integer(BigInt::from(0));
                for k in 0..=n {
                    mixed += g_uniform(n, k, line)? * BigRational::from_integer(binom(n as u64, k as i64));
                }
                mixed /= BigRational::from_integer(BigInt::one() << n as usize);
                checked += 1;
                if direct != mixed {
                    fails.push(format!("n={n} r={r} t={t}"));
                }
            }
        }
    }
    Ok(verdict(checked, "identities hold exactly", fails))
}

/// Star regime above `⌈ρ_t k⌉` for `t ≤ 4`, `k ≤ 40`, and the `A_1` regime
/// at `t = 2`, `k = 80`, `ε = 1/20`.
fn a1_versus_star() -> Result<(bool, String)> {
    let mut per_t = Vec::new();
    let mut total = 0;
    for t in 1..=4u32 {
        let v = star_regime_violations(t, t..=40, |k| 6 * k + 20)?;
        total += v.len();
        if !v.is_empty() {
            let shown: Vec<String> = v
                .iter()
                .take(4)
                .map(|x| format!("(k={}, n={}: {} vs {})", x.k, x.n, x.a1, x.star))
                .collect();
            per_t.push(format!("t={t}: {} counterexample(s) {}", v.len(), shown.join(" ")));
        }
    }
    let b = a1_regime_check(80, 2, &rat(1, 20))?;
    let part_a = if total == 0 {
        "(a) holds for t=1..4, k<=40".to_string()
    } else {
        format!("(a) fails: {}", per_t.join("; "))
    };
    Ok((
        total == 0 && b.a1_wins,
        format!(
            "{part_a}; (b) at n={} (ceil(rho k)={}): |A_1|={} vs star={}: {}",
            b.n,
            rho_ceil(80, 2),
            b.a1,
            b.star,
            if b.a1_wins { "A_1 larger" } else { "A_1 not larger" }
        ),
    ))
}

/// `m(5,3,2) = 8`, `m(4,2,1) = 8`, `m*(5,3,1) = (t+r+1)·2^{n-t-r} = 10`.
fn nonuniform_maxima() -> Result<(bool, String)> {
    let a = max_nonuniform(5, 3, 2, false)?.optimum;
    let b = max_nonuniform(4, 2, 1, false)?.optimum;
    let c = max_nonuniform(5, 3, 1, true)?;
    let formula = BigInt::from((1 + 3 + 1) * (1u32 << (5 - 1 - 3)));
    let ok = a == BigInt::from(8) && b == BigInt::from(8) && c.optimum == formula;
    Ok((
        ok,
        format!("m(5,3,2)={a}, m(4,2,1)={b}, m*(5,3,1)={} (formula {formula})", c.optimum),
    ))
}

/// Shadow lower bound on every search witness with `n ≤ 9`, and the
/// factor-4 bound on `∂^{(2)}` for 3-wise 4-intersecting families.
fn shadow_bounds() -> Result<(bool, String)> {
    let cfg = quiet();
    let mut fams: Vec<(Family, u32, u32)> = Vec::new();
    for n in 1..=9u32 {
        for k in 1..=n {
            for r in 2..=4u32 {
                for t in 1..=k.min(4) {
                    let rep = max_uniform(n, k, r, t, false, &cfg)?;
                    if !rep.empty {
                        fams.push((rep.witness, r, t));
                    }
                }
            }
        }
    }
    for (n, k) in [(7, 5), (8, 5), (8, 6), (9, 6)] {
        for f in shifted_families(n, k, 3, 4, 5_000_000)? {
            if !f.is_empty() {
                fams.push((f, 3, 4));
            }
        }
    }
    let mut fails = Vec::new();
    let mut factor_four = 0;
    for (f, r, t) in &fams {
        let k = f.uniform_k().expect("uniform");
        let size = BigInt::from(f.len());
        for b in 1..=(*t).min(k) {
            let shadow = BigInt::from(lower_shadow(f, b)?.len());
            if BigRational::from_integer(shadow.clone()) < shadow_bound(&size, k, *r, *t, b)? {
                fails.push(format!("n={} k={k} r={r} t={t} b={b}", f.ground_n()));
            }
            if *r == 3 && *t == 4 && b == 2 {
                factor_four += 1;
                if shadow <= &size * 4 {
                    fails.push(format!("factor 4: n={} k={k} |F|={size} shadow={shadow}", f.ground_n()));
                }
            }
        }
    }
    Ok(verdict(
        fams.len(),
        &format!("families checked at every depth; {factor_four} with the factor-4 bound"),
        fails,
    ))
}

fn random_family(rng: &mut ChaCha8Rng) -> (Family, u32, u32) {
    let n = rng.gen_range(3..=10u32);
    let k = rng.gen_range(1..n);
    let r = rng.gen_range(2..=4u32);
    let t = rng.gen_range(1..=k.min(3));
    let size = rng.gen_range(1..=20usize);
    let max_i = (n - t) / r;
    let source: Vec<Subset> = if rng.gen_bool(0.5) {
        let i = rng.gen_range(0..=max_i);
        build_frankl(&FranklFamilySpec::uniform(n, k, r, t, i))
            .map(|f| f.members().to_vec())
            .unwrap_or_default()
    } else {
        k_subsets(n, k).collect()
    };
    let members: Vec<Subset> = if source.is_empty() {
        Vec::new()
    } else {
        (0..size).map(|_| source[rng.gen_range(0..source.len())]).collect()
    };
    (Family::uniform(n, k, members).expect("k-sets of [n]"), r, t)
}

/// Shifting on `10^4` seeded random families.
fn shifting_suite() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut fails = Vec::new();
    let mut intersecting = 0;
    let mut triples = 0u64;
    for case in 0..10_000 {
        let (f, r, t) = random_family(&mut rng);
        let n = f.ground_n();
        let i = rng.gen_range(1..n);
        let j = rng.gen_range(i + 1..=n);
        let once = shift(&f, ShiftStep::new(i, j)?)?;
        let fixed = shift_to_fixpoint(&f);
        let holds = is_rwise_t_intersecting(&f, r, t);
        intersecting += holds as usize;
        if once.len() != f.len() || fixed.len() != f.len() {
            fails.push(format!("case {case}: size changed"));
        }
        if holds && !(is_rwise_t_intersecting(&once, r, t) && is_rwise_t_intersecting(&fixed, r, t)) {
            fails.push(format!("case {case}: property lost"));
        }
        if !is_shifted(&fixed) || !is_fixed_by_all_shifts(&fixed) {
            fails.push(format!("case {case}: fixpoint not shifted"));
        }
        let m = fixed.members();
        let mut all_have_witness = true;
        for a in 0..m.len() {
            for b in a..m.len() {
                for c in b..m.len() {
                    triples += 1;
                    let s = witness_s(&[m[a], m[b], m[c]], t);
                    if s.is_none() {
                        all_have_witness = false;
                    }
                }
            }
        }
        if all_have_witness != is_rwise_t_intersecting(&fixed, 3, t) {
            fails.push(format!("case {case}: witness criterion disagrees at r=3, t={t}"));
        }
    }
    Ok(verdict(
        10_000,
        &format!("families ({intersecting} intersecting, {triples} triples) pass every check"),
        fails,
    ))
}

/// `m(n,k,r,t) ≤ m(n-1,k,r,t) + m(n-1,k-1,r,t)` wherever `C(n,k) ≤ 120`.
fn deletion_recursion() -> Result<(bool, String)> {
    let cfg = quiet();
    let mut fails = Vec::new();
    let mut checked = 0;
    for r in 2..=4u32 {
        for t in 1..=3u32 {
            for k in 1..=8u32 {
                for n in k.max(2)..=16u32 {
                    if binom(n as u64, k as i64) > BigInt::from(120) {
                        continue;
                    }
                    if (r as i64 - 1) * n as i64 <= r as i64 * k as i64 - t as i64 {
                        continue;
                    }
                    let d = verify_deletion_recursion(n, k, r, t, &cfg)?;
                    checked += 1;
                    if !d.holds {
                        fails.push(format!(
                            "n={n} k={k} r={r} t={t}: {} > {} + {}",
                            d.whole, d.without_n, d.with_n
                        ));
                    }
                }
            }
        }
    }
    Ok(verdict(checked, "grid points satisfy the recursion", fails))
}
