//! Lower and upper shadows, and the lower bounds on shadow sizes.

use std::collections::HashSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactmath::{binom, BigInt, BigRational};
use crate::setfamilies::{k_subsets, Family, Subset};

/// Summary of a shadow computation against a lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShadowReport {
    pub input_size: BigInt,
    pub output_size: BigInt,
    pub bound: BigRational,
    pub bound_satisfied: bool,
}

fn require_k(fam: &Family) -> Result<u32> {
    fam.uniform_k()
        .ok_or_else(|| Error::param("shadow needs a uniform family with known k"))
}

/// `∂^{(b)} F`: all `(k-b)`-sets contained in some member. Accepts `1 ≤ b ≤ k`.
pub fn lower_shadow(fam: &Family, b: u32) -> Result<Family> {
    let k = require_k(fam)?;
    if b == 0 || b > k {
        return Err(Error::param(format!("shadow depth b = {b} outside 1..={k}")));
    }
    let mut out: HashSet<Subset> = HashSet::new();
    for f in fam.iter() {
        let elems = f.to_vec();
        for drop in k_subsets(k, b) {
            let removed = drop
                .elements()
                .fold(Subset::EMPTY, |acc, p| acc.with(elems[p as usize - 1]));
            out.insert(f.difference(removed));
        }
    }
    Family::uniform(fam.ground_n(), k - b, out)
}

/// `∂^+ F`: all `(k+1)`-supersets of members inside `[n]`.
pub fn upper_shadow(fam: &Family) -> Result<Family> {
    let k = require_k(fam)?;
    let n = fam.ground_n();
    if k >= n {
        return Err(Error::param("upper shadow needs k < n"));
    }
    let mut out: HashSet<Subset> = HashSet::new();
    for f in fam.iter() {
        for e in 1..=n {
            if !f.contains(e) {
                out.insert(f.with(e));
            }
        }
    }
    Family::uniform(n, k + 1, out)
}

/// `{ [n] \ F : F ∈ fam }`.
pub fn complement_family(fam: &Family) -> Family {
    let all = Subset::prefix(fam.ground_n());
    let members = fam.iter().map(|f| all.difference(f));
    match fam.uniform_k() {
        Some(k) => Family::uniform(fam.ground_n(), fam.ground_n() - k, members),
        None => Family::new(fam.ground_n(), members),
    }
    .expect("complements stay inside the ground set")
}

/// Minimum over `0 ≤ i ≤ (k-t)/(r-1)` of `C(ri+t, i+b) / C(ri+t, i)`.
pub fn shadow_ratio(k: u32, r: u32, t: u32, b: u32) -> Result<BigRational> {
    if b == 0 || b > t {
        return Err(Error::param(format!("need 0 < b <= t, got b={b}, t={t}")));
    }
    if r < 2 {
        return Err(Error::param("need r >= 2"));
    }
    if k < t {
        return Err(Error::param(format!("need k >= t, got k={k}, t={t}")));
    }
    let top = (k - t) / (r - 1);
    (0..=top)
        .map(|i| {
            let m = (r * i + t) as u64;
            BigRational::new(binom(m, (i + b) as i64), binom(m, i as i64))
        })
        .min()
        .ok_or_else(|| Error::param("empty index range"))
}

/// Lower bound `|F| · shadow_ratio(k, r, t, b)` on `|∂^{(b)} F|` for `r`-wise
/// `t`-intersecting `k`-uniform `F`.
pub fn shadow_bound(fam_size: &BigInt, k: u32, r: u32, t: u32, b: u32) -> Result<BigRational> {
    Ok(shadow_ratio(k, r, t, b)? * BigRational::from_integer(fam_size.clone()))
}

/// Compares `|∂^{(b)} F|` with [`shadow_bound`].
pub fn shadow_report(fam: &Family, r: u32, t: u32, b: u32) -> Result<ShadowReport> {
    let k = require_k(fam)?;
    let shadow = lower_shadow(fam, b)?;
    let input_size = BigInt::from(fam.len());
    let output_size = BigInt::from(shadow.len());
    let bound = shadow_bound(&input_size, k, r, t, b)?;
    let bound_satisfied = BigRational::from_integer(output_size.clone()) >= bound;
    Ok(ShadowReport {
        input_size,
        output_size,
        bound,
        bound_satisfied,
    })
}

/// Checks the threshold form of Kruskal–Katona on a concrete family:
/// `|F| > C(m, k)` implies `|∂F| > C(m, k-1)`. Needs `2 ≤ k ≤ m ≤ n`.
pub fn kk_threshold_check(fam: &Family, m: u32) -> Result<bool> {
    let k = require_k(fam)?;
    let n = fam.ground_n();
    if k < 2 || k > m || m > n {
        return Err(Error::param(format!("need 2 <= k <= m <= n, got k={k}, m={m}, n={n}")));
    }
    let size = BigInt::from(fam.len());
    if size <= binom(m as u64, k as i64) {
        return Ok(true);
    }
    let shadow = BigInt::from(lower_shadow(fam, 1)?.len());
    Ok(shadow > binom(m as u64, k as i64 - 1))
}

/// Sperner's averaging inequality `|∂^+F| / C(n,k+1) ≥ |F| / C(n,k)`.
pub fn sperner_holds(fam: &Family) -> Result<bool> {
    let k = require_k(fam)?;
    let n = fam.ground_n() as u64;
    let up = upper_shadow(fam)?;
    let lhs = BigInt::from(up.len()) * binom(n, k as i64);
    let rhs = BigInt::from(fam.len()) * binom(n, k as i64 + 1);
    Ok(lhs >= rhs || (fam.is_empty() && rhs.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::build_full_star;
    use crate::exactmath::rat;
    use proptest::prelude::*;

    fn s(v: &[u32]) -> Subset {
        Subset::from_elems(v)
    }

    fn brute_shadow(fam: &Family, b: u32) -> usize {
        let k = fam.uniform_k().unwrap();
        k_subsets(fam.ground_n(), k - b)
            .filter(|g| fam.iter().any(|f| g.is_subset_of(f)))
            .count()
    }

    #[test]
    fn lower_shadow_examples() {
        let one = Family::uniform(3, 3, [s(&[1, 2, 3])]).unwrap();
        assert_eq!(
            lower_shadow(&one, 1).unwrap().members(),
            &[s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]
        );
        assert_eq!(lower_shadow(&one, 2).unwrap().members(), &[s(&[1]), s(&[2]), s(&[3])]);
        assert!(lower_shadow(&one, 0).is_err());

        // Full 2-star on n=6, k=3: pairs through the centre plus {1,x},{2,x}.
        let star = build_full_star(6, 3, 2).unwrap();
        let sh = lower_shadow(&star, 1).unwrap();
        assert_eq!(sh.len(), brute_shadow(&star, 1));
        assert_eq!(sh.len(), 9);
    }

    #[test]
    fn upper_shadow_examples() {
        let f = Family::uniform(3, 1, [s(&[1])]).unwrap();
        assert_eq!(upper_shadow(&f).unwrap().members(), &[s(&[1, 2]), s(&[1, 3])]);
        assert!(upper_shadow(&Family::uniform(4, 2, []).unwrap()).unwrap().is_empty());
        assert!(upper_shadow(&Family::uniform(3, 3, [s(&[1, 2, 3])]).unwrap()).is_err());
    }

    #[test]
    fn shadow_ratio_examples() {
        assert_eq!(shadow_ratio(4, 3, 4, 2).unwrap(), rat(6, 1));
        for k in 4..=60 {
            assert!(shadow_ratio(k, 3, 4, 2).unwrap() > rat(4, 1));
        }
        for t in 7..=12 {
            for k in t..=80 {
                assert!(shadow_ratio(k, 3, t, 4).unwrap() > rat(16, 1));
            }
        }
        // b = t at i = 0 contributes C(t,t)/C(t,0) = 1.
        assert_eq!(shadow_ratio(3, 3, 3, 3).unwrap(), rat(1, 1));
        assert!(shadow_ratio(5, 3, 2, 3).is_err());
        assert!(shadow_ratio(5, 3, 2, 0).is_err());
        assert_eq!(shadow_bound(&BigInt::from(7), 4, 3, 4, 2).unwrap(), rat(42, 1));
    }

    #[test]
    fn kk_examples() {
        let all = Family::uniform(5, 3, k_subsets(5, 3)).unwrap();
        assert!(kk_threshold_check(&all, 4).unwrap());
        assert_eq!(lower_shadow(&all, 1).unwrap().len(), 10);
        let one = Family::uniform(6, 3, [s(&[2, 4, 6])]).unwrap();
        assert!(kk_threshold_check(&one, 3).unwrap());
        assert!(kk_threshold_check(&one, 7).is_err());
    }

    fn random_uniform(n: u32, k: u32, picks: &[u16]) -> Family {
        let all: Vec<Subset> = k_subsets(n, k).collect();
        Family::uniform(n, k, picks.iter().map(|&p| all[p as usize % all.len()])).unwrap()
    }

    proptest! {
        #[test]
        fn shadows_compose(n in 3u32..=10, k in 2u32..=6, picks in prop::collection::vec(any::<u16>(), 0..25), b in 1u32..=3, c in 1u32..=3) {
            let k = k.min(n);
            let f = random_uniform(n, k, &picks);
            if b + c < k {
                let two_step = lower_shadow(&lower_shadow(&f, c).unwrap(), b).unwrap();
                prop_assert_eq!(two_step, lower_shadow(&f, b + c).unwrap());
            }
            if b <= k {
                prop_assert_eq!(lower_shadow(&f, b).unwrap().len(), brute_shadow(&f, b));
            }
        }

        #[test]
        fn complement_duality(n in 2u32..=10, k in 1u32..=8, picks in prop::collection::vec(any::<u16>(), 0..25)) {
            let k = k.min(n - 1);
            let f = random_uniform(n, k, &picks);
            let via_complement = complement_family(&lower_shadow(&complement_family(&f), 1).unwrap());
            prop_assert_eq!(via_complement, upper_shadow(&f).unwrap());
        }

        #[test]
        fn sperner_and_kk(n in 2u32..=12, k in 1u32..=8, picks in prop::collection::vec(any::<u16>(), 0..40)) {
            let k = k.min(n - 1);
            let f = random_uniform(n, k, &picks);
            prop_assert!(sperner_holds(&f).unwrap());
            if k >= 2 {
                for m in k..=n {
                    prop_assert!(kk_threshold_check(&f, m).unwrap());
                }
            }
        }
    }
}
