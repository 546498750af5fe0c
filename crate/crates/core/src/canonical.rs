//! The named extremal constructions: Frankl families, full stars and the
//! Hilton–Milner-type family, each available both explicitly and by count.

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{binom, BigInt};
use crate::setfamilies::{all_subsets, k_subsets, Family, Subset, MAX_GROUND};

/// Largest explicit family the constructors will materialise.
pub const MAX_EXPLICIT_MEMBERS: u64 = 4_000_000;

/// Ground-set cap for the non-uniform construction (it scans all of `2^[n]`).
pub const MAX_NONUNIFORM_N: u32 = 20;

/// Parameters of `A_i`: sets meeting `[t + r·i]` in at least `t + (r-1)·i`
/// elements, optionally restricted to `k`-sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FranklFamilySpec {
    pub n: u32,
    pub k: Option<u32>,
    pub r: u32,
    pub t: u32,
    pub i: u32,
}

impl FranklFamilySpec {
    pub fn uniform(n: u32, k: u32, r: u32, t: u32, i: u32) -> Self {
        FranklFamilySpec { n, k: Some(k), r, t, i }
    }

    pub fn nonuniform(n: u32, r: u32, t: u32, i: u32) -> Self {
        FranklFamilySpec { n, k: None, r, t, i }
    }

    /// Size of the window `[t + r·i]`.
    pub fn window(&self) -> u32 {
        self.t + self.r * self.i
    }

    /// Required overlap with the window.
    pub fn required(&self) -> u32 {
        self.t + (self.r - 1) * self.i
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 2 {
            return Err(Error::param("r must be at least 2"));
        }
        if self.t < 1 {
            return Err(Error::param("t must be at least 1"));
        }
        if self.window() > self.n {
            return Err(Error::param(format!(
                "window t + r*i = {} exceeds n = {}",
                self.window(),
                self.n
            )));
        }
        if let Some(k) = self.k {
            if k > self.n {
                return Err(Error::param(format!("k = {k} exceeds n = {}", self.n)));
            }
        }
        Ok(())
    }
}

/// `|A_i|` by closed form: sum over the number `j ≤ i` of window elements missed.
pub fn size_frankl(spec: &FranklFamilySpec) -> Result<BigInt> {
    spec.validate()?;
    let w = spec.window() as u64;
    let rest = spec.n as u64 - w;
    let mut total = BigInt::zero();
    for j in 0..=spec.i as u64 {
        let inside = binom(w, j as i64);
        let outside = match spec.k {
            Some(k) => binom(rest, k as i64 - w as i64 + j as i64),
            None => BigInt::from(1u8) << rest as usize,
        };
        total += inside * outside;
    }
    Ok(total)
}

fn check_explicit_size(size: &BigInt) -> Result<()> {
    let v = size.to_u128().unwrap_or(u128::MAX);
    if v > MAX_EXPLICIT_MEMBERS as u128 {
        return Err(Error::CapExceeded {
            what: "family size".into(),
            value: v,
            cap: MAX_EXPLICIT_MEMBERS as u128,
        });
    }
    Ok(())
}

fn check_ground(n: u32) -> Result<()> {
    if n > MAX_GROUND {
        return Err(Error::CapExceeded {
            what: "n".into(),
            value: n as u128,
            cap: MAX_GROUND as u128,
        });
    }
    Ok(())
}

/// The explicit family `A_i(n,k,r,t)`, or `A_i(n,r,t)` when `k` is absent.
pub fn build_frankl(spec: &FranklFamilySpec) -> Result<Family> {
    spec.validate()?;
    check_ground(spec.n)?;
    let window = Subset::prefix(spec.window());
    let need = spec.required();
    match spec.k {
        Some(k) => {
            check_explicit_size(&size_frankl(spec)?)?;
            // Choose which window elements are present, then fill from outside.
            let w = spec.window();
            let mut members = Vec::new();
            let outside: Vec<u32> = (w + 1..=spec.n).collect();
            for inside_count in need..=w.min(k) {
                let fill = k - inside_count;
                if fill as usize > outside.len() {
                    continue;
                }
                for inner in k_subsets(w, inside_count) {
                    for outer in k_subsets(outside.len() as u32, fill) {
                        let mut s = inner;
                        for idx in outer.elements() {
                            s = s.with(outside[idx as usize - 1]);
                        }
                        members.push(s);
                    }
                }
            }
            Family::uniform(spec.n, k, members)
        }
        None => {
            if spec.n > MAX_NONUNIFORM_N {
                return Err(Error::CapExceeded {
                    what: "n (non-uniform construction)".into(),
                    value: spec.n as u128,
                    cap: MAX_NONUNIFORM_N as u128,
                });
            }
            let members = all_subsets(spec.n).filter(|s| s.intersect(window).len() >= need);
            Family::new(spec.n, members)
        }
    }
}

/// All `k`-sets containing `[t]`.
pub fn build_full_star(n: u32, k: u32, t: u32) -> Result<Family> {
    if t > k || k > n {
        return Err(Error::param(format!("need t <= k <= n, got t={t}, k={k}, n={n}")));
    }
    check_ground(n)?;
    check_explicit_size(&binom((n - t) as u64, (k - t) as i64))?;
    let core = Subset::prefix(t);
    let members = k_subsets(n - t, k - t).map(|s| Subset::from_bits(s.bits() << t).union(core));
    Family::uniform(n, k, members)
}

/// `B(n,k,r,t)`: `k`-sets containing `[t+r-2]` that meet `[t+r-1, k+1]`,
/// together with the sets `[k+1] \ {j}` for `j ≤ t+r-2`.
pub fn build_hmf(n: u32, k: u32, r: u32, t: u32) -> Result<Family> {
    if r < 2 || t < 1 {
        return Err(Error::param("need r >= 2 and t >= 1"));
    }
    let core_len = t + r - 2;
    if k <= core_len {
        return Err(Error::param(format!(
            "k = {k} must exceed t + r - 2 = {core_len} so the window [t+r-1, k+1] is non-trivial"
        )));
    }
    if k + 1 > n {
        return Err(Error::param(format!("need n >= k + 1, got n={n}, k={k}")));
    }
    check_ground(n)?;
    let core = Subset::prefix(core_len);
    let window = Subset::interval(core_len + 1, k + 1);
    let top = Subset::prefix(k + 1);
    // Sets containing the core: choose the remaining k - core_len elements.
    check_explicit_size(&binom((n - core_len) as u64, (k - core_len) as i64))?;
    let mut members: Vec<Subset> = k_subsets(n - core_len, k - core_len)
        .map(|s| Subset::from_bits(s.bits() << core_len).union(core))
        .filter(|s| !s.intersect(window).is_empty())
        .collect();
    members.extend((1..=core_len).map(|j| top.without(j)));
    Family::uniform(n, k, members)
}

/// Closed-form size of `B(n,k,r,t)`.
pub fn size_hmf(n: u32, k: u32, r: u32, t: u32) -> Result<BigInt> {
    if r < 2 || t < 1 || k <= t + r - 2 || k + 1 > n {
        return Err(Error::param("parameters outside the range of B(n,k,r,t)"));
    }
    let c = (t + r - 2) as i64;
    let (n, k) = (n as i64, k as i64);
    // Sets over the core minus those avoiding the window, plus the c extra sets.
    let with_core = binom((n - c) as u64, k - c);
    let avoid = binom((n - k - 1) as u64, k - c);
    Ok(with_core - avoid + BigInt::from(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfamilies::{common_intersection, is_rwise_t_intersecting};
    use crate::shifting::is_shifted;

    fn sets(v: &[&[u32]]) -> Vec<Subset> {
        v.iter().map(|s| Subset::from_elems(s)).collect()
    }

    #[test]
    fn frankl_examples() {
        let a0 = build_frankl(&FranklFamilySpec::uniform(5, 3, 3, 2, 0)).unwrap();
        assert_eq!(a0.members(), sets(&[&[1, 2, 3], &[1, 2, 4], &[1, 2, 5]]).as_slice());

        // 4-sets of [6] meeting [4] in at least 3 points: 4 choices inside
        // times 2 outside, plus [4] itself.
        let a1 = build_frankl(&FranklFamilySpec::uniform(6, 4, 3, 1, 1)).unwrap();
        let brute = k_subsets(6, 4).filter(|s| s.count_upto(4) >= 3).count();
        assert_eq!(brute, 9);
        assert_eq!(a1.len(), 9);
        assert_eq!(size_frankl(&FranklFamilySpec::uniform(6, 4, 3, 1, 1)).unwrap(), BigInt::from(9));

        let whole = build_frankl(&FranklFamilySpec::uniform(4, 4, 2, 2, 1)).unwrap();
        assert_eq!(whole.members(), &[Subset::prefix(4)]);
    }

    #[test]
    fn frankl_sizes() {
        let s = |n, k, r, t, i| size_frankl(&FranklFamilySpec::uniform(n, k, r, t, i)).unwrap();
        assert_eq!(s(10, 5, 3, 2, 1), BigInt::from(26));
        assert_eq!(s(10, 5, 3, 2, 0), BigInt::from(56));
        // The displayed two-term form of |A_1|.
        for (n, k, r, t) in [(10u32, 5u32, 3u32, 2u32), (20, 9, 4, 3), (30, 12, 3, 1)] {
            let expect = binom((n - t - r) as u64, k as i64 - (t + r) as i64)
                + BigInt::from(t + r) * binom((n - t - r) as u64, k as i64 - (t + r) as i64 + 1);
            assert_eq!(s(n, k, r, t, 1), expect);
        }
        assert!(size_frankl(&FranklFamilySpec::uniform(4, 3, 3, 2, 1)).is_err());
        // Non-uniform: A_0(n,r,t) is everything containing [t].
        let nu = size_frankl(&FranklFamilySpec::nonuniform(8, 3, 2, 0)).unwrap();
        assert_eq!(nu, BigInt::from(64));
    }

    #[test]
    fn construction_matches_closed_form() {
        for n in 1..=14u32 {
            for r in 2..=4u32 {
                for t in 1..=4u32 {
                    for i in 0..=3u32 {
                        if t + r * i > n {
                            continue;
                        }
                        for k in 0..=n {
                            let spec = FranklFamilySpec::uniform(n, k, r, t, i);
                            let fam = build_frankl(&spec).unwrap();
                            assert_eq!(BigInt::from(fam.len()), size_frankl(&spec).unwrap(), "{spec:?}");
                            if n <= 12 {
                                assert!(is_rwise_t_intersecting(&fam, r, t), "{spec:?}");
                                assert!(is_shifted(&fam), "{spec:?}");
                            }
                            if i == 0 && k >= t {
                                assert_eq!(fam, build_full_star(n, k, t).unwrap());
                            }
                        }
                        if n <= 12 {
                            let spec = FranklFamilySpec::nonuniform(n, r, t, i);
                            let fam = build_frankl(&spec).unwrap();
                            assert_eq!(BigInt::from(fam.len()), size_frankl(&spec).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn star_examples() {
        assert_eq!(build_full_star(5, 3, 2).unwrap().len(), 3);
        assert_eq!(build_full_star(7, 4, 4).unwrap().members(), &[Subset::prefix(4)]);
        assert_eq!(build_full_star(6, 3, 1).unwrap().len(), 10);
        assert!(build_full_star(4, 2, 3).is_err());
    }

    #[test]
    fn hmf_examples() {
        let hm = build_hmf(6, 3, 2, 1).unwrap();
        let brute = k_subsets(6, 3)
            .filter(|s| (s.contains(1) && !s.intersect(Subset::interval(2, 4)).is_empty()) || *s == Subset::interval(2, 4))
            .count();
        assert_eq!(hm.len(), brute);
        // Classical Hilton–Milner size C(n-1,k-1) - C(n-k-1,k-1) + 1.
        assert_eq!(hm.len(), 10);
        assert_eq!(size_hmf(6, 3, 2, 1).unwrap(), BigInt::from(10));

        let b = build_hmf(5, 4, 2, 2).unwrap();
        assert!(b.contains(Subset::from_elems(&[2, 3, 4, 5])));
        assert!(b.contains(Subset::from_elems(&[1, 3, 4, 5])));
        assert!(build_hmf(6, 2, 2, 2).is_err());
    }

    #[test]
    fn hmf_is_intersecting_and_nontrivial() {
        for n in 3..=12u32 {
            for r in 2..=4u32 {
                for t in 1..=3u32 {
                    for k in (t + r - 1)..n {
                        let fam = build_hmf(n, k, r, t).unwrap();
                        assert_eq!(BigInt::from(fam.len()), size_hmf(n, k, r, t).unwrap());
                        assert!(is_rwise_t_intersecting(&fam, 2, t));
                        assert!(is_rwise_t_intersecting(&fam, r, t), "n={n} k={k} r={r} t={t}");
                        assert!(common_intersection(&fam).unwrap().is_empty(), "n={n} k={k} r={r} t={t}");
                    }
                }
            }
        }
    }
}
