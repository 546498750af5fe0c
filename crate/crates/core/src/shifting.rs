//! The shifting operators `S_ij`, the shifted partial order and the
//! structural facts about shifted intersecting families.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::setfamilies::{is_rwise_t_intersecting, is_t_star, k_subsets, restrict, Family, Subset};

/// The operator `S_ij` replacing `j` by `i` (with `i < j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftStep {
    i: u32,
    j: u32,
}

impl ShiftStep {
    pub fn new(i: u32, j: u32) -> Result<ShiftStep> {
        if i == 0 || i >= j {
            return Err(Error::param(format!("need 1 <= i < j, got i={i}, j={j}")));
        }
        Ok(ShiftStep { i, j })
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn j(&self) -> u32 {
        self.j
    }
}

/// Applies `S_ij` to every member: `F` becomes `F - j + i` when `j ∈ F`,
/// `i ∉ F` and the new set is not already a member.
pub fn shift(fam: &Family, step: ShiftStep) -> Result<Family> {
    if step.j > fam.ground_n() {
        return Err(Error::param(format!("j = {} outside [{}]", step.j, fam.ground_n())));
    }
    Ok(rebuild(fam, shift_members(fam, step).0))
}

fn shift_members(fam: &Family, step: ShiftStep) -> (Vec<Subset>, bool) {
    let mut changed = false;
    let out = fam
        .iter()
        .map(|f| {
            if f.contains(step.j) && !f.contains(step.i) {
                let g = f.without(step.j).with(step.i);
                if !fam.contains(g) {
                    changed = true;
                    return g;
                }
            }
            f
        })
        .collect();
    (out, changed)
}

fn rebuild(fam: &Family, members: Vec<Subset>) -> Family {
    let rebuilt = match fam.uniform_k() {
        Some(k) => Family::uniform(fam.ground_n(), k, members),
        None => Family::new(fam.ground_n(), members),
    };
    rebuilt.expect("shifting keeps members inside the ground set")
}

/// Shifts until no `S_ij` changes the family. Pairs are swept in
/// lexicographic order `(1,2), (1,3), …, (n-1,n)` and the sweep restarts after
/// every effective step, so the result is reproducible.
pub fn shift_to_fixpoint(fam: &Family) -> Family {
    let n = fam.ground_n();
    let mut cur = fam.clone();
    'outer: loop {
        for i in 1..n {
            for j in i + 1..=n {
                let (members, changed) = shift_members(&cur, ShiftStep { i, j });
                if changed {
                    cur = rebuild(&cur, members);
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}

/// Sum of all elements of all members; strictly decreases under effective shifts.
pub fn shift_potential(fam: &Family) -> u64 {
    fam.iter().flat_map(|f| f.elements()).map(u64::from).sum()
}

/// `A ≺ B`: the `p`-th smallest element of `A` is at most that of `B` for every `p`.
pub fn precedes(a: Subset, b: Subset) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::param(format!("{a} and {b} differ in size")));
    }
    Ok(a.elements().zip(b.elements()).all(|(x, y)| x <= y))
}

/// Sets covered by `s` in `≺`: replace one element `e` by `e - 1` when `e - 1 ∉ s`.
pub fn lower_covers(s: Subset) -> impl Iterator<Item = Subset> {
    s.elements()
        .filter(move |&e| e > 1 && !s.contains(e - 1))
        .map(move |e| s.without(e).with(e - 1))
}

/// Sets covering `s` in `≺` inside `[n]`.
pub fn upper_covers(s: Subset, n: u32) -> impl Iterator<Item = Subset> {
    s.elements()
        .filter(move |&e| e < n && !s.contains(e + 1))
        .map(move |e| s.without(e).with(e + 1))
}

/// Whether the family is a down-set of `≺` (checked on covers).
pub fn is_shifted(fam: &Family) -> bool {
    fam.iter().all(|f| lower_covers(f).all(|g| fam.contains(g)))
}

/// Whether every `S_ij` fixes the family (the operator characterisation).
pub fn is_fixed_by_all_shifts(fam: &Family) -> bool {
    let n = fam.ground_n();
    (1..n).all(|i| (i + 1..=n).all(|j| !shift_members(fam, ShiftStep { i, j }).1))
}

/// Smallest `s` with `Σ |F_p ∩ [s]| ≥ (r-1)·s + t` over the given sets, where
/// `r` is the number of sets. At the smallest such `s` equality holds.
pub fn witness_s(sets: &[Subset], t: u32) -> Option<u32> {
    let r = sets.len() as u32;
    let top = sets.iter().filter_map(|s| s.max_element()).max()?;
    (1..=top).find(|&s| {
        let total: u32 = sets.iter().map(|f| f.count_upto(s)).sum();
        total >= (r - 1) * s + t
    })
}

/// Smallest `i ≥ 0` with `|F ∩ [t + r·i]| ≥ t + (r-1)·i` (equality then holds).
pub fn min_hit_index(f: Subset, r: u32, t: u32) -> Option<u32> {
    let k = f.len();
    (0..).take_while(|&i| t + (r - 1) * i <= k).find(|&i| f.count_upto(t + r * i) >= t + (r - 1) * i)
}

/// Splits a shifted `r`-wise `t`-intersecting `k`-uniform family by hit
/// index into `F_0, …, F_{⌊(k-t)/(r-1)⌋}`.
pub fn partition_by_hit(fam: &Family, r: u32, t: u32) -> Result<Vec<Family>> {
    let Some(k) = fam.uniform_k() else {
        if fam.is_empty() {
            return Ok(Vec::new());
        }
        return Err(Error::param("partition needs a uniform family"));
    };
    if k < t {
        if fam.is_empty() {
            return Ok(Vec::new());
        }
        return Err(Error::pre("members smaller than t cannot hit the line"));
    }
    let parts = ((k - t) / (r - 1) + 1) as usize;
    let mut buckets: Vec<Vec<Subset>> = vec![Vec::new(); parts];
    for f in fam.iter() {
        let i = min_hit_index(f, r, t)
            .ok_or_else(|| Error::pre(format!("member {f} has no hit index; family is not shifted and intersecting")))?;
        buckets[i as usize].push(f);
    }
    buckets
        .into_iter()
        .map(|b| Family::uniform(fam.ground_n(), k, b))
        .collect()
}

fn compatible(members: &[Subset], x: Subset, r: u32, t: u32) -> bool {
    fn go(m: &[Subset], left: usize, t: u32, start: usize, acc: Subset) -> bool {
        if acc.len() < t {
            return false;
        }
        if left == 0 || start == m.len() {
            return true;
        }
        (start..m.len()).all(|i| go(m, left - 1, t, i + 1, acc.intersect(m[i])))
    }
    go(members, (r - 1) as usize, t, 0, x)
}

/// Extends the family greedily, scanning `k`-sets in colex order and adding
/// each one that keeps the family `r`-wise `t`-intersecting.
pub fn saturate(fam: &Family, r: u32, t: u32) -> Result<Family> {
    let k = fam
        .uniform_k()
        .ok_or_else(|| Error::pre("saturation needs a uniform family with known k"))?;
    if !is_rwise_t_intersecting(fam, r, t) {
        return Err(Error::pre("input is not r-wise t-intersecting"));
    }
    let mut members: BTreeSet<Subset> = fam.iter().collect();
    for x in k_subsets(fam.ground_n(), k) {
        if members.contains(&x) {
            continue;
        }
        let current: Vec<Subset> = members.iter().copied().collect();
        if compatible(&current, x, r, t) {
            members.insert(x);
        }
    }
    Family::uniform(fam.ground_n(), k, members)
}

/// Whether no further `k`-set can be added.
pub fn is_saturated(fam: &Family, r: u32, t: u32) -> bool {
    let Some(k) = fam.uniform_k() else {
        return false;
    };
    let members = fam.members();
    k_subsets(fam.ground_n(), k).all(|x| fam.contains(x) || !compatible(members, x, r, t))
}

/// For a shifted, saturated, `r`-wise `t`-intersecting family that is not a
/// `t`-star, reports whether the links `F([t+1] \ {i}, [t+1])`, `i = 1..t`,
/// all coincide. A `false` result would be a counterexample.
pub fn link_coincidence_check(fam: &Family, r: u32, t: u32) -> Result<bool> {
    if is_t_star(fam, t) {
        return Err(Error::pre("family is a t-star"));
    }
    if !is_rwise_t_intersecting(fam, r, t) {
        return Err(Error::pre("family is not r-wise t-intersecting"));
    }
    if !is_shifted(fam) {
        return Err(Error::pre("family is not shifted"));
    }
    if !is_saturated(fam, r, t) {
        return Err(Error::pre("family is not saturated"));
    }
    let q = Subset::prefix(t + 1);
    let links = (1..=t)
        .map(|i| restrict(fam, q.without(i), q))
        .collect::<Result<Vec<_>>>()?;
    Ok(links.windows(2).all(|w| w[0] == w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{build_frankl, build_full_star, FranklFamilySpec};
    use proptest::prelude::*;

    fn s(v: &[u32]) -> Subset {
        Subset::from_elems(v)
    }

    fn fam(n: u32, sets: &[&[u32]]) -> Family {
        Family::new(n, sets.iter().map(|x| s(x))).unwrap()
    }

    #[test]
    fn shift_examples() {
        let st = ShiftStep::new(1, 2).unwrap();
        assert_eq!(shift(&fam(3, &[&[2, 3]]), st).unwrap(), fam(3, &[&[1, 3]]));
        let blocked = fam(3, &[&[1, 3], &[2, 3]]);
        assert_eq!(shift(&blocked, st).unwrap(), blocked);
        let again = fam(4, &[&[2, 4], &[1, 4]]);
        assert_eq!(shift(&again, st).unwrap(), again);
        assert!(ShiftStep::new(2, 2).is_err());
        assert!(shift(&again, ShiftStep::new(1, 5).unwrap()).is_err());
    }

    #[test]
    fn fixpoint_examples() {
        assert_eq!(shift_to_fixpoint(&fam(5, &[&[4, 5]])), fam(5, &[&[1, 2]]));
        let star = build_full_star(6, 3, 2).unwrap();
        assert_eq!(shift_to_fixpoint(&star), star);
        assert!(shift_to_fixpoint(&Family::empty(5)).is_empty());
    }

    #[test]
    fn precedes_examples() {
        assert!(precedes(s(&[1, 3]), s(&[2, 3])).unwrap());
        assert!(!precedes(s(&[1, 4]), s(&[2, 3])).unwrap());
        assert!(precedes(s(&[2, 5]), s(&[2, 5])).unwrap());
        assert!(precedes(s(&[1]), s(&[1, 2])).is_err());
    }

    #[test]
    fn shifted_examples() {
        assert!(is_shifted(&fam(3, &[&[1, 2], &[1, 3]])));
        assert!(!is_shifted(&fam(3, &[&[2, 3]])));
    }

    #[test]
    fn colex_is_a_linear_extension() {
        for n in 1..=9 {
            for k in 0..=n {
                let all: Vec<Subset> = k_subsets(n, k).collect();
                for (ia, &a) in all.iter().enumerate() {
                    for &b in &all[..ia] {
                        assert!(!precedes(a, b).unwrap(), "{a} precedes earlier {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn witness_examples() {
        let f = s(&[1, 2, 5]);
        assert_eq!(witness_s(&[f, f, f], 2), Some(2));
        let k = s(&[1, 2, 3, 4]);
        assert_eq!(witness_s(&[k, k, k], 4), Some(4));
        assert_eq!(witness_s(&[s(&[1, 2]), s(&[1, 3]), s(&[2, 3])], 1), None);
    }

    #[test]
    fn hit_index_examples() {
        assert_eq!(min_hit_index(s(&[1, 2, 5]), 3, 2), Some(0));
        assert_eq!(min_hit_index(s(&[1, 3, 4]), 3, 1), Some(0));
        assert_eq!(min_hit_index(s(&[2, 3, 4]), 3, 1), Some(1));
        assert_eq!(min_hit_index(s(&[2, 3]), 3, 1), None);
    }

    #[test]
    fn partition_examples() {
        let star = build_full_star(7, 3, 2).unwrap();
        let parts = partition_by_hit(&star, 3, 2).unwrap();
        assert_eq!(parts[0], star);

        let a1 = build_frankl(&FranklFamilySpec::uniform(6, 4, 3, 1, 1)).unwrap();
        let parts = partition_by_hit(&a1, 3, 1).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts[0].iter().all(|f| f.contains(1)));
        assert!(parts[1].iter().all(|f| !f.contains(1)));
        assert_eq!(parts[0].len() + parts[1].len(), a1.len());

        let empty = Family::uniform(6, 4, []).unwrap();
        assert!(partition_by_hit(&empty, 3, 1).unwrap().iter().all(Family::is_empty));
        assert!(partition_by_hit(&fam(4, &[&[2, 3]]), 3, 1).is_err());
    }

    #[test]
    fn saturate_examples() {
        let star = build_full_star(7, 3, 1).unwrap();
        assert_eq!(saturate(&star, 2, 1).unwrap(), star);
        let one = Family::uniform(4, 3, [s(&[1, 2, 3])]).unwrap();
        assert_eq!(saturate(&one, 3, 1).unwrap().len(), 4);
        let from_scratch = saturate(&Family::uniform(6, 3, []).unwrap(), 3, 2).unwrap();
        assert!(is_rwise_t_intersecting(&from_scratch, 3, 2));
        assert!(is_saturated(&from_scratch, 3, 2));
        assert!(saturate(&fam(4, &[&[1, 2], &[3, 4]]), 2, 1).is_err());
    }

    #[test]
    fn link_check_rejects_stars_and_handles_t1() {
        let star = build_full_star(6, 3, 2).unwrap();
        assert!(link_coincidence_check(&star, 3, 2).is_err());
        // The whole of C([4],3) is 3-wise 1-intersecting, shifted and saturated.
        let all = saturate(&Family::uniform(4, 3, [s(&[1, 2, 3])]).unwrap(), 3, 1).unwrap();
        assert!(link_coincidence_check(&all, 3, 1).unwrap());
    }

    fn random_family(n: u32, k: u32, picks: &[u16]) -> Family {
        let all: Vec<Subset> = k_subsets(n, k).collect();
        Family::uniform(n, k, picks.iter().map(|&p| all[p as usize % all.len()])).unwrap()
    }

    proptest! {
        #[test]
        fn shifting_preserves_size_and_property(n in 2u32..=10, k in 1u32..=5, picks in prop::collection::vec(any::<u16>(), 0..20), i in 1u32..10, d in 1u32..9) {
            let k = k.min(n);
            let f = random_family(n, k, &picks);
            let j = (i + d).min(n);
            let i = i.min(j - 1).max(1);
            if i < j {
                let g = shift(&f, ShiftStep::new(i, j).unwrap()).unwrap();
                prop_assert_eq!(g.len(), f.len());
                for r in 2..=3 {
                    for t in 1..=2 {
                        if is_rwise_t_intersecting(&f, r, t) {
                            prop_assert!(is_rwise_t_intersecting(&g, r, t));
                        }
                    }
                }
                if g != f {
                    prop_assert!(shift_potential(&g) < shift_potential(&f));
                }
            }
            let fixed = shift_to_fixpoint(&f);
            prop_assert!(is_shifted(&fixed));
            prop_assert!(is_fixed_by_all_shifts(&fixed));
            prop_assert_eq!(fixed.len(), f.len());
        }

        #[test]
        fn shifted_characterisations_agree(n in 2u32..=8, k in 1u32..=4, picks in prop::collection::vec(any::<u16>(), 0..15)) {
            let f = random_family(n, k.min(n), &picks);
            prop_assert_eq!(is_shifted(&f), is_fixed_by_all_shifts(&f));
        }

        #[test]
        fn witness_equality_at_minimum(sets in prop::collection::vec(any::<u16>(), 2..5), t in 1u32..4) {
            let fs: Vec<Subset> = sets.iter().map(|&b| Subset::from_bits(b as u64)).collect();
            if let Some(s_min) = witness_s(&fs, t) {
                let r = fs.len() as u32;
                let total: u32 = fs.iter().map(|f| f.count_upto(s_min)).sum();
                prop_assert_eq!(total, (r - 1) * s_min + t);
                prop_assert!(s_min >= t);
            }
        }
    }
}
