//! Subsets of `[n] = {1, …, n}` packed into a machine word, and families of them.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Largest ground set the bit-packed representation supports.
pub const MAX_GROUND: u32 = 64;

/// A subset of `[64]`; bit `i - 1` records membership of element `i`.
///
/// The derived ordering is numeric order of the bitmask, which on sets of
/// equal size is exactly colex order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u64) -> Subset {
        Subset(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// Builds a subset from 1-based elements. Panics on elements outside `1..=64`.
    pub fn from_elems(elems: &[u32]) -> Subset {
        Self::try_from_elems(elems).expect("element out of range 1..=64")
    }

    pub fn try_from_elems(elems: &[u32]) -> Result<Subset> {
        let mut bits = 0u64;
        for &e in elems {
            if e == 0 || e > MAX_GROUND {
                return Err(Error::param(format!("element {e} outside 1..=64")));
            }
            bits |= 1 << (e - 1);
        }
        Ok(Subset(bits))
    }

    /// `{a, a+1, …, b}`; empty when `a > b`.
    pub fn interval(a: u32, b: u32) -> Subset {
        let a = a.max(1);
        let b = b.min(MAX_GROUND);
        if a > b {
            return Subset::EMPTY;
        }
        Subset::prefix(b).difference(Subset::prefix(a - 1))
    }

    /// `[m] = {1, …, m}`.
    pub fn prefix(m: u32) -> Subset {
        if m >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << m) - 1)
        }
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: u32) -> bool {
        (1..=MAX_GROUND).contains(&e) && self.0 >> (e - 1) & 1 == 1
    }

    pub fn with(self, e: u32) -> Subset {
        Subset(self.0 | 1 << (e - 1))
    }

    pub fn without(self, e: u32) -> Subset {
        Subset(self.0 & !(1 << (e - 1)))
    }

    pub fn intersect(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Number of elements in `self ∩ [m]`.
    pub fn count_upto(self, m: u32) -> u32 {
        self.intersect(Subset::prefix(m)).len()
    }

    pub fn max_element(self) -> Option<u32> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros())
    }

    pub fn within(self, n: u32) -> bool {
        self.is_subset_of(Subset::prefix(n))
    }

    /// Elements in increasing order.
    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.elements().collect()
    }
}

pub struct Elements(u64);

impl Iterator for Elements {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(e + 1)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (idx, e) in self.elements().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// All `k`-subsets of `[n]` in colex order (Gosper's hack).
pub fn k_subsets(n: u32, k: u32) -> KSubsets {
    assert!(n <= MAX_GROUND, "ground set larger than 64");
    let next = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(Subset::prefix(k).0)
    };
    KSubsets { n, next }
}

pub struct KSubsets {
    n: u32,
    next: Option<u64>,
}

impl Iterator for KSubsets {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let (r, overflow) = cur.overflowing_add(c);
            if overflow {
                None
            } else {
                let nxt = (((r ^ cur) >> 2) / c) | r;
                (nxt >> self.n.min(63) == 0 || self.n == 64).then_some(nxt)
            }
        };
        Some(Subset(cur))
    }
}

/// All `2^n` subsets of `[n]` in numeric order.
pub fn all_subsets(n: u32) -> impl Iterator<Item = Subset> {
    assert!(n < 64, "ground set too large for full enumeration");
    (0..1u64 << n).map(Subset)
}

/// A duplicate-free collection of subsets of `[ground_n]`, stored in colex order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    ground_n: u32,
    members: Vec<Subset>,
    uniform_k: Option<u32>,
}

impl Family {
    /// Builds a family; `uniform_k` is inferred when the family is non-empty
    /// and all members share a size.
    pub fn new(ground_n: u32, members: impl IntoIterator<Item = Subset>) -> Result<Family> {
        let members = Self::normalize(ground_n, members)?;
        let uniform_k = match members.first() {
            Some(first) if members.iter().all(|m| m.len() == first.len()) => Some(first.len()),
            _ => None,
        };
        Ok(Family {
            ground_n,
            members,
            uniform_k,
        })
    }

    /// Builds a `k`-uniform family, rejecting members of other sizes.
    pub fn uniform(ground_n: u32, k: u32, members: impl IntoIterator<Item = Subset>) -> Result<Family> {
        let members = Self::normalize(ground_n, members)?;
        if let Some(bad) = members.iter().find(|m| m.len() != k) {
            return Err(Error::param(format!("member {bad} does not have {k} elements")));
        }
        if k > ground_n {
            return Err(Error::param(format!("k = {k} exceeds n = {ground_n}")));
        }
        Ok(Family {
            ground_n,
            members,
            uniform_k: Some(k),
        })
    }

    pub fn empty(ground_n: u32) -> Family {
        Family {
            ground_n,
            members: Vec::new(),
            uniform_k: None,
        }
    }

    fn normalize(ground_n: u32, members: impl IntoIterator<Item = Subset>) -> Result<Vec<Subset>> {
        if ground_n > MAX_GROUND {
            return Err(Error::param(format!("ground set size {ground_n} exceeds 64")));
        }
        let set: BTreeSet<Subset> = members.into_iter().collect();
        if let Some(bad) = set.iter().find(|m| !m.within(ground_n)) {
            return Err(Error::param(format!("member {bad} not inside [{ground_n}]")));
        }
        Ok(set.into_iter().collect())
    }

    pub fn ground_n(&self) -> u32 {
        self.ground_n
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn uniform_k(&self) -> Option<u32> {
        self.uniform_k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        self.members.iter().copied()
    }

    /// Union of all members.
    pub fn support(&self) -> Subset {
        self.iter().fold(Subset::EMPTY, Subset::union)
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family(n={}, ", self.ground_n)?;
        f.debug_list().entries(self.members.iter()).finish()?;
        f.write_str(")")
    }
}

/// Whether any `r` members (repetition allowed) share at least `t` elements.
///
/// Only subfamilies of size `min(r, |fam|)` are examined: intersecting more
/// distinct sets can only shrink the result, and repeated members add nothing.
pub fn is_rwise_t_intersecting(fam: &Family, r: u32, t: u32) -> bool {
    let m = fam.members();
    if m.is_empty() {
        return true;
    }
    let s = (r.max(1) as usize).min(m.len());
    all_combos_meet(m, s, t, 0, Subset::prefix(64))
}

fn all_combos_meet(m: &[Subset], left: usize, t: u32, start: usize, acc: Subset) -> bool {
    if acc.len() < t {
        return false;
    }
    if left == 0 {
        return true;
    }
    (start..=m.len() - left).all(|i| all_combos_meet(m, left - 1, t, i + 1, acc.intersect(m[i])))
}

/// Intersection of all members.
pub fn common_intersection(fam: &Family) -> Result<Subset> {
    if fam.is_empty() {
        return Err(Error::param("common intersection of an empty family"));
    }
    Ok(fam.iter().fold(Subset::prefix(64), Subset::intersect))
}

/// Whether all members contain a common `t`-set. The empty family counts as a star.
pub fn is_t_star(fam: &Family, t: u32) -> bool {
    common_intersection(fam).map_or(true, |c| c.len() >= t)
}

/// `F(P, Q) = { F \ Q : F ∩ Q = P }`, kept on the original ground set.
pub fn restrict(fam: &Family, p: Subset, q: Subset) -> Result<Family> {
    if !p.is_subset_of(q) {
        return Err(Error::param(format!("{p} is not a subset of {q}")));
    }
    let members = fam
        .iter()
        .filter(|f| f.intersect(q) == p)
        .map(|f| f.difference(q));
    match fam.uniform_k().and_then(|k| k.checked_sub(p.len())) {
        Some(k) => Family::uniform(fam.ground_n(), k, members),
        None => Family::new(fam.ground_n(), members),
    }
}

/// `F(i)`: members containing `i`, with `i` removed.
pub fn restrict_containing(fam: &Family, i: u32) -> Result<Family> {
    let q = Subset::EMPTY.with(i);
    restrict(fam, q, q)
}

/// `F(ī)`: members avoiding `i`.
pub fn restrict_avoiding(fam: &Family, i: u32) -> Result<Family> {
    restrict(fam, Subset::EMPTY, Subset::EMPTY.with(i))
}

/// Plain-text family format: a header `n=<n> k=<k|*>` followed by one member
/// per line as comma-separated elements. `-` denotes the empty set; blank
/// lines and `#` comments are ignored.
pub mod io {
    use super::*;

    pub fn to_text(fam: &Family) -> String {
        let mut out = match fam.uniform_k() {
            Some(k) => format!("n={} k={}\n", fam.ground_n(), k),
            None => format!("n={} k=*\n", fam.ground_n()),
        };
        for m in fam.iter() {
            if m.is_empty() {
                out.push('-');
            } else {
                let parts: Vec<String> = m.elements().map(|e| e.to_string()).collect();
                out.push_str(&parts.join(","));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Family> {
        let mut header: Option<(u32, Option<u32>)> = None;
        let mut members = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            match header {
                None => header = Some(parse_header(line).map_err(err)?),
                Some((n, _)) => {
                    let s = parse_member(line, n).map_err(err)?;
                    members.push(s);
                }
            }
        }
        let (n, k) = header.ok_or(Error::Parse {
            line: 0,
            message: "missing header `n=<n> k=<k|*>`".into(),
        })?;
        match k {
            Some(k) => Family::uniform(n, k, members),
            None => Family::new(n, members),
        }
    }

    fn parse_header(line: &str) -> std::result::Result<(u32, Option<u32>), String> {
        let mut n = None;
        let mut k = None;
        for tok in line.split_whitespace() {
            match tok.split_once('=') {
                Some(("n", v)) => n = Some(v.parse::<u32>().map_err(|_| format!("bad n: {v}"))?),
                Some(("k", "*")) => k = Some(None),
                Some(("k", v)) => k = Some(Some(v.parse::<u32>().map_err(|_| format!("bad k: {v}"))?)),
                _ => return Err(format!("unexpected header token {tok:?}")),
            }
        }
        let n = n.ok_or("header lacks n=")?;
        if n > MAX_GROUND {
            return Err(format!("n = {n} exceeds 64"));
        }
        Ok((n, k.unwrap_or(None)))
    }

    fn parse_member(line: &str, n: u32) -> std::result::Result<Subset, String> {
        if line == "-" {
            return Ok(Subset::EMPTY);
        }
        let mut s = Subset::EMPTY;
        for part in line.split(',') {
            let e: u32 = part
                .trim()
                .parse()
                .map_err(|_| format!("bad element {:?}", part.trim()))?;
            if e == 0 || e > n {
                return Err(format!("element {e} outside [{n}]"));
            }
            if s.contains(e) {
                return Err(format!("element {e} repeated"));
            }
            s = s.with(e);
        }
        Ok(s)
    }
}
