//! Branch-and-bound over families of `k`-sets.
//!
//! Candidates are indexed in colex order and tracked in word bitsets. A node
//! holds the chosen members, the candidates still compatible with them and a
//! pool of intersections of at most `r-1` chosen members; a candidate stays
//! compatible as long as it meets every pool element in at least `t` points.

use std::collections::HashMap;

use crate::lattice::{hits_line, LatticeLine};
use crate::setfamilies::{k_subsets, Subset};
use crate::shifting::lower_covers;

pub(crate) type Bits = Vec<u64>;

fn bit(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn clear_bit(b: &mut Bits, i: usize) {
    b[i / 64] &= !(1 << (i % 64));
}

fn count(b: &Bits) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

fn first(b: &Bits) -> Option<usize> {
    b.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn ones(b: &Bits) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let tz = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * 64 + tz)
        })
    })
}

/// The candidate `k`-sets of a search, in colex order.
pub(crate) struct Universe {
    pub sets: Vec<Subset>,
    words: usize,
    /// Lower covers in `≺` (shifted mode only), as universe indices.
    lower: Vec<Vec<usize>>,
    /// Strict up-sets in `≺` (shifted mode only).
    upset: Vec<Bits>,
    shifted: bool,
}

impl Universe {
    /// All `k`-sets of `[n]` with at least `t` elements (so none when `k < t`).
    pub fn free(n: u32, k: u32, t: u32) -> Universe {
        let sets: Vec<Subset> = if k < t { Vec::new() } else { k_subsets(n, k).collect() };
        let words = sets.len().div_ceil(64).max(1);
        Universe {
            sets,
            words,
            lower: Vec::new(),
            upset: Vec::new(),
            shifted: false,
        }
    }

    /// `k`-sets whose lattice path touches `y = (r-1)x + t`, with the
    /// shifted-order structure needed to search down-sets only. Every shifted
    /// `r`-wise `t`-intersecting family lives inside this universe.
    pub fn shifted(n: u32, k: u32, r: u32, t: u32) -> Universe {
        let line = LatticeLine::new(r, t).expect("validated parameters");
        let sets: Vec<Subset> = if k < t {
            Vec::new()
        } else {
            k_subsets(n, k).filter(|&s| hits_line(s, n, line)).collect()
        };
        let words = sets.len().div_ceil(64).max(1);
        let index: HashMap<Subset, usize> = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let lower: Vec<Vec<usize>> = sets
            .iter()
            .map(|&s| lower_covers(s).map(|c| index[&c]).collect())
            .collect();
        let mut upper: Vec<Vec<usize>> = vec![Vec::new(); sets.len()];
        for (i, covers) in lower.iter().enumerate() {
            for &c in covers {
                upper[c].push(i);
            }
        }
        // Colex extends ≺, so every upper cover has a larger index.
        let mut upset: Vec<Bits> = vec![vec![0; words]; sets.len()];
        for i in (0..sets.len()).rev() {
            let mut acc = vec![0u64; words];
            for &u in &upper[i] {
                set_bit(&mut acc, u);
                for (a, b) in acc.iter_mut().zip(&upset[u]) {
                    *a |= b;
                }
            }
            upset[i] = acc;
        }
        Universe {
            sets,
            words,
            lower,
            upset,
            shifted: true,
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    fn full(&self) -> Bits {
        let mut b = vec![0u64; self.words];
        for i in 0..self.sets.len() {
            set_bit(&mut b, i);
        }
        b
    }
}

/// Extra constraint on the common intersection of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Restriction {
    None,
    /// `|∩F| < s` and `F` non-empty.
    CommonBelow(u32),
}

pub(crate) struct Outcome {
    pub best: usize,
    pub witness: Vec<Subset>,
    pub nodes: u64,
    pub aborted: bool,
}

pub(crate) struct Search<'u> {
    u: &'u Universe,
    r: u32,
    t: u32,
    restriction: Restriction,
    /// Values at or below this are not interesting (strict improvement needed).
    best: usize,
    best_members: Option<Vec<usize>>,
    /// Stop as soon as `best` reaches this certified upper bound.
    ceiling: usize,
    nodes: u64,
    node_cap: Option<u64>,
    aborted: bool,
    done: bool,
    chosen: Vec<usize>,
    chosen_bits: Bits,
    pool: Vec<(Subset, u32)>,
    pool_order: HashMap<Subset, u32>,
}

impl<'u> Search<'u> {
    pub fn new(u: &'u Universe, r: u32, t: u32, restriction: Restriction) -> Self {
        assert!(
            !(u.shifted && restriction != Restriction::None),
            "restricted searches must not use the shifted reduction"
        );
        Search {
            u,
            r,
            t,
            restriction,
            best: 0,
            best_members: None,
            ceiling: usize::MAX,
            nodes: 0,
            node_cap: None,
            aborted: false,
            done: false,
            chosen: Vec::new(),
            chosen_bits: vec![0; u.words],
            pool: Vec::new(),
            pool_order: HashMap::new(),
        }
    }

    /// Only families strictly larger than `floor` are reported.
    pub fn with_floor(mut self, floor: usize) -> Self {
        self.best = floor;
        self
    }

    pub fn with_ceiling(mut self, ceiling: usize) -> Self {
        self.ceiling = ceiling;
        self
    }

    pub fn with_node_cap(mut self, cap: Option<u64>) -> Self {
        self.node_cap = cap;
        self
    }

    /// Runs the search. When `force_first` is set the colex-first set `[k]`
    /// is placed in the family at the root, which loses nothing for
    /// problems invariant under relabelling the ground set.
    pub fn run(mut self, force_first: bool) -> Outcome {
        let mut cand = self.u.full();
        if force_first && !self.u.sets.is_empty() && !self.u.shifted {
            clear_bit(&mut cand, 0);
            self.nodes += 1;
            self.include(cand, 0);
        } else {
            self.dfs(cand);
        }
        Outcome {
            best: self.best,
            witness: self
                .best_members
                .map(|m| m.into_iter().map(|i| self.u.sets[i]).collect())
                .unwrap_or_default(),
            nodes: self.nodes,
            aborted: self.aborted,
        }
    }

    fn common_of(&self, b: &Bits, start: Subset) -> Subset {
        ones(b).fold(start, |acc, i| acc.intersect(self.u.sets[i]))
    }

    fn restriction_blocks(&self, cand: &Bits) -> bool {
        match self.restriction {
            Restriction::None => false,
            Restriction::CommonBelow(s) => {
                let base = self.common_of(&self.chosen_bits, Subset::prefix(64));
                let all = self.common_of(cand, base);
                all.len() >= s
            }
        }
    }

    fn leaf_ok(&self) -> bool {
        match self.restriction {
            Restriction::None => true,
            Restriction::CommonBelow(s) => {
                !self.chosen.is_empty() && self.common_of(&self.chosen_bits, Subset::prefix(64)).len() < s
            }
        }
    }

    fn dfs(&mut self, mut cand: Bits) {
        if self.done {
            return;
        }
        self.nodes += 1;
        if let Some(cap) = self.node_cap {
            if self.nodes > cap {
                self.aborted = true;
                self.done = true;
                return;
            }
        }
        if self.chosen.len() + count(&cand) <= self.best {
            return;
        }
        if self.restriction_blocks(&cand) {
            return;
        }
        let Some(x) = first(&cand) else {
            if self.leaf_ok() {
                self.best = self.chosen.len();
                self.best_members = Some(self.chosen.clone());
                if self.best >= self.ceiling {
                    self.done = true;
                }
            }
            return;
        };
        clear_bit(&mut cand, x);
        let includable = !self.u.shifted || self.u.lower[x].iter().all(|&c| bit(&self.chosen_bits, c));
        if includable {
            self.include(cand.clone(), x);
        }
        if self.u.shifted {
            for (a, b) in cand.iter_mut().zip(&self.u.upset[x]) {
                *a &= !b;
            }
        }
        self.dfs(cand);
    }

    /// Adds `x`, filters the candidates against the new intersections, recurses, undoes.
    fn include(&mut self, mut cand: Bits, x: usize) {
        let xs = self.u.sets[x];
        let pool_len = self.pool.len();
        let mut undo: Vec<(Subset, Option<u32>)> = Vec::new();
        let mut fresh: Vec<Subset> = Vec::new();
        let mut push = |this: &mut Self, v: Subset, order: u32, fresh: &mut Vec<Subset>| {
            let prev = this.pool_order.get(&v).copied();
            if prev.is_some_and(|p| p <= order) {
                return;
            }
            this.pool_order.insert(v, order);
            undo.push((v, prev));
            this.pool.push((v, order));
            if prev.is_none() {
                fresh.push(v);
            }
        };
        if self.r >= 2 {
            push(self, xs, 1, &mut fresh);
            for idx in 0..pool_len {
                let (v, order) = self.pool[idx];
                if order + 1 <= self.r - 1 {
                    push(self, v.intersect(xs), order + 1, &mut fresh);
                }
            }
        }
        let before = if self.u.shifted { Some(cand.clone()) } else { None };
        let t = self.t;
        for i in ones(&cand.clone()).collect::<Vec<_>>() {
            let c = self.u.sets[i];
            if fresh.iter().any(|v| c.intersect(*v).len() < t) {
                clear_bit(&mut cand, i);
            }
        }
        if let Some(before) = before {
            let removed: Vec<usize> = before
                .iter()
                .zip(&cand)
                .enumerate()
                .flat_map(|(wi, (b, a))| {
                    let mut w = b & !a;
                    std::iter::from_fn(move || {
                        if w == 0 {
                            return None;
                        }
                        let tz = w.trailing_zeros() as usize;
                        w &= w - 1;
                        Some(wi * 64 + tz)
                    })
                })
                .collect();
            for y in removed {
                for (a, b) in cand.iter_mut().zip(&self.u.upset[y]) {
                    *a &= !b;
                }
            }
        }
        self.chosen.push(x);
        set_bit(&mut self.chosen_bits, x);
        self.dfs(cand);
        clear_bit(&mut self.chosen_bits, x);
        self.chosen.pop();
        self.pool.truncate(pool_len);
        for (v, prev) in undo.into_iter().rev() {
            match prev {
                Some(p) => {
                    self.pool_order.insert(v, p);
                }
                None => {
                    self.pool_order.remove(&v);
                }
            }
        }
    }
}

/// Visits every `r`-wise `t`-intersecting family in the universe (every
/// shifted one in shifted mode), passing the member list. Returns `false` if
/// the visit limit stopped the enumeration early.
pub(crate) fn for_each_family(
    u: &Universe,
    r: u32,
    t: u32,
    limit: u64,
    visit: &mut dyn FnMut(&[Subset]),
) -> bool {
    struct En<'a> {
        u: &'a Universe,
        r: u32,
        t: u32,
        chosen: Vec<usize>,
        chosen_bits: Bits,
        visits: u64,
        limit: u64,
    }
    impl En<'_> {
        fn compatible(&self, c: Subset) -> bool {
            fn go(m: &[Subset], left: u32, t: u32, start: usize, acc: Subset) -> bool {
                if acc.len() < t {
                    return false;
                }
                if left == 0 {
                    return true;
                }
                (start..m.len()).all(|i| go(m, left - 1, t, i + 1, acc.intersect(m[i])))
            }
            let members: Vec<Subset> = self.chosen.iter().map(|&i| self.u.sets[i]).collect();
            go(&members, self.r - 1, self.t, 0, c)
        }

        fn go(&mut self, pos: usize, visit: &mut dyn FnMut(&[Subset])) -> bool {
            if pos == self.u.len() {
                self.visits += 1;
                if self.visits > self.limit {
                    return false;
                }
                let members: Vec<Subset> = self.chosen.iter().map(|&i| self.u.sets[i]).collect();
                visit(&members);
                return true;
            }
            let x = self.u.sets[pos];
            let can = (!self.u.shifted || self.u.lower[pos].iter().all(|&c| bit(&self.chosen_bits, c)))
                && self.compatible(x);
            if can {
                self.chosen.push(pos);
                set_bit(&mut self.chosen_bits, pos);
                let ok = self.go(pos + 1, visit);
                clear_bit(&mut self.chosen_bits, pos);
                self.chosen.pop();
                if !ok {
                    return false;
                }
            }
            self.go(pos + 1, visit)
        }
    }
    let mut en = En {
        u,
        r,
        t,
        chosen: Vec::new(),
        chosen_bits: vec![0; u.words],
        visits: 0,
        limit,
    };
    en.go(0, visit)
}
