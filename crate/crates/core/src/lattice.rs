//! Sets as monotone lattice paths, and exact counts of paths touching the
//! line `y = (r-1)x + t`.
//!
//! A set `F ⊆ [n]` walks from `(0,0)`: step `i` goes up when `i ∈ F` and right
//! otherwise. Along the path `D = y - (r-1)x - t` moves by `+1` or `-(r-1)`, so
//! the path touches the line exactly when `D` reaches zero.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{binom, binom_or_zero, BigInt, BigRational};
use crate::setfamilies::Subset;

/// The line `y = (r-1)x + t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeLine {
    r: u32,
    t: u32,
}

impl LatticeLine {
    pub fn new(r: u32, t: u32) -> Result<LatticeLine> {
        if r < 2 {
            return Err(Error::param("line slope needs r >= 2"));
        }
        if t < 1 {
            return Err(Error::param("line offset needs t >= 1"));
        }
        Ok(LatticeLine { r, t })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// Signed vertical offset of `(x, y)` from the line.
    pub fn offset(&self, x: i64, y: i64) -> i64 {
        y - (self.r as i64 - 1) * x - self.t as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Up,
    Right,
}

/// `P(F)`: one step per element of `[n]`.
pub fn path_of_set(f: Subset, n: u32) -> Result<Vec<Step>> {
    if !f.within(n) {
        return Err(Error::param(format!("{f} is not inside [{n}]")));
    }
    Ok((1..=n).map(|i| if f.contains(i) { Step::Up } else { Step::Right }).collect())
}

pub fn set_of_path(path: &[Step]) -> Subset {
    path.iter()
        .enumerate()
        .filter(|(_, s)| **s == Step::Up)
        .fold(Subset::EMPTY, |acc, (i, _)| acc.with(i as u32 + 1))
}

pub fn path_endpoint(path: &[Step]) -> (u32, u32) {
    let ups = path.iter().filter(|s| **s == Step::Up).count() as u32;
    (path.len() as u32 - ups, ups)
}

/// Whether `P(F)` touches the line, via the prefix condition
/// `|F ∩ [t + r·i]| ≥ t + (r-1)·i` for some `i` with `t + r·i ≤ n`.
pub fn hits_line(f: Subset, n: u32, line: LatticeLine) -> bool {
    let (r, t) = (line.r, line.t);
    (0..)
        .map(|i| (i, t + r * i))
        .take_while(|&(_, m)| m <= n)
        .any(|(i, m)| f.count_upto(m) >= t + (r - 1) * i)
}

/// Same question answered by walking the path point by point.
pub fn hits_line_by_walk(f: Subset, n: u32, line: LatticeLine) -> bool {
    let (mut x, mut y) = (0i64, 0i64);
    for i in 1..=n {
        if f.contains(i) {
            y += 1;
        } else {
            x += 1;
        }
        if line.offset(x, y) == 0 {
            return true;
        }
    }
    false
}

/// `avoid[x][y]`: paths from the origin to `(x,y)` that never touch the line,
/// endpoint included. `first[x][y]` (only meaningful on the line): paths whose
/// first touch is at `(x,y)`.
struct TouchTable {
    avoid: Vec<Vec<BigInt>>,
    first: Vec<Vec<BigInt>>,
}

fn touch_table(line: LatticeLine, xmax: u32, ymax: u32) -> TouchTable {
    let (w, h) = (xmax as usize + 1, ymax as usize + 1);
    let mut avoid = vec![vec![BigInt::zero(); h]; w];
    let mut first = vec![vec![BigInt::zero(); h]; w];
    for x in 0..w {
        for y in 0..h {
            let incoming = if x == 0 && y == 0 {
                BigInt::one()
            } else {
                let mut s = BigInt::zero();
                if x > 0 {
                    s += &avoid[x - 1][y];
                }
                if y > 0 {
                    s += &avoid[x][y - 1];
                }
                s
            };
            if line.offset(x as i64, y as i64) == 0 {
                first[x][y] = incoming;
            } else {
                avoid[x][y] = incoming;
            }
        }
    }
    TouchTable { avoid, first }
}

/// Number of paths from `(0,0)` to `(n-k, k)` touching the line, by summing
/// first-touch counts times the number of free continuations.
pub fn count_hitting_paths(n: u32, k: u32, line: LatticeLine) -> Result<BigInt> {
    if k > n {
        return Err(Error::param(format!("k = {k} exceeds n = {n}")));
    }
    let xmax = n - k;
    let table = touch_table(line, xmax, k);
    let mut total = BigInt::zero();
    for x in 0..=xmax {
        for y in 0..=k {
            let f = &table.first[x as usize][y as usize];
            if !f.is_zero() {
                let rest = (xmax - x) + (k - y);
                total += f * binom(rest as u64, (k - y) as i64);
            }
        }
    }
    Ok(total)
}

/// Number of paths to `(n-k, k)` that never touch the line.
pub fn count_avoiding_paths(n: u32, k: u32, line: LatticeLine) -> Result<BigInt> {
    if k > n {
        return Err(Error::param(format!("k = {k} exceeds n = {n}")));
    }
    Ok(touch_table(line, n - k, k).avoid[(n - k) as usize][k as usize].clone())
}

/// `g(n, i)`: probability that a uniformly random path to `(n-i, i)` touches the line.
pub fn g_uniform(n: u32, i: u32, line: LatticeLine) -> Result<BigRational> {
    let hits = count_hitting_paths(n, i, line)?;
    Ok(BigRational::new(hits, binom(n as u64, i as i64)))
}

/// `ℓ(t, i)` for `i = 0..=i_max`: paths from the origin to the line point
/// `(i, (r-1)i + t)` touching the line for the first time there.
pub fn first_hit_counts(line: LatticeLine, i_max: u32) -> Vec<BigInt> {
    let ymax = (line.r - 1) * i_max + line.t;
    let table = touch_table(line, i_max, ymax);
    (0..=i_max)
        .map(|i| table.first[i as usize][((line.r - 1) * i + line.t) as usize].clone())
        .collect()
}

/// Paths from `(i, t-i)` to `(n-k, k)` touching `y = x + (r-2)i + t`, by the
/// reflection principle: `C(n-t, k-t-(r-1)i)`.
///
/// Requires `r ≥ 3`, `i ≤ t`, the start to be able to reach the end, and the
/// end to lie on or below the reflecting line (true whenever `n ≥ 2k - t`).
pub fn reflection_count(n: u32, k: u32, i: u32, line: LatticeLine) -> Result<BigInt> {
    let (r, t) = (line.r as i64, line.t as i64);
    let (n, k, i) = (n as i64, k as i64, i as i64);
    if r < 3 {
        return Err(Error::param("reflection count needs r >= 3"));
    }
    if k > n {
        return Err(Error::param("k exceeds n"));
    }
    if i > t {
        return Err(Error::pre(format!("start (i, t-i) needs i <= t, got i={i}, t={t}")));
    }
    if i > n - k {
        return Err(Error::pre(format!("start x = {i} lies beyond end x = {}", n - k)));
    }
    if 2 * k - n - (r - 2) * i - t > 0 {
        return Err(Error::pre("end point lies above the reflecting line"));
    }
    Ok(binom_or_zero(n - t, k - t - (r - 1) * i))
}

/// Direct count for [`reflection_count`]: paths from `(x0,y0)` to `(x1,y1)`
/// touching `y = x + c`.
pub fn count_paths_touching_diagonal(x0: i64, y0: i64, x1: i64, y1: i64, c: i64) -> BigInt {
    if x1 < x0 || y1 < y0 {
        return BigInt::zero();
    }
    let (w, h) = ((x1 - x0) as usize + 1, (y1 - y0) as usize + 1);
    // State: (paths that have touched, paths that have not).
    let mut touched = vec![vec![BigInt::zero(); h]; w];
    let mut clean = vec![vec![BigInt::zero(); h]; w];
    for dx in 0..w {
        for dy in 0..h {
            let (x, y) = (x0 + dx as i64, y0 + dy as i64);
            let (mut tch, mut cln) = if dx == 0 && dy == 0 {
                (BigInt::zero(), BigInt::one())
            } else {
                let mut tc = BigInt::zero();
                let mut cl = BigInt::zero();
                if dx > 0 {
                    tc += &touched[dx - 1][dy];
                    cl += &clean[dx - 1][dy];
                }
                if dy > 0 {
                    tc += &touched[dx][dy - 1];
                    cl += &clean[dx][dy - 1];
                }
                (tc, cl)
            };
            if y == x + c {
                tch += std::mem::take(&mut cln);
            }
            touched[dx][dy] = tch;
            clean[dx][dy] = cln;
        }
    }
    touched[w - 1][h - 1].clone()
}

fn check_shifted_bound_params(n: u32, k: u32, r: u32, t: u32) -> Result<()> {
    if r < 3 {
        return Err(Error::param("bound needs r >= 3"));
    }
    if t < 1 {
        return Err(Error::param("bound needs t >= 1"));
    }
    if (n as i64) < 2 * k as i64 - t as i64 {
        return Err(Error::pre(format!("bound needs n >= 2k - t, got n={n}, k={k}, t={t}")));
    }
    Ok(())
}

fn key_sum(n: u32, k: u32, r: u32, t: u32, from: u32) -> BigInt {
    (from..=t)
        .map(|i| {
            binom(t as u64, i as i64)
                * binom_or_zero(n as i64 - t as i64, k as i64 - t as i64 - (r as i64 - 1) * i as i64)
        })
        .sum()
}

/// `Σ_{0≤i≤t} C(t,i)·C(n-t, k-t-(r-1)i)`, an upper bound on shifted families.
pub fn shifted_bound(n: u32, k: u32, r: u32, t: u32) -> Result<BigInt> {
    check_shifted_bound_params(n, k, r, t)?;
    Ok(key_sum(n, k, r, t, 0))
}

/// The `i ≥ 1` part of [`shifted_bound`], bounding members outside `F_0`.
pub fn shifted_bound_outer(n: u32, k: u32, r: u32, t: u32) -> Result<BigInt> {
    check_shifted_bound_params(n, k, r, t)?;
    Ok(key_sum(n, k, r, t, 1))
}

/// [`shifted_bound`] minus `C(n-t-1, k-t)`, valid for families that are not `t`-stars.
pub fn shifted_bound_nonstar(n: u32, k: u32, r: u32, t: u32) -> Result<BigInt> {
    Ok(shifted_bound(n, k, r, t)? - binom_or_zero(n as i64 - t as i64 - 1, k as i64 - t as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfamilies::k_subsets;
    use proptest::prelude::*;

    fn line(r: u32, t: u32) -> LatticeLine {
        LatticeLine::new(r, t).unwrap()
    }

    fn brute_count(n: u32, k: u32, l: LatticeLine) -> BigInt {
        BigInt::from(k_subsets(n, k).filter(|&f| hits_line_by_walk(f, n, l)).count())
    }

    #[test]
    fn path_examples() {
        use Step::*;
        assert_eq!(path_of_set(Subset::from_elems(&[1, 2]), 2).unwrap(), vec![Up, Up]);
        let empty = path_of_set(Subset::EMPTY, 3).unwrap();
        assert_eq!(empty, vec![Right, Right, Right]);
        assert_eq!(path_endpoint(&empty), (3, 0));
        let p = path_of_set(Subset::from_elems(&[1, 3]), 4).unwrap();
        assert_eq!(p, vec![Up, Right, Up, Right]);
        assert_eq!(path_endpoint(&p), (2, 2));
        assert!(path_of_set(Subset::from_elems(&[5]), 4).is_err());
    }

    #[test]
    fn hits_examples() {
        assert!(hits_line(Subset::from_elems(&[1, 3, 4]), 6, line(3, 1)));
        assert!(!hits_line(Subset::from_elems(&[2, 3]), 4, line(3, 1)));
        assert!(hits_line(Subset::from_elems(&[1, 2, 3, 7]), 8, line(5, 3)));
        assert!(LatticeLine::new(1, 1).is_err());
        assert!(LatticeLine::new(3, 0).is_err());
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_hitting_paths(4, 2, line(3, 1)).unwrap(), BigInt::from(3));
        for k in 1..=8 {
            for t in 1..=k {
                assert_eq!(count_hitting_paths(k, k, line(3, t)).unwrap(), BigInt::one());
            }
            assert_eq!(count_hitting_paths(k + 3, k, line(3, k + 1)).unwrap(), BigInt::zero());
        }
        assert_eq!(g_uniform(4, 2, line(3, 1)).unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(g_uniform(6, 6, line(4, 3)).unwrap(), BigRational::one());
        assert_eq!(g_uniform(6, 2, line(4, 3)).unwrap(), BigRational::zero());
    }

    #[test]
    fn touches_happen_after_t_mod_r_steps() {
        for n in 1..=12 {
            for r in 2..=5 {
                for t in 1..=4 {
                    let l = line(r, t);
                    for f in crate::setfamilies::all_subsets(n) {
                        let (mut x, mut y) = (0i64, 0i64);
                        for i in 1..=n {
                            if f.contains(i) {
                                y += 1
                            } else {
                                x += 1
                            }
                            if l.offset(x, y) == 0 {
                                assert_eq!(i % r, t % r);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dp_matches_enumeration() {
        for n in 0..=12 {
            for k in 0..=n {
                for r in 2..=5 {
                    for t in 1..=4 {
                        let l = line(r, t);
                        let dp = count_hitting_paths(n, k, l).unwrap();
                        assert_eq!(dp, brute_count(n, k, l), "n={n} k={k} r={r} t={t}");
                        assert_eq!(dp + count_avoiding_paths(n, k, l).unwrap(), binom(n as u64, k as i64));
                    }
                }
            }
        }
    }

    #[test]
    fn first_hits_match_enumeration() {
        for r in 2..=5u32 {
            for t in 1..=4u32 {
                let l = line(r, t);
                let imax = (16 - t) / r;
                let ell = first_hit_counts(l, imax);
                assert_eq!(ell[0], BigInt::one());
                for i in 0..=imax {
                    let len = t + r * i;
                    let ups = t + (r - 1) * i;
                    // Paths of that length ending on the line point whose only touch is the last step.
                    let brute = k_subsets(len, ups)
                        .filter(|&f| {
                            let (mut x, mut y) = (0i64, 0i64);
                            let mut first_touch = None;
                            for s in 1..=len {
                                if f.contains(s) {
                                    y += 1
                                } else {
                                    x += 1
                                }
                                if l.offset(x, y) == 0 && first_touch.is_none() {
                                    first_touch = Some(s);
                                }
                            }
                            first_touch == Some(len)
                        })
                        .count();
                    assert_eq!(ell[i as usize], BigInt::from(brute), "r={r} t={t} i={i}");
                }
            }
        }
    }

    #[test]
    fn central_count_decomposes_by_first_hit() {
        for r in 3..=4u32 {
            for t in 1..=3u32 {
                let l = line(r, t);
                for k in 1..=10u32 {
                    let ell = first_hit_counts(l, k);
                    let sum: BigInt = (0..=k)
                        .map(|i| {
                            &ell[i as usize]
                                * binom_or_zero(
                                    2 * k as i64 - (r * i) as i64 - t as i64,
                                    k as i64 - ((r - 1) * i) as i64 - t as i64,
                                )
                        })
                        .sum();
                    assert_eq!(sum, count_hitting_paths(2 * k, k, l).unwrap(), "r={r} t={t} k={k}");
                }
            }
        }
    }

    #[test]
    fn reflection_matches_dp() {
        let mut checked = 0;
        for n in 1..=14u32 {
            for k in 0..=n {
                for r in 3..=5u32 {
                    for t in 1..=4u32 {
                        for i in 0..=t {
                            let l = line(r, t);
                            match reflection_count(n, k, i, l) {
                                Ok(v) => {
                                    let c = ((r - 2) * i + t) as i64;
                                    let dp = count_paths_touching_diagonal(
                                        i as i64,
                                        t as i64 - i as i64,
                                        (n - k) as i64,
                                        k as i64,
                                        c,
                                    );
                                    assert_eq!(v, dp, "n={n} k={k} r={r} t={t} i={i}");
                                    checked += 1;
                                }
                                Err(Error::Precondition(_)) => {}
                                Err(e) => panic!("{e}"),
                            }
                        }
                    }
                }
            }
        }
        assert!(checked > 1000);
        let l = line(3, 2);
        assert_eq!(reflection_count(10, 5, 0, l).unwrap(), binom(8, 3));
        assert_eq!(reflection_count(10, 3, 2, l).unwrap(), BigInt::zero());
        assert!(reflection_count(10, 5, 0, line(2, 2)).is_err());
    }

    #[test]
    fn key_bounds() {
        assert_eq!(shifted_bound(10, 5, 3, 2).unwrap(), BigInt::from(72));
        assert_eq!(shifted_bound_outer(10, 5, 3, 2).unwrap(), BigInt::from(16));
        assert_eq!(shifted_bound_nonstar(10, 5, 3, 2).unwrap(), BigInt::from(72 - 35));
        assert!(shifted_bound(10, 5, 2, 2).is_err());
        assert!(shifted_bound(6, 5, 3, 2).is_err());
        for n in 1..=14u32 {
            for k in 0..=n {
                for r in 3..=5u32 {
                    for t in 1..=4u32 {
                        if let Ok(b) = shifted_bound(n, k, r, t) {
                            let c = count_hitting_paths(n, k, line(r, t)).unwrap();
                            assert!(b >= c, "n={n} k={k} r={r} t={t}: {b} < {c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn uniform_walk_monotonicity() {
        for r in 2..=5u32 {
            for t in 1..=4u32 {
                let l = line(r, t);
                for n in 1..=20u32 {
                    for i in 0..n {
                        assert!(g_uniform(n, i, l).unwrap() <= g_uniform(n, i + 1, l).unwrap());
                    }
                    if n < 20 {
                        for k in 0..=n {
                            assert!(g_uniform(n + 1, k, l).unwrap() <= g_uniform(n, k, l).unwrap());
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn path_bijection(bits in any::<u32>(), n in 0u32..=20) {
            let f = Subset::from_bits(bits as u64 & Subset::prefix(n).bits());
            let p = path_of_set(f, n).unwrap();
            prop_assert_eq!(set_of_path(&p), f);
            prop_assert_eq!(path_endpoint(&p), (n - f.len(), f.len()));
        }

        #[test]
        fn prefix_condition_matches_walk(bits in any::<u32>(), n in 0u32..=20, r in 2u32..=6, t in 1u32..=5) {
            let f = Subset::from_bits(bits as u64 & Subset::prefix(n).bits());
            let l = line(r, t);
            prop_assert_eq!(hits_line(f, n, l), hits_line_by_walk(f, n, l));
        }
    }
}
