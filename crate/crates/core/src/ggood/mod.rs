//! G-good primes and the enumerative layer built on them.
//!
//! A monomial prime containing `a_1, …, a_r` is encoded by one subset
//! `S_i ⊆ [r]` per row of the `m × r` matrix `[x_{i,j}]` (the columns whose
//! `x_{i,j}` it contains) plus a flag for the `c` variables. It is g-good when
//! no row misses two cyclically consecutive columns.

pub mod counts;
pub mod witness;

use std::fmt;

use crate::bhh::BhhParams;
use crate::decomposition::MonomialPrime;
use crate::error::{Error, Result};

pub use counts::*;
pub use witness::*;

/// Row masks: bit `j-1` set iff column `j` is in the prime.
type RowMask = u64;

fn full_mask(r: usize) -> RowMask {
    if r == 64 {
        RowMask::MAX
    } else {
        (1 << r) - 1
    }
}

fn rotate_left(mask: RowMask, r: usize) -> RowMask {
    let full = full_mask(r);
    ((mask << 1) | (mask >> (r - 1))) & full
}

/// `true` iff the missing columns of `mask` contain no cyclically adjacent pair.
pub fn row_is_ggood(mask: RowMask, r: usize) -> bool {
    let missing = !mask & full_mask(r);
    missing & rotate_left(missing, r) == 0
}

/// How a row of a pattern sits inside the prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Full,
    /// Exactly every other column (only possible for even `r`).
    HalfFull,
    Other,
}

/// A prime `(a_1..a_r) + (x_{i,j} : j ∈ S_i) [+ (c_1..c_s)]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GGoodPattern {
    m: usize,
    r: usize,
    rows: Vec<RowMask>,
    contains_c: bool,
}

impl GGoodPattern {
    /// Builds a pattern from column sets (1-based columns per row).
    pub fn new(r: usize, rows: &[Vec<usize>], contains_c: bool) -> Result<Self> {
        if r == 0 || r > 64 {
            return Err(Error::InvalidParams(format!("pattern width r={r} outside 1..=64")));
        }
        let mut masks = Vec::with_capacity(rows.len());
        for row in rows {
            let mut mask = 0;
            for &j in row {
                if j < 1 || j > r {
                    return Err(Error::InvalidParams(format!("column {j} outside 1..={r}")));
                }
                mask |= 1 << (j - 1);
            }
            masks.push(mask);
        }
        Ok(GGoodPattern {
            m: rows.len(),
            r,
            rows: masks,
            contains_c,
        })
    }

    fn from_masks(r: usize, rows: Vec<RowMask>, contains_c: bool) -> Self {
        GGoodPattern {
            m: rows.len(),
            r,
            rows,
            contains_c,
        }
    }

    /// Recovers the pattern of a prime that contains every `a_j` and either all
    /// or none of the `c_k`. Returns `None` otherwise.
    pub fn from_prime(p: &BhhParams, prime: &MonomialPrime) -> Option<Self> {
        let reg = p.registry();
        if prime.registry().as_ref() != reg.as_ref() {
            return None;
        }
        if !reg.a_slots().all(|s| prime.contains_var(s)) {
            return None;
        }
        let c_slots = reg.c_slots();
        let c_in = c_slots.iter().filter(|&&s| prime.contains_var(s)).count();
        if c_in != 0 && c_in != c_slots.len() {
            return None;
        }
        let mut rows = vec![0; p.m()];
        for &slot in prime.slots() {
            if let Some((i, j)) = reg.x_position(slot) {
                rows[i - 1] |= 1 << (j - 1);
            }
        }
        Some(Self::from_masks(p.r(), rows, c_in > 0))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn contains_c(&self) -> bool {
        self.contains_c
    }

    pub fn with_c(&self, contains_c: bool) -> Self {
        GGoodPattern {
            contains_c,
            ..self.clone()
        }
    }

    /// `true` iff `x_{i,j}` is in the prime (`j` cyclic).
    pub fn has(&self, i: usize, j: i64) -> bool {
        let col = ((j - 1).rem_euclid(self.r as i64)) as usize;
        self.rows[i - 1] >> col & 1 == 1
    }

    /// Columns of row `i` in the prime.
    pub fn row(&self, i: usize) -> Vec<usize> {
        (1..=self.r).filter(|&j| self.has(i, j as i64)).collect()
    }

    pub fn is_ggood(&self) -> bool {
        self.rows.iter().all(|&m| row_is_ggood(m, self.r))
    }

    pub fn row_kind(&self, i: usize) -> RowKind {
        let mask = self.rows[i - 1];
        if mask == full_mask(self.r) {
            RowKind::Full
        } else if self.r.is_multiple_of(2)
            && mask.count_ones() as usize == self.r / 2
            && row_is_ggood(mask, self.r)
        {
            RowKind::HalfFull
        } else {
            RowKind::Other
        }
    }

    /// Rows entirely in the prime.
    pub fn full_rows(&self) -> Vec<usize> {
        (1..=self.m)
            .filter(|&i| self.row_kind(i) == RowKind::Full)
            .collect()
    }

    /// `{(i, j) : x_{i,j} ∈ P, row i not full}`.
    pub fn v_set(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.m {
            if self.row_kind(i) == RowKind::Full {
                continue;
            }
            for j in self.row(i) {
                out.push((i, j));
            }
        }
        out
    }

    /// Every row is full or half-full.
    pub fn is_full_or_half(&self) -> bool {
        (1..=self.m).all(|i| self.row_kind(i) != RowKind::Other)
    }

    /// The encoded prime on `p`'s registry.
    pub fn to_prime(&self, p: &BhhParams) -> Result<MonomialPrime> {
        if p.m() != self.m || p.r() != self.r {
            return Err(Error::InvalidParams(format!(
                "pattern is {}×{} but params are m={}, r={}",
                self.m,
                self.r,
                p.m(),
                p.r()
            )));
        }
        let reg = p.registry();
        let mut slots: Vec<usize> = reg.a_slots().collect();
        if self.contains_c {
            slots.extend(reg.c_slots());
        }
        for i in 1..=self.m {
            for j in self.row(i) {
                slots.push(reg.x(i, j as i64));
            }
        }
        MonomialPrime::new(reg, slots)
    }
}

impl fmt::Display for GGoodPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (1..=self.m)
            .map(|i| {
                let cols: Vec<String> = self.row(i).iter().map(|j| j.to_string()).collect();
                format!("{{{}}}", cols.join(","))
            })
            .collect();
        write!(f, "[{}]{}", rows.join(" "), if self.contains_c { "+c" } else { "" })
    }
}

impl fmt::Debug for GGoodPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GGoodPattern{self}")
    }
}

/// `true` iff the prime contains all `a_j` and no row has a gap of length ≥ 2.
pub fn is_ggood(prime: &MonomialPrime, p: &BhhParams) -> bool {
    GGoodPattern::from_prime(p, prime).is_some_and(|pat| pat.is_ggood())
}

/// Same as [`is_ggood`] but ignores the `c` variables entirely.
pub fn is_ggood_ignoring_c(prime: &MonomialPrime, p: &BhhParams) -> bool {
    let reg = p.registry();
    if !reg.a_slots().all(|s| prime.contains_var(s)) {
        return false;
    }
    (1..=p.m()).all(|i| {
        let mask = (1..=p.r())
            .filter(|&j| prime.contains_var(reg.x(i, j as i64)))
            .fold(0, |acc, j| acc | 1 << (j - 1));
        row_is_ggood(mask, p.r())
    })
}

/// The g-good row masks for width `r`, ascending.
fn ggood_rows(r: usize) -> Vec<RowMask> {
    assert!((1..=20).contains(&r), "enumeration supports 1 ≤ r ≤ 20");
    (0..=full_mask(r)).filter(|&m| row_is_ggood(m, r)).collect()
}

/// Lazily enumerates all g-good patterns of shape `m × r`, row 1 outermost,
/// each row's subsets in ascending mask order.
pub struct GGoodIter {
    r: usize,
    choices: Vec<RowMask>,
    odometer: Vec<usize>,
    contains_c: bool,
    done: bool,
}

impl Iterator for GGoodIter {
    type Item = GGoodPattern;

    fn next(&mut self) -> Option<GGoodPattern> {
        if self.done {
            return None;
        }
        let rows = self.odometer.iter().map(|&k| self.choices[k]).collect();
        let out = GGoodPattern::from_masks(self.r, rows, self.contains_c);
        // advance, last row fastest
        let mut pos = self.odometer.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.odometer[pos] += 1;
            if self.odometer[pos] < self.choices.len() {
                break;
            }
            self.odometer[pos] = 0;
        }
        Some(out)
    }
}

/// All g-good patterns for `m` rows of width `r` (any `r ≥ 1`).
pub fn enumerate_patterns(m: usize, r: usize, with_c: bool) -> GGoodIter {
    let choices = ggood_rows(r);
    GGoodIter {
        r,
        done: choices.is_empty() || m == 0,
        choices,
        odometer: vec![0; m],
        contains_c: with_c,
    }
}

/// All g-good patterns for the family `p`.
pub fn enumerate_ggood(p: &BhhParams, with_c: bool) -> GGoodIter {
    enumerate_patterns(p.m(), p.r(), with_c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ggood::counts::lucas;
    use num_traits::ToPrimitive;

    #[test]
    fn ggood_examples() {
        let p = BhhParams::new(1, 2, 1).unwrap();
        let reg = p.registry();
        assert!(is_ggood(&MonomialPrime::maximal(reg), &p));
        let aa = MonomialPrime::from_names(reg, &["a1", "a2"]).unwrap();
        assert!(!is_ggood(&aa, &p));
        // r = 4: missing {1,3} is fine, missing {1,2} is a 2-gap
        let q = GGoodPattern::new(4, &[vec![2, 4]], false).unwrap();
        assert!(q.is_ggood());
        let q = GGoodPattern::new(4, &[vec![3, 4]], false).unwrap();
        assert!(!q.is_ggood());
        // wraparound gap: missing {4,1}
        let q = GGoodPattern::new(4, &[vec![2, 3]], false).unwrap();
        assert!(!q.is_ggood());
    }

    #[test]
    fn enumeration_examples() {
        let pats: Vec<_> = enumerate_patterns(1, 2, false).collect();
        let rows: Vec<_> = pats.iter().map(|p| p.row(1)).collect();
        assert_eq!(rows, vec![vec![1], vec![2], vec![1, 2]]);
        assert_eq!(enumerate_patterns(1, 1, true).count(), 1);
        assert_eq!(enumerate_patterns(2, 4, true).count(), 49);
    }

    #[test]
    fn enumeration_counts_are_lucas_powers() {
        for r in 1..=6 {
            for m in 1..=4 {
                let want = lucas(r).unwrap().pow(m as u32).to_usize().unwrap();
                assert_eq!(enumerate_patterns(m, r, false).count(), want, "r={r} m={m}");
            }
        }
    }

    #[test]
    fn prime_round_trip() {
        let p = BhhParams::new(2, 3, 2).unwrap();
        for with_c in [false, true] {
            for pat in enumerate_ggood(&p, with_c) {
                let prime = pat.to_prime(&p).unwrap();
                assert_eq!(GGoodPattern::from_prime(&p, &prime).unwrap(), pat);
                assert!(is_ggood(&prime, &p));
            }
        }
    }

    #[test]
    fn u_and_v_sets() {
        let pat = GGoodPattern::new(2, &[vec![1, 2], vec![2]], true).unwrap();
        assert_eq!(pat.full_rows(), vec![1]);
        assert_eq!(pat.v_set(), vec![(2, 2)]);
        assert!(pat.is_full_or_half());
        assert_eq!(pat.row_kind(2), RowKind::HalfFull);
        let odd = GGoodPattern::new(3, &[vec![1, 2]], true).unwrap();
        assert_eq!(odd.row_kind(1), RowKind::Other);
    }
}
