//! Explicit witnesses `w` with `B^n : w = P` for the families of primes that
//! appear in `Ass(B^n)`, plus the witness behind the depth-zero powers.
//!
//! Each builder only checks its hypotheses; whether the colon really is `P`
//! is left to [`crate::decomposition::verify_witness`].

use crate::bhh::BhhParams;
use crate::error::{Error, Result};
use crate::ggood::counts::cfullhalf_split;
use crate::ggood::{GGoodPattern, RowKind};
use crate::monomial::{Exp, Monomial};

/// Default exponent for the variables outside `P`: large enough that
/// multiplying by them never helps a generator of `B^n` divide.
pub fn default_big_exponent(n: usize) -> Exp {
    6 * n as Exp + 10
}

/// Extra `a_1` exponent used by the c-free and depth witnesses:
/// `5n − 5` for `n ≤ 4` and `6n − 9` from `n = 4` on.
pub fn witness_a1_exponent(n: usize) -> Exp {
    let n = n as Exp;
    if n <= 4 {
        5 * n - 5
    } else {
        6 * n - 9
    }
}

fn check_shape(p: &BhhParams, pattern: &GGoodPattern) -> Result<()> {
    if p.m() != pattern.m() || p.r() != pattern.r() || p.e().is_some() {
        return Err(Error::InvalidParams(format!(
            "pattern {pattern} does not fit BHH({}, {}, {})",
            p.m(),
            p.r(),
            p.s()
        )));
    }
    Ok(())
}

fn a4_factors(p: &BhhParams) -> Vec<(usize, Exp)> {
    p.registry().a_slots().map(|s| (s, 4)).collect()
}

fn h_factors(p: &BhhParams, i: usize, j: i64, k: Exp) -> [(usize, Exp); 3] {
    let reg = p.registry();
    [(reg.a(j), 4 * k), (reg.x(i, j), k), (reg.x(i, j + 1), 2 * k)]
}

fn cells(p: &BhhParams) -> impl Iterator<Item = (usize, usize)> {
    let (m, r) = (p.m(), p.r());
    (1..=m).flat_map(move |i| (1..=r).map(move |j| (i, j)))
}

/// Witness for a prime containing `c` whose rows are all full or half-full.
///
/// `u0` picks full rows and `v0` picks cells `(i, j)` of non-full rows with
/// `x_{i,j} ∈ P`; the power must satisfy `n = |u0| r + |v0| + 1`.
pub fn witness_cfullhalf(
    p: &BhhParams,
    pattern: &GGoodPattern,
    u0: &[usize],
    v0: &[(usize, usize)],
    big: Exp,
    n: usize,
) -> Result<Monomial> {
    check_shape(p, pattern)?;
    if !pattern.contains_c() || !pattern.is_full_or_half() {
        return Err(Error::Precondition(format!(
            "{pattern} must contain c and have only full or half-full rows"
        )));
    }
    let full = pattern.full_rows();
    let v_set = pattern.v_set();
    if let Some(i) = u0.iter().find(|i| !full.contains(i)) {
        return Err(Error::Precondition(format!("row {i} is not full in {pattern}")));
    }
    if let Some(c) = v0.iter().find(|c| !v_set.contains(c)) {
        return Err(Error::Precondition(format!("cell {c:?} is not in V for {pattern}")));
    }
    if n != u0.len() * p.r() + v0.len() + 1 {
        return Err(Error::Precondition(format!(
            "schedule infeasible: n={n} ≠ {}·{} + {} + 1",
            u0.len(),
            p.r(),
            v0.len()
        )));
    }
    let reg = p.registry();
    let mut f = a4_factors(p);
    for &i in &full {
        if !u0.contains(&i) {
            f.extend((1..=p.r()).map(|j| (reg.x(i, j as i64), 1)));
        }
    }
    for (i, j) in cells(p) {
        if !pattern.has(i, j as i64) {
            f.push((reg.x(i, j as i64), big));
        }
    }
    for &i in u0 {
        for j in 1..=p.r() {
            f.extend(h_factors(p, i, j as i64, 1));
        }
    }
    for &(i, j) in v0 {
        f.extend(h_factors(p, i, j as i64, 1));
    }
    Monomial::from_factors(reg, &f)
}

/// [`witness_cfullhalf`] with the first feasible `(u0, v0)`.
pub fn witness_cfullhalf_auto(p: &BhhParams, pattern: &GGoodPattern, n: usize) -> Result<Monomial> {
    let (u, v) = cfullhalf_split(pattern, n)
        .ok_or_else(|| Error::Precondition(format!("no schedule for {pattern} at n={n}")))?;
    let u0: Vec<usize> = pattern.full_rows().into_iter().take(u).collect();
    let v0: Vec<(usize, usize)> = pattern.v_set().into_iter().take(v).collect();
    witness_cfullhalf(p, pattern, &u0, &v0, default_big_exponent(n), n)
}

/// A column `j0` of row `i0` with `x_{i0,j0−1}, x_{i0,j0} ∈ P` and
/// `x_{i0,j0+1} ∉ P`, the anchor used by [`witness_otherc`].
pub fn find_otherc_anchor(pattern: &GGoodPattern) -> Option<(usize, usize)> {
    (1..=pattern.m()).find_map(|i| {
        (1..=pattern.r()).find_map(|j| {
            let j = j as i64;
            (pattern.has(i, j - 1) && pattern.has(i, j) && !pattern.has(i, j + 1))
                .then_some((i, j as usize))
        })
    })
}

/// Witness for a g-good prime containing `c` with some row neither full nor
/// half-full, anchored at `(i0, j0)` (needs `r ≥ 3`).
pub fn witness_otherc(
    p: &BhhParams,
    pattern: &GGoodPattern,
    i0: usize,
    j0: usize,
    big: Exp,
    n: usize,
) -> Result<Monomial> {
    check_shape(p, pattern)?;
    if p.r() < 3 || !pattern.contains_c() || !pattern.is_ggood() || n == 0 {
        return Err(Error::Precondition(format!(
            "{pattern} must be g-good with c, r ≥ 3 and n ≥ 1"
        )));
    }
    if i0 < 1 || i0 > p.m() || j0 < 1 || j0 > p.r() {
        return Err(Error::InvalidParams(format!("anchor ({i0}, {j0}) out of range")));
    }
    let j0 = j0 as i64;
    if !(pattern.has(i0, j0 - 1) && pattern.has(i0, j0) && !pattern.has(i0, j0 + 1)) {
        return Err(Error::Precondition(format!(
            "({i0}, {j0}) is not an anchor of {pattern}"
        )));
    }
    let reg = p.registry();
    let skip = reg.x(i0, j0 - 1);
    let mut f = a4_factors(p);
    for (i, j) in cells(p) {
        let j = j as i64;
        let slot = reg.x(i, j);
        if !pattern.has(i, j) {
            f.push((slot, big));
        } else if pattern.has(i, j + 1) && !(n >= 3 && slot == skip) {
            f.push((slot, 1));
        }
    }
    f.extend(h_factors(p, i0, j0, (n - 1) as Exp));
    Monomial::from_factors(reg, &f)
}

/// `x_{i,j}` exponents shared by the c-free witnesses: 2 outside `P`, 1 when
/// `x_{i,j}` and `x_{i,j+1}` are both in `P`, 0 otherwise.
fn x_profile(p: &BhhParams, pattern: &GGoodPattern, f: &mut Vec<(usize, Exp)>) {
    let reg = p.registry();
    for (i, j) in cells(p) {
        let j = j as i64;
        if !pattern.has(i, j) {
            f.push((reg.x(i, j), 2));
        } else if pattern.has(i, j + 1) {
            f.push((reg.x(i, j), 1));
        }
    }
}

/// Witness for a c-free g-good prime at a power `n ≥ 2`.
pub fn witness_ggood_noc(p: &BhhParams, pattern: &GGoodPattern, n: usize) -> Result<Monomial> {
    check_shape(p, pattern)?;
    if pattern.contains_c() || !pattern.is_ggood() || n < 2 {
        return Err(Error::Precondition(format!(
            "{pattern} must be g-good without c and n ≥ 2 (got n={n})"
        )));
    }
    let reg = p.registry();
    let mut f = a4_factors(p);
    f.push((reg.c(1).expect("unsplit registry has c1"), 1));
    f.push((reg.a(1), witness_a1_exponent(n)));
    x_profile(p, pattern, &mut f);
    Monomial::from_factors(reg, &f)
}

/// Witness for a c-free g-good prime at the first power. Exists when some
/// column `j0` has, in every row, `x_{i,j0} ∉ P` or `x_{i,j0+1} ∉ P`.
pub fn witness_firstpower(p: &BhhParams, pattern: &GGoodPattern) -> Result<Monomial> {
    check_shape(p, pattern)?;
    if pattern.contains_c() || !pattern.is_ggood() {
        return Err(Error::Precondition(format!("{pattern} must be g-good without c")));
    }
    let r = p.r() as i64;
    let j0 = (1..=r)
        .find(|&j| (1..=p.m()).all(|i| !pattern.has(i, j) || !pattern.has(i, j + 1)))
        .ok_or_else(|| {
            Error::Precondition(format!("{pattern} has no column free of adjacent pairs"))
        })?;
    let j0 = if (1..=p.m()).all(|i| pattern.has(i, j0)) {
        j0 + 1
    } else {
        j0
    };
    let last = p.registry().layout().expect("bhh layout").wrap(j0 - 1) as i64;
    let reg = p.registry();
    let mut f: Vec<(usize, Exp)> = (1..=r)
        .map(|j| (reg.a(j), if j == last { 3 } else { 4 }))
        .collect();
    f.push((reg.c(1).expect("unsplit registry has c1"), 1));
    for (i, j) in cells(p) {
        let j = j as i64;
        if !pattern.has(i, j) {
            f.push((reg.x(i, j), 2));
        } else if j == last || pattern.has(i, j + 1) {
            f.push((reg.x(i, j), 1));
        }
    }
    Monomial::from_factors(reg, &f)
}

/// `true` iff [`witness_firstpower`] applies to the pattern.
pub fn firstpower_applies(pattern: &GGoodPattern) -> bool {
    !pattern.contains_c()
        && pattern.is_ggood()
        && (1..=pattern.r() as i64)
            .any(|j| (1..=pattern.m()).all(|i| !pattern.has(i, j) || !pattern.has(i, j + 1)))
}

/// Picks the witness family that applies to `pattern` at power `n`.
pub fn witness_for(p: &BhhParams, pattern: &GGoodPattern, n: usize) -> Result<Monomial> {
    if !pattern.contains_c() {
        return if n >= 2 {
            witness_ggood_noc(p, pattern, n)
        } else {
            witness_firstpower(p, pattern)
        };
    }
    let all_full_half = (1..=pattern.m()).all(|i| pattern.row_kind(i) != RowKind::Other);
    if all_full_half {
        witness_cfullhalf_auto(p, pattern, n)
    } else {
        let (i0, j0) = find_otherc_anchor(pattern)
            .ok_or_else(|| Error::Precondition(format!("{pattern} has no anchor")))?;
        witness_otherc(p, pattern, i0, j0, default_big_exponent(n), n)
    }
}

/// `a_1^{e_n} · a_1^4⋯a_r^4 · ∏ x_{i,j}`, which has colon the maximal ideal of
/// the `a, x` variables inside `(B_0 + X)^n` while staying outside `B^n`.
pub fn depth_witness(p: &BhhParams, n: usize) -> Result<Monomial> {
    if n < 2 {
        return Err(Error::Precondition("depth witness needs n ≥ 2".into()));
    }
    let reg = p.registry();
    let mut f = a4_factors(p);
    f.push((reg.a(1), witness_a1_exponent(n)));
    f.extend(reg.x_slots().map(|s| (s, 1)));
    Monomial::from_factors(reg, &f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::verify_witness;
    use crate::ggood::enumerate_ggood;

    #[test]
    fn firstpower_hand_example() {
        let p = BhhParams::new(1, 2, 1).unwrap();
        let pat = GGoodPattern::new(2, &[vec![1]], false).unwrap();
        let w = witness_firstpower(&p, &pat).unwrap();
        assert_eq!(w.to_string(), "c1*a1^3*a2^4*x[1,1]*x[1,2]^2");
        let b = p.build_bhh();
        assert!(verify_witness(&b, &w, &pat.to_prime(&p).unwrap()));
    }

    #[test]
    fn full_row_witness_first_power() {
        let p = BhhParams::new(1, 2, 1).unwrap();
        let pat = GGoodPattern::new(2, &[vec![1, 2]], true).unwrap();
        let w = witness_cfullhalf(&p, &pat, &[], &[], 16, 1).unwrap();
        assert_eq!(w.to_string(), "a1^4*a2^4*x[1,1]*x[1,2]");
        assert!(verify_witness(&p.build_bhh(), &w, &pat.to_prime(&p).unwrap()));
    }

    #[test]
    fn infeasible_schedule_rejected() {
        let p = BhhParams::new(1, 2, 1).unwrap();
        let pat = GGoodPattern::new(2, &[vec![1, 2]], true).unwrap();
        assert!(witness_cfullhalf(&p, &pat, &[1], &[], 16, 2).is_err());
        assert!(witness_cfullhalf_auto(&p, &pat, 2).is_err());
    }

    #[test]
    fn ggood_noc_witnesses_small() {
        let p = BhhParams::new(1, 2, 1).unwrap();
        for n in 2..=4 {
            let bn = p.build_bhh().power(n as u32).unwrap();
            for pat in enumerate_ggood(&p, false) {
                let w = witness_ggood_noc(&p, &pat, n).unwrap();
                assert!(verify_witness(&bn, &w, &pat.to_prime(&p).unwrap()), "{pat} n={n}");
            }
        }
    }

    #[test]
    fn otherc_anchor() {
        let pat = GGoodPattern::new(3, &[vec![1, 2]], true).unwrap();
        assert_eq!(find_otherc_anchor(&pat), Some((1, 2)));
        let p = BhhParams::new(1, 3, 1).unwrap();
        for n in 1..=3 {
            let w = witness_otherc(&p, &pat, 1, 2, default_big_exponent(n), n).unwrap();
            let bn = p.build_bhh().power(n as u32).unwrap();
            assert!(verify_witness(&bn, &w, &pat.to_prime(&p).unwrap()), "n={n}");
        }
    }

    #[test]
    fn a1_exponent_agrees_at_four() {
        assert_eq!(witness_a1_exponent(4), 15);
        assert_eq!(witness_a1_exponent(2), 5);
        assert_eq!(witness_a1_exponent(5), 21);
    }
}
