//! Closed-form counts of associated primes and the companion identities.
//!
//! All arithmetic is exact: counts are `BigUint`, threshold tests compare
//! rationals.

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::bhh::BhhParams;
use crate::decomposition::MonomialPrime;
use crate::error::{Error, Result};
use crate::ggood::{enumerate_patterns, GGoodPattern, RowKind};

/// `C(a, b)`, zero when `b < 0` or `b > a` or `a < 0`.
pub fn binomial(a: i64, b: i64) -> BigUint {
    if a < 0 || b < 0 || b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for k in 0..b {
        acc *= BigUint::from((a - k) as u64);
        acc /= BigUint::from((k + 1) as u64);
    }
    acc
}

/// The Lucas-type sequence `L_1 = 1, L_2 = 3, L_{r+2} = L_{r+1} + L_r`:
/// the number of subsets of a cyclic `r`-cycle whose complement has no two
/// adjacent positions.
pub fn lucas(r: usize) -> Result<BigUint> {
    if r == 0 {
        return Err(Error::InvalidParams("L_r is defined for r ≥ 1".into()));
    }
    let (mut prev, mut cur) = (BigUint::from(1u32), BigUint::from(3u32));
    if r == 1 {
        return Ok(prev);
    }
    for _ in 2..r {
        let next = &prev + &cur;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

fn check_mrn(m: usize, r: usize, n: usize) -> Result<()> {
    if m == 0 || r == 0 || n == 0 {
        return Err(Error::InvalidParams(format!(
            "need m, r, n ≥ 1 (got m={m}, r={r}, n={n})"
        )));
    }
    Ok(())
}

/// Number of associated primes of `B^n` of the c-full/half-full kind, for
/// even `r`: `Σ_i 2^i C(m,i) [ (n−1)/r − i/2 ≤ min(q, m−i) ]`, `q = ⌊(n−1)/r⌋`.
/// Zero once `n > rm + 1`.
pub fn h_count(m: usize, r: usize, n: usize) -> Result<BigUint> {
    check_mrn(m, r, n)?;
    if r % 2 == 1 {
        return Err(Error::InvalidParams(format!(
            "h(m, r, n) needs even r (got r={r})"
        )));
    }
    if n > r * m + 1 {
        return Ok(BigUint::zero());
    }
    let q = ((n - 1) / r) as i64;
    let lhs0 = Ratio::new((n - 1) as i64, r as i64);
    let mut total = BigUint::zero();
    for i in 0..=m as i64 {
        let lhs = lhs0 - Ratio::new(i, 2);
        let rhs = Ratio::from_integer(q.min(m as i64 - i));
        if lhs <= rhs {
            total += (BigUint::one() << i as usize) * binomial(m as i64, i);
        }
    }
    Ok(total)
}

/// Predicted number of associated primes of `BHH(m, r, s)^n` that contain `c`.
pub fn countc(m: usize, r: usize, n: usize) -> Result<BigUint> {
    check_mrn(m, r, n)?;
    if r < 2 {
        return Err(Error::InvalidParams(format!("need r ≥ 2 (got r={r})")));
    }
    let lm = lucas(r)?.pow(m as u32);
    if r.is_multiple_of(2) {
        let three_m = BigUint::from(3u32).pow(m as u32);
        Ok(lm - three_m + h_count(m, r, n)?)
    } else if (n - 1).is_multiple_of(r) && n <= r * m + 1 {
        Ok(lm)
    } else {
        Ok(lm - BigUint::one())
    }
}

/// Total `|Ass(BHH(m, 2, s)^n)|`, independent of `s`.
pub fn total_count_r2(m: usize, n: usize) -> Result<BigUint> {
    check_mrn(m, 2, n)?;
    let base = BigUint::from(if n == 1 { 2u32 } else { 3u32 }).pow(m as u32);
    let q = ((n - 1) / 2) as i64;
    let mut sum = BigUint::zero();
    for i in 0..=m as i64 {
        let lhs = Ratio::new(n as i64 - 1 - i, 2);
        let rhs = Ratio::from_integer(q.min(m as i64 - i));
        if lhs <= rhs {
            sum += (BigUint::one() << i as usize) * binomial(m as i64, i);
        }
    }
    Ok(base + sum + BigUint::one())
}

/// The same total written as a binomial double sum.
pub fn total_count_r2_alt(m: usize, n: usize) -> Result<BigUint> {
    check_mrn(m, 2, n)?;
    let (m, n) = (m as i64, n as i64);
    let base = BigUint::from(if n == 1 { 2u32 } else { 3u32 }).pow(m as u32);
    let mut sum = BigUint::zero();
    for l in 0..=m {
        let lower = (n - 1 - l).max(m - l);
        for t in lower.max(0)..=m {
            sum += binomial(m, l) * binomial(l, l + t - m);
        }
    }
    let tail = if n <= 2 * m && n % 2 == 0 { 0u32 } else { 1u32 };
    Ok(base + sum + BigUint::from(tail))
}

/// Both sides of the binomial identity
/// `Σ_i 2^i C(m,i) [n−1 ≤ min(2q+i, 2m−i)] = Σ_ℓ Σ_{t ≥ b(ℓ)} C(m,ℓ) C(ℓ,ℓ+t−m) − [n ≤ 2m, n even]`.
pub fn identity_sides(m: usize, n: usize) -> Result<(BigInt, BigInt)> {
    check_mrn(m, 2, n)?;
    let (m, n) = (m as i64, n as i64);
    let q = (n - 1) / 2;
    let mut left = BigUint::zero();
    for i in 0..=m {
        if n - 1 <= (2 * q + i).min(2 * m - i) {
            left += (BigUint::one() << i as usize) * binomial(m, i);
        }
    }
    let mut right = BigInt::zero();
    for l in 0..=m {
        let lower = (n - 1 - l).max(m - l);
        for t in lower.max(0)..=m {
            right += BigInt::from(binomial(m, l) * binomial(l, l + t - m));
        }
    }
    if n <= 2 * m && n % 2 == 0 {
        right -= 1;
    }
    Ok((BigInt::from(left), right))
}

pub fn identity_holds(m: usize, n: usize) -> Result<bool> {
    let (l, r) = identity_sides(m, n)?;
    Ok(l == r)
}

/// Strict interior local maxima of `n ↦ total_count_r2(m, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximaReport {
    pub m: usize,
    /// `(n, φ(n))` for `n = 1..=2m+4`.
    pub profile: Vec<(usize, BigUint)>,
    pub maxima: Vec<(usize, BigUint)>,
}

impl MaximaReport {
    /// `⌈(m−1)/2⌉`.
    pub fn expected_count(&self) -> usize {
        self.m / 2
    }

    /// `2·3^m + 1`.
    pub fn expected_value(&self) -> BigUint {
        BigUint::from(3u32).pow(self.m as u32) * 2u32 + 1u32
    }

    /// Maxima sit at `n = 3, 5, …` with the common value `2·3^m + 1`.
    pub fn matches_expectation(&self) -> bool {
        let want = self.expected_value();
        self.maxima.len() == self.expected_count()
            && self
                .maxima
                .iter()
                .enumerate()
                .all(|(k, (n, v))| *n == 2 * k + 3 && *v == want)
    }
}

pub fn maxima_profile(m: usize) -> Result<MaximaReport> {
    let top = 2 * m + 4;
    let profile: Vec<(usize, BigUint)> = (1..=top)
        .map(|n| Ok((n, total_count_r2(m, n)?)))
        .collect::<Result<_>>()?;
    let maxima = profile
        .windows(3)
        .filter(|w| w[1].1 > w[0].1 && w[1].1 > w[2].1)
        .map(|w| w[1].clone())
        .collect();
    Ok(MaximaReport { m, profile, maxima })
}

/// `(u, v)` with `u ≤ |U|`, `v ≤ |V|` and `n = u r + v + 1`, preferring the
/// largest `u`. Only meaningful for patterns containing `c` whose rows are
/// all full or (for even `r`) half-full.
pub fn cfullhalf_split(pattern: &GGoodPattern, n: usize) -> Option<(usize, usize)> {
    if n == 0 {
        return None;
    }
    let r = pattern.r();
    let u_max = pattern.full_rows().len();
    let v_max = pattern.v_set().len();
    (0..=u_max)
        .rev()
        .find(|&u| u * r < n && n - 1 - u * r <= v_max)
        .map(|u| (u, n - 1 - u * r))
}

/// Whether the pattern is realised as an associated prime of `B^n` under the
/// full/half-full criterion.
pub fn cfullhalf_schedule(pattern: &GGoodPattern, n: usize) -> Result<bool> {
    if !pattern.contains_c() {
        return Err(Error::Precondition("pattern must contain c".into()));
    }
    if !pattern.is_full_or_half() {
        return Err(Error::Precondition(format!(
            "every row of {pattern} must be full or half-full"
        )));
    }
    Ok(cfullhalf_split(pattern, n).is_some())
}

/// The predicted `Ass(BHH(m, 2, s)^n)`, sorted.
pub fn predicted_ass_r2(m: usize, s: usize, n: usize) -> Result<Vec<MonomialPrime>> {
    check_mrn(m, 2, n)?;
    let p = BhhParams::new(m, 2, s)?;
    let reg = p.registry();
    let mut out = vec![MonomialPrime::new(reg, reg.a_slots().collect())?];
    for pat in enumerate_patterns(m, 2, false) {
        let half = (1..=m)
            .filter(|&i| pat.row_kind(i) == RowKind::HalfFull)
            .count();
        // full/half-full with c
        let with_c = pat.with_c(true);
        if cfullhalf_split(&with_c, n).is_some() {
            out.push(with_c.to_prime(&p)?);
        }
        // c-free
        if n >= 2 || half == m {
            out.push(pat.to_prime(&p)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn lucas_values() {
        let v: Vec<_> = (1..=6).map(|r| lucas(r).unwrap()).collect();
        assert_eq!(v, [1u64, 3, 4, 7, 11, 18].map(u));
        assert!(lucas(0).is_err());
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2), u(10));
        assert_eq!(binomial(5, -1), u(0));
        assert_eq!(binomial(5, 6), u(0));
        assert_eq!(binomial(0, 0), u(1));
        assert_eq!(binomial(40, 20), u(137846528820));
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_count(1, 2, 1).unwrap(), u(3));
        assert_eq!(h_count(1, 2, 2).unwrap(), u(2));
        assert_eq!(h_count(1, 2, 3).unwrap(), u(1));
        assert_eq!(h_count(1, 2, 4).unwrap(), u(0));
        assert!(h_count(1, 3, 1).is_err());
    }

    #[test]
    fn countc_examples() {
        assert_eq!(countc(1, 2, 1).unwrap(), u(3));
        assert_eq!(countc(1, 4, 1).unwrap(), u(7));
        assert_eq!(countc(1, 4, 4).unwrap(), u(4));
        assert_eq!(countc(1, 3, 1).unwrap(), u(4));
        assert_eq!(countc(1, 3, 2).unwrap(), u(3));
    }

    #[test]
    fn totals() {
        assert_eq!(total_count_r2(1, 1).unwrap(), u(6));
        assert_eq!(total_count_r2(2, 3).unwrap(), u(19));
        for m in 1..=6 {
            for n in 1..=2 * m + 4 {
                assert_eq!(total_count_r2(m, n).unwrap(), total_count_r2_alt(m, n).unwrap());
                assert!(identity_holds(m, n).unwrap());
            }
        }
    }

    #[test]
    fn maxima() {
        assert!(maxima_profile(1).unwrap().maxima.is_empty());
        let r = maxima_profile(2).unwrap();
        assert_eq!(r.maxima, vec![(3, u(19))]);
        let r = maxima_profile(5).unwrap();
        assert_eq!(r.maxima, vec![(3, u(487)), (5, u(487))]);
        assert!(r.matches_expectation());
    }

    #[test]
    fn schedule() {
        let full = GGoodPattern::new(2, &[vec![1, 2]], true).unwrap();
        let got: Vec<bool> = (1..=5).map(|n| cfullhalf_schedule(&full, n).unwrap()).collect();
        assert_eq!(got, [true, false, true, false, false]);
        let half = GGoodPattern::new(2, &[vec![1]], true).unwrap();
        let got: Vec<bool> = (1..=3).map(|n| cfullhalf_schedule(&half, n).unwrap()).collect();
        assert_eq!(got, [true, true, false]);
        assert!(cfullhalf_schedule(&half.with_c(false), 1).is_err());
    }

    #[test]
    fn predicted_sizes_match_total() {
        for m in 1..=3 {
            for n in 1..=2 * m + 3 {
                let got = predicted_ass_r2(m, 1, n).unwrap().len();
                assert_eq!(u(got as u64), total_count_r2(m, n).unwrap(), "m={m} n={n}");
            }
        }
    }
}
