//! The ideal family `BHH(m, r, s) = B_0 + B_c + X` and its companions.
//!
//! * `B_0 = (a_j^6, a_j^5 a_{j+1} : j ∈ [r])`
//! * `B_c = (c_1, …, c_s) · a_1^4 ⋯ a_r^4`
//! * `X = (h_{i,j} : i ∈ [m], j ∈ [r])` with `h_{i,j} = a_j^4 x_{i,j} x_{i,j+1}^2`
//!
//! Column indices are cyclic; the registry resolver does the wrapping.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::decomposition::{associated_primes_with, DecomposeOptions, MonomialPrime};
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::{Exp, Monomial};
use crate::registry::VarRegistry;

/// Parameters `(m, r, s)` with an optional split arity `e`.
#[derive(Debug, Clone)]
pub struct BhhParams {
    m: usize,
    r: usize,
    s: usize,
    e: Option<usize>,
    reg: Arc<VarRegistry>,
}

/// Wire form `{"m":…, "r":…, "s":…, "e":…}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub m: usize,
    pub r: usize,
    pub s: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<usize>,
}

impl BhhParams {
    pub fn new(m: usize, r: usize, s: usize) -> Result<Self> {
        if m < 1 || r < 2 || s < 1 {
            return Err(Error::InvalidParams(format!(
                "need m ≥ 1, r ≥ 2, s ≥ 1 (got m={m}, r={r}, s={s})"
            )));
        }
        Ok(BhhParams {
            m,
            r,
            s,
            e: None,
            reg: VarRegistry::bhh(m, r, s, None)?,
        })
    }

    /// Same family with `c_1` to be split into `d_1 ⋯ d_e`.
    pub fn with_split(mut self, e: usize) -> Result<Self> {
        if e < 1 {
            return Err(Error::InvalidParams("split arity e must be ≥ 1".into()));
        }
        self.e = Some(e);
        Ok(self)
    }

    pub fn from_json(p: &ParamsJson) -> Result<Self> {
        let base = Self::new(p.m, p.r, p.s)?;
        match p.e {
            Some(e) => base.with_split(e),
            None => Ok(base),
        }
    }

    pub fn to_json(&self) -> ParamsJson {
        ParamsJson {
            m: self.m,
            r: self.r,
            s: self.s,
            e: self.e,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn s(&self) -> usize {
        self.s
    }
    pub fn e(&self) -> Option<usize> {
        self.e
    }

    /// Registry of the unsplit ring: `c1..cs, a1..ar, x[i,j]`.
    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    /// Number of variables of the split ring, `rm + r + s + e − 1`.
    pub fn split_ring_size(&self, e: usize) -> usize {
        self.r * self.m + self.r + self.s + e - 1
    }

    fn mono(&self, factors: &[(usize, Exp)]) -> Monomial {
        Monomial::from_factors(&self.reg, factors).expect("slots come from the registry")
    }

    /// `a_1^4 ⋯ a_r^4`.
    pub fn a4_product(&self) -> Monomial {
        let f: Vec<_> = self.reg.a_slots().map(|s| (s, 4)).collect();
        self.mono(&f)
    }

    /// `h_{i,j} = a_j^4 x_{i,j} x_{i,j+1}^2`, `j` taken cyclically.
    pub fn h(&self, i: usize, j: i64) -> Result<Monomial> {
        if i < 1 || i > self.m {
            return Err(Error::InvalidParams(format!(
                "row index {i} outside 1..={}",
                self.m
            )));
        }
        Ok(self.mono(&[
            (self.reg.a(j), 4),
            (self.reg.x(i, j), 1),
            (self.reg.x(i, j + 1), 2),
        ]))
    }

    /// `x_{i,j}` as a monomial, `j` cyclic.
    pub fn x(&self, i: usize, j: i64) -> Monomial {
        self.mono(&[(self.reg.x(i, j), 1)])
    }

    /// `a_j` as a monomial, `j` cyclic.
    pub fn a(&self, j: i64) -> Monomial {
        self.mono(&[(self.reg.a(j), 1)])
    }

    /// `c_k` as a monomial.
    pub fn c(&self, k: usize) -> Result<Monomial> {
        let slot = self
            .reg
            .c(k)
            .ok_or_else(|| Error::InvalidParams(format!("no variable c{k}")))?;
        Ok(self.mono(&[(slot, 1)]))
    }

    pub fn build_b0(&self) -> MonomialIdeal {
        let mut gens = Vec::with_capacity(2 * self.r);
        for j in 1..=self.r as i64 {
            gens.push(self.mono(&[(self.reg.a(j), 6)]));
            gens.push(self.mono(&[(self.reg.a(j), 5), (self.reg.a(j + 1), 1)]));
        }
        MonomialIdeal::minimalize(&self.reg, gens).expect("same registry")
    }

    pub fn build_bc(&self) -> MonomialIdeal {
        let a4 = self.a4_product();
        let gens = (1..=self.s)
            .map(|k| self.c(k).and_then(|c| c.mul(&a4)))
            .collect::<Result<Vec<_>>>()
            .expect("c_k exist in the unsplit registry");
        MonomialIdeal::minimalize(&self.reg, gens).expect("same registry")
    }

    pub fn build_x(&self) -> MonomialIdeal {
        let mut gens = Vec::with_capacity(self.m * self.r);
        for i in 1..=self.m {
            for j in 1..=self.r as i64 {
                gens.push(self.h(i, j).expect("row in range"));
            }
        }
        MonomialIdeal::minimalize(&self.reg, gens).expect("same registry")
    }

    pub fn build_bhh(&self) -> MonomialIdeal {
        self.build_b0()
            .sum(&self.build_bc())
            .and_then(|i| i.sum(&self.build_x()))
            .expect("same registry")
    }

    /// `B^n` via `B_c X^{n-1} + (B_0 + X)^n`.
    pub fn power_by_product_formula(&self, n: u32) -> Result<MonomialIdeal> {
        if n == 0 {
            return Err(Error::InvalidParams("power exponent must be ≥ 1".into()));
        }
        let x = self.build_x();
        let head = self.build_bc().product(&x.power(n - 1)?)?;
        let tail = self.build_b0().sum(&x)?.power(n)?;
        head.sum(&tail)
    }

    /// Registry of the split ring `d1..de, c2..cs, a.., x..`.
    pub fn split_registry(&self, e: usize) -> Result<Arc<VarRegistry>> {
        if e < 1 {
            return Err(Error::InvalidParams("split arity e must be ≥ 1".into()));
        }
        VarRegistry::bhh(self.m, self.r, self.s, Some(e))
    }

    /// `BHH(m,r,s)` with `c_1 ↦ d_1 ⋯ d_e`.
    pub fn split_ideal(&self, e: usize) -> Result<MonomialIdeal> {
        let reg = self.split_registry(e)?;
        let factors: Vec<_> = (1..=e).map(|k| (reg.d(k).unwrap(), 1)).collect();
        let target = Monomial::from_factors(&reg, &factors)?;
        self.build_bhh().substitute("c1", &target)
    }

    /// The same family with `s = 1`.
    pub fn with_single_c(&self) -> BhhParams {
        BhhParams::new(self.m, self.r, 1).expect("valid by construction")
    }
}

/// Outcome of comparing `Ass(BHH(m,r,s)^n)` against `Ass(BHH(m,r,1)^n)`.
#[derive(Debug, Clone)]
pub struct CorrespondenceReport {
    pub n: u32,
    pub count_spread: usize,
    pub count_single: usize,
    /// c-free primes coincide as sets of variable names.
    pub c_free_identical: bool,
    /// Every `P + (c)` for `s = 1` appears as `P + (c_1, …, c_s)` and vice versa.
    pub c_primes_correspond: bool,
}

impl CorrespondenceReport {
    pub fn holds(&self) -> bool {
        self.count_spread == self.count_single && self.c_free_identical && self.c_primes_correspond
    }
}

fn names_without_c(p: &MonomialPrime) -> (bool, BTreeSet<String>) {
    let mut has_c = false;
    let mut rest = BTreeSet::new();
    for name in p.names() {
        if name.starts_with('c') {
            has_c = true;
        } else {
            rest.insert(name.to_string());
        }
    }
    (has_c, rest)
}

/// Checks the one-to-one correspondence between associated primes of
/// `BHH(m,r,s)^n` and `BHH(m,r,1)^n`.
pub fn spread_compare(
    p: &BhhParams,
    n: u32,
    opts: &DecomposeOptions,
) -> Result<CorrespondenceReport> {
    if p.s() < 2 {
        return Err(Error::Precondition("spread comparison needs s ≥ 2".into()));
    }
    let single = p.with_single_c();
    let spread_ass = associated_primes_with(&p.build_bhh().power(n)?, opts)?;
    let single_ass = associated_primes_with(&single.build_bhh().power(n)?, opts)?;

    let split = |ass: &[MonomialPrime]| {
        let mut with_c = BTreeSet::new();
        let mut without_c = BTreeSet::new();
        let mut mixed = false;
        for q in ass {
            let (has_c, rest) = names_without_c(q);
            let c_count = q.len() - rest.len();
            if has_c {
                // a prime either contains every c_k or none of them
                mixed |= c_count != q.registry().c_slots().len();
                with_c.insert(rest);
            } else {
                without_c.insert(rest);
            }
        }
        (with_c, without_c, mixed)
    };
    let (sc, sf, smixed) = split(&spread_ass);
    let (oc, of, _) = split(&single_ass);
    Ok(CorrespondenceReport {
        n,
        count_spread: spread_ass.len(),
        count_single: single_ass.len(),
        c_free_identical: sf == of,
        c_primes_correspond: !smixed && sc == oc,
    })
}

/// One instance of a fixed product identity `w ∈ B^k`.
#[derive(Debug, Clone)]
pub struct MembershipCheck {
    pub label: &'static str,
    pub row: usize,
    pub col: usize,
    pub power: u32,
    pub monomial: Monomial,
    pub holds: bool,
}

/// Evaluates the seven rewriting memberships of products of `h_{i,j}`
/// (the first two only when `r = 2`) for all `i ∈ [m]`, `j ∈ [r]`.
pub fn membership_checks(p: &BhhParams) -> Result<Vec<MembershipCheck>> {
    let b = p.build_bhh();
    let powers: Vec<MonomialIdeal> = (0..=4).map(|k| b.power(k)).collect::<Result<_>>()?;
    let a4 = |j: i64| p.a(j).pow(4).expect("small exponent");
    let mut out = Vec::new();
    for i in 1..=p.m() {
        for jj in 1..=p.r() {
            let j = jj as i64;
            let h = |col: i64| p.h(i, col).expect("row in range");
            let mut items: Vec<(&'static str, u32, Vec<Monomial>)> = Vec::new();
            if p.r() == 2 {
                items.push((
                    "x_{i,j} a_1^4 a_2^4 h_{i,j} in B^2",
                    2,
                    vec![p.x(i, j), a4(1), a4(2), h(j)],
                ));
                items.push((
                    "a_1^4 a_2^4 h_{i,j}^2 in B^3",
                    3,
                    vec![a4(1), a4(2), h(j), h(j)],
                ));
            }
            items.push((
                "x_{i,j+2}^2 a_j^4 a_{j+1}^4 h_{i,j} in B^2",
                2,
                vec![p.x(i, j + 2), p.x(i, j + 2), a4(j), a4(j + 1), h(j)],
            ));
            items.push((
                "a_{j-1}^4 a_j^4 x_{i,j-1} x_{i,j} h_{i,j} in B^2",
                2,
                vec![a4(j - 1), a4(j), p.x(i, j - 1), p.x(i, j), h(j)],
            ));
            items.push((
                "x_{i,j} a_{j-2}^4 a_{j-1}^4 a_j^4 h_{i,j-2} h_{i,j} in B^3",
                3,
                vec![p.x(i, j), a4(j - 2), a4(j - 1), a4(j), h(j - 2), h(j)],
            ));
            items.push((
                "x_{i,j-1} a_{j-1}^4 a_j^4 h_{i,j}^2 in B^3",
                3,
                vec![p.x(i, j - 1), a4(j - 1), a4(j), h(j), h(j)],
            ));
            items.push((
                "a_{j-2}^4 a_{j-1}^4 a_j^4 h_{i,j-2} h_{i,j}^2 in B^4",
                4,
                vec![a4(j - 2), a4(j - 1), a4(j), h(j - 2), h(j), h(j)],
            ));
            for (label, power, factors) in items {
                let mut w = Monomial::one(p.registry());
                for f in &factors {
                    w = w.mul(f)?;
                }
                let holds = powers[power as usize].contains(&w)?;
                out.push(MembershipCheck {
                    label,
                    row: i,
                    col: jj,
                    power,
                    monomial: w,
                    holds,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(BhhParams::new(0, 2, 1).is_err());
        assert!(BhhParams::new(1, 1, 1).is_err());
        assert!(BhhParams::new(1, 2, 0).is_err());
        assert!(BhhParams::new(1, 2, 1).unwrap().with_split(0).is_err());
        let p = BhhParams::new(2, 3, 2).unwrap();
        assert_eq!(p.registry().len(), 2 + 3 + 6);
    }

    #[test]
    fn bhh_121_generators() {
        let p = BhhParams::new(1, 2, 1).unwrap();
        let reg = p.registry();
        let want = MonomialIdeal::parse(
            reg,
            "a1^6, a2^6, a1^5*a2, a2^5*a1, c1*a1^4*a2^4, a1^4*x[1,1]*x[1,2]^2, a2^4*x[1,2]*x[1,1]^2",
        )
        .unwrap();
        let b = p.build_bhh();
        assert_eq!(b, want);
        assert_eq!(b.num_min_gens(), 7);
        // the raw union is already minimal: pairwise non-dividing
        for g in b.generators() {
            for h in b.generators() {
                assert!(g == h || !g.divides(h).unwrap());
            }
        }
    }

    #[test]
    fn generator_count_r2() {
        for m in 1..=5 {
            let p = BhhParams::new(m, 2, 1).unwrap();
            assert_eq!(p.build_bhh().num_min_gens(), 2 * m + 5);
        }
    }

    #[test]
    fn sub_ideal_sizes() {
        let p = BhhParams::new(2, 3, 1).unwrap();
        assert_eq!(p.build_b0().num_min_gens(), 6);
        assert_eq!(p.build_bc().num_min_gens(), 1);
        let x = p.build_x();
        assert_eq!(x.num_min_gens(), 6);
        let wrap = Monomial::parse(p.registry(), "a3^4*x[1,3]*x[1,1]^2").unwrap();
        assert!(x.generators().contains(&wrap));
    }

    #[test]
    fn h_generator_wraps() {
        let p = BhhParams::new(1, 2, 1).unwrap();
        assert_eq!(p.h(1, 1).unwrap().to_string(), "a1^4*x[1,1]*x[1,2]^2");
        assert_eq!(p.h(1, 2).unwrap().to_string(), "a2^4*x[1,1]^2*x[1,2]");
        let q = BhhParams::new(2, 3, 1).unwrap();
        for i in 1..=2 {
            for j in -3..6 {
                assert_eq!(q.h(i, j).unwrap(), q.h(i, j + 3).unwrap());
            }
        }
        assert!(q.h(3, 1).is_err());
    }

    #[test]
    fn product_formula_power_small() {
        let p = BhhParams::new(1, 2, 1).unwrap();
        assert_eq!(p.power_by_product_formula(1).unwrap(), p.build_bhh());
        assert_eq!(
            p.power_by_product_formula(2).unwrap(),
            p.build_bhh().power(2).unwrap()
        );
        let q = BhhParams::new(2, 3, 2).unwrap();
        assert_eq!(
            q.power_by_product_formula(3).unwrap(),
            q.build_bhh().power(3).unwrap()
        );
    }

    #[test]
    fn product_formula_hypothesis_holds() {
        for (m, r, s) in [(1, 2, 1), (2, 3, 2), (1, 4, 3)] {
            let p = BhhParams::new(m, r, s).unwrap();
            let lhs = p.build_bc().sum(&p.build_b0()).unwrap().power(2).unwrap();
            let rhs = p.build_b0().power(2).unwrap();
            assert!(lhs.is_subset_of(&rhs).unwrap());
        }
    }

    #[test]
    fn split_examples() {
        let p = BhhParams::new(1, 2, 1).unwrap();
        let one = p.split_ideal(1).unwrap();
        let renamed: Vec<String> = p
            .build_bhh()
            .generators()
            .iter()
            .map(|g| g.to_string().replace("c1", "d1"))
            .collect();
        let mut got: Vec<String> = one.generators().iter().map(|g| g.to_string()).collect();
        let mut want = renamed;
        got.sort();
        want.sort();
        assert_eq!(got, want);

        let two = p.split_ideal(2).unwrap();
        assert_eq!(two.registry().len(), p.split_ring_size(2));
        let d = Monomial::parse(two.registry(), "d1*d2*a1^4*a2^4").unwrap();
        assert!(two.generators().contains(&d));
        assert_eq!(two.num_min_gens(), 7);
        assert_eq!(p.split_ideal(3).unwrap().num_min_gens(), 7);
        assert!(p.split_ideal(0).is_err());
    }

    #[test]
    fn memberships_hold() {
        for (m, r) in [(1, 2), (2, 3)] {
            let p = BhhParams::new(m, r, 1).unwrap();
            for c in membership_checks(&p).unwrap() {
                assert!(c.holds, "{} at ({}, {})", c.label, c.row, c.col);
            }
        }
    }

    #[test]
    fn params_json() {
        let p = BhhParams::new(1, 2, 2).unwrap().with_split(3).unwrap();
        let j = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(j, r#"{"m":1,"r":2,"s":2,"e":3}"#);
        let back: ParamsJson = serde_json::from_str(r#"{"m":1,"r":2,"s":2}"#).unwrap();
        assert_eq!(BhhParams::from_json(&back).unwrap().e(), None);
    }
}
