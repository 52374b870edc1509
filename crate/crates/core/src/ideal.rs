//! Monomial ideals in canonical minimal-generator form.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::monomial::{divides_raw, grlex_raw, Exp, Monomial};
use crate::registry::VarRegistry;

pub(crate) type Raw = Box<[Exp]>;

/// Sorts, dedups and drops non-minimal generators.
pub(crate) fn minimalize_raw(mut gens: Vec<Raw>) -> Vec<Raw> {
    gens.sort_unstable_by(|a, b| grlex_raw(a, b));
    gens.dedup();
    let mut kept: Vec<Raw> = Vec::with_capacity(gens.len());
    // A proper divisor has strictly smaller degree, so it is already in `kept`.
    for g in gens {
        if !kept.iter().any(|k| divides_raw(k, &g)) {
            kept.push(g);
        }
    }
    kept
}

/// A monomial ideal given by its sorted minimal generators.
///
/// The zero ideal has no generators and the unit ideal is `[1]`.
#[derive(Clone)]
pub struct MonomialIdeal {
    reg: Arc<VarRegistry>,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn zero(reg: &Arc<VarRegistry>) -> Self {
        MonomialIdeal {
            reg: reg.clone(),
            gens: Vec::new(),
        }
    }

    pub fn unit(reg: &Arc<VarRegistry>) -> Self {
        MonomialIdeal {
            reg: reg.clone(),
            gens: vec![Monomial::one(reg)],
        }
    }

    /// Canonical form of the ideal generated by `gens`.
    pub fn minimalize(reg: &Arc<VarRegistry>, gens: Vec<Monomial>) -> Result<Self> {
        let mut raw = Vec::with_capacity(gens.len());
        for g in gens {
            VarRegistry::check_same(reg, g.registry())?;
            raw.push(g.exponents().into());
        }
        Ok(Self::from_raw(reg, raw))
    }

    pub(crate) fn from_raw(reg: &Arc<VarRegistry>, raw: Vec<Raw>) -> Self {
        let gens = minimalize_raw(raw)
            .into_iter()
            .map(|e| Monomial::from_raw(reg, e))
            .collect();
        MonomialIdeal {
            reg: reg.clone(),
            gens,
        }
    }

    /// Parses a comma-free list of text monomials separated by `,` at depth 0.
    pub fn parse(reg: &Arc<VarRegistry>, text: &str) -> Result<Self> {
        let mut gens = Vec::new();
        let mut depth = 0usize;
        let mut start = 0usize;
        let bytes = text.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'[' => depth += 1,
                b']' => depth = depth.saturating_sub(1),
                b',' if depth == 0 => {
                    gens.push(Monomial::parse(reg, &text[start..i])?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        if !text[start..].trim().is_empty() {
            gens.push(Monomial::parse(reg, &text[start..])?);
        }
        Self::minimalize(reg, gens)
    }

    /// The prime generated by the given variable slots.
    pub fn generated_by_vars(reg: &Arc<VarRegistry>, slots: &[usize]) -> Self {
        let raw = slots
            .iter()
            .map(|&s| Monomial::var_power(reg, s, 1).exponents().into())
            .collect();
        Self::from_raw(reg, raw)
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn num_min_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    pub(crate) fn raw(&self) -> Vec<Raw> {
        self.gens.iter().map(|g| g.exponents().into()).collect()
    }

    fn check(&self, other: &MonomialIdeal) -> Result<()> {
        VarRegistry::check_same(&self.reg, &other.reg)
    }

    pub fn contains(&self, w: &Monomial) -> Result<bool> {
        VarRegistry::check_same(&self.reg, w.registry())?;
        Ok(self
            .gens
            .iter()
            .any(|g| divides_raw(g.exponents(), w.exponents())))
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &MonomialIdeal) -> Result<bool> {
        self.check(other)?;
        for g in &self.gens {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check(other)?;
        let mut raw = self.raw();
        raw.extend(other.raw());
        Ok(Self::from_raw(&self.reg, raw))
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check(other)?;
        let mut raw = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                raw.push(a.mul(b)?.exponents().into());
            }
        }
        Ok(Self::from_raw(&self.reg, raw))
    }

    /// `self^n` by iterated products; `n = 0` gives the unit ideal.
    pub fn power(&self, n: u32) -> Result<MonomialIdeal> {
        let mut acc = Self::unit(&self.reg);
        for _ in 0..n {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check(other)?;
        let mut raw = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                raw.push(a.lcm(b)?.exponents().into());
            }
        }
        Ok(Self::from_raw(&self.reg, raw))
    }

    /// `self : w`.
    pub fn colon_by_monomial(&self, w: &Monomial) -> Result<MonomialIdeal> {
        VarRegistry::check_same(&self.reg, w.registry())?;
        let raw = self
            .gens
            .iter()
            .map(|g| {
                g.exponents()
                    .iter()
                    .zip(w.exponents())
                    .map(|(a, b)| a.saturating_sub(*b))
                    .collect()
            })
            .collect();
        Ok(Self::from_raw(&self.reg, raw))
    }

    /// `self : J`, the intersection of the colons by `J`'s generators.
    pub fn colon_by_ideal(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check(other)?;
        let mut gens = other.gens.iter();
        let first = gens.next().ok_or(Error::ZeroIdeal)?;
        let mut acc = self.colon_by_monomial(first)?;
        for g in gens {
            acc = acc.intersect(&self.colon_by_monomial(g)?)?;
        }
        Ok(acc)
    }

    /// `self : w^∞`. The colon chain strictly grows until it is stable, and
    /// for monomial ideals it stabilizes after at most `max exponent` steps.
    pub fn saturate(&self, w: &Monomial) -> Result<MonomialIdeal> {
        let mut cur = self.clone();
        loop {
            let next = cur.colon_by_monomial(w)?;
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// Replaces `var` by `target` (a monomial on the output registry) and maps
    /// every other variable by name.
    pub fn substitute(&self, var: &str, target: &Monomial) -> Result<MonomialIdeal> {
        let slot = self.reg.index_of(var)?;
        let out = target.registry();
        let mut gens = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            let k = g.exponent(slot);
            let mut rest = g.exponents().to_vec();
            rest[slot] = 0;
            let rest = Monomial::from_exponents(&self.reg, rest)?.transport(out)?;
            gens.push(rest.mul(&target.pow(k)?)?);
        }
        Self::minimalize(out, gens)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "variables": self.reg.names(),
            "generators": self.gens.iter().map(Monomial::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<MonomialIdeal> {
        let vars = value["variables"]
            .as_array()
            .ok_or_else(|| Error::Parse("ideal JSON needs `variables`".into()))?
            .iter()
            .map(|v| {
                v.as_str()
                    .map(String::from)
                    .ok_or_else(|| Error::Parse("variable names must be strings".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let reg = VarRegistry::new(vars)?;
        let gens = value["generators"]
            .as_array()
            .ok_or_else(|| Error::Parse("ideal JSON needs `generators`".into()))?
            .iter()
            .map(|g| Monomial::from_json(&reg, g))
            .collect::<Result<Vec<_>>>()?;
        Self::minimalize(&reg, gens)
    }
}

impl PartialEq for MonomialIdeal {
    fn eq(&self, other: &Self) -> bool {
        *self.reg == *other.reg && self.gens == other.gens
    }
}

impl Eq for MonomialIdeal {}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonomialIdeal{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xy() -> Arc<VarRegistry> {
        VarRegistry::new(["x", "y"]).unwrap()
    }

    fn id(reg: &Arc<VarRegistry>, s: &str) -> MonomialIdeal {
        MonomialIdeal::parse(reg, s).unwrap()
    }

    fn m(reg: &Arc<VarRegistry>, s: &str) -> Monomial {
        Monomial::parse(reg, s).unwrap()
    }

    /// All monomials in `reg` of total degree at most `d`.
    fn monomials_up_to(reg: &Arc<VarRegistry>, d: u32) -> Vec<Monomial> {
        let n = reg.len();
        let mut out = vec![vec![0u32; n]];
        for slot in 0..n {
            let mut next = Vec::new();
            for e in &out {
                let used: u32 = e.iter().sum();
                for k in 0..=(d - used) {
                    let mut f = e.clone();
                    f[slot] = k;
                    next.push(f);
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|e| Monomial::from_exponents(reg, e).unwrap())
            .collect()
    }

    #[test]
    fn minimalize_examples() {
        let reg = xy();
        assert_eq!(id(&reg, "x, x^2").to_string(), "(x)");
        let a = VarRegistry::new(["a1", "a2"]).unwrap();
        assert_eq!(
            id(&a, "a1^6, a1^5*a2, a1^6*a2").to_string(),
            "(a1^5*a2, a1^6)"
        );
    }

    #[test]
    fn zero_and_unit() {
        let reg = xy();
        assert!(MonomialIdeal::zero(&reg).is_zero());
        let u = MonomialIdeal::unit(&reg);
        assert!(u.is_unit());
        assert_eq!(u.num_min_gens(), 1);
        assert!(u.contains(&Monomial::one(&reg)).unwrap());
        assert_eq!(id(&reg, "x, 1"), u);
    }

    #[test]
    fn power_and_intersect_examples() {
        let reg = xy();
        let i = id(&reg, "x^2, x*y");
        assert_eq!(i.power(1).unwrap(), i);
        assert_eq!(i.power(0).unwrap(), MonomialIdeal::unit(&reg));
        assert_eq!(id(&reg, "x").power(3).unwrap(), id(&reg, "x^3"));
        assert_eq!(i.intersect(&MonomialIdeal::unit(&reg)).unwrap(), i);
        assert_eq!(id(&reg, "x").intersect(&id(&reg, "y")).unwrap(), id(&reg, "x*y"));
    }

    #[test]
    fn intersection_matches_membership_oracle() {
        let reg = xy();
        let a = id(&reg, "x^2, y");
        let b = id(&reg, "x, y^2");
        let i = a.intersect(&b).unwrap();
        assert_eq!(i, id(&reg, "x^2, x*y, y^2"));
        for w in monomials_up_to(&reg, 3) {
            let both = a.contains(&w).unwrap() && b.contains(&w).unwrap();
            assert_eq!(i.contains(&w).unwrap(), both, "{w}");
        }
    }

    #[test]
    fn colon_examples() {
        let reg = xy();
        let i = id(&reg, "x^2*y");
        assert_eq!(i.colon_by_monomial(&Monomial::one(&reg)).unwrap(), i);
        assert_eq!(i.colon_by_monomial(&m(&reg, "x")).unwrap(), id(&reg, "x*y"));
        assert_eq!(
            i.colon_by_ideal(&MonomialIdeal::zero(&reg)),
            Err(Error::ZeroIdeal)
        );
        assert_eq!(
            id(&reg, "x^2, y").colon_by_ideal(&id(&reg, "x, y")).unwrap(),
            id(&reg, "x, y")
        );
    }

    #[test]
    fn saturate_examples() {
        let reg = xy();
        let i = id(&reg, "x^2*y, x^3");
        assert_eq!(i.saturate(&Monomial::one(&reg)).unwrap(), i);
        assert!(i.saturate(&m(&reg, "x")).unwrap().is_unit());
        assert_eq!(id(&reg, "x^2*y, y^3").saturate(&m(&reg, "x")).unwrap(), id(&reg, "y"));
    }

    #[test]
    fn substitute_examples() {
        let src = VarRegistry::new(["c1", "a1", "a2"]).unwrap();
        let dst = VarRegistry::new(["d1", "d2", "a1", "a2"]).unwrap();
        let i = id(&src, "c1*a1^4*a2^4");
        assert_eq!(i.substitute("c1", &m(&src, "c1")).unwrap(), i);
        assert_eq!(
            i.substitute("c1", &m(&dst, "d1*d2")).unwrap(),
            id(&dst, "d1*d2*a1^4*a2^4")
        );
        assert_eq!(
            i.substitute("z", &m(&dst, "d1")),
            Err(Error::UnknownVariable("z".into()))
        );
    }

    #[test]
    fn json_round_trip() {
        let reg = xy();
        let i = id(&reg, "x^2, x*y, y^3");
        let v = i.to_json();
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"variables":["x","y"],"generators":[{"x":1,"y":1},{"x":2},{"y":3}]}"#
        );
        assert_eq!(MonomialIdeal::from_json(&v).unwrap(), i);
    }

    #[test]
    fn registry_mismatch() {
        let a = MonomialIdeal::unit(&xy());
        let b = MonomialIdeal::unit(&VarRegistry::new(["x"]).unwrap());
        assert_eq!(a.sum(&b), Err(Error::RegistryMismatch));
        assert_eq!(a.intersect(&b), Err(Error::RegistryMismatch));
    }

    fn arb_ideal() -> impl Strategy<Value = Vec<Vec<u32>>> {
        prop::collection::vec(prop::collection::vec(0u32..4, 3), 1..5)
    }

    fn mk(reg: &Arc<VarRegistry>, g: Vec<Vec<u32>>) -> MonomialIdeal {
        let gens = g
            .into_iter()
            .map(|e| Monomial::from_exponents(reg, e).unwrap())
            .collect();
        MonomialIdeal::minimalize(reg, gens).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn colon_adjunction(g in arb_ideal(), w in prop::collection::vec(0u32..3, 3)) {
            let reg = VarRegistry::new(["x", "y", "z"]).unwrap();
            let i = mk(&reg, g);
            let w = Monomial::from_exponents(&reg, w).unwrap();
            let q = i.colon_by_monomial(&w).unwrap();
            for u in monomials_up_to(&reg, 4) {
                prop_assert_eq!(q.contains(&u).unwrap(), i.contains(&u.mul(&w).unwrap()).unwrap());
            }
        }

        #[test]
        fn colon_composes(g in arb_ideal(), w in prop::collection::vec(0u32..3, 3), v in prop::collection::vec(0u32..3, 3)) {
            let reg = VarRegistry::new(["x", "y", "z"]).unwrap();
            let i = mk(&reg, g);
            let w = Monomial::from_exponents(&reg, w).unwrap();
            let v = Monomial::from_exponents(&reg, v).unwrap();
            prop_assert_eq!(
                i.colon_by_monomial(&w).unwrap().colon_by_monomial(&v).unwrap(),
                i.colon_by_monomial(&w.mul(&v).unwrap()).unwrap()
            );
        }

        #[test]
        fn lattice_containments(g in arb_ideal(), h in arb_ideal()) {
            let reg = VarRegistry::new(["x", "y", "z"]).unwrap();
            let i = mk(&reg, g);
            let j = mk(&reg, h);
            let cap = i.intersect(&j).unwrap();
            let sum = i.sum(&j).unwrap();
            let prod = i.product(&j).unwrap();
            prop_assert!(cap.is_subset_of(&i).unwrap() && cap.is_subset_of(&j).unwrap());
            prop_assert!(i.is_subset_of(&sum).unwrap() && j.is_subset_of(&sum).unwrap());
            prop_assert!(prod.is_subset_of(&cap).unwrap());
            for w in monomials_up_to(&reg, 4) {
                let both = i.contains(&w).unwrap() && j.contains(&w).unwrap();
                prop_assert_eq!(cap.contains(&w).unwrap(), both);
            }
        }

        #[test]
        fn powers_add(g in arb_ideal(), a in 0u32..3, b in 0u32..3) {
            let reg = VarRegistry::new(["x", "y", "z"]).unwrap();
            let i = mk(&reg, g);
            prop_assert_eq!(
                i.power(a + b).unwrap(),
                i.power(a).unwrap().product(&i.power(b).unwrap()).unwrap()
            );
        }

        #[test]
        fn minimal_generators_are_antichain(g in arb_ideal()) {
            let reg = VarRegistry::new(["x", "y", "z"]).unwrap();
            let raw = g.clone();
            let i = mk(&reg, g);
            for (a, ga) in i.generators().iter().enumerate() {
                for (b, gb) in i.generators().iter().enumerate() {
                    if a != b {
                        prop_assert!(!ga.divides(gb).unwrap());
                    }
                }
            }
            for e in raw {
                let w = Monomial::from_exponents(&reg, e).unwrap();
                prop_assert!(i.contains(&w).unwrap());
            }
        }

        #[test]
        fn saturation_matches_large_colon(g in arb_ideal(), w in prop::collection::vec(0u32..2, 3)) {
            let reg = VarRegistry::new(["x", "y", "z"]).unwrap();
            let i = mk(&reg, g);
            let w = Monomial::from_exponents(&reg, w).unwrap();
            prop_assert_eq!(
                i.saturate(&w).unwrap(),
                i.colon_by_monomial(&w.pow(8).unwrap()).unwrap()
            );
        }
    }
}
