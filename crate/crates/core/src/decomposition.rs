//! Irreducible decomposition of monomial ideals and associated primes.
//!
//! The decomposition splits on the first non-pure-power minimal generator
//! `g = u·v` (`u` the pure power of `g`'s first variable), using
//! `I = (I + (u)) ∩ (I + (v))`, with results memoized on the canonical
//! generator list. Leaves are ideals generated by pure powers.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ideal::{MonomialIdeal, Raw};
use crate::monomial::{divides_raw, grlex_raw, Exp, Monomial};
use crate::registry::VarRegistry;

/// An ideal generated by pure powers `var^exp`. Slots with exponent 0 are absent.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrreducibleComponent {
    exps: Box<[Exp]>,
    reg: Arc<VarRegistry>,
}

impl IrreducibleComponent {
    pub fn new(reg: &Arc<VarRegistry>, exps: Vec<Exp>) -> Result<Self> {
        if exps.len() != reg.len() {
            return Err(Error::InvalidParams("component length mismatch".into()));
        }
        if exps.iter().all(|&e| e == 0) {
            return Err(Error::UnitIdeal);
        }
        Ok(IrreducibleComponent {
            exps: exps.into_boxed_slice(),
            reg: reg.clone(),
        })
    }

    /// Parses `{x:2, y:1}`-style maps given as `(name, exp)` pairs.
    pub fn from_pairs(reg: &Arc<VarRegistry>, pairs: &[(&str, Exp)]) -> Result<Self> {
        let mut exps = vec![0; reg.len()];
        for &(name, e) in pairs {
            exps[reg.index_of(name)?] = e;
        }
        Self::new(reg, exps)
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn exponents(&self) -> &[Exp] {
        &self.exps
    }

    /// The radical: the prime generated by the support.
    pub fn radical(&self) -> MonomialPrime {
        MonomialPrime::from_slots_unchecked(
            &self.reg,
            (0..self.exps.len()).filter(|&i| self.exps[i] > 0).collect(),
        )
    }

    pub fn to_ideal(&self) -> MonomialIdeal {
        let raw = (0..self.exps.len())
            .filter(|&i| self.exps[i] > 0)
            .map(|i| Monomial::var_power(&self.reg, i, self.exps[i]).exponents().into())
            .collect();
        MonomialIdeal::from_raw(&self.reg, raw)
    }

    /// `self ⊆ other` as ideals.
    pub fn is_subset_of(&self, other: &IrreducibleComponent) -> bool {
        component_subset(&self.exps, &other.exps)
    }

    pub fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                map.insert(self.reg.name(i).to_string(), Value::from(e));
            }
        }
        Value::Object(map)
    }
}

impl fmt::Display for IrreducibleComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ideal())
    }
}

impl fmt::Debug for IrreducibleComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Component{self}")
    }
}

/// A prime generated by a subset of the registry variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialPrime {
    reg: Arc<VarRegistry>,
    slots: Vec<usize>,
}

impl MonomialPrime {
    pub fn new(reg: &Arc<VarRegistry>, mut slots: Vec<usize>) -> Result<Self> {
        slots.sort_unstable();
        slots.dedup();
        if slots.iter().any(|&s| s >= reg.len()) {
            return Err(Error::InvalidParams("variable slot out of range".into()));
        }
        Ok(Self::from_slots_unchecked(reg, slots))
    }

    fn from_slots_unchecked(reg: &Arc<VarRegistry>, slots: Vec<usize>) -> Self {
        MonomialPrime {
            reg: reg.clone(),
            slots,
        }
    }

    pub fn from_names(reg: &Arc<VarRegistry>, names: &[&str]) -> Result<Self> {
        let slots = names
            .iter()
            .map(|n| reg.index_of(n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(reg, slots)
    }

    /// The ideal generated by all variables.
    pub fn maximal(reg: &Arc<VarRegistry>) -> Self {
        Self::from_slots_unchecked(reg, (0..reg.len()).collect())
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn contains_var(&self, slot: usize) -> bool {
        self.slots.binary_search(&slot).is_ok()
    }

    pub fn is_maximal(&self) -> bool {
        self.slots.len() == self.reg.len()
    }

    pub fn names(&self) -> Vec<&str> {
        self.slots.iter().map(|&s| self.reg.name(s)).collect()
    }

    pub fn to_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::generated_by_vars(&self.reg, &self.slots)
    }

    pub fn to_json(&self) -> Value {
        Value::from(self.names())
    }
}

impl PartialOrd for MonomialPrime {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MonomialPrime {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.slots.cmp(&other.slots)
    }
}

impl fmt::Display for MonomialPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.names().join(", "))
    }
}

impl fmt::Debug for MonomialPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prime{self}")
    }
}

/// Knobs for [`irreducible_decomposition_with`].
#[derive(Debug, Clone, Default)]
pub struct DecomposeOptions {
    /// Abort with [`Error::BudgetExceeded`] once this instant has passed.
    pub deadline: Option<Instant>,
}

/// `a ⊆ b` for pure-power ideals: every `x_i^{a_i}` lies in `b`.
fn component_subset(a: &[Exp], b: &[Exp]) -> bool {
    a.iter()
        .zip(b)
        .all(|(&ai, &bi)| ai == 0 || (bi > 0 && bi <= ai))
}

/// Drops every component that contains another one.
///
/// For pure-power ideals `q_1 ∩ … ∩ q_k ⊆ q` holds iff some `q_j ⊆ q`: the
/// monomial `∏_{i∈supp q} x_i^{b_i-1} · ∏_{i∉supp q} x_i^N` (N large) lies
/// outside `q` and inside `q_j` unless `q_j ⊆ q`. So this pairwise test is
/// the exact redundancy criterion.
fn irredundant_raw(mut comps: Vec<Raw>) -> Vec<Raw> {
    comps.sort_unstable();
    comps.dedup();
    let keep: Vec<bool> = (0..comps.len())
        .map(|i| {
            !comps
                .iter()
                .enumerate()
                .any(|(j, q)| j != i && component_subset(q, &comps[i]))
        })
        .collect();
    comps
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect()
}

struct Decomposer {
    memo: HashMap<Vec<Raw>, Arc<Vec<Raw>>>,
    deadline: Option<Instant>,
}

/// Adds `g` to a minimal generating list (`g` is known not to be in the ideal).
fn with_generator(gens: &[Raw], g: Raw) -> Vec<Raw> {
    let mut out: Vec<Raw> = gens
        .iter()
        .filter(|h| !divides_raw(&g, h))
        .cloned()
        .collect();
    let pos = out
        .binary_search_by(|h| grlex_raw(h, &g))
        .unwrap_or_else(|p| p);
    out.insert(pos, g);
    out
}

impl Decomposer {
    fn run(&mut self, gens: Vec<Raw>) -> Result<Arc<Vec<Raw>>> {
        if let Some(hit) = self.memo.get(&gens) {
            return Ok(hit.clone());
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() >= deadline {
                return Err(Error::BudgetExceeded);
            }
        }
        let pivot = gens
            .iter()
            .find(|g| g.iter().filter(|&&e| e > 0).count() >= 2);
        let result = match pivot {
            None => {
                let mut leaf = vec![0; gens[0].len()];
                for g in &gens {
                    for (slot, &e) in g.iter().enumerate() {
                        if e > 0 {
                            leaf[slot] = e;
                        }
                    }
                }
                vec![leaf.into_boxed_slice()]
            }
            Some(g) => {
                let k = g.iter().position(|&e| e > 0).unwrap();
                let mut u = vec![0; g.len()];
                u[k] = g[k];
                let mut v = g.to_vec();
                v[k] = 0;
                let left = with_generator(&gens, u.into_boxed_slice());
                let right = with_generator(&gens, v.into_boxed_slice());
                let mut comps = self.run(left)?.as_ref().clone();
                comps.extend(self.run(right)?.iter().cloned());
                irredundant_raw(comps)
            }
        };
        let result = Arc::new(result);
        self.memo.insert(gens, result.clone());
        Ok(result)
    }
}

fn require_proper(ideal: &MonomialIdeal) -> Result<()> {
    if ideal.is_zero() {
        Err(Error::ZeroIdeal)
    } else if ideal.is_unit() {
        Err(Error::UnitIdeal)
    } else {
        Ok(())
    }
}

/// Irredundant irreducible decomposition, components sorted by exponent vector.
pub fn irreducible_decomposition(ideal: &MonomialIdeal) -> Result<Vec<IrreducibleComponent>> {
    irreducible_decomposition_with(ideal, &DecomposeOptions::default())
}

pub fn irreducible_decomposition_with(
    ideal: &MonomialIdeal,
    opts: &DecomposeOptions,
) -> Result<Vec<IrreducibleComponent>> {
    require_proper(ideal)?;
    let mut dec = Decomposer {
        memo: HashMap::new(),
        deadline: opts.deadline,
    };
    let comps = dec.run(ideal.raw())?;
    let reg = ideal.registry();
    Ok(comps
        .iter()
        .map(|c| IrreducibleComponent {
            exps: c.clone(),
            reg: reg.clone(),
        })
        .collect())
}

/// Removes duplicates and every component containing another component.
pub fn irredundant(components: &[IrreducibleComponent]) -> Vec<IrreducibleComponent> {
    let Some(first) = components.first() else {
        return Vec::new();
    };
    let reg = first.reg.clone();
    irredundant_raw(components.iter().map(|c| c.exps.clone()).collect())
        .into_iter()
        .map(|exps| IrreducibleComponent {
            exps,
            reg: reg.clone(),
        })
        .collect()
}

/// Intersection of the components as a monomial ideal.
pub fn intersect_components(components: &[IrreducibleComponent]) -> Result<MonomialIdeal> {
    let mut it = components.iter();
    let first = it.next().ok_or(Error::UnitIdeal)?;
    let mut acc = first.to_ideal();
    for c in it {
        acc = acc.intersect(&c.to_ideal())?;
    }
    Ok(acc)
}

fn primes_of(components: &[IrreducibleComponent]) -> Vec<MonomialPrime> {
    let mut primes: Vec<MonomialPrime> = components.iter().map(|c| c.radical()).collect();
    primes.sort();
    primes.dedup();
    primes
}

/// `Ass(R/I)`, sorted.
pub fn associated_primes(ideal: &MonomialIdeal) -> Result<Vec<MonomialPrime>> {
    Ok(primes_of(&irreducible_decomposition(ideal)?))
}

pub fn associated_primes_with(
    ideal: &MonomialIdeal,
    opts: &DecomposeOptions,
) -> Result<Vec<MonomialPrime>> {
    Ok(primes_of(&irreducible_decomposition_with(ideal, opts)?))
}

/// `true` iff `I : w` is exactly the prime `P`.
pub fn verify_witness(ideal: &MonomialIdeal, w: &Monomial, prime: &MonomialPrime) -> bool {
    match ideal.colon_by_monomial(w) {
        Ok(q) => q == prime.to_ideal(),
        Err(_) => false,
    }
}

/// The full decomposition record exchanged with the cache and CLI.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub ideal: MonomialIdeal,
    pub components: Vec<IrreducibleComponent>,
    pub associated_primes: Vec<MonomialPrime>,
}

impl Decomposition {
    pub fn compute(ideal: &MonomialIdeal, opts: &DecomposeOptions) -> Result<Self> {
        let components = irreducible_decomposition_with(ideal, opts)?;
        let associated_primes = primes_of(&components);
        Ok(Decomposition {
            ideal: ideal.clone(),
            components,
            associated_primes,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ideal": self.ideal.to_json(),
            "components": self.components.iter().map(IrreducibleComponent::to_json).collect::<Vec<_>>(),
            "associated_primes": self.associated_primes.iter().map(MonomialPrime::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let ideal = MonomialIdeal::from_json(&value["ideal"])?;
        let reg = ideal.registry().clone();
        let components = value["components"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing `components`".into()))?
            .iter()
            .map(|c| {
                let m = Monomial::from_json(&reg, c)?;
                IrreducibleComponent::new(&reg, m.exponents().to_vec())
            })
            .collect::<Result<Vec<_>>>()?;
        let associated_primes = value["associated_primes"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing `associated_primes`".into()))?
            .iter()
            .map(|p| {
                let names = p
                    .as_array()
                    .ok_or_else(|| Error::Parse("prime must be a list".into()))?
                    .iter()
                    .map(|n| n.as_str().ok_or_else(|| Error::Parse("bad name".into())))
                    .collect::<Result<Vec<_>>>()?;
                MonomialPrime::from_names(&reg, &names)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Decomposition {
            ideal,
            components,
            associated_primes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Arc<VarRegistry> {
        VarRegistry::new(["x", "y"]).unwrap()
    }

    fn id(reg: &Arc<VarRegistry>, s: &str) -> MonomialIdeal {
        MonomialIdeal::parse(reg, s).unwrap()
    }

    fn comp(reg: &Arc<VarRegistry>, pairs: &[(&str, Exp)]) -> IrreducibleComponent {
        IrreducibleComponent::from_pairs(reg, pairs).unwrap()
    }

    /// Exact redundancy oracle: drop `q` when the intersection of the others
    /// already equals the full intersection.
    fn irredundant_by_reintersection(
        comps: &[IrreducibleComponent],
    ) -> Vec<IrreducibleComponent> {
        let mut cur: Vec<IrreducibleComponent> = comps.to_vec();
        cur.sort();
        cur.dedup();
        let full = intersect_components(&cur).unwrap();
        let mut i = 0;
        while i < cur.len() {
            if cur.len() > 1 {
                let rest: Vec<_> = cur
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, c)| c.clone())
                    .collect();
                if intersect_components(&rest).unwrap() == full {
                    cur.remove(i);
                    continue;
                }
            }
            i += 1;
        }
        cur
    }

    #[test]
    fn decomposition_examples() {
        let reg = xy();
        assert_eq!(
            irreducible_decomposition(&id(&reg, "x^2, y")).unwrap(),
            vec![comp(&reg, &[("x", 2), ("y", 1)])]
        );
        let d = irreducible_decomposition(&id(&reg, "x*y")).unwrap();
        let mut want = vec![comp(&reg, &[("x", 1)]), comp(&reg, &[("y", 1)])];
        want.sort();
        assert_eq!(d, want);
        let i = id(&reg, "x^2, x*y, y^3");
        let d = irreducible_decomposition(&i).unwrap();
        assert_eq!(
            d,
            vec![
                comp(&reg, &[("x", 1), ("y", 3)]),
                comp(&reg, &[("x", 2), ("y", 1)])
            ]
        );
        assert_eq!(intersect_components(&d).unwrap(), i);
    }

    #[test]
    fn rejects_unit_and_zero() {
        let reg = xy();
        assert_eq!(
            irreducible_decomposition(&MonomialIdeal::unit(&reg)),
            Err(Error::UnitIdeal)
        );
        assert_eq!(
            irreducible_decomposition(&MonomialIdeal::zero(&reg)),
            Err(Error::ZeroIdeal)
        );
    }

    #[test]
    fn irredundant_examples() {
        let reg = xy();
        let single = vec![comp(&reg, &[("x", 2)])];
        assert_eq!(irredundant(&single), single);
        assert_eq!(
            irredundant(&[comp(&reg, &[("x", 1)]), comp(&reg, &[("x", 1)])]),
            vec![comp(&reg, &[("x", 1)])]
        );
        let mixed = vec![
            comp(&reg, &[("x", 1)]),
            comp(&reg, &[("x", 2), ("y", 1)]),
            comp(&reg, &[("y", 1)]),
        ];
        let kept = irredundant(&mixed);
        assert_eq!(kept, irredundant_by_reintersection(&mixed));
        assert_eq!(
            intersect_components(&kept).unwrap(),
            intersect_components(&mixed).unwrap()
        );
    }

    #[test]
    fn pairwise_filter_agrees_with_reintersection() {
        let reg = VarRegistry::new(["x", "y", "z"]).unwrap();
        // all pure-power ideals with exponents ≤ 2 in three variables
        let mut all = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    if a + b + c > 0 {
                        all.push(IrreducibleComponent::new(&reg, vec![a, b, c]).unwrap());
                    }
                }
            }
        }
        // deterministic pseudo-random subsets
        let mut state = 0x2545_f491u64;
        for _ in 0..200 {
            let mut pick = Vec::new();
            for c in &all {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                if state.is_multiple_of(5) {
                    pick.push(c.clone());
                }
            }
            if pick.is_empty() {
                continue;
            }
            assert_eq!(irredundant(&pick), irredundant_by_reintersection(&pick));
        }
    }

    #[test]
    fn associated_primes_small() {
        let reg = xy();
        let ass = associated_primes(&id(&reg, "x^2")).unwrap();
        assert_eq!(ass, vec![MonomialPrime::from_names(&reg, &["x"]).unwrap()]);
        let ass = associated_primes(&id(&reg, "x^2, x*y")).unwrap();
        assert_eq!(ass.len(), 2);
        assert!(ass.iter().any(|p| p.is_maximal()));
    }

    #[test]
    fn witness_examples() {
        let reg = VarRegistry::new(["x"]).unwrap();
        let i = id(&reg, "x^2");
        let p = MonomialPrime::from_names(&reg, &["x"]).unwrap();
        assert!(verify_witness(&i, &Monomial::parse(&reg, "x").unwrap(), &p));
        assert!(!verify_witness(&i, &Monomial::one(&reg), &p));
    }

    #[test]
    fn budget_is_enforced() {
        let reg = xy();
        let opts = DecomposeOptions {
            deadline: Some(Instant::now() - std::time::Duration::from_secs(1)),
        };
        assert_eq!(
            irreducible_decomposition_with(&id(&reg, "x*y"), &opts),
            Err(Error::BudgetExceeded)
        );
    }

    #[test]
    fn decomposition_json_round_trip() {
        let reg = xy();
        let d = Decomposition::compute(&id(&reg, "x^2, x*y, y^3"), &Default::default()).unwrap();
        let v = d.to_json();
        assert_eq!(
            serde_json::to_string(&v["components"]).unwrap(),
            r#"[{"x":1,"y":3},{"x":2,"y":1}]"#
        );
        assert_eq!(
            serde_json::to_string(&v["associated_primes"]).unwrap(),
            r#"[["x","y"]]"#
        );
        let back = Decomposition::from_json(&v).unwrap();
        assert_eq!(back.components, d.components);
        assert_eq!(back.associated_primes, d.associated_primes);
    }
}
