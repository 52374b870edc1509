//! Exponent-vector monomials over a [`VarRegistry`].

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::registry::VarRegistry;

/// Exponent type. Products are checked, so overflow surfaces as an error.
pub type Exp = u32;

/// A monomial: one non-negative exponent per registry variable.
///
/// Ordering is graded-lexicographic in registry order (total degree first,
/// then the first differing variable with the larger exponent is larger).
#[derive(Clone)]
pub struct Monomial {
    reg: Arc<VarRegistry>,
    exps: Box<[Exp]>,
}

impl Monomial {
    pub fn one(reg: &Arc<VarRegistry>) -> Self {
        Monomial {
            reg: reg.clone(),
            exps: vec![0; reg.len()].into_boxed_slice(),
        }
    }

    pub fn from_exponents(reg: &Arc<VarRegistry>, exps: Vec<Exp>) -> Result<Self> {
        if exps.len() != reg.len() {
            return Err(Error::InvalidParams(format!(
                "exponent vector of length {} for a registry of {} variables",
                exps.len(),
                reg.len()
            )));
        }
        Ok(Monomial {
            reg: reg.clone(),
            exps: exps.into_boxed_slice(),
        })
    }

    /// `var^exp` for a variable slot.
    pub fn var_power(reg: &Arc<VarRegistry>, slot: usize, exp: Exp) -> Self {
        let mut m = Self::one(reg);
        m.exps[slot] = exp;
        m
    }

    /// Builds a monomial from `(slot, exponent)` factors; repeated slots add up.
    pub fn from_factors(reg: &Arc<VarRegistry>, factors: &[(usize, Exp)]) -> Result<Self> {
        let mut m = Self::one(reg);
        for &(slot, e) in factors {
            if slot >= reg.len() {
                return Err(Error::InvalidParams(format!("slot {slot} out of range")));
            }
            m.exps[slot] = m.exps[slot]
                .checked_add(e)
                .ok_or(Error::Overflow("monomial construction"))?;
        }
        Ok(m)
    }

    pub(crate) fn from_raw(reg: &Arc<VarRegistry>, exps: Box<[Exp]>) -> Self {
        debug_assert_eq!(exps.len(), reg.len());
        Monomial {
            reg: reg.clone(),
            exps,
        }
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn exponents(&self) -> &[Exp] {
        &self.exps
    }

    pub fn exponent(&self, slot: usize) -> Exp {
        self.exps[slot]
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Slots with a positive exponent, in registry order.
    pub fn support(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// `Some((slot, exp))` if this is a pure power of a single variable.
    pub fn as_pure_power(&self) -> Option<(usize, Exp)> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }

    fn check(&self, other: &Monomial) -> Result<()> {
        VarRegistry::check_same(&self.reg, &other.reg)
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        self.check(other)?;
        let exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("monomial product")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial::from_raw(&self.reg, exps.into_boxed_slice()))
    }

    pub fn pow(&self, k: u32) -> Result<Monomial> {
        let exps = self
            .exps
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow("monomial power")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial::from_raw(&self.reg, exps.into_boxed_slice()))
    }

    /// `true` iff `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> Result<bool> {
        self.check(other)?;
        Ok(divides_raw(&self.exps, &other.exps))
    }

    /// The monomial generator of `(self) : other`, i.e. `max(self - other, 0)`.
    pub fn colon(&self, other: &Monomial) -> Result<Monomial> {
        self.check(other)?;
        Ok(self.zip_with(other, |a, b| a.saturating_sub(b)))
    }

    pub fn lcm(&self, other: &Monomial) -> Result<Monomial> {
        self.check(other)?;
        Ok(self.zip_with(other, Exp::max))
    }

    pub fn gcd(&self, other: &Monomial) -> Result<Monomial> {
        self.check(other)?;
        Ok(self.zip_with(other, Exp::min))
    }

    fn zip_with(&self, other: &Monomial, f: impl Fn(Exp, Exp) -> Exp) -> Monomial {
        let exps: Box<[Exp]> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(&a, &b)| f(a, b))
            .collect();
        Monomial::from_raw(&self.reg, exps)
    }

    /// Moves the monomial onto another registry by variable name.
    pub fn transport(&self, target: &Arc<VarRegistry>) -> Result<Monomial> {
        let mut out = Monomial::one(target);
        for slot in self.support() {
            let t = target.index_of(self.reg.name(slot))?;
            out.exps[t] = self.exps[slot];
        }
        Ok(out)
    }

    /// JSON object `{name: exponent}` over the support, in registry order.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for slot in self.support() {
            map.insert(self.reg.name(slot).to_string(), Value::from(self.exps[slot]));
        }
        Value::Object(map)
    }

    pub fn from_json(reg: &Arc<VarRegistry>, value: &Value) -> Result<Monomial> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("monomial JSON must be an object".into()))?;
        let mut m = Monomial::one(reg);
        for (name, e) in obj {
            let slot = reg.index_of(name)?;
            let e = e
                .as_u64()
                .filter(|&e| e > 0 && e <= Exp::MAX as u64)
                .ok_or_else(|| Error::Parse(format!("bad exponent for `{name}`")))?;
            m.exps[slot] = e as Exp;
        }
        Ok(m)
    }

    /// Parses the text form `a1^4*x[1,1]*x[1,2]^2` (or `1`).
    pub fn parse(reg: &Arc<VarRegistry>, text: &str) -> Result<Monomial> {
        let text = text.trim();
        let mut m = Monomial::one(reg);
        if text == "1" {
            return Ok(m);
        }
        for factor in text.split('*') {
            let factor = factor.trim();
            let (name, exp) = match factor.rsplit_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim()
                        .parse::<Exp>()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?,
                ),
                None => (factor, 1),
            };
            let slot = reg.index_of(name)?;
            m.exps[slot] = m.exps[slot]
                .checked_add(exp)
                .ok_or(Error::Overflow("monomial parse"))?;
        }
        Ok(m)
    }
}

pub(crate) fn divides_raw(a: &[Exp], b: &[Exp]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub(crate) fn grlex_raw(a: &[Exp], b: &[Exp]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        self.exps == other.exps && *self.reg == *other.reg
    }
}

impl Eq for Monomial {}

impl std::hash::Hash for Monomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.exps.hash(state);
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex_raw(&self.exps, &other.exps)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for slot in self.support() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(self.reg.name(slot))?;
            if self.exps[slot] > 1 {
                write!(f, "^{}", self.exps[slot])?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({self})")
    }
}
