//! Ordered variable sets.
//!
//! A [`VarRegistry`] fixes the names and positions of the ring variables.
//! Registries built for the BHH family additionally carry a [`BhhLayout`]
//! that resolves `c_k`, `a_j`, `x_{i,j}` and `d_k` to slot indices, with the
//! cyclic column convention `x_{i,0} = x_{i,r}`, `x_{i,r+1} = x_{i,1}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index arithmetic for the BHH variable layout `[d.., c.., a.., x..]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BhhLayout {
    pub m: usize,
    pub r: usize,
    pub s: usize,
    /// Split arity. `None` for the unsplit ring with `c1..cs`.
    pub e: Option<usize>,
}

impl BhhLayout {
    fn d_count(&self) -> usize {
        self.e.unwrap_or(0)
    }

    /// Number of `c` variables actually present (c1 is absent after a split).
    fn c_count(&self) -> usize {
        if self.e.is_some() {
            self.s - 1
        } else {
            self.s
        }
    }

    fn a_offset(&self) -> usize {
        self.d_count() + self.c_count()
    }

    fn x_offset(&self) -> usize {
        self.a_offset() + self.r
    }

    pub fn len(&self) -> usize {
        self.x_offset() + self.m * self.r
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Wraps an arbitrary column index into `1..=r`.
    pub fn wrap(&self, j: i64) -> usize {
        let r = self.r as i64;
        ((j - 1).rem_euclid(r) + 1) as usize
    }
}

/// An ordered list of uniquely named variables.
#[derive(Clone)]
pub struct VarRegistry {
    names: Vec<String>,
    index: HashMap<String, usize>,
    layout: Option<BhhLayout>,
}

impl PartialEq for VarRegistry {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for VarRegistry {}

impl std::hash::Hash for VarRegistry {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.names.hash(state);
    }
}

impl PartialOrd for VarRegistry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VarRegistry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.names.cmp(&other.names)
    }
}

impl fmt::Debug for VarRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("VarRegistry").field(&self.names).finish()
    }
}

impl VarRegistry {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        Self::build(names.into_iter().map(Into::into).collect(), None)
    }

    fn build(names: Vec<String>, layout: Option<BhhLayout>) -> Result<Arc<Self>> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidParams("empty variable name".into()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidParams(format!("duplicate variable `{name}`")));
            }
        }
        Ok(Arc::new(VarRegistry {
            names,
            index,
            layout,
        }))
    }

    /// Registry for `BHH(m, r, s)`, optionally with `c1` split into `d1..de`.
    ///
    /// Order: `d1..de` (split only), `c1..cs` (or `c2..cs` when split),
    /// `a1..ar`, then `x[i,j]` row-major.
    pub fn bhh(m: usize, r: usize, s: usize, e: Option<usize>) -> Result<Arc<Self>> {
        let layout = BhhLayout { m, r, s, e };
        let mut names = Vec::with_capacity(layout.len());
        if let Some(e) = e {
            names.extend((1..=e).map(|k| format!("d{k}")));
            names.extend((2..=s).map(|k| format!("c{k}")));
        } else {
            names.extend((1..=s).map(|k| format!("c{k}")));
        }
        names.extend((1..=r).map(|j| format!("a{j}")));
        for i in 1..=m {
            names.extend((1..=r).map(|j| format!("x[{i},{j}]")));
        }
        Self::build(names, Some(layout))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn layout(&self) -> Option<&BhhLayout> {
        self.layout.as_ref()
    }

    fn require_layout(&self) -> &BhhLayout {
        self.layout
            .as_ref()
            .expect("BHH resolver used on a registry without a BHH layout")
    }

    /// Slot of `a_j`, `j` taken cyclically.
    pub fn a(&self, j: i64) -> usize {
        let l = self.require_layout();
        l.a_offset() + l.wrap(j) - 1
    }

    /// Slot of `x_{i,j}`, `j` taken cyclically, `i` in `1..=m`.
    pub fn x(&self, i: usize, j: i64) -> usize {
        let l = self.require_layout();
        assert!(i >= 1 && i <= l.m, "row index {i} out of range 1..={}", l.m);
        l.x_offset() + (i - 1) * l.r + l.wrap(j) - 1
    }

    /// Slot of `c_k`; `None` for `c1` in a split registry.
    pub fn c(&self, k: usize) -> Option<usize> {
        let l = self.require_layout();
        if k == 0 || k > l.s {
            return None;
        }
        match l.e {
            None => Some(k - 1),
            Some(e) if k >= 2 => Some(e + k - 2),
            Some(_) => None,
        }
    }

    /// Slot of the split variable `d_k`.
    pub fn d(&self, k: usize) -> Option<usize> {
        let l = self.require_layout();
        match l.e {
            Some(e) if k >= 1 && k <= e => Some(k - 1),
            _ => None,
        }
    }

    /// Slots holding the distinguished variables (`c_k`, and `d_k` if split).
    pub fn c_slots(&self) -> Vec<usize> {
        let l = self.require_layout();
        (0..l.a_offset()).collect()
    }

    pub fn a_slots(&self) -> std::ops::Range<usize> {
        let l = self.require_layout();
        l.a_offset()..l.x_offset()
    }

    pub fn x_slots(&self) -> std::ops::Range<usize> {
        let l = self.require_layout();
        l.x_offset()..l.len()
    }

    /// Inverse of [`VarRegistry::x`]: `(i, j)` for an x-slot.
    pub fn x_position(&self, slot: usize) -> Option<(usize, usize)> {
        let l = self.layout.as_ref()?;
        if slot < l.x_offset() || slot >= l.len() {
            return None;
        }
        let k = slot - l.x_offset();
        Some((k / l.r + 1, k % l.r + 1))
    }

    /// Checks that two registries are structurally equal.
    pub fn check_same(a: &Arc<Self>, b: &Arc<Self>) -> Result<()> {
        if Arc::ptr_eq(a, b) || a.names == b.names {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }
}
