//! Depth and projective dimension of `R/I` for monomial ideals `I`.
//!
//! Multigraded Betti numbers are read off the lcm lattice: only multidegrees
//! `α` in the lattice carry Betti numbers, and for each one
//! `β_{i,α}(R/I) = dim H̃_{i−2}(K^α)` with the upper Koszul complex
//! `K^α = {F ⊆ supp α : x^{α−F} ∈ I}`. The open-interval formula
//! `β_{i,α}(R/I) = dim H̃_{i−2}((1, α))` over the lattice's order complex is
//! available as a second, much slower route for cross-checking.

pub mod homology;
pub mod linalg;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Value};

use crate::bhh::BhhParams;
use crate::decomposition::{associated_primes_with, DecomposeOptions};
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::{divides_raw, Exp, Monomial};
use crate::registry::VarRegistry;

use homology::{reduced_homology_ranks_capped, SimplicialComplex};

/// Resource limits for the Betti computations.
#[derive(Debug, Clone)]
pub struct BettiOptions {
    /// Maximum number of lcm-lattice elements.
    pub max_lattice: usize,
    /// Maximum number of faces in any one simplicial complex.
    pub max_faces: usize,
    /// Maximum number of entries of any dense boundary matrix.
    pub max_matrix_entries: usize,
    pub deadline: Option<Instant>,
}

impl Default for BettiOptions {
    fn default() -> Self {
        BettiOptions {
            max_lattice: 20_000,
            max_faces: 200_000,
            max_matrix_entries: 5_000_000,
            deadline: None,
        }
    }
}

impl BettiOptions {
    fn tick(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::BudgetExceeded),
            _ => Ok(()),
        }
    }
}

fn check_proper(ideal: &MonomialIdeal) -> Result<()> {
    if ideal.is_zero() {
        Err(Error::ZeroIdeal)
    } else if ideal.is_unit() {
        Err(Error::UnitIdeal)
    } else {
        Ok(())
    }
}

/// The set of lcms of all subsets of the minimal generators, bottom `1`
/// included, in ascending grlex order.
#[derive(Debug, Clone)]
pub struct LcmLattice {
    reg: Arc<VarRegistry>,
    elements: Vec<Box<[Exp]>>,
}

impl LcmLattice {
    pub fn elements(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .map(|e| Monomial::from_raw(&self.reg, e.clone()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn top(&self) -> Monomial {
        Monomial::from_raw(&self.reg, self.elements.last().expect("nonempty").clone())
    }
}

pub fn lcm_lattice(ideal: &MonomialIdeal) -> Result<LcmLattice> {
    lcm_lattice_with(ideal, &BettiOptions::default())
}

pub fn lcm_lattice_with(ideal: &MonomialIdeal, opts: &BettiOptions) -> Result<LcmLattice> {
    check_proper(ideal)?;
    let n = ideal.registry().len();
    let bottom: Box<[Exp]> = vec![0; n].into();
    let mut seen: HashSet<Box<[Exp]>> = HashSet::from([bottom.clone()]);
    let mut elements = vec![bottom];
    for g in ideal.raw() {
        opts.tick()?;
        let mut fresh = Vec::new();
        for e in &elements {
            let l: Box<[Exp]> = e.iter().zip(g.iter()).map(|(a, b)| *a.max(b)).collect();
            if !seen.contains(&l) {
                seen.insert(l.clone());
                fresh.push(l);
            }
        }
        elements.extend(fresh);
        if elements.len() > opts.max_lattice {
            return Err(Error::Capacity {
                what: "lcm lattice",
                size: elements.len(),
                cap: opts.max_lattice,
            });
        }
    }
    elements.sort_by(|a, b| crate::monomial::grlex_raw(a, b));
    Ok(LcmLattice {
        reg: ideal.registry().clone(),
        elements,
    })
}

/// Multigraded Betti numbers of `R/I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    reg: Arc<VarRegistry>,
    entries: BTreeMap<(usize, Box<[Exp]>), usize>,
}

impl BettiTable {
    pub fn nvars(&self) -> usize {
        self.reg.len()
    }

    pub fn get(&self, i: usize, alpha: &Monomial) -> usize {
        self.entries
            .get(&(i, alpha.exponents().into()))
            .copied()
            .unwrap_or(0)
    }

    /// `β_i = Σ_α β_{i,α}`.
    pub fn total(&self, i: usize) -> usize {
        self.entries
            .iter()
            .filter(|((k, _), _)| *k == i)
            .map(|(_, v)| v)
            .sum()
    }

    /// `(i, α, β_{i,α})` for every nonzero entry.
    pub fn entries(&self) -> impl Iterator<Item = (usize, Monomial, usize)> + '_ {
        self.entries
            .iter()
            .map(|((i, a), &v)| (*i, Monomial::from_raw(&self.reg, a.clone()), v))
    }

    pub fn proj_dim(&self) -> usize {
        self.entries.keys().map(|(i, _)| *i).max().unwrap_or(0)
    }

    pub fn depth(&self) -> usize {
        self.nvars() - self.proj_dim()
    }

    pub fn to_json(&self) -> Value {
        let betti: Vec<Value> = self
            .entries()
            .map(|(i, a, v)| json!({"i": i, "degree": a.to_json(), "rank": v}))
            .collect();
        json!({"pd": self.proj_dim(), "depth": self.depth(), "betti": betti})
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..=self.proj_dim() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "β{i}={}", self.total(i))?;
        }
        Ok(())
    }
}

fn record(
    entries: &mut BTreeMap<(usize, Box<[Exp]>), usize>,
    alpha: &[Exp],
    complex: &SimplicialComplex,
    opts: &BettiOptions,
) -> Result<()> {
    for (k, rank) in reduced_homology_ranks_capped(complex, opts.max_matrix_entries)?.nonzero() {
        let i = (k + 2) as usize;
        entries.insert((i, alpha.into()), rank);
    }
    Ok(())
}

pub fn graded_betti(ideal: &MonomialIdeal) -> Result<BettiTable> {
    graded_betti_with(ideal, &BettiOptions::default())
}

/// Betti numbers through the upper Koszul complexes `K^α`.
pub fn graded_betti_with(ideal: &MonomialIdeal, opts: &BettiOptions) -> Result<BettiTable> {
    let lattice = lcm_lattice_with(ideal, opts)?;
    let gens = ideal.raw();
    let mut entries = BTreeMap::new();
    entries.insert((0, lattice.elements[0].clone()), 1);
    for alpha in &lattice.elements[1..] {
        opts.tick()?;
        let supp: Vec<usize> = (0..alpha.len()).filter(|&v| alpha[v] > 0).collect();
        if supp.len() > 24 || (1usize << supp.len()) > opts.max_faces {
            return Err(Error::Capacity {
                what: "Koszul complex faces",
                size: 1 << supp.len().min(63),
                cap: opts.max_faces,
            });
        }
        let mut faces = Vec::new();
        let mut shifted = alpha.to_vec();
        for mask in 0u32..(1 << supp.len()) {
            shifted.copy_from_slice(alpha);
            for (t, &v) in supp.iter().enumerate() {
                if mask >> t & 1 == 1 {
                    shifted[v] -= 1;
                }
            }
            if gens.iter().any(|g| divides_raw(g, &shifted)) {
                faces.push((0..supp.len() as u32).filter(|t| mask >> t & 1 == 1).collect());
            }
        }
        record(&mut entries, alpha, &SimplicialComplex::from_closed_faces(faces), opts)?;
    }
    Ok(BettiTable {
        reg: ideal.registry().clone(),
        entries,
    })
}

/// Betti numbers through the order complexes of the open lattice intervals
/// `(1, α)`. Exponential in the lattice height; meant for small ideals.
pub fn graded_betti_by_intervals(ideal: &MonomialIdeal, opts: &BettiOptions) -> Result<BettiTable> {
    let lattice = lcm_lattice_with(ideal, opts)?;
    let els = &lattice.elements;
    let mut entries = BTreeMap::new();
    entries.insert((0, els[0].clone()), 1);
    // below[k]: indices j ≠ 0 with els[j] strictly dividing els[k]
    let below: Vec<Vec<u32>> = (0..els.len())
        .map(|k| {
            (1..k)
                .filter(|&j| divides_raw(&els[j], &els[k]) && els[j] != els[k])
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    for k in 1..els.len() {
        opts.tick()?;
        let inside: HashSet<u32> = below[k].iter().copied().collect();
        // chains in the open interval, built from their top element down
        let mut faces: Vec<Vec<u32>> = Vec::new();
        let mut stack: Vec<Vec<u32>> = below[k].iter().map(|&j| vec![j]).collect();
        while let Some(chain) = stack.pop() {
            let last = *chain.last().unwrap() as usize;
            for &j in &below[last] {
                if inside.contains(&j) {
                    let mut c = chain.clone();
                    c.push(j);
                    stack.push(c);
                }
            }
            faces.push(chain);
            if faces.len() > opts.max_faces {
                return Err(Error::Capacity {
                    what: "order complex faces",
                    size: faces.len(),
                    cap: opts.max_faces,
                });
            }
        }
        record(&mut entries, &els[k], &SimplicialComplex::from_closed_faces(faces), opts)?;
    }
    Ok(BettiTable {
        reg: ideal.registry().clone(),
        entries,
    })
}

/// Depth of `R/I`.
pub fn depth(ideal: &MonomialIdeal, opts: &BettiOptions) -> Result<usize> {
    Ok(graded_betti_with(ideal, opts)?.depth())
}

/// Projective dimension of `R/I`.
pub fn proj_dim(ideal: &MonomialIdeal, opts: &BettiOptions) -> Result<usize> {
    Ok(graded_betti_with(ideal, opts)?.proj_dim())
}

/// `true` iff the ideal of all variables is associated to `R/I`.
pub fn depth_zero(ideal: &MonomialIdeal, opts: &DecomposeOptions) -> Result<bool> {
    check_proper(ideal)?;
    Ok(associated_primes_with(ideal, opts)?
        .iter()
        .any(|p| p.is_maximal()))
}

/// Closed-form depth of `R/B^n` where `B` has `c_1` split into `e` variables
/// (`e = 1` is the unsplit family).
pub fn depth_formula(p: &BhhParams, e: usize, n: usize) -> Result<usize> {
    if e == 0 || n == 0 {
        return Err(Error::InvalidParams(format!("need e, n ≥ 1 (got e={e}, n={n})")));
    }
    let (m, r, s) = (p.m(), p.r(), p.s());
    Ok(if n > r * m + 1 {
        s + e - 1
    } else if (n - 1).is_multiple_of(r) {
        e - 1
    } else {
        e
    })
}

/// How [`depth_profile`] obtains each value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthStrategy {
    Formula,
    Betti,
    ZeroDetect,
}

/// One row of a depth profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DepthValue {
    Depth(usize),
    /// Zero-detect only: whether the depth is zero.
    IsZero(bool),
    /// Not computed (capacity or time budget).
    Unavailable(String),
}

#[derive(Debug, Clone)]
pub struct DepthProfile {
    pub m: usize,
    pub r: usize,
    pub s: usize,
    pub e: usize,
    pub values: Vec<(usize, DepthValue)>,
}

impl DepthProfile {
    /// `[1, rm + 1]`, where the depth is periodic with period `r`.
    pub fn periodicity_window(&self) -> (usize, usize) {
        (1, self.r * self.m + 1)
    }

    /// Powers with depth zero (known values only).
    pub fn zeros(&self) -> Vec<usize> {
        self.values
            .iter()
            .filter(|(_, v)| matches!(v, DepthValue::Depth(0) | DepthValue::IsZero(true)))
            .map(|(n, _)| *n)
            .collect()
    }

    fn depth_at(&self, n: usize) -> Option<usize> {
        self.values.iter().find(|(k, _)| *k == n).and_then(|(_, v)| match v {
            DepthValue::Depth(d) => Some(*d),
            _ => None,
        })
    }

    /// Strict local minima `n` (both computed neighbours larger; `n = 1` only
    /// needs its right neighbour). The last power is never reported.
    pub fn local_minima(&self) -> Vec<usize> {
        let last = self.values.last().map_or(0, |(n, _)| *n);
        self.values
            .iter()
            .filter_map(|(n, v)| match v {
                DepthValue::Depth(d) => Some((*n, *d)),
                _ => None,
            })
            .filter(|&(n, d)| {
                n < last
                    && self.depth_at(n + 1).is_some_and(|x| x > d)
                    && (n == 1 || self.depth_at(n - 1).is_some_and(|x| x > d))
            })
            .map(|(n, _)| n)
            .collect()
    }

    /// `depth(n) = depth(n + r)` throughout the window, as far as computed.
    pub fn is_periodic_on_window(&self) -> bool {
        let (lo, hi) = self.periodicity_window();
        (lo..=hi).all(|n| {
            n + self.r > hi
                || match (self.depth_at(n), self.depth_at(n + self.r)) {
                    (Some(a), Some(b)) => a == b,
                    _ => true,
                }
        })
    }
}

pub fn depth_profile(
    p: &BhhParams,
    e: usize,
    n_max: usize,
    strategy: DepthStrategy,
    betti: &BettiOptions,
    decomp: &DecomposeOptions,
) -> Result<DepthProfile> {
    if e == 0 {
        return Err(Error::InvalidParams("e must be ≥ 1".into()));
    }
    let base = if e == 1 {
        p.build_bhh()
    } else {
        p.split_ideal(e)?
    };
    let mut values = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let value = match strategy {
            DepthStrategy::Formula => DepthValue::Depth(depth_formula(p, e, n)?),
            DepthStrategy::Betti => match base.power(n as u32).and_then(|i| depth(&i, betti)) {
                Ok(d) => DepthValue::Depth(d),
                Err(err @ (Error::Capacity { .. } | Error::BudgetExceeded)) => {
                    DepthValue::Unavailable(err.to_string())
                }
                Err(err) => return Err(err),
            },
            DepthStrategy::ZeroDetect => {
                match base.power(n as u32).and_then(|i| depth_zero(&i, decomp)) {
                    Ok(z) => DepthValue::IsZero(z),
                    Err(err @ (Error::Capacity { .. } | Error::BudgetExceeded)) => {
                        DepthValue::Unavailable(err.to_string())
                    }
                    Err(err) => return Err(err),
                }
            }
        };
        values.push((n, value));
    }
    Ok(DepthProfile {
        m: p.m(),
        r: p.r(),
        s: p.s(),
        e,
        values,
    })
}
