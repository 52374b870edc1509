//! Finite simplicial complexes and their reduced homology over the rationals.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;

use super::linalg::sparse_rank;
use crate::error::{Error, Result};

/// A simplicial complex stored as its full face list. The empty face is always
/// present, so the smallest complex is `{∅}` (with `H̃_{-1} = ℚ`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    /// `by_dim[k]` holds the faces of dimension `k - 1`, each sorted.
    by_dim: Vec<Vec<Vec<u32>>>,
}

impl SimplicialComplex {
    /// The complex `{∅}`.
    pub fn empty() -> Self {
        SimplicialComplex {
            by_dim: vec![vec![vec![]]],
        }
    }

    /// Closes the given facets under taking subsets.
    pub fn from_facets(facets: &[Vec<u32>]) -> Result<Self> {
        let mut all = BTreeSet::new();
        all.insert(Vec::new());
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if f.len() > 24 {
                return Err(Error::Capacity {
                    what: "facet size",
                    size: f.len(),
                    cap: 24,
                });
            }
            for mask in 1u32..(1 << f.len()) {
                let face: Vec<u32> = (0..f.len())
                    .filter(|&t| mask >> t & 1 == 1)
                    .map(|t| f[t])
                    .collect();
                all.insert(face);
            }
        }
        Ok(Self::from_closed_faces(all.into_iter().collect()))
    }

    /// Builds from a face list that is already closed under subsets.
    pub fn from_closed_faces(faces: Vec<Vec<u32>>) -> Self {
        let mut by_dim: Vec<Vec<Vec<u32>>> = vec![vec![vec![]]];
        for mut f in faces {
            if f.is_empty() {
                continue;
            }
            f.sort_unstable();
            if by_dim.len() <= f.len() {
                by_dim.resize(f.len() + 1, Vec::new());
            }
            by_dim[f.len()].push(f);
        }
        for layer in &mut by_dim {
            layer.sort();
            layer.dedup();
        }
        debug_assert!(by_dim.iter().flatten().all(|f| {
            (0..f.len()).all(|t| {
                let mut g = f.clone();
                g.remove(t);
                by_dim[g.len()].binary_search(&g).is_ok()
            })
        }));
        SimplicialComplex { by_dim }
    }

    pub fn num_faces(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    /// Largest face dimension (`-1` for `{∅}`).
    pub fn dim(&self) -> isize {
        self.by_dim.len() as isize - 2
    }
}

/// Reduced Betti numbers `dim H̃_k`, for `k = -1 ..= dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedHomology {
    ranks: Vec<usize>,
}

impl ReducedHomology {
    pub fn rank(&self, k: isize) -> usize {
        usize::try_from(k + 1)
            .ok()
            .and_then(|i| self.ranks.get(i).copied())
            .unwrap_or(0)
    }

    /// `(k, rank)` for every nonzero `H̃_k`.
    pub fn nonzero(&self) -> impl Iterator<Item = (isize, usize)> + '_ {
        self.ranks
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > 0)
            .map(|(i, &r)| (i as isize - 1, r))
    }

    pub fn is_acyclic(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }
}

/// Reduced homology ranks over `ℚ` from exact ranks of the boundary maps.
pub fn reduced_homology_ranks(complex: &SimplicialComplex) -> ReducedHomology {
    reduced_homology_ranks_capped(complex, usize::MAX).expect("uncapped")
}

/// As [`reduced_homology_ranks`], refusing any boundary matrix with more than
/// `max_entries` (dense) entries.
pub fn reduced_homology_ranks_capped(
    complex: &SimplicialComplex,
    max_entries: usize,
) -> Result<ReducedHomology> {
    let layers = &complex.by_dim;
    for k in 1..layers.len() {
        let size = layers[k - 1].len().saturating_mul(layers[k].len());
        if size > max_entries {
            return Err(Error::Capacity {
                what: "boundary matrix entries",
                size,
                cap: max_entries,
            });
        }
    }
    // rank of ∂ from layer k to layer k-1, k ≥ 1
    let mut boundary_ranks = vec![0usize; layers.len() + 1];
    for k in 1..layers.len() {
        let index: HashMap<&[u32], usize> = layers[k - 1]
            .iter()
            .enumerate()
            .map(|(i, f)| (f.as_slice(), i))
            .collect();
        let mut entries = Vec::new();
        for (col, face) in layers[k].iter().enumerate() {
            for t in 0..face.len() {
                let mut sub = face.clone();
                sub.remove(t);
                let row = index[sub.as_slice()];
                entries.push((row, col, if t % 2 == 0 { 1 } else { -1 }));
            }
        }
        boundary_ranks[k] = sparse_rank::<BigInt>(layers[k - 1].len(), layers[k].len(), &entries);
    }
    let ranks = (0..layers.len())
        .map(|k| layers[k].len() - boundary_ranks[k] - boundary_ranks[k + 1])
        .collect();
    Ok(ReducedHomology { ranks })
}
