//! Count profiles `n ↦ |Ass(B^n)|` (or a filtered part of it) and the grid
//! emitter with rows `m` and columns `n`.

use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::bhh::BhhParams;
use crate::decomposition::{associated_primes_with, DecomposeOptions, MonomialPrime};
use crate::error::Result;
use crate::ggood::counts::{countc, total_count_r2};

/// Which associated primes are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CFilter {
    ContainingC,
    CFree,
    Total,
}

impl CFilter {
    pub fn keeps(self, p: &BhhParams, prime: &MonomialPrime) -> bool {
        let has_c = p
            .registry()
            .c_slots()
            .iter()
            .any(|&s| prime.contains_var(s));
        match self {
            CFilter::ContainingC => has_c,
            CFilter::CFree => !has_c,
            CFilter::Total => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CFilter::ContainingC => "containing-c",
            CFilter::CFree => "c-free",
            CFilter::Total => "total",
        }
    }
}

/// Where a count came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Formula,
    Oracle,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Formula => "formula",
            Source::Oracle => "oracle",
        }
    }
}

/// The associated primes of `B^n` kept by `filter`, computed exactly.
pub fn oracle_primes(
    p: &BhhParams,
    n: usize,
    filter: CFilter,
    opts: &DecomposeOptions,
) -> Result<Vec<MonomialPrime>> {
    let power = p.build_bhh().power(n as u32)?;
    Ok(associated_primes_with(&power, opts)?
        .into_iter()
        .filter(|q| filter.keeps(p, q))
        .collect())
}

/// Closed-form count, when one exists for this filter and shape.
/// `CFree` has no closed form beyond `r = 2`.
pub fn formula_count(p: &BhhParams, n: usize, filter: CFilter) -> Result<Option<BigUint>> {
    let (m, r) = (p.m(), p.r());
    Ok(match filter {
        CFilter::ContainingC => Some(countc(m, r, n)?),
        CFilter::Total if r == 2 => Some(total_count_r2(m, n)?),
        CFilter::CFree if r == 2 => Some(total_count_r2(m, n)? - countc(m, 2, n)?),
        _ => None,
    })
}

/// A cell of a profile or grid. `None` marks a value that was not obtained
/// (capacity or time budget).
pub type Cell = Option<BigUint>;

fn cell_text(c: &Cell) -> String {
    c.as_ref().map_or_else(|| "?".to_string(), |v| v.to_string())
}

/// Counts for one `(m, r, s)` over `n = 1..`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountProfile {
    pub m: usize,
    pub r: usize,
    pub s: usize,
    pub source: Source,
    /// `counts[k]` is the value at `n = k + 1`.
    pub counts: Vec<Cell>,
}

impl CountProfile {
    /// First `n` from which every later value is known and equal, if the
    /// profile has at least two such values.
    pub fn tail_onset(&self) -> Option<usize> {
        let last = self.counts.last()?.as_ref()?;
        let mut k = self.counts.len() - 1;
        while k > 0 && self.counts[k - 1].as_ref() == Some(last) {
            k -= 1;
        }
        (k + 1 < self.counts.len()).then_some(k + 1)
    }

    pub fn csv_rows(&self, out: &mut String) {
        for (k, c) in self.counts.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                self.m,
                self.r,
                self.s,
                k + 1,
                cell_text(c),
                self.source.name()
            );
        }
    }
}

pub const CSV_HEADER: &str = "m,r,s,n,count,source";

/// Rows `m = 1..`, columns `n = 1..`, all from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountGrid {
    pub r: usize,
    pub s: usize,
    pub rows: Vec<CountProfile>,
}

impl CountGrid {
    pub fn formula(r: usize, s: usize, m_max: usize, n_max: usize) -> Result<Self> {
        let mut rows = Vec::with_capacity(m_max);
        for m in 1..=m_max {
            let p = BhhParams::new(m, r, s)?;
            let counts = (1..=n_max)
                .map(|n| formula_count(&p, n, CFilter::ContainingC))
                .collect::<Result<Vec<_>>>()?;
            rows.push(CountProfile {
                m,
                r,
                s,
                source: Source::Formula,
                counts,
            });
        }
        Ok(CountGrid { r, s, rows })
    }

    pub fn n_max(&self) -> usize {
        self.rows.iter().map(|p| p.counts.len()).max().unwrap_or(0)
    }

    pub fn get(&self, m: usize, n: usize) -> Option<&Cell> {
        self.rows.get(m.checked_sub(1)?)?.counts.get(n.checked_sub(1)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{CSV_HEADER}\n");
        for row in &self.rows {
            row.csv_rows(&mut out);
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let n_max = self.n_max();
        let mut out = String::from("| m \\ n |");
        for n in 1..=n_max {
            let _ = write!(out, " {n} |");
        }
        out.push_str("\n|---|");
        out.push_str(&"---|".repeat(n_max));
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "| {} |", row.m);
            for c in &row.counts {
                let _ = write!(out, " {} |", cell_text(c));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|p| {
                let counts: Vec<Value> = p
                    .counts
                    .iter()
                    .map(|c| c.as_ref().map_or(Value::Null, |v| json!(v.to_string())))
                    .collect();
                json!({"m": p.m, "source": p.source.name(), "counts": counts})
            })
            .collect();
        json!({"r": self.r, "s": self.s, "rows": rows})
    }

    /// `(m, n, formula, oracle)` for every cell where both are known and differ.
    pub fn mismatches(&self, other: &CountGrid) -> Vec<(usize, usize, BigUint, BigUint)> {
        let mut out = Vec::new();
        for row in &self.rows {
            for (k, c) in row.counts.iter().enumerate() {
                if let (Some(a), Some(Some(b))) = (c, other.get(row.m, k + 1)) {
                    if a != b {
                        out.push((row.m, k + 1, a.clone(), b.clone()));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for CountGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.counts.iter().map(cell_text).collect())
            .collect();
        let n_max = self.n_max();
        let width = cells
            .iter()
            .flatten()
            .map(String::len)
            .chain([n_max.to_string().len()])
            .max()
            .unwrap_or(1);
        write!(f, "{:>3} |", "m\\n")?;
        for n in 1..=n_max {
            write!(f, " {n:>width$}")?;
        }
        writeln!(f)?;
        for (row, cells) in self.rows.iter().zip(&cells) {
            write!(f, "{:>3} |", row.m)?;
            for c in cells {
                write!(f, " {c:>width$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
