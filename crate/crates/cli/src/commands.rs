use std::fmt::Write as _;
use std::time::{Duration, Instant};

use anyhow::{bail, Context as _};
use monomialis::decomposition::associated_primes_with;
use monomialis::depth::{
    depth_formula, graded_betti_with, BettiOptions, DepthProfile, DepthStrategy, DepthValue,
};
use monomialis::ggood::counts::{identity_sides, maxima_profile};
use monomialis::ggood::{
    find_otherc_anchor, witness_cfullhalf_auto, witness_firstpower, witness_ggood_noc,
    witness_otherc, default_big_exponent,
};
use monomialis::table::{formula_count, CFilter, CountGrid, CountProfile, Source, CSV_HEADER};
use monomialis::{
    BhhParams, DecomposeOptions, Error, GGoodPattern, MonomialIdeal, MonomialPrime,
    ENGINE_VERSION,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cache::{Cache, CacheKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
    Md,
}

/// Shared settings for every command.
pub struct Ctx {
    pub cache: Cache,
    pub budget: Duration,
    pub format: Format,
}

/// What a command printed and whether it found a disagreement.
pub struct Report {
    pub out: String,
    pub mismatch: bool,
}

impl Report {
    fn ok(out: String) -> Self {
        Report {
            out,
            mismatch: false,
        }
    }
}

impl Ctx {
    fn decompose_opts(&self) -> DecomposeOptions {
        DecomposeOptions {
            deadline: Some(Instant::now() + self.budget),
        }
    }

    fn betti_opts(&self) -> BettiOptions {
        BettiOptions {
            deadline: Some(Instant::now() + self.budget),
            ..Default::default()
        }
    }

    fn key(&self, p: &BhhParams, e: usize, n: usize, kind: &'static str) -> CacheKey {
        CacheKey {
            m: p.m(),
            r: p.r(),
            s: p.s(),
            e: (e > 1).then_some(e),
            n,
            kind,
            engine: ENGINE_VERSION,
        }
    }

    /// `B^n` with `c_1` split into `e` variables (`e = 1`: unsplit).
    fn power(p: &BhhParams, e: usize, n: usize) -> monomialis::Result<MonomialIdeal> {
        let base = if e == 1 {
            p.build_bhh()
        } else {
            p.split_ideal(e)?
        };
        base.power(n as u32)
    }

    /// All associated primes of `B^n`, through the cache.
    fn ass(&self, p: &BhhParams, e: usize, n: usize) -> anyhow::Result<Vec<MonomialPrime>> {
        let value = self.cache.get_or_compute(&self.key(p, e, n, "ass"), || {
            let primes = associated_primes_with(&Self::power(p, e, n)?, &self.decompose_opts())?;
            Ok(json!({
                "associated_primes": primes.iter().map(|q| q.names()).collect::<Vec<_>>()
            }))
        })?;
        let reg = if e == 1 {
            p.registry().clone()
        } else {
            p.split_registry(e)?
        };
        let lists = value["associated_primes"]
            .as_array()
            .context("malformed cache entry")?;
        lists
            .iter()
            .map(|l| {
                let names: Vec<&str> = l
                    .as_array()
                    .context("malformed cache entry")?
                    .iter()
                    .map(|v| v.as_str().context("malformed cache entry"))
                    .collect::<anyhow::Result<_>>()?;
                Ok(MonomialPrime::from_names(&reg, &names)?)
            })
            .collect()
    }

    fn betti_depth(&self, p: &BhhParams, e: usize, n: usize) -> anyhow::Result<usize> {
        let value = self.cache.get_or_compute(&self.key(p, e, n, "betti"), || {
            Ok(graded_betti_with(&Self::power(p, e, n)?, &self.betti_opts())?.to_json())
        })?;
        value["depth"]
            .as_u64()
            .map(|d| d as usize)
            .context("malformed cache entry")
    }
}

/// `true` for errors that should degrade a cell to `?` instead of aborting.
fn is_resource_error(err: &anyhow::Error) -> bool {
    matches!(
        err.downcast_ref::<Error>(),
        Some(Error::Capacity { .. } | Error::BudgetExceeded)
    )
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn params_json(p: &BhhParams) -> Value {
    serde_json::to_value(p.to_json()).expect("params serialize")
}

pub fn cmd_ass(ctx: &Ctx, p: &BhhParams, n: usize, filter: CFilter) -> anyhow::Result<Report> {
    let primes: Vec<MonomialPrime> = ctx
        .ass(p, 1, n)?
        .into_iter()
        .filter(|q| filter.keeps(p, q))
        .collect();
    let count = primes.len();
    let predicted = formula_count(p, n, filter)?;
    let verdict = match &predicted {
        Some(f) if *f == count.into() => "MATCH",
        Some(_) => "MISMATCH",
        None => "n/a",
    };
    let label = format!("BHH({},{},{})", p.m(), p.r(), p.s());
    let formula_text = predicted.as_ref().map_or("n/a".to_string(), |f| f.to_string());
    let out = match ctx.format {
        Format::Text => {
            let mut s = format!("Ass({label}^{n}) [{}]: {count}\n", filter.name());
            for q in &primes {
                let _ = writeln!(s, "  {q}");
            }
            let _ = writeln!(s, "formula: {formula_text} {verdict}");
            s
        }
        Format::Md => {
            let mut s = format!("### Ass({label}^{n}) [{}]\n\n", filter.name());
            for q in &primes {
                let _ = writeln!(s, "- `{q}`");
            }
            let _ = writeln!(s, "\ncount: {count}, formula: {formula_text} ({verdict})");
            s
        }
        Format::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            let _ = writeln!(s, "{},{},{},{n},{count},oracle", p.m(), p.r(), p.s());
            if let Some(f) = &predicted {
                let _ = writeln!(s, "{},{},{},{n},{f},formula", p.m(), p.r(), p.s());
            }
            s
        }
        Format::Json => {
            let v = json!({
                "params": params_json(p),
                "n": n,
                "filter": filter.name(),
                "associated_primes": primes.iter().map(|q| q.names()).collect::<Vec<_>>(),
                "count": count,
                "formula": predicted.as_ref().map(|f| f.to_string()),
                "verdict": verdict,
            });
            format!("{v}\n")
        }
    };
    Ok(Report {
        out,
        mismatch: verdict == "MISMATCH",
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableSource {
    Formula,
    Oracle,
    Both,
}

fn oracle_grid(ctx: &Ctx, r: usize, s: usize, m_max: usize, n_max: usize) -> anyhow::Result<CountGrid> {
    let cells: Vec<(usize, usize)> = (1..=m_max)
        .flat_map(|m| (1..=n_max).map(move |n| (m, n)))
        .collect();
    let values: Vec<anyhow::Result<Option<num_bigint::BigUint>>> = cells
        .par_iter()
        .map(|&(m, n)| {
            let p = BhhParams::new(m, r, s)?;
            match ctx.ass(&p, 1, n) {
                Ok(primes) => Ok(Some(
                    primes
                        .iter()
                        .filter(|q| CFilter::ContainingC.keeps(&p, q))
                        .count()
                        .into(),
                )),
                Err(err) if is_resource_error(&err) => Ok(None),
                Err(err) => Err(err),
            }
        })
        .collect();
    let mut rows = Vec::with_capacity(m_max);
    let mut it = values.into_iter();
    for m in 1..=m_max {
        let counts = (&mut it).take(n_max).collect::<anyhow::Result<Vec<_>>>()?;
        rows.push(CountProfile {
            m,
            r,
            s,
            source: Source::Oracle,
            counts,
        });
    }
    Ok(CountGrid { r, s, rows })
}

fn grid_out(grid: &CountGrid, title: &str, format: Format) -> String {
    match format {
        Format::Text => format!("{title}\n{grid}"),
        Format::Md => format!("### {title}\n\n{}", grid.to_markdown()),
        Format::Csv => grid.to_csv(),
        Format::Json => format!("{}\n", grid.to_json()),
    }
}

pub fn cmd_table(
    ctx: &Ctx,
    r: usize,
    s: usize,
    m_max: usize,
    n_max: usize,
    source: TableSource,
) -> anyhow::Result<Report> {
    let title = |src: &str| format!("associated primes containing c, r={r} ({src})");
    match source {
        TableSource::Formula => {
            let g = CountGrid::formula(r, s, m_max, n_max)?;
            Ok(Report::ok(grid_out(&g, &title("formula"), ctx.format)))
        }
        TableSource::Oracle => {
            let g = oracle_grid(ctx, r, s, m_max, n_max)?;
            Ok(Report::ok(grid_out(&g, &title("oracle"), ctx.format)))
        }
        TableSource::Both => {
            let f = CountGrid::formula(r, s, m_max, n_max)?;
            let o = oracle_grid(ctx, r, s, m_max, n_max)?;
            let bad = f.mismatches(&o);
            let out = match ctx.format {
                Format::Json => {
                    let list: Vec<Value> = bad
                        .iter()
                        .map(|(m, n, a, b)| {
                            json!({"m": m, "n": n, "formula": a.to_string(), "oracle": b.to_string()})
                        })
                        .collect();
                    format!(
                        "{}\n",
                        json!({"formula": f.to_json(), "oracle": o.to_json(), "mismatches": list})
                    )
                }
                Format::Csv => {
                    let mut s = f.to_csv();
                    s.push_str(o.to_csv().split_once('\n').map_or("", |(_, rest)| rest));
                    s
                }
                _ => {
                    let mut s = grid_out(&f, &title("formula"), ctx.format);
                    s.push('\n');
                    s.push_str(&grid_out(&o, &title("oracle"), ctx.format));
                    s.push('\n');
                    if bad.is_empty() {
                        s.push_str("mismatches: none\n");
                    } else {
                        s.push_str("mismatches:\n");
                        for (m, n, a, b) in &bad {
                            let _ = writeln!(s, "  m={m} n={n}: formula {a}, oracle {b}");
                        }
                    }
                    s
                }
            };
            Ok(Report {
                out,
                mismatch: !bad.is_empty(),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum StrategyArg {
    Formula,
    Betti,
    ZeroDetect,
}

impl From<StrategyArg> for DepthStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Formula => DepthStrategy::Formula,
            StrategyArg::Betti => DepthStrategy::Betti,
            StrategyArg::ZeroDetect => DepthStrategy::ZeroDetect,
        }
    }
}

fn value_text(v: &DepthValue) -> String {
    match v {
        DepthValue::Depth(d) => d.to_string(),
        DepthValue::IsZero(true) => "Z".into(),
        DepthValue::IsZero(false) => "N".into(),
        DepthValue::Unavailable(_) => "?".into(),
    }
}

pub fn cmd_depth(
    ctx: &Ctx,
    p: &BhhParams,
    e: usize,
    n_max: usize,
    strategy: StrategyArg,
) -> anyhow::Result<Report> {
    if e == 0 {
        bail!(Error::InvalidParams("e must be ≥ 1".into()));
    }
    let values: Vec<anyhow::Result<DepthValue>> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let got = match strategy {
                StrategyArg::Formula => return Ok(DepthValue::Depth(depth_formula(p, e, n)?)),
                StrategyArg::Betti => ctx.betti_depth(p, e, n).map(DepthValue::Depth),
                StrategyArg::ZeroDetect => ctx
                    .ass(p, e, n)
                    .map(|a| DepthValue::IsZero(a.iter().any(|q| q.is_maximal()))),
            };
            match got {
                Err(err) if is_resource_error(&err) => Ok(DepthValue::Unavailable(err.to_string())),
                other => other,
            }
        })
        .collect();
    let values = (1..=n_max)
        .zip(values)
        .map(|(n, v)| v.map(|v| (n, v)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let prof = DepthProfile {
        m: p.m(),
        r: p.r(),
        s: p.s(),
        e,
        values,
    };
    let strategy_name = match strategy {
        StrategyArg::Formula => "formula",
        StrategyArg::Betti => "betti",
        StrategyArg::ZeroDetect => "zero-detect",
    };
    let (lo, hi) = prof.periodicity_window();
    let minima = prof.local_minima();
    let out = match ctx.format {
        Format::Csv => {
            let mut s = String::from("m,r,s,e,n,depth,strategy\n");
            for (n, v) in &prof.values {
                let _ = writeln!(
                    s,
                    "{},{},{},{e},{n},{},{strategy_name}",
                    p.m(),
                    p.r(),
                    p.s(),
                    value_text(v)
                );
            }
            s
        }
        Format::Json => {
            let vals: Vec<Value> = prof
                .values
                .iter()
                .map(|(n, v)| {
                    let v = match v {
                        DepthValue::Depth(d) => json!(d),
                        DepthValue::IsZero(z) => json!(*z),
                        DepthValue::Unavailable(_) => Value::Null,
                    };
                    json!({"n": n, "value": v})
                })
                .collect();
            let v = json!({
                "params": params_json(p),
                "e": e,
                "strategy": strategy_name,
                "values": vals,
                "window": [lo, hi],
                "zeros": prof.zeros(),
                "local_minima": minima,
                "periodic_on_window": prof.is_periodic_on_window(),
            });
            format!("{v}\n")
        }
        Format::Text | Format::Md => {
            let ns = join(prof.values.iter().map(|(n, _)| n), " ");
            let vs = join(prof.values.iter().map(|(_, v)| value_text(v)), " ");
            let mut s = format!(
                "depth of R/B^n for BHH({},{},{}), e={e}, strategy {strategy_name}\n",
                p.m(),
                p.r(),
                p.s()
            );
            let _ = writeln!(s, "n:     {ns}");
            let _ = writeln!(s, "depth: {vs}");
            let _ = writeln!(s, "periodicity window: [{lo}, {hi}]");
            let zeros = prof.zeros();
            let _ = writeln!(s, "zeros: {}", if zeros.is_empty() { "none".to_string() } else { join(zeros, " ") });
            if strategy != StrategyArg::ZeroDetect {
                let _ = writeln!(s, "local minima: {}", join(minima, " "));
                let _ = writeln!(
                    s,
                    "periodic on window: {}",
                    if prof.is_periodic_on_window() { "yes" } else { "no" }
                );
            }
            s
        }
    };
    Ok(Report::ok(out))
}

pub fn cmd_identity(ctx: &Ctx, m_max: usize) -> anyhow::Result<Report> {
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    for m in 1..=m_max {
        for n in 1..=2 * m + 4 {
            let (l, r) = identity_sides(m, n)?;
            if l != r {
                failures.push((m, n));
            }
            rows.push((m, n, l, r));
        }
    }
    let out = match ctx.format {
        Format::Csv => {
            let mut s = String::from("m,n,left,right,holds\n");
            for (m, n, l, r) in &rows {
                let _ = writeln!(s, "{m},{n},{l},{r},{}", l == r);
            }
            s
        }
        Format::Json => {
            let fails: Vec<Value> = failures.iter().map(|(m, n)| json!({"m": m, "n": n})).collect();
            format!(
                "{}\n",
                json!({"m_max": m_max, "checked": rows.len(), "failures": fails})
            )
        }
        Format::Text | Format::Md => {
            let mut s = format!(
                "binomial identity: checked {} cases (m ≤ {m_max}, n ≤ 2m+4)\n",
                rows.len()
            );
            if failures.is_empty() {
                s.push_str("all pass\n");
            } else {
                for (m, n) in &failures {
                    let _ = writeln!(s, "FAIL m={m} n={n}");
                }
            }
            s
        }
    };
    Ok(Report {
        out,
        mismatch: !failures.is_empty(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum WitnessKind {
    Cfullhalf,
    OtherC,
    GgoodNoc,
    FirstPower,
}

/// Parses `"1;1,2"` into per-row column lists.
pub fn parse_rows(text: &str) -> anyhow::Result<Vec<Vec<usize>>> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().with_context(|| format!("bad column `{t}`")))
                .collect()
        })
        .collect()
}

pub fn cmd_witness(
    ctx: &Ctx,
    kind: WitnessKind,
    p: &BhhParams,
    rows: &[Vec<usize>],
    n: usize,
) -> anyhow::Result<Report> {
    if rows.len() != p.m() {
        bail!(Error::InvalidParams(format!(
            "--rows gives {} rows but m = {}",
            rows.len(),
            p.m()
        )));
    }
    let with_c = matches!(kind, WitnessKind::Cfullhalf | WitnessKind::OtherC);
    let pattern = GGoodPattern::new(p.r(), rows, with_c)?;
    let n = if kind == WitnessKind::FirstPower { 1 } else { n };
    let w = match kind {
        WitnessKind::Cfullhalf => witness_cfullhalf_auto(p, &pattern, n)?,
        WitnessKind::OtherC => {
            let (i0, j0) = find_otherc_anchor(&pattern).ok_or_else(|| {
                Error::Precondition(format!("{pattern} has no row with x_(i,j-1), x_(i,j) in P and x_(i,j+1) not in P"))
            })?;
            witness_otherc(p, &pattern, i0, j0, default_big_exponent(n), n)?
        }
        WitnessKind::GgoodNoc => witness_ggood_noc(p, &pattern, n)?,
        WitnessKind::FirstPower => witness_firstpower(p, &pattern)?,
    };
    let prime = pattern.to_prime(p)?;
    let colon = p.build_bhh().power(n as u32)?.colon_by_monomial(&w)?;
    let pass = colon == prime.to_ideal();
    let verdict = if pass { "PASS" } else { "FAIL" };
    let out = match ctx.format {
        Format::Json => format!(
            "{}\n",
            json!({
                "params": params_json(p),
                "n": n,
                "prime": prime.to_json(),
                "witness": w.to_json(),
                "colon": colon.to_json(),
                "verdict": verdict,
            })
        ),
        Format::Csv => format!("n,prime,witness,verdict\n{n},\"{prime}\",{w},{verdict}\n"),
        Format::Text | Format::Md => {
            let mut s = format!("pattern: {pattern}\nprime:   {prime}\nwitness: {w}\n");
            if !pass {
                let _ = writeln!(s, "colon:   {colon}");
            }
            let _ = writeln!(s, "B^{n} : w = P  {verdict}");
            s
        }
    };
    Ok(Report {
        out,
        mismatch: !pass,
    })
}

pub fn cmd_maxima(ctx: &Ctx, m: usize) -> anyhow::Result<Report> {
    let rep = maxima_profile(m)?;
    let ok = rep.matches_expectation();
    let verdict = if ok { "PASS" } else { "FAIL" };
    let out = match ctx.format {
        Format::Csv => {
            let mut s = String::from("m,n,count\n");
            for (n, v) in &rep.profile {
                let _ = writeln!(s, "{m},{n},{v}");
            }
            s
        }
        Format::Json => {
            let prof: Vec<Value> = rep
                .profile
                .iter()
                .map(|(n, v)| json!({"n": n, "count": v.to_string()}))
                .collect();
            let maxima: Vec<Value> = rep
                .maxima
                .iter()
                .map(|(n, v)| json!({"n": n, "count": v.to_string()}))
                .collect();
            format!(
                "{}\n",
                json!({
                    "m": m,
                    "profile": prof,
                    "maxima": maxima,
                    "expected_count": rep.expected_count(),
                    "expected_value": rep.expected_value().to_string(),
                    "verdict": verdict,
                })
            )
        }
        Format::Text | Format::Md => {
            let mut s = format!("|Ass(B^n)| for m={m}, r=2\n");
            let _ = writeln!(s, "n:     {}", join(rep.profile.iter().map(|(n, _)| n), " "));
            let _ = writeln!(s, "count: {}", join(rep.profile.iter().map(|(_, v)| v), " "));
            let _ = writeln!(
                s,
                "local maxima: {}",
                join(rep.maxima.iter().map(|(n, v)| format!("n={n} ({v})")), ", ")
            );
            let _ = writeln!(
                s,
                "expected {} maxima at n = 3, 5, ... with value 2*3^{m}+1 = {}: {verdict}",
                rep.expected_count(),
                rep.expected_value()
            );
            s
        }
    };
    Ok(Report {
        out,
        mismatch: !ok,
    })
}
