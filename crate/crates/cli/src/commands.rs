use std::time::Instant;

use krsys_core::cache;
use krsys_core::cartan::CartanData;
use krsys_core::fermionic::{verify_kr_formula, NuSpec};
use krsys_core::systems::{limit_report, s_special_report, verify_q_system, verify_t_system};
use krsys_core::{make_cartan, KrCache, Result, VerifyReport, YMonomial};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::{CacheCmd, Grid, Output, Target, Verify};

fn emit_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("outputs always serialize"));
}

fn cartan(target: &Target) -> Result<CartanData> {
    make_cartan(target.series, target.rank)
}

fn text_terms(terms: impl IntoIterator<Item = (YMonomial, u64)>) -> Vec<(String, u64)> {
    terms.into_iter().map(|(m, c)| (m.to_string(), c)).collect()
}

#[derive(Serialize)]
struct QcharOut {
    #[serde(rename = "type")]
    type_name: String,
    node: usize,
    k: i64,
    s: i64,
    highest: String,
    dimension: u64,
    monomial_count: usize,
    special: bool,
    dominant: Vec<(String, u64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<(String, u64)>>,
}

pub fn qchar(cfg: &Config, target: &Target, node: usize, k: i64, s: i64, full: bool) -> Result<bool> {
    let cd = cartan(target)?;
    let chi = cfg.kr_cache().kr_qchar(&cd, node, s, k)?;
    let out = QcharOut {
        type_name: cd.name(),
        node,
        k,
        s,
        highest: chi.highest().to_string(),
        dimension: chi.dimension(),
        monomial_count: chi.monomial_count(),
        special: chi.is_special(),
        dominant: text_terms(chi.dominant_monomials()),
        terms: full.then(|| text_terms(chi.terms().iter().map(|(m, &c)| (m.clone(), c)))),
    };
    match cfg.output {
        Output::Json => emit_json(&out),
        Output::Text => {
            println!("{} node {node} k {k} s {s}", out.type_name);
            println!("highest: {}", out.highest);
            println!("dimension: {}", out.dimension);
            println!("monomials: {}", out.monomial_count);
            println!("special: {}", out.special);
            println!("dominant:");
            for (m, c) in &out.dominant {
                println!("  {c} {m}");
            }
            if let Some(terms) = &out.terms {
                println!("terms:");
                for (m, c) in terms {
                    println!("  {c} {m}");
                }
            }
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct Check {
    #[serde(skip_serializing_if = "Option::is_none")]
    node: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<i64>,
    report: VerifyReport,
}

#[derive(Serialize)]
struct GridReport {
    #[serde(rename = "type")]
    type_name: String,
    identity: &'static str,
    equal: bool,
    checks: Vec<Check>,
}

fn timed(cfg: &Config, f: impl FnOnce() -> Result<VerifyReport>) -> Result<VerifyReport> {
    let start = Instant::now();
    let report = f()?;
    Ok(if cfg.timing { report.with_elapsed(start.elapsed()) } else { report })
}

fn print_report(prefix: &str, report: &VerifyReport) {
    let verdict = if report.equal { "equal" } else { "MISMATCH" };
    let time = report.elapsed_ms.map(|ms| format!(", {ms} ms")).unwrap_or_default();
    println!("{prefix}: {verdict} (lhs {} terms, rhs {} terms{time})", report.lhs_terms, report.rhs_terms);
    for m in &report.mismatches {
        println!("  {}: lhs {}, rhs {}", m.monomial, m.lhs, m.rhs);
    }
}

fn label(name: &str, identity: &str, node: Option<usize>, k: Option<i64>) -> String {
    let mut s = format!("{identity} {name}");
    if let Some(i) = node {
        s.push_str(&format!(" node {i}"));
    }
    if let Some(k) = k {
        s.push_str(&format!(" k {k}"));
    }
    s
}

/// Runs `check` on every point; a single point prints a bare report, otherwise a grid report.
fn run_checks(
    cfg: &Config,
    cd: &CartanData,
    identity: &'static str,
    points: Vec<(Option<usize>, Option<i64>)>,
    check: impl Fn(Option<usize>, Option<i64>) -> Result<VerifyReport> + Sync,
) -> Result<bool> {
    let reports: Vec<Result<VerifyReport>> = points.par_iter().map(|&(i, k)| timed(cfg, || check(i, k))).collect();
    let mut checks = Vec::with_capacity(points.len());
    for ((node, k), report) in points.into_iter().zip(reports) {
        checks.push(Check { node, k, report: report? });
    }
    let equal = checks.iter().all(|c| c.report.equal);
    let single = checks.len() == 1;
    match (cfg.output, single) {
        (Output::Json, true) => emit_json(&checks[0].report),
        (Output::Json, false) => emit_json(&GridReport { type_name: cd.name(), identity, equal, checks }),
        (Output::Text, _) => {
            for c in &checks {
                print_report(&label(&cd.name(), identity, c.node, c.k), &c.report);
            }
        }
    }
    Ok(equal)
}

fn grid_points(cd: &CartanData, grid: &Grid) -> Result<Vec<(Option<usize>, Option<i64>)>> {
    let nodes: Vec<usize> = match grid.node {
        Some(i) => {
            cd.check_node(i)?;
            vec![i]
        }
        None => cd.nodes().collect(),
    };
    let ks: Vec<i64> = grid.k.map_or_else(|| (1..=3).collect(), |k| vec![k]);
    Ok(nodes.iter().flat_map(|&i| ks.iter().map(move |&k| (Some(i), Some(k)))).collect())
}

fn warm(cache: &KrCache, cd: &CartanData, needed: impl IntoIterator<Item = (usize, i64)>) -> Result<()> {
    // Compute shared characters once, sequentially, before parallel checks read them.
    for (i, k) in needed {
        cache.kr_qchar_base(cd, i, k)?;
    }
    Ok(())
}

pub fn verify(cfg: &Config, what: Verify) -> Result<bool> {
    let cache = cfg.kr_cache();
    match what {
        Verify::Tsystem { target, grid, s } => {
            let cd = cartan(&target)?;
            let points = grid_points(&cd, &grid)?;
            warm(&cache, &cd, points.iter().flat_map(|&(i, k)| [(i.unwrap(), k.unwrap()), (i.unwrap(), k.unwrap() + 1)]))?;
            run_checks(cfg, &cd, "tsystem", points, |i, k| verify_t_system(&cd, i.unwrap(), k.unwrap(), s, &cache))
        }
        Verify::Qsystem { target, grid } => {
            let cd = cartan(&target)?;
            let points = grid_points(&cd, &grid)?;
            warm(&cache, &cd, points.iter().flat_map(|&(i, k)| [(i.unwrap(), k.unwrap()), (i.unwrap(), k.unwrap() + 1)]))?;
            run_checks(cfg, &cd, "qsystem", points, |i, k| verify_q_system(&cd, i.unwrap(), k.unwrap(), &cache))
        }
        Verify::Special { target, grid, s } => {
            let cd = cartan(&target)?;
            let points = grid_points(&cd, &grid)?;
            run_checks(cfg, &cd, "special", points, |i, k| s_special_report(&cd, i.unwrap(), k.unwrap(), s, &cache))
        }
        Verify::Fermionic { target, nu, degree } => {
            let cd = cartan(&target)?;
            let nu: NuSpec = nu.iter().flat_map(|n| n.entries()).collect();
            nu.validate(&cd)?;
            run_checks(cfg, &cd, "fermionic", vec![(None, None)], |_, _| verify_kr_formula(&cd, &nu, degree, &cache))
        }
        Verify::Limit { target, node, depth, k_range } => {
            let cd = cartan(&target)?;
            let nodes: Vec<usize> = match node {
                Some(i) => {
                    cd.check_node(i)?;
                    vec![i]
                }
                None => cd.nodes().collect(),
            };
            let points = nodes.into_iter().map(|i| (Some(i), None)).collect();
            run_checks(cfg, &cd, "limit", points, |i, _| limit_report(&cd, i.unwrap(), depth, &k_range.0, &cache))
        }
    }
}

#[derive(Serialize)]
struct Cleared {
    removed: usize,
}

pub fn cache(cfg: &Config, what: CacheCmd) -> Result<bool> {
    let dir = &cfg.cache_dir;
    match what {
        CacheCmd::List => {
            let names: Vec<String> = cache::list(dir)?
                .iter()
                .map(|e| e.path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default())
                .collect();
            match cfg.output {
                Output::Json => emit_json(&names),
                Output::Text => names.iter().for_each(|n| println!("{n}")),
            }
        }
        CacheCmd::Clear => {
            let removed = cache::clear(dir)?;
            match cfg.output {
                Output::Json => emit_json(&Cleared { removed }),
                Output::Text => println!("removed {removed} entries"),
            }
        }
        CacheCmd::Info => {
            let entries = cache::list(dir)?;
            match cfg.output {
                Output::Json => emit_json(&entries),
                Output::Text => {
                    for e in &entries {
                        let m = &e.meta;
                        println!("{}{} node {} k {} monomials {} sha256 {}", m.series, m.rank, m.node, m.k, e.monomial_count, e.sha256);
                    }
                }
            }
        }
    }
    Ok(true)
}
