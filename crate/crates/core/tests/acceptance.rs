//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use krsys_core::cartan::{make_cartan, simple_reflection, CartanData, Series, Weight};
use krsys_core::charring::{delta_product, is_weyl_invariant, restrict, truncate};
use krsys_core::fermionic::{fermionic_sum, gen_binomial, verify_kr_formula, NuSpec};
use krsys_core::fmalgo::{Caps, KrCache};
use krsys_core::qchar::{multiply, LaurentPoly, QCharacter};
use krsys_core::sl2core::{i_decompose, lift_l, sl2_kr_qchar};
use krsys_core::systems::{
    b_set_right_negative, dominant_ledger, e_positivity, ledger_matches, limit_stabilization, restriction_commutes, s_factors,
    verify_q_system, verify_s_special, verify_t_system, KrFactorList,
};
use krsys_core::ymono::{a_inverse, factor_over_a, is_right_negative, kr_monomial, omega, YMonomial};
use krsys_core::Result;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const GRID: [(Series, usize); 10] = [
    (Series::A, 1),
    (Series::A, 2),
    (Series::A, 3),
    (Series::A, 4),
    (Series::B, 2),
    (Series::B, 3),
    (Series::C, 2),
    (Series::C, 3),
    (Series::D, 4),
    (Series::G, 2),
];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], checked: usize, what: &str) -> Self {
        match failures.first() {
            None => Outcome { pass: true, detail: format!("{checked} {what}") },
            Some(first) => Outcome { pass: false, detail: format!("{} of {checked} {what} failed, first: {first}", failures.len()) },
        }
    }
}

fn cd(series: Series, n: usize) -> CartanData {
    make_cartan(series, n).expect("valid type")
}

fn grid_points() -> Vec<(CartanData, usize, i64)> {
    let mut out = Vec::new();
    for (series, n) in GRID {
        let g = cd(series, n);
        for i in g.nodes() {
            for k in 1..=3 {
                out.push((g.clone(), i, k));
            }
        }
    }
    out
}

fn label(g: &CartanData, i: usize, k: i64) -> String {
    format!("{} node {i} k {k}", g.name())
}

fn criterion_1(_: &KrCache) -> Result<Outcome> {
    let a1 = cd(Series::A, 1);
    let mut failures = Vec::new();
    for k in 0..=6i64 {
        let chi = krsys_core::kr_qchar(&a1, 1, 0, k, &Caps::default())?;
        // Closed form: Y_0 ... Y_{2(k-t-1)} * Y_{2(k-t+1)}^{-1} ... Y_{2k}^{-1} for t = 0..k.
        let mut expected = BTreeMap::new();
        for t in 0..=k {
            let mut f: Vec<(u32, i64, i64)> = (0..k - t).map(|u| (1, 2 * u, 1)).collect();
            f.extend((k - t + 1..=k).map(|u| (1, 2 * u, -1)));
            expected.insert(YMonomial::from_factors(f)?, 1u64);
        }
        if chi.terms() != &expected || chi.dimension() != k as u64 + 1 || chi.monomial_count() != k as usize + 1 {
            failures.push(format!("k {k}"));
        }
        if sl2_kr_qchar(1, 0, k)? != chi {
            failures.push(format!("k {k} rank-one formula"));
        }
    }
    Ok(Outcome::new(&failures, 7, "sl2 KR characters"))
}

fn special_and_lower(g: &CartanData, i: usize, k: i64, chi: &QCharacter) -> Result<bool> {
    if !chi.is_special() {
        return Ok(false);
    }
    let ri = g.r(i);
    let bound = kr_monomial(g, i, 0, k)?.checked_mul(&a_inverse(g, i, ri * (2 * k - 1))?)?;
    for m in chi.terms().keys() {
        if m == chi.highest() {
            continue;
        }
        if !is_right_negative(m)? || factor_over_a(g, m, &bound)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn criterion_2(cache: &KrCache) -> Result<Outcome> {
    let mut failures = Vec::new();
    let points = grid_points();
    for (g, i, k) in &points {
        let chi = cache.kr_qchar(g, *i, 0, *k)?;
        if !special_and_lower(g, *i, *k, &chi)? {
            failures.push(label(g, *i, *k));
        }
    }
    Ok(Outcome::new(&failures, points.len(), "KR characters special, right-negative and below the first A-step"))
}

/// The listed exact sequences per type, as `(node, length, offset)` for `S` at offset 0.
fn listed_s(series: Series, n: usize, i: usize, k: i64) -> Vec<(usize, i64, i64)> {
    let (r, odd) = (k / 2, k % 2 == 1);
    let pair = |j: usize| if odd { [(j, r + 1, 1), (j, r, 3)] } else { [(j, r, 1), (j, r, 3)] };
    match series {
        Series::A => [i.wrapping_sub(1), i + 1].into_iter().filter(|&j| (1..=n).contains(&j)).map(|j| (j, k, 1)).collect(),
        Series::D => {
            // D4: node 2 is the trivalent node.
            assert_eq!(n, 4);
            if i == 2 {
                vec![(1, k, 1), (3, k, 1), (4, k, 1)]
            } else {
                vec![(2, k, 1)]
            }
        }
        Series::B => match i {
            _ if i == n => pair(n - 1).to_vec(),
            _ if i == n - 1 && n >= 3 => vec![(n - 2, k, 2), (n, 2 * k, 1)],
            _ if i == n - 1 => vec![(n, 2 * k, 1)],
            1 => vec![(2, k, 2)],
            _ => vec![(i - 1, k, 2), (i + 1, k, 2)],
        },
        Series::C => match i {
            _ if i == n => vec![(n - 1, 2 * k, 1)],
            _ if i == n - 1 => {
                let mut v = if n >= 3 { vec![(n - 2, k, 1)] } else { vec![] };
                v.extend(pair(n));
                v
            }
            1 => vec![(2, k, 1)],
            _ => vec![(i - 1, k, 1), (i + 1, k, 1)],
        },
        Series::G => match (i, k / 3, k % 3) {
            (1, _, _) => vec![(2, 3 * k, 1)],
            (_, r, 0) => vec![(1, r, 1), (1, r, 3), (1, r, 5)],
            (_, r, 1) => vec![(1, r + 1, 1), (1, r, 3), (1, r, 5)],
            (_, r, _) => vec![(1, r + 1, 1), (1, r + 1, 3), (1, r, 5)],
        },
        _ => unreachable!("not in the listed types"),
    }
}

fn criterion_3(cache: &KrCache) -> Result<Outcome> {
    let mut failures = Vec::new();
    let points = grid_points();
    for (g, i, k) in &points {
        let rep = verify_t_system(g, *i, *k, 0, cache)?;
        if !rep.equal {
            failures.push(format!("{} ({} mismatches)", label(g, *i, *k), rep.mismatches.len()));
        }
    }
    let mut listed = 0;
    for (series, n) in [(Series::B, 2), (Series::B, 3), (Series::C, 2), (Series::C, 3), (Series::G, 2), (Series::A, 3), (Series::D, 4)] {
        let g = cd(series, n);
        for i in g.nodes() {
            for k in 1..=9 {
                listed += 1;
                if s_factors(&g, i, k, 0)? != KrFactorList::new(listed_s(series, n, i, k)) {
                    failures.push(format!("listed S for {}", label(&g, i, k)));
                }
            }
        }
    }
    let spot = verify_t_system(&cd(Series::B, 2), 2, 2, 7, cache)?;
    if !spot.equal {
        failures.push("B2 node 2 k 2 translated to s 7".into());
    }
    Ok(Outcome::new(&failures, points.len() + listed + 1, "T-system identities and listed S factors"))
}

fn criterion_4(cache: &KrCache) -> Result<Outcome> {
    let mut failures = Vec::new();
    let points = grid_points();
    for (g, i, k) in &points {
        if !verify_q_system(g, *i, *k, cache)?.equal {
            failures.push(format!("Q-system {}", label(g, *i, *k)));
        }
        if !restriction_commutes(g, *i, *k, cache)? {
            failures.push(format!("restriction {}", label(g, *i, *k)));
        }
    }
    Ok(Outcome::new(&failures, points.len(), "Q-system identities with restriction commuting"))
}

fn criterion_5(cache: &KrCache) -> Result<Outcome> {
    let mut failures = Vec::new();
    let points = grid_points();
    for (g, i, k) in &points {
        let ledger = dominant_ledger(g, *i, *k, 0, cache)?;
        if !ledger_matches(g, *i, *k, 0, &ledger)? {
            failures.push(label(g, *i, *k));
        }
    }
    Ok(Outcome::new(&failures, points.len(), "dominant ledgers"))
}

fn criterion_6(cache: &KrCache) -> Result<Outcome> {
    let mut failures = Vec::new();
    let points = grid_points();
    for (g, i, k) in &points {
        if !verify_s_special(g, *i, *k, 0, cache)? {
            failures.push(format!("S not special at {}", label(g, *i, *k)));
        }
        if !b_set_right_negative(g, *i, *k, 0)? {
            failures.push(format!("shifted B not right-negative at {}", label(g, *i, *k)));
        }
    }
    Ok(Outcome::new(&failures, points.len(), "S modules special with right-negative B sets"))
}

fn criterion_7(cache: &KrCache) -> Result<Outcome> {
    let d = 6;
    let mut failures = Vec::new();
    let mut checked = 0;
    let types = [(Series::A, 1), (Series::A, 2), (Series::A, 3), (Series::B, 2), (Series::C, 2), (Series::G, 2)];
    for (series, n) in types {
        let g = cd(series, n);
        let mut nus: Vec<NuSpec> = Vec::new();
        for i in g.nodes() {
            for k in 1..=2 {
                nus.push([(i, k, 1)].into_iter().collect());
            }
        }
        nus.push([(1, 1, 1), (n, 2, 1)].into_iter().collect());
        for nu in nus {
            checked += 1;
            let rep = verify_kr_formula(&g, &nu, d, cache)?;
            if !rep.equal {
                failures.push(format!("{} nu {nu} ({} mismatches)", g.name(), rep.mismatches.len()));
            }
            let (f4, f6) = (fermionic_sum(&g, &nu, 4)?, fermionic_sum(&g, &nu, 6)?);
            if truncate(&g, &f6, 4)? != f4 {
                failures.push(format!("{} nu {nu} truncation coherence", g.name()));
            }
        }
    }
    for (series, n) in [(Series::A, 1), (Series::A, 2), (Series::B, 2), (Series::G, 2)] {
        let g = cd(series, n);
        checked += 1;
        if fermionic_sum(&g, &NuSpec::new(), d)? != truncate(&g, &delta_product(&g), d)? {
            failures.push(format!("F(0) for {}", g.name()));
        }
    }
    Ok(Outcome::new(&failures, checked, "fermionic identities at degree 6"))
}

fn criterion_8(cache: &KrCache) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (series, n) in [(Series::A, 1), (Series::A, 2), (Series::B, 2)] {
        let g = cd(series, n);
        for i in g.nodes() {
            checked += 1;
            if !limit_stabilization(&g, i, 3, &[3, 4, 5], cache)? {
                failures.push(format!("limit {} node {i}", g.name()));
            }
            for k in 0..=3 {
                checked += 1;
                if !e_positivity(&g, i, k, 0, cache)? {
                    failures.push(format!("E-positivity {}", label(&g, i, k)));
                }
            }
        }
    }
    Ok(Outcome::new(&failures, checked, "stabilization and E-positivity checks"))
}

fn runner(seed: u8) -> TestRunner {
    TestRunner::new_with_rng(
        Config { cases: 1000, failure_persistence: None, ..Config::default() },
        TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]),
    )
}

fn monomial(rank: usize) -> impl Strategy<Value = YMonomial> {
    prop::collection::vec((1..=rank as u32, -8i64..8, -3i64..4), 0..6).prop_map(|f| YMonomial::from_factors(f).unwrap())
}

fn criterion_9(cache: &KrCache) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut suites = 0;
    let mut record = |name: &str, res: std::result::Result<(), String>| {
        suites += 1;
        if let Err(e) = res {
            failures.push(format!("{name}: {e}"));
        }
    };
    let b3 = cd(Series::B, 3);

    record(
        "omega additivity",
        runner(1)
            .run(&(monomial(3), monomial(3)), |(a, b)| {
                prop_assert_eq!(omega(&b3, &a.checked_mul(&b).unwrap()), &omega(&b3, &a) + &omega(&b3, &b));
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );

    record(
        "right-negativity closure",
        runner(2)
            .run(&(monomial(3), monomial(3)), |(a, b)| {
                let (Ok(ra), Ok(rb)) = (is_right_negative(&a), is_right_negative(&b)) else { return Ok(()) };
                if ra && rb {
                    prop_assert!(is_right_negative(&a.checked_mul(&b).unwrap()).unwrap());
                }
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );

    let g2 = cd(Series::G, 2);
    record(
        "factor over A round trip",
        runner(3)
            .run(&(monomial(2), prop::collection::vec((1usize..=2, -6i64..6), 0..6)), |(m, steps)| {
                let mut lower = m.clone();
                for &(j, s) in &steps {
                    lower = lower.checked_mul(&a_inverse(&g2, j, s).unwrap()).unwrap();
                }
                let v = factor_over_a(&g2, &lower, &m).unwrap().expect("lower by construction");
                prop_assert_eq!(v.depth(), steps.len() as u64);
                prop_assert_eq!(m.checked_mul(&v.to_monomial(&g2).unwrap()).unwrap(), lower);
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );

    let c3 = cd(Series::C, 3);
    record(
        "i-decomposition positivity",
        runner(4)
            .run(&(1usize..=3, prop::collection::vec((-6i64..6, 1i64..3), 1..4)), |(i, strings)| {
                let mut chi = QCharacter::trivial();
                for &(s, k) in &strings {
                    chi = multiply(&chi, &lift_l(&c3, i, &kr_monomial(&c3, i, s, k).unwrap()).unwrap()).unwrap();
                }
                let parts = i_decompose(&c3, i, &chi.to_poly()).unwrap();
                let mut rebuilt = LaurentPoly::zero();
                for (m, c) in &parts {
                    prop_assert!(*c > 0);
                    rebuilt.add_scaled(&lift_l(&c3, i, m).unwrap().to_poly(), *c as i64).unwrap();
                }
                prop_assert_eq!(rebuilt, chi.to_poly());
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );

    record(
        "Pascal recurrence",
        runner(5)
            .run(&(-60i64..60, 1i64..14), |(a, b)| {
                prop_assert_eq!(gen_binomial(a, b).unwrap(), gen_binomial(a - 1, b - 1).unwrap() + gen_binomial(a - 1, b).unwrap());
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );

    let weyl_types: Vec<CartanData> = GRID.iter().map(|&(s, n)| cd(s, n)).collect();
    let strat = (0..weyl_types.len()).prop_flat_map(|t| (Just(t), 1..=GRID[t].1, -4i64..4, 0i64..=2));
    record(
        "Weyl invariance of restricted KR characters",
        runner(6)
            .run(&strat, |(t, i, s, k)| {
                let g = &weyl_types[t];
                let chi = restrict(g, &cache.kr_qchar(g, i, s, k).unwrap());
                prop_assert!(is_weyl_invariant(g, &chi));
                prop_assert_eq!(chi.coefficient(&(k * &Weight::fundamental(g.rank(), i))), 1);
                let w = chi.terms().keys().next().unwrap();
                prop_assert_eq!(chi.coefficient(&simple_reflection(g, i, w).unwrap()), chi.coefficient(w));
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );

    let b2 = cd(Series::B, 2);
    let kr = (1usize..=2, -4i64..4, 0i64..=2);
    record(
        "restriction is a ring morphism",
        runner(7)
            .run(&(kr.clone(), kr), |((i, s, k), (j, t, l))| {
                let a = cache.kr_qchar(&b2, i, s, k).unwrap();
                let b = cache.kr_qchar(&b2, j, t, l).unwrap();
                let lhs = restrict(&b2, &multiply(&a, &b).unwrap());
                prop_assert_eq!(lhs, restrict(&b2, &a).checked_mul(&restrict(&b2, &b)).unwrap());
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );

    Ok(Outcome::new(&failures, suites, "property suites of 1000 cases"))
}

type Criterion = fn(&KrCache) -> Result<Outcome>;

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let cache = KrCache::new(Caps::default());
    let criteria: [(u32, &str, Criterion); 9] = [
        (1, "sl2 closed form", criterion_1),
        (2, "KR modules are special", criterion_2),
        (3, "T-system", criterion_3),
        (4, "Q-system", criterion_4),
        (5, "dominant ledgers", criterion_5),
        (6, "S specialness and right-negative B", criterion_6),
        (7, "fermionic formula", criterion_7),
        (8, "formal limit and E-positivity", criterion_8),
        (9, "property suites", criterion_9),
    ];
    let mut all = true;
    for (n, name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = match run(&cache) {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= pass;
        println!("criterion {n} [{}] {name}: {detail} ({:.1}s)", if pass { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
