//! End-to-end checks over the builtin designs, run by `verify-paper`.
//!
//! Each check rebuilds what it needs from the public API and reports
//! pass/fail with a few lines of evidence.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    condition_report, find_sub_system, intersection_profile, kohler_agrees, qs_disjoint_margin,
    seeded_subsets, COND_ORDER_LOWER, COND_PBD_SUFFICIENT, COND_STEINER_2EC, COND_UPPER_3EC,
};
use crate::arith::Rational;
use crate::constructions::{
    affine_sts9, boolean_sqs8, complete_design, disjoint_union_search, doubling_sqs, netto13,
    ts11_3, ts13_4, DEFAULT_SEARCH_TRIES,
};
use crate::design::{lambda_h, validate_t_design, Design};
use crate::ec::{find_dominating_union_pair, is_2_ec_fast, is_n_ec, xi, EcResult};
use crate::graph::{build_big, build_s_big, Graph};

/// Names accepted for `--extra name=path`.
pub const EXTRA_NAMES: &[&str] = &["sqs10", "sqs14"];

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub fast: bool,
    pub seed: u64,
    /// Externally supplied designs keyed by a name from [`EXTRA_NAMES`].
    pub extras: Vec<(String, Design)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub claim: String,
    pub passed: bool,
    pub details: Vec<String>,
    pub elapsed_us: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub fast: bool,
    pub all_passed: bool,
    pub checks: Vec<CheckResult>,
}

type Outcome = Result<Vec<String>, String>;

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn run(id: &str, claim: &str, f: impl FnOnce() -> Outcome) -> CheckResult {
    run_detailed(id, claim, || match f() {
        Ok(d) => (true, d),
        Err(e) => (false, vec![e]),
    })
}

fn run_detailed(id: &str, claim: &str, f: impl FnOnce() -> (bool, Vec<String>)) -> CheckResult {
    let start = Instant::now();
    let (passed, details) = f();
    CheckResult {
        id: id.to_string(),
        claim: claim.to_string(),
        passed,
        details,
        elapsed_us: start.elapsed().as_micros() as u64,
    }
}

fn validated(d: &Design, t: usize, k: usize, lambda: u64) -> Result<String, String> {
    let rep = validate_t_design(d, t, k, lambda).map_err(|e| e.to_string())?;
    ensure(
        rep.ok,
        format!("not a {t}-({}, {k}, {lambda}) design: {:?}", d.v(), rep.violations.first()),
    )?;
    Ok(format!("validates as {t}-({}, {k}, {lambda}) with b = {}", d.v(), d.b()))
}

fn exact_xi(g: &Graph, want: usize, label: &str) -> Result<String, String> {
    let x = xi(g);
    ensure(
        x.value == want && !x.at_least,
        format!("{label}: xi = {}{}, expected {want}", x.value, if x.at_least { "+" } else { "" }),
    )?;
    Ok(format!("{label}: xi = {want}"))
}

fn ec2(g: &Graph) -> Result<EcResult, String> {
    is_2_ec_fast(g).map_err(|e| e.to_string())
}

fn check_netto() -> Outcome {
    let d = netto13();
    ensure(d.b() == 26, format!("b = {}", d.b()))?;
    Ok(vec![validated(&d, 2, 3, 1)?, exact_xi(&build_big(&d), 2, "BIG")?])
}

fn check_ts13_4() -> Outcome {
    let d = ts13_4();
    ensure(d.b() == 104, format!("b = {}", d.b()))?;
    ensure(d.is_simple(), "not simple")?;
    let mut out = vec![validated(&d, 2, 3, 4)?];
    let g = build_big(&d);
    ensure(ec2(&g)?.holds, "BIG is not 2-e.c.")?;
    out.push(exact_xi(&g, 2, "BIG")?);
    let sub = find_sub_system(&d, 6, 3, 4).map_err(|e| e.to_string())?;
    ensure(sub.is_none(), format!("contains a 2-(6,3,4) on {sub:?}"))?;
    out.push("no 2-(6, 3, 4) sub-design".into());
    ensure(find_dominating_union_pair(&d).is_none(), "a dominating block pair exists")?;
    Ok(out)
}

fn check_ts11() -> Outcome {
    let d = ts11_3();
    ensure(d.is_simple(), "TS(11,3) not simple")?;
    let mut out = vec![validated(&d, 2, 3, 3)?, exact_xi(&build_big(&d), 2, "TS(11,3) BIG")?];
    let s = d.supplementary(3).map_err(|e| e.to_string())?;
    ensure(s.b() == 110, format!("supplementary has {} blocks", s.b()))?;
    out.push(validated(&s, 2, 3, 6)?);
    out.push(exact_xi(&build_big(&s), 2, "TS(11,6) BIG")?);
    Ok(out)
}

fn check_complete9() -> Outcome {
    let d = complete_design(9, 3).map_err(|e| e.to_string())?;
    let g = build_big(&d);
    ensure(ec2(&g)?.holds, "BIG is not 2-e.c.")?;
    let three = is_n_ec(&g, 3).map_err(|e| e.to_string())?;
    ensure(!three.holds, "BIG is 3-e.c.")?;
    let f = three.witness_failure.unwrap();
    Ok(vec![
        validated(&d, 2, 3, 7)?,
        format!("3-e.c. fails at A = {:?}, B = {:?}", f.a, f.b),
        exact_xi(&g, 2, "BIG")?,
    ])
}

fn check_ts9_2(seed: u64) -> Outcome {
    let (d, _) = disjoint_union_search(&affine_sts9(), seed, DEFAULT_SEARCH_TRIES)
        .ok_or("no block-disjoint relabelling found")?;
    ensure(d.is_simple(), "not simple")?;
    ensure(d.replication_profile().iter().all(|&r| r == 8), "replication is not 8")?;
    Ok(vec![validated(&d, 2, 3, 2)?, exact_xi(&build_big(&d), 1, "BIG")?])
}

fn check_sqs8() -> Outcome {
    let d = boolean_sqs8();
    ensure(d.b() == 14, format!("b = {}", d.b()))?;
    let g = build_big(&d);
    let one = is_n_ec(&g, 1).map_err(|e| e.to_string())?;
    ensure(one.holds, "BIG is not 1-e.c.")?;
    let two = ec2(&g)?;
    ensure(!two.holds, "BIG is 2-e.c.")?;
    let f = two.witness_failure.unwrap();
    let one_big = build_s_big(&d, &[1]);
    ensure(!ec2(&one_big)?.holds, "{1}-BIG is 2-e.c.")?;
    Ok(vec![
        validated(&d, 3, 4, 1)?,
        format!("BIG 2-e.c. fails at A = {:?}, B = {:?}", f.a, f.b),
        exact_xi(&g, 1, "BIG")?,
        "{1}-BIG is not 2-e.c.".into(),
    ])
}

/// Number of blocks meeting `points` in an odd number of points.
pub fn odd_meetings(d: &Design, points: &[usize]) -> usize {
    d.blocks()
        .iter()
        .filter(|b| b.iter().filter(|p| points.contains(p)).count() % 2 == 1)
        .count()
}

fn check_sqs16(d: &Design) -> (bool, Vec<String>) {
    let mut details = Vec::new();
    let mut passed = true;
    let mut record = |r: Result<String, String>| match r {
        Ok(s) => details.push(s),
        Err(s) => {
            passed = false;
            details.push(format!("FAILED: {s}"));
        }
    };
    record(if d.b() == 140 { Ok("140 blocks".into()) } else { Err(format!("b = {}", d.b())) });
    record(validated(d, 3, 4, 1));
    let g = build_big(d);
    record(ec2(&g).and_then(|r| if r.holds { Ok("BIG is 2-e.c.".into()) } else { Err("BIG is not 2-e.c.".into()) }));
    record(exact_xi(&g, 2, "BIG"));
    record(match lambda_h(3, 16, 4, 1, 2) {
        Ok(l2) if l2 == Rational::from_integer(7) => Ok("lambda_2 = 7".into()),
        Ok(l2) => Err(format!("lambda_2 = {l2}")),
        Err(e) => Err(e.to_string()),
    });
    record(ec2(&build_s_big(d, &[1])).and_then(|r| match r.witness_failure {
        None => Ok("{1}-BIG is 2-e.c.".into()),
        Some(f) => {
            let mut union = d.block(f.a[0]).to_vec();
            union.extend_from_slice(d.block(f.b[0]));
            union.sort_unstable();
            Err(format!(
                "{{1}}-BIG is not 2-e.c.: no witness for A = {:?}, B = {:?}; \
                 the blocks are disjoint and {} blocks meet their union {:?} in an odd number of points",
                f.a,
                f.b,
                odd_meetings(d, &union),
                union
            ))
        }
    }));
    (passed, details)
}

fn check_derived_lemma(d: &Design) -> Outcome {
    let k = d.block_size_range().map_or(0, |(_, hi)| hi);
    let s: Vec<usize> = (2..=k).collect();
    let g = build_s_big(d, &s);
    for x in 0..d.v() {
        let through: Vec<usize> = (0..d.b()).filter(|&i| d.block(i).contains(&x)).collect();
        let (induced, labels) = g.induced_subgraph(&through).map_err(|e| e.to_string())?;
        let derived = d.derived(x).map_err(|e| e.to_string())?;
        let dg = build_big(&derived);
        // Position of B \ {x} in the normalized derived design.
        let strip = |i: usize| -> Vec<usize> {
            d.block(i)
                .iter()
                .filter(|&&p| p != x)
                .map(|&p| if p > x { p - 1 } else { p })
                .collect()
        };
        let image: Vec<usize> = labels
            .iter()
            .map(|&i| derived.blocks().binary_search(&strip(i)).unwrap())
            .collect();
        for a in 0..labels.len() {
            for b in a + 1..labels.len() {
                ensure(
                    induced.has_edge(a, b) == dg.has_edge(image[a], image[b]),
                    format!("adjacency differs at point {x}, blocks {} and {}", labels[a], labels[b]),
                )?;
            }
        }
    }
    Ok(vec![format!("derived BIG matches the induced {{2..{k}}}-BIG at all {} points", d.v())])
}

fn check_kohler(seed: u64, sqs16: &Design) -> Outcome {
    let designs: [(&str, Design, usize, usize, u64); 4] = [
        ("STS(13)", netto13(), 2, 3, 1),
        ("TS(13,4)", ts13_4(), 2, 3, 4),
        ("SQS(8)", boolean_sqs8(), 3, 4, 1),
        ("SQS(16)", sqs16.clone(), 3, 4, 1),
    ];
    let mut out = Vec::new();
    for (idx, (name, d, t, k, lambda)) in designs.iter().enumerate() {
        let subsets = seeded_subsets(d.v(), t + 1, d.v().min(8), 50, seed.wrapping_add(idx as u64));
        for m_set in &subsets {
            let ok = kohler_agrees(d, *t, *k, *lambda, m_set).map_err(|e| e.to_string())?;
            ensure(ok, format!("{name}: formula disagrees with direct count on {m_set:?}"))?;
        }
        out.push(format!("{name}: 50 subsets agree"));
    }
    Ok(out)
}

fn check_margin(d: &Design) -> Outcome {
    let b = d.b();
    let mut disjoint = None;
    let mut meeting = None;
    let mut min_alpha0 = u64::MAX;
    for i in 0..b {
        for j in i + 1..b {
            let mut m_set = d.block(i).to_vec();
            m_set.extend_from_slice(d.block(j));
            m_set.sort_unstable();
            m_set.dedup();
            let p = intersection_profile(d, &m_set).map_err(|e| e.to_string())?;
            let margin = qs_disjoint_margin(d.v(), 1, p.m, p.alpha(4)).map_err(|e| e.to_string())?;
            ensure(
                margin == Rational::from_integer(p.alpha(0) as i128),
                format!("margin {margin} != alpha_0 {} for blocks {i}, {j}", p.alpha(0)),
            )?;
            min_alpha0 = min_alpha0.min(p.alpha(0));
            match d.intersection_size(i, j) {
                0 if disjoint.is_none() => disjoint = Some((i, j, p)),
                1 if meeting.is_none() => meeting = Some((i, j, p)),
                _ => {}
            }
        }
    }
    let (i, j, p) = disjoint.ok_or("no disjoint block pair")?;
    ensure(p.m == 8 && p.alpha(0) == p.alpha(4), format!("disjoint pair {i},{j}: {:?}", p.alphas))?;
    let (i2, j2, p2) = meeting.ok_or("no block pair meeting in one point")?;
    ensure(p2.m == 7 && p2.alpha(0) >= 2, format!("meeting pair {i2},{j2}: {:?}", p2.alphas))?;
    ensure(min_alpha0 >= 2, format!("some block pair misses only {min_alpha0} blocks"))?;
    Ok(vec![
        format!("disjoint pair ({i}, {j}): alpha_0 = alpha_4 = {}", p.alpha(0)),
        format!("pair ({i2}, {j2}) meeting in one point: alpha_0 = {} = margin", p2.alpha(0)),
        format!("margin equals alpha_0 for all {} block pairs; min alpha_0 = {min_alpha0}", b * (b - 1) / 2),
    ])
}

/// Random graphs with `n <= 40` and varied edge density.
pub fn seeded_random_graphs(count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(3..=40);
            let p: f64 = rng.gen_range(0.15..0.85);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges).expect("edges are in range")
        })
        .collect()
}

fn suite_graphs(sqs16: &Design, seed: u64) -> Result<Vec<(String, Graph)>, String> {
    let complete9 = complete_design(9, 3).map_err(|e| e.to_string())?;
    let ts9_2 = disjoint_union_search(&affine_sts9(), seed, DEFAULT_SEARCH_TRIES)
        .ok_or("no block-disjoint relabelling found")?
        .0;
    let ts11_6 = ts11_3().supplementary(3).map_err(|e| e.to_string())?;
    let sqs8 = boolean_sqs8();
    Ok(vec![
        ("BIG STS(13)".into(), build_big(&netto13())),
        ("BIG TS(13,4)".into(), build_big(&ts13_4())),
        ("BIG TS(11,3)".into(), build_big(&ts11_3())),
        ("BIG TS(11,6)".into(), build_big(&ts11_6)),
        ("BIG TS(9,7)".into(), build_big(&complete9)),
        ("BIG TS(9,2)".into(), build_big(&ts9_2)),
        ("BIG SQS(8)".into(), build_big(&sqs8)),
        ("{1}-BIG SQS(8)".into(), build_s_big(&sqs8, &[1])),
        ("BIG SQS(16)".into(), build_big(sqs16)),
        ("{1}-BIG SQS(16)".into(), build_s_big(sqs16, &[1])),
    ])
}

fn check_properties(seed: u64, sqs16: &Design) -> Outcome {
    let mut out = Vec::new();
    let random = seeded_random_graphs(100, seed);
    let mut holding = 0;
    for (i, g) in random.iter().enumerate() {
        let fast = ec2(g)?;
        let brute = is_n_ec(g, 2).map_err(|e| e.to_string())?;
        ensure(fast == brute, format!("random graph {i}: fast and exhaustive 2-e.c. disagree"))?;
        holding += fast.holds as usize;
    }
    out.push(format!("fast 2-e.c. = exhaustive on 100 random graphs ({holding} 2-e.c.)"));

    let graphs = suite_graphs(sqs16, seed)?;
    for (name, g) in &graphs {
        ensure(g.is_well_formed(), format!("{name}: not symmetric/loop-free"))?;
        let results: Vec<bool> = (1..=3)
            .map(|n| is_n_ec(g, n).map(|r| r.holds))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure(ec2(g)? == is_n_ec(g, 2).map_err(|e| e.to_string())?, format!("{name}: fast != exhaustive"))?;
        ensure(
            results.windows(2).all(|w| !w[1] || w[0]),
            format!("{name}: e.c. not monotone {results:?}"),
        )?;
        let stats = g.degree_stats();
        if stats.is_connected {
            let zero = xi(g).value == 0;
            ensure(
                zero == (stats.max_degree + 1 == stats.n),
                format!("{name}: xi = 0 is {zero} but max degree is {}", stats.max_degree),
            )?;
        }
    }
    out.push(format!(
        "{} design graphs: fast = exhaustive, monotone for n <= 3, degree criterion for xi = 0",
        graphs.len()
    ));

    for (name, d) in [("SQS(8)", boolean_sqs8()), ("SQS(16)", sqs16.clone())] {
        let one = build_s_big(&d, &[1]);
        let zero_two = build_s_big(&d, &[0, 2]);
        ensure(one.complement() == zero_two, format!("{name}: complement of {{1}}-BIG != {{0,2}}-BIG"))?;
        let a = is_n_ec(&one, 2).map_err(|e| e.to_string())?.holds;
        let b = is_n_ec(&zero_two, 2).map_err(|e| e.to_string())?.holds;
        ensure(a == b, format!("{name}: 2-e.c. differs between a graph and its complement"))?;
        out.push(format!("{name}: {{1}}-BIG complement is the {{0,2}}-BIG, both 2-e.c. = {a}"));
    }
    Ok(out)
}

fn check_conditions() -> Outcome {
    let steiner = condition_report(13, 3, 1, 2).map_err(|e| e.to_string())?;
    let c = steiner.get(COND_STEINER_2EC).ok_or("missing threshold")?;
    ensure(c.satisfied && c.lhs == 13 && c.rhs == 11, format!("{c:?}"))?;
    let upper = condition_report(31, 3, 1, 3).map_err(|e| e.to_string())?;
    let c = upper.get(COND_UPPER_3EC).ok_or("missing upper bound")?;
    ensure(c.satisfied && c.lhs == 31 && c.rhs == 31, format!("{c:?}"))?;
    let lower = condition_report(12, 3, 2, 1).map_err(|e| e.to_string())?;
    let c = lower.get(COND_ORDER_LOWER).ok_or("missing order bound")?;
    ensure(c.satisfied && c.rhs == 6, format!("{c:?}"))?;
    let pbd = condition_report(13, 3, 4, 2).map_err(|e| e.to_string())?;
    let c = pbd.get(COND_PBD_SUFFICIENT).ok_or("missing sufficiency")?;
    ensure(!c.satisfied && c.rhs == 13, format!("{c:?}"))?;
    Ok(vec![
        "v >= k^2+k-1 holds at 13 >= 11".into(),
        "3-e.c. upper bound at equality 31 <= 31".into(),
        "v >= (n+1)k holds at 12 >= 6".into(),
        "PBD sufficiency fails at 13 > 13".into(),
    ])
}

fn check_sqs32(sqs16: &Design) -> Outcome {
    let d = doubling_sqs(sqs16).map_err(|e| e.to_string())?;
    ensure(d.b() == 1240, format!("b = {}", d.b()))?;
    let mut out = vec![validated(&d, 3, 4, 1)?];
    ensure(ec2(&build_big(&d))?.holds, "BIG is not 2-e.c.")?;
    ensure(ec2(&build_s_big(&d, &[1]))?.holds, "{1}-BIG is not 2-e.c.")?;
    out.push("BIG and {1}-BIG are 2-e.c.".into());
    Ok(out)
}

fn check_extra_sqs(d: &Design, v: usize, one_big_2ec: bool) -> Outcome {
    ensure(d.v() == v, format!("expected {v} points, file has {}", d.v()))?;
    let mut out = vec![validated(d, 3, 4, 1)?];
    ensure(!ec2(&build_big(d))?.holds, "BIG is 2-e.c.")?;
    out.push("BIG is not 2-e.c.".into());
    let one = ec2(&build_s_big(d, &[1]))?.holds;
    ensure(one == one_big_2ec, format!("{{1}}-BIG 2-e.c. = {one}"))?;
    out.push(format!("{{1}}-BIG 2-e.c. = {one}"));
    Ok(out)
}

/// Runs every check. `fast` skips the SQS(32) stress item.
pub fn verify_paper_suite(opts: &SuiteOptions) -> SuiteReport {
    let seed = opts.seed;
    let sqs16 = doubling_sqs(&boolean_sqs8()).expect("SQS(8) doubles");
    let mut checks = vec![
        run("1", "STS(13) (Netto): 2-(13,3,1), 26 blocks, BIG xi = 2", check_netto),
        run(
            "2",
            "TS(13,4) from three relabelled Netto systems: simple, 104 blocks, BIG xi = 2, no sub-TS(6,4)",
            check_ts13_4,
        ),
        run("3", "TS(11,3) and its supplementary TS(11,6): simple, BIG xi = 2", check_ts11),
        run("4", "TS(9,7) = all triples of 9 points: BIG 2-e.c. but not 3-e.c.", check_complete9),
        run("5", "TS(9,2) from two block-disjoint STS(9): simple, BIG xi = 1", || check_ts9_2(seed)),
        run("6", "SQS(8): 14 blocks, BIG xi = 1, {1}-BIG not 2-e.c.", check_sqs8),
        run_detailed("7", "SQS(16) by doubling: 140 blocks, BIG xi = 2, {1}-BIG 2-e.c., lambda_2 = 7", || {
            check_sqs16(&sqs16)
        }),
        run("8", "derived-design BIG equals the induced {2..4}-BIG at every point of SQS(16)", || {
            check_derived_lemma(&sqs16)
        }),
        run("9", "intersection-number formula reproduces direct counts", || check_kohler(seed, &sqs16)),
        run("10", "SQS(16): blocks missing the union of two blocks", || check_margin(&sqs16)),
        run("11", "graph property suite", || check_properties(seed, &sqs16)),
        run("12", "parameter condition boundaries", check_conditions),
    ];
    if !opts.fast {
        checks.push(run("stress", "SQS(32) by doubling twice: validates, BIG and {1}-BIG 2-e.c.", || {
            check_sqs32(&sqs16)
        }));
    }
    for (name, d) in &opts.extras {
        let check = match name.as_str() {
            "sqs10" => run("extra:sqs10", "supplied SQS(10): BIG and {1}-BIG not 2-e.c.", || {
                check_extra_sqs(d, 10, false)
            }),
            "sqs14" => run("extra:sqs14", "supplied SQS(14): BIG not 2-e.c., {1}-BIG 2-e.c.", || {
                check_extra_sqs(d, 14, true)
            }),
            other => run(&format!("extra:{other}"), "supplied design", || {
                Err(format!("no check is defined for '{other}'"))
            }),
        };
        checks.push(check);
    }
    SuiteReport {
        seed,
        fast: opts.fast,
        all_passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
