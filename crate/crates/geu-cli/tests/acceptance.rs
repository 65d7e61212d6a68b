//! Acceptance gate: one PASS/FAIL line per criterion, with timings.
//!
//! Runs without the libtest harness so the report reads top to bottom;
//! the process exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use geu::gen::{self, Caps, ProblemKind};
use geu::represent::{
    check_uniform, indistinguishable, is_uniform, respects_utility, weakly_respects_utility, RuleTable,
};
use geu::rules::{choquet_expectation, regret_table, rule_by_name, rule_ceu, BeliefFunction};
use geu::{
    make_pl_from_probability_set, make_plausibility_measure, DecisionProblem, Domain, Error,
    ExpectationDomain, PlausibilityMeasure, Rational, Value,
};
use geu_cli::fuzz::{constructed_lotteries, represented, run_suite, Outcome, SuiteSummary};
use geu_cli::Problem;

const SEED: u64 = 0;
const CASES: u64 = 100;
const COMPUTE_LIMIT: Duration = Duration::from_millis(1);
const NON_UNIFORM_CASES: u64 = 50;
/// Regret GEU values are `M_S − r̄(a)` up to rounding through `exp`/`ln`.
const REGRET_VALUE_TOLERANCE: f64 = 1e-9;
/// E_reg's valuation order tolerance used when checking its axioms.
const REGRET_ORDER_TOLERANCE: f64 = 1e-9;

type Outcomes = Result<String, String>;

struct Criterion {
    number: usize,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcomes,
}

fn main() {
    let criteria = [
        Criterion { number: 1, name: "belief-function example values", limit: None, run: c1 },
        Criterion { number: 2, name: "CEU non-uniformity witness", limit: None, run: c2 },
        Criterion { number: 3, name: "maximin, regret and MMEU representations", limit: Some(secs(10)), run: c3 },
        Criterion { number: 4, name: "uniform tables are represented", limit: Some(secs(30)), run: c4 },
        Criterion { number: 5, name: "weakly respecting tables are represented ordinally", limit: Some(secs(30)), run: c5 },
        Criterion { number: 6, name: "lottery situation round trip", limit: Some(secs(30)), run: c6 },
        Criterion { number: 7, name: "Choquet integral equals the core minimum", limit: Some(secs(30)), run: c7 },
        Criterion { number: 8, name: "expectation and plausibility axioms", limit: None, run: c8 },
        Criterion { number: 9, name: "respect for utility", limit: None, run: c9 },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(detail), Some(limit)) if elapsed > limit => {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit:.2?}"))
            }
            (o, _) => o,
        };
        let limit = c.limit.map(|l| format!(", limit {l:.0?}")).unwrap_or_default();
        match outcome {
            Ok(detail) => println!("PASS {} {}: {detail} ({elapsed:.2?}{limit})", c.number, c.name),
            Err(why) => {
                failures += 1;
                println!("FAIL {} {}: {why} ({elapsed:.2?}{limit})", c.number, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

fn secs(n: u64) -> Duration {
    Duration::from_secs(n)
}

fn err(e: Error) -> String {
    e.to_string()
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn fixture_problem(name: &str) -> DecisionProblem {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    match geu_cli::load(&path) {
        Ok(Problem::Act(d)) => d,
        Ok(_) => panic!("{name} is not an act problem"),
        Err(e) => panic!("{name}: {e}"),
    }
}

/// Rational utilities of act `a`, state by state.
fn utility_vector(d: &DecisionProblem, a: usize) -> Vec<Rational> {
    d.acts()[a]
        .outcomes
        .iter()
        .map(|&c| match &d.utility()[c] {
            Value::Rational(r) => r.clone(),
            other => panic!("non-rational utility {other}"),
        })
        .collect()
}

fn summary(name: &str, seed: u64, count: u64) -> SuiteSummary {
    run_suite(name, seed, count).expect("known suite")
}

/// `Ok` with a pass count when no case failed, else the first failure.
fn all_pass(s: &SuiteSummary) -> Outcomes {
    match s.outcomes.iter().find(|(_, o)| matches!(o, Outcome::Fail { .. })) {
        Some((seed, Outcome::Fail { message, witness })) => {
            Err(format!("{}: seed {seed}: {message}; {witness}", s.name))
        }
        _ => Ok(format!("{} {}/{}", s.name, s.passed(), s.outcomes.len())),
    }
}

/// Times the computation only; loading the fixture is excluded.
fn c1() -> Outcomes {
    let d = fixture_problem("beldr.json");
    let start = Instant::now();
    let bel = BeliefFunction::from_measure(d.measure().map_err(err)?.clone()).map_err(err)?;
    let values: Vec<Rational> = (0..2).map(|a| choquet_expectation(&bel, &utility_vector(&d, a))).collect();
    let rel = rule_ceu(&d).map_err(err)?;
    let twins = indistinguishable(&d, "a1", "a2").map_err(err)?;
    let elapsed = start.elapsed();
    if values != [int(1), int(2)] {
        return Err(format!("values {} and {}, expected 1 and 2", values[0], values[1]));
    }
    if !(rel.holds(0, 1) && !rel.holds(1, 0)) {
        return Err("a1 is not strictly below a2".into());
    }
    if !twins {
        return Err("a1 and a2 are not indistinguishable".into());
    }
    if elapsed > COMPUTE_LIMIT {
        return Err(format!("computation took {elapsed:.2?}, limit {COMPUTE_LIMIT:.0?}"));
    }
    Ok(format!("CEU(a1) = 1, CEU(a2) = 2, a1 ≺ a2, a1 and a2 indistinguishable, computed in {elapsed:.2?} (limit {COMPUTE_LIMIT:.0?})"))
}

fn c2() -> Outcomes {
    let d = fixture_problem("beldr.json");
    let table = RuleTable::tabulate(&*rule_by_name("ceu").expect("ceu"), &d).map_err(err)?;
    if is_uniform(&table).map_err(err)? {
        return Err("is_uniform reported true".into());
    }
    match check_uniform(&table) {
        Err(Error::NotUniform { a1, a2, b1, b2 }) => {
            let names = [&a1, &a2, &b1, &b2];
            let pair = ["a1", "a2"];
            if names.iter().all(|n| pair.contains(&n.as_str())) && pair.iter().all(|p| names.iter().any(|n| n == p)) {
                Ok(format!("is_uniform = false, witness ({a1}, {a2}) vs ({b1}, {b2})"))
            } else {
                Err(format!("witness ({a1}, {a2}, {b1}, {b2}) is not the (a1, a2) pair"))
            }
        }
        Ok(()) => Err("CEU reported uniform".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn c3() -> Outcomes {
    let mut details = Vec::new();
    for suite in ["maximin-rep", "regret-rep", "mmeu-rep"] {
        details.push(all_pass(&summary(suite, SEED, CASES))?);
    }
    // Regret values themselves, not only their order.
    let mut worst = 0f64;
    for seed in SEED..SEED + CASES {
        let (d, tau) = represented("regret-rep", seed).expect("suite").map_err(err)?;
        let table = regret_table(&d).map_err(err)?;
        let geu = (0..tau.acts().len()).map(|a| tau.geu(a)).collect::<geu::Result<Vec<_>>>().map_err(err)?;
        for (a, v) in geu.iter().enumerate() {
            let expected = table.max_utility.to_f64().expect("finite") - table.max_regret[a].to_f64().expect("finite");
            let gap = (v.to_f64().ok_or(format!("seed {seed}: GEU {v} is not finite"))? - expected).abs();
            worst = worst.max(gap);
            if gap > REGRET_VALUE_TOLERANCE {
                return Err(format!("seed {seed}: regret GEU {v} differs from {expected} by {gap:e}"));
            }
        }
    }
    details.push(format!("max regret value gap {worst:.1e}"));
    Ok(details.join(", "))
}

fn c4() -> Outcomes {
    let uniform = all_pass(&summary("thm2", SEED, CASES))?;
    let rejected = all_pass(&summary("thm2-nonuniform", SEED, NON_UNIFORM_CASES))?;
    Ok(format!("{uniform}, {rejected}"))
}

fn c5() -> Outcomes {
    all_pass(&summary("thm3", SEED, CASES))
}

fn c6() -> Outcomes {
    let general = all_pass(&summary("prop-a3", SEED, CASES))?;
    let standard = all_pass(&summary("prop-a3-standard", SEED, CASES))?;
    Ok(format!("{general}, {standard}"))
}

fn c7() -> Outcomes {
    all_pass(&summary("choquet-core", SEED, CASES))
}

/// E1–E4 on the domain with the problem's own values among the probes, and
/// Pl1–Pl3 re-checked from scratch on its measure.
fn recheck(d: &DecisionProblem) -> Result<(), String> {
    let e = d.expectation().map_err(err)?;
    let pl = d.measure().map_err(err)?;
    e.verify_with(d.utility(), pl.values()).map_err(err)?;
    recheck_measure(pl, e.p_domain())
}

fn recheck_measure(pl: &PlausibilityMeasure, p: &Domain) -> Result<(), String> {
    make_plausibility_measure(pl.states().to_vec(), pl.values().to_vec(), p).map(|_| ()).map_err(err)
}

fn c8() -> Outcomes {
    let mut domains = 0;
    let mut measures = 0;

    let thirds = [int(1) / int(3), int(1) / int(3), int(1) / int(3)];
    let states: Vec<String> = ["s1", "s2", "s3"].iter().map(|s| s.to_string()).collect();
    let credal = [("p1".to_string(), thirds.to_vec()), ("p2".to_string(), vec![int(1), int(0), int(0)])];
    let (credal_p, _) = make_pl_from_probability_set(states, &credal).map_err(err)?;
    let builtins = [
        ("standard", Ok(ExpectationDomain::standard())),
        ("max", ExpectationDomain::e_max(Domain::rationals())),
        ("reg", Ok(ExpectationDomain::e_reg(Domain::rationals(), REGRET_ORDER_TOLERANCE))),
        ("credal", ExpectationDomain::e_credal(Domain::rationals(), credal_p)),
    ];
    for (name, e) in builtins {
        e.and_then(|e| e.verify_with(&[], &[])).map_err(|e| format!("{name}: {e}"))?;
        domains += 1;
    }

    for suite in ["maximin-rep", "regret-rep", "mmeu-rep", "thm2", "thm3"] {
        for seed in SEED..SEED + CASES {
            let (_, tau) = represented(suite, seed).expect("suite").map_err(|e| format!("{suite} seed {seed}: {e}"))?;
            recheck(&tau).map_err(|e| format!("{suite} seed {seed}: {e}"))?;
            domains += 1;
            measures += 1;
        }
    }
    for suite in ["prop-a3", "prop-a3-standard"] {
        for seed in SEED..SEED + CASES {
            let ps = constructed_lotteries(suite, seed).expect("suite").map_err(|e| format!("{suite} seed {seed}: {e}"))?;
            recheck_measure(ps.measure(), ps.p_domain()).map_err(|e| format!("{suite} seed {seed}: {e}"))?;
            measures += 1;
        }
    }
    Ok(format!("{domains} expectation domains and {measures} measures verified"))
}

fn c9() -> Outcomes {
    let strong = ["eu", "geu", "maximin", "mmeu", "ceu"];
    let mut checked = vec![0usize; strong.len()];
    let mut regret_checked = 0;
    let mut regret_strong = 0;
    let mut problems = 0;
    for seed in SEED..SEED + 4 * CASES {
        let mut rng = gen::rng(seed);
        let kind = ProblemKind::ALL[(seed % 4) as usize];
        let d = gen::problem(&mut rng, kind, Caps::default());
        let constant = (0..d.acts().len()).filter(|&a| d.situation().constant_consequence(a).is_some()).count();
        if constant < 2 {
            continue;
        }
        problems += 1;
        for (i, name) in strong.iter().enumerate() {
            let rule = rule_by_name(name).expect("rule");
            if rule.applicable(&d).is_err() {
                continue;
            }
            let table = RuleTable::tabulate(&*rule, &d).map_err(err)?;
            if !respects_utility(&table).map_err(err)? {
                return Err(format!("{name} does not respect utility on seed {seed}: {}", geu_cli::fuzz::describe(&d)));
            }
            checked[i] += 1;
        }
        let regret = rule_by_name("regret").expect("rule");
        if regret.applicable(&d).is_ok() {
            let table = RuleTable::tabulate(&*regret, &d).map_err(err)?;
            if !weakly_respects_utility(&table).map_err(err)? {
                return Err(format!("regret does not weakly respect utility on seed {seed}"));
            }
            regret_checked += 1;
            regret_strong += usize::from(respects_utility(&table).map_err(err)?);
        }
    }
    if let Some(i) = checked.iter().position(|&n| n == 0) {
        return Err(format!("no seeded problem exercised {}", strong[i]));
    }
    if regret_checked == 0 {
        return Err("no seeded problem exercised regret".into());
    }
    let counts: Vec<String> = strong.iter().zip(&checked).map(|(n, c)| format!("{n} {c}")).collect();
    Ok(format!(
        "{problems} problems with two constant acts; respects: {}; regret weakly {regret_checked}, strongly {regret_strong}",
        counts.join(", ")
    ))
}

