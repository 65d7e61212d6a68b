//! Seeded property suites. Case `i` of a run uses seed `seed + i`; cases run
//! in parallel but results are reported in seed order, so output depends
//! only on the flags.

use rayon::prelude::*;
use serde_json::json;

use geu::gen::{self, Caps, ProblemKind};
use geu::lottery::{construct_situation, construct_situation_standard, LotterySituation, PlausibilisticSituation};
use geu::represent::{
    congruent, indistinguishable, represent_ordinal, represent_uniform, similar, tau_maximin, tau_mmeu, tau_regret,
    RuleTable,
};
use geu::rules::{
    choquet_expectation, core_extreme_points, rule_ceu, rule_eu, rule_geu, rule_maximin, rule_mmeu, rule_regret,
    Ceu,
};
use geu::{check_order_properties_on, relation_equal, Act, DecisionProblem, DecisionSituation, Error, PreferenceRelation, Rational, Value};

use crate::report::{Report, Text};

pub const SUITES: [&str; 11] = [
    "eu-geu",
    "maximin-rep",
    "regret-rep",
    "mmeu-rep",
    "thm2",
    "thm2-nonuniform",
    "thm3",
    "prop-a3",
    "prop-a3-standard",
    "choquet-core",
    "ceu-uniformity",
];

/// Suites whose failures are the expected outcome and do not fail the run.
const EXPECTED_FAILURES: [&str; 1] = ["ceu-uniformity"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// A property failed; carries the message and the shrunken case.
    Fail { message: String, witness: String },
    /// A failure the suite exists to exhibit.
    Expected(String),
}

#[derive(Clone, Debug)]
pub struct SuiteSummary {
    pub name: &'static str,
    pub outcomes: Vec<(u64, Outcome)>,
}

impl SuiteSummary {
    pub fn passed(&self) -> usize {
        self.outcomes.iter().filter(|(_, o)| *o == Outcome::Pass).count()
    }

    pub fn failed(&self) -> usize {
        self.outcomes.iter().filter(|(_, o)| matches!(o, Outcome::Fail { .. })).count()
    }

    pub fn expected(&self) -> usize {
        self.outcomes.iter().filter(|(_, o)| matches!(o, Outcome::Expected(_))).count()
    }
}

pub fn run_suite(name: &str, seed: u64, count: u64) -> Option<SuiteSummary> {
    let (index, &name) = SUITES.iter().enumerate().find(|(_, s)| **s == name)?;
    let outcomes = (0..count)
        .into_par_iter()
        .map(|i| {
            let case_seed = seed.wrapping_add(i);
            (case_seed, run_case(index, case_seed))
        })
        .collect();
    Some(SuiteSummary { name, outcomes })
}

fn case_rng(suite: usize, seed: u64) -> gen::GenRng {
    let mut rng = gen::rng(seed);
    rng.set_stream(suite as u64);
    rng
}

type Check = std::result::Result<(), String>;

fn run_case(suite: usize, seed: u64) -> Outcome {
    let mut rng = case_rng(suite, seed);
    let caps = Caps::default();
    let kind = ProblemKind::ALL[(seed % 4) as usize];
    let result = match SUITES[suite] {
        "eu-geu" => {
            let d = gen::problem(&mut rng, ProblemKind::Probability, caps);
            shrinking(&d, None, |d, _| eu_geu(d))
        }
        "maximin-rep" => {
            let d = gen::problem(&mut rng, ProblemKind::Nonplausibilistic, caps);
            shrinking(&d, None, |d, _| fixed_representation(d, tau_maximin, rule_maximin))
        }
        "regret-rep" => {
            let d = gen::problem(&mut rng, ProblemKind::Nonplausibilistic, caps);
            shrinking(&d, None, |d, _| fixed_representation(d, tau_regret, rule_regret))
        }
        "mmeu-rep" => {
            let d = gen::problem(&mut rng, ProblemKind::Credal, caps);
            shrinking(&d, None, |d, _| fixed_representation(d, tau_mmeu, rule_mmeu))
        }
        "thm2" => {
            let (d, rel) = thm2_input(&mut rng, seed);
            match rel {
                Ok(rel) => shrinking(&d, Some(&rel), thm2),
                Err(e) => Err((e.to_string(), describe(&d))),
            }
        }
        "thm2-nonuniform" => {
            let d = gen::problem_with_twins(&mut rng, kind, caps);
            match gen::non_uniform_table(&mut rng, &d) {
                Ok(Some(t)) => single(thm2_rejects(&t), &d),
                Ok(None) => Err(("generator produced no indistinguishable pair".into(), describe(&d))),
                Err(e) => Err((e.to_string(), describe(&d))),
            }
        }
        "thm3" => {
            let (d, rel) = thm3_input(&mut rng, seed);
            match rel {
                Ok(rel) => shrinking(&d, Some(&rel), thm3),
                Err(e) => Err((e.to_string(), describe(&d))),
            }
        }
        "prop-a3" => {
            let ls = gen::lottery_situation(&mut rng, false, 16);
            lottery_round_trip(&ls, construct_situation).map_err(|m| (m, lotteries(&ls)))
        }
        "prop-a3-standard" => {
            let ls = gen::lottery_situation(&mut rng, true, 16);
            lottery_round_trip(&ls, construct_situation_standard).map_err(|m| (m, lotteries(&ls)))
        }
        "choquet-core" => {
            let n = 1 + (seed % 5) as usize;
            let bel = gen::belief_function(&mut rng, n);
            let rvs = gen::random_variables(&mut rng, n, 5);
            choquet_core(&bel, &rvs).map_err(|m| (m, format!("masses {:?}", bel.masses())))
        }
        "ceu-uniformity" => {
            let d = gen::problem(&mut rng, ProblemKind::Belief, caps);
            return match RuleTable::tabulate(&Ceu, &d).and_then(|t| geu::represent::check_uniform(&t)) {
                Ok(()) => Outcome::Pass,
                Err(e @ Error::NotUniform { .. }) => Outcome::Expected(format!("{e}; {}", describe(&d))),
                Err(e) => Outcome::Fail { message: e.to_string(), witness: describe(&d) },
            };
        }
        other => unreachable!("unknown suite {other}"),
    };
    match result {
        Ok(()) => Outcome::Pass,
        Err((message, witness)) => Outcome::Fail { message, witness },
    }
}

fn thm2_input(rng: &mut gen::GenRng, seed: u64) -> (DecisionProblem, geu::Result<PreferenceRelation>) {
    let (kind, caps) = (ProblemKind::ALL[(seed % 4) as usize], Caps::default());
    let d = if seed % 8 < 4 { gen::problem(rng, kind, caps) } else { gen::problem_with_twins(rng, kind, caps) };
    let rel = gen::uniform_table(rng, &d).map(|t| t.relation().clone());
    (d, rel)
}

/// Even seeds tabulate CEU on a belief function; odd seeds draw a weakly
/// respecting table.
fn thm3_input(rng: &mut gen::GenRng, seed: u64) -> (DecisionProblem, geu::Result<PreferenceRelation>) {
    let (kind, caps) = (ProblemKind::ALL[(seed % 4) as usize], Caps::default());
    if seed.is_multiple_of(2) {
        let d = gen::problem(rng, ProblemKind::Belief, caps);
        let rel = rule_ceu(&d);
        (d, rel)
    } else {
        let d = gen::problem(rng, kind, caps);
        let rel = gen::weakly_respecting_table(rng, &d).map(|t| t.relation().clone());
        (d, rel)
    }
}

fn suite_index(name: &str) -> Option<usize> {
    SUITES.iter().position(|s| *s == name)
}

/// The pair `(d, τ(d))` that case `seed` of a representation suite builds,
/// unshrunk. `None` for suites that construct no problem.
pub fn represented(suite: &str, seed: u64) -> Option<geu::Result<(DecisionProblem, DecisionProblem)>> {
    let index = suite_index(suite)?;
    let mut rng = case_rng(index, seed);
    let caps = Caps::default();
    let result = match suite {
        "maximin-rep" => {
            let d = gen::problem(&mut rng, ProblemKind::Nonplausibilistic, caps);
            tau_maximin(&d).map(|t| (d, t))
        }
        "regret-rep" => {
            let d = gen::problem(&mut rng, ProblemKind::Nonplausibilistic, caps);
            tau_regret(&d).map(|t| (d, t))
        }
        "mmeu-rep" => {
            let d = gen::problem(&mut rng, ProblemKind::Credal, caps);
            tau_mmeu(&d).map(|t| (d, t))
        }
        "thm2" | "thm3" => {
            let (d, rel) = if suite == "thm2" { thm2_input(&mut rng, seed) } else { thm3_input(&mut rng, seed) };
            rel.and_then(|rel| RuleTable::new(d.clone(), &rel)).and_then(|t| {
                if suite == "thm2" {
                    represent_uniform(&t)
                } else {
                    represent_ordinal(&t)
                }
                .map(|tau| (d, tau))
            })
        }
        _ => return None,
    };
    Some(result)
}

/// The situation that case `seed` of a lottery suite constructs.
pub fn constructed_lotteries(suite: &str, seed: u64) -> Option<geu::Result<PlausibilisticSituation>> {
    let mut rng = case_rng(suite_index(suite)?, seed);
    match suite {
        "prop-a3" => Some(construct_situation(&gen::lottery_situation(&mut rng, false, 16))),
        "prop-a3-standard" => Some(construct_situation_standard(&gen::lottery_situation(&mut rng, true, 16))),
        _ => None,
    }
}

fn single(check: Check, d: &DecisionProblem) -> std::result::Result<(), (String, String)> {
    check.map_err(|m| (m, describe(d)))
}

/// Runs `check`; on failure, drops acts one at a time while the failure
/// persists and reports the smallest failing problem.
fn shrinking(
    d: &DecisionProblem,
    rel: Option<&PreferenceRelation>,
    check: impl Fn(&DecisionProblem, Option<&PreferenceRelation>) -> Check,
) -> std::result::Result<(), (String, String)> {
    let Err(mut message) = check(d, rel) else { return Ok(()) };
    let mut current = (d.clone(), rel.cloned());
    'outer: loop {
        let n = current.0.acts().len();
        if n <= 1 {
            break;
        }
        for drop in 0..n {
            let keep: Vec<usize> = (0..n).filter(|&a| a != drop).collect();
            let Some(smaller) = restrict(&current.0, &keep) else { continue };
            let smaller_rel = current.1.as_ref().map(|r| {
                PreferenceRelation::from_fn(smaller.act_names(), |i, j| r.holds(keep[i], keep[j]))
            });
            if let Err(m) = check(&smaller, smaller_rel.as_ref()) {
                message = m;
                current = (smaller, smaller_rel);
                continue 'outer;
            }
        }
        break;
    }
    Err((message, describe(&current.0)))
}

fn restrict(d: &DecisionProblem, keep: &[usize]) -> Option<DecisionProblem> {
    let s = d.situation();
    let acts: Vec<Act> = keep.iter().map(|&a| s.acts()[a].clone()).collect();
    let situation = DecisionSituation::new(s.states().to_vec(), s.consequences().to_vec(), acts).ok()?;
    match d.plausibilistic_part() {
        None => DecisionProblem::nonplausibilistic(situation, d.u_domain().clone(), d.utility().to_vec()).ok(),
        Some(part) => DecisionProblem::plausibilistic(
            situation,
            part.expectation.clone(),
            d.utility().to_vec(),
            part.measure.clone(),
        )
        .ok(),
    }
}

/// One-line description of a problem.
pub fn describe(d: &DecisionProblem) -> String {
    let s = d.situation();
    let utility: Vec<String> = s.consequences().iter().zip(d.utility()).map(|(c, u)| format!("{c}={u}")).collect();
    let acts: Vec<String> = s
        .acts()
        .iter()
        .map(|a| {
            let outcomes: Vec<&str> = a.outcomes.iter().map(|&c| s.consequences()[c].as_str()).collect();
            format!("{}=[{}]", a.name, outcomes.join(","))
        })
        .collect();
    let measure = match d.plausibilistic_part() {
        None => "none".to_string(),
        Some(part) => {
            let singletons: Vec<String> = (0..s.states().len()).map(|i| part.measure.get(1 << i).to_string()).collect();
            format!("{} with singletons [{}]", part.expectation.name(), singletons.join(", "))
        }
    };
    format!(
        "states [{}]; utility {}; acts {}; measure {}",
        s.states().join(","),
        utility.join(" "),
        acts.join(" "),
        measure
    )
}

fn lotteries(ls: &LotterySituation) -> String {
    let parts: Vec<String> = ls
        .lotteries()
        .iter()
        .map(|l| {
            let values: Vec<String> = l.measure().values().iter().map(Value::to_string).collect();
            format!("{} over [{}]: [{}]", l.name(), l.support().join(","), values.join(", "))
        })
        .collect();
    parts.join("; ")
}

fn err(e: Error) -> String {
    e.to_string()
}

fn eu_geu(d: &DecisionProblem) -> Check {
    if !relation_equal(&rule_geu(d).map_err(err)?, &rule_eu(d).map_err(err)?).map_err(err)? {
        return Err("GEU and EU relations differ".into());
    }
    for a in 0..d.acts().len() {
        let (g, e) = (d.geu(a).map_err(err)?, d.standard_eu(a).map_err(err)?);
        if g != Value::Rational(e.clone()) {
            return Err(format!("act {}: GEU {g} but EU {}", d.acts()[a].name, geu::value::format_rational(&e)));
        }
    }
    Ok(())
}

fn fixed_representation(
    d: &DecisionProblem,
    tau: fn(&DecisionProblem) -> geu::Result<DecisionProblem>,
    rule: fn(&DecisionProblem) -> geu::Result<PreferenceRelation>,
) -> Check {
    let t = tau(d).map_err(err)?;
    if !congruent(d, &t) {
        return Err("transformed problem is not congruent".into());
    }
    if !relation_equal(&rule_geu(&t).map_err(err)?, &rule(d).map_err(err)?).map_err(err)? {
        return Err("GEU of the transformed problem differs from the rule".into());
    }
    Ok(())
}

fn table(d: &DecisionProblem, rel: Option<&PreferenceRelation>) -> Result<RuleTable, String> {
    RuleTable::new(d.clone(), rel.expect("table-based suite")).map_err(err)
}

fn thm2(d: &DecisionProblem, rel: Option<&PreferenceRelation>) -> Check {
    let t = table(d, rel)?;
    let tau = represent_uniform(&t).map_err(err)?;
    if !congruent(d, &tau) {
        return Err("constructed problem is not congruent".into());
    }
    if !relation_equal(&rule_geu(&tau).map_err(err)?, t.relation()).map_err(err)? {
        return Err("GEU of the constructed problem differs from the table".into());
    }
    Ok(())
}

/// `represent_uniform` must refuse with a witness that really is one.
pub fn thm2_rejects(t: &RuleTable) -> Check {
    let d = t.problem();
    match represent_uniform(t) {
        Ok(_) => Err("a non-uniform table was represented".into()),
        Err(Error::NotUniform { a1, a2, b1, b2 }) => {
            let idx = |a: &str| d.situation().act_index(a).map_err(err);
            let twins = indistinguishable(d, &a1, &b1).map_err(err)? && indistinguishable(d, &a2, &b2).map_err(err)?;
            let differs = t.relation().holds(idx(&a1)?, idx(&a2)?) != t.relation().holds(idx(&b1)?, idx(&b2)?);
            if twins && differs {
                Ok(())
            } else {
                Err(format!("witness ({a1}, {a2}, {b1}, {b2}) does not show non-uniformity"))
            }
        }
        Err(e) => Err(format!("expected NotUniform, got: {e}")),
    }
}

fn thm3(d: &DecisionProblem, rel: Option<&PreferenceRelation>) -> Check {
    let t = table(d, rel)?;
    let tau = represent_ordinal(&t).map_err(err)?;
    if !similar(d, &tau) {
        return Err("constructed problem is not similar".into());
    }
    if !relation_equal(&rule_geu(&tau).map_err(err)?, t.relation()).map_err(err)? {
        return Err("GEU of the constructed problem differs from the table".into());
    }
    if let Some(part) = d.plausibilistic_part() {
        let values = part.measure.values();
        let mut sorted = values.to_vec();
        sorted.sort();
        let shared = sorted.windows(2).any(|w| w[0] == w[1]);
        let pl2 = tau.measure().map_err(err)?;
        let report = check_order_properties_on(tau.expectation().map_err(err)?.p_domain(), pl2.values());
        if shared && report.antisymmetric {
            return Err("paired plausibility order reported antisymmetric despite a shared value".into());
        }
    }
    Ok(())
}

pub fn lottery_round_trip(
    ls: &LotterySituation,
    construct: fn(&LotterySituation) -> geu::Result<PlausibilisticSituation>,
) -> Check {
    let ps = construct(ls).map_err(err)?;
    for (k, l) in ls.lotteries().iter().enumerate() {
        let back = ps.induce_lottery(k).map_err(err)?;
        if !back.same_as(l) {
            return Err(format!("lottery {} does not round-trip", l.name()));
        }
    }
    Ok(())
}

pub fn choquet_core(bel: &geu::rules::BeliefFunction, rvs: &[Vec<Rational>]) -> Check {
    let core = core_extreme_points(bel).map_err(err)?;
    for rv in rvs {
        let choquet = choquet_expectation(bel, rv);
        let lower = core
            .iter()
            .map(|p| p.iter().zip(rv).map(|(a, x)| a * x).sum::<Rational>())
            .min()
            .ok_or("empty core")?;
        if choquet != lower {
            return Err(format!(
                "Choquet {} but core minimum {}",
                geu::value::format_rational(&choquet),
                geu::value::format_rational(&lower)
            ));
        }
    }
    Ok(())
}

/// Runs the selected suites (all by default) and renders the summary.
pub fn fuzz(seed: u64, count: u64, suite: Option<&str>) -> Result<Report, String> {
    let names: Vec<&str> = match suite {
        Some(s) if SUITES.contains(&s) => vec![s],
        Some(s) => return Err(format!("unknown suite {s}; expected one of {}", SUITES.join(", "))),
        None => SUITES.to_vec(),
    };
    let summaries: Vec<SuiteSummary> =
        names.iter().map(|s| run_suite(s, seed, count).expect("known suite")).collect();
    let mut out = Text::default();
    out.line(format!("fuzz: seed {seed}, count {count}"));
    let width = names.iter().map(|s| s.len()).max().unwrap_or(0);
    let mut ok = true;
    let mut suites = Vec::new();
    for s in &summaries {
        let expected = EXPECTED_FAILURES.contains(&s.name);
        if expected {
            out.line(format!(
                "  {:width$}  {} cases, {} uniform, {} non-uniform (expected failures)",
                s.name,
                s.outcomes.len(),
                s.passed(),
                s.expected()
            ));
        } else {
            out.line(format!("  {:width$}  {} passed, {} failed", s.name, s.passed(), s.failed()));
        }
        ok &= s.failed() == 0;
        let first_failure = s.outcomes.iter().find_map(|(seed, o)| match o {
            Outcome::Fail { message, witness } => Some((seed, message, witness)),
            _ => None,
        });
        if let Some((seed, message, witness)) = first_failure {
            out.line(format!("    first failure (seed {seed}): {message}"));
            out.line(format!("    shrunk to: {witness}"));
        }
        let first_expected = s.outcomes.iter().find_map(|(seed, o)| match o {
            Outcome::Expected(w) => Some((seed, w)),
            _ => None,
        });
        if let Some((seed, w)) = first_expected {
            out.line(format!("    first witness (seed {seed}): {w}"));
        }
        suites.push(json!({
            "name": s.name,
            "cases": s.outcomes.len(),
            "passed": s.passed(),
            "failed": s.failed(),
            "expected_failures": s.expected(),
            "first_failure": first_failure.map(|(seed, m, w)| json!({"seed": seed, "message": m, "witness": w})),
            "first_expected": first_expected.map(|(seed, w)| json!({"seed": seed, "witness": w})),
        }));
    }
    out.kv("result", if ok { "ok" } else { "failed" });
    Ok(Report { ok, text: out.finish(), json: json!({"seed": seed, "count": count, "suites": suites, "ok": ok}) })
}
