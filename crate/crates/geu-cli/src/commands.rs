//! The file-driven commands. Each returns a [`Report`]; input problems are
//! errors, failed properties are reports with `ok = false`.

use serde_json::json;

use geu::lottery::{
    check_lottery_uniform, construct_situation, construct_situation_standard, LotterySituation,
    PlausibilisticSituation,
};
use geu::represent::{
    check_respects_utility, check_uniform, check_weakly_respects_utility, congruent, similar, Mode, RuleTable,
    Transformation,
};
use geu::rules::{rule_by_name, rule_geu, DecisionRule, RULE_NAMES};
use geu::{check_order_properties_on, relation_equal, DecisionProblem, Error, Value};

use crate::document::{LotteryDocument, Problem};
use crate::error::CliError;
use crate::report::{
    measure_json, measure_text, problem_json, problem_text, relation_json, relation_text, values_json,
    values_text, Report, Text,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum RepresentMode {
    Example,
    Thm2,
    Thm3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CheckKind {
    Uniform,
    RespectsUtility,
    LotteryUniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum LotteryCommand {
    Induce,
    Construct,
    ConstructStandard,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum AaCommand {
    Flatten,
    Eval,
}

fn rule(name: &str) -> Result<Box<dyn DecisionRule>, CliError> {
    rule_by_name(name)
        .ok_or_else(|| CliError::Usage(format!("unknown rule {name}; expected one of {}", RULE_NAMES.join(", "))))
}

fn act_problem<'a>(problem: &'a Problem, command: &str) -> Result<&'a DecisionProblem, CliError> {
    match problem {
        Problem::Act(d) => Ok(d),
        _ => Err(CliError::Usage(format!("{command} needs an act document"))),
    }
}

/// Errors that mean "the property does not hold" rather than "bad input".
fn is_property_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::NotUniform { .. }
            | Error::NotRespectingUtility(..)
            | Error::NotWeaklyRespectingUtility(..)
            | Error::NotReflexive(_)
            | Error::AxiomViolation { .. }
    )
}

fn failure(command: &str, e: &Error) -> Report {
    let mut out = Text::default();
    out.kv(command, "failed").kv("reason", e);
    if let Error::NotUniform { a1, a2, b1, b2 } = e {
        out.kv("witness", format!("{a1} ~ {b1}, {a2} ~ {b2}"));
    }
    Report { ok: false, text: out.finish(), json: json!({"command": command, "ok": false, "reason": e.to_string()}) }
}

pub fn eval(problem: &Problem, rule_name: &str) -> Result<Report, CliError> {
    let d = act_problem(problem, "eval")?;
    let rule = rule(rule_name)?;
    rule.applicable(d)?;
    let evaluation = rule.evaluate(d)?;
    let names = d.act_names();
    let mut out = Text::default();
    out.kv("rule", rule.name());
    values_text(&mut out, "values", &names, &evaluation.values);
    relation_text(&mut out, &evaluation.relation);
    Ok(Report {
        ok: true,
        text: out.finish(),
        json: json!({
            "rule": rule.name(),
            "values": values_json(&names, &evaluation.values),
            "relation": relation_json(&evaluation.relation),
        }),
    })
}

fn transformation(rule_name: &str, mode: RepresentMode) -> Result<Transformation, CliError> {
    Ok(match mode {
        RepresentMode::Thm2 => Transformation::Thm2,
        RepresentMode::Thm3 => Transformation::Thm3,
        RepresentMode::Example => match rule_name {
            "eu" => Transformation::IdEu,
            "maximin" => Transformation::Maximin,
            "regret" => Transformation::Regret,
            "mmeu" => Transformation::Mmeu,
            _ => return Err(CliError::Usage(format!("no fixed representation for rule {rule_name}"))),
        },
    })
}

pub fn represent(problem: &Problem, rule_name: &str, mode: RepresentMode) -> Result<Report, CliError> {
    let d = act_problem(problem, "represent")?;
    let rule = rule(rule_name)?;
    let t = transformation(rule_name, mode)?;
    // Maximin and regret are defined on nonplausibilistic problems.
    let d = match t {
        Transformation::Maximin | Transformation::Regret => d.without_plausibility(),
        _ => d.clone(),
    };
    let table = RuleTable::tabulate(rule.as_ref(), &d)?;
    let tau = match t.apply(&table) {
        Ok(tau) => tau,
        Err(e) if is_property_failure(&e) => return Ok(failure("represent", &e)),
        Err(e) => return Err(e.into()),
    };
    let is_congruent = congruent(&d, &tau);
    let is_similar = similar(&d, &tau);
    let geu = rule_geu(&tau)?;
    let equal = relation_equal(&geu, table.relation())?;
    let e = tau.expectation()?;
    let pl = tau.measure()?;
    let axioms = e.verify_with(tau.utility(), pl.values());
    let p_report = check_order_properties_on(e.p_domain(), pl.values());
    let shape_ok = match t.mode() {
        Mode::Congruent => is_congruent,
        Mode::Ordinal => is_similar,
    };
    let ok = equal && axioms.is_ok() && shape_ok;
    let names = d.act_names();
    let values: Vec<Value> = (0..names.len()).map(|a| tau.geu(a)).collect::<geu::Result<_>>()?;
    let axiom_text = match &axioms {
        Ok(()) => "E1-E4 hold".to_string(),
        Err(err) => err.to_string(),
    };
    let mut out = Text::default();
    out.kv("transformation", t.name())
        .kv("rule", rule.name())
        .kv("domain", e.name())
        .kv("congruent", is_congruent)
        .kv("similar", is_similar)
        .kv("relation-equal", equal)
        .kv("axioms", &axiom_text)
        .kv(
            "plausibility order on measure values",
            format!(
                "reflexive={} transitive={} antisymmetric={} total={}",
                p_report.reflexive, p_report.transitive, p_report.antisymmetric, p_report.total
            ),
        );
    values_text(&mut out, "geu values", &names, &values);
    out.kv("verdict", if ok { "ok" } else { "failed" });
    Ok(Report {
        ok,
        text: out.finish(),
        json: json!({
            "transformation": t.name(),
            "rule": rule.name(),
            "domain": e.name(),
            "congruent": is_congruent,
            "similar": is_similar,
            "relation_equal": equal,
            "axioms": axiom_text,
            "plausibility_order": {
                "reflexive": p_report.reflexive,
                "transitive": p_report.transitive,
                "antisymmetric": p_report.antisymmetric,
                "total": p_report.total,
            },
            "geu_values": values_json(&names, &values),
            "ok": ok,
        }),
    })
}

pub fn check(problem: &Problem, rule_name: &str, kind: CheckKind) -> Result<Report, CliError> {
    let d = act_problem(problem, "check")?;
    let rule = rule(rule_name)?;
    let table = RuleTable::tabulate(rule.as_ref(), d)?;
    let mut out = Text::default();
    out.kv("rule", rule.name());
    let (ok, json) = match kind {
        CheckKind::Uniform => {
            let witness = match check_uniform(&table) {
                Ok(()) => None,
                Err(Error::NotUniform { a1, a2, b1, b2 }) => Some([a1, a2, b1, b2]),
                Err(e) => return Err(e.into()),
            };
            out.kv("uniform", witness.is_none());
            if let Some([a1, a2, b1, b2]) = &witness {
                out.kv("witness", format!("{a1} ~ {b1}, {a2} ~ {b2}; ({a1}, {a2}) and ({b1}, {b2}) are treated differently"));
            }
            (witness.is_none(), json!({"rule": rule.name(), "uniform": witness.is_none(), "witness": witness}))
        }
        CheckKind::RespectsUtility => {
            let strong = check_respects_utility(&table);
            let weak = check_weakly_respects_utility(&table);
            let describe = |r: &geu::Result<()>| match r {
                Ok(()) => "yes".to_string(),
                Err(e) => format!("no ({e})"),
            };
            out.kv("respects-utility", describe(&strong));
            out.kv("weakly-respects-utility", describe(&weak));
            (
                strong.is_ok(),
                json!({
                    "rule": rule.name(),
                    "respects_utility": strong.is_ok(),
                    "weakly_respects_utility": weak.is_ok(),
                }),
            )
        }
        CheckKind::LotteryUniform => {
            let ps = PlausibilisticSituation::of_problem(d)?;
            let witness = match check_lottery_uniform(&ps, table.relation()) {
                Ok(()) => None,
                Err(Error::NotUniform { a1, a2, b1, b2 }) => Some([a1, a2, b1, b2]),
                Err(e) => return Err(e.into()),
            };
            out.kv("lottery-uniform", witness.is_none());
            if let Some([a1, a2, b1, b2]) = &witness {
                out.kv("witness", format!("({a1}, {a2}) and ({b1}, {b2}) differ on acts inducing one lottery"));
            }
            (witness.is_none(), json!({"rule": rule.name(), "lottery_uniform": witness.is_none(), "witness": witness}))
        }
    };
    Ok(Report { ok, text: out.finish(), json })
}

fn lotteries_report(out: &mut Text, ls: &LotterySituation) -> serde_json::Value {
    let mut items = Vec::new();
    for l in ls.lotteries() {
        out.line(format!("lottery {} over {}:", l.name(), l.support().join(", ")));
        for (m, v) in l.measure().values().iter().enumerate() {
            out.line(format!("  {}: {v}", geu::plausibility::subset_value(l.support(), m as u64)));
        }
        items.push(json!({"name": l.name(), "support": l.support(), "assignment": measure_json(l.measure())}));
    }
    serde_json::Value::Array(items)
}

pub fn lottery(problem: &Problem, command: LotteryCommand) -> Result<Report, CliError> {
    match command {
        LotteryCommand::Induce => {
            let d = act_problem(problem, "lottery induce")?;
            let ps = PlausibilisticSituation::of_problem(d)?;
            let induced = ps.induce_situation()?;
            let mut out = Text::default();
            out.line("induced lotteries:");
            let mut per_act = Vec::new();
            for (a, act) in d.acts().iter().enumerate() {
                let l = ps.induce_lottery(a)?;
                let target = induced.lotteries().iter().find(|m| m.same_as(&l)).expect("induced lottery present");
                out.line(format!("  {} -> {}", act.name, target.name()));
                per_act.push(json!({"act": act.name, "lottery": target.name()}));
            }
            let lotteries = lotteries_report(&mut out, &induced);
            Ok(Report { ok: true, text: out.finish(), json: json!({"acts": per_act, "lotteries": lotteries}) })
        }
        LotteryCommand::Construct | LotteryCommand::ConstructStandard => {
            let Problem::Lottery(LotteryDocument { situation, .. }) = problem else {
                return Err(CliError::Usage("lottery construct needs a lottery document".into()));
            };
            let ps = match command {
                LotteryCommand::Construct => construct_situation(situation)?,
                _ => construct_situation_standard(situation)?,
            };
            let mut round_trip = true;
            let mut out = Text::default();
            let s = ps.situation();
            out.kv("states", s.states().len());
            for st in s.states() {
                out.line(format!("  {st}"));
            }
            out.line("acts:");
            let mut acts = Vec::new();
            for (k, l) in situation.lotteries().iter().enumerate() {
                let act = &s.acts()[k];
                let outcomes: Vec<&str> = act.outcomes.iter().map(|&c| s.consequences()[c].as_str()).collect();
                let back = ps.induce_lottery(k)?.same_as(l);
                round_trip &= back;
                out.line(format!("  {}: {} (induces {}: {})", act.name, outcomes.join(", "), l.name(), back));
                acts.push(json!({"name": act.name, "outcomes": outcomes, "round_trip": back}));
            }
            out.kv("Pl1-Pl3", format!("hold on all {} subsets", ps.measure().values().len()));
            if command == LotteryCommand::ConstructStandard {
                let atoms: Vec<String> = ps
                    .measure()
                    .as_probability()
                    .expect("interval measure is additive")
                    .iter()
                    .map(geu::value::format_rational)
                    .collect();
                out.kv("interval lengths", atoms.join(", "));
            } else if s.states().len() <= 3 {
                measure_text(&mut out, "measure", ps.measure());
            }
            out.kv("round-trip", if round_trip { "ok" } else { "failed" });
            Ok(Report {
                ok: round_trip,
                text: out.finish(),
                json: json!({
                    "states": s.states(),
                    "acts": acts,
                    "measure": measure_json(ps.measure()),
                    "round_trip": round_trip,
                }),
            })
        }
    }
}

pub fn aa(problem: &Problem, command: AaCommand) -> Result<Report, CliError> {
    let Problem::Aa(p) = problem else { return Err(CliError::Usage("aa commands need an aa document".into())) };
    let names = p.horse_names();
    let values: Vec<Value> = names.iter().map(|h| p.horse_geu(h)).collect::<geu::Result<_>>()?;
    let mut out = Text::default();
    match command {
        AaCommand::Flatten => {
            let d = p.flatten()?;
            problem_text(&mut out, &d);
            values_text(&mut out, "geu values", &names, &values);
            let flat: Vec<Value> = (0..names.len()).map(|a| d.geu(a)).collect::<geu::Result<_>>()?;
            let preserved = flat == values;
            out.kv("values preserved", preserved);
            Ok(Report {
                ok: preserved,
                text: out.finish(),
                json: json!({
                    "problem": problem_json(&d),
                    "geu_values": values_json(&names, &values),
                    "values_preserved": preserved,
                }),
            })
        }
        AaCommand::Eval => {
            let rel = p.horse_relation()?;
            values_text(&mut out, "values", &names, &values);
            relation_text(&mut out, &rel);
            Ok(Report {
                ok: true,
                text: out.finish(),
                json: json!({"values": values_json(&names, &values), "relation": relation_json(&rel)}),
            })
        }
    }
}
