//! Problem documents: JSON with exact rationals written as `"p/q"` strings.
//!
//! A document declares its `kind` (`act`, `lottery` or `aa`), optional
//! domain choices, the situation, a utility table and an optional measure.
//! Parsing runs every domain and measure check the library offers, so a
//! document that loads is a validated problem.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;
use serde_json::Value as Json;

use geu::horse::{AAProblem, HorseLottery, OuterPart};
use geu::lottery::{Lottery, LotteryProblem, LotterySituation};
use geu::plausibility::MAX_STATES;
use geu::represent::lottery_set_domain;
use geu::rules::BeliefFunction;
use geu::value::parse_rational;
use geu::{
    make_pl_from_probability_set, make_plausibility_measure, Act, Carrier, DecisionProblem, DecisionSituation,
    Domain, ExpectationDomain, Order, PlausibilityMeasure, Rational, StateSet, Value,
};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;
pub const MAX_ACTS: usize = 12;

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Act,
    Lottery,
    Aa,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    version: u32,
    kind: Kind,
    #[serde(default)]
    domains: RawDomains,
    #[serde(default)]
    states: Vec<String>,
    #[serde(default)]
    consequences: Vec<String>,
    #[serde(default)]
    acts: Vec<RawAct>,
    #[serde(default)]
    lotteries: Vec<RawLottery>,
    #[serde(default)]
    horses: Vec<RawHorse>,
    #[serde(default)]
    utility: BTreeMap<String, Json>,
    measure: Option<RawMeasure>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDomains {
    utility: Option<RawDomain>,
    plausibility: Option<RawDomain>,
    expectation: Option<String>,
    inner: Option<String>,
    outer: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawDomain {
    Builtin(String),
    Finite(RawFiniteDomain),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFiniteDomain {
    values: Vec<Json>,
    #[serde(default)]
    order: Vec<(Json, Json)>,
    bottom: Option<Json>,
    top: Option<Json>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAct {
    name: String,
    outcomes: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLottery {
    name: String,
    atoms: Option<BTreeMap<String, Json>>,
    support: Option<Vec<String>>,
    table: Option<Vec<RawEntry>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    subset: Vec<String>,
    value: Json,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHorse {
    name: String,
    lotteries: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMass {
    focal: Vec<String>,
    mass: Json,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCredalMember {
    name: String,
    atoms: BTreeMap<String, Json>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum RawMeasure {
    Probability(BTreeMap<String, Json>),
    Masses(Vec<RawMass>),
    Table(Vec<RawEntry>),
    Credal(Vec<RawCredalMember>),
}

/// A lottery document: the situation, plus a problem when a utility is given.
#[derive(Clone, Debug)]
pub struct LotteryDocument {
    pub situation: LotterySituation,
    pub problem: Option<LotteryProblem>,
}

#[derive(Clone, Debug)]
pub enum Problem {
    Act(DecisionProblem),
    Lottery(LotteryDocument),
    Aa(Box<AAProblem>),
}

impl Problem {
    pub fn kind(&self) -> Kind {
        match self {
            Problem::Act(_) => Kind::Act,
            Problem::Lottery(_) => Kind::Lottery,
            Problem::Aa(_) => Kind::Aa,
        }
    }
}

pub fn load(path: &Path) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_problem(&text)
}

pub fn parse_problem(text: &str) -> Result<Problem, CliError> {
    let raw: RawDocument =
        serde_json::from_str(text).map_err(|e| CliError::Parse { line: e.line(), message: e.to_string() })?;
    let cx = Context { text };
    if raw.version != FORMAT_VERSION {
        return Err(cx.error("version", format!("unsupported version {} (expected {FORMAT_VERSION})", raw.version)));
    }
    match raw.kind {
        Kind::Act => cx.act_problem(&raw).map(Problem::Act),
        Kind::Lottery => cx.lottery_document(&raw).map(Problem::Lottery),
        Kind::Aa => cx.aa_problem(&raw).map(|p| Problem::Aa(Box::new(p))),
    }
}

/// Parses a JSON literal: integers and `"p/q"` strings are rationals,
/// `"inf"` is `+∞`, other strings are symbols, and `{"pair": [a, b]}`,
/// `{"set": [..]}`, `{"vector": {..}}` build compound values. Floats are
/// accepted only when `reals` is set.
pub fn parse_value(v: &Json, reals: bool) -> Result<Value, String> {
    match v {
        Json::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Value::int(i))
            } else if reals {
                Ok(Value::Real(n.as_f64().ok_or("number out of range")?))
            } else {
                Err(format!("float {n} given where the domain is not real-valued; write it as \"p/q\""))
            }
        }
        Json::String(s) if s == "inf" => Ok(Value::PosInfinity),
        Json::String(s) => Ok(parse_rational(s).map(Value::Rational).unwrap_or_else(|| Value::sym(s.clone()))),
        Json::Object(map) if map.len() == 1 => {
            let (tag, body) = map.iter().next().expect("one entry");
            match (tag.as_str(), body) {
                ("pair", Json::Array(items)) if items.len() == 2 => {
                    Ok(Value::pair(parse_value(&items[0], reals)?, parse_value(&items[1], reals)?))
                }
                ("set", Json::Array(items)) => {
                    Ok(Value::set(items.iter().map(|x| parse_value(x, reals)).collect::<Result<Vec<_>, _>>()?))
                }
                ("vector", Json::Object(entries)) => Ok(Value::vector(
                    entries
                        .iter()
                        .map(|(k, x)| Ok((k.clone(), parse_value(x, reals)?)))
                        .collect::<Result<Vec<_>, String>>()?,
                )),
                _ => Err(format!("unrecognised value literal {v}")),
            }
        }
        _ => Err(format!("unrecognised value literal {v}")),
    }
}

fn parse_rational_literal(v: &Json) -> Result<Rational, String> {
    match parse_value(v, false)? {
        Value::Rational(r) => Ok(r),
        other => Err(format!("expected a rational, found {other}")),
    }
}

fn is_real_valued(d: &Domain) -> bool {
    use geu::BuiltinKind::{Reals, RealsWithPosInf};
    matches!(d.carrier(), Carrier::Builtin(Reals | RealsWithPosInf))
}

struct Context<'a> {
    text: &'a str,
}

impl Context<'_> {
    /// A parse error located at the first line mentioning `needle`.
    fn error(&self, needle: &str, message: impl Into<String>) -> CliError {
        let quoted = format!("\"{needle}\"");
        let line = self.text.lines().position(|l| l.contains(&quoted)).map_or(1, |i| i + 1);
        CliError::Parse { line, message: message.into() }
    }

    fn value(&self, v: &Json, domain: &Domain, field: &str) -> Result<Value, CliError> {
        let value = parse_value(v, is_real_valued(domain)).map_err(|m| self.error(field, m))?;
        if !domain.contains(&value) {
            return Err(self.error(field, format!("{value} is outside its domain")));
        }
        Ok(value)
    }

    fn domain(&self, raw: Option<&RawDomain>, default: Domain, field: &str, plausibility: bool) -> Result<Domain, CliError> {
        let Some(raw) = raw else { return Ok(default) };
        match raw {
            RawDomain::Builtin(name) => match name.as_str() {
                "rationals" if !plausibility => Ok(Domain::rationals()),
                "reals" if !plausibility => Ok(Domain::reals()),
                "reals-with-inf" if !plausibility => Ok(Domain::reals_with_inf()),
                "unit-interval" => Ok(Domain::unit_interval()),
                _ => Err(self.error(field, format!("unknown builtin domain {name}"))),
            },
            RawDomain::Finite(f) => {
                let lit = |v: &Json| parse_value(v, false).map_err(|m| self.error(field, m));
                let values = f.values.iter().map(lit).collect::<Result<Vec<_>, _>>()?;
                let pairs = f
                    .order
                    .iter()
                    .map(|(a, b)| Ok((lit(a)?, lit(b)?)))
                    .collect::<Result<BTreeSet<_>, CliError>>()?;
                let carrier = Carrier::Finite(values);
                let order = Order::Explicit(pairs);
                if plausibility {
                    let (Some(bottom), Some(top)) = (&f.bottom, &f.top) else {
                        return Err(self.error(field, "a plausibility domain needs bottom and top"));
                    };
                    Ok(Domain::plausibility(carrier, order, lit(bottom)?, lit(top)?)?)
                } else {
                    Ok(Domain::new(carrier, order)?)
                }
            }
        }
    }

    fn labels(&self, items: &[String], field: &str, cap: usize) -> Result<Vec<String>, CliError> {
        if items.is_empty() {
            return Err(self.error(field, format!("{field} must not be empty")));
        }
        if items.len() > cap {
            return Err(self.error(field, format!("{} {field} exceed the cap of {cap}", items.len())));
        }
        let unique: BTreeSet<&String> = items.iter().collect();
        if unique.len() != items.len() {
            return Err(self.error(field, format!("duplicate labels in {field}")));
        }
        Ok(items.to_vec())
    }

    fn mask(&self, labels: &[String], subset: &[String], field: &str) -> Result<StateSet, CliError> {
        subset.iter().try_fold(0, |acc, s| match labels.iter().position(|x| x == s) {
            Some(i) => Ok(acc | 1 << i),
            None => Err(self.error(field, format!("unknown label {s}"))),
        })
    }

    fn utility(&self, raw: &RawDocument, consequences: &[String], u: &Domain) -> Result<Vec<Value>, CliError> {
        if let Some(extra) = raw.utility.keys().find(|k| !consequences.contains(k)) {
            return Err(self.error(extra, format!("utility given for unknown consequence {extra}")));
        }
        consequences
            .iter()
            .map(|c| match raw.utility.get(c) {
                Some(v) => self.value(v, u, c),
                None => Err(self.error("utility", format!("no utility for consequence {c}"))),
            })
            .collect()
    }

    fn table(&self, labels: &[String], entries: &[RawEntry], p: &Domain, field: &str) -> Result<Vec<Value>, CliError> {
        let mut values: Vec<Option<Value>> = vec![None; 1 << labels.len()];
        for e in entries {
            let m = self.mask(labels, &e.subset, field)? as usize;
            if values[m].is_some() {
                return Err(self.error(field, format!("subset {:?} listed twice", e.subset)));
            }
            values[m] = Some(self.value(&e.value, p, field)?);
        }
        values
            .into_iter()
            .enumerate()
            .map(|(m, v)| {
                v.ok_or_else(|| {
                    let missing: Vec<&str> =
                        labels.iter().enumerate().filter(|(i, _)| m & (1 << i) != 0).map(|(_, s)| s.as_str()).collect();
                    self.error(field, format!("table has no entry for subset {missing:?}"))
                })
            })
            .collect()
    }

    fn atoms(&self, labels: &[String], atoms: &BTreeMap<String, Json>, field: &str) -> Result<Vec<Rational>, CliError> {
        if let Some(extra) = atoms.keys().find(|k| !labels.contains(k)) {
            return Err(self.error(field, format!("unknown label {extra}")));
        }
        labels
            .iter()
            .map(|s| match atoms.get(s) {
                Some(v) => parse_rational_literal(v).map_err(|m| self.error(field, m)),
                None => Ok(Rational::from_integer(0.into())),
            })
            .collect()
    }

    fn act_problem(&self, raw: &RawDocument) -> Result<DecisionProblem, CliError> {
        let states = self.labels(&raw.states, "states", MAX_STATES)?;
        let consequences = self.labels(&raw.consequences, "consequences", usize::MAX)?;
        if raw.acts.is_empty() {
            return Err(self.error("acts", "acts must not be empty"));
        }
        if raw.acts.len() > MAX_ACTS {
            return Err(self.error("acts", format!("{} acts exceed the cap of {MAX_ACTS}", raw.acts.len())));
        }
        let index: BTreeMap<&String, usize> = consequences.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let acts = raw
            .acts
            .iter()
            .map(|a| {
                if a.outcomes.len() != states.len() {
                    return Err(self.error(&a.name, format!("act {} must give one consequence per state", a.name)));
                }
                let outcomes = a
                    .outcomes
                    .iter()
                    .map(|c| index.get(c).copied().ok_or_else(|| self.error(&a.name, format!("unknown consequence {c}"))))
                    .collect::<Result<_, _>>()?;
                Ok(Act { name: a.name.clone(), outcomes })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let situation = DecisionSituation::new(states.clone(), consequences.clone(), acts)?;
        let domains = &raw.domains;
        if domains.inner.is_some() || domains.outer.is_some() {
            return Err(self.error("domains", "inner/outer domains belong to aa documents"));
        }
        let u = self.domain(domains.utility.as_ref(), Domain::rationals(), "utility", false)?;
        let Some(measure) = &raw.measure else {
            if domains.expectation.is_some() || domains.plausibility.is_some() {
                return Err(self.error("domains", "an expectation or plausibility domain needs a measure"));
            }
            let utility = self.utility(raw, &consequences, &u)?;
            return Ok(DecisionProblem::nonplausibilistic(situation, u, utility)?);
        };
        let (e, pl) = self.measure(measure, &states, u, domains)?;
        let utility = self.utility(raw, &consequences, e.u_domain())?;
        Ok(DecisionProblem::plausibilistic(situation, e, utility, pl)?)
    }

    /// The expectation domain and measure of an act or AA document.
    fn measure(
        &self,
        raw: &RawMeasure,
        states: &[String],
        u: Domain,
        domains: &RawDomains,
    ) -> Result<(ExpectationDomain, PlausibilityMeasure), CliError> {
        let states = states.to_vec();
        let credal = match raw {
            RawMeasure::Credal(members) => {
                let measures = members
                    .iter()
                    .map(|m| Ok((m.name.clone(), self.atoms(&states, &m.atoms, "credal")?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                Some(make_pl_from_probability_set(states.clone(), &measures)?)
            }
            _ => None,
        };
        let default = if credal.is_some() { "credal" } else { "standard" };
        let name = domains.expectation.as_deref().unwrap_or(default);
        let declared_p = || self.domain(domains.plausibility.as_ref(), Domain::unit_interval(), "plausibility", true);
        let e = match (name, &credal) {
            ("standard", None) => ExpectationDomain::standard(),
            ("max", None) => ExpectationDomain::e_max(u)?,
            ("credal", Some((p, _))) => ExpectationDomain::e_credal(u, p.clone())?,
            ("lottery-sets", Some((p, _))) => lottery_set_domain(u, p.clone(), BTreeSet::new())?,
            ("lottery-sets", None) => lottery_set_domain(u, declared_p()?, BTreeSet::new())?,
            ("standard" | "max", Some(_)) => {
                return Err(self.error("expectation", format!("a credal measure cannot use the {name} domain")))
            }
            ("credal", None) => return Err(self.error("expectation", "the credal domain needs a credal measure")),
            _ => return Err(self.error("expectation", format!("unknown expectation domain {name}"))),
        };
        if domains.plausibility.is_some() && name != "lottery-sets" {
            return Err(self.error("plausibility", "a plausibility domain is only declared with lottery-sets"));
        }
        let p = e.p_domain();
        let pl = match raw {
            RawMeasure::Credal(_) => credal.expect("credal measure").1,
            RawMeasure::Probability(atoms) => {
                let atoms = self.atoms(&states, atoms, "probability")?;
                let pl = PlausibilityMeasure::probability(states.clone(), &atoms)?;
                make_plausibility_measure(states, pl.values().to_vec(), p)?
            }
            RawMeasure::Masses(masses) => {
                let masses = masses
                    .iter()
                    .map(|m| {
                        let mask = self.mask(&states, &m.focal, "masses")?;
                        Ok((mask, parse_rational_literal(&m.mass).map_err(|e| self.error("masses", e))?))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                let bel = BeliefFunction::from_masses(states.clone(), &masses)?;
                make_plausibility_measure(states, bel.measure().values().to_vec(), p)?
            }
            RawMeasure::Table(entries) => {
                let values = self.table(&states, entries, p, "table")?;
                make_plausibility_measure(states, values, p)?
            }
        };
        Ok((e, pl))
    }

    fn lotteries(&self, raw: &RawDocument, consequences: &[String], p: &Domain) -> Result<LotterySituation, CliError> {
        if raw.lotteries.is_empty() {
            return Err(self.error("lotteries", "lotteries must not be empty"));
        }
        let lotteries = raw
            .lotteries
            .iter()
            .map(|l| match (&l.atoms, &l.support, &l.table) {
                (Some(atoms), None, None) => {
                    let support: Vec<String> = atoms.keys().cloned().collect();
                    let atoms = self.atoms(&support, atoms, &l.name)?;
                    Ok(Lottery::standard(l.name.clone(), support, &atoms)
                        .and_then(|x| Lottery::new(x.name().to_string(), x.support().to_vec(), x.measure().values().to_vec(), p))?)
                }
                (None, Some(support), Some(table)) => {
                    let support = self.labels(support, &l.name, MAX_STATES)?;
                    let values = self.table(&support, table, p, &l.name)?;
                    Ok(Lottery::new(l.name.clone(), support, values, p)?)
                }
                _ => Err(self.error(&l.name, format!("lottery {} needs either atoms or support and table", l.name))),
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(LotterySituation::new(lotteries, consequences.to_vec(), p.clone())?)
    }

    fn lottery_document(&self, raw: &RawDocument) -> Result<LotteryDocument, CliError> {
        if !raw.states.is_empty() || !raw.acts.is_empty() || !raw.horses.is_empty() || raw.measure.is_some() {
            return Err(self.error("kind", "lottery documents list consequences, lotteries and utility only"));
        }
        let consequences = self.labels(&raw.consequences, "consequences", usize::MAX)?;
        let domains = &raw.domains;
        let expectation = match domains.expectation.as_deref() {
            None | Some("standard") => ExpectationDomain::standard(),
            Some("max") => ExpectationDomain::e_max(self.domain(domains.utility.as_ref(), Domain::rationals(), "utility", false)?)?,
            Some("lottery-sets") => lottery_set_domain(
                self.domain(domains.utility.as_ref(), Domain::rationals(), "utility", false)?,
                self.domain(domains.plausibility.as_ref(), Domain::unit_interval(), "plausibility", true)?,
                BTreeSet::new(),
            )?,
            Some(other) => return Err(self.error("expectation", format!("unknown expectation domain {other}"))),
        };
        let situation = self.lotteries(raw, &consequences, expectation.p_domain())?;
        let problem = if raw.utility.is_empty() {
            None
        } else {
            let utility = self.utility(raw, &consequences, expectation.u_domain())?;
            Some(LotteryProblem::new(situation.clone(), expectation, utility)?)
        };
        Ok(LotteryDocument { situation, problem })
    }

    fn aa_problem(&self, raw: &RawDocument) -> Result<AAProblem, CliError> {
        if !raw.acts.is_empty() {
            return Err(self.error("acts", "aa documents use horses, not acts"));
        }
        let states = self.labels(&raw.states, "states", MAX_STATES)?;
        let consequences = self.labels(&raw.consequences, "consequences", usize::MAX)?;
        let domains = &raw.domains;
        let u = self.domain(domains.utility.as_ref(), Domain::rationals(), "utility", false)?;
        let inner = match domains.inner.as_deref() {
            None | Some("standard") => ExpectationDomain::standard(),
            Some("max") => ExpectationDomain::e_max(u)?,
            Some(other) => return Err(self.error("inner", format!("unknown inner expectation domain {other}"))),
        };
        let roulette = self.lotteries(raw, &consequences, inner.p_domain())?;
        if raw.horses.is_empty() {
            return Err(self.error("horses", "horses must not be empty"));
        }
        if raw.horses.len() > MAX_ACTS {
            return Err(self.error("horses", format!("{} horses exceed the cap of {MAX_ACTS}", raw.horses.len())));
        }
        let horses = raw
            .horses
            .iter()
            .map(|h| {
                let lotteries = h
                    .lotteries
                    .iter()
                    .map(|l| roulette.lottery_index(l).map_err(|_| self.error(&h.name, format!("unknown lottery {l}"))))
                    .collect::<Result<_, _>>()?;
                Ok(HorseLottery { name: h.name.clone(), lotteries })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let utility = self.utility(raw, &consequences, inner.u_domain())?;
        let outer = match &raw.measure {
            None => {
                if domains.outer.is_some() {
                    return Err(self.error("outer", "an outer domain needs a measure"));
                }
                None
            }
            Some(measure) => {
                let outer_domains = RawDomains {
                    expectation: Some(match domains.outer.as_deref() {
                        None | Some("standard") => "standard".into(),
                        Some("max") => "max".into(),
                        Some(other) => return Err(self.error("outer", format!("unknown outer expectation domain {other}"))),
                    }),
                    ..RawDomains::default()
                };
                let (expectation, measure) = self.measure(measure, &states, inner.v_domain().clone(), &outer_domains)?;
                Some(OuterPart { expectation, measure })
            }
        };
        Ok(AAProblem::new(states, roulette, horses, inner, utility, outer)?)
    }
}
