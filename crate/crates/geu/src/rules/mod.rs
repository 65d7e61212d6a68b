//! Decision rules: functions from decision problems to preference relations.

mod choquet;

use std::cmp::Ordering;

pub use choquet::{choquet_expectation, core_extreme_points, BeliefFunction};

use crate::error::{Error, Result};
use crate::model::{is_standard_domain, standard_eu_with, DecisionProblem, PreferenceRelation};
use crate::value::{numeric_cmp, numeric_sub, Rational, Value};

/// A rule's output on one problem: a per-act score and the relation.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub values: Vec<Value>,
    pub relation: PreferenceRelation,
}

pub trait DecisionRule: Send + Sync {
    fn name(&self) -> &'static str;

    /// `Ok(())` iff the problem is in the rule's domain; otherwise the reason.
    fn applicable(&self, d: &DecisionProblem) -> Result<()>;

    fn evaluate(&self, d: &DecisionProblem) -> Result<Evaluation>;

    fn relation(&self, d: &DecisionProblem) -> Result<PreferenceRelation> {
        Ok(self.evaluate(d)?.relation)
    }
}

pub const RULE_NAMES: [&str; 6] = ["geu", "eu", "maximin", "regret", "mmeu", "ceu"];

pub fn rule_by_name(name: &str) -> Option<Box<dyn DecisionRule>> {
    match name {
        "geu" => Some(Box::new(Geu)),
        "eu" => Some(Box::new(Eu)),
        "maximin" => Some(Box::new(Maximin)),
        "regret" => Some(Box::new(Regret)),
        "mmeu" => Some(Box::new(Mmeu)),
        "ceu" => Some(Box::new(Ceu)),
        _ => None,
    }
}

fn by_scores(d: &DecisionProblem, values: Vec<Value>, leq: impl Fn(&Value, &Value) -> bool) -> Evaluation {
    let relation = PreferenceRelation::from_fn(d.act_names(), |i, j| leq(&values[i], &values[j]));
    Evaluation { values, relation }
}

fn rational_leq(a: &Value, b: &Value) -> bool {
    matches!(numeric_cmp(a, b), Some(Ordering::Less | Ordering::Equal))
}

fn rational_utilities(d: &DecisionProblem) -> Result<Vec<Vec<Rational>>> {
    (0..d.acts().len())
        .map(|a| {
            d.utility_rv(a)?
                .into_iter()
                .map(|u| u.as_rational().cloned().ok_or(Error::NonNumericUtility(u)))
                .collect()
        })
        .collect()
}

/// `a1 ≼ a2` iff `geu(a1) ≼_V geu(a2)`.
pub struct Geu;

impl DecisionRule for Geu {
    fn name(&self) -> &'static str {
        "geu"
    }

    fn applicable(&self, d: &DecisionProblem) -> Result<()> {
        d.expectation().map(|_| ())
    }

    fn evaluate(&self, d: &DecisionProblem) -> Result<Evaluation> {
        let e = d.expectation()?;
        let values = (0..d.acts().len()).map(|a| d.geu(a)).collect::<Result<_>>()?;
        Ok(by_scores(d, values, |x, y| e.v_leq(x, y)))
    }
}

/// Expected utility on standard problems.
pub struct Eu;

impl DecisionRule for Eu {
    fn name(&self) -> &'static str {
        "eu"
    }

    fn applicable(&self, d: &DecisionProblem) -> Result<()> {
        d.standard_probability().map(|_| ())
    }

    fn evaluate(&self, d: &DecisionProblem) -> Result<Evaluation> {
        let atoms = d.standard_probability()?;
        let values = (0..d.acts().len())
            .map(|a| Ok(Value::Rational(standard_eu_with(&atoms, &d.utility_rv(a)?))))
            .collect::<Result<_>>()?;
        Ok(by_scores(d, values, rational_leq))
    }
}

/// Worst-case utility `w(a) = min_s u_a(s)`. Any plausibility measure is ignored.
pub struct Maximin;

impl Maximin {
    fn worst_cases(d: &DecisionProblem) -> Result<Vec<Value>> {
        let order = d.u_domain();
        let used: Vec<&Value> = {
            let mut v: Vec<&Value> = d.utility().iter().collect();
            v.sort();
            v.dedup();
            v
        };
        for (i, x) in used.iter().enumerate() {
            for y in &used[i + 1..] {
                if !order.leq(x, y) && !order.leq(y, x) {
                    return Err(Error::NotTotallyOrdered((*x).clone(), (*y).clone()));
                }
            }
        }
        (0..d.acts().len())
            .map(|a| {
                let rv = d.utility_rv(a)?;
                Ok(rv
                    .into_iter()
                    .reduce(|best, u| if order.leq(&best, &u) { best } else { u })
                    .expect("nonempty state space"))
            })
            .collect()
    }
}

impl DecisionRule for Maximin {
    fn name(&self) -> &'static str {
        "maximin"
    }

    fn applicable(&self, d: &DecisionProblem) -> Result<()> {
        Self::worst_cases(d).map(|_| ())
    }

    fn evaluate(&self, d: &DecisionProblem) -> Result<Evaluation> {
        let values = Self::worst_cases(d)?;
        Ok(by_scores(d, values, |x, y| d.u_domain().leq(x, y)))
    }
}

/// Minimax regret. Scores are the maximal regrets `r̄(a)`; `a1 ≼ a2` iff
/// `r̄(a1) ≥ r̄(a2)`. Any plausibility measure is ignored.
pub struct Regret;

/// Per-act maximal regret together with `ū` and `M = max_s ū(s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegretTable {
    pub best: Vec<Value>,
    pub max_regret: Vec<Value>,
    pub max_utility: Value,
}

pub fn regret_table(d: &DecisionProblem) -> Result<RegretTable> {
    if let Some(u) = d.utility().iter().find(|u| !matches!(u, Value::Rational(_) | Value::Real(_))) {
        return Err(Error::NonNumericUtility(u.clone()));
    }
    let rvs: Vec<Vec<Value>> = (0..d.acts().len()).map(|a| d.utility_rv(a)).collect::<Result<_>>()?;
    let max = |a: Value, b: &Value| if rational_leq(&a, b) { b.clone() } else { a };
    let n = d.situation().states().len();
    let best: Vec<Value> = (0..n)
        .map(|s| rvs.iter().skip(1).fold(rvs[0][s].clone(), |acc, rv| max(acc, &rv[s])))
        .collect();
    let max_regret = rvs
        .iter()
        .map(|rv| {
            (0..n)
                .map(|s| numeric_sub(&best[s], &rv[s]).expect("finite utilities"))
                .fold(Value::zero(), |acc, r| max(acc, &r))
        })
        .collect();
    let max_utility = best.iter().skip(1).fold(best[0].clone(), max);
    Ok(RegretTable { best, max_regret, max_utility })
}

impl DecisionRule for Regret {
    fn name(&self) -> &'static str {
        "regret"
    }

    fn applicable(&self, d: &DecisionProblem) -> Result<()> {
        regret_table(d).map(|_| ())
    }

    fn evaluate(&self, d: &DecisionProblem) -> Result<Evaluation> {
        let values = regret_table(d)?.max_regret;
        Ok(by_scores(d, values, |x, y| rational_leq(y, x)))
    }
}

/// Maxmin expected utility over the set of measures encoded by `Pl_𝒫`.
pub struct Mmeu;

impl Mmeu {
    fn lower_expectations(d: &DecisionProblem) -> Result<Vec<Value>> {
        let e = d.expectation().map_err(|_| Error::NotCredalProblem("problem is not plausibilistic".into()))?;
        let measures = d.measure()?.as_probability_set(e.p_domain())?;
        let rvs = rational_utilities(d)?;
        Ok(rvs
            .iter()
            .map(|rv| {
                let rv: Vec<Value> = rv.iter().cloned().map(Value::Rational).collect();
                let eus = measures.iter().map(|(_, atoms)| standard_eu_with(atoms, &rv));
                Value::Rational(eus.min().expect("nonempty set of measures"))
            })
            .collect())
    }
}

impl DecisionRule for Mmeu {
    fn name(&self) -> &'static str {
        "mmeu"
    }

    fn applicable(&self, d: &DecisionProblem) -> Result<()> {
        Self::lower_expectations(d).map(|_| ())
    }

    fn evaluate(&self, d: &DecisionProblem) -> Result<Evaluation> {
        let values = Self::lower_expectations(d)?;
        Ok(by_scores(d, values, rational_leq))
    }
}

/// Choquet expected utility on `(𝒜, 𝔼, u, ν)`.
pub struct Ceu;

impl Ceu {
    fn capacity(d: &DecisionProblem) -> Result<BeliefFunction> {
        let e = d.expectation().map_err(|_| Error::NotStandardDomain("problem is not plausibilistic".into()))?;
        if !is_standard_domain(e) {
            return Err(Error::NotStandardDomain(format!("expectation domain {} is not standard", e.name())));
        }
        BeliefFunction::from_measure(d.measure()?.clone())
    }

    fn expectations(d: &DecisionProblem) -> Result<Vec<Value>> {
        let nu = Self::capacity(d)?;
        Ok(rational_utilities(d)?.iter().map(|rv| Value::Rational(choquet_expectation(&nu, rv))).collect())
    }
}

impl DecisionRule for Ceu {
    fn name(&self) -> &'static str {
        "ceu"
    }

    fn applicable(&self, d: &DecisionProblem) -> Result<()> {
        Self::expectations(d).map(|_| ())
    }

    fn evaluate(&self, d: &DecisionProblem) -> Result<Evaluation> {
        let values = Self::expectations(d)?;
        Ok(by_scores(d, values, rational_leq))
    }
}

pub fn rule_geu(d: &DecisionProblem) -> Result<PreferenceRelation> {
    Geu.relation(d)
}

pub fn rule_eu(d: &DecisionProblem) -> Result<PreferenceRelation> {
    Eu.relation(d)
}

pub fn rule_maximin(d: &DecisionProblem) -> Result<PreferenceRelation> {
    Maximin.relation(d)
}

pub fn rule_regret(d: &DecisionProblem) -> Result<PreferenceRelation> {
    Regret.relation(d)
}

pub fn rule_mmeu(d: &DecisionProblem) -> Result<PreferenceRelation> {
    Mmeu.relation(d)
}

pub fn rule_ceu(d: &DecisionProblem) -> Result<PreferenceRelation> {
    Ceu.relation(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;
    use crate::model::{relation_equal, DecisionSituation};
    use crate::plausibility::{make_pl_from_probability_set, PlausibilityMeasure};
    use crate::expectation::ExpectationDomain;
    use crate::testing::{beldr, beldr_situation, beldr_utility, labels, r, uniform_beldr};

    fn tie(rel: &PreferenceRelation) -> bool {
        rel.holds(0, 1) && rel.holds(1, 0)
    }

    fn two_state(rvs: &[(i64, i64)]) -> DecisionProblem {
        let mut cons: Vec<i64> = rvs.iter().flat_map(|&(a, b)| [a, b]).collect();
        cons.sort();
        cons.dedup();
        let acts = rvs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| (format!("a{}", i + 1), vec![a.to_string(), b.to_string()]))
            .collect();
        let situation =
            DecisionSituation::from_labels(labels(&["s1", "s2"]), cons.iter().map(|c| c.to_string()).collect(), acts).unwrap();
        DecisionProblem::nonplausibilistic(situation, Domain::rationals(), cons.iter().map(|&c| Value::int(c)).collect())
            .unwrap()
    }

    #[test]
    fn example_rules() {
        let d = beldr();
        let ceu = Ceu.evaluate(&d).unwrap();
        assert_eq!(ceu.values, vec![Value::int(1), Value::int(2)]);
        assert!(ceu.relation.strictly(0, 1));
        assert!(tie(&rule_maximin(&d).unwrap()));
        let regret = regret_table(&d).unwrap();
        assert_eq!(regret.best, vec![Value::int(3), Value::int(2), Value::int(3)]);
        assert_eq!(regret.max_regret, vec![Value::int(2), Value::int(2)]);
        assert!(tie(&rule_regret(&d).unwrap()));
        assert!(!relation_equal(&rule_maximin(&d).unwrap(), &ceu.relation).unwrap());
    }

    #[test]
    fn uniform_problem_ties_under_eu_and_geu() {
        let d = uniform_beldr();
        assert!(tie(&rule_eu(&d).unwrap()));
        assert!(tie(&rule_geu(&d).unwrap()));
        assert!(relation_equal(&rule_ceu(&d).unwrap(), &rule_eu(&d).unwrap()).unwrap());
    }

    #[test]
    fn point_mass_eu_is_strict() {
        let pl = PlausibilityMeasure::probability(labels(&["s1", "s2", "s3"]), &[r(1, 1), r(0, 1), r(0, 1)]).unwrap();
        let d = DecisionProblem::plausibilistic(beldr_situation(), ExpectationDomain::standard(), beldr_utility(), pl)
            .unwrap();
        assert!(rule_eu(&d).unwrap().strictly(0, 1));
    }

    #[test]
    fn maximin_and_regret_on_two_states() {
        // Oracle: minima 0 and 1; regrets max(1-0, 5-5)=1 and max(1-1, 5-1)=4.
        let d = two_state(&[(0, 5), (1, 1)]);
        let maximin = Maximin.evaluate(&d).unwrap();
        assert_eq!(maximin.values, vec![Value::int(0), Value::int(1)]);
        assert!(maximin.relation.strictly(0, 1));
        let regret = Regret.evaluate(&d).unwrap();
        assert_eq!(regret.values, vec![Value::int(1), Value::int(4)]);
        assert!(regret.relation.strictly(1, 0));
    }

    #[test]
    fn single_act_is_reflexive() {
        let d = two_state(&[(2, 3)]);
        assert_eq!(Regret.evaluate(&d).unwrap().values, vec![Value::zero()]);
        assert!(rule_regret(&d).unwrap().holds(0, 0));
        assert!(rule_maximin(&d).unwrap().holds(0, 0));
    }

    #[test]
    fn mmeu_over_point_masses_and_core() {
        let states = labels(&["s1", "s2", "s3"]);
        let point = |i: usize| (0..3).map(|j| if i == j { r(1, 1) } else { r(0, 1) }).collect::<Vec<_>>();
        let credal = |measures: Vec<(String, Vec<Rational>)>| {
            let (p, pl) = make_pl_from_probability_set(states.clone(), &measures).unwrap();
            let e = ExpectationDomain::e_credal(Domain::reals(), p).unwrap();
            DecisionProblem::plausibilistic(beldr_situation(), e, beldr_utility(), pl).unwrap()
        };
        let d = credal(vec![("d1".into(), point(0)), ("d3".into(), point(2))]);
        assert_eq!(Mmeu.evaluate(&d).unwrap().values, vec![Value::int(1), Value::int(1)]);
        let d = credal(vec![("d1".into(), point(0)), ("d2".into(), point(1))]);
        let out = Mmeu.evaluate(&d).unwrap();
        assert_eq!(out.values, vec![Value::int(1), Value::int(2)]);
        assert!(relation_equal(&out.relation, &rule_ceu(&beldr()).unwrap()).unwrap());
        assert!(matches!(rule_mmeu(&beldr()), Err(Error::NotCredalProblem(_))));
    }

    #[test]
    fn maximin_rejects_incomparable_utilities() {
        let situation = DecisionSituation::from_labels(
            labels(&["s"]),
            labels(&["x", "y"]),
            vec![("a".into(), labels(&["x"])), ("b".into(), labels(&["y"]))],
        )
        .unwrap();
        let u = Domain::subsets(vec![Value::sym("p"), Value::sym("q")]);
        let d = DecisionProblem::nonplausibilistic(
            situation,
            u,
            vec![Value::set([Value::sym("p")]), Value::set([Value::sym("q")])],
        )
        .unwrap();
        assert!(matches!(rule_maximin(&d), Err(Error::NotTotallyOrdered(..))));
        assert!(matches!(rule_regret(&d), Err(Error::NonNumericUtility(_))));
    }
}
