//! Decision situations and problems, utility random variables and lotteries,
//! and the two expectation formulas (standard EU and GEU).

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::expectation::{Embed, ExpectationDomain, Oplus, Otimes};
use crate::plausibility::{make_plausibility_measure, PlausibilityMeasure, StateSet};
use crate::value::{Rational, Value};

/// An act: a total map from states to consequences, stored as consequence
/// indices in state order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Act {
    pub name: String,
    pub outcomes: Vec<usize>,
}

/// `(A, S, C)` with finitely many states, consequences and acts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionSituation {
    states: Vec<String>,
    consequences: Vec<String>,
    acts: Vec<Act>,
}

fn check_unique(labels: &[String], what: &str) -> Result<()> {
    let set: BTreeSet<&String> = labels.iter().collect();
    if set.len() != labels.len() {
        return Err(Error::InvalidProblem(format!("duplicate {what} labels")));
    }
    Ok(())
}

impl DecisionSituation {
    pub fn new(states: Vec<String>, consequences: Vec<String>, acts: Vec<Act>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidProblem("no states".into()));
        }
        if acts.is_empty() {
            return Err(Error::InvalidProblem("no acts".into()));
        }
        check_unique(&states, "state")?;
        check_unique(&consequences, "consequence")?;
        let names: Vec<String> = acts.iter().map(|a| a.name.clone()).collect();
        check_unique(&names, "act")?;
        for act in &acts {
            if act.outcomes.len() != states.len() || act.outcomes.iter().any(|&c| c >= consequences.len()) {
                return Err(Error::InvalidProblem(format!("act {} is not a total map S -> C", act.name)));
            }
        }
        let functions: BTreeSet<&Vec<usize>> = acts.iter().map(|a| &a.outcomes).collect();
        if functions.len() != acts.len() {
            return Err(Error::InvalidProblem("two acts are the same function S -> C".into()));
        }
        Ok(DecisionSituation { states, consequences, acts })
    }

    /// Builds a situation from acts given as consequence labels per state.
    pub fn from_labels(
        states: Vec<String>,
        consequences: Vec<String>,
        acts: Vec<(String, Vec<String>)>,
    ) -> Result<Self> {
        let index: BTreeMap<&String, usize> = consequences.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let acts = acts
            .into_iter()
            .map(|(name, labels)| {
                let outcomes = labels
                    .iter()
                    .map(|l| {
                        index
                            .get(l)
                            .copied()
                            .ok_or_else(|| Error::InvalidProblem(format!("act {name}: unknown consequence {l}")))
                    })
                    .collect::<Result<_>>()?;
                Ok(Act { name, outcomes })
            })
            .collect::<Result<_>>()?;
        Self::new(states, consequences, acts)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn consequences(&self) -> &[String] {
        &self.consequences
    }

    pub fn acts(&self) -> &[Act] {
        &self.acts
    }

    pub fn act_names(&self) -> Vec<String> {
        self.acts.iter().map(|a| a.name.clone()).collect()
    }

    pub fn act_index(&self, name: &str) -> Result<usize> {
        self.acts
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownAct(name.to_string()))
    }

    pub fn act(&self, i: usize) -> Result<&Act> {
        self.acts.get(i).ok_or_else(|| Error::UnknownAct(format!("#{i}")))
    }

    /// Index of the consequence the act yields in every state, if constant.
    pub fn constant_consequence(&self, i: usize) -> Option<usize> {
        let act = self.acts.get(i)?;
        let first = *act.outcomes.first()?;
        act.outcomes.iter().all(|&c| c == first).then_some(first)
    }
}

/// The expectation domain and plausibility measure of a plausibilistic problem.
#[derive(Clone, Debug)]
pub struct PlausibilisticPart {
    pub expectation: ExpectationDomain,
    pub measure: PlausibilityMeasure,
}

/// `(𝒜, U, u)` or `(𝒜, E, u, Pl)`.
#[derive(Clone, Debug)]
pub struct DecisionProblem {
    situation: DecisionSituation,
    u_domain: Domain,
    utility: Vec<Value>,
    plaus: Option<PlausibilisticPart>,
}

/// `u_a`, indexed by state.
pub type UtilityRv = Vec<Value>;

/// `u ↦ Pl(u_a⁻¹(u))` over `ran(u_a)`.
pub type UtilityLottery = BTreeMap<Value, Value>;

impl DecisionProblem {
    pub fn nonplausibilistic(situation: DecisionSituation, u_domain: Domain, utility: Vec<Value>) -> Result<Self> {
        check_utility(&situation, &u_domain, &utility)?;
        Ok(DecisionProblem { situation, u_domain, utility, plaus: None })
    }

    /// The measure is re-validated against the expectation domain's `P`.
    pub fn plausibilistic(
        situation: DecisionSituation,
        expectation: ExpectationDomain,
        utility: Vec<Value>,
        measure: PlausibilityMeasure,
    ) -> Result<Self> {
        let u_domain = expectation.u_domain().clone();
        check_utility(&situation, &u_domain, &utility)?;
        if measure.states() != situation.states() {
            return Err(Error::InvalidProblem("measure states differ from situation states".into()));
        }
        let measure = make_plausibility_measure(measure.states().to_vec(), measure.values().to_vec(), expectation.p_domain())?;
        Ok(DecisionProblem { situation, u_domain, utility, plaus: Some(PlausibilisticPart { expectation, measure }) })
    }

    pub fn situation(&self) -> &DecisionSituation {
        &self.situation
    }

    pub fn u_domain(&self) -> &Domain {
        &self.u_domain
    }

    pub fn utility(&self) -> &[Value] {
        &self.utility
    }

    pub fn plausibilistic_part(&self) -> Option<&PlausibilisticPart> {
        self.plaus.as_ref()
    }

    pub fn is_plausibilistic(&self) -> bool {
        self.plaus.is_some()
    }

    pub fn acts(&self) -> &[Act] {
        self.situation.acts()
    }

    pub fn act_names(&self) -> Vec<String> {
        self.situation.act_names()
    }

    /// The same problem with the plausibilistic part dropped.
    pub fn without_plausibility(&self) -> DecisionProblem {
        DecisionProblem { plaus: None, ..self.clone() }
    }

    fn part(&self) -> Result<&PlausibilisticPart> {
        self.plaus.as_ref().ok_or(Error::NotPlausibilistic)
    }

    pub fn expectation(&self) -> Result<&ExpectationDomain> {
        Ok(&self.part()?.expectation)
    }

    pub fn measure(&self) -> Result<&PlausibilityMeasure> {
        Ok(&self.part()?.measure)
    }

    /// `u_a(s) = u(a(s))`.
    pub fn utility_rv(&self, act: usize) -> Result<UtilityRv> {
        let act = self.situation.act(act)?;
        Ok(act.outcomes.iter().map(|&c| self.utility[c].clone()).collect())
    }

    /// `u_a⁻¹(x)` for each `x ∈ ran(u_a)`, as state bitmasks.
    pub fn preimages(&self, act: usize) -> Result<BTreeMap<Value, StateSet>> {
        let mut out: BTreeMap<Value, StateSet> = BTreeMap::new();
        for (s, u) in self.utility_rv(act)?.into_iter().enumerate() {
            *out.entry(u).or_insert(0) |= 1 << s;
        }
        Ok(out)
    }

    pub fn utility_lottery(&self, act: usize) -> Result<UtilityLottery> {
        let pl = &self.part()?.measure;
        Ok(self.preimages(act)?.into_iter().map(|(u, mask)| (u, pl.get(mask).clone())).collect())
    }

    /// `⊕_{x ∈ ran(u_a)} Pl(u_a⁻¹(x)) ⊗ x`, folded in ascending canonical order of `x`.
    pub fn geu(&self, act: usize) -> Result<Value> {
        let part = self.part()?;
        let e = &part.expectation;
        let terms: Vec<Value> = self
            .preimages(act)?
            .into_iter()
            .map(|(x, mask)| e.otimes(part.measure.get(mask), &x))
            .collect::<Result<_>>()?;
        e.sum(&terms)
    }

    /// The atoms of the probability measure if the problem is standard.
    pub fn standard_probability(&self) -> Result<Vec<Rational>> {
        let part = self.part().map_err(|_| Error::NotStandard("problem is not plausibilistic".into()))?;
        if !is_standard_domain(&part.expectation) {
            return Err(Error::NotStandard(format!("expectation domain {} is not standard", part.expectation.name())));
        }
        if let Some(u) = self.utility.iter().find(|u| u.as_rational().is_none()) {
            return Err(Error::NotStandard(format!("utility {u} is not rational")));
        }
        part.measure
            .as_probability()
            .ok_or_else(|| Error::NotStandard("measure is not an additive probability".into()))
    }

    /// `Σ_x Pr(u_a⁻¹(x)) · x` in exact rationals.
    pub fn standard_eu(&self, act: usize) -> Result<Rational> {
        let atoms = self.standard_probability()?;
        Ok(standard_eu_with(&atoms, &self.utility_rv(act)?))
    }

    /// Whether `a1 ~ a2`: equal utility lotteries (plausibilistic) or equal
    /// utility random variables (otherwise).
    pub fn indistinguishable(&self, a1: usize, a2: usize) -> Result<bool> {
        if self.is_plausibilistic() {
            Ok(self.utility_lottery(a1)? == self.utility_lottery(a2)?)
        } else {
            Ok(self.utility_rv(a1)? == self.utility_rv(a2)?)
        }
    }
}

/// Expected value of a rational random variable under rational atoms.
pub fn standard_eu_with(atoms: &[Rational], rv: &[Value]) -> Rational {
    atoms
        .iter()
        .zip(rv)
        .map(|(p, u)| p * u.as_rational().expect("rational utility"))
        .fold(Rational::zero(), |acc, x| acc + x)
}

/// Structural recognition of `(ℝ, [0,1], ℝ, +, ×)`.
pub fn is_standard_domain(e: &ExpectationDomain) -> bool {
    *e.p_domain() == Domain::unit_interval()
        && matches!(e.otimes_op(), Otimes::Multiply)
        && matches!(e.oplus_op(), Oplus::Add)
        && *e.embedding() == Embed::Identity
        && e.v_domain().is_numeric()
}

fn check_utility(situation: &DecisionSituation, u_domain: &Domain, utility: &[Value]) -> Result<()> {
    if utility.len() != situation.consequences().len() {
        return Err(Error::InvalidProblem("utility must be defined on every consequence".into()));
    }
    if let Some((c, u)) = situation.consequences().iter().zip(utility).find(|(_, u)| !u_domain.contains(u)) {
        return Err(Error::InvalidProblem(format!("u({c}) = {u} is outside the utility domain")));
    }
    Ok(())
}

/// A binary relation on a list of act names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferenceRelation {
    universe: Vec<String>,
    matrix: Vec<bool>,
}

impl PreferenceRelation {
    pub fn empty(universe: Vec<String>) -> Self {
        let n = universe.len();
        PreferenceRelation { universe, matrix: vec![false; n * n] }
    }

    /// `(i, j)` is in the relation iff `f(i, j)`.
    pub fn from_fn(universe: Vec<String>, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let n = universe.len();
        let matrix = (0..n * n).map(|k| f(k / n, k % n)).collect();
        PreferenceRelation { universe, matrix }
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    /// `a_i ≼ a_j`.
    pub fn holds(&self, i: usize, j: usize) -> bool {
        self.matrix[i * self.len() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let n = self.len();
        self.matrix[i * n + j] = value;
    }

    /// `a_i ≺ a_j`.
    pub fn strictly(&self, i: usize, j: usize) -> bool {
        self.holds(i, j) && !self.holds(j, i)
    }

    pub fn pairs(&self) -> Vec<(String, String)> {
        let n = self.len();
        (0..n * n)
            .filter(|&k| self.matrix[k])
            .map(|k| (self.universe[k / n].clone(), self.universe[k % n].clone()))
            .collect()
    }

    fn index(&self) -> BTreeMap<&str, usize> {
        self.universe.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|i| self.holds(i, i))
    }

    pub fn is_complete(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| self.holds(i, j) || self.holds(j, i)))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            (0..n).all(|j| !self.holds(i, j) || (0..n).all(|k| !self.holds(j, k) || self.holds(i, k)))
        })
    }
}

/// Set equality of the pairs of two relations over the same act universe.
pub fn relation_equal(r1: &PreferenceRelation, r2: &PreferenceRelation) -> Result<bool> {
    let (i1, i2) = (r1.index(), r2.index());
    if i1.len() != r1.len() || !i1.keys().eq(i2.keys()) {
        return Err(Error::UniverseMismatch);
    }
    Ok(i1.iter().all(|(a, &x)| {
        i1.iter().all(|(b, &y)| r1.holds(x, y) == r2.holds(i2[a], i2[b]))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{beldr, labels, r, uniform_beldr};

    #[test]
    fn utility_rvs_of_example_acts() {
        let d = beldr();
        assert_eq!(d.utility_rv(0).unwrap(), vec![Value::int(1), Value::int(2), Value::int(3)]);
        assert_eq!(d.utility_rv(1).unwrap(), vec![Value::int(3), Value::int(2), Value::int(1)]);
        assert!(matches!(d.utility_rv(7), Err(Error::UnknownAct(_))));
    }

    #[test]
    fn utility_lotteries_under_bel_and_uniform() {
        let d = beldr();
        let lottery = d.utility_lottery(0).unwrap();
        assert_eq!(lottery.len(), 3);
        assert!(lottery.values().all(|p| *p == Value::zero()));
        assert!(d.indistinguishable(0, 1).unwrap());

        let u = uniform_beldr();
        let third = Value::ratio(1, 3);
        assert!(u.utility_lottery(0).unwrap().values().all(|p| *p == third));
        assert!(u.indistinguishable(0, 1).unwrap());
        assert!(matches!(d.without_plausibility().utility_lottery(0), Err(Error::NotPlausibilistic)));
    }

    #[test]
    fn geu_matches_standard_eu_on_uniform() {
        let u = uniform_beldr();
        // Oracle: (1 + 2 + 3) / 3.
        assert_eq!(u.geu(0).unwrap(), Value::int(2));
        assert_eq!(u.standard_eu(0).unwrap(), r(2, 1));
        assert!(matches!(beldr().standard_eu(0), Err(Error::NotStandard(_))));
    }

    #[test]
    fn point_mass_eu_is_degenerate() {
        let situation = beldr().situation().clone();
        let pl = PlausibilityMeasure::probability(labels(&["s1", "s2", "s3"]), &[r(1, 1), r(0, 1), r(0, 1)]).unwrap();
        let d = DecisionProblem::plausibilistic(
            situation,
            ExpectationDomain::standard(),
            vec![Value::int(1), Value::int(2), Value::int(3)],
            pl,
        )
        .unwrap();
        assert_eq!(d.standard_eu(1).unwrap(), r(3, 1));
    }

    #[test]
    fn relation_equality_is_by_name() {
        let names = labels(&["a", "b"]);
        let r1 = PreferenceRelation::from_fn(names.clone(), |i, j| i == 0 && j == 1);
        let r2 = PreferenceRelation::from_fn(names.clone(), |i, j| i == 1 && j == 0);
        assert!(relation_equal(&r1, &r1).unwrap());
        assert!(!relation_equal(&r1, &r2).unwrap());
        let swapped = PreferenceRelation::from_fn(labels(&["b", "a"]), |i, j| i == 1 && j == 0);
        assert!(relation_equal(&r1, &swapped).unwrap());
        let other = PreferenceRelation::empty(labels(&["a", "c"]));
        assert!(matches!(relation_equal(&r1, &other), Err(Error::UniverseMismatch)));
    }

    #[test]
    fn empty_act_list_rejected() {
        let err = DecisionSituation::new(labels(&["s"]), labels(&["c"]), vec![]).unwrap_err();
        assert!(matches!(err, Error::InvalidProblem(_)));
    }
}
