//! Comparing decision problems and representing decision rules as GEU.
//!
//! Besides the predicates (congruence, similarity, indistinguishability,
//! uniformity, respect for utility) this module holds the concrete
//! transformations for maximin, minimax regret and maxmin EU, and the two
//! generic constructions: [`represent_uniform`] for uniform rules that
//! respect utility (the result is congruent) and [`represent_ordinal`] for
//! rules that weakly respect utility (the result is only similar).

use std::collections::{BTreeMap, BTreeSet};

use crate::domain::{BuiltinKind, Carrier, Domain, Order};
use crate::error::{Error, Result};
use crate::expectation::{Embed, ExpectationDomain, Oplus, Otimes};
use crate::model::{DecisionProblem, PreferenceRelation};
use crate::plausibility::{members, subset_value, PlausibilityMeasure, StateSet};
use crate::rules::{regret_table, DecisionRule, Maximin, Mmeu};
use crate::value::{numeric_cmp, numeric_sub, Value};

/// Tolerance on the valuation order of the regret representation.
pub const REGRET_TOLERANCE: f64 = 1e-9;

/// A decision rule tabulated on one problem.
#[derive(Clone, Debug)]
pub struct RuleTable {
    problem: DecisionProblem,
    relation: PreferenceRelation,
}

impl RuleTable {
    /// The relation is re-indexed to the problem's act order.
    pub fn new(problem: DecisionProblem, relation: &PreferenceRelation) -> Result<Self> {
        let names = problem.act_names();
        let index: BTreeMap<&String, usize> = relation.universe().iter().enumerate().map(|(i, a)| (a, i)).collect();
        if index.len() != names.len() || names.iter().any(|a| !index.contains_key(a)) {
            return Err(Error::UniverseMismatch);
        }
        let ordered = PreferenceRelation::from_fn(names.clone(), |i, j| relation.holds(index[&names[i]], index[&names[j]]));
        Ok(RuleTable { problem, relation: ordered })
    }

    pub fn tabulate(rule: &dyn DecisionRule, problem: &DecisionProblem) -> Result<Self> {
        let relation = rule.relation(problem)?;
        Ok(RuleTable { problem: problem.clone(), relation })
    }

    pub fn problem(&self) -> &DecisionProblem {
        &self.problem
    }

    pub fn relation(&self) -> &PreferenceRelation {
        &self.relation
    }
}

pub fn indistinguishable(d: &DecisionProblem, a1: &str, a2: &str) -> Result<bool> {
    let situation = d.situation();
    d.indistinguishable(situation.act_index(a1)?, situation.act_index(a2)?)
}

/// Same situation, utility domain and utility; if both are plausibilistic,
/// also the same plausibility domain and measure.
pub fn congruent(d1: &DecisionProblem, d2: &DecisionProblem) -> bool {
    if d1.situation() != d2.situation() || d1.u_domain() != d2.u_domain() || d1.utility() != d2.utility() {
        return false;
    }
    match (d1.plausibilistic_part(), d2.plausibilistic_part()) {
        (Some(p1), Some(p2)) => p1.expectation.p_domain() == p2.expectation.p_domain() && p1.measure == p2.measure,
        _ => true,
    }
}

/// Same situation, ordinally equivalent utilities and, if both are
/// plausibilistic, ordinally equivalent measures over all pairs of subsets.
pub fn similar(d1: &DecisionProblem, d2: &DecisionProblem) -> bool {
    if d1.situation() != d2.situation() {
        return false;
    }
    let (u1, u2) = (d1.utility(), d2.utility());
    for i in 0..u1.len() {
        for j in 0..u1.len() {
            if d1.u_domain().leq(&u1[i], &u1[j]) != d2.u_domain().leq(&u2[i], &u2[j]) {
                return false;
            }
        }
    }
    match (d1.plausibilistic_part(), d2.plausibilistic_part()) {
        (Some(p1), Some(p2)) => {
            // The relation only depends on the pair of values, so compare
            // distinct (Pl1(X), Pl2(X)) pairs.
            let pairs: BTreeSet<(&Value, &Value)> = p1.measure.values().iter().zip(p2.measure.values()).collect();
            let (o1, o2) = (p1.expectation.p_domain(), p2.expectation.p_domain());
            pairs.iter().all(|(x1, x2)| pairs.iter().all(|(y1, y2)| o1.leq(x1, y1) == o2.leq(x2, y2)))
        }
        _ => true,
    }
}

fn utility_leq(d: &DecisionProblem, a: usize, b: usize) -> Result<(Value, Value, bool)> {
    let (ua, ub) = (d.utility_rv(a)?.swap_remove(0), d.utility_rv(b)?.swap_remove(0));
    let leq = d.u_domain().leq(&ua, &ub);
    Ok((ua, ub, leq))
}

fn constant_utility_acts(d: &DecisionProblem) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for a in 0..d.acts().len() {
        let rv = d.utility_rv(a)?;
        if rv.iter().all(|u| *u == rv[0]) {
            out.push(a);
        }
    }
    Ok(out)
}

fn check_utility_order(d: &DecisionProblem, rel: &PreferenceRelation, acts: &[usize]) -> Result<Option<(usize, usize)>> {
    for &a in acts {
        for &b in acts {
            if utility_leq(d, a, b)?.2 != rel.holds(a, b) {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// On every pair of constant-utility acts, `a ≼ b` iff `u_a ≼_U u_b`.
pub fn check_respects_utility(table: &RuleTable) -> Result<()> {
    let d = &table.problem;
    let acts = constant_utility_acts(d)?;
    match check_utility_order(d, &table.relation, &acts)? {
        Some((a, b)) => Err(Error::NotRespectingUtility(d.acts()[a].name.clone(), d.acts()[b].name.clone())),
        None => Ok(()),
    }
}

/// As [`check_respects_utility`] but only over constant acts.
pub fn check_weakly_respects_utility(table: &RuleTable) -> Result<()> {
    let d = &table.problem;
    let acts: Vec<usize> = (0..d.acts().len()).filter(|&a| d.situation().constant_consequence(a).is_some()).collect();
    match check_utility_order(d, &table.relation, &acts)? {
        Some((a, b)) => Err(Error::NotWeaklyRespectingUtility(d.acts()[a].name.clone(), d.acts()[b].name.clone())),
        None => Ok(()),
    }
}

pub fn respects_utility(table: &RuleTable) -> Result<bool> {
    lift_check(check_respects_utility(table))
}

pub fn weakly_respects_utility(table: &RuleTable) -> Result<bool> {
    lift_check(check_weakly_respects_utility(table))
}

pub fn is_uniform(table: &RuleTable) -> Result<bool> {
    lift_check(check_uniform(table))
}

fn lift_check(r: Result<()>) -> Result<bool> {
    match r {
        Ok(()) => Ok(true),
        Err(Error::NotRespectingUtility(..) | Error::NotWeaklyRespectingUtility(..) | Error::NotUniform { .. }) => {
            Ok(false)
        }
        Err(e) => Err(e),
    }
}

/// Indistinguishability class of each act (index of the class's first act).
pub fn indistinguishability_classes(d: &DecisionProblem) -> Result<Vec<usize>> {
    let n = d.acts().len();
    let mut class = vec![usize::MAX; n];
    for a in 0..n {
        if class[a] != usize::MAX {
            continue;
        }
        class[a] = a;
        for b in a + 1..n {
            if class[b] == usize::MAX && d.indistinguishable(a, b)? {
                class[b] = a;
            }
        }
    }
    Ok(class)
}

/// Whenever `a1 ~ b1` and `a2 ~ b2`: `a1 ≼ a2` iff `b1 ≼ b2`. The reported
/// witness prefers quadruples with `a1 ≠ a2` and `b1 ≠ b2`.
pub fn check_uniform(table: &RuleTable) -> Result<()> {
    let d = &table.problem;
    let rel = &table.relation;
    let class = &indistinguishability_classes(d)?;
    let n = class.len();
    let members_of = |a: usize| (0..n).filter(move |&b| class[b] == class[a]);
    let mut fallback = None;
    for a1 in 0..n {
        for a2 in 0..n {
            for b1 in members_of(a1) {
                for b2 in members_of(a2) {
                    if rel.holds(a1, a2) != rel.holds(b1, b2) {
                        if a1 != a2 && b1 != b2 {
                            return Err(not_uniform(d, a1, a2, b1, b2));
                        }
                        fallback.get_or_insert((a1, a2, b1, b2));
                    }
                }
            }
        }
    }
    match fallback {
        Some((a1, a2, b1, b2)) => Err(not_uniform(d, a1, a2, b1, b2)),
        None => Ok(()),
    }
}

fn not_uniform(d: &DecisionProblem, a1: usize, a2: usize, b1: usize, b2: usize) -> Error {
    let name = |i: usize| d.acts()[i].name.clone();
    Error::NotUniform { a1: name(a1), a2: name(a2), b1: name(b1), b2: name(b2) }
}

fn check_reflexive(table: &RuleTable) -> Result<()> {
    match (0..table.relation.len()).find(|&a| !table.relation.holds(a, a)) {
        Some(a) => Err(Error::NotReflexive(table.problem.acts()[a].name.clone())),
        None => Ok(()),
    }
}

/// E1–E4 on the probe set plus the utilities and plausibilities in use.
fn verify(e: &ExpectationDomain, d: &DecisionProblem, pl: &PlausibilityMeasure) -> Result<()> {
    e.verify_with(d.utility(), pl.values())
}

fn require_nonplausibilistic(d: &DecisionProblem, rule: &str) -> Result<()> {
    if d.is_plausibilistic() {
        return Err(Error::DomainMismatch(format!("{rule} is defined on nonplausibilistic problems")));
    }
    Ok(())
}

fn require_numeric_utility(d: &DecisionProblem) -> Result<()> {
    if !matches!(d.u_domain().carrier(), Carrier::Builtin(BuiltinKind::Rationals | BuiltinKind::Reals))
        || *d.u_domain().order() != Order::Numeric
    {
        return Err(Error::DomainMismatch("utility domain must be the rationals or reals".into()));
    }
    Ok(())
}

/// `τ(𝒟) = 𝒟`, the representation of EU.
pub fn tau_identity(d: &DecisionProblem) -> Result<DecisionProblem> {
    d.standard_probability().map_err(|e| Error::DomainMismatch(e.to_string()))?;
    Ok(d.clone())
}

/// `E_max` with `Pl_max(X) = 1` for nonempty `X`; GEU becomes the worst case.
pub fn tau_maximin(d: &DecisionProblem) -> Result<DecisionProblem> {
    require_nonplausibilistic(d, "maximin")?;
    require_numeric_utility(d)?;
    Maximin.applicable(d).map_err(|e| Error::DomainMismatch(e.to_string()))?;
    let e = ExpectationDomain::e_max(d.u_domain().clone())?;
    let pl = PlausibilityMeasure::from_fn(d.situation().states().to_vec(), e.p_domain(), |x| {
        if x == 0 {
            Value::zero()
        } else {
            Value::one()
        }
    })?;
    verify(&e, d, &pl)?;
    DecisionProblem::plausibilistic(d.situation().clone(), e, d.utility().to_vec(), pl)
}

/// `E_reg` with `Pl(X) = e^{M_X − M_S}`; GEU becomes `M_S − r̄(a)`.
pub fn tau_regret(d: &DecisionProblem) -> Result<DecisionProblem> {
    require_nonplausibilistic(d, "regret")?;
    require_numeric_utility(d)?;
    let table = regret_table(d).map_err(|e| Error::DomainMismatch(e.to_string()))?;
    let m_s = table.max_utility.clone();
    let best = table.best;
    let e = ExpectationDomain::e_reg(d.u_domain().clone(), REGRET_TOLERANCE);
    let pl = PlausibilityMeasure::from_fn(d.situation().states().to_vec(), e.p_domain(), |x| {
        if x == 0 {
            return Value::zero();
        }
        let m_x = members(x).map(|s| &best[s]).max_by(|a, b| numeric_cmp(a, b).expect("numeric")).expect("nonempty");
        if *m_x == m_s {
            Value::one()
        } else {
            let gap = numeric_sub(m_x, &m_s).and_then(|v| v.to_f64()).expect("finite");
            Value::Real(gap.exp())
        }
    })?;
    verify(&e, d, &pl)?;
    DecisionProblem::plausibilistic(d.situation().clone(), e, d.utility().to_vec(), pl)
}

/// `E_𝒫` over the credal measure's own plausibility domain.
pub fn tau_mmeu(d: &DecisionProblem) -> Result<DecisionProblem> {
    Mmeu.applicable(d).map_err(|e| Error::DomainMismatch(e.to_string()))?;
    require_numeric_utility(d)?;
    let part = d.plausibilistic_part().ok_or(Error::NotPlausibilistic)?;
    let e = ExpectationDomain::e_credal(d.u_domain().clone(), part.expectation.p_domain().clone())?;
    verify(&e, d, &part.measure)?;
    DecisionProblem::plausibilistic(d.situation().clone(), e, d.utility().to_vec(), part.measure.clone())
}

/// `(U, P, 2^{P×U}, ∪, p ⊗ u = {(p, u)})` with utilities embedded as
/// `{(⊤, u)}` and the given extra valuation pairs.
pub fn lottery_set_domain(u: Domain, p: Domain, listed: BTreeSet<(Value, Value)>) -> Result<ExpectationDomain> {
    let top = p.top().cloned().ok_or_else(|| Error::InvalidDomain("plausibility domain needs a top".into()))?;
    let embed = Embed::TopPair(top);
    let v = Domain::new(
        Carrier::Builtin(BuiltinKind::FiniteSetsOfValues),
        Order::EmbeddedOrListed { embed: embed.clone(), utility_order: Box::new(u.order().clone()), listed },
    )?;
    ExpectationDomain::assemble("lottery-sets", u, p, v, Otimes::SingletonPair, Oplus::Union, embed)
}

fn state_atoms(d: &DecisionProblem) -> Vec<Value> {
    d.situation().states().iter().map(|s| Value::sym(s.clone())).collect()
}

/// `P = (2^S, ⊆)` with `Pl(X) = X`.
fn identity_measure(d: &DecisionProblem) -> Result<(Domain, PlausibilityMeasure)> {
    let atoms = state_atoms(d);
    let p = Domain::subsets(atoms);
    let states = d.situation().states().to_vec();
    let pl = PlausibilityMeasure::from_fn(states.clone(), &p, |x| subset_value(&states, x))?;
    Ok((p, pl))
}

fn listed_pairs(rel: &PreferenceRelation, images: &[Value]) -> BTreeSet<(Value, Value)> {
    let n = images.len();
    (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| rel.holds(a, b))
        .map(|(a, b)| (images[a].clone(), images[b].clone()))
        .collect()
}

/// The set `{(s, u_a(s)) : s ∈ S}` for utilities `utility`.
fn graph(d: &DecisionProblem, act: usize, utility: &[Value]) -> Result<Value> {
    let act = d.situation().act(act)?;
    Ok(Value::set(
        d.situation()
            .states()
            .iter()
            .zip(&act.outcomes)
            .map(|(s, &c)| Value::pair(Value::sym(s.clone()), utility[c].clone())),
    ))
}

/// A congruent problem whose GEU reproduces a uniform table that respects
/// utility. GEU evaluates to the graph of `u_a` (nonplausibilistic input) or
/// to the utility lottery as a set of `(plausibility, utility)` pairs.
pub fn represent_uniform(table: &RuleTable) -> Result<DecisionProblem> {
    check_uniform(table)?;
    check_respects_utility(table)?;
    check_reflexive(table)?;
    let d = &table.problem;
    let n = d.acts().len();
    match d.plausibilistic_part() {
        None => {
            let (p, pl) = identity_measure(d)?;
            let images: Vec<Value> = (0..n).map(|a| graph(d, a, d.utility())).collect::<Result<_>>()?;
            let embed = Embed::StateGraph(state_atoms(d));
            let v = Domain::new(
                Carrier::Builtin(BuiltinKind::FiniteSetsOfValues),
                Order::EmbeddedOrListed {
                    embed: embed.clone(),
                    utility_order: Box::new(d.u_domain().order().clone()),
                    listed: listed_pairs(&table.relation, &images),
                },
            )?;
            let e = ExpectationDomain::assemble("uniform-graphs", d.u_domain().clone(), p, v, Otimes::SetTimes, Oplus::Union, embed)?;
            verify(&e, d, &pl)?;
            DecisionProblem::plausibilistic(d.situation().clone(), e, d.utility().to_vec(), pl)
        }
        Some(part) => {
            let images: Vec<Value> = (0..n)
                .map(|a| {
                    Ok(Value::set(d.utility_lottery(a)?.into_iter().map(|(u, p)| Value::pair(p, u))))
                })
                .collect::<Result<_>>()?;
            let e = lottery_set_domain(
                d.u_domain().clone(),
                part.expectation.p_domain().clone(),
                listed_pairs(&table.relation, &images),
            )?;
            verify(&e, d, &part.measure)?;
            DecisionProblem::plausibilistic(d.situation().clone(), e, d.utility().to_vec(), part.measure.clone())
        }
    }
}

/// A similar problem whose GEU reproduces a table that weakly respects
/// utility. Utilities become `(u(c), c)` and plausibilities `(Pl(X), X)`,
/// both ordered by their first component; GEU evaluates to the set
/// `{(s, (u(a(s)), a(s)))}`.
pub fn represent_ordinal(table: &RuleTable) -> Result<DecisionProblem> {
    check_weakly_respects_utility(table)?;
    check_reflexive(table)?;
    let d = &table.problem;
    let situation = d.situation();
    let cons: Vec<Value> = situation.consequences().iter().map(|c| Value::sym(c.clone())).collect();
    let u2 = Domain::new(
        Carrier::Product(Box::new(d.u_domain().carrier().clone()), Box::new(Carrier::Finite(cons.clone()))),
        Order::FirstComponent(Box::new(d.u_domain().order().clone())),
    )?;
    let utility2: Vec<Value> = d.utility().iter().zip(&cons).map(|(u, c)| Value::pair(u.clone(), c.clone())).collect();
    let states = situation.states().to_vec();
    let atoms = state_atoms(d);
    let (p2, pl2) = match d.plausibilistic_part() {
        None => identity_measure(d)?,
        Some(part) => {
            let p1 = part.expectation.p_domain();
            let p2 = Domain::plausibility(
                Carrier::Product(
                    Box::new(p1.carrier().clone()),
                    Box::new(Carrier::Builtin(BuiltinKind::Subsets(atoms.clone()))),
                ),
                Order::FirstComponent(Box::new(p1.order().clone())),
                Value::pair(part.expectation.bottom().clone(), Value::set([])),
                Value::pair(part.expectation.top().clone(), Value::set(atoms.iter().cloned())),
            )?;
            let pl2 = PlausibilityMeasure::from_fn(states.clone(), &p2, |x: StateSet| {
                Value::pair(part.measure.get(x).clone(), subset_value(&states, x))
            })?;
            (p2, pl2)
        }
    };
    let n = d.acts().len();
    let images: Vec<Value> = (0..n).map(|a| graph(d, a, &utility2)).collect::<Result<_>>()?;
    let embed = Embed::StateGraph(atoms);
    let v = Domain::new(
        Carrier::Builtin(BuiltinKind::FiniteSetsOfValues),
        Order::EmbeddedOrListed {
            embed: embed.clone(),
            utility_order: Box::new(u2.order().clone()),
            listed: listed_pairs(&table.relation, &images),
        },
    )?;
    let e = ExpectationDomain::assemble("ordinal-graphs", u2, p2, v, Otimes::SetTimes, Oplus::Union, embed)?;
    e.verify_with(&utility2, pl2.values())?;
    DecisionProblem::plausibilistic(situation.clone(), e, utility2, pl2)
}

/// Whether a transformation promises congruent or only similar output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Congruent,
    Ordinal,
}

/// The named transformations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transformation {
    IdEu,
    Maximin,
    Regret,
    Mmeu,
    Thm2,
    Thm3,
}

impl Transformation {
    pub const ALL: [Transformation; 6] = [
        Transformation::IdEu,
        Transformation::Maximin,
        Transformation::Regret,
        Transformation::Mmeu,
        Transformation::Thm2,
        Transformation::Thm3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Transformation::IdEu => "id-eu",
            Transformation::Maximin => "maximin",
            Transformation::Regret => "regret",
            Transformation::Mmeu => "mmeu",
            Transformation::Thm2 => "thm2",
            Transformation::Thm3 => "thm3",
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == name)
    }

    pub fn mode(self) -> Mode {
        match self {
            Transformation::Thm3 => Mode::Ordinal,
            _ => Mode::Congruent,
        }
    }

    /// The rule a fixed transformation represents; `None` for the generic ones.
    pub fn rule_name(self) -> Option<&'static str> {
        match self {
            Transformation::IdEu => Some("eu"),
            Transformation::Maximin => Some("maximin"),
            Transformation::Regret => Some("regret"),
            Transformation::Mmeu => Some("mmeu"),
            Transformation::Thm2 | Transformation::Thm3 => None,
        }
    }

    /// Applies the transformation; the fixed ones ignore the table's relation.
    pub fn apply(self, table: &RuleTable) -> Result<DecisionProblem> {
        let d = table.problem();
        match self {
            Transformation::IdEu => tau_identity(d),
            Transformation::Maximin => tau_maximin(d),
            Transformation::Regret => tau_regret(d),
            Transformation::Mmeu => tau_mmeu(d),
            Transformation::Thm2 => represent_uniform(table),
            Transformation::Thm3 => represent_ordinal(table),
        }
    }
}
