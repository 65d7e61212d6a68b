//! Lotteries: plausibility measures over consequences, the decision problems
//! built on them, and the translation between acts and lotteries in both
//! directions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::expectation::ExpectationDomain;
use crate::model::{Act, DecisionProblem, DecisionSituation, PreferenceRelation};
use crate::plausibility::{make_plausibility_measure, members, PlausibilityMeasure, StateSet, MAX_STATES};
use crate::rules::{DecisionRule, Evaluation};
use crate::value::{format_rational, Rational, Value};

/// A simple lottery: a plausibility measure on the subsets of its support.
/// The support is kept sorted by label, so structurally equal lotteries
/// compare equal regardless of how they were written down.
#[derive(Clone, Debug, PartialEq)]
pub struct Lottery {
    name: String,
    measure: PlausibilityMeasure,
}

impl Lottery {
    /// `values` is indexed by subset mask over `support` in the given order.
    pub fn new(name: impl Into<String>, support: Vec<String>, values: Vec<Value>, p: &Domain) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidProblem("lottery with empty support".into()));
        }
        let mut order: Vec<usize> = (0..support.len()).collect();
        order.sort_by(|&a, &b| support[a].cmp(&support[b]));
        let sorted: Vec<String> = order.iter().map(|&i| support[i].clone()).collect();
        let table = if values.len() == 1 << support.len() {
            (0..values.len() as StateSet)
                .map(|mask| {
                    let original = members(mask).fold(0, |acc, k| acc | 1 << order[k]);
                    values[original as usize].clone()
                })
                .collect()
        } else {
            values
        };
        let measure = make_plausibility_measure(sorted, table, p)?;
        Ok(Lottery { name: name.into(), measure })
    }

    /// The lottery with `ℓ({c}) = ⊤` on a single consequence.
    pub fn degenerate(name: impl Into<String>, c: &str, p: &Domain) -> Result<Self> {
        let (bottom, top) = match (p.bottom(), p.top()) {
            (Some(b), Some(t)) => (b.clone(), t.clone()),
            _ => return Err(Error::InvalidDomain("plausibility domain needs bottom and top".into())),
        };
        Lottery::new(name, vec![c.to_string()], vec![bottom, top], p)
    }

    /// An additive lottery into `[0,1]` from its atoms.
    pub fn standard(name: impl Into<String>, support: Vec<String>, atoms: &[Rational]) -> Result<Self> {
        let name = name.into();
        let measure = PlausibilityMeasure::probability(support.clone(), atoms)
            .map_err(|_| Error::NotAProbability(name.clone()))?;
        Lottery::new(name, support, measure.values().to_vec(), &Domain::unit_interval())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn support(&self) -> &[String] {
        self.measure.states()
    }

    pub fn measure(&self) -> &PlausibilityMeasure {
        &self.measure
    }

    /// `ℓ(Y)` for `Y` given as a mask over the sorted support.
    pub fn get(&self, mask: StateSet) -> &Value {
        self.measure.get(mask)
    }

    /// `ℓ({c})`.
    pub fn atom(&self, c: &str) -> Option<&Value> {
        let i = self.support().iter().position(|x| x == c)?;
        Some(self.get(1 << i))
    }

    /// Equality of support and assignment, ignoring names.
    pub fn same_as(&self, other: &Lottery) -> bool {
        self.measure == other.measure
    }

    /// Atoms if the lottery is an additive rational measure.
    pub fn as_probability(&self) -> Option<Vec<Rational>> {
        self.measure.as_probability()
    }
}

/// `(L, C, P)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LotterySituation {
    lotteries: Vec<Lottery>,
    consequences: Vec<String>,
    p_domain: Domain,
}

impl LotterySituation {
    /// Lotteries are re-validated against `p_domain`; names and
    /// assignments must both be distinct.
    pub fn new(lotteries: Vec<Lottery>, consequences: Vec<String>, p_domain: Domain) -> Result<Self> {
        if lotteries.is_empty() {
            return Err(Error::InvalidProblem("no lotteries".into()));
        }
        let known: BTreeSet<&String> = consequences.iter().collect();
        if known.len() != consequences.len() {
            return Err(Error::InvalidProblem("duplicate consequence labels".into()));
        }
        let names: BTreeSet<&str> = lotteries.iter().map(|l| l.name()).collect();
        if names.len() != lotteries.len() {
            return Err(Error::InvalidProblem("duplicate lottery names".into()));
        }
        for (i, l) in lotteries.iter().enumerate() {
            if let Some(c) = l.support().iter().find(|c| !known.contains(c)) {
                return Err(Error::InvalidProblem(format!("lottery {}: unknown consequence {c}", l.name())));
            }
            make_plausibility_measure(l.support().to_vec(), l.measure.values().to_vec(), &p_domain)?;
            if lotteries[..i].iter().any(|m| m.same_as(l)) {
                return Err(Error::InvalidProblem(format!("lottery {} duplicates an earlier lottery", l.name())));
            }
        }
        Ok(LotterySituation { lotteries, consequences, p_domain })
    }

    pub fn lotteries(&self) -> &[Lottery] {
        &self.lotteries
    }

    pub fn consequences(&self) -> &[String] {
        &self.consequences
    }

    pub fn p_domain(&self) -> &Domain {
        &self.p_domain
    }

    pub fn lottery_index(&self, name: &str) -> Result<usize> {
        self.lotteries
            .iter()
            .position(|l| l.name() == name)
            .ok_or_else(|| Error::UnknownLottery(name.to_string()))
    }

    pub fn names(&self) -> Vec<String> {
        self.lotteries.iter().map(|l| l.name().to_string()).collect()
    }

    /// Whether every lottery is an additive rational measure.
    pub fn is_standard(&self) -> bool {
        self.lotteries.iter().all(|l| l.as_probability().is_some())
    }
}

/// `(ℒ, E, u)`.
#[derive(Clone, Debug)]
pub struct LotteryProblem {
    situation: LotterySituation,
    expectation: ExpectationDomain,
    utility: Vec<Value>,
}

impl LotteryProblem {
    pub fn new(situation: LotterySituation, expectation: ExpectationDomain, utility: Vec<Value>) -> Result<Self> {
        if expectation.p_domain() != situation.p_domain() {
            return Err(Error::DomainMismatch("expectation domain and lotteries use different plausibility domains".into()));
        }
        if utility.len() != situation.consequences().len() {
            return Err(Error::InvalidProblem("utility must be defined on every consequence".into()));
        }
        if let Some(u) = utility.iter().find(|u| !expectation.u_domain().contains(u)) {
            return Err(Error::InvalidProblem(format!("utility {u} is outside the utility domain")));
        }
        Ok(LotteryProblem { situation, expectation, utility })
    }

    pub fn situation(&self) -> &LotterySituation {
        &self.situation
    }

    pub fn expectation(&self) -> &ExpectationDomain {
        &self.expectation
    }

    pub fn utility(&self) -> &[Value] {
        &self.utility
    }

    pub fn utility_of(&self, c: &str) -> Result<&Value> {
        let i = self
            .situation
            .consequences()
            .iter()
            .position(|x| x == c)
            .ok_or_else(|| Error::InvalidProblem(format!("unknown consequence {c}")))?;
        Ok(&self.utility[i])
    }

    /// `⊕_{c ∈ supp(ℓ)} ℓ({c}) ⊗ u(c)`, folded in ascending order of `(u(c), c)`.
    pub fn lottery_geu(&self, name: &str) -> Result<Value> {
        let l = &self.situation.lotteries()[self.situation.lottery_index(name)?];
        lottery_expectation(&self.expectation, l, |c| self.utility_of(c).cloned())
    }

    /// `Σ_c ℓ({c}) · u(c)` in exact rationals.
    pub fn lottery_standard_eu(&self, name: &str) -> Result<Rational> {
        let l = &self.situation.lotteries()[self.situation.lottery_index(name)?];
        let atoms = l.as_probability().ok_or_else(|| Error::NotStandard(format!("lottery {name} is not additive")))?;
        l.support().iter().zip(atoms).try_fold(Rational::zero(), |acc, (c, p)| {
            let u = self.utility_of(c)?;
            let u = u.as_rational().ok_or_else(|| Error::NonNumericUtility(u.clone()))?;
            Ok(acc + p * u)
        })
    }
}

/// Lottery GEU against an arbitrary expectation domain and utility lookup.
pub(crate) fn lottery_expectation(
    e: &ExpectationDomain,
    l: &Lottery,
    utility: impl Fn(&str) -> Result<Value>,
) -> Result<Value> {
    let mut terms: Vec<(Value, &String, StateSet)> = l
        .support()
        .iter()
        .enumerate()
        .map(|(i, c)| Ok((utility(c)?, c, 1 << i)))
        .collect::<Result<_>>()?;
    terms.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    let products: Vec<Value> = terms.iter().map(|(u, _, m)| e.otimes(l.get(*m), u)).collect::<Result<_>>()?;
    e.sum(&products)
}

/// A decision situation with a plausibility measure on its states.
#[derive(Clone, Debug, PartialEq)]
pub struct PlausibilisticSituation {
    situation: DecisionSituation,
    p_domain: Domain,
    measure: PlausibilityMeasure,
}

impl PlausibilisticSituation {
    pub fn new(situation: DecisionSituation, p_domain: Domain, measure: PlausibilityMeasure) -> Result<Self> {
        if measure.states() != situation.states() {
            return Err(Error::InvalidProblem("measure states differ from situation states".into()));
        }
        let measure = make_plausibility_measure(measure.states().to_vec(), measure.values().to_vec(), &p_domain)?;
        Ok(PlausibilisticSituation { situation, p_domain, measure })
    }

    /// The situation underlying a plausibilistic problem.
    pub fn of_problem(d: &DecisionProblem) -> Result<Self> {
        let part = d.plausibilistic_part().ok_or(Error::NotPlausibilistic)?;
        Ok(PlausibilisticSituation {
            situation: d.situation().clone(),
            p_domain: part.expectation.p_domain().clone(),
            measure: part.measure.clone(),
        })
    }

    pub fn situation(&self) -> &DecisionSituation {
        &self.situation
    }

    pub fn p_domain(&self) -> &Domain {
        &self.p_domain
    }

    pub fn measure(&self) -> &PlausibilityMeasure {
        &self.measure
    }

    /// `ℓ_a(Y) = Pl(a⁻¹(Y))` over `ran(a)`, named after the act.
    pub fn induce_lottery(&self, act: usize) -> Result<Lottery> {
        let a = self.situation.act(act)?;
        let range: Vec<usize> = a.outcomes.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let preimage = |c: usize| -> StateSet {
            a.outcomes.iter().enumerate().filter(|(_, &x)| x == c).fold(0, |acc, (s, _)| acc | 1 << s)
        };
        let pre: Vec<StateSet> = range.iter().map(|&c| preimage(c)).collect();
        let values = (0..1u64 << range.len())
            .map(|y| self.measure.get(members(y).fold(0, |acc, k| acc | pre[k])).clone())
            .collect();
        let support = range.iter().map(|&c| self.situation.consequences()[c].clone()).collect();
        Lottery::new(a.name.clone(), support, values, &self.p_domain)
    }

    /// The induced lottery situation; acts inducing the same lottery collapse
    /// into one, named after the first such act.
    pub fn induce_situation(&self) -> Result<LotterySituation> {
        let mut lotteries: Vec<Lottery> = Vec::new();
        for a in 0..self.situation.acts().len() {
            let l = self.induce_lottery(a)?;
            if !lotteries.iter().any(|m| m.same_as(&l)) {
                lotteries.push(l);
            }
        }
        LotterySituation::new(lotteries, self.situation.consequences().to_vec(), self.p_domain.clone())
    }

    /// Index into the induced situation's lotteries for each act.
    fn induced_indices(&self, induced: &LotterySituation) -> Result<Vec<usize>> {
        (0..self.situation.acts().len())
            .map(|a| {
                let l = self.induce_lottery(a)?;
                Ok(induced.lotteries().iter().position(|m| m.same_as(&l)).expect("induced lottery present"))
            })
            .collect()
    }
}

/// A plausibilistic situation inducing exactly the given lotteries: states
/// are the choice functions `f` with `f(ℓ) ∈ supp(ℓ)`, the act for `ℓ` is
/// `f ↦ f(ℓ)`, and `Pl(Y)` is `⊥`, `ℓ(Z)` or `⊤` according to how many
/// lotteries have a whole fibre inside `Y`.
pub fn construct_situation(ls: &LotterySituation) -> Result<PlausibilisticSituation> {
    let lotteries = ls.lotteries();
    let size = lotteries.iter().try_fold(1usize, |acc, l| acc.checked_mul(l.support().len()));
    let size = match size {
        Some(n) if n <= MAX_STATES => n,
        Some(n) => return Err(Error::TooLarge(n, MAX_STATES)),
        None => return Err(Error::TooLarge(usize::MAX, MAX_STATES)),
    };
    // choice[f][k] indexes into the support of lottery k.
    let mut choice: Vec<Vec<usize>> = vec![Vec::new()];
    for l in lotteries {
        choice = choice
            .into_iter()
            .flat_map(|f| {
                (0..l.support().len()).map(move |c| {
                    let mut g = f.clone();
                    g.push(c);
                    g
                })
            })
            .collect();
    }
    debug_assert_eq!(choice.len(), size);
    let states: Vec<String> = choice
        .iter()
        .map(|f| {
            let parts: Vec<&str> = f.iter().zip(lotteries).map(|(&c, l)| l.support()[c].as_str()).collect();
            format!("f({})", parts.join(", "))
        })
        .collect();
    let cons_index: BTreeMap<&String, usize> = ls.consequences().iter().enumerate().map(|(i, c)| (c, i)).collect();
    let acts: Vec<Act> = lotteries
        .iter()
        .enumerate()
        .map(|(k, l)| Act {
            name: l.name().to_string(),
            outcomes: choice.iter().map(|f| cons_index[&l.support()[f[k]]]).collect(),
        })
        .collect();
    // fibre[k][c] = states where lottery k's act yields its c-th support element.
    let fibre: Vec<Vec<StateSet>> = lotteries
        .iter()
        .enumerate()
        .map(|(k, l)| {
            (0..l.support().len())
                .map(|c| choice.iter().enumerate().filter(|(_, f)| f[k] == c).fold(0, |acc, (s, _)| acc | 1 << s))
                .collect()
        })
        .collect();
    let p = ls.p_domain();
    let (bottom, top) = (p.bottom().expect("plausibility domain").clone(), p.top().expect("plausibility domain").clone());
    let measure = PlausibilityMeasure::from_fn(states.clone(), p, |y| {
        let mut hits = lotteries.iter().enumerate().filter_map(|(k, _)| {
            let z: StateSet = fibre[k].iter().enumerate().filter(|(_, &x)| x & !y == 0).fold(0, |acc, (c, _)| acc | 1 << c);
            (z != 0).then_some((k, z))
        });
        match (hits.next(), hits.next()) {
            (None, _) => bottom.clone(),
            (Some((k, z)), None) => lotteries[k].get(z).clone(),
            (Some(_), Some(_)) => top.clone(),
        }
    })?;
    let situation = DecisionSituation::new(states, ls.consequences().to_vec(), acts)?;
    PlausibilisticSituation::new(situation, p.clone(), measure)
}

/// The standard variant: `[0,1)` cut at every cumulative breakpoint of every
/// lottery, the uniform measure on the pieces, and `a_ℓ` yielding the `k`-th
/// support element on the `k`-th cumulative band of `ℓ`.
pub fn construct_situation_standard(ls: &LotterySituation) -> Result<PlausibilisticSituation> {
    let mut cumulative: Vec<Vec<Rational>> = Vec::new();
    let mut points: BTreeSet<Rational> = BTreeSet::new();
    points.insert(Rational::zero());
    for l in ls.lotteries() {
        let atoms = l.as_probability().ok_or_else(|| Error::NotStandard(format!("lottery {} is not additive", l.name())))?;
        if atoms.iter().any(|a| !a.is_positive()) {
            return Err(Error::NotStandard(format!("lottery {} has a zero atom", l.name())));
        }
        let mut acc = Rational::zero();
        let cum: Vec<Rational> = atoms
            .iter()
            .map(|a| {
                acc += a;
                acc.clone()
            })
            .collect();
        points.extend(cum.iter().cloned());
        cumulative.push(cum);
    }
    let points: Vec<Rational> = points.into_iter().collect();
    let pieces: Vec<(Rational, Rational)> = points.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    if pieces.len() > MAX_STATES {
        return Err(Error::TooLarge(pieces.len(), MAX_STATES));
    }
    let states: Vec<String> =
        pieces.iter().map(|(a, b)| format!("[{}, {})", format_rational(a), format_rational(b))).collect();
    let cons_index: BTreeMap<&String, usize> = ls.consequences().iter().enumerate().map(|(i, c)| (c, i)).collect();
    let acts = ls
        .lotteries()
        .iter()
        .zip(&cumulative)
        .map(|(l, cum)| Act {
            name: l.name().to_string(),
            outcomes: pieces
                .iter()
                .map(|(start, _)| {
                    let band = cum.iter().position(|b| start.cmp(b) == Ordering::Less).expect("start below 1");
                    cons_index[&l.support()[band]]
                })
                .collect(),
        })
        .collect();
    let lengths: Vec<Rational> = pieces.iter().map(|(a, b)| b - a).collect();
    let measure = PlausibilityMeasure::probability(states.clone(), &lengths)?;
    let situation = DecisionSituation::new(states, ls.consequences().to_vec(), acts)?;
    PlausibilisticSituation::new(situation, Domain::unit_interval(), measure)
}

/// Whether acts inducing the same lottery are interchangeable against every
/// act on both sides of the relation.
pub fn check_lottery_uniform(ps: &PlausibilisticSituation, rel: &PreferenceRelation) -> Result<()> {
    let induced = ps.induce_situation()?;
    let index = ps.induced_indices(&induced)?;
    let n = index.len();
    let name = |i: usize| ps.situation().acts()[i].name.clone();
    for a1 in 0..n {
        for a2 in a1 + 1..n {
            if index[a1] != index[a2] {
                continue;
            }
            for b in 0..n {
                if rel.holds(a1, b) != rel.holds(a2, b) {
                    return Err(Error::NotUniform { a1: name(a1), a2: name(b), b1: name(a2), b2: name(b) });
                }
                if rel.holds(b, a1) != rel.holds(b, a2) {
                    return Err(Error::NotUniform { a1: name(b), a2: name(a1), b1: name(b), b2: name(a2) });
                }
            }
        }
    }
    Ok(())
}

pub fn is_lottery_uniform(ps: &PlausibilisticSituation, rel: &PreferenceRelation) -> Result<bool> {
    match check_lottery_uniform(ps, rel) {
        Ok(()) => Ok(true),
        Err(Error::NotUniform { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// A decision rule on lottery problems.
pub trait LotteryRule: Send + Sync {
    fn name(&self) -> &'static str;

    fn evaluate(&self, lp: &LotteryProblem) -> Result<Evaluation>;
}

/// `ℓ1 ≼ ℓ2` iff lottery GEU of `ℓ1` ≼_V that of `ℓ2`.
pub struct LotteryGeu;

impl LotteryRule for LotteryGeu {
    fn name(&self) -> &'static str {
        "lottery-geu"
    }

    fn evaluate(&self, lp: &LotteryProblem) -> Result<Evaluation> {
        let names = lp.situation().names();
        let values: Vec<Value> = names.iter().map(|l| lp.lottery_geu(l)).collect::<Result<_>>()?;
        let e = lp.expectation();
        let relation = PreferenceRelation::from_fn(names, |i, j| e.v_leq(&values[i], &values[j]));
        Ok(Evaluation { values, relation })
    }
}

/// The act rule induced by a lottery rule: `a1 ≼ a2` iff `ℓ_{a1} ≼ ℓ_{a2}`.
pub struct Lifted<R>(pub R);

pub fn lift_lottery_rule<R: LotteryRule>(rule: R) -> Lifted<R> {
    Lifted(rule)
}

impl<R: LotteryRule> Lifted<R> {
    fn lottery_problem(d: &DecisionProblem) -> Result<(PlausibilisticSituation, LotteryProblem)> {
        let ps = PlausibilisticSituation::of_problem(d)?;
        let lp = LotteryProblem::new(ps.induce_situation()?, d.expectation()?.clone(), d.utility().to_vec())?;
        Ok((ps, lp))
    }
}

impl<R: LotteryRule> DecisionRule for Lifted<R> {
    fn name(&self) -> &'static str {
        self.0.name()
    }

    fn applicable(&self, d: &DecisionProblem) -> Result<()> {
        Self::lottery_problem(d).map(|_| ())
    }

    fn evaluate(&self, d: &DecisionProblem) -> Result<Evaluation> {
        let (ps, lp) = Self::lottery_problem(d)?;
        let inner = self.0.evaluate(&lp)?;
        let index = ps.induced_indices(lp.situation())?;
        let values = index.iter().map(|&k| inner.values[k].clone()).collect();
        let relation = PreferenceRelation::from_fn(d.act_names(), |i, j| inner.relation.holds(index[i], index[j]));
        Ok(Evaluation { values, relation })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::relation_equal;
    use crate::rules::rule_geu;
    use crate::testing::{beldr, labels, r, uniform_beldr};

    fn unit() -> Domain {
        Domain::unit_interval()
    }

    fn standard_lottery(name: &str, support: &[&str], atoms: &[(i64, i64)]) -> Lottery {
        let atoms: Vec<Rational> = atoms.iter().map(|&(n, d)| r(n, d)).collect();
        Lottery::standard(name, labels(support), &atoms).unwrap()
    }

    fn round_trips(ls: &LotterySituation, ps: &PlausibilisticSituation) {
        for (k, l) in ls.lotteries().iter().enumerate() {
            assert!(ps.induce_lottery(k).unwrap().same_as(l), "lottery {} does not round-trip", l.name());
        }
    }

    #[test]
    fn induced_lotteries_of_example_acts() {
        let ps = PlausibilisticSituation::of_problem(&uniform_beldr()).unwrap();
        let l = ps.induce_lottery(0).unwrap();
        assert!(l.same_as(&standard_lottery("x", &["c1", "c2", "c3"], &[(1, 3), (1, 3), (1, 3)])));

        let ps = PlausibilisticSituation::of_problem(&beldr()).unwrap();
        let l = ps.induce_lottery(0).unwrap();
        // Bel(a1⁻¹({c1, c2})) = Bel({s1, s2}) = 1; singletons have belief 0.
        assert_eq!(*l.get(0b011), Value::one());
        assert!(["c1", "c2", "c3"].iter().all(|c| *l.atom(c).unwrap() == Value::zero()));
        // Both acts induce the same lottery under the uniform measure.
        let ps = PlausibilisticSituation::of_problem(&uniform_beldr()).unwrap();
        assert_eq!(ps.induce_situation().unwrap().lotteries().len(), 1);
    }

    #[test]
    fn constant_act_induces_degenerate_lottery() {
        let situation = DecisionSituation::from_labels(labels(&["s1", "s2"]), labels(&["c"]), vec![("k".into(), labels(&["c", "c"]))])
            .unwrap();
        let pl = PlausibilityMeasure::probability(labels(&["s1", "s2"]), &[r(1, 2), r(1, 2)]).unwrap();
        let ps = PlausibilisticSituation::new(situation, unit(), pl).unwrap();
        assert!(ps.induce_lottery(0).unwrap().same_as(&Lottery::degenerate("d", "c", &unit()).unwrap()));
    }

    #[test]
    fn lottery_geu_examples() {
        let l = standard_lottery("l", &["c1", "c2", "c3"], &[(1, 3), (1, 3), (1, 3)]);
        let d = Lottery::degenerate("d", "c2", &unit()).unwrap();
        let ls = LotterySituation::new(vec![l, d], labels(&["c1", "c2", "c3"]), unit()).unwrap();
        let lp = LotteryProblem::new(ls, ExpectationDomain::standard(), (1..=3).map(Value::int).collect()).unwrap();
        assert_eq!(lp.lottery_geu("l").unwrap(), Value::int(2));
        assert_eq!(lp.lottery_standard_eu("l").unwrap(), r(2, 1));
        assert_eq!(lp.lottery_geu("d").unwrap(), Value::int(2));
        assert!(matches!(lp.lottery_geu("zz"), Err(Error::UnknownLottery(_))));
    }

    #[test]
    fn construct_single_uniform_lottery() {
        let ls = LotterySituation::new(vec![standard_lottery("l", &["c1", "c2"], &[(1, 2), (1, 2)])], labels(&["c1", "c2"]), unit())
            .unwrap();
        let ps = construct_situation(&ls).unwrap();
        assert_eq!(ps.situation().states().len(), 2);
        // Y = {f1}: only l has a whole fibre inside Y, Z = {c1}, so Pl = l({c1}).
        assert_eq!(*ps.measure().get(0b01), Value::ratio(1, 2));
        round_trips(&ls, &ps);
    }

    #[test]
    fn construct_degenerate_and_overlapping() {
        let ls = LotterySituation::new(vec![Lottery::degenerate("d", "c1", &unit()).unwrap()], labels(&["c1"]), unit()).unwrap();
        let ps = construct_situation(&ls).unwrap();
        assert_eq!(ps.situation().states().len(), 1);
        round_trips(&ls, &ps);

        let ls = LotterySituation::new(
            vec![
                standard_lottery("l1", &["c1", "c2"], &[(1, 4), (3, 4)]),
                standard_lottery("l2", &["c2", "c3", "c1"], &[(1, 2), (1, 6), (1, 3)]),
            ],
            labels(&["c1", "c2", "c3"]),
            unit(),
        )
        .unwrap();
        let ps = construct_situation(&ls).unwrap();
        assert_eq!(ps.situation().states().len(), 6);
        round_trips(&ls, &ps);
        let back = ps.induce_situation().unwrap();
        assert_eq!(back.lotteries().len(), 2);
    }

    #[test]
    fn construct_standard_intervals() {
        let ls = LotterySituation::new(vec![standard_lottery("l", &["c1", "c2"], &[(1, 2), (1, 2)])], labels(&["c1", "c2"]), unit())
            .unwrap();
        let ps = construct_situation_standard(&ls).unwrap();
        assert_eq!(ps.situation().states(), &labels(&["[0, 1/2)", "[1/2, 1)"])[..]);
        round_trips(&ls, &ps);

        let ls = LotterySituation::new(vec![Lottery::degenerate("d", "c1", &unit()).unwrap()], labels(&["c1"]), unit()).unwrap();
        assert_eq!(construct_situation_standard(&ls).unwrap().situation().states(), &labels(&["[0, 1)"])[..]);

        let ls = LotterySituation::new(
            vec![
                standard_lottery("l1", &["c1", "c2"], &[(1, 2), (1, 2)]),
                standard_lottery("l2", &["c1", "c2"], &[(1, 3), (2, 3)]),
            ],
            labels(&["c1", "c2"]),
            unit(),
        )
        .unwrap();
        let ps = construct_situation_standard(&ls).unwrap();
        assert_eq!(ps.situation().states(), &labels(&["[0, 1/3)", "[1/3, 1/2)", "[1/2, 1)"])[..]);
        round_trips(&ls, &ps);
    }

    #[test]
    fn lottery_uniformity() {
        let d = uniform_beldr();
        let ps = PlausibilisticSituation::of_problem(&d).unwrap();
        let lifted = lift_lottery_rule(LotteryGeu).relation(&d).unwrap();
        assert!(is_lottery_uniform(&ps, &lifted).unwrap());
        assert!(lifted.holds(0, 1) && lifted.holds(1, 0));
        let mut split = lifted.clone();
        split.set(1, 0, false);
        assert!(!is_lottery_uniform(&ps, &split).unwrap());
        // Under Bel the acts induce different lotteries.
        let ps = PlausibilisticSituation::of_problem(&beldr()).unwrap();
        assert!(is_lottery_uniform(&ps, &split).unwrap());
    }

    #[test]
    fn lifted_geu_matches_geu_for_injective_utilities() {
        let d = beldr();
        let lifted = lift_lottery_rule(LotteryGeu).relation(&d).unwrap();
        assert!(relation_equal(&lifted, &rule_geu(&d).unwrap()).unwrap());
    }
}
