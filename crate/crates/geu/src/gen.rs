//! Seeded generators for problems, rule tables, belief functions and
//! lottery situations. Every generator draws only from the supplied RNG, so a
//! seed fixes the output exactly.
//!
//! Rule tables stand in for "all rules": uniform tables are drawn per
//! indistinguishability class, so any relation between classes is reachable,
//! with the entries between constant-utility classes forced by the utility
//! order.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::Domain;
use crate::error::Result;
use crate::expectation::ExpectationDomain;
use crate::lottery::{Lottery, LotterySituation};
use crate::model::{Act, DecisionProblem, DecisionSituation, PreferenceRelation};
use crate::plausibility::{full_set, make_pl_from_probability_set, PlausibilityMeasure, StateSet};
use crate::represent::{indistinguishability_classes, lottery_set_domain, RuleTable};
use crate::rules::BeliefFunction;
use crate::value::{Rational, Value};

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for generated act problems.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub max_states: usize,
    pub max_acts: usize,
    pub max_consequences: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_states: 6, max_acts: 6, max_consequences: 4 }
    }
}

/// Which plausibility apparatus a generated problem carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    Nonplausibilistic,
    Probability,
    Belief,
    Credal,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] =
        [ProblemKind::Nonplausibilistic, ProblemKind::Probability, ProblemKind::Belief, ProblemKind::Credal];
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// A rational in `[-10, 10]` with denominator 1 or 2.
pub fn utility_value<R: Rng>(rng: &mut R) -> Rational {
    if rng.gen_bool(0.75) {
        ratio(rng.gen_range(-10..=10), 1)
    } else {
        ratio(rng.gen_range(-20..=20), 2)
    }
}

/// Nonnegative rational weights summing to 1; zero atoms only if allowed.
pub fn probability_atoms<R: Rng>(rng: &mut R, n: usize, allow_zero: bool) -> Vec<Rational> {
    let low = if allow_zero { 0 } else { 1 };
    let mut weights: Vec<i64> = (0..n).map(|_| rng.gen_range(low..=6)).collect();
    if weights.iter().all(|&w| w == 0) {
        weights[rng.gen_range(0..n)] = 1;
    }
    let total: i64 = weights.iter().sum();
    weights.into_iter().map(|w| ratio(w, total)).collect()
}

/// A situation with distinct acts; about half the time two of them are
/// constant.
pub fn situation<R: Rng>(rng: &mut R, caps: Caps) -> DecisionSituation {
    let n = rng.gen_range(1..=caps.max_states);
    let m = rng.gen_range(2..=caps.max_consequences.max(2));
    let target = rng.gen_range(2..=caps.max_acts.max(2));
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut acts: Vec<Vec<usize>> = Vec::new();
    if rng.gen_bool(0.5) {
        let mut cs: Vec<usize> = (0..m).collect();
        cs.shuffle(rng);
        for &c in cs.iter().take(2) {
            let f = vec![c; n];
            seen.insert(f.clone());
            acts.push(f);
        }
    }
    for _ in 0..target * 8 {
        if acts.len() >= target {
            break;
        }
        let f: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
        if seen.insert(f.clone()) {
            acts.push(f);
        }
    }
    let acts = acts
        .into_iter()
        .enumerate()
        .map(|(i, outcomes)| Act { name: format!("a{}", i + 1), outcomes })
        .collect();
    DecisionSituation::new(names("s", n), names("c", m), acts).expect("generated situation is valid")
}

/// Utilities per consequence; ties are common so that distinct acts can
/// share a utility random variable.
pub fn utilities<R: Rng>(rng: &mut R, m: usize) -> Vec<Value> {
    let mut out: Vec<Value> = Vec::with_capacity(m);
    for _ in 0..m {
        if !out.is_empty() && rng.gen_bool(0.2) {
            let pick = out[rng.gen_range(0..out.len())].clone();
            out.push(pick);
        } else {
            out.push(Value::Rational(utility_value(rng)));
        }
    }
    out
}

/// Mass function with 1 to 4 focal sets on `n` states.
pub fn belief_function<R: Rng>(rng: &mut R, n: usize) -> BeliefFunction {
    let focal = rng.gen_range(1..=4);
    let weights = probability_atoms(rng, focal, false);
    let masses: Vec<(StateSet, Rational)> =
        weights.into_iter().map(|w| (rng.gen_range(1..=full_set(n)), w)).collect();
    BeliefFunction::from_masses(names("s", n), &masses).expect("masses define a belief function")
}

pub fn problem<R: Rng>(rng: &mut R, kind: ProblemKind, caps: Caps) -> DecisionProblem {
    let situation = situation(rng, caps);
    let n = situation.states().len();
    let utility = utilities(rng, situation.consequences().len());
    let states = situation.states().to_vec();
    match kind {
        ProblemKind::Nonplausibilistic => DecisionProblem::nonplausibilistic(situation, Domain::rationals(), utility),
        ProblemKind::Probability => {
            let atoms = probability_atoms(rng, n, true);
            let pl = PlausibilityMeasure::probability(states, &atoms).expect("probability");
            DecisionProblem::plausibilistic(situation, ExpectationDomain::standard(), utility, pl)
        }
        ProblemKind::Belief => {
            let bel = belief_function(rng, n);
            DecisionProblem::plausibilistic(situation, ExpectationDomain::standard(), utility, bel.measure().clone())
        }
        ProblemKind::Credal => {
            let k = rng.gen_range(1..=4);
            let measures: Vec<(String, Vec<Rational>)> =
                (1..=k).map(|i| (format!("p{i}"), probability_atoms(rng, n, true))).collect();
            let (p, pl) = make_pl_from_probability_set(states, &measures).expect("credal measure");
            let e = lottery_set_domain(Domain::rationals(), p, BTreeSet::new()).expect("lottery-set domain");
            DecisionProblem::plausibilistic(situation, e, utility, pl)
        }
    }
    .expect("generated problem is valid")
}

/// A problem in which at least two distinct acts are indistinguishable: an
/// extra act is derived from an existing one by swapping a consequence for
/// another of equal utility.
pub fn problem_with_twins<R: Rng>(rng: &mut R, kind: ProblemKind, caps: Caps) -> DecisionProblem {
    loop {
        let base = problem(rng, kind, caps);
        let s = base.situation();
        let u = base.utility();
        let m = s.consequences().len();
        let (c, c2) = (rng.gen_range(0..m), rng.gen_range(0..m));
        if c == c2 {
            continue;
        }
        let mut utility = u.to_vec();
        utility[c2] = utility[c].clone();
        let Some(source) = s.acts().iter().find(|a| a.outcomes.contains(&c)) else { continue };
        let twin: Vec<usize> = source.outcomes.iter().map(|&x| if x == c { c2 } else { x }).collect();
        if s.acts().iter().any(|a| a.outcomes == twin) {
            continue;
        }
        let mut acts = s.acts().to_vec();
        acts.push(Act { name: format!("a{}", acts.len() + 1), outcomes: twin });
        let Ok(situation) = DecisionSituation::new(s.states().to_vec(), s.consequences().to_vec(), acts) else {
            continue;
        };
        let rebuilt = match base.plausibilistic_part() {
            None => DecisionProblem::nonplausibilistic(situation, base.u_domain().clone(), utility),
            Some(part) => {
                DecisionProblem::plausibilistic(situation, part.expectation.clone(), utility, part.measure.clone())
            }
        };
        if let Ok(d) = rebuilt {
            return d;
        }
    }
}

/// The utility shared by every state of a constant-utility act.
fn constant_utility(d: &DecisionProblem, a: usize) -> Option<Value> {
    let rv = d.utility_rv(a).ok()?;
    rv.iter().all(|u| *u == rv[0]).then(|| rv[0].clone())
}

/// Relation on class representatives: constant-utility classes compare by
/// utility; every other entry comes from scores (a total preorder) or, half
/// the time, from coin flips.
fn class_relation<R: Rng>(rng: &mut R, d: &DecisionProblem, reps: &[usize]) -> Vec<Vec<bool>> {
    let k = reps.len();
    let fixed: Vec<Option<Value>> = reps.iter().map(|&a| constant_utility(d, a)).collect();
    let scores: Vec<Rational> = fixed
        .iter()
        .map(|f| match f.as_ref().and_then(Value::as_rational) {
            Some(x) => x.clone(),
            None => utility_value(rng),
        })
        .collect();
    let by_score = rng.gen_bool(0.5);
    let mut rel = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            rel[i][j] = match (&fixed[i], &fixed[j]) {
                _ if i == j => true,
                (Some(x), Some(y)) => d.u_domain().leq(x, y),
                _ if by_score => scores[i] <= scores[j],
                _ => rng.gen_bool(0.5),
            };
        }
    }
    rel
}

/// A reflexive table that is uniform and respects utility.
pub fn uniform_table<R: Rng>(rng: &mut R, d: &DecisionProblem) -> Result<RuleTable> {
    let class = indistinguishability_classes(d)?;
    let mut reps: Vec<usize> = class.clone();
    reps.sort_unstable();
    reps.dedup();
    let rel = class_relation(rng, d, &reps);
    let pos = |a: usize| reps.binary_search(&class[a]).expect("class representative");
    let relation = PreferenceRelation::from_fn(d.act_names(), |a, b| rel[pos(a)][pos(b)]);
    RuleTable::new(d.clone(), &relation)
}

/// A uniform table with one entry flipped between two indistinguishable
/// acts, or `None` if all acts are distinguishable.
pub fn non_uniform_table<R: Rng>(rng: &mut R, d: &DecisionProblem) -> Result<Option<RuleTable>> {
    let class = indistinguishability_classes(d)?;
    let twins: Vec<(usize, usize)> = (0..class.len())
        .flat_map(|a| (0..class.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && class[a] == class[b])
        .collect();
    let Some(&(a1, a2)) = twins.choose(rng) else { return Ok(None) };
    let table = uniform_table(rng, d)?;
    let mut relation = table.relation().clone();
    // a1 ≼ a2 held (a2 ~ a1 and a1 ≼ a1); dropping it breaks uniformity.
    relation.set(a1, a2, false);
    Ok(Some(RuleTable::new(d.clone(), &relation)?))
}

/// A reflexive table ordering constant acts by utility and everything else
/// freely; uniformity is not enforced.
pub fn weakly_respecting_table<R: Rng>(rng: &mut R, d: &DecisionProblem) -> Result<RuleTable> {
    let n = d.acts().len();
    let fixed: Vec<Option<Value>> = (0..n)
        .map(|a| d.situation().constant_consequence(a).map(|c| d.utility()[c].clone()))
        .collect();
    let scores: Vec<Rational> = (0..n).map(|_| utility_value(rng)).collect();
    let by_score = rng.gen_bool(0.5);
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            rel[i][j] = match (&fixed[i], &fixed[j]) {
                _ if i == j => true,
                (Some(x), Some(y)) => d.u_domain().leq(x, y),
                _ if by_score => scores[i] <= scores[j],
                _ => rng.gen_bool(0.5),
            };
        }
    }
    RuleTable::new(d.clone(), &PreferenceRelation::from_fn(d.act_names(), |a, b| rel[a][b]))
}

/// A monotone set function on `k` outcomes into `[0,1]` with `⊥ = 0` and
/// `⊤ = 1`, not necessarily additive.
fn monotone_values<R: Rng>(rng: &mut R, k: usize) -> Vec<Value> {
    let full = full_set(k);
    let mut raw: Vec<Rational> = (0..=full).map(|_| ratio(rng.gen_range(0..=12), 12)).collect();
    raw[0] = Rational::zero();
    raw[full as usize] = Rational::one();
    for mask in 1..full {
        // Monotone closure: every proper superset has been visited after its subsets.
        let best = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| raw[(mask & !(1 << i)) as usize].clone())
            .max()
            .unwrap_or_else(Rational::zero);
        if raw[mask as usize] < best {
            raw[mask as usize] = best;
        }
    }
    raw.into_iter().map(Value::Rational).collect()
}

/// Up to three distinct lotteries over `c1..c4` with supports of at most
/// three outcomes. With `standard` every lottery is additive with positive
/// atoms; otherwise assignments are arbitrary monotone maps into `[0,1]`.
/// The product of support sizes stays within `max_product`.
pub fn lottery_situation<R: Rng>(rng: &mut R, standard: bool, max_product: usize) -> LotterySituation {
    let consequences = names("c", 4);
    let unit = Domain::unit_interval();
    loop {
        let count = rng.gen_range(1..=3);
        let mut lotteries: Vec<Lottery> = Vec::new();
        let mut product = 1;
        for i in 0..count {
            let size = rng.gen_range(1..=3);
            let mut support = consequences.clone();
            support.shuffle(rng);
            support.truncate(size);
            let l = if standard {
                let atoms = probability_atoms(rng, size, false);
                Lottery::standard(format!("l{}", i + 1), support, &atoms)
            } else {
                Lottery::new(format!("l{}", i + 1), support, monotone_values(rng, size), &unit)
            }
            .expect("generated lottery is valid");
            if lotteries.iter().all(|m| !m.same_as(&l)) {
                product *= size;
                lotteries.push(l);
            }
        }
        if product <= max_product {
            return LotterySituation::new(lotteries, consequences, unit).expect("generated lotteries are valid");
        }
    }
}

/// Random rational random variables, one per act, over `n` states.
pub fn random_variables<R: Rng>(rng: &mut R, n: usize, acts: usize) -> Vec<Vec<Rational>> {
    (0..acts).map(|_| (0..n).map(|_| utility_value(rng)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::represent::{is_uniform, respects_utility, weakly_respects_utility};

    #[test]
    fn seeds_are_reproducible() {
        for kind in ProblemKind::ALL {
            let a = problem(&mut rng(7), kind, Caps::default());
            let b = problem(&mut rng(7), kind, Caps::default());
            assert_eq!(a.situation(), b.situation());
            assert_eq!(a.utility(), b.utility());
        }
    }

    #[test]
    fn tables_have_their_advertised_properties() {
        let mut r = rng(11);
        for i in 0..40 {
            let kind = ProblemKind::ALL[i % 4];
            let d = problem_with_twins(&mut r, kind, Caps::default());
            let t = uniform_table(&mut r, &d).unwrap();
            assert!(is_uniform(&t).unwrap() && respects_utility(&t).unwrap());
            let bad = non_uniform_table(&mut r, &d).unwrap().expect("twins present");
            assert!(!is_uniform(&bad).unwrap());
            let w = weakly_respecting_table(&mut r, &d).unwrap();
            assert!(weakly_respects_utility(&w).unwrap());
        }
    }

    #[test]
    fn lottery_situations_respect_caps() {
        let mut r = rng(3);
        for _ in 0..30 {
            let ls = lottery_situation(&mut r, false, 16);
            let product: usize = ls.lotteries().iter().map(|l| l.support().len()).product();
            assert!(product <= 16 && ls.lotteries().len() <= 3);
            assert!(lottery_situation(&mut r, true, 16).is_standard());
        }
    }
}
