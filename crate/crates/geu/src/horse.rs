//! Anscombe-Aumann problems: horse lotteries map states to roulette
//! lotteries, evaluated by an inner expectation over each lottery and an
//! outer expectation over states.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expectation::ExpectationDomain;
use crate::lottery::{lottery_expectation, Lottery, LotterySituation};
use crate::model::{Act, DecisionProblem, DecisionSituation, PreferenceRelation};
use crate::plausibility::{make_plausibility_measure, PlausibilityMeasure, StateSet};
use crate::value::Value;

/// A horse lottery: one roulette lottery (by index) per state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorseLottery {
    pub name: String,
    pub lotteries: Vec<usize>,
}

/// The outer layer: an expectation domain whose utilities are the inner
/// valuations, and a plausibility measure on states.
#[derive(Clone, Debug)]
pub struct OuterPart {
    pub expectation: ExpectationDomain,
    pub measure: PlausibilityMeasure,
}

#[derive(Clone, Debug)]
pub struct AAProblem {
    states: Vec<String>,
    roulette: LotterySituation,
    horses: Vec<HorseLottery>,
    inner: ExpectationDomain,
    utility: Vec<Value>,
    outer: Option<OuterPart>,
}

impl AAProblem {
    pub fn new(
        states: Vec<String>,
        roulette: LotterySituation,
        horses: Vec<HorseLottery>,
        inner: ExpectationDomain,
        utility: Vec<Value>,
        outer: Option<OuterPart>,
    ) -> Result<Self> {
        if horses.is_empty() {
            return Err(Error::InvalidProblem("no horse lotteries".into()));
        }
        let n = roulette.lotteries().len();
        for h in &horses {
            if h.lotteries.len() != states.len() || h.lotteries.iter().any(|&k| k >= n) {
                return Err(Error::InvalidProblem(format!("horse lottery {} is not a total map into the lotteries", h.name)));
            }
        }
        if inner.p_domain() != roulette.p_domain() {
            return Err(Error::DomainMismatch("inner expectation domain and lotteries use different plausibility domains".into()));
        }
        if utility.len() != roulette.consequences().len() {
            return Err(Error::InvalidProblem("utility must be defined on every consequence".into()));
        }
        if let Some(u) = utility.iter().find(|u| !inner.u_domain().contains(u)) {
            return Err(Error::InvalidProblem(format!("utility {u} is outside the inner utility domain")));
        }
        let outer = match outer {
            Some(part) => {
                if part.expectation.u_domain().carrier() != inner.v_domain().carrier() {
                    return Err(Error::DomainMismatch(
                        "outer utility domain must be the inner valuation domain".into(),
                    ));
                }
                if part.measure.states() != &states[..] {
                    return Err(Error::InvalidProblem("outer measure states differ from problem states".into()));
                }
                let measure =
                    make_plausibility_measure(states.clone(), part.measure.values().to_vec(), part.expectation.p_domain())?;
                Some(OuterPart { expectation: part.expectation, measure })
            }
            None => None,
        };
        let problem = AAProblem { states, roulette, horses, inner, utility, outer };
        // Horse lotteries must be distinct maps; building the flattened
        // situation checks that and the state labels.
        problem.flat_situation()?;
        Ok(problem)
    }

    /// The act problem `d` with each consequence replaced by its degenerate
    /// lottery (named after the consequence) under `inner`.
    pub fn embed_act_problem(d: &DecisionProblem, inner: ExpectationDomain) -> Result<Self> {
        let part = d.plausibilistic_part().ok_or(Error::MissingOuterPart)?;
        let p = inner.p_domain().clone();
        let lotteries = d
            .situation()
            .consequences()
            .iter()
            .map(|c| Lottery::degenerate(c.clone(), c, &p))
            .collect::<Result<_>>()?;
        let roulette = LotterySituation::new(lotteries, d.situation().consequences().to_vec(), p)?;
        let horses =
            d.acts().iter().map(|a| HorseLottery { name: a.name.clone(), lotteries: a.outcomes.clone() }).collect();
        AAProblem::new(
            d.situation().states().to_vec(),
            roulette,
            horses,
            inner,
            d.utility().to_vec(),
            Some(OuterPart { expectation: part.expectation.clone(), measure: part.measure.clone() }),
        )
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn roulette(&self) -> &LotterySituation {
        &self.roulette
    }

    pub fn horses(&self) -> &[HorseLottery] {
        &self.horses
    }

    pub fn inner(&self) -> &ExpectationDomain {
        &self.inner
    }

    pub fn utility(&self) -> &[Value] {
        &self.utility
    }

    pub fn outer(&self) -> Option<&OuterPart> {
        self.outer.as_ref()
    }

    pub fn horse_names(&self) -> Vec<String> {
        self.horses.iter().map(|h| h.name.clone()).collect()
    }

    pub fn horse_index(&self, name: &str) -> Result<usize> {
        self.horses
            .iter()
            .position(|h| h.name == name)
            .ok_or_else(|| Error::UnknownAct(name.to_string()))
    }

    /// The degenerate lottery on `c` over the inner plausibility domain.
    pub fn inject(&self, c: &str) -> Result<Lottery> {
        if !self.roulette.consequences().iter().any(|x| x == c) {
            return Err(Error::InvalidProblem(format!("unknown consequence {c}")));
        }
        Lottery::degenerate(c, c, self.roulette.p_domain())
    }

    fn utility_of(&self, c: &str) -> Result<Value> {
        let i = self
            .roulette
            .consequences()
            .iter()
            .position(|x| x == c)
            .ok_or_else(|| Error::InvalidProblem(format!("unknown consequence {c}")))?;
        Ok(self.utility[i].clone())
    }

    /// `u(ℓ)`: the inner lottery expectation of the utility.
    pub fn extend_utility(&self, lottery: &str) -> Result<Value> {
        let k = self.roulette.lottery_index(lottery)?;
        self.extend_utility_of(&self.roulette.lotteries()[k])
    }

    /// `u(ℓ)` for any lottery over the problem's consequences, including
    /// ones outside `L` such as injected degenerate lotteries.
    pub fn extend_utility_of(&self, l: &Lottery) -> Result<Value> {
        lottery_expectation(&self.inner, l, |c| self.utility_of(c))
    }

    /// `⊕_{x} Pl(u_h⁻¹(x)) ⊗ x` with `u_h(s) = u(h(s))`, folded in ascending
    /// canonical order of `x`.
    pub fn horse_geu(&self, horse: &str) -> Result<Value> {
        let outer = self.outer.as_ref().ok_or(Error::MissingOuterPart)?;
        let h = &self.horses[self.horse_index(horse)?];
        let lotteries = self.roulette.lotteries();
        let mut preimages: BTreeMap<Value, StateSet> = BTreeMap::new();
        for (s, &k) in h.lotteries.iter().enumerate() {
            *preimages.entry(self.extend_utility_of(&lotteries[k])?).or_insert(0) |= 1 << s;
        }
        let e = &outer.expectation;
        let terms: Vec<Value> =
            preimages.into_iter().map(|(x, mask)| e.otimes(outer.measure.get(mask), &x)).collect::<Result<_>>()?;
        e.sum(&terms)
    }

    /// Horse lotteries ordered by their two-level expectation.
    pub fn horse_relation(&self) -> Result<PreferenceRelation> {
        let outer = self.outer.as_ref().ok_or(Error::MissingOuterPart)?;
        let names = self.horse_names();
        let values: Vec<Value> = names.iter().map(|h| self.horse_geu(h)).collect::<Result<_>>()?;
        Ok(PreferenceRelation::from_fn(names, |i, j| outer.expectation.v_leq(&values[i], &values[j])))
    }

    fn flat_situation(&self) -> Result<DecisionSituation> {
        let acts = self.horses.iter().map(|h| Act { name: h.name.clone(), outcomes: h.lotteries.clone() }).collect();
        DecisionSituation::new(self.states.clone(), self.roulette.names(), acts)
    }

    /// The act problem whose consequences are the lotteries, with the
    /// extended utility and the outer layer carried over.
    pub fn flatten(&self) -> Result<DecisionProblem> {
        let outer = self.outer.as_ref().ok_or(Error::MissingOuterPart)?;
        let utility = self.roulette.lotteries().iter().map(|l| self.extend_utility_of(l)).collect::<Result<_>>()?;
        DecisionProblem::plausibilistic(self.flat_situation()?, outer.expectation.clone(), utility, outer.measure.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;
    use crate::expectation::ExpectationDomain;
    use crate::model::relation_equal;
    use crate::rules::{rule_ceu, rule_geu};
    use crate::testing::{beldr, labels, r};

    fn unit() -> Domain {
        Domain::unit_interval()
    }

    /// Two states, uniform outer probability; horse `h` carries a fair
    /// lottery on utilities {0, 2} in s1 and one on {2, 4} in s2.
    fn two_level() -> AAProblem {
        let cons = labels(&["c0", "c2", "c4"]);
        let half = [r(1, 2), r(1, 2)];
        let roulette = LotterySituation::new(
            vec![
                Lottery::standard("low", labels(&["c0", "c2"]), &half).unwrap(),
                Lottery::standard("high", labels(&["c2", "c4"]), &half).unwrap(),
                Lottery::degenerate("sure", "c2", &unit()).unwrap(),
            ],
            cons,
            unit(),
        )
        .unwrap();
        let states = labels(&["s1", "s2"]);
        let horses = vec![
            HorseLottery { name: "h".into(), lotteries: vec![0, 1] },
            HorseLottery { name: "k".into(), lotteries: vec![2, 2] },
            HorseLottery { name: "g".into(), lotteries: vec![0, 0] },
        ];
        let pl = PlausibilityMeasure::probability(states.clone(), &half).unwrap();
        AAProblem::new(
            states,
            roulette,
            horses,
            ExpectationDomain::standard(),
            vec![Value::int(0), Value::int(2), Value::int(4)],
            Some(OuterPart { expectation: ExpectationDomain::standard(), measure: pl }),
        )
        .unwrap()
    }

    #[test]
    fn extend_utility_examples() {
        let p = two_level();
        assert_eq!(p.extend_utility("low").unwrap(), Value::int(1));
        assert_eq!(p.extend_utility("sure").unwrap(), Value::int(2));
        assert_eq!(p.extend_utility_of(&p.inject("c4").unwrap()).unwrap(), Value::int(4));
        assert!(matches!(p.extend_utility("nope"), Err(Error::UnknownLottery(_))));
    }

    #[test]
    fn extend_utility_under_max_domain() {
        let u = Domain::rationals();
        let e = ExpectationDomain::e_max(u.clone()).unwrap();
        let top = e.p_domain().top().unwrap().clone();
        let bottom = e.p_domain().bottom().unwrap().clone();
        let l = Lottery::new("l", labels(&["c"]), vec![bottom, top], e.p_domain()).unwrap();
        let roulette = LotterySituation::new(vec![l], labels(&["c"]), e.p_domain().clone()).unwrap();
        let p = AAProblem::new(
            labels(&["s"]),
            roulette,
            vec![HorseLottery { name: "h".into(), lotteries: vec![0] }],
            e,
            vec![Value::int(7)],
            None,
        )
        .unwrap();
        assert_eq!(p.extend_utility("l").unwrap(), Value::int(7));
        assert!(matches!(p.horse_geu("h"), Err(Error::MissingOuterPart)));
        assert!(matches!(p.flatten(), Err(Error::MissingOuterPart)));
    }

    #[test]
    fn two_level_expectation() {
        let p = two_level();
        // ½·(½·0 + ½·2) + ½·(½·2 + ½·4)
        assert_eq!(p.horse_geu("h").unwrap(), Value::int(2));
        assert_eq!(p.horse_geu("k").unwrap(), Value::int(2));
        assert_eq!(p.horse_geu("g").unwrap(), Value::int(1));
    }

    #[test]
    fn flatten_preserves_values_and_relation() {
        let p = two_level();
        let d = p.flatten().unwrap();
        for (i, h) in p.horse_names().iter().enumerate() {
            assert_eq!(d.geu(i).unwrap(), p.horse_geu(h).unwrap());
        }
        assert!(relation_equal(&rule_geu(&d).unwrap(), &p.horse_relation().unwrap()).unwrap());
    }

    #[test]
    fn embedded_act_problem_flattens_back() {
        let d = beldr();
        let p = AAProblem::embed_act_problem(&d, ExpectationDomain::standard()).unwrap();
        let flat = p.flatten().unwrap();
        assert_eq!(flat.situation(), d.situation());
        assert_eq!(flat.utility(), d.utility());
        for a in 0..d.acts().len() {
            assert_eq!(flat.geu(a).unwrap(), d.geu(a).unwrap());
        }
        assert!(relation_equal(&rule_ceu(&flat).unwrap(), &rule_ceu(&d).unwrap()).unwrap());
    }

    #[test]
    fn rejects_mismatched_layers() {
        let p = two_level();
        let bad_outer = OuterPart {
            expectation: ExpectationDomain::e_max(Domain::rationals()).unwrap(),
            measure: p.outer().unwrap().measure.clone(),
        };
        let err = AAProblem::new(
            p.states().to_vec(),
            p.roulette().clone(),
            p.horses().to_vec(),
            p.inner().clone(),
            p.utility().to_vec(),
            Some(bad_outer),
        );
        assert!(err.is_err());
        let short = vec![HorseLottery { name: "x".into(), lotteries: vec![0] }];
        assert!(AAProblem::new(p.states().to_vec(), p.roulette().clone(), short, p.inner().clone(), p.utility().to_vec(), None)
            .is_err());
    }
}
