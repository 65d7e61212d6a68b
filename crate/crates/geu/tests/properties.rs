//! Invariants checked on seeded random problems. Each property draws a seed
//! and builds its inputs with the crate's generators, so proptest shrinks
//! the seed rather than the structure.

use proptest::prelude::*;

use geu::gen::{self, Caps, ProblemKind};
use geu::horse::{AAProblem, HorseLottery, OuterPart};
use geu::lottery::{construct_situation, construct_situation_standard, LotterySituation, PlausibilisticSituation};
use geu::plausibility::members;
use geu::represent::{
    indistinguishability_classes, indistinguishable, represent_uniform, similar, represent_ordinal, RuleTable,
};
use geu::rules::{choquet_expectation, rule_geu};
use geu::{
    make_plausibility_measure, relation_equal, DecisionProblem, Domain, ExpectationDomain, PlausibilityMeasure,
    Rational, Value,
};
use rand::Rng;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

fn rational(v: &Value) -> Rational {
    match v {
        Value::Rational(r) => r.clone(),
        other => panic!("expected a rational, got {other}"),
    }
}

/// `Σ_s p(s) u(a(s))`, straight from the atoms.
fn eu_oracle(d: &DecisionProblem, a: usize) -> Rational {
    let atoms = d.measure().unwrap().as_probability().expect("additive");
    d.acts()[a].outcomes.iter().zip(&atoms).map(|(&c, p)| p * rational(&d.utility()[c])).sum()
}

/// Belief-function Choquet integral through the mass form
/// `Σ_X m(X) min_{s ∈ X} x(s)`, with `m` by inclusion–exclusion.
fn choquet_oracle(bel: &PlausibilityMeasure, x: &[Rational]) -> Rational {
    let nu = |mask: u64| rational(bel.get(mask));
    let mut total = Rational::from_integer(0.into());
    for set in 1..=bel.full() {
        let mut mass = Rational::from_integer(0.into());
        let mut sub = set;
        loop {
            let sign = if (set ^ sub).count_ones() % 2 == 0 { 1 } else { -1 };
            mass += nu(sub) * Rational::from_integer(sign.into());
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & set;
        }
        let low = members(set).map(|s| x[s].clone()).min().expect("nonempty");
        total += mass * low;
    }
    total
}

fn revalidates(pl: &PlausibilityMeasure, p: &Domain) -> bool {
    make_plausibility_measure(pl.states().to_vec(), pl.values().to_vec(), p).is_ok()
}

/// Two or three states, standard roulette lotteries, distinct horses and a
/// probability on the states.
fn aa_problem(seed: u64) -> AAProblem {
    let mut rng = gen::rng(seed);
    let roulette: LotterySituation = gen::lottery_situation(&mut rng, true, 16);
    let n = rng.gen_range(2..=3);
    let states: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
    let k = roulette.lotteries().len();
    let mut horses: Vec<HorseLottery> = Vec::new();
    for _ in 0..4 {
        let lotteries: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        if !horses.iter().any(|h| h.lotteries == lotteries) {
            horses.push(HorseLottery { name: format!("h{}", horses.len() + 1), lotteries });
        }
    }
    let utility: Vec<Value> = roulette.consequences().iter().map(|_| Value::Rational(gen::utility_value(&mut rng))).collect();
    let atoms = gen::probability_atoms(&mut rng, n, true);
    let measure = PlausibilityMeasure::probability(states.clone(), &atoms).unwrap();
    let outer = OuterPart { expectation: ExpectationDomain::standard(), measure };
    AAProblem::new(states, roulette, horses, ExpectationDomain::standard(), utility, Some(outer)).unwrap()
}

/// `Σ_s P(s) Σ_c ℓ_{h(s)}(c) u(c)`.
fn horse_oracle(aa: &AAProblem, h: usize) -> Rational {
    let outer = aa.outer().unwrap().measure.as_probability().unwrap();
    let roulette = aa.roulette();
    aa.horses()[h]
        .lotteries
        .iter()
        .zip(&outer)
        .map(|(&k, p)| {
            let l = &roulette.lotteries()[k];
            let inner: Rational = l
                .support()
                .iter()
                .map(|c| {
                    let u = &aa.utility()[roulette.consequences().iter().position(|x| x == c).unwrap()];
                    rational(l.atom(c).unwrap()) * rational(u)
                })
                .sum();
            p * inner
        })
        .sum()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn geu_over_the_standard_domain_is_expected_utility(seed in any::<u64>()) {
        let d = gen::problem(&mut gen::rng(seed), ProblemKind::Probability, Caps::default());
        for a in 0..d.acts().len() {
            prop_assert_eq!(rational(&d.geu(a).unwrap()), eu_oracle(&d, a));
        }
    }

    #[test]
    fn geu_relation_on_probabilities_is_a_total_preorder(seed in any::<u64>()) {
        let d = gen::problem(&mut gen::rng(seed), ProblemKind::Probability, Caps::default());
        let rel = rule_geu(&d).unwrap();
        prop_assert!(rel.is_reflexive() && rel.is_transitive() && rel.is_complete());
    }

    #[test]
    fn generated_measures_satisfy_the_plausibility_axioms(seed in any::<u64>(), kind in 1usize..4) {
        let d = gen::problem(&mut gen::rng(seed), ProblemKind::ALL[kind], Caps::default());
        let p = d.expectation().unwrap().p_domain().clone();
        prop_assert!(revalidates(d.measure().unwrap(), &p));
    }

    #[test]
    fn choquet_matches_the_mass_form(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = gen::rng(seed);
        let bel = gen::belief_function(&mut rng, n);
        for x in gen::random_variables(&mut rng, n, 3) {
            prop_assert_eq!(choquet_expectation(&bel, &x), choquet_oracle(bel.measure(), &x));
        }
    }

    #[test]
    fn indistinguishability_classes_agree_with_pairwise_checks(seed in any::<u64>(), kind in 0usize..4) {
        let d = gen::problem_with_twins(&mut gen::rng(seed), ProblemKind::ALL[kind], Caps::default());
        let classes = indistinguishability_classes(&d).unwrap();
        let names = d.act_names();
        let mut twins = 0;
        for i in 0..names.len() {
            for j in 0..names.len() {
                let same = indistinguishable(&d, &names[i], &names[j]).unwrap();
                prop_assert_eq!(same, classes[i] == classes[j]);
                twins += usize::from(same && i != j);
            }
        }
        prop_assert!(twins > 0);
    }

    #[test]
    fn uniform_tables_are_represented_exactly(seed in any::<u64>(), kind in 0usize..4) {
        let mut rng = gen::rng(seed);
        let d = gen::problem_with_twins(&mut rng, ProblemKind::ALL[kind], Caps { max_acts: 4, ..Caps::default() });
        let table = gen::uniform_table(&mut rng, &d).unwrap();
        let tau = represent_uniform(&table).unwrap();
        prop_assert!(relation_equal(&rule_geu(&tau).unwrap(), table.relation()).unwrap());
    }

    #[test]
    fn weakly_respecting_tables_are_represented_ordinally(seed in any::<u64>(), kind in 0usize..4) {
        let mut rng = gen::rng(seed);
        let d = gen::problem(&mut rng, ProblemKind::ALL[kind], Caps { max_acts: 4, ..Caps::default() });
        let table: RuleTable = gen::weakly_respecting_table(&mut rng, &d).unwrap();
        let tau = represent_ordinal(&table).unwrap();
        prop_assert!(similar(&d, &tau));
        prop_assert!(relation_equal(&rule_geu(&tau).unwrap(), table.relation()).unwrap());
    }

    #[test]
    fn constructed_lottery_situations_round_trip(seed in any::<u64>(), standard in any::<bool>()) {
        let ls = gen::lottery_situation(&mut gen::rng(seed), standard, 16);
        let construct: fn(&LotterySituation) -> geu::Result<PlausibilisticSituation> =
            if standard { construct_situation_standard } else { construct_situation };
        let ps = construct(&ls).unwrap();
        prop_assert!(revalidates(ps.measure(), ps.p_domain()));
        for (k, l) in ls.lotteries().iter().enumerate() {
            prop_assert!(ps.induce_lottery(k).unwrap().same_as(l));
        }
    }

    #[test]
    fn horse_expectation_is_the_two_level_sum_and_survives_flattening(seed in any::<u64>()) {
        let aa = aa_problem(seed);
        let flat = aa.flatten().unwrap();
        for (h, name) in aa.horse_names().iter().enumerate() {
            let value = aa.horse_geu(name).unwrap();
            prop_assert_eq!(rational(&value), horse_oracle(&aa, h));
            prop_assert_eq!(flat.geu(h).unwrap(), value);
        }
    }

    #[test]
    fn builtin_domains_hold_on_extra_probes(us in prop::collection::vec(-50i64..50, 1..6), dens in prop::collection::vec(1i64..9, 1..6)) {
        let extra_u: Vec<Value> = us.iter().zip(dens.iter().cycle()).map(|(&n, &d)| Value::Rational(Rational::new(n.into(), d.into()))).collect();
        let extra_p: Vec<Value> = dens.iter().map(|&d| Value::Rational(Rational::new(1.into(), d.into()))).collect();
        prop_assert!(ExpectationDomain::standard().verify_with(&extra_u, &extra_p).is_ok());
        prop_assert!(ExpectationDomain::e_max(Domain::rationals()).unwrap().verify_with(&extra_u, &[Value::zero(), Value::one()]).is_ok());
    }
}
