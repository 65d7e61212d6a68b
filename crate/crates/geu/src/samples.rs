//! Small ready-made problems, chiefly the three-state belief-function problem
//! on which Choquet expected utility fails to be uniform.

use crate::domain::Domain;
use crate::expectation::ExpectationDomain;
use crate::model::{DecisionProblem, DecisionSituation};
use crate::plausibility::PlausibilityMeasure;
use crate::value::{Rational, Value};

pub fn labels(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// States `s1..s3`, consequences `c1..c3`, `a1(s_j) = c_j`, `a2(s_j) = c_{4-j}`.
pub fn beldr_situation() -> DecisionSituation {
    DecisionSituation::from_labels(
        labels(&["s1", "s2", "s3"]),
        labels(&["c1", "c2", "c3"]),
        vec![
            ("a1".into(), labels(&["c1", "c2", "c3"])),
            ("a2".into(), labels(&["c3", "c2", "c1"])),
        ],
    )
    .expect("valid situation")
}

/// `u(c_j) = j`.
pub fn beldr_utility() -> Vec<Value> {
    (1..=3).map(Value::int).collect()
}

/// `Bel(X) = 1` iff `{s1, s2} ⊆ X`, else 0.
pub fn beldr_belief() -> PlausibilityMeasure {
    PlausibilityMeasure::from_fn(labels(&["s1", "s2", "s3"]), &Domain::unit_interval(), |m| {
        if m & 0b011 == 0b011 {
            Value::one()
        } else {
            Value::zero()
        }
    })
    .expect("belief function")
}

/// The belief-function problem over the standard expectation domain.
pub fn beldr() -> DecisionProblem {
    DecisionProblem::plausibilistic(beldr_situation(), ExpectationDomain::standard(), beldr_utility(), beldr_belief())
        .expect("valid problem")
}

/// The same acts under the uniform probability.
pub fn uniform_beldr() -> DecisionProblem {
    let third = Rational::new(1.into(), 3.into());
    let pl = PlausibilityMeasure::probability(labels(&["s1", "s2", "s3"]), &[third.clone(), third.clone(), third])
        .expect("probability");
    DecisionProblem::plausibilistic(beldr_situation(), ExpectationDomain::standard(), beldr_utility(), pl)
        .expect("valid problem")
}
