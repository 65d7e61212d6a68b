use std::fmt;

use thiserror::Error;

use crate::value::Value;

/// Axioms checked on expectation domains and plausibility measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    E1,
    E2,
    E3,
    E4,
    Pl1,
    Pl2,
    Pl3,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::E1 => "E1 (associativity of oplus)",
            Axiom::E2 => "E2 (commutativity of oplus)",
            Axiom::E3 => "E3 (top is a left identity of otimes)",
            Axiom::E4 => "E4 (utility order embeds into valuation order)",
            Axiom::Pl1 => "Pl1 (empty set is bottom)",
            Axiom::Pl2 => "Pl2 (whole space is top)",
            Axiom::Pl3 => "Pl3 (monotonicity)",
        };
        f.write_str(s)
    }
}

fn render(values: &[Value]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("axiom {axiom} violated at {}", render(.witness))]
    AxiomViolation { axiom: Axiom, witness: Vec<Value> },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("operation undefined: {0}")]
    OperationUndefined(String),

    #[error("measure {0} is not a probability measure")]
    NotAProbability(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("unknown act {0}")]
    UnknownAct(String),

    #[error("unknown lottery {0}")]
    UnknownLottery(String),

    #[error("problem is not plausibilistic")]
    NotPlausibilistic,

    #[error("problem is not standard: {0}")]
    NotStandard(String),

    #[error("relations are over different act universes")]
    UniverseMismatch,

    #[error("utility values in use are not totally ordered: {0} and {1} are incomparable")]
    NotTotallyOrdered(Value, Value),

    #[error("utility {0} is not numeric")]
    NonNumericUtility(Value),

    #[error("plausibility measure is not induced by a set of probability measures: {0}")]
    NotCredalProblem(String),

    #[error("expectation domain is not the standard one: {0}")]
    NotStandardDomain(String),

    #[error("not a belief function: a permutation marginal falls short of the capacity on {subset} by {shortfall}")]
    NotABeliefFunction { subset: Value, shortfall: Value },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("relation is not uniform: {a1} ~ {b1} and {a2} ~ {b2} but ({a1}, {a2}) and ({b1}, {b2}) are treated differently")]
    NotUniform { a1: String, a2: String, b1: String, b2: String },

    #[error("relation does not respect utility on constant-utility acts {0} and {1}")]
    NotRespectingUtility(String, String),

    #[error("relation does not weakly respect utility on constant acts {0} and {1}")]
    NotWeaklyRespectingUtility(String, String),

    #[error("relation is not reflexive at {0}; every valuation order is")]
    NotReflexive(String),

    #[error("state space too large: {0} states (cap {1})")]
    TooLarge(usize, usize),

    #[error("AA problem has no outer expectation domain and plausibility measure")]
    MissingOuterPart,
}

pub type Result<T> = std::result::Result<T, Error>;
