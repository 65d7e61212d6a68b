//! Generalized expected utility (GEU) over arbitrary expectation domains.
//!
//! The crate covers ordered domains and plausibility measures, decision
//! problems and the GEU formula, a catalogue of decision rules (EU, maximin,
//! minimax regret, maxmin EU, Choquet EU), the machinery for representing a
//! rule as GEU (congruence, similarity, uniformity and the two constructive
//! representations), the lottery framework and Anscombe-Aumann horse
//! lotteries. Everything is finite and checked exactly.

// Errors carry their witnesses by value; boxing them would only obscure
// the matches that inspect them.
#![allow(clippy::result_large_err)]

pub mod domain;
pub mod error;
pub mod expectation;
pub mod gen;
pub mod horse;
pub mod lottery;
pub mod model;
pub mod plausibility;
pub mod represent;
pub mod rules;
pub mod samples;
#[cfg(test)]
mod testing;
pub mod value;

pub use domain::{check_order_properties, check_order_properties_on, BuiltinKind, Carrier, Domain, Order, OrderReport};
pub use error::{Axiom, Error, Result};
pub use expectation::{make_expectation_domain, CustomOp, Embed, ExpectationDomain, Oplus, Otimes};
pub use model::{relation_equal, Act, DecisionProblem, DecisionSituation, PreferenceRelation};
pub use plausibility::{make_pl_from_probability_set, make_plausibility_measure, PlausibilityMeasure, StateSet};
pub use value::{Rational, Value};
