//! Plausibility measures over finite state spaces.
//!
//! Subsets of the state space are bitmasks: bit `i` stands for the `i`-th
//! state. Measures are stored as full tables indexed by mask, so the state
//! space is capped at [`MAX_STATES`].

use num_traits::{One, Signed, Zero};

use crate::domain::{BuiltinKind, Carrier, Domain, Order};
use crate::error::{Axiom, Error, Result};
use crate::value::{Rational, Value};

/// Largest state space for which powerset tables are built.
pub const MAX_STATES: usize = 16;

/// A subset of states as a bitmask.
pub type StateSet = u64;

pub fn full_set(n: usize) -> StateSet {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Indices of the states in `mask`, ascending.
pub fn members(mask: StateSet) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

/// Renders a subset as a set of state symbols.
pub fn subset_value(states: &[String], mask: StateSet) -> Value {
    Value::set(members(mask).map(|i| Value::sym(states[i].clone())))
}

/// A validated map `2^S → P`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlausibilityMeasure {
    states: Vec<String>,
    values: Vec<Value>,
}

/// Validates `assignment` (indexed by subset mask) against Pl1–Pl3 in `p`.
pub fn make_plausibility_measure(
    states: Vec<String>,
    assignment: Vec<Value>,
    p: &Domain,
) -> Result<PlausibilityMeasure> {
    let n = states.len();
    if n > MAX_STATES {
        return Err(Error::TooLarge(n, MAX_STATES));
    }
    if assignment.len() != 1 << n {
        return Err(Error::InvalidProblem(format!(
            "measure table has {} entries, expected {}",
            assignment.len(),
            1usize << n
        )));
    }
    let mut sorted = states.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != n {
        return Err(Error::InvalidProblem("duplicate state labels".into()));
    }
    let pl = PlausibilityMeasure { states, values: assignment };
    pl.validate(p)?;
    Ok(pl)
}

impl PlausibilityMeasure {
    /// Tabulates `f` over the powerset and validates the result.
    pub fn from_fn(states: Vec<String>, p: &Domain, f: impl Fn(StateSet) -> Value) -> Result<Self> {
        if states.len() > MAX_STATES {
            return Err(Error::TooLarge(states.len(), MAX_STATES));
        }
        let values = (0..1u64 << states.len()).map(f).collect();
        make_plausibility_measure(states, values, p)
    }

    /// The measure `Pr(X) = Σ_{s∈X} atoms[s]` into `[0,1]`.
    pub fn probability(states: Vec<String>, atoms: &[Rational]) -> Result<Self> {
        check_probability("Pr", atoms)?;
        if atoms.len() != states.len() {
            return Err(Error::InvalidProblem("one atom per state required".into()));
        }
        Self::from_fn(states, &Domain::unit_interval(), |mask| {
            Value::Rational(members(mask).map(|i| atoms[i].clone()).sum())
        })
    }

    fn validate(&self, p: &Domain) -> Result<()> {
        let (bottom, top) = match (p.bottom(), p.top()) {
            (Some(b), Some(t)) => (b, t),
            _ => return Err(Error::InvalidDomain("plausibility domain needs bottom and top".into())),
        };
        if let Some((mask, v)) = self.values.iter().enumerate().find(|(_, v)| !p.contains(v)) {
            return Err(Error::InvalidProblem(format!(
                "Pl({}) = {v} is outside the plausibility domain",
                subset_value(&self.states, mask as u64)
            )));
        }
        if self.values[0] != *bottom {
            return Err(Error::AxiomViolation { axiom: Axiom::Pl1, witness: vec![Value::set([]), self.values[0].clone()] });
        }
        let full = self.full();
        if self.values[full as usize] != *top {
            return Err(Error::AxiomViolation {
                axiom: Axiom::Pl2,
                witness: vec![subset_value(&self.states, full), self.values[full as usize].clone()],
            });
        }
        if let Some((x, y)) = self.monotonicity_violation(p) {
            return Err(Error::AxiomViolation {
                axiom: Axiom::Pl3,
                witness: vec![subset_value(&self.states, x), subset_value(&self.states, y)],
            });
        }
        Ok(())
    }

    /// First pair `X ⊆ Y` with `Pl(X) ⋠ Pl(Y)`. With a transitive order the
    /// covering pairs `X ⊂ X ∪ {s}` suffice; otherwise every pair is checked.
    fn monotonicity_violation(&self, p: &Domain) -> Option<(StateSet, StateSet)> {
        let n = self.states.len();
        let full = self.full();
        if p.is_transitive() {
            for x in 0..=full {
                for i in 0..n {
                    let y = x | 1 << i;
                    if y != x && !p.leq(&self.values[x as usize], &self.values[y as usize]) {
                        return Some((x, y));
                    }
                }
            }
        } else {
            for y in 0..=full {
                // Every submask x of y.
                let mut x = y;
                loop {
                    if !p.leq(&self.values[x as usize], &self.values[y as usize]) {
                        return Some((x, y));
                    }
                    if x == 0 {
                        break;
                    }
                    x = (x - 1) & y;
                }
            }
        }
        None
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn full(&self) -> StateSet {
        full_set(self.states.len())
    }

    pub fn get(&self, mask: StateSet) -> &Value {
        &self.values[mask as usize]
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    /// Atoms of the measure if it is an additive rational measure.
    pub fn as_probability(&self) -> Option<Vec<Rational>> {
        additive_atoms(self.states.len(), |mask| self.values[mask as usize].as_rational().cloned())
    }

    /// The named probability measures behind a measure produced by
    /// [`make_pl_from_probability_set`], recognised from the shape of `p`.
    pub fn as_probability_set(&self, p: &Domain) -> Result<Vec<(String, Vec<Rational>)>> {
        let index = match (p.carrier(), p.order()) {
            (Carrier::Builtin(BuiltinKind::VectorsOverIndex { index, unit_entries: true }), Order::Pointwise(inner))
                if **inner == Order::Numeric =>
            {
                index
            }
            _ => return Err(Error::NotCredalProblem("plausibility domain is not [0,1]^P ordered pointwise".into())),
        };
        index
            .iter()
            .map(|name| {
                let atoms = additive_atoms(self.states.len(), |mask| {
                    self.values[mask as usize].as_vector()?.get(name)?.as_rational().cloned()
                })
                .ok_or_else(|| Error::NotCredalProblem(format!("component {name} is not additive")))?;
                Ok((name.clone(), atoms))
            })
            .collect()
    }
}

fn additive_atoms(n: usize, value: impl Fn(StateSet) -> Option<Rational>) -> Option<Vec<Rational>> {
    let atoms: Vec<Rational> = (0..n).map(|i| value(1 << i)).collect::<Option<_>>()?;
    for mask in 1..=full_set(n) {
        let low = mask & mask.wrapping_neg();
        let expect = value(mask ^ low)? + &atoms[low.trailing_zeros() as usize];
        if value(mask)? != expect {
            return None;
        }
    }
    if !value(0)?.is_zero() {
        return None;
    }
    Some(atoms)
}

fn check_probability(name: &str, atoms: &[Rational]) -> Result<()> {
    let total: Rational = atoms.iter().cloned().sum();
    if atoms.iter().any(|a| a.is_negative()) || !total.is_one() {
        return Err(Error::NotAProbability(name.to_string()));
    }
    Ok(())
}

/// Represents a finite set of probability measures as one plausibility
/// measure into `[0,1]^𝒫` (ordered pointwise): `Pl(X) = (Pr ↦ Pr(X))`.
pub fn make_pl_from_probability_set(
    states: Vec<String>,
    measures: &[(String, Vec<Rational>)],
) -> Result<(Domain, PlausibilityMeasure)> {
    if measures.is_empty() {
        return Err(Error::InvalidProblem("empty set of probability measures".into()));
    }
    let mut names: Vec<String> = measures.iter().map(|(n, _)| n.clone()).collect();
    for (name, atoms) in measures {
        if atoms.len() != states.len() {
            return Err(Error::NotAProbability(name.clone()));
        }
        check_probability(name, atoms)?;
    }
    names.sort();
    names.dedup();
    if names.len() != measures.len() {
        return Err(Error::InvalidProblem("duplicate probability measure names".into()));
    }
    let constant = |x: Value| Value::vector(names.iter().map(|k| (k.clone(), x.clone())));
    let domain = Domain::plausibility(
        Carrier::Builtin(BuiltinKind::VectorsOverIndex { index: names.clone(), unit_entries: true }),
        Order::Pointwise(Box::new(Order::Numeric)),
        constant(Value::zero()),
        constant(Value::one()),
    )?;
    let pl = PlausibilityMeasure::from_fn(states, &domain, |mask| {
        Value::vector(measures.iter().map(|(name, atoms)| {
            let pr: Rational = members(mask).map(|i| atoms[i].clone()).sum();
            (name.clone(), Value::Rational(pr))
        }))
    })?;
    Ok((domain, pl))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::check_order_properties_on;

    fn s3() -> Vec<String> {
        vec!["s1".into(), "s2".into(), "s3".into()]
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn uniform_probability_accepted() {
        let pl = PlausibilityMeasure::probability(s3(), &[r(1, 3), r(1, 3), r(1, 3)]).unwrap();
        assert_eq!(*pl.get(0b011), Value::ratio(2, 3));
        assert_eq!(pl.as_probability().unwrap(), vec![r(1, 3); 3]);
    }

    #[test]
    fn example_belief_function_accepted() {
        let bel = PlausibilityMeasure::from_fn(s3(), &Domain::unit_interval(), |m| {
            if m & 0b011 == 0b011 { Value::one() } else { Value::zero() }
        })
        .unwrap();
        assert_eq!(*bel.get(0b011), Value::one());
        assert!(bel.as_probability().is_none());
    }

    #[test]
    fn monotonicity_violation_reported_with_witness() {
        let states = vec!["s1".to_string(), "s2".to_string()];
        // Pl({s1}) = 1 but Pl({s1,s2}) = 0 would also break Pl2; use three states.
        let values = (0..8u64)
            .map(|m| match m {
                0b001 => Value::one(),
                0b011 => Value::zero(),
                0b111 => Value::one(),
                _ => Value::zero(),
            })
            .collect();
        let err = make_plausibility_measure(s3(), values, &Domain::unit_interval()).unwrap_err();
        match err {
            Error::AxiomViolation { axiom: Axiom::Pl3, witness } => {
                assert_eq!(witness[0], subset_value(&s3(), 0b001));
                assert_eq!(witness[1], subset_value(&s3(), 0b011));
            }
            other => panic!("unexpected {other:?}"),
        }
        let bad_bottom = vec![Value::one(); 4];
        assert!(matches!(
            make_plausibility_measure(states, bad_bottom, &Domain::unit_interval()),
            Err(Error::AxiomViolation { axiom: Axiom::Pl1, .. })
        ));
    }

    #[test]
    fn point_masses_give_vector_plausibilities() {
        let measures = vec![
            ("d1".to_string(), vec![r(1, 1), r(0, 1), r(0, 1)]),
            ("d3".to_string(), vec![r(0, 1), r(0, 1), r(1, 1)]),
        ];
        let (domain, pl) = make_pl_from_probability_set(s3(), &measures).unwrap();
        assert_eq!(*pl.get(0b001), Value::vector([("d1", Value::one()), ("d3", Value::zero())]));
        assert_eq!(pl.get(0), domain.bottom().unwrap());
        let report = check_order_properties_on(&domain, pl.values());
        assert!(report.antisymmetric && !report.total);
        assert_eq!(pl.as_probability_set(&domain).unwrap(), measures);
    }

    #[test]
    fn uniform_and_point_mass_vector() {
        let measures = vec![
            ("uniform".to_string(), vec![r(1, 3); 3]),
            ("d1".to_string(), vec![r(1, 1), r(0, 1), r(0, 1)]),
        ];
        let (_, pl) = make_pl_from_probability_set(s3(), &measures).unwrap();
        assert_eq!(
            *pl.get(0b011),
            Value::vector([("uniform", Value::ratio(2, 3)), ("d1", Value::one())])
        );
    }

    #[test]
    fn non_normalised_measure_rejected() {
        let measures = vec![("bad".to_string(), vec![r(1, 2), r(1, 3), r(0, 1)])];
        assert!(matches!(
            make_pl_from_probability_set(s3(), &measures),
            Err(Error::NotAProbability(name)) if name == "bad"
        ));
    }
}
