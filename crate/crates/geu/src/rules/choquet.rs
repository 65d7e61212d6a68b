//! Nonadditive probabilities, the Choquet integral and the core of a belief function.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::plausibility::{full_set, make_plausibility_measure, subset_value, PlausibilityMeasure, StateSet, MAX_STATES};
use crate::value::{Rational, Value};

/// A nonadditive probability: a plausibility measure into rational `[0,1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BeliefFunction {
    measure: PlausibilityMeasure,
    values: Vec<Rational>,
}

impl BeliefFunction {
    pub fn from_measure(measure: PlausibilityMeasure) -> Result<Self> {
        let values = measure
            .values()
            .iter()
            .map(|v| v.as_rational().cloned())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::NotStandardDomain("measure values are not rational".into()))?;
        // Re-validate against [0,1] in case the measure came from another domain.
        let measure = make_plausibility_measure(measure.states().to_vec(), measure.values().to_vec(), &Domain::unit_interval())?;
        Ok(BeliefFunction { measure, values })
    }

    /// `Bel(X) = Σ_{B ⊆ X} m(B)` from a mass assignment on nonempty focal sets.
    pub fn from_masses(states: Vec<String>, masses: &[(StateSet, Rational)]) -> Result<Self> {
        if states.len() > MAX_STATES {
            return Err(Error::TooLarge(states.len(), MAX_STATES));
        }
        let full = full_set(states.len());
        let mut m = vec![Rational::zero(); 1 << states.len()];
        for (focal, mass) in masses {
            if *focal == 0 || focal & !full != 0 || mass.is_negative() {
                return Err(Error::NotAProbability("mass assignment".into()));
            }
            m[*focal as usize] += mass;
        }
        zeta(&mut m, states.len());
        let measure = PlausibilityMeasure::from_fn(states, &Domain::unit_interval(), |x| Value::Rational(m[x as usize].clone()))
            .map_err(|_| Error::NotAProbability("mass assignment".into()))?;
        Self::from_measure(measure)
    }

    pub fn measure(&self) -> &PlausibilityMeasure {
        &self.measure
    }

    pub fn states(&self) -> &[String] {
        self.measure.states()
    }

    pub fn get(&self, mask: StateSet) -> &Rational {
        &self.values[mask as usize]
    }

    /// The Möbius inverse `m(X) = Σ_{B ⊆ X} (−1)^{|X∖B|} ν(B)`.
    pub fn masses(&self) -> Vec<Rational> {
        let mut m = self.values.clone();
        let n = self.states().len();
        for i in 0..n {
            for mask in 0..m.len() {
                if mask >> i & 1 == 1 {
                    let lower = m[mask ^ 1 << i].clone();
                    m[mask] -= lower;
                }
            }
        }
        m
    }

    /// Total monotonicity, decided exactly through nonnegativity of the
    /// Möbius inverse.
    pub fn is_totally_monotone(&self) -> bool {
        self.masses().iter().all(|m| !m.is_negative())
    }
}

fn zeta(m: &mut [Rational], n: usize) {
    for i in 0..n {
        for mask in 0..m.len() {
            if mask >> i & 1 == 1 {
                let lower = m[mask ^ 1 << i].clone();
                m[mask] += lower;
            }
        }
    }
}

/// `u_1 + Σ_{i≥2} ν(X_i)(u_i − u_{i−1})` over the distinct values
/// `u_1 < … < u_n` of `rv`, with `X_i` the states where `rv ≥ u_i`.
pub fn choquet_expectation(nu: &BeliefFunction, rv: &[Rational]) -> Rational {
    let levels: BTreeSet<&Rational> = rv.iter().collect();
    let mut it = levels.into_iter();
    let Some(first) = it.next() else { return Rational::zero() };
    let mut total = first.clone();
    let mut prev = first;
    for level in it {
        let upper: StateSet = rv
            .iter()
            .enumerate()
            .filter(|(_, u)| *u >= level)
            .fold(0, |acc, (s, _)| acc | 1 << s);
        total += nu.get(upper) * (level - prev);
        prev = level;
    }
    total
}

/// Largest state space whose permutations are enumerated.
pub const MAX_CORE_STATES: usize = 8;

/// Permutation marginals `Pr_π(s_{π(k)}) = ν(first k under π) − ν(first k−1)`,
/// deduplicated and sorted. Each marginal must dominate `ν`; for belief
/// functions (indeed any supermodular capacity) they all do, and then they
/// are exactly the extreme points of the core.
pub fn core_extreme_points(bel: &BeliefFunction) -> Result<Vec<Vec<Rational>>> {
    let n = bel.states().len();
    if n > MAX_CORE_STATES {
        return Err(Error::TooLarge(n, MAX_CORE_STATES));
    }
    let mut out: BTreeSet<Vec<Rational>> = BTreeSet::new();
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |order| {
        let mut atoms = vec![Rational::zero(); n];
        let mut prefix: StateSet = 0;
        for &s in order {
            let next = prefix | 1 << s;
            atoms[s] = bel.get(next) - bel.get(prefix);
            prefix = next;
        }
        out.insert(atoms);
    });
    for atoms in &out {
        let mut pr = vec![Rational::zero(); 1 << n];
        for mask in 1..pr.len() {
            let low = mask & mask.wrapping_neg();
            pr[mask] = &pr[mask ^ low] + &atoms[low.trailing_zeros() as usize];
        }
        if let Some(x) = (0..pr.len()).find(|&x| pr[x] < *bel.get(x as StateSet)) {
            return Err(Error::NotABeliefFunction {
                subset: subset_value(bel.states(), x as StateSet),
                shortfall: Value::Rational(bel.get(x as StateSet) - &pr[x]),
            });
        }
    }
    Ok(out.into_iter().collect())
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}
