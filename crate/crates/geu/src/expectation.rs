//! Expectation domains `(U, P, V, ⊗, ⊕)` and their axiom checks.
//!
//! An expectation domain is accepted only after E1–E4 have been checked:
//! exhaustively where the carriers are finite, otherwise on a fixed probe
//! set of [`PROBES`] seeded samples (plus any caller-supplied values, which
//! is how constructions make sure the values they actually use are covered).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{BuiltinKind, Carrier, Domain, Order};
use crate::error::{Axiom, Error, Result};
use crate::value::{numeric_add, numeric_min, numeric_mul, Value};

/// Number of seeded samples used for axiom checks on infinite carriers.
pub const PROBES: usize = 1000;
const PROBE_SEED: u64 = 0x6765_7500;

pub type BinaryFn = dyn Fn(&Value, &Value) -> Option<Value> + Send + Sync;

/// A user-supplied binary operation.
#[derive(Clone)]
pub struct CustomOp {
    pub name: String,
    pub f: Arc<BinaryFn>,
}

impl CustomOp {
    pub fn new(name: impl Into<String>, f: impl Fn(&Value, &Value) -> Option<Value> + Send + Sync + 'static) -> Self {
        CustomOp { name: name.into(), f: Arc::new(f) }
    }
}

impl fmt::Debug for CustomOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomOp({})", self.name)
    }
}

/// `⊗ : P × U → V`.
#[derive(Clone, Debug)]
pub enum Otimes {
    /// Numeric product.
    Multiply,
    /// `1 ⊗ x = x`, `0 ⊗ x = ∞`.
    SelectOrInfinity,
    /// `p ⊗ x = x − ln p` for `p > 0`, `0 ⊗ x = ∞`.
    LogPenalty,
    /// Scalar multiple of a vector of probabilities: `(p ⊗ u)(i) = u · p(i)`.
    ScaleVector,
    /// `p ⊗ u = {(p, u)}`.
    SingletonPair,
    /// `X ⊗ u = X × {u}`; `p` is a set `X` or a pair `(q, X)`.
    SetTimes,
    Table(BTreeMap<(Value, Value), Value>),
    Custom(CustomOp),
}

/// `⊕ : V × V → V`.
#[derive(Clone, Debug)]
pub enum Oplus {
    Add,
    Min,
    PointwiseAdd,
    Union,
    Table(BTreeMap<(Value, Value), Value>),
    Custom(CustomOp),
}

/// Injection of `U` into `V` used to read E3 and E4.
#[derive(Clone, Debug, PartialEq)]
pub enum Embed {
    Identity,
    /// `u ↦` the constant vector over the index.
    ConstantVector(Vec<String>),
    /// `u ↦ S × {u}`.
    StateGraph(Vec<Value>),
    /// `u ↦ {(⊤, u)}`.
    TopPair(Value),
    Table(BTreeMap<Value, Value>),
}

impl Embed {
    pub fn apply(&self, u: &Value) -> Option<Value> {
        match self {
            Embed::Identity => Some(u.clone()),
            Embed::ConstantVector(index) => Some(Value::vector(index.iter().map(|k| (k.clone(), u.clone())))),
            Embed::StateGraph(states) => {
                Some(Value::set(states.iter().map(|s| Value::pair(s.clone(), u.clone()))))
            }
            Embed::TopPair(top) => Some(Value::set([Value::pair(top.clone(), u.clone())])),
            Embed::Table(t) => t.get(u).cloned(),
        }
    }

    /// The utility `u` with `apply(u) == v`, if `v` is in the image.
    pub fn invert(&self, v: &Value) -> Option<Value> {
        match self {
            Embed::Identity => Some(v.clone()),
            Embed::ConstantVector(index) => {
                let m = v.as_vector()?;
                let first = m.get(index.first()?)?;
                (m.len() == index.len() && index.iter().all(|k| m.get(k) == Some(first))).then(|| first.clone())
            }
            Embed::StateGraph(states) => {
                let set = v.as_set()?;
                if set.len() != states.len() {
                    return None;
                }
                let mut u: Option<&Value> = None;
                for (item, s) in set.iter().zip(sorted(states)) {
                    let (a, b) = item.as_pair()?;
                    if a != s || u.is_some_and(|x| x != b) {
                        return None;
                    }
                    u = Some(b);
                }
                u.cloned()
            }
            Embed::TopPair(top) => {
                let set = v.as_set()?;
                if set.len() != 1 {
                    return None;
                }
                let (p, u) = set.iter().next()?.as_pair()?;
                (p == top).then(|| u.clone())
            }
            Embed::Table(t) => t.iter().find(|(_, x)| *x == v).map(|(u, _)| u.clone()),
        }
    }
}

fn sorted(states: &[Value]) -> Vec<&Value> {
    let mut v: Vec<&Value> = states.iter().collect();
    v.sort();
    v
}

impl Otimes {
    pub fn apply(&self, p: &Value, u: &Value) -> Option<Value> {
        match self {
            Otimes::Multiply => numeric_mul(p, u),
            Otimes::SelectOrInfinity => {
                if *p == Value::one() {
                    Some(u.clone())
                } else if *p == Value::zero() {
                    Some(Value::PosInfinity)
                } else {
                    None
                }
            }
            Otimes::LogPenalty => {
                let x = p.to_f64()?;
                if x == 0.0 {
                    Some(Value::PosInfinity)
                } else if *p == Value::one() {
                    Some(u.clone())
                } else if x > 0.0 {
                    Some(Value::Real(u.to_f64()? - x.ln()))
                } else {
                    None
                }
            }
            Otimes::ScaleVector => {
                let m = p.as_vector()?;
                let scaled: Option<Vec<(String, Value)>> =
                    m.iter().map(|(k, x)| Some((k.clone(), numeric_mul(u, x)?))).collect();
                Some(Value::vector(scaled?))
            }
            Otimes::SingletonPair => Some(Value::set([Value::pair(p.clone(), u.clone())])),
            Otimes::SetTimes => {
                let states = match p {
                    Value::Set(s) => s,
                    Value::Pair(_, x) => x.as_set()?,
                    _ => return None,
                };
                Some(Value::set(states.iter().map(|s| Value::pair(s.clone(), u.clone()))))
            }
            Otimes::Table(t) => t.get(&(p.clone(), u.clone())).cloned(),
            Otimes::Custom(op) => (op.f)(p, u),
        }
    }
}

impl Oplus {
    pub fn apply(&self, x: &Value, y: &Value) -> Option<Value> {
        match self {
            Oplus::Add => numeric_add(x, y),
            Oplus::Min => numeric_min(x, y),
            Oplus::PointwiseAdd => {
                let (a, b) = (x.as_vector()?, y.as_vector()?);
                if a.len() != b.len() {
                    return None;
                }
                let sum: Option<Vec<(String, Value)>> = a
                    .iter()
                    .map(|(k, xv)| Some((k.clone(), numeric_add(xv, b.get(k)?)?)))
                    .collect();
                Some(Value::vector(sum?))
            }
            Oplus::Union => {
                let (a, b) = (x.as_set()?, y.as_set()?);
                Some(Value::Set(a.union(b).cloned().collect()))
            }
            Oplus::Table(t) => t.get(&(x.clone(), y.clone())).cloned(),
            Oplus::Custom(op) => (op.f)(x, y),
        }
    }
}

/// A verified expectation domain.
#[derive(Clone, Debug)]
pub struct ExpectationDomain {
    name: String,
    u: Domain,
    p: Domain,
    v: Domain,
    otimes: Otimes,
    oplus: Oplus,
    embed: Embed,
}

/// Builds and verifies an expectation domain.
pub fn make_expectation_domain(
    name: impl Into<String>,
    u: Domain,
    p: Domain,
    v: Domain,
    otimes: Otimes,
    oplus: Oplus,
    embed: Embed,
) -> Result<ExpectationDomain> {
    let e = ExpectationDomain::assemble(name, u, p, v, otimes, oplus, embed)?;
    e.verify_with(&[], &[])?;
    Ok(e)
}

/// Verifies a domain built by one of the named constructors. The operations
/// are fixed by the name, so a verified `(name, U, P)` needs no second pass.
fn verify_builtin(e: ExpectationDomain) -> Result<ExpectationDomain> {
    static VERIFIED: Mutex<Vec<(String, Domain, Domain)>> = Mutex::new(Vec::new());
    let seen = |e: &ExpectationDomain| {
        let verified = VERIFIED.lock().unwrap_or_else(|p| p.into_inner());
        verified.iter().any(|(n, u, p)| *n == e.name && *u == e.u && *p == e.p)
    };
    if !seen(&e) {
        e.verify_with(&[], &[])?;
        VERIFIED.lock().unwrap_or_else(|p| p.into_inner()).push((e.name.clone(), e.u.clone(), e.p.clone()));
    }
    Ok(e)
}

impl ExpectationDomain {
    /// Assembles the tuple without running the axiom checks.
    pub(crate) fn assemble(
        name: impl Into<String>,
        u: Domain,
        p: Domain,
        v: Domain,
        otimes: Otimes,
        oplus: Oplus,
        embed: Embed,
    ) -> Result<ExpectationDomain> {
        if p.top().is_none() || p.bottom().is_none() {
            return Err(Error::InvalidDomain("plausibility domain needs bottom and top".into()));
        }
        Ok(ExpectationDomain { name: name.into(), u, p, v, otimes, oplus, embed })
    }

    /// The standard domain `(ℝ, [0,1], ℝ, +, ×)`.
    pub fn standard() -> ExpectationDomain {
        static STANDARD: OnceLock<ExpectationDomain> = OnceLock::new();
        STANDARD.get_or_init(Self::build_standard).clone()
    }

    fn build_standard() -> ExpectationDomain {
        make_expectation_domain(
            "standard",
            Domain::reals(),
            Domain::unit_interval(),
            Domain::reals(),
            Otimes::Multiply,
            Oplus::Add,
            Embed::Identity,
        )
        .expect("the standard expectation domain satisfies E1-E4")
    }

    /// `(U, {0,1}, ℝ ∪ {∞}, min, ⊗)` with `1 ⊗ x = x`, `0 ⊗ x = ∞`.
    pub fn e_max(u: Domain) -> Result<ExpectationDomain> {
        let p = Domain::plausibility(
            Carrier::Finite(vec![Value::zero(), Value::one()]),
            Order::Numeric,
            Value::zero(),
            Value::one(),
        )?;
        let e = Self::assemble("max", u, p, Domain::reals_with_inf(), Otimes::SelectOrInfinity, Oplus::Min, Embed::Identity)?;
        verify_builtin(e)
    }

    /// `(U, [0,1], ℝ ∪ {∞}, min, ⊗)` with `x ⊗ y = y − ln x`, `0 ⊗ y = ∞`.
    ///
    /// The valuation order tolerates `tol` of rounding from `exp`/`ln`.
    pub fn e_reg(u: Domain, tol: f64) -> ExpectationDomain {
        let v = Domain::new(Carrier::Builtin(BuiltinKind::RealsWithPosInf), Order::NumericWithin(tol))
            .expect("builtin");
        ExpectationDomain {
            name: "reg".into(),
            u,
            p: Domain::unit_interval(),
            v,
            otimes: Otimes::LogPenalty,
            oplus: Oplus::Min,
            embed: Embed::Identity,
        }
    }

    /// `(U, [0,1]^𝒫, ℝ^𝒫, pointwise +, scalar ×)` with vectors ordered by their infimum.
    pub fn e_credal(u: Domain, p: Domain) -> Result<ExpectationDomain> {
        let index = match p.carrier() {
            Carrier::Builtin(BuiltinKind::VectorsOverIndex { index, unit_entries: true }) => index.clone(),
            _ => return Err(Error::DomainMismatch("plausibility domain is not [0,1]^P".into())),
        };
        let v = Domain::new(
            Carrier::Builtin(BuiltinKind::VectorsOverIndex { index: index.clone(), unit_entries: false }),
            Order::ByInfimum,
        )?;
        let e = Self::assemble("credal", u, p, v, Otimes::ScaleVector, Oplus::PointwiseAdd, Embed::ConstantVector(index))?;
        verify_builtin(e)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn u_domain(&self) -> &Domain {
        &self.u
    }

    pub fn p_domain(&self) -> &Domain {
        &self.p
    }

    pub fn v_domain(&self) -> &Domain {
        &self.v
    }

    pub fn otimes_op(&self) -> &Otimes {
        &self.otimes
    }

    pub fn oplus_op(&self) -> &Oplus {
        &self.oplus
    }

    pub fn embedding(&self) -> &Embed {
        &self.embed
    }

    pub fn top(&self) -> &Value {
        self.p.top().expect("checked at assembly")
    }

    pub fn bottom(&self) -> &Value {
        self.p.bottom().expect("checked at assembly")
    }

    pub fn otimes(&self, p: &Value, u: &Value) -> Result<Value> {
        self.otimes
            .apply(p, u)
            .ok_or_else(|| Error::OperationUndefined(format!("{p} otimes {u}")))
    }

    pub fn oplus(&self, x: &Value, y: &Value) -> Result<Value> {
        self.oplus
            .apply(x, y)
            .ok_or_else(|| Error::OperationUndefined(format!("{x} oplus {y}")))
    }

    pub fn embed(&self, u: &Value) -> Result<Value> {
        self.embed
            .apply(u)
            .ok_or_else(|| Error::OperationUndefined(format!("embedding of {u}")))
    }

    /// Folds `⊕` over the terms in the given order.
    pub fn sum<'a, I: IntoIterator<Item = &'a Value>>(&self, terms: I) -> Result<Value> {
        let mut it = terms.into_iter();
        let mut acc = it
            .next()
            .ok_or_else(|| Error::OperationUndefined("empty oplus".into()))?
            .clone();
        for t in it {
            acc = self.oplus(&acc, t)?;
        }
        Ok(acc)
    }

    pub fn v_leq(&self, a: &Value, b: &Value) -> bool {
        self.v.leq(a, b)
    }

    /// Checks E1–E4 on the probe set, extended by the given utilities and
    /// plausibilities.
    pub fn verify_with(&self, extra_u: &[Value], extra_p: &[Value]) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
        let us = probe(&self.u, extra_u, &mut rng);
        let mut ps = probe(&self.p, extra_p, &mut rng);
        ps.push(self.top().clone());
        ps.push(self.bottom().clone());
        ps.sort();
        ps.dedup();
        for u in &us {
            if !self.u.contains(u) {
                return Err(Error::InvalidDomain(format!("utility {u} is outside U")));
            }
        }

        // Valuation pool: V itself when finite, otherwise images of ⊗ and
        // the embedding, closed once under ⊕ of neighbours.
        let pool: Vec<Value> = match self.v.carrier().enumerate() {
            Some(items) => items,
            None => {
                let mut pool = Vec::new();
                for u in &us {
                    pool.push(self.embed(u)?);
                }
                let step = ps.len().max(1);
                for (i, u) in us.iter().enumerate() {
                    pool.push(self.otimes(&ps[i % step], u)?);
                    pool.push(self.otimes(&ps[(i * 7 + 3) % step], u)?);
                }
                for p in extra_p {
                    for u in extra_u {
                        pool.push(self.otimes(p, u)?);
                    }
                }
                let base = pool.len();
                for i in 0..base.min(PROBES) {
                    let s = self.oplus(&pool[i], &pool[(i + 1) % base])?;
                    pool.push(s);
                }
                dedup_stable(pool)
            }
        };
        for x in &pool {
            if !self.v.contains(x) {
                return Err(Error::OperationUndefined(format!("{x} lies outside V")));
            }
        }

        // E2
        for (x, y) in pair_probe(pool.len(), &mut rng) {
            let (x, y) = (&pool[x], &pool[y]);
            if self.oplus(x, y)? != self.oplus(y, x)? {
                return Err(Error::AxiomViolation { axiom: Axiom::E2, witness: vec![x.clone(), y.clone()] });
            }
        }
        // E1
        for (x, y, z) in triple_probe(pool.len(), &mut rng) {
            let (x, y, z) = (&pool[x], &pool[y], &pool[z]);
            let left = self.oplus(&self.oplus(x, y)?, z)?;
            let right = self.oplus(x, &self.oplus(y, z)?)?;
            if left != right {
                return Err(Error::AxiomViolation {
                    axiom: Axiom::E1,
                    witness: vec![x.clone(), y.clone(), z.clone()],
                });
            }
        }
        // E3
        for u in &us {
            if self.otimes(self.top(), u)? != self.embed(u)? {
                return Err(Error::AxiomViolation { axiom: Axiom::E3, witness: vec![u.clone()] });
            }
        }
        // E4
        let embedded: Vec<Value> = us.iter().map(|u| self.embed(u)).collect::<Result<_>>()?;
        for (i, j) in pair_probe(us.len(), &mut rng).into_iter().flat_map(|(i, j)| [(i, j), (j, i)]) {
            if self.u.leq(&us[i], &us[j]) != self.v.leq(&embedded[i], &embedded[j]) {
                return Err(Error::AxiomViolation { axiom: Axiom::E4, witness: vec![us[i].clone(), us[j].clone()] });
            }
        }
        // The embedding must be injective for U to be a substructure of V.
        let mut preimage: BTreeMap<&Value, &Value> = BTreeMap::new();
        for (u, e) in us.iter().zip(&embedded) {
            if let Some(prev) = preimage.insert(e, u) {
                return Err(Error::AxiomViolation { axiom: Axiom::E4, witness: vec![prev.clone(), u.clone()] });
            }
        }
        Ok(())
    }
}

fn dedup_stable(items: Vec<Value>) -> Vec<Value> {
    let mut seen = std::collections::BTreeSet::new();
    items.into_iter().filter(|v| seen.insert(v.clone())).collect()
}

/// Probe elements: the whole carrier when finite, otherwise the caller's
/// values followed by `PROBES` seeded samples.
fn probe<R: Rng>(d: &Domain, extra: &[Value], rng: &mut R) -> Vec<Value> {
    if let Some(items) = d.carrier().enumerate() {
        let mut all = items;
        all.extend(extra.iter().cloned());
        return dedup_stable(all);
    }
    let mut out: Vec<Value> = (0..PROBES).map(|i| d.carrier().sample(i, rng)).collect();
    out.extend(extra.iter().cloned());
    dedup_stable(out)
}

/// Index pairs `i < j`: exhaustive when small, otherwise all pairs over a
/// prefix followed by random pairs, `PROBES` in total.
fn pair_probe<R: Rng>(n: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let all = n * n.saturating_sub(1) / 2;
    if all <= PROBES * 4 {
        return (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    }
    let mut out: Vec<(usize, usize)> = (0..20).flat_map(|i| (i + 1..20).map(move |j| (i, j))).collect();
    while out.len() < PROBES {
        out.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    out
}

fn triple_probe<R: Rng>(n: usize, rng: &mut R) -> Vec<(usize, usize, usize)> {
    if n * n * n <= PROBES * 8 {
        return (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
            .collect();
    }
    let mut out: Vec<(usize, usize, usize)> =
        (0..5).flat_map(|i| (0..5).flat_map(move |j| (0..5).map(move |k| (i, j, k)))).collect();
    while out.len() < PROBES {
        out.push((rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::numeric_sub;

    #[test]
    fn standard_domain_accepted_and_top_is_identity() {
        let e = ExpectationDomain::standard();
        assert_eq!(e.otimes(e.top(), &Value::int(5)).unwrap(), Value::int(5));
    }

    #[test]
    fn subtraction_fails_commutativity_at_one_two() {
        let err = make_expectation_domain(
            "minus",
            Domain::reals(),
            Domain::unit_interval(),
            Domain::reals(),
            Otimes::Multiply,
            Oplus::Custom(CustomOp::new("minus", numeric_sub)),
            Embed::Identity,
        )
        .unwrap_err();
        match err {
            Error::AxiomViolation { axiom: Axiom::E2, witness } => {
                assert_eq!(witness, vec![Value::int(1), Value::int(2)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn e3_violation_detected() {
        let err = make_expectation_domain(
            "double",
            Domain::reals(),
            Domain::unit_interval(),
            Domain::reals(),
            Otimes::Custom(CustomOp::new("double", |p, u| numeric_mul(&numeric_add(p, p)?, u))),
            Oplus::Add,
            Embed::Identity,
        )
        .unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { axiom: Axiom::E3, .. }));
    }

    #[test]
    fn e4_violation_detected_for_order_reversing_embedding() {
        let v = Domain::new(
            Carrier::Builtin(BuiltinKind::Reals),
            Order::Explicit(Default::default()),
        )
        .unwrap();
        let err = make_expectation_domain(
            "flat",
            Domain::reals(),
            Domain::unit_interval(),
            v,
            Otimes::Multiply,
            Oplus::Add,
            Embed::Identity,
        )
        .unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { axiom: Axiom::E4, .. }));
    }

    #[test]
    fn builtin_constructions_verify() {
        ExpectationDomain::e_max(Domain::rationals()).unwrap();
        let e = ExpectationDomain::e_reg(Domain::rationals(), 1e-9);
        e.verify_with(&[], &[Value::Real(0.25f64.exp().recip())]).unwrap();
        assert_eq!(e.otimes(&Value::zero(), &Value::int(3)).unwrap(), Value::PosInfinity);
    }

    #[test]
    fn finite_table_domain_checked_exhaustively() {
        // Two-element max-plus style domain on {0,1}.
        let bits = || Carrier::Finite(vec![Value::zero(), Value::one()]);
        let u = Domain::new(bits(), Order::Numeric).unwrap();
        let p = Domain::plausibility(bits(), Order::Numeric, Value::zero(), Value::one()).unwrap();
        let v = Domain::new(bits(), Order::Numeric).unwrap();
        let mut and = BTreeMap::new();
        let mut or = BTreeMap::new();
        for a in 0..2 {
            for b in 0..2 {
                and.insert((Value::int(a), Value::int(b)), Value::int(a & b));
                or.insert((Value::int(a), Value::int(b)), Value::int(a | b));
            }
        }
        make_expectation_domain("bool", u.clone(), p.clone(), v.clone(), Otimes::Table(and.clone()), Oplus::Table(or), Embed::Identity)
            .unwrap();
        // Swapping ⊕ to a non-associative table breaks E1.
        let mut nand = BTreeMap::new();
        for a in 0..2 {
            for b in 0..2 {
                nand.insert((Value::int(a), Value::int(b)), Value::int(1 - (a & b)));
            }
        }
        let err = make_expectation_domain("nand", u, p, v, Otimes::Table(and), Oplus::Table(nand), Embed::Identity)
            .unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { axiom: Axiom::E1, .. }));
    }
}
