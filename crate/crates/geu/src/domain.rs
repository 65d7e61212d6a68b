//! Ordered carriers: utility, plausibility and valuation domains.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::expectation::Embed;
use crate::value::{in_unit_interval, numeric_cmp, Value};

/// Infinite carriers the crate knows how to test membership for and sample.
#[derive(Clone, Debug, PartialEq)]
pub enum BuiltinKind {
    Rationals,
    /// Rationals plus binary64 values.
    Reals,
    RealsWithPosInf,
    UnitInterval,
    /// Functions from a fixed index set into `[0,1]` (`unit_entries`) or into the reals.
    VectorsOverIndex { index: Vec<String>, unit_entries: bool },
    FiniteSetsOfValues,
    /// All subsets of a fixed finite set of atoms.
    Subsets(Vec<Value>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Carrier {
    Builtin(BuiltinKind),
    Finite(Vec<Value>),
    Product(Box<Carrier>, Box<Carrier>),
}

/// Subset-enumeration limit for `Subsets` carriers treated as finite.
const ENUMERABLE_SUBSET_ATOMS: usize = 8;

impl Carrier {
    pub fn contains(&self, v: &Value) -> bool {
        match self {
            Carrier::Finite(items) => items.contains(v),
            Carrier::Product(a, b) => match v {
                Value::Pair(x, y) => a.contains(x) && b.contains(y),
                _ => false,
            },
            Carrier::Builtin(kind) => match kind {
                BuiltinKind::Rationals => matches!(v, Value::Rational(_)),
                BuiltinKind::Reals => match v {
                    Value::Rational(_) => true,
                    Value::Real(x) => x.is_finite(),
                    _ => false,
                },
                BuiltinKind::RealsWithPosInf => match v {
                    Value::Rational(_) | Value::PosInfinity => true,
                    Value::Real(x) => x.is_finite(),
                    _ => false,
                },
                BuiltinKind::UnitInterval => in_unit_interval(v),
                BuiltinKind::VectorsOverIndex { index, unit_entries } => match v {
                    Value::Vector(m) => {
                        m.len() == index.len()
                            && index.iter().all(|k| match m.get(k) {
                                Some(x) if *unit_entries => in_unit_interval(x),
                                Some(x) => matches!(x, Value::Rational(_) | Value::Real(_)),
                                None => false,
                            })
                    }
                    _ => false,
                },
                BuiltinKind::FiniteSetsOfValues => matches!(v, Value::Set(_)),
                BuiltinKind::Subsets(atoms) => match v {
                    Value::Set(s) => s.iter().all(|x| atoms.contains(x)),
                    _ => false,
                },
            },
        }
    }

    /// All elements, when the carrier is finite and small enough to list.
    pub fn enumerate(&self) -> Option<Vec<Value>> {
        match self {
            Carrier::Finite(items) => Some(items.clone()),
            Carrier::Product(a, b) => {
                let (xs, ys) = (a.enumerate()?, b.enumerate()?);
                Some(
                    xs.iter()
                        .flat_map(|x| ys.iter().map(move |y| Value::pair(x.clone(), y.clone())))
                        .collect(),
                )
            }
            Carrier::Builtin(BuiltinKind::Subsets(atoms)) if atoms.len() <= ENUMERABLE_SUBSET_ATOMS => {
                Some(
                    (0u64..1 << atoms.len())
                        .map(|mask| {
                            Value::set(
                                atoms
                                    .iter()
                                    .enumerate()
                                    .filter(|(i, _)| mask >> i & 1 == 1)
                                    .map(|(_, a)| a.clone()),
                            )
                        })
                        .collect(),
                )
            }
            Carrier::Builtin(_) => None,
        }
    }

    /// The `i`-th probe element. The first few probes are fixed small
    /// canonical elements; the rest are drawn from `rng`.
    pub fn sample<R: Rng>(&self, i: usize, rng: &mut R) -> Value {
        match self {
            Carrier::Finite(items) => items[i % items.len()].clone(),
            Carrier::Product(a, b) => Value::pair(a.sample(i, rng), b.sample(i, rng)),
            Carrier::Builtin(kind) => match kind {
                BuiltinKind::Rationals | BuiltinKind::Reals => sample_rational(i, rng),
                BuiltinKind::RealsWithPosInf => {
                    if i % 17 == 16 {
                        Value::PosInfinity
                    } else {
                        sample_rational(i, rng)
                    }
                }
                BuiltinKind::UnitInterval => sample_unit(i, rng),
                BuiltinKind::VectorsOverIndex { index, unit_entries } => Value::vector(
                    index.iter().enumerate().map(|(k, name)| {
                        let j = if i < CANONICAL.len() { i } else { i + k };
                        let x = if *unit_entries { sample_unit(j, rng) } else { sample_rational(j, rng) };
                        (name.clone(), x)
                    }),
                ),
                BuiltinKind::FiniteSetsOfValues => {
                    let n = rng.gen_range(0..4);
                    Value::set((0..n).map(|_| Value::int(rng.gen_range(-3..4))))
                }
                BuiltinKind::Subsets(atoms) => {
                    Value::set(atoms.iter().filter(|_| rng.gen_bool(0.5)).cloned())
                }
            },
        }
    }
}

const CANONICAL: [(i64, i64); 8] = [(1, 1), (2, 1), (0, 1), (-1, 1), (1, 2), (3, 1), (-2, 1), (1, 3)];
const CANONICAL_UNIT: [(i64, i64); 6] = [(1, 1), (0, 1), (1, 2), (1, 3), (2, 3), (1, 4)];

fn sample_rational<R: Rng>(i: usize, rng: &mut R) -> Value {
    if let Some(&(n, d)) = CANONICAL.get(i) {
        return Value::ratio(n, d);
    }
    Value::ratio(rng.gen_range(-40..=40), rng.gen_range(1..=6))
}

fn sample_unit<R: Rng>(i: usize, rng: &mut R) -> Value {
    if let Some(&(n, d)) = CANONICAL_UNIT.get(i) {
        return Value::ratio(n, d);
    }
    let d = rng.gen_range(1..=12);
    Value::ratio(rng.gen_range(0..=d), d)
}

/// A binary relation on a carrier, given either by a built-in comparator
/// or by an explicit finite set of pairs (reflexivity always implied).
#[derive(Clone, Debug, PartialEq)]
pub enum Order {
    /// The usual order on rationals, reals and `+∞`.
    Numeric,
    /// `x ≼ y` iff `x ≤ y + tol`; used where values pass through `exp`/`log`.
    NumericWithin(f64),
    /// Index-wise comparison of vectors with identical index sets.
    Pointwise(Box<Order>),
    /// Vectors compared by their smallest entry.
    ByInfimum,
    /// Set inclusion.
    Subset,
    /// Pairs compared by their first component only.
    FirstComponent(Box<Order>),
    /// Equality plus the listed pairs.
    Explicit(BTreeSet<(Value, Value)>),
    /// Equality, or both sides are embedded utilities related by
    /// `utility_order`, or the pair is listed.
    EmbeddedOrListed {
        embed: Embed,
        utility_order: Box<Order>,
        listed: BTreeSet<(Value, Value)>,
    },
    /// Equality only.
    Discrete,
}

impl Order {
    pub fn holds(&self, a: &Value, b: &Value) -> bool {
        match self {
            Order::Numeric => matches!(numeric_cmp(a, b), Some(Ordering::Less | Ordering::Equal)),
            Order::NumericWithin(tol) => match (a, b) {
                (_, Value::PosInfinity) => a.is_numeric(),
                (Value::PosInfinity, _) => false,
                _ => match (a.to_f64(), b.to_f64()) {
                    (Some(x), Some(y)) => x <= y + tol,
                    _ => false,
                },
            },
            Order::Pointwise(inner) => match (a, b) {
                (Value::Vector(x), Value::Vector(y)) => {
                    x.len() == y.len()
                        && x.iter().all(|(k, xv)| y.get(k).is_some_and(|yv| inner.holds(xv, yv)))
                }
                _ => false,
            },
            Order::ByInfimum => match (vector_min(a), vector_min(b)) {
                (Some(x), Some(y)) => matches!(numeric_cmp(&x, &y), Some(Ordering::Less | Ordering::Equal)),
                _ => false,
            },
            Order::Subset => match (a, b) {
                (Value::Set(x), Value::Set(y)) => x.is_subset(y),
                _ => false,
            },
            Order::FirstComponent(inner) => match (a, b) {
                (Value::Pair(x, _), Value::Pair(y, _)) => inner.holds(x, y),
                _ => false,
            },
            Order::Explicit(pairs) => a == b || pairs.contains(&(a.clone(), b.clone())),
            Order::EmbeddedOrListed { embed, utility_order, listed } => {
                if a == b {
                    return true;
                }
                if let (Some(u), Some(v)) = (embed.invert(a), embed.invert(b)) {
                    if utility_order.holds(&u, &v) {
                        return true;
                    }
                }
                listed.contains(&(a.clone(), b.clone()))
            }
            Order::Discrete => a == b,
        }
    }

    /// Whether transitivity holds by construction, independent of the carrier.
    pub fn transitive_by_construction(&self) -> bool {
        match self {
            Order::Numeric | Order::ByInfimum | Order::Subset | Order::Discrete => true,
            Order::Pointwise(inner) | Order::FirstComponent(inner) => inner.transitive_by_construction(),
            Order::NumericWithin(_) | Order::Explicit(_) | Order::EmbeddedOrListed { .. } => false,
        }
    }
}

fn vector_min(v: &Value) -> Option<Value> {
    let m = v.as_vector()?;
    let mut it = m.values();
    let mut best = it.next()?.clone();
    for x in it {
        if numeric_cmp(x, &best)? == Ordering::Less {
            best = x.clone();
        }
    }
    Some(best)
}

/// Flags describing an order on a finite set of elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderReport {
    pub reflexive: bool,
    pub transitive: bool,
    pub antisymmetric: bool,
    pub total: bool,
}

/// A carrier with an order and optional distinguished bottom and top.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    carrier: Carrier,
    order: Order,
    bottom: Option<Value>,
    top: Option<Value>,
    report: Option<OrderReport>,
}

impl Domain {
    /// Builds a domain; finite carriers are checked for reflexivity.
    pub fn new(carrier: Carrier, order: Order) -> Result<Domain> {
        let report = carrier.enumerate().map(|items| report_on(&order, &items));
        if let Some(r) = &report {
            if !r.reflexive {
                return Err(Error::InvalidDomain("order is not reflexive on the carrier".into()));
            }
        }
        Ok(Domain { carrier, order, bottom: None, top: None, report })
    }

    /// Builds a plausibility domain: transitive, with `bottom ≼ x ≼ top` for
    /// every carrier element. Both properties are checked exhaustively on
    /// finite carriers.
    pub fn plausibility(carrier: Carrier, order: Order, bottom: Value, top: Value) -> Result<Domain> {
        let mut d = Domain::new(carrier, order)?;
        if !d.carrier.contains(&bottom) || !d.carrier.contains(&top) {
            return Err(Error::InvalidDomain("bottom/top not in carrier".into()));
        }
        match d.carrier.enumerate() {
            Some(items) => {
                if !d.report.is_some_and(|r| r.transitive) {
                    return Err(Error::InvalidDomain("plausibility order is not transitive".into()));
                }
                if let Some(x) = items.iter().find(|x| !d.order.holds(&bottom, x) || !d.order.holds(x, &top)) {
                    return Err(Error::InvalidDomain(format!("{x} lies outside [bottom, top]")));
                }
            }
            None => {
                if !d.order.transitive_by_construction() {
                    return Err(Error::InvalidDomain(
                        "cannot establish transitivity on an infinite carrier".into(),
                    ));
                }
                if !d.order.holds(&bottom, &top) {
                    return Err(Error::InvalidDomain("bottom is not below top".into()));
                }
            }
        }
        d.bottom = Some(bottom);
        d.top = Some(top);
        Ok(d)
    }

    pub fn rationals() -> Domain {
        Domain::new(Carrier::Builtin(BuiltinKind::Rationals), Order::Numeric).expect("builtin")
    }

    pub fn reals() -> Domain {
        Domain::new(Carrier::Builtin(BuiltinKind::Reals), Order::Numeric).expect("builtin")
    }

    pub fn reals_with_inf() -> Domain {
        Domain::new(Carrier::Builtin(BuiltinKind::RealsWithPosInf), Order::Numeric).expect("builtin")
    }

    /// `[0,1]` with `⊥ = 0`, `⊤ = 1`.
    pub fn unit_interval() -> Domain {
        Domain::plausibility(
            Carrier::Builtin(BuiltinKind::UnitInterval),
            Order::Numeric,
            Value::zero(),
            Value::one(),
        )
        .expect("builtin")
    }

    /// `2^atoms` ordered by inclusion.
    pub fn subsets(atoms: Vec<Value>) -> Domain {
        let all = Value::set(atoms.iter().cloned());
        Domain::plausibility(
            Carrier::Builtin(BuiltinKind::Subsets(atoms)),
            Order::Subset,
            Value::set([]),
            all,
        )
        .expect("subset lattice")
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn bottom(&self) -> Option<&Value> {
        self.bottom.as_ref()
    }

    pub fn top(&self) -> Option<&Value> {
        self.top.as_ref()
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.carrier.contains(v)
    }

    pub fn leq(&self, a: &Value, b: &Value) -> bool {
        self.order.holds(a, b)
    }

    /// Order flags computed at construction for finite carriers.
    pub fn report(&self) -> Option<OrderReport> {
        self.report
    }

    pub(crate) fn is_transitive(&self) -> bool {
        match self.report {
            Some(r) => r.transitive,
            None => self.order.transitive_by_construction(),
        }
    }

    pub(crate) fn is_numeric(&self) -> bool {
        matches!(
            self.carrier,
            Carrier::Builtin(
                BuiltinKind::Rationals
                    | BuiltinKind::Reals
                    | BuiltinKind::RealsWithPosInf
                    | BuiltinKind::UnitInterval
            )
        ) && self.order == Order::Numeric
    }
}

/// Exhaustive order flags on a finite carrier.
pub fn check_order_properties(d: &Domain) -> Result<OrderReport> {
    let items = d
        .carrier
        .enumerate()
        .ok_or_else(|| Error::InvalidDomain("carrier is not finite".into()))?;
    Ok(report_on(&d.order, &items))
}

/// Order flags restricted to the given elements (e.g. the image of a measure).
pub fn check_order_properties_on(d: &Domain, items: &[Value]) -> OrderReport {
    let mut uniq: Vec<Value> = items.to_vec();
    uniq.sort();
    uniq.dedup();
    report_on(&d.order, &uniq)
}

fn report_on(order: &Order, items: &[Value]) -> OrderReport {
    let n = items.len();
    let rel: Vec<bool> = (0..n * n).map(|k| order.holds(&items[k / n], &items[k % n])).collect();
    let at = |i: usize, j: usize| rel[i * n + j];
    let reflexive = (0..n).all(|i| at(i, i));
    let total = (0..n).all(|i| (0..n).all(|j| at(i, j) || at(j, i)));
    let antisymmetric = (0..n).all(|i| (0..n).all(|j| i == j || !(at(i, j) && at(j, i))));
    let transitive = order.transitive_by_construction()
        || (0..n).all(|i| (0..n).all(|j| !at(i, j) || (0..n).all(|k| !at(j, k) || at(i, k))));
    OrderReport { reflexive, transitive, antisymmetric, total }
}
