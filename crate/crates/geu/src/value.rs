//! Tagged values that populate utility, plausibility and valuation domains.
//!
//! Every domain in the crate stores its elements as [`Value`]. Structural
//! equality is the only equality used anywhere; the total [`Ord`] instance is
//! a canonical ordering used for sorting and set membership, and is unrelated
//! to the order of any particular [`Domain`](crate::Domain).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// An element of some domain.
#[derive(Clone, Debug)]
pub enum Value {
    /// Exact rational, always in lowest terms with a positive denominator.
    Rational(Rational),
    /// Binary64, only produced where logarithms make exactness impossible.
    Real(f64),
    PosInfinity,
    /// A named atom: state labels, consequence labels.
    Symbol(String),
    Pair(Box<Value>, Box<Value>),
    Set(BTreeSet<Value>),
    /// Finite map from index label (e.g. a probability measure name) to value.
    Vector(BTreeMap<String, Value>),
}

impl Value {
    pub fn int(n: i64) -> Value {
        Value::Rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Value {
        assert!(d != 0, "zero denominator");
        Value::Rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Value {
        Value::Rational(Rational::zero())
    }

    pub fn one() -> Value {
        Value::Rational(Rational::one())
    }

    pub fn sym(s: impl Into<String>) -> Value {
        Value::Symbol(s.into())
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Box::new(a), Box::new(b))
    }

    pub fn set<I: IntoIterator<Item = Value>>(items: I) -> Value {
        Value::Set(items.into_iter().collect())
    }

    pub fn vector<I, K>(items: I) -> Value
    where
        I: IntoIterator<Item = (K, Value)>,
        K: Into<String>,
    {
        Value::Vector(items.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Value::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_set(&self) -> Option<&BTreeSet<Value>> {
        match self {
            Value::Set(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Value, &Value)> {
        match self {
            Value::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&BTreeMap<String, Value>> {
        match self {
            Value::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Value::Rational(_) | Value::Real(_) | Value::PosInfinity)
    }

    /// Lossy view as `f64`; `None` for non-numeric values.
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Value::Rational(r) => r.to_f64(),
            Value::Real(x) => Some(*x),
            Value::PosInfinity => Some(f64::INFINITY),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Value::Rational(_) => 0,
            Value::Real(_) => 1,
            Value::PosInfinity => 2,
            Value::Symbol(_) => 3,
            Value::Pair(..) => 4,
            Value::Set(_) => 5,
            Value::Vector(_) => 6,
        }
    }
}

/// Numeric comparison of two numeric values (`Rational`, `Real`, `PosInfinity`).
///
/// Rational pairs are compared exactly; anything involving a `Real` goes
/// through `f64`. Returns `None` for non-numeric operands or NaN.
pub fn numeric_cmp(a: &Value, b: &Value) -> Option<Ordering> {
    match (a, b) {
        (Value::Rational(x), Value::Rational(y)) => Some(x.cmp(y)),
        (Value::PosInfinity, Value::PosInfinity) => Some(Ordering::Equal),
        (Value::PosInfinity, v) if v.is_numeric() => Some(Ordering::Greater),
        (v, Value::PosInfinity) if v.is_numeric() => Some(Ordering::Less),
        _ => {
            let (x, y) = (a.to_f64()?, b.to_f64()?);
            x.partial_cmp(&y)
        }
    }
}

/// Numeric addition; exact on rationals, `∞` absorbing.
pub fn numeric_add(a: &Value, b: &Value) -> Option<Value> {
    match (a, b) {
        (Value::Rational(x), Value::Rational(y)) => Some(Value::Rational(x + y)),
        (Value::PosInfinity, v) | (v, Value::PosInfinity) if v.is_numeric() => {
            Some(Value::PosInfinity)
        }
        _ => Some(Value::Real(a.to_f64()? + b.to_f64()?)),
    }
}

/// Numeric subtraction on finite values.
pub fn numeric_sub(a: &Value, b: &Value) -> Option<Value> {
    match (a, b) {
        (Value::Rational(x), Value::Rational(y)) => Some(Value::Rational(x - y)),
        (Value::PosInfinity, _) | (_, Value::PosInfinity) => None,
        _ => Some(Value::Real(a.to_f64()? - b.to_f64()?)),
    }
}

/// Numeric multiplication on finite values.
pub fn numeric_mul(a: &Value, b: &Value) -> Option<Value> {
    match (a, b) {
        (Value::Rational(x), Value::Rational(y)) => Some(Value::Rational(x * y)),
        (Value::PosInfinity, _) | (_, Value::PosInfinity) => None,
        _ => Some(Value::Real(a.to_f64()? * b.to_f64()?)),
    }
}

/// Smaller of two numeric values (left-biased on ties).
pub fn numeric_min(a: &Value, b: &Value) -> Option<Value> {
    match numeric_cmp(a, b)? {
        Ordering::Greater => Some(b.clone()),
        _ => Some(a.clone()),
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Rational(a), Value::Rational(b)) => a.cmp(b),
            (Value::Real(a), Value::Real(b)) => a.total_cmp(b),
            (Value::PosInfinity, Value::PosInfinity) => Ordering::Equal,
            (Value::Symbol(a), Value::Symbol(b)) => a.cmp(b),
            (Value::Pair(a1, b1), Value::Pair(a2, b2)) => a1.cmp(a2).then_with(|| b1.cmp(b2)),
            (Value::Set(a), Value::Set(b)) => a.cmp(b),
            (Value::Vector(a), Value::Vector(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Rational(r)
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::int(n)
    }
}

/// Parses `"n"`, `"-n"` or `"p/q"` into a reduced rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rational(r) => f.write_str(&format_rational(r)),
            Value::Real(x) => {
                if x.fract() == 0.0 && x.abs() < 1e15 {
                    write!(f, "{x:.1}")
                } else {
                    write!(f, "{x}")
                }
            }
            Value::PosInfinity => f.write_str("inf"),
            Value::Symbol(s) => f.write_str(s),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::Set(items) => {
                f.write_str("{")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("}")
            }
            Value::Vector(items) => {
                f.write_str("[")?;
                for (i, (k, v)) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}: {v}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// `true` if `r` lies in the closed unit interval.
pub(crate) fn in_unit_interval(v: &Value) -> bool {
    match v {
        Value::Rational(r) => !r.is_negative() && *r <= Rational::one(),
        Value::Real(x) => (0.0..=1.0).contains(x),
        _ => false,
    }
}
