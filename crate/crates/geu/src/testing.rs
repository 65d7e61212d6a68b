pub use crate::samples::*;
use crate::value::Rational;

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
