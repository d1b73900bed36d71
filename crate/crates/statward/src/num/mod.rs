//! Scalar arithmetic for sequence diagnostics.
//!
//! Two representations live side by side: [`Rat`], an arbitrary-precision
//! rational used wherever a value is exactly known, and [`Fixed`], a
//! 128-fractional-bit fixed-point interval used for irrational values
//! (square roots, logarithms, trigonometric images). [`NumericValue`] is the
//! tagged union the rest of the crate works with: exact values survive
//! ring operations without rounding, and any operation touching an
//! approximate value stays approximate and keeps a rigorous error bound.

mod fixed;

pub use fixed::{Fixed, FRAC_BITS};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Errors raised by scalar operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumError {
    #[error("division by zero (or by an interval containing zero)")]
    DivisionByZero,
    #[error("square root of a negative value")]
    NegativeSqrt,
    #[error("logarithm of a non-positive value")]
    NonPositiveLog,
    #[error("argument magnitude too large for {0}")]
    MagnitudeOverflow(&'static str),
}

// ---------------------------------------------------------------------------
// Rat: exact rational scalar
// ---------------------------------------------------------------------------

/// Arbitrary-precision rational, printed and parsed as `a/b` (or `a` when
/// the denominator is 1). Decimal literals parse exactly as fractions over
/// powers of ten, so `0.5` and `1/2` are the same value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_big(r: BigRational) -> Self {
        Rat(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn pow(&self, exp: i32) -> Result<Self, NumError> {
        if exp < 0 && self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        Ok(Rat(self.0.pow(exp)))
    }

    /// Largest integer `≤ self`.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// `floor(self)` as u64, clamped at 0; `None` if it exceeds u64.
    pub fn floor_u64(&self) -> Option<u64> {
        let f = self.floor_int();
        if f.is_negative() {
            Some(0)
        } else {
            f.to_u64()
        }
    }

    /// Approximate f64 view, for plotting and report summaries only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Error from parsing a rational literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRatError(pub String);

impl FromStr for Rat {
    type Err = ParseRatError;

    /// Accepts `a/b`, integers, and decimal literals (`-1.25` becomes
    /// `-5/4` exactly). Whitespace around tokens is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ParseRatError(s.to_string());
        if let Some((n, d)) = t.split_once('/') {
            let num = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let den = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if den.is_zero() {
                return Err(err());
            }
            return Ok(Rat(BigRational::new(num, den)));
        }
        if let Some((ipart, fpart)) = t.split_once('.') {
            let neg = ipart.trim_start().starts_with('-');
            let i = if ipart.is_empty() || ipart == "-" || ipart == "+" {
                BigInt::zero()
            } else {
                BigInt::from_str(ipart).map_err(|_| err())?
            };
            if fpart.is_empty() || !fpart.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            let frac_num = BigInt::from_str(fpart).map_err(|_| err())?;
            let scale = BigInt::from(10u32).pow(fpart.len() as u32);
            let frac = BigRational::new(frac_num, scale);
            let whole = BigRational::from_integer(i.abs());
            let mag = whole + frac;
            return Ok(Rat(if neg { -mag } else { mag }));
        }
        let n = BigInt::from_str(t).map_err(|_| err())?;
        Ok(Rat(BigRational::from_integer(n)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "rational division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0.clone())
    }
}

// ---------------------------------------------------------------------------
// NumericValue: exact-or-approximate scalar
// ---------------------------------------------------------------------------

/// Three-valued outcome of an interval comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp3 {
    /// Provably satisfied.
    Yes,
    /// Provably violated.
    No,
    /// The value's error interval straddles the threshold.
    Ambiguous,
}

/// A real scalar that is either exactly known or carried as a rigorous
/// fixed-point interval.
#[derive(Clone, Debug, PartialEq)]
pub enum NumericValue {
    Exact(Rat),
    Approx(Fixed),
}

impl NumericValue {
    pub fn exact(r: Rat) -> Self {
        NumericValue::Exact(r)
    }

    pub fn exact_int(n: i64) -> Self {
        NumericValue::Exact(Rat::int(n))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NumericValue::Exact(_))
    }

    /// Midpoint as an exact rational (for sorting and histogramming; the
    /// midpoint of an approximate interval is itself a dyadic rational).
    pub fn midpoint(&self) -> Rat {
        match self {
            NumericValue::Exact(r) => r.clone(),
            NumericValue::Approx(f) => f.midpoint_rat(),
        }
    }

    /// Upper bound on |true value − midpoint| as an exact rational.
    pub fn error_bound(&self) -> Rat {
        match self {
            NumericValue::Exact(_) => Rat::zero(),
            NumericValue::Approx(f) => f.error_rat(),
        }
    }

    fn to_fixed(&self) -> Fixed {
        match self {
            NumericValue::Exact(r) => Fixed::from_rational(r),
            NumericValue::Approx(f) => f.clone(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (NumericValue::Exact(a), NumericValue::Exact(b)) => NumericValue::Exact(a + b),
            _ => NumericValue::Approx(self.to_fixed().add(&rhs.to_fixed())),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (NumericValue::Exact(a), NumericValue::Exact(b)) => NumericValue::Exact(a - b),
            _ => NumericValue::Approx(self.to_fixed().sub(&rhs.to_fixed())),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (NumericValue::Exact(a), NumericValue::Exact(b)) => NumericValue::Exact(a * b),
            _ => NumericValue::Approx(self.to_fixed().mul(&rhs.to_fixed())),
        }
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, NumError> {
        match (self, rhs) {
            (NumericValue::Exact(a), NumericValue::Exact(b)) => {
                if b.is_zero() {
                    Err(NumError::DivisionByZero)
                } else {
                    Ok(NumericValue::Exact(a.clone() / b.clone()))
                }
            }
            _ => Ok(NumericValue::Approx(
                self.to_fixed().div(&rhs.to_fixed())?,
            )),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            NumericValue::Exact(r) => NumericValue::Exact(-r),
            NumericValue::Approx(f) => NumericValue::Approx(f.neg()),
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            NumericValue::Exact(r) => NumericValue::Exact(r.abs()),
            NumericValue::Approx(f) => NumericValue::Approx(f.abs()),
        }
    }

    /// Integer power; exponents are small by construction of the grammar.
    pub fn powi(&self, exp: i32) -> Result<Self, NumError> {
        match self {
            NumericValue::Exact(r) => Ok(NumericValue::Exact(r.pow(exp)?)),
            NumericValue::Approx(f) => {
                if exp == 0 {
                    return Ok(NumericValue::exact_int(1));
                }
                let base = if exp < 0 {
                    Fixed::from_rational(&Rat::one()).div(f)?
                } else {
                    f.clone()
                };
                let mut acc = base.clone();
                for _ in 1..exp.unsigned_abs() {
                    acc = acc.mul(&base);
                }
                Ok(NumericValue::Approx(acc))
            }
        }
    }

    pub fn sqrt(&self) -> Result<Self, NumError> {
        match self {
            NumericValue::Exact(r) => {
                if r.is_negative() {
                    return Err(NumError::NegativeSqrt);
                }
                if let Some(root) = exact_sqrt(r) {
                    return Ok(NumericValue::Exact(root));
                }
                Ok(NumericValue::Approx(Fixed::from_rational(r).sqrt()?))
            }
            NumericValue::Approx(f) => Ok(NumericValue::Approx(f.sqrt()?)),
        }
    }

    pub fn sin(&self) -> Result<Self, NumError> {
        match self {
            NumericValue::Exact(r) if r.is_zero() => Ok(NumericValue::exact_int(0)),
            _ => Ok(NumericValue::Approx(self.to_fixed().sin()?)),
        }
    }

    pub fn cos(&self) -> Result<Self, NumError> {
        match self {
            NumericValue::Exact(r) if r.is_zero() => Ok(NumericValue::exact_int(1)),
            _ => Ok(NumericValue::Approx(self.to_fixed().cos()?)),
        }
    }

    pub fn exp(&self) -> Result<Self, NumError> {
        match self {
            NumericValue::Exact(r) if r.is_zero() => Ok(NumericValue::exact_int(1)),
            _ => Ok(NumericValue::Approx(self.to_fixed().exp()?)),
        }
    }

    pub fn ln(&self) -> Result<Self, NumError> {
        match self {
            NumericValue::Exact(r) if *r == Rat::one() => Ok(NumericValue::exact_int(0)),
            NumericValue::Exact(r) if !r.is_positive() => Err(NumError::NonPositiveLog),
            _ => Ok(NumericValue::Approx(self.to_fixed().ln()?)),
        }
    }

    /// Provable interval ordering against an exact rational.
    fn cmp_rat(&self, rhs: &Rat) -> Option<Ordering> {
        match self {
            NumericValue::Exact(r) => Some(r.cmp(rhs)),
            NumericValue::Approx(f) => f.cmp_rat(rhs),
        }
    }

    /// Is `|self| ≥ eps`? Exact values answer exactly; approximate values
    /// answer only when the whole error interval is on one side.
    pub fn abs_ge(&self, eps: &Rat) -> Cmp3 {
        match self.abs().cmp_rat(eps) {
            Some(Ordering::Less) => Cmp3::No,
            Some(_) => Cmp3::Yes,
            None => Cmp3::Ambiguous,
        }
    }

    /// Is `self < rhs` provably?
    pub fn lt_rat(&self, rhs: &Rat) -> Cmp3 {
        match self.cmp_rat(rhs) {
            Some(Ordering::Less) => Cmp3::Yes,
            Some(_) => Cmp3::No,
            None => Cmp3::Ambiguous,
        }
    }

    /// Is `self > rhs` provably?
    pub fn gt_rat(&self, rhs: &Rat) -> Cmp3 {
        match self.cmp_rat(rhs) {
            Some(Ordering::Greater) => Cmp3::Yes,
            Some(_) => Cmp3::No,
            None => Cmp3::Ambiguous,
        }
    }

    /// Provable comparison between two values; `None` when intervals overlap.
    pub fn cmp_value(&self, rhs: &Self) -> Option<Ordering> {
        match (self, rhs) {
            (NumericValue::Exact(a), NumericValue::Exact(b)) => Some(a.cmp(b)),
            _ => {
                let d = self.sub(rhs);
                d.cmp_rat(&Rat::zero())
            }
        }
    }

    /// Pointwise maximum. Provably ordered inputs return the winner
    /// unchanged (so exactness is preserved); overlapping intervals return
    /// the interval hull of the maximum.
    pub fn max_value(&self, rhs: &Self) -> Self {
        match self.cmp_value(rhs) {
            Some(Ordering::Less) => rhs.clone(),
            Some(_) => self.clone(),
            None => NumericValue::Approx(self.to_fixed().interval_max(&rhs.to_fixed())),
        }
    }

    /// Pointwise minimum, mirroring [`Self::max_value`].
    pub fn min_value(&self, rhs: &Self) -> Self {
        match self.cmp_value(rhs) {
            Some(Ordering::Greater) => rhs.clone(),
            Some(_) => self.clone(),
            None => NumericValue::Approx(self.to_fixed().interval_min(&rhs.to_fixed())),
        }
    }
}

impl fmt::Display for NumericValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericValue::Exact(r) => write!(f, "{}", r),
            NumericValue::Approx(x) => write!(f, "{}", x),
        }
    }
}

impl Serialize for NumericValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        match self {
            NumericValue::Exact(r) => {
                let mut st = s.serialize_struct("NumericValue", 1)?;
                st.serialize_field("exact", &r.to_string())?;
                st.end()
            }
            NumericValue::Approx(f) => {
                let mut st = s.serialize_struct("NumericValue", 2)?;
                st.serialize_field("mid", &f.midpoint_rat().to_string())?;
                st.serialize_field("err", &f.error_rat().to_string())?;
                st.end()
            }
        }
    }
}

/// Exact square root of a rational, when both numerator and denominator are
/// perfect squares.
fn exact_sqrt(r: &Rat) -> Option<Rat> {
    use num_integer::Roots;
    if r.is_zero() {
        return Some(Rat::zero());
    }
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rat(BigRational::new(
            BigInt::from(sn),
            BigInt::from(sd),
        )))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn rational_parsing_round_trips() {
        assert_eq!(q("1/2"), Rat::new(1, 2));
        assert_eq!(q("0.5"), Rat::new(1, 2));
        assert_eq!(q("-1.25"), Rat::new(-5, 4));
        assert_eq!(q("-3"), Rat::int(-3));
        assert_eq!(q("7/-2"), Rat::new(-7, 2));
        assert_eq!(q("1/2").to_string(), "1/2");
        assert_eq!(q("4/2").to_string(), "2");
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
        assert!("1.2.3".parse::<Rat>().is_err());
    }

    #[test]
    fn exact_ops_stay_exact() {
        let a = NumericValue::exact(q("1/3"));
        let b = NumericValue::exact(q("1/6"));
        assert_eq!(a.add(&b), NumericValue::exact(q("1/2")));
        assert_eq!(a.sub(&b), NumericValue::exact(q("1/6")));
        assert_eq!(a.mul(&b), NumericValue::exact(q("1/18")));
        assert!(a.add(&b).is_exact());
    }

    #[test]
    fn approx_contaminates() {
        let a = NumericValue::exact(q("2")).sqrt().unwrap();
        assert!(!a.is_exact());
        let b = a.add(&NumericValue::exact_int(1));
        assert!(!b.is_exact());
    }

    #[test]
    fn perfect_square_roots_are_exact() {
        let v = NumericValue::exact(q("9/4")).sqrt().unwrap();
        assert_eq!(v, NumericValue::exact(q("3/2")));
        let k = NumericValue::exact_int(144).sqrt().unwrap();
        assert_eq!(k, NumericValue::exact_int(12));
    }

    #[test]
    fn interval_comparison_is_sound() {
        // sqrt(2) ∈ (1.41, 1.42) provably
        let r2 = NumericValue::exact_int(2).sqrt().unwrap();
        assert_eq!(r2.abs_ge(&q("1.41")), Cmp3::Yes);
        assert_eq!(r2.abs_ge(&q("1.42")), Cmp3::No);
        assert_eq!(r2.gt_rat(&q("1")), Cmp3::Yes);
        assert_eq!(r2.lt_rat(&q("2")), Cmp3::Yes);
    }

    #[test]
    fn max_preserves_exactness_when_ordered() {
        let a = NumericValue::exact(q("1/2"));
        let b = NumericValue::exact(q("1/3"));
        assert_eq!(a.max_value(&b), a);
        assert_eq!(a.min_value(&b), b);
    }

    #[test]
    fn division_errors() {
        let a = NumericValue::exact_int(1);
        let z = NumericValue::exact_int(0);
        assert_eq!(a.div(&z), Err(NumError::DivisionByZero));
        assert_eq!(z.clone().ln(), Err(NumError::NonPositiveLog));
        assert_eq!(
            NumericValue::exact_int(-1).sqrt(),
            Err(NumError::NegativeSqrt)
        );
    }
}
