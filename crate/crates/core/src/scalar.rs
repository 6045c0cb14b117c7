//! Numeric backends for weight-carrying computations.
//!
//! Every measure, moment and weight in the crate is generic over [`Scalar`].
//! [`Rational`] gives exact arithmetic (the identity checks are then exact
//! equalities), `f64` gives double precision, and [`Complex64`] is used for
//! the character-basis constructions over abelian stabilizers.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
pub use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// True when arithmetic is exact.
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;

    /// Lossless for `Rational` (binary expansion of the double).
    fn from_f64(x: f64) -> Self;

    /// `self += a * b`
    fn mul_add_assign(&mut self, a: &Self, b: &Self);

    fn conj(&self) -> Self;

    fn abs_f64(&self) -> f64;

    fn re_f64(&self) -> f64;

    /// Exact value, when it is a real number.
    fn to_rational(&self) -> Option<Rational>;

    /// Canonical text form: `num/den` for rationals, 17 significant digits
    /// for doubles.
    fn render(&self) -> String;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite double")
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn abs_f64(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn re_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn render(&self) -> String {
        render_rational(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn conj(&self) -> Self {
        *self
    }

    fn abs_f64(&self) -> f64 {
        self.abs()
    }

    fn re_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Option<Rational> {
        BigRational::from_float(*self)
    }

    fn render(&self) -> String {
        render_f64(*self)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn abs_f64(&self) -> f64 {
        self.norm()
    }

    fn re_f64(&self) -> f64 {
        self.re
    }

    fn to_rational(&self) -> Option<Rational> {
        if self.im == 0.0 {
            BigRational::from_float(self.re)
        } else {
            None
        }
    }

    fn render(&self) -> String {
        format!("{}{:+.16e}i", render_f64(self.re), self.im)
    }
}

/// `num/den` with the denominator omitted when it is 1.
pub fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// 17 significant digits, enough for a lossless round trip.
pub fn render_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes a rational as its `num/den` string.
pub fn serialize_rational<S: serde::Serializer>(r: &Rational, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&render_rational(r))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `a/b`, an integer, or a finite decimal literal exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return None;
    }
    let numer: BigInt = digits.parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Integer powers for any scalar.
pub fn powi<S: Scalar>(base: &S, exp: usize) -> S {
    let mut acc = S::one();
    for _ in 0..exp {
        acc = acc * base.clone();
    }
    acc
}

/// Table `[1, x, x^2, ..., x^max]`.
pub fn power_table<S: Scalar>(base: &S, max: usize) -> Vec<S> {
    let mut out = Vec::with_capacity(max + 1);
    let mut acc = S::one();
    for _ in 0..=max {
        out.push(acc.clone());
        acc = acc * base.clone();
    }
    out
}
