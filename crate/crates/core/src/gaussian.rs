//! Gaussian rationals: complex numbers with rational real and imaginary
//! parts. This is the coefficient field for every mask in the crate.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision rational; `BigRational` keeps the canonical form
/// (reduced, positive denominator) for us.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse {input:?} as a Gaussian rational: {reason}")]
pub struct ParseCoeffError {
    pub input: String,
    pub reason: String,
}

/// An element of Q(i).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: Rational,
    im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        Self::new(re, Rational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// n/d as a real element; panics if d == 0.
    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// |x|^2 = re^2 + im^2, a nonnegative rational.
    pub fn abs_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.abs_sq();
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    // Good enough for the coefficient magnitudes appearing here; exact
    // paths never go through this.
    let n = r.numer();
    let d = r.denom();
    match (i128::try_from(n.clone()), i128::try_from(d.clone())) {
        (Ok(n), Ok(d)) => n as f64 / d as f64,
        _ => {
            let n: f64 = n.to_string().parse().unwrap_or(f64::NAN);
            let d: f64 = d.to_string().parse().unwrap_or(f64::NAN);
            n / d
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<'a> Add<&'a GaussianRational> for GaussianRational {
    type Output = Self;
    fn add(self, rhs: &'a Self) -> Self {
        Self::new(self.re + &rhs.re, self.im + &rhs.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a, 'b> Mul<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'b GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let r = rhs.recip().expect("division by zero Gaussian rational");
        &self * &r
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    /// Canonical form "a/b+c/d*i" with zero parts omitted; zero prints "0".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", fmt_rational(&self.im));
        }
        if self.im.is_negative() {
            write!(
                f,
                "{}-{}*i",
                fmt_rational(&self.re),
                fmt_rational(&-self.im.clone())
            )
        } else {
            write!(f, "{}+{}*i", fmt_rational(&self.re), fmt_rational(&self.im))
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_err(input: &str, reason: impl Into<String>) -> ParseCoeffError {
    ParseCoeffError {
        input: input.to_string(),
        reason: reason.into(),
    }
}

/// Parse a real number: integer, fraction "p/q", or an exact dyadic
/// decimal like "0.5". Non-dyadic decimals are rejected so that no
/// silently-approximated coefficient can enter an exact computation.
fn parse_real(term: &str, whole: &str) -> Result<Rational, ParseCoeffError> {
    let term = term.trim();
    if term.is_empty() {
        return Err(parse_err(whole, "empty numeric part"));
    }
    if let Some((n, d)) = term.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| parse_err(whole, format!("bad numerator {n:?}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| parse_err(whole, format!("bad denominator {d:?}")))?;
        if d.is_zero() {
            return Err(parse_err(whole, "denominator is zero"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = term.split_once('.') {
        let digits = format!(
            "{}{}",
            if int_part.is_empty() || int_part == "-" {
                format!("{int_part}0")
            } else {
                int_part.to_string()
            },
            frac_part
        );
        let mantissa: BigInt = digits
            .parse()
            .map_err(|_| parse_err(whole, format!("bad decimal {term:?}")))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let r = Rational::new(mantissa, scale);
        // Only dyadic decimals are exact binary values; anything else is
        // treated as a representation error, not coerced.
        let mut d = r.denom().clone();
        while (&d % BigInt::from(2)).is_zero() {
            d /= BigInt::from(2);
        }
        if !d.is_one() {
            return Err(parse_err(
                whole,
                format!("decimal {term:?} is not an exact dyadic value; write it as p/q"),
            ));
        }
        return Ok(r);
    }
    term.parse::<BigInt>()
        .map(Rational::from_integer)
        .map_err(|_| parse_err(whole, format!("bad number {term:?}")))
}

/// Parse one additive term, which is either real or a multiple of i.
fn parse_term(term: &str, whole: &str) -> Result<GaussianRational, ParseCoeffError> {
    let t = term.trim();
    if t == "i" || t == "+i" {
        return Ok(GaussianRational::i());
    }
    if t == "-i" {
        return Ok(-GaussianRational::i());
    }
    if let Some(c) = t.strip_suffix("*i").or_else(|| t.strip_suffix("i")) {
        let r = parse_real(c, whole)?;
        return Ok(GaussianRational::new(Rational::zero(), r));
    }
    Ok(GaussianRational::from_rational(parse_real(t, whole)?))
}

impl FromStr for GaussianRational {
    type Err = ParseCoeffError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() {
            return Err(parse_err(s, "empty string"));
        }
        // Split at the first top-level '+'/'-' after position 0; '/' and
        // digits never contain signs, so a simple scan suffices.
        let bytes = t.as_bytes();
        for pos in 1..bytes.len() {
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                let first = parse_term(&t[..pos], s)?;
                let second = parse_term(&t[pos..], s)?;
                if !(first.is_real() && !second.is_real()) {
                    return Err(parse_err(
                        s,
                        "expected a real part followed by an imaginary part",
                    ));
                }
                return Ok(first + second);
            }
        }
        parse_term(t, s)
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
