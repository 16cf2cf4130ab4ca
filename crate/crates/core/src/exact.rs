//! Exact arithmetic helpers: rationals, monomials in π and τ, and polynomials
//! with rational coefficients.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Renders `q` as `"p"` or `"p/q"`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let den = parse(q)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(parse(p)?, den))
        }
        None => Ok(Rational::from_integer(parse(s)?)),
    }
}

/// Decimal rendering with `digits` significant digits, computed exactly.
pub fn format_decimal(q: &Rational, digits: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    if q.is_integer() {
        return q.numer().to_string();
    }
    let v = to_f64(q);
    format!("{:.*e}", digits.saturating_sub(1), v)
}

/// Serde adapter writing a rational as its `"p/q"` string.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// An exact monomial `coeff · π^pi_power · τ^tau_power`.
///
/// Every exact physical quantity in the crate (moments, Gamma parameters,
/// quantum inequality bounds) is one of these; π and τ only become floats in
/// [`Quantity::value`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quantity {
    #[serde(with = "rational_string")]
    pub coeff: Rational,
    pub pi_power: i32,
    pub tau_power: i32,
}

impl Quantity {
    pub fn new(coeff: Rational, pi_power: i32, tau_power: i32) -> Self {
        Quantity {
            coeff,
            pi_power,
            tau_power,
        }
    }

    pub fn rational(coeff: Rational) -> Self {
        Self::new(coeff, 0, 0)
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Same π and τ powers, so the two differ by a rational factor.
    pub fn commensurable(&self, other: &Quantity) -> bool {
        self.pi_power == other.pi_power && self.tau_power == other.tau_power
    }

    pub fn recip(&self) -> Self {
        Self::new(self.coeff.recip(), -self.pi_power, -self.tau_power)
    }

    pub fn powi(&self, n: i32) -> Self {
        let coeff = if n >= 0 {
            num_traits::pow(self.coeff.clone(), n as usize)
        } else {
            num_traits::pow(self.coeff.recip(), (-n) as usize)
        };
        Self::new(coeff, self.pi_power * n, self.tau_power * n)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(&self.coeff * q, self.pi_power, self.tau_power)
    }

    /// Rational ratio `self / other` when commensurable.
    pub fn ratio(&self, other: &Quantity) -> Result<Rational> {
        if !self.commensurable(other) {
            return Err(Error::IncompatibleUnits(format!("{self} vs {other}")));
        }
        Ok(&self.coeff / &other.coeff)
    }

    pub fn value(&self, tau: f64) -> f64 {
        to_f64(&self.coeff)
            * std::f64::consts::PI.powi(self.pi_power)
            * tau.powi(self.tau_power)
    }
}

impl Mul for &Quantity {
    type Output = Quantity;
    fn mul(self, rhs: &Quantity) -> Quantity {
        Quantity::new(
            &self.coeff * &rhs.coeff,
            self.pi_power + rhs.pi_power,
            self.tau_power + rhs.tau_power,
        )
    }
}

impl Div for &Quantity {
    type Output = Quantity;
    fn div(self, rhs: &Quantity) -> Quantity {
        self * &rhs.recip()
    }
}

impl Neg for Quantity {
    type Output = Quantity;
    fn neg(self) -> Quantity {
        Quantity::new(-self.coeff, self.pi_power, self.tau_power)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.coeff))?;
        if self.pi_power != 0 && !self.coeff.is_zero() {
            write!(f, "·π^{}", self.pi_power)?;
        }
        if self.tau_power != 0 && !self.coeff.is_zero() {
            write!(f, "·τ^{}", self.tau_power)?;
        }
        Ok(())
    }
}

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c · x`.
    pub fn linear(c: Rational) -> Self {
        Self::new(vec![Rational::zero(), c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + to_f64(c))
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        RatPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        self + &rhs.scale(&-Rational::one())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = format_rational(&c.abs());
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}·c")?,
                _ => write!(f, "{mag}·c^{i}")?,
            }
        }
        Ok(())
    }
}
