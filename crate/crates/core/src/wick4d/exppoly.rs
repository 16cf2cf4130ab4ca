//! Exact exponential polynomials `Σ c·ω^n·e^{−dω}` on the half line.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::exact::{binomial, factorial, Rational};
use crate::{Error, Result};

/// `Σ coeff · ω^power · e^{−decay·ω}` on `(0, ∞)`, stored by `(power, decay)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExpPoly {
    terms: BTreeMap<(u32, Rational), Rational>,
}

fn fact(n: u32) -> Rational {
    Rational::from_integer(factorial(n as usize))
}

fn choose(n: u32, k: u32) -> Rational {
    Rational::from_integer(binomial(n as usize, k as usize))
}

fn pow(q: &Rational, e: u32) -> Rational {
    num_traits::pow(q.clone(), e as usize)
}

impl ExpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: Rational, power: u32, decay: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, power, decay);
        p
    }

    pub fn add_term(&mut self, coeff: Rational, power: u32, decay: Rational) {
        if coeff.is_zero() {
            return;
        }
        let key = (power, decay);
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(coeff, power, decay)` triples in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, u32, &Rational)> {
        self.terms.iter().map(|((n, d), c)| (c, *n, d))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        for (c, n, d) in self.terms() {
            out.add_term(c * s, n, d.clone());
        }
        out
    }

    /// Multiplies by `ω^k`.
    pub fn shift_power(&self, k: u32) -> Self {
        let mut out = Self::zero();
        for (c, n, d) in self.terms() {
            out.add_term(c.clone(), n + k, d.clone());
        }
        out
    }

    pub fn add(&self, other: &ExpPoly) -> Self {
        let mut out = self.clone();
        for (c, n, d) in other.terms() {
            out.add_term(c.clone(), n, d.clone());
        }
        out
    }

    pub fn mul(&self, other: &ExpPoly) -> Self {
        let mut out = Self::zero();
        for (a, n, d) in self.terms() {
            for (b, m, e) in other.terms() {
                out.add_term(a * b, n + m, d + e);
            }
        }
        out
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms()
            .map(|(c, n, d)| crate::exact::to_f64(c) * x.powi(n as i32) * (-crate::exact::to_f64(d) * x).exp())
            .sum()
    }

    /// `∫₀^∞` of the polynomial; every decay must be positive.
    pub fn integrate(&self) -> Result<Rational> {
        let mut total = Rational::zero();
        for (c, n, d) in self.terms() {
            if !d.is_positive() {
                return Err(Error::InvalidParameter(format!(
                    "term ω^{n}·e^{{−{d}ω}} is not integrable on (0, ∞)"
                )));
            }
            total += c * fact(n) / pow(d, n + 1);
        }
        Ok(total)
    }

    /// `g(y) = ∫₀^∞ f(x) K(|x − y|) dx` for the kernel
    /// `K(s) = Σ_j q_j s^j e^{−s}`.
    pub fn convolve_abs(&self, q: &[Rational]) -> Self {
        let one = Rational::one();
        let mut out = Self::zero();
        for (c, n, d) in self.terms() {
            for (j, qj) in q.iter().enumerate() {
                let j = j as u32;
                if qj.is_zero() {
                    continue;
                }
                for i in 0..=j {
                    let base = c * qj * choose(j, i);
                    let m = n + i;
                    let ypow = j - i;
                    // x < y: y^{j−i}(−x)^i e^{−(y−x)} against x^n e^{−dx}
                    let left = if i % 2 == 0 { base.clone() } else { -base.clone() };
                    let a = d - &one;
                    if a.is_zero() {
                        out.add_term(&left / Rational::from_integer((m + 1).into()), ypow + m + 1, one.clone());
                    } else {
                        out.add_term(&left * fact(m) / pow(&a, m + 1), ypow, one.clone());
                        for l in 0..=m {
                            let t = &left * fact(m) / (fact(l) * pow(&a, m - l + 1));
                            out.add_term(-t, ypow + l, d.clone());
                        }
                    }
                    // x > y: x^i(−y)^{j−i} e^{−(x−y)} against x^n e^{−dx}
                    let right = if (j - i) % 2 == 0 { base } else { -base };
                    let b = d + &one;
                    for l in 0..=m {
                        let t = &right * fact(m) / (fact(l) * pow(&b, m - l + 1));
                        out.add_term(t, ypow + l, d.clone());
                    }
                }
            }
        }
        out
    }
}
