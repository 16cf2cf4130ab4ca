//! Sector decomposition of a single cycle integral.
//!
//! On each of the `k!` orderings of the edge frequencies every `|ω_a − ω_b|`
//! has a fixed sign. Writing the ordered frequencies as partial sums of
//! independent gaps `t_1, …, t_k ≥ 0` turns the integrand into a polynomial in
//! the gaps times `exp(−Σ c_j t_j)`, integrated monomial by monomial.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;

use super::cycles::Cycle;
use crate::exact::{factorial, Rational};

type Poly = BTreeMap<Vec<u32>, BigInt>;

fn mul_linear(p: &Poly, form: &[i64]) -> Poly {
    let mut out = Poly::new();
    for (mono, c) in p {
        for (j, &a) in form.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mut m = mono.clone();
            m[j] += 1;
            *out.entry(m).or_insert_with(BigInt::zero) += c * a;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn add_scaled(acc: &mut Poly, p: &Poly, s: i64) {
    for (m, c) in p {
        *acc.entry(m.clone()).or_insert_with(BigInt::zero) += c * s;
    }
    acc.retain(|_, c| !c.is_zero());
}

fn poly_of(form: &[i64], q: &[i64], k: usize) -> Poly {
    // Σ_j q_j L^j
    let mut power = Poly::new();
    power.insert(vec![0; k], BigInt::from(1));
    let mut out = Poly::new();
    for (j, &qj) in q.iter().enumerate() {
        if j > 0 {
            power = mul_linear(&power, form);
        }
        add_scaled(&mut out, &power, qj);
    }
    out
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            *out.entry(m).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// One sector: `order[r]` is the edge holding the `r`-th smallest frequency.
fn sector(cycle: &Cycle, q: &[i64], p: u32, order: &[usize]) -> Rational {
    let k = cycle.len();
    let mut rank = vec![0; k];
    for (r, &e) in order.iter().enumerate() {
        rank[e] = r;
    }
    // ω_e = t_0 + … + t_{rank(e)}
    let omega = |e: usize| -> Vec<i64> { (0..k).map(|j| i64::from(j <= rank[e])).collect() };
    let mut integrand = Poly::new();
    integrand.insert(vec![0; k], BigInt::from(1));
    let mut decay = vec![0i64; k];
    for e in 0..k {
        for _ in 0..p {
            integrand = mul_linear(&integrand, &omega(e));
        }
    }
    for v in 0..k {
        let (a, b) = ((v + k - 1) % k, v);
        let (wa, wb) = (omega(a), omega(b));
        let arg: Vec<i64> = if cycle.is_turning(v) {
            wa.iter().zip(&wb).map(|(x, y)| x + y).collect()
        } else if rank[a] > rank[b] {
            wa.iter().zip(&wb).map(|(x, y)| x - y).collect()
        } else {
            wb.iter().zip(&wa).map(|(x, y)| x - y).collect()
        };
        decay.iter_mut().zip(&arg).for_each(|(d, a)| *d += a);
        integrand = mul(&integrand, &poly_of(&arg, q, k));
    }
    let mut total = Rational::zero();
    for (mono, c) in &integrand {
        let mut num = c.clone();
        let mut den = BigInt::from(1);
        for (&e, &d) in mono.iter().zip(&decay) {
            num *= factorial(e as usize);
            den *= num_traits::pow(BigInt::from(d), e as usize + 1);
        }
        total += Rational::new(num, den);
    }
    total
}

/// `∫_{(0,∞)^k} ∏ ω_e^p ∏_v ŵ(vertex argument) dω` for one cycle, with
/// `ŵ(s) = Σ_j q_j s^j e^{−s}`. `reverse` sums the sectors in the opposite
/// order.
pub fn cycle_value_by_sectors(cycle: &Cycle, q: &[i64], p: u32, reverse: bool) -> Rational {
    let k = cycle.len();
    let mut orders: Vec<Vec<usize>> = (0..k).permutations(k).collect();
    if reverse {
        orders.reverse();
    }
    orders.iter().fold(Rational::zero(), |acc, o| acc + sector(cycle, q, p, o))
}
