//! Contraction cycles of a product of Wick squares.
//!
//! A connected contraction of `k` factors `:Φ²:` is a Hamiltonian cycle on
//! their positions in the operator product. Each edge carries a positive
//! frequency flowing from the earlier to the later operator. A vertex whose
//! two neighbours both sit on the same side of it (a *turning* vertex) sees
//! the sum of its two frequencies; any other vertex sees their difference.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact::{factorial, Rational};

/// One undirected Hamiltonian cycle, as the sequence of operator positions
/// starting from position 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle(pub Vec<usize>);

impl Cycle {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Vertex `i` is earlier or later than both of its cycle neighbours.
    pub fn is_turning(&self, i: usize) -> bool {
        let k = self.0.len();
        let (prev, here, next) = (self.0[(i + k - 1) % k], self.0[i], self.0[(i + 1) % k]);
        (prev < here) == (next < here)
    }

    /// Numbers of edges between consecutive turning vertices, read around
    /// the cycle and rotated to the lexicographically smallest form.
    pub fn chain_lengths(&self) -> Vec<usize> {
        let k = self.0.len();
        let start = (0..k).find(|&i| self.is_turning(i)).expect("a cycle has a minimum");
        let mut out = Vec::new();
        let mut run = 0;
        for step in 1..=k {
            run += 1;
            if self.is_turning((start + step) % k) {
                out.push(run);
                run = 0;
            }
        }
        (0..out.len())
            .map(|r| out[r..].iter().chain(&out[..r]).copied().collect::<Vec<_>>())
            .min()
            .expect("non-empty")
    }
}

/// All `(k−1)!/2` undirected Hamiltonian cycles on `k ≥ 3` positions, and the
/// single doubled edge for `k = 2`.
pub fn undirected_cycles(k: usize) -> Vec<Cycle> {
    assert!(k >= 2);
    if k == 2 {
        return vec![Cycle(vec![0, 1])];
    }
    (1..k)
        .permutations(k - 1)
        .filter(|p| p[0] < p[k - 2])
        .map(|p| {
            let mut seq = Vec::with_capacity(k);
            seq.push(0);
            seq.extend(p);
            Cycle(seq)
        })
        .collect()
}

/// Multiplicities of the rotation-reduced chain compositions over all
/// cycles of length `k`.
pub fn chain_census(k: usize) -> BTreeMap<Vec<usize>, u64> {
    let mut census = BTreeMap::new();
    for c in undirected_cycles(k) {
        *census.entry(c.chain_lengths()).or_insert(0) += 1;
    }
    census
}

/// A cycle type of `n` Wick squares with its number of contractions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclePartition {
    /// Cycle lengths in non-increasing order, each at least two.
    pub cycles: Vec<usize>,
    #[serde(with = "crate::exact::rational_string")]
    pub weight: Rational,
}

/// Contractions per `k`-cycle: `(k−1)!/2` orderings times `2^k` leg choices.
pub fn contractions_per_cycle(k: usize) -> Rational {
    Rational::from_integer(factorial(k - 1) << (k - 1))
}

/// Every cycle type of `n` factors with weight
/// `n!·∏_k (2^{k−1}/k)^{m_k} / m_k!`.
pub fn cycle_partitions(n: usize) -> Vec<CyclePartition> {
    fn parts(n: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(acc.clone());
            return;
        }
        for k in (2..=max.min(n)).rev() {
            acc.push(k);
            parts(n - k, k, acc, out);
            acc.pop();
        }
    }
    let mut shapes = Vec::new();
    parts(n, n, &mut Vec::new(), &mut shapes);
    let nfact = Rational::from_integer(factorial(n));
    shapes
        .into_iter()
        .map(|cycles| {
            let mut weight = nfact.clone();
            for (k, group) in &cycles.iter().chunk_by(|k| **k) {
                let m = group.count();
                let per = Rational::new((num_bigint::BigInt::one()) << (k - 1), k.into());
                weight *= num_traits::pow(per, m);
                weight /= Rational::from_integer(factorial(m));
            }
            CyclePartition { cycles, weight }
        })
        .collect()
}

/// `Σ_partitions weight · ∏ cycle_value(k)`; the sum over all Wick
/// contractions when the value of a cycle depends only on its length.
pub fn sum_over_partitions(n: usize, cycle_value: impl Fn(usize) -> Rational) -> Rational {
    if n == 0 {
        return Rational::one();
    }
    let mut total = Rational::zero();
    for p in cycle_partitions(n) {
        let prod = p.cycles.iter().fold(Rational::one(), |acc, &k| acc * cycle_value(k));
        total += p.weight * prod;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_counts() {
        for k in 3..8 {
            let half = factorial(k - 1) / 2u32;
            assert_eq!(num_bigint::BigInt::from(undirected_cycles(k).len()), half);
        }
    }

    #[test]
    fn turning_vertices_come_in_pairs() {
        for c in undirected_cycles(6) {
            let t = (0..6).filter(|&i| c.is_turning(i)).count();
            assert!(t >= 2 && t % 2 == 0, "{c:?}");
            assert_eq!(c.chain_lengths().iter().sum::<usize>(), 6);
        }
        assert_eq!(Cycle(vec![0, 1]).chain_lengths(), vec![1, 1]);
        // 0→1→2→3→0: turning at 0 and 3
        assert_eq!(Cycle(vec![0, 1, 2, 3]).chain_lengths(), vec![1, 3]);
    }

    #[test]
    fn partitions_of_six() {
        let p = cycle_partitions(6);
        let shapes: Vec<Vec<usize>> = p.iter().map(|c| c.cycles.clone()).collect();
        assert_eq!(shapes, vec![vec![6], vec![4, 2], vec![3, 3], vec![2, 2, 2]]);
    }
}
