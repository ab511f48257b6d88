use std::collections::BTreeSet;

use serde::Serialize;

use super::{cross_check, ConsistencyReport};
use crate::manifold::{Manifold, PrimePiece, SeifertData};

const MAX_GENUS: u32 = 2;
const MAX_OBSTRUCTION: i64 = 3;
const MAX_MULTIPLICITY: i64 = 5;
const MAX_FIBERS: usize = 3;
const MAX_SPHERICAL_ORDER: u64 = 8;
const MAX_SUMMANDS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    /// Distinct normalized inputs checked.
    pub inputs: usize,
    /// Enumerated descriptions refused by normalization (spherical space
    /// forms written as Seifert data).
    pub rejected: usize,
    /// Reports whose paths disagree, sorted by input.
    pub discrepancies: Vec<ConsistencyReport>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

fn normalized_pairs() -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for alpha in 2..=MAX_MULTIPLICITY {
        for beta in 1..alpha {
            if num_integer::gcd(alpha, beta) == 1 {
                out.push((alpha, beta));
            }
        }
    }
    out
}

/// Multisets of size `0..=max` drawn from `pool`, as index-sorted vectors.
fn multisets<T: Clone>(pool: &[T], max: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(
        pool: &[T],
        start: usize,
        left: usize,
        cur: &mut Vec<T>,
        out: &mut Vec<Vec<T>>,
    ) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i].clone());
            go(pool, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, 0, max, &mut Vec::new(), &mut out);
    out
}

fn seifert_samples() -> Vec<PrimePiece> {
    [
        SeifertData::new(1, 0, []),
        SeifertData::new(1, -1, []),
        SeifertData::new(2, 0, []),
        SeifertData::new(2, 1, []),
        SeifertData::new(0, -1, [(2, 1), (3, 1), (7, 1)]),
    ]
    .into_iter()
    .map(PrimePiece::SeifertFibered)
    .collect()
}

/// The sweep family: every normalized Seifert datum with genus `<= 2`,
/// `|b| <= 3`, at most three exceptional fibers of multiplicity `<= 5`, and
/// every connected sum of at most three summands from a fixed pool. Returns
/// the sorted distinct normalized inputs and the number of rejected
/// descriptions.
pub fn sweep_family() -> (Vec<Manifold>, usize) {
    let mut raw: Vec<Manifold> = Vec::new();
    let pairs = normalized_pairs();
    for fibers in multisets(&pairs, MAX_FIBERS) {
        for genus in 0..=MAX_GENUS {
            for b in -MAX_OBSTRUCTION..=MAX_OBSTRUCTION {
                let s = SeifertData::new(genus, b, fibers.iter().copied());
                raw.push(Manifold::new([PrimePiece::SeifertFibered(s)]));
            }
        }
    }

    let mut pool = vec![PrimePiece::S2xS1];
    pool.extend((2..=MAX_SPHERICAL_ORDER).map(PrimePiece::Spherical));
    pool.extend([
        PrimePiece::Hyperbolic,
        PrimePiece::Sol,
        PrimePiece::OtherAspherical,
    ]);
    pool.extend(seifert_samples());
    raw.extend(
        multisets(&pool, MAX_SUMMANDS)
            .into_iter()
            .map(Manifold::new),
    );

    let mut rejected = 0;
    let mut inputs = BTreeSet::new();
    for m in raw {
        match m.normalize() {
            Ok(n) => {
                inputs.insert(n);
            }
            Err(_) => rejected += 1,
        }
    }
    (inputs.into_iter().collect(), rejected)
}

/// Cross-checks every input of [`sweep_family`].
pub fn exhaustive_sweep() -> SweepSummary {
    let (inputs, rejected) = sweep_family();
    let discrepancies = inputs
        .iter()
        .map(cross_check)
        .filter(|r| !r.consistent())
        .collect();
    SweepSummary {
        inputs: inputs.len(),
        rejected,
        discrepancies,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_normalized_pairs() {
        assert_eq!(normalized_pairs().len(), 9);
    }

    #[test]
    fn multiset_counts() {
        // C(n + k - 1, k) summed over k = 0..=3
        assert_eq!(multisets(&[0; 9], 3).len(), 1 + 9 + 45 + 165);
        assert_eq!(multisets(&[0; 4], 2).len(), 1 + 4 + 10);
    }

    #[test]
    fn family_is_sorted_and_normalized() {
        let (inputs, rejected) = sweep_family();
        assert!(inputs.len() > 4000, "{}", inputs.len());
        assert!(rejected > 0);
        assert!(inputs.windows(2).all(|w| w[0] < w[1]));
        assert!(inputs.iter().all(|m| m.normalize().as_ref() == Ok(m)));
    }
}
