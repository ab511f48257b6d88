//! Group-theoretic bookkeeping for fundamental groups of rationally
//! inessential manifolds, `F_l * Q_1 * .. * Q_k` with finite `Q_i`.
//!
//! The kernel of the projection onto `Q_1 x .. x Q_k` is free of finite
//! index; [`free_cover_rank`] computes its rank from the rational Euler
//! characteristic and [`reidemeister_schreier_rank_oracle`] recomputes it by
//! enumerating cosets.

mod fold;
mod word;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::manifold::{Manifold, PrimePiece};

pub use fold::{
    stallings_fold, stallings_fold_with_order, subgroup_index, Edge, FoldOrder, SubgroupGraph,
    SubgroupIndex,
};
pub use word::{Letter, Word};

/// Default bound on the coset count enumerated by the oracle.
pub const DEFAULT_ORACLE_BOUND: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty generator alphabet")]
    EmptyAlphabet,
    #[error("word '{word}' uses a generator outside a free group of rank {rank}")]
    GeneratorOutOfRange { word: String, rank: usize },
    #[error("malformed word '{word}': expected letters a-z / A-Z or 1")]
    WordSyntax { word: String },
    #[error("coset count {cosets} exceeds the oracle bound {bound}")]
    BoundExceeded { cosets: BigInt, bound: u64 },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

/// `F_l * Q_1 * .. * Q_k` by free rank and the orders `|Q_i| >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FreeProductData {
    pub free_rank: u32,
    /// Sorted multiset of finite factor orders.
    pub orders: Vec<u64>,
}

impl FreeProductData {
    pub fn new(free_rank: u32, orders: impl IntoIterator<Item = u64>) -> Self {
        let mut orders: Vec<u64> = orders.into_iter().collect();
        orders.sort_unstable();
        FreeProductData { free_rank, orders }
    }

    /// The free product decomposition of `pi_1`, or `None` if the manifold
    /// has an aspherical summand.
    pub fn from_manifold(m: &Manifold) -> Option<Self> {
        let mut free_rank = 0;
        let mut orders = Vec::new();
        for p in &m.pieces {
            match p {
                PrimePiece::S2xS1 => free_rank += 1,
                PrimePiece::Spherical(q) => orders.push(*q),
                _ => return None,
            }
        }
        Some(FreeProductData::new(free_rank, orders))
    }

    /// `prod |Q_i|`, the index of the kernel.
    pub fn quotient_order(&self) -> BigInt {
        self.orders.iter().map(|&q| BigInt::from(q)).product()
    }
}

/// `chi = 1 - l - sum (1 - 1/q)`.
pub fn free_product_euler_characteristic(d: &FreeProductData) -> BigRational {
    let start = BigRational::from_integer(BigInt::from(1 - i64::from(d.free_rank)));
    d.orders.iter().fold(start, |acc, &q| {
        acc - BigRational::one() + BigRational::new(BigInt::one(), BigInt::from(q))
    })
}

/// The finite cover `#_rank (S2 x S1)` of degree `degree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeCover {
    #[serde(serialize_with = "crate::serde_display")]
    pub rank: BigInt,
    #[serde(serialize_with = "crate::serde_display")]
    pub degree: BigInt,
}

/// Rank of the free kernel, `n = 1 - m chi` with `m = prod |Q_i|`.
pub fn free_cover_rank(d: &FreeProductData) -> Result<FreeCover, GroupError> {
    let degree = d.quotient_order();
    let chi = free_product_euler_characteristic(d);
    let n = BigRational::one() - BigRational::from_integer(degree.clone()) * chi;
    if !n.is_integer() || n.is_negative() {
        return Err(GroupError::Inconsistent(format!(
            "kernel rank {n} is not a non-negative integer"
        )));
    }
    Ok(FreeCover {
        rank: n.to_integer(),
        degree,
    })
}

/// Rank of an index-`index` subgroup of a free group of rank `rank`.
pub fn nielsen_schreier_rank(rank: i64, index: i64) -> i64 {
    1 + index * (rank - 1)
}

/// Recomputes [`free_cover_rank`] by brute force.
///
/// Realizes every `Q_i` as a cyclic group, enumerates the `m` elements of
/// `Q_1 x .. x Q_k` explicitly and builds the quotient of the Bass-Serre tree
/// of the free product by the kernel: one vertex per coset (lifts of the
/// trivial central vertex), one vertex per orbit of each `Q_i` on the cosets,
/// a loop per coset for each free generator, and an edge from each coset to
/// its `Q_i`-orbit. All vertex stabilizers are trivial, so the kernel is the
/// fundamental group of this graph and its rank is the first Betti number.
pub fn reidemeister_schreier_rank_oracle(
    d: &FreeProductData,
    bound: u64,
) -> Result<u64, GroupError> {
    let cosets = d.quotient_order();
    let m = match cosets.to_u64() {
        Some(m) if m <= bound => m as usize,
        _ => return Err(GroupError::BoundExceeded { cosets, bound }),
    };
    let radices: Vec<usize> = d.orders.iter().map(|&q| q as usize).collect();

    // Mixed-radix encoding; stride[i] moves the i-th coordinate by one.
    let mut stride = Vec::with_capacity(radices.len());
    let mut s = 1usize;
    for &q in &radices {
        stride.push(s);
        s *= q;
    }
    let act = |coset: usize, i: usize| -> usize {
        let digit = (coset / stride[i]) % radices[i];
        let next = (digit + 1) % radices[i];
        coset - digit * stride[i] + next * stride[i]
    };

    let mut vertices = m;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for _ in 0..d.free_rank {
        // phi kills free generators: each coset is fixed
        edges.extend((0..m).map(|c| (c, c)));
    }
    for i in 0..radices.len() {
        let mut orbit_of = vec![usize::MAX; m];
        for start in 0..m {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = vertices;
            vertices += 1;
            let mut c = start;
            while orbit_of[c] == usize::MAX {
                orbit_of[c] = id;
                c = act(c, i);
            }
        }
        edges.extend((0..m).map(|c| (c, orbit_of[c])));
    }

    let mut parent: Vec<usize> = (0..vertices).collect();
    fn root(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut components = vertices;
    for &(u, v) in &edges {
        let (ru, rv) = (root(&mut parent, u), root(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            components -= 1;
        }
    }
    if components != 1 {
        return Err(GroupError::Inconsistent(format!(
            "covering graph has {components} components"
        )));
    }
    Ok((edges.len() + 1 - vertices) as u64)
}
