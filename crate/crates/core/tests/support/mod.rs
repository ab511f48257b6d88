//! Randomized property suites shared by the `properties` and `acceptance`
//! targets. Every suite runs from a fixed seed.

#![allow(dead_code)]

use std::collections::VecDeque;

use circledom_core::decision::{
    dominated_by_any_circle_bundle, dominated_by_nontrivial_circle_bundle, dominated_by_product,
    presentable_by_products,
};
use circledom_core::group::{
    nielsen_schreier_rank, stallings_fold, stallings_fold_with_order, FoldOrder, Letter,
    SubgroupIndex, Word,
};
use circledom_core::manifold::{classify_geometry, Geometry, Manifold, PrimePiece, SeifertData};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_2024;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Config::default()
    })
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Seifert data with arbitrary (unreduced) coprime fiber pairs.
pub fn seifert_data() -> impl Strategy<Value = SeifertData> {
    let fiber = (2i64..=12, -40i64..=40).prop_filter("coprime", |&(a, b)| gcd(a, b) == 1);
    (0u32..=4, -10i64..=10, prop::collection::vec(fiber, 0..=5))
        .prop_map(|(g, b, fibers)| SeifertData::new(g, b, fibers))
}

fn prime_piece() -> impl Strategy<Value = PrimePiece> {
    prop_oneof![
        Just(PrimePiece::S2xS1),
        (2u64..=60).prop_map(PrimePiece::Spherical),
        Just(PrimePiece::Hyperbolic),
        Just(PrimePiece::Sol),
        Just(PrimePiece::OtherAspherical),
        seifert_data().prop_map(PrimePiece::SeifertFibered),
        seifert_data().prop_map(PrimePiece::SeifertFibered),
    ]
}

/// Normalized manifolds with up to four summands.
pub fn manifold() -> impl Strategy<Value = Manifold> {
    prop::collection::vec(prime_piece(), 0..=4)
        .prop_filter_map("spherical space form in Seifert form", |pieces| {
            Manifold::new(pieces).normalize().ok()
        })
}

pub fn normalization_idempotence() -> Result<(), String> {
    run(2000, seifert_data(), |s| {
        let n = s.normalize();
        prop_assert!(n.is_normalized());
        prop_assert_eq!(n.normalize(), n.clone());
        prop_assert_eq!(n.euler_number(), s.euler_number());
        prop_assert_eq!(
            n.orbifold_euler_characteristic(),
            s.orbifold_euler_characteristic()
        );
        Ok(())
    })
}

pub fn permutation_invariance() -> Result<(), String> {
    let strategy = (
        seifert_data(),
        prop::collection::vec(prime_piece(), 0..=4),
        any::<u64>(),
    );
    run(1000, strategy, |(s, pieces, shuffle_seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(shuffle_seed);
        let mut fibers: Vec<(i64, i64)> = s.fibers.iter().map(|f| (f.alpha, f.beta)).collect();
        fibers.shuffle(&mut rng);
        let t = SeifertData::new(s.genus, s.obstruction, fibers);
        prop_assert_eq!(t.normalize(), s.normalize());

        let mut shuffled = pieces.clone();
        shuffled.shuffle(&mut rng);
        prop_assert_eq!(
            Manifold::new(shuffled).normalize(),
            Manifold::new(pieces).normalize()
        );
        Ok(())
    })
}

fn word(rank: u8) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, any::<bool>()), 0..=8).prop_map(|letters| {
        Word::new(letters.into_iter().map(
            |(g, inv)| {
                if inv {
                    Letter::inv(g)
                } else {
                    Letter::gen(g)
                }
            },
        ))
    })
}

fn word_set() -> impl Strategy<Value = (usize, Vec<Word>)> {
    (1u8..=3).prop_flat_map(|r| (Just(r as usize), prop::collection::vec(word(r), 0..=5)))
}

pub fn folding_confluence() -> Result<(), String> {
    run(1500, word_set(), |(rank, words)| {
        let a = stallings_fold_with_order(rank, &words, FoldOrder::Lexicographic).unwrap();
        let b = stallings_fold_with_order(rank, &words, FoldOrder::ReverseLexicographic).unwrap();
        prop_assert!(a.is_folded());
        prop_assert_eq!(&a, &b);
        for w in &words {
            prop_assert!(a.accepts(w), "generator {} not accepted", w);
        }
        Ok(())
    })
}

/// Random transitive actions of `F_r` on `{0..n}`, the Schreier generators of
/// the stabilizer of 0, and the folded graph of those generators: the index
/// must be `n` and the rank `1 + n (r - 1)`.
pub fn nielsen_schreier_by_folding(reps: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut done = 0;
    while done < reps {
        let rank = rng.gen_range(1..=3usize);
        let n = rng.gen_range(1..=7usize);
        let perms: Vec<Vec<usize>> = (0..rank)
            .map(|_| {
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect();

        // spanning tree by BFS over the Schreier graph, edges in both directions
        let mut path: Vec<Option<Word>> = vec![None; n];
        path[0] = Some(Word::identity());
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            let here = path[c].clone().unwrap();
            for (g, p) in perms.iter().enumerate() {
                let forward = p[c];
                let backward = p.iter().position(|&x| x == c).unwrap();
                for (next, letter) in [
                    (forward, Letter::gen(g as u8)),
                    (backward, Letter::inv(g as u8)),
                ] {
                    if path[next].is_none() {
                        path[next] = Some(here.concat(&Word::new([letter])));
                        queue.push_back(next);
                    }
                }
            }
        }
        if path.iter().any(Option::is_none) {
            continue; // not transitive
        }
        let mut generators = Vec::new();
        for c in 0..n {
            for (g, p) in perms.iter().enumerate() {
                let u = path[c].as_ref().unwrap();
                let v = path[p[c]].as_ref().unwrap();
                let w = u
                    .concat(&Word::new([Letter::gen(g as u8)]))
                    .concat(&v.inverse());
                if !w.is_empty() {
                    generators.push(w);
                }
            }
        }
        let graph = stallings_fold(rank, &generators).map_err(|e| e.to_string())?;
        if graph.index() != SubgroupIndex::Finite(n) {
            return Err(format!(
                "rank {rank}, {n} cosets, perms {perms:?}: index {:?}",
                graph.index()
            ));
        }
        let expected = nielsen_schreier_rank(rank as i64, n as i64);
        if graph.subgroup_rank() as i64 != expected {
            return Err(format!(
                "rank {rank}, {n} cosets: folded rank {} != {expected}",
                graph.subgroup_rank()
            ));
        }
        done += 1;
    }
    Ok(())
}

pub fn disjunction_identity() -> Result<(), String> {
    run(2000, manifold(), |m| {
        let any = dominated_by_any_circle_bundle(&m).verdict;
        let product = dominated_by_product(&m).verdict;
        let bundle = dominated_by_nontrivial_circle_bundle(&m).verdict;
        prop_assert_eq!(any, product || bundle, "{}", m);
        Ok(())
    })
}

/// Inessential inputs are dominated both ways; essential inputs at most one
/// way, according to the geometry of the single piece.
pub fn essential_exclusivity() -> Result<(), String> {
    run(2000, manifold(), |m| {
        let product = dominated_by_product(&m).verdict;
        let bundle = dominated_by_nontrivial_circle_bundle(&m).verdict;
        if !m.is_rationally_essential() {
            prop_assert!(product && bundle, "{}", m);
            return Ok(());
        }
        prop_assert!(!(product && bundle), "{}", m);
        let geometry = m.single_piece().map(|p| classify_geometry(p).unwrap());
        prop_assert_eq!(
            product,
            matches!(geometry, Some(Geometry::E3 | Geometry::H2xR)),
            "{}",
            m
        );
        prop_assert_eq!(
            bundle,
            matches!(geometry, Some(Geometry::Nil | Geometry::SL2Rtilde)),
            "{}",
            m
        );
        Ok(())
    })
}

/// Single Nil or SL2R~ pieces: presentable by products, not product-dominated.
pub fn twisted_pieces_presentable() -> Result<(), String> {
    let twisted = seifert_data().prop_filter_map("needs Nil or SL2R~ geometry", |s| {
        let m = Manifold::new([PrimePiece::SeifertFibered(s)])
            .normalize()
            .ok()?;
        let g = classify_geometry(m.single_piece()?).ok()?;
        g.is_twisted_bundle_type().then_some(m)
    });
    run(1000, twisted, |m| {
        prop_assert!(presentable_by_products(&m).unwrap().verdict, "{}", m);
        prop_assert!(!dominated_by_product(&m).verdict, "{}", m);
        Ok(())
    })
}

pub fn all_suites() -> Vec<(&'static str, Result<(), String>)> {
    vec![
        (
            "normalization idempotence and e/chi preservation",
            normalization_idempotence(),
        ),
        ("permutation invariance", permutation_invariance()),
        ("folding confluence", folding_confluence()),
        (
            "Nielsen-Schreier via folding",
            nielsen_schreier_by_folding(100),
        ),
        ("disjunction identity", disjunction_identity()),
        ("essential exclusivity", essential_exclusivity()),
        ("twisted pieces presentable", twisted_pieces_presentable()),
    ]
}
