//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod support;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use circledom_core::decision::{
    dominated_by_nontrivial_circle_bundle, dominated_by_product, exhaustive_sweep,
    presentable_by_products, sweep_family, DecisionError,
};
use circledom_core::group::{free_cover_rank, reidemeister_schreier_rank_oracle, FreeProductData};
use circledom_core::manifold::{classify_geometry, parse_manifold, Manifold, PrimePiece};
use circledom_core::witness::{
    bundle_branched_cover_schema, pillowcase_schema, product_branched_cover_schema, verify_schema,
    BranchComponents, VerificationReport,
};
use num_traits::ToPrimitive;

type Outcome = Result<String, Vec<String>>;
type Criterion = (&'static str, fn() -> Outcome);

/// (description, dominated by a product, dominated by a non-trivial bundle)
const TRUTH_TABLE: &[(&str, bool, bool)] = &[
    ("SFS(g=1;b=0)", true, false),
    ("SFS(g=2;b=0)", true, false),
    ("SFS(g=1;b=-1)", false, true),
    ("SFS(g=2;b=1)", false, true),
    ("Hyperbolic", false, false),
    ("Sol", false, false),
    ("OtherAspherical", false, false),
    ("S3", true, true),
    ("S2xS1", true, true),
    ("Spherical(120)", true, true),
    ("Spherical(2) # Spherical(2)", true, true),
    ("S2xS1 # Spherical(2)", true, true),
    ("SFS(g=2;b=0) # Spherical(3)", false, false),
    ("SFS(g=0;b=1;(2,1),(3,1),(5,1))", false, true),
    ("SFS(g=0;b=-1;(2,1),(3,1),(7,1))", false, true),
];

fn truth_table() -> Outcome {
    let mut failures = Vec::new();
    for &(text, product, bundle) in TRUTH_TABLE {
        let m = match parse_manifold(text)
            .map_err(|e| e.to_string())
            .and_then(|m| m.normalize().map_err(|e| e.to_string()))
        {
            Ok(m) => m,
            Err(e) => {
                failures.push(format!(
                    "{text}: expected {product}/{bundle}, input rejected: {e}"
                ));
                continue;
            }
        };
        let got = (
            dominated_by_product(&m).verdict,
            dominated_by_nontrivial_circle_bundle(&m).verdict,
        );
        if got != (product, bundle) {
            failures.push(format!(
                "{text}: expected {product}/{bundle}, got {}/{}",
                got.0, got.1
            ));
        }
    }
    if failures.is_empty() {
        Ok(format!("{} entries", TRUTH_TABLE.len()))
    } else {
        Err(failures)
    }
}

fn cross_check_sweep() -> Outcome {
    let summary = exhaustive_sweep();
    if summary.inputs < 2000 {
        return Err(vec![format!("only {} inputs", summary.inputs)]);
    }
    if summary.passed() {
        Ok(format!(
            "{} inputs ({} rejected descriptions), 0 discrepancies",
            summary.inputs, summary.rejected
        ))
    } else {
        Err(summary
            .discrepancies
            .iter()
            .map(|r| format!("{}: {:?}", r.manifold, r.trace))
            .collect())
    }
}

/// Sorted multisets of integers `>= min` with product `<= limit`.
fn order_multisets(min: u64, limit: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    out.push(cur.clone());
    let product: u64 = cur.iter().product();
    for q in min..=limit / product {
        cur.push(q);
        order_multisets(q, limit, cur, out);
        cur.pop();
    }
}

fn oracle_equivalence() -> Outcome {
    let mut failures = Vec::new();
    let mut sets = Vec::new();
    order_multisets(2, 200, &mut Vec::new(), &mut sets);
    let mut compared = 0;
    for l in 0..=3 {
        for orders in &sets {
            let d = FreeProductData::new(l, orders.iter().copied());
            let formula = free_cover_rank(&d).map(|c| c.rank.to_u64());
            let oracle = reidemeister_schreier_rank_oracle(&d, 200);
            compared += 1;
            match (formula, oracle) {
                (Ok(Some(a)), Ok(b)) if a == b => {}
                (f, o) => failures.push(format!(
                    "l={l} orders={orders:?}: formula {f:?}, oracle {o:?}"
                )),
            }
        }
    }
    for (orders, rank) in [(vec![2], 0), (vec![2, 2], 1), (vec![120], 0)] {
        let d = FreeProductData::new(0, orders.clone());
        let got = reidemeister_schreier_rank_oracle(&d, 200).ok();
        if got != Some(rank) {
            failures.push(format!(
                "anchor {orders:?}: expected rank {rank}, got {got:?}"
            ));
        }
    }
    if failures.is_empty() {
        Ok(format!("{compared} free products agree"))
    } else {
        Err(failures)
    }
}

fn has_passing(r: &VerificationReport, name: &str) -> bool {
    r.checks
        .iter()
        .any(|c| c.name.starts_with(name) && c.passed)
}

fn certificate_verification() -> Outcome {
    let mut failures = Vec::new();
    let mut require = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
    };

    let pillow = verify_schema(&pillowcase_schema());
    let slice = &pillowcase_schema().slice_checks[0];
    require(
        pillow.passed()
            && slice.source_euler_characteristic == 0
            && slice.expected_source_characteristic() == 0,
        "pillowcase Riemann-Hurwitz 0 = 2*2 - 4".into(),
    );

    for n in 0..=8u64 {
        let schema = product_branched_cover_schema(n);
        let r = verify_schema(&schema);
        require(
            r.passed(),
            format!("product({n}): {:?}", r.failures().collect::<Vec<_>>()),
        );
        if n <= 2 {
            require(
                has_passing(&r, "pi1_surjective"),
                format!("product({n}) surjectivity check"),
            );
        }
        if n >= 1 {
            require(
                has_passing(&r, "riemann_hurwitz"),
                format!("product({n}) Riemann-Hurwitz"),
            );
        }
        if n >= 3 {
            require(
                has_passing(&r, "unramified_euler_multiplicativity"),
                format!("product({n}) chi multiplicativity"),
            );
        }

        let schema = bundle_branched_cover_schema(n);
        let r = verify_schema(&schema);
        require(
            r.passed(),
            format!("bundle({n}): {:?}", r.failures().collect::<Vec<_>>()),
        );
        if n == 1 {
            require(
                has_passing(&r, "monodromy_commutes_with_involution"),
                "bundle(1) monodromy commutation".into(),
            );
        }
        if n >= 1 {
            let total = schema.fiber_sum.as_ref().map(|f| f.total_euler_number);
            require(
                has_passing(&r, "fiber_sum_euler_additivity") && total == Some(n as i64),
                format!("bundle({n}) euler additivity, total {total:?}"),
            );
        } else {
            require(
                has_passing(&r, "pullback_euler_number"),
                "bundle(0) Hopf pullback".into(),
            );
        }
        if n <= 2 {
            require(
                has_passing(&r, "pi1_surjective"),
                format!("bundle({n}) surjectivity check"),
            );
        }
    }

    // injected faults
    let mut s = product_branched_cover_schema(1);
    s.branch_components = BranchComponents::Determined(5);
    require(
        !verify_schema(&s).passed(),
        "perturbed branch count accepted".into(),
    );

    let mut s = product_branched_cover_schema(2);
    s.branch_components = BranchComponents::Determined(7);
    s.local_degrees.push(2);
    require(
        !verify_schema(&s).passed(),
        "perturbed arc-gluing count accepted".into(),
    );

    let mut s = bundle_branched_cover_schema(1);
    s.branch_components = BranchComponents::Determined(4);
    s.local_degrees.push(2);
    require(
        !verify_schema(&s).passed(),
        "perturbed monodromy orbit count accepted".into(),
    );

    let mut s = bundle_branched_cover_schema(3);
    s.fiber_sum.as_mut().unwrap().summands[0].euler_number = 2;
    require(
        !verify_schema(&s).passed(),
        "perturbed euler sum accepted".into(),
    );

    let mut s = product_branched_cover_schema(2);
    s.pi1_data.as_mut().unwrap().images[4].image = "bb".parse().unwrap();
    require(
        !verify_schema(&s).passed(),
        "non-surjective pi1 images accepted".into(),
    );

    let mut s = bundle_branched_cover_schema(1);
    s.pi1_data
        .as_mut()
        .unwrap()
        .images
        .retain(|g| g.image.is_empty());
    require(
        !verify_schema(&s).passed(),
        "trivial pi1 images accepted".into(),
    );

    let mut s = product_branched_cover_schema(5);
    s.unramified_stage
        .as_mut()
        .unwrap()
        .cover_surface_euler_characteristic = -6;
    require(
        !verify_schema(&s).passed(),
        "perturbed unramified chi accepted".into(),
    );

    if failures.is_empty() {
        Ok("n = 0..8, both families, 7 injected faults rejected".into())
    } else {
        Err(failures)
    }
}

fn presentability_table() -> Outcome {
    let mut failures = Vec::new();
    let (family, _) = sweep_family();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for m in &family {
        let result = presentable_by_products(m);
        let expected = match m.pieces.as_slice() {
            [] | [PrimePiece::Spherical(_)] => None,
            [PrimePiece::SeifertFibered(_)] | [PrimePiece::S2xS1] => Some(true),
            [PrimePiece::Spherical(2), PrimePiece::Spherical(2)] => Some(true),
            _ => Some(false),
        };
        let ok = match (expected, &result) {
            (None, Err(DecisionError::FiniteFundamentalGroup { .. })) => true,
            (Some(v), Ok(d)) => d.verdict == v,
            _ => false,
        };
        if !ok {
            failures.push(format!("{m}: expected {expected:?}, got {result:?}"));
        }
        *counts
            .entry(match expected {
                None => "finite",
                Some(true) => "yes",
                Some(false) => "no",
            })
            .or_default() += 1;

        if let Some(piece @ PrimePiece::SeifertFibered(_)) = m.single_piece() {
            let twisted = classify_geometry(piece)
                .map(|g| g.is_twisted_bundle_type())
                .unwrap_or(false);
            if twisted && dominated_by_product(m).verdict {
                failures.push(format!("{m}: twisted piece dominated by a product"));
            }
        }
    }
    for text in ["Hyperbolic", "Sol", "OtherAspherical"] {
        let m: Manifold = text.parse().unwrap();
        if presentable_by_products(&m).map(|d| d.verdict) != Ok(false) {
            failures.push(format!("{text} presentable"));
        }
    }
    if failures.is_empty() {
        Ok(format!("{} inputs: {counts:?}", family.len()))
    } else {
        Err(failures)
    }
}

fn property_suites() -> Outcome {
    let suites = support::all_suites();
    let count = suites.len();
    let failures: Vec<String> = suites
        .into_iter()
        .filter_map(|(name, r)| r.err().map(|e| format!("{name}: {e}")))
        .collect();
    if failures.is_empty() {
        Ok(format!("{} suites, seed {:#x}", count, support::SEED))
    } else {
        Err(failures)
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("1 corpus truth table", truth_table),
        ("2 cross-check sweep", cross_check_sweep),
        ("3 free-cover rank oracle equivalence", oracle_equivalence),
        ("4 certificate verification", certificate_verification),
        ("5 presentability table", presentability_table),
        ("6 property suites", property_suites),
    ];
    let start = Instant::now();
    let mut all = true;
    for (name, criterion) in criteria {
        match criterion() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(failures) => {
                all = false;
                println!("FAIL criterion {name}:");
                for f in failures.iter().take(20) {
                    println!("    {f}");
                }
            }
        }
    }
    println!("acceptance finished in {:.1?}", start.elapsed());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
