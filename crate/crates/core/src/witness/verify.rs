use serde::Serialize;

use super::{
    arc_gluing_oracle, BranchComponents, BranchDerivation, BranchedCoverSchema, Matrix2, Space,
    MINUS_IDENTITY,
};
use crate::group::{nielsen_schreier_rank, stallings_fold, SubgroupIndex};
use crate::manifold::PrimePiece;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

fn mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Orbits of the monodromy on the four 2-torsion points of `T2`, which are
/// the fixed points of `-id`.
fn monodromy_orbits(m: &Matrix2) -> u64 {
    let act = |v: (i64, i64)| {
        (
            (m[0][0] * v.0 + m[0][1] * v.1).rem_euclid(2),
            (m[1][0] * v.0 + m[1][1] * v.1).rem_euclid(2),
        )
    };
    let points = [(0, 0), (1, 0), (0, 1), (1, 1)];
    let mut seen = [false; 4];
    let mut orbits = 0;
    for (i, &p) in points.iter().enumerate() {
        if seen[i] {
            continue;
        }
        orbits += 1;
        let mut q = p;
        loop {
            let j = points.iter().position(|&r| r == q).unwrap();
            if seen[j] {
                break;
            }
            seen[j] = true;
            q = act(q);
        }
    }
    orbits
}

/// Number of `S2xS1` summands if the space is `#_n (S2 x S1)`.
fn free_sum_rank(space: &Space) -> Option<u64> {
    match space {
        Space::Manifold { manifold } => manifold
            .pieces
            .iter()
            .all(|p| *p == PrimePiece::S2xS1)
            .then_some(manifold.pieces.len() as u64),
        _ => None,
    }
}

/// Re-checks every quantity recorded in a schema. Failures are report
/// entries; this never errors.
pub fn verify_schema(s: &BranchedCoverSchema) -> VerificationReport {
    let mut r = VerificationReport::default();

    r.check(
        "degree",
        s.degree == 2,
        format!("degree {} (double cover)", s.degree),
    );

    let local_ok = s.local_degrees.iter().all(|&e| e >= 2 && e <= s.degree);
    let count_ok = match s.branch_components {
        BranchComponents::Determined(c) => s.local_degrees.len() as u64 == c,
        BranchComponents::Undetermined => true,
    };
    r.check(
        "local_degrees",
        local_ok && count_ok,
        format!("{:?} against {:?}", s.local_degrees, s.branch_components),
    );

    for slice in &s.slice_checks {
        let rhs = slice.expected_source_characteristic();
        r.check(
            format!("riemann_hurwitz[{}]", slice.label),
            slice.source_euler_characteristic == rhs
                && slice.degree == s.degree
                && slice
                    .local_degrees
                    .iter()
                    .all(|&e| e >= 2 && e <= slice.degree),
            format!(
                "{} = {}*{} - {}",
                slice.source_euler_characteristic,
                slice.degree,
                slice.target_euler_characteristic,
                slice.local_degrees.iter().map(|&e| e - 1).sum::<u64>()
            ),
        );
    }

    if let (BranchComponents::Determined(count), Some(derivation)) =
        (s.branch_components, s.branch_derivation)
    {
        let expected = match derivation {
            BranchDerivation::BranchPoints { branch_points } => Ok(branch_points),
            BranchDerivation::ArcGluing {
                points_in_disk,
                copies,
            } => arc_gluing_oracle(points_in_disk, copies)
                .map(u64::from)
                .map_err(|e| e.to_string()),
            BranchDerivation::MonodromyOrbits => s
                .monodromy
                .as_ref()
                .map(|m| monodromy_orbits(&m.matrix))
                .ok_or_else(|| "no monodromy recorded".to_string()),
        };
        let (passed, detail) = match expected {
            Ok(e) => (
                e == count,
                format!("recorded {count}, derived {e} via {derivation:?}"),
            ),
            Err(msg) => (false, msg),
        };
        r.check("branch_components", passed, detail);
    }

    if let Some(m) = &s.monodromy {
        let a = &m.matrix;
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        r.check("monodromy_determinant", det == 1, format!("det = {det}"));
        r.check(
            "monodromy_commutes_with_involution",
            m.involution == MINUS_IDENTITY && mul(a, &m.involution) == mul(&m.involution, a),
            format!("involution {:?}", m.involution),
        );
    }

    if let Some(fs) = &s.fiber_sum {
        let euler: i64 = fs
            .summands
            .iter()
            .map(|g| g.copies as i64 * g.euler_number)
            .sum();
        let genus: u64 = fs.summands.iter().map(|g| g.copies * g.base_genus).sum();
        let source_ok = matches!(
            s.source,
            Space::CircleBundle { base_genus, euler_number }
                if base_genus == fs.total_base_genus && euler_number == fs.total_euler_number
        );
        r.check(
            "fiber_sum_euler_additivity",
            euler == fs.total_euler_number && source_ok,
            format!(
                "summands add to {euler}, recorded {}",
                fs.total_euler_number
            ),
        );
        r.check(
            "fiber_sum_genus_additivity",
            genus == fs.total_base_genus,
            format!(
                "summands add to genus {genus}, recorded {}",
                fs.total_base_genus
            ),
        );
    }

    if let Some(pb) = &s.pullback {
        let source_ok = matches!(
            s.source,
            Space::CircleBundle { euler_number, .. } if euler_number == pb.pulled_back_euler_number
        );
        r.check(
            "pullback_degree",
            pb.total_space_degree == pb.base_map_degree,
            format!(
                "total space degree {} vs base degree {}",
                pb.total_space_degree, pb.base_map_degree
            ),
        );
        r.check(
            "pullback_euler_number",
            pb.pulled_back_euler_number == pb.base_map_degree as i64 * pb.bundle_euler_number
                && source_ok,
            format!(
                "{} = {} * {}",
                pb.pulled_back_euler_number, pb.base_map_degree, pb.bundle_euler_number
            ),
        );
    }

    if let Some(st) = &s.unramified_stage {
        let chi_ok = st.cover_surface_euler_characteristic
            == st.sheets as i64 * st.base_surface_euler_characteristic;
        let rank_ok = nielsen_schreier_rank(st.base_free_rank as i64, st.sheets as i64)
            == st.cover_free_rank as i64;
        let genus_ok = match s.source {
            Space::Product { genus }
            | Space::CircleBundle {
                base_genus: genus, ..
            } => {
                Space::surface_euler_characteristic(genus) == st.cover_surface_euler_characteristic
            }
            _ => false,
        };
        let target_ok = free_sum_rank(&s.target) == Some(st.cover_free_rank);
        r.check(
            "unramified_euler_multiplicativity",
            chi_ok && genus_ok,
            format!(
                "{} = {} * {}",
                st.cover_surface_euler_characteristic,
                st.sheets,
                st.base_surface_euler_characteristic
            ),
        );
        r.check(
            "unramified_nielsen_schreier",
            rank_ok && target_ok,
            format!(
                "rank {} from index {} in rank {}",
                st.cover_free_rank, st.sheets, st.base_free_rank
            ),
        );
    }

    if let Some(pi1) = &s.pi1_data {
        let (passed, detail) = if free_sum_rank(&s.target) != Some(pi1.target_rank as u64) {
            (
                false,
                format!("target is not free of rank {}", pi1.target_rank),
            )
        } else if pi1.target_rank == 0 {
            (true, "target group is trivial".to_string())
        } else {
            let words: Vec<_> = pi1.images.iter().map(|g| g.image.clone()).collect();
            match stallings_fold(pi1.target_rank, &words) {
                Ok(graph) => match graph.index() {
                    SubgroupIndex::Finite(1) => (true, "folded image has index 1".to_string()),
                    SubgroupIndex::Finite(i) => (false, format!("folded image has index {i}")),
                    SubgroupIndex::Infinite => {
                        (false, "folded image has infinite index".to_string())
                    }
                },
                Err(e) => (false, e.to_string()),
            }
        };
        r.check("pi1_surjective", passed, detail);
    }

    let target_shape = match (&s.source, free_sum_rank(&s.target)) {
        (Space::Product { genus }, Some(n)) => Some(*genus == n),
        (Space::CircleBundle { base_genus, .. }, Some(n)) => Some(*base_genus == n),
        (Space::Surface { .. }, _) => None,
        _ => Some(false),
    };
    if let Some(ok) = target_shape {
        r.check(
            "target_is_sum_of_s2xs1",
            ok,
            "target #_n(S2xS1) with n equal to the source (base) genus",
        );
    }

    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::{bundle_branched_cover_schema, product_branched_cover_schema};

    #[test]
    fn heisenberg_monodromy_has_three_fixed_orbits() {
        assert_eq!(monodromy_orbits(&[[1, 1], [0, 1]]), 3);
        assert_eq!(monodromy_orbits(&[[1, 0], [0, 1]]), 4);
        assert_eq!(monodromy_orbits(&[[0, -1], [1, 0]]), 3);
    }

    #[test]
    fn emitted_schemas_pass() {
        for n in 0..=8 {
            let p = verify_schema(&product_branched_cover_schema(n));
            assert!(
                p.passed(),
                "product {n}: {:?}",
                p.failures().collect::<Vec<_>>()
            );
            let b = verify_schema(&bundle_branched_cover_schema(n));
            assert!(
                b.passed(),
                "bundle {n}: {:?}",
                b.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn fiber_sum_fault() {
        let mut s = bundle_branched_cover_schema(2);
        s.fiber_sum.as_mut().unwrap().total_euler_number = 3;
        s.source = Space::CircleBundle {
            base_genus: 2,
            euler_number: 3,
        };
        let report = verify_schema(&s);
        let failed: Vec<_> = report.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["fiber_sum_euler_additivity"]);
    }

    #[test]
    fn surjectivity_of_whole_group() {
        let mut s = product_branched_cover_schema(2);
        let pi1 = s.pi1_data.as_mut().unwrap();
        pi1.images = vec![
            super::super::GeneratorImage {
                source_generator: "u".into(),
                image: "a".parse().unwrap(),
            },
            super::super::GeneratorImage {
                source_generator: "v".into(),
                image: "b".parse().unwrap(),
            },
        ];
        assert!(verify_schema(&s).passed());
        s.pi1_data.as_mut().unwrap().images[1].image = "bb".parse().unwrap();
        assert!(!verify_schema(&s).passed());
    }
}
