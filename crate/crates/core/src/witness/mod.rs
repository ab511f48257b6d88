//! Certificates backing positive domination answers.
//!
//! A [`BranchedCoverSchema`] records the arithmetic of a branched double
//! cover of `#_n (S2 x S1)` by `Sigma_n x S1` or by a non-trivial circle
//! bundle over `Sigma_n`: Riemann-Hurwitz data for surface slices, the branch
//! locus, monodromy of mapping-torus descriptions, fiber sums, pullbacks,
//! unramified stages and images of `pi_1` generators. [`verify_schema`]
//! re-checks every recorded quantity. Schemas are symbolic; no triangulated
//! map is ever built.
//!
//! A [`FiniteCoverWitness`] names a finite cover of an aspherical Seifert
//! piece by a product or a circle bundle.

mod arc;
mod cover;
mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::Word;
use crate::manifold::Manifold;

pub use arc::arc_gluing_oracle;
pub use cover::{finite_cover_witness, ConstructionStatus, CoverDescriptor, FiniteCoverWitness};
pub use verify::{verify_schema, Check, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("arc gluing is only modelled for 0 or 2 branch points in the disk and 2 copies, got ({points_in_disk}, {copies})")]
    UnsupportedArcGluing { points_in_disk: u32, copies: u32 },
    #[error("{piece} has positive orbifold Euler characteristic and no aspherical finite cover")]
    NotAspherical { piece: String },
}

/// Source or target of a branched cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Space {
    /// Closed orientable surface.
    Surface {
        genus: u64,
    },
    /// `Sigma_genus x S1`.
    Product {
        genus: u64,
    },
    /// Oriented circle bundle over `Sigma_base_genus`.
    CircleBundle {
        base_genus: u64,
        euler_number: i64,
    },
    Manifold {
        manifold: Manifold,
    },
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Surface { genus } => write!(f, "Sigma_{genus}"),
            Space::Product { genus } => write!(f, "Sigma_{genus} x S1"),
            Space::CircleBundle {
                base_genus,
                euler_number,
            } => write!(
                f,
                "circle bundle over Sigma_{base_genus} with Euler number {euler_number}"
            ),
            Space::Manifold { manifold } => write!(f, "{manifold}"),
        }
    }
}

impl Space {
    pub fn surface_euler_characteristic(genus: u64) -> i64 {
        2 - 2 * genus as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchComponents {
    Determined(u64),
    Undetermined,
}

/// How the number of branch components follows from the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BranchDerivation {
    /// One component per branch point of the base surface map (points in
    /// dimension two, circles after crossing with `S1`).
    BranchPoints { branch_points: u64 },
    /// Cut-and-double of the product construction; see [`arc_gluing_oracle`].
    ArcGluing { points_in_disk: u32, copies: u32 },
    /// Orbits of the monodromy on the fixed points of the involution.
    MonodromyOrbits,
}

/// Riemann-Hurwitz data of a branched cover of closed surfaces, or of
/// compact surfaces with boundary covered without branching on the boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceCheck {
    pub label: String,
    pub source_euler_characteristic: i64,
    pub target_euler_characteristic: i64,
    pub degree: u64,
    pub local_degrees: Vec<u64>,
}

impl SliceCheck {
    fn new(label: &str, source: i64, target: i64, branch_points: usize) -> Self {
        SliceCheck {
            label: label.to_string(),
            source_euler_characteristic: source,
            target_euler_characteristic: target,
            degree: 2,
            local_degrees: vec![2; branch_points],
        }
    }

    /// Right-hand side `d chi(target) - sum (e_i - 1)`.
    pub fn expected_source_characteristic(&self) -> i64 {
        self.degree as i64 * self.target_euler_characteristic
            - self
                .local_degrees
                .iter()
                .map(|&e| e as i64 - 1)
                .sum::<i64>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorImage {
    pub source_generator: String,
    pub image: Word,
}

/// Images of `pi_1(source)` generators in the free group `pi_1(target)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi1Data {
    pub target_rank: usize,
    pub images: Vec<GeneratorImage>,
}

/// `#_cover_free_rank (S2 x S1)` covering `#_base_free_rank (S2 x S1)`
/// without branching, and the matching surface cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnramifiedStage {
    pub sheets: u64,
    pub base_free_rank: u64,
    pub cover_free_rank: u64,
    pub base_surface_euler_characteristic: i64,
    pub cover_surface_euler_characteristic: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandGroup {
    pub copies: u64,
    pub euler_number: i64,
    pub base_genus: u64,
}

/// Fiber sum of circle bundles: Euler numbers and base genera add.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberSum {
    pub summands: Vec<SummandGroup>,
    pub total_euler_number: i64,
    pub total_base_genus: u64,
}

/// A bundle pulled back along a base map: the total-space map has the same
/// degree as the base map, and the Euler number scales by it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pullback {
    pub base_map_degree: u64,
    pub total_space_degree: u64,
    pub bundle_euler_number: i64,
    pub pulled_back_euler_number: i64,
}

pub type Matrix2 = [[i64; 2]; 2];

pub const MINUS_IDENTITY: Matrix2 = [[-1, 0], [0, -1]];

/// Monodromy of a torus mapping torus and the hyperelliptic involution it
/// must commute with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyData {
    pub matrix: Matrix2,
    pub involution: Matrix2,
}

impl MonodromyData {
    pub fn new(matrix: Matrix2) -> Self {
        MonodromyData {
            matrix,
            involution: MINUS_IDENTITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchedCoverSchema {
    pub name: String,
    pub source: Space,
    pub target: Space,
    pub degree: u64,
    pub branch_components: BranchComponents,
    pub branch_derivation: Option<BranchDerivation>,
    /// One entry per branch component when the count is determined.
    pub local_degrees: Vec<u64>,
    pub slice_checks: Vec<SliceCheck>,
    pub pi1_data: Option<Pi1Data>,
    pub unramified_stage: Option<UnramifiedStage>,
    pub fiber_sum: Option<FiberSum>,
    pub pullback: Option<Pullback>,
    pub monodromy: Option<MonodromyData>,
    pub notes: Vec<String>,
}

fn images(list: &[(&str, &str)]) -> Vec<GeneratorImage> {
    list.iter()
        .map(|&(g, w)| GeneratorImage {
            source_generator: g.to_string(),
            image: w.parse().expect("hardcoded word"),
        })
        .collect()
}

fn pillowcase_slice(label: &str) -> SliceCheck {
    SliceCheck::new(label, 0, 2, 4)
}

fn sum_target(n: u64) -> Space {
    Space::Manifold {
        manifold: Manifold::sum_of_s2xs1(n as usize),
    }
}

/// The hyperelliptic double cover `T2 -> S2` with four branch points.
pub fn pillowcase_schema() -> BranchedCoverSchema {
    BranchedCoverSchema {
        name: "pillowcase".into(),
        source: Space::Surface { genus: 1 },
        target: Space::Surface { genus: 0 },
        degree: 2,
        branch_components: BranchComponents::Determined(4),
        branch_derivation: Some(BranchDerivation::BranchPoints { branch_points: 4 }),
        local_degrees: vec![2; 4],
        slice_checks: vec![pillowcase_slice("T2 -> S2")],
        pi1_data: None,
        unramified_stage: None,
        fiber_sum: None,
        pullback: None,
        monodromy: None,
        notes: vec!["quotient of T2 by the involution -id".into()],
    }
}

/// `Sigma_n x S1 -> #_n (S2 x S1)`, a `pi_1`-surjective branched double cover.
///
/// `n = 1` is the pillowcase times `S1`; `n = 2` doubles the complement of
/// a ball around an arc joining two branch points; `n >= 3` is the fiber
/// product of the `n = 2` cover with the `(n-1)`-sheeted unramified cover of
/// `#_2 (S2 x S1)` by `#_n (S2 x S1)`. For `n = 0` the target is `S3` and the
/// source `S2 x S1`, the double cover branched along a two-component unlink.
pub fn product_branched_cover_schema(n: u64) -> BranchedCoverSchema {
    let mut schema = BranchedCoverSchema {
        name: format!("product_branched_cover({n})"),
        source: Space::Product { genus: n },
        target: sum_target(n),
        degree: 2,
        branch_components: BranchComponents::Undetermined,
        branch_derivation: None,
        local_degrees: Vec::new(),
        slice_checks: Vec::new(),
        pi1_data: None,
        unramified_stage: None,
        fiber_sum: None,
        pullback: None,
        monodromy: None,
        notes: Vec::new(),
    };
    match n {
        0 => {
            schema.branch_components = BranchComponents::Determined(2);
            schema.branch_derivation = Some(BranchDerivation::BranchPoints { branch_points: 2 });
            schema.local_degrees = vec![2; 2];
            schema.slice_checks = vec![SliceCheck::new("S2 -> S2, z -> z^2", 2, 2, 2)];
            schema.pi1_data = Some(Pi1Data {
                target_rank: 0,
                images: images(&[("t", "1")]),
            });
            schema.notes.push(
                "degenerate case: S2 x S1 double covers S3 branched along a two-component unlink; \
                 the circle-bundle certificate for S3 is the pulled-back Hopf fibration"
                    .into(),
            );
        }
        1 => {
            schema.branch_components = BranchComponents::Determined(4);
            schema.branch_derivation = Some(BranchDerivation::BranchPoints { branch_points: 4 });
            schema.local_degrees = vec![2; 4];
            schema.slice_checks = vec![pillowcase_slice("T2 x {t} -> S2 x {t}")];
            schema.pi1_data = Some(Pi1Data {
                target_rank: 1,
                images: images(&[("x", "1"), ("y", "1"), ("t", "a")]),
            });
            schema
                .notes
                .push("pillowcase times the identity of S1".into());
        }
        _ => {
            let branched = vec![
                SliceCheck::new("cut slice: annulus T2 - A -> disk S2 - D2", 0, 1, 2),
                SliceCheck::new("doubled slice through the glued ball: T2 -> S2", 0, 2, 4),
            ];
            schema.slice_checks = branched;
            if n == 2 {
                schema.branch_components = BranchComponents::Determined(6);
                schema.branch_derivation = Some(BranchDerivation::ArcGluing {
                    points_in_disk: 2,
                    copies: 2,
                });
                schema.local_degrees = vec![2; 6];
                // The complement of A x I is (punctured torus in y,t) x S1_x,
                // so the circle factor of the double is x.
                schema.pi1_data = Some(Pi1Data {
                    target_rank: 2,
                    images: images(&[
                        ("x", "1"),
                        ("y1", "1"),
                        ("t1", "a"),
                        ("y2", "1"),
                        ("t2", "b"),
                    ]),
                });
                schema.notes.push(
                    "double of (T2 x S1 - A x I) -> (S2 x S1 - D2 x I) along the boundary sphere"
                        .into(),
                );
            } else {
                schema.unramified_stage = Some(UnramifiedStage {
                    sheets: n - 1,
                    base_free_rank: 2,
                    cover_free_rank: n,
                    base_surface_euler_characteristic: -2,
                    cover_surface_euler_characteristic: Space::surface_euler_characteristic(n),
                });
                schema.notes.push(format!(
                    "fiber product of the genus-2 cover with the {}-sheeted unramified cover \
                     #_{n}(S2xS1) -> #_2(S2xS1); lifting of branch circles not determined",
                    n - 1
                ));
            }
        }
    }
    schema
}

/// `#_n (S2 x S1)` double covered, with branching, by a circle bundle with
/// Euler number `n` over `Sigma_n` (`n >= 1`), or by the pullback of the Hopf
/// fibration along `z -> z^2` for `n = 0`.
pub fn bundle_branched_cover_schema(n: u64) -> BranchedCoverSchema {
    let heisenberg = MonodromyData::new([[1, 1], [0, 1]]);
    let mut schema = BranchedCoverSchema {
        name: format!("bundle_branched_cover({n})"),
        source: Space::CircleBundle {
            base_genus: n,
            euler_number: n as i64,
        },
        target: sum_target(n),
        degree: 2,
        branch_components: BranchComponents::Undetermined,
        branch_derivation: None,
        local_degrees: Vec::new(),
        slice_checks: Vec::new(),
        pi1_data: None,
        unramified_stage: None,
        fiber_sum: None,
        pullback: None,
        monodromy: None,
        notes: Vec::new(),
    };
    match n {
        0 => {
            let pullback = Pullback {
                base_map_degree: 2,
                total_space_degree: 2,
                bundle_euler_number: 1,
                pulled_back_euler_number: 2,
            };
            schema.source = Space::CircleBundle {
                base_genus: 0,
                euler_number: pullback.pulled_back_euler_number,
            };
            schema.pullback = Some(pullback);
            schema.branch_components = BranchComponents::Determined(2);
            schema.branch_derivation = Some(BranchDerivation::BranchPoints { branch_points: 2 });
            schema.local_degrees = vec![2; 2];
            schema.slice_checks = vec![SliceCheck::new("base S2 -> S2, z -> z^2", 2, 2, 2)];
            schema.pi1_data = Some(Pi1Data {
                target_rank: 0,
                images: images(&[("fiber", "1")]),
            });
            schema.notes.push(
                "Hopf fibration S3 -> S2 pulled back along a branched double cover of S2".into(),
            );
        }
        1 => {
            schema.monodromy = Some(heisenberg);
            schema.branch_components = BranchComponents::Determined(3);
            schema.branch_derivation = Some(BranchDerivation::MonodromyOrbits);
            schema.local_degrees = vec![2; 3];
            schema.slice_checks = vec![pillowcase_slice("mapping-torus fiber T2 -> S2")];
            schema.fiber_sum = Some(FiberSum {
                summands: vec![SummandGroup {
                    copies: 1,
                    euler_number: 1,
                    base_genus: 1,
                }],
                total_euler_number: 1,
                total_base_genus: 1,
            });
            schema.pi1_data = Some(Pi1Data {
                target_rank: 1,
                images: images(&[("fiber", "1"), ("y", "1"), ("t", "a")]),
            });
            schema.notes.push(
                "mapping torus of [[1,1],[0,1]] divided by the fiber-preserving involution -id"
                    .into(),
            );
        }
        _ => {
            schema.monodromy = Some(heisenberg);
            schema.slice_checks = vec![pillowcase_slice("summand mapping-torus fiber T2 -> S2")];
            schema.fiber_sum = Some(FiberSum {
                summands: vec![SummandGroup {
                    copies: n,
                    euler_number: 1,
                    base_genus: 1,
                }],
                total_euler_number: n as i64,
                total_base_genus: n,
            });
            if n == 2 {
                schema.pi1_data = Some(Pi1Data {
                    target_rank: 2,
                    images: images(&[
                        ("fiber", "1"),
                        ("y1", "1"),
                        ("t1", "a"),
                        ("y2", "1"),
                        ("t2", "b"),
                    ]),
                });
            }
            schema.notes.push(format!(
                "fiber sum of {n} copies of the Euler-number-1 bundle over T2, branch loci matched \
                 along a fibered neighbourhood; branch component count not determined"
            ));
        }
    }
    schema
}
