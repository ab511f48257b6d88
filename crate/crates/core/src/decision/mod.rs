//! The classification queries.
//!
//! Each domination query is answered along three independent routes that
//! must agree:
//!
//! * topological: rational essentialness via an aspherical summand, then
//!   primality and the vanishing of the rational Euler number of the single
//!   Seifert piece;
//! * geometric: the Thurston geometries of the prime pieces;
//! * algebraic: the virtual structure of `pi_1` (virtually free, virtually
//!   `pi_1(F) x Z`, or virtually a central extension with non-zero Euler
//!   class), read off from an explicit finite-cover computation.
//!
//! The public query functions follow the topological route and attach
//! witnesses. [`cross_check`] runs all three.

mod sweep;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::group::{free_cover_rank, FreeCover, FreeProductData, GroupError};
use crate::manifold::{classify_geometry, Geometry, Manifold, PrimePiece, SeifertData};
use crate::witness::{
    bundle_branched_cover_schema, finite_cover_witness, product_branched_cover_schema,
    BranchedCoverSchema, FiniteCoverWitness,
};

pub use sweep::{exhaustive_sweep, sweep_family, SweepSummary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecisionError {
    #[error("{manifold} has finite fundamental group; presentability by products concerns infinite groups only")]
    FiniteFundamentalGroup { manifold: String },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

impl From<GroupError> for DecisionError {
    fn from(e: GroupError) -> Self {
        DecisionError::Inconsistent(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Query {
    Product,
    NontrivialBundle,
    AnyBundle,
    Presentable,
}

impl Query {
    pub fn id(self) -> &'static str {
        match self {
            Query::Product => "product",
            Query::NontrivialBundle => "ntbundle",
            Query::AnyBundle => "anybundle",
            Query::Presentable => "presentable",
        }
    }

    pub fn from_id(id: &str) -> Option<Query> {
        [
            Query::Product,
            Query::NontrivialBundle,
            Query::AnyBundle,
            Query::Presentable,
        ]
        .into_iter()
        .find(|q| q.id() == id)
    }
}

/// The rule that settled a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    /// No aspherical summand: finitely covered by `#_n (S2 x S1)`, which is
    /// branched double covered by the required domain.
    InessentialFreeCover,
    /// Single piece with geometry `R3` or `H2xR`.
    ProductGeometry,
    /// Single piece with geometry `Nil` or `SL2R~`.
    TwistedBundleGeometry,
    /// An aspherical summand in a non-trivial connected sum.
    FreeIndecomposability,
    /// Aspherical Seifert piece with non-zero Euler number.
    NonzeroEulerNumber,
    /// Aspherical Seifert piece with zero Euler number.
    ZeroEulerNumber,
    /// Prime aspherical piece that is not Seifert fibered.
    NotSeifertFibered,
    /// Rationally essential and Seifert fibered.
    SeifertFibered,
    /// Seifert piece: the fiber generates an infinite central subgroup.
    InfiniteCenter,
    /// `S2 x S1`: the group is infinite cyclic.
    VirtuallyCyclic,
    /// `RP3 # RP3`: `Z2 * Z2` is virtually `Z`.
    DihedralFreeProduct,
    /// Free products other than `Z2 * Z2`, and aspherical non-Seifert pieces.
    NotPresentable,
}

impl Clause {
    pub fn id(self) -> &'static str {
        match self {
            Clause::InessentialFreeCover => "inessential-free-cover",
            Clause::ProductGeometry => "product-geometry",
            Clause::TwistedBundleGeometry => "twisted-bundle-geometry",
            Clause::FreeIndecomposability => "free-indecomposability",
            Clause::NonzeroEulerNumber => "nonzero-euler-number",
            Clause::ZeroEulerNumber => "zero-euler-number",
            Clause::NotSeifertFibered => "not-seifert-fibered",
            Clause::SeifertFibered => "seifert-fibered",
            Clause::InfiniteCenter => "infinite-center",
            Clause::VirtuallyCyclic => "virtually-cyclic",
            Clause::DihedralFreeProduct => "dihedral-free-product",
            Clause::NotPresentable => "not-presentable",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Certificate attached to a positive domination verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    FiniteCover(FiniteCoverWitness),
    /// A finite cover `#_rank (S2 x S1) -> N` of the given degree, followed by
    /// a branched double cover of `#_rank (S2 x S1)`. The schema is omitted
    /// only when the rank does not fit a machine integer.
    BranchedCover {
        free_cover: FreeCover,
        schema: Option<Box<BranchedCoverSchema>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub verdict: bool,
    pub clause: Clause,
    pub witness: Option<Witness>,
    pub explanation: String,
}

impl Decision {
    fn no(clause: Clause, explanation: impl Into<String>) -> Self {
        Decision {
            verdict: false,
            clause,
            witness: None,
            explanation: explanation.into(),
        }
    }

    fn yes(clause: Clause, witness: Option<Witness>, explanation: impl Into<String>) -> Self {
        Decision {
            verdict: true,
            clause,
            witness,
            explanation: explanation.into(),
        }
    }
}

/// Which branched cover backs an inessential target.
#[derive(Debug, Clone, Copy)]
enum Domain {
    Product,
    Bundle,
}

fn inessential_witness(fp: &FreeProductData, domain: Domain) -> Witness {
    let free_cover =
        free_cover_rank(fp).expect("free cover rank is exact for any free product data");
    let schema = free_cover
        .rank
        .to_u64()
        .filter(|&n| n <= i64::MAX as u64)
        .map(|n| {
            Box::new(match domain {
                Domain::Product => product_branched_cover_schema(n),
                Domain::Bundle => bundle_branched_cover_schema(n),
            })
        });
    Witness::BranchedCover { free_cover, schema }
}

fn inessential_decision(m: &Manifold, domain: Domain) -> Option<Decision> {
    let fp = FreeProductData::from_manifold(m)?;
    let witness = inessential_witness(&fp, domain);
    let Witness::BranchedCover { free_cover, .. } = &witness else {
        unreachable!()
    };
    let source = match domain {
        Domain::Product => format!("Sigma_{} x S1", free_cover.rank),
        Domain::Bundle => format!(
            "a circle bundle with Euler number {} over Sigma_{}",
            free_cover.rank, free_cover.rank
        ),
    };
    let explanation = format!(
        "no aspherical summand; #_{}(S2xS1) covers {m} with degree {}, and {source} branched double covers it",
        free_cover.rank, free_cover.degree
    );
    Some(Decision::yes(
        Clause::InessentialFreeCover,
        Some(witness),
        explanation,
    ))
}

fn geometry_of(s: &SeifertData) -> Geometry {
    classify_geometry(&PrimePiece::SeifertFibered(s.clone()))
        .expect("normalized Seifert pieces have non-positive orbifold Euler characteristic")
}

/// Blocks essential targets that are not a single Seifert piece.
fn essential_blocker(m: &Manifold) -> Result<&SeifertData, Box<Decision>> {
    match m.single_piece() {
        Some(PrimePiece::SeifertFibered(s)) => Ok(s),
        Some(piece) => Err(Box::new(Decision::no(
            Clause::NotSeifertFibered,
            format!(
                "{piece} is aspherical but not Seifert fibered: the image of a central circle would \
                 have to be a non-trivial central element"
            ),
        ))),
        None => Err(Box::new(Decision::no(
            Clause::FreeIndecomposability,
            format!(
                "{m} has an aspherical summand in a non-trivial connected sum; a dominating map would \
                 make pi_1 freely indecomposable"
            ),
        ))),
    }
}

/// Dominated by a product `Sigma x S1`.
pub fn dominated_by_product(m: &Manifold) -> Decision {
    if let Some(d) = inessential_decision(m, Domain::Product) {
        return d;
    }
    let s = match essential_blocker(m) {
        Ok(s) => s,
        Err(d) => return *d,
    };
    let e = s.euler_number();
    if !e.is_zero() {
        return Decision::no(
            Clause::NonzeroEulerNumber,
            format!(
                "{s} has Euler number {}: maps from products to it have degree zero",
                crate::manifold::format_rational(&e)
            ),
        );
    }
    let geometry = geometry_of(s);
    let witness = finite_cover_witness(s).expect("aspherical Seifert piece");
    let explanation = format!(
        "geometry {}; finitely covered by Sigma_{} x S1 (degree {}, {})",
        geometry.symbol(),
        witness.base_genus(),
        witness.degree,
        status_text(&witness)
    );
    Decision::yes(
        Clause::ProductGeometry,
        Some(Witness::FiniteCover(witness)),
        explanation,
    )
}

/// Dominated by a non-trivial circle bundle over a surface.
pub fn dominated_by_nontrivial_circle_bundle(m: &Manifold) -> Decision {
    if let Some(d) = inessential_decision(m, Domain::Bundle) {
        return d;
    }
    let s = match essential_blocker(m) {
        Ok(s) => s,
        Err(d) => return *d,
    };
    let e = s.euler_number();
    if e.is_zero() {
        return Decision::no(
            Clause::ZeroEulerNumber,
            format!(
                "{s} has Euler number 0: a dominating non-trivial bundle would force its Euler class \
                 to be non-zero"
            ),
        );
    }
    let geometry = geometry_of(s);
    let witness = finite_cover_witness(s).expect("aspherical Seifert piece");
    let explanation = format!(
        "geometry {}; finitely covered by a circle bundle with Euler number {} over Sigma_{} (degree {}, {})",
        geometry.symbol(),
        witness.euler_number(),
        witness.base_genus(),
        witness.degree,
        status_text(&witness)
    );
    Decision::yes(
        Clause::TwistedBundleGeometry,
        Some(Witness::FiniteCover(witness)),
        explanation,
    )
}

fn status_text(w: &FiniteCoverWitness) -> &'static str {
    match w.construction_status {
        crate::witness::ConstructionStatus::Explicit => "explicit",
        crate::witness::ConstructionStatus::ExistenceBacked => "existence-backed, not constructed",
    }
}

/// Dominated by some circle bundle, trivial or not.
pub fn dominated_by_any_circle_bundle(m: &Manifold) -> Decision {
    if let Some(mut d) = inessential_decision(m, Domain::Product) {
        d.explanation
            .push_str("; the circle-bundle certificate exists as well");
        return d;
    }
    match essential_blocker(m) {
        Ok(s) => {
            let product = dominated_by_product(m);
            let d = if product.verdict {
                product
            } else {
                dominated_by_nontrivial_circle_bundle(m)
            };
            Decision {
                clause: Clause::SeifertFibered,
                explanation: format!("{s} is Seifert fibered; {}", d.explanation),
                ..d
            }
        }
        Err(d) => *d,
    }
}

/// Whether `pi_1` is presentable by a product. Defined for infinite groups
/// only.
pub fn presentable_by_products(m: &Manifold) -> Result<Decision, DecisionError> {
    if m.has_finite_fundamental_group() {
        return Err(DecisionError::FiniteFundamentalGroup {
            manifold: m.to_string(),
        });
    }
    Ok(match m.pieces.as_slice() {
        [PrimePiece::SeifertFibered(s)] => Decision::yes(
            Clause::InfiniteCenter,
            None,
            format!("{s} is Seifert fibered; the regular fiber generates an infinite center"),
        ),
        [PrimePiece::S2xS1] => Decision::yes(
            Clause::VirtuallyCyclic,
            None,
            "pi_1(S2xS1) = Z has infinite center",
        ),
        [PrimePiece::Spherical(2), PrimePiece::Spherical(2)] => Decision::yes(
            Clause::DihedralFreeProduct,
            None,
            "pi_1 = Z2 * Z2 is virtually Z",
        ),
        [piece] => Decision::no(
            Clause::NotPresentable,
            format!("{piece} is not Seifert fibered; no finite-index subgroup has infinite center"),
        ),
        _ => Decision::no(
            Clause::NotPresentable,
            format!("pi_1({m}) is a non-trivial free product other than Z2 * Z2"),
        ),
    })
}

/// Dispatches a query by identifier.
pub fn decide(query: Query, m: &Manifold) -> Result<Decision, DecisionError> {
    Ok(match query {
        Query::Product => dominated_by_product(m),
        Query::NontrivialBundle => dominated_by_nontrivial_circle_bundle(m),
        Query::AnyBundle => dominated_by_any_circle_bundle(m),
        Query::Presentable => return presentable_by_products(m),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralExtensionData {
    #[serde(serialize_with = "crate::serde_display")]
    pub base_genus: BigInt,
    #[serde(serialize_with = "crate::serde_display")]
    pub euler_class: BigInt,
}

/// Virtual structure of the fundamental group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraicType {
    /// Virtually `pi_1(Sigma_genus) x Z`.
    VirtuallyProductFxZ {
        #[serde(serialize_with = "crate::serde_display")]
        genus: BigInt,
    },
    /// Virtually free of the given rank.
    VirtuallyFree {
        #[serde(serialize_with = "crate::serde_display")]
        rank: BigInt,
    },
    /// Virtually a central extension of a surface group by `Z` with non-zero
    /// Euler class.
    CentralExtension(CentralExtensionData),
    None,
}

pub fn algebraic_characterization(m: &Manifold) -> Result<AlgebraicType, DecisionError> {
    if let Some(fp) = FreeProductData::from_manifold(m) {
        return Ok(AlgebraicType::VirtuallyFree {
            rank: free_cover_rank(&fp)?.rank,
        });
    }
    let Some(PrimePiece::SeifertFibered(s)) = m.single_piece() else {
        return Ok(AlgebraicType::None);
    };
    let w = finite_cover_witness(s).map_err(|e| DecisionError::Inconsistent(e.to_string()))?;
    let euler_class = w.euler_number();
    let base_genus = w.base_genus().clone();
    Ok(if euler_class.is_zero() {
        AlgebraicType::VirtuallyProductFxZ { genus: base_genus }
    } else {
        AlgebraicType::CentralExtension(CentralExtensionData {
            base_genus,
            euler_class,
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathVerdicts {
    pub topological: bool,
    pub geometric: bool,
    pub algebraic: bool,
}

impl PathVerdicts {
    pub fn agree(&self) -> bool {
        self.topological == self.geometric && self.geometric == self.algebraic
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub manifold: Manifold,
    pub product: PathVerdicts,
    pub bundle: PathVerdicts,
    pub geometries: Vec<Geometry>,
    pub algebraic: Option<AlgebraicType>,
    pub trace: Vec<String>,
}

impl ConsistencyReport {
    pub fn consistent(&self) -> bool {
        self.product.agree() && self.bundle.agree() && self.algebraic.is_some()
    }
}

fn topological_paths(m: &Manifold) -> (bool, bool, String) {
    if !m.is_rationally_essential() {
        return (true, true, "topological: no aspherical summand".into());
    }
    match m.single_piece() {
        Some(PrimePiece::SeifertFibered(s)) => {
            let e = s.euler_number();
            let trivial = e.is_zero();
            (
                trivial,
                !trivial,
                format!(
                    "topological: prime Seifert piece with e = {}",
                    crate::manifold::format_rational(&e)
                ),
            )
        }
        Some(_) => (
            false,
            false,
            "topological: prime, aspherical, not Seifert fibered".into(),
        ),
        None => (false, false, "topological: essential non-prime sum".into()),
    }
}

fn geometric_paths(geometries: &[Geometry]) -> (bool, bool, String) {
    let inessential = geometries.iter().all(|g| g.is_inessential_type());
    let (product, bundle) = match geometries {
        [g] => (g.is_product_type(), g.is_twisted_bundle_type()),
        _ => (false, false),
    };
    (
        inessential || product,
        inessential || bundle,
        format!(
            "geometric: [{}]",
            geometries
                .iter()
                .map(Geometry::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        ),
    )
}

/// Evaluates both domination queries along all three routes.
pub fn cross_check(m: &Manifold) -> ConsistencyReport {
    let mut trace = Vec::new();
    let (topo_product, topo_bundle, t) = topological_paths(m);
    trace.push(t);

    let geometries: Result<Vec<Geometry>, _> = m.pieces.iter().map(classify_geometry).collect();
    let (geo_product, geo_bundle, geometries) = match geometries {
        Ok(gs) => {
            let (p, b, t) = geometric_paths(&gs);
            trace.push(t);
            (p, b, gs)
        }
        Err(e) => {
            trace.push(format!("geometric: {e}"));
            (!topo_product, !topo_bundle, Vec::new())
        }
    };

    let algebraic = match algebraic_characterization(m) {
        Ok(a) => {
            trace.push(format!("algebraic: {a:?}"));
            Some(a)
        }
        Err(e) => {
            trace.push(format!("algebraic: {e}"));
            None
        }
    };
    let (alg_product, alg_bundle) = match &algebraic {
        Some(AlgebraicType::VirtuallyFree { .. }) => (true, true),
        Some(AlgebraicType::VirtuallyProductFxZ { .. }) => (true, false),
        Some(AlgebraicType::CentralExtension(_)) => (false, true),
        Some(AlgebraicType::None) => (false, false),
        None => (!topo_product, !topo_bundle),
    };

    ConsistencyReport {
        manifold: m.clone(),
        product: PathVerdicts {
            topological: topo_product,
            geometric: geo_product,
            algebraic: alg_product,
        },
        bundle: PathVerdicts {
            topological: topo_bundle,
            geometric: geo_bundle,
            algebraic: alg_bundle,
        },
        geometries,
        algebraic,
        trace,
    }
}
