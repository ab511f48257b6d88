use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{VerificationReport, WitnessError};
use crate::manifold::{format_rational, SeifertData};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoverDescriptor {
    /// `Sigma_genus x S1`; Euler number zero.
    Product {
        #[serde(serialize_with = "crate::serde_display")]
        genus: BigInt,
    },
    /// Circle bundle over `Sigma_base_genus` with non-zero Euler number.
    CircleBundle {
        #[serde(serialize_with = "crate::serde_display")]
        base_genus: BigInt,
        #[serde(serialize_with = "crate::serde_display")]
        euler_number: BigInt,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionStatus {
    /// The piece is itself the named bundle.
    Explicit,
    /// A cover of this degree exists by orbifold covering theory; it is not
    /// constructed.
    ExistenceBacked,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteCoverWitness {
    pub cover: CoverDescriptor,
    #[serde(serialize_with = "crate::serde_display")]
    pub degree: BigInt,
    pub construction_status: ConstructionStatus,
}

impl FiniteCoverWitness {
    pub fn base_genus(&self) -> &BigInt {
        match &self.cover {
            CoverDescriptor::Product { genus } => genus,
            CoverDescriptor::CircleBundle { base_genus, .. } => base_genus,
        }
    }

    pub fn euler_number(&self) -> BigInt {
        match &self.cover {
            CoverDescriptor::Product { .. } => BigInt::zero(),
            CoverDescriptor::CircleBundle { euler_number, .. } => euler_number.clone(),
        }
    }

    /// Checks the witness against the Seifert piece it covers: the base
    /// Euler characteristic and the Euler number both scale by the degree.
    pub fn verify_against(&self, s: &SeifertData) -> VerificationReport {
        let mut r = VerificationReport::default();
        let degree = BigRational::from_integer(self.degree.clone());
        let chi = s.orbifold_euler_characteristic();
        let e = s.euler_number();
        let surface_chi = BigInt::from(2) - BigInt::from(2) * self.base_genus();
        r.check(
            "cover_degree",
            self.degree >= BigInt::one(),
            format!("degree {}", self.degree),
        );
        r.check(
            "cover_base_euler_multiplicativity",
            BigRational::from_integer(surface_chi.clone()) == &degree * &chi,
            format!(
                "{surface_chi} = {} * {}",
                self.degree,
                format_rational(&chi)
            ),
        );
        let euler = self.euler_number();
        r.check(
            "cover_euler_number",
            BigRational::from_integer(euler.clone()) == &degree * &e,
            format!("{euler} = {} * {}", self.degree, format_rational(&e)),
        );
        let kind_ok = match &self.cover {
            CoverDescriptor::Product { .. } => e.is_zero(),
            CoverDescriptor::CircleBundle { euler_number, .. } => !euler_number.is_zero(),
        };
        r.check(
            "cover_kind",
            kind_ok,
            "product iff the Euler number vanishes",
        );
        r
    }
}

/// Smallest-degree cover of an aspherical Seifert piece by a circle bundle
/// over a closed surface.
///
/// The degree `d` is a multiple of `lcm(alpha_i)`, so every cone point of the
/// base unwraps and `d e` is an integer, and `d chi_orb` must be even so that
/// `2 - 2g' = d chi_orb` has a solution. The pulled-back Euler number is
/// `d e`.
pub fn finite_cover_witness(s: &SeifertData) -> Result<FiniteCoverWitness, WitnessError> {
    let s = s.normalize();
    let chi = s.orbifold_euler_characteristic();
    if chi.is_positive() {
        return Err(WitnessError::NotAspherical {
            piece: s.to_string(),
        });
    }
    let lcm = s.multiplicity_lcm();
    let scaled = (BigRational::from_integer(lcm.clone()) * &chi).to_integer();
    let degree = if scaled.is_even() { lcm } else { lcm * 2 };
    let surface_chi = (BigRational::from_integer(degree.clone()) * &chi).to_integer();
    let genus = (BigInt::from(2) - surface_chi) / 2;
    let euler = (BigRational::from_integer(degree.clone()) * s.euler_number()).to_integer();
    let construction_status = if degree.is_one() {
        ConstructionStatus::Explicit
    } else {
        ConstructionStatus::ExistenceBacked
    };
    let cover = if euler.is_zero() {
        CoverDescriptor::Product { genus }
    } else {
        CoverDescriptor::CircleBundle {
            base_genus: genus,
            euler_number: euler,
        }
    };
    Ok(FiniteCoverWitness {
        cover,
        degree,
        construction_status,
    })
}
