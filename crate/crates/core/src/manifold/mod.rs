//! Symbolic closed oriented 3-manifolds.
//!
//! A [`Manifold`] is a multiset of prime pieces; the empty multiset is the
//! 3-sphere. Seifert fibered pieces are described by unnormalized Seifert
//! invariants over a closed orientable base, and every other piece is either
//! a spherical space form (recorded only by the order of its fundamental
//! group), `S2xS1`, or an opaque aspherical marker.
//!
//! All invariants are exact rationals.

mod parse;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use parse::{parse_manifold, ParseError};

/// Exact rational used for every invariant.
pub type Rational = BigRational;

pub(crate) fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a rational as `p/q`, including integers (`3/1`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// An exceptional fiber with invariants `(alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fiber {
    pub alpha: i64,
    pub beta: i64,
}

impl Fiber {
    pub fn new(alpha: i64, beta: i64) -> Self {
        Fiber { alpha, beta }
    }
}

/// Seifert invariants of an oriented Seifert fibered space over a closed
/// orientable surface of the given genus.
///
/// `obstruction` is the integer `b` carried by the section; `fibers` lists
/// the exceptional fibers. The raw form may carry any `beta`; see
/// [`SeifertData::normalize`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SeifertData {
    pub genus: u32,
    pub obstruction: i64,
    pub fibers: Vec<Fiber>,
}

impl SeifertData {
    pub fn new(genus: u32, obstruction: i64, fibers: impl IntoIterator<Item = (i64, i64)>) -> Self {
        SeifertData {
            genus,
            obstruction,
            fibers: fibers.into_iter().map(|(a, b)| Fiber::new(a, b)).collect(),
        }
    }

    /// Reduces every `beta` into `[0, alpha)`, folding the quotient into the
    /// obstruction, drops pairs whose remainder is zero, and sorts the fibers.
    ///
    /// The Euler number and orbifold Euler characteristic are unchanged.
    pub fn normalize(&self) -> SeifertData {
        let mut obstruction = self.obstruction;
        let mut fibers = Vec::with_capacity(self.fibers.len());
        for f in &self.fibers {
            let (q, r) = f.beta.div_mod_floor(&f.alpha);
            obstruction += q;
            if r != 0 {
                fibers.push(Fiber::new(f.alpha, r));
            }
        }
        fibers.sort();
        SeifertData {
            genus: self.genus,
            obstruction,
            fibers,
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.fibers.windows(2).all(|w| w[0] <= w[1])
            && self.fibers.iter().all(|f| {
                f.alpha >= 2 && 0 < f.beta && f.beta < f.alpha && f.alpha.gcd(&f.beta) == 1
            })
    }

    /// `e = -(b + sum beta_i / alpha_i)`.
    pub fn euler_number(&self) -> Rational {
        let sum = self.fibers.iter().fold(
            Rational::from_integer(BigInt::from(self.obstruction)),
            |acc, f| acc + ratio(f.beta, f.alpha),
        );
        -sum
    }

    /// `chi_orb = 2 - 2g - sum (1 - 1/alpha_i)`.
    pub fn orbifold_euler_characteristic(&self) -> Rational {
        let base = Rational::from_integer(BigInt::from(2 - 2 * i64::from(self.genus)));
        self.fibers
            .iter()
            .fold(base, |acc, f| acc - (Rational::one() - ratio(1, f.alpha)))
    }

    /// Least common multiple of the fiber multiplicities (1 without fibers).
    pub fn multiplicity_lcm(&self) -> BigInt {
        self.fibers
            .iter()
            .fold(BigInt::one(), |acc, f| acc.lcm(&BigInt::from(f.alpha)))
    }
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SFS(g={}; b={}", self.genus, self.obstruction)?;
        if !self.fibers.is_empty() {
            f.write_str("; ")?;
            for (i, fib) in self.fibers.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "({},{})", fib.alpha, fib.beta)?;
            }
        }
        f.write_str(")")
    }
}

/// A prime summand.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimePiece {
    SeifertFibered(SeifertData),
    /// Spherical space form `S3/Q`, recorded by `|Q| >= 2`.
    Spherical(u64),
    S2xS1,
    Hyperbolic,
    Sol,
    /// Irreducible, aspherical, neither Seifert fibered nor hyperbolic.
    OtherAspherical,
}

impl PrimePiece {
    pub fn is_aspherical(&self) -> bool {
        matches!(
            self,
            PrimePiece::SeifertFibered(_)
                | PrimePiece::Hyperbolic
                | PrimePiece::Sol
                | PrimePiece::OtherAspherical
        )
    }

    pub fn as_seifert(&self) -> Option<&SeifertData> {
        match self {
            PrimePiece::SeifertFibered(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for PrimePiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimePiece::SeifertFibered(s) => s.fmt(f),
            PrimePiece::Spherical(q) => write!(f, "Spherical({q})"),
            PrimePiece::S2xS1 => f.write_str("S2xS1"),
            PrimePiece::Hyperbolic => f.write_str("Hyperbolic"),
            PrimePiece::Sol => f.write_str("Sol"),
            PrimePiece::OtherAspherical => f.write_str("OtherAspherical"),
        }
    }
}

/// A connected sum of prime pieces. Piece order is irrelevant.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Manifold {
    pub pieces: Vec<PrimePiece>,
}

impl Manifold {
    pub fn sphere() -> Self {
        Manifold::default()
    }

    pub fn new(pieces: impl IntoIterator<Item = PrimePiece>) -> Self {
        Manifold {
            pieces: pieces.into_iter().collect(),
        }
    }

    /// `#_n (S2 x S1)`; `n = 0` is the 3-sphere.
    pub fn sum_of_s2xs1(n: usize) -> Self {
        Manifold::new(std::iter::repeat_n(PrimePiece::S2xS1, n))
    }

    /// Canonical form: Seifert pieces normalized, `S2 x S1` written as a
    /// Seifert space rewritten to `S2xS1`, pieces sorted.
    pub fn normalize(&self) -> Result<Manifold, ModelError> {
        let (ok, mut errors): (Vec<_>, Vec<_>) = self
            .pieces
            .iter()
            .map(normalize_piece)
            .partition(Result::is_ok);
        // report the smallest offender so the error does not depend on order
        errors.sort_by_key(|e| e.clone().unwrap_err().to_string());
        if let Some(Err(e)) = errors.into_iter().next() {
            return Err(e);
        }
        let mut pieces: Vec<PrimePiece> = ok.into_iter().map(Result::unwrap).collect();
        pieces.sort();
        Ok(Manifold { pieces })
    }

    /// True iff some prime summand is aspherical.
    pub fn is_rationally_essential(&self) -> bool {
        self.pieces.iter().any(PrimePiece::is_aspherical)
    }

    /// The single prime piece, if the manifold is prime and not `S3`.
    pub fn single_piece(&self) -> Option<&PrimePiece> {
        match self.pieces.as_slice() {
            [p] => Some(p),
            _ => None,
        }
    }

    /// True for `S3` and for a single spherical space form.
    pub fn has_finite_fundamental_group(&self) -> bool {
        matches!(self.pieces.as_slice(), [] | [PrimePiece::Spherical(_)])
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return f.write_str("S3");
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str(" # ")?;
            }
            p.fmt(f)?;
        }
        Ok(())
    }
}

impl FromStr for Manifold {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_manifold(s)
    }
}

impl Serialize for Manifold {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Manifold {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_manifold(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{piece} is a spherical space form: specify as Spherical(order)")]
    SphericalSpaceForm { piece: String },
}

fn normalize_piece(piece: &PrimePiece) -> Result<PrimePiece, ModelError> {
    let PrimePiece::SeifertFibered(raw) = piece else {
        return Ok(piece.clone());
    };
    let s = raw.normalize();
    if s.orbifold_euler_characteristic().is_positive() {
        let e = s.euler_number();
        return if e.is_zero() && s.fibers.is_empty() {
            Ok(PrimePiece::S2xS1)
        } else {
            Err(ModelError::SphericalSpaceForm {
                piece: s.to_string(),
            })
        };
    }
    Ok(PrimePiece::SeifertFibered(s))
}

/// Thurston geometry of a prime piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Geometry {
    E3,
    H2xR,
    S2xR,
    S3geom,
    Nil,
    SL2Rtilde,
    H3,
    SolGeom,
    NonGeometric,
}

impl Geometry {
    pub fn symbol(self) -> &'static str {
        match self {
            Geometry::E3 => "ℝ³",
            Geometry::H2xR => "ℍ²×ℝ",
            Geometry::S2xR => "S²×ℝ",
            Geometry::S3geom => "S³",
            Geometry::Nil => "Nil³",
            Geometry::SL2Rtilde => "SL̃₂(ℝ)",
            Geometry::H3 => "ℍ³",
            Geometry::SolGeom => "Sol³",
            Geometry::NonGeometric => "none",
        }
    }

    /// Geometries whose closed manifolds are finitely covered by `F x S1`.
    pub fn is_product_type(self) -> bool {
        matches!(self, Geometry::E3 | Geometry::H2xR)
    }

    /// Geometries whose closed manifolds are finitely covered by non-trivial
    /// circle bundles over aspherical surfaces.
    pub fn is_twisted_bundle_type(self) -> bool {
        matches!(self, Geometry::Nil | Geometry::SL2Rtilde)
    }

    /// Geometries of prime pieces with non-aspherical universal cover.
    pub fn is_inessential_type(self) -> bool {
        matches!(self, Geometry::S2xR | Geometry::S3geom)
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Geometry::E3 => "E3",
            Geometry::H2xR => "H2xR",
            Geometry::S2xR => "S2xR",
            Geometry::S3geom => "S3geom",
            Geometry::Nil => "Nil",
            Geometry::SL2Rtilde => "SL2Rtilde",
            Geometry::H3 => "H3",
            Geometry::SolGeom => "SolGeom",
            Geometry::NonGeometric => "NonGeometric",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{piece} has positive orbifold Euler characteristic; normalize the manifold first")]
pub struct GeometryError {
    pub piece: String,
}

/// Dispatches a piece to its geometry. Seifert pieces go by the sign of the
/// orbifold Euler characteristic and the vanishing of the Euler number.
pub fn classify_geometry(piece: &PrimePiece) -> Result<Geometry, GeometryError> {
    Ok(match piece {
        PrimePiece::SeifertFibered(raw) => {
            let s = raw.normalize();
            let chi = s.orbifold_euler_characteristic();
            let flat_base = chi.is_zero();
            if chi.is_positive() {
                return Err(GeometryError {
                    piece: s.to_string(),
                });
            }
            match (flat_base, s.euler_number().is_zero()) {
                (true, true) => Geometry::E3,
                (false, true) => Geometry::H2xR,
                (true, false) => Geometry::Nil,
                (false, false) => Geometry::SL2Rtilde,
            }
        }
        PrimePiece::Spherical(_) => Geometry::S3geom,
        PrimePiece::S2xS1 => Geometry::S2xR,
        PrimePiece::Hyperbolic => Geometry::H3,
        PrimePiece::Sol => Geometry::SolGeom,
        PrimePiece::OtherAspherical => Geometry::NonGeometric,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sfs(g: u32, b: i64, fibers: &[(i64, i64)]) -> SeifertData {
        SeifertData::new(g, b, fibers.iter().copied())
    }

    // Independent oracle: e and chi computed with a common denominator in i128.
    fn euler_oracle(s: &SeifertData) -> (i128, i128) {
        let den: i128 = s.fibers.iter().map(|f| f.alpha as i128).product();
        let mut num = s.obstruction as i128 * den;
        for f in &s.fibers {
            num += f.beta as i128 * (den / f.alpha as i128);
        }
        (-num, den)
    }

    fn same(r: &Rational, (n, d): (i128, i128)) -> bool {
        *r == Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(sfs(0, 1, &[(2, 5)]).normalize(), sfs(0, 3, &[(2, 1)]));
        assert_eq!(sfs(1, 0, &[]).normalize(), sfs(1, 0, &[]));
        assert_eq!(sfs(2, -1, &[(3, 4)]).normalize(), sfs(2, 0, &[(3, 1)]));
        // negative beta folds downward
        assert_eq!(sfs(0, 0, &[(3, -1)]).normalize(), sfs(0, -1, &[(3, 2)]));
    }

    #[test]
    fn normalization_preserves_euler_by_oracle() {
        for raw in [sfs(0, 1, &[(2, 5)]), sfs(2, -1, &[(3, 4)])] {
            let oracle = euler_oracle(&raw);
            assert!(same(&raw.euler_number(), oracle));
            assert!(same(&raw.normalize().euler_number(), oracle));
        }
        // -(3 + 1/2) = -7/2
        assert_eq!(sfs(0, 3, &[(2, 1)]).euler_number(), ratio(-7, 2));
    }

    #[test]
    fn euler_number_examples() {
        assert_eq!(sfs(1, 0, &[]).euler_number(), ratio(0, 1));
        assert_eq!(sfs(1, -1, &[]).euler_number(), ratio(1, 1));
        let s = sfs(0, 1, &[(2, 1), (3, 1), (5, 1)]);
        assert!(same(&s.euler_number(), euler_oracle(&s)));
        assert_eq!(s.euler_number(), ratio(-61, 30));
    }

    #[test]
    fn orbifold_characteristic_examples() {
        assert_eq!(sfs(1, 0, &[]).orbifold_euler_characteristic(), ratio(0, 1));
        assert_eq!(sfs(2, 0, &[]).orbifold_euler_characteristic(), ratio(-2, 1));
        // 2 - (21 + 28 + 36)/42
        let s = sfs(0, 5, &[(2, 1), (3, 1), (7, 1)]);
        assert_eq!(s.orbifold_euler_characteristic(), ratio(84 - 85, 42));
    }

    #[test]
    fn geometry_table() {
        let g = |s: SeifertData| classify_geometry(&PrimePiece::SeifertFibered(s)).unwrap();
        assert_eq!(g(sfs(1, 0, &[])), Geometry::E3);
        assert_eq!(g(sfs(1, -1, &[])), Geometry::Nil);
        assert_eq!(g(sfs(2, 1, &[])), Geometry::SL2Rtilde);
        assert_eq!(g(sfs(2, 0, &[])), Geometry::H2xR);
        assert_eq!(
            g(sfs(0, -2, &[(2, 1), (2, 1), (2, 1), (2, 1)])),
            Geometry::E3
        );
        assert_eq!(
            classify_geometry(&PrimePiece::S2xS1).unwrap(),
            Geometry::S2xR
        );
        assert_eq!(
            classify_geometry(&PrimePiece::Spherical(5)).unwrap(),
            Geometry::S3geom
        );
        assert_eq!(
            classify_geometry(&PrimePiece::Hyperbolic).unwrap(),
            Geometry::H3
        );
        assert_eq!(
            classify_geometry(&PrimePiece::Sol).unwrap(),
            Geometry::SolGeom
        );
        assert_eq!(
            classify_geometry(&PrimePiece::OtherAspherical).unwrap(),
            Geometry::NonGeometric
        );
        assert!(classify_geometry(&PrimePiece::SeifertFibered(sfs(0, 1, &[]))).is_err());
    }

    #[test]
    fn manifold_normalization_rules() {
        let m = Manifold::new([PrimePiece::SeifertFibered(sfs(0, 0, &[]))]);
        assert_eq!(m.normalize().unwrap(), Manifold::new([PrimePiece::S2xS1]));

        let hopf = Manifold::new([PrimePiece::SeifertFibered(sfs(0, 1, &[]))]);
        let err = hopf.normalize().unwrap_err();
        assert!(err.to_string().contains("Spherical(order)"));

        // e = 0, chi > 0, but with exceptional fibers
        let lens = Manifold::new([PrimePiece::SeifertFibered(sfs(0, -1, &[(3, 1), (3, 2)]))]);
        assert!(lens.normalize().is_err());

        let m = Manifold::new([PrimePiece::Hyperbolic, PrimePiece::Spherical(8)]);
        let n = m.normalize().unwrap();
        assert_eq!(n.pieces.len(), 2);
        assert!(n.pieces.contains(&PrimePiece::Hyperbolic));
        assert!(n.pieces.contains(&PrimePiece::Spherical(8)));
        assert_eq!(n.normalize().unwrap(), n);
    }

    #[test]
    fn rational_essentialness() {
        assert!(!Manifold::sphere().is_rationally_essential());
        assert!(
            !Manifold::new([PrimePiece::S2xS1, PrimePiece::Spherical(120)])
                .is_rationally_essential()
        );
        assert!(Manifold::new([
            PrimePiece::SeifertFibered(sfs(2, 0, &[])),
            PrimePiece::Spherical(2)
        ])
        .is_rationally_essential());
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&ratio(-61, 30)), "-61/30");
        assert_eq!(format_rational(&ratio(4, 2)), "2/1");
    }
}
