//! Decides which closed oriented 3-manifolds are dominated by products
//! `F x S1`, by non-trivial circle bundles, or by any circle bundle, and
//! which of their fundamental groups are presentable by products.
//!
//! Every positive answer carries a certificate: a finite cover by a product
//! or circle bundle, or a finite cover by `#_n (S2 x S1)` together with a
//! verifiable branched double cover of it.

pub mod decision;
pub mod group;
pub mod manifold;
pub mod witness;

pub(crate) fn serde_display<T: std::fmt::Display, S: serde::Serializer>(
    value: &T,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}
