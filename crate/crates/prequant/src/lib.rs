//! Prequantization and equivariant prequantization on model surfaces.
//!
//! Given a closed invariant 2-form on a model surface (the round sphere or
//! the flat 2-torus), a compact connected symmetry group from a closed
//! catalog, and a moment map, this crate decides:
//!
//! - whether the form is prequantizable (integer fluxes),
//! - whether the pair (form, moment map) is equivariantly prequantizable
//!   for a given prequantization connection,
//! - whether some moment map makes the form equivariantly prequantizable,
//!
//! and when an obstruction is nonzero it solves for the correcting data:
//! a moment shift by a bracket-vanishing functional, a flat twist of the
//! connection over the surface's first homology, or a tensor power of the
//! bundle.
//!
//! The obstruction is a homomorphism on `ker exp` of the group, computed
//! numerically by three interchangeable routes: evaluation of the moment map
//! at action zeros, at symplectic extrema, or through the holonomy of group
//! orbits. Everything is deterministic for a fixed seed.
//!
//! ```
//! use prequant::scenario::Scenario;
//! use prequant::verdict;
//!
//! // the unit-flux monopole sphere: prequantizable, but the rotation action
//! // does not lift at this flux
//! let sc = Scenario::sphere_so3(1, 128).unwrap();
//! let v = verdict::check_equivariant_fixed_mu(&sc).unwrap();
//! assert!(v.prequantizable && !v.equivariant_fixed_mu);
//! ```

pub mod cli;
pub mod error;
pub mod geometry;
pub mod holonomy;
pub mod lie;
pub mod modone;
pub mod obstruction;
pub mod scenario;
pub mod verdict;

pub use error::{Error, Result};
pub use modone::ModOne;

/// Deterministic pairwise sum; fixed reduction order keeps grid sweeps
/// bit-stable across runs.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => {
            let m = n / 2;
            pairwise_sum(&xs[..m]) + pairwise_sum(&xs[m..])
        }
    }
}
