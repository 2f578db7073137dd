//! Model surfaces, invariant 2-forms, group actions, and moment maps,
//! together with the numerical primitives that verify and search them.
//!
//! The catalog has two surfaces:
//!
//! - the unit sphere, with points kept in the embedded picture (unit vectors
//!   in 3-space) so that the poles are ordinary points, and with the chart
//!   `(θ, φ)` used only for grids;
//! - the flat 2-torus with angle coordinates `(α, β)`. Torus coordinates are
//!   carried unwrapped along curves; periodic evaluators wrap internally.

mod action;
mod checks;
mod forms;
mod moment;
mod quadrature;
mod search;

pub use action::Action;
pub use checks::{check_equivariance, check_moment_compatibility, CompatReport, EquivarianceReport};
pub use forms::TwoForm;
pub use moment::MomentMap;
pub use quadrature::{integrate_two_form, is_integral, IntegralityReport};
pub use search::{extremum_of_moment, find_action_zeros, Extremum, ZeroSearchReport};

use crate::error::{Error, Result};
use nalgebra::{Vector2, Vector3};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

/// Which model surface a scenario lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Sphere2,
    Torus2,
}

/// A model surface together with its grid resolution (points per axis used
/// for quadrature and search grids).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Surface {
    pub kind: SurfaceKind,
    pub grid: usize,
}

impl Surface {
    pub fn sphere(grid: usize) -> Self {
        Surface { kind: SurfaceKind::Sphere2, grid }
    }

    pub fn torus(grid: usize) -> Self {
        Surface { kind: SurfaceKind::Torus2, grid }
    }

    /// Rank of the first homology: 0 for the sphere, 2 for the torus.
    pub fn h1_rank(&self) -> usize {
        match self.kind {
            SurfaceKind::Sphere2 => 0,
            SurfaceKind::Torus2 => 2,
        }
    }

    /// Number of generators of the second homology; each model surface has
    /// exactly one, the fundamental class.
    pub fn h2_rank(&self) -> usize {
        1
    }

    pub fn parse(s: &str, grid: usize) -> Result<Self> {
        match s {
            "sphere2" => Ok(Surface::sphere(grid)),
            "torus2" => Ok(Surface::torus(grid)),
            other => Err(Error::Parse(format!("unknown manifold {other:?}"))),
        }
    }
}

/// A point on a model surface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    /// Unit vector in the embedded picture.
    Sphere(Vector3<f64>),
    /// Angle pair, not necessarily reduced modulo 2π.
    Torus(Vector2<f64>),
}

impl Point {
    pub fn sphere(x: f64, y: f64, z: f64) -> Self {
        Point::Sphere(Vector3::new(x, y, z))
    }

    pub fn torus(alpha: f64, beta: f64) -> Self {
        Point::Torus(Vector2::new(alpha, beta))
    }

    /// Spherical chart point at colatitude `theta`, azimuth `phi`.
    pub fn sphere_chart(theta: f64, phi: f64) -> Self {
        Point::Sphere(Vector3::new(
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ))
    }

    pub fn as_sphere(&self) -> Result<Vector3<f64>> {
        match self {
            Point::Sphere(v) => Ok(*v),
            _ => Err(Error::Mismatch),
        }
    }

    pub fn as_torus(&self) -> Result<Vector2<f64>> {
        match self {
            Point::Torus(v) => Ok(*v),
            _ => Err(Error::Mismatch),
        }
    }

    /// Distance in the surface's natural metric-compatible coordinates:
    /// chordal for the sphere, wrap-aware per angle for the torus.
    pub fn distance(&self, other: &Point) -> f64 {
        match (self, other) {
            (Point::Sphere(a), Point::Sphere(b)) => (a - b).norm(),
            (Point::Torus(a), Point::Torus(b)) => {
                let d = |x: f64, y: f64| {
                    let r = (x - y).rem_euclid(TWO_PI);
                    r.min(TWO_PI - r)
                };
                d(a.x, b.x).hypot(d(a.y, b.y))
            }
            _ => f64::INFINITY,
        }
    }

    /// Flat list of coordinates, for reports.
    pub fn coords(&self) -> Vec<f64> {
        match self {
            Point::Sphere(v) => vec![v.x, v.y, v.z],
            Point::Torus(v) => vec![v.x.rem_euclid(TWO_PI), v.y.rem_euclid(TWO_PI)],
        }
    }
}

/// A tangent vector at a point of a model surface, in the same coordinates
/// as [`Point`].
#[derive(Clone, Copy, Debug)]
pub enum Tangent {
    Sphere(Vector3<f64>),
    Torus(Vector2<f64>),
}

impl Tangent {
    pub fn norm(&self) -> f64 {
        match self {
            Tangent::Sphere(v) => v.norm(),
            Tangent::Torus(v) => v.norm(),
        }
    }

    pub fn as_sphere(&self) -> Result<Vector3<f64>> {
        match self {
            Tangent::Sphere(v) => Ok(*v),
            _ => Err(Error::Mismatch),
        }
    }

    pub fn as_torus(&self) -> Result<Vector2<f64>> {
        match self {
            Tangent::Torus(v) => Ok(*v),
            _ => Err(Error::Mismatch),
        }
    }

    pub fn add(&self, other: &Tangent) -> Result<Tangent> {
        match (self, other) {
            (Tangent::Sphere(a), Tangent::Sphere(b)) => Ok(Tangent::Sphere(a + b)),
            (Tangent::Torus(a), Tangent::Torus(b)) => Ok(Tangent::Torus(a + b)),
            _ => Err(Error::Mismatch),
        }
    }
}
