//! Catalog group actions on the model surfaces.
//!
//! Fundamental vector fields use the convention `X_M(x) = d/dt|₀ exp(-tX)·x`.
//! With the axis-coordinate convention of [`crate::lie`] (the matrix of an
//! algebra element acts as `-v × x`), this makes the fundamental field of a
//! rotation generator `X_M(x) = v⃗_X × x`, which is the Hamiltonian field of
//! the height function `⟨v⃗_X, x⟩` against the outward-oriented volume form.

use super::{Point, SurfaceKind, Tangent};
use crate::error::{Error, Result};
use crate::lie::{AlgebraElement, GroupElement, GroupSpec};
use nalgebra::{Rotation3, Vector2, Vector3};

/// A catalog action of a group on a model surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    /// The full rotation group on the unit sphere.
    So3OnSphere,
    /// The double cover acting on the unit sphere through its covering
    /// projection.
    Su2OnSphere,
    /// The circle acting on the sphere through a fixed rotation generator.
    /// The generator is the algebra element with axis vector `e₁`, so the
    /// circle rotates about the x-axis.
    CircleAxisOnSphere,
    /// The circle adding its angle to the first torus coordinate.
    CircleOnTorus,
}

impl Action {
    pub fn group(&self) -> GroupSpec {
        match self {
            Action::So3OnSphere => GroupSpec::so3(),
            Action::Su2OnSphere => GroupSpec::su2(),
            Action::CircleAxisOnSphere | Action::CircleOnTorus => GroupSpec::circle(),
        }
    }

    pub fn surface_kind(&self) -> SurfaceKind {
        match self {
            Action::CircleOnTorus => SurfaceKind::Torus2,
            _ => SurfaceKind::Sphere2,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rotations:so3" => Ok(Action::So3OnSphere),
            "rotations:su2" => Ok(Action::Su2OnSphere),
            "axis-rotations" => Ok(Action::CircleAxisOnSphere),
            "angle-translations" => Ok(Action::CircleOnTorus),
            other => Err(Error::Parse(format!("unknown action {other:?}"))),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Action::So3OnSphere => "rotations:so3",
            Action::Su2OnSphere => "rotations:su2",
            Action::CircleAxisOnSphere => "axis-rotations",
            Action::CircleOnTorus => "angle-translations",
        }
    }

    /// Apply a group element to a point.
    pub fn apply(&self, phi: &GroupElement, x: &Point) -> Result<Point> {
        match (self, phi) {
            (Action::So3OnSphere, GroupElement::Rotation(m)) => Ok(Point::Sphere(m * x.as_sphere()?)),
            (Action::Su2OnSphere, GroupElement::Versor(q)) => {
                Ok(Point::Sphere(q.transform_vector(&x.as_sphere()?)))
            }
            (Action::CircleAxisOnSphere, GroupElement::Angles(a)) if a.len() == 1 => {
                let rot = Rotation3::from_scaled_axis(-Vector3::new(a[0], 0.0, 0.0));
                Ok(Point::Sphere(rot * x.as_sphere()?))
            }
            (Action::CircleOnTorus, GroupElement::Angles(a)) if a.len() == 1 => {
                let p = x.as_torus()?;
                Ok(Point::Torus(Vector2::new(p.x + a[0], p.y)))
            }
            _ => Err(Error::Mismatch),
        }
    }

    /// The fundamental vector field of an algebra element at a point.
    pub fn vector_field(&self, x_alg: &AlgebraElement, p: &Point) -> Result<Tangent> {
        match self {
            Action::So3OnSphere | Action::Su2OnSphere | Action::CircleAxisOnSphere => {
                let v = self
                    .rotation_vector(x_alg)?
                    .ok_or(Error::Mismatch)?;
                Ok(Tangent::Sphere(v.cross(&p.as_sphere()?)))
            }
            Action::CircleOnTorus => {
                let t = x_alg.scalar()?;
                Ok(Tangent::Torus(Vector2::new(-t, 0.0)))
            }
        }
    }

    /// The embedded rotation vector of an algebra element, for the sphere
    /// actions: the axis vector for the rotation groups, `X·e₁` for the
    /// fixed-axis circle. `None` for the torus action.
    pub fn rotation_vector(&self, x_alg: &AlgebraElement) -> Result<Option<Vector3<f64>>> {
        match self {
            Action::So3OnSphere | Action::Su2OnSphere => Ok(Some(x_alg.axis_vector()?)),
            Action::CircleAxisOnSphere => {
                Ok(Some(Vector3::new(x_alg.scalar()?, 0.0, 0.0)))
            }
            Action::CircleOnTorus => Ok(None),
        }
    }

    /// Orbit position after flowing for parameter `s` along the one-parameter
    /// subgroup of `X`: the point `exp(sX)·x`.
    pub fn orbit_point(&self, x_alg: &AlgebraElement, base: &Point, s: f64) -> Result<Point> {
        match self {
            Action::So3OnSphere | Action::Su2OnSphere | Action::CircleAxisOnSphere => {
                let v = self.rotation_vector(x_alg)?.ok_or(Error::Mismatch)?;
                let rot = Rotation3::from_scaled_axis(-v * s);
                Ok(Point::Sphere(rot * base.as_sphere()?))
            }
            Action::CircleOnTorus => {
                let t = x_alg.scalar()?;
                let p = base.as_torus()?;
                Ok(Point::Torus(Vector2::new(p.x + s * t, p.y)))
            }
        }
    }
}
