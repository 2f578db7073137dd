//! Invariant 2-forms as densities against the coordinate area element.
//!
//! On the sphere the area element is `sinθ dθ∧dφ` (equivalently `du∧dφ` in
//! the equal-area chart `u = cosθ`); on the torus it is `dα∧dβ`. A form is
//! its density times that element, so the round form `λ·vol` has constant
//! density `λ`.

use super::{Point, Surface, SurfaceKind, Tangent};
use crate::error::Result;
use std::f64::consts::PI;
use std::sync::Arc;

type Density = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;

/// A closed 2-form on a model surface.
#[derive(Clone)]
pub enum TwoForm {
    /// The zero form.
    Zero,
    /// `λ` times the volume form of the surface.
    ScalarVolume { lambda: f64 },
    /// Arbitrary bounded density, with an optional closed-form total flux.
    Custom { density: Density, flux_hint: Option<f64> },
}

impl TwoForm {
    pub fn zero() -> Self {
        TwoForm::Zero
    }

    pub fn scalar_volume(lambda: f64) -> Self {
        TwoForm::ScalarVolume { lambda }
    }

    pub fn custom(density: impl Fn(&Point) -> f64 + Send + Sync + 'static, flux_hint: Option<f64>) -> Self {
        TwoForm::Custom { density: Arc::new(density), flux_hint }
    }

    pub fn density(&self, p: &Point) -> f64 {
        match self {
            TwoForm::Zero => 0.0,
            TwoForm::ScalarVolume { lambda } => *lambda,
            TwoForm::Custom { density, .. } => density(p),
        }
    }

    /// Structurally the zero form.
    pub fn is_zero(&self) -> bool {
        matches!(self, TwoForm::Zero)
    }

    /// Closed-form total flux, when the catalog knows it.
    pub fn closed_form_flux(&self, surface: &Surface) -> Option<f64> {
        match self {
            TwoForm::Zero => Some(0.0),
            TwoForm::ScalarVolume { lambda } => Some(match surface.kind {
                SurfaceKind::Sphere2 => 4.0 * PI * lambda,
                SurfaceKind::Torus2 => 4.0 * PI * PI * lambda,
            }),
            TwoForm::Custom { flux_hint, .. } => *flux_hint,
        }
    }

    /// Evaluate the form on a pair of tangent vectors at a point.
    pub fn pair(&self, p: &Point, u: &Tangent, w: &Tangent) -> Result<f64> {
        let rho = self.density(p);
        if rho == 0.0 {
            return Ok(0.0);
        }
        Ok(match p {
            Point::Sphere(x) => {
                // volume form of the unit sphere on embedded tangents
                rho * x.dot(&u.as_sphere()?.cross(&w.as_sphere()?))
            }
            Point::Torus(_) => {
                let a = u.as_torus()?;
                let b = w.as_torus()?;
                rho * (a.x * b.y - a.y * b.x)
            }
        })
    }

    pub fn add(&self, other: &TwoForm) -> TwoForm {
        match (self, other) {
            (TwoForm::Zero, f) | (f, TwoForm::Zero) => f.clone(),
            (TwoForm::ScalarVolume { lambda: a }, TwoForm::ScalarVolume { lambda: b }) => {
                TwoForm::ScalarVolume { lambda: a + b }
            }
            (a, b) => {
                let (a, b) = (a.clone(), b.clone());
                let hint = match (&a, &b) {
                    (TwoForm::Custom { flux_hint: Some(x), .. }, TwoForm::Custom { flux_hint: Some(y), .. }) => {
                        Some(x + y)
                    }
                    _ => None,
                };
                TwoForm::Custom {
                    density: Arc::new(move |p| a.density(p) + b.density(p)),
                    flux_hint: hint,
                }
            }
        }
    }

    pub fn scale(&self, factor: f64) -> TwoForm {
        match self {
            TwoForm::Zero => TwoForm::Zero,
            TwoForm::ScalarVolume { lambda } => TwoForm::ScalarVolume { lambda: lambda * factor },
            TwoForm::Custom { density, flux_hint } => {
                let density = density.clone();
                TwoForm::Custom {
                    density: Arc::new(move |p| factor * density(p)),
                    flux_hint: flux_hint.map(|f| f * factor),
                }
            }
        }
    }

    /// Whether the form is nowhere-degenerate on the grid: every density
    /// sample is bounded away from zero. On a surface this is exactly the
    /// symplectic condition.
    pub fn is_nondegenerate_on_grid(&self, surface: &Surface) -> bool {
        match self {
            TwoForm::Zero => false,
            TwoForm::ScalarVolume { lambda } => lambda.abs() > 1e-12,
            TwoForm::Custom { .. } => super::quadrature::min_abs_density(surface, self) > 1e-9,
        }
    }
}

impl std::fmt::Debug for TwoForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TwoForm::Zero => write!(f, "TwoForm::Zero"),
            TwoForm::ScalarVolume { lambda } => write!(f, "TwoForm::ScalarVolume({lambda})"),
            TwoForm::Custom { flux_hint, .. } => write!(f, "TwoForm::Custom(flux_hint={flux_hint:?})"),
        }
    }
}
