//! Connections on circle bundles over the model surfaces.
//!
//! A connection is represented by the data that determines every holonomy
//! over a surface: its curvature 2-form, the integer flux through each
//! generator of the second homology, and a flat twist — a homomorphism from
//! the first homology to ℝ/ℤ that shifts the holonomy of a loop by the twist
//! of its class. A chart potential is kept alongside when the catalog knows
//! one, purely as an independent cross-check route.

use crate::error::{Error, Result};
use crate::geometry::{self, Point, Surface, SurfaceKind, Tangent, TwoForm};
use crate::modone::ModOne;

/// Flux must land this close to its integer for a prequantization to exist.
pub const CHERN_TOL: f64 = 1e-6;

/// A chart 1-form with `dA = curvature` on a declared domain.
#[derive(Clone, Debug)]
pub enum Potential {
    /// `A = λ(1 - cosθ) dφ` on the sphere minus the south pole.
    SphereMonopole { lambda: f64 },
}

impl Potential {
    /// Evaluate `A(w)` at `p`.
    pub fn eval(&self, p: &Point, w: &Tangent) -> Result<f64> {
        match self {
            Potential::SphereMonopole { lambda } => {
                let x = p.as_sphere()?;
                let v = w.as_sphere()?;
                // (1 - cosθ) dφ = (x dy - y dx)/(1 + z) on the unit sphere
                Ok(lambda * (x.x * v.y - x.y * v.x) / (1.0 + x.z))
            }
        }
    }

    /// Whether the chart containing the potential covers this point.
    pub fn covers(&self, p: &Point) -> bool {
        match self {
            Potential::SphereMonopole { .. } => match p {
                Point::Sphere(x) => x.z > -0.999,
                _ => false,
            },
        }
    }
}

/// A circle-bundle connection over a model surface.
#[derive(Clone, Debug)]
pub struct Connection {
    pub surface: Surface,
    pub curvature: TwoForm,
    /// Integer flux per generator of the second homology.
    pub chern: Vec<i64>,
    /// Twist per generator of the first homology (empty on the sphere).
    pub flat_twist: Vec<ModOne>,
    pub potential: Option<Potential>,
}

impl Connection {
    /// A prequantization of `omega`: checks that the flux is within
    /// [`CHERN_TOL`] of an integer and stores it, with no twist.
    pub fn prequantization(surface: Surface, omega: &TwoForm) -> Result<Self> {
        let flux = geometry::integrate_two_form(&surface, omega)?;
        let n = flux.round();
        if (flux - n).abs() >= CHERN_TOL {
            return Err(Error::NotIntegral { flux, tol: CHERN_TOL });
        }
        let potential = match (surface.kind, omega) {
            (SurfaceKind::Sphere2, TwoForm::ScalarVolume { lambda }) => {
                Some(Potential::SphereMonopole { lambda: *lambda })
            }
            _ => None,
        };
        Ok(Connection {
            surface,
            curvature: omega.clone(),
            chern: vec![n as i64],
            flat_twist: vec![ModOne::ZERO; surface.h1_rank()],
            potential,
        })
    }

    /// A flat connection with the given twist.
    pub fn flat(surface: Surface, twist: Vec<ModOne>) -> Result<Self> {
        if twist.len() != surface.h1_rank() {
            return Err(Error::Precondition(format!(
                "twist needs {} entries, got {}",
                surface.h1_rank(),
                twist.len()
            )));
        }
        Ok(Connection {
            surface,
            curvature: TwoForm::zero(),
            chern: vec![0],
            flat_twist: twist,
            potential: None,
        })
    }

    /// The trivial bundle with its trivial connection.
    pub fn trivial(surface: Surface) -> Self {
        Connection::flat(surface, vec![ModOne::ZERO; surface.h1_rank()]).expect("rank matches")
    }

    pub fn is_flat(&self) -> bool {
        self.curvature.is_zero()
    }

    /// The same curvature with an extra flat twist: holonomies change by the
    /// twist of the loop's homology class.
    pub fn with_twist_added(&self, beta: &[ModOne]) -> Result<Self> {
        if beta.len() != self.flat_twist.len() {
            return Err(Error::Precondition("twist rank mismatch".into()));
        }
        let mut out = self.clone();
        for (t, b) in out.flat_twist.iter_mut().zip(beta) {
            *t = t.add(*b);
        }
        Ok(out)
    }

    /// Tensor product of bundles with connections: curvatures and integer
    /// fluxes add, twists add modulo 1.
    pub fn tensor(&self, other: &Connection) -> Result<Self> {
        if self.surface.kind != other.surface.kind {
            return Err(Error::Mismatch);
        }
        let surface = Surface { kind: self.surface.kind, grid: self.surface.grid.max(other.surface.grid) };
        let chern = self
            .chern
            .iter()
            .zip(&other.chern)
            .map(|(a, b)| a + b)
            .collect();
        let flat_twist = self
            .flat_twist
            .iter()
            .zip(&other.flat_twist)
            .map(|(a, b)| a.add(*b))
            .collect();
        let potential = match (self.potential_lambda(), other.potential_lambda()) {
            (Some(a), Some(b)) if surface.kind == SurfaceKind::Sphere2 => {
                Some(Potential::SphereMonopole { lambda: a + b })
            }
            _ => None,
        };
        Ok(Connection {
            surface,
            curvature: self.curvature.add(&other.curvature),
            chern,
            flat_twist,
            potential,
        })
    }

    /// The r-th tensor power.
    pub fn power(&self, r: u32) -> Self {
        let r_i = i64::from(r);
        Connection {
            surface: self.surface,
            curvature: self.curvature.scale(f64::from(r)),
            chern: self.chern.iter().map(|c| c * r_i).collect(),
            flat_twist: self.flat_twist.iter().map(|t| t.scale(r_i)).collect(),
            potential: self.potential_lambda().map(|l| Potential::SphereMonopole {
                lambda: l * f64::from(r),
            }),
        }
    }

    /// Monopole strength for the potential route: the stored potential's, or
    /// zero for a flat connection (whose curvature part integrates to zero).
    fn potential_lambda(&self) -> Option<f64> {
        match &self.potential {
            Some(Potential::SphereMonopole { lambda }) => Some(*lambda),
            None if self.is_flat() => Some(0.0),
            None => None,
        }
    }
}
