//! Numerical verification of declared moment maps: the defining relation
//! `dμ_X = i_{X_M}ω` by central finite differences, and equivariance by
//! random sampling.

use super::{Action, MomentMap, Point, Surface, SurfaceKind, TwoForm, TWO_PI};
use crate::error::Result;
use crate::lie::{self, AlgebraElement};
use nalgebra::Vector3;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Finite-difference tolerance constant: the residual bound is `C·h²` with
/// `h` the grid step. Calibrated once on the rotation-invariant sphere
/// scenario; at the default grid of 256 this gives 1e-4 on the sphere.
pub const FD_CALIBRATION: f64 = 0.66;

/// Default tolerance for the compatibility residual at a given grid.
pub fn fd_tolerance(surface: &Surface) -> f64 {
    let h = match surface.kind {
        SurfaceKind::Sphere2 => PI / surface.grid as f64,
        SurfaceKind::Torus2 => TWO_PI / surface.grid as f64,
    };
    FD_CALIBRATION * h * h
}

/// Result of the compatibility check `dμ_X = i_{X_M}ω` over the grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompatReport {
    pub max_residual: f64,
    pub tol: f64,
    pub passed: bool,
    /// Coordinates of the worst grid point.
    pub worst_point: Vec<f64>,
    /// Index of the algebra basis element with the worst residual.
    pub worst_basis: usize,
}

/// Compare central finite differences of `μ_X` against `ω(X_M, ·)` on the
/// chart grid, for every basis element of the algebra. Passes when the worst
/// residual is below `tol` (default `C·h²`, see [`fd_tolerance`]).
pub fn check_moment_compatibility(
    surface: &Surface,
    form: &TwoForm,
    action: &Action,
    moment: &MomentMap,
    tol: Option<f64>,
) -> Result<CompatReport> {
    let tol = tol.unwrap_or_else(|| fd_tolerance(surface));
    let g = action.group();
    let n = surface.grid.max(16);
    let mut worst = (0.0f64, vec![0.0; 2], 0usize);

    for b in 0..g.algebra_dim {
        let x_alg = AlgebraElement::basis(&g, b);
        match surface.kind {
            SurfaceKind::Sphere2 => {
                let h = PI / n as f64;
                let hphi = TWO_PI / n as f64;
                let mu = |theta: f64, phi: f64| -> Result<f64> {
                    moment.eval(action, &x_alg, &Point::sphere_chart(theta, phi))
                };
                for i in 1..n - 1 {
                    let theta = (i as f64 + 0.5) * h;
                    for j in 0..n {
                        let phi = (j as f64 + 0.5) * hphi;
                        let p = Point::sphere_chart(theta, phi);
                        let xm = action.vector_field(&x_alg, &p)?.as_sphere()?;
                        // chart components of the fundamental field
                        let e_theta = Vector3::new(
                            theta.cos() * phi.cos(),
                            theta.cos() * phi.sin(),
                            -theta.sin(),
                        );
                        let d_phi = Vector3::new(
                            -theta.sin() * phi.sin(),
                            theta.sin() * phi.cos(),
                            0.0,
                        );
                        let x_theta = xm.dot(&e_theta);
                        let x_phi = xm.dot(&d_phi) / (theta.sin() * theta.sin());
                        let rho = form.density(&p);
                        // i_Xω on (∂_θ, ∂_φ) for ω = ρ sinθ dθ∧dφ
                        let target_theta = -rho * theta.sin() * x_phi;
                        let target_phi = rho * theta.sin() * x_theta;
                        let dmu_theta = (mu(theta + h, phi)? - mu(theta - h, phi)?) / (2.0 * h);
                        let dmu_phi = (mu(theta, phi + hphi)? - mu(theta, phi - hphi)?) / (2.0 * hphi);
                        let r = (dmu_theta - target_theta)
                            .abs()
                            .max((dmu_phi - target_phi).abs());
                        if r > worst.0 {
                            worst = (r, p.coords(), b);
                        }
                    }
                }
            }
            SurfaceKind::Torus2 => {
                let h = TWO_PI / n as f64;
                let mu = |a: f64, bb: f64| -> Result<f64> {
                    moment.eval(action, &x_alg, &Point::torus(a, bb))
                };
                for i in 0..n {
                    let a = (i as f64 + 0.5) * h;
                    for j in 0..n {
                        let bb = (j as f64 + 0.5) * h;
                        let p = Point::torus(a, bb);
                        let xm = action.vector_field(&x_alg, &p)?.as_torus()?;
                        let rho = form.density(&p);
                        let target_a = -rho * xm.y;
                        let target_b = rho * xm.x;
                        let dmu_a = (mu(a + h, bb)? - mu(a - h, bb)?) / (2.0 * h);
                        let dmu_b = (mu(a, bb + h)? - mu(a, bb - h)?) / (2.0 * h);
                        let r = (dmu_a - target_a).abs().max((dmu_b - target_b).abs());
                        if r > worst.0 {
                            worst = (r, p.coords(), b);
                        }
                    }
                }
            }
        }
    }

    Ok(CompatReport {
        max_residual: worst.0,
        tol,
        passed: worst.0 < tol,
        worst_point: worst.1,
        worst_basis: worst.2,
    })
}

/// Result of the equivariance spot check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivarianceReport {
    pub max_deviation: f64,
    pub tol: f64,
    pub passed: bool,
    pub samples: usize,
}

/// Verify `μ_{Ad_φ X}(φ·x) = μ_X(x)` on random triples `(φ, X, x)`.
pub fn check_equivariance(
    surface: &Surface,
    action: &Action,
    moment: &MomentMap,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<EquivarianceReport> {
    let tol = 1e-6;
    let g = action.group();
    let mut max_dev = 0.0f64;
    for _ in 0..samples {
        let phi = lie::sample_group_element(&g, rng)?;
        let coords = (0..g.algebra_dim).map(|_| rng.random_range(-2.0..2.0)).collect();
        let x_alg = AlgebraElement::new(&g, coords)?;
        let p = random_point(surface, rng);
        let lhs = moment.eval(
            action,
            &lie::adjoint_action(&g, &phi, &x_alg)?,
            &action.apply(&phi, &p)?,
        )?;
        let rhs = moment.eval(action, &x_alg, &p)?;
        max_dev = max_dev.max((lhs - rhs).abs());
    }
    Ok(EquivarianceReport { max_deviation: max_dev, tol, passed: max_dev < tol, samples })
}

/// Uniform random point on a model surface.
pub fn random_point(surface: &Surface, rng: &mut impl Rng) -> Point {
    match surface.kind {
        SurfaceKind::Sphere2 => Point::Sphere(lie::random_unit_axis(rng)),
        SurfaceKind::Torus2 => {
            Point::torus(rng.random_range(0.0..TWO_PI), rng.random_range(0.0..TWO_PI))
        }
    }
}
