//! Grid-seeded search on the model surfaces: zeros of fundamental vector
//! fields and extrema of moment functions.
//!
//! Both searches scan the chart grid and refine candidates in a local
//! 2-dimensional frame. Absence of zeros is never claimed outright; the
//! report carries the smallest grid speed so that fixed-point-free actions
//! can be recognized by a positive lower bound instead.

use super::{Action, MomentMap, Point, Surface, SurfaceKind, TWO_PI};
use crate::error::{Error, Result};
use crate::lie::AlgebraElement;
use nalgebra::{Matrix2, Vector2, Vector3};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Zeros found for a fundamental vector field, with search diagnostics.
#[derive(Clone, Debug)]
pub struct ZeroSearchReport {
    pub zeros: Vec<Point>,
    /// Smallest speed seen on the grid; a fixed-point-free action shows a
    /// positive lower bound here.
    pub min_grid_speed: f64,
    pub grid: usize,
    /// Candidates dropped because refinement diverged.
    pub dropped: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremum {
    Max,
    Min,
}

/// Local 2-parameter chart around a point, used by both refiners.
fn local_chart(p: Point) -> (Box<dyn Fn(f64, f64) -> Point>, f64) {
    match p {
        Point::Sphere(x) => {
            let seed = if x.x.abs() < 0.9 {
                Vector3::new(1.0, 0.0, 0.0)
            } else {
                Vector3::new(0.0, 1.0, 0.0)
            };
            let t1 = seed.cross(&x).normalize();
            let t2 = x.cross(&t1).normalize();
            let f = move |s: f64, t: f64| -> Point {
                Point::Sphere((x + s * t1 + t * t2).normalize())
            };
            (
                Box::new(f) as Box<dyn Fn(f64, f64) -> Point>,
                1.0, // trust radius
            )
        }
        Point::Torus(a) => {
            let f = move |s: f64, t: f64| -> Point { Point::Torus(Vector2::new(a.x + s, a.y + t)) };
            (Box::new(f) as Box<dyn Fn(f64, f64) -> Point>, PI)
        }
    }
}

fn chart_grid(surface: &Surface, n: usize) -> Vec<Vec<Point>> {
    match surface.kind {
        SurfaceKind::Sphere2 => {
            let h = PI / n as f64;
            let hphi = TWO_PI / n as f64;
            (0..n)
                .map(|i| {
                    let theta = (i as f64 + 0.5) * h;
                    (0..n)
                        .map(|j| Point::sphere_chart(theta, (j as f64 + 0.5) * hphi))
                        .collect()
                })
                .collect()
        }
        SurfaceKind::Torus2 => {
            let h = TWO_PI / n as f64;
            (0..n)
                .map(|i| {
                    let a = (i as f64 + 0.5) * h;
                    (0..n).map(|j| Point::torus(a, (j as f64 + 0.5) * h)).collect()
                })
                .collect()
        }
    }
}

/// Find the zeros of the fundamental vector field of `x_alg`, refined to
/// `‖X_M‖ < 1e-9`. The returned list may be empty; emptiness means "none
/// found at this resolution", backed by `min_grid_speed`.
pub fn find_action_zeros(
    action: &Action,
    x_alg: &AlgebraElement,
    surface: &Surface,
) -> Result<ZeroSearchReport> {
    if x_alg.norm() < 1e-12 {
        return Err(Error::Precondition("zero search needs a nonzero algebra element".into()));
    }
    let n = surface.grid.clamp(32, 512);
    let grid = chart_grid(surface, n);
    let speeds: Vec<Vec<f64>> = grid
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| action.vector_field(x_alg, p).map(|t| t.norm()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut max_speed = 0.0f64;
    let mut min_speed = f64::INFINITY;
    for row in &speeds {
        for s in row {
            max_speed = max_speed.max(*s);
            min_speed = min_speed.min(*s);
        }
    }
    let threshold = (0.1 * max_speed).max(1e-12);
    let phi_wraps = true; // second axis is periodic on both surfaces
    let theta_wraps = surface.kind == SurfaceKind::Torus2;

    let mut zeros: Vec<Point> = Vec::new();
    let mut dropped = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = speeds[i][j];
            if v >= threshold {
                continue;
            }
            let mut is_min = true;
            'neigh: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let ii = i as i64 + di;
                    let jj = j as i64 + dj;
                    let ii = if theta_wraps {
                        ii.rem_euclid(n as i64) as usize
                    } else if ii < 0 || ii >= n as i64 {
                        continue;
                    } else {
                        ii as usize
                    };
                    let jj = if phi_wraps {
                        jj.rem_euclid(n as i64) as usize
                    } else {
                        jj as usize
                    };
                    if speeds[ii][jj] < v {
                        is_min = false;
                        break 'neigh;
                    }
                }
            }
            if !is_min {
                continue;
            }
            match refine_zero(action, x_alg, &grid[i][j]) {
                Some(z) => {
                    if zeros.iter().all(|existing| existing.distance(&z) > 1e-6) {
                        zeros.push(z);
                    }
                }
                None => dropped.push(format!(
                    "candidate near {:?} did not converge",
                    grid[i][j].coords()
                )),
            }
        }
    }
    Ok(ZeroSearchReport { zeros, min_grid_speed: min_speed, grid: n, dropped })
}

/// Gauss-Newton on the residual `X_M` in a local frame.
fn refine_zero(action: &Action, x_alg: &AlgebraElement, start: &Point) -> Option<Point> {
    let mut p = *start;
    let fd = 1e-7;
    for _ in 0..50 {
        let (chart, trust) = local_chart(p);
        let f0 = field_components(action, x_alg, &chart(0.0, 0.0))?;
        let norm0 = f0.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm0 < 1e-12 {
            return Some(chart(0.0, 0.0));
        }
        let fs = field_components(action, x_alg, &chart(fd, 0.0))?;
        let ft = field_components(action, x_alg, &chart(0.0, fd))?;
        let col_s: Vec<f64> = fs.iter().zip(&f0).map(|(a, b)| (a - b) / fd).collect();
        let col_t: Vec<f64> = ft.iter().zip(&f0).map(|(a, b)| (a - b) / fd).collect();
        // normal equations for the 2-parameter least squares step
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let jtj = Matrix2::new(
            dot(&col_s, &col_s),
            dot(&col_s, &col_t),
            dot(&col_t, &col_s),
            dot(&col_t, &col_t),
        );
        let jtf = Vector2::new(dot(&col_s, &f0), dot(&col_t, &f0));
        let step = jtj.try_inverse()? * (-jtf);
        if !step.x.is_finite() || !step.y.is_finite() || step.norm() > trust {
            return None;
        }
        p = chart(step.x, step.y);
    }
    let final_norm = action.vector_field(x_alg, &p).ok()?.norm();
    if final_norm < 1e-9 {
        Some(p)
    } else {
        None
    }
}

fn field_components(action: &Action, x_alg: &AlgebraElement, p: &Point) -> Option<Vec<f64>> {
    match action.vector_field(x_alg, p).ok()? {
        super::Tangent::Sphere(v) => Some(vec![v.x, v.y, v.z]),
        super::Tangent::Torus(v) => Some(vec![v.x, v.y]),
    }
}

/// Locate an extremum of `μ_X` over the surface: grid argmax or argmin,
/// Newton-refined in a local frame. The value is accurate to about 1e-8 for
/// the catalog's smooth moment functions.
pub fn extremum_of_moment(
    action: &Action,
    moment: &MomentMap,
    x_alg: &AlgebraElement,
    surface: &Surface,
    mode: Extremum,
) -> Result<(Point, f64)> {
    let sign = match mode {
        Extremum::Max => 1.0,
        Extremum::Min => -1.0,
    };
    let n = surface.grid.clamp(32, 512);
    let grid = chart_grid(surface, n);
    let mut best: Option<(Point, f64)> = None;
    for row in &grid {
        for p in row {
            let v = sign * moment.eval(action, x_alg, p)?;
            if best.map(|(_, b)| v > b).unwrap_or(true) {
                best = Some((*p, v));
            }
        }
    }
    let (mut p, mut fval) = best.expect("grid is nonempty");

    // Newton polish; a vanishing gradient (constant moment) exits at once
    let grad_h = 1e-5;
    let hess_h = 1e-4;
    for _ in 0..30 {
        let (chart, _) = local_chart(p);
        let f = |s: f64, t: f64| -> Result<f64> {
            Ok(sign * moment.eval(action, x_alg, &chart(s, t))?)
        };
        let f00 = f(0.0, 0.0)?;
        let gs = (f(grad_h, 0.0)? - f(-grad_h, 0.0)?) / (2.0 * grad_h);
        let gt = (f(0.0, grad_h)? - f(0.0, -grad_h)?) / (2.0 * grad_h);
        if gs.hypot(gt) < 1e-10 * (1.0 + f00.abs()) {
            fval = f00;
            break;
        }
        let hss = (f(hess_h, 0.0)? - 2.0 * f00 + f(-hess_h, 0.0)?) / (hess_h * hess_h);
        let htt = (f(0.0, hess_h)? - 2.0 * f00 + f(0.0, -hess_h)?) / (hess_h * hess_h);
        let hst = (f(hess_h, hess_h)? - f(hess_h, -hess_h)? - f(-hess_h, hess_h)?
            + f(-hess_h, -hess_h)?)
            / (4.0 * hess_h * hess_h);
        let hess = Matrix2::new(hss, hst, hst, htt);
        let grad = Vector2::new(gs, gt);
        let step = match hess.try_inverse() {
            Some(inv) => -(inv * grad),
            None => {
                fval = f00;
                break;
            }
        };
        // back off until the step actually improves the objective
        let mut scale = 1.0;
        let mut improved = false;
        for _ in 0..12 {
            let cand = f(scale * step.x, scale * step.y)?;
            if cand > f00 {
                p = chart(scale * step.x, scale * step.y);
                fval = cand;
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if !improved {
            fval = f00;
            break;
        }
    }
    Ok((p, sign * fval))
}
