//! Holonomy computation by three routes, and equivariant holonomy through
//! the orbit decomposition.
//!
//! Routes:
//!
//! - **cap**: flux of the curvature through a bounding patch, with the
//!   patch's declared multiplicity, plus the twist of the declared homology
//!   class;
//! - **flat**: for a flat connection, the twist of the homology class alone;
//! - **potential**: a line integral of the chart potential along the loop.
//!
//! When more than one route applies they agree modulo 1; the property suite
//! enforces this, the runtime picks the first applicable route in the order
//! flat, cap, potential (exact routes first).

use super::connection::{Connection, Potential};
use super::curve::{homology_class, orbit_curve, Curve, Loop};
use crate::error::{Error, Result};
use crate::geometry::{Action, MomentMap, Point, Tangent, TwoForm};
use crate::lie::{self, AlgebraElement, GroupSpec};
use crate::modone::ModOne;
use serde::{Deserialize, Serialize};

/// Refinement target for the adaptive line and patch integrals.
const INTEGRAL_TOL: f64 = 1e-9;

/// 8-point Gauss-Legendre nodes and weights on `[-1, 1]`.
const GAUSS_X: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GAUSS_W: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Which computation produced a holonomy value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Flat,
    Cap,
    Potential,
}

fn gauss_segment(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GAUSS_X.iter().zip(GAUSS_W.iter()) {
        acc += w * f(mid + half * x)?;
    }
    Ok(acc * half)
}

fn adaptive_1d(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<f64> {
    let mut m = 2usize;
    let mut prev = composite_1d(f, a, b, m)?;
    while m <= 2048 {
        m *= 2;
        let next = composite_1d(f, a, b, m)?;
        if (next - prev).abs() < INTEGRAL_TOL {
            return Ok(next);
        }
        if m > 2048 {
            return Err(Error::QuadratureDivergence { coarse: prev, fine: next });
        }
        prev = next;
    }
    unreachable!()
}

fn composite_1d(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64, m: usize) -> Result<f64> {
    let h = (b - a) / m as f64;
    let mut acc = 0.0;
    for i in 0..m {
        acc += gauss_segment(f, a + i as f64 * h, a + (i + 1) as f64 * h)?;
    }
    Ok(acc)
}

fn curve_velocity(curve: &Curve, t: f64) -> Tangent {
    let h = 1e-6;
    let (a, b) = (curve.at(t - h), curve.at(t + h));
    match (a, b) {
        (Point::Sphere(p), Point::Sphere(q)) => Tangent::Sphere((q - p) / (2.0 * h)),
        (Point::Torus(p), Point::Torus(q)) => Tangent::Torus((q - p) / (2.0 * h)),
        _ => unreachable!("a curve stays on one surface"),
    }
}

/// `∮ A(γ'(t)) dt` by composite Gauss quadrature with halving, split at the
/// curve's declared breakpoints.
pub fn line_integral(potential: &Potential, curve: &Curve) -> Result<f64> {
    let mut cuts = vec![0.0];
    cuts.extend(curve.breaks().iter().copied().filter(|b| *b > 1e-12 && *b < 1.0 - 1e-12));
    cuts.push(1.0);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let mut f = |t: f64| -> Result<f64> {
            potential.eval(&curve.at(t), &curve_velocity(curve, t))
        };
        total += adaptive_1d(&mut f, w[0], w[1])?;
    }
    Ok(total)
}

/// Flux of a 2-form through a cap's patch (without the multiplicity).
pub fn patch_flux(form: &TwoForm, cap: &super::curve::Cap) -> Result<f64> {
    let fd = 1e-6;
    let mut m = 2usize;
    let mut prev = composite_patch(form, cap, m, fd)?;
    while m <= 128 {
        m *= 2;
        let next = composite_patch(form, cap, m, fd)?;
        if (next - prev).abs() < INTEGRAL_TOL {
            return Ok(next);
        }
        if m > 128 {
            return Err(Error::QuadratureDivergence { coarse: prev, fine: next });
        }
        prev = next;
    }
    unreachable!()
}

fn composite_patch(form: &TwoForm, cap: &super::curve::Cap, m: usize, fd: f64) -> Result<f64> {
    let h = 1.0 / m as f64;
    let mut acc = 0.0;
    for i in 0..m {
        for j in 0..m {
            let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
            let (c, d) = (j as f64 * h, (j + 1) as f64 * h);
            // tensor Gauss on the cell
            let (ms, hs) = (0.5 * (a + b), 0.5 * (b - a));
            let (mt, ht) = (0.5 * (c + d), 0.5 * (d - c));
            for (xs, ws) in GAUSS_X.iter().zip(GAUSS_W.iter()) {
                let sigma = ms + hs * xs;
                for (xt, wt) in GAUSS_X.iter().zip(GAUSS_W.iter()) {
                    let t = mt + ht * xt;
                    let p = cap.at(sigma, t);
                    let du = partial(cap, sigma, t, fd, true);
                    let dv = partial(cap, sigma, t, fd, false);
                    acc += ws * wt * hs * ht * form.pair(&p, &du, &dv)?;
                }
            }
        }
    }
    Ok(acc)
}

fn partial(cap: &super::curve::Cap, sigma: f64, t: f64, fd: f64, first: bool) -> Tangent {
    let (a, b) = if first {
        (cap.at(sigma - fd, t), cap.at(sigma + fd, t))
    } else {
        (cap.at(sigma, t - fd), cap.at(sigma, t + fd))
    };
    match (a, b) {
        (Point::Sphere(p), Point::Sphere(q)) => Tangent::Sphere((q - p) / (2.0 * fd)),
        (Point::Torus(p), Point::Torus(q)) => Tangent::Torus((q - p) / (2.0 * fd)),
        _ => unreachable!("a patch stays on one surface"),
    }
}

fn twist_pairing(conn: &Connection, homology: &[i64]) -> ModOne {
    conn.flat_twist
        .iter()
        .zip(homology)
        .fold(ModOne::ZERO, |acc, (t, h)| acc.add(t.scale(*h)))
}

fn known_homology(conn: &Connection, lp: &Loop) -> Result<Vec<i64>> {
    match &lp.homology {
        Some(h) => Ok(h.clone()),
        None => homology_class(&conn.surface, &lp.curve),
    }
}

fn potential_covers(conn: &Connection, curve: &Curve) -> bool {
    match &conn.potential {
        Some(pot) => (0..=512).all(|i| pot.covers(&curve.at(i as f64 / 512.0))),
        None => false,
    }
}

/// Holonomy of a loop, first applicable route.
pub fn holonomy(conn: &Connection, lp: &Loop) -> Result<ModOne> {
    if lp.curve.is_constant(1e-12) {
        return Ok(ModOne::ZERO);
    }
    for route in [Route::Flat, Route::Cap, Route::Potential] {
        if route_applies(conn, lp, route) {
            return holonomy_via(conn, lp, route);
        }
    }
    Err(Error::NoRoute(
        "loop has no cap, no usable flat/homology data, and no covering potential".into(),
    ))
}

/// Whether a specific route can run on this loop.
pub fn route_applies(conn: &Connection, lp: &Loop, route: Route) -> bool {
    match route {
        Route::Flat => conn.is_flat(),
        Route::Cap => lp.cap.is_some(),
        Route::Potential => potential_covers(conn, &lp.curve),
    }
}

/// Holonomy of a loop by an explicitly chosen route.
pub fn holonomy_via(conn: &Connection, lp: &Loop, route: Route) -> Result<ModOne> {
    match route {
        Route::Flat => {
            if !conn.is_flat() {
                return Err(Error::NoRoute("connection is not flat".into()));
            }
            let h = known_homology(conn, lp)?;
            Ok(twist_pairing(conn, &h))
        }
        Route::Cap => {
            let cap = lp
                .cap
                .as_ref()
                .ok_or_else(|| Error::NoRoute("loop has no cap".into()))?;
            let flux = if cap.sign == 0 {
                0.0
            } else {
                cap.sign as f64 * patch_flux(&conn.curvature, cap)?
            };
            let twist = if conn.flat_twist.iter().all(|t| t.value() == 0.0) {
                ModOne::ZERO
            } else {
                twist_pairing(conn, &known_homology(conn, lp)?)
            };
            Ok(ModOne::new(flux).add(twist))
        }
        Route::Potential => {
            let pot = conn
                .potential
                .as_ref()
                .ok_or_else(|| Error::NoRoute("connection has no chart potential".into()))?;
            if !potential_covers(conn, &lp.curve) {
                return Err(Error::NoRoute("loop leaves the potential's chart".into()));
            }
            let li = line_integral(pot, &lp.curve)?;
            let twist = if conn.flat_twist.iter().all(|t| t.value() == 0.0) {
                ModOne::ZERO
            } else {
                twist_pairing(conn, &known_homology(conn, lp)?)
            };
            Ok(ModOne::new(li).add(twist))
        }
    }
}

/// Equivariant holonomy of a curve `γ` with `γ(1) = exp(X)·γ(0)`.
///
/// The value is assembled from the composition law: closing `γ` with the
/// reversed orbit of `X` through `γ(0)` gives an ordinary loop, and the
/// orbit's own equivariant holonomy is the moment value at the base point.
/// So the result is `hol(γ ∗ reverse(orbit)) + μ_X(γ(0))` modulo 1. For
/// `X = 0` this degenerates to the ordinary holonomy of the loop `γ`.
pub fn equivariant_holonomy(
    conn: &Connection,
    action: &Action,
    group: &GroupSpec,
    moment: &MomentMap,
    x_alg: &AlgebraElement,
    gamma: &Curve,
) -> Result<ModOne> {
    let base = gamma.start();
    let phi = lie::exp_group(group, x_alg)?;
    let gap = gamma.end().distance(&action.apply(&phi, &base)?);
    if gap > super::curve::CLOSURE_TOL {
        return Err(Error::EndpointMismatch { gap });
    }
    let mu0 = moment.eval(action, x_alg, &base)?;

    let act = *action;
    let x_owned = x_alg.clone();
    let tau = Curve::new(move |s| {
        act.orbit_point(&x_owned, &base, s)
            .expect("orbit evaluation on the declared surface")
    });

    let loop_part = if conn.is_flat() {
        let concat = gamma.concat(&tau.reverse())?;
        let h = homology_class(&conn.surface, &concat)?;
        twist_pairing(conn, &h)
    } else if potential_covers(conn, gamma) && potential_covers(conn, &tau) {
        let pot = conn.potential.as_ref().expect("covered implies present");
        ModOne::new(line_integral(pot, gamma)? - line_integral(pot, &tau)?)
    } else {
        return Err(Error::NoRoute(
            "closed-up curve needs a flat connection or a covering potential".into(),
        ));
    };
    Ok(loop_part.add(ModOne::new(mu0)))
}

/// The standard loops over the model surfaces, by name: `equator`,
/// `latitude:<colatitude>`, `torus_cycle:p,q`. Orbit loops are built with
/// [`orbit_curve`] since they need an action.
pub fn catalog_loop(kind: crate::geometry::SurfaceKind, name: &str) -> Result<Loop> {
    use crate::geometry::SurfaceKind;
    use crate::lie::TWO_PI;
    match (kind, name) {
        (SurfaceKind::Sphere2, "equator") => latitude_loop(std::f64::consts::FRAC_PI_2),
        (SurfaceKind::Sphere2, _) if name.starts_with("latitude:") => {
            let colat: f64 = name["latitude:".len()..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad latitude in {name:?}")))?;
            if !(colat > 0.0 && colat < std::f64::consts::PI) {
                return Err(Error::Parse("latitude colatitude must lie in (0, π)".into()));
            }
            latitude_loop(colat)
        }
        (SurfaceKind::Torus2, _) if name.starts_with("torus_cycle:") => {
            let rest = &name["torus_cycle:".len()..];
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::Parse(format!("bad torus cycle {name:?}")));
            }
            let p: i64 = parts[0].parse().map_err(|_| Error::Parse("bad winding".into()))?;
            let q: i64 = parts[1].parse().map_err(|_| Error::Parse("bad winding".into()))?;
            let curve = Curve::new(move |t| {
                Point::torus(TWO_PI * p as f64 * t, TWO_PI * q as f64 * t)
            });
            Ok(Loop::new(curve)?.with_homology(vec![p, q]))
        }
        _ => Err(Error::Parse(format!("unknown loop {name:?} on this surface"))),
    }
}

/// Counterclockwise latitude circle at a given colatitude, capped by the
/// polar patch it bounds positively.
pub fn latitude_loop(colat: f64) -> Result<Loop> {
    use crate::lie::TWO_PI;
    let curve = Curve::new(move |t| Point::sphere_chart(colat, TWO_PI * t));
    let cap = super::curve::Cap::new(
        move |sigma, t| Point::sphere_chart(sigma * colat, TWO_PI * t),
        1,
    );
    Loop::new(curve)?.with_cap(cap)
}

/// The complementary cap of a latitude loop: the southern patch, carried
/// with the orientation induced by the same counterclockwise boundary. Its
/// flux differs from the polar patch's by the full flux of the surface.
pub fn latitude_loop_south_capped(colat: f64) -> Result<Loop> {
    use crate::lie::TWO_PI;
    use std::f64::consts::PI;
    let curve = Curve::new(move |t| Point::sphere_chart(colat, TWO_PI * t));
    let cap = super::curve::Cap::new(
        move |sigma, t| Point::sphere_chart(PI - sigma * (PI - colat), TWO_PI * t),
        1,
    );
    Loop::new(curve)?.with_cap(cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Surface, SurfaceKind};
    use crate::lie::TWO_PI;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn monopole(n: i64) -> Connection {
        let s = Surface::sphere(64);
        Connection::prequantization(s, &TwoForm::scalar_volume(n as f64 / (4.0 * PI))).unwrap()
    }

    #[test]
    fn equator_with_northern_cap_is_one_half() {
        // oracle: cap flux λ·2π(1 - cos(π/2)) with λ = 1/4π gives 1/2
        let conn = monopole(1);
        let lp = catalog_loop(SurfaceKind::Sphere2, "equator").unwrap();
        let h = holonomy_via(&conn, &lp, Route::Cap).unwrap();
        assert!(h.approx_eq(ModOne::new(0.5), 1e-8), "got {h}");
    }

    #[test]
    fn flat_torus_twist_reads_off_the_cycle() {
        let s = Surface::torus(32);
        let conn = Connection::flat(s, vec![ModOne::new(0.25), ModOne::ZERO]).unwrap();
        let lp = catalog_loop(SurfaceKind::Torus2, "torus_cycle:1,0").unwrap();
        let h = holonomy(&conn, &lp).unwrap();
        assert!(h.approx_eq(ModOne::new(0.25), 1e-12));
        let lp2 = catalog_loop(SurfaceKind::Torus2, "torus_cycle:0,3").unwrap();
        assert!(holonomy(&conn, &lp2).unwrap().is_zero(1e-12));
    }

    #[test]
    fn constant_loop_has_zero_holonomy() {
        let conn = monopole(2);
        let lp = Loop::constant(Point::sphere(0.0, 1.0, 0.0));
        assert_eq!(holonomy(&conn, &lp).unwrap().value(), 0.0);
    }

    #[test]
    fn potential_and_cap_routes_agree_on_latitudes() {
        let conn = monopole(1);
        for colat in [0.4, FRAC_PI_2, 2.2] {
            let lp = latitude_loop(colat).unwrap();
            let via_cap = holonomy_via(&conn, &lp, Route::Cap).unwrap();
            let via_pot = holonomy_via(&conn, &lp, Route::Potential).unwrap();
            assert!(
                via_cap.approx_eq(via_pot, 1e-7),
                "colat {colat}: cap {via_cap} vs potential {via_pot}"
            );
            // oracle: λ·2π(1 - cos colat)
            let expected = ModOne::new((1.0 - colat.cos()) / 2.0);
            assert!(via_cap.approx_eq(expected, 1e-7));
        }
    }

    #[test]
    fn complementary_caps_differ_by_the_chern_number() {
        for n in [1i64, 2, 3] {
            let conn = monopole(n);
            let colat = 1.1;
            let north = latitude_loop(colat).unwrap();
            let south = latitude_loop_south_capped(colat).unwrap();
            let f_north = patch_flux(&conn.curvature, north.cap.as_ref().unwrap()).unwrap();
            let f_south = patch_flux(&conn.curvature, south.cap.as_ref().unwrap()).unwrap();
            assert!(
                ((f_north - f_south) - n as f64).abs() < 1e-7,
                "n={n}: {f_north} - {f_south}"
            );
            let h_n = holonomy(&conn, &north).unwrap();
            let h_s = holonomy(&conn, &south).unwrap();
            assert!(h_n.approx_eq(h_s, 1e-7));
        }
    }

    #[test]
    fn whole_surface_flux_vanishes_mod_one() {
        // a cap covering the whole sphere has integer flux
        let conn = monopole(3);
        let cap = super::super::curve::Cap::new(
            |sigma, t| Point::sphere_chart(sigma * (PI - 1e-9), TWO_PI * t),
            1,
        );
        let f = patch_flux(&conn.curvature, &cap).unwrap();
        assert!(ModOne::new(f).is_zero(1e-6), "flux {f}");
    }

    #[test]
    fn equivariant_holonomy_of_the_orbit_is_the_moment_value() {
        let conn = monopole(1);
        let g = GroupSpec::so3();
        let act = Action::So3OnSphere;
        let lambda = 1.0 / (4.0 * PI);
        let mu = MomentMap::scaled_height(lambda);
        // base at colatitude 0.9 from the vertical axis
        let base = Point::sphere_chart(0.9, 0.4);
        let x = AlgebraElement::new(&g, vec![0.0, 0.0, TWO_PI]).unwrap();
        let act2 = act;
        let x2 = x.clone();
        let gamma = Curve::new(move |s| act2.orbit_point(&x2, &base, s).unwrap());
        let h = equivariant_holonomy(&conn, &act, &g, &mu, &x, &gamma).unwrap();
        let expected = ModOne::new(lambda * TWO_PI * (0.9f64).cos());
        assert!(h.approx_eq(expected, 1e-7), "got {h}, want {expected}");
    }

    #[test]
    fn equivariant_holonomy_at_zero_is_ordinary() {
        let conn = monopole(1);
        let g = GroupSpec::so3();
        let act = Action::So3OnSphere;
        let mu = MomentMap::scaled_height(1.0 / (4.0 * PI));
        let lp = latitude_loop(1.0).unwrap();
        let x = AlgebraElement::zero(&g);
        let h = equivariant_holonomy(&conn, &act, &g, &mu, &x, &lp.curve).unwrap();
        let ordinary = holonomy(&conn, &lp).unwrap();
        assert!(h.approx_eq(ordinary, 1e-7));
    }

    #[test]
    fn endpoint_mismatch_is_rejected() {
        let conn = monopole(1);
        let g = GroupSpec::so3();
        let act = Action::So3OnSphere;
        let mu = MomentMap::scaled_height(1.0 / (4.0 * PI));
        let x = AlgebraElement::new(&g, vec![0.0, 0.0, PI]).unwrap(); // half turn
        let gamma = Curve::new(|t| Point::sphere_chart(1.0, 0.1 * t));
        let r = equivariant_holonomy(&conn, &act, &g, &mu, &x, &gamma);
        assert!(matches!(r, Err(Error::EndpointMismatch { .. })));
    }

    #[test]
    fn moment_minus_orbit_holonomy_is_base_point_free() {
        // μ_X(x) - hol(orbit through x) is the same for every base point;
        // for the unit monopole and a full-turn generator it is 1/2
        let conn = monopole(1);
        let g = GroupSpec::so3();
        let act = Action::So3OnSphere;
        let lambda = 1.0 / (4.0 * PI);
        let mu = MomentMap::scaled_height(lambda);
        let x = AlgebraElement::new(&g, vec![0.0, 0.0, TWO_PI]).unwrap();
        for colat in [0.3, 1.0, FRAC_PI_2, 2.4] {
            let base = Point::sphere_chart(colat, 1.3);
            let orbit = orbit_curve(&act, &g, &base, &x).unwrap().closed().unwrap();
            let hol = holonomy(&conn, &orbit).unwrap();
            let delta = ModOne::new(mu.eval(&act, &x, &base).unwrap()).sub(hol);
            assert!(
                delta.approx_eq(ModOne::new(0.5), 1e-7),
                "colat {colat}: delta {delta}"
            );
        }
    }
}
