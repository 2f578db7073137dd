//! Parametrized curves, closed loops with caps, homology classes of torus
//! loops, and orbit curves of one-parameter subgroups.

use crate::error::{Error, Result};
use crate::geometry::{Action, Point, Surface, SurfaceKind};
use crate::lie::{self, AlgebraElement, GroupElement, GroupSpec, TWO_PI};
use std::f64::consts::PI;
use std::sync::Arc;

/// Tolerance for a loop to count as closed.
pub const CLOSURE_TOL: f64 = 1e-9;

type CurveFn = Arc<dyn Fn(f64) -> Point + Send + Sync>;

/// A piecewise-smooth curve `[0, 1] → M`.
///
/// `breaks` lists interior parameter values where smoothness may fail
/// (concatenation points); integrators split there.
#[derive(Clone)]
pub struct Curve {
    f: CurveFn,
    breaks: Vec<f64>,
}

impl Curve {
    pub fn new(f: impl Fn(f64) -> Point + Send + Sync + 'static) -> Self {
        Curve { f: Arc::new(f), breaks: vec![] }
    }

    pub fn constant(p: Point) -> Self {
        Curve::new(move |_| p)
    }

    pub fn at(&self, t: f64) -> Point {
        (self.f)(t)
    }

    pub fn start(&self) -> Point {
        self.at(0.0)
    }

    pub fn end(&self) -> Point {
        self.at(1.0)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    /// The reversed curve `t ↦ γ(1-t)`.
    pub fn reverse(&self) -> Curve {
        let f = self.f.clone();
        let mut breaks: Vec<f64> = self.breaks.iter().map(|b| 1.0 - b).collect();
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Curve { f: Arc::new(move |t| f(1.0 - t)), breaks }
    }

    /// Concatenation, first this curve then `other`; endpoints must meet.
    pub fn concat(&self, other: &Curve) -> Result<Curve> {
        let gap = self.end().distance(&other.start());
        if gap > CLOSURE_TOL {
            return Err(Error::EndpointMismatch { gap });
        }
        let (f, g) = (self.f.clone(), other.f.clone());
        let mut breaks = vec![0.5];
        breaks.extend(self.breaks.iter().map(|b| b / 2.0));
        breaks.extend(other.breaks.iter().map(|b| 0.5 + b / 2.0));
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Curve {
            f: Arc::new(move |t| if t <= 0.5 { f(2.0 * t) } else { g(2.0 * t - 1.0) }),
            breaks,
        })
    }

    /// The pointwise translate `φ·γ`.
    pub fn acted(&self, action: Action, phi: GroupElement) -> Curve {
        let f = self.f.clone();
        Curve {
            f: Arc::new(move |t| action.apply(&phi, &f(t)).expect("action matches the curve's surface")),
            breaks: self.breaks.clone(),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.start().distance(&self.end()) < CLOSURE_TOL
    }

    /// Whether the curve never leaves a ball of radius `tol`.
    pub fn is_constant(&self, tol: f64) -> bool {
        let p0 = self.start();
        (0..=32).all(|i| self.at(i as f64 / 32.0).distance(&p0) <= tol)
    }

    pub fn sample(&self, n: usize) -> Vec<Point> {
        (0..=n).map(|i| self.at(i as f64 / n as f64)).collect()
    }
}

impl std::fmt::Debug for Curve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Curve(start={:?}, end={:?}, breaks={:?})", self.start().coords(), self.end().coords(), self.breaks)
    }
}

/// A parametric surface patch whose σ=1 edge traces a loop.
///
/// `patch(σ, t)` maps the unit square into the surface; the loop is
/// `t ↦ patch(1, wrap(sign·t))`, so `sign` is the signed number of times the
/// loop runs around the patch boundary. The flux the patch contributes to a
/// holonomy is `sign` times the flux through the patch.
#[derive(Clone)]
pub struct Cap {
    patch: Arc<dyn Fn(f64, f64) -> Point + Send + Sync>,
    pub sign: i64,
}

impl Cap {
    pub fn new(patch: impl Fn(f64, f64) -> Point + Send + Sync + 'static, sign: i64) -> Self {
        Cap { patch: Arc::new(patch), sign }
    }

    pub fn at(&self, sigma: f64, t: f64) -> Point {
        (self.patch)(sigma, t)
    }

    /// Point of the boundary edge matching curve parameter `t`.
    pub fn boundary(&self, t: f64) -> Point {
        self.at(1.0, (self.sign as f64 * t).rem_euclid(1.0))
    }
}

impl std::fmt::Debug for Cap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cap(sign={})", self.sign)
    }
}

/// A closed loop, with whatever bounding or homological data is known.
#[derive(Clone, Debug)]
pub struct Loop {
    pub curve: Curve,
    pub cap: Option<Cap>,
    pub homology: Option<Vec<i64>>,
}

impl Loop {
    pub fn new(curve: Curve) -> Result<Self> {
        let gap = curve.start().distance(&curve.end());
        if gap > CLOSURE_TOL {
            return Err(Error::EndpointMismatch { gap });
        }
        // the sphere has no first homology, so the class is always known
        let homology = match curve.start() {
            Point::Sphere(_) => Some(vec![]),
            Point::Torus(_) => None,
        };
        Ok(Loop { curve, cap: None, homology })
    }

    /// Attach a cap; its boundary must trace the loop.
    pub fn with_cap(mut self, cap: Cap) -> Result<Self> {
        if cap.sign != 0 {
            let mut worst = 0.0f64;
            for i in 0..64 {
                let t = (i as f64 + 0.5) / 64.0;
                worst = worst.max(self.curve.at(t).distance(&cap.boundary(t)));
            }
            if worst > 1e-6 {
                return Err(Error::CapMismatch { deviation: worst });
            }
        }
        self.cap = Some(cap);
        Ok(self)
    }

    pub fn with_homology(mut self, h: Vec<i64>) -> Self {
        self.homology = Some(h);
        self
    }

    pub fn constant(p: Point) -> Self {
        let homology = match p {
            Point::Sphere(_) => vec![],
            Point::Torus(_) => vec![0, 0],
        };
        Loop { curve: Curve::constant(p), cap: None, homology: Some(homology) }
    }
}

/// Homology class of a closed curve: empty on the sphere, the pair of
/// winding numbers on the torus, read off by unwrapping angle increments.
pub fn homology_class(surface: &Surface, curve: &Curve) -> Result<Vec<i64>> {
    match surface.kind {
        SurfaceKind::Sphere2 => Ok(vec![]),
        SurfaceKind::Torus2 => {
            let mut samples = 4096usize;
            for attempt in 0..2 {
                let pts = curve.sample(samples);
                let mut total = [0.0f64; 2];
                let mut max_step = 0.0f64;
                for w in pts.windows(2) {
                    let a = w[0].as_torus()?;
                    let b = w[1].as_torus()?;
                    for (k, (x, y)) in [(a.x, b.x), (a.y, b.y)].into_iter().enumerate() {
                        let mut d = (y - x).rem_euclid(TWO_PI);
                        if d > PI {
                            d -= TWO_PI;
                        }
                        max_step = max_step.max(d.abs());
                        total[k] += d;
                    }
                }
                let winding: Vec<f64> = total.iter().map(|t| t / TWO_PI).collect();
                let rounded: Vec<i64> = winding.iter().map(|w| w.round() as i64).collect();
                let residual = winding
                    .iter()
                    .zip(&rounded)
                    .map(|(w, r)| (w - *r as f64).abs())
                    .fold(0.0, f64::max);
                if residual < 1e-6 && max_step < PI / 2.0 {
                    return Ok(rounded);
                }
                if attempt == 1 {
                    return Err(Error::HomologyResidual { residual });
                }
                samples *= 4;
            }
            unreachable!()
        }
    }
}

/// An orbit of a one-parameter subgroup: a loop with its natural bounding
/// data when the generator lies in `ker exp`, an open curve otherwise.
#[derive(Clone, Debug)]
pub enum Orbit {
    Closed(Loop),
    Open(Curve),
}

impl Orbit {
    pub fn curve(&self) -> &Curve {
        match self {
            Orbit::Closed(lp) => &lp.curve,
            Orbit::Open(c) => c,
        }
    }

    pub fn closed(self) -> Result<Loop> {
        match self {
            Orbit::Closed(lp) => Ok(lp),
            Orbit::Open(_) => Err(Error::Precondition("orbit is not closed".into())),
        }
    }
}

/// The orbit `s ↦ exp(sX)·x`.
///
/// For closed sphere orbits the polar cap on the rotation-vector side is
/// attached. The orbit runs clockwise as seen from that side, so the cap
/// enters with multiplicity minus the number of turns; this is the
/// orientation that makes moment-versus-holonomy differences independent of
/// the base point. Closed torus orbits get their homology class, computed
/// from the sampled curve.
pub fn orbit_curve(
    action: &Action,
    group: &GroupSpec,
    base: &Point,
    x_alg: &AlgebraElement,
) -> Result<Orbit> {
    let act = *action;
    let x_owned = x_alg.clone();
    let base_owned = *base;
    let curve = Curve::new(move |s| {
        act.orbit_point(&x_owned, &base_owned, s)
            .expect("orbit evaluation on the declared surface")
    });
    if !lie::in_ker_exp(group, x_alg, CLOSURE_TOL)? {
        return Ok(Orbit::Open(curve));
    }
    if curve.is_constant(1e-12) {
        return Ok(Orbit::Closed(Loop::constant(*base)));
    }
    let lp = Loop::new(curve)?;
    match action.surface_kind() {
        SurfaceKind::Sphere2 => {
            let v = action
                .rotation_vector(x_alg)?
                .ok_or(Error::Mismatch)?;
            let turns = (v.norm() / TWO_PI).round() as i64;
            let axis = v.normalize();
            let xs = base.as_sphere()?;
            let cos_alpha = xs.dot(&axis).clamp(-1.0, 1.0);
            let alpha = cos_alpha.acos();
            let e1 = (xs - cos_alpha * axis).normalize();
            let e2 = axis.cross(&e1);
            let patch = move |sigma: f64, t: f64| -> Point {
                let colat = sigma * alpha;
                let (s, c) = (colat.sin(), colat.cos());
                let ang = TWO_PI * t;
                Point::Sphere(s * (ang.cos() * e1 + ang.sin() * e2) + c * axis)
            };
            Ok(Orbit::Closed(lp.with_cap(Cap::new(patch, -turns))?))
        }
        SurfaceKind::Torus2 => {
            let surface = Surface::torus(64);
            let h = homology_class(&surface, &lp.curve)?;
            Ok(Orbit::Closed(lp.with_homology(h)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector3;

    fn circle_elem(t: f64) -> AlgebraElement {
        AlgebraElement::new(&GroupSpec::circle(), vec![t]).unwrap()
    }

    #[test]
    fn torus_cycles_have_the_expected_classes() {
        let s = Surface::torus(64);
        let a_circle = Curve::new(|t| Point::torus(TWO_PI * t, 0.3));
        assert_eq!(homology_class(&s, &a_circle).unwrap(), vec![1, 0]);
        let diag = Curve::new(|t| Point::torus(TWO_PI * 2.0 * t, -TWO_PI * t));
        assert_eq!(homology_class(&s, &diag).unwrap(), vec![2, -1]);
    }

    #[test]
    fn sphere_loops_have_empty_class() {
        let s = Surface::sphere(64);
        let eq = Curve::new(|t| Point::sphere((TWO_PI * t).cos(), (TWO_PI * t).sin(), 0.0));
        assert_eq!(homology_class(&s, &eq).unwrap(), Vec::<i64>::new());
    }

    #[test]
    fn torus_orbit_winds_with_the_generator() {
        let g = GroupSpec::circle();
        let base = Point::torus(0.2, 1.1);
        let orbit = orbit_curve(&Action::CircleOnTorus, &g, &base, &circle_elem(2.0 * TWO_PI)).unwrap();
        match orbit {
            Orbit::Closed(lp) => assert_eq!(lp.homology, Some(vec![2, 0])),
            _ => panic!("orbit should be closed"),
        }
    }

    #[test]
    fn non_kernel_generator_gives_open_orbit() {
        let g = GroupSpec::circle();
        let base = Point::torus(0.0, 0.0);
        let orbit = orbit_curve(&Action::CircleOnTorus, &g, &base, &circle_elem(1.0)).unwrap();
        assert!(matches!(orbit, Orbit::Open(_)));
    }

    #[test]
    fn zero_generator_gives_constant_orbit() {
        let g = GroupSpec::so3();
        let base = Point::sphere(0.0, 1.0, 0.0);
        let orbit =
            orbit_curve(&Action::So3OnSphere, &g, &base, &AlgebraElement::zero(&g)).unwrap();
        match orbit {
            Orbit::Closed(lp) => {
                assert!(lp.curve.is_constant(1e-15));
                assert_eq!(lp.homology, Some(vec![]));
            }
            _ => panic!("constant orbit should be closed"),
        }
    }

    #[test]
    fn sphere_orbit_cap_boundary_matches() {
        let g = GroupSpec::so3();
        let x = AlgebraElement::new(&g, vec![0.0, 0.0, TWO_PI]).unwrap();
        let base = Point::sphere(1.0, 0.0, 0.0);
        let orbit = orbit_curve(&Action::So3OnSphere, &g, &base, &x).unwrap();
        let lp = orbit.closed().unwrap();
        assert_eq!(lp.homology, Some(vec![]));
        let cap = lp.cap.expect("sphere orbit carries a cap");
        assert_eq!(cap.sign, -1);
        // boundary check is part of with_cap; verify the seam too
        assert!(cap.at(1.0, 0.0).distance(&cap.at(1.0, 1.0)) < 1e-12);
    }

    #[test]
    fn double_turn_orbit_has_multiplicity_two() {
        let g = GroupSpec::so3();
        let x = AlgebraElement::new(&g, vec![0.0, 0.0, 2.0 * TWO_PI]).unwrap();
        let base = Point::sphere(0.8, 0.0, 0.6);
        let lp = orbit_curve(&Action::So3OnSphere, &g, &base, &x).unwrap().closed().unwrap();
        assert_eq!(lp.cap.unwrap().sign, -2);
    }

    #[test]
    fn orbit_rotates_clockwise_about_its_axis() {
        // τ'(0) of the orbit of the vertical generator at (1,0,0) points in
        // -e₂: clockwise as seen from +e₃
        let g = GroupSpec::so3();
        let x = AlgebraElement::new(&g, vec![0.0, 0.0, 1.0]).unwrap();
        let base = Point::sphere(1.0, 0.0, 0.0);
        let orbit = orbit_curve(&Action::So3OnSphere, &g, &base, &x).unwrap();
        let h = 1e-6;
        let p = orbit.curve().at(h).as_sphere().unwrap();
        let vel = (p - Vector3::new(1.0, 0.0, 0.0)) / h;
        assert!(vel.y < -0.9, "velocity {vel:?}");
    }

    #[test]
    fn cap_mismatch_is_rejected() {
        let eq = Curve::new(|t| Point::sphere((TWO_PI * t).cos(), (TWO_PI * t).sin(), 0.0));
        let lp = Loop::new(eq).unwrap();
        // a patch whose boundary is a different latitude
        let bad = Cap::new(|sigma, t| Point::sphere_chart(sigma * 1.0, TWO_PI * t), 1);
        assert!(matches!(lp.with_cap(bad), Err(Error::CapMismatch { .. })));
    }

    #[test]
    fn concat_requires_matching_endpoints() {
        let a = Curve::new(|t| Point::torus(t, 0.0));
        let b = Curve::new(|t| Point::torus(5.0 + t, 0.0));
        assert!(a.concat(&b).is_err());
        let c = Curve::new(|t| Point::torus(1.0 + t, 0.0));
        let joined = a.concat(&c).unwrap();
        assert!(joined.at(0.25).distance(&Point::torus(0.5, 0.0)) < 1e-12);
        assert!(joined.at(0.75).distance(&Point::torus(1.5, 0.0)) < 1e-12);
        assert_eq!(joined.breaks(), &[0.5]);
    }
}
