//! Moment maps of the catalog, linear in the algebra argument.

use super::{Action, Point};
use crate::error::{Error, Result};
use crate::lie::AlgebraElement;
use std::sync::Arc;

type MomentFn = Arc<dyn Fn(&AlgebraElement, &Point) -> f64 + Send + Sync>;

/// A moment map `X ↦ μ_X ∈ Ω⁰(M)`.
#[derive(Clone)]
pub enum MomentMap {
    /// `μ_X(x) = λ·⟨rotation vector of X, x⟩` on the sphere. This is the
    /// Hamiltonian of the rotation generated by `X` against `λ·vol`.
    ScaledHeight { lambda: f64 },
    /// `μ_X(x) = c·X`, constant in the point. Rank-1 algebras only.
    ConstantRate { c: f64 },
    /// A base moment map shifted by a linear functional on the algebra,
    /// given by its coordinates in the dual basis.
    Shifted { base: Box<MomentMap>, shift: Vec<f64> },
    /// Pointwise sum (the moment map of a tensor product).
    Sum { left: Box<MomentMap>, right: Box<MomentMap> },
    /// Scalar multiple (the moment map of a tensor power).
    Scaled { base: Box<MomentMap>, factor: f64 },
    /// Arbitrary evaluator, used by tests to inject defects.
    Custom(MomentFn),
}

impl MomentMap {
    pub fn scaled_height(lambda: f64) -> Self {
        MomentMap::ScaledHeight { lambda }
    }

    pub fn constant_rate(c: f64) -> Self {
        MomentMap::ConstantRate { c }
    }

    pub fn custom(f: impl Fn(&AlgebraElement, &Point) -> f64 + Send + Sync + 'static) -> Self {
        MomentMap::Custom(Arc::new(f))
    }

    pub fn shifted(self, shift: Vec<f64>) -> Self {
        MomentMap::Shifted { base: Box::new(self), shift }
    }

    pub fn sum(self, other: MomentMap) -> Self {
        MomentMap::Sum { left: Box::new(self), right: Box::new(other) }
    }

    pub fn scaled(self, factor: f64) -> Self {
        MomentMap::Scaled { base: Box::new(self), factor }
    }

    /// Evaluate `μ_X(p)`. The action supplies the identification of algebra
    /// elements with rotation vectors where one is needed.
    pub fn eval(&self, action: &Action, x: &AlgebraElement, p: &Point) -> Result<f64> {
        match self {
            MomentMap::ScaledHeight { lambda } => {
                let v = action
                    .rotation_vector(x)?
                    .ok_or_else(|| Error::Precondition("height moment map needs a sphere rotation action".into()))?;
                Ok(lambda * v.dot(&p.as_sphere()?))
            }
            MomentMap::ConstantRate { c } => Ok(c * x.scalar()?),
            MomentMap::Shifted { base, shift } => {
                if shift.len() != x.coords.len() {
                    return Err(Error::AlgebraDimension { expected: x.coords.len(), got: shift.len() });
                }
                let linear: f64 = shift.iter().zip(&x.coords).map(|(b, c)| b * c).sum();
                Ok(base.eval(action, x, p)? + linear)
            }
            MomentMap::Sum { left, right } => Ok(left.eval(action, x, p)? + right.eval(action, x, p)?),
            MomentMap::Scaled { base, factor } => Ok(factor * base.eval(action, x, p)?),
            MomentMap::Custom(f) => Ok(f(x, p)),
        }
    }
}

impl std::fmt::Debug for MomentMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MomentMap::ScaledHeight { lambda } => write!(f, "ScaledHeight({lambda})"),
            MomentMap::ConstantRate { c } => write!(f, "ConstantRate({c})"),
            MomentMap::Shifted { base, shift } => write!(f, "Shifted({base:?}, {shift:?})"),
            MomentMap::Sum { left, right } => write!(f, "Sum({left:?}, {right:?})"),
            MomentMap::Scaled { base, factor } => write!(f, "Scaled({base:?}, {factor})"),
            MomentMap::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}
