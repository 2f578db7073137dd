//! Real numbers modulo the integers.
//!
//! Every holonomy and obstruction value in this crate lives in ℝ/ℤ. The
//! additive exponent is stored (the phase is `exp(2πi·value)`), never the
//! complex number itself.

use serde::{Deserialize, Serialize};

/// Half-width of the tie band around 1/2 used by [`ModOne::lift`].
const LIFT_TIE: f64 = 1e-9;

/// A real number modulo ℤ, stored as its representative in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct ModOne(f64);

impl ModOne {
    pub const ZERO: ModOne = ModOne(0.0);

    /// Wrap an arbitrary real into `[0, 1)`.
    pub fn new(x: f64) -> Self {
        let mut v = x.rem_euclid(1.0);
        // rem_euclid can round up to exactly 1.0 for tiny negative inputs
        if v >= 1.0 {
            v -= 1.0;
        }
        ModOne(v)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn add(self, other: ModOne) -> ModOne {
        ModOne::new(self.0 + other.0)
    }

    pub fn neg(self) -> ModOne {
        ModOne::new(-self.0)
    }

    pub fn sub(self, other: ModOne) -> ModOne {
        self.add(other.neg())
    }

    /// Multiply by an integer (the only scaling that descends to ℝ/ℤ).
    pub fn scale(self, n: i64) -> ModOne {
        ModOne::new(self.0 * n as f64)
    }

    /// Wrap-around distance: `min(d, 1 - d)` for `d = |a - b| mod 1`.
    pub fn distance(self, other: ModOne) -> f64 {
        let d = (self.0 - other.0).rem_euclid(1.0);
        d.min(1.0 - d)
    }

    /// Distance to 0 in the circle metric.
    pub fn distance_to_zero(self) -> f64 {
        self.distance(ModOne::ZERO)
    }

    pub fn approx_eq(self, other: ModOne, tol: f64) -> bool {
        self.distance(other) < tol
    }

    pub fn is_zero(self, tol: f64) -> bool {
        self.distance_to_zero() < tol
    }

    /// Smallest-magnitude real representative, in `(-1/2, 1/2]`.
    ///
    /// Values within [`LIFT_TIE`] of 1/2 resolve to +1/2 so that a half-integer
    /// obstruction always lifts to the positive side regardless of rounding.
    pub fn lift(self) -> f64 {
        if self.0 > 0.5 + LIFT_TIE {
            self.0 - 1.0
        } else {
            self.0
        }
    }
}

impl From<f64> for ModOne {
    fn from(x: f64) -> Self {
        ModOne::new(x)
    }
}

impl From<ModOne> for f64 {
    fn from(m: ModOne) -> f64 {
        m.value()
    }
}

impl std::fmt::Display for ModOne {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.9}", self.0)
    }
}
