//! Hyperbolic-plane primitives in the upper half-plane model, and the
//! right-angled hexagon solver built on them.

mod hexagon;
pub mod logmath;

pub use hexagon::{
    chord_dx, chord_length, hexagon_derivatives, prop51_bounds, solve_hexagon, ChordSpec,
    Hexagon, HexagonDerivatives, Prop51Bounds, Side, MAX_SIDE, MIN_SIDE,
};

use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};

/// A point `u + i v` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub u: f64,
    pub v: f64,
}

impl PlanePoint {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(v > 0.0) || !u.is_finite() || !v.is_finite() {
            return domain(format!("point ({u}, {v}) is not in the upper half-plane"));
        }
        Ok(Self { u, v })
    }

    /// The base point `i`.
    pub const fn origin() -> Self {
        Self { u: 0.0, v: 1.0 }
    }
}

/// Hyperbolic distance between two points of the upper half-plane.
///
/// Evaluated as `2 asinh(|p - q| / (2 sqrt(v_p v_q)))`, which is the same as
/// `cosh d = 1 + |p - q|^2 / (2 v_p v_q)` but keeps precision for nearby points.
pub fn hyp_distance(p: PlanePoint, q: PlanePoint) -> Result<f64> {
    if !(p.v > 0.0) || !(q.v > 0.0) {
        return domain("hyp_distance requires v > 0 for both points");
    }
    let du = p.u - q.u;
    let dv = p.v - q.v;
    let euclid = du.hypot(dv);
    Ok(2.0 * (euclid / (2.0 * (p.v * q.v).sqrt())).asinh())
}

/// A 2x2 real matrix; determinant +1 for isometries, -1 for reflections.
pub(crate) type Mat2 = [f64; 4];

pub(crate) fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

/// `ad - bc` with Kahan's fused multiply-add scheme, accurate relative to the
/// result even when the two products nearly cancel.
pub(crate) fn mat_det(x: &Mat2) -> f64 {
    let w = x[1] * x[2];
    let e = (-x[1]).mul_add(x[2], w);
    let f = x[0].mul_add(x[3], -w);
    f + e
}

/// Rescale so that `|det| = 1`. Drift below the rounding already present in
/// the entries is left alone; rescaling would only move that error around.
pub(crate) fn mat_normalize(x: &Mat2) -> Mat2 {
    let det = mat_det(x).abs();
    let floor = 4.0 * f64::EPSILON * x.iter().fold(0.0f64, |m, e| m.max(e.abs())).powi(2);
    if !(det > 0.0) || !det.is_finite() || (det - 1.0).abs() <= floor {
        return *x;
    }
    let s = det.sqrt();
    [x[0] / s, x[1] / s, x[2] / s, x[3] / s]
}

/// Orientation-preserving isometry of the upper half-plane, stored as a
/// matrix of `SL(2, R)`. The sign of the matrix is not significant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    entries: [f64; 4],
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        entries: [1.0, 0.0, 0.0, 1.0],
    };

    /// Builds an isometry from `[a, b, c, d]`, rescaling to determinant 1.
    pub fn from_entries(entries: [f64; 4]) -> Result<Self> {
        let det = mat_det(&entries);
        if !(det > 0.0) || !det.is_finite() {
            return domain(format!("matrix with determinant {det} is not an isometry"));
        }
        Ok(Self {
            entries: mat_normalize(&entries),
        })
    }

    pub(crate) fn from_raw(entries: Mat2) -> Self {
        Self {
            entries: mat_normalize(&entries),
        }
    }

    pub fn entries(&self) -> [f64; 4] {
        self.entries
    }

    /// Hyperbolic translation along the imaginary axis moving `i` to `e^s i`.
    pub fn translation(s: f64) -> Self {
        let h = (s / 2.0).exp();
        Self {
            entries: [h, 0.0, 0.0, 1.0 / h],
        }
    }

    /// Rotation about `i` turning tangent vectors counterclockwise by `theta`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self {
            entries: [c, s, -s, c],
        }
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry::from_raw(mat_mul(&self.entries, &other.entries))
    }

    pub fn inverse(&self) -> Isometry {
        let [a, b, c, d] = self.entries;
        Isometry {
            entries: [d, -b, -c, a],
        }
    }

    pub fn trace(&self) -> f64 {
        self.entries[0] + self.entries[3]
    }

    pub fn det(&self) -> f64 {
        mat_det(&self.entries)
    }

    pub fn apply(&self, p: PlanePoint) -> PlanePoint {
        let [a, b, c, d] = self.entries;
        let nr = a * p.u + b;
        let ni = a * p.v;
        let dr = c * p.u + d;
        let di = c * p.v;
        let den = dr * dr + di * di;
        PlanePoint {
            u: (nr * dr + ni * di) / den,
            v: p.v * mat_det(&self.entries) / den,
        }
    }

    /// Moves forward `s` along the geodesic this frame points along.
    pub fn advance(&self, s: f64) -> Isometry {
        self.compose(&Isometry::translation(s))
    }

    /// Turns the frame counterclockwise by `theta` in place.
    pub fn turn(&self, theta: f64) -> Isometry {
        self.compose(&Isometry::rotation(theta))
    }

    /// Position of the frame's base point, the image of `i`.
    pub fn position(&self) -> PlanePoint {
        self.apply(PlanePoint::origin())
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.is_finite())
    }
}
