use super::logmath::{acosh_from_ln, acosh_one_plus, ln_add_exp, ln_cosh, ln_sinh};
use super::{hyp_distance, Isometry, PlanePoint};
use crate::error::{domain, GeomError, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, LN_2};

/// Shortest side length accepted by the solver.
pub const MIN_SIDE: f64 = 1e-8;
/// Longest side length accepted by the solver.
pub const MAX_SIDE: f64 = 700.0;

/// Sides of a right-angled hexagon in counterclockwise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A = 0,
    Z = 1,
    X = 2,
    Y = 3,
    B = 4,
    W = 5,
}

impl Side {
    pub const ALL: [Side; 6] = [Side::A, Side::Z, Side::X, Side::Y, Side::B, Side::W];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Side> {
        Side::ALL.get(i).copied()
    }
}

/// A right-angled hexagon with sides `a, z, x, y, b, w` read counterclockwise.
///
/// The embedding puts vertex 0 (between `w` and `a`) at `i`, with side `a`
/// running up the imaginary axis and the interior on the left of each side.
/// Side `k` runs from vertex `k` to vertex `k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hexagon {
    sides: [f64; 6],
    vertices: [PlanePoint; 6],
    frames: [Isometry; 6],
    centered: [Isometry; 6],
    closure: Isometry,
}

impl Hexagon {
    pub fn sides(&self) -> [f64; 6] {
        self.sides
    }

    pub fn side(&self, s: Side) -> f64 {
        self.sides[s.index()]
    }

    pub fn a(&self) -> f64 {
        self.sides[0]
    }
    pub fn z(&self) -> f64 {
        self.sides[1]
    }
    pub fn x(&self) -> f64 {
        self.sides[2]
    }
    pub fn y(&self) -> f64 {
        self.sides[3]
    }
    pub fn b(&self) -> f64 {
        self.sides[4]
    }
    pub fn w(&self) -> f64 {
        self.sides[5]
    }

    pub fn vertices(&self) -> [PlanePoint; 6] {
        self.vertices
    }

    /// Frame at the start vertex of side `k`, pointing along the side.
    pub fn frame(&self, k: usize) -> Isometry {
        self.frames[k % 6]
    }

    /// Frame at the start of side `k` in a second embedding whose base point
    /// is the midpoint of the longest side. Long thin hexagons have frames with
    /// much smaller entries there than in the canonical embedding.
    pub fn centered_frame(&self, k: usize) -> Isometry {
        self.centered[k % 6]
    }

    /// Distance by which the walk around all six sides misses its start.
    pub fn closure_error(&self) -> f64 {
        hyp_distance(self.closure.position(), PlanePoint::origin()).unwrap_or(f64::INFINITY)
    }

    /// The walked frame after six sides and six turns, starting from the
    /// midpoint of the longest side; the identity (up to sign) when the
    /// hexagon closes up.
    pub fn closing_frame(&self) -> Isometry {
        self.closure
    }

    pub fn embedding_is_finite(&self) -> bool {
        self.frames.iter().all(Isometry::is_finite)
    }

    /// Point at arclength `s` from the start vertex of side `k`.
    pub fn point_on_side(&self, k: usize, s: f64) -> PlanePoint {
        self.frames[k % 6].advance(s).position()
    }

    /// Length of the common perpendicular between side `k` and the opposite
    /// side `k + 3`, from the right-angled pentagon rule.
    pub fn orthogeodesic(&self, k: usize) -> f64 {
        let s = |j: isize| self.sides[(k as isize + j).rem_euclid(6) as usize];
        acosh_from_ln(ln_sinh(s(-1)) + ln_sinh(s(-2)))
    }

    /// Same perpendicular, computed through the pentagon on the other side.
    pub fn orthogeodesic_other_way(&self, k: usize) -> f64 {
        let s = |j: isize| self.sides[(k as isize + j).rem_euclid(6) as usize];
        acosh_from_ln(ln_sinh(s(1)) + ln_sinh(s(2)))
    }

    /// Arclength from the start vertex of side `k` to the foot of the common
    /// perpendicular with the opposite side.
    pub fn orthogeodesic_foot(&self, k: usize) -> f64 {
        let s = |j: isize| self.sides[(k as isize + j).rem_euclid(6) as usize];
        let h = self.orthogeodesic(k);
        (ln_cosh(s(-2)) - ln_sinh(h)).exp().asinh()
    }
}

fn check_side(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v < MIN_SIDE {
        return domain(format!("side {name} = {v} must be at least {MIN_SIDE}"));
    }
    if v > MAX_SIDE {
        return Err(GeomError::Range(format!(
            "side {name} = {v} exceeds {MAX_SIDE}"
        )));
    }
    Ok(())
}

/// Side opposite `r` in a right-angled hexagon whose alternate sides are
/// `p, r, q`: `cosh s = (cosh r + cosh p cosh q) / (sinh p sinh q)`.
///
/// Uses `cosh s - 1 = (cosh r + cosh(p - q)) / (sinh p sinh q)` in log form.
fn opposite_side(r: f64, p: f64, q: f64) -> f64 {
    let ln_m = ln_add_exp(ln_cosh(r), ln_cosh(p - q)) - ln_sinh(p) - ln_sinh(q);
    acosh_one_plus(ln_m)
}

/// Solves the right-angled hexagon with alternate sides `a`, `x`, `b`.
pub fn solve_hexagon(a: f64, b: f64, x: f64) -> Result<Hexagon> {
    check_side("a", a)?;
    check_side("b", b)?;
    check_side("x", x)?;
    let w = opposite_side(x, a, b);
    let y = opposite_side(a, b, x);
    let z = opposite_side(b, a, x);
    let sides = [a, z, x, y, b, w];

    let mut frames = [Isometry::IDENTITY; 6];
    let mut vertices = [PlanePoint::origin(); 6];
    let mut g = Isometry::IDENTITY;
    for k in 0..6 {
        frames[k] = g;
        vertices[k] = g.position();
        g = g.advance(sides[k]).turn(FRAC_PI_2);
    }
    // rounding grows with the distance walked from the start, so the check
    // starts halfway along the longest side
    let long = (0..6).max_by(|&i, &j| sides[i].total_cmp(&sides[j])).unwrap_or(0);
    let mut centered = [Isometry::IDENTITY; 6];
    let start = Isometry::IDENTITY.advance(-sides[long] / 2.0);
    let mut g = start;
    for k in 0..6 {
        let side = (long + k) % 6;
        centered[side] = g;
        g = g.advance(sides[side]).turn(FRAC_PI_2);
    }
    Ok(Hexagon {
        sides,
        vertices,
        frames,
        centered,
        closure: g.advance(sides[long] / 2.0),
    })
}

/// A geodesic segment between two sides of a hexagon; `lambda` and `mu` are
/// fractions of arclength measured from each side's start vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordSpec {
    pub side_from: usize,
    pub side_to: usize,
    pub lambda: f64,
    pub mu: f64,
}

impl ChordSpec {
    pub fn new(side_from: usize, side_to: usize, lambda: f64, mu: f64) -> Result<Self> {
        let spec = Self {
            side_from,
            side_to,
            lambda,
            mu,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.side_from > 5 || self.side_to > 5 {
            return domain("chord side index must be in 0..=5");
        }
        if self.side_from == self.side_to {
            return domain("chord must join two different sides");
        }
        if !(0.0..=1.0).contains(&self.lambda) || !(0.0..=1.0).contains(&self.mu) {
            return domain("chord fractions must lie in [0, 1]");
        }
        Ok(())
    }
}

pub fn chord_length(h: &Hexagon, c: &ChordSpec) -> Result<f64> {
    c.validate()?;
    if !h.embedding_is_finite() {
        return Err(GeomError::Range("hexagon embedding overflowed".into()));
    }
    let p = h.point_on_side(c.side_from, c.lambda * h.sides[c.side_from]);
    let q = h.point_on_side(c.side_to, c.mu * h.sides[c.side_to]);
    if !(p.v > 0.0 && q.v > 0.0 && p.u.is_finite() && q.u.is_finite()) {
        return Err(GeomError::Range("chord endpoint left the model".into()));
    }
    hyp_distance(p, q)
}

/// Derivatives of the dependent sides with respect to `x`, with `a`, `b` fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HexagonDerivatives {
    pub dy_dx: f64,
    pub dw_dx: f64,
    pub dz_dx: f64,
}

pub fn hexagon_derivatives(a: f64, b: f64, x: f64) -> Result<HexagonDerivatives> {
    let h = solve_hexagon(a, b, x)?;
    let coth = |t: f64| 1.0 / t.tanh();
    Ok(HexagonDerivatives {
        dy_dx: -coth(h.z()) / x.sinh(),
        dw_dx: 1.0 / (a.sinh() * h.z().sinh()),
        dz_dx: -coth(h.y()) / x.sinh(),
    })
}

/// Central finite difference of a chord length in `x`, holding `a`, `b`,
/// the chord's sides and fractions fixed.
pub fn chord_dx(a: f64, b: f64, x: f64, c: &ChordSpec, step: f64) -> Result<f64> {
    c.validate()?;
    if !(step > 0.0) || x - step <= 0.0 {
        return domain("chord_dx needs step > 0 and x - step > 0");
    }
    let hi = chord_length(&solve_hexagon(a, b, x + step)?, c)?;
    let lo = chord_length(&solve_hexagon(a, b, x - step)?, c)?;
    Ok((hi - lo) / (2.0 * step))
}

/// Closed-form upper bounds for `w` and for the `a`-to-`y` perpendicular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prop51Bounds {
    pub w_bound: f64,
    pub h_bound1: f64,
    pub h_bound2: f64,
}

impl Prop51Bounds {
    pub fn h_bound(&self) -> f64 {
        self.h_bound1.min(self.h_bound2)
    }
}

pub fn prop51_bounds(a: f64, b: f64, x: f64) -> Result<Prop51Bounds> {
    for (name, v) in [("a", a), ("b", b), ("x", x)] {
        if !(v > 0.0) || !v.is_finite() {
            return domain(format!("{name} = {v} must be positive"));
        }
    }
    Ok(Prop51Bounds {
        w_bound: 1.0 / a + 1.0 / b + x + 2.0 * LN_2,
        h_bound1: 1.0 / a + 1.0 / b + b + x + LN_2,
        h_bound2: 1.0 / a + 0.5 * (1.0 / b + 1.0 / x) + b + x + 2.0 * LN_2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp2::hyp_distance;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    /// Residuals of the three cyclic cosine rules.
    fn cosine_residuals(h: &Hexagon) -> [f64; 3] {
        let [a, z, x, y, b, w] = h.sides();
        [
            rel(w.cosh() * a.sinh() * b.sinh(), x.cosh() + a.cosh() * b.cosh()),
            rel(y.cosh() * b.sinh() * x.sinh(), a.cosh() + b.cosh() * x.cosh()),
            rel(z.cosh() * a.sinh() * x.sinh(), b.cosh() + a.cosh() * x.cosh()),
        ]
    }

    #[test]
    fn regular_hexagon() {
        let s = 2.0f64.acosh();
        let h = solve_hexagon(s, s, s).unwrap();
        for side in h.sides() {
            assert!((side - s).abs() < 1e-12, "{side}");
        }
    }

    #[test]
    fn unit_hexagon_closed_form() {
        let h = solve_hexagon(1.0, 1.0, 1.0).unwrap();
        let c1 = 1.0f64.cosh();
        let expect = ((c1 + c1 * c1) / 1.0f64.sinh().powi(2)).acosh();
        for v in [h.w(), h.y(), h.z()] {
            assert!(rel(v, expect) < 1e-13);
        }
        // embedding side lengths agree with the solved values
        let verts = h.vertices();
        for k in 0..6 {
            let d = hyp_distance(verts[k], verts[(k + 1) % 6]).unwrap();
            assert!(rel(d, h.sides()[k]) < 1e-10);
        }
    }

    #[test]
    fn asymmetric_hexagon_closes_and_satisfies_cosine_rules() {
        let h = solve_hexagon(0.5, 2.0, 1.0).unwrap();
        assert!(h.closure_error() < 1e-9);
        for r in cosine_residuals(&h) {
            assert!(r < 1e-9, "{r}");
        }
    }

    #[test]
    fn right_angles_in_embedding() {
        // Turning by pi/2 at each vertex closes the frame up to sign.
        let h = solve_hexagon(0.7, 1.9, 0.3).unwrap();
        let m = h.closing_frame().entries();
        assert!((m[0].abs() - 1.0).abs() < 1e-9 && m[1].abs() < 1e-9);
        assert!(m[2].abs() < 1e-9 && (m[3].abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(solve_hexagon(0.0, 1.0, 1.0), Err(GeomError::Domain(_))));
        assert!(matches!(solve_hexagon(1e-9, 1.0, 1.0), Err(GeomError::Domain(_))));
        assert!(matches!(solve_hexagon(f64::NAN, 1.0, 1.0), Err(GeomError::Domain(_))));
        assert!(matches!(solve_hexagon(1.0, 701.0, 1.0), Err(GeomError::Range(_))));
    }

    #[test]
    fn long_sides_stay_accurate_in_log_domain() {
        let h = solve_hexagon(600.0, 650.0, 690.0).unwrap();
        // cosh w sinh a sinh b = cosh x + cosh a cosh b, compared in logs
        let lhs = ln_cosh(h.w()) + ln_sinh(600.0) + ln_sinh(650.0);
        let rhs = ln_add_exp(ln_cosh(690.0), ln_cosh(600.0) + ln_cosh(650.0));
        assert!((lhs - rhs).abs() < 1e-9 * rhs.abs());
        assert!(h.sides().iter().all(|s| s.is_finite() && *s > 0.0));
    }

    #[test]
    fn pentagon_rule_both_ways() {
        for &(a, b, x) in &[(1.0, 1.0, 1.0), (0.3, 2.5, 0.9), (4.0, 0.2, 3.3)] {
            let h = solve_hexagon(a, b, x).unwrap();
            for k in 0..6 {
                assert!(rel(h.orthogeodesic(k), h.orthogeodesic_other_way(k)) < 1e-9);
            }
            let ortho = h.orthogeodesic(0);
            assert!(rel(ortho.cosh(), h.b().sinh() * h.w().sinh()) < 1e-12);
        }
    }

    /// Brute-force minimum of the distance between two sides by nested
    /// golden-section search over both arclength parameters.
    fn min_side_distance(h: &Hexagon, i: usize, j: usize) -> (f64, f64, f64) {
        let golden = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64| {
            let g = (5f64.sqrt() - 1.0) / 2.0;
            let (mut lo, mut hi) = (lo, hi);
            for _ in 0..120 {
                let m1 = hi - g * (hi - lo);
                let m2 = lo + g * (hi - lo);
                if f(m1) < f(m2) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            0.5 * (lo + hi)
        };
        let li = h.sides()[i];
        let lj = h.sides()[j];
        let inner = |s: f64| {
            let p = h.point_on_side(i, s);
            let t = golden(&|t| hyp_distance(p, h.point_on_side(j, t)).unwrap(), 0.0, lj);
            (t, hyp_distance(p, h.point_on_side(j, t)).unwrap())
        };
        let s = golden(&|s| inner(s).1, 0.0, li);
        let (t, d) = inner(s);
        (s, t, d)
    }

    #[test]
    fn orthogeodesic_matches_brute_force_minimum() {
        for &(a, b, x) in &[(1.0, 1.0, 1.0), (0.5, 2.0, 1.0), (2.0, 0.7, 0.4)] {
            let h = solve_hexagon(a, b, x).unwrap();
            for k in 0..3 {
                let (s, _, d) = min_side_distance(&h, k, k + 3);
                assert!(rel(d, h.orthogeodesic(k)) < 1e-7, "k={k} {d}");
                assert!((s - h.orthogeodesic_foot(k)).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn chord_examples() {
        let h = solve_hexagon(1.0, 1.0, 1.0).unwrap();
        // adjacent sides at the common vertex
        let c = ChordSpec::new(0, 1, 1.0, 0.0).unwrap();
        assert!(chord_length(&h, &c).unwrap() < 1e-12);
        // a-side to y-side at the feet of the common perpendicular
        let lam = h.orthogeodesic_foot(0) / h.a();
        let mu = h.orthogeodesic_foot(3) / h.y();
        // the foot on y is measured from y's start vertex, seen from the other side
        let c = ChordSpec::new(0, 3, lam, 1.0 - mu).unwrap();
        let s = chord_length(&h, &c).unwrap();
        assert!(rel(s.cosh(), h.b().sinh() * h.w().sinh()) < 1e-9, "{s}");
    }

    #[test]
    fn regular_hexagon_midpoint_chord_is_perpendicular() {
        let s = 2.0f64.acosh();
        let h = solve_hexagon(s, s, s).unwrap();
        let c = ChordSpec::new(0, 3, 0.5, 0.5).unwrap();
        let len = chord_length(&h, &c).unwrap();
        // perpendicular at both midpoints means it is the orthogeodesic
        assert!(rel(len, h.orthogeodesic(0)) < 1e-9);
        // nearby positions are strictly longer
        for (l, m) in [(0.49, 0.5), (0.5, 0.51), (0.45, 0.55)] {
            let c = ChordSpec::new(0, 3, l, m).unwrap();
            assert!(chord_length(&h, &c).unwrap() > len);
        }
    }

    #[test]
    fn chord_spec_rejects_same_side() {
        assert!(ChordSpec::new(2, 2, 0.5, 0.5).is_err());
        assert!(ChordSpec::new(0, 6, 0.5, 0.5).is_err());
        assert!(ChordSpec::new(0, 1, 1.5, 0.5).is_err());
        let bad = ChordSpec { side_from: 2, side_to: 2, lambda: 0.5, mu: 0.5 };
        assert!(chord_dx(1.0, 1.0, 1.0, &bad, 1e-5).is_err());
    }

    #[test]
    fn derivative_closed_forms_match_finite_differences() {
        let (a, b, x) = (1.0, 1.0, 1.0);
        let d = hexagon_derivatives(a, b, x).unwrap();
        let h = solve_hexagon(a, b, x).unwrap();
        assert!(rel(d.dy_dx, -(1.0 / h.z().tanh()) / 1.0f64.sinh()) < 1e-15);
        let step = 1e-6;
        let hi = solve_hexagon(a, b, x + step).unwrap();
        let lo = solve_hexagon(a, b, x - step).unwrap();
        let fd = |f: fn(&Hexagon) -> f64| (f(&hi) - f(&lo)) / (2.0 * step);
        assert!(rel(d.dy_dx, fd(Hexagon::y)) < 1e-6);
        assert!(rel(d.dw_dx, fd(Hexagon::w)) < 1e-6);
        assert!(rel(d.dz_dx, fd(Hexagon::z)) < 1e-6);
        assert!(d.dy_dx < 0.0 && d.dw_dx > 0.0 && d.dw_dx < 1.0);
        assert!(d.dy_dx.abs() < 1.0 / x.tanh());
    }

    #[test]
    fn adjacent_chord_derivative_below_coth() {
        let c = ChordSpec::new(2, 3, 0.5, 0.5).unwrap();
        let d = chord_dx(1.0, 1.0, 1.0, &c, 1e-5).unwrap();
        assert!(d.abs() < 1.0 / 1.0f64.tanh());
        let sym = ChordSpec::new(2, 5, 0.5, 0.5).unwrap();
        let d = chord_dx(1.3, 1.3, 0.8, &sym, 1e-5).unwrap();
        assert!(d.abs() <= 4.0 / 0.8f64.tanh());
    }

    #[test]
    fn prop51_examples() {
        let p = prop51_bounds(1.0, 1.0, 1.0).unwrap();
        assert!((p.w_bound - (3.0 + 2.0 * LN_2)).abs() < 1e-15);
        for &(a, b, x) in &[(0.1, 0.1, 5.0), (5.0, 5.0, 0.1), (1.0, 3.0, 2.0)] {
            let h = solve_hexagon(a, b, x).unwrap();
            let p = prop51_bounds(a, b, x).unwrap();
            assert!(h.w() <= p.w_bound);
            assert!(h.orthogeodesic(0) <= p.h_bound());
        }
        assert!(prop51_bounds(0.0, 1.0, 1.0).is_err());
    }
}
