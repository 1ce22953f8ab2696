use proptest::prelude::*;
use std::f64::consts::FRAC_PI_2;
use surfacelengths::hyp2::{
    chord_dx, chord_length, hexagon_derivatives, hyp_distance, prop51_bounds, solve_hexagon, ChordSpec, Isometry,
};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn side() -> impl Strategy<Value = f64> {
    0.05f64..20.0
}

fn moderate() -> impl Strategy<Value = f64> {
    0.1f64..5.0
}

const GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closure_and_cosine_rules(a in side(), b in side(), x in side()) {
        let h = solve_hexagon(a, b, x).unwrap();
        prop_assert!(h.closure_error() < 1e-9, "closure {}", h.closure_error());
        let [a, z, x, y, b, w] = h.sides();
        prop_assert!(rel(w.cosh() * a.sinh() * b.sinh(), x.cosh() + a.cosh() * b.cosh()) < 1e-9);
        prop_assert!(rel(y.cosh() * b.sinh() * x.sinh(), a.cosh() + b.cosh() * x.cosh()) < 1e-9);
        prop_assert!(rel(z.cosh() * a.sinh() * x.sinh(), b.cosh() + a.cosh() * x.cosh()) < 1e-9);
    }

    #[test]
    fn side_inequalities(a in moderate(), b in moderate(), x in moderate()) {
        let h = solve_hexagon(a, b, x).unwrap();
        let (x, z) = (h.x(), h.z());
        prop_assert!(x.cosh() > 1.0 / z.tanh());
        prop_assert!(x.sinh() * z.sinh() > 1.0);
        let bounds = prop51_bounds(a, b, x).unwrap();
        prop_assert!(h.w() <= bounds.w_bound);
        prop_assert!(h.orthogeodesic(0) <= bounds.h_bound());
    }

    #[test]
    fn derivatives_match_differences(a in moderate(), b in moderate(), x in moderate()) {
        let d = hexagon_derivatives(a, b, x).unwrap();
        let step = 1e-5;
        let hi = solve_hexagon(a, b, x + step).unwrap();
        let lo = solve_hexagon(a, b, x - step).unwrap();
        let fd = |f: fn(&surfacelengths::hyp2::Hexagon) -> f64| (f(&hi) - f(&lo)) / (2.0 * step);
        prop_assert!(rel(d.dy_dx, fd(|h| h.y())) < 1e-6);
        prop_assert!(rel(d.dw_dx, fd(|h| h.w())) < 1e-6);
        prop_assert!(rel(d.dz_dx, fd(|h| h.z())) < 1e-6);
        prop_assert!(d.dy_dx < 0.0 && d.dy_dx.abs() < 1.0 / x.tanh());
        prop_assert!(d.dw_dx > 0.0 && d.dw_dx < 1.0);
    }

    #[test]
    fn sliding_vertex_of_a_triangle(alpha in 0.05f64..3.09, dq in 0.1f64..4.0, dr in 0.1f64..4.0) {
        // p at the origin heading towards r; q at angle alpha from that ray
        let p = Isometry::IDENTITY;
        let q = p.turn(alpha).advance(dq).position();
        let eps = 1e-5;
        prop_assume!(dr > eps);
        let l = |t: f64| hyp_distance(p.advance(t).position(), q).unwrap();
        let fd = (l(eps) - l(-eps)) / (2.0 * eps);
        prop_assert!((fd + alpha.cos()).abs() < 1e-3, "fd {} cos {}", fd, alpha.cos());
    }

    #[test]
    fn two_right_angle_quadrilateral(c in 0.05f64..4.0, t in 0.05f64..4.0, e in 0.05f64..4.0) {
        let s = |t: f64| {
            let start = Isometry::IDENTITY;
            let end = start.advance(c).turn(FRAC_PI_2).advance(t).turn(FRAC_PI_2).advance(e);
            hyp_distance(start.position(), end.position()).unwrap()
        };
        let law = (-c.sinh() * e.sinh() + c.cosh() * e.cosh() * t.cosh()).acosh();
        prop_assert!(rel(s(t), law) < 1e-9);
        let step = 1e-5;
        let ds = (s(t + step) - s(t - step)) / (2.0 * step);
        prop_assert!(ds > -1e-3 && ds < 1.0 / (t / 2.0).tanh() + 1e-3, "dS/dt {}", ds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chord_derivative_bound(a in moderate(), b in moderate(), x in moderate()) {
        let bound = 4.0 / x.tanh() + 1e-3;
        for from in 0..6 {
            for to in 0..6 {
                if from == to {
                    continue;
                }
                for lambda in GRID {
                    for mu in GRID {
                        let c = ChordSpec::new(from, to, lambda, mu).unwrap();
                        let d = chord_dx(a, b, x, &c, 1e-5).unwrap();
                        prop_assert!(d.abs() <= bound, "{:?} dS/dx {} bound {}", c, d, bound);
                    }
                }
            }
        }
    }

    #[test]
    fn chords_are_lipschitz_in_their_parameters(a in moderate(), b in moderate(), x in moderate(), from in 0usize..6, to in 0usize..6) {
        prop_assume!(from != to);
        let h = solve_hexagon(a, b, x).unwrap();
        let len = h.sides()[from];
        let d = 1e-3;
        for lambda in [0.1, 0.4, 0.7] {
            let s0 = chord_length(&h, &ChordSpec::new(from, to, lambda, 0.5).unwrap()).unwrap();
            let s1 = chord_length(&h, &ChordSpec::new(from, to, lambda + d, 0.5).unwrap()).unwrap();
            prop_assert!((s1 - s0).abs() <= len * d * (1.0 + 1e-3));
        }
    }
}
