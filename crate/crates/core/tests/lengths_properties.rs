use proptest::prelude::*;
use surfacelengths::coords::{elementary_move_relation, DTVector, FNVector};
use surfacelengths::holonomy::{build_representation, curve_library, LibCurve, Representation};
use surfacelengths::lengths::{self, check_ineq_1_1, check_ineq_1_2, check_ineq_1_2_path, check_move};
use surfacelengths::surface::{standard_marking, SurfaceKind};

fn rep(g: u32, r: u32, fnv: FNVector) -> Representation {
    let m = standard_marking(SurfaceKind::new(g, r).unwrap()).unwrap();
    build_representation(&m, &fnv).unwrap()
}

fn len() -> impl Strategy<Value = f64> {
    (0.1f64.ln()..5f64.ln()).prop_map(f64::exp)
}

fn twist() -> impl Strategy<Value = f64> {
    -3.0f64..3.0
}

fn torus_metric() -> impl Strategy<Value = FNVector> {
    (len(), twist(), len()).prop_map(|(x, t, b)| FNVector::new(vec![[x, t]], vec![b]).unwrap())
}

fn sphere_metric() -> impl Strategy<Value = FNVector> {
    (len(), twist(), prop::array::uniform4(len()))
        .prop_map(|(x, t, b)| FNVector::new(vec![[x, t]], b.to_vec()).unwrap())
}

/// Library curves twisted up to six times and scaled up to four times.
fn closure(r: &Representation) -> Vec<LibCurve> {
    let mut out = Vec::new();
    for c in curve_library(&r.marking).unwrap() {
        for k in -6..=6 {
            if c.dt.pants[0] == [0, -k] {
                continue;
            }
            let t = c.twisted(r, 0, k).unwrap();
            for s in [1, 4] {
                out.push(t.scaled(r, s).unwrap());
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_below_upper_bound_torus(f in torus_metric()) {
        let r = rep(1, 1, f);
        for c in closure(&r) {
            let res = lengths::length(&r, &c).unwrap();
            prop_assert!(res.is_consistent(), "{} {:?}", c.dt, res);
        }
    }

    #[test]
    fn exact_below_upper_bound_sphere(f in sphere_metric()) {
        let r = rep(0, 4, f);
        for c in closure(&r) {
            if c.word.is_none() {
                continue;
            }
            let res = lengths::length(&r, &c).unwrap();
            prop_assert!(res.is_consistent(), "{} {:?}", c.dt, res);
        }
    }

    #[test]
    fn move_budgets(f in torus_metric(), g in sphere_metric(), x in 1i64..4, t in -6i64..=6) {
        let r = rep(1, 1, f);
        let target = DTVector::new(vec![[x + 1, t]], vec![0]);
        let rep1 = check_move(&r, &elementary_move_relation(&r.marking, 0, &target).unwrap()).unwrap();
        prop_assert!(rep1.passes(), "{:?}", rep1);

        let r = rep(0, 4, g);
        let target = DTVector::new(vec![[2, t]], vec![0; 4]);
        let rep2 = check_move(&r, &elementary_move_relation(&r.marking, 0, &target).unwrap()).unwrap();
        prop_assert!(rep2.passes(), "{:?}", rep2);
    }

    #[test]
    fn first_inequality(f in torus_metric(), g in sphere_metric()) {
        for r in [rep(1, 1, f), rep(0, 4, g)] {
            let lib: Vec<LibCurve> = closure(&r).into_iter().filter(|c| c.word.is_some()).step_by(3).collect();
            for a in &lib {
                for b in &lib {
                    let report = check_ineq_1_1(&r, a, b).unwrap();
                    prop_assert!(report.passes(), "{:?}", report);
                }
            }
        }
    }

    #[test]
    fn second_inequality(f1 in torus_metric(), f2 in torus_metric(), g1 in sphere_metric(), g2 in sphere_metric()) {
        for (r1, r2) in [(rep(1, 1, f1), rep(1, 1, f2)), (rep(0, 4, g1), rep(0, 4, g2))] {
            for a in closure(&r1).into_iter().filter(|c| c.word.is_some()) {
                let report = check_ineq_1_2(&r1, &r2, &a).unwrap();
                prop_assert!(report.passes(), "{:?}", report);
                for step in check_ineq_1_2_path(&r1, &r2, &a).unwrap() {
                    prop_assert!(step.passes(), "{:?}", step);
                }
            }
        }
    }
}
