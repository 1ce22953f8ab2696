use super::InequalityReport;
use crate::coords::{dt_distance, dt_norm, dt_scale, dt_twist_multiply, fn_d, fn_norm, DTVector, FNVector};
use crate::error::{domain, GeomError, Result};
use crate::holonomy::{build_representation, length_by_dt, word_length, LibCurve, Provenance, Representation};

/// Exact length of a curve system given by coordinates; the empty system has
/// length zero.
fn exact_dt(rep: &Representation, dt: &DTVector) -> Result<f64> {
    if dt.is_zero() {
        return Ok(0.0);
    }
    if let Ok(l) = length_by_dt(rep, dt) {
        return Ok(l);
    }
    let c = LibCurve::resolve(rep, dt.clone(), Provenance::base("resolved"))?;
    exact_curve(rep, &c)
}

fn exact_curve(rep: &Representation, c: &LibCurve) -> Result<f64> {
    match &c.word {
        Some(w) => Ok(c.copies as f64 * word_length(rep, w)?),
        None => Err(GeomError::Unsupported(format!("no exact length for {}", c.dt))),
    }
}

fn same_marking(r1: &Representation, r2: &Representation) -> Result<()> {
    if r1.marking != r2.marking {
        return domain("representations carry different markings");
    }
    Ok(())
}

/// Loops-only support on a single pants slot: `(slot, copies)`.
fn pants_multiple(dt: &DTVector) -> Option<(usize, i64)> {
    if dt.boundary.iter().any(|&b| b != 0) {
        return None;
    }
    let support: Vec<usize> = (0..dt.pants.len()).filter(|&i| dt.pants[i] != [0, 0]).collect();
    match support[..] {
        [i] if dt.pants[i][0] == 0 => Some((i, dt.pants[i][1].abs())),
        _ => None,
    }
}

/// The two resolution products `ab` and `ba` of a loop system `a` with `b`.
pub fn resolution_products(rep: &Representation, a: &LibCurve, b: &LibCurve) -> Result<(DTVector, DTVector)> {
    if !a.is_loop() {
        return domain("the left factor of a resolution product must consist of loops");
    }
    if let Some((slot, k)) = pants_multiple(&a.dt) {
        return Ok((dt_twist_multiply(&b.dt, slot, k)?, dt_twist_multiply(&b.dt, slot, -k)?));
    }
    let kind = rep.marking.kind;
    if (kind.genus, kind.boundary) == (1, 1) && b.is_loop() {
        let [n1, m1] = a.dt.pants[0];
        let [n2, m2] = b.dt.pants[0];
        let meet = (n1 * m2 - n2 * m1).abs();
        let v = |n: i64, m: i64| DTVector::new(vec![[n, m]], vec![0]);
        match meet {
            0 => return Ok((v(n1 + n2, m1 + m2), v(n1 + n2, m1 + m2))),
            1 => return Ok((v(n1 + n2, m1 + m2), v(n1 - n2, m1 - m2))),
            _ => {}
        }
    }
    Err(GeomError::Unsupported(format!("resolution product of {} and {} is not available", a.dt, b.dt)))
}

/// `|l(ab) - l(b)| <= l(a)` and `|l(ba) - l(b)| <= l(a)`.
pub fn check_triangle(rep: &Representation, a: &LibCurve, b: &LibCurve) -> Result<[InequalityReport; 2]> {
    let (ab, ba) = resolution_products(rep, a, b)?;
    let la = exact_curve(rep, a)?;
    let lb = exact_curve(rep, b)?;
    let report = |prod: &DTVector, name: &str| -> Result<InequalityReport> {
        let l = exact_dt(rep, prod)?;
        Ok(InequalityReport::new(
            (l - lb).abs(),
            la,
            vec![format!("a={}", a.dt), format!("b={}", b.dt), format!("{name}={prod}")],
        ))
    };
    Ok([report(&ab, "ab")?, report(&ba, "ba")?])
}

/// `|l(a) - l(b)| <= 3 |FN| |DT(a) - DT(b)|`.
pub fn check_ineq_1_1(rep: &Representation, a: &LibCurve, b: &LibCurve) -> Result<InequalityReport> {
    let la = exact_curve(rep, a)?;
    let lb = exact_curve(rep, b)?;
    let rhs = 3.0 * fn_norm(&rep.fn_vector) * dt_distance(&a.dt, &b.dt)? as f64;
    Ok(InequalityReport::new(
        (la - lb).abs(),
        rhs,
        vec![format!("a={}", a.dt), format!("b={}", b.dt), format!("fn={:?}", rep.fn_vector)],
    ))
}

/// `|l_1(a) - l_2(a)| <= 4 D(FN_1, FN_2) |DT(a)|`.
pub fn check_ineq_1_2(rep1: &Representation, rep2: &Representation, a: &LibCurve) -> Result<InequalityReport> {
    same_marking(rep1, rep2)?;
    let l1 = exact_curve(rep1, a)?;
    let l2 = exact_curve(rep2, a)?;
    let rhs = 4.0 * fn_d(&rep1.fn_vector, &rep2.fn_vector)? * dt_norm(&a.dt) as f64;
    Ok(InequalityReport::new(
        (l1 - l2).abs(),
        rhs,
        vec![
            format!("a={}", a.dt),
            format!("fn1={:?}", rep1.fn_vector),
            format!("fn2={:?}", rep2.fn_vector),
        ],
    ))
}

/// Metrics from `u` to `v` changing one coordinate at a time: twists first,
/// then pants lengths, then boundary lengths.
pub fn interpolation_path(u: &FNVector, v: &FNVector) -> Result<Vec<FNVector>> {
    if u.pants.len() != v.pants.len() || u.boundary.len() != v.boundary.len() {
        return domain("metrics live on different surfaces");
    }
    let mut path = vec![u.clone()];
    let mut cur = u.clone();
    for i in 0..u.pants.len() {
        if cur.pants[i][1] != v.pants[i][1] {
            cur = cur.with_twist(i, v.pants[i][1]);
            path.push(cur.clone());
        }
    }
    for slot in 0..u.slot_count() {
        if cur.length(slot) != v.length(slot) {
            cur = cur.with_length(slot, v.length(slot));
            path.push(cur.clone());
        }
    }
    Ok(path)
}

/// The second inequality along each step of the interpolation path.
pub fn check_ineq_1_2_path(rep1: &Representation, rep2: &Representation, a: &LibCurve) -> Result<Vec<InequalityReport>> {
    same_marking(rep1, rep2)?;
    let path = interpolation_path(&rep1.fn_vector, &rep2.fn_vector)?;
    let reps = path
        .iter()
        .map(|f| build_representation(&rep1.marking, f))
        .collect::<Result<Vec<_>>>()?;
    reps.windows(2).map(|w| check_ineq_1_2(&w[0], &w[1], a)).collect()
}

/// `l(n a) / n` for `n = 1..=n_max`.
pub fn normalized_limit(rep: &Representation, direction: &DTVector, n_max: usize) -> Result<Vec<f64>> {
    if n_max == 0 {
        return domain("n_max must be at least 1");
    }
    let base = exact_dt(rep, direction)?;
    (1..=n_max as i64)
        .map(|n| {
            let l = exact_dt(rep, &dt_scale(direction, n)?).unwrap_or(n as f64 * base);
            Ok(l / n as f64)
        })
        .collect()
}

/// For a sequence `dt_n` near `n a`:
/// `|l(dt_n)/n - l(a)| <= 3 |FN| d(dt_n, n a) / n`.
pub fn check_perturbed_limit(
    rep: &Representation,
    direction: &DTVector,
    sequence: &[DTVector],
) -> Result<Vec<InequalityReport>> {
    let la = exact_dt(rep, direction)?;
    let norm = fn_norm(&rep.fn_vector);
    sequence
        .iter()
        .enumerate()
        .map(|(i, dt)| {
            let n = (i + 1) as i64;
            let scaled = dt_scale(direction, n)?;
            let l = exact_dt(rep, dt)?;
            let rhs = 3.0 * norm * dt_distance(dt, &scaled)? as f64 / n as f64;
            Ok(InequalityReport::new(
                (l / n as f64 - la).abs(),
                rhs,
                vec![format!("n={n}"), format!("dt={dt}"), format!("direction={direction}")],
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::curve_library;
    use crate::surface::{standard_marking, SurfaceKind};

    fn rep(g: u32, r: u32, fnv: FNVector) -> Representation {
        let m = standard_marking(SurfaceKind::new(g, r).unwrap()).unwrap();
        build_representation(&m, &fnv).unwrap()
    }

    fn torus() -> Representation {
        rep(1, 1, FNVector::new(vec![[1.4, 0.35]], vec![0.8]).unwrap())
    }

    fn curve(r: &Representation, n: i64, m: i64) -> LibCurve {
        LibCurve::resolve(r, DTVector::new(vec![[n, m]], vec![0]), Provenance::base("t")).unwrap()
    }

    #[test]
    fn triangle_with_pants_curve() {
        let r = torus();
        let p = curve(&r, 0, 1);
        let c = curve(&r, 1, 0);
        let [ab, ba] = check_triangle(&r, &p, &c).unwrap();
        assert!(ab.passes() && ba.passes());
        assert!((ab.rhs - 1.4).abs() < 1e-12);
    }

    #[test]
    fn triangle_disjoint_is_tight() {
        let r = torus();
        let p = curve(&r, 0, 1);
        let q = curve(&r, 0, 2);
        let [ab, _] = check_triangle(&r, &p, &q).unwrap();
        assert!(ab.margin.abs() < 1e-9);
    }

    #[test]
    fn cancellation_sanity() {
        // (ab)a is b together with two copies of the curve c = ab a^-1 b^-1 ...
        // at the length level only l(b) <= l(ab) + l(a) is asserted
        let r = torus();
        let a = curve(&r, 1, 0);
        let b = curve(&r, 1, 1);
        let (ab, _) = resolution_products(&r, &a, &b).unwrap();
        let lab = exact_dt(&r, &ab).unwrap();
        assert!(exact_curve(&r, &b).unwrap() <= lab + exact_curve(&r, &a).unwrap());
    }

    #[test]
    fn unsupported_products() {
        let r = torus();
        let a = curve(&r, 1, 0);
        let b = curve(&r, 1, 3);
        assert!(matches!(resolution_products(&r, &a, &b), Err(GeomError::Unsupported(_))));
    }

    #[test]
    fn first_inequality_examples() {
        let r = torus();
        let a = curve(&r, 2, 1);
        assert_eq!(check_ineq_1_1(&r, &a, &a).unwrap().lhs, 0.0);
        let b = a.twisted(&r, 0, 1).unwrap();
        let rep = check_ineq_1_1(&r, &a, &b).unwrap();
        assert!(rep.lhs <= 2.0 * 1.4 + 1e-9);
        assert!(rep.margin >= rep.rhs - 2.0 * 1.4 - 1e-9);
    }

    #[test]
    fn second_inequality_examples() {
        let r1 = torus();
        let a = curve(&r1, 3, 2);
        assert_eq!(check_ineq_1_2(&r1, &r1, &a).unwrap().lhs, 0.0);
        let r2 = rep(1, 1, FNVector::new(vec![[1.4, -0.4]], vec![0.8]).unwrap());
        let twist_only = check_ineq_1_2(&r1, &r2, &a).unwrap();
        assert!(twist_only.lhs <= 1.4 * 0.75 * dt_norm(&a.dt) as f64 + 1e-9);
        assert!(twist_only.passes());
        let r3 = rep(1, 1, FNVector::new(vec![[2.6, 0.35]], vec![0.3]).unwrap());
        assert!(check_ineq_1_2(&r1, &r3, &a).unwrap().passes());
        let steps = check_ineq_1_2_path(&r2, &r3, &a).unwrap();
        assert_eq!(steps.len(), 3);
        assert!(steps.iter().all(|s| s.passes()));
    }

    #[test]
    fn limits() {
        let r = torus();
        let d = DTVector::new(vec![[2, 1]], vec![0]);
        let seq = normalized_limit(&r, &d, 6).unwrap();
        assert!(seq.iter().all(|l| (l - seq[0]).abs() < 1e-9 * seq[0]));
        assert_eq!(normalized_limit(&r, &d, 1).unwrap().len(), 1);
        let noisy: Vec<DTVector> = (1..=20)
            .map(|n| DTVector::new(vec![[2 * n + (n % 3) - 1, n + 2 * (n % 2)]], vec![0]))
            .collect();
        assert!(check_perturbed_limit(&r, &d, &noisy).unwrap().iter().all(|x| x.passes()));
    }

    #[test]
    fn library_triangles_pass() {
        let r = rep(0, 4, FNVector::new(vec![[0.9, 1.2]], vec![0.5, 1.5, 2.5, 0.7]).unwrap());
        let lib = curve_library(&r.marking).unwrap();
        for a in &lib {
            for b in &lib {
                match check_triangle(&r, a, b) {
                    Ok(reps) => assert!(reps.iter().all(|x| x.passes()), "{reps:?}"),
                    Err(GeomError::Unsupported(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}
