use super::{upper_bound_length, InequalityReport};
use crate::coords::{fn_norm, MoveCase, MoveCertificate};
use crate::error::{GeomError, Result};
use crate::holonomy::{length_by_dt, Representation};
use serde::Serialize;
use std::f64::consts::LN_2;

/// Length checks for one elementary move.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoveReport {
    pub case: MoveCase,
    pub slot: usize,
    /// `|l(target) - l(source)|`.
    pub change: f64,
    /// Largest total multiplier length over every admissible choice.
    pub certificate_budget: f64,
    /// The closed-form budget in the metric coordinates.
    pub budget: f64,
    /// Whether the four neighbouring slots of a two-piece move are distinct.
    pub distinct_neighbours: Option<bool>,
    pub reports: Vec<(String, InequalityReport)>,
}

impl MoveReport {
    pub fn passes(&self) -> bool {
        self.reports.iter().all(|(_, r)| r.passes())
    }
}

fn len_or_zero(rep: &Representation, dt: &crate::coords::DTVector) -> Result<f64> {
    if dt.is_zero() {
        Ok(0.0)
    } else {
        length_by_dt(rep, dt)
    }
}

/// Evaluates the length budgets of a move certificate on `rep`.
pub fn check_move(rep: &Representation, cert: &MoveCertificate) -> Result<MoveReport> {
    if cert.case == MoveCase::Boundary {
        return Err(GeomError::Unsupported(
            "moves at boundary slots are certified on the doubled surface only".into(),
        ));
    }
    let fnv = &rep.fn_vector;
    let x = |s: usize| fnv.length(s);
    let i = cert.slot;
    let (xi, ti) = (x(i), fnv.twist(i).abs());

    let change = (len_or_zero(rep, &cert.target)? - len_or_zero(rep, &cert.source)?).abs();

    let loops: f64 = cert
        .loop_groups
        .iter()
        .map(|g| g.max_total as f64 * g.slots.iter().map(|&s| x(s)).fold(0.0, f64::max))
        .sum();
    let mut transversal = 0.0f64;
    for c in &cert.transversals {
        let l = match length_by_dt(rep, c) {
            Ok(l) => l,
            Err(GeomError::Unsupported(_)) | Err(GeomError::UnsupportedSurface(_)) => upper_bound_length(rep, c)?,
            Err(e) => return Err(e),
        };
        transversal = transversal.max(l);
    }
    let max_e = cert.transversal_exponents.iter().map(|e| e.abs()).max().unwrap_or(0);
    let certificate_budget = loops + max_e as f64 * transversal;

    let norm = fn_norm(fnv);
    let tag = format!("slot={i} target={} source={}", cert.target, cert.source);
    let mut reports = vec![
        ("certificate".to_string(), InequalityReport::new(change, certificate_budget, vec![tag.clone()])),
    ];
    let (budget, distinct) = match cert.case {
        MoveCase::SelfGlued => {
            let xj = x(cert.loop_groups[0].slots[0]);
            let b1 = 4.0 * xj + 2.0 * xi + 4.0 / xj + 4.0 / xi + 2.0 * xi * ti + 4.0 * LN_2;
            reports.push(("budget".into(), InequalityReport::new(change, b1, vec![tag.clone()])));
            reports.push(("budget<=4|FN|".into(), InequalityReport::new(b1, 4.0 * norm, vec![tag.clone()])));
            (b1, None)
        }
        _ => {
            // each group lists the slots after the move slot in cyclic order
            let g = &cert.loop_groups;
            let (i1, i2, i3, i4) = (g[0].slots[1], g[0].slots[0], g[1].slots[1], g[1].slots[0]);
            let sum: f64 = [i1, i2, i3, i4].iter().map(|&s| x(s)).sum();
            let common = 2.0 * sum + 2.0 * xi + 4.0 / xi + 2.0 / x(i1) + 2.0 / x(i3) + sum + 4.0 * LN_2;
            let b2 = common + xi * ti;
            let b2_twice = common + 2.0 * xi * ti;
            let mut ids = vec![i1, i2, i3, i4];
            ids.sort_unstable();
            ids.dedup();
            let distinct = ids.len() == 4;
            reports.push(("budget".into(), InequalityReport::new(change, b2, vec![tag.clone()])));
            reports.push(("budget<=6|FN|".into(), InequalityReport::new(b2, 6.0 * norm, vec![tag.clone()])));
            reports.push((
                "budget(2x|t|)<=6|FN|".into(),
                InequalityReport::new(b2_twice, 6.0 * norm, vec![tag.clone()]),
            ));
            if distinct {
                reports.push(("budget<=4|FN| distinct".into(), InequalityReport::new(b2, 4.0 * norm, vec![tag.clone()])));
            }
            (b2, Some(distinct))
        }
    };
    Ok(MoveReport { case: cert.case, slot: i, change, certificate_budget, budget, distinct_neighbours: distinct, reports })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{elementary_move_relation, DTVector, FNVector};
    use crate::holonomy::build_representation;
    use crate::surface::{standard_marking, SurfaceKind};

    fn rep(g: u32, r: u32, fnv: FNVector) -> Representation {
        let m = standard_marking(SurfaceKind::new(g, r).unwrap()).unwrap();
        build_representation(&m, &fnv).unwrap()
    }

    #[test]
    fn self_glued_moves_stay_in_budget() {
        let r = rep(1, 1, FNVector::new(vec![[0.7, 1.6]], vec![2.2]).unwrap());
        for x in 2..=6 {
            for t in -6..=6 {
                let target = DTVector::new(vec![[x, t]], vec![0]);
                let cert = elementary_move_relation(&r.marking, 0, &target).unwrap();
                let report = check_move(&r, &cert).unwrap();
                assert_eq!(report.case, MoveCase::SelfGlued);
                assert!(report.passes(), "{report:?}");
            }
        }
    }

    #[test]
    fn two_piece_moves_stay_in_budget() {
        let r = rep(0, 4, FNVector::new(vec![[1.3, -0.8]], vec![0.4, 2.0, 1.1, 3.3]).unwrap());
        for t in -5..=5 {
            let target = DTVector::new(vec![[2, t]], vec![0; 4]);
            let cert = elementary_move_relation(&r.marking, 0, &target).unwrap();
            let report = check_move(&r, &cert).unwrap();
            assert_eq!(report.distinct_neighbours, Some(true));
            assert!(report.passes(), "{report:?}");
        }
    }

    #[test]
    fn boundary_moves_are_not_measured() {
        let r = rep(0, 4, FNVector::new(vec![[1.0, 0.0]], vec![1.0; 4]).unwrap());
        let target = DTVector::new(vec![[2, 0]], vec![2, 2, 0, 0]);
        if let Ok(cert) = elementary_move_relation(&r.marking, 1, &target) {
            assert!(matches!(check_move(&r, &cert), Err(GeomError::Unsupported(_))));
        }
    }
}
