use super::{fmt_float, Row, RunConfig, SweepKind};
use crate::coords::{dt_scale, elementary_move_relation, validate_dt, DTVector, FNVector};
use crate::error::{domain, GeomError, Result};
use crate::holonomy::{
    build_representation, curve_library, is_word_supported, twist_deform, LibCurve, Representation, Word,
};
use crate::hyp2::{
    chord_dx, hexagon_derivatives, hyp_distance, prop51_bounds, solve_hexagon, ChordSpec, Isometry,
};
use crate::lengths::{self, InequalityReport};
use crate::surface::{standard_marking, Marking};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI};

const GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const FD_STEP: f64 = 1e-5;

pub(super) struct Sampler {
    config: RunConfig,
    kind: SweepKind,
    marking: Marking,
    /// Library curves closed under twists and scaling, all carrying words.
    curves: Vec<LibCurve>,
}

type Sample = (Vec<String>, InequalityReport);

fn worst(reports: impl IntoIterator<Item = InequalityReport>) -> InequalityReport {
    reports
        .into_iter()
        .min_by(|a, b| a.margin.total_cmp(&b.margin))
        .expect("at least one report")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn rel_strict(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("values serialize")
}

impl Sampler {
    pub(super) fn new(config: &RunConfig, kind: SweepKind) -> Result<Self> {
        let marking = standard_marking(config.kind)?;
        let mut curves = Vec::new();
        if kind.needs_words() {
            if !is_word_supported(config.kind) {
                return Err(GeomError::UnsupportedSurface(format!(
                    "the {kind} sweep needs exact lengths, available on F_{{1,1}} and F_{{0,4}}, not {}",
                    config.kind
                )));
            }
            curves = closure(&marking)?;
        }
        Ok(Self { config: config.clone(), kind, marking, curves })
    }

    pub(super) fn row(&self, index: usize, rng: &mut ChaCha8Rng) -> Row {
        let width = self.kind.input_columns().len();
        match self.sample(index, rng) {
            Ok((inputs, r)) => {
                debug_assert_eq!(inputs.len(), width);
                Row { index, inputs, lhs: r.lhs, rhs: r.rhs, margin: r.margin, pass: r.passes() }
            }
            Err(e) => {
                let mut inputs = vec![String::new(); width];
                inputs[0] = format!("error: {e}");
                Row { index, inputs, lhs: f64::NAN, rhs: f64::NAN, margin: f64::NAN, pass: false }
            }
        }
    }

    fn length(&self, rng: &mut ChaCha8Rng) -> f64 {
        let [lo, hi] = self.config.lengths;
        if lo == hi {
            lo
        } else {
            rng.gen_range(lo.ln()..hi.ln()).exp()
        }
    }

    fn twist(&self, rng: &mut ChaCha8Rng) -> f64 {
        let t = self.config.twist_max;
        if t == 0.0 {
            0.0
        } else {
            rng.gen_range(-t..t)
        }
    }

    fn metric(&self, rng: &mut ChaCha8Rng) -> Result<FNVector> {
        let k = self.config.kind;
        let pants = (0..k.pants_count()).map(|_| [self.length(rng), self.twist(rng)]).collect();
        let boundary = (0..k.boundary).map(|_| self.length(rng)).collect();
        FNVector::new(pants, boundary)
    }

    fn rep(&self, rng: &mut ChaCha8Rng) -> Result<Representation> {
        build_representation(&self.marking, &self.metric(rng)?)
    }

    fn curve<'a>(&'a self, rng: &mut ChaCha8Rng) -> &'a LibCurve {
        self.curves.choose(rng).expect("library is not empty")
    }

    fn sample(&self, index: usize, rng: &mut ChaCha8Rng) -> Result<Sample> {
        match self.kind {
            SweepKind::Hexagon => self.hexagon(rng),
            SweepKind::Prop51 => self.prop51(rng),
            SweepKind::Thm52 => self.thm52(rng),
            SweepKind::Derivatives => self.derivatives(rng),
            SweepKind::Sliding => self.sliding(rng),
            SweepKind::Quadrilateral => self.quadrilateral(rng),
            SweepKind::Holonomy => self.holonomy(rng),
            SweepKind::Upper => self.upper(rng),
            SweepKind::Triangle => self.triangle(rng),
            SweepKind::Ineq11 => self.ineq11(rng),
            SweepKind::Ineq12 => self.ineq12(index, rng),
            SweepKind::Moves => self.moves(rng),
            SweepKind::Lemma41 => self.lemma41(rng),
            SweepKind::Limit => self.limit(rng),
        }
    }

    fn triple(&self, rng: &mut ChaCha8Rng) -> [f64; 3] {
        [self.length(rng), self.length(rng), self.length(rng)]
    }

    fn hexagon(&self, rng: &mut ChaCha8Rng) -> Result<Sample> {
        let [a, b, x] = self.triple(rng);
        let h = solve_hexagon(a, b, x)?;
        let [a_, z, x_, y, b_, w] = h.sides();
        let residual = [
            rel(w.cosh() * a_.sinh() * b_.sinh(), x_.cosh() + a_.cosh() * b_.cosh()),
            rel(y.cosh() * b_.sinh() * x_.sinh(), a_.cosh() + b_.cosh() * x_.cosh()),
            rel(z.cosh() * a_.sinh() * x_.sinh(), b_.cosh() + a_.cosh() * x_.cosh()),
            h.closure_error(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        Ok((vec![fmt_float(a), fmt_float(b), fmt_float(x)], InequalityReport::new(residual, 1e-9, vec![])))
    }

    fn prop51(&self, rng: &mut ChaCha8Rng) -> Result<Sample> {
        let [a, b, x] = self.triple(rng);
        let h = solve_hexagon(a, b, x)?;
        let bounds = prop51_bounds(a, b, x)?;
        let r = worst([
            InequalityReport::new(h.w(), bounds.w_bound, vec![]),
            InequalityReport::new(h.orthogeodesic(0), bounds.h_bound(), vec![]),
        ]);
        Ok((vec![fmt_float(a), fmt_float(b), fmt_float(x)], r))
    }

    fn thm52(&self, rng: &mut ChaCha8Rng) -> Result<Sample> {
        let [a, b, x] = self.triple(rng);
        let lambda = *GRID.choose(rng).expect("grid");
        let mu = *GRID.choose(rng).expect("grid");
        let from = rng.gen_range(0..6);
        let to = (from + rng.gen_range(1..6)) % 6;
        let c = ChordSpec::new(from, to, lambda, mu)?;
        let d = chord_dx(a, b, x, &c, FD_STEP)?;
        let inputs = vec![
            fmt_float(a),
            fmt_float(b),
            fmt_float(x),
            fmt_float(lambda),
            fmt_float(mu),
            from.to_string(),
            to.to_string(),
        ];
        Ok((inputs, InequalityReport::new(d.abs(), 4.0 / x.tanh() + 1e-3, vec![])))
    }

    fn derivatives(&self, rng: &mut ChaCha8Rng) -> Result<Sample> {
        let [a, b, x] = self.triple(rng);
        let d = hexagon_derivatives(a, b, x)?;
        let step = FD_STEP * x.min(1.0);
        let hi = solve_hexagon(a, b, x + step)?;
        let lo = solve_hexagon(a, b, x - step)?;
        let fd = |u: f64, v: f64| (u - v) / (2.0 * step);
        let mut err = [
            rel_strict(d.dy_dx, fd(hi.y(), lo.y())),
            rel_strict(d.dw_dx, fd(hi.w(), lo.w())),
            rel_strict(d.dz_dx, fd(hi.z(), lo.z())),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let h = solve_hexagon(a, b, x)?;
        let facts = d.dy_dx < 0.0
            && d.dw_dx > 0.0
            && d.dw_dx < 1.0
            && h.x().cosh() > 1.0 / h.z().tanh()
            && h.x().sinh() * h.z().sinh() > 1.0;
        if !facts {
            err = f64::INFINITY;
        }
        Ok((vec![fmt_float(a), fmt_float(b), fmt_float(x)], InequalityReport::new(err, 1e-6, vec![])))
    }

    fn sliding(&self, rng: &mut ChaCha8Rng) -> Result<Sample> {
        let alpha = rng.gen_range(0.05..PI - 0.05);
        let dq = self.length(rng);
        let p = Isometry::IDENTITY;
        let q = p.turn(alpha).advance(dq).position();
        let l = |t: f64| hyp_distance(p.advance(t).position(), q);
        let fd = (l(FD_STEP)? - l(-FD_STEP)?) / (2.0 * FD_STEP);
        Ok((
            vec![fmt_float(alpha), fmt_float(dq)],
            InequalityReport::new((fd + alpha.cos()).abs(), 1e-3, vec![]),
        ))
    }

    fn quadrilateral(&self, rng: &mut ChaCha8Rng) -> Result<Sample> {
        let [c, t, e] = self.triple(rng);
        let s = |t: f64| {
            let start = Isometry::IDENTITY;
            let end = start.advance(c).turn(FRAC_PI_2).advance(t).turn(FRAC_PI_2).advance(e);
            hyp_distance(start.position(), end.position())
        };
        let ds = (s(t + FD_STEP)? - s(t - FD_STEP)?) / (2.0 * FD_STEP);
        let excess = (-ds).max(ds - 1.0 / (t / 2.0).tanh());
        Ok((vec![fmt_float(c), fmt_float(t), fmt_float(e)], InequalityReport::new(excess, 1e-3, vec![])))
    }

    fn holonomy(&self, rng: &mut ChaCha8Rng) -> Result<Sample> {
        let rep = self.rep(rng)?;
        let kind = self.config.kind;
        let mut err = 0.0f64;
        for slot in 0..kind.slot_count() {
            let tr = rep.trace(&rep.slot_word(slot)?)?.abs();
            err = err.max(rel(tr, 2.0 * (rep.fn_vector.length(slot) / 2.0).cosh()));
        }
        let slot = rng.gen_range(0..kind.pants_count());
        let delta = self.twist(rng);
        let moved = twist_deform(&rep, slot, delta)?;
        let fresh = build_representation(
            &self.marking,
            &rep.fn_vector.with_twist(slot, rep.fn_vector.twist(slot) + delta),
        )?;
        let n = rep.generator_count();
        for w in (0..n).map(Word::generator) {
            err = err.max(rel(moved.trace(&w)?.abs(), fresh.trace(&w)?.abs()));
        }
        Ok((
            vec![json(&rep.fn_vector), slot.to_string(), fmt_float(delta)],
            InequalityReport::new(err, 1e-9, vec![]),
        ))
    }

    fn upper(&self, rng: &mut ChaCha8Rng) -> Result<Sample> {
        let rep = self.rep(rng)?;
        let c = self.curve(rng);
        let res = lengths::length(&rep, c)?;
        let exact = res.exact.ok_or_else(|| GeomError::Internal("library curve without a word".into()))?;
        Ok((vec![json(&rep.fn_vector), c.dt.to_string()], InequalityReport::new(exact, res.upper_bound, vec![])))
    }

    fn triangle(&self, rng: &mut ChaCha8Rng) -> Result<Sample> {
        let rep = self.rep(rng)?;
        // Copies of a pants curve resolve against anything.
        let pants: Vec<&LibCurve> = self.curves.iter().filter(|c| c.dt.pants.iter().all(|p| p[0] == 0)).collect();
        for attempt in 0..65 {
            let a = match (attempt, pants.is_empty()) {
                (64, false) => pants[rng.gen_range(0..pants.len())],
                _ => self.curve(rng),
            };
            let b = self.curve(rng);
            if let Ok([r1, r2]) = lengths::check_triangle(&rep, a, b) {
                let product = r1.witnesses[2].clone();
                let r = worst([r1, r2]);
                return Ok((vec![json(&rep.fn_vector), a.dt.to_string(), b.dt.to_string(), product], r));
            }
        }
        domain("no resolvable pair found")
    }

    fn ineq11(&self, rng: &mut ChaCha8Rng) -> Result<Sample> {
        let rep = self.rep(rng)?;
        let a = self.curve(rng);
        let b = self.curve(rng);
        let r = lengths::check_ineq_1_1(&rep, a, b)?;
        Ok((vec![json(&rep.fn_vector), a.dt.to_string(), b.dt.to_string()], r))
    }

    fn ineq12(&self, index: usize, rng: &mut ChaCha8Rng) -> Result<Sample> {
        let f1 = self.metric(rng)?;
        let kind = self.config.kind;
        let (f2, mode) = match index % 3 {
            0 => {
                let s = rng.gen_range(0..kind.pants_count());
                (f1.with_twist(s, self.twist(rng)), "twist")
            }
            1 => {
                let s = rng.gen_range(0..kind.slot_count());
                (f1.with_length(s, self.length(rng)), "length")
            }
            _ => (self.metric(rng)?, "general"),
        };
        let r1 = build_representation(&self.marking, &f1)?;
        let r2 = build_representation(&self.marking, &f2)?;
        let c = self.curve(rng);
        let mut reports = vec![lengths::check_ineq_1_2(&r1, &r2, c)?];
        if mode == "general" {
            reports.extend(lengths::check_ineq_1_2_path(&r1, &r2, c)?);
        }
        Ok((vec![json(&f1), json(&f2), c.dt.to_string(), mode.into()], worst(reports)))
    }

    fn moves(&self, rng: &mut ChaCha8Rng) -> Result<Sample> {
        let rep = self.rep(rng)?;
        let t = rng.gen_range(-6..=6);
        let torus = self.config.kind.genus == 1;
        let x = if torus { rng.gen_range(2..=6) } else { 2 * rng.gen_range(1..=2) };
        let t = if torus || x == 2 { t } else { 2 * t };
        let mut target = DTVector::zero(self.config.kind);
        target.pants[0] = [x, t];
        let cert = elementary_move_relation(&self.marking, 0, &target)?;
        let report = lengths::check_move(&rep, &cert)?;
        let (name, r) = report
            .reports
            .into_iter()
            .min_by(|a, b| a.1.margin.total_cmp(&b.1.margin))
            .expect("move reports");
        Ok((vec![json(&rep.fn_vector), target.to_string(), name], r))
    }

    fn lemma41(&self, rng: &mut ChaCha8Rng) -> Result<Sample> {
        let rep = self.rep(rng)?;
        let kind = self.config.kind;
        let vectors: Vec<DTVector> = if (kind.genus, kind.boundary) == (1, 1) {
            let mut v = Vec::new();
            for x in 0..=4 {
                for t in -4..=4 {
                    for b in (0..=4).step_by(2) {
                        v.push(DTVector::new(vec![[x, t]], vec![b]));
                    }
                }
            }
            v
        } else {
            (0..64).filter_map(|_| random_valid(&self.marking, rng)).collect()
        };
        let mut out: Option<Sample> = None;
        for dt in vectors.iter().filter(|d| !d.is_zero()) {
            for slot in 0..kind.pants_count() {
                let (n, bound) = lengths::arc_count(&rep, dt, slot)?;
                let r = InequalityReport::new(n as f64, bound, vec![]);
                if out.as_ref().is_none_or(|(_, o)| r.margin < o.margin) {
                    out = Some((vec![json(&rep.fn_vector), dt.to_string(), n.to_string()], r));
                }
            }
        }
        out.ok_or_else(|| GeomError::Internal("no vectors sampled".into()))
    }

    fn limit(&self, rng: &mut ChaCha8Rng) -> Result<Sample> {
        let rep = self.rep(rng)?;
        let primitive: Vec<&LibCurve> = self.curves.iter().filter(|c| c.copies == 1 && c.provenance.scale == 1).collect();
        let direction = primitive.choose(rng).expect("primitive curves").dt.clone();
        let torus = self.config.kind.genus == 1;
        let mut sequence = Vec::new();
        for n in 1..=50i64 {
            let base = dt_scale(&direction, n)?;
            let mut chosen = base.clone();
            for _ in 0..20 {
                let mut cand = base.clone();
                let [x, t] = cand.pants[0];
                let dx = if torus { rng.gen_range(-2..=2) } else { 0 };
                cand.pants[0] = [x + dx, t + rng.gen_range(-2..=2)];
                let cand = cand.canonical();
                if !cand.is_zero() && crate::holonomy::length_by_dt(&rep, &cand).is_ok() {
                    chosen = cand;
                    break;
                }
            }
            sequence.push(chosen);
        }
        let reports = lengths::check_perturbed_limit(&rep, &direction, &sequence)?;
        let (i, r) = reports
            .into_iter()
            .enumerate()
            .min_by(|a, b| a.1.margin.total_cmp(&b.1.margin))
            .expect("fifty reports");
        Ok((
            vec![json(&rep.fn_vector), direction.to_string(), (i + 1).to_string(), sequence[i].to_string()],
            r,
        ))
    }
}

/// Library curves twisted up to six times and scaled up to four times,
/// keeping those with words.
pub fn closure(m: &Marking) -> Result<Vec<LibCurve>> {
    let kind = m.kind;
    let unit = FNVector::new(vec![[1.0, 0.0]; kind.pants_count()], vec![1.0; kind.boundary as usize])?;
    let rep = build_representation(m, &unit)?;
    let mut out = Vec::new();
    for c in curve_library(m)? {
        for slot in 0..kind.pants_count() {
            for k in -6..=6 {
                let mut t = c.dt.clone();
                t.pants[slot][1] += k;
                if t.canonical().is_zero() {
                    continue;
                }
                let twisted = c.twisted(&rep, slot, k)?;
                for s in 1..=4 {
                    let scaled = twisted.scaled(&rep, s)?;
                    if scaled.word.is_some() && !out.iter().any(|o: &LibCurve| o.dt == scaled.dt) {
                        out.push(scaled);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn random_valid(m: &Marking, rng: &mut ChaCha8Rng) -> Option<DTVector> {
    let kind = m.kind;
    for _ in 0..1000 {
        let pants = (0..kind.pants_count()).map(|_| [rng.gen_range(0..=4), rng.gen_range(-4..=4)]).collect();
        let boundary = (0..kind.boundary).map(|_| rng.gen_range(0..=4)).collect();
        let v = DTVector::new(pants, boundary);
        if validate_dt(m, &v).is_empty() {
            return Some(v);
        }
    }
    None
}
