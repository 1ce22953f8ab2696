//! Dehn–Thurston coordinates of curve systems and Fenchel–Nielsen
//! coordinates of metrics, with their norms and distances.

use crate::error::{domain, GeomError, Result};
use crate::hyp2::logmath::ln_sinh;
use crate::surface::{double, DoubledMarking, Marking, SurfaceKind};
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;
use std::fmt;

/// A curve system: per pants curve an `[intersection, twist]` pair taken up
/// to simultaneous sign, and per boundary component an intersection count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DTVector {
    pub pants: Vec<[i64; 2]>,
    pub boundary: Vec<i64>,
}

/// Canonical representative of `(x, t) ~ (-x, -t)`.
pub fn canonical_pair([x, t]: [i64; 2]) -> [i64; 2] {
    if x < 0 || (x == 0 && t < 0) {
        [-x, -t]
    } else {
        [x, t]
    }
}

fn pair_distance(p: [i64; 2], q: [i64; 2]) -> i64 {
    let same = (p[0] - q[0]).abs() + (p[1] - q[1]).abs();
    let flip = (p[0] + q[0]).abs() + (p[1] + q[1]).abs();
    same.min(flip)
}

impl DTVector {
    pub fn new(pants: Vec<[i64; 2]>, boundary: Vec<i64>) -> Self {
        Self { pants, boundary }.canonical()
    }

    pub fn zero(kind: SurfaceKind) -> Self {
        Self {
            pants: vec![[0, 0]; kind.pants_count()],
            boundary: vec![0; kind.boundary as usize],
        }
    }

    /// `k` parallel copies of pants curve `slot`.
    pub fn pants_curve(kind: SurfaceKind, slot: usize, k: i64) -> Self {
        let mut v = Self::zero(kind);
        v.pants[slot] = [0, k];
        v.canonical()
    }

    pub fn canonical(mut self) -> Self {
        for p in &mut self.pants {
            *p = canonical_pair(*p);
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.pants.iter().all(|p| *p == [0, 0]) && self.boundary.iter().all(|&b| b == 0)
    }

    pub fn slot_count(&self) -> usize {
        self.pants.len() + self.boundary.len()
    }

    /// Intersection number with the curve in `slot`.
    pub fn intersection(&self, slot: usize) -> i64 {
        if slot < self.pants.len() {
            self.pants[slot][0].abs()
        } else {
            self.boundary[slot - self.pants.len()].abs()
        }
    }

    pub fn twist(&self, slot: usize) -> i64 {
        canonical_pair(self.pants[slot])[1]
    }

    fn same_shape(&self, other: &DTVector) -> bool {
        self.pants.len() == other.pants.len() && self.boundary.len() == other.boundary.len()
    }

    pub fn is_even(&self) -> bool {
        self.pants.iter().flatten().chain(&self.boundary).all(|c| c % 2 == 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("vector serializes")
    }
}

impl fmt::Display for DTVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.pants.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{},{}]", p[0], p[1])?;
        }
        for b in &self.boundary {
            write!(f, "; {b}")?;
        }
        write!(f, ")")
    }
}

/// A metric: per pants curve `[length, twist]` where the twist displacement
/// along the curve is `length * twist`, and per boundary component a length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FNVector {
    pub pants: Vec<[f64; 2]>,
    pub boundary: Vec<f64>,
}

impl FNVector {
    pub fn new(pants: Vec<[f64; 2]>, boundary: Vec<f64>) -> Result<Self> {
        let v = Self { pants, boundary };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, l) in self.lengths().enumerate() {
            if !(l > 0.0) || !l.is_finite() {
                return domain(format!("length of slot {i} is {l}, must be positive"));
            }
        }
        if self.pants.iter().any(|p| !p[1].is_finite()) {
            return domain("twists must be finite");
        }
        Ok(())
    }

    pub fn length(&self, slot: usize) -> f64 {
        if slot < self.pants.len() {
            self.pants[slot][0]
        } else {
            self.boundary[slot - self.pants.len()]
        }
    }

    pub fn twist(&self, slot: usize) -> f64 {
        self.pants.get(slot).map_or(0.0, |p| p[1])
    }

    pub fn lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.pants.iter().map(|p| p[0]).chain(self.boundary.iter().copied())
    }

    pub fn slot_count(&self) -> usize {
        self.pants.len() + self.boundary.len()
    }

    pub fn matches(&self, kind: SurfaceKind) -> bool {
        self.pants.len() == kind.pants_count() && self.boundary.len() == kind.boundary as usize
    }

    pub fn with_twist(&self, slot: usize, t: f64) -> Self {
        let mut v = self.clone();
        v.pants[slot][1] = t;
        v
    }

    pub fn with_length(&self, slot: usize, x: f64) -> Self {
        let mut v = self.clone();
        if slot < v.pants.len() {
            v.pants[slot][0] = x;
        } else {
            let n = v.pants.len();
            v.boundary[slot - n] = x;
        }
        v
    }
}

pub fn dt_norm(v: &DTVector) -> i64 {
    v.pants.iter().map(|p| p[0].abs() + p[1].abs()).sum::<i64>()
        + v.boundary.iter().map(|b| b.abs()).sum::<i64>()
}

pub fn dt_distance(u: &DTVector, v: &DTVector) -> Result<i64> {
    if !u.same_shape(v) {
        return domain("curve systems live on different surfaces");
    }
    let pants: i64 = u
        .pants
        .iter()
        .zip(&v.pants)
        .map(|(p, q)| pair_distance(*p, *q))
        .sum();
    let boundary: i64 = u.boundary.iter().zip(&v.boundary).map(|(a, b)| (a - b).abs()).sum();
    Ok(pants + boundary)
}

pub fn fn_norm(v: &FNVector) -> f64 {
    let pants: f64 = v.pants.iter().map(|&[x, t]| x + 1.0 / x + x * t.abs()).sum();
    let boundary: f64 = v.boundary.iter().map(|&x| x + 1.0 / x).sum();
    pants + boundary + v.slot_count() as f64 * LN_2
}

/// The quasi-metric `D` on Fenchel–Nielsen coordinates.
pub fn fn_d(u: &FNVector, v: &FNVector) -> Result<f64> {
    if u.pants.len() != v.pants.len() || u.boundary.len() != v.boundary.len() {
        return domain("metrics live on different surfaces");
    }
    let twist_part: f64 = u
        .pants
        .iter()
        .zip(&v.pants)
        .map(|(p, q)| p[0].min(q[0]) * (p[1] - q[1]).abs())
        .sum();
    let max_twist = u
        .pants
        .iter()
        .chain(&v.pants)
        .map(|p| p[1].abs())
        .fold(0.0, f64::max);
    let log_part: f64 = u
        .lengths()
        .zip(v.lengths())
        .map(|(x, y)| (ln_sinh(x / 2.0) - ln_sinh(y / 2.0)).abs())
        .sum();
    Ok(twist_part + (5.0 * max_twist + 7.0) * log_part)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DTViolation {
    Shape { expected: (usize, usize), found: (usize, usize) },
    Parity { piece: usize, sum: i64 },
    SignNormalization { slot: usize },
    NegativeBoundary { slot: usize },
}

impl fmt::Display for DTViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DTViolation::Shape { expected, found } => {
                write!(f, "shape: expected {expected:?} slots, found {found:?}")
            }
            DTViolation::Parity { piece, sum } => {
                write!(f, "parity: intersections around piece {piece} sum to {sum}")
            }
            DTViolation::SignNormalization { slot } => {
                write!(f, "sign normalization: slot {slot} is not in canonical form")
            }
            DTViolation::NegativeBoundary { slot } => {
                write!(f, "boundary slot {slot} has a negative intersection count")
            }
        }
    }
}

pub fn validate_dt(m: &Marking, v: &DTVector) -> Vec<DTViolation> {
    let kind = m.kind;
    let expected = (kind.pants_count(), kind.boundary as usize);
    let found = (v.pants.len(), v.boundary.len());
    if expected != found {
        return vec![DTViolation::Shape { expected, found }];
    }
    let mut out = Vec::new();
    for (slot, p) in v.pants.iter().enumerate() {
        if canonical_pair(*p) != *p {
            out.push(DTViolation::SignNormalization { slot });
        }
    }
    for (j, &b) in v.boundary.iter().enumerate() {
        if b < 0 {
            out.push(DTViolation::NegativeBoundary { slot: expected.0 + j });
        }
    }
    for (piece, p) in m.pieces.iter().enumerate() {
        let sum: i64 = p.slots.iter().map(|&s| v.intersection(s)).sum();
        if sum % 2 != 0 {
            out.push(DTViolation::Parity { piece, sum });
        }
    }
    out
}

pub(crate) fn require_valid(m: &Marking, v: &DTVector) -> Result<()> {
    match validate_dt(m, v).first() {
        None => Ok(()),
        Some(e) => domain(e.to_string()),
    }
}

pub fn dt_scale(v: &DTVector, k: i64) -> Result<DTVector> {
    if k <= 0 {
        return domain(format!("scale factor {k} must be positive"));
    }
    Ok(DTVector {
        pants: v.pants.iter().map(|p| [p[0] * k, p[1] * k]).collect(),
        boundary: v.boundary.iter().map(|b| b * k).collect(),
    }
    .canonical())
}

/// Resolution product with `k` copies of pants curve `slot`: shifts the
/// twist of the canonical representative by `k`.
pub fn dt_twist_multiply(v: &DTVector, slot: usize, k: i64) -> Result<DTVector> {
    if slot >= v.pants.len() {
        return domain(format!("slot {slot} is not a pants curve and carries no twist"));
    }
    let mut out = v.clone().canonical();
    out.pants[slot][1] += k;
    Ok(out.canonical())
}

/// A path of even vectors from `u` to `v` in which consecutive vectors are at
/// distance exactly 2: twists first, then intersections, in slot order.
pub fn even_path(u: &DTVector, v: &DTVector) -> Result<Vec<DTVector>> {
    if !u.same_shape(v) {
        return domain("curve systems live on different surfaces");
    }
    if !u.is_even() || !v.is_even() {
        return domain("even_path needs vectors with all coordinates even");
    }
    let mut cur = u.clone().canonical();
    // Pick, per pants slot, the representative of v nearest to cur.
    let goal: Vec<[i64; 2]> = cur
        .pants
        .iter()
        .zip(&v.pants)
        .map(|(p, q)| {
            let flip = [-q[0], -q[1]];
            let d = |r: [i64; 2]| (p[0] - r[0]).abs() + (p[1] - r[1]).abs();
            if d(*q) <= d(flip) {
                *q
            } else {
                flip
            }
        })
        .collect();
    let mut work = cur.pants.clone();
    let mut path = vec![cur.clone()];
    let step = |a: &mut i64, b: i64| {
        if *a < b {
            *a += 2;
        } else {
            *a -= 2;
        }
    };
    for coord in [1usize, 0] {
        for s in 0..work.len() {
            while work[s][coord] != goal[s][coord] {
                step(&mut work[s][coord], goal[s][coord]);
                cur.pants[s] = canonical_pair(work[s]);
                path.push(cur.clone());
            }
        }
        if coord == 0 {
            for j in 0..cur.boundary.len() {
                while cur.boundary[j] != v.boundary[j] {
                    let target = v.boundary[j];
                    step(&mut cur.boundary[j], target);
                    path.push(cur.clone());
                }
            }
        }
    }
    let expected = dt_distance(u, v)? / 2 + 1;
    if path.len() as i64 != expected {
        return Err(GeomError::Internal(format!(
            "even path has {} vectors, expected {expected}",
            path.len()
        )));
    }
    Ok(path)
}

/// Which elementary move relates a curve system to the one with two fewer
/// intersections at a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveCase {
    /// The slot bounds a single piece on both sides.
    SelfGlued = 1,
    /// The slot separates two distinct pieces.
    TwoPieces = 2,
    /// The slot is a boundary component; handled on the double.
    Boundary = 3,
}

/// Loops whose powers may appear in the move, with a bound on the total
/// absolute exponent across the group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopGroup {
    pub slots: Vec<usize>,
    pub max_total: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveCertificate {
    pub case: MoveCase,
    pub slot: usize,
    pub target: DTVector,
    pub source: DTVector,
    pub loop_groups: Vec<LoopGroup>,
    /// Candidate transversal curves `c`; every candidate is admissible.
    pub transversals: Vec<DTVector>,
    pub transversal_exponents: Vec<i64>,
    /// For boundary slots: the same move on the doubled surface.
    pub doubled: Option<Box<DoubledMove>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubledMove {
    pub double: DoubledMarking,
    pub certificate: MoveCertificate,
}

impl MoveCertificate {
    /// Every admissible exponent tuple for the loop groups, in group order.
    pub fn loop_exponent_choices(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for g in &self.loop_groups {
            let mut next = Vec::new();
            for prefix in &out {
                for tuple in bounded_tuples(g.slots.len(), g.max_total) {
                    let mut v = prefix.clone();
                    v.extend(tuple);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }
}

fn bounded_tuples(len: usize, max_total: i64) -> Vec<Vec<i64>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for e in -max_total..=max_total {
        for mut rest in bounded_tuples(len - 1, max_total - e.abs()) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

fn single_slot_vector(kind: SurfaceKind, slot: usize, pair: [i64; 2]) -> DTVector {
    let mut v = DTVector::zero(kind);
    v.pants[slot] = pair;
    v.canonical()
}

/// Describes how `target` arises from the curve system with two fewer
/// intersections at `slot` by an elementary move.
pub fn elementary_move_relation(m: &Marking, slot: usize, target: &DTVector) -> Result<MoveCertificate> {
    require_valid(m, target)?;
    let kind = m.kind;
    if slot >= kind.slot_count() {
        return domain(format!("slot {slot} does not exist on {kind}"));
    }
    if target.intersection(slot) < 2 {
        return domain(format!("slot {slot} of the target meets the curve fewer than twice"));
    }
    let mut source = target.clone();
    if kind.is_pants_slot(slot) {
        source.pants[slot][0] -= 2;
        source = source.canonical();
    } else {
        source.boundary[slot - kind.pants_count()] -= 2;
    }

    if kind.is_boundary_slot(slot) {
        let double = double(m)?;
        let t2 = double_dt(m, &double, target)?;
        let star = double.slot_map[slot][0];
        let certificate = elementary_move_relation(&double.marking, star, &t2)?;
        return Ok(MoveCertificate {
            case: MoveCase::Boundary,
            slot,
            target: target.clone(),
            source,
            loop_groups: Vec::new(),
            transversals: Vec::new(),
            transversal_exponents: Vec::new(),
            doubled: Some(Box::new(DoubledMove { double, certificate })),
        });
    }

    let sides = m.sides_of(slot);
    let (p, q) = (sides[0], sides[1]);
    if p.piece == q.piece {
        let slots = m.pieces[p.piece].slots;
        let third = slots[3 - p.position - q.position];
        Ok(MoveCertificate {
            case: MoveCase::SelfGlued,
            slot,
            target: target.clone(),
            source,
            loop_groups: vec![LoopGroup { slots: vec![third], max_total: 2 }],
            transversals: vec![
                single_slot_vector(kind, slot, [1, 1]),
                single_slot_vector(kind, slot, [1, -1]),
            ],
            transversal_exponents: vec![-2, -1, 0, 1, 2],
            doubled: None,
        })
    } else {
        let others = |s: crate::surface::PieceSide| {
            let slots = m.pieces[s.piece].slots;
            vec![slots[(s.position + 1) % 3], slots[(s.position + 2) % 3]]
        };
        Ok(MoveCertificate {
            case: MoveCase::TwoPieces,
            slot,
            target: target.clone(),
            source,
            loop_groups: vec![
                LoopGroup { slots: others(p), max_total: 2 },
                LoopGroup { slots: others(q), max_total: 2 },
            ],
            transversals: (-2..=2)
                .map(|t| single_slot_vector(kind, slot, [2, t]))
                .collect(),
            transversal_exponents: vec![-1, 1],
            doubled: None,
        })
    }
}

/// The doubled curve system: the mirror copy carries negated twists and
/// former boundary slots get zero twist.
pub fn double_dt(m: &Marking, d: &DoubledMarking, v: &DTVector) -> Result<DTVector> {
    require_valid(m, v)?;
    let n = m.kind.pants_count();
    let mut out = DTVector::zero(d.marking.kind);
    for (i, p) in v.pants.iter().enumerate() {
        out.pants[d.slot_map[i][0]] = *p;
        out.pants[d.slot_map[i][1]] = [p[0], -p[1]];
    }
    for (j, &b) in v.boundary.iter().enumerate() {
        out.pants[d.slot_map[n + j][0]] = [b, 0];
    }
    Ok(out.canonical())
}

/// The doubled metric: mirror twists negated, boundary lengths become pants
/// lengths with zero twist.
pub fn double_fn(m: &Marking, d: &DoubledMarking, v: &FNVector) -> Result<FNVector> {
    if !v.matches(m.kind) {
        return domain("metric does not match the marking");
    }
    let n = m.kind.pants_count();
    let mut pants = vec![[0.0, 0.0]; d.marking.kind.pants_count()];
    for (i, &[x, t]) in v.pants.iter().enumerate() {
        pants[d.slot_map[i][0]] = [x, t];
        pants[d.slot_map[i][1]] = [x, -t];
    }
    for (j, &x) in v.boundary.iter().enumerate() {
        pants[d.slot_map[n + j][0]] = [x, 0.0];
    }
    FNVector::new(pants, Vec::new())
}
