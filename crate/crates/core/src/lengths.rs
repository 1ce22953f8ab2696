//! The length pairing between metrics and curve systems: exact lengths from
//! holonomy, a constructive piecewise-geodesic upper bound, and checkers for
//! the inequalities relating lengths to coordinates.

mod checks;
mod moves;

pub use checks::{
    check_ineq_1_1, check_ineq_1_2, check_ineq_1_2_path, check_perturbed_limit, check_triangle,
    interpolation_path, normalized_limit, resolution_products,
};
pub use moves::{check_move, MoveReport};

use crate::coords::{dt_norm, require_valid, DTVector};
use crate::error::{GeomError, Result};
use crate::holonomy::{hexagon_side, piece_hexagon, seam_side, word_length, LibCurve, Representation};
use crate::hyp2::{prop51_bounds, Hexagon};
use serde::Serialize;

/// Margins above this count as passing; it absorbs rounding only.
pub const PASS_TOLERANCE: f64 = -1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthResult {
    pub exact: Option<f64>,
    pub upper_bound: f64,
    pub notes: Vec<String>,
}

impl LengthResult {
    pub fn is_consistent(&self) -> bool {
        match self.exact {
            Some(l) => l > 0.0 && l <= self.upper_bound + 1e-9,
            None => self.upper_bound.is_finite(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub witnesses: Vec<String>,
}

impl InequalityReport {
    pub fn new(lhs: f64, rhs: f64, witnesses: Vec<String>) -> Self {
        Self { lhs, rhs, margin: rhs - lhs, witnesses }
    }

    pub fn passes(&self) -> bool {
        self.margin >= PASS_TOLERANCE
    }
}

/// How an arc length in the upper bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcRegime {
    /// Measured on the solved hexagon.
    Embedded,
    /// Closed-form bound, used when the hexagon cannot be solved in range.
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcKind {
    /// Runs along the seam between two boundary positions.
    Seam { from: usize, to: usize },
    /// Leaves a boundary position and returns to it around the other two.
    Return { position: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcBound {
    pub piece: usize,
    pub kind: ArcKind,
    pub count: i64,
    pub length: f64,
    pub regime: ArcRegime,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperBound {
    pub total: f64,
    pub arcs: Vec<ArcBound>,
    /// Length spent travelling along pants curves to realise the twists.
    pub twist: f64,
    /// Slack for strands whose endpoints do not line up across a gluing.
    pub allowance: f64,
    /// Parallel copies of pants curves.
    pub loops: f64,
}

/// Arc types of a standard representative meeting the three boundary
/// positions of a piece `n[0]`, `n[1]`, `n[2]` times.
pub fn piece_arcs(n: [i64; 3]) -> Vec<(ArcKind, i64)> {
    let seam = |l: usize| ArcKind::Seam { from: (l + 1) % 3, to: (l + 2) % 3 };
    let mut out = Vec::new();
    let big = (0..3).find(|&j| n[j] > n[(j + 1) % 3] + n[(j + 2) % 3]);
    match big {
        Some(j) => {
            let (k, l) = ((j + 1) % 3, (j + 2) % 3);
            out.push((ArcKind::Return { position: j }, (n[j] - n[k] - n[l]) / 2));
            // seam l joins j and k; seam k joins l and j
            out.push((seam(l), n[k]));
            out.push((seam(k), n[l]));
        }
        None => {
            for l in 0..3 {
                let (j, k) = ((l + 1) % 3, (l + 2) % 3);
                out.push((seam(l), (n[j] + n[k] - n[l]) / 2));
            }
        }
    }
    out.retain(|&(_, c)| c > 0);
    out
}

struct PieceGeometry {
    hexagon: Option<Hexagon>,
    halves: [f64; 3],
}

impl PieceGeometry {
    fn new(rep: &Representation, piece: usize) -> Result<Self> {
        let slots = rep.marking.pieces[piece].slots;
        let halves = slots.map(|s| rep.fn_vector.length(s) / 2.0);
        let hexagon = match piece_hexagon(&rep.marking, &rep.fn_vector, piece) {
            Ok(h) if h.embedding_is_finite() => Some(h),
            Ok(_) | Err(GeomError::Range(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(Self { hexagon, halves })
    }

    fn arc_length(&self, kind: ArcKind) -> Result<(f64, ArcRegime)> {
        let h = &self.halves;
        match (kind, &self.hexagon) {
            (ArcKind::Seam { from, to }, Some(hex)) => {
                Ok((hex.sides()[seam_side(3 - from - to)], ArcRegime::Embedded))
            }
            (ArcKind::Return { position }, Some(hex)) => {
                Ok((2.0 * hex.orthogeodesic(hexagon_side(position)), ArcRegime::Embedded))
            }
            (ArcKind::Seam { from, to }, None) => {
                let b = prop51_bounds(h[from], h[to], h[3 - from - to])?;
                Ok((b.w_bound, ArcRegime::ClosedForm))
            }
            (ArcKind::Return { position: j }, None) => {
                let b = prop51_bounds(h[j], h[(j + 2) % 3], h[(j + 1) % 3])?;
                Ok((2.0 * b.h_bound(), ArcRegime::ClosedForm))
            }
        }
    }

    /// Endpoints of an arc on the boundary at `position`, as arclength from
    /// the start of the red side; `None` when the hexagon is unavailable.
    fn feet(&self, kind: ArcKind, position: usize) -> Option<Vec<f64>> {
        let x = 2.0 * self.halves[position];
        match kind {
            ArcKind::Seam { from, to } => {
                let other = if from == position { to } else { from };
                // the red side ends at the seam towards the next position
                Some(vec![if other == (position + 1) % 3 { x / 2.0 } else { 0.0 }])
            }
            ArcKind::Return { .. } => {
                let u = self.hexagon.as_ref()?.orthogeodesic_foot(hexagon_side(position));
                Some(vec![u, x - u])
            }
        }
    }
}

fn touches(kind: ArcKind, position: usize) -> bool {
    match kind {
        ArcKind::Seam { from, to } => from == position || to == position,
        ArcKind::Return { position: p } => p == position,
    }
}

fn circle_gap(a: f64, b: f64, x: f64) -> f64 {
    let d = (a - b).rem_euclid(x);
    d.min(x - d)
}

/// Length of an explicit piecewise-geodesic representative of `dt`.
pub fn upper_bound_detail(rep: &Representation, dt: &DTVector) -> Result<UpperBound> {
    let m = &rep.marking;
    require_valid(m, dt)?;
    let kind = m.kind;
    let fnv = &rep.fn_vector;
    let geometry = (0..m.pieces.len())
        .map(|p| PieceGeometry::new(rep, p))
        .collect::<Result<Vec<_>>>()?;

    let mut arcs = Vec::new();
    let mut per_piece = Vec::new();
    for (p, piece) in m.pieces.iter().enumerate() {
        let n = piece.slots.map(|s| dt.intersection(s));
        let found = piece_arcs(n);
        for &(kind, count) in &found {
            let (length, regime) = geometry[p].arc_length(kind)?;
            arcs.push(ArcBound { piece: p, kind, count, length, regime });
        }
        per_piece.push(found);
    }

    let mut twist = 0.0;
    let mut allowance = 0.0;
    let mut loops = 0.0;
    for slot in 0..kind.pants_count() {
        let x = fnv.length(slot);
        let n = dt.intersection(slot);
        if n == 0 {
            loops += x * dt.twist(slot).abs() as f64;
            continue;
        }
        twist += x * (n as f64 * fnv.twist(slot).abs() + dt.twist(slot).abs() as f64);
        let g = rep
            .gluing(slot)
            .ok_or_else(|| GeomError::Internal(format!("slot {slot} has no gluing")))?;
        let feet_of = |side: crate::surface::PieceSide| -> Option<Vec<f64>> {
            let mut out = Vec::new();
            for &(kind, _) in &per_piece[side.piece] {
                if touches(kind, side.position) {
                    out.extend(geometry[side.piece].feet(kind, side.position)?);
                }
            }
            Some(out)
        };
        let aligned = match (feet_of(g.first), feet_of(g.second)) {
            (Some(a), Some(b)) => {
                let mapped = b.iter().map(|s| x / 2.0 - s);
                a.iter().chain(&mapped.collect::<Vec<_>>()).all(|&s| circle_gap(s, a[0], x) < 1e-12 * x.max(1.0))
            }
            _ => false,
        };
        if !aligned {
            allowance += n as f64 * x;
        }
    }

    let arc_total: f64 = arcs.iter().map(|a| a.count as f64 * a.length).sum();
    Ok(UpperBound { total: arc_total + twist + allowance + loops, arcs, twist, allowance, loops })
}

pub fn upper_bound_length(rep: &Representation, dt: &DTVector) -> Result<f64> {
    Ok(upper_bound_detail(rep, dt)?.total)
}

/// Exact length when the curve carries a word, together with the
/// constructive upper bound.
pub fn length(rep: &Representation, curve: &LibCurve) -> Result<LengthResult> {
    let bound = upper_bound_detail(rep, &curve.dt)?;
    let mut notes = vec![format!("curve {}", curve.provenance.base)];
    let exact = match &curve.word {
        Some(w) => {
            notes.push(format!("exact: {} x holonomy length of a word with {} letters", curve.copies, w.len()));
            Some(curve.copies as f64 * word_length(rep, w)?)
        }
        None => {
            notes.push("exact: unavailable for these coordinates".into());
            None
        }
    };
    let closed_form = bound.arcs.iter().filter(|a| a.regime == ArcRegime::ClosedForm).count();
    notes.push(format!(
        "upper bound: {} arc types ({closed_form} closed-form), twist {:.6}, allowance {:.6}",
        bound.arcs.len(),
        bound.twist,
        bound.allowance
    ));
    Ok(LengthResult { exact, upper_bound: bound.total, notes })
}

/// Number of hexagon arcs of the standard representative in the pieces next
/// to `slot`, and the bound `(sum of their twists + 7) |dt|`.
pub fn arc_count(rep: &Representation, dt: &DTVector, slot: usize) -> Result<(i64, f64)> {
    let m = &rep.marking;
    require_valid(m, dt)?;
    if slot >= m.kind.slot_count() {
        return crate::error::domain(format!("slot {slot} does not exist on {}", m.kind));
    }
    let pieces = m.pieces_at(slot);
    let mut relevant: Vec<usize> = pieces
        .iter()
        .flat_map(|&p| m.pieces[p].slots)
        .filter(|&s| m.kind.is_pants_slot(s))
        .collect();
    relevant.sort_unstable();
    relevant.dedup();

    let arcs: i64 = pieces
        .iter()
        .map(|&p| m.pieces[p].slots.iter().map(|&s| dt.intersection(s)).sum::<i64>() / 2)
        .sum();
    let fnv = &rep.fn_vector;
    let crossings: i64 = relevant
        .iter()
        .filter(|&&h| dt.intersection(h) > 0)
        .map(|&h| 2 * dt.twist(h).abs() + fnv.twist(h).abs().ceil() as i64 * dt.intersection(h))
        .sum();
    let twists: f64 = relevant.iter().map(|&h| fnv.twist(h).abs()).sum();
    Ok((2 * arcs + crossings, (twists + 7.0) * dt_norm(dt) as f64))
}
