//! Holonomy representations of marked hyperbolic surfaces and exact
//! geodesic lengths from traces.
//!
//! Each pants piece is the union of two copies of the right-angled hexagon
//! with alternating sides `x_i/2, x_j/2, x_k/2`. The red copy of every piece
//! is placed in the plane by a spanning tree of the dual graph; the boundary
//! holonomies of a piece are products of reflections in its seam lines.
//! Positive twist on slot `i` slides the far side forward along the red side
//! of the first piece (in piece order) that `i` bounds.

mod dictionary;

pub use dictionary::{curve_library, exact_word, is_word_supported, length_by_dt, LibCurve, Provenance};

use crate::coords::FNVector;
use crate::error::{domain, GeomError, Result};
use crate::hyp2::logmath::acosh_from_ln;
use crate::hyp2::{mat_mul, solve_hexagon, Hexagon, Isometry, Mat2};
use crate::surface::{validate_marking, Marking, PieceSide};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

/// A freely reduced word in the generators; each letter is a generator index
/// and an exponent of `1` or `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<(usize, i8)>,
}

impl Word {
    pub fn new(letters: impl IntoIterator<Item = (usize, i8)>) -> Self {
        let mut out: Vec<(usize, i8)> = Vec::new();
        for (g, e) in letters {
            debug_assert!(e == 1 || e == -1);
            match out.last() {
                Some(&(h, f)) if h == g && f == -e => {
                    out.pop();
                }
                _ => out.push((g, e)),
            }
        }
        Self { letters: out }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(g: usize) -> Self {
        Self { letters: vec![(g, 1)] }
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn mul(&self, other: &Word) -> Self {
        Self::new(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn conjugate(&self, by: &Word) -> Self {
        by.mul(self).mul(&by.inverse())
    }

    /// Replaces each generator by a word.
    pub fn substitute(&self, image: &dyn Fn(usize) -> Word) -> Self {
        let mut out = Word::identity();
        for &(g, e) in &self.letters {
            let w = image(g);
            out = out.mul(&if e > 0 { w } else { w.inverse() });
        }
        out
    }

    /// Strips letters cancelling across the ends.
    pub fn cyclically_reduced(&self) -> Self {
        let mut l = self.letters.as_slice();
        while l.len() >= 2 {
            let (a, b) = (l[0], l[l.len() - 1]);
            if a.0 == b.0 && a.1 == -b.1 {
                l = &l[1..l.len() - 1];
            } else {
                break;
            }
        }
        Self { letters: l.to_vec() }
    }
}

/// A matrix with a separate logarithmic scale: the value is `e^scale * m`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledMatrix {
    pub m: Mat2,
    pub scale: f64,
}

impl ScaledMatrix {
    /// `ln |trace|`, or `-inf` for a traceless matrix.
    pub fn ln_abs_trace(&self) -> f64 {
        (self.m[0] + self.m[3]).abs().ln() + self.scale
    }
}

/// How a pants curve is glued: `first` is the side reached first in the
/// placement walk, and `axis` is the placed frame at the start of its red side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gluing {
    pub slot: usize,
    pub first: PieceSide,
    pub second: PieceSide,
    pub axis: Isometry,
    /// Index of the stable letter when this gluing closes a cycle.
    pub stable: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Representation {
    pub marking: Marking,
    pub fn_vector: FNVector,
    /// Piece `p` contributes generators `3p..3p + 3`, the holonomies of its
    /// boundary at positions 0, 1, 2; stable letters follow.
    pub generators: Vec<Isometry>,
    pub placements: Vec<Isometry>,
    pub gluings: Vec<Gluing>,
    /// Parent slot of each piece in the placement tree.
    pub parents: Vec<Option<usize>>,
}

pub(crate) fn hexagon_side(position: usize) -> usize {
    2 * position
}

pub(crate) fn seam_side(seam: usize) -> usize {
    (2 * seam + 3) % 6
}

fn raw(g: &Isometry) -> Mat2 {
    g.entries()
}

/// Reflection in the geodesic through the frame `f` along its direction.
fn reflection(f: &Isometry) -> Mat2 {
    let flip: Mat2 = [-1.0, 0.0, 0.0, 1.0];
    mat_mul(&mat_mul(&raw(f), &flip), &raw(&f.inverse()))
}

pub(crate) fn piece_hexagon(m: &Marking, fnv: &FNVector, piece: usize) -> Result<Hexagon> {
    let [i, j, k] = m.pieces[piece].slots;
    solve_hexagon(fnv.length(i) / 2.0, fnv.length(k) / 2.0, fnv.length(j) / 2.0)
}

/// Boundary holonomy at `position` of a canonically placed piece.
fn canonical_boundary(h: &Hexagon, position: usize) -> Isometry {
    let r1 = reflection(&h.centered_frame(seam_side((position + 1) % 3)));
    let r2 = reflection(&h.centered_frame(seam_side((position + 2) % 3)));
    Isometry::from_raw(mat_mul(&r1, &r2))
}

/// Maps the canonical red hexagon of the second piece to its neighbour across
/// the first piece's side, shifted by `shift` along that side.
fn gluing_map(ha: &Hexagon, alpha: usize, hb: &Hexagon, beta: usize, shift: f64) -> Isometry {
    let fa = ha.centered_frame(hexagon_side(alpha));
    let fb = hb.centered_frame(hexagon_side(beta));
    let len = ha.sides()[hexagon_side(alpha)];
    fa.advance(shift + len)
        .turn(PI)
        .compose(&fb.inverse())
}

pub fn build_representation(m: &Marking, fnv: &FNVector) -> Result<Representation> {
    if !fnv.matches(m.kind) {
        return domain(format!("metric does not match the marking of {}", m.kind));
    }
    fnv.validate()?;
    if let Some(v) = validate_marking(m).first() {
        return domain(format!("invalid marking: {v}"));
    }
    let hexes: Vec<Hexagon> = (0..m.pieces.len())
        .map(|p| piece_hexagon(m, fnv, p))
        .collect::<Result<_>>()?;

    let np = m.pieces.len();
    let mut placements: Vec<Option<Isometry>> = vec![None; np];
    let mut parents = vec![None; np];
    let mut gluings = Vec::new();
    let mut stable = Vec::new();
    let mut done = vec![false; m.kind.pants_count()];
    // The base piece sits so that the first pants curve's twist is split
    // evenly between its two sides, which keeps matrix entries balanced.
    let root = (0..3).find(|&k| {
        let slot = m.pieces[0].slots[k];
        m.kind.is_pants_slot(slot) && m.sides_of(slot).iter().all(|s| s.piece != 0 || s.position == k)
    });
    let half_shift = |alpha: usize| {
        let slot = m.pieces[0].slots[alpha];
        (hexes[0].sides()[hexagon_side(alpha)] + fnv.length(slot) * fnv.twist(slot)) / 2.0
    };
    placements[0] = Some(match root {
        Some(alpha) => Isometry::IDENTITY
            .advance(-half_shift(alpha))
            .compose(&hexes[0].centered_frame(hexagon_side(alpha)).inverse()),
        None => Isometry::IDENTITY,
    });
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(a) = queue.pop_front() {
        let ga = placements[a].expect("queued pieces are placed");
        for alpha in 0..3 {
            let slot = m.pieces[a].slots[alpha];
            if !m.kind.is_pants_slot(slot) || done[slot] {
                continue;
            }
            done[slot] = true;
            let first = PieceSide { piece: a, position: alpha };
            let second = *m
                .sides_of(slot)
                .iter()
                .find(|s| **s != first)
                .ok_or_else(|| GeomError::Internal(format!("slot {slot} has one side")))?;
            let x = fnv.length(slot);
            let (placed, axis) = if a == 0 && Some(alpha) == root {
                let r = half_shift(alpha);
                let fb = hexes[second.piece].centered_frame(hexagon_side(second.position));
                let placed = Isometry::IDENTITY.advance(r).turn(PI).compose(&fb.inverse());
                (placed, Isometry::IDENTITY.advance(-r))
            } else {
                let phi = gluing_map(&hexes[a], alpha, &hexes[second.piece], second.position, x * fnv.twist(slot));
                (ga.compose(&phi), ga.compose(&hexes[a].centered_frame(hexagon_side(alpha))))
            };
            let mut gl = Gluing { slot, first, second, axis, stable: None };
            match placements[second.piece] {
                None => {
                    placements[second.piece] = Some(placed);
                    parents[second.piece] = Some(slot);
                    queue.push_back(second.piece);
                }
                Some(gb) => {
                    gl.stable = Some(3 * np + stable.len());
                    stable.push(placed.compose(&gb.inverse()));
                }
            }
            gluings.push(gl);
        }
    }
    let placements: Vec<Isometry> = placements
        .into_iter()
        .map(|p| p.ok_or_else(|| GeomError::Internal("marking is disconnected".into())))
        .collect::<Result<_>>()?;

    let mut generators = Vec::with_capacity(3 * np + stable.len());
    for (p, g) in placements.iter().enumerate() {
        for k in 0..3 {
            let x = canonical_boundary(&hexes[p], k);
            generators.push(g.compose(&x).compose(&g.inverse()));
        }
    }
    generators.extend(stable);
    gluings.sort_by_key(|g| g.slot);
    let rep = Representation {
        marking: m.clone(),
        fn_vector: fnv.clone(),
        generators,
        placements,
        gluings,
        parents,
    };
    if !rep.generators.iter().all(Isometry::is_finite) {
        return Err(GeomError::Range("holonomy matrices overflowed".into()));
    }
    Ok(rep)
}

impl Representation {
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Generator index of the boundary holonomy at a piece side.
    pub fn side_generator(side: PieceSide) -> usize {
        3 * side.piece + side.position
    }

    /// Word for the curve in `slot`, read from its first side.
    pub fn slot_word(&self, slot: usize) -> Result<Word> {
        if slot >= self.marking.kind.slot_count() {
            return domain(format!("slot {slot} does not exist"));
        }
        let side = match self.gluings.iter().find(|g| g.slot == slot) {
            Some(g) => g.first,
            None => self.marking.sides_of(slot)[0],
        };
        Ok(Word::generator(Self::side_generator(side)))
    }

    /// Stable letter across `slot`, present when the gluing closes a cycle.
    pub fn stable_word(&self, slot: usize) -> Option<Word> {
        self.gluing(slot)?.stable.map(Word::generator)
    }

    pub fn gluing(&self, slot: usize) -> Option<&Gluing> {
        self.gluings.iter().find(|g| g.slot == slot)
    }

    pub fn evaluate(&self, w: &Word) -> Result<ScaledMatrix> {
        let mut m: Mat2 = [1.0, 0.0, 0.0, 1.0];
        let mut scale = 0.0;
        for &(g, e) in w.letters() {
            let gen = self
                .generators
                .get(g)
                .ok_or_else(|| GeomError::Domain(format!("unknown generator {g}")))?;
            let x = if e > 0 { *gen } else { gen.inverse() };
            m = mat_mul(&m, &x.entries());
            let big = m.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if big > 1e100 {
                m = m.map(|v| v / big);
                scale += big.ln();
            }
        }
        Ok(ScaledMatrix { m, scale })
    }

    pub fn trace(&self, w: &Word) -> Result<f64> {
        let s = self.evaluate(w)?;
        Ok((s.m[0] + s.m[3]) * s.scale.exp())
    }
}

/// Translation length `2 acosh(|tr| / 2)` of the holonomy of a word.
pub fn word_length(rep: &Representation, w: &Word) -> Result<f64> {
    if w.is_empty() {
        return domain("the empty word has no geodesic");
    }
    let ln_tr = rep.evaluate(w)?.ln_abs_trace();
    if !(ln_tr - LN_2 > 1e-9 / 2.0) {
        return Err(GeomError::NotGeodesic { trace: ln_tr.exp() });
    }
    Ok(2.0 * acosh_from_ln(ln_tr - LN_2))
}

/// Changes the twist of pants slot `slot` by `delta_t`, moving the pieces on
/// the far side of the curve by `x * delta_t` along its axis.
pub fn twist_deform(rep: &Representation, slot: usize, delta_t: f64) -> Result<Representation> {
    let kind = rep.marking.kind;
    if !kind.is_pants_slot(slot) {
        return domain(format!("slot {slot} is not a pants curve and carries no twist"));
    }
    let gl = rep
        .gluing(slot)
        .ok_or_else(|| GeomError::Internal(format!("no gluing for slot {slot}")))?
        .clone();
    let x = rep.fn_vector.length(slot);
    let c = gl
        .axis
        .advance(x * delta_t)
        .compose(&gl.axis.inverse());
    let mut out = rep.clone();
    out.fn_vector.pants[slot][1] += delta_t;

    if let Some(s) = gl.stable {
        out.generators[s] = c.compose(&rep.generators[s]);
        return Ok(out);
    }

    // Pieces whose placement path passes through this gluing.
    let np = rep.placements.len();
    let moved: Vec<bool> = (0..np)
        .map(|mut p| loop {
            match rep.parents[p] {
                Some(s) if s == slot => break true,
                Some(s) => p = rep.gluing(s).expect("tree slot has a gluing").first.piece,
                None => break false,
            }
        })
        .collect();
    // Half the twist goes to each side, up to a global conjugation.
    let half = gl.axis.advance(x * delta_t / 2.0).compose(&gl.axis.inverse());
    let side = |p: usize| if moved[p] { half } else { half.inverse() };
    for p in 0..np {
        let h = side(p);
        out.placements[p] = h.compose(&rep.placements[p]);
        for k in 0..3 {
            let g = 3 * p + k;
            out.generators[g] = h.compose(&rep.generators[g]).compose(&h.inverse());
        }
    }
    for (idx, g) in rep.gluings.iter().enumerate() {
        out.gluings[idx].axis = side(g.first.piece).compose(&g.axis);
        if let Some(s) = g.stable {
            out.generators[s] = side(g.first.piece)
                .compose(&rep.generators[s])
                .compose(&side(g.second.piece).inverse());
        }
    }
    Ok(out)
}
