//! Marked surfaces: pants decompositions with seams and red/white hexagons.
//!
//! Curve slots are 0-based: `0..N` are pants curves and `N..N + r` are the
//! boundary components, with `N = 3g + r - 3`.

use crate::error::{domain, GeomError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceKind {
    pub genus: u32,
    pub boundary: u32,
}

impl SurfaceKind {
    pub fn new(genus: u32, boundary: u32) -> Result<Self> {
        let k = Self { genus, boundary };
        if k.euler_characteristic() >= 0 {
            return Err(GeomError::UnsupportedSurface(format!(
                "F_{{{genus},{boundary}}} has non-negative Euler characteristic"
            )));
        }
        Ok(k)
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary as i64
    }

    /// Number of interior pants curves, `3g + r - 3`.
    pub fn pants_count(&self) -> usize {
        (3 * self.genus as i64 + self.boundary as i64 - 3).max(0) as usize
    }

    pub fn slot_count(&self) -> usize {
        self.pants_count() + self.boundary as usize
    }

    pub fn piece_count(&self) -> usize {
        (-self.euler_characteristic()) as usize
    }

    pub fn is_pants_slot(&self, slot: usize) -> bool {
        slot < self.pants_count()
    }

    pub fn is_boundary_slot(&self, slot: usize) -> bool {
        slot >= self.pants_count() && slot < self.slot_count()
    }
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{{{},{}}}", self.genus, self.boundary)
    }
}

/// A pair of pants bounded by the curve slots at positions 0, 1, 2, listed in
/// the cyclic order of its red hexagon's boundary.
///
/// Seam `k` of the piece joins positions `k + 1` and `k + 2` and is disjoint
/// from position `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PantsPiece {
    pub slots: [usize; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    White,
}

/// One of the two right-angled hexagons of a piece, bounded by its three seams.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HexagonCell {
    pub piece: usize,
    pub color: Color,
    pub seams: [usize; 3],
}

/// A position on the boundary of a piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PieceSide {
    pub piece: usize,
    pub position: usize,
}

/// How the hexagons on either side of a pants curve meet: each pair lists a
/// hexagon of the first side and the hexagon it is glued to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub slot: usize,
    pub hexagon_pairs: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Marking {
    pub kind: SurfaceKind,
    pub pieces: Vec<PantsPiece>,
    pub hexagons: Vec<HexagonCell>,
    pub crossings: Vec<Crossing>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    PieceCount { expected: usize, found: usize },
    SlotOutOfRange { piece: usize, slot: usize },
    PantsAdjacency { slot: usize, sides: usize },
    BoundaryAdjacency { slot: usize, sides: usize },
    HexagonIncidence { piece: usize, detail: String },
    Coloring { piece: usize, red: usize },
    ColorMismatch { slot: usize, hexagons: [usize; 2] },
    CrossingMismatch { slot: usize, detail: String },
    Disconnected,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PieceCount { expected, found } => {
                write!(f, "piece count: expected {expected}, found {found}")
            }
            Violation::SlotOutOfRange { piece, slot } => {
                write!(f, "piece {piece} refers to unknown slot {slot}")
            }
            Violation::PantsAdjacency { slot, sides } => {
                write!(f, "pants adjacency: slot {slot} bounds {sides} piece sides, expected 2")
            }
            Violation::BoundaryAdjacency { slot, sides } => {
                write!(f, "boundary adjacency: slot {slot} bounds {sides} piece sides, expected 1")
            }
            Violation::HexagonIncidence { piece, detail } => {
                write!(f, "hexagon incidence in piece {piece}: {detail}")
            }
            Violation::Coloring { piece, red } => {
                write!(f, "coloring condition (3): piece {piece} has {red} red hexagons")
            }
            Violation::ColorMismatch { slot, hexagons } => write!(
                f,
                "coloring condition (3): hexagons {} and {} meet across slot {slot} with different colors",
                hexagons[0], hexagons[1]
            ),
            Violation::CrossingMismatch { slot, detail } => {
                write!(f, "crossing at slot {slot}: {detail}")
            }
            Violation::Disconnected => write!(f, "pieces do not form a connected surface"),
        }
    }
}

impl Marking {
    /// Builds hexagons and crossings for a list of pieces: piece `p` owns red
    /// hexagon `2p` and white hexagon `2p + 1`, and seams `3p..3p + 3`.
    pub fn from_pieces(kind: SurfaceKind, pieces: Vec<PantsPiece>) -> Self {
        let mut hexagons = Vec::with_capacity(2 * pieces.len());
        for p in 0..pieces.len() {
            let seams = [3 * p, 3 * p + 1, 3 * p + 2];
            hexagons.push(HexagonCell { piece: p, color: Color::Red, seams });
            hexagons.push(HexagonCell { piece: p, color: Color::White, seams });
        }
        let mut m = Self {
            kind,
            pieces,
            hexagons,
            crossings: Vec::new(),
        };
        for slot in 0..kind.pants_count() {
            let sides = m.sides_of(slot);
            if let [s, t] = sides[..] {
                m.crossings.push(Crossing {
                    slot,
                    hexagon_pairs: vec![
                        [2 * s.piece, 2 * t.piece],
                        [2 * s.piece + 1, 2 * t.piece + 1],
                    ],
                });
            }
        }
        m
    }

    /// All piece sides bounded by `slot`, in piece order.
    pub fn sides_of(&self, slot: usize) -> Vec<PieceSide> {
        let mut out = Vec::new();
        for (piece, p) in self.pieces.iter().enumerate() {
            for (position, &s) in p.slots.iter().enumerate() {
                if s == slot {
                    out.push(PieceSide { piece, position });
                }
            }
        }
        out
    }

    /// Pieces adjacent to `slot`, without repetition.
    pub fn pieces_at(&self, slot: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.sides_of(slot).iter().map(|s| s.piece).collect();
        v.dedup();
        v
    }

    pub fn slot_at(&self, side: PieceSide) -> usize {
        self.pieces[side.piece].slots[side.position]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("marking serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| GeomError::Domain(format!("bad marking document: {e}")))
    }
}

/// The chain-of-pants marking of `F_{g,r}`.
///
/// Each handle is a piece `(h, h, c)` whose cuff `c` is a leaf; the leaves
/// (handle cuffs, then boundary components) are joined by a caterpillar
/// `(l1, l2, e1), (e1, l3, e2), ..., (e_{L-3}, l_{L-1}, l_L)`. With only two
/// leaves they are identified. Pants slots are numbered in order of first
/// appearance: each handle curve then its cuff, then the caterpillar edges.
pub fn standard_marking(kind: SurfaceKind) -> Result<Marking> {
    let kind = SurfaceKind::new(kind.genus, kind.boundary)?;
    let g = kind.genus as usize;
    let r = kind.boundary as usize;
    let n = kind.pants_count();
    let leaves_count = g + r;
    let mut next = 0usize;
    let mut fresh = || {
        next += 1;
        next - 1
    };

    let mut pieces = Vec::new();
    let mut leaves = Vec::with_capacity(leaves_count);
    let mut shared_cuff = None;
    for _ in 0..g {
        let curve = fresh();
        let cuff = if leaves_count == 2 {
            if g == 1 {
                n
            } else {
                *shared_cuff.get_or_insert_with(&mut fresh)
            }
        } else {
            fresh()
        };
        pieces.push(PantsPiece { slots: [curve, curve, cuff] });
        leaves.push(cuff);
    }
    leaves.extend(n..n + r);

    if leaves_count >= 3 {
        let l = leaves_count;
        let edges: Vec<usize> = (0..l - 3).map(|_| fresh()).collect();
        if l == 3 {
            pieces.push(PantsPiece { slots: [leaves[0], leaves[1], leaves[2]] });
        } else {
            pieces.push(PantsPiece { slots: [leaves[0], leaves[1], edges[0]] });
            for m in 1..l - 3 {
                pieces.push(PantsPiece { slots: [edges[m - 1], leaves[m + 1], edges[m]] });
            }
            pieces.push(PantsPiece { slots: [edges[l - 4], leaves[l - 2], leaves[l - 1]] });
        }
    }
    debug_assert_eq!(next, n);
    Ok(Marking::from_pieces(kind, pieces))
}

/// Checks the colored-hexagonal-decomposition conditions; empty when valid.
pub fn validate_marking(m: &Marking) -> Vec<Violation> {
    let mut out = Vec::new();
    let kind = m.kind;
    let total = kind.slot_count();

    if m.pieces.len() != kind.piece_count() {
        out.push(Violation::PieceCount {
            expected: kind.piece_count(),
            found: m.pieces.len(),
        });
    }
    for (piece, p) in m.pieces.iter().enumerate() {
        for &slot in &p.slots {
            if slot >= total {
                out.push(Violation::SlotOutOfRange { piece, slot });
            }
        }
    }
    for slot in 0..total {
        let sides = m.sides_of(slot).len();
        if kind.is_pants_slot(slot) && sides != 2 {
            out.push(Violation::PantsAdjacency { slot, sides });
        } else if kind.is_boundary_slot(slot) && sides != 1 {
            out.push(Violation::BoundaryAdjacency { slot, sides });
        }
    }

    for piece in 0..m.pieces.len() {
        let cells: Vec<&HexagonCell> = m.hexagons.iter().filter(|h| h.piece == piece).collect();
        if cells.len() != 2 {
            out.push(Violation::HexagonIncidence {
                piece,
                detail: format!("{} hexagons, expected 2", cells.len()),
            });
        }
        let seams = [3 * piece, 3 * piece + 1, 3 * piece + 2];
        for c in &cells {
            let mut s = c.seams;
            s.sort_unstable();
            if s != seams {
                out.push(Violation::HexagonIncidence {
                    piece,
                    detail: format!("hexagon seams {:?}, expected {:?}", c.seams, seams),
                });
            }
        }
        let red = cells.iter().filter(|c| c.color == Color::Red).count();
        if red != 1 {
            out.push(Violation::Coloring { piece, red });
        }
    }

    for slot in 0..kind.pants_count() {
        let sides = m.sides_of(slot);
        let crossings: Vec<&Crossing> = m.crossings.iter().filter(|c| c.slot == slot).collect();
        if crossings.len() != 1 {
            out.push(Violation::CrossingMismatch {
                slot,
                detail: format!("{} crossing records, expected 1", crossings.len()),
            });
            continue;
        }
        let c = crossings[0];
        if c.hexagon_pairs.len() != 2 {
            out.push(Violation::CrossingMismatch {
                slot,
                detail: format!("{} hexagon pairs, expected 2", c.hexagon_pairs.len()),
            });
        }
        for pair in &c.hexagon_pairs {
            let cells: Vec<Option<&HexagonCell>> = pair.iter().map(|&h| m.hexagons.get(h)).collect();
            let (Some(h0), Some(h1)) = (cells[0], cells[1]) else {
                out.push(Violation::CrossingMismatch {
                    slot,
                    detail: format!("unknown hexagon in pair {pair:?}"),
                });
                continue;
            };
            let adjacent = |h: &HexagonCell| sides.iter().any(|s| s.piece == h.piece);
            if !adjacent(h0) || !adjacent(h1) {
                out.push(Violation::CrossingMismatch {
                    slot,
                    detail: format!("pair {pair:?} is not adjacent to the curve"),
                });
            }
            if h0.color != h1.color {
                out.push(Violation::ColorMismatch { slot, hexagons: *pair });
            }
        }
    }

    if !m.pieces.is_empty() && !is_connected(m) {
        out.push(Violation::Disconnected);
    }
    out
}

fn is_connected(m: &Marking) -> bool {
    let n = m.pieces.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(p) = stack.pop() {
        for &slot in &m.pieces[p].slots {
            for q in m.pieces_at(slot) {
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// The double of a marking across its boundary, with `slot_map[s]` listing
/// the slots of the double that copy slot `s`.
///
/// Pants slot `i` maps to `[i, N + r + i]`; boundary slot `N + j` becomes the
/// pants slot `N + j` of the double. The second copy has reversed orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubledMarking {
    pub marking: Marking,
    pub slot_map: Vec<Vec<usize>>,
}

pub fn double(m: &Marking) -> Result<DoubledMarking> {
    let kind = m.kind;
    if kind.boundary == 0 {
        return domain("cannot double a surface without boundary");
    }
    let n = kind.pants_count();
    let r = kind.boundary as usize;
    let dk = SurfaceKind::new(2 * kind.genus + kind.boundary - 1, 0)?;
    let second = |s: usize| if s < n { n + r + s } else { s };
    let mut pieces = m.pieces.clone();
    for p in &m.pieces {
        let [i, j, k] = p.slots;
        pieces.push(PantsPiece {
            slots: [second(k), second(j), second(i)],
        });
    }
    let slot_map = (0..n + r)
        .map(|s| if s < n { vec![s, n + r + s] } else { vec![s] })
        .collect();
    Ok(DoubledMarking {
        marking: Marking::from_pieces(dk, pieces),
        slot_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(g: u32, r: u32) -> SurfaceKind {
        SurfaceKind::new(g, r).unwrap()
    }

    #[test]
    fn rejects_non_hyperbolic() {
        for (g, r) in [(0, 0), (0, 1), (0, 2), (1, 0)] {
            assert!(matches!(
                SurfaceKind::new(g, r),
                Err(GeomError::UnsupportedSurface(_))
            ));
        }
    }

    #[test]
    fn small_examples() {
        let m = standard_marking(kind(1, 1)).unwrap();
        assert_eq!(m.kind.pants_count(), 1);
        assert_eq!(m.pieces, vec![PantsPiece { slots: [0, 0, 1] }]);

        let m = standard_marking(kind(0, 4)).unwrap();
        assert_eq!(m.kind.pants_count(), 1);
        assert_eq!(
            m.pieces,
            vec![PantsPiece { slots: [1, 2, 0] }, PantsPiece { slots: [0, 3, 4] }]
        );

        let m = standard_marking(kind(2, 0)).unwrap();
        assert_eq!(m.kind.pants_count(), 3);
        assert_eq!(m.pieces.len(), 2);

        let m = standard_marking(kind(0, 3)).unwrap();
        assert_eq!(m.pieces, vec![PantsPiece { slots: [0, 1, 2] }]);
    }

    #[test]
    fn standard_markings_validate() {
        for g in 0..=4 {
            for r in 0..=6 {
                let Ok(k) = SurfaceKind::new(g, r) else { continue };
                let m = standard_marking(k).unwrap();
                assert_eq!(m.pieces.len(), (2 * g + r - 2) as usize, "{k}");
                assert_eq!(k.pants_count(), (3 * g + r - 3) as usize);
                assert!(validate_marking(&m).is_empty(), "{k}: {:?}", validate_marking(&m));
            }
        }
    }

    #[test]
    fn detects_double_red() {
        let mut m = standard_marking(kind(1, 1)).unwrap();
        m.hexagons[1].color = Color::Red;
        let v = validate_marking(&m);
        assert!(v.iter().any(|v| matches!(v, Violation::Coloring { red: 2, .. })));
        assert!(v.iter().any(|v| v.to_string().contains("coloring condition (3)")));
    }

    #[test]
    fn detects_bad_adjacency() {
        let mut m = standard_marking(kind(0, 4)).unwrap();
        m.pieces[1].slots = [0, 0, 4];
        let v = validate_marking(&m);
        assert!(v.iter().any(|v| matches!(v, Violation::PantsAdjacency { slot: 0, sides: 3 })));
        assert!(v.iter().any(|v| matches!(v, Violation::BoundaryAdjacency { slot: 3, sides: 0 })));
    }

    #[test]
    fn detects_color_mismatch_across_curve() {
        let mut m = standard_marking(kind(0, 4)).unwrap();
        m.crossings[0].hexagon_pairs[0] = [0, 3];
        let v = validate_marking(&m);
        assert!(v.iter().any(|v| matches!(v, Violation::ColorMismatch { slot: 0, .. })));
    }

    #[test]
    fn doubling() {
        let d = double(&standard_marking(kind(1, 1)).unwrap()).unwrap();
        assert_eq!(d.marking.kind, kind(2, 0));
        assert_eq!(d.marking.kind.pants_count(), 3);
        assert_eq!(d.slot_map, vec![vec![0, 2], vec![1]]);
        assert!(validate_marking(&d.marking).is_empty());

        let d = double(&standard_marking(kind(0, 3)).unwrap()).unwrap();
        assert_eq!(d.marking.kind, kind(2, 0));
        assert!(validate_marking(&d.marking).is_empty());

        for (g, r) in [(0, 4), (1, 2), (2, 3)] {
            let d = double(&standard_marking(kind(g, r)).unwrap()).unwrap();
            assert!(validate_marking(&d.marking).is_empty());
        }
        assert!(double(&standard_marking(kind(2, 0)).unwrap()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = standard_marking(kind(1, 2)).unwrap();
        let back = Marking::from_json(&m.to_json()).unwrap();
        assert_eq!(m, back);
        assert!(m.to_json().contains("\"color\": \"red\""));
    }
}
