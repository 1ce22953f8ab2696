//! Translation between Dehn–Thurston vectors and group words.
//!
//! On `F_{1,1}` with pants curve `A` and zero-twist transversal `B`, the
//! vector `[n, m]` is the simple curve in homology class `m A + n B`, whose
//! word is the Christoffel word `prod_i A^(floor(i m / n) - floor((i-1) m / n)) B`.
//! On `F_{0,4}` the vectors `[2, t]` are the images of the zero-twist curve
//! under the `t`-th power of the half twist exchanging the first two
//! boundary components. Elsewhere only pants curves and the transversals
//! `[1, k]` of self-glued slots carry words.

use super::{build_representation, word_length, Representation, Word};
use crate::coords::{require_valid, DTVector, FNVector};
use crate::error::{domain, GeomError, Result};
use crate::surface::{standard_marking, Marking, SurfaceKind};
use serde::{Deserialize, Serialize};

/// How a library curve was built: a named base curve, then twist
/// multiplications `(slot, k)` in order, then scaling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub base: String,
    pub twists: Vec<(usize, i64)>,
    pub scale: i64,
}

impl Provenance {
    pub fn base(name: impl Into<String>) -> Self {
        Self { base: name.into(), twists: Vec::new(), scale: 1 }
    }
}

/// A curve system known by its coordinates and, when available, by the word
/// of its primitive component; `copies` parallel copies make up the system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LibCurve {
    pub dt: DTVector,
    pub word: Option<Word>,
    pub copies: i64,
    pub provenance: Provenance,
}

impl LibCurve {
    pub fn resolve(rep: &Representation, dt: DTVector, provenance: Provenance) -> Result<Self> {
        require_valid(&rep.marking, &dt)?;
        let (word, copies) = match exact_word(rep, &dt) {
            Ok((w, k)) => (Some(w), k),
            Err(GeomError::Unsupported(_)) => (None, 1),
            Err(e) => return Err(e),
        };
        Ok(Self { dt, word, copies, provenance })
    }

    /// Resolution product with `k` copies of pants curve `slot`.
    pub fn twisted(&self, rep: &Representation, slot: usize, k: i64) -> Result<Self> {
        let dt = crate::coords::dt_twist_multiply(&self.dt, slot, k)?;
        let mut p = self.provenance.clone();
        p.twists.push((slot, k));
        Self::resolve(rep, dt, p)
    }

    pub fn scaled(&self, rep: &Representation, k: i64) -> Result<Self> {
        let dt = crate::coords::dt_scale(&self.dt, k)?;
        let mut p = self.provenance.clone();
        p.scale *= k;
        Self::resolve(rep, dt, p)
    }

    pub fn is_loop(&self) -> bool {
        self.dt.boundary.iter().all(|&b| b == 0)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    OneHoledTorus,
    FourHoledSphere,
    General,
}

fn family(m: &Marking) -> Family {
    let standard = standard_marking(m.kind).map(|s| s.pieces == m.pieces).unwrap_or(false);
    match (m.kind.genus, m.kind.boundary, standard) {
        (1, 1, true) => Family::OneHoledTorus,
        (0, 4, true) => Family::FourHoledSphere,
        _ => Family::General,
    }
}

pub fn is_word_supported(kind: SurfaceKind) -> bool {
    matches!((kind.genus, kind.boundary), (1, 1) | (0, 4))
}

fn unsupported<T>(dt: &DTVector) -> Result<T> {
    Err(GeomError::Unsupported(format!("no word dictionary entry for {dt}")))
}

/// Christoffel word of the primitive class `m A + n B`, `n > 0`.
fn christoffel(a: &Word, b: &Word, n: i64, m: i64) -> Word {
    let mut w = Word::identity();
    for i in 1..=n {
        let e = (i * m).div_euclid(n) - ((i - 1) * m).div_euclid(n);
        w = w.mul(&a.pow(e)).mul(b);
    }
    w
}

/// Half twist exchanging the boundary holonomies `b1`, `b2` of the first
/// piece of `F_{0,4}`, applied `t` times.
fn half_twist(w: &Word, b1: usize, b2: usize, t: i64) -> Word {
    let g1 = Word::generator(b1);
    let g2 = Word::generator(b2);
    let mut out = w.clone();
    for _ in 0..t.unsigned_abs() {
        out = out.substitute(&|g| {
            if t > 0 {
                match g {
                    _ if g == b1 => g2.clone(),
                    _ if g == b2 => g2.inverse().mul(&g1).mul(&g2),
                    _ => Word::generator(g),
                }
            } else {
                match g {
                    _ if g == b2 => g1.clone(),
                    _ if g == b1 => g1.mul(&g2).mul(&g1.inverse()),
                    _ => Word::generator(g),
                }
            }
        });
    }
    out
}

/// Word of the primitive component of `dt` and the number of copies.
pub fn exact_word(rep: &Representation, dt: &DTVector) -> Result<(Word, i64)> {
    let m = &rep.marking;
    require_valid(m, dt)?;
    if dt.is_zero() {
        return domain("the empty curve system has no word");
    }
    if dt.boundary.iter().any(|&b| b != 0) {
        return unsupported(dt);
    }
    let support: Vec<usize> = (0..dt.pants.len()).filter(|&i| dt.pants[i] != [0, 0]).collect();
    if support.len() != 1 {
        return unsupported(dt);
    }
    let slot = support[0];
    let [x, t] = dt.pants[slot];
    if x == 0 {
        return Ok((rep.slot_word(slot)?, t));
    }
    match family(m) {
        Family::OneHoledTorus => {
            let a = rep.slot_word(0)?.inverse();
            let b = rep.stable_word(0).ok_or_else(|| GeomError::Internal("missing stable letter".into()))?;
            let g = gcd(x, t);
            Ok((christoffel(&a, &b, x / g, t / g), g))
        }
        Family::FourHoledSphere => {
            let g = gcd(x / 2, t);
            if x / g != 2 {
                return unsupported(dt);
            }
            Ok((half_twist(&four_holed_base(), 0, 1, t / g), g))
        }
        Family::General => {
            let self_glued = m.pieces_at(slot).len() == 1;
            match (x, rep.stable_word(slot)) {
                (1, Some(b)) if self_glued => Ok((rep.slot_word(slot)?.pow(-t).mul(&b), 1)),
                _ => unsupported(dt),
            }
        }
    }
}

/// Zero-twist curve `[2, 0]` of `F_{0,4}` in the standard marking: it
/// encloses the first boundary of the first piece and the last boundary of
/// the second.
fn four_holed_base() -> Word {
    Word::new([(0, 1), (5, 1)])
}

/// Exact length of a curve system on the word-supported families.
pub fn length_by_dt(rep: &Representation, dt: &DTVector) -> Result<f64> {
    if !is_word_supported(rep.marking.kind) {
        return Err(GeomError::UnsupportedSurface(format!(
            "exact lengths by coordinates are available on F_{{1,1}} and F_{{0,4}}, not {}",
            rep.marking.kind
        )));
    }
    let (w, copies) = exact_word(rep, dt)?;
    Ok(copies as f64 * word_length(rep, &w)?)
}

/// Base curves of a marking: every pants curve, the transversals `[1, 0]`
/// and `[1, ±1]` of self-glued slots, and the transversals `[2, t]`,
/// `|t| <= 2`, of slots between two pieces.
pub fn curve_library(m: &Marking) -> Result<Vec<LibCurve>> {
    let kind = m.kind;
    let unit = FNVector::new(vec![[1.0, 0.0]; kind.pants_count()], vec![1.0; kind.boundary as usize])?;
    let rep = build_representation(m, &unit)?;
    let mut out = Vec::new();
    for slot in 0..kind.pants_count() {
        let single = |pair: [i64; 2]| {
            let mut v = DTVector::zero(kind);
            v.pants[slot] = pair;
            v
        };
        out.push(LibCurve::resolve(&rep, single([0, 1]), Provenance::base(format!("p{slot}")))?);
        if m.pieces_at(slot).len() == 1 {
            for (t, name) in [(0, "c'"), (1, "c+"), (-1, "c-")] {
                let p = Provenance::base(format!("{name}@{slot}"));
                out.push(LibCurve::resolve(&rep, single([1, t]), p)?);
            }
        } else {
            for t in -2..=2 {
                let p = Provenance::base(format!("c[2,{t}]@{slot}"));
                out.push(LibCurve::resolve(&rep, single([2, t]), p)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::SurfaceKind;

    fn rep(g: u32, r: u32, fnv: FNVector) -> Representation {
        let m = standard_marking(SurfaceKind::new(g, r).unwrap()).unwrap();
        build_representation(&m, &fnv).unwrap()
    }

    fn f11(x: i64, t: i64) -> DTVector {
        DTVector::new(vec![[x, t]], vec![0])
    }

    #[test]
    fn christoffel_words() {
        let a = Word::generator(0);
        let b = Word::generator(1);
        assert_eq!(christoffel(&a, &b, 1, 0), b);
        assert_eq!(christoffel(&a, &b, 1, 2), Word::new([(0, 1), (0, 1), (1, 1)]));
        assert_eq!(christoffel(&a, &b, 2, 1), Word::new([(1, 1), (0, 1), (1, 1)]));
        assert_eq!(christoffel(&a, &b, 1, -1), Word::new([(0, -1), (1, 1)]));
    }

    #[test]
    fn pants_curve_lengths() {
        let r = rep(1, 1, FNVector::new(vec![[2.0, 0.4]], vec![1.0]).unwrap());
        assert!((length_by_dt(&r, &f11(0, 1)).unwrap() - 2.0).abs() < 1e-9);
        assert!((length_by_dt(&r, &f11(0, 2)).unwrap() - 4.0).abs() < 1e-9);
        assert!(length_by_dt(&r, &f11(0, 0)).is_err());
        assert!(length_by_dt(&r, &f11(1, 0)).unwrap() > 0.0);
    }

    #[test]
    fn twisted_transversal_matches_trace_recursion() {
        let r = rep(1, 1, FNVector::new(vec![[1.3, 0.2]], vec![0.7]).unwrap());
        let a = r.slot_word(0).unwrap().inverse();
        let b = r.stable_word(0).unwrap();
        let ta = r.trace(&a).unwrap();
        // tr(A^(k+1) B) = tr A tr(A^k B) - tr(A^(k-1) B)
        let mut prev = r.trace(&a.inverse().mul(&b)).unwrap();
        let mut cur = r.trace(&b).unwrap();
        for k in 0..8 {
            let l = length_by_dt(&r, &f11(1, k)).unwrap();
            assert!((l - 2.0 * (cur.abs() / 2.0).acosh()).abs() < 1e-9, "k={k}");
            (prev, cur) = (cur, ta * cur - prev);
        }
    }

    #[test]
    fn four_holed_sphere_dictionary() {
        let r = rep(0, 4, FNVector::new(vec![[1.2, -0.3]], vec![0.6, 0.9, 1.4, 0.5]).unwrap());
        let p = DTVector::new(vec![[0, 1]], vec![0; 4]);
        assert!((length_by_dt(&r, &p).unwrap() - 1.2).abs() < 1e-9);
        let c = DTVector::new(vec![[2, 1]], vec![0; 4]);
        let c2 = DTVector::new(vec![[4, 2]], vec![0; 4]);
        let l = length_by_dt(&r, &c).unwrap();
        assert!((length_by_dt(&r, &c2).unwrap() - 2.0 * l).abs() < 1e-9);
        let other = DTVector::new(vec![[4, 1]], vec![0; 4]);
        assert!(matches!(length_by_dt(&r, &other), Err(GeomError::Unsupported(_))));
        let odd = DTVector::new(vec![[1, 0]], vec![0; 4]);
        assert!(matches!(length_by_dt(&r, &odd), Err(GeomError::Domain(_))));
    }

    #[test]
    fn full_metric_twist_is_a_dehn_twist() {
        let r = rep(1, 1, FNVector::new(vec![[1.3, 0.2]], vec![0.7]).unwrap());
        let t = super::super::twist_deform(&r, 0, 1.0).unwrap();
        let a = r.slot_word(0).unwrap().inverse();
        let b = r.stable_word(0).unwrap();
        // tr(AB) from tr(AB) + tr(AB^-1) = tr A tr B
        let tr_ab = r.trace(&a).unwrap() * r.trace(&b).unwrap() - r.trace(&a.mul(&b.inverse())).unwrap();
        assert!((t.trace(&b).unwrap().abs() - tr_ab.abs()).abs() < 1e-9);
        for k in -3..=3 {
            let after = length_by_dt(&t, &f11(1, k)).unwrap();
            assert!((after - length_by_dt(&r, &f11(1, k + 1)).unwrap()).abs() < 1e-9);
            let after = length_by_dt(&t, &f11(2, 2 * k + 1)).unwrap();
            assert!((after - length_by_dt(&r, &f11(2, 2 * k + 3)).unwrap()).abs() < 1e-9);
        }

        let r = rep(0, 4, FNVector::new(vec![[1.1, 0.3]], vec![0.6, 0.9, 1.4, 0.5]).unwrap());
        let t = super::super::twist_deform(&r, 0, 1.0).unwrap();
        for k in -3..=3 {
            let d = |k| DTVector::new(vec![[2, k]], vec![0; 4]);
            let after = length_by_dt(&t, &d(k)).unwrap();
            assert!((after - length_by_dt(&r, &d(k + 2)).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn four_holed_zero_twist_curve_is_made_of_orthogeodesics() {
        let s = 1.0;
        let r = rep(0, 4, FNVector::new(vec![[s, 0.0]], vec![s; 4]).unwrap());
        let h = crate::hyp2::solve_hexagon(s / 2.0, s / 2.0, s / 2.0).unwrap().orthogeodesic(0);
        let d = DTVector::new(vec![[2, 0]], vec![0; 4]);
        assert!((length_by_dt(&r, &d).unwrap() - 4.0 * h).abs() < 1e-9);
    }

    #[test]
    fn library_shapes() {
        let lib = curve_library(&standard_marking(SurfaceKind::new(1, 1).unwrap()).unwrap()).unwrap();
        assert_eq!(lib.len(), 4);
        assert!(lib.iter().all(|c| c.word.is_some()));
        let lib = curve_library(&standard_marking(SurfaceKind::new(0, 4).unwrap()).unwrap()).unwrap();
        assert_eq!(lib.len(), 6);
        assert!(lib.iter().all(|c| c.word.is_some()));
        let lib = curve_library(&standard_marking(SurfaceKind::new(2, 0).unwrap()).unwrap()).unwrap();
        assert!(lib.iter().any(|c| c.word.is_none()));
        assert!(lib.iter().filter(|c| c.dt.pants.iter().any(|p| p[0] == 1)).all(|c| c.word.is_some()));
    }
}
