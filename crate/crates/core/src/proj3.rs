//! Exact geometry of P^3 over a finite field: canonical points, lines, and
//! planes, deterministic enumeration, and incidence predicates.
//!
//! * A [`Point`] stores coordinates scaled so the first nonzero entry is 1.
//! * A [`Line`] stores the unique reduced-row-echelon basis of its 2-plane of
//!   homogeneous coordinates, together with the normalized Pluecker vector
//!   `(p01, p02, p03, p12, p13, p23)`.  The RREF basis makes equality, hashing
//!   and ordering structural; the Pluecker vector makes the meet predicate a
//!   six-term bilinear form (the hot path of every incidence computation).
//! * A [`Plane`] stores the canonical covector (first nonzero entry 1).
//!
//! Lines fall into six RREF pivot patterns — the affine charts of the
//! Grassmannian — which partition the `(q^2+1)(q^2+q+1)` lines of P^3(F_q).
//! [`enumerate_lines`] walks the patterns in a fixed order so every run of the
//! toolkit sees the same line order.

use crate::gf::{Embedding, FieldCtx, FieldElement, FieldId};
use crate::linalg;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("objects belong to different fields")]
    FieldMismatch,
    #[error("the given coordinates do not span a line")]
    DegenerateSpan,
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("the two lines are equal")]
    EqualLines,
    #[error("the two lines are skew: no common plane")]
    SkewLines,
    #[error("the two lines do not meet: no common point")]
    NoCommonPoint,
}

/// A point of P^3 in canonical form: first nonzero coordinate equals 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Point {
    pub coords: [FieldElement; 4],
}

impl Point {
    /// Canonicalize arbitrary homogeneous coordinates.
    pub fn new(ctx: &FieldCtx, coords: [FieldElement; 4]) -> Result<Point, GeomError> {
        let first = coords
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(GeomError::ZeroVector)?;
        let inv = ctx.inv(coords[first]);
        let mut out = [FieldElement::ZERO; 4];
        for (o, &c) in out.iter_mut().zip(&coords) {
            *o = ctx.mul(c, inv);
        }
        Ok(Point { coords: out })
    }
}

/// A plane of P^3 as a canonical covector: first nonzero coefficient equals 1.
/// The plane is `{ x : h . x = 0 }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Plane {
    pub covector: [FieldElement; 4],
    pub field: FieldId,
}

impl Plane {
    pub fn new(ctx: &FieldCtx, covector: [FieldElement; 4]) -> Result<Plane, GeomError> {
        let first = covector
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(GeomError::ZeroVector)?;
        let inv = ctx.inv(covector[first]);
        let mut out = [FieldElement::ZERO; 4];
        for (o, &c) in out.iter_mut().zip(&covector) {
            *o = ctx.mul(c, inv);
        }
        Ok(Plane {
            covector: out,
            field: ctx.id(),
        })
    }

    /// Index of the pivot (first nonzero, hence 1) coordinate of the covector.
    pub fn pivot(&self) -> usize {
        self.covector.iter().position(|c| !c.is_zero()).unwrap()
    }

    pub fn contains_point(&self, ctx: &FieldCtx, p: &Point) -> bool {
        dot(ctx, &self.covector, &p.coords).is_zero()
    }

    pub fn contains_line(&self, ctx: &FieldCtx, l: &Line) -> bool {
        l.basis
            .iter()
            .all(|row| dot(ctx, &self.covector, row).is_zero())
    }
}

fn dot(ctx: &FieldCtx, a: &[FieldElement; 4], b: &[FieldElement; 4]) -> FieldElement {
    let mut acc = FieldElement::ZERO;
    for (x, y) in a.iter().zip(b) {
        acc = ctx.add(acc, ctx.mul(*x, *y));
    }
    acc
}

/// A line of P^3: the canonical RREF basis of its coordinate 2-plane plus the
/// normalized Pluecker vector.  Equality, ordering and hashing use the basis
/// (and field id) only; the Pluecker vector is derived data.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Line {
    pub basis: [[FieldElement; 4]; 2],
    pub pluecker: [FieldElement; 6],
    pub field: FieldId,
}

impl PartialEq for Line {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.basis == other.basis
    }
}
impl Eq for Line {}
impl PartialOrd for Line {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Line {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.field, self.basis).cmp(&(other.field, other.basis))
    }
}
impl std::hash::Hash for Line {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.basis.hash(state);
    }
}

/// Positions `(i, j)` with `i < j` indexing the Pluecker vector.
pub const PLUECKER_INDEX: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl Line {
    /// Line through two distinct points.
    pub fn from_points(ctx: &FieldCtx, a: &Point, b: &Point) -> Result<Line, GeomError> {
        Line::from_span(ctx, a.coords, b.coords)
    }

    /// Line spanned by two coordinate vectors; they must be independent.
    pub fn from_span(
        ctx: &FieldCtx,
        v1: [FieldElement; 4],
        v2: [FieldElement; 4],
    ) -> Result<Line, GeomError> {
        let mut rows = vec![v1.to_vec(), v2.to_vec()];
        let pivots = linalg::rref(ctx, &mut rows);
        if pivots.len() != 2 {
            return Err(GeomError::DegenerateSpan);
        }
        let mut basis = [[FieldElement::ZERO; 4]; 2];
        for (out, row) in basis.iter_mut().zip(&rows) {
            out.copy_from_slice(row);
        }
        Ok(Line::from_rref(ctx, basis))
    }

    /// Build from rows already known to be in RREF (used by the enumerators).
    fn from_rref(ctx: &FieldCtx, basis: [[FieldElement; 4]; 2]) -> Line {
        let mut pluecker = [FieldElement::ZERO; 6];
        for (slot, &(i, j)) in PLUECKER_INDEX.iter().enumerate() {
            let a = ctx.mul(basis[0][i], basis[1][j]);
            let b = ctx.mul(basis[0][j], basis[1][i]);
            pluecker[slot] = ctx.sub(a, b);
        }
        // The RREF normalization already forces the leading nonzero Pluecker
        // coordinate (at the pivot pair) to be 1.
        debug_assert_eq!(
            pluecker.iter().find(|c| !c.is_zero()),
            Some(&FieldElement::ONE)
        );
        Line {
            basis,
            pluecker,
            field: ctx.id(),
        }
    }

    /// Reconstruct a line from a Pluecker vector satisfying the quadric
    /// relation.  The rank-2 antisymmetric matrix `P` with `P[i][j] = p_ij`
    /// has the line as its column space.
    pub fn from_pluecker(ctx: &FieldCtx, pluecker: [FieldElement; 6]) -> Result<Line, GeomError> {
        let mut m = [[FieldElement::ZERO; 4]; 4];
        for (slot, &(i, j)) in PLUECKER_INDEX.iter().enumerate() {
            m[i][j] = pluecker[slot];
            m[j][i] = ctx.neg(pluecker[slot]);
        }
        // Collect the nonzero columns and take the span of the first two
        // independent ones.
        let cols: Vec<[FieldElement; 4]> = (0..4)
            .map(|j| {
                let mut col = [FieldElement::ZERO; 4];
                for (i, row) in m.iter().enumerate() {
                    col[i] = row[j];
                }
                col
            })
            .filter(|col| col.iter().any(|c| !c.is_zero()))
            .collect();
        for a in 0..cols.len() {
            for b in a + 1..cols.len() {
                if let Ok(line) = Line::from_span(ctx, cols[a], cols[b]) {
                    return Ok(line);
                }
            }
        }
        Err(GeomError::DegenerateSpan)
    }

    /// The two pivot columns of the RREF basis.
    pub fn pivot_pattern(&self) -> (usize, usize) {
        let p0 = self.basis[0].iter().position(|c| !c.is_zero()).unwrap();
        let p1 = self.basis[1].iter().position(|c| !c.is_zero()).unwrap();
        (p0, p1)
    }

    /// Exact meet predicate via the polarized Pluecker pairing:
    /// `p01 r23 - p02 r13 + p03 r12 + p12 r03 - p13 r02 + p23 r01 = 0`.
    pub fn meets(&self, ctx: &FieldCtx, other: &Line) -> Result<bool, GeomError> {
        if self.field != other.field || self.field != ctx.id() {
            return Err(GeomError::FieldMismatch);
        }
        let p = &self.pluecker;
        let r = &other.pluecker;
        // Slots: 0=p01 1=p02 2=p03 3=p12 4=p13 5=p23.
        let mut acc = ctx.mul(p[0], r[5]);
        acc = ctx.sub(acc, ctx.mul(p[1], r[4]));
        acc = ctx.add(acc, ctx.mul(p[2], r[3]));
        acc = ctx.add(acc, ctx.mul(p[3], r[2]));
        acc = ctx.sub(acc, ctx.mul(p[4], r[1]));
        acc = ctx.add(acc, ctx.mul(p[5], r[0]));
        Ok(acc.is_zero())
    }

    /// The unique plane containing two distinct meeting lines.
    pub fn span_plane(&self, ctx: &FieldCtx, other: &Line) -> Result<Plane, GeomError> {
        if self.field != other.field || self.field != ctx.id() {
            return Err(GeomError::FieldMismatch);
        }
        if self == other {
            return Err(GeomError::EqualLines);
        }
        let rows: Vec<Vec<FieldElement>> = self
            .basis
            .iter()
            .chain(other.basis.iter())
            .map(|r| r.to_vec())
            .collect();
        let ns = linalg::nullspace(ctx, &rows);
        match ns.len() {
            1 => {
                let mut cov = [FieldElement::ZERO; 4];
                cov.copy_from_slice(&ns[0]);
                Plane::new(ctx, cov)
            }
            0 => Err(GeomError::SkewLines),
            _ => Err(GeomError::EqualLines),
        }
    }

    /// The unique common point of two distinct meeting lines.
    pub fn common_point(&self, ctx: &FieldCtx, other: &Line) -> Result<Point, GeomError> {
        if self.field != other.field || self.field != ctx.id() {
            return Err(GeomError::FieldMismatch);
        }
        if self == other {
            return Err(GeomError::EqualLines);
        }
        // Solve a*r0 + b*r1 = c*s0 + d*s1: nullspace of the 4x4 matrix whose
        // columns are r0, r1, -s0, -s1.
        let mut rows = vec![vec![FieldElement::ZERO; 4]; 4];
        for coord in 0..4 {
            rows[coord][0] = self.basis[0][coord];
            rows[coord][1] = self.basis[1][coord];
            rows[coord][2] = ctx.neg(other.basis[0][coord]);
            rows[coord][3] = ctx.neg(other.basis[1][coord]);
        }
        let ns = linalg::nullspace(ctx, &rows);
        if ns.is_empty() {
            return Err(GeomError::NoCommonPoint);
        }
        let sol = &ns[0];
        let mut coords = [FieldElement::ZERO; 4];
        for c in 0..4 {
            let part_a = ctx.mul(sol[0], self.basis[0][c]);
            let part_b = ctx.mul(sol[1], self.basis[1][c]);
            coords[c] = ctx.add(part_a, part_b);
        }
        Point::new(ctx, coords)
    }

    pub fn contains_point(&self, ctx: &FieldCtx, p: &Point) -> bool {
        let rows = vec![
            self.basis[0].to_vec(),
            self.basis[1].to_vec(),
            p.coords.to_vec(),
        ];
        linalg::rank(ctx, &rows) == 2
    }

    /// The `q + 1` points of the line in a fixed order: `r0 + t*r1` for `t`
    /// in index order, then `r1`.  RREF makes each of these canonical already.
    pub fn points(&self, ctx: &FieldCtx) -> Vec<Point> {
        let mut out = Vec::with_capacity(ctx.q() as usize + 1);
        for t in ctx.elements() {
            let mut coords = [FieldElement::ZERO; 4];
            for c in 0..4 {
                coords[c] = ctx.add(self.basis[0][c], ctx.mul(t, self.basis[1][c]));
            }
            out.push(Point { coords });
        }
        out.push(Point {
            coords: self.basis[1],
        });
        debug_assert!(out.iter().all(|p| Point::new(ctx, p.coords).unwrap() == *p));
        out
    }

    /// The `q + 1` planes through the line, canonicalized, in a fixed order.
    pub fn planes(&self, ctx: &FieldCtx) -> Vec<Plane> {
        let rows: Vec<Vec<FieldElement>> = self.basis.iter().map(|r| r.to_vec()).collect();
        let ns = linalg::nullspace(ctx, &rows);
        debug_assert_eq!(ns.len(), 2);
        let (n0, n1) = (&ns[0], &ns[1]);
        let mut out = Vec::with_capacity(ctx.q() as usize + 1);
        for t in ctx.elements() {
            let mut cov = [FieldElement::ZERO; 4];
            for c in 0..4 {
                cov[c] = ctx.add(n0[c], ctx.mul(t, n1[c]));
            }
            out.push(Plane::new(ctx, cov).expect("nullspace vectors are nonzero"));
        }
        let mut cov = [FieldElement::ZERO; 4];
        cov.copy_from_slice(n1);
        out.push(Plane::new(ctx, cov).unwrap());
        out
    }

    /// Map the line through a field embedding, re-canonicalizing in the target.
    pub fn embed(&self, src: &FieldCtx, dst: &FieldCtx, emb: &Embedding) -> Line {
        let map = |row: &[FieldElement; 4]| {
            let mut out = [FieldElement::ZERO; 4];
            for (o, &x) in out.iter_mut().zip(row) {
                *o = emb.apply(src, dst, x);
            }
            out
        };
        Line::from_span(dst, map(&self.basis[0]), map(&self.basis[1]))
            .expect("embedding preserves independence")
    }
}

/// All points of P^3(F_q) in a fixed deterministic order: grouped by the
/// position of the leading 1, remaining coordinates in index order
/// (most significant first).  Count: `(q^4 - 1)/(q - 1)`.
pub fn enumerate_points(ctx: &FieldCtx) -> Vec<Point> {
    let q = ctx.q() as u64;
    let mut out = Vec::new();
    for lead in 0..4usize {
        let tail = 3 - lead;
        let total = q.pow(tail as u32);
        for code in 0..total {
            let mut coords = [FieldElement::ZERO; 4];
            coords[lead] = FieldElement::ONE;
            let mut c = code;
            for t in (0..tail).rev() {
                coords[lead + 1 + t] = FieldElement((c % q) as u32);
                c /= q;
            }
            out.push(Point { coords });
        }
    }
    out
}

/// A pivot pair `(i, j)` together with the free entry positions of its chart.
pub type ChartPattern = ((usize, usize), Vec<(usize, usize)>);

/// The six RREF pivot patterns of lines in P^3, in enumeration order, each
/// with the list of free entry positions `(row, col)` of its chart.
pub fn chart_patterns() -> [ChartPattern; 6] {
    let patterns = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    patterns.map(|(i, j)| {
        let mut free = Vec::new();
        for col in i + 1..4 {
            if col != j {
                free.push((0, col));
            }
        }
        for col in j + 1..4 {
            free.push((1, col));
        }
        ((i, j), free)
    })
}

/// Build the RREF basis of the chart `(i, j)` with the given free entries.
pub fn chart_line(
    ctx: &FieldCtx,
    pattern: (usize, usize),
    free: &[(usize, usize)],
    values: &[FieldElement],
) -> Line {
    let mut basis = [[FieldElement::ZERO; 4]; 2];
    basis[0][pattern.0] = FieldElement::ONE;
    basis[1][pattern.1] = FieldElement::ONE;
    for (&(r, c), &v) in free.iter().zip(values) {
        basis[r][c] = v;
    }
    Line::from_rref(ctx, basis)
}

/// All lines of P^3(F_q) in a fixed deterministic order (chart-major, free
/// entries in index order).  Count: `(q^2 + 1)(q^2 + q + 1)`.
pub fn enumerate_lines(ctx: &FieldCtx) -> Vec<Line> {
    let q = ctx.q() as u64;
    let mut out = Vec::new();
    for (pattern, free) in chart_patterns() {
        let total = q.pow(free.len() as u32);
        let mut values = vec![FieldElement::ZERO; free.len()];
        for code in 0..total {
            let mut c = code;
            for t in (0..free.len()).rev() {
                values[t] = FieldElement((c % q) as u32);
                c /= q;
            }
            out.push(chart_line(ctx, pattern, &free, &values));
        }
    }
    out
}

/// All planes of P^3(F_q) in canonical covector order.
pub fn enumerate_planes(ctx: &FieldCtx) -> Vec<Plane> {
    let q = ctx.q() as u64;
    let mut out = Vec::new();
    for lead in 0..4usize {
        let tail = 3 - lead;
        let total = q.pow(tail as u32);
        for code in 0..total {
            let mut cov = [FieldElement::ZERO; 4];
            cov[lead] = FieldElement::ONE;
            let mut c = code;
            for t in (0..tail).rev() {
                cov[lead + 1 + t] = FieldElement((c % q) as u32);
                c /= q;
            }
            out.push(Plane {
                covector: cov,
                field: ctx.id(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;
    use std::collections::BTreeSet;

    fn gf(p: u64, k: u32) -> FieldCtx {
        FieldCtx::new(p, k, None).unwrap()
    }

    #[test]
    fn point_counts_match_closed_form() {
        for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)] {
            let ctx = gf(p, k);
            let q = ctx.q() as u64;
            let pts = enumerate_points(&ctx);
            assert_eq!(pts.len() as u64, (q.pow(4) - 1) / (q - 1));
            let set: BTreeSet<Point> = pts.iter().copied().collect();
            assert_eq!(set.len(), pts.len(), "no duplicate points");
        }
    }

    #[test]
    fn line_counts_match_closed_form() {
        for (p, k) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
            let ctx = gf(p, k);
            let q = ctx.q() as u64;
            let lines = enumerate_lines(&ctx);
            assert_eq!(lines.len() as u64, (q * q + 1) * (q * q + q + 1));
            let set: BTreeSet<Line> = lines.iter().copied().collect();
            assert_eq!(set.len(), lines.len(), "no duplicate lines");
        }
        assert_eq!(enumerate_lines(&gf(2, 1)).len(), 35);
        assert_eq!(enumerate_lines(&gf(3, 1)).len(), 130);
        assert_eq!(enumerate_lines(&gf(3, 2)).len(), 7462);
    }

    #[test]
    fn plane_counts_and_incidence() {
        let ctx = gf(2, 1);
        let planes = enumerate_planes(&ctx);
        assert_eq!(planes.len(), 15);
        let points = enumerate_points(&ctx);
        // Every plane of P^3(F_2) holds 7 points (a Fano plane).
        for h in &planes {
            let n = points.iter().filter(|p| h.contains_point(&ctx, p)).count();
            assert_eq!(n, 7);
        }
    }

    #[test]
    fn pluecker_relation_holds_everywhere() {
        let ctx = gf(3, 1);
        for l in enumerate_lines(&ctx) {
            let p = &l.pluecker;
            // p01 p23 - p02 p13 + p03 p12 = 0
            let t1 = ctx.mul(p[0], p[5]);
            let t2 = ctx.mul(p[1], p[4]);
            let t3 = ctx.mul(p[2], p[3]);
            assert!(ctx.add(ctx.sub(t1, t2), t3).is_zero());
            // Self-meet is exactly the relation.
            assert!(l.meets(&ctx, &l).unwrap());
        }
    }

    #[test]
    fn meet_agrees_with_rank_oracle_exhaustively_over_gf2() {
        let ctx = gf(2, 1);
        let lines = enumerate_lines(&ctx);
        for a in &lines {
            for b in &lines {
                let stacked: Vec<Vec<FieldElement>> = a
                    .basis
                    .iter()
                    .chain(b.basis.iter())
                    .map(|r| r.to_vec())
                    .collect();
                let rank = crate::linalg::rank(&ctx, &stacked);
                // Two distinct lines meet iff the union of their coordinate
                // planes has rank 3; equal lines give rank 2.
                let expect = rank <= 3;
                assert_eq!(a.meets(&ctx, b).unwrap(), expect);
            }
        }
    }

    #[test]
    fn points_and_planes_per_line() {
        for (p, k) in [(2, 1), (3, 1), (2, 2)] {
            let ctx = gf(p, k);
            let q = ctx.q() as usize;
            let all_points = enumerate_points(&ctx);
            for l in enumerate_lines(&ctx).iter().take(40) {
                let pts = l.points(&ctx);
                assert_eq!(pts.len(), q + 1);
                let uniq: BTreeSet<Point> = pts.iter().copied().collect();
                assert_eq!(uniq.len(), q + 1);
                for p in &pts {
                    assert!(l.contains_point(&ctx, p));
                }
                // Cross-check with a full membership sweep.
                let swept: BTreeSet<Point> = all_points
                    .iter()
                    .copied()
                    .filter(|p| l.contains_point(&ctx, p))
                    .collect();
                assert_eq!(swept, uniq);

                let planes = l.planes(&ctx);
                assert_eq!(planes.len(), q + 1);
                let uniq_h: BTreeSet<Plane> = planes.iter().copied().collect();
                assert_eq!(uniq_h.len(), q + 1);
                for h in &planes {
                    assert!(h.contains_line(&ctx, l));
                }
            }
        }
    }

    #[test]
    fn double_counting_points_on_lines() {
        for (p, k) in [(2, 1), (3, 1)] {
            let ctx = gf(p, k);
            let q = ctx.q() as u64;
            let lines = enumerate_lines(&ctx);
            let points = enumerate_points(&ctx);
            // Sum over lines of (q+1) incidences = #points * (lines per point).
            let total: u64 = lines.len() as u64 * (q + 1);
            assert_eq!(total, points.len() as u64 * (q * q + q + 1));
        }
    }

    #[test]
    fn pluecker_round_trip_for_every_line() {
        for (p, k) in [(2, 1), (3, 1)] {
            let ctx = gf(p, k);
            for l in enumerate_lines(&ctx) {
                let back = Line::from_pluecker(&ctx, l.pluecker).unwrap();
                assert_eq!(back, l, "round trip through Pluecker coordinates");
            }
        }
    }

    #[test]
    fn span_plane_and_common_point_consistency() {
        let ctx = gf(3, 1);
        let lines = enumerate_lines(&ctx);
        let mut checked = 0;
        for (i, a) in lines.iter().enumerate() {
            for b in lines.iter().skip(i + 1) {
                if !a.meets(&ctx, b).unwrap() {
                    assert_eq!(a.span_plane(&ctx, b).unwrap_err(), GeomError::SkewLines);
                    continue;
                }
                let h = a.span_plane(&ctx, b).unwrap();
                assert!(h.contains_line(&ctx, a));
                assert!(h.contains_line(&ctx, b));
                let pt = a.common_point(&ctx, b).unwrap();
                assert!(a.contains_point(&ctx, &pt));
                assert!(b.contains_point(&ctx, &pt));
                assert!(h.contains_point(&ctx, &pt));
                checked += 1;
                if checked > 4000 {
                    return;
                }
            }
        }
    }

    #[test]
    fn degenerate_span_is_rejected() {
        let ctx = gf(2, 1);
        let v = [
            FieldElement::ONE,
            FieldElement::ZERO,
            FieldElement::ONE,
            FieldElement::ZERO,
        ];
        assert_eq!(
            Line::from_span(&ctx, v, v).unwrap_err(),
            GeomError::DegenerateSpan
        );
    }

    #[test]
    fn field_mismatch_detected() {
        let f2 = gf(2, 1);
        let f4 = gf(2, 2);
        let a = enumerate_lines(&f2)[0];
        let b = enumerate_lines(&f4)[0];
        assert_eq!(a.meets(&f2, &b).unwrap_err(), GeomError::FieldMismatch);
        assert_eq!(a.meets(&f4, &a).unwrap_err(), GeomError::FieldMismatch);
    }

    #[test]
    fn embedding_lines_preserves_incidence() {
        let f2 = gf(2, 1);
        let f4 = gf(2, 2);
        let emb = crate::gf::Embedding::new(&f2, &f4).unwrap();
        let lines = enumerate_lines(&f2);
        for a in lines.iter().take(12) {
            let ea = a.embed(&f2, &f4, &emb);
            for b in lines.iter().take(12) {
                let eb = b.embed(&f2, &f4, &emb);
                assert_eq!(
                    a.meets(&f2, b).unwrap(),
                    ea.meets(&f4, &eb).unwrap(),
                    "meet must be preserved by field extension"
                );
            }
        }
    }
}
