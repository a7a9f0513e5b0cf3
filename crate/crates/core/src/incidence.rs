//! Incidence data of a surface's line set: which planes carry which lines,
//! whether plane sections split completely, the exact integer intersection
//! matrix of the line classes, and the lattice ranks derived from it.

use crate::forms::TernaryForm;
use crate::gf::{FieldCtx, FieldElement};
use crate::intmat;
use crate::lines::LineSet;
use crate::proj3::{Plane, Point};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// Group the surface lines by the planes containing them.  Every plane that
/// contains at least one surface line appears; indices are sorted.
pub fn plane_groups(ls: &LineSet) -> BTreeMap<Plane, Vec<usize>> {
    let ctx = ls.ctx();
    let mut groups: BTreeMap<Plane, Vec<usize>> = BTreeMap::new();
    for (i, line) in ls.lines().iter().enumerate() {
        for plane in line.planes(ctx) {
            groups.entry(plane).or_default().push(i);
        }
    }
    groups
}

/// The linear form cutting surface line `i` inside `plane`, expressed in the
/// plane-section parameters of [`crate::forms::SurfaceForm::plane_section`].
/// The line is the intersection of `plane` with any other plane through it;
/// restricting that second covector to the section parametrization gives the
/// form.
pub fn line_form_in_plane(ls: &LineSet, plane: &Plane, i: usize) -> [FieldElement; 3] {
    let ctx = ls.ctx();
    let line = ls.line(i);
    let other = line
        .planes(ctx)
        .into_iter()
        .find(|h| h != plane)
        .expect("a line lies on q + 1 > 1 planes");
    restrict_covector(ctx, plane, &other.covector)
}

/// Restrict a covector to the parametrization of `plane` (parameters are the
/// non-pivot coordinates; the pivot coordinate is minus the rest).
fn restrict_covector(
    ctx: &FieldCtx,
    plane: &Plane,
    covector: &[FieldElement; 4],
) -> [FieldElement; 3] {
    let pivot = plane.pivot();
    let params: Vec<usize> = (0..4).filter(|&i| i != pivot).collect();
    let mut out = [FieldElement::ZERO; 3];
    for (slot, &pos) in params.iter().enumerate() {
        out[slot] = ctx.sub(covector[pos], ctx.mul(covector[pivot], plane.covector[pos]));
    }
    out
}

/// How a plane meets the surface.
#[derive(Debug, Clone, Serialize)]
pub struct PlaneClass {
    /// Indices of the surface lines contained in the plane.
    pub lines: Vec<usize>,
    /// Multiplicity of each line as a component of the plane section,
    /// parallel to `lines`.
    pub multiplicities: Vec<u32>,
    /// True when the section splits completely into the listed lines, i.e.
    /// the multiplicities sum to the degree.
    pub full: bool,
}

/// Classify one plane by exact division: peel each contained line's linear
/// form off the plane section as many times as it divides.
pub fn classify_plane(ls: &LineSet, plane: &Plane, line_indices: &[usize]) -> PlaneClass {
    let ctx = ls.ctx();
    let section = ls
        .form()
        .plane_section(plane)
        .expect("plane and form share a field");
    let mut residual = section.form.clone();
    let mut multiplicities = Vec::with_capacity(line_indices.len());
    for &i in line_indices {
        let lin = line_form_in_plane(ls, plane, i);
        let mut mult = 0u32;
        while let Some(q) = div_linear(ctx, &residual, &lin) {
            residual = q;
            mult += 1;
            if residual.degree == 0 {
                break;
            }
        }
        multiplicities.push(mult);
    }
    let full = residual.degree == 0 && !residual.is_zero();
    PlaneClass {
        lines: line_indices.to_vec(),
        multiplicities,
        full,
    }
}

/// Exact quotient of a ternary form by a nonzero linear form, or `None` when
/// the division leaves a remainder.
fn div_linear(ctx: &FieldCtx, form: &TernaryForm, lin: &[FieldElement; 3]) -> Option<TernaryForm> {
    if form.is_zero() {
        return None;
    }
    let pivot = lin.iter().position(|c| !c.is_zero())?;
    let inv = ctx.inv(lin[pivot]);
    let mut rem = form.terms.clone();
    let mut quot: BTreeMap<[u8; 3], FieldElement> = BTreeMap::new();
    // Standard reduction: repeatedly kill the monomial with the highest
    // pivot-variable degree (ties broken by key order).
    loop {
        let lead = rem
            .iter()
            .filter(|(e, _)| e[pivot] > 0)
            .max_by_key(|(e, _)| (e[pivot], **e))
            .map(|(e, c)| (*e, *c));
        let Some((e, c)) = lead else { break };
        let factor = ctx.mul(c, inv);
        let mut qe = e;
        qe[pivot] -= 1;
        let entry = quot.entry(qe).or_insert(FieldElement::ZERO);
        *entry = ctx.add(*entry, factor);
        // rem -= factor * qe * lin
        for (v, &lc) in lin.iter().enumerate() {
            if lc.is_zero() {
                continue;
            }
            let mut te = qe;
            te[v] += 1;
            let sub = ctx.mul(factor, lc);
            let slot = rem.entry(te).or_insert(FieldElement::ZERO);
            *slot = ctx.sub(*slot, sub);
            if slot.is_zero() {
                rem.remove(&te);
            }
        }
    }
    if !rem.is_empty() {
        return None; // remainder free of the pivot variable but nonzero
    }
    quot.retain(|_, c| !c.is_zero());
    if quot.is_empty() {
        return None;
    }
    Some(TernaryForm {
        degree: form.degree - 1,
        terms: quot,
    })
}

/// All planes whose section splits completely, with their line groups.
pub fn full_planes(ls: &LineSet) -> Vec<(Plane, Vec<usize>)> {
    plane_groups(ls)
        .into_iter()
        .filter(|(plane, lines)| classify_plane(ls, plane, lines).full)
        .collect()
}

/// The exact intersection matrix of the line classes, with self-intersection
/// `2 - d` on the diagonal and `1`/`0` off the diagonal according to whether
/// the lines meet.  With `include_h` the hyperplane class is prepended as row
/// and column 0 (`h . h = d`, `h . line = 1`).
pub fn intersection_matrix(ls: &LineSet, include_h: bool) -> Vec<Vec<BigInt>> {
    let n = ls.count();
    let d = ls.form().degree() as i64;
    let offset = usize::from(include_h);
    let dim = n + offset;
    let mut m = vec![vec![BigInt::zero(); dim]; dim];
    if include_h {
        m[0][0] = BigInt::from(d);
        for i in 0..n {
            m[0][i + 1] = BigInt::one();
            m[i + 1][0] = BigInt::one();
        }
    }
    for i in 0..n {
        m[i + offset][i + offset] = BigInt::from(2 - d);
        for j in (i + 1)..n {
            if ls.meets(i, j) {
                m[i + offset][j + offset] = BigInt::one();
                m[j + offset][i + offset] = BigInt::one();
            }
        }
    }
    m
}

/// Rank of the lattice spanned by the hyperplane class and all line classes.
pub fn lattice_rank(ls: &LineSet) -> usize {
    intmat::rank_exact(&intersection_matrix(ls, true))
}

/// A deterministic nonsingular Gram submatrix of full lattice rank: start
/// from the hyperplane class and greedily keep each line class that raises
/// the rank of the growing Gram matrix.
#[derive(Debug, Clone, Serialize)]
pub struct RankBasis {
    /// Indices of the kept lines; the hyperplane class is always included
    /// ahead of them.
    pub kept_lines: Vec<usize>,
    pub rank: usize,
    pub det: BigInt,
}

pub fn select_rank_basis(ls: &LineSet) -> RankBasis {
    let full = intersection_matrix(ls, true);
    let n = ls.count();
    let mut kept: Vec<usize> = vec![0]; // row 0 = hyperplane class
    let mut rank = 1; // h . h = d != 0
    for i in 0..n {
        let mut trial = kept.clone();
        trial.push(i + 1);
        let sub = submatrix(&full, &trial);
        let r = intmat::rank_exact(&sub);
        if r > rank {
            kept = trial;
            rank = r;
        }
    }
    let sub = submatrix(&full, &kept);
    let det = intmat::det_exact(&sub);
    RankBasis {
        kept_lines: kept[1..].iter().map(|&i| i - 1).collect(),
        rank,
        det,
    }
}

fn submatrix(m: &[Vec<BigInt>], idx: &[usize]) -> Vec<Vec<BigInt>> {
    idx.iter()
        .map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect())
        .collect()
}

/// Closed-form determinant of the Gram block of `m` pairwise-meeting lines
/// on a degree-`d` surface (diagonal `2 - d`, off-diagonal `1`):
/// `(m + 1 - d) * (1 - d)^(m - 1)`.
pub fn block_det_closed_form(d: u64, m: u64) -> BigInt {
    let mut det = BigInt::from(m as i64 + 1 - d as i64);
    for _ in 1..m {
        det *= BigInt::from(1 - d as i64);
    }
    det
}

/// The per-plane incidence profile of one line: how the other surface lines
/// meeting it distribute over the pencil of planes through it.
#[derive(Debug, Clone, Serialize)]
pub struct LineProfile {
    pub line: usize,
    /// For each of the `q + 1` planes through the line (sorted): the other
    /// surface lines it contains and whether it is a full plane.
    pub planes: Vec<PlanePencilEntry>,
    pub full_plane_count: usize,
    pub meeting_total: usize,
    /// True when the profile attains the extremal shape: `d^2 - 2d + 2` full
    /// planes each carrying `d - 1` other lines, all remaining planes empty,
    /// for a meeting total of `d^3 - 3d^2 + 4d - 2`.
    pub maximal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanePencilEntry {
    pub plane: Plane,
    pub others: Vec<usize>,
    pub full: bool,
    /// The block value governing the plane's contribution to the lattice
    /// determinant: `d - 2` for a completely split plane, the count of other
    /// lines otherwise.
    pub m: usize,
}

pub fn line_profile(ls: &LineSet, i: usize) -> LineProfile {
    let ctx = ls.ctx();
    let groups = plane_groups(ls);
    let d = ls.form().degree() as usize;
    let mut planes = Vec::new();
    let mut meeting_total = 0;
    let mut full_plane_count = 0;
    let mut shape_ok = true;
    for plane in ls.line(i).planes(ctx) {
        let all = groups.get(&plane).cloned().unwrap_or_default();
        let others: Vec<usize> = all.iter().copied().filter(|&j| j != i).collect();
        let full = classify_plane(ls, &plane, &all).full;
        meeting_total += others.len();
        if full {
            full_plane_count += 1;
        }
        match others.len() {
            0 => {}
            n if n == d - 1 => {
                if !full {
                    shape_ok = false;
                }
            }
            _ => shape_ok = false,
        }
        let m = if full { d - 2 } else { others.len() };
        planes.push(PlanePencilEntry {
            plane,
            others,
            full,
            m,
        });
    }
    let expect_full = d * d - 2 * d + 2;
    let expect_meeting = d * d * d - 3 * d * d + 4 * d - 2;
    let maximal = shape_ok && full_plane_count == expect_full && meeting_total == expect_meeting;
    LineProfile {
        line: i,
        planes,
        full_plane_count,
        meeting_total,
        maximal,
    }
}

/// Global verdict for the extremal profile shape: the line count must equal
/// `d^2 (d^2 - 3d + 3)` and, when it does, every line's profile must be
/// maximal.  Carries the first counterexample as a witness.
#[derive(Debug, Clone, Serialize)]
pub struct MaximalProfileVerdict {
    pub line_count: usize,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub expected_count: BigInt,
    pub count_matches: bool,
    pub profiles_checked: usize,
    pub pass: bool,
    pub witness: Option<String>,
}

pub fn verify_maximal_profile(ls: &LineSet) -> MaximalProfileVerdict {
    let d = ls.form().degree() as u64;
    let expected_count = crate::bounds::max_lines(d);
    let count_matches = BigInt::from(ls.count()) == expected_count;
    if !count_matches {
        return MaximalProfileVerdict {
            line_count: ls.count(),
            expected_count: expected_count.clone(),
            count_matches,
            profiles_checked: 0,
            pass: false,
            witness: Some(format!(
                "line count {} differs from the bound {}",
                ls.count(),
                expected_count
            )),
        };
    }
    let mut witness = None;
    let mut profiles_checked = 0;
    for i in 0..ls.count() {
        let profile = line_profile(ls, i);
        profiles_checked += 1;
        if !profile.maximal {
            witness = Some(format!(
                "line {i} lies in {} full planes and meets {} lines",
                profile.full_plane_count, profile.meeting_total
            ));
            break;
        }
    }
    MaximalProfileVerdict {
        line_count: ls.count(),
        expected_count,
        count_matches,
        pass: witness.is_none(),
        profiles_checked,
        witness,
    }
}

/// For every surface point on at least two lines: the lines through it must
/// be coplanar and number at most `d` (on a smooth surface they all lie in
/// the tangent plane, whose section has degree `d`).
#[derive(Debug, Clone, Serialize)]
pub struct CoplanarityReport {
    pub pass: bool,
    pub violations: Vec<CoplanarityViolation>,
    /// Points lying on at least two surface lines, with the line count.
    pub concurrent_points: Vec<(Point, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoplanarityViolation {
    pub point: Point,
    pub lines: Vec<usize>,
    pub coplanar: bool,
    pub within_degree_bound: bool,
}

pub fn coplanarity_check(ls: &LineSet) -> CoplanarityReport {
    let ctx = ls.ctx();
    let d = ls.form().degree() as usize;
    let mut through: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
    for (i, line) in ls.lines().iter().enumerate() {
        for pt in line.points(ctx) {
            through.entry(pt).or_default().push(i);
        }
    }
    let mut violations = Vec::new();
    let mut concurrent_points = Vec::new();
    for (pt, lines) in &through {
        if lines.len() < 2 {
            continue;
        }
        concurrent_points.push((*pt, lines.len()));
        // Coplanarity: all basis rows of the lines span rank <= 3.
        let rows: Vec<Vec<FieldElement>> = lines
            .iter()
            .flat_map(|&i| ls.line(i).basis.iter().map(|r| r.to_vec()))
            .collect();
        let coplanar = crate::linalg::rank(ctx, &rows) <= 3;
        let within_degree_bound = lines.len() <= d;
        if !coplanar || !within_degree_bound {
            violations.push(CoplanarityViolation {
                point: *pt,
                lines: lines.clone(),
                coplanar,
                within_degree_bound,
            });
        }
    }
    CoplanarityReport {
        pass: violations.is_empty(),
        violations,
        concurrent_points,
    }
}
