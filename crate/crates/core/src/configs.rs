//! Detection, validation, and normalization of the special line
//! configurations: doubly ruled quadric intersections, stars of concurrent
//! coplanar lines, paired plane families carrying a grid of lines, and the
//! Hermitian-style extremal decomposition of a form.
//!
//! Everything here emits *certificates*: self-contained data that is
//! re-validated against the surface on emission, so a returned certificate is
//! proof of the configuration rather than a claim about one.

use crate::bounds;
use crate::forms::{FormError, SurfaceForm};
use crate::gf::{FieldCtx, FieldElement};
use crate::incidence::{full_planes, plane_groups};
use crate::linalg::Mat4;
use crate::lines::{LineSet, LinesError};
use crate::proj3::{GeomError, Line, Plane, Point};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line index {0} out of range")]
    BadLineIndex(usize),
    #[error("the three lines are not pairwise skew")]
    NotATriad,
    #[error("certificate does not match the surface: {0}")]
    CertificateMismatch(String),
    #[error("the certificate is not valid for this form: {0}")]
    RescaleInconsistent(String),
    #[error("the family covectors do not give an invertible change of coordinates")]
    SingularChange,
    #[error("normalization failed: {0}")]
    NormalizeFailed(String),
    #[error("form error: {0}")]
    Form(#[from] FormError),
    #[error("line error: {0}")]
    Lines(#[from] LinesError),
    #[error("geometry error: {0}")]
    Geom(#[from] GeomError),
}

// ---------------------------------------------------------------------------
// Doubly ruled quadric configurations
// ---------------------------------------------------------------------------

/// Two rulings of `d` surface lines each, meeting in a complete bipartite
/// pattern: the surface cuts a doubly ruled quadric in `d` lines of each
/// ruling.  `ruling_a` contains the seed triad.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadricCertificate {
    pub ruling_a: Vec<usize>,
    pub ruling_b: Vec<usize>,
}

/// Starting from three pairwise skew surface lines, look for the full quadric
/// configuration: the in-surface transversals of the triad must number
/// exactly `d` and be pairwise skew, and the lines meeting all of them must
/// again number `d`, contain the triad, and be pairwise skew.
pub fn find_quadric_configuration(
    ls: &LineSet,
    triad: [usize; 3],
) -> Result<Option<QuadricCertificate>, ConfigError> {
    let d = ls.form().degree() as usize;
    for &i in &triad {
        if i >= ls.count() {
            return Err(ConfigError::BadLineIndex(i));
        }
    }
    if triad[0] == triad[1] || triad[1] == triad[2] || triad[0] == triad[2] {
        return Err(ConfigError::NotATriad);
    }
    let lines: Vec<Line> = triad.iter().map(|&i| *ls.line(i)).collect();
    let transversals = match ls.transversals(&lines) {
        Ok(t) => t,
        Err(LinesError::NotSkew) => return Err(ConfigError::NotATriad),
        Err(e) => return Err(e.into()),
    };
    if transversals.len() != d {
        return Ok(None);
    }
    let ctx = ls.ctx();
    for (a, t) in transversals.iter().enumerate() {
        for u in &transversals[a + 1..] {
            if t.meets(ctx, u)? {
                return Ok(None);
            }
        }
    }
    let ruling_a_lines = ls.transversals(&transversals)?;
    if ruling_a_lines.len() != d {
        return Ok(None);
    }
    for (a, t) in ruling_a_lines.iter().enumerate() {
        for u in &ruling_a_lines[a + 1..] {
            if t.meets(ctx, u)? {
                return Ok(None);
            }
        }
    }
    let ruling_a: Vec<usize> = ruling_a_lines
        .iter()
        .map(|l| ls.index_of(l).expect("transversals are surface lines"))
        .collect();
    let ruling_b: Vec<usize> = transversals
        .iter()
        .map(|l| ls.index_of(l).expect("transversals are surface lines"))
        .collect();
    if !triad.iter().all(|i| ruling_a.contains(i)) {
        return Ok(None);
    }
    let cert = QuadricCertificate { ruling_a, ruling_b };
    validate_quadric(ls, &cert)?;
    Ok(Some(cert))
}

/// Re-check a quadric certificate against the surface from scratch.
pub fn validate_quadric(ls: &LineSet, cert: &QuadricCertificate) -> Result<(), ConfigError> {
    let d = ls.form().degree() as usize;
    let ctx = ls.ctx();
    for &i in cert.ruling_a.iter().chain(&cert.ruling_b) {
        if i >= ls.count() {
            return Err(ConfigError::BadLineIndex(i));
        }
    }
    let a_set: BTreeSet<usize> = cert.ruling_a.iter().copied().collect();
    let b_set: BTreeSet<usize> = cert.ruling_b.iter().copied().collect();
    if a_set.len() != d || b_set.len() != d {
        return Err(ConfigError::CertificateMismatch(
            "each ruling must consist of d distinct lines".into(),
        ));
    }
    if !a_set.is_disjoint(&b_set) {
        return Err(ConfigError::CertificateMismatch(
            "the rulings overlap".into(),
        ));
    }
    for ruling in [&cert.ruling_a, &cert.ruling_b] {
        for (x, &i) in ruling.iter().enumerate() {
            for &j in &ruling[x + 1..] {
                if ls.line(i).meets(ctx, ls.line(j))? {
                    return Err(ConfigError::CertificateMismatch(format!(
                        "lines {i} and {j} of one ruling meet"
                    )));
                }
            }
        }
    }
    for &i in &cert.ruling_a {
        for &j in &cert.ruling_b {
            if !ls.line(i).meets(ctx, ls.line(j))? {
                return Err(ConfigError::CertificateMismatch(format!(
                    "lines {i} and {j} of opposite rulings are skew"
                )));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Stars
// ---------------------------------------------------------------------------

/// A completely-split plane whose lines are concurrent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarCertificate {
    pub plane: Plane,
    pub lines: Vec<usize>,
    pub center: Point,
}

/// All stars of the surface: completely-split planes in which every
/// contained line passes through one common point.
pub fn find_stars(ls: &LineSet) -> Vec<StarCertificate> {
    let ctx = ls.ctx();
    let mut out = Vec::new();
    for (plane, lines) in full_planes(ls) {
        if lines.len() < 2 {
            continue;
        }
        let Ok(center) = ls.line(lines[0]).common_point(ctx, ls.line(lines[1])) else {
            continue;
        };
        if lines[2..]
            .iter()
            .all(|&i| ls.line(i).contains_point(ctx, &center))
        {
            out.push(StarCertificate {
                plane,
                lines,
                center,
            });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Star-chord plane pairs
// ---------------------------------------------------------------------------

/// Two families of `d` completely-split planes whose pairwise intersections
/// across families are the `d^2` lines of a grid; the planes within one
/// family share a common chord (a line of P^3 not on the surface).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarChordCertificate {
    pub h_planes: Vec<Plane>,
    pub k_planes: Vec<Plane>,
    /// `grid[i][j]` is the surface line `h_planes[i]` and `k_planes[j]` share.
    pub grid: Vec<Vec<usize>>,
    pub chord_h: Line,
    pub chord_k: Line,
}

/// The line in which two distinct planes intersect.
fn plane_pair_line(ctx: &FieldCtx, a: &Plane, b: &Plane) -> Option<Line> {
    let rows = vec![a.covector.to_vec(), b.covector.to_vec()];
    let ns = crate::linalg::nullspace(ctx, &rows);
    if ns.len() != 2 {
        return None; // equal planes
    }
    let v0: [FieldElement; 4] = ns[0].clone().try_into().unwrap();
    let v1: [FieldElement; 4] = ns[1].clone().try_into().unwrap();
    Line::from_span(ctx, v0, v1).ok()
}

/// Search for every star-chord pair of plane families.  Seeds are unordered
/// pairs of completely-split planes sharing no surface line; a candidate
/// opposite family consists of the full planes sharing a line with both
/// seeds, and the seed family is reconstructed from pairs of the candidate
/// family.  Every certificate is validated in full before being emitted, and
/// results are deduplicated and returned in a canonical order.
pub fn find_star_chord_pairs(ls: &LineSet) -> Result<Vec<StarChordCertificate>, ConfigError> {
    let d = ls.form().degree() as usize;
    let fp = full_planes(ls);
    let fp_lines: Vec<BTreeSet<usize>> = fp
        .iter()
        .map(|(_, lines)| lines.iter().copied().collect())
        .collect();
    // Which full planes contain each line.
    let mut line_to_fp: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (pi, lines) in fp_lines.iter().enumerate() {
        for &l in lines {
            line_to_fp.entry(l).or_default().push(pi);
        }
    }
    let sharers: Vec<Vec<usize>> = fp_lines
        .iter()
        .map(|lines| {
            let mut s: BTreeSet<usize> = BTreeSet::new();
            for l in lines {
                s.extend(line_to_fp[l].iter().copied());
            }
            s.into_iter().collect()
        })
        .collect();
    let share_line = |a: usize, b: usize| -> bool { !fp_lines[a].is_disjoint(&fp_lines[b]) };
    let intersect_sorted = |a: &[usize], b: &[usize]| -> Vec<usize> {
        let bs: BTreeSet<usize> = b.iter().copied().collect();
        a.iter().copied().filter(|x| bs.contains(x)).collect()
    };
    let feasible_family = |cand: &[usize]| -> bool {
        cand.len() == d
            && cand
                .iter()
                .enumerate()
                .all(|(x, &a)| cand[x + 1..].iter().all(|&b| !share_line(a, b)))
    };

    let mut seen: BTreeSet<(Vec<Plane>, Vec<Plane>)> = BTreeSet::new();
    let mut out = Vec::new();
    for p in 0..fp.len() {
        for q in (p + 1)..fp.len() {
            if share_line(p, q) {
                continue;
            }
            let k_family = intersect_sorted(&sharers[p], &sharers[q]);
            if !feasible_family(&k_family) {
                continue;
            }
            // Reconstruct the seed-side family from pairs of the candidate
            // family; a single fixed pair is not enough, so try them all.
            'pairs: for a in 0..d {
                for b in (a + 1)..d {
                    let h_family = intersect_sorted(&sharers[k_family[a]], &sharers[k_family[b]]);
                    if !feasible_family(&h_family)
                        || !h_family.contains(&p)
                        || !h_family.contains(&q)
                    {
                        continue;
                    }
                    let h_planes: Vec<Plane> = h_family.iter().map(|&i| fp[i].0).collect();
                    let k_planes: Vec<Plane> = k_family.iter().map(|&i| fp[i].0).collect();
                    let Ok(cert) = assemble_star_chord(ls, h_planes, k_planes) else {
                        continue;
                    };
                    let key = canonical_key(&cert);
                    if seen.insert(key) {
                        out.push(cert);
                    }
                    break 'pairs;
                }
            }
        }
    }
    out.sort_by_key(canonical_key);
    Ok(out)
}

fn canonical_key(cert: &StarChordCertificate) -> (Vec<Plane>, Vec<Plane>) {
    let mut h = cert.h_planes.clone();
    let mut k = cert.k_planes.clone();
    h.sort();
    k.sort();
    if k < h {
        std::mem::swap(&mut h, &mut k);
    }
    (h, k)
}

/// Build and fully validate a star-chord certificate from two plane families.
pub fn assemble_star_chord(
    ls: &LineSet,
    mut h_planes: Vec<Plane>,
    mut k_planes: Vec<Plane>,
) -> Result<StarChordCertificate, ConfigError> {
    let d = ls.form().degree() as usize;
    let ctx = ls.ctx();
    h_planes.sort();
    h_planes.dedup();
    k_planes.sort();
    k_planes.dedup();
    if h_planes.len() != d || k_planes.len() != d {
        return Err(ConfigError::CertificateMismatch(format!(
            "expected two families of {d} distinct planes"
        )));
    }
    let groups = plane_groups(ls);
    let group_of = |plane: &Plane| -> Result<BTreeSet<usize>, ConfigError> {
        let lines = groups.get(plane).ok_or_else(|| {
            ConfigError::CertificateMismatch("a family plane contains no surface line".into())
        })?;
        if !crate::incidence::classify_plane(ls, plane, lines).full {
            return Err(ConfigError::CertificateMismatch(
                "a family plane does not split completely".into(),
            ));
        }
        Ok(lines.iter().copied().collect())
    };
    let h_lines: Vec<BTreeSet<usize>> = h_planes.iter().map(&group_of).collect::<Result<_, _>>()?;
    let k_lines: Vec<BTreeSet<usize>> = k_planes.iter().map(&group_of).collect::<Result<_, _>>()?;
    // The grid: a unique shared surface line for every cross pair.
    let mut grid = vec![vec![0usize; d]; d];
    let mut all: BTreeSet<usize> = BTreeSet::new();
    for i in 0..d {
        for j in 0..d {
            let shared: Vec<usize> = h_lines[i].intersection(&k_lines[j]).copied().collect();
            if shared.len() != 1 {
                return Err(ConfigError::CertificateMismatch(format!(
                    "family planes {i} and {j} share {} surface lines, expected 1",
                    shared.len()
                )));
            }
            grid[i][j] = shared[0];
            all.insert(shared[0]);
        }
    }
    if all.len() != d * d {
        return Err(ConfigError::CertificateMismatch(
            "grid lines are not distinct".into(),
        ));
    }
    // Each family plane contains exactly its grid row/column.
    for i in 0..d {
        let row: BTreeSet<usize> = (0..d).map(|j| grid[i][j]).collect();
        if row != h_lines[i] {
            return Err(ConfigError::CertificateMismatch(
                "a seed-family plane contains lines outside the grid".into(),
            ));
        }
        let col: BTreeSet<usize> = (0..d).map(|j| grid[j][i]).collect();
        if col != k_lines[i] {
            return Err(ConfigError::CertificateMismatch(
                "an opposite-family plane contains lines outside the grid".into(),
            ));
        }
    }
    // Within one family, all planes pass through a common chord off the
    // surface.
    let chord_h = common_chord(ls, &h_planes)?;
    let chord_k = common_chord(ls, &k_planes)?;
    if chord_h.meets(ctx, &chord_k)? {
        return Err(ConfigError::CertificateMismatch(
            "the two family chords are not skew".into(),
        ));
    }
    // Cross-grid skewness: grid lines in different rows and columns are skew.
    for i in 0..d {
        for j in 0..d {
            for i2 in (i + 1)..d {
                for j2 in 0..d {
                    if j2 == j {
                        continue;
                    }
                    if ls.meets(grid[i][j], grid[i2][j2]) {
                        return Err(ConfigError::CertificateMismatch(format!(
                            "grid lines ({i},{j}) and ({i2},{j2}) meet"
                        )));
                    }
                }
            }
        }
    }
    Ok(StarChordCertificate {
        h_planes,
        k_planes,
        grid,
        chord_h,
        chord_k,
    })
}

fn common_chord(ls: &LineSet, planes: &[Plane]) -> Result<Line, ConfigError> {
    let ctx = ls.ctx();
    let first = plane_pair_line(ctx, &planes[0], &planes[1])
        .ok_or_else(|| ConfigError::CertificateMismatch("family planes coincide".into()))?;
    for (x, a) in planes.iter().enumerate() {
        for b in &planes[x + 1..] {
            let line = plane_pair_line(ctx, a, b)
                .ok_or_else(|| ConfigError::CertificateMismatch("family planes coincide".into()))?;
            if line != first {
                return Err(ConfigError::CertificateMismatch(
                    "family planes do not share a common pencil line".into(),
                ));
            }
        }
    }
    if ls.form().contains_line(&first)? {
        return Err(ConfigError::CertificateMismatch(
            "the family pencil line lies on the surface".into(),
        ));
    }
    Ok(first)
}

// ---------------------------------------------------------------------------
// Normal form from a star-chord certificate
// ---------------------------------------------------------------------------

/// Result of moving a star-chord configuration into standard position: the
/// first two seed covectors become `w` and `x`, the first two opposite
/// covectors become `y` and `z`, and the form becomes
///
/// `scale_h * x * w * (product of ell) + scale_k * y * z * (product of em)`
///
/// with every monomial pure in `{x, w}` or pure in `{y, z}`.
#[derive(Debug, Clone, Serialize)]
pub struct NormalFormData {
    /// Substitution matrix `T`: the normalized form is `f(T x)`.
    pub transform: Mat4,
    pub normalized: SurfaceForm,
    /// The `d - 2` residual seed-family factors, supported on `{x, w}` with
    /// leading coefficient 1 and both coefficients nonzero.
    pub ell: Vec<[FieldElement; 4]>,
    /// The `d - 2` residual opposite-family factors, supported on `{y, z}`.
    pub em: Vec<[FieldElement; 4]>,
    pub scale_h: FieldElement,
    pub scale_k: FieldElement,
}

/// Solve `f = a * p + b * q` for scalars exactly, monomial by monomial.
fn solve_two_scales(
    ctx: &FieldCtx,
    f: &SurfaceForm,
    p: &SurfaceForm,
    q: &SurfaceForm,
) -> Result<(FieldElement, FieldElement), ConfigError> {
    let mut keys: BTreeSet<[u8; 4]> = BTreeSet::new();
    keys.extend(f.terms().keys());
    keys.extend(p.terms().keys());
    keys.extend(q.terms().keys());
    let get = |form: &SurfaceForm, e: &[u8; 4]| {
        form.terms().get(e).copied().unwrap_or(FieldElement::ZERO)
    };
    // Find two monomials whose (p, q) coefficient pairs are independent.
    let rows: Vec<([u8; 4], FieldElement, FieldElement, FieldElement)> = keys
        .iter()
        .map(|e| (*e, get(p, e), get(q, e), get(f, e)))
        .collect();
    let mut solution = None;
    'search: for (i, r1) in rows.iter().enumerate() {
        for r2 in &rows[i + 1..] {
            let det = ctx.sub(ctx.mul(r1.1, r2.2), ctx.mul(r2.1, r1.2));
            if det.is_zero() {
                continue;
            }
            let inv = ctx.inv(det);
            let a = ctx.mul(inv, ctx.sub(ctx.mul(r1.3, r2.2), ctx.mul(r2.3, r1.2)));
            let b = ctx.mul(inv, ctx.sub(ctx.mul(r1.1, r2.3), ctx.mul(r2.1, r1.3)));
            solution = Some((a, b));
            break 'search;
        }
    }
    let (a, b) = solution.ok_or_else(|| {
        ConfigError::NormalizeFailed("the two plane products are proportional".into())
    })?;
    for (e, pe, qe, fe) in rows {
        let lhs = ctx.add(ctx.mul(a, pe), ctx.mul(b, qe));
        if lhs != fe {
            return Err(ConfigError::RescaleInconsistent(format!(
                "coefficient mismatch at exponents {e:?}"
            )));
        }
    }
    Ok((a, b))
}

fn covector_form(
    ctx: &Arc<FieldCtx>,
    covector: &[FieldElement; 4],
) -> Result<SurfaceForm, ConfigError> {
    Ok(SurfaceForm::linear(Arc::clone(ctx), covector)?)
}

fn family_product(ctx: &Arc<FieldCtx>, planes: &[Plane]) -> Result<SurfaceForm, ConfigError> {
    let mut acc = covector_form(ctx, &planes[0].covector)?;
    for plane in &planes[1..] {
        acc = acc.mul(&covector_form(ctx, &plane.covector)?)?;
    }
    Ok(acc)
}

/// Row-vector times matrix: the covector of a plane after substituting
/// `x = M x'`.
fn transform_covector(ctx: &FieldCtx, covector: &[FieldElement; 4], m: &Mat4) -> [FieldElement; 4] {
    let mut out = [FieldElement::ZERO; 4];
    for (j, o) in out.iter_mut().enumerate() {
        for (i, &c) in covector.iter().enumerate() {
            *o = ctx.add(*o, ctx.mul(c, m.entries[i][j]));
        }
    }
    out
}

/// Move a validated star-chord configuration into standard position.
///
/// The change of coordinates sends the seed-family pencil onto the pencil
/// through `V(x, w)` and the opposite pencil onto the pencil through
/// `V(y, z)`; the form is re-expressed in the new coordinates and checked,
/// exactly, to equal the two-product combination it must be.
pub fn normalize_star_chord(
    ls: &LineSet,
    cert: &StarChordCertificate,
) -> Result<NormalFormData, ConfigError> {
    let ctx = ls.ctx();
    // Re-validate the certificate before trusting it; a certificate for a
    // different surface fails here.
    let checked = assemble_star_chord(ls, cert.h_planes.clone(), cert.k_planes.clone())
        .map_err(|e| ConfigError::RescaleInconsistent(e.to_string()))?;
    if &checked != cert {
        return Err(ConfigError::RescaleInconsistent(
            "certificate disagrees with its revalidation".into(),
        ));
    }
    let f = ls.form();
    // Exact two-scale decomposition in the original coordinates.
    let p = family_product(ctx, &cert.h_planes)?;
    let q = family_product(ctx, &cert.k_planes)?;
    let (raw_scale_h, raw_scale_k) = solve_two_scales(ctx, f, &p, &q)?;
    // Coordinate frame: rows are the covectors (l2, m1, m2, l1), so the new
    // coordinates are x' = l2, y' = m1, z' = m2, w' = l1 and the chords map
    // to V(x', w') and V(y', z').
    let l1 = cert.h_planes[0].covector;
    let l2 = cert.h_planes[1].covector;
    let m1 = cert.k_planes[0].covector;
    let m2 = cert.k_planes[1].covector;
    let frame = Mat4::from_rows([l2, m1, m2, l1]);
    let transform = frame.inverse(ctx).ok_or(ConfigError::SingularChange)?;
    let normalized = f.substitute(&transform)?;
    // Transformed covectors, split into the four coordinate forms and the
    // residual factors; scalars absorb the leading coefficients so every
    // stored factor has first nonzero coefficient 1.
    let h_cov: Vec<[FieldElement; 4]> = cert
        .h_planes
        .iter()
        .map(|h| transform_covector(ctx, &h.covector, &transform))
        .collect();
    let k_cov: Vec<[FieldElement; 4]> = cert
        .k_planes
        .iter()
        .map(|k| transform_covector(ctx, &k.covector, &transform))
        .collect();
    let e1 = ctx.from_int(1);
    let unit = |slot: usize| {
        let mut v = [FieldElement::ZERO; 4];
        v[slot] = e1;
        v
    };
    if h_cov[0] != unit(3) || h_cov[1] != unit(0) || k_cov[0] != unit(1) || k_cov[1] != unit(2) {
        return Err(ConfigError::NormalizeFailed(
            "frame covectors did not land on the coordinate forms".into(),
        ));
    }
    let mut scale_h = raw_scale_h;
    let mut scale_k = raw_scale_k;
    let mut ell = Vec::with_capacity(h_cov.len() - 2);
    for (idx, l) in h_cov.iter().enumerate().skip(2) {
        if !l[1].is_zero() || !l[2].is_zero() {
            return Err(ConfigError::NormalizeFailed(format!(
                "seed factor {idx} not supported on x, w after transform"
            )));
        }
        if l[0].is_zero() || l[3].is_zero() {
            return Err(ConfigError::NormalizeFailed(format!(
                "seed factor {idx} has a vanishing x or w coefficient"
            )));
        }
        scale_h = ctx.mul(scale_h, l[0]);
        let inv = ctx.inv(l[0]);
        ell.push([
            e1,
            FieldElement::ZERO,
            FieldElement::ZERO,
            ctx.mul(l[3], inv),
        ]);
    }
    let mut em = Vec::with_capacity(k_cov.len() - 2);
    for (idx, m) in k_cov.iter().enumerate().skip(2) {
        if !m[0].is_zero() || !m[3].is_zero() {
            return Err(ConfigError::NormalizeFailed(format!(
                "opposite factor {idx} not supported on y, z after transform"
            )));
        }
        if m[1].is_zero() || m[2].is_zero() {
            return Err(ConfigError::NormalizeFailed(format!(
                "opposite factor {idx} has a vanishing y or z coefficient"
            )));
        }
        scale_k = ctx.mul(scale_k, m[1]);
        let inv = ctx.inv(m[1]);
        em.push([
            FieldElement::ZERO,
            e1,
            ctx.mul(m[2], inv),
            FieldElement::ZERO,
        ]);
    }
    // Independent reconstruction: scale_h * x * w * prod(ell)
    // + scale_k * y * z * prod(em) must equal the normalized form, and every
    // monomial must be pure in {x, w} or pure in {y, z}.
    let ctx_arc = Arc::clone(ctx);
    let mut p2 = covector_form(&ctx_arc, &unit(0))?.mul(&covector_form(&ctx_arc, &unit(3))?)?;
    for l in &ell {
        p2 = p2.mul(&covector_form(&ctx_arc, l)?)?;
    }
    let mut q2 = covector_form(&ctx_arc, &unit(1))?.mul(&covector_form(&ctx_arc, &unit(2))?)?;
    for m in &em {
        q2 = q2.mul(&covector_form(&ctx_arc, m)?)?;
    }
    let rebuilt = p2.scale(scale_h).add(&q2.scale(scale_k))?;
    if rebuilt != normalized {
        return Err(ConfigError::RescaleInconsistent(
            "the normalized form is not the two-product combination".into(),
        ));
    }
    for e in normalized.terms().keys() {
        let xw = e[1] == 0 && e[2] == 0;
        let yz = e[0] == 0 && e[3] == 0;
        if !xw && !yz {
            return Err(ConfigError::NormalizeFailed(format!(
                "mixed monomial {e:?} in the normalized form"
            )));
        }
    }
    // Round trip back to the original form.
    let back = normalized.substitute(&frame)?;
    if &back != f {
        return Err(ConfigError::NormalizeFailed(
            "substitution round trip does not restore the form".into(),
        ));
    }
    Ok(NormalFormData {
        transform,
        normalized,
        ell,
        em,
        scale_h,
        scale_k,
    })
}

// ---------------------------------------------------------------------------
// Extremal decomposition
// ---------------------------------------------------------------------------

/// Whether a form is in the extremal family: degree `d = r + 1` with `r` a
/// power of the characteristic, and every monomial divisible by the `r`-th
/// power of some variable — equivalently `f = sum of A[u][v] x_u x_v^r` for
/// a coefficient matrix `A`, which is unique because `2r > d`.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalReport {
    pub extremal: bool,
    /// `d - 1` when it is a power of the characteristic.
    pub sub_power: Option<u64>,
    pub matrix: Option<[[FieldElement; 4]; 4]>,
    pub matrix_rank: Option<usize>,
    /// Whether `A[v][u] = A[u][v]^r` throughout, the Hermitian symmetry.
    pub conjugate_symmetric: Option<bool>,
    pub obstruction: Option<String>,
}

pub fn extremal_report(form: &SurfaceForm) -> ExtremalReport {
    let ctx = form.ctx();
    let d = form.degree() as u64;
    let not = |why: String| ExtremalReport {
        extremal: false,
        sub_power: None,
        matrix: None,
        matrix_rank: None,
        conjugate_symmetric: None,
        obstruction: Some(why),
    };
    if d < 3 {
        return not(format!("degree {d} is below 3"));
    }
    let r = d - 1;
    match bounds::prime_power_decompose(r) {
        Some((p, _)) if p == ctx.p() as u64 => {}
        Some((p, _)) => {
            return not(format!(
                "degree - 1 = {r} is a power of {p}, not of the characteristic {}",
                ctx.p()
            ))
        }
        None => return not(format!("degree - 1 = {r} is not a prime power")),
    }
    let mut matrix = [[FieldElement::ZERO; 4]; 4];
    for (e, &coeff) in form.terms() {
        let Some(v) = (0..4).find(|&v| e[v] as u64 >= r) else {
            return not(format!(
                "monomial with exponents {e:?} has no variable of degree at least {r}"
            ));
        };
        let mut rest = *e;
        rest[v] -= r as u8;
        let Some(u) =
            (0..4).find(|&u| rest[u] == 1 && rest.iter().map(|&x| x as u32).sum::<u32>() == 1)
        else {
            return not(format!(
                "monomial with exponents {e:?} is not a variable times a variable to the {r}"
            ));
        };
        matrix[u][v] = ctx.add(matrix[u][v], coeff);
    }
    let rank = {
        let rows: Vec<Vec<FieldElement>> = matrix.iter().map(|r| r.to_vec()).collect();
        crate::linalg::rank(ctx, &rows)
    };
    let conjugate_symmetric =
        (0..4).all(|u| (0..4).all(|v| matrix[v][u] == ctx.pow(matrix[u][v], r)));
    ExtremalReport {
        extremal: true,
        sub_power: Some(r),
        matrix: Some(matrix),
        matrix_rank: Some(rank),
        conjugate_symmetric: Some(conjugate_symmetric),
        obstruction: None,
    }
}
