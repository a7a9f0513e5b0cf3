//! Enumeration of the lines lying on a surface `V(f)` in P^3 over a finite
//! field, by two genuinely independent routes:
//!
//! - **restriction route** — sweep every line of P^3 through the six RREF
//!   charts and keep those whose exact symbolic restriction vanishes;
//! - **evaluation route** — the same sweep, but membership is decided by
//!   evaluating `f` at every rational point of the candidate line.  A nonzero
//!   binary form of degree `d` has at most `d` projective roots, so agreement
//!   at `q + 1 > d` points is equivalent to symbolic vanishing; when the
//!   field is too small the candidate is re-evaluated over an extension large
//!   enough for that argument to apply.
//!
//! Both routes return the same sorted line list; the test suite and the
//! acceptance suite cross-check them against each other and against closed
//! forms.

use crate::bounds;
use crate::forms::{FormError, SurfaceForm};
use crate::gf::{Embedding, FieldCtx, FieldElement, GfError};
use crate::linalg::Mat4;
use crate::proj3::{chart_line, chart_patterns, GeomError, Line};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinesError {
    #[error("candidate count {candidates} exceeds budget {budget}")]
    BudgetExceeded { candidates: u128, budget: u64 },
    #[error("line is not on the surface")]
    NotOnSurface,
    #[error("input lines are not pairwise skew")]
    NotSkew,
    #[error("objects belong to different fields")]
    FieldMismatch,
    #[error("form error: {0}")]
    Form(#[from] FormError),
    #[error("geometry error: {0}")]
    Geom(#[from] GeomError),
    #[error("field error: {0}")]
    Field(#[from] GfError),
}

fn line_count(q: u128) -> u128 {
    (q * q + 1) * (q * q + q + 1)
}

fn check_budget(ctx: &FieldCtx, budget: u64) -> Result<(), LinesError> {
    let candidates = line_count(ctx.q() as u128);
    if candidates > budget as u128 {
        return Err(LinesError::BudgetExceeded { candidates, budget });
    }
    Ok(())
}

/// Sweep all lines of P^3 over the form's field, deciding membership by exact
/// symbolic restriction.  Returns the surface's lines in sorted order.
pub fn enumerate_by_restriction(form: &SurfaceForm, budget: u64) -> Result<Vec<Line>, LinesError> {
    let ctx = form.ctx_arc();
    check_budget(&ctx, budget)?;
    let q = ctx.q() as u64;
    let mut out: Vec<Line> = Vec::new();
    for (pivots, free) in chart_patterns() {
        let total = q.pow(free.len() as u32);
        let mut chart: Vec<Line> = (0..total)
            .into_par_iter()
            .filter_map(|code| {
                let line = decode_chart_line(&ctx, pivots, &free, code);
                match form.restrict_to_line(&line) {
                    Ok(r) if r.is_zero() => Some(line),
                    _ => None,
                }
            })
            .collect();
        out.append(&mut chart);
    }
    out.sort();
    Ok(out)
}

/// Sweep all lines of P^3, deciding membership by evaluating `f` at every
/// rational point of the candidate (over an extension when the base field has
/// at most `deg f` elements, where point evaluation alone would be
/// inconclusive).
pub fn enumerate_by_evaluation(form: &SurfaceForm, budget: u64) -> Result<Vec<Line>, LinesError> {
    let ctx = form.ctx_arc();
    check_budget(&ctx, budget)?;
    let q = ctx.q() as u64;
    let d = form.degree() as u64;
    // Evaluation field: the smallest power q^r with q^r >= d, so that a line
    // has q^r + 1 > d rational points.
    let mut r = 1u32;
    let mut qr = q;
    while qr < d {
        r += 1;
        qr = qr.checked_mul(q).ok_or(GfError::FieldTooLarge {
            q: u64::MAX,
            max: crate::gf::MAX_FIELD_ORDER,
        })?;
    }
    let (eval_ctx, emb, eval_form);
    if r == 1 {
        eval_ctx = Arc::clone(&ctx);
        emb = None;
        eval_form = form.clone();
    } else {
        let big = Arc::new(FieldCtx::new(ctx.p() as u64, ctx.k() * r, None)?);
        let e = Embedding::new(&ctx, &big)?;
        eval_form = form.embed_into(&big, &e);
        eval_ctx = big;
        emb = Some(e);
    }
    let mut out: Vec<Line> = Vec::new();
    for (pivots, free) in chart_patterns() {
        let total = q.pow(free.len() as u32);
        let mut chart: Vec<Line> = (0..total)
            .into_par_iter()
            .filter_map(|code| {
                let line = decode_chart_line(&ctx, pivots, &free, code);
                let probe = match &emb {
                    None => line,
                    Some(e) => line.embed(&ctx, &eval_ctx, e),
                };
                let on_surface = probe
                    .points(&eval_ctx)
                    .iter()
                    .all(|pt| eval_form.eval_point(pt).is_zero());
                on_surface.then_some(line)
            })
            .collect();
        out.append(&mut chart);
    }
    out.sort();
    Ok(out)
}

fn decode_chart_line(
    ctx: &FieldCtx,
    pivots: (usize, usize),
    free: &[(usize, usize)],
    code: u64,
) -> Line {
    let q = ctx.q() as u64;
    let n = free.len();
    let mut values = Vec::with_capacity(n);
    for slot in 0..n {
        let shift = q.pow((n - 1 - slot) as u32);
        let digit = (code / shift) % q;
        values.push(ctx.element_from_index(digit as u32));
    }
    chart_line(ctx, pivots, free, &values)
}

/// The while-building default extension degree: when `d - 1` is a power
/// `p^e` of the characteristic, the classical line configurations live over
/// the field with `p^(2e)` elements, so extend the base field just far enough
/// to contain it.  Otherwise fall back to a quadratic extension and say so.
pub fn default_extension(form: &SurfaceForm) -> (u32, Option<String>) {
    let ctx = form.ctx();
    let d = form.degree() as u64;
    if d >= 1 {
        if let Some((p, e)) = bounds::prime_power_decompose(d.saturating_sub(1)) {
            if p == ctx.p() as u64 {
                let k = ctx.k();
                let target = 2 * e; // field GF(p^(2e))
                let m = lcm(k, target) / k;
                return (m, None);
            }
        }
    }
    (
        2,
        Some(
            "degree - 1 is not a power of the field characteristic; \
             defaulting to a quadratic extension"
                .to_string(),
        ),
    )
}

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// The lines on a surface, enumerated over a chosen extension of the
/// coefficient field and held in sorted order.
#[derive(Debug, Clone)]
pub struct LineSet {
    base_ctx: Arc<FieldCtx>,
    ext_ctx: Arc<FieldCtx>,
    ext_degree: u32,
    base_form: SurfaceForm,
    form: SurfaceForm,
    lines: Vec<Line>,
}

impl LineSet {
    /// Enumerate the lines of `V(f)` over the degree-`ext_degree` extension
    /// of the coefficient field, using the restriction route.
    pub fn build(
        base_form: &SurfaceForm,
        ext_degree: u32,
        budget: u64,
    ) -> Result<LineSet, LinesError> {
        assert!(ext_degree >= 1, "extension degree must be at least 1");
        let base_ctx = base_form.ctx_arc();
        let ext_ctx = Arc::new(FieldCtx::new(
            base_ctx.p() as u64,
            base_ctx.k() * ext_degree,
            None,
        )?);
        let emb = Embedding::new(&base_ctx, &ext_ctx)?;
        let form = base_form.embed_into(&ext_ctx, &emb);
        let lines = enumerate_by_restriction(&form, budget)?;
        Ok(LineSet {
            base_ctx,
            ext_ctx,
            ext_degree,
            base_form: base_form.clone(),
            form,
            lines,
        })
    }

    pub fn base_ctx(&self) -> &Arc<FieldCtx> {
        &self.base_ctx
    }
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ext_ctx
    }
    pub fn ext_degree(&self) -> u32 {
        self.ext_degree
    }
    pub fn base_form(&self) -> &SurfaceForm {
        &self.base_form
    }
    /// The form with coefficients embedded into the enumeration field.
    pub fn form(&self) -> &SurfaceForm {
        &self.form
    }
    pub fn lines(&self) -> &[Line] {
        &self.lines
    }
    pub fn count(&self) -> usize {
        self.lines.len()
    }
    pub fn line(&self, i: usize) -> &Line {
        &self.lines[i]
    }
    pub fn index_of(&self, line: &Line) -> Option<usize> {
        self.lines.binary_search(line).ok()
    }

    pub fn meets(&self, i: usize, j: usize) -> bool {
        self.lines[i].meets(&self.ext_ctx, &self.lines[j]).unwrap()
    }

    /// Indices of the surface lines meeting line `i`, excluding `i` itself.
    pub fn lines_meeting(&self, i: usize) -> Vec<usize> {
        (0..self.lines.len())
            .filter(|&j| j != i && self.meets(i, j))
            .collect()
    }

    /// All surface lines meeting every line of `inputs` (which must be
    /// pairwise skew surface lines), excluding the inputs themselves.
    pub fn transversals(&self, inputs: &[Line]) -> Result<Vec<Line>, LinesError> {
        let ctx = &self.ext_ctx;
        for l in inputs {
            if self.index_of(l).is_none() {
                return Err(LinesError::NotOnSurface);
            }
        }
        for (a, l) in inputs.iter().enumerate() {
            for m in &inputs[a + 1..] {
                if l.meets(ctx, m)? {
                    return Err(LinesError::NotSkew);
                }
            }
        }
        let mut out = Vec::new();
        for cand in &self.lines {
            if inputs.contains(cand) {
                continue;
            }
            let mut all = true;
            for l in inputs {
                if !cand.meets(ctx, l)? {
                    all = false;
                    break;
                }
            }
            if all {
                out.push(*cand);
            }
        }
        Ok(out)
    }

    /// The level forms of surface line `i`; see [`line_level_forms`].
    pub fn f_coefficients(&self, i: usize) -> LineCoefficients {
        line_level_forms(&self.form, &self.lines[i]).expect("LineSet lines lie on the surface")
    }
}

/// A polynomial in the two affine chart parameters `(A, B)` of a line's
/// level decomposition, keyed by `(deg A, deg B)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariatePoly {
    pub terms: BTreeMap<(u8, u8), FieldElement>,
}

impl BivariatePoly {
    pub fn zero() -> BivariatePoly {
        BivariatePoly {
            terms: BTreeMap::new(),
        }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn eval(&self, ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        for (&(i, j), &c) in &self.terms {
            let term = ctx.mul(c, ctx.mul(ctx.pow(a, i as u64), ctx.pow(b, j as u64)));
            acc = ctx.add(acc, term);
        }
        acc
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), &c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts = Vec::new();
            if c.index() != 1 || (i == 0 && j == 0) {
                parts.push(format!("c{}", c.index()));
            }
            match i {
                0 => {}
                1 => parts.push("A".into()),
                _ => parts.push(format!("A^{i}")),
            }
            match j {
                0 => {}
                1 => parts.push("B".into()),
                _ => parts.push(format!("B^{j}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// The level decomposition of a form along one of its lines.
///
/// After the invertible change of coordinates `transform` (whose first two
/// columns are the line's basis rows), the line becomes `V(z, w)` and the
/// transformed form expands as `sum of F_l(A, B) z^l w^(d-l)` under the chart
/// substitution `x = A z, y = B w`; `levels[l]` is `F_l`.
#[derive(Debug, Clone)]
pub struct LineCoefficients {
    pub transform: Mat4,
    pub levels: Vec<BivariatePoly>,
}

impl LineCoefficients {
    pub fn degree(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }

    /// True when every level other than `F_1` and `F_(d-1)` vanishes
    /// identically — the shape forced on the classical normal forms.
    pub fn middle_levels_vanish(&self) -> bool {
        let d = self.levels.len() - 1;
        self.levels
            .iter()
            .enumerate()
            .all(|(l, poly)| l == 1 || l == d - 1 || poly.is_zero())
    }
}

/// Compute the level forms of `line` on `V(form)`.  Errors with
/// `NotOnSurface` when the line does not lie on the surface.
pub fn line_level_forms(form: &SurfaceForm, line: &Line) -> Result<LineCoefficients, LinesError> {
    let ctx = form.ctx_arc();
    if line.field != ctx.id() {
        return Err(LinesError::FieldMismatch);
    }
    if !form.contains_line(line)? {
        return Err(LinesError::NotOnSurface);
    }
    // Change coordinates so the line becomes V(z, w): the matrix sending
    // e0, e1 to the line's basis rows, completed by unit vectors at the
    // line's non-pivot coordinate positions.
    let (p0, p1) = line.pivot_pattern();
    let non_pivots: Vec<usize> = (0..4).filter(|c| *c != p0 && *c != p1).collect();
    let mut cols: [[FieldElement; 4]; 4] = [[FieldElement::ZERO; 4]; 4];
    cols[0] = line.basis[0];
    cols[1] = line.basis[1];
    for (slot, &c) in non_pivots.iter().enumerate() {
        cols[2 + slot][c] = FieldElement::ONE;
    }
    let mut entries = [[FieldElement::ZERO; 4]; 4];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..4 {
            entries[i][j] = col[i];
        }
    }
    let transform = Mat4::from_rows(entries);
    let g = form.substitute(&transform)?;
    let d = form.degree() as usize;
    let mut levels = vec![BivariatePoly::zero(); d + 1];
    for (expo, &coeff) in g.terms() {
        let [j, k, m, n] = *expo;
        let level = (j + m) as usize;
        debug_assert_eq!((k + n) as usize, d - level);
        let entry = levels[level]
            .terms
            .entry((j, k))
            .or_insert(FieldElement::ZERO);
        *entry = ctx.add(*entry, coeff);
    }
    for poly in &mut levels {
        poly.terms.retain(|_, c| !c.is_zero());
    }
    Ok(LineCoefficients { transform, levels })
}

/// Count the affine pairs `(a, b)` at which every given polynomial vanishes.
pub fn common_zero_count(ctx: &FieldCtx, polys: &[BivariatePoly]) -> u64 {
    let mut count = 0;
    for a in ctx.elements() {
        for b in ctx.elements() {
            if polys.iter().all(|p| p.eval(ctx, a, b).is_zero()) {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::parse_form;

    fn ctx(p: u64, k: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, k, None).unwrap())
    }

    fn fermat(c: &Arc<FieldCtx>, d: u32) -> SurfaceForm {
        parse_form(&format!("x^{d}+y^{d}+z^{d}+w^{d}"), Arc::clone(c)).unwrap()
    }

    #[test]
    fn routes_agree_and_counts_match_classical_values() {
        // Smooth cubic over GF(4): 27 lines.  Note q = 4 > 3 = d, so the
        // evaluation route needs no extension.
        let f4 = ctx(2, 2);
        let cubic = fermat(&f4, 3);
        let a = enumerate_by_restriction(&cubic, 10_000_000).unwrap();
        let b = enumerate_by_evaluation(&cubic, 10_000_000).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 27);

        // Hermitian quartic over GF(9): 112 lines.
        let f9 = ctx(3, 2);
        let quartic = fermat(&f9, 4);
        let a = enumerate_by_restriction(&quartic, 10_000_000).unwrap();
        let b = enumerate_by_evaluation(&quartic, 10_000_000).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 112);
    }

    #[test]
    fn evaluation_route_extends_when_the_field_is_too_small() {
        // Fermat cubic over GF(2): q = 2 < 3 = d, forcing the extension
        // fallback inside the evaluation route.
        let f2 = ctx(2, 1);
        let cubic = fermat(&f2, 3);
        let a = enumerate_by_restriction(&cubic, 10_000_000).unwrap();
        let b = enumerate_by_evaluation(&cubic, 10_000_000).unwrap();
        assert_eq!(a, b);
        // Independent count: over GF(2), x^3+y^3+z^3+w^3 = 0 contains
        // exactly the lines joining coordinate-pair points; count by brute
        // force over all lines using full point membership.
        let all = crate::proj3::enumerate_lines(&f2);
        let brute: Vec<Line> = all
            .into_iter()
            .filter(|l| {
                l.points(&f2)
                    .iter()
                    .all(|pt| cubic.eval_point(pt).is_zero())
            })
            .filter(|l| cubic.contains_line(l).unwrap())
            .collect();
        assert_eq!(a, brute);
    }

    #[test]
    fn budget_guard_reports_exact_candidate_count() {
        let f9 = ctx(3, 2);
        let quartic = fermat(&f9, 4);
        let err = enumerate_by_restriction(&quartic, 100).unwrap_err();
        assert_eq!(
            err,
            LinesError::BudgetExceeded {
                candidates: (81 + 1) * (81 + 9 + 1),
                budget: 100
            }
        );
        let err = enumerate_by_evaluation(&quartic, 100).unwrap_err();
        assert!(matches!(err, LinesError::BudgetExceeded { .. }));
    }

    #[test]
    fn line_set_is_sorted_deduplicated_and_on_surface() {
        let f3 = ctx(3, 1);
        let quartic = fermat(&f3, 4);
        let ls = LineSet::build(&quartic, 2, 10_000_000).unwrap();
        assert_eq!(ls.ext_degree(), 2);
        assert_eq!(ls.ctx().q(), 9);
        assert_eq!(ls.count(), 112);
        for w in ls.lines().windows(2) {
            assert!(w[0] < w[1], "sorted with no duplicates");
        }
        for l in ls.lines() {
            assert!(ls.form().contains_line(l).unwrap());
        }
        // Index lookups are consistent.
        for (i, l) in ls.lines().iter().enumerate() {
            assert_eq!(ls.index_of(l), Some(i));
        }
    }

    #[test]
    fn extension_monotonicity() {
        // Lines found over GF(3) embed into the GF(9) line set.
        let f3 = ctx(3, 1);
        let quartic = fermat(&f3, 4);
        let small = LineSet::build(&quartic, 1, 10_000_000).unwrap();
        let big = LineSet::build(&quartic, 2, 10_000_000).unwrap();
        let emb = Embedding::new(small.ctx(), big.ctx()).unwrap();
        for l in small.lines() {
            let le = l.embed(small.ctx(), big.ctx(), &emb);
            assert!(
                big.index_of(&le).is_some(),
                "line over the base field must persist over the extension"
            );
        }
        assert!(small.count() <= big.count());
    }

    #[test]
    fn default_extension_matches_classical_cases() {
        let f2 = ctx(2, 1);
        let (m, note) = default_extension(&fermat(&f2, 3));
        assert_eq!((m, note), (2, None)); // d-1 = 2 = 2^1, GF(4)
        let (m, note) = default_extension(&fermat(&f2, 5));
        assert_eq!((m, note), (4, None)); // d-1 = 4 = 2^2, GF(16)
        let f3 = ctx(3, 1);
        let (m, note) = default_extension(&fermat(&f3, 4));
        assert_eq!((m, note), (2, None)); // d-1 = 3 = 3^1, GF(9)
        let f9 = ctx(3, 2);
        let (m, note) = default_extension(&fermat(&f9, 4));
        assert_eq!((m, note), (1, None)); // GF(9) already contains GF(9)
        let f5 = ctx(5, 1);
        let (m, note) = default_extension(&fermat(&f5, 4));
        assert_eq!(m, 2);
        assert!(note.is_some(), "non-classical degree carries a caveat");
    }

    #[test]
    fn transversal_counts_on_the_cubic() {
        let f2 = ctx(2, 1);
        let cubic = fermat(&f2, 3);
        let ls = LineSet::build(&cubic, 2, 10_000_000).unwrap();
        assert_eq!(ls.count(), 27);
        // Classical: two skew lines on a smooth cubic have exactly 5 common
        // transversals on the surface.
        let mut checked = 0;
        for i in 0..ls.count() {
            for j in (i + 1)..ls.count() {
                if ls.meets(i, j) {
                    continue;
                }
                let t = ls.transversals(&[*ls.line(i), *ls.line(j)]).unwrap();
                assert_eq!(t.len(), 5, "skew pair ({i},{j})");
                for l in &t {
                    assert!(ls.index_of(l).is_some());
                }
                checked += 1;
                if checked >= 40 {
                    return;
                }
            }
        }
    }

    #[test]
    fn transversal_errors() {
        let f2 = ctx(2, 1);
        let cubic = fermat(&f2, 3);
        let ls = LineSet::build(&cubic, 2, 10_000_000).unwrap();
        // A meeting pair is rejected.
        'outer: for i in 0..ls.count() {
            for j in (i + 1)..ls.count() {
                if ls.meets(i, j) {
                    let err = ls.transversals(&[*ls.line(i), *ls.line(j)]).unwrap_err();
                    assert_eq!(err, LinesError::NotSkew);
                    break 'outer;
                }
            }
        }
        // A line off the surface is rejected.
        let ctx4 = ls.ctx();
        let off = crate::proj3::enumerate_lines(ctx4)
            .into_iter()
            .find(|l| !ls.form().contains_line(l).unwrap())
            .unwrap();
        assert_eq!(
            ls.transversals(&[off]).unwrap_err(),
            LinesError::NotOnSurface
        );
    }

    #[test]
    fn level_forms_of_the_hermitian_normal_form() {
        // f = x^3 w + x w^3 + y^3 z + y z^3 over GF(9) along the line
        // V(z, w): substituting x = Az, y = Bw gives
        //   (A^3 + B) z^3 w + (A + B^3) z w^3,
        // so F_3 = A^3 + B, F_1 = A + B^3, and every other level vanishes.
        let f9 = ctx(3, 2);
        let f = parse_form("x^3*w + x*w^3 + y^3*z + y*z^3", Arc::clone(&f9)).unwrap();
        let zw = Line::from_span(
            &f9,
            [
                FieldElement::ONE,
                FieldElement::ZERO,
                FieldElement::ZERO,
                FieldElement::ZERO,
            ],
            [
                FieldElement::ZERO,
                FieldElement::ONE,
                FieldElement::ZERO,
                FieldElement::ZERO,
            ],
        )
        .unwrap();
        let lc = line_level_forms(&f, &zw).unwrap();
        assert_eq!(lc.transform, Mat4::identity());
        assert_eq!(lc.degree(), 4);
        let expect_f3: BTreeMap<(u8, u8), FieldElement> =
            [((3, 0), FieldElement::ONE), ((0, 1), FieldElement::ONE)]
                .into_iter()
                .collect();
        let expect_f1: BTreeMap<(u8, u8), FieldElement> =
            [((1, 0), FieldElement::ONE), ((0, 3), FieldElement::ONE)]
                .into_iter()
                .collect();
        assert_eq!(lc.levels[3].terms, expect_f3);
        assert_eq!(lc.levels[1].terms, expect_f1);
        assert!(lc.levels[0].is_zero());
        assert!(lc.levels[2].is_zero());
        assert!(lc.levels[4].is_zero());
        assert!(lc.middle_levels_vanish());
        // The common zeros of all the levels: B = -A^3 forces
        // A + B^3 = A - A^9 = 0 for every A in GF(9), hence exactly 9 pairs.
        let nonzero: Vec<BivariatePoly> = lc.levels[1..4].to_vec();
        assert_eq!(common_zero_count(&f9, &nonzero), 9);
        assert_eq!(common_zero_count(&f9, &lc.levels), 9);
    }

    #[test]
    fn level_forms_reconstruct_the_substituted_form() {
        // For arbitrary lines on the Hermitian quartic, the level forms must
        // satisfy g(Az, Bw, z, w) = sum of F_l(A,B) z^l w^(d-l) where
        // g = f(transform * .), checked pointwise over the whole field.
        let f9 = ctx(3, 2);
        let f = fermat(&f9, 4);
        let ls = LineSet::build(&f, 1, 10_000_000).unwrap();
        assert_eq!(ls.count(), 112);
        for idx in (0..ls.count()).step_by(13) {
            let lc = ls.f_coefficients(idx);
            let g = ls.form().substitute(&lc.transform).unwrap();
            for a in f9.elements().step_by(2) {
                for b in f9.elements().step_by(3) {
                    for zv in f9.elements().step_by(2) {
                        for wv in f9.elements().step_by(3) {
                            let coords = [f9.mul(a, zv), f9.mul(b, wv), zv, wv];
                            let direct = g.eval(&coords);
                            let mut via_levels = FieldElement::ZERO;
                            for (l, poly) in lc.levels.iter().enumerate() {
                                let zl = f9.pow(zv, l as u64);
                                let wl = f9.pow(wv, (4 - l) as u64);
                                let t = f9.mul(poly.eval(&f9, a, b), f9.mul(zl, wl));
                                via_levels = f9.add(via_levels, t);
                            }
                            assert_eq!(direct, via_levels);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn level_forms_reject_lines_off_the_surface() {
        let f9 = ctx(3, 2);
        let f = fermat(&f9, 4);
        let off = crate::proj3::enumerate_lines(&f9)
            .into_iter()
            .find(|l| !f.contains_line(l).unwrap())
            .unwrap();
        assert_eq!(
            line_level_forms(&f, &off).unwrap_err(),
            LinesError::NotOnSurface
        );
    }
}
