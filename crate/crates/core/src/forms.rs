//! Sparse homogeneous forms in `x, y, z, w` over a finite field, with the
//! exact symbolic operations the verification pipeline needs: restriction to a
//! line, plane sections, linear substitutions, partial derivatives, and a
//! bounded smoothness probe.
//!
//! Every operation is exact symbol pushing over the field — nothing is ever
//! decided by sampling unless the sample size provably determines the answer
//! (see [`SurfaceForm::contains_line`]'s documentation for the one place a
//! point count is used, in the independent oracle of the `lines` module).

use crate::gf::{Embedding, FieldCtx, FieldElement, GfError};
use crate::linalg::Mat4;
use crate::proj3::{Line, Plane, Point};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub const VAR_NAMES: [char; 4] = ['x', 'y', 'z', 'w'];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("form is not homogeneous: saw total degrees {0} and {1}")]
    Inhomogeneous(u32, u32),
    #[error("form is empty (all terms cancelled)")]
    EmptyForm,
    #[error("exponent {0} exceeds the supported maximum 255")]
    ExponentTooLarge(u32),
    #[error("form and geometric object belong to different fields")]
    FieldMismatch,
    #[error("substitution matrix is singular")]
    SingularMatrix,
    #[error("field error: {0}")]
    Field(#[from] GfError),
    #[error("surface file: {0}")]
    SurfaceFile(String),
}

/// A nonzero homogeneous form of degree `d` in `x, y, z, w`.  Terms map the
/// exponent quadruple `[j, k, m, n]` (for `x^j y^k z^m w^n`) to a nonzero
/// coefficient; the `BTreeMap` gives deterministic iteration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceForm {
    ctx: Arc<FieldCtx>,
    degree: u32,
    terms: BTreeMap<[u8; 4], FieldElement>,
}

impl SurfaceForm {
    pub fn from_terms(
        ctx: Arc<FieldCtx>,
        terms: impl IntoIterator<Item = ([u8; 4], FieldElement)>,
    ) -> Result<SurfaceForm, FormError> {
        let mut map: BTreeMap<[u8; 4], FieldElement> = BTreeMap::new();
        for (expo, coeff) in terms {
            let entry = map.entry(expo).or_insert(FieldElement::ZERO);
            *entry = ctx.add(*entry, coeff);
        }
        map.retain(|_, c| !c.is_zero());
        let mut degree = None;
        for expo in map.keys() {
            let total: u32 = expo.iter().map(|&e| e as u32).sum();
            match degree {
                None => degree = Some(total),
                Some(d) if d != total => return Err(FormError::Inhomogeneous(d, total)),
                _ => {}
            }
        }
        let degree = degree.ok_or(FormError::EmptyForm)?;
        if degree == 0 {
            return Err(FormError::EmptyForm);
        }
        Ok(SurfaceForm {
            ctx,
            degree,
            terms: map,
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn ctx_arc(&self) -> Arc<FieldCtx> {
        Arc::clone(&self.ctx)
    }
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn terms(&self) -> &BTreeMap<[u8; 4], FieldElement> {
        &self.terms
    }

    /// Exact evaluation at homogeneous coordinates.
    pub fn eval(&self, coords: &[FieldElement; 4]) -> FieldElement {
        let ctx = &*self.ctx;
        let mut acc = FieldElement::ZERO;
        for (expo, &coeff) in &self.terms {
            let mut term = coeff;
            for (v, &e) in expo.iter().enumerate() {
                if e > 0 {
                    term = ctx.mul(term, ctx.pow(coords[v], e as u64));
                }
            }
            acc = ctx.add(acc, term);
        }
        acc
    }

    pub fn eval_point(&self, p: &Point) -> FieldElement {
        self.eval(&p.coords)
    }

    /// Formal partial derivative with respect to variable `var` (0..4).
    /// Returns `None` when the derivative vanishes identically (every
    /// exponent multiplier is divisible by the characteristic).
    pub fn partial(&self, var: usize) -> Option<SurfaceForm> {
        let ctx = &*self.ctx;
        let mut terms = BTreeMap::new();
        for (expo, &coeff) in &self.terms {
            let e = expo[var] as u64;
            let mult = ctx.from_int(e);
            if mult.is_zero() {
                continue;
            }
            let mut ne = *expo;
            ne[var] -= 1;
            let c = ctx.mul(coeff, mult);
            terms.insert(ne, c);
        }
        if terms.is_empty() {
            return None;
        }
        Some(SurfaceForm {
            ctx: Arc::clone(&self.ctx),
            degree: self.degree - 1,
            terms,
        })
    }

    /// Pointwise sum (degrees must match).
    pub fn add(&self, other: &SurfaceForm) -> Result<SurfaceForm, FormError> {
        if self.ctx.id() != other.ctx.id() {
            return Err(FormError::FieldMismatch);
        }
        let merged = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|(e, c)| (*e, *c));
        SurfaceForm::from_terms(Arc::clone(&self.ctx), merged)
    }

    /// Scalar multiple; `None` result is impossible because `c != 0` is required.
    pub fn scale(&self, c: FieldElement) -> SurfaceForm {
        assert!(!c.is_zero(), "scaling a form by zero");
        let ctx = &*self.ctx;
        let terms = self
            .terms
            .iter()
            .map(|(e, &v)| (*e, ctx.mul(v, c)))
            .collect();
        SurfaceForm {
            ctx: Arc::clone(&self.ctx),
            degree: self.degree,
            terms,
        }
    }

    /// Product of two forms.
    pub fn mul(&self, other: &SurfaceForm) -> Result<SurfaceForm, FormError> {
        if self.ctx.id() != other.ctx.id() {
            return Err(FormError::FieldMismatch);
        }
        let ctx = &*self.ctx;
        let mut out: BTreeMap<[u8; 4], FieldElement> = BTreeMap::new();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let mut e = [0u8; 4];
                for i in 0..4 {
                    let sum = ea[i] as u32 + eb[i] as u32;
                    if sum > 255 {
                        return Err(FormError::ExponentTooLarge(sum));
                    }
                    e[i] = sum as u8;
                }
                let entry = out.entry(e).or_insert(FieldElement::ZERO);
                *entry = ctx.add(*entry, ctx.mul(ca, cb));
            }
        }
        out.retain(|_, c| !c.is_zero());
        if out.is_empty() {
            return Err(FormError::EmptyForm);
        }
        Ok(SurfaceForm {
            ctx: Arc::clone(&self.ctx),
            degree: self.degree + other.degree,
            terms: out,
        })
    }

    /// A degree-1 form from a covector.
    pub fn linear(
        ctx: Arc<FieldCtx>,
        covector: &[FieldElement; 4],
    ) -> Result<SurfaceForm, FormError> {
        let terms = (0..4).map(|i| {
            let mut e = [0u8; 4];
            e[i] = 1;
            (e, covector[i])
        });
        SurfaceForm::from_terms(ctx, terms)
    }

    /// Exact restriction of the form to a line: substitute the parametrization
    /// `p(s, t) = s * r0 + t * r1` given by the RREF basis rows and expand
    /// symbolically into a binary form of degree `d`.
    pub fn restrict_to_line(&self, line: &Line) -> Result<BinaryForm, FormError> {
        if line.field != self.ctx.id() {
            return Err(FormError::FieldMismatch);
        }
        let ctx = &*self.ctx;
        let d = self.degree as usize;
        // Per-variable ladders of powers of the linear binary form
        // `r0[v] * s + r1[v] * t`, as dense coefficient vectors indexed by the
        // power of `t`.
        let mut max_expo = [0u8; 4];
        for expo in self.terms.keys() {
            for v in 0..4 {
                max_expo[v] = max_expo[v].max(expo[v]);
            }
        }
        let mut ladders: [Vec<Vec<FieldElement>>; 4] = Default::default();
        for v in 0..4 {
            let lin = vec![line.basis[0][v], line.basis[1][v]];
            let mut ladder = vec![vec![FieldElement::ONE]];
            for e in 1..=max_expo[v] as usize {
                let prev = &ladder[e - 1];
                ladder.push(conv(ctx, prev, &lin));
            }
            ladders[v] = ladder;
        }
        let mut acc = vec![FieldElement::ZERO; d + 1];
        for (expo, &coeff) in &self.terms {
            let mut cur = vec![coeff];
            for v in 0..4 {
                if expo[v] > 0 {
                    cur = conv(ctx, &cur, &ladders[v][expo[v] as usize]);
                }
            }
            for (i, c) in cur.into_iter().enumerate() {
                acc[i] = ctx.add(acc[i], c);
            }
        }
        Ok(BinaryForm {
            degree: self.degree,
            coeffs: acc,
        })
    }

    /// Whether the line lies on the surface `V(f)`: the exact symbolic
    /// restriction vanishes identically.
    pub fn contains_line(&self, line: &Line) -> Result<bool, FormError> {
        Ok(self.restrict_to_line(line)?.is_zero())
    }

    /// Exact plane section: parametrize the plane by its non-pivot coordinates
    /// (in increasing position order) and substitute
    /// `x_pivot = -(sum of h_j * u_j)` into the form.  Returns a ternary form
    /// in the three parameters together with the coordinate positions they
    /// correspond to.
    pub fn plane_section(&self, plane: &Plane) -> Result<PlaneSection, FormError> {
        if plane.field != self.ctx.id() {
            return Err(FormError::FieldMismatch);
        }
        let ctx = &*self.ctx;
        let pivot = plane.pivot();
        let params: Vec<usize> = (0..4).filter(|&i| i != pivot).collect();
        // The pivot coordinate as a linear ternary form in the parameters.
        let mut pivot_form: BTreeMap<[u8; 3], FieldElement> = BTreeMap::new();
        for (slot, &pos) in params.iter().enumerate() {
            let c = ctx.neg(plane.covector[pos]);
            if !c.is_zero() {
                let mut e = [0u8; 3];
                e[slot] = 1;
                pivot_form.insert(e, c);
            }
        }
        let mut max_pivot_pow = 0u8;
        for expo in self.terms.keys() {
            max_pivot_pow = max_pivot_pow.max(expo[pivot]);
        }
        let one = {
            let mut m = BTreeMap::new();
            m.insert([0u8; 3], FieldElement::ONE);
            m
        };
        let mut pivot_ladder = vec![one];
        for e in 1..=max_pivot_pow as usize {
            let next = mul3(ctx, &pivot_ladder[e - 1], &pivot_form);
            pivot_ladder.push(next);
        }
        let mut acc: BTreeMap<[u8; 3], FieldElement> = BTreeMap::new();
        for (expo, &coeff) in &self.terms {
            // Monomial in the parameters from the non-pivot variables.
            let mut base = [0u8; 3];
            for (slot, &pos) in params.iter().enumerate() {
                base[slot] = expo[pos];
            }
            for (pe, pc) in &pivot_ladder[expo[pivot] as usize] {
                let mut e = base;
                for i in 0..3 {
                    e[i] += pe[i];
                }
                let c = ctx.mul(coeff, *pc);
                let entry = acc.entry(e).or_insert(FieldElement::ZERO);
                *entry = ctx.add(*entry, c);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(PlaneSection {
            form: TernaryForm {
                degree: self.degree,
                terms: acc,
            },
            params: [params[0], params[1], params[2]],
        })
    }

    /// Linear change of coordinates: returns `g` with `g(x) = f(M x)`.
    /// Composition law: `substitute(substitute(f, M), N) = substitute(f, M N)`.
    pub fn substitute(&self, m: &Mat4) -> Result<SurfaceForm, FormError> {
        let ctx = &*self.ctx;
        if m.det(ctx).is_zero() {
            return Err(FormError::SingularMatrix);
        }
        // Variable v of f becomes the linear form given by row v of M.
        let mut max_expo = [0u8; 4];
        for expo in self.terms.keys() {
            for v in 0..4 {
                max_expo[v] = max_expo[v].max(expo[v]);
            }
        }
        let one = {
            let mut t = BTreeMap::new();
            t.insert([0u8; 4], FieldElement::ONE);
            t
        };
        let mut ladders: Vec<Vec<BTreeMap<[u8; 4], FieldElement>>> = Vec::with_capacity(4);
        for v in 0..4 {
            let mut lin: BTreeMap<[u8; 4], FieldElement> = BTreeMap::new();
            for j in 0..4 {
                if !m.entries[v][j].is_zero() {
                    let mut e = [0u8; 4];
                    e[j] = 1;
                    lin.insert(e, m.entries[v][j]);
                }
            }
            let mut ladder = vec![one.clone()];
            for e in 1..=max_expo[v] as usize {
                let next = mul4(ctx, &ladder[e - 1], &lin);
                ladder.push(next);
            }
            ladders.push(ladder);
        }
        let mut acc: BTreeMap<[u8; 4], FieldElement> = BTreeMap::new();
        for (expo, &coeff) in &self.terms {
            let mut cur = one.clone();
            for v in 0..4 {
                if expo[v] > 0 {
                    cur = mul4(ctx, &cur, &ladders[v][expo[v] as usize]);
                }
            }
            for (e, c) in cur {
                let entry = acc.entry(e).or_insert(FieldElement::ZERO);
                *entry = ctx.add(*entry, ctx.mul(coeff, c));
            }
        }
        acc.retain(|_, c| !c.is_zero());
        if acc.is_empty() {
            // Impossible for invertible M, kept as a defensive check.
            return Err(FormError::EmptyForm);
        }
        Ok(SurfaceForm {
            ctx: Arc::clone(&self.ctx),
            degree: self.degree,
            terms: acc,
        })
    }

    /// Map the form coefficientwise through a field embedding.
    pub fn embed_into(&self, dst: &Arc<FieldCtx>, emb: &Embedding) -> SurfaceForm {
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| (*e, emb.apply(&self.ctx, dst, c)))
            .collect();
        SurfaceForm {
            ctx: Arc::clone(dst),
            degree: self.degree,
            terms,
        }
    }
}

/// Dense convolution of binary-form coefficient vectors.
fn conv(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::ZERO; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(ai, bj));
            }
        }
    }
    out
}

fn mul3(
    ctx: &FieldCtx,
    a: &BTreeMap<[u8; 3], FieldElement>,
    b: &BTreeMap<[u8; 3], FieldElement>,
) -> BTreeMap<[u8; 3], FieldElement> {
    let mut out: BTreeMap<[u8; 3], FieldElement> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            let entry = out.entry(e).or_insert(FieldElement::ZERO);
            *entry = ctx.add(*entry, ctx.mul(*ca, *cb));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn mul4(
    ctx: &FieldCtx,
    a: &BTreeMap<[u8; 4], FieldElement>,
    b: &BTreeMap<[u8; 4], FieldElement>,
) -> BTreeMap<[u8; 4], FieldElement> {
    let mut out: BTreeMap<[u8; 4], FieldElement> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
            let entry = out.entry(e).or_insert(FieldElement::ZERO);
            *entry = ctx.add(*entry, ctx.mul(*ca, *cb));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// A binary form of degree `d` in parameters `(s, t)`; `coeffs[i]` is the
/// coefficient of `s^(d-i) t^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    pub degree: u32,
    pub coeffs: Vec<FieldElement>,
}

impl BinaryForm {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, ctx: &FieldCtx, s: FieldElement, t: FieldElement) -> FieldElement {
        let d = self.degree as usize;
        let mut acc = FieldElement::ZERO;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = ctx.mul(c, ctx.mul(ctx.pow(s, (d - i) as u64), ctx.pow(t, i as u64)));
            acc = ctx.add(acc, term);
        }
        acc
    }
}

/// A ternary form over the three parameters of a plane section, tagged with
/// the coordinate positions the parameters come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryForm {
    pub degree: u32,
    pub terms: BTreeMap<[u8; 3], FieldElement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneSection {
    pub form: TernaryForm,
    /// `params[i]` is the P^3 coordinate position of section variable `i`.
    pub params: [usize; 3],
}

impl TernaryForm {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, ctx: &FieldCtx, u: &[FieldElement; 3]) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        for (e, &c) in &self.terms {
            let mut term = c;
            for v in 0..3 {
                if e[v] > 0 {
                    term = ctx.mul(term, ctx.pow(u[v], e[v] as u64));
                }
            }
            acc = ctx.add(acc, term);
        }
        acc
    }

    /// Exact divisibility by a nonzero linear ternary form: eliminate the
    /// pivot variable of `lin` and check the reduction is identically zero
    /// (reduction modulo a linear polynomial is exact division remainder).
    pub fn divisible_by_linear(&self, ctx: &FieldCtx, lin: &[FieldElement; 3]) -> bool {
        let Some(pivot) = lin.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = ctx.inv(lin[pivot]);
        // pivot variable = -(sum of other coefficients * vars) / lin[pivot]
        let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
        let repl: Vec<FieldElement> = others
            .iter()
            .map(|&i| ctx.neg(ctx.mul(lin[i], inv)))
            .collect();
        // Substitute and check cancellation, expanding (a*u + b*v)^e by
        // dense convolution in the two remaining variables.
        let mut acc: BTreeMap<[u8; 2], FieldElement> = BTreeMap::new();
        for (e, &c) in &self.terms {
            // (repl[0]*u0 + repl[1]*u1)^e[pivot] * u0^e[others0] * u1^e[others1]
            let mut vec2 = vec![FieldElement::ONE];
            let lin2 = vec![repl[0], repl[1]];
            for _ in 0..e[pivot] {
                vec2 = conv(ctx, &vec2, &lin2);
            }
            for (i, coeff2) in vec2.iter().enumerate() {
                if coeff2.is_zero() {
                    continue;
                }
                let deg_pivot = e[pivot] as usize;
                let e0 = e[others[0]] as usize + (deg_pivot - i);
                let e1 = e[others[1]] as usize + i;
                let key = [e0 as u8, e1 as u8];
                let entry = acc.entry(key).or_insert(FieldElement::ZERO);
                *entry = ctx.add(*entry, ctx.mul(c, *coeff2));
            }
        }
        acc.retain(|_, c| !c.is_zero());
        acc.is_empty()
    }
}

/// Outcome of the bounded smoothness probe.  `NoSingularityFound` with
/// `certified: false` means exactly what it says: the extensions listed in
/// `searched` contain no singular point, nothing more.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SmoothnessVerdict {
    /// Every partial derivative vanishes identically; the Jacobian criterion
    /// fails at every point of the surface.
    SingularEverywhere,
    /// A common zero of the form and its partials, found over the degree-`ext`
    /// extension of the coefficient field.
    SingularAt { point: Point, ext: u32 },
    NoSingularityFound {
        /// Extension degrees that were exhaustively swept.
        searched: Vec<u32>,
        /// Extension degrees skipped because their point count exceeded the budget.
        skipped: Vec<u32>,
        /// True when a closed-form argument (diagonal form, characteristic not
        /// dividing the degree) certifies smoothness over the algebraic closure.
        certified: bool,
    },
}

impl SurfaceForm {
    /// Search for singular points over extensions `m = 1..=max_ext`, skipping
    /// any extension whose projective point count exceeds `budget`.  Diagonal
    /// forms `sum(c_i x_i^d)` in all four variables with `p` not dividing `d`
    /// are certified smooth in closed form (the gradient vanishes only at the
    /// origin).
    pub fn smoothness_probe(&self, max_ext: u32, budget: u64) -> SmoothnessVerdict {
        let ctx = &*self.ctx;
        let partials: Vec<Option<SurfaceForm>> = (0..4).map(|v| self.partial(v)).collect();
        if partials.iter().all(|p| p.is_none()) {
            return SmoothnessVerdict::SingularEverywhere;
        }
        // Closed-form check for diagonal forms.
        let diagonal = self
            .terms
            .keys()
            .all(|e| e.iter().filter(|&&x| x > 0).count() == 1);
        if diagonal && self.terms.len() == 4 && !ctx.from_int(self.degree as u64).is_zero() {
            return SmoothnessVerdict::NoSingularityFound {
                searched: vec![],
                skipped: vec![],
                certified: true,
            };
        }
        let mut searched = vec![];
        let mut skipped = vec![];
        for m in 1..=max_ext {
            let Ok(ext_ctx) = FieldCtx::new(ctx.p() as u64, ctx.k() * m, None) else {
                skipped.push(m);
                continue;
            };
            let qm = ext_ctx.q() as u128;
            let n_points = (qm * qm * qm) + (qm * qm) + qm + 1;
            if n_points > budget as u128 {
                skipped.push(m);
                continue;
            }
            let ext_ctx = Arc::new(ext_ctx);
            let emb = Embedding::new(ctx, &ext_ctx).expect("k divides km");
            let f_ext = self.embed_into(&ext_ctx, &emb);
            let partials_ext: Vec<SurfaceForm> = partials
                .iter()
                .flatten()
                .map(|p| p.embed_into(&ext_ctx, &emb))
                .collect();
            if let Some(point) = first_singular_point(&ext_ctx, &f_ext, &partials_ext) {
                return SmoothnessVerdict::SingularAt { point, ext: m };
            }
            searched.push(m);
        }
        SmoothnessVerdict::NoSingularityFound {
            searched,
            skipped,
            certified: false,
        }
    }
}

/// First point of P^3, in `enumerate_points` order, where `f` and every
/// partial vanish.  Streams the charts instead of materializing the point
/// list — probe fields can run to hundreds of millions of points — and
/// scans them in parallel while keeping the result deterministic.
fn first_singular_point(
    ctx: &FieldCtx,
    f: &SurfaceForm,
    partials: &[SurfaceForm],
) -> Option<Point> {
    use rayon::prelude::*;
    let q = ctx.q() as u64;
    for lead in 0..4usize {
        let tail = 3 - lead;
        let total = q.pow(tail as u32);
        let hit = (0..total).into_par_iter().find_map_first(|code| {
            let mut coords = [FieldElement::ZERO; 4];
            coords[lead] = FieldElement::ONE;
            let mut c = code;
            for t in (0..tail).rev() {
                coords[lead + 1 + t] = FieldElement((c % q) as u32);
                c /= q;
            }
            let pt = Point { coords };
            (f.eval_point(&pt).is_zero() && partials.iter().all(|g| g.eval_point(&pt).is_zero()))
                .then_some(pt)
        });
        if hit.is_some() {
            return hit;
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Parsing and printing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Int(u64),
    Caret,
    Star,
    Plus,
    Minus,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, FormError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '^' => {
                out.push((i, Token::Caret));
                i += 1;
            }
            '*' => {
                out.push((i, Token::Star));
                i += 1;
            }
            '+' => {
                out.push((i, Token::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Token::Minus));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: u64 = text[start..i].parse().map_err(|_| FormError::Parse {
                    pos: start,
                    msg: "integer literal too large".into(),
                })?;
                out.push((start, Token::Int(n)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(FormError::Parse {
                    pos: i,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        }
    }
    Ok(out)
}

/// Parse a polynomial in `x, y, z, w` over the given field.  Grammar: terms
/// separated by `+`/`-`; a term is a product of factors (with `*` optional);
/// a factor is a variable, the generator `g`, an integer literal (reduced mod
/// `p`), or a declared parameter name, optionally raised with `^`.  Repeated
/// monomials accumulate, so arbitrary field coefficients can be written as
/// `g`-power combinations (e.g. `g^3*x*w^3 + 2*g*x*w^3`).
fn parse_terms(
    text: &str,
    ctx: &FieldCtx,
    params: &BTreeMap<String, FieldElement>,
) -> Result<Vec<(usize, [u8; 4], FieldElement)>, FormError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(FormError::EmptyForm);
    }
    let mut terms: Vec<(usize, [u8; 4], FieldElement)> = Vec::new();
    let mut i = 0;
    let mut sign_negative = false;
    // Leading sign.
    if let Some((_, tok)) = tokens.first() {
        match tok {
            Token::Plus => i = 1,
            Token::Minus => {
                sign_negative = true;
                i = 1;
            }
            _ => {}
        }
    }
    loop {
        // Parse one term: a nonempty run of factors.
        let term_start = tokens.get(i).map(|(p, _)| *p).unwrap_or(text.len());
        let mut coeff = FieldElement::ONE;
        let mut expo = [0u32; 4];
        let mut saw_factor = false;
        while let Some((pos, tok)) = tokens.get(i) {
            match tok {
                Token::Plus | Token::Minus => break,
                Token::Star => {
                    if !saw_factor {
                        return Err(FormError::Parse {
                            pos: *pos,
                            msg: "'*' without a preceding factor".into(),
                        });
                    }
                    i += 1;
                    continue;
                }
                Token::Caret => {
                    return Err(FormError::Parse {
                        pos: *pos,
                        msg: "'^' without a base".into(),
                    });
                }
                _ => {}
            }
            // Factor base.
            let base_pos = *pos;
            let base = tok.clone();
            i += 1;
            // Optional exponent.
            let mut exponent: u32 = 1;
            if let Some((_, Token::Caret)) = tokens.get(i) {
                i += 1;
                match tokens.get(i) {
                    Some((_, Token::Int(n))) => {
                        if *n > 255 {
                            return Err(FormError::ExponentTooLarge(*n as u32));
                        }
                        exponent = *n as u32;
                        i += 1;
                    }
                    other => {
                        return Err(FormError::Parse {
                            pos: other.map(|(p, _)| *p).unwrap_or(text.len()),
                            msg: "expected integer exponent after '^'".into(),
                        })
                    }
                }
            }
            match base {
                Token::Int(n) => {
                    let v = ctx.pow(ctx.from_int(n), exponent as u64);
                    coeff = ctx.mul(coeff, v);
                }
                Token::Ident(name) => {
                    if let Some(var) = VAR_NAMES.iter().position(|&v| name == v.to_string()) {
                        expo[var] += exponent;
                    } else if name == "g" {
                        let v = ctx.pow(ctx.generator(), exponent as u64);
                        coeff = ctx.mul(coeff, v);
                    } else if let Some(&val) = params.get(&name) {
                        coeff = ctx.mul(coeff, ctx.pow(val, exponent as u64));
                    } else {
                        return Err(FormError::Parse {
                            pos: base_pos,
                            msg: format!("unknown symbol {name:?}"),
                        });
                    }
                }
                _ => {
                    return Err(FormError::Parse {
                        pos: base_pos,
                        msg: "expected a variable, integer, or 'g'".into(),
                    })
                }
            }
            saw_factor = true;
        }
        if !saw_factor {
            let pos = tokens.get(i).map(|(p, _)| *p).unwrap_or(text.len());
            return Err(FormError::Parse {
                pos,
                msg: "empty term".into(),
            });
        }
        for &e in &expo {
            if e > 255 {
                return Err(FormError::ExponentTooLarge(e));
            }
        }
        let signed = if sign_negative { ctx.neg(coeff) } else { coeff };
        terms.push((
            term_start,
            [expo[0] as u8, expo[1] as u8, expo[2] as u8, expo[3] as u8],
            signed,
        ));
        match tokens.get(i) {
            None => break,
            Some((_, Token::Plus)) => {
                sign_negative = false;
                i += 1;
            }
            Some((_, Token::Minus)) => {
                sign_negative = true;
                i += 1;
            }
            _ => unreachable!("term loop only stops at +/-/end"),
        }
    }
    Ok(terms)
}

pub fn parse_form_with_params(
    text: &str,
    ctx: Arc<FieldCtx>,
    params: &BTreeMap<String, FieldElement>,
) -> Result<SurfaceForm, FormError> {
    let terms = parse_terms(text, &ctx, params)?;
    SurfaceForm::from_terms(ctx, terms.into_iter().map(|(_, e, c)| (e, c)))
}

pub fn parse_form(text: &str, ctx: Arc<FieldCtx>) -> Result<SurfaceForm, FormError> {
    parse_form_with_params(text, ctx, &BTreeMap::new())
}

/// Parse a constant field expression such as `0`, `2`, `g^3 + 1`.  Variables
/// are rejected; the value is the sum of the constant terms.
pub fn parse_scalar(text: &str, ctx: &FieldCtx) -> Result<FieldElement, FormError> {
    let terms = parse_terms(text, ctx, &BTreeMap::new())?;
    let mut acc = FieldElement::ZERO;
    for (pos, expo, coeff) in terms {
        if expo != [0; 4] {
            return Err(FormError::Parse {
                pos,
                msg: "expected a constant, found a variable".into(),
            });
        }
        acc = ctx.add(acc, coeff);
    }
    Ok(acc)
}

impl Serialize for SurfaceForm {
    /// Serialized as the field spec plus the canonical display text, which
    /// re-parses to an equal form.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("SurfaceForm", 3)?;
        s.serialize_field("field", &self.ctx.spec_string())?;
        s.serialize_field("degree", &self.degree)?;
        s.serialize_field("text", &self.to_string())?;
        s.end()
    }
}

impl fmt::Display for SurfaceForm {
    /// Canonical text form: monomials from `x`-dominant down, each coefficient
    /// expanded into its `g`-power components so the output re-parses exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx = &*self.ctx;
        let mut first = true;
        for (expo, &coeff) in self.terms.iter().rev() {
            let digits = ctx.coeffs(coeff);
            for (i, &ci) in digits.iter().enumerate().rev() {
                if ci == 0 {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                let mut parts: Vec<String> = Vec::new();
                if ci != 1 || (i == 0 && expo.iter().all(|&e| e == 0)) {
                    parts.push(ci.to_string());
                }
                if i == 1 {
                    parts.push("g".to_string());
                } else if i > 1 {
                    parts.push(format!("g^{i}"));
                }
                for (v, &e) in expo.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => parts.push(VAR_NAMES[v].to_string()),
                        _ => parts.push(format!("{}^{}", VAR_NAMES[v], e)),
                    }
                }
                if parts.is_empty() {
                    parts.push("1".to_string());
                }
                write!(f, "{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Surface files
// ---------------------------------------------------------------------------

/// A parsed surface file: `field:` and `f:` headers are required, `ext:` is
/// optional.  Blank lines and `#` comments are ignored.
#[derive(Debug, Clone)]
pub struct SurfaceFile {
    pub form: SurfaceForm,
    pub ext: Option<u32>,
}

pub fn parse_surface_file(text: &str) -> Result<SurfaceFile, FormError> {
    let mut field_spec: Option<String> = None;
    let mut ext: Option<u32> = None;
    let mut poly: Option<String> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(FormError::SurfaceFile(format!(
                "line {}: expected 'key: value', got {line:?}",
                lineno + 1
            )));
        };
        let value = value.trim();
        match key.trim() {
            "field" => field_spec = Some(value.to_string()),
            "ext" => {
                let m: u32 = value.parse().map_err(|_| {
                    FormError::SurfaceFile(format!(
                        "line {}: ext must be a positive integer",
                        lineno + 1
                    ))
                })?;
                if m == 0 {
                    return Err(FormError::SurfaceFile(format!(
                        "line {}: ext must be at least 1",
                        lineno + 1
                    )));
                }
                ext = Some(m);
            }
            "f" => poly = Some(value.to_string()),
            other => {
                return Err(FormError::SurfaceFile(format!(
                    "line {}: unknown key {other:?}",
                    lineno + 1
                )))
            }
        }
    }
    let field_spec =
        field_spec.ok_or_else(|| FormError::SurfaceFile("missing 'field:' header".into()))?;
    let poly = poly.ok_or_else(|| FormError::SurfaceFile("missing 'f:' header".into()))?;
    let ctx = Arc::new(FieldCtx::parse_spec(&field_spec)?);
    let form = parse_form(&poly, ctx)?;
    Ok(SurfaceFile { form, ext })
}
