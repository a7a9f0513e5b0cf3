//! Small exact linear algebra over a [`FieldCtx`]: row reduction, nullspaces,
//! and 4x4 matrices acting on P^3 coordinates.  Everything here is deliberately
//! dense and tiny — the matrices are at most a handful of rows.

use crate::gf::{FieldCtx, FieldElement};
use serde::Serialize;

/// Reduce `rows` to reduced row echelon form in place.  Returns the pivot
/// column of each nonzero row, in order.
pub fn rref(ctx: &FieldCtx, rows: &mut [Vec<FieldElement>]) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return vec![];
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ctx.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c];
                for j in 0..ncols {
                    let sub = ctx.mul(factor, rows[r][j]);
                    rows[i][j] = ctx.sub(rows[i][j], sub);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(ctx: &FieldCtx, rows: &[Vec<FieldElement>]) -> usize {
    let mut work: Vec<Vec<FieldElement>> = rows.to_vec();
    rref(ctx, &mut work).len()
}

/// Basis of the right nullspace `{ v : M v = 0 }`, one vector per free column,
/// in increasing free-column order.  Deterministic given the input.
pub fn nullspace(ctx: &FieldCtx, rows: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    if rows.is_empty() {
        return vec![];
    }
    let ncols = rows[0].len();
    let mut work: Vec<Vec<FieldElement>> = rows.to_vec();
    let pivots = rref(ctx, &mut work);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![FieldElement::ZERO; ncols];
        v[free] = FieldElement::ONE;
        for (row_idx, &pc) in pivots.iter().enumerate() {
            v[pc] = ctx.neg(work[row_idx][free]);
        }
        basis.push(v);
    }
    basis
}

/// A 4x4 matrix over the field, acting on column vectors of P^3 coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Mat4 {
    pub entries: [[FieldElement; 4]; 4],
}

impl Mat4 {
    pub fn identity() -> Mat4 {
        let mut entries = [[FieldElement::ZERO; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = FieldElement::ONE;
        }
        Mat4 { entries }
    }

    pub fn from_rows(rows: [[FieldElement; 4]; 4]) -> Mat4 {
        Mat4 { entries: rows }
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Mat4) -> Mat4 {
        let mut out = [[FieldElement::ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = FieldElement::ZERO;
                for (l, other_row) in other.entries.iter().enumerate() {
                    acc = ctx.add(acc, ctx.mul(self.entries[i][l], other_row[j]));
                }
                out[i][j] = acc;
            }
        }
        Mat4 { entries: out }
    }

    pub fn apply(&self, ctx: &FieldCtx, v: &[FieldElement; 4]) -> [FieldElement; 4] {
        let mut out = [FieldElement::ZERO; 4];
        for (i, row) in self.entries.iter().enumerate() {
            let mut acc = FieldElement::ZERO;
            for (j, &x) in v.iter().enumerate() {
                acc = ctx.add(acc, ctx.mul(row[j], x));
            }
            out[i] = acc;
        }
        out
    }

    pub fn det(&self, ctx: &FieldCtx) -> FieldElement {
        // Gaussian elimination with sign tracking (sign is a field scalar here).
        let mut m: Vec<Vec<FieldElement>> = self.entries.iter().map(|r| r.to_vec()).collect();
        let mut det = FieldElement::ONE;
        for c in 0..4 {
            let Some(pr) = (c..4).find(|&i| !m[i][c].is_zero()) else {
                return FieldElement::ZERO;
            };
            if pr != c {
                m.swap(pr, c);
                det = ctx.neg(det);
            }
            det = ctx.mul(det, m[c][c]);
            let inv = ctx.inv(m[c][c]);
            for i in c + 1..4 {
                if !m[i][c].is_zero() {
                    let f = ctx.mul(m[i][c], inv);
                    for j in c..4 {
                        let sub = ctx.mul(f, m[c][j]);
                        m[i][j] = ctx.sub(m[i][j], sub);
                    }
                }
            }
        }
        det
    }

    /// Inverse via Gauss-Jordan; `None` when singular.
    pub fn inverse(&self, ctx: &FieldCtx) -> Option<Mat4> {
        let mut work: Vec<Vec<FieldElement>> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.to_vec();
                row.extend((0..4).map(|j| {
                    if i == j {
                        FieldElement::ONE
                    } else {
                        FieldElement::ZERO
                    }
                }));
                row
            })
            .collect();
        let pivots = rref(ctx, &mut work);
        if pivots != [0, 1, 2, 3] {
            return None;
        }
        let mut out = [[FieldElement::ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = work[i][4 + j];
            }
        }
        Some(Mat4 { entries: out })
    }

    /// Rank over the field.
    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        let rows: Vec<Vec<FieldElement>> = self.entries.iter().map(|r| r.to_vec()).collect();
        rank(ctx, &rows)
    }
}
