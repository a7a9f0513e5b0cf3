//! Finite point-block incidence structures, the generalized-quadrangle
//! axioms with explicit witnesses, structural duality, and the 3-regularity
//! of triads.  Two structures are built from a surface's line set: lines
//! versus completely-split planes, and surface points versus lines.

use crate::incidence::{classify_plane, plane_groups};
use crate::lines::LineSet;
use crate::proj3::Point;
use bitvec::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GqError {
    #[error("point index {0} out of range ({1} points)")]
    BadIndex(u32, usize),
    #[error("the three points are not pairwise non-collinear")]
    NotATriad,
}

/// A finite incidence structure on points `0..n_points` with blocks given as
/// sorted point-index lists.  Collinearity bitsets follow the self-inclusive
/// convention: every point is collinear with itself.
#[derive(Debug, Clone)]
pub struct IncidenceStructure {
    n_points: usize,
    blocks: Vec<Vec<u32>>,
    point_blocks: Vec<Vec<u32>>,
    collinear: Vec<BitVec>,
}

impl IncidenceStructure {
    /// Build from blocks given as point-index lists.  Each block is sorted
    /// and deduplicated; the order of the blocks themselves is preserved, so
    /// block `i` of the structure is input block `i` (duals rely on this).
    pub fn from_blocks(
        n_points: usize,
        mut blocks: Vec<Vec<u32>>,
    ) -> Result<IncidenceStructure, GqError> {
        for block in &mut blocks {
            block.sort_unstable();
            block.dedup();
            for &p in block.iter() {
                if p as usize >= n_points {
                    return Err(GqError::BadIndex(p, n_points));
                }
            }
        }
        let mut point_blocks = vec![Vec::new(); n_points];
        let mut collinear = vec![bitvec![0; n_points]; n_points];
        for (i, row) in collinear.iter_mut().enumerate() {
            row.set(i, true);
        }
        for (bi, block) in blocks.iter().enumerate() {
            for (a, &p) in block.iter().enumerate() {
                point_blocks[p as usize].push(bi as u32);
                for &q in &block[a + 1..] {
                    collinear[p as usize].set(q as usize, true);
                    collinear[q as usize].set(p as usize, true);
                }
            }
        }
        Ok(IncidenceStructure {
            n_points,
            blocks,
            point_blocks,
            collinear,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }
    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }
    pub fn point_blocks(&self) -> &[Vec<u32>] {
        &self.point_blocks
    }
    pub fn collinear(&self, p: u32, q: u32) -> bool {
        self.collinear[p as usize][q as usize]
    }

    /// The dual structure: blocks become points and points become blocks.
    pub fn dual(&self) -> IncidenceStructure {
        IncidenceStructure::from_blocks(self.blocks.len(), self.point_blocks.clone())
            .expect("dual indices are in range by construction")
    }

    /// Check the generalized-quadrangle axioms for order `(s, t)`,
    /// exhaustively, returning one named result per axiom with a witness for
    /// the first violation found.
    pub fn verify_gq(&self, s: u64, t: u64) -> GqReport {
        let mut axioms = Vec::with_capacity(5);

        // 1: every block contains exactly s + 1 points.
        let mut witness = None;
        for (bi, block) in self.blocks.iter().enumerate() {
            if block.len() as u64 != s + 1 {
                witness = Some(format!(
                    "block {bi} has {} points, expected {}",
                    block.len(),
                    s + 1
                ));
                break;
            }
        }
        axioms.push(AxiomCheck::new("every block has s + 1 points", witness));

        // 2: every point lies on exactly t + 1 blocks.
        let mut witness = None;
        for (p, through) in self.point_blocks.iter().enumerate() {
            if through.len() as u64 != t + 1 {
                witness = Some(format!(
                    "point {p} lies on {} blocks, expected {}",
                    through.len(),
                    t + 1
                ));
                break;
            }
        }
        axioms.push(AxiomCheck::new("every point lies on t + 1 blocks", witness));

        // 3: two distinct points lie on at most one common block.
        let mut witness = None;
        'pairs: for p in 0..self.n_points {
            for &bi in &self.point_blocks[p] {
                for &q in &self.blocks[bi as usize] {
                    if (q as usize) <= p {
                        continue;
                    }
                    let common = self.common_blocks(p as u32, q);
                    if common.len() > 1 {
                        witness = Some(format!("points {p} and {q} lie on blocks {:?}", common));
                        break 'pairs;
                    }
                }
            }
        }
        axioms.push(AxiomCheck::new(
            "two points lie on at most one common block",
            witness,
        ));

        // 4: two distinct blocks share at most one point.
        let mut witness = None;
        'blocks: for (bi, block) in self.blocks.iter().enumerate() {
            for bj in (bi + 1)..self.blocks.len() {
                let shared: Vec<u32> = block
                    .iter()
                    .copied()
                    .filter(|p| self.blocks[bj].binary_search(p).is_ok())
                    .collect();
                if shared.len() > 1 {
                    witness = Some(format!("blocks {bi} and {bj} share points {shared:?}"));
                    break 'blocks;
                }
            }
        }
        axioms.push(AxiomCheck::new(
            "two blocks share at most one point",
            witness,
        ));

        // 5: for every non-incident point-block pair (p, B) there is exactly
        // one point of B collinear with p through exactly one block.
        let mut witness = None;
        'antiflags: for p in 0..self.n_points as u32 {
            for (bi, block) in self.blocks.iter().enumerate() {
                if block.binary_search(&p).is_ok() {
                    continue;
                }
                let mut count = 0usize;
                for &q in block {
                    count += self.common_blocks(p, q).len();
                }
                if count != 1 {
                    witness = Some(format!(
                        "point {p} projects onto block {bi} through {count} flags, expected 1"
                    ));
                    break 'antiflags;
                }
            }
        }
        axioms.push(AxiomCheck::new(
            "unique projection onto a non-incident block",
            witness,
        ));

        GqReport {
            s,
            t,
            n_points: self.n_points,
            n_blocks: self.blocks.len(),
            pass: axioms.iter().all(|a| a.pass),
            axioms,
        }
    }

    fn common_blocks(&self, p: u32, q: u32) -> Vec<u32> {
        self.point_blocks[p as usize]
            .iter()
            .copied()
            .filter(|bi| self.point_blocks[q as usize].contains(bi))
            .collect()
    }

    /// All triads: unordered triples of pairwise non-collinear points.
    pub fn triads(&self) -> Vec<[u32; 3]> {
        let n = self.n_points as u32;
        let mut out = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if self.collinear(a, b) {
                    continue;
                }
                for c in (b + 1)..n {
                    if !self.collinear(a, c) && !self.collinear(b, c) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// The perp of a point set: all points collinear with every member.
    pub fn perp(&self, set: &[u32]) -> Vec<u32> {
        let mut acc = bitvec![1; self.n_points];
        for &p in set {
            acc &= &self.collinear[p as usize];
        }
        acc.iter_ones().map(|i| i as u32).collect()
    }

    /// 3-regularity of a triad in a structure of order `(s, t)`: the double
    /// perp of the triad must contain exactly `s + 1` points (including the
    /// triad), every one collinear with every center.
    pub fn check_triad_regularity(&self, triad: &[u32; 3], s: u64) -> Result<TriadReport, GqError> {
        for &p in triad {
            if p as usize >= self.n_points {
                return Err(GqError::BadIndex(p, self.n_points));
            }
        }
        let [a, b, c] = *triad;
        if a == b
            || b == c
            || a == c
            || self.collinear(a, b)
            || self.collinear(a, c)
            || self.collinear(b, c)
        {
            return Err(GqError::NotATriad);
        }
        let centers = self.perp(&[a, b, c]);
        let closure = self.perp(&centers);
        let triad_inside = triad.iter().all(|p| closure.contains(p));
        let cross_ok = closure
            .iter()
            .all(|&x| centers.iter().all(|&y| self.collinear(x, y)));
        let pass = closure.len() as u64 == s + 1 && triad_inside && cross_ok;
        Ok(TriadReport {
            triad: *triad,
            centers,
            closure,
            pass,
        })
    }

    /// Exhaustive 3-regularity over all triads.
    pub fn check_all_triads(&self, s: u64) -> TriadSummary {
        let mut total = 0usize;
        let mut regular = 0usize;
        let mut first_irregular = None;
        for triad in self.triads() {
            total += 1;
            let report = self
                .check_triad_regularity(&triad, s)
                .expect("enumerated triads are triads");
            if report.pass {
                regular += 1;
            } else if first_irregular.is_none() {
                first_irregular = Some(report);
            }
        }
        TriadSummary {
            total,
            regular,
            first_irregular,
        }
    }

    /// Histogram of block sizes.
    pub fn block_size_counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for b in &self.blocks {
            *out.entry(b.len()).or_insert(0) += 1;
        }
        out
    }

    /// Histogram of point degrees.
    pub fn point_degree_counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for pb in &self.point_blocks {
            *out.entry(pb.len()).or_insert(0) += 1;
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub pass: bool,
    pub witness: Option<String>,
}

impl AxiomCheck {
    fn new(name: &'static str, witness: Option<String>) -> AxiomCheck {
        AxiomCheck {
            name,
            pass: witness.is_none(),
            witness,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GqReport {
    pub s: u64,
    pub t: u64,
    pub n_points: usize,
    pub n_blocks: usize,
    pub pass: bool,
    pub axioms: Vec<AxiomCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TriadReport {
    pub triad: [u32; 3],
    pub centers: Vec<u32>,
    pub closure: Vec<u32>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TriadSummary {
    pub total: usize,
    pub regular: usize,
    pub first_irregular: Option<TriadReport>,
}

/// Points are the surface lines; blocks are the completely-split planes.
pub fn build_line_plane_structure(ls: &LineSet) -> IncidenceStructure {
    let groups = plane_groups(ls);
    let mut blocks = Vec::new();
    for (plane, lines) in groups {
        if classify_plane(ls, &plane, &lines).full {
            blocks.push(lines.iter().map(|&i| i as u32).collect());
        }
    }
    IncidenceStructure::from_blocks(ls.count(), blocks).expect("line indices are in range")
}

/// Points are the rational points of the surface over the enumeration field;
/// blocks are the point sets of the surface lines.
pub fn build_point_line_structure(ls: &LineSet) -> (IncidenceStructure, Vec<Point>) {
    let ctx = ls.ctx();
    let mut points: Vec<Point> = crate::proj3::enumerate_points(ctx)
        .into_iter()
        .filter(|pt| ls.form().eval_point(pt).is_zero())
        .collect();
    points.sort();
    let blocks = ls
        .lines()
        .iter()
        .map(|line| {
            line.points(ctx)
                .into_iter()
                .map(|pt| {
                    points
                        .binary_search(&pt)
                        .expect("line points lie on the surface") as u32
                })
                .collect()
        })
        .collect();
    let structure =
        IncidenceStructure::from_blocks(points.len(), blocks).expect("point indices are in range");
    (structure, points)
}

/// Compare a structure with the dual of another: sizes crosswise, degree
/// histograms crosswise, and — the sharp test — equality of the two block
/// families as sorted set lists.
#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub counts_match: bool,
    pub degree_histograms_match: bool,
    pub blocks_coincide: bool,
    pub pass: bool,
}

pub fn duality_report(a: &IncidenceStructure, b: &IncidenceStructure) -> DualityReport {
    let bd = b.dual();
    let counts_match = a.n_points() == bd.n_points() && a.blocks().len() == bd.blocks().len();
    let degree_histograms_match = a.block_size_counts() == bd.block_size_counts()
        && a.point_degree_counts() == bd.point_degree_counts();
    // Compare the two block families as unordered set collections.
    let mut blocks_a = a.blocks().to_vec();
    let mut blocks_bd = bd.blocks().to_vec();
    blocks_a.sort();
    blocks_bd.sort();
    let blocks_coincide = blocks_a == blocks_bd;
    DualityReport {
        counts_match,
        degree_histograms_match,
        blocks_coincide,
        pass: counts_match && degree_histograms_match && blocks_coincide,
    }
}
