//! The versioned machine-readable report (`report_v1`) and its plain-text
//! rendering.
//!
//! A report is a single JSON document assembled from optional sections, one
//! per analysis family, plus a surface echo and a timing block.  Two runs on
//! identical inputs produce byte-identical JSON except for the timing block;
//! [`strip_timing`] removes it for comparisons.  Coordinates embed base-p
//! digit strings so external scripts can re-check every claim with
//! independent arithmetic.

use crate::configs::{ExtremalReport, NormalFormData, StarCertificate, StarChordCertificate};
use crate::forms::{SmoothnessVerdict, SurfaceForm};
use crate::gf::{FieldCtx, FieldElement};
use crate::gq::{DualityReport, GqReport, TriadSummary};
use crate::incidence::{self, MaximalProfileVerdict};
use crate::lines::LineSet;
use crate::proj3::{Line, Plane, Point};
use num_bigint::BigInt;
use serde::Serialize;
use std::fmt::Write as _;

pub const SCHEMA: &str = "report_v1";

/// Serialize a [`BigInt`] as its decimal string, keeping the JSON readable
/// and free of implementation-defined limb encodings.
pub fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn ser_big_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|b| b.to_string()))
}

/// A field element as a base-p digit string, most significant digit first.
/// Digits are concatenated directly for p <= 10 and joined with `:` above.
pub fn element_text(ctx: &FieldCtx, e: FieldElement) -> String {
    let digits = ctx.coeffs(e);
    let parts: Vec<String> = digits.iter().rev().map(|d| d.to_string()).collect();
    if ctx.p() <= 10 {
        parts.concat()
    } else {
        parts.join(":")
    }
}

/// Canonical text of a line: the 8 entries of its reduced basis, row-major,
/// space-separated digit strings.
pub fn line_text(ctx: &FieldCtx, line: &Line) -> String {
    let mut parts = Vec::with_capacity(8);
    for row in &line.basis {
        for &e in row {
            parts.push(element_text(ctx, e));
        }
    }
    parts.join(" ")
}

pub fn plane_text(ctx: &FieldCtx, plane: &Plane) -> String {
    plane
        .covector
        .iter()
        .map(|&e| element_text(ctx, e))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn point_text(ctx: &FieldCtx, point: &Point) -> String {
    point
        .coords
        .iter()
        .map(|&e| element_text(ctx, e))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceEcho {
    pub field: String,
    pub extension: u32,
    pub working_field: String,
    pub degree: u32,
    pub form: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension_caveat: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TimingBlock {
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub surface: SurfaceEcho,
    /// Algorithm provenance: which enumeration route(s) produced the line set.
    pub algorithm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smoothness: Option<SmoothnessSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lines: Option<LinesSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analyze: Option<AnalyzeSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gq: Option<GqSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub configs: Option<ConfigsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySection>,
    pub timing: TimingBlock,
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothnessSection {
    /// `certified`, `singular`, or `probed` — the last is explicitly weaker:
    /// no singular point found in the searched range, nothing more.
    pub status: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LinesSection {
    pub count: usize,
    #[serde(serialize_with = "ser_big")]
    pub bound: BigInt,
    pub attains_bound: bool,
    /// Present when both enumeration routes ran: whether they agreed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agreement: Option<bool>,
    pub lines: Vec<LineRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LineRecord {
    pub index: usize,
    pub basis: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeSection {
    pub matrix: MatrixSummary,
    pub profiles: Vec<ProfileRow>,
    pub maximal_profile: MaximalProfileVerdict,
    pub lattice_rank: usize,
    #[serde(serialize_with = "ser_big")]
    pub rank_bound: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub basis_determinant: BigInt,
    pub coplanarity_pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixSummary {
    pub size: usize,
    pub includes_h: bool,
    pub line_diagonal: i64,
    #[serde(serialize_with = "ser_big_vec")]
    pub row_sums: Vec<BigInt>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileRow {
    pub line: usize,
    pub full_planes: usize,
    pub meeting_total: usize,
    pub maximal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GqSection {
    pub line_plane: GqReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_line: Option<GqReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duality: Option<DualityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regularity: Option<RegularityRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularityRecord {
    /// `all` or `sample=N seed=S`.
    pub mode: String,
    pub summary: TriadSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigsSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrics: Option<QuadricSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stars: Option<StarsBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star_chords: Option<StarChordBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<NormalFormRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extremal: Option<ExtremalRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadricSummary {
    pub triads_checked: usize,
    pub certificates: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<[usize; 3]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StarsBlock {
    pub count: usize,
    pub stars: Vec<StarRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StarRecord {
    pub plane: String,
    pub center: String,
    pub lines: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StarChordBlock {
    pub count: usize,
    pub certificates: Vec<StarChordRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StarChordRecord {
    pub h_planes: Vec<String>,
    pub k_planes: Vec<String>,
    pub grid: Vec<Vec<usize>>,
    pub chord_h: String,
    pub chord_k: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalFormRecord {
    pub transform: Vec<Vec<String>>,
    pub normalized_form: String,
    pub ell: Vec<String>,
    pub em: Vec<String>,
    pub scale_h: String,
    pub scale_k: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalRecord {
    pub extremal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sub_power: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugate_symmetric: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySection {
    pub links: Vec<LinkVerdict>,
    pub all_pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkVerdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Report {
    pub fn new(surface: SurfaceEcho, algorithm: &str) -> Report {
        Report {
            schema: SCHEMA,
            surface,
            algorithm: algorithm.to_string(),
            smoothness: None,
            lines: None,
            analyze: None,
            gq: None,
            configs: None,
            verify: None,
            timing: TimingBlock { elapsed_ms: 0 },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Remove the timing block from a JSON report so two runs can be compared.
pub fn strip_timing(value: &mut serde_json::Value) {
    if let Some(obj) = value.as_object_mut() {
        obj.remove("timing");
    }
}

pub fn surface_echo(ls: &LineSet, caveat: Option<String>) -> SurfaceEcho {
    SurfaceEcho {
        field: ls.base_ctx().spec_string(),
        extension: ls.ext_degree(),
        working_field: ls.ctx().spec_string(),
        degree: ls.form().degree(),
        form: ls.base_form().to_string(),
        extension_caveat: caveat,
    }
}

pub fn smoothness_section(verdict: &SmoothnessVerdict, ctx: &FieldCtx) -> SmoothnessSection {
    match verdict {
        SmoothnessVerdict::SingularEverywhere => SmoothnessSection {
            status: "singular".into(),
            detail: "the partial derivatives vanish identically".into(),
        },
        SmoothnessVerdict::SingularAt { point, ext } => SmoothnessSection {
            status: "singular".into(),
            detail: format!(
                "singular point [{}] over extension degree {ext}",
                point_text(ctx, point)
            ),
        },
        SmoothnessVerdict::NoSingularityFound {
            searched,
            skipped,
            certified,
        } => {
            if *certified {
                SmoothnessSection {
                    status: "certified".into(),
                    detail: "smooth by the diagonal-form criterion".into(),
                }
            } else {
                SmoothnessSection {
                    status: "probed".into(),
                    detail: format!(
                        "probed, not certified: no singular point over extensions {searched:?}{}",
                        if skipped.is_empty() {
                            String::new()
                        } else {
                            format!(" (extensions {skipped:?} skipped by budget)")
                        }
                    ),
                }
            }
        }
    }
}

pub fn lines_section(
    ls: &LineSet,
    oracle_agreement: Option<bool>,
    include_lines: bool,
) -> LinesSection {
    let ctx = ls.ctx();
    let bound = crate::bounds::max_lines(ls.form().degree() as u64);
    let lines = if include_lines {
        ls.lines()
            .iter()
            .enumerate()
            .map(|(index, l)| LineRecord {
                index,
                basis: line_text(ctx, l),
            })
            .collect()
    } else {
        Vec::new()
    };
    LinesSection {
        count: ls.count(),
        attains_bound: BigInt::from(ls.count()) == bound,
        bound,
        oracle_agreement,
        lines,
    }
}

pub fn analyze_section(ls: &LineSet) -> AnalyzeSection {
    let d = ls.form().degree() as i64;
    let matrix = incidence::intersection_matrix(ls, true);
    let row_sums: Vec<BigInt> = matrix
        .iter()
        .map(|row| row.iter().sum::<BigInt>())
        .collect();
    let profiles: Vec<ProfileRow> = (0..ls.count())
        .map(|i| {
            let p = incidence::line_profile(ls, i);
            ProfileRow {
                line: i,
                full_planes: p.full_plane_count,
                meeting_total: p.meeting_total,
                maximal: p.maximal,
            }
        })
        .collect();
    let basis = incidence::select_rank_basis(ls);
    AnalyzeSection {
        matrix: MatrixSummary {
            size: matrix.len(),
            includes_h: true,
            line_diagonal: 2 - d,
            row_sums,
        },
        profiles,
        maximal_profile: incidence::verify_maximal_profile(ls),
        lattice_rank: basis.rank,
        rank_bound: crate::bounds::picard_rank_bound(ls.form().degree() as u64),
        basis_determinant: basis.det,
        coplanarity_pass: incidence::coplanarity_check(ls).pass,
    }
}

pub fn star_record(ls: &LineSet, star: &StarCertificate) -> StarRecord {
    let ctx = ls.ctx();
    StarRecord {
        plane: plane_text(ctx, &star.plane),
        center: point_text(ctx, &star.center),
        lines: star.lines.clone(),
    }
}

pub fn star_chord_record(ls: &LineSet, cert: &StarChordCertificate) -> StarChordRecord {
    let ctx = ls.ctx();
    StarChordRecord {
        h_planes: cert.h_planes.iter().map(|p| plane_text(ctx, p)).collect(),
        k_planes: cert.k_planes.iter().map(|p| plane_text(ctx, p)).collect(),
        grid: cert.grid.clone(),
        chord_h: line_text(ctx, &cert.chord_h),
        chord_k: line_text(ctx, &cert.chord_k),
    }
}

pub fn normal_form_record(ls: &LineSet, nf: &NormalFormData) -> NormalFormRecord {
    let ctx = ls.ctx();
    let covector_text = |c: &[FieldElement; 4]| {
        c.iter()
            .map(|&e| element_text(ctx, e))
            .collect::<Vec<_>>()
            .join(" ")
    };
    NormalFormRecord {
        transform: nf
            .transform
            .entries
            .iter()
            .map(|row| row.iter().map(|&e| element_text(ctx, e)).collect())
            .collect(),
        normalized_form: nf.normalized.to_string(),
        ell: nf.ell.iter().map(covector_text).collect(),
        em: nf.em.iter().map(covector_text).collect(),
        scale_h: element_text(ctx, nf.scale_h),
        scale_k: element_text(ctx, nf.scale_k),
    }
}

pub fn extremal_record(form: &SurfaceForm, rep: &ExtremalReport) -> ExtremalRecord {
    let ctx = form.ctx();
    ExtremalRecord {
        extremal: rep.extremal,
        sub_power: rep.sub_power,
        matrix: rep.matrix.map(|m| {
            m.iter()
                .map(|row| row.iter().map(|&e| element_text(ctx, e)).collect())
                .collect()
        }),
        matrix_rank: rep.matrix_rank,
        conjugate_symmetric: rep.conjugate_symmetric,
        obstruction: rep.obstruction.clone(),
    }
}

/// Plain-text rendering of a report, section by section.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let s = &report.surface;
    let _ = writeln!(out, "surface over {} (degree {})", s.field, s.degree);
    let _ = writeln!(out, "  f = {}", s.form);
    let _ = writeln!(
        out,
        "  searched extension: {} (working field {})",
        s.extension, s.working_field
    );
    if let Some(c) = &s.extension_caveat {
        let _ = writeln!(out, "  caveat: {c}");
    }
    let _ = writeln!(out, "  algorithm: {}", report.algorithm);
    if let Some(sm) = &report.smoothness {
        let _ = writeln!(out, "smoothness: {} — {}", sm.status, sm.detail);
    }
    if let Some(l) = &report.lines {
        let _ = writeln!(
            out,
            "lines: {} of at most {}{}",
            l.count,
            l.bound,
            if l.attains_bound {
                " (bound attained)"
            } else {
                ""
            }
        );
        if let Some(agree) = l.oracle_agreement {
            let _ = writeln!(
                out,
                "  oracle agreement: {}",
                if agree { "PASS" } else { "FAIL" }
            );
        }
        for rec in &l.lines {
            let _ = writeln!(out, "  line {:>4}: {}", rec.index, rec.basis);
        }
    }
    if let Some(a) = &report.analyze {
        let _ = writeln!(
            out,
            "intersection matrix: {} x {} (line diagonal {})",
            a.matrix.size, a.matrix.size, a.matrix.line_diagonal
        );
        let _ = writeln!(
            out,
            "lattice rank: {} (bound {}), basis determinant {}",
            a.lattice_rank, a.rank_bound, a.basis_determinant
        );
        let _ = writeln!(
            out,
            "maximal profile: {}{}",
            if a.maximal_profile.pass {
                "PASS"
            } else {
                "FAIL"
            },
            a.maximal_profile
                .witness
                .as_ref()
                .map(|w| format!(" — {w}"))
                .unwrap_or_default()
        );
        let _ = writeln!(
            out,
            "coplanarity: {}",
            if a.coplanarity_pass { "PASS" } else { "FAIL" }
        );
        let maximal = a.profiles.iter().filter(|p| p.maximal).count();
        let _ = writeln!(out, "profiles: {} of {} maximal", maximal, a.profiles.len());
    }
    if let Some(g) = &report.gq {
        let r = &g.line_plane;
        let _ = writeln!(
            out,
            "line-plane structure: ({}, {}) with {} points, {} blocks: {}",
            r.s,
            r.t,
            r.n_points,
            r.n_blocks,
            if r.pass { "PASS" } else { "FAIL" }
        );
        for ax in &r.axioms {
            if !ax.pass {
                let _ = writeln!(
                    out,
                    "  axiom FAIL: {} — {}",
                    ax.name,
                    ax.witness.as_deref().unwrap_or("")
                );
            }
        }
        if let Some(pl) = &g.point_line {
            let _ = writeln!(
                out,
                "point-line structure: ({}, {}) with {} points, {} blocks: {}",
                pl.s,
                pl.t,
                pl.n_points,
                pl.n_blocks,
                if pl.pass { "PASS" } else { "FAIL" }
            );
        }
        if let Some(dual) = &g.duality {
            let _ = writeln!(out, "duality: {}", if dual.pass { "PASS" } else { "FAIL" });
        }
        if let Some(reg) = &g.regularity {
            let _ = writeln!(
                out,
                "3-regularity ({}): {} of {} triads regular{}",
                reg.mode,
                reg.summary.regular,
                reg.summary.total,
                reg.summary
                    .first_irregular
                    .as_ref()
                    .map(|t| format!(", first irregular {:?}", t.triad))
                    .unwrap_or_default()
            );
        }
    }
    if let Some(c) = &report.configs {
        if let Some(q) = &c.quadrics {
            let _ = writeln!(
                out,
                "quadric configurations: {} certificates from {} triads ({} without)",
                q.certificates, q.triads_checked, q.failures
            );
        }
        if let Some(st) = &c.stars {
            let _ = writeln!(out, "stars: {}", st.count);
        }
        if let Some(sc) = &c.star_chords {
            let _ = writeln!(out, "star-chord pairs: {}", sc.count);
        }
        if let Some(nf) = &c.normalization {
            let _ = writeln!(out, "normal form: {}", nf.normalized_form);
        }
        if let Some(ex) = &c.extremal {
            let _ = writeln!(
                out,
                "extremal: {}{}",
                if ex.extremal { "yes" } else { "no" },
                ex.obstruction
                    .as_ref()
                    .map(|o| format!(" — {o}"))
                    .unwrap_or_default()
            );
        }
    }
    if let Some(v) = &report.verify {
        for link in &v.links {
            let _ = writeln!(
                out,
                "verify {}: {} — {}",
                link.name,
                if link.pass { "PASS" } else { "FAIL" },
                link.detail
            );
        }
        let _ = writeln!(
            out,
            "verify overall: {}",
            if v.all_pass { "PASS" } else { "FAIL" }
        );
    }
    let _ = writeln!(out, "elapsed: {} ms", report.timing.elapsed_ms);
    out
}
