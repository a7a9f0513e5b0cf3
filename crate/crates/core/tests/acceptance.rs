//! Acceptance gate: one test per shipped guarantee.  Each test prints a
//! single `ACCEPTANCE <n> <label>: PASS|FAIL` line followed by any failing
//! clauses, then asserts the verdict, so the suite doubles as a scorecard
//! (run with `--nocapture` to see the lines for passing tests too).

use std::path::Path;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use surflines::configs::{
    self, find_quadric_configuration, find_star_chord_pairs, normalize_star_chord,
    validate_quadric, StarChordCertificate,
};
use surflines::gq::build_line_plane_structure;
use surflines::incidence::{
    block_det_closed_form, full_planes, intersection_matrix, line_profile, verify_maximal_profile,
};
use surflines::lines::{
    common_zero_count, enumerate_by_evaluation, enumerate_by_restriction, line_level_forms,
};
use surflines::{
    bounds, intmat, parse_form, parse_surface_file, FieldCtx, FieldElement, Line, LineSet, Plane,
};

const BUDGET: u64 = 1_000_000_000;

struct Fixture {
    ls: LineSet,
    build_time: Duration,
}

fn load(name: &str) -> Fixture {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let file = parse_surface_file(&text).expect("fixture file parses");
    let ext = file.ext.unwrap_or(1);
    let start = Instant::now();
    let ls = LineSet::build(&file.form, ext, BUDGET).expect("fixture enumerates");
    Fixture {
        ls,
        build_time: start.elapsed(),
    }
}

static CUBIC: OnceLock<Fixture> = OnceLock::new();
static QUARTIC: OnceLock<Fixture> = OnceLock::new();
static QUINTIC: OnceLock<Fixture> = OnceLock::new();
static QUARTIC_C5: OnceLock<Fixture> = OnceLock::new();

/// Fermat cubic over GF(2), lines over GF(4).
fn cubic() -> &'static Fixture {
    CUBIC.get_or_init(|| load("fermat-cubic-c2.surface"))
}
/// Fermat quartic over GF(3), lines over GF(9).
fn quartic() -> &'static Fixture {
    QUARTIC.get_or_init(|| load("fermat-quartic-c3.surface"))
}
/// Fermat quintic over GF(2), lines over GF(16).
fn quintic() -> &'static Fixture {
    QUINTIC.get_or_init(|| load("fermat-quintic-c2.surface"))
}
/// Fermat quartic over GF(5), lines over GF(25): the non-maximal control.
fn quartic_c5() -> &'static Fixture {
    QUARTIC_C5.get_or_init(|| load("fermat-quartic-c5.surface"))
}

/// Clause accumulator: collects named pass/fail outcomes, prints the verdict
/// line, then asserts.
struct Scorecard {
    n: u32,
    label: &'static str,
    clauses: Vec<(bool, String)>,
}

impl Scorecard {
    fn new(n: u32, label: &'static str) -> Scorecard {
        Scorecard {
            n,
            label,
            clauses: Vec::new(),
        }
    }
    fn check(&mut self, ok: bool, msg: impl Into<String>) {
        self.clauses.push((ok, msg.into()));
    }
    fn finish(self) {
        let pass = self.clauses.iter().all(|c| c.0);
        println!(
            "ACCEPTANCE {} {}: {}",
            self.n,
            self.label,
            if pass { "PASS" } else { "FAIL" }
        );
        for (ok, msg) in &self.clauses {
            if !ok {
                println!("  failed clause: {msg}");
            }
        }
        assert!(pass, "acceptance {} {} failed", self.n, self.label);
    }
}

#[test]
fn acceptance_01_cubic_line_count() {
    let fx = cubic();
    let mut sc = Scorecard::new(1, "cubic-line-count");
    sc.check(
        fx.ls.count() == 27,
        format!("expected 27 lines, found {}", fx.ls.count()),
    );
    sc.check(
        fx.build_time < Duration::from_secs(1),
        format!("enumeration took {:?}, cap 1 s", fx.build_time),
    );
    sc.finish();
}

#[test]
fn acceptance_02_quartic_line_count() {
    let fx = quartic();
    let mut sc = Scorecard::new(2, "quartic-line-count");
    sc.check(
        fx.ls.count() == 112,
        format!("expected 112 lines, found {}", fx.ls.count()),
    );
    sc.check(
        fx.build_time < Duration::from_secs(5),
        format!("enumeration took {:?}, cap 5 s", fx.build_time),
    );
    sc.finish();
}

#[test]
fn acceptance_03_quintic_line_count() {
    let fx = quintic();
    let mut sc = Scorecard::new(3, "quintic-line-count");
    sc.check(
        fx.ls.count() == 325,
        format!("expected 325 lines, found {}", fx.ls.count()),
    );
    sc.check(
        fx.build_time < Duration::from_secs(60),
        format!("enumeration took {:?}, cap 60 s", fx.build_time),
    );
    sc.finish();
}

#[test]
fn acceptance_04_nonmaximal_control() {
    let fx = quartic_c5();
    let mut sc = Scorecard::new(4, "nonmaximal-control");
    sc.check(
        fx.ls.count() == 48,
        format!("expected 48 lines, found {}", fx.ls.count()),
    );
    let verdict = verify_maximal_profile(&fx.ls);
    sc.check(
        !verdict.pass,
        "the maximal-profile verdict passed on a 48-line surface".to_string(),
    );
    let rep = configs::extremal_report(fx.ls.base_form());
    sc.check(
        !rep.extremal,
        "the extremality report passed in characteristic 5".to_string(),
    );
    sc.check(
        fx.build_time < Duration::from_secs(60),
        format!("enumeration took {:?}, cap 60 s", fx.build_time),
    );
    sc.finish();
}

#[test]
fn acceptance_05_full_plane_profiles() {
    let mut sc = Scorecard::new(5, "full-plane-profiles");
    for (name, fx) in [
        ("cubic", cubic()),
        ("quartic", quartic()),
        ("quintic", quintic()),
    ] {
        let d = fx.ls.form().degree() as usize;
        let want_full = d * d - 2 * d + 2;
        let mut bad = None;
        'lines: for i in 0..fx.ls.count() {
            let profile = line_profile(&fx.ls, i);
            if profile.full_plane_count != want_full {
                bad = Some(format!(
                    "{name}: line {i} lies in {} full planes, expected {want_full}",
                    profile.full_plane_count
                ));
                break;
            }
            for entry in &profile.planes {
                if entry.full && entry.others.len() + 1 != d {
                    bad = Some(format!(
                        "{name}: line {i} has a full plane with {} lines, expected {d}",
                        entry.others.len() + 1
                    ));
                    break 'lines;
                }
            }
        }
        let ok = bad.is_none();
        sc.check(ok, bad.unwrap_or_default());
    }
    sc.finish();
}

fn adjacency(ls: &LineSet) -> Vec<Vec<bool>> {
    let n = ls.count();
    (0..n)
        .map(|i| (0..n).map(|j| i != j && ls.meets(i, j)).collect())
        .collect()
}

/// Surface lines meeting both members of a skew pair.
fn common_meeting_count(adj: &[Vec<bool>], i: usize, j: usize) -> usize {
    (0..adj.len())
        .filter(|&k| k != i && k != j && adj[i][k] && adj[j][k])
        .count()
}

#[test]
fn acceptance_06_skew_pair_transversals() {
    let mut sc = Scorecard::new(6, "skew-pair-transversals");
    for (name, fx) in [("cubic", cubic()), ("quartic", quartic())] {
        let d = fx.ls.form().degree() as usize;
        let want = (d - 1) * (d - 1) + 1;
        let adj = adjacency(&fx.ls);
        let n = fx.ls.count();
        let mut bad = None;
        'pairs: for i in 0..n {
            for j in i + 1..n {
                if adj[i][j] {
                    continue;
                }
                let c = common_meeting_count(&adj, i, j);
                if c != want {
                    bad = Some(format!(
                        "{name}: skew pair ({i}, {j}) has {c} transversals, expected {want}"
                    ));
                    break 'pairs;
                }
            }
        }
        let ok = bad.is_none();
        sc.check(ok, bad.unwrap_or_default());
    }
    // Degree 5: a seeded sample of at least 1000 skew pairs.
    let fx = quintic();
    let want = 4 * 4 + 1;
    let adj = adjacency(&fx.ls);
    let n = fx.ls.count();
    let mut skew: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !adj[i][j] {
                skew.push((i, j));
            }
        }
    }
    sc.check(
        skew.len() >= 1000,
        format!("only {} skew pairs available on the quintic", skew.len()),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(20260823);
    skew.shuffle(&mut rng);
    let mut bad = None;
    for &(i, j) in skew.iter().take(1000) {
        let c = common_meeting_count(&adj, i, j);
        if c != want {
            bad = Some(format!(
                "quintic: skew pair ({i}, {j}) has {c} transversals, expected {want}"
            ));
            break;
        }
    }
    let ok = bad.is_none();
    sc.check(ok, bad.unwrap_or_default());
    sc.finish();
}

#[test]
fn acceptance_07_intersection_lattice() {
    let mut sc = Scorecard::new(7, "intersection-lattice");
    let fx = cubic();
    let extended = intersection_matrix(&fx.ls, true);
    let rank = intmat::rank_exact(&extended);
    sc.check(rank == 7, format!("extended cubic rank {rank}, expected 7"));
    let fx2 = quartic();
    let extended2 = intersection_matrix(&fx2.ls, true);
    let rank2 = intmat::rank_exact(&extended2);
    sc.check(rank2 <= 22, format!("extended quartic rank {rank2} > 22"));
    // Block determinants: leading minors of a full-plane block, checked
    // against the closed form for every size up to the whole block.
    for (name, fx) in [("cubic", cubic()), ("quartic", quartic())] {
        let d = fx.ls.form().degree() as u64;
        let plain = intersection_matrix(&fx.ls, false);
        let planes = full_planes(&fx.ls);
        let block = &planes[0].1;
        for m in 1..=d {
            let idx = &block[..m as usize];
            let sub: Vec<Vec<BigInt>> = idx
                .iter()
                .map(|&a| idx.iter().map(|&b| plain[a][b].clone()).collect())
                .collect();
            let det = intmat::det_exact(&sub);
            let expect = block_det_closed_form(d, m);
            sc.check(
                det == expect,
                format!("{name}: {m}x{m} block determinant {det}, closed form {expect}"),
            );
        }
    }
    sc.finish();
}

#[test]
fn acceptance_08_quadrangle_axioms() {
    let mut sc = Scorecard::new(8, "quadrangle-axioms");
    for (name, fx) in [("cubic", cubic()), ("quartic", quartic())] {
        let d = fx.ls.form().degree() as u64;
        let (s, t) = (d - 1, (d - 1) * (d - 1));
        let st = build_line_plane_structure(&fx.ls);
        let rep = st.verify_gq(s, t);
        let witness = rep
            .axioms
            .iter()
            .find(|a| !a.pass)
            .map(|a| format!("{}: {:?}", a.name, a.witness))
            .unwrap_or_default();
        sc.check(rep.pass, format!("{name}: axiom failed — {witness}"));
        let sb = BigInt::from(s);
        let tb = BigInt::from(t);
        sc.check(
            BigInt::from(st.n_points()) == bounds::gq_point_count(&sb, &tb),
            format!("{name}: point count {} off the identity", st.n_points()),
        );
        sc.check(
            BigInt::from(st.blocks().len()) == bounds::gq_block_count(&sb, &tb),
            format!("{name}: block count {} off the identity", st.blocks().len()),
        );
    }
    sc.finish();
}

#[test]
fn acceptance_09_triad_regularity() {
    let mut sc = Scorecard::new(9, "triad-regularity");
    for (name, fx) in [("cubic", cubic()), ("quartic", quartic())] {
        let d = fx.ls.form().degree() as u64;
        let s = d - 1;
        let st = build_line_plane_structure(&fx.ls);
        let triads = st.triads();
        let irregular = triads
            .par_iter()
            .find_any(|t| !matches!(st.check_triad_regularity(t, s), Ok(r) if r.pass));
        sc.check(
            irregular.is_none(),
            format!("{name}: triad {:?} is not 3-regular", irregular),
        );
        let unclosed = triads.par_iter().find_any(|t| {
            let tri = [t[0] as usize, t[1] as usize, t[2] as usize];
            match find_quadric_configuration(&fx.ls, tri) {
                Ok(Some(cert)) => validate_quadric(&fx.ls, &cert).is_err(),
                _ => true,
            }
        });
        sc.check(
            unclosed.is_none(),
            format!(
                "{name}: triad {:?} yields no valid doubly ruled certificate ({} triads total)",
                unclosed,
                triads.len()
            ),
        );
    }
    sc.finish();
}

/// Independent re-verification of a star-chord certificate: both chords lie
/// on every plane of their family and off the surface, the chords are skew,
/// the two families share no plane, and the grid entry at (i, j) is a
/// distinct surface line on both the i-th seed plane and the j-th opposite
/// plane.
fn reverify_star_chord(ls: &LineSet, cert: &StarChordCertificate) -> Result<(), String> {
    let ctx = ls.ctx();
    let d = ls.form().degree() as usize;
    if cert.h_planes.len() != d || cert.k_planes.len() != d {
        return Err("family size differs from the degree".into());
    }
    let fams: [(&Vec<Plane>, &Line); 2] = [
        (&cert.h_planes, &cert.chord_h),
        (&cert.k_planes, &cert.chord_k),
    ];
    for (planes, chord) in fams {
        for p in planes {
            if !p.contains_line(ctx, chord) {
                return Err("a partition plane misses its chord".into());
            }
        }
        if ls.form().contains_line(chord).map_err(|e| e.to_string())? {
            return Err("a chord lies on the surface".into());
        }
    }
    if cert
        .chord_h
        .meets(ctx, &cert.chord_k)
        .map_err(|e| e.to_string())?
    {
        return Err("the two chords are not skew".into());
    }
    if cert.h_planes.iter().any(|h| cert.k_planes.contains(h)) {
        return Err("the two partitions share a plane".into());
    }
    let mut seen = std::collections::BTreeSet::new();
    if cert.grid.len() != d {
        return Err("grid has the wrong number of rows".into());
    }
    for (i, row) in cert.grid.iter().enumerate() {
        if row.len() != d {
            return Err("grid has a short row".into());
        }
        for (j, &g) in row.iter().enumerate() {
            if g >= ls.count() || !seen.insert(g) {
                return Err(format!("grid entry ({i}, {j}) repeats or overflows"));
            }
            let gl = ls.line(g);
            if !cert.h_planes[i].contains_line(ctx, gl) || !cert.k_planes[j].contains_line(ctx, gl)
            {
                return Err(format!("grid line ({i}, {j}) misses its planes"));
            }
        }
    }
    Ok(())
}

#[test]
fn acceptance_10_star_chord_pairs() {
    let mut sc = Scorecard::new(10, "star-chord-pairs");
    for (name, fx) in [("cubic", cubic()), ("quartic", quartic())] {
        let certs = find_star_chord_pairs(&fx.ls).expect("search succeeds");
        sc.check(
            !certs.is_empty(),
            format!("{name}: no star-chord certificate found"),
        );
        let bad = certs
            .par_iter()
            .find_map_any(|c| reverify_star_chord(&fx.ls, c).err());
        sc.check(
            bad.is_none(),
            format!("{name}: certificate re-verification failed — {bad:?}"),
        );
    }
    let fx = quartic_c5();
    let certs = find_star_chord_pairs(&fx.ls).expect("search succeeds");
    sc.check(
        certs.is_empty(),
        format!(
            "expected no certificates on the 48-line quartic, found {}",
            certs.len()
        ),
    );
    sc.finish();
}

#[test]
fn acceptance_11_normal_form_round_trip() {
    let mut sc = Scorecard::new(11, "normal-form-round-trip");
    let fx = quartic();
    let certs = find_star_chord_pairs(&fx.ls).expect("search succeeds");
    sc.check(!certs.is_empty(), "no certificate to normalize".to_string());
    let nf = normalize_star_chord(&fx.ls, &certs[0]).expect("normalization succeeds");
    let ctx = fx.ls.ctx();
    let frame = nf
        .transform
        .inverse(ctx)
        .expect("the change of coordinates is invertible");
    let back = nf
        .normalized
        .substitute(&frame)
        .expect("substitution succeeds");
    sc.check(
        &back == fx.ls.form(),
        "inverse substitution does not restore the form".to_string(),
    );
    for (k, l) in nf.ell.iter().enumerate() {
        sc.check(
            !l[0].is_zero() && !l[3].is_zero(),
            format!("seed residual factor {k} has a vanishing coefficient"),
        );
    }
    for (k, m) in nf.em.iter().enumerate() {
        sc.check(
            !m[1].is_zero() && !m[2].is_zero(),
            format!("opposite residual factor {k} has a vanishing coefficient"),
        );
    }
    // The reference normal form: the two middle levels vanish and the level
    // system has exactly (d - 1)^2 = 9 common zeros over GF(9).
    let f9 = Arc::new(FieldCtx::new(3, 2, None).unwrap());
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
    sc.check(
        lc.middle_levels_vanish(),
        "a middle level of the reference form does not vanish".to_string(),
    );
    let zeros = common_zero_count(&f9, &lc.levels);
    sc.check(
        zeros == 9,
        format!("level system has {zeros} common zeros, expected 9"),
    );
    sc.finish();
}

#[test]
fn acceptance_12_route_agreement() {
    let mut sc = Scorecard::new(12, "route-agreement");
    for (name, fx) in [
        ("cubic", cubic()),
        ("quartic", quartic()),
        ("quintic", quintic()),
        ("quartic-c5", quartic_c5()),
    ] {
        let a = enumerate_by_restriction(fx.ls.form(), BUDGET).expect("restriction route");
        let b = enumerate_by_evaluation(fx.ls.form(), BUDGET).expect("evaluation route");
        sc.check(a == b, format!("{name}: the two routes disagree"));
        sc.check(
            a.as_slice() == fx.ls.lines(),
            format!("{name}: routes disagree with the built line set"),
        );
    }
    // The remaining fixture files, including the singular control.
    for name in ["normal-form-quartic-gf9.surface", "cone-quartic-c5.surface"] {
        let fx = load(name);
        let a = enumerate_by_restriction(fx.ls.form(), BUDGET).expect("restriction route");
        let b = enumerate_by_evaluation(fx.ls.form(), BUDGET).expect("evaluation route");
        sc.check(a == b, format!("{name}: the two routes disagree"));
    }
    sc.finish();
}

#[test]
fn acceptance_13_bound_identities() {
    let mut sc = Scorecard::new(13, "bound-identities");
    let mut bad = None;
    for d in 3u64..=100 {
        let k = BigInt::from(d as i64 - 1);
        let k4 = &k * &k * &k * &k;
        let skew_ok =
            bounds::max_lines(d) - BigInt::from(1) - bounds::max_meeting_one_line(d) == k4;
        let picard_ok = bounds::picard_rank_bound(d) == bounds::chern_c2(d) - BigInt::from(2);
        let (s, t) = bounds::gq_params(d);
        let gq_ok = bounds::max_lines(d) == bounds::gq_point_count(&s, &t);
        if !(skew_ok && picard_ok && gq_ok && bounds::skew_alignment_identity_holds(d)) {
            bad = Some(d);
            break;
        }
    }
    sc.check(bad.is_none(), format!("identity fails at degree {bad:?}"));
    sc.finish();
}
