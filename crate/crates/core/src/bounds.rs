//! Closed-form count tables and identities for line configurations on smooth
//! degree-`d` surfaces in P^3, evaluated in exact big-integer arithmetic so
//! they stay meaningful for arbitrarily large degrees.

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("degree {0} is below 3; the count table starts at cubic surfaces")]
    DegreeTooSmall(u64),
}

fn b(n: u64) -> BigInt {
    BigInt::from(n)
}

/// `d^2 (d^2 - 3d + 3)`: the maximum number of lines on a smooth surface of
/// degree `d`, attained exactly by the extremal surfaces.
pub fn max_lines(d: u64) -> BigInt {
    b(d) * b(d) * (b(d) * b(d) - 3 * b(d) + 3)
}

/// `d^3 - 3d^2 + 4d - 2`: the maximum number of other lines on the surface
/// meeting a fixed line.
pub fn max_meeting_one_line(d: u64) -> BigInt {
    b(d) * b(d) * b(d) - 3 * b(d) * b(d) + 4 * b(d) - 2
}

/// `d^2 - 2d + 2`: the number of planes through a fixed surface line whose
/// residual section splits entirely into lines, when that count is maximal.
pub fn full_planes_per_line(d: u64) -> BigInt {
    b(d) * b(d) - 2 * b(d) + 2
}

/// `d^2 - 2d + 2`: the maximum number of surface lines meeting two fixed
/// skew surface lines.
pub fn transversal_bound(d: u64) -> BigInt {
    full_planes_per_line(d)
}

/// Topological Euler number `c_2 = d^3 - 4d^2 + 6d` of a smooth surface of
/// degree `d` in P^3.
pub fn chern_c2(d: u64) -> BigInt {
    b(d) * b(d) * b(d) - 4 * b(d) * b(d) + 6 * b(d)
}

/// `c_2 - 2 = d^3 - 4d^2 + 6d - 2`: the second Betti number, an upper bound
/// for the rank of the lattice spanned by the line classes.
pub fn picard_rank_bound(d: u64) -> BigInt {
    chern_c2(d) - 2
}

/// Generalized-quadrangle parameters `(s, t) = (d - 1, (d - 1)^2)` of the
/// line/full-plane structure of an extremal surface.
pub fn gq_params(d: u64) -> (BigInt, BigInt) {
    (b(d - 1), b(d - 1) * b(d - 1))
}

/// Point count `(s + 1)(st + 1)` of a generalized quadrangle of order `(s, t)`.
pub fn gq_point_count(s: &BigInt, t: &BigInt) -> BigInt {
    (s + 1) * (s * t + 1)
}

/// Block count `(t + 1)(st + 1)` of a generalized quadrangle of order `(s, t)`.
pub fn gq_block_count(s: &BigInt, t: &BigInt) -> BigInt {
    (t + 1) * (s * t + 1)
}

/// `(q^3 + 1)(q^2 + 1)`: the number of rational points of the classical
/// degree-`q+1` extremal surface over the field with `q^2` elements.
pub fn hermitian_point_count(q: u64) -> BigInt {
    (b(q) * b(q) * b(q) + 1) * (b(q) * b(q) + 1)
}

/// Decompose `n = p^e` with `p` prime and `e >= 1`; `None` when `n` is not a
/// prime power.
pub fn prime_power_decompose(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut m = n;
    let mut p = 0u64;
    for cand in 2..=m {
        if cand * cand > m {
            p = m; // remaining factor is prime
            break;
        }
        if m.is_multiple_of(cand) {
            p = cand;
            break;
        }
    }
    let mut e = 0u32;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

/// The identity aligning the three mutually exclusive positions of a line
/// relative to a fixed line `l` on an extremal surface:
/// `(d-1)^4` skew to `l`, plus `d^3 - 3d^2 + 4d - 2` meeting `l`, plus `l`
/// itself, equals the total `d^2 (d^2 - 3d + 3)`.
pub fn skew_alignment_identity_holds(d: u64) -> bool {
    let skew = (b(d) - 1) * (b(d) - 1) * (b(d) - 1) * (b(d) - 1);
    skew + max_meeting_one_line(d) + 1 == max_lines(d)
}

/// The complete closed-form table for one degree.
#[derive(Debug, Clone, Serialize)]
pub struct BoundTable {
    pub degree: u64,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub max_lines: BigInt,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub max_meeting_one_line: BigInt,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub full_planes_per_line: BigInt,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub transversal_bound: BigInt,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub chern_c2: BigInt,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub picard_rank_bound: BigInt,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub gq_s: BigInt,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub gq_t: BigInt,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub gq_points: BigInt,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub gq_blocks: BigInt,
    /// When `d - 1 = p^e`, the `(p, e, q)` with `q = (d-1)^2` the order of
    /// the field carrying the extremal surface of this degree.
    pub extremal_field: Option<(u64, u32, u64)>,
}

impl BoundTable {
    pub fn new(degree: u64) -> Result<BoundTable, BoundsError> {
        if degree < 3 {
            return Err(BoundsError::DegreeTooSmall(degree));
        }
        let (s, t) = gq_params(degree);
        let extremal_field = prime_power_decompose(degree - 1).and_then(|(p, e)| {
            let q = (degree - 1).checked_mul(degree - 1)?;
            Some((p, e, q))
        });
        Ok(BoundTable {
            degree,
            max_lines: max_lines(degree),
            max_meeting_one_line: max_meeting_one_line(degree),
            full_planes_per_line: full_planes_per_line(degree),
            transversal_bound: transversal_bound(degree),
            chern_c2: chern_c2(degree),
            picard_rank_bound: picard_rank_bound(degree),
            gq_points: gq_point_count(&s, &t),
            gq_blocks: gq_block_count(&s, &t),
            gq_s: s,
            gq_t: t,
            extremal_field,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_anchor_values() {
        // Degree 3: the 27 lines of a smooth cubic.
        assert_eq!(max_lines(3), b(27));
        assert_eq!(max_meeting_one_line(3), b(10));
        assert_eq!(full_planes_per_line(3), b(5));
        assert_eq!(chern_c2(3), b(9));
        assert_eq!(picard_rank_bound(3), b(7));
        let (s, t) = gq_params(3);
        assert_eq!((s.clone(), t.clone()), (b(2), b(4)));
        assert_eq!(gq_point_count(&s, &t), b(27));
        assert_eq!(gq_block_count(&s, &t), b(45));

        // Degree 4.
        assert_eq!(max_lines(4), b(112));
        assert_eq!(max_meeting_one_line(4), b(30));
        assert_eq!(full_planes_per_line(4), b(10));
        assert_eq!(picard_rank_bound(4), b(22));
        let (s, t) = gq_params(4);
        assert_eq!((s.clone(), t.clone()), (b(3), b(9)));
        assert_eq!(gq_point_count(&s, &t), b(112));
        assert_eq!(gq_block_count(&s, &t), b(280));

        // Degree 5.
        assert_eq!(max_lines(5), b(325));
        let (s, t) = gq_params(5);
        assert_eq!((s.clone(), t.clone()), (b(4), b(16)));
        assert_eq!(gq_point_count(&s, &t), b(325));
        assert_eq!(gq_block_count(&s, &t), b(1105));

        // Hermitian point counts over the quadratic field.
        assert_eq!(hermitian_point_count(2), b(45));
        assert_eq!(hermitian_point_count(3), b(280));
        assert_eq!(hermitian_point_count(4), b(1105));
    }

    #[test]
    fn identities_hold_for_a_wide_degree_range() {
        for d in 3..=100 {
            assert!(skew_alignment_identity_holds(d), "degree {d}");
            // The GQ point count coincides with the line-count maximum.
            let (s, t) = gq_params(d);
            assert_eq!(gq_point_count(&s, &t), max_lines(d), "degree {d}");
            // Betti bound equals Euler number minus two.
            assert_eq!(picard_rank_bound(d), chern_c2(d) - 2);
        }
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power_decompose(0), None);
        assert_eq!(prime_power_decompose(1), None);
        assert_eq!(prime_power_decompose(2), Some((2, 1)));
        assert_eq!(prime_power_decompose(3), Some((3, 1)));
        assert_eq!(prime_power_decompose(4), Some((2, 2)));
        assert_eq!(prime_power_decompose(8), Some((2, 3)));
        assert_eq!(prime_power_decompose(9), Some((3, 2)));
        assert_eq!(prime_power_decompose(6), None);
        assert_eq!(prime_power_decompose(12), None);
        assert_eq!(prime_power_decompose(59049), Some((3, 10)));
        assert_eq!(prime_power_decompose(1021), Some((1021, 1)));
        assert_eq!(prime_power_decompose(1021 * 1021), Some((1021, 2)));
    }

    #[test]
    fn table_rejects_degenerate_degrees() {
        for d in 0..3 {
            assert_eq!(
                BoundTable::new(d).unwrap_err(),
                BoundsError::DegreeTooSmall(d)
            );
        }
        let t = BoundTable::new(4).unwrap();
        assert_eq!(t.extremal_field, Some((3, 1, 9)));
        let t = BoundTable::new(5).unwrap();
        assert_eq!(t.extremal_field, Some((2, 2, 16)));
        let t = BoundTable::new(7).unwrap();
        assert_eq!(t.extremal_field, None, "6 is not a prime power");
    }
}
