//! Property tests for the algebraic invariants: field axioms under
//! random sampling, representative independence of isotropy, and span
//! containment in the trace's perp closure.

use std::sync::OnceLock;

use proptest::prelude::*;

use gq_core::classical::{build, BuiltGeometry, FamilyTag};
use gq_core::field::{conj_q, FiniteField};
use gq_core::forms::ProjectivePoint;

fn fields() -> &'static Vec<FiniteField> {
    static CELL: OnceLock<Vec<FiniteField>> = OnceLock::new();
    CELL.get_or_init(|| {
        [
            (2u64, 1u32),
            (2, 2),
            (2, 4),
            (3, 1),
            (3, 2),
            (5, 1),
            (5, 2),
            (7, 1),
        ]
        .iter()
        .map(|&(p, f)| FiniteField::new(p, f).unwrap())
        .collect()
    })
}

fn w32() -> &'static BuiltGeometry {
    static CELL: OnceLock<BuiltGeometry> = OnceLock::new();
    CELL.get_or_init(|| build(FamilyTag::W3, 2, false).unwrap())
}

fn h34() -> &'static BuiltGeometry {
    static CELL: OnceLock<BuiltGeometry> = OnceLock::new();
    CELL.get_or_init(|| build(FamilyTag::H3, 2, false).unwrap())
}

proptest! {
    #[test]
    fn field_ring_axioms(field_idx in 0usize..8, a in 0u64..2048, b in 0u64..2048, c in 0u64..2048) {
        let field = &fields()[field_idx];
        let n = field.order();
        let (a, b, c) = (field.from_encoding(a % n), field.from_encoding(b % n), field.from_encoding(c % n));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn conjugation_is_multiplicative(a in 0u64..25, b in 0u64..25) {
        let field = FiniteField::new(5, 2).unwrap();
        let (a, b) = (field.from_encoding(a), field.from_encoding(b));
        let lhs = conj_q(&(&a * &b), 5).unwrap();
        let rhs = &conj_q(&a, 5).unwrap() * &conj_q(&b, 5).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn isotropy_ignores_the_representative(point_idx in 0usize..45, scale in 1u64..4) {
        let built = h34();
        let field = built.form.field();
        let pt = &built.points[point_idx % built.points.len()];
        let factor = field.from_encoding(scale % field.order());
        prop_assume!(!factor.is_zero());
        let scaled: Vec<_> = pt.coords().iter().map(|c| c * &factor).collect();
        let rescaled = ProjectivePoint::new(scaled).unwrap();
        prop_assert!(built.form.is_isotropic(&rescaled).unwrap());
        prop_assert_eq!(built.point_of(&rescaled), built.point_of(pt));
    }

    #[test]
    fn span_members_cover_the_trace(x in 0u32..15, y in 0u32..15) {
        prop_assume!(x != y);
        let gq = &w32().gq;
        let span = gq.span(x, y).unwrap();
        let trace = gq.trace(x, y).unwrap();
        prop_assert!(span.contains(&x) && span.contains(&y));
        for &z in &span {
            for &w in &trace {
                prop_assert!(gq.collinear(z, w));
            }
        }
    }
}
