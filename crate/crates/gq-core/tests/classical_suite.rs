//! Construction-level checks for the five classical families: orders,
//! point counts, hyperbolic lines against direct subspace enumeration,
//! duality, and the geometry file format.

use gq_core::classical::{build, BuiltGeometry, FamilyTag};
use gq_core::forms::ProjectivePoint;
use gq_core::geometry::{check_parameter_bounds, GeometryFile};

fn expect_counts(family: FamilyTag, q: u64, order: (u32, u32), points: usize, lines: usize) {
    let built = build(family, q, false).unwrap();
    assert_eq!(built.gq.order(), order, "{family:?} q={q}");
    assert_eq!(built.gq.num_points(), points, "{family:?} q={q}");
    assert_eq!(built.gq.num_lines(), lines, "{family:?} q={q}");
}

#[test]
fn family_orders_and_counts() {
    expect_counts(FamilyTag::W3, 2, (2, 2), 15, 15);
    expect_counts(FamilyTag::W3, 3, (3, 3), 40, 40);
    expect_counts(FamilyTag::Q4, 3, (3, 3), 40, 40);
    expect_counts(FamilyTag::Qminus5, 2, (2, 4), 27, 45);
    expect_counts(FamilyTag::Qminus5, 3, (3, 9), 112, 280);
    expect_counts(FamilyTag::H3, 2, (4, 2), 45, 27);
    expect_counts(FamilyTag::H3, 3, (9, 3), 280, 112);
    expect_counts(FamilyTag::H4, 2, (4, 8), 165, 297);
}

#[test]
fn point_count_bounds_hold_for_every_family() {
    for (family, q) in [
        (FamilyTag::W3, 2),
        (FamilyTag::W3, 3),
        (FamilyTag::Q4, 3),
        (FamilyTag::Qminus5, 2),
        (FamilyTag::H3, 2),
        (FamilyTag::H4, 2),
    ] {
        let built = build(family, q, false).unwrap();
        let (s, t) = built.gq.order();
        let b = check_parameter_bounds(s as u64, t as u64);
        assert!(b.fourth_power_bound, "{family:?} q={q}");
        assert!(b.s_fifth_power_bound, "{family:?} q={q}");
        assert_eq!(b.v, built.gq.num_points() as u128);
    }
}

/// The literal upper estimate (1+s)^5 < v^2 is tight enough to fail on
/// three existing geometries; the weaker s^5 < v^2 never does. Both
/// behaviors are pinned here with exact integers.
#[test]
fn fifth_power_upper_bound_edge_cases() {
    // W(3,2): 3^5 = 243 >= 15^2 = 225
    let b = check_parameter_bounds(2, 2);
    assert!(!b.fifth_power_bound);
    assert!(b.s_fifth_power_bound);
    // H(3,4): 5^5 = 3125 >= 45^2 = 2025
    let b = check_parameter_bounds(4, 2);
    assert!(!b.fifth_power_bound);
    assert!(b.s_fifth_power_bound);
    // W(3,3): 4^5 = 1024 < 40^2 = 1600 holds in both forms
    let b = check_parameter_bounds(3, 3);
    assert!(b.fifth_power_bound && b.s_fifth_power_bound);
}

/// Direct subspace enumeration: the isotropic projective points on the
/// plane spanned by e1 and e2.
fn isotropic_points_of_e1_e2_plane(built: &BuiltGeometry) -> Vec<u32> {
    let field = built.form.field().clone();
    let n = built.form.dim();
    let mut out = Vec::new();
    let mut reps: Vec<Vec<_>> = Vec::new();
    // <e2> and <e1 + c e2> exhaust the plane's points
    {
        let mut v = vec![field.zero(); n];
        v[1] = field.one();
        reps.push(v);
    }
    for enc in 0..field.order() {
        let mut v = vec![field.zero(); n];
        v[0] = field.one();
        v[1] = field.from_encoding(enc);
        reps.push(v);
    }
    for rep in reps {
        let pt = ProjectivePoint::new(rep).unwrap();
        if built.form.is_isotropic(&pt).unwrap() {
            out.push(built.point_of(&pt).expect("isotropic point is indexed"));
        }
    }
    out.sort_unstable();
    out
}

#[test]
fn span_of_e1_e2_is_the_isotropic_points_of_their_plane() {
    for (family, q) in [
        (FamilyTag::W3, 2),
        (FamilyTag::W3, 3),
        (FamilyTag::H3, 2),
        (FamilyTag::H3, 3),
        (FamilyTag::H4, 2),
    ] {
        let built = build(family, q, false).unwrap();
        let p1 = built.basis_point(0).unwrap();
        let p2 = built.basis_point(1).unwrap();
        assert!(!built.gq.collinear(p1, p2));
        let span = built.gq.span(p1, p2).unwrap();
        assert_eq!(span.len(), q as usize + 1, "{family:?} q={q}");
        let plane = isotropic_points_of_e1_e2_plane(&built);
        assert_eq!(span, plane, "{family:?} q={q}");
    }
}

#[test]
fn q4_spans_are_all_of_size_two() {
    let built = build(FamilyTag::Q4, 3, false).unwrap();
    let n = built.gq.num_points() as u32;
    for x in 0..n {
        for y in x + 1..n {
            if built.gq.collinear(x, y) {
                continue;
            }
            assert_eq!(built.gq.span(x, y).unwrap().len(), 2, "pair ({x},{y})");
        }
    }
}

#[test]
fn spans_have_at_least_two_points_and_respect_the_trace() {
    let built = build(FamilyTag::W3, 3, false).unwrap();
    let n = built.gq.num_points() as u32;
    for x in 0..n {
        for y in x + 1..n {
            let span = built.gq.span(x, y).unwrap();
            assert!(span.len() >= 2);
            let trace = built.gq.trace(x, y).unwrap();
            for &z in &span {
                for &w in &trace {
                    assert!(built.gq.collinear(z, w));
                }
            }
        }
    }
}

#[test]
fn mu_parameter_counts_the_trace() {
    let built = build(FamilyTag::H3, 2, false).unwrap();
    let (_, t) = built.gq.order();
    let (_, _, _, mu) = built.gq.collinearity_srg().unwrap();
    assert_eq!(mu, t as u64 + 1);
    for x in 0..5 {
        for y in 20..25 {
            if !built.gq.collinear(x, y) {
                assert_eq!(built.gq.trace(x, y).unwrap().len() as u64, mu);
            }
        }
    }
}

#[test]
fn srg_parameters_match_the_formula() {
    for (family, q, expect) in [
        (FamilyTag::W3, 2, (15, 6, 1, 3)),
        (FamilyTag::H3, 2, (45, 12, 3, 3)),
        (FamilyTag::Q4, 3, (40, 12, 2, 4)),
    ] {
        let built = build(family, q, false).unwrap();
        assert_eq!(
            built.gq.collinearity_srg().unwrap(),
            expect,
            "{family:?} q={q}"
        );
    }
}

#[test]
fn hermitian_is_dual_of_elliptic_at_q2() {
    let h3 = build(FamilyTag::H3, 2, false).unwrap();
    let q5 = build(FamilyTag::Qminus5, 2, false).unwrap();
    let dual = q5.gq.dualize().unwrap();
    assert_eq!(dual.order(), h3.gq.order());
    assert_eq!(dual.num_points(), h3.gq.num_points());
    assert_eq!(
        dual.collinearity_srg().unwrap(),
        h3.gq.collinearity_srg().unwrap()
    );
}

#[test]
fn dualize_twice_is_the_identity_relabeling() {
    let built = build(FamilyTag::W3, 2, false).unwrap();
    let dd = built.gq.dualize().unwrap().dualize().unwrap();
    assert_eq!(dd.order(), built.gq.order());
    // the double dual's point i corresponds to the original line set of
    // lines through i; sort both line sets and compare
    let mut original: Vec<Vec<u32>> = built.gq.lines().to_vec();
    let mut doubled: Vec<Vec<u32>> = dd.lines().to_vec();
    original.sort();
    doubled.sort();
    assert_eq!(original, doubled);
}

#[test]
fn dual_of_h3_has_elliptic_parameters() {
    let built = build(FamilyTag::H3, 2, false).unwrap();
    let dual = built.gq.dualize().unwrap();
    assert_eq!(dual.order(), (2, 4));
    assert_eq!(dual.num_points(), 27);
}

#[test]
fn geometry_file_round_trip_is_deterministic() {
    let a = build(FamilyTag::W3, 3, false).unwrap().to_geometry_file();
    let b = build(FamilyTag::W3, 3, false).unwrap().to_geometry_file();
    let ja = a.to_json();
    let jb = b.to_json();
    assert_eq!(ja, jb, "byte-identical output for identical inputs");
    let parsed = GeometryFile::from_json(&ja).unwrap();
    let gq = parsed.verify().unwrap();
    assert_eq!(gq.order(), (3, 3));
    assert_eq!(gq.num_points(), 40);
}

#[test]
fn m_ovoid_laws() {
    let built = build(FamilyTag::W3, 2, false).unwrap();
    let gq = &built.gq;
    // the full point set is an (s+1)-ovoid
    let all: Vec<u32> = (0..gq.num_points() as u32).collect();
    assert_eq!(gq.is_m_ovoid(&all).unwrap(), Some(3));
    // a single line is not an m-ovoid
    let line = gq.line(0).to_vec();
    assert_eq!(gq.is_m_ovoid(&line).unwrap(), None);
    // an exhaustively found ovoid is a 1-ovoid of size st+1 = 5
    let ovoid = gq.find_ovoid(1_000_000).unwrap().expect("ovoid exists");
    assert_eq!(ovoid.len(), 5);
    assert_eq!(gq.is_m_ovoid(&ovoid).unwrap(), Some(1));
    for (i, &x) in ovoid.iter().enumerate() {
        for &y in &ovoid[i + 1..] {
            assert!(!gq.collinear(x, y));
        }
    }
}

#[test]
fn perp_sizes_match_the_formula() {
    // |perp(x)| = 1 + s(t+1), and x is always in its own perp
    for (family, q, size) in [
        (FamilyTag::W3, 2, 7usize),
        (FamilyTag::H4, 2, 37),
        (FamilyTag::Qminus5, 2, 11),
    ] {
        let built = build(family, q, false).unwrap();
        for x in 0..built.gq.num_points() as u32 {
            let perp = built.gq.perp(x).unwrap();
            assert_eq!(perp.len(), size, "{family:?} q={q}");
            assert!(perp.contains(&x));
        }
    }
}

#[test]
fn span_of_a_collinear_pair_is_their_line() {
    let built = build(FamilyTag::W3, 2, false).unwrap();
    let gq = &built.gq;
    for li in 0..gq.num_lines() as u32 {
        let line = gq.line(li);
        let span = gq.span(line[0], line[1]).unwrap();
        assert_eq!(span, line.to_vec());
    }
}

#[test]
fn geometry_file_declared_order_is_checked() {
    let mut file = build(FamilyTag::W3, 2, false).unwrap().to_geometry_file();
    file.order = [3, 3];
    let err = file.verify().unwrap_err();
    assert!(err.to_string().contains("declared order"), "{err}");
}
