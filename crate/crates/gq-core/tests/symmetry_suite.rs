//! Symmetry-group behavior across the classical families: certified
//! orders, constancy over points, group-action properties, fixed
//! substructures and homologies.

use gq_core::classical::{build, FamilyTag};
use gq_core::symmetry::{
    all_symmetry_groups, check_e_properties, check_orbit_lemmas, classify_fixed,
    full_symmetry_group, is_central_symmetry, lift_matrix, CheckMode, SubstructureKind,
    DEFAULT_NODE_BUDGET,
};

#[test]
fn symmetry_orders_are_constant_across_points() {
    for (family, q, expected) in [
        (FamilyTag::W3, 2, 2usize),
        (FamilyTag::H3, 2, 2),
        (FamilyTag::Qminus5, 2, 1),
    ] {
        let built = build(family, q, false).unwrap();
        let groups = all_symmetry_groups(&built.gq, DEFAULT_NODE_BUDGET).unwrap();
        for g in &groups {
            assert_eq!(g.order(), expected, "{family:?} q={q} point {}", g.center);
            g.verify(&built.gq).unwrap();
        }
    }
}

#[test]
fn group_order_divides_t_everywhere() {
    for (family, q) in [(FamilyTag::W3, 3), (FamilyTag::H3, 2), (FamilyTag::H4, 2)] {
        let built = build(family, q, false).unwrap();
        let (_, t) = built.gq.order();
        let group = full_symmetry_group(&built.gq, 0, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(t as usize % group.order(), 0, "{family:?} q={q}");
    }
}

#[test]
fn search_certifies_the_generator_family_in_h3() {
    let built = build(FamilyTag::H3, 2, false).unwrap();
    let p = built.basis_point(0).unwrap();
    let group = full_symmetry_group(&built.gq, p, DEFAULT_NODE_BUDGET).unwrap();
    let mut lifted = Vec::new();
    for map in built.symmetry_generators_at_e1().unwrap() {
        lifted.push(lift_matrix(&built, &map).unwrap());
    }
    assert_eq!(group.order(), lifted.len());
    for g in &lifted {
        assert!(group.elements.contains(g));
        assert!(is_central_symmetry(&built.gq, g, p).unwrap());
    }
}

#[test]
fn e_properties_hold_in_h3() {
    let built = build(FamilyTag::H3, 2, false).unwrap();
    let groups = all_symmetry_groups(&built.gq, DEFAULT_NODE_BUDGET).unwrap();
    let results = check_e_properties(&built.gq, &groups, CheckMode::Exhaustive).unwrap();
    for r in &results {
        assert!(r.passed(), "{}: {:?}", r.name, r.witness);
    }
}

#[test]
fn commuting_symmetry_groups_detect_collinearity_in_h3() {
    let built = build(FamilyTag::H3, 2, false).unwrap();
    let groups = all_symmetry_groups(&built.gq, DEFAULT_NODE_BUDGET).unwrap();
    let n = built.gq.num_points() as u32;
    for x in 0..n {
        for y in x + 1..n {
            let commute = groups[x as usize].elements.iter().all(|a| {
                groups[y as usize]
                    .elements
                    .iter()
                    .all(|b| a.commutes_with(b))
            });
            assert_eq!(commute, built.gq.collinear(x, y), "pair ({x},{y})");
        }
    }
}

#[test]
fn orbit_lemmas_and_primitivity_in_h3() {
    let built = build(FamilyTag::H3, 2, false).unwrap();
    let groups = all_symmetry_groups(&built.gq, DEFAULT_NODE_BUDGET).unwrap();
    let results = check_orbit_lemmas(&built.gq, &groups).unwrap();
    for r in &results {
        assert!(r.passed(), "{}: {:?}", r.name, r.witness);
    }
}

#[test]
fn central_symmetries_fix_pencils_in_h4() {
    let built = build(FamilyTag::H4, 2, false).unwrap();
    let p = built.basis_point(0).unwrap();
    let group = full_symmetry_group(&built.gq, p, DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(group.order(), 2);
    for g in group.nonidentity() {
        let fixed = classify_fixed(&built.gq, g).unwrap();
        assert_eq!(fixed.kind, SubstructureKind::C);
        assert_eq!(fixed.fixed_points, built.gq.perp(p).unwrap());
    }
}

#[test]
fn hyperbolic_bound_in_w33() {
    // |span(x,y)| >= |E(x)| + 1 with equality here: spans have q+1 = 4
    // points and the groups have order q = 3
    let built = build(FamilyTag::W3, 3, false).unwrap();
    let groups = all_symmetry_groups(&built.gq, DEFAULT_NODE_BUDGET).unwrap();
    let n = built.gq.num_points() as u32;
    for x in 0..n {
        for y in 0..n {
            if x == y || built.gq.collinear(x, y) {
                continue;
            }
            let span = built.gq.span(x, y).unwrap();
            assert!(span.len() >= groups[x as usize].order() + 1);
        }
    }
}

#[test]
fn cover_lemma_in_w32_all_pairs_and_elements() {
    let built = build(FamilyTag::W3, 2, false).unwrap();
    let groups = all_symmetry_groups(&built.gq, DEFAULT_NODE_BUDGET).unwrap();
    let n = built.gq.num_points() as u32;
    let mut checked = 0;
    for u in 0..n {
        for v in 0..n {
            if u == v || built.gq.collinear(u, v) {
                continue;
            }
            let span = built.gq.span(u, v).unwrap();
            for g in groups[u as usize].nonidentity() {
                assert!(span.contains(&g.point_image(v)));
                checked += 1;
            }
        }
    }
    // 15 * 8 noncollinear ordered pairs, one nontrivial symmetry each
    assert_eq!(checked, 120);
}

#[test]
fn homology_group_in_w33_acts_freely_off_centers() {
    use gq_core::forms::LinearMap;
    let built = build(FamilyTag::W3, 3, false).unwrap();
    let x = built.basis_point(0).unwrap();
    let y = built.basis_point(1).unwrap();
    let field = built.form.field().clone();
    let mut candidates = Vec::new();
    for lambda in [1i64, 2] {
        let inv = if lambda == 2 { 2 } else { 1 };
        let mut mat = LinearMap::identity(field.clone(), 4).matrix().to_vec();
        mat[0][0] = field.from_int(lambda);
        mat[1][1] = field.from_int(inv);
        let map = LinearMap::new(mat, field.clone()).unwrap();
        candidates.push(lift_matrix(&built, &map).unwrap());
    }
    let group = gq_core::homology_group(&built.gq, x, y, &candidates).unwrap();
    assert_eq!(group.len(), 2);
}

/// Stretch check at the smallest scale: enumerating the full group
/// generated by all point symmetries of W(3,2) (order 720) shows that
/// the linewise stabilizer of a point (order 8) strictly contains its
/// symmetry group (order 2).
#[test]
fn linewise_stabilizer_strictly_contains_symmetry_group_in_w32() {
    use gq_core::symmetry::Collineation;
    use std::collections::HashSet;

    let built = build(FamilyTag::W3, 2, false).unwrap();
    let groups = all_symmetry_groups(&built.gq, DEFAULT_NODE_BUDGET).unwrap();
    let gens: Vec<Collineation> = groups
        .iter()
        .flat_map(|g| g.nonidentity().cloned())
        .collect();
    let mut set: HashSet<Collineation> = HashSet::new();
    set.insert(Collineation::identity(&built.gq));
    let mut frontier = vec![Collineation::identity(&built.gq)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for g in &gens {
                let h = f.then(g);
                if set.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    assert_eq!(set.len(), 720);

    let u = 0u32;
    let pencil = built.gq.lines_through(u);
    let linewise: Vec<&Collineation> = set
        .iter()
        .filter(|g| pencil.iter().all(|&l| g.line_image(l) == l))
        .collect();
    assert_eq!(linewise.len(), 8);
    for e in &groups[0].elements {
        assert!(linewise.iter().any(|g| *g == e));
    }
    assert!(linewise.len() > groups[0].order());
}

/// Every element of the generated group classifies into the taxonomy;
/// the distribution over the 720 collineations of W(3,2) is pinned.
#[test]
fn classifier_covers_the_whole_generated_group_of_w32() {
    use std::collections::{HashMap, HashSet};
    use gq_core::symmetry::Collineation;

    let built = build(FamilyTag::W3, 2, false).unwrap();
    let groups = all_symmetry_groups(&built.gq, DEFAULT_NODE_BUDGET).unwrap();
    let gens: Vec<Collineation> = groups
        .iter()
        .flat_map(|g| g.nonidentity().cloned())
        .collect();
    let mut set: HashSet<Collineation> = HashSet::new();
    set.insert(Collineation::identity(&built.gq));
    let mut frontier = vec![Collineation::identity(&built.gq)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for g in &gens {
                let h = f.then(g);
                if set.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    assert_eq!(set.len(), 720);

    let mut histogram: HashMap<SubstructureKind, usize> = HashMap::new();
    for g in &set {
        let fixed = classify_fixed(&built.gq, g).expect("taxonomy covers the group");
        *histogram.entry(fixed.kind).or_default() += 1;
    }
    assert_eq!(histogram.get(&SubstructureKind::A), Some(&304));
    assert_eq!(histogram.get(&SubstructureKind::B), Some(&160));
    assert_eq!(histogram.get(&SubstructureKind::C), Some(&240));
    assert_eq!(histogram.get(&SubstructureKind::CDual), Some(&15));
    assert_eq!(histogram.get(&SubstructureKind::E), Some(&1));
}

/// A grid-type fixed structure, obtained by pushing the W(3,3) homology
/// through point-line duality: its dual-grid structure dualizes to a
/// grid in the dual quadrangle.
#[test]
fn homology_dualizes_to_a_grid_fixture() {
    use gq_core::forms::LinearMap;
    use gq_core::symmetry::Collineation;

    let built = build(FamilyTag::W3, 3, false).unwrap();
    let field = built.form.field().clone();
    let mut mat = LinearMap::identity(field.clone(), 4).matrix().to_vec();
    mat[0][0] = field.from_int(2);
    mat[1][1] = field.from_int(2);
    let homology = lift_matrix(&built, &LinearMap::new(mat, field).unwrap()).unwrap();
    let fixed = classify_fixed(&built.gq, &homology).unwrap();
    assert_eq!(fixed.kind, SubstructureKind::DDual);

    let dual = built.gq.dualize().unwrap();
    // a point of the dual is a line of the original, so the roles of the
    // two permutations swap
    let dual_images: Vec<u32> = (0..dual.num_points() as u32)
        .map(|l| homology.line_image(l))
        .collect();
    let dual_coll = Collineation::from_point_images(&dual, dual_images).unwrap();
    let dual_fixed = classify_fixed(&dual, &dual_coll).unwrap();
    assert_eq!(dual_fixed.kind, SubstructureKind::D);
    assert_eq!(dual_fixed.fixed_points.len(), homology.fixed_lines().len());
}
