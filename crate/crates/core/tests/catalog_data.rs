use baxterise::baxterizer::build_lie_tp_graph;
use baxterise::catalog::catalog_list;
use baxterise::category::{
    check_f_identities, check_fusion_ring, check_quantum_dims, check_twist_data, fusion_product, CategoryData,
};
use baxterise::{Built, FamilySpec, ObjectLabel};
use nalgebra::DMatrix;
use num_rational::Rational64;

fn full(spec: FamilySpec) -> CategoryData {
    match spec.build().unwrap() {
        Built::Full(c) => c,
        Built::TwistOnly(_) => unreachable!(),
    }
}

fn representable() -> Vec<CategoryData> {
    let mut v = Vec::new();
    for k in 1..=8 {
        v.push(full(FamilySpec::su2(k)));
        v.push(full(FamilySpec::minimal(k)));
    }
    for m in 2..=8 {
        v.push(full(FamilySpec::ty(m)));
    }
    v
}

#[test]
fn every_representable_builtin_is_consistent() {
    for cat in representable() {
        let mut rep = check_fusion_ring(&cat.rules);
        rep.extend(check_quantum_dims(&cat, 1e-10));
        rep.extend(check_f_identities(&cat, 1e-10).unwrap());
        rep.extend(check_twist_data(&cat, 1e-10).unwrap());
        for c in &rep.checks {
            assert!(c.passed(), "{}: {} residual {:e} {:?}", cat.name, c.check, c.max_residual, c.detail);
        }
    }
}

#[test]
fn quantum_dims_are_perron_eigenvalues() {
    // fusion matrices of a commutative ring are normal, so the Perron
    // eigenvalue is the largest singular value
    for cat in representable() {
        let n = cat.n_objects();
        for a in 0..n {
            let m = DMatrix::from_fn(n, n, |b, c| cat.rules.n(a, b, c) as f64);
            let radius = m.singular_values().max();
            assert!((radius - cat.d(a)).abs() < 1e-9, "{} d_{a}: {} vs {radius}", cat.name, cat.d(a));
        }
    }
}

#[test]
fn su2_and_minimal_differ_only_in_twists() {
    for k in 1..=8 {
        let (s, m) = (full(FamilySpec::su2(k)), full(FamilySpec::minimal(k)));
        assert_eq!(s.rules, m.rules);
        assert_eq!(s.dims, m.dims);
        assert_eq!(s.f, m.f);
        assert_ne!(s.twists, m.twists);
    }
}

#[test]
fn spin_half_squared_at_level_two() {
    let cat = full(FamilySpec::su2(2));
    let half = cat.label("1/2").unwrap();
    let names: Vec<_> =
        fusion_product(&cat, half, half).unwrap().into_iter().map(|x| cat.name_of(x).to_string()).collect();
    assert_eq!(names, ["0", "1"]);
}

#[test]
fn tambara_yamagami_duality_and_fusion() {
    for m in 2..=8usize {
        let cat = full(FamilySpec::ty(m as i64));
        let x = cat.label("X").unwrap().0;
        assert_eq!(cat.rules.dual(x), x);
        for a in 0..m {
            assert_eq!(cat.rules.dual(a), (m - a) % m);
            assert_eq!(cat.rules.product(x, a), vec![x]);
            assert_eq!(cat.rules.product(a, x), vec![x]);
        }
        assert_eq!(cat.rules.product(x, x), (0..m).collect::<Vec<_>>());
        assert!((cat.d(x) - (m as f64).sqrt()).abs() < 1e-12);
        let tw = cat.twists.as_ref().unwrap();
        assert_eq!(tw.placeholder_spins, vec![x]);
    }
}

#[test]
fn lie_spin_examples() {
    let spin = |spec: FamilySpec, ch: &str| match spec.build().unwrap() {
        Built::TwistOnly(d) => d.delta(d.channel(ch).unwrap()),
        Built::Full(_) => unreachable!(),
    };
    assert_eq!(spin(FamilySpec::so(5, 2), "A"), Rational64::new(3, 5));
    assert_eq!(spin(FamilySpec::so(5, 2), "S"), Rational64::new(1, 1));
    assert_eq!(spin(FamilySpec::sp(2, 1), "A"), Rational64::new(2, 4));
    assert_eq!(spin(FamilySpec::sp(2, 1), "S"), Rational64::new(3, 4));
    assert_eq!(spin(FamilySpec::g2(1), "S"), Rational64::new(14, 15));
}

fn lie_edges(spec: &FamilySpec, phi: &str) -> Vec<(String, String)> {
    let Built::TwistOnly(data) = spec.build().unwrap() else { unreachable!() };
    let g = build_lie_tp_graph(&data, phi).unwrap();
    let mut e: Vec<_> =
        g.edges.iter().map(|&(a, b)| (g.channels[a].name.clone(), g.channels[b].name.clone())).collect();
    e.sort();
    e
}

fn pairs(v: &[(&str, &str)]) -> Vec<(String, String)> {
    v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

#[test]
fn lie_graphs_follow_the_declared_adjacency() {
    assert_eq!(lie_edges(&FamilySpec::so(6, 2), "A"), pairs(&[("0", "A"), ("A", "S")]));
    assert_eq!(lie_edges(&FamilySpec::so(6, 2), "S"), pairs(&[("0", "S"), ("A", "S")]));
    assert_eq!(lie_edges(&FamilySpec::g2(2), "A"), pairs(&[("0", "A"), ("A", "S"), ("S", "V")]));
}

#[test]
fn json_round_trip() {
    for cat in representable() {
        let text = cat.to_json();
        let back = CategoryData::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text, "{}", cat.name);
        assert_eq!(back.rules, cat.rules);
        assert!(check_f_identities(&back, 1e-10).unwrap().all_pass());
    }
}

#[test]
fn malformed_json_is_rejected() {
    let cat = full(FamilySpec::su2(2));
    let text = cat.to_json().replacen("\"1/2\"", "\"7/2\"", 1);
    assert!(CategoryData::from_json(&text).is_err());
    assert!(CategoryData::from_json("{").is_err());
}

#[test]
fn catalog_list_flags() {
    let list = catalog_list();
    assert_eq!(list.len(), 6);
    assert!(list.iter().all(|f| f.baxterisable));
    assert_eq!(list.iter().filter(|f| f.representable).count(), 3);
}

#[test]
fn bad_labels_and_ranges() {
    let cat = full(FamilySpec::su2(3));
    assert!(cat.label("2").is_err());
    assert!(cat.check_label(ObjectLabel(9)).is_err());
    assert!(FamilySpec::su2(0).build().is_err());
    assert!(FamilySpec::ty(1).build().is_err());
    assert!(FamilySpec::sp(1, 2).build().is_err());
}
