use fibercheck_core::fiber::{
    chi_top_identity_check, fiber_full_invariants, fiber_reduced_invariants, partial_resolution_transform,
    ComponentRecord, FiberError, FiberModel, FiberSpec, SingularitySpec,
};
use fibercheck_core::germ::{NamedKind, ResolutionConfig};
use fibercheck_core::sample::random_reduced_fiber;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn comp(id: &str, g: i64) -> ComponentRecord {
    ComponentRecord { id: id.into(), geometric_genus: g, multiplicity: 1 }
}

fn at(ids: &[&str]) -> Vec<String> {
    ids.iter().map(|s| s.to_string()).collect()
}

fn kind(ids: &[&str], k: NamedKind) -> SingularitySpec {
    SingularitySpec { at: at(ids), kind: Some(k), ..Default::default() }
}

fn germ(ids: &[&str], text: &str) -> SingularitySpec {
    SingularitySpec { at: at(ids), germ: Some(text.into()), ..Default::default() }
}

fn model(components: Vec<ComponentRecord>, singularities: Vec<SingularitySpec>, g: i64) -> Result<FiberModel, FiberError> {
    let spec = FiberSpec { name: Some("F".into()), components, singularities };
    FiberModel::from_spec(&spec, "F", g, &ResolutionConfig::default())
}

#[test]
fn cuspidal_genus_two_fiber() {
    let m = model(vec![comp("C", 1)], vec![germ(&["C"], "y^2 - x^3")], 2).unwrap();
    let inv = fiber_full_invariants(&m).unwrap();
    assert_eq!(inv.e_f, 2);
    assert_eq!(inv.n_bar, 1);
    assert_eq!(inv.alpha, 0);
    assert_eq!(inv.g_f + inv.n_bar + inv.alpha, 2);
    assert!(!inv.semistable);
}

#[test]
fn catalog_fibers_satisfy_the_euler_identity() {
    let fibers = vec![
        (vec![comp("C", 1)], vec![kind(&["C"], NamedKind::Node)], 2),
        (vec![comp("C", 1)], vec![kind(&["C"], NamedKind::Cusp)], 2),
        (vec![comp("C", 0)], vec![kind(&["C"], NamedKind::Tacnode)], 2),
        (vec![comp("A", 1), comp("B", 1)], vec![kind(&["A", "B"], NamedKind::Node)], 2),
        (vec![comp("A", 1), comp("B", 0)], vec![kind(&["A", "B"], NamedKind::Node), kind(&["A", "B"], NamedKind::Node)], 2),
        (vec![comp("A", 0), comp("B", 0), comp("C", 0)], vec![kind(&["A", "B", "C"], NamedKind::Ordinary(3))], 1),
        (vec![comp("C", 0)], vec![kind(&["C"], NamedKind::Ordinary(4))], 6),
        (vec![comp("A", 0), comp("B", 1)], vec![kind(&["A", "B"], NamedKind::Tacnode)], 2),
    ];
    for (components, points, g) in fibers {
        let m = model(components, points, g).unwrap();
        let (_, residual) = chi_top_identity_check(&m).unwrap();
        assert_eq!(residual, 0, "{m:?}");
        fiber_full_invariants(&m).unwrap();
    }
}

#[test]
fn random_fibers_satisfy_the_euler_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..200 {
        let f = random_reduced_fiber(&mut rng, &format!("F{i}"), i % 3 == 0);
        let m = FiberModel::from_spec(&f.spec, "F", f.pa_red, &ResolutionConfig::default()).unwrap();
        let red = fiber_reduced_invariants(&m).unwrap();
        assert_eq!((red.pa_red, red.e_f, red.ell, red.g_f), (f.pa_red, f.e_f, f.ell, f.g_f));
        assert_eq!(chi_top_identity_check(&m).unwrap().1, 0);
    }
}

#[test]
fn transform_examples() {
    assert_eq!(partial_resolution_transform(1, 0, 2, &[]).unwrap(), (1, 0, 2));
    assert_eq!(partial_resolution_transform(3, 0, 2, &[2, 3]).unwrap(), (3, 1, 1));
    assert_eq!(partial_resolution_transform(2, 0, 2, &[2, 2, 3]).unwrap(), (3, 1, 1));
}

#[test]
fn structural_and_numeric_errors_are_told_apart() {
    let unknown = model(vec![comp("C", 1)], vec![kind(&["D"], NamedKind::Node)], 2).unwrap_err();
    assert!(unknown.is_structural());
    let dup = model(vec![comp("C", 1), comp("C", 0)], vec![], 2).unwrap_err();
    assert!(dup.is_structural());
    let missing = model(vec![comp("C", 1)], vec![SingularitySpec { at: at(&["C"]), ..Default::default() }], 2).unwrap_err();
    assert!(missing.is_structural());
    let m = model(vec![comp("C", -1)], vec![kind(&["C"], NamedKind::Node)], 2).unwrap();
    assert!(!fiber_reduced_invariants(&m).unwrap_err().is_structural());
    let m = model(vec![comp("A", 1), comp("B", 1)], vec![], 2).unwrap();
    assert!(matches!(fiber_reduced_invariants(&m), Err(FiberError::DisconnectedFiber { .. })));
}

#[test]
fn non_reduced_fibers_need_explicit_trees() {
    let spec = FiberSpec {
        name: None,
        components: vec![ComponentRecord { id: "C".into(), geometric_genus: 0, multiplicity: 2 }, comp("D", 1)],
        singularities: vec![kind(&["C", "D"], NamedKind::Tacnode)],
    };
    let err = FiberModel::from_spec(&spec, "F", 2, &ResolutionConfig::default()).unwrap_err();
    assert!(matches!(err, FiberError::NonReducedNeedsTree { .. }));
}
