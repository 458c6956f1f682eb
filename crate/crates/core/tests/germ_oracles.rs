use fibercheck_core::arith::{ArithError, BiPoly};
use fibercheck_core::germ::{
    delta_and_branches, intersection_multiplicity, milnor_jacobian_oracle, milnor_recursive,
    minimal_partial_resolution, ordinary_point_resolution, Germ, GermError, NamedKind, ResolutionConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg() -> ResolutionConfig {
    ResolutionConfig::default()
}

fn germ(text: &str) -> Germ {
    let (g, changed) = Germ::parse(text).unwrap();
    assert!(!changed, "{text} should already be reduced");
    g
}

#[test]
fn catalog_values_and_oracle_agree() {
    let cases = [
        ("y^2 - x^2", (1, 1, 2)),
        ("y^2 - x^3", (2, 1, 1)),
        ("y^2 - x^4", (3, 2, 2)),
        ("y^3 - x^3", (4, 3, 3)),
        ("x^4 - y^4", (9, 6, 4)),
        ("y^3 - x^4", (6, 3, 1)),
    ];
    for (text, expected) in cases {
        let g = germ(text);
        let mu = milnor_recursive(&g, &cfg()).unwrap();
        let (delta, r) = delta_and_branches(&g, &cfg()).unwrap();
        assert_eq!((mu, delta, r), expected, "{text}");
        assert_eq!(milnor_jacobian_oracle(&g).unwrap(), mu, "{text}");
    }
    for kind in [NamedKind::Node, NamedKind::Cusp, NamedKind::Tacnode, NamedKind::Ordinary(3), NamedKind::Ordinary(5)] {
        let g = Germ::new(kind.germ(), true).unwrap();
        let (mu, delta, r) = kind.expected();
        assert_eq!(milnor_jacobian_oracle(&g).unwrap(), mu, "{kind}");
        assert_eq!(delta_and_branches(&g, &cfg()).unwrap(), (delta, r), "{kind}");
    }
}

fn random_germ(rng: &mut ChaCha8Rng) -> BiPoly {
    let n = rng.gen_range(2..=5);
    let terms: Vec<(i64, u32, u32)> = (0..n)
        .map(|_| {
            let d = rng.gen_range(2..=6u32);
            let i = rng.gen_range(0..=d);
            let mut c = rng.gen_range(-3..=3i64);
            if c == 0 {
                c = 1;
            }
            (c, i, d - i)
        })
        .collect();
    BiPoly::from_int_terms(&terms)
}

#[test]
fn recursion_matches_the_jacobian_oracle_on_random_germs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    let mut tower = 0;
    let mut attempts = 0;
    while checked < 120 {
        attempts += 1;
        assert!(attempts < 5000, "too few usable random germs");
        let f = random_germ(&mut rng);
        if f.order_at_origin().is_none_or(|m| m < 2) {
            continue;
        }
        let Ok((g, false)) = Germ::reduce(f.clone()) else { continue };
        match milnor_recursive(&g, &cfg()) {
            Ok(mu) => {
                assert_eq!(mu, milnor_jacobian_oracle(&g).unwrap(), "{f}");
                let (delta, r) = delta_and_branches(&g, &cfg()).unwrap();
                assert_eq!(mu + r, 2 * delta + 1, "{f}");
                checked += 1;
            }
            Err(GermError::Arith(ArithError::ExtensionTowerUnsupported)) => tower += 1,
            Err(e) => panic!("{f}: {e}"),
        }
    }
    assert!(tower < checked, "{tower} germs needed a field tower");
}

/// `Π (y − p_i(x))` with `p_i(0) = 0`: `δ = Σ_{i<j} ord(p_i − p_j)`.
#[test]
fn delta_of_smooth_graph_arrangements() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let k = rng.gen_range(2..=4);
        let mut graphs: Vec<Vec<i64>> = Vec::new();
        while graphs.len() < k {
            let p: Vec<i64> = (0..4).map(|i| if i == 0 { 0 } else { rng.gen_range(-2..=2) }).collect();
            if !graphs.contains(&p) {
                graphs.push(p);
            }
        }
        let branch = |p: &[i64]| {
            let mut terms = vec![(1, 0, 1)];
            terms.extend(p.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (-c, i as u32, 0)));
            BiPoly::from_int_terms(&terms)
        };
        let ord = |a: &[i64], b: &[i64]| (0..4).find(|&i| a[i] != b[i]).unwrap() as u64;
        let f = graphs.iter().fold(BiPoly::one(), |acc, p| acc.mul(&branch(p)));
        let mut expected = 0;
        for i in 0..k {
            for j in i + 1..k {
                expected += ord(&graphs[i], &graphs[j]);
                let meet = intersection_multiplicity(&branch(&graphs[i]), &branch(&graphs[j]), &cfg()).unwrap();
                assert_eq!(meet, ord(&graphs[i], &graphs[j]));
            }
        }
        let g = Germ::new(f.clone(), true).unwrap();
        assert_eq!(delta_and_branches(&g, &cfg()).unwrap(), (expected, k as u64), "{f}");
        assert_eq!(milnor_jacobian_oracle(&g).unwrap(), 2 * expected - k as u64 + 1, "{f}");
    }
}

#[test]
fn delta_is_additive_up_to_intersection() {
    let pairs = [
        ("y^2 - x^3", "y - x"),
        ("y^2 - x^3", "y^2 - 2*x^3"),
        ("y^2 - x^4", "x"),
        ("y^3 - x^4", "y^2 - x^5"),
        ("y^2 - x^2", "y - 2*x^2"),
    ];
    for (a, b) in pairs {
        let (fa, fb) = (germ(a), germ(b));
        let whole = Germ::new(fa.equation().mul(fb.equation()), true).unwrap();
        let d = |g: &Germ| delta_and_branches(g, &cfg()).unwrap().0;
        let meet = intersection_multiplicity(fa.equation(), fb.equation(), &cfg()).unwrap();
        assert_eq!(d(&whole), d(&fa) + d(&fb) + meet, "{a} and {b}");
    }
}

fn node_count_identity(g: &Germ) {
    let p = minimal_partial_resolution(g, &cfg()).unwrap();
    let mu = milnor_jacobian_oracle(g).unwrap() as i64;
    let correction: i64 = p.m_sequence.iter().map(|&m| (m as i64 - 1) * (m as i64 - 2)).sum();
    assert!(p.m_sequence.iter().all(|&m| m >= 2));
    assert_eq!(p.final_nodes as i64, mu - correction + p.m_sequence.len() as i64, "{}", g.equation());
}

#[test]
fn partial_resolution_sequences() {
    let cases: [(&str, &[u32]); 3] = [("y^2 - x^2", &[]), ("y^2 - x^3", &[2, 2, 3]), ("y^2 - x^4", &[2, 3])];
    for (text, seq) in cases {
        let g = germ(text);
        assert_eq!(minimal_partial_resolution(&g, &cfg()).unwrap().m_sequence, seq, "{text}");
        node_count_identity(&g);
    }
    for m in 3..=6 {
        assert_eq!(ordinary_point_resolution(m, &cfg()).unwrap(), vec![m]);
        node_count_identity(&Germ::new(NamedKind::Ordinary(m).germ(), true).unwrap());
    }
    for text in ["y^3 - x^4", "y^3 - x^5", "x^4 + y^4", "y^2 - x^5", "x*y*(y - x^2)"] {
        node_count_identity(&germ(text));
    }
}

#[test]
fn depth_cap_is_reported() {
    let g = germ("y^2 - x^41");
    let shallow = ResolutionConfig { max_depth: 5 };
    assert!(matches!(milnor_recursive(&g, &shallow), Err(GermError::ResolutionDepthExceeded { cap: 5 })));
    assert_eq!(milnor_recursive(&g, &cfg()).unwrap(), 40);
}
