use std::path::PathBuf;

use fibercheck_core::audit::{audit, AuditOptions, Verdict};
use fibercheck_core::model::{self, FibrationModel};
use fibercheck_core::par::Execution;
use fibercheck_core::sample::random_fibration;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixture(name: &str) -> FibrationModel {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../cli/examples");
    model::load(&dir.join(name)).unwrap()
}

#[test]
fn random_consistent_fibrations_pass_every_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let opts = AuditOptions { execution: Execution::Sequential, ..Default::default() };
    let models: Vec<FibrationModel> = (0..1000).map(|i| random_fibration(&mut rng, &format!("random-{i}"))).collect();
    let reports = fibercheck_core::par::map(Execution::Parallel, &models, |m| audit(m, &opts).unwrap());
    for (m, r) in models.iter().zip(&reports) {
        let failed: Vec<_> = r.failed_checks().collect();
        assert!(failed.is_empty(), "{}: {failed:?}", m.to_toml());
        assert_eq!(r.balance.as_ref().unwrap().residual, 0, "{}", m.to_toml());
        for rule in r.rules.iter().filter(|rule| rule.applicable) {
            assert!(!rule.margin.is_negative(), "{}: {rule:?}", m.to_toml());
        }
        if let Some(d) = &r.diagnosis {
            assert!(d.excess_residual.is_zero(), "{}", m.to_toml());
            assert!(!d.minimum.margin.is_negative());
        }
    }
}

#[test]
fn sequential_and_parallel_audits_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..20 {
        let m = random_fibration(&mut rng, &format!("r{i}"));
        let seq = audit(&m, &AuditOptions { execution: Execution::Sequential, ..Default::default() }).unwrap();
        let par = audit(&m, &AuditOptions { execution: Execution::Parallel, ..Default::default() }).unwrap();
        assert_eq!(seq, par);
    }
}

#[test]
fn shipped_fixtures_round_trip_and_audit_clean() {
    for name in ["nodal-genus2", "double-cover-exp1", "cusp-fiber", "product-c2xe"] {
        let m = fixture(name);
        assert_eq!(FibrationModel::from_toml(&m.to_toml()).unwrap(), m, "{name}");
        let r = audit(&m, &AuditOptions { strict_extras: true, ..Default::default() }).unwrap();
        assert!(r.consistent, "{name}: {:?}", r.failed_checks().collect::<Vec<_>>());
        assert!(r.rules.iter().all(|rule| rule.verdict != Verdict::DataInconsistent));
    }
}

#[test]
fn double_cover_fixture_values() {
    let r = audit(&fixture("double-cover-exp1"), &AuditOptions::default()).unwrap();
    let c = r.cover.as_ref().unwrap();
    assert_eq!((c.invariants.chi_o, c.invariants.k_sq, c.invariants.e), (0, -4, 4));
    let rel = r.relative.as_ref().unwrap();
    assert_eq!((rel.chi_f, rel.k_f_sq, rel.e_f, rel.h11), (1, 4, 8, 6));
    let counts = r.counts.as_ref().unwrap();
    assert_eq!((counts.s, counts.s1), (6, 4));
}

#[test]
fn claimed_h11_of_seven_leaves_residual_minus_one() {
    let mut m = fixture("double-cover-exp1");
    m.surface.h11 = Some(7);
    let r = audit(&m, &AuditOptions::default()).unwrap();
    assert!(!r.consistent);
    assert_eq!(r.balance.as_ref().unwrap().residual, -1);
}
