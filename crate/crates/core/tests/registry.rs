use aluthge_core::{CheckConfig, CheckId, Expectation, Verdict};

#[test]
fn every_check_passes_at_small_scale() {
    for id in CheckId::ALL {
        let lambda = if id.lambda_range().contains(0.4) { 0.4 } else { 0.5 };
        for dim in [2, 3, 5] {
            let r = id.run(&CheckConfig::new(dim, 11, lambda, 60)).unwrap();
            assert_eq!(r.failures, 0, "{id} d={dim}: {:?}", r.witness.map(|w| w.note));
            assert_eq!(r.check_id, id.name());
            assert_eq!((r.dim, r.trials, r.seed), (dim, 60, 11));
            assert!(r.worst_residual.is_finite());
        }
    }
}

#[test]
fn reports_are_deterministic() {
    for id in [
        CheckId::NilpotentKernel,
        CheckId::StructuralProperties,
        CheckId::JordanConditionAdjoint,
    ] {
        let cfg = CheckConfig::new(4, 3, 0.5, 40);
        let a = serde_json::to_string(&id.run(&cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&id.run(&cfg).unwrap()).unwrap();
        assert_eq!(a, b, "{id}");
    }
}

#[test]
fn witness_replays() {
    let cfg = CheckConfig::new(3, 5, 0.5, 30);
    let r = CheckId::FixedPoints.run(&cfg).unwrap();
    let w = r.witness.expect("a witness is always recorded");
    let again = CheckId::FixedPoints.replay(&cfg, w.trial).unwrap();
    assert_eq!(again.verdict, Verdict::Pass);
    assert_eq!(again.residual, w.residual);
    assert_eq!(again.inputs.len(), w.matrices.len());
}

#[test]
fn competitor_checks_expect_violation() {
    for id in [CheckId::JordanConditionAdjoint, CheckId::JordanConditionScaled] {
        assert_eq!(id.expectation(), Expectation::Violated);
        let r = id.run(&CheckConfig::new(3, 1, 0.5, 50)).unwrap();
        assert_eq!(r.failures, 0);
        assert!(r.min_refutation.unwrap() > 1e-4);
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let id = CheckId::RankOneFormula;
    assert!(id.run(&CheckConfig::new(1, 0, 0.5, 10)).is_err());
    assert!(id.run(&CheckConfig::new(3, 0, 0.5, 0)).is_err());
    assert!(id.run(&CheckConfig::new(3, 0, 1.0, 10)).is_err());
    assert!(CheckId::SpectrumInvariance
        .run(&CheckConfig::new(3, 0, 1.0, 10))
        .is_ok());
    assert_eq!(
        "star-jordan-condition".parse::<CheckId>().unwrap(),
        CheckId::StarJordanCondition
    );
    assert!("nope".parse::<CheckId>().is_err());
}
