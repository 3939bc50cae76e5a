mod common;

use isotone_core::isotone_certify::{
    certify_isotone, check_subgradient_inequality, lp_feasible_positive_combination,
    pointwise_positive_subgradient, probe_monotone_pairs, CertifyConfig, IsotonicityVerdict,
    MaxAffineMap, PointwiseSubgradient, PositiveCombination,
};
use isotone_core::lp::SimplexOptions;
use isotone_core::rng::{seeded, trial_rng};
use proptest::prelude::*;
use rand::Rng;

fn map_from_seed(seed: u64, mutate: bool) -> MaxAffineMap {
    let mut rng = seeded(seed);
    let map = common::random_isotone_map(&mut rng);
    if mutate {
        common::mutate_with_active_negative_gradient(&mut rng, &map)
    } else {
        map
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn verdict_is_invariant_under_positive_scaling(seed in any::<u64>(), mutate in any::<bool>(), c in 0.01f64..100.0, cone in any::<bool>()) {
        let map = map_from_seed(seed, mutate);
        let cfg = CertifyConfig::default();
        let before = certify_isotone(&map, cone, &cfg).unwrap().is_certified();
        let mut scaled = map.clone();
        for j in 0..scaled.output_dim() {
            scaled.scale_component(j, c);
        }
        prop_assert_eq!(before, certify_isotone(&scaled, cone, &cfg).unwrap().is_certified());
        prop_assert_eq!(before, !mutate);
    }

    #[test]
    fn positive_combinations_meet_their_contract(
        vectors in (1usize..5, 1usize..6).prop_flat_map(|(d, k)| prop::collection::vec(prop::collection::vec(-2.0f64..2.0, d), k))
    ) {
        match lp_feasible_positive_combination(&vectors, &SimplexOptions::default()).unwrap() {
            PositiveCombination::Found { weights, combination } => {
                prop_assert!(weights.iter().all(|w| *w >= -1e-12));
                prop_assert!((weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
                prop_assert!(combination.iter().all(|v| *v >= -1e-9));
            }
            PositiveCombination::Infeasible { phase_one_optimum } => {
                prop_assert!(phase_one_optimum > 1e-9);
                // no vertex is nonnegative either
                prop_assert!(vectors.iter().all(|v| v.iter().any(|x| *x < 0.0)));
            }
        }
    }

    #[test]
    fn map_json_round_trip(seed in any::<u64>(), mutate in any::<bool>()) {
        let map = map_from_seed(seed, mutate);
        let back: MaxAffineMap = serde_json::from_str(&serde_json::to_string(&map).unwrap()).unwrap();
        prop_assert_eq!(back, map);
    }
}

/// Certified on ℝⁿ ⟺ a positive subgradient exists at every probe point
/// and at every activity point of the certificate.
#[test]
fn whole_space_verdict_matches_pointwise_subgradients() {
    let cfg = CertifyConfig::default();
    for trial in 0..40 {
        let map = map_from_seed(1000 + trial as u64, trial % 2 == 1);
        let n = map.input_dim();
        let verdict = certify_isotone(&map, false, &cfg).unwrap();
        let mut points: Vec<Vec<f64>> = (0..1000)
            .map(|p| {
                let mut rng = trial_rng(trial as u64, p);
                (0..n).map(|_| rng.random_range(-5.0..5.0)).collect()
            })
            .collect();
        match &verdict {
            IsotonicityVerdict::Certified { certificate, .. } => {
                points.extend(certificate.iter().flat_map(|c| c.pieces.iter().map(|p| p.activity_point.clone())));
                for x0 in &points {
                    let PointwiseSubgradient::Found { rows } = pointwise_positive_subgradient(&map, x0, &cfg).unwrap() else {
                        panic!("trial {trial}: no positive subgradient at {x0:?}");
                    };
                    assert!(rows.iter().all(|r| r.row.iter().all(|v| *v >= -1e-9)));
                }
                let x0 = &points[0];
                let PointwiseSubgradient::Found { rows } = pointwise_positive_subgradient(&map, x0, &cfg).unwrap() else {
                    unreachable!()
                };
                let report = check_subgradient_inequality(&map, x0, &rows, 100, trial as u64, 1e-8).unwrap();
                assert!(report.all_passed(), "{report:?}");
            }
            IsotonicityVerdict::Violated { witness, .. } => {
                assert!(witness.violation(&map).unwrap() > 1e-9);
                // the witness pair passes through a point without a positive subgradient
                let bad = points
                    .iter()
                    .chain([&witness.x, &witness.y])
                    .any(|x0| matches!(pointwise_positive_subgradient(&map, x0, &cfg).unwrap(), PointwiseSubgradient::Missing { .. }));
                assert!(bad, "trial {trial}");
            }
        }
    }
}

#[test]
fn certificates_survive_random_pairs() {
    let cfg = CertifyConfig::default();
    for trial in 0..20 {
        let map = map_from_seed(5000 + trial, false);
        for cone in [false, true] {
            assert!(certify_isotone(&map, cone, &cfg).unwrap().is_certified());
            assert!(probe_monotone_pairs(&map, cone, 2000, trial, 1e-9).all_passed());
        }
    }
}
