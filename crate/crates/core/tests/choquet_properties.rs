mod common;

use approx::assert_abs_diff_eq;
use isotone_core::capacity::{Capacity, DistortionFn};
use isotone_core::choquet::{choquet_discrete_with_rule, LevelSetRule};
use isotone_core::{choquet_discrete, DiscreteFunction};
use proptest::prelude::*;

fn probability(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, n).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect()
    })
}

fn instance() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, u32)> {
    (1usize..=6).prop_flat_map(|n| {
        (
            probability(n),
            prop::collection::vec(-3.0f64..3.0, n),
            1u32..(1 << n),
        )
    })
}

fn sqrt_capacity(p: &[f64]) -> Capacity {
    Capacity::distort(p, &DistortionFn::power(0.5).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn level_set_rules_agree((p, f, a) in instance()) {
        let c = sqrt_capacity(&p);
        let f = DiscreteFunction::new(f).unwrap();
        let ge = choquet_discrete_with_rule(&f, &c, a, LevelSetRule::AtLeast).unwrap();
        let gt = choquet_discrete_with_rule(&f, &c, a, LevelSetRule::Greater).unwrap();
        prop_assert!((ge - gt).abs() <= 1e-12);
    }

    #[test]
    fn relabeling_commutes_with_integration(
        (p, f, perm) in (1usize..=6).prop_flat_map(|n| (
            probability(n),
            prop::collection::vec(-3.0f64..3.0, n),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        ))
    ) {
        let c = sqrt_capacity(&p);
        let moved = c.permuted(&perm).unwrap();
        // g(perm[i]) = f(i)
        let mut g = vec![0.0; f.len()];
        for (i, &j) in perm.iter().enumerate() {
            g[j] = f[i];
        }
        let f = DiscreteFunction::new(f).unwrap();
        let g = DiscreteFunction::new(g).unwrap();
        let lhs = choquet_discrete(&f, &c, c.full_mask()).unwrap();
        let rhs = choquet_discrete(&g, &moved, moved.full_mask()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn larger_capacity_gives_larger_integral((p, f, _) in instance()) {
        // t^0.3 ≥ t^0.5 on [0, 1]
        let small = sqrt_capacity(&p);
        let large = Capacity::distort(&p, &DistortionFn::power(0.3).unwrap()).unwrap();
        let f = DiscreteFunction::new(f).unwrap();
        let full = small.full_mask();
        prop_assert!(choquet_discrete(&f, &small, full).unwrap() <= choquet_discrete(&f, &large, full).unwrap() + 1e-12);
    }

    #[test]
    fn constants_shift_by_set_measure((p, f, a) in instance(), shift in -5.0f64..5.0) {
        let c = sqrt_capacity(&p);
        let f = DiscreteFunction::new(f).unwrap();
        let g = f.map(|x| x + shift);
        let lhs = choquet_discrete(&g, &c, a).unwrap();
        let rhs = choquet_discrete(&f, &c, a).unwrap() + shift * c.get(a);
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }
}

#[test]
fn exact_values_match_riemann_sums() {
    let c = sqrt_capacity(&[0.5, 0.5]);
    let f = DiscreteFunction::new(vec![1.0, 0.0]).unwrap();
    assert_abs_diff_eq!(choquet_discrete(&f, &c, 0b11).unwrap(), 0.5f64.sqrt(), epsilon = 1e-12);
    assert_abs_diff_eq!(common::riemann_choquet(&f, &c, 0b11, 1_000_000), 0.5f64.sqrt(), epsilon = 1e-5);

    let g = DiscreteFunction::new(vec![1.0, -1.0]).unwrap();
    assert_abs_diff_eq!(choquet_discrete(&g, &c, 0b11).unwrap(), 2f64.sqrt() - 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(common::riemann_choquet(&g, &c, 0b11, 1_000_000), 2f64.sqrt() - 1.0, epsilon = 1e-5);
}
