use linbandit_core::design::{frank_wolfe_design, gram, project_to_span, support_bound, weighted_norm_sq, DesignOptions};
use linbandit_core::Vector;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn arm_strategy(d: usize, k: usize) -> impl Strategy<Value = Vec<Vector>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), k).prop_map(move |rows| {
        rows.into_iter()
            .map(|r| {
                let v = Vector::from_vec(r);
                let n = v.norm();
                if n > 1.0 { v / n } else { v }
            })
            .filter(|v| v.norm() > 1e-3)
            .collect()
    })
}

fn sized_arms() -> impl Strategy<Value = Vec<Vector>> {
    (2usize..7, 2usize..20).prop_flat_map(|(d, k)| arm_strategy(d, k.max(d)))
}

fn brute_gram(arms: &[Vector], w: &[f64]) -> DMatrix<f64> {
    let d = arms[0].len();
    DMatrix::from_fn(d, d, |i, j| arms.iter().zip(w).map(|(a, wi)| wi * a[i] * a[j]).sum())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gram_matches_brute_force(arms in sized_arms(), seed in 0u64..1000) {
        prop_assume!(!arms.is_empty());
        let w: Vec<f64> = (0..arms.len()).map(|i| ((i as u64 * 7 + seed) % 11) as f64 + 0.5).collect();
        let g = gram(&arms, &w);
        let b = brute_gram(&arms, &w);
        prop_assert!((g - &b).norm() <= 1e-10 * b.norm().max(1.0));
    }

    #[test]
    fn weighted_norm_matches_linear_solve(arms in sized_arms()) {
        prop_assume!(arms.len() >= arms[0].len());
        let w = vec![1.0 / arms.len() as f64; arms.len()];
        let g = brute_gram(&arms, &w);
        let eig = g.clone().symmetric_eigen();
        let lmin = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        let lmax = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
        prop_assume!(lmin > 1e-6 * lmax);
        for b in &arms {
            let x = g.clone().lu().solve(b).unwrap();
            let direct = b.dot(&x);
            let got = weighted_norm_sq(b, &g).unwrap();
            prop_assert!((got - direct).abs() <= 1e-10 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn design_invariants(arms in sized_arms()) {
        prop_assume!(!arms.is_empty());
        let d = arms[0].len();
        let design = frank_wolfe_design(&arms, DesignOptions::default()).unwrap();
        let r = design.rank as f64;
        let sum: f64 = design.weights.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        prop_assert!(design.weights.iter().all(|&w| w >= 0.0));
        prop_assert!(design.value <= 2.0 * r * (1.0 + 1e-12));
        prop_assert!(design.value >= r * (1.0 - 1e-9));
        prop_assert!(design.support_len() as f64 <= support_bound(d));
        prop_assert!(design.objective.windows(2).all(|p| p[1] <= p[0] + 1e-9));
    }

    #[test]
    fn projection_preserves_inner_products(arms in sized_arms()) {
        prop_assume!(!arms.is_empty());
        let p = project_to_span(&arms).unwrap();
        for i in 0..arms.len() {
            for j in 0..arms.len() {
                prop_assert!((arms[i].dot(&arms[j]) - p.arms[i].dot(&p.arms[j])).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn three_arm_plane_against_grid_search() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let arms = vec![
        Vector::from_vec(vec![1.0, 0.0]),
        Vector::from_vec(vec![0.0, 1.0]),
        Vector::from_vec(vec![s, s]),
    ];
    let n = 1000;
    let mut best = f64::INFINITY;
    for i in 0..=n {
        for j in 0..=(n - i) {
            let w = [i as f64 / n as f64, j as f64 / n as f64, (n - i - j) as f64 / n as f64];
            let g = brute_gram(&arms, &w);
            let Some(inv) = g.try_inverse() else { continue };
            let v = arms.iter().map(|a| a.dot(&(&inv * a))).fold(0.0, f64::max);
            best = best.min(v);
        }
    }
    assert!((best - 2.0).abs() < 1e-2, "grid optimum {best}");
    let design = frank_wolfe_design(&arms, DesignOptions::default()).unwrap();
    assert!(design.value >= best - 1e-2 && design.value <= 4.0);
}

#[test]
fn points_in_a_plane_of_r5() {
    let u = Vector::from_vec(vec![0.6, 0.0, 0.8, 0.0, 0.0]);
    let w = Vector::from_vec(vec![0.0, 1.0, 0.0, 0.0, 0.0]);
    let arms = vec![&u * 0.9, &w * 0.5, (&u + &w) * 0.5];
    let design = frank_wolfe_design(&arms, DesignOptions::default()).unwrap();
    assert_eq!(design.rank, 2);
    assert!(design.value <= 4.0 + 1e-12 && design.value >= 2.0 - 1e-9);
}
