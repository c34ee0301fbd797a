use linbandit_core::adversaries::{
    Adversary, Attack, AttackContext, AttackSpec, BudgetLedger, FlipTheta, Garcelon, LearnerView, SimpleTheta,
};
use linbandit_core::harness::{run_trial, EnvironmentSpec, ExperimentSpec};
use linbandit_core::learners::{LearnerSpec, PeConfig};
use linbandit_core::Vector;
use proptest::prelude::*;

fn ctx<'a>(round: u64, arm: usize, contexts: &'a [Vector], theta: &'a Vector, noise: f64) -> AttackContext<'a> {
    AttackContext {
        round,
        arm,
        contexts,
        theta,
        mean: theta.dot(&contexts[arm]),
        noise,
        learner: LearnerView::default(),
    }
}

proptest! {
    #[test]
    fn ledger_never_overdrafts(budget in 0.0f64..50.0, proposals in prop::collection::vec(-3.0f64..3.0, 0..200)) {
        let mut ledger = BudgetLedger::new(budget).unwrap();
        let mut total = 0.0;
        for p in proposals {
            let c = ledger.charge(p);
            prop_assert!(c == 0.0 || c.signum() == p.signum());
            prop_assert!(c.abs() <= p.abs());
            total += c.abs();
            prop_assert!(ledger.spent() <= budget);
        }
        prop_assert!(total <= budget + 1e-9);
        prop_assert!((total - ledger.spent()).abs() <= 1e-9 * budget.max(1.0));
    }

    #[test]
    fn flip_is_self_inverse(theta in prop::collection::vec(-0.5f64..0.5, 3), a in prop::collection::vec(-0.5f64..0.5, 3)) {
        let theta = Vector::from_vec(theta);
        let contexts = vec![Vector::from_vec(a)];
        let mean = theta.dot(&contexts[0]);
        let once = mean + FlipTheta.propose(&ctx(1, 0, &contexts, &theta, 0.0));
        let neg = -theta.clone();
        let twice = once + FlipTheta.propose(&ctx(1, 0, &contexts, &neg, 0.0));
        prop_assert!((once + mean).abs() <= 1e-15);
        prop_assert!((twice - mean).abs() <= 1e-15);
    }

    #[test]
    fn simple_theta_is_garcelon_on_fixed_arms(
        rows in prop::collection::vec(prop::collection::vec(-0.5f64..0.5, 2), 2..8),
        decoy in prop::collection::vec(-1.0f64..1.0, 2),
        pulls in prop::collection::vec(0usize..8, 1..50),
        noise in -1.0f64..1.0,
    ) {
        let arms: Vec<Vector> = rows.into_iter().map(Vector::from_vec).collect();
        let decoy = Vector::from_vec(decoy);
        prop_assume!(decoy.norm() > 1e-3);
        let theta = Vector::from_vec(vec![0.3, -0.4]);
        let simple = SimpleTheta { theta_target: decoy.normalize(), v_target: -1.0 };
        let target = simple.target(&arms);
        let mut a = Adversary::new(Some(Box::new(simple)), 5.0, "simple").unwrap();
        let mut b = Adversary::new(Some(Box::new(Garcelon { target, v_target: -1.0 })), 5.0, "garcelon").unwrap();
        for (t, p) in pulls.into_iter().enumerate() {
            let arm = p % arms.len();
            let c = ctx(t as u64 + 1, arm, &arms, &theta, noise);
            prop_assert_eq!(a.corrupt(&c), b.corrupt(&c));
        }
    }
}

#[test]
fn untouched_pulls_cost_nothing() {
    let arms = vec![Vector::from_vec(vec![0.3]), Vector::from_vec(vec![0.6]), Vector::from_vec(vec![0.0])];
    let theta = Vector::from_vec(vec![1.0]);
    let specs = [AttackSpec::garcelon(0), AttackSpec::oracle_mab(1), AttackSpec::FlipTheta, AttackSpec::TopN { n: 1 }];
    let pulls = [0, 0, 2, 1];
    let learner = linbandit_core::learners::Greedy::new(1);
    for (spec, arm) in specs.iter().zip(pulls) {
        let rng = linbandit_core::rng::stream(0, linbandit_core::rng::Stream::Adversary);
        let mut adv = spec.build(10.0, 1, 3, &learner, rng).unwrap();
        let c = ctx(1, arm, &arms, &theta, 0.2);
        let applied = adv.corrupt(&c);
        if matches!(spec, AttackSpec::TopN { .. }) {
            assert!(applied < 0.0, "top arm must be hit");
            continue;
        }
        assert_eq!(applied, 0.0, "{}", spec.label());
        assert_eq!(adv.ledger().spent(), 0.0);
    }
}

#[test]
fn every_attack_respects_the_budget_in_full_runs() {
    let attacks = [
        AttackSpec::garcelon(0),
        AttackSpec::oracle_mab(0),
        AttackSpec::simple_theta(),
        AttackSpec::FlipTheta,
        AttackSpec::TopN { n: 3 },
        AttackSpec::Zeroing { rounds: None },
        AttackSpec::FlipTheta.delayed(),
    ];
    let learners = [
        LearnerSpec::PhasedElimination(PeConfig::practical_unknown()),
        LearnerSpec::Greedy,
        LearnerSpec::linucb(),
        LearnerSpec::thompson(),
    ];
    for attack in &attacks {
        for learner in &learners {
            if attack.is_delayed() && !matches!(learner, LearnerSpec::PhasedElimination(_)) {
                continue;
            }
            for budget in [0.0, 3.7, 40.0] {
                let spec = ExperimentSpec {
                    environment: EnvironmentSpec::SyntheticFixed { dim: 3, k: 6, noise_variance: 0.05, instance_seed: None },
                    learner: learner.clone(),
                    attack: attack.clone(),
                    budget,
                    horizon: 400,
                    diagnostics: false,
                };
                let tr = run_trial(&spec, 3).unwrap();
                let total: f64 = tr.corruption.iter().map(|c| c.abs()).sum();
                assert!(total <= budget + 1e-9, "{} vs {}: {total} > {budget}", attack.label(), tr.learner);
                assert!(tr.total_spent() <= budget);
            }
        }
    }
}
