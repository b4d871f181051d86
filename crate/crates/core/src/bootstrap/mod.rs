//! Parameter schedule and recursive generator, with a materializing toy
//! mode and an exact symbolic report mode.

pub mod engine;
pub mod schedule;

pub use engine::{
    derive_hard_polynomial_toy, epsilon_from_json, report, run_toy, BaseGeneratorKind, CostReport,
    StageArtifacts, StageOverride, ToyParams, ToyRun,
};
pub use schedule::{
    parse_rational, rational_to_string, reference_schedule, Schedule, StageParams, TowerInt,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budgets;
    use crate::field::Field;
    use crate::par::Parallelism;
    use num_bigint::BigUint;
    use num_rational::BigRational;
    use num_traits::One;
    use std::collections::BTreeMap;

    fn rat(n: u64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn schedule_small_example() {
        // n0 = 2, epsilon = 1/2: n_1 = 256, t_1 = 256/50; the n0 > 150/eps
        // precondition (n0 > 300) is flagged, not enforced.
        let eps = BigRational::new(1.into(), 2.into());
        let sched = reference_schedule(2, eps, BigUint::from(1_000_000u64)).unwrap();
        assert_eq!(sched.stage(1).unwrap().n.value().unwrap(), &BigUint::from(256u32));
        assert_eq!(sched.t(1), BigRational::new(256.into(), 50.into()));
        assert!(sched.warnings.iter().any(|w| w.contains("150/epsilon")));
    }

    #[test]
    fn closed_form_matches_recurrence() {
        let sched = reference_schedule(2, rat(1), BigUint::from(u64::MAX)).unwrap();
        for i in 2..=8 {
            assert_eq!(
                sched.t_closed_form(i).unwrap(),
                sched.t(i),
                "closed form diverged at stage {i}"
            );
        }
    }

    #[test]
    fn stop_threshold_single_stage() {
        // s* <= n_1 gives exactly one bootstrap stage.
        let sched = reference_schedule(4, rat(1), BigUint::from(65_536u64)).unwrap();
        assert_eq!(sched.stage_count(), 1);
    }

    #[test]
    fn tower_arithmetic_reaches_deep_stages() {
        let sched = reference_schedule(1 << 16, rat(1), BigUint::from(u64::MAX)).unwrap();
        assert_eq!(sched.stage_count(), 1); // n_1 = 2^128 >= 2^64 - 1
        // n_i stays exactly representable well past the stop stage
        for i in 0..=6 {
            assert!(sched.n(i).is_ok(), "n_{i} not representable");
        }
        let n3 = sched.n(3).unwrap();
        assert_eq!(n3.to_string(), format!("2^({})", BigUint::one() << 320));
    }

    #[test]
    fn report_stage2_example() {
        // n0 = 4, eps = 1, s = 16, stage 2: n_1 = 65536, cardinality
        // (s^3)^(n_1^2), at most 4 base calls.
        let rep = report(4, rat(1), BigUint::from(16u32), Some(2)).unwrap();
        assert_eq!(rep.cardinality_formula, "(s^3)^(65536^2)");
        let expected_exponent = BigUint::from(3u64 * (1u64 << 32));
        assert_eq!(rep.cardinality_exponent, expected_exponent.to_string());
        assert!(rep.base_call_count <= 4);
        assert!(rep.bounds_hold);
    }

    #[test]
    fn report_is_deterministic() {
        let a = serde_json::to_vec(&report(4, rat(1), BigUint::from(16u32), Some(2)).unwrap())
            .unwrap();
        let b = serde_json::to_vec(&report(4, rat(1), BigUint::from(16u32), Some(2)).unwrap())
            .unwrap();
        assert_eq!(a, b);
    }

    fn micro_params(field: Field, base: BaseGeneratorKind) -> ToyParams {
        let mut overrides = BTreeMap::new();
        overrides.insert(
            1,
            StageOverride {
                design: Some((2, 2, 2)),
                sample: Some(vec![0, 1, 2]),
                d_individual: None,
            },
        );
        ToyParams {
            field,
            n0: 2,
            epsilon: rat(1),
            s: 2,
            stage: 1,
            base,
            overrides,
            budgets: Budgets::default(),
            parallelism: Parallelism::default(),
        }
    }

    #[test]
    fn micro_run_emits_81_points() {
        let field = Field::prime(5).unwrap();
        let params = micro_params(field, BaseGeneratorKind::Grid { sample: vec![0, 1] });
        let run = run_toy(&params).unwrap();
        // one image point per evaluation point; images may coincide and the
        // deduplicated set is smaller
        assert_eq!(run.emitted.len(), 81, "log: {:?}", run.log);
        assert_eq!(run.output.class().n, 4);
        let stage = &run.stages[0];
        assert_eq!(stage.eval_cardinality, 81);
        assert_eq!(stage.emitted_cardinality, 81);
        assert_eq!(stage.annihilated_points, 4);
        assert!(stage.distinct_cardinality <= 81);
    }

    #[test]
    fn micro_run_deterministic_bytes() {
        let field = Field::prime(5).unwrap();
        let params = micro_params(field, BaseGeneratorKind::Grid { sample: vec![0, 1] });
        let a = run_toy(&params).unwrap().output.to_text();
        let b = run_toy(&params).unwrap().output.to_text();
        assert_eq!(a, b);
    }

    #[test]
    fn exhaustive_base_stage_over_gf3() {
        let field = Field::prime(3).unwrap();
        let mut params =
            micro_params(field, BaseGeneratorKind::Exhaustive { d_individual: 1 });
        params.overrides.get_mut(&1).unwrap().design = Some((2, 2, 2));
        let run = run_toy(&params).unwrap();
        let stage = &run.stages[0];
        // the annihilator vanishes on the regenerated base set
        let mut log = Vec::new();
        let base = params
            .base
            .generate(field, 2, 64, &params.budgets, &mut log)
            .unwrap();
        assert_eq!(base.len(), stage.annihilated_points);
        for p in base.points() {
            assert_eq!(stage.annihilator.evaluate(p).unwrap(), 0);
        }
        // output points live in F^m for the stage design
        assert!(run.output.points().iter().all(|p| p.len() == stage.design.num_sets()));
    }

    #[test]
    fn empty_stage_hard_polynomial_is_one() {
        let field = Field::prime(5).unwrap();
        let mut params = micro_params(field, BaseGeneratorKind::Grid { sample: vec![0, 1] });
        params.stage = 0;
        let (q, _) = derive_hard_polynomial_toy(&params, 1, 0).unwrap();
        assert_eq!(q, crate::multipoly::MultiPoly::constant(field, 1, 1));
    }

    #[test]
    fn stage_two_recursion_materializes() {
        // Stage 2 recurses into stage 1 for its annihilator base, then
        // pushes a fresh grid through the stage-2 design.
        let field = Field::prime(5).unwrap();
        let mut params = micro_params(field, BaseGeneratorKind::Grid { sample: vec![0, 1] });
        params.stage = 2;
        params.overrides.insert(
            2,
            StageOverride {
                design: Some((2, 2, 2)),
                sample: Some(vec![0, 1, 2]),
                d_individual: None,
            },
        );
        let run = run_toy(&params).unwrap();
        assert_eq!(run.emitted.len(), 81);
        assert_eq!(run.output.class().n, 4);
        let by_stage: Vec<u32> = run.stages.iter().map(|a| a.stage).collect();
        assert_eq!(by_stage, vec![1, 2]);
        // the stage-2 annihilator vanishes on the stage-1 output it was
        // built from (first k coordinates)
        let stage2 = run.stages.last().unwrap();
        let k = stage2.annihilator.num_vars();
        let stage1 = &run.stages[0];
        for p in &stage1.emitted_points {
            assert_eq!(stage2.annihilator.evaluate(&p[..k]).unwrap(), 0);
        }
    }

    #[test]
    fn stage_three_uses_deeper_evaluation_set() {
        // Stage 3 draws its evaluation points from a stage-2 run instead of
        // a grid; with the micro designs every stage has width 4 = l.
        let field = Field::prime(5).unwrap();
        let mut params = micro_params(field, BaseGeneratorKind::Grid { sample: vec![0, 1] });
        params.stage = 3;
        for i in [2u32, 3] {
            params.overrides.insert(
                i,
                StageOverride {
                    design: Some((2, 2, 2)),
                    sample: Some(vec![0, 1, 2]),
                    d_individual: None,
                },
            );
        }
        let run = run_toy(&params).unwrap();
        assert_eq!(run.output.class().n, 4);
        let stage3 = run.stages.iter().find(|a| a.stage == 3).unwrap();
        // one image per point of the deeper evaluation set
        assert_eq!(stage3.eval_cardinality, stage3.emitted_cardinality);
        // identical configs reproduce identical bytes across the recursion
        let again = run_toy(&params).unwrap();
        assert_eq!(run.output.to_text(), again.output.to_text());
        assert_eq!(run.emitted, again.emitted);
    }

    #[test]
    fn hard_polynomial_from_micro_run() {
        // A nonzero bivariate annihilator of the micro run's output: it must
        // vanish on the first two coordinates of every emitted point.
        let field = Field::prime(5).unwrap();
        let params = micro_params(field, BaseGeneratorKind::Grid { sample: vec![0, 1] });
        let (q, run) = derive_hard_polynomial_toy(&params, 2, 2).unwrap();
        assert!(!q.is_zero());
        assert_eq!(q.num_vars(), 2);
        assert_eq!(run.emitted.len(), 81);
        for p in &run.emitted {
            assert_eq!(q.evaluate(&p[..2]).unwrap(), 0);
        }
    }
}
