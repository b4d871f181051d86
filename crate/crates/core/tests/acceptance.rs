//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured numbers (visible under `cargo test -- --nocapture`).

use hitset_core::bootstrap::{self, BaseGeneratorKind, StageOverride, ToyParams};
use hitset_core::budget::Budgets;
use hitset_core::circuit::{compose, horner_formula, sparse_to_formula};
use hitset_core::design::{build_design, verify_design};
use hitset_core::field::Field;
use hitset_core::hitting::{
    check_multiples_vanish, find_annihilator, grid_hitting_set, verify_hitting_exhaustive,
    ClassDescriptor, HittingSet, MultiplesOutcome, Provenance, UNBOUNDED,
};
use hitset_core::multipoly::MultiPoly;
use hitset_core::reduction::{ki_extract, KiBudget, NwSubstitution};
use hitset_core::rng::SplitMix64;
use hitset_core::sample;
use hitset_core::{Circuit, CircuitKind, Model, Parallelism};
use num_bigint::BigUint;
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::time::Instant;

fn gf(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Criterion 1: every (k, c, r) with k in {2,4,8,16}, c in {2,3},
/// r <= min(k,4) and m = k^{(c-1)r} <= 65536 builds exactly m sets of size
/// k with all pairwise intersections below r, within 60 seconds total.
#[test]
fn c1_design_suite() {
    let started = Instant::now();
    let mut cases = 0u32;
    let mut total_sets = 0u64;
    for k in [2u64, 4, 8, 16] {
        for c in [2u32, 3] {
            for r in 1..=k.min(4) {
                let m = (k as u128).pow((c - 1) * r as u32);
                if m > 65536 {
                    continue;
                }
                let design = build_design(k, c, r).unwrap();
                assert_eq!(design.num_sets() as u128, m, "(k={k},c={c},r={r})");
                assert!(design.sets.iter().all(|s| s.len() as u64 == k));
                assert!(
                    verify_design(&design).is_none(),
                    "(k={k},c={c},r={r}) has an intersection violation"
                );
                cases += 1;
                total_sets += design.num_sets() as u64;
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "design suite took {elapsed:?}, budget is 60 s");
    println!(
        "[acceptance] criterion 1 (design suite): PASS ({cases} parameter triples, \
         {total_sets} sets verified in {elapsed:?})"
    );
}

/// Criterion 2: 100 seeded univariates of degree <= 64 over GF(5), GF(7)
/// and GF(2^8): Horner formulas have exactly 2d+1 leaves and agree with
/// direct polynomial evaluation at 50 points each, exactly.
#[test]
fn c2_horner_suite() {
    let fields = [gf(5), gf(7), Field::binary(8).unwrap()];
    let mut checked = 0u32;
    for field in fields {
        let mut rng = SplitMix64::new(0x4852 ^ field.order());
        for _ in 0..100 {
            let degree = rng.below(65) as usize;
            let p = sample::random_unipoly(&mut rng, field, degree);
            let formula = horner_formula(&p, 0);
            assert_eq!(formula.leaf_count(), 2 * degree as u64 + 1);
            // direct MultiPoly evaluation as the cross-check
            let as_multi = MultiPoly::from_terms(
                field,
                1,
                p.coeffs().iter().enumerate().map(|(i, &c)| (vec![i as u32], c)),
            )
            .unwrap();
            for _ in 0..50 {
                let x = rng.below(field.order());
                assert_eq!(
                    formula.evaluate(&[x]).unwrap(),
                    as_multi.evaluate(&[x]).unwrap(),
                    "field {field}, degree {degree}, x = {x}"
                );
            }
            checked += 1;
        }
    }
    println!("[acceptance] criterion 2 (horner suite): PASS ({checked} univariates, 50 points each)");
}

/// Criterion 3: 200 seeded random formula pairs: composed leaf count is at
/// most s1 * s2 and composition commutes with expansion, exactly.
#[test]
fn c3_composition_bound() {
    let field = gf(7);
    let mut rng = SplitMix64::new(0xc03);
    let mut done = 0u32;
    while done < 200 {
        let p = sample::random_formula(&mut rng, field, 3, 8);
        let subs: Vec<Circuit> =
            (0..3).map(|_| sample::random_formula(&mut rng, field, 2, 6)).collect();
        let s1 = p.leaf_count();
        let s2 = subs.iter().map(|s| s.leaf_count()).max().unwrap();
        let composed = compose(&p, &subs).unwrap();
        assert!(
            composed.leaf_count() <= s1 * s2,
            "leaf count {} exceeds {s1} * {s2}",
            composed.leaf_count()
        );
        // semantic commutation through expansion
        let direct = composed.expand_default().unwrap();
        let expanded_subs: Vec<MultiPoly> = subs
            .iter()
            .map(|s| {
                let e = s.expand_default().unwrap();
                e.relabel(&(0..e.num_vars()).map(Some).collect::<Vec<_>>(), 2).unwrap()
            })
            .collect();
        let via_polys = p.expand_default().unwrap().compose(&expanded_subs).unwrap();
        let direct =
            direct.relabel(&(0..direct.num_vars()).map(Some).collect::<Vec<_>>(), 2).unwrap();
        assert_eq!(direct, via_polys);
        done += 1;
    }
    println!("[acceptance] criterion 3 (composition bound): PASS (200 formula pairs)");
}

/// Criterion 4: 100 seeded hitting sets over GF(5)/GF(7) with k in {2,3}
/// and (d'+1)^k > |H|: the annihilator is nonzero, vanishes on H, respects
/// both degree bounds, survives 20 multiplier checks, and reruns
/// byte-identically.
#[test]
fn c4_annihilator_suite() {
    let mut done = 0u32;
    let mut rng = SplitMix64::new(0xa44);
    while done < 100 {
        let field = if rng.below(2) == 0 { gf(5) } else { gf(7) };
        let k = 2 + rng.below(2) as usize; // 2 or 3
        let d_individual = 1 + rng.below(2); // 1 or 2
        let max_points = (d_individual + 1).pow(k as u32) - 1;
        let count = 1 + rng.below(max_points);
        let points: Vec<Vec<u64>> =
            (0..count).map(|_| sample::random_point(&mut rng, field, k)).collect();
        let h = HittingSet::new(
            field,
            ClassDescriptor { model: Model::Formula, n: k, d: d_individual * k as u64, s: UNBOUNDED },
            points,
            Provenance::External,
        )
        .unwrap();
        let q = find_annihilator(&h, k, d_individual, 1 << 20).unwrap();
        assert!(!q.is_zero());
        for p in h.points() {
            assert_eq!(q.evaluate(p).unwrap(), 0, "annihilator must vanish on H");
        }
        assert!(q.max_individual_degree() as u64 <= d_individual);
        assert!(q.total_degree() as u64 <= k as u64 * d_individual);
        match check_multiples_vanish(&q, &h, 20, 0x5eed ^ done as u64).unwrap() {
            MultiplesOutcome::Pass { witnesses } => assert_eq!(witnesses, 20),
            MultiplesOutcome::Violation { .. } => panic!("a multiple of q failed to vanish"),
        }
        // determinism: identical rerun, byte-identical serialization
        let again = find_annihilator(&h, k, d_individual, 1 << 20).unwrap();
        assert_eq!(
            serde_json::to_vec(&q).unwrap(),
            serde_json::to_vec(&again).unwrap()
        );
        done += 1;
    }
    println!("[acceptance] criterion 4 (annihilator suite): PASS (100 hitting sets, 20 multipliers each)");
}

/// Criterion 5: the side-3 grid over GF(3) hits all 80 nonzero 2-variate
/// individual-degree-<=1 polynomials, and the side-5 grid over GF(5) hits
/// all 624, in under 10 seconds.
#[test]
fn c5_dlsz_exhaustive() {
    let started = Instant::now();
    let h3 = grid_hitting_set(gf(3), 2, 1, &[0, 1, 2], 1 << 20).unwrap();
    assert_eq!(verify_hitting_exhaustive(&h3, 2, 1, 1 << 26).unwrap(), None);
    let candidates_gf3 = 3u64.pow(4) - 1;
    assert_eq!(candidates_gf3, 80);

    let h5 = grid_hitting_set(gf(5), 2, 1, &[0, 1, 2, 3, 4], 1 << 20).unwrap();
    assert_eq!(verify_hitting_exhaustive(&h5, 2, 1, 1 << 26).unwrap(), None);
    let candidates_gf5 = 5u64.pow(4) - 1;
    assert_eq!(candidates_gf5, 624);

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 10, "DLSZ check took {elapsed:?}, budget is 10 s");
    println!(
        "[acceptance] criterion 5 (DLSZ exhaustive): PASS (80 + 624 polynomials in {elapsed:?})"
    );
}

/// Criterion 6: 50 engineered collapsing instances: the extracted lowest
/// coefficient is nonzero and exactly divisible by q, its degree is within
/// k*d*D, and for the r = 2 design the constructed formula has at most
/// 4*s*d*(D+1) leaves.
#[test]
fn c6_ki_extraction_suite() {
    let field = gf(5);
    let design = build_design(2, 2, 2).unwrap();
    // q depends on the shared variable of S_1 = {0,2} and S_4 = {1,2}, so
    // both substitute the same polynomial of y_2 and (x_0 - x_3) * R
    // collapses under the substitution.
    let q_choices = [
        MultiPoly::from_terms(field, 2, vec![(vec![0, 2], 1)]).unwrap(), // z1^2
        MultiPoly::from_terms(field, 2, vec![(vec![0, 2], 1), (vec![0, 1], 1)]).unwrap(),
        MultiPoly::from_terms(field, 2, vec![(vec![0, 2], 2), (vec![0, 0], 3)]).unwrap(),
    ];
    let mut rng = SplitMix64::new(0x6b1);
    let mut done = 0u32;
    while done < 50 {
        let q = rng.pick(&q_choices).clone();
        let sub = NwSubstitution::new(design.clone(), q).unwrap();
        let r_formula = sample::random_formula(&mut rng, field, 4, 6);
        let p = {
            let mut b = Circuit::builder(field, CircuitKind::Formula);
            let x0 = b.input(0);
            let minus = b.constant(field.neg(1));
            let x3 = b.input(3);
            let neg = b.mul(vec![minus, x3]);
            let diff = b.add(vec![x0, neg]);
            let r_root = b.splice(&r_formula);
            let prod = b.mul(vec![diff, r_root]);
            b.finish(prod).unwrap()
        };
        if p.expand_default().unwrap().is_zero() {
            continue; // R zeroed the product; draw another
        }
        let res = ki_extract(&p, &sub, KiBudget::default()).unwrap();
        assert!(!res.p_tilde.is_zero());
        assert_eq!(sub.q().mul(&res.quotient).unwrap(), res.p_tilde, "division certificate");
        assert!(
            res.bounds.degree <= res.bounds.degree_bound,
            "degree {} above k*d*D = {}",
            res.bounds.degree,
            res.bounds.degree_bound
        );
        let r2 = res.bounds.r2_bound.expect("r = 2 design");
        assert!(
            res.bounds.leaf_count <= r2,
            "formula has {} leaves, bound 4*s*d*(D+1) = {r2}",
            res.bounds.leaf_count
        );
        done += 1;
    }
    println!("[acceptance] criterion 6 (KI extraction): PASS (50 engineered instances)");
}

fn micro_gf5_params() -> ToyParams {
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
        field: gf(5),
        n0: 2,
        epsilon: rat(1),
        s: 2,
        stage: 1,
        base: BaseGeneratorKind::Grid { sample: vec![0, 1] },
        overrides,
        budgets: Budgets::default(),
        parallelism: Parallelism::default(),
    }
}

fn micro_gf3_params() -> ToyParams {
    let mut overrides = BTreeMap::new();
    overrides.insert(
        1,
        StageOverride {
            design: Some((2, 2, 1)),
            sample: Some(vec![0, 1, 2]),
            d_individual: None,
        },
    );
    ToyParams {
        field: gf(3),
        n0: 2,
        epsilon: rat(1),
        s: 2,
        stage: 1,
        base: BaseGeneratorKind::Grid { sample: vec![0] },
        overrides,
        budgets: Budgets::default(),
        parallelism: Parallelism::default(),
    }
}

/// Criterion 7: the GF(5) micro-schedule (stage-1 design (4,2,2), grid side
/// 3) terminates and emits 81 points, the stage annihilator vanishes on the
/// base set, and every emitted point re-derives as the image of its grid
/// point; the smallest configured run (GF(3), m = 2) passes the exhaustive
/// hitting check for its enumerable micro-class. All under 120 seconds.
#[test]
fn c7_bootstrap_toy_run() {
    let started = Instant::now();

    let params = micro_gf5_params();
    let run = bootstrap::run_toy(&params).unwrap();
    assert_eq!(run.emitted.len(), 81, "log: {:?}", run.log);
    let stage = &run.stages[0];

    // the annihilator vanishes on the regenerated base set
    let mut log = Vec::new();
    let base = params
        .base
        .generate(params.field, params.n0 as usize, 64, &params.budgets, &mut log)
        .unwrap();
    assert_eq!(base.len(), stage.annihilated_points);
    for p in base.points() {
        assert_eq!(stage.annihilator.evaluate(p).unwrap(), 0);
    }

    // every emitted point re-derives as the substituted-polynomial image of
    // its evaluation point, recomputed through an independent route
    let sub = NwSubstitution::new(stage.design.clone(), stage.annihilator.clone()).unwrap();
    let gammas: Vec<MultiPoly> = (0..stage.design.num_sets())
        .map(|i| {
            let g = sub.substituted_poly(i).unwrap();
            g.relabel(&(0..g.num_vars()).map(Some).collect::<Vec<_>>(), 4).unwrap()
        })
        .collect();
    let sample = [0u64, 1, 2];
    for (idx, emitted) in run.emitted.iter().enumerate() {
        let mut rest = idx;
        let a: Vec<u64> = (0..4)
            .map(|_| {
                let v = sample[rest % 3];
                rest /= 3;
                v
            })
            .collect();
        let image: Vec<u64> = gammas.iter().map(|g| g.evaluate(&a).unwrap()).collect();
        assert_eq!(&image, emitted, "grid point {idx} image mismatch");
    }

    // smallest configured run: exhaustive hitting check over GF(3)
    let small = bootstrap::run_toy(&micro_gf3_params()).unwrap();
    assert_eq!(small.emitted.len(), 81);
    assert_eq!(small.output.class().n, 2);
    let verdict = verify_hitting_exhaustive(&small.output, 2, 1, 1 << 26).unwrap();
    assert_eq!(verdict, None, "micro-class counterexample: {verdict:?}");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 120, "toy run took {elapsed:?}, budget is 120 s");
    println!(
        "[acceptance] criterion 7 (bootstrap toy): PASS (81 points emitted, {} distinct; \
         GF(3) micro-class verified; {elapsed:?})",
        run.output.len()
    );
}

/// Criterion 8: report accounting for n0 = 2^16, eps = 1, s* = 2^64: stage
/// count <= 6, the t_i recurrence equals the closed form at every previewed
/// stage, base calls <= 2^b with exponents within B * t_{b-1}^2, all exact,
/// in under 5 seconds.
#[test]
fn c8_bootstrap_report_accounting() {
    let started = Instant::now();
    let report = bootstrap::report(1 << 16, rat(1), BigUint::from(1u128 << 64), None).unwrap();
    assert!(report.stage_count <= 6, "stage count {}", report.stage_count);
    for stage in &report.stages {
        if stage.i >= 2 {
            assert_eq!(
                stage.closed_form_matches,
                Some(true),
                "closed form diverges at stage {}",
                stage.i
            );
        }
    }
    assert!(report.stages.iter().filter(|s| s.i >= 2).count() >= 5);
    let bound: BigUint = report.base_call_bound.parse().unwrap();
    assert!(BigUint::from(report.base_call_count) <= bound);
    assert!(report.bounds_hold, "exponent/call bounds failed");
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 5, "report took {elapsed:?}, budget is 5 s");
    println!(
        "[acceptance] criterion 8 (report accounting): PASS (b = {}, {} base calls, \
         max exponent {}, {elapsed:?})",
        report.stage_count, report.base_call_count, report.max_base_exponent
    );
}

/// Criterion 9: identical seeds give byte-identical artifacts across
/// reruns, for every artifact kind the suite produces.
#[test]
fn c9_determinism() {
    // designs
    let d1 = serde_json::to_vec(&build_design(8, 2, 3).unwrap()).unwrap();
    let d2 = serde_json::to_vec(&build_design(8, 2, 3).unwrap()).unwrap();
    assert_eq!(d1, d2);

    // grids (text format)
    let g1 = grid_hitting_set(gf(7), 2, 2, &[0, 1, 2, 3], 1 << 20).unwrap().to_text();
    let g2 = grid_hitting_set(gf(7), 2, 2, &[0, 1, 2, 3], 1 << 20).unwrap().to_text();
    assert_eq!(g1, g2);

    // annihilators
    let h = HittingSet::from_text(&g1).unwrap();
    let q1 = serde_json::to_vec(&find_annihilator(&h, 2, 4, 1 << 20).unwrap()).unwrap();
    let q2 = serde_json::to_vec(&find_annihilator(&h, 2, 4, 1 << 20).unwrap()).unwrap();
    assert_eq!(q1, q2);

    // formulas derived from polynomials
    let q: MultiPoly = serde_json::from_slice(&q1).unwrap();
    let f1 = serde_json::to_vec(&sparse_to_formula(&q)).unwrap();
    let f2 = serde_json::to_vec(&sparse_to_formula(&q)).unwrap();
    assert_eq!(f1, f2);

    // toy bootstrap runs, sequential vs parallel and rerun
    let mut params = micro_gf5_params();
    let r1 = bootstrap::run_toy(&params).unwrap();
    params.parallelism = Parallelism::Sequential;
    let r2 = bootstrap::run_toy(&params).unwrap();
    assert_eq!(r1.output.to_text(), r2.output.to_text());
    assert_eq!(r1.emitted, r2.emitted);

    // cost reports
    let c1 =
        serde_json::to_vec(&bootstrap::report(16, rat(1), BigUint::from(1u64 << 40), None).unwrap())
            .unwrap();
    let c2 =
        serde_json::to_vec(&bootstrap::report(16, rat(1), BigUint::from(1u64 << 40), None).unwrap())
            .unwrap();
    assert_eq!(c1, c2);

    println!("[acceptance] criterion 9 (determinism): PASS (designs, grids, annihilators, formulas, toy runs, reports)");
}
