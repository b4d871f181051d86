//! The recursive hitting-set generator: a materializing toy mode for
//! desk-scale runs and a symbolic report mode that carries every cardinality
//! as an exact exponent of s.
//!
//! Toy mode follows the three recursion branches faithfully -- annihilate
//! the deeper set, build the stage design, push the evaluation set through
//! the substituted polynomial -- but accepts per-stage overrides for the
//! design triple, the evaluation sample and the annihilator degree, since
//! the full-scale parameters are never materializable. Every inequality
//! the full-scale argument needs is evaluated and logged, so a toy run is
//! explicit about which guarantees actually apply to it.

use crate::bootstrap::schedule::{
    parse_rational, rational_to_string, reference_schedule, Schedule, MAX_STAGE_PREVIEW,
};
use crate::budget::Budgets;
use crate::design::{build_design_with, verify_design_with, Design};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hitting::{find_annihilator, ClassDescriptor, HittingSet, Provenance};
use crate::multipoly::MultiPoly;
use crate::par::{self, Parallelism};
use crate::circuit::Model;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BaseGeneratorKind {
    /// The trivial grid sample^{n0}; claims exponent n0, which violates the
    /// n0 - epsilon hypothesis and is logged as such.
    Grid { sample: Vec<u64> },
    /// Greedy minimal hitting set for the enumerable class of n0-variate
    /// polynomials of the given individual degree: deterministic set cover
    /// over the polynomial/point incidence.
    Exhaustive { d_individual: u64 },
}

impl BaseGeneratorKind {
    pub fn generate(
        &self,
        field: Field,
        n0: usize,
        s_label: u64,
        budgets: &Budgets,
        log: &mut Vec<String>,
    ) -> Result<HittingSet> {
        match self {
            BaseGeneratorKind::Grid { sample } => {
                log.push(format!(
                    "base generator: trivial grid of side {} claims exponent n0 = {n0}, \
                     violating the n0 - epsilon hypothesis",
                    sample.len()
                ));
                if (sample.len() as u64) <= s_label {
                    log.push(format!(
                        "base grid side {} does not exceed the degree label {s_label}; \
                         the grid guarantee does not apply",
                        sample.len()
                    ));
                }
                let count = (sample.len() as u64)
                    .checked_pow(n0 as u32)
                    .filter(|&c| c <= budgets.grid_points)
                    .ok_or_else(|| {
                        Error::budget(
                            "base grid points",
                            format!("{}^{n0}", sample.len()),
                            budgets.grid_points,
                        )
                    })?;
                let side = sample.len() as u64;
                let points = (0..count)
                    .map(|idx| {
                        let mut rest = idx;
                        (0..n0)
                            .map(|_| {
                                let c = sample[(rest % side) as usize];
                                rest /= side;
                                c
                            })
                            .collect()
                    })
                    .collect();
                HittingSet::new(
                    field,
                    ClassDescriptor { model: Model::Formula, n: n0, d: s_label, s: s_label },
                    points,
                    Provenance::BaseGenerator,
                )
            }
            BaseGeneratorKind::Exhaustive { d_individual } => {
                let h = greedy_minimal_hitting_set(field, n0, *d_individual, s_label, budgets)?;
                log.push(format!(
                    "base generator: greedy cover for the degree-{d_individual} micro-class \
                     produced {} points",
                    h.len()
                ));
                Ok(h)
            }
        }
    }
}

/// Deterministic greedy set cover: points in odometer order, each round
/// picks the point covering the most still-uncovered nonzero polynomials
/// (lowest index wins ties).
fn greedy_minimal_hitting_set(
    field: Field,
    n: usize,
    d_individual: u64,
    s_label: u64,
    budgets: &Budgets,
) -> Result<HittingSet> {
    let q = field.order();
    let monomials = (d_individual + 1)
        .checked_pow(n as u32)
        .filter(|&m| m <= 63)
        .ok_or_else(|| Error::budget("base class monomials", "overflow", 63u64))?;
    let candidates = BigUint::from(q).pow(monomials as u32);
    if candidates > BigUint::from(budgets.enum_candidates) {
        return Err(Error::budget("base class size", candidates, budgets.enum_candidates));
    }
    let candidates = candidates.to_u64().expect("bounded") - 1; // drop the zero polynomial
    let num_points = q.pow(n as u32) as usize;

    // point -> list of polynomial indices it hits
    let point_coords = |idx: u64| -> Vec<u64> {
        let mut rest = idx;
        (0..n)
            .map(|_| {
                let c = rest % q;
                rest /= q;
                c
            })
            .collect()
    };
    let eval = |poly_index: u64, point: &[u64]| -> u64 {
        let mut acc = 0u64;
        let mut rest = poly_index;
        let mut mono = 0u64;
        while rest > 0 {
            let c = rest % q;
            if c != 0 {
                let mut term = c;
                let mut m = mono;
                for &x in point {
                    let e = m % (d_individual + 1);
                    m /= d_individual + 1;
                    if e > 0 {
                        term = field.mul(term, field.pow(x, e));
                    }
                }
                acc = field.add(acc, term);
            }
            rest /= q;
            mono += 1;
        }
        acc
    };

    // Precompute the incidence once: one bitset per point, bit c set when
    // the point hits candidate polynomial c.
    let words = (candidates as usize + 64) / 64;
    let points: Vec<Vec<u64>> = (0..num_points as u64).map(point_coords).collect();
    let incidence: Vec<Vec<u64>> = par::ordered_map(Parallelism::default(), num_points, |pi| {
        let mut bits = vec![0u64; words];
        for c in 1..=candidates {
            if eval(c, &points[pi]) != 0 {
                bits[(c / 64) as usize] |= 1u64 << (c % 64);
            }
        }
        bits
    });

    let mut covered = vec![0u64; words];
    let mut uncovered = candidates;
    let mut picked: Vec<Vec<u64>> = Vec::new();
    while uncovered > 0 {
        let (best, best_gain) = incidence
            .iter()
            .enumerate()
            .map(|(pi, bits)| {
                let gain: u64 = bits
                    .iter()
                    .zip(&covered)
                    .map(|(b, c)| (b & !c).count_ones() as u64)
                    .sum();
                (pi, gain)
            })
            .max_by_key(|&(pi, gain)| (gain, std::cmp::Reverse(pi)))
            .unwrap();
        if best_gain == 0 {
            return Err(Error::domain(
                "greedy cover stalled: some nonzero polynomial vanishes everywhere",
            ));
        }
        for (c, b) in covered.iter_mut().zip(&incidence[best]) {
            *c |= b;
        }
        uncovered -= best_gain;
        picked.push(points[best].clone());
    }
    HittingSet::new(
        field,
        ClassDescriptor { model: Model::Formula, n, d: s_label, s: s_label },
        picked,
        Provenance::BaseGenerator,
    )
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct StageOverride {
    /// Replacement (k, c, r) for the stage design, with l = k^c.
    pub design: Option<(u64, u32, u64)>,
    /// Grid sample for stages 1 and 2 (defaults to the whole field).
    pub sample: Option<Vec<u64>>,
    /// Annihilator individual degree (defaults to the minimal feasible one).
    pub d_individual: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct ToyParams {
    pub field: Field,
    pub n0: u64,
    pub epsilon: BigRational,
    pub s: u64,
    pub stage: u32,
    pub base: BaseGeneratorKind,
    pub overrides: BTreeMap<u32, StageOverride>,
    pub budgets: Budgets,
    pub parallelism: Parallelism,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageArtifacts {
    pub stage: u32,
    pub s_label: u64,
    pub annihilated_points: usize,
    pub d_individual: u64,
    pub annihilator: MultiPoly,
    pub design: Design,
    pub eval_cardinality: usize,
    /// Materialized image points: one per evaluation point.
    pub emitted_cardinality: usize,
    /// After deduplication (image points may coincide).
    pub distinct_cardinality: usize,
    #[serde(skip)]
    pub emitted_points: Vec<Vec<u64>>,
}

#[derive(Debug, Clone)]
pub struct ToyRun {
    /// Deduplicated point set, the hitting-set file's contents.
    pub output: HittingSet,
    /// The full image list of the final stage, one point per evaluation
    /// point; equals `output` when no images collide.
    pub emitted: Vec<Vec<u64>>,
    pub stages: Vec<StageArtifacts>,
    pub log: Vec<String>,
}

/// Materializes the hitting set for the configured stage.
pub fn run_toy(params: &ToyParams) -> Result<ToyRun> {
    let schedule = reference_schedule(
        params.n0,
        params.epsilon.clone(),
        BigUint::from(u64::MAX), // stage is explicit in toy mode
    )?;
    let mut log: Vec<String> = schedule.warnings.clone();
    let mut stages = Vec::new();
    let output = if params.stage == 0 {
        log.push("stage 0 requested: returning the empty set (no construction)".into());
        HittingSet::new(
            params.field,
            ClassDescriptor { model: Model::Formula, n: params.n0 as usize, d: params.s, s: params.s },
            Vec::new(),
            Provenance::External,
        )?
    } else {
        toy_stage(params, &schedule, params.stage, params.s, &mut stages, &mut log)?
    };
    let emitted = stages
        .last()
        .map(|a: &StageArtifacts| a.emitted_points.clone())
        .unwrap_or_else(|| output.points().to_vec());
    Ok(ToyRun { output, emitted, stages, log })
}

fn toy_stage(
    params: &ToyParams,
    schedule: &Schedule,
    stage: u32,
    s_label: u64,
    stages: &mut Vec<StageArtifacts>,
    log: &mut Vec<String>,
) -> Result<HittingSet> {
    let field = params.field;
    let budgets = &params.budgets;
    let overrides = params.overrides.get(&stage).cloned().unwrap_or_default();

    // The set the stage annihilator must vanish on.
    let deeper = match stage {
        1 => {
            let label = label_pow_rational(s_label, &schedule.big_b);
            params.base.generate(field, params.n0 as usize, label, budgets, log)?
        }
        _ => {
            let label = s_label.saturating_pow(5);
            toy_stage(params, schedule, stage - 1, label, stages, log)?
        }
    };

    // Design triple: overridden or derived from the reference schedule with k
    // rounded down to a power of two.
    let (k, c, r) = match overrides.design {
        Some(triple) => triple,
        None => {
            let schedule_k = match stage {
                1 => params.n0,
                _ => deeper.class().n as u64,
            };
            let k = prev_power_of_two(schedule_k);
            if k != schedule_k {
                log.push(format!(
                    "stage {stage}: k = {schedule_k} rounded down to the power of two {k}"
                ));
            }
            let (c, r) = match stage {
                1 => (5u32, 2u64),
                2 => (2, 10.min(k)),
                _ => (2, 2),
            };
            (k, c, r)
        }
    };
    if k > deeper.class().n as u64 {
        return Err(Error::parameter(format!(
            "stage {stage}: design k = {k} exceeds the {}-coordinate deeper set",
            deeper.class().n
        )));
    }

    // Annihilator degree: minimal feasible unless overridden. Feasibility
    // counts the distinct first-k projections actually constraining the
    // linear system.
    let distinct = {
        let mut seen = std::collections::HashSet::new();
        deeper.points().iter().filter(|p| seen.insert(p[..k as usize].to_vec())).count()
    };
    let d_individual = match overrides.d_individual {
        Some(d) => d,
        None => {
            let mut d = 0u64;
            while (d + 1).saturating_pow(k as u32) <= distinct as u64 {
                d += 1;
            }
            log.push(format!(
                "stage {stage}: annihilator degree set to the minimal feasible {d} \
                 ({} distinct projections); the full-scale degree formula is not materializable here",
                distinct
            ));
            d
        }
    };

    if d_individual >= field.order() {
        // materialized degrees must stay below the field order for the
        // stage's evaluation bookkeeping to mean anything
        return Err(Error::FieldTooSmall {
            needed: (d_individual + 1).to_string(),
            order: field.order().to_string(),
        });
    }
    let annihilator =
        find_annihilator(&deeper, k as usize, d_individual, budgets.annihilator_monomials)?;
    let design = build_design_with(k, c, r, budgets.design(), params.parallelism)?;
    if let Some(v) = verify_design_with(&design, params.parallelism) {
        return Err(Error::domain(format!("stage {stage} design failed verification: {v}")));
    }
    let l = design.l;
    let m = design.num_sets();

    // Evaluation set: a grid for stages 1 and 2, the deeper generator for
    // stage >= 3.
    let eval_points: Vec<Vec<u64>> = match stage {
        1 | 2 => {
            let sample = overrides
                .sample
                .clone()
                .unwrap_or_else(|| field.elements().collect());
            let needed = match stage {
                1 => label_pow_rational(s_label, &schedule.big_b),
                _ => s_label.saturating_pow(3),
            };
            if (sample.len() as u64) < needed {
                log.push(format!(
                    "stage {stage}: evaluation sample of size {} is below the schedule's |S| >= {needed}",
                    sample.len()
                ));
            }
            let count = (sample.len() as u64)
                .checked_pow(l as u32)
                .filter(|&n| n <= budgets.toy_points)
                .ok_or_else(|| {
                    Error::budget(
                        format!("stage {stage} evaluation grid"),
                        format!("{}^{l}", sample.len()),
                        budgets.toy_points,
                    )
                })?;
            let side = sample.len() as u64;
            (0..count)
                .map(|idx| {
                    let mut rest = idx;
                    (0..l as usize)
                        .map(|_| {
                            let v = sample[(rest % side) as usize];
                            rest /= side;
                            v
                        })
                        .collect()
                })
                .collect()
        }
        _ => {
            let t_prev = schedule.t(stage - 1);
            let exponent = BigRational::from_integer(20.into()) * t_prev;
            let label = label_pow_rational(s_label, &exponent);
            let deeper_eval = toy_stage(params, schedule, stage - 1, label, stages, log)?;
            if deeper_eval.class().n != l as usize {
                return Err(Error::parameter(format!(
                    "stage {stage}: evaluation set is {}-dimensional but the design universe is {l}; \
                     override the stage designs coherently",
                    deeper_eval.class().n
                )));
            }
            deeper_eval.points().to_vec()
        }
    };

    if eval_points.len() as u64 > budgets.toy_points {
        return Err(Error::budget(
            format!("stage {stage} materialized points"),
            eval_points.len(),
            budgets.toy_points,
        ));
    }

    // NWify image: output_j = annihilator(a | S_j).
    let sets: Vec<Vec<usize>> = design
        .sets
        .iter()
        .map(|s| s.iter().map(|&v| v as usize).collect())
        .collect();
    let q_ref = &annihilator;
    let points: Vec<Vec<u64>> = par::ordered_map(params.parallelism, eval_points.len(), |pi| {
        let a = &eval_points[pi];
        sets.iter()
            .map(|set| {
                let restricted: Vec<u64> = set.iter().map(|&v| a[v]).collect();
                q_ref.evaluate(&restricted).expect("arity matches k")
            })
            .collect()
    });

    let output = HittingSet::new(
        field,
        ClassDescriptor { model: Model::Formula, n: m, d: s_label, s: s_label },
        points.clone(),
        Provenance::BootstrapStage(stage),
    )?;
    if output.len() != eval_points.len() {
        log.push(format!(
            "stage {stage}: {} of {} image points collided and were deduplicated",
            eval_points.len() - output.len(),
            eval_points.len()
        ));
    }

    stages.push(StageArtifacts {
        stage,
        s_label,
        annihilated_points: deeper.len(),
        d_individual,
        annihilator,
        design,
        eval_cardinality: eval_points.len(),
        emitted_cardinality: points.len(),
        distinct_cardinality: output.len(),
        emitted_points: points,
    });
    Ok(output)
}

/// The toy hard-polynomial pipeline: bootstrap, then annihilate the output.
pub fn derive_hard_polynomial_toy(
    params: &ToyParams,
    n: usize,
    d_individual: u64,
) -> Result<(MultiPoly, ToyRun)> {
    let started = std::time::Instant::now();
    let run = run_toy(params)?;
    let q = find_annihilator(&run.output, n, d_individual, params.budgets.annihilator_monomials)?;
    let mut run = run;
    run.log.push(format!(
        "hard polynomial: {} terms over {n} variables from {} points in {} ms",
        q.num_terms(),
        run.output.len(),
        started.elapsed().as_millis()
    ));
    Ok((q, run))
}

fn prev_power_of_two(v: u64) -> u64 {
    if v == 0 {
        return 1;
    }
    1u64 << (63 - v.leading_zeros())
}

/// ceil(s^e) saturated into u64, used for toy-mode size labels.
fn label_pow_rational(s: u64, e: &BigRational) -> u64 {
    if s <= 1 {
        return s;
    }
    if e.is_negative() || e.is_zero() {
        return 1;
    }
    // s^(p/q) = (s^p)^(1/q); bail out to saturation when s^p is huge
    let p = e.numer().to_biguint().expect("positive");
    let q = e.denom().to_u32().unwrap_or(u32::MAX);
    let bits_estimate = (64 - s.leading_zeros()) as u128 * p.to_u128().unwrap_or(u128::MAX);
    if bits_estimate > 4096 {
        return u64::MAX;
    }
    let p = p.to_u32().expect("bounded by bits estimate");
    let powed = BigUint::from(s).pow(p);
    let root = powed.nth_root(q);
    let exact = root.pow(q) == powed;
    let ceiled = if exact { root } else { root + 1u32 };
    ceiled.to_u64().unwrap_or(u64::MAX)
}

// ---------------------------------------------------------------------------
// Report mode
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageReport {
    pub i: u32,
    pub n: String,
    pub t: String,
    pub t_closed_form: Option<String>,
    pub closed_form_matches: Option<bool>,
    pub design: [String; 3],
    /// s-exponent multipliers fed to the deeper recursive calls.
    pub recursion_exponents: Vec<String>,
    /// t_i: the schedule's bound on the output exponent at this stage.
    pub output_exponent_bound: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaseCallReport {
    /// The base generator is invoked with size s^(this exponent).
    pub s_exponent: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CostReport {
    pub n0: u64,
    pub epsilon: String,
    pub s: String,
    pub stage: u32,
    pub stage_count: u32,
    pub big_b: String,
    pub stages: Vec<StageReport>,
    pub cardinality_exponent: String,
    pub cardinality_formula: String,
    pub cardinality_decimal: Option<String>,
    pub base_call_count: u64,
    pub base_call_bound: String,
    pub base_calls: Vec<BaseCallReport>,
    pub max_base_exponent: String,
    pub base_exponent_bound: String,
    pub bounds_hold: bool,
    pub warnings: Vec<String>,
}

/// Symbolic accounting of one generator invocation: exact exponents, the
/// recursion tree's base calls, and the schedule preview with the
/// closed-form check. No points are materialized.
pub fn report(n0: u64, epsilon: BigRational, s_star: BigUint, stage: Option<u32>) -> Result<CostReport> {
    let schedule = reference_schedule(n0, epsilon.clone(), s_star.clone())?;
    let b = schedule.stage_count();
    let stage = stage.unwrap_or_else(|| b.max(1));
    if stage == 0 {
        return Err(Error::parameter("report stage must be at least 1"));
    }
    if stage > MAX_STAGE_PREVIEW {
        return Err(Error::parameter(format!(
            "report stage {stage} exceeds the supported preview depth {MAX_STAGE_PREVIEW}"
        )));
    }

    let mut calls: Vec<BigRational> = Vec::new();
    let exponent = accumulate(&schedule, stage, BigRational::one(), &mut calls);

    let preview_to = stage.max(b).clamp(6, MAX_STAGE_PREVIEW);
    let mut stage_reports = Vec::new();
    for i in 1..=preview_to {
        let t = schedule.t(i);
        let closed = schedule.t_closed_form(i);
        let matches = closed.as_ref().map(|c| *c == t);
        let n_str = schedule
            .n(i)
            .map(|n| n.to_string())
            .unwrap_or_else(|_| "beyond exact tower arithmetic".to_string());
        stage_reports.push(StageReport {
            i,
            n: n_str,
            t: rational_to_string(&t),
            t_closed_form: closed.as_ref().map(rational_to_string),
            closed_form_matches: matches,
            design: stage_design_strings(&schedule, i),
            recursion_exponents: stage_recursion_strings(&schedule, i),
            output_exponent_bound: rational_to_string(&schedule.t(i)),
        });
    }

    let max_exponent = calls.iter().max().cloned().unwrap_or_else(BigRational::zero);
    let t_prev = schedule.t(stage - 1);
    let exponent_bound = &schedule.big_b * &t_prev * &t_prev;
    let call_bound = BigUint::one() << stage as usize;
    let bounds_hold = BigUint::from(calls.len() as u64) <= call_bound
        && max_exponent <= exponent_bound
        && stage_reports
            .iter()
            .all(|s| s.closed_form_matches.unwrap_or(true));

    let formula = cardinality_formula(&schedule, stage);
    let decimal = materialize_cardinality(&s_star, &exponent);

    Ok(CostReport {
        n0,
        epsilon: rational_to_string(&epsilon),
        s: s_star.to_string(),
        stage,
        stage_count: b,
        big_b: rational_to_string(&schedule.big_b),
        stages: stage_reports,
        cardinality_exponent: rational_to_string(&exponent),
        cardinality_formula: formula,
        cardinality_decimal: decimal,
        base_call_count: calls.len() as u64,
        base_call_bound: call_bound.to_string(),
        base_calls: calls
            .iter()
            .map(|e| BaseCallReport { s_exponent: rational_to_string(e) })
            .collect(),
        max_base_exponent: rational_to_string(&max_exponent),
        base_exponent_bound: rational_to_string(&exponent_bound),
        bounds_hold,
        warnings: schedule.warnings.clone(),
    })
}

/// Exact output-cardinality exponent of Hitting-Set(i, s^mult), pushing one
/// base-call exponent per leaf of the recursion tree.
fn accumulate(
    schedule: &Schedule,
    i: u32,
    mult: BigRational,
    calls: &mut Vec<BigRational>,
) -> BigRational {
    match i {
        0 | 1 => {
            let call = &schedule.big_b * &mult;
            calls.push(call.clone());
            // grid S^(n0^5) with |S| = s^(mult * B)
            let l = BigUint::from(schedule.n0).pow(5);
            call * BigRational::from_integer(l.into())
        }
        2 => {
            accumulate(schedule, 1, &mult * BigRational::from_integer(5.into()), calls);
            // grid S^(n1^2) with |S| = s^(3 mult)
            let n1_sq = BigUint::from(schedule.n0).pow(16);
            BigRational::from_integer(3.into()) * &mult * BigRational::from_integer(n1_sq.into())
        }
        _ => {
            accumulate(schedule, i - 1, &mult * BigRational::from_integer(5.into()), calls);
            let t_prev = schedule.t(i - 1);
            let eval_mult = BigRational::from_integer(20.into()) * &t_prev * &mult;
            accumulate(schedule, i - 1, eval_mult, calls)
        }
    }
}

/// (l, k, r) of stage i, recomputed from the tower arithmetic so preview
/// stages beyond the stop threshold still print exactly.
fn stage_design_strings(schedule: &Schedule, i: u32) -> [String; 3] {
    if let Some(s) = schedule.stage(i) {
        return [s.design.l.to_string(), s.design.k.to_string(), s.design.r.to_string()];
    }
    let fallback = || match i {
        1 => [format!("{}^5", schedule.n0), schedule.n0.to_string(), "2".to_string()],
        2 => {
            let n1 = BigUint::from(schedule.n0).pow(8);
            [format!("{n1}^2"), n1.to_string(), "10".to_string()]
        }
        _ => ["n_{i-1}".into(), "sqrt(n_{i-1})".into(), "n_{i-1}^(1/4)".into()],
    };
    match i {
        1 | 2 => fallback(),
        _ => {
            let Ok(prev) = schedule.n(i - 1) else { return fallback() };
            let (Ok((k, _)), Ok((r, _))) = (prev.sqrt(), prev.fourth_root()) else {
                return fallback();
            };
            [prev.to_string(), k.to_string(), r.to_string()]
        }
    }
}

fn stage_recursion_strings(schedule: &Schedule, i: u32) -> Vec<String> {
    if let Some(s) = schedule.stage(i) {
        return s.recursion_exponents.iter().map(rational_to_string).collect();
    }
    match i {
        1 => vec![rational_to_string(&schedule.big_b)],
        2 => vec!["5".to_string()],
        _ => {
            let twenty_t = BigRational::from_integer(20.into()) * schedule.t(i - 1);
            vec!["5".to_string(), rational_to_string(&twenty_t)]
        }
    }
}

fn cardinality_formula(schedule: &Schedule, stage: u32) -> String {
    match stage {
        0 | 1 => format!(
            "(s^{})^({}^5)",
            rational_to_string(&schedule.big_b),
            schedule.n0
        ),
        2 => {
            let n1 = BigUint::from(schedule.n0).pow(8);
            format!("(s^3)^({n1}^2)")
        }
        i => format!("s^(20*t_{}^2) = s^(t_{i})", i - 1),
    }
}

/// Decimal form of s^e when it is an integer of manageable width.
fn materialize_cardinality(s: &BigUint, e: &BigRational) -> Option<String> {
    if !e.denom().is_one() || e.is_negative() {
        return None;
    }
    let exp = e.numer().to_biguint()?.to_u64()?;
    let bits = s.bits().checked_mul(exp)?;
    if bits > 16_384 {
        return None;
    }
    Some(s.pow(exp as u32).to_string())
}

/// Parses an epsilon field that may be an integer, float-free rational
/// string like "1/2", or JSON number.
pub fn epsilon_from_json(v: &serde_json::Value) -> Result<BigRational> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_u64() {
                Ok(BigRational::from_integer(i.into()))
            } else {
                Err(Error::format("epsilon must be an integer or a rational string like \"1/2\""))
            }
        }
        serde_json::Value::String(s) => parse_rational(s),
        _ => Err(Error::format("epsilon must be an integer or a rational string like \"1/2\"")),
    }
}
