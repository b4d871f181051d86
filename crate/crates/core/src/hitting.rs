//! Grid hitting sets, randomized identity testing, exhaustive hitting-set
//! verification at desk scale, and the annihilator construction that turns a
//! hitting set into a polynomial no small formula computes.

use crate::circuit::{sparse_to_formula, Circuit, Model};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::nullspace_vector;
use crate::multipoly::MultiPoly;
use crate::par::{self, Parallelism};
use crate::rng::SplitMix64;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{BufRead, Write};

/// Size bound meaning "no bound" in a class descriptor.
pub const UNBOUNDED: u64 = u64::MAX;

/// Names the class of n-variate polynomials of degree at most d computable
/// by size-at-most-s objects of the given model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDescriptor {
    pub model: Model,
    pub n: usize,
    pub d: u64,
    pub s: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Grid,
    BootstrapStage(u32),
    External,
    BaseGenerator,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Grid => write!(f, "grid"),
            Provenance::BootstrapStage(i) => write!(f, "bootstrap-stage-{i}"),
            Provenance::External => write!(f, "external"),
            Provenance::BaseGenerator => write!(f, "base-generator"),
        }
    }
}

impl std::str::FromStr for Provenance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Provenance> {
        match s {
            "grid" => Ok(Provenance::Grid),
            "external" => Ok(Provenance::External),
            "base-generator" => Ok(Provenance::BaseGenerator),
            other => other
                .strip_prefix("bootstrap-stage-")
                .and_then(|i| i.parse().ok())
                .map(Provenance::BootstrapStage)
                .ok_or_else(|| Error::format(format!("unknown provenance {other:?}"))),
        }
    }
}

/// A list of points in F^n together with the class it claims to hit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSet {
    field: Field,
    class: ClassDescriptor,
    points: Vec<Vec<u64>>,
    provenance: Provenance,
}

impl HittingSet {
    /// Deduplicates points (first occurrence kept) and validates coordinates.
    pub fn new(
        field: Field,
        class: ClassDescriptor,
        points: Vec<Vec<u64>>,
        provenance: Provenance,
    ) -> Result<HittingSet> {
        let mut seen = std::collections::HashSet::with_capacity(points.len());
        let mut out = Vec::with_capacity(points.len());
        for p in points {
            if p.len() != class.n {
                return Err(Error::domain(format!(
                    "point has {} coordinates, class is {}-variate",
                    p.len(),
                    class.n
                )));
            }
            for &c in &p {
                if !field.is_canonical(c) {
                    return Err(Error::domain(format!("coordinate {c} not canonical in {field}")));
                }
            }
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
        Ok(HittingSet { field, class, points: out, provenance })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn class(&self) -> ClassDescriptor {
        self.class
    }

    pub fn points(&self) -> &[Vec<u64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Plain-text format, one point per line:
    /// header `field n d s count provenance` (s printed as `inf` when
    /// unbounded), then space-separated canonical coordinates.
    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        let s = if self.class.s == UNBOUNDED { "inf".to_string() } else { self.class.s.to_string() };
        writeln!(
            w,
            "{} {} {} {} {} {}",
            self.field, self.class.n, self.class.d, s, self.points.len(), self.provenance
        )
        .map_err(|e| Error::Io(e.to_string()))?;
        for p in &self.points {
            let line: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            writeln!(w, "{}", line.join(" ")).map_err(|e| Error::Io(e.to_string()))?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("format is ASCII")
    }

    pub fn read_from(r: &mut impl BufRead) -> Result<HittingSet> {
        let mut header = String::new();
        r.read_line(&mut header).map_err(|e| Error::Io(e.to_string()))?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        if tokens.len() != 6 {
            return Err(Error::format(format!(
                "hitting-set header needs 6 fields `field n d s count provenance`, got {}",
                tokens.len()
            )));
        }
        let field: Field = tokens[0].parse()?;
        let n: usize = tokens[1].parse().map_err(|_| Error::format("bad n in header"))?;
        let d: u64 = tokens[2].parse().map_err(|_| Error::format("bad d in header"))?;
        let s: u64 = if tokens[3] == "inf" {
            UNBOUNDED
        } else {
            tokens[3].parse().map_err(|_| Error::format("bad s in header"))?
        };
        let count: usize = tokens[4].parse().map_err(|_| Error::format("bad count in header"))?;
        let provenance: Provenance = tokens[5].parse()?;
        let mut points = Vec::with_capacity(count);
        for line in r.lines() {
            let line = line.map_err(|e| Error::Io(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let p: Vec<u64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::format(format!("bad coordinate {t:?}"))))
                .collect::<Result<_>>()?;
            points.push(p);
        }
        if points.len() != count {
            return Err(Error::format(format!(
                "header promises {count} points, file has {}",
                points.len()
            )));
        }
        HittingSet::new(
            field,
            ClassDescriptor { model: Model::Formula, n, d, s },
            points,
            provenance,
        )
    }

    pub fn from_text(text: &str) -> Result<HittingSet> {
        HittingSet::read_from(&mut std::io::Cursor::new(text))
    }
}

/// The full grid sample^n in odometer order (coordinate 0 fastest), claiming
/// the class C(n, d, unbounded).
pub fn grid_hitting_set(
    field: Field,
    n: usize,
    d: u64,
    sample: &[u64],
    max_points: u64,
) -> Result<HittingSet> {
    if n == 0 {
        return Err(Error::parameter("grid dimension n must be at least 1"));
    }
    for (i, &a) in sample.iter().enumerate() {
        if !field.is_canonical(a) {
            return Err(Error::parameter(format!("sample element {a} not canonical in {field}")));
        }
        if sample[i + 1..].contains(&a) {
            return Err(Error::parameter(format!("sample element {a} repeated")));
        }
    }
    if (sample.len() as u64) <= d {
        return Err(Error::parameter(format!(
            "insufficient sample: need more than d = {d} distinct points, got {}; \
             the grid guarantee degenerates at |S| <= d",
            sample.len()
        )));
    }
    let count = checked_pow_u64(sample.len() as u64, n as u32)
        .filter(|&c| c <= max_points)
        .ok_or_else(|| {
            Error::budget("grid point count", format!("{}^{n}", sample.len()), max_points)
        })?;
    let side = sample.len() as u64;
    let points: Vec<Vec<u64>> = (0..count)
        .map(|idx| {
            let mut rest = idx;
            (0..n)
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
        ClassDescriptor { model: Model::Formula, n, d, s: UNBOUNDED },
        points,
        Provenance::Grid,
    )
}

fn checked_pow_u64(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PitOutcome {
    NonzeroWitness { trial: u64, point: Vec<u64>, value: u64 },
    /// No nonzero value seen. Carries the per-run failure probability bound
    /// (d / |S|)^trials derived from the formal degree (1 if |S| <= d), as
    /// an exact rational string.
    ProbablyZero { failure_bound: String },
}

/// Blackbox randomized identity test: draws `trials` points from sample^n
/// with the seeded generator and returns the first nonzero evaluation.
pub fn randomized_pit(
    circuit: &Circuit,
    sample: &[u64],
    trials: u64,
    seed: u64,
) -> Result<PitOutcome> {
    randomized_pit_impl(
        sample,
        trials,
        seed,
        circuit.num_vars(),
        circuit.formal_degree(),
        circuit.field(),
        |pt| circuit.evaluate(pt),
    )
}

pub fn randomized_pit_abp(
    abp: &crate::circuit::Abp,
    sample: &[u64],
    trials: u64,
    seed: u64,
) -> Result<PitOutcome> {
    randomized_pit_impl(
        sample,
        trials,
        seed,
        abp.num_vars(),
        abp.formal_degree(),
        abp.field(),
        |pt| abp.evaluate(pt),
    )
}

fn randomized_pit_impl(
    sample: &[u64],
    trials: u64,
    seed: u64,
    num_vars: usize,
    formal_degree: u64,
    field: Field,
    eval: impl Fn(&[u64]) -> Result<u64>,
) -> Result<PitOutcome> {
    if sample.is_empty() {
        return Err(Error::parameter("empty sample"));
    }
    for &a in sample {
        if !field.is_canonical(a) {
            return Err(Error::parameter(format!("sample element {a} not canonical in {field}")));
        }
    }
    if trials == 0 {
        return Err(Error::parameter("trials must be at least 1"));
    }
    let mut rng = SplitMix64::new(seed);
    let mut point = vec![0u64; num_vars];
    for trial in 0..trials {
        for slot in point.iter_mut() {
            *slot = *rng.pick(sample);
        }
        let value = eval(&point)?;
        if value != 0 {
            return Ok(PitOutcome::NonzeroWitness { trial, point, value });
        }
    }
    let ratio = BigRational::new(formal_degree.into(), (sample.len() as u64).into());
    let per_trial = if ratio > BigRational::one() { BigRational::one() } else { ratio };
    let mut failure_bound = BigRational::one();
    for _ in 0..trials {
        failure_bound *= &per_trial;
    }
    Ok(PitOutcome::ProbablyZero {
        failure_bound: crate::ratio::rational_to_string(&failure_bound),
    })
}

/// Monomial exponent vectors for k variables with individual degree at most
/// d, in the annihilator's canonical order: ascending lexicographic on the
/// exponent tuple, so the last variable ticks fastest
/// (1, z_{k-1}, ..., z_0, ..., z_0^d...z_{k-1}^d).
pub fn annihilator_monomials(k: usize, d_individual: u64) -> Vec<Vec<u32>> {
    let base = d_individual + 1;
    let total = checked_pow_u64(base, k as u32).expect("caller bounded the monomial count");
    (0..total)
        .map(|idx| {
            let mut exps = vec![0u32; k];
            let mut rest = idx;
            for slot in exps.iter_mut().rev() {
                *slot = (rest % base) as u32;
                rest /= base;
            }
            exps
        })
        .collect()
}

/// Finds a nonzero polynomial on the first k coordinates, of individual
/// degree at most d_individual, vanishing on every point of the hitting
/// set. The kernel vector comes from [`nullspace_vector`], so the output is
/// canonical; feasibility requires more monomials than distinct restricted
/// points.
pub fn find_annihilator(
    h: &HittingSet,
    k: usize,
    d_individual: u64,
    max_monomials: u64,
) -> Result<MultiPoly> {
    if k == 0 || k > h.class().n {
        return Err(Error::parameter(format!(
            "k = {k} must be between 1 and the {}-variate point width",
            h.class().n
        )));
    }
    let monomial_count_big = BigUint::from(d_individual + 1).pow(k as u32);
    if monomial_count_big > BigUint::from(max_monomials) {
        return Err(Error::budget("annihilator monomials", monomial_count_big, max_monomials));
    }
    let monomial_count = monomial_count_big.to_u64().expect("bounded by budget");

    // Restrict to the first k coordinates; duplicate rows constrain nothing
    // new, so they are dropped (first occurrence kept, order preserved).
    let mut seen = std::collections::HashSet::new();
    let mut restricted: Vec<&[u64]> = Vec::new();
    for p in h.points() {
        let r = &p[..k];
        if seen.insert(r.to_vec()) {
            restricted.push(r);
        }
    }

    if monomial_count <= restricted.len() as u64 {
        return Err(Error::InfeasibleAnnihilator {
            k,
            d_individual,
            monomials: monomial_count.to_string(),
            constraints: restricted.len(),
        });
    }

    let field = h.field();
    let monomials = annihilator_monomials(k, d_individual);
    let rows: Vec<Vec<u64>> = restricted
        .iter()
        .map(|point| {
            // power table per coordinate
            let pows: Vec<Vec<u64>> = point
                .iter()
                .map(|&x| {
                    let mut v = Vec::with_capacity(d_individual as usize + 1);
                    let mut acc = 1u64;
                    for _ in 0..=d_individual {
                        v.push(acc);
                        acc = field.mul(acc, x);
                    }
                    v
                })
                .collect();
            monomials
                .iter()
                .map(|exps| {
                    exps.iter()
                        .enumerate()
                        .fold(1u64, |acc, (i, &e)| field.mul(acc, pows[i][e as usize]))
                })
                .collect()
        })
        .collect();

    let kernel = nullspace_vector(field, &rows, monomial_count as usize)?
        .expect("monomials exceed constraints, kernel must be nontrivial");
    let q = MultiPoly::from_terms(
        field,
        k,
        monomials.into_iter().zip(kernel).filter(|(_, c)| *c != 0),
    )?;
    debug_assert!(!q.is_zero());
    Ok(q)
}

/// The annihilator as a formula, with the concrete leaf-count bound the
/// suite records: term count times (total degree + 1).
#[derive(Debug, Clone)]
pub struct AnnihilatorFormula {
    pub formula: Circuit,
    pub leaf_count: u64,
    pub recorded_bound: u64,
}

pub fn annihilator_formula(q: &MultiPoly) -> AnnihilatorFormula {
    let formula = sparse_to_formula(q);
    let leaf_count = formula.leaf_count();
    let recorded_bound = (q.num_terms().max(1) as u64) * (q.total_degree() as u64 + 1);
    debug_assert!(leaf_count <= recorded_bound);
    AnnihilatorFormula { formula, leaf_count, recorded_bound }
}

/// Exhaustively checks that every nonzero n-variate polynomial with
/// individual degree at most d_individual is nonzero somewhere on the set.
/// Candidates are enumerated by coefficient vector in odometer order
/// (coefficient of the first monomial fastest, monomials with variable 0
/// fastest); the first vanishing polynomial in that order is returned.
pub fn verify_hitting_exhaustive(
    h: &HittingSet,
    n: usize,
    d_individual: u64,
    max_candidates: u64,
) -> Result<Option<MultiPoly>> {
    verify_hitting_exhaustive_with(h, n, d_individual, max_candidates, Parallelism::default())
}

pub fn verify_hitting_exhaustive_with(
    h: &HittingSet,
    n: usize,
    d_individual: u64,
    max_candidates: u64,
    mode: Parallelism,
) -> Result<Option<MultiPoly>> {
    if n == 0 {
        return Err(Error::parameter("n must be at least 1"));
    }
    if n > h.class().n {
        return Err(Error::parameter(format!(
            "checking {n}-variate polynomials against {}-coordinate points",
            h.class().n
        )));
    }
    let field = h.field();
    let q = field.order();
    let monomial_count = checked_pow_u64(d_individual + 1, n as u32)
        .filter(|&m| m <= 63)
        .ok_or_else(|| {
            Error::budget(
                "exhaustive enumeration monomials",
                format!("({}+1)^{n}", d_individual),
                "2^63",
            )
        })?;
    let candidates = {
        let big = BigUint::from(q).pow(monomial_count as u32);
        if big > BigUint::from(max_candidates) {
            return Err(Error::budget("exhaustive enumeration candidates", big, max_candidates));
        }
        big.to_u64().expect("bounded by budget")
    };

    // Monomials with variable 0 fastest: exponent of variable 0 is the
    // lowest digit of the monomial index.
    let monomials: Vec<Vec<u32>> = (0..monomial_count)
        .map(|idx| {
            let mut exps = vec![0u32; n];
            let mut rest = idx;
            for slot in exps.iter_mut() {
                *slot = (rest % (d_individual + 1)) as u32;
                rest /= d_individual + 1;
            }
            exps
        })
        .collect();

    // monomial values per point, restricted to the first n coordinates
    let tables: Vec<Vec<u64>> = h
        .points()
        .iter()
        .map(|p| {
            let pows: Vec<Vec<u64>> = p[..n]
                .iter()
                .map(|&x| {
                    let mut v = Vec::with_capacity(d_individual as usize + 1);
                    let mut acc = 1u64;
                    for _ in 0..=d_individual {
                        v.push(acc);
                        acc = field.mul(acc, x);
                    }
                    v
                })
                .collect();
            monomials
                .iter()
                .map(|e| {
                    e.iter().enumerate().fold(1u64, |acc, (i, &d)| field.mul(acc, pows[i][d as usize]))
                })
                .collect()
        })
        .collect();

    let first_vanishing = par::first_match(mode, candidates - 1, |c| {
        let candidate = c + 1; // skip the zero polynomial
        let mut coeffs = [0u64; 64];
        let mut rest = candidate;
        let mut j = 0usize;
        while rest > 0 {
            coeffs[j] = rest % q;
            rest /= q;
            j += 1;
        }
        let coeffs = &coeffs[..monomial_count as usize];
        let hit = tables.iter().any(|table| {
            let mut acc = 0u64;
            for (cj, mj) in coeffs.iter().zip(table) {
                if *cj != 0 {
                    acc = field.add(acc, field.mul(*cj, *mj));
                }
            }
            acc != 0
        });
        if hit {
            None
        } else {
            Some(candidate)
        }
    });

    Ok(first_vanishing.map(|candidate| {
        let mut terms = Vec::new();
        let mut rest = candidate;
        let mut j = 0usize;
        while rest > 0 {
            let c = rest % q;
            if c != 0 {
                terms.push((monomials[j].clone(), c));
            }
            rest /= q;
            j += 1;
        }
        MultiPoly::from_terms(field, n, terms).expect("canonical decoded terms")
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MultiplesOutcome {
    Pass { witnesses: u64 },
    Violation { witness: u64, point: Vec<u64>, value: u64 },
}

/// Multiplies q by seeded random sparse polynomials and checks that every
/// product still vanishes on the set. Requires q itself to vanish there.
pub fn check_multiples_vanish(
    q: &MultiPoly,
    h: &HittingSet,
    witnesses: u64,
    seed: u64,
) -> Result<MultiplesOutcome> {
    let k = q.num_vars();
    if k > h.class().n {
        return Err(Error::parameter(format!(
            "q is {k}-variate but points have {} coordinates",
            h.class().n
        )));
    }
    for p in h.points() {
        if q.evaluate(&p[..k])? != 0 {
            return Err(Error::precondition(format!(
                "q does not vanish on the hitting set (point {:?})",
                &p[..k]
            )));
        }
    }
    let mut rng = SplitMix64::new(seed).split(0x6d75);
    for witness in 0..witnesses {
        let r = crate::sample::random_multipoly(
            &mut rng,
            q.field(),
            k,
            5,
            q.max_individual_degree().max(1),
        );
        let product = q.mul(&r)?;
        for p in h.points() {
            let value = product.evaluate(&p[..k])?;
            if value != 0 {
                return Ok(MultiplesOutcome::Violation {
                    witness,
                    point: p.clone(),
                    value,
                });
            }
        }
    }
    Ok(MultiplesOutcome::Pass { witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitKind;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn grid_sizes() {
        let f = gf(5);
        let h = grid_hitting_set(f, 2, 2, &[0, 1, 2], 1 << 20).unwrap();
        assert_eq!(h.len(), 9);
        assert_eq!(h.class().s, UNBOUNDED);

        let single = grid_hitting_set(f, 1, 0, &[0], 1 << 20).unwrap();
        assert_eq!(single.len(), 1);

        assert!(grid_hitting_set(f, 2, 3, &[0, 1, 2], 1 << 20).is_err()); // |S| <= d
        assert!(grid_hitting_set(f, 2, 1, &[0, 0, 1], 1 << 20).is_err()); // repeated
        assert!(matches!(
            grid_hitting_set(f, 8, 1, &[0, 1, 2], 100),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn grid_side3_gf3_hits_all_bilinear() {
        // All 80 nonzero 2-variate individual-degree-<=1 polynomials over
        // GF(3) are hit by the full 3x3 grid.
        let f = gf(3);
        let h = grid_hitting_set(f, 2, 1, &[0, 1, 2], 1 << 20).unwrap();
        assert_eq!(verify_hitting_exhaustive(&h, 2, 1, 1 << 26).unwrap(), None);
    }

    #[test]
    fn single_origin_point_misses_z0() {
        let f = gf(3);
        let h = HittingSet::new(
            f,
            ClassDescriptor { model: Model::Formula, n: 2, d: 1, s: UNBOUNDED },
            vec![vec![0, 0]],
            Provenance::External,
        )
        .unwrap();
        let counterexample = verify_hitting_exhaustive(&h, 2, 1, 1 << 26).unwrap().unwrap();
        assert_eq!(counterexample, MultiPoly::var(f, 2, 0));
    }

    #[test]
    fn empty_set_fails_on_first_polynomial() {
        let f = gf(3);
        let h = HittingSet::new(
            f,
            ClassDescriptor { model: Model::Formula, n: 2, d: 1, s: UNBOUNDED },
            vec![],
            Provenance::External,
        )
        .unwrap();
        let counterexample = verify_hitting_exhaustive(&h, 2, 1, 1 << 26).unwrap().unwrap();
        assert_eq!(counterexample, MultiPoly::constant(f, 2, 1));
    }

    #[test]
    fn annihilator_of_two_points_gf3() {
        // H = {(0,0),(1,1)} in GF(3)^2, k=2, d'=1: the canonical kernel under
        // the monomial order (1, z_1, z_0, z_0 z_1) is z_0 - z_1.
        let f = gf(3);
        let h = HittingSet::new(
            f,
            ClassDescriptor { model: Model::Formula, n: 2, d: 1, s: UNBOUNDED },
            vec![vec![0, 0], vec![1, 1]],
            Provenance::External,
        )
        .unwrap();
        let q = find_annihilator(&h, 2, 1, 1 << 20).unwrap();
        let expected =
            MultiPoly::from_terms(f, 2, vec![(vec![1, 0], 1), (vec![0, 1], 2)]).unwrap();
        assert_eq!(q, expected);
        for p in h.points() {
            assert_eq!(q.evaluate(p).unwrap(), 0);
        }
    }

    #[test]
    fn annihilator_of_empty_set_is_one() {
        let f = gf(3);
        let h = HittingSet::new(
            f,
            ClassDescriptor { model: Model::Formula, n: 1, d: 0, s: UNBOUNDED },
            vec![],
            Provenance::External,
        )
        .unwrap();
        let q = find_annihilator(&h, 1, 0, 1 << 20).unwrap();
        assert_eq!(q, MultiPoly::constant(f, 1, 1));
    }

    #[test]
    fn annihilator_infeasible_at_boundary() {
        // H = all of GF(2)^2, k=2, d'=1: (1+1)^2 = 4 <= 4 constraints.
        let f = gf(2);
        let h = grid_hitting_set(f, 2, 1, &[0, 1], 1 << 20).unwrap();
        assert!(matches!(
            find_annihilator(&h, 2, 1, 1 << 20),
            Err(Error::InfeasibleAnnihilator { .. })
        ));
    }

    #[test]
    fn annihilator_formula_bounds() {
        let f = gf(3);
        let q = MultiPoly::from_terms(f, 2, vec![(vec![1, 0], 1), (vec![0, 1], 2)]).unwrap();
        let af = annihilator_formula(&q);
        assert_eq!(af.leaf_count, 4);
        assert!(af.leaf_count <= af.recorded_bound);
        // exhaustive evaluation agreement over GF(3)^2
        for x in f.elements() {
            for y in f.elements() {
                assert_eq!(af.formula.evaluate(&[x, y]).unwrap(), q.evaluate(&[x, y]).unwrap());
            }
        }

        let one = MultiPoly::constant(f, 1, 1);
        assert_eq!(annihilator_formula(&one).leaf_count, 1);
    }

    #[test]
    fn multiples_vanish_and_precondition() {
        let f = gf(3);
        let h = HittingSet::new(
            f,
            ClassDescriptor { model: Model::Formula, n: 2, d: 1, s: UNBOUNDED },
            vec![vec![0, 0], vec![1, 1]],
            Provenance::External,
        )
        .unwrap();
        let q = find_annihilator(&h, 2, 1, 1 << 20).unwrap();
        assert_eq!(
            check_multiples_vanish(&q, &h, 20, 7).unwrap(),
            MultiplesOutcome::Pass { witnesses: 20 }
        );

        let one = MultiPoly::constant(f, 2, 1);
        assert!(matches!(
            check_multiples_vanish(&one, &h, 5, 7),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn pit_on_syntactic_zero_and_witnesses() {
        let f = gf(5);
        // x_0 - x_0 written as x_0 + 4*x_0
        let mut b = Circuit::builder(f, CircuitKind::Formula);
        let x = b.input(0);
        let c = b.constant(4);
        let x2 = b.input(0);
        let m = b.mul(vec![c, x2]);
        let s = b.add(vec![x, m]);
        let zero = b.finish(s).unwrap();
        for seed in [0u64, 1, 99] {
            assert!(matches!(
                randomized_pit(&zero, &[0, 1, 2, 3, 4], 8, seed).unwrap(),
                PitOutcome::ProbablyZero { .. }
            ));
        }

        let mut b = Circuit::builder(f, CircuitKind::Formula);
        let x = b.input(0);
        let ident = b.finish(x).unwrap();
        match randomized_pit(&ident, &[0, 1, 2, 3, 4], 5, 3).unwrap() {
            PitOutcome::NonzeroWitness { value, .. } => assert_ne!(value, 0),
            PitOutcome::ProbablyZero { .. } => {
                // 5 trials all hitting 0 has probability 5^-5; tolerate but
                // re-run with another seed to keep the test meaningful.
                match randomized_pit(&ident, &[0, 1, 2, 3, 4], 5, 4).unwrap() {
                    PitOutcome::NonzeroWitness { .. } => {}
                    other => panic!("identity circuit never witnessed: {other:?}"),
                }
            }
        }

        let one = Circuit::constant_circuit(f, 1);
        match randomized_pit(&one, &[0, 1], 3, 0).unwrap() {
            PitOutcome::NonzeroWitness { trial, value, .. } => {
                assert_eq!(trial, 0);
                assert_eq!(value, 1);
            }
            other => panic!("constant 1 must witness immediately: {other:?}"),
        }

        assert!(randomized_pit(&one, &[], 3, 0).is_err());
    }

    #[test]
    fn pit_seed_reproducible() {
        let f = gf(7);
        let mut rng = SplitMix64::new(5);
        let poly = crate::sample::random_nonzero_multipoly(&mut rng, f, 3, 4, 2);
        let c = sparse_to_formula(&poly);
        let a = randomized_pit(&c, &[0, 1, 2, 3, 4, 5, 6], 10, 1234).unwrap();
        let b = randomized_pit(&c, &[0, 1, 2, 3, 4, 5, 6], 10, 1234).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn file_roundtrip_bit_exact() {
        let f = gf(5);
        let h = grid_hitting_set(f, 2, 1, &[0, 2, 4], 1 << 20).unwrap();
        let text = h.to_text();
        assert!(text.starts_with("GF(5) 2 1 inf 9 grid\n"));
        let back = HittingSet::from_text(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.to_text(), text);
    }
}
