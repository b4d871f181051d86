//! Seeded random generators for polynomials and formulas.
//!
//! Everything here is driven by [`SplitMix64`], so a (seed, parameters) pair
//! always produces the same object. Used by the randomized identity test,
//! the multiples-vanish check and the property/acceptance suites.

use crate::circuit::{Circuit, CircuitKind};
use crate::field::Field;
use crate::multipoly::MultiPoly;
use crate::rng::SplitMix64;
use crate::unipoly::UniPoly;

/// Random sparse polynomial: up to `max_terms` monomials with individual
/// degrees at most `max_individual_degree`. May come out zero if coefficient
/// draws cancel; callers that need a nonzero polynomial should retry or use
/// [`random_nonzero_multipoly`].
pub fn random_multipoly(
    rng: &mut SplitMix64,
    field: Field,
    num_vars: usize,
    max_terms: u64,
    max_individual_degree: u32,
) -> MultiPoly {
    let mut p = MultiPoly::zero(field, num_vars);
    let terms = rng.range(1, max_terms.max(1));
    for _ in 0..terms {
        let exps: Vec<u32> =
            (0..num_vars).map(|_| rng.below(max_individual_degree as u64 + 1) as u32).collect();
        let coeff = rng.below(field.order());
        p.add_term(&exps, coeff);
    }
    p
}

pub fn random_nonzero_multipoly(
    rng: &mut SplitMix64,
    field: Field,
    num_vars: usize,
    max_terms: u64,
    max_individual_degree: u32,
) -> MultiPoly {
    loop {
        let p = random_multipoly(rng, field, num_vars, max_terms, max_individual_degree);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_unipoly(rng: &mut SplitMix64, field: Field, degree: usize) -> UniPoly {
    let mut coeffs: Vec<u64> = (0..=degree).map(|_| rng.below(field.order())).collect();
    // force the stated degree
    if degree > 0 && coeffs[degree] == 0 {
        coeffs[degree] = rng.range(1, field.order() - 1);
    }
    if degree == 0 && coeffs[0] == 0 {
        coeffs[0] = rng.range(1, field.order() - 1);
    }
    UniPoly::new(field, coeffs).expect("canonical coefficients")
}

pub fn random_point(rng: &mut SplitMix64, field: Field, n: usize) -> Vec<u64> {
    (0..n).map(|_| rng.below(field.order())).collect()
}

/// Random formula over `num_vars` variables with at most `max_leaves` leaves,
/// built top-down: a leaf with probability growing as the budget shrinks,
/// otherwise a binary add or mul node.
pub fn random_formula(
    rng: &mut SplitMix64,
    field: Field,
    num_vars: usize,
    max_leaves: usize,
) -> Circuit {
    let mut b = Circuit::builder(field, CircuitKind::Formula);
    let root = random_subtree(rng, &mut b, num_vars, max_leaves.max(1));
    b.finish(root).expect("generator builds well-formed formulas")
}

fn random_subtree(
    rng: &mut SplitMix64,
    b: &mut crate::circuit::CircuitBuilder,
    num_vars: usize,
    budget: usize,
) -> usize {
    if budget <= 1 || rng.below(4) == 0 {
        return if rng.below(4) == 0 {
            b.constant(rng.below(b.field().order()))
        } else {
            b.input(rng.below(num_vars as u64) as usize)
        };
    }
    let left_budget = rng.range(1, budget as u64 - 1) as usize;
    let l = random_subtree(rng, b, num_vars, left_budget);
    let r = random_subtree(rng, b, num_vars, budget - left_budget);
    if rng.below(2) == 0 {
        b.add(vec![l, r])
    } else {
        b.mul(vec![l, r])
    }
}
