//! Variable reduction by design substitution and the factorization-free
//! extraction oracle.
//!
//! Given a design {S_1,...,S_m} over a size-l universe and a k-variate polynomial q, the
//! map sends an m-variate circuit p to p(q(y|S_1),...,q(y|S_m)) over l
//! variables. When the substituted circuit collapses to the zero polynomial,
//! [`ki_extract`] reproduces, at desk scale, the construction that recovers
//! a small nonzero multiple of q from the collapse: walk the hybrids to the
//! collapse index t, freeze every variable outside x_t and y|_{S_t} by
//! exhaustive search, peel the lowest x_t-coefficient by interpolation and
//! certify divisibility by q with an exact division.

use crate::circuit::{compose, horner_formula, sparse_to_formula, Circuit, CircuitKind};
use crate::design::Design;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::multipoly::{multi_divide_exact, MultiPoly};
use crate::unipoly::{lagrange_weights, UniPoly};
use serde::{Deserialize, Serialize};

/// A design together with the hard polynomial to substitute on its sets.
#[derive(Debug, Clone)]
pub struct NwSubstitution {
    design: Design,
    q: MultiPoly,
    q_formula: Circuit,
}

impl NwSubstitution {
    pub fn new(design: Design, q: MultiPoly) -> Result<NwSubstitution> {
        if q.is_zero() {
            return Err(Error::parameter("q must be nonzero"));
        }
        if q.num_vars() as u64 != design.k {
            return Err(Error::parameter(format!(
                "q has {} variables but the design has k = {}",
                q.num_vars(),
                design.k
            )));
        }
        let q_formula = sparse_to_formula(&q);
        Ok(NwSubstitution { design, q, q_formula })
    }

    /// Uses a caller-supplied formula for q; it is checked against q by
    /// expansion.
    pub fn with_formula(design: Design, q: MultiPoly, q_formula: Circuit) -> Result<NwSubstitution> {
        let expanded = q_formula.expand_default()?;
        if expanded != q {
            return Err(Error::parameter("supplied formula does not compute q"));
        }
        let base = NwSubstitution::new(design, q)?;
        Ok(NwSubstitution { q_formula, ..base })
    }

    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn q(&self) -> &MultiPoly {
        &self.q
    }

    pub fn q_formula(&self) -> &Circuit {
        &self.q_formula
    }

    pub fn field(&self) -> Field {
        self.q.field()
    }

    pub fn num_universe_vars(&self) -> usize {
        self.design.l as usize
    }

    /// Max individual degree of q.
    pub fn d_individual(&self) -> u32 {
        self.q.max_individual_degree()
    }

    /// q(y|S_i) as a polynomial over the l universe variables. Variable j of
    /// q maps to the j-th smallest element of S_i.
    pub fn substituted_poly(&self, i: usize) -> Result<MultiPoly> {
        let set = self
            .design
            .sets
            .get(i)
            .ok_or_else(|| Error::parameter(format!("set index {i} out of range")))?;
        let mapping: Vec<Option<usize>> = set.iter().map(|&v| Some(v as usize)).collect();
        self.q.relabel(&mapping, self.num_universe_vars())
    }

    /// The formula copy for set i: q_formula with variables renamed into S_i.
    pub fn substituted_formula(&self, i: usize) -> Result<Circuit> {
        let set = self
            .design
            .sets
            .get(i)
            .ok_or_else(|| Error::parameter(format!("set index {i} out of range")))?;
        let mapping: Vec<usize> = set.iter().map(|&v| v as usize).collect();
        self.q_formula.relabel_vars(&mapping)
    }
}

/// The substituted circuit p(q(y|S_1),...,q(y|S_m)) over the l universe
/// variables. Formula size multiplies by at most size(q_formula).
pub fn nw_substitute(p: &Circuit, sub: &NwSubstitution) -> Result<Circuit> {
    if p.field() != sub.field() {
        return Err(Error::SpecMismatch(p.field().to_string(), sub.field().to_string()));
    }
    let m = p.num_vars();
    if m > sub.design.num_sets() {
        return Err(Error::parameter(format!(
            "p depends on {m} variables but the design has only {} sets",
            sub.design.num_sets()
        )));
    }
    let copies: Vec<Circuit> =
        (0..m).map(|i| sub.substituted_formula(i)).collect::<Result<_>>()?;
    compose(p, &copies)
}

#[derive(Debug, Clone, Copy)]
pub struct KiBudget {
    /// Cap on intermediate term counts during dense expansion.
    pub max_terms: usize,
    /// Cap on the exhaustive nonzero-preserving assignment search.
    pub max_assignments: u64,
}

impl Default for KiBudget {
    fn default() -> Self {
        KiBudget { max_terms: crate::circuit::DEFAULT_EXPAND_TERMS, max_assignments: 1 << 20 }
    }
}

/// Size accounting for one extraction, in the measures of the construction:
/// s = leaf count of p, d = max individual degree of q (the strict bound is
/// d+1), cap_degree = total degree of p's polynomial, r from the design.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KiBounds {
    pub s: u64,
    pub d: u64,
    pub cap_degree: u64,
    pub r: u64,
    pub leaf_count: u64,
    /// 4 * s * d * (D+1); asserted when r = 2 and d >= 1.
    pub r2_bound: Option<u64>,
    /// s * (r-1) * (d+1)^r * (D+1) with the strict individual-degree bound.
    pub general_bound: u64,
    pub degree: u64,
    /// k * d * D
    pub degree_bound: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtractionResult {
    /// 1-based hybrid index: the substitution of x_t collapses the circuit.
    pub t: usize,
    /// Values frozen into the variables outside x_t and y|_{S_t}; indices
    /// address the combined space (universe variables 0..l, then x-block).
    pub assignment: Vec<(usize, u64)>,
    /// Least x_t-exponent whose coefficient polynomial is nonzero.
    pub lowest_index: u32,
    /// That coefficient, relabeled onto the k variables of q; divisible by q.
    pub p_tilde: MultiPoly,
    pub p_tilde_formula: Circuit,
    /// Certified quotient: p_tilde = q * quotient.
    pub quotient: MultiPoly,
    pub bounds: KiBounds,
}

/// Runs the full extraction on a circuit p with gamma(p) identically zero.
pub fn ki_extract(p: &Circuit, sub: &NwSubstitution, budget: KiBudget) -> Result<ExtractionResult> {
    let field = sub.field();
    if p.field() != field {
        return Err(Error::SpecMismatch(p.field().to_string(), field.to_string()));
    }
    let m = p.num_vars();
    if m == 0 || m > sub.design.num_sets() {
        return Err(Error::parameter(format!(
            "p must depend on 1..={} variables, has {m}",
            sub.design.num_sets()
        )));
    }
    let l = sub.num_universe_vars();
    let combined = l + m;

    let p_poly = p.expand(p.formal_degree(), budget.max_terms)?;
    if p_poly.is_zero() {
        return Err(Error::precondition("p expands to the zero polynomial"));
    }

    // substituted polynomials, padded into the combined variable space
    let gammas: Vec<MultiPoly> = (0..m)
        .map(|i| {
            let g = sub.substituted_poly(i)?;
            let mapping: Vec<Option<usize>> = (0..l).map(Some).collect();
            g.relabel(&mapping, combined)
        })
        .collect::<Result<_>>()?;

    let hybrid = |i: usize| -> Result<MultiPoly> {
        let subs: Vec<MultiPoly> = (0..m)
            .map(|j| {
                if j < i {
                    Ok(gammas[j].clone())
                } else {
                    Ok(MultiPoly::var(field, combined, l + j))
                }
            })
            .collect::<Result<_>>()?;
        p_poly.compose(&subs)
    };

    if !hybrid(m)?.is_zero() {
        return Err(Error::precondition(
            "gamma(p) is not identically zero; extraction applies only to collapsing circuits",
        ));
    }
    // P_0 = p is nonzero and P_m = 0, so the first vanishing index exists;
    // substitution preserves the zero polynomial, so it is unique.
    let mut t = m;
    let mut prev = p_poly.clone().relabel(
        &(0..m).map(|j| Some(l + j)).collect::<Vec<_>>(),
        combined,
    )?; // P_{t-1} in combined space
    for i in 1..=m {
        let h = hybrid(i)?;
        if h.is_zero() {
            t = i;
            break;
        }
        prev = h;
    }

    let set_t: Vec<usize> = sub.design.sets[t - 1].iter().map(|&v| v as usize).collect();
    let x_t = l + (t - 1);

    // Variables to freeze: everything occurring in P_{t-1} except x_t and
    // the y-variables of S_t.
    let keep: std::collections::HashSet<usize> =
        set_t.iter().copied().chain([x_t]).collect();
    let mut to_assign: Vec<usize> = (0..combined)
        .filter(|v| !keep.contains(v) && prev.individual_degree(*v) > 0)
        .collect();
    to_assign.sort_unstable();

    let q_order = field.order();
    let total_assignments = {
        let mut acc: u64 = 1;
        for _ in &to_assign {
            acc = acc.saturating_mul(q_order);
        }
        acc
    };
    if total_assignments > budget.max_assignments {
        return Err(Error::budget(
            "nonzero-preserving assignment search",
            total_assignments,
            budget.max_assignments,
        ));
    }

    // Odometer over assignments, lowest-index variable fastest; first
    // success wins, which makes the result canonical.
    let mut chosen: Option<(Vec<(usize, u64)>, MultiPoly)> = None;
    for idx in 0..total_assignments {
        let mut rest = idx;
        let assignment: Vec<(usize, u64)> = to_assign
            .iter()
            .map(|&v| {
                let val = rest % q_order;
                rest /= q_order;
                (v, val)
            })
            .collect();
        let candidate = prev.substitute(&assignment);
        if !candidate.is_zero() {
            chosen = Some((assignment, candidate));
            break;
        }
    }
    let Some((assignment, p_prime)) = chosen else {
        return Err(Error::FieldTooSmall {
            needed: "enough elements to preserve nonzeroness under substitution".into(),
            order: q_order.to_string(),
        });
    };

    // P'(y_t, x_t): lowest nonzero x_t-coefficient, read directly off the
    // dense form.
    let deg_x = p_prime.individual_degree(x_t);
    let mut lowest: Option<(u32, MultiPoly)> = None;
    for a in 0..=deg_x {
        let mut coeff = MultiPoly::zero(field, combined);
        for (exps, c) in p_prime.terms() {
            if exps[x_t] == a {
                let mut e = exps.clone();
                e[x_t] = 0;
                coeff.add_term(&e, c);
            }
        }
        if !coeff.is_zero() {
            lowest = Some((a, coeff));
            break;
        }
    }
    let (lowest_index, coeff_combined) = lowest.expect("p_prime is nonzero");

    // Relabel y|S_t onto z_0..z_{k-1} (sorted order of the set).
    let k = sub.design.k as usize;
    let mut z_map: Vec<Option<usize>> = vec![None; combined];
    for (pos, &v) in set_t.iter().enumerate() {
        z_map[v] = Some(pos);
    }
    let p_tilde = coeff_combined.relabel(&z_map, k)?;

    let quotient = multi_divide_exact(&p_tilde, sub.q())?.ok_or_else(|| {
        Error::domain("extracted coefficient is not divisible by q; extraction invariant broken")
    })?;

    // Formula route: rebuild P' as a formula over z_0..z_{k-1} and a local
    // x variable, then interpolate the lowest coefficient out of deg_x + 1
    // evaluations of x.
    let p_tilde_formula =
        build_extraction_formula(p, sub, t, &assignment, lowest_index, deg_x, &z_map, k)?;
    let check = p_tilde_formula.expand(p_tilde_formula.formal_degree(), budget.max_terms)?;
    let check =
        check.relabel(&(0..check.num_vars()).map(Some).collect::<Vec<_>>(), k.max(check.num_vars()))?;
    if check != p_tilde {
        return Err(Error::domain(
            "interpolation formula disagrees with the dense extraction; invariant broken",
        ));
    }

    let s = p.leaf_count();
    let d = sub.d_individual() as u64;
    let cap_degree = p_poly.total_degree() as u64;
    let r = sub.design.r;
    let leaf_count = p_tilde_formula.leaf_count();
    let r2_bound = (r == 2).then(|| 4 * s * d * (cap_degree + 1));
    let general_bound = s * (r - 1).max(1) * (d + 1).pow(r as u32) * (cap_degree + 1);
    let degree = p_tilde.total_degree() as u64;
    let degree_bound = (k as u64) * d * cap_degree;

    Ok(ExtractionResult {
        t,
        assignment,
        lowest_index,
        p_tilde,
        p_tilde_formula,
        quotient,
        bounds: KiBounds {
            s,
            d,
            cap_degree,
            r,
            leaf_count,
            r2_bound,
            general_bound,
            degree,
            degree_bound,
        },
    })
}

/// Explicit formula for the extracted coefficient: substitute
/// every already-collapsed variable x_j (j < t) by a small fresh formula for
/// its frozen polynomial, later x_j's by their frozen constants, then take
/// the Lagrange combination of deg_x + 1 copies with x_t fixed to field
/// points.
#[allow(clippy::too_many_arguments)]
fn build_extraction_formula(
    p: &Circuit,
    sub: &NwSubstitution,
    t: usize,
    assignment: &[(usize, u64)],
    lowest_index: u32,
    deg_x: u32,
    z_map: &[Option<usize>],
    k: usize,
) -> Result<Circuit> {
    let field = sub.field();
    let l = sub.num_universe_vars();
    let m = p.num_vars();
    let local_x = k; // local variable space: z_0..z_{k-1}, then x

    let assigned = |v: usize| assignment.iter().find(|(w, _)| *w == v).map(|&(_, val)| val);

    let mut local_subs: Vec<Circuit> = Vec::with_capacity(m);
    for j in 0..m {
        if j == t - 1 {
            let mut b = Circuit::builder(field, CircuitKind::Formula);
            let x = b.input(local_x);
            local_subs.push(b.finish(x)?);
            continue;
        }
        if j >= t {
            let val = assigned(l + j).unwrap_or(0);
            local_subs.push(Circuit::constant_circuit(field, val));
            continue;
        }
        // j < t-1: q(y|S_j) with the frozen values substituted; lives on the
        // at most r-1 shared variables of S_j and S_t.
        let g = sub.substituted_poly(j)?;
        let mut g_assigned = g.substitute(
            &assignment
                .iter()
                .copied()
                .filter(|&(v, _)| v < l)
                .collect::<Vec<_>>(),
        );
        // Variables the search never had to fix (the collapsed hybrid does
        // not depend on them) are frozen to 0; any value gives the same
        // polynomial, and the expansion cross-check certifies it.
        let leftover: Vec<(usize, u64)> = (0..l)
            .filter(|&v| z_map[v].is_none() && g_assigned.individual_degree(v) > 0)
            .map(|v| (v, 0))
            .collect();
        if !leftover.is_empty() {
            g_assigned = g_assigned.substitute(&leftover);
        }
        // relabel into local z space (plus the unused x slot)
        let mut map: Vec<Option<usize>> = vec![None; l];
        for (v, slot) in z_map.iter().enumerate().take(l) {
            map[v] = *slot;
        }
        let local = g_assigned.relabel(&map, k + 1)?;
        let live: Vec<usize> = (0..k + 1).filter(|&v| local.individual_degree(v) > 0).collect();
        let formula = match live.as_slice() {
            [] => {
                let c = local.coeff(&vec![0u32; k + 1]);
                Circuit::constant_circuit(field, c)
            }
            [only] => {
                // univariate: Horner gives the 2d+1 leaf form
                let var = *only;
                let deg = local.individual_degree(var) as usize;
                let mut coeffs = vec![0u64; deg + 1];
                for (exps, c) in local.terms() {
                    coeffs[exps[var] as usize] = c;
                }
                horner_formula(&UniPoly::new(field, coeffs)?, var)
            }
            _ => sparse_to_formula(&local),
        };
        local_subs.push(formula);
    }

    let p_prime_formula = compose(p, &local_subs)?;

    // Interpolation nodes: the first deg_x + 1 field elements.
    if field.order() <= deg_x as u64 {
        return Err(Error::FieldTooSmall {
            needed: (deg_x as u64 + 1).to_string(),
            order: field.order().to_string(),
        });
    }
    let nodes: Vec<u64> = (0..=deg_x as u64).collect();
    let weights = lagrange_weights(field, &nodes)?;

    let mut b = Circuit::builder(field, CircuitKind::Formula);
    let mut children = Vec::with_capacity(nodes.len());
    for (u, &beta) in nodes.iter().enumerate() {
        let fixed = p_prime_formula.substitute_partial(&[(local_x, beta)]);
        let root = b.splice(&fixed);
        let w = b.constant(weights[lowest_index as usize][u]);
        children.push(b.mul(vec![w, root]));
    }
    let out = if children.len() == 1 { children[0] } else { b.add(children) };
    b.finish(out)
}

/// Interpolation-based coefficient extraction on a circuit: treats `x_var`
/// as the inner univariate, reconstructs each coefficient polynomial from
/// d_cap + 1 evaluations of x_var, and returns the least index with a
/// nonzero coefficient together with that coefficient.
pub fn extract_lowest_coeff(
    p_prime: &Circuit,
    x_var: usize,
    d_cap: u64,
    max_terms: usize,
) -> Result<(u32, MultiPoly)> {
    let field = p_prime.field();
    if field.order() < d_cap + 1 {
        return Err(Error::FieldTooSmall {
            needed: (d_cap + 1).to_string(),
            order: field.order().to_string(),
        });
    }
    let nodes: Vec<u64> = (0..=d_cap).collect();
    let weights = lagrange_weights(field, &nodes)?;
    let n = p_prime.num_vars().max(x_var + 1);
    let evals: Vec<MultiPoly> = nodes
        .iter()
        .map(|&beta| {
            let fixed = p_prime.substitute_partial(&[(x_var, beta)]);
            fixed.expand(fixed.formal_degree(), max_terms)
        })
        .collect::<Result<_>>()?;
    for a in 0..=d_cap {
        let mut coeff = MultiPoly::zero(field, n);
        for (u, eval) in evals.iter().enumerate() {
            let mapping: Vec<Option<usize>> = (0..eval.num_vars()).map(Some).collect();
            let padded = eval.relabel(&mapping, n)?;
            coeff = coeff.add(&padded.scale(weights[a as usize][u]))?;
        }
        if !coeff.is_zero() {
            return Ok((a as u32, coeff));
        }
    }
    // All coefficients up to the cap vanish: the polynomial is zero in the
    // declared degree range.
    Ok((0, MultiPoly::zero(field, n)))
}
