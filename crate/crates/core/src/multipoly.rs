//! Sparse multivariate polynomials with exact field coefficients.
//!
//! Terms live in a BTreeMap keyed by exponent vectors, so iteration order is
//! canonical (lexicographic on the exponent vector, variable 0 most
//! significant). Division uses graded-lexicographic leading terms.

use crate::error::{Error, Result};
use crate::field::Field;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    num_vars: usize,
    /// exponent vector -> nonzero coefficient
    terms: BTreeMap<Vec<u32>, u64>,
}

impl MultiPoly {
    pub fn zero(field: Field, num_vars: usize) -> MultiPoly {
        MultiPoly { field, num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, num_vars: usize, c: u64) -> MultiPoly {
        let mut p = MultiPoly::zero(field, num_vars);
        p.add_term(&vec![0; num_vars], c);
        p
    }

    pub fn var(field: Field, num_vars: usize, i: usize) -> MultiPoly {
        assert!(i < num_vars, "variable index out of range");
        let mut exps = vec![0u32; num_vars];
        exps[i] = 1;
        let mut p = MultiPoly::zero(field, num_vars);
        p.add_term(&exps, 1);
        p
    }

    pub fn from_terms<I>(field: Field, num_vars: usize, terms: I) -> Result<MultiPoly>
    where
        I: IntoIterator<Item = (Vec<u32>, u64)>,
    {
        let mut p = MultiPoly::zero(field, num_vars);
        for (exps, c) in terms {
            if exps.len() != num_vars {
                return Err(Error::domain(format!(
                    "exponent vector length {} != num_vars {num_vars}",
                    exps.len()
                )));
            }
            if !field.is_canonical(c) {
                return Err(Error::domain(format!("coefficient {c} not canonical in {field}")));
            }
            p.add_term(&exps, c);
        }
        Ok(p)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, u64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, exps: &[u32]) -> u64 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    /// Adds c * x^exps, dropping the term if the sum cancels.
    pub fn add_term(&mut self, exps: &[u32], c: u64) {
        debug_assert_eq!(exps.len(), self.num_vars);
        if c == 0 {
            return;
        }
        match self.terms.get_mut(exps) {
            Some(existing) => {
                let sum = self.field.add(*existing, c);
                if sum == 0 {
                    self.terms.remove(exps);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exps.to_vec(), c);
            }
        }
    }

    pub fn individual_degree(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn max_individual_degree(&self) -> u32 {
        (0..self.num_vars).map(|v| self.individual_degree(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn neg(&self) -> MultiPoly {
        let f = self.field;
        MultiPoly {
            field: f,
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> MultiPoly {
        if c == 0 {
            return MultiPoly::zero(self.field, self.num_vars);
        }
        let f = self.field;
        MultiPoly {
            field: f,
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, &a)| (e.clone(), f.mul(a, c))).collect(),
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let f = self.field;
        let mut out = MultiPoly::zero(f, self.num_vars);
        let mut exps = vec![0u32; self.num_vars];
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                for i in 0..self.num_vars {
                    exps[i] = e1[i] + e2[i];
                }
                out.add_term(&exps, f.mul(c1, c2));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u32) -> Result<MultiPoly> {
        let mut acc = MultiPoly::constant(self.field, self.num_vars, 1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact evaluation; powers go through square-and-multiply.
    pub fn evaluate(&self, point: &[u64]) -> Result<u64> {
        if point.len() != self.num_vars {
            return Err(Error::domain(format!(
                "point length {} != num_vars {}",
                point.len(),
                self.num_vars
            )));
        }
        let f = self.field;
        let mut acc = 0u64;
        for (exps, c) in self.terms() {
            let mut term = c;
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = f.mul(term, f.pow(point[i], e as u64));
                }
            }
            acc = f.add(acc, term);
        }
        Ok(acc)
    }

    /// Substitute field values for a subset of variables; the result keeps
    /// the same variable indexing (substituted variables appear with
    /// exponent 0 everywhere).
    pub fn substitute(&self, assignment: &[(usize, u64)]) -> MultiPoly {
        let f = self.field;
        let mut out = MultiPoly::zero(f, self.num_vars);
        let mut exps = vec![0u32; self.num_vars];
        for (e, c) in self.terms() {
            exps.copy_from_slice(e);
            let mut coeff = c;
            for &(var, val) in assignment {
                let p = exps[var];
                if p > 0 {
                    coeff = f.mul(coeff, f.pow(val, p as u64));
                    exps[var] = 0;
                }
            }
            out.add_term(&exps, coeff);
        }
        out
    }

    /// Compose: substitute a polynomial for every variable.
    pub fn compose(&self, subs: &[MultiPoly]) -> Result<MultiPoly> {
        if subs.len() < self.num_vars {
            return Err(Error::domain(format!(
                "compose needs {} substitutions, got {}",
                self.num_vars,
                subs.len()
            )));
        }
        let out_vars = subs.first().map(|s| s.num_vars).unwrap_or(0);
        for s in subs {
            if s.field != self.field {
                return Err(Error::SpecMismatch(self.field.to_string(), s.field.to_string()));
            }
            if s.num_vars != out_vars {
                return Err(Error::domain("substitution arity mismatch"));
            }
        }
        let mut acc = MultiPoly::zero(self.field, out_vars);
        for (exps, c) in self.terms() {
            let mut term = MultiPoly::constant(self.field, out_vars, c);
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&subs[i].pow(e)?)?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Re-index variables into a space of `new_num_vars` variables;
    /// `mapping[i]` is the new index of old variable i. Variables that carry
    /// a nonzero exponent must be mapped.
    pub fn relabel(&self, mapping: &[Option<usize>], new_num_vars: usize) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(self.field, new_num_vars);
        let mut exps = vec![0u32; new_num_vars];
        for (e, c) in self.terms() {
            exps.iter_mut().for_each(|x| *x = 0);
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    let j = mapping
                        .get(i)
                        .copied()
                        .flatten()
                        .ok_or_else(|| Error::domain(format!("variable {i} is not mapped")))?;
                    if j >= new_num_vars {
                        return Err(Error::domain(format!("mapped index {j} out of range")));
                    }
                    exps[j] += p;
                }
            }
            out.add_term(&exps, c);
        }
        Ok(out)
    }

    /// Leading term under graded-lexicographic order.
    pub fn leading_term(&self) -> Option<(&Vec<u32>, u64)> {
        self.terms()
            .max_by(|(e1, _), (e2, _)| grlex_cmp(e1, e2))
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::SpecMismatch(self.field.to_string(), other.field.to_string()));
        }
        if self.num_vars != other.num_vars {
            return Err(Error::domain(format!(
                "variable count mismatch: {} vs {}",
                self.num_vars, other.num_vars
            )));
        }
        Ok(())
    }
}

/// Graded-lexicographic comparison: total degree first, then lexicographic
/// with variable 0 most significant.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Multivariate exact division: returns h with f = g * h when g divides f,
/// else None. Divisibility is order-independent; graded-lex makes the
/// quotient canonical.
pub fn multi_divide_exact(f: &MultiPoly, g: &MultiPoly) -> Result<Option<MultiPoly>> {
    if g.is_zero() {
        return Err(Error::domain("division by the zero polynomial"));
    }
    f.check_compatible(g)?;
    let field = f.field();
    let n = f.num_vars();
    let (g_lead, g_lead_coeff) = g.leading_term().expect("nonzero divisor");
    let g_lead = g_lead.clone();
    let g_lead_inv = field.inv(g_lead_coeff)?;

    let mut rem = f.clone();
    let mut quot = MultiPoly::zero(field, n);
    while let Some((r_lead, r_coeff)) = rem.leading_term() {
        // Leading term must be divisible, otherwise a nonzero remainder is
        // unavoidable and f is not an exact multiple of g.
        let mut ratio = vec![0u32; n];
        for i in 0..n {
            if r_lead[i] < g_lead[i] {
                return Ok(None);
            }
            ratio[i] = r_lead[i] - g_lead[i];
        }
        let c = field.mul(r_coeff, g_lead_inv);
        quot.add_term(&ratio, c);
        let mut mono = MultiPoly::zero(field, n);
        mono.add_term(&ratio, c);
        rem = rem.sub(&mono.mul(g)?)?;
    }
    Ok(Some(quot))
}

/// Serialized form: canonical term list in BTreeMap order.
#[derive(Serialize, Deserialize)]
struct MultiPolyRepr {
    field: Field,
    num_vars: usize,
    terms: Vec<(Vec<u32>, u64)>,
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        MultiPolyRepr {
            field: self.field,
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), c)).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<MultiPoly, D::Error> {
        let repr = MultiPolyRepr::deserialize(de)?;
        MultiPoly::from_terms(repr.field, repr.num_vars, repr.terms)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn eval_matches_substitution() {
        let f = gf(3);
        // x - y at (1,1) -> 0
        let p = MultiPoly::var(f, 2, 0).sub(&MultiPoly::var(f, 2, 1)).unwrap();
        assert_eq!(p.evaluate(&[1, 1]).unwrap(), 0);

        let zero = MultiPoly::zero(f, 3);
        assert_eq!(zero.evaluate(&[2, 1, 0]).unwrap(), 0);

        // x*y + 1 over GF(5) at (2,3): 6 + 1 = 2
        let f5 = gf(5);
        let xy = MultiPoly::var(f5, 2, 0).mul(&MultiPoly::var(f5, 2, 1)).unwrap();
        let p = xy.add(&MultiPoly::constant(f5, 2, 1)).unwrap();
        assert_eq!(p.evaluate(&[2, 3]).unwrap(), 2);
    }

    #[test]
    fn eval_rejects_length_mismatch() {
        let p = MultiPoly::var(gf(3), 2, 0);
        assert!(p.evaluate(&[1]).is_err());
    }

    #[test]
    fn divide_difference_of_squares() {
        // (x^2 - y^2) / (x - y) = x + y over GF(5); oracle: expand the product.
        let f = gf(5);
        let x = MultiPoly::var(f, 2, 0);
        let y = MultiPoly::var(f, 2, 1);
        let fsq = x.mul(&x).unwrap().sub(&y.mul(&y).unwrap()).unwrap();
        let g = x.sub(&y).unwrap();
        let h = multi_divide_exact(&fsq, &g).unwrap().unwrap();
        assert_eq!(h, x.add(&y).unwrap());
        assert_eq!(g.mul(&h).unwrap(), fsq);
    }

    #[test]
    fn divide_self_is_one() {
        let f = gf(7);
        let x = MultiPoly::var(f, 2, 0);
        let g = x.mul(&x).unwrap().add(&MultiPoly::constant(f, 2, 3)).unwrap();
        let h = multi_divide_exact(&g, &g).unwrap().unwrap();
        assert_eq!(h, MultiPoly::constant(f, 2, 1));
    }

    #[test]
    fn divide_non_multiple_is_none() {
        let f = gf(5);
        let x = MultiPoly::var(f, 2, 0);
        let y = MultiPoly::var(f, 2, 1);
        assert_eq!(multi_divide_exact(&x, &y).unwrap(), None);
    }

    #[test]
    fn divide_by_zero_is_error() {
        let f = gf(5);
        let x = MultiPoly::var(f, 2, 0);
        assert!(multi_divide_exact(&x, &MultiPoly::zero(f, 2)).is_err());
    }

    #[test]
    fn divide_roundtrip_random() {
        // multi_divide_exact(f*g, g) = f for random sparse f, g.
        let field = gf(7);
        let mut rng = crate::rng::SplitMix64::new(0xd117);
        for _ in 0..60 {
            let f = crate::sample::random_multipoly(&mut rng, field, 3, 3, 4);
            let mut g = crate::sample::random_multipoly(&mut rng, field, 3, 2, 3);
            if g.is_zero() {
                g = MultiPoly::constant(field, 3, 1);
            }
            let prod = f.mul(&g).unwrap();
            let back = multi_divide_exact(&prod, &g).unwrap().unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn grlex_leading_term() {
        let f = gf(5);
        // 2*x0*x1 + x0^2: both degree 2, lex picks x0^2 (larger in var 0).
        let p = MultiPoly::from_terms(f, 2, vec![(vec![1, 1], 2), (vec![2, 0], 1)]).unwrap();
        let (lead, c) = p.leading_term().unwrap();
        assert_eq!(lead, &vec![2, 0]);
        assert_eq!(c, 1);
    }

    #[test]
    fn serde_roundtrip_is_canonical() {
        let f = gf(5);
        let p = MultiPoly::from_terms(f, 2, vec![(vec![1, 1], 2), (vec![2, 0], 1)]).unwrap();
        let s1 = serde_json::to_string(&p).unwrap();
        let q: MultiPoly = serde_json::from_str(&s1).unwrap();
        assert_eq!(p, q);
        assert_eq!(s1, serde_json::to_string(&q).unwrap());
    }
}
