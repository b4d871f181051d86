//! Univariate polynomials over a finite field, lowest-degree-first
//! coefficients with trailing zeros trimmed.

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    /// coeffs[i] is the coefficient of x^i; empty means the zero polynomial.
    coeffs: Vec<u64>,
}

impl UniPoly {
    pub fn new(field: Field, mut coeffs: Vec<u64>) -> Result<UniPoly> {
        for &c in &coeffs {
            if !field.is_canonical(c) {
                return Err(Error::domain(format!("coefficient {c} not canonical in {field}")));
            }
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Ok(UniPoly { field, coeffs })
    }

    pub fn zero(field: Field) -> UniPoly {
        UniPoly { field, coeffs: Vec::new() }
    }

    pub fn constant(field: Field, c: u64) -> UniPoly {
        UniPoly::new(field, vec![c]).expect("canonical constant")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn evaluate(&self, x: u64) -> u64 {
        let f = self.field;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> Result<UniPoly> {
        let f = self.check_field(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        UniPoly::new(f, coeffs)
    }

    pub fn mul(&self, other: &UniPoly) -> Result<UniPoly> {
        let f = self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(UniPoly::zero(f));
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        UniPoly::new(f, coeffs)
    }

    pub fn scale(&self, c: u64) -> UniPoly {
        let f = self.field;
        UniPoly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect()).expect("canonical")
    }

    fn check_field(&self, other: &UniPoly) -> Result<Field> {
        if self.field != other.field {
            return Err(Error::SpecMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(self.field)
    }
}

/// Lagrange interpolation: the unique polynomial of degree < #points through
/// all of them. Abscissae must be distinct.
pub fn uni_interpolate(field: Field, points: &[(u64, u64)]) -> Result<UniPoly> {
    if points.is_empty() {
        return Err(Error::domain("interpolation needs at least one point"));
    }
    for (i, &(xi, _)) in points.iter().enumerate() {
        for &(xj, _) in &points[i + 1..] {
            if xi == xj {
                return Err(Error::domain(format!("duplicate abscissa {xi}")));
            }
        }
    }
    if (field.order() as usize) < points.len() {
        return Err(Error::FieldTooSmall {
            needed: points.len().to_string(),
            order: field.order().to_string(),
        });
    }

    let mut acc = UniPoly::zero(field);
    for (i, &(xi, yi)) in points.iter().enumerate() {
        if yi == 0 {
            continue;
        }
        // basis_i = prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = UniPoly::constant(field, 1);
        let mut denom = 1u64;
        for (j, &(xj, _)) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            let linear = UniPoly::new(field, vec![field.neg(xj), 1])?;
            basis = basis.mul(&linear)?;
            denom = field.mul(denom, field.sub(xi, xj));
        }
        let scale = field.div(yi, denom)?;
        acc = acc.add(&basis.scale(scale))?;
    }
    Ok(acc)
}

/// Coefficients of the Lagrange basis polynomials for a node set; column u is
/// the weight vector turning evaluations at the nodes into the coefficient of
/// x^i: coeff_i = sum_u weights\[i\]\[u\] * value_at_node_u.
pub fn lagrange_weights(field: Field, nodes: &[u64]) -> Result<Vec<Vec<u64>>> {
    let n = nodes.len();
    let mut weights = vec![vec![0u64; n]; n];
    for (u, &xu) in nodes.iter().enumerate() {
        let mut basis = UniPoly::constant(field, 1);
        let mut denom = 1u64;
        for (v, &xv) in nodes.iter().enumerate() {
            if v == u {
                continue;
            }
            if xv == xu {
                return Err(Error::domain(format!("duplicate node {xu}")));
            }
            basis = basis.mul(&UniPoly::new(field, vec![field.neg(xv), 1])?)?;
            denom = field.mul(denom, field.sub(xu, xv));
        }
        let inv = field.inv(denom)?;
        for (i, row) in weights.iter_mut().enumerate() {
            row[u] = field.mul(basis.coeff(i), inv);
        }
    }
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn interpolate_three_points_gf7() {
        // Oracle: Lagrange formula by hand gives x^2 + 1; evaluate back.
        let f = gf(7);
        let pts = [(0, 1), (1, 2), (2, 5)];
        let p = uni_interpolate(f, &pts).unwrap();
        assert_eq!(p.coeffs(), &[1, 0, 1]);
        for &(x, y) in &pts {
            assert_eq!(p.evaluate(x), y);
        }
    }

    #[test]
    fn interpolate_single_point_is_constant() {
        let p = uni_interpolate(gf(5), &[(3, 4)]).unwrap();
        assert_eq!(p.coeffs(), &[4]);
    }

    #[test]
    fn interpolate_zero_data_is_zero() {
        let p = uni_interpolate(gf(5), &[(0, 0), (1, 0), (2, 0)]).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn duplicate_abscissae_rejected() {
        assert!(uni_interpolate(gf(5), &[(1, 2), (1, 3)]).is_err());
    }

    #[test]
    fn interpolate_inverts_evaluation() {
        // Random polynomials of degree < q: interpolating their evaluations
        // at all field points recovers them coefficient-exactly.
        for f in [gf(5), gf(11), Field::binary(3).unwrap()] {
            let q = f.order();
            let mut rng = crate::rng::SplitMix64::new(0xabc);
            for _ in 0..50 {
                let deg = rng.below(q) as usize;
                let coeffs: Vec<u64> = (0..=deg).map(|_| rng.below(q)).collect();
                let p = UniPoly::new(f, coeffs).unwrap();
                let pts: Vec<(u64, u64)> = f.elements().map(|x| (x, p.evaluate(x))).collect();
                let back = uni_interpolate(f, &pts).unwrap();
                assert_eq!(back, p);
            }
        }
    }

    #[test]
    fn lagrange_weights_reconstruct_coefficients() {
        let f = gf(7);
        let p = UniPoly::new(f, vec![2, 0, 3, 1]).unwrap();
        let nodes: Vec<u64> = (0..4).collect();
        let w = lagrange_weights(f, &nodes).unwrap();
        for (i, row) in w.iter().enumerate() {
            let mut c = 0;
            for (u, &x) in nodes.iter().enumerate() {
                c = f.add(c, f.mul(row[u], p.evaluate(x)));
            }
            assert_eq!(c, p.coeff(i), "coefficient {i}");
        }
    }
}
