//! Exact arithmetic in prime fields GF(p) and binary extension fields GF(2^t).
//!
//! Elements are canonical `u64` representatives: integers in `[0, p)` for the
//! prime case, and bit-vectors (LSB = constant term) for the binary case.
//! Binary fields use a fixed built-in table of irreducible polynomials for
//! t <= 16, so the same `t` always names the same field.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Lexicographically smallest irreducible polynomial of degree t over GF(2),
/// encoded with bit i = coefficient of x^i. Index 0 is unused.
const IRREDUCIBLE: [u64; 17] = [
    0, 0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b,
];

pub const MAX_BINARY_DEGREE: u32 = 16;

/// A concrete finite field: either GF(p) for a prime p, or GF(2^t) with a
/// fixed irreducible polynomial. Cheap to copy and compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Prime { p: u64 },
    Binary { t: u32, poly: u64 },
}

impl Field {
    /// GF(p). The modulus is verified prime by trial division.
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 {
            return Err(Error::InvalidField(format!("modulus {p} is below 2")));
        }
        if p > (1 << 62) {
            return Err(Error::InvalidField(format!(
                "modulus {p} exceeds the supported range 2^62"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("modulus {p} is not prime")));
        }
        Ok(Field::Prime { p })
    }

    /// GF(2^t) with the built-in irreducible polynomial, t <= 16.
    pub fn binary(t: u32) -> Result<Field> {
        if t == 0 || t > MAX_BINARY_DEGREE {
            return Err(Error::InvalidField(format!(
                "extension degree {t} outside 1..={MAX_BINARY_DEGREE}"
            )));
        }
        let poly = IRREDUCIBLE[t as usize];
        // root/factor check over GF(2), cheap at these degrees
        if !is_irreducible_gf2(poly, t) {
            return Err(Error::InvalidField(format!(
                "table polynomial {poly:#x} for t={t} is not irreducible"
            )));
        }
        Ok(Field::Binary { t, poly })
    }

    /// Number of elements, q = p or 2^t.
    pub fn order(&self) -> u64 {
        match *self {
            Field::Prime { p } => p,
            Field::Binary { t, .. } => 1 << t,
        }
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    pub fn is_canonical(&self, v: u64) -> bool {
        v < self.order()
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(self.is_canonical(a) && self.is_canonical(b));
        match *self {
            Field::Prime { p } => {
                let s = a + b;
                if s >= p {
                    s - p
                } else {
                    s
                }
            }
            Field::Binary { .. } => a ^ b,
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(self.is_canonical(a) && self.is_canonical(b));
        match *self {
            Field::Prime { p } => {
                if a >= b {
                    a - b
                } else {
                    p - (b - a)
                }
            }
            Field::Binary { .. } => a ^ b,
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        self.sub(0, a)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(self.is_canonical(a) && self.is_canonical(b));
        match *self {
            Field::Prime { p } => ((a as u128 * b as u128) % p as u128) as u64,
            Field::Binary { t, poly } => {
                // Carry-less multiply, then reduce modulo the field polynomial.
                let mut prod: u64 = 0;
                let mut x = a;
                let mut y = b;
                while y != 0 {
                    if y & 1 == 1 {
                        prod ^= x;
                    }
                    x <<= 1;
                    y >>= 1;
                }
                reduce_gf2(prod, poly, t)
            }
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        // a^(q-2) = a^{-1} in a field of order q.
        Ok(self.pow(a, self.order() - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Canonicalize an arbitrary integer into the field (prime: mod p;
    /// binary: reduce the bit-vector by the field polynomial).
    pub fn canon(&self, v: u64) -> u64 {
        match *self {
            Field::Prime { p } => v % p,
            Field::Binary { t, poly } => reduce_gf2(v, poly, t),
        }
    }

    /// Canonicalize a signed integer (used when parsing text inputs).
    pub fn canon_i64(&self, v: i64) -> u64 {
        match *self {
            Field::Prime { p } => v.rem_euclid(p as i64) as u64,
            Field::Binary { t, poly } => reduce_gf2(v.unsigned_abs(), poly, t),
        }
    }

    /// Elements in integer order of their canonical encoding: 0, 1, 2, ...
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order()
    }

    pub fn element(&self, v: u64) -> Result<FieldElement> {
        if !self.is_canonical(v) {
            return Err(Error::domain(format!(
                "{v} is not a canonical element of {self}"
            )));
        }
        Ok(FieldElement { field: *self, value: v })
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Field::Prime { p } => write!(f, "GF({p})"),
            Field::Binary { t, .. } => write!(f, "GF(2^{t})"),
        }
    }
}

/// Parses the config-file notation: `GF(p)` or `GF(2^t)`.
impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        let inner = s
            .strip_prefix("GF(")
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| Error::format(format!("bad field spec {s:?}, expected GF(p) or GF(2^t)")))?;
        if let Some(t) = inner.strip_prefix("2^") {
            let t: u32 = t
                .parse()
                .map_err(|_| Error::format(format!("bad extension degree {t:?}")))?;
            Field::binary(t)
        } else {
            let p: u64 = inner
                .parse()
                .map_err(|_| Error::format(format!("bad modulus {inner:?}")))?;
            Field::prime(p)
        }
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Field, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An element tied to its field. Mixed-field operations are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: u64,
}

impl FieldElement {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<Field> {
        if self.field != other.field {
            return Err(Error::SpecMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(self.field)
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(FieldElement { field: f, value: f.add(self.value, other.value) })
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(FieldElement { field: f, value: f.sub(self.value, other.value) })
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(FieldElement { field: f, value: f.mul(self.value, other.value) })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(FieldElement { field: f, value: f.div(self.value, other.value)? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Dispatch form of element arithmetic, mirroring the four binary operations.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b),
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn reduce_gf2(mut a: u64, poly: u64, t: u32) -> u64 {
    let deg = |x: u64| 63 - x.leading_zeros();
    while a != 0 && deg(a) >= t {
        a ^= poly << (deg(a) - t);
    }
    a
}

/// Irreducibility over GF(2): no root and no factor of degree <= t/2.
fn is_irreducible_gf2(poly: u64, t: u32) -> bool {
    if t == 1 {
        return poly == 0x3 || poly == 0x2;
    }
    // constant term 0 means x divides it
    if poly & 1 == 0 {
        return false;
    }
    for d in 1..=(t / 2) {
        for f in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem_gf2(poly, f) == 0 {
                return false;
            }
        }
    }
    true
}

fn poly_rem_gf2(mut a: u64, m: u64) -> u64 {
    let deg = |x: u64| 63 - x.leading_zeros();
    let dm = deg(m);
    while a != 0 && deg(a) >= dm {
        a ^= m << (deg(a) - dm);
    }
    a
}
