//! Exact arithmetic for the recursive generator's parameter schedule.
//!
//! Stage quantities grow through an exponential tower, so n_i is carried as
//! a [`TowerInt`]: either an exact big integer or 2^(tower). The exponents
//! t_i stay exact rationals at every stage reached in practice, and the
//! closed form 20^(2^j - 1) * t_2^(2^j) for the tail recurrence
//! t_i = 20 * t_{i-1}^2 (anchored at t_2, j = i - 2) is checked against the
//! recurrence wherever both are defined.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use std::cmp::Ordering;
use std::fmt;

/// Threshold below which 2^e is materialized as a plain integer.
const MATERIALIZE_EXP_BITS: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerInt {
    Value(BigUint),
    /// 2^(exp - shift) for a tower exponent; only used when the result
    /// would not be materializable. The shift absorbs exact halvings of
    /// towers whose exponent is itself a tower.
    Pow2 { exp: Box<TowerInt>, shift: u64 },
}

impl TowerInt {
    pub fn from_u64(v: u64) -> TowerInt {
        TowerInt::Value(v.into())
    }

    pub fn value(&self) -> Option<&BigUint> {
        match self {
            TowerInt::Value(v) => Some(v),
            TowerInt::Pow2 { .. } => None,
        }
    }

    pub fn pow2(exponent: TowerInt) -> TowerInt {
        if let TowerInt::Value(e) = &exponent {
            if *e <= BigUint::from(MATERIALIZE_EXP_BITS) {
                let e = e.to_u64().expect("bounded");
                return TowerInt::Value(BigUint::one() << e);
            }
        }
        TowerInt::Pow2 { exp: Box::new(exponent), shift: 0 }
    }

    pub fn pow(&self, e: u32) -> Result<TowerInt> {
        match self {
            TowerInt::Value(v) => Ok(TowerInt::Value(v.pow(e))),
            TowerInt::Pow2 { .. } => {
                Err(Error::domain("tower arithmetic beyond the supported depth (power)"))
            }
        }
    }

    /// Divides this tower by 2^k exactly, staying a tower; used on
    /// exponents when rooting. The bool reports exactness.
    fn div_pow2(&self, k: u64) -> Result<(TowerInt, bool)> {
        match self {
            TowerInt::Value(v) => {
                let floored = v >> k as usize;
                let exact = (&floored << k as usize) == *v;
                Ok((TowerInt::Value(floored), exact))
            }
            TowerInt::Pow2 { exp, shift } => {
                // (2^(e - s)) / 2^k = 2^(e - s - k)
                Ok((TowerInt::Pow2 { exp: exp.clone(), shift: shift + k }, true))
            }
        }
    }

    /// The exponent (value(exp) - shift) as a tower, for 2^k-th roots.
    fn exponent_tower(exp: &TowerInt, shift: u64) -> Result<TowerInt> {
        match exp {
            TowerInt::Value(v) => {
                if *v < BigUint::from(shift) {
                    return Err(Error::domain("tower exponent underflow"));
                }
                Ok(TowerInt::Value(v - shift))
            }
            TowerInt::Pow2 { .. } if shift == 0 => Ok(exp.clone()),
            TowerInt::Pow2 { .. } => {
                Err(Error::domain("tower arithmetic beyond the supported depth (offset exponent)"))
            }
        }
    }

    fn root_pow2(&self, k: u64) -> Result<(TowerInt, bool)> {
        match self {
            TowerInt::Value(_) => unreachable!("materialized roots handled by callers"),
            TowerInt::Pow2 { exp, shift } => {
                let e = TowerInt::exponent_tower(exp, *shift)?;
                let (half, exact) = e.div_pow2(k)?;
                Ok((TowerInt::pow2(half), exact))
            }
        }
    }

    /// Integer square root; exact flag set when the root is exact.
    pub fn sqrt(&self) -> Result<(TowerInt, bool)> {
        match self {
            TowerInt::Value(v) => {
                let r = v.sqrt();
                Ok((TowerInt::Value(r.clone()), &r * &r == *v))
            }
            TowerInt::Pow2 { .. } => self.root_pow2(1),
        }
    }

    pub fn fourth_root(&self) -> Result<(TowerInt, bool)> {
        match self {
            TowerInt::Value(v) => {
                let r = v.nth_root(4);
                Ok((TowerInt::Value(r.clone()), r.pow(4) == *v))
            }
            TowerInt::Pow2 { .. } => self.root_pow2(2),
        }
    }

    pub fn cmp_biguint(&self, other: &BigUint) -> Ordering {
        match self {
            TowerInt::Value(v) => v.cmp(other),
            TowerInt::Pow2 { exp, shift } => {
                // 2^(e - s) > other whenever e - s >= bits(other); towers in
                // this branch have e - s far above any materializable width.
                let threshold = BigUint::from(other.bits()) + BigUint::from(*shift);
                match exp.cmp_biguint(&threshold) {
                    Ordering::Less => {
                        let e = exp.value().and_then(|v| v.to_u64()).expect(
                            "exponent below bits(other) + shift is materializable",
                        );
                        (BigUint::one() << (e - *shift)).cmp(other)
                    }
                    _ => Ordering::Greater,
                }
            }
        }
    }

    /// Compares this integer with a (nonnegative) rational, exactly.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        debug_assert!(!r.is_negative());
        let p = r.numer().to_biguint().expect("nonnegative");
        let q = r.denom().to_biguint().expect("positive");
        match self {
            TowerInt::Value(v) => (v * &q).cmp(&p),
            TowerInt::Pow2 { exp, shift } => {
                // 2^(e - s) * q vs p
                let threshold = BigUint::from(p.bits()) + BigUint::from(*shift);
                match exp.cmp_biguint(&threshold) {
                    Ordering::Less => {
                        let e = exp.value().and_then(|v| v.to_u64()).expect("small exponent");
                        ((BigUint::one() << (e - *shift)) * &q).cmp(&p)
                    }
                    _ => Ordering::Greater, // 2^(e-s) >= 2^bits(p) > p >= p/q
                }
            }
        }
    }
}

impl fmt::Display for TowerInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerInt::Value(v) => write!(f, "{v}"),
            TowerInt::Pow2 { exp, shift: 0 } => write!(f, "2^({exp})"),
            TowerInt::Pow2 { exp, shift } => write!(f, "2^({exp} - {shift})"),
        }
    }
}

pub use crate::ratio::{parse_rational, rational_to_string};

/// The (l, k, r) design parameters of one stage, kept symbolic.
#[derive(Debug, Clone)]
pub struct DesignTriple {
    pub l: TowerInt,
    pub k: TowerInt,
    pub r: TowerInt,
}

#[derive(Debug, Clone)]
pub struct StageParams {
    pub i: u32,
    pub n: TowerInt,
    pub t: BigRational,
    pub design: DesignTriple,
    /// s-exponent multipliers this stage feeds to deeper recursive calls.
    pub recursion_exponents: Vec<BigRational>,
}

#[derive(Debug, Clone)]
pub struct Schedule {
    pub n0: u64,
    pub epsilon: BigRational,
    /// B = 3 n0 / epsilon.
    pub big_b: BigRational,
    pub s_star: BigUint,
    pub t0: BigRational,
    /// Stages 1..=b where b is minimal with n_b >= s_star (empty when
    /// n_0 >= s_star already).
    pub stages: Vec<StageParams>,
    pub warnings: Vec<String>,
}

pub const MAX_STAGE_PREVIEW: u32 = 8;

impl Schedule {
    pub fn stage_count(&self) -> u32 {
        self.stages.len() as u32
    }

    pub fn stage(&self, i: u32) -> Option<&StageParams> {
        self.stages.get(i.checked_sub(1)? as usize)
    }

    /// t_i by the recurrence, defined for any i (0 = n0 - epsilon).
    pub fn t(&self, i: u32) -> BigRational {
        match i {
            0 => self.t0.clone(),
            1 => {
                // n_1 / 50
                let n1 = BigUint::from(self.n0).pow(8);
                BigRational::new(n1.into(), 50.into())
            }
            2 => {
                // n_2^{1/4} / 10 with n_2 = n_0^80; the fourth root n_0^20
                // is exact.
                let root = BigUint::from(self.n0).pow(20);
                BigRational::new(root.into(), 10.into())
            }
            i => {
                let prev = self.t(i - 1);
                BigRational::from_integer(20.into()) * &prev * &prev
            }
        }
    }

    /// Closed form for the tail recurrence: t_i = 20^(2^(i-2) - 1) * t_2^(2^(i-2))
    /// for i >= 2. Returns None below the anchor.
    pub fn t_closed_form(&self, i: u32) -> Option<BigRational> {
        if i < 2 {
            return None;
        }
        let j = i - 2;
        let e = 1u32.checked_shl(j)?; // 2^j
        let twenty = BigRational::from_integer(20.into());
        let t2 = self.t(2);
        Some(twenty.pow(e as i32 - 1) * pow_rational(&t2, e))
    }

    /// n_i as a tower, recomputed on demand (i = 0 gives n_0). Errors when
    /// the tower arithmetic runs past the supported depth.
    pub fn n(&self, i: u32) -> Result<TowerInt> {
        let mut n = TowerInt::from_u64(self.n0);
        for stage in 1..=i {
            n = match stage {
                1 => n.pow(8)?,
                2 => n.pow(10)?,
                _ => {
                    let (root, _exact) = n.fourth_root()?;
                    TowerInt::pow2(root)
                }
            };
        }
        Ok(n)
    }
}

fn pow_rational(r: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut base = r.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Builds the stage list for the reference growth schedule: n_1 = n_0^8 with t_1 =
/// n_1/50, n_2 = n_1^10 with t_2 = n_2^{1/4}/10, then n_i = 2^(n_{i-1}^{1/4})
/// with t_i = 20 t_{i-1}^2. Full-scale preconditions are reported as warnings,
/// never as errors.
pub fn reference_schedule(
    n0: u64,
    epsilon: BigRational,
    s_star: BigUint,
) -> Result<Schedule> {
    if n0 < 2 {
        return Err(Error::parameter(format!("n0 = {n0} must be at least 2")));
    }
    if !epsilon.is_positive() {
        return Err(Error::parameter("epsilon must be positive"));
    }
    let t0 = BigRational::from_integer(n0.into()) - &epsilon;
    let big_b = BigRational::new((3 * n0).into(), 1.into()) / &epsilon;

    let mut warnings = Vec::new();
    let threshold = BigRational::new(150.into(), 1.into()) / &epsilon;
    if BigRational::from_integer(n0.into()) <= threshold {
        warnings.push(format!(
            "precondition violated: n0 = {n0} is not above 150/epsilon = {}",
            rational_to_string(&threshold)
        ));
    }

    let mut schedule = Schedule {
        n0,
        epsilon,
        big_b: big_b.clone(),
        s_star: s_star.clone(),
        t0,
        stages: Vec::new(),
        warnings,
    };

    let mut i = 0u32;
    let mut n = TowerInt::from_u64(n0);
    while n.cmp_biguint(&s_star) == Ordering::Less {
        i += 1;
        if i > MAX_STAGE_PREVIEW {
            schedule.warnings.push(format!(
                "stage list truncated at {MAX_STAGE_PREVIEW} stages before reaching s* = {s_star}"
            ));
            break;
        }
        let prev_n = n.clone();
        let (next_n, design, recursion) = match i {
            1 => {
                let l = prev_n.pow(5)?;
                let design = DesignTriple {
                    l,
                    k: prev_n.clone(),
                    r: TowerInt::from_u64(2),
                };
                (prev_n.pow(8)?, design, vec![big_b.clone()])
            }
            2 => {
                let design = DesignTriple {
                    l: prev_n.pow(2)?,
                    k: prev_n.clone(),
                    r: TowerInt::from_u64(10),
                };
                (prev_n.pow(10)?, design, vec![BigRational::from_integer(5.into())])
            }
            _ => {
                let (k, k_exact) = prev_n.sqrt()?;
                let (r, r_exact) = prev_n.fourth_root()?;
                if !k_exact || !r_exact {
                    schedule.warnings.push(format!(
                        "stage {i}: sqrt/fourth-root of n_{} floored to stay integral",
                        i - 1
                    ));
                }
                let design = DesignTriple { l: prev_n.clone(), k, r: r.clone() };
                let t_prev = schedule.t(i - 1);
                let recursion = vec![
                    BigRational::from_integer(5.into()),
                    BigRational::from_integer(20.into()) * &t_prev,
                ];
                (TowerInt::pow2(r), design, recursion)
            }
        };
        let t = schedule.t(i);
        schedule.stages.push(StageParams { i, n: next_n.clone(), t, design, recursion_exponents: recursion });
        n = next_n;
    }

    // stage-specific proof inequalities, logged not enforced
    check_inequalities(&mut schedule);
    Ok(schedule)
}

fn check_inequalities(schedule: &mut Schedule) {
    let mut notes = Vec::new();
    for stage in &schedule.stages {
        match stage.i {
            1 => {
                // B * l < m / 50 with l = n0^5, m = n0^8
                let n0 = BigUint::from(schedule.n0);
                let lhs = &schedule.big_b * BigRational::from_integer(n0.pow(5).into());
                let rhs = BigRational::new(n0.pow(8).into(), 50.into());
                if lhs >= rhs {
                    notes.push(format!(
                        "stage 1 inequality violated: B*l = {} is not below m/50 = {}",
                        rational_to_string(&lhs),
                        rational_to_string(&rhs)
                    ));
                }
            }
            2 => {
                // h(m) = 3 m^{1/5} <= (1/10) m^{1/4} with m = n_2
                // equivalent to 30^20 <= m
                let m = BigUint::from(schedule.n0).pow(80);
                if m < BigUint::from(30u32).pow(20) {
                    notes.push(
                        "stage 2 inequality violated: 3*m^(1/5) exceeds (1/10)*m^(1/4)".to_string(),
                    );
                }
            }
            i => {
                // 5 r g(n) <= k with g = t_{i-1}, k = sqrt(n_{i-1}), r = n_{i-1}^{1/4}
                let g = schedule.t(i - 1);
                let five_rg = BigRational::from_integer(5.into()) * &g;
                // compare k / r = n^{1/4} against 5 g: 5 r g <= k <=> 5 g <= n^{1/4}
                if let Some(st) = schedule.stage(i) {
                    if st.design.r.cmp_rational(&five_rg) == Ordering::Less {
                        notes.push(format!(
                            "stage {i} inequality violated: 5*r*g(n) exceeds k"
                        ));
                    }
                }
            }
        }
    }
    schedule.warnings.extend(notes);
}
