//! Nisan-Wigderson set designs from the Reed-Solomon construction.
//!
//! For k = 2^t, l = k^c and r <= k, the family has one set per univariate
//! polynomial p of degree < r over GF(k^{c-1}):
//!
//!   S_p = { (i, p(i)) : i in F_k },  encoded as index i * k^{c-1} + y.
//!
//! Two distinct polynomials of degree < r agree in fewer than r places, so
//! all pairwise intersections are below r. Polynomials are enumerated by
//! their coefficient tuple in odometer order (constant coefficient fastest),
//! which fixes the family order and makes construction deterministic.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::par::{self, Parallelism};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Design {
    pub l: u64,
    pub k: u64,
    pub r: u64,
    pub sets: Vec<Vec<u64>>,
}

impl Design {
    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DesignBudget {
    pub max_universe: u64,
    pub max_family: u64,
}

impl Default for DesignBudget {
    fn default() -> Self {
        DesignBudget { max_universe: 1 << 20, max_family: 1 << 20 }
    }
}

/// Builds the (k^c, k, r) design with exactly k^{(c-1)r} sets.
pub fn build_design(k: u64, c: u32, r: u64) -> Result<Design> {
    build_design_with(k, c, r, DesignBudget::default(), Parallelism::default())
}

pub fn build_design_with(
    k: u64,
    c: u32,
    r: u64,
    budget: DesignBudget,
    mode: Parallelism,
) -> Result<Design> {
    if !k.is_power_of_two() || k < 2 {
        return Err(Error::parameter(format!("k = {k} must be a power of 2, at least 2")));
    }
    if c < 2 {
        return Err(Error::parameter(format!("c = {c} must be at least 2")));
    }
    if r < 1 || r > k {
        return Err(Error::parameter(format!("r = {r} must satisfy 1 <= r <= k = {k}")));
    }
    let t = k.trailing_zeros();
    let ext_bits = t
        .checked_mul(c - 1)
        .filter(|&b| b <= crate::field::MAX_BINARY_DEGREE)
        .ok_or_else(|| {
            Error::parameter(format!("GF(2^{}) exceeds the supported extension degree", t * (c - 1)))
        })?;
    let l = checked_pow(k, c)
        .ok_or_else(|| Error::budget("design universe", format!("{k}^{c}"), budget.max_universe))?;
    if l > budget.max_universe {
        return Err(Error::budget("design universe", l, budget.max_universe));
    }
    let q_ext = 1u64 << ext_bits; // |F_{k^{c-1}}|
    let m = checked_pow(q_ext, r as u32).ok_or_else(|| {
        Error::budget("design family size", format!("{k}^{}", (c - 1) as u64 * r), budget.max_family)
    })?;
    if m > budget.max_family {
        return Err(Error::budget("design family size", m, budget.max_family));
    }

    let ext = Field::binary(ext_bits)?;
    // Evaluation points: [k] injected into F_{k^{c-1}} by integer encoding.
    // Any injection preserves the agreement bound; for c = 2 this is the
    // identity on F_k.
    let eval_points: Vec<u64> = (0..k).collect();

    let sets = par::ordered_map(mode, m as usize, |index| {
        // decode polynomial coefficients, constant term fastest
        let mut coeffs = Vec::with_capacity(r as usize);
        let mut rest = index as u64;
        for _ in 0..r {
            coeffs.push(rest % q_ext);
            rest /= q_ext;
        }
        let mut set: Vec<u64> = eval_points
            .iter()
            .map(|&i| {
                let mut acc = 0u64;
                for &co in coeffs.iter().rev() {
                    acc = ext.add(ext.mul(acc, i), co);
                }
                i * q_ext + acc
            })
            .collect();
        set.sort_unstable();
        set
    });

    Ok(Design { l, k, r, sets })
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DesignViolation {
    /// Set `index` does not have exactly k in-range, sorted, distinct elements.
    MalformedSet { index: usize, reason: String },
    /// |S_i intersect S_j| >= r for the first offending pair.
    IntersectionTooLarge { i: usize, j: usize, intersection: u64 },
}

impl std::fmt::Display for DesignViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DesignViolation::MalformedSet { index, reason } => {
                write!(f, "set {index} is malformed: {reason}")
            }
            DesignViolation::IntersectionTooLarge { i, j, intersection } => {
                write!(f, "sets {i} and {j} intersect in {intersection} elements")
            }
        }
    }
}

/// Exhaustive check of the design invariants: every set well-formed, and
/// every pair's intersection below r. Returns the first violation in (i, j)
/// order, or None on pass.
///
/// The pair check is exact but strategy-adaptive: a pair intersects in >= r
/// elements exactly when the two sets share some r-subset, so when
/// C(k, r) * m is small the sweep buckets r-subsets instead of walking all
/// m^2 pairs; small universes use bitset intersections; everything else
/// falls back to a sorted merge per pair.
pub fn verify_design(d: &Design) -> Option<DesignViolation> {
    verify_design_with(d, Parallelism::default())
}

pub fn verify_design_with(d: &Design, mode: Parallelism) -> Option<DesignViolation> {
    for (index, s) in d.sets.iter().enumerate() {
        if s.len() as u64 != d.k {
            return Some(DesignViolation::MalformedSet {
                index,
                reason: format!("has {} elements, expected k = {}", s.len(), d.k),
            });
        }
        for w in s.windows(2) {
            if w[0] >= w[1] {
                return Some(DesignViolation::MalformedSet {
                    index,
                    reason: "elements not strictly increasing".into(),
                });
            }
        }
        if let Some(&last) = s.last() {
            if last >= d.l {
                return Some(DesignViolation::MalformedSet {
                    index,
                    reason: format!("element {last} outside universe [0, {})", d.l),
                });
            }
        }
    }

    if d.r > d.k {
        return None; // intersections are at most k, below r
    }
    let m = d.sets.len();
    let bucket_entries = binomial(d.k, d.r).and_then(|c| c.checked_mul(m as u64));
    let element_bits = 64 - d.l.saturating_sub(1).leading_zeros().min(63) as u64;
    let first_pair = if d.r >= 1
        && bucket_entries.is_some_and(|e| e <= 20_000_000)
        && d.r * element_bits.max(1) <= 128
    {
        bucket_pair_scan(d, mode)
    } else if d.l <= 512 {
        bitset_pair_scan(d, mode)
    } else {
        merge_pair_scan(d, mode)
    };

    first_pair.map(|(i, j)| DesignViolation::IntersectionTooLarge {
        i,
        j,
        intersection: intersection_size(&d.sets[i], &d.sets[j], u64::MAX),
    })
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?/ (i + 1);
    }
    Some(acc)
}

/// Buckets every r-subset of every set: two sets landing in one bucket
/// intersect in at least r elements. Exact, near-linear in C(k,r) * m.
fn bucket_pair_scan(d: &Design, mode: Parallelism) -> Option<(usize, usize)> {
    let r = d.r as usize;
    let bits = (64 - d.l.saturating_sub(1).leading_zeros().min(63)).max(1);
    let per_set = binomial(d.k, d.r).expect("checked by caller") as usize;
    let chunks: Vec<Vec<(u128, u32)>> = par::ordered_map(mode, d.sets.len(), |si| {
        let set = &d.sets[si];
        let mut keys = Vec::with_capacity(per_set);
        let mut combo: Vec<usize> = (0..r).collect();
        loop {
            let mut key: u128 = 0;
            for &pos in &combo {
                key = (key << bits) | set[pos] as u128;
            }
            keys.push((key, si as u32));
            // next combination
            let mut idx = r;
            loop {
                if idx == 0 {
                    return keys;
                }
                idx -= 1;
                if combo[idx] != idx + set.len() - r {
                    break;
                }
            }
            combo[idx] += 1;
            for j in idx + 1..r {
                combo[j] = combo[j - 1] + 1;
            }
        }
    });
    let mut entries: Vec<(u128, u32)> = chunks.into_iter().flatten().collect();
    entries.sort_unstable();
    let mut best: Option<(usize, usize)> = None;
    let mut run_start = 0;
    for idx in 1..=entries.len() {
        if idx == entries.len() || entries[idx].0 != entries[run_start].0 {
            let run = &entries[run_start..idx];
            if run.len() > 1 {
                // sets are sorted within the run; the smallest (i, j) pair
                // in this bucket is the first two distinct indices
                for w in run.windows(2) {
                    let (a, b) = (w[0].1 as usize, w[1].1 as usize);
                    if a != b {
                        let pair = (a.min(b), a.max(b));
                        if best.is_none_or(|cur| pair < cur) {
                            best = Some(pair);
                        }
                        break;
                    }
                }
            }
            run_start = idx;
        }
    }
    best
}

/// Dense-bitset pair sweep for small universes.
fn bitset_pair_scan(d: &Design, mode: Parallelism) -> Option<(usize, usize)> {
    let words = (d.l as usize).div_ceil(64);
    let m = d.sets.len();
    let mut bits = vec![0u64; words * m];
    for (si, set) in d.sets.iter().enumerate() {
        for &v in set {
            bits[si * words + (v / 64) as usize] |= 1u64 << (v % 64);
        }
    }
    let bits = &bits;
    par::first_match(mode, m as u64, |i| {
        let i = i as usize;
        let a = &bits[i * words..(i + 1) * words];
        for j in i + 1..m {
            let b = &bits[j * words..(j + 1) * words];
            let inter: u64 = a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as u64).sum();
            if inter >= d.r {
                return Some((i, j));
            }
        }
        None
    })
}

fn merge_pair_scan(d: &Design, mode: Parallelism) -> Option<(usize, usize)> {
    let m = d.sets.len();
    par::first_match(mode, m as u64, |i| {
        let i = i as usize;
        let si = &d.sets[i];
        for (dj, sj) in d.sets[i + 1..].iter().enumerate() {
            if intersection_size(si, sj, d.r) >= d.r {
                return Some((i, i + 1 + dj));
            }
        }
        None
    })
}

/// Sorted-merge intersection count, stopping as soon as `stop_at` is reached.
fn intersection_size(a: &[u64], b: &[u64], stop_at: u64) -> u64 {
    let mut count = 0u64;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                if count >= stop_at {
                    return count;
                }
                i += 1;
                j += 1;
            }
        }
    }
    count
}
