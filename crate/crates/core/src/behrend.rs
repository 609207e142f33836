//! Behrend-type sphere constructions and brute-force relation verifiers.
//!
//! Every construction here takes the integers whose base-`m` digits lie in
//! `{0, ..., ⌊m/Γ⌋ - 1}` and whose digit vector has a fixed squared norm
//! `r`. With enough digit headroom `Γ`, a linear relation among members
//! holds digit by digit without carries, and the sphere then forces the
//! solution to be trivial.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Rational, Result};

/// Digit headroom for 3-term progressions `x + z = 2y`.
pub const GAMMA_3AP: u64 = 2;
/// Digit headroom for `x + y + z = 3w`: the sum of coefficient magnitudes.
pub const GAMMA_SUM_FREE: u64 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitSphereParams {
    /// Members lie in `0..l`.
    pub l: u64,
    /// Number of digits, `⌊√(ln l)⌋` clamped to at least 1.
    pub d: u32,
    /// Base, `⌊l^{1/d}⌋`.
    pub m: u64,
    pub gamma: u64,
    /// Digits range over `0..digit_bound`.
    pub digit_bound: u64,
    /// The chosen squared radius.
    pub r: u64,
    /// `m < Γ`: no admissible nonzero digit, the set is `{0}`.
    pub degenerate: bool,
}

impl DigitSphereParams {
    /// `⌊m/Γ⌋^d / (d·(m/Γ)²)`: the pigeonhole lower bound on the size of the
    /// most popular sphere.
    pub fn pigeonhole_bound(&self) -> Rational {
        let dig = BigInt::from(self.m / self.gamma).pow(self.d);
        let num = dig * BigInt::from(self.gamma).pow(2);
        let den = BigInt::from(self.d) * BigInt::from(self.m).pow(2);
        Rational::new(num, den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereSet {
    pub params: DigitSphereParams,
    /// Members in increasing order.
    pub elements: Vec<u64>,
}

impl SphereSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Base-`m` digits of a member, least significant first.
    pub fn digits(&self, mut x: u64) -> Vec<u64> {
        (0..self.params.d)
            .map(|_| {
                let r = x % self.params.m;
                x /= self.params.m;
                r
            })
            .collect()
    }
}

/// Largest `m` with `m^d <= l`.
fn integer_root(l: u64, d: u32) -> u64 {
    let mut m = (l as f64).powf(1.0 / d as f64).round() as u64;
    let fits = |m: u64| m.checked_pow(d).is_some_and(|p| p <= l);
    while m > 0 && !fits(m) {
        m -= 1;
    }
    while fits(m + 1) {
        m += 1;
    }
    m
}

/// The largest sphere class among digit vectors in `{0..⌊m/Γ⌋-1}^d`.
pub fn digit_sphere(l: u64, gamma: u64) -> Result<SphereSet> {
    if l == 0 {
        return Err(Error::Invalid("L must be positive".into()));
    }
    if gamma == 0 {
        return Err(Error::Invalid("digit headroom must be positive".into()));
    }
    let d = ((l as f64).ln().sqrt().floor() as u32).max(1);
    let m = integer_root(l, d);
    let degenerate = m < gamma;
    let digit_bound = if degenerate { 1 } else { m / gamma };

    // counts[s] = number of digit vectors with squared norm s
    let max_sq = (digit_bound - 1) * (digit_bound - 1);
    let mut counts = vec![1u128];
    for _ in 0..d {
        let mut next = vec![0u128; counts.len() + max_sq as usize];
        for (s, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for x in 0..digit_bound {
                next[s + (x * x) as usize] += c;
            }
        }
        counts = next;
    }
    let r = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(s, _)| s as u64)
        .unwrap_or(0);

    let mut elements = Vec::new();
    let mut digits = vec![0u64; d as usize];
    collect_sphere(&mut digits, 0, r, digit_bound, m, &mut elements);
    elements.sort_unstable();
    Ok(SphereSet { params: DigitSphereParams { l, d, m, gamma, digit_bound, r, degenerate }, elements })
}

fn collect_sphere(digits: &mut [u64], pos: usize, remaining: u64, bound: u64, m: u64, out: &mut Vec<u64>) {
    if pos == digits.len() {
        if remaining == 0 {
            out.push(digits.iter().rev().fold(0, |acc, &x| acc * m + x));
        }
        return;
    }
    let left = (digits.len() - pos - 1) as u64;
    for x in 0..bound {
        let sq = x * x;
        if sq > remaining {
            break;
        }
        if remaining - sq > left * (bound - 1) * (bound - 1) {
            continue;
        }
        digits[pos] = x;
        collect_sphere(digits, pos + 1, remaining - sq, bound, m, out);
    }
}

/// A subset of `{0..l-1}` without nontrivial 3-term progressions.
pub fn behrend_3ap_free(l: u64) -> Result<SphereSet> {
    digit_sphere(l, GAMMA_3AP)
}

/// A subset of `{0..l-1}` without nontrivial solutions to `x + y + z = 3w`.
pub fn behrend_sum_free(l: u64) -> Result<SphereSet> {
    digit_sphere(l, GAMMA_SUM_FREE)
}

/// A subset of `{0..l-1}` containing no `QC(a)`, using headroom
/// `Γ = 4·max|γ|`.
pub fn behrend_qc_free(a: &[i64], l: u64) -> Result<(SphereSet, QcSystem)> {
    if a.len() != 5 {
        return Err(Error::DimensionMismatch { expected: 5, found: a.len() });
    }
    let sys = qc_coefficients(a)?;
    let gamma = 4 * sys.max_abs_gamma();
    Ok((digit_sphere(l, gamma)?, sys))
}

/// Integer coefficients characterising quadratic configurations of type
/// `a`: row `i` vanishes on `(P(a_i), ..., P(a_{i+3}))` for every quadratic
/// `P`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QcSystem {
    pub a: Vec<i64>,
    #[serde(rename = "M")]
    pub m: i64,
    pub gamma: Vec<[i64; 4]>,
}

impl QcSystem {
    pub fn max_abs_gamma(&self) -> u64 {
        self.gamma.iter().flatten().map(|g| g.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Row `i` applied to `y_i, ..., y_{i+3}` (0-based `i`).
    pub fn row_value(&self, i: usize, y: &[i64]) -> i128 {
        self.gamma[i].iter().zip(&y[i..i + 4]).map(|(&g, &v)| g as i128 * v as i128).sum()
    }
}

/// `γ_{i,j} = M ∏_{s≠j} (a_{i+j} - a_{i+s})^{-1}` with `M` the least common
/// multiple of the reduced denominators.
pub fn qc_coefficients(a: &[i64]) -> Result<QcSystem> {
    if a.len() < 4 {
        return Err(Error::Invalid(format!("need at least 4 coordinates, got {}", a.len())));
    }
    for (i, x) in a.iter().enumerate() {
        if a[..i].contains(x) {
            return Err(Error::RepeatedCoordinate(*x));
        }
    }
    let rows: Vec<[Rational; 4]> = (0..a.len() - 3)
        .map(|i| {
            std::array::from_fn(|j| {
                let prod: BigInt = (0..4).filter(|&s| s != j).map(|s| BigInt::from(a[i + j]) - a[i + s]).product();
                Rational::new(BigInt::one(), prod)
            })
        })
        .collect();
    let m = rows.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let gamma = rows
        .iter()
        .map(|row| {
            let mut out = [0i64; 4];
            for (slot, q) in out.iter_mut().zip(row) {
                let v = q * Rational::from_integer(m.clone());
                debug_assert!(v.is_integer());
                *slot = v.to_integer().to_i64().ok_or(Error::Overflow("QC coefficients"))?;
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QcSystem { a: a.to_vec(), m: m.to_i64().ok_or(Error::Overflow("QC scale"))?, gamma })
}

/// Whether `y` is a quadratic configuration of type `sys.a`: `y` is
/// nonconstant and every row relation holds.
pub fn is_qc(sys: &QcSystem, y: &[i64]) -> Result<bool> {
    if y.len() != sys.len() {
        return Err(Error::DimensionMismatch { expected: sys.len(), found: y.len() });
    }
    if y.iter().all(|&v| v == y[0]) {
        return Ok(false);
    }
    Ok((0..sys.gamma.len()).all(|i| sys.row_value(i, y) == 0))
}

/// Searches `set^k` for a nontrivial solution of `Σ c_i y_i = 0`. Returns
/// the lexicographically first witness, or `None`.
pub fn verify_relation_free(set: &[i64], c: &[i64]) -> Result<Option<Vec<i64>>> {
    if c.iter().all(|&x| x == 0) {
        return Err(Error::Invalid("relation must be nonzero".into()));
    }
    if c.iter().map(|&x| x as i128).sum::<i128>() != 0 {
        return Err(Error::Invalid("relation coefficients must sum to zero".into()));
    }
    let mut elems: Vec<i64> = set.to_vec();
    elems.sort_unstable();
    elems.dedup();
    if elems.is_empty() {
        return Ok(None);
    }
    let members: HashSet<i64> = elems.iter().copied().collect();
    let pivot = (0..c.len()).max_by_key(|&i| (c[i].unsigned_abs(), std::cmp::Reverse(i))).expect("nonempty");
    let free: Vec<usize> = (0..c.len()).filter(|&i| i != pivot).collect();
    let cp = c[pivot] as i128;
    let n = elems.len();

    let search = |first: usize| -> Option<Vec<i64>> {
        let mut idx = vec![0usize; free.len()];
        if let Some(i) = idx.first_mut() {
            *i = first;
        }
        let mut y = vec![0i64; c.len()];
        loop {
            let mut s: i128 = 0;
            for (&slot, &ix) in free.iter().zip(&idx) {
                y[slot] = elems[ix];
                s += c[slot] as i128 * elems[ix] as i128;
            }
            if s % cp == 0 {
                let v = -s / cp;
                if let Ok(v) = i64::try_from(v) {
                    if members.contains(&v) {
                        y[pivot] = v;
                        if !is_trivial(&y) {
                            return Some(y.clone());
                        }
                    }
                }
            }
            // odometer over all but the first free coordinate
            let mut j = idx.len();
            loop {
                if j <= 1 {
                    return None;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < n {
                    break;
                }
                idx[j] = 0;
            }
        }
    };

    if free.is_empty() {
        return Ok(None);
    }
    Ok((0..n).into_par_iter().find_map_first(search))
}

/// Searches `set^k` for a `QC(a)`. The first three entries range over the
/// set and the relations force the rest.
pub fn verify_qc_free(set: &[i64], sys: &QcSystem) -> Option<Vec<i64>> {
    let mut elems: Vec<i64> = set.to_vec();
    elems.sort_unstable();
    elems.dedup();
    let members: HashSet<i64> = elems.iter().copied().collect();
    let k = sys.len();
    elems.par_iter().find_map_first(|&y1| {
        let mut y = vec![0i64; k];
        y[0] = y1;
        for &y2 in &elems {
            y[1] = y2;
            'third: for &y3 in &elems {
                y[2] = y3;
                for i in 0..k - 3 {
                    let g = &sys.gamma[i];
                    let partial: i128 = (0..3).map(|j| g[j] as i128 * y[i + j] as i128).sum();
                    if partial % g[3] as i128 != 0 {
                        continue 'third;
                    }
                    match i64::try_from(-partial / g[3] as i128) {
                        Ok(v) if members.contains(&v) => y[i + 3] = v,
                        _ => continue 'third,
                    }
                }
                if !is_trivial(&y) {
                    return Some(y.clone());
                }
            }
        }
        None
    })
}

/// Whether a finite set has a nontrivial 3-AP modulo `n`: `x + z ≡ 2y` with
/// `x, y, z` not all equal. For even `n` this includes `(x, x + n/2, x)`.
/// Returns the first witness `(x, y, z)`.
pub fn cyclic_3ap_witness(set: &[u64], n: u64) -> Option<[u64; 3]> {
    let members: HashSet<u64> = set.iter().map(|&v| v % n).collect();
    let mut elems: Vec<u64> = members.iter().copied().collect();
    elems.sort_unstable();
    for &x in &elems {
        for &z in &elems {
            for &y in &elems {
                if x == y && y == z {
                    continue;
                }
                if (x as u128 + z as u128) % n as u128 == (2 * y as u128) % n as u128 {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

/// Reduces `Σ c_i y_i` to check a claimed witness.
pub fn relation_value(c: &[i64], y: &[i64]) -> BigInt {
    c.iter().zip(y).map(|(&a, &b)| BigInt::from(a) * b).sum()
}

pub(crate) fn is_trivial(y: &[i64]) -> bool {
    y.iter().all(|&v| v == y[0])
}
