use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Pattern, Spectrum};
use crate::bits;
use crate::{Error, Result};

/// A finite abelian group: `Z/NZ` or `F_p^n`.
///
/// Elements are encoded as indices `0..order`. For `F_p^n` the index is
/// `Σ v_i p^i` with `v_0` the first component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Group {
    Cyclic { modulus: u64 },
    Elementary { prime: u64, rank: u32 },
}

impl Group {
    pub fn cyclic(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Invalid("modulus must be positive".into()));
        }
        Ok(Group::Cyclic { modulus })
    }

    pub fn elementary(prime: u64, rank: u32) -> Result<Self> {
        if prime < 2 || (2..prime).take_while(|q| q * q <= prime).any(|q| prime.is_multiple_of(q)) {
            return Err(Error::Invalid(format!("{prime} is not prime")));
        }
        prime
            .checked_pow(rank)
            .filter(|&o| o <= u32::MAX as u64)
            .ok_or(Error::Overflow("group order"))?;
        Ok(Group::Elementary { prime, rank })
    }

    pub fn order(&self) -> usize {
        match *self {
            Group::Cyclic { modulus } => modulus as usize,
            Group::Elementary { prime, rank } => prime.pow(rank) as usize,
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        match *self {
            Group::Cyclic { modulus } => {
                let n = modulus as usize;
                let s = a + b;
                if s >= n {
                    s - n
                } else {
                    s
                }
            }
            Group::Elementary { prime, rank } => {
                let p = prime as usize;
                let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
                for _ in 0..rank {
                    out += ((a % p + b % p) % p) * place;
                    a /= p;
                    b /= p;
                    place *= p;
                }
                out
            }
        }
    }

    pub fn neg(&self, a: usize) -> usize {
        match *self {
            Group::Cyclic { modulus } => (modulus as usize - a) % modulus as usize,
            Group::Elementary { prime, rank } => {
                let p = prime as usize;
                let (mut a, mut out, mut place) = (a, 0, 1);
                for _ in 0..rank {
                    out += ((p - a % p) % p) * place;
                    a /= p;
                    place *= p;
                }
                out
            }
        }
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `k·a` for any integer `k`.
    pub fn scale(&self, a: usize, k: i64) -> usize {
        match *self {
            Group::Cyclic { modulus } => {
                let n = modulus as i128;
                ((a as i128 * k as i128).rem_euclid(n)) as usize
            }
            Group::Elementary { prime, rank } => {
                let p = prime as usize;
                let k = k.rem_euclid(prime as i64) as usize;
                let (mut a, mut out, mut place) = (a, 0, 1);
                for _ in 0..rank {
                    out += ((a % p) * k % p) * place;
                    a /= p;
                    place *= p;
                }
                out
            }
        }
    }

    /// Components of an element of `F_p^n`, or the residue for `Z/NZ`.
    pub fn components(&self, mut a: usize) -> Vec<u64> {
        match *self {
            Group::Cyclic { .. } => vec![a as u64],
            Group::Elementary { prime, rank } => (0..rank)
                .map(|_| {
                    let c = (a % prime as usize) as u64;
                    a /= prime as usize;
                    c
                })
                .collect(),
        }
    }

    pub fn format_element(&self, a: usize) -> String {
        self.components(a).iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }

    /// Parses an integer (reduced mod N) or a comma-separated vector
    /// (components reduced mod p).
    pub fn parse_element(&self, s: &str) -> Option<usize> {
        match *self {
            Group::Cyclic { modulus } => {
                let v: i128 = s.trim().parse().ok()?;
                Some(v.rem_euclid(modulus as i128) as usize)
            }
            Group::Elementary { prime, rank } => {
                let comps: Vec<i64> =
                    s.split(',').map(|c| c.trim().parse().ok()).collect::<Option<_>>()?;
                if comps.len() != rank as usize {
                    return None;
                }
                let p = prime as i64;
                Some(comps.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c.rem_euclid(p) as usize))
            }
        }
    }

    pub fn descriptor(&self) -> String {
        match *self {
            Group::Cyclic { modulus } => format!("zN {modulus}"),
            Group::Elementary { prime, rank } => format!("fp {prime} {rank}"),
        }
    }
}

/// A subset of `G × G`, stored as one packed row per first coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSet {
    group: Group,
    order: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl GroupSet {
    pub fn new(group: Group) -> Self {
        let order = group.order();
        let words_per_row = bits::words_for(order);
        Self { group, order, words_per_row, words: vec![0; order * words_per_row] }
    }

    pub fn full(group: Group) -> Self {
        let mut s = Self::new(group);
        let (w, n) = (s.words_per_row, s.order);
        for row in s.words.chunks_mut(w.max(1)) {
            bits::fill_ones(row, n);
        }
        s
    }

    pub fn from_rows(group: Group, row: impl Fn(usize, usize) -> bool + Sync) -> Self {
        let mut s = Self::new(group);
        let n = s.order;
        if s.words_per_row > 0 {
            s.words.par_chunks_mut(s.words_per_row).enumerate().for_each(|(a, words)| {
                for b in 0..n {
                    if row(a, b) {
                        bits::set(words, b);
                    }
                }
            });
        }
        s
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        assert!(a < self.order && b < self.order, "element out of range");
        let w = self.words_per_row;
        bits::set(&mut self.words[a * w..(a + 1) * w], b);
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        a < self.order && b < self.order && bits::get(self.row(a), b)
    }

    pub fn len(&self) -> u64 {
        bits::count_ones(&self.words)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order).flat_map(move |a| bits::ones(self.row(a)).map(move |b| (a, b)))
    }

    /// `A + (u, v)`.
    pub fn translate(&self, u: usize, v: usize) -> Self {
        let mut out = Self::new(self.group);
        for (a, b) in self.pairs() {
            out.insert(self.group.add(a, u), self.group.add(b, v));
        }
        out
    }

    fn row(&self, a: usize) -> &[u64] {
        &self.words[a * self.words_per_row..(a + 1) * self.words_per_row]
    }

    /// Rows shifted in the second coordinate: bit `b` of row `a` in the
    /// result is set iff `(a, b + e) ∈ A`.
    fn shifted_rows(&self, e: usize) -> Vec<u64> {
        if e == 0 {
            return self.words.clone();
        }
        let (n, w) = (self.order, self.words_per_row);
        let mut out = vec![0u64; self.words.len()];
        out.par_chunks_mut(w).enumerate().for_each(|(a, dst)| {
            let src = self.row(a);
            match self.group {
                Group::Cyclic { .. } => {
                    bits::or_window(dst, 0, src, e, n - e);
                    bits::or_window(dst, n - e, src, 0, e);
                }
                Group::Elementary { .. } => {
                    let minus_e = self.group.neg(e);
                    for b in bits::ones(src) {
                        bits::set(dst, self.group.add(b, minus_e));
                    }
                }
            }
        });
        out
    }
}

/// Number of `(x, y) ∈ G²` with `(x + t_1·d, y + t_2·d) ∈ A` for every
/// point `t` of the two-dimensional pattern `T`.
pub fn count_group_pattern(a: &GroupSet, t: &Pattern, d: usize) -> Result<u64> {
    if t.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: t.dim() });
    }
    if d == 0 {
        return Err(Error::ZeroDifference);
    }
    if d >= a.order {
        return Err(Error::Invalid(format!("element index {d} outside the group")));
    }
    let g = a.group;
    let offsets: Vec<(usize, usize)> =
        t.points().iter().map(|p| (g.scale(d, p[0]), g.scale(d, p[1]))).collect();
    let mut tables: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for &(_, e) in &offsets {
        tables.entry(e).or_insert_with(|| a.shifted_rows(e));
    }
    let (n, w) = (a.order, a.words_per_row);
    let mut acc = vec![0u64; w];
    let mut total = 0;
    for x in 0..n {
        bits::fill_ones(&mut acc, n);
        for &(ox, oy) in &offsets {
            let row = g.add(x, ox);
            let src = &tables[&oy][row * w..(row + 1) * w];
            for (slot, &s) in acc.iter_mut().zip(src) {
                *slot &= s;
            }
        }
        total += bits::count_ones(&acc);
    }
    Ok(total)
}

/// `|S_d(A)|`: the number of corners `(x,y), (x+d,y), (x,y+d)` in `A`.
pub fn corner_count_group(a: &GroupSet, d: usize) -> Result<u64> {
    count_group_pattern(a, &Pattern::corner(2), d)
}

/// Counts for every nonidentity `d`, in element-index order.
pub fn group_spectrum(a: &GroupSet, t: &Pattern) -> Result<Spectrum<usize>> {
    let entries = (1..a.order)
        .into_par_iter()
        .map(|d| count_group_pattern(a, t, d).map(|c| (d, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_corners(a: &GroupSet, d: usize) -> u64 {
        let g = a.group();
        let n = g.order();
        let mut c = 0;
        for x in 0..n {
            for y in 0..n {
                if a.contains(x, y) && a.contains(g.add(x, d), y) && a.contains(x, g.add(y, d)) {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn group_arithmetic() {
        let g = Group::elementary(3, 2).unwrap();
        assert_eq!(g.order(), 9);
        let a = g.parse_element("1,2").unwrap();
        let b = g.parse_element("2,2").unwrap();
        assert_eq!(g.format_element(g.add(a, b)), "0,1");
        assert_eq!(g.add(a, g.neg(a)), 0);
        assert_eq!(g.scale(a, -1), g.neg(a));
        assert_eq!(g.format_element(g.scale(a, 2)), "2,1");
        let z = Group::cyclic(5).unwrap();
        assert_eq!(z.parse_element("-1"), Some(4));
        assert_eq!(z.scale(2, -3), 4);
        assert!(Group::elementary(4, 2).is_err());
    }

    #[test]
    fn full_set_has_order_squared_corners() {
        let a = GroupSet::full(Group::cyclic(5).unwrap());
        for d in 1..5 {
            assert_eq!(corner_count_group(&a, d).unwrap(), 25);
        }
    }

    #[test]
    fn singleton_has_no_corners() {
        let mut a = GroupSet::new(Group::cyclic(5).unwrap());
        a.insert(0, 0);
        assert_eq!(corner_count_group(&a, 1).unwrap(), 0);
        assert!(matches!(corner_count_group(&a, 0), Err(Error::ZeroDifference)));
    }

    #[test]
    fn packed_matches_naive_on_structured_sets() {
        for g in [Group::cyclic(67).unwrap(), Group::elementary(3, 3).unwrap(), Group::elementary(5, 2).unwrap()] {
            let a = GroupSet::from_rows(g, |x, y| (x * 31 + y * 17 + x * y) % 3 != 0);
            for d in 1..g.order() {
                assert_eq!(corner_count_group(&a, d).unwrap(), naive_corners(&a, d), "{g:?} d={d}");
            }
        }
    }
}
