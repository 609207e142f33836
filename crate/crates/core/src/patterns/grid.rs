use rayon::prelude::*;

use super::{Pattern, Spectrum};
use crate::bits;
use crate::{Error, Result};

/// A subset of the grid `[N]^k`, coordinates `1..=N` on every axis.
///
/// Storage is one packed bit row per line along the first axis; line `ℓ`
/// holds the points whose remaining coordinates encode `ℓ` in base `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSet {
    dim: usize,
    side: usize,
    words_per_line: usize,
    lines: usize,
    words: Vec<u64>,
}

impl GridSet {
    pub fn new(dim: usize, side: usize) -> Result<Self> {
        if dim == 0 || side == 0 {
            return Err(Error::Invalid("grid dimension and side must be positive".into()));
        }
        let lines = (1..dim)
            .try_fold(1usize, |acc, _| acc.checked_mul(side))
            .ok_or(Error::Overflow("grid size"))?;
        let words_per_line = bits::words_for(side);
        let total = lines.checked_mul(words_per_line).ok_or(Error::Overflow("grid size"))?;
        Ok(Self { dim, side, words_per_line, lines, words: vec![0; total] })
    }

    /// The whole grid `[N]^k`.
    pub fn full(dim: usize, side: usize) -> Result<Self> {
        let mut g = Self::new(dim, side)?;
        for line in 0..g.lines {
            let w = g.words_per_line;
            bits::fill_ones(&mut g.words[line * w..(line + 1) * w], side);
        }
        Ok(g)
    }

    pub fn from_points<'a>(
        dim: usize,
        side: usize,
        points: impl IntoIterator<Item = &'a [i64]>,
    ) -> Result<Self> {
        let mut g = Self::new(dim, side)?;
        for p in points {
            g.insert(p)?;
        }
        Ok(g)
    }

    /// Builds the set `{x ∈ [N]^k : keep(x)}`.
    pub fn from_predicate(dim: usize, side: usize, keep: impl Fn(&[i64]) -> bool + Sync) -> Result<Self> {
        let mut g = Self::new(dim, side)?;
        let w = g.words_per_line;
        g.words.par_chunks_mut(w).enumerate().for_each(|(line, row)| {
            let mut p = vec![0i64; dim];
            decode_line(line, side, &mut p[1..]);
            for x in 0..side {
                p[0] = x as i64 + 1;
                if keep(&p) {
                    bits::set(row, x);
                }
            }
        });
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    fn locate(&self, p: &[i64]) -> Option<(usize, usize)> {
        if p.len() != self.dim {
            return None;
        }
        let n = self.side as i64;
        if p.iter().any(|&c| c < 1 || c > n) {
            return None;
        }
        let mut line = 0usize;
        for &c in p[1..].iter().rev() {
            line = line * self.side + (c - 1) as usize;
        }
        Some((line, (p[0] - 1) as usize))
    }

    pub fn insert(&mut self, p: &[i64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: p.len() });
        }
        let (line, x) = self
            .locate(p)
            .ok_or_else(|| Error::Invalid(format!("point {p:?} outside [1, {}]^{}", self.side, self.dim)))?;
        bits::set(self.line_mut(line), x);
        Ok(())
    }

    pub fn remove(&mut self, p: &[i64]) {
        if let Some((line, x)) = self.locate(p) {
            bits::clear(self.line_mut(line), x);
        }
    }

    /// Exact membership; points outside the grid are not members.
    pub fn contains(&self, p: &[i64]) -> bool {
        self.locate(p).is_some_and(|(line, x)| bits::get(self.line(line), x))
    }

    pub fn len(&self) -> u64 {
        bits::count_ones(&self.words)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `|A| / N^k` as a float, for reports only.
    pub fn density(&self) -> f64 {
        self.len() as f64 / (self.side as f64).powi(self.dim as i32)
    }

    /// Members in lexicographic order of (last axis, ..., first axis).
    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.lines).flat_map(move |line| {
            let mut rest = vec![0i64; self.dim - 1];
            decode_line(line, self.side, &mut rest);
            bits::ones(self.line(line)).map(move |x| {
                let mut p = Vec::with_capacity(self.dim);
                p.push(x as i64 + 1);
                p.extend_from_slice(&rest);
                p
            })
        })
    }

    /// Image under `x_axis -> N + 1 - x_axis`.
    pub fn reflect(&self, axis: usize) -> Self {
        let mut out = Self::new(self.dim, self.side).expect("same shape");
        let n = self.side as i64;
        for mut p in self.points() {
            p[axis] = n + 1 - p[axis];
            out.insert(&p).expect("reflection stays in the grid");
        }
        out
    }

    fn line(&self, line: usize) -> &[u64] {
        &self.words[line * self.words_per_line..(line + 1) * self.words_per_line]
    }

    fn line_mut(&mut self, line: usize) -> &mut [u64] {
        let w = self.words_per_line;
        &mut self.words[line * w..(line + 1) * w]
    }
}

/// Writes the 1-based coordinates encoded by `line` into `out`.
fn decode_line(mut line: usize, side: usize, out: &mut [i64]) {
    for c in out.iter_mut() {
        *c = (line % side) as i64 + 1;
        line /= side;
    }
}

/// Number of anchors `x ∈ Z^k` with `x + d·T ⊆ A`.
///
/// Only anchors with `x + d·T` inside the bounding box can contribute, so
/// the loop runs over that box: lines along the first axis are AND-ed
/// together after shifting by `d·t_1` for each pattern point, and the
/// surviving bits are counted.
pub fn count_pattern(a: &GridSet, t: &Pattern, d: i64) -> Result<u64> {
    if a.dim != t.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim, found: t.dim() });
    }
    if d == 0 {
        return Err(Error::ZeroDifference);
    }
    let n = a.side as i64;
    // Anchor range per axis, 1-based and inclusive.
    let ranges: Vec<(i64, i64)> = t
        .scaled_extent(d)
        .into_iter()
        .map(|(lo, hi)| (1 - lo, n - hi))
        .collect();
    if ranges.iter().any(|&(lo, hi)| hi < lo) {
        return Ok(0);
    }
    let (lo0, hi0) = ranges[0];
    let len = (hi0 - lo0 + 1) as usize;
    let inner = &ranges[1..];
    let combos: usize = inner.iter().map(|&(lo, hi)| (hi - lo + 1) as usize).product();
    let side = a.side;

    let count = (0..combos)
        .into_par_iter()
        .map_init(
            || (vec![0u64; bits::words_for(len)], vec![0i64; inner.len()]),
            |(acc, x), combo| {
                let mut c = combo;
                for (xi, &(lo, hi)) in x.iter_mut().zip(inner) {
                    let span = (hi - lo + 1) as usize;
                    *xi = lo + (c % span) as i64;
                    c /= span;
                }
                bits::fill_ones(acc, len);
                for p in t.points() {
                    let mut line = 0usize;
                    for (xi, ti) in x.iter().zip(&p[1..]).rev() {
                        line = line * side + (xi + d * ti - 1) as usize;
                    }
                    let start = (lo0 + d * p[0] - 1) as usize;
                    bits::and_window(acc, a.line(line), start, len);
                }
                bits::count_ones(acc)
            },
        )
        .sum();
    Ok(count)
}

/// Counts for every nonzero `d` with `|d| < N`, ascending in `d`.
pub fn grid_spectrum(a: &GridSet, t: &Pattern) -> Result<Spectrum<i64>> {
    if a.dim != t.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim, found: t.dim() });
    }
    let n = a.side as i64;
    let ds: Vec<i64> = (1 - n..n).filter(|&d| d != 0).collect();
    let entries = ds
        .into_par_iter()
        .map(|d| count_pattern(a, t, d).map(|c| (d, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum { entries })
}
