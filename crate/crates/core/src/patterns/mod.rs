//! Pattern counting and popular-difference spectra.
//!
//! A [`Pattern`] `T ⊂ Z^k` occurs in a set `A` with common difference `d`
//! at anchor `x` when `x + d·T ⊆ A`. [`count_pattern`] counts anchors over
//! the integer grid `[N]^k`, [`corner_count_group`] counts corners
//! `(x,y), (x+d,y), (x,y+d)` in `G × G` for a finite abelian group `G`, and
//! the spectrum functions tabulate these counts over every admissible `d`.
//!
//! Both kernels store sets as packed bit rows and count by AND-ing shifted
//! rows, one per pattern point, then taking a popcount.

mod grid;
mod group;
pub mod io;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use grid::{count_pattern, grid_spectrum, GridSet};
pub use group::{corner_count_group, count_group_pattern, group_spectrum, Group, GroupSet};

/// A finite set of distinct points of `Z^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern {
    dim: usize,
    points: Vec<Vec<i64>>,
}

impl Pattern {
    pub fn new(points: Vec<Vec<i64>>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Invalid("pattern must have at least one point".into()))?;
        if dim == 0 {
            return Err(Error::Invalid("pattern dimension must be positive".into()));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::Invalid(format!("pattern point {p:?} is repeated")));
            }
        }
        Ok(Self { dim, points })
    }

    /// One-dimensional pattern with the given offsets.
    pub fn from_offsets(offsets: &[i64]) -> Result<Self> {
        Self::new(offsets.iter().map(|&a| vec![a]).collect())
    }

    /// The `k`-dimensional corner `{0, e_1, ..., e_k}`.
    pub fn corner(k: usize) -> Self {
        let mut points = vec![vec![0; k]];
        for i in 0..k {
            let mut e = vec![0; k];
            e[i] = 1;
            points.push(e);
        }
        Self { dim: k, points }
    }

    /// The `len`-term arithmetic progression `{0, 1, ..., len - 1}`.
    pub fn progression(len: usize) -> Self {
        Self { dim: 1, points: (0..len as i64).map(|i| vec![i]).collect() }
    }

    /// Parses `cornerK`, `apK`, or an explicit list such as `0,0;1,0;0,1`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(k) = spec.strip_prefix("corner") {
            let k: usize = k.parse().map_err(|_| Error::Invalid(format!("bad pattern `{spec}`")))?;
            if k == 0 {
                return Err(Error::Invalid("corner dimension must be positive".into()));
            }
            return Ok(Self::corner(k));
        }
        if let Some(k) = spec.strip_prefix("ap") {
            let k: usize = k.parse().map_err(|_| Error::Invalid(format!("bad pattern `{spec}`")))?;
            if k == 0 {
                return Err(Error::Invalid("progression length must be positive".into()));
            }
            return Ok(Self::progression(k));
        }
        let points = spec
            .split(';')
            .map(|p| {
                p.split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::Invalid(format!("bad pattern point `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Negates coordinate `axis` of every point.
    pub fn reflect(&self, axis: usize) -> Self {
        let points = self
            .points
            .iter()
            .map(|p| {
                let mut q = p.clone();
                q[axis] = -q[axis];
                q
            })
            .collect();
        Self { dim: self.dim, points }
    }

    /// Per-axis `(min, max)` of `d·t` over pattern points `t`.
    pub(crate) fn scaled_extent(&self, d: i64) -> Vec<(i64, i64)> {
        (0..self.dim)
            .map(|i| {
                let vals = self.points.iter().map(|p| p[i] * d);
                let lo = vals.clone().min().unwrap_or(0);
                let hi = vals.max().unwrap_or(0);
                (lo, hi)
            })
            .collect()
    }
}

/// Pattern counts indexed by common difference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spectrum<D> {
    pub entries: Vec<(D, u64)>,
}

impl<D> Spectrum<D> {
    /// The first entry attaining the maximum count.
    pub fn max(&self) -> Option<&(D, u64)> {
        self.entries.iter().reduce(|best, e| if e.1 > best.1 { e } else { best })
    }

    pub fn min(&self) -> Option<&(D, u64)> {
        self.entries.iter().reduce(|best, e| if e.1 < best.1 { e } else { best })
    }

    pub fn total(&self) -> u128 {
        self.entries.iter().map(|e| e.1 as u128).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
