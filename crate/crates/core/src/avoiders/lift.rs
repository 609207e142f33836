//! Lifting one-dimensional and three-dimensional avoiders to patterns in
//! `Z^k`.
//!
//! A pattern with at least five points is handled by pulling back a
//! one-dimensional set through `φ(x) = Σ C^i x_i`. A pattern of affine
//! dimension at least 3 is handled by mapping `A × [N]^{k-3}` through a
//! full-rank integer map `Φ` sending `e_1, e_2, e_3` to `v_2 - v_1`,
//! `v_3 - v_1`, `v_4 - v_1`.

use num_traits::{Signed, Zero};

use crate::patterns::{GridSet, Pattern};
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiProjection {
    /// `C`, larger than the sum of all coordinate magnitudes in `T`.
    pub c: i64,
    /// `C^1, ..., C^k`.
    pub weights: Vec<i64>,
    /// `φ` of the first five points of `T`.
    pub images: Vec<i64>,
}

impl PhiProjection {
    pub fn apply(&self, x: &[i64]) -> i64 {
        x.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }
}

/// `φ` for a pattern with at least five points.
pub fn phi_projection(t: &Pattern) -> Result<PhiProjection> {
    if t.len() < 5 {
        return Err(Error::UnsupportedPattern(format!("φ needs at least 5 points, pattern has {}", t.len())));
    }
    let c = t.points().iter().flatten().map(|v| v.abs()).sum::<i64>() + 1;
    let mut weights = Vec::with_capacity(t.dim());
    let mut w = 1i64;
    for _ in 0..t.dim() {
        w = w.checked_mul(c).ok_or(Error::Overflow("φ weights"))?;
        weights.push(w);
    }
    let proj = PhiProjection { c, weights, images: Vec::new() };
    let images = t.points()[..5].iter().map(|p| proj.apply(p)).collect();
    Ok(PhiProjection { images, ..proj })
}

fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Rational>> =
        rows.iter().map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, piv);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Indices of four affinely independent points of `T`, preferring
/// `0, e_1, e_2, e_3` when present.
pub fn affine_frame(t: &Pattern) -> Option<[usize; 4]> {
    let k = t.dim();
    if k < 3 {
        return None;
    }
    let unit = |i: Option<usize>| {
        let mut v = vec![0i64; k];
        if let Some(i) = i {
            v[i] = 1;
        }
        v
    };
    let find = |v: &Vec<i64>| t.points().iter().position(|p| p == v);
    if let (Some(a), Some(b), Some(c), Some(d)) =
        (find(&unit(None)), find(&unit(Some(0))), find(&unit(Some(1))), find(&unit(Some(2))))
    {
        return Some([a, b, c, d]);
    }
    let pts = t.points();
    let base = &pts[0];
    let diff = |p: &Vec<i64>| -> Vec<i64> { p.iter().zip(base).map(|(a, b)| a - b).collect() };
    let mut chosen = vec![0usize];
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (i, p) in pts.iter().enumerate().skip(1) {
        let mut trial = rows.clone();
        trial.push(diff(p));
        if rank(&trial) > rows.len() {
            rows = trial;
            chosen.push(i);
            if chosen.len() == 4 {
                return Some([chosen[0], chosen[1], chosen[2], chosen[3]]);
            }
        }
    }
    None
}

/// Columns of `Φ`: the three frame differences, then standard basis vectors
/// chosen greedily to reach full rank.
pub fn lattice_map(t: &Pattern, frame: [usize; 4]) -> Vec<Vec<i64>> {
    let k = t.dim();
    let pts = t.points();
    let mut cols: Vec<Vec<i64>> =
        frame[1..].iter().map(|&i| pts[i].iter().zip(&pts[frame[0]]).map(|(a, b)| a - b).collect()).collect();
    for e in 0..k {
        if cols.len() == k {
            break;
        }
        let mut v = vec![0i64; k];
        v[e] = 1;
        let mut trial = cols.clone();
        trial.push(v);
        if rank(&trial) == trial.len() {
            cols = trial;
        }
    }
    cols
}

/// Lifts `base` to a subset of `[M]^k` for the pattern `T ⊂ Z^k`.
///
/// * `base` of dimension 1 with side `M'`: `{x ∈ [N]^k : φ(x) ∈ base}` with
///   `N = ⌊M'/Σ C^i⌋`.
/// * `base` of dimension 3 with side `N`: the image of `base × [N]^{k-3}`
///   under `Φ`, translated into the positive orthant.
pub fn lift_avoider(t: &Pattern, base: &GridSet) -> Result<GridSet> {
    let k = t.dim();
    match base.dim() {
        1 => {
            let phi = phi_projection(t)?;
            let total: i64 = phi.weights.iter().sum();
            let n = base.side() as i64 / total;
            if n < 1 {
                return Err(Error::Invalid(format!("base side {} too small for Σ C^i = {total}", base.side())));
            }
            GridSet::from_predicate(k, n as usize, |x| base.contains(&[phi.apply(x)]))
        }
        3 => {
            let frame = affine_frame(t).ok_or_else(|| {
                Error::UnsupportedPattern("pattern has fewer than 5 points and affine dimension below 3".into())
            })?;
            let cols = lattice_map(t, frame);
            let n = base.side() as i64;
            // per output coordinate, the range of Φ over [1, N]^k
            let mut lo = vec![0i64; k];
            let mut hi = vec![0i64; k];
            for col in &cols {
                for r in 0..k {
                    let (a, b) = (col[r], col[r] * n);
                    lo[r] += a.min(b);
                    hi[r] += a.max(b);
                }
            }
            let side = (0..k).map(|r| hi[r] - lo[r] + 1).max().unwrap_or(1) as usize;
            let mut out = GridSet::new(k, side)?;
            let mut x = vec![1i64; k];
            let mut y = vec![0i64; k];
            for p in base.points() {
                x[..3].copy_from_slice(&p);
                for v in x[3..].iter_mut() {
                    *v = 1;
                }
                loop {
                    for r in 0..k {
                        y[r] = cols.iter().zip(&x).map(|(c, &xi)| c[r] * xi).sum::<i64>() - lo[r] + 1;
                    }
                    out.insert(&y)?;
                    // odometer over the padding coordinates
                    let mut i = 3;
                    while i < k && x[i] == n {
                        x[i] = 1;
                        i += 1;
                    }
                    if i == k {
                        break;
                    }
                    x[i] += 1;
                }
            }
            Ok(out)
        }
        d => Err(Error::Invalid(format!("base must have dimension 1 or 3, got {d}"))),
    }
}
