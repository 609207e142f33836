//! Exact grid cells of `frac(α v)`.
//!
//! With `G` cells, `cell(v) = ⌊α v G⌋ mod G`. Since `α` is irrational and
//! `v ≠ 0`, `α v G` is never an integer, so the cell is always decidable.
//! The fast path uses one convergent `P/Q` with `|α - P/Q| < 1/(Q Q')` in
//! `i128`; when the error margin straddles a cell boundary the exact path
//! deepens big-rational enclosures instead.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::contfrac::AlphaSequence;
use crate::Rational;

const FAST_DENOMINATOR_LIMIT: u64 = 1 << 40;
const FAST_NEXT_CAP: i128 = 1 << 62;

#[derive(Debug, Clone)]
pub struct FracOracle {
    alpha: AlphaSequence,
    grid: u64,
    start: usize,
    fast: Option<(i128, i128, i128)>,
}

impl FracOracle {
    pub fn new(alpha: AlphaSequence, grid: u64) -> Self {
        assert!(grid > 0, "grid must be positive");
        let (start, fast) = Self::fast_convergent(&alpha);
        FracOracle { alpha, grid, start, fast }
    }

    /// The last convergent with `Q ≤ 2^40`, and `(P, Q, min(Q_next, 2^62))`
    /// if `P` fits.
    fn fast_convergent(alpha: &AlphaSequence) -> (usize, Option<(i128, i128, i128)>) {
        let mut start = 0;
        let mut fast = None;
        let mut conv = alpha.convergents().enumerate().peekable();
        while let Some((n, (p, q))) = conv.next() {
            let next_q = &conv.peek().expect("infinite stream").1 .1;
            if q > BigInt::from(FAST_DENOMINATOR_LIMIT) {
                break;
            }
            start = n;
            fast = p.to_i64().map(|p| {
                let q_next = next_q.to_i128().unwrap_or(FAST_NEXT_CAP).min(FAST_NEXT_CAP);
                (p as i128, q.to_i128().expect("bounded"), q_next)
            });
        }
        (start, fast)
    }

    pub fn alpha(&self) -> &AlphaSequence {
        &self.alpha
    }

    pub fn grid(&self) -> u64 {
        self.grid
    }

    pub fn cell(&self, v: i128) -> u64 {
        self.cell_fast(v).unwrap_or_else(|| self.cell_exact(&BigInt::from(v)))
    }

    /// `None` when `v` is out of `i128` range or too close to a boundary.
    pub fn cell_fast(&self, v: i128) -> Option<u64> {
        if v == 0 {
            return Some(0);
        }
        let (p, q, q_next) = self.fast?;
        let g = self.grid as i128;
        let x = v.checked_mul(g)?.checked_mul(p)?;
        let (k, rho) = (x.div_euclid(q), x.rem_euclid(q));
        let err = v.checked_abs()?.checked_mul(g)?;
        if rho.checked_mul(q_next)? < err || (q - rho).checked_mul(q_next)? < err {
            return None;
        }
        Some(k.rem_euclid(g) as u64)
    }

    pub fn cell_exact(&self, v: &BigInt) -> u64 {
        if v.is_zero() {
            return 0;
        }
        let g = BigInt::from(self.grid);
        let scale = Rational::from_integer(v * &g);
        let k = self.alpha.decide(self.start, |e| {
            let (a, b) = (&e.lo * &scale, &e.hi * &scale);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let f = lo.floor().to_integer();
            (hi.ceil().to_integer() - BigInt::one() == f).then_some(f)
        });
        k.mod_floor(&g).to_u64().expect("below grid")
    }

    /// `‖α v‖ < m/G`.
    pub fn norm_below(&self, v: i128, m: u64) -> bool {
        let c = self.cell(v);
        c < m || c >= self.grid.saturating_sub(m)
    }
}

/// `‖α v‖ < τ` decided from enclosures alone, independent of the grid.
pub fn norm_below_exact(alpha: &AlphaSequence, v: &BigInt, tau: &Rational) -> bool {
    if v.is_zero() {
        return tau > &Rational::zero();
    }
    let scale = Rational::from_integer(v.clone());
    alpha.decide(0, |e| {
        let (a, b) = (&e.lo * &scale, &e.hi * &scale);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let z = lo.floor();
        for near in [z.clone(), &z + Rational::one()] {
            if lo >= &near - tau && hi <= &near + tau {
                return Some(true);
            }
        }
        (lo >= &z + tau && hi <= &z + Rational::one() - tau).then_some(false)
    })
}

/// `‖x‖` for an exact rational.
pub fn rational_norm(x: &Rational) -> Rational {
    let f = x - x.floor();
    let g = Rational::one() - &f;
    f.min(g)
}
