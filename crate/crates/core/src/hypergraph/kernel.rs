use num_traits::{One, Zero};

use crate::text::format_rational;
use crate::{Error, Rational, Result};

/// A step function `W: [0,1]^3 -> [0,1]`, constant on the cells of a
/// `g × g × g` grid. Values are stored with `x` fastest:
/// `values[x + g·(y + g·z)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepKernel {
    g: usize,
    values: Vec<Rational>,
}

impl StepKernel {
    pub fn new(g: usize, values: Vec<Rational>) -> Result<Self> {
        if g == 0 {
            return Err(Error::Invalid("kernel resolution must be positive".into()));
        }
        if values.len() != g * g * g {
            return Err(Error::Invalid(format!("expected {} kernel values, got {}", g * g * g, values.len())));
        }
        if let Some(v) = values.iter().find(|v| **v < Rational::zero() || **v > Rational::one()) {
            return Err(Error::Invalid(format!("kernel value {} outside [0, 1]", format_rational(v))));
        }
        Ok(Self { g, values })
    }

    pub fn constant(g: usize, value: Rational) -> Result<Self> {
        Self::new(g, vec![value; g * g * g])
    }

    /// The indicator of a single cell.
    pub fn indicator(g: usize, cell: (usize, usize, usize)) -> Result<Self> {
        let mut values = vec![Rational::zero(); g * g * g];
        let idx = cell.0 + g * (cell.1 + g * cell.2);
        *values.get_mut(idx).ok_or_else(|| Error::Invalid("cell outside the kernel grid".into()))? = Rational::one();
        Self::new(g, values)
    }

    pub fn resolution(&self) -> usize {
        self.g
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> &Rational {
        &self.values[x + self.g * (y + self.g * z)]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `∫ W`, the edge density `δ`.
    pub fn mean(&self) -> Rational {
        let sum: Rational = self.values.iter().sum();
        sum / Rational::from_integer(self.values.len().into())
    }

    /// Canonical text form: header `g`, then one value per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.g);
        for v in &self.values {
            out.push_str(&format_rational(v));
            out.push('\n');
        }
        out
    }

    /// SHA-256 of the canonical text form, hex encoded.
    pub fn hash(&self) -> String {
        crate::text::sha256_hex(self.to_text().as_bytes())
    }
}

/// `⊠(W) = ∫ W(x',y,z) W(x,y',z) W(x,y,z')` over `[0,1]^6`, exactly.
///
/// The primed variables each occur in one factor only, so they integrate
/// out into the three axis marginals first; the remaining sum runs over
/// `g^3` cells.
pub fn triforce_weighted(w: &StepKernel) -> Rational {
    let g = w.g;
    let idx2 = |a: usize, b: usize| a + g * b;
    let mut over_x = vec![Rational::zero(); g * g]; // (y, z)
    let mut over_y = vec![Rational::zero(); g * g]; // (x, z)
    let mut over_z = vec![Rational::zero(); g * g]; // (x, y)
    for z in 0..g {
        for y in 0..g {
            for x in 0..g {
                let v = w.get(x, y, z);
                over_x[idx2(y, z)] += v;
                over_y[idx2(x, z)] += v;
                over_z[idx2(x, y)] += v;
            }
        }
    }
    let mut total = Rational::zero();
    for z in 0..g {
        for y in 0..g {
            let a = &over_x[idx2(y, z)];
            if a.is_zero() {
                continue;
            }
            for x in 0..g {
                total += a * &over_y[idx2(x, z)] * &over_z[idx2(x, y)];
            }
        }
    }
    total / Rational::from_integer(num_bigint::BigInt::from(g).pow(6))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn constant_kernels() {
        assert_eq!(triforce_weighted(&StepKernel::constant(1, q(1, 1)).unwrap()), q(1, 1));
        assert_eq!(triforce_weighted(&StepKernel::constant(2, q(1, 2)).unwrap()), q(1, 8));
        assert_eq!(triforce_weighted(&StepKernel::constant(3, q(1, 3)).unwrap()), q(1, 27));
    }

    #[test]
    fn single_cell_indicator() {
        // Only the diagonal choice x=x', y=y', z=z' inside the cell survives:
        // each of the six coordinates lies in a fixed cell, measure g^-6.
        let w = StepKernel::indicator(2, (1, 0, 1)).unwrap();
        assert_eq!(triforce_weighted(&w), q(1, 64));
        assert_eq!(w.mean(), q(1, 8));
    }

    #[test]
    fn rejects_out_of_range_values() {
        assert!(StepKernel::new(1, vec![q(3, 2)]).is_err());
        assert!(StepKernel::new(2, vec![q(1, 2); 7]).is_err());
    }

    #[test]
    fn hash_is_stable_across_equal_kernels() {
        let a = StepKernel::constant(2, q(2, 4)).unwrap();
        let b = StepKernel::constant(2, q(1, 2)).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), StepKernel::constant(2, q(1, 3)).unwrap().hash());
    }
}
