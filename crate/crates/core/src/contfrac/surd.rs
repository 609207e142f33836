//! Exact arithmetic on `u + v√d` with rational `u`, `v`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadSurd {
    pub u: Rational,
    pub v: Rational,
    /// Positive radicand.
    pub d: BigInt,
}

impl QuadSurd {
    pub fn new(u: Rational, v: Rational, d: BigInt) -> Self {
        assert!(d.is_positive(), "radicand must be positive");
        QuadSurd { u, v, d }
    }

    /// `b^n` for `b = (a + √(a²+4))/2`, via `b^n = F_n b + F_{n-1}` where
    /// `F_0 = 0`, `F_1 = 1`, `F_n = a F_{n-1} + F_{n-2}`.
    pub fn unit_power(a: &BigInt, n: u32) -> Self {
        let (mut prev, mut cur) = (BigInt::one(), BigInt::zero()); // F_{-1}, F_0
        for _ in 0..n {
            let next = a * &cur + &prev;
            prev = std::mem::replace(&mut cur, next);
        }
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let fa = Rational::from_integer(cur.clone());
        QuadSurd {
            u: &fa * Rational::from_integer(a.clone()) * &half + Rational::from_integer(prev),
            v: fa * half,
            d: a * a + 4,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        QuadSurd { u: &self.u * q, v: &self.v * q, d: self.d.clone() }
    }

    /// Sign-exact comparison of `self` with `q`.
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        let s = &self.u - q;
        match (s.signum().to_i8().unwrap_or(0), self.v.signum().to_i8().unwrap_or(0)) {
            (0, 0) => Ordering::Equal,
            (a, b) if a >= 0 && b >= 0 => Ordering::Greater,
            (a, b) if a <= 0 && b <= 0 => Ordering::Less,
            (1, _) => (&s * &s).cmp(&(&self.v * &self.v * Rational::from_integer(self.d.clone()))),
            _ => (&self.v * &self.v * Rational::from_integer(self.d.clone())).cmp(&(&s * &s)),
        }
    }

    pub fn cmp_integer(&self, n: &BigInt) -> Ordering {
        self.cmp_rational(&Rational::from_integer(n.clone()))
    }

    pub fn floor(&self) -> BigInt {
        let sq = &self.v * &self.v * Rational::from_integer(self.d.clone());
        let root = (sq.numer() * sq.denom()).sqrt().div_floor(sq.denom());
        let root = if self.v.is_negative() { -root - 1 } else { root };
        let mut n = self.u.floor().to_integer() + root;
        while self.cmp_integer(&(&n + 1)) != Ordering::Less {
            n += 1;
        }
        while self.cmp_integer(&n) == Ordering::Less {
            n -= 1;
        }
        n
    }

    /// Approximate value, for display only.
    pub fn to_f64(&self) -> f64 {
        let f = |q: &Rational| q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN);
        f(&self.u) + f(&self.v) * self.d.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}
