//! Continued fractions with exact big-integer convergents, and irrationals
//! whose approximant denominators avoid small primes and grow geometrically.
//!
//! Convergents follow `P_k = c_k P_{k-1} + P_{k-2}` (likewise `Q`) seeded
//! with `P_{-1} = 1, P_{-2} = 0, Q_{-1} = 0, Q_{-2} = 1`.

mod primes;
mod surd;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use primes::{first_prime_between, is_prime, is_prime_u64, lcm_upto};
pub use surd::QuadSurd;

use crate::text::{serde_big, serde_rational};
use crate::{Error, Rational, Result};

fn check_quotient(k: usize, c: &BigInt) -> Result<()> {
    if c.is_negative() || (k > 0 && c.is_zero()) {
        return Err(Error::InvalidQuotient { index: k });
    }
    Ok(())
}

/// Iterator over `(P_k, Q_k)` for a quotient stream.
#[derive(Debug, Clone)]
pub struct Convergents<I> {
    quotients: I,
    prev: (BigInt, BigInt),
    cur: (BigInt, BigInt),
}

impl<I: Iterator<Item = BigInt>> Convergents<I> {
    pub fn new(quotients: I) -> Self {
        Convergents {
            quotients,
            prev: (BigInt::zero(), BigInt::one()),
            cur: (BigInt::one(), BigInt::zero()),
        }
    }
}

impl<I: Iterator<Item = BigInt>> Iterator for Convergents<I> {
    type Item = (BigInt, BigInt);

    fn next(&mut self) -> Option<Self::Item> {
        let c = self.quotients.next()?;
        let next = (&c * &self.cur.0 + &self.prev.0, &c * &self.cur.1 + &self.prev.1);
        self.prev = std::mem::replace(&mut self.cur, next);
        Some(self.cur.clone())
    }
}

/// All convergents `(P_k, Q_k)` of a finite quotient list.
pub fn approximants(c: &[BigInt]) -> Result<Vec<(BigInt, BigInt)>> {
    for (k, q) in c.iter().enumerate() {
        check_quotient(k, q)?;
    }
    Ok(Convergents::new(c.iter().cloned()).collect())
}

/// Quotients `c_0, ..., c_{t+1}` whose convergent denominators end with
/// `Q_t = x`, `Q_{t+1} = y`.
///
/// `Q_{t+1}/Q_t = (c_{t+1}; c_t, ..., c_1)`, so the expansion of `y/x` read
/// backwards gives `c_1, ..., c_{t+1}`; `c_0` is free and set to 0.
pub fn quotients_from_pair(x: &BigInt, y: &BigInt) -> Result<Vec<BigInt>> {
    if !x.is_positive() || x >= y {
        return Err(Error::Invalid(format!("need 0 < x < y, got x = {x}, y = {y}")));
    }
    if !x.gcd(y).is_one() {
        return Err(Error::NotCoprime { x: x.to_string(), y: y.to_string() });
    }
    let (mut num, mut den) = (y.clone(), x.clone());
    let mut expansion = Vec::new();
    while !den.is_zero() {
        let (q, r) = num.div_rem(&den);
        expansion.push(q);
        num = std::mem::replace(&mut den, r);
    }
    let mut c = vec![BigInt::zero()];
    c.extend(expansion.into_iter().rev());
    Ok(c)
}

/// An open interval `(lo, hi)` known to contain an irrational number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Orders the enclosed number against `q`; `None` if `q` lies inside.
    pub fn cmp_rational(&self, q: &Rational) -> Option<Ordering> {
        if q <= &self.lo {
            Some(Ordering::Greater)
        } else if q >= &self.hi {
            Some(Ordering::Less)
        } else {
            None
        }
    }
}

/// An irrational `α = [c_0; c_1, ..., c_{t+1}, s, s, s, ...]`.
///
/// The tail quotient `s` makes `b = (s + √(s²+4))/2` the growth rate of the
/// denominators. The construction below takes `s = a = lcm(1..m)` and a
/// prefix ending in two primes `x`, `y`, so that every later denominator is
/// congruent to `x` or `y` modulo `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaSequence {
    m: u64,
    #[serde(with = "serde_rational")]
    r: Rational,
    #[serde(with = "serde_big")]
    a: BigInt,
    #[serde(with = "serde_big")]
    x: BigInt,
    #[serde(with = "serde_big")]
    y: BigInt,
    t: usize,
    #[serde(rename = "K")]
    k: u32,
    #[serde(with = "serde_big")]
    tail: BigInt,
    #[serde(with = "serde_big::vec")]
    quotients_prefix: Vec<BigInt>,
}

impl AlphaSequence {
    /// A sequence from explicit quotients. `prefix` holds `c_0, ..., c_{t+1}`
    /// and `tail` repeats forever. The index offset `k` pairs `q_k` with
    /// `Q_t`.
    pub fn from_quotients(m: u64, r: Rational, prefix: Vec<BigInt>, tail: BigInt, k: u32) -> Result<Self> {
        if prefix.len() < 2 {
            return Err(Error::Invalid("quotient prefix needs at least two terms".into()));
        }
        for (i, c) in prefix.iter().enumerate() {
            check_quotient(i, c)?;
        }
        check_quotient(prefix.len(), &tail)?;
        if !r.is_positive() {
            return Err(Error::Invalid("scale r must be positive".into()));
        }
        let t = prefix.len() - 2;
        let conv = approximants(&prefix)?;
        Ok(AlphaSequence {
            m,
            r,
            a: lcm_upto(m),
            x: conv[t].1.clone(),
            y: conv[t + 1].1.clone(),
            t,
            k,
            tail,
            quotients_prefix: prefix,
        })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    /// `lcm(1..m)`.
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// The first index `i` covered by the construction, `q_K = Q_t = x`.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn tail(&self) -> &BigInt {
        &self.tail
    }

    pub fn quotients_prefix(&self) -> &[BigInt] {
        &self.quotients_prefix
    }

    pub fn quotient(&self, n: usize) -> BigInt {
        self.quotients_prefix.get(n).cloned().unwrap_or_else(|| self.tail.clone())
    }

    pub fn quotients(&self) -> impl Iterator<Item = BigInt> + Clone + '_ {
        self.quotients_prefix.iter().cloned().chain(std::iter::repeat(self.tail.clone()))
    }

    pub fn convergents(&self) -> Convergents<impl Iterator<Item = BigInt> + Clone + '_> {
        Convergents::new(self.quotients())
    }

    /// `(P_n, Q_n)`.
    pub fn convergent(&self, n: usize) -> (BigInt, BigInt) {
        self.convergents().nth(n).expect("infinite stream")
    }

    /// `b^i` scaled by `r`.
    pub fn scaled_power(&self, i: u32) -> QuadSurd {
        QuadSurd::unit_power(&self.tail, i).scale(&self.r)
    }

    /// The convergent index `n = i + t - K` of `(p_i, q_i)`, if it exists.
    pub fn index_of(&self, i: u32) -> Option<usize> {
        (i as usize + self.t).checked_sub(self.k as usize)
    }

    /// `(p_i, q_i) = (P_{i+t-K}, Q_{i+t-K})`.
    pub fn pq(&self, i: u32) -> Option<(BigInt, BigInt)> {
        self.index_of(i).map(|n| self.convergent(n))
    }

    /// The open interval between the `n`-th and `(n+1)`-th convergents.
    pub fn enclosure(&self, n: usize) -> Enclosure {
        let mut it = self.convergents().skip(n);
        let (p0, q0) = it.next().expect("infinite stream");
        let (p1, q1) = it.next().expect("infinite stream");
        Self::between(p0, q0, p1, q1)
    }

    fn between(p0: BigInt, q0: BigInt, p1: BigInt, q1: BigInt) -> Enclosure {
        let a = Rational::new(p0, q0);
        let b = Rational::new(p1, q1);
        if a < b {
            Enclosure { lo: a, hi: b }
        } else {
            Enclosure { lo: b, hi: a }
        }
    }

    /// Enclosures of increasing depth starting at convergent `n`.
    pub fn enclosures_from(&self, n: usize) -> impl Iterator<Item = Enclosure> + '_ {
        let mut it = self.convergents().skip(n);
        let mut prev = it.next().expect("infinite stream");
        it.map(move |cur| {
            let e = Self::between(prev.0.clone(), prev.1.clone(), cur.0.clone(), cur.1.clone());
            prev = cur;
            e
        })
    }

    /// Decides a predicate of `α` by deepening the enclosure until `decide`
    /// returns `Some`. Terminates whenever the predicate's boundary points are
    /// rational.
    pub fn decide<T>(&self, start: usize, mut decide: impl FnMut(&Enclosure) -> Option<T>) -> T {
        self.enclosures_from(start).find_map(|e| decide(&e)).expect("infinite stream")
    }
}

/// Builds `α` with `rb^i < q_i < 2rb^i` and `gcd(q_i, lcm(1..m)) = 1` for all
/// `i ≥ K`, where `K` is minimal with `rb^K > 2m`.
pub fn build_alpha_hard(m: u64, r: Rational) -> Result<AlphaSequence> {
    if m < 2 {
        return Err(Error::Invalid("smoothness bound m must exceed 1".into()));
    }
    if !r.is_positive() {
        return Err(Error::Invalid("scale r must be positive".into()));
    }
    let a = lcm_upto(m);
    let two = Rational::from_integer(BigInt::from(2));
    let two_m = Rational::from_integer(BigInt::from(2 * m));
    let mut k = 0u32;
    while QuadSurd::unit_power(&a, k).scale(&r).cmp_rational(&two_m) != Ordering::Greater {
        k += 1;
    }
    let prime_in = |i: u32| -> Result<BigInt> {
        let lo = QuadSurd::unit_power(&a, i).scale(&r);
        let hi = lo.scale(&two);
        first_prime_between(&lo, &hi).ok_or_else(|| Error::NoPrime {
            lower: format!("{:.6e}", lo.to_f64()),
            upper: format!("{:.6e}", hi.to_f64()),
        })
    };
    let x = prime_in(k)?;
    let y = prime_in(k + 1)?;
    let prefix = quotients_from_pair(&x, &y)?;
    let seq = AlphaSequence::from_quotients(m, r, prefix, a, k)?;
    debug_assert_eq!((&seq.x, &seq.y), (&x, &y));
    Ok(seq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Below the index where the construction takes effect.
    NotGuaranteed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaReport {
    pub i: u32,
    #[serde(with = "serde_big")]
    pub p: BigInt,
    #[serde(with = "serde_big")]
    pub q: BigInt,
    /// `gcd(q_i, lcm(1..m)) = 1`.
    pub coprime: Verdict,
    /// `rb^i < q_i < 2rb^i`.
    pub interval: Verdict,
    /// `|α - p_i/q_i| < 1/(m q_i²)`.
    pub approximation: Verdict,
}

impl AlphaReport {
    pub fn passed(&self) -> bool {
        ![self.coprime, self.interval, self.approximation].contains(&Verdict::Fail)
    }
}

/// Certifies the three properties of `(p_i, q_i)` exactly.
pub fn verify_alpha(seq: &AlphaSequence, i: u32) -> Result<AlphaReport> {
    let n = seq
        .index_of(i)
        .ok_or_else(|| Error::Invalid(format!("index {i} precedes the first approximant")))?;
    let (p, q) = seq.convergent(n);
    let guaranteed = i >= seq.k;
    let verdict = |holds: bool| match (holds, guaranteed) {
        (_, false) => Verdict::NotGuaranteed,
        (true, true) => Verdict::Pass,
        (false, true) => Verdict::Fail,
    };

    let coprime = q.gcd(&seq.a).is_one();

    let lo = seq.scaled_power(i);
    let hi = lo.scale(&Rational::from_integer(BigInt::from(2)));
    let interval = lo.cmp_integer(&q) == Ordering::Less && hi.cmp_integer(&q) == Ordering::Greater;

    // |α - p/q| < 1/(Q_n Q_{n+1}) settles most cases at once; otherwise
    // deepen until the enclosure sits inside or outside the target window.
    let target = Rational::new(BigInt::one(), BigInt::from(seq.m) * &q * &q);
    let center = Rational::new(p.clone(), q.clone());
    let approximation = seq.decide(n, |e| {
        let far = (&e.lo - &center).abs().max((&e.hi - &center).abs());
        if far <= target {
            return Some(true);
        }
        let near = if e.cmp_rational(&center).is_none() {
            Rational::zero()
        } else {
            (&e.lo - &center).abs().min((&e.hi - &center).abs())
        };
        (near >= target).then_some(false)
    });

    Ok(AlphaReport {
        i,
        p,
        q,
        coprime: verdict(coprime),
        interval: verdict(interval),
        approximation: verdict(approximation),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn pairs(v: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
        v.iter().map(|&(p, q)| (BigInt::from(p), BigInt::from(q))).collect()
    }

    #[test]
    fn fibonacci_convergents() {
        let c = approximants(&big(&[1, 1, 1, 1, 1])).unwrap();
        assert_eq!(c, pairs(&[(1, 1), (2, 1), (3, 2), (5, 3), (8, 5)]));
    }

    #[test]
    fn small_expansion() {
        assert_eq!(approximants(&big(&[0, 2, 3])).unwrap(), pairs(&[(0, 1), (1, 2), (3, 7)]));
    }

    #[test]
    fn invalid_quotients() {
        assert!(matches!(approximants(&big(&[-1, 2])), Err(Error::InvalidQuotient { index: 0 })));
        assert!(matches!(approximants(&big(&[0, 2, 0])), Err(Error::InvalidQuotient { index: 2 })));
    }

    #[test]
    fn pairs_to_quotients() {
        for (x, y, expect) in [(2, 7, vec![0, 2, 3]), (1, 2, vec![0, 2]), (5, 8, vec![0, 2, 1, 1, 1])] {
            let c = quotients_from_pair(&BigInt::from(x), &BigInt::from(y)).unwrap();
            assert_eq!(c, big(&expect));
            let conv = approximants(&c).unwrap();
            let t = c.len() - 2;
            assert_eq!((conv[t].1.clone(), conv[t + 1].1.clone()), (BigInt::from(x), BigInt::from(y)));
        }
        assert!(matches!(quotients_from_pair(&BigInt::from(4), &BigInt::from(6)), Err(Error::NotCoprime { .. })));
        assert!(quotients_from_pair(&BigInt::from(6), &BigInt::from(4)).is_err());
    }

    #[test]
    fn m_two_gives_odd_denominators() {
        let seq = build_alpha_hard(2, Rational::one()).unwrap();
        assert_eq!(seq.a(), &BigInt::from(2));
        for i in seq.k()..seq.k() + 8 {
            let (_, q) = seq.pq(i).unwrap();
            assert!(q.is_odd());
            assert!(verify_alpha(&seq, i).unwrap().passed());
        }
    }

    #[test]
    fn m_sixteen() {
        let seq = build_alpha_hard(16, Rational::from_integer(2.into())).unwrap();
        assert_eq!(seq.a(), &BigInt::from(720_720));
        assert_eq!(seq.k(), 1); // 2b > 32 already
        for i in seq.k()..seq.k() + 5 {
            let rep = verify_alpha(&seq, i).unwrap();
            assert_eq!(
                (rep.coprime, rep.interval, rep.approximation),
                (Verdict::Pass, Verdict::Pass, Verdict::Pass),
                "i = {i}"
            );
        }
        let below = verify_alpha(&seq, 0).unwrap();
        assert_eq!(below.interval, Verdict::NotGuaranteed);
    }

    #[test]
    fn golden_ratio_fails_coprimality() {
        let seq = AlphaSequence::from_quotients(3, Rational::one(), big(&[1, 1]), BigInt::one(), 0).unwrap();
        let reports: Vec<_> = (0..6).map(|i| verify_alpha(&seq, i).unwrap()).collect();
        assert!(reports.iter().any(|r| r.coprime == Verdict::Fail));
        assert!(reports.iter().any(|r| r.q.is_even()));
    }

    #[test]
    fn enclosures_shrink_and_contain_alpha() {
        let seq = build_alpha_hard(5, Rational::one()).unwrap();
        // α is exactly (P_{t+1} b + P_t) / (Q_{t+1} b + Q_t); test against floats loosely
        let encl: Vec<_> = seq.enclosures_from(0).take(8).collect();
        for w in encl.windows(2) {
            assert!(w[1].width() < w[0].width());
            assert!(w[1].lo >= w[0].lo && w[1].hi <= w[0].hi);
        }
    }

    #[test]
    fn json_round_trip() {
        let seq = build_alpha_hard(7, Rational::new(3.into(), 2.into())).unwrap();
        let s = serde_json::to_string(&seq).unwrap();
        assert!(s.contains("\"quotients_prefix\""));
        let back: AlphaSequence = serde_json::from_str(&s).unwrap();
        assert_eq!(back, seq);
    }
}
