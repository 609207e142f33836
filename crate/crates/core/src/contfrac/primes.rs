//! Primality testing and least common multiples.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::surd::QuadSurd;

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic for all `u64`: the first twelve primes are a complete
/// witness set below 3.3·10^24.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL_PRIMES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin over the first twelve prime bases. Exact below 3.3·10^24;
/// beyond that a composite passing all twelve bases is not known to exist.
pub fn is_prime(n: &BigInt) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if n.sign() == num_bigint::Sign::Minus {
        return false;
    }
    for p in SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in SMALL_PRIMES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `lcm(1, ..., m)`.
pub fn lcm_upto(m: u64) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)))
}

/// The least prime `p` with `lo < p < hi`.
pub fn first_prime_between(lo: &QuadSurd, hi: &QuadSurd) -> Option<BigInt> {
    let mut n = lo.floor() + 1;
    while hi.cmp_integer(&n) == std::cmp::Ordering::Greater {
        if is_prime(&n) {
            return Some(n);
        }
        n += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve(n: usize) -> Vec<bool> {
        let mut is = vec![true; n];
        is[0] = false;
        is[1] = false;
        for i in 2..n {
            if is[i] {
                for j in (i * i..n).step_by(i) {
                    is[j] = false;
                }
            }
        }
        is
    }

    #[test]
    fn matches_sieve() {
        let s = sieve(100_000);
        for (i, &p) in s.iter().enumerate() {
            assert_eq!(is_prime_u64(i as u64), p, "{i}");
        }
    }

    #[test]
    fn large_values() {
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        let m61 = (BigInt::one() << 61) - 1;
        assert!(is_prime(&m61));
        let m89 = (BigInt::one() << 89) - 1;
        assert!(is_prime(&m89));
        assert!(!is_prime(&(&m89 * BigInt::from(3))));
        assert!(!is_prime(&(&m89 * &m61)));
    }

    #[test]
    fn lcm_values() {
        assert_eq!(lcm_upto(1), BigInt::from(1));
        assert_eq!(lcm_upto(2), BigInt::from(2));
        assert_eq!(lcm_upto(5), BigInt::from(60));
        assert_eq!(lcm_upto(16), BigInt::from(720_720));
        for m in 1..40u32 {
            assert!(lcm_upto(m as u64) < BigInt::from(4).pow(m));
        }
    }
}
