//! Small helpers shared by the plain-text file readers.

use crate::{Error, Result};

/// A whitespace-separated token and its 1-based column.
#[derive(Debug, Clone, Copy)]
pub struct Token<'a> {
    pub text: &'a str,
    pub column: usize,
}

pub fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token { text: &line[s..i], column: s + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &line[s..], column: s + 1 });
    }
    out
}

pub fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Non-empty lines with their 1-based line numbers; `#` starts a comment.
pub fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        if l.trim().is_empty() {
            None
        } else {
            Some((i + 1, l))
        }
    })
}

pub fn parse_num<T: std::str::FromStr>(tok: Token<'_>, line: usize, what: &str) -> Result<T> {
    tok.text
        .parse()
        .map_err(|_| parse_error(line, tok.column, format!("expected {what}, found `{}`", tok.text)))
}

/// Position just past the end of a line, for "missing token" diagnostics.
pub fn end_column(line: &str) -> usize {
    line.trim_end().len() + 1
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.125`, exactly.
pub fn parse_rational(s: &str) -> Option<crate::Rational> {
    use num_bigint::BigInt;
    use num_traits::{Num, Zero};
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str_radix(p.trim(), 10).ok()?;
        let q = BigInt::from_str_radix(q.trim(), 10).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(crate::Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{int_digits}{frac}");
        let mut num = BigInt::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).ok()?;
        if neg {
            num = -num;
        }
        return Some(crate::Rational::new(num, BigInt::from(10).pow(frac.len() as u32)));
    }
    BigInt::from_str_radix(s, 10).ok().map(crate::Rational::from_integer)
}

pub fn format_rational(q: &crate::Rational) -> String {
    use num_traits::One;
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// SHA-256 of `bytes`, hex encoded.
pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}

/// Serde adapters writing big numbers as decimal strings, so JSON stays
/// readable and lossless.
pub mod serde_big {
    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("invalid integer `{s}`")))
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            Vec::<String>::deserialize(d)?
                .into_iter()
                .map(|s| s.parse().map_err(|_| D::Error::custom(format!("invalid integer `{s}`"))))
                .collect()
        }
    }
}

/// Serde adapter writing a rational as `p/q` (or `p` when integral).
pub mod serde_rational {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &crate::Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<crate::Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).ok_or_else(|| D::Error::custom(format!("invalid rational `{s}`")))
    }
}
