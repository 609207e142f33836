//! Uniform hypergraphs and homomorphism densities.
//!
//! Homomorphism convention: a vertex map `V(F) -> V(H)` is a homomorphism
//! when every edge of `F` is sent to an edge of `H` with all `k` images
//! distinct. Under this convention a single triple carries exactly six
//! triforce homomorphisms, one per ordering of its vertices.

mod hom;
pub mod io;
mod kernel;
mod prune;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Rational, Result};

pub use hom::{hom_count, kforce_density, kforce_hom_count};
pub use kernel::{triforce_weighted, StepKernel};
pub use prune::{prune_sparse_pairs, prune_sparse_pairs_with, PruneOutcome};

/// A `k`-uniform hypergraph on vertices `0..n`. Edges are stored sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    edges: BTreeSet<Vec<u32>>,
}

impl Hypergraph {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Invalid(format!("uniformity must be at least 2, got {k}")));
        }
        if n > u32::MAX as usize {
            return Err(Error::Overflow("vertex count"));
        }
        Ok(Self { k, n, edges: BTreeSet::new() })
    }

    pub fn from_edges<E: AsRef<[u32]>>(k: usize, n: usize, edges: impl IntoIterator<Item = E>) -> Result<Self> {
        let mut h = Self::new(k, n)?;
        for e in edges {
            h.add_edge(e.as_ref())?;
        }
        Ok(h)
    }

    /// All `C(n, k)` edges.
    pub fn complete(k: usize, n: usize) -> Result<Self> {
        let mut h = Self::new(k, n)?;
        let mut e: Vec<u32> = (0..k as u32).collect();
        if k > n {
            return Ok(h);
        }
        loop {
            h.edges.insert(e.clone());
            // next combination in lexicographic order
            let mut i = k;
            while i > 0 && e[i - 1] as usize == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            e[i - 1] += 1;
            for j in i..k {
                e[j] = e[j - 1] + 1;
            }
        }
        Ok(h)
    }

    /// Adds an edge; returns `false` if it was already present.
    pub fn add_edge(&mut self, edge: &[u32]) -> Result<bool> {
        if edge.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: edge.len() });
        }
        let mut e = edge.to_vec();
        e.sort_unstable();
        if e.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid(format!("edge {edge:?} repeats a vertex")));
        }
        if let Some(&v) = e.last().filter(|&&v| v as usize >= self.n) {
            return Err(Error::Invalid(format!("vertex {v} outside [0, {})", self.n)));
        }
        Ok(self.edges.insert(e))
    }

    pub fn uniformity(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted vertex lists, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.edges.iter().map(Vec::as_slice)
    }

    pub fn contains_edge(&self, edge: &[u32]) -> bool {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.contains(&e)
    }
}

/// A small hypergraph used as the pattern of a homomorphism count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Motif(Hypergraph);

impl Motif {
    pub const MAX_VERTICES: usize = 10;

    pub fn new(h: Hypergraph) -> Result<Self> {
        if h.n > Self::MAX_VERTICES {
            return Err(Error::Invalid(format!(
                "motifs have at most {} vertices, got {}",
                Self::MAX_VERTICES,
                h.n
            )));
        }
        Ok(Self(h))
    }

    /// Vertices `1, 2, 3` are `0, 1, 2`; `1', 2', 3'` are `3, 4, 5`. Edges
    /// `123'`, `12'3`, `1'23`.
    pub fn triforce() -> Self {
        Self::kforce(3)
    }

    /// The `k`-uniform hypergraph on `2k` vertices whose `i`-th edge is
    /// `{1, ..., k}` with `i` replaced by `i'`. Vertex `i'` is `k + i`.
    pub fn kforce(k: usize) -> Self {
        assert!((2..=5).contains(&k), "k-force supported for 2 <= k <= 5");
        let k32 = k as u32;
        let edges = (0..k32).map(|i| (0..k32).map(|j| if j == i { k32 + i } else { j }).collect::<Vec<_>>());
        Self(Hypergraph::from_edges(k, 2 * k, edges).expect("valid k-force"))
    }

    pub fn single_edge(k: usize) -> Self {
        let e: Vec<u32> = (0..k as u32).collect();
        Self(Hypergraph::from_edges(k, k, [e]).expect("valid edge"))
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.0
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "triforce" => Ok(Self::triforce()),
            _ => {
                if let Some(k) = name.strip_suffix("force").and_then(|k| k.parse::<usize>().ok()) {
                    if (2..=5).contains(&k) {
                        return Ok(Self::kforce(k));
                    }
                }
                if let Some(k) = name.strip_prefix("edge").and_then(|k| k.parse::<usize>().ok()) {
                    if (2..=Self::MAX_VERTICES).contains(&k) {
                        return Ok(Self::single_edge(k));
                    }
                }
                Err(Error::Invalid(format!("unknown motif `{name}` (triforce, <k>force, edge<k>)")))
            }
        }
    }
}

/// `k!·|E| / n^k` as an exact rational.
pub fn edge_density(h: &Hypergraph) -> Result<Rational> {
    if h.n == 0 {
        return Err(Error::NoVertices);
    }
    let fact: BigInt = (1..=h.k).map(BigInt::from).product();
    let num = fact * BigInt::from(h.edges.len());
    Ok(Rational::new(num, BigInt::from(h.n).pow(h.k as u32)))
}

pub(crate) fn density_of(count: u128, n: usize, exponent: usize) -> Rational {
    if count.is_zero() {
        return Rational::zero();
    }
    let den = BigInt::from(n).pow(exponent as u32);
    Rational::new(BigInt::from(count), if den.is_zero() { BigInt::one() } else { den })
}
