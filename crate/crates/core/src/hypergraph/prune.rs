use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Hypergraph;
use crate::{Error, Rational, Result};

/// Result of [`prune_sparse_pairs`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneOutcome {
    /// The surviving subhypergraph `H'`.
    pub kept: Hypergraph,
    /// Pairs `uv` with `u < v` lying in some triple of `H'`.
    pub link: Vec<(u32, u32)>,
    pub deleted: usize,
}

/// Repeatedly deletes every triple through a pair that lies in at most
/// `δn` triples, until each pair covered by a triple lies in more than `δn`.
/// Sparse pairs are processed in ascending order.
pub fn prune_sparse_pairs(h: &Hypergraph, delta: &Rational) -> Result<PruneOutcome> {
    prune_sparse_pairs_with(h, delta, |_| 0)
}

/// As [`prune_sparse_pairs`], with `choose(m)` picking which of the `m`
/// currently sparse pairs (ascending order) to process next. The fixpoint
/// does not depend on the choices.
pub fn prune_sparse_pairs_with(
    h: &Hypergraph,
    delta: &Rational,
    mut choose: impl FnMut(usize) -> usize,
) -> Result<PruneOutcome> {
    if h.uniformity() != 3 {
        return Err(Error::UniformityMismatch { motif: 3, host: h.uniformity() });
    }
    if *delta <= Rational::zero() || *delta >= Rational::one() {
        return Err(Error::Invalid("pruning threshold must lie in (0, 1)".into()));
    }
    // count <= δn  <=>  count·den <= num·n
    let (num, den) = (delta.numer().clone(), delta.denom().clone());
    let limit = num * BigInt::from(h.vertex_count());
    let sparse_count = |c: usize| c > 0 && BigInt::from(c) * &den <= limit;

    let triples: Vec<[u32; 3]> = h.edges().map(|e| [e[0], e[1], e[2]]).collect();
    let mut alive = vec![true; triples.len()];
    let mut by_pair: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
    for (i, t) in triples.iter().enumerate() {
        for p in pairs_of(t) {
            by_pair.entry(p).or_default().push(i);
        }
    }
    let mut count: HashMap<(u32, u32), usize> = by_pair.iter().map(|(&p, ts)| (p, ts.len())).collect();
    let mut sparse: BTreeSet<(u32, u32)> = count.iter().filter(|&(_, &c)| sparse_count(c)).map(|(&p, _)| p).collect();
    let mut deleted = 0;

    while !sparse.is_empty() {
        let pick = choose(sparse.len()).min(sparse.len() - 1);
        let pair = *sparse.iter().nth(pick).expect("index in range");
        sparse.remove(&pair);
        for &ti in &by_pair[&pair] {
            if !alive[ti] {
                continue;
            }
            alive[ti] = false;
            deleted += 1;
            for p in pairs_of(&triples[ti]) {
                let c = count.get_mut(&p).expect("indexed pair");
                *c -= 1;
                if sparse_count(*c) {
                    sparse.insert(p);
                } else if *c == 0 {
                    sparse.remove(&p);
                }
            }
        }
    }

    let mut kept = Hypergraph::new(3, h.vertex_count())?;
    let mut link = BTreeSet::new();
    for (t, _) in triples.iter().zip(&alive).filter(|(_, &a)| a) {
        kept.add_edge(t)?;
        link.extend(pairs_of(t));
    }
    Ok(PruneOutcome { kept, link: link.into_iter().collect(), deleted })
}

fn pairs_of(t: &[u32; 3]) -> [(u32, u32); 3] {
    [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn lone_pair_triggers_deletion() {
        // Pair (4,5) lies only in {3,4,5}; δn = 1.
        let h = Hypergraph::from_edges(3, 6, [[0u32, 1, 2], [0, 1, 3], [3, 4, 5]]).unwrap();
        let out = prune_sparse_pairs(&h, &q(1, 6)).unwrap();
        assert!(!out.kept.contains_edge(&[3, 4, 5]));
        // The remaining triples share only (0,1); every other pair is lone,
        // so everything goes.
        assert_eq!(out.kept.edge_count(), 0);
        assert_eq!(out.deleted, 3);
    }

    #[test]
    fn complete_six_vertex_survives() {
        let h = Hypergraph::complete(3, 6).unwrap();
        let out = prune_sparse_pairs(&h, &q(1, 6)).unwrap();
        assert_eq!(out.deleted, 0);
        assert_eq!(out.kept, h);
        assert_eq!(out.link.len(), 15);
    }

    #[test]
    fn single_triple_is_removed() {
        let h = Hypergraph::from_edges(3, 4, [[0u32, 1, 2]]).unwrap();
        let out = prune_sparse_pairs(&h, &q(1, 4)).unwrap();
        assert_eq!(out.kept.edge_count(), 0);
        assert!(out.link.is_empty());
    }

    #[test]
    fn threshold_is_inclusive() {
        // Complete 3-graph on 5 vertices: each pair in 3 triples. δn = 3
        // deletes everything, δn just below 3 deletes nothing.
        let h = Hypergraph::complete(3, 5).unwrap();
        assert_eq!(prune_sparse_pairs(&h, &q(3, 5)).unwrap().kept.edge_count(), 0);
        assert_eq!(prune_sparse_pairs(&h, &q(299, 500)).unwrap().deleted, 0);
    }

    #[test]
    fn rejects_bad_input() {
        let h = Hypergraph::new(4, 5).unwrap();
        assert!(prune_sparse_pairs(&h, &q(1, 2)).is_err());
        let h = Hypergraph::new(3, 5).unwrap();
        assert!(prune_sparse_pairs(&h, &q(0, 1)).is_err());
        assert!(prune_sparse_pairs(&h, &q(1, 1)).is_err());
    }
}
