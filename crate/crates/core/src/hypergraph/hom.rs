use std::collections::HashMap;

use rayon::prelude::*;

use super::{density_of, Hypergraph, Motif};
use crate::{Error, Rational, Result};

/// Maps each sorted `(k-1)`-set lying in some edge to the vertices that
/// complete it to an edge.
pub(crate) struct LinkIndex {
    completions: HashMap<Vec<u32>, Vec<u32>>,
}

impl LinkIndex {
    pub(crate) fn new(h: &Hypergraph) -> Self {
        let mut completions: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
        for e in h.edges() {
            for i in 0..e.len() {
                let mut key = e.to_vec();
                let v = key.remove(i);
                completions.entry(key).or_default().push(v);
            }
        }
        Self { completions }
    }

    /// Completions of the given vertices, which need not be sorted. Empty if
    /// they repeat a vertex.
    fn completions(&self, verts: &[u32], scratch: &mut Vec<u32>) -> &[u32] {
        scratch.clear();
        scratch.extend_from_slice(verts);
        scratch.sort_unstable();
        if scratch.windows(2).any(|w| w[0] == w[1]) {
            return &[];
        }
        self.completions.get(scratch.as_slice()).map_or(&[], Vec::as_slice)
    }

    fn codegree(&self, verts: &[u32], scratch: &mut Vec<u32>) -> u128 {
        self.completions(verts, scratch).len() as u128
    }

    pub(crate) fn keys(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.completions.keys().map(Vec::as_slice)
    }
}

/// Search plan for one motif: vertex order plus, per position, the motif
/// edges whose last vertex (in that order) sits at the position.
struct Plan {
    order: Vec<usize>,
    closing: Vec<Vec<Vec<usize>>>,
}

impl Plan {
    fn new(f: &Hypergraph) -> Self {
        let nv = f.vertex_count();
        let edges: Vec<&[u32]> = f.edges().collect();
        let mut placed = vec![false; nv];
        let mut order = Vec::with_capacity(nv);
        while order.len() < nv {
            // Prefer the vertex that closes the most edges, then the one
            // sharing the most edges with placed vertices.
            let best = (0..nv)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let mut closes = 0;
                    let mut touches = 0;
                    for e in &edges {
                        if e.contains(&(v as u32)) {
                            let others = e.iter().filter(|&&u| u as usize != v && placed[u as usize]).count();
                            if others == e.len() - 1 {
                                closes += 1;
                            }
                            touches += others;
                        }
                    }
                    (closes, touches, std::cmp::Reverse(v))
                })
                .expect("unplaced vertex");
            placed[best] = true;
            order.push(best);
        }
        let pos: Vec<usize> = {
            let mut p = vec![0; nv];
            for (i, &v) in order.iter().enumerate() {
                p[v] = i;
            }
            p
        };
        let mut closing = vec![Vec::new(); nv];
        for e in &edges {
            let last = e.iter().map(|&v| pos[v as usize]).max().expect("nonempty edge");
            let others: Vec<usize> = e.iter().map(|&v| pos[v as usize]).filter(|&p| p != last).collect();
            closing[last].push(others);
        }
        Self { order, closing }
    }
}

fn extend(plan: &Plan, link: &LinkIndex, n: u32, images: &mut Vec<u32>, scratch: &mut Vec<u32>) -> u128 {
    let depth = images.len();
    if depth == plan.order.len() {
        return 1;
    }
    let closing = &plan.closing[depth];
    let mut total = 0;
    let mut verts = Vec::with_capacity(8);
    let candidates: Vec<u32> = match closing.first() {
        None => (0..n).collect(),
        Some(first) => {
            verts.clear();
            verts.extend(first.iter().map(|&p| images[p]));
            link.completions(&verts, scratch).to_vec()
        }
    };
    'cand: for v in candidates {
        for others in closing.iter().skip(1) {
            verts.clear();
            verts.extend(others.iter().map(|&p| images[p]));
            if !link.completions(&verts, scratch).contains(&v) {
                continue 'cand;
            }
        }
        images.push(v);
        total += extend(plan, link, n, images, scratch);
        images.pop();
    }
    total
}

/// Number of homomorphisms from the motif into `h`.
pub fn hom_count(f: &Motif, h: &Hypergraph) -> Result<u128> {
    let fh = f.hypergraph();
    if fh.uniformity() != h.uniformity() {
        return Err(Error::UniformityMismatch { motif: fh.uniformity(), host: h.uniformity() });
    }
    if fh.vertex_count() == 0 {
        return Ok(1);
    }
    let plan = Plan::new(fh);
    let link = LinkIndex::new(h);
    let n = h.vertex_count() as u32;
    // The first vertex never closes an edge (k >= 2), so split on its image.
    let total = (0..n)
        .into_par_iter()
        .map(|v| {
            let mut images = vec![v];
            let mut scratch = Vec::new();
            extend(&plan, &link, n, &mut images, &mut scratch)
        })
        .sum();
    Ok(total)
}

/// Homomorphism count of the `k`-force into `h`, by the codegree product
/// formula: for each ordered `k`-tuple `(x_1, ..., x_k)` the number of
/// choices of `x_i'` is the codegree of the other `k - 1` vertices, and
/// these choices are independent.
pub fn kforce_hom_count(h: &Hypergraph) -> u128 {
    let k = h.uniformity();
    let n = h.vertex_count() as u32;
    let link = LinkIndex::new(h);
    // (x_1, ..., x_{k-1}) must have positive codegree, so it is an
    // ordering of some link key.
    let keys: Vec<&[u32]> = link.keys().collect();
    keys.par_iter()
        .map(|key| {
            let mut scratch = Vec::new();
            let mut verts = Vec::with_capacity(k);
            let mut total = 0u128;
            let base = link.codegree(key, &mut scratch);
            for perm in permutations(key) {
                for xk in 0..n {
                    let mut prod = base;
                    for i in 0..k - 1 {
                        verts.clear();
                        verts.extend(perm.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v));
                        verts.push(xk);
                        prod *= link.codegree(&verts, &mut scratch);
                        if prod == 0 {
                            break;
                        }
                    }
                    total += prod;
                }
            }
            total
        })
        .sum()
}

/// `hom(k-force, H) / n^{2k}`.
pub fn kforce_density(h: &Hypergraph) -> Result<Rational> {
    if h.vertex_count() == 0 {
        return Err(Error::NoVertices);
    }
    Ok(density_of(kforce_hom_count(h), h.vertex_count(), 2 * h.uniformity()))
}

fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}
