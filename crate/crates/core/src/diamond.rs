//! Tripartite graphs in which every edge lies in exactly one triangle.
//!
//! Parts are `X`, `Y`, `Z`, each a copy of `Z/N`. From a 3-AP-free
//! `A ⊆ Z/N` we take edges `(x, x+a)` in `X×Y`, `(y, y+a)` in `Y×Z` and
//! `(x, x+2a)` in `X×Z`. A triangle `x, x+a, x+a+b` with `x+a+b = x+2c`
//! forces `a + b = 2c`, so `a = b = c`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::behrend::cyclic_3ap_witness;
use crate::bits;
use crate::hypergraph::Hypergraph;
use crate::text::{content_lines, end_column, parse_error, parse_num, tokens};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    XY,
    YZ,
    XZ,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeKind::XY => "XY",
            EdgeKind::YZ => "YZ",
            EdgeKind::XZ => "XZ",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TripartiteGraph {
    n: u32,
    xy: BTreeSet<(u32, u32)>,
    yz: BTreeSet<(u32, u32)>,
    xz: BTreeSet<(u32, u32)>,
}

/// An edge together with the number of triangles through it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeWitness {
    pub kind: EdgeKind,
    pub u: u32,
    pub v: u32,
    pub triangles: u64,
}

impl TripartiteGraph {
    pub fn new(n: u32) -> Self {
        TripartiteGraph { n, ..Default::default() }
    }

    pub fn complete(n: u32) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in 0..n {
                g.xy.insert((u, v));
                g.yz.insert((u, v));
                g.xz.insert((u, v));
            }
        }
        g
    }

    pub fn part_size(&self) -> u32 {
        self.n
    }

    pub fn add_edge(&mut self, kind: EdgeKind, u: u32, v: u32) -> Result<bool> {
        if u >= self.n || v >= self.n {
            return Err(Error::Invalid(format!("{kind} edge ({u}, {v}) outside [0, {})", self.n)));
        }
        Ok(self.edges_mut(kind).insert((u, v)))
    }

    pub fn edges(&self, kind: EdgeKind) -> &BTreeSet<(u32, u32)> {
        match kind {
            EdgeKind::XY => &self.xy,
            EdgeKind::YZ => &self.yz,
            EdgeKind::XZ => &self.xz,
        }
    }

    fn edges_mut(&mut self, kind: EdgeKind) -> &mut BTreeSet<(u32, u32)> {
        match kind {
            EdgeKind::XY => &mut self.xy,
            EdgeKind::YZ => &mut self.yz,
            EdgeKind::XZ => &mut self.xz,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.xy.len() + self.yz.len() + self.xz.len()
    }

    fn rows(&self, kind: EdgeKind, transpose: bool) -> Vec<Vec<u64>> {
        let n = self.n as usize;
        let mut rows = vec![vec![0u64; bits::words_for(n)]; n];
        for &(u, v) in self.edges(kind) {
            let (r, c) = if transpose { (v, u) } else { (u, v) };
            bits::set(&mut rows[r as usize], c as usize);
        }
        rows
    }

    /// All triangles `(x, y, z)`, sorted.
    pub fn triangles(&self) -> Vec<(u32, u32, u32)> {
        let xz = self.rows(EdgeKind::XZ, false);
        let yz = self.rows(EdgeKind::YZ, false);
        let xy = self.rows(EdgeKind::XY, false);
        (0..self.n as usize)
            .into_par_iter()
            .flat_map_iter(|x| {
                let mut out = Vec::new();
                let mut common = vec![0u64; xz[x].len()];
                for y in bits::ones(&xy[x]) {
                    for (c, (a, b)) in common.iter_mut().zip(xz[x].iter().zip(&yz[y])) {
                        *c = a & b;
                    }
                    out.extend(bits::ones(&common).map(|z| (x as u32, y as u32, z as u32)));
                }
                out
            })
            .collect()
    }
}

fn and_count(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as u64).sum()
}

/// Builds the graph from `A ⊆ Z/N`, rejecting `A` if it has a nontrivial
/// 3-AP modulo `N`.
pub fn diamond_free_from_ap_free(a: &[u64], n: u32) -> Result<TripartiteGraph> {
    if n == 0 {
        return Err(Error::Invalid("part size must be positive".into()));
    }
    let residues: BTreeSet<u64> = a.iter().map(|&v| v % n as u64).collect();
    let residues: Vec<u64> = residues.into_iter().collect();
    if let Some(witness) = cyclic_3ap_witness(&residues, n as u64) {
        return Err(Error::NotApFree { modulus: n as u64, witness });
    }
    let n64 = n as u64;
    let mut g = TripartiteGraph::new(n);
    for &d in &residues {
        for x in 0..n64 {
            g.xy.insert((x as u32, ((x + d) % n64) as u32));
            g.yz.insert((x as u32, ((x + d) % n64) as u32));
            g.xz.insert((x as u32, ((x + 2 * d) % n64) as u32));
        }
    }
    Ok(g)
}

/// `None` when every edge lies in exactly one triangle; otherwise the first
/// offending edge (in `XY`, `YZ`, `XZ` order) and its triangle count.
pub fn verify_diamond_free(g: &TripartiteGraph) -> Option<EdgeWitness> {
    let xy = g.rows(EdgeKind::XY, false);
    let xy_t = g.rows(EdgeKind::XY, true);
    let yz = g.rows(EdgeKind::YZ, false);
    let xz = g.rows(EdgeKind::XZ, false);
    let xz_t = g.rows(EdgeKind::XZ, true);
    let yz_t = g.rows(EdgeKind::YZ, true);
    // XY (x,y): z in N(x)∩N(y); YZ (y,z): x in N(y)∩N(z); XZ (x,z): y in N(x)∩N(z)
    let count = |kind: EdgeKind, u: u32, v: u32| -> u64 {
        let (u, v) = (u as usize, v as usize);
        match kind {
            EdgeKind::XY => and_count(&xz[u], &yz[v]),
            EdgeKind::YZ => and_count(&xy_t[u], &xz_t[v]),
            EdgeKind::XZ => and_count(&xy[u], &yz_t[v]),
        }
    };
    for kind in [EdgeKind::XY, EdgeKind::YZ, EdgeKind::XZ] {
        let edges: Vec<(u32, u32)> = g.edges(kind).iter().copied().collect();
        let bad = edges.par_iter().find_map_first(|&(u, v)| {
            let t = count(kind, u, v);
            (t != 1).then_some(EdgeWitness { kind, u, v, triangles: t })
        });
        if bad.is_some() {
            return bad;
        }
    }
    None
}

/// The 3-uniform hypergraph on `3N` vertices (`X` = `0..N`, `Y` = `N..2N`,
/// `Z` = `2N..3N`) whose triples are the triangles of `g`.
pub fn triangle_hypergraph(g: &TripartiteGraph) -> Result<Hypergraph> {
    let n = g.n;
    Hypergraph::from_edges(3, 3 * n as usize, g.triangles().into_iter().map(|(x, y, z)| [x, n + y, 2 * n + z]))
}

pub fn read_graph(src: &str) -> Result<TripartiteGraph> {
    let mut lines = content_lines(src);
    let (ln, header) = lines.next().ok_or_else(|| parse_error(1, 1, "missing header `tripartite N`"))?;
    let toks = tokens(header);
    if toks.len() != 2 || toks[0].text != "tripartite" {
        return Err(parse_error(ln, 1, "expected header `tripartite N`"));
    }
    let n: u32 = parse_num(toks[1], ln, "part size")?;
    let mut g = TripartiteGraph::new(n);
    for (ln, line) in lines {
        let toks = tokens(line);
        if toks.len() != 3 {
            let col = toks.get(3).map_or(end_column(line), |t| t.column);
            return Err(parse_error(ln, col, format!("expected `KIND u v`, found {} tokens", toks.len())));
        }
        let kind = match toks[0].text {
            "XY" => EdgeKind::XY,
            "YZ" => EdgeKind::YZ,
            "XZ" => EdgeKind::XZ,
            other => return Err(parse_error(ln, toks[0].column, format!("unknown edge kind `{other}`"))),
        };
        let mut ends = [0u32; 2];
        for (slot, tok) in ends.iter_mut().zip(&toks[1..]) {
            *slot = parse_num(*tok, ln, "vertex index")?;
            if *slot >= n {
                return Err(parse_error(ln, tok.column, format!("vertex {slot} outside [0, {n})")));
            }
        }
        g.add_edge(kind, ends[0], ends[1])?;
    }
    Ok(g)
}

pub fn write_graph(g: &TripartiteGraph) -> String {
    let mut out = format!("tripartite {}\n", g.n);
    for kind in [EdgeKind::XY, EdgeKind::YZ, EdgeKind::XZ] {
        for (u, v) in g.edges(kind) {
            out.push_str(&format!("{kind} {u} {v}\n"));
        }
    }
    out
}
