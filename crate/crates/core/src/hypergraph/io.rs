//! Hypergraph files (`k n m` header, then `m` lines of `k` vertex indices)
//! and kernel files (`g` header, then `g³` rationals with `x` fastest).

use super::{Hypergraph, StepKernel};
use crate::text::{content_lines, end_column, parse_error, parse_num, parse_rational, tokens};
use crate::Result;

pub fn read_hypergraph(src: &str) -> Result<Hypergraph> {
    let mut lines = content_lines(src);
    let (ln, header) = lines.next().ok_or_else(|| parse_error(1, 1, "missing header `k n m`"))?;
    let toks = tokens(header);
    if toks.len() != 3 {
        return Err(parse_error(ln, 1, "expected header `k n m`"));
    }
    let k: usize = parse_num(toks[0], ln, "uniformity")?;
    let n: usize = parse_num(toks[1], ln, "vertex count")?;
    let m: usize = parse_num(toks[2], ln, "edge count")?;
    let mut h = Hypergraph::new(k, n).map_err(|e| parse_error(ln, 1, e.to_string()))?;
    let mut seen = 0;
    let mut last_line = ln;
    for (ln, line) in lines {
        last_line = ln;
        let toks = tokens(line);
        if toks.len() != k {
            let col = toks.get(k).map_or(end_column(line), |t| t.column);
            return Err(parse_error(ln, col, format!("expected {k} vertices, found {}", toks.len())));
        }
        let mut e = Vec::with_capacity(k);
        for tok in &toks {
            let v: u32 = parse_num(*tok, ln, "vertex index")?;
            if v as usize >= n {
                return Err(parse_error(ln, tok.column, format!("vertex {v} outside [0, {n})")));
            }
            e.push(v);
        }
        h.add_edge(&e).map_err(|err| parse_error(ln, 1, err.to_string()))?;
        seen += 1;
    }
    if seen != m {
        return Err(parse_error(last_line + 1, 1, format!("header declares {m} edges, found {seen}")));
    }
    Ok(h)
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("{} {} {}\n", h.uniformity(), h.vertex_count(), h.edge_count());
    for e in h.edges() {
        let row: Vec<String> = e.iter().map(u32::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_kernel(src: &str) -> Result<StepKernel> {
    let mut lines = content_lines(src);
    let (ln, header) = lines.next().ok_or_else(|| parse_error(1, 1, "missing header `g`"))?;
    let toks = tokens(header);
    if toks.len() != 1 {
        return Err(parse_error(ln, 1, "expected header `g`"));
    }
    let g: usize = parse_num(toks[0], ln, "resolution")?;
    let mut values = Vec::new();
    let mut last = (ln, 1);
    for (ln, line) in lines {
        for tok in tokens(line) {
            let v = parse_rational(tok.text)
                .ok_or_else(|| parse_error(ln, tok.column, format!("`{}` is not a rational", tok.text)))?;
            values.push(v);
            last = (ln, tok.column);
        }
    }
    StepKernel::new(g, values).map_err(|e| parse_error(last.0, last.1, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn hypergraph_round_trip() {
        let h = read_hypergraph("3 5 2\n0 1 2\n4 3 2\n").unwrap();
        assert!(h.contains_edge(&[2, 3, 4]));
        assert_eq!(read_hypergraph(&write_hypergraph(&h)).unwrap(), h);
    }

    #[test]
    fn hypergraph_diagnostics() {
        let err = read_hypergraph("3 5 1\n0 1 9\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 5, .. }), "{err}");
        let err = read_hypergraph("3 5 2\n0 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn kernel_round_trip() {
        let k = read_kernel("2\n1/2 0 1 0.25\n1 1 1 1\n").unwrap();
        assert_eq!(k.values().len(), 8);
        assert_eq!(read_kernel(&k.to_text()).unwrap(), k);
        let err = read_kernel("1\n3/2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = read_kernel("1\nabc\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 1, .. }), "{err}");
    }
}
