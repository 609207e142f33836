//! Plain-text set formats and spectrum CSV.
//!
//! Grid set: a header `dim k side N`, then one point per line as `k`
//! space-separated 1-based coordinates. Group set: a header `group zN <N>`
//! or `group fp <p> <n>`, then one pair per line, each element an integer
//! (`zN`) or a comma-separated vector (`fp`).

use std::fmt::Write;

use super::{GridSet, Group, GroupSet, Spectrum};
use crate::text::{content_lines, end_column, parse_error, parse_num, tokens};
use crate::Result;

pub fn read_grid_set(src: &str) -> Result<GridSet> {
    let mut lines = content_lines(src);
    let (ln, header) = lines.next().ok_or_else(|| parse_error(1, 1, "missing header `dim k side N`"))?;
    let toks = tokens(header);
    if toks.len() != 4 || toks[0].text != "dim" || toks[2].text != "side" {
        return Err(parse_error(ln, 1, "expected header `dim k side N`"));
    }
    let dim: usize = parse_num(toks[1], ln, "dimension")?;
    let side: usize = parse_num(toks[3], ln, "side")?;
    let mut set = GridSet::new(dim, side).map_err(|e| parse_error(ln, 1, e.to_string()))?;
    let mut p = vec![0i64; dim];
    for (ln, line) in lines {
        let toks = tokens(line);
        if toks.len() != dim {
            let col = toks.get(dim).map_or(end_column(line), |t| t.column);
            return Err(parse_error(ln, col, format!("expected {dim} coordinates, found {}", toks.len())));
        }
        for (slot, tok) in p.iter_mut().zip(&toks) {
            *slot = parse_num(*tok, ln, "integer coordinate")?;
            if *slot < 1 || *slot > side as i64 {
                return Err(parse_error(ln, tok.column, format!("coordinate {} outside [1, {side}]", *slot)));
            }
        }
        set.insert(&p).map_err(|e| parse_error(ln, 1, e.to_string()))?;
    }
    Ok(set)
}

pub fn write_grid_set(set: &GridSet) -> String {
    let mut out = format!("dim {} side {}\n", set.dim(), set.side());
    for p in set.points() {
        let row: Vec<String> = p.iter().map(i64::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_group_set(src: &str) -> Result<GroupSet> {
    let mut lines = content_lines(src);
    let (ln, header) =
        lines.next().ok_or_else(|| parse_error(1, 1, "missing header `group zN <N>` or `group fp <p> <n>`"))?;
    let toks = tokens(header);
    if toks.first().map(|t| t.text) != Some("group") || toks.len() < 3 {
        return Err(parse_error(ln, 1, "expected header `group zN <N>` or `group fp <p> <n>`"));
    }
    let group = match (toks[1].text, toks.len()) {
        ("zN", 3) => Group::cyclic(parse_num(toks[2], ln, "modulus")?),
        ("fp", 4) => Group::elementary(parse_num(toks[2], ln, "prime")?, parse_num(toks[3], ln, "rank")?),
        _ => return Err(parse_error(ln, toks[1].column, "unknown group kind or wrong argument count")),
    }
    .map_err(|e| parse_error(ln, toks[2].column, e.to_string()))?;
    let mut set = GroupSet::new(group);
    for (ln, line) in lines {
        let toks = tokens(line);
        if toks.len() != 2 {
            let col = toks.get(2).map_or(end_column(line), |t| t.column);
            return Err(parse_error(ln, col, format!("expected 2 group elements, found {}", toks.len())));
        }
        let mut pair = [0usize; 2];
        for (slot, tok) in pair.iter_mut().zip(&toks) {
            *slot = group
                .parse_element(tok.text)
                .ok_or_else(|| parse_error(ln, tok.column, format!("`{}` is not an element", tok.text)))?;
        }
        set.insert(pair[0], pair[1]);
    }
    Ok(set)
}

pub fn write_group_set(set: &GroupSet) -> String {
    let g = set.group();
    let mut out = format!("group {}\n", g.descriptor());
    for (a, b) in set.pairs() {
        let _ = writeln!(out, "{} {}", g.format_element(a), g.format_element(b));
    }
    out
}

pub fn grid_spectrum_csv(s: &Spectrum<i64>) -> String {
    let mut out = String::from("d,count\n");
    for (d, c) in &s.entries {
        let _ = writeln!(out, "{d},{c}");
    }
    out
}

/// Elements of `F_p^n` contain commas, so they are quoted.
pub fn group_spectrum_csv(g: Group, s: &Spectrum<usize>) -> String {
    let mut out = String::from("d,count\n");
    for &(d, c) in &s.entries {
        match g {
            Group::Cyclic { .. } => {
                let _ = writeln!(out, "{d},{c}");
            }
            Group::Elementary { .. } => {
                let _ = writeln!(out, "\"{}\",{c}", g.format_element(d));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn grid_round_trip() {
        let src = "dim 3 side 4\n1 2 3\n4 4 4\n# comment\n\n2 1 1\n";
        let set = read_grid_set(src).unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(read_grid_set(&write_grid_set(&set)).unwrap(), set);
    }

    #[test]
    fn grid_diagnostics_carry_position() {
        let err = read_grid_set("dim 2 side 3\n1 2\n1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 3, .. }), "{err}");
        let err = read_grid_set("dim 2 side 3\n1 4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 3, .. }), "{err}");
        let err = read_grid_set("dim 2 side 3\n1 2 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 5, .. }), "{err}");
        assert!(read_grid_set("").is_err());
    }

    #[test]
    fn group_round_trip() {
        let src = "group fp 3 2\n1,2 0,0\n2,2 1,1\n-1,5 0,0\n";
        let set = read_group_set(src).unwrap();
        assert_eq!(set.len(), 3);
        assert!(set.contains(set.group().parse_element("2,2").unwrap(), 0));
        assert_eq!(read_group_set(&write_group_set(&set)).unwrap(), set);

        let z = read_group_set("group zN 7\n8 -1\n").unwrap();
        assert!(z.contains(1, 6));
        let err = read_group_set("group fp 3 2\n1,2 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 5, .. }), "{err}");
    }

    #[test]
    fn spectrum_csv_quotes_vectors() {
        let g = Group::elementary(3, 2).unwrap();
        let s = Spectrum { entries: vec![(1usize, 4u64), (5, 0)] };
        assert_eq!(group_spectrum_csv(g, &s), "d,count\n\"1,0\",4\n\"2,1\",0\n");
        let s = Spectrum { entries: vec![(-1i64, 2u64), (1, 2)] };
        assert_eq!(grid_spectrum_csv(&s), "d,count\n-1,2\n1,2\n");
    }
}
