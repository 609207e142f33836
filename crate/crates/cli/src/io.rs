use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use cornerforge::patterns::io::{read_grid_set, read_group_set};
use cornerforge::patterns::{GridSet, Group, GroupSet};
use serde_json::Value;

use crate::Ctx;

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Reads and parses a file; parse errors carry `path: line L, column C`.
pub fn parse_file<T>(path: &Path, parse: impl FnOnce(&str) -> cornerforge::Result<T>) -> Result<T> {
    let src = read_text(path)?;
    parse(&src).with_context(|| path.display().to_string())
}

pub enum AnySet {
    Grid(GridSet),
    Group(GroupSet),
}

/// A grid set or, if the header starts with `group`, a group set.
pub fn read_any_set(path: &Path) -> Result<AnySet> {
    let src = read_text(path)?;
    let is_group = src.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty()).is_some_and(|l| l.starts_with("group"));
    let ctx = || path.display().to_string();
    Ok(if is_group {
        AnySet::Group(read_group_set(&src).with_context(ctx)?)
    } else {
        AnySet::Grid(read_grid_set(&src).with_context(ctx)?)
    })
}

/// Writes the main artifact to `-o` or stdout.
pub fn emit(ctx: &Ctx, content: &str) -> Result<()> {
    match &ctx.output {
        Some(p) => fs::write(p, content).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

pub fn emit_json(ctx: &Ctx, v: &Value) -> Result<()> {
    emit(ctx, &(serde_json::to_string_pretty(v)? + "\n"))
}

/// Where a construct command puts its params JSON: `--params`, else next to
/// `-o` as `<output>.params.json`, else stderr.
pub fn write_params(ctx: &Ctx, explicit: &Option<PathBuf>, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    let path = explicit.clone().or_else(|| {
        ctx.output.as_ref().map(|o| {
            let mut s = o.clone().into_os_string();
            s.push(".params.json");
            PathBuf::from(s)
        })
    });
    match path {
        Some(p) => fs::write(&p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

/// `z<N>` for Z/NZ or `f<p>^<n>` for F_p^n.
pub fn parse_group(s: &str) -> Result<Group> {
    let bad = || anyhow::anyhow!("bad group `{s}` (expected z<N> or f<p>^<n>)");
    if let Some(n) = s.strip_prefix('z') {
        return Ok(Group::cyclic(n.parse().map_err(|_| bad())?)?);
    }
    if let Some(rest) = s.strip_prefix('f') {
        let (p, n) = rest.split_once('^').ok_or_else(bad)?;
        return Ok(Group::elementary(p.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?)?);
    }
    Err(bad())
}

pub fn parse_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().with_context(|| format!("`{t}` is not an integer in list `{s}`")))
        .collect()
}

pub fn parse_rational(s: &str) -> Result<cornerforge::Rational> {
    cornerforge::text::parse_rational(s).with_context(|| format!("`{s}` is not a rational"))
}

/// Sets in `{0..L-1}` are written in the 1-dimensional grid format, shifted
/// to the 1-based coordinates `j + 1`.
pub fn line_set(l: u64, elements: &[u64]) -> Result<GridSet> {
    let mut set = GridSet::new(1, l as usize)?;
    for &j in elements {
        set.insert(&[j as i64 + 1])?;
    }
    Ok(set)
}

pub fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}
