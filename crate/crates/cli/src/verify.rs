use std::fmt::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};
use cornerforge::avoiders::{Avoider, AvoiderParams, Form};
use cornerforge::behrend::{qc_coefficients, verify_qc_free, verify_relation_free};
use cornerforge::contfrac::{verify_alpha, AlphaSequence};
use cornerforge::diamond::{read_graph, verify_diamond_free};
use cornerforge::patterns::io::read_grid_set;
use cornerforge::patterns::GridSet;
use cornerforge::text::format_rational;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::io::{emit, emit_json, parse_file, parse_list, read_text};
use crate::{Ctx, Format, Status};

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Every edge of a tripartite graph lies in exactly one triangle.
    Diamondfree(FileArg),
    /// A 1-dimensional set has no nontrivial solution of Σ c_i y_i = 0.
    Relationfree(RelationArgs),
    /// A 1-dimensional set contains no quadratic configuration of type a.
    Qcfree(QcArgs),
    /// The approximant properties of an alpha sequence.
    Alpha(AlphaArgs),
    /// Brute-force patterns in an avoider and check the transfer bounds.
    Avoidance(AvoidanceArgs),
}

#[derive(Args, Debug)]
pub struct FileArg {
    file: PathBuf,
}

#[derive(Args, Debug)]
pub struct RelationArgs {
    /// Integer coefficients summing to zero, e.g. 1,1,1,-3.
    #[arg(long, allow_hyphen_values = true)]
    relation: String,
    file: PathBuf,
}

#[derive(Args, Debug)]
pub struct QcArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    file: PathBuf,
}

#[derive(Args, Debug)]
pub struct AlphaArgs {
    /// Alpha sequence JSON, as written by `construct alpha`.
    file: PathBuf,
    /// First index i (default: the construction's K).
    #[arg(long)]
    from: Option<u32>,
    #[arg(long, default_value_t = 5)]
    count: u32,
}

#[derive(Args, Debug)]
pub struct AvoidanceArgs {
    /// Params JSON from `construct corner3d` or `construct fivepoint`.
    #[arg(long)]
    params: PathBuf,
    /// Set file to check; rebuilt from the params when omitted.
    set: Option<PathBuf>,
}

pub fn run(cmd: Verify, ctx: &Ctx) -> Result<Status> {
    match cmd {
        Verify::Diamondfree(a) => {
            let g = parse_file(&a.file, read_graph)?;
            let w = verify_diamond_free(&g);
            let v = json!({ "N": g.part_size(), "edges": g.edge_count(), "diamond_free": w.is_none(), "witness": w });
            finish(ctx, v, w.is_none())
        }
        Verify::Relationfree(a) => {
            let c = parse_list(&a.relation)?;
            let set = line_members(&a.file)?;
            let sol = verify_relation_free(&set, &c)?;
            let v = json!({ "relation": c, "size": set.len(), "relation_free": sol.is_none(), "witness": sol });
            finish(ctx, v, sol.is_none())
        }
        Verify::Qcfree(a) => {
            let coeffs = parse_list(&a.a)?;
            let sys = qc_coefficients(&coeffs)?;
            // QC membership is invariant under translation, so 1-based
            // coordinates are as good as the 0-based originals
            let set = line_members(&a.file)?;
            let w = verify_qc_free(&set, &sys);
            let v = json!({ "a": coeffs, "size": set.len(), "qc_free": w.is_none(), "witness": w });
            finish(ctx, v, w.is_none())
        }
        Verify::Alpha(a) => {
            let src = read_text(&a.file)?;
            let seq: AlphaSequence =
                serde_json::from_str(&src).with_context(|| format!("{}: not an alpha sequence", a.file.display()))?;
            let from = a.from.unwrap_or(seq.k());
            let reports = (from..from + a.count).map(|i| verify_alpha(&seq, i)).collect::<cornerforge::Result<Vec<_>>>()?;
            let ok = reports.iter().all(|r| r.passed());
            match ctx.format {
                Format::Json => emit_json(ctx, &json!({ "K": seq.k(), "passed": ok, "reports": reports }))?,
                Format::Csv => {
                    let mut out = String::from("i,q,coprime,interval,approximation\n");
                    for r in &reports {
                        let verdict = |v| serde_json::to_value(v).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                        let _ = writeln!(out, "{},{},{},{},{}", r.i, r.q, verdict(r.coprime), verdict(r.interval), verdict(r.approximation));
                    }
                    emit(ctx, &out)?;
                }
            }
            Ok(if ok { Status::Ok } else { Status::Failed })
        }
        Verify::Avoidance(a) => avoidance(ctx, &a),
    }
}

fn finish(ctx: &Ctx, v: Value, ok: bool) -> Result<Status> {
    match ctx.format {
        Format::Json => emit_json(ctx, &v)?,
        Format::Csv => {
            let mut out = String::from("key,value\n");
            for (k, val) in v.as_object().expect("object") {
                let _ = writeln!(out, "{k},\"{}\"", val.to_string().replace('"', "\"\""));
            }
            emit(ctx, &out)?;
        }
    }
    Ok(if ok { Status::Ok } else { Status::Failed })
}

fn line_members(path: &Path) -> Result<Vec<i64>> {
    let set = parse_file(path, read_grid_set)?;
    if set.dim() != 1 {
        bail!("{}: expected a 1-dimensional set, found dimension {}", path.display(), set.dim());
    }
    Ok(set.points().map(|p| p[0]).collect())
}

struct Row {
    d: i64,
    count: u64,
    bound: Option<u64>,
    pass: bool,
    witness: Option<Value>,
}

fn avoidance(ctx: &Ctx, a: &AvoidanceArgs) -> Result<Status> {
    let raw: Value = serde_json::from_str(&read_text(&a.params)?)
        .with_context(|| format!("{}: invalid JSON", a.params.display()))?;
    let params: AvoiderParams = serde_json::from_value(raw.get("avoider").cloned().unwrap_or(raw))
        .with_context(|| format!("{}: no avoider parameters", a.params.display()))?;
    let av = Avoider::from_params(params)?;
    let set = match &a.set {
        Some(p) => {
            let set = parse_file(p, read_grid_set)?;
            if set.dim() != av.dim() || set.side() as u64 != av.side() {
                bail!("{}: shape differs from the params ({}-dimensional, side {})", p.display(), av.dim(), av.side());
            }
            // every listed point must pass the exact membership test
            if let Some(x) = set.points().find(|x| !av.contains(x)) {
                let v = json!({ "membership": false, "witness": x });
                return finish(ctx, v, false);
            }
            set
        }
        None => av.materialize()?,
    };
    let rows = match av.params().form {
        Form::Corner => corner_rows(&av, &set),
        Form::Square => five_point_rows(&av, &set)?,
    };
    let ok = rows.iter().all(|r| r.pass);
    match ctx.format {
        Format::Csv => {
            let mut out = String::from("d,count,bound,pass\n");
            for r in &rows {
                let bound = r.bound.map_or(String::new(), |b| b.to_string());
                let _ = writeln!(out, "{},{},{},{}", r.d, r.count, bound, r.pass);
            }
            emit(ctx, &out)?;
        }
        Format::Json => {
            let p = av.params();
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| json!({ "d": r.d, "count": r.count, "bound": r.bound, "pass": r.pass, "witness": r.witness }))
                .collect();
            emit_json(
                ctx,
                &json!({
                    "form": p.form,
                    "N": p.n,
                    "L": p.l,
                    "size": set.len(),
                    "bound": matches!(p.form, Form::Corner).then(|| format_rational(&av.corner_count_bound())),
                    "passed": ok,
                    "rows": rows,
                }),
            )?;
        }
    }
    Ok(if ok { Status::Ok } else { Status::Failed })
}

/// Per difference: corners found, the proof's cap `⌊14N³/L⌋`, and whether
/// every corner satisfies the transfer lemma and its rational follow-up.
fn corner_rows(av: &Avoider, set: &GridSet) -> Vec<Row> {
    let n = av.side() as i64;
    let bound = av.corner_count_bound().to_integer().try_into().unwrap_or(u64::MAX);
    let members: Vec<Vec<i64>> = set.points().collect();
    (1 - n..n)
        .into_par_iter()
        .filter(|&d| d != 0)
        .map(|d| {
            let mut count = 0;
            let mut witness = None;
            for p in &members {
                let (x, y, z) = (p[0], p[1], p[2]);
                if set.contains(&[x + d, y, z]) && set.contains(&[x, y + d, z]) && set.contains(&[x, y, z + d]) {
                    count += 1;
                    let t = av.corner_transfer([x, y, z], d);
                    if witness.is_none() && !(t.holds() && av.corner_downstream([x, y, z], d)) {
                        witness = Some(json!([x, y, z]));
                    }
                }
            }
            Row { d, count, bound: Some(bound), pass: witness.is_none() && count <= bound, witness }
        })
        .collect()
}

/// Per difference: anchors `x` with every `x + a_i d` in the set, each
/// checked against the five-point transfer bound. There is no count cap.
fn five_point_rows(av: &Avoider, set: &GridSet) -> Result<Vec<Row>> {
    let n = av.side() as i64;
    let a = av.params().a.clone().context("five-point params lack the pattern a")?;
    let (lo, hi) = (*a.iter().min().unwrap_or(&0), *a.iter().max().unwrap_or(&0));
    let span = (hi - lo).max(1);
    let dmax = (n - 1) / span;
    (-dmax..=dmax)
        .into_par_iter()
        .filter(|&d| d != 0)
        .map(|d| {
            let mut count = 0;
            let mut witness = None;
            for x in -(n * span)..=(n * span) {
                if a.iter().all(|&ai| set.contains(&[x + ai * d])) {
                    count += 1;
                    if witness.is_none() && !av.five_point_transfer(x, d)?.holds() {
                        witness = Some(json!(x));
                    }
                }
            }
            Ok(Row { d, count, bound: None, pass: witness.is_none(), witness })
        })
        .collect()
}
