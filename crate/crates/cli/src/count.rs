use std::fmt::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand};
use cornerforge::hypergraph::io::{read_hypergraph, read_kernel};
use cornerforge::hypergraph::{edge_density, hom_count, kforce_density, kforce_hom_count, triforce_weighted, Motif};
use cornerforge::mandache::mandache_report;
use cornerforge::patterns::io::{grid_spectrum_csv, group_spectrum_csv};
use cornerforge::patterns::{grid_spectrum, group_spectrum, Pattern};
use cornerforge::text::format_rational;
use cornerforge::Rational;
use serde_json::{json, Value};

use crate::io::{emit, emit_json, parse_file, parse_group, read_any_set, AnySet};
use crate::{Ctx, Format, Status};

#[derive(Subcommand, Debug)]
pub enum Count {
    /// Pattern count for every nonzero difference d.
    Spectrum(SpectrumArgs),
    /// Edge density and k-force density of a hypergraph.
    Density(HypergraphArgs),
    /// Homomorphisms from a motif into a hypergraph.
    Homs(HomArgs),
    /// Exact triforce density of a step kernel.
    Triforce(KernelArgs),
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    /// cornerK, apK, or points like 0,0;1,0;0,1.
    #[arg(long)]
    pattern: String,
    /// Grid set or group set file.
    #[arg(long)]
    set: PathBuf,
}

#[derive(Args, Debug)]
pub struct HypergraphArgs {
    #[arg(long)]
    hypergraph: PathBuf,
}

#[derive(Args, Debug)]
pub struct HomArgs {
    /// triforce, <k>force (k = 2..5) or edge<k>.
    #[arg(long, default_value = "triforce")]
    motif: String,
    #[arg(long)]
    hypergraph: PathBuf,
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    #[arg(long)]
    kernel: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long)]
    kernel: PathBuf,
    /// z<N> or f<p>^<n>.
    #[arg(long, default_value = "f3^4")]
    group: String,
    /// Number of seeds; they run from --seed upwards.
    #[arg(long, default_value_t = 200)]
    seeds: u64,
}

pub fn run(cmd: Count, ctx: &Ctx) -> Result<Status> {
    match cmd {
        Count::Spectrum(a) => spectrum(ctx, &a),
        Count::Density(a) => {
            let h = parse_file(&a.hypergraph, read_hypergraph)?;
            let rows = [
                ("uniformity", h.uniformity().to_string()),
                ("vertices", h.vertex_count().to_string()),
                ("edges", h.edge_count().to_string()),
                ("edge_density", format_rational(&edge_density(&h)?)),
                ("kforce_homs", kforce_hom_count(&h).to_string()),
                ("kforce_density", format_rational(&kforce_density(&h)?)),
            ];
            key_values(ctx, &rows)
        }
        Count::Homs(a) => {
            let motif = Motif::parse(&a.motif)?;
            let h = parse_file(&a.hypergraph, read_hypergraph)?;
            let homs = hom_count(&motif, &h)?;
            let nv = motif.hypergraph().vertex_count() as u32;
            let density = Rational::new(homs.into(), num_bigint::BigInt::from(h.vertex_count()).pow(nv));
            let rows = [("motif", a.motif.clone()), ("homs", homs.to_string()), ("density", format_rational(&density))];
            key_values(ctx, &rows)
        }
        Count::Triforce(a) => {
            let w = parse_file(&a.kernel, read_kernel)?;
            let tri = triforce_weighted(&w);
            let mean = w.mean();
            let rows = [
                ("kernel_hash", w.hash()),
                ("resolution", w.resolution().to_string()),
                ("mean", format_rational(&mean)),
                ("mean_pow4", format_rational(&mean.pow(4))),
                ("triforce", format_rational(&tri)),
            ];
            key_values(ctx, &rows)
        }
    }
}

fn key_values(ctx: &Ctx, rows: &[(&str, String)]) -> Result<Status> {
    match ctx.format {
        Format::Json => {
            let obj: serde_json::Map<String, Value> = rows.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            emit_json(ctx, &Value::Object(obj))?;
        }
        Format::Csv => {
            let mut out = String::from("key,value\n");
            for (k, v) in rows {
                let _ = writeln!(out, "{k},{v}");
            }
            emit(ctx, &out)?;
        }
    }
    Ok(Status::Ok)
}

fn spectrum(ctx: &Ctx, a: &SpectrumArgs) -> Result<Status> {
    let pattern = Pattern::parse(&a.pattern)?;
    match read_any_set(&a.set)? {
        AnySet::Grid(set) => {
            let spec = grid_spectrum(&set, &pattern)?;
            match ctx.format {
                Format::Csv => emit(ctx, &grid_spectrum_csv(&spec))?,
                Format::Json => {
                    let entries: Vec<Value> = spec.entries.iter().map(|(d, c)| json!({ "d": d, "count": c })).collect();
                    emit_json(
                        ctx,
                        &json!({
                            "pattern": a.pattern,
                            "dim": set.dim(),
                            "side": set.side(),
                            "size": set.len(),
                            "total": spec.total().to_string(),
                            "max": spec.max().map(|(d, c)| json!({ "d": d, "count": c })),
                            "min": spec.min().map(|(d, c)| json!({ "d": d, "count": c })),
                            "spectrum": entries,
                        }),
                    )?;
                }
            }
        }
        AnySet::Group(set) => {
            let g = set.group();
            let spec = group_spectrum(&set, &pattern)?;
            match ctx.format {
                Format::Csv => emit(ctx, &group_spectrum_csv(g, &spec))?,
                Format::Json => {
                    let entry = |&(d, c): &(usize, u64)| json!({ "d": g.format_element(d), "count": c });
                    emit_json(
                        ctx,
                        &json!({
                            "pattern": a.pattern,
                            "group": g.descriptor(),
                            "size": set.len(),
                            "total": spec.total().to_string(),
                            "max": spec.max().map(entry),
                            "min": spec.min().map(entry),
                            "spectrum": spec.entries.iter().map(entry).collect::<Vec<_>>(),
                        }),
                    )?;
                }
            }
        }
    }
    Ok(Status::Ok)
}

pub fn report(a: ReportArgs, ctx: &Ctx) -> Result<Status> {
    let group = parse_group(&a.group)?;
    let w = parse_file(&a.kernel, read_kernel)?;
    let start = ctx.seed.unwrap_or(0);
    let seeds: Vec<u64> = (0..a.seeds).map(|i| start.wrapping_add(i)).collect();
    let rep = mandache_report(&w, group, &seeds)?;
    match ctx.format {
        Format::Json => {
            let mut v = serde_json::to_value(&rep)?;
            v["group"] = json!(group.descriptor());
            v["deviation_in_std_errors"] = json!(rep.deviation_in_std_errors());
            emit_json(ctx, &v)?;
        }
        Format::Csv => {
            let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
            let mut out = String::from("seed,min_d,max_d,mean\n");
            for s in &rep.per_seed {
                let _ = writeln!(out, "{},{},{},{}", s.seed, opt(s.min_d), opt(s.max_d), opt(s.mean));
            }
            emit(ctx, &out)?;
        }
    }
    Ok(Status::Ok)
}
