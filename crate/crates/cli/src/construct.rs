use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};
use cornerforge::avoiders::{
    build_corner_avoider, build_five_point_avoider, lift_avoider, Avoider, AvoiderConfig, DEFAULT_C, MATERIALIZE_LIMIT,
};
use cornerforge::behrend::{behrend_3ap_free, behrend_qc_free, behrend_sum_free, SphereSet};
use cornerforge::contfrac::build_alpha_hard;
use cornerforge::hypergraph::io::read_kernel;
use cornerforge::mandache::sample_mandache;
use cornerforge::patterns::io::{read_grid_set, write_grid_set, write_group_set};
use cornerforge::patterns::Pattern;
use cornerforge::text::{format_rational, sha256_hex};
use serde_json::{json, Value};

use crate::io::{emit, line_set, parse_file, parse_group, parse_list, parse_rational, read_text, version, write_params};
use crate::{Ctx, Status};

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// 3-AP-free subset of {0..L-1}.
    Behrend(SizeArgs),
    /// Subset of {0..L-1} without nontrivial x+y+z=3w.
    Sumfree(SizeArgs),
    /// Subset of {0..L-1} containing no quadratic configuration of type a.
    Qcfree(QcArgs),
    /// Continued fraction α whose approximant denominators avoid small primes.
    Alpha(AlphaArgs),
    /// Subset of [N]^3 with no popular 3-dimensional corners.
    Corner3d(AvoiderArgs),
    /// Subset of [N] with no popular x + a_i d patterns.
    Fivepoint(FivePointArgs),
    /// Lift a base avoider to a higher-dimensional pattern.
    Lift(LiftArgs),
    /// Random subset of G×G sampled from a step kernel.
    Mandache(MandacheArgs),
}

#[derive(Args, Debug)]
pub struct SizeArgs {
    #[arg(long = "L")]
    l: u64,
    /// Params JSON path (default: <output>.params.json, or stderr).
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct QcArgs {
    /// Five distinct integers, e.g. 0,1,2,3,4.
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long = "L")]
    l: u64,
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AlphaArgs {
    #[arg(long)]
    m: u64,
    /// Scale r, a positive rational such as 2 or 3/2.
    #[arg(long, default_value = "1")]
    r: String,
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AvoiderArgs {
    /// Target density δ in (0, 1/2), as a rational or decimal.
    #[arg(long)]
    delta: Option<String>,
    /// Constant c in L = ⌈exp(c ln²(1/δ))⌉.
    #[arg(long, default_value_t = DEFAULT_C)]
    c: f64,
    /// Use this L instead of deriving it from δ.
    #[arg(long = "L")]
    l: Option<u64>,
    /// Target side; the actual side is the closest suitable denominator.
    #[arg(long = "N")]
    n: u64,
    /// Membership samples for the density estimate when N is too large to
    /// materialize.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FivePointArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "0,1,2,3,4")]
    a: String,
    #[command(flatten)]
    sizing: AvoiderArgs,
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    /// Target pattern: cornerK, apK, or points like 0,0,0,0;1,0,0,0;...
    #[arg(long)]
    pattern: String,
    /// Base set file (dimension 1 or 3).
    #[arg(long)]
    base: PathBuf,
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MandacheArgs {
    /// Kernel file.
    #[arg(long)]
    kernel: PathBuf,
    /// z<N> or f<p>^<n>.
    #[arg(long)]
    group: String,
    #[arg(long)]
    params: Option<PathBuf>,
}

pub fn run(cmd: Construct, ctx: &Ctx) -> Result<Status> {
    match cmd {
        Construct::Behrend(a) => sphere(ctx, "behrend", &a.params, json!({ "L": a.l }), behrend_3ap_free(a.l)?, None),
        Construct::Sumfree(a) => sphere(ctx, "sumfree", &a.params, json!({ "L": a.l }), behrend_sum_free(a.l)?, None),
        Construct::Qcfree(a) => {
            let coeffs = parse_list(&a.a)?;
            let (set, sys) = behrend_qc_free(&coeffs, a.l)?;
            let args = json!({ "a": coeffs, "L": a.l });
            sphere(ctx, "qcfree", &a.params, args, set, Some(serde_json::to_value(sys)?))
        }
        Construct::Alpha(a) => {
            let r = parse_rational(&a.r)?;
            let seq = build_alpha_hard(a.m, r.clone())?;
            let artifact = serde_json::to_value(&seq)?;
            crate::io::emit_json(ctx, &artifact)?;
            let details = json!({ "K": seq.k(), "t": seq.t(), "a": seq.a().to_string() });
            let args = json!({ "m": a.m, "r": format_rational(&r) });
            write_params(ctx, &a.params, &params_json("alpha", args, None, details))?;
            Ok(Status::Ok)
        }
        Construct::Corner3d(a) => {
            let cfg = config(&a)?;
            let av = build_corner_avoider(&cfg)?;
            let args = avoider_args(&a, None);
            avoider(ctx, "corner3d", &a, args, av)
        }
        Construct::Fivepoint(f) => {
            let coeffs = parse_list(&f.a)?;
            let cfg = config(&f.sizing)?;
            let av = build_five_point_avoider(&coeffs, &cfg)?;
            let args = avoider_args(&f.sizing, Some(&coeffs));
            avoider(ctx, "fivepoint", &f.sizing, args, av)
        }
        Construct::Lift(a) => {
            let pattern = Pattern::parse(&a.pattern)?;
            let src = read_text(&a.base)?;
            let base = read_grid_set(&src).with_context(|| a.base.display().to_string())?;
            let lifted = lift_avoider(&pattern, &base)?;
            emit(ctx, &write_grid_set(&lifted))?;
            let args = json!({ "pattern": a.pattern, "base": a.base, "base_sha256": sha256_hex(src.as_bytes()) });
            let details = json!({ "dim": lifted.dim(), "side": lifted.side(), "size": lifted.len() });
            write_params(ctx, &a.params, &params_json("lift", args, None, details))?;
            Ok(Status::Ok)
        }
        Construct::Mandache(a) => {
            let group = parse_group(&a.group)?;
            let w = parse_file(&a.kernel, read_kernel)?;
            let seed = ctx.seed.unwrap_or(0);
            let set = sample_mandache(&w, group, seed);
            emit(ctx, &write_group_set(&set))?;
            let args = json!({ "kernel": a.kernel, "kernel_hash": w.hash(), "group": a.group });
            let details = json!({ "size": set.len(), "order": group.order() });
            write_params(ctx, &a.params, &params_json("mandache", args, Some(seed), details))?;
            Ok(Status::Ok)
        }
    }
}

fn params_json(kind: &str, args: Value, seed: Option<u64>, details: Value) -> Value {
    json!({
        "tool": "cornerforge",
        "version": version(),
        "command": format!("construct {kind}"),
        "args": args,
        "seed": seed,
        "details": details,
    })
}

fn sphere(ctx: &Ctx, kind: &str, params: &Option<PathBuf>, args: Value, set: SphereSet, qc: Option<Value>) -> Result<Status> {
    emit(ctx, &write_grid_set(&line_set(set.params.l, &set.elements)?))?;
    let mut details = json!({ "sphere": set.params, "size": set.len(), "pigeonhole_bound": format_rational(&set.params.pigeonhole_bound()) });
    if let Some(qc) = qc {
        details["qc_system"] = qc;
    }
    write_params(ctx, params, &params_json(kind, args, None, details))?;
    Ok(Status::Ok)
}

fn config(a: &AvoiderArgs) -> Result<AvoiderConfig> {
    let delta = a.delta.as_deref().map(parse_rational).transpose()?;
    if delta.is_none() && a.l.is_none() {
        bail!("give --delta or --L");
    }
    Ok(AvoiderConfig { delta, c: a.c, l: a.l, n: a.n })
}

fn avoider_args(a: &AvoiderArgs, coeffs: Option<&[i64]>) -> Value {
    json!({ "delta": a.delta, "c": a.c, "L": a.l, "N": a.n, "samples": a.samples, "a": coeffs })
}

fn avoider(ctx: &Ctx, kind: &str, a: &AvoiderArgs, args: Value, av: Avoider) -> Result<Status> {
    let n = av.side();
    let mut details = json!({ "side": n, "target_density": av.params().target_density });
    let seed = if n <= MATERIALIZE_LIMIT {
        let set = av.materialize()?;
        emit(ctx, &write_grid_set(&set))?;
        details["size"] = json!(set.len());
        details["density"] = json!(format_rational(&av.density()));
        None
    } else {
        // too large to list; only the parameters and a density estimate
        let seed = ctx.seed.unwrap_or(0);
        let (p, se) = av.sample_density(a.samples, seed);
        details["density_estimate"] = json!({ "value": p, "std_error": se, "samples": a.samples });
        if ctx.output.is_some() {
            eprintln!("warning: N = {n} exceeds {MATERIALIZE_LIMIT}; no set file written");
        }
        Some(seed)
    };
    let mut v = params_json(kind, args, seed, details);
    v["avoider"] = serde_json::to_value(av.params())?;
    write_params(ctx, &a.params, &v)?;
    Ok(Status::Ok)
}
