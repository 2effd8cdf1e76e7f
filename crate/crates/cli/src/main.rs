use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ffdyn::exponents::{ExponentTable, LogBase};
use ffdyn::fpoly::{orbit, Poly, DEFAULT_DEGREE_CAP};
use ffdyn::gf_tower::{FieldCtx, FieldOptions, DEFAULT_MAX_ORDER};
use ffdyn::klinalg::random_affine;
use ffdyn::report::{rational_string, to_csv, to_json};
use ffdyn::setcalc::{plunnecke_check, DEFAULT_WORK_CAP};
use ffdyn::theorems::{
    expansion_experiment, intersection_experiment, orbit_run_experiment, polydim_experiment,
    random_set, sp_gen_measure, summarize, verify_thm_subfield, DetectOptions, Detector,
    SubfieldSearch,
};
use ffdyn::{Elem, ElemSet, Error, Result};
use serde::Serialize;

const MAX_FIELD_VAR: &str = "FFDYN_MAX_FIELD";

#[derive(Parser)]
#[command(
    name = "ffdyn",
    version,
    about = "Finite-field polynomial dynamics and sum-product experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    E,
    #[value(name = "2")]
    Two,
}

impl From<Base> for LogBase {
    fn from(b: Base) -> Self {
        match b {
            Base::E => LogBase::Natural,
            Base::Two => LogBase::Two,
        }
    }
}

#[derive(Args, Clone)]
struct Output {
    /// Report file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Clone)]
struct FieldArg {
    /// Field as p^m^r.
    #[arg(long)]
    field: String,
    /// Work cap for set computations.
    #[arg(long)]
    cap: Option<u128>,
}

#[derive(Args, Clone)]
struct Sampling {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    samples: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Tower parameters and the subfield lattice.
    FieldInfo {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        out: Output,
    },
    /// Tail and cycle of the orbit of u.
    Orbit {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        u: String,
        #[command(flatten)]
        out: Output,
    },
    /// Subfield-iterate detector on one orbit prefix.
    Detect {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        u: String,
        #[arg(long = "N")]
        n: u64,
        /// Subfield degree; defaults to m.
        #[arg(long)]
        dsub: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        degree_cap: u64,
        #[arg(long, value_enum, default_value = "e")]
        log_base: Base,
        #[command(flatten)]
        out: Output,
    },
    /// Searches for counterexamples to the hit-frequency theorem.
    VerifySubfield {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long)]
        dsub: Option<u32>,
        /// Every polynomial of exact degree; otherwise random ones.
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, value_enum, default_value = "e")]
        log_base: Base,
        #[command(flatten)]
        out: Output,
    },
    /// Expansion of random sets under the eightfold sumset and f(A) - f(A).
    Expansion {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        set: SetArg,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        out: Output,
    },
    /// dim f(A) for random affine subspaces A.
    Polydim {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        out: Output,
    },
    /// A ∩ f(A) for random affine subspaces A.
    Intersect {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        out: Output,
    },
    /// Length of the orbit run of u inside random affine subspaces.
    OrbitRun {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        u: String,
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        out: Output,
    },
    /// Exponent table.
    Exponents {
        #[arg(long, default_value_t = 10)]
        dmax: u32,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
        #[arg(long, value_enum, default_value = "e")]
        log_base: Base,
        /// Double precision instead of exact rationals.
        #[arg(long)]
        float: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Ratio-set and fourfold-sumset sizes against #A.
    SpMeasure {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        set: SetArg,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        out: Output,
    },
    /// #(U+U-U-U) against (#(U-U)/#U)^4 #U.
    Plunnecke {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        set: SetArg,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Clone)]
struct SetArg {
    /// Explicit set as comma-separated element literals.
    #[arg(long, conflicts_with = "size")]
    set: Option<String>,
    /// Size of each random set.
    #[arg(long)]
    size: Option<usize>,
}

impl SetArg {
    /// The explicit set, or one random set per sample seed.
    fn sets(&self, ctx: &FieldCtx, sampling: &Sampling) -> Result<Vec<(ElemSet, Option<u64>)>> {
        if let Some(text) = &self.set {
            let elems = text
                .split(',')
                .map(|l| ctx.decode(l))
                .collect::<Result<Vec<_>>>()?;
            return Ok(vec![(ElemSet::from_elems(ctx, elems), None)]);
        }
        let size = self
            .size
            .ok_or_else(|| Error::InvalidArgument("give --set or --size".into()))?;
        seeds(sampling)
            .map(|s| Ok((random_set(ctx, size, s)?, Some(s))))
            .collect()
    }
}

fn seeds(s: &Sampling) -> impl Iterator<Item = u64> {
    let base = s.seed;
    (0..s.samples).map(move |i| base.wrapping_add(i))
}

fn field(arg: &FieldArg) -> Result<FieldCtx> {
    let max_order = match std::env::var(MAX_FIELD_VAR) {
        Ok(v) => v.parse().map_err(|_| {
            Error::InvalidArgument(format!("{MAX_FIELD_VAR} must be an integer, got {v:?}"))
        })?,
        Err(_) => DEFAULT_MAX_ORDER,
    };
    FieldCtx::from_spec(
        &arg.field,
        FieldOptions {
            max_order,
            ..FieldOptions::default()
        },
    )
}

fn cap(arg: &FieldArg) -> u128 {
    arg.cap.unwrap_or(DEFAULT_WORK_CAP)
}

/// Rows as CSV, or `{rows, summary}` as JSON.
fn emit<R: Serialize, S: Serialize>(out: &Output, rows: &[R], summary: S) -> Result<()> {
    #[derive(Serialize)]
    struct Doc<'a, R, S> {
        rows: &'a [R],
        summary: S,
    }
    let text = match out.format {
        Format::Csv => to_csv(rows)?,
        Format::Json => to_json(&Doc { rows, summary })?,
    };
    write_text(out, &text)
}

fn write_text(out: &Output, text: &str) -> Result<()> {
    match &out.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::FieldInfo { field: fa, out } => {
            let ctx = field(&fa)?;
            #[derive(Serialize)]
            struct Row {
                field_spec: String,
                p: u32,
                m: u32,
                r: u32,
                q: u32,
                order: u32,
                g: String,
                h: String,
                primitive: String,
                tower_generator: String,
            }
            let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(";");
            let row = Row {
                field_spec: ctx.spec(),
                p: ctx.p(),
                m: ctx.m(),
                r: ctx.r(),
                q: ctx.q(),
                order: ctx.order(),
                g: join(ctx.g()),
                h: join(ctx.h()),
                primitive: ctx.encode(ctx.primitive()),
                tower_generator: ctx.encode(ctx.tower_generator()),
            };
            emit(&out, &[row], ctx.subfield_lattice())
        }
        Command::Orbit {
            field: fa,
            poly,
            u,
            out,
        } => {
            let ctx = field(&fa)?;
            let f = Poly::parse(&ctx, &poly)?;
            let u = ctx.decode(&u)?;
            let o = orbit(&ctx, &f, u);
            #[derive(Serialize)]
            struct Row {
                field_spec: String,
                poly_literal: String,
                u: String,
                tail: usize,
                cycle: usize,
                size: usize,
            }
            let row = Row {
                field_spec: ctx.spec(),
                poly_literal: f.to_literal(&ctx).replace(',', ";"),
                u: ctx.encode(u),
                tail: o.tail_len,
                cycle: o.cycle_len,
                size: o.size(),
            };
            let elements: Vec<String> = o.elements.iter().map(|&e| ctx.encode(e)).collect();
            emit(&out, &[row], elements)
        }
        Command::Detect {
            field: fa,
            poly,
            u,
            n,
            dsub,
            degree_cap,
            log_base,
            out,
        } => {
            let ctx = field(&fa)?;
            let f = Poly::parse(&ctx, &poly)?;
            let u = ctx.decode(&u)?;
            let opts = DetectOptions {
                degree_cap,
                log_base: log_base.into(),
            };
            let d_sub = dsub.unwrap_or(ctx.m());
            let r = Detector::new(&ctx, &f, d_sub, opts)?.detect(u, n)?;
            #[derive(Serialize)]
            struct Row {
                field_spec: String,
                poly_literal: String,
                u: String,
                n: u64,
                dsub: u32,
                hits: usize,
                threshold: f64,
                threshold_met: bool,
                found_k: Option<u32>,
                method: String,
                within_orbit: bool,
            }
            let row = Row {
                field_spec: ctx.spec(),
                poly_literal: f.to_literal(&ctx).replace(',', ";"),
                u: ctx.encode(u),
                n,
                dsub: d_sub,
                hits: r.hits_count,
                threshold: r.threshold,
                threshold_met: r.threshold_met,
                found_k: r.found_k,
                method: r
                    .verification
                    .map(|m| format!("{m:?}").to_lowercase())
                    .unwrap_or_default(),
                within_orbit: r.within_orbit,
            };
            emit(&out, &[row], &r.histogram)
        }
        Command::VerifySubfield {
            field: fa,
            degree,
            dsub,
            exhaustive,
            sampling,
            log_base,
            out,
        } => {
            let ctx = field(&fa)?;
            let mut search = SubfieldSearch::new(degree, dsub.unwrap_or(ctx.m()));
            search.detect.log_base = log_base.into();
            if let Some(c) = fa.cap {
                search.work_cap = c;
            }
            if !exhaustive {
                let mut rng = ffdyn::rng::seeded_generator(sampling.seed);
                let order = ctx.order() as u64;
                let polys = (0..sampling.samples)
                    .map(|_| {
                        let mut cs: Vec<Elem> =
                            (0..degree).map(|_| Elem(rng.below(order) as u32)).collect();
                        cs.push(Elem(1 + rng.below(order - 1) as u32));
                        Poly::new(cs)
                    })
                    .collect();
                search.polynomials = Some(polys);
            }
            let report = verify_thm_subfield(&ctx, &search)?;
            println!("{}", report.summary_line());
            if out.out.is_some() {
                let text = match out.format {
                    Format::Json => to_json(&report)?,
                    Format::Csv => to_csv(&report.counterexamples)?,
                };
                write_text(&out, &text)?;
            }
            if report.counterexamples.is_empty() {
                Ok(())
            } else {
                Err(Error::Invariant(report.summary_line()))
            }
        }
        Command::Expansion {
            field: fa,
            poly,
            set,
            sampling,
            out,
        } => {
            let ctx = field(&fa)?;
            let f = Poly::parse(&ctx, &poly)?;
            let mut rows = Vec::new();
            for (a, seed) in set.sets(&ctx, &sampling)? {
                let r = expansion_experiment(&ctx, &a, &f, cap(&fa))?;
                rows.push(r.to_row(&ctx, &f, &a, seed));
            }
            let above_one = rows
                .iter()
                .filter(|r| r.measured_exponent.is_some_and(|e| e > 1.0))
                .count();
            let stats = summarize(rows.iter().filter_map(|r| r.measured_exponent));
            emit(
                &out,
                &rows,
                serde_json::json!({"measured_exponent": stats, "above_one": above_one}),
            )
        }
        Command::Polydim {
            field: fa,
            poly,
            dim,
            sampling,
            out,
        } => {
            let ctx = field(&fa)?;
            let f = Poly::parse(&ctx, &poly)?;
            let mut rows = Vec::new();
            for seed in seeds(&sampling) {
                let a = random_affine(&ctx, dim, seed)?;
                rows.push(polydim_experiment(&ctx, &a, &f, cap(&fa))?.to_row(
                    &ctx,
                    &f,
                    &a,
                    Some(seed),
                ));
            }
            let dims = summarize(rows.iter().map(|r| r.dim_fa as f64));
            emit(&out, &rows, serde_json::json!({"dim_fa": dims}))
        }
        Command::Intersect {
            field: fa,
            poly,
            dim,
            sampling,
            out,
        } => {
            let ctx = field(&fa)?;
            let f = Poly::parse(&ctx, &poly)?;
            let mut rows = Vec::new();
            for seed in seeds(&sampling) {
                let a = random_affine(&ctx, dim, seed)?;
                rows.push(intersection_experiment(&ctx, &a, &f, cap(&fa))?.to_row(
                    &ctx,
                    &f,
                    &a,
                    Some(seed),
                ));
            }
            let sizes = summarize(rows.iter().map(|r| r.card_intersection as f64));
            emit(&out, &rows, serde_json::json!({"card_intersection": sizes}))
        }
        Command::OrbitRun {
            field: fa,
            poly,
            u,
            dim,
            sampling,
            out,
        } => {
            let ctx = field(&fa)?;
            let f = Poly::parse(&ctx, &poly)?;
            let u = ctx.decode(&u)?;
            let mut rows = Vec::new();
            for seed in seeds(&sampling) {
                let mut a = random_affine(&ctx, dim, seed)?;
                // Anchor A at u so the run from zero is nontrivial.
                a.base = u;
                rows.push(orbit_run_experiment(&ctx, &f, u, &a, cap(&fa))?.to_row(
                    &ctx,
                    &f,
                    u,
                    &a,
                    Some(seed),
                ));
            }
            let runs = summarize(rows.iter().map(|r| r.run_from_zero as f64));
            let exps = summarize(rows.iter().filter_map(|r| r.exponent));
            emit(
                &out,
                &rows,
                serde_json::json!({"run_from_zero": runs, "exponent": exps}),
            )
        }
        Command::Exponents {
            dmax,
            c2,
            log_base,
            float,
            out,
        } => {
            let base: LogBase = log_base.into();
            let (rows, limit) = if float {
                let t = ExponentTable::<f64>::build(dmax, c2)?;
                (t.csv_rows(base), t.eta_limit_report())
            } else {
                let t = ExponentTable::<ffdyn::Rational>::build(dmax, c2)?;
                (t.csv_rows(base), t.eta_limit_report())
            };
            emit(&out, &rows, serde_json::json!({"log_eta_over_d": limit}))
        }
        Command::SpMeasure {
            field: fa,
            set,
            sampling,
            out,
        } => {
            let ctx = field(&fa)?;
            let mut rows = Vec::new();
            for (a, seed) in set.sets(&ctx, &sampling)? {
                rows.push(sp_gen_measure(&ctx, &a, cap(&fa))?.to_row(&ctx, &a, seed));
            }
            let n = rows.len();
            emit(&out, &rows, serde_json::json!({"instances": n}))
        }
        Command::Plunnecke {
            field: fa,
            set,
            sampling,
            out,
        } => {
            let ctx = field(&fa)?;
            #[derive(Serialize)]
            struct Row {
                field_spec: String,
                set_hex: String,
                size: usize,
                diff: usize,
                lhs: usize,
                rhs: String,
                holds: bool,
                fourth_power_variant_holds: bool,
                seed: Option<u64>,
            }
            let mut rows = Vec::new();
            for (u, seed) in set.sets(&ctx, &sampling)? {
                let r = plunnecke_check(&ctx, &u, cap(&fa))?;
                rows.push(Row {
                    field_spec: ctx.spec(),
                    set_hex: u.to_hex(),
                    size: r.size,
                    diff: r.diff,
                    lhs: r.lhs,
                    rhs: rational_string(&r.rhs),
                    holds: r.holds,
                    fourth_power_variant_holds: r.fourth_power_variant_holds,
                    seed,
                });
            }
            let holding = rows.iter().filter(|r| r.holds).count();
            emit(
                &out,
                &rows,
                serde_json::json!({"instances": rows.len(), "holds": holding}),
            )
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
