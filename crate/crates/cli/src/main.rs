//! `pellsurf`: command-line access to divisor classes on blow-ups of the
//! plane, the Pell divisors, interpolation ranks, Cremona orbits, cone bounds
//! and the double-cover calculators.
//!
//! Exit status is 0 on success, 1 when a computation rejects its input and 2
//! on usage errors (including unparsable divisor strings).

mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;

use output::{emit, Format, Result, Table};
use pellsurf_core::cone::{cone_bound, Point, RationalCone2D};
use pellsurf_core::cremona::degree_growing_orbit;
use pellsurf_core::gallery::{bounds, harbourne_sequence, kollar_table, rational_cover_record};
use pellsurf_core::interp::{generic_rank, InterpolationInstance, SamplingParams, DEFAULT_PRIME};
use pellsurf_core::pell::pell_divisors;
use pellsurf_core::shgh::{shgh_dim, DimStatus};
use pellsurf_core::DivisorClass;

#[derive(Parser)]
#[command(
    name = "pellsurf",
    version,
    about = "Exact computations on blow-ups of the plane"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pell divisors D_k on X_10 with their factorization D_k = c_k F_k.
    PellTable {
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Virtual dimension d(d+3)/2 - Σ m_i(m_i+1)/2 of a class such as "57;18^10".
    Vdim {
        #[arg(value_parser = parse_divisor, allow_hyphen_values = true)]
        divisor: DivisorClass,
    },
    /// Dimension of |D| (projective, h⁰ - 1) with the assumption it rests on.
    ShghDim {
        #[arg(value_parser = parse_divisor, allow_hyphen_values = true)]
        divisor: DivisorClass,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Rank of the fat-point interpolation matrix over F_p at random points.
    Interp {
        #[arg(long, value_parser = parse_divisor, allow_hyphen_values = true)]
        divisor: DivisorClass,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        #[arg(long, default_value_t = 3)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Orbit of a line under quadratic transformations at the three smallest multiplicities.
    CremonaOrbit {
        #[arg(long, default_value_t = 9)]
        r: usize,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Uniform multiple m with m·ξ ∈ R + C for every interior lattice point ξ.
    ConeBound {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        v1: Point,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        v2: Point,
        #[arg(long = "r", value_parser = parse_point, allow_hyphen_values = true)]
        anchor: Point,
        /// Brute-force check over the box [-B, B]².
        #[arg(long, value_name = "B")]
        verify: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Intersection numbers of the double-cover families.
    #[command(subcommand)]
    Gallery(GalleryCommand),
}

#[derive(Subcommand)]
enum GalleryCommand {
    /// D_n = f*(F1 + E_{n,b}) on a double cover of E×E.
    Kollar {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, default_value_t = 20)]
        n_max: i64,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// D = f*A along the Cremona orbit of a line, on a double cover of X_r.
    RationalCover {
        #[arg(long, default_value_t = 9)]
        r: usize,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// G_k = f*D_k on the double cover of X_10 branched along a conic.
    Harbourne {
        #[arg(long, default_value_t = 10)]
        k_max: usize,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Self-intersection bounds -p_a - α - 1 and 6α + 2p_a - 4.
    Bounds {
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        pa: i64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: i64,
        #[command(flatten)]
        fmt: FormatArg,
    },
}

#[derive(Args)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

fn parse_divisor(s: &str) -> std::result::Result<DivisorClass, String> {
    s.parse().map_err(|e: pellsurf_core::Error| e.to_string())
}

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => {
            let coord = |t: &str| t.parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
            Ok([coord(a)?, coord(b)?])
        }
        _ => Err(format!("expected two integers \"a,b\", got {s:?}")),
    }
}

fn dim_status_name(status: DimStatus) -> &'static str {
    match status {
        DimStatus::UnconditionalLowerBound => "UNCONDITIONAL_LOWER_BOUND",
        DimStatus::ShghConditionalExact => "SHGH_CONDITIONAL_EXACT",
        DimStatus::Unknown => "UNKNOWN",
    }
}

#[derive(Serialize)]
struct PellRow {
    k: usize,
    p_k: String,
    q_k: String,
    #[serde(rename = "D_k")]
    divisor: DivisorClass,
    c_k: Option<String>,
    #[serde(rename = "F_k")]
    primitive: Option<DivisorClass>,
    d_k: String,
    m_k: String,
    vdim: String,
    dim: String,
    dim_status: DimStatus,
}

fn pell_table(k_max: usize, format: Format) -> Result<()> {
    let rows: Vec<PellRow> = pell_divisors(k_max + 1)
        .into_iter()
        .map(|rec| {
            let dim = shgh_dim(&rec.divisor);
            let (c, f) = match rec.factorization {
                Some(fact) => (Some(fact.multiple.to_string()), Some(fact.primitive)),
                None => (None, None),
            };
            PellRow {
                k: rec.k,
                p_k: rec.convergent.p.to_string(),
                q_k: rec.convergent.q.to_string(),
                vdim: rec.divisor.vdim().to_string(),
                divisor: rec.divisor,
                c_k: c,
                primitive: f,
                d_k: rec.d.to_string(),
                m_k: rec.m.to_string(),
                dim: dim.value.to_string(),
                dim_status: dim.status,
            }
        })
        .collect();
    let opt = |o: &Option<String>| o.clone().unwrap_or_default();
    emit(format, &rows, || match format {
        Format::Csv => {
            let mut t = Table::new(vec![
                "k",
                "p_k",
                "q_k",
                "D_k",
                "c_k",
                "F_k",
                "d_k",
                "m_k",
                "vdim",
                "dim",
                "dim_status",
            ]);
            for r in &rows {
                t.push(vec![
                    r.k.to_string(),
                    r.p_k.clone(),
                    r.q_k.clone(),
                    r.divisor.to_string(),
                    opt(&r.c_k),
                    r.primitive
                        .as_ref()
                        .map(ToString::to_string)
                        .unwrap_or_default(),
                    r.d_k.clone(),
                    r.m_k.clone(),
                    r.vdim.clone(),
                    r.dim.clone(),
                    dim_status_name(r.dim_status).into(),
                ]);
            }
            t
        }
        _ => {
            let mut t = Table::new(vec![
                "k",
                "(p_k,q_k)",
                "D_k",
                "c_k",
                "F_k",
                "vdim",
                "dim",
                "dim_status",
            ]);
            for r in &rows {
                t.push(vec![
                    r.k.to_string(),
                    format!("({},{})", r.p_k, r.q_k),
                    format!("({})", r.divisor),
                    opt(&r.c_k),
                    r.primitive
                        .as_ref()
                        .map(|f| format!("({f})"))
                        .unwrap_or_default(),
                    r.vdim.clone(),
                    r.dim.clone(),
                    dim_status_name(r.dim_status).into(),
                ]);
            }
            t
        }
    })
}

fn key_value(pairs: Vec<(&'static str, String)>) -> Table {
    let mut t = Table::new(vec!["field", "value"]);
    for (k, v) in pairs {
        t.push(vec![k.to_string(), v]);
    }
    t
}

fn interp(divisor: &DivisorClass, params: SamplingParams, format: Format) -> Result<()> {
    #[derive(Serialize)]
    struct Out<'a> {
        divisor: &'a DivisorClass,
        #[serde(flatten)]
        report: pellsurf_core::interp::RankReport,
    }
    let inst = InterpolationInstance::from_divisor(divisor, params)?;
    let report = generic_rank(&inst)?;
    let out = Out { divisor, report };
    emit(format, &out, || {
        let r = &out.report;
        let verdict = serde_json::to_value(r.verdict).expect("unit enum");
        key_value(vec![
            ("divisor", divisor.to_string()),
            ("n_coef", r.n_coef.to_string()),
            ("n_cond", r.n_cond.to_string()),
            ("best_rank", r.best_rank.to_string()),
            ("kernel_dim", r.kernel_dim.to_string()),
            ("verdict", verdict.as_str().unwrap_or_default().to_string()),
            ("projective_dim_bound", r.projective_dim_bound.to_string()),
            ("dim_exact", r.dim_exact.to_string()),
            (
                "trial_ranks",
                r.trial_ranks
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("prime", r.prime.to_string()),
            ("seed", r.seed.to_string()),
            (
                "false_certificate_probability",
                r.false_certificate_probability.to_string(),
            ),
            (
                "miss_probability_bound",
                r.miss_probability_bound.to_string(),
            ),
        ])
    })
}

fn cremona_orbit(r: usize, steps: usize, format: Format) -> Result<()> {
    #[derive(Serialize)]
    struct Step {
        t: usize,
        degree: String,
        multiplicities: String,
        self_intersection: String,
        class: DivisorClass,
    }
    let orbit = degree_growing_orbit(r, steps)?;
    let rows: Vec<Step> = orbit
        .into_iter()
        .enumerate()
        .map(|(t, a)| Step {
            t,
            degree: a.degree().to_string(),
            multiplicities: a
                .mults()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(","),
            self_intersection: a.square().to_string(),
            class: a,
        })
        .collect();
    emit(format, &rows, || {
        let mut t = Table::new(vec!["t", "degree", "multiplicities", "self_intersection"]);
        for s in &rows {
            t.push(vec![
                s.t.to_string(),
                s.degree.clone(),
                s.multiplicities.clone(),
                s.self_intersection.clone(),
            ]);
        }
        t
    })
}

fn gallery(cmd: GalleryCommand) -> Result<()> {
    match cmd {
        GalleryCommand::Kollar { b, n_max, fmt } => {
            let rows = kollar_table(b, n_max)?;
            emit(fmt.format, &rows, || {
                let mut t = Table::new(vec![
                    "n",
                    "b",
                    "A_n^2",
                    "A_n.(F1+F2)",
                    "D_n^2",
                    "D_n.K",
                    "ratio",
                ]);
                for r in &rows {
                    t.push(vec![
                        r.n.to_string(),
                        r.b.to_string(),
                        r.a_sq.to_string(),
                        r.a_dot_fibres.to_string(),
                        r.d_sq.to_string(),
                        r.d_dot_k.to_string(),
                        r.ratio.to_string(),
                    ]);
                }
                t
            })
        }
        GalleryCommand::RationalCover { r, steps, fmt } => {
            let rows = degree_growing_orbit(r, steps)?
                .iter()
                .map(rational_cover_record)
                .collect::<pellsurf_core::Result<Vec<_>>>()?;
            emit(fmt.format, &rows, || {
                let mut t = Table::new(vec!["degree", "D^2", "D.K", "ratio"]);
                for rec in &rows {
                    t.push(vec![
                        rec.class.degree().to_string(),
                        rec.d_sq.to_string(),
                        rec.d_dot_k.to_string(),
                        rec.ratio.to_string(),
                    ]);
                }
                t
            })
        }
        GalleryCommand::Harbourne { k_max, fmt } => {
            let rows = harbourne_sequence(k_max)?;
            emit(fmt.format, &rows, || {
                let mut t = Table::new(vec!["k", "d_k", "vdim_G", "h0", "h1", "status"]);
                for rec in &rows {
                    t.push(vec![
                        rec.k.to_string(),
                        rec.d_k.to_string(),
                        rec.vdim_g.to_string(),
                        rec.conditional_h0.to_string(),
                        rec.conditional_h1.to_string(),
                        "SHGH_CONDITIONAL".into(),
                    ]);
                }
                t
            })
        }
        GalleryCommand::Bounds { pa, alpha, fmt } => {
            let b = bounds(pa, alpha)?;
            emit(fmt.format, &b, || {
                let mut t = Table::new(vec!["pa", "alpha", "bnc", "q4"]);
                t.push(vec![
                    b.pa.to_string(),
                    b.alpha.to_string(),
                    b.bnc.to_string(),
                    b.q4.as_ref().map(BigInt::to_string).unwrap_or_default(),
                ]);
                t
            })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::PellTable { k_max, format } => pell_table(k_max, format),
        Command::Vdim { divisor } => {
            println!("{}", divisor.vdim());
            Ok(())
        }
        Command::ShghDim { divisor, format } => {
            let dim = shgh_dim(&divisor);
            emit(format, &dim, || {
                key_value(vec![
                    ("value", dim.value.to_string()),
                    ("status", dim_status_name(dim.status).into()),
                    ("criterion_met", dim.criterion_met.to_string()),
                ])
            })
        }
        Command::Interp {
            divisor,
            prime,
            trials,
            seed,
            format,
        } => interp(
            &divisor,
            SamplingParams {
                prime,
                seed,
                trials,
            },
            format,
        ),
        Command::CremonaOrbit { r, steps, format } => cremona_orbit(r, steps, format),
        Command::ConeBound {
            v1,
            v2,
            anchor,
            verify,
            format,
        } => {
            let cone = RationalCone2D::new(v1, v2)?;
            let bound = cone_bound(&cone, anchor, verify)?;
            emit(format, &bound, || {
                key_value(vec![
                    ("m", bound.m.to_string()),
                    ("c_sq", bound.c_sq.to_string()),
                    (
                        "verified",
                        bound
                            .verified
                            .map(|v| v.to_string())
                            .unwrap_or_else(|| "-".into()),
                    ),
                ])
            })
        }
        Command::Gallery(cmd) => gallery(cmd),
    }
}

fn is_broken_pipe(e: &(dyn std::error::Error + 'static)) -> bool {
    let kind = e
        .downcast_ref::<std::io::Error>()
        .map(std::io::Error::kind)
        .or_else(|| {
            e.downcast_ref::<serde_json::Error>()
                .and_then(serde_json::Error::io_error_kind)
        })
        .or_else(|| match e.downcast_ref::<csv::Error>()?.kind() {
            csv::ErrorKind::Io(io) => Some(io.kind()),
            _ => None,
        });
    kind == Some(std::io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(e.as_ref()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
