use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flagpoisson::leaves::{leaf_dimension, leaf_table, table_to_csv, table_to_json};
use flagpoisson::rootdata::{build_chevalley_basis, build_root_system, LieType};
use flagpoisson::tensor_oracle::{
    sl2_chart_check, sweep_reachable, verify_leaf_formula, OracleContext, SamplerConfig,
    Tolerances,
};
use flagpoisson::vogan_realform::VoganDiagram;
use flagpoisson::weyl::{format_polynomial, max_weyl_from_env, AutSpec, WeylGroup};
use flagpoisson::Error;

#[derive(Parser)]
#[command(name = "flagpoisson", version, about = "Vogan diagrams, flag-variety Poisson structures and leaf dimensions")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = SamplerConfig::default().seed)]
    seed: u64,
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long, global = true)]
    rank_rel: Option<f64>,
    /// Absolute singular-value floor for numerical rank.
    #[arg(long, global = true)]
    rank_abs: Option<f64>,
    /// Relative tolerance of invariance checks.
    #[arg(long, global = true)]
    invariance_rel: Option<f64>,
    /// Relative residual allowed in the chart fit.
    #[arg(long, global = true)]
    chart_rel: Option<f64>,
    /// Largest acceptable condition number of Ad_g.
    #[arg(long, global = true)]
    max_condition: Option<f64>,
}

impl Common {
    fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            rank_rel: self.rank_rel.unwrap_or(d.rank_rel),
            rank_abs: self.rank_abs.unwrap_or(d.rank_abs),
            invariance_rel: self.invariance_rel.unwrap_or(d.invariance_rel),
            chart_rel: self.chart_rel.unwrap_or(d.chart_rel),
            max_condition: self.max_condition.unwrap_or(d.max_condition),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Root system, Killing Gram matrix and structure constants as JSON.
    Roots { lie_type: LieType, rank: usize },
    /// Weyl group elements (or twisted involutions) with their lengths.
    Weyl {
        lie_type: LieType,
        rank: usize,
        /// Only list w with d(w) = w⁻¹.
        #[arg(long)]
        twisted: bool,
        /// Diagram automorphism: "id", "flip" or a 1-based permutation "2,1".
        #[arg(long, default_value = "id")]
        aut: String,
    },
    /// Leaf dimension 2l(w) − l(u) − δ for one basepoint pair.
    Leafdim {
        #[arg(long)]
        vogan: String,
        /// Twisted involution, e.g. "1" or "e".
        #[arg(long)]
        u: String,
        #[arg(long)]
        w: String,
    },
    /// Leaf dimensions for every (u, w) with u ∈ I_d, w ∈ W.
    Table {
        #[arg(long)]
        vogan: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Numerical bivector rank versus the formula. Without --u/--w, sweeps every
    /// pair the sampler reaches.
    Tensor {
        #[arg(long)]
        vogan: String,
        #[arg(long, requires = "w")]
        u: Option<String>,
        #[arg(long, requires = "u")]
        w: Option<String>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Chart-formula check of Π on P¹ for su(1,1).
    Sl2chart {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Σ_w t^{2l(w)}.
    Poincare { lie_type: LieType, rank: usize },
}

/// A failure together with its exit status.
struct Failure {
    code: u8,
    value: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        // internal inconsistencies are mathematical disagreements, not usage errors
        let code = match e {
            Error::Inconsistent(_) | Error::Tolerance(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            value: json!({ "error": kind(&e), "message": e.to_string() }),
        }
    }
}

fn kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn load_vogan(arg: &str) -> Result<VoganDiagram, Error> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg))
            .map_err(|e| Error::Parse(format!("cannot read Vogan diagram file {arg:?}: {e}")))?
    };
    VoganDiagram::parse(&text)
}

fn parse_aut(s: &str) -> Result<AutSpec, Error> {
    if s == "id" || s == "flip" {
        return Ok(AutSpec::Named(s.to_string()));
    }
    let perm = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Error::Parse(format!("aut {s:?}: {e}")))?;
    Ok(AutSpec::Perm(perm))
}

fn header(common: &Common, vogan: Option<&VoganDiagram>) -> Vec<(String, String)> {
    let tol = serde_json::to_string(&common.tolerances()).expect("tolerances serialize");
    let mut h = vec![
        ("tool".to_string(), format!("flagpoisson {}", env!("CARGO_PKG_VERSION"))),
        ("seed".to_string(), common.seed.to_string()),
        ("tolerances".to_string(), tol),
    ];
    if let Some(v) = vogan {
        h.push(("vogan".to_string(), v.spec().to_json()));
    }
    h
}

fn header_json(h: &[(String, String)]) -> Value {
    let mut m = serde_json::Map::new();
    for (k, v) in h {
        let val = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.clone()));
        m.insert(k.clone(), val);
    }
    Value::Object(m)
}

fn emit(h: &[(String, String)], result: Value) -> String {
    let doc = json!({ "header": header_json(h), "result": result });
    serde_json::to_string_pretty(&doc).expect("JSON output")
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable result")
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let common = &cli.common;
    let bound = max_weyl_from_env();
    let tol = common.tolerances();
    let cfg = SamplerConfig {
        seed: common.seed,
        ..SamplerConfig::default()
    };
    match &cli.command {
        Command::Roots { lie_type, rank } => {
            let rs = build_root_system(*lie_type, *rank)?;
            let dump = build_chevalley_basis(&rs).dump();
            Ok(emit(&header(common, None), to_value(&dump)))
        }
        Command::Weyl {
            lie_type,
            rank,
            twisted,
            aut,
        } => {
            let rs = build_root_system(*lie_type, *rank)?;
            let group = WeylGroup::new(&rs);
            let d = parse_aut(aut)?.resolve(&rs)?;
            let elems = if *twisted {
                group.twisted_involutions(&d, bound)?
            } else {
                group.enumerate(bound)?
            };
            let rows: Vec<Value> = elems
                .iter()
                .map(|w| json!({ "word": w.word_1based(), "length": w.length() }))
                .collect();
            Ok(emit(
                &header(common, None),
                json!({ "count": rows.len(), "elements": rows }),
            ))
        }
        Command::Leafdim { vogan, u, w } => {
            let v = load_vogan(vogan)?;
            let group = WeylGroup::new(v.basis().root_system());
            let u = group.parse_word(u)?;
            let w = group.parse_word(w)?;
            let rep = leaf_dimension(&v, &group, &u, &w)?;
            Ok(emit(&header(common, Some(&v)), to_value(&rep)))
        }
        Command::Table { vogan, format } => {
            let v = load_vogan(vogan)?;
            let group = WeylGroup::new(v.basis().root_system());
            let table = leaf_table(&v, &group, bound)?;
            let h = header(common, Some(&v));
            match format {
                Format::Csv => Ok(table_to_csv(&table, &h)?),
                Format::Json => Ok(serde_json::to_string_pretty(&table_to_json(&table, &h))
                    .expect("JSON output")),
            }
        }
        Command::Tensor {
            vogan,
            u,
            w,
            samples,
        } => {
            let v = load_vogan(vogan)?;
            let ctx = OracleContext::new(&v, tol)?;
            let checks = match (u, w) {
                (Some(u), Some(w)) => {
                    let u = ctx.group.parse_word(u)?;
                    let w = ctx.group.parse_word(w)?;
                    vec![verify_leaf_formula(&ctx, &u, &w, *samples, &cfg)?]
                }
                _ => sweep_reachable(&ctx, *samples, &cfg)?,
            };
            let out = emit(&header(common, Some(&v)), to_value(&checks));
            if checks.iter().all(|c| c.agree) {
                Ok(out)
            } else {
                Err(Failure {
                    code: 2,
                    value: json!({ "error": "Disagreement", "report": serde_json::from_str::<Value>(&out).unwrap() }),
                })
            }
        }
        Command::Sl2chart { samples } => {
            let rep = sl2_chart_check(*samples, common.seed, tol)?;
            let out = emit(&header(common, None), to_value(&rep));
            if rep.pass {
                Ok(out)
            } else {
                Err(Failure {
                    code: 2,
                    value: json!({ "error": "Disagreement", "report": to_value(&rep) }),
                })
            }
        }
        Command::Poincare { lie_type, rank } => {
            let rs = build_root_system(*lie_type, *rank)?;
            let coeffs = WeylGroup::new(&rs).poincare_polynomial(bound)?;
            Ok(format_polynomial(&coeffs))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            // a closed pipe downstream (e.g. `| head`) is not an error of ours
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{}", out.trim_end());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&f.value).expect("diagnostic serializes")
            );
            ExitCode::from(f.code)
        }
    }
}
