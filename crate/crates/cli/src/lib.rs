//! The `qsi` command line: argument parsing, file loading and rendering.
//!
//! Exit codes: 0 on success, 1 for input or validation errors, 2 when a
//! verification check fails.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qsi_core::euclidean::{classify_graph, EuclideanStructure};
use qsi_core::linalg::is_prime;
use qsi_core::presentation::{presentation, PresentationConfig};
use qsi_core::quiver::{DimensionVector, Quiver};
use qsi_core::tubes::{
    admissible_arcs, arc_generator_data, canonical_decomposition, generic_decomposition,
    min_level_partition,
};
use qsi_core::verify::{verify_presentation_with, SamplerConfig};

#[derive(Debug, Parser)]
#[command(name = "qsi", version, about = "Semi-invariants of Euclidean quivers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Debug, Args)]
struct QuiverArgs {
    /// Quiver JSON: {"vertices": [...], "arrows": [{"id", "tail", "head"}]}
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct DimArgs {
    #[command(flatten)]
    quiver: QuiverArgs,
    /// Dimension vector: a JSON file or an inline JSON object {"vertex": n}
    #[arg(long)]
    dim: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dynkin, Euclidean or wild type of the underlying graph
    Classify(QuiverArgs),
    /// Radical vector, defect weight and simple regular orbit families
    Orbits(QuiverArgs),
    /// Canonical and generic decomposition of a regular dimension vector
    Decompose(DimArgs),
    /// Labeled polygons with admissible arcs and min-level partitions
    Arcs(DimArgs),
    /// Generators, relations and classification of SI(Q, d)
    Presentation {
        #[command(flatten)]
        args: DimArgs,
        /// Largest m in the weight-space dimension table
        #[arg(long, default_value_t = 4)]
        max_m: u32,
    },
    /// Randomized exact verification of the presentation
    Verify {
        #[command(flatten)]
        args: DimArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        entry_bound: i64,
        #[arg(long, default_value_t = 1000)]
        identity_bound: i64,
        #[arg(long, default_value_t = 10)]
        retry_limit: usize,
        #[arg(long, default_value_t = 2)]
        m_max: u32,
        /// Prime used to screen ranks and determinants before exact elimination
        #[arg(long)]
        modulus: Option<u64>,
        /// Record per-stage wall-clock times (the report is then not reproducible)
        #[arg(long)]
        timings: bool,
    },
}

enum Failure {
    Input(String),
    Verification(String),
}

impl From<qsi_core::Error> for Failure {
    fn from(e: qsi_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = std::result::Result<String, Failure>;

/// Runs the command line and returns the process exit code.
pub fn run(args: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    configure_threads();
    match dispatch(cli.command) {
        Ok(text) => {
            let _ = writeln!(out, "{}", text.trim_end());
            0
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Verification(text)) => {
            let _ = writeln!(out, "{}", text.trim_end());
            let _ = writeln!(err, "verification failed");
            2
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("QSI_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_quiver(args: &QuiverArgs) -> Result<Quiver, Failure> {
    Ok(Quiver::from_json(&read(&args.input)?)?)
}

fn load_dim(q: &Quiver, arg: &str) -> Result<DimensionVector, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        read(&PathBuf::from(arg))?
    };
    Ok(q.dimension_vector_from_json(&text)?)
}

fn structure(q: Quiver) -> Result<EuclideanStructure, Failure> {
    Ok(EuclideanStructure::new(Arc::new(q))?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn no_dot(f: Format) -> Result<(), Failure> {
    if f == Format::Dot {
        return Err(Failure::Input("--format dot is only supported by `arcs`".into()));
    }
    Ok(())
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Classify(a) => classify(&a),
        Command::Orbits(a) => orbits(&a),
        Command::Decompose(a) => decompose(&a),
        Command::Arcs(a) => arcs(&a),
        Command::Presentation { args, max_m } => {
            no_dot(args.quiver.format)?;
            let q = load_quiver(&args.quiver)?;
            let d = load_dim(&q, &args.dim)?;
            let es = structure(q)?;
            let p = presentation(&es, &d, &PresentationConfig { max_m })?;
            Ok(match args.quiver.format {
                Format::Text => p.render_text(),
                _ => p.to_json(),
            })
        }
        Command::Verify {
            args,
            seed,
            trials,
            entry_bound,
            identity_bound,
            retry_limit,
            m_max,
            modulus,
            timings,
        } => {
            no_dot(args.quiver.format)?;
            let q = load_quiver(&args.quiver)?;
            let d = load_dim(&q, &args.dim)?;
            let es = structure(q)?;
            let cfg = SamplerConfig {
                seed,
                entry_bound,
                trials,
                retry_limit,
                identity_bound,
                modulus,
                m_max,
                ..SamplerConfig::default()
            };
            cfg.validate()?;
            if let Some(p) = modulus {
                check_modulus(p, &es, &d, &cfg)?;
            }
            let report = verify_presentation_with(&es, &d, &cfg, timings);
            let text = match args.quiver.format {
                Format::Text => report.render_text(),
                _ => report.to_json(),
            };
            if report.passed {
                Ok(text)
            } else {
                Err(Failure::Verification(text))
            }
        }
    }
}

/// The screening prime must exceed `2 * entry_bound * n` where `n` bounds the
/// size of every matrix the harness builds.
fn check_modulus(p: u64, es: &EuclideanStructure, d: &[i64], cfg: &SamplerConfig) -> Result<(), Failure> {
    if !is_prime(p) || p >= 1 << 63 {
        return Err(Failure::Input(format!("--modulus {p} is not a prime below 2^63")));
    }
    let hd: i64 = es.h().iter().zip(d).map(|(a, b)| a * b).sum();
    let size = (cfg.m_max.max(1) as i64).saturating_mul(hd) as u128;
    let floor = 2 * cfg.entry_bound as u128 * size;
    if (p as u128) <= floor {
        return Err(Failure::Input(format!(
            "--modulus {p} must exceed 2 * entry_bound * matrix size = {floor}"
        )));
    }
    Ok(())
}

fn classify(a: &QuiverArgs) -> Outcome {
    no_dot(a.format)?;
    let q = load_quiver(a)?;
    let class = classify_graph(&q);
    let mut v = json!({ "class": class.name() });
    if let Some(t) = class.diagram() {
        v["type"] = json!(t.to_string());
    }
    Ok(match a.format {
        Format::Text => match class.diagram() {
            Some(t) => format!("{} {t}", class.name()),
            None => class.name().to_string(),
        },
        _ => serde_json::to_string(&v).expect("values serialize"),
    })
}

fn orbits(a: &QuiverArgs) -> Outcome {
    no_dot(a.format)?;
    let es = structure(load_quiver(a)?)?;
    let q = es.quiver();
    let families: Vec<Value> = es
        .families()
        .iter()
        .map(|f| json!(f.vectors().iter().map(|e| q.labeled(e)).collect::<Vec<_>>()))
        .collect();
    let v = json!({
        "type": es.diagram().to_string(),
        "h": q.labeled(es.h()),
        "defect_weight": q.labeled(es.defect_weight()),
        "families": families,
    });
    Ok(match a.format {
        Format::Text => {
            let mut s = format!("type {}\nh {:?}\n", es.diagram(), &es.h()[..]);
            for (i, f) in es.families().iter().enumerate() {
                let vs: Vec<String> = f.vectors().iter().map(|e| format!("{:?}", &e[..])).collect();
                let _ = writeln!(s, "family {i} (size {}): {}", f.size(), vs.join(" -> "));
            }
            s
        }
        _ => pretty(&v),
    })
}

fn decompose(a: &DimArgs) -> Outcome {
    no_dot(a.quiver.format)?;
    let q = load_quiver(&a.quiver)?;
    let d = load_dim(&q, &a.dim)?;
    let es = structure(q)?;
    let q = es.quiver();
    let cd = canonical_decomposition(&es, &d)?;
    let gd = generic_decomposition(&es, &cd);
    let summands: Vec<Value> = gd
        .summands
        .iter()
        .map(|s| {
            let mut v = json!({
                "dim": q.labeled(&s.dim),
                "multiplicity": s.multiplicity,
            });
            if let Some(f) = s.family {
                v["family"] = json!(f);
                v["start"] = json!(s.start);
                v["len"] = json!(s.len);
            }
            v
        })
        .collect();
    let v = json!({
        "d": q.labeled(&d),
        "canonical": { "p": cd.p, "coefficients": cd.coefficients },
        "generic": summands,
    });
    Ok(match a.quiver.format {
        Format::Text => {
            let mut s = format!("p {}\n", cd.p);
            for (f, c) in cd.coefficients.iter().enumerate() {
                let _ = writeln!(s, "family {f} labels {c:?}");
            }
            for sm in &gd.summands {
                let _ = writeln!(s, "{} x {:?}", sm.multiplicity, &sm.dim[..]);
            }
            s
        }
        _ => pretty(&v),
    })
}

fn arcs(a: &DimArgs) -> Outcome {
    let q = load_quiver(&a.quiver)?;
    let d = load_dim(&q, &a.dim)?;
    let es = structure(q)?;
    let cd = canonical_decomposition(&es, &d)?;
    let mut polys = Vec::new();
    let mut dot = String::from("digraph polygons {\n");
    let mut text = String::new();
    for poly in cd.polygons() {
        let u = poly.size();
        let arcs = admissible_arcs(&poly)
            .iter()
            .map(|arc| {
                let m = arc_generator_data(&es, arc)?;
                Ok(json!({
                    "id": m.id(),
                    "name": m.name,
                    "arc": [arc.start, arc.end],
                    "len": arc.len,
                    "dim": es.quiver().labeled(&m.dim),
                }))
            })
            .collect::<Result<Vec<Value>, qsi_core::Error>>()?;
        let partition = min_level_partition(&poly)
            .map(|ps| ps.iter().map(|a| json!([a.start, a.end])).collect::<Vec<_>>());
        let _ = writeln!(text, "family {} labels {:?}", poly.family, poly.labels);
        for arc in &arcs {
            let _ = writeln!(text, "  {} {} {}", arc["id"].as_str().unwrap_or(""), arc["name"].as_str().unwrap_or(""), arc["arc"]);
        }
        let f = poly.family;
        let _ = writeln!(dot, "  subgraph cluster_{f} {{\n    label=\"family {f}\";");
        for k in 0..u {
            let _ = writeln!(dot, "    f{f}v{k} [label=\"{}\"];", poly.labels[k]);
        }
        for k in 0..u {
            let _ = writeln!(dot, "    f{f}v{k} -> f{f}v{} [label=\"e{k}\"];", (k + 1) % u);
        }
        for arc in admissible_arcs(&poly) {
            let _ = writeln!(
                dot,
                "    f{f}v{} -> f{f}v{} [style=dashed, constraint=false];",
                arc.start, arc.end
            );
        }
        dot.push_str("  }\n");
        polys.push(json!({
            "family": poly.family,
            "labels": poly.labels,
            "admissible_arcs": arcs,
            "min_level_partition": partition,
        }));
    }
    dot.push_str("}\n");
    Ok(match a.quiver.format {
        Format::Json => pretty(&json!({ "p": cd.p, "polygons": polys })),
        Format::Text => format!("p {}\n{text}", cd.p),
        Format::Dot => dot,
    })
}
