use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use tul_core::asymptotics::{cross_check, predict_cycle, predict_melonic, Claim};
use tul_core::constructors::{
    is_melonic, make_cycle_graph, make_melonic, CycleSpec, MelonicRecipe,
};
use tul_core::enumeration::minimal_coverings;
use tul_core::exec;
use tul_core::graph::ColoredGraph;
use tul_core::tensor_sim::{universality_scan, EnsembleSpec, TraceTarget};
use tul_core::verify::{verify, SuiteFamily, VerifySuiteConfig};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(
    name = "tul",
    version,
    about = "Trace invariants of random rectangular tensors"
)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides any seed given in input files.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal coverings of a colored graph by brute force.
    Enumerate(EnumerateArgs),
    /// Closed-form leading behaviour of the mean invariant.
    Asym(AsymArgs),
    /// Monte Carlo scan of normalized means over N.
    Mc(McArgs),
    /// Run the built-in cross-check suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct GraphSource {
    /// Graph JSON: {"k", "D", "sigma"} with 1-based images.
    #[arg(long, group = "source")]
    graph: Option<PathBuf>,
    /// Cycle spec JSON: {"k", "m_colors", "n_colors"}.
    #[arg(long, group = "source")]
    cycle: Option<PathBuf>,
    /// Melonic recipe JSON: {"D", "steps"}.
    #[arg(long, group = "source")]
    melonic: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Include every minimal covering with its face counts.
    #[arg(long)]
    faces: bool,
    /// Histogram of (0,COLOR)-face counts over minimal coverings (1-based).
    #[arg(long, value_name = "COLOR")]
    histogram: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AsymFamily {
    Melonic,
    Cycle,
}

#[derive(Args)]
struct AsymArgs {
    #[arg(long, value_enum)]
    family: AsymFamily,
    /// Cycle spec (cycle) or graph / recipe JSON (melonic).
    #[arg(long)]
    spec: PathBuf,
    /// Ratios c_1,...,c_D.
    #[arg(long, value_delimiter = ',', required = true)]
    c: Vec<f64>,
    /// Also compare against enumeration.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct McArgs {
    /// Ensemble JSON: {"D", "c", "distribution", "seed"?, "N"?}.
    #[arg(long)]
    spec: PathBuf,
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Sizes to scan; defaults to the spec's N.
    #[arg(long = "N-list", alias = "n-list", value_delimiter = ',')]
    n_list: Vec<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 5)]
    max_k: usize,
    #[arg(long = "max-D", alias = "max-d", default_value_t = 5)]
    max_d: usize,
    /// Subset of cycle_11, cycle_mm, cycle_mn, melonic.
    #[arg(long, value_delimiter = ',')]
    families: Vec<SuiteFamily>,
}

#[derive(Deserialize)]
struct McSpecFile {
    #[serde(flatten)]
    ensemble: EnsembleSpec,
    #[serde(rename = "N")]
    n: Option<usize>,
}

/// Parses a JSON file; serde's message names the offending field.
fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{}: invalid input", path.display()))
}

fn load_graph(src: &GraphSource) -> Result<(ColoredGraph, Option<CycleSpec>)> {
    if let Some(p) = &src.graph {
        Ok((read_json(p)?, None))
    } else if let Some(p) = &src.cycle {
        let spec: CycleSpec = read_json(p)?;
        spec.validate()
            .with_context(|| format!("{}", p.display()))?;
        Ok((make_cycle_graph(&spec)?, Some(spec)))
    } else if let Some(p) = &src.melonic {
        let recipe: MelonicRecipe = read_json(p)?;
        Ok((
            make_melonic(&recipe).with_context(|| format!("{}", p.display()))?,
            None,
        ))
    } else {
        bail!("one of --graph, --cycle, --melonic is required")
    }
}

/// Rendered output plus whether the run counts as a success.
struct Output {
    body: String,
    ok: bool,
}

impl Output {
    fn json<T: Serialize>(value: &T) -> Result<Self> {
        Ok(Output {
            body: serde_json::to_string_pretty(value)? + "\n",
            ok: true,
        })
    }
}

fn csv_string(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn run_enumerate(args: &EnumerateArgs, format: Format) -> Result<Output> {
    let (g, _) = load_graph(&args.source)?;
    let min = minimal_coverings(&g)?;
    if let Some(color) = args.histogram {
        if color == 0 || color > g.colors() {
            bail!("--histogram: color {color} is outside 1..={}", g.colors());
        }
    }
    if format == Format::Csv {
        let mut header = vec!["tau".to_string()];
        header.extend((1..=g.colors()).map(|i| format!("f_{i}")));
        header.push("total".into());
        let rows: Vec<Vec<String>> = min
            .members
            .iter()
            .map(|m| {
                let mut r = vec![m.tau.to_string()];
                r.extend(m.profile.zero_faces.iter().map(|f| f.to_string()));
                r.push(m.profile.total.to_string());
                r
            })
            .collect();
        return Ok(Output {
            body: csv_string(&header, &rows)?,
            ok: true,
        });
    }
    let mut out = json!({ "schema": SCHEMA, "gamma": min.gamma, "count": min.count });
    if args.faces {
        out["members"] = min
            .members
            .iter()
            .map(|m| {
                json!({
                    "tau": m.tau,
                    "cycles": m.tau.to_string(),
                    "faces": m.profile.zero_faces,
                    "total": m.profile.total,
                })
            })
            .collect();
    }
    if let Some(color) = args.histogram {
        let hist = min.face_histogram(color - 1);
        out["histogram"] = json!({
            "color": color,
            "counts": hist.iter().map(|(l, n)| (l.to_string(), json!(n))).collect::<serde_json::Map<_, _>>(),
        });
    }
    Output::json(&out)
}

fn run_asym(args: &AsymArgs, format: Format) -> Result<Output> {
    let (graph, claim, prediction) = match args.family {
        AsymFamily::Cycle => {
            let spec: CycleSpec = read_json(&args.spec)?;
            let p = predict_cycle(&spec, &args.c)?;
            let g = if args.check {
                Some(make_cycle_graph(&spec)?)
            } else {
                None
            };
            (g, Claim::Cycle(spec), p)
        }
        AsymFamily::Melonic => {
            let text = fs::read_to_string(&args.spec)
                .with_context(|| format!("cannot read {}", args.spec.display()))?;
            let value: Value = serde_json::from_str(&text)
                .with_context(|| format!("{}: invalid input", args.spec.display()))?;
            let g: ColoredGraph = if value.get("steps").is_some() {
                make_melonic(
                    &serde_json::from_value(value)
                        .with_context(|| format!("{}: invalid recipe", args.spec.display()))?,
                )?
            } else {
                serde_json::from_value(value)
                    .with_context(|| format!("{}: invalid graph", args.spec.display()))?
            };
            if !is_melonic(&g) {
                bail!("{}: graph is not melonic", args.spec.display());
            }
            let p = predict_melonic(&g, &args.c)?;
            (Some(g), Claim::Melonic, p)
        }
    };
    let check = match &graph {
        Some(g) if args.check => Some(cross_check(g, &claim, &args.c)?),
        _ => None,
    };
    let ok = check.as_ref().is_none_or(|r| r.passed);
    if format == Format::Csv {
        let mut header: Vec<String> = ["family", "gamma", "coefficient", "minimal_count"]
            .map(String::from)
            .to_vec();
        let family = serde_json::to_value(prediction.family)?;
        let mut row = vec![
            family.as_str().unwrap_or_default().to_string(),
            prediction.gamma.to_string(),
            format!("{:e}", prediction.coefficient),
            prediction.minimal_count.to_string(),
        ];
        if let Some(r) = &check {
            header.extend(["coefficient_enum", "rel_err", "passed"].map(String::from));
            row.extend([
                format!("{:e}", r.coeff_enum),
                format!("{:e}", r.rel_err),
                r.passed.to_string(),
            ]);
        }
        return Ok(Output {
            body: csv_string(&header, &[row])?,
            ok,
        });
    }
    let mut out = serde_json::to_value(&prediction)?;
    out["schema"] = json!(SCHEMA);
    if let Some(r) = check {
        out["check"] = serde_json::to_value(r)?;
    }
    let mut o = Output::json(&out)?;
    o.ok = ok;
    Ok(o)
}

fn run_mc(args: &McArgs, format: Format, seed: Option<u64>) -> Result<Output> {
    let file: McSpecFile = read_json(&args.spec)?;
    let mut ensemble = file.ensemble;
    if let Some(s) = seed {
        ensemble.seed = s;
    }
    let n_list = if !args.n_list.is_empty() {
        args.n_list.clone()
    } else if let Some(n) = file.n {
        vec![n]
    } else {
        bail!(
            "no sizes: pass --N-list or put \"N\" in {}",
            args.spec.display()
        );
    };
    let (g, cycle) = load_graph(&args.source)?;
    let target = match cycle {
        Some(spec) => TraceTarget::Cycle(spec),
        None => TraceTarget::Graph(g),
    };
    let report = universality_scan(&ensemble, &target, &n_list, args.samples)?;
    match format {
        Format::Csv => Ok(Output {
            body: report.to_csv(),
            ok: true,
        }),
        Format::Json => Output::json(&report),
    }
}

fn run_verify(args: &VerifyArgs, format: Format, seed: Option<u64>) -> Result<Output> {
    let mut config = VerifySuiteConfig {
        max_k: args.max_k,
        max_d: args.max_d,
        seed: seed.unwrap_or(0),
        ..Default::default()
    };
    if !args.families.is_empty() {
        config.families = args.families.clone();
    }
    let summary = verify(&config)?;
    for c in summary.checks.iter().filter(|c| !c.passed) {
        eprintln!("FAIL {}: {}", c.name, c.details);
    }
    let body = match format {
        Format::Json => serde_json::to_string_pretty(&summary)? + "\n",
        Format::Csv => {
            let header = ["family", "name", "passed", "details"].map(String::from);
            let rows: Vec<Vec<String>> = summary
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.family.name().into(),
                        c.name.clone(),
                        c.passed.to_string(),
                        c.details.to_string(),
                    ]
                })
                .collect();
            csv_string(&header, &rows)?
        }
    };
    Ok(Output {
        body,
        ok: summary.passed,
    })
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Enumerate(a) => run_enumerate(a, cli.format),
        Command::Asym(a) => run_asym(a, cli.format),
        Command::Mc(a) => run_mc(a, cli.format, cli.seed),
        Command::Verify(a) => run_verify(a, cli.format, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads == Some(0) {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(2);
    }
    let result = exec::with_threads(cli.threads, || run(&cli)).and_then(|out| {
        match &cli.out {
            Some(path) => fs::write(path, &out.body)
                .with_context(|| format!("cannot write {}", path.display()))?,
            None => std::io::stdout().write_all(out.body.as_bytes())?,
        }
        Ok(out.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
