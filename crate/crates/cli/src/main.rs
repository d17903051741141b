use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use hyperdense::colour::{build_h_phi, decide_condition_b, random_pair_colouring, PairColouring};
use hyperdense::density::{self, DensityQuery, Mode, Verdict, DEFAULT_RESTARTS};
use hyperdense::inequality::{self, AuditMode};
use hyperdense::reduced::{self, CoreSelection, ReducedHypergraph};
use hyperdense::ternary::{build_ternary, decide_ternary_embeddable};
use hyperdense::{contains_copy, count_homomorphisms, count_injective_homomorphisms, enumerate_hypergraphs, Error, Hypergraph};
use serde::Serialize;
use serde_json::{json, Value};

const SCHEMA: &str = "hyperdense.report/1";

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNRESOLVED: u8 = 3;

#[derive(Parser, Serialize)]
#[command(name = "hyperdense", version, about = "Decide, construct and audit uniformly dense hypergraphs")]
struct Cli {
    /// Master seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
enum Command {
    /// Search for a vertex ordering and rainbow shadow colouring.
    #[command(name = "decide-pi1")]
    DecidePi1 { file: PathBuf },
    /// Decide whether a pattern embeds in some ternary hypergraph.
    Frequent { file: PathBuf },
    /// Write a constructed hypergraph in HYG format.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Audit a host hypergraph for uniform density.
    Audit {
        #[arg(value_enum)]
        notion: AuditNotion,
        file: PathBuf,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Random restarts in heuristic mode.
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        budget: usize,
        /// Comma-separated η values for the profile.
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75,1")]
        eta_grid: Vec<f64>,
    },
    /// Run both deciders on every labelled 3-uniform pattern on f vertices.
    Sweep {
        #[arg(long)]
        f: usize,
    },
    /// Reduced hypergraphs and rainbow core selection.
    Reduced {
        #[command(subcommand)]
        action: ReducedAction,
    },
    /// Grid scan of the three-variable inequality on [0,1]^3.
    #[command(name = "verify-fact7")]
    VerifyFact7 {
        #[arg(long, default_value_t = 201)]
        resolution: usize,
    },
    /// Check the density bound on subsets of T_level.
    #[command(name = "audit-tn")]
    AuditTn {
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum, default_value_t = TnMode::Exact)]
        mode: TnMode,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Allow the exhaustive audit of T_3 (2^27 subsets).
        #[arg(long)]
        long: bool,
    },
    /// Edge count of {0,1}^r x {0,1,2}^(n-r) inside T_n.
    Optimality {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
    },
    /// Homomorphism counts of a frequent pattern into T_1..T_nmax.
    Supersat {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
    },
    /// Count homomorphisms from a pattern into a host.
    #[command(name = "hom-count")]
    HomCount {
        pattern: PathBuf,
        host: PathBuf,
        #[arg(long)]
        injective: bool,
    },
    /// Find a copy of a pattern inside a host.
    Embed { pattern: PathBuf, host: PathBuf },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
enum GenerateKind {
    /// k-ary hypergraph on {0..k-1}^n.
    Ternary {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Hypergraph of a colouring of the (k-1)-sets of [n].
    Hphi {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Colouring file; a seeded uniform colouring is used when absent.
        #[arg(long)]
        colouring: Option<PathBuf>,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "action")]
enum ReducedAction {
    /// Run the three-stage selection on a reduced hypergraph.
    Select {
        file: PathBuf,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        f: usize,
    },
    /// Recheck a core selection against a reduced hypergraph.
    Verify {
        file: PathBuf,
        #[arg(long)]
        selection: PathBuf,
    },
    /// Sample a μ-dense reduced hypergraph.
    Random {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value_t = 1000)]
        max_attempts: usize,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum AuditNotion {
    Vertex,
    Triple,
    Profile,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Exact,
    Heuristic,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Heuristic => Mode::Heuristic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum TnMode {
    Exact,
    Sampled,
}

enum Body {
    Json(Value),
    Text(String),
}

struct Outcome {
    code: u8,
    body: Body,
}

impl Outcome {
    fn json(code: u8, result: Value) -> Self {
        Outcome {
            code,
            body: Body::Json(result),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    match run(&cli).and_then(|out| emit(&cli, out)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn emit(cli: &Cli, out: Outcome) -> anyhow::Result<u8> {
    let text = match out.body {
        Body::Text(t) => t,
        Body::Json(result) => {
            let report = json!({ "schema": SCHEMA, "config": cli, "result": result });
            serde_json::to_string_pretty(&report)? + "\n"
        }
    };
    match &cli.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => match io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
            other => other.context("writing standard output")?,
        },
    }
    Ok(out.code)
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_hyg(path: &Path) -> anyhow::Result<Hypergraph> {
    Hypergraph::parse_hyg(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let seed = cli.seed;
    Ok(match &cli.command {
        Command::DecidePi1 { file } => {
            let f = read_hyg(file)?;
            match decide_condition_b(&f)? {
                Some(w) => Outcome::json(EXIT_YES, json!({ "outcome": "witness", "witness": w.to_json(f.uniformity()) })),
                None => Outcome::json(EXIT_NO, json!({ "outcome": "none" })),
            }
        }
        Command::Frequent { file } => {
            let f = read_hyg(file)?;
            match decide_ternary_embeddable(&f)? {
                Some(w) => Outcome::json(EXIT_YES, json!({ "outcome": "witness", "witness": w.to_json() })),
                None => Outcome::json(EXIT_NO, json!({ "outcome": "none" })),
            }
        }
        Command::Generate { kind } => generate(kind, seed)?,
        Command::Audit {
            notion,
            file,
            d,
            eta,
            mode,
            budget,
            eta_grid,
        } => {
            let h = read_hyg(file)?;
            let mode = Mode::from(*mode);
            if let AuditNotion::Profile = notion {
                let report = density::density_profile(&h, eta_grid, mode, *budget, seed)?;
                return Ok(Outcome::json(EXIT_YES, report.to_json()));
            }
            let (Some(d), Some(eta)) = (d, eta) else {
                bail!("--d and --eta are required for vertex and triple audits");
            };
            let q = DensityQuery::new(*d, *eta, mode)?.with_budget(*budget).with_seed(seed);
            let report = match notion {
                AuditNotion::Vertex => density::vertex_density_check(&h, &q)?,
                _ => density::triple_density_check(&h, &q)?,
            };
            let code = match report.verdict {
                Verdict::Satisfied => EXIT_YES,
                Verdict::Violated => EXIT_NO,
                Verdict::Unresolved => EXIT_UNRESOLVED,
            };
            Outcome::json(code, report.to_json())
        }
        Command::Sweep { f } => sweep(*f)?,
        Command::Reduced { action } => reduced_command(action, seed)?,
        Command::VerifyFact7 { resolution } => {
            let scan = inequality::tau_inequality_scan(*resolution)?;
            let code = if scan.min >= -scan.tolerance { EXIT_YES } else { EXIT_NO };
            Outcome::json(code, serde_json::to_value(scan)?)
        }
        Command::AuditTn {
            level,
            mode,
            samples,
            long,
        } => {
            let mode = match mode {
                TnMode::Exact => AuditMode::Exact,
                TnMode::Sampled => AuditMode::Sampled,
            };
            let report = inequality::tn_density_audit(*level, mode, *samples, seed, *long)?;
            let code = if report.violations.is_empty() { EXIT_YES } else { EXIT_NO };
            Outcome::json(code, serde_json::to_value(report)?)
        }
        Command::Optimality { r, n } => {
            let point = inequality::optimality_family(*r, *n)?;
            Outcome::json(EXIT_YES, serde_json::to_value(point)?)
        }
        Command::Supersat { file, nmax } => {
            let f = read_hyg(file)?;
            match inequality::supersaturation_experiment(&f, *nmax) {
                Ok(report) => Outcome::json(EXIT_YES, serde_json::to_value(report)?),
                Err(Error::NotEmbeddable) => Outcome::json(
                    EXIT_NO,
                    json!({ "op": "supersat", "outcome": "not frequent", "pattern": f.to_hyg() }),
                ),
                Err(e) => return Err(e.into()),
            }
        }
        Command::HomCount {
            pattern,
            host,
            injective,
        } => {
            let (f, h) = (read_hyg(pattern)?, read_hyg(host)?);
            let count = if *injective {
                count_injective_homomorphisms(&f, &h)?
            } else {
                count_homomorphisms(&f, &h)?
            };
            Outcome::json(EXIT_YES, json!({ "op": "hom-count", "injective": injective, "count": count.to_string() }))
        }
        Command::Embed { pattern, host } => {
            let (f, h) = (read_hyg(pattern)?, read_hyg(host)?);
            match contains_copy(&f, &h)? {
                Some(map) => Outcome::json(EXIT_YES, json!({ "outcome": "embedding", "map": map.images })),
                None => Outcome::json(EXIT_NO, json!({ "outcome": "none" })),
            }
        }
    })
}

fn generate(kind: &GenerateKind, seed: u64) -> anyhow::Result<Outcome> {
    let text = match kind {
        GenerateKind::Ternary { k, n } => {
            format!("# ternary k={k} n={n}\n{}", build_ternary(*k, *n)?.to_hyg())
        }
        GenerateKind::Hphi { n, k, colouring } => {
            let (phi, origin) = match colouring {
                Some(path) => {
                    let phi = PairColouring::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
                    if n.is_some_and(|n| n != phi.vertex_count()) || *k != phi.uniformity() {
                        bail!("colouring file is for k={} n={}", phi.uniformity(), phi.vertex_count());
                    }
                    (phi, format!("colouring={}", path.display()))
                }
                None => {
                    let Some(n) = n else {
                        bail!("--n is required without --colouring");
                    };
                    (random_pair_colouring(*n, *k, seed)?, format!("seed={seed}"))
                }
            };
            format!(
                "# hphi k={} n={} {origin}\n{}",
                phi.uniformity(),
                phi.vertex_count(),
                build_h_phi(&phi).to_hyg()
            )
        }
    };
    Ok(Outcome {
        code: EXIT_YES,
        body: Body::Text(text),
    })
}

#[derive(Serialize)]
struct SweepRow {
    index: usize,
    edges: Vec<Vec<usize>>,
    condition_b: bool,
    frequent: bool,
}

fn sweep(f: usize) -> anyhow::Result<Outcome> {
    if f > 5 {
        bail!("sweep is limited to f <= 5");
    }
    let mut rows = Vec::new();
    let (mut both, mut neither, mut b_only, mut frequent_only) = (0, 0, 0, 0);
    for (index, pattern) in enumerate_hypergraphs(3, f)?.enumerate() {
        let condition_b = decide_condition_b(&pattern)?.is_some();
        let frequent = decide_ternary_embeddable(&pattern)?.is_some();
        match (frequent, condition_b) {
            (true, true) => both += 1,
            (false, false) => neither += 1,
            (false, true) => b_only += 1,
            (true, false) => frequent_only += 1,
        }
        rows.push(SweepRow {
            index,
            edges: pattern.edges().map(<[usize]>::to_vec).collect(),
            condition_b,
            frequent,
        });
    }
    let code = if frequent_only == 0 { EXIT_YES } else { EXIT_NO };
    Ok(Outcome::json(
        code,
        json!({
            "op": "sweep",
            "f": f,
            "patterns": rows.len(),
            "counts": {
                "frequent_and_condition_b": both,
                "neither": neither,
                "condition_b_only": b_only,
                "frequent_only": frequent_only,
            },
            "rows": rows,
        }),
    ))
}

fn reduced_command(action: &ReducedAction, seed: u64) -> anyhow::Result<Outcome> {
    Ok(match action {
        ReducedAction::Select { file, mu, f } => {
            let a = ReducedHypergraph::from_json(&read_json(file)?)?;
            let out = reduced::select_rainbow_core(&a, *mu, *f)?;
            let stages = json!({ "red": out.red_indices, "blue": out.blue_indices, "green": out.green_indices });
            match out.selection {
                Some(sel) => Outcome::json(
                    EXIT_YES,
                    json!({ "outcome": "core", "selection": sel.to_json(), "stage_indices": stages }),
                ),
                None => Outcome::json(EXIT_NO, json!({ "outcome": "none", "stage_indices": stages })),
            }
        }
        ReducedAction::Verify { file, selection } => {
            let a = ReducedHypergraph::from_json(&read_json(file)?)?;
            let value = read_json(selection)?;
            // accept a bare selection or a full select report
            let sel_json = value.pointer("/result/selection").unwrap_or(&value);
            let sel = CoreSelection::from_json(sel_json)?;
            let ok = reduced::verify_core(&a, &sel)?;
            Outcome::json(if ok { EXIT_YES } else { EXIT_NO }, json!({ "outcome": ok }))
        }
        ReducedAction::Random {
            m,
            size,
            p,
            mu,
            max_attempts,
        } => {
            let (a, attempts) = reduced::random_mu_dense(*m, *size, *p, *mu, seed, *max_attempts)?;
            let mut body = a.to_json();
            body["attempts"] = json!(attempts);
            Outcome {
                code: EXIT_YES,
                body: Body::Text(serde_json::to_string_pretty(&body)? + "\n"),
            }
        }
    })
}
