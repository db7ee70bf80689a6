//! Command definitions and dispatch.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use spweb::bmw_link::{link_invariant, verify_bmw, BraidWord};
use spweb::combinatorics::{count_avoiding, matching_to_tableau, max_crossing, tableau_to_matching, walk_count, Partition};
use spweb::diagram::{build_planar, Matching};
use spweb::homspace::gram::rank_of;
use spweb::homspace::{clasp, gram, gram_rank, trace, RankMode};
use spweb::skein::{canonicalize, evaluate_closed};
use spweb::webcompile::{compile, qdim_formula, qdim_ratio_check, run_suite};

use crate::dsl::{parse_diagram_dsl, parse_web_dsl};
use crate::render;

/// Exact evaluation and reduction for type C webs and quadrivalent diagrams.
#[derive(Debug, Parser)]
#[command(name = "spweb", version, about)]
pub struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Seed for probabilistic rank computations.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// The command to run.
    #[command(subcommand)]
    pub command: Command,
}

/// Source of a diagram or web.
#[derive(Debug, Args)]
pub struct Input {
    /// Read a diagram word from a file.
    #[arg(long, conflicts_with_all = ["expr", "web"])]
    pub file: Option<PathBuf>,
    /// A diagram word given inline, e.g. `width 0; U 1; A 1`.
    #[arg(long, conflicts_with = "web")]
    pub expr: Option<String>,
    /// A web term given inline, e.g. `(cmp (m 1 1) (s 1 1))`.
    #[arg(long)]
    pub web: Option<String>,
}

/// Rank algorithm selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Exact rank over the rational functions.
    Exact,
    /// Maximum rank over random evaluations.
    Probabilistic,
}

/// Which dimension oracles to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DimMethod {
    /// All three oracles.
    All,
    /// Gram rank only.
    Gram,
    /// Avoiding-matching count only.
    Count,
    /// Walk count only.
    Walk,
}

/// Verification suite selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Web relations.
    Relations,
    /// BMW relations on 2 to 4 strands.
    Bmw,
    /// Quantum dimensions of clasps.
    Qdim,
    /// Every suite.
    All,
}

/// The subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a closed diagram or web.
    Eval {
        /// Rank.
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        input: Input,
    },
    /// Reduce a diagram or web to its normal form.
    Reduce {
        /// Rank.
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        input: Input,
    },
    /// Dimension of the invariant space on a number of points.
    Dim {
        /// Rank.
        #[arg(long)]
        n: u32,
        /// Number of boundary points.
        #[arg(long)]
        points: usize,
        /// Oracles to run.
        #[arg(long, value_enum, default_value_t = DimMethod::All)]
        method: DimMethod,
        /// Rank algorithm.
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
    },
    /// Gram matrix rank, optionally with its entries.
    Gram {
        /// Rank.
        #[arg(long)]
        n: u32,
        /// Number of boundary points.
        #[arg(long)]
        points: usize,
        /// Rank algorithm.
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Include the matrix entries.
        #[arg(long)]
        matrix: bool,
    },
    /// The clasp on `k` strands.
    Clasp {
        /// Rank.
        #[arg(long)]
        n: u32,
        /// Number of strands.
        #[arg(long)]
        k: usize,
    },
    /// Run verification suites.
    Verify {
        /// Rank.
        #[arg(long)]
        n: u32,
        /// Suite to run.
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Invariant of a braid closure.
    Link {
        /// Rank.
        #[arg(long)]
        n: u32,
        /// Whitespace-separated signed generators.
        #[arg(long, allow_hyphen_values = true)]
        braid: String,
        /// Strand count (defaults to one more than the largest index).
        #[arg(long)]
        strands: Option<usize>,
        /// Remove the framing dependence.
        #[arg(long)]
        normalize: bool,
    },
    /// Count matchings avoiding `n+1` mutual crossings.
    Count {
        /// Number of points.
        #[arg(long)]
        points: usize,
        /// Rank.
        #[arg(long)]
        n: usize,
    },
    /// The oscillating tableau of a matching and back.
    Bijection {
        /// Matching as comma-separated `a-b` pairs.
        #[arg(long)]
        matching: String,
    },
}

/// A failed command: exit code 1 with a JSON error object.
#[derive(Debug)]
pub struct Failure(pub String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Result of a command: the JSON document and whether every check passed.
pub struct Outcome {
    /// The document printed on stdout.
    pub value: Value,
    /// False when a verification failed.
    pub ok: bool,
}

fn done(value: Value) -> Result<Outcome, Failure> {
    Ok(Outcome { value, ok: true })
}

fn rank_mode(mode: ModeArg, seed: u64) -> RankMode {
    match mode {
        ModeArg::Exact => RankMode::Exact,
        ModeArg::Probabilistic => RankMode::Probabilistic { seed, trials: 3 },
    }
}

enum Parsed {
    Diagram(spweb::diagram::SliceWord),
    Web(spweb::webcompile::Web),
}

fn read_input(input: &Input) -> Result<Parsed, Failure> {
    if let Some(w) = &input.web {
        return Ok(Parsed::Web(parse_web_dsl(w)?));
    }
    let text = match (&input.file, &input.expr) {
        (Some(p), _) => fs::read_to_string(p).map_err(|e| Failure(format!("{}: {e}", p.display())))?,
        (None, Some(e)) => e.clone(),
        (None, None) => return Err(Failure("one of --file, --expr or --web is required".into())),
    };
    Ok(Parsed::Diagram(parse_diagram_dsl(&text)?))
}

fn relations_table(n: u32) -> Result<(Value, bool), Failure> {
    let reports = run_suite(n)?;
    let ok = reports.iter().all(|r| r.holds);
    Ok((serde_json::to_value(&reports)?, ok))
}

fn bmw_table(n: u32) -> Result<(Value, bool), Failure> {
    let mut out = Vec::new();
    let mut ok = true;
    for s in 2..=4 {
        let r = verify_bmw(n, s)?;
        ok &= r.all_hold;
        out.push(serde_json::to_value(&r)?);
    }
    Ok((Value::Array(out), ok))
}

fn qdim_table(n: u32) -> Result<(Value, bool), Failure> {
    let mut rows = Vec::new();
    let mut ok = true;
    for k in 1..=n as usize {
        let t = trace(&clasp(k, n)?.morphism)?;
        let f = qdim_formula(k, n);
        let row_ok = t == f && qdim_ratio_check(k, n);
        ok &= row_ok;
        rows.push(json!({ "k": k, "trace": render::scalar(&t), "formula": render::scalar(&f), "holds": row_ok }));
    }
    Ok((Value::Array(rows), ok))
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Eval { n, input } => {
            let v = match read_input(input)? {
                Parsed::Diagram(w) => {
                    let d = build_planar(&w)?;
                    if d.point_count() != 0 {
                        return Err(Failure(format!("diagram has {} boundary points; eval needs a closed diagram", d.point_count())));
                    }
                    evaluate_closed(&d, *n)?
                }
                Parsed::Web(w) => {
                    let c = compile(&w, *n)?;
                    if !c.from.is_empty() || !c.to.is_empty() {
                        return Err(Failure("eval needs a closed web".into()));
                    }
                    c.morphism.coords.values().next().cloned().unwrap_or_default()
                }
            };
            done(render::scalar(&v))
        }
        Command::Reduce { n, input } => {
            let m = match read_input(input)? {
                Parsed::Diagram(w) => canonicalize(&build_planar(&w)?, *n)?,
                Parsed::Web(w) => compile(&w, *n)?.morphism,
            };
            done(render::morphism(&m))
        }
        Command::Dim { n, points, method, mode } => {
            if points % 2 == 1 {
                return Err(Failure(format!("point count {points} is odd")));
            }
            let mut out = serde_json::Map::new();
            if matches!(method, DimMethod::All | DimMethod::Gram) {
                out.insert("gram".into(), json!(gram_rank(*points, *n, rank_mode(*mode, cli.seed))?.rank));
            }
            if matches!(method, DimMethod::All | DimMethod::Count) {
                out.insert("count".into(), json!(count_avoiding(*points, *n as usize)));
            }
            if matches!(method, DimMethod::All | DimMethod::Walk) {
                out.insert("walk".into(), json!(walk_count(*n as usize, *points, &Partition::empty()) as u64));
            }
            let vals: Vec<&Value> = out.values().collect();
            let agree = vals.windows(2).all(|w| w[0] == w[1]);
            out.insert("agree".into(), json!(agree));
            Ok(Outcome { value: Value::Object(out), ok: agree })
        }
        Command::Gram { n, points, mode, matrix } => {
            let g = gram(*points, *n)?;
            let report = rank_of(&g, rank_mode(*mode, cli.seed))?;
            let mut v = serde_json::to_value(&report)?;
            if *matrix {
                let full = serde_json::to_value(&g)?;
                v["matchings"] = full["matchings"].clone();
                v["matrix"] = full["entries"].clone();
            }
            done(v)
        }
        Command::Clasp { n, k } => {
            let c = clasp(*k, *n)?;
            let mut v = render::morphism(&c.morphism);
            v["k"] = json!(k);
            v["eigen_constraint"] = json!(c.eigen_constraint);
            v["trace"] = render::scalar(&trace(&c.morphism)?);
            done(v)
        }
        Command::Verify { n, suite } => {
            let mut out = serde_json::Map::new();
            let mut ok = true;
            type Runner = fn(u32) -> Result<(Value, bool), Failure>;
            let runners: [(Suite, &str, Runner); 3] =
                [(Suite::Relations, "relations", relations_table), (Suite::Bmw, "bmw", bmw_table), (Suite::Qdim, "qdim", qdim_table)];
            for (s, name, f) in runners {
                if *suite == s || *suite == Suite::All {
                    let (v, pass) = f(*n)?;
                    ok &= pass;
                    out.insert(name.into(), v);
                }
            }
            out.insert("all_pass".into(), json!(ok));
            Ok(Outcome { value: Value::Object(out), ok })
        }
        Command::Link { n, braid, strands, normalize } => {
            let mut b: BraidWord = braid.parse()?;
            if let Some(s) = strands {
                b = BraidWord::new(*s, b.letters)?;
            }
            let v = link_invariant(&b, *n, *normalize)?;
            let mut out = render::scalar(&v);
            out["writhe"] = json!(b.writhe());
            out["strands"] = json!(b.strands);
            out["normalized"] = json!(normalize);
            done(out)
        }
        Command::Count { points, n } => {
            if points % 2 == 1 {
                return Err(Failure(format!("point count {points} is odd")));
            }
            done(json!({ "points": points, "n": n, "count": count_avoiding(*points, *n) }))
        }
        Command::Bijection { matching } => {
            let m: Matching = matching.parse()?;
            let t = matching_to_tableau(&m);
            let back = tableau_to_matching(&t)?;
            let shapes: Vec<Vec<u32>> = t.shapes().iter().map(|p| p.parts().to_vec()).collect();
            done(json!({
                "matching": m.to_string(),
                "tableau": shapes,
                "max_crossing": max_crossing(&m),
                "max_rows": t.max_rows(),
                "round_trip": back == m,
            }))
        }
    }
}
