use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::ops::ControlFlow;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use tree_semigroups::polytope::for_each_point;
use tree_semigroups::survey::{run_survey, OracleDepth};
use tree_semigroups::weightings::strictly_interior;
use tree_semigroups::{
    classify_gorenstein, enumerate_trees, gorenstein_oracle, hilbert_function, tree_t, Tree,
    WeightVector, Weighting,
};

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_DISAGREEMENT: u8 = 3;

/// Edge-weighting semigroups of trivalent trees: enumeration, piping graphs,
/// and Gorenstein classification cross-checked against a brute-force oracle.
///
/// Exit codes: 0 ok, 1 usage error, 2 validation error, 3 survey disagreement.
#[derive(Debug, Parser)]
#[command(name = "tree-semigroups", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every triangulation of the n-gon (planar trees with n leaves).
    Trees {
        /// Number of leaves.
        #[arg(long)]
        leaves: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Stream the weightings of degree k as JSON lines.
    Enumerate {
        #[command(flatten)]
        input: TreeAndWeights,
        /// Degree k; leaf weights are k·r.
        #[arg(long)]
        degree: u32,
        /// Only weightings with every triangle inequality strict.
        #[arg(long)]
        interior: bool,
    },
    /// Table of k -> number of weightings of degree k.
    Hilbert {
        #[command(flatten)]
        input: TreeAndWeights,
        /// Largest degree to count.
        #[arg(long)]
        max_degree: u32,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// The piping graph (leaf chord multiplicities) of a weighting.
    Piping {
        /// Tree as inline JSON or a path to a JSON file.
        #[arg(long)]
        tree: String,
        /// Weighting as inline JSON or a path to a JSON file.
        #[arg(long)]
        weighting: String,
        /// Emit Graphviz DOT instead of JSON (same as --format dot).
        #[arg(long)]
        dot: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Closed-form Gorenstein verdict.
    Classify {
        #[command(flatten)]
        input: TreeAndWeights,
    },
    /// Brute-force Gorenstein verdict, exhaustive through the given depth.
    Oracle {
        #[command(flatten)]
        input: TreeAndWeights,
        /// Largest degree searched.
        #[arg(long)]
        depth: u32,
    },
    /// Compare classifier and oracle over all trees and all weight vectors.
    ///
    /// Writes a TSV table ordered by r, then tree index. Exits with 3 if any
    /// row disagrees.
    Survey {
        /// Number of leaves.
        #[arg(long)]
        leaves: usize,
        /// Largest entry of r; entries run over 1..=max-entry with even sum.
        #[arg(long)]
        max_entry: i64,
        /// Fixed oracle depth. Without it: min(3a, 12) when the classifier
        /// finds a generator in degree a, else 2(n-2).
        #[arg(long)]
        depth: Option<u32>,
    },
}

#[derive(Debug, Args)]
struct TreeAndWeights {
    /// Tree as inline JSON ({"n": 4, "diagonals": [[1,3]]}) or a path to a JSON file.
    #[arg(long)]
    tree: String,
    /// Weight vector, comma separated (e.g. 1,1,1,1).
    #[arg(long)]
    r: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Dot,
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Usage(String),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Usage(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<tree_semigroups::Error> for CliError {
    fn from(e: tree_semigroups::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn validation(e: impl fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

// Inline JSON when the argument starts with '{', a file path otherwise.
fn read_json(arg: &str, what: &str) -> Result<Value, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| validation(format!("cannot read {what} file {arg:?}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| validation(format!("malformed {what} JSON: {e}")))
}

fn load_tree(arg: &str) -> Result<Tree, CliError> {
    let value = read_json(arg, "tree")?;
    for field in ["n", "diagonals"] {
        if value.get(field).is_none() {
            return Err(validation(format!("malformed tree JSON: missing field \"{field}\"")));
        }
    }
    serde_json::from_value(value).map_err(|e| validation(format!("invalid tree: {e}")))
}

fn load_input(input: &TreeAndWeights) -> Result<(Tree, WeightVector), CliError> {
    let tree = load_tree(&input.tree)?;
    let r: WeightVector = input
        .r
        .parse()
        .map_err(|e| validation(format!("invalid r: {e}")))?;
    if r.len() != tree.n_leaves() {
        return Err(validation(format!(
            "invalid r: {} entries for a tree with {} leaves",
            r.len(),
            tree.n_leaves()
        )));
    }
    Ok((tree, r))
}

fn write_json_line(out: &mut impl Write, value: &Value) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")
}

fn run(command: Command, out: &mut impl Write) -> Result<u8, CliError> {
    match command {
        Command::Trees { leaves, format } => {
            let trees = enumerate_trees(leaves).map_err(validation)?;
            match format {
                Format::Json => {
                    for t in &trees {
                        write_json_line(out, &serde_json::to_value(t).expect("tree serializes"))?;
                    }
                }
                Format::Tsv => {
                    writeln!(out, "index\tdiagonals")?;
                    for (i, t) in trees.iter().enumerate() {
                        let d: Vec<String> = t.diagonals().iter().map(|(a, b)| format!("{a}-{b}")).collect();
                        writeln!(out, "{i}\t{}", d.join(","))?;
                    }
                }
                Format::Dot => return Err(CliError::Usage("trees supports json or tsv output".into())),
            }
        }
        Command::Enumerate { input, degree, interior } => {
            let (tree, r) = load_input(&input)?;
            let leaf = r.scaled(i64::from(degree));
            let mut result = Ok(());
            let _ = for_each_point(&tree, &leaf, |vals| {
                let w = Weighting::new(&tree, vals.to_vec()).expect("edge count matches");
                if interior && !strictly_interior(&w) {
                    return ControlFlow::Continue(());
                }
                match write_json_line(out, &w.to_json()) {
                    Ok(()) => ControlFlow::Continue(()),
                    Err(e) => {
                        result = Err(e);
                        ControlFlow::Break(())
                    }
                }
            });
            result?;
        }
        Command::Hilbert { input, max_degree, format } => {
            let (tree, r) = load_input(&input)?;
            match format {
                Format::Tsv => writeln!(out, "k\tcount")?,
                Format::Json => {}
                Format::Dot => return Err(CliError::Usage("hilbert supports json or tsv output".into())),
            }
            for k in 0..=max_degree {
                let count = hilbert_function(&tree, &r, k)?;
                match format {
                    Format::Json => write_json_line(out, &serde_json::json!({"k": k, "count": count}))?,
                    _ => writeln!(out, "{k}\t{count}")?,
                }
            }
        }
        Command::Piping { tree, weighting, dot, format } => {
            let tree = load_tree(&tree)?;
            let w = Weighting::from_json(&tree, &read_json(&weighting, "weighting")?)?;
            let graph = tree_t(&tree, &w)?;
            match (dot, format) {
                (true, _) | (false, Format::Dot) => out.write_all(graph.to_dot().as_bytes())?,
                (false, Format::Json) => write_json_line(out, &graph.to_json())?,
                (false, Format::Tsv) => {
                    writeln!(out, "i\tj\tmult")?;
                    for (i, j, m) in graph.chords() {
                        writeln!(out, "{i}\t{j}\t{m}")?;
                    }
                }
            }
        }
        Command::Classify { input } => {
            let (tree, r) = load_input(&input)?;
            write_json_line(out, &classify_gorenstein(&tree, &r)?.to_json())?;
        }
        Command::Oracle { input, depth } => {
            let (tree, r) = load_input(&input)?;
            write_json_line(out, &gorenstein_oracle(&tree, &r, depth)?.to_json())?;
        }
        Command::Survey { leaves, max_entry, depth } => {
            if max_entry < 1 {
                return Err(validation("--max-entry must be at least 1"));
            }
            let policy = match depth {
                Some(0) => return Err(validation("--depth must be at least 1")),
                Some(d) => OracleDepth::Fixed(d),
                None => OracleDepth::Adaptive,
            };
            let rows = run_survey(leaves, max_entry, policy)?;
            let verdict = |g: bool| if g { "gorenstein" } else { "not_gorenstein" };
            let opt = |a: Option<u32>| a.map_or_else(|| "-".to_string(), |a| a.to_string());
            writeln!(out, "r\ttree\tclassifier\ta\toracle\toracle_a\tdepth\tagree")?;
            let mut disagreements = 0;
            for row in &rows {
                let depth = match row.oracle.method {
                    tree_semigroups::Method::Oracle { depth } => depth,
                    tree_semigroups::Method::Classifier => 0,
                };
                let agree = row.agrees();
                disagreements += usize::from(!agree);
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    row.r,
                    row.tree_index,
                    verdict(row.classifier.is_gorenstein),
                    opt(row.classifier.a),
                    verdict(row.oracle.is_gorenstein),
                    opt(row.oracle.a),
                    depth,
                    if agree { "yes" } else { "no" },
                )?;
            }
            eprintln!("{} rows, {} disagreements", rows.len(), disagreements);
            if disagreements > 0 {
                return Ok(EXIT_DISAGREEMENT);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match run(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) => EXIT_USAGE,
                CliError::Validation(_) => EXIT_VALIDATION,
                CliError::Io(e) if e.kind() == io::ErrorKind::BrokenPipe => return ExitCode::SUCCESS,
                CliError::Io(_) => EXIT_VALIDATION,
            }
        }
    };
    if out.flush().is_err() {
        return ExitCode::from(EXIT_VALIDATION);
    }
    ExitCode::from(code)
}
