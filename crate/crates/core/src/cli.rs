//! Command-line front end. [`run`] does all the work and returns the text to
//! print, so the binary is a thin wrapper and tests can drive it directly.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::arith::{bernoulli, ExactRational};
use crate::engine::{canonicalize, MemoCache, WEngine};
use crate::error::{Error, Result};
use crate::hodge::{hodge_integral, hodge_table, HodgeQuery};
use crate::trees::{canonical_encoding, count_histories, for_each_tree, tree_sum, tree_weight};
use crate::verify::{
    check_bernoulli_identity, check_choice_independence, check_genus0, check_oracle_agreement,
    check_tree_identity, default_aux_set, CheckReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Refuse to list more trees than this.
pub const MAX_LISTED_TREES: u128 = 2_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "hodge",
    version,
    about = "Exact Hodge integrals, W-numbers and decorated-tree sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integral of psi_1^(3g-2-i) lambda_i over the one-pointed genus-g space.
    Integral {
        #[arg(long)]
        g: i64,
        #[arg(long = "lambda", allow_hyphen_values = true)]
        lambda: i64,
        /// Auxiliary weights, comma separated.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        weights: String,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        decimal: Option<usize>,
    },
    /// A single W-number W^i_g(eta_a1 ... eta_an).
    W {
        #[arg(long, allow_hyphen_values = true)]
        g: i64,
        #[arg(long = "lambda", allow_hyphen_values = true)]
        lambda: i64,
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        decimal: Option<usize>,
    },
    /// Decorated trees.
    Trees {
        #[command(subcommand)]
        action: TreesCommand,
    },
    /// All integrals for 1 <= g <= max-g.
    Table {
        #[arg(long = "max-g")]
        max_g: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Tsv)]
        format: TableFormat,
    },
    /// Bernoulli number B_m (B_1 = -1/2).
    Bernoulli {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        decimal: Option<usize>,
    },
    /// Run identity checks; exits 1 if any fails.
    Verify {
        #[arg(long, value_enum)]
        check: CheckName,
        #[arg(long = "max-g")]
        max_g: Option<u32>,
        #[arg(long = "max-n")]
        max_n: Option<u32>,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
}

#[derive(Subcommand, Debug)]
enum TreesCommand {
    /// List every (n,g)-decorated tree with its weight.
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        g: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// S_{g,n}.
    Sum {
        #[arg(long, allow_hyphen_values = true)]
        g: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        decimal: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckName {
    TreeIdentity,
    Bernoulli,
    Genus0,
    Oracle,
    Independence,
    All,
}

/// Exit status plus everything written to stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        let first = msg.to_string();
        let first = first
            .lines()
            .find(|l| !l.trim().is_empty())
            .unwrap_or("error")
            .trim();
        Self {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("hodge: {first}\n"),
        }
    }
}

/// Run the tool on `args` (without the program name).
pub fn run<I, S>(args: I) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv = std::iter::once("hodge".to_string()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliOutput::ok(e.to_string()),
                _ => CliOutput::usage(e),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(out) => out,
        Err(e) => CliOutput::usage(e),
    }
}

fn parse_weights(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidQuery(format!("malformed weight list `{text}`")))
        })
        .collect()
}

fn render(value: &ExactRational, decimal: Option<usize>) -> String {
    match decimal {
        Some(d) => format!(
            "{value}\napprox {} (rounded to {d} digits)\n",
            value.to_decimal(d)
        ),
        None => format!("{value}\n"),
    }
}

fn load_engine(cache: &Option<PathBuf>) -> Result<WEngine> {
    match cache {
        Some(path) if path.exists() => Ok(WEngine::with_cache(MemoCache::load(path)?)),
        _ => Ok(WEngine::new()),
    }
}

fn save_engine(engine: &WEngine, cache: &Option<PathBuf>) -> Result<()> {
    if let Some(path) = cache {
        engine.cache().save(path)?;
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn tree_params(g: i64, n: i64) -> Result<(u32, u32)> {
    if g < 0 {
        return Err(Error::NegativeGenus(g));
    }
    if n < 1 {
        return Err(Error::InvalidQuery(format!(
            "n must be at least 1, got {n}"
        )));
    }
    let g = u32::try_from(g).map_err(|_| Error::InvalidQuery("g too large".into()))?;
    let n = u32::try_from(n).map_err(|_| Error::InvalidQuery("n too large".into()))?;
    Ok((g, n))
}

fn dispatch(cmd: Command) -> Result<CliOutput> {
    match cmd {
        Command::Integral {
            g,
            lambda,
            weights,
            cache,
            decimal,
        } => {
            let q = HodgeQuery::with_weights(g, lambda, &parse_weights(&weights)?)?;
            let mut engine = load_engine(&cache)?;
            let v = hodge_integral(&mut engine, &q)?;
            save_engine(&engine, &cache)?;
            Ok(CliOutput::ok(render(&v, decimal)))
        }
        Command::W {
            g,
            lambda,
            weights,
            cache,
            decimal,
        } => {
            if lambda < 0 {
                return Err(Error::InvalidQuery(format!(
                    "lambda index must be nonnegative, got {lambda}"
                )));
            }
            let key = canonicalize(&parse_weights(&weights)?, g, lambda)?;
            let mut engine = load_engine(&cache)?;
            let v = engine.w_value(&key)?;
            save_engine(&engine, &cache)?;
            Ok(CliOutput::ok(render(&v, decimal)))
        }
        Command::Trees {
            action: TreesCommand::Sum { g, n, decimal },
        } => {
            let (g, n) = tree_params(g, n)?;
            Ok(CliOutput::ok(render(&tree_sum(g, n), decimal)))
        }
        Command::Trees {
            action: TreesCommand::Enumerate { g, n, format },
        } => {
            let (g, n) = tree_params(g, n)?;
            let count = count_histories(g, n);
            if count > MAX_LISTED_TREES {
                return Err(Error::InvalidQuery(format!(
                    "{count} trees exceed the listing limit of {MAX_LISTED_TREES}; use `trees sum`"
                )));
            }
            let mut rows = Vec::with_capacity(count as usize);
            for_each_tree(g, n, |t, _| {
                rows.push((
                    canonical_encoding(t),
                    tree_weight(t).expect("generated trees are valid"),
                ));
            });
            rows.sort();
            let sum: ExactRational = rows.iter().map(|(_, w)| w).sum();
            let out = match format {
                TextFormat::Text => {
                    let mut s = format!("g={g} n={n} count={} sum={sum}\n", rows.len());
                    for (enc, w) in &rows {
                        s.push_str(&format!("{enc}\t{w}\n"));
                    }
                    s
                }
                TextFormat::Json => to_json(&json!({
                    "g": g,
                    "n": n,
                    "count": rows.len(),
                    "sum": sum.to_string(),
                    "trees": rows
                        .iter()
                        .map(|(enc, w)| json!({"encoding": enc, "weight": w.to_string()}))
                        .collect::<Vec<_>>(),
                })),
            };
            Ok(CliOutput::ok(out))
        }
        Command::Table { max_g, format } => {
            let mut engine = WEngine::new();
            let rows = hodge_table(&mut engine, max_g)?;
            let out = match format {
                TableFormat::Tsv => {
                    let mut s = String::from("g\ti\tpsi_power\tintegral\n");
                    for r in &rows {
                        s.push_str(&format!(
                            "{}\t{}\t{}\t{}\n",
                            r.g, r.i, r.psi_power, r.integral
                        ));
                    }
                    s
                }
                TableFormat::Json => to_json(&rows),
            };
            Ok(CliOutput::ok(out))
        }
        Command::Bernoulli { m, decimal } => Ok(CliOutput::ok(render(&bernoulli(m), decimal))),
        Command::Verify {
            check,
            max_g,
            max_n,
            format,
        } => {
            for (name, v) in [("max-g", max_g), ("max-n", max_n)] {
                if v == Some(0) {
                    return Err(Error::InvalidQuery(format!("--{name} must be at least 1")));
                }
            }
            let reports = run_checks(check, max_g, max_n)?;
            let all_pass = reports.iter().all(CheckReport::passed);
            let stdout = match format {
                TextFormat::Text => reports.iter().map(|r| format!("{r}\n")).collect(),
                TextFormat::Json if reports.len() == 1 => to_json(&reports[0]),
                TextFormat::Json => to_json(&reports),
            };
            Ok(CliOutput {
                code: if all_pass {
                    EXIT_OK
                } else {
                    EXIT_VERIFY_FAILED
                },
                stdout,
                stderr: String::new(),
            })
        }
    }
}

fn run_checks(
    check: CheckName,
    max_g: Option<u32>,
    max_n: Option<u32>,
) -> Result<Vec<CheckReport>> {
    let wanted = |c: CheckName| check == c || check == CheckName::All;
    let mut engine = WEngine::new();
    let mut out = Vec::new();
    if wanted(CheckName::TreeIdentity) {
        out.push(check_tree_identity(
            &mut engine,
            max_g.unwrap_or(3),
            max_n.unwrap_or(5),
        )?);
    }
    if wanted(CheckName::Bernoulli) {
        out.push(check_bernoulli_identity(
            max_g.unwrap_or(3),
            max_n.unwrap_or(3),
        )?);
    }
    if wanted(CheckName::Genus0) {
        out.push(check_genus0(max_n.unwrap_or(9))?);
    }
    if wanted(CheckName::Oracle) {
        out.push(check_oracle_agreement(&mut engine, max_g.unwrap_or(6))?);
    }
    if wanted(CheckName::Independence) {
        out.push(check_choice_independence(
            &mut engine,
            max_g.unwrap_or(3),
            &default_aux_set(),
        )?);
    }
    Ok(out)
}
