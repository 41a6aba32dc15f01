//! The `idpp` command line.
//!
//! Exit codes: 0 success (or a solvable instance), 1 unsolvable instance or
//! failed verification, 2 malformed input or usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{bench_engines, to_json_lines, BenchConfig};
use crate::engine::EngineKind;
use crate::format::{parse_binary, parse_matrix, write_binary, write_matrix};
use crate::gen::{generate, GenConfig, GenKind};
use crate::phylogeny::Phylogeny;
use crate::solver::{solve, Solution};
use crate::verify::{check_completion, laminar_violation, tree_explains};

#[derive(Parser, Debug)]
#[command(name = "idpp", version, about = "Incomplete directed perfect phylogeny solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum EngineArg {
    Naive,
    Sparse,
    Optimal,
}

impl From<EngineArg> for EngineKind {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Naive => EngineKind::Naive,
            EngineArg::Sparse => EngineKind::Sparse,
            EngineArg::Optimal => EngineKind::Optimal,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum KindArg {
    Yes,
    No,
    Random,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide a matrix and print a completion and tree, or a blocking component.
    Solve {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "optimal")]
        engine: EngineArg,
        #[arg(long)]
        out_completion: Option<PathBuf>,
        #[arg(long)]
        out_tree: Option<PathBuf>,
    },
    /// Check a completion and tree against a matrix.
    Verify { matrix: PathBuf, completion: PathBuf, tree: PathBuf },
    /// Write a seeded instance.
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        mask_prob: f64,
        /// Edge density for `--kind random`.
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        output: PathBuf,
    },
    /// Count engine operations over random deactivation sequences.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_enum, value_delimiter = ',', default_values = ["naive", "sparse", "optimal"])]
        engines: Vec<EngineArg>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall time in `wall_ns`; output is then no longer reproducible.
        #[arg(long)]
        wall_clock: bool,
    },
}

/// Failure carrying its exit code.
struct Exit(u8, String);

type CmdResult = Result<u8, Exit>;

fn malformed(msg: impl std::fmt::Display) -> Exit {
    Exit(2, msg.to_string())
}

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Exit> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| malformed(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(malformed),
    }
}

pub fn run(cli: Cli) -> u8 {
    let res = match cli.command {
        Command::Solve { input, engine, out_completion, out_tree } => {
            cmd_solve(&input, engine.into(), out_completion.as_deref(), out_tree.as_deref())
        }
        Command::Verify { matrix, completion, tree } => cmd_verify(&matrix, &completion, &tree),
        Command::Gen { kind, n, m, seed, mask_prob, density, output } => {
            let kind = match kind {
                KindArg::Yes => GenKind::PlantedYes,
                KindArg::No => GenKind::PlantedNo,
                KindArg::Random => GenKind::RandomGraph { density },
            };
            cmd_gen(&GenConfig::new(kind, n, m, seed, mask_prob), &output)
        }
        Command::Bench { sizes, engines, trials, seed, out, wall_clock } => {
            let cfg = BenchConfig { sizes, engines: engines.into_iter().map(Into::into).collect(), trials, seed, wall_clock };
            write_out(out.as_deref(), &to_json_lines(&bench_engines(&cfg))).map(|_| 0)
        }
    };
    match res {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            eprintln!("idpp: {msg}");
            code
        }
    }
}

fn cmd_solve(input: &Path, kind: EngineKind, out_completion: Option<&Path>, out_tree: Option<&Path>) -> CmdResult {
    let a = parse_matrix(&read(input)?).map_err(|e| malformed(format!("{}: {e}", input.display())))?;
    match solve(&a, kind) {
        Solution::Yes { completion, tree } => {
            write_out(out_completion, &write_binary(&completion))?;
            write_out(out_tree, &tree.to_string())?;
            Ok(0)
        }
        Solution::No { witness } => {
            eprintln!("no directed perfect phylogeny: this component has no semiuniversal character");
            eprintln!("{witness}");
            Ok(1)
        }
    }
}

fn cmd_verify(matrix: &Path, completion: &Path, tree: &Path) -> CmdResult {
    let a = parse_matrix(&read(matrix)?).map_err(|e| malformed(format!("{}: {e}", matrix.display())))?;
    let b = parse_binary(&read(completion)?).map_err(|e| malformed(format!("{}: {e}", completion.display())))?;
    let t = Phylogeny::parse(&read(tree)?).map_err(|e| malformed(format!("{}: {e}", tree.display())))?;
    let mut ok = true;
    match check_completion(&a, &b) {
        Ok(true) => {}
        Ok(false) => {
            eprintln!("completion disagrees with a known entry of the matrix");
            ok = false;
        }
        Err(e) => return Err(Exit(1, e.to_string())),
    }
    if let Some((x, y)) = laminar_violation(&b) {
        eprintln!("completion is not laminar: columns c{x} and c{y} overlap without nesting");
        ok = false;
    }
    if let Err(v) = tree_explains(&t, &b) {
        eprintln!("tree does not explain the completion: {v}");
        ok = false;
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_gen(cfg: &GenConfig, output: &Path) -> CmdResult {
    let a = generate(cfg).map_err(malformed)?;
    write_out(Some(output), &write_matrix(&a))?;
    Ok(0)
}
