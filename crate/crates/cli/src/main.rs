//! `dorfman`: check, construct and emit Lie 2-algebroid data stored as JSON.
//!
//! Exit status: 0 on pass, 1 on a failed check or constructor precondition,
//! 2 on unreadable input, schema errors and unknown names.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dorfman_core::corpus::{self, broken, dirac_pair, examples, modes, run_check};
use dorfman_core::courant::{adjoint_dorfman2rep, core_courant, induced_lie_algebroid_on_u, manin_pair, semidirect_dorfman2rep, standard_dorfman2rep};
use dorfman_core::error::Error;
use dorfman_core::lie2::{change_splitting, dorfman_from_split, form2_groups, split_from_dorfman};
use dorfman_core::matched::{bicrossproduct, change_splitting_la_pair, decompose_bicrossproduct, LAPair};
use dorfman_core::bundle::dualize_two_rep;
use dorfman_core::report::{CheckReport, DEFAULT_SEED};
use dorfman_core::schema::{DiracFile, Structure, StructureFile};
use dorfman_core::tensor::PolyTensor;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "dorfman", version, about = "Exact checks and constructions for Lie 2-algebroids, matched pairs and Courant algebroids")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a checker on a structure file.
    Check {
        path: PathBuf,
        /// Checker to run; defaults to the designated checker of the file's kind.
        #[arg(long)]
        mode: Option<String>,
        /// Second file completing a pair (a self-dual 2-representation for a Dorfman 2-representation or Dirac file).
        #[arg(long)]
        with: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, env = "DORFMAN_FORMAT", default_value = "text")]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a structure from an input file.
    Construct {
        recipe: Recipe,
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// change-splitting: a form2 file, or `zero`.
        #[arg(long)]
        phi: Option<String>,
        /// adjoint: a connection file holding a metric `TM`-connection.
        #[arg(long)]
        nabla: Option<PathBuf>,
        /// decompose: number of leading frame sections spanning `A`.
        #[arg(long)]
        ra: Option<usize>,
        /// standard: rank of `E`.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Print a named example, or list the names.
    Example {
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write every example and counterexample under a directory.
    Corpus { dir: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Recipe {
    DorfmanFromSplit,
    SplitFromDorfman,
    Bicrossproduct,
    Decompose,
    CoreCourant,
    Adjoint,
    Standard,
    Semidirect,
    ChangeSplitting,
    ManinPair,
    #[value(name = "dualize-2rep")]
    Dualize2Rep,
    InducedLa,
}

enum Failure {
    /// Exit 1.
    Check(String),
    /// Exit 2.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Dimension(_) => Failure::Input(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Check { path, mode, with, seed, format, out } => cmd_check(&path, mode.as_deref(), with.as_deref(), seed, format, out.as_deref()),
        Cmd::Construct { recipe, input, out, phi, nabla, ra, rank, seed } => {
            let opts = ConstructOpts { phi, nabla, ra, rank, seed };
            cmd_construct(recipe, &input, &opts, out.as_deref())
        }
        Cmd::Example { name, out } => cmd_example(name.as_deref(), out.as_deref()),
        Cmd::Corpus { dir } => cmd_corpus(&dir),
    };
    match res {
        Ok(code) => code,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<(Vec<u8>, StructureFile), Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::Input(format!("{}: not UTF-8", path.display())))?;
    let file = StructureFile::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok((bytes, file))
}

fn write(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sha256(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Merges a second file into the first to form the structure a pair check needs.
fn combine(first: StructureFile, second: StructureFile) -> Result<StructureFile, Failure> {
    if first.nvars != second.nvars {
        return Err(Failure::Input(format!("base dimensions differ: {} and {}", first.nvars, second.nvars)));
    }
    let nvars = first.nvars;
    let name = first.name.clone();
    let structure = match (first.structure, second.structure) {
        (Structure::Dorfman2Rep(dorfman), Structure::SelfDual2Rep(selfdual)) | (Structure::SelfDual2Rep(selfdual), Structure::Dorfman2Rep(dorfman)) => {
            Structure::LAPair(LAPair { selfdual, dorfman })
        }
        (Structure::Dirac(d), Structure::SelfDual2Rep(s)) if d.selfdual.is_none() => Structure::Dirac(DiracFile { selfdual: Some(s), ..d }),
        (a, b) => return Err(Failure::Input(format!("cannot pair a {} file with a {} file", a.kind(), b.kind()))),
    };
    Ok(StructureFile { name, nvars, structure })
}

fn report_document(file: &StructureFile, mode: &str, digests: &[String], rep: &CheckReport) -> Value {
    json!({
        "tool": format!("dorfman {}", env!("CARGO_PKG_VERSION")),
        "input_sha256": digests,
        "kind": file.structure.kind(),
        "name": file.name,
        "mode": mode,
        "seed": rep.seed,
        "title": rep.title,
        "entries": rep.entries,
        "verdict": if rep.pass() { "pass" } else { "fail" },
    })
}

fn cmd_check(path: &Path, mode: Option<&str>, with: Option<&Path>, seed: u64, format: Format, out: Option<&Path>) -> Outcome {
    let (bytes, mut file) = read(path)?;
    let mut digests = vec![sha256(&bytes)];
    if let Some(p) = with {
        let (b2, f2) = read(p)?;
        digests.push(sha256(&b2));
        file = combine(file, f2)?;
    }
    let rep = run_check(&file, mode, seed)?;
    let mode = mode.unwrap_or_else(|| modes(file.structure.kind())[0]);
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report_document(&file, mode, &digests, &rep)).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let name = file.name.as_deref().unwrap_or("-");
            format!("dorfman {}: {} {name}, mode {mode}, input sha256 {}\n{rep}\n", env!("CARGO_PKG_VERSION"), file.structure.kind(), digests.join(" "))
        }
    };
    write(out, &text)?;
    Ok(if rep.pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

struct ConstructOpts {
    phi: Option<String>,
    nabla: Option<PathBuf>,
    ra: Option<usize>,
    rank: Option<usize>,
    seed: u64,
}

fn wrong_kind(recipe: &str, got: &Structure) -> Failure {
    Failure::Input(format!("{recipe} does not take a {} file", got.kind()))
}

fn required<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Input(format!("missing --{flag}")))
}

fn load_phi(opts: &ConstructOpts, nvars: usize, rq: usize, rb: usize) -> Result<PolyTensor, Failure> {
    match opts.phi.as_deref() {
        None => Err(Failure::Input("missing --phi".into())),
        Some("zero") => Ok(PolyTensor::zeros(nvars, form2_groups(rq, rb))),
        Some(p) => match read(Path::new(p))?.1.structure {
            Structure::Form2(t) => Ok(t),
            s => Err(Failure::Input(format!("--phi expects a form2 file, got {}", s.kind()))),
        },
    }
}

fn construct(recipe: Recipe, input: &StructureFile, opts: &ConstructOpts) -> Result<Structure, Failure> {
    let seed = opts.seed;
    let name = recipe.to_possible_value().expect("no skipped variants").get_name().to_string();
    let s = &input.structure;
    Ok(match (recipe, s) {
        (Recipe::DorfmanFromSplit, Structure::SplitLie2(x)) => Structure::Dorfman2Rep(dorfman_from_split(x)?),
        (Recipe::SplitFromDorfman, Structure::Dorfman2Rep(x)) => Structure::SplitLie2(split_from_dorfman(x)?),
        (Recipe::Bicrossproduct, Structure::Matched2Reps(x)) => Structure::SplitLie2(bicrossproduct(x, seed)?),
        (Recipe::Decompose, Structure::SplitLie2(x)) => Structure::Matched2Reps(decompose_bicrossproduct(x, required(opts.ra, "ra")?)?),
        (Recipe::Decompose, Structure::Dorfman2Rep(x)) => Structure::Matched2Reps(decompose_bicrossproduct(&split_from_dorfman(x)?, required(opts.ra, "ra")?)?),
        (Recipe::CoreCourant, Structure::LAPair(x)) => Structure::Courant(core_courant(x, seed)?),
        (Recipe::Adjoint, Structure::Courant(c)) => {
            let path = opts.nabla.as_deref().ok_or_else(|| Failure::Input("missing --nabla".into()))?;
            let nabla = match read(path)?.1.structure {
                Structure::Connection(n) => n,
                s => return Err(Failure::Input(format!("--nabla expects a connection file, got {}", s.kind()))),
            };
            Structure::Dorfman2Rep(adjoint_dorfman2rep(c, &nabla, seed)?)
        }
        (Recipe::Standard, Structure::DullBracket(b)) => Structure::Dorfman2Rep(standard_dorfman2rep(required(opts.rank, "rank")?, b)?),
        (Recipe::Semidirect, Structure::TwoRep(t)) => Structure::Dorfman2Rep(semidirect_dorfman2rep(t, seed)?),
        (Recipe::ChangeSplitting, Structure::Dorfman2Rep(d)) => Structure::Dorfman2Rep(change_splitting(d, &load_phi(opts, input.nvars, d.rq(), d.rb())?)?),
        (Recipe::ChangeSplitting, Structure::SplitLie2(x)) => {
            let d = dorfman_from_split(x)?;
            let phi = load_phi(opts, input.nvars, d.rq(), d.rb())?;
            Structure::SplitLie2(split_from_dorfman(&change_splitting(&d, &phi)?)?)
        }
        (Recipe::ChangeSplitting, Structure::LAPair(p)) => {
            let phi = load_phi(opts, input.nvars, p.dorfman.rq(), p.dorfman.rb())?;
            Structure::LAPair(change_splitting_la_pair(p, &phi)?)
        }
        (Recipe::ManinPair, Structure::Dirac(d)) => Structure::Courant(manin_pair(&dirac_pair(d)?, &d.data, seed)?.courant),
        (Recipe::Dualize2Rep, Structure::TwoRep(t)) => Structure::TwoRep(dualize_two_rep(t, seed)?),
        (Recipe::InducedLa, Structure::Dirac(d)) => Structure::LieAlgebroid(induced_lie_algebroid_on_u(&d.dorfman, &d.data, seed)?),
        _ => return Err(wrong_kind(&name, s)),
    })
}

fn cmd_construct(recipe: Recipe, input: &Path, opts: &ConstructOpts, out: Option<&Path>) -> Outcome {
    let (_, file) = read(input)?;
    let structure = construct(recipe, &file, opts)?;
    let recipe_name = recipe.to_possible_value().expect("no skipped variants").get_name().to_string();
    let name = format!("{}.{recipe_name}", file.name.as_deref().unwrap_or("input"));
    let built = StructureFile { name: Some(name), nvars: file.nvars, structure };
    // the output must pass its own designated checker
    if !modes(built.structure.kind()).is_empty() {
        let rep = run_check(&built, None, opts.seed)?;
        if !rep.pass() {
            return Err(Failure::Check(format!("constructed structure fails its checker: {}\n{rep}", rep.failed_labels().join(", "))));
        }
    }
    write(out, &built.to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_example(name: Option<&str>, out: Option<&Path>) -> Outcome {
    let names = corpus::example_names().join("\n");
    match name {
        None => {
            println!("{names}");
            Ok(ExitCode::SUCCESS)
        }
        Some(n) => {
            let file = corpus::example(n).ok_or_else(|| Failure::Input(format!("unknown example {n:?}; available:\n{names}")))?;
            write(out, &file.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_corpus(dir: &Path) -> Outcome {
    let io = |e: std::io::Error| Failure::Input(format!("{}: {e}", dir.display()));
    let (ex, br) = (dir.join("examples"), dir.join("broken"));
    fs::create_dir_all(&ex).map_err(io)?;
    fs::create_dir_all(&br).map_err(io)?;
    for f in examples() {
        let name = f.name.clone().expect("examples are named");
        fs::write(ex.join(format!("{name}.json")), f.to_json()).map_err(io)?;
    }
    let mut manifest = serde_json::Map::new();
    for b in broken() {
        let name = b.file.name.clone().expect("counterexamples are named");
        fs::write(br.join(format!("{name}.json")), b.file.to_json()).map_err(io)?;
        manifest.insert(name, json!({ "label": b.label, "also": b.also }));
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(manifest)).expect("manifest serializes");
    text.push('\n');
    fs::write(br.join("advertised.json"), text).map_err(io)?;
    Ok(ExitCode::SUCCESS)
}
