use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ljmse_core::cps::TransKind;
use ljmse_core::reduction::Strategy;
use ljmse_core::spectrum::Calculus;
use ljmse_core::syntax::{Class, Level};

#[derive(Parser, Debug)]
#[command(name = "ljmse", version, about = "Sequent-calculus proof terms and their CPS/CGPS translations")]
pub struct Cli {
    /// File of `key = value` lines giving defaults for flags
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Emit JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Parse an expression and print it back
    Parse(InputArgs),
    /// Infer (or check) the type of an expression
    Check(CheckArgs),
    /// List one-step reducts, or print a reduction trace under a strategy
    Reduce(ReduceArgs),
    /// Print the normal form reached by a strategy
    Normalize(ReduceArgs),
    /// Translate a term into the target lambda-calculus
    Translate(TranslateArgs),
    /// Map an expression between calculi of the spectrum
    Embed(EmbedArgs),
    /// Run property suites on seeded random corpora
    Verify(VerifyArgs),
    /// List critical peaks and whether they join
    Peaks(PeaksArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Inline expression
    #[arg(short = 'e', long = "expr", value_name = "EXPR", conflicts_with = "file")]
    pub expr: Option<String>,

    /// File holding the expression; stdin when neither this nor -e is given
    #[arg(value_name = "FILE")]
    pub file: Option<PathBuf>,

    /// Source calculus
    #[arg(long, value_parser = parse_calculus)]
    pub calculus: Option<Calculus>,

    /// Type level
    #[arg(long, value_enum)]
    pub level: Option<LevelArg>,

    /// Syntactic class; tried in the order term, command, co-term when absent
    #[arg(long, value_enum)]
    pub class: Option<ClassArg>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Typing context, as `x:A, f:A->B`
    #[arg(long, value_name = "CTX")]
    pub ctx: Option<String>,

    /// Type to check against instead of inferring
    #[arg(long = "type", value_name = "TYPE")]
    pub ty: Option<String>,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// `leftmost` or `random:SEED`
    #[arg(long, value_parser = parse_strategy)]
    pub strategy: Option<Strategy>,

    /// Step bound for strategies
    #[arg(long, value_name = "N")]
    pub max_steps: Option<usize>,

    /// Use the lazy π rule of the subsystem calculi
    #[arg(long)]
    pub lazy: bool,
}

#[derive(Args, Debug)]
pub struct TranslateArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Translation
    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<TransKind>,

    /// What to print
    #[arg(long, value_enum)]
    pub emit: Option<Emit>,

    /// Typing context used by `--emit type`
    #[arg(long, value_name = "CTX")]
    pub ctx: Option<String>,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Source calculus (same as --calculus)
    #[arg(long, value_parser = parse_calculus, conflicts_with = "calculus")]
    pub from: Option<Calculus>,

    /// `next` or a calculus name
    #[arg(long, default_value = "next")]
    pub to: String,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite to run
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(ljmse_core::verify::Suite::NAMES))]
    pub suite: Option<String>,

    #[arg(long)]
    pub seed: Option<u64>,

    /// Corpus size
    #[arg(long)]
    pub count: Option<usize>,

    /// Largest generated term
    #[arg(long)]
    pub max_size: Option<usize>,

    /// Write each report to DIR/<suite>/<seed>.json
    #[arg(long, value_name = "DIR")]
    pub golden: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PeaksArgs {
    /// Size of the pools the peaks are drawn from
    #[arg(long)]
    pub depth: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LevelArg {
    Prop,
    Second,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Level {
        match l {
            LevelArg::Prop => Level::Prop,
            LevelArg::Second => Level::Second,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ClassArg {
    Term,
    Coterm,
    Command,
}

impl From<ClassArg> for Class {
    fn from(c: ClassArg) -> Class {
        match c {
            ClassArg::Term => Class::Term,
            ClassArg::Coterm => Class::CoTerm,
            ClassArg::Command => Class::Command,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Term,
    Type,
    Both,
}

pub fn parse_calculus(s: &str) -> Result<Calculus, String> {
    s.parse()
}

pub fn parse_level(s: &str) -> Result<Level, String> {
    match s {
        "prop" => Ok(Level::Prop),
        "second" => Ok(Level::Second),
        _ => Err(format!("unknown level `{s}`")),
    }
}

pub fn parse_strategy(s: &str) -> Result<Strategy, String> {
    match s.split_once(':') {
        None if s == "leftmost" => Ok(Strategy::Leftmost),
        Some(("random", n)) => n
            .parse()
            .map(Strategy::Random)
            .map_err(|_| format!("bad seed in strategy `{s}`")),
        _ => Err(format!("unknown strategy `{s}`; expected leftmost or random:N")),
    }
}

pub fn parse_kind(s: &str) -> Result<TransKind, String> {
    TransKind::ALL
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| {
            let names: Vec<&str> = TransKind::ALL.iter().map(|k| k.as_str()).collect();
            format!("unknown kind `{s}`; expected one of {}", names.join(", "))
        })
}

pub fn parse_emit(s: &str) -> Result<Emit, String> {
    Emit::from_str(s, false)
}
