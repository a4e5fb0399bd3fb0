use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdiff_core::ideal::{LetterOrder, Rewriter, RuleMode};
use qdiff_core::verify::{self, Suite, VerifyOptions};
use qdiff_core::{
    diff_n, parse_expression, render, Bounds, CalculusContext, Error, IdealContext, MembershipStatus, MembershipVerdict,
    OutputFormat, Preset, SessionConfig, TensorElement,
};
use serde_json::json;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "qdiff", version, about = "Exact computations with the ternary q-differential d (d^3 = 0)")]
struct Cli {
    #[command(flatten)]
    session: SessionArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SessionArgs {
    /// JSON session document
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// commutative, scalar-twist or constant; overrides the config's xi
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Scalar parameter for the preset, e.g. "q" or "1/2 + q"
    #[arg(long, global = true)]
    preset_param: Option<String>,
    /// Number of generators when no config is given
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    format: Option<Fmt>,
    #[arg(long, global = true)]
    grade_bound: Option<usize>,
    #[arg(long, global = true)]
    word_bound: Option<usize>,
    #[arg(long, global = true)]
    size_cap: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Text,
    Latex,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Asc,
    Desc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rules {
    Raw,
    Interreduced,
}

#[derive(Subcommand)]
enum Command {
    /// Apply d once, twice or three times
    Diff {
        #[arg(short = 'k', default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
        k: u8,
        /// Also decide whether the result lies in I_q
        #[arg(long)]
        mod_ideal: bool,
        expr: String,
    },
    /// Rewrite modulo I_q (linear xi only)
    Reduce {
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long)]
        order: Option<Order>,
        #[arg(long)]
        rules: Option<Rules>,
        expr: String,
    },
    /// Decide membership in I_q within the bounds
    Member { expr: String },
    /// Run verification suites
    Verify {
        /// Comma-separated suite names or "all"
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 2)]
        word_length: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Write the report here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
        /// Include wall-clock timings (makes the report nondeterministic)
        #[arg(long)]
        timings: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::StepBudgetExhausted(_) | Error::BoundExceeded { .. } => EXIT_INCONCLUSIVE,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

struct Session {
    config: SessionConfig,
    ideal: IdealContext,
}

impl Session {
    fn ctx(&self) -> &CalculusContext {
        self.ideal.calculus()
    }

    fn bounds(&self) -> Bounds {
        self.config.bounds.membership_bounds()
    }

    fn parse(&self, src: &str) -> Result<TensorElement, Failure> {
        Ok(parse_expression(src, self.ctx())?)
    }
}

fn load_session(args: &SessionArgs) -> Result<Session, Failure> {
    let mut config = match &args.config {
        Some(path) => {
            let src = fs::read_to_string(path)
                .map_err(|e| Failure { code: EXIT_USAGE, message: format!("cannot read {}: {e}", path.display()) })?;
            SessionConfig::from_json(&src)?
        }
        None => SessionConfig::from_preset(Preset::Commutative, args.n.unwrap_or(2)),
    };
    if let Some(p) = &args.preset {
        config.preset = Some(p.parse()?);
    }
    if let Some(p) = &args.preset_param {
        config.preset_param = Some(p.clone());
    }
    if let Some(n) = args.n {
        config.n = n;
    }
    if let Some(f) = args.format {
        config.format = match f {
            Fmt::Text => OutputFormat::Text,
            Fmt::Latex => OutputFormat::Latex,
            Fmt::Json => OutputFormat::Json,
        };
    }
    if args.grade_bound.is_some() {
        config.bounds.grade_bound = args.grade_bound;
    }
    if args.word_bound.is_some() {
        config.bounds.word_bound = args.word_bound;
    }
    if let Some(c) = args.size_cap {
        config.bounds.size_cap = c;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    let xi = config.build_xi()?;
    let ideal = IdealContext::new(Arc::new(CalculusContext::new(xi)));
    Ok(Session { config, ideal })
}

fn show(t: &TensorElement, format: OutputFormat) -> String {
    match format {
        OutputFormat::Latex => render::latex(t),
        _ => render::text(t),
    }
}

fn verdict_line(v: &MembershipVerdict) -> String {
    match v.status {
        MembershipStatus::Member => "member of I_q".to_string(),
        MembershipStatus::NotMemberAtBound => {
            format!("not a member of I_q at grade bound {}, word bound {}", v.grade_bound, v.word_bound)
        }
        MembershipStatus::BoundExceeded => format!("inconclusive: spanning set of {} elements exceeds the size cap", v.spanning_size),
    }
}

fn verdict_code(v: &MembershipVerdict) -> u8 {
    match v.status {
        MembershipStatus::Member => 0,
        MembershipStatus::NotMemberAtBound => EXIT_FAILURE,
        MembershipStatus::BoundExceeded => EXIT_INCONCLUSIVE,
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value"));
}

fn cmd_diff(s: &Session, k: u8, mod_ideal: bool, expr: &str) -> Result<u8, Failure> {
    let e = s.parse(expr)?;
    let d = diff_n(s.ctx(), &e, k as usize);
    let verdict = if mod_ideal { Some(s.ideal.membership(&d, &s.bounds())?) } else { None };
    match s.config.format {
        OutputFormat::Json => print_json(&json!({
            "input": render::text(&e),
            "k": k,
            "result": render::json(&d),
            "membership": verdict,
        })),
        format => {
            println!("{}", show(&d, format));
            if let Some(v) = &verdict {
                println!("{}", verdict_line(v));
            }
        }
    }
    Ok(verdict.as_ref().map_or(0, verdict_code))
}

fn cmd_reduce(s: &Session, max_steps: Option<usize>, order: Option<Order>, rules: Option<Rules>, expr: &str) -> Result<u8, Failure> {
    let e = s.parse(expr)?;
    let order = match order {
        Some(Order::Asc) => LetterOrder::Ascending,
        Some(Order::Desc) => LetterOrder::Descending,
        None => s.config.letter_order,
    };
    let mode = match rules {
        Some(Rules::Raw) => RuleMode::Raw,
        Some(Rules::Interreduced) => RuleMode::Interreduced,
        None => s.config.rule_mode,
    };
    let rw = Rewriter::new(&s.ideal, mode, order)?;
    let (r, steps) = rw.reduce_counting(&e, max_steps.unwrap_or(s.config.bounds.max_steps))?;
    match s.config.format {
        OutputFormat::Json => print_json(&json!({"input": render::text(&e), "result": render::json(&r), "steps": steps})),
        format => println!("{}", show(&r, format)),
    }
    Ok(0)
}

fn cmd_member(s: &Session, expr: &str) -> Result<u8, Failure> {
    let e = s.parse(expr)?;
    let v = s.ideal.membership(&e, &s.bounds())?;
    match s.config.format {
        OutputFormat::Json => print_json(&json!({"input": render::text(&e), "verdict": v})),
        _ => {
            println!("{}", verdict_line(&v));
            for t in &v.witness {
                println!(
                    "  {} * {} * {} * {}",
                    t.coefficient,
                    render::text(&t.left_monomial()),
                    t.generator,
                    render::text(&t.right_monomial())
                );
            }
        }
    }
    Ok(verdict_code(&v))
}

fn cmd_verify(s: &Session, suite: &str, word_length: usize, samples: usize, output: Option<&PathBuf>, timings: bool) -> Result<u8, Failure> {
    let opts = VerifyOptions {
        suites: Suite::parse_list(suite)?,
        bounds: s.bounds(),
        word_length,
        samples,
        seed: s.config.seed,
        timings,
    };
    let report = verify::run(&s.ideal, &s.config.label(), &opts);
    let text = match s.config.format {
        OutputFormat::Json => report.to_json() + "\n",
        _ => report.to_text(),
    };
    match output {
        Some(path) => fs::write(path, &text)
            .map_err(|e| Failure { code: EXIT_USAGE, message: format!("cannot write {}: {e}", path.display()) })?,
        None => print!("{text}"),
    }
    Ok(if report.failed() {
        EXIT_FAILURE
    } else if report.inconclusive() {
        EXIT_INCONCLUSIVE
    } else {
        0
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let s = load_session(&cli.session)?;
    match &cli.command {
        Command::Diff { k, mod_ideal, expr } => cmd_diff(&s, *k, *mod_ideal, expr),
        Command::Reduce { max_steps, order, rules, expr } => cmd_reduce(&s, *max_steps, *order, *rules, expr),
        Command::Member { expr } => cmd_member(&s, expr),
        Command::Verify { suite, word_length, samples, output, timings } => {
            cmd_verify(&s, suite, *word_length, *samples, output.as_ref(), *timings)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
