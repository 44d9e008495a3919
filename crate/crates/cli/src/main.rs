use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use obscheck::checker::{check_reachable, full_report, Model, ReachMode, Report};
use obscheck::fott::{present_regex, Interval};
use obscheck::lts::{load_aut, parse_label_expr, save_aut, to_dot, LabelExpr, Lts, TICK};
use obscheck::mucalc::{eval_mu, parse_mu};
use obscheck::mucompile::{compile_end, compile_visited, default_internal};
use obscheck::pathregex::{oracle_end_states, oracle_visited_states, parse_regex, PathRegex};
use obscheck::timednet::{
    builtin_mouse, builtin_present, builtin_zeno, explore, parse_net, Exploration,
};

/// Observer-based verification of real-time patterns on discrete-time
/// state graphs.
#[derive(Parser)]
#[command(name = "obscheck", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the state graph of a net.
    Gen(GenArgs),
    /// Evaluate a mu-calculus formula on a graph.
    Eval(EvalArgs),
    /// Compile a path expression to a mu-calculus formula.
    Compile(CompileArgs),
    /// End and visited states of a path expression, computed directly.
    Oracle(OracleArgs),
    /// Run the verdicts on a graph.
    Check(CheckArgs),
    /// Render a graph in DOT, optionally highlighting a formula's states.
    Dot(DotArgs),
}

#[derive(Args)]
struct Source {
    /// Graph in Aldebaran `.aut` format.
    #[arg(long, conflicts_with = "model")]
    graph: Option<PathBuf>,
    /// `builtin:present:D1:D2`, `builtin:mouse`, `builtin:zeno` or a `.net` file.
    #[arg(long)]
    model: Option<String>,
}

#[derive(Args)]
struct PatternArgs {
    /// Pattern family; only `present` is known.
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long, default_value = "a")]
    a: String,
    #[arg(long, default_value = "b")]
    b: String,
    #[arg(long, default_value_t = 0)]
    lo: u64,
    /// Upper bound, or `inf`.
    #[arg(long, default_value = "inf")]
    hi: String,
    #[arg(long)]
    lo_open: bool,
    #[arg(long)]
    hi_open: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    model: String,
    /// Write the graph in `.aut` format.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the graph in DOT format.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    formula: String,
    /// Exit 1 unless the formula holds in every state.
    #[arg(long)]
    tautology: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    End,
    Visited,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long)]
    regex: Option<String>,
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long, value_enum, default_value = "visited")]
    mode: Mode,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    regex: Option<String>,
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReachModeArg {
    Source,
    Target,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    source: Source,
    /// Path expression to check instead of a named pattern.
    #[arg(long)]
    regex: Option<String>,
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long, default_value = "error")]
    error_label: String,
    /// Events that must stay reachable; defaults to the pattern's two events and `t`.
    #[arg(long, value_delimiter = ',')]
    events: Option<Vec<String>>,
    /// Label expression of internal steps; defaults to `-(events \/ t)`.
    #[arg(long)]
    internal: Option<String>,
    /// Check that an edge matching this label expression is reachable.
    #[arg(long)]
    reach: Option<String>,
    #[arg(long, value_enum, default_value = "source")]
    reach_mode: ReachModeArg,
    #[arg(long)]
    json: bool,
    /// Include per-check timings in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct DotArgs {
    #[command(flatten)]
    source: Source,
    /// Fill the states satisfying this formula.
    #[arg(long)]
    highlight: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Compile(a) => cmd_compile(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Check(a) => cmd_check(a),
        Command::Dot(a) => cmd_dot(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

enum Loaded {
    Graph(Lts),
    Generated(Box<Exploration>),
}

impl Loaded {
    fn lts(&self) -> &Lts {
        match self {
            Loaded::Graph(g) => g,
            Loaded::Generated(ex) => ex.lts(),
        }
    }

    fn model(&self) -> Model<'_> {
        match self {
            Loaded::Graph(g) => Model::Graph(g),
            Loaded::Generated(ex) => Model::Generated(ex),
        }
    }
}

fn load_model(spec: &str) -> Result<Exploration> {
    let net = match spec.split(':').collect::<Vec<_>>().as_slice() {
        ["builtin", "present", d1, d2] => {
            let d1 = d1.parse().context("bad d1 in builtin:present")?;
            let d2 = d2.parse().context("bad d2 in builtin:present")?;
            builtin_present(d1, d2)?
        }
        ["builtin", "mouse"] => builtin_mouse(),
        ["builtin", "zeno"] => builtin_zeno(),
        ["builtin", ..] => bail!("unknown built-in model `{spec}`"),
        _ => {
            let text = fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
            parse_net(&text).with_context(|| format!("in {spec}"))?
        }
    };
    Ok(explore(&net)?)
}

fn load_source(s: &Source) -> Result<Loaded> {
    match (&s.graph, &s.model) {
        (Some(path), None) => {
            let text = read(path)?;
            let g = load_aut(&text).with_context(|| format!("in {}", path.display()))?;
            Ok(Loaded::Graph(g))
        }
        (None, Some(m)) => Ok(Loaded::Generated(Box::new(load_model(m)?))),
        _ => bail!("give exactly one of --graph or --model"),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

impl PatternArgs {
    fn interval(&self) -> Result<Interval> {
        let upper = match self.hi.as_str() {
            "inf" | "w" => None,
            n => Some(n.parse().with_context(|| format!("bad --hi `{n}`"))?),
        };
        Ok(Interval::new(self.lo, self.lo_open, upper, self.hi_open))
    }

    fn regex(&self) -> Result<Option<PathRegex>> {
        match self.pattern.as_deref() {
            None => Ok(None),
            Some("present") => Ok(Some(present_regex(&self.a, &self.b, &self.interval()?)?)),
            Some(other) => bail!("unknown pattern `{other}`; only `present` is supported"),
        }
    }
}

fn pick_regex(regex: &Option<String>, pattern: &PatternArgs) -> Result<Option<PathRegex>> {
    match (regex, pattern.regex()?) {
        (Some(_), Some(_)) => bail!("give either --regex or --pattern, not both"),
        (Some(text), None) => Ok(Some(parse_regex(text)?)),
        (None, r) => Ok(r),
    }
}

fn cmd_gen(a: GenArgs) -> Result<ExitCode> {
    let ex = load_model(&a.model)?;
    let g = ex.lts();
    if let Some(p) = &a.out {
        write(p, &save_aut(g))?;
    }
    if let Some(p) = &a.dot {
        write(p, &to_dot(g, None))?;
    }
    if a.json {
        let doc = json!({
            "states": g.num_states(),
            "transitions": g.num_transitions(),
            "labels": g.labels(),
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("states: {}", g.num_states());
        println!("transitions: {}", g.num_transitions());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(a: EvalArgs) -> Result<ExitCode> {
    let src = load_source(&a.source)?;
    let f = parse_mu(&a.formula)?;
    let s = eval_mu(src.lts(), &f)?;
    let everywhere = s.is_full();
    if a.json {
        let doc = json!({ "states": s, "count": s.len(), "holdsEverywhere": everywhere });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("{s}");
        println!("count: {} of {}", s.len(), src.lts().num_states());
    }
    Ok(if a.tautology && !everywhere {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_compile(a: CompileArgs) -> Result<ExitCode> {
    let Some(r) = pick_regex(&a.regex, &a.pattern)? else {
        bail!("give --regex or --pattern");
    };
    let f = match a.mode {
        Mode::End => compile_end(&r),
        Mode::Visited => compile_visited(&r),
    };
    println!("{f}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(a: OracleArgs) -> Result<ExitCode> {
    let Some(r) = pick_regex(&a.regex, &a.pattern)? else {
        bail!("give --regex or --pattern");
    };
    let src = load_source(&a.source)?;
    let end = oracle_end_states(src.lts(), &r);
    let visited = oracle_visited_states(src.lts(), &r);
    if a.json {
        let doc = json!({ "end": end, "visited": visited });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("end: {end}");
        println!("visited: {visited}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(a: CheckArgs) -> Result<ExitCode> {
    let src = load_source(&a.source)?;
    let regex = pick_regex(&a.regex, &a.pattern)?;
    if regex.is_none() && a.reach.is_none() {
        bail!("nothing to check: give --pattern, --regex or --reach");
    }
    let mut report = Report::default();
    if let Some(r) = &regex {
        let events: Vec<LabelExpr> = match &a.events {
            Some(list) => list
                .iter()
                .map(|e| parse_label_expr(e.trim()))
                .collect::<Result<_, _>>()?,
            None => [a.pattern.a.as_str(), a.pattern.b.as_str(), TICK]
                .map(LabelExpr::atom)
                .to_vec(),
        };
        let internal = match &a.internal {
            Some(text) => parse_label_expr(text)?,
            None => default_internal(&events),
        };
        report = full_report(src.model(), r, &a.error_label, &events, &internal)?;
    }
    if let Some(target) = &a.reach {
        let mode = match a.reach_mode {
            ReachModeArg::Source => ReachMode::Source,
            ReachModeArg::Target => ReachMode::Target,
        };
        let r = check_reachable(src.lts(), &parse_label_expr(target)?, mode);
        report.verdicts.extend(r.verdicts);
        report.timings.extend(r.timings);
    }
    let ok = report.holds();
    if !a.timings {
        report = report.without_timings();
    }
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.render());
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_dot(a: DotArgs) -> Result<ExitCode> {
    let src = load_source(&a.source)?;
    let highlight = match &a.highlight {
        Some(text) => Some(eval_mu(src.lts(), &parse_mu(text)?)?),
        None => None,
    };
    let dot = to_dot(src.lts(), highlight.as_ref());
    match &a.out {
        Some(p) => write(p, &dot)?,
        None => print!("{dot}"),
    }
    Ok(ExitCode::SUCCESS)
}
