//! Command-line surface. [`run`] does all the work and returns the exit code
//! with the text to print, so the binary stays a thin wrapper.
//!
//! Exit codes: 0 found/true, 1 none/false, 2 error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classic::u_optimal;
use crate::error::{Error, Result};
use crate::generators::{gen_cyclic_latin, gen_example2, gen_example3, gen_random};
use crate::io::{parse_matching, parse_profile, serialize_profile};
use crate::matching::{blocking_pairs, egalitarian_cost, BlockingPair, Matching};
use crate::near::{
    global_stabilization_cost, local_instability, solve_global_near, solve_local_near, tradeoff_curve,
    witness_profile_local, TradeoffValue,
};
use crate::oracle::{brute_global_cost, brute_is_d_robust, brute_local_bound, brute_solve_near, enumerate_stable_bf};
use crate::profile::{AgentId, Profile, SwapDistance, SwapOp};
use crate::query::{AnalysisQuery, Mode, Objective};
use crate::robust::{find_d_robust_optimal, is_d_robust};
use crate::rotation::rotation_digraph;

/// What a command produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(found: bool, stdout: String) -> Self {
        Outcome { code: if found { 0 } else { 1 }, stdout, stderr: String::new() }
    }

    fn error(msg: String) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: msg }
    }
}

#[derive(Parser, Debug)]
#[command(name = "stabmatch", version, about = "Robust and nearly stable matchings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a property of a matching.
    Check(CheckArgs),
    /// Search for a matching.
    Solve(SolveArgs),
    /// List rotations and their precedence digraph.
    Rotations {
        #[arg(long)]
        profile: PathBuf,
        /// Write the DOT digraph here instead of stdout.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Best value for every budget from 0 to --max-d.
    Tradeoff {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        max_d: usize,
        #[arg(long)]
        objective: String,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print a generated profile.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        density: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// The check and solve commands answered by exhaustive search.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    Check(CheckArgs),
    Solve(SolveArgs),
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(value_enum)]
    kind: CheckKind,
    #[arg(long)]
    profile: PathBuf,
    #[arg(long)]
    matching: PathBuf,
    #[arg(long)]
    d: Option<usize>,
    /// Include the full witness profile.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(value_enum)]
    kind: SolveKind,
    #[arg(long)]
    profile: PathBuf,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value = "any")]
    objective: String,
    #[arg(long)]
    eta: Option<u64>,
    #[arg(long)]
    verbose: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckKind {
    Stable,
    Robust,
    Local,
    Global,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolveKind {
    Robust,
    GlobalNear,
    LocalNear,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Global,
    Local,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Example2,
    Example3,
    Cyclic,
    Random,
}

/// Parses `args` (without the program name) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv = std::iter::once("stabmatch".to_string()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(true, e.to_string()),
                _ => Outcome::error(e.to_string()),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(o) => o,
        Err(e) => Outcome::error(format!("error: {e}\n")),
    }
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Check(a) => check(&a, false),
        Command::Solve(a) => solve(&a, false),
        Command::Oracle { command: OracleCommand::Check(a) } => check(&a, true),
        Command::Oracle { command: OracleCommand::Solve(a) } => solve(&a, true),
        Command::Rotations { profile, dot } => rotations(&profile, dot.as_deref()),
        Command::Tradeoff { profile, mode, max_d, objective, csv } => {
            let p = load_profile(&profile)?;
            let objective = AnalysisQuery::objective_from(&objective, None)?;
            if objective == Objective::Any {
                return Err(Error::InvalidInput("tradeoff needs --objective egalitarian or perfect".into()));
            }
            let mode = match mode {
                ModeArg::Global => Mode::Global,
                ModeArg::Local => Mode::Local,
            };
            let mut text = String::from("d,value\n");
            for (d, v) in tradeoff_curve(&p, mode, max_d, objective)? {
                let v = match v {
                    TradeoffValue::Cost(Some(c)) => c.to_string(),
                    TradeoffValue::Cost(None) => "none".into(),
                    TradeoffValue::Feasible(b) => b.to_string(),
                };
                text.push_str(&format!("{d},{v}\n"));
            }
            match csv {
                Some(path) => {
                    write_file(&path, &text)?;
                    Ok(Outcome::ok(true, String::new()))
                }
                None => Ok(Outcome::ok(true, text)),
            }
        }
        Command::Gen { family, n, density, seed } => {
            let need_n = || n.ok_or_else(|| Error::InvalidInput("--n is required for this family".into()));
            let p = match family {
                Family::Example2 => gen_example2(need_n()?)?,
                Family::Example3 => gen_example3(),
                Family::Cyclic => gen_cyclic_latin(need_n()?)?,
                Family::Random => {
                    let n = need_n()?;
                    gen_random(n, n, density.unwrap_or(0.5), seed.unwrap_or(0))?
                }
            };
            Ok(Outcome::ok(true, serialize_profile(&p)))
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn load_profile(path: &Path) -> Result<Profile> {
    parse_profile(&read_file(path)?).map_err(|e| annotate(path, e))
}

fn annotate(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse(_) => Error::InvalidInput(format!("{}: {e}", path.display())),
        other => other,
    }
}

fn pairs_json(p: &Profile, m: &Matching) -> Value {
    m.pairs().map(|(u, w)| json!([p.name(AgentId::u(u)), p.name(AgentId::w(w))])).collect()
}

fn blocking_json(p: &Profile, bps: &[BlockingPair]) -> Value {
    bps.iter().map(|b| json!([p.name(AgentId::u(b.u)), p.name(AgentId::w(b.w))])).collect()
}

fn swaps_json(p: &Profile, swaps: &[SwapOp]) -> Value {
    swaps
        .iter()
        .map(|s| {
            let other = s.owner.side.other();
            let name = |i: usize| p.name(AgentId { side: other, index: i });
            json!({ "agent": p.name(s.owner), "pair": [name(s.pair[0]), name(s.pair[1])] })
        })
        .collect()
}

fn distance_json(d: SwapDistance) -> Value {
    match d {
        SwapDistance::Finite(v) => json!(v),
        SwapDistance::Infinite => json!("inf"),
    }
}

fn report(found: bool, v: Value) -> Outcome {
    Outcome::ok(found, format!("{}\n", serde_json::to_string_pretty(&v).expect("json values serialize")))
}

fn check(a: &CheckArgs, brute: bool) -> Result<Outcome> {
    let p = load_profile(&a.profile)?;
    let m = parse_matching(&read_file(&a.matching)?, &p).map_err(|e| annotate(&a.matching, e))?;
    let bps = blocking_pairs(&p, &m)?;
    let mut out = json!({
        "matching": pairs_json(&p, &m),
        "cost": egalitarian_cost(&p, &m)?,
        "blocking_pairs": blocking_json(&p, &bps),
    });
    let result = match a.kind {
        CheckKind::Stable => bps.is_empty(),
        CheckKind::Robust => {
            let d = a.d.ok_or_else(|| Error::InvalidInput("check robust needs --d".into()))?;
            if brute {
                brute_is_d_robust(&p, &m, d)?
            } else {
                let r = is_d_robust(&p, &m, d)?;
                if let Some(w) = &r.witness {
                    out["witness_swaps"] = swaps_json(&p, &w.swaps);
                    out["witness_blocking_pair"] = blocking_json(&p, &[w.blocking_pair]);
                    if a.verbose {
                        out["witness_profile"] = json!(serialize_profile(&w.profile));
                    }
                }
                r.robust
            }
        }
        CheckKind::Local => {
            let bound = if brute {
                let max = a.d.unwrap_or_else(|| p.max_list_len());
                brute_local_bound(&p, &m, max)?.map_or(SwapDistance::Infinite, |b| SwapDistance::Finite(b as u64))
            } else {
                local_instability(&p, &m)?
            };
            out["bound"] = distance_json(bound);
            if let (false, SwapDistance::Finite(b)) = (brute, bound) {
                let (w, swaps) = witness_profile_local(&p, &m, b as usize)?;
                out["witness_swaps"] = swaps_json(&p, &swaps);
                if a.verbose {
                    out["witness_profile"] = json!(serialize_profile(&w));
                }
            }
            within(bound, a.d)
        }
        CheckKind::Global => {
            let cost = if brute {
                let max = a.d.unwrap_or(3);
                brute_global_cost(&p, &m, max)?.map_or(SwapDistance::Infinite, |c| SwapDistance::Finite(c as u64))
            } else {
                let g = global_stabilization_cost(&p, &m)?;
                out["witness_swaps"] = swaps_json(&p, &g.swaps);
                if let (true, Some(w)) = (a.verbose, &g.witness) {
                    out["witness_profile"] = json!(serialize_profile(w));
                }
                g.cost
            };
            out["bound"] = distance_json(cost);
            within(cost, a.d)
        }
    };
    out["result"] = json!(result);
    Ok(report(result, out))
}

/// With a budget, whether the value fits it; without, whether it is finite.
fn within(v: SwapDistance, d: Option<usize>) -> bool {
    match d {
        Some(d) => v <= SwapDistance::Finite(d as u64),
        None => v.is_finite(),
    }
}

fn solve(a: &SolveArgs, brute: bool) -> Result<Outcome> {
    let p = load_profile(&a.profile)?;
    let objective = AnalysisQuery::objective_from(&a.objective, a.eta)?;
    let mut out = json!({});
    let found = match a.kind {
        SolveKind::Robust if brute => brute_robust(&p, a.d, objective)?,
        SolveKind::Robust => find_d_robust_optimal(&p, a.d, objective)?,
        SolveKind::GlobalNear | SolveKind::LocalNear => {
            if objective == Objective::Any {
                return Err(Error::InvalidInput("near-stable solving needs --objective perfect or egalitarian".into()));
            }
            let mode = if matches!(a.kind, SolveKind::GlobalNear) { Mode::Global } else { Mode::Local };
            if brute {
                brute_solve_near(&p, a.d, mode, objective)?
            } else if mode == Mode::Global {
                solve_global_near(&p, a.d, objective)?.map(|s| {
                    out["witness_swaps"] = swaps_json(&p, &s.swaps);
                    if a.verbose {
                        out["witness_profile"] = json!(serialize_profile(&s.witness));
                    }
                    s.matching
                })
            } else {
                let m = solve_local_near(&p, a.d, objective)?;
                if let Some(m) = &m {
                    let (w, swaps) = witness_profile_local(&p, m, a.d)?;
                    out["witness_swaps"] = swaps_json(&p, &swaps);
                    if a.verbose {
                        out["witness_profile"] = json!(serialize_profile(&w));
                    }
                }
                m
            }
        }
    };
    out["result"] = json!(found.is_some());
    match &found {
        Some(m) => {
            out["matching"] = pairs_json(&p, m);
            out["cost"] = json!(egalitarian_cost(&p, m)?);
        }
        None => out["matching"] = json!("none"),
    }
    Ok(report(found.is_some(), out))
}

/// Exhaustive robust search: filter stable matchings by the profile-ball check.
fn brute_robust(p: &Profile, d: usize, objective: Objective) -> Result<Option<Matching>> {
    let mut best: Option<(u64, Matching)> = None;
    for m in enumerate_stable_bf(p)? {
        if !brute_is_d_robust(p, &m, d)? {
            continue;
        }
        let keep = match objective {
            Objective::Any => true,
            Objective::Perfect => m.unmatched().is_empty(),
            Objective::Egalitarian { eta } => eta.is_none_or(|h| egalitarian_cost(p, &m).unwrap_or(u64::MAX) <= h),
        };
        if !keep {
            continue;
        }
        let c = egalitarian_cost(p, &m)?;
        if !matches!(objective, Objective::Egalitarian { .. }) {
            return Ok(Some(m));
        }
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, m));
        }
    }
    Ok(best.map(|(_, m)| m))
}

fn rotations(path: &Path, dot: Option<&Path>) -> Result<Outcome> {
    let p = load_profile(path)?;
    let d = rotation_digraph(&p);
    let mut text = String::new();
    for (i, r) in d.rotations().iter().enumerate() {
        text.push_str(&format!("r{i} {}\n", r.display(&p)));
    }
    for &(a, b) in d.arcs() {
        text.push_str(&format!("r{a} -> r{b}\n"));
    }
    match dot {
        Some(out) => write_file(out, &d.to_dot(&p))?,
        None => text.push_str(&d.to_dot(&p)),
    }
    debug_assert_eq!(d.u_optimal(), &u_optimal(&p));
    Ok(Outcome::ok(true, text))
}
