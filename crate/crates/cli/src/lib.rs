// Copyright (c) 2026 The rdarp developers.
//
// Permission is hereby granted, free of charge, to any person obtaining
// a copy of this software and associated documentation files (the
// "Software"), to deal in the Software without restriction, including
// without limitation the rights to use, copy, modify, merge, publish,
// distribute, sublicense, and/or sell copies of the Software, and to
// permit persons to whom the Software is furnished to do so, subject to
// the following conditions:
//
// The above copyright notice and this permission notice shall be
// included in all copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND,
// EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF
// MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND
// NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE
// LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION
// OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION
// WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.


//! `rdarp` command line: solve, pareto, validate and convert.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rdarp_core::bcp::{solve, SolveOptions, SolveStatus};
use rdarp_core::cuts::CutFamilies;
use rdarp_core::instance::{
    derive_benchmark_risk, edarp_transform, emit_cordeau, emit_realworld, parse_cordeau, parse_realworld,
    preprocess, Instance, InstanceError,
};
use rdarp_core::pareto::{pareto_front, write_csv, ParetoOptions, DEFAULT_STEP};
use rdarp_core::pricing::PriceMode;
use rdarp_core::solution::{check_solution, SolutionFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_TIME_LIMIT: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "rdarp", version, about = "Exact solver for the risk-aware dial-a-ride problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one ε-constraint problem and write a solution JSON.
    Solve(SolveArgs),
    /// Compute the exact cost/exposure front and write CSV.
    Pareto(ParetoArgs),
    /// Check a solution JSON against an instance.
    Validate {
        instance: PathBuf,
        solution: PathBuf,
    },
    /// Convert between the Cordeau text format and the JSON format.
    Convert {
        input: PathBuf,
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Cost,
    Risk,
}

#[derive(Debug, Args)]
struct Common {
    /// Instance file, `.json` or Cordeau text.
    instance: PathBuf,
    /// Bound the maximum detour rate instead of exposure.
    #[arg(long)]
    edarp: bool,
    /// Time limit in seconds per solve.
    #[arg(long, value_name = "S")]
    time_limit: Option<f64>,
    /// Cut families: any of ipec, 2pc, rc, or `none`.
    #[arg(long, value_name = "LIST", default_value = "ipec,2pc,rc")]
    cuts: String,
    #[arg(long)]
    no_heuristic_pricing: bool,
    /// Write zero timings so outputs are byte-stable.
    #[arg(long)]
    no_timings: bool,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value = "cost")]
    mode: ModeArg,
    /// Exposure cap, a number or `inf`.
    #[arg(long, value_name = "V", conflicts_with = "eps_dt", allow_hyphen_values = true)]
    eps_risk: Option<String>,
    /// Detour-rate cap, a number or `inf`.
    #[arg(long, value_name = "V", requires = "edarp", allow_hyphen_values = true)]
    eps_dt: Option<String>,
    /// Travel cost cap of the risk objective, a number or `inf`.
    #[arg(long, value_name = "V", allow_hyphen_values = true)]
    eps_cost: Option<String>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ParetoArgs {
    #[command(flatten)]
    common: Common,
    /// Decrement of the exposure cap between points.
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
    /// CSV output, stdout when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Also write every point with its routes as JSON.
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Infeasible(String),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Internal(e)
    }
}

/// Run the command line and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Pareto(a) => cmd_pareto(&a),
        Command::Validate { instance, solution } => cmd_validate(&instance, &solution),
        Command::Convert { input, output } => cmd_convert(&input, &output),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            EXIT_INFEASIBLE
        }
        Err(Failure::Internal(e)) => {
            eprintln!("error: {e:#}");
            EXIT_INTERNAL
        }
    }
}

fn parse_value(s: &str, flag: &str) -> Result<f64, Failure> {
    let v = match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => f64::INFINITY,
        t => t.parse::<f64>().map_err(|_| Failure::Usage(format!("{flag}: expected a number or `inf`, got `{s}`")))?,
    };
    if v.is_nan() {
        return Err(Failure::Usage(format!("{flag}: NaN is not a cap")));
    }
    Ok(v)
}

fn parse_cuts(s: &str) -> Result<CutFamilies, Failure> {
    let mut fam = CutFamilies::NONE;
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part {
            "ipec" => fam.ipec = true,
            "2pc" => fam.two_path = true,
            "rc" => fam.rounded_capacity = true,
            "none" => {}
            other => return Err(Failure::Usage(format!("--cuts: unknown family `{other}`"))),
        }
    }
    Ok(fam)
}

fn time_limit(secs: Option<f64>) -> Result<Option<Duration>, Failure> {
    match secs {
        None => Ok(None),
        Some(s) if s.is_finite() && s >= 0.0 => Ok(Some(Duration::from_secs_f64(s))),
        Some(s) => Err(Failure::Usage(format!("--time-limit: invalid value {s}"))),
    }
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Read an instance as stored; Cordeau files get loads as risk weights.
fn read_instance(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {}: {e}", path.display())))?;
    let parsed = if is_json(path) {
        parse_realworld(&text)
    } else {
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        parse_cordeau(&text, &name).map(|i| derive_benchmark_risk(&i))
    };
    parsed.map_err(|e| Failure::Usage(format!("parsing {}: {e}", path.display())))
}

fn prepare(common: &Common) -> Result<Instance, Failure> {
    let mut inst = read_instance(&common.instance)?;
    if common.edarp {
        inst = edarp_transform(&inst);
    }
    match preprocess(&inst) {
        Ok(i) => Ok(i),
        Err(e @ InstanceError::InfeasibleRequest { .. }) => Err(Failure::Infeasible(e.to_string())),
        Err(e) => Err(Failure::Internal(e.into())),
    }
}

fn base_options(common: &Common) -> Result<SolveOptions, Failure> {
    Ok(SolveOptions {
        time_limit: time_limit(common.time_limit)?,
        cuts: parse_cuts(&common.cuts)?,
        heuristic_pricing: !common.no_heuristic_pricing,
        ..SolveOptions::default()
    })
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn cmd_solve(a: &SolveArgs) -> Result<i32, Failure> {
    let mut opts = base_options(&a.common)?;
    if a.eps_dt.is_some() && !a.common.edarp {
        return Err(Failure::Usage("--eps-dt needs --edarp".into()));
    }
    let cap = if a.common.edarp { &a.eps_dt } else { &a.eps_risk };
    opts.eps_risk = match cap {
        Some(s) => parse_value(s, if a.common.edarp { "--eps-dt" } else { "--eps-risk" })?,
        None => f64::INFINITY,
    };
    opts.eps_cost = match &a.eps_cost {
        Some(s) => parse_value(s, "--eps-cost")?,
        None => f64::INFINITY,
    };
    opts.mode = match a.mode {
        ModeArg::Cost => PriceMode::Cost,
        ModeArg::Risk => PriceMode::Risk,
    };
    let inst = prepare(&a.common)?;
    let report = solve(&inst, &opts).map_err(|e| Failure::Internal(e.into()))?;
    let file = SolutionFile::from_report(&inst, &report, !a.common.no_timings);
    let mut text = serde_json::to_string_pretty(&file).context("serialising solution")?;
    text.push('\n');
    write_output(a.out.as_deref(), text.as_bytes())?;
    Ok(match report.status {
        SolveStatus::Optimal => EXIT_OK,
        SolveStatus::Infeasible => {
            eprintln!("infeasible: no solution satisfies the caps");
            EXIT_INFEASIBLE
        }
        SolveStatus::Feasible | SolveStatus::TimeLimit => {
            eprintln!("time limit reached: status {}", report.status.as_str());
            EXIT_TIME_LIMIT
        }
    })
}

fn cmd_pareto(a: &ParetoArgs) -> Result<i32, Failure> {
    if !(a.step > 0.0 && a.step.is_finite()) {
        return Err(Failure::Usage(format!("--step must be positive, got {}", a.step)));
    }
    let solve_opts = base_options(&a.common)?;
    let inst = prepare(&a.common)?;
    let opts = ParetoOptions { step: a.step, time_limit: solve_opts.time_limit, solve: solve_opts };
    let front = pareto_front(&inst, &opts).map_err(|e| Failure::Internal(e.into()))?;
    let timings = !a.common.no_timings;
    let mut csv = Vec::new();
    write_csv(&front, timings, &mut csv).context("writing CSV")?;
    write_output(a.out.as_deref(), &csv)?;
    if let Some(path) = &a.json {
        let points: Vec<serde_json::Value> = front
            .points
            .iter()
            .map(|p| {
                serde_json::json!({
                    "epsilon_risk": if p.eps_risk.is_finite() { Some(p.eps_risk) } else { None },
                    "cost": p.cost,
                    "max_risk": p.max_risk,
                    "exact": p.exact,
                    "routes": p.routes.iter().map(|r| r.sequence.clone()).collect::<Vec<_>>(),
                    "t_master_s": if timings { p.t_master.as_secs_f64() } else { 0.0 },
                    "t_pricing_s": if timings { p.t_pricing.as_secs_f64() } else { 0.0 },
                })
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&points).context("serialising front")?;
        text.push('\n');
        write_output(Some(path), text.as_bytes())?;
    }
    if front.points.is_empty() {
        eprintln!("infeasible: no feasible solution");
        return Ok(EXIT_INFEASIBLE);
    }
    if front.points.iter().any(|p| !p.exact) {
        eprintln!("time limit reached: some points are not certified");
        return Ok(EXIT_TIME_LIMIT);
    }
    Ok(EXIT_OK)
}

fn cmd_validate(instance: &Path, solution: &Path) -> Result<i32, Failure> {
    let inst = read_instance(instance)?;
    let text = fs::read_to_string(solution).map_err(|e| Failure::Usage(format!("reading {}: {e}", solution.display())))?;
    let sol: SolutionFile =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("parsing {}: {e}", solution.display())))?;
    let issues = check_solution(&inst, &sol);
    if issues.is_empty() {
        println!("feasible");
        return Ok(EXIT_OK);
    }
    for line in &issues {
        eprintln!("{line}");
    }
    Ok(EXIT_INFEASIBLE)
}

fn cmd_convert(input: &Path, output: &Path) -> Result<i32, Failure> {
    let inst = read_instance(input)?;
    let text = if is_json(output) {
        emit_realworld(&inst)
    } else {
        emit_cordeau(&inst).map_err(|e| Failure::Usage(format!("cannot convert: {e}")))?
    };
    fs::write(output, text).with_context(|| format!("writing {}", output.display()))?;
    Ok(EXIT_OK)
}
