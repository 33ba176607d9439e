//! The `liffig` command line. Every subcommand prints one JSON report on
//! stdout; human-readable diagnostics go to stderr.
//!
//! Exit codes: 0 success or all hold, 1 refutation or assertion violation
//! (the witness is in the payload), 2 usage or parse error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::corpus::{self, info, native, Entry, SuiteMode};
use crate::interp::{Interpreter, Outcome, RunConfig, DEFAULT_SEED, DEFAULT_STEP_BUDGET};
use crate::model::{Ident, Program, State, Value};
use crate::parser::{has_errors, validate, Diagnostic, ParseOptions, SourceFile};
use crate::transpile::{transpile, AssertionStyle, TranspileConfig};
use crate::verify::{extract_vcs, fixpoint_check, matrix_of, matrix_product, verify_program, Domain};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "liffig", version, about = "Parse, run, verify and transcribe Matrix Code programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a source file.
    Check {
        file: PathBuf,
        /// Accept `if` as a block terminator.
        #[arg(long)]
        lenient: bool,
    },
    /// Run a program with assertion checking.
    Run {
        file: PathBuf,
        /// Initial values, `name=value`; arrays as `[1,2,3]` or `[1,2]@lo`.
        #[arg(long, num_args = 1.., value_name = "NAME=VALUE")]
        input: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_STEP_BUDGET)]
        budget: u64,
        #[arg(long)]
        trace: bool,
        /// Skip the assertion checks.
        #[arg(long)]
        unchecked: bool,
    },
    /// List the verification conditions.
    Vcs { file: PathBuf },
    /// Discharge every verification condition over a bounded domain.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Print the program's matrix, a product, or the fixpoint check.
    Matrix {
        file: PathBuf,
        /// Also print the product of this program's matrix after FILE's.
        #[arg(long, value_name = "FILE2")]
        product: Option<PathBuf>,
        /// Check MA against A over the domain.
        #[arg(long)]
        fixpoint: bool,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Transcribe into a C function.
    Transpile {
        file: PathBuf,
        #[arg(long = "fn", value_name = "NAME")]
        fn_name: String,
        #[arg(short, long, value_name = "OUT.c")]
        output: PathBuf,
        /// Emit the C-expressible assertion conjuncts as `assert` calls.
        #[arg(long)]
        checks: bool,
    },
    /// Run a corpus suite, or `alg63` for the Algorithm 63 survey.
    Corpus {
        name: String,
        #[arg(long, conflicts_with = "random")]
        exhaustive: bool,
        /// Run K seeded random inputs instead of the exhaustive grid.
        #[arg(long, value_name = "K")]
        random: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also compile the transcription and compare it on the same inputs.
        #[arg(long)]
        native: bool,
    },
    /// Bits yielded by a split of n elements into r and n - r.
    InfoYield { n: u64, r: Option<u64> },
}

#[derive(Debug, Args)]
pub struct DomainArgs {
    /// Range of every scalar, `LO:HI`.
    #[arg(long, value_parser = range_i64, allow_hyphen_values = true)]
    int_range: Option<(i64, i64)>,
    /// Range of one scalar, `NAME=LO:HI`.
    #[arg(long = "var", value_parser = var_range, allow_hyphen_values = true)]
    vars: Vec<(String, (i64, i64))>,
    #[arg(long, value_parser = range_usize)]
    array_len: Option<(usize, usize)>,
    #[arg(long, value_parser = range_i64, allow_hyphen_values = true)]
    elem_range: Option<(i64, i64)>,
    /// Most complete states to enumerate per VC before sampling.
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

impl DomainArgs {
    fn domain(&self) -> Domain {
        let mut d = Domain::default();
        if let Some(r) = self.int_range {
            d.int_range = r;
        }
        for (v, r) in &self.vars {
            d.var_ranges.insert(v.clone(), *r);
        }
        if let Some(r) = self.array_len {
            d.array_len = r;
        }
        if let Some(r) = self.elem_range {
            d.elem_range = r;
        }
        d.cap = self.cap.unwrap_or(d.cap);
        d.samples = self.samples.unwrap_or(d.samples);
        d.seed = self.seed.unwrap_or(d.seed);
        d
    }
}

fn range<T: std::str::FromStr + PartialOrd>(s: &str) -> Result<(T, T), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo = lo.trim().parse().map_err(|_| format!("bad bound `{lo}`"))?;
    let hi = hi.trim().parse().map_err(|_| format!("bad bound `{hi}`"))?;
    if lo > hi {
        return Err("LO exceeds HI".into());
    }
    Ok((lo, hi))
}

fn range_i64(s: &str) -> Result<(i64, i64), String> {
    range(s)
}

fn range_usize(s: &str) -> Result<(usize, usize), String> {
    range(s)
}

fn var_range(s: &str) -> Result<(String, (i64, i64)), String> {
    let (v, r) = s.split_once('=').ok_or("expected NAME=LO:HI")?;
    Ok((v.trim().to_string(), range(r)?))
}

/// A finished subcommand: the exit code and the JSON report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub payload: Json,
}

impl Report {
    fn new(command: &str, exit_code: i32, payload: Json) -> Report {
        Report {
            command: command.to_string(),
            exit_code,
            seed: None,
            payload,
        }
    }

    fn seeded(mut self, seed: u64) -> Report {
        self.seed = Some(seed);
        self
    }
}

/// A usage or parse failure, with what stderr should say.
struct Failure {
    message: String,
    diagnostics: Vec<Diagnostic>,
    rendered: String,
}

impl Failure {
    fn msg(message: impl Into<String>) -> Failure {
        let message = message.into();
        Failure {
            rendered: format!("error: {message}"),
            message,
            diagnostics: Vec::new(),
        }
    }
}

fn load(file: &PathBuf, opts: ParseOptions) -> Result<(Program, Vec<Diagnostic>), Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::msg(format!("{}: {e}", file.display())))?;
    let name = file.display().to_string();
    let parsed = SourceFile::detect(text).parse(opts).map_err(|diags| Failure {
        message: format!("{name} does not parse"),
        rendered: diags.iter().map(|d| d.render(&name)).collect::<Vec<_>>().join("\n"),
        diagnostics: diags,
    })?;
    let mut diags = parsed.warnings;
    diags.extend(validate(&parsed.program));
    if has_errors(&diags) {
        return Err(Failure {
            message: format!("{name} is not a valid program"),
            rendered: diags.iter().map(|d| d.render(&name)).collect::<Vec<_>>().join("\n"),
            diagnostics: diags,
        });
    }
    Ok((parsed.program, diags))
}

fn exit_for(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_REFUTED
    }
}

fn to_json<T: Serialize>(v: &T) -> Json {
    serde_json::to_value(v).expect("reports serialize")
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Run { .. } => "run",
        Command::Vcs { .. } => "vcs",
        Command::Verify { .. } => "verify",
        Command::Matrix { .. } => "matrix",
        Command::Transpile { .. } => "transpile",
        Command::Corpus { .. } => "corpus",
        Command::InfoYield { .. } => "info-yield",
    }
}

/// Execute a parsed command line. Never panics on bad input; returns the
/// report and what belongs on stderr.
pub fn execute(cli: &Cli) -> (Report, String) {
    let name = command_name(&cli.command);
    match dispatch(&cli.command) {
        Ok(r) => (r, String::new()),
        Err(f) => {
            let payload = json!({ "error": f.message, "diagnostics": to_json(&f.diagnostics) });
            (Report::new(name, EXIT_USAGE, payload), f.rendered)
        }
    }
}

fn dispatch(c: &Command) -> Result<Report, Failure> {
    match c {
        Command::Check { file, lenient } => {
            let opts = if *lenient { ParseOptions::lenient() } else { ParseOptions::default() };
            let (p, diags) = load(file, opts)?;
            let payload = json!({
                "file": file.display().to_string(),
                "labels": p.labels().len(),
                "arms": p.arms().count(),
                "diagnostics": to_json(&diags),
            });
            Ok(Report::new("check", EXIT_OK, payload))
        }
        Command::Run {
            file,
            input,
            seed,
            budget,
            trace,
            unchecked,
        } => {
            let (p, _) = load(file, ParseOptions::default())?;
            let inputs = parse_inputs(&p, input)?;
            let interp = Interpreter::new(&p).map_err(|e| Failure::msg(e.to_string()))?;
            let r = interp.run(&RunConfig {
                inputs,
                step_budget: *budget,
                check_assertions: !unchecked,
                trace: *trace,
                rng_seed: *seed,
            });
            let code = match r.outcome {
                Outcome::Halted => EXIT_OK,
                _ => EXIT_REFUTED,
            };
            Ok(Report::new("run", code, to_json(&r)).seeded(*seed))
        }
        Command::Vcs { file } => {
            let (p, _) = load(file, ParseOptions::default())?;
            let vcs = extract_vcs(&p).map_err(|e| Failure::msg(e.to_string()))?;
            let list: Vec<Json> = vcs
                .iter()
                .map(|v| {
                    json!({
                        "id": v.id(),
                        "pre_label": v.pre_label.as_str(),
                        "post_label": v.post_label.as_str(),
                        "pre": v.pre.to_string(),
                        "command": v.command.to_string(),
                        "post": v.post.to_string(),
                        "text": v.to_string(),
                    })
                })
                .collect();
            Ok(Report::new("vcs", EXIT_OK, json!({ "file": file.display().to_string(), "vcs": list })))
        }
        Command::Verify { file, domain } => {
            let (p, _) = load(file, ParseOptions::default())?;
            let d = domain.domain();
            let r = verify_program(&p, &d).map_err(|e| Failure::msg(e.to_string()))?;
            Ok(Report::new("verify", exit_for(r.all_hold), to_json(&r)).seeded(d.seed))
        }
        Command::Matrix {
            file,
            product,
            fixpoint,
            domain,
        } => {
            let (p, _) = load(file, ParseOptions::default())?;
            let m = matrix_of(&p);
            let mut payload = json!({
                "labels": m.labels.iter().map(Ident::as_str).collect::<Vec<_>>(),
                "cells": to_json(&m.cell_listing()),
            });
            if let Some(f2) = product {
                let (p2, _) = load(f2, ParseOptions::default())?;
                let prod = matrix_product(&matrix_of(&p2), &m).map_err(|e| Failure::msg(e.to_string()))?;
                payload["product"] = to_json(&prod.simplified().cell_listing());
            }
            let mut code = EXIT_OK;
            let mut report_seed = None;
            if *fixpoint {
                let d = domain.domain();
                let r = fixpoint_check(&p, &d).map_err(|e| Failure::msg(e.to_string()))?;
                code = exit_for(r.contained);
                report_seed = Some(d.seed);
                payload["fixpoint"] = to_json(&r);
            }
            let r = Report::new("matrix", code, payload);
            Ok(match report_seed {
                Some(s) => r.seeded(s),
                None => r,
            })
        }
        Command::Transpile {
            file,
            fn_name,
            output,
            checks,
        } => {
            let (p, _) = load(file, ParseOptions::default())?;
            let mut cfg = TranspileConfig::for_program(&p, fn_name);
            if *checks {
                cfg.assertions = AssertionStyle::Checks;
            }
            let text = transpile(&p, &cfg).map_err(|e| Failure::msg(e.to_string()))?;
            std::fs::write(output, &text).map_err(|e| Failure::msg(format!("{}: {e}", output.display())))?;
            let payload = json!({
                "file": file.display().to_string(),
                "output": output.display().to_string(),
                "function": fn_name,
                "lines": text.lines().count(),
            });
            Ok(Report::new("transpile", EXIT_OK, payload))
        }
        Command::Corpus {
            name,
            random,
            seed,
            native: compare,
            ..
        } => {
            if name == "alg63" {
                let s = corpus::survey_alg63(6, 2);
                let payload = json!({ "survey": to_json(&s) });
                return Ok(Report::new("corpus", exit_for(s.postcondition == s.cases), payload));
            }
            let entry = Entry::from_name(name).ok_or_else(|| {
                let names: Vec<_> = Entry::ALL.iter().map(|e| e.name()).collect();
                Failure::msg(format!("no corpus entry `{name}`; try one of {} or alg63", names.join(", ")))
            })?;
            let mode = match random {
                Some(count) => SuiteMode::Random { count: *count, seed: *seed },
                None => SuiteMode::Exhaustive,
            };
            let suite = corpus::run_suite(entry, mode);
            let mut ok = suite.ok();
            let mut payload = json!({ "suite": to_json(&suite) });
            if *compare {
                match native::compare_with_c(entry, mode) {
                    Ok(a) => {
                        ok &= a.ok();
                        payload["native"] = to_json(&a);
                    }
                    Err(e) => payload["native"] = json!({ "error": e.to_string() }),
                }
            }
            let r = Report::new("corpus", exit_for(ok), payload);
            Ok(if random.is_some() { r.seeded(*seed) } else { r })
        }
        Command::InfoYield { n, r } => {
            let payload = match r {
                Some(r) => {
                    let bits = info::info_yield(*n, *r).map_err(|e| Failure::msg(e.to_string()))?;
                    json!({ "n": n, "r": r, "bits": bits })
                }
                None => {
                    if *n < 2 {
                        return Err(Failure::msg("the table needs n >= 2"));
                    }
                    let table: Vec<Json> = (0..=*n)
                        .map(|r| json!({ "r": r, "bits": info::info_yield(*n, r).expect("r in range") }))
                        .collect();
                    json!({
                        "n": n,
                        "table": table,
                        "argmax": info::argmax_split(*n),
                        "ratio": info::info_yield_ratio(*n),
                    })
                }
            };
            Ok(Report::new("info-yield", EXIT_OK, payload))
        }
    }
}

fn parse_inputs(p: &Program, input: &[String]) -> Result<State, Failure> {
    let mut s = State::new();
    for kv in input {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Failure::msg(format!("input `{kv}` is not NAME=VALUE")))?;
        let ty = p
            .signature
            .type_of(k.trim())
            .ok_or_else(|| Failure::msg(format!("the program has no variable `{k}`")))?;
        let value = Value::parse(v, ty).map_err(Failure::msg)?;
        s.set(Ident::new(k.trim()), value);
    }
    Ok(s)
}

/// Parse `args` (without the program name) and execute. Usage errors come
/// back as exit code 2 with clap's message on stderr.
pub fn run_args<I, S>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("liffig")).chain(args.into_iter().map(Into::into));
    match Cli::try_parse_from(argv) {
        Ok(cli) => {
            let (report, err) = execute(&cli);
            let out = serde_json::to_string_pretty(&report).expect("reports serialize");
            (report.exit_code, out, err)
        }
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                (code, text, String::new())
            } else {
                (code, String::new(), text)
            }
        }
    }
}
