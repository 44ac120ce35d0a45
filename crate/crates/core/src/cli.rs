//! Batch front-end. `run` does all the work; the binary only prints.

use std::io::Read;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::braid::{self, braid_equal, is_trivial, BraidWord, ZigZag};
use crate::maps::{self, classify_map, factorize, make_map, MapError};
use crate::operad::{self, FiniteOperad, Flavor, Operad, OperadError};
use crate::ordinal::{self, enumerate_ordinals, to_tree, NOrdinal, DEFAULT_ENUMERATION_LIMIT};
use crate::perm::Permutation;
use crate::quasicat::{self, build_j, build_q, category::DEFAULT_SIZE_LIMIT};
use crate::strata::{self, Configuration, StratumLabel};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Cap on simplices for nerve and homology commands.
const SIMPLEX_LIMIT: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Enumerate,
    CheckMap,
    Factorize,
    BuildQ,
    BuildJ,
    Nerve,
    Homology,
    Braid,
    Zigzag,
    Split,
    ArtinCheck,
    OperadCheck,
    Desymmetrise,
    Classify,
    Sample,
    VerifyPartition,
    Degeneration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CategoryArg {
    #[value(name = "Q", alias = "q")]
    Q,
    #[value(name = "J", alias = "j")]
    J,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Terminal,
    End,
    Graded,
}

#[derive(Debug, Parser)]
#[command(name = "qbench", about = "n-ordinals, quasibijections, braids, operads and strata")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON input file; `-` or absent reads stdin when the command needs input.
    pub input: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub bound: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub dot: bool,
    #[arg(long)]
    pub tree: bool,
    #[arg(long, value_enum, default_value = "Q")]
    pub category: CategoryArg,
    /// symmetric, braided, mixed2, or n (uses --n).
    #[arg(long)]
    pub flavor: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub offset: usize,
    #[arg(long)]
    pub limit: Option<usize>,
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long)]
    pub j: Option<usize>,
    /// Built-in operad instead of a bundle.
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    /// Size of the base set for `--builtin end`.
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    #[arg(long, default_value = "1")]
    pub spread: String,
    #[arg(long, default_value_t = 16)]
    pub steps: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub outcome: Outcome,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub exit_code: i32,
    pub stdout: String,
    pub report: RunReport,
}

#[derive(Debug, Clone)]
struct CliError {
    code: String,
    message: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        Self { code: "USAGE".into(), message: msg.into() }
    }
}

macro_rules! coded {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                Self { code: e.code().into(), message: e.to_string() }
            }
        }
    )*};
}
coded!(ordinal::OrdinalError, MapError, braid::BraidError, quasicat::QuasiCatError, OperadError, strata::StrataError);

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self { code: "MALFORMED_INPUT".into(), message: e.to_string() }
    }
}

enum Payload {
    Json(Value, Outcome),
    Text(String, Outcome),
}

fn pass(v: Value) -> Result<Payload, CliError> {
    Ok(Payload::Json(v, Outcome::Pass))
}

fn verdict(v: Value, ok: bool) -> Result<Payload, CliError> {
    Ok(Payload::Json(v, if ok { Outcome::Pass } else { Outcome::Fail }))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

struct Ctx<'a> {
    args: &'a Args,
    input: Option<String>,
}

impl Ctx<'_> {
    fn n(&self) -> Result<u32, CliError> {
        self.args.n.ok_or_else(|| CliError::usage("--n is required"))
    }

    fn k(&self) -> Result<usize, CliError> {
        self.args.k.ok_or_else(|| CliError::usage("--k is required"))
    }

    fn json(&self) -> Result<Value, CliError> {
        let text = self.input.as_deref().ok_or_else(|| CliError::usage("no JSON input"))?;
        Ok(serde_json::from_str(text)?)
    }

    fn parse<T: serde::de::DeserializeOwned>(&self) -> Result<T, CliError> {
        Ok(serde_json::from_value(self.json()?)?)
    }
}

/// Parse a JSON labeled structure `{"ordinal": …, "labels": […]}`.
fn parse_label(v: &Value) -> Result<StratumLabel, CliError> {
    let ordinal: NOrdinal = serde_json::from_value(v.get("ordinal").cloned().unwrap_or(Value::Null))?;
    let images: Vec<usize> = serde_json::from_value(v.get("labels").cloned().unwrap_or(Value::Null))?;
    if images.len() != ordinal.arity() {
        return Err(CliError { code: "MALFORMED_INPUT".into(), message: "labels and ordinal differ in arity".into() });
    }
    let labels = Permutation::from_images(images)
        .ok_or_else(|| CliError { code: "MALFORMED_INPUT".into(), message: "labels are not a permutation".into() })?;
    Ok(StratumLabel { ordinal, labels })
}

fn parse_flavor(ctx: &Ctx) -> Result<Option<Flavor>, CliError> {
    match ctx.args.flavor.as_deref() {
        None => Ok(None),
        Some("n") => Ok(Some(Flavor::NOperad(ctx.args.n.unwrap_or(2)))),
        Some(s) => s.parse().map(Some).map_err(|e: OperadError| CliError::usage(e.to_string())),
    }
}

fn load_operad(ctx: &Ctx) -> Result<FiniteOperad, CliError> {
    let flavor = parse_flavor(ctx)?;
    let bound = ctx.args.bound;
    match ctx.args.builtin {
        Some(Builtin::Terminal) => Ok(operad::terminal_operad(flavor.unwrap_or(Flavor::Symmetric), bound.unwrap_or(2))?),
        Some(Builtin::End) => {
            let e = operad::endomorphism_symmetric_operad(ctx.args.q, bound.unwrap_or(2))?;
            match flavor {
                None | Some(Flavor::Symmetric) => Ok(e),
                Some(f) => Ok(operad::as_braided(&e, f)?),
            }
        }
        Some(Builtin::Graded) => Ok(operad::graded_pair_operad()?),
        None => {
            let op = operad::from_bundle(&ctx.json()?)?;
            match flavor {
                Some(f) if f != op.flavor() => Ok(operad::as_braided(&op, f)?),
                _ => Ok(op),
            }
        }
    }
}

fn paginate<T: Clone>(xs: &[T], offset: usize, limit: Option<usize>) -> Vec<T> {
    xs.iter().skip(offset).take(limit.unwrap_or(usize::MAX)).cloned().collect()
}

fn dispatch(ctx: &Ctx) -> Result<Payload, CliError> {
    let a = ctx.args;
    match a.command {
        Command::Enumerate => {
            let (n, k) = (ctx.n()?, ctx.k()?);
            let all = enumerate_ordinals(n, k, DEFAULT_ENUMERATION_LIMIT)?;
            let page = paginate(&all, a.offset, a.limit);
            if a.tree {
                let trees = page.iter().map(to_tree).collect::<Result<Vec<_>, _>>()?;
                return pass(to_value(&trees));
            }
            pass(to_value(&page))
        }
        Command::CheckMap => {
            let v = ctx.json()?;
            let t: NOrdinal = serde_json::from_value(v["source"].clone())?;
            let s: NOrdinal = serde_json::from_value(v["target"].clone())?;
            let f: Vec<usize> = serde_json::from_value(v["f"].clone())?;
            match make_map(&t, &s, f) {
                Ok(m) => pass(json!({"valid": true, "class": classify_map(&m)})),
                Err(MapError::NotAMorphism(w)) => {
                    verdict(json!({"valid": false, "error": "NOT_A_MORPHISM", "witness": w}), false)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Factorize => {
            let m: maps::OrdinalMap = ctx.parse()?;
            pass(to_value(&factorize(&m)?))
        }
        Command::BuildQ => {
            let c = build_q(ctx.n()?, ctx.k()?, DEFAULT_SIZE_LIMIT)?;
            if a.dot {
                return Ok(Payload::Text(quasicat::category_to_dot(&c), Outcome::Pass));
            }
            pass(to_value(&c))
        }
        Command::BuildJ => {
            let j = build_j(ctx.n()?, ctx.k()?, DEFAULT_SIZE_LIMIT)?;
            if a.dot {
                return Ok(Payload::Text(quasicat::poset_to_dot(&j), Outcome::Pass));
            }
            pass(to_value(&j))
        }
        Command::Nerve | Command::Homology => {
            let (n, k) = (ctx.n()?, ctx.k()?);
            let cx = match a.category {
                CategoryArg::Q => quasicat::nerve(&build_q(n, k, DEFAULT_SIZE_LIMIT)?, None, SIMPLEX_LIMIT)?,
                CategoryArg::J => quasicat::order_complex(&build_j(n, k, DEFAULT_SIZE_LIMIT)?, None, SIMPLEX_LIMIT)?,
            };
            if a.command == Command::Nerve {
                return pass(json!({"counts": cx.counts(), "euler_characteristic": cx.euler_characteristic()}));
            }
            pass(to_value(&quasicat::homology(&cx, None)?))
        }
        Command::Braid => {
            let v = ctx.json()?;
            if let Some(pair) = v.as_array() {
                if pair.len() != 2 {
                    return Err(CliError::usage("expected a braid or a pair of braids"));
                }
                let x: BraidWord = serde_json::from_value(pair[0].clone())?;
                let y: BraidWord = serde_json::from_value(pair[1].clone())?;
                let eq = braid_equal(&x, &y)?;
                return pass(json!({"equal": eq}));
            }
            let b: BraidWord = serde_json::from_value(v)?;
            let reduced = braid::handle_reduce(&b, braid::word::DEFAULT_GROWTH_LIMIT)?;
            pass(json!({
                "strands": b.strands(),
                "word": b.letters(),
                "permutation": b.perm_image(),
                "exponent_sum": b.exponent_sum(),
                "reduced": reduced.letters(),
                "trivial": is_trivial(&b)?,
            }))
        }
        Command::Zigzag => {
            let z: ZigZag = ctx.parse()?;
            z.validate()?;
            pass(json!({"strands": z.strands(), "braid": braid::braid_of_zigzag(&z)?}))
        }
        Command::Split => {
            let z: ZigZag = ctx.parse()?;
            let r = braid::split_zigzag(&z)?;
            let whole = braid::braid_of_zigzag(&z)?;
            let sum = r.braids.iter().fold(BraidWord::empty(0), |acc, b| acc.block_sum(b));
            let ok = braid_equal(&whole, &sum)?;
            verdict(json!({"split": r, "braid": whole, "agrees": ok}), ok)
        }
        Command::ArtinCheck => {
            let k = ctx.k()?;
            let pairs: Vec<(usize, usize)> = match (a.i, a.j) {
                (Some(i), Some(j)) => vec![(i, j)],
                (None, None) => (1..k).flat_map(|i| (1..k).filter(move |&j| j > i).map(move |j| (i, j))).collect(),
                _ => return Err(CliError::usage("give both --i and --j, or neither")),
            };
            let results: Vec<Value> = pairs
                .par_iter()
                .map(|&(i, j)| match braid::artin_diagram_check(k, i, j) {
                    Ok(c) if a.i.is_some() => json!({"i": i, "j": j, "pass": true, "certificate": c}),
                    Ok(c) => json!({"i": i, "j": j, "pass": true, "relation": c.relation, "cells": c.diagram.cells.len()}),
                    Err(e) => json!({"i": i, "j": j, "pass": false, "error": e.code(), "message": e.to_string()}),
                })
                .collect();
            if let [r] = results.as_slice() {
                if r["error"] == "PRECONDITION" {
                    return Err(CliError { code: "PRECONDITION".into(), message: r["message"].to_string() });
                }
            }
            let ok = results.iter().all(|r| r["pass"] == true);
            verdict(json!({"strands": k, "checks": results}), ok)
        }
        Command::OperadCheck => {
            let op = load_operad(ctx)?;
            let bound = a.bound.unwrap_or(op.bound());
            let r = operad::check_operad_axioms(&op, bound)?;
            let mut out = json!({"axioms": r});
            let mut ok = r.pass;
            if op.flavor() == Flavor::Symmetric {
                let sq = operad::check_square_equivariance(&op, bound)?;
                ok &= sq.pass;
                out["square_equivariance"] = to_value(&sq);
            }
            verdict(out, ok)
        }
        Command::Desymmetrise => {
            let n = ctx.n()?;
            let sym = load_operad(ctx)?;
            let bound = a.bound.unwrap_or(sym.bound() + 1);
            let d = operad::desymmetrise(&sym, n, bound)?;
            let table = FiniteOperad::tabulate(&d, bound)?;
            let quasi = operad::is_quasisymmetric(&table, bound)?;
            pass(json!({"bundle": operad::to_bundle(&table), "quasisymmetric": quasi}))
        }
        Command::Classify => {
            let c: Configuration = ctx.parse()?;
            pass(to_value(&strata::classify_stratum(&c)?))
        }
        Command::Sample => {
            let label = parse_label(&ctx.json()?)?;
            let spread: BigRational =
                a.spread.parse().map_err(|_| CliError::usage(format!("bad spread {:?}", a.spread)))?;
            pass(to_value(&strata::sample_stratum(&label, &spread)?))
        }
        Command::VerifyPartition => {
            let r = strata::verify_partition(ctx.n()?, ctx.k()?, a.trials.unwrap_or(1000), a.seed)?;
            let ok = r.pass;
            verdict(to_value(&r), ok)
        }
        Command::Degeneration => {
            if let (Some(n), Some(k)) = (a.n, a.k) {
                let j = build_j(n, k, DEFAULT_SIZE_LIMIT)?;
                let m = j.elements.len();
                let rows: Vec<Vec<(usize, usize, bool, bool)>> = (0..m)
                    .into_par_iter()
                    .map(|x| {
                        (0..m)
                            .map(|y| {
                                let geo = strata::degeneration_check(&j.elements[x], &j.elements[y], a.steps)?;
                                Ok((x, y, geo, j.greater(x, y)))
                            })
                            .collect::<Result<Vec<_>, strata::StrataError>>()
                    })
                    .collect::<Result<_, _>>()?;
                let pairs = m * m;
                let disagreements: Vec<Value> = rows
                    .iter()
                    .flatten()
                    .filter(|r| r.2 != r.3)
                    .take(20)
                    .map(|&(x, y, geo, comb)| {
                        json!({"upper": j.elements[x], "lower": j.elements[y], "segment": geo, "poset": comb})
                    })
                    .collect();
                let ok = disagreements.is_empty();
                return verdict(json!({"n": n, "k": k, "pairs": pairs, "disagreements": disagreements}), ok);
            }
            let v = ctx.json()?;
            let upper = parse_label(&v["upper"])?;
            let lower = parse_label(&v["lower"])?;
            pass(json!({"degenerates": strata::degeneration_check(&upper, &lower, a.steps)?}))
        }
    }
}

fn needs_input(args: &Args) -> bool {
    match args.command {
        Command::CheckMap
        | Command::Factorize
        | Command::Braid
        | Command::Zigzag
        | Command::Split
        | Command::Classify
        | Command::Sample => true,
        Command::OperadCheck | Command::Desymmetrise => args.builtin.is_none(),
        Command::Degeneration => args.n.is_none() || args.k.is_none(),
        _ => false,
    }
}

fn read_input(args: &Args, stdin: &mut dyn Read) -> Result<Option<String>, CliError> {
    if !needs_input(args) && args.input.is_none() {
        return Ok(None);
    }
    let mut text = String::new();
    match args.input.as_deref() {
        None | Some("-") => {
            stdin.read_to_string(&mut text).map_err(|e| CliError::usage(format!("reading stdin: {e}")))?;
        }
        Some(path) => {
            text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("reading {path}: {e}")))?;
        }
    }
    Ok(Some(text))
}

fn digest(argv: &[String], input: Option<&str>) -> String {
    let mut h = Sha256::new();
    for a in argv {
        h.update(a.as_bytes());
        h.update([0]);
    }
    if let Some(s) = input {
        h.update(s.as_bytes());
    }
    hex::encode(h.finalize())
}

fn error_doc(e: &CliError) -> String {
    serde_json::to_string_pretty(&json!({"error": e.code, "message": e.message})).expect("serializable") + "\n"
}

/// Run one command. `argv` excludes the program name.
pub fn run(argv: &[String], stdin: &mut dyn Read) -> RunOutput {
    let start = Instant::now();
    let finish = |command: String, input: Option<&str>, exit_code: i32, stdout: String, outcome: Outcome| RunOutput {
        exit_code,
        stdout,
        report: RunReport {
            command,
            inputs_digest: digest(argv, input),
            outcome,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    };
    let args = match Args::try_parse_from(std::iter::once("qbench".to_string()).chain(argv.iter().cloned())) {
        Ok(a) => a,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            return finish("help".into(), None, EXIT_PASS, e.to_string(), Outcome::Pass);
        }
        Err(e) => {
            let err = CliError::usage(e.to_string().trim_end());
            return finish(argv.first().cloned().unwrap_or_default(), None, EXIT_USAGE, error_doc(&err), Outcome::Error);
        }
    };
    let command = args.command.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let input = match read_input(&args, stdin) {
        Ok(i) => i,
        Err(e) => return finish(command, None, EXIT_USAGE, error_doc(&e), Outcome::Error),
    };
    let ctx = Ctx { args: &args, input };
    let result = dispatch(&ctx);
    let input = ctx.input.as_deref();
    match result {
        Ok(Payload::Json(v, outcome)) => {
            let code = if outcome == Outcome::Pass { EXIT_PASS } else { EXIT_FAIL };
            let text = serde_json::to_string_pretty(&v).expect("serializable") + "\n";
            finish(command, input, code, text, outcome)
        }
        Ok(Payload::Text(t, outcome)) => finish(command, input, EXIT_PASS, t, outcome),
        Err(e) => finish(command, input, EXIT_USAGE, error_doc(&e), Outcome::Error),
    }
}
