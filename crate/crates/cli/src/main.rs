use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use stabrw::circuit_rules::{circ_rule_catalog_bounded, find_circ_matches, find_scirc_sites};
use stabrw::derivation::{apply_circ_step, verify_script, Anchor, Script, Step};
use stabrw::rules::{Bounds, Direction, Params};
use stabrw::selftest::{selftest, Oracle};
use stabrw::stab::{equiv_exact, equiv_tableau};
use stabrw::zx::circuit_to_zx;
use stabrw::Circuit;

/// Exit status for a semantic negative: different, rejected, no match.
const NEGATIVE: u8 = 2;

/// Largest circuit arity (inputs plus outputs) the exact half of `--oracle both` accepts.
const BOTH_MAX_ARITY: usize = 12;

#[derive(Parser)]
#[command(name = "stabrw", version, about = "Rewriting and equivalence checking for stabilizer circuits and ZX diagrams")]
struct Cli {
    /// Equivalence oracle for circuits.
    #[arg(long, global = true, default_value = "exact")]
    oracle: Oracle,
    /// Largest leg count of variadic ZX rule instances.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    max_arity: u32,
    /// Largest inputs + outputs of colour-change circuit instances.
    #[arg(long, global = true, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    ccirc_max: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Cmd {
    /// Checks every rule instance in the catalogs against the oracles.
    Selftest,
    /// Decides whether two circuits agree up to a nonzero scalar.
    Equiv { first: PathBuf, second: PathBuf },
    /// Checks a derivation script step by step.
    Verify { script: PathBuf },
    /// Rewrites a circuit with one rule application.
    Apply {
        circuit: PathBuf,
        #[arg(long)]
        rule: String,
        #[arg(long, default_value_t = 0)]
        variant: usize,
        #[arg(long, default_value = "lr")]
        direction: Direction,
        /// Index into the deterministic match list.
        #[arg(long = "match", conflicts_with = "binding")]
        index: Option<usize>,
        /// Explicit anchor as JSON, e.g. '{"gates":[0]}' or '{"sites":[...]}'.
        #[arg(long)]
        binding: Option<String>,
        /// Rule parameter, repeatable.
        #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_param)]
        params: Vec<(String, i64)>,
        /// Print the match list instead of rewriting.
        #[arg(long)]
        list: bool,
    },
    /// Prints the ZX diagram of a circuit.
    Translate { circuit: PathBuf },
}

fn parse_param(s: &str) -> std::result::Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s}"))?;
    let v = v.trim().parse().map_err(|e| format!("{k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

/// Finds `path` as given, then under `$STABRW_FIXTURES`, then under `fixtures/`.
fn resolve(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    let mut roots = Vec::new();
    if let Ok(dir) = std::env::var("STABRW_FIXTURES") {
        roots.push(PathBuf::from(dir));
    }
    roots.push(PathBuf::from("fixtures"));
    roots.into_iter().map(|r| r.join(path)).find(|p| p.exists()).unwrap_or_else(|| path.to_path_buf())
}

fn read(path: &Path) -> Result<String> {
    let p = resolve(path);
    fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))
}

fn load_circuit(path: &Path) -> Result<Circuit> {
    Circuit::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn print_json(v: serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(&v)?);
    Ok(())
}

fn cmd_selftest(cli: &Cli, bounds: Bounds) -> Result<ExitCode> {
    let checks = selftest(bounds, cli.oracle, cli.seed);
    let failures: Vec<_> = checks.iter().filter(|c| !c.ok).collect();
    if cli.format == Format::Structured {
        print_json(json!({ "checks": checks, "total": checks.len(), "failures": failures.len() }))?;
    } else {
        for c in &checks {
            println!("{} {:<8} {}: {}", if c.ok { "OK  " } else { "FAIL" }, c.family, c.rule, c.verdict);
        }
        println!("{} rules checked, {} failures", checks.len(), failures.len());
    }
    match failures.first() {
        Some(f) => {
            eprintln!("first failure: {} ({})", f.rule, f.verdict);
            Ok(ExitCode::FAILURE)
        }
        None => Ok(ExitCode::SUCCESS),
    }
}

fn cmd_equiv(cli: &Cli, first: &Path, second: &Path) -> Result<ExitCode> {
    let a = load_circuit(first)?;
    let b = load_circuit(second)?;
    let (equivalent, verdict) = match cli.oracle {
        Oracle::Exact => {
            let v = equiv_exact(&a, &b).map_err(|e| match e {
                stabrw::Error::ArityOverflow(..) | stabrw::Error::SizeOverflow(..) => {
                    anyhow::Error::new(e).context("too large for the exact oracle; try --oracle tableau")
                }
                e => e.into(),
            })?;
            (v.is_equivalent(), v.kind().to_lowercase())
        }
        Oracle::Tableau => {
            let t = equiv_tableau(&a, &b)?;
            (t, if t { "equivalent" } else { "different" }.to_string())
        }
        Oracle::Both => {
            let arity = [&a, &b].iter().map(|c| c.inputs().len() + c.outputs().len()).max().unwrap_or(0);
            if arity > BOTH_MAX_ARITY {
                bail!("--oracle both supports arity up to {BOTH_MAX_ARITY}, got {arity}");
            }
            let v = equiv_exact(&a, &b)?;
            let t = equiv_tableau(&a, &b)?;
            if v.is_equivalent() != t {
                bail!("oracles disagree: exact says {}, tableau says {}", v.kind(), if t { "equivalent" } else { "different" });
            }
            (t, v.kind().to_lowercase())
        }
    };
    if cli.format == Format::Structured {
        print_json(json!({ "oracle": cli.oracle, "verdict": verdict, "equivalent": equivalent }))?;
    } else {
        println!("{verdict}");
    }
    Ok(if equivalent { ExitCode::SUCCESS } else { ExitCode::from(NEGATIVE) })
}

fn cmd_verify(cli: &Cli, path: &Path, bounds: Bounds) -> Result<ExitCode> {
    let script = Script::from_json(&read(path)?).with_context(|| format!("loading {}", path.display()))?;
    let report = verify_script(&script, bounds)?;
    if cli.format == Format::Structured {
        print_json(json!(report))?;
    } else {
        print!("{}", report.to_text());
    }
    Ok(if report.accepted() { ExitCode::SUCCESS } else { ExitCode::from(NEGATIVE) })
}

#[allow(clippy::too_many_arguments)]
fn cmd_apply(
    cli: &Cli,
    path: &Path,
    rule: &str,
    variant: usize,
    direction: Direction,
    index: Option<usize>,
    binding: Option<&str>,
    params: &[(String, i64)],
    list: bool,
    bounds: Bounds,
) -> Result<ExitCode> {
    let c = load_circuit(path)?;
    let params: Params = params.iter().cloned().collect();
    if list {
        let anchors: Vec<serde_json::Value> = if rule == "Scirc" {
            find_scirc_sites(&c, 4).into_iter().map(|s| json!({ "sites": s })).collect()
        } else {
            let r = circ_rule_catalog_bounded(rule, variant, &params, bounds)?;
            find_circ_matches(&c, &r, direction).into_iter().map(|b| serde_json::to_value(b).unwrap()).collect()
        };
        if cli.format == Format::Structured {
            print_json(json!(anchors))?;
        } else {
            for (i, a) in anchors.iter().enumerate() {
                println!("{i}: {a}");
            }
        }
        return Ok(if anchors.is_empty() { ExitCode::from(NEGATIVE) } else { ExitCode::SUCCESS });
    }
    let anchor = match binding {
        Some(text) => serde_json::from_str::<Anchor>(text).context("parsing --binding")?,
        None => Anchor::Match { index: index.unwrap_or(0) },
    };
    let step = Step { rule: rule.to_string(), variant, params, direction, binding: anchor };
    match apply_circ_step(&c, &step, bounds) {
        Ok(out) => {
            if cli.format == Format::Structured {
                print_json(json!({ "circuit": out.to_text() }))?;
            } else {
                print!("{}", out.to_text());
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(e @ (stabrw::Error::InvalidBinding(_) | stabrw::Error::NoValidCircuit(_))) => {
            eprintln!("no rewrite: {e}");
            Ok(ExitCode::from(NEGATIVE))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_translate(cli: &Cli, path: &Path) -> Result<ExitCode> {
    let d = circuit_to_zx(&load_circuit(path)?);
    if cli.format == Format::Structured {
        print_json(json!({ "zx": d.to_text() }))?;
    } else {
        print!("{}", d.to_text());
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let bounds = Bounds { max_arity: cli.max_arity as usize, ccirc_max: cli.ccirc_max as usize };
    match &cli.cmd {
        Cmd::Selftest => cmd_selftest(cli, bounds),
        Cmd::Equiv { first, second } => cmd_equiv(cli, first, second),
        Cmd::Verify { script } => cmd_verify(cli, script, bounds),
        Cmd::Apply { circuit, rule, variant, direction, index, binding, params, list } => cmd_apply(
            cli,
            circuit,
            rule,
            *variant,
            *direction,
            *index,
            binding.as_deref(),
            params,
            *list,
            bounds,
        ),
        Cmd::Translate { circuit } => cmd_translate(cli, circuit),
    }
}

fn main() -> ExitCode {
    // Usage errors share exit status 1 with I/O errors; 2 is reserved for negatives.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
