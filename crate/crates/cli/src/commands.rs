//! Subcommands: `char`, `eval`, `verify` and `decompose`.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use deltap::character::{continuation_criterion, decompose_over_fundamental, Character, Group};
use deltap::cyclotomic::{CyclotomicElement, CyclotomicField};
use deltap::elliptic::CurvePoint;
use deltap::evaluation::{continuation_witness, evaluate, torsion_test, EvaluationResult, GlobalPoint};
use deltap::json::{
    character_from_json, character_to_json, evaluation_to_json, series_to_csv, symbol_to_csv, symbol_to_json, to_canonical_string,
    CharacterJson,
};
use deltap::{Error, Symbol};

use crate::config::{pick, ConfigFile, Defaults, Format, Overrides, RunConfig};
use crate::suites::{self, SuiteReport};
use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "deltap", version, about = "Characters of G_a, G_m and elliptic curves over several primes")]
pub struct Cli {
    /// key=value file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// json, csv or text
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write to a file instead of stdout; relative paths go under $DELTAP_OUTPUT_DIR when set
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a fundamental character
    Char(CharArgs),
    /// Evaluate a fundamental character at a point
    Eval(EvalArgs),
    /// Run a seeded property suite
    Verify(VerifyArgs),
    /// Decompose a character read as JSON from stdin
    Decompose(DecomposeArgs),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Comma-separated odd primes
    #[arg(long)]
    primes: Option<String>,
    /// 11a, 37a or c1,c2,c3,c4,c6
    #[arg(long, allow_hyphen_values = true)]
    curve: Option<String>,
    /// Cyclotomic order
    #[arg(long)]
    m: Option<u64>,
    /// Series truncation: terms below T^order
    #[arg(long)]
    order: Option<u32>,
    /// p-adic precision
    #[arg(long)]
    prec: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CharGroup {
    Ga,
    Gm,
    Ell,
}

#[derive(Args, Debug)]
struct CharArgs {
    #[arg(value_enum)]
    group: CharGroup,
    /// Symbol for G_a, or a multiplier of the fundamental character
    #[arg(long, allow_hyphen_values = true)]
    symbol: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EvalGroup {
    Gm,
    Ell,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(value_enum)]
    group: EvalGroup,
    /// A unit such as 2 or z^3 for G_m, "x,y" or O for a curve
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long, allow_hyphen_values = true)]
    symbol: Option<String>,
    /// Also test whether the point is torsion and compare with the value
    #[arg(long)]
    kernel_test: bool,
    #[arg(long, default_value_t = 16)]
    torsion_bound: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Axioms,
    Additivity,
    Integrality,
    Honda,
    Claim2,
    Jets,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Single prime for the honda suite
    #[arg(long)]
    prime: Option<u64>,
    /// Coefficient bound for the honda suite
    #[arg(long)]
    bound: Option<u64>,
    /// ga, gm or ell
    #[arg(long)]
    group: Option<String>,
    /// Total degree for the additivity suite
    #[arg(long)]
    depth: Option<u32>,
    /// Random samples per property
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    /// Points to test for continuation; repeatable
    #[arg(long, allow_hyphen_values = true)]
    point: Vec<String>,
    /// Read the character from a file instead of stdin
    #[arg(long)]
    input: Option<PathBuf>,
    /// Height bound for rational reconstruction
    #[arg(long)]
    bound: Option<u64>,
    #[arg(long, default_value_t = 16)]
    torsion_bound: u64,
    #[command(flatten)]
    common: Common,
}

struct Globals {
    file: ConfigFile,
    format: Option<String>,
    output: Option<PathBuf>,
}

impl Globals {
    fn config(&self, common: Common, defaults: Defaults) -> Result<RunConfig, CliError> {
        let flags = Overrides {
            primes: common.primes,
            curve: common.curve,
            m: common.m,
            order: common.order,
            prec: common.prec,
            output: self.output.clone(),
            format: self.format.clone(),
            seed: common.seed,
        };
        RunConfig::resolve(flags, &self.file, defaults)
    }
}

/// Run a parsed command; the flag is false when a checked property failed.
pub fn execute(cli: Cli, stdin: &mut dyn Read) -> Result<(String, bool), CliError> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let globals = Globals { file, format: cli.format, output: cli.output };
    let (cfg, text, passed) = match cli.command {
        Command::Char(a) => {
            let cfg = globals.config(a.common, Defaults::default())?;
            let text = cmd_char(&cfg, a.group, a.symbol.as_deref())?;
            (cfg, text, true)
        }
        Command::Eval(a) => {
            let cfg = globals.config(a.common, Defaults::default())?;
            let (text, ok) = cmd_eval(&cfg, a.group, &a.point, a.symbol.as_deref(), a.kernel_test, a.torsion_bound)?;
            (cfg, text, ok)
        }
        Command::Verify(a) => {
            let defaults = match a.suite {
                Suite::Axioms | Suite::Jets => Defaults { primes: "3,5,7", ..Defaults::default() },
                Suite::Integrality => Defaults { order: 201, ..Defaults::default() },
                _ => Defaults::default(),
            };
            let file = &globals.file;
            let group = pick(a.group, file, "group").ok().flatten();
            let bound = pick(a.bound, file, "bound")?;
            let depth = pick(a.depth, file, "depth")?;
            let samples = pick(a.samples, file, "samples")?;
            let cfg = globals.config(a.common, defaults)?;
            let report = run_suite(&cfg, a.suite, a.prime, bound, group, depth, samples)?;
            let ok = report.passed();
            (cfg.clone(), render_report(&report, cfg.format)?, ok)
        }
        Command::Decompose(a) => {
            let cfg = globals.config(a.common, Defaults::default())?;
            let mut input = String::new();
            match &a.input {
                Some(path) => {
                    input = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?
                }
                None => {
                    stdin.read_to_string(&mut input).map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
                }
            }
            let bound = pick(a.bound, &globals.file, "bound")?.unwrap_or(1_000_000);
            let (text, ok) = cmd_decompose(&cfg, &input, &a.point, bound, a.torsion_bound)?;
            (cfg, text, ok)
        }
    };
    match cfg.output_path() {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
            }
            std::fs::write(&path, &text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            Ok((String::new(), passed))
        }
        None => Ok((text, passed)),
    }
}

fn parse_symbol(s: &str) -> Result<Symbol, CliError> {
    s.parse::<Symbol>().map_err(|e| CliError::Usage(e.to_string()))
}

fn build_character(cfg: &RunConfig, group: CharGroup, symbol: Option<&str>) -> Result<Character, CliError> {
    let name = match group {
        CharGroup::Ga => "ga",
        CharGroup::Gm => "gm",
        CharGroup::Ell => "ell",
    };
    if group == CharGroup::Ell {
        cfg.require_curve()?;
    }
    if group == CharGroup::Ga {
        let s = parse_symbol(symbol.unwrap_or("1"))?;
        return Ok(deltap::character::build_ga_character(s, &cfg.primes, cfg.order)?);
    }
    let c = suites::fundamental_character(name, &cfg.primes, cfg.curve.as_ref(), cfg.order)?;
    match symbol {
        Some(s) => Ok(c.times(&parse_symbol(s)?)?),
        None => Ok(c),
    }
}

fn canonical(v: &impl serde::Serialize) -> Result<String, CliError> {
    Ok(to_canonical_string(v)?)
}

fn cmd_char(cfg: &RunConfig, group: CharGroup, symbol: Option<&str>) -> Result<String, CliError> {
    let c = build_character(cfg, group, symbol)?;
    match cfg.format {
        Format::Json => canonical(&character_to_json(&c)),
        Format::Csv => Ok(series_to_csv(&c.series)),
        Format::Text => {
            let mut out = format!("group: {}\nprimes: {}\norder: {}\nsymbol: {}\n", c.group, c.primes, c.order, c.symbol);
            for d in &c.dirac {
                out.push_str(&format!("dirac {}: cross {} | ode {} | {}\n", d.prime, d.cross_symbol, d.ode_symbol, d.descriptor));
            }
            out.push_str(&format!("series: {}\n", c.series));
            Ok(out)
        }
    }
}

fn parse_point(cfg: &RunConfig, group: &Group, s: &str) -> Result<GlobalPoint, CliError> {
    let field = CyclotomicField::new(cfg.m);
    let bad = |e: Error| CliError::Domain(Error::Invalid(format!("point {s:?}: {e}")));
    match group {
        Group::Elliptic(curve) => {
            let t = s.trim();
            let p = if t.eq_ignore_ascii_case("o") || t.eq_ignore_ascii_case("inf") {
                CurvePoint::Infinity
            } else {
                let (x, y) = t.split_once(',').ok_or_else(|| bad(Error::Parse("expected x,y".into())))?;
                CurvePoint::affine(CyclotomicElement::parse(&field, x).map_err(bad)?, CyclotomicElement::parse(&field, y).map_err(bad)?)
            };
            if !curve.contains(&p) {
                return Err(bad(Error::NotOnCurve));
            }
            Ok(GlobalPoint::Elliptic(p))
        }
        _ => Ok(GlobalPoint::Gm(CyclotomicElement::parse(&field, s).map_err(bad)?)),
    }
}

fn eval_json(r: &EvaluationResult) -> Value {
    evaluation_to_json(r)
}

fn cmd_eval(
    cfg: &RunConfig,
    group: EvalGroup,
    point: &str,
    symbol: Option<&str>,
    kernel_test: bool,
    torsion_bound: u64,
) -> Result<(String, bool), CliError> {
    let cg = match group {
        EvalGroup::Gm => CharGroup::Gm,
        EvalGroup::Ell => CharGroup::Ell,
    };
    let c = build_character(cfg, cg, symbol)?;
    let q = parse_point(cfg, &c.group, point)?;
    let result = evaluate(&c, &q, cfg.prec)?;
    let mut report = eval_json(&result);
    let obj = report.as_object_mut().expect("evaluation report is an object");
    obj.insert("group".into(), json!(c.group.name()));
    obj.insert("point".into(), json!(point));
    obj.insert("m".into(), json!(cfg.m));
    obj.insert("primes".into(), json!(cfg.primes.primes()));
    obj.insert("precision".into(), json!(cfg.prec));
    obj.insert("symbol".into(), serde_json::to_value(symbol_to_json(&c.symbol)).expect("symbol serializes"));
    let mut consistent = true;
    if kernel_test {
        let torsion = torsion_test(&q, &c.group, torsion_bound)?;
        consistent = torsion == result.is_zero();
        obj.insert(
            "kernel_test".into(),
            json!({
                "torsion": torsion,
                "verdict": if result.is_zero() { "zero" } else { "nonzero" },
                "consistent": consistent,
            }),
        );
    }
    let text = match cfg.format {
        Format::Json => canonical(&report)?,
        Format::Csv => {
            let mut out = String::from("prime,precision,scale,zero,value\n");
            for v in &result.components {
                let coeffs: Vec<String> = v.value.coeffs().iter().map(BigInt::to_string).collect();
                out.push_str(&format!("{},{},{},{},{}\n", v.prime, v.precision, v.scale, v.is_zero(), coeffs.join(";")));
            }
            out
        }
        Format::Text => {
            let mut out = format!("{} at {point} (m = {}), precision {}\n", c.group, cfg.m, cfg.prec);
            for v in &result.components {
                let verdict = if v.is_zero() { "zero" } else { "nonzero" };
                out.push_str(&format!("  p = {}: {} ({verdict}, scale {})\n", v.prime, v.value, v.scale));
            }
            if let Some(k) = report.get("kernel_test") {
                out.push_str(&format!("  torsion: {}, consistent: {}\n", k["torsion"], k["consistent"]));
            }
            out
        }
    };
    Ok((text, consistent))
}

#[allow(clippy::too_many_arguments)]
fn run_suite(
    cfg: &RunConfig,
    suite: Suite,
    prime: Option<u64>,
    bound: Option<u64>,
    group: Option<String>,
    depth: Option<u32>,
    samples: Option<usize>,
) -> Result<SuiteReport, CliError> {
    let group = group.unwrap_or_else(|| if cfg.curve.is_some() { "ell".into() } else { "gm".into() });
    let report = match suite {
        Suite::Axioms => {
            let m = if cfg.m == 1 { 4 } else { cfg.m };
            let n = samples.unwrap_or(200);
            suites::axioms(&cfg.primes, cfg.seed, n, n / 2, m)?
        }
        Suite::Additivity => suites::additivity(&group, &cfg.primes, cfg.curve.as_ref(), depth.unwrap_or(10), cfg.seed)?,
        Suite::Integrality => suites::integrality(&group, &cfg.primes, cfg.curve.as_ref(), cfg.order, cfg.seed)?,
        Suite::Honda => {
            let curve = cfg.require_curve()?;
            let p = prime.unwrap_or(cfg.primes.primes()[0]);
            suites::honda(curve, p, bound.unwrap_or(100), cfg.seed)?
        }
        Suite::Claim2 => suites::claim2(&cfg.primes, cfg.seed, samples.unwrap_or(20))?,
        Suite::Jets => suites::jets(&cfg.primes, cfg.seed, samples.unwrap_or(100))?,
    };
    Ok(report)
}

fn render_report(r: &SuiteReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut v = serde_json::to_value(r).expect("report serializes");
            v.as_object_mut().expect("object").insert("passed".into(), json!(r.passed()));
            canonical(&v)
        }
        Format::Csv => {
            let mut out = String::from("property,passed,cases,detail\n");
            for p in &r.properties {
                out.push_str(&format!("\"{}\",{},{},\"{}\"\n", p.name.replace('"', "'"), p.passed, p.cases, p.detail.replace('"', "'")));
            }
            Ok(out)
        }
        Format::Text => {
            let mut out = format!("suite {} (seed {})\n", r.suite, r.seed);
            for p in &r.properties {
                let verdict = if p.passed { "pass" } else { "FAIL" };
                out.push_str(&format!("  {verdict} {} [{} cases] {}\n", p.name, p.cases, p.detail));
            }
            out.push_str(if r.passed() { "all properties hold\n" } else { "some properties failed\n" });
            Ok(out)
        }
    }
}

fn cmd_decompose(cfg: &RunConfig, input: &str, points: &[String], bound: u64, torsion_bound: u64) -> Result<(String, bool), CliError> {
    let j: CharacterJson = serde_json::from_str(input).map_err(|e| CliError::Domain(Error::Parse(format!("character JSON: {e}"))))?;
    let c = character_from_json(&j)?;
    let rho = decompose_over_fundamental(&c)?;
    let aug = rho.augmentation();
    let mut verdicts = Vec::new();
    let mut consistent = true;
    for s in points {
        let q = parse_point(cfg, &c.group, s)?;
        let torsion = torsion_test(&q, &c.group, torsion_bound)?;
        let predicted = continuation_criterion(&rho, torsion);
        let witness = continuation_witness(&c, &q, cfg.prec, &BigInt::from(bound))?;
        consistent &= predicted == witness.is_some();
        let verdict = if witness.is_some() { "continuable" } else { "not continuable (finite-precision)" };
        verdicts.push(json!({
            "point": s,
            "torsion": torsion,
            "criterion": predicted,
            "verdict": verdict,
            "witness": witness.map(|w| json!({
                "scale": w.scale.to_string(),
                "value": w.value.iter().map(ToString::to_string).collect::<Vec<_>>(),
            })),
        }));
    }
    let report = json!({
        "group": c.group.name(),
        "primes": c.primes.primes(),
        "rho": symbol_to_json(&rho),
        "augmentation": { "num": aug.numer().to_string(), "den": aug.denom().to_string() },
        "augmentation_zero": continuation_criterion(&rho, false),
        "points": verdicts,
    });
    let text = match cfg.format {
        Format::Json => canonical(&report)?,
        Format::Csv => symbol_to_csv(&rho),
        Format::Text => {
            let mut out = format!("rho = {rho}\naugmentation = {aug}\n");
            for v in report["points"].as_array().expect("array") {
                out.push_str(&format!("  {}: {}\n", v["point"].as_str().unwrap_or(""), v["verdict"].as_str().unwrap_or("")));
            }
            out
        }
    };
    Ok((text, consistent))
}
