//! The `magnitude` command line.
//!
//! Exit status is a function of the outcome: 0 for a result, 1 for a domain
//! error or a failing check, 2 when the answer is undecided at the given
//! fuel or precision, 3 for usage errors.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::embed::{check_homomorphism, fourth_proportional, Embedding, HomCheckReport};
use crate::hom::{product, quotient};
use crate::laws::{find_law, list_laws, run_law, run_suite, LawReport, LawSet, Mutation, Tolerance};
use crate::models::nat_make;
use crate::power::{exponent_from_element, into_mul, pow};
use crate::ratio::{compare_elements, RatioRel, Witness};
use crate::space::ApproxPolicy;
use crate::{Element, MagnitudeError, ModelId, PosRealValue, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "magnitude", version, about = "Ratios, fourth proportionals, products and powers over magnitude spaces")]
pub struct Cli {
    #[command(flatten)]
    pub config: CliConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CliConfig {
    /// Model the operands live in.
    #[arg(long, global = true, default_value = "rat")]
    pub model: ModelId,
    /// Output precision for real results, in bits.
    #[arg(short = 'p', long = "precision", global = true, env = "MAGNITUDE_PRECISION", default_value_t = 30)]
    pub precision: u32,
    /// Step budget of the ratio engine.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub fuel: u64,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare ratios.
    Ratio {
        #[command(subcommand)]
        op: RatioOp,
    },
    /// `n * a`.
    Multiple { n: String, a: String },
    /// The real `b'` with `a:b = a':b'`.
    Fourth {
        a: String,
        b: String,
        #[arg(value_name = "APRIME")]
        a_prime: String,
    },
    /// Product `a * b`.
    Mul { a: String, b: String },
    /// Quotient `b / a`.
    Quot { b: String, a: String },
    /// `x^y` for a real `x > 1`.
    Pow { x: String, y: String },
    /// Check an embedding (JSON text, or `@file`) for additivity and order.
    EmbedCheck { json: String },
    /// The law suite.
    Laws {
        #[command(subcommand)]
        op: LawsOp,
    },
}

#[derive(Debug, Subcommand)]
pub enum RatioOp {
    /// `a:b` against `a2:b2`, given as `a:b c:d` or `a b c d`.
    Cmp {
        /// Model of the second pair; defaults to `--model`.
        #[arg(long)]
        model2: Option<ModelId>,
        #[arg(num_args = 2..=4, required = true)]
        terms: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum LawsOp {
    /// Run a law set (`all`, a set name, or a single law id).
    Run { set: String },
    List,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LawEntry {
    pub id: String,
    pub set: String,
    pub statement: String,
    pub models: Vec<ModelId>,
}

/// Everything a command can print. The JSON form is this type serialized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Output {
    Element {
        model: ModelId,
        value: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        interval: Option<[String; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        precision: Option<u32>,
    },
    Ratio {
        relation: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<Witness>,
        #[serde(default, rename = "fuelSpent", skip_serializing_if = "Option::is_none")]
        fuel_spent: Option<u64>,
    },
    HomCheck(HomCheckReport),
    Laws { reports: Vec<LawReport> },
    LawList { laws: Vec<LawEntry> },
}

impl Output {
    pub fn exit_code(&self) -> i32 {
        match self {
            Output::Ratio { relation, .. } if relation == "unknown" => EXIT_UNDECIDED,
            Output::HomCheck(r) if !r.passed => EXIT_DOMAIN,
            Output::Laws { reports } if reports.iter().any(|r| !r.passed()) => EXIT_DOMAIN,
            _ => EXIT_OK,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("output serializes"),
            Format::Text => self.text(),
        }
    }

    fn text(&self) -> String {
        match self {
            Output::Element { value, .. } => value.clone(),
            Output::Ratio { relation, witness, fuel_spent } => match (witness, fuel_spent) {
                (Some(w), _) => format!("{relation} (witness {w})"),
                (None, Some(f)) => format!("{relation} (fuel spent {f})"),
                (None, None) => relation.clone(),
            },
            Output::HomCheck(r) => match &r.counterexample {
                None => format!("homomorphism: passed ({} samples, seed {})", r.samples, r.seed),
                Some(c) => format!("homomorphism: failed: {c}"),
            },
            Output::Laws { reports } => {
                let mut lines: Vec<String> = reports.iter().map(report_line).collect();
                let passed = reports.iter().filter(|r| r.passed()).count();
                lines.push(format!("{passed}/{} laws passed", reports.len()));
                lines.join("\n")
            }
            Output::LawList { laws } => laws
                .iter()
                .map(|l| {
                    let models: Vec<&str> = l.models.iter().map(|m| m.as_str()).collect();
                    format!("{:<40} {:<12} {:<13} {}", l.id, l.set, models.join(","), l.statement)
                })
                .collect::<Vec<_>>()
                .join("\n"),
        }
    }
}

fn report_line(r: &LawReport) -> String {
    match r.failures.first() {
        None => format!("PASS {} [{}] {} trials", r.law_id, r.model, r.trials),
        Some(f) => format!(
            "FAIL {} [{}] trial {}: inputs ({}) gave {}, expected {} (shrunk {} steps)",
            r.law_id,
            r.model,
            f.trial,
            f.inputs.join(", "),
            f.observed,
            f.expected,
            f.shrink_steps
        ),
    }
}

fn exit_code_for(e: &MagnitudeError) -> i32 {
    match e {
        MagnitudeError::Undecided(_) => EXIT_UNDECIDED,
        MagnitudeError::Parse(_)
        | MagnitudeError::InvalidArgument(_)
        | MagnitudeError::UnknownLaw(_)
        | MagnitudeError::ZeroFuel => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

fn element_output(e: &Element, p: u32) -> Result<Output> {
    Ok(match e {
        Element::Real(x) => real_output(x, p)?,
        exact => Output::Element { model: exact.model(), value: exact.to_string(), interval: None, precision: None },
    })
}

fn real_output(x: &PosRealValue, p: u32) -> Result<Output> {
    let i = x.approx(p)?;
    Ok(Output::Element {
        model: ModelId::Real,
        value: crate::models::real::format_mid(x, p)?,
        interval: Some([i.lo().to_string(), i.hi().to_string()]),
        precision: Some(p),
    })
}

/// `a:b` or `p/q` as a pair of elements.
fn split_ratio(model: ModelId, text: &str) -> Result<(Element, Element)> {
    let (a, b) = text
        .split_once(':')
        .or_else(|| (model != ModelId::Real).then(|| text.split_once('/')).flatten())
        .ok_or_else(|| MagnitudeError::Parse(format!("expected a ratio `a:b`, got `{text}`")))?;
    Ok((Element::parse(model, a.trim())?, Element::parse(model, b.trim())?))
}

fn ratio_cmp(config: &CliConfig, model2: Option<ModelId>, terms: &[String]) -> Result<Output> {
    let m1 = config.model;
    let m2 = model2.unwrap_or(m1);
    let (a, b, a2, b2) = match terms {
        [r1, r2] => {
            let (a, b) = split_ratio(m1, r1)?;
            let (a2, b2) = split_ratio(m2, r2)?;
            (a, b, a2, b2)
        }
        [a, b, a2, b2] => (
            Element::parse(m1, a)?,
            Element::parse(m1, b)?,
            Element::parse(m2, a2)?,
            Element::parse(m2, b2)?,
        ),
        _ => return Err(MagnitudeError::InvalidArgument("ratio cmp takes two ratios or four terms".into())),
    };
    let rel = compare_elements(&a, &b, &a2, &b2, config.fuel)?.relation;
    Ok(ratio_output(&rel))
}

pub fn ratio_output(rel: &RatioRel) -> Output {
    let (relation, witness, fuel_spent) = match rel {
        RatioRel::Equal => ("equal", None, None),
        RatioRel::Greater(w) => ("greater", Some(w.clone()), None),
        RatioRel::Less(w) => ("less", Some(w.clone()), None),
        RatioRel::Unknown { fuel_spent } => ("unknown", None, Some(*fuel_spent)),
    };
    Output::Ratio { relation: relation.into(), witness, fuel_spent }
}

fn fourth(config: &CliConfig, a: &str, b: &str, a_prime: &str) -> Result<Output> {
    let (a, b) = (Element::parse(config.model, a)?, Element::parse(config.model, b)?);
    let a_prime = Element::parse(ModelId::Real, a_prime)?.to_real();
    let x = match (&a, &b) {
        (Element::Nat(a), Element::Nat(b)) => fourth_proportional(a, b, &a_prime),
        (Element::Rat(a), Element::Rat(b)) => fourth_proportional(a, b, &a_prime),
        _ => return Err(MagnitudeError::InexactModel(config.model)),
    };
    real_output(&x, config.precision)
}

fn power(config: &CliConfig, x: &str, y: &str) -> Result<Output> {
    let policy = ApproxPolicy::new(config.precision);
    let base = into_mul(&Element::parse(ModelId::Real, x)?.to_real(), &policy)?;
    let exponent = exponent_from_element(&Element::parse(ModelId::Real, y)?)?;
    real_output(pow(&base, &exponent)?.value(), config.precision)
}

fn embed_check(config: &CliConfig, json: &str) -> Result<Output> {
    let text = match json.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| MagnitudeError::InvalidArgument(format!("cannot read {path}: {e}")))?,
        None => json.to_string(),
    };
    let phi = Embedding::from_json(&text)?;
    Ok(Output::HomCheck(check_homomorphism(&phi, config.trials as usize, config.seed)?))
}

fn laws_run(config: &CliConfig, set: &str) -> Result<Output> {
    let tolerance = match config.model {
        ModelId::Real => Tolerance::Bits(config.precision),
        _ => Tolerance::Exact,
    };
    let reports = if set == "all" {
        run_suite(config.model, None, config.trials, config.seed, tolerance)?
    } else if let Ok(s) = set.parse::<LawSet>() {
        run_suite(config.model, Some(s), config.trials, config.seed, tolerance)?
    } else {
        let law = find_law(set)?;
        vec![run_law(law, config.model, config.trials, config.seed, tolerance, Mutation::None)?]
    };
    Ok(Output::Laws { reports })
}

fn laws_list() -> Output {
    let laws = list_laws()
        .iter()
        .map(|l| LawEntry {
            id: l.id.to_string(),
            set: l.set.as_str().to_string(),
            statement: l.statement.to_string(),
            models: l.models(),
        })
        .collect();
    Output::LawList { laws }
}

pub fn execute(cli: &Cli) -> Result<Output> {
    let config = &cli.config;
    let p = config.precision;
    let parse = |s: &str| Element::parse(config.model, s);
    match &cli.command {
        Command::Ratio { op: RatioOp::Cmp { model2, terms } } => ratio_cmp(config, *model2, terms),
        Command::Multiple { n, a } => element_output(&parse(a)?.multiple(&nat_make(n)?), p),
        Command::Fourth { a, b, a_prime } => fourth(config, a, b, a_prime),
        Command::Mul { a, b } => element_output(&product(&parse(a)?, &parse(b)?)?, p),
        Command::Quot { b, a } => element_output(&quotient(&parse(b)?, &parse(a)?)?, p),
        Command::Pow { x, y } => power(config, x, y),
        Command::EmbedCheck { json } => embed_check(config, json),
        Command::Laws { op: LawsOp::Run { set } } => laws_run(config, set),
        Command::Laws { op: LawsOp::List } => Ok(laws_list()),
    }
}

/// Parse `args` (including the program name), run, write to `out`/`err`,
/// and return the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(output) => {
            let _ = writeln!(out, "{}", output.render(cli.config.format));
            output.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("magnitude").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ratio_forms_agree() {
        let (c1, o1, _) = run_args(&["ratio", "cmp", "3/2", "4/3"]);
        let (c2, o2, _) = run_args(&["ratio", "cmp", "3", "2", "4", "3"]);
        let (c3, o3, _) = run_args(&["ratio", "cmp", "3:2", "4:3"]);
        assert_eq!((c1, c2, c3), (0, 0, 0));
        assert_eq!(o1, o2);
        assert_eq!(o1, o3);
    }

    #[test]
    fn three_terms_is_usage() {
        let (code, _, err) = run_args(&["ratio", "cmp", "1", "2", "3"]);
        assert_eq!(code, EXIT_USAGE, "{err}");
    }

    #[test]
    fn bad_number_is_usage() {
        let (code, _, err) = run_args(&["mul", "x", "2"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.starts_with("error: parse error"), "{err}");
    }

    #[test]
    fn json_roundtrip() {
        let cases: &[&[&str]] = &[
            &["--format", "json", "ratio", "cmp", "3/2", "4/3"],
            &["--format", "json", "--model", "real", "ratio", "cmp", "sqrt(2):1", "sqrt(2):1", "--fuel", "8"],
            &["--format", "json", "pow", "2", "1/2", "-p", "20"],
            &["--format", "json", "multiple", "5", "2/3"],
            &["--format", "json", "laws", "run", "V.16-alternation", "--trials", "3"],
            &["--format", "json", "laws", "list"],
        ];
        for args in cases {
            let (_, out, err) = run_args(args);
            let parsed: Output = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e} {err}"));
            assert_eq!(parsed.render(Format::Json).trim(), out.trim());
        }
    }

    #[test]
    fn fourth_on_real_model_is_domain_error() {
        let (code, _, err) = run_args(&["--model", "real", "fourth", "1", "2", "3"]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("inexact"), "{err}");
    }

    #[test]
    fn precision_from_environment_is_overridden_by_flag() {
        // the env default is read by clap; -p wins over it
        let cli = Cli::try_parse_from(["magnitude", "-p", "12", "pow", "2", "2"]).unwrap();
        assert_eq!(cli.config.precision, 12);
    }
}
