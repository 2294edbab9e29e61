//! Command-line front end.
//!
//! Exit codes are a stable contract: 0 on success with all gated verdicts
//! holding, 1 on input errors (schema, validation, solver failures), 2
//! when a gated verdict fails (or the self-test reports failures).

mod specfile;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fibslope::analysis::{analyze, AnalysisError};
use fibslope::rat::Rat;
use fibslope::report::{
    analysis_csv, analysis_markdown, search_table_csv, search_table_markdown,
};
use fibslope::search::{run_search, InclusiveRange, SearchConstraint, SearchFamily, SearchRequest};
use fibslope::selftest::run_selftest;
use fibslope::zariski::{verify_decomposition, zariski_fujita, DivisorData};

#[derive(Parser)]
#[command(name = "fibslope", version, about = "Exact slope-inequality toolkit for fibrations on rational surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Md,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a pencil spec: invariants, decompositions, all verdicts.
    Analyze {
        /// Path to the pencil spec JSON.
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "md")]
        format: OutputFormat,
    },
    /// Sweep a pencil family and print the qualifying parameter tuples.
    Search(SearchArgs),
    /// Print the Zariski-Fujita decomposition of an adjoint divisor.
    Decompose {
        /// Path to the pencil spec JSON.
        spec: PathBuf,
        /// Named adjoint divisor: C+2K or C+3K.
        #[arg(long, conflicts_with = "class")]
        divisor: Option<String>,
        /// Explicit divisor class: JSON array of rational strings in the
        /// standard basis, e.g. '["9", "2", "1"]'.
        #[arg(long)]
        class: Option<String>,
    },
    /// Run the golden self-test suite.
    Selftest,
}

#[derive(Args)]
struct SearchArgs {
    /// Family to sweep.
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Degree range for the plane families, e.g. 12..24 or 18.
    #[arg(long, value_parser = parse_range)]
    degree: Option<InclusiveRange>,
    /// Alpha range for the quadric family.
    #[arg(long, value_parser = parse_range)]
    alpha: Option<InclusiveRange>,
    /// Beta range for the quadric family.
    #[arg(long, value_parser = parse_range)]
    beta: Option<InclusiveRange>,
    /// Node-count range.
    #[arg(long, value_parser = parse_range)]
    nodes: Option<InclusiveRange>,
    /// Comma-separated constraints:
    /// balance, mobility, relmin, 4l+m<=6b, a=6b.
    #[arg(long, default_value = "")]
    constraints: String,
    #[arg(long, value_enum, default_value = "md")]
    format: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    PlaneNodal,
    F0Nodal,
    PlaneSmooth,
}

impl From<FamilyArg> for SearchFamily {
    fn from(f: FamilyArg) -> SearchFamily {
        match f {
            FamilyArg::PlaneNodal => SearchFamily::PlaneNodal,
            FamilyArg::F0Nodal => SearchFamily::F0Nodal,
            FamilyArg::PlaneSmooth => SearchFamily::PlaneSmooth,
        }
    }
}

fn parse_range(text: &str) -> Result<InclusiveRange, String> {
    let parse_u32 =
        |s: &str| s.trim().parse::<u32>().map_err(|e| format!("bad range bound {s:?}: {e}"));
    match text.split_once("..") {
        Some((lo, hi)) => Ok(InclusiveRange::new(parse_u32(lo)?, parse_u32(hi)?)),
        None => {
            let v = parse_u32(text)?;
            Ok(InclusiveRange::new(v, v))
        }
    }
}

fn parse_constraints(text: &str) -> Result<Vec<SearchConstraint>> {
    let mut out = Vec::new();
    for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let c = match token {
            "balance" => SearchConstraint::Balance,
            "mobility" => SearchConstraint::Mobility,
            "relmin" => SearchConstraint::RelMin,
            "4l+m<=6b" => SearchConstraint::FourLPlusMLeSixB,
            "a=6b" => SearchConstraint::EqualityAEqSixB,
            other => bail!(
                "unknown constraint {other:?}; expected balance, mobility, relmin, 4l+m<=6b or a=6b"
            ),
        };
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Ok(out)
}

fn read_request(path: &PathBuf) -> Result<fibslope::analysis::AnalysisRequest> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read spec file {}", path.display()))?;
    specfile::parse_request(&text)
}

fn cmd_analyze(spec: &PathBuf, format: OutputFormat) -> Result<u8> {
    let request = read_request(spec)?;
    let report = match analyze(&request) {
        Ok(r) => r,
        Err(AnalysisError::Validation(errors)) => {
            eprint!("{errors}");
            return Ok(1);
        }
        Err(other) => return Err(other.into()),
    };
    match format {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        OutputFormat::Md => print!("{}", analysis_markdown(&report)),
        OutputFormat::Csv => print!("{}", analysis_csv(&report)),
    }
    Ok(if report.any_gated_failure() { 2 } else { 0 })
}

fn cmd_search(args: &SearchArgs) -> Result<u8> {
    let request = SearchRequest {
        family: args.family.into(),
        degree: args.degree,
        alpha: args.alpha,
        beta: args.beta,
        nodes: args.nodes,
        constraints: parse_constraints(&args.constraints)?,
    };
    let rows = run_search(&request)?;
    match args.format {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
        OutputFormat::Md => print!("{}", search_table_markdown(&rows)),
        OutputFormat::Csv => print!("{}", search_table_csv(&rows)),
    }
    Ok(0)
}

fn cmd_decompose(spec: &PathBuf, divisor: Option<&str>, class: Option<&str>) -> Result<u8> {
    let request = read_request(spec)?;
    let validated = fibslope::pencil::validate_pencil(request.spec.clone()).map_err(|e| anyhow!("{e}"))?;
    let model = fibslope::pencil::build_fibration(&validated);

    let data = match (divisor, class) {
        (Some(name), None) => {
            let n = match name {
                "C+2K" | "C+2K_S" => 2,
                "C+3K" | "C+3K_S" => 3,
                other => bail!("unknown divisor {other:?}; expected C+2K or C+3K"),
            };
            DivisorData::adjoint(&model.surface, &model.fiber, n, &model.catalog)?
        }
        (None, Some(json)) => {
            let coefficients: Vec<Rat> =
                serde_json::from_str(json).context("class must be a JSON array of rationals")?;
            let class = model
                .surface
                .class_from_coefficients(coefficients)
                .map_err(|e| anyhow!("{e}"))?;
            DivisorData::from_class(class, &model.surface, &model.catalog)?
        }
        _ => bail!("exactly one of --divisor or --class is required"),
    };

    let dec = zariski_fujita(&data, &model.catalog)?;
    let verification = verify_decomposition(&dec, &model.catalog)?;
    println!("{}", serde_json::to_string_pretty(&dec.record())?);
    if !verification.all_pass() {
        eprintln!("warning: decomposition failed verification: {verification:?}");
    }
    Ok(0)
}

fn cmd_selftest() -> u8 {
    let report = run_selftest();
    print!("{}", report.render());
    if report.all_passed() {
        0
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze { spec, format } => cmd_analyze(spec, *format),
        Command::Search(args) => cmd_search(args),
        Command::Decompose { spec, divisor, class } => {
            cmd_decompose(spec, divisor.as_deref(), class.as_deref())
        }
        Command::Selftest => Ok(cmd_selftest()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
