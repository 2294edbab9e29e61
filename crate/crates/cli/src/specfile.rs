//! The JSON pencil-spec schema consumed by the CLI.
//!
//! The schema is strict: unknown fields are rejected so typos fail loudly
//! instead of silently defaulting.
//!
//! ```json
//! {
//!   "base": "P2" | "F0",
//!   "degree": 18 | [8, 8],
//!   "simple_points": 108,
//!   "nodes": 54,
//!   "chains": {"sections": [..], "horizontal": [..], "bisecants": [..]},
//!   "assumed_gonality": 6,
//!   "semistable": true,
//!   "non_isotrivial": true
//! }
//! ```
//!
//! `chains` and `assumed_gonality` are optional; `degree` must be a bare
//! integer for `P2` and a two-entry array for `F0`.

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use fibslope::analysis::AnalysisRequest;
use fibslope::catalog::ExceptionalChainSpec;
use fibslope::pencil::{PencilFamily, PencilSpec};
use fibslope::verdicts::{AnalysisFlags, EffectivityAssertions};

#[derive(Debug, Deserialize)]
enum BaseTag {
    P2,
    F0,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DegreeField {
    Plane(u32),
    Bidegree([u32; 2]),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainsField {
    #[serde(default)]
    sections: Vec<u32>,
    #[serde(default)]
    horizontal: Vec<u32>,
    #[serde(default)]
    bisecants: Vec<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    base: BaseTag,
    degree: DegreeField,
    simple_points: u64,
    nodes: u64,
    #[serde(default)]
    chains: ChainsField,
    #[serde(default)]
    assumed_gonality: Option<u32>,
    semistable: bool,
    non_isotrivial: bool,
}

/// Parses a spec file into an analysis request.
pub fn parse_request(json: &str) -> Result<AnalysisRequest> {
    let file: SpecFile = serde_json::from_str(json).context("spec JSON does not match the schema")?;
    let family = match (&file.base, &file.degree) {
        (BaseTag::P2, DegreeField::Plane(d)) => PencilFamily::Plane { degree: *d },
        (BaseTag::F0, DegreeField::Bidegree([alpha, beta])) => PencilFamily::RuledQuadric {
            alpha: *alpha,
            beta: *beta,
        },
        (BaseTag::P2, DegreeField::Bidegree(_)) => {
            bail!("base \"P2\" takes an integer degree, not a bidegree pair")
        }
        (BaseTag::F0, DegreeField::Plane(_)) => {
            bail!("base \"F0\" takes a two-entry bidegree, not an integer degree")
        }
    };
    let spec = PencilSpec {
        family,
        simple_points: file.simple_points,
        nodes: file.nodes,
        chains: ExceptionalChainSpec {
            section_chains: file.chains.sections,
            horizontal_chains: file.chains.horizontal,
            bisecant_chains: file.chains.bisecants,
        },
        assumed_gonality: file.assumed_gonality,
    };
    Ok(AnalysisRequest {
        spec,
        flags: AnalysisFlags {
            semistable: file.semistable,
            non_isotrivial: file.non_isotrivial,
        },
        assertions: EffectivityAssertions::default(),
    })
}
