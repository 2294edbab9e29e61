//! The full analysis pipeline: validate, build, decompose, verdict.
//!
//! Reports deliberately show both the closed-form expressions and the
//! lattice-computed quantities (for instance `4a - 24b + l` next to the
//! `P^2` of the actual decomposition) so any divergence is visible in the
//! output instead of buried. All report types serialize to JSON with
//! stable field order, and parsing + re-serializing is byte-identical.

use serde::{Deserialize, Serialize};

use crate::invariants::{invariants, InvariantError, InvariantReport};
use crate::lattice::DivisorClass;
use crate::pencil::{
    build_fibration, gonality_bounds, relative_minimality_check, validate_pencil,
    GonalityBounds, MinimalityCertificate, MinimalityVerdict, PencilSpec, ValidationErrors,
};
use crate::rat::Rat;
use crate::verdicts::{
    evaluate_all, AnalysisFlags, EffectivityAssertions, GateContext, HypothesisStatus,
    InequalitySuite, VerdictItem,
};
use crate::zariski::{
    closed_form_n1, closed_form_n2_n1prime, verify_decomposition, zariski_fujita,
    DecompositionError, DecompositionRecord, DivisorData, NegativeEntry, ZariskiDecomposition,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRequest {
    pub spec: PencilSpec,
    pub flags: AnalysisFlags,
    #[serde(default)]
    pub assertions: EffectivityAssertions,
}

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Validation(#[from] ValidationErrors),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
}

/// One adjoint decomposition with its audit and closed-form comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjointDecomposition {
    pub divisor: String,
    pub record: DecompositionRecord,
    pub verification_passed: bool,
    /// The closed-form count expression for `P^2` of this adjoint.
    pub formula_value: Rat,
    /// `None` when horizontal chains are present and the expression and
    /// the lattice square measure different divisors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula_matches_p_squared: Option<bool>,
    /// The closed-form negative part predicted by the chain combinatorics.
    pub closed_form_negative: Vec<NegativeEntry>,
    pub closed_form_matches: bool,
}

/// Lower bound for the number of singular fibers, conditional on the
/// user-declared semistability and non-isotriviality flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaReport {
    pub bound: Rat,
    /// Smallest integer strictly above the bound.
    pub sigma_at_least: i64,
    /// True when both flags were declared; otherwise the bound is
    /// informational only.
    pub applies: bool,
}

/// Cross-checks between independent computation routes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyChecks {
    /// Lattice `K_f^2` equals the closed degree formula.
    pub a_formula_matches_lattice: bool,
    /// Lattice `chi(C + 3K_S - N_1)` equals `3a - 19b + l + 1`.
    pub chi_formula_matches_lattice: bool,
    /// `P^2` of the `C + 2K_S` decomposition equals `4a - 24b + l`.
    pub adjoint_two_p_squared_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub request: AnalysisRequest,
    pub invariants: InvariantReport,
    pub gonality: GonalityBounds,
    pub minimality: MinimalityCertificate,
    pub adjoint_two: AdjointDecomposition,
    pub adjoint_three: AdjointDecomposition,
    pub inequalities: InequalitySuite,
    pub sigma: SigmaReport,
    pub consistency: ConsistencyChecks,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn any_gated_failure(&self) -> bool {
        self.inequalities.any_gated_failure()
    }
}

fn merge_closed_form(
    parts: Vec<(Vec<(String, Rat)>, Rat)>,
    order: impl Fn(&str) -> usize,
) -> Vec<NegativeEntry> {
    let mut merged: Vec<(String, Rat)> = Vec::new();
    for (mults, scale) in parts {
        for (label, value) in mults {
            let scaled = &value * &scale;
            if scaled.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|(l, _)| *l == label) {
                Some((_, existing)) => *existing += &scaled,
                None => merged.push((label, scaled)),
            }
        }
    }
    merged.sort_by_key(|(label, _)| order(label));
    merged
        .into_iter()
        .map(|(label, multiplicity)| NegativeEntry { label, multiplicity })
        .collect()
}

fn decomposition_entry(
    divisor: &str,
    dec: &ZariskiDecomposition,
    verification_passed: bool,
    formula_value: Rat,
    formula_comparable: bool,
    closed_form_negative: Vec<NegativeEntry>,
) -> AdjointDecomposition {
    let record = dec.record();
    let closed_form_matches = record.negative == closed_form_negative;
    AdjointDecomposition {
        divisor: divisor.to_string(),
        verification_passed,
        formula_matches_p_squared: formula_comparable
            .then(|| record.p_squared == formula_value),
        formula_value,
        closed_form_matches,
        closed_form_negative,
        record,
    }
}

/// Runs the whole pipeline on a pencil spec.
pub fn analyze(request: &AnalysisRequest) -> Result<AnalysisReport, AnalysisError> {
    let validated = validate_pencil(request.spec.clone())?;
    let model = build_fibration(&validated);
    let inv = invariants(&model)?;
    let gonality = gonality_bounds(&validated);
    let minimality = relative_minimality_check(&validated);

    let catalog = &model.catalog;
    let d2 = DivisorData::adjoint(&model.surface, &model.fiber, 2, catalog)?;
    let dec2 = zariski_fujita(&d2, catalog)?;
    let ver2 = verify_decomposition(&dec2, catalog)?;
    let d3 = DivisorData::adjoint(&model.surface, &model.fiber, 3, catalog)?;
    let dec3 = zariski_fujita(&d3, catalog)?;
    let ver3 = verify_decomposition(&dec3, catalog)?;

    let n1 = closed_form_n1(catalog)?;
    let parts = closed_form_n2_n1prime(catalog)?;
    let catalog_order = |label: &str| catalog.index_of(label).unwrap_or(usize::MAX);

    let formula_two = Rat::from(4 * inv.a - 24 * inv.b + inv.l);
    let adjoint_two = decomposition_entry(
        "C+2K_S",
        &dec2,
        ver2.all_pass(),
        formula_two.clone(),
        true,
        merge_closed_form(
            vec![(n1.multiplicities.clone(), Rat::one())],
            catalog_order,
        ),
    );

    let formula_three = Rat::from(9 * inv.a - 60 * inv.b + 4 * inv.l + inv.l_prime + inv.m);
    let adjoint_three = decomposition_entry(
        "C+3K_S",
        &dec3,
        ver3.all_pass(),
        formula_three,
        inv.l_prime == 0,
        merge_closed_form(
            vec![
                (n1.multiplicities.clone(), Rat::from(2)),
                (parts.n1_prime_multiplicities.clone(), Rat::one()),
                (parts.n2_multiplicities.clone(), Rat::one()),
            ],
            catalog_order,
        ),
    );

    let ctx = GateContext {
        g: inv.g,
        k_t_squared: inv.k_t_squared,
        gonality,
        flags: request.flags,
        assertions: request.assertions,
    };
    let inequalities = evaluate_all(&inv, &ctx, Some(dec3.p_squared()));

    let sigma_bound = &inv.sigma_lower_bound;
    let floor = sigma_bound.floor_i64().unwrap_or(i64::MAX - 1);
    let sigma = SigmaReport {
        bound: sigma_bound.clone(),
        sigma_at_least: floor + 1,
        applies: request.flags.semistable && request.flags.non_isotrivial,
    };

    // chi(C + 3K_S - N_1) from the lattice, against 3a - 19b + l + 1.
    let chi_lattice = chi_triple_adjoint_minus_n1(&model, &n1.multiplicities)?;
    let consistency = ConsistencyChecks {
        a_formula_matches_lattice: inv.a
            == crate::invariants::k_f_squared_closed_form(model.family, inv.l, inv.m),
        chi_formula_matches_lattice: chi_lattice
            == Rat::from(3 * inv.a - 19 * inv.b + inv.l + 1),
        adjoint_two_p_squared_matches: *dec2.p_squared() == formula_two,
    };

    let notes = collect_notes(
        &inv,
        &ctx,
        &minimality,
        &adjoint_two,
        &adjoint_three,
        &inequalities,
        parts.n1_prime_square_matches,
        &consistency,
    );

    Ok(AnalysisReport {
        request: request.clone(),
        invariants: inv,
        gonality,
        minimality,
        adjoint_two,
        adjoint_three,
        inequalities,
        sigma,
        consistency,
        notes,
    })
}

fn chi_triple_adjoint_minus_n1(
    model: &crate::invariants::FibrationModel,
    n1: &[(String, Rat)],
) -> Result<Rat, AnalysisError> {
    let k = model.surface.canonical_class();
    let mut class: DivisorClass = model
        .fiber
        .checked_add(&k.scaled(&Rat::from(3)))
        .map_err(DecompositionError::from)?;
    for (label, mult) in n1 {
        let idx = model
            .catalog
            .index_of(label)
            .ok_or_else(|| DecompositionError::UnknownLabel(label.clone()))?;
        let curve_class = model.catalog.entry(idx).class.as_ref().ok_or_else(|| {
            DecompositionError::MissingClass(label.clone())
        })?;
        class = class
            .checked_sub(&curve_class.scaled(mult))
            .map_err(DecompositionError::from)?;
    }
    Ok(model
        .surface
        .chi_riemann_roch(&class)
        .map_err(DecompositionError::from)?)
}

#[allow(clippy::too_many_arguments)]
fn collect_notes(
    inv: &InvariantReport,
    ctx: &GateContext,
    minimality: &MinimalityCertificate,
    adjoint_two: &AdjointDecomposition,
    adjoint_three: &AdjointDecomposition,
    suite: &InequalitySuite,
    n1_prime_square_matches: bool,
    consistency: &ConsistencyChecks,
) -> Vec<String> {
    let mut notes = Vec::new();

    if !consistency.a_formula_matches_lattice {
        notes.push("INTERNAL: closed degree formula for K_f^2 disagrees with the lattice".into());
    }
    if !consistency.chi_formula_matches_lattice {
        notes.push(
            "INTERNAL: lattice chi(C+3K_S-N_1) disagrees with 3a - 19b + l + 1".into(),
        );
    }
    if !consistency.adjoint_two_p_squared_matches {
        notes.push("INTERNAL: P^2 of C+2K_S disagrees with 4a - 24b + l".into());
    }

    match crate::verdicts::hypothesis_gate(VerdictItem::AdjointTwoNef, ctx) {
        HypothesisStatus::Met if ctx.assertions.adjoint_two => {
            notes.push("effectivity of C+2K_S granted by explicit assertion".into())
        }
        HypothesisStatus::Met => notes.push(
            "effectivity of C+2K_S granted by g >= 7 and gonality >= 4".into(),
        ),
        HypothesisStatus::ConditionalOnGonality => notes.push(
            "effectivity of C+2K_S granted conditionally on the asserted gonality".into(),
        ),
        HypothesisStatus::NotMet => {}
    }
    match crate::verdicts::hypothesis_gate(VerdictItem::AdjointThreeNef, ctx) {
        HypothesisStatus::Met if ctx.assertions.adjoint_three_minus_n1 => {
            notes.push("effectivity of C+3K_S-N_1 granted by explicit assertion".into())
        }
        HypothesisStatus::Met => notes.push(
            "effectivity of C+3K_S-N_1 granted by g >= 23 and gonality >= 6".into(),
        ),
        HypothesisStatus::ConditionalOnGonality => notes.push(
            "effectivity of C+3K_S-N_1 granted conditionally on the asserted gonality".into(),
        ),
        HypothesisStatus::NotMet => {}
    }

    if suite.adjoint_two.corollary_applicable {
        notes.push(format!(
            "l + 1 = {} <= b = {}: the bigness bound alone forces 6b <= a",
            inv.l + 1,
            inv.b
        ));
    }
    if suite.adjoint_three.remark_fires {
        notes.push(format!(
            "4l + l' + m = {} <= 6b = {}: sufficient condition for 6b <= a fires",
            suite.adjoint_three.remark_lhs, suite.adjoint_three.remark_rhs
        ));
    }
    if minimality.verdict == MinimalityVerdict::NotCertified {
        notes.push(
            "relative minimality not certified: the necessary-condition method is inconclusive"
                .into(),
        );
    }
    if minimality.threshold_discrepancy {
        notes.push(
            "DISCREPANCY: a candidate component survives although the family is above the certified thresholds"
                .into(),
        );
    }
    if !n1_prime_square_matches {
        notes.push(
            "horizontal chain square differs from -l'; both values are reported in the decomposition data"
                .into(),
        );
    }
    if !adjoint_two.closed_form_matches {
        notes.push("algorithmic negative part of C+2K_S differs from the closed form".into());
    }
    if !adjoint_three.closed_form_matches {
        notes.push(
            "algorithmic negative part of C+3K_S differs from the closed form 2N_1 + N_1' + N_2"
                .into(),
        );
    }
    if suite.slope_polynomial.verdict.is_none() {
        notes.push("slope polynomial degenerates (a = 4b); no positivity verdict".into());
    }
    for v in &suite.verdicts {
        if v.gated() && !v.holds && v.item != VerdictItem::SixBMargin {
            notes.push(format!(
                "verdict {} fails under a met gate: the model is inconsistent with the hypotheses",
                v.item.name()
            ));
        }
    }
    notes
}
