//! The slope inequality suite.
//!
//! Each check evaluates one exact quantity in the shorthand `a = K_f^2`,
//! `b = g - 1` and decides the verdict from its sign alone. Hypotheses
//! (genus thresholds, gonality bounds, user-declared semistability) are
//! tracked separately as gate statuses: a verdict is always evaluated, the
//! gate records whether its hypotheses grant it meaning. Gonality legs met
//! only through a user assertion downgrade the gate to conditional.
//!
//! The square-root comparison in the genus bound is done by integer
//! squaring with explicit sign bookkeeping; nothing here touches floating
//! point.

use serde::{Deserialize, Serialize};

use crate::invariants::InvariantReport;
use crate::pencil::GonalityBounds;
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictItem {
    /// `0 <= a - 5b` (granted effectivity of `C + 2K_S` forces the bound).
    FiveBBound,
    /// `0 <= 4a - 24b + l`: the nef part of `C + 2K_S` has nonnegative square.
    AdjointTwoNef,
    /// `0 <= 3a - 19b + l + 1`: bigness of the nef part of `C + 2K_S`.
    AdjointTwoBig,
    /// `l <= 5b/2 + 14`: bound on the section-chain total.
    SectionChainBound,
    /// `(5 + 1/2)b - 5 <= a`: uniform slope bound.
    ElevenHalvesBound,
    /// `chi(C + 3K_S - N_1) >= 1`: the granted effectivity of the triple adjoint.
    AdjointThreeEffective,
    /// `0 <= 9a - 60b + 4l + l' + m`: nef part of `C + 3K_S`.
    AdjointThreeNef,
    /// `q(n) > 0` for all integers `n` in `[-10, 10]`.
    SlopePolynomialPositive,
    /// `6b + 4 - 4*sqrt(g) <= a`, decided by integer squaring.
    SqrtGenusBound,
    /// The target property `6b <= a`, reported as the margin `a - 6b`.
    SixBMargin,
}

impl VerdictItem {
    pub const ALL: [VerdictItem; 10] = [
        VerdictItem::FiveBBound,
        VerdictItem::AdjointTwoNef,
        VerdictItem::AdjointTwoBig,
        VerdictItem::SectionChainBound,
        VerdictItem::ElevenHalvesBound,
        VerdictItem::AdjointThreeEffective,
        VerdictItem::AdjointThreeNef,
        VerdictItem::SlopePolynomialPositive,
        VerdictItem::SqrtGenusBound,
        VerdictItem::SixBMargin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VerdictItem::FiveBBound => "five_b_bound",
            VerdictItem::AdjointTwoNef => "adjoint_two_nef",
            VerdictItem::AdjointTwoBig => "adjoint_two_big",
            VerdictItem::SectionChainBound => "section_chain_bound",
            VerdictItem::ElevenHalvesBound => "eleven_halves_bound",
            VerdictItem::AdjointThreeEffective => "adjoint_three_effective",
            VerdictItem::AdjointThreeNef => "adjoint_three_nef",
            VerdictItem::SlopePolynomialPositive => "slope_polynomial_positive",
            VerdictItem::SqrtGenusBound => "sqrt_genus_bound",
            VerdictItem::SixBMargin => "six_b_margin",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisStatus {
    Met,
    NotMet,
    ConditionalOnGonality,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub item: VerdictItem,
    pub hypothesis_status: HypothesisStatus,
    pub evaluated_value: Rat,
    pub holds: bool,
    pub formula_text: String,
}

impl VerdictReport {
    /// A gated verdict counts toward the exit status; an ungated one is
    /// informational only.
    pub fn gated(&self) -> bool {
        matches!(
            self.hypothesis_status,
            HypothesisStatus::Met | HypothesisStatus::ConditionalOnGonality
        )
    }
}

/// User-declared analysis flags. The lattice cannot decide either
/// property; they are carried into reports as assumptions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisFlags {
    pub semistable: bool,
    pub non_isotrivial: bool,
}

/// Explicit effectivity grants, for callers that know more than the
/// numeric gates do.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectivityAssertions {
    pub adjoint_two: bool,
    pub adjoint_three_minus_n1: bool,
}

/// Everything the gates need to know about a model.
#[derive(Clone, Debug)]
pub struct GateContext {
    pub g: i64,
    pub k_t_squared: i64,
    pub gonality: GonalityBounds,
    pub flags: AnalysisFlags,
    pub assertions: EffectivityAssertions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Leg {
    Met,
    Conditional,
    NotMet,
}

impl GateContext {
    fn gonality_at_least(&self, required: u32) -> Leg {
        match self.gonality.lower {
            Some(lower) if lower >= required => {
                if self.gonality.assumed {
                    Leg::Conditional
                } else {
                    Leg::Met
                }
            }
            _ => Leg::NotMet,
        }
    }

    fn combine(&self, numeric_ok: bool, gonality: Leg) -> HypothesisStatus {
        if !numeric_ok {
            return HypothesisStatus::NotMet;
        }
        match gonality {
            Leg::Met => HypothesisStatus::Met,
            Leg::Conditional => HypothesisStatus::ConditionalOnGonality,
            Leg::NotMet => HypothesisStatus::NotMet,
        }
    }
}

/// Gate status for one item.
pub fn hypothesis_gate(item: VerdictItem, ctx: &GateContext) -> HypothesisStatus {
    let g = ctx.g;
    let b = g - 1;
    match item {
        VerdictItem::FiveBBound => ctx.combine(b >= 6, ctx.gonality_at_least(4)),
        VerdictItem::AdjointTwoNef => {
            if ctx.assertions.adjoint_two {
                HypothesisStatus::Met
            } else {
                ctx.combine(g >= 7, ctx.gonality_at_least(4))
            }
        }
        VerdictItem::AdjointTwoBig
        | VerdictItem::SectionChainBound
        | VerdictItem::ElevenHalvesBound => ctx.combine(g >= 11, ctx.gonality_at_least(5)),
        VerdictItem::AdjointThreeEffective => ctx.combine(g >= 23, ctx.gonality_at_least(6)),
        VerdictItem::AdjointThreeNef => {
            if ctx.assertions.adjoint_three_minus_n1 {
                HypothesisStatus::Met
            } else {
                ctx.combine(g >= 23, ctx.gonality_at_least(6))
            }
        }
        VerdictItem::SlopePolynomialPositive => {
            // The positivity of q at all integers needs the relative
            // canonical class big and nef on top of the user flags.
            if ctx.flags.semistable && ctx.flags.non_isotrivial {
                ctx.combine(g >= 11, ctx.gonality_at_least(5))
            } else {
                HypothesisStatus::NotMet
            }
        }
        VerdictItem::SqrtGenusBound => ctx.combine(
            (11..=49).contains(&g) && ctx.k_t_squared < 0,
            ctx.gonality_at_least(5),
        ),
        VerdictItem::SixBMargin => HypothesisStatus::Met,
    }
}

/// All gate statuses in canonical item order.
pub fn hypothesis_gates(ctx: &GateContext) -> Vec<(VerdictItem, HypothesisStatus)> {
    VerdictItem::ALL
        .iter()
        .map(|&item| (item, hypothesis_gate(item, ctx)))
        .collect()
}

fn report(
    item: VerdictItem,
    ctx: &GateContext,
    evaluated_value: Rat,
    holds: bool,
    formula_text: &str,
) -> VerdictReport {
    VerdictReport {
        item,
        hypothesis_status: hypothesis_gate(item, ctx),
        evaluated_value,
        holds,
        formula_text: formula_text.to_string(),
    }
}

pub fn five_b_bound(inv: &InvariantReport, ctx: &GateContext) -> VerdictReport {
    let value = Rat::from(inv.a - 5 * inv.b);
    let holds = !value.is_negative();
    report(VerdictItem::FiveBBound, ctx, value, holds, "0 <= a - 5b")
}

/// The two bounds extracted from the decomposition of `C + 2K_S`, plus the
/// corollary: when `l + 1 <= b` the bigness bound already forces `6b <= a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjointTwoReport {
    pub nef_bound: VerdictReport,
    pub big_bound: VerdictReport,
    /// `l + 1 <= b`, the hypothesis of the corollary.
    pub corollary_applicable: bool,
    /// `a - 6b`, reported with the corollary either way.
    pub corollary_margin: i64,
}

#[allow(clippy::int_plus_one)] // `l + 1 <= b` is the literal corollary hypothesis
pub fn adjoint_two_bounds(inv: &InvariantReport, ctx: &GateContext) -> AdjointTwoReport {
    let nef_value = Rat::from(4 * inv.a - 24 * inv.b + inv.l);
    let big_value = Rat::from(3 * inv.a - 19 * inv.b + inv.l + 1);
    AdjointTwoReport {
        nef_bound: report(
            VerdictItem::AdjointTwoNef,
            ctx,
            nef_value.clone(),
            !nef_value.is_negative(),
            "0 <= 4a - 24b + l",
        ),
        big_bound: report(
            VerdictItem::AdjointTwoBig,
            ctx,
            big_value.clone(),
            !big_value.is_negative(),
            "0 <= 3a - 19b + l + 1",
        ),
        corollary_applicable: inv.l + 1 <= inv.b,
        corollary_margin: inv.a - 6 * inv.b,
    }
}

pub fn section_chain_bound(inv: &InvariantReport, ctx: &GateContext) -> VerdictReport {
    // 5b/2 + 14 - l >= 0.
    let value = Rat::new(5 * inv.b, 2) + Rat::from(14) - Rat::from(inv.l);
    let holds = !value.is_negative();
    report(
        VerdictItem::SectionChainBound,
        ctx,
        value,
        holds,
        "l <= 5b/2 + 14",
    )
}

pub fn slope_eleven_halves(inv: &InvariantReport, ctx: &GateContext) -> VerdictReport {
    // a - (11b/2 - 5) >= 0.
    let value = Rat::from(inv.a) - (Rat::new(11 * inv.b, 2) - Rat::from(5));
    let holds = !value.is_negative();
    report(
        VerdictItem::ElevenHalvesBound,
        ctx,
        value,
        holds,
        "(5 + 1/2)b - 5 <= a",
    )
}

/// Effectivity of `C + 3K_S - N_1`: under the gate, the Euler
/// characteristic `3a - 19b + l + 1` counts its sections.
pub fn adjoint_three_effectivity(inv: &InvariantReport, ctx: &GateContext) -> VerdictReport {
    let value = Rat::from(3 * inv.a - 19 * inv.b + inv.l + 1);
    let holds = value >= Rat::one();
    report(
        VerdictItem::AdjointThreeEffective,
        ctx,
        value,
        holds,
        "chi(C + 3K_S - N_1) = 3a - 19b + l + 1 >= 1",
    )
}

/// The bound from the decomposition of `C + 3K_S`, with the expression
/// compared against the lattice `P^2` (they agree exactly when `l' = 0`;
/// otherwise both numbers are reported side by side), plus the remark:
/// `4l + l' + m <= 6b` is sufficient for `6b <= a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjointThreeReport {
    pub verdict: VerdictReport,
    pub expression: Rat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_p_squared: Option<Rat>,
    /// None when `l' > 0`: the expression and the lattice square measure
    /// different divisors there and are reported separately.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expression_matches_p_squared: Option<bool>,
    pub remark_lhs: i64,
    pub remark_rhs: i64,
    pub remark_fires: bool,
}

pub fn adjoint_three_bound(
    inv: &InvariantReport,
    ctx: &GateContext,
    lattice_p_squared: Option<&Rat>,
) -> AdjointThreeReport {
    let expression = Rat::from(9 * inv.a - 60 * inv.b + 4 * inv.l + inv.l_prime + inv.m);
    let holds = !expression.is_negative();
    let verdict = report(
        VerdictItem::AdjointThreeNef,
        ctx,
        expression.clone(),
        holds,
        "0 <= 9a - 60b + 4l + l' + m",
    );
    let remark_lhs = 4 * inv.l + inv.l_prime + inv.m;
    let remark_rhs = 6 * inv.b;
    AdjointThreeReport {
        verdict,
        expression: expression.clone(),
        expression_matches_p_squared: lattice_p_squared
            .filter(|_| inv.l_prime == 0)
            .map(|p2| *p2 == expression),
        lattice_p_squared: lattice_p_squared.cloned(),
        remark_lhs,
        remark_rhs,
        remark_fires: remark_lhs <= remark_rhs,
    }
}

/// The slope polynomial `q(x) = (a-4b)x^2 - (a-2b)x + (2b+2)` and its
/// derived quantities. Two algebraic identities hold unconditionally:
/// `q(1) = 2` and `q(0) = 2b + 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopePolynomialData {
    pub leading: i64,
    pub linear: i64,
    pub constant: i64,
    /// `(a-6b)^2 - 8(a-4b)`.
    pub discriminant: i64,
    /// Vertex abscissa `(a-2b) / (2(a-4b))`; `None` when `a = 4b`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<Rat>,
    /// The reciprocal-shaped variant `2(a-4b)/(a-2b)` of the critical
    /// value, reported alongside; under `a >= 5b` both lie in `(0, 2)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_reciprocal_form: Option<Rat>,
    /// `min q(n)` over integers `n` in `[-10, 10]`.
    pub min_on_window: Rat,
    /// When the discriminant is nonpositive: whether the derived bound
    /// `6b + 4 - 4*sqrt(g) <= a` holds (exact integer squaring).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sqrt_bound_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopePolynomialReport {
    pub data: SlopePolynomialData,
    /// `None` when the polynomial degenerates (`a = 4b`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictReport>,
}

pub fn evaluate_q(inv: &InvariantReport, n: i64) -> Rat {
    let a = inv.a;
    let b = inv.b;
    Rat::from((a - 4 * b) * n * n - (a - 2 * b) * n + 2 * b + 2)
}

/// Decides `6b + 4 - 4*sqrt(g) <= a` exactly: with `t = 6b + 4 - a`, the
/// bound holds iff `t <= 0` or `t^2 <= 16g`.
fn sqrt_genus_holds(a: i64, b: i64, g: i64) -> bool {
    let t = 6 * b + 4 - a;
    t <= 0 || t * t <= 16 * g
}

/// Signed rational whose sign decides the square-root bound:
/// `16g - sgn(t) t^2` with `t = 6b + 4 - a`.
fn sqrt_genus_value(a: i64, b: i64, g: i64) -> Rat {
    let t = 6 * b + 4 - a;
    Rat::from(16 * g - t.signum() * t * t)
}

pub fn slope_polynomial(inv: &InvariantReport, ctx: &GateContext) -> SlopePolynomialReport {
    let a = inv.a;
    let b = inv.b;
    let leading = a - 4 * b;
    let linear = a - 2 * b;
    let constant = 2 * b + 2;
    let discriminant = (a - 6 * b) * (a - 6 * b) - 8 * (a - 4 * b);

    let min_on_window = (-10..=10)
        .map(|n| evaluate_q(inv, n))
        .min()
        .expect("window is nonempty");

    let vertex = (leading != 0).then(|| Rat::from(linear) / Rat::from(2 * leading));
    let vertex_reciprocal_form =
        (linear != 0).then(|| Rat::from(2 * leading) / Rat::from(linear));
    let sqrt_bound_holds = (discriminant <= 0).then(|| sqrt_genus_holds(a, b, inv.g));

    let verdict = (leading != 0).then(|| {
        report(
            VerdictItem::SlopePolynomialPositive,
            ctx,
            min_on_window.clone(),
            min_on_window.is_positive(),
            "q(n) = (a-4b)n^2 - (a-2b)n + 2b + 2 > 0 for integers n in [-10, 10]",
        )
    });

    SlopePolynomialReport {
        data: SlopePolynomialData {
            leading,
            linear,
            constant,
            discriminant,
            vertex,
            vertex_reciprocal_form,
            min_on_window,
            sqrt_bound_holds,
        },
        verdict,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepCheck {
    pub description: String,
    pub lhs: Rat,
    pub rhs: Rat,
    pub holds: bool,
}

fn step(description: &str, lhs: Rat, rhs: Rat) -> StepCheck {
    let holds = lhs <= rhs;
    StepCheck {
        description: description.to_string(),
        lhs,
        rhs,
        holds,
    }
}

/// The square-root genus bound with its full derivation chain reported
/// step by step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqrtGenusReport {
    pub verdict: VerdictReport,
    pub k_t_squared: i64,
    pub chain_bound: StepCheck,
    pub slope_bound: StepCheck,
    pub discriminant_bound: StepCheck,
    pub final_bound: StepCheck,
}

pub fn sqrt_genus_bound(inv: &InvariantReport, ctx: &GateContext) -> SqrtGenusReport {
    let a = inv.a;
    let b = inv.b;
    let g = inv.g;
    let discriminant = (a - 6 * b) * (a - 6 * b) - 8 * (a - 4 * b);

    let chain_bound = step(
        "l + 1 <= 5b/2",
        Rat::from(inv.l + 1),
        Rat::new(5 * b, 2),
    );
    let slope_bound = step("11b/2 <= a", Rat::new(11 * b, 2), Rat::from(a));
    let discriminant_bound = step(
        "Delta_q <= b(b - 48)/4",
        Rat::from(discriminant),
        Rat::new(b * (b - 48), 4),
    );
    let holds = sqrt_genus_holds(a, b, g);
    let final_bound = StepCheck {
        description: "6b + 4 - 4*sqrt(g) <= a, via t = 6b + 4 - a: t <= 0 or t^2 <= 16g".into(),
        lhs: Rat::from(6 * b + 4 - a),
        rhs: Rat::from(16 * g),
        holds,
    };

    SqrtGenusReport {
        verdict: report(
            VerdictItem::SqrtGenusBound,
            ctx,
            sqrt_genus_value(a, b, g),
            holds,
            "6b + 4 - 4*sqrt(g) <= a (sign of 16g - sgn(t) t^2, t = 6b + 4 - a)",
        ),
        k_t_squared: inv.k_t_squared,
        chain_bound,
        slope_bound,
        discriminant_bound,
        final_bound,
    }
}

pub fn six_b_margin(inv: &InvariantReport, ctx: &GateContext) -> VerdictReport {
    let value = Rat::from(inv.six_b_margin);
    let holds = !value.is_negative();
    report(VerdictItem::SixBMargin, ctx, value, holds, "0 <= a - 6b")
}

/// The assembled suite: every verdict in canonical order plus the
/// per-check extras.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalitySuite {
    pub verdicts: Vec<VerdictReport>,
    pub adjoint_two: AdjointTwoReport,
    pub adjoint_three: AdjointThreeReport,
    pub slope_polynomial: SlopePolynomialReport,
    pub sqrt_genus: SqrtGenusReport,
}

impl InequalitySuite {
    /// True when some verdict whose gate is met (possibly conditionally)
    /// fails; a failed proven bound signals a model inconsistent with the
    /// hypotheses rather than a false bound.
    pub fn any_gated_failure(&self) -> bool {
        self.verdicts.iter().any(|v| v.gated() && !v.holds)
    }
}

pub fn evaluate_all(
    inv: &InvariantReport,
    ctx: &GateContext,
    adjoint_three_p_squared: Option<&Rat>,
) -> InequalitySuite {
    let adjoint_two = adjoint_two_bounds(inv, ctx);
    let adjoint_three = adjoint_three_bound(inv, ctx, adjoint_three_p_squared);
    let slope_poly = slope_polynomial(inv, ctx);
    let sqrt_genus = sqrt_genus_bound(inv, ctx);

    let mut verdicts = vec![
        five_b_bound(inv, ctx),
        adjoint_two.nef_bound.clone(),
        adjoint_two.big_bound.clone(),
        section_chain_bound(inv, ctx),
        slope_eleven_halves(inv, ctx),
        adjoint_three_effectivity(inv, ctx),
        adjoint_three.verdict.clone(),
    ];
    if let Some(v) = &slope_poly.verdict {
        verdicts.push(v.clone());
    }
    verdicts.push(sqrt_genus.verdict.clone());
    verdicts.push(six_b_margin(inv, ctx));

    InequalitySuite {
        verdicts,
        adjoint_two,
        adjoint_three,
        slope_polynomial: slope_poly,
        sqrt_genus,
    }
}
