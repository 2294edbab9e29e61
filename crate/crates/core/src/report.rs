//! Plain-text renderings of analysis reports and search tables.
//!
//! Output is deterministic: UTF-8, LF line endings, fixed section order.

use std::fmt::Write as _;

use crate::analysis::{AdjointDecomposition, AnalysisReport};
use crate::pencil::MinimalityVerdict;
use crate::search::SearchRow;
use crate::verdicts::{HypothesisStatus, VerdictReport};

fn status_text(s: HypothesisStatus) -> &'static str {
    match s {
        HypothesisStatus::Met => "met",
        HypothesisStatus::NotMet => "not met",
        HypothesisStatus::ConditionalOnGonality => "conditional on gonality",
    }
}

fn verdict_text(v: &VerdictReport) -> &'static str {
    if v.holds {
        "holds"
    } else {
        "fails"
    }
}

/// One row per inequality: gate, value, verdict.
pub fn verdict_table_markdown(verdicts: &[VerdictReport]) -> String {
    let mut out = String::new();
    out.push_str("| item | hypothesis | value | verdict | formula |\n");
    out.push_str("|---|---|---|---|---|\n");
    for v in verdicts {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | `{}` |",
            v.item.name(),
            status_text(v.hypothesis_status),
            v.evaluated_value,
            verdict_text(v),
            v.formula_text
        );
    }
    out
}

fn decomposition_section(out: &mut String, dec: &AdjointDecomposition) {
    let _ = writeln!(out, "### Decomposition of {}\n", dec.divisor);
    if dec.record.negative.is_empty() {
        out.push_str("Negative part: empty (the divisor is already catalog-nef).\n");
    } else {
        out.push_str("Negative part (label: multiplicity):\n");
        let mut compact: Vec<String> = Vec::new();
        for entry in &dec.record.negative {
            compact.push(format!("{}: {}", entry.label, entry.multiplicity));
        }
        // Long catalogs are summarized by multiplicity pattern.
        if compact.len() > 16 {
            let _ = writeln!(
                out,
                "  {} curves; first entries: {} ...",
                compact.len(),
                compact[..8].join(", ")
            );
        } else {
            let _ = writeln!(out, "  {}", compact.join(", "));
        }
    }
    let _ = writeln!(out, "P^2 = {}", dec.record.p_squared);
    let _ = writeln!(out, "count expression = {}", dec.formula_value);
    match dec.formula_matches_p_squared {
        Some(true) => out.push_str("count expression matches P^2 exactly.\n"),
        Some(false) => out.push_str("MISMATCH: count expression differs from P^2.\n"),
        None => out.push_str(
            "horizontal chains present: expression and P^2 reported separately.\n",
        ),
    }
    let _ = writeln!(
        out,
        "closed-form negative part {} the algorithmic one.",
        if dec.closed_form_matches { "matches" } else { "differs from" }
    );
    let _ = writeln!(
        out,
        "verification: {}",
        if dec.verification_passed { "pass" } else { "FAIL" }
    );
    out.push('\n');
}

/// Full analysis report as markdown.
pub fn analysis_markdown(report: &AnalysisReport) -> String {
    let mut out = String::new();
    let inv = &report.invariants;
    out.push_str("# Fibration analysis\n\n");
    out.push_str("## Invariants\n\n");
    let _ = writeln!(out, "- g = {}, b = {}, a = K_f^2 = {}", inv.g, inv.b, inv.a);
    let _ = writeln!(out, "- slope = {}", inv.slope);
    let _ = writeln!(out, "- l = {}, l' = {}, m = {}", inv.l, inv.l_prime, inv.m);
    let _ = writeln!(out, "- K_T^2 = {}", inv.k_t_squared);
    let _ = writeln!(out, "- margin a - 6b = {}", inv.six_b_margin);
    let _ = writeln!(
        out,
        "- sigma lower bound = {} (sigma >= {}){}",
        report.sigma.bound,
        report.sigma.sigma_at_least,
        if report.sigma.applies {
            ""
        } else {
            " [not applicable: semistable/non-isotrivial flags unset]"
        }
    );
    let gon = &report.gonality;
    let fmt_bound = |b: Option<u32>| b.map_or("?".to_string(), |v| v.to_string());
    let _ = writeln!(
        out,
        "- gonality in [{}, {}]{}{}",
        fmt_bound(gon.lower),
        fmt_bound(gon.upper),
        if gon.caveat { " (upper bound only; could be lower)" } else { "" },
        if gon.assumed { " (lower bound user-asserted)" } else { "" }
    );
    let _ = writeln!(
        out,
        "- relative minimality: {}",
        match report.minimality.verdict {
            MinimalityVerdict::Certified => "certified",
            MinimalityVerdict::NotCertified => "not certified (method inconclusive)",
        }
    );
    out.push('\n');

    out.push_str("## Zariski-Fujita decompositions\n\n");
    decomposition_section(&mut out, &report.adjoint_two);
    decomposition_section(&mut out, &report.adjoint_three);

    out.push_str("## Slope polynomial\n\n");
    let sp = &report.inequalities.slope_polynomial.data;
    let _ = writeln!(
        out,
        "q(x) = {}x^2 - {}x + {}, discriminant = {}, min on [-10,10] = {}",
        sp.leading, sp.linear, sp.constant, sp.discriminant, sp.min_on_window
    );
    if let (Some(v), Some(w)) = (&sp.vertex, &sp.vertex_reciprocal_form) {
        let _ = writeln!(out, "vertex = {v} (reciprocal form: {w})");
    }
    out.push('\n');

    out.push_str("## Verdicts\n\n");
    out.push_str(&verdict_table_markdown(&report.inequalities.verdicts));
    out.push('\n');

    if !report.notes.is_empty() {
        out.push_str("## Notes\n\n");
        for note in &report.notes {
            let _ = writeln!(out, "- {note}");
        }
    }
    out
}

/// CSV rendering: invariants as `invariant` rows, verdicts as `verdict` rows.
pub fn analysis_csv(report: &AnalysisReport) -> String {
    let mut out = String::from("kind,name,value,status\n");
    let inv = &report.invariants;
    for (name, value) in [
        ("g", inv.g.to_string()),
        ("b", inv.b.to_string()),
        ("a", inv.a.to_string()),
        ("slope", inv.slope.to_string()),
        ("l", inv.l.to_string()),
        ("l_prime", inv.l_prime.to_string()),
        ("m", inv.m.to_string()),
        ("k_t_squared", inv.k_t_squared.to_string()),
        ("six_b_margin", inv.six_b_margin.to_string()),
        ("sigma_lower_bound", report.sigma.bound.to_string()),
        ("p_squared_c2k", report.adjoint_two.record.p_squared.to_string()),
        ("p_squared_c3k", report.adjoint_three.record.p_squared.to_string()),
    ] {
        let _ = writeln!(out, "invariant,{name},{value},");
    }
    for v in &report.inequalities.verdicts {
        let _ = writeln!(
            out,
            "verdict,{},{},{}",
            v.item.name(),
            v.evaluated_value,
            if v.gated() {
                verdict_text(v)
            } else {
                "ungated"
            }
        );
    }
    out
}

pub fn search_table_markdown(rows: &[SearchRow]) -> String {
    let mut out = String::new();
    out.push_str("| d | alpha | beta | g | a | b | l | m | margin |\n");
    out.push_str("|---|---|---|---|---|---|---|---|---|\n");
    for r in rows {
        let opt = |v: Option<u32>| v.map_or(String::new(), |x| x.to_string());
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} |",
            opt(r.d),
            opt(r.alpha),
            opt(r.beta),
            r.g,
            r.a,
            r.b,
            r.l,
            r.m,
            r.margin
        );
    }
    out
}

pub fn search_table_csv(rows: &[SearchRow]) -> String {
    let mut out = String::from("d,alpha,beta,g,a,b,l,m,margin\n");
    for r in rows {
        let opt = |v: Option<u32>| v.map_or(String::new(), |x| x.to_string());
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            opt(r.d),
            opt(r.alpha),
            opt(r.beta),
            r.g,
            r.a,
            r.b,
            r.l,
            r.m,
            r.margin
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{analyze, AnalysisRequest};
    use crate::pencil::PencilSpec;
    use crate::verdicts::{AnalysisFlags, EffectivityAssertions};

    #[test]
    fn markdown_and_csv_are_deterministic() {
        let request = AnalysisRequest {
            spec: PencilSpec::plane(18, 108, 54),
            flags: AnalysisFlags {
                semistable: true,
                non_isotrivial: true,
            },
            assertions: EffectivityAssertions::default(),
        };
        let report = analyze(&request).unwrap();
        let md1 = analysis_markdown(&report);
        let md2 = analysis_markdown(&report);
        assert_eq!(md1, md2);
        assert!(md1.contains("a = K_f^2 = 495"));
        assert!(md1.contains("| six_b_margin | met | 9 | holds |"));
        assert!(!md1.contains('\r'));

        let csv = analysis_csv(&report);
        assert!(csv.starts_with("kind,name,value,status\n"));
        assert!(csv.contains("invariant,a,495,"));
        assert!(csv.contains("verdict,six_b_margin,9,holds"));
    }
}
