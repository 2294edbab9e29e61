//! Pencil specifications and the fibration builder.
//!
//! A pencil spec describes a nodal pencil of plane curves of degree `d`
//! (or of bidegree `(alpha, beta)` curves on the quadric `F_0 = P^1 x P^1`)
//! with `l` simple base points and `m` nodes in the base locus. Blowing up
//! the base locus yields a fibration over `P^1` whose fiber class `C`
//! satisfies `C^2 = 0`; that is the balance equation `l + 4m = d^2`
//! (respectively `l + 4m = 2*alpha*beta`). Validation also checks that the
//! linear system is big enough to contain a pencil at all.
//!
//! Chain data refines the picture: a section carrying a vertical chain of
//! length `k` stands for a tower of `k+1` infinitely-near simple base
//! points, and similarly for bisecants and nodes, so chain lengths are
//! consistency-checked against the point counts.

use serde::{Deserialize, Serialize};

use crate::catalog::{CatalogBuilder, CurveCatalog, CurveKind, ExceptionalChainSpec};
use crate::invariants::{ChainTotals, FibrationModel};
use crate::lattice::{build_surface, BaseSurface, DivisorClass, SurfaceModel};
use crate::rat::Rat;

/// The two pencil families the builder supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PencilFamily {
    /// Degree-`d` pencil on the projective plane.
    Plane { degree: u32 },
    /// Bidegree-`(alpha, beta)` pencil on `F_0`.
    RuledQuadric { alpha: u32, beta: u32 },
}

impl PencilFamily {
    pub fn base(self) -> BaseSurface {
        match self {
            PencilFamily::Plane { .. } => BaseSurface::ProjectivePlane,
            PencilFamily::RuledQuadric { .. } => BaseSurface::Hirzebruch(0),
        }
    }

    /// `C_0^2` on the base surface: the total base-point budget.
    pub fn base_self_intersection(self) -> i64 {
        match self {
            PencilFamily::Plane { degree } => (degree as i64) * (degree as i64),
            PencilFamily::RuledQuadric { alpha, beta } => 2 * (alpha as i64) * (beta as i64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilSpec {
    pub family: PencilFamily,
    pub simple_points: u64,
    pub nodes: u64,
    #[serde(default)]
    pub chains: ExceptionalChainSpec,
    /// User-asserted lower bound for the gonality of the general fiber.
    /// Downstream verdicts that rely on it are tagged conditional.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assumed_gonality: Option<u32>,
}

impl PencilSpec {
    pub fn plane(degree: u32, simple_points: u64, nodes: u64) -> PencilSpec {
        PencilSpec {
            family: PencilFamily::Plane { degree },
            simple_points,
            nodes,
            chains: ExceptionalChainSpec::default(),
            assumed_gonality: None,
        }
    }

    pub fn ruled_quadric(alpha: u32, beta: u32, simple_points: u64, nodes: u64) -> PencilSpec {
        PencilSpec {
            family: PencilFamily::RuledQuadric { alpha, beta },
            simple_points,
            nodes,
            chains: ExceptionalChainSpec::default(),
            assumed_gonality: None,
        }
    }

    /// Smooth plane pencil preset: no nodes, `l = d^2` base points.
    pub fn smooth_plane(degree: u32) -> PencilSpec {
        PencilSpec::plane(degree, (degree as u64) * (degree as u64), 0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub constraint: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Rat>,
    pub message: String,
}

impl Violation {
    fn numeric(constraint: &str, lhs: i64, rhs: i64, message: String) -> Violation {
        Violation {
            constraint: constraint.into(),
            lhs: Some(Rat::from(lhs)),
            rhs: Some(Rat::from(rhs)),
            message,
        }
    }

    fn structural(constraint: &str, message: String) -> Violation {
        Violation {
            constraint: constraint.into(),
            lhs: None,
            rhs: None,
            message,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub struct ValidationErrors {
    pub violations: Vec<Violation>,
}

impl std::fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "pencil specification is invalid:")?;
        for v in &self.violations {
            writeln!(f, "  - [{}] {}", v.constraint, v.message)?;
        }
        Ok(())
    }
}

/// A spec that has passed validation, with normalized per-carrier chain
/// lengths. Obtainable only through `validate_pencil`.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidatedPencil {
    spec: PencilSpec,
    section_chain_lengths: Vec<u32>,
    horizontal_chain_lengths: Vec<u32>,
    bisecant_chain_lengths: Vec<u32>,
}

impl ValidatedPencil {
    pub fn spec(&self) -> &PencilSpec {
        &self.spec
    }

    pub fn family(&self) -> PencilFamily {
        self.spec.family
    }

    pub fn simple_points(&self) -> u64 {
        self.spec.simple_points
    }

    pub fn nodes(&self) -> u64 {
        self.spec.nodes
    }

    pub fn section_chain_lengths(&self) -> &[u32] {
        &self.section_chain_lengths
    }

    pub fn horizontal_chain_lengths(&self) -> &[u32] {
        &self.horizontal_chain_lengths
    }

    pub fn bisecant_chain_lengths(&self) -> &[u32] {
        &self.bisecant_chain_lengths
    }
}

/// Checks balance, mobility, degree sanity and chain consistency. Every
/// violated constraint is reported with the two evaluated sides.
pub fn validate_pencil(spec: PencilSpec) -> Result<ValidatedPencil, ValidationErrors> {
    let mut violations = Vec::new();

    match spec.family {
        PencilFamily::Plane { degree } => {
            if degree == 0 {
                violations.push(Violation::structural(
                    "degree",
                    "plane pencil degree must be at least 1".into(),
                ));
            }
        }
        PencilFamily::RuledQuadric { alpha, beta } => {
            if alpha == 0 || beta == 0 {
                violations.push(Violation::structural(
                    "degree",
                    format!("bidegree ({alpha}, {beta}) must have both entries at least 1"),
                ));
            }
        }
    }

    let l = spec.simple_points as i64;
    let m = spec.nodes as i64;
    let budget = spec.family.base_self_intersection();
    if l + 4 * m != budget {
        let (name, rhs_desc) = match spec.family {
            PencilFamily::Plane { .. } => ("balance", "d^2"),
            PencilFamily::RuledQuadric { .. } => ("balance", "2*alpha*beta"),
        };
        violations.push(Violation::numeric(
            name,
            l + 4 * m,
            budget,
            format!("balance equation violated: l + 4m = {} but {rhs_desc} = {budget}", l + 4 * m),
        ));
    }

    match spec.family {
        PencilFamily::Plane { degree } => {
            let d = degree as i64;
            let dim_bound = d * (d + 3) / 2 - 3 * m;
            if dim_bound <= 0 {
                violations.push(Violation::numeric(
                    "mobility",
                    dim_bound,
                    0,
                    format!(
                        "mobility bound violated: d(d+3)/2 - 3m = {dim_bound} must be positive"
                    ),
                ));
            }
        }
        PencilFamily::RuledQuadric { alpha, beta } => {
            let (alpha, beta) = (alpha as i64, beta as i64);
            let lhs = alpha * beta + alpha + beta;
            if lhs <= 3 * m {
                violations.push(Violation::numeric(
                    "mobility",
                    lhs,
                    3 * m,
                    format!(
                        "mobility bound violated: alpha*beta + alpha + beta = {lhs} must exceed 3m = {}",
                        3 * m
                    ),
                ));
            }
        }
    }

    // Chain consistency: towers of infinitely-near points consume the
    // simple-point and node budgets.
    let chains = &spec.chains;
    let section_chain_lengths = if chains.section_chains.is_empty() {
        vec![0u32; spec.simple_points as usize]
    } else {
        let consumed: u64 = chains.section_chains.iter().map(|&k| k as u64 + 1).sum();
        if consumed != spec.simple_points {
            violations.push(Violation::numeric(
                "section_chains",
                consumed as i64,
                l,
                format!(
                    "section chains consume sum(l(G_i)+1) = {consumed} simple points, spec has {l}"
                ),
            ));
        }
        chains.section_chains.clone()
    };
    let bisecant_chain_lengths = if chains.bisecant_chains.is_empty() {
        vec![0u32; spec.nodes as usize]
    } else {
        let consumed: u64 = chains.bisecant_chains.iter().map(|&k| k as u64 + 1).sum();
        if consumed != spec.nodes {
            violations.push(Violation::numeric(
                "bisecant_chains",
                consumed as i64,
                m,
                format!(
                    "bisecant chains consume sum(m(D_i)+1) = {consumed} nodes, spec has {m}"
                ),
            ));
        }
        chains.bisecant_chains.clone()
    };
    let horizontal_chain_lengths = if chains.horizontal_chains.is_empty() {
        vec![0u32; section_chain_lengths.len()]
    } else if chains.horizontal_chains.len() != section_chain_lengths.len() {
        violations.push(Violation::structural(
            "horizontal_chains",
            format!(
                "horizontal chain list has {} entries for {} sections",
                chains.horizontal_chains.len(),
                section_chain_lengths.len()
            ),
        ));
        vec![0u32; section_chain_lengths.len()]
    } else {
        chains.horizontal_chains.clone()
    };
    for (i, (&v, &h)) in section_chain_lengths
        .iter()
        .zip(&horizontal_chain_lengths)
        .enumerate()
    {
        if v > 0 && h > 0 {
            // The sublattice spanned by a section plus both chain heads is
            // degenerate, so no Zariski negative part can contain it.
            violations.push(Violation::structural(
                "chain_exclusivity",
                format!(
                    "section {} carries both a vertical chain (length {v}) and a horizontal chain (length {h}); the configuration is degenerate",
                    i + 1
                ),
            ));
        }
    }

    if violations.is_empty() {
        Ok(ValidatedPencil {
            spec,
            section_chain_lengths,
            horizontal_chain_lengths,
            bisecant_chain_lengths,
        })
    } else {
        Err(ValidationErrors { violations })
    }
}

/// Builds the blown-up surface, the fiber class `[d, -1,...,-1, -2,...,-2]`
/// and the exceptional curve catalog.
///
/// Sections and their vertical chains are embedded: the tower of `k+1`
/// simple-point labels `t_0..t_k` carries the section `t_k` and the chain
/// curves `t_{k-j} - t_{k-j+1}`; bisecant towers are analogous over node
/// labels. Horizontal chains have no integral class in this lattice that
/// meets the per-curve pairing pattern, so their entries are abstract
/// (pairing data only).
pub fn build_fibration(validated: &ValidatedPencil) -> FibrationModel {
    let spec = validated.spec();
    let l = spec.simple_points as usize;
    let m = spec.nodes as usize;
    let surface = build_surface(spec.family.base(), l, m);
    let base_rank = spec.family.base().rank();

    let mut coefficients = Vec::with_capacity(surface.rank());
    match spec.family {
        PencilFamily::Plane { degree } => coefficients.push(Rat::from(degree as i64)),
        PencilFamily::RuledQuadric { alpha, beta } => {
            coefficients.push(Rat::from(alpha as i64));
            coefficients.push(Rat::from(beta as i64));
        }
    }
    coefficients.extend(std::iter::repeat_n(Rat::from(-1), l));
    coefficients.extend(std::iter::repeat_n(Rat::from(-2), m));
    let fiber = surface
        .class_from_coefficients(coefficients)
        .expect("fiber coefficients match surface rank");

    let tower_class = |surface: &SurfaceModel, hi: usize, lo: usize| -> DivisorClass {
        // basis(hi) - basis(lo): proper transform of the blow-up at `hi`
        // after the infinitely-near blow-up at `lo`.
        surface
            .basis_class(hi)
            .checked_sub(&surface.basis_class(lo))
            .expect("same surface")
    };

    let mut builder = CatalogBuilder::new();
    let mut offset = base_rank;
    for (i, &len) in validated.section_chain_lengths().iter().enumerate() {
        let len = len as usize;
        let top = offset + len;
        let section_idx = builder
            .add_embedded(
                format!("G{}", i + 1),
                CurveKind::Section,
                surface.basis_class(top),
                &surface,
                &fiber,
            )
            .expect("section tower class satisfies the section invariants");
        for j in 1..=len {
            builder
                .add_embedded(
                    format!("G{}:E{}", i + 1, j),
                    CurveKind::ChainCurve,
                    tower_class(&surface, top - j, top - j + 1),
                    &surface,
                    &fiber,
                )
                .expect("tower differences are vertical (-2)-curves");
        }
        let mut prev = section_idx;
        for j in 1..=validated.horizontal_chain_lengths()[i] {
            let e = builder.add_abstract(
                format!("G{}:E'{}", i + 1, j),
                CurveKind::HorizontalChainCurve,
            );
            builder.set_adjacent(prev, e);
            prev = e;
        }
        offset += len + 1;
    }
    let mut offset = base_rank + l;
    for (k, &len) in validated.bisecant_chain_lengths().iter().enumerate() {
        let len = len as usize;
        let top = offset + len;
        builder
            .add_embedded(
                format!("D{}", k + 1),
                CurveKind::Bisecant,
                surface.basis_class(top),
                &surface,
                &fiber,
            )
            .expect("bisecant tower class satisfies the bisecant invariants");
        for j in 1..=len {
            builder
                .add_embedded(
                    format!("D{}:F{}", k + 1, j),
                    CurveKind::ChainCurve,
                    tower_class(&surface, top - j, top - j + 1),
                    &surface,
                    &fiber,
                )
                .expect("tower differences are vertical (-2)-curves");
        }
        offset += len + 1;
    }
    let catalog: CurveCatalog = builder
        .finish_embedded(&surface)
        .expect("generated labels are unique and towers are disjoint");

    let genus = surface
        .arithmetic_genus(&fiber)
        .expect("fiber lives on the surface")
        .to_i64()
        .expect("balance equation forces an integral genus");

    let l_prime: u64 = validated
        .horizontal_chain_lengths()
        .iter()
        .filter(|&&h| h > 0)
        .map(|&h| h as u64 + 1)
        .sum();

    FibrationModel {
        surface,
        fiber,
        catalog,
        genus,
        family: spec.family,
        chains: ChainTotals {
            sections: validated.section_chain_lengths().len() as u64,
            bisecants: validated.bisecant_chain_lengths().len() as u64,
            l: spec.simple_points,
            l_prime,
            m: spec.nodes,
        },
    }
}

/// Verdict of the relative-minimality certificate. `NotCertified` means
/// the necessary-condition method is inconclusive, never "definitely not
/// relatively minimal".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimalityVerdict {
    Certified,
    NotCertified,
}

/// A candidate component class that survived every necessary condition,
/// together with the integral point counts solving the contraction
/// equations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateWitness {
    /// Degree `d0` (plane) or bidegree `(alpha0, beta0)` of the candidate.
    pub degree: Vec<u32>,
    pub l01: i64,
    pub l02: i64,
    pub m0: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityCertificate {
    pub verdict: MinimalityVerdict,
    /// Surviving candidates; empty iff `Certified`.
    pub witnesses: Vec<CandidateWitness>,
    /// Set when a candidate survives although the family sits above the
    /// certified thresholds (plane degree >= 12, bidegree >= (8,8)); such
    /// a witness contradicts the expected sweep and deserves scrutiny.
    pub threshold_discrepancy: bool,
}

/// Integral solvability of the contraction count equations for one
/// candidate: `m0` from the genus equation, `l0` from the
/// self-intersection equation, `l02` from the fiber equation.
fn candidate_counts(
    d0_squared: i64,
    d0_dot_k: i64,
    d0_dot_c0: i64,
    l: i64,
    m: i64,
) -> Option<(i64, i64, i64)> {
    let twice_pa_minus_2 = d0_squared + d0_dot_k;
    if twice_pa_minus_2 % 2 != 0 {
        return None;
    }
    let m0 = twice_pa_minus_2 / 2 + 1; // p_a(D_0)
    if m0 < 0 || m0 > m {
        return None;
    }
    let l0 = d0_squared + 1 - 4 * m0;
    if l0 < 0 || l0 > l {
        return None;
    }
    let l02 = d0_dot_c0 - d0_squared - 1;
    if l02 < 0 || l02 > l0 {
        return None;
    }
    Some((l0 - l02, l02, m0))
}

/// Checks the two necessary conditions for a vertical `(-1)`-curve
/// component (`D0^2 + 2 D0.K_T < 0` and `D0.C0 - D0^2 > 0`) plus integral
/// solvability of the count equations, over every proper sub-class of the
/// pencil class. `Certified` iff no candidate survives.
pub fn relative_minimality_check(validated: &ValidatedPencil) -> MinimalityCertificate {
    let spec = validated.spec();
    let l = spec.simple_points as i64;
    let m = spec.nodes as i64;
    let mut witnesses = Vec::new();

    let mut consider =
        |degree: Vec<u32>, d0_squared: i64, d0_dot_k: i64, d0_dot_c0: i64| {
            if d0_squared + 2 * d0_dot_k >= 0 {
                return;
            }
            if d0_dot_c0 - d0_squared <= 0 {
                return;
            }
            if let Some((l01, l02, m0)) = candidate_counts(d0_squared, d0_dot_k, d0_dot_c0, l, m) {
                witnesses.push(CandidateWitness {
                    degree,
                    l01,
                    l02,
                    m0,
                });
            }
        };

    let above_threshold = match spec.family {
        PencilFamily::Plane { degree } => {
            let d = degree as i64;
            for d0 in 1..d {
                consider(vec![d0 as u32], d0 * d0, -3 * d0, d0 * d);
            }
            degree >= 12
        }
        PencilFamily::RuledQuadric { alpha, beta } => {
            let (a, b) = (alpha as i64, beta as i64);
            for a0 in 0..=a {
                for b0 in 0..=b {
                    if (a0, b0) == (0, 0) || (a0, b0) == (a, b) {
                        continue;
                    }
                    consider(
                        vec![a0 as u32, b0 as u32],
                        2 * a0 * b0,
                        -2 * a0 - 2 * b0,
                        a0 * b + b0 * a,
                    );
                }
            }
            alpha >= 8 && beta >= 8
        }
    };

    let verdict = if witnesses.is_empty() {
        MinimalityVerdict::Certified
    } else {
        MinimalityVerdict::NotCertified
    };
    MinimalityCertificate {
        threshold_discrepancy: above_threshold && verdict == MinimalityVerdict::NotCertified,
        verdict,
        witnesses,
    }
}

/// Gonality bounds for the general fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GonalityBounds {
    pub lower: Option<u32>,
    pub upper: Option<u32>,
    /// True when the exact gonality is not pinned down (the quadric case:
    /// the projection degree bounds it above but it could be lower).
    pub caveat: bool,
    /// True when `lower` comes from a user assertion rather than the
    /// cited closed forms; downstream verdicts become conditional.
    pub assumed: bool,
}

/// Smooth plane pencils have gonality exactly `d - 1`; nodal plane pencils
/// exactly `d - 2`; on the quadric only the upper bound `min(alpha, beta)`
/// is available. A user-asserted lower bound overrides the cited one.
pub fn gonality_bounds(validated: &ValidatedPencil) -> GonalityBounds {
    let spec = validated.spec();
    let cited = match spec.family {
        PencilFamily::Plane { degree } => {
            let exact = if spec.nodes == 0 {
                degree.saturating_sub(1)
            } else {
                degree.saturating_sub(2)
            };
            GonalityBounds {
                lower: Some(exact),
                upper: Some(exact),
                caveat: false,
                assumed: false,
            }
        }
        PencilFamily::RuledQuadric { alpha, beta } => GonalityBounds {
            lower: None,
            upper: Some(alpha.min(beta)),
            caveat: true,
            assumed: false,
        },
    };
    match spec.assumed_gonality {
        Some(assumed) => GonalityBounds {
            lower: Some(assumed),
            assumed: true,
            ..cited
        },
        None => cited,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_worked_examples() {
        assert!(validate_pencil(PencilSpec::plane(18, 108, 54)).is_ok());
        assert!(validate_pencil(PencilSpec::ruled_quadric(8, 8, 24, 26)).is_ok());
        assert!(validate_pencil(PencilSpec::ruled_quadric(8, 8, 32, 24)).is_ok());
    }

    #[test]
    fn balance_violation_reports_sides() {
        let err = validate_pencil(PencilSpec::plane(6, 0, 10)).unwrap_err();
        let balance = err
            .violations
            .iter()
            .find(|v| v.constraint == "balance")
            .expect("balance violation present");
        assert_eq!(balance.lhs, Some(Rat::from(40)));
        assert_eq!(balance.rhs, Some(Rat::from(36)));
        assert!(balance.message.contains("balance"));
    }

    #[test]
    fn mobility_violation_is_individual() {
        // d = 6, m = 9 balances (l = 0) but pins the linear system down.
        let err = validate_pencil(PencilSpec::plane(6, 0, 9)).unwrap_err();
        assert_eq!(err.violations.len(), 1);
        assert_eq!(err.violations[0].constraint, "mobility");

        let err = validate_pencil(PencilSpec::ruled_quadric(4, 4, 0, 8)).unwrap_err();
        assert_eq!(err.violations[0].constraint, "mobility");
    }

    #[test]
    fn chain_counts_must_consume_the_budget() {
        let mut spec = PencilSpec::plane(4, 16, 0);
        spec.chains.section_chains = vec![1, 0, 0]; // consumes 5, not 16
        let err = validate_pencil(spec).unwrap_err();
        assert_eq!(err.violations[0].constraint, "section_chains");

        let mut spec = PencilSpec::plane(4, 16, 0);
        spec.chains.section_chains = vec![2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 2];
        assert!(validate_pencil(spec).is_ok());
    }

    #[test]
    fn vertical_and_horizontal_chains_are_exclusive() {
        let mut spec = PencilSpec::plane(4, 16, 0);
        spec.chains.section_chains = vec![2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 2];
        spec.chains.horizontal_chains = vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0];
        let err = validate_pencil(spec).unwrap_err();
        assert_eq!(err.violations[0].constraint, "chain_exclusivity");
    }

    #[test]
    fn fiber_classes_of_worked_examples() {
        let v = validate_pencil(PencilSpec::plane(18, 108, 54)).unwrap();
        let model = build_fibration(&v);
        assert_eq!(model.fiber.coefficient(0), &Rat::from(18));
        assert_eq!(model.fiber.coefficient(1), &Rat::from(-1));
        assert_eq!(model.fiber.coefficient(162), &Rat::from(-2));
        assert_eq!(
            model.surface.self_intersection(&model.fiber).unwrap(),
            Rat::zero()
        );
        assert_eq!(model.genus, 82);
        assert_eq!(model.catalog.len(), 162);

        let v = validate_pencil(PencilSpec::ruled_quadric(8, 8, 32, 24)).unwrap();
        let model = build_fibration(&v);
        assert_eq!(model.fiber.coefficient(0), &Rat::from(8));
        assert_eq!(model.fiber.coefficient(1), &Rat::from(8));
        assert_eq!(model.genus, 25);
    }

    #[test]
    fn smooth_preset_genus_formula() {
        for d in 4u32..=9 {
            let v = validate_pencil(PencilSpec::smooth_plane(d)).unwrap();
            let model = build_fibration(&v);
            let d = d as i64;
            assert_eq!(model.genus - 1, d * (d - 3) / 2);
            assert_eq!(model.chains.l, (d * d) as u64);
        }
    }

    #[test]
    fn towers_produce_valid_catalogs() {
        let mut spec = PencilSpec::plane(4, 16, 0);
        spec.chains.section_chains = vec![2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 2];
        let model = build_fibration(&validate_pencil(spec).unwrap());
        // 11 sections + 5 chain curves.
        assert_eq!(model.catalog.len(), 16);
        let st = model.catalog.chain_structure().unwrap();
        assert_eq!(st.sections.len(), 11);
        assert_eq!(st.sections[0].vertical.len(), 2);
        // The fiber still squares to zero and has genus drop only from nodes.
        assert_eq!(
            model.surface.self_intersection(&model.fiber).unwrap(),
            Rat::zero()
        );
    }

    #[test]
    fn genus_drops_by_one_per_node() {
        for (spec, base_genus) in [
            (PencilSpec::plane(18, 108, 54), 136), // p_a of a degree-18 plane curve
            (PencilSpec::ruled_quadric(8, 8, 24, 26), 49),
            (PencilSpec::ruled_quadric(8, 8, 32, 24), 49),
        ] {
            let nodes = spec.nodes as i64;
            let model = build_fibration(&validate_pencil(spec).unwrap());
            assert_eq!(model.genus, base_genus - nodes);
        }
    }

    #[test]
    fn minimality_worked_examples() {
        let v = validate_pencil(PencilSpec::plane(18, 108, 54)).unwrap();
        let cert = relative_minimality_check(&v);
        assert_eq!(cert.verdict, MinimalityVerdict::Certified);
        assert!(cert.witnesses.is_empty());
        assert!(!cert.threshold_discrepancy);

        let v = validate_pencil(PencilSpec::ruled_quadric(8, 8, 24, 26)).unwrap();
        assert_eq!(
            relative_minimality_check(&v).verdict,
            MinimalityVerdict::Certified
        );
    }

    #[test]
    fn conic_pencil_is_not_certified() {
        let v = validate_pencil(PencilSpec::plane(2, 4, 0)).unwrap();
        let cert = relative_minimality_check(&v);
        assert_eq!(cert.verdict, MinimalityVerdict::NotCertified);
        // The line through two of the base points survives: l0 = 2, m0 = 0.
        assert_eq!(
            cert.witnesses,
            vec![CandidateWitness {
                degree: vec![1],
                l01: 2,
                l02: 0,
                m0: 0,
            }]
        );
        assert!(!cert.threshold_discrepancy);
    }

    #[test]
    fn small_quadric_pencils_are_inconclusive() {
        let v = validate_pencil(PencilSpec::ruled_quadric(3, 3, 6, 3)).unwrap();
        let cert = relative_minimality_check(&v);
        assert_eq!(cert.verdict, MinimalityVerdict::NotCertified);
        assert!(cert.witnesses.iter().any(|w| w.degree == vec![1, 1]));
    }

    #[test]
    fn gonality_presets() {
        let smooth = validate_pencil(PencilSpec::smooth_plane(6)).unwrap();
        assert_eq!(
            gonality_bounds(&smooth),
            GonalityBounds {
                lower: Some(5),
                upper: Some(5),
                caveat: false,
                assumed: false
            }
        );

        let nodal = validate_pencil(PencilSpec::plane(18, 108, 54)).unwrap();
        assert_eq!(
            gonality_bounds(&nodal),
            GonalityBounds {
                lower: Some(16),
                upper: Some(16),
                caveat: false,
                assumed: false
            }
        );

        let quadric = validate_pencil(PencilSpec::ruled_quadric(8, 8, 32, 24)).unwrap();
        assert_eq!(
            gonality_bounds(&quadric),
            GonalityBounds {
                lower: None,
                upper: Some(8),
                caveat: true,
                assumed: false
            }
        );

        let mut spec = PencilSpec::ruled_quadric(8, 8, 32, 24);
        spec.assumed_gonality = Some(5);
        let asserted = validate_pencil(spec).unwrap();
        assert_eq!(
            gonality_bounds(&asserted),
            GonalityBounds {
                lower: Some(5),
                upper: Some(8),
                caveat: true,
                assumed: true
            }
        );
    }
}
