//! The golden self-test suite.
//!
//! Ten checks pin the worked examples, the preset families, the randomized
//! decomposition equivalences and the search reproductions, plus one
//! negative control that corrupts a decomposition and confirms the
//! verifier catches it. The randomized checks are seeded, so two runs
//! produce byte-identical output.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{analyze, AnalysisReport, AnalysisRequest};
use crate::catalog::{CurveCatalog, ExceptionalChainSpec};
use crate::invariants::{invariants, InvariantReport};
use crate::pencil::{
    build_fibration, gonality_bounds, relative_minimality_check, validate_pencil,
    MinimalityVerdict, PencilSpec,
};
use crate::rat::Rat;
use crate::search::{run_search, InclusiveRange, SearchConstraint, SearchFamily, SearchRequest};
use crate::verdicts::{
    evaluate_q, sqrt_genus_bound, AnalysisFlags, EffectivityAssertions, GateContext,
    HypothesisStatus,
};
use crate::zariski::{
    closed_form_n1, verify_decomposition, zariski_fujita, DivisorData, ZariskiDecomposition,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestReport {
    pub checks: Vec<SelftestCheck>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// One line per check: `PASS <name>: <detail>`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(if c.passed { "PASS " } else { "FAIL " });
            out.push_str(c.name);
            out.push_str(": ");
            out.push_str(&c.detail);
            out.push('\n');
        }
        out.push_str(if self.all_passed() {
            "selftest: all checks passed\n"
        } else {
            "selftest: FAILURES PRESENT\n"
        });
        out
    }
}

struct Checker {
    failures: Vec<String>,
}

impl Checker {
    fn new() -> Checker {
        Checker { failures: Vec::new() }
    }

    fn check(&mut self, condition: bool, message: impl Into<String>) {
        if !condition {
            self.failures.push(message.into());
        }
    }

    fn finish(self, name: &'static str, ok_detail: String) -> SelftestCheck {
        if self.failures.is_empty() {
            SelftestCheck {
                name,
                passed: true,
                detail: ok_detail,
            }
        } else {
            SelftestCheck {
                name,
                passed: false,
                detail: self.failures.join("; "),
            }
        }
    }
}

fn flags_on() -> AnalysisFlags {
    AnalysisFlags {
        semistable: true,
        non_isotrivial: true,
    }
}

pub fn example1_request() -> AnalysisRequest {
    AnalysisRequest {
        spec: PencilSpec::plane(18, 108, 54),
        flags: flags_on(),
        assertions: EffectivityAssertions::default(),
    }
}

pub fn example2_request() -> AnalysisRequest {
    let mut spec = PencilSpec::ruled_quadric(8, 8, 24, 26);
    spec.assumed_gonality = Some(6);
    AnalysisRequest {
        spec,
        flags: flags_on(),
        assertions: EffectivityAssertions::default(),
    }
}

pub fn example3_request() -> AnalysisRequest {
    let mut spec = PencilSpec::ruled_quadric(8, 8, 32, 24);
    spec.assumed_gonality = Some(5);
    AnalysisRequest {
        spec,
        flags: flags_on(),
        assertions: EffectivityAssertions::default(),
    }
}

fn golden_reports() -> Result<[AnalysisReport; 3], String> {
    Ok([
        analyze(&example1_request()).map_err(|e| e.to_string())?,
        analyze(&example2_request()).map_err(|e| e.to_string())?,
        analyze(&example3_request()).map_err(|e| e.to_string())?,
    ])
}

pub fn criterion_01_example1_golden() -> SelftestCheck {
    let name = "criterion_01_example1_golden";
    let mut c = Checker::new();
    match analyze(&example1_request()) {
        Ok(r) => {
            let inv = &r.invariants;
            c.check(inv.g == 82, format!("g = {} != 82", inv.g));
            c.check(inv.b == 81, format!("b = {} != 81", inv.b));
            c.check(inv.a == 495, format!("a = {} != 495", inv.a));
            c.check(
                r.consistency.a_formula_matches_lattice,
                "a: formula and lattice disagree",
            );
            c.check(inv.six_b_margin == 9, format!("margin = {}", inv.six_b_margin));
            c.check(
                inv.k_t_squared == -45,
                format!("K_T^2 = {}", inv.k_t_squared),
            );
            c.check(
                r.sigma.bound > Rat::from(5),
                format!("sigma bound {} not > 5", r.sigma.bound),
            );
            c.finish(name, "g=82 b=81 a=495 margin=9 K_T^2=-45 sigma=91/18".into())
        }
        Err(e) => {
            c.check(false, format!("analysis failed: {e}"));
            c.finish(name, String::new())
        }
    }
}

pub fn criterion_02_example1_decomposition() -> SelftestCheck {
    let name = "criterion_02_example1_decomposition";
    let mut c = Checker::new();
    match analyze(&example1_request()) {
        Ok(r) => {
            let dec = &r.adjoint_three;
            c.check(
                dec.record.p_squared == Rat::from(81),
                format!("P^2 = {} != 81", dec.record.p_squared),
            );
            c.check(
                dec.formula_matches_p_squared == Some(true),
                "9a - 60b + 4l + m != P^2",
            );
            let sections_doubled = dec
                .record
                .negative
                .iter()
                .filter(|e| e.label.starts_with('G'))
                .all(|e| e.multiplicity == Rat::from(2));
            let bisecants_simple = dec
                .record
                .negative
                .iter()
                .filter(|e| e.label.starts_with('D'))
                .all(|e| e.multiplicity == Rat::from(1));
            c.check(
                sections_doubled && bisecants_simple && dec.record.negative.len() == 162,
                "negative part is not 2*sum(G_i) + sum(D_j)",
            );
            match &dec.record.p {
                crate::zariski::ResidualForm::Class(class) => {
                    c.check(
                        class.coefficient(0) == &Rat::from(9)
                            && (1..class.len()).all(|i| class.coefficient(i).is_zero()),
                        "P != (d - 9)H",
                    );
                }
                _ => c.check(false, "residual lost its class"),
            }
            c.check(dec.verification_passed, "verification failed");
            c.finish(name, "N = 2*sum(G) + sum(D), P = 9H, P^2 = 81".into())
        }
        Err(e) => {
            c.check(false, format!("analysis failed: {e}"));
            c.finish(name, String::new())
        }
    }
}

pub fn criterion_03_example2_golden() -> SelftestCheck {
    let name = "criterion_03_example2_golden";
    let mut c = Checker::new();
    match analyze(&example2_request()) {
        Ok(r) => {
            let inv = &r.invariants;
            c.check(inv.g == 23, format!("g = {}", inv.g));
            c.check(inv.a == 134, format!("a = {}", inv.a));
            let remark = &r.inequalities.adjoint_three;
            c.check(
                remark.remark_lhs == 122 && remark.remark_rhs == 132 && remark.remark_fires,
                format!("remark {} <= {} did not fire", remark.remark_lhs, remark.remark_rhs),
            );
            c.check(inv.six_b_margin == 2, format!("margin = {}", inv.six_b_margin));
            c.finish(name, "g=23 a=134 4l+m=122<=132 margin=2".into())
        }
        Err(e) => {
            c.check(false, format!("analysis failed: {e}"));
            c.finish(name, String::new())
        }
    }
}

pub fn criterion_04_example3_golden() -> SelftestCheck {
    let name = "criterion_04_example3_golden";
    let mut c = Checker::new();
    match analyze(&example3_request()) {
        Ok(r) => {
            let inv = &r.invariants;
            c.check(inv.g == 25, format!("g = {}", inv.g));
            c.check(
                inv.a == 144 && inv.a == 6 * inv.b,
                format!("a = {} vs 6b = {}", inv.a, 6 * inv.b),
            );
            // 2*alpha + 2*beta = m + 8 at (8, 8, m = 24).
            c.check(2 * 8 + 2 * 8 == inv.m + 8, format!("2a+2b != m+8, m = {}", inv.m));
            c.finish(name, "g=25 a=144=6b 2*8+2*8=m+8".into())
        }
        Err(e) => {
            c.check(false, format!("analysis failed: {e}"));
            c.finish(name, String::new())
        }
    }
}

pub fn criterion_05_smooth_family() -> SelftestCheck {
    let name = "criterion_05_smooth_family";
    let mut c = Checker::new();
    for d in 4u32..=20 {
        match validate_pencil(PencilSpec::smooth_plane(d)) {
            Ok(v) => {
                let model = build_fibration(&v);
                match invariants(&model) {
                    Ok(inv) => {
                        let dd = d as i64;
                        c.check(
                            inv.six_b_margin == 9 - 3 * dd,
                            format!("d={d}: a - 6b = {} != {}", inv.six_b_margin, 9 - 3 * dd),
                        );
                        c.check(
                            inv.l == dd * dd,
                            format!("d={d}: l = {} != d^2", inv.l),
                        );
                    }
                    Err(e) => c.check(false, format!("d={d}: {e}")),
                }
            }
            Err(e) => c.check(false, format!("d={d}: {e}")),
        }
    }
    c.finish(name, "a - 6b = 9 - 3d and l = d^2 for d in 4..=20".into())
}

fn random_chain_spec(rng: &mut ChaCha8Rng) -> ExceptionalChainSpec {
    let sections = rng.random_range(1..=6usize);
    let bisecants = rng.random_range(0..=6usize);
    ExceptionalChainSpec {
        section_chains: (0..sections).map(|_| rng.random_range(0..=4u32)).collect(),
        horizontal_chains: Vec::new(),
        bisecant_chains: (0..bisecants).map(|_| rng.random_range(0..=3u32)).collect(),
    }
}

fn adjoint_divisor_data(catalog: &CurveCatalog, n: i64) -> DivisorData {
    let pairings = catalog
        .entries()
        .iter()
        .map(|e| &e.fiber_pairing + Rat::from(n) * &e.canonical_pairing)
        .collect();
    DivisorData::from_pairings(Rat::zero(), pairings)
}

pub fn criterion_06_randomized_equivalence() -> SelftestCheck {
    let name = "criterion_06_randomized_equivalence";
    let mut c = Checker::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x05EE_DCA7_A106);
    for trial in 0..200 {
        let spec = random_chain_spec(&mut rng);
        let catalog = CurveCatalog::from_chain_spec(&spec);
        let divisor = adjoint_divisor_data(&catalog, 2);
        let dec = match zariski_fujita(&divisor, &catalog) {
            Ok(d) => d,
            Err(e) => {
                c.check(false, format!("trial {trial}: solver failed: {e}"));
                continue;
            }
        };
        let n1 = match closed_form_n1(&catalog) {
            Ok(n) => n,
            Err(e) => {
                c.check(false, format!("trial {trial}: closed form failed: {e}"));
                continue;
            }
        };
        c.check(
            dec.negative == n1.multiplicities,
            format!("trial {trial}: algorithmic and closed-form multiplicities differ"),
        );
        let expected_l: u64 = spec.section_chains.iter().map(|&k| k as u64 + 1).sum();
        c.check(
            n1.l == expected_l && n1.square == Rat::from(-(expected_l as i64)),
            format!("trial {trial}: N1^2 = {} != -l = -{expected_l}", n1.square),
        );
        match verify_decomposition(&dec, &catalog) {
            Ok(report) => {
                c.check(report.orthogonal, format!("trial {trial}: P.N != 0"));
                c.check(report.catalog_nef, format!("trial {trial}: P not catalog-nef"));
                c.check(
                    report.negative_definite,
                    format!("trial {trial}: Gram not negative definite"),
                );
            }
            Err(e) => c.check(false, format!("trial {trial}: verify failed: {e}")),
        }
    }
    c.finish(
        name,
        "200 seeded configurations: closed form == algorithm, N1^2 = -l, certificates pass".into(),
    )
}

pub fn criterion_07_polynomial_identities() -> SelftestCheck {
    let name = "criterion_07_polynomial_identities";
    let mut c = Checker::new();
    match golden_reports() {
        Ok(reports) => {
            for (i, r) in reports.iter().enumerate() {
                let inv = &r.invariants;
                c.check(
                    evaluate_q(inv, 1) == Rat::from(2),
                    format!("golden {}: q(1) != 2", i + 1),
                );
                c.check(
                    evaluate_q(inv, 0) == Rat::from(2 * inv.b + 2),
                    format!("golden {}: q(0) != 2b + 2", i + 1),
                );
                for n in -10..=10 {
                    c.check(
                        evaluate_q(inv, n).is_positive(),
                        format!("golden {}: q({n}) <= 0", i + 1),
                    );
                }
            }
        }
        Err(e) => c.check(false, e),
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0B5E55ED);
    let mut synthetic = InvariantReport {
        a: 0,
        b: 0,
        g: 0,
        slope: Rat::zero(),
        l: 0,
        l_prime: 0,
        m: 0,
        k_t_squared: 0,
        sigma_lower_bound: Rat::zero(),
        six_b_margin: 0,
    };
    for _ in 0..500 {
        let b = rng.random_range(1..=400i64);
        let a = 5 * b + rng.random_range(0..=400i64);
        synthetic.a = a;
        synthetic.b = b;
        synthetic.g = b + 1;
        c.check(
            evaluate_q(&synthetic, 1) == Rat::from(2),
            format!("(a, b) = ({a}, {b}): q(1) != 2"),
        );
        c.check(
            evaluate_q(&synthetic, 0) == Rat::from(2 * b + 2),
            format!("(a, b) = ({a}, {b}): q(0) != 2b + 2"),
        );
    }
    c.finish(
        name,
        "q(1) = 2, q(0) = 2b + 2 on goldens and 500 random (a, b); q(n) > 0 on [-10, 10]".into(),
    )
}

pub fn criterion_08_sqrt_genus_bound() -> SelftestCheck {
    let name = "criterion_08_sqrt_genus_bound";
    let mut c = Checker::new();
    for (request, label) in [
        (example2_request(), "example2"),
        (example3_request(), "example3"),
    ] {
        let validated = match validate_pencil(request.spec.clone()) {
            Ok(v) => v,
            Err(e) => {
                c.check(false, format!("{label}: {e}"));
                continue;
            }
        };
        let model = build_fibration(&validated);
        let inv = invariants(&model).expect("golden models have g >= 2");
        let ctx = GateContext {
            g: inv.g,
            k_t_squared: inv.k_t_squared,
            gonality: gonality_bounds(&validated),
            flags: request.flags,
            assertions: request.assertions,
        };
        let r = sqrt_genus_bound(&inv, &ctx);
        c.check(inv.k_t_squared < 0, format!("{label}: K_T^2 = {} >= 0", inv.k_t_squared));
        c.check(r.chain_bound.holds, format!("{label}: l + 1 > 5b/2"));
        c.check(r.slope_bound.holds, format!("{label}: 11b/2 > a"));
        c.check(
            r.discriminant_bound.holds,
            format!("{label}: Delta_q > b(b-48)/4"),
        );
        c.check(r.final_bound.holds, format!("{label}: sqrt bound fails"));
        c.check(r.verdict.holds, format!("{label}: verdict fails"));
        c.check(
            r.verdict.hypothesis_status == HypothesisStatus::ConditionalOnGonality,
            format!("{label}: gate is {:?}", r.verdict.hypothesis_status),
        );
    }
    // Example 1 is gated out by g = 82 > 49.
    let validated = validate_pencil(example1_request().spec).expect("example 1 is valid");
    let model = build_fibration(&validated);
    let inv = invariants(&model).expect("g = 82");
    let ctx = GateContext {
        g: inv.g,
        k_t_squared: inv.k_t_squared,
        gonality: gonality_bounds(&validated),
        flags: flags_on(),
        assertions: EffectivityAssertions::default(),
    };
    let r = sqrt_genus_bound(&inv, &ctx);
    c.check(
        r.verdict.hypothesis_status == HypothesisStatus::NotMet,
        format!("example1: gate is {:?}, expected not met", r.verdict.hypothesis_status),
    );
    c.finish(
        name,
        "examples 2 and 3 pass the full chain; example 1 gated out by g > 49".into(),
    )
}

pub fn criterion_09_search_reproduction() -> SelftestCheck {
    let name = "criterion_09_search_reproduction";
    let mut c = Checker::new();
    let quadric = SearchRequest {
        family: SearchFamily::F0Nodal,
        degree: None,
        alpha: Some(InclusiveRange::new(8, 8)),
        beta: Some(InclusiveRange::new(8, 8)),
        nodes: Some(InclusiveRange::new(20, 30)),
        constraints: vec![
            SearchConstraint::Balance,
            SearchConstraint::Mobility,
            SearchConstraint::RelMin,
            SearchConstraint::FourLPlusMLeSixB,
        ],
    };
    match run_search(&quadric) {
        Ok(rows) => {
            let ms: Vec<i64> = rows.iter().map(|r| r.m).collect();
            c.check(ms == vec![25, 26], format!("quadric sweep returned m = {ms:?}"));
        }
        Err(e) => c.check(false, format!("quadric sweep failed: {e}")),
    }
    let plane = SearchRequest {
        family: SearchFamily::PlaneNodal,
        degree: Some(InclusiveRange::new(12, 24)),
        alpha: None,
        beta: None,
        nodes: None,
        constraints: vec![SearchConstraint::FourLPlusMLeSixB],
    };
    match run_search(&plane) {
        Ok(rows) => {
            let ds: Vec<u32> = rows.iter().filter_map(|r| r.d).collect();
            c.check(ds == vec![18, 24], format!("plane sweep returned d = {ds:?}"));
        }
        Err(e) => c.check(false, format!("plane sweep failed: {e}")),
    }
    c.finish(name, "quadric sweep = {25, 26}; plane l = 2m sweep = {18, 24}".into())
}

pub fn criterion_10_minimality_certificates() -> SelftestCheck {
    let name = "criterion_10_minimality_certificates";
    let mut c = Checker::new();
    for d in 12u32..=24 {
        let dd = (d as i64) * (d as i64);
        let mobility_cap = (d as i64) * (d as i64 + 3) / 6; // m must stay below this
        let max_m = (dd / 4).min(mobility_cap - 1);
        for m in [1, max_m / 2, max_m] {
            let l = dd - 4 * m;
            let spec = PencilSpec::plane(d, l as u64, m as u64);
            match validate_pencil(spec) {
                Ok(v) => c.check(
                    relative_minimality_check(&v).verdict == MinimalityVerdict::Certified,
                    format!("plane d={d}, m={m}: not certified"),
                ),
                Err(e) => c.check(false, format!("plane d={d}, m={m}: {e}")),
            }
        }
    }
    for alpha in 8u32..=12 {
        for beta in 8u32..=12 {
            let budget = 2 * (alpha as i64) * (beta as i64);
            let mobility_cap = ((alpha as i64) * (beta as i64) + alpha as i64 + beta as i64) / 3;
            let max_m = (budget / 4).min(mobility_cap - 1);
            for m in [1, max_m] {
                let l = budget - 4 * m;
                let spec = PencilSpec::ruled_quadric(alpha, beta, l as u64, m as u64);
                match validate_pencil(spec) {
                    Ok(v) => c.check(
                        relative_minimality_check(&v).verdict == MinimalityVerdict::Certified,
                        format!("quadric ({alpha}, {beta}), m={m}: not certified"),
                    ),
                    Err(e) => c.check(false, format!("quadric ({alpha}, {beta}), m={m}: {e}")),
                }
            }
        }
    }
    match validate_pencil(PencilSpec::plane(2, 4, 0)) {
        Ok(v) => c.check(
            relative_minimality_check(&v).verdict == MinimalityVerdict::NotCertified,
            "conic pencil unexpectedly certified",
        ),
        Err(e) => c.check(false, format!("conic pencil: {e}")),
    }
    c.finish(
        name,
        "certified for plane d in 12..=24 and quadric bidegrees in 8..=12; d = 2 not certified"
            .into(),
    )
}

/// Negative control: a decomposition with one curve dropped must be
/// caught by the independent verifier.
pub fn negative_control_verifier() -> SelftestCheck {
    let name = "negative_control_verifier";
    let mut c = Checker::new();
    let request = example1_request();
    let validated = validate_pencil(request.spec).expect("example 1 is valid");
    let model = build_fibration(&validated);
    let divisor = DivisorData::adjoint(&model.surface, &model.fiber, 2, &model.catalog)
        .expect("adjoint data");
    let dec = zariski_fujita(&divisor, &model.catalog).expect("decomposition");
    let mut corrupted: Vec<(String, Rat)> = dec.negative.clone();
    corrupted.pop();
    let handmade = ZariskiDecomposition::from_parts(dec.divisor.clone(), &corrupted, &model.catalog)
        .expect("labels resolve");
    match verify_decomposition(&handmade, &model.catalog) {
        Ok(report) => {
            c.check(
                !report.catalog_nef && !report.nef_failures.is_empty(),
                "verifier missed the dropped curve",
            );
        }
        Err(e) => c.check(false, format!("verify failed to run: {e}")),
    }
    c.finish(name, "verifier flags a decomposition with a dropped curve".into())
}

/// Runs the whole suite in order.
pub fn run_selftest() -> SelftestReport {
    SelftestReport {
        checks: vec![
            criterion_01_example1_golden(),
            criterion_02_example1_decomposition(),
            criterion_03_example2_golden(),
            criterion_04_example3_golden(),
            criterion_05_smooth_family(),
            criterion_06_randomized_equivalence(),
            criterion_07_polynomial_identities(),
            criterion_08_sqrt_genus_bound(),
            criterion_09_search_reproduction(),
            criterion_10_minimality_certificates(),
            negative_control_verifier(),
        ],
    }
}
