//! Property tests for the lattice identities and decomposition laws.

use fibslope::catalog::{CurveCatalog, ExceptionalChainSpec};
use fibslope::lattice::{build_surface, BaseSurface, SurfaceModel};
use fibslope::pencil::{build_fibration, validate_pencil, PencilSpec};
use fibslope::rat::Rat;
use fibslope::zariski::{
    closed_form_n1, closed_form_n2_n1prime, verify_decomposition, zariski_fujita, DivisorData,
};
use proptest::prelude::*;

fn arb_base() -> impl Strategy<Value = BaseSurface> {
    prop_oneof![
        Just(BaseSurface::ProjectivePlane),
        (0u32..=3).prop_map(BaseSurface::Hirzebruch),
    ]
}

fn arb_surface() -> impl Strategy<Value = SurfaceModel> {
    (arb_base(), 0usize..6, 0usize..4)
        .prop_map(|(base, simple, node)| build_surface(base, simple, node))
}

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rat::new(n, d))
}

fn arb_class(rank: usize) -> impl Strategy<Value = Vec<Rat>> {
    proptest::collection::vec(arb_rat(), rank)
}

proptest! {
    /// The pairing is symmetric and bilinear.
    #[test]
    fn pairing_is_symmetric_and_bilinear(
        (surface, c1, c2, c3, x, y) in arb_surface().prop_flat_map(|s| {
            let rank = s.rank();
            (
                Just(s),
                arb_class(rank),
                arb_class(rank),
                arb_class(rank),
                arb_rat(),
                arb_rat(),
            )
        })
    ) {
        let d1 = surface.class_from_coefficients(c1).unwrap();
        let d2 = surface.class_from_coefficients(c2).unwrap();
        let e = surface.class_from_coefficients(c3).unwrap();

        prop_assert_eq!(
            surface.pair(&d1, &e).unwrap(),
            surface.pair(&e, &d1).unwrap()
        );

        let combo = d1.scaled(&x).checked_add(&d2.scaled(&y)).unwrap();
        let lhs = surface.pair(&combo, &e).unwrap();
        let rhs = x * surface.pair(&d1, &e).unwrap() + y * surface.pair(&d2, &e).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// The canonical square drops by one per blow-up: 9 - k on the plane,
    /// 8 - k on any Hirzebruch base.
    #[test]
    fn canonical_square_counts_blowups(
        base in arb_base(),
        simple in 0usize..8,
        node in 0usize..8,
    ) {
        let surface = build_surface(base, simple, node);
        let k = surface.canonical_class();
        let expected = match base {
            BaseSurface::ProjectivePlane => 9 - (simple + node) as i64,
            BaseSurface::Hirzebruch(_) => 8 - (simple + node) as i64,
        };
        prop_assert_eq!(surface.self_intersection(&k).unwrap(), Rat::from(expected));
    }

    /// Serre-duality symmetry of the Euler characteristic as a pure
    /// lattice identity: chi(D) = chi(K - D).
    #[test]
    fn chi_serre_symmetry(
        (surface, coeffs) in arb_surface().prop_flat_map(|s| {
            let rank = s.rank();
            (Just(s), arb_class(rank))
        })
    ) {
        let d = surface.class_from_coefficients(coeffs).unwrap();
        let k_minus_d = surface.canonical_class().checked_sub(&d).unwrap();
        prop_assert_eq!(
            surface.chi_riemann_roch(&d).unwrap(),
            surface.chi_riemann_roch(&k_minus_d).unwrap()
        );
    }

    /// Closed-form squares: N1^2 = -l and N2^2 = -m on random
    /// configurations.
    #[test]
    fn closed_form_squares(
        section_chains in proptest::collection::vec(0u32..=4, 1..=6),
        bisecant_chains in proptest::collection::vec(0u32..=3, 0..=6),
    ) {
        let spec = ExceptionalChainSpec {
            section_chains: section_chains.clone(),
            horizontal_chains: Vec::new(),
            bisecant_chains: bisecant_chains.clone(),
        };
        let catalog = CurveCatalog::from_chain_spec(&spec);
        let n1 = closed_form_n1(&catalog).unwrap();
        let expected_l: u64 = section_chains.iter().map(|&k| k as u64 + 1).sum();
        prop_assert_eq!(n1.l, expected_l);
        prop_assert_eq!(n1.square, Rat::from(-(expected_l as i64)));

        let parts = closed_form_n2_n1prime(&catalog).unwrap();
        let expected_m: u64 = bisecant_chains.iter().map(|&k| k as u64 + 1).sum();
        prop_assert_eq!(parts.m, expected_m);
        prop_assert_eq!(parts.n2_square, Rat::from(-(expected_m as i64)));
    }

    /// The iterative algorithm on `C + 2K_S` reproduces the closed-form
    /// section part exactly, and the result passes the audit.
    #[test]
    fn algorithm_matches_closed_form(
        section_chains in proptest::collection::vec(0u32..=4, 1..=6),
        bisecant_chains in proptest::collection::vec(0u32..=3, 0..=6),
    ) {
        let spec = ExceptionalChainSpec {
            section_chains,
            horizontal_chains: Vec::new(),
            bisecant_chains,
        };
        let catalog = CurveCatalog::from_chain_spec(&spec);
        let pairings: Vec<Rat> = catalog
            .entries()
            .iter()
            .map(|e| &e.fiber_pairing + Rat::from(2) * &e.canonical_pairing)
            .collect();
        let divisor = DivisorData::from_pairings(Rat::zero(), pairings);
        let dec = zariski_fujita(&divisor, &catalog).unwrap();
        let n1 = closed_form_n1(&catalog).unwrap();
        prop_assert_eq!(&dec.negative, &n1.multiplicities);

        let report = verify_decomposition(&dec, &catalog).unwrap();
        prop_assert!(report.all_pass());
        // Orthogonality corollary: P^2 = D^2 - N^2.
        prop_assert_eq!(dec.p_squared().clone(), Rat::zero() - n1.square);
    }

    /// Without horizontal chains, the negative part of `C + 3K_S` is
    /// exactly twice the section part plus the bisecant part: the linear
    /// systems scale on the section blocks and decouple from the rest.
    #[test]
    fn triple_adjoint_negative_part_composition(
        section_chains in proptest::collection::vec(0u32..=4, 1..=6),
        bisecant_chains in proptest::collection::vec(0u32..=3, 0..=6),
    ) {
        let spec = ExceptionalChainSpec {
            section_chains,
            horizontal_chains: Vec::new(),
            bisecant_chains,
        };
        let catalog = CurveCatalog::from_chain_spec(&spec);
        let pairings: Vec<Rat> = catalog
            .entries()
            .iter()
            .map(|e| &e.fiber_pairing + Rat::from(3) * &e.canonical_pairing)
            .collect();
        let divisor = DivisorData::from_pairings(Rat::zero(), pairings);
        let dec = zariski_fujita(&divisor, &catalog).unwrap();

        let n1 = closed_form_n1(&catalog).unwrap();
        let parts = closed_form_n2_n1prime(&catalog).unwrap();
        let mut expected: Vec<(String, Rat)> = n1
            .multiplicities
            .into_iter()
            .map(|(label, m)| (label, m * Rat::from(2)))
            .chain(parts.n2_multiplicities)
            .collect();
        expected.sort_by_key(|(label, _)| catalog.index_of(label).unwrap());
        prop_assert_eq!(&dec.negative, &expected);

        // P^2 = D^2 - N^2 = 0 - (4 N1^2 + N2^2) = 4l + m here.
        let expected_p2 = Rat::from(4 * n1.l as i64 + parts.m as i64);
        prop_assert_eq!(dec.p_squared().clone(), expected_p2);
        prop_assert!(verify_decomposition(&dec, &catalog).unwrap().all_pass());
    }

    /// Fiber classes of validated smooth-plane and quadric specs square
    /// to zero, and blowing up each node drops the genus by one.
    #[test]
    fn fiber_square_and_genus_drop(
        d in 3u32..=10,
        m_frac in 0u32..=3,
    ) {
        let budget = (d * d) as u64;
        let mobility_cap = ((d as u64) * (d as u64 + 3) / 6).saturating_sub(1);
        let m = (budget / 4).min(mobility_cap) * (m_frac as u64) / 3;
        let l = budget - 4 * m;
        let spec = PencilSpec::plane(d, l, m);
        prop_assume!(validate_pencil(spec.clone()).is_ok());
        let model = build_fibration(&validate_pencil(spec).unwrap());
        prop_assert_eq!(
            model.surface.self_intersection(&model.fiber).unwrap(),
            Rat::zero()
        );
        let base_pa = ((d as i64) - 1) * ((d as i64) - 2) / 2;
        prop_assert_eq!(model.genus, base_pa - m as i64);
    }
}

/// The closed degree formulas for `a = K_f^2` agree with the lattice
/// square of `K_S + 2C` over the full desk-scale sweep. The lattice side
/// is assembled here independently of the model builder.
#[test]
fn k_f_squared_formula_matches_lattice_sweep() {
    for d in 3u32..=24 {
        let budget = (d as i64) * (d as i64);
        let max_m = (budget / 4).min((d as i64) * (d as i64 + 3) / 6 - 1);
        for m in 0..=max_m {
            let l = budget - 4 * m;
            let surface = build_surface(BaseSurface::ProjectivePlane, l as usize, m as usize);
            let mut coeffs = vec![Rat::from(d as i64)];
            coeffs.extend(std::iter::repeat_n(Rat::from(-1), l as usize));
            coeffs.extend(std::iter::repeat_n(Rat::from(-2), m as usize));
            let fiber = surface.class_from_coefficients(coeffs).unwrap();
            let kf = surface
                .canonical_class()
                .checked_add(&fiber.scaled(&Rat::from(2)))
                .unwrap();
            let lattice = surface.self_intersection(&kf).unwrap();
            let formula = 3 * budget - 12 * (d as i64) + 9 - 5 * m;
            assert_eq!(lattice, Rat::from(formula), "plane d={d}, m={m}");
        }
    }
    for alpha in 1u32..=12 {
        for beta in 1u32..=12 {
            let budget = 2 * (alpha as i64) * (beta as i64);
            let mobility = (alpha as i64) * (beta as i64) + alpha as i64 + beta as i64;
            let max_m = (budget / 4).min((mobility - 1) / 3);
            for m in 0..=max_m {
                let l = budget - 4 * m;
                let surface =
                    build_surface(BaseSurface::Hirzebruch(0), l as usize, m as usize);
                let mut coeffs = vec![Rat::from(alpha as i64), Rat::from(beta as i64)];
                coeffs.extend(std::iter::repeat_n(Rat::from(-1), l as usize));
                coeffs.extend(std::iter::repeat_n(Rat::from(-2), m as usize));
                let fiber = surface.class_from_coefficients(coeffs).unwrap();
                let kf = surface
                    .canonical_class()
                    .checked_add(&fiber.scaled(&Rat::from(2)))
                    .unwrap();
                let lattice = surface.self_intersection(&kf).unwrap();
                let formula =
                    8 * (alpha as i64 - 1) * (beta as i64 - 1) - l - 9 * m;
                assert_eq!(lattice, Rat::from(formula), "quadric ({alpha},{beta}), m={m}");
            }
        }
    }
}

/// On the smooth-pencil family the adjoint decompositions collapse to
/// multiples of the section sum and the count expressions become perfect
/// squares: P^2(C+2K) = (d-6)^2, P^2(C+3K) = (d-9)^2. Contracting all
/// d^2 sections recovers the plane, so K_T^2 = 9 exactly.
#[test]
fn smooth_family_decompositions_are_squares() {
    use fibslope::invariants::invariants;
    for d in 4u32..=20 {
        let validated = validate_pencil(PencilSpec::smooth_plane(d)).unwrap();
        let model = build_fibration(&validated);
        let dd = d as i64;

        let inv = invariants(&model).unwrap();
        assert_eq!(inv.k_t_squared, 9, "d={d}");

        for (n, expected) in [(2i64, (dd - 6) * (dd - 6)), (3, (dd - 9) * (dd - 9))] {
            let divisor =
                DivisorData::adjoint(&model.surface, &model.fiber, n, &model.catalog).unwrap();
            let dec = zariski_fujita(&divisor, &model.catalog).unwrap();
            assert_eq!(dec.p_squared(), &Rat::from(expected), "d={d}, n={n}");
            let mult = Rat::from(n - 1);
            assert!(
                dec.negative.iter().all(|(_, m)| *m == mult),
                "d={d}, n={n}: sections should all carry multiplicity {mult}"
            );
            assert_eq!(dec.negative.len(), (d * d) as usize);
            assert!(verify_decomposition(&dec, &model.catalog).unwrap().all_pass());
        }
    }
}

/// Balance-equation rejection, swept exhaustively for d <= 30: the
/// correct `l` validates whenever the mobility bound allows a pencil, and
/// any off-by-one `l` is rejected with the balance constraint named.
#[test]
fn balance_rejection_sweep() {
    for d in 1u32..=30 {
        let budget = (d as i64) * (d as i64);
        for m in 0..=(budget / 4) {
            let l = budget - 4 * m;
            let mobility_ok = (d as i64) * (d as i64 + 3) / 2 - 3 * m > 0;
            let valid = validate_pencil(PencilSpec::plane(d, l as u64, m as u64));
            assert_eq!(valid.is_ok(), mobility_ok, "d={d}, m={m}");

            for bad_l in [l - 1, l + 1, l + 4] {
                if bad_l < 0 {
                    continue;
                }
                let err = validate_pencil(PencilSpec::plane(d, bad_l as u64, m as u64))
                    .expect_err("broken balance must be rejected");
                assert!(
                    err.violations.iter().any(|v| v.constraint == "balance"),
                    "d={d}, m={m}, l={bad_l}: balance violation missing"
                );
            }
        }
    }
}

/// Vertex location of the slope polynomial under the `a >= 5b` gate: the
/// abscissa lies strictly inside (0, 2).
#[test]
fn slope_polynomial_vertex_window() {
    use fibslope::invariants::InvariantReport;
    use fibslope::verdicts::{slope_polynomial, AnalysisFlags, EffectivityAssertions, GateContext};
    use fibslope::pencil::GonalityBounds;

    for b in 1i64..=60 {
        for extra in 0i64..=40 {
            let a = 5 * b + extra;
            let inv = InvariantReport {
                a,
                b,
                g: b + 1,
                slope: Rat::from(a) / Rat::from(b + 1),
                l: 0,
                l_prime: 0,
                m: 0,
                k_t_squared: a - 8 * b,
                sigma_lower_bound: Rat::zero(),
                six_b_margin: a - 6 * b,
            };
            let ctx = GateContext {
                g: b + 1,
                k_t_squared: a - 8 * b,
                gonality: GonalityBounds {
                    lower: None,
                    upper: None,
                    caveat: true,
                    assumed: false,
                },
                flags: AnalysisFlags::default(),
                assertions: EffectivityAssertions::default(),
            };
            let report = slope_polynomial(&inv, &ctx);
            let vertex = report.data.vertex.expect("a >= 5b forces a - 4b > 0");
            assert!(vertex.is_positive(), "a={a}, b={b}");
            assert!(vertex < Rat::from(2), "a={a}, b={b}");
            let alt = report.data.vertex_reciprocal_form.unwrap();
            assert!(alt.is_positive() && alt < Rat::from(2), "a={a}, b={b}");
        }
    }
}
