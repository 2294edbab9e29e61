//! Exact-arithmetic toolkit for fibrations on rational surfaces.
//!
//! Models a fibration f: S -> P^1 obtained by blowing up the base locus of
//! a pencil of curves on P^2 or on the quadric P^1 x P^1 as Picard-lattice
//! data, computes the Zariski-Fujita decomposition of the adjoint divisors
//! `C + 2K_S` and `C + 3K_S` over a tracked catalog of exceptional curves,
//! and evaluates a suite of slope inequalities relating `K_f^2` to the
//! fiber genus. Every quantity is an exact rational; verdicts never touch
//! floating point.
//!
//! Entry points:
//! - [`pencil::validate_pencil`] / [`pencil::build_fibration`] turn a
//!   pencil spec into a [`invariants::FibrationModel`];
//! - [`zariski::zariski_fujita`] decomposes a divisor over the curve
//!   catalog and [`zariski::verify_decomposition`] audits the result;
//! - [`analysis::analyze`] runs the whole pipeline and produces a
//!   serializable report;
//! - [`search::run_search`] sweeps the pencil families;
//! - [`selftest::run_selftest`] runs the golden acceptance suite.

// Error variants carry the exact offending values (rationals, labels) for
// diagnostics; they are cold and not worth boxing.
#![allow(clippy::result_large_err)]

pub mod analysis;
pub mod catalog;
pub mod invariants;
pub mod lattice;
pub mod linalg;
pub mod pencil;
pub mod rat;
pub mod report;
pub mod search;
pub mod selftest;
pub mod verdicts;
pub mod zariski;

pub use analysis::{analyze, AnalysisReport, AnalysisRequest};
pub use catalog::{CatalogCurve, CurveCatalog, CurveKind, ExceptionalChainSpec};
pub use invariants::{invariants, FibrationModel, InvariantReport};
pub use lattice::{build_surface, BaseSurface, DivisorClass, SurfaceModel};
pub use pencil::{
    build_fibration, gonality_bounds, relative_minimality_check, validate_pencil,
    GonalityBounds, MinimalityCertificate, PencilFamily, PencilSpec, ValidatedPencil,
};
pub use rat::Rat;
pub use search::{run_search, SearchConstraint, SearchFamily, SearchRequest, SearchRow};
pub use selftest::run_selftest;
pub use verdicts::{
    AnalysisFlags, EffectivityAssertions, HypothesisStatus, VerdictItem, VerdictReport,
};
pub use zariski::{
    closed_form_n1, closed_form_n2_n1prime, verify_decomposition, zariski_fujita,
    DivisorData, ZariskiDecomposition,
};
