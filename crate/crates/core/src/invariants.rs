//! Numerical invariants of a fibration model.
//!
//! Notation follows the standard shorthand for a genus-g fibration
//! f: S -> P^1 with general fiber C: `a = K_f^2` (square of the relative
//! canonical class `K_f = K_S + 2C`), `b = g - 1`, slope `a/g`, chain
//! totals `l`, `l'`, `m`, and `K_T^2 = a - 8b + l` for the surface T
//! obtained by contracting the section configuration.

use serde::{Deserialize, Serialize};

use crate::catalog::CurveCatalog;
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::pencil::PencilFamily;
use crate::rat::Rat;

/// Totals of the exceptional configuration: `l = sum(l(G_i)+1)` over
/// sections, `m = sum(m(D_i)+1)` over bisecants, `l'` over nonempty
/// horizontal chains only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainTotals {
    pub sections: u64,
    pub bisecants: u64,
    pub l: u64,
    pub l_prime: u64,
    pub m: u64,
}

/// A fibered surface: the blown-up lattice, the fiber class, the tracked
/// exceptional curve catalog and the combinatorial bookkeeping.
#[derive(Clone, Debug)]
pub struct FibrationModel {
    pub surface: SurfaceModel,
    pub fiber: DivisorClass,
    pub catalog: CurveCatalog,
    pub genus: i64,
    pub family: PencilFamily,
    pub chains: ChainTotals,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum InvariantError {
    #[error("genus {genus} is below 2; slope analysis requires g >= 2")]
    GenusTooSmall { genus: i64 },
    #[error("plurigenus index must be at least 1, got {0}")]
    BadPluricanonicalIndex(i64),
    #[error("value does not fit in 64 bits: {0}")]
    Overflow(String),
    #[error(transparent)]
    Lattice(#[from] crate::lattice::LatticeError),
}

fn to_i64(value: &Rat, what: &str) -> Result<i64, InvariantError> {
    value
        .to_i64()
        .ok_or_else(|| InvariantError::Overflow(format!("{what} = {value}")))
}

impl FibrationModel {
    /// The relative canonical class `K_f = K_S + 2C`.
    pub fn relative_canonical(&self) -> DivisorClass {
        self.surface
            .canonical_class()
            .checked_add(&self.fiber.scaled(&Rat::from(2)))
            .expect("fiber lives on the model surface")
    }

    pub fn b(&self) -> i64 {
        self.genus - 1
    }

    /// `a = K_f^2` from the lattice.
    pub fn k_f_squared(&self) -> i64 {
        let kf = self.relative_canonical();
        let sq = self
            .surface
            .self_intersection(&kf)
            .expect("relative canonical lives on the model surface");
        sq.to_i64().expect("K_f^2 of an integral class is an integer")
    }
}

/// The full invariant set of a model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub a: i64,
    pub b: i64,
    pub g: i64,
    pub slope: Rat,
    pub l: i64,
    pub l_prime: i64,
    pub m: i64,
    pub k_t_squared: i64,
    pub sigma_lower_bound: Rat,
    pub six_b_margin: i64,
}

/// Computes every invariant; requires `g >= 2` so the slope is defined.
pub fn invariants(model: &FibrationModel) -> Result<InvariantReport, InvariantError> {
    let g = model.genus;
    if g < 2 {
        return Err(InvariantError::GenusTooSmall { genus: g });
    }
    let b = g - 1;
    let a = model.k_f_squared();
    let l = model.chains.l as i64;
    let l_prime = model.chains.l_prime as i64;
    let m = model.chains.m as i64;
    Ok(InvariantReport {
        a,
        b,
        g,
        slope: Rat::from(a) / Rat::from(g),
        l,
        l_prime,
        m,
        k_t_squared: a - 8 * b + l,
        sigma_lower_bound: sigma_lower_bound_from(a, b),
        six_b_margin: a - 6 * b,
    })
}

/// `a` by the closed degree formula of the pencil family, for
/// cross-checking against the lattice square.
pub fn k_f_squared_closed_form(family: PencilFamily, l: i64, m: i64) -> i64 {
    match family {
        PencilFamily::Plane { degree } => {
            let d = degree as i64;
            3 * d * d - 12 * d + 9 - 5 * m
        }
        PencilFamily::RuledQuadric { alpha, beta } => {
            let (alpha, beta) = (alpha as i64, beta as i64);
            8 * (alpha - 1) * (beta - 1) - l - 9 * m
        }
    }
}

/// Sections of the pluricanonical system `nK_f` and the rank of its
/// direct image, assuming `K_f` big and nef (hypothesis gated upstream).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PluricanonicalCount {
    pub n: i64,
    pub sections: i64,
    pub direct_image_rank: i64,
}

/// `h^0(nK_f) = (n(n-1)a + 2bn)/2 + 1` with direct image rank `b(2n-1)`.
pub fn h0_n_relative_canonical(
    model: &FibrationModel,
    n: i64,
) -> Result<PluricanonicalCount, InvariantError> {
    if n < 1 {
        return Err(InvariantError::BadPluricanonicalIndex(n));
    }
    let g = model.genus;
    if g < 2 {
        return Err(InvariantError::GenusTooSmall { genus: g });
    }
    let a = Rat::from(model.k_f_squared());
    let b = Rat::from(model.b());
    let n_rat = Rat::from(n);
    let sections = (&n_rat * (&n_rat - Rat::one()) * &a + Rat::from(2) * &b * &n_rat)
        / Rat::from(2)
        + Rat::one();
    let rank = &b * (Rat::from(2) * &n_rat - Rat::one());
    Ok(PluricanonicalCount {
        n,
        sections: to_i64(&sections, "h0(nK_f)")?,
        direct_image_rank: to_i64(&rank, "rank f_* nK_f")?,
    })
}

fn sigma_lower_bound_from(a: i64, b: i64) -> Rat {
    Rat::from(a) / Rat::from(2 * b) + Rat::from(2)
}

/// Strict lower bound `a/(2g-2) + 2` for the number of singular fibers of
/// a semistable non-isotrivial fibration. The semistability flag is a
/// user declaration; reports carry the bound as conditional on it.
pub fn sigma_lower_bound(model: &FibrationModel) -> Result<Rat, InvariantError> {
    if model.genus < 2 {
        return Err(InvariantError::GenusTooSmall { genus: model.genus });
    }
    Ok(sigma_lower_bound_from(model.k_f_squared(), model.b()))
}
