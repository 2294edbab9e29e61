//! The tracked catalog of exceptional curves on a fibered surface.
//!
//! The catalog lists every curve that can pair negatively with the adjoint
//! divisors `C + 2K_S` and `C + 3K_S`: the `(-1)`-sections, their attached
//! chains of vertical `(-2)`-curves, horizontal `(-2)`-chains, and the
//! `(-1)`-bisecants (curves meeting the fiber twice) with their vertical
//! chains. Every "nef" statement downstream is relative to this catalog.
//!
//! Entries carry their pairing data (self-intersection, pairing with the
//! canonical class and with the fiber, plus pairwise intersections). An
//! entry may additionally carry an embedded divisor class, in which case
//! the declared pairing data is checked against the Gram form at
//! construction time.

use serde::{Deserialize, Serialize};

use crate::lattice::{DivisorClass, SurfaceModel};
use crate::rat::Rat;

/// Chain lengths per carrier: the combinatorial shape of the exceptional
/// configuration. `section_chains[i]` is the length of the vertical
/// `(-2)`-chain attached to section `i` (0 = empty); `horizontal_chains`
/// lists the horizontal chain lengths per section (empty = all zero);
/// `bisecant_chains[k]` is the vertical chain length on bisecant `k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalChainSpec {
    #[serde(default)]
    pub section_chains: Vec<u32>,
    #[serde(default)]
    pub horizontal_chains: Vec<u32>,
    #[serde(default)]
    pub bisecant_chains: Vec<u32>,
}

impl ExceptionalChainSpec {
    pub fn plain(sections: usize, bisecants: usize) -> Self {
        ExceptionalChainSpec {
            section_chains: vec![0; sections],
            horizontal_chains: Vec::new(),
            bisecant_chains: vec![0; bisecants],
        }
    }

    /// Horizontal chain length of section `i` (0 when the list is empty).
    pub fn horizontal_len(&self, i: usize) -> u32 {
        self.horizontal_chains.get(i).copied().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    /// `(-1)`-section: `E^2 = -1`, `K.E = -1`, `C.E = 1`.
    Section,
    /// Vertical `(-2)`-chain curve: `E^2 = -2`, `K.E = 0`, `C.E = 0`.
    ChainCurve,
    /// Horizontal `(-2)`-chain curve: `E^2 = -2`, `K.E = 0`, `C.E = 1`.
    HorizontalChainCurve,
    /// `(-1)`-bisecant: `E^2 = -1`, `K.E = -1`, `C.E = 2`.
    Bisecant,
}

impl CurveKind {
    /// Expected (self^2, K.E, C.E) for the kind.
    pub fn expected_pairings(self) -> (i64, i64, i64) {
        match self {
            CurveKind::Section => (-1, -1, 1),
            CurveKind::ChainCurve => (-2, 0, 0),
            CurveKind::HorizontalChainCurve => (-2, 0, 1),
            CurveKind::Bisecant => (-1, -1, 2),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogCurve {
    pub label: String,
    pub kind: CurveKind,
    /// Embedded divisor class, when the curve lives in the surface lattice.
    pub class: Option<DivisorClass>,
    pub self_intersection: Rat,
    pub canonical_pairing: Rat,
    pub fiber_pairing: Rat,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CatalogError {
    #[error("duplicate curve label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown curve label {0:?}")]
    UnknownLabel(String),
    #[error("curve {label:?}: declared {quantity} is {declared} but the Gram form gives {computed}")]
    InconsistentPairing {
        label: String,
        quantity: String,
        declared: Rat,
        computed: Rat,
    },
    #[error("curve {label:?} of kind {kind:?} has {quantity} = {value}, expected {expected}")]
    KindInvariantViolated {
        label: String,
        kind: CurveKind,
        quantity: String,
        value: Rat,
        expected: i64,
    },
    #[error("malformed chain at {label:?}: {reason}")]
    MalformedChain { label: String, reason: String },
    #[error("lattice error: {0}")]
    Lattice(#[from] crate::lattice::LatticeError),
}

/// The catalog: an ordered list of curves plus their full pairing matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveCatalog {
    entries: Vec<CatalogCurve>,
    /// Symmetric matrix; `pairings[i][i]` is the self-intersection.
    pairings: Vec<Vec<Rat>>,
}

impl CurveCatalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CatalogCurve] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &CatalogCurve {
        &self.entries[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.label == label)
    }

    pub fn pairing(&self, i: usize, j: usize) -> &Rat {
        &self.pairings[i][j]
    }

    /// Gram matrix of the sub-configuration indexed by `support`.
    pub fn gram_submatrix(&self, support: &[usize]) -> Vec<Vec<Rat>> {
        support
            .iter()
            .map(|&i| support.iter().map(|&j| self.pairings[i][j].clone()).collect())
            .collect()
    }

    /// Indices of entries adjacent to `i` (nonzero off-diagonal pairing).
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| j != i && !self.pairings[i][j].is_zero())
            .collect()
    }

    /// True iff every entry carries an embedded class.
    pub fn fully_embedded(&self) -> bool {
        self.entries.iter().all(|e| e.class.is_some())
    }

    /// Builds an abstract catalog (pairing data only) from chain lengths.
    ///
    /// Entry order: per section its vertical chain then its horizontal
    /// chain, then per bisecant its vertical chain. Labels are `G1`,
    /// `G1:E1`, `G1:E'1`, `D1`, `D1:F1`, ...
    pub fn from_chain_spec(spec: &ExceptionalChainSpec) -> CurveCatalog {
        let mut builder = CatalogBuilder::new();
        for (i, &len) in spec.section_chains.iter().enumerate() {
            let section = builder.add_abstract(format!("G{}", i + 1), CurveKind::Section);
            let mut prev = section;
            for j in 1..=len {
                let e = builder.add_abstract(format!("G{}:E{}", i + 1, j), CurveKind::ChainCurve);
                builder.set_adjacent(prev, e);
                prev = e;
            }
            let mut prev = section;
            for j in 1..=spec.horizontal_len(i) {
                let e = builder.add_abstract(
                    format!("G{}:E'{}", i + 1, j),
                    CurveKind::HorizontalChainCurve,
                );
                builder.set_adjacent(prev, e);
                prev = e;
            }
        }
        for (k, &len) in spec.bisecant_chains.iter().enumerate() {
            let bisecant = builder.add_abstract(format!("D{}", k + 1), CurveKind::Bisecant);
            let mut prev = bisecant;
            for j in 1..=len {
                let f = builder.add_abstract(format!("D{}:F{}", k + 1, j), CurveKind::ChainCurve);
                builder.set_adjacent(prev, f);
                prev = f;
            }
        }
        builder.finish_abstract()
    }

    /// Derives the chain structure (which chain curve belongs to which
    /// carrier, in path order) from the adjacency data. Rejects non-path
    /// configurations: branching chains, chain curves shared between
    /// carriers, or chain curves attached to no carrier.
    pub fn chain_structure(&self) -> Result<ChainStructure, CatalogError> {
        let mut consumed = vec![false; self.len()];
        let mut sections = Vec::new();
        let mut bisecants = Vec::new();

        for (i, entry) in self.entries.iter().enumerate() {
            match entry.kind {
                CurveKind::Section => {
                    let vertical = self.walk_chain(i, CurveKind::ChainCurve, &mut consumed)?;
                    let horizontal =
                        self.walk_chain(i, CurveKind::HorizontalChainCurve, &mut consumed)?;
                    sections.push(SectionChains {
                        section: i,
                        vertical,
                        horizontal,
                    });
                }
                CurveKind::Bisecant => {
                    let chain = self.walk_chain(i, CurveKind::ChainCurve, &mut consumed)?;
                    let horizontal =
                        self.neighbors(i).into_iter().find(|&j| {
                            self.entries[j].kind == CurveKind::HorizontalChainCurve
                        });
                    if horizontal.is_some() {
                        return Err(CatalogError::MalformedChain {
                            label: entry.label.clone(),
                            reason: "horizontal chains attach to sections only".into(),
                        });
                    }
                    bisecants.push(BisecantChain { bisecant: i, chain });
                }
                _ => {}
            }
        }

        for (i, entry) in self.entries.iter().enumerate() {
            if matches!(entry.kind, CurveKind::ChainCurve | CurveKind::HorizontalChainCurve)
                && !consumed[i]
            {
                return Err(CatalogError::MalformedChain {
                    label: entry.label.clone(),
                    reason: "chain curve is not attached to any section or bisecant".into(),
                });
            }
        }

        Ok(ChainStructure { sections, bisecants })
    }

    /// Follows the unique path of `kind`-curves starting next to `carrier`.
    fn walk_chain(
        &self,
        carrier: usize,
        kind: CurveKind,
        consumed: &mut [bool],
    ) -> Result<Vec<usize>, CatalogError> {
        let starts: Vec<usize> = self
            .neighbors(carrier)
            .into_iter()
            .filter(|&j| self.entries[j].kind == kind)
            .collect();
        if starts.len() > 1 {
            return Err(CatalogError::MalformedChain {
                label: self.entries[carrier].label.clone(),
                reason: "more than one maximal chain attached to the carrier".into(),
            });
        }
        let mut chain = Vec::new();
        let mut prev = carrier;
        let mut current = match starts.first() {
            Some(&s) => s,
            None => return Ok(chain),
        };
        loop {
            if consumed[current] {
                return Err(CatalogError::MalformedChain {
                    label: self.entries[current].label.clone(),
                    reason: "chain curve attached to more than one carrier".into(),
                });
            }
            if self.pairings[prev][current] != Rat::one() {
                return Err(CatalogError::MalformedChain {
                    label: self.entries[current].label.clone(),
                    reason: "adjacent chain pairings must equal one".into(),
                });
            }
            consumed[current] = true;
            chain.push(current);
            let next: Vec<usize> = self
                .neighbors(current)
                .into_iter()
                .filter(|&j| j != prev && self.entries[j].kind == kind && !consumed[j])
                .collect();
            match next.len() {
                0 => break,
                1 => {
                    prev = current;
                    current = next[0];
                }
                _ => {
                    return Err(CatalogError::MalformedChain {
                        label: self.entries[current].label.clone(),
                        reason: "chain branches; expected a path".into(),
                    })
                }
            }
        }
        Ok(chain)
    }
}

/// Chain curves grouped by carrier, in path order away from the carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStructure {
    pub sections: Vec<SectionChains>,
    pub bisecants: Vec<BisecantChain>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionChains {
    pub section: usize,
    pub vertical: Vec<usize>,
    pub horizontal: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisecantChain {
    pub bisecant: usize,
    pub chain: Vec<usize>,
}

/// Incremental catalog construction; used for abstract configurations and
/// by the pencil builder for embedded ones.
pub struct CatalogBuilder {
    entries: Vec<CatalogCurve>,
    adjacency: Vec<(usize, usize)>,
}

impl CatalogBuilder {
    pub fn new() -> Self {
        CatalogBuilder {
            entries: Vec::new(),
            adjacency: Vec::new(),
        }
    }

    /// Adds an abstract entry with the pairing data implied by its kind.
    pub fn add_abstract(&mut self, label: impl Into<String>, kind: CurveKind) -> usize {
        let (selfsq, ke, ce) = kind.expected_pairings();
        self.entries.push(CatalogCurve {
            label: label.into(),
            kind,
            class: None,
            self_intersection: Rat::from(selfsq),
            canonical_pairing: Rat::from(ke),
            fiber_pairing: Rat::from(ce),
        });
        self.entries.len() - 1
    }

    /// Adds an embedded entry; pairing data is derived from the class.
    pub fn add_embedded(
        &mut self,
        label: impl Into<String>,
        kind: CurveKind,
        class: DivisorClass,
        surface: &SurfaceModel,
        fiber: &DivisorClass,
    ) -> Result<usize, CatalogError> {
        let label = label.into();
        let selfsq = surface.self_intersection(&class)?;
        let ke = surface.pair(&class, &surface.canonical_class())?;
        let ce = surface.pair(&class, fiber)?;
        let (e_selfsq, e_ke, e_ce) = kind.expected_pairings();
        for (quantity, value, expected) in [
            ("self-intersection", &selfsq, e_selfsq),
            ("canonical pairing", &ke, e_ke),
            ("fiber pairing", &ce, e_ce),
        ] {
            if *value != Rat::from(expected) {
                return Err(CatalogError::KindInvariantViolated {
                    label,
                    kind,
                    quantity: quantity.into(),
                    value: value.clone(),
                    expected,
                });
            }
        }
        self.entries.push(CatalogCurve {
            label,
            kind,
            class: Some(class),
            self_intersection: selfsq,
            canonical_pairing: ke,
            fiber_pairing: ce,
        });
        Ok(self.entries.len() - 1)
    }

    /// Declares `a.b = 1` (chain adjacency) for abstract entries.
    pub fn set_adjacent(&mut self, a: usize, b: usize) {
        self.adjacency.push((a.min(b), a.max(b)));
    }

    fn check_duplicates(&self) -> Result<(), CatalogError> {
        for (i, e) in self.entries.iter().enumerate() {
            if self.entries[..i].iter().any(|o| o.label == e.label) {
                return Err(CatalogError::DuplicateLabel(e.label.clone()));
            }
        }
        Ok(())
    }

    /// Finishes an abstract catalog: off-diagonal pairings are one on the
    /// declared adjacencies and zero elsewhere.
    pub fn finish_abstract(self) -> CurveCatalog {
        self.check_duplicates().expect("abstract builder labels are generated");
        let n = self.entries.len();
        let mut pairings = vec![vec![Rat::zero(); n]; n];
        for (i, e) in self.entries.iter().enumerate() {
            pairings[i][i] = e.self_intersection.clone();
        }
        for &(a, b) in &self.adjacency {
            pairings[a][b] = Rat::one();
            pairings[b][a] = Rat::one();
        }
        CurveCatalog {
            entries: self.entries,
            pairings,
        }
    }

    /// Finishes a mixed catalog: pairings between embedded entries come
    /// from the Gram form (and are checked against declared adjacencies);
    /// pairings involving an abstract entry come from the adjacency list.
    #[allow(clippy::needless_range_loop)] // triangular loop with symmetric writes
    pub fn finish_embedded(self, surface: &SurfaceModel) -> Result<CurveCatalog, CatalogError> {
        self.check_duplicates()?;
        let n = self.entries.len();
        let mut pairings = vec![vec![Rat::zero(); n]; n];
        for (i, e) in self.entries.iter().enumerate() {
            pairings[i][i] = e.self_intersection.clone();
        }
        for &(a, b) in &self.adjacency {
            pairings[a][b] = Rat::one();
            pairings[b][a] = Rat::one();
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if let (Some(ci), Some(cj)) = (&self.entries[i].class, &self.entries[j].class) {
                    let computed = surface.pair(ci, cj)?;
                    if pairings[i][j] != computed {
                        if !pairings[i][j].is_zero() {
                            return Err(CatalogError::InconsistentPairing {
                                label: self.entries[j].label.clone(),
                                quantity: format!("pairing with {:?}", self.entries[i].label),
                                declared: pairings[i][j].clone(),
                                computed,
                            });
                        }
                        pairings[i][j] = computed.clone();
                        pairings[j][i] = computed;
                    }
                }
            }
        }
        Ok(CurveCatalog {
            entries: self.entries,
            pairings,
        })
    }
}

impl Default for CatalogBuilder {
    fn default() -> Self {
        Self::new()
    }
}
