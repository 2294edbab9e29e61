//! Exact arithmetic in the Picard lattice of a blown-up rational surface.
//!
//! The surfaces handled here are obtained from the projective plane or a
//! Hirzebruch surface by blowing up a set of points. The lattice is the
//! orthogonal sum of the base lattice and one `<-1>` summand per blow-up,
//! in a frozen basis order: base classes first, then the classes over
//! simple base points, then the classes over nodes (synthetic labels, when
//! present, come last). All pairings, genera and Euler characteristics are
//! computed as exact rationals.

use serde::{Deserialize, Serialize};

use crate::rat::Rat;

/// Minimal rational surface underlying the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseSurface {
    /// `P^2`, rank-1 lattice generated by the hyperplane class `H` with `H^2 = 1`.
    ProjectivePlane,
    /// The Hirzebruch surface `F_n`: rank-2 lattice with basis `(G0, F)` where
    /// `G0^2 = -n`, `F^2 = 0`, `G0.F = 1`. For `F_0` this is the bidegree
    /// basis with both squares zero and pairing one.
    Hirzebruch(u32),
}

impl BaseSurface {
    pub fn rank(self) -> usize {
        match self {
            BaseSurface::ProjectivePlane => 1,
            BaseSurface::Hirzebruch(_) => 2,
        }
    }

    /// Pairing of two coefficient vectors restricted to the base lattice.
    fn pair_base(self, a: &[Rat], b: &[Rat]) -> Rat {
        match self {
            BaseSurface::ProjectivePlane => &a[0] * &b[0],
            BaseSurface::Hirzebruch(n) => {
                // [[-n, 1], [1, 0]] in the (G0, F) basis.
                let cross = &a[0] * &b[1] + &a[1] * &b[0];
                cross - Rat::from(n as i64) * &a[0] * &b[0]
            }
        }
    }

    /// Base-lattice coefficients of the canonical class.
    fn canonical_base(self) -> Vec<Rat> {
        match self {
            BaseSurface::ProjectivePlane => vec![Rat::from(-3)],
            BaseSurface::Hirzebruch(n) => vec![Rat::from(-2), Rat::from(-(n as i64) - 2)],
        }
    }
}

/// Origin of an exceptional basis class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelOrigin {
    SimplePoint,
    Node,
    Synthetic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalLabel {
    pub name: String,
    pub origin: LabelOrigin,
}

/// A blown-up rational surface: the base plus its ordered exceptional labels.
/// Owns the intersection form (base Gram orthogonal-summed with `<-1>` per label).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    base: BaseSurface,
    labels: Vec<ExceptionalLabel>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("divisor class has {found} coefficients but the surface has rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Constructs the surface obtained by blowing up `simple_count` simple base
/// points and `node_count` nodes. Simple-point labels come first (`p1..`),
/// then node labels (`q1..`).
pub fn build_surface(base: BaseSurface, simple_count: usize, node_count: usize) -> SurfaceModel {
    let mut labels = Vec::with_capacity(simple_count + node_count);
    for i in 1..=simple_count {
        labels.push(ExceptionalLabel {
            name: format!("p{i}"),
            origin: LabelOrigin::SimplePoint,
        });
    }
    for j in 1..=node_count {
        labels.push(ExceptionalLabel {
            name: format!("q{j}"),
            origin: LabelOrigin::Node,
        });
    }
    SurfaceModel { base, labels }
}

impl SurfaceModel {
    pub fn base(&self) -> BaseSurface {
        self.base
    }

    pub fn labels(&self) -> &[ExceptionalLabel] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.base.rank() + self.labels.len()
    }

    /// Appends a synthetic `<-1>` label and returns its basis index.
    pub fn push_synthetic_label(&mut self, name: impl Into<String>) -> usize {
        self.labels.push(ExceptionalLabel {
            name: name.into(),
            origin: LabelOrigin::Synthetic,
        });
        self.rank() - 1
    }

    pub fn zero_class(&self) -> DivisorClass {
        DivisorClass {
            coefficients: vec![Rat::zero(); self.rank()],
        }
    }

    /// The basis class with coefficient one at `index`.
    pub fn basis_class(&self, index: usize) -> DivisorClass {
        assert!(index < self.rank(), "basis index out of range");
        let mut c = self.zero_class();
        c.coefficients[index] = Rat::one();
        c
    }

    pub fn class_from_coefficients(
        &self,
        coefficients: Vec<Rat>,
    ) -> Result<DivisorClass, LatticeError> {
        if coefficients.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: coefficients.len(),
            });
        }
        Ok(DivisorClass { coefficients })
    }

    fn check(&self, d: &DivisorClass) -> Result<(), LatticeError> {
        if d.coefficients.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: d.coefficients.len(),
            });
        }
        Ok(())
    }

    /// The intersection pairing. Symmetric and bilinear; the Gram form is the
    /// base form orthogonal-summed with `<-1>` per exceptional label.
    pub fn pair(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rat, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        let base_rank = self.base.rank();
        let mut value = self.base.pair_base(&a.coefficients, &b.coefficients);
        for i in base_rank..self.rank() {
            let (ca, cb) = (&a.coefficients[i], &b.coefficients[i]);
            if ca.is_zero() || cb.is_zero() {
                continue;
            }
            value -= &(ca * cb);
        }
        Ok(value)
    }

    pub fn self_intersection(&self, d: &DivisorClass) -> Result<Rat, LatticeError> {
        self.pair(d, d)
    }

    /// The canonical class in the standard basis: the base canonical class
    /// with coefficient `+1` on every exceptional label.
    pub fn canonical_class(&self) -> DivisorClass {
        let mut coefficients = self.base.canonical_base();
        coefficients.extend(std::iter::repeat_n(Rat::one(), self.labels.len()));
        DivisorClass { coefficients }
    }

    /// Adjunction: `p_a(D) = 1 + (D^2 + D.K)/2`. A non-integral value simply
    /// signals that `D` is not a candidate curve class.
    pub fn arithmetic_genus(&self, d: &DivisorClass) -> Result<Rat, LatticeError> {
        let k = self.canonical_class();
        let d2 = self.pair(d, d)?;
        let dk = self.pair(d, &k)?;
        Ok(Rat::one() + (d2 + dk) / Rat::from(2))
    }

    /// Riemann-Roch on a rational surface: `chi(D) = 1 + D.(D - K)/2`.
    pub fn chi_riemann_roch(&self, d: &DivisorClass) -> Result<Rat, LatticeError> {
        let k = self.canonical_class();
        let d2 = self.pair(d, d)?;
        let dk = self.pair(d, &k)?;
        Ok(Rat::one() + (d2 - dk) / Rat::from(2))
    }
}

/// A divisor class: an exact coefficient vector in a surface's frozen basis.
/// Arithmetic between classes of different lengths is rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    coefficients: Vec<Rat>,
}

impl DivisorClass {
    pub fn coefficients(&self) -> &[Rat] {
        &self.coefficients
    }

    pub fn coefficient(&self, index: usize) -> &Rat {
        &self.coefficients[index]
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// True iff every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coefficients.iter().all(Rat::is_integer)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Rat::is_zero)
    }

    pub fn checked_add(&self, other: &DivisorClass) -> Result<DivisorClass, LatticeError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &DivisorClass) -> Result<DivisorClass, LatticeError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scaled(&self, factor: &Rat) -> DivisorClass {
        DivisorClass {
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &DivisorClass,
        f: impl Fn(&Rat, &Rat) -> Rat,
    ) -> Result<DivisorClass, LatticeError> {
        if self.len() != other.len() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(DivisorClass {
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coefficients.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let coefficients = Vec::<Rat>::deserialize(deserializer)?;
        Ok(DivisorClass { coefficients })
    }
}
