//! Parameter-space sweeps over the pencil families.
//!
//! Three families are enumerable. The smooth plane family (`m = 0`,
//! `l = d^2`) and the balanced nodal quadric family (`l = 2ab - 4m`) sweep
//! their stated ranges directly. The nodal plane family is the `l = 2m`
//! one-parameter family: `l + 4m = d^2` and `l = 2m` force `m = d^2/6`, so
//! only degrees divisible by 6 produce integral rows.

use serde::{Deserialize, Serialize};

use crate::pencil::{relative_minimality_check, validate_pencil, MinimalityVerdict, PencilSpec};

pub const MAX_DEGREE: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchFamily {
    /// Nodal plane pencils on the `l = 2m` line: `m = d^2 / 6`.
    PlaneNodal,
    /// Nodal pencils of bidegree `(alpha, beta)` curves with `l = 2ab - 4m`.
    F0Nodal,
    /// Smooth plane pencils: `m = 0`, `l = d^2`.
    PlaneSmooth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchConstraint {
    /// `l + 4m` equals the base self-intersection with `l >= 0`.
    Balance,
    /// The linear system is big enough to contain a pencil.
    Mobility,
    /// The relative-minimality certificate comes back `Certified`.
    RelMin,
    /// `4l + l' + m <= 6b`, the sufficient condition for `6b <= a`.
    FourLPlusMLeSixB,
    /// `a = 6b` exactly.
    EqualityAEqSixB,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusiveRange {
    pub min: u32,
    pub max: u32,
}

impl InclusiveRange {
    pub fn new(min: u32, max: u32) -> InclusiveRange {
        InclusiveRange { min, max }
    }

    fn iter(self) -> impl Iterator<Item = u32> {
        self.min..=self.max
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRequest {
    pub family: SearchFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<InclusiveRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<InclusiveRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<InclusiveRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<InclusiveRange>,
    pub constraints: Vec<SearchConstraint>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("{what} range is required for this family")]
    MissingRange { what: &'static str },
    #[error("{what} range {min}..{max} is empty")]
    EmptyRange { what: &'static str, min: u32, max: u32 },
    #[error("{what} range exceeds the desk-scale bound {bound}")]
    RangeTooLarge { what: &'static str, bound: u32 },
}

/// One qualifying parameter tuple with its invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<u32>,
    pub g: i64,
    pub a: i64,
    pub b: i64,
    pub l: i64,
    pub m: i64,
    pub margin: i64,
}

fn checked_range(
    what: &'static str,
    range: Option<InclusiveRange>,
    bound: u32,
) -> Result<InclusiveRange, SearchError> {
    let range = range.ok_or(SearchError::MissingRange { what })?;
    if range.min > range.max {
        return Err(SearchError::EmptyRange {
            what,
            min: range.min,
            max: range.max,
        });
    }
    if range.max > bound {
        return Err(SearchError::RangeTooLarge { what, bound });
    }
    Ok(range)
}

fn passes(spec: &PencilSpec, row: &SearchRow, constraints: &[SearchConstraint]) -> bool {
    for c in constraints {
        let ok = match c {
            SearchConstraint::Balance => {
                row.l >= 0 && row.l + 4 * row.m == spec.family.base_self_intersection()
            }
            SearchConstraint::Mobility | SearchConstraint::RelMin => {
                match validate_pencil(spec.clone()) {
                    Ok(validated) => {
                        *c != SearchConstraint::RelMin
                            || relative_minimality_check(&validated).verdict
                                == MinimalityVerdict::Certified
                    }
                    Err(_) => false,
                }
            }
            SearchConstraint::FourLPlusMLeSixB => 4 * row.l + row.m <= 6 * row.b,
            SearchConstraint::EqualityAEqSixB => row.margin == 0,
        };
        if !ok {
            return false;
        }
    }
    true
}

fn plane_row(d: u32, l: i64, m: i64) -> SearchRow {
    let dd = d as i64;
    let b = dd * (dd - 3) / 2 - m;
    let a = 3 * dd * dd - 12 * dd + 9 - 5 * m;
    SearchRow {
        d: Some(d),
        alpha: None,
        beta: None,
        g: b + 1,
        a,
        b,
        l,
        m,
        margin: a - 6 * b,
    }
}

fn quadric_row(alpha: u32, beta: u32, l: i64, m: i64) -> SearchRow {
    let (av, bv) = (alpha as i64, beta as i64);
    let b = av * bv - av - bv - m;
    let a = 8 * (av - 1) * (bv - 1) - l - 9 * m;
    SearchRow {
        d: None,
        alpha: Some(alpha),
        beta: Some(beta),
        g: b + 1,
        a,
        b,
        l,
        m,
        margin: a - 6 * b,
    }
}

/// Enumerates the family over the request ranges, applies the constraint
/// set, and returns qualifying rows in lexicographic parameter order.
pub fn run_search(request: &SearchRequest) -> Result<Vec<SearchRow>, SearchError> {
    let mut rows = Vec::new();
    match request.family {
        SearchFamily::PlaneSmooth => {
            let degrees = checked_range("degree", request.degree, MAX_DEGREE)?;
            for d in degrees.iter() {
                let spec = PencilSpec::smooth_plane(d);
                let row = plane_row(d, (d as i64) * (d as i64), 0);
                if passes(&spec, &row, &request.constraints) {
                    rows.push(row);
                }
            }
        }
        SearchFamily::PlaneNodal => {
            let degrees = checked_range("degree", request.degree, MAX_DEGREE)?;
            for d in degrees.iter() {
                let dd = (d as i64) * (d as i64);
                if dd % 6 != 0 {
                    continue;
                }
                let m = dd / 6;
                if let Some(nodes) = request.nodes {
                    if m < nodes.min as i64 || m > nodes.max as i64 {
                        continue;
                    }
                }
                let l = 2 * m;
                let spec = PencilSpec::plane(d, l as u64, m as u64);
                let row = plane_row(d, l, m);
                if passes(&spec, &row, &request.constraints) {
                    rows.push(row);
                }
            }
        }
        SearchFamily::F0Nodal => {
            let alphas = checked_range("alpha", request.alpha, MAX_DEGREE)?;
            let betas = checked_range("beta", request.beta, MAX_DEGREE)?;
            let nodes = checked_range("nodes", request.nodes, u32::MAX)?;
            for alpha in alphas.iter() {
                for beta in betas.iter() {
                    for m in nodes.iter() {
                        let l = 2 * (alpha as i64) * (beta as i64) - 4 * (m as i64);
                        if l < 0 {
                            continue;
                        }
                        let spec =
                            PencilSpec::ruled_quadric(alpha, beta, l as u64, m as u64);
                        let row = quadric_row(alpha, beta, l, m as i64);
                        if passes(&spec, &row, &request.constraints) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_constraints() -> Vec<SearchConstraint> {
        vec![
            SearchConstraint::Balance,
            SearchConstraint::Mobility,
            SearchConstraint::RelMin,
            SearchConstraint::FourLPlusMLeSixB,
        ]
    }

    #[test]
    fn quadric_sweep_reproduces_the_nodal_window() {
        let request = SearchRequest {
            family: SearchFamily::F0Nodal,
            degree: None,
            alpha: Some(InclusiveRange::new(8, 8)),
            beta: Some(InclusiveRange::new(8, 8)),
            nodes: Some(InclusiveRange::new(20, 30)),
            constraints: all_constraints(),
        };
        let rows = run_search(&request).unwrap();
        let ms: Vec<i64> = rows.iter().map(|r| r.m).collect();
        assert_eq!(ms, vec![25, 26]);
        // The m = 26 row is the genus-23 fibration.
        assert_eq!(rows[1].g, 23);
        assert_eq!(rows[1].a, 134);
        assert_eq!(rows[1].margin, 2);
    }

    #[test]
    fn plane_sweep_reproduces_the_degree_threshold() {
        let request = SearchRequest {
            family: SearchFamily::PlaneNodal,
            degree: Some(InclusiveRange::new(12, 24)),
            alpha: None,
            beta: None,
            nodes: None,
            constraints: vec![SearchConstraint::FourLPlusMLeSixB],
        };
        let rows = run_search(&request).unwrap();
        let ds: Vec<u32> = rows.iter().map(|r| r.d.unwrap()).collect();
        assert_eq!(ds, vec![18, 24]);
        assert_eq!(rows[0].g, 82);
        assert_eq!(rows[0].a, 495);
    }

    #[test]
    fn equality_search_finds_the_balanced_node_count() {
        let request = SearchRequest {
            family: SearchFamily::F0Nodal,
            degree: None,
            alpha: Some(InclusiveRange::new(8, 8)),
            beta: Some(InclusiveRange::new(8, 8)),
            nodes: Some(InclusiveRange::new(0, 32)),
            constraints: vec![SearchConstraint::Balance, SearchConstraint::EqualityAEqSixB],
        };
        let rows = run_search(&request).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].m, 24); // 2a + 2b = m + 8
        assert_eq!(rows[0].g, 25);
        assert_eq!(rows[0].margin, 0);
    }

    #[test]
    fn smooth_sweep_margin_is_linear_in_degree() {
        let request = SearchRequest {
            family: SearchFamily::PlaneSmooth,
            degree: Some(InclusiveRange::new(4, 20)),
            alpha: None,
            beta: None,
            nodes: None,
            constraints: vec![SearchConstraint::Balance, SearchConstraint::Mobility],
        };
        let rows = run_search(&request).unwrap();
        assert_eq!(rows.len(), 17);
        for row in rows {
            let d = row.d.unwrap() as i64;
            assert_eq!(row.margin, 9 - 3 * d);
            assert_eq!(row.l, d * d);
        }
    }

    #[test]
    fn ranges_are_bounded() {
        let request = SearchRequest {
            family: SearchFamily::PlaneSmooth,
            degree: Some(InclusiveRange::new(4, 100)),
            alpha: None,
            beta: None,
            nodes: None,
            constraints: vec![],
        };
        assert_eq!(
            run_search(&request),
            Err(SearchError::RangeTooLarge {
                what: "degree",
                bound: 64
            })
        );

        let request = SearchRequest {
            family: SearchFamily::F0Nodal,
            degree: None,
            alpha: Some(InclusiveRange::new(8, 8)),
            beta: None,
            nodes: Some(InclusiveRange::new(0, 10)),
            constraints: vec![],
        };
        assert_eq!(
            run_search(&request),
            Err(SearchError::MissingRange { what: "beta" })
        );
    }
}
