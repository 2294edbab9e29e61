//! Exact rational linear algebra for small symmetric systems.
//!
//! The Zariski solver needs two things from a Gram matrix: a certificate
//! that it is negative definite, and the exact solution of `G x = rhs`.
//! Both come out of one pass of symmetric Gaussian elimination without
//! pivoting (LDL^T): for a symmetric matrix that factors this way, the
//! leading principal minors are the prefix products of the pivots, and the
//! matrix is negative definite iff every pivot is negative. A zero pivot
//! on the way means the matrix is not definite of either sign.

use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationFailure {
    /// Pivots obtained before the failure, in order.
    pub pivots: Vec<Rat>,
    /// Index of the first zero or non-negative pivot.
    pub index: usize,
}

/// Outcome of eliminating a symmetric matrix augmented with one right-hand side.
#[derive(Debug, Clone)]
pub struct NegativeDefiniteSolve {
    pub solution: Vec<Rat>,
    /// Leading principal minors `det(G_k)`, `k = 1..n`: prefix products of pivots.
    pub leading_minors: Vec<Rat>,
}

/// Solves `G x = rhs` for a symmetric `G` that is expected to be negative
/// definite, certifying definiteness along the way.
#[allow(clippy::needless_range_loop)] // index form mirrors the matrix arithmetic
pub fn solve_negative_definite(
    gram: &[Vec<Rat>],
    rhs: &[Rat],
) -> Result<NegativeDefiniteSolve, EliminationFailure> {
    let n = gram.len();
    assert_eq!(rhs.len(), n, "rhs length must match matrix size");
    for row in gram {
        assert_eq!(row.len(), n, "matrix must be square");
    }

    let mut m: Vec<Vec<Rat>> = gram.to_vec();
    let mut b: Vec<Rat> = rhs.to_vec();
    let mut pivots = Vec::with_capacity(n);

    for k in 0..n {
        let pivot = m[k][k].clone();
        if !pivot.is_negative() {
            return Err(EliminationFailure { pivots, index: k });
        }
        for i in (k + 1)..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] / &pivot;
            for j in k..n {
                if m[k][j].is_zero() {
                    continue;
                }
                let delta = &factor * &m[k][j];
                m[i][j] -= &delta;
            }
            let delta = &factor * &b[k];
            b[i] -= &delta;
        }
        pivots.push(pivot);
    }

    // Back substitution on the upper-triangular system.
    let mut x = vec![Rat::zero(); n];
    for k in (0..n).rev() {
        let mut acc = b[k].clone();
        for j in (k + 1)..n {
            if m[k][j].is_zero() {
                continue;
            }
            acc -= &(&m[k][j] * &x[j]);
        }
        x[k] = acc / pivots[k].clone();
    }

    let mut leading_minors = Vec::with_capacity(n);
    let mut acc = Rat::one();
    for p in &pivots {
        acc = acc * p;
        leading_minors.push(acc.clone());
    }

    Ok(NegativeDefiniteSolve {
        solution: x,
        leading_minors,
    })
}

/// Leading principal minors of a symmetric negative definite matrix.
pub fn negative_definite_minors(gram: &[Vec<Rat>]) -> Result<Vec<Rat>, EliminationFailure> {
    let rhs = vec![Rat::zero(); gram.len()];
    solve_negative_definite(gram, &rhs).map(|s| s.leading_minors)
}

/// Checks the alternation pattern of leading minors of a negative definite
/// form: `(-1)^k det(G_k) > 0`, i.e. signs `-,+,-,+,...`.
pub fn minors_alternate(minors: &[Rat]) -> bool {
    minors
        .iter()
        .enumerate()
        .all(|(i, m)| if i % 2 == 0 { m.is_negative() } else { m.is_positive() })
}
