//! Dense symmetric spectral toolkit: sorted spectra, the operator/Frobenius
//! norm pair, Weyl's perturbation bound, and deterministic summation.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest absolute entry asymmetry `max |A_ij - A_ji|`.
pub fn symmetry_residual(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst
}

fn require_symmetric(a: &DMatrix<f64>, tol: f64, what: &str) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::Domain(format!(
            "{what}: matrix is {}x{}, not square",
            a.nrows(),
            a.ncols()
        )));
    }
    let scale = a.amax().max(1.0);
    let res = symmetry_residual(a);
    if res > tol * scale {
        return Err(Error::Domain(format!(
            "{what}: asymmetry {res:.3e} exceeds tolerance {tol:.1e}"
        )));
    }
    Ok(())
}

/// Eigenvalues of a symmetric matrix, sorted ascending.
///
/// The input is symmetrized (`(A + A^T)/2`) before decomposition so that
/// roundoff-level asymmetry cannot leak into the solver.
pub fn sorted_eigenvalues(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    require_symmetric(a, 1e-10, "sorted_eigenvalues")?;
    if a.nrows() == 0 {
        return Ok(vec![]);
    }
    let sym = (a + a.transpose()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_unstable_by(|x, y| x.partial_cmp(y).expect("symmetric eigenvalues are finite"));
    Ok(vals)
}

/// Operator norm `sup_{|x|=1} |<x, Ax>|` of a symmetric matrix, i.e. the
/// largest eigenvalue magnitude.
pub fn operator_norm(a: &DMatrix<f64>) -> Result<f64> {
    let vals = sorted_eigenvalues(a)?;
    Ok(vals
        .first()
        .map(|lo| lo.abs().max(vals.last().unwrap().abs()))
        .unwrap_or(0.0))
}

/// Frobenius norm from the entries.
pub fn frobenius_norm(a: &DMatrix<f64>) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Outcome of a Weyl perturbation comparison.
#[derive(Debug, Clone, Copy)]
pub struct WeylGap {
    /// `max_j |lambda_j(A) - lambda_j(B)|` over ascending spectra.
    pub max_gap: f64,
    /// Operator norm of `A - B`.
    pub bound: f64,
    pub holds: bool,
}

/// Checks Weyl's perturbation theorem on a concrete pair: sorted eigenvalues
/// of symmetric matrices are 1-Lipschitz in the operator norm.
pub fn weyl_gap(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<WeylGap> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::Domain(format!(
            "weyl_gap: shape mismatch {}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    require_symmetric(a, 1e-10, "weyl_gap lhs")?;
    require_symmetric(b, 1e-10, "weyl_gap rhs")?;
    let va = sorted_eigenvalues(a)?;
    let vb = sorted_eigenvalues(b)?;
    let max_gap = va
        .iter()
        .zip(&vb)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    let bound = operator_norm(&(a - b))?;
    Ok(WeylGap {
        max_gap,
        bound,
        holds: max_gap <= bound + 1e-10,
    })
}

/// Outcome of the norm sandwich `||A|| <= ||A||_2 <= sqrt(n) ||A||`.
#[derive(Debug, Clone, Copy)]
pub struct NormSandwich {
    pub op: f64,
    pub frob: f64,
    pub holds: bool,
}

/// Verifies the operator/Frobenius norm sandwich on a symmetric matrix.
pub fn norm_sandwich_check(a: &DMatrix<f64>) -> Result<NormSandwich> {
    require_symmetric(a, 1e-10, "norm_sandwich_check")?;
    let op = operator_norm(a)?;
    let frob = frobenius_norm(a);
    let n = a.nrows() as f64;
    let holds = op <= frob + 1e-12 && frob <= n.sqrt() * op + 1e-12;
    Ok(NormSandwich { op, frob, holds })
}

/// Pairwise (cascade) summation: deterministic for a fixed input order and
/// accurate to O(log n) rounding growth.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}
