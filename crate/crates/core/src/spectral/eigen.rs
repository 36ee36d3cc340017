//! Lowest eigenpairs of the discrete form by block preconditioned conjugate
//! gradients (LOBPCG) with Rayleigh–Ritz on `[X, W, P]`.
//!
//! The preconditioner is an exact sparse Cholesky solve with the operator itself.
//! The operator couples the x3 direction through `x²/h3²` terms while its diagonal
//! is nearly constant, so Jacobi scaling does not reduce the iteration count.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

use super::SparseForm;

/// Problems up to this size are solved with a dense symmetric eigensolver.
const DENSE_LIMIT: usize = 600;
const MAX_ITERATIONS: usize = 500;
const START_SEED: u64 = 0x5eed;

/// Eigenvalues in ascending order with the residual norm of each eigenpair.
#[derive(Debug, Clone)]
pub(crate) struct Eigenpairs {
    pub values: Vec<f64>,
    pub residuals: Vec<f64>,
}

fn scaled_triplets(form: &SparseForm, lower_only: bool) -> Vec<Triplet<usize, usize, f64>> {
    let scale = 1.0 / form.cell_volume();
    form.entries().filter(|&(i, j, _)| !lower_only || i >= j).map(|(i, j, v)| Triplet::new(i, j, v * scale)).collect()
}

fn sparse(n: usize, triplets: &[Triplet<usize, usize, f64>]) -> Result<SparseColMat<usize, f64>> {
    SparseColMat::try_new_from_triplets(n, n, triplets).map_err(|e| Error::NumericalFailure {
        message: format!("could not build sparse operator: {e:?}"),
        residual: f64::NAN,
    })
}

fn sym_eigen(h: &Mat<f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let k = h.nrows();
    let sym = Mat::from_fn(k, k, |i, j| 0.5 * (h[(i, j)] + h[(j, i)]));
    let evd = sym.self_adjoint_eigen(Side::Lower).map_err(|e| Error::NumericalFailure {
        message: format!("dense eigensolver failed: {e:?}"),
        residual: f64::NAN,
    })?;
    let s = evd.S().column_vector();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
    let values = order.iter().map(|&i| s[i]).collect();
    let u = evd.U();
    Ok((values, Mat::from_fn(k, k, |i, j| u[(i, order[j])])))
}

/// Removes the components of `z` along the orthonormal columns of `x`.
fn project_out(x: &Mat<f64>, z: &mut Mat<f64>) {
    if x.ncols() == 0 || z.ncols() == 0 {
        return;
    }
    let c = x.transpose() * &*z;
    *z -= x * &c;
}

/// Orthonormal basis of the column span of `z`, dropping numerically dependent
/// directions (SVQB applied twice).
fn orthonormalize(z: Mat<f64>) -> Result<Mat<f64>> {
    let mut z = z;
    for _ in 0..2 {
        let n = z.nrows();
        let keep: Vec<usize> = (0..z.ncols()).filter(|&j| z.col(j).norm_l2() > 0.0).collect();
        let norms: Vec<f64> = keep.iter().map(|&j| z.col(j).norm_l2()).collect();
        let y = Mat::from_fn(n, keep.len(), |i, j| z[(i, keep[j])] / norms[j]);
        if y.ncols() == 0 {
            return Ok(y);
        }
        let g = y.transpose() * &y;
        let (d, v) = sym_eigen(&g)?;
        let dmax = d.last().copied().unwrap_or(0.0);
        let cols: Vec<usize> = (0..d.len()).filter(|&j| d[j] > 1e-13 * dmax).collect();
        let t = Mat::from_fn(v.nrows(), cols.len(), |i, j| v[(i, cols[j])] / d[cols[j]].sqrt());
        z = &y * &t;
    }
    Ok(z)
}

fn columns(m: &Mat<f64>, cols: std::ops::Range<usize>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), cols.len(), |i, j| m[(i, cols.start + j)])
}

fn hstack(blocks: &[&Mat<f64>]) -> Mat<f64> {
    let n = blocks[0].nrows();
    let total: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(n, total);
    let mut at = 0;
    for b in blocks {
        for j in 0..b.ncols() {
            out.col_mut(at + j).copy_from(b.col(j));
        }
        at += b.ncols();
    }
    out
}

fn residual_norms(kx: &Mat<f64>, x: &Mat<f64>, values: &[f64]) -> (Mat<f64>, Vec<f64>) {
    let r = Mat::from_fn(x.nrows(), x.ncols(), |i, j| kx[(i, j)] - values[j] * x[(i, j)]);
    let norms = (0..x.ncols()).map(|j| r.col(j).norm_l2() / x.col(j).norm_l2()).collect();
    (r, norms)
}

fn dense_eigenpairs(form: &SparseForm, m: usize) -> Result<Eigenpairs> {
    let n = form.dimension();
    let k = sparse(n, &scaled_triplets(form, false))?.to_dense();
    let (values, vectors) = sym_eigen(&k)?;
    let x = columns(&vectors, 0..m);
    let kx = &k * &x;
    let (_, residuals) = residual_norms(&kx, &x, &values[..m]);
    Ok(Eigenpairs { values: values[..m].to_vec(), residuals })
}

/// The `m` smallest eigenvalues of `A v = λ h1h2h3 v`, each with residual
/// `‖K v − λ v‖/‖v‖ ≤ tol` where `K = A/(h1h2h3)`.
pub(crate) fn lowest_eigenpairs(form: &SparseForm, m: usize, tol: f64) -> Result<Eigenpairs> {
    let n = form.dimension();
    if m == 0 || 4 * m > n {
        return invalid(format!("need 1 ≤ m ≤ dimension/4 = {}, got m = {m}", n / 4));
    }
    if !(tol > 0.0) {
        return invalid(format!("tolerance must be positive, got {tol}"));
    }
    let block = (m + (m / 4).max(4)).min(n / 3);
    if n <= DENSE_LIMIT || 3 * block >= n {
        return dense_eigenpairs(form, m);
    }

    let k = sparse(n, &scaled_triplets(form, false))?;
    let llt = sparse(n, &scaled_triplets(form, true))?.sp_cholesky(Side::Lower).map_err(|e| {
        Error::NumericalFailure { message: format!("Cholesky factorization failed: {e:?}"), residual: f64::NAN }
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let start = Mat::from_fn(n, block, |_, _| rng.gen_range(-1.0..1.0));
    let rayleigh_ritz = |s: &Mat<f64>, width: usize| -> Result<(Mat<f64>, Mat<f64>, Vec<f64>)> {
        let ks = &k * s;
        let h = s.transpose() * &ks;
        let (theta, c) = sym_eigen(&h)?;
        let c = columns(&c, 0..width.min(s.ncols()));
        Ok((s * &c, &ks * &c, theta[..c.ncols()].to_vec()))
    };

    let (mut x, mut kx, mut values) = rayleigh_ritz(&orthonormalize(start)?, block)?;
    let mut p: Option<Mat<f64>> = None;
    let mut residuals = Vec::new();
    for _ in 0..MAX_ITERATIONS {
        let (r, norms) = residual_norms(&kx, &x, &values);
        residuals = norms;
        if residuals[..m].iter().all(|&r| r <= tol) {
            return Ok(Eigenpairs { values: values[..m].to_vec(), residuals: residuals[..m].to_vec() });
        }
        let mut w = r;
        llt.solve_in_place(w.as_mut());
        let mut z = match &p {
            Some(p) => hstack(&[&w, p]),
            None => w,
        };
        project_out(&x, &mut z);
        project_out(&x, &mut z);
        let mut z = orthonormalize(z)?;
        project_out(&x, &mut z);
        let z = orthonormalize(z)?;
        let s = hstack(&[&x, &z]);
        let (x_new, kx_new, values_new) = rayleigh_ritz(&s, block)?;
        // the next search direction is the part of the update orthogonal to X
        let mut p_new = x_new.clone();
        project_out(&x, &mut p_new);
        p = Some(p_new);
        x = x_new;
        kx = kx_new;
        values = values_new;
    }
    let converged = residuals[..m].iter().take_while(|&&r| r <= tol).count();
    Err(Error::NumericalFailure {
        message: format!("eigensolver converged {converged} of {m} eigenpairs in {MAX_ITERATIONS} iterations"),
        residual: residuals[..m].iter().copied().fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{voxelize, DomainSpec};
    use crate::GroupPoint;

    #[test]
    fn block_solver_agrees_with_dense_solver() {
        let spec = DomainSpec::cc_ball(GroupPoint::new(0.1, 0.2, 0.0), 1.0);
        let form = SparseForm::assemble(&voxelize(&spec, 14).unwrap()).unwrap();
        assert!(form.dimension() > DENSE_LIMIT);
        let fast = lowest_eigenpairs(&form, 8, 1e-9).unwrap();
        let dense = dense_eigenpairs(&form, 8).unwrap();
        for (a, b) in fast.values.iter().zip(&dense.values) {
            assert!((a - b).abs() < 1e-8 * b, "{a} vs {b}");
        }
        assert!(fast.residuals.iter().all(|&r| r <= 1e-9));
        assert!(fast.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_too_many_eigenvalues() {
        let form = SparseForm::assemble(&voxelize(&DomainSpec::unit_box(), 8).unwrap()).unwrap();
        assert!(lowest_eigenpairs(&form, 129, 1e-8).is_err());
        assert!(lowest_eigenpairs(&form, 0, 1e-8).is_err());
        assert!(lowest_eigenpairs(&form, 4, 0.0).is_err());
        assert!(lowest_eigenpairs(&form, 128, 1e-8).is_ok());
    }
}
