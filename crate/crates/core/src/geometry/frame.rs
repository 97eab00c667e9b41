//! Small dense linear-algebra helpers expressed relative to a metric.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub fn from_row_major(n: usize, data: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(n, n, data)
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

pub fn require_spd(g: &DMatrix<f64>) -> Result<()> {
    let lam = min_eigenvalue(g);
    if !(lam > 1e-10) {
        return Err(Error::SingularMetric { min_eigenvalue: lam });
    }
    Ok(())
}

/// Gram-Schmidt of the coordinate frame; columns of the result are
/// g-orthonormal.
pub fn orthonormal_frame(g: &DMatrix<f64>) -> DMatrix<f64> {
    let n = g.nrows();
    let mut e = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let mut v = DVector::<f64>::zeros(n);
        v[k] = 1.0;
        for j in 0..k {
            let ej = e.column(j).into_owned();
            let proj = inner(g, &v, &ej);
            v -= ej * proj;
        }
        let norm = inner(g, &v, &v).sqrt();
        e.set_column(k, &(v / norm));
    }
    e
}

pub fn inner(g: &DMatrix<f64>, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a.transpose() * g * b)[(0, 0)]
}

pub fn vec_norm(g: &DMatrix<f64>, v: &DVector<f64>) -> f64 {
    inner(g, v, v).max(0.0).sqrt()
}

pub fn covec_norm(ginv: &DMatrix<f64>, w: &DVector<f64>) -> f64 {
    inner(ginv, w, w).max(0.0).sqrt()
}

/// Matrix of an endomorphism in a g-orthonormal frame `e`.
pub fn in_frame(g: &DMatrix<f64>, e: &DMatrix<f64>, endo: &DMatrix<f64>) -> DMatrix<f64> {
    e.transpose() * g * endo * e
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.iter().cloned().fold(0.0, f64::max)
}

/// Operator norm of an endomorphism measured with the metric.
pub fn endo_norm(g: &DMatrix<f64>, endo: &DMatrix<f64>) -> f64 {
    let e = orthonormal_frame(g);
    spectral_norm(&in_frame(g, &e, endo))
}

/// Eigenvalues of a g-self-adjoint endomorphism, sorted by decreasing absolute value.
pub fn endo_eigenvalues(g: &DMatrix<f64>, endo: &DMatrix<f64>) -> Vec<f64> {
    let e = orthonormal_frame(g);
    let m = in_frame(g, &e, endo);
    let sym = (&m + m.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().cloned().collect();
    ev.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap().then(b.partial_cmp(a).unwrap()));
    ev
}

/// Raise the first index of a (0,2) form: `g^{-1} B`.
pub fn raise(ginv: &DMatrix<f64>, form: &DMatrix<f64>) -> DMatrix<f64> {
    ginv * form
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn frame_is_orthonormal() {
        let g = DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 0.8]);
        let e = orthonormal_frame(&g);
        let id = e.transpose() * &g * &e;
        assert_relative_eq!(id, DMatrix::identity(3, 3), epsilon = 1e-13);
    }

    #[test]
    fn endo_norm_is_metric_invariant() {
        // Identity endomorphism has norm 1 for any metric.
        let g = DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 3.0]);
        assert_relative_eq!(endo_norm(&g, &DMatrix::identity(2, 2)), 1.0, epsilon = 1e-14);
    }
}
