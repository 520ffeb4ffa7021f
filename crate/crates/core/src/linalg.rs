//! Dense linear algebra helpers shared across the engine. Module data is
//! real throughout (the representation constructions produce real matrices);
//! complex wrappers appear where user-facing vectors may be complex.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;
pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_real(m: &RMat) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Kronecker product acting on column vectors stacked so that the FIRST
/// factor owns the slow index: (a kron b)[(i*rows_b + k), (j*cols_b + l)].
pub fn kron_real(a: &RMat, b: &RMat) -> RMat {
    a.kronecker(b)
}

pub fn kron_complex(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_vec_complex(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for k in 0..b.len() {
            out[i * b.len() + k] = a[i] * b[k];
        }
    }
    out
}

/// Orthonormal basis of the null space of a real matrix, columns of the
/// result; tolerance is relative to the largest singular value.
pub fn nullspace_real(m: &RMat, rel_tol: f64) -> RMat {
    let ncols = m.ncols();
    if m.nrows() == 0 {
        return RMat::identity(ncols, ncols);
    }
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("svd requested v_t");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tol = if smax > 0.0 { rel_tol * smax } else { rel_tol };
    let mut cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= tol)
        .collect();
    // rows of vt beyond the singular value list are exact null directions
    cols.extend(svd.singular_values.len()..vt.nrows());
    let mut out = RMat::zeros(ncols, cols.len());
    for (j, &i) in cols.iter().enumerate() {
        for c in 0..ncols {
            out[(c, j)] = vt[(i, c)];
        }
    }
    out
}

/// Least squares solve min |m x - rhs| via SVD. Returns the solution together
/// with the smallest/largest singular values so callers can detect rank
/// deficiency (non-unique solutions).
pub fn lsq_real(m: &RMat, rhs: &RVec) -> (RVec, f64, f64) {
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let smin = svd.singular_values.iter().cloned().fold(f64::MAX, f64::min);
    let sol = svd.solve(rhs, smax * 1e-13).expect("svd solve");
    (sol, smin, smax)
}

/// Eigendecomposition of a real symmetric matrix; returns (eigenvalues,
/// eigenvectors as columns), eigenvalues descending.
pub fn sym_eigen(m: &RMat) -> (Vec<f64>, RMat) {
    let se = m.clone().symmetric_eigen();
    let mut idx: Vec<usize> = (0..se.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).unwrap());
    let vals: Vec<f64> = idx.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = RMat::zeros(m.nrows(), m.ncols());
    for (j, &i) in idx.iter().enumerate() {
        vecs.set_column(j, &se.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Gram-Schmidt a set of complex vectors against an existing orthonormal set,
/// returning the component count kept (those with residual norm above tol).
pub fn extend_orthonormal(basis: &mut Vec<CVec>, candidate: &CVec, tol: f64) -> bool {
    let mut v = candidate.clone();
    for b in basis.iter() {
        let c = b.dotc(&v);
        v -= b * c;
    }
    // second pass for numerical stability
    for b in basis.iter() {
        let c = b.dotc(&v);
        v -= b * c;
    }
    let n = v.norm();
    if n > tol {
        basis.push(v / Complex64::new(n, 0.0));
        true
    } else {
        false
    }
}

pub fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_rank_one_projector() {
        let m = RMat::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let ns = nullspace_real(&m, 1e-12);
        assert_eq!(ns.ncols(), 1);
        let img = &m * ns.column(0);
        assert!(img.norm() < 1e-12);
    }

    #[test]
    fn lsq_detects_rank() {
        let m = RMat::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let rhs = RVec::from_vec(vec![1.0, 2.0, 3.0]);
        let (x, smin, _) = lsq_real(&m, &rhs);
        assert!(smin > 0.5);
        assert!((&m * &x - &rhs).norm() < 1.0);
    }

    #[test]
    fn kron_ordering_first_factor_slow() {
        let a = RMat::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let b = RMat::identity(3, 3);
        let k = kron_real(&a, &b);
        assert_eq!(k[(0, 3)], 1.0);
        assert_eq!(k[(1, 4)], 1.0);
    }
}
