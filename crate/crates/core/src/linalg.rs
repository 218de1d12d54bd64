//! Small shared numerical helpers: norms, ranks, null spaces and least
//! squares over complex matrices.

use crate::{C64, CMatrix, CVector};

/// Largest absolute value of the entries of a complex vector.
pub fn vec_inf_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest absolute value of the entries of a complex matrix.
pub fn mat_inf_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values of a complex matrix, sorted descending.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Largest singular value (0 for an empty matrix).
pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Number of singular values strictly above `threshold`.
pub fn rank_with_threshold(m: &CMatrix, threshold: f64) -> usize {
    singular_values(m).iter().filter(|s| **s > threshold).count()
}

/// Orthonormal basis of the (right) null space of `m`, using singular
/// vectors whose singular values are `<= threshold`. Columns of the result
/// span `{ x : m x ≈ 0 }`.
pub fn nullspace_with_threshold(m: &CMatrix, threshold: f64) -> CMatrix {
    let ncols = m.ncols();
    if m.nrows() == 0 || ncols == 0 {
        return CMatrix::identity(ncols, ncols);
    }
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("SVD was computed with V^T");
    let sv = &svd.singular_values;
    let mut cols: Vec<CVector> = Vec::new();
    for i in 0..ncols {
        let s = if i < sv.len() { sv[i] } else { 0.0 };
        if s <= threshold {
            // Row i of V^T is the conjugate of the i-th right singular vector.
            let row = vt.row(i);
            let col = CVector::from_iterator(ncols, row.iter().map(|z| z.conj()));
            cols.push(col);
        }
    }
    if cols.is_empty() {
        CMatrix::zeros(ncols, 0)
    } else {
        CMatrix::from_columns(&cols)
    }
}

/// Minimum-norm least-squares solution of `a x = b` via the SVD
/// pseudo-inverse, discarding singular values `<= threshold`.
pub fn lstsq(a: &CMatrix, b: &CVector, threshold: f64) -> CVector {
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().expect("SVD was computed with U");
    let vt = svd.v_t.as_ref().expect("SVD was computed with V^T");
    let sv = &svd.singular_values;
    let mut y = CVector::zeros(vt.nrows());
    for i in 0..sv.len() {
        if sv[i] > threshold {
            let ui = u.column(i);
            let proj: C64 = ui.iter().zip(b.iter()).map(|(u, b)| u.conj() * b).sum();
            y[i] = proj / C64::new(sv[i], 0.0);
        }
    }
    vt.adjoint() * y
}

/// Kronecker product of two complex matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of two complex column vectors.
pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i * b.len() + j] = ai * bj;
        }
    }
    out
}

/// Hermitian inner product `<a, b> = sum conj(a_i) b_i`.
pub fn hdot(a: &CVector, b: &CVector) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn complex_svd_recovers_rank_and_nullspace() {
        // 3x3 complex matrix of rank 2: third column = i*(first) - 2*(second).
        let c1 = [c(1.0, 0.5), c(0.0, -1.0), c(2.0, 0.0)];
        let c2 = [c(0.5, 0.0), c(1.0, 1.0), c(-1.0, 0.5)];
        let mut m = CMatrix::zeros(3, 3);
        for r in 0..3 {
            m[(r, 0)] = c1[r];
            m[(r, 1)] = c2[r];
            m[(r, 2)] = c(0.0, 1.0) * c1[r] - c(2.0, 0.0) * c2[r];
        }
        let sv = singular_values(&m);
        assert_eq!(sv.len(), 3);
        assert!(sv[2] < 1e-12 * sv[0]);
        assert_eq!(rank_with_threshold(&m, 1e-8 * sv[0]), 2);

        let ns = nullspace_with_threshold(&m, 1e-8 * sv[0]);
        assert_eq!(ns.ncols(), 1);
        let residual = &m * ns.column(0);
        assert!(residual.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
        // Null vector is unit length.
        let len: f64 = ns.column(0).iter().map(|z| z.norm_sqr()).sum();
        assert!((len - 1.0).abs() < 1e-12);
    }

    #[test]
    fn least_squares_solves_consistent_system() {
        let m = CMatrix::from_row_slice(
            3,
            2,
            &[c(2.0, 0.0), c(0.0, 1.0), c(1.0, -1.0), c(3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        );
        let x_true = CVector::from_vec(vec![c(1.0, 2.0), c(-0.5, 0.0)]);
        let b = &m * &x_true;
        let x = lstsq(&m, &b, 1e-12);
        assert!(vec_inf_norm(&(x - x_true)) < 1e-12);
    }

    #[test]
    fn kron_vec_matches_matrix_kronecker() {
        let a = CVector::from_vec(vec![c(1.0, 1.0), c(2.0, 0.0)]);
        let b = CVector::from_vec(vec![c(0.0, 1.0), c(3.0, -1.0), c(1.0, 0.0)]);
        let kv = kron_vec(&a, &b);
        let ma = CMatrix::from_column_slice(2, 1, a.as_slice());
        let mb = CMatrix::from_column_slice(3, 1, b.as_slice());
        let km = kron(&ma, &mb);
        for i in 0..6 {
            assert!((kv[i] - km[(i, 0)]).norm() < 1e-14);
        }
    }

    #[test]
    fn rank_of_tall_zero_matrix_is_zero() {
        let m = CMatrix::zeros(40, 7);
        assert_eq!(rank_with_threshold(&m, 1e-8), 0);
        assert_eq!(nullspace_with_threshold(&m, 1e-8).ncols(), 7);
    }
}
