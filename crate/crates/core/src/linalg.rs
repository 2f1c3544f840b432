//! Small dense helpers shared by the eigensolver and the propagator.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

/// Eigen-decomposition of a Hermitian matrix, ascending eigenvalues.
pub(crate) fn hermitian_eigen(m: DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal
/// `alpha` and off-diagonal `beta`, ascending eigenvalues.
pub(crate) fn tridiagonal_eigen(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(k, k, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `y -= c * x`.
pub(crate) fn axpy_neg(y: &mut [C64], c: C64, x: &[C64]) {
    y.iter_mut().zip(x).for_each(|(a, b)| *a -= c * b);
}

pub(crate) fn scale(y: &mut [C64], c: f64) {
    y.iter_mut().for_each(|a| *a *= c);
}

/// Two passes of classical Gram-Schmidt against an orthonormal basis.
pub(crate) fn reorthogonalize(w: &mut [C64], basis: &[Vec<C64>]) {
    for _ in 0..2 {
        for v in basis {
            let c = crate::pauli::inner(v, w);
            axpy_neg(w, c, v);
        }
    }
}

/// Deterministic generic start vector (splitmix64 hash of the index).
pub(crate) fn pseudo_random_vector(dim: usize) -> Vec<C64> {
    (0..dim as u64)
        .map(|k| {
            let mut z = k.wrapping_add(0x9E37_79B9_7F4A_7C15);
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            C64::new((z >> 11) as f64 / (1u64 << 53) as f64 - 0.5, 0.0)
        })
        .collect()
}
