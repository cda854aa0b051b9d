//! Small dense complex matrix helpers shared by the analysis modules.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub fn zeros(d: usize) -> CMatrix {
    CMatrix::zeros(d, d)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn scalar(value: Complex64) -> CMatrix {
    CMatrix::from_element(1, 1, value)
}

pub fn real_diagonal(diag: &[f64]) -> CMatrix {
    let d = diag.len();
    CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(diag[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn adjoint(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

pub fn hermitize(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Squared L2(M) norm under the normalized trace `Tr/d`.
pub fn tau_norm_sqr(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>() / a.nrows() as f64
}

/// `tau(a* b)` with `tau = Tr/d`.
pub fn tau_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.conj() * y;
    }
    acc / a.nrows() as f64
}

pub fn hermitian_defect(a: &CMatrix) -> f64 {
    frobenius(&(a - a.adjoint()))
}

/// Eigenvalues (ascending) and eigenvectors of the Hermitian part of `a`.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = hermitize(a);
    if h.nrows() == 1 {
        return (vec![h[(0, 0)].re], identity(1));
    }
    let d = h.nrows();
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(d, d, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    let (values, _) = hermitian_eigen(a);
    values[0]
}

/// Applies `g` to the spectrum of the Hermitian part of `a`.
pub fn spectral_map(a: &CMatrix, g: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(a);
    let mut scaled = vectors.clone();
    for (c, &lambda) in values.iter().enumerate() {
        let s = g(lambda);
        for r in 0..scaled.nrows() {
            scaled[(r, c)] *= s;
        }
    }
    hermitize(&(scaled * vectors.adjoint()))
}

/// Positive part of the Hermitian part of `a`: negative eigenvalues clipped to 0.
pub fn psd_part(a: &CMatrix) -> CMatrix {
    spectral_map(a, |x| x.max(0.0))
}

/// Negative part, so that `herm(a) = psd_part(a) - negative_part(a)`.
pub fn negative_part(a: &CMatrix) -> CMatrix {
    spectral_map(a, |x| (-x).max(0.0))
}

pub fn psd_sqrt(a: &CMatrix) -> CMatrix {
    spectral_map(a, |x| x.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parts_recompose_hermitian_matrix() {
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 1.0), c(2.0, -1.0), c(-3.0, 0.0)]);
        let back = psd_part(&a) - negative_part(&a);
        assert!(frobenius(&(back - &a)) < 1e-12);
        assert!(min_eigenvalue(&psd_part(&a)) > -1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        let b = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.5), c(0.3, 0.0), c(-0.2, 1.0), c(2.0, 0.0)]);
        let p = b.adjoint() * &b;
        let r = psd_sqrt(&p);
        assert!(frobenius(&(&r * &r - &p)) < 1e-10);
    }

    #[test]
    fn tau_norm_of_identity_is_one() {
        assert!((tau_norm_sqr(&identity(3)) - 1.0).abs() < 1e-15);
    }
}
