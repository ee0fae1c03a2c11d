//! Block-circulant reference realization of the t-product.
//!
//! These operators materialize `n1*n3 x n2*n3` matrices, so they cost
//! O(n3^2) memory versus the Fourier path's O(n3); they exist as independent
//! oracles for tests and for the block-diagonalization identity check, not
//! for production use.

use crate::error::{Error, Result};
use crate::tensor::Tensor3;
use nalgebra::DMatrix;

/// Stacks the frontal slices into an `n1*n3 x n2` matrix.
pub fn unfold(x: &Tensor3) -> DMatrix<f64> {
    let (n1, n2, n3) = x.dims();
    DMatrix::from_fn(n1 * n3, n2, |r, c| x.get(r % n1, c, r / n1))
}

/// Inverse of [`unfold`]: restores a stacked matrix to a tensor of the given
/// dimensions.
pub fn fold(m: &DMatrix<f64>, dims: (usize, usize, usize)) -> Result<Tensor3> {
    let (n1, n2, n3) = dims;
    if m.nrows() != n1 * n3 || m.ncols() != n2 {
        return Err(Error::dims(format!(
            "fold expects a {}x{} matrix for a {n1}x{n2}x{n3} tensor, got {}x{}",
            n1 * n3,
            n2,
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(Tensor3::from_fn(n1, n2, n3, |i, j, k| m[(k * n1 + i, j)]))
}

/// Block circulant matrix of `x`: block `(p, q)` (0-indexed) is the frontal
/// slice `(p - q) mod n3`.
pub fn bcirc(x: &Tensor3) -> DMatrix<f64> {
    let (n1, n2, n3) = x.dims();
    let mut out = DMatrix::zeros(n1 * n3, n2 * n3);
    for p in 0..n3 {
        for q in 0..n3 {
            let k = (p + n3 - q) % n3;
            for i in 0..n1 {
                for j in 0..n2 {
                    out[(p * n1 + i, q * n2 + j)] = x.get(i, j, k);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::fourier::fft3;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fold_unfold_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let x = Tensor3::from_fn(3, 2, 4, |_, _, _| rng.random_range(-1.0..1.0));
        assert_eq!(fold(&unfold(&x), x.dims()).unwrap(), x);
        assert!(fold(&unfold(&x), (2, 3, 4)).is_err());
    }

    #[test]
    fn bcirc_single_slice_is_the_slice() {
        let x = Tensor3::from_fn(2, 3, 1, |i, j, _| (i * 3 + j) as f64);
        assert_eq!(bcirc(&x), x.frontal_slice(0));
    }

    #[test]
    fn bcirc_of_tube_is_circulant() {
        // tube (a, b, c) -> [[a, c, b], [b, a, c], [c, b, a]]
        let mut x = Tensor3::zeros(1, 1, 3);
        x.set(0, 0, 0, 1.0);
        x.set(0, 0, 1, 2.0);
        x.set(0, 0, 2, 3.0);
        let m = bcirc(&x);
        let expected = DMatrix::from_row_slice(3, 3, &[1.0, 3.0, 2.0, 2.0, 1.0, 3.0, 3.0, 2.0, 1.0]);
        assert_eq!(m, expected);
    }

    /// DFT matrix conjugation turns bcirc into the block diagonal of Fourier
    /// slices.
    #[test]
    fn bcirc_block_diagonalizes_to_fourier_slices() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let (n1, n2, n3) = (3, 2, 4);
        let x = Tensor3::from_fn(n1, n2, n3, |_, _, _| rng.random_range(-1.0..1.0));

        let dft = |n: usize| {
            DMatrix::from_fn(n, n, |r, c| {
                Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (r * c) as f64 / n as f64)
            })
        };
        let f = dft(n3);
        let f_inv = f.adjoint().map(|v| v / n3 as f64);
        let kron = |a: &DMatrix<Complex64>, n: usize| {
            let mut out = DMatrix::<Complex64>::zeros(a.nrows() * n, a.ncols() * n);
            for r in 0..a.nrows() {
                for c in 0..a.ncols() {
                    for d in 0..n {
                        out[(r * n + d, c * n + d)] = a[(r, c)];
                    }
                }
            }
            out
        };

        let big = kron(&f, n1) * bcirc(&x).map(|v| Complex64::new(v, 0.0)) * kron(&f_inv, n2);
        let xf = fft3(&x);
        let mut off_block = 0.0f64;
        for p in 0..n3 {
            for q in 0..n3 {
                for i in 0..n1 {
                    for j in 0..n2 {
                        let v = big[(p * n1 + i, q * n2 + j)];
                        if p == q {
                            assert!((v - xf.get(i, j, p)).norm() < 1e-8);
                        } else {
                            off_block += v.norm_sqr();
                        }
                    }
                }
            }
        }
        assert!(off_block.sqrt() < 1e-8, "off-block energy {off_block:e}");
    }
}
