//! Tensor factorizations: t-QR, the iterative QR-based approximate SVD on
//! matrices (CSVD-QR) and its tube-wise extension (CTSVD-QR), plus the exact
//! per-slice t-SVD used by the baseline solver and as an accuracy oracle.
//!
//! Every factorization runs per frontal slice of the tube-wise DFT. The
//! tube-wise routines exploit conjugate symmetry: only the leading
//! `ceil((n3+1)/2)` Fourier slices are factorized, the rest are filled by
//! entrywise conjugation so the inverse transform lands back on real tensors.

use crate::error::{Error, Result};
use crate::tensor::{conj_transpose, eye_tensor, fft3, ifft3, t_product, FourierTensor3, Tensor3};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Tensor QR pair `x = Q * R` with `Q` orthonormal in the t-product sense and
/// every Fourier slice of `R` upper triangular. Economy size: `Q` carries
/// `min(n1, n2)` lateral slices.
#[derive(Debug, Clone)]
pub struct TQrPair {
    pub q: Tensor3,
    pub r: Tensor3,
}

/// Rank-`r` triple `x ~ L * D * R` with `L`, `R` orthonormal (as `L* * L` and
/// `R * R*`) and `D` the `r x r x n3` core.
#[derive(Debug, Clone)]
pub struct FactorTriple {
    pub l: Tensor3,
    pub d: Tensor3,
    pub r: Tensor3,
    pub rank: usize,
}

impl FactorTriple {
    /// `L * D * R`.
    pub fn reconstruct(&self) -> Result<Tensor3> {
        t_product(&t_product(&self.l, &self.d)?, &self.r)
    }
}

/// Tensor singular value decomposition `x = U * S * V*` (economy size).
#[derive(Debug, Clone)]
pub struct TSvd {
    pub u: Tensor3,
    pub s: Tensor3,
    pub v: Tensor3,
}

impl TSvd {
    /// `U * S * V*`.
    pub fn reconstruct(&self) -> Result<Tensor3> {
        t_product(&t_product(&self.u, &self.s)?, &conj_transpose(&self.v))
    }
}

/// Economy QR with the phase convention that makes factorizations
/// deterministic: each diagonal entry of `R` is forced real nonnegative by
/// rotating the corresponding column of `Q`.
fn qr_nonneg(a: &DMatrix<Complex64>) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let qr = a.clone().qr();
    let mut q = qr.q();
    let mut r = qr.r();
    let p = q.ncols();
    for k in 0..p.min(r.ncols()) {
        let d = r[(k, k)];
        let m = d.norm();
        if m > 0.0 {
            let phase = d / m;
            let conj = phase.conj();
            for c in k..r.ncols() {
                r[(k, c)] *= conj;
            }
            r[(k, k)] = Complex64::new(m, 0.0);
            for row in 0..q.nrows() {
                q[(row, k)] *= phase;
            }
        }
    }
    (q, r)
}

/// Index of the last Fourier slice that must be factorized explicitly;
/// slices `half..n3` follow by conjugate symmetry.
fn explicit_slices(n3: usize) -> usize {
    n3 / 2 + 1
}

fn fill_conjugate_half(t: &mut FourierTensor3) {
    let n3 = t.dims().2;
    for l in explicit_slices(n3)..n3 {
        t.set_slice_conj_of(l, n3 - l);
    }
}

/// Tensor QR via per-slice QR in the Fourier domain. Economy size:
/// `Q` is `n1 x m x n3`, `R` is `m x n2 x n3` with `m = min(n1, n2)`.
pub fn t_qr(x: &Tensor3) -> TQrPair {
    let (n1, n2, n3) = x.dims();
    let m = n1.min(n2);
    let xf = fft3(x);
    let mut qf = FourierTensor3::zeros(n1, m, n3);
    let mut rf = FourierTensor3::zeros(m, n2, n3);
    for l in 0..n3 {
        let (q, r) = qr_nonneg(&xf.slice_matrix(l));
        qf.set_slice_matrix(l, &q);
        rf.set_slice_matrix(l, &r);
    }
    let q = ifft3(&qf).expect("t-QR Q factor must be real");
    let r = ifft3(&rf).expect("t-QR R factor must be real");
    TQrPair { q, r }
}

/// One matrix-level approximate SVD through alternating QR factorizations.
///
/// Starting from rectangular identities, each sweep performs
/// `L R' = qr(X R*)`, `R~ T = qr(X* L)` and takes `D = T*`, `R = R~*`.
/// `L` has orthonormal columns and `R` orthonormal rows; for inputs of rank
/// at most `r` the product `L D R` converges to `X` within a couple of
/// sweeps.
pub fn csvd_qr(
    x: &DMatrix<Complex64>,
    r: usize,
    iters: usize,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>, DMatrix<Complex64>)> {
    let (m, n) = x.shape();
    if r < 1 || r > m.min(n) {
        return Err(Error::RankOutOfRange { rank: r, n1: m, n2: n });
    }
    if iters < 1 {
        return Err(Error::invalid("csvd_qr needs at least one iteration"));
    }
    let eye = |rows: usize, cols: usize| {
        DMatrix::<Complex64>::from_fn(rows, cols, |i, j| {
            if i == j {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
    };
    // QR of an all-zero matrix is ill-defined; keep the identity factors.
    if x.iter().all(|v| *v == Complex64::ZERO) {
        return Ok((eye(m, r), DMatrix::zeros(r, r), eye(r, n)));
    }
    let mut l = eye(m, r);
    let mut row_factor = eye(r, n);
    let mut d = DMatrix::zeros(r, r);
    for _ in 0..iters {
        let (lq, _) = qr_nonneg(&(x * row_factor.adjoint()));
        l = lq;
        let (rq, t) = qr_nonneg(&(x.adjoint() * &l));
        d = t.adjoint();
        row_factor = rq.adjoint();
    }
    Ok((l, d, row_factor))
}

/// Tube-wise CSVD-QR: factorizes the leading Fourier slices, fills the rest
/// by conjugate symmetry, and transforms back. The result approximates the
/// t-SVD and is exact (to rounding) for tensors of tubal rank at most `r`.
pub fn ctsvd_qr(x: &Tensor3, r: usize, iters: usize) -> Result<FactorTriple> {
    let (n1, n2, n3) = x.dims();
    if r < 1 || r > n1.min(n2) {
        return Err(Error::RankOutOfRange { rank: r, n1, n2 });
    }
    let xf = fft3(x);
    let mut lf = FourierTensor3::zeros(n1, r, n3);
    let mut df = FourierTensor3::zeros(r, r, n3);
    let mut rf = FourierTensor3::zeros(r, n2, n3);
    for l in 0..explicit_slices(n3) {
        let (lm, dm, rm) = csvd_qr(&xf.slice_matrix(l), r, iters)?;
        lf.set_slice_matrix(l, &lm);
        df.set_slice_matrix(l, &dm);
        rf.set_slice_matrix(l, &rm);
    }
    fill_conjugate_half(&mut lf);
    fill_conjugate_half(&mut df);
    fill_conjugate_half(&mut rf);
    Ok(FactorTriple {
        l: ifft3(&lf)?,
        d: ifft3(&df)?,
        r: ifft3(&rf)?,
        rank: r,
    })
}

/// Exact tensor SVD via per-slice SVD in the Fourier domain (economy size,
/// singular values nonincreasing per slice).
pub fn t_svd(x: &Tensor3) -> TSvd {
    let (n1, n2, n3) = x.dims();
    let p = n1.min(n2);
    let xf = fft3(x);
    let mut uf = FourierTensor3::zeros(n1, p, n3);
    let mut sf = FourierTensor3::zeros(p, p, n3);
    let mut vf = FourierTensor3::zeros(n2, p, n3);
    for l in 0..explicit_slices(n3) {
        let svd = xf.slice_matrix(l).svd(true, true);
        let u = svd.u.expect("u requested");
        let vt = svd.v_t.expect("v_t requested");
        uf.set_slice_matrix(l, &u);
        vf.set_slice_matrix(l, &vt.adjoint());
        let mut s = DMatrix::<Complex64>::zeros(p, p);
        for i in 0..p {
            s[(i, i)] = Complex64::new(svd.singular_values[i], 0.0);
        }
        sf.set_slice_matrix(l, &s);
    }
    fill_conjugate_half(&mut uf);
    fill_conjugate_half(&mut sf);
    fill_conjugate_half(&mut vf);
    TSvd {
        u: ifft3(&uf).expect("t-SVD U factor must be real"),
        s: ifft3(&sf).expect("t-SVD S factor must be real"),
        v: ifft3(&vf).expect("t-SVD V factor must be real"),
    }
}

/// Number of diagonal tubes of the t-SVD core with Frobenius norm above
/// `tol`.
pub fn tubal_rank(x: &Tensor3, tol: f64) -> usize {
    let s = t_svd(x).s;
    let p = s.dims().0;
    (0..p)
        .filter(|&d| {
            let norm: f64 = s.tube(d, d).iter().map(|v| v * v).sum::<f64>().sqrt();
            norm > tol
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::identity_tensor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tensor(n1: usize, n2: usize, n3: usize, seed: u64) -> Tensor3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Tensor3::from_fn(n1, n2, n3, |_, _, _| rng.random_range(-1.0..1.0))
    }

    /// Product of random `n1 x r x n3` and `r x n2 x n3` tensors has tubal
    /// rank `r` almost surely.
    pub(crate) fn random_low_tubal_rank(n1: usize, n2: usize, n3: usize, r: usize, seed: u64) -> Tensor3 {
        let p = random_tensor(n1, r, n3, seed);
        let q = random_tensor(r, n2, n3, seed.wrapping_add(1));
        t_product(&p, &q).unwrap()
    }

    fn orthonormality_error(q: &Tensor3) -> f64 {
        let gram = t_product(&conj_transpose(q), q).unwrap();
        let id = identity_tensor(q.dims().1, q.dims().2);
        (&gram - &id).frobenius_norm()
    }

    #[test]
    fn t_qr_of_identity_is_identity() {
        let id = identity_tensor(4, 3);
        let pair = t_qr(&id);
        assert!((&pair.q - &id).frobenius_norm() < 1e-10);
        assert!((&pair.r - &id).frobenius_norm() < 1e-10);
    }

    #[test]
    fn t_qr_single_slice_matches_matrix_qr() {
        let x = random_tensor(5, 3, 1, 41);
        let pair = t_qr(&x);
        let recon = t_product(&pair.q, &pair.r).unwrap();
        assert!((&recon - &x).frobenius_norm() < 1e-10);
        // R's single slice is literally upper triangular with nonnegative diagonal
        let r0 = pair.r.frontal_slice(0);
        for i in 0..3 {
            assert!(r0[(i, i)] >= 0.0);
            for j in 0..i {
                assert!(r0[(i, j)].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn t_qr_reconstructs_and_r_is_fourier_triangular() {
        let x = random_tensor(6, 4, 5, 42);
        let pair = t_qr(&x);
        let recon = t_product(&pair.q, &pair.r).unwrap();
        assert!((&recon - &x).frobenius_norm() < 1e-10);
        assert!(orthonormality_error(&pair.q) < 1e-8);
        let rf = fft3(&pair.r);
        for l in 0..5 {
            let slice = rf.slice_matrix(l);
            for i in 0..4 {
                for j in 0..i.min(slice.ncols()) {
                    assert!(slice[(i, j)].norm() < 1e-10, "slice {l} entry ({i},{j}) below diagonal");
                }
            }
        }
    }

    #[test]
    fn csvd_qr_exact_on_diagonal() {
        let x = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(5.0, 0.0),
            Complex64::new(3.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]));
        let (l, d, r) = csvd_qr(&x, 3, 2).unwrap();
        let recon = &l * &d * &r;
        assert!((&recon - &x).norm() < 1e-10);
        let mut diag: Vec<f64> = (0..3).map(|i| d[(i, i)].norm()).collect();
        diag.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((diag[0] - 5.0).abs() < 1e-10);
        assert!((diag[1] - 3.0).abs() < 1e-10);
        assert!((diag[2] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn csvd_qr_zero_matrix_short_circuits() {
        let x = DMatrix::<Complex64>::zeros(4, 3);
        let (l, d, r) = csvd_qr(&x, 2, 3).unwrap();
        assert_eq!(d, DMatrix::zeros(2, 2));
        assert_eq!(l[(0, 0)], Complex64::ONE);
        assert_eq!(r[(1, 1)], Complex64::ONE);
    }

    #[test]
    fn csvd_qr_recovers_constructed_rank_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let a = DMatrix::<Complex64>::from_fn(4, 2, |_, _| Complex64::new(rng.random_range(-1.0..1.0), 0.0));
        let b = DMatrix::<Complex64>::from_fn(2, 4, |_, _| Complex64::new(rng.random_range(-1.0..1.0), 0.0));
        let x = a * b;
        let (l, d, r) = csvd_qr(&x, 2, 3).unwrap();
        let recon = &l * &d * &r;
        assert!((&recon - &x).norm() < 1e-8);
    }

    #[test]
    fn csvd_qr_rejects_bad_rank() {
        let x = DMatrix::<Complex64>::zeros(3, 3);
        assert!(matches!(csvd_qr(&x, 0, 1), Err(Error::RankOutOfRange { .. })));
        assert!(matches!(csvd_qr(&x, 4, 1), Err(Error::RankOutOfRange { .. })));
    }

    #[test]
    fn ctsvd_qr_exact_on_low_tubal_rank() {
        let x = random_low_tubal_rank(8, 7, 4, 3, 44);
        let triple = ctsvd_qr(&x, 3, 3).unwrap();
        let recon = triple.reconstruct().unwrap();
        let rel = (&recon - &x).frobenius_norm() / x.frobenius_norm();
        assert!(rel < 1e-7, "relative error {rel:e}");
        assert!(orthonormality_error(&triple.l) < 1e-8);
        // R has orthonormal rows: R * R* = I
        let gram = t_product(&triple.r, &conj_transpose(&triple.r)).unwrap();
        let id = identity_tensor(3, 4);
        assert!((&gram - &id).frobenius_norm() < 1e-8);
    }

    #[test]
    fn ctsvd_qr_single_slice_reduces_to_csvd_qr() {
        let x = random_tensor(5, 4, 1, 45);
        let triple = ctsvd_qr(&x, 4, 3).unwrap();
        let xm = x.frontal_slice(0).map(|v| Complex64::new(v, 0.0));
        let (l, d, r) = csvd_qr(&xm, 4, 3).unwrap();
        let direct = &l * &d * &r;
        let recon = triple.reconstruct().unwrap();
        for i in 0..5 {
            for j in 0..4 {
                assert!((recon.get(i, j, 0) - direct[(i, j)].re).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn ctsvd_qr_identity_core_converges_to_identity() {
        let id = identity_tensor(4, 3);
        let triple = ctsvd_qr(&id, 4, 3).unwrap();
        let df = fft3(&triple.d);
        for l in 0..3 {
            let slice = df.slice_matrix(l);
            for i in 0..4 {
                for j in 0..4 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((slice[(i, j)] - Complex64::new(expect, 0.0)).norm() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn t_svd_reconstructs() {
        let x = random_tensor(5, 4, 3, 46);
        let svd = t_svd(&x);
        let recon = svd.reconstruct().unwrap();
        assert!((&recon - &x).frobenius_norm() < 1e-10);
    }

    #[test]
    fn tubal_rank_detects_construction_and_zero() {
        let x = random_low_tubal_rank(6, 6, 3, 2, 47);
        assert_eq!(tubal_rank(&x, 1e-8), 2);
        assert_eq!(tubal_rank(&Tensor3::zeros(4, 4, 2), 1e-8), 0);
    }
}
