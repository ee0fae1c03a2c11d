//! T-product, tensor conjugate transpose, and identity tensors.

use crate::error::{Error, Result};
use crate::tensor::fourier::{fft3, ifft3};
use crate::tensor::Tensor3;

/// T-product `x * y`: circular convolution of tubes, computed as independent
/// matrix products per frontal slice in the Fourier domain.
///
/// `x` is `n1 x n2 x n3`, `y` is `n2 x l x n3`; the result is `n1 x l x n3`.
pub fn t_product(x: &Tensor3, y: &Tensor3) -> Result<Tensor3> {
    let (xn1, xn2, xn3) = x.dims();
    let (yn1, yn2, yn3) = y.dims();
    if xn2 != yn1 || xn3 != yn3 {
        return Err(Error::dims(format!(
            "t-product needs {xn1}x{xn2}x{xn3} * {xn2}x?x{xn3}, got second operand {yn1}x{yn2}x{yn3}"
        )));
    }
    let xf = fft3(x);
    let yf = fft3(y);
    let mut zf = crate::tensor::FourierTensor3::zeros(xn1, yn2, xn3);
    for l in 0..xn3 {
        let prod = xf.slice_matrix(l) * yf.slice_matrix(l);
        zf.set_slice_matrix(l, &prod);
    }
    ifft3(&zf)
}

/// Tensor conjugate transpose: every frontal slice transposed, slices 2..n3
/// reversed in order. An involution on real tensors.
pub fn conj_transpose(x: &Tensor3) -> Tensor3 {
    let (n1, n2, n3) = x.dims();
    let mut out = Tensor3::zeros(n2, n1, n3);
    for k in 0..n3 {
        let src = if k == 0 { 0 } else { n3 - k };
        for i in 0..n1 {
            for j in 0..n2 {
                out.set(j, i, k, x.get(i, j, src));
            }
        }
    }
    out
}

/// Identity tensor: first frontal slice `I_n`, the rest zero. Neutral element
/// of the t-product on both sides.
pub fn identity_tensor(n: usize, n3: usize) -> Tensor3 {
    eye_tensor(n, n, n3)
}

/// Rectangular variant: first frontal slice `eye(rows, cols)`, the rest zero.
/// Used to initialize factor iterations.
pub fn eye_tensor(rows: usize, cols: usize, n3: usize) -> Tensor3 {
    let mut t = Tensor3::zeros(rows, cols, n3);
    for d in 0..rows.min(cols) {
        t.set(d, d, 0, 1.0);
    }
    t
}
