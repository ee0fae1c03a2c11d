//! Dense third-order tensors and the t-product algebra built on them.
//!
//! A [`Tensor3`] stores an `n1 x n2 x n3` array of reals with frontal slices
//! contiguous in memory; entry `(i, j, k)` is read as "latency from device `i`
//! to device `j` in time slot `k`". All per-slice linear algebra happens in
//! the Fourier domain (see [`fourier`]), where the circular convolution of
//! tubes turns into independent matrix products per frontal slice.

mod algebra;
pub mod fourier;
pub mod oracle;

pub use algebra::{conj_transpose, eye_tensor, identity_tensor, t_product};
pub use fourier::{fft3, ifft3, FourierTensor3};

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Dense real third-order tensor with frontal-slice-major layout.
///
/// The flat index of entry `(i, j, k)` is `k*n1*n2 + i*n2 + j`, so the
/// frontal slice `X(:,:,k)` occupies one contiguous row-major block.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    n1: usize,
    n2: usize,
    n3: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    /// All-zero tensor. Dimensions must be positive.
    pub fn zeros(n1: usize, n2: usize, n3: usize) -> Self {
        assert!(n1 > 0 && n2 > 0 && n3 > 0, "tensor dimensions must be positive");
        Tensor3 {
            n1,
            n2,
            n3,
            data: vec![0.0; n1 * n2 * n3],
        }
    }

    /// Builds a tensor from a flat frontal-slice-major buffer.
    ///
    /// Fails when the buffer length does not match the dimensions or any
    /// entry is non-finite.
    pub fn from_vec(dims: (usize, usize, usize), data: Vec<f64>) -> Result<Self> {
        let (n1, n2, n3) = dims;
        if n1 == 0 || n2 == 0 || n3 == 0 {
            return Err(Error::invalid("tensor dimensions must be positive"));
        }
        if data.len() != n1 * n2 * n3 {
            return Err(Error::dims(format!(
                "buffer of length {} cannot hold a {}x{}x{} tensor",
                data.len(),
                n1,
                n2,
                n3
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite entry {} at flat index {pos}",
                data[pos]
            )));
        }
        Ok(Tensor3 { n1, n2, n3, data })
    }

    /// Builds a tensor by evaluating `f(i, j, k)` at every index.
    pub fn from_fn(n1: usize, n2: usize, n3: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut t = Tensor3::zeros(n1, n2, n3);
        for k in 0..n3 {
            for i in 0..n1 {
                for j in 0..n2 {
                    t.set(i, j, k, f(i, j, k));
                }
            }
        }
        t
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n1, self.n2, self.n3)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        false // dimensions are positive by construction
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.n1 && j < self.n2 && k < self.n3);
        k * self.n1 * self.n2 + i * self.n2 + j
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.idx(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let idx = self.idx(i, j, k);
        self.data[idx] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Frontal slice `X(:,:,k)` as an `n1 x n2` matrix.
    pub fn frontal_slice(&self, k: usize) -> DMatrix<f64> {
        let base = k * self.n1 * self.n2;
        DMatrix::from_row_iterator(self.n1, self.n2, self.data[base..base + self.n1 * self.n2].iter().copied())
    }

    /// Horizontal slice `X(i,:,:)` as an `n2 x n3` matrix.
    pub fn horizontal_slice(&self, i: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n2, self.n3, |j, k| self.get(i, j, k))
    }

    /// Lateral slice `X(:,j,:)` as an `n1 x n3` matrix.
    pub fn lateral_slice(&self, j: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n1, self.n3, |i, k| self.get(i, j, k))
    }

    /// Tube `X(i,j,:)` along the third dimension.
    pub fn tube(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.n3).map(|k| self.get(i, j, k)).collect()
    }

    /// Writes `values` into the frontal slice `X(:,:,k)`.
    pub fn set_frontal_slice(&mut self, k: usize, values: &DMatrix<f64>) {
        assert_eq!(values.shape(), (self.n1, self.n2), "frontal slice shape");
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                self.set(i, j, k, values[(i, j)]);
            }
        }
    }

    /// `sqrt(sum of squared entries)`.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Sum over lateral slices of their Frobenius norms.
    pub fn l21_norm(&self) -> f64 {
        (0..self.n2)
            .map(|j| {
                let mut acc = 0.0;
                for k in 0..self.n3 {
                    for i in 0..self.n1 {
                        let v = self.get(i, j, k);
                        acc += v * v;
                    }
                }
                acc.sqrt()
            })
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, factor: f64) -> Tensor3 {
        Tensor3 {
            n1: self.n1,
            n2: self.n2,
            n3: self.n3,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// First `depth` frontal slices as a new `n1 x n2 x depth` tensor.
    pub fn leading_slices(&self, depth: usize) -> Tensor3 {
        assert!(depth >= 1 && depth <= self.n3, "slice depth out of range");
        Tensor3 {
            n1: self.n1,
            n2: self.n2,
            n3: depth,
            data: self.data[..self.n1 * self.n2 * depth].to_vec(),
        }
    }

    fn check_same_dims(&self, other: &Tensor3, op: &str) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::dims(format!(
                "{op} needs equal shapes, got {:?} and {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(())
    }
}

impl std::ops::Add for &Tensor3 {
    type Output = Tensor3;
    fn add(self, rhs: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims(), rhs.dims(), "tensor addition shape mismatch");
        Tensor3 {
            n1: self.n1,
            n2: self.n2,
            n3: self.n3,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl std::ops::Sub for &Tensor3 {
    type Output = Tensor3;
    fn sub(self, rhs: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims(), rhs.dims(), "tensor subtraction shape mismatch");
        Tensor3 {
            n1: self.n1,
            n2: self.n2,
            n3: self.n3,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Entrywise product. Fails on shape mismatch.
pub fn hadamard(x: &Tensor3, y: &Tensor3) -> Result<Tensor3> {
    x.check_same_dims(y, "Hadamard product")?;
    Ok(Tensor3 {
        n1: x.n1,
        n2: x.n2,
        n3: x.n3,
        data: x.data.iter().zip(&y.data).map(|(a, b)| a * b).collect(),
    })
}

/// Binary observation pattern: the indicator tensor `A` plus the index set
/// `omega` of probed `(i, j, k)` triples. The two representations are kept
/// consistent by construction; `omega` is sorted and duplicate-free.
#[derive(Debug, Clone)]
pub struct ObservationMask {
    mask: Tensor3,
    omega: Vec<(usize, usize, usize)>,
}

impl ObservationMask {
    /// Builds a mask from an index set. Rejects out-of-range and duplicate
    /// triples.
    pub fn from_omega(dims: (usize, usize, usize), mut omega: Vec<(usize, usize, usize)>) -> Result<Self> {
        let (n1, n2, n3) = dims;
        let mut mask = Tensor3::zeros(n1, n2, n3);
        omega.sort_unstable();
        for w in omega.windows(2) {
            if w[0] == w[1] {
                return Err(Error::invalid(format!("duplicate index {:?} in omega", w[0])));
            }
        }
        for &(i, j, k) in &omega {
            if i >= n1 || j >= n2 || k >= n3 {
                return Err(Error::invalid(format!(
                    "index ({i},{j},{k}) outside {n1}x{n2}x{n3}"
                )));
            }
            mask.set(i, j, k, 1.0);
        }
        Ok(ObservationMask { mask, omega })
    }

    /// Builds a mask from an indicator tensor whose entries are exactly 0 or 1.
    pub fn from_mask_tensor(mask: Tensor3) -> Result<Self> {
        let (n1, n2, n3) = mask.dims();
        let mut omega = Vec::new();
        for k in 0..n3 {
            for i in 0..n1 {
                for j in 0..n2 {
                    let v = mask.get(i, j, k);
                    if v == 1.0 {
                        omega.push((i, j, k));
                    } else if v != 0.0 {
                        return Err(Error::invalid(format!(
                            "mask entry ({i},{j},{k}) is {v}, expected 0 or 1"
                        )));
                    }
                }
            }
        }
        omega.sort_unstable();
        Ok(ObservationMask { mask, omega })
    }

    /// Fully observed pattern.
    pub fn all_ones(dims: (usize, usize, usize)) -> Self {
        let (n1, n2, n3) = dims;
        let mut omega = Vec::with_capacity(n1 * n2 * n3);
        for k in 0..n3 {
            for i in 0..n1 {
                for j in 0..n2 {
                    omega.push((i, j, k));
                }
            }
        }
        ObservationMask::from_omega(dims, omega).expect("full omega is valid")
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.mask.dims()
    }

    pub fn mask(&self) -> &Tensor3 {
        &self.mask
    }

    pub fn omega(&self) -> &[(usize, usize, usize)] {
        &self.omega
    }

    /// Number of observed entries.
    pub fn count(&self) -> usize {
        self.omega.len()
    }

    pub fn contains(&self, i: usize, j: usize, k: usize) -> bool {
        self.mask.get(i, j, k) == 1.0
    }
}

/// Zeroes the unobserved entries of `x`.
pub fn apply_mask(x: &Tensor3, a: &ObservationMask) -> Result<Tensor3> {
    hadamard(x, a.mask())
}

/// Copies the observed entries of `m` into `x` (exact assignment, no
/// arithmetic), leaving the rest of `x` untouched.
pub fn replace_observed(x: &Tensor3, a: &ObservationMask, m: &Tensor3) -> Result<Tensor3> {
    x.check_same_dims(a.mask(), "observation replacement")?;
    x.check_same_dims(m, "observation replacement")?;
    let mut out = x.clone();
    for &(i, j, k) in a.omega() {
        out.set(i, j, k, m.get(i, j, k));
    }
    Ok(out)
}
