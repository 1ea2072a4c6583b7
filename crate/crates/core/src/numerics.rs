//! Complex vector arithmetic, unitary discrete Fourier transforms, and the
//! dense matrix oracle used by every other module and the test suites.
//!
//! The transform convention is fixed once for the whole crate: the forward
//! transform has entries `(1/sqrt(m)) * exp(-2*pi*i*j*k/m)`, so both [`dft`]
//! and [`idft`] are unitary and `idft` is the exact adjoint of `dft`. The
//! circulant diagonalization in [`crate::structured`] is defined against this
//! convention and pinned by tests, so changing the sign here would fail the
//! suite rather than silently flip spectra.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Unitary forward discrete Fourier transform.
///
/// Power-of-two lengths go through an iterative radix-2 FFT; other lengths
/// fall back to direct `O(m^2)` evaluation of the transform sum.
pub fn dft(v: &[Complex64]) -> Result<Vec<Complex64>> {
    transform(v, false)
}

/// Unitary inverse discrete Fourier transform, the exact adjoint of [`dft`].
pub fn idft(v: &[Complex64]) -> Result<Vec<Complex64>> {
    transform(v, true)
}

fn transform(v: &[Complex64], inverse: bool) -> Result<Vec<Complex64>> {
    if v.is_empty() {
        return Err(Error::EmptyVector);
    }
    let m = v.len();
    let mut out = if m.is_power_of_two() {
        let mut buf = v.to_vec();
        fft_radix2(&mut buf, inverse);
        buf
    } else {
        dft_direct(v, inverse)
    };
    let scale = 1.0 / (m as f64).sqrt();
    for z in &mut out {
        *z *= scale;
    }
    Ok(out)
}

/// Twiddle table `e^(sign * 2 pi i k / m)` for `k < m/2`, built with a
/// multiplicative recurrence that is re-anchored by a direct evaluation every
/// 64 roots. The drift between anchors stays near `64 * eps`, two orders of
/// magnitude below the crate's tightest tolerance.
fn twiddle_table(m: usize, sign: f64) -> Vec<Complex64> {
    const ANCHOR: usize = 64;
    let step = sign * 2.0 * PI / m as f64;
    let mut roots = Vec::with_capacity(m / 2);
    let mut w = Complex64::new(1.0, 0.0);
    let unit = Complex64::from_polar(1.0, step);
    for k in 0..m / 2 {
        if k % ANCHOR == 0 {
            w = Complex64::from_polar(1.0, step * k as f64);
        }
        roots.push(w);
        w *= unit;
    }
    roots
}

/// In-place iterative radix-2 Cooley-Tukey transform, unnormalized.
fn fft_radix2(buf: &mut [Complex64], inverse: bool) {
    let m = buf.len();
    debug_assert!(m.is_power_of_two());
    if m == 1 {
        return;
    }

    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..m {
        let mut bit = m >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }

    let sign = if inverse { 1.0 } else { -1.0 };
    let roots = twiddle_table(m, sign);

    let mut len = 2;
    while len <= m {
        let stride = m / len;
        for start in (0..m).step_by(len) {
            for k in 0..len / 2 {
                let w = roots[k * stride];
                let a = buf[start + k];
                let b = buf[start + k + len / 2] * w;
                buf[start + k] = a + b;
                buf[start + k + len / 2] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Direct evaluation of the (unnormalized) transform sum.
fn dft_direct(v: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let m = v.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    (0..m)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &x) in v.iter().enumerate() {
                let angle = sign * 2.0 * PI * ((j * k) % m) as f64 / m as f64;
                acc += x * Complex64::from_polar(1.0, angle);
            }
            acc
        })
        .collect()
}

/// Euclidean norm of a complex vector.
pub fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise modulus difference between two equal-length vectors.
pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Relative Euclidean distance `||a - b|| / ||b||` (absolute when `b` is zero).
pub fn relative_l2_error(a: &[Complex64], b: &[Complex64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let diff: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let denom = l2_norm(b);
    if denom == 0.0 {
        diff
    } else {
        diff / denom
    }
}

pub(crate) fn validate_finite(v: &[Complex64]) -> Result<()> {
    for (index, z) in v.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFiniteEntry { index });
        }
    }
    Ok(())
}

/// Row-major dense complex matrix.
///
/// This is the brute-force oracle the structured representations are checked
/// against; nothing on the fast paths materializes one.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        DenseMatrix {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix by evaluating `f(row, col)` on every index pair.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = DenseMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.entries[row * self.cols + col] = value;
    }

    /// Exact row-by-row inner products.
    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let row = &self.entries[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(a, x)| a * x).sum()
            })
            .collect())
    }

    /// Matrix product, used only by oracle-style tests and dumps.
    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Largest entrywise modulus difference from another matrix.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
