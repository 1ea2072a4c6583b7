//! Unitary dilation of a scaled diagonal spectrum and its Hermitian embedding.
//!
//! A diagonal operator `Lambda` is generally not unitary. Dividing by a scale
//! `k >= max |lambda_j|` makes it a contraction, and the contraction extends
//! to the unitary block operator
//!
//! ```text
//! U = [ diag(lambda/k)      diag(sqrt(1 - |lambda/k|^2)) ]
//!     [ diag(sqrt(1 - |lambda/k|^2))   -diag(conj(lambda/k)) ]
//! ```
//!
//! which in turn embeds into the involutory Hermitian operator
//! `H = [[0, U], [U^dagger, 0]]`. Because `H^2 = I`, the exponential
//! `exp(-i theta H)` collapses to `cos(theta) I - i sin(theta) H`, so the
//! circuit's evolution is applied exactly, in `O(m)` time per call. Dense
//! materializations exist only as capped oracles and for the `embed` dump.

use crate::error::{Error, Result};
use crate::numerics::{validate_finite, DenseMatrix};
use num_complex::Complex64;

/// How the dilation scale `k` is chosen from the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScaleConvention {
    /// `k = max |lambda_j|`: the completion blocks are real for every
    /// spectrum, and `lambda/k` is always a contraction.
    #[default]
    MaxModulus,
    /// `k = sqrt(max |lambda_j|)`: only valid when `max |lambda_j| <= 1`
    /// (otherwise `1 - |lambda_j|^2/k^2` goes negative); coincides with
    /// [`ScaleConvention::MaxModulus`] at `max |lambda| = 1`.
    SqrtMaxModulus,
}

impl ScaleConvention {
    /// Short human-readable label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            ScaleConvention::MaxModulus => "max-modulus",
            ScaleConvention::SqrtMaxModulus => "sqrt-max-modulus",
        }
    }
}

/// Dilation scale under the default max-modulus convention.
pub fn scale_factor(lambdas: &[Complex64]) -> Result<f64> {
    scale_factor_with(lambdas, ScaleConvention::MaxModulus)
}

/// Dilation scale under an explicit convention.
pub fn scale_factor_with(lambdas: &[Complex64], convention: ScaleConvention) -> Result<f64> {
    let max = lambdas.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::ZeroSpectrum);
    }
    match convention {
        ScaleConvention::MaxModulus => Ok(max),
        ScaleConvention::SqrtMaxModulus => {
            if max > 1.0 {
                Err(Error::ScaleOutOfDomain(max))
            } else {
                Ok(max.sqrt())
            }
        }
    }
}

/// The unitary dilation of `diag(lambda)/k`, stored as two diagonal arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalDilation {
    lambdas: Vec<Complex64>,
    k: f64,
    convention: ScaleConvention,
    /// `lambda_j / k`, the top-left diagonal.
    d_main: Vec<Complex64>,
    /// `sqrt(1 - |lambda_j|^2 / k^2)`, the real nonnegative completion.
    d_comp: Vec<f64>,
}

impl DiagonalDilation {
    pub fn new(lambdas: Vec<Complex64>) -> Result<Self> {
        Self::with_convention(lambdas, ScaleConvention::MaxModulus)
    }

    pub fn with_convention(lambdas: Vec<Complex64>, convention: ScaleConvention) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::EmptyVector);
        }
        validate_finite(&lambdas)?;
        let k = scale_factor_with(&lambdas, convention)?;
        let d_main: Vec<Complex64> = lambdas.iter().map(|z| z / k).collect();
        let d_comp = d_main
            .iter()
            .map(|z| {
                let rest = 1.0 - z.norm_sqr();
                // rounding can push the completion a hair below zero
                if rest < 0.0 {
                    debug_assert!(rest > -1e-15, "completion block went negative: {rest}");
                    0.0
                } else {
                    rest.sqrt()
                }
            })
            .collect();
        Ok(DiagonalDilation {
            lambdas,
            k,
            convention,
            d_main,
            d_comp,
        })
    }

    /// Base dimension `m` (the dilation acts on `2m` amplitudes).
    pub fn base_dimension(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[Complex64] {
        &self.lambdas
    }

    /// The scale `k`.
    pub fn scale(&self) -> f64 {
        self.k
    }

    pub fn convention(&self) -> ScaleConvention {
        self.convention
    }

    /// Applies the `2m x 2m` unitary dilation in `O(m)` time.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let m = self.base_dimension();
        if v.len() != 2 * m {
            return Err(Error::DimensionMismatch {
                expected: 2 * m,
                got: v.len(),
            });
        }
        let (top, bottom) = v.split_at(m);
        let mut out = Vec::with_capacity(2 * m);
        for j in 0..m {
            out.push(self.d_main[j] * top[j] + self.d_comp[j] * bottom[j]);
        }
        for j in 0..m {
            out.push(self.d_comp[j] * top[j] - self.d_main[j].conj() * bottom[j]);
        }
        Ok(out)
    }

    /// Applies the adjoint of the dilation, also in `O(m)` time.
    pub fn apply_adjoint(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let m = self.base_dimension();
        if v.len() != 2 * m {
            return Err(Error::DimensionMismatch {
                expected: 2 * m,
                got: v.len(),
            });
        }
        let (top, bottom) = v.split_at(m);
        let mut out = Vec::with_capacity(2 * m);
        for j in 0..m {
            out.push(self.d_main[j].conj() * top[j] + self.d_comp[j] * bottom[j]);
        }
        for j in 0..m {
            out.push(self.d_comp[j] * top[j] - self.d_main[j] * bottom[j]);
        }
        Ok(out)
    }

    /// Dense `2m x 2m` materialization (oracle/dump only).
    pub fn to_dense(&self, cap: usize) -> Result<DenseMatrix> {
        let m = self.base_dimension();
        if 2 * m > cap {
            return Err(Error::OracleCapExceeded { dim: 2 * m, cap });
        }
        let mut out = DenseMatrix::zeros(2 * m, 2 * m);
        for j in 0..m {
            out.set(j, j, self.d_main[j]);
            out.set(j, m + j, Complex64::new(self.d_comp[j], 0.0));
            out.set(m + j, j, Complex64::new(self.d_comp[j], 0.0));
            out.set(m + j, m + j, -self.d_main[j].conj());
        }
        Ok(out)
    }
}

/// The involutory Hermitian embedding `H = [[0, U], [U^dagger, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEmbedding {
    dilation: DiagonalDilation,
}

impl HermitianEmbedding {
    pub fn new(dilation: DiagonalDilation) -> Self {
        HermitianEmbedding { dilation }
    }

    pub fn dilation(&self) -> &DiagonalDilation {
        &self.dilation
    }

    /// The operator acts on `4m` amplitudes.
    pub fn dimension(&self) -> usize {
        4 * self.dilation.base_dimension()
    }

    /// Applies `H`: the top half of the output is `U` applied to the bottom
    /// half of the input, the bottom half is `U^dagger` applied to the top.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let dim = self.dimension();
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
        let (top, bottom) = v.split_at(dim / 2);
        let mut out = self.dilation.apply(bottom)?;
        out.extend(self.dilation.apply_adjoint(top)?);
        Ok(out)
    }

    /// Applies `exp(-i theta H) = cos(theta) I - i sin(theta) H`, which is
    /// exact because `H` squares to the identity.
    pub fn apply_exp(&self, theta: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let hv = self.apply(v)?;
        let cos = Complex64::new(theta.cos(), 0.0);
        let minus_i_sin = Complex64::new(0.0, -theta.sin());
        Ok(v.iter()
            .zip(&hv)
            .map(|(x, hx)| cos * x + minus_i_sin * hx)
            .collect())
    }

    /// Dense `4m x 4m` materialization (oracle/dump only).
    pub fn to_dense(&self, cap: usize) -> Result<DenseMatrix> {
        let dim = self.dimension();
        if dim > cap {
            return Err(Error::OracleCapExceeded { dim, cap });
        }
        let half = dim / 2;
        let u = self.dilation.to_dense(half)?;
        let mut out = DenseMatrix::zeros(dim, dim);
        for i in 0..half {
            for j in 0..half {
                out.set(i, half + j, u.get(i, j));
                out.set(half + i, j, u.get(j, i).conj());
            }
        }
        Ok(out)
    }
}
