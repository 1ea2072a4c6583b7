//! Symbolic Toeplitz, Hankel and circulant matrices.
//!
//! A Toeplitz matrix is stored as a sparse map from diagonal offset to value,
//! a Hankel matrix as a sparse map over skew-diagonals, and a circulant by its
//! first row. None of the fast paths ever materialize the full matrix; the
//! [`DenseMatrix`] conversions exist as capped brute-force oracles and for the
//! `embed` dump command.
//!
//! The conventions, in 0-based indices:
//!
//! * Toeplitz entry `(i, j)` equals `t[i - j]`; negative offsets are
//!   superdiagonals (first-row entries), positive offsets subdiagonals.
//! * Hankel entry `(i, j)` equals `h[i + j - (n-1)]`, so `h[-(n-1)]` sits in
//!   the top-left corner and `h[n-1]` in the bottom-right.
//! * Circulant entry `(i, j)` equals `first_row[(j - i) mod m]`: each row is
//!   the previous one shifted right by one position and wrapped around.

use crate::error::{Error, Result};
use crate::numerics::{dft, idft, DenseMatrix};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Default bound on the dimension of dense oracle materializations.
pub const DEFAULT_ORACLE_CAP: usize = 1024;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn check_offsets(n: usize, map: &BTreeMap<i64, Complex64>) -> Result<()> {
    let bound = n as i64 - 1;
    for &offset in map.keys() {
        if offset < -bound || offset > bound {
            return Err(Error::OffsetOutOfRange {
                offset,
                min: -bound,
                max: bound,
            });
        }
    }
    Ok(())
}

fn collect_nonzero(entries: impl IntoIterator<Item = (i64, Complex64)>) -> BTreeMap<i64, Complex64> {
    entries
        .into_iter()
        .filter(|(_, v)| *v != ZERO)
        .collect()
}

/// Sparse description of an `n x n` Toeplitz matrix by its diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzSpec {
    n: usize,
    diagonals: BTreeMap<i64, Complex64>,
}

impl ToeplitzSpec {
    /// Builds a spec from `(offset, value)` pairs. Exact zeros are dropped so
    /// that equality of specs is equality of matrices. The all-zero matrix is
    /// representable; the pipeline rejects it at run time.
    pub fn new(n: usize, entries: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        let diagonals = collect_nonzero(entries);
        check_offsets(n, &diagonals)?;
        Ok(ToeplitzSpec { n, diagonals })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Value on the diagonal with the given offset (zero when unstored).
    pub fn diagonal(&self, offset: i64) -> Complex64 {
        self.diagonals.get(&offset).copied().unwrap_or(ZERO)
    }

    pub fn diagonals(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.diagonals.iter().map(|(&k, &v)| (k, v))
    }

    /// Number of stored (nonzero) diagonals.
    pub fn nnz(&self) -> usize {
        self.diagonals.len()
    }

    pub fn is_zero(&self) -> bool {
        self.diagonals.is_empty()
    }

    /// The length-`2n` defining array
    /// `(t_0, t_{-1}, ..., t_{-(n-1)}, 0, t_{n-1}, ..., t_1)`.
    ///
    /// This is exactly the first row of the circulant the matrix embeds in;
    /// the centre entry (index `n`) is identically zero.
    pub fn defining_array(&self) -> Vec<Complex64> {
        let n = self.n;
        let mut psi = vec![ZERO; 2 * n];
        psi[0] = self.diagonal(0);
        for j in 1..n {
            psi[j] = self.diagonal(-(j as i64));
            psi[2 * n - j] = self.diagonal(j as i64);
        }
        psi
    }

    /// Rebuilds a spec from a defining array. The centre entry must vanish up
    /// to a relative tolerance of `1e-12`; it is not stored.
    pub fn from_defining_array(psi: &[Complex64]) -> Result<Self> {
        if psi.len() < 2 || !psi.len().is_multiple_of(2) {
            return Err(Error::BadDefiningArrayLength(psi.len()));
        }
        let n = psi.len() / 2;
        let max = psi.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let centre = psi[n].norm();
        if centre > 1e-12 * max {
            return Err(Error::NonzeroDefiningCentre {
                index: n,
                modulus: centre,
            });
        }
        let mut entries = Vec::with_capacity(2 * n - 1);
        entries.push((0, psi[0]));
        for j in 1..n {
            entries.push((-(j as i64), psi[j]));
            entries.push((j as i64, psi[2 * n - j]));
        }
        ToeplitzSpec::new(n, entries)
    }

    /// The `2n x 2n` circulant whose first row is the defining array and whose
    /// top-left `n x n` block is this matrix.
    pub fn embed_in_circulant(&self) -> CirculantSpec {
        CirculantSpec::new(self.defining_array()).expect("defining array is non-empty")
    }

    /// Dense oracle materialization; `cap` bounds the dimension.
    pub fn to_dense(&self, cap: usize) -> Result<DenseMatrix> {
        if self.n > cap {
            return Err(Error::OracleCapExceeded { dim: self.n, cap });
        }
        Ok(DenseMatrix::from_fn(self.n, self.n, |i, j| {
            self.diagonal(i as i64 - j as i64)
        }))
    }
}

/// Sparse description of an `n x n` Hankel matrix by its skew-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelSpec {
    n: usize,
    skew_diagonals: BTreeMap<i64, Complex64>,
}

impl HankelSpec {
    pub fn new(n: usize, entries: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        let skew_diagonals = collect_nonzero(entries);
        check_offsets(n, &skew_diagonals)?;
        Ok(HankelSpec { n, skew_diagonals })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Value on the skew-diagonal with the given index (zero when unstored).
    pub fn skew_diagonal(&self, index: i64) -> Complex64 {
        self.skew_diagonals.get(&index).copied().unwrap_or(ZERO)
    }

    pub fn skew_diagonals(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.skew_diagonals.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.skew_diagonals.is_empty()
    }

    /// The Toeplitz matrix `T_H = H * P`, where `P` is the reversal
    /// permutation. Reversing the columns of a Hankel matrix turns skew
    /// diagonals into diagonals with the same index, so the sparse map carries
    /// over unchanged; `H = T_H * P` recovers the original.
    pub fn to_toeplitz(&self) -> ToeplitzSpec {
        ToeplitzSpec {
            n: self.n,
            diagonals: self.skew_diagonals.clone(),
        }
    }

    /// Dense oracle materialization; `cap` bounds the dimension.
    pub fn to_dense(&self, cap: usize) -> Result<DenseMatrix> {
        if self.n > cap {
            return Err(Error::OracleCapExceeded { dim: self.n, cap });
        }
        let shift = self.n as i64 - 1;
        Ok(DenseMatrix::from_fn(self.n, self.n, |i, j| {
            self.skew_diagonal(i as i64 + j as i64 - shift)
        }))
    }
}

/// An `m x m` circulant matrix, stored as its first row.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantSpec {
    first_row: Vec<Complex64>,
}

impl CirculantSpec {
    pub fn new(first_row: Vec<Complex64>) -> Result<Self> {
        if first_row.is_empty() {
            return Err(Error::EmptyVector);
        }
        Ok(CirculantSpec { first_row })
    }

    pub fn dimension(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[Complex64] {
        &self.first_row
    }

    pub fn is_zero(&self) -> bool {
        self.first_row.iter().all(|z| *z == ZERO)
    }

    /// Eigenvalues `lambda_j = sum_k c_k exp(2 pi i jk/m)`, computed through
    /// the FFT and scaled to undo the unitary normalization.
    ///
    /// The pairing with [`dft`] is what makes the diagonalization work: for
    /// any `v` of matching length, `idft(lambda ⊙ dft(v))` equals the dense
    /// circulant product.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let m = self.first_row.len();
        let mut lambdas = idft(&self.first_row).expect("first row is non-empty");
        let scale = (m as f64).sqrt();
        for z in &mut lambdas {
            *z *= scale;
        }
        lambdas
    }

    /// Reads the circulant as a Toeplitz matrix (every circulant is one).
    pub fn as_toeplitz(&self) -> ToeplitzSpec {
        let m = self.first_row.len() as i64;
        let entries = (-(m - 1)..m).map(|offset| {
            let idx = (-offset).rem_euclid(m) as usize;
            (offset, self.first_row[idx])
        });
        ToeplitzSpec::new(self.first_row.len(), entries).expect("offsets in range by construction")
    }

    /// Dense oracle materialization; `cap` bounds the dimension.
    pub fn to_dense(&self, cap: usize) -> Result<DenseMatrix> {
        let m = self.first_row.len();
        if m > cap {
            return Err(Error::OracleCapExceeded { dim: m, cap });
        }
        Ok(DenseMatrix::from_fn(m, m, |i, j| {
            self.first_row[(j + m - i) % m]
        }))
    }
}

/// Action of the reversal permutation `P` (the antidiagonal identity).
pub fn reverse(v: &[Complex64]) -> Vec<Complex64> {
    v.iter().rev().copied().collect()
}

/// The second-order finite-difference Laplacian: tridiagonal Toeplitz with 2
/// on the main diagonal and -1 on both adjacent diagonals.
pub fn build_laplacian(n: usize) -> Result<ToeplitzSpec> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: n });
    }
    ToeplitzSpec::new(
        n,
        [
            (0, Complex64::new(2.0, 0.0)),
            (-1, Complex64::new(-1.0, 0.0)),
            (1, Complex64::new(-1.0, 0.0)),
        ],
    )
}

/// Nonzero structure of a Toeplitz matrix in the time and frequency domains.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsityReport {
    pub n: usize,
    /// Nonzero entries of the defining array.
    pub nnz_time: usize,
    /// Entries of the defining array's spectrum with modulus above `threshold`.
    pub nnz_freq: usize,
    pub density_time: f64,
    pub density_freq: f64,
    pub threshold: f64,
}

/// Counts nonzeros of the defining array and of its unitary spectrum.
///
/// With `tau = None` the threshold defaults to `1e-12` times the largest
/// spectral modulus; exact zeros are rare in floating point, and a relative
/// threshold keeps the report stable under scaling.
pub fn sparsity_report(t: &ToeplitzSpec, tau: Option<f64>) -> SparsityReport {
    let psi = t.defining_array();
    let len = psi.len();
    let nnz_time = psi.iter().filter(|z| **z != ZERO).count();
    let spectrum = dft(&psi).expect("defining array is non-empty");
    let max_modulus = spectrum.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let threshold = tau.unwrap_or(1e-12 * max_modulus);
    let nnz_freq = spectrum.iter().filter(|z| z.norm() > threshold).count();
    SparsityReport {
        n: t.dimension(),
        nnz_time,
        nnz_freq,
        density_time: nnz_time as f64 / len as f64,
        density_freq: nnz_freq as f64 / len as f64,
        threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::max_abs_diff;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(x: f64) -> Complex64 {
        c(x, 0.0)
    }

    #[test]
    fn defining_array_smallest_case() {
        let t = ToeplitzSpec::new(1, [(0, c(3.0, -1.0))]).unwrap();
        assert_eq!(t.defining_array(), vec![c(3.0, -1.0), r(0.0)]);
    }

    #[test]
    fn defining_array_n2_layout() {
        // [[a, b], [c, a]]
        let (a, b, cc) = (c(1.0, 1.0), c(2.0, 0.0), c(0.0, -3.0));
        let t = ToeplitzSpec::new(2, [(0, a), (-1, b), (1, cc)]).unwrap();
        assert_eq!(t.defining_array(), vec![a, b, r(0.0), cc]);
    }

    #[test]
    fn defining_array_of_laplacian() {
        let t = build_laplacian(3).unwrap();
        assert_eq!(
            t.defining_array(),
            vec![r(2.0), r(-1.0), r(0.0), r(0.0), r(0.0), r(-1.0)]
        );
    }

    #[test]
    fn identity_embeds_to_identity() {
        let t = ToeplitzSpec::new(2, [(0, r(1.0))]).unwrap();
        let circ = t.embed_in_circulant();
        assert_eq!(circ.first_row(), &[r(1.0), r(0.0), r(0.0), r(0.0)]);
        let dense = circ.to_dense(16).unwrap();
        assert_eq!(dense, DenseMatrix::identity(4));
    }

    #[test]
    fn embedding_blocks_match_their_definition() {
        let (a, b, cc) = (c(1.0, 0.5), c(-2.0, 1.0), c(0.25, -1.0));
        let t = ToeplitzSpec::new(2, [(0, a), (-1, b), (1, cc)]).unwrap();
        let circ = t.embed_in_circulant();
        assert_eq!(circ.first_row(), &[a, b, r(0.0), cc]);
        let dense = circ.to_dense(16).unwrap();
        // top-left block is T itself
        let t_dense = t.to_dense(16).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(dense.get(i, j), t_dense.get(i, j));
                assert_eq!(dense.get(i + 2, j + 2), t_dense.get(i, j));
            }
        }
        // top-right block has a zero main diagonal with the leftover
        // diagonals wrapped around
        assert_eq!(dense.get(0, 2), r(0.0));
        assert_eq!(dense.get(0, 3), cc);
        assert_eq!(dense.get(1, 2), b);
        assert_eq!(dense.get(1, 3), r(0.0));
    }

    #[test]
    fn laplacian_embedding_top_left_block() {
        let t = build_laplacian(3).unwrap();
        let circ = t.embed_in_circulant();
        assert_eq!(
            circ.first_row(),
            &[r(2.0), r(-1.0), r(0.0), r(0.0), r(0.0), r(-1.0)]
        );
        let dense = circ.to_dense(16).unwrap();
        let t_dense = t.to_dense(16).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(dense.get(i, j), t_dense.get(i, j));
            }
        }
    }

    #[test]
    fn eigenvalues_of_identity_circulant() {
        let circ = CirculantSpec::new(vec![r(1.0), r(0.0), r(0.0), r(0.0)]).unwrap();
        assert!(max_abs_diff(&circ.eigenvalues(), &[r(1.0), r(1.0), r(1.0), r(1.0)]) <= 1e-12);
    }

    #[test]
    fn eigenvalues_of_cyclic_shift() {
        let circ = CirculantSpec::new(vec![r(0.0), r(1.0), r(0.0), r(0.0)]).unwrap();
        let expected = vec![r(1.0), c(0.0, 1.0), r(-1.0), c(0.0, -1.0)];
        assert!(max_abs_diff(&circ.eigenvalues(), &expected) <= 1e-12);
    }

    #[test]
    fn eigenvalues_of_periodic_laplacian() {
        let circ = CirculantSpec::new(vec![r(2.0), r(-1.0), r(0.0), r(-1.0)]).unwrap();
        let expected = vec![r(0.0), r(2.0), r(4.0), r(2.0)];
        assert!(max_abs_diff(&circ.eigenvalues(), &expected) <= 1e-12);
    }

    #[test]
    fn dense_layouts_match_displayed_forms() {
        let (a, b, cc) = (c(1.0, 2.0), c(3.0, -1.0), c(-2.0, 0.5));
        let t = ToeplitzSpec::new(2, [(0, a), (-1, b), (1, cc)]).unwrap();
        let td = t.to_dense(16).unwrap();
        assert_eq!(
            [td.get(0, 0), td.get(0, 1), td.get(1, 0), td.get(1, 1)],
            [a, b, cc, a]
        );

        let h = HankelSpec::new(2, [(-1, a), (0, b), (1, cc)]).unwrap();
        let hd = h.to_dense(16).unwrap();
        assert_eq!(
            [hd.get(0, 0), hd.get(0, 1), hd.get(1, 0), hd.get(1, 1)],
            [a, b, b, cc]
        );

        let circ = CirculantSpec::new(vec![a, b, cc]).unwrap();
        let cd = circ.to_dense(16).unwrap();
        for (i, row) in [[a, b, cc], [cc, a, b], [b, cc, a]].iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                assert_eq!(cd.get(i, j), *want);
            }
        }
    }

    #[test]
    fn oracle_cap_is_enforced() {
        let t = build_laplacian(64).unwrap();
        assert_eq!(
            t.to_dense(32),
            Err(Error::OracleCapExceeded { dim: 64, cap: 32 })
        );
    }

    #[test]
    fn hankel_to_toeplitz_hand_case() {
        // H = [[a, b], [b, c]]  ->  T_H = [[b, a], [c, b]]
        let (a, b, cc) = (r(1.0), r(2.0), r(3.0));
        let h = HankelSpec::new(2, [(-1, a), (0, b), (1, cc)]).unwrap();
        let t = h.to_toeplitz();
        let td = t.to_dense(16).unwrap();
        assert_eq!(
            [td.get(0, 0), td.get(0, 1), td.get(1, 0), td.get(1, 1)],
            [b, a, cc, b]
        );
    }

    #[test]
    fn reversal_hankel_maps_to_identity() {
        // P itself is the Hankel matrix with h_0 = 1 and nothing else.
        let p = HankelSpec::new(4, [(0, r(1.0))]).unwrap();
        let t = p.to_toeplitz();
        assert_eq!(t.to_dense(16).unwrap(), DenseMatrix::identity(4));
    }

    #[test]
    fn hankel_times_reversal_recovers_toeplitz() {
        // materialize(T_H) = materialize(H) . P, checked entrywise at n = 5
        let entries: Vec<(i64, Complex64)> = (-4..=4)
            .map(|k| (k, c(0.3 * k as f64 + 1.0, 0.1 * (k * k) as f64 - 0.7)))
            .collect();
        let h = HankelSpec::new(5, entries).unwrap();
        let hd = h.to_dense(16).unwrap();
        let td = h.to_toeplitz().to_dense(16).unwrap();
        let p = DenseMatrix::from_fn(5, 5, |i, j| if i + j == 4 { r(1.0) } else { r(0.0) });
        let hp = hd.matmul(&p).unwrap();
        assert_eq!(hp, td);
        // and H = T_H . P in turn
        let tp = td.matmul(&p).unwrap();
        assert_eq!(tp, hd);
    }

    #[test]
    fn reverse_examples() {
        let v = vec![c(1.0, -1.0), c(2.0, 0.0)];
        assert_eq!(reverse(&v), vec![c(2.0, 0.0), c(1.0, -1.0)]);
        let w: Vec<Complex64> = [1.0, 2.0, 3.0, 4.0].iter().map(|&x| r(x)).collect();
        assert_eq!(reverse(&w), [4.0, 3.0, 2.0, 1.0].map(r).to_vec());
        assert_eq!(reverse(&reverse(&w)), w);
    }

    #[test]
    fn laplacian_examples() {
        let t = build_laplacian(3).unwrap();
        let dense = t.to_dense(16).unwrap();
        let expected = [[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]];
        for (i, row) in expected.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                assert_eq!(dense.get(i, j), r(*want));
            }
        }
        let out = dense.matvec(&[r(1.0), r(2.0), r(3.0)]).unwrap();
        assert_eq!(out, vec![r(0.0), r(0.0), r(4.0)]);
        assert!(build_laplacian(1).is_err());
    }

    #[test]
    fn defining_array_round_trip() {
        let t = ToeplitzSpec::new(
            4,
            [(0, c(1.0, 2.0)), (-3, c(0.5, 0.0)), (2, c(0.0, -1.5))],
        )
        .unwrap();
        let back = ToeplitzSpec::from_defining_array(&t.defining_array()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn defining_array_centre_must_vanish() {
        let psi = vec![r(1.0), r(0.0), r(0.5), r(0.0)];
        assert!(matches!(
            ToeplitzSpec::from_defining_array(&psi),
            Err(Error::NonzeroDefiningCentre { index: 2, .. })
        ));
    }

    #[test]
    fn sparsity_of_identity() {
        let t = ToeplitzSpec::new(4, [(0, r(1.0))]).unwrap();
        let report = sparsity_report(&t, Some(0.0));
        assert_eq!(report.nnz_time, 1);
        assert_eq!(report.nnz_freq, 8);
        assert!((report.density_time - 1.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn sparsity_of_zero_matrix() {
        let t = ToeplitzSpec::new(4, []).unwrap();
        let report = sparsity_report(&t, None);
        assert_eq!(report.nnz_time, 0);
        assert_eq!(report.nnz_freq, 0);
    }

    #[test]
    fn frequency_sparse_construction() {
        // The sparsest spectrum a defining array admits has two nonzeros: the
        // centre entry of the array is pinned to zero, which forces the
        // alternating-sign sum of the spectrum to vanish. idft of
        // (1, 1, 0, ...) satisfies that with every other array entry nonzero.
        let n = 8usize;
        let mut spectrum = vec![r(0.0); 2 * n];
        spectrum[0] = r(1.0);
        spectrum[1] = r(1.0);
        let psi = idft(&spectrum).unwrap();
        let t = ToeplitzSpec::from_defining_array(&psi).unwrap();
        let report = sparsity_report(&t, None);
        assert_eq!(report.nnz_freq, 2);
        assert_eq!(report.nnz_time, 2 * n - 1);
    }

    #[test]
    fn circulant_as_toeplitz_matches_dense() {
        let circ = CirculantSpec::new(vec![c(1.0, 1.0), r(2.0), c(0.0, -1.0), r(0.5)]).unwrap();
        let t = circ.as_toeplitz();
        assert_eq!(t.to_dense(16).unwrap(), circ.to_dense(16).unwrap());
    }

    #[test]
    fn offsets_outside_band_are_rejected()  {
        assert!(matches!(
            ToeplitzSpec::new(2, [(2, r(1.0))]),
            Err(Error::OffsetOutOfRange { offset: 2, .. })
        ));
        assert!(matches!(
            HankelSpec::new(3, [(-3, r(1.0))]),
            Err(Error::OffsetOutOfRange { offset: -3, .. })
        ));
    }
}
