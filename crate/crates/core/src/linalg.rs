//! Small dense complex-matrix kernel.
//!
//! Only what the simulator needs: circularly-symmetric Gaussian sampling,
//! Haar-distributed unitaries and log-determinants of `I + c·A·A*`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a real matrix from row slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0))).collect();
        Self::from_row_major(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// `self* · other`.
    pub fn adjoint_mul(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "({}x{})* times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.cols, other.cols);
        for k in 0..self.rows {
            for i in 0..self.cols {
                let a = self[(k, i)].conj();
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Largest entry-wise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// One CN(0,1) draw: real and imaginary parts each N(0, 1/2).
pub fn sample_cn<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Matrix of i.i.d. CN(0,1) entries, filled in row-major order.
pub fn sample_gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| sample_cn(rng)).collect();
    ComplexMatrix { rows, cols, data }
}

/// Haar-distributed `dim × dim` unitary.
///
/// Householder QR of a Gaussian matrix, then each column of `Q` is multiplied
/// by the phase of the matching diagonal entry of `R`. Without that correction
/// the result is not Haar distributed.
pub fn sample_haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let gaussian = sample_gaussian_matrix(dim, dim, rng);
    let (mut q, r_diag) = householder_qr(gaussian);
    for (c, d) in r_diag.iter().enumerate() {
        let norm = d.norm();
        let phase = if norm > 0.0 { d / norm } else { Complex64::new(1.0, 0.0) };
        for r in 0..dim {
            q[(r, c)] *= phase;
        }
    }
    q
}

/// Returns `Q` and the diagonal of `R` for a square matrix.
fn householder_qr(mut a: ComplexMatrix) -> (ComplexMatrix, Vec<Complex64>) {
    let n = a.rows;
    let mut reflectors: Vec<Option<Vec<Complex64>>> = Vec::with_capacity(n);
    let mut r_diag = Vec::with_capacity(n);

    for k in 0..n {
        let x: Vec<Complex64> = (k..n).map(|r| a[(r, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let x0 = x[0];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            reflectors.push(None);
            r_diag.push(x0);
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);
        apply_reflector(&mut a, &v, k, k);
        r_diag.push(a[(k, k)]);
        reflectors.push(Some(v));
    }

    let mut q = ComplexMatrix::identity(n);
    for (k, v) in reflectors.iter().enumerate().rev() {
        if let Some(v) = v {
            apply_reflector(&mut q, v, k, 0);
        }
    }
    (q, r_diag)
}

/// `A[k.., c0..] ← (I − 2vv*) A[k.., c0..]`.
fn apply_reflector(a: &mut ComplexMatrix, v: &[Complex64], k: usize, c0: usize) {
    for c in c0..a.cols {
        let dot: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * a[(k + i, c)]).sum();
        for (i, vi) in v.iter().enumerate() {
            a[(k + i, c)] -= vi * dot * 2.0;
        }
    }
}

/// In-place Cholesky `H = L L*` of a Hermitian positive-definite `dim × dim`
/// matrix stored row-major. The lower triangle is overwritten with `L`.
pub(crate) fn cholesky_in_place(h: &mut [Complex64], dim: usize) -> Result<()> {
    for j in 0..dim {
        let mut d = h[j * dim + j].re;
        for k in 0..j {
            d -= h[j * dim + k].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite(j));
        }
        let ljj = d.sqrt();
        h[j * dim + j] = Complex64::new(ljj, 0.0);
        for i in j + 1..dim {
            let mut s = h[i * dim + j];
            for k in 0..j {
                s -= h[i * dim + k] * h[j * dim + k].conj();
            }
            h[i * dim + j] = s / ljj;
        }
    }
    Ok(())
}

/// Log-determinant of a Hermitian positive-definite matrix (destroys input).
pub(crate) fn logdet_hpd_in_place(h: &mut [Complex64], dim: usize) -> Result<f64> {
    cholesky_in_place(h, dim)?;
    Ok((0..dim).map(|j| h[j * dim + j].re.ln()).sum::<f64>() * 2.0)
}

/// Solves `L y = b` for lower-triangular `L` from [`cholesky_in_place`] and
/// returns `‖y‖² = b* H⁻¹ b`.
pub(crate) fn chol_quadratic_form(l: &[Complex64], dim: usize, b: &[Complex64], work: &mut [Complex64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..dim {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * dim + k] * work[k];
        }
        let yi = s / l[i * dim + i].re;
        work[i] = yi;
        acc += yi.norm_sqr();
    }
    acc
}

/// Natural log of `det(I + c·A·A*)`.
///
/// The Hermitian matrix is formed explicitly and factored by Cholesky.
pub fn logdet_id_plus_gram(a: &ComplexMatrix, c: f64) -> Result<f64> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!("gram scale must be finite and >= 0, got {c}")));
    }
    let dim = a.rows;
    let mut h = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            let s: Complex64 = a.row(i).iter().zip(a.row(j)).map(|(x, y)| x * y.conj()).sum();
            h[i * dim + j] = s * c;
            h[j * dim + i] = (s * c).conj();
        }
        h[i * dim + i] += 1.0;
    }
    logdet_hpd_in_place(&mut h, dim)
}
