//! Small dense complex linear algebra.
//!
//! Everything here is sized for the qubit-and-probe problems in this crate
//! (dimensions 2 through 16), so storage is a flat row-major `Vec` and the
//! eigensolver is cyclic Jacobi.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type C64 = Complex64;

const HERMITIAN_TOL: f64 = 1e-12;
const DENSITY_TRACE_TOL: f64 = 1e-12;
const DENSITY_EIGEN_TOL: f64 = 1e-10;
const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub(crate) fn re(v: f64) -> C64 {
    C64::new(v, 0.0)
}

/// A column vector of complex amplitudes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexVector {
    entries: Vec<C64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch("empty vector".into()));
        }
        Ok(Self { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&v| re(v)).collect())
    }

    /// Standard basis vector `e_k` of the given dimension.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dim {dim}");
        let mut entries = vec![C64::default(); dim];
        entries[k] = re(1.0);
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            entries: self.entries.iter().map(|a| a * k).collect(),
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) {
            return Err(Error::RankDeficient(n));
        }
        Ok(self.scale(re(1.0 / n)))
    }

    pub fn is_state(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= 1e-12
    }

    /// `|self><self|`.
    pub fn projector(&self) -> HermitianMatrix {
        let n = self.dim();
        let mut data = Vec::with_capacity(n * n);
        for a in &self.entries {
            for b in &self.entries {
                data.push(a * b.conj());
            }
        }
        HermitianMatrix(ComplexMatrix {
            rows: n,
            cols: n,
            data,
        })
    }

    /// The vector as an `n x 1` matrix.
    pub fn to_column(&self) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.dim(),
            cols: 1,
            data: self.entries.clone(),
        }
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!("{rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&v| re(v)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::default(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = re(1.0);
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::DimensionMismatch("no columns".into()));
        };
        let rows = first.dim();
        if columns.iter().any(|v| v.dim() != rows) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.entries().iter().enumerate() {
                m.data[i * cols + j] = v;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector {
            entries: (0..self.rows).map(|i| self.get(i, j)).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C64::default() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to dim {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let entries = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v.entries[j]).sum())
            .collect();
        Ok(ComplexVector { entries })
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |V^H V - I|` over all entries.
    pub fn isometry_residual(&self) -> f64 {
        let gram = self
            .adjoint()
            .matmul(self)
            .expect("adjoint shapes always agree");
        gram.max_abs_diff(&Self::identity(self.cols))
    }

    pub fn is_isometry(&self) -> bool {
        self.isometry_residual() <= 1e-10
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A square matrix equal to its own adjoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} is not square",
                m.rows, m.cols
            )));
        }
        let dev = m.max_abs_diff(&m.adjoint());
        let scale = m.data.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if dev > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self(m))
    }

    pub fn from_real(n: usize, data: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real(n, n, data)?)
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0.get(i, j)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `<v|A|v>`, real for Hermitian `A`.
    pub fn expectation(&self, v: &ComplexVector) -> f64 {
        let av = self.0.apply(v).expect("expectation dimension mismatch");
        v.inner(&av).re
    }

    /// `U A U^H`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        let m = u.matmul(&self.0)?.matmul(&u.adjoint())?;
        Ok(Self(m).symmetrized())
    }

    /// Checks the density-operator conditions: unit trace, nonnegative spectrum.
    pub fn validate_density(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > DENSITY_TRACE_TOL {
            return Err(Error::NotDensity(format!("trace {tr}")));
        }
        let eig = hermitian_eigen(self)?;
        if let Some(&min) = eig.values.last() {
            if min < -DENSITY_EIGEN_TOL {
                return Err(Error::NotDensity(format!("eigenvalue {min:e}")));
            }
        }
        Ok(())
    }

    /// Averages with the adjoint to scrub rounding asymmetry.
    fn symmetrized(self) -> Self {
        let adj = self.0.adjoint();
        let data = self
            .0
            .data
            .iter()
            .zip(&adj.data)
            .map(|(a, b)| (a + b) * 0.5)
            .collect();
        Self(ComplexMatrix { data, ..self.0 })
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn add(self, rhs: Self) -> HermitianMatrix {
        assert_eq!(self.dim(), rhs.dim(), "hermitian add dimension mismatch");
        let data = self
            .0
            .data
            .iter()
            .zip(&rhs.0.data)
            .map(|(a, b)| a + b)
            .collect();
        HermitianMatrix(ComplexMatrix { data, ..self.0 })
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn sub(self, rhs: Self) -> HermitianMatrix {
        assert_eq!(self.dim(), rhs.dim(), "hermitian sub dimension mismatch");
        let data = self
            .0
            .data
            .iter()
            .zip(&rhs.0.data)
            .map(|(a, b)| a - b)
            .collect();
        HermitianMatrix(ComplexMatrix { data, ..self.0 })
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn mul(self, k: f64) -> HermitianMatrix {
        HermitianMatrix(self.0.scale(re(k)))
    }
}

/// Kronecker product. Entry `(ia*rb + ib, ja*cb + jb)` is `a[ia,ja] * b[ib,jb]`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let x = a.get(ia, ja);
            for ib in 0..b.rows {
                for jb in 0..b.cols {
                    out.set(ia * b.rows + ib, ja * b.cols + jb, x * b.get(ib, jb));
                }
            }
        }
    }
    out
}

pub fn tensor_vectors(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    let mut entries = Vec::with_capacity(a.dim() * b.dim());
    for x in &a.entries {
        for y in &b.entries {
            entries.push(x * y);
        }
    }
    ComplexVector { entries }
}

/// Which tensor factor survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

/// Traces out one factor of a bipartite operator on `C^d1 ⊗ C^d2`.
pub fn partial_trace(
    m: &HermitianMatrix,
    keep: Keep,
    dims: (usize, usize),
) -> Result<HermitianMatrix> {
    let (d1, d2) = dims;
    if d1 == 0 || d2 == 0 || m.dim() != d1 * d2 {
        return Err(Error::DimensionMismatch(format!(
            "operator of dim {} is not {d1}x{d2}",
            m.dim()
        )));
    }
    let n = m.dim();
    let at = |i: usize, j: usize| m.0.data[i * n + j];
    let out = match keep {
        Keep::First => {
            let mut out = ComplexMatrix::zeros(d1, d1);
            for i in 0..d1 {
                for j in 0..d1 {
                    let s = (0..d2).map(|k| at(i * d2 + k, j * d2 + k)).sum();
                    out.set(i, j, s);
                }
            }
            out
        }
        Keep::Second => {
            let mut out = ComplexMatrix::zeros(d2, d2);
            for i in 0..d2 {
                for j in 0..d2 {
                    let s = (0..d1).map(|k| at(k * d2 + i, k * d2 + j)).sum();
                    out.set(i, j, s);
                }
            }
            out
        }
    };
    Ok(HermitianMatrix(out))
}

/// Eigenvalues in descending order with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `a_pq`, then applies
/// a real Givens rotation that zeroes it. Sweeps stop once the off-diagonal
/// Frobenius norm drops below `1e-14` relative to the matrix norm.
pub fn hermitian_eigen(m: &HermitianMatrix) -> Result<Eigen> {
    let n = m.dim();
    let dev = m.0.max_abs_diff(&m.0.adjoint());
    let scale = m.0.data.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if dev > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(dev));
    }

    let mut a = m.0.data.clone();
    let mut v = ComplexMatrix::identity(n).data;
    let fro: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = JACOBI_OFF_TOL * fro.max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off < threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / mag; // e^{i alpha}
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                // U on (p, q): [[c, s], [-s e^{-ia}, c e^{-ia}]]
                let u_qp = -phase.conj() * sn;
                let u_qq = phase.conj() * cs;
                // A <- A U
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * cs + akq * u_qp;
                    a[k * n + q] = akp * sn + akq * u_qq;
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * cs + vkq * u_qp;
                    v[k * n + q] = vkp * sn + vkq * u_qq;
                }
                // A <- U^H A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * cs + aqk * u_qp.conj();
                    a[q * n + k] = apk * sn + aqk * u_qq.conj();
                }
                a[p * n + q] = C64::default();
                a[q * n + p] = C64::default();
                a[p * n + p] = re(a[p * n + p].re);
                a[q * n + q] = re(a[q * n + q].re);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, col, v[row * n + src]);
        }
    }
    Ok(Eigen { values, vectors })
}

/// `tr|A|`, the sum of absolute eigenvalues.
pub fn trace_norm(m: &HermitianMatrix) -> Result<f64> {
    Ok(hermitian_eigen(m)?.values.iter().map(|l| l.abs()).sum())
}

fn xlog2x(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &HermitianMatrix) -> Result<f64> {
    let eig = hermitian_eigen(rho)?;
    let tr: f64 = eig.values.iter().sum();
    if (tr - 1.0).abs() > DENSITY_TRACE_TOL {
        return Err(Error::NotDensity(format!("trace {tr}")));
    }
    if let Some(&min) = eig.values.last() {
        if min < -DENSITY_EIGEN_TOL {
            return Err(Error::NotDensity(format!("eigenvalue {min:e}")));
        }
    }
    let s = -eig.values.iter().map(|&l| xlog2x(l)).sum::<f64>();
    Ok(s.max(0.0))
}

/// `h2(p) = -p log2 p - (1-p) log2 (1-p)`; exactly zero at both endpoints.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    let p = p.clamp(0.0, 1.0);
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-xlog2x(p) - xlog2x(1.0 - p))
}

/// Infallible `h2` for arguments already known to lie in `[0, 1]`.
pub(crate) fn h2(p: f64) -> f64 {
    -xlog2x(p) - xlog2x(1.0 - p)
}
