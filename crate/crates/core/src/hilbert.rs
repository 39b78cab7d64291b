//! The finite-dimensional Hilbert space `ℂ^d` and dense operators on it.
//!
//! The inner product is linear in the first argument and conjugate linear in
//! the second. Decompositions are delegated to nalgebra; their contract here
//! is accuracy, checked by the tests against independent oracles.

use std::fmt::Write as _;
use std::ops::Mul;

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::check_exponent;
use crate::random;

/// Relative cutoff below which an operator counts as singular.
pub const INVERT_RCOND: f64 = 1e-12;

/// Relative tolerance for the Hermitian-input contract.
pub const HERMITIAN_TOL: f64 = 1e-10;

const SVD_MAX_ITER: usize = 100_000;

fn finite(z: &Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// A vector in `ℂ^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(DVector<Complex64>);

impl Vector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if !entries.iter().all(finite) {
            return Err(Error::InvalidInput("vector entries must be finite".into()));
        }
        Ok(Vector(DVector::from_vec(entries)))
    }

    pub(crate) fn from_vec(entries: Vec<Complex64>) -> Self {
        Vector(DVector::from_vec(entries))
    }

    pub fn from_dvector(v: DVector<Complex64>) -> Self {
        Vector(v)
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(d: usize) -> Self {
        Vector(DVector::zeros(d))
    }

    /// Standard basis vector `e_i`.
    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = DVector::zeros(d);
        v[i] = Complex64::new(1.0, 0.0);
        Vector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn as_dvector(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn into_dvector(self) -> DVector<Complex64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Vector {
        Vector(&self.0 * c)
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        check_dims(self.dim(), other.dim())?;
        Ok(Vector(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        check_dims(self.dim(), other.dim())?;
        Ok(Vector(&self.0 - &other.0))
    }

    pub fn normalized(&self) -> Vector {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scale(Complex64::new(1.0 / n, 0.0))
        }
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::shape(format!("dimension {a} vs {b}")));
    }
    Ok(())
}

/// `⟨x, y⟩ = Σ_t x_t · conj(y_t)`.
pub fn inner(x: &Vector, y: &Vector) -> Result<Complex64> {
    check_dims(x.dim(), y.dim())?;
    Ok(x.0.iter().zip(y.0.iter()).map(|(a, b)| a * b.conj()).sum())
}

/// A dense `d × d` operator; rows index outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorData", into = "OperatorData")]
pub struct Operator(DMatrix<Complex64>);

#[derive(Debug, Clone, Serialize, Deserialize)]
struct OperatorData {
    d: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl TryFrom<OperatorData> for Operator {
    type Error = Error;

    fn try_from(data: OperatorData) -> Result<Self> {
        let d = data.d;
        if data.re.len() != d || data.im.len() != d {
            return Err(Error::shape("operator JSON must carry d rows of re and im"));
        }
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            if data.re[i].len() != d || data.im[i].len() != d {
                return Err(Error::shape(format!("operator row {i} must have {d} entries")));
            }
            for j in 0..d {
                m[(i, j)] = Complex64::new(data.re[i][j], data.im[i][j]);
            }
        }
        Operator::from_matrix(m)
    }
}

impl From<Operator> for OperatorData {
    fn from(op: Operator) -> Self {
        let d = op.dim();
        OperatorData {
            d,
            re: (0..d).map(|i| (0..d).map(|j| op.0[(i, j)].re).collect()).collect(),
            im: (0..d).map(|i| (0..d).map(|j| op.0[(i, j)].im).collect()).collect(),
        }
    }
}

impl Operator {
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::shape(format!("operator must be square, got {}×{}", m.nrows(), m.ncols())));
        }
        if !m.iter().all(finite) {
            return Err(Error::InvalidInput("operator entries must be finite".into()));
        }
        Ok(Operator(m))
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.is_square());
        Operator(m)
    }

    pub fn identity(d: usize) -> Self {
        Operator(DMatrix::identity(d, d))
    }

    pub fn zeros(d: usize) -> Self {
        Operator(DMatrix::zeros(d, d))
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        Operator(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn diagonal_real(entries: &[f64]) -> Self {
        let e: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diagonal(&e)
    }

    /// Outer product `x · y*`.
    pub fn outer(x: &Vector, y: &Vector) -> Self {
        Operator(x.as_dvector() * y.as_dvector().adjoint())
    }

    /// Operator whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector]) -> Result<Self> {
        let d = cols.len();
        if cols.iter().any(|c| c.dim() != d) {
            return Err(Error::shape("need d columns of dimension d"));
        }
        Ok(Operator(DMatrix::from_fn(d, d, |i, j| cols[j].as_slice()[i])))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        check_dims(self.dim(), x.dim())?;
        Ok(Vector(&self.0 * x.as_dvector()))
    }

    pub fn adjoint(&self) -> Operator {
        Operator(self.0.adjoint())
    }

    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        check_dims(self.dim(), other.dim())?;
        Ok(Operator(&self.0 * &other.0))
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        check_dims(self.dim(), other.dim())?;
        Ok(Operator(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        check_dims(self.dim(), other.dim())?;
        Ok(Operator(&self.0 - &other.0))
    }

    pub fn scale(&self, c: Complex64) -> Operator {
        Operator(&self.0 * c)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖T − T*‖_F ≤ tol · max(‖T‖_F, tiny)`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let skew = (&self.0 - self.0.adjoint()).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        skew <= tol * self.frobenius_norm().max(f64::MIN_POSITIVE)
    }

    /// Hermitian part `(T + T*) / 2`.
    pub fn hermitian_part(&self) -> Operator {
        Operator((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        Operator(&self.0 * &rhs.0)
    }
}

pub fn adjoint(t: &Operator) -> Operator {
    t.adjoint()
}

/// Nonincreasing singular values of an operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchattenSpectrum {
    pub singular_values: Vec<f64>,
}

impl SchattenSpectrum {
    /// Sorts descending and clamps tiny negative round-off to zero.
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        for v in values.iter_mut() {
            *v = v.max(0.0);
        }
        values.sort_by(|a, b| b.total_cmp(a));
        SchattenSpectrum { singular_values: values }
    }

    pub fn largest(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn smallest(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    /// `(Σ s_n^p)^{1/p}`, or the largest value when `p = ∞`.
    pub fn schatten(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        let top = self.largest();
        if p.is_infinite() || top == 0.0 {
            return Ok(top);
        }
        // scaling by the top value keeps large p from overflowing
        let sum: f64 = self.singular_values.iter().map(|s| (s / top).powf(p)).sum();
        Ok(top * sum.powf(1.0 / p))
    }

    /// Number of values above `rtol · largest`.
    pub fn numerical_rank(&self, rtol: f64) -> usize {
        let cut = rtol * self.largest();
        self.singular_values.iter().filter(|&&s| s > cut).count()
    }

    /// CSV export with header `index,sigma`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,sigma\n");
        for (i, s) in self.singular_values.iter().enumerate() {
            let _ = writeln!(out, "{i},{s:e}");
        }
        out
    }
}

fn svd_of(m: DMatrix<Complex64>, vectors: bool) -> Result<SVD<Complex64, nalgebra::Dyn, nalgebra::Dyn>> {
    SVD::try_new(m, vectors, vectors, f64::EPSILON, SVD_MAX_ITER)
        .ok_or_else(|| Error::NumericFailure("singular value decomposition did not converge".into()))
}

/// Singular values of a rectangular matrix, descending.
pub fn matrix_singular_values(m: &DMatrix<Complex64>) -> Result<SchattenSpectrum> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(SchattenSpectrum { singular_values: vec![] });
    }
    let svd = svd_of(m.clone(), false)?;
    Ok(SchattenSpectrum::from_unsorted(svd.singular_values.iter().copied().collect()))
}

pub fn singular_values(t: &Operator) -> Result<SchattenSpectrum> {
    matrix_singular_values(&t.0)
}

pub fn schatten_norm(t: &Operator, p: f64) -> Result<f64> {
    check_exponent(p)?;
    singular_values(t)?.schatten(p)
}

/// Operator norm (largest singular value).
pub fn operator_norm(t: &Operator) -> Result<f64> {
    Ok(singular_values(t)?.largest())
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors of a
/// Hermitian operator.
pub fn hermitian_eigen(t: &Operator) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    if !t.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::ContractViolation("operator is not Hermitian".into()));
    }
    let h = t.hermitian_part();
    let eig = SymmetricEigen::try_new(h.0, f64::EPSILON, SVD_MAX_ITER)
        .ok_or_else(|| Error::NumericFailure("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(t.dim(), t.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Extreme eigenvalues `(λ_min, λ_max)` of a Hermitian operator.
pub fn hermitian_bounds(t: &Operator) -> Result<(f64, f64)> {
    if t.dim() == 0 {
        return Err(Error::shape("empty operator"));
    }
    let (values, _) = hermitian_eigen(t)?;
    Ok((values[0], values[values.len() - 1]))
}

/// Hermitian to `tol` and `λ_min ≥ −tol · max(1, λ_max)`.
pub fn is_positive(t: &Operator, tol: f64) -> bool {
    if !t.is_hermitian(tol) {
        return false;
    }
    let h = t.hermitian_part();
    match SymmetricEigen::try_new(h.0, f64::EPSILON, SVD_MAX_ITER) {
        Some(eig) => {
            let lo = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            lo >= -tol * hi.max(1.0)
        }
        None => false,
    }
}

/// Inverse through the singular value decomposition.
///
/// Fails when `σ_min ≤ 1e-12 · σ_max`.
pub fn invert(t: &Operator) -> Result<Operator> {
    let d = t.dim();
    if d == 0 {
        return Err(Error::shape("empty operator"));
    }
    let svd = svd_of(t.0.clone(), true)?;
    let s = &svd.singular_values;
    let sigma_max = s.iter().copied().fold(0.0, f64::max);
    let sigma_min = s.iter().copied().fold(f64::INFINITY, f64::min);
    if !(sigma_min > INVERT_RCOND * sigma_max) {
        return Err(Error::NotInvertible { sigma_min, sigma_max });
    }
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V*");
    let mut v_scaled = v_t.adjoint();
    for (j, sj) in s.iter().enumerate() {
        v_scaled.column_mut(j).scale_mut(1.0 / sj);
    }
    Ok(Operator(v_scaled * u.adjoint()))
}

/// `max |G − I|` entrywise for the Gram matrix of `vectors`.
pub fn orthonormality_defect(vectors: &[Vector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, x) in vectors.iter().enumerate() {
        for (j, y) in vectors.iter().enumerate() {
            let g = x.as_dvector().dotc(y.as_dvector()).conj();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// `Σ_n |⟨T e_n, e_n⟩|` over a caller-supplied orthonormal basis.
pub fn trace_abs_over_basis(t: &Operator, onb: &[Vector]) -> Result<f64> {
    let d = t.dim();
    if onb.len() != d || onb.iter().any(|e| e.dim() != d) {
        return Err(Error::ContractViolation(format!("need {d} basis vectors of dimension {d}")));
    }
    let defect = orthonormality_defect(onb);
    if defect > 1e-10 {
        return Err(Error::ContractViolation(format!("basis is not orthonormal (Gram defect {defect:e})")));
    }
    let mut total = 0.0;
    for e in onb {
        total += inner(&t.apply(e)?, e)?.norm();
    }
    Ok(total)
}

/// Orthonormal basis from the QR factorization of a seeded Gaussian matrix.
pub fn random_onb(d: usize, seed: u64) -> Vec<Vector> {
    let mut rng = random::rng(seed);
    let q = random::random_matrix(&mut rng, d, d).qr().q();
    (0..d).map(|j| Vector::from_dvector(q.column(j).into_owned())).collect()
}

/// Unitary operator whose columns form `random_onb(d, seed)`.
pub fn random_unitary(d: usize, seed: u64) -> Operator {
    Operator::from_columns(&random_onb(d, seed)).expect("square by construction")
}
