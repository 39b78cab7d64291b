//! Sampled continuous frames `ω_j ↦ F(ω_j) ∈ ℂ^d` over a finite measure space.
//!
//! Analysis coefficients are the raw samples `⟨f, F(ω_j)⟩`; the measure
//! enters only through integration (synthesis, frame operator, norms in
//! `L²(μ)`).

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{self, Operator, Vector};
use crate::measure::{self, MeasureSpace, Symbol};

/// A frame counts as a frame when `A > IS_FRAME_RTOL · max(B, 1)`.
pub const IS_FRAME_RTOL: f64 = 1e-12;

/// Relative singular-value cutoff for the Riesz-type rank test.
pub const RIESZ_RANK_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrameData", into = "FrameData")]
pub struct SampledFrame {
    space: MeasureSpace,
    vectors: DMatrix<Complex64>,
}

/// JSON layout: `re[j]` / `im[j]` hold column `j`, in the order of the
/// space's points.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct FrameData {
    space: MeasureSpace,
    d: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl TryFrom<FrameData> for SampledFrame {
    type Error = Error;

    fn try_from(data: FrameData) -> Result<Self> {
        let n = data.space.len();
        if data.re.len() != n || data.im.len() != n {
            return Err(Error::shape(format!("frame JSON must carry {n} columns")));
        }
        let mut m = DMatrix::zeros(data.d, n);
        for j in 0..n {
            if data.re[j].len() != data.d || data.im[j].len() != data.d {
                return Err(Error::shape(format!("frame column {j} must have {} entries", data.d)));
            }
            for t in 0..data.d {
                m[(t, j)] = Complex64::new(data.re[j][t], data.im[j][t]);
            }
        }
        SampledFrame::new(data.space, m)
    }
}

impl From<SampledFrame> for FrameData {
    fn from(f: SampledFrame) -> Self {
        let (d, n) = f.vectors.shape();
        FrameData {
            d,
            re: (0..n).map(|j| (0..d).map(|t| f.vectors[(t, j)].re).collect()).collect(),
            im: (0..n).map(|j| (0..d).map(|t| f.vectors[(t, j)].im).collect()).collect(),
            space: f.space,
        }
    }
}

/// Optimal frame bounds: the extreme eigenvalues of the frame operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub is_frame: bool,
}

impl SampledFrame {
    /// `vectors` is `d × N`; column `j` is `F(ω_j)`.
    pub fn new(space: MeasureSpace, vectors: DMatrix<Complex64>) -> Result<Self> {
        if vectors.ncols() != space.len() {
            return Err(Error::shape(format!("{} columns for a space of {} points", vectors.ncols(), space.len())));
        }
        if vectors.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidInput("frame entries must be finite".into()));
        }
        Ok(SampledFrame { space, vectors })
    }

    pub fn from_columns(space: MeasureSpace, d: usize, columns: &[Vector]) -> Result<Self> {
        if columns.iter().any(|c| c.dim() != d) {
            return Err(Error::shape(format!("all columns must have dimension {d}")));
        }
        let m = DMatrix::from_fn(d, columns.len(), |t, j| columns[j].as_slice()[t]);
        Self::new(space, m)
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn vectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn len(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.ncols() == 0
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::from_dvector(self.vectors.column(j).into_owned())
    }

    pub fn column_norm(&self, j: usize) -> f64 {
        self.vectors.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn check_compatible(&self, other: &SampledFrame) -> Result<()> {
        if self.space.id() != other.space.id() || self.len() != other.len() {
            return Err(Error::shape("frames live on different measure spaces"));
        }
        if self.dim() != other.dim() {
            return Err(Error::shape(format!("frames have dimensions {} and {}", self.dim(), other.dim())));
        }
        Ok(())
    }

    /// Columns `c_j · F_j`.
    pub fn scale_columns(&self, factors: &Symbol) -> Result<SampledFrame> {
        factors.check_space(&self.space)?;
        let mut m = self.vectors.clone();
        for (j, c) in factors.values().iter().enumerate() {
            m.column_mut(j).iter_mut().for_each(|z| *z *= *c);
        }
        Ok(SampledFrame { space: self.space.clone(), vectors: m })
    }

    /// Columns `T · F_j`.
    pub fn map_columns(&self, t: &Operator) -> Result<SampledFrame> {
        if t.dim() != self.dim() {
            return Err(Error::shape("operator and frame dimensions differ"));
        }
        Ok(SampledFrame { space: self.space.clone(), vectors: t.matrix() * &self.vectors })
    }

    pub fn add(&self, other: &SampledFrame) -> Result<SampledFrame> {
        self.check_compatible(other)?;
        Ok(SampledFrame { space: self.space.clone(), vectors: &self.vectors + &other.vectors })
    }

    pub fn sub(&self, other: &SampledFrame) -> Result<SampledFrame> {
        self.check_compatible(other)?;
        Ok(SampledFrame { space: self.space.clone(), vectors: &self.vectors - &other.vectors })
    }

    pub fn scale(&self, c: Complex64) -> SampledFrame {
        SampledFrame { space: self.space.clone(), vectors: &self.vectors * c }
    }

    /// `sup_j ‖F_j − G_j‖`.
    pub fn uniform_distance(&self, other: &SampledFrame) -> Result<f64> {
        Ok(self.sub(other)?.norm_bound())
    }

    /// `c_j = ⟨f, F(ω_j)⟩`.
    pub fn analysis(&self, f: &Vector) -> Result<Vec<Complex64>> {
        analysis(self, f)
    }

    /// `Σ_j w_j c_j F(ω_j)`.
    pub fn synthesis(&self, c: &[Complex64]) -> Result<Vector> {
        synthesis(self, c)
    }

    pub fn frame_operator(&self) -> Operator {
        frame_operator(self)
    }

    pub fn frame_bounds(&self) -> Result<FrameBounds> {
        frame_bounds(self)
    }

    pub fn norm_bound(&self) -> f64 {
        norm_bound(self)
    }
}

pub fn analysis(frame: &SampledFrame, f: &Vector) -> Result<Vec<Complex64>> {
    if f.dim() != frame.dim() {
        return Err(Error::shape(format!("vector dimension {} vs frame dimension {}", f.dim(), frame.dim())));
    }
    // (F^* f)_j = Σ_t conj(F_tj) f_t
    Ok(frame.vectors.ad_mul(f.as_dvector()).iter().copied().collect())
}

pub fn synthesis(frame: &SampledFrame, c: &[Complex64]) -> Result<Vector> {
    if c.len() != frame.len() {
        return Err(Error::shape(format!("{} coefficients for {} frame elements", c.len(), frame.len())));
    }
    let weights = frame.space.weights();
    let mut out = nalgebra::DVector::zeros(frame.dim());
    for (j, cj) in c.iter().enumerate() {
        out.axpy(*cj * weights[j], &frame.vectors.column(j), Complex64::new(1.0, 0.0));
    }
    Ok(Vector::from_dvector(out))
}

/// Columns scaled by the point masses: `w_j · F_j`.
pub(crate) fn weighted_columns(frame: &SampledFrame) -> DMatrix<Complex64> {
    let mut m = frame.vectors.clone();
    for (j, w) in frame.space.weights().iter().enumerate() {
        m.column_mut(j).iter_mut().for_each(|z| *z *= *w);
    }
    m
}

/// `S = Σ_j w_j F_j F_j^*`.
pub fn frame_operator(frame: &SampledFrame) -> Operator {
    let wf = weighted_columns(frame);
    Operator::from_matrix_unchecked(wf * frame.vectors.adjoint())
}

pub fn frame_bounds(frame: &SampledFrame) -> Result<FrameBounds> {
    let (lo, hi) = hilbert::hermitian_bounds(&frame_operator(frame).hermitian_part())?;
    let upper = hi.max(0.0);
    let lower = lo.clamp(0.0, upper);
    Ok(FrameBounds { lower, upper, is_frame: lower > IS_FRAME_RTOL * upper.max(1.0) })
}

/// `max_j ‖F(ω_j)‖`.
pub fn norm_bound(frame: &SampledFrame) -> f64 {
    (0..frame.len()).map(|j| frame.column_norm(j)).fold(0.0, f64::max)
}

/// Columns `S_F^{-1} F(ω_j)`.
pub fn canonical_dual(frame: &SampledFrame) -> Result<SampledFrame> {
    let bounds = frame_bounds(frame)?;
    if !bounds.is_frame {
        return Err(Error::NotAFrame { lower: bounds.lower });
    }
    let s_inv = hilbert::invert(&frame_operator(frame))?;
    frame.map_columns(&s_inv)
}

/// `‖Σ_j w_j G_j F_j^* − I‖` in operator norm.
pub fn dual_residual(f: &SampledFrame, g: &SampledFrame) -> Result<f64> {
    f.check_compatible(g)?;
    let mixed = Operator::from_matrix_unchecked(weighted_columns(g) * f.vectors.adjoint());
    hilbert::operator_norm(&mixed.sub(&Operator::identity(f.dim()))?)
}

pub fn is_dual_pair(f: &SampledFrame, g: &SampledFrame, tol: f64) -> Result<bool> {
    Ok(dual_residual(f, g)? <= tol)
}

/// True when the analysis operator maps onto all of `L²(μ)`, i.e. the
/// `d × N` column matrix has numerical rank `N` at relative cutoff `rtol`.
pub fn is_riesz_type(frame: &SampledFrame, rtol: f64) -> Result<bool> {
    let bounds = frame_bounds(frame)?;
    if !bounds.is_frame {
        return Err(Error::NotAFrame { lower: bounds.lower });
    }
    if frame.len() > frame.dim() {
        return Ok(false);
    }
    let spectrum = hilbert::matrix_singular_values(&frame.vectors)?;
    Ok(spectrum.numerical_rank(rtol) == frame.len())
}

/// Constant `e_i / √μ(Ω_i)` on the `i`-th block of a `k`-part partition;
/// a Parseval frame for `ℂ^k`.
pub fn tight_from_partition(space: &MeasureSpace, k: usize) -> Result<SampledFrame> {
    let parts = measure::partition(space, k)?;
    let mut m = DMatrix::zeros(k, space.len());
    for (i, part) in parts.iter().enumerate() {
        let scale = 1.0 / space.mass_of(part).sqrt();
        for &j in part {
            m[(i, j)] = Complex64::new(scale, 0.0);
        }
    }
    SampledFrame::new(space.clone(), m)
}

/// `b(x) = |x|^{-1/2}` on `0 < |x| < 1`, `|x|^{-2}` on `|x| ≥ 1`, `0` at the origin.
pub fn unbounded_profile(x: f64) -> f64 {
    let ax = x.abs();
    if ax == 0.0 {
        0.0
    } else if ax < 1.0 {
        1.0 / ax.sqrt()
    } else {
        1.0 / (ax * ax)
    }
}

/// `F(x) = a(x) · h` with `a = √b`: a Bessel map with `‖a‖²_{L²}` finite
/// whose norms blow up near the origin. Uses the first coordinate of each point.
pub fn scaled_singleton(space: &MeasureSpace, h: &Vector) -> Result<SampledFrame> {
    if h.norm() == 0.0 {
        return Err(Error::InvalidInput("the generating vector must be nonzero".into()));
    }
    if space.points().first().is_none_or(|p| p.is_empty()) {
        return Err(Error::InvalidDomain("scaled_singleton needs a space with coordinates".into()));
    }
    let d = h.dim();
    let mut m = DMatrix::zeros(d, space.len());
    for (j, p) in space.points().iter().enumerate() {
        let a = unbounded_profile(p[0]).sqrt();
        m.column_mut(j).copy_from(&(h.as_dvector() * Complex64::new(a, 0.0)));
    }
    SampledFrame::new(space.clone(), m)
}

/// Columns `G_j + ε F_j`.
pub fn perturb(g: &SampledFrame, f: &SampledFrame, eps: f64) -> Result<SampledFrame> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("perturbation size must be positive, got {eps}")));
    }
    g.add(&f.scale(Complex64::new(eps, 0.0)))
}

/// Columns `√m_j · F_j` for a nonnegative real weight function `m`.
pub fn weighted(frame: &SampledFrame, m: &Symbol) -> Result<SampledFrame> {
    m.check_space(frame.space())?;
    if !m.is_nonnegative_real() {
        return Err(Error::InvalidSymbol("weights must be real and nonnegative".into()));
    }
    let roots = Symbol::new(frame.space(), m.values().iter().map(|v| Complex64::new(v.re.sqrt(), 0.0)).collect())?;
    frame.scale_columns(&roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{counting_space, uniform_grid_1d};
    use crate::random::{random_frame, random_space, random_vector, rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn standard_basis_frame(d: usize) -> SampledFrame {
        SampledFrame::new(counting_space(d).unwrap(), DMatrix::identity(d, d)).unwrap()
    }

    #[test]
    fn analysis_with_standard_basis_returns_entries() {
        let f = standard_basis_frame(3);
        let v = Vector::new(vec![c(1.0, 2.0), c(-1.0, 0.5), c(0.0, -3.0)]).unwrap();
        assert_eq!(analysis(&f, &v).unwrap(), v.as_slice().to_vec());
        assert!(analysis(&f, &Vector::zeros(3)).unwrap().iter().all(|z| *z == c(0.0, 0.0)));
        assert!(matches!(analysis(&f, &Vector::zeros(2)), Err(Error::Shape(_))));
    }

    #[test]
    fn synthesis_of_indicator_is_a_column() {
        let mut r = rng(1);
        let space = counting_space(5).unwrap();
        let f = random_frame(&mut r, &space, 3);
        let mut coeffs = vec![c(0.0, 0.0); 5];
        coeffs[2] = c(1.0, 0.0);
        assert_eq!(synthesis(&f, &coeffs).unwrap(), f.column(2));
        assert_eq!(synthesis(&f, &[c(0.0, 0.0); 5]).unwrap(), Vector::zeros(3));
        assert!(matches!(synthesis(&f, &coeffs[..4]), Err(Error::Shape(_))));
    }

    #[test]
    fn synthesis_matches_weak_form() {
        let mut r = rng(2);
        let space = random_space(&mut r, 12);
        let f = random_frame(&mut r, &space, 4);
        let coeffs: Vec<Complex64> = (0..12).map(|_| crate::random::complex_normal(&mut r)).collect();
        let h = random_vector(&mut r, 4);
        let lhs = hilbert::inner(&synthesis(&f, &coeffs).unwrap(), &h).unwrap();
        let samples: Vec<Complex64> = (0..12).map(|j| coeffs[j] * hilbert::inner(&f.column(j), &h).unwrap()).collect();
        let rhs = space.integrate(&samples).unwrap();
        assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn orthonormal_columns_give_identity() {
        let s = frame_operator(&standard_basis_frame(4));
        assert_eq!(s, Operator::identity(4));
    }

    #[test]
    fn partition_frame_is_parseval() {
        // two parts of mass 1/2 each, F = e_k / √(1/2) on part k
        let space = uniform_grid_1d(0.0, 1.0, 2).unwrap();
        let f = tight_from_partition(&space, 2).unwrap();
        let s = frame_operator(&f);
        assert!(s.sub(&Operator::identity(2)).unwrap().max_abs_entry() < 1e-15);
        let b = frame_bounds(&f).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);

        let space = counting_space(4).unwrap();
        let f = tight_from_partition(&space, 2).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let want = DMatrix::from_row_slice(
            2,
            4,
            &[c(r, 0.0), c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0), c(r, 0.0)],
        );
        assert!((f.vectors() - want).iter().all(|z| z.norm() < 1e-15));
        assert!(frame_operator(&f).sub(&Operator::identity(2)).unwrap().max_abs_entry() < 1e-15);
    }

    #[test]
    fn singleton_partition_scales_by_inverse_root_weight() {
        let mut r = rng(3);
        let space = random_space(&mut r, 5);
        let f = tight_from_partition(&space, 5).unwrap();
        for j in 0..5 {
            assert!((f.column_norm(j) - 1.0 / space.weights()[j].sqrt()).abs() < 1e-14);
        }
        assert!(frame_operator(&f).sub(&Operator::identity(5)).unwrap().max_abs_entry() < 1e-14);
        assert!(matches!(tight_from_partition(&space, 6), Err(Error::InfeasiblePartition { .. })));
    }

    #[test]
    fn zero_column_does_not_change_bounds() {
        let mut r = rng(4);
        let space = counting_space(6).unwrap();
        let f = random_frame(&mut r, &space, 3);
        let before = frame_bounds(&f).unwrap();
        let mut padded = f.vectors().clone().insert_column(6, c(0.0, 0.0));
        padded.column_mut(6).fill(c(0.0, 0.0));
        let g = SampledFrame::new(counting_space(7).unwrap(), padded).unwrap();
        let after = frame_bounds(&g).unwrap();
        assert!((before.lower - after.lower).abs() < 1e-12 * before.upper);
        assert!((before.upper - after.upper).abs() < 1e-12 * before.upper);
    }

    #[test]
    fn gaussian_frames_have_positive_lower_bound() {
        let space = counting_space(8).unwrap();
        for seed in 0..100 {
            let mut r = rng(seed);
            let f = random_frame(&mut r, &space, 4);
            let b = frame_bounds(&f).unwrap();
            assert!(b.is_frame && b.lower > 0.0 && b.lower <= b.upper);
        }
    }

    #[test]
    fn norm_bound_examples() {
        assert_eq!(norm_bound(&standard_basis_frame(3)), 1.0);
        let mut r = rng(5);
        let f = random_frame(&mut r, &counting_space(9).unwrap(), 3);
        let sum_sq: f64 = (0..9).map(|j| f.column_norm(j).powi(2)).sum();
        assert!(norm_bound(&f).powi(2) <= sum_sq);
    }

    #[test]
    fn canonical_dual_examples() {
        // tight frame with bound 3: dual = F / 3
        let space = counting_space(4).unwrap();
        let f = tight_from_partition(&space, 2).unwrap().scale(c(3f64.sqrt(), 0.0));
        let dual = canonical_dual(&f).unwrap();
        let want = f.scale(c(1.0 / 3.0, 0.0));
        assert!((dual.vectors() - want.vectors()).iter().all(|z| z.norm() < 1e-14));

        let mut r = rng(6);
        let space = random_space(&mut r, 10);
        let f = random_frame(&mut r, &space, 4);
        let dual = canonical_dual(&f).unwrap();
        assert!(is_dual_pair(&f, &dual, 1e-10).unwrap());
        let fb = frame_bounds(&f).unwrap();
        let db = frame_bounds(&dual).unwrap();
        assert!((db.lower - 1.0 / fb.upper).abs() <= 1e-10 * db.upper);
        assert!((db.upper - 1.0 / fb.lower).abs() <= 1e-10 * db.upper);

        let degenerate = SampledFrame::new(counting_space(2).unwrap(), DMatrix::zeros(2, 2)).unwrap();
        assert!(matches!(canonical_dual(&degenerate), Err(Error::NotAFrame { .. })));
    }

    #[test]
    fn dual_pair_examples() {
        let f = standard_basis_frame(3);
        assert!(is_dual_pair(&f, &f, 1e-12).unwrap());
        let twice = f.scale(c(2.0, 0.0));
        assert!(!is_dual_pair(&f, &twice, 1e-6).unwrap());
        let other = random_frame(&mut rng(1), &counting_space(4).unwrap(), 3);
        assert!(matches!(is_dual_pair(&f, &other, 1e-6), Err(Error::Shape(_))));
    }

    #[test]
    fn riesz_type_examples() {
        let independent = SampledFrame::new(
            counting_space(2).unwrap(),
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
        )
        .unwrap();
        assert!(is_riesz_type(&independent, RIESZ_RANK_RTOL).unwrap());
        let redundant = random_frame(&mut rng(2), &counting_space(3).unwrap(), 2);
        assert!(!is_riesz_type(&redundant, RIESZ_RANK_RTOL).unwrap());
        for seed in 0..50 {
            let mut r = rng(seed);
            let space = random_space(&mut r, 5);
            let f = random_frame(&mut r, &space, 5);
            assert!(is_riesz_type(&f, RIESZ_RANK_RTOL).unwrap());
        }
        let zero = SampledFrame::new(counting_space(2).unwrap(), DMatrix::zeros(2, 2)).unwrap();
        assert!(matches!(is_riesz_type(&zero, RIESZ_RANK_RTOL), Err(Error::NotAFrame { .. })));
    }

    #[test]
    fn scaled_singleton_is_rank_one_bessel() {
        let space = uniform_grid_1d(-2.0, 2.0, 400).unwrap();
        let h = Vector::new(vec![c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 0.5)]).unwrap();
        let f = scaled_singleton(&space, &h).unwrap();
        let s = frame_operator(&f);
        let spec = hilbert::singular_values(&s).unwrap();
        assert_eq!(spec.numerical_rank(1e-10), 1);
        let a_sq: Vec<f64> = space.points().iter().map(|p| unbounded_profile(p[0])).collect();
        let budget = h.norm().powi(2) * space.integrate_real(&a_sq).unwrap();
        assert!(frame_bounds(&f).unwrap().upper <= budget * (1.0 + 1e-12));
        assert!(matches!(scaled_singleton(&space, &Vector::zeros(3)), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn unbounded_profile_branches() {
        assert_eq!(unbounded_profile(0.0), 0.0);
        assert_eq!(unbounded_profile(0.25), 2.0);
        assert_eq!(unbounded_profile(-0.25), 2.0);
        assert_eq!(unbounded_profile(2.0), 0.25);
        assert_eq!(unbounded_profile(1.0), 1.0);
    }

    #[test]
    fn perturb_examples() {
        let mut r = rng(7);
        let space = counting_space(6).unwrap();
        let g = random_frame(&mut r, &space, 3);
        let zero = SampledFrame::new(space.clone(), DMatrix::zeros(3, 6)).unwrap();
        assert_eq!(perturb(&g, &zero, 0.3).unwrap(), g);
        assert!(perturb(&g, &zero, 0.0).is_err());

        let f = random_frame(&mut r, &space, 3);
        let gb = frame_bounds(&g).unwrap();
        let fb = frame_bounds(&f).unwrap();
        let eps = 0.5 * (gb.lower / fb.upper).sqrt();
        let p = frame_bounds(&perturb(&g, &f, eps).unwrap()).unwrap();
        let floor = (gb.lower.sqrt() - eps * fb.upper.sqrt()).powi(2);
        assert!(p.lower >= floor * (1.0 - 1e-12));
        assert!(p.upper <= 2.0 * (gb.upper + eps * eps * fb.upper) * (1.0 + 1e-12));
    }

    #[test]
    fn weighted_examples() {
        let mut r = rng(8);
        let space = random_space(&mut r, 7);
        let f = random_frame(&mut r, &space, 3);
        let ones = Symbol::ones(&space);
        assert_eq!(weighted(&f, &ones).unwrap(), f);
        let fours = Symbol::constant(&space, c(4.0, 0.0)).unwrap();
        let b = frame_bounds(&f).unwrap();
        let b4 = frame_bounds(&weighted(&f, &fours).unwrap()).unwrap();
        assert!((b4.lower - 4.0 * b.lower).abs() <= 1e-12 * b4.upper);
        assert!((b4.upper - 4.0 * b.upper).abs() <= 1e-12 * b4.upper);
        let neg = Symbol::constant(&space, c(-1.0, 0.0)).unwrap();
        assert!(matches!(weighted(&f, &neg), Err(Error::InvalidSymbol(_))));
        let cplx = Symbol::constant(&space, c(1.0, 1.0)).unwrap();
        assert!(matches!(weighted(&f, &cplx), Err(Error::InvalidSymbol(_))));
    }

    #[test]
    fn frame_json_shape() {
        let space = counting_space(2).unwrap();
        let f = SampledFrame::new(space, DMatrix::from_row_slice(1, 2, &[c(1.0, -1.0), c(2.0, 0.5)])).unwrap();
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["d"], 1);
        assert_eq!(v["re"], serde_json::json!([[1.0], [2.0]]));
        assert_eq!(v["im"], serde_json::json!([[-1.0], [0.5]]));
        let back: SampledFrame = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
    }
}
