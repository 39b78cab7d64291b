//! Finite weighted point sets standing in for a measure space `(Ω, μ)`.
//!
//! Every integral over `Ω` becomes a weighted sum `Σ_j w_j · s_j`. The
//! constructors below discretize the measures used by the concrete frame
//! families (Lebesgue on an interval or rectangle, `da db / a²` on the
//! positive-scale half plane, counting measure) with midpoint rules.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identity token of a [`MeasureSpace`], derived from its contents.
///
/// Two spaces built from the same points and weights share an id, so a
/// symbol deserialized against a rebuilt space still binds to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceId(u64);

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "MeasureSpaceData", into = "MeasureSpaceData")]
pub struct MeasureSpace {
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
    id: SpaceId,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MeasureSpaceData {
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl TryFrom<MeasureSpaceData> for MeasureSpace {
    type Error = Error;

    fn try_from(data: MeasureSpaceData) -> Result<Self> {
        MeasureSpace::new(data.points, data.weights)
    }
}

impl From<MeasureSpace> for MeasureSpaceData {
    fn from(space: MeasureSpace) -> Self {
        MeasureSpaceData { points: space.points, weights: space.weights }
    }
}

impl PartialEq for MeasureSpace {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.points == other.points && self.weights == other.weights
    }
}

impl MeasureSpace {
    /// Builds a space from explicit points and masses.
    ///
    /// Requires at least one point, one coordinate tuple per weight, a common
    /// arity, finite coordinates and strictly positive finite weights.
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDomain("a measure space needs at least one point".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::shape(format!("{} points but {} weights", points.len(), weights.len())));
        }
        let arity = points[0].len();
        if points.iter().any(|p| p.len() != arity) {
            return Err(Error::InvalidDomain("points must share one arity".into()));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidDomain("point coordinates must be finite".into()));
        }
        if let Some((j, w)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidDomain(format!("weight {j} is {w}; weights must be positive and finite")));
        }
        let total: f64 = weights.iter().sum();
        if !total.is_finite() {
            return Err(Error::InvalidDomain("total mass is not finite".into()));
        }
        let id = content_id(&points, &weights);
        Ok(MeasureSpace { points, weights, id })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn id(&self) -> SpaceId {
        self.id
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Mass of an index subset.
    pub fn mass_of(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&j| self.weights[j]).sum()
    }

    /// `Σ_j w_j · samples_j`.
    pub fn integrate(&self, samples: &[Complex64]) -> Result<Complex64> {
        integrate(self, samples)
    }

    pub fn integrate_real(&self, samples: &[f64]) -> Result<f64> {
        if samples.len() != self.len() {
            return Err(Error::shape(format!("{} samples on a space of {} points", samples.len(), self.len())));
        }
        Ok(self.weights.iter().zip(samples).map(|(w, s)| w * s).sum())
    }

    pub fn partition(&self, k: usize) -> Result<Vec<Vec<usize>>> {
        partition(self, k)
    }
}

fn content_id(points: &[Vec<f64>], weights: &[f64]) -> SpaceId {
    let mut h = DefaultHasher::new();
    weights.len().hash(&mut h);
    for p in points {
        p.len().hash(&mut h);
        for x in p {
            x.to_bits().hash(&mut h);
        }
    }
    for w in weights {
        w.to_bits().hash(&mut h);
    }
    SpaceId(h.finish())
}

fn check_interval(a: f64, b: f64, what: &str) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidDomain(format!("{what}: need a < b, got [{a}, {b}]")));
    }
    Ok(())
}

fn check_count(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDomain(format!("{what}: need at least one cell")));
    }
    Ok(())
}

fn midpoints(a: f64, b: f64, n: usize) -> (Vec<f64>, f64) {
    let h = (b - a) / n as f64;
    ((0..n).map(|j| a + (j as f64 + 0.5) * h).collect(), h)
}

/// Geometric midpoints and widths of `n` log-uniform cells on `[a, b]`, `a > 0`.
fn log_cells(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let ratio = (b / a).ln() / n as f64;
    (0..n)
        .map(|i| {
            let lo = a * (ratio * i as f64).exp();
            let hi = if i + 1 == n { b } else { a * (ratio * (i + 1) as f64).exp() };
            ((lo * hi).sqrt(), hi - lo)
        })
        .collect()
}

/// Midpoint rule for Lebesgue measure on `[a, b]`.
pub fn uniform_grid_1d(a: f64, b: f64, n: usize) -> Result<MeasureSpace> {
    check_interval(a, b, "uniform_grid_1d")?;
    check_count(n, "uniform_grid_1d")?;
    let (xs, h) = midpoints(a, b, n);
    MeasureSpace::new(xs.into_iter().map(|x| vec![x]).collect(), vec![h; n])
}

/// Tensor midpoint grid for Lebesgue measure on a rectangle, x-major ordering.
pub fn product_grid_2d(ax: f64, bx: f64, nx: usize, ay: f64, by: f64, ny: usize) -> Result<MeasureSpace> {
    check_interval(ax, bx, "product_grid_2d x-axis")?;
    check_interval(ay, by, "product_grid_2d y-axis")?;
    check_count(nx, "product_grid_2d x-axis")?;
    check_count(ny, "product_grid_2d y-axis")?;
    let (xs, hx) = midpoints(ax, bx, nx);
    let (ys, hy) = midpoints(ay, by, ny);
    let cell = hx * hy;
    let mut points = Vec::with_capacity(nx * ny);
    for &x in &xs {
        for &y in &ys {
            points.push(vec![x, y]);
        }
    }
    MeasureSpace::new(points, vec![cell; nx * ny])
}

/// Log-uniform cells on `[a, b]` (`a > 0`) with geometric midpoints and
/// Lebesgue widths as weights. Used for frequency-axis quadrature.
pub fn log_grid_1d(a: f64, b: f64, n: usize) -> Result<MeasureSpace> {
    check_interval(a, b, "log_grid_1d")?;
    check_count(n, "log_grid_1d")?;
    if a <= 0.0 {
        return Err(Error::InvalidDomain(format!("log_grid_1d: need a > 0, got {a}")));
    }
    let cells = log_cells(a, b, n);
    MeasureSpace::new(cells.iter().map(|&(x, _)| vec![x]).collect(), cells.iter().map(|&(_, w)| w).collect())
}

/// Positive-scale half plane `{(a, b) : a > 0}` with measure `da db / a²`.
///
/// The scale axis is split log-uniformly; each cell is represented by its
/// geometric midpoint `a_i` and width `Δa_i`. The shift axis uses the
/// midpoint rule with width `Δb`. Points are ordered scale-major.
pub fn wavelet_grid(a_min: f64, a_max: f64, n_a: usize, b_min: f64, b_max: f64, n_b: usize) -> Result<MeasureSpace> {
    if !(a_min > 0.0) {
        return Err(Error::InvalidDomain(format!("wavelet_grid: scales must be positive, got a_min = {a_min}")));
    }
    check_interval(a_min, a_max, "wavelet_grid scale axis")?;
    check_interval(b_min, b_max, "wavelet_grid shift axis")?;
    check_count(n_a, "wavelet_grid scale axis")?;
    check_count(n_b, "wavelet_grid shift axis")?;
    let scales = log_cells(a_min, a_max, n_a);
    let (shifts, db) = midpoints(b_min, b_max, n_b);
    let mut points = Vec::with_capacity(n_a * n_b);
    let mut weights = Vec::with_capacity(n_a * n_b);
    for &(a, da) in &scales {
        for &b in &shifts {
            points.push(vec![a, b]);
            weights.push(da * db / (a * a));
        }
    }
    MeasureSpace::new(points, weights)
}

/// Counting measure on `{0, …, n-1}`.
pub fn counting_space(n: usize) -> Result<MeasureSpace> {
    check_count(n, "counting_space")?;
    MeasureSpace::new((0..n).map(|j| vec![j as f64]).collect(), vec![1.0; n])
}

pub fn integrate(space: &MeasureSpace, samples: &[Complex64]) -> Result<Complex64> {
    if samples.len() != space.len() {
        return Err(Error::shape(format!("{} samples on a space of {} points", samples.len(), space.len())));
    }
    Ok(space.weights.iter().zip(samples).map(|(w, s)| s * *w).sum())
}

/// Validates an exponent `p ∈ [1, ∞]`; `f64::INFINITY` stands for `∞`.
pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!("exponent p = {p} must lie in [1, ∞]")));
    }
    Ok(())
}

/// `L^p(μ)` norm of a symbol; `p = ∞` is the maximum modulus.
pub fn lp_norm(space: &MeasureSpace, m: &Symbol, p: f64) -> Result<f64> {
    check_exponent(p)?;
    m.check_space(space)?;
    if p.is_infinite() {
        return Ok(m.values.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    let sum: f64 = space.weights.iter().zip(&m.values).map(|(w, v)| w * v.norm().powf(p)).sum();
    Ok(sum.powf(1.0 / p))
}

/// Splits `{0, …, N-1}` into `k` contiguous blocks whose sizes differ by at
/// most one; larger blocks come first.
pub fn partition(space: &MeasureSpace, k: usize) -> Result<Vec<Vec<usize>>> {
    let n = space.len();
    if k == 0 || k > n {
        return Err(Error::InfeasiblePartition { parts: k, points: n });
    }
    let base = n / k;
    let extra = n % k;
    let mut parts = Vec::with_capacity(k);
    let mut start = 0;
    for i in 0..k {
        let len = base + usize::from(i < extra);
        parts.push((start..start + len).collect());
        start += len;
    }
    Ok(parts)
}

/// A complex-valued function sampled on the points of one measure space.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    values: Vec<Complex64>,
    space_id: SpaceId,
}

/// JSON form of a [`Symbol`]: `{"re": [...], "im": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolData {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl Symbol {
    pub fn new(space: &MeasureSpace, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::shape(format!("symbol has {} values, space has {} points", values.len(), space.len())));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidSymbol("symbol values must be finite".into()));
        }
        Ok(Symbol { values, space_id: space.id() })
    }

    pub fn from_real(space: &MeasureSpace, values: &[f64]) -> Result<Self> {
        Self::new(space, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn constant(space: &MeasureSpace, c: Complex64) -> Result<Self> {
        Self::new(space, vec![c; space.len()])
    }

    pub fn ones(space: &MeasureSpace) -> Self {
        Symbol { values: vec![Complex64::new(1.0, 0.0); space.len()], space_id: space.id() }
    }

    /// `m(ω_j) = f(point_j)`.
    pub fn from_fn(space: &MeasureSpace, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        Self::new(space, space.points().iter().map(|p| f(p)).collect())
    }

    pub fn from_data(space: &MeasureSpace, data: &SymbolData) -> Result<Self> {
        if data.re.len() != data.im.len() {
            return Err(Error::shape("symbol re/im lengths differ"));
        }
        Self::new(space, data.re.iter().zip(&data.im).map(|(&re, &im)| Complex64::new(re, im)).collect())
    }

    pub fn to_data(&self) -> SymbolData {
        SymbolData { re: self.values.iter().map(|v| v.re).collect(), im: self.values.iter().map(|v| v.im).collect() }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn space_id(&self) -> SpaceId {
        self.space_id
    }

    pub(crate) fn check_space(&self, space: &MeasureSpace) -> Result<()> {
        if self.space_id != space.id() || self.values.len() != space.len() {
            return Err(Error::shape("symbol is bound to a different measure space"));
        }
        Ok(())
    }

    /// Same space, new values; the caller guarantees the length.
    pub(crate) fn with_values(&self, values: Vec<Complex64>) -> Symbol {
        debug_assert_eq!(values.len(), self.values.len());
        Symbol { values, space_id: self.space_id }
    }

    pub fn conj(&self) -> Symbol {
        Symbol { values: self.values.iter().map(|v| v.conj()).collect(), space_id: self.space_id }
    }

    pub fn scale(&self, c: Complex64) -> Symbol {
        Symbol { values: self.values.iter().map(|v| v * c).collect(), space_id: self.space_id }
    }

    fn zip_with(&self, other: &Symbol, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Symbol> {
        if self.space_id != other.space_id {
            return Err(Error::shape("symbols live on different measure spaces"));
        }
        Ok(Symbol {
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect(),
            space_id: self.space_id,
        })
    }

    pub fn add(&self, other: &Symbol) -> Result<Symbol> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Symbol) -> Result<Symbol> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// True when every value is real (exactly zero imaginary part) and nonnegative.
    pub fn is_nonnegative_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0 && v.re >= 0.0)
    }
}
