//! Gabor frames on the cyclic group `ℤ_d` and wavelet frames on a
//! `d`-point periodic grid of `[0, 1)`.
//!
//! The Gabor system uses every pair `(a, b) ∈ ℤ_d × ℤ_d` with mass `1/d`,
//! which makes it exactly tight. Wavelet columns are built in the frequency
//! domain from a Fourier profile `ψ̂` and transformed back with a unitary
//! inverse DFT; the reproducing identity then holds up to scale quadrature.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::SampledFrame;
use crate::hilbert::{self, Vector};
use crate::measure::{self, MeasureSpace, Symbol};

/// `(T_a x)_t = x_{(t − a) mod d}`.
pub fn translate(x: &Vector, a: i64) -> Vector {
    let d = x.dim() as i64;
    let s = x.as_slice();
    Vector::from_vec((0..d).map(|t| s[(t - a).rem_euclid(d) as usize]).collect())
}

/// `(M_b x)_t = e^{2πi b t / d} x_t`.
pub fn modulate(x: &Vector, b: i64) -> Vector {
    let d = x.dim() as i64;
    Vector::from_vec(
        x.as_slice().iter().enumerate().map(|(t, v)| v * phase((b * t as i64).rem_euclid(d.max(1)), d)).collect(),
    )
}

/// `e^{2πi k / d}`.
fn phase(k: i64, d: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WindowSpec {
    /// `g_t = exp(−δ_t² / (2 width²))` with `δ_t` the cyclic distance from 0, in samples.
    Gaussian {
        width: f64,
    },
    Samples {
        re: Vec<f64>,
        im: Vec<f64>,
    },
}

impl WindowSpec {
    pub fn window(&self, d: usize) -> Result<Vector> {
        if d == 0 {
            return Err(Error::InvalidParameter("signal dimension must be positive".into()));
        }
        let g = match self {
            WindowSpec::Gaussian { width } => {
                if !(*width > 0.0 && width.is_finite()) {
                    return Err(Error::InvalidParameter(format!("window width must be positive, got {width}")));
                }
                let vals: Vec<f64> = (0..d)
                    .map(|t| {
                        let delta = t.min(d - t) as f64;
                        (-(delta * delta) / (2.0 * width * width)).exp()
                    })
                    .collect();
                Vector::from_real(&vals)?
            }
            WindowSpec::Samples { re, im } => {
                if re.len() != d || im.len() != d {
                    return Err(Error::shape(format!("window samples must have length {d}")));
                }
                Vector::new(re.iter().zip(im).map(|(r, i)| Complex64::new(*r, *i)).collect())?
            }
        };
        if g.norm() == 0.0 {
            return Err(Error::InvalidInput("window must be nonzero".into()));
        }
        Ok(g)
    }

    pub fn from_vector(g: &Vector) -> Self {
        WindowSpec::Samples {
            re: g.as_slice().iter().map(|z| z.re).collect(),
            im: g.as_slice().iter().map(|z| z.im).collect(),
        }
    }
}

/// All `d²` pairs `(a, b)`, `a`-major, each with mass `1/d`.
pub fn gabor_lattice(d: usize) -> Result<MeasureSpace> {
    if d == 0 {
        return Err(Error::InvalidParameter("signal dimension must be positive".into()));
    }
    let mut points = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            points.push(vec![a as f64, b as f64]);
        }
    }
    MeasureSpace::new(points, vec![1.0 / d as f64; d * d])
}

/// Columns `M_b T_a g` over [`gabor_lattice`].
pub fn gabor_frame(window: &WindowSpec, d: usize) -> Result<SampledFrame> {
    let g = window.window(d)?;
    let space = gabor_lattice(d)?;
    let gs = g.as_slice();
    let di = d as i64;
    let m = DMatrix::from_fn(d, d * d, |t, j| {
        let (a, b) = ((j / d) as i64, (j % d) as i64);
        phase((b * t as i64).rem_euclid(di), di) * gs[(t as i64 - a).rem_euclid(di) as usize]
    });
    SampledFrame::new(space, m)
}

/// `Ψ_g f (a, b) = ⟨f, M_b T_a g⟩` on the Gabor lattice.
pub fn stft(f: &Vector, window: &WindowSpec) -> Result<Symbol> {
    let d = f.dim();
    let g = window.window(d)?;
    let space = gabor_lattice(d)?;
    let (fs, gs) = (f.as_slice(), g.as_slice());
    let di = d as i64;
    let mut values = Vec::with_capacity(d * d);
    for a in 0..di {
        for b in 0..di {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..di {
                let col = phase((b * t).rem_euclid(di), di) * gs[(t - a).rem_euclid(di) as usize];
                acc += fs[t as usize] * col.conj();
            }
            values.push(acc);
        }
    }
    Symbol::new(&space, values)
}

/// `|Σ (1/d) Ψ_{g1} f1 · conj(Ψ_{g2} f2) − ⟨f1, f2⟩⟨g2, g1⟩|`.
pub fn stft_orthogonality_residual(f1: &Vector, f2: &Vector, g1: &Vector, g2: &Vector) -> Result<f64> {
    let d = f1.dim();
    if f2.dim() != d || g1.dim() != d || g2.dim() != d {
        return Err(Error::shape("all four vectors must share one dimension"));
    }
    let s1 = stft(f1, &WindowSpec::from_vector(g1))?;
    let s2 = stft(f2, &WindowSpec::from_vector(g2))?;
    let lhs: Complex64 = s1.values().iter().zip(s2.values()).map(|(x, y)| x * y.conj()).sum::<Complex64>() / d as f64;
    let rhs = hilbert::inner(f1, f2)? * hilbert::inner(g2, g1)?;
    Ok((lhs - rhs).norm())
}

/// Fourier profile `ψ̂` of a wavelet.
#[derive(Clone)]
pub enum WaveletSpec {
    /// `ψ̂(γ) = γ² e^{−γ²}`.
    MexicanHat,
    Custom(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
    /// Values at ascending nonnegative frequencies, evaluated at `|γ|` by
    /// linear interpolation and zero outside the table.
    Sampled {
        gamma: Vec<f64>,
        values: Vec<Complex64>,
    },
}

impl fmt::Debug for WaveletSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WaveletSpec::MexicanHat => f.write_str("MexicanHat"),
            WaveletSpec::Custom(_) => f.write_str("Custom(..)"),
            WaveletSpec::Sampled { gamma, .. } => write!(f, "Sampled({} points)", gamma.len()),
        }
    }
}

impl WaveletSpec {
    pub fn sampled(gamma: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if gamma.len() != values.len() || gamma.len() < 2 {
            return Err(Error::shape("a sampled profile needs at least two matching frequencies and values"));
        }
        if gamma[0] < 0.0 || gamma.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("profile frequencies must be nonnegative and increasing".into()));
        }
        Ok(WaveletSpec::Sampled { gamma, values })
    }

    pub fn profile(&self, gamma: f64) -> Complex64 {
        match self {
            WaveletSpec::MexicanHat => Complex64::new(gamma * gamma * (-gamma * gamma).exp(), 0.0),
            WaveletSpec::Custom(f) => f(gamma),
            WaveletSpec::Sampled { gamma: grid, values } => {
                let x = gamma.abs();
                if x < grid[0] || x > grid[grid.len() - 1] {
                    return Complex64::new(0.0, 0.0);
                }
                let i = grid.partition_point(|g| *g <= x).clamp(1, grid.len() - 1);
                let t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
                values[i - 1] * (1.0 - t) + values[i] * t
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    /// Two-sided `∫ |ψ̂(γ)|² / |γ| dγ`.
    pub c_psi: f64,
    /// Positive half-axis `∫_0^∞ |ψ̂(γ)|² / γ dγ`.
    pub c_plus: f64,
    pub admissible: bool,
}

/// Quadrature of the admissibility integral on a grid of positive
/// frequency magnitudes; the negative half-axis is evaluated at `−γ`.
pub fn admissibility_constant(psi: &WaveletSpec, freq: &MeasureSpace) -> Result<Admissibility> {
    let mut plus = Vec::with_capacity(freq.len());
    let mut minus = Vec::with_capacity(freq.len());
    for p in freq.points() {
        let g = *p.first().ok_or_else(|| Error::InvalidDomain("frequency grid needs coordinates".into()))?;
        if !(g > 0.0) {
            return Err(Error::InvalidDomain(format!("frequency grid must hold positive magnitudes, found {g}")));
        }
        plus.push(psi.profile(g).norm_sqr() / g);
        minus.push(psi.profile(-g).norm_sqr() / g);
    }
    let c_plus = freq.integrate_real(&plus)?;
    let c_psi = c_plus + freq.integrate_real(&minus)?;
    Ok(Admissibility { c_psi, c_plus, admissible: c_psi > 0.0 && c_psi.is_finite() })
}

/// Log grid on `[1e-4, 1e3]` used for reference constants.
pub fn reference_frequency_grid() -> MeasureSpace {
    measure::log_grid_1d(1e-4, 1e3, 8000).expect("fixed grid parameters are valid")
}

/// Signed integer frequency of DFT bin `k`: `k` for `k ≤ d/2`, else `k − d`.
pub fn signed_frequency(k: usize, d: usize) -> f64 {
    if k <= d / 2 {
        k as f64
    } else {
        k as f64 - d as f64
    }
}

fn check_admissible(psi: &WaveletSpec) -> Result<f64> {
    if psi.profile(0.0).norm() > 1e-12 {
        return Err(Error::InvalidInput("wavelet profile must vanish at zero frequency".into()));
    }
    let adm = admissibility_constant(psi, &reference_frequency_grid())?;
    if !adm.admissible {
        return Err(Error::InvalidInput(format!("wavelet is not admissible (C_psi = {:e})", adm.c_psi)));
    }
    Ok(adm.c_plus)
}

struct ColumnBuilder {
    freqs: Vec<f64>,
    ifft: Arc<dyn Fft<f64>>,
    norm: f64,
}

impl ColumnBuilder {
    fn new(d: usize) -> Self {
        ColumnBuilder {
            freqs: (0..d).map(|k| signed_frequency(k, d)).collect(),
            ifft: FftPlanner::new().plan_fft_inverse(d),
            norm: 1.0 / (d as f64).sqrt(),
        }
    }

    /// Time samples of `ψ^{a,b}` from `√a ψ̂(aγ_k) e^{−2πi b γ_k}`.
    fn column(&self, psi: &WaveletSpec, a: f64, b: f64, buf: &mut Vec<Complex64>) {
        buf.clear();
        let root = a.sqrt();
        buf.extend(
            self.freqs.iter().map(|&g| psi.profile(a * g) * root * Complex64::from_polar(1.0, -2.0 * PI * b * g)),
        );
        self.ifft.process(buf);
        buf.iter_mut().for_each(|z| *z *= self.norm);
    }
}

fn scale_shift(point: &[f64]) -> Result<(f64, f64)> {
    match point {
        [a, b] if *a > 0.0 => Ok((*a, *b)),
        _ => Err(Error::InvalidDomain("wavelet grid points must be (a, b) pairs with a > 0".into())),
    }
}

/// Columns `ψ^{a,b}` over a scale-shift grid, weights taken from the grid.
pub fn wavelet_frame(psi: &WaveletSpec, grid: &MeasureSpace, d: usize) -> Result<SampledFrame> {
    if d == 0 {
        return Err(Error::InvalidParameter("signal dimension must be positive".into()));
    }
    check_admissible(psi)?;
    let builder = ColumnBuilder::new(d);
    let mut m = DMatrix::zeros(d, grid.len());
    let mut buf = Vec::with_capacity(d);
    for (j, p) in grid.points().iter().enumerate() {
        let (a, b) = scale_shift(p)?;
        builder.column(psi, a, b, &mut buf);
        m.column_mut(j).copy_from_slice(&buf);
    }
    SampledFrame::new(grid.clone(), m)
}

/// Parameters of a [`measure::wavelet_grid`] on the unit shift period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveletGridSpec {
    pub a_min: f64,
    pub a_max: f64,
    pub n_a: usize,
    pub n_b: usize,
}

impl WaveletGridSpec {
    /// `a ∈ [2⁻⁶, 2²]` in 64 log cells, `d` shifts over one period.
    pub fn default_for(d: usize) -> Self {
        WaveletGridSpec { a_min: 2f64.powi(-6), a_max: 4.0, n_a: 64, n_b: d }
    }

    pub fn space(&self) -> Result<MeasureSpace> {
        measure::wavelet_grid(self.a_min, self.a_max, self.n_a, 0.0, 1.0, self.n_b)
    }

    pub fn with_scales(self, n_a: usize) -> Self {
        WaveletGridSpec { n_a, ..self }
    }
}

/// Largest relative shortfall of the scale coverage that still counts as covered.
pub const COVERAGE_TOL: f64 = 1e-3;

/// `∫_{a_min}^{a_max} |ψ̂(aγ)|² da/a`, by fine log quadrature in `u = aγ`.
pub fn scale_coverage(psi: &WaveletSpec, a_min: f64, a_max: f64, gamma: f64) -> f64 {
    let g = gamma.abs();
    if g == 0.0 {
        return 0.0;
    }
    let grid = measure::log_grid_1d(a_min * g, a_max * g, 4000).expect("positive bounds");
    let side = if gamma > 0.0 { 1.0 } else { -1.0 };
    let vals: Vec<f64> = grid.points().iter().map(|p| psi.profile(side * p[0]).norm_sqr() / p[0]).collect();
    grid.integrate_real(&vals).expect("lengths match")
}

/// Integer frequencies `1 ≤ |k| ≤ d/2` whose coverage is within
/// [`COVERAGE_TOL`] of `C_ψ⁺`, as `(lowest, highest)` magnitude.
pub fn covered_band(psi: &WaveletSpec, grid: &WaveletGridSpec, d: usize, c_plus: f64) -> Option<(usize, usize)> {
    let covered: Vec<usize> = (1..=d / 2)
        .filter(|&k| {
            let lo = scale_coverage(psi, grid.a_min, grid.a_max, k as f64);
            let hi = scale_coverage(psi, grid.a_min, grid.a_max, -(k as f64));
            (1.0 - lo / c_plus).abs() <= COVERAGE_TOL && (1.0 - hi / c_plus).abs() <= COVERAGE_TOL
        })
        .collect();
    Some((*covered.first()?, *covered.last()?))
}

fn spectrum(f: &Vector) -> Vec<Complex64> {
    let d = f.dim();
    let mut buf = f.as_slice().to_vec();
    FftPlanner::new().plan_fft_forward(d).process(&mut buf);
    let norm = 1.0 / (d as f64).sqrt();
    buf.iter_mut().for_each(|z| *z *= norm);
    buf
}

/// Real unit-norm signal whose spectrum is a log-Gaussian bump centred at the
/// geometric middle of `band`, with log-width one eighth of the band.
pub fn band_bump(d: usize, band: (usize, usize)) -> Vector {
    let (lo, hi) = (band.0 as f64, band.1 as f64);
    let centre = (lo * hi).sqrt().ln();
    let sigma = ((hi / lo).ln() / 8.0).max(0.1);
    let mut spec: Vec<Complex64> = (0..d)
        .map(|k| {
            let g = signed_frequency(k, d).abs();
            if g == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                let z = (g.ln() - centre) / sigma;
                Complex64::new((-0.5 * z * z).exp(), 0.0)
            }
        })
        .collect();
    FftPlanner::new().plan_fft_inverse(d).process(&mut spec);
    let v = Vector::from_vec(spec.iter().map(|z| Complex64::new(z.re, 0.0)).collect());
    v.normalized()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalderonReport {
    pub residual: f64,
    pub c_plus: f64,
    pub d: usize,
    pub grid: WaveletGridSpec,
    /// Lowest and highest covered integer frequency magnitude.
    pub band: Option<(usize, usize)>,
    /// Fraction of `‖f‖²` carried by uncovered frequencies.
    pub out_of_band_energy: f64,
    pub warning: Option<String>,
}

/// `‖(1/C_ψ⁺) T_W T_W^* f − f‖ / ‖f‖`, streaming one column at a time.
pub fn calderon_residual(psi: &WaveletSpec, grid: &WaveletGridSpec, f: &Vector) -> Result<CalderonReport> {
    let d = f.dim();
    if d == 0 {
        return Err(Error::InvalidParameter("signal dimension must be positive".into()));
    }
    let c_plus = check_admissible(psi)?;
    let space = grid.space()?;
    let band = covered_band(psi, grid, d, c_plus);

    let spec = spectrum(f);
    let total: f64 = spec.iter().map(|z| z.norm_sqr()).sum();
    let outside: f64 = spec
        .iter()
        .enumerate()
        .filter(|(k, _)| {
            let g = signed_frequency(*k, d).abs() as usize;
            band.is_none_or(|(lo, hi)| g < lo || g > hi)
        })
        .map(|(_, z)| z.norm_sqr())
        .sum();
    let out_of_band_energy = if total > 0.0 { outside / total } else { 0.0 };
    let warning = (out_of_band_energy > COVERAGE_TOL)
        .then(|| format!("{:.3e} of the signal energy lies outside the covered band {:?}", out_of_band_energy, band));

    let fnorm = f.norm();
    if fnorm == 0.0 {
        return Ok(CalderonReport { residual: 0.0, c_plus, d, grid: *grid, band, out_of_band_energy, warning });
    }

    let builder = ColumnBuilder::new(d);
    let fs = f.as_slice();
    let chunk = grid.n_b.max(1);
    let partials: Vec<Vec<Complex64>> = space
        .points()
        .par_chunks(chunk)
        .zip(space.weights().par_chunks(chunk))
        .map(|(pts, ws)| -> Result<Vec<Complex64>> {
            let mut acc = vec![Complex64::new(0.0, 0.0); d];
            let mut buf = Vec::with_capacity(d);
            for (p, w) in pts.iter().zip(ws) {
                let (a, b) = scale_shift(p)?;
                builder.column(psi, a, b, &mut buf);
                let coeff: Complex64 = fs.iter().zip(&buf).map(|(x, y)| x * y.conj()).sum();
                let s = coeff * *w;
                acc.iter_mut().zip(&buf).for_each(|(o, y)| *o += s * y);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut sum = vec![Complex64::new(0.0, 0.0); d];
    for part in &partials {
        sum.iter_mut().zip(part).for_each(|(o, p)| *o += p);
    }
    let err: f64 = sum.iter().zip(fs).map(|(s, x)| (s / c_plus - x).norm_sqr()).sum::<f64>().sqrt();
    Ok(CalderonReport { residual: err / fnorm, c_plus, d, grid: *grid, band, out_of_band_energy, warning })
}

/// `residual(n_a) / residual(2 n_a)` for the same signal.
pub fn residual_ratio(psi: &WaveletSpec, grid: &WaveletGridSpec, f: &Vector) -> Result<(f64, f64, f64)> {
    let coarse = calderon_residual(psi, grid, f)?.residual;
    let fine = calderon_residual(psi, &grid.with_scales(2 * grid.n_a), f)?.residual;
    Ok((coarse, fine, coarse / fine))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Operator;
    use crate::random::{random_vector, rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn translate_and_modulate_examples() {
        assert_eq!(translate(&Vector::basis(4, 0), 1), Vector::basis(4, 1));
        assert_eq!(translate(&Vector::basis(4, 3), 1), Vector::basis(4, 0));
        let ones = Vector::from_real(&[1.0; 5]).unwrap();
        assert_eq!(modulate(&ones, 0), ones);
        let mut r = rng(1);
        for _ in 0..10 {
            let x = random_vector(&mut r, 7);
            let y = modulate(&translate(&x, 3), -2);
            assert!((y.norm() - x.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn modulation_and_translation_commute_up_to_phase() {
        let mut r = rng(2);
        let x = random_vector(&mut r, 6);
        let (a, b) = (2, 5);
        let mt = modulate(&translate(&x, a), b);
        let tm = translate(&modulate(&x, b), a);
        // M_b T_a = e^{2πi ab/d} T_a M_b
        let want = tm.scale(phase(a * b, 6));
        assert!(mt.sub(&want).unwrap().norm() < 1e-12);
    }

    #[test]
    fn gabor_frame_columns_are_modulated_shifts() {
        let spec = WindowSpec::Gaussian { width: 1.5 };
        let g = spec.window(6).unwrap();
        let frame = gabor_frame(&spec, 6).unwrap();
        let j = 2 * 6 + 4;
        assert!(frame.column(j).sub(&modulate(&translate(&g, 2), 4)).unwrap().norm() < 1e-14);
    }

    #[test]
    fn gabor_frame_is_tight_with_window_energy() {
        let spec = WindowSpec::Gaussian { width: 2.0 };
        let g = spec.window(8).unwrap();
        let b = gabor_frame(&spec, 8).unwrap().frame_bounds().unwrap();
        let e = g.norm().powi(2);
        assert!((b.lower - e).abs() <= 1e-10 * e && (b.upper - e).abs() <= 1e-10 * e);

        let impulse = WindowSpec::from_vector(&Vector::basis(5, 0));
        let s = gabor_frame(&impulse, 5).unwrap().frame_operator();
        assert!(s.sub(&Operator::identity(5)).unwrap().max_abs_entry() < 1e-14);

        for d in [4, 8, 16] {
            for seed in 0..20 {
                let g = random_vector(&mut rng(seed), d);
                let s = gabor_frame(&WindowSpec::from_vector(&g), d).unwrap().frame_operator();
                let e = g.norm().powi(2);
                let dev = hilbert::operator_norm(&s.sub(&Operator::identity(d).scale(c(e, 0.0))).unwrap()).unwrap();
                assert!(dev <= 1e-10 * e);
            }
        }
        let zero = WindowSpec::from_vector(&Vector::zeros(4));
        assert!(matches!(gabor_frame(&zero, 4), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn stft_examples() {
        let spec = WindowSpec::Gaussian { width: 1.0 };
        let g = spec.window(8).unwrap();
        let s = stft(&g, &spec).unwrap();
        assert!((s.values()[0] - c(g.norm().powi(2), 0.0)).norm() < 1e-12);
        assert!(stft(&Vector::zeros(8), &spec).unwrap().values().iter().all(|z| z.norm() == 0.0));

        let f = random_vector(&mut rng(3), 8);
        let s = stft(&f, &spec).unwrap();
        let energy: f64 = s.values().iter().map(|z| z.norm_sqr()).sum::<f64>() / 8.0;
        let want = g.norm().powi(2) * f.norm().powi(2);
        assert!((energy - want).abs() <= 1e-12 * want);

        let frame = gabor_frame(&spec, 8).unwrap();
        let coeffs = frame.analysis(&f).unwrap();
        assert!(coeffs.iter().zip(s.values()).all(|(x, y)| (x - y).norm() < 1e-12));
    }

    #[test]
    fn stft_orthogonality_examples() {
        let e0 = Vector::basis(6, 0);
        let e1 = Vector::basis(6, 1);
        let mut r = rng(4);
        let (g1, g2) = (random_vector(&mut r, 6), random_vector(&mut r, 6));
        assert!(stft_orthogonality_residual(&e0, &e1, &g1, &g2).unwrap() <= 1e-10);
        let u = random_vector(&mut r, 6).normalized();
        assert!(stft_orthogonality_residual(&u, &u, &u, &u).unwrap() <= 1e-10);
        for _ in 0..20 {
            let v: Vec<Vector> = (0..4).map(|_| random_vector(&mut r, 5)).collect();
            assert!(stft_orthogonality_residual(&v[0], &v[1], &v[2], &v[3]).unwrap() <= 1e-10);
        }
        assert!(matches!(stft_orthogonality_residual(&e0, &Vector::zeros(5), &g1, &g2), Err(Error::Shape(_))));
    }

    #[test]
    fn mexican_hat_admissibility_constant() {
        let grid = measure::log_grid_1d(1e-3, 10.0, 2000).unwrap();
        let adm = admissibility_constant(&WaveletSpec::MexicanHat, &grid).unwrap();
        // 2 ∫_0^∞ γ³ e^{−2γ²} dγ = 1/4
        assert!((adm.c_psi - 0.25).abs() < 1e-4, "{adm:?}");
        assert!((adm.c_plus - 0.125).abs() < 1e-4);
        assert!(adm.admissible);

        let zero = WaveletSpec::Custom(Arc::new(|_| Complex64::new(0.0, 0.0)));
        let adm0 = admissibility_constant(&zero, &grid).unwrap();
        assert_eq!(adm0.c_psi, 0.0);
        assert!(!adm0.admissible);

        let tripled = WaveletSpec::Custom(Arc::new(|g| Complex64::new(0.0, 3.0) * g * g * (-g * g).exp()));
        let adm3 = admissibility_constant(&tripled, &grid).unwrap();
        assert!((adm3.c_psi - 9.0 * adm.c_psi).abs() < 1e-12);

        let with_zero = MeasureSpace::new(vec![vec![0.0], vec![1.0]], vec![1.0, 1.0]).unwrap();
        assert!(matches!(admissibility_constant(&WaveletSpec::MexicanHat, &with_zero), Err(Error::InvalidDomain(_))));
    }

    #[test]
    fn sampled_profile_interpolates() {
        let p = WaveletSpec::sampled(vec![0.0, 1.0, 2.0], vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 2.0)]).unwrap();
        assert_eq!(p.profile(0.5), c(0.5, 0.0));
        assert_eq!(p.profile(-1.5), c(0.5, 1.0));
        assert_eq!(p.profile(3.0), c(0.0, 0.0));
        assert!(WaveletSpec::sampled(vec![1.0, 0.5], vec![c(0.0, 0.0); 2]).is_err());
    }

    fn small_grid() -> WaveletGridSpec {
        WaveletGridSpec { a_min: 2f64.powi(-4), a_max: 2.0, n_a: 24, n_b: 32 }
    }

    #[test]
    fn wavelet_frame_structure() {
        let d = 32;
        let spec = small_grid();
        let grid = spec.space().unwrap();
        let w = wavelet_frame(&WaveletSpec::MexicanHat, &grid, d).unwrap();

        // column norms do not depend on the shift
        for i in 0..spec.n_a {
            let base = w.column_norm(i * spec.n_b);
            for k in 1..spec.n_b {
                assert!((w.column_norm(i * spec.n_b + k) - base).abs() < 1e-12 * base.max(1e-300));
            }
        }

        // diagonal in the Fourier basis
        let s = w.frame_operator();
        let mut dft = DMatrix::zeros(d, d);
        for k in 0..d {
            for t in 0..d {
                dft[(k, t)] = phase(-((k * t) as i64), d as i64) / (d as f64).sqrt();
            }
        }
        let hat = &dft * s.matrix() * dft.adjoint();
        let mut off = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    off = off.max(hat[(i, j)].norm());
                }
            }
        }
        assert!(off <= 1e-10, "off-diagonal {off:e}");

        // diagonal ≈ C⁺ inside the covered band
        let c_plus = admissibility_constant(&WaveletSpec::MexicanHat, &reference_frequency_grid()).unwrap().c_plus;
        let band = covered_band(&WaveletSpec::MexicanHat, &spec, d, c_plus).unwrap();
        for k in band.0..=band.1 {
            assert!((hat[(k, k)].re / c_plus - 1.0).abs() < 0.02);
            assert!((hat[(d - k, d - k)].re / c_plus - 1.0).abs() < 0.02);
        }

        // commutes with the unit shift
        let shift =
            Operator::from_columns(&(0..d).map(|t| translate(&Vector::basis(d, t), 1)).collect::<Vec<_>>()).unwrap();
        let comm = shift.compose(&s).unwrap().sub(&s.compose(&shift).unwrap()).unwrap();
        assert!(comm.max_abs_entry() <= 1e-10);
    }

    #[test]
    fn wavelet_frame_rejects_inadmissible_profiles() {
        let grid = small_grid().space().unwrap();
        let dc = WaveletSpec::Custom(Arc::new(|g| Complex64::new((-g * g).exp(), 0.0)));
        assert!(matches!(wavelet_frame(&dc, &grid, 8), Err(Error::InvalidInput(_))));
        let zero = WaveletSpec::Custom(Arc::new(|_| Complex64::new(0.0, 0.0)));
        assert!(matches!(wavelet_frame(&zero, &grid, 8), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn admissibility_ignores_phase() {
        let grid = measure::log_grid_1d(1e-3, 10.0, 500).unwrap();
        let a = admissibility_constant(&WaveletSpec::MexicanHat, &grid).unwrap();
        let rotated = WaveletSpec::Custom(Arc::new(|g| Complex64::from_polar(g * g * (-g * g).exp(), 3.0 * g)));
        let b = admissibility_constant(&rotated, &grid).unwrap();
        assert!((a.c_psi - b.c_psi).abs() < 1e-15);
    }

    #[test]
    fn streamed_residual_matches_assembled_frame() {
        let d = 32;
        let spec = small_grid();
        let psi = WaveletSpec::MexicanHat;
        let f = random_vector(&mut rng(5), d);
        let report = calderon_residual(&psi, &spec, &f).unwrap();
        let w = wavelet_frame(&psi, &spec.space().unwrap(), d).unwrap();
        let back = w.synthesis(&w.analysis(&f).unwrap()).unwrap().scale(c(1.0 / report.c_plus, 0.0));
        let direct = back.sub(&f).unwrap().norm() / f.norm();
        assert!((report.residual - direct).abs() < 1e-12);
        // random vectors have energy at DC and near Nyquist
        assert!(report.warning.is_some());
    }

    #[test]
    fn calderon_zero_signal_and_bump() {
        let spec = small_grid();
        let r = calderon_residual(&WaveletSpec::MexicanHat, &spec, &Vector::zeros(32)).unwrap();
        assert_eq!(r.residual, 0.0);

        let c_plus = check_admissible(&WaveletSpec::MexicanHat).unwrap();
        let band = covered_band(&WaveletSpec::MexicanHat, &spec, 32, c_plus).unwrap();
        let f = band_bump(32, band);
        assert!((f.norm() - 1.0).abs() < 1e-12);
        assert!(f.as_slice().iter().all(|z| z.im == 0.0));
        let r = calderon_residual(&WaveletSpec::MexicanHat, &spec, &f).unwrap();
        assert!(r.residual < 0.02, "{r:?}");
        assert!(r.out_of_band_energy < COVERAGE_TOL);
    }
}
