//! Multipliers `M_{m,F,G} = T_G D_m T_F^*`, their norm budgets, and the
//! weighted-frame certificates built from invertible multipliers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::SampledFrame;
use crate::hilbert::{self, Operator, SchattenSpectrum};
use crate::measure::{self, Symbol};
use crate::report::Check;

/// Absolute slack on every budget comparison.
pub const BUDGET_TOL: f64 = 1e-10;

/// Exponents covered by [`bound_budget`].
pub const BUDGET_EXPONENTS: [f64; 5] = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];

/// `Σ_j w_j m_j G_j F_j^*`.
pub fn multiplier(m: &Symbol, f: &SampledFrame, g: &SampledFrame) -> Result<Operator> {
    f.check_compatible(g)?;
    m.check_space(f.space())?;
    let mut gw: DMatrix<Complex64> = g.vectors().clone();
    for (j, (mj, wj)) in m.values().iter().zip(f.space().weights()).enumerate() {
        let s = *mj * *wj;
        gw.column_mut(j).iter_mut().for_each(|z| *z *= s);
    }
    Ok(Operator::from_matrix_unchecked(gw * f.vectors().adjoint()))
}

/// Singular values of `D_m` on `L²(μ)`: the moduli `|m_j|`, descending.
pub fn diag_singular_values(m: &Symbol) -> SchattenSpectrum {
    SchattenSpectrum::from_unsorted(m.values().iter().map(|v| v.norm()).collect())
}

/// Constants entering the norm budgets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselData {
    pub b_f: f64,
    pub b_g: f64,
    pub l_f: f64,
    pub l_g: f64,
}

impl BesselData {
    pub fn of(f: &SampledFrame, g: &SampledFrame) -> Result<Self> {
        Ok(BesselData {
            b_f: f.frame_bounds()?.upper,
            b_g: g.frame_bounds()?.upper,
            l_f: f.norm_bound(),
            l_g: g.norm_bound(),
        })
    }

    /// Schatten-`p` budget for a symbol of `L^p(μ)` norm `m_p`:
    /// `‖m‖_p (L_F L_G)^{1/p} (B_F B_G)^{1/(2q)}` with `1/p + 1/q = 1`.
    /// `p = 1` reduces to `‖m‖_1 L_F L_G`, `p = ∞` to `‖m‖_∞ √(B_F B_G)`.
    pub fn schatten_budget(&self, m_p: f64, p: f64) -> f64 {
        if p.is_infinite() {
            m_p * (self.b_f * self.b_g).sqrt()
        } else if p == 1.0 {
            m_p * self.l_f * self.l_g
        } else {
            let inv_q = 1.0 - 1.0 / p;
            m_p * (self.l_f * self.l_g).powf(1.0 / p) * (self.b_f * self.b_g).powf(inv_q / 2.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetEntry {
    pub p: String,
    pub budget: f64,
    pub actual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub op_budget: f64,
    pub trace_budget: f64,
    pub constants: BesselData,
    pub schatten: Vec<BudgetEntry>,
    pub checks: Vec<Check>,
}

impl BudgetReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn exponent_label(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

pub fn bound_budget(m: &Symbol, f: &SampledFrame, g: &SampledFrame) -> Result<BudgetReport> {
    let big_m = multiplier(m, f, g)?;
    let spectrum = hilbert::singular_values(&big_m)?;
    let k = BesselData::of(f, g)?;
    let mut schatten = Vec::new();
    let mut checks = Vec::new();
    for &p in &BUDGET_EXPONENTS {
        let budget = k.schatten_budget(measure::lp_norm(f.space(), m, p)?, p);
        let actual = spectrum.schatten(p)?;
        let label = exponent_label(p);
        let (id, anchor) = match label.as_str() {
            "inf" => ("budget.op".to_string(), "‖M‖ ≤ ‖m‖_∞ √(B_F B_G)".to_string()),
            "1" => ("budget.trace".to_string(), "‖M‖_S1 ≤ ‖m‖_1 L_F L_G".to_string()),
            _ => (format!("budget.schatten.{label}"), "‖M‖_Sp ≤ ‖m‖_p (L_F L_G)^(1/p) (B_F B_G)^(1/2q)".to_string()),
        };
        let check = Check::at_most(&id, &anchor, actual, budget, BUDGET_TOL);
        schatten.push(BudgetEntry { p: label, budget, actual, pass: check.pass });
        checks.push(check);
    }
    Ok(BudgetReport { op_budget: schatten[4].budget, trace_budget: schatten[0].budget, constants: k, schatten, checks })
}

/// `m` on `keep`, zero elsewhere.
pub fn truncate_symbol(m: &Symbol, keep: &[usize]) -> Result<Symbol> {
    let mut values = vec![Complex64::new(0.0, 0.0); m.len()];
    for &j in keep {
        if j >= m.len() {
            return Err(Error::shape(format!("index {j} outside a symbol of length {}", m.len())));
        }
        values[j] = m.values()[j];
    }
    Ok(m.with_values(values))
}

/// Nested index sets keeping the `k` largest `|m_j|`, for `k = 1, …, N`.
pub fn nested_truncations(m: &Symbol) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..m.len()).collect();
    order.sort_by(|&a, &b| m.values()[b].norm().total_cmp(&m.values()[a].norm()).then(a.cmp(&b)));
    (1..=order.len()).map(|k| order[..k].to_vec()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationStep {
    pub kept: usize,
    pub deviation: f64,
    pub budget: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub steps: Vec<TruncationStep>,
    pub monotone: bool,
    pub checks: Vec<Check>,
}

/// Operator-norm distance `‖M_{m_n} − M_m‖` along the nested truncations,
/// each against `‖m − m_n‖_∞ √(B_F B_G)`.
pub fn truncation_experiment(m: &Symbol, f: &SampledFrame, g: &SampledFrame) -> Result<TruncationReport> {
    let full = multiplier(m, f, g)?;
    let k = BesselData::of(f, g)?;
    let scale = hilbert::operator_norm(&full)?.max(1.0);
    let mut steps = Vec::new();
    let mut within: Option<Check> = None;
    for keep in nested_truncations(m) {
        let mn = truncate_symbol(m, &keep)?;
        let deviation = hilbert::operator_norm(&multiplier(&mn, f, g)?.sub(&full)?)?;
        let budget = k.schatten_budget(m.sub(&mn)?.max_abs(), f64::INFINITY);
        let step = Check::at_most(
            "truncation.budget",
            "‖M_{m_n} − M_m‖ ≤ ‖m_n − m‖_∞ √(B_F B_G)",
            deviation,
            budget,
            BUDGET_TOL,
        );
        within = Some(match within {
            Some(w) => w.worst(step),
            None => step,
        });
        steps.push(TruncationStep { kept: keep.len(), deviation, budget });
    }
    let within = within.ok_or_else(|| Error::InvalidParameter("cannot truncate an empty symbol".into()))?;
    let monotone = is_monotone(steps.iter().map(|s| s.deviation), 1e-12 * scale);
    let vanishes = steps.last().is_none_or(|s| s.deviation <= 1e-12 * scale);
    let checks = vec![
        within,
        Check::holds("truncation.monotone", "‖M_{m_n} − M_m‖ nonincreasing in n", monotone),
        Check::holds("truncation.limit", "‖M_{m_n} − M_m‖ → 0", vanishes),
    ];
    Ok(TruncationReport { steps, monotone, checks })
}

fn is_monotone(values: impl Iterator<Item = f64>, slack: f64) -> bool {
    let mut prev = f64::INFINITY;
    for v in values {
        if v > prev + slack {
            return false;
        }
        prev = v;
    }
    true
}

/// `H_j = (M^{-1})^* conj(m_j) F_j`, a dual of `G` whenever `M` is invertible.
pub fn dual_from_multiplier(m: &Symbol, f: &SampledFrame, g: &SampledFrame) -> Result<SampledFrame> {
    let big_m = multiplier(m, f, g)?;
    let inv_adj = hilbert::invert(&big_m)?.adjoint();
    f.scale_columns(&m.conj())?.map_columns(&inv_adj)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    /// Lower bound of `conj(m)·F` and its certified floor `1/(B_G ‖(M^*)^{-1}‖²)`.
    pub lower_mbar_f: f64,
    pub floor_mbar_f: f64,
    /// Lower bound of `m·G` and its certified floor `1/(B_F ‖M^{-1}‖²)`.
    pub lower_m_g: f64,
    pub floor_m_g: f64,
    /// True when `m ≡ 0`, so the bounds that divide by `‖m‖_∞²` are skipped.
    pub degenerate: bool,
    pub checks: Vec<Check>,
}

impl CertificateReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Lower-bound certificates for the weighted families `conj(m)F`, `mG`
/// and for `F`, `G` themselves, given an invertible `M_{m,F,G}`.
pub fn lower_bound_certificates(m: &Symbol, f: &SampledFrame, g: &SampledFrame) -> Result<CertificateReport> {
    let big_m = multiplier(m, f, g)?;
    let m_inv = hilbert::invert(&big_m)?;
    let inv_norm = hilbert::operator_norm(&m_inv)?;
    // ‖(M^*)^{-1}‖ = ‖(M^{-1})^*‖ = ‖M^{-1}‖
    let f_bounds = f.frame_bounds()?;
    let g_bounds = g.frame_bounds()?;
    let mbar_f = f.scale_columns(&m.conj())?.frame_bounds()?;
    let m_g = g.scale_columns(m)?.frame_bounds()?;
    let floor_mbar_f = 1.0 / (g_bounds.upper * inv_norm * inv_norm);
    let floor_m_g = 1.0 / (f_bounds.upper * inv_norm * inv_norm);

    let mut checks = vec![
        Check::at_least(
            "certificate.mbar_f.lower",
            "A_{conj(m)F} ≥ 1 / (B_G ‖(M^*)^{-1}‖²)",
            mbar_f.lower,
            floor_mbar_f,
            BUDGET_TOL,
        ),
        Check::at_least("certificate.m_g.lower", "A_{mG} ≥ 1 / (B_F ‖M^{-1}‖²)", m_g.lower, floor_m_g, BUDGET_TOL),
        Check::holds("certificate.weighted.frames", "conj(m)F and mG are frames", mbar_f.is_frame && m_g.is_frame),
    ];
    let sup = m.max_abs();
    let degenerate = sup == 0.0;
    if !degenerate {
        checks.push(Check::at_least(
            "certificate.f.lower",
            "A_F ≥ A_{conj(m)F} / ‖m‖_∞²",
            f_bounds.lower,
            mbar_f.lower / (sup * sup),
            BUDGET_TOL,
        ));
        let g_floor = Check::at_least(
            "certificate.g.lower",
            "F and G are frames, A_G ≥ A_{mG} / ‖m‖_∞²",
            g_bounds.lower,
            m_g.lower / (sup * sup),
            BUDGET_TOL,
        );
        let both = f_bounds.is_frame && g_bounds.is_frame;
        checks.push(Check { pass: g_floor.pass && both, ..g_floor });
    }
    Ok(CertificateReport {
        lower_mbar_f: mbar_f.lower,
        floor_mbar_f,
        lower_m_g: m_g.lower,
        floor_m_g,
        degenerate,
        checks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvergenceKind {
    /// Symbols `m_n → m` in `L^p(μ)`; deviation in Schatten-`p` norm.
    SymbolP { p: f64 },
    /// Analysis frames `F_n → F` uniformly, `m ∈ L²`; operator norm.
    FrameUniformL2,
    /// Analysis frames `F_n → F` uniformly, `m ∈ L¹`, `G` norm-bounded; operator norm.
    FrameUniformL1,
}

/// One step of a schedule: the perturbed ingredient for that step.
#[derive(Debug, Clone, PartialEq)]
pub enum Perturbed {
    Symbol(Symbol),
    Analysis(SampledFrame),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStep {
    /// Measured discrepancy of the ingredient (`‖m_n − m‖_p` or `sup_j ‖F_n(ω_j) − F(ω_j)‖`).
    pub epsilon: f64,
    pub measured: f64,
    pub budget: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub kind: ConvergenceKind,
    pub steps: Vec<ConvergenceStep>,
    pub monotone: bool,
    pub checks: Vec<Check>,
}

pub fn convergence_experiment(
    kind: ConvergenceKind,
    m: &Symbol,
    f: &SampledFrame,
    g: &SampledFrame,
    schedule: &[Perturbed],
) -> Result<ConvergenceReport> {
    if schedule.is_empty() {
        return Err(Error::InvalidParameter("the perturbation schedule is empty".into()));
    }
    if let ConvergenceKind::SymbolP { p } = kind {
        measure::check_exponent(p)?;
    }
    let base = multiplier(m, f, g)?;
    let k = BesselData::of(f, g)?;
    let (anchor, m_norm) = match kind {
        ConvergenceKind::SymbolP { .. } => ("‖M_{m_n} − M_m‖_Sp ≤ Schatten budget of m_n − m", 0.0),
        ConvergenceKind::FrameUniformL2 => {
            ("‖M_{m,F_n,G} − M_{m,F,G}‖ ≤ ε ‖m‖_2 √B_G", measure::lp_norm(f.space(), m, 2.0)?)
        }
        ConvergenceKind::FrameUniformL1 => {
            ("‖M_{m,F_n,G} − M_{m,F,G}‖ ≤ ε ‖m‖_1 L_G", measure::lp_norm(f.space(), m, 1.0)?)
        }
    };
    let mut steps = Vec::with_capacity(schedule.len());
    for item in schedule {
        let (epsilon, measured, budget) = match (kind, item) {
            (ConvergenceKind::SymbolP { p }, Perturbed::Symbol(mn)) => {
                let diff = mn.sub(m)?;
                let eps = measure::lp_norm(f.space(), &diff, p)?;
                let dev = multiplier(mn, f, g)?.sub(&base)?;
                (eps, hilbert::schatten_norm(&dev, p)?, k.schatten_budget(eps, p))
            }
            (ConvergenceKind::FrameUniformL2, Perturbed::Analysis(fn_)) => {
                let eps = fn_.uniform_distance(f)?;
                let dev = hilbert::operator_norm(&multiplier(m, fn_, g)?.sub(&base)?)?;
                (eps, dev, eps * m_norm * k.b_g.sqrt())
            }
            (ConvergenceKind::FrameUniformL1, Perturbed::Analysis(fn_)) => {
                let eps = fn_.uniform_distance(f)?;
                let dev = hilbert::operator_norm(&multiplier(m, fn_, g)?.sub(&base)?)?;
                (eps, dev, eps * m_norm * k.l_g)
            }
            _ => return Err(Error::InvalidParameter("schedule entries do not match the experiment kind".into())),
        };
        steps.push(ConvergenceStep { epsilon, measured, budget, pass: measured <= budget + BUDGET_TOL });
    }
    let scale = hilbert::operator_norm(&base)?.max(1.0);
    let monotone = is_monotone(steps.iter().map(|s| s.measured), 1e-12 * scale);
    let id = match kind {
        ConvergenceKind::SymbolP { .. } => "convergence.symbol_p",
        ConvergenceKind::FrameUniformL2 => "convergence.frame_uniform_l2",
        ConvergenceKind::FrameUniformL1 => "convergence.frame_uniform_l1",
    };
    let within = steps
        .iter()
        .map(|s| Check::at_most(&format!("{id}.budget"), anchor, s.measured, s.budget, BUDGET_TOL))
        .reduce(Check::worst)
        .expect("schedule is nonempty");
    let checks =
        vec![within, Check::holds(&format!("{id}.monotone"), "deviation nonincreasing along the schedule", monotone)];
    Ok(ConvergenceReport { kind, steps, monotone, checks })
}

/// `m + u/n` for `n = 1, …, steps`.
pub fn symbol_ramp(m: &Symbol, u: &Symbol, steps: usize) -> Result<Vec<Perturbed>> {
    (1..=steps).map(|n| Ok(Perturbed::Symbol(m.add(&u.scale(Complex64::new(1.0 / n as f64, 0.0)))?))).collect()
}

/// `F + U/n` for `n = 1, …, steps`.
pub fn frame_ramp(f: &SampledFrame, u: &SampledFrame, steps: usize) -> Result<Vec<Perturbed>> {
    (1..=steps).map(|n| Ok(Perturbed::Analysis(f.add(&u.scale(Complex64::new(1.0 / n as f64, 0.0)))?))).collect()
}

/// `‖M − M'‖_max / max(‖M‖_max, 1)`: entrywise relative residual.
pub fn entrywise_residual(a: &Operator, b: &Operator) -> Result<f64> {
    Ok(a.sub(b)?.max_abs_entry() / a.max_abs_entry().max(1.0))
}
