//! Seeded verification suites. Each suite draws random instances, runs the
//! library's identities and bounds on them, and folds the outcomes into a
//! [`Report`] with one aggregated [`Check`] per id.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::controlled::{self, ControlSpec};
use crate::error::{Error, Result};
use crate::frame::{self, SampledFrame};
use crate::hilbert::{self, Operator, Vector};
use crate::measure::{self, MeasureSpace, Symbol, SymbolData};
use crate::multiplier::{self, ConvergenceKind};
use crate::random::{self, TrialRng};
use crate::report::{self, Check, Report};
use crate::tf_frames::{self, WaveletGridSpec, WaveletSpec, WindowSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identities,
    Bounds,
    Convergence,
    Gabor,
    Wavelet,
    Controlled,
    Weighted,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Identities,
        Suite::Bounds,
        Suite::Convergence,
        Suite::Gabor,
        Suite::Wavelet,
        Suite::Controlled,
        Suite::Weighted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Bounds => "bounds",
            Suite::Convergence => "convergence",
            Suite::Gabor => "gabor",
            Suite::Wavelet => "wavelet",
            Suite::Controlled => "controlled",
            Suite::Weighted => "weighted",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Usage(format!("unknown format '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    /// Kept as text so an unknown tag surfaces as a usage error.
    pub suite: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default = "default_n", alias = "N")]
    pub n: usize,
    /// Per-check tolerance overrides, keyed by check id.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

fn default_trials() -> usize {
    200
}

fn default_d() -> usize {
    8
}

fn default_n() -> usize {
    64
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: "all".into(),
            seed: 0,
            trials: default_trials(),
            d: default_d(),
            n: default_n(),
            tolerances: BTreeMap::new(),
            output: None,
            format: Format::Json,
        }
    }
}

impl SuiteConfig {
    pub fn new(suite: Suite, seed: u64) -> Self {
        SuiteConfig { suite: suite.name().into(), seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<Suite> {
        let suite = self.suite.parse()?;
        if self.trials == 0 {
            return Err(Error::Usage("trials must be at least 1".into()));
        }
        if self.d == 0 || self.n == 0 {
            return Err(Error::Usage("d and N must be at least 1".into()));
        }
        for (k, v) in &self.tolerances {
            if !(*v >= 0.0 && v.is_finite()) {
                return Err(Error::Usage(format!("tolerance for '{k}' must be finite and nonnegative")));
            }
        }
        Ok(suite)
    }
}

/// Runs the configured suite. A failing computation inside an instance
/// becomes a failed check with a diagnostic; only configuration problems
/// are returned as errors.
pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    let suite = config.validate()?;
    let started = report::now();
    let parts: Vec<Suite> = if suite == Suite::All { Suite::ALL.to_vec() } else { vec![suite] };
    let mut checks = Vec::new();
    let mut details = serde_json::Map::new();
    for part in parts {
        let (c, d) = run_part(part, config);
        checks.extend(c);
        details.extend(d);
    }
    let checks = checks
        .into_iter()
        .map(|c| match config.tolerances.get(&c.check_id) {
            Some(&t) => c.with_tolerance(t),
            None => c,
        })
        .collect();
    let mut report = Report::new(suite.name(), config.seed, started, checks);
    report.details = details;
    Ok(report)
}

type Details = serde_json::Map<String, serde_json::Value>;

fn run_part(suite: Suite, cfg: &SuiteConfig) -> (Vec<Check>, Details) {
    let mut details = Details::new();
    let checks = match suite {
        Suite::Identities => [
            trials(cfg, Stream::FrameOperator, cfg.trials, frame_operator_trial),
            trials(cfg, Stream::Reconstruction, cfg.trials, reconstruction_trial),
            trials(cfg, Stream::Adjoint, cfg.trials, adjoint_trial),
            trials(cfg, Stream::Difference, cfg.trials.min(100), difference_trial),
            trials(cfg, Stream::Bracket, cfg.trials, bracket_trial),
        ]
        .concat(),
        Suite::Bounds => {
            let (unbounded, info) = unbounded_bessel(cfg.seed);
            details.insert("unbounded_bessel".into(), info);
            [
                trials(cfg, Stream::Budget, cfg.trials, budget_trial),
                trials(cfg, Stream::Truncation, cfg.trials.min(50), truncation_trial),
                unbounded,
            ]
            .concat()
        }
        Suite::Convergence => trials(cfg, Stream::Convergence, cfg.trials.min(20), convergence_trial),
        Suite::Gabor => {
            [gabor_tightness(cfg.seed, cfg.trials.min(20)), trials(cfg, Stream::Stft, cfg.trials.min(100), stft_trial)]
                .concat()
        }
        Suite::Wavelet => {
            let (checks, info) = wavelet_checks(&WaveletOptions::default());
            details.insert("wavelet".into(), info);
            checks
        }
        Suite::Controlled => trials(cfg, Stream::Controlled, cfg.trials.min(100), controlled_trial),
        Suite::Weighted => [
            trials(cfg, Stream::Certificates, cfg.trials.min(100), certificate_trial),
            trials(cfg, Stream::Dual, cfg.trials.min(50), dual_trial),
        ]
        .concat(),
        Suite::All => unreachable!("expanded by run_suite"),
    };
    (checks, details)
}

/// Independent random streams, one per family of trials.
#[derive(Debug, Clone, Copy)]
enum Stream {
    FrameOperator = 1,
    Reconstruction,
    Adjoint,
    Difference,
    Bracket,
    Budget,
    Truncation,
    Convergence,
    Stft,
    Controlled,
    Certificates,
    Dual,
    Gabor,
    Bessel,
}

fn stream_rng(seed: u64, stream: Stream, index: usize) -> TrialRng {
    random::trial_rng(seed, ((stream as u64) << 32) | index as u64)
}

/// Runs `count` trials in parallel. Results are collected in trial order,
/// so the aggregate is independent of scheduling.
fn trials(
    cfg: &SuiteConfig,
    stream: Stream,
    count: usize,
    trial: fn(&mut TrialRng, &SuiteConfig) -> Vec<Check>,
) -> Vec<Check> {
    (0..count)
        .into_par_iter()
        .map(|i| trial(&mut stream_rng(cfg.seed, stream, i), cfg))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Runs `body`; an error becomes a failed check under each id in `ids`.
fn guarded(ids: &[(&str, &str)], body: impl FnOnce() -> Result<Vec<Check>>) -> Vec<Check> {
    match body() {
        Ok(c) => c,
        Err(e) => ids.iter().map(|(id, anchor)| Check::failed(id, anchor, e.to_string())).collect(),
    }
}

struct Instance {
    space: MeasureSpace,
    f: SampledFrame,
    g: SampledFrame,
    m: Symbol,
}

/// `d ∈ [1, cfg.d]`, `N ∈ [d, max(cfg.n, d)]`, random weights, Gaussian
/// frames and symbol.
fn instance(r: &mut TrialRng, cfg: &SuiteConfig) -> Instance {
    let d = r.gen_range(1..=cfg.d);
    let n = r.gen_range(d..=cfg.n.max(d));
    let space = random::random_space(r, n);
    let f = random::random_frame(r, &space, d);
    let g = random::random_frame(r, &space, d);
    let m = random::random_symbol(r, &space);
    Instance { space, f, g, m }
}

fn relative(err: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

const FRAME_OPERATOR: (&str, &str) = ("identities.frame_operator", "S_F = T_F T_F^*");
const RECONSTRUCTION: (&str, &str) = ("identities.reconstruction", "f = Σ w_j ⟨f, F_j⟩ S_F^{-1} F_j");
const RECONSTRUCTION_SWAPPED: (&str, &str) = ("identities.reconstruction_swapped", "f = Σ w_j ⟨f, S_F^{-1} F_j⟩ F_j");
const ADJOINT: (&str, &str) = ("identities.multiplier_adjoint", "(M_{m,F,G})^* = M_{conj(m),G,F}");
const DIFF_SYMBOL: (&str, &str) = ("identities.difference.symbol", "M_{m,F,G} − M_{m',F,G} = M_{m−m',F,G}");
const DIFF_ANALYSIS: (&str, &str) = ("identities.difference.analysis", "M_{m,F,G} − M_{m,F',G} = M_{m,F−F',G}");
const DIFF_SYNTHESIS: (&str, &str) = ("identities.difference.synthesis", "M_{m,F,G} − M_{m,F,G'} = M_{m,F,G−G'}");
const BRACKET: (&str, &str) = ("frame.bounds_bracket", "A‖f‖² ≤ Σ w_j |⟨f, F_j⟩|² ≤ B‖f‖²");

fn frame_operator_trial(r: &mut TrialRng, cfg: &SuiteConfig) -> Vec<Check> {
    let inst = instance(r, cfg);
    guarded(&[FRAME_OPERATOR], || {
        let d = inst.f.dim();
        // T_F T_F^* assembled column by column from the analysis and synthesis maps
        let cols = (0..d)
            .map(|i| frame::synthesis(&inst.f, &frame::analysis(&inst.f, &Vector::basis(d, i))?))
            .collect::<Result<Vec<_>>>()?;
        let tt = Operator::from_columns(&cols)?;
        let s = inst.f.frame_operator();
        let err = hilbert::operator_norm(&s.sub(&tt)?)?;
        let rel = relative(err, hilbert::operator_norm(&s)?);
        Ok(vec![Check::at_most(FRAME_OPERATOR.0, FRAME_OPERATOR.1, rel, 0.0, 1e-12)])
    })
}

fn reconstruction_trial(r: &mut TrialRng, cfg: &SuiteConfig) -> Vec<Check> {
    let inst = instance(r, cfg);
    let vectors: Vec<Vector> = (0..20).map(|_| random::random_vector(r, inst.f.dim())).collect();
    guarded(&[RECONSTRUCTION, RECONSTRUCTION_SWAPPED], || {
        let dual = frame::canonical_dual(&inst.f)?;
        let mut out = Vec::with_capacity(2 * vectors.len());
        for v in &vectors {
            let a = frame::synthesis(&dual, &frame::analysis(&inst.f, v)?)?;
            let b = frame::synthesis(&inst.f, &frame::analysis(&dual, v)?)?;
            for ((id, anchor), rec) in [(RECONSTRUCTION, a), (RECONSTRUCTION_SWAPPED, b)] {
                let rel = relative(rec.sub(v)?.norm(), v.norm());
                out.push(Check::at_most(id, anchor, rel, 0.0, 1e-10));
            }
        }
        Ok(out)
    })
}

fn adjoint_trial(r: &mut TrialRng, cfg: &SuiteConfig) -> Vec<Check> {
    let inst = instance(r, cfg);
    guarded(&[ADJOINT], || {
        let m = multiplier::multiplier(&inst.m, &inst.f, &inst.g)?;
        let swapped = multiplier::multiplier(&inst.m.conj(), &inst.g, &inst.f)?;
        let err = hilbert::operator_norm(&m.adjoint().sub(&swapped)?)?;
        let rel = relative(err, hilbert::operator_norm(&m)?);
        Ok(vec![Check::at_most(ADJOINT.0, ADJOINT.1, rel, 0.0, 1e-12)])
    })
}

fn difference_trial(r: &mut TrialRng, cfg: &SuiteConfig) -> Vec<Check> {
    let inst = instance(r, cfg);
    let m2 = random::random_symbol(r, &inst.space);
    let f2 = random::random_frame(r, &inst.space, inst.f.dim());
    let g2 = random::random_frame(r, &inst.space, inst.f.dim());
    guarded(&[DIFF_SYMBOL, DIFF_ANALYSIS, DIFF_SYNTHESIS], || {
        let mult = multiplier::multiplier;
        let base = mult(&inst.m, &inst.f, &inst.g)?;
        let pairs = [
            (DIFF_SYMBOL, mult(&m2, &inst.f, &inst.g)?, mult(&inst.m.sub(&m2)?, &inst.f, &inst.g)?),
            (DIFF_ANALYSIS, mult(&inst.m, &f2, &inst.g)?, mult(&inst.m, &inst.f.sub(&f2)?, &inst.g)?),
            (DIFF_SYNTHESIS, mult(&inst.m, &inst.f, &g2)?, mult(&inst.m, &inst.f, &inst.g.sub(&g2)?)?),
        ];
        pairs
            .into_iter()
            .map(|((id, anchor), other, combined)| {
                let res = multiplier::entrywise_residual(&base.sub(&other)?, &combined)?;
                Ok(Check::at_most(id, anchor, res, 0.0, 1e-12))
            })
            .collect()
    })
}

fn bracket_trial(r: &mut TrialRng, cfg: &SuiteConfig) -> Vec<Check> {
    let inst = instance(r, cfg);
    let v = random::random_vector(r, inst.f.dim());
    guarded(&[BRACKET], || {
        let bounds = inst.f.frame_bounds()?;
        let coeffs = frame::analysis(&inst.f, &v)?;
        let energy = inst.space.integrate_real(&coeffs.iter().map(|c| c.norm_sqr()).collect::<Vec<_>>())?;
        let nn = v.norm() * v.norm();
        // both sides as a ratio inside [A, B], slack relative to B
        let ratio = energy / nn;
        let slack = 1e-12 * bounds.upper.max(1.0);
        Ok(vec![
            Check::at_least(BRACKET.0, BRACKET.1, ratio, bounds.lower, slack),
            Check::at_most(BRACKET.0, BRACKET.1, ratio, bounds.upper, slack),
        ])
    })
}

fn budget_trial(r: &mut TrialRng, cfg: &SuiteConfig) -> Vec<Check> {
    let inst = instance(r, cfg);
    let ids: Vec<(String, &str)> = multiplier::BUDGET_EXPONENTS
        .iter()
        .map(|&p| match multiplier::exponent_label(p).as_str() {
            "inf" => ("budget.op".to_string(), "‖M‖ ≤ ‖m‖_∞ √(B_F B_G)"),
            "1" => ("budget.trace".to_string(), "‖M‖_S1 ≤ ‖m‖_1 L_F L_G"),
            l => (format!("budget.schatten.{l}"), "‖M‖_Sp ≤ ‖m‖_p (L_F L_G)^(1/p) (B_F B_G)^(1/2q)"),
        })
        .collect();
    let refs: Vec<(&str, &str)> = ids.iter().map(|(a, b)| (a.as_str(), *b)).collect();
    guarded(&refs, || Ok(multiplier::bound_budget(&inst.m, &inst.f, &inst.g)?.checks))
}

const TRUNCATION_POSITIVE: (&str, &str) =
    ("truncation.monotone_positive", "m ≥ 0, G = F: ‖M_{m_n} − M_m‖ nonincreasing in n");

fn truncation_trial(r: &mut TrialRng, cfg: &SuiteConfig) -> Vec<Check> {
    let inst = instance(r, cfg);
    let positive = random::random_real_symbol(r, &inst.space, 0.0, 1.0);
    guarded(
        &[
            ("truncation.budget", "‖M_{m_n} − M_m‖ ≤ ‖m_n − m‖_∞ √(B_F B_G)"),
            ("truncation.monotone", "‖M_{m_n} − M_m‖ nonincreasing in n"),
            ("truncation.limit", "‖M_{m_n} − M_m‖ → 0"),
            TRUNCATION_POSITIVE,
        ],
        || {
            let mut out = multiplier::truncation_experiment(&inst.m, &inst.f, &inst.g)?.checks;
            // the tails M_{m − m_n} are positive and decrease in the Loewner order
            let tail = multiplier::truncation_experiment(&positive, &inst.f, &inst.f)?;
            out.push(Check::holds(TRUNCATION_POSITIVE.0, TRUNCATION_POSITIVE.1, tail.monotone));
            Ok(out)
        },
    )
}

/// Exponents cycled across symbol schedules.
const SCHEDULE_EXPONENTS: [f64; 5] = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];

/// Steps per convergence schedule.
pub const SCHEDULE_STEPS: usize = 8;

fn convergence_trial(r: &mut TrialRng, cfg: &SuiteConfig) -> Vec<Check> {
    let inst = instance(r, cfg);
    let p = SCHEDULE_EXPONENTS[r.gen_range(0..SCHEDULE_EXPONENTS.len())];
    let u = random::random_symbol(r, &inst.space);
    let uf = random::random_frame(r, &inst.space, inst.f.dim());
    let mut out = Vec::new();
    let kinds = [
        (ConvergenceKind::SymbolP { p }, "convergence.symbol_p"),
        (ConvergenceKind::FrameUniformL2, "convergence.frame_uniform_l2"),
        (ConvergenceKind::FrameUniformL1, "convergence.frame_uniform_l1"),
    ];
    for (kind, id) in kinds {
        let budget_id = format!("{id}.budget");
        let monotone_id = format!("{id}.monotone");
        out.extend(guarded(
            &[(&budget_id, "deviation within the proof budget"), (&monotone_id, "deviation nonincreasing")],
            || {
                let schedule = match kind {
                    ConvergenceKind::SymbolP { .. } => {
                        let unit = u.scale(Complex64::new(1.0 / u.max_abs(), 0.0));
                        multiplier::symbol_ramp(&inst.m, &unit, SCHEDULE_STEPS)?
                    }
                    _ => multiplier::frame_ramp(&inst.f, &unit_columns(&uf)?, SCHEDULE_STEPS)?,
                };
                Ok(multiplier::convergence_experiment(kind, &inst.m, &inst.f, &inst.g, &schedule)?.checks)
            },
        ));
    }
    out
}

/// Every column rescaled to unit norm, so `F + U/n` sits at uniform distance `1/n`.
fn unit_columns(u: &SampledFrame) -> Result<SampledFrame> {
    let inv: Vec<Complex64> =
        (0..u.len()).map(|j| Complex64::new(1.0 / u.column_norm(j).max(f64::MIN_POSITIVE), 0.0)).collect();
    u.scale_columns(&Symbol::new(u.space(), inv)?)
}

const GABOR_TIGHT: (&str, &str) = ("gabor.tightness", "S_g = ‖g‖² I on ℤ_d × ℤ_d");
const STFT_ORTHO: (&str, &str) = ("gabor.stft_orthogonality", "Σ (1/d) Ψ_{g1}f1 conj(Ψ_{g2}f2) = ⟨f1, f2⟩⟨g2, g1⟩");

/// Signal lengths of the tightness sweep.
pub const GABOR_DIMS: [usize; 4] = [4, 8, 16, 64];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaborSummary {
    pub d: usize,
    pub lower: f64,
    pub upper: f64,
    pub window_energy: f64,
    /// `‖S − ‖g‖² I‖ / ‖g‖²`.
    pub residual: f64,
}

pub fn gabor_summary(window: &WindowSpec, d: usize) -> Result<GaborSummary> {
    let g = window.window(d)?;
    let frame = tf_frames::gabor_frame(window, d)?;
    let energy = g.norm() * g.norm();
    let s = frame.frame_operator();
    let err = hilbert::operator_norm(&s.sub(&Operator::identity(d).scale(Complex64::new(energy, 0.0)))?)?;
    let bounds = frame.frame_bounds()?;
    Ok(GaborSummary { d, lower: bounds.lower, upper: bounds.upper, window_energy: energy, residual: err / energy })
}

fn gabor_tightness(seed: u64, windows: usize) -> Vec<Check> {
    let jobs: Vec<(usize, usize)> = GABOR_DIMS.iter().flat_map(|&d| (0..windows).map(move |i| (d, i))).collect();
    jobs.into_par_iter()
        .map(|(d, i)| {
            let mut r = stream_rng(seed, Stream::Gabor, d * 1000 + i);
            let window = WindowSpec::from_vector(&random::random_vector(&mut r, d));
            guarded(&[GABOR_TIGHT], || {
                let res = gabor_summary(&window, d)?.residual;
                Ok(vec![Check::at_most(GABOR_TIGHT.0, GABOR_TIGHT.1, res, 0.0, 1e-10)])
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn stft_trial(r: &mut TrialRng, cfg: &SuiteConfig) -> Vec<Check> {
    let d = r.gen_range(1..=cfg.d);
    let v: Vec<Vector> = (0..4).map(|_| random::random_vector(r, d)).collect();
    guarded(&[STFT_ORTHO], || {
        let res = tf_frames::stft_orthogonality_residual(&v[0], &v[1], &v[2], &v[3])?;
        Ok(vec![Check::at_most(STFT_ORTHO.0, STFT_ORTHO.1, res, 0.0, 1e-10)])
    })
}

/// Parameters of the wavelet suite.
#[derive(Debug, Clone)]
pub struct WaveletOptions {
    pub d: usize,
    pub psi: WaveletSpec,
    pub grid: WaveletGridSpec,
    /// Frequency band for the default bump signal; the covered band when `None`.
    pub band: Option<(usize, usize)>,
    /// Explicit test signal instead of the bump.
    pub signal: Option<Vector>,
}

/// Signal length of the default wavelet grid.
pub const WAVELET_D: usize = 512;

impl Default for WaveletOptions {
    fn default() -> Self {
        WaveletOptions {
            d: WAVELET_D,
            psi: WaveletSpec::MexicanHat,
            grid: WaveletGridSpec::default_for(WAVELET_D),
            band: None,
            signal: None,
        }
    }
}

const ADMISSIBILITY: (&str, &str) = ("wavelet.admissibility", "C_ψ = ∫ |ψ̂(γ)|² / |γ| dγ = 1/4 for ψ̂ = γ² e^{−γ²}");
const CALDERON: (&str, &str) = ("wavelet.calderon", "f = (1/C_ψ) ∫∫ ⟨f, ψ^{a,b}⟩ ψ^{a,b} da db / a²");
const ORDER_LOWER: (&str, &str) = ("wavelet.order_lower", "residual(n_a) / residual(2 n_a) ≥ 1.5");
const ORDER_UPPER: (&str, &str) = ("wavelet.order_upper", "residual(n_a) / residual(2 n_a) ≤ 3");

/// Closed-form admissibility constant of the Mexican-hat profile.
pub const MEXICAN_HAT_C_PSI: f64 = 0.25;

/// Admissibility, Calderón residual and refinement ratio. The admissibility
/// check is only emitted for the Mexican-hat profile, whose constant is known.
pub fn wavelet_checks(opts: &WaveletOptions) -> (Vec<Check>, serde_json::Value) {
    let mut info = serde_json::Map::new();
    let mut checks = Vec::new();
    if matches!(opts.psi, WaveletSpec::MexicanHat) {
        checks.extend(guarded(&[ADMISSIBILITY], || {
            let grid = measure::log_grid_1d(1e-3, 10.0, 2000)?;
            let adm = tf_frames::admissibility_constant(&opts.psi, &grid)?;
            info.insert("c_psi".into(), adm.c_psi.into());
            Ok(vec![Check::at_most(ADMISSIBILITY.0, ADMISSIBILITY.1, (adm.c_psi - MEXICAN_HAT_C_PSI).abs(), 0.0, 1e-4)])
        }));
    }
    checks.extend(guarded(&[CALDERON, ORDER_LOWER, ORDER_UPPER], || {
        let signal = match &opts.signal {
            Some(s) => s.clone(),
            None => {
                let band = match opts.band {
                    Some(b) => b,
                    None => {
                        let c_plus =
                            tf_frames::admissibility_constant(&opts.psi, &tf_frames::reference_frequency_grid())?
                                .c_plus;
                        tf_frames::covered_band(&opts.psi, &opts.grid, opts.d, c_plus)
                            .ok_or_else(|| Error::InvalidParameter("the scale grid covers no frequency".into()))?
                    }
                };
                tf_frames::band_bump(opts.d, band)
            }
        };
        if signal.dim() != opts.d {
            return Err(Error::shape(format!("signal length {} differs from d = {}", signal.dim(), opts.d)));
        }
        let coarse = tf_frames::calderon_residual(&opts.psi, &opts.grid, &signal)?;
        let fine = tf_frames::calderon_residual(&opts.psi, &opts.grid.with_scales(2 * opts.grid.n_a), &signal)?;
        let ratio = coarse.residual / fine.residual;
        info.insert("calderon".into(), serde_json::to_value(&coarse)?);
        info.insert("residual_refined".into(), fine.residual.into());
        info.insert("ratio".into(), ratio.into());
        let mut calderon = Check::at_most(CALDERON.0, CALDERON.1, coarse.residual, 0.0, 0.02);
        calderon.diagnostic = coarse.warning.clone();
        calderon.pass = calderon.pass && coarse.warning.is_none();
        Ok(vec![
            calderon,
            Check::at_least(ORDER_LOWER.0, ORDER_LOWER.1, ratio, 1.5, 0.0),
            Check::at_most(ORDER_UPPER.0, ORDER_UPPER.1, ratio, 3.0, 0.0),
        ])
    }));
    (checks, serde_json::Value::Object(info))
}

const CONTROL_IDENTITY: (&str, &str) = ("controlled.identity", "L_C = C S_F = S_F C^*");
const CONTROL_PRECONDITION: (&str, &str) = ("controlled.precondition", "D^{-1} M_{m,CF,DG} C^{-1} = M_{m,F,G}");
const CONTROL_SPECTRUM: (&str, &str) =
    ("controlled.spectral_mapping", "spec(L_C) = {φ(λ) λ : λ ∈ spec(S_F)} for C = φ(S_F)");

/// Spectral control kinds exercised by the controlled suite.
pub fn spectral_controls() -> Vec<ControlSpec> {
    vec![
        ControlSpec::Identity,
        ControlSpec::Inverse,
        ControlSpec::Sqrt,
        ControlSpec::Power { t: -0.7 },
        ControlSpec::Power { t: 1.5 },
        ControlSpec::Affine { alpha: 0.5, beta: 2.0 },
    ]
}

fn controlled_trial(r: &mut TrialRng, cfg: &SuiteConfig) -> Vec<Check> {
    let inst = instance(r, cfg);
    let specs = spectral_controls();
    let c_spec = &specs[r.gen_range(0..specs.len())];
    let d_spec = &specs[r.gen_range(0..specs.len())];
    guarded(&[CONTROL_IDENTITY, CONTROL_PRECONDITION, CONTROL_SPECTRUM], || {
        let c = controlled::make_control(c_spec, &inst.f)?;
        let identity = controlled::controlled_identity_residual(&c, &inst.f)?;
        let precondition = controlled::precondition_identity_residual(c_spec, d_spec, &inst.m, &inst.f, &inst.g)?;

        let (lambdas, _) = hilbert::hermitian_eigen(&inst.f.frame_operator().hermitian_part())?;
        let mut expected: Vec<f64> = lambdas.iter().map(|&l| c_spec.phi(l).expect("spectral kind") * l).collect();
        expected.sort_by(f64::total_cmp);
        let l = controlled::controlled_frame_operator(&c, &inst.f)?;
        let (mut actual, _) = hilbert::hermitian_eigen(&l.hermitian_part())?;
        actual.sort_by(f64::total_cmp);
        let scale = expected.iter().fold(1.0f64, |a, b| a.max(b.abs()));
        let spectral = expected.iter().zip(&actual).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale;

        let bounds = controlled::controlled_bounds(&c, &inst.f)?;
        let mut out = vec![
            Check::at_most(CONTROL_IDENTITY.0, CONTROL_IDENTITY.1, identity, 0.0, 1e-10),
            Check::at_most(CONTROL_PRECONDITION.0, CONTROL_PRECONDITION.1, precondition, 0.0, 1e-10),
            Check::at_most(CONTROL_SPECTRUM.0, CONTROL_SPECTRUM.1, spectral, 0.0, 1e-10),
        ];
        out.extend(bounds.checks);
        Ok(out)
    })
}

/// Draws until the multiplier is invertible; gives up after this many tries.
const MAX_DRAWS: usize = 32;

fn invertible_instance(r: &mut TrialRng, cfg: &SuiteConfig) -> Result<Instance> {
    for _ in 0..MAX_DRAWS {
        let inst = instance(r, cfg);
        let m = multiplier::multiplier(&inst.m, &inst.f, &inst.g)?;
        let s = hilbert::singular_values(&m)?;
        // keep a margin above the inversion cutoff so the instance is usable
        if s.smallest() > 1e-8 * s.largest() {
            return Ok(inst);
        }
    }
    Err(Error::NumericFailure(format!("no invertible multiplier in {MAX_DRAWS} draws")))
}

const CERTIFICATE_IDS: [(&str, &str); 5] = [
    ("certificate.mbar_f.lower", "A_{conj(m)F} ≥ 1 / (B_G ‖(M^*)^{-1}‖²)"),
    ("certificate.m_g.lower", "A_{mG} ≥ 1 / (B_F ‖M^{-1}‖²)"),
    ("certificate.weighted.frames", "conj(m)F and mG are frames"),
    ("certificate.f.lower", "A_F ≥ A_{conj(m)F} / ‖m‖_∞²"),
    ("certificate.g.lower", "F and G are frames, A_G ≥ A_{mG} / ‖m‖_∞²"),
];
const DUAL: (&str, &str) = ("weighted.dual_from_multiplier", "Σ w_j G_j H_j^* = I, H = (M^{-1})^* conj(m) F");

fn certificate_trial(r: &mut TrialRng, cfg: &SuiteConfig) -> Vec<Check> {
    guarded(&CERTIFICATE_IDS, || {
        let inst = invertible_instance(r, cfg)?;
        Ok(multiplier::lower_bound_certificates(&inst.m, &inst.f, &inst.g)?.checks)
    })
}

fn dual_trial(r: &mut TrialRng, cfg: &SuiteConfig) -> Vec<Check> {
    guarded(&[DUAL], || {
        let inst = invertible_instance(r, cfg)?;
        let h = multiplier::dual_from_multiplier(&inst.m, &inst.f, &inst.g)?;
        let res = frame::dual_residual(&h, &inst.g)?;
        Ok(vec![Check::at_most(DUAL.0, DUAL.1, res, 0.0, 1e-9)])
    })
}

/// Grid sizes of the unbounded Bessel demonstration.
pub const BESSEL_SIZES: [usize; 3] = [100, 1_000, 10_000];

/// `‖a‖²_{L²[−2,2]}` for `a² = b`: `∫_{−1}^{1} |x|^{−1/2} dx + 2∫_1^2 x^{−2} dx = 4 + 1`.
pub const BESSEL_A_NORM_SQ: f64 = 5.0;

const BESSEL_BOUND: (&str, &str) = ("bessel.unbounded.bound", "B ≤ ‖h‖² ‖a‖²_{L²}");
const BESSEL_UNIFORM: (&str, &str) = ("bessel.unbounded.uniform", "sup_n B_n < ∞");
const BESSEL_GROWTH: (&str, &str) = ("bessel.unbounded.growth", "sup_x ‖a(x) h‖ grows like n^{1/4}");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselRow {
    pub n: usize,
    pub bessel_bound: f64,
    pub norm_bound: f64,
}

/// Bessel bound and norm bound of `x ↦ a(x) h` on midpoint grids of `[−2, 2]`.
pub fn unbounded_bessel_rows(h: &Vector, sizes: &[usize]) -> Result<Vec<BesselRow>> {
    sizes
        .iter()
        .map(|&n| {
            let space = measure::uniform_grid_1d(-2.0, 2.0, n)?;
            let f = frame::scaled_singleton(&space, h)?;
            Ok(BesselRow { n, bessel_bound: f.frame_bounds()?.upper, norm_bound: f.norm_bound() })
        })
        .collect()
}

fn unbounded_bessel(seed: u64) -> (Vec<Check>, serde_json::Value) {
    let mut r = stream_rng(seed, Stream::Bessel, 0);
    let h = random::random_vector(&mut r, 3);
    let mut info = serde_json::Value::Null;
    let checks = guarded(&[BESSEL_BOUND, BESSEL_UNIFORM, BESSEL_GROWTH], || {
        let rows = unbounded_bessel_rows(&h, &BESSEL_SIZES)?;
        let cap = h.norm() * h.norm() * BESSEL_A_NORM_SQ;
        let mut out = Vec::new();
        for row in &rows {
            out.push(Check::at_most(BESSEL_BOUND.0, BESSEL_BOUND.1, row.bessel_bound, cap, 1e-10 * cap));
        }
        let hi = rows.iter().map(|r| r.bessel_bound).fold(0.0, f64::max);
        let lo = rows.iter().map(|r| r.bessel_bound).fold(f64::INFINITY, f64::min);
        // the Bessel bounds converge, so their spread across n stays within a few percent
        out.push(Check::at_most(BESSEL_UNIFORM.0, BESSEL_UNIFORM.1, hi / lo, 1.1, 0.0));
        for w in rows.windows(2) {
            let decades = (w[1].n as f64 / w[0].n as f64).log10();
            let per_decade = (w[1].norm_bound / w[0].norm_bound).powf(1.0 / decades);
            out.push(Check::at_least(BESSEL_GROWTH.0, BESSEL_GROWTH.1, per_decade, 1.5, 0.0));
        }
        info = serde_json::to_value(&rows)?;
        Ok(out)
    });
    (checks, info)
}

/// Gabor frame summary for one window as a report.
pub fn run_gabor(d: usize, window: &WindowSpec) -> Result<Report> {
    let started = report::now();
    let summary = gabor_summary(window, d)?;
    let check = Check::at_most(GABOR_TIGHT.0, GABOR_TIGHT.1, summary.residual, 0.0, 1e-10);
    Ok(Report::new("gabor", 0, started, vec![check]).detail("gabor", summary))
}

pub fn run_wavelet(opts: &WaveletOptions) -> Result<Report> {
    let started = report::now();
    // surface an inadmissible profile as an error rather than a failed check
    tf_frames::wavelet_frame(&opts.psi, &tf_frames::WaveletGridSpec { n_a: 1, n_b: 1, ..opts.grid }.space()?, 1)?;
    let (checks, info) = wavelet_checks(opts);
    Ok(Report::new("wavelet", 0, started, checks).detail("wavelet", info))
}

/// Input of [`run_multiplier`]: frames in their JSON layout and a symbol on
/// the analysis frame's space. `g` defaults to `f`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplierConfig {
    pub f: SampledFrame,
    #[serde(default)]
    pub g: Option<SampledFrame>,
    pub symbol: SymbolData,
}

const MULT_FRAME_OPERATOR: (&str, &str) = ("multiplier.frame_operator", "M_{1,F,F} = S_F");

/// Budgets and adjoint identity for one configured multiplier, with its
/// singular values.
pub fn run_multiplier(config: &MultiplierConfig) -> Result<(Report, hilbert::SchattenSpectrum)> {
    let started = report::now();
    let f = &config.f;
    let g = config.g.as_ref().unwrap_or(f);
    let m = Symbol::from_data(f.space(), &config.symbol)?;
    let big_m = multiplier::multiplier(&m, f, g)?;
    let spectrum = hilbert::singular_values(&big_m)?;
    let budget = multiplier::bound_budget(&m, f, g)?;
    let mut checks = budget.checks.clone();
    let swapped = multiplier::multiplier(&m.conj(), g, f)?;
    let adj = relative(hilbert::operator_norm(&big_m.adjoint().sub(&swapped)?)?, hilbert::operator_norm(&big_m)?);
    checks.push(Check::at_most(ADJOINT.0, ADJOINT.1, adj, 0.0, 1e-12));
    let unit = m.values().iter().all(|v| *v == Complex64::new(1.0, 0.0));
    if unit && g == f {
        let s = f.frame_operator();
        let err = relative(hilbert::operator_norm(&big_m.sub(&s)?)?, hilbert::operator_norm(&s)?);
        checks.push(Check::at_most(MULT_FRAME_OPERATOR.0, MULT_FRAME_OPERATOR.1, err, 0.0, 1e-12));
    }
    let report = Report::new("multiplier", 0, started, checks)
        .detail("budgets", &budget)
        .detail("singular_values", &spectrum.singular_values);
    Ok((report, spectrum))
}
