//! Controlled frames: `L_C = C S_F` for a control operator `C ∈ GL(ℂ^d)`,
//! and the preconditioning identity for multipliers of controlled families.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{self, SampledFrame};
use crate::hilbert::{self, Operator, INVERT_RCOND};
use crate::measure::Symbol;
use crate::multiplier::multiplier;
use crate::report::Check;

/// Hermitian, positivity and commutation tolerance for control operators.
pub const CONTROL_TOL: f64 = 1e-10;

/// A control operator, either a scalar function applied to the spectrum of
/// `S_F` or an explicit matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ControlSpec {
    Identity,
    Inverse,
    Sqrt,
    Power {
        t: f64,
    },
    /// `φ(λ) = alpha + beta·λ`.
    Affine {
        alpha: f64,
        beta: f64,
    },
    Explicit {
        operator: Operator,
    },
}

impl ControlSpec {
    /// The scalar map for spectral kinds; `None` for explicit operators.
    pub fn phi(&self, lambda: f64) -> Option<f64> {
        match self {
            ControlSpec::Identity => Some(lambda),
            ControlSpec::Inverse => Some(1.0 / lambda),
            ControlSpec::Sqrt => Some(lambda.sqrt()),
            ControlSpec::Power { t } => Some(lambda.powf(*t)),
            ControlSpec::Affine { alpha, beta } => Some(alpha + beta * lambda),
            ControlSpec::Explicit { .. } => None,
        }
    }
}

/// `C = φ(S_F)` by eigendecomposition, or the explicit operator after a
/// dimension and invertibility check.
pub fn make_control(spec: &ControlSpec, f: &SampledFrame) -> Result<Operator> {
    let c = match spec {
        ControlSpec::Explicit { operator } => {
            if operator.dim() != f.dim() {
                return Err(Error::shape("control operator and frame dimensions differ"));
            }
            operator.clone()
        }
        _ => {
            let bounds = f.frame_bounds()?;
            if !bounds.is_frame {
                return Err(Error::NotAFrame { lower: bounds.lower });
            }
            let (values, vectors) = hilbert::hermitian_eigen(&f.frame_operator().hermitian_part())?;
            let mapped: Vec<f64> = values.iter().map(|&l| spec.phi(l).expect("spectral kind")).collect();
            if mapped.iter().any(|v| !v.is_finite()) {
                return Err(Error::NumericFailure("control function is not finite on the spectrum".into()));
            }
            let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                mapped.len(),
                mapped.iter().map(|v| Complex64::new(*v, 0.0)),
            ));
            Operator::from_matrix(&vectors * diag * vectors.adjoint())?
        }
    };
    let spectrum = hilbert::singular_values(&c)?;
    if !(spectrum.smallest() > INVERT_RCOND * spectrum.largest()) {
        return Err(Error::NotInvertible { sigma_min: spectrum.smallest(), sigma_max: spectrum.largest() });
    }
    Ok(c)
}

/// `L_C = Σ_j w_j (C F_j) F_j^*`.
pub fn controlled_frame_operator(c: &Operator, f: &SampledFrame) -> Result<Operator> {
    let cf = f.map_columns(c)?;
    Ok(Operator::from_matrix_unchecked(frame::weighted_columns(&cf) * f.vectors().adjoint()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlledBounds {
    /// Optimal lower controlled bound `m_CL`.
    pub lower: f64,
    /// Optimal upper controlled bound `M_CL`.
    pub upper: f64,
    pub is_controlled_frame: bool,
    pub checks: Vec<Check>,
}

/// Extreme eigenvalues of `C S_F` for a self-adjoint positive `C` that
/// commutes with `S_F`.
pub fn controlled_bounds(c: &Operator, f: &SampledFrame) -> Result<ControlledBounds> {
    if c.dim() != f.dim() {
        return Err(Error::shape("control operator and frame dimensions differ"));
    }
    let s = f.frame_operator();
    let scale = c.frobenius_norm().max(f64::MIN_POSITIVE);
    if !c.is_hermitian(CONTROL_TOL) {
        return Err(Error::ContractViolation("control operator must be self-adjoint".into()));
    }
    if !hilbert::is_positive(c, CONTROL_TOL) {
        return Err(Error::ContractViolation("control operator must be positive".into()));
    }
    let commutator = c.compose(&s)?.sub(&s.compose(c)?)?.frobenius_norm();
    if commutator > CONTROL_TOL * scale * s.frobenius_norm().max(1.0) {
        return Err(Error::ContractViolation(format!(
            "control operator must commute with the frame operator (commutator {commutator:e})"
        )));
    }
    let l = controlled_frame_operator(c, f)?;
    let (lo, hi) = hilbert::hermitian_bounds(&l.hermitian_part())?;
    let upper = hi.max(0.0);
    let lower = lo.clamp(0.0, upper);
    let is_controlled_frame = lower > frame::IS_FRAME_RTOL * upper.max(1.0);
    let f_is_frame = f.frame_bounds()?.is_frame;
    let checks = vec![
        Check::holds(
            "controlled.implies_frame",
            "m_CL > 0 ⇒ F is a frame (S_F = C^{-1} L_C)",
            !is_controlled_frame || f_is_frame,
        ),
        Check::holds("controlled.positive", "L_C ≥ 0", hilbert::is_positive(&l, CONTROL_TOL)),
    ];
    Ok(ControlledBounds { lower, upper, is_controlled_frame, checks })
}

/// `max(‖L_C − C S_F‖, ‖L_C − S_F C^*‖) / max(‖L_C‖, 1)` in operator norm.
pub fn controlled_identity_residual(c: &Operator, f: &SampledFrame) -> Result<f64> {
    let l = controlled_frame_operator(c, f)?;
    let s = f.frame_operator();
    let left = hilbert::operator_norm(&l.sub(&c.compose(&s)?)?)?;
    let right = hilbert::operator_norm(&l.sub(&s.compose(&c.adjoint())?)?)?;
    Ok(left.max(right) / hilbert::operator_norm(&l)?.max(1.0))
}

/// `‖D^{-1} M_{m,CF,DG} C^{-1} − M_{m,F,G}‖ / ‖M_{m,F,G}‖` for given controls.
pub fn precondition_residual(
    c: &Operator,
    d: &Operator,
    m: &Symbol,
    f: &SampledFrame,
    g: &SampledFrame,
) -> Result<f64> {
    let plain = multiplier(m, f, g)?;
    let controlled = multiplier(m, &f.map_columns(c)?, &g.map_columns(d)?)?;
    let recovered = hilbert::invert(d)?.compose(&controlled)?.compose(&hilbert::invert(c)?)?;
    let scale = hilbert::operator_norm(&plain)?;
    let err = hilbert::operator_norm(&recovered.sub(&plain)?)?;
    Ok(if scale > 0.0 { err / scale } else { err })
}

/// [`precondition_residual`] with `C` built from `F` and `D` from `G`.
pub fn precondition_identity_residual(
    c_spec: &ControlSpec,
    d_spec: &ControlSpec,
    m: &Symbol,
    f: &SampledFrame,
    g: &SampledFrame,
) -> Result<f64> {
    let c = make_control(c_spec, f)?;
    let d = make_control(d_spec, g)?;
    precondition_residual(&c, &d, m, f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{counting_space, MeasureSpace};
    use crate::random::{random_frame, random_space, random_symbol, trial_rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn instance(seed: u64) -> (MeasureSpace, SampledFrame, SampledFrame, Symbol) {
        let mut r = trial_rng(seed, 0);
        let space = random_space(&mut r, 16);
        let f = random_frame(&mut r, &space, 4);
        let g = random_frame(&mut r, &space, 4);
        let m = random_symbol(&mut r, &space);
        (space, f, g, m)
    }

    fn spectral_specs() -> Vec<ControlSpec> {
        vec![
            ControlSpec::Identity,
            ControlSpec::Inverse,
            ControlSpec::Sqrt,
            ControlSpec::Power { t: -0.7 },
            ControlSpec::Power { t: 1.5 },
            ControlSpec::Affine { alpha: 0.5, beta: 2.0 },
        ]
    }

    #[test]
    fn make_control_examples() {
        let (_, f, _, _) = instance(1);
        let s = f.frame_operator();
        let ci = make_control(&ControlSpec::Identity, &f).unwrap();
        assert!(ci.sub(&s).unwrap().max_abs_entry() <= 1e-12 * s.max_abs_entry());

        let tight = frame::tight_from_partition(&counting_space(6).unwrap(), 3).unwrap().scale(c(2.0, 0.0));
        let inv = make_control(&ControlSpec::Inverse, &tight).unwrap();
        assert!(inv.sub(&Operator::identity(3).scale(c(0.25, 0.0))).unwrap().max_abs_entry() < 1e-14);

        for spec in spectral_specs() {
            let cc = make_control(&spec, &f).unwrap();
            let comm = cc.compose(&s).unwrap().sub(&s.compose(&cc).unwrap()).unwrap();
            assert!(hilbert::operator_norm(&comm).unwrap() <= 1e-10 * s.frobenius_norm() * cc.frobenius_norm());
        }

        let singular = ControlSpec::Explicit { operator: Operator::zeros(4) };
        assert!(matches!(make_control(&singular, &f), Err(Error::NotInvertible { .. })));
        let zero_map = ControlSpec::Affine { alpha: 0.0, beta: 0.0 };
        assert!(matches!(make_control(&zero_map, &f), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn controlled_operator_examples() {
        let (_, f, _, _) = instance(2);
        let s = f.frame_operator();
        let l = controlled_frame_operator(&Operator::identity(4), &f).unwrap();
        assert!(l.sub(&s).unwrap().max_abs_entry() <= 1e-14 * s.max_abs_entry());
        let s_inv = hilbert::invert(&s).unwrap();
        let l = controlled_frame_operator(&s_inv, &f).unwrap();
        assert!(l.sub(&Operator::identity(4)).unwrap().max_abs_entry() <= 1e-12);
        for spec in spectral_specs() {
            let cc = make_control(&spec, &f).unwrap();
            assert!(controlled_identity_residual(&cc, &f).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn controlled_bounds_examples() {
        let (_, f, _, _) = instance(3);
        let fb = f.frame_bounds().unwrap();
        let b = controlled_bounds(&Operator::identity(4), &f).unwrap();
        assert!((b.lower - fb.lower).abs() <= 1e-10 * fb.upper && (b.upper - fb.upper).abs() <= 1e-10 * fb.upper);
        let s = make_control(&ControlSpec::Identity, &f).unwrap();
        let b = controlled_bounds(&s, &f).unwrap();
        let sq = fb.upper * fb.upper;
        assert!((b.lower - fb.lower * fb.lower).abs() <= 1e-10 * sq);
        assert!((b.upper - sq).abs() <= 1e-10 * sq);
        assert!(b.checks.iter().all(|c| c.pass));

        let (eig, _) = hilbert::hermitian_eigen(&f.frame_operator().hermitian_part()).unwrap();
        for spec in spectral_specs() {
            let cc = make_control(&spec, &f).unwrap();
            let b = controlled_bounds(&cc, &f).unwrap();
            let mapped: Vec<f64> = eig.iter().map(|l| spec.phi(*l).unwrap() * l).collect();
            let lo = mapped.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = mapped.iter().cloned().fold(0.0, f64::max);
            assert!((b.lower - lo).abs() <= 1e-10 * hi, "{spec:?}");
            assert!((b.upper - hi).abs() <= 1e-10 * hi, "{spec:?}");
            assert!(b.is_controlled_frame);
        }
    }

    #[test]
    fn controlled_bounds_rejects_bad_controls() {
        let (_, f, _, _) = instance(4);
        let u = hilbert::random_unitary(4, 5);
        assert!(matches!(controlled_bounds(&u, &f), Err(Error::ContractViolation(_))));
        let neg = Operator::identity(4).scale(c(-1.0, 0.0));
        assert!(matches!(controlled_bounds(&neg, &f), Err(Error::ContractViolation(_))));
        // positive but not commuting with S_F
        let d = Operator::diagonal_real(&[1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(controlled_bounds(&d, &f), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn precondition_examples() {
        let (_, f, g, m) = instance(5);
        let i = ControlSpec::Explicit { operator: Operator::identity(4) };
        assert!(precondition_identity_residual(&i, &i, &m, &f, &g).unwrap() <= 1e-14);
        let r = precondition_identity_residual(&ControlSpec::Identity, &ControlSpec::Identity, &m, &f, &g).unwrap();
        assert!(r <= 1e-10);
        let alpha = Operator::identity(4).scale(c(2.5, 0.0));
        let beta = Operator::identity(4).scale(c(0.3, 0.0));
        assert!(precondition_residual(&alpha, &beta, &m, &f, &g).unwrap() <= 1e-12);
        for spec in spectral_specs() {
            for seed in 0..5 {
                let (_, f, g, m) = instance(100 + seed);
                assert!(precondition_identity_residual(&spec, &ControlSpec::Sqrt, &m, &f, &g).unwrap() <= 1e-10);
            }
        }
        let singular = ControlSpec::Explicit { operator: Operator::zeros(4) };
        assert!(matches!(precondition_identity_residual(&singular, &i, &m, &f, &g), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn control_spec_json() {
        let spec: ControlSpec = serde_json::from_str(r#"{"kind": "power", "t": 0.5}"#).unwrap();
        assert_eq!(spec, ControlSpec::Power { t: 0.5 });
        let v = serde_json::to_value(ControlSpec::Affine { alpha: 1.0, beta: 2.0 }).unwrap();
        assert_eq!(v, serde_json::json!({"kind": "affine", "alpha": 1.0, "beta": 2.0}));
        assert!(serde_json::from_str::<ControlSpec>(r#"{"kind": "bogus"}"#).is_err());
    }
}
