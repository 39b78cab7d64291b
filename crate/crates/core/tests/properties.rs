//! Randomized invariants across modules.

use cframes::frame::{self, SampledFrame};
use cframes::hilbert::{self, Operator, Vector};
use cframes::measure::{self, MeasureSpace, Symbol};
use cframes::multiplier;
use cframes::random::{random_frame, random_real_symbol, random_space, random_symbol, random_vector, rng, TrialRng};
use cframes::tf_frames::{self, WindowSpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn setup(seed: u64, d: usize, extra: usize) -> (TrialRng, MeasureSpace, SampledFrame) {
    let mut r = rng(seed);
    let space = random_space(&mut r, d + extra);
    let f = random_frame(&mut r, &space, d);
    (r, space, f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frame_energy_matches_frame_operator(seed in any::<u64>(), d in 1usize..7, extra in 0usize..12) {
        let (mut r, space, f) = setup(seed, d, extra);
        let v = random_vector(&mut r, d);
        let coeffs = frame::analysis(&f, &v).unwrap();
        let energy = space.integrate_real(&coeffs.iter().map(|c| c.norm_sqr()).collect::<Vec<_>>()).unwrap();
        let quad = hilbert::inner(&f.frame_operator().apply(&v).unwrap(), &v).unwrap();
        prop_assert!((energy - quad.re).abs() <= 1e-10 * energy.max(1.0));
        prop_assert!(quad.im.abs() <= 1e-10 * energy.max(1.0));
        let b = f.frame_bounds().unwrap();
        let nn = v.norm() * v.norm();
        prop_assert!(energy <= b.upper * nn * (1.0 + 1e-10) + 1e-12);
        prop_assert!(energy >= b.lower * nn * (1.0 - 1e-10) - 1e-12);
    }

    #[test]
    fn bessel_bound_is_attained_at_the_top_eigenvector(seed in any::<u64>(), d in 1usize..6, extra in 0usize..8) {
        let (_, space, f) = setup(seed, d, extra);
        let (values, vectors) = hilbert::hermitian_eigen(&f.frame_operator().hermitian_part()).unwrap();
        let top = Vector::from_dvector(vectors.column(d - 1).into_owned());
        let coeffs = frame::analysis(&f, &top).unwrap();
        let energy = space.integrate_real(&coeffs.iter().map(|c| c.norm_sqr()).collect::<Vec<_>>()).unwrap();
        prop_assert!((energy - values[d - 1]).abs() <= 1e-10 * values[d - 1].max(1.0));
        // the discrete Bessel bound never exceeds total mass times the largest column norm squared
        prop_assert!(values[d - 1] <= space.total_mass() * f.norm_bound().powi(2) * (1.0 + 1e-12));
    }

    #[test]
    fn multiplier_is_linear_in_the_symbol(seed in any::<u64>(), d in 1usize..6, extra in 0usize..8, a in -3.0f64..3.0) {
        let (mut r, space, f) = setup(seed, d, extra);
        let g = random_frame(&mut r, &space, d);
        let m1 = random_symbol(&mut r, &space);
        let m2 = random_symbol(&mut r, &space);
        let c = Complex64::new(a, 0.5);
        let lhs = multiplier::multiplier(&m1.scale(c).add(&m2).unwrap(), &f, &g).unwrap();
        let rhs = multiplier::multiplier(&m1, &f, &g).unwrap().scale(c).add(&multiplier::multiplier(&m2, &f, &g).unwrap()).unwrap();
        prop_assert!(multiplier::entrywise_residual(&lhs, &rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn budgets_dominate(seed in any::<u64>(), d in 1usize..6, extra in 0usize..10) {
        let (mut r, space, f) = setup(seed, d, extra);
        let g = random_frame(&mut r, &space, d);
        let m = random_symbol(&mut r, &space);
        let report = multiplier::bound_budget(&m, &f, &g).unwrap();
        prop_assert!(report.all_pass(), "{:?}", report.schatten);
    }

    #[test]
    fn positive_symbol_with_one_frame_gives_positive_multiplier(seed in any::<u64>(), d in 1usize..6, extra in 0usize..8) {
        let (mut r, space, f) = setup(seed, d, extra);
        let m = random_real_symbol(&mut r, &space, 0.0, 2.0);
        let op = multiplier::multiplier(&m, &f, &f).unwrap();
        prop_assert!(hilbert::is_positive(&op, 1e-10));
        // scaling by √m gives the same operator as the frame operator of the weighted frame
        let s = frame::weighted(&f, &m).unwrap().frame_operator();
        prop_assert!(multiplier::entrywise_residual(&op, &s).unwrap() <= 1e-12);
    }

    #[test]
    fn canonical_dual_is_a_dual(seed in any::<u64>(), d in 1usize..6, extra in 0usize..8) {
        let (_, _, f) = setup(seed, d, extra);
        let dual = frame::canonical_dual(&f).unwrap();
        prop_assert!(frame::dual_residual(&f, &dual).unwrap() <= 1e-9);
        prop_assert!(frame::dual_residual(&dual, &f).unwrap() <= 1e-9);
    }

    #[test]
    fn partition_frames_are_parseval(n in 1usize..40, k in 1usize..8, seed in any::<u64>()) {
        let mut r = rng(seed);
        let space = random_space(&mut r, n.max(k));
        let f = frame::tight_from_partition(&space, k).unwrap();
        let s = f.frame_operator();
        prop_assert!(s.sub(&Operator::identity(k)).unwrap().max_abs_entry() <= 1e-12);
    }

    #[test]
    fn gabor_systems_are_tight(d in 1usize..14, seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_vector(&mut r, d);
        let f = tf_frames::gabor_frame(&WindowSpec::from_vector(&g), d).unwrap();
        let b = f.frame_bounds().unwrap();
        let e = g.norm() * g.norm();
        prop_assert!((b.lower - e).abs() <= 1e-10 * e && (b.upper - e).abs() <= 1e-10 * e);
    }

    #[test]
    fn lp_norms_of_constants(c in 0.0f64..5.0, n in 1usize..20, p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, f64::INFINITY])) {
        let space = measure::uniform_grid_1d(0.0, 2.0, n).unwrap();
        let m = Symbol::constant(&space, Complex64::new(0.0, c)).unwrap();
        let expected = if p.is_infinite() { c } else { c * 2f64.powf(1.0 / p) };
        prop_assert!((measure::lp_norm(&space, &m, p).unwrap() - expected).abs() <= 1e-12 * expected.max(1.0));
    }
}
