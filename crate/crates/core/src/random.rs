//! Seeded generators for random test instances.
//!
//! Every instance of a property suite draws from its own stream derived from
//! `(master_seed, instance_index)`, so results do not depend on the order in
//! which instances are evaluated.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::frame::SampledFrame;
use crate::hilbert::{Operator, Vector};
use crate::measure::{MeasureSpace, Symbol};

pub type TrialRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream for instance `index` of a run seeded with `master`.
pub fn trial_rng(master: u64, index: u64) -> TrialRng {
    rng(splitmix64(splitmix64(master) ^ index.wrapping_mul(0xd1b5_4a32_d192_ed03)))
}

/// Standard complex normal: real and imaginary parts i.i.d. `N(0, 1/2)`.
pub fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    // column-major fill keeps the draw order independent of nalgebra internals
    let mut m = DMatrix::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = complex_normal(rng);
        }
    }
    m
}

pub fn random_vector<R: Rng>(rng: &mut R, d: usize) -> Vector {
    Vector::from_vec((0..d).map(|_| complex_normal(rng)).collect())
}

pub fn random_operator<R: Rng>(rng: &mut R, d: usize) -> Operator {
    Operator::from_matrix_unchecked(random_matrix(rng, d, d))
}

pub fn random_hermitian<R: Rng>(rng: &mut R, d: usize) -> Operator {
    let m = random_matrix(rng, d, d);
    Operator::from_matrix_unchecked((&m + m.adjoint()) * Complex64::new(0.5, 0.0))
}

/// `n` points with weights drawn uniformly from `[0.1, 2)`.
pub fn random_space<R: Rng>(rng: &mut R, n: usize) -> MeasureSpace {
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
    MeasureSpace::new((0..n).map(|j| vec![j as f64]).collect(), weights).expect("random weights are positive")
}

/// Gaussian columns; a frame with probability one when `N ≥ d`.
pub fn random_frame<R: Rng>(rng: &mut R, space: &MeasureSpace, d: usize) -> SampledFrame {
    SampledFrame::new(space.clone(), random_matrix(rng, d, space.len())).expect("gaussian entries are finite")
}

pub fn random_symbol<R: Rng>(rng: &mut R, space: &MeasureSpace) -> Symbol {
    Symbol::new(space, (0..space.len()).map(|_| complex_normal(rng)).collect()).expect("gaussian entries are finite")
}

/// Real symbol with values uniform in `[lo, hi)`.
pub fn random_real_symbol<R: Rng>(rng: &mut R, space: &MeasureSpace, lo: f64, hi: f64) -> Symbol {
    let vals: Vec<f64> = (0..space.len()).map(|_| rng.gen_range(lo..hi)).collect();
    Symbol::from_real(space, &vals).expect("uniform entries are finite")
}
