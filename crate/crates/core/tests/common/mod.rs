//! Helpers shared by the integration and acceptance tests.
#![allow(dead_code)]

pub mod shortlen_fixtures;

use coupler::{CouplerParams, InputSpec};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn polar(rng: &mut impl Rng, max_abs: f64) -> Complex64 {
    Complex64::from_polar(
        rng.random_range(0.0..max_abs),
        rng.random_range(0.0..std::f64::consts::TAU),
    )
}

/// All six couplings with magnitudes below `max_abs` and uniform phases.
pub fn random_params(rng: &mut impl Rng, max_abs: f64) -> CouplerParams {
    CouplerParams {
        g_s1: polar(rng, max_abs),
        g_a1: polar(rng, max_abs),
        g_s2: polar(rng, max_abs),
        g_a2: polar(rng, max_abs),
        kappa_s: polar(rng, max_abs),
        kappa_a: polar(rng, max_abs),
        ..Default::default()
    }
}

/// Coherent, squeezed and chaotic components drawn independently per mode.
pub fn random_inputs(rng: &mut impl Rng) -> [InputSpec; 6] {
    std::array::from_fn(|_| InputSpec {
        xi: polar(rng, 2.0),
        r: rng.random_range(0.0..0.5),
        theta: rng.random_range(-3.0..3.0),
        n_ch: rng.random_range(0.0..1.0),
    })
}

/// Chebyshev points of the first kind mapped to `[a, b]`.
pub fn chebyshev_nodes(n: usize, a: f64, b: f64) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let t = (std::f64::consts::PI * (2 * k + 1) as f64 / (2 * n) as f64).cos();
            0.5 * (a + b) + 0.5 * (b - a) * t
        })
        .collect()
}

/// Monomial coefficients of the degree-`degree` interpolant of `f` on `[a, b]`.
/// Exact (up to rounding) when `f` is a polynomial of at most that degree.
pub fn poly_coefficients(f: impl Fn(f64) -> f64, degree: usize, a: f64, b: f64) -> Vec<f64> {
    let nodes = chebyshev_nodes(degree + 1, a, b);
    let v = DMatrix::from_fn(degree + 1, degree + 1, |i, j| nodes[i].powi(j as i32));
    let y = DVector::from_iterator(degree + 1, nodes.iter().map(|&z| f(z)));
    let sol = v.lu().solve(&y).expect("Chebyshev Vandermonde matrix is regular");
    sol.iter().copied().collect()
}

/// Largest deviation between the low-order coefficients of `got` and `want`.
pub fn coefficient_mismatch(got: &[f64], want: &[f64]) -> f64 {
    let n = got.len().max(want.len());
    (0..n)
        .map(|k| (got.get(k).copied().unwrap_or(0.0) - want.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn interpolation_recovers_polynomials() {
    let p = |z: f64| 1.5 - 2.0 * z + 0.25 * z.powi(3) - 3.0 * z.powi(6);
    let got = poly_coefficients(p, 8, -1.0, 1.0);
    let want = [1.5, -2.0, 0.0, 0.25, 0.0, 0.0, -3.0, 0.0, 0.0];
    assert!(coefficient_mismatch(&got, &want) < 1e-12);
}
