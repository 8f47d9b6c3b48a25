//! Seeded random parameter generators, shared by the search routines, the
//! CLI and the test suites.

use num_complex::Complex;
use rand::Rng;

use crate::dirac::DiracParams;
use crate::num::{lit, Scalar};
use crate::params::{LambdaParams, UnitaryParams};

/// Uniform theta on [0, pi); (z, w) uniform on the unit 3-sphere in C^2.
pub fn sample_unitary<T: Scalar, R: Rng>(rng: &mut R) -> UnitaryParams<T> {
    let theta = lit::<T>(rng.gen_range(0.0..std::f64::consts::PI));
    // four gaussians normalized => uniform on S^3
    loop {
        let g: [f64; 4] = std::array::from_fn(|_| {
            // Box-Muller
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        });
        let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]).sqrt();
        if norm < 1e-6 {
            continue;
        }
        let z = Complex::new(lit::<T>(g[0] / norm), lit::<T>(g[1] / norm));
        let w = Complex::new(lit::<T>(g[2] / norm), lit::<T>(g[3] / norm));
        return UnitaryParams::new(theta, z, w);
    }
}

/// Random Lambda-form parameters with bounded entries and ad - bc = 1.
pub fn sample_lambda<T: Scalar, R: Rng>(rng: &mut R) -> LambdaParams<T> {
    let phi = lit::<T>(rng.gen_range(0.0..std::f64::consts::PI));
    let (a, b, c, d) = sample_unimodular(rng);
    LambdaParams::new(phi, lit(a), lit(b), lit(c), lit(d))
}

/// Random non-separated Dirac parameters.
pub fn sample_dirac<T: Scalar, R: Rng>(rng: &mut R) -> DiracParams<T> {
    let phi_r = lit::<T>(rng.gen_range(0.0..std::f64::consts::PI));
    let (a, b, c, d) = sample_unimodular(rng);
    DiracParams::NonSeparated {
        phi_r,
        a_r: lit(a),
        b_r: lit(b),
        c_r: lit(c),
        d_r: lit(d),
    }
}

fn sample_unimodular<R: Rng>(rng: &mut R) -> (f64, f64, f64, f64) {
    loop {
        let a: f64 = rng.gen_range(-3.0..3.0);
        if a.abs() < 0.25 {
            continue;
        }
        let b: f64 = rng.gen_range(-3.0..3.0);
        let c: f64 = rng.gen_range(-3.0..3.0);
        let d = (1.0 + b * c) / a;
        if d.abs() > 10.0 {
            continue;
        }
        return (a, b, c, d);
    }
}
