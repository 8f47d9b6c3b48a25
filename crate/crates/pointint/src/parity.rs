//! Parity classification of point interactions and the computational check
//! that no odd point interaction exists.
//!
//! Under space reflection an interaction is even iff its unitary matrix
//! satisfies z = z*, w = -w*; in boundary-matrix form a = d and phi = 0, and
//! for separated pairs h+ = -h- (both finite) or h+ = h- = infinity. The odd
//! condition A1 - A2 U~ = -(A1 - A2 U) pins U down to a single point whose
//! boundary matrix is the identity, i.e. no interaction at all.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, Side};
use crate::matrix::M2;
use crate::num::{cimag, creal, lit, Scalar};
use crate::params::{
    unitary_to_interaction, ExtReal, InteractionParams, SeparatedParams, Tolerances, UnitaryParams,
};
use crate::schrodinger::scatter;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityClass {
    Even,
    NoDefiniteParity,
}

const CLASSIFY_TOL: f64 = 1e-10;

/// Classify an interaction as even or of no definite parity.
pub fn classify<T: Scalar>(params: &InteractionParams<T>) -> ParityClass {
    let tol = lit::<T>(CLASSIFY_TOL);
    let even = match params {
        InteractionParams::Lambda(p) => {
            // phi ~ pi is the same matrix with flipped sign; a = d survives it
            let phi_zero = p.phi.abs() < tol || (p.phi - T::PI()).abs() < tol;
            phi_zero && (p.a - p.d).abs() < tol
        }
        InteractionParams::Separated(s) => match (s.h_plus, s.h_minus) {
            (ExtReal::Infinity, ExtReal::Infinity) => true,
            (ExtReal::Finite(hp), ExtReal::Finite(hm)) => (hp + hm).abs() < tol,
            // mixed finite/infinite pair: not reflection symmetric
            _ => false,
        },
        InteractionParams::Unitary(u) => u.z.im.abs() < tol && u.w.re.abs() < tol,
    };
    if even {
        ParityClass::Even
    } else {
        ParityClass::NoDefiniteParity
    }
}

/// True for the h+ = inf, h- finite (or vice versa) separated pairs, which
/// the classifier reports as having no definite parity.
pub fn is_mixed_separated<T: Scalar>(params: &InteractionParams<T>) -> bool {
    match params {
        InteractionParams::Separated(SeparatedParams { h_plus, h_minus }) => {
            h_plus.is_infinite() != h_minus.is_infinite()
        }
        _ => false,
    }
}

/// A1 = (1/2) [[-i, i], [1/L0, 1/L0]].
pub fn a1_matrix<T: Scalar>(l0: T) -> M2<T> {
    let half = lit::<T>(0.5);
    M2::new(
        cimag(-T::one()),
        cimag(T::one()),
        creal(l0.recip()),
        creal(l0.recip()),
    )
    .scale(creal(half))
}

/// A2 = (1/2) [[i, -i], [1/L0, 1/L0]].
pub fn a2_matrix<T: Scalar>(l0: T) -> M2<T> {
    let half = lit::<T>(0.5);
    M2::new(
        cimag(T::one()),
        cimag(-T::one()),
        creal(l0.recip()),
        creal(l0.recip()),
    )
    .scale(creal(half))
}

/// U~ = sigma1 U sigma1.
pub fn reflected_unitary<T: Scalar>(u: &UnitaryParams<T>) -> M2<T> {
    let m = u.matrix();
    M2::new(m.e[1][1], m.e[1][0], m.e[0][1], m.e[0][0])
}

/// Independent route to the boundary matrix: build M+- from the current
/// decomposition, form R+- = 1 - M+- and return R+^{-1} R-. Used as a
/// cross-check of the closed-form reduction.
pub fn lambda_from_r_matrices<T: Scalar>(u: &UnitaryParams<T>, l0: T) -> Option<M2<T>> {
    let half = creal(lit::<T>(0.5));
    let ph = crate::num::phase(u.theta);
    let one = creal(T::one());
    let i = cimag(T::one());
    let zpw = u.z + u.w.conj(); // z + w*
    let zmw = u.z - u.w.conj(); // z - w*
    let zcm = u.z.conj() - u.w; // z* - w
    let zcp = u.z.conj() + u.w; // z* + w
    let m_plus = M2::new(
        (one + ph * zpw) * half,
        -i * creal(l0) * (one + ph * zpw) * half,
        i * creal(l0.recip()) * (one - ph * zmw) * half,
        (one - ph * zmw) * half,
    );
    let m_minus = M2::new(
        -(-one - ph * zcm) * half,
        -(-i * creal(l0)) * (one + ph * zcm) * half,
        -(i * creal(l0.recip())) * (one - ph * zcp) * half,
        -(-one + ph * zcp) * half,
    );
    let r_plus = M2::identity().sub(&m_plus);
    let r_minus = M2::identity().sub(&m_minus);
    Some(r_plus.inverse()?.mul(&r_minus))
}

#[derive(Clone, Copy, Debug)]
pub struct OddCheck<T: Scalar> {
    pub is_odd_candidate: bool,
    pub lambda_is_identity: bool,
    /// Residual of the odd condition 2 A1 = A2 (U + U~).
    pub odd_residual: T,
    /// ||Lambda - 1||, infinity for the separated branch.
    pub identity_residual: T,
}

/// Check the odd-parity condition A1 - A2 U~ = -(A1 - A2 U) for a single
/// unitary parameter point, and whether its boundary matrix is the identity.
pub fn odd_condition_check<T: Scalar>(u: &UnitaryParams<T>, l0: T) -> OddCheck<T> {
    let a1 = a1_matrix(l0);
    let a2 = a2_matrix(l0);
    let um = u.matrix();
    let ut = reflected_unitary(u);
    let lhs = a1.sub(&a2.mul(&ut));
    let rhs = a1.sub(&a2.mul(&um));
    let odd_residual = lhs.add(&rhs).max_abs();

    let red = unitary_to_interaction(u, l0, &Tolerances::default());
    let identity_residual = match red.params {
        InteractionParams::Lambda(l) => l.matrix().sub(&M2::identity()).max_abs(),
        _ => T::infinity(),
    };
    OddCheck {
        is_odd_candidate: odd_residual < lit(1e-10),
        lambda_is_identity: identity_residual < lit(1e-8),
        odd_residual,
        identity_residual,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OddSearchReport<T: Scalar> {
    pub samples: u64,
    pub odd_candidates_found: u64,
    /// Every odd candidate found had an identity boundary matrix.
    pub all_identity: bool,
    /// Smallest odd-condition residual seen over non-candidate samples.
    pub min_residual: T,
}

/// Rejection-sampling search for odd interactions over the full (theta, z, w)
/// space. Deterministic for a fixed seed.
pub fn odd_search<T: Scalar>(samples: u64, seed: u64, l0: T) -> OddSearchReport<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = 0u64;
    let mut all_identity = true;
    let mut min_residual = T::infinity();
    for _ in 0..samples {
        let u: UnitaryParams<T> = crate::sample::sample_unitary(&mut rng);
        let check = odd_condition_check(&u, l0);
        if check.is_odd_candidate {
            found += 1;
            all_identity &= check.lambda_is_identity;
        } else {
            min_residual = min_residual.min(check.odd_residual);
        }
    }
    OddSearchReport {
        samples,
        odd_candidates_found: found,
        all_identity,
        min_residual,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Asymmetry<T: Scalar> {
    pub max_r_asymmetry: T,
    pub max_t_asymmetry: T,
}

/// Observable parity check: compare left- and right-incidence amplitudes over
/// a wavenumber grid.
pub fn reflection_symmetry_test<T: Scalar>(
    params: &InteractionParams<T>,
    k_grid: &[T],
) -> Result<Asymmetry<T>> {
    let mut max_r = T::zero();
    let mut max_t = T::zero();
    for &k in k_grid {
        let left = scatter(params, k, Side::Left)?;
        let right = scatter(params, k, Side::Right)?;
        max_r = max_r.max((left.r - right.r).norm());
        max_t = max_t.max((left.t - right.t).norm());
    }
    Ok(Asymmetry {
        max_r_asymmetry: max_r,
        max_t_asymmetry: max_t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::LambdaParams;
    use num_complex::Complex;

    type P = InteractionParams<f64>;

    fn c64(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn delta_and_delta_prime_are_even() {
        assert_eq!(classify(&P::Lambda(LambdaParams::delta(-2.0))), ParityClass::Even);
        assert_eq!(
            classify(&P::Lambda(LambdaParams::delta_prime(0.7))),
            ParityClass::Even
        );
    }

    #[test]
    fn nonzero_phase_has_no_definite_parity() {
        let p = LambdaParams::new(0.3, 1.0, 0.0, 0.0, 1.0);
        assert_eq!(classify(&P::Lambda(p)), ParityClass::NoDefiniteParity);
    }

    #[test]
    fn classify_invariant_under_sign_gauge() {
        // (phi, M) and (phi + pi, -M) must classify the same; phi just below
        // pi with negated entries represents the delta interaction
        let p = LambdaParams::new(std::f64::consts::PI - 1e-13, -1.0, 0.0, 2.0, -1.0);
        assert_eq!(classify(&P::Lambda(p)), ParityClass::Even);
    }

    #[test]
    fn separated_classification() {
        let even = SeparatedParams::new(ExtReal::Finite(1.5), ExtReal::Finite(-1.5));
        assert_eq!(classify(&P::Separated(even)), ParityClass::Even);
        let wall = SeparatedParams::new(ExtReal::Infinity, ExtReal::Infinity);
        assert_eq!(classify(&P::Separated(wall)), ParityClass::Even);
        let mixed = SeparatedParams::new(ExtReal::Infinity, ExtReal::Finite(0.0));
        assert_eq!(classify(&P::Separated(mixed)), ParityClass::NoDefiniteParity);
        assert!(is_mixed_separated(&P::Separated(mixed)));
        let skew = SeparatedParams::new(ExtReal::Finite(1.0), ExtReal::Finite(1.0));
        assert_eq!(classify(&P::Separated(skew)), ParityClass::NoDefiniteParity);
    }

    #[test]
    fn analytic_odd_point() {
        let u = UnitaryParams::new(
            std::f64::consts::FRAC_PI_2,
            c64(0.0, 0.0),
            c64(0.0, -1.0),
        );
        let check = odd_condition_check(&u, 1.0);
        assert!(check.is_odd_candidate);
        assert!(check.lambda_is_identity);
    }

    #[test]
    fn generic_point_is_not_odd() {
        let u = UnitaryParams::new(0.0, c64(1.0, 0.0), c64(0.0, 0.0));
        let check = odd_condition_check(&u, 1.0);
        assert!(!check.is_odd_candidate);
    }

    #[test]
    fn r_matrix_route_matches_closed_form() {
        let u = UnitaryParams::new(1.1, c64(0.3, -0.4), c64(0.5, 0.2 * f64::sqrt(11.5) / 2.0));
        // renormalize to the sphere
        let norm = (u.z.norm_sqr() + u.w.norm_sqr()).sqrt();
        let u = UnitaryParams::new(u.theta, u.z / norm, u.w / norm);
        let direct = lambda_from_r_matrices(&u, 1.0).unwrap();
        let red = unitary_to_interaction(&u, 1.0, &Tolerances::default());
        match red.params {
            InteractionParams::Lambda(l) => {
                assert!(l.matrix().sub(&direct).max_abs() < 1e-12);
            }
            other => panic!("expected lambda, got {other:?}"),
        }
    }

    #[test]
    fn even_interactions_scatter_symmetrically() {
        let asym = reflection_symmetry_test(
            &P::Lambda(LambdaParams::delta(-2.0)),
            &[0.5, 1.0, 2.0],
        )
        .unwrap();
        assert!(asym.max_r_asymmetry < 1e-10);
        assert!(asym.max_t_asymmetry < 1e-10);
    }

    #[test]
    fn uneven_diagonal_breaks_symmetry() {
        let p = LambdaParams::new(0.0, 2.0, 0.0, 0.0, 0.5);
        let asym = reflection_symmetry_test(&P::Lambda(p), &[1.0]).unwrap();
        assert!(asym.max_r_asymmetry > 1e-3);
    }

    #[test]
    fn small_odd_search_finds_no_counterexample() {
        let report = odd_search::<f64>(20_000, 42, 1.0);
        assert!(report.all_identity);
    }
}
