//! Non-relativistic solver: plane-wave scattering, bound states, the
//! explicit interaction-distribution coefficients and probability currents.
//!
//! Units: hbar = 1, 2m = 1, so E = k^2 for scattering and E = -kappa^2 for
//! bound states.

use num_complex::Complex;

use crate::error::{Error, Result, Side};
use crate::matrix::{C2, M2};
use crate::num::{cimag, creal, lit, phase, Scalar};
use crate::params::{
    unitary_to_interaction, ExtReal, InteractionParams, LambdaParams, SeparatedParams, Tolerances,
};

/// Wave function value and derivative on one side of the origin.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryState<T: Scalar> {
    pub psi: Complex<T>,
    pub dpsi: Complex<T>,
    pub side: Side,
}

impl<T: Scalar> BoundaryState<T> {
    pub fn new(psi: Complex<T>, dpsi: Complex<T>, side: Side) -> Self {
        BoundaryState { psi, dpsi, side }
    }

    pub fn vector(&self) -> C2<T> {
        C2::new(self.psi, self.dpsi)
    }
}

/// Coefficients of the interaction distribution
/// s[psi] = alpha0 delta + alpha1 delta'.
#[derive(Clone, Copy, Debug)]
pub struct InteractionCoefficients<T: Scalar> {
    pub alpha0: Complex<T>,
    pub alpha1: Complex<T>,
}

/// Which half-lines a bound state lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfLine {
    Both,
    LeftOnly,
    RightOnly,
}

#[derive(Clone, Copy, Debug)]
pub struct BoundState<T: Scalar> {
    /// Decay rate, kappa > 0.
    pub kappa: T,
    /// E = -kappa^2.
    pub energy: T,
    pub side: HalfLine,
    /// 2 for a double root of the matching condition.
    pub multiplicity: u8,
}

impl<T: Scalar> BoundState<T> {
    fn new(kappa: T, side: HalfLine, multiplicity: u8) -> Self {
        BoundState {
            kappa,
            energy: -kappa * kappa,
            side,
            multiplicity,
        }
    }
}

/// Reflection/transmission amplitudes with the current balance.
#[derive(Clone, Copy, Debug)]
pub struct ScatteringResult<T: Scalar> {
    pub r: Complex<T>,
    pub t: Complex<T>,
    /// Wavenumber the amplitudes were computed at (k for Schroedinger,
    /// k_r for Dirac).
    pub k: T,
    pub side: Side,
    /// Probability current at the incidence-side boundary of the origin.
    pub current_in: T,
    /// Probability current at the transmission-side boundary.
    pub current_out: T,
}

impl<T: Scalar> ScatteringResult<T> {
    pub fn reflection_probability(&self) -> T {
        self.r.norm_sqr()
    }

    pub fn transmission_probability(&self) -> T {
        self.t.norm_sqr()
    }

    pub fn unitarity_residual(&self) -> T {
        (self.r.norm_sqr() + self.t.norm_sqr() - T::one()).abs()
    }
}

/// Probability current j = -i (psi* psi' - psi*' psi) = 2 Im(psi* psi').
pub fn current<T: Scalar>(state: &BoundaryState<T>) -> T {
    let two = lit::<T>(2.0);
    two * (state.psi.conj() * state.dpsi).im
}

/// Boundary states of the scattering solution on both sides of the origin,
/// normalized to unit incident amplitude.
pub fn scattering_boundary_states<T: Scalar>(
    res: &ScatteringResult<T>,
) -> (BoundaryState<T>, BoundaryState<T>) {
    let one = creal(T::one());
    let ik = cimag(res.k);
    match res.side {
        Side::Left => (
            // psi = e^{ikx} + r e^{-ikx} for x < 0
            BoundaryState::new(one + res.r, ik * (one - res.r), Side::Left),
            // psi = t e^{ikx} for x > 0
            BoundaryState::new(res.t, ik * res.t, Side::Right),
        ),
        Side::Right => (
            // psi = e^{-ikx} + r e^{ikx} for x > 0
            BoundaryState::new(one + res.r, ik * (res.r - one), Side::Right),
            // psi = t e^{-ikx} for x < 0
            BoundaryState::new(res.t, -ik * res.t, Side::Left),
        ),
    }
}

/// Solve plane-wave scattering at wavenumber k for incidence from `side`.
pub fn scatter<T: Scalar>(
    params: &InteractionParams<T>,
    k: T,
    side: Side,
) -> Result<ScatteringResult<T>> {
    match params {
        InteractionParams::Lambda(l) => scatter_lambda(l, k, side),
        InteractionParams::Separated(s) => Ok(scatter_separated(s, k, side)),
        InteractionParams::Unitary(u) => {
            // reduce at the default scale L0 = 1
            let red = unitary_to_interaction(u, T::one(), &Tolerances::default());
            scatter(&red.params, k, side)
        }
    }
}

fn scatter_lambda<T: Scalar>(p: &LambdaParams<T>, k: T, side: Side) -> Result<ScatteringResult<T>> {
    let lam = p.matrix();
    let ik = cimag(k);
    let (m, rhs) = match side {
        Side::Left => {
            // Lambda (1+r, ik(1-r)) = (t, ik t)
            let m = M2::new(
                lam.e[0][0] - ik * lam.e[0][1],
                -creal(T::one()),
                lam.e[1][0] - ik * lam.e[1][1],
                -ik,
            );
            let rhs = C2::new(
                -(lam.e[0][0] + ik * lam.e[0][1]),
                -(lam.e[1][0] + ik * lam.e[1][1]),
            );
            (m, rhs)
        }
        Side::Right => {
            // Lambda (t, -ik t) = (1+r, ik(r-1))
            let m = M2::new(
                -creal(T::one()),
                lam.e[0][0] - ik * lam.e[0][1],
                -ik,
                lam.e[1][0] - ik * lam.e[1][1],
            );
            let rhs = C2::new(creal(T::one()), -ik);
            (m, rhs)
        }
    };
    let sol = m.solve(&rhs).ok_or(Error::SingularSystem)?;
    let (r, t) = (sol.0[0], sol.0[1]);
    finish(r, t, k, side)
}

fn scatter_separated<T: Scalar>(p: &SeparatedParams<T>, k: T, side: Side) -> ScatteringResult<T> {
    let ik = cimag(k);
    let r = match side {
        Side::Left => match p.h_minus {
            // ik(1 - r) = h_- (1 + r)
            ExtReal::Finite(h) => (ik - creal(h)) / (ik + creal(h)),
            ExtReal::Infinity => creal(-T::one()),
        },
        Side::Right => match p.h_plus {
            // ik(r - 1) = h_+ (1 + r)
            ExtReal::Finite(h) => (ik + creal(h)) / (ik - creal(h)),
            ExtReal::Infinity => creal(-T::one()),
        },
    };
    let res = ScatteringResult {
        r,
        t: creal(T::zero()),
        k,
        side,
        current_in: T::zero(),
        current_out: T::zero(),
    };
    let (sin, sout) = scattering_boundary_states(&res);
    ScatteringResult {
        current_in: current(&sin),
        current_out: current(&sout),
        ..res
    }
}

fn finish<T: Scalar>(
    r: Complex<T>,
    t: Complex<T>,
    k: T,
    side: Side,
) -> Result<ScatteringResult<T>> {
    let res = ScatteringResult {
        r,
        t,
        k,
        side,
        current_in: T::zero(),
        current_out: T::zero(),
    };
    let (sin, sout) = scattering_boundary_states(&res);
    Ok(ScatteringResult {
        current_in: current(&sin),
        current_out: current(&sout),
        ..res
    })
}

/// All bound states of the interaction.
///
/// For the Lambda form, matching psi = A e^{kappa x} (x < 0) with
/// B e^{-kappa x} (x > 0) across Lambda = e^{i phi} [[a, b], [c, d]] gives
/// B = e^{i phi} (a + b kappa) A and -kappa B = e^{i phi} (c + d kappa) A;
/// eliminating A, B (the phase cancels) leaves the real quadratic
/// b kappa^2 + (a + d) kappa + c = 0, solved for kappa > 0.
pub fn bound_states<T: Scalar>(params: &InteractionParams<T>) -> Result<Vec<BoundState<T>>> {
    match params {
        InteractionParams::Lambda(p) => bound_states_lambda(p),
        InteractionParams::Separated(s) => Ok(bound_states_separated(s)),
        InteractionParams::Unitary(u) => {
            let red = unitary_to_interaction(u, T::one(), &Tolerances::default());
            bound_states(&red.params)
        }
    }
}

fn bound_states_lambda<T: Scalar>(p: &LambdaParams<T>) -> Result<Vec<BoundState<T>>> {
    let zero = T::zero();
    let trace = p.a + p.d;
    if p.b == zero {
        if trace == zero {
            if p.c == zero {
                // degenerate matching condition 0 = 0; cannot occur for
                // ad - bc = 1 with real entries
                return Err(Error::NoDiscreteSpectrum);
            }
            return Ok(Vec::new());
        }
        let kappa = -p.c / trace;
        if kappa > zero {
            return Ok(vec![BoundState::new(kappa, HalfLine::Both, 1)]);
        }
        return Ok(Vec::new());
    }

    let disc = trace * trace - lit::<T>(4.0) * p.b * p.c;
    if disc < zero {
        return Ok(Vec::new());
    }
    let tol = lit::<T>(1e-14) * (trace * trace).max(T::one());
    if disc.abs() <= tol {
        let kappa = -trace / (lit::<T>(2.0) * p.b);
        if kappa > zero {
            return Ok(vec![BoundState::new(kappa, HalfLine::Both, 2)]);
        }
        return Ok(Vec::new());
    }
    // numerically stable quadratic roots
    let sq = disc.sqrt();
    let q = if trace >= zero {
        -(trace + sq) / lit::<T>(2.0)
    } else {
        -(trace - sq) / lit::<T>(2.0)
    };
    let mut roots = [q / p.b, p.c / q];
    if roots[0] > roots[1] {
        roots.swap(0, 1);
    }
    let mut out = Vec::new();
    for kappa in roots {
        if kappa > zero {
            out.push(BoundState::new(kappa, HalfLine::Both, 1));
        }
    }
    Ok(out)
}

fn bound_states_separated<T: Scalar>(s: &SeparatedParams<T>) -> Vec<BoundState<T>> {
    let mut out = Vec::new();
    // left half-line: psi = A e^{kappa x}, psi'(0-) = kappa psi(0-) => kappa = h_-
    if let ExtReal::Finite(h) = s.h_minus {
        if h > T::zero() {
            out.push(BoundState::new(h, HalfLine::LeftOnly, 1));
        }
    }
    // right half-line: psi = B e^{-kappa x}, psi'(0+) = -kappa psi(0+) => kappa = -h_+
    if let ExtReal::Finite(h) = s.h_plus {
        if h < T::zero() {
            out.push(BoundState::new(-h, HalfLine::RightOnly, 1));
        }
    }
    out.sort_by(|x, y| x.kappa.partial_cmp(&y.kappa).unwrap());
    out
}

/// Coefficients of the interaction distribution computed from one-sided
/// boundary data. For a left state this is
/// alpha0 = c e^{i phi} psi(0-) + (d e^{i phi} - 1) psi'(0-),
/// alpha1 = (a e^{i phi} - 1) psi(0-) + b e^{i phi} psi'(0-);
/// the right-state form uses the inverse matrix. Separated interactions need
/// both one-sided states: use [`separated_interaction_coefficients`].
pub fn interaction_coefficients<T: Scalar>(
    params: &InteractionParams<T>,
    state: &BoundaryState<T>,
) -> Result<InteractionCoefficients<T>> {
    let p = match params {
        InteractionParams::Lambda(p) => *p,
        InteractionParams::Separated(_) => return Err(Error::WrongVariant),
        InteractionParams::Unitary(u) => {
            let red = unitary_to_interaction(u, T::one(), &Tolerances::default());
            match red.params {
                InteractionParams::Lambda(p) => p,
                _ => return Err(Error::WrongVariant),
            }
        }
    };
    let one = creal(T::one());
    match state.side {
        Side::Left => {
            let ph = phase(p.phi);
            Ok(InteractionCoefficients {
                alpha0: ph * creal(p.c) * state.psi + (ph * creal(p.d) - one) * state.dpsi,
                alpha1: (ph * creal(p.a) - one) * state.psi + ph * creal(p.b) * state.dpsi,
            })
        }
        Side::Right => {
            let ph = phase(-p.phi);
            Ok(InteractionCoefficients {
                alpha0: ph * creal(p.c) * state.psi - (ph * creal(p.a) - one) * state.dpsi,
                alpha1: -((ph * creal(p.d) - one) * state.psi - ph * creal(p.b) * state.dpsi),
            })
        }
    }
}

/// Coefficients for a separated interaction from both one-sided states:
/// alpha0 = psi'(0+) - psi'(0-), alpha1 = psi(0+) - psi(0-); for states
/// satisfying the separated boundary conditions these equal the h-form
/// h_+ psi(0+) - h_- psi(0-) and its companion.
pub fn separated_interaction_coefficients<T: Scalar>(
    _params: &SeparatedParams<T>,
    left: &BoundaryState<T>,
    right: &BoundaryState<T>,
) -> Result<InteractionCoefficients<T>> {
    if left.side != Side::Left {
        return Err(Error::SideMismatch {
            expected: Side::Left,
            got: left.side,
        });
    }
    if right.side != Side::Right {
        return Err(Error::SideMismatch {
            expected: Side::Right,
            got: right.side,
        });
    }
    Ok(InteractionCoefficients {
        alpha0: right.dpsi - left.dpsi,
        alpha1: right.psi - left.psi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::LambdaParams;
    use crate::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c64(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    type P = InteractionParams<f64>;

    #[test]
    fn free_particle_is_transparent() {
        let res = scatter(&P::Lambda(LambdaParams::identity()), 1.0, Side::Left).unwrap();
        assert!(res.r.norm() < 1e-14);
        assert!((res.t - c64(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn delta_amplitudes_match_formula() {
        // r = gamma/(2ik - gamma), t = 2ik/(2ik - gamma)
        for gamma in [-2.0, 1.5, 4.0] {
            for k in [0.5, 1.0, 2.0] {
                let res = scatter(&P::Lambda(LambdaParams::delta(gamma)), k, Side::Left).unwrap();
                let denom = c64(-gamma, 2.0 * k);
                let r = c64(gamma, 0.0) / denom;
                let t = c64(0.0, 2.0 * k) / denom;
                assert!((res.r - r).norm() < 1e-13);
                assert!((res.t - t).norm() < 1e-13);
                assert!(res.unitarity_residual() < 1e-13);
            }
        }
    }

    #[test]
    fn dirichlet_and_neumann_walls() {
        let wall = P::Separated(SeparatedParams::new(ExtReal::Infinity, ExtReal::Infinity));
        for k in [0.3, 1.0, 5.0] {
            let res = scatter(&wall, k, Side::Left).unwrap();
            assert!((res.r - c64(-1.0, 0.0)).norm() < 1e-14);
            assert!(res.t.norm() == 0.0);
        }
        let neumann = P::Separated(SeparatedParams::new(
            ExtReal::Finite(0.0),
            ExtReal::Finite(0.0),
        ));
        let res = scatter(&neumann, 1.7, Side::Left).unwrap();
        assert!((res.r - c64(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn separated_currents_vanish() {
        let p = P::Separated(SeparatedParams::new(
            ExtReal::Finite(1.2),
            ExtReal::Finite(-0.4),
        ));
        for side in [Side::Left, Side::Right] {
            let res = scatter(&p, 0.9, side).unwrap();
            assert!(res.current_in.abs() < 1e-12);
            assert!(res.current_out.abs() < 1e-12);
            assert!((res.r.norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn current_examples() {
        let plane = BoundaryState::new(c64(1.0, 0.0), c64(0.0, 1.0), Side::Left);
        assert!((current(&plane) - 2.0).abs() < 1e-15);
        let real = BoundaryState::new(c64(1.0, 0.0), c64(0.7, 0.0), Side::Left);
        assert!(current(&real).abs() < 1e-15);
    }

    #[test]
    fn current_balance_random_lambda() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let p: LambdaParams<f64> = sample::sample_lambda(&mut rng);
            for side in [Side::Left, Side::Right] {
                let res = scatter(&P::Lambda(p), 1.3, side).unwrap();
                assert!((res.current_in - res.current_out).abs() < 1e-10);
                assert!(res.unitarity_residual() < 1e-10);
            }
        }
    }

    #[test]
    fn free_particle_has_no_bound_state() {
        assert!(bound_states(&P::Lambda(LambdaParams::identity()))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn delta_bound_state() {
        // 2 kappa + gamma = 0 => kappa = 1 for gamma = -2
        let states = bound_states(&P::Lambda(LambdaParams::delta(-2.0))).unwrap();
        assert_eq!(states.len(), 1);
        assert!((states[0].kappa - 1.0).abs() < 1e-12);
        assert!((states[0].energy - -1.0).abs() < 1e-12);
        assert_eq!(states[0].side, HalfLine::Both);
        // repulsive delta has none
        assert!(bound_states(&P::Lambda(LambdaParams::delta(2.0)))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn delta_prime_bound_state() {
        // b kappa^2 + 2 kappa = 0 => kappa = -2/b for b < 0
        let b = -2.0;
        let states = bound_states(&P::Lambda(LambdaParams::delta_prime(b))).unwrap();
        assert_eq!(states.len(), 1);
        assert!((states[0].kappa - (-2.0 / b)).abs() < 1e-12);
        assert!((states[0].energy - (-4.0 / (b * b))).abs() < 1e-12);
    }

    #[test]
    fn separated_bound_states() {
        let p = P::Separated(SeparatedParams::new(
            ExtReal::Finite(-0.5),
            ExtReal::Finite(2.0),
        ));
        let states = bound_states(&p).unwrap();
        assert_eq!(states.len(), 2);
        assert!(states
            .iter()
            .any(|s| s.side == HalfLine::RightOnly && (s.kappa - 0.5).abs() < 1e-14));
        assert!(states
            .iter()
            .any(|s| s.side == HalfLine::LeftOnly && (s.kappa - 2.0).abs() < 1e-14));
    }

    #[test]
    fn identity_coefficients_vanish() {
        let state = BoundaryState::new(c64(0.8, 0.1), c64(-0.3, 0.5), Side::Left);
        let co =
            interaction_coefficients(&P::Lambda(LambdaParams::identity()), &state).unwrap();
        assert!(co.alpha0.norm() < 1e-15);
        assert!(co.alpha1.norm() < 1e-15);
    }

    #[test]
    fn delta_coefficients_direct() {
        let gamma = 1.9;
        let state = BoundaryState::new(c64(1.0, 0.0), c64(0.0, 0.0), Side::Left);
        let co = interaction_coefficients(&P::Lambda(LambdaParams::delta(gamma)), &state).unwrap();
        assert!((co.alpha0 - c64(gamma, 0.0)).norm() < 1e-15);
        assert!(co.alpha1.norm() < 1e-15);
    }

    #[test]
    fn jump_reconstruction_random() {
        // oracle: apply Lambda to the left state and compute the jumps directly
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let p: LambdaParams<f64> = sample::sample_lambda(&mut rng);
            let left = BoundaryState::new(
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                Side::Left,
            );
            let phi_plus = p.matrix().mul_vec(&left.vector());
            let co = interaction_coefficients(&P::Lambda(p), &left).unwrap();
            assert!((phi_plus.0[1] - left.dpsi - co.alpha0).norm() < 1e-10);
            assert!((phi_plus.0[0] - left.psi - co.alpha1).norm() < 1e-10);
            // left/right consistency on the same solution
            let right = BoundaryState::new(phi_plus.0[0], phi_plus.0[1], Side::Right);
            let co_r = interaction_coefficients(&P::Lambda(p), &right).unwrap();
            assert!((co.alpha0 - co_r.alpha0).norm() < 1e-10);
            assert!((co.alpha1 - co_r.alpha1).norm() < 1e-10);
        }
    }

    #[test]
    fn separated_coefficients_match_h_form() {
        let (hp, hm) = (1.5, -0.7);
        let p = SeparatedParams::new(ExtReal::Finite(hp), ExtReal::Finite(hm));
        // states satisfying psi'(0+-) = h+- psi(0+-)
        let left = BoundaryState::new(c64(0.6, 0.2), c64(0.6 * hm, 0.2 * hm), Side::Left);
        let right = BoundaryState::new(c64(-0.3, 0.9), c64(-0.3 * hp, 0.9 * hp), Side::Right);
        let co = separated_interaction_coefficients(&p, &left, &right).unwrap();
        let alpha0_h = right.psi * c64(hp, 0.0) - left.psi * c64(hm, 0.0);
        assert!((co.alpha0 - alpha0_h).norm() < 1e-14);
        assert!((co.alpha1 - (right.psi - left.psi)).norm() < 1e-14);
        // side mismatch is rejected
        assert!(separated_interaction_coefficients(&p, &right, &left).is_err());
    }

    #[test]
    fn singular_lambda_is_reported() {
        // not a valid member (ad - bc = -1) but must fail cleanly: the
        // matching determinant lambda_21 - ik (a + d) - k^2 lambda_12 vanishes
        let p = LambdaParams::new(0.0, 1.0, 0.0, 0.0, -1.0);
        assert!(matches!(
            scatter_lambda(&p, 1.0, Side::Left),
            Err(Error::SingularSystem)
        ));
    }
}
