//! Parameter representations of a point interaction and the conversions
//! between them.
//!
//! A point interaction at the origin is described either by
//! - a unitary matrix U = e^{i theta} [[z, w], [-w*, z*]] with |z|^2 + |w|^2 = 1,
//! - a boundary matrix Lambda = e^{i phi} [[a, b], [c, d]] with ad - bc = 1
//!   linking (psi, psi') across the origin, or
//! - a separated pair (h_plus, h_minus) in R union {inf} with
//!   psi'(0+-) = h+- psi(0+-), where the two half-lines decouple.
//!
//! The unitary form is the primitive one: the boundary matrix exists exactly
//! when w != 0, and the separated pair covers w = 0.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::M2;
use crate::num::{cimag, cplx, creal, lit, phase, Scalar};

/// A real number extended with a single (projective) infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal<T> {
    Finite(T),
    Infinity,
}

impl<T: Scalar> ExtReal<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::Infinity)
    }

    pub fn finite(&self) -> Option<T> {
        match self {
            ExtReal::Finite(x) => Some(*x),
            ExtReal::Infinity => None,
        }
    }
}

/// Tolerances used by validation and branch selection.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// A unitarity/unimodularity residual beyond this is an error.
    pub constraint: f64,
    /// |w| at or below this selects the separated branch.
    pub separated_w: f64,
    /// |w| below this (but above `separated_w`) flags poor conditioning.
    pub conditioning_w: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            constraint: 1e-9,
            separated_w: 1e-12,
            conditioning_w: 1e-6,
        }
    }
}

/// U-form parameters: U = e^{i theta} [[z, w], [-w*, z*]].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryParams<T: Scalar> {
    pub theta: T,
    pub z: Complex<T>,
    pub w: Complex<T>,
}

/// Lambda-form parameters: Lambda = e^{i phi} [[a, b], [c, d]], ad - bc = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaParams<T: Scalar> {
    pub phi: T,
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

/// Separated (w = 0) parameters: psi'(0+-) = h+- psi(0+-).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparatedParams<T: Scalar> {
    pub h_plus: ExtReal<T>,
    pub h_minus: ExtReal<T>,
}

/// Tagged union over the three representations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InteractionParams<T: Scalar> {
    Unitary(UnitaryParams<T>),
    Lambda(LambdaParams<T>),
    Separated(SeparatedParams<T>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    Nonrelativistic,
    Relativistic,
}

/// A 2x2 complex matrix linking boundary values across the origin.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryMatrix<T: Scalar> {
    pub entries: M2<T>,
    pub kind: MatrixKind,
}

fn check_angle<T: Scalar>(name: &'static str, x: T, tol: f64) -> Result<()> {
    let slack = lit::<T>(tol);
    if x < -slack || x >= T::PI() + slack {
        return Err(Error::ConstraintViolation {
            field: name,
            residual: x.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

impl<T: Scalar> UnitaryParams<T> {
    pub fn new(theta: T, z: Complex<T>, w: Complex<T>) -> Self {
        UnitaryParams { theta, z, w }
    }

    /// U = e^{i theta} [[z, w], [-w*, z*]].
    pub fn matrix(&self) -> M2<T> {
        let ph = phase(self.theta);
        M2::new(
            ph * self.z,
            ph * self.w,
            ph * -self.w.conj(),
            ph * self.z.conj(),
        )
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        check_angle("theta", self.theta, tol.constraint)?;
        let residual = (self.z.norm_sqr() + self.w.norm_sqr() - T::one()).abs();
        if residual > lit(tol.constraint) {
            return Err(Error::ConstraintViolation {
                field: "|z|^2 + |w|^2",
                residual: residual.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

impl<T: Scalar> LambdaParams<T> {
    pub fn new(phi: T, a: T, b: T, c: T, d: T) -> Self {
        LambdaParams { phi, a, b, c, d }
    }

    /// Identity boundary matrix (free particle).
    pub fn identity() -> Self {
        LambdaParams::new(T::zero(), T::one(), T::zero(), T::zero(), T::one())
    }

    /// The delta interaction of strength `gamma`: jump in psi' proportional to psi(0).
    pub fn delta(gamma: T) -> Self {
        LambdaParams::new(T::zero(), T::one(), T::zero(), gamma, T::one())
    }

    /// The delta-prime interaction of strength `b`: jump in psi proportional to psi'(0).
    pub fn delta_prime(b: T) -> Self {
        LambdaParams::new(T::zero(), T::one(), b, T::zero(), T::one())
    }

    /// Lambda = e^{i phi} [[a, b], [c, d]] as a complex matrix.
    pub fn matrix(&self) -> M2<T> {
        let ph = phase(self.phi);
        M2::new(
            ph * creal(self.a),
            ph * creal(self.b),
            ph * creal(self.c),
            ph * creal(self.d),
        )
    }

    pub fn boundary_matrix(&self) -> BoundaryMatrix<T> {
        BoundaryMatrix {
            entries: self.matrix(),
            kind: MatrixKind::Nonrelativistic,
        }
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        check_angle("phi", self.phi, tol.constraint)?;
        let residual = (self.a * self.d - self.b * self.c - T::one()).abs();
        if residual > lit(tol.constraint) {
            return Err(Error::ConstraintViolation {
                field: "ad - bc",
                residual: residual.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

impl<T: Scalar> SeparatedParams<T> {
    pub fn new(h_plus: ExtReal<T>, h_minus: ExtReal<T>) -> Self {
        SeparatedParams { h_plus, h_minus }
    }

    pub fn validate(&self, _tol: &Tolerances) -> Result<()> {
        for (name, h) in [("h_plus", self.h_plus), ("h_minus", self.h_minus)] {
            if let ExtReal::Finite(x) = h {
                if !x.is_finite() {
                    return Err(Error::ConstraintViolation {
                        field: name,
                        residual: f64::NAN,
                    });
                }
            }
        }
        Ok(())
    }
}

impl<T: Scalar> InteractionParams<T> {
    pub fn validate(self, tol: &Tolerances) -> Result<Self> {
        match &self {
            InteractionParams::Unitary(u) => u.validate(tol)?,
            InteractionParams::Lambda(l) => l.validate(tol)?,
            InteractionParams::Separated(s) => s.validate(tol)?,
        }
        Ok(self)
    }
}

/// Validate with default tolerances.
pub fn validate<T: Scalar>(params: InteractionParams<T>) -> Result<InteractionParams<T>> {
    params.validate(&Tolerances::default())
}

/// Result of reducing U-form parameters to the boundary relation.
#[derive(Clone, Copy, Debug)]
pub struct Reduction<T: Scalar> {
    pub params: InteractionParams<T>,
    /// Set when |w| is small enough that the Lambda entries are poorly
    /// conditioned (but above the separated-branch threshold).
    pub conditioning_warning: bool,
}

/// Normalize a scalar phase times a real matrix so that the phase lies in
/// [0, pi), absorbing sign flips of the matrix. The pair (phi, M) and
/// (phi + pi, -M) describe the same boundary matrix.
fn normalize_phase<T: Scalar>(phi0: T, m: [T; 4]) -> (T, [T; 4]) {
    let pi = T::PI();
    let mut n = (phi0 / pi).floor();
    let mut phi = phi0 - n * pi;
    // guard against phi == pi from rounding
    if phi >= pi {
        phi = phi - pi;
        n = n + T::one();
    }
    if phi < T::zero() {
        phi = T::zero();
    }
    let neg = n.to_i64().unwrap_or(0).rem_euclid(2) != 0;
    if neg {
        (phi, [-m[0], -m[1], -m[2], -m[3]])
    } else {
        (phi, m)
    }
}

/// Reduce U-form parameters to the boundary relation at scale `l0`.
///
/// When |w| is above the separated threshold this is Lambda = R+^{-1} R-,
/// which evaluates to (i/w*) [[sin t - Im z, L0 (cos t + Re z)],
/// [(Re z - cos t)/L0, sin t + Im z]]. When w vanishes the half-lines
/// decouple and the pair (h+, h-) is returned instead.
pub fn unitary_to_interaction<T: Scalar>(
    u: &UnitaryParams<T>,
    l0: T,
    tol: &Tolerances,
) -> Reduction<T> {
    let w_abs = u.w.norm();
    if w_abs <= lit(tol.separated_w) {
        let ph = phase(u.theta);
        let zp = u.z * ph; // z e^{i theta}
        let zm = u.z.conj() * ph; // z* e^{i theta}
        let two = lit::<T>(2.0);
        let h_plus = {
            let denom = (creal(T::one()) + zp).norm_sqr();
            if denom <= T::epsilon() * lit(16.0) {
                ExtReal::Infinity
            } else {
                ExtReal::Finite(two * zp.im / (l0 * denom))
            }
        };
        let h_minus = {
            let denom = (creal(T::one()) + zm).norm_sqr();
            if denom <= T::epsilon() * lit(16.0) {
                ExtReal::Infinity
            } else {
                ExtReal::Finite(-two * zm.im / (l0 * denom))
            }
        };
        return Reduction {
            params: InteractionParams::Separated(SeparatedParams::new(h_plus, h_minus)),
            conditioning_warning: false,
        };
    }

    let (sin_t, cos_t) = (u.theta.sin(), u.theta.cos());
    let m0 = [
        sin_t - u.z.im,
        l0 * (cos_t + u.z.re),
        (u.z.re - cos_t) / l0,
        sin_t + u.z.im,
    ];
    // Lambda = (i / w*) M0. Split the prefactor into modulus and phase; the
    // modulus 1/|w| rescales M0 to a unimodular real matrix.
    let zeta = cimag(T::one()) / u.w.conj();
    let phi0 = zeta.arg();
    let scale = w_abs.recip();
    let m = [m0[0] * scale, m0[1] * scale, m0[2] * scale, m0[3] * scale];
    let (phi, m) = normalize_phase(phi0, m);
    Reduction {
        params: InteractionParams::Lambda(LambdaParams::new(phi, m[0], m[1], m[2], m[3])),
        conditioning_warning: w_abs < lit(tol.conditioning_w),
    }
}

/// Invert the reduction: recover U-form parameters whose boundary matrix is
/// `p`. Closed-form inversion; the forward map is re-applied as a residual
/// check and `NoPreimage` signals a numerical pathology.
pub fn lambda_to_unitary<T: Scalar>(p: &LambdaParams<T>, l0: T) -> Result<UnitaryParams<T>> {
    let two = lit::<T>(2.0);
    let trace = p.a + p.d;
    let off = p.b / l0 - p.c * l0;
    let denom = (trace * trace + off * off).sqrt();
    if denom <= T::epsilon() {
        // unreachable for ad - bc = 1 (would force ad - bc < 0)
        return Err(Error::NoPreimage { residual: f64::INFINITY });
    }
    let mut eta = two / denom;
    let mut sin_t = trace * eta / two;
    let mut cos_t = off * eta / two;
    if sin_t < T::zero() || (sin_t == T::zero() && cos_t < T::zero()) {
        eta = -eta;
        sin_t = -sin_t;
        cos_t = -cos_t;
    }
    let theta = {
        let t = sin_t.atan2(cos_t);
        if t < T::zero() {
            t + T::PI()
        } else {
            t
        }
    };
    let z = cplx((p.b / l0 + p.c * l0) * eta / two, (p.d - p.a) * eta / two);
    // eta = -i e^{i phi} w*  =>  w = -i eta e^{i phi}
    let w = cimag(-eta) * phase(p.phi);
    let u = UnitaryParams::new(theta, z, w);

    // residual check through the forward map, gauge-free via the matrices
    let red = unitary_to_interaction(&u, l0, &Tolerances::default());
    let residual = match red.params {
        InteractionParams::Lambda(q) => q.matrix().sub(&p.matrix()).max_abs(),
        _ => T::infinity(),
    };
    let cut = lit::<T>(1e-8).max(T::epsilon() * lit(1e3));
    if residual > cut {
        return Err(Error::NoPreimage {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(u)
}
