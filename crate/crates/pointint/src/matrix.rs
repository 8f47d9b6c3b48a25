//! Small fixed-size complex linear algebra: 2-vectors and 2x2 matrices.

use num_complex::Complex;

use crate::num::Scalar;

/// Complex 2-vector, used for boundary data (psi, psi') and Dirac spinors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C2<T: Scalar>(pub [Complex<T>; 2]);

impl<T: Scalar> C2<T> {
    pub fn new(a: Complex<T>, b: Complex<T>) -> Self {
        C2([a, b])
    }

    pub fn max_abs(&self) -> T {
        self.0[0].norm().max(self.0[1].norm())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        C2([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1]])
    }

    /// u0 v1 - u1 v0
    pub fn cross(&self, rhs: &Self) -> Complex<T> {
        self.0[0] * rhs.0[1] - self.0[1] * rhs.0[0]
    }
}

/// Complex 2x2 matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct M2<T: Scalar> {
    pub e: [[Complex<T>; 2]; 2],
}

impl<T: Scalar> M2<T> {
    pub fn new(e00: Complex<T>, e01: Complex<T>, e10: Complex<T>, e11: Complex<T>) -> Self {
        M2 {
            e: [[e00, e01], [e10, e11]],
        }
    }

    pub fn identity() -> Self {
        let one = Complex::new(T::one(), T::zero());
        let zero = Complex::new(T::zero(), T::zero());
        M2::new(one, zero, zero, one)
    }

    pub fn det(&self) -> Complex<T> {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.e[i][0] * rhs.e[0][j] + self.e[i][1] * rhs.e[1][j];
            }
        }
        M2 { e: out }
    }

    pub fn mul_vec(&self, v: &C2<T>) -> C2<T> {
        C2([
            self.e[0][0] * v.0[0] + self.e[0][1] * v.0[1],
            self.e[1][0] * v.0[0] + self.e[1][1] * v.0[1],
        ])
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        M2::new(
            self.e[0][0] * s,
            self.e[0][1] * s,
            self.e[1][0] * s,
            self.e[1][1] * s,
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        M2::new(
            self.e[0][0] - rhs.e[0][0],
            self.e[0][1] - rhs.e[0][1],
            self.e[1][0] - rhs.e[1][0],
            self.e[1][1] - rhs.e[1][1],
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        M2::new(
            self.e[0][0] + rhs.e[0][0],
            self.e[0][1] + rhs.e[0][1],
            self.e[1][0] + rhs.e[1][0],
            self.e[1][1] + rhs.e[1][1],
        )
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for row in &self.e {
            for v in row {
                m = m.max(v.norm());
            }
        }
        m
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == T::zero() {
            return None;
        }
        let inv = det.inv();
        Some(M2::new(
            self.e[1][1] * inv,
            -self.e[0][1] * inv,
            -self.e[1][0] * inv,
            self.e[0][0] * inv,
        ))
    }

    /// Solve self * x = b. Returns None when the system is numerically singular
    /// relative to the matrix scale.
    pub fn solve(&self, b: &C2<T>) -> Option<C2<T>> {
        let det = self.det();
        let scale = self.max_abs();
        let eps = T::epsilon() * crate::num::lit::<T>(64.0);
        if det.norm() <= scale * scale * eps {
            return None;
        }
        let inv = det.inv();
        Some(C2([
            (b.0[0] * self.e[1][1] - b.0[1] * self.e[0][1]) * inv,
            (b.0[1] * self.e[0][0] - b.0[0] * self.e[1][0]) * inv,
        ]))
    }
}
