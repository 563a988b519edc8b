//! Dense 2-vectors and 2×2 tensors.
//!
//! Every scenario reduces to the plane spanned by ê1 (along the surface) and
//! ê2 (through the thickness), so nothing here is generic over dimension.
//! Tensor components are stored row-major: `[t11, t12, t21, t22]`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Singularity threshold on |det| shared by every inversion in the crate.
pub const EPS_DET: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Vec2 {
    pub x1: f64,
    pub x2: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x1: 0.0, x2: 0.0 };
    pub const E1: Vec2 = Vec2 { x1: 1.0, x2: 0.0 };
    pub const E2: Vec2 = Vec2 { x1: 0.0, x2: 1.0 };

    pub const fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x1 * other.x1 + self.x2 * other.x2
    }

    pub fn norm(self) -> f64 {
        self.x1.hypot(self.x2)
    }

    pub fn max_abs(self) -> f64 {
        self.x1.abs().max(self.x2.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x1 + rhs.x1, self.x2 + rhs.x2)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x1 - rhs.x1, self.x2 - rhs.x2)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x1, -self.x2)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x1 * s, self.x2 * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

/// A 2×2 real tensor.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Tensor2(pub [f64; 4]);

impl Tensor2 {
    pub const ZERO: Tensor2 = Tensor2([0.0; 4]);
    pub const IDENTITY: Tensor2 = Tensor2([1.0, 0.0, 0.0, 1.0]);

    pub const fn new(t11: f64, t12: f64, t21: f64, t22: f64) -> Self {
        Tensor2([t11, t12, t21, t22])
    }

    /// `[[1, gamma], [0, 1]]`, simple shear of ê2-lines along ê1.
    pub const fn shear(gamma: f64) -> Self {
        Tensor2([1.0, gamma, 0.0, 1.0])
    }

    pub fn diagonal(d1: f64, d2: f64) -> Self {
        Tensor2([d1, 0.0, 0.0, d2])
    }

    pub fn scaled_identity(s: f64) -> Self {
        Tensor2::diagonal(s, s)
    }

    pub fn t11(&self) -> f64 {
        self.0[0]
    }
    pub fn t12(&self) -> f64 {
        self.0[1]
    }
    pub fn t21(&self) -> f64 {
        self.0[2]
    }
    pub fn t22(&self) -> f64 {
        self.0[3]
    }

    pub fn det(&self) -> f64 {
        let [a, b, c, d] = self.0;
        a * d - b * c
    }

    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[3]
    }

    pub fn transpose(&self) -> Tensor2 {
        let [a, b, c, d] = self.0;
        Tensor2([a, c, b, d])
    }

    /// `(t + tᵀ) / 2`
    pub fn sym(&self) -> Tensor2 {
        let [a, b, c, d] = self.0;
        let off = 0.5 * (b + c);
        Tensor2([a, off, off, d])
    }

    /// Inverse with the default singularity threshold [`EPS_DET`].
    pub fn inverse(&self) -> Result<Tensor2> {
        self.inverse_with(EPS_DET)
    }

    pub fn inverse_with(&self, eps_det: f64) -> Result<Tensor2> {
        let det = self.det();
        if !(det.abs() > eps_det) {
            return Err(Error::SingularTensor { det });
        }
        let [a, b, c, d] = self.0;
        Ok(Tensor2([d / det, -b / det, -c / det, a / det]))
    }

    /// `t · v`
    pub fn apply(&self, v: Vec2) -> Vec2 {
        let [a, b, c, d] = self.0;
        Vec2::new(a * v.x1 + b * v.x2, c * v.x1 + d * v.x2)
    }

    /// `t · tᵀ`, written so that the off-diagonal entries are bitwise equal.
    pub fn mul_transpose_self(&self) -> Tensor2 {
        let [a, b, c, d] = self.0;
        let off = a * c + b * d;
        Tensor2([a * a + b * b, off, off, c * c + d * d])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl Add for Tensor2 {
    type Output = Tensor2;
    fn add(self, rhs: Tensor2) -> Tensor2 {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o += r;
        }
        Tensor2(out)
    }
}

impl AddAssign for Tensor2 {
    fn add_assign(&mut self, rhs: Tensor2) {
        *self = *self + rhs;
    }
}

impl Sub for Tensor2 {
    type Output = Tensor2;
    fn sub(self, rhs: Tensor2) -> Tensor2 {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o -= r;
        }
        Tensor2(out)
    }
}

impl Neg for Tensor2 {
    type Output = Tensor2;
    fn neg(self) -> Tensor2 {
        self * -1.0
    }
}

impl Mul for Tensor2 {
    type Output = Tensor2;
    fn mul(self, rhs: Tensor2) -> Tensor2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Tensor2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

impl Mul<f64> for Tensor2 {
    type Output = Tensor2;
    fn mul(self, s: f64) -> Tensor2 {
        Tensor2(self.0.map(|v| v * s))
    }
}

impl Mul<Tensor2> for f64 {
    type Output = Tensor2;
    fn mul(self, t: Tensor2) -> Tensor2 {
        t * self
    }
}
