//! Hip/knee pairs and 2×2 matrices.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A per-joint quantity. Index 1 in the usual notation is the hip, 2 the knee.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pair<T> {
    pub hip: T,
    pub knee: T,
}

impl<T: Scalar> Pair<T> {
    pub const fn new(hip: T, knee: T) -> Self {
        Self { hip, knee }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn splat(v: T) -> Self {
        Self::new(v, v)
    }

    pub fn map(self, f: impl Fn(T) -> T) -> Self {
        Self::new(f(self.hip), f(self.knee))
    }

    pub fn zip_with(self, other: Self, f: impl Fn(T, T) -> T) -> Self {
        Self::new(f(self.hip, other.hip), f(self.knee, other.knee))
    }

    pub fn is_finite(&self) -> bool {
        self.hip.is_finite() && self.knee.is_finite()
    }

    /// Element-wise product.
    pub fn scale(self, other: Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn dot(self, other: Self) -> T {
        self.hip * other.hip + self.knee * other.knee
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn max_abs(self) -> T {
        self.hip.abs().max(self.knee.abs())
    }

    pub fn to_array(self) -> [T; 2] {
        [self.hip, self.knee]
    }
}

impl<T: Scalar> From<[T; 2]> for Pair<T> {
    fn from(v: [T; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

impl<T: Scalar> Add for Pair<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Scalar> AddAssign for Pair<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Scalar> Sub for Pair<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<T: Scalar> Neg for Pair<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|a| -a)
    }
}

impl<T: Scalar> Mul<T> for Pair<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        self.map(|a| a * rhs)
    }
}

/// Dense 2×2 matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2<T> {
    pub m11: T,
    pub m12: T,
    pub m21: T,
    pub m22: T,
}

impl<T: Scalar> Mat2<T> {
    pub fn new(m11: T, m12: T, m21: T, m22: T) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn mul_vec(&self, v: Pair<T>) -> Pair<T> {
        Pair::new(
            self.m11 * v.hip + self.m12 * v.knee,
            self.m21 * v.hip + self.m22 * v.knee,
        )
    }

    pub fn det(&self) -> T {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> T {
        self.m11 + self.m22
    }

    pub fn is_finite(&self) -> bool {
        self.m11.is_finite() && self.m12.is_finite() && self.m21.is_finite() && self.m22.is_finite()
    }

    /// Solves `self · x = rhs` by Cramer's rule. `None` when singular.
    pub fn solve(&self, rhs: Pair<T>) -> Option<Pair<T>> {
        let det = self.det();
        if det == T::zero() || !det.is_finite() {
            return None;
        }
        Some(Pair::new(
            (rhs.hip * self.m22 - self.m12 * rhs.knee) / det,
            (self.m11 * rhs.knee - self.m21 * rhs.hip) / det,
        ))
    }

    /// Eigenvalues of a symmetric matrix, ascending. Uses the upper triangle.
    pub fn symmetric_eigenvalues(&self) -> (T, T) {
        let two = T::lit(2.0);
        let half_tr = self.trace() / two;
        let half_diff = (self.m11 - self.m22) / two;
        let r = (half_diff * half_diff + self.m12 * self.m12).sqrt();
        (half_tr - r, half_tr + r)
    }
}

impl<T: Scalar> Add for Mat2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.m11 + rhs.m11,
            self.m12 + rhs.m12,
            self.m21 + rhs.m21,
            self.m22 + rhs.m22,
        )
    }
}
