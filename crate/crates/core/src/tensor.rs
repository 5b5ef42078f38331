//! Symmetric 2×2 matrices and the small amount of linear algebra the
//! homogenized coefficients need.

pub type Vec2 = [f64; 2];

#[inline]
pub fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

/// Symmetric matrix `[[a11, a12], [a12, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymTensor {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

/// Eigen-decomposition of a [`SymTensor`]: `lambda1 <= lambda2`, with
/// `vector2` the unit eigenvector of `lambda2` (the one of `lambda1` is its
/// rotation by +90°).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigen {
    pub lambda1: f64,
    pub lambda2: f64,
    pub vector2: Vec2,
}

impl SymTensor {
    pub const fn new(a11: f64, a12: f64, a22: f64) -> Self {
        Self { a11, a12, a22 }
    }

    pub const fn isotropic(value: f64) -> Self {
        Self {
            a11: value,
            a12: 0.0,
            a22: value,
        }
    }

    pub const fn diag(d1: f64, d2: f64) -> Self {
        Self {
            a11: d1,
            a12: 0.0,
            a22: d2,
        }
    }

    /// `lambda_perp * I + (lambda_along - lambda_perp) * e eᵀ` for a unit `e`.
    pub fn from_axis(e: Vec2, lambda_along: f64, lambda_perp: f64) -> Self {
        let d = lambda_along - lambda_perp;
        Self {
            a11: lambda_perp + d * e[0] * e[0],
            a12: d * e[0] * e[1],
            a22: lambda_perp + d * e[1] * e[1],
        }
    }

    #[inline]
    pub fn apply(&self, v: Vec2) -> Vec2 {
        [self.a11 * v[0] + self.a12 * v[1], self.a12 * v[0] + self.a22 * v[1]]
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn is_finite(&self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a22.is_finite()
    }

    /// `self + s * (other - self)`.
    pub fn lerp(&self, other: &SymTensor, s: f64) -> SymTensor {
        SymTensor {
            a11: self.a11 + s * (other.a11 - self.a11),
            a12: self.a12 + s * (other.a12 - self.a12),
            a22: self.a22 + s * (other.a22 - self.a22),
        }
    }

    pub fn max_abs_diff(&self, other: &SymTensor) -> f64 {
        (self.a11 - other.a11)
            .abs()
            .max((self.a12 - other.a12).abs())
            .max((self.a22 - other.a22).abs())
    }

    pub fn eigen(&self) -> Eigen {
        let mean = 0.5 * (self.a11 + self.a22);
        let half_diff = 0.5 * (self.a11 - self.a22);
        let radius = half_diff.hypot(self.a12);
        let angle = 0.5 * self.a12.atan2(half_diff);
        Eigen {
            lambda1: mean - radius,
            lambda2: mean + radius,
            vector2: [angle.cos(), angle.sin()],
        }
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        let e = self.eigen();
        (e.lambda1, e.lambda2)
    }

    /// Ratio `lambda2 / lambda1` of a positive-definite tensor.
    pub fn anisotropy_ratio(&self) -> f64 {
        let (l1, l2) = self.eigenvalues();
        l2 / l1
    }
}

impl Eigen {
    pub fn recompose(&self) -> SymTensor {
        SymTensor::from_axis(self.vector2, self.lambda2, self.lambda1)
    }
}
