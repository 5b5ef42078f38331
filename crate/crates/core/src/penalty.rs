//! Convex penalties on the coefficient, their Legendre–Fenchel conjugates,
//! the convexified energy density `φ` of the two-phase energy problem, and
//! the rules recovering an optimal coefficient from the state gradient.

use crate::error::{invalid, Error, Result};

/// Floor used when projecting onto `(0, ∞)`.
pub const POSITIVE_FLOOR: f64 = 1e-8;

/// Cap on the inverse-square recovery `|∇u|^{-2/3}` at vanishing gradients.
pub const INVERSE_SQUARE_CAP: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PenaltyKind {
    /// `ψ(a) = a²/2` on `a ≥ 0`.
    Quadratic,
    /// `ψ(a) = 1/(2a²)` on `a > 0`.
    InverseSquare,
    /// `ψ(a) = γa` on `[α, β]`.
    LinearBox,
    /// `ψ(a) = γ(β − a)` on `[α, β]`.
    AffineBox,
}

impl PenaltyKind {
    pub fn name(self) -> &'static str {
        match self {
            PenaltyKind::Quadratic => "quadratic",
            PenaltyKind::InverseSquare => "inverse-square",
            PenaltyKind::LinearBox => "linear-box",
            PenaltyKind::AffineBox => "affine-box",
        }
    }

    pub fn is_box(self) -> bool {
        matches!(self, PenaltyKind::LinearBox | PenaltyKind::AffineBox)
    }

    /// `+1` for penalties paired with the compliance (dual variable `+|∇u|²`),
    /// `−1` for the energy penalties whose conjugate is taken at `−|∇u|²`.
    pub fn dual_sign(self) -> f64 {
        match self {
            PenaltyKind::Quadratic | PenaltyKind::LinearBox => 1.0,
            PenaltyKind::InverseSquare | PenaltyKind::AffineBox => -1.0,
        }
    }
}

/// A penalty together with its parameters and integrand convention.
///
/// `half` selects whether the optimized integrand carries `½ψ` (energy
/// formulation) or `ψ` (compliance cost `∫ f u + ψ(a)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltySpec {
    pub kind: PenaltyKind,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Threshold of the non-existence configuration, `γ = τ²` on `[1, 2]`.
    pub tau: Option<f64>,
    pub half: bool,
}

fn check_box(alpha: f64, beta: f64, gamma: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid("alpha", format!("{alpha} must be positive")));
    }
    if !(beta > alpha && beta.is_finite()) {
        return Err(invalid("beta", format!("{beta} must exceed alpha = {alpha}")));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(invalid("gamma", format!("{gamma} must be positive")));
    }
    Ok(())
}

impl PenaltySpec {
    pub fn quadratic() -> Self {
        Self {
            kind: PenaltyKind::Quadratic,
            alpha: 0.0,
            beta: f64::INFINITY,
            gamma: 1.0,
            tau: None,
            half: false,
        }
    }

    pub fn inverse_square() -> Self {
        Self {
            kind: PenaltyKind::InverseSquare,
            half: true,
            ..Self::quadratic()
        }
    }

    pub fn linear_box(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        check_box(alpha, beta, gamma)?;
        Ok(Self {
            kind: PenaltyKind::LinearBox,
            alpha,
            beta,
            gamma,
            tau: None,
            half: false,
        })
    }

    pub fn affine_box(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        check_box(alpha, beta, gamma)?;
        Ok(Self {
            kind: PenaltyKind::AffineBox,
            alpha,
            beta,
            gamma,
            tau: None,
            half: true,
        })
    }

    /// `ψ(a) = τ²a` on `[1, 2]`, requiring `0 < τ < 1/d`.
    pub fn threshold(tau: f64, d: usize) -> Result<Self> {
        if !(tau > 0.0 && tau < 1.0 / d as f64) {
            return Err(invalid("tau", format!("{tau} must lie in (0, 1/{d})")));
        }
        let mut spec = Self::linear_box(1.0, 2.0, tau * tau)?;
        spec.tau = Some(tau);
        Ok(spec)
    }

    pub fn with_half(mut self, half: bool) -> Self {
        self.half = half;
        self
    }

    /// Multiplier of `∫ψ(a)` in the optimized integrand.
    pub fn weight(&self) -> f64 {
        if self.half {
            0.5
        } else {
            1.0
        }
    }

    /// Closed domain bounds `[lo, hi]` (the inverse-square lower end is open).
    pub fn domain(&self) -> (f64, f64) {
        match self.kind {
            PenaltyKind::Quadratic | PenaltyKind::InverseSquare => (0.0, f64::INFINITY),
            PenaltyKind::LinearBox | PenaltyKind::AffineBox => (self.alpha, self.beta),
        }
    }

    pub fn in_domain(&self, a: f64) -> bool {
        match self.kind {
            PenaltyKind::Quadratic => a >= 0.0 && a.is_finite(),
            PenaltyKind::InverseSquare => a > 0.0 && a.is_finite(),
            PenaltyKind::LinearBox | PenaltyKind::AffineBox => a >= self.alpha && a <= self.beta,
        }
    }

    fn check(&self, a: f64) -> Result<()> {
        if self.in_domain(a) {
            Ok(())
        } else {
            Err(Error::DomainViolation {
                value: a,
                penalty: self.kind.name(),
            })
        }
    }

    pub fn eval(&self, a: f64) -> Result<f64> {
        self.check(a)?;
        Ok(match self.kind {
            PenaltyKind::Quadratic => 0.5 * a * a,
            PenaltyKind::InverseSquare => 0.5 / (a * a),
            PenaltyKind::LinearBox => self.gamma * a,
            PenaltyKind::AffineBox => self.gamma * (self.beta - a),
        })
    }

    pub fn derivative(&self, a: f64) -> Result<f64> {
        self.check(a)?;
        Ok(match self.kind {
            PenaltyKind::Quadratic => a,
            PenaltyKind::InverseSquare => -1.0 / (a * a * a),
            PenaltyKind::LinearBox => self.gamma,
            PenaltyKind::AffineBox => -self.gamma,
        })
    }

    /// `ψ*(s) = sup_a (a·s − ψ(a))` over the domain of `ψ`; may be `+∞`.
    pub fn conjugate(&self, s: f64) -> f64 {
        match self.kind {
            PenaltyKind::Quadratic => {
                if s > 0.0 {
                    0.5 * s * s
                } else {
                    0.0
                }
            }
            PenaltyKind::InverseSquare => {
                if s > 0.0 {
                    f64::INFINITY
                } else {
                    -1.5 * (-s).powf(2.0 / 3.0)
                }
            }
            PenaltyKind::LinearBox => {
                let slope = s - self.gamma;
                (self.alpha * slope).max(self.beta * slope)
            }
            PenaltyKind::AffineBox => {
                let slope = s + self.gamma;
                (self.alpha * slope).max(self.beta * slope) - self.gamma * self.beta
            }
        }
    }

    /// Projection onto the admissible set: clamp to `[α, β]` for the box
    /// penalties, to `[1e-8, ∞)` otherwise.
    pub fn project(&self, a: f64) -> f64 {
        match self.kind {
            PenaltyKind::Quadratic | PenaltyKind::InverseSquare => a.max(POSITIVE_FLOOR),
            PenaltyKind::LinearBox | PenaltyKind::AffineBox => a.clamp(self.alpha, self.beta),
        }
    }

    /// Optimal coefficient for a cell where `|∇u|² = grad_norm_sq`.
    ///
    /// Quadratic: `|∇u|²`. Inverse square: `|∇u|^{-2/3}`, capped at `1e8`.
    /// Linear box: `α` below the threshold `γ` (and at it), `β` above.
    /// Affine box: the relaxed control `φ'(|∇u|)/(2|∇u|)`, equal to `β` at
    /// `∇u = 0`.
    pub fn recover(&self, grad_norm_sq: f64) -> f64 {
        let s = grad_norm_sq.max(0.0);
        match self.kind {
            PenaltyKind::Quadratic => s,
            PenaltyKind::InverseSquare => {
                if s == 0.0 {
                    INVERSE_SQUARE_CAP
                } else {
                    s.powf(-1.0 / 3.0).min(INVERSE_SQUARE_CAP)
                }
            }
            PenaltyKind::LinearBox => {
                if s <= self.gamma {
                    self.alpha
                } else {
                    self.beta
                }
            }
            PenaltyKind::AffineBox => {
                let g = s.sqrt();
                if g == 0.0 {
                    self.beta
                } else {
                    (phi_prime(self.alpha, self.beta, self.gamma, g) / (2.0 * g)).clamp(self.alpha, self.beta)
                }
            }
        }
    }

    /// Coefficient minimizing `|σ|²/a + γa` over `[α, β]` (flux form of the
    /// linear box penalty): `|σ|/√γ` clamped to the box.
    pub fn recover_from_flux(&self, flux_norm: f64) -> Result<f64> {
        match self.kind {
            PenaltyKind::LinearBox => Ok((flux_norm / self.gamma.sqrt()).clamp(self.alpha, self.beta)),
            other => Err(invalid(
                "penalty",
                format!("flux recovery is defined for linear-box only, got {}", other.name()),
            )),
        }
    }

    /// `ψ(a) + ψ*(σs) − a·σs ≥ 0` with `σ` the dual sign of the kind.
    pub fn young_gap(&self, a: f64, grad_norm_sq: f64) -> Result<f64> {
        let s = self.kind.dual_sign() * grad_norm_sq;
        Ok(self.eval(a)? + self.conjugate(s) - a * s)
    }
}

/// Convex hull of the two-phase energy density, as a function of `s = |∇u|`.
pub fn phi(alpha: f64, beta: f64, gamma: f64, s: f64) -> f64 {
    let s2 = s * s;
    if s2 <= alpha / beta * gamma {
        beta * s2
    } else if s2 <= beta / alpha * gamma {
        2.0 * (alpha * beta * gamma).sqrt() * s - alpha * gamma
    } else {
        alpha * s2 + gamma * (beta - alpha)
    }
}

pub fn phi_prime(alpha: f64, beta: f64, gamma: f64, s: f64) -> f64 {
    let s2 = s * s;
    if s2 <= alpha / beta * gamma {
        2.0 * beta * s
    } else if s2 <= beta / alpha * gamma {
        2.0 * (alpha * beta * gamma).sqrt()
    } else {
        2.0 * alpha * s
    }
}

/// The non-convex density `−ψ*(−s²)` of the affine-box penalty.
pub fn energy_density(alpha: f64, beta: f64, gamma: f64, s: f64) -> f64 {
    let s2 = s * s;
    if s2 <= gamma {
        beta * s2
    } else {
        alpha * s2 + gamma * (beta - alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_values() {
        let p = PenaltySpec::quadratic();
        assert_eq!(p.eval(3.0).unwrap(), 4.5);
        assert_eq!(p.derivative(3.0).unwrap(), 3.0);
        assert_eq!(p.conjugate(2.0), 2.0);
        assert_eq!(p.project(-1.0), 1e-8);
        assert!(matches!(p.eval(-1.0), Err(Error::DomainViolation { .. })));
    }

    #[test]
    fn box_values() {
        let lb = PenaltySpec::linear_box(1.0, 2.0, 0.3).unwrap();
        assert_eq!(lb.eval(1.5).unwrap(), 0.3 * 1.5);
        assert_eq!(lb.derivative(1.2).unwrap(), 0.3);
        assert_eq!(lb.project(3.0), 2.0);
        assert_eq!(lb.project(1.7), 1.7);
        assert!(lb.eval(2.5).is_err());
        let ab = PenaltySpec::affine_box(1.0, 2.0, 0.3).unwrap();
        assert!((ab.eval(1.0).unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(ab.eval(2.0).unwrap(), 0.0);
        assert_eq!(ab.derivative(1.5).unwrap(), -0.3);
    }

    #[test]
    fn parameter_validation() {
        assert!(PenaltySpec::linear_box(2.0, 1.0, 0.1).is_err());
        assert!(PenaltySpec::affine_box(1.0, 2.0, 0.0).is_err());
        assert!(PenaltySpec::threshold(0.5, 2).is_err());
        assert!(PenaltySpec::threshold(0.23539, 2).is_ok());
    }

    #[test]
    fn threshold_conjugate_closed_form() {
        let tau: f64 = 0.23539;
        let p = PenaltySpec::threshold(tau, 2).unwrap();
        let t2 = tau * tau;
        for s in [0.0, 0.01, 0.05, 0.0554, 0.06, 0.2, 1.0] {
            let expect = if s < t2 { s - t2 } else { 2.0 * (s - t2) };
            assert!((p.conjugate(s) - expect).abs() < 1e-15, "s = {s}");
        }
    }

    #[test]
    fn linear_box_conjugate_matches_grid_search() {
        let p = PenaltySpec::linear_box(1.0, 2.0, 0.3).unwrap();
        for k in 0..=40 {
            let s = k as f64 * 0.025;
            let grid = (0..=2000)
                .map(|i| 1.0 + i as f64 / 2000.0)
                .map(|a| a * s - p.eval(a).unwrap())
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((p.conjugate(s) - grid).abs() < 1e-12);
            let closed = if s <= 0.3 { 1.0 * (s - 0.3) } else { 2.0 * (s - 0.3) };
            assert!((p.conjugate(s) - closed).abs() < 1e-15);
        }
    }

    #[test]
    fn phi_middle_branch_value() {
        let s = 0.02f64.sqrt();
        let expect = 2.0 * 0.04f64.sqrt() * s - 0.02;
        assert!((phi(1.0, 2.0, 0.02, s) - expect).abs() < 1e-15);
        assert!((phi(1.0, 2.0, 0.02, s) - 0.0365685).abs() < 1e-7);
        assert_eq!(phi(1.0, 2.0, 0.02, 0.0), 0.0);
        assert_eq!(phi_prime(1.0, 2.0, 0.02, 0.0), 0.0);
    }

    #[test]
    fn phi_is_c1_at_branch_points() {
        let (al, be, ga) = (1.0f64, 2.0f64, 0.02f64);
        let eps = 1e-9;
        for s2 in [al / be * ga, be / al * ga] {
            let s = s2.sqrt();
            let jump = phi(al, be, ga, s + eps) - phi(al, be, ga, s - eps);
            assert!(jump.abs() < 1e-8);
            let djump = phi_prime(al, be, ga, s + eps) - phi_prime(al, be, ga, s - eps);
            assert!(djump.abs() < 1e-7);
        }
    }

    #[test]
    fn phi_hulls_the_nonconvex_density() {
        // numerical convexification of −ψ*(−s²) by sampling chords
        let (al, be, ga) = (1.0, 2.0, 0.02);
        let xs: Vec<f64> = (0..=300).map(|i| i as f64 * 0.001).collect();
        let g: Vec<f64> = xs.iter().map(|&s| energy_density(al, be, ga, s)).collect();
        for (k, &s) in xs.iter().enumerate() {
            let mut hull = g[k];
            for i in 0..=k {
                for j in k..xs.len() {
                    if j > i {
                        let w = (s - xs[i]) / (xs[j] - xs[i]);
                        hull = hull.min((1.0 - w) * g[i] + w * g[j]);
                    }
                }
            }
            assert!((phi(al, be, ga, s) - hull).abs() < 1e-5, "s = {s}");
            assert!(phi(al, be, ga, s) <= g[k] + 1e-15);
        }
    }

    #[test]
    fn recovery_rules() {
        let q = PenaltySpec::quadratic();
        assert_eq!(q.recover(0.25), 0.25);
        assert!(q.young_gap(0.25, 0.25).unwrap().abs() < 1e-12);
        let ab = PenaltySpec::affine_box(1.0, 2.0, 0.02).unwrap();
        assert_eq!(ab.recover(0.0), 2.0);
        assert_eq!(ab.recover(1e-6), 2.0);
        let inv = PenaltySpec::inverse_square();
        assert_eq!(inv.recover(0.0), INVERSE_SQUARE_CAP);
        assert!((inv.recover(8.0) - 0.5).abs() < 1e-15);
        let lb = PenaltySpec::linear_box(1.0, 2.0, 0.1).unwrap();
        assert_eq!(lb.recover(0.1), 1.0);
        assert_eq!(lb.recover(0.1000001), 2.0);
        let tau = 0.23539;
        let th = PenaltySpec::threshold(tau, 2).unwrap();
        assert!((th.recover_from_flux(1.5 * tau).unwrap() - 1.5).abs() < 1e-14);
        assert_eq!(th.recover_from_flux(0.1 * tau).unwrap(), 1.0);
        assert_eq!(th.recover_from_flux(3.0 * tau).unwrap(), 2.0);
        assert!(q.recover_from_flux(1.0).is_err());
    }
}
