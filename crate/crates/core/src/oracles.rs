//! Closed-form radial solutions on the unit ball of `R^d` with `f = 1`
//! (or a unit point mass), used as reference values.
//!
//! Each function returns the state `u(r)` and coefficient `a(r)`. A
//! coefficient that is singular at the evaluation point is returned as
//! `f64::INFINITY`.

use crate::error::{invalid, Result};

/// Minimal compliance with `ψ(a) = a²/2`: `u = 3/(4d^{1/3})·(1 − r^{4/3})`,
/// `a = (r/d)^{2/3}`.
pub fn quadratic_ball(d: usize, r: f64) -> (f64, f64) {
    let d = d as f64;
    let u = 3.0 / (4.0 * d.cbrt()) * (1.0 - r.powf(4.0 / 3.0));
    let a = (r / d).powf(2.0 / 3.0);
    (u, a)
}

/// Same penalty with a unit point mass at the origin, `d = 2`:
/// `u = 3/(16π)^{1/3}·(1 − r^{2/3})`, `a = (2πr)^{-2/3}`.
pub fn quadratic_point_load(r: f64) -> (f64, f64) {
    let pi = std::f64::consts::PI;
    let u = 3.0 / (16.0 * pi).cbrt() * (1.0 - r.powf(2.0 / 3.0));
    let a = if r > 0.0 {
        (2.0 * pi * r).powf(-2.0 / 3.0)
    } else {
        f64::INFINITY
    };
    (u, a)
}

/// `ψ(a) = 1/(2a²)`: `u = (1 − r⁴)/(4d³)`, `a = d²/r²`.
pub fn inverse_square_ball(d: usize, r: f64) -> (f64, f64) {
    let d = d as f64;
    let u = (1.0 - r.powi(4)) / (4.0 * d.powi(3));
    let a = if r > 0.0 { d * d / (r * r) } else { f64::INFINITY };
    (u, a)
}

/// Relaxed two-phase energy design: the coefficient is `β` inside the
/// radius `τ = d√(αβγ)` and `α` outside. Returns `(u, a, τ)`.
pub fn two_phase_energy_ball(d: usize, r: f64, alpha: f64, beta: f64, gamma: f64) -> Result<(f64, f64, f64)> {
    let tau = two_phase_energy_radius(d, alpha, beta, gamma)?;
    let d = d as f64;
    let (u, a) = if r < tau {
        let u = (1.0 - tau * tau) / (2.0 * d * alpha) + (tau * tau - r * r) / (2.0 * d * beta);
        (u, beta)
    } else {
        ((1.0 - r * r) / (2.0 * d * alpha), alpha)
    };
    Ok((u, a, tau))
}

/// Interface radius `τ = d√(αβγ)`, requiring `γ < 1/(d²αβ)`.
pub fn two_phase_energy_radius(d: usize, alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    if !(alpha > 0.0 && beta > alpha) {
        return Err(invalid(
            "alpha/beta",
            format!("need 0 < alpha < beta, got ({alpha}, {beta})"),
        ));
    }
    let df = d as f64;
    if !(gamma > 0.0 && gamma < 1.0 / (df * df * alpha * beta)) {
        return Err(invalid("gamma", format!("{gamma} must lie in (0, 1/(d²αβ))")));
    }
    Ok(df * (alpha * beta * gamma).sqrt())
}

/// Radial derivative `u'` of [`two_phase_energy_ball`].
pub fn two_phase_energy_du(d: usize, r: f64, alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    let (_, a, _) = two_phase_energy_ball(d, r, alpha, beta, gamma)?;
    Ok(-r / (d as f64 * a))
}

/// Fields of the threshold configuration `ψ(a) = τ²a` on `[1, 2]`, `f = 1`:
/// returns `(u₀', a₀, |σ₀|)` with `|σ₀| = r/d`.
pub fn counterexample_fields(r: f64, tau: f64, d: usize) -> Result<(f64, f64, f64)> {
    let df = d as f64;
    if !(tau > 0.0 && tau < 1.0 / df) {
        return Err(invalid("tau", format!("{tau} must lie in (0, 1/{d})")));
    }
    let sigma = r / df;
    let (du, a) = if r < df * tau {
        (-r / df, 1.0)
    } else if r <= 2.0 * df * tau {
        (-tau, r / (df * tau))
    } else {
        (-r / (2.0 * df), 2.0)
    };
    Ok((du, a, sigma))
}

/// Isotropic value `a₀(r)` alone.
pub fn counterexample_a0(r: f64, tau: f64, d: usize) -> Result<f64> {
    counterexample_fields(r, tau, d).map(|(_, a, _)| a)
}

/// Flux density `Υ(s)`: `s² + τ²` below `τ`, `2τs` on `[τ, 2τ]`,
/// `s²/2 + 2τ²` above.
pub fn upsilon(s: f64, tau: f64) -> f64 {
    if s < tau {
        s * s + tau * tau
    } else if s <= 2.0 * tau {
        2.0 * tau * s
    } else {
        0.5 * s * s + 2.0 * tau * tau
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::penalty::PenaltySpec;

    /// `−(r^{d−1} a u')'/r^{d−1}` by centered differences.
    fn radial_residual(d: usize, r: f64, u: impl Fn(f64) -> f64, a: impl Fn(f64) -> f64) -> f64 {
        let h = 1e-4;
        let w = |s: f64| s.powi(d as i32 - 1);
        let right = w(r + h / 2.0) * a(r + h / 2.0) * (u(r + h) - u(r)) / h;
        let left = w(r - h / 2.0) * a(r - h / 2.0) * (u(r) - u(r - h)) / h;
        -(right - left) / h / w(r)
    }

    fn far_from(r: f64, points: &[f64]) -> bool {
        points.iter().all(|p| (r - p).abs() > 1e-2)
    }

    #[test]
    fn quadratic_values() {
        assert_eq!(quadratic_ball(2, 1.0).0, 0.0);
        let (u, a) = quadratic_ball(2, 0.5);
        assert!((a - 0.25f64.powf(2.0 / 3.0)).abs() < 1e-15);
        assert!((a - 0.396850).abs() < 1e-6);
        assert!((u - 0.359040).abs() < 1e-6);
        assert_eq!(quadratic_point_load(1.0).0, 0.0);
        assert!((quadratic_point_load(1.0).1 - 0.293684).abs() < 1e-6);
        assert!((quadratic_point_load(0.5).1 - 0.466194).abs() < 1e-6);
        assert!(quadratic_point_load(0.0).1.is_infinite());
    }

    #[test]
    fn inverse_square_values() {
        assert_eq!(inverse_square_ball(2, 1.0).0, 0.0);
        assert!((inverse_square_ball(2, 0.0).0 - 0.03125).abs() < 1e-15);
        assert!((inverse_square_ball(2, 0.5).1 - 16.0).abs() < 1e-12);
        assert!(inverse_square_ball(2, 0.0).1.is_infinite());
    }

    #[test]
    fn two_phase_energy_values() {
        let (_, _, tau) = two_phase_energy_ball(2, 0.0, 1.0, 2.0, 0.02).unwrap();
        assert!((tau - 0.4).abs() < 1e-15);
        let below = two_phase_energy_ball(2, tau * (1.0 - 1e-15), 1.0, 2.0, 0.02).unwrap();
        let above = two_phase_energy_ball(2, tau, 1.0, 2.0, 0.02).unwrap();
        assert!((below.0 - above.0).abs() < 1e-12);
        assert_eq!(two_phase_energy_ball(2, 0.3, 1.0, 2.0, 0.02).unwrap().1, 2.0);
        assert_eq!(two_phase_energy_ball(2, 0.5, 1.0, 2.0, 0.02).unwrap().1, 1.0);
        assert_eq!(two_phase_energy_ball(2, 1.0, 1.0, 2.0, 0.02).unwrap().0, 0.0);
        assert!(two_phase_energy_ball(2, 0.5, 1.0, 2.0, 0.2).is_err());
    }

    #[test]
    fn counterexample_values() {
        let tau = 0.23539;
        let (du, a, _) = counterexample_fields(0.3, tau, 2).unwrap();
        assert_eq!(a, 1.0);
        assert!((du + 0.15).abs() < 1e-15);
        let (du, a, _) = counterexample_fields(0.7, tau, 2).unwrap();
        assert!((a - 0.7 / 0.47078).abs() < 1e-12);
        assert!((a - 1.48690).abs() < 1e-5);
        assert_eq!(du, -tau);
        let (du, a, _) = counterexample_fields(0.96, tau, 2).unwrap();
        assert_eq!(a, 2.0);
        assert!((du + 0.24).abs() < 1e-15);
        assert!(counterexample_fields(0.5, 0.5, 2).is_err());
    }

    #[test]
    fn counterexample_flux_consistency() {
        let tau = 0.23539;
        for k in 1..1000 {
            let r = k as f64 / 1000.0;
            let (du, a, sigma) = counterexample_fields(r, tau, 2).unwrap();
            assert!((a * du.abs() - sigma).abs() < 1e-12, "r = {r}");
        }
    }

    #[test]
    fn upsilon_values_and_continuity() {
        let tau = 0.23539;
        assert!((upsilon(0.0, tau) - tau * tau).abs() < 1e-15);
        assert!((upsilon(0.4, tau) - 0.188312).abs() < 1e-6);
        for s in [tau, 2.0 * tau] {
            let lo = upsilon(s * (1.0 - 1e-14), tau);
            let hi = upsilon(s * (1.0 + 1e-14), tau);
            assert!((lo - hi).abs() < 1e-12);
        }
        let h = 1e-3;
        for k in 1..1000 {
            let s = k as f64 * 1e-3;
            let second = upsilon(s + h, tau) - 2.0 * upsilon(s, tau) + upsilon(s - h, tau);
            assert!(second >= -1e-10);
        }
    }

    #[test]
    fn radial_ode_residuals() {
        let samples: Vec<f64> = (1..100).map(|k| k as f64 / 100.0 + 0.003).collect();
        for &r in &samples {
            for d in [2usize, 3] {
                let res = radial_residual(d, r, |s| quadratic_ball(d, s).0, |s| quadratic_ball(d, s).1);
                assert!((res - 1.0).abs() < 1e-3, "quadratic d={d} r={r}: {res}");
                let res = radial_residual(d, r, |s| inverse_square_ball(d, s).0, |s| inverse_square_ball(d, s).1);
                assert!((res - 1.0).abs() < 1e-3, "inverse square d={d} r={r}: {res}");
            }
            let two_phase = |s: f64| two_phase_energy_ball(2, s, 1.0, 2.0, 0.02).unwrap();
            if far_from(r, &[0.4]) {
                let res = radial_residual(2, r, |s| two_phase(s).0, |s| two_phase(s).1);
                assert!((res - 1.0).abs() < 1e-3, "two-phase r={r}: {res}");
            }
            // flux form, since u₀ is given through its derivative
            let tau = 0.23539;
            if far_from(r, &[2.0 * tau, 4.0 * tau]) {
                let h = 1e-5;
                let flux = |s: f64| {
                    let (du, a, _) = counterexample_fields(s, tau, 2).unwrap();
                    s * a * du
                };
                let res = -(flux(r + h) - flux(r - h)) / (2.0 * h) / r;
                assert!((res - 1.0).abs() < 1e-3, "a0 r={r}: {res}");
            }
        }
    }

    #[test]
    fn dirac_flux_is_unit() {
        for k in 1..50 {
            let r = k as f64 / 50.0;
            let h = 1e-6;
            let du = (quadratic_point_load(r + h).0 - quadratic_point_load(r - h).0) / (2.0 * h);
            let flux = -2.0 * std::f64::consts::PI * r * quadratic_point_load(r).1 * du;
            assert!((flux - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn recovery_rules_reproduce_oracles() {
        let q = PenaltySpec::quadratic();
        let inv = PenaltySpec::inverse_square();
        let ab = PenaltySpec::affine_box(1.0, 2.0, 0.02).unwrap();
        for k in 1..100 {
            let r = k as f64 / 100.0;
            let du = r.cbrt() / 2f64.cbrt();
            assert!((q.recover(du * du) - quadratic_ball(2, r).1).abs() < 1e-12);
            let du = r.powi(3) / 8.0;
            assert!((inv.recover(du * du) - inverse_square_ball(2, r).1).abs() < 1e-12 * inverse_square_ball(2, r).1);
            if far_from(r, &[0.4]) {
                let du = two_phase_energy_du(2, r, 1.0, 2.0, 0.02).unwrap();
                assert_eq!(
                    ab.recover(du * du),
                    two_phase_energy_ball(2, r, 1.0, 2.0, 0.02).unwrap().1
                );
            }
        }
    }
}
