//! Two-phase G-closure: lamination means, the Murat–Tartar admissibility
//! system, spectrum clamping and the optimal laminate for a pair of
//! state/adjoint gradients.

use crate::error::{invalid, Error, Result};
use crate::tensor::{dot, norm, SymTensor, Vec2};

/// Volume fraction `t` of phase `α` with the arithmetic and harmonic means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaminateParams {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub nu: f64,
}

impl LaminateParams {
    pub fn new(t: f64, alpha: f64, beta: f64) -> Result<Self> {
        let (mu, nu) = lamination_means(t, alpha, beta)?;
        Ok(Self { t, alpha, beta, mu, nu })
    }
}

fn check_phases(alpha: f64, beta: f64) -> Result<()> {
    if alpha > 0.0 && beta > alpha && beta.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            "alpha/beta",
            format!("need 0 < alpha < beta, got ({alpha}, {beta})"),
        ))
    }
}

/// `(μ_t, ν_t)` without argument checks; used on hot per-cell paths.
#[inline]
pub(crate) fn means_unchecked(t: f64, alpha: f64, beta: f64) -> (f64, f64) {
    let mu = t * alpha + (1.0 - t) * beta;
    let nu = alpha * beta / (t * beta + (1.0 - t) * alpha);
    (mu, nu)
}

/// `μ_t = tα + (1−t)β` and `ν_t = (t/α + (1−t)/β)⁻¹`.
pub fn lamination_means(t: f64, alpha: f64, beta: f64) -> Result<(f64, f64)> {
    check_phases(alpha, beta)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid("t", format!("{t} is outside [0, 1]")));
    }
    Ok(means_unchecked(t, alpha, beta))
}

/// Interval for `λ₂` in the two-dimensional G-closure given `λ₁`.
pub fn d2_lambda2_bounds(lambda1: f64, alpha: f64, beta: f64) -> Result<(f64, f64)> {
    check_phases(alpha, beta)?;
    if !(alpha..=beta).contains(&lambda1) {
        return Err(invalid("lambda1", format!("{lambda1} is outside [{alpha}, {beta}]")));
    }
    let lo = alpha * beta / (alpha + beta - lambda1);
    let hi = alpha + beta - alpha * beta / lambda1;
    Ok((lo, hi))
}

/// Closed-form d = 2 membership test for a sorted pair.
pub fn d2_region_contains(lambda1: f64, lambda2: f64, alpha: f64, beta: f64) -> bool {
    match d2_lambda2_bounds(lambda1, alpha, beta) {
        Ok((lo, hi)) => lambda2 <= beta && lo <= lambda2 && lambda2 <= hi,
        Err(_) => false,
    }
}

const SCAN_POINTS: usize = 10_000;
const BISECTIONS: usize = 60;

fn recip(x: f64) -> f64 {
    if x > 0.0 {
        1.0 / x
    } else {
        f64::INFINITY
    }
}

/// Murat–Tartar test: is there `t ∈ [0,1]` for which the sorted eigenvalues
/// satisfy the lower and upper trace bounds and `ν_t ≤ λ_i ≤ μ_t`?
///
/// Returns the witnessing `t`. `tol` loosens every inequality by shifting
/// the eigenvalues towards the admissible side. Reciprocals of non-positive
/// gaps are `+∞`.
pub fn is_admissible(eigs: &[f64], alpha: f64, beta: f64, tol: f64) -> Result<Option<f64>> {
    check_phases(alpha, beta)?;
    if eigs.is_empty() {
        return Err(invalid("eigs", "empty spectrum"));
    }
    if eigs.iter().any(|l| !l.is_finite()) {
        return Err(Error::NonFinite("eigenvalues"));
    }
    if eigs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Unsorted);
    }
    if !(tol >= 0.0) {
        return Err(invalid("tol", format!("{tol} must be non-negative")));
    }
    let d = eigs.len() as f64;
    let (lmin, lmax) = (eigs[0], eigs[eigs.len() - 1]);
    if lmin < alpha - tol || lmax > beta + tol {
        return Ok(None);
    }
    let lower_sum: f64 = eigs.iter().map(|&l| recip(l + tol - alpha)).sum();
    let upper_sum: f64 = eigs.iter().map(|&l| recip(beta - (l - tol))).sum();

    // both predicates are monotone in t: `rising` holds on [t_lo, 1],
    // `falling` on [0, t_hi]
    let rising = |t: f64| {
        let (mu, nu) = means_unchecked(t, alpha, beta);
        nu <= lmin + tol && lower_sum <= recip(nu - alpha) + (d - 1.0) * recip(mu - alpha)
    };
    let falling = |t: f64| {
        let (mu, nu) = means_unchecked(t, alpha, beta);
        lmax - tol <= mu && upper_sum <= recip(beta - nu) + (d - 1.0) * recip(beta - mu)
    };

    let grid = |k: usize| k as f64 / SCAN_POINTS as f64;
    let Some(first) = (0..=SCAN_POINTS).find(|&k| rising(grid(k))) else {
        return Ok(None);
    };
    let Some(last) = (0..=SCAN_POINTS).rev().find(|&k| falling(grid(k))) else {
        return Ok(None);
    };
    if first <= last {
        let mid = (first + last) / 2;
        return Ok(Some(grid(mid)));
    }
    // the feasible interval, if any, is thinner than the grid spacing
    let t_lo = if first == 0 {
        0.0
    } else {
        let (mut a, mut b) = (grid(first - 1), grid(first));
        for _ in 0..BISECTIONS {
            let m = 0.5 * (a + b);
            if rising(m) {
                b = m;
            } else {
                a = m;
            }
        }
        b
    };
    let t_hi = if last == SCAN_POINTS {
        1.0
    } else {
        let (mut a, mut b) = (grid(last), grid(last + 1));
        for _ in 0..BISECTIONS {
            let m = 0.5 * (a + b);
            if falling(m) {
                a = m;
            } else {
                b = m;
            }
        }
        a
    };
    if t_lo <= t_hi {
        let t = 0.5 * (t_lo + t_hi);
        if rising(t) && falling(t) {
            return Ok(Some(t));
        }
        if rising(t_lo) && falling(t_lo) {
            return Ok(Some(t_lo));
        }
    }
    Ok(None)
}

/// Clamps the eigenvalues of `a` to `[lo, hi]`, keeping the eigenvectors.
/// A tensor whose spectrum is already inside is returned unchanged.
pub fn clamp_spectrum(a: &SymTensor, lo: f64, hi: f64) -> SymTensor {
    debug_assert!(lo <= hi);
    let eig = a.eigen();
    if eig.lambda1 >= lo && eig.lambda2 <= hi {
        return *a;
    }
    let mut clamped = eig;
    clamped.lambda1 = eig.lambda1.clamp(lo, hi);
    clamped.lambda2 = eig.lambda2.clamp(lo, hi);
    clamped.recompose()
}

/// Laminate with eigenvalue `μ` along the bisector of `∇u/|∇u|` and
/// `∇p/|∇p|` and `ν` across it.
///
/// When the unit gradients are closer to opposite than to equal, the `μ`
/// direction is taken orthogonal to their difference, which is the same
/// axis computed more accurately. Either gradient vanishing gives `ν·I`.
pub fn optimal_laminate(grad_u: Vec2, grad_p: Vec2, mu: f64, nu: f64) -> Result<SymTensor> {
    if !(grad_u.iter().chain(&grad_p).all(|v| v.is_finite())) {
        return Err(Error::NonFinite("gradients"));
    }
    if !(mu >= nu && nu > 0.0) {
        return Err(invalid("mu/nu", format!("need mu >= nu > 0, got ({mu}, {nu})")));
    }
    let (nu_u, nu_p) = (norm(grad_u), norm(grad_p));
    if nu_u == 0.0 || nu_p == 0.0 {
        return Ok(SymTensor::isotropic(nu));
    }
    let w1 = [grad_u[0] / nu_u, grad_u[1] / nu_u];
    let w2 = [grad_p[0] / nu_p, grad_p[1] / nu_p];
    let sum = [w1[0] + w2[0], w1[1] + w2[1]];
    let diff = [w1[0] - w2[0], w1[1] - w2[1]];
    let (ns, nd) = (norm(sum), norm(diff));
    let e = if ns >= nd {
        [sum[0] / ns, sum[1] / ns]
    } else {
        [-diff[1] / nd, diff[0] / nd]
    };
    Ok(SymTensor::from_axis(e, mu, nu))
}

/// `N± = (|∇u||∇p| ± ∇u·∇p)/2`, clipped at zero against roundoff.
pub fn n_plus_minus(grad_u: Vec2, grad_p: Vec2) -> (f64, f64) {
    let prod = norm(grad_u) * norm(grad_p);
    let d = dot(grad_u, grad_p);
    ((0.5 * (prod + d)).max(0.0), (0.5 * (prod - d)).max(0.0))
}

/// Pointwise maximizer over `t ∈ [0,1]` of `μ_t N⁺ − ν_t N⁻ + g(β−α)t`.
///
/// When the middle-branch denominator `N⁺ − g` is not positive the value
/// is 1, which is where the branch ordering places it.
pub fn optimal_t(n_plus: f64, n_minus: f64, g: f64, alpha: f64, beta: f64) -> f64 {
    if g < n_plus - beta / alpha * n_minus {
        return 0.0;
    }
    if g > n_plus - alpha / beta * n_minus {
        return 1.0;
    }
    let denom = n_plus - g;
    if denom <= 0.0 {
        return 1.0;
    }
    (((alpha * beta * n_minus / denom).sqrt() - alpha) / (beta - alpha)).clamp(0.0, 1.0)
}
