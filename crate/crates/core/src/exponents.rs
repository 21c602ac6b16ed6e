//! Roots of `Λ(γ) = λ` and the exponents derived from them.

use serde::{Deserialize, Serialize};

use crate::constants::lambda_folded;
use crate::error::{Error, Result};
use crate::params::{FracParams, QuadratureConfig, Weight};

/// The two solutions `γ₁ ≤ γ₀ ≤ γ₂` of `Λ(γ) = λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootPair {
    pub gamma1: f64,
    pub gamma2: f64,
    pub lambda: f64,
    /// Largest `|Λ(γᵢ) - λ|` at the returned roots.
    pub residual: f64,
}

/// Sobolev exponents and, when a λ is supplied, the critical exponent `q₊`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentSet {
    pub p_star_s: f64,
    pub p_star_s_q: f64,
    pub q_plus: Option<f64>,
}

fn root_config(tol: f64) -> QuadratureConfig {
    QuadratureConfig {
        rel_tol: 1e-12,
        abs_tol: (tol / 10.0).max(1e-300),
        ..Default::default()
    }
}

/// Safeguarded regula falsi (Illinois variant) on a sign-changing bracket.
fn bracketed_root(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    if fa.signum() == fb.signum() {
        return Err(Error::Convergence {
            message: format!("root is not bracketed by [{a}, {b}]"),
            partial: f64::NAN,
        });
    }
    let mut side = 0i8;
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for it in 0..300 {
        if best.1.abs() <= tol || (b - a).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()) {
            return Ok(best);
        }
        let secant = (a * fb - b * fa) / (fb - fa);
        let mid = 0.5 * (a + b);
        // every fourth step is a plain bisection to guarantee shrinkage
        let x = if it % 4 == 3 || !(secant > a.min(b) && secant < a.max(b)) {
            mid
        } else {
            secant
        };
        let fx = f(x)?;
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx.signum() == fb.signum() {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
    }
    Err(Error::Convergence {
        message: "root finder exhausted its iteration budget".into(),
        partial: best.0,
    })
}

/// Solves `Λ(γ) = λ` on both sides of the maximiser `γ₀`.
///
/// At `λ = Λ(γ₀)` (within `tol`) the double root `γ₀` is returned.
pub fn gamma_roots(lambda: f64, weight: &Weight, params: &FracParams, tol: f64) -> Result<RootPair> {
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let cfg = root_config(tol);
    let g0 = weight.gamma0;
    let top = lambda_folded(g0, weight, params, &cfg)?.value;
    if !(lambda > 0.0) || lambda > top + tol {
        return Err(Error::domain(format!(
            "λ = {lambda} must lie in (0, Λ(γ₀)] = (0, {top}]"
        )));
    }
    if top - lambda <= tol {
        return Ok(RootPair {
            gamma1: g0,
            gamma2: g0,
            lambda,
            residual: top - lambda,
        });
    }
    let mut f = |g: f64| Ok(lambda_folded(g, weight, params, &cfg)?.value - lambda);
    let ftop = top - lambda;
    let (mut lo, mut flo) = (1e-6 * g0, 0.0);
    flo += f(lo)?;
    if flo >= 0.0 {
        // Λ(0) = 0 exactly
        lo = 0.0;
        flo = -lambda;
    }
    let (g1, r1) = bracketed_root(&mut f, lo, g0, flo, ftop, tol)?;
    let gmax = weight.gamma_max;
    let (mut hi, mut fhi) = (gmax * (1.0 - 1e-6), 0.0);
    fhi += f(hi)?;
    if fhi >= 0.0 {
        // Λ(γ_max) = 0 exactly
        hi = gmax;
        fhi = -lambda;
    }
    let (g2, r2) = bracketed_root(&mut f, g0, hi, ftop, fhi, tol)?;
    Ok(RootPair {
        gamma1: g1,
        gamma2: g2,
        lambda,
        residual: r1.abs().max(r2.abs()),
    })
}

/// `q₊ = p - 1 + ps/γ₁(λ)` at `β = 0`.
pub fn critical_exponent_qplus(lambda: f64, params: &FracParams, tol: f64) -> Result<f64> {
    let weight = Weight::unweighted(params);
    let roots = gamma_roots(lambda, &weight, params, tol)?;
    Ok(params.p() - 1.0 + params.ps() / roots.gamma1)
}

/// `p*_s = pN/(N - ps)` and `p*_{s,q} = pN/(N - qs)`.
pub fn sobolev_exponents(params: &FracParams, q: f64) -> Result<ExponentSet> {
    let n = params.nf();
    let qs = q * params.s();
    if !(q > 0.0 && q <= params.p()) {
        return Err(Error::domain(format!("q = {q} must lie in (0, p]")));
    }
    if qs >= n {
        return Err(Error::domain(format!("qs = {qs} must be smaller than N")));
    }
    Ok(ExponentSet {
        p_star_s: params.p_star(),
        p_star_s_q: params.p() * n / (n - qs),
        q_plus: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> (FracParams, Weight) {
        let p = FracParams::new(3, 0.5, 2.0).unwrap();
        (p, Weight::unweighted(&p))
    }

    fn top(p: &FracParams, w: &Weight) -> f64 {
        lambda_folded(w.gamma0, w, p, &QuadratureConfig::default())
            .unwrap()
            .value
    }

    #[test]
    fn half_maximum_roots() {
        let (p, w) = base();
        let l = 0.5 * top(&p, &w);
        let r = gamma_roots(l, &w, &p, 1e-10).unwrap();
        assert!(r.residual <= 1e-10);
        assert!(r.gamma1 < w.gamma0 && w.gamma0 < r.gamma2 && r.gamma2 < w.gamma_max);
    }

    #[test]
    fn roots_collapse_at_maximum() {
        let (p, w) = base();
        let r = gamma_roots(top(&p, &w) - 1e-10, &w, &p, 1e-12).unwrap();
        assert!((r.gamma1 - w.gamma0).abs() < 1e-3);
        assert!((r.gamma2 - w.gamma0).abs() < 1e-3);
    }

    #[test]
    fn rejects_lambda_above_maximum() {
        let (p, w) = base();
        let r = gamma_roots(1.1 * top(&p, &w), &w, &p, 1e-10);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn qplus_endpoints() {
        let (p, w) = base();
        let t = top(&p, &w);
        let q = critical_exponent_qplus(t, &p, 1e-10).unwrap();
        assert!((q - (p.p_star() - 1.0)).abs() < 1e-9);
        assert!(critical_exponent_qplus(0.5 * t, &p, 1e-10).unwrap() > 2.0);
        assert!(critical_exponent_qplus(1e-6 * t, &p, 1e-14).unwrap() > 100.0);
    }

    #[test]
    fn sobolev_arithmetic() {
        let (p, _) = base();
        let e = sobolev_exponents(&p, 2.0).unwrap();
        assert!((e.p_star_s - 3.0).abs() < 1e-14 && (e.p_star_s_q - 3.0).abs() < 1e-14);
        let e = sobolev_exponents(&p, 1.0).unwrap();
        assert!((e.p_star_s_q - 2.4).abs() < 1e-14);
        let p2 = FracParams::new(2, 0.5, 3.0).unwrap();
        assert!((sobolev_exponents(&p2, 3.0).unwrap().p_star_s - 12.0).abs() < 1e-12);
    }
}
