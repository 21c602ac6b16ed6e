//! The Hardy profile `Λ(γ)`, its derivative, the sharp constants and the
//! auxiliary integrals `μ`, `C₃` and the truncated barrier `h`.

use crate::error::{Error, Result};
use crate::halfline::{one_minus_pow, pw, pw_diff, HalfLine};
use crate::kernel::{Kernel, KernelTable};
use crate::params::{ConstantResult, FracParams, QuadratureConfig, Weight};
use crate::quad::{adaptive, Rule};

/// Gauss points per panel for the successive refinement levels.
const LEVELS: [usize; 3] = [16, 24, 32];

/// Evaluates `f` on successively finer rules until two consecutive levels
/// agree to the configured tolerance; the reported error is their difference.
fn refine(
    cfg: &QuadratureConfig,
    what: &str,
    mut f: impl FnMut(usize) -> Result<(f64, usize)>,
) -> Result<ConstantResult> {
    cfg.validate()?;
    let (mut prev, mut evals) = f(LEVELS[0])?;
    for &n in &LEVELS[1..] {
        let (v, m) = f(n)?;
        evals += m;
        let diff = (v - prev).abs();
        if !v.is_finite() {
            break;
        }
        if diff <= cfg.abs_tol.max(cfg.rel_tol * v.abs()) {
            return Ok(ConstantResult {
                value: v,
                abs_error: diff,
                evaluations: evals,
            });
        }
        prev = v;
    }
    Err(Error::Convergence {
        message: format!("{what}: refinement levels disagree beyond tolerance"),
        partial: prev,
    })
}

fn check_gamma(gamma: f64, weight: &Weight, params: &FracParams) -> Result<()> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::domain(format!("γ = {gamma} must be nonnegative")));
    }
    if gamma * (params.p() - 1.0) >= params.nf() - weight.beta {
        return Err(Error::domain(format!(
            "Λ(γ) diverges at the origin for γ = {gamma} (needs γ(p-1) < N - β)"
        )));
    }
    if weight.beta + params.ps() <= 0.0 {
        return Err(Error::domain("Λ(γ) diverges at infinity for β ≤ -ps"));
    }
    Ok(())
}

/// `Λ(γ) = ∫_1^∞ K(σ)(σ^γ - 1)^{p-1}(σ^{N-1-β-γ(p-1)} - σ^{β+ps-1}) dσ`.
///
/// Positive on `(0, γ_max)`, zero at 0 and negative beyond `γ_max`.
pub fn lambda_folded(
    gamma: f64,
    weight: &Weight,
    params: &FracParams,
    cfg: &QuadratureConfig,
) -> Result<ConstantResult> {
    check_gamma(gamma, weight, params)?;
    if gamma == 0.0 {
        return Ok(ConstantResult::exact(0.0));
    }
    let (n, p, ps, beta) = (params.nf(), params.p(), params.ps(), weight.beta);
    let kernel = Kernel::new(params);
    let e_near = p - 1.0 - ps;
    let a = n - 1.0 - beta;
    let b = gamma * (p - 1.0) + beta + ps - 1.0;
    let rate = (beta + ps).min(n - beta - gamma * (p - 1.0));
    refine(cfg, "Λ(γ)", |m| {
        let rule = HalfLine::get(kernel, e_near, m, cfg.tail_cutoff)?;
        Ok(rule.integrate(rate, |x, sh| {
            one_minus_pow(gamma, x, p - 1.0) * pw_diff(a, b, x, sh)
        }))
    })
}

/// Gap to `σ = 1` below which principal-value pairs follow their leading power law.
pub(crate) const PV_FLOOR: f64 = 1e-5;

/// `Λ(γ)` from the unfolded integral `∫_0^∞ ψ(σ) dσ` with
/// `ψ(σ) = |1 - σ^{-γ}|^{p-2}(1 - σ^{-γ}) σ^{N-β-1} K(σ)`, the neighbourhood
/// of `σ = 1` taken as a principal value.
pub fn lambda_unfolded(
    gamma: f64,
    weight: &Weight,
    params: &FracParams,
    cfg: &QuadratureConfig,
) -> Result<ConstantResult> {
    check_gamma(gamma, weight, params)?;
    if gamma == 0.0 {
        return Ok(ConstantResult::exact(0.0));
    }
    let (n, p, ps, beta) = (params.nf(), params.p(), params.ps(), weight.beta);
    let table = KernelTable::get(Kernel::new(params))?;
    let cut = cfg.tail_cutoff.max(4.0);
    let signed = |z: f64| z.signum() * z.abs().powf(p - 1.0);
    // 1 - σ^{-γ} given ln σ
    let defect = |x: f64| -(-gamma * x).exp_m1();
    let psi = |x: f64, k: f64| signed(defect(x)) * (x * (n - beta - 1.0)).exp() * k;
    refine(cfg, "unfolded Λ(γ)", |m| {
        let mut total = 0.0;
        let mut count = 0;
        // (0, 1/2), graded toward the origin
        let e0 = n - beta - 1.0 - gamma * (p - 1.0);
        for &(u, w) in &Rule::graded_unit(e0, m, 60).points {
            let s = 0.5 * u;
            total += 0.5 * w * psi(s.ln(), table.eval(s));
        }
        count += m * 61;
        // [1/2, 3/2] as a principal value around σ = 1
        let pair = |t: f64| psi(t.ln_1p(), table.above(t)) + psi((-t).ln_1p(), table.inner(t));
        // below PV_FLOOR the pair cancels to rounding; use its leading power law
        let e_pv = p - 1.0 - ps;
        let floor = pair(PV_FLOOR);
        let rule = Rule::graded_unit(e_pv, m, 48);
        for &(u, w) in &rule.points {
            let t = 0.5 * u;
            let v = if t < PV_FLOOR { floor * (t / PV_FLOOR).powf(e_pv) } else { pair(t) };
            total += 0.5 * w * v;
        }
        count += 2 * rule.len();
        let mid = Rule::geometric(1.5, cut, m);
        total += mid.integrate(|s| psi(s.ln(), table.eval(s)));
        count += mid.len();
        // beyond the cutoff in x = ln σ: ψ σ = F(x) (1 - e^{-γx})^{p-1} e^{-(β+ps)x}
        let far = Rule::exponential_tail(cut.ln(), beta + ps, m);
        total += far.integrate(|x| {
            table.far_factor(x) * one_minus_pow(gamma, x, p - 1.0) * (-(beta + ps) * x).exp()
        });
        count += far.len();
        Ok((total, count))
    })
}

/// `Λ'(γ) = (p-1)∫_1^∞ K(σ) log σ (σ^γ - 1)^{p-2}(σ^{N-1-β-γ(p-1)} - σ^{β+ps+γ-1}) dσ`
/// for `p ≥ 2`; central differences of [`lambda_folded`] with step `1e-4`
/// when `p < 2`.
pub fn lambda_derivative(
    gamma: f64,
    weight: &Weight,
    params: &FracParams,
    cfg: &QuadratureConfig,
) -> Result<ConstantResult> {
    check_gamma(gamma, weight, params)?;
    let (n, p, ps, beta) = (params.nf(), params.p(), params.ps(), weight.beta);
    if p < 2.0 {
        let h = 1e-4;
        if gamma < h {
            return Err(Error::domain(
                "finite-difference derivative needs γ ≥ 1e-4 when p < 2",
            ));
        }
        let up = lambda_folded(gamma + h, weight, params, cfg)?;
        let down = lambda_folded(gamma - h, weight, params, cfg)?;
        return Ok(ConstantResult {
            value: (up.value - down.value) / (2.0 * h),
            abs_error: (up.abs_error + down.abs_error) / (2.0 * h),
            evaluations: up.evaluations + down.evaluations,
        });
    }
    if gamma == 0.0 && p > 2.0 {
        return Ok(ConstantResult::exact(0.0));
    }
    let kernel = Kernel::new(params);
    let e_near = p - 1.0 - ps;
    let a = n - 1.0 - beta - gamma;
    let b = gamma * (p - 1.0) + beta + ps - 1.0;
    let rate = (beta + ps + gamma).min(n - beta - gamma * (p - 1.0));
    refine(cfg, "Λ'(γ)", |m| {
        let rule = HalfLine::get(kernel, e_near, m, cfg.tail_cutoff)?;
        let (v, c) = rule.integrate(rate, |x, sh| {
            x * one_minus_pow(gamma, x, p - 2.0) * pw_diff(a, b, x, sh)
        });
        Ok(((p - 1.0) * v, c))
    })
}

/// Sharp constant `2Λ(γ₀)` of the weighted Hardy inequality.
pub fn hardy_constant(
    weight: &Weight,
    params: &FracParams,
    cfg: &QuadratureConfig,
) -> Result<ConstantResult> {
    Ok(lambda_folded(weight.gamma0, weight, params, cfg)?.scaled(2.0))
}

/// `μ = ∫_0^∞ |1 - σ^α|^p σ^{αp(p-1)+N-1}(1 + σ^{αp})^{-p} K_{qs}(σ) dσ` with
/// `α = (N - ps)/p` and `K_{qs}` the kernel of exponent `N + qs`.
pub fn mu_constant(q: f64, params: &FracParams, cfg: &QuadratureConfig) -> Result<ConstantResult> {
    let p = params.p();
    if !(q > 1.0 && q < p) {
        return Err(Error::domain(format!("q = {q} must lie in (1, p)")));
    }
    let n = params.nf();
    let qs = q * params.s();
    let alpha = params.ground_state_exponent();
    let kernel = Kernel::with_exponent(params.dim(), qs)?;
    let e_near = p - 1.0 - qs;
    // folded over σ ↦ 1/σ: K_{qs} |1 - σ^{-α}|^p (1 + σ^{-αp})^{-p} (σ^{N-1} + σ^{qs-1-αp(p-1)})
    let a = n - 1.0;
    let b = qs - 1.0 - alpha * p * (p - 1.0);
    refine(cfg, "μ", |m| {
        let rule = HalfLine::get(kernel, e_near, m, cfg.tail_cutoff)?;
        Ok(rule.integrate(qs, |x, sh| {
            one_minus_pow(alpha, x, p) * (1.0 + (-alpha * p * x).exp()).powf(-p)
                * (pw(a, x, sh) + pw(b, x, sh))
        }))
    })
}

/// `C₃ = ∫_0^∞ |1 - σ^{2β/p}|^p σ^{N-1-β} K(σ) dσ`, evaluated over `(0, 1)` and
/// `(1, ∞)` separately.
pub fn c3_constant(
    weight: &Weight,
    params: &FracParams,
    cfg: &QuadratureConfig,
) -> Result<ConstantResult> {
    let beta = weight.beta;
    if beta == 0.0 {
        return Err(Error::domain("C₃ is defined for β ≠ 0"));
    }
    let (n, p, ps) = (params.nf(), params.p(), params.ps());
    let kernel = Kernel::new(params);
    let table = KernelTable::get(kernel)?;
    let g = 2.0 * beta / p;
    if n - 1.0 - beta + 2.0 * beta.min(0.0) <= -1.0 || beta + ps <= 2.0 * beta.max(0.0) {
        return Err(Error::domain("C₃ integral diverges for this β"));
    }
    let e_near = p - 1.0 - ps;
    let a = n - 1.0 - beta;
    // σ^{N-1-β} |1 - σ^{2β/p}|^p at 0: exponent N-1-β+2 min(β,0)
    let e0 = n - 1.0 - beta + 2.0 * beta.min(0.0);
    let rate = beta + ps - 2.0 * beta.max(0.0);
    refine(cfg, "C₃", |m| {
        let above = HalfLine::get(kernel, e_near, m, cfg.tail_cutoff)?;
        let (hi, c1) = above.integrate(rate, |x, sh| {
            (g * x).exp_m1().abs().powf(p) * pw(a, x, sh)
        });
        let f = |x: f64| (g * x).exp_m1().abs().powf(p) * (a * x).exp();
        let mut lo = 0.0;
        let r0 = Rule::graded_unit(e0, m, 60);
        for &(u, w) in &r0.points {
            let s = 0.5 * u;
            lo += 0.5 * w * f(s.ln()) * table.eval(s);
        }
        let r1 = Rule::graded_unit(e_near, m, 48);
        for &(u, w) in &r1.points {
            let t = 0.5 * u;
            lo += 0.5 * w * f((-t).ln_1p()) * table.inner(t);
        }
        Ok((hi + lo, c1 + r0.len() + r1.len()))
    })
}

/// The barrier function at `|x| = r` for `β = 0`:
///
/// ```text
/// h(r) = ∫_0^{1/r} |1 - σ^{-γ}|^{p-2}(1 - σ^{-γ}) σ^{N-1} K(σ) dσ
///        + (1 - r^γ) ∫_{1/r}^∞ σ^{N-1} K(σ) dσ,
/// ```
///
/// computed as `Λ(γ) - ∫_{1/r}^∞ [(1 - σ^{-γ})^{p-1} - (1 - r^γ)] σ^{N-1} K(σ) dσ`.
pub fn truncation_h(
    r: f64,
    gamma: f64,
    params: &FracParams,
    cfg: &QuadratureConfig,
) -> Result<ConstantResult> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::domain(format!("r = {r} must lie in (0, 1)")));
    }
    let weight = Weight::unweighted(params);
    let (n, p, ps) = (params.nf(), params.p(), params.ps());
    if !(gamma > 0.0 && gamma * (p - 1.0) < n - ps) {
        return Err(Error::domain(format!(
            "γ = {gamma} must lie in (0, (N-ps)/(p-1))"
        )));
    }
    let lambda = lambda_folded(gamma, &weight, params, cfg)?;
    let kernel = Kernel::new(params);
    let table = KernelTable::get(kernel)?;
    let level = 1.0 - r.powf(gamma);
    let a = 1.0 / r;
    let cut = cfg.tail_cutoff.max(4.0).max(2.0 * a);
    let g = |s: f64| {
        let x = s.ln();
        (one_minus_pow(gamma, x, p - 1.0) - level) * (x * (n - 1.0)).exp() * table.above(s - 1.0)
    };
    let mut breaks = vec![a];
    let mut t = 2.0 * (a - 1.0);
    while 1.0 + t < cut {
        breaks.push(1.0 + t);
        t *= 2.0;
    }
    breaks.push(cut);
    let inner = adaptive(g, &breaks, cfg)?;
    let rule = HalfLine::get(kernel, p - 1.0 - ps, LEVELS[2], cfg.tail_cutoff)?;
    let (far, m) = rule.far(cut.ln(), ps, &|x, sh| {
        (one_minus_pow(gamma, x, p - 1.0) - level) * pw(n - 1.0, x, sh)
    });
    Ok(ConstantResult {
        value: lambda.value - inner.value - far,
        abs_error: lambda.abs_error + inner.abs_error,
        evaluations: lambda.evaluations + inner.evaluations + m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn base() -> (FracParams, Weight) {
        let p = FracParams::new(3, 0.5, 2.0).unwrap();
        (p, Weight::unweighted(&p))
    }

    #[test]
    fn lambda_vanishes_at_zero() {
        let (p, w) = base();
        assert_eq!(lambda_folded(0.0, &w, &p, &cfg()).unwrap().value, 0.0);
    }

    #[test]
    fn lambda_sign_pattern() {
        let (p, w) = base();
        for &g in &[0.1, 0.5, 1.0, 1.5, 1.9] {
            assert!(lambda_folded(g, &w, &p, &cfg()).unwrap().value > 0.0);
        }
        let v = lambda_folded(w.gamma_max + 0.1, &w, &p, &cfg()).unwrap();
        assert!(v.value < 0.0, "{v:?}");
    }

    #[test]
    fn folded_matches_unfolded() {
        let (p, w) = base();
        let a = lambda_folded(w.gamma0, &w, &p, &cfg()).unwrap();
        let b = lambda_unfolded(w.gamma0, &w, &p, &cfg()).unwrap();
        assert!((a.value - b.value).abs() < 1e-8 * a.value, "{a:?} {b:?}");
    }

    #[test]
    fn derivative_vanishes_at_maximiser() {
        let (p, w) = base();
        let l = lambda_folded(w.gamma0, &w, &p, &cfg()).unwrap().value;
        let d = lambda_derivative(w.gamma0, &w, &p, &cfg()).unwrap().value;
        assert!(d.abs() < 1e-9 * l, "{d} vs {l}");
        let d = lambda_derivative(w.gamma0 / 2.0, &w, &p, &cfg()).unwrap().value;
        assert!(d > 0.0);
    }

    #[test]
    fn derivative_zero_at_origin_for_p3() {
        let p = FracParams::new(3, 0.4, 3.0).unwrap();
        let w = Weight::unweighted(&p);
        assert_eq!(lambda_derivative(0.0, &w, &p, &cfg()).unwrap().value, 0.0);
    }

    #[test]
    fn mu_finite_and_q_dependent() {
        let p = FracParams::new(3, 0.5, 3.0).unwrap();
        let a = mu_constant(3.0 - 1e-6, &p, &cfg()).unwrap().value;
        let b = mu_constant(2.0, &p, &cfg()).unwrap().value;
        assert!(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0);
        assert!((a - b).abs() > 1e-6 * a);
        assert!(mu_constant(3.5, &p, &cfg()).is_err());
    }

    #[test]
    fn c3_small_beta() {
        let (p, _) = base();
        let w = Weight::new(1e-4, &p).unwrap();
        let v = c3_constant(&w, &p, &cfg()).unwrap().value;
        assert!(v > 0.0 && v < 1e-2, "{v}");
    }

    #[test]
    fn barrier_below_lambda_at_p2() {
        let (p, w) = base();
        let gamma = 0.6;
        let l = lambda_folded(gamma, &w, &p, &cfg()).unwrap().value;
        for &r in &[1e-4, 0.1, 0.5, 0.99] {
            let h = truncation_h(r, gamma, &p, &cfg()).unwrap().value;
            assert!(h <= l + 1e-8, "r={r}: {h} > {l}");
        }
        let h = truncation_h(1e-4, gamma, &p, &cfg()).unwrap().value;
        assert!(l - h < 1e-2);
    }
}
