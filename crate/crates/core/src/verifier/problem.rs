//! Supersolution certificates, non-existence witnesses and the barrier
//! estimate for `(-Δ_p)^s u = λ u^{p-1}/|x|^{ps} + u^q`.

use crate::constants::{lambda_folded, truncation_h};
use crate::error::{Error, Result};
use crate::exponents::{critical_exponent_qplus, gamma_roots};
use crate::params::{FracParams, QuadratureConfig, Weight};
use crate::radial::{weighted_lp_norm, weighted_seminorm, RadialProfile};

use super::family::smooth_bump;
use super::{ProblemSpec, VerificationReport, Verdict};

/// Tolerance of the root solves for `γ₁` and `q₊`.
pub const ROOT_TOL: f64 = 1e-12;
/// Allowed relative deviation of the per-halving growth from `2^ρ`.
const GROWTH_TOL: f64 = 0.2;
const HALVINGS: i32 = 8;

fn peak(params: &FracParams) -> Result<f64> {
    let w = Weight::unweighted(params);
    Ok(lambda_folded(w.gamma0, &w, params, &QuadratureConfig::default())?.value)
}

fn gamma1(lambda: f64, params: &FracParams) -> Result<f64> {
    Ok(gamma_roots(lambda, &Weight::unweighted(params), params, ROOT_TOL)?.gamma1)
}

fn base_report(check: &str, spec: &ProblemSpec, params: &FracParams) -> VerificationReport {
    VerificationReport::new(check, params, 0, 0.0)
        .setting("lambda", spec.lambda)
        .setting("q", spec.q)
        .setting("domain_radius", spec.domain_radius)
}

/// Looks for `λ₁ ∈ (λ, Λ(γ₀))` with `γ₁(λ₁)(p-1) + ps > q γ₁(λ₁)` and the
/// largest `C` for which `C|x|^{-γ₁(λ₁)}` satisfies
/// `(λ₁ - λ) Ĉ^{p-1}|x|^{-ps} ≥ Ĉ^q` on the ball. Both sides are powers of
/// `|x|`, so the inequality is checked exactly at the boundary radius.
pub fn certify_supersolution(spec: &ProblemSpec, params: &FracParams) -> Result<VerificationReport> {
    let p = params.p();
    if !(spec.q > p - 1.0) {
        return Err(Error::domain(format!("q = {} must exceed p - 1", spec.q)));
    }
    let top = peak(params)?;
    if !(spec.lambda < top) {
        return Err(Error::domain(format!("λ = {} must be below Λ(γ₀) = {top}", spec.lambda)));
    }
    let q_plus = critical_exponent_qplus(spec.lambda, params, ROOT_TOL)?;
    let mut report = base_report("supersolution", spec, params);
    report.witness.insert("q_plus".into(), q_plus);
    let fractions = (1..16)
        .rev()
        .map(|k| k as f64 / 16.0)
        .chain((5..=40).map(|k| 0.5f64.powi(k)));
    let mut best = f64::NEG_INFINITY;
    for f in fractions {
        let lambda1 = spec.lambda + f * (top - spec.lambda);
        let g1 = gamma1(lambda1, params)?;
        let margin = g1 * (p - 1.0) + params.ps() - spec.q * g1;
        report.record(lambda1, margin, 0.0);
        best = best.max(margin);
        if margin > 0.0 {
            let c = ((lambda1 - spec.lambda) * spec.domain_radius.powf(-margin))
                .powf(1.0 / (spec.q - p + 1.0));
            report.witness.insert("lambda1".into(), lambda1);
            report.witness.insert("gamma1".into(), g1);
            report.witness.insert("c".into(), c);
            report.witness.insert("margin".into(), margin);
            report.worst_defect = margin;
            report.verdict = Verdict::Pass;
            return Ok(report);
        }
    }
    report.worst_defect = best;
    report.verdict = Verdict::Fail;
    report
        .warnings
        .push("refused: no λ₁ in (λ, Λ(γ₀)) gives γ₁(λ₁)(p-1) + ps > qγ₁(λ₁)".into());
    Ok(report)
}

/// For `q > q₊(λ)` finds `ε, ρ > 0` with `(γ₁ - ε)(q - (p-1)) > ps + ρ` and
/// shows that `∫|φ_k|^p/|x|^{ps+ρ} / seminorm(φ_k)` grows by `2^ρ` each time
/// the support of a fixed bump is halved.
pub fn nonexistence_witness(spec: &ProblemSpec, params: &FracParams) -> Result<VerificationReport> {
    let p = params.p();
    let q_plus = critical_exponent_qplus(spec.lambda, params, ROOT_TOL)?;
    if !(spec.q > q_plus) {
        return Err(Error::domain(format!("q = {} must exceed q₊ = {q_plus}", spec.q)));
    }
    let g1 = gamma1(spec.lambda, params)?;
    let d = spec.q - (p - 1.0);
    let m = g1 * d - params.ps();
    let epsilon = m / (2.0 * d);
    let rho = m / 4.0;
    let mut report = base_report("nonexistence", spec, params);
    report.tolerance = GROWTH_TOL;
    for (k, v) in [("q_plus", q_plus), ("gamma1", g1), ("epsilon", epsilon), ("rho", rho)] {
        report.witness.insert(k.into(), v);
    }
    let predicted = 2f64.powf(rho);
    report.witness.insert("predicted_growth".into(), predicted);
    let radii: Vec<f64> = (0..=64).map(|k| k as f64 / 64.0).collect();
    let phi = RadialProfile::from_fn(radii, smooth_bump)?;
    let ratio = |u: &RadialProfile| -> Result<f64> {
        let lp = weighted_lp_norm(u, params.ps() + rho, p, params)?;
        let sn = weighted_seminorm(u, 0.0, params.s(), params)?;
        Ok(lp.value / sn.value)
    };
    let mut prev = ratio(&phi)?;
    let mut monotone = true;
    for k in 1..=HALVINGS {
        let cur = ratio(&phi.dilate(0.5f64.powi(k))?)?;
        monotone &= cur > prev;
        report.record(cur, cur / prev / predicted - 1.0, 0.0);
        prev = cur;
    }
    report.judge_identity();
    let strict = (g1 - epsilon) * d > params.ps() + rho && rho > 0.0 && epsilon > 0.0;
    if !strict || !monotone {
        report.verdict = Verdict::Fail;
    }
    Ok(report)
}

/// Evaluates the barrier `h(r)` for `γ = γ₁(λ)` on 50 radii in `(0, 1)` and
/// checks `h ≤ λ`.
pub fn verify_truncation_barrier(lambda: f64, params: &FracParams) -> Result<VerificationReport> {
    let top = peak(params)?;
    if !(lambda > 0.0 && lambda < top) {
        return Err(Error::domain(format!("λ = {lambda} must lie in (0, Λ(γ₀) = {top})")));
    }
    let g1 = gamma1(lambda, params)?;
    let cfg = QuadratureConfig::default();
    let mut report = VerificationReport::new("barrier", params, 0, 1e-8).setting("lambda", lambda);
    report.witness.insert("gamma1".into(), g1);
    for r in crate::radial::geometric_grid(1e-4, 0.99, 50) {
        let h = truncation_h(r, g1, params, &cfg)?;
        report.record(h.value, (lambda - h.value) / lambda, h.abs_error / lambda);
    }
    report.witness.insert("h_at_smallest_r".into(), report.details[0].value);
    report.judge_lower();
    Ok(report)
}
