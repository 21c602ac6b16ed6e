//! Quotient campaigns over random bump families.

use crate::constants::{c3_constant, hardy_constant};
use crate::error::{Error, Result};
use crate::params::{ConstantResult, FracParams, QuadratureConfig, Weight};
use crate::radial::{
    ckn_quotient, ckn_quotient_bounded, g1_double_integral, hardy_quotient, weighted_lp_norm,
    weighted_seminorm, weighted_seminorm_in_ball, QuotientValue, RadialProfile,
};

use super::family::{bump_family, smooth_bump};
use super::VerificationReport;

/// Relative tolerance of the Hardy, ground-state and g₁ checks.
const QUOTIENT_TOL: f64 = 1e-3;
const DILATIONS: [f64; 2] = [0.25, 4.0];

fn rel(c: &ConstantResult) -> f64 {
    if c.value == 0.0 {
        0.0
    } else {
        (c.abs_error / c.value).abs()
    }
}

fn quotient_error(q: &QuotientValue) -> f64 {
    rel(&q.numerator) + rel(&q.denominator)
}

/// Largest relative deviation of `f(u(·/R))` from `f(u)` over `R ∈ {1/4, 4}`.
pub fn dilation_spread(
    u: &RadialProfile,
    f: impl Fn(&RadialProfile) -> Result<QuotientValue>,
) -> Result<f64> {
    let base = f(u)?.ratio;
    let mut spread: f64 = 0.0;
    for r in DILATIONS {
        let v = f(&u.dilate(r)?)?.ratio;
        spread = spread.max((v / base - 1.0).abs());
    }
    Ok(spread)
}

/// Checks `quotient ≥ 2Λ(γ₀)(1 - 10⁻³)` over `family_size` random bumps.
pub fn verify_hardy(family_size: usize, beta: f64, params: &FracParams, seed: u64) -> Result<VerificationReport> {
    let weight = Weight::new(beta, params)?;
    let sharp = hardy_constant(&weight, params, &QuadratureConfig::default())?;
    let mut report = VerificationReport::new("hardy", params, seed, QUOTIENT_TOL).setting("beta", beta);
    report.witness.insert("hardy_constant".into(), sharp.value);
    report.witness.insert("gamma0".into(), weight.gamma0);
    let family = bump_family(family_size, seed)?;
    for u in &family {
        let q = hardy_quotient(u, beta, params)?;
        report.record(q.ratio, q.ratio / sharp.value - 1.0, quotient_error(&q) + sharp.rel_error());
        report.lower_constant(q.ratio);
    }
    if let Some(u) = family.first() {
        let spread = dilation_spread(u, |v| hardy_quotient(v, beta, params))?;
        report.witness.insert("dilation_spread".into(), spread);
    }
    report.judge_lower();
    Ok(report)
}

/// Checks `h_s(u) ≥ 0` for bumps in the unit ball and reports the smallest
/// ratio of `h_s(u)` to the order-`qs/p` seminorm over the ball.
pub fn verify_improved_hardy(
    family_size: usize,
    q: f64,
    params: &FracParams,
    seed: u64,
) -> Result<VerificationReport> {
    let p = params.p();
    if p < 2.0 {
        return Err(Error::domain("the improved Hardy inequality needs p ≥ 2"));
    }
    if !(q > 1.0 && q < p) {
        return Err(Error::domain(format!("q = {q} must lie in (1, p)")));
    }
    let sharp = hardy_constant(&Weight::unweighted(params), params, &QuadratureConfig::default())?;
    let mut report =
        VerificationReport::new("improved-hardy", params, seed, QUOTIENT_TOL).setting("q", q);
    let order = q * params.s() / p;
    for u in &bump_family(family_size, seed)? {
        let sn = weighted_seminorm(u, 0.0, params.s(), params)?;
        let lp = weighted_lp_norm(u, params.ps(), p, params)?;
        let h = sn.value - sharp.value * lp.value;
        let lower = weighted_seminorm_in_ball(u, 0.0, order, params, 1.0)?;
        let err = rel(&sn) + (rel(&lp) + sharp.rel_error()) * sharp.value * lp.value / sn.value;
        report.record(h / lower.value, h / sn.value, err);
        report.lower_constant(h / lower.value);
    }
    report.judge_lower();
    Ok(report)
}

/// Checks positivity of the CKN quotient over random bumps. In bounded mode
/// `β` must equal `(N - ps)/2` and the exponent `p*_{s,q}` is used.
pub fn verify_ckn(
    family_size: usize,
    beta: f64,
    params: &FracParams,
    bounded: bool,
    q: Option<f64>,
    seed: u64,
) -> Result<VerificationReport> {
    let critical = (params.nf() - params.ps()) / 2.0;
    let check = if bounded { "ckn-bounded" } else { "ckn" };
    let mut report = VerificationReport::new(check, params, seed, 0.0).setting("beta", beta);
    let quotient: Box<dyn Fn(&RadialProfile) -> Result<QuotientValue>> = if bounded {
        let q = q.ok_or_else(|| Error::domain("bounded mode needs q"))?;
        if (beta - critical).abs() > 1e-12 * critical.max(1.0) {
            return Err(Error::domain(format!("bounded mode needs β = (N - ps)/2 = {critical}")));
        }
        report.settings.insert("q".into(), q);
        Box::new(move |u| ckn_quotient_bounded(u, q, params))
    } else {
        Weight::new(beta, params)?;
        Box::new(move |u| ckn_quotient(u, beta, params))
    };
    let family = bump_family(family_size, seed)?;
    for u in &family {
        let v = quotient(u)?;
        report.record(v.ratio, v.ratio, quotient_error(&v) * v.ratio);
        report.lower_constant(v.ratio);
    }
    if let Some(u) = family.first() {
        report.witness.insert("dilation_spread".into(), dilation_spread(u, &quotient)?);
    }
    report.judge_lower();
    if report.worst_defect <= 0.0 {
        report.verdict = super::Verdict::Fail;
    }
    Ok(report)
}

/// Compares `h_s(u)` with the `(N - ps)/2`-weighted seminorm of
/// `v = |x|^{(N-ps)/p} u`: equal at `p = 2`, and bounded below by a positive
/// multiple of it otherwise.
pub fn verify_ground_state(family_size: usize, params: &FracParams, seed: u64) -> Result<VerificationReport> {
    let p = params.p();
    let identity = p == 2.0;
    let sharp = hardy_constant(&Weight::unweighted(params), params, &QuadratureConfig::default())?;
    let alpha = params.ground_state_exponent();
    let beta = (params.nf() - params.ps()) / 2.0;
    let tol = if identity { QUOTIENT_TOL } else { 0.0 };
    let mut report = VerificationReport::new("ground-state", params, seed, tol);
    for u in &bump_family(family_size, seed)? {
        let sn = weighted_seminorm(u, 0.0, params.s(), params)?;
        let lp = weighted_lp_norm(u, params.ps(), p, params)?;
        let h = sn.value - sharp.value * lp.value;
        let v = weighted_seminorm(&u.times_power(alpha), beta, params.s(), params)?;
        let ratio = h / v.value;
        let err = (sn.abs_error + sharp.value * lp.abs_error + sharp.abs_error * lp.value) / v.value
            + rel(&v) * ratio.abs();
        let defect = if identity { ratio - 1.0 } else { ratio };
        report.record(ratio, defect, err);
        report.lower_constant(ratio);
    }
    if identity {
        report.judge_identity();
    } else {
        report.judge_lower();
        if report.worst_defect <= 0.0 {
            report.verdict = super::Verdict::Fail;
        }
    }
    Ok(report)
}

/// Compares the g₁ double integral with `C₃ ∫ |u|^p |x|^{-2β-ps}`.
pub fn verify_g1_identity(u: &RadialProfile, beta: f64, params: &FracParams) -> Result<VerificationReport> {
    if beta == 0.0 {
        return Err(Error::domain("the g₁ identity needs β ≠ 0"));
    }
    let weight = Weight::new(beta, params)?;
    let mut report =
        VerificationReport::new("g1-identity", params, 0, QUOTIENT_TOL).setting("beta", beta);
    let lhs = g1_double_integral(u, &weight, params)?;
    let c3 = c3_constant(&weight, params, &QuadratureConfig::default())?;
    let lp = weighted_lp_norm(u, 2.0 * beta + params.ps(), params.p(), params)?;
    let rhs = c3.value * lp.value;
    report.witness.insert("lhs".into(), lhs.value);
    report.witness.insert("rhs".into(), rhs);
    report.witness.insert("c3".into(), c3.value);
    let (defect, err) = if rhs == 0.0 && lhs.value == 0.0 {
        (0.0, 0.0)
    } else {
        ((lhs.value - rhs) / rhs, rel(&lhs) + rel(&lp) + c3.rel_error())
    };
    report.record(lhs.value, defect, err);
    report.judge_identity();
    Ok(report)
}

/// Seminorm of a fixed bump restricted to `B_R × B_R` for six doublings of
/// `R`; for `β < -ps` it must increase at the rate `R^{-β-ps}`.
pub fn verify_divergence(beta: f64, params: &FracParams) -> Result<VerificationReport> {
    let ps = params.ps();
    if !(beta < -ps) {
        return Err(Error::domain(format!("the divergence check needs β < -ps = {}", -ps)));
    }
    let radii: Vec<f64> = (0..=64).map(|k| k as f64 / 64.0).collect();
    let u = RadialProfile::from_fn(radii, smooth_bump)?;
    let mut report = VerificationReport::new("divergence", params, 0, 0.1).setting("beta", beta);
    let growth = 2f64.powf(-beta - ps);
    report.witness.insert("predicted_increment_ratio".into(), growth);
    let mut values = Vec::new();
    for k in 0..=6 {
        let r = 2.0 * 2f64.powi(k);
        values.push(weighted_seminorm_in_ball(&u, beta, params.s(), params, r)?.value);
    }
    let mut monotone = true;
    for k in 1..values.len() {
        let inc = values[k] - values[k - 1];
        monotone &= inc > 0.0;
        let defect = if k >= 2 {
            let prev = values[k - 1] - values[k - 2];
            inc / prev / growth - 1.0
        } else {
            0.0
        };
        report.record(values[k], defect, 0.0);
    }
    report.judge_identity();
    if !monotone {
        report.verdict = super::Verdict::Fail;
        report.warnings.push("the truncated seminorm is not increasing".into());
    }
    Ok(report)
}
