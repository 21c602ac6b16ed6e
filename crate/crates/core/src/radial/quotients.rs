//! Hardy and Caffarelli-Kohn-Nirenberg quotients and the ground-state
//! remainder.

use crate::constants::hardy_constant;
use crate::error::{Error, Result};
use crate::params::{ConstantResult, FracParams, QuadratureConfig, Weight};

use super::profile::RadialProfile;
use super::seminorm::{weighted_lp_norm, weighted_seminorm, QuotientValue};

/// `∬ |u(x)-u(y)|^p |x-y|^{-N-ps} |x|^{-β}|y|^{-β} / ∫ |u|^p |x|^{-ps-2β}`.
pub fn hardy_quotient(u: &RadialProfile, beta: f64, params: &FracParams) -> Result<QuotientValue> {
    if u.is_zero() {
        return Err(Error::domain("the Hardy quotient of the zero profile is undefined"));
    }
    let num = weighted_seminorm(u, beta, params.s(), params)?;
    let den = weighted_lp_norm(u, params.ps() + 2.0 * beta, params.p(), params)?;
    QuotientValue::new(num, den)
}

/// `‖u‖^p` in the weighted norm `(∫ |u|^q |x|^{-w})^{p/q}`.
fn powered_norm(u: &RadialProfile, w: f64, q: f64, params: &FracParams) -> Result<ConstantResult> {
    let raw = weighted_lp_norm(u, w, q, params)?;
    let e = params.p() / q;
    let value = raw.value.powf(e);
    let abs_error = if raw.value > 0.0 { e * value * raw.abs_error / raw.value } else { 0.0 };
    Ok(ConstantResult { value, abs_error, evaluations: raw.evaluations })
}

/// Seminorm over `(∫ |u|^{p*_s} |x|^{-2β p*_s/p})^{p/p*_s}`.
pub fn ckn_quotient(u: &RadialProfile, beta: f64, params: &FracParams) -> Result<QuotientValue> {
    if u.is_zero() {
        return Err(Error::domain("the CKN quotient of the zero profile is undefined"));
    }
    if beta >= (params.nf() - params.ps()) / 2.0 {
        return Err(Error::domain("the CKN quotient needs β < (N - ps)/2"));
    }
    let q = params.p_star();
    let num = weighted_seminorm(u, beta, params.s(), params)?;
    let den = powered_norm(u, 2.0 * beta * q / params.p(), q, params)?;
    QuotientValue::new(num, den)
}

/// Critical weight `β = (N - ps)/2` with the exponent `p*_{s,q} = pN/(N - qs)`
/// in place of `p*_s`, for profiles supported in a bounded domain.
pub fn ckn_quotient_bounded(u: &RadialProfile, q: f64, params: &FracParams) -> Result<QuotientValue> {
    if u.is_zero() {
        return Err(Error::domain("the CKN quotient of the zero profile is undefined"));
    }
    if !(q > 1.0 && q < params.p()) {
        return Err(Error::domain(format!("q = {q} must lie in (1, p)")));
    }
    let beta = (params.nf() - params.ps()) / 2.0;
    let exponent = params.p() * params.nf() / (params.nf() - q * params.s());
    let num = weighted_seminorm(u, beta, params.s(), params)?;
    let den = powered_norm(u, 2.0 * beta * exponent / params.p(), exponent, params)?;
    QuotientValue::new(num, den)
}

/// `h_s(u) = ∬ |u(x)-u(y)|^p/|x-y|^{N+ps} - Λ_{N,p,s} ∫ |u|^p/|x|^{ps}`.
pub fn ground_state_remainder(u: &RadialProfile, params: &FracParams) -> Result<ConstantResult> {
    let sharp = hardy_constant(&Weight::unweighted(params), params, &QuadratureConfig::default())?;
    let num = weighted_seminorm(u, 0.0, params.s(), params)?;
    let den = weighted_lp_norm(u, params.ps(), params.p(), params)?;
    Ok(ConstantResult {
        value: num.value - sharp.value * den.value,
        abs_error: num.abs_error + sharp.value * den.abs_error + sharp.abs_error * den.value,
        evaluations: num.evaluations + den.evaluations + sharp.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tent_quotients() {
        let p = FracParams::new(3, 0.5, 2.0).unwrap();
        let u = RadialProfile::tent(1.0).unwrap();
        let sharp = hardy_constant(&Weight::unweighted(&p), &p, &QuadratureConfig::default())
            .unwrap()
            .value;
        let h = hardy_quotient(&u, 0.0, &p).unwrap();
        assert!(h.ratio >= sharp);
        let h2 = hardy_quotient(&u.dilate(3.0).unwrap(), 0.0, &p).unwrap();
        assert!((h.ratio / h2.ratio - 1.0).abs() < 1e-9);
        let c = ckn_quotient(&u, 0.0, &p).unwrap();
        assert!(c.ratio > 0.0 && c.ratio.is_finite());
        let b = ckn_quotient_bounded(&u, 1.5, &p).unwrap();
        assert!(b.ratio > 0.0 && b.ratio.is_finite());
    }

    #[test]
    fn ground_state_identity_at_p2() {
        let p = FracParams::new(3, 0.5, 2.0).unwrap();
        let u = RadialProfile::tent(1.0).unwrap();
        let h = ground_state_remainder(&u, &p).unwrap().value;
        let alpha = (3.0 - p.ps()) / 2.0;
        let v = weighted_seminorm(&u.times_power(alpha), alpha, 0.5, &p).unwrap().value;
        assert!((h - v).abs() < 1e-3 * v, "{h} vs {v}");
    }
}
