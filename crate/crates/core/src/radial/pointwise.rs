//! Pointwise inequalities behind the lower bounds: the elementary
//! inequality and the discrete Picone identity.

use crate::error::{Error, Result};
use crate::params::FracParams;

/// `|a - t|^p - (1 - t)^{p-1}(|a|^p - t)`, nonnegative for `t ∈ [0, 1]`.
pub fn elementary_inequality_defect(a: f64, t: f64, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t = {t} must lie in [0, 1]")));
    }
    if !(p > 1.0) {
        return Err(Error::domain("p must exceed 1"));
    }
    Ok((a - t).abs().powf(p) - (1.0 - t).powf(p - 1.0) * (a.abs().powf(p) - t))
}

/// Picone defect for one pair of points:
/// `Φ = |u_x - u_y|^p - (|u_x|^p/w_x^{p-1} - |u_y|^p/w_y^{p-1}) |w_x - w_y|^{p-2}(w_x - w_y)`.
pub fn picone_phi(u: (f64, f64), w: (f64, f64), p: f64) -> Result<f64> {
    if !(w.0 > 0.0 && w.1 > 0.0) {
        return Err(Error::domain("Picone weights must be strictly positive"));
    }
    let dw = w.0 - w.1;
    let flux = dw.signum() * dw.abs().powf(p - 1.0);
    let v = u.0.abs().powf(p) / w.0.powf(p - 1.0) - u.1.abs().powf(p) / w.1.powf(p - 1.0);
    Ok((u.0 - u.1).abs().powf(p) - v * flux)
}

/// Minimum of [`picone_phi`] over paired samples.
pub fn picone_defect(
    u_vals: &[(f64, f64)],
    w_vals: &[(f64, f64)],
    params: &FracParams,
) -> Result<f64> {
    if u_vals.len() != w_vals.len() || u_vals.is_empty() {
        return Err(Error::domain("u and w samples must be nonempty and of equal length"));
    }
    let mut worst = f64::INFINITY;
    for (&u, &w) in u_vals.iter().zip(w_vals) {
        worst = worst.min(picone_phi(u, w, params.p())?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary_inequality_defect(1.0, 0.0, 3.7).unwrap(), 0.0);
        assert!((elementary_inequality_defect(2.0, 0.5, 3.0).unwrap() - 1.5).abs() < 1e-14);
        assert!(elementary_inequality_defect(-4.0, 1.0, 2.5).unwrap() > 0.0);
        assert!(elementary_inequality_defect(1.0, 1.5, 2.0).is_err());
    }

    #[test]
    fn picone_equality_when_ratio_constant() {
        // u/w = 2 on the pair
        let phi = picone_phi((2.0, 1.0), (1.0, 0.5), 2.0).unwrap();
        assert!(phi.abs() < 1e-15);
        let phi = picone_phi((0.3, 1.7), (0.3, 1.7), 3.0).unwrap();
        assert!(phi.abs() < 1e-15);
        assert!(picone_phi((1.0, 1.0), (0.0, 1.0), 2.0).is_err());
    }
}
