//! Action of the weighted operator on pure power laws.

use serde::{Deserialize, Serialize};

use crate::constants::{lambda_folded, PV_FLOOR};
use crate::error::{Error, Result};
use crate::kernel::{Kernel, KernelTable};
use crate::params::{FracParams, QuadratureConfig, Weight};
use crate::quad::adaptive;

/// Operator values on `|x|^{-γ}` against the prediction `Λ(γ) r^{-γ(p-1)-ps-2β}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorCheck {
    pub radii: Vec<f64>,
    pub operator: Vec<f64>,
    pub predicted: Vec<f64>,
    pub max_relative_defect: f64,
}

/// Evaluates
/// `r^{-β} ∫_0^∞ |r^{-γ} - ρ^{-γ}|^{p-2}(r^{-γ} - ρ^{-γ}) ρ^{N-1-β} r^{-N-ps} K(ρ/r) dρ`
/// by adaptive quadrature in `ρ` (principal value at `ρ = r`) and compares
/// with `Λ(γ) r^{-γ(p-1)-ps-2β}`.
pub fn power_law_operator_check(
    gamma: f64,
    beta: f64,
    r_points: &[f64],
    params: &FracParams,
) -> Result<OperatorCheck> {
    let (n, p, ps) = (params.nf(), params.p(), params.ps());
    if !(gamma > 0.0) {
        return Err(Error::domain("γ must be positive"));
    }
    if r_points.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::domain("evaluation radii must be positive"));
    }
    let weight = Weight::new(beta, params)?;
    let cfg = QuadratureConfig { rel_tol: 1e-11, abs_tol: 1e-300, max_subdivisions: 4000, ..Default::default() };
    let lambda = lambda_folded(gamma, &weight, params, &QuadratureConfig::default())?.value;
    let table = KernelTable::get(Kernel::new(params))?;
    let signed = |z: f64| z.signum() * z.abs().powf(p - 1.0);
    let mut out = OperatorCheck {
        radii: r_points.to_vec(),
        operator: Vec::new(),
        predicted: Vec::new(),
        max_relative_defect: 0.0,
    };
    for &r in r_points {
        let lr = r.ln();
        let rg = r.powf(-gamma);
        // ρ ∈ (0, r/2): ρ = (r/2) u^{1/(e0+1)}
        let e0 = n - 1.0 - beta - gamma * (p - 1.0);
        let k0 = 1.0 / (e0 + 1.0);
        let low = adaptive(
            |u: f64| {
                let rho = 0.5 * r * u.powf(k0);
                let jac = 0.5 * r * k0 * u.powf(k0 - 1.0);
                signed(rg - rho.powf(-gamma)) * rho.powf(n - 1.0 - beta) * table.eval(rho / r) * jac
            },
            &[0.0, 1.0],
            &cfg,
        )?;
        // ρ = r(1 ± τ), τ ∈ (0, 1/2), τ = v^{1/(p-ps)}/2
        let kt = 1.0 / (p - ps);
        let side = |t: f64, k: f64| {
            let diff = -rg * (-gamma * t.ln_1p()).exp_m1();
            signed(diff) * (r * (1.0 + t)).powf(n - 1.0 - beta) * k
        };
        let pair = |tau: f64| side(tau, table.above(tau)) + side(-tau, table.inner(tau));
        let floor = pair(PV_FLOOR);
        let mid = adaptive(
            |v: f64| {
                let tau = 0.5 * v.powf(kt);
                let jac = 0.5 * kt * v.powf(kt - 1.0);
                if tau < PV_FLOOR {
                    return r * jac * floor * (tau / PV_FLOOR).powf(p - 1.0 - ps);
                }
                r * jac * pair(tau)
            },
            &[0.0, 0.25, 1.0],
            &cfg,
        )?;
        // ρ ∈ (3r/2, ∞): ρ = (3r/2) u^{-1/(β+ps)}, assembled in logarithms
        let d = beta + ps;
        let high = adaptive(
            |u: f64| {
                let lrho = (1.5 * r).ln() - u.ln() / d;
                let rho_over_r = (lrho - lr).exp();
                let (lk, kfac) = if rho_over_r >= 2.0 {
                    (-(n + ps) * (lrho - lr), table.far_factor(lrho - lr))
                } else {
                    (0.0, table.eval(rho_over_r))
                };
                let ljac = lrho - u.ln() - d.ln();
                let diff = rg - (-gamma * lrho).exp();
                signed(diff) * kfac * ((n - 1.0 - beta) * lrho + lk + ljac).exp()
            },
            &[0.0, 1.0],
            &cfg,
        )?;
        let value = r.powf(-beta - n - ps) * (low.value + mid.value + high.value);
        let predicted = lambda * r.powf(-gamma * (p - 1.0) - ps - 2.0 * beta);
        let defect = (value - predicted).abs() / predicted.abs();
        out.max_relative_defect = out.max_relative_defect.max(defect);
        out.operator.push(value);
        out.predicted.push(predicted);
    }
    Ok(out)
}
