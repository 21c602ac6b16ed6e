//! The extremal sequence `wₙ` and its quotient bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::sphere_area;
use crate::params::{FracParams, QuadratureConfig, Weight};
use crate::quad::{adaptive, Rule};

use super::profile::{geometric_grid, RadialProfile};
use super::quotients::hardy_quotient;
use super::seminorm::{weighted_lp_norm, QuotientValue};

/// Quotient of `wₙ` and the terms of the upper bound
/// `2Λ(γ₀)(1 + Cₙ)`, `Cₙ = (Iₙ + Jₙ) / ∫ |wₙ|^p |x|^{-ps-2β}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalityCertificate {
    pub n: u32,
    pub quotient: QuotientValue,
    pub i_n: f64,
    pub j_n: f64,
    pub c_n: f64,
}

/// Grid points per decade used to sample `wₙ` on `[1, n]`.
const POINTS_PER_DECADE: f64 = 160.0;

/// `wₙ = 1 - n^{-γ₀}` on `B₁`, `|x|^{-γ₀} - n^{-γ₀}` on `1 ≤ |x| < n`, 0 beyond.
pub fn extremal_profile(n: u32, gamma0: f64) -> Result<RadialProfile> {
    if n < 2 {
        return Err(Error::domain("the extremal sequence starts at n = 2"));
    }
    let nf = n as f64;
    let points = (POINTS_PER_DECADE * nf.log10()).ceil() as usize + 2;
    let tail = nf.powf(-gamma0);
    RadialProfile::from_fn(geometric_grid(1.0, nf, points), |r| r.powf(-gamma0) - tail)
}

pub fn optimality_certificate(
    n: u32,
    weight: &Weight,
    params: &FracParams,
) -> Result<OptimalityCertificate> {
    let g0 = weight.gamma0;
    let (p, ps, beta) = (params.p(), params.ps(), weight.beta);
    let w = extremal_profile(n, g0)?;
    let quotient = hardy_quotient(&w, beta, params)?;
    let area = sphere_area(params.dim());
    let nf = n as f64;
    let tail = nf.powf(-g0);
    let m = 1.0 - tail;
    let e = params.nf() - 1.0 - ps - 2.0 * beta;
    let i_n = area
        * Rule::graded_unit(g0 - 1.0, 20, 60)
            .integrate(|r| m * (r.powf(-g0 * (p - 1.0)) - m.powf(p - 1.0)) * r.powf(e));
    let mut breaks = vec![1.0];
    while breaks.last().copied().unwrap_or(nf) * 2.0 < nf {
        let b = breaks.last().copied().unwrap_or(1.0) * 2.0;
        breaks.push(b);
    }
    breaks.push(nf);
    let cfg = QuadratureConfig { rel_tol: 1e-12, abs_tol: 1e-300, ..Default::default() };
    let j_n = area
        * adaptive(
            |r| {
                let w0 = r.powf(-g0);
                let wn = w0 - tail;
                wn * (w0.powf(p - 1.0) - wn.powf(p - 1.0)) * r.powf(e)
            },
            &breaks,
            &cfg,
        )?
        .value;
    let norm = weighted_lp_norm(&w, ps + 2.0 * beta, p, params)?;
    Ok(OptimalityCertificate {
        n,
        quotient,
        i_n,
        j_n,
        c_n: (i_n + j_n) / norm.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_term_closed_form() {
        let p = FracParams::new(3, 0.5, 2.0).unwrap();
        let w = Weight::unweighted(&p);
        let c = optimality_certificate(4, &w, &p).unwrap();
        // ∫_0^1 r^{γ₀-1} = 1/γ₀ and ∫_0^1 r^{pγ₀-1} = 1/(pγ₀), γ₀ = 1
        let m = 1.0 - 0.25;
        let exact = 4.0 * std::f64::consts::PI * m * (1.0 - m / 2.0);
        assert!((c.i_n - exact).abs() < 1e-10 * exact, "{} vs {exact}", c.i_n);
        assert!(c.j_n >= 0.0);
    }
}
