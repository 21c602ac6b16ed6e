//! The auxiliary double integral
//! `∬ |u(x)|^p ||x|^{2β/p} - |y|^{2β/p}|^p |x|^{-3β} |y|^{-β} |x - y|^{-N-ps} dx dy`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{sphere_area, Kernel, KernelTable};
use crate::params::{ConstantResult, FracParams, Weight};
use crate::quad::Rule;

use super::pairs::{NodeData, PairIntegrand, PairQuadrature};
use super::profile::RadialProfile;

struct G1 {
    p: f64,
    /// `2β/p`
    g: f64,
    beta: f64,
    n: f64,
    ps: f64,
    area: f64,
    table: Arc<KernelTable>,
    tail_rule: Rule,
}

impl G1 {
    fn diff(&self, a: f64, b: f64) -> f64 {
        // |a^g - b^g| for a < b without cancellation
        (a.powf(self.g) * (self.g * ((b - a) / a).ln_1p()).exp_m1()).abs()
    }
}

impl PairIntegrand for G1 {
    fn node(&self, r: f64, u: f64) -> NodeData {
        [
            u.abs().powf(self.p),
            r.powf(-1.0 - 3.0 * self.beta - self.ps),
            r.powf(self.n - 1.0 - self.beta),
            r.powf(self.n + self.ps),
            r,
            0.0,
        ]
    }

    fn pair(&self, a: &NodeData, b: &NodeData, _gap: f64, k: f64) -> f64 {
        if a[0] == 0.0 && b[0] == 0.0 {
            return 0.0;
        }
        let d = self.diff(a[4], b[4]).powf(self.p);
        // x at a, y at b uses K(b/a) = (a/b)^{N+ps} K(a/b)
        let first = a[0] * a[1] * b[2] * (a[3] / b[3]);
        let second = b[0] * b[1] * a[2];
        self.area * d * k * (first + second)
    }

    fn tail(&self, r: f64, u: f64, big_l: f64) -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        // b = L e^x
        let acc = self.tail_rule.integrate(|x| {
            let b = big_l * x.exp();
            let ratio = r / b;
            self.diff(r, b).powf(self.p)
                * b.powf(self.n - self.beta)
                * ratio.powf(self.n + self.ps)
                * self.table.eval(ratio)
        });
        self.area * u.abs().powf(self.p) * r.powf(-1.0 - 3.0 * self.beta - self.ps) * acc
    }

    fn diagonal_exponent(&self) -> f64 {
        self.p - 1.0 - self.ps
    }
}

/// Computes the double integral in radial coordinates, pairing both orderings
/// of `(|x|, |y|)` on the same product grid as the seminorm.
pub fn g1_double_integral(u: &RadialProfile, weight: &Weight, params: &FracParams) -> Result<ConstantResult> {
    let beta = weight.beta;
    let (p, ps) = (params.p(), params.ps());
    if beta.abs() >= ps {
        return Err(Error::domain("the g₁ integral diverges unless |β| < ps"));
    }
    if u.is_zero() {
        return Ok(ConstantResult::exact(0.0));
    }
    if u.radii()[0] == 0.0 && u.values()[0] != 0.0 && u.power() == 0.0 {
        // |u|^p r^{N-1-2β-ps} must be integrable at 0
        if params.nf() - 2.0 * beta - ps <= 0.0 {
            return Err(Error::domain("the g₁ integral diverges at the origin"));
        }
    }
    let table = KernelTable::get(Kernel::new(params))?;
    let f = G1 {
        p,
        g: 2.0 * beta / p,
        beta,
        n: params.nf(),
        ps,
        area: sphere_area(params.dim()),
        table: table.clone(),
        tail_rule: Rule::exponential_tail(0.0, ps - beta.abs(), 16),
    };
    let quad = PairQuadrature::new(u, table, None);
    let coarse = quad.integrate(&f, 0);
    let fine = quad.integrate(&f, 1);
    Ok(ConstantResult { value: fine, abs_error: (fine - coarse).abs(), evaluations: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::c3_constant;
    use crate::params::QuadratureConfig;
    use crate::radial::weighted_lp_norm;

    #[test]
    fn matches_c3_times_norm() {
        let p = FracParams::new(3, 0.5, 2.0).unwrap();
        let u = RadialProfile::tent(1.0).unwrap();
        for beta in [0.25, -0.3, 0.45] {
            let w = Weight::new(beta, &p).unwrap();
            let lhs = g1_double_integral(&u, &w, &p).unwrap().value;
            let c3 = c3_constant(&w, &p, &QuadratureConfig::default()).unwrap().value;
            let rhs = c3 * weighted_lp_norm(&u, 2.0 * beta + p.ps(), p.p(), &p).unwrap().value;
            assert!((lhs - rhs).abs() < 1e-4 * rhs, "β={beta}: {lhs} vs {rhs}");
        }
    }
}
