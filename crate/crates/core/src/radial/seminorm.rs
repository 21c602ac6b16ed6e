//! Weighted Gagliardo seminorms and weighted Lebesgue norms of radial
//! profiles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{sphere_area, Kernel, KernelTable};
use crate::params::{ConstantResult, FracParams};
use crate::quad::gauss_legendre;

use super::pairs::{NodeData, PairIntegrand, PairQuadrature};
use super::profile::RadialProfile;

/// A Rayleigh-type quotient together with its two ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotientValue {
    pub numerator: ConstantResult,
    pub denominator: ConstantResult,
    pub ratio: f64,
}

impl QuotientValue {
    pub(crate) fn new(numerator: ConstantResult, denominator: ConstantResult) -> Result<Self> {
        if !(denominator.value > 0.0) {
            return Err(Error::domain("quotient denominator vanishes"));
        }
        Ok(Self {
            numerator,
            denominator,
            ratio: numerator.value / denominator.value,
        })
    }
}

struct Seminorm {
    p: f64,
    /// `N - 1 - β`
    left: f64,
    /// `-1 - β - ps'`
    right: f64,
    /// `β + ps'`
    decay: f64,
    e: f64,
    prefactor: f64,
    coeffs: Vec<f64>,
    area: f64,
}

impl PairIntegrand for Seminorm {
    fn node(&self, r: f64, u: f64) -> NodeData {
        [u, r.powf(self.left), r.powf(self.right), 0.0, 0.0, 0.0]
    }

    fn pair(&self, a: &NodeData, b: &NodeData, _gap: f64, k: f64) -> f64 {
        let d = (a[0] - b[0]).abs();
        if d == 0.0 {
            return 0.0;
        }
        self.prefactor * d.powf(self.p) * a[1] * b[2] * k
    }

    fn tail(&self, r: f64, u: f64, big_l: f64) -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        // ∫_L^∞ ρ^{-1-β-ps'} K(r/ρ) dρ = r^{-β-ps'} |S| Σ c_j x^{β+ps'+2j}/(β+ps'+2j), x = r/L
        let x = r / big_l;
        let x2 = x * x;
        let mut acc = 0.0;
        let mut pw = x.powf(self.decay);
        for (j, &c) in self.coeffs.iter().enumerate() {
            let term = c * pw / (self.decay + 2.0 * j as f64);
            acc += term;
            if term.abs() < 1e-18 * acc.abs() {
                break;
            }
            pw *= x2;
        }
        self.prefactor * u.abs().powf(self.p) * r.powf(self.left - self.decay) * self.area * acc
    }

    fn diagonal_exponent(&self) -> f64 {
        self.e
    }
}

/// Exponents of `u(0)`-relative variation and of `|u|` at the origin.
fn origin_exponents(u: &RadialProfile) -> (f64, f64) {
    let at_zero = u.radii()[0] == 0.0;
    match (u.values()[0] == 0.0, u.power() == 0.0) {
        (true, _) if at_zero => (u.power() + 1.0, u.power() + 1.0),
        (true, _) => (f64::INFINITY, f64::INFINITY),
        (false, true) if at_zero => (1.0, 0.0),
        (false, true) => (f64::INFINITY, 0.0),
        (false, false) => (u.power(), u.power()),
    }
}

/// `|S^{N-1}| ∫∫ |u(r) - u(rσ)|^p σ^{N-1-β} K_order(σ) r^{N-1-2β-order·p} dσ dr`,
/// i.e. the radial form of
/// `∫∫ |u(x) - u(y)|^p |x - y|^{-(N + order·p)} |x|^{-β} |y|^{-β} dx dy`.
pub fn weighted_seminorm(
    u: &RadialProfile,
    beta: f64,
    order: f64,
    params: &FracParams,
) -> Result<ConstantResult> {
    seminorm_impl(u, beta, order, params, None)
}

/// The same double integral restricted to `B_R × B_R`.
pub fn weighted_seminorm_in_ball(
    u: &RadialProfile,
    beta: f64,
    order: f64,
    params: &FracParams,
    radius: f64,
) -> Result<ConstantResult> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::domain("ball radius must be positive"));
    }
    seminorm_impl(u, beta, order, params, Some(radius))
}

fn seminorm_impl(
    u: &RadialProfile,
    beta: f64,
    order: f64,
    params: &FracParams,
    outer: Option<f64>,
) -> Result<ConstantResult> {
    if !(order > 0.0 && order < 1.0) {
        return Err(Error::domain(format!("order = {order} must lie in (0, 1)")));
    }
    if u.is_zero() {
        return Ok(ConstantResult::exact(0.0));
    }
    let (n, p) = (params.nf(), params.p());
    let ps = order * p;
    if outer.is_none() && beta + ps <= 0.0 {
        return Err(Error::domain(format!(
            "the seminorm over R^N diverges at infinity for β = {beta} ≤ -{ps}"
        )));
    }
    let (a_var, a_val) = origin_exponents(u);
    if p * a_var + n - 2.0 * beta - ps <= 0.0 || p * a_val + n - beta <= 0.0 {
        return Err(Error::domain("the seminorm diverges at the origin for this profile"));
    }
    let kernel = Kernel::with_exponent(params.dim(), ps)?;
    let table = KernelTable::get(kernel)?;
    let area = sphere_area(params.dim());
    let integrand = Seminorm {
        p,
        left: n - 1.0 - beta,
        right: -1.0 - beta - ps,
        decay: beta + ps,
        e: p - 1.0 - ps,
        prefactor: 2.0 * area,
        coeffs: kernel.series_coefficients(),
        area,
    };
    let quad = PairQuadrature::new(u, table, outer);
    let coarse = quad.integrate(&integrand, 0);
    let fine = quad.integrate(&integrand, 1);
    Ok(ConstantResult {
        value: fine,
        abs_error: (fine - coarse).abs(),
        evaluations: 0,
    })
}

/// `|S^{N-1}| ∫_0^∞ |u(r)|^{exponent} r^{N-1-weight_exponent} dr`.
pub fn weighted_lp_norm(
    u: &RadialProfile,
    weight_exponent: f64,
    exponent: f64,
    params: &FracParams,
) -> Result<ConstantResult> {
    if !(exponent >= 1.0) {
        return Err(Error::domain("the Lebesgue exponent must be at least 1"));
    }
    if u.is_zero() {
        return Ok(ConstantResult::exact(0.0));
    }
    let n = params.nf();
    let (_, a0) = origin_exponents(u);
    if exponent * a0 + n - weight_exponent <= 0.0 {
        return Err(Error::domain(
            "the weighted norm diverges at the origin for this profile",
        ));
    }
    let area = sphere_area(params.dim());
    let radii = u.radii();
    let c = if radii[0] == 0.0 { radii[1] } else { radii[0] };
    // panels: dyadic toward 0 inside [0, c], then the profile's pieces
    let mut breaks = vec![0.0, c * 0.5f64.powi(60)];
    let mut x = breaks[1];
    while 2.0 * x < c {
        x *= 2.0;
        breaks.push(x);
    }
    for &r in radii.iter().filter(|&&r| r >= c) {
        breaks.push(r);
    }
    breaks.dedup();
    // panels of ratio at most 2 away from the origin, graded toward zeros of
    // the linear part where |u|^q is not smooth
    let mut panels = Vec::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (vl, vh) = (u.linear_part(lo), u.linear_part(hi));
        if lo > 0.0 && vl * vh <= 0.0 && vl != vh {
            let z = lo + (hi - lo) * vl / (vl - vh);
            graded(&mut panels, z, lo);
            graded(&mut panels, z, hi);
            continue;
        }
        let pieces = if lo > 0.0 { ((hi / lo).log2().ceil() as usize).max(1) } else { 1 };
        let q = if lo > 0.0 { (hi / lo).powf(1.0 / pieces as f64) } else { 1.0 };
        let mut a = lo;
        for k in 0..pieces {
            let b = if k + 1 == pieces { hi } else { a * q };
            panels.push((a, b));
            a = b;
        }
    }
    let f = |r: f64| u.eval(r).abs().powf(exponent) * r.powf(n - 1.0 - weight_exponent);
    let mut levels = [0.0; 2];
    for (lv, &m) in levels.iter_mut().zip(&[10usize, 16]) {
        let gl = gauss_legendre(m);
        let s: f64 = panels
            .iter()
            .map(|&(a, b)| gl.on(a, b).map(|(r, wr)| wr * f(r)).sum::<f64>())
            .sum();
        *lv = area * s;
    }
    Ok(ConstantResult {
        value: levels[1],
        abs_error: (levels[1] - levels[0]).abs(),
        evaluations: 0,
    })
}

/// Dyadic panels between `z` and `end`, refined toward `z`.
fn graded(panels: &mut Vec<(f64, f64)>, z: f64, end: f64) {
    const LEVELS: i32 = 40;
    if z == end {
        return;
    }
    let d = end - z;
    for k in 0..LEVELS {
        let (a, b) = (z + d * 0.5f64.powi(k + 1), z + d * 0.5f64.powi(k));
        panels.push((a.min(b), a.max(b)));
    }
    let last = z + d * 0.5f64.powi(LEVELS);
    panels.push((z.min(last), z.max(last)));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n3() -> FracParams {
        FracParams::new(3, 0.5, 2.0).unwrap()
    }

    #[test]
    fn tent_norm_closed_form() {
        let p = n3();
        let u = RadialProfile::tent(1.0).unwrap();
        let v = weighted_lp_norm(&u, 0.0, 2.0, &p).unwrap().value;
        // |S²| B(3, 3) = 4π Γ(3)Γ(3)/Γ(6)
        let exact = 4.0 * std::f64::consts::PI * 4.0 / 120.0;
        assert!((v - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn zero_profile() {
        let u = RadialProfile::new(vec![0.0, 1.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(weighted_seminorm(&u, 0.0, 0.5, &n3()).unwrap().value, 0.0);
        assert_eq!(weighted_lp_norm(&u, 1.0, 2.0, &n3()).unwrap().value, 0.0);
    }

    #[test]
    fn dilation_covariance() {
        let p = n3();
        let u = RadialProfile::from_fn(
            super::super::profile::geometric_grid(0.05, 1.0, 30),
            |r| (1.0 - r * r).powi(2),
        )
        .unwrap();
        let a = weighted_seminorm(&u, 0.2, 0.5, &p).unwrap();
        let b = weighted_seminorm(&u.dilate(5.0).unwrap(), 0.2, 0.5, &p).unwrap();
        let scale = 5f64.powf(3.0 - 1.0 - 0.4);
        assert!((b.value / a.value / scale - 1.0).abs() < 1e-10);
        assert!(a.abs_error < 1e-5 * a.value, "{a:?}");
    }

    #[test]
    fn homogeneity() {
        let p = FracParams::new(3, 0.4, 2.5).unwrap();
        let u = RadialProfile::tent(1.0).unwrap();
        let a = weighted_seminorm(&u, 0.0, 0.4, &p).unwrap().value;
        let b = weighted_seminorm(&u.scale(-3.0), 0.0, 0.4, &p).unwrap().value;
        assert!((b / a - 3f64.powf(2.5)).abs() < 1e-12 * b / a);
    }

    #[test]
    fn divergent_tail_is_rejected() {
        let u = RadialProfile::tent(1.0).unwrap();
        assert!(weighted_seminorm(&u, -1.2, 0.5, &n3()).is_err());
        assert!(weighted_seminorm_in_ball(&u, -1.2, 0.5, &n3(), 8.0).is_ok());
    }
}
