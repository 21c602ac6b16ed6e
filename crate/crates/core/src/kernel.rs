//! The angular kernel
//!
//! ```text
//! K(σ) = ∫_{S^{N-1}} |e - σ y|^{-(N+ps)} dH(y)
//!      = c_N ∫_0^π sin^{N-2}θ (1 - 2σ cosθ + σ²)^{-(N+ps)/2} dθ,
//! ```
//!
//! which reduces convolutions of radial functions with `|x - y|^{-(N+ps)}`
//! to one-dimensional integrals in the ratio `σ = |y|/|x|`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::params::{ConstantResult, FracParams, QuadratureConfig};
use crate::quad::{adaptive, gauss_legendre};

/// Surface area `|S^{d-1}| = 2π^{d/2}/Γ(d/2)` of the unit sphere in `R^d`.
pub fn sphere_area(d: u32) -> f64 {
    if d == 1 {
        return 2.0;
    }
    let h = d as f64 / 2.0;
    2.0 * PI.powf(h) / libm::tgamma(h)
}

/// Number of hypergeometric coefficients kept for the series evaluations.
const SERIES_TERMS: usize = 64;

/// Kernel `|x - y|^{-(N + e)}` reduced to the ratio variable. The usual
/// kernel has `e = ps`; seminorms of other orders use `e = order·p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    n: u32,
    e: f64,
}

impl Kernel {
    pub fn new(params: &FracParams) -> Self {
        Self {
            n: params.dim(),
            e: params.ps(),
        }
    }

    /// Kernel of differentiability order `order`, i.e. exponent `N + order·p`.
    pub fn with_order(params: &FracParams, order: f64) -> Result<Self> {
        Self::with_exponent(params.dim(), order * params.p())
    }

    /// Kernel `|x - y|^{-(n + e)}` with `0 < e < n`.
    pub fn with_exponent(n: u32, e: f64) -> Result<Self> {
        if n < 1 || !(e > 0.0) || !e.is_finite() {
            return Err(Error::domain(format!(
                "kernel exponent needs n >= 1 and e > 0 (n = {n}, e = {e})"
            )));
        }
        Ok(Self { n, e })
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    /// The excess `e` over the dimension.
    pub fn excess(&self) -> f64 {
        self.e
    }

    /// Total homogeneity `N + e`.
    pub fn exponent(&self) -> f64 {
        self.n as f64 + self.e
    }

    /// Coefficients `c_j` with `K(σ) = |S^{N-1}| Σ c_j σ^{2j}` for `σ < 1`.
    pub fn series_coefficients(&self) -> Vec<f64> {
        let a = self.exponent() / 2.0;
        let b = a - self.n as f64 / 2.0 + 1.0;
        let c = self.n as f64 / 2.0;
        let mut out = Vec::with_capacity(SERIES_TERMS);
        let mut term = 1.0;
        for j in 0..SERIES_TERMS {
            out.push(term);
            let jf = j as f64;
            term *= (a + jf) * (b + jf) / ((c + jf) * (jf + 1.0));
        }
        out
    }

    /// Hypergeometric series, accurate for `σ ≤ 1/2` and for `σ ≥ 2`.
    pub fn series(&self, sigma: f64) -> f64 {
        let coeffs = self.series_coefficients();
        series_eval(&coeffs, sphere_area(self.n), self.exponent(), sigma)
    }

    /// Closed form for `N = 1`.
    fn two_point(&self, sigma: f64, gap: f64) -> f64 {
        let m = -(1.0 + self.e);
        gap.powf(m) + (1.0 + sigma).powf(m)
    }

    /// Direct θ-quadrature, with the gap `|1 - σ|` supplied separately so that
    /// nothing cancels when `σ` is close to 1.
    pub fn direct_with_gap(&self, sigma: f64, gap: f64, cfg: &QuadratureConfig) -> Result<f64> {
        if !(gap > 0.0) {
            return Err(Error::domain("K(σ) diverges at σ = 1"));
        }
        if self.n == 1 {
            return Ok(self.two_point(sigma, gap));
        }
        let n = self.n as i32;
        let m = -self.exponent() / 2.0;
        let cn = sphere_area(self.n - 1);
        let g2 = gap * gap;
        let f = |theta: f64| {
            let h = (0.5 * theta).sin();
            let d = g2 + 4.0 * sigma * h * h;
            theta.sin().powi(n - 2) * d.powf(m)
        };
        let mut breaks = vec![0.0];
        let mut b = gap.min(1.0);
        while b < PI {
            breaks.push(b);
            b *= 2.0;
        }
        breaks.push(PI);
        let est = adaptive(f, &breaks, cfg)?;
        Ok(cn * est.value)
    }

    /// `K(σ)` by direct quadrature for moderate σ and by the series for very
    /// small or very large σ.
    pub fn eval(&self, sigma: f64, cfg: &QuadratureConfig) -> Result<f64> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::domain(format!("σ = {sigma} must be finite and nonnegative")));
        }
        if sigma == 1.0 {
            return Err(Error::domain("K(σ) diverges at σ = 1"));
        }
        if self.n == 1 {
            return Ok(self.two_point(sigma, (1.0 - sigma).abs()));
        }
        if !(1e-4..=1e4).contains(&sigma) {
            return Ok(self.series(sigma));
        }
        self.direct_with_gap(sigma, (1.0 - sigma).abs(), cfg)
    }
}

fn series_eval(coeffs: &[f64], area: f64, exponent: f64, sigma: f64) -> f64 {
    let (x, scale) = if sigma > 1.0 {
        (1.0 / sigma, sigma.powf(-exponent))
    } else {
        (sigma, 1.0)
    };
    let x2 = x * x;
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x2 + c;
    }
    area * scale * acc
}

/// `K(σ)` for the kernel `|x - y|^{-(N+ps)}` with default tolerances.
pub fn angular_kernel(sigma: f64, params: &FracParams) -> Result<f64> {
    Kernel::new(params).eval(sigma, &QuadratureConfig::default())
}

/// Relative defect `|K(1/ξ) - ξ^{N+ps}K(ξ)| / K(1/ξ)` of the inversion symmetry,
/// both sides evaluated independently.
pub fn kernel_symmetry_defect(xi: f64, params: &FracParams) -> Result<f64> {
    if !(xi > 0.0) || xi == 1.0 {
        return Err(Error::domain(format!("ξ = {xi} must be positive and different from 1")));
    }
    let k = Kernel::new(params);
    let cfg = QuadratureConfig {
        rel_tol: 1e-12,
        ..Default::default()
    };
    let lhs = k.eval(1.0 / xi, &cfg)?;
    let rhs = xi.powf(k.exponent()) * k.eval(xi, &cfg)?;
    Ok((lhs - rhs).abs() / lhs)
}

const CHEB_DEGREE: usize = 20;
/// Panels `[2^{-j-1}, 2^{-j}]` in the gap `t = 1 - σ` for `j = 1..=PANELS`.
const PANELS: usize = 46;

/// Fast evaluator for `K`, built once per kernel from the direct quadrature.
///
/// For `σ ≤ 1/2` the series is used. On `1/2 < σ < 1` the smooth function
/// `G(t) = t^{1+e} K(1 - t)` is interpolated on dyadic panels. Values for
/// `σ > 1` follow from `K(σ) = σ^{-(N+e)} K(1/σ)`.
#[derive(Debug)]
pub struct KernelTable {
    kernel: Kernel,
    area: f64,
    coeffs: Vec<f64>,
    panels: Vec<[f64; CHEB_DEGREE + 1]>,
    limit: f64,
}

impl KernelTable {
    /// Shared table for `kernel`, built on first use.
    pub fn get(kernel: Kernel) -> Result<Arc<KernelTable>> {
        type Cache = Mutex<HashMap<(u32, u64), Arc<KernelTable>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let key = (kernel.n, kernel.e.to_bits());
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = cache.lock().expect("kernel cache poisoned").get(&key) {
            return Ok(t.clone());
        }
        let table = Arc::new(Self::build(kernel)?);
        let mut guard = cache.lock().expect("kernel cache poisoned");
        Ok(guard.entry(key).or_insert(table).clone())
    }

    fn build(kernel: Kernel) -> Result<Self> {
        let cfg = QuadratureConfig {
            rel_tol: 1e-13,
            abs_tol: 1e-300,
            max_subdivisions: 5000,
            ..Default::default()
        };
        let deg = CHEB_DEGREE;
        let nodes: Vec<f64> = (0..=deg)
            .map(|k| (PI * (k as f64 + 0.5) / (deg as f64 + 1.0)).cos())
            .collect();
        let mut panels = Vec::with_capacity(PANELS);
        let mut limit = 0.0;
        if kernel.n > 1 {
            for j in 1..=PANELS {
                let h = 0.5f64.powi(j as i32 + 1);
                let mut vals = [0.0; CHEB_DEGREE + 1];
                for (v, &x) in vals.iter_mut().zip(&nodes) {
                    let t = 1.5 * h + 0.5 * h * x;
                    *v = t.powf(1.0 + kernel.e) * kernel.direct_with_gap(1.0 - t, t, &cfg)?;
                }
                let mut c = [0.0; CHEB_DEGREE + 1];
                for (i, ci) in c.iter_mut().enumerate() {
                    let sum: f64 = vals
                        .iter()
                        .enumerate()
                        .map(|(k, v)| v * (PI * i as f64 * (k as f64 + 0.5) / (deg as f64 + 1.0)).cos())
                        .sum();
                    *ci = 2.0 * sum / (deg as f64 + 1.0);
                }
                c[0] *= 0.5;
                panels.push(c);
            }
            limit = clenshaw(panels.last().expect("panels"), -1.0);
        }
        Ok(Self {
            kernel,
            area: sphere_area(kernel.n),
            coeffs: kernel.series_coefficients(),
            panels,
            limit,
        })
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    /// `K(1 - t)` for `0 < t ≤ 1`.
    pub fn inner(&self, t: f64) -> f64 {
        let sigma = 1.0 - t;
        if self.kernel.n == 1 {
            return self.kernel.two_point(sigma, t);
        }
        if t >= 0.5 {
            return series_eval(&self.coeffs, self.area, self.kernel.exponent(), sigma);
        }
        let m = -(1.0 + self.kernel.e);
        let j = (-t.log2()).floor() as i64;
        let g = if j > PANELS as i64 {
            self.limit
        } else {
            let j = j.clamp(1, PANELS as i64) as usize;
            let h = 0.5f64.powi(j as i32 + 1);
            let x = ((t - 1.5 * h) / (0.5 * h)).clamp(-1.0, 1.0);
            clenshaw(&self.panels[j - 1], x)
        };
        g * t.powf(m)
    }

    /// `K(1/(1 - t))` for `0 < t < 1`, i.e. `σ > 1` with `t = 1 - 1/σ`.
    pub fn outer(&self, t: f64) -> f64 {
        (1.0 - t).powf(self.kernel.exponent()) * self.inner(t)
    }

    /// `K(σ)` for `σ ≥ 0`, `σ ≠ 1`.
    pub fn eval(&self, sigma: f64) -> f64 {
        if sigma < 1.0 {
            self.inner(1.0 - sigma)
        } else if sigma > 2.0 {
            series_eval(&self.coeffs, self.area, self.kernel.exponent(), sigma)
        } else {
            self.outer((sigma - 1.0) / sigma)
        }
    }

    /// `K(1 + t)` for `t > 0` without forming `1 + t - 1`.
    pub fn above(&self, t: f64) -> f64 {
        if t > 1.0 {
            self.eval(1.0 + t)
        } else {
            self.outer(t / (1.0 + t))
        }
    }

    /// `K(r/ρ)` using the exact gap `|ρ - r|`.
    pub fn pair(&self, r: f64, rho: f64) -> f64 {
        if r < rho {
            self.inner((rho - r) / rho)
        } else {
            self.outer((r - rho) / r)
        }
    }

    /// `σ^{N+e} K(σ)` written in `x = ln σ`, for `σ ≥ 2`.
    pub fn far_factor(&self, x: f64) -> f64 {
        let x2 = (-2.0 * x).exp();
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x2 + c;
        }
        self.area * acc
    }

    /// `∫_L^∞ σ^{a} K(σ) dσ` from the far-field series, valid for `L ≥ 2`.
    pub fn tail_moment_series(&self, lower: f64, a: f64) -> f64 {
        let m = self.kernel.exponent();
        let x2 = (lower * lower).recip();
        let mut acc = 0.0;
        let mut pw = lower.powf(a - m + 1.0);
        for (j, &c) in self.coeffs.iter().enumerate() {
            acc += c * pw / (m + 2.0 * j as f64 - a - 1.0);
            pw *= x2;
        }
        self.area * acc
    }
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + c[0]
}

/// `∫_a^∞ σ^{exponent} K(σ) dσ` for `a > 1`: adaptive quadrature up to the
/// tail cutoff, far-field series beyond.
pub fn kernel_tail_moment(
    a: f64,
    exponent: f64,
    params: &FracParams,
    cfg: &QuadratureConfig,
) -> Result<ConstantResult> {
    tail_moment_for(Kernel::new(params), a, exponent, cfg)
}

pub(crate) fn tail_moment_for(
    kernel: Kernel,
    a: f64,
    exponent: f64,
    cfg: &QuadratureConfig,
) -> Result<ConstantResult> {
    if !(a > 1.0) {
        return Err(Error::domain(format!("lower limit a = {a} must exceed 1")));
    }
    if exponent - kernel.exponent() >= -1.0 {
        return Err(Error::domain(format!(
            "σ^{exponent} K(σ) is not integrable at infinity"
        )));
    }
    cfg.validate()?;
    let table = KernelTable::get(kernel)?;
    let cut = cfg.tail_cutoff.max(2.0).max(a);
    let tail = table.tail_moment_series(cut, exponent);
    if cut <= a {
        return Ok(ConstantResult {
            value: tail,
            abs_error: tail.abs() * f64::EPSILON * SERIES_TERMS as f64,
            evaluations: SERIES_TERMS,
        });
    }
    // panels geometric in σ - 1
    let mut breaks = vec![a];
    let mut t = (a - 1.0) * 2.0;
    while 1.0 + t < cut {
        breaks.push(1.0 + t);
        t *= 2.0;
    }
    breaks.push(cut);
    let g = |x: f64| x.powf(exponent) * table.above(x - 1.0);
    let est = adaptive(g, &breaks, cfg)?;
    Ok(ConstantResult {
        value: est.value + tail,
        abs_error: est.abs_error,
        evaluations: est.evaluations + SERIES_TERMS,
    })
}

/// Gauss-Legendre quadrature of `K` on `[lo, hi]`, used in tests of the table.
#[doc(hidden)]
pub fn integrate_kernel(table: &KernelTable, lo: f64, hi: f64, n: usize) -> f64 {
    gauss_legendre(n)
        .on(lo, hi)
        .map(|(x, w)| w * table.eval(x))
        .sum()
}
