//! Quadrature building blocks: Gauss-Legendre rules, geometrically graded
//! composite rules and an adaptive Gauss-Kronrod integrator.

use std::collections::BinaryHeap;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::params::QuadratureConfig;

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    fn compute(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (pn, d) = legendre(n, x);
                dp = d;
                let dx = pn / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Map onto `[a, b]`, yielding `(x, w)` pairs.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared Gauss-Legendre rule with `n` points.
pub fn gauss_legendre(n: usize) -> Arc<GaussLegendre> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("rule cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(GaussLegendre::compute(n)))
        .clone()
}

/// A list of `(x, w)` pairs approximating an integral.
#[derive(Debug, Clone, Default)]
pub struct Rule {
    pub points: Vec<(f64, f64)>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.points.iter().map(|&(x, w)| w * f(x)).sum()
    }

    fn push_panel(&mut self, gl: &GaussLegendre, a: f64, b: f64) {
        self.points.extend(gl.on(a, b));
    }

    /// Rule for `∫_0^1 f(t) dt` where `f ~ t^e` near zero (`e > -1`).
    ///
    /// Panels `[2^{-j-1}, 2^{-j}]` for `j < levels`, then the innermost panel
    /// `[0, 2^{-levels}]` under `t = 2^{-levels} u^{1/(e+1)}`.
    pub fn graded_unit(e: f64, n: usize, levels: usize) -> Rule {
        let gl = gauss_legendre(n);
        let mut rule = Rule::default();
        let mut hi = 1.0;
        for _ in 0..levels {
            let lo = 0.5 * hi;
            rule.push_panel(&gl, lo, hi);
            hi = lo;
        }
        let k = 1.0 / (e + 1.0);
        for (u, w) in gl.on(0.0, 1.0) {
            let t = hi * u.powf(k);
            let jac = hi * k * u.powf(k - 1.0);
            rule.points.push((t, w * jac));
        }
        rule
    }

    /// Rule for `∫_{x0}^∞ g(x) dx` where `g` decays at least like
    /// `e^{-rate x}`. Panel lengths start at 1/2 and double up to `1/rate`;
    /// the rule stops once the decay factor drops below `e^{-42}`.
    pub fn exponential_tail(x0: f64, rate: f64, n: usize) -> Rule {
        let gl = gauss_legendre(n);
        let mut rule = Rule::default();
        let rate = rate.max(1e-6);
        let cap = (1.0 / rate).max(0.5);
        let mut a = x0;
        let mut len: f64 = 0.5;
        while rate * (a - x0) < 42.0 {
            rule.push_panel(&gl, a, a + len);
            a += len;
            len = (2.0 * len).min(cap);
        }
        rule
    }

    /// Composite rule on `[a, b]` with geometric panels of ratio 2 (`a > 0`).
    pub fn geometric(a: f64, b: f64, n: usize) -> Rule {
        let gl = gauss_legendre(n);
        let mut rule = Rule::default();
        let mut lo = a;
        while lo < b {
            let hi = (2.0 * lo).min(b);
            let hi = if b - hi < 0.25 * lo { b } else { hi };
            rule.push_panel(&gl, lo, hi);
            lo = hi;
        }
        rule
    }
}

// Gauss-Kronrod 7/15 abscissae and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let sum = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

#[derive(PartialEq)]
struct Segment {
    err: f64,
    a: f64,
    b: f64,
    value: f64,
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

/// Adaptive Gauss-Kronrod integration over the polyline `breaks`.
///
/// Each initial segment is refined by bisection of the segment with the
/// largest Kronrod-Gauss discrepancy until the summed discrepancy meets
/// `max(abs_tol, rel_tol |I|)`.
pub fn adaptive(
    mut f: impl FnMut(f64) -> f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut err = 0.0;
    let mut evals = 0;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (v, e) = gk15(&mut f, w[0], w[1]);
        evals += 15;
        total += v;
        err += e;
        heap.push(Segment {
            err: e,
            a: w[0],
            b: w[1],
            value: v,
        });
    }
    let mut splits = 0;
    loop {
        if !total.is_finite() {
            return Err(Error::Convergence {
                message: "non-finite integrand".into(),
                partial: total,
            });
        }
        if err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            break;
        }
        if splits >= cfg.max_subdivisions {
            return Err(Error::Convergence {
                message: format!("adaptive quadrature exhausted {splits} subdivisions"),
                partial: total,
            });
        }
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval below floating-point resolution
            heap.push(Segment { err: 0.0, ..seg });
            err = heap.iter().map(|s| s.err).sum();
            continue;
        }
        let (v1, e1) = gk15(&mut f, seg.a, mid);
        let (v2, e2) = gk15(&mut f, mid, seg.b);
        evals += 30;
        splits += 1;
        total += v1 + v2 - seg.value;
        err += e1 + e2 - seg.err;
        heap.push(Segment { err: e1, a: seg.a, b: mid, value: v1 });
        heap.push(Segment { err: e2, a: mid, b: seg.b, value: v2 });
    }
    // re-sum to remove drift from incremental updates
    let value = heap.iter().map(|s| s.value).sum();
    let abs_error = heap.iter().map(|s| s.err).sum();
    Ok(Estimate {
        value,
        abs_error,
        evaluations: evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let gl = gauss_legendre(10);
        let v: f64 = gl.on(0.0, 2.0).map(|(x, w)| w * x.powi(19)).sum();
        assert!((v - 2f64.powi(20) / 20.0).abs() < 1e-9 * v);
        let total: f64 = gl.weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn graded_rule_handles_endpoint_power() {
        for &e in &[-0.8, -0.3, 0.5, 2.7] {
            let rule = Rule::graded_unit(e, 16, 20);
            let v = rule.integrate(|t| t.powf(e) * (1.0 + t.sqrt()));
            let exact = 1.0 / (e + 1.0) + 1.0 / (e + 1.5);
            assert!((v - exact).abs() < 1e-10 * exact, "e={e}: {v} vs {exact}");
        }
    }

    #[test]
    fn exponential_tail_rule() {
        for &rate in &[0.01, 1.0, 7.0] {
            let rule = Rule::exponential_tail(1.0, rate, 20);
            let v = rule.integrate(|x| (-rate * x).exp() * (1.0 + 1.0 / x));
            let e1 = libm::exp(-rate) / rate;
            // ∫_1^∞ e^{-ax}/x dx = E1(a), compared via a fine reference rule
            let fine = Rule::geometric(1.0, 1e6, 40).integrate(|x| (-rate * x).exp() / x);
            let exact = e1 + fine;
            assert!((v - exact).abs() < 1e-10 * exact, "rate {rate}: {v} vs {exact}");
        }
    }

    #[test]
    fn adaptive_singular_endpoint() {
        let cfg = QuadratureConfig::default();
        let est = adaptive(|x| x.powf(-0.5), &[0.0, 1.0], &cfg).unwrap();
        assert!((est.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn adaptive_reports_budget_exhaustion() {
        let cfg = QuadratureConfig {
            max_subdivisions: 3,
            ..Default::default()
        };
        let err = adaptive(|x| x.powf(-0.9), &[0.0, 1.0], &cfg).unwrap_err();
        assert!(matches!(err, Error::Convergence { .. }));
    }
}
