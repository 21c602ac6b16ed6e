//! Fixed composite rules for `∫_1^∞ K(σ) h(σ) dσ` with kernel values cached at
//! the nodes, so that families of integrands (a sweep in γ, say) cost only
//! the arithmetic of `h`.
//!
//! Integrands are passed in the log variable `x = ln σ` together with a
//! `shift`: the closure returns `h(e^x) e^{shift}`. Far from 1 the kernel is
//! factored as `K(σ) σ = F(x) e^{(1 - N - e) x}` and the exponential part is
//! handed to the closure as the shift, which keeps large powers of σ from
//! overflowing.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Result;
use crate::kernel::{Kernel, KernelTable};
use crate::quad::Rule;

/// Dyadic levels toward `σ = 1` before the endpoint substitution.
const NEAR_LEVELS: usize = 40;

pub(crate) struct HalfLine {
    table: Arc<KernelTable>,
    /// `(x, w K(σ))` for nodes in `(1, L]`.
    near: Vec<(f64, f64)>,
    log_cut: f64,
    n: usize,
}

type Key = (u32, u64, u64, usize, u64);

impl HalfLine {
    /// Rule with `n` Gauss points per panel for integrands behaving like
    /// `(σ - 1)^{e_near}` at 1, switching to the far-field form at `cutoff`.
    pub fn get(kernel: Kernel, e_near: f64, n: usize, cutoff: f64) -> Result<Arc<HalfLine>> {
        static CACHE: OnceLock<Mutex<HashMap<Key, Arc<HalfLine>>>> = OnceLock::new();
        let cutoff = cutoff.max(4.0);
        let key = (
            kernel.dim(),
            kernel.excess().to_bits(),
            e_near.to_bits(),
            n,
            cutoff.to_bits(),
        );
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(h) = cache.lock().expect("rule cache poisoned").get(&key) {
            return Ok(h.clone());
        }
        let table = KernelTable::get(kernel)?;
        let mut near = Vec::new();
        for &(t, w) in &Rule::graded_unit(e_near, n, NEAR_LEVELS).points {
            near.push((t.ln_1p(), w * table.above(t)));
        }
        for &(s, w) in &Rule::geometric(2.0, cutoff, n).points {
            near.push((s.ln(), w * table.eval(s)));
        }
        let built = Arc::new(HalfLine {
            table,
            near,
            log_cut: cutoff.ln(),
            n,
        });
        let mut guard = cache.lock().expect("rule cache poisoned");
        Ok(guard.entry(key).or_insert(built).clone())
    }

    /// Exponent `1 - N - e` of the far-field factorisation.
    fn far_power(&self) -> f64 {
        1.0 - self.table.kernel().exponent()
    }

    /// `∫_1^∞ K(σ) h(σ) dσ`; `rate` is a lower bound for the exponential decay
    /// of `K(σ) h(σ) σ` in `x`. Returns the value and the node count.
    pub fn integrate(&self, rate: f64, h: impl Fn(f64, f64) -> f64) -> (f64, usize) {
        let near: f64 = self.near.iter().map(|&(x, wk)| wk * h(x, 0.0)).sum();
        let (far, m) = self.far(self.log_cut, rate, &h);
        (near + far, self.near.len() + m)
    }

    /// Far-field part `∫_{e^{x0}}^∞ K h dσ` with `e^{x0} ≥ 2`.
    pub fn far(&self, x0: f64, rate: f64, h: &impl Fn(f64, f64) -> f64) -> (f64, usize) {
        let rule = Rule::exponential_tail(x0, rate, self.n);
        let c = self.far_power();
        let v = rule
            .points
            .iter()
            .map(|&(x, w)| w * self.table.far_factor(x) * h(x, c * x))
            .sum();
        (v, rule.len())
    }
}

/// `e^{a x + shift}`.
#[inline]
pub(crate) fn pw(a: f64, x: f64, shift: f64) -> f64 {
    (a * x + shift).exp()
}

/// `e^{a x + shift} - e^{b x + shift}` without cancellation near `x = 0`.
#[inline]
pub(crate) fn pw_diff(a: f64, b: f64, x: f64, shift: f64) -> f64 {
    let d = (a - b) * x;
    if d.abs() > 1.0 {
        return (a * x + shift).exp() - (b * x + shift).exp();
    }
    (b * x + shift).exp() * d.exp_m1()
}

/// `|1 - e^{-g x}|^q`, i.e. `|1 - σ^{-g}|^q`, with `0^0 = 1`.
#[inline]
pub(crate) fn one_minus_pow(g: f64, x: f64, q: f64) -> f64 {
    (-g * x).exp_m1().abs().powf(q)
}
