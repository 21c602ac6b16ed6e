//! Sampling campaigns for the pointwise inequalities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::params::FracParams;
use crate::radial::{elementary_inequality_defect, picone_phi};

use super::VerificationReport;

/// Floating-point floor for the pointwise checks.
const POINTWISE_TOL: f64 = 1e-12;

/// Minimum of the Picone integrand `Φ` over `trials` random pairs with
/// `u ∈ (-1, 1)` and `w ∈ (0.05, 1)`.
pub fn verify_picone(trials: usize, params: &FracParams, seed: u64) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("picone", params, seed, POINTWISE_TOL);
    let mut worst = (f64::INFINITY, 0usize);
    for k in 0..trials {
        let u = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let w = (rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0));
        let phi = picone_phi(u, w, params.p())?;
        if phi < worst.0 {
            worst = (phi, k);
        }
    }
    report.record(worst.0, worst.0, 0.0);
    report.trials = trials;
    report.witness.insert("worst_trial".into(), worst.1 as f64);
    report.judge_lower();
    Ok(report)
}

/// Minimum of `|a - t|^p - (1 - t)^{p-1}(|a|^p - t)` over a fixed grid
/// `a ∈ [-5, 5]`, `t ∈ [0, 1]` and `trials` further random samples.
pub fn verify_elementary(trials: usize, params: &FracParams, seed: u64) -> Result<VerificationReport> {
    let p = params.p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("elementary", params, seed, POINTWISE_TOL);
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for i in 0..=200 {
        for j in 0..=50 {
            let a = -5.0 + i as f64 / 20.0;
            let t = j as f64 / 50.0;
            worst = worst.min(elementary_inequality_defect(a, t, p)?);
            count += 1;
        }
    }
    for _ in 0..trials {
        let a = rng.gen_range(-5.0..5.0);
        let t = rng.gen_range(0.0..=1.0);
        worst = worst.min(elementary_inequality_defect(a, t, p)?);
        count += 1;
    }
    report.record(worst, worst, 0.0);
    report.trials = count;
    report.judge_lower();
    Ok(report)
}
