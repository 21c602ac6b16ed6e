//! Independent oracles: closed forms and Monte-Carlo estimates computed
//! without the library's quadrature.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use frac_hardy::radial::{weighted_lp_norm, weighted_seminorm, RadialProfile};
use frac_hardy::{
    angular_kernel, hardy_constant, kernel_tail_moment, sphere_area, FracParams, QuadratureConfig,
    Weight,
};

fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Sharp constant of `∬|u(x)-u(y)|²/|x-y|^{N+2s} ≥ C ∫|u|²/|x|^{2s}` from the
/// fractional-Laplacian normalisation and Herbst's operator inequality.
fn sharp_p2(n: u32, s: f64) -> f64 {
    let nf = n as f64;
    let abs_gamma_minus_s = gamma(1.0 - s) / s;
    2.0 * PI.powf(nf / 2.0) * abs_gamma_minus_s / gamma((nf + 2.0 * s) / 2.0)
        * (gamma((nf + 2.0 * s) / 4.0) / gamma((nf - 2.0 * s) / 4.0)).powi(2)
}

#[test]
fn sharp_constant_at_p2_matches_closed_form() {
    for (n, s) in [(1u32, 0.25), (1, 0.45), (2, 0.3), (3, 0.5), (3, 0.8), (4, 0.7), (5, 0.9)] {
        let p = FracParams::new(n, s, 2.0).unwrap();
        let got = hardy_constant(&Weight::unweighted(&p), &p, &QuadratureConfig::default())
            .unwrap()
            .value;
        let want = sharp_p2(n, s);
        assert!((got / want - 1.0).abs() < 1e-10, "N={n} s={s}: {got} vs {want}");
    }
}

#[test]
fn kernel_matches_n3_antiderivative_and_n1_sum() {
    let p3 = FracParams::new(3, 0.5, 2.0).unwrap();
    for sigma in [0.1, 0.5, 0.9, 0.999, 1.001, 1.5, 2.0, 7.0, 40.0] {
        // ∫_0^π sinθ (1 - 2σcosθ + σ²)^{-a} dθ with a = (3 + ps)/2 = 2
        let want = 2.0 * PI / (2.0 * sigma) * ((sigma - 1.0f64).abs().powi(-2) - (sigma + 1.0f64).powi(-2));
        let got = angular_kernel(sigma, &p3).unwrap();
        assert!((got / want - 1.0).abs() < 1e-9, "σ={sigma}: {got} vs {want}");
    }
    let p1 = FracParams::new(1, 0.4, 2.0).unwrap();
    let got = angular_kernel(2.0, &p1).unwrap();
    assert!((got - (1.0 + 3f64.powf(-1.8))).abs() < 1e-14);
}

#[test]
fn tail_moment_in_one_dimension() {
    // ∫_a^∞ (σ-1)^{-1-ps} + (σ+1)^{-1-ps} dσ = ((a-1)^{-ps} + (a+1)^{-ps})/ps
    let p = FracParams::new(1, 0.4, 2.0).unwrap();
    let ps = p.ps();
    for a in [2.0, 5.0, 1e4] {
        let want = ((a - 1.0f64).powf(-ps) + (a + 1.0f64).powf(-ps)) / ps;
        let got = kernel_tail_moment(a, 0.0, &p, &QuadratureConfig::default()).unwrap().value;
        assert!((got / want - 1.0).abs() < 1e-9, "a={a}: {got} vs {want}");
    }
}

#[test]
fn tent_norm_is_a_beta_function() {
    // ∫ (1-|x|)_+^p |x|^{-w} dx = |S^{N-1}| B(N - w, p + 1)
    let u = RadialProfile::tent(1.0).unwrap();
    for (n, pp, w) in [(3u32, 2.0, 1.0), (2, 3.5, 0.4), (4, 1.5, 2.5)] {
        let params = FracParams::new(n, 0.3, pp).unwrap();
        let nf = n as f64;
        let want = sphere_area(n) * gamma(nf - w) * gamma(pp + 1.0) / gamma(nf - w + pp + 1.0);
        let got = weighted_lp_norm(&u, w, pp, &params).unwrap().value;
        assert!((got / want - 1.0).abs() < 1e-9, "{got} vs {want}");
    }
}

fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let r2: f64 = v.iter().map(|x| x * x).sum();
        if r2 > 1e-6 && r2 <= 1.0 {
            let r = r2.sqrt();
            return [v[0] / r, v[1] / r, v[2] / r];
        }
    }
}

/// Monte-Carlo estimate of `∬ |u(x)-u(y)|² |x-y|^{-4} |x|^{-β}|y|^{-β}` for the
/// tent `u = (1 - |x|)_+` in three dimensions. `x` is uniform in the unit
/// ball and `h = y - x` has radial density `1/2` on `(0, 1)` and `ρ^{-2}/2`
/// beyond; pairs with both points outside the ball contribute nothing, and
/// `2 - 1[y ∈ B]` accounts for the symmetric half.
fn monte_carlo_tent(beta: f64, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tent = |r: f64| (1.0 - r).max(0.0);
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..samples {
        let rx = rng.gen::<f64>().cbrt();
        let dx = unit_vector(&mut rng);
        let x = [rx * dx[0], rx * dx[1], rx * dx[2]];
        let rho = if rng.gen_bool(0.5) { rng.gen::<f64>() } else { 1.0 / (1.0 - rng.gen::<f64>()) };
        let dh = unit_vector(&mut rng);
        let y = [x[0] + rho * dh[0], x[1] + rho * dh[1], x[2] + rho * dh[2]];
        let ry = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        let diff = tent(rx) - tent(ry);
        let f = diff * diff / rho.powi(4) * rx.powf(-beta) * ry.powf(-beta);
        let mult = if ry < 1.0 { 1.0 } else { 2.0 };
        let q = if rho < 1.0 { 0.5 } else { 0.5 / (rho * rho) };
        let density = 3.0 / (4.0 * PI) * q / (4.0 * PI * rho * rho);
        let v = mult * f / density;
        sum += v;
        sum2 += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    (mean, ((sum2 / n - mean * mean) / n).sqrt())
}

#[test]
fn tent_seminorm_against_monte_carlo() {
    let params = FracParams::new(3, 0.5, 2.0).unwrap();
    let u = RadialProfile::tent(1.0).unwrap();
    for (beta, seed) in [(0.0, 1u64), (0.3, 2)] {
        let (mc, se) = monte_carlo_tent(beta, 10_000_000, seed);
        let got = weighted_seminorm(&u, beta, 0.5, &params).unwrap().value;
        assert!((got - mc).abs() < 3.0 * se, "β={beta}: {got} vs {mc} ± {se}");
        assert!(se < 0.01 * mc);
    }
}
