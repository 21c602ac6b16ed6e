//! Random families of smooth radial bumps supported in the unit ball.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::radial::{geometric_grid, RadialProfile};

const BASE_POINTS: usize = 100;
const POINTS_PER_BUMP: usize = 32;

/// `exp(1 - 1/(1 - t²))` for `|t| < 1`, zero otherwise.
pub fn smooth_bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

#[derive(Debug, Clone, Copy)]
struct Bump {
    center: f64,
    width: f64,
    sign: f64,
}

fn sample(rng: &mut ChaCha8Rng) -> Result<RadialProfile> {
    let count = rng.gen_range(1..=3);
    let bumps: Vec<Bump> = (0..count)
        .map(|_| {
            let width = 10f64.powf(rng.gen_range(-3.0..0.0));
            let center = rng.gen_range(0.0..1.0) * (1.0 - width);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            Bump { center, width, sign }
        })
        .collect();
    let mut radii = vec![0.0];
    radii.extend(geometric_grid(1e-4, 1.0, BASE_POINTS));
    for b in &bumps {
        let lo = (b.center - b.width).max(0.0);
        let hi = b.center + b.width;
        let m = POINTS_PER_BUMP;
        radii.extend((0..=m).map(|k| lo + (hi - lo) * k as f64 / m as f64));
    }
    radii.retain(|&r| r <= 1.0);
    radii.sort_by(f64::total_cmp);
    radii.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1e-300));
    RadialProfile::from_fn(radii, |r| {
        bumps.iter().map(|b| b.sign * smooth_bump((r - b.center) / b.width)).sum()
    })
}

/// `size` sums of one to three smooth bumps with log-uniform widths in
/// `[10⁻³, 1)`, uniform centers and random signs, supported in the unit ball.
/// Identical seeds give identical families.
pub fn bump_family(size: usize, seed: u64) -> Result<Vec<RadialProfile>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let u = sample(&mut rng)?;
        if !u.is_zero() {
            out.push(u);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_supported_in_unit_ball() {
        let a = bump_family(5, 11).unwrap();
        let b = bump_family(5, 11).unwrap();
        assert_eq!(a, b);
        for u in &a {
            assert_eq!(u.support_radius(), 1.0);
            assert!(!u.is_zero());
        }
        assert_ne!(a, bump_family(5, 12).unwrap());
    }
}
