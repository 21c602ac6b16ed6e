//! Problem configuration: the triple (N, s, p), the Hardy weight and
//! quadrature budgets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The admissible triple `(N, s, p)` with `ps < N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracParams {
    n: u32,
    s: f64,
    p: f64,
}

impl FracParams {
    pub fn new(n: u32, s: f64, p: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain(format!("dimension N = {n} must be at least 1")));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::domain(format!("s = {s} must lie in (0, 1)")));
        }
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::domain(format!("p = {p} must exceed 1")));
        }
        if p * s >= n as f64 {
            return Err(Error::domain(format!(
                "ps = {} must be smaller than N = {n}",
                p * s
            )));
        }
        Ok(Self { n, s, p })
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    /// `N` as a float.
    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn ps(&self) -> f64 {
        self.p * self.s
    }

    /// Fractional Sobolev exponent `pN/(N - ps)`.
    pub fn p_star(&self) -> f64 {
        self.p * self.nf() / (self.nf() - self.ps())
    }

    /// Exponent of the unweighted ground state, `(N - ps)/p`.
    pub fn ground_state_exponent(&self) -> f64 {
        (self.nf() - self.ps()) / self.p
    }
}

/// Hardy weight `|x|^{-β}|y|^{-β}` together with the derived exponent range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    pub beta: f64,
    /// Upper end `(N - ps - 2β)/(p - 1)` of the range where `Λ(γ) > 0`.
    pub gamma_max: f64,
    /// Maximiser of `γ ↦ Λ(γ)`, `(N - ps - 2β)/p`.
    pub gamma0: f64,
}

impl Weight {
    /// Admissible weights satisfy `-ps < β < (N - ps)/2`.
    pub fn new(beta: f64, params: &FracParams) -> Result<Self> {
        let ps = params.ps();
        let upper = (params.nf() - ps) / 2.0;
        if !(beta > -ps && beta < upper) {
            return Err(Error::domain(format!(
                "beta = {beta} must lie in ({}, {upper})",
                -ps
            )));
        }
        Ok(Self::unchecked(beta, params))
    }

    /// The weight `β = 0`.
    pub fn unweighted(params: &FracParams) -> Self {
        Self::unchecked(0.0, params)
    }

    pub(crate) fn unchecked(beta: f64, params: &FracParams) -> Self {
        let gap = params.nf() - params.ps() - 2.0 * beta;
        Self {
            beta,
            gamma_max: gap / (params.p() - 1.0),
            gamma0: gap / params.p(),
        }
    }
}

/// Budget and tolerances for the quadrature routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Beyond this ratio the kernel is replaced by its far-field expansion.
    pub tail_cutoff: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            tail_cutoff: 1e3,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.tail_cutoff > 1.0) {
            return Err(Error::domain(
                "quadrature config needs rel_tol > 0, abs_tol > 0 and tail_cutoff > 1",
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions must be positive"));
        }
        Ok(())
    }
}

/// A computed constant with a practical error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantResult {
    pub value: f64,
    /// Difference between two refinement levels, not a rigorous bound.
    pub abs_error: f64,
    /// Number of integrand evaluations consumed.
    pub evaluations: usize,
}

impl ConstantResult {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            abs_error: 0.0,
            evaluations: 0,
        }
    }

    pub(crate) fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            abs_error: self.abs_error * factor.abs(),
            evaluations: self.evaluations,
        }
    }

    pub fn rel_error(&self) -> f64 {
        if self.value == 0.0 {
            self.abs_error
        } else {
            self.abs_error / self.value.abs()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inadmissible_triples() {
        assert!(FracParams::new(0, 0.5, 2.0).is_err());
        assert!(FracParams::new(3, 0.0, 2.0).is_err());
        assert!(FracParams::new(3, 1.0, 2.0).is_err());
        assert!(FracParams::new(3, 0.5, 1.0).is_err());
        assert!(FracParams::new(1, 0.5, 2.0).is_err());
        assert!(FracParams::new(3, 0.5, 2.0).is_ok());
    }

    #[test]
    fn weight_bounds() {
        let params = FracParams::new(3, 0.5, 2.0).unwrap();
        assert!(Weight::new(-1.0, &params).is_err());
        assert!(Weight::new(1.0, &params).is_err());
        let w = Weight::new(0.0, &params).unwrap();
        assert_eq!(w.gamma0, 1.0);
        assert_eq!(w.gamma_max, 2.0);
        let w = Weight::new(0.999, &params).unwrap();
        assert!(w.gamma0 > 0.0 && w.gamma0 < w.gamma_max);
    }
}
