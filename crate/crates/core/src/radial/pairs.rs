//! Quadrature of radial double integrals `∫∫_{a<b} F(a, b) da db` whose
//! density carries the kernel factor `K(a/b)` and is weakly singular on the
//! diagonal `a = b`.
//!
//! The half-line is cut into panels: the profile's linear pieces (with
//! dyadic refinement toward the origin and a ratio cap of 2), followed by
//! dyadic panels beyond the support. Pairs of panels are integrated by
//! Duffy rules on the diagonal and at shared corners and by tensor
//! Gauss-Legendre rules elsewhere, with the order chosen from the
//! separation-to-size ratio. Everything is invariant under dilation.

use std::sync::Arc;

use crate::kernel::KernelTable;
use crate::quad::{gauss_legendre, GaussLegendre};

use super::profile::RadialProfile;

/// Node data precomputed once per quadrature node.
pub(crate) type NodeData = [f64; 6];

pub(crate) trait PairIntegrand {
    fn node(&self, r: f64, u: f64) -> NodeData;
    /// Density at `a < b` with gap `b - a` and `k = K(a/b)`.
    fn pair(&self, a: &NodeData, b: &NodeData, gap: f64, k: f64) -> f64;
    /// Contribution of `b > big_l` (where `u(b) = 0`) for fixed `a = r`.
    fn tail(&self, r: f64, u: f64, big_l: f64) -> f64;
    /// Exponent `e` with density `~ gap^e` at the diagonal.
    fn diagonal_exponent(&self) -> f64;
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    ua: f64,
    ub: f64,
}

impl Panel {
    fn zero(&self) -> bool {
        self.ua == 0.0 && self.ub == 0.0
    }
}

/// Dyadic levels toward the origin.
const ORIGIN_LEVELS: usize = 48;
/// Dyadic panels beyond the support: the analytic tail starts at `R 2^10`.
const TAIL_DOUBLINGS: i32 = 10;
const ORDERS: [usize; 12] = [3, 4, 5, 6, 8, 10, 12, 14, 16, 20, 24, 32];

pub(crate) struct PairQuadrature {
    power: f64,
    panels: Vec<Panel>,
    /// Start of the analytic tail, absent for a domain restricted to a ball.
    tail_from: Option<f64>,
    table: Arc<KernelTable>,
}

struct Nodes {
    data: Vec<NodeData>,
    r: Vec<f64>,
    w: Vec<f64>,
}

impl PairQuadrature {
    pub fn new(profile: &RadialProfile, table: Arc<KernelTable>, outer: Option<f64>) -> Self {
        let radii = profile.radii();
        let values = profile.values();
        let mut panels = Vec::new();
        let push_graded = |panels: &mut Vec<Panel>, a: f64, b: f64, ua: f64, ub: f64| {
            // split [a, b] (a > 0) into pieces of ratio at most 2
            let lin = |r: f64| ua + (r - a) / (b - a) * (ub - ua);
            let pieces = ((b / a).log2().ceil() as usize).max(1);
            let q = (b / a).powf(1.0 / pieces as f64);
            let mut lo = a;
            for k in 0..pieces {
                let hi = if k + 1 == pieces { b } else { lo * q };
                panels.push(Panel { a: lo, b: hi, ua: lin(lo), ub: lin(hi) });
                lo = hi;
            }
        };
        // toward the origin: [0, c] carries the linear piece through (0, v0) or
        // the constant extension
        let (c, vc, v0, start) = if radii[0] == 0.0 {
            (radii[1], values[1], values[0], 1)
        } else {
            (radii[0], values[0], values[0], 0)
        };
        let lin0 = |r: f64| v0 + r / c * (vc - v0);
        let eps = c * 0.5f64.powi(ORIGIN_LEVELS as i32);
        panels.push(Panel { a: 0.0, b: eps, ua: v0, ub: lin0(eps) });
        let mut lo = eps;
        while lo < c {
            let hi = if 2.0 * lo >= c * (1.0 - 1e-12) { c } else { 2.0 * lo };
            panels.push(Panel { a: lo, b: hi, ua: lin0(lo), ub: lin0(hi) });
            lo = hi;
        }
        for k in start..radii.len() - 1 {
            push_graded(&mut panels, radii[k], radii[k + 1], values[k], values[k + 1]);
        }
        let support = profile.support_radius();
        let (end, tail_from) = match outer {
            Some(l) => (l, None),
            None => {
                let l = support * 2f64.powi(TAIL_DOUBLINGS);
                (l, Some(l))
            }
        };
        let mut lo = support;
        while lo < end {
            let hi = (2.0 * lo).min(end);
            panels.push(Panel { a: lo, b: hi, ua: 0.0, ub: 0.0 });
            lo = hi;
        }
        panels.retain(|p| p.a < end);
        if let Some(last) = panels.last_mut() {
            if last.b > end {
                let th = (end - last.a) / (last.b - last.a);
                last.ub = last.ua + th * (last.ub - last.ua);
                last.b = end;
            }
        }
        Self { power: profile.power(), panels, tail_from, table }
    }

    fn u(&self, p: &Panel, r: f64) -> f64 {
        let lin = p.ua + (r - p.a) / (p.b - p.a) * (p.ub - p.ua);
        if self.power == 0.0 || lin == 0.0 {
            lin
        } else {
            r.powf(self.power) * lin
        }
    }

    fn nodes(&self, f: &impl PairIntegrand, p: &Panel, gl: &GaussLegendre) -> Nodes {
        let mut out = Nodes { data: Vec::new(), r: Vec::new(), w: Vec::new() };
        for (r, w) in gl.on(p.a, p.b) {
            out.data.push(f.node(r, self.u(p, r)));
            out.r.push(r);
            out.w.push(w);
        }
        out
    }

    /// `∫∫_{a<b} F` at refinement `level` (0 or 1).
    pub fn integrate(&self, f: &impl PairIntegrand, level: usize) -> f64 {
        let digits = if level == 0 { 8.0 } else { 11.0 };
        let (nd, nt) = if level == 0 { (10, 8) } else { (16, 12) };
        let e = f.diagonal_exponent();
        // per-panel nodes for every tensor order
        let cache: Vec<Vec<Nodes>> = self
            .panels
            .iter()
            .map(|p| ORDERS.iter().map(|&n| self.nodes(f, p, &gauss_legendre(n))).collect())
            .collect();
        let mut total = 0.0;
        for (i, pi) in self.panels.iter().enumerate() {
            for (j, pj) in self.panels.iter().enumerate().skip(i) {
                if pi.zero() && pj.zero() {
                    continue;
                }
                total += if i == j {
                    self.diagonal(f, pi, e, nd)
                } else if pi.b == pj.a {
                    self.corner(f, pi, pj, e, nd)
                } else {
                    let size = (pi.b - pi.a).max(pj.b - pj.a);
                    let q = (pj.a - pi.b) / size;
                    let d = 1.0 + 2.0 * q;
                    let rho = d + (d * d - 1.0).sqrt();
                    let need = (digits * std::f64::consts::LN_10 / (2.0 * rho.ln())).ceil() as usize;
                    let k = ORDERS.iter().position(|&n| n >= need).unwrap_or(ORDERS.len() - 1);
                    self.tensor(f, &cache[i][k], &cache[j][k])
                };
            }
        }
        if let Some(big_l) = self.tail_from {
            let gl = gauss_legendre(nt);
            for p in self.panels.iter().filter(|p| !p.zero()) {
                for (r, w) in gl.on(p.a, p.b) {
                    total += w * f.tail(r, self.u(p, r), big_l);
                }
            }
        }
        total
    }

    fn tensor(&self, f: &impl PairIntegrand, ni: &Nodes, nj: &Nodes) -> f64 {
        let mut s = 0.0;
        for (k, da) in ni.data.iter().enumerate() {
            let a = ni.r[k];
            let mut row = 0.0;
            for (l, db) in nj.data.iter().enumerate() {
                let b = nj.r[l];
                let gap = b - a;
                row += nj.w[l] * f.pair(da, db, gap, self.table.inner(gap / b));
            }
            s += ni.w[k] * row;
        }
        s
    }

    /// Same panel: `a = p.a + H x`, `b = a + H (1 - x) y`, `y = v^{1/(e+1)}`.
    fn diagonal(&self, f: &impl PairIntegrand, p: &Panel, e: f64, n: usize) -> f64 {
        let gl = gauss_legendre(n);
        let h = p.b - p.a;
        let k = 1.0 / (e + 1.0);
        let mut s = 0.0;
        for (x, wx) in gl.on(0.0, 1.0) {
            let a = p.a + h * x;
            let da = f.node(a, self.u(p, a));
            let span = h * (1.0 - x);
            for (v, wv) in gl.on(0.0, 1.0) {
                let y = v.powf(k);
                let jac = k * v.powf(k - 1.0);
                let gap = span * y;
                let b = a + gap;
                let db = f.node(b, self.u(p, b));
                s += wx * wv * span * h * jac * f.pair(&da, &db, gap, self.table.inner(gap / b));
            }
        }
        s
    }

    /// Panels sharing the corner `c = pi.b = pj.a`: `a = c - h₁`, `b = c + h₂`,
    /// split along the rectangle's diagonal, radial variable graded.
    fn corner(&self, f: &impl PairIntegrand, pi: &Panel, pj: &Panel, e: f64, n: usize) -> f64 {
        let gl = gauss_legendre(n);
        let c = pi.b;
        let (ha, hb) = (pi.b - pi.a, pj.b - pj.a);
        let k = 1.0 / (e + 2.0);
        let mut s = 0.0;
        for (w_, ww) in gl.on(0.0, 1.0) {
            let t = w_.powf(k);
            let jac_t = k * w_.powf(k - 1.0) * t;
            for (v, wv) in gl.on(0.0, 1.0) {
                for (h1, h2) in [(ha * t, hb * t * v), (ha * t * v, hb * t)] {
                    let a = c - h1;
                    let b = c + h2;
                    let da = f.node(a, self.u(pi, a));
                    let db = f.node(b, self.u(pj, b));
                    let gap = h1 + h2;
                    s += ww * wv * ha * hb * jac_t * f.pair(&da, &db, gap, self.table.inner(gap / b));
                }
            }
        }
        s
    }
}
