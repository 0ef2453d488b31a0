//! Gauss-Legendre quadrature.
//!
//! Nodes and weights are generated once by Newton iteration on the Legendre
//! polynomial and cached. A composite 32-point rule integrates the smooth
//! periodic integrands in this crate to machine precision with a handful of
//! panels.

use std::sync::OnceLock;

const GL_ORDER: usize = 32;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        // Chebyshev-based initial guess, refined by Newton on P_n.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-16 {
                break;
            }
        }
        rule.push((-z, 2.0 / ((1.0 - z * z) * pp * pp)));
    }
    rule.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    rule
}

fn gl32() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre_nodes(GL_ORDER))
}

/// 32-point Gauss-Legendre approximation of the integral of f over [a, b].
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for &(x, w) in gl32() {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Composite rule: [a, b] split into `panels` equal panels, 32 nodes each.
pub fn integrate_composite(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels >= 1);
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * h;
        acc += integrate(&f, lo, lo + h);
    }
    acc
}

/// Composite 2D tensor rule over [0,lx] x [0,ly].
pub fn integrate_2d(
    f: impl Fn(f64, f64) -> f64,
    lx: f64,
    ly: f64,
    panels_x: usize,
    panels_y: usize,
) -> f64 {
    integrate_composite(
        |x| integrate_composite(|y| f(x, y), 0.0, ly, panels_y),
        0.0,
        lx,
        panels_x,
    )
}
