//! Independent numerical routes for the core kernels.
//!
//! Every check here recomputes a library value through a different algorithm:
//! defining integrals instead of the arithmetic-geometric mean, root-finding
//! inversion instead of the amplitude recursion, and a dense cyclic
//! eigenproblem instead of the parity block decomposition.

use lagspec_core::elliptic::{complete_integrals, jacobi, jacobi_epsilon};
use lagspec_core::family::KleinBottleParams;
use lagspec_core::linalg::jacobi_eigenvalues;
use lagspec_core::spectral::{mode_frequency, periodic_sl_blocks};

/// Adaptive Simpson quadrature with an explicit error budget.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), fm)
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (left, flm) = simpson(f, a, fa, m, fm);
        let (right, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, flm, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, right, frm, 0.5 * tol, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (whole, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, fm, tol, 48)
}

/// Incomplete elliptic integral of the first kind via quadrature.
fn incomplete_first(phi: f64, p: f64) -> f64 {
    adaptive_simpson(
        &|t: f64| 1.0 / (1.0 - (p * t.sin()).powi(2)).sqrt(),
        0.0,
        phi,
        1e-14,
    )
}

/// Amplitude am(u) for u in [0, K] by bisection on the monotone integral.
fn amplitude_by_inversion(u: f64, p: f64) -> f64 {
    let mut lo = 0.0f64;
    let mut hi = std::f64::consts::FRAC_PI_2;
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if incomplete_first(mid, p) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

const P_SQUARES: [f64; 4] = [0.1, 7.0 / 15.0, 0.6, 0.9];

#[test]
fn complete_integrals_match_defining_quadrature() {
    for &p2 in &P_SQUARES {
        let p = p2.sqrt();
        let ints = complete_integrals(p).unwrap();
        let k_ref = adaptive_simpson(
            &|t: f64| 1.0 / (1.0 - p2 * t.sin() * t.sin()).sqrt(),
            0.0,
            std::f64::consts::FRAC_PI_2,
            1e-14,
        );
        let e_ref = adaptive_simpson(
            &|t: f64| (1.0 - p2 * t.sin() * t.sin()).sqrt(),
            0.0,
            std::f64::consts::FRAC_PI_2,
            1e-14,
        );
        assert!((ints.k - k_ref).abs() < 1e-12 * k_ref, "K at p2 = {p2}");
        assert!((ints.e - e_ref).abs() < 1e-12 * e_ref, "E at p2 = {p2}");
    }
}

#[test]
fn sn_matches_integral_inversion() {
    for &p2 in &P_SQUARES {
        let p = p2.sqrt();
        let k = complete_integrals(p).unwrap().k;
        for i in 1..=8 {
            let u = k * i as f64 / 8.0;
            let phi = amplitude_by_inversion(u, p);
            let ev = jacobi(u, p).unwrap();
            assert!(
                (ev.sn - phi.sin()).abs() < 5e-12,
                "sn({u}, p2 = {p2}): {} vs {}",
                ev.sn,
                phi.sin()
            );
            assert!(
                (ev.cn - phi.cos()).abs() < 5e-12,
                "cn({u}, p2 = {p2}): {} vs {}",
                ev.cn,
                phi.cos()
            );
        }
    }
}

#[test]
fn epsilon_matches_incomplete_second_kind() {
    // The integral of dn^2 from 0 to u equals the incomplete second-kind
    // integral evaluated at the amplitude of u.
    for &p2 in &P_SQUARES {
        let p = p2.sqrt();
        let k = complete_integrals(p).unwrap().k;
        for i in 1..=6 {
            let u = k * i as f64 / 6.0;
            let phi = amplitude_by_inversion(u, p);
            let e_ref = adaptive_simpson(
                &|t: f64| (1.0 - p2 * t.sin() * t.sin()).sqrt(),
                0.0,
                phi,
                1e-14,
            );
            let e = jacobi_epsilon(u, p).unwrap();
            assert!(
                (e - e_ref).abs() < 1e-11,
                "epsilon({u}, p2 = {p2}): {e} vs {e_ref}"
            );
        }
    }
}

/// Dense route for the periodic mode problem: assemble the full cyclic
/// operator, symmetrize with the weight, and diagonalize densely.
fn dense_cyclic_spectrum(weights: &[f64], period: f64, omega: f64) -> Vec<f64> {
    let n = weights.len();
    let h = period / n as f64;
    let inv_h2 = 1.0 / (h * h);
    let mut dense = vec![0.0f64; n * n];
    for i in 0..n {
        let next = (i + 1) % n;
        dense[i * n + i] = (2.0 * inv_h2 + omega * omega) / weights[i];
        let off = -inv_h2 / (weights[i] * weights[next]).sqrt();
        dense[i * n + next] = off;
        dense[next * n + i] = off;
    }
    jacobi_eigenvalues(&dense, n).unwrap()
}

#[test]
fn parity_blocks_reproduce_dense_cyclic_spectrum() {
    let n = 64;
    // Synthetic reflection-symmetric weight plus the conformal weight of an
    // actual surface.
    let synthetic: Vec<f64> = (0..n)
        .map(|i| 1.3 + 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
        .collect();
    let params = KleinBottleParams::derive(5, 2).unwrap();
    let h = params.lx / n as f64;
    let mut conformal: Vec<f64> = (0..n)
        .map(|i| params.conformal_factor(i as f64 * h))
        .collect();
    for i in 1..n / 2 {
        let avg = 0.5 * (conformal[i] + conformal[n - i]);
        conformal[i] = avg;
        conformal[n - i] = avg;
    }
    let cases = [
        (synthetic, 2.0 * std::f64::consts::PI, 0.0),
        (conformal.clone(), params.lx, 0.0),
        (conformal, params.lx, mode_frequency(&params, 2)),
    ];
    for (weights, period, omega) in cases {
        let mut dense = dense_cyclic_spectrum(&weights, period, omega);
        let mut blocks: Vec<f64> = periodic_sl_blocks(&weights, period, omega)
            .unwrap()
            .into_iter()
            .map(|(lambda, _)| lambda)
            .collect();
        dense.sort_by(f64::total_cmp);
        blocks.sort_by(f64::total_cmp);
        assert_eq!(dense.len(), blocks.len());
        let scale = dense.last().unwrap().abs();
        for (d, b) in dense.iter().zip(blocks.iter()) {
            assert!(
                (d - b).abs() < 1e-9 * scale,
                "dense {d} vs blocks {b} (omega = {omega})"
            );
        }
    }
}
