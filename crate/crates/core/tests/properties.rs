//! Randomized invariant checks for the elliptic kernel, the parameter
//! family, and the deterministic JSON writer.

use lagspec_core::elliptic::{complete_integrals, jacobi, jacobi_epsilon};
use lagspec_core::family::{enumerate_admissible, is_admissible, KleinBottleParams};
use lagspec_core::json::Json;
use proptest::prelude::*;

proptest! {
    #[test]
    fn sn_cn_dn_satisfy_pythagorean_identities(
        p2 in 0.0f64..0.99,
        t in -3.0f64..3.0,
    ) {
        let p = p2.sqrt();
        let quarter = complete_integrals(p).unwrap().k;
        let x = t * 4.0 * quarter;
        let ev = jacobi(x, p).unwrap();
        prop_assert!((ev.sn * ev.sn + ev.cn * ev.cn - 1.0).abs() < 1e-12);
        prop_assert!((ev.dn * ev.dn + p2 * ev.sn * ev.sn - 1.0).abs() < 1e-12);
        prop_assert!(ev.sn.abs() <= 1.0 + 1e-14);
        prop_assert!(ev.cn.abs() <= 1.0 + 1e-14);
        prop_assert!(ev.dn <= 1.0 + 1e-14);
        prop_assert!(ev.dn >= (1.0 - p2).sqrt() - 1e-12);
    }

    #[test]
    fn sn_cn_dn_have_period_and_parity(
        p2 in 0.0f64..0.99,
        t in -2.0f64..2.0,
    ) {
        let p = p2.sqrt();
        let quarter = complete_integrals(p).unwrap().k;
        let x = t * 4.0 * quarter;
        let ev = jacobi(x, p).unwrap();
        let shifted = jacobi(x + 4.0 * quarter, p).unwrap();
        prop_assert!((ev.sn - shifted.sn).abs() < 1e-9);
        prop_assert!((ev.cn - shifted.cn).abs() < 1e-9);
        prop_assert!((ev.dn - shifted.dn).abs() < 1e-9);
        let mirrored = jacobi(-x, p).unwrap();
        prop_assert!((ev.sn + mirrored.sn).abs() < 1e-12);
        prop_assert!((ev.cn - mirrored.cn).abs() < 1e-12);
        prop_assert!((ev.dn - mirrored.dn).abs() < 1e-12);
    }

    #[test]
    fn epsilon_is_quasi_periodic_and_odd(
        p2 in 0.0f64..0.95,
        t in -2.0f64..2.0,
    ) {
        let p = p2.sqrt();
        let ints = complete_integrals(p).unwrap();
        let x = t * 4.0 * ints.k;
        let base = jacobi_epsilon(x, p).unwrap();
        let shifted = jacobi_epsilon(x + 2.0 * ints.k, p).unwrap();
        prop_assert!((shifted - base - 2.0 * ints.e).abs() < 1e-10);
        let mirrored = jacobi_epsilon(-x, p).unwrap();
        prop_assert!((base + mirrored).abs() < 1e-10);
    }

    #[test]
    fn derived_constants_satisfy_closed_form_relations(index in 0usize..30) {
        let pairs = enumerate_admissible(199);
        let (n, m) = pairs[index % pairs.len()];
        let p = KleinBottleParams::derive(n, m).unwrap();
        let (nf, mf) = (n as f64, m as f64);
        prop_assert!((p.b3 - nf * (nf + mf) / (2.0 * mf * mf)).abs() < 1e-10 * p.b3);
        prop_assert!((p.q2 - (nf - mf) / nf).abs() < 1e-14);
        let r2 = nf * (nf + 2.0 * mf) / (2.0 * p.b * p.b * mf * mf);
        prop_assert!((p.r * p.r - r2).abs() < 1e-10 * r2);
        // The modulus ties the radial scale to the conformal profile.
        prop_assert!((p.r * p.r * p.p * p.p - p.b * p.q2).abs() < 1e-10);
        prop_assert!((p.lam2 + p.mu2 - 1.0).abs() < 1e-14);
        prop_assert!((p.nu2 - p.mu2 - p.lam2 * p.p * p.p).abs() < 1e-14);
    }

    #[test]
    fn admissible_pairs_satisfy_congruences(index in 0usize..30) {
        let pairs = enumerate_admissible(199);
        let (n, m) = pairs[index % pairs.len()];
        prop_assert!(is_admissible(n, m));
        prop_assert_eq!(n % 2, 1);
        prop_assert_eq!(m % 2, 0);
        prop_assert_eq!((2 * n + m) % 6, 0);
        // Mode integers of the explicit cutoff eigenfunctions.
        prop_assert_eq!(((2 * n + m) / 3) % 2, 0);
        prop_assert_eq!(((n + 2 * m) / 3) % 2, 1);
        prop_assert_eq!(((n - m) / 3) % 2, 1);
    }

    #[test]
    fn inadmissible_pairs_are_rejected(n in 1u64..60, m in 1u64..60) {
        prop_assume!(!is_admissible(n, m));
        prop_assert!(KleinBottleParams::derive(n, m).is_err());
    }

    #[test]
    fn json_rendering_ignores_insertion_order(seed in 0u64..1000) {
        let keys = ["alpha", "beta", "gamma", "delta", "epsilon"];
        let values: Vec<Json> = (0..keys.len())
            .map(|i| Json::Int((seed as i64) * 7 + i as i64))
            .collect();
        let forward: Vec<(&str, Json)> =
            keys.iter().map(|&k| k).zip(values.iter().cloned()).collect();
        let mut rotated = forward.clone();
        rotated.rotate_left((seed as usize) % keys.len());
        let a = Json::obj(forward).render();
        let b = Json::obj(rotated).render();
        prop_assert_eq!(&a, &b);
        // Rendering is a pure function of the value.
        let c = Json::obj(
            keys.iter().map(|&k| k).zip(values.into_iter()).collect::<Vec<_>>(),
        )
        .render();
        prop_assert_eq!(a, c);
    }
}
