//! Jacobi elliptic functions and complete elliptic integrals.
//!
//! Conventions: every function takes the modulus p (not the parameter p^2),
//! with 0 <= p < 1. sn, cn, dn satisfy
//!   sn^2 + cn^2 = 1,          dn^2 + p^2 sn^2 = 1,
//!   sn' = cn dn,  cn' = -sn dn,  dn' = -p^2 sn cn,
//! sn and cn have period 4K(p) and antiperiod 2K(p), dn has period 2K(p).
//!
//! K and E come from the arithmetic-geometric mean; sn, cn, dn from the
//! descending Landen amplitude recursion after reducing the argument to one
//! period. Both are a handful of self-correcting iterations, accurate to a
//! few ulps across the supported modulus range.

use crate::error::{Error, Result};
use crate::quad;

/// Complete elliptic integrals of the first and second kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompleteIntegrals {
    pub k: f64,
    pub e: f64,
}

/// sn, cn, dn evaluated at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticEval {
    pub x: f64,
    pub p: f64,
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

fn check_modulus(p: f64) -> Result<()> {
    if p >= 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::ModulusRange(p))
    }
}

/// K(p) and E(p) from a shared arithmetic-geometric mean chain.
pub fn complete_integrals(p: f64) -> Result<CompleteIntegrals> {
    check_modulus(p)?;
    let mut a = 1.0f64;
    let mut b = (1.0 - p * p).sqrt();
    let mut c = p;
    // Running sum of 2^(n-1) c_n^2, starting with the n = 0 term.
    let mut sum = 0.5 * c * c;
    let mut pow = 0.5;
    let mut iter = 0;
    while c.abs() > f64::EPSILON * a {
        let an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
        iter += 1;
        assert!(iter < 32, "AGM failed to contract");
    }
    let k = std::f64::consts::FRAC_PI_2 / a;
    Ok(CompleteIntegrals {
        k,
        e: k * (1.0 - sum),
    })
}

/// Complete elliptic integral of the first kind.
pub fn complete_k(p: f64) -> Result<f64> {
    Ok(complete_integrals(p)?.k)
}

/// Complete elliptic integral of the second kind.
pub fn complete_e(p: f64) -> Result<f64> {
    Ok(complete_integrals(p)?.e)
}

/// Jacobi elliptic functions sn, cn, dn at argument x, modulus p.
pub fn jacobi(x: f64, p: f64) -> Result<EllipticEval> {
    check_modulus(p)?;
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "elliptic argument must be finite, got {x}"
        )));
    }
    if p == 0.0 {
        return Ok(EllipticEval {
            x,
            p,
            sn: x.sin(),
            cn: x.cos(),
            dn: 1.0,
        });
    }

    // Reduce the argument to [-2K, 2K]; the amplitude recursion loses
    // accuracy for arguments many periods out.
    let k = complete_k(p)?;
    let period = 4.0 * k;
    let t = x - period * (x / period).round();

    // Ascending AGM chain, recording a_i and c_i.
    let mut avals = vec![1.0f64];
    let mut cvals = vec![p];
    let mut a = 1.0f64;
    let mut b = (1.0 - p * p).sqrt();
    loop {
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        avals.push(a);
        cvals.push(c);
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        assert!(avals.len() < 32, "AGM failed to contract");
    }

    // Backward amplitude recursion: phi_{i-1} = (phi_i + asin(c_i sin phi_i / a_i)) / 2.
    let levels = avals.len() - 1;
    let mut phi = (1u64 << levels) as f64 * a * t;
    for i in (1..=levels).rev() {
        let s = (cvals[i] * phi.sin() / avals[i]).clamp(-1.0, 1.0);
        phi = 0.5 * (phi + s.asin());
    }

    let sn = phi.sin();
    let cn = phi.cos();
    let dn = (1.0 - p * p * sn * sn).sqrt();
    Ok(EllipticEval { x, p, sn, cn, dn })
}

/// Jacobi epsilon function: the integral of dn^2 from 0 to u.
///
/// Quasi-periodic rather than periodic: eps(u + 2K) = eps(u) + 2E. The
/// argument is reduced by that rule and the remainder integrated by
/// Gauss-Legendre panels over less than one period of dn^2.
pub fn jacobi_epsilon(u: f64, p: f64) -> Result<f64> {
    check_modulus(p)?;
    if !u.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "elliptic argument must be finite, got {u}"
        )));
    }
    let ce = complete_integrals(p)?;
    let half_period = 2.0 * ce.k;
    let wraps = (u / half_period).floor();
    let t = u - half_period * wraps;
    let tail = quad::integrate_composite(
        |s| {
            let dn = jacobi(s, p).expect("validated modulus").dn;
            dn * dn
        },
        0.0,
        t,
        4,
    );
    Ok(2.0 * ce.e * wraps + tail)
}
