//! The integer-indexed family of surfaces: admissibility of the pair (n, m),
//! the derived analytic constants, the conformal factor and its ODE, and the
//! fundamental domain with its gluing maps.

use crate::elliptic;
use crate::error::{Error, Result};

/// Largest supported family index.
pub const MAX_N: u64 = 1_000_000;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Returns the first violated admissibility clause, if any.
///
/// The clauses, in the order checked: 0 < m < n, gcd(n, m) = 1, n odd,
/// 2n + m divisible by 6.
pub fn admissibility_violation(n: u64, m: u64) -> Option<String> {
    if m == 0 || m >= n {
        return Some(format!("m = {m} outside 0 < m < n = {n}"));
    }
    let g = gcd(n, m);
    if g != 1 {
        return Some(format!("gcd(n,m) = {g} (need coprime integers)"));
    }
    if n % 2 == 0 {
        return Some(format!("n = {n} is even (need n odd)"));
    }
    if (2 * n + m) % 6 != 0 {
        return Some(format!("2n + m = {} is not divisible by 6", 2 * n + m));
    }
    None
}

/// Whether (n, m) indexes a surface in the family.
pub fn is_admissible(n: u64, m: u64) -> bool {
    admissibility_violation(n, m).is_none()
}

/// All admissible pairs with n <= max_n, ordered by (n, m).
pub fn enumerate_admissible(max_n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut n = 3;
    while n <= max_n {
        for m in 1..n {
            if is_admissible(n, m) {
                out.push((n, m));
            }
        }
        n += 2;
    }
    out
}

/// Analytic constants of one surface in the family.
///
/// All fields are determined by (n, m):
///   b^3 = n(n+m) / (2 m^2),
///   q^2 = (n-m)/n,           r^2 = n(n+2m) / (2 b^2 m^2),
///   p^2 = (n^2-m^2) / (n(n+2m))   (elliptic modulus p),
///   lam^2 = n/(2n+m),  mu^2 = (n+m)/(2n+m),  nu^2 = (n+m)/(n+2m),
/// with K, E the complete elliptic integrals at modulus p. The conformal
/// factor is periodic in x with period 2K/r, so the fundamental domain has
/// x-extent Lx = 4K/r and y-extent Ly = sqrt(2) m b pi / 3.
#[derive(Debug, Clone, PartialEq)]
pub struct KleinBottleParams {
    pub n: u64,
    pub m: u64,
    pub b: f64,
    pub b3: f64,
    pub q2: f64,
    pub r: f64,
    pub p: f64,
    pub lam2: f64,
    pub mu2: f64,
    pub nu2: f64,
    /// Complete elliptic integral K(p).
    pub kk: f64,
    /// Complete elliptic integral E(p).
    pub ee: f64,
    pub lx: f64,
    pub ly: f64,
}

/// Fundamental domain [0, Lx] x [0, Ly] together with its gluing maps. The
/// surface is the quotient of the plane by the glide (x, y) -> (-x, y + Ly)
/// and the translation (x, y) -> (x + Lx, y); applying the glide twice gives
/// the deck translation of the orientation double cover, a torus of y-period
/// 2 Ly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalDomain {
    pub lx: f64,
    pub ly: f64,
}

impl FundamentalDomain {
    pub fn apply_glide(&self, x: f64, y: f64) -> (f64, f64) {
        (-x, y + self.ly)
    }

    pub fn apply_x_translation(&self, x: f64, y: f64) -> (f64, f64) {
        (x + self.lx, y)
    }

    /// Deck translation of the torus double cover (the glide squared).
    pub fn apply_cover_translation(&self, x: f64, y: f64) -> (f64, f64) {
        (x, y + 2.0 * self.ly)
    }
}

impl KleinBottleParams {
    /// Derive all constants for an admissible pair.
    pub fn derive(n: u64, m: u64) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::InvalidArgument(format!(
                "n = {n} exceeds supported maximum {MAX_N}"
            )));
        }
        if let Some(reason) = admissibility_violation(n, m) {
            return Err(Error::NotAdmissible { n, m, reason });
        }
        let nf = n as f64;
        let mf = m as f64;
        let b3 = nf * (nf + mf) / (2.0 * mf * mf);
        let b = b3.cbrt();
        let q2 = (nf - mf) / nf;
        let r = (nf * (nf + 2.0 * mf) / (2.0 * b * b * mf * mf)).sqrt();
        let p = ((nf * nf - mf * mf) / (nf * (nf + 2.0 * mf))).sqrt();
        let lam2 = nf / (2.0 * nf + mf);
        let mu2 = (nf + mf) / (2.0 * nf + mf);
        let nu2 = (nf + mf) / (nf + 2.0 * mf);
        let ce = elliptic::complete_integrals(p)?;
        let lx = 4.0 * ce.k / r;
        let ly = std::f64::consts::SQRT_2 * mf * b * std::f64::consts::PI / 3.0;
        Ok(KleinBottleParams {
            n,
            m,
            b,
            b3,
            q2,
            r,
            p,
            lam2,
            mu2,
            nu2,
            kk: ce.k,
            ee: ce.e,
            lx,
            ly,
        })
    }

    pub fn fundamental_domain(&self) -> FundamentalDomain {
        FundamentalDomain {
            lx: self.lx,
            ly: self.ly,
        }
    }

    /// sn, cn, dn at the rescaled argument r x.
    pub fn elliptic_at(&self, x: f64) -> elliptic::EllipticEval {
        elliptic::jacobi(self.r * x, self.p).expect("modulus in range by construction")
    }

    /// Conformal factor e^{2u(x)} = b (1 - q^2 sn^2(r x)).
    pub fn conformal_factor(&self, x: f64) -> f64 {
        let ev = self.elliptic_at(x);
        self.b * (1.0 - self.q2 * ev.sn * ev.sn)
    }

    /// Smallest value of the conformal factor, b m / n, attained where
    /// sn(r x) = +-1.
    pub fn conformal_factor_min(&self) -> f64 {
        self.b * self.m as f64 / self.n as f64
    }

    /// Period of the conformal factor in x (half the domain extent Lx).
    pub fn conformal_period(&self) -> f64 {
        2.0 * self.kk / self.r
    }

    /// u'(x) for u = log(conformal factor) / 2, in closed form.
    pub fn u_prime(&self, x: f64) -> f64 {
        let ev = self.elliptic_at(x);
        let s2 = ev.sn * ev.sn;
        -self.r * self.q2 * ev.sn * ev.cn * ev.dn / (1.0 - self.q2 * s2)
    }

    /// Residual of the reduced minimal-surface equation
    /// u'' + e^{2u} - e^{-4u} at the point x, using closed-form derivatives.
    pub fn ode_residual(&self, x: f64) -> f64 {
        let ev = self.elliptic_at(x);
        let (s, c, d) = (ev.sn, ev.cn, ev.dn);
        let p2 = self.p * self.p;
        let denom = 1.0 - self.q2 * s * s;
        let core = (c * c * d * d - s * s * d * d - p2 * s * s * c * c) * denom
            + 2.0 * self.q2 * s * s * c * c * d * d;
        let upp = -self.r * self.r * self.q2 * core / (denom * denom);
        let w = self.b * denom;
        upp + w - 1.0 / (w * w)
    }
}
