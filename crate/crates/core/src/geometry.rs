//! The unit-sphere lift of the immersion and its pointwise geometry: seam
//! compatibility, horizontality, the induced metric, the Lagrangian
//! condition, minimality, and the special unitary test functions used by the
//! second-variation machinery.

use num_complex::Complex64 as C;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::KleinBottleParams;
use crate::grid::{laplace_residual, Grid2};

/// Point of C^3.
pub type C3 = [C; 3];

/// Hermitian product h(z, w) = sum z_k conj(w_k).
pub fn herm(z: &C3, w: &C3) -> C {
    z[0] * w[0].conj() + z[1] * w[1].conj() + z[2] * w[2].conj()
}

/// Symplectic pairing omega(v, w) = Re h(iv, w) = -Im h(v, w).
pub fn omega(v: &C3, w: &C3) -> f64 {
    -herm(v, w).im
}

/// Radial profile of the lift: (lam dn, mu cn, nu sn) at argument r x.
pub fn lift_radial(params: &KleinBottleParams, x: f64) -> [f64; 3] {
    let ev = params.elliptic_at(x);
    [
        params.lam2.sqrt() * ev.dn,
        params.mu2.sqrt() * ev.cn,
        params.nu2.sqrt() * ev.sn,
    ]
}

/// x-derivative of the radial profile.
pub fn lift_radial_dx(params: &KleinBottleParams, x: f64) -> [f64; 3] {
    let ev = params.elliptic_at(x);
    let p2 = params.p * params.p;
    let r = params.r;
    [
        -params.lam2.sqrt() * p2 * r * ev.sn * ev.cn,
        -params.mu2.sqrt() * r * ev.sn * ev.dn,
        params.nu2.sqrt() * r * ev.cn * ev.dn,
    ]
}

/// Angular frequencies of the three components in y.
pub fn y_freqs(params: &KleinBottleParams) -> [f64; 3] {
    let s2mb = std::f64::consts::SQRT_2 * params.m as f64 * params.b;
    let nf = params.n as f64;
    let mf = params.m as f64;
    [
        (nf + mf) / s2mb,
        -nf / s2mb,
        -1.0 / (std::f64::consts::SQRT_2 * params.b),
    ]
}

/// The unit-sphere lift of the immersion at (x, y).
pub fn lift(params: &KleinBottleParams, x: f64, y: f64) -> C3 {
    let rho = lift_radial(params, x);
    let a = y_freqs(params);
    [
        rho[0] * C::cis(a[0] * y),
        rho[1] * C::cis(a[1] * y),
        rho[2] * C::cis(a[2] * y),
    ]
}

/// Analytic partial derivative of the lift in x.
pub fn lift_dx(params: &KleinBottleParams, x: f64, y: f64) -> C3 {
    let drho = lift_radial_dx(params, x);
    let a = y_freqs(params);
    [
        drho[0] * C::cis(a[0] * y),
        drho[1] * C::cis(a[1] * y),
        drho[2] * C::cis(a[2] * y),
    ]
}

/// Analytic partial derivative of the lift in y.
pub fn lift_dy(params: &KleinBottleParams, x: f64, y: f64) -> C3 {
    let z = lift(params, x, y);
    let a = y_freqs(params);
    [
        C::new(0.0, a[0]) * z[0],
        C::new(0.0, a[1]) * z[1],
        C::new(0.0, a[2]) * z[2],
    ]
}

/// |h(z, z) - 1| at (x, y).
pub fn unit_norm_residual(params: &KleinBottleParams, x: f64, y: f64) -> f64 {
    let z = lift(params, x, y);
    (herm(&z, &z) - C::new(1.0, 0.0)).norm()
}

/// Moduli of h(z_x, z) and h(z_y, z); both vanish for a horizontal lift.
pub fn horizontality_residual(params: &KleinBottleParams, x: f64, y: f64) -> (f64, f64) {
    let z = lift(params, x, y);
    let zx = lift_dx(params, x, y);
    let zy = lift_dy(params, x, y);
    (herm(&zx, &z).norm(), herm(&zy, &z).norm())
}

/// |omega(z_x, z_y)|; vanishes exactly when the immersion is Lagrangian.
pub fn lagrangian_residual(params: &KleinBottleParams, x: f64, y: f64) -> f64 {
    let zx = lift_dx(params, x, y);
    let zy = lift_dy(params, x, y);
    omega(&zx, &zy).abs()
}

/// First fundamental form [[g11, g12], [g12, g22]] of the lift at (x, y).
pub fn pullback_metric(params: &KleinBottleParams, x: f64, y: f64) -> [[f64; 2]; 2] {
    let zx = lift_dx(params, x, y);
    let zy = lift_dy(params, x, y);
    let g11 = herm(&zx, &zx).re;
    let g12 = herm(&zx, &zy).re;
    let g22 = herm(&zy, &zy).re;
    [[g11, g12], [g12, g22]]
}

/// Phase factor relating the lift across the glide seam:
/// z(-x, y + Ly) = c z(x, y) with c = exp(i pi (n + m) / 3).
pub fn glide_phase(params: &KleinBottleParams) -> C {
    C::cis(std::f64::consts::PI * (params.n + params.m) as f64 / 3.0)
}

/// Phase factor across the full torus period:
/// z(x, y + 2 Ly) = c^2 z(x, y).
pub fn cover_phase(params: &KleinBottleParams) -> C {
    let c = glide_phase(params);
    c * c
}

/// Seam residuals of projective well-posedness at (x, y): the glide seam
/// |z(-x, y + Ly) - c z(x, y)| and the x-period seam |z(x + Lx, y) - z(x, y)|.
pub fn projective_wellposedness(params: &KleinBottleParams, x: f64, y: f64) -> (f64, f64) {
    let z = lift(params, x, y);
    let glide = lift(params, -x, y + params.ly);
    let c = glide_phase(params);
    let glide_res = (0..3)
        .map(|k| (glide[k] - c * z[k]).norm())
        .fold(0.0f64, f64::max);
    let shifted = lift(params, x + params.lx, y);
    let period_res = (0..3)
        .map(|k| (shifted[k] - z[k]).norm())
        .fold(0.0f64, f64::max);
    (glide_res, period_res)
}

/// Max over a grid of the componentwise residual of the harmonic-map
/// equation w^{-1} (z_xx + z_yy) + 2 z = 0 for a separable sphere-valued map
/// z_k(x, y) = radial_k(x) exp(i freq_k y), discretized with the three-point
/// stencil on [0, lx) x [0, ly2).
///
/// The x direction is periodic for the map itself and wraps directly; the
/// map is generally only periodic in y up to a unit phase, so the y seam is
/// closed by evaluating the formula on ghost rows instead of wrapping.
pub fn sphere_map_laplace_residual(
    radial: impl Fn(f64) -> [f64; 3],
    freqs: [f64; 3],
    weight: impl Fn(f64) -> f64,
    lx: f64,
    ly2: f64,
    grid_n: usize,
) -> Result<f64> {
    if grid_n < 64 || grid_n % 2 != 0 {
        return Err(Error::GridTooCoarse(format!(
            "gridN = {grid_n}, need an even value >= 64"
        )));
    }
    let n = grid_n;
    let hx = lx / n as f64;
    let hy = ly2 / n as f64;
    let rho: Vec<[f64; 3]> = (0..n).map(|i| radial(i as f64 * hx)).collect();
    let w: Vec<f64> = (0..n).map(|i| weight(i as f64 * hx)).collect();
    // Rows -1 ..= n: ghost rows carry the true values across the y seam.
    let phase: Vec<[C; 3]> = (-1..=n as i64)
        .map(|j| {
            let y = j as f64 * hy;
            [
                C::cis(freqs[0] * y),
                C::cis(freqs[1] * y),
                C::cis(freqs[2] * y),
            ]
        })
        .collect();
    let ihx2 = 1.0 / (hx * hx);
    let ihy2 = 1.0 / (hy * hy);
    let worst = (0..n)
        .into_par_iter()
        .map(|ix| {
            let left = &rho[(ix + n - 1) % n];
            let right = &rho[(ix + 1) % n];
            let mid = &rho[ix];
            let iw = 1.0 / w[ix];
            let mut local = 0.0f64;
            for jy in 0..n {
                for k in 0..3 {
                    let ph = phase[jy + 1][k];
                    let zxx = (left[k] + right[k] - 2.0 * mid[k]) * ph * ihx2;
                    let zyy = mid[k] * (phase[jy][k] + phase[jy + 2][k] - 2.0 * ph) * ihy2;
                    let z = mid[k] * ph;
                    let res = (zxx + zyy) * iw + 2.0 * z;
                    local = local.max(res.norm());
                }
            }
            local
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// Minimality residual of the surface lift on an N x N grid of its double
/// cover: max |e^{-2u} (z_xx + z_yy) + 2 z| with analytic weight.
pub fn minimality_residual(params: &KleinBottleParams, grid_n: usize) -> Result<f64> {
    sphere_map_laplace_residual(
        |x| lift_radial(params, x),
        y_freqs(params),
        |x| params.conformal_factor(x),
        params.lx,
        2.0 * params.ly,
        grid_n,
    )
}

/// Minimality residuals at grid_n / 2 and grid_n and their ratio; the ratio
/// is near 4 for a second-order-converging residual.
pub fn minimality_convergence(
    params: &KleinBottleParams,
    grid_n: usize,
) -> Result<(f64, f64, f64)> {
    if grid_n < 128 {
        return Err(Error::GridTooCoarse(format!(
            "gridN = {grid_n}, convergence check needs gridN / 2 >= 64"
        )));
    }
    let coarse = minimality_residual(params, grid_n / 2)?;
    let fine = minimality_residual(params, grid_n)?;
    Ok((coarse, fine, coarse / fine))
}

/// Traceless anti-Hermitian 3 x 3 complex matrix: a generator of the special
/// unitary symmetry group acting on the ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct SU3Generator {
    m: [[C; 3]; 3],
}

impl SU3Generator {
    /// Validate and wrap a complex matrix.
    pub fn from_complex(m: [[C; 3]; 3]) -> Result<SU3Generator> {
        let scale = m
            .iter()
            .flatten()
            .fold(0.0f64, |acc, z| acc.max(z.norm()))
            .max(1.0);
        for j in 0..3 {
            for k in 0..3 {
                if (m[j][k] + m[k][j].conj()).norm() > 1e-12 * scale {
                    return Err(Error::InvalidGenerator(
                        "matrix is not anti-Hermitian".into(),
                    ));
                }
            }
        }
        let trace = m[0][0] + m[1][1] + m[2][2];
        if trace.norm() > 1e-12 * scale {
            return Err(Error::InvalidGenerator("matrix has nonzero trace".into()));
        }
        Ok(SU3Generator { m })
    }

    /// Build from the real 6 x 6 representation acting on
    /// (Re z1, Im z1, Re z2, Im z2, Re z3, Im z3). The matrix must be
    /// antisymmetric, commute with the complex structure J, and satisfy
    /// trace(A J) = 0; those three conditions characterize the generators.
    pub fn from_real(a: &[[f64; 6]; 6]) -> Result<SU3Generator> {
        let scale = a
            .iter()
            .flatten()
            .fold(0.0f64, |acc, &v| acc.max(v.abs()))
            .max(1.0);
        for i in 0..6 {
            for j in 0..6 {
                if (a[i][j] + a[j][i]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidGenerator(
                        "real matrix is not antisymmetric".into(),
                    ));
                }
            }
        }
        // J has 2x2 diagonal blocks [[0, -1], [1, 0]]; commutation forces the
        // block structure [[re, -im], [im, re]] per complex entry.
        for bj in 0..3 {
            for bk in 0..3 {
                let (r, c) = (2 * bj, 2 * bk);
                let comm1 = a[r][c] - a[r + 1][c + 1];
                let comm2 = a[r][c + 1] + a[r + 1][c];
                if comm1.abs() > 1e-12 * scale || comm2.abs() > 1e-12 * scale {
                    return Err(Error::InvalidGenerator(
                        "real matrix does not commute with the complex structure".into(),
                    ));
                }
            }
        }
        let tr_aj: f64 = (0..3)
            .map(|b| a[2 * b][2 * b + 1] - a[2 * b + 1][2 * b])
            .sum();
        if tr_aj.abs() > 1e-12 * scale {
            return Err(Error::InvalidGenerator(
                "trace pairing with the complex structure is nonzero".into(),
            ));
        }
        let mut m = [[C::new(0.0, 0.0); 3]; 3];
        for bj in 0..3 {
            for bk in 0..3 {
                m[bj][bk] = C::new(a[2 * bj][2 * bk], a[2 * bj + 1][2 * bk]);
            }
        }
        SU3Generator::from_complex(m)
    }

    /// Real 6 x 6 representation of the generator.
    pub fn to_real(&self) -> [[f64; 6]; 6] {
        let mut a = [[0.0; 6]; 6];
        for bj in 0..3 {
            for bk in 0..3 {
                let z = self.m[bj][bk];
                a[2 * bj][2 * bk] = z.re;
                a[2 * bj][2 * bk + 1] = -z.im;
                a[2 * bj + 1][2 * bk] = z.im;
                a[2 * bj + 1][2 * bk + 1] = z.re;
            }
        }
        a
    }

    /// An orthogonal basis of the eight-dimensional generator space.
    pub fn basis() -> [SU3Generator; 8] {
        let i = C::new(0.0, 1.0);
        let o = C::new(0.0, 0.0);
        let one = C::new(1.0, 0.0);
        let s3 = C::new(1.0 / 3.0f64.sqrt(), 0.0);
        let mats: [[[C; 3]; 3]; 8] = [
            [[o, i, o], [i, o, o], [o, o, o]],
            [[o, one, o], [-one, o, o], [o, o, o]],
            [[i, o, o], [o, -i, o], [o, o, o]],
            [[o, o, i], [o, o, o], [i, o, o]],
            [[o, o, one], [o, o, o], [-one, o, o]],
            [[o, o, o], [o, o, i], [o, i, o]],
            [[o, o, o], [o, o, one], [o, -one, o]],
            [[i * s3, o, o], [o, i * s3, o], [o, o, -2.0 * i * s3]],
        ];
        mats.map(|m| SU3Generator::from_complex(m).expect("basis matrices are generators"))
    }

    /// Matrix action on a vector.
    pub fn apply(&self, z: &C3) -> C3 {
        let mut out = [C::new(0.0, 0.0); 3];
        for (j, out_j) in out.iter_mut().enumerate() {
            *out_j = self.m[j][0] * z[0] + self.m[j][1] * z[1] + self.m[j][2] * z[2];
        }
        out
    }

    /// Ambient test function F(z) = Im h(M z, z).
    pub fn test_function(&self, z: &C3) -> f64 {
        herm(&self.apply(z), z).im
    }
}

/// Test function of a generator restricted to the surface.
pub fn su3_test_function(gen: &SU3Generator, params: &KleinBottleParams, x: f64, y: f64) -> f64 {
    gen.test_function(&lift(params, x, y))
}

/// Sample the restricted test function of a generator on the double cover
/// and return the relative residual of the eigenvalue equation
/// e^{-2u} (f_xx + f_yy) + 6 f = 0 (the field descends, so both directions
/// wrap periodically).
pub fn su3_laplace_residual(
    gen: &SU3Generator,
    params: &KleinBottleParams,
    grid_n: usize,
) -> Result<f64> {
    if grid_n < 64 || grid_n % 2 != 0 {
        return Err(Error::GridTooCoarse(format!(
            "gridN = {grid_n}, need an even value >= 64"
        )));
    }
    let grid = sample_su3_grid(gen, params, grid_n);
    let hx = params.lx / grid_n as f64;
    let weights: Vec<f64> = (0..grid_n)
        .map(|ix| params.conformal_factor(ix as f64 * hx))
        .collect();
    Ok(laplace_residual(&grid, &weights, 6.0))
}

fn sample_su3_grid(gen: &SU3Generator, params: &KleinBottleParams, grid_n: usize) -> Grid2 {
    let n = grid_n;
    let hx = params.lx / n as f64;
    let hy = 2.0 * params.ly / n as f64;
    let a = y_freqs(params);
    let data: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|ix| {
            let rho = lift_radial(params, ix as f64 * hx);
            (0..n).map(move |iy| {
                let y = iy as f64 * hy;
                let z = [
                    rho[0] * C::cis(a[0] * y),
                    rho[1] * C::cis(a[1] * y),
                    rho[2] * C::cis(a[2] * y),
                ];
                gen.test_function(&z)
            })
        })
        .collect();
    Grid2 {
        nx: n,
        ny: n,
        lx: params.lx,
        ly2: 2.0 * params.ly,
        data,
    }
}

/// Eigenvalues (ascending) of the 8 x 8 Gram matrix of the restricted test
/// functions in the surface area measure. The kernel of the restriction is
/// the isotropy direction, so exactly one eigenvalue is zero.
pub fn su3_gram_eigenvalues(params: &KleinBottleParams, grid_n: usize) -> Result<[f64; 8]> {
    if grid_n < 64 {
        return Err(Error::GridTooCoarse(format!(
            "gridN = {grid_n}, need >= 64"
        )));
    }
    let basis = SU3Generator::basis();
    let n = grid_n;
    let hx = params.lx / n as f64;
    let hy = 2.0 * params.ly / n as f64;
    let a = y_freqs(params);
    let gram = (0..n)
        .into_par_iter()
        .map(|ix| {
            let x = ix as f64 * hx;
            let rho = lift_radial(params, x);
            let w = params.conformal_factor(x);
            let mut local = [0.0f64; 64];
            let mut f = [0.0f64; 8];
            for iy in 0..n {
                let y = iy as f64 * hy;
                let z = [
                    rho[0] * C::cis(a[0] * y),
                    rho[1] * C::cis(a[1] * y),
                    rho[2] * C::cis(a[2] * y),
                ];
                for (k, gen) in basis.iter().enumerate() {
                    f[k] = gen.test_function(&z);
                }
                for j in 0..8 {
                    for k in j..8 {
                        local[j * 8 + k] += w * f[j] * f[k];
                    }
                }
            }
            local
        })
        .reduce(
            || [0.0f64; 64],
            |mut acc, local| {
                for (a, l) in acc.iter_mut().zip(local.iter()) {
                    *a += l;
                }
                acc
            },
        );
    let cell = hx * hy;
    let mut dense = vec![0.0f64; 64];
    for j in 0..8 {
        for k in j..8 {
            let v = gram[j * 8 + k] * cell;
            dense[j * 8 + k] = v;
            dense[k * 8 + j] = v;
        }
    }
    let eigs = crate::linalg::jacobi_eigenvalues(&dense, 8)?;
    let mut out = [0.0f64; 8];
    out.copy_from_slice(&eigs);
    Ok(out)
}

/// Rank of the Gram matrix at relative threshold `rel_tol`.
pub fn su3_gram_rank(params: &KleinBottleParams, grid_n: usize, rel_tol: f64) -> Result<usize> {
    let eigs = su3_gram_eigenvalues(params, grid_n)?;
    let top = eigs[7].abs().max(1e-300);
    Ok(eigs.iter().filter(|&&e| e > rel_tol * top).count())
}

/// Project w to the horizontal space at unit z (orthogonal to z and iz) and
/// normalize.
pub fn horizontal_unit(w: &C3, z: &C3) -> C3 {
    let coeff = herm(w, z);
    let mut v = [C::new(0.0, 0.0); 3];
    for k in 0..3 {
        v[k] = w[k] - coeff * z[k];
    }
    let norm = herm(&v, &v).re.sqrt();
    assert!(norm > 1e-12, "projection collapsed; pick another direction");
    for vk in v.iter_mut() {
        *vk /= norm;
    }
    v
}

/// Gap between the finite-difference second derivative of F along the unit
/// geodesic t -> cos(t) z + sin(t) v and the closed form
/// -2 F(z) + 2 Im h(M v, v); v must be a horizontal unit vector at z.
pub fn hessian_identity_gap(gen: &SU3Generator, z: &C3, v: &C3, h: f64) -> f64 {
    let geo = |t: f64| {
        let (s, c) = t.sin_cos();
        let mut g = [C::new(0.0, 0.0); 3];
        for k in 0..3 {
            g[k] = c * z[k] + s * v[k];
        }
        gen.test_function(&g)
    };
    let fd = (geo(h) - 2.0 * geo(0.0) + geo(-h)) / (h * h);
    let exact = -2.0 * gen.test_function(z) + 2.0 * herm(&gen.apply(v), v).im;
    (fd - exact).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::KleinBottleParams;

    fn sample_points() -> Vec<(f64, f64)> {
        // Low-discrepancy points in the unit square, scaled by the caller.
        let phi = 0.6180339887498949;
        let psi = 0.4142135623730951;
        (1..40)
            .map(|i| ((i as f64 * phi) % 1.0, (i as f64 * psi) % 1.0))
            .collect()
    }

    #[test]
    fn lift_is_unit_norm() {
        let params = KleinBottleParams::derive(5, 2).unwrap();
        for (sx, sy) in sample_points() {
            let res = unit_norm_residual(&params, sx * params.lx, sy * 2.0 * params.ly);
            assert!(res < 1e-14);
        }
    }

    #[test]
    fn lift_is_horizontal_and_lagrangian() {
        let params = KleinBottleParams::derive(7, 4).unwrap();
        for (sx, sy) in sample_points() {
            let (x, y) = (sx * params.lx, sy * 2.0 * params.ly);
            let (hx, hy) = horizontality_residual(&params, x, y);
            assert!(hx < 1e-12 && hy < 1e-12, "({x}, {y}): {hx} {hy}");
            assert!(lagrangian_residual(&params, x, y) < 1e-12);
        }
    }

    #[test]
    fn metric_is_conformal_with_known_factor() {
        let params = KleinBottleParams::derive(5, 2).unwrap();
        for (sx, sy) in sample_points() {
            let (x, y) = (sx * params.lx, sy * 2.0 * params.ly);
            let g = pullback_metric(&params, x, y);
            let w = params.conformal_factor(x);
            assert!((g[0][0] - w).abs() < 1e-11 * w);
            assert!((g[1][1] - w).abs() < 1e-11 * w);
            assert!(g[0][1].abs() < 1e-12);
        }
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let params = KleinBottleParams::derive(5, 2).unwrap();
        let h = 1e-5;
        let (x, y) = (0.61, 1.37);
        let zx = lift_dx(&params, x, y);
        let zy = lift_dy(&params, x, y);
        let zp = lift(&params, x + h, y);
        let zm = lift(&params, x - h, y);
        let yp = lift(&params, x, y + h);
        let ym = lift(&params, x, y - h);
        for k in 0..3 {
            assert!(((zp[k] - zm[k]) / (2.0 * h) - zx[k]).norm() < 1e-8);
            assert!(((yp[k] - ym[k]) / (2.0 * h) - zy[k]).norm() < 1e-8);
        }
    }

    #[test]
    fn seams_close_projectively() {
        for (n, m) in [(5u64, 2u64), (7, 4), (11, 2)] {
            let params = KleinBottleParams::derive(n, m).unwrap();
            for (sx, sy) in sample_points() {
                let (x, y) = (sx * params.lx, sy * params.ly);
                let (glide, period) = projective_wellposedness(&params, x, y);
                assert!(glide < 1e-11, "({n},{m}) glide {glide}");
                assert!(period < 1e-11, "({n},{m}) period {period}");
            }
        }
    }

    #[test]
    fn wrong_congruence_breaks_the_glide_seam() {
        // Doctor the integer labels so the glide phase no longer matches the
        // analytic data; the seam detector must fire.
        let mut params = KleinBottleParams::derive(5, 2).unwrap();
        params.m = 3;
        let (glide, _) = projective_wellposedness(&params, 0.4, 0.9);
        assert!(
            glide > 0.1,
            "seam check failed to detect bad phase: {glide}"
        );
    }

    #[test]
    fn cover_period_twists_by_cube_root_of_unity() {
        let params = KleinBottleParams::derive(5, 2).unwrap();
        let z0 = lift(&params, 0.7, 0.5);
        let z2 = lift(&params, 0.7, 0.5 + 2.0 * params.ly);
        let c = cover_phase(&params);
        assert!((c - C::cis(2.0 * std::f64::consts::PI / 3.0)).norm() < 1e-13);
        for k in 0..3 {
            assert!((z2[k] - c * z0[k]).norm() < 1e-11);
        }
    }

    #[test]
    fn minimality_residual_is_second_order() {
        let params = KleinBottleParams::derive(5, 2).unwrap();
        let (coarse, fine, ratio) = minimality_convergence(&params, 128).unwrap();
        assert!(coarse < 6.5e-3 && fine < 1.6e-3, "{coarse} {fine}");
        assert!(ratio > 3.2 && ratio < 4.8, "ratio {ratio}");
    }

    #[test]
    fn grid_preconditions_are_enforced() {
        let params = KleinBottleParams::derive(5, 2).unwrap();
        assert!(matches!(
            minimality_residual(&params, 32),
            Err(Error::GridTooCoarse(_))
        ));
        assert!(matches!(
            minimality_residual(&params, 65),
            Err(Error::GridTooCoarse(_))
        ));
        assert!(matches!(
            minimality_convergence(&params, 64),
            Err(Error::GridTooCoarse(_))
        ));
    }

    #[test]
    fn generator_validation_names_the_violated_condition() {
        let mut a = [[0.0f64; 6]; 6];
        a[0][1] = 1.0;
        a[1][0] = 0.5;
        let err = SU3Generator::from_real(&a).unwrap_err();
        assert!(err.to_string().contains("antisymmetric"));

        // Antisymmetric but swaps the complex planes incompatibly.
        let mut b = [[0.0f64; 6]; 6];
        b[0][2] = 1.0;
        b[2][0] = -1.0;
        let err = SU3Generator::from_real(&b).unwrap_err();
        assert!(err.to_string().contains("complex structure"));

        // Multiple of J itself: commutes, antisymmetric, but trace(AJ) != 0.
        let mut c = [[0.0f64; 6]; 6];
        for k in 0..3 {
            c[2 * k][2 * k + 1] = -1.0;
            c[2 * k + 1][2 * k] = 1.0;
        }
        let err = SU3Generator::from_real(&c).unwrap_err();
        assert!(err.to_string().contains("trace"));
    }

    #[test]
    fn real_representation_round_trips() {
        for gen in SU3Generator::basis() {
            let back = SU3Generator::from_real(&gen.to_real()).unwrap();
            for j in 0..3 {
                for k in 0..3 {
                    assert!((back.m[j][k] - gen.m[j][k]).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn test_functions_satisfy_eigenvalue_equation_at_second_order() {
        let params = KleinBottleParams::derive(5, 2).unwrap();
        let gen = &SU3Generator::basis()[7];
        let r1 = su3_laplace_residual(gen, &params, 64).unwrap();
        let r2 = su3_laplace_residual(gen, &params, 128).unwrap();
        assert!(r2 < 0.02, "residual {r2}");
        let ratio = r1 / r2;
        assert!(ratio > 3.2 && ratio < 4.8, "ratio {ratio}");
    }

    #[test]
    fn gram_matrix_has_rank_seven() {
        let params = KleinBottleParams::derive(5, 2).unwrap();
        let eigs = su3_gram_eigenvalues(&params, 128).unwrap();
        assert!(
            eigs[0].abs() < 1e-9 * eigs[7],
            "kernel eigenvalue {}",
            eigs[0]
        );
        assert!(eigs[1] > 1e-3 * eigs[7], "second eigenvalue {}", eigs[1]);
        assert_eq!(su3_gram_rank(&params, 128, 1e-6).unwrap(), 7);
    }

    #[test]
    fn hessian_identity_holds_to_second_order() {
        let params = KleinBottleParams::derive(5, 2).unwrap();
        let z = lift(&params, 0.83, 2.11);
        let seed = [C::new(0.3, -0.2), C::new(0.1, 0.9), C::new(-0.5, 0.4)];
        let v = horizontal_unit(&seed, &z);
        assert!(herm(&v, &z).norm() < 1e-14);
        for gen in SU3Generator::basis() {
            let gap = hessian_identity_gap(&gen, &z, &v, 1e-3);
            assert!(gap < 1e-5, "gap {gap}");
        }
    }
}
