//! Laplace spectrum of the surfaces, Morse index bookkeeping, the seven
//! closed-form eigenfunctions at eigenvalue 6, the first-eigenvalue bound,
//! the area formula, a multiplicity bound checker, and the closed-form
//! benchmark surfaces.
//!
//! Separation of variables turns the Laplacian on the torus double cover
//! into a family of periodic Sturm-Liouville problems
//!   -phi'' + omega_j^2 phi = lambda e^{2u(x)} phi,   omega_j = pi j / Ly,
//! one per y-frequency j. The even weight splits each problem into exact
//! even and odd reflection blocks, both symmetric tridiagonal after a
//! diagonal congruence, so the whole discrete cyclic spectrum is recovered
//! from two tridiagonal solves per mode with no approximation at the split.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::KleinBottleParams;
use crate::grid::{laplace_residual, Grid2};
use crate::json::Json;
use crate::linalg::tridiag_eigenvalues;
use crate::quad;

/// Safety margin added to the cutoff when deciding which modes and
/// eigenvalues can still matter for counts at the cutoff itself.
pub const CUTOFF_MARGIN: f64 = 0.5;

/// Reflection parity of the x-factor of an eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum XParity {
    Even,
    Odd,
}

impl XParity {
    pub fn as_str(self) -> &'static str {
        match self {
            XParity::Even => "even",
            XParity::Odd => "odd",
        }
    }
}

/// Parity under the glide map; `Plus` eigenfunctions descend to the surface,
/// `Minus` ones live only on the orientation double cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TauParity {
    Plus,
    Minus,
}

impl TauParity {
    pub fn as_str(self) -> &'static str {
        match self {
            TauParity::Plus => "plus",
            TauParity::Minus => "minus",
        }
    }
}

/// One eigenvalue cluster of the double-cover spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralLine {
    pub lambda: f64,
    /// y-frequency index (Fourier mode index for the surfaces, spherical
    /// degree for the closed-form benchmarks).
    pub j: u32,
    pub x_parity: XParity,
    pub tau_parity: TauParity,
    pub mult: u32,
    /// Richardson error estimate; zero for closed-form spectra.
    pub error_bar: f64,
}

/// Which surface a spectrum belongs to.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceKind {
    KleinBottle { n: u64, m: u64 },
    Sphere,
    RealProjectivePlane,
    CliffordTorus,
}

impl SurfaceKind {
    pub fn orientable(&self) -> bool {
        matches!(self, SurfaceKind::Sphere | SurfaceKind::CliffordTorus)
    }

    pub fn euler_characteristic(&self) -> i64 {
        match self {
            SurfaceKind::KleinBottle { .. } => 0,
            SurfaceKind::Sphere => 2,
            SurfaceKind::RealProjectivePlane => 1,
            SurfaceKind::CliffordTorus => 0,
        }
    }

    /// First Betti number with real coefficients.
    pub fn betti1(&self) -> u32 {
        match self {
            SurfaceKind::KleinBottle { .. } => 1,
            SurfaceKind::Sphere => 0,
            SurfaceKind::RealProjectivePlane => 0,
            SurfaceKind::CliffordTorus => 2,
        }
    }

    fn json(&self) -> Json {
        match self {
            SurfaceKind::KleinBottle { n, m } => Json::obj(vec![
                ("type", Json::Str("kleinBottle".into())),
                ("n", Json::Int(*n as i64)),
                ("m", Json::Int(*m as i64)),
            ]),
            SurfaceKind::Sphere => Json::obj(vec![("type", Json::Str("sphere".into()))]),
            SurfaceKind::RealProjectivePlane => {
                Json::obj(vec![("type", Json::Str("realProjectivePlane".into()))])
            }
            SurfaceKind::CliffordTorus => {
                Json::obj(vec![("type", Json::Str("cliffordTorus".into()))])
            }
        }
    }
}

/// Spectrum of the orientation double cover (or of the benchmark surface
/// itself when it is orientable), with glide parity labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub surface: SurfaceKind,
    pub cutoff: f64,
    pub grid_n: usize,
    /// Largest error bar among the retained lines.
    pub tolerance: f64,
    pub lines: Vec<SpectralLine>,
}

impl Spectrum {
    pub fn to_json(&self) -> Json {
        let lines: Vec<Json> = self
            .lines
            .iter()
            .map(|l| {
                Json::obj(vec![
                    ("lambda", Json::Float(l.lambda)),
                    ("j", Json::Int(l.j as i64)),
                    ("xParity", Json::Str(l.x_parity.as_str().into())),
                    ("tauParity", Json::Str(l.tau_parity.as_str().into())),
                    ("mult", Json::Int(l.mult as i64)),
                    ("errorBar", Json::Float(l.error_bar)),
                ])
            })
            .collect();
        Json::obj(vec![
            ("surface", self.surface.json()),
            ("cutoff", Json::Float(self.cutoff)),
            ("gridN", Json::Int(self.grid_n as i64)),
            ("tolerance", Json::Float(self.tolerance)),
            ("lines", Json::Arr(lines)),
        ])
    }

    pub fn to_csv(&self) -> String {
        use crate::json::fmt_float;
        let mut out = String::from("lambda,j,xParity,tauParity,mult,errorBar\n");
        for l in &self.lines {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_float(l.lambda),
                l.j,
                l.x_parity.as_str(),
                l.tau_parity.as_str(),
                l.mult,
                fmt_float(l.error_bar)
            ));
        }
        out
    }
}

/// Index counts and related integers for one surface.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexReport {
    pub surface: SurfaceKind,
    pub beta1: u32,
    pub chi: i64,
    /// Eigenvalues in (0, 6) that descend to the surface, with multiplicity.
    pub ind0: u32,
    /// Eigenvalues in (0, 6) odd under the glide, with multiplicity.
    pub ind1: u32,
    /// Total index assembled from the counts and the topology.
    pub ind: u32,
    /// Multiplicity of eigenvalue 6 among descending eigenfunctions.
    pub mult_six: u32,
    /// All eigenvalues of the orientation cover in (0, 6).
    pub ind0_cover: u32,
    /// Index of the orientation cover assembled from its own counts.
    pub ind_cover: u32,
    pub grid_n: usize,
    pub tolerance: f64,
}

impl IndexReport {
    pub fn to_json(&self) -> Json {
        let mut pairs = vec![
            ("beta1", Json::Int(self.beta1 as i64)),
            ("chi", Json::Int(self.chi)),
            ("ind0", Json::Int(self.ind0 as i64)),
            ("ind1", Json::Int(self.ind1 as i64)),
            ("ind", Json::Int(self.ind as i64)),
            ("multSix", Json::Int(self.mult_six as i64)),
            ("ind0Cover", Json::Int(self.ind0_cover as i64)),
            ("indCover", Json::Int(self.ind_cover as i64)),
            ("gridN", Json::Int(self.grid_n as i64)),
            ("tolerance", Json::Float(self.tolerance)),
        ];
        if let SurfaceKind::KleinBottle { n, m } = self.surface {
            pairs.push(("n", Json::Int(n as i64)));
            pairs.push(("m", Json::Int(m as i64)));
        }
        pairs.push(("surface", self.surface.json()));
        Json::obj(pairs)
    }
}

/// y-frequency of Fourier mode j on the double cover: omega_j = pi j / Ly.
pub fn mode_frequency(params: &KleinBottleParams, j: u32) -> f64 {
    3.0 * j as f64 / (std::f64::consts::SQRT_2 * params.m as f64 * params.b)
}

/// Glide parity of the (j, x-parity) sector: the glide sends x to -x and
/// shifts y by Ly, multiplying the mode by (-1)^j and the x-factor by its
/// reflection sign.
pub fn sector_tau(j: u32, x_parity: XParity) -> TauParity {
    let sign_j = if j % 2 == 0 { 1 } else { -1 };
    let sign_x = match x_parity {
        XParity::Even => 1,
        XParity::Odd => -1,
    };
    if sign_j * sign_x > 0 {
        TauParity::Plus
    } else {
        TauParity::Minus
    }
}

fn check_grid(grid_n: usize) -> Result<()> {
    if grid_n < 64 || grid_n % 2 != 0 {
        return Err(Error::GridTooCoarse(format!(
            "gridN = {grid_n}, need an even value >= 64"
        )));
    }
    Ok(())
}

/// Eigenvalues of the periodic problem -phi'' + omega^2 phi = lambda w phi
/// on a uniform N-point grid over one period, split exactly into reflection
/// parity blocks. `weights` must be reflection symmetric: w[i] = w[N-i mod N].
///
/// Returns (lambda, parity) pairs, each block sorted ascending internally,
/// even block first.
pub fn periodic_sl_blocks(weights: &[f64], period: f64, omega: f64) -> Result<Vec<(f64, XParity)>> {
    let n = weights.len();
    check_grid(n)?;
    let wmax = weights.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    for i in 1..n {
        if (weights[i] - weights[n - i]).abs() > 1e-11 * wmax {
            return Err(Error::InvalidArgument(
                "weight is not reflection symmetric".into(),
            ));
        }
        if weights[i] <= 0.0 {
            return Err(Error::InvalidArgument("weight must be positive".into()));
        }
    }
    let h = period / n as f64;
    let ih2 = 1.0 / (h * h);
    let half = n / 2;

    // Even block on nodes 0..=N/2 with Neumann-style folds at both ends.
    // Fold multiplicities s = (1, 2, ..., 2, 1) symmetrize the operator; the
    // congruence by diag(sqrt(s_i w_i)) yields a plain symmetric tridiagonal
    // standard problem with the same eigenvalues.
    let s = |i: usize| if i == 0 || i == half { 1.0 } else { 2.0 };
    let mut diag = Vec::with_capacity(half + 1);
    let mut off = Vec::with_capacity(half);
    for i in 0..=half {
        diag.push((2.0 * ih2 + omega * omega) / weights[i]);
    }
    for i in 0..half {
        let denom = (s(i) * weights[i] * s(i + 1) * weights[i + 1]).sqrt();
        off.push(-2.0 * ih2 / denom);
    }
    let even = tridiag_eigenvalues(&diag, &off)?;

    // Odd block on interior nodes 1..=N/2-1 with Dirichlet folds.
    let mut diag_o = Vec::with_capacity(half - 1);
    let mut off_o = Vec::with_capacity(half.saturating_sub(2));
    for i in 1..half {
        diag_o.push((2.0 * ih2 + omega * omega) / weights[i]);
    }
    for i in 1..half - 1 {
        off_o.push(-ih2 / (weights[i] * weights[i + 1]).sqrt());
    }
    let odd = tridiag_eigenvalues(&diag_o, &off_o)?;

    let mut out: Vec<(f64, XParity)> = even.into_iter().map(|l| (l, XParity::Even)).collect();
    out.extend(odd.into_iter().map(|l| (l, XParity::Odd)));
    Ok(out)
}

fn conformal_weights(params: &KleinBottleParams, n: usize) -> Vec<f64> {
    let h = params.lx / n as f64;
    let mut w: Vec<f64> = (0..n)
        .map(|i| params.conformal_factor(i as f64 * h))
        .collect();
    // Enforce exact reflection symmetry; the analytic weight already is, up
    // to elliptic-function rounding.
    for i in 1..n / 2 {
        let avg = 0.5 * (w[i] + w[n - i]);
        w[i] = avg;
        w[n - i] = avg;
    }
    w
}

/// Eigenvalues of the mode-j Sturm-Liouville problem for one surface.
pub fn sturm_liouville_eigenvalues(
    params: &KleinBottleParams,
    j: u32,
    grid_n: usize,
) -> Result<Vec<(f64, XParity)>> {
    check_grid(grid_n)?;
    periodic_sl_blocks(
        &conformal_weights(params, grid_n),
        params.lx,
        mode_frequency(params, j),
    )
}

/// Largest mode index that can still carry an eigenvalue below the cutoff
/// plus margin: lambda >= omega_j^2 / max(weight) in the Rayleigh quotient.
fn max_mode(params: &KleinBottleParams, cutoff: f64) -> u32 {
    let limit = (cutoff + CUTOFF_MARGIN) * params.b;
    let mut j = 0;
    while mode_frequency(params, j + 1).powi(2) < limit {
        j += 1;
        assert!(j < 10_000, "mode enumeration runaway");
    }
    j
}

/// Spectrum of the torus double cover below the cutoff (plus margin), with
/// Richardson extrapolation from grid_n / 2 and grid_n and per-line error
/// bars.
pub fn torus_spectrum(params: &KleinBottleParams, cutoff: f64, grid_n: usize) -> Result<Spectrum> {
    check_grid(grid_n)?;
    if grid_n % 2 != 0 || grid_n / 2 < 64 {
        return Err(Error::GridTooCoarse(format!(
            "gridN = {grid_n}: extrapolation needs gridN / 2 >= 64"
        )));
    }
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "cutoff must be positive and finite, got {cutoff}"
        )));
    }
    let jmax = max_mode(params, cutoff);
    let keep = cutoff + CUTOFF_MARGIN;

    let per_mode: Vec<Result<Vec<SpectralLine>>> = (0..=jmax)
        .into_par_iter()
        .map(|j| {
            let fine = sturm_liouville_eigenvalues(params, j, grid_n)?;
            let coarse = sturm_liouville_eigenvalues(params, j, grid_n / 2)?;
            let mut lines = Vec::new();
            for parity in [XParity::Even, XParity::Odd] {
                let f: Vec<f64> = fine
                    .iter()
                    .filter(|(_, p)| *p == parity)
                    .map(|(l, _)| *l)
                    .collect();
                let c: Vec<f64> = coarse
                    .iter()
                    .filter(|(_, p)| *p == parity)
                    .map(|(l, _)| *l)
                    .collect();
                // Within a sector the tridiagonal eigenvalues are simple, so
                // sorted order pairs the two resolutions correctly.
                for k in 0..f.len().min(c.len()) {
                    let extrap = (4.0 * f[k] - c[k]) / 3.0;
                    if extrap >= keep {
                        break;
                    }
                    lines.push(SpectralLine {
                        lambda: extrap,
                        j,
                        x_parity: parity,
                        tau_parity: sector_tau(j, parity),
                        mult: if j == 0 { 1 } else { 2 },
                        error_bar: (f[k] - c[k]).abs() / 3.0,
                    });
                }
            }
            Ok(lines)
        })
        .collect();

    let mut lines = Vec::new();
    for r in per_mode {
        lines.extend(r?);
    }
    lines.sort_by(|a, b| {
        a.lambda
            .partial_cmp(&b.lambda)
            .unwrap()
            .then(a.j.cmp(&b.j))
            .then(a.x_parity.cmp(&b.x_parity))
    });
    let tolerance = lines.iter().fold(0.0f64, |acc, l| acc.max(l.error_bar));
    Ok(Spectrum {
        surface: SurfaceKind::KleinBottle {
            n: params.n,
            m: params.m,
        },
        cutoff,
        grid_n,
        tolerance,
        lines,
    })
}

struct Counts {
    ind0: u32,
    ind1: u32,
    mult_six: u32,
    ind0_cover: u32,
    near_cutoff: bool,
}

/// Classify lines of a double-cover spectrum against the value 6.
fn classify(spectrum: &Spectrum) -> Result<Counts> {
    // The constant mode: smallest eigenvalue of the (j = 0, even) sector.
    let zero = spectrum
        .lines
        .iter()
        .enumerate()
        .filter(|(_, l)| l.j == 0 && l.x_parity == XParity::Even)
        .min_by(|(_, a), (_, b)| a.lambda.partial_cmp(&b.lambda).unwrap())
        .map(|(i, _)| i)
        .ok_or_else(|| Error::ToleranceExceeded("no constant mode found below cutoff".into()))?;
    if spectrum.lines[zero].lambda.abs() > 1e-6 {
        return Err(Error::ToleranceExceeded(format!(
            "constant mode eigenvalue {} too far from zero",
            spectrum.lines[zero].lambda
        )));
    }
    let mut c = Counts {
        ind0: 0,
        ind1: 0,
        mult_six: 0,
        ind0_cover: 0,
        near_cutoff: false,
    };
    for (i, l) in spectrum.lines.iter().enumerate() {
        if i == zero {
            continue;
        }
        let bar = l.error_bar;
        if (l.lambda - 6.0).abs() <= bar {
            if l.tau_parity == TauParity::Plus {
                c.mult_six += l.mult;
            }
            c.near_cutoff = true;
            continue;
        }
        if (l.lambda - 6.0).abs() < 10.0 * bar {
            c.near_cutoff = true;
        }
        if l.lambda + bar < 6.0 {
            if l.lambda - bar <= 0.0 {
                return Err(Error::AmbiguousAtCutoff(format!(
                    "eigenvalue {} +- {} not separated from zero",
                    l.lambda, bar
                )));
            }
            c.ind0_cover += l.mult;
            match l.tau_parity {
                TauParity::Plus => c.ind0 += l.mult,
                TauParity::Minus => c.ind1 += l.mult,
            }
        }
        // Lines with lambda - bar > 6 do not contribute.
    }
    Ok(c)
}

/// Index report for one surface of the family.
///
/// The spectrum is computed at grid_n; whenever any line sits within ten
/// error bars of the value 6 the counts are recomputed at twice the grid and
/// the integer results must agree, otherwise the classification is reported
/// as ambiguous.
pub fn index_report(params: &KleinBottleParams, grid_n: usize) -> Result<IndexReport> {
    let spectrum = torus_spectrum(params, 6.0, grid_n)?;
    let counts = classify(&spectrum)?;
    let (final_spectrum, final_counts) = if counts.near_cutoff {
        let refined_spectrum = torus_spectrum(params, 6.0, grid_n * 2)?;
        let refined = classify(&refined_spectrum)?;
        if refined.ind0 != counts.ind0
            || refined.ind1 != counts.ind1
            || refined.mult_six != counts.mult_six
        {
            return Err(Error::AmbiguousAtCutoff(format!(
                "counts changed under refinement: ind0 {} -> {}, ind1 {} -> {}, multSix {} -> {}",
                counts.ind0,
                refined.ind0,
                counts.ind1,
                refined.ind1,
                counts.mult_six,
                refined.mult_six
            )));
        }
        (refined_spectrum, refined)
    } else {
        (spectrum, counts)
    };

    let surface = SurfaceKind::KleinBottle {
        n: params.n,
        m: params.m,
    };
    let beta1 = surface.betti1();
    let ind = beta1 + final_counts.ind0 + final_counts.ind1;
    // Orientation cover is a torus: first Betti number 2.
    let ind_cover = 2 + 2 * final_counts.ind0_cover;
    Ok(IndexReport {
        surface,
        beta1,
        chi: 0,
        ind0: final_counts.ind0,
        ind1: final_counts.ind1,
        ind,
        mult_six: final_counts.mult_six,
        ind0_cover: final_counts.ind0_cover,
        ind_cover,
        grid_n: final_spectrum.grid_n,
        tolerance: final_spectrum.tolerance,
    })
}

/// Metadata of one of the seven closed-form eigenfunctions at eigenvalue 6.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplicitEigenfunction {
    /// 1-based label g_1 ... g_7.
    pub index: u8,
    pub j: u32,
    pub x_parity: XParity,
}

/// The seven eigenfunctions: g_1 from the conformal factor, then the three
/// elliptic products paired with cosine and sine of their y-frequency.
pub fn explicit_eigenfunctions(params: &KleinBottleParams) -> [ExplicitEigenfunction; 7] {
    let j2 = ((2 * params.n + params.m) / 3) as u32;
    let j4 = ((params.n + 2 * params.m) / 3) as u32;
    let j6 = ((params.n - params.m) / 3) as u32;
    [
        ExplicitEigenfunction {
            index: 1,
            j: 0,
            x_parity: XParity::Even,
        },
        ExplicitEigenfunction {
            index: 2,
            j: j2,
            x_parity: XParity::Even,
        },
        ExplicitEigenfunction {
            index: 3,
            j: j2,
            x_parity: XParity::Even,
        },
        ExplicitEigenfunction {
            index: 4,
            j: j4,
            x_parity: XParity::Odd,
        },
        ExplicitEigenfunction {
            index: 5,
            j: j4,
            x_parity: XParity::Odd,
        },
        ExplicitEigenfunction {
            index: 6,
            j: j6,
            x_parity: XParity::Odd,
        },
        ExplicitEigenfunction {
            index: 7,
            j: j6,
            x_parity: XParity::Odd,
        },
    ]
}

/// Evaluate g_i at (x, y); `which` is the 1-based label.
pub fn eval_explicit(params: &KleinBottleParams, which: u8, x: f64, y: f64) -> f64 {
    let ev = params.elliptic_at(x);
    let meta = explicit_eigenfunctions(params);
    match which {
        1 => {
            let c = (1.0 + 2.0 * params.b3) / (3.0 * params.b * params.b);
            params.conformal_factor(x) - c
        }
        2 => ev.dn * ev.cn * (mode_frequency(params, meta[1].j) * y).cos(),
        3 => ev.dn * ev.cn * (mode_frequency(params, meta[2].j) * y).sin(),
        4 => ev.dn * ev.sn * (mode_frequency(params, meta[3].j) * y).cos(),
        5 => ev.dn * ev.sn * (mode_frequency(params, meta[4].j) * y).sin(),
        6 => ev.cn * ev.sn * (mode_frequency(params, meta[5].j) * y).cos(),
        7 => ev.cn * ev.sn * (mode_frequency(params, meta[6].j) * y).sin(),
        _ => panic!("eigenfunction label must be 1..=7, got {which}"),
    }
}

/// Relative residuals of e^{-2u} (g_xx + g_yy) + 6 g = 0 for the seven
/// closed-form eigenfunctions on the double cover grid. Second order in the
/// grid spacing.
pub fn verify_explicit_eigenfunctions(
    params: &KleinBottleParams,
    grid_n: usize,
) -> Result<[f64; 7]> {
    check_grid(grid_n)?;
    let hx = params.lx / grid_n as f64;
    let weights: Vec<f64> = (0..grid_n)
        .map(|ix| params.conformal_factor(ix as f64 * hx))
        .collect();
    let mut out = [0.0f64; 7];
    let residuals: Vec<f64> = (1..=7u8)
        .into_par_iter()
        .map(|which| {
            let grid = Grid2::from_fn(grid_n, grid_n, params.lx, 2.0 * params.ly, |x, y| {
                eval_explicit(params, which, x, y)
            });
            laplace_residual(&grid, &weights, 6.0)
        })
        .collect();
    out.copy_from_slice(&residuals);
    Ok(out)
}

/// First-eigenvalue comparison: lambda_1 of the surface, the Rayleigh
/// quotient of the elliptic sine test function, and the closed-form bound
/// 2 - m^2 / (n (n + m)).
#[derive(Debug, Clone, PartialEq)]
pub struct Lambda1Report {
    pub lambda1: f64,
    pub lambda1_error_bar: f64,
    pub rayleigh: f64,
    pub bound: f64,
}

/// Smallest positive eigenvalue that descends to the surface, with the test
/// function comparison.
pub fn lambda1_report(params: &KleinBottleParams, grid_n: usize) -> Result<Lambda1Report> {
    let spectrum = torus_spectrum(params, 6.0, grid_n)?;
    let line = spectrum
        .lines
        .iter()
        .filter(|l| l.tau_parity == TauParity::Plus && l.lambda > l.error_bar.max(1e-8))
        .min_by(|a, b| a.lambda.partial_cmp(&b.lambda).unwrap())
        .ok_or_else(|| {
            Error::ToleranceExceeded("no positive descending eigenvalue below cutoff".into())
        })?;

    // Rayleigh quotient of f(x) = sn(r x): the Dirichlet energy is
    // conformally invariant, the mass carries the conformal weight, and the
    // y-integrals cancel.
    let num = quad::integrate_composite(
        |x| {
            let ev = params.elliptic_at(x);
            let df = params.r * ev.cn * ev.dn;
            df * df
        },
        0.0,
        params.lx,
        8,
    );
    let den = quad::integrate_composite(
        |x| {
            let ev = params.elliptic_at(x);
            ev.sn * ev.sn * params.conformal_factor(x)
        },
        0.0,
        params.lx,
        8,
    );
    Ok(Lambda1Report {
        lambda1: line.lambda,
        lambda1_error_bar: line.error_bar,
        rayleigh: num / den,
        bound: 2.0 - (params.m * params.m) as f64 / (params.n * (params.n + params.m)) as f64,
    })
}

/// Area by the closed formula and by quadrature of the conformal factor.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaReport {
    pub formula: f64,
    pub quadrature: f64,
}

pub fn area_report(params: &KleinBottleParams) -> AreaReport {
    let nf = params.n as f64;
    let mf = params.m as f64;
    let formula = 4.0 * std::f64::consts::PI * nf.sqrt() / (3.0 * (nf + 2.0 * mf).sqrt())
        * ((nf + 2.0 * mf) * params.ee - mf * params.kk);
    let quadrature = quad::integrate_2d(
        |x, _| params.conformal_factor(x),
        params.lx,
        params.ly,
        8,
        2,
    );
    AreaReport {
        formula,
        quadrature,
    }
}

/// Result of the multiplicity bound check.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityBoundReport {
    pub satisfied: bool,
    /// (cluster index, eigenvalue, multiplicity, bound) of the first
    /// violation, when any.
    pub violation: Option<(u32, f64, u32, u32)>,
}

/// Check the multiplicity bound m(lambda_i) <= 3 + 2i - 2 chi for the
/// distinct positive descending eigenvalue clusters of a non-orientable
/// surface, i = 1, 2, ... ascending. Orientable input is rejected.
pub fn multiplicity_bound_check(spectrum: &Spectrum) -> Result<MultiplicityBoundReport> {
    if spectrum.surface.orientable() {
        return Err(Error::InvalidArgument(
            "multiplicity bound check applies to non-orientable surfaces".into(),
        ));
    }
    let chi = spectrum.surface.euler_characteristic();
    let mut positives: Vec<(f64, f64, u32)> = spectrum
        .lines
        .iter()
        .filter(|l| l.tau_parity == TauParity::Plus && l.lambda > l.error_bar.max(1e-8))
        .map(|l| (l.lambda, l.error_bar, l.mult))
        .collect();
    positives.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut clusters: Vec<(f64, u32)> = Vec::new();
    for (lambda, bar, mult) in positives {
        match clusters.last_mut() {
            Some((lam0, m0)) if (lambda - *lam0).abs() <= (bar + 1e-9).max(2.0 * bar) => {
                *m0 += mult;
            }
            _ => clusters.push((lambda, mult)),
        }
    }
    for (i, (lambda, mult)) in clusters.iter().enumerate() {
        let idx = i as u32 + 1;
        let bound_i = 3 + 2 * idx as i64 - 2 * chi;
        if *mult as i64 > bound_i {
            return Ok(MultiplicityBoundReport {
                satisfied: false,
                violation: Some((idx, *lambda, *mult, bound_i.max(0) as u32)),
            });
        }
    }
    Ok(MultiplicityBoundReport {
        satisfied: true,
        violation: None,
    })
}

/// Closed-form spectrum of a benchmark surface up to the cutoff plus margin.
/// Lines carry zero error bars; for the projective plane the lines live on
/// the sphere double cover with glide parity (-1)^l.
pub fn benchmark_spectrum(kind: &SurfaceKind, cutoff: f64) -> Result<Spectrum> {
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "cutoff must be positive and finite, got {cutoff}"
        )));
    }
    let keep = cutoff + CUTOFF_MARGIN;
    let mut lines = Vec::new();
    match kind {
        SurfaceKind::KleinBottle { .. } => {
            return Err(Error::InvalidArgument(
                "family surfaces have no closed-form spectrum; use the grid solver".into(),
            ));
        }
        SurfaceKind::Sphere | SurfaceKind::RealProjectivePlane => {
            let mut l = 0u32;
            loop {
                let lambda = (l * (l + 1)) as f64;
                if lambda >= keep {
                    break;
                }
                let tau = if l % 2 == 0 {
                    TauParity::Plus
                } else {
                    TauParity::Minus
                };
                lines.push(SpectralLine {
                    lambda,
                    j: l,
                    x_parity: XParity::Even,
                    tau_parity: if *kind == SurfaceKind::Sphere {
                        TauParity::Plus
                    } else {
                        tau
                    },
                    mult: 2 * l + 1,
                    error_bar: 0.0,
                });
                l += 1;
            }
        }
        SurfaceKind::CliffordTorus => {
            // Dual lattice {(s, t) : s + t = 0 mod 3} with
            // lambda = 2 (s^2 - s t + t^2).
            let bound = (keep / 2.0).sqrt().ceil() as i64 * 2 + 2;
            let mut counts: Vec<(f64, u32)> = Vec::new();
            for s in -bound..=bound {
                for t in -bound..=bound {
                    if (s + t).rem_euclid(3) != 0 {
                        continue;
                    }
                    let lambda = 2.0 * (s * s - s * t + t * t) as f64;
                    if lambda >= keep {
                        continue;
                    }
                    match counts.iter_mut().find(|(l, _)| (*l - lambda).abs() < 1e-9) {
                        Some((_, c)) => *c += 1,
                        None => counts.push((lambda, 1)),
                    }
                }
            }
            counts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            for (lambda, mult) in counts {
                lines.push(SpectralLine {
                    lambda,
                    j: 0,
                    x_parity: XParity::Even,
                    tau_parity: TauParity::Plus,
                    mult,
                    error_bar: 0.0,
                });
            }
        }
    }
    Ok(Spectrum {
        surface: kind.clone(),
        cutoff,
        grid_n: 0,
        tolerance: 0.0,
        lines,
    })
}

/// Exact index report of a benchmark surface from its closed-form spectrum.
pub fn benchmark_index_report(kind: &SurfaceKind) -> Result<IndexReport> {
    let spectrum = benchmark_spectrum(kind, 6.0)?;
    let mut ind0 = 0u32;
    let mut ind1 = 0u32;
    let mut mult_six = 0u32;
    for l in &spectrum.lines {
        if l.lambda > 1e-12 && l.lambda < 6.0 - 1e-12 {
            match l.tau_parity {
                TauParity::Plus => ind0 += l.mult,
                TauParity::Minus => ind1 += l.mult,
            }
        } else if (l.lambda - 6.0).abs() <= 1e-12 && l.tau_parity == TauParity::Plus {
            mult_six += l.mult;
        }
    }
    let beta1 = kind.betti1();
    let chi = kind.euler_characteristic();
    let (ind, ind0_cover, ind_cover, ind1) = if kind.orientable() {
        // Orientable: the second count duplicates the first and the cover is
        // the surface itself.
        let ind = 2 * ind0 + beta1;
        (ind, ind0, ind, ind0)
    } else {
        let ind = beta1 + ind0 + ind1;
        let ind0_cover = ind0 + ind1;
        // The orientation cover of the projective plane is the sphere.
        (ind, ind0_cover, 2 * ind0_cover, ind1)
    };
    Ok(IndexReport {
        surface: kind.clone(),
        beta1,
        chi,
        ind0,
        ind1,
        ind,
        mult_six,
        ind0_cover,
        ind_cover,
        grid_n: 0,
        tolerance: 0.0,
    })
}

/// Horizontal unit-sphere lift of the flat benchmark torus in angle
/// coordinates.
pub fn clifford_lift(theta1: f64, theta2: f64) -> [num_complex::Complex64; 3] {
    use num_complex::Complex64 as C;
    let s = 1.0 / 3.0f64.sqrt();
    [
        s * C::cis(theta1),
        s * C::cis(theta2),
        s * C::cis(-(theta1 + theta2)),
    ]
}

/// Residual of the harmonic-map equation for the benchmark torus lift in a
/// conformal chart, using analytic second derivatives: the chart frequencies
/// a_k = sqrt(2) (cos(2 pi k / 3), sin(2 pi k / 3)) satisfy |a_k|^2 = 2, so
/// z_xx + z_yy + 2 z vanishes identically. Returns the max over a point
/// sample; nonzero only through rounding.
pub fn clifford_chart_residual() -> f64 {
    use num_complex::Complex64 as C;
    let s = 1.0 / 3.0f64.sqrt();
    let mut worst = 0.0f64;
    for k in 0..3 {
        let ang = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
        let ax = std::f64::consts::SQRT_2 * ang.cos();
        let ay = std::f64::consts::SQRT_2 * ang.sin();
        for i in 0..50 {
            let x = 0.13 * i as f64;
            let y = 0.29 * i as f64;
            let z = s * C::cis(ax * x + ay * y);
            let res = (2.0 - ax * ax - ay * ay) * z;
            worst = worst.max(res.norm());
        }
    }
    worst
}
