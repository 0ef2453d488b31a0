//! Nodal domain counting for the closed-form eigenfunctions on the surface
//! itself: sign sampling on the fundamental domain, flood fill across the
//! periodic x seam and the orientation-reversing y seam, and the count
//! report with its closed-form expectations.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::KleinBottleParams;
use crate::json::Json;
use crate::spectral::{eval_explicit, explicit_eigenfunctions};

/// How the y seam of the fundamental domain is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gluing {
    /// (x, Ly) identified with (-x, 0): the surface itself.
    KleinBottle,
    /// (x, Ly) identified with (x, 0): control identification.
    Torus,
}

/// Samples of one eigenfunction on the fundamental domain [0, Lx) x [0, Ly),
/// column-major: values[ix * ny + iy].
#[derive(Debug, Clone)]
pub struct NodalGrid {
    pub params: KleinBottleParams,
    /// 1-based eigenfunction label.
    pub which: u8,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

/// Sample eigenfunction g_which on an nx x ny grid of the fundamental
/// domain. The resolution must comfortably oversample the sign oscillations:
/// at least 64 columns, and 32 rows per y half-period of the mode.
pub fn sample_g(params: &KleinBottleParams, which: u8, nx: usize, ny: usize) -> Result<NodalGrid> {
    if !(1..=7).contains(&which) {
        return Err(Error::InvalidArgument(format!(
            "eigenfunction label must be 1..=7, got {which}"
        )));
    }
    let meta = explicit_eigenfunctions(params)[which as usize - 1];
    let ny_min = 32 * ((meta.j as usize + 1) / 2).max(1);
    if nx < 64 || ny < ny_min {
        return Err(Error::GridTooCoarse(format!(
            "g_{which} needs at least 64 x {ny_min} samples, got {nx} x {ny}"
        )));
    }
    let hx = params.lx / nx as f64;
    let hy = params.ly / ny as f64;
    let values: Vec<f64> = (0..nx)
        .into_par_iter()
        .flat_map_iter(|ix| {
            let x = ix as f64 * hx;
            (0..ny).map(move |iy| eval_explicit(params, which, x, iy as f64 * hy))
        })
        .collect();
    Ok(NodalGrid {
        params: params.clone(),
        which,
        nx,
        ny,
        values,
    })
}

fn signs(grid: &NodalGrid, epsilon: f64) -> Result<Vec<i8>> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be nonnegative, got {epsilon}"
        )));
    }
    let signs: Vec<i8> = grid
        .values
        .iter()
        .map(|&v| {
            if v > epsilon {
                1
            } else if v < -epsilon {
                -1
            } else {
                0
            }
        })
        .collect();
    let excluded = signs.iter().filter(|&&s| s == 0).count();
    if 2 * excluded > signs.len() {
        return Err(Error::InvalidArgument(format!(
            "epsilon = {epsilon} excludes {:.1}% of samples",
            100.0 * excluded as f64 / signs.len() as f64
        )));
    }
    Ok(signs)
}

/// Count connected sign domains under the given gluing. Neighbors are the
/// four axis neighbors; the x seam wraps periodically, the y seam wraps
/// with an x reversal for the Klein bottle gluing.
pub fn count_nodal_domains_glued(grid: &NodalGrid, epsilon: f64, gluing: Gluing) -> Result<usize> {
    let signs = signs(grid, epsilon)?;
    let (nx, ny) = (grid.nx, grid.ny);
    let mut visited = vec![false; nx * ny];
    let mut stack: Vec<usize> = Vec::new();
    let mut components = 0usize;

    let neighbor_y_seam = |ix: usize, top: bool| -> usize {
        let jx = match gluing {
            Gluing::KleinBottle => (nx - ix) % nx,
            Gluing::Torus => ix,
        };
        if top {
            jx * ny // row 0
        } else {
            jx * ny + (ny - 1)
        }
    };

    for start in 0..nx * ny {
        if signs[start] == 0 || visited[start] {
            continue;
        }
        components += 1;
        visited[start] = true;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let ix = idx / ny;
            let iy = idx % ny;
            let sign = signs[idx];
            let neighbors = [
                ((ix + nx - 1) % nx) * ny + iy,
                ((ix + 1) % nx) * ny + iy,
                if iy + 1 < ny {
                    idx + 1
                } else {
                    neighbor_y_seam(ix, true)
                },
                if iy > 0 {
                    idx - 1
                } else {
                    neighbor_y_seam(ix, false)
                },
            ];
            for j in neighbors {
                if !visited[j] && signs[j] == sign {
                    visited[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    Ok(components)
}

/// Count nodal domains of the eigenfunction on the surface.
pub fn count_nodal_domains(grid: &NodalGrid, epsilon: f64) -> Result<usize> {
    count_nodal_domains_glued(grid, epsilon, Gluing::KleinBottle)
}

/// Closed-form expected counts for g_1 ... g_7.
pub fn expected_counts(params: &KleinBottleParams) -> [usize; 7] {
    let n = params.n as usize;
    let m = params.m as usize;
    let n2 = 2 * (2 * n + m) / 3;
    let n4 = 2 * (n + 2 * m) / 3;
    let n6 = 4 * (n - m) / 3;
    [3, n2, n2, n4, n4, n6, n6]
}

/// Nodal counts of the seven eigenfunctions at the requested resolution and
/// at double the resolution, with the torus-gluing control for g_1.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalReport {
    pub n: u64,
    pub m: u64,
    pub nx: usize,
    pub ny: usize,
    pub counts: [usize; 7],
    pub counts_refined: [usize; 7],
    pub expected: [usize; 7],
    /// True when both resolutions reproduce the expected counts; a mismatch
    /// surviving the doubled resolution is a genuine discrepancy.
    pub matches: bool,
    /// g_1 domain count under the torus control gluing.
    pub torus_control_g1: usize,
    /// Lower bound 2 (2n + m) / 3 on the largest count.
    pub courant: usize,
}

impl NodalReport {
    pub fn to_json(&self) -> Json {
        let arr = |c: &[usize; 7]| Json::Arr(c.iter().map(|&v| Json::Int(v as i64)).collect());
        Json::obj(vec![
            ("n", Json::Int(self.n as i64)),
            ("m", Json::Int(self.m as i64)),
            ("nx", Json::Int(self.nx as i64)),
            ("ny", Json::Int(self.ny as i64)),
            ("counts", arr(&self.counts)),
            ("countsRefined", arr(&self.counts_refined)),
            ("expected", arr(&self.expected)),
            ("match", Json::Bool(self.matches)),
            ("torusControlG1", Json::Int(self.torus_control_g1 as i64)),
            ("courant", Json::Int(self.courant as i64)),
        ])
    }
}

fn count_all(params: &KleinBottleParams, nx: usize, ny: usize) -> Result<[usize; 7]> {
    let counts: Vec<usize> = (1..=7u8)
        .into_par_iter()
        .map(|which| {
            let grid = sample_g(params, which, nx, ny)?;
            count_nodal_domains(&grid, 0.0)
        })
        .collect::<Result<Vec<usize>>>()?;
    let mut out = [0usize; 7];
    out.copy_from_slice(&counts);
    Ok(out)
}

/// Count all seven eigenfunctions at (nx, ny) and (2nx, 2ny) and compare
/// with the closed-form expectations.
pub fn nodal_report(params: &KleinBottleParams, nx: usize, ny: usize) -> Result<NodalReport> {
    let expected = expected_counts(params);
    let counts = count_all(params, nx, ny)?;
    let counts_refined = count_all(params, 2 * nx, 2 * ny)?;
    let torus_control_g1 =
        count_nodal_domains_glued(&sample_g(params, 1, nx, ny)?, 0.0, Gluing::Torus)?;
    let courant = expected[1];
    debug_assert!(courant >= 8, "largest count bound degenerated");
    Ok(NodalReport {
        n: params.n,
        m: params.m,
        nx,
        ny,
        counts,
        counts_refined,
        expected,
        matches: counts == expected && counts_refined == expected,
        torus_control_g1,
        courant,
    })
}

/// Sign map as a binary PGM image: 0 for negative, 128 for excluded, 255
/// for positive. Rows run from the top of the domain (y = Ly) downward.
pub fn to_pgm(grid: &NodalGrid, epsilon: f64) -> Result<Vec<u8>> {
    let s = signs(grid, epsilon)?;
    let mut out = format!("P5\n{} {}\n255\n", grid.nx, grid.ny).into_bytes();
    for iy in (0..grid.ny).rev() {
        for ix in 0..grid.nx {
            out.push(match s[ix * grid.ny + iy] {
                1 => 255u8,
                0 => 128,
                _ => 0,
            });
        }
    }
    Ok(out)
}

/// CSV dump of the sampled values, one x,y,value row per grid point.
pub fn to_csv(grid: &NodalGrid) -> String {
    use crate::json::fmt_float;
    let hx = grid.params.lx / grid.nx as f64;
    let hy = grid.params.ly / grid.ny as f64;
    let mut out = String::from("x,y,value\n");
    for ix in 0..grid.nx {
        for iy in 0..grid.ny {
            out.push_str(&fmt_float(ix as f64 * hx));
            out.push(',');
            out.push_str(&fmt_float(iy as f64 * hy));
            out.push(',');
            out.push_str(&fmt_float(grid.values[ix * grid.ny + iy]));
            out.push('\n');
        }
    }
    out
}
