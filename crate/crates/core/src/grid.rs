//! Finite-difference helpers on the doubly periodic cover of the surface.
//!
//! Scalar fields that descend to the surface are periodic with period Lx in
//! x and 2 Ly in y, so second derivatives use the plain periodic three-point
//! stencil. Residuals are reported relative to the sup norm of the field.

use rayon::prelude::*;

/// Column-major scalar samples: `data[ix * ny + iy]` holds the value at
/// (x_i, y_j) on the uniform grid over [0, lx) x [0, ly2).
#[derive(Debug, Clone)]
pub struct Grid2 {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly2: f64,
    pub data: Vec<f64>,
}

impl Grid2 {
    pub fn from_fn(
        nx: usize,
        ny: usize,
        lx: f64,
        ly2: f64,
        f: impl Fn(f64, f64) -> f64 + Sync + Send,
    ) -> Grid2 {
        let hx = lx / nx as f64;
        let hy = ly2 / ny as f64;
        let fref = &f;
        let data: Vec<f64> = (0..nx)
            .into_par_iter()
            .flat_map_iter(|ix| {
                let x = ix as f64 * hx;
                (0..ny).map(move |iy| fref(x, iy as f64 * hy))
            })
            .collect();
        Grid2 {
            nx,
            ny,
            lx,
            ly2,
            data,
        }
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.data[ix * self.ny + iy]
    }

    pub fn hx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        self.ly2 / self.ny as f64
    }
}

/// Max over the grid of |w^{-1} (f_xx + f_yy) + kappa f| divided by max |f|,
/// with periodic wrap in both directions. `weight_cols[ix]` is the metric
/// weight on column ix.
pub fn laplace_residual(grid: &Grid2, weight_cols: &[f64], kappa: f64) -> f64 {
    assert_eq!(weight_cols.len(), grid.nx);
    let (nx, ny) = (grid.nx, grid.ny);
    let ihx2 = 1.0 / (grid.hx() * grid.hx());
    let ihy2 = 1.0 / (grid.hy() * grid.hy());
    let sup = grid
        .data
        .iter()
        .fold(0.0f64, |acc, &v| acc.max(v.abs()))
        .max(1e-300);
    let worst = (0..nx)
        .into_par_iter()
        .map(|ix| {
            let left = (ix + nx - 1) % nx;
            let right = (ix + 1) % nx;
            let mut local = 0.0f64;
            for iy in 0..ny {
                let down = (iy + ny - 1) % ny;
                let up = (iy + 1) % ny;
                let f = grid.at(ix, iy);
                let fxx = (grid.at(left, iy) + grid.at(right, iy) - 2.0 * f) * ihx2;
                let fyy = (grid.at(ix, down) + grid.at(ix, up) - 2.0 * f) * ihy2;
                let res = (fxx + fyy) / weight_cols[ix] + kappa * f;
                local = local.max(res.abs());
            }
            local
        })
        .reduce(|| 0.0, f64::max);
    worst / sup
}

/// CSV dump of a sampled field, one `x,y,value` row per grid point.
pub fn field_csv(grid: &Grid2) -> String {
    use crate::json::fmt_float;
    let mut out = String::with_capacity(grid.data.len() * 40);
    out.push_str("x,y,value\n");
    for ix in 0..grid.nx {
        let x = ix as f64 * grid.hx();
        for iy in 0..grid.ny {
            let y = iy as f64 * grid.hy();
            out.push_str(&fmt_float(x));
            out.push(',');
            out.push_str(&fmt_float(y));
            out.push(',');
            out.push_str(&fmt_float(grid.at(ix, iy)));
            out.push('\n');
        }
    }
    out
}
