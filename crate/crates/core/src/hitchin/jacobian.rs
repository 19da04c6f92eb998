//! Functional independence of the base coordinates.
//!
//! Each coordinate is a coefficient of `b_i(z) = c_i(phi(z)) prod (z - p_j)`,
//! read off as a Laurent coefficient at infinity with a discrete Fourier
//! transform on a circle enclosing the poles (on the level set this is the
//! polynomial coefficient; off it, the contour integral keeps the function
//! smooth). Gradients of `c_i` come from those of the power sums through
//! Newton's identities.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::component_len;
use super::poisson::{observable_grad, Observable};
use crate::error::{Error, Result};
use crate::exactalg::numerical_rank;
use crate::quiver::QuiverPoint;

pub const DEFAULT_RANK_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobianReport {
    /// Rank on the tangent space of the complex moment-map level set.
    pub rank: usize,
    /// Rank over all of `T* Rep`.
    pub ambient_rank: usize,
    /// Number of base coordinates, `sum_i max(0, n - 2i + 1)`.
    pub coordinates: usize,
    pub threshold: f64,
    pub singular_values: Vec<f64>,
    pub ambient_singular_values: Vec<f64>,
    /// Dimension of the kernel of the moment-map differential used for the restriction.
    pub tangent_dim: usize,
}

fn sorted_singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Rows: gradients of every base coordinate, flattened over `(x, y)`.
fn coordinate_gradients(point: &QuiverPoint<Complex64>) -> Result<DMatrix<Complex64>> {
    let (r, n) = (point.r, point.n);
    let d = 2 * r * n;
    let pmax = point
        .marked_points
        .iter()
        .map(|p| p.norm())
        .fold(1.0, f64::max);
    let radius = 4.0 * pmax;
    let nodes = (4 * n).max(64);
    let rows: usize = (2..=r).map(|i| component_len(n, i)).sum();
    let mut jac = DMatrix::<Complex64>::zeros(rows, d);

    for m in 0..nodes {
        let omega = Complex64::from_polar(1.0, std::f64::consts::TAU * m as f64 / nodes as f64);
        let z = omega * radius;
        // power sums p_j and their gradients, j = 1..=r
        let mut p = Vec::with_capacity(r);
        let mut dp = Vec::with_capacity(r);
        for j in 1..=r {
            let obs = Observable::TracePower { m: j, z };
            p.push(super::poisson::observable_value(point, &obs)?);
            dp.push(observable_grad(point, &obs)?.flatten());
        }
        // Newton: k c_k = -sum_{j=1}^k c_{k-j} p_j
        let mut c = vec![Complex64::new(1.0, 0.0)];
        let mut dc = vec![vec![Complex64::new(0.0, 0.0); d]];
        for k in 1..=r {
            let mut ck = Complex64::new(0.0, 0.0);
            let mut dck = vec![Complex64::new(0.0, 0.0); d];
            for j in 1..=k {
                ck += c[k - j] * p[j - 1];
                for t in 0..d {
                    dck[t] += dc[k - j][t] * p[j - 1] + c[k - j] * dp[j - 1][t];
                }
            }
            let s = -1.0 / k as f64;
            c.push(ck * s);
            dc.push(dck.into_iter().map(|v| v * s).collect());
        }
        let div: Complex64 = point.marked_points.iter().map(|pj| z - pj).product();
        let mut row = 0;
        for i in 2..=r {
            for k in 0..component_len(n, i) {
                // coefficient k: (1/N) sum_m b(z_m) omega^{-mk} radius^{-k}
                let w = omega.powi(-(k as i32)) * radius.powi(-(k as i32)) / nodes as f64 * div;
                for t in 0..d {
                    jac[(row, t)] += dc[i][t] * w;
                }
                row += 1;
            }
        }
    }
    Ok(jac)
}

/// Differential of `(x y, y_1 x_1, ..., y_n x_n)`, flattened like the gradients.
fn moment_differential(point: &QuiverPoint<Complex64>) -> DMatrix<Complex64> {
    let (r, n) = (point.r, point.n);
    let xi = |a: usize, i: usize| a * n + i;
    let yi = |i: usize, a: usize| r * n + i * r + a;
    let mut m = DMatrix::<Complex64>::zeros(r * r + n, 2 * r * n);
    for a in 0..r {
        for b in 0..r {
            let row = a * r + b;
            for i in 0..n {
                m[(row, xi(a, i))] += point.y[(i, b)];
                m[(row, yi(i, b))] += point.x[(a, i)];
            }
        }
    }
    for i in 0..n {
        for a in 0..r {
            m[(r * r + i, xi(a, i))] += point.y[(i, a)];
            m[(r * r + i, yi(i, a))] += point.x[(a, i)];
        }
    }
    m
}

/// Orthonormal basis of the numerical kernel, as columns.
fn kernel_basis(m: &DMatrix<Complex64>, threshold: f64) -> DMatrix<Complex64> {
    let cols = m.ncols();
    // pad to square so the decomposition returns a full set of right singular vectors
    let mut sq = DMatrix::<Complex64>::zeros(cols.max(m.nrows()), cols);
    sq.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = sq.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let kernel: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] <= threshold * smax.max(f64::MIN_POSITIVE))
        .collect();
    DMatrix::from_fn(cols, kernel.len(), |t, c| v_t[(kernel[c], t)].conj())
}

/// Numerical rank of the base coordinates' derivative at a float point.
pub fn jacobian_rank(point: &QuiverPoint<Complex64>, threshold: f64) -> Result<JacobianReport> {
    if point.r < 2 || point.n <= point.r {
        return Err(Error::InvalidArgument(
            "Jacobian needs r >= 2 and n > r".into(),
        ));
    }
    // Scaling x and y by positive constants maps the level set to itself and
    // multiplies each coordinate by a constant, so ranks are unchanged; unit
    // entries keep rows of different homogeneity degrees comparable.
    let mut point = point.clone();
    for m in [&mut point.x, &mut point.y] {
        let s = m.max_abs();
        if s > 0.0 {
            *m = m.scale(&Complex64::new(1.0 / s, 0.0));
        }
    }
    let point = &point;
    let jac = coordinate_gradients(point)?;
    let ambient_sv = sorted_singular_values(&jac);
    let kernel = kernel_basis(&moment_differential(point), threshold);
    let restricted = &jac * &kernel;
    let sv = sorted_singular_values(&restricted);
    Ok(JacobianReport {
        rank: numerical_rank(&sv, threshold),
        ambient_rank: numerical_rank(&ambient_sv, threshold),
        coordinates: jac.nrows(),
        threshold,
        singular_values: sv,
        ambient_singular_values: ambient_sv,
        tangent_dim: kernel.ncols(),
    })
}

/// Convenience for an exact point: convert and measure.
pub fn jacobian_rank_of<F: crate::exactalg::Field>(
    point: &QuiverPoint<F>,
    threshold: f64,
) -> Result<JacobianReport> {
    jacobian_rank(&point.to_complex(), threshold)
}
