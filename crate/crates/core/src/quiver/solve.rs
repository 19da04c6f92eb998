//! Damped least squares for the full moment-map equations.
//!
//! Unknowns are the real and imaginary parts of `x` and `y` (`4rn` reals).
//! Every equation is a real quadratic form minus a constant, so the residual
//! is `B(p, p) - c` for a bilinear `B` and the Jacobian column for
//! coordinate `j` is `B(e_j, p) + B(p, e_j)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{moment_residual, QuiverPoint};
use crate::betti::LengthVector;
use crate::error::{Error, Result};
use crate::exactalg::Matrix;

/// Seeded re-initializations after the first attempt.
pub const MAX_RESTARTS: usize = 10;

/// Iterations without meaningful progress before a restart.
const STAGNATION_WINDOW: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    /// Iteration cap per attempt.
    pub max_iter: usize,
    pub restarts: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 5000,
            restarts: MAX_RESTARTS,
        }
    }
}

struct Problem {
    r: usize,
    n: usize,
    level: f64,
    alpha: Vec<f64>,
}

impl Problem {
    fn dim(&self) -> usize {
        4 * self.r * self.n
    }

    fn unpack(&self, p: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let m = self.r * self.n;
        let x = (0..m).map(|k| Complex64::new(p[k], p[m + k])).collect();
        let y = (0..m)
            .map(|k| Complex64::new(p[2 * m + k], p[3 * m + k]))
            .collect();
        (x, y)
    }

    /// The quadratic part of every residual, polarized. `x[a * n + i]`, `y[i * r + a]`.
    fn bilinear(&self, p: &[f64], q: &[f64]) -> Vec<f64> {
        let (r, n) = (self.r, self.n);
        let (xp, yp) = self.unpack(p);
        let (xq, yq) = self.unpack(q);
        let xi = |x: &[Complex64], a: usize, i: usize| x[a * n + i];
        let yi = |y: &[Complex64], i: usize, a: usize| y[i * r + a];
        let mut out = Vec::with_capacity(3 * r * r + 3 * n);

        // xx* - y*y; off-diagonal parts weighted so the squared residual is
        // the squared Frobenius norm
        let sqrt2 = std::f64::consts::SQRT_2;
        for a in 0..r {
            for b in a..r {
                let h: Complex64 = (0..n)
                    .map(|i| {
                        xi(&xp, a, i) * xi(&xq, b, i).conj() - yi(&yp, i, a).conj() * yi(&yq, i, b)
                    })
                    .sum();
                if a == b {
                    out.push(h.re);
                } else {
                    out.push(sqrt2 * h.re);
                    out.push(sqrt2 * h.im);
                }
            }
        }
        for i in 0..n {
            let e: Complex64 = (0..r)
                .map(|a| {
                    xi(&xp, a, i) * xi(&xq, a, i).conj() - yi(&yp, i, a) * yi(&yq, i, a).conj()
                })
                .sum();
            out.push(e.re);
        }
        for a in 0..r {
            for b in 0..r {
                let c: Complex64 = (0..n).map(|i| xi(&xp, a, i) * yi(&yq, i, b)).sum();
                out.push(c.re);
                out.push(c.im);
            }
        }
        for i in 0..n {
            let c: Complex64 = (0..r).map(|a| yi(&yp, i, a) * xi(&xq, a, i)).sum();
            out.push(c.re);
            out.push(c.im);
        }
        out
    }

    fn constants(&self) -> Vec<f64> {
        let r = self.r;
        let mut c = Vec::new();
        for a in 0..r {
            for b in a..r {
                if a == b {
                    c.push(self.level);
                } else {
                    c.extend([0.0, 0.0]);
                }
            }
        }
        c.extend(&self.alpha);
        c.extend(std::iter::repeat_n(0.0, 2 * r * r + 2 * self.n));
        c
    }

    fn residual(&self, p: &[f64], consts: &[f64]) -> DVector<f64> {
        let b = self.bilinear(p, p);
        DVector::from_iterator(b.len(), b.iter().zip(consts).map(|(v, c)| v - c))
    }

    fn jacobian(&self, p: &[f64]) -> DMatrix<f64> {
        let d = self.dim();
        let cols: Vec<Vec<f64>> = (0..d)
            .map(|j| {
                let mut e = vec![0.0; d];
                e[j] = 1.0;
                self.bilinear(&e, p)
                    .into_iter()
                    .zip(self.bilinear(p, &e))
                    .map(|(a, b)| a + b)
                    .collect()
            })
            .collect();
        DMatrix::from_fn(cols[0].len(), d, |i, j| cols[j][i])
    }

    fn initial(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let (r, n) = (self.r, self.n);
        let m = r * n;
        let mut p: Vec<f64> = (0..4 * m).map(|_| StandardNormal.sample(rng)).collect();
        for i in 0..n {
            let norm: f64 = (0..r)
                .map(|a| p[a * n + i].powi(2) + p[m + a * n + i].powi(2))
                .sum::<f64>()
                .sqrt();
            let s = self.alpha[i].sqrt() / norm.max(1e-12);
            for a in 0..r {
                p[a * n + i] *= s;
                p[m + a * n + i] *= s;
            }
        }
        for v in &mut p[2 * m..] {
            *v *= 0.1;
        }
        p
    }

    /// One Levenberg–Marquardt run; returns the final parameters and residual norm.
    fn run(&self, mut p: Vec<f64>, tol: f64, max_iter: usize) -> (Vec<f64>, f64, bool) {
        let consts = self.constants();
        let mut res = self.residual(&p, &consts);
        let mut cost = res.norm();
        let mut mu: Option<f64> = None;
        let mut window_start = cost;
        for iter in 0..max_iter {
            if cost < tol {
                return (p, cost, true);
            }
            let j = self.jacobian(&p);
            let jt = j.transpose();
            let a = &jt * &j;
            let g = &jt * &res;
            let mu_val = *mu.get_or_insert_with(|| 1e-3 * a.diagonal().max().max(1e-12));
            let mut damping = mu_val;
            let mut accepted = false;
            for _ in 0..40 {
                let mut damped = a.clone();
                for k in 0..damped.nrows() {
                    damped[(k, k)] += damping;
                }
                if let Some(ch) = damped.cholesky() {
                    let delta = ch.solve(&(-&g));
                    let trial: Vec<f64> = p.iter().zip(delta.iter()).map(|(x, d)| x + d).collect();
                    let trial_res = self.residual(&trial, &consts);
                    let trial_cost = trial_res.norm();
                    if trial_cost < cost {
                        p = trial;
                        res = trial_res;
                        cost = trial_cost;
                        mu = Some((damping / 3.0).max(1e-15));
                        accepted = true;
                        break;
                    }
                }
                damping *= 4.0;
            }
            if !accepted {
                break;
            }
            if (iter + 1) % STAGNATION_WINDOW == 0 {
                if cost > 0.999 * window_start {
                    break;
                }
                window_start = cost;
            }
        }
        let ok = cost < tol;
        (p, cost, ok)
    }
}

/// Minimize the moment-map residual at level `(alpha, 0)` from seeded random
/// starts; succeeds once the full residual norm drops below `tol`.
pub fn solve_real(
    r: usize,
    n: usize,
    alpha: &LengthVector,
    seed: u64,
    tol: f64,
    max_iter: usize,
) -> Result<QuiverPoint<Complex64>> {
    solve_real_with(
        r,
        n,
        alpha,
        seed,
        SolveOptions {
            tol,
            max_iter,
            ..Default::default()
        },
    )
}

pub fn solve_real_with(
    r: usize,
    n: usize,
    alpha: &LengthVector,
    seed: u64,
    opts: SolveOptions,
) -> Result<QuiverPoint<Complex64>> {
    if r == 0 || n < r + 1 {
        return Err(Error::InvalidArgument(format!(
            "solver needs r >= 1 and n >= r + 1 (got r = {r}, n = {n})"
        )));
    }
    if alpha.len() != n {
        return Err(Error::InvalidArgument(format!(
            "alpha has length {}, expected {n}",
            alpha.len()
        )));
    }
    let alpha_f = alpha.to_f64();
    let problem = Problem {
        r,
        n,
        level: (alpha.total() / num_rational::BigRational::from_integer((r as i64).into()))
            .to_f64()
            .unwrap_or(f64::NAN),
        alpha: alpha_f,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _attempt in 0..=opts.restarts {
        let init = problem.initial(&mut rng);
        if opts.max_iter == 0 {
            let consts = problem.constants();
            best = best.min(problem.residual(&init, &consts).norm());
            continue;
        }
        let (p, cost, ok) = problem.run(init, opts.tol, opts.max_iter);
        best = best.min(cost);
        if ok {
            let (x, y) = problem.unpack(&p);
            let point = QuiverPoint::new(Matrix::from_vec(r, n, x), Matrix::from_vec(n, r, y))?
                .with_alpha(alpha.clone())?;
            // the solver's residual is the same norm; recheck independently
            let check = moment_residual(&point, alpha)?.total();
            if check < opts.tol {
                return Ok(point);
            }
            best = best.min(check);
        }
    }
    Err(Error::NonConvergence {
        best_residual: best,
        restarts: opts.restarts,
    })
}
