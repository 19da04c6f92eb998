use serde::Serialize;

use super::at_pole;
use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix};
use crate::quiver::QuiverPoint;

/// `I_m(z0) = Tr(phi(z0)^m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketObservable<F> {
    pub m: usize,
    pub z0: F,
}

impl<F: Field> BracketObservable<F> {
    /// Requires `2 <= m <= r`.
    pub fn new(m: usize, z0: F, r: usize) -> Result<Self> {
        if m < 2 || m > r {
            return Err(Error::InvalidArgument(format!(
                "observable power must lie in 2..={r} (got {m})"
            )));
        }
        Ok(Self { m, z0 })
    }
}

/// Functions on `T* Rep` whose gradients are known in closed form.
#[derive(Clone, Debug, PartialEq)]
pub enum Observable<F> {
    /// `Tr(phi(z)^m)`, any `m >= 1`.
    TracePower { m: usize, z: F },
    /// The matrix entry `phi(z)_{ij}` (0-based).
    Entry { i: usize, j: usize, z: F },
}

impl<F: Field> From<&BracketObservable<F>> for Observable<F> {
    fn from(o: &BracketObservable<F>) -> Self {
        Observable::TracePower {
            m: o.m,
            z: o.z0.clone(),
        }
    }
}

impl<F> Observable<F> {
    fn point(&self) -> &F {
        match self {
            Observable::TracePower { z, .. } | Observable::Entry { z, .. } => z,
        }
    }
}

/// Holomorphic partial derivatives: `dx[(a, i)] = d/dx_{a i}`, `dy[(i, a)] = d/dy_{i a}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradient<F: Field> {
    pub dx: Matrix<F>,
    pub dy: Matrix<F>,
}

impl<F: Field> Gradient<F> {
    /// Flattened as all `x` entries (row-major) followed by all `y` entries.
    pub fn flatten(&self) -> Vec<F> {
        self.dx
            .data()
            .iter()
            .chain(self.dy.data())
            .cloned()
            .collect()
    }

    pub fn norm(&self) -> f64 {
        (self.dx.frobenius_sqr() + self.dy.frobenius_sqr()).sqrt()
    }
}

/// `1 / (z - p_i)` for every marked point.
fn inverse_distances<F: Field>(point: &QuiverPoint<F>, z: &F) -> Result<Vec<F>> {
    point
        .marked_points
        .iter()
        .map(|p| {
            if at_pole(z, p) {
                Err(Error::EvaluationAtPole)
            } else {
                Ok(F::one() / (z.clone() - p.clone()))
            }
        })
        .collect()
}

fn phi_at<F: Field>(point: &QuiverPoint<F>, inv: &[F]) -> Matrix<F> {
    (0..point.n).fold(Matrix::zeros(point.r, point.r), |acc, i| {
        &acc + &point.residue(i).scale(&inv[i])
    })
}

pub fn observable_value<F: Field>(point: &QuiverPoint<F>, obs: &Observable<F>) -> Result<F> {
    let inv = inverse_distances(point, obs.point())?;
    let phi = phi_at(point, &inv);
    Ok(match obs {
        Observable::TracePower { m, .. } => phi.pow(*m).trace(),
        Observable::Entry { i, j, .. } => phi[(*i, *j)].clone(),
    })
}

/// Closed-form gradient. For `Tr(phi^m)`: `d/dx_{a i} = m (y_i phi^(m-1))_a / (z - p_i)`
/// and `d/dy_{i a} = m (phi^(m-1) x_i)_a / (z - p_i)`.
pub fn observable_grad<F: Field>(
    point: &QuiverPoint<F>,
    obs: &Observable<F>,
) -> Result<Gradient<F>> {
    let (r, n) = (point.r, point.n);
    let inv = inverse_distances(point, obs.point())?;
    let mut dx = Matrix::zeros(r, n);
    let mut dy = Matrix::zeros(n, r);
    match obs {
        Observable::TracePower { m, .. } => {
            if *m == 0 {
                return Err(Error::InvalidArgument("trace power must be >= 1".into()));
            }
            let phi = phi_at(point, &inv);
            let coef = F::from_i64(*m as i64);
            let pw = phi.pow(m - 1);
            for i in 0..n {
                let s = coef.clone() * inv[i].clone();
                for a in 0..r {
                    let mut gx = F::zero();
                    let mut gy = F::zero();
                    for b in 0..r {
                        gx = gx + point.y[(i, b)].clone() * pw[(b, a)].clone();
                        gy = gy + pw[(a, b)].clone() * point.x[(b, i)].clone();
                    }
                    dx[(a, i)] = gx * s.clone();
                    dy[(i, a)] = gy * s.clone();
                }
            }
        }
        Observable::Entry { i, j, .. } => {
            if *i >= r || *j >= r {
                return Err(Error::InvalidArgument(format!(
                    "entry ({i}, {j}) out of range for rank {r}"
                )));
            }
            for k in 0..n {
                dx[(*i, k)] = point.y[(k, *j)].clone() * inv[k].clone();
                dy[(k, *j)] = point.x[(*i, k)].clone() * inv[k].clone();
            }
        }
    }
    Ok(Gradient { dx, dy })
}

/// `{f, g} = sum (df/dy dg/dx - df/dx dg/dy)`; with this sign the residues
/// satisfy `{phi_ab, phi_cd} = delta_bc phi_ad - delta_ad phi_cb`.
pub fn bracket_of_grads<F: Field>(f: &Gradient<F>, g: &Gradient<F>) -> F {
    let (r, n) = (f.dx.rows(), f.dx.cols());
    let mut acc = F::zero();
    for i in 0..n {
        for a in 0..r {
            acc = acc + f.dy[(i, a)].clone() * g.dx[(a, i)].clone()
                - f.dx[(a, i)].clone() * g.dy[(i, a)].clone();
        }
    }
    acc
}

pub fn poisson_bracket<F: Field>(
    point: &QuiverPoint<F>,
    f: &Observable<F>,
    g: &Observable<F>,
) -> Result<F> {
    Ok(bracket_of_grads(
        &observable_grad(point, f)?,
        &observable_grad(point, g)?,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaReport {
    pub max_deviation: f64,
    pub exact_zero: bool,
}

/// Compare `{phi_ij(z), phi_kl(w)}` with `delta_jk D_il - delta_il D_kj`,
/// `D = phi(z)/(w - z) + phi(w)/(z - w)`, over all index quadruples.
pub fn delta_check<F: Field>(point: &QuiverPoint<F>, z: &F, w: &F) -> Result<DeltaReport> {
    if at_pole(z, w) {
        return Err(Error::CoincidentEvaluationPoints);
    }
    let r = point.r;
    let phi_z = phi_at(point, &inverse_distances(point, z)?);
    let phi_w = phi_at(point, &inverse_distances(point, w)?);
    let delta = &phi_z.scale(&(F::one() / (w.clone() - z.clone())))
        + &phi_w.scale(&(F::one() / (z.clone() - w.clone())));

    let grads = |z: &F| -> Result<Vec<Gradient<F>>> {
        (0..r * r)
            .map(|e| {
                observable_grad(
                    point,
                    &Observable::Entry {
                        i: e / r,
                        j: e % r,
                        z: z.clone(),
                    },
                )
            })
            .collect()
    };
    let gz = grads(z)?;
    let gw = grads(w)?;

    let mut max_dev = 0.0f64;
    let mut exact_zero = true;
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                for l in 0..r {
                    let lhs = bracket_of_grads(&gz[i * r + j], &gw[k * r + l]);
                    let mut rhs = F::zero();
                    if j == k {
                        rhs = rhs + delta[(i, l)].clone();
                    }
                    if i == l {
                        rhs = rhs - delta[(k, j)].clone();
                    }
                    let d = lhs - rhs;
                    exact_zero &= d.is_zero();
                    max_dev = max_dev.max(d.magnitude());
                }
            }
        }
    }
    Ok(DeltaReport {
        max_deviation: max_dev,
        exact_zero: F::EXACT && exact_zero,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketEntry {
    pub m1: usize,
    pub z1: String,
    pub m2: usize,
    pub z2: String,
    pub value: String,
    pub abs: f64,
    /// `|{f, g}| / (|grad f| |grad g|)`, zero when either gradient vanishes.
    pub relative: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommuteReport {
    pub max_abs: f64,
    pub max_relative: f64,
    pub all_exact_zero: bool,
    pub pairs: Vec<BracketEntry>,
}

/// Brackets of all pairs of distinct observables `Tr(phi(z)^m)` with
/// `2 <= m <= r` and `z` drawn from `eval_points`.
pub fn commute_check<F: Field + std::fmt::Display>(
    point: &QuiverPoint<F>,
    eval_points: &[F],
) -> Result<CommuteReport> {
    let mut obs = Vec::new();
    for m in 2..=point.r {
        for z in eval_points {
            obs.push(Observable::TracePower { m, z: z.clone() });
        }
    }
    let grads: Vec<Gradient<F>> = obs
        .iter()
        .map(|o| observable_grad(point, o))
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    let (mut max_abs, mut max_rel, mut all_zero) = (0.0f64, 0.0f64, true);
    for a in 0..obs.len() {
        for b in a + 1..obs.len() {
            let v = bracket_of_grads(&grads[a], &grads[b]);
            let abs = v.magnitude();
            let denom = grads[a].norm() * grads[b].norm();
            let relative = if denom > 0.0 { abs / denom } else { 0.0 };
            all_zero &= v.is_zero();
            max_abs = max_abs.max(abs);
            max_rel = max_rel.max(relative);
            let (Observable::TracePower { m: m1, z: z1 }, Observable::TracePower { m: m2, z: z2 }) =
                (&obs[a], &obs[b])
            else {
                unreachable!()
            };
            pairs.push(BracketEntry {
                m1: *m1,
                z1: z1.to_string(),
                m2: *m2,
                z2: z2.to_string(),
                value: v.to_string(),
                abs,
                relative,
            });
        }
    }
    Ok(CommuteReport {
        max_abs,
        max_relative: max_rel,
        all_exact_zero: F::EXACT && all_zero,
        pairs,
    })
}
