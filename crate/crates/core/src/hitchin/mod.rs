//! Parabolic Higgs field of a quiver point, the Hitchin map, and its Poisson
//! geometry.
//!
//! The Higgs field is `phi(z) = sum_i phi_i / (z - p_i)` with residues
//! `phi_i = x_i y_i`. Base coordinates are polynomials in `z` obtained by
//! clearing `prod_j (z - p_j)`, stored as monomial coefficient vectors.

mod jacobian;
mod poisson;

pub use jacobian::{jacobian_rank, jacobian_rank_of, JacobianReport, DEFAULT_RANK_THRESHOLD};
pub use poisson::{
    commute_check, delta_check, observable_grad, observable_value, poisson_bracket,
    BracketObservable, CommuteReport, DeltaReport, Gradient, Observable,
};

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::exactalg::{DensePoly, Field, Matrix, FLOAT_TOL, Z};
use crate::quiver::{min_orbit_check, PointScalar, QuiverPoint};

#[derive(Clone, Debug, PartialEq)]
pub struct HiggsField<F: Field> {
    pub r: usize,
    pub residues: Vec<Matrix<F>>,
    pub marked_points: Vec<F>,
}

/// `z` coincides with `p` (exactly, or to rounding for floats).
pub(crate) fn at_pole<F: Field>(z: &F, p: &F) -> bool {
    let scale = z.magnitude().max(p.magnitude());
    (z.clone() - p.clone()).is_negligible(scale, 1e-14)
}

impl<F: Field> HiggsField<F> {
    /// Assemble from residues without checking the residue conditions.
    pub fn from_parts(residues: Vec<Matrix<F>>, marked_points: Vec<F>) -> Result<Self> {
        let r = residues.first().map_or(0, Matrix::rows);
        if residues.is_empty() || residues.len() != marked_points.len() {
            return Err(Error::InvalidArgument(
                "need one residue per marked point".into(),
            ));
        }
        if residues.iter().any(|m| m.rows() != r || m.cols() != r) {
            return Err(Error::InvalidArgument(
                "residues must be square of equal size".into(),
            ));
        }
        Ok(Self {
            r,
            residues,
            marked_points,
        })
    }

    pub fn n(&self) -> usize {
        self.residues.len()
    }

    /// Residue conditions: each `phi_i` in the minimal orbit closure and
    /// `sum phi_i = 0`.
    pub fn validate(&self) -> Result<()> {
        for (i, phi) in self.residues.iter().enumerate() {
            if !min_orbit_check(phi) {
                return Err(Error::ComplexMomentMapViolated { index: Some(i) });
            }
        }
        let total = self
            .residues
            .iter()
            .fold(Matrix::zeros(self.r, self.r), |acc, m| &acc + m);
        let scale = self
            .residues
            .iter()
            .map(Matrix::max_abs)
            .fold(0.0, f64::max);
        if !total.is_negligible(scale, FLOAT_TOL) {
            return Err(Error::ComplexMomentMapViolated { index: None });
        }
        Ok(())
    }

    /// `sum_i phi_i / (z - p_i)`.
    pub fn eval(&self, z: &F) -> Result<Matrix<F>> {
        let mut out = Matrix::zeros(self.r, self.r);
        for (phi, p) in self.residues.iter().zip(&self.marked_points) {
            if at_pole(z, p) {
                return Err(Error::EvaluationAtPole);
            }
            out = &out + &phi.scale(&(F::one() / (z.clone() - p.clone())));
        }
        Ok(out)
    }

    /// `prod_j (z - p_j)`.
    pub fn divisor_poly(&self) -> DensePoly<F, Z> {
        DensePoly::from_roots(&self.marked_points)
    }
}

/// Residues `phi_i = x_i y_i`, after checking the complex moment map.
pub fn residues<F: Field>(point: &QuiverPoint<F>) -> Result<HiggsField<F>> {
    let scale = point.x.max_abs() * point.y.max_abs() * point.r as f64;
    for i in 0..point.n {
        if !point.edge_pairing(i).is_negligible(scale, FLOAT_TOL) {
            return Err(Error::ComplexMomentMapViolated { index: Some(i) });
        }
    }
    let xy = &point.x * &point.y;
    if !xy.is_negligible(scale * point.n as f64, FLOAT_TOL) {
        return Err(Error::ComplexMomentMapViolated { index: None });
    }
    let h = HiggsField::from_parts(
        (0..point.n).map(|i| point.residue(i)).collect(),
        point.marked_points.clone(),
    )?;
    h.validate()?;
    Ok(h)
}

pub fn higgs_eval<F: Field>(h: &HiggsField<F>, z: &F) -> Result<Matrix<F>> {
    h.eval(z)
}

/// Coefficient vectors of base-coordinate polynomials, one per `i = 2..=r`;
/// component `i` has length `max(0, n - 2i + 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasePoint<F: Field> {
    pub r: usize,
    pub n: usize,
    pub coords: Vec<Vec<F>>,
}

impl<F: Field> BasePoint<F> {
    pub fn component(&self, i: usize) -> &[F] {
        &self.coords[i - 2]
    }

    /// Total coordinate count, `sum_i max(0, n - 2i + 1)`.
    pub fn len(&self) -> usize {
        self.coords.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_polys(&self) -> Vec<DensePoly<F, Z>> {
        self.coords
            .iter()
            .map(|c| DensePoly::new(c.clone()))
            .collect()
    }
}

impl<F: PointScalar> BasePoint<F> {
    /// `{"<i>": [..], ...}`, keyed by the component index.
    pub fn to_json_map(&self) -> Value {
        let mut m = Map::new();
        for (k, c) in self.coords.iter().enumerate() {
            m.insert(
                (k + 2).to_string(),
                Value::Array(c.iter().map(PointScalar::to_compact_json).collect()),
            );
        }
        Value::Object(m)
    }
}

/// Expected length of component `i`.
pub fn component_len(n: usize, i: usize) -> usize {
    (n + 1).saturating_sub(2 * i)
}

/// Polynomial interpolation through `(xs[k], ys[k])`.
pub fn interpolate<F: Field>(xs: &[F], ys: &[F]) -> DensePoly<F, Z> {
    DensePoly::interpolate(xs, ys)
}

/// Recover `f(phi(z)) prod (z - p_j)` as a polynomial of degree `<= n - 2i`,
/// where `f` is homogeneous of degree `i` in `phi`. The product is a rational
/// function whose numerator has degree at most `i (n - 1)`, so agreement with
/// the interpolant at `i (n - 1) + 1` nodes proves the identity; any mismatch
/// is a pole or excess degree.
///
/// `value(k, z)` returns the product at `nodes[k]`; only the first
/// `i (n - 1) + 1` nodes are used. Exact checks stop at the first mismatch.
fn polynomial_component<F: PointScalar>(
    h: &HiggsField<F>,
    i: usize,
    nodes: &[F],
    mut value: impl FnMut(usize, &F) -> Result<F>,
) -> Result<Vec<F>> {
    let n = h.n();
    let len = component_len(n, i);
    let nodes = &nodes[..i * (n - 1) + 1];
    let overflow = |d: &F| Error::DegreeOverflow {
        component: i,
        detail: format!(
            "not a polynomial of degree <= {} (mismatch {:.3e} at an interpolation check node)",
            n as i64 - 2 * i as i64,
            d.magnitude()
        ),
    };
    let eager = if F::EXACT { len } else { nodes.len() };
    let values = nodes[..eager]
        .iter()
        .enumerate()
        .map(|(k, z)| value(k, z))
        .collect::<Result<Vec<F>>>()?;
    let q = interpolate(&nodes[..len], &values[..len]);
    if F::EXACT {
        for (k, z) in nodes.iter().enumerate().skip(len) {
            let d = q.eval(z) - value(k, z)?;
            if !d.is_zero() {
                return Err(overflow(&d));
            }
        }
    } else {
        let scale = values.iter().map(Field::magnitude).fold(0.0, f64::max);
        for (z, v) in nodes.iter().zip(&values).skip(len) {
            let d = q.eval(z) - v.clone();
            if !d.is_negligible(scale, FLOAT_TOL) {
                return Err(overflow(&d));
            }
        }
    }
    let mut coeffs = q.into_coeffs();
    coeffs.resize(len, F::zero());
    Ok(coeffs)
}

fn node_count(n: usize, i: usize) -> usize {
    i * (n - 1) + 1
}

/// `g_i(z) = Tr(phi(z)^i) prod_j (z - p_j)` for one `i`.
pub fn hitchin_component<F: PointScalar>(h: &HiggsField<F>, i: usize) -> Result<Vec<F>> {
    let nodes = F::interpolation_nodes(node_count(h.n(), i), &h.marked_points);
    let div = h.divisor_poly();
    polynomial_component(h, i, &nodes, |_, z| {
        Ok(h.eval(z)?.pow(i).trace() * div.eval(z))
    })
}

/// Trace coordinates `(g_2, ..., g_r)`.
///
/// For `i >= 4`, `Tr(phi^i)` can have a second-order pole at a marked point
/// even when every residue is square-zero of rank one, and the component
/// then fails with a degree overflow; [`charpoly_base`] is well defined
/// in every rank.
pub fn hitchin_map<F: PointScalar>(h: &HiggsField<F>) -> Result<BasePoint<F>> {
    let coords = (2..=h.r)
        .map(|i| hitchin_component(h, i))
        .collect::<Result<_>>()?;
    Ok(BasePoint {
        r: h.r,
        n: h.n(),
        coords,
    })
}

/// Coefficients `c_1, ..., c_r` of `det(lambda - M) = lambda^r + c_1 lambda^(r-1) + ...`
/// from power sums by Newton's identities.
pub fn charpoly_coeffs<F: Field>(m: &Matrix<F>) -> Vec<F> {
    let r = m.rows();
    let mut power = Matrix::identity(r);
    let mut sums = Vec::with_capacity(r);
    for _ in 0..r {
        power = &power * m;
        sums.push(power.trace());
    }
    let mut c = vec![F::one()];
    for k in 1..=r {
        let s = (1..=k).fold(F::zero(), |acc, j| {
            acc + c[k - j].clone() * sums[j - 1].clone()
        });
        c.push(-s / F::from_i64(k as i64));
    }
    c.split_off(1)
}

/// Characteristic-polynomial coordinates `b_i(z) = c_i(phi(z)) prod_j (z - p_j)`.
/// For `i = 2, 3` these are `-g_2 / 2` and `-g_3 / 3`.
pub fn charpoly_base<F: PointScalar>(h: &HiggsField<F>) -> Result<BasePoint<F>> {
    let div = h.divisor_poly();
    let coords = if F::EXACT {
        // exact nodes are shared prefixes, so each evaluation serves every component
        let nodes = F::interpolation_nodes(node_count(h.n(), h.r), &h.marked_points);
        let mut cache: Vec<Option<Vec<F>>> = vec![None; nodes.len()];
        (2..=h.r)
            .map(|i| {
                polynomial_component(h, i, &nodes, |k, z| {
                    if cache[k].is_none() {
                        cache[k] = Some(charpoly_coeffs(&h.eval(z)?));
                    }
                    Ok(cache[k].as_ref().expect("filled")[i - 1].clone() * div.eval(z))
                })
            })
            .collect::<Result<_>>()?
    } else {
        (2..=h.r)
            .map(|i| {
                let nodes = F::interpolation_nodes(node_count(h.n(), i), &h.marked_points);
                polynomial_component(h, i, &nodes, |_, z| {
                    Ok(charpoly_coeffs(&h.eval(z)?)[i - 1].clone() * div.eval(z))
                })
            })
            .collect::<Result<_>>()?
    };
    Ok(BasePoint {
        r: h.r,
        n: h.n(),
        coords,
    })
}
