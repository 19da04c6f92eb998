//! Points of the cotangent space of star-quiver representations.
//!
//! A point is a pair `(x, y)` with `x` an `r x n` matrix (columns `x_i`) and
//! `y` an `n x r` matrix (rows `y_i`), together with `n` distinct marked
//! points used by the Higgs field. Exact points use Gaussian rationals,
//! float points use `Complex64`.

mod orbit;
mod sample;
mod solve;

pub use orbit::{
    min_orbit_check, min_orbit_check_tol, min_orbit_factor, moment_residual, polygon_edges,
    MomentResidual, PolygonEdges,
};
pub use sample::{
    rank2_fixture, sample_exact, sample_exact_with_x, solution_space_dim, MAX_SAMPLE_ATTEMPTS,
};
pub use solve::{solve_real, solve_real_with, SolveOptions, MAX_RESTARTS};

use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::betti::LengthVector;
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, parse_rational, Field, GaussianRational, Matrix, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Exact,
    Float,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Exact => "exact",
            Flavor::Float => "float",
        }
    }
}

/// Scalars that can live in a [`QuiverPoint`] and round-trip through JSON.
pub trait PointScalar: Field {
    const FLAVOR: Flavor;

    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
    /// Real part only, used for marked points.
    fn real_to_json(&self) -> Value;
    fn real_from_json(v: &Value) -> Result<Self>;

    /// Compact form: exact reals as a bare `"p/q"` string.
    fn to_compact_json(&self) -> Value {
        self.to_json()
    }

    /// `count` distinct evaluation nodes avoiding `avoid`. Exact nodes are
    /// small integers; float nodes lie on a circle enclosing `avoid`, which
    /// keeps low-degree interpolation well conditioned.
    fn interpolation_nodes(count: usize, avoid: &[Self]) -> Vec<Self>;
}

fn malformed(what: &str, v: &Value) -> Error {
    Error::Parse(format!("malformed {what}: {v}"))
}

fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => Err(malformed("rational", v)),
    }
}

fn f64_from_json(v: &Value) -> Result<f64> {
    v.as_f64().ok_or_else(|| malformed("number", v))
}

impl PointScalar for GaussianRational {
    const FLAVOR: Flavor = Flavor::Exact;

    fn to_json(&self) -> Value {
        json!({"re": format_rational(&self.re), "im": format_rational(&self.im)})
    }

    fn from_json(v: &Value) -> Result<Self> {
        let re = v.get("re").ok_or_else(|| malformed("complex entry", v))?;
        let im = v.get("im").ok_or_else(|| malformed("complex entry", v))?;
        Ok(GaussianRational::new(
            rational_from_json(re)?,
            rational_from_json(im)?,
        ))
    }

    fn real_to_json(&self) -> Value {
        Value::String(format_rational(&self.re))
    }

    fn real_from_json(v: &Value) -> Result<Self> {
        Ok(GaussianRational::real(rational_from_json(v)?))
    }

    fn to_compact_json(&self) -> Value {
        if self.is_real() {
            Value::String(format_rational(&self.re))
        } else {
            self.to_json()
        }
    }

    fn interpolation_nodes(count: usize, avoid: &[Self]) -> Vec<Self> {
        (0i64..)
            .map(GaussianRational::from_i64)
            .filter(|z| !avoid.contains(z))
            .take(count)
            .collect()
    }
}

impl PointScalar for Complex64 {
    const FLAVOR: Flavor = Flavor::Float;

    fn to_json(&self) -> Value {
        json!({"re": self.re, "im": self.im})
    }

    fn from_json(v: &Value) -> Result<Self> {
        let re = v.get("re").ok_or_else(|| malformed("complex entry", v))?;
        let im = v.get("im").ok_or_else(|| malformed("complex entry", v))?;
        Ok(Complex64::new(f64_from_json(re)?, f64_from_json(im)?))
    }

    fn real_to_json(&self) -> Value {
        json!(self.re)
    }

    fn real_from_json(v: &Value) -> Result<Self> {
        Ok(Complex64::new(f64_from_json(v)?, 0.0))
    }

    fn interpolation_nodes(count: usize, avoid: &[Self]) -> Vec<Self> {
        let radius = 1.0 + 2.0 * avoid.iter().map(|p| p.norm()).fold(0.0, f64::max);
        // the half-step offset keeps nodes off the real axis, where marked points usually sit
        (0..count)
            .map(|m| {
                Complex64::from_polar(
                    radius,
                    std::f64::consts::TAU * (m as f64 + 0.5) / count as f64,
                )
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuiverPoint<F: Field> {
    pub r: usize,
    pub n: usize,
    /// `r x n`.
    pub x: Matrix<F>,
    /// `n x r`.
    pub y: Matrix<F>,
    pub alpha: Option<LengthVector>,
    pub marked_points: Vec<F>,
}

/// Marked points `1, 2, ..., n`.
pub fn default_marked_points<F: Field>(n: usize) -> Vec<F> {
    (1..=n as i64).map(F::from_i64).collect()
}

impl<F: Field> QuiverPoint<F> {
    /// Build and validate a point with the default marked points.
    pub fn new(x: Matrix<F>, y: Matrix<F>) -> Result<Self> {
        let (r, n) = (x.rows(), x.cols());
        let p = Self {
            r,
            n,
            x,
            y,
            alpha: None,
            marked_points: default_marked_points(n),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_marked_points(mut self, points: Vec<F>) -> Result<Self> {
        self.marked_points = points;
        self.validate()?;
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: LengthVector) -> Result<Self> {
        if alpha.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "alpha has length {}, expected {}",
                alpha.len(),
                self.n
            )));
        }
        self.alpha = Some(alpha);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let (r, n) = (self.r, self.n);
        if r == 0 || n == 0 {
            return Err(Error::InvalidArgument(
                "rank and number of edges must be positive".into(),
            ));
        }
        if (self.x.rows(), self.x.cols()) != (r, n) || (self.y.rows(), self.y.cols()) != (n, r) {
            return Err(Error::InvalidArgument(format!(
                "shape mismatch: x is {}x{}, y is {}x{}, expected {r}x{n} and {n}x{r}",
                self.x.rows(),
                self.x.cols(),
                self.y.rows(),
                self.y.cols()
            )));
        }
        if self.marked_points.len() != n {
            return Err(Error::InvalidArgument(format!(
                "expected {n} marked points, got {}",
                self.marked_points.len()
            )));
        }
        for i in 0..n {
            for j in i + 1..n {
                if (self.marked_points[i].clone() - self.marked_points[j].clone())
                    .is_negligible(1.0, 0.0)
                {
                    return Err(Error::InvalidArgument(format!(
                        "marked points {} and {} coincide",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        if let Some(a) = &self.alpha {
            if a.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "alpha has length {}, expected {n}",
                    a.len()
                )));
            }
        }
        Ok(())
    }

    pub fn flavor(&self) -> Flavor
    where
        F: PointScalar,
    {
        F::FLAVOR
    }

    /// Column `x_i` (0-based).
    pub fn x_col(&self, i: usize) -> Vec<F> {
        self.x.col(i)
    }

    /// Row `y_i` (0-based).
    pub fn y_row(&self, i: usize) -> Vec<F> {
        self.y.row(i)
    }

    /// Residue `x_i y_i`, an `r x r` matrix.
    pub fn residue(&self, i: usize) -> Matrix<F> {
        Matrix::outer(&self.x_col(i), &self.y_row(i))
    }

    /// `y_i x_i`.
    pub fn edge_pairing(&self, i: usize) -> F {
        self.y_row(i)
            .into_iter()
            .zip(self.x_col(i))
            .fold(F::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn to_complex(&self) -> QuiverPoint<Complex64> {
        QuiverPoint {
            r: self.r,
            n: self.n,
            x: self.x.to_complex(),
            y: self.y.to_complex(),
            alpha: self.alpha.clone(),
            marked_points: self.marked_points.iter().map(Field::to_complex).collect(),
        }
    }
}

fn matrix_to_json<F: PointScalar>(m: &Matrix<F>) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(PointScalar::to_json).collect()))
            .collect(),
    )
}

fn matrix_from_json<F: PointScalar>(
    v: &Value,
    rows: usize,
    cols: usize,
    what: &str,
) -> Result<Matrix<F>> {
    let arr = v.as_array().ok_or_else(|| malformed(what, v))?;
    if arr.len() != rows {
        return Err(Error::Parse(format!(
            "{what} has {} rows, expected {rows}",
            arr.len()
        )));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for row in arr {
        let row = row.as_array().ok_or_else(|| malformed(what, row))?;
        if row.len() != cols {
            return Err(Error::Parse(format!(
                "{what} row has {} entries, expected {cols}",
                row.len()
            )));
        }
        for e in row {
            data.push(F::from_json(e)?);
        }
    }
    Ok(Matrix::from_vec(rows, cols, data))
}

impl<F: PointScalar> QuiverPoint<F> {
    pub fn to_json(&self) -> Value {
        let alpha = self.alpha.as_ref().map_or(Value::Null, |a| {
            Value::Array(
                a.entries()
                    .iter()
                    .map(|q| Value::String(format_rational(q)))
                    .collect(),
            )
        });
        json!({
            "r": self.r,
            "n": self.n,
            "flavor": F::FLAVOR.as_str(),
            "alpha": alpha,
            "marked_points": self.marked_points.iter().map(PointScalar::real_to_json).collect::<Vec<_>>(),
            "x": matrix_to_json(&self.x),
            "y": matrix_to_json(&self.y),
        })
    }

    /// Parse a point body whose flavor has already been dispatched on.
    fn from_json_body(v: &Value) -> Result<Self> {
        let dim = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|d| d as usize)
                .ok_or_else(|| Error::Parse(format!("missing or invalid {key:?}")))
        };
        let (r, n) = (dim("r")?, dim("n")?);
        let x = matrix_from_json(v.get("x").unwrap_or(&Value::Null), r, n, "x")?;
        let y = matrix_from_json(v.get("y").unwrap_or(&Value::Null), n, r, "y")?;
        let alpha = match v.get("alpha") {
            None | Some(Value::Null) => None,
            Some(Value::Array(a)) => Some(
                LengthVector::new(a.iter().map(rational_from_json).collect::<Result<_>>()?)
                    .map_err(|e| Error::Parse(e.to_string()))?,
            ),
            Some(other) => return Err(malformed("alpha", other)),
        };
        let marked_points = match v.get("marked_points") {
            None | Some(Value::Null) => default_marked_points(n),
            Some(Value::Array(a)) => a.iter().map(F::real_from_json).collect::<Result<_>>()?,
            Some(other) => return Err(malformed("marked_points", other)),
        };
        let p = QuiverPoint {
            r,
            n,
            x,
            y,
            alpha,
            marked_points,
        };
        p.validate().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(p)
    }
}

/// A point of either flavor, as read from the JSON interchange format.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPoint {
    Exact(QuiverPoint<GaussianRational>),
    Float(QuiverPoint<Complex64>),
}

impl AnyPoint {
    pub fn from_json(v: &Value) -> Result<Self> {
        match v.get("flavor").and_then(Value::as_str) {
            Some("exact") => Ok(AnyPoint::Exact(QuiverPoint::from_json_body(v)?)),
            Some("float") => Ok(AnyPoint::Float(QuiverPoint::from_json_body(v)?)),
            _ => Err(Error::Parse("flavor must be \"exact\" or \"float\"".into())),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyPoint::Exact(p) => p.to_json(),
            AnyPoint::Float(p) => p.to_json(),
        }
    }

    pub fn flavor(&self) -> Flavor {
        match self {
            AnyPoint::Exact(_) => Flavor::Exact,
            AnyPoint::Float(_) => Flavor::Float,
        }
    }

    pub fn rn(&self) -> (usize, usize) {
        match self {
            AnyPoint::Exact(p) => (p.r, p.n),
            AnyPoint::Float(p) => (p.r, p.n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gx(rows: Vec<Vec<i64>>) -> Matrix<GaussianRational> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(GaussianRational::from_i64).collect())
                .collect(),
        )
    }

    #[test]
    fn exact_json_round_trip() {
        let x = gx(vec![vec![1, 0, 1, 1], vec![0, 1, 1, 2]]);
        let y = Matrix::zeros(4, 2);
        let p = QuiverPoint::new(x, y)
            .unwrap()
            .with_alpha(LengthVector::from_ints(&[1, 1, 1, 2]).unwrap())
            .unwrap();
        let v = p.to_json();
        assert_eq!(v["flavor"], "exact");
        assert_eq!(v["x"][0][0]["re"], "1/1");
        assert_eq!(AnyPoint::from_json(&v).unwrap(), AnyPoint::Exact(p));
    }

    #[test]
    fn float_json_round_trip() {
        let x = Matrix::from_fn(2, 3, |i, j| Complex64::new(i as f64 + 0.25, j as f64 - 0.5));
        let y = Matrix::from_fn(3, 2, |i, j| Complex64::new(0.125 * i as f64, -(j as f64)));
        let p = QuiverPoint::new(x, y).unwrap();
        let s = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(AnyPoint::from_json_str(&s).unwrap(), AnyPoint::Float(p));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(AnyPoint::from_json_str("{").is_err());
        assert!(AnyPoint::from_json_str(r#"{"flavor":"other"}"#).is_err());
        let x = gx(vec![vec![1, 0], vec![0, 1]]);
        let p = QuiverPoint::new(x, Matrix::zeros(2, 2)).unwrap();
        assert!(p
            .clone()
            .with_marked_points(vec![
                GaussianRational::from_i64(1),
                GaussianRational::from_i64(1)
            ])
            .is_err());
        let mut v = p.to_json();
        v["x"][0] = json!([{"re": "1/0", "im": "0"}, {"re": "0", "im": "0"}]);
        assert!(matches!(AnyPoint::from_json(&v), Err(Error::Parse(_))));
    }

    #[test]
    fn residue_is_outer_product() {
        let x = gx(vec![vec![1, 2], vec![3, 4]]);
        let y = gx(vec![vec![5, 6], vec![7, 8]]);
        let p = QuiverPoint::new(x, y).unwrap();
        assert_eq!(p.residue(1), gx(vec![vec![14, 16], vec![28, 32]]));
        assert_eq!(p.edge_pairing(0), GaussianRational::from_i64(5 + 18));
    }
}
