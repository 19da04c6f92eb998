use num_rational::BigRational;

use super::QuiverPoint;
use crate::betti::LengthVector;
use crate::error::{Error, Result};
use crate::exactalg::{numerical_rank, Field, Matrix, FLOAT_TOL};

/// Tolerance for float points on the polygon level set.
const POLYGON_TOL: f64 = 1e-9;

/// Residuals of the hyperkähler moment-map equations at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentResidual<F> {
    /// `sqrt(|xx* - y*y - (alpha_[n]/r) I|^2 + sum_i (|x_i|^2 - |y_i|^2 - alpha_i)^2)`.
    pub real_norm: f64,
    /// `sqrt(|xy|^2 + sum_i |y_i x_i|^2)`.
    pub complex_norm: f64,
    /// `(|x_i|^2 - |y_i|^2 - alpha_i, y_i x_i)` per edge.
    pub per_edge: Vec<(F, F)>,
    pub real_zero: bool,
    pub complex_zero: bool,
}

impl<F> MomentResidual<F> {
    pub fn total(&self) -> f64 {
        self.real_norm.hypot(self.complex_norm)
    }
}

/// `sum |z|^2` kept in the field, so the zero test is exact for exact scalars.
fn sq_norm<'a, F: Field>(entries: impl IntoIterator<Item = &'a F>) -> F {
    entries
        .into_iter()
        .fold(F::zero(), |acc, z| acc + z.clone() * z.conj())
}

fn real_part<F: Field>(z: &F) -> f64 {
    z.to_complex().re
}

pub fn moment_residual<F: Field>(
    point: &QuiverPoint<F>,
    alpha: &LengthVector,
) -> Result<MomentResidual<F>> {
    let (r, n) = (point.r, point.n);
    if alpha.len() != n {
        return Err(Error::InvalidArgument(format!(
            "alpha has length {}, expected {n}",
            alpha.len()
        )));
    }
    let level = F::from_rational(&(alpha.total() / BigRational::from_integer((r as i64).into())));
    let h = &(&(&point.x * &point.x.conj_transpose()) - &(&point.y.conj_transpose() * &point.y))
        - &Matrix::identity(r).scale(&level);
    let xy = &point.x * &point.y;

    let per_edge: Vec<(F, F)> = (0..n)
        .map(|i| {
            let e = sq_norm(&point.x_col(i))
                - sq_norm(&point.y_row(i))
                - F::from_rational(&alpha.entries()[i]);
            (e, point.edge_pairing(i))
        })
        .collect();

    let real_sq = sq_norm(h.data()) + sq_norm(per_edge.iter().map(|(e, _)| e));
    let complex_sq = sq_norm(xy.data()) + sq_norm(per_edge.iter().map(|(_, c)| c));
    Ok(MomentResidual {
        real_norm: real_part(&real_sq).max(0.0).sqrt(),
        complex_norm: real_part(&complex_sq).max(0.0).sqrt(),
        real_zero: real_sq.is_zero(),
        complex_zero: complex_sq.is_zero(),
        per_edge,
    })
}

/// Edge vectors `v_i = x_i x_i* - (alpha_i / r) I` of the associated polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonEdges<F: Field> {
    pub v: Vec<Matrix<F>>,
    /// `sum_i v_i`.
    pub closure: Matrix<F>,
    pub closure_defect: f64,
    /// `|v_i|^2` (Frobenius).
    pub norms_sqr: Vec<F>,
    /// `(1 - 1/r) alpha_i^2`.
    pub expected_norms_sqr: Vec<F>,
}

impl<F: Field> PolygonEdges<F> {
    /// Largest `| |v_i|^2 - (1 - 1/r) alpha_i^2 |`.
    pub fn norm_defect(&self) -> f64 {
        self.norms_sqr
            .iter()
            .zip(&self.expected_norms_sqr)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max)
    }
}

pub fn polygon_edges<F: Field>(x: &Matrix<F>, alpha: &LengthVector) -> Result<PolygonEdges<F>> {
    let (r, n) = (x.rows(), x.cols());
    if alpha.len() != n || r == 0 {
        return Err(Error::InvalidArgument(format!(
            "alpha has length {}, expected {n}",
            alpha.len()
        )));
    }
    let rr = BigRational::from_integer((r as i64).into());
    let mut v = Vec::with_capacity(n);
    for i in 0..n {
        let col = x.col(i);
        let a = &alpha.entries()[i];
        let defect = sq_norm(&col) - F::from_rational(a);
        let scale = F::from_rational(a).magnitude();
        if !defect.is_negligible(scale, POLYGON_TOL) {
            return Err(Error::NotOnPolygonLevelSet(format!(
                "|x_{}|^2 differs from alpha_{} by {:.3e}",
                i + 1,
                i + 1,
                defect.magnitude()
            )));
        }
        let conj: Vec<F> = col.iter().map(Field::conj).collect();
        v.push(
            &Matrix::outer(&col, &conj) - &Matrix::identity(r).scale(&F::from_rational(&(a / &rr))),
        );
    }
    let closure = v.iter().fold(Matrix::zeros(r, r), |acc, m| &acc + m);
    let scale = F::from_rational(&alpha.total()).magnitude();
    if !closure.is_negligible(scale, POLYGON_TOL) {
        return Err(Error::NotOnPolygonLevelSet(format!(
            "trace-free part of xx* is nonzero (max entry {:.3e})",
            closure.max_abs()
        )));
    }
    let closure_defect = closure.frobenius_sqr().sqrt();
    let norms_sqr = v.iter().map(|m| sq_norm(m.data())).collect();
    let factor =
        BigRational::from_integer(1.into()) - BigRational::new(1.into(), (r as i64).into());
    let expected_norms_sqr = alpha
        .entries()
        .iter()
        .map(|a| F::from_rational(&(&factor * a * a)))
        .collect();
    Ok(PolygonEdges {
        v,
        closure,
        closure_defect,
        norms_sqr,
        expected_norms_sqr,
    })
}

/// Membership in the closure of the minimal nilpotent orbit: traceless,
/// square zero, rank at most one.
pub fn min_orbit_check<F: Field>(m: &Matrix<F>) -> bool {
    min_orbit_check_tol(m, FLOAT_TOL)
}

/// As [`min_orbit_check`]; `tol` is relative and ignored for exact scalars.
pub fn min_orbit_check_tol<F: Field>(m: &Matrix<F>, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let scale = m.max_abs();
    if !m.trace().is_negligible(scale, tol) {
        return false;
    }
    if !(m * m).is_negligible(scale * scale, tol) {
        return false;
    }
    let rank = if F::EXACT {
        m.rank()
    } else {
        numerical_rank(&m.singular_values(), tol)
    };
    rank <= 1
}

/// Factor `M = x y` with `y x = 0`, normalised so that `x` is the column of
/// `M` through its largest entry.
pub fn min_orbit_factor<F: Field>(m: &Matrix<F>) -> Result<(Vec<F>, Vec<F>)> {
    if m.is_negligible(0.0, if F::EXACT { 0.0 } else { f64::MIN_POSITIVE }) {
        return Err(Error::ZeroMatrix);
    }
    if !min_orbit_check(m) {
        return Err(Error::NotInMinimalOrbit);
    }
    let (mut bi, mut bj, mut best) = (0, 0, -1.0);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let a = m[(i, j)].magnitude();
            if a > best {
                (bi, bj, best) = (i, j, a);
            }
        }
    }
    let pivot = m[(bi, bj)].clone();
    let x = m.col(bj);
    let y = m.row(bi).into_iter().map(|v| v / pivot.clone()).collect();
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, GaussianRational, Ring};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn g(v: i64) -> GaussianRational {
        GaussianRational::from_i64(v)
    }

    fn gm(rows: Vec<Vec<i64>>) -> Matrix<GaussianRational> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(g).collect())
                .collect(),
        )
    }

    #[test]
    fn residual_examples() {
        let x = gm(vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]]);
        let p = QuiverPoint::new(x, Matrix::zeros(4, 2)).unwrap();
        let a = LengthVector::from_ints(&[1, 1, 1, 1]).unwrap();
        let res = moment_residual(&p, &a).unwrap();
        assert!(res.real_zero && res.complex_zero);
        assert_eq!(res.total(), 0.0);

        let zero =
            QuiverPoint::new(Matrix::<GaussianRational>::zeros(2, 4), Matrix::zeros(4, 2)).unwrap();
        let res = moment_residual(&zero, &a).unwrap();
        assert!(res.real_norm > 0.0 && !res.real_zero);
        assert!(res.complex_zero);
        assert!(moment_residual(&zero, &LengthVector::from_ints(&[1]).unwrap()).is_err());
    }

    #[test]
    fn polygon_example() {
        let x = gm(vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]]);
        let a = LengthVector::from_ints(&[1, 1, 1, 1]).unwrap();
        let e = polygon_edges(&x, &a).unwrap();
        let half = GaussianRational::real(rat(1, 2));
        let v1 = Matrix::from_rows(vec![vec![half.clone(), g(0)], vec![g(0), -half.clone()]]);
        assert_eq!(e.v[0], v1);
        assert_eq!(e.v[2], v1);
        assert_eq!(e.v[1], -v1.clone());
        assert_eq!(e.v[3], -v1);
        assert!(e.closure.is_zero());
        assert!(e.norms_sqr.iter().all(|n| *n == half));
        assert_eq!(e.norm_defect(), 0.0);

        // homogeneity: x -> c x, alpha -> |c|^2 alpha
        let x3 = x.scale(&g(3));
        let e3 = polygon_edges(&x3, &LengthVector::from_ints(&[9, 9, 9, 9]).unwrap()).unwrap();
        assert_eq!(e3.v[0], e.v[0].scale(&g(9)));

        let bad = gm(vec![vec![2, 0, 1, 0], vec![0, 1, 0, 1]]);
        assert!(matches!(
            polygon_edges(&bad, &a),
            Err(Error::NotOnPolygonLevelSet(_))
        ));
    }

    #[test]
    fn min_orbit_examples() {
        let e12 = gm(vec![vec![0, 1], vec![0, 0]]);
        let e21 = gm(vec![vec![0, 0], vec![1, 0]]);
        assert!(min_orbit_check(&e12));
        assert!(min_orbit_check(&Matrix::<GaussianRational>::zeros(3, 3)));
        assert!(!min_orbit_check(&gm(vec![vec![1, 0], vec![0, -1]])));
        assert!(!min_orbit_check(&gm(vec![
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![0, 0, 0]
        ])));
        // square zero but rank two
        assert!(!min_orbit_check(&gm(vec![
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![0, 0, 0, 0],
            vec![0, 0, 0, 0]
        ])));

        assert_eq!(
            min_orbit_factor(&e12).unwrap(),
            (vec![g(1), g(0)], vec![g(0), g(1)])
        );
        assert_eq!(
            min_orbit_factor(&e21).unwrap(),
            (vec![g(0), g(1)], vec![g(1), g(0)])
        );
        assert_eq!(
            min_orbit_factor(&Matrix::<GaussianRational>::zeros(2, 2)),
            Err(Error::ZeroMatrix)
        );
        assert_eq!(
            min_orbit_factor(&gm(vec![vec![1, 0], vec![0, 0]])),
            Err(Error::NotInMinimalOrbit)
        );
    }

    #[test]
    fn float_min_orbit_tolerates_noise() {
        let x = [Complex64::new(1.0, 0.5), Complex64::new(-0.3, 2.0)];
        // y orthogonal to x under the bilinear pairing
        let y = [x[1], -x[0]];
        let mut m = Matrix::outer(&x, &y);
        assert!(min_orbit_check(&m));
        m[(0, 0)] += Complex64::new(1e-12, 0.0);
        assert!(min_orbit_check(&m));
        m[(0, 0)] += Complex64::new(1e-3, 0.0);
        assert!(!min_orbit_check(&m));
    }

    fn arb_gauss() -> impl Strategy<Value = GaussianRational> {
        (-5i64..=5, -5i64..=5).prop_map(|(a, b)| GaussianRational::from_ints(a, b))
    }

    proptest! {
        #[test]
        fn factor_round_trip(
            r in 2usize..5,
            xs in prop::collection::vec(arb_gauss(), 5),
            ws in prop::collection::vec(arb_gauss(), 5),
        ) {
            // y = w - (w x / x_k x_k) e_k-style correction gives y x = 0
            let x: Vec<_> = xs[..r].to_vec();
            prop_assume!(x.iter().any(|v| !v.is_zero()));
            let k = x.iter().position(|v| !v.is_zero()).unwrap();
            let mut y: Vec<_> = ws[..r].to_vec();
            let wx = y.iter().zip(&x).fold(GaussianRational::zero(), |a, (p, q)| a + p.clone() * q.clone());
            y[k] = y[k].clone() - wx / x[k].clone();
            let m = Matrix::outer(&x, &y);
            prop_assume!(!m.is_zero());
            prop_assert!(min_orbit_check(&m));
            let (fx, fy) = min_orbit_factor(&m).unwrap();
            prop_assert_eq!(Matrix::outer(&fx, &fy), m);
            let yx = fy.iter().zip(&fx).fold(GaussianRational::zero(), |a, (p, q)| a + p.clone() * q.clone());
            prop_assert!(yx.is_zero());
        }
    }
}
