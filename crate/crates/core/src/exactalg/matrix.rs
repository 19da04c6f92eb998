use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::field::{Field, Ring, FLOAT_TOL};
use super::poly::{DensePoly, Variable, Z};

/// Dense row-major matrix over a ring.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Square matrix of polynomials in `z`.
pub type PolyMatrix<F> = Matrix<DensePoly<F, Z>>;

impl<T: Ring> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_vec(rows, cols, vec![T::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&T) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square());
        (0..k).fold(Self::identity(self.rows), |acc, _| &acc * self)
    }

    /// Outer product of a column and a row.
    pub fn outer(col: &[T], row: &[T]) -> Self {
        Self::from_fn(col.len(), row.len(), |i, j| col[i].clone() * row[j].clone())
    }
}

impl<T: Ring> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Ring> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Ring> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl<'a, T: Ring> Add<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix::from_vec(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }
}

impl<'a, T: Ring> Sub<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix::from_vec(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }
}

impl<'a, T: Ring> Mul<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, o.rows, "matrix dimension mismatch");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }
}

impl<T: Ring> Neg for Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<F: Field> Matrix<F> {
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Squared Frobenius norm as a double.
    pub fn frobenius_sqr(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude().powi(2)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Field::magnitude).fold(0.0, f64::max)
    }

    /// Every entry negligible relative to `scale` (exactly zero for exact fields).
    pub fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(scale, tol))
    }

    pub fn to_complex(&self) -> Matrix<Complex64> {
        self.map(Field::to_complex)
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_complex())
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        let mut sv: Vec<f64> = self
            .to_nalgebra()
            .singular_values()
            .iter()
            .copied()
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Rank: exact elimination for exact fields, otherwise the number of
    /// singular values above `FLOAT_TOL * sigma_max`.
    pub fn rank(&self) -> usize {
        if F::EXACT {
            self.row_echelon().1.len()
        } else {
            numerical_rank(&self.singular_values(), FLOAT_TOL)
        }
    }

    /// Reduced row echelon form and pivot columns. Exact fields only.
    pub fn row_echelon(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = F::one() / m[(row, col)].clone();
            for j in col..m.cols {
                m[(row, j)] = m[(row, j)].clone() * inv.clone();
            }
            for i in 0..m.rows {
                if i == row || m[(i, col)].is_zero() {
                    continue;
                }
                let factor = m[(i, col)].clone();
                for j in col..m.cols {
                    let v = m[(row, j)].clone();
                    m[(i, j)] = m[(i, j)].clone() - factor.clone() * v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Basis of the right null space, one vector per free column with that
    /// free variable set to one. Exact fields only.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (rref, pivots) = self.row_echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![F::zero(); self.cols];
                v[fc] = F::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -rref[(r, fc)].clone();
                }
                v
            })
            .collect()
    }
}

/// Count of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(singular_values: &[f64], rel_tol: f64) -> usize {
    let smax = singular_values.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    singular_values
        .iter()
        .filter(|&&s| s > rel_tol * smax)
        .count()
}

impl<F: Field, V: Variable> Matrix<DensePoly<F, V>> {
    /// Evaluate every entry at `z`.
    pub fn eval(&self, z: &F) -> Matrix<F> {
        self.map(|p| p.eval(z))
    }

    pub fn max_entry_degree(&self) -> Option<usize> {
        self.data.iter().filter_map(DensePoly::degree).max()
    }
}

/// Faddeev–LeVerrier: `M_1 = I`, `c_1 = -tr(A)`; `M_k = A M_{k-1} + c_{k-1} I`,
/// `c_k = -tr(A M_k) / k`. `div` divides a ring element by a positive integer.
fn faddeev_leverrier<T: Ring>(a: &Matrix<T>, div: impl Fn(T, usize) -> T) -> Vec<T> {
    let r = a.rows();
    let id = Matrix::<T>::identity(r);
    let mut coeffs = Vec::with_capacity(r);
    let mut m = id.clone();
    let mut prev_c = T::one();
    for k in 1..=r {
        if k > 1 {
            m = &(a * &m) + &id.scale(&prev_c);
        }
        let c = -div((a * &m).trace(), k);
        coeffs.push(c.clone());
        prev_c = c;
    }
    coeffs
}

/// Coefficients `(c_1, ..., c_r)` of `det(lambda I - A) = lambda^r + c_1 lambda^(r-1) + ... + c_r`
/// for a scalar matrix.
pub fn charpoly<F: Field>(a: &Matrix<F>) -> Vec<F> {
    assert!(
        a.is_square(),
        "characteristic polynomial of a non-square matrix"
    );
    faddeev_leverrier(a, |t, k| t / F::from_i64(k as i64))
}

/// Coefficients `(c_1, ..., c_r)` of `det(lambda I - psi) = lambda^r + c_1 lambda^(r-1) + ... + c_r`
/// for a matrix of polynomials.
///
/// Exact fields evaluate at integer nodes and interpolate, which keeps the
/// arithmetic scalar; `c_k` has degree at most `k * max_entry_degree`.
/// Floating-point fields run the recurrence over the polynomial ring.
pub fn poly_matrix_charpoly<F: Field, V: Variable>(
    psi: &Matrix<DensePoly<F, V>>,
) -> Vec<DensePoly<F, V>> {
    assert!(
        psi.is_square(),
        "characteristic polynomial of a non-square matrix"
    );
    if !F::EXACT {
        return faddeev_leverrier(psi, |p, k| p.scale(&(F::one() / F::from_i64(k as i64))));
    }
    let r = psi.rows();
    let Some(d) = psi.max_entry_degree() else {
        return vec![DensePoly::zero(); r];
    };
    let nodes: Vec<F> = (0..=(r * d) as i64).map(F::from_i64).collect();
    let values: Vec<Vec<F>> = nodes.iter().map(|z| charpoly(&psi.eval(z))).collect();
    (0..r)
        .map(|k| {
            let count = (k + 1) * d + 1;
            let ys: Vec<F> = values[..count].iter().map(|v| v[k].clone()).collect();
            DensePoly::interpolate(&nodes[..count], &ys)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::rat;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type P = DensePoly<BigRational>;

    fn p(cs: &[i64]) -> P {
        P::from_i64s(cs)
    }

    fn pm(rows: Vec<Vec<P>>) -> PolyMatrix<BigRational> {
        Matrix::from_rows(rows)
    }

    #[test]
    fn charpoly_examples() {
        let z = p(&[0, 1]);
        let zero = P::zero();
        let one = p(&[1]);
        let two = pm(vec![
            vec![zero.clone(), z.clone()],
            vec![one.clone(), zero.clone()],
        ]);
        assert_eq!(poly_matrix_charpoly(&two), vec![P::zero(), p(&[0, -1])]);

        let three = pm(vec![
            vec![zero.clone(), z.clone(), zero.clone()],
            vec![one.clone(), zero.clone(), z.clone()],
            vec![one.clone(), zero.clone(), zero.clone()],
        ]);
        assert_eq!(
            poly_matrix_charpoly(&three),
            vec![P::zero(), p(&[0, -1]), p(&[0, 0, -1])]
        );

        let id = PolyMatrix::<BigRational>::identity(2);
        assert_eq!(poly_matrix_charpoly(&id), vec![p(&[-2]), p(&[1])]);
    }

    #[test]
    fn rank_and_nullspace() {
        let m = Matrix::from_rows(vec![
            vec![rat(1, 1), rat(2, 1), rat(3, 1)],
            vec![rat(2, 1), rat(4, 1), rat(6, 1)],
        ]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let col = Matrix::from_vec(3, 1, v);
            assert!((&m * &col).is_zero());
        }
    }

    #[test]
    fn float_rank_uses_relative_threshold() {
        let m = Matrix::from_rows(vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1e-12, 0.0)],
        ]);
        assert_eq!(m.rank(), 1);
        assert_eq!(numerical_rank(&[0.0, 0.0], 1e-8), 0);
    }

    /// Independent oracle: cofactor expansion of det(lambda I - A) over
    /// polynomials in lambda, for a scalar matrix A.
    fn cofactor_charpoly(a: &Matrix<BigRational>) -> Vec<BigRational> {
        fn det(m: &Matrix<P>) -> P {
            let n = m.rows();
            if n == 1 {
                return m[(0, 0)].clone();
            }
            let mut acc = P::zero();
            for j in 0..n {
                let minor = Matrix::from_fn(n - 1, n - 1, |i, k| {
                    m[(i + 1, if k < j { k } else { k + 1 })].clone()
                });
                let term = &m[(0, j)] * &det(&minor);
                acc = if j % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            acc
        }
        let n = a.rows();
        let lam = Matrix::from_fn(n, n, |i, j| {
            let c = -a[(i, j)].clone();
            if i == j {
                P::new(vec![c, rat(1, 1)])
            } else {
                P::constant(c)
            }
        });
        let d = det(&lam);
        // coefficients of lambda^(n-1) .. lambda^0
        (1..=n).map(|k| d.coeff(n - k)).collect()
    }

    fn arb_poly_matrix(n: usize) -> impl Strategy<Value = PolyMatrix<BigRational>> {
        prop::collection::vec(prop::collection::vec(-4i64..4, 0..3), n * n)
            .prop_map(move |cs| Matrix::from_vec(n, n, cs.iter().map(|c| p(c)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn faddeev_leverrier_matches_cofactor_expansion(
            m in prop_oneof![arb_poly_matrix(2), arb_poly_matrix(3)],
            z0 in -5i64..5,
        ) {
            let cs = poly_matrix_charpoly(&m);
            let zq = rat(z0, 1);
            let expected = cofactor_charpoly(&m.eval(&zq));
            let got: Vec<BigRational> = cs.iter().map(|c| c.eval(&zq)).collect();
            prop_assert_eq!(got, expected);
            prop_assert_eq!(cs, faddeev_leverrier(&m, |p, k| p.scale(&rat(1, k as i64))));
        }
    }
}
