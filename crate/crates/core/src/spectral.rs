//! Spectral curves `det(lambda - psi(z)) = 0` of twisted Higgs fields.
//!
//! The twisted field `psi(z) = phi(z) prod_j (z - p_j)` is a polynomial
//! matrix of degree `n - 2`. Its characteristic coefficients are checked
//! against the degree bounds and the vanishing-order bounds
//! `ord_{p_j} c_i >= floor((i + 1) / 2)` at every marked point. A numeric
//! probe looks for singular points of the curve away from the marked fibres.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exactalg::{
    poly_matrix_charpoly, DensePoly, Field, Matrix, PolyMatrix, VanishingOrder, FLOAT_TOL, Z,
};
use crate::hitchin::{charpoly_base, hitchin_component, HiggsField};
use crate::quiver::{min_orbit_check, PointScalar};

/// Higgs field with the poles cleared.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedHiggs<F: Field> {
    pub r: usize,
    pub n: usize,
    pub psi: PolyMatrix<F>,
    pub marked_points: Vec<F>,
}

/// `psi(z) = sum_i phi_i prod_{j != i} (z - p_j)`.
///
/// The `z^(n-1)` coefficient is `sum_i phi_i`; a nonzero value is reported as
/// a degree overflow.
pub fn twist<F: Field>(h: &HiggsField<F>) -> Result<TwistedHiggs<F>> {
    let (r, n) = (h.r, h.n());
    let mut psi = Matrix::<DensePoly<F, Z>>::zeros(r, r);
    for (i, phi) in h.residues.iter().enumerate() {
        let others = DensePoly::from_roots(
            h.marked_points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| p),
        );
        for a in 0..r {
            for b in 0..r {
                psi[(a, b)] = &psi[(a, b)] + &others.scale(&phi[(a, b)]);
            }
        }
    }
    let scale = h.residues.iter().map(Matrix::max_abs).fold(0.0, f64::max);
    let top = n.saturating_sub(1);
    let mut cleaned = psi.clone();
    for a in 0..r {
        for b in 0..r {
            let lead = psi[(a, b)].coeff(top);
            if n >= 2 && !lead.is_negligible(scale, FLOAT_TOL) {
                return Err(Error::DegreeOverflow {
                    component: 1,
                    detail: format!(
                        "entry ({}, {}) has degree {top}: residues do not sum to zero",
                        a + 1,
                        b + 1
                    ),
                });
            }
            if n >= 2 {
                cleaned[(a, b)] = psi[(a, b)].truncate(top - 1);
            }
        }
    }
    Ok(TwistedHiggs {
        r,
        n,
        psi: cleaned,
        marked_points: h.marked_points.clone(),
    })
}

/// Coefficients of `det(lambda - psi) = lambda^r + c_1 lambda^(r-1) + ... + c_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPoly<F: Field> {
    pub r: usize,
    /// Twist degree; `None` for local models that are not twisted fields.
    pub n: Option<usize>,
    /// `c[k]` is `c_{k+1}`.
    pub c: Vec<DensePoly<F, Z>>,
}

impl<F: Field> CharPoly<F> {
    pub fn of_matrix(m: &PolyMatrix<F>) -> Self {
        Self {
            r: m.rows(),
            n: None,
            c: poly_matrix_charpoly(m),
        }
    }

    /// `c_i`, `1 <= i <= r`.
    pub fn coeff(&self, i: usize) -> &DensePoly<F, Z> {
        &self.c[i - 1]
    }

    /// `f(z, lambda)` as polynomials in `z`, indexed by the power of `lambda`.
    pub fn lambda_coeffs(&self) -> Vec<DensePoly<F, Z>> {
        let mut out: Vec<_> = self.c.iter().rev().cloned().collect();
        out.push(DensePoly::constant(F::one()));
        out
    }
}

impl<F: PointScalar> CharPoly<F> {
    pub fn to_json(&self) -> Value {
        let mut c = Map::new();
        for i in 2..=self.r {
            let coeffs = self
                .coeff(i)
                .coeffs()
                .iter()
                .map(PointScalar::to_compact_json)
                .collect();
            c.insert(i.to_string(), Value::Array(coeffs));
        }
        json!({ "n": self.n, "r": self.r, "c": c })
    }
}

/// Characteristic polynomial of the twisted field, with `c_1 = 0` and
/// `deg c_i <= i (n - 2)` enforced.
pub fn spectral_charpoly<F: Field>(t: &TwistedHiggs<F>) -> Result<CharPoly<F>> {
    let mut cp = CharPoly::of_matrix(&t.psi);
    cp.n = Some(t.n);
    let scale = t
        .psi
        .data()
        .iter()
        .flat_map(|p| p.coeffs())
        .map(Field::magnitude)
        .fold(0.0, f64::max);
    if cp.c[0]
        .coeffs()
        .iter()
        .any(|v| !v.is_negligible(scale, FLOAT_TOL))
    {
        return Err(Error::Validation(
            "trace of the twisted field is not identically zero".into(),
        ));
    }
    cp.c[0] = DensePoly::zero();
    for i in 2..=t.r {
        let bound = i * t.n.saturating_sub(2);
        if let Some(d) = cp.coeff(i).degree().filter(|&d| d > bound) {
            return Err(Error::DegreeOverflow {
                component: i,
                detail: format!("c_{i} has degree {d} > {bound}"),
            });
        }
    }
    Ok(cp)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderRow {
    pub i: usize,
    /// Index into the list of points.
    pub point: usize,
    pub order: VanishingOrder,
    pub bound: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderReport {
    pub rows: Vec<OrderRow>,
}

impl OrderReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// CSV with header `i,p,order,bound,pass`; `p` printed via `points`.
    pub fn to_csv<F: std::fmt::Display>(&self, points: &[F]) -> String {
        let mut s = String::from("i,p,order,bound,pass\n");
        for row in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                row.i, points[row.point], row.order, row.bound, row.pass
            ));
        }
        s
    }
}

/// `ord_{p} c_i >= floor((i + 1) / 2)` for `i = 2..r` and every point.
/// Orders are exact only for exact scalars.
pub fn order_check<F: Field>(c: &CharPoly<F>, points: &[F]) -> OrderReport {
    let mut rows = Vec::new();
    for i in 2..=c.r {
        let bound = (i + 1) / 2;
        for (k, p) in points.iter().enumerate() {
            let order = c.coeff(i).vanishing_order(p);
            let pass = match order {
                VanishingOrder::Infinite => true,
                VanishingOrder::Finite(o) => o >= bound,
            };
            rows.push(OrderRow {
                i,
                point: k,
                order,
                bound,
                pass,
            });
        }
    }
    OrderReport { rows }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceConsistency {
    pub consistent: bool,
    /// Smallest `k` at which an identity failed.
    pub offending_k: Option<usize>,
    /// Powers for which the trace coordinate is a polynomial and was compared directly.
    pub trace_powers_checked: Vec<usize>,
}

/// Ties the twisted and untwisted pictures together, exactly:
///
/// - `Tr(psi^k) = g_k prod_j (z - p_j)^(k-1)` for every `k` whose trace
///   coordinate `g_k` is a polynomial;
/// - `c_k(psi) = b_k prod_j (z - p_j)^(k-1)` for `k = 2..r`, where `b_k` is
///   the characteristic-polynomial coordinate computed by interpolation.
///
/// Together with Newton's identities the second family fixes every
/// `Tr(psi^k)`, including the powers whose trace coordinate has a double pole.
pub fn trace_consistency<F: PointScalar>(h: &HiggsField<F>) -> Result<TraceConsistency> {
    let t = twist(h)?;
    let cp = CharPoly::of_matrix(&t.psi);
    consistency_of(h, &t, &cp)
}

fn consistency_of<F: PointScalar>(
    h: &HiggsField<F>,
    t: &TwistedHiggs<F>,
    cp: &CharPoly<F>,
) -> Result<TraceConsistency> {
    let div = h.divisor_poly();
    let scale_of =
        |p: &DensePoly<F, Z>| p.coeffs().iter().map(Field::magnitude).fold(0.0, f64::max);
    let same = |a: &DensePoly<F, Z>, b: &DensePoly<F, Z>| {
        let d = a - b;
        let scale = scale_of(a).max(scale_of(b));
        d.coeffs().iter().all(|v| v.is_negligible(scale, FLOAT_TOL))
    };
    let fail = |k, checked| TraceConsistency {
        consistent: false,
        offending_k: Some(k),
        trace_powers_checked: checked,
    };

    let mut checked = Vec::new();
    let mut power = t.psi.clone();
    if !same(&power.trace(), &DensePoly::zero()) {
        return Ok(fail(1, checked));
    }
    let traces: Vec<(usize, Vec<F>)> = (2..=h.r)
        .filter_map(|k| hitchin_component(h, k).ok().map(|g| (k, g)))
        .collect();
    let top = traces.last().map_or(1, |(k, _)| *k);
    let mut traces = traces.into_iter().peekable();
    for k in 2..=top {
        power = &power * &t.psi;
        if let Some((_, g)) = traces.next_if(|(j, _)| *j == k) {
            let rhs = &DensePoly::new(g) * &div.pow(k - 1);
            if !same(&power.trace(), &rhs) {
                return Ok(fail(k, checked));
            }
            checked.push(k);
        }
    }
    let b = charpoly_base(h)?.as_polys();
    for k in 2..=h.r {
        let rhs = &b[k - 2] * &div.pow(k - 1);
        if !same(cp.coeff(k), &rhs) {
            return Ok(fail(k, checked));
        }
    }
    Ok(TraceConsistency {
        consistent: true,
        offending_k: None,
        trace_powers_checked: checked,
    })
}

/// Everything the spectral module checks at one Higgs field.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport<F: Field> {
    pub charpoly: CharPoly<F>,
    pub orders: OrderReport,
    pub trace: TraceConsistency,
}

pub fn spectral_check<F: PointScalar>(h: &HiggsField<F>) -> Result<SpectralReport<F>> {
    let t = twist(h)?;
    let charpoly = spectral_charpoly(&t)?;
    let orders = order_check(&charpoly, &h.marked_points);
    let trace = consistency_of(h, &t, &charpoly)?;
    Ok(SpectralReport {
        charpoly,
        orders,
        trace,
    })
}

/// A local normal form of a Higgs field near a marked point at `z = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalModelFixture {
    pub name: &'static str,
    pub m: PolyMatrix<BigRational>,
    /// Expected `c_1, ..., c_r` of `det(lambda - M(z))`.
    pub expected: Vec<DensePoly<BigRational, Z>>,
    pub expected_residue_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalModelValidation {
    pub name: &'static str,
    pub charpoly_matches: bool,
    pub residue_square_zero: bool,
    pub residue_rank: usize,
    pub residue_rank_matches: bool,
    pub minimal_orbit: bool,
}

impl LocalModelValidation {
    pub fn ok(&self) -> bool {
        self.charpoly_matches && self.residue_square_zero && self.residue_rank_matches
    }
}

impl LocalModelFixture {
    pub fn residue(&self) -> Matrix<BigRational> {
        self.m.eval(&BigRational::from_integer(0.into()))
    }

    pub fn charpoly(&self) -> CharPoly<BigRational> {
        CharPoly::of_matrix(&self.m)
    }

    pub fn validate(&self) -> LocalModelValidation {
        let res = self.residue();
        let rank = res.rank();
        LocalModelValidation {
            name: self.name,
            charpoly_matches: self.charpoly().c == self.expected,
            residue_square_zero: (&res * &res).is_zero(),
            residue_rank: rank,
            residue_rank_matches: rank == self.expected_residue_rank,
            minimal_orbit: min_orbit_check(&res),
        }
    }
}

type QPoly = DensePoly<BigRational, Z>;

/// Nonzero rational `p/q` with `|p| <= 9`, `1 <= q <= 9`.
fn random_rational(rng: &mut impl Rng) -> BigRational {
    loop {
        let p: i64 = rng.random_range(-9..=9);
        if p != 0 {
            return BigRational::new(p.into(), rng.random_range(1..=9i64).into());
        }
    }
}

/// Random polynomial of degree 0 or 1 with nonzero constant term.
fn random_coefficient_poly(rng: &mut impl Rng) -> QPoly {
    let c0 = random_rational(rng);
    if rng.random_bool(0.5) {
        QPoly::new(vec![c0, random_rational(rng)])
    } else {
        QPoly::constant(c0)
    }
}

/// The rank-3 and rank-4 local models. The rank-4 coefficients `a, b, c` are
/// drawn from `seed`.
pub fn local_models(seed: u64) -> Vec<LocalModelFixture> {
    let z = QPoly::from_i64s(&[0, 1]);
    let one = QPoly::from_i64s(&[1]);
    let o = QPoly::zero();

    let rank3 = LocalModelFixture {
        name: "rank3",
        m: Matrix::from_rows(vec![
            vec![o.clone(), z.clone(), o.clone()],
            vec![one.clone(), o.clone(), z.clone()],
            vec![one.clone(), o.clone(), o.clone()],
        ]),
        expected: vec![
            o.clone(),
            QPoly::from_i64s(&[0, -1]),
            QPoly::from_i64s(&[0, 0, -1]),
        ],
        expected_residue_rank: 1,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b, c) = (
        random_coefficient_poly(&mut rng),
        random_coefficient_poly(&mut rng),
        random_coefficient_poly(&mut rng),
    );
    let z2 = &z * &z;
    let rank4 = LocalModelFixture {
        name: "rank4",
        m: Matrix::from_rows(vec![
            vec![o.clone(), o.clone(), o.clone(), &z * &c],
            vec![one.clone(), o.clone(), o.clone(), &z * &b],
            vec![o.clone(), z.clone(), o.clone(), &z * &a],
            vec![o.clone(), o.clone(), one.clone(), o.clone()],
        ]),
        expected: vec![o, -(&z * &a), -(&z2 * &b), -(&z2 * &c)],
        expected_residue_rank: 2,
    };
    vec![rank3, rank4]
}

/// Sylvester-matrix resultant in `lambda` of two polynomials whose
/// coefficients (indexed by `lambda` power) are polynomials in `z`.
pub fn resultant<F: Field>(f: &[DensePoly<F, Z>], g: &[DensePoly<F, Z>]) -> DensePoly<F, Z> {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    if size == 0 {
        return DensePoly::constant(F::one());
    }
    let mut s = Matrix::<DensePoly<F, Z>>::zeros(size, size);
    for row in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            s[(row, row + k)] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            s[(n + row, row + k)] = c.clone();
        }
    }
    // det = (-1)^size * (constant term of the characteristic polynomial)
    let c = poly_matrix_charpoly(&s).pop().expect("nonempty");
    if size % 2 == 0 {
        c
    } else {
        -c
    }
}

/// Roots of `sum_k coeffs[k] x^k` (lowest degree first) from the companion
/// matrix, polished by Newton steps to `precision`.
pub fn polynomial_roots(coeffs: &[Complex64], precision: f64) -> Vec<Complex64> {
    let mut cs = coeffs.to_vec();
    while cs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
        cs.pop();
    }
    let deg = cs.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = cs[deg];
    let companion = DMatrix::from_fn(deg, deg, |i, j| {
        if j == deg - 1 {
            -cs[i] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let eig = Schur::new(companion)
        .eigenvalues()
        .expect("Schur form of a complex matrix");
    let eval = |x: Complex64| {
        let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for c in cs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    eig.iter()
        .map(|&root| {
            let mut x = root;
            for _ in 0..50 {
                let (p, dp) = eval(x);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                x -= step;
                if step.norm() <= precision * (1.0 + x.norm()) {
                    break;
                }
            }
            x
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    /// A marked point; excluded from the verdict.
    OnDivisor,
    /// Simple zero of the discriminant: a simple branch point, smooth.
    SimpleBranchPoint,
    /// Multiple zero of the discriminant where `f_z` does not vanish.
    SmoothCandidate,
    /// Multiple zero of the discriminant where `f_z` vanishes numerically.
    SingularCandidate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    /// `[re, im]`.
    pub z: [f64; 2],
    /// Vanishing order of the discriminant; exact for marked points and
    /// simple branch points, at least 2 otherwise.
    pub discriminant_order: usize,
    pub lambda_fiber: Option<[f64; 2]>,
    /// `|df/dz|` at the repeated fibre root.
    pub f_z_abs: Option<f64>,
    pub kind: CriticalKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothnessReport {
    pub precision: f64,
    pub discriminant_degree: usize,
    pub points: Vec<CriticalPoint>,
    pub smooth_away_from_divisor: bool,
    pub verdict: String,
}

fn to_c(v: Complex64) -> [f64; 2] {
    [v.re, v.im]
}

fn eval_c(p: &[Complex64], x: Complex64) -> Complex64 {
    p.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

fn derivative_c(p: &[Complex64]) -> Vec<Complex64> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

/// Look for singular points of `f = lambda^r + sum c_i lambda^(r-i)` off the
/// fibres over `divisor`.
///
/// The discriminant `R(z) = Res_lambda(f, f_lambda)` is formed exactly and
/// the factors `(z - p)` of the marked points are divided out. A simple zero
/// of what remains is a simple branch point (one double fibre root, curve
/// smooth there), which is decided exactly. Multiple zeros are located
/// numerically; over each, the repeated fibre root is the root of `f_lambda`
/// minimizing `|f|`, and the point is a singular candidate when `f_z` also
/// vanishes to within `sqrt(precision)` relative to the size of its terms.
/// The probe reports candidates; it is not a proof.
pub fn smoothness_probe<F: Field>(
    c: &CharPoly<F>,
    divisor: &[F],
    precision: f64,
) -> Result<SmoothnessReport> {
    if !F::EXACT {
        return Err(Error::InvalidArgument(
            "the smoothness probe needs exact coefficients".into(),
        ));
    }
    if c.r == 0 {
        return Err(Error::InvalidArgument(
            "empty characteristic polynomial".into(),
        ));
    }
    let f = c.lambda_coeffs();
    let f_lambda: Vec<DensePoly<F, Z>> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, p)| p.scale(&F::from_i64(k as i64)))
        .collect();
    let disc = resultant(&f, &f_lambda);
    if disc.is_zero() {
        return Err(Error::DegenerateDiscriminant);
    }

    let mut points = Vec::new();
    let mut rest = disc.clone();
    for p in divisor {
        let VanishingOrder::Finite(k) = rest.vanishing_order(p) else {
            unreachable!("nonzero")
        };
        if k > 0 {
            rest = rest
                .div_exact(&DensePoly::linear_root(p.clone()).pow(k))
                .expect("exact factor");
            points.push(CriticalPoint {
                z: to_c(p.to_complex()),
                discriminant_order: k,
                lambda_fiber: None,
                f_z_abs: None,
                kind: CriticalKind::OnDivisor,
            });
        }
    }
    let multiple = rest.gcd(&rest.derivative()).squarefree_part();
    let simple = rest
        .squarefree_part()
        .div_exact(&multiple)
        .expect("squarefree parts divide");
    let to_cs = |p: &DensePoly<F, Z>| p.coeffs().iter().map(Field::to_complex).collect::<Vec<_>>();

    for z in polynomial_roots(&to_cs(&simple), precision) {
        points.push(CriticalPoint {
            z: to_c(z),
            discriminant_order: 1,
            lambda_fiber: None,
            f_z_abs: None,
            kind: CriticalKind::SimpleBranchPoint,
        });
    }

    let fc: Vec<Vec<Complex64>> = f.iter().map(to_cs).collect();
    let loose = precision.sqrt();
    for z in polynomial_roots(&to_cs(&multiple), precision) {
        let fib: Vec<Complex64> = fc.iter().map(|p| eval_c(p, z)).collect();
        let lam = polynomial_roots(&derivative_c(&fib), precision)
            .into_iter()
            .min_by(|a, b| eval_c(&fib, *a).norm().total_cmp(&eval_c(&fib, *b).norm()))
            .unwrap_or(Complex64::new(0.0, 0.0));
        // f_z = sum_k c'_k(z) lambda^k, compared against the sum of term sizes
        let terms: Vec<Complex64> = fc
            .iter()
            .enumerate()
            .map(|(k, p)| eval_c(&derivative_c(p), z) * lam.powu(k as u32))
            .collect();
        let f_z: Complex64 = terms.iter().sum();
        let size = terms.iter().map(|t| t.norm()).sum::<f64>();
        let kind = if f_z.norm() <= loose * size.max(f64::MIN_POSITIVE) || size == 0.0 {
            CriticalKind::SingularCandidate
        } else {
            CriticalKind::SmoothCandidate
        };
        points.push(CriticalPoint {
            z: to_c(z),
            discriminant_order: 2,
            lambda_fiber: Some(to_c(lam)),
            f_z_abs: Some(f_z.norm()),
            kind,
        });
    }

    let singular: Vec<String> = points
        .iter()
        .filter(|p| p.kind == CriticalKind::SingularCandidate)
        .map(|p| format!("z = {:.6}{:+.6}i", p.z[0], p.z[1]))
        .collect();
    let smooth = singular.is_empty();
    Ok(SmoothnessReport {
        precision,
        discriminant_degree: disc.degree().unwrap_or(0),
        points,
        smooth_away_from_divisor: smooth,
        verdict: if smooth {
            "no singularities detected away from D".into()
        } else {
            format!("singular candidates: {}", singular.join(", "))
        },
    })
}
