//! Poincaré polynomials of hyperpolygon spaces.
//!
//! Everything is computed in `u = t^2`. The recursion expresses
//! `P(Gr(r, n)) / (1 - u)^(n - 1)` as a sum over critical sets labelled by a
//! partition `lambda` of `r` and an admissible size tuple `rho`; the term with
//! `lambda = (r)`, `rho = (n)` is `P(r, n)` itself, so solving for it gives a
//! recursion in `(r, n)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::{gaussian_binomial, mult_factorial, partitions, Partition};
use crate::error::{Error, Result};
use crate::exactalg::{geom_power, parse_rational, DensePoly, TruncatedSeries, U};

/// Extra u-degrees carried past the expected top degree. A wrong base-case
/// convention shows up as nonzero coefficients in this band.
pub const DEFAULT_MARGIN: usize = 5;

/// Poincaré polynomial of `X^r_n` in `u = t^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoincarePoly {
    pub r: usize,
    pub n: usize,
    pub poly: DensePoly<BigRational, U>,
}

impl PoincarePoly {
    /// Coefficients as integers, or `None` if some coefficient is fractional.
    pub fn coefficients(&self) -> Option<Vec<BigInt>> {
        self.poly
            .coeffs()
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// `(t-degree, Betti number)` pairs, including zero Betti numbers below
    /// the top degree.
    pub fn betti_by_t_degree(&self) -> Vec<(usize, BigRational)> {
        self.poly
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| (2 * k, c.clone()))
            .collect()
    }

    pub fn is_betti_sane(&self) -> bool {
        let Some(cs) = self.coefficients() else {
            return false;
        };
        cs.first().is_some_and(|c| c.is_one()) && cs.iter().all(|c| !c.is_negative())
    }
}

/// JSON form `{"r": .., "n": .., "coeffs_u": [..]}`.
#[derive(Serialize)]
pub struct PoincareJson {
    pub r: usize,
    pub n: usize,
    pub coeffs_u: Vec<serde_json::Number>,
}

impl From<&PoincarePoly> for PoincareJson {
    fn from(p: &PoincarePoly) -> Self {
        let coeffs_u = p
            .poly
            .coeffs()
            .iter()
            .map(|c| {
                let s = if c.is_integer() {
                    c.to_integer().to_string()
                } else {
                    format!("{c}")
                };
                s.parse().unwrap_or_else(|_| serde_json::Number::from(0))
            })
            .collect();
        PoincareJson {
            r: p.r,
            n: p.n,
            coeffs_u,
        }
    }
}

/// Half the real dimension, `(r - 1)(n - r - 1)`, the expected top u-degree.
pub fn expected_degree(r: usize, n: usize) -> Option<usize> {
    (r >= 1 && n > r).then(|| (r - 1) * (n - r - 1))
}

/// Memoized solver for the recursion.
///
/// The cache maps `(r, n)` to the solved polynomial. Concurrent callers that
/// race on the same key compute identical values, so last-writer-wins is fine.
pub struct BettiEngine {
    margin: usize,
    cache: Mutex<HashMap<(usize, usize), Arc<PoincarePoly>>>,
}

impl Default for BettiEngine {
    fn default() -> Self {
        Self::new(DEFAULT_MARGIN)
    }
}

/// Contributions grouped by the nontrivial factors of the product.
type ProductKey = Vec<(usize, usize)>;

impl BettiEngine {
    pub fn new(margin: usize) -> Self {
        Self {
            margin,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    fn check_args(r: usize, n: usize) -> Result<()> {
        if r < 1 || n < 1 {
            return Err(Error::InvalidArgument(format!(
                "rank and twist must be >= 1 (got r = {r}, n = {n})"
            )));
        }
        Ok(())
    }

    /// Working truncation order for `(r, n)`.
    pub fn truncation_order(&self, r: usize, n: usize) -> usize {
        expected_degree(r, n).unwrap_or(0) + self.margin
    }

    pub fn poincare(&self, r: usize, n: usize) -> Result<Arc<PoincarePoly>> {
        Self::check_args(r, n)?;
        if let Some(p) = self.cache.lock().unwrap().get(&(r, n)) {
            return Ok(p.clone());
        }
        let poly = if r == 1 {
            DensePoly::constant(BigRational::one())
        } else if n <= r {
            DensePoly::zero()
        } else {
            self.solve_series(r, n)?.to_poly()
        };
        let p = Arc::new(PoincarePoly { r, n, poly });
        self.cache.lock().unwrap().insert((r, n), p.clone());
        Ok(p)
    }

    /// The solved series for `P(r, n)` modulo `u^(N+1)`, before conversion to
    /// a polynomial. Requires `r >= 2` and `n >= r + 1`.
    pub fn poincare_series(&self, r: usize, n: usize) -> Result<TruncatedSeries> {
        Self::check_args(r, n)?;
        if r < 2 || n <= r {
            return Err(Error::InvalidArgument(format!(
                "series solve needs r >= 2 and n > r (got r = {r}, n = {n})"
            )));
        }
        self.solve_series(r, n)
    }

    fn solve_series(&self, r: usize, n: usize) -> Result<TruncatedSeries> {
        let order = self.truncation_order(r, n);
        let lhs = grassmannian_side(r, n, order);
        let rest = self.critical_sum(r, n, order, false)?;
        Ok(&lhs - &rest)
    }

    /// Sum over critical sets of `u^beta (1-u)^(-s) C(n; rho) / m(lambda)! * prod P(lambda_j, rho_j)`
    /// mod `u^(order+1)`, optionally including the `(lambda, rho) = ((r), (n))` term.
    ///
    /// Accumulated over the integers scaled by `r!` (every `m(lambda)!`
    /// divides it) and divided out at the end.
    fn critical_sum(
        &self,
        r: usize,
        n: usize,
        order: usize,
        include_top: bool,
    ) -> Result<TruncatedSeries> {
        let scale: BigInt = (1..=r).map(BigInt::from).product();
        let grouped = group_critical_sets(r, n, order, include_top, &scale);

        // every factor must be available before the parallel product pass
        let mut factors: HashMap<(usize, usize), Vec<BigInt>> = HashMap::new();
        for key in grouped.keys() {
            for &(l, k) in key {
                if let std::collections::hash_map::Entry::Vacant(e) = factors.entry((l, k)) {
                    e.insert(integer_coeffs(&self.poincare(l, k)?.poly)?);
                }
            }
        }

        let max_s = grouped
            .values()
            .flat_map(|m| m.keys().map(|&(_, s)| s))
            .max()
            .unwrap_or(0);
        let geom: Vec<Vec<BigInt>> = (0..=max_s).map(|s| int_geom_power(s, order)).collect();

        let terms: Vec<Vec<BigInt>> = grouped
            .par_iter()
            .map(|(key, weights)| {
                let mut w = vec![BigInt::zero(); order + 1];
                for (&(beta, s), c) in weights {
                    for (i, g) in geom[s].iter().take(order + 1 - beta).enumerate() {
                        w[i + beta] += g * c;
                    }
                }
                key.iter()
                    .fold(w, |acc, lk| int_mul_trunc(&acc, &factors[lk], order))
            })
            .collect();

        let mut total = vec![BigInt::zero(); order + 1];
        for t in &terms {
            for (a, b) in total.iter_mut().zip(t) {
                *a += b;
            }
        }
        Ok(TruncatedSeries::from_coeffs(
            total
                .into_iter()
                .map(|c| BigRational::new(c, scale.clone()))
                .collect(),
            order,
        ))
    }

    /// Left side minus right side of the recursion with every term taken from
    /// the solved polynomials; identically zero when the solution is consistent.
    pub fn recursion_residual(&self, r: usize, n: usize, margin: usize) -> Result<TruncatedSeries> {
        Self::check_args(r, n)?;
        if r >= 2 && n <= r {
            return Err(Error::InvalidArgument(format!(
                "residual needs n > r for r >= 2 (got r = {r}, n = {n})"
            )));
        }
        let order = expected_degree(r, n).unwrap_or(0) + margin;
        let lhs = grassmannian_side(r, n, order);
        let rhs = self.critical_sum(r, n, order, true)?;
        Ok(&lhs - &rhs)
    }
}

/// `P(Gr(r, n)) (1 - u)^(-(n - 1))`.
fn grassmannian_side(r: usize, n: usize, order: usize) -> TruncatedSeries {
    &TruncatedSeries::from_poly(&gaussian_binomial(r, n), order) * &geom_power(n - 1, order)
}

/// Walk every `(lambda, rho)` and bucket its weight by the product of
/// nontrivial factors and by `(beta, s)`. Factors `P(1, k) = 1` are dropped
/// from the key; tuples containing a vanishing factor are skipped.
fn group_critical_sets(
    r: usize,
    n: usize,
    order: usize,
    include_top: bool,
    scale: &BigInt,
) -> HashMap<ProductKey, BTreeMap<(usize, usize), BigInt>> {
    let pascal = pascal_table(n);
    let mut out: HashMap<ProductKey, BTreeMap<(usize, usize), BigInt>> = HashMap::new();

    for lambda in partitions(r) {
        let mult =
            BigUint::try_from(scale / BigInt::from(mult_factorial(&lambda))).expect("positive");
        let mut rho = Vec::with_capacity(lambda.len());
        let mut visit = |rho: &[usize], weight: &BigUint| {
            if !include_top && lambda.len() == 1 && rho[0] == n {
                return;
            }
            let beta_s = crate::combinat::morse_data(&lambda, rho, n).expect("admissible");
            if beta_s.0 > order {
                return;
            }
            let mut key: ProductKey = Vec::new();
            for (&l, &k) in lambda.parts().iter().zip(rho) {
                if l >= 2 {
                    if k <= l {
                        return;
                    }
                    key.push((l, k));
                }
            }
            key.sort_unstable();
            *out.entry(key)
                .or_default()
                .entry(beta_s)
                .or_insert_with(BigInt::zero) += BigInt::from(weight * &mult);
        };
        enumerate_rho(
            &lambda,
            n,
            &pascal,
            0,
            n,
            &BigUint::one(),
            &mut rho,
            &mut visit,
        );
    }
    out
}

/// Depth-first enumeration of admissible tuples carrying the running
/// multinomial `C(n, rho_1) C(n - rho_1, rho_2) ...`.
#[allow(clippy::too_many_arguments)]
fn enumerate_rho(
    lambda: &Partition,
    n: usize,
    pascal: &[Vec<BigUint>],
    j: usize,
    remaining: usize,
    weight: &BigUint,
    rho: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize], &BigUint),
) {
    let parts = lambda.parts();
    if j == parts.len() {
        visit(rho, weight);
        return;
    }
    // room must remain for the lower bounds of the later parts
    let reserve: usize = parts[j + 1..].iter().sum();
    if remaining < parts[j] + reserve {
        return;
    }
    for k in parts[j]..=remaining - reserve {
        rho.push(k);
        let w = weight * &pascal[remaining][k];
        enumerate_rho(lambda, n, pascal, j + 1, remaining - k, &w, rho, visit);
        rho.pop();
    }
}

fn integer_coeffs(p: &DensePoly<BigRational, U>) -> Result<Vec<BigInt>> {
    p.coeffs()
        .iter()
        .map(|c| {
            c.is_integer()
                .then(|| c.to_integer())
                .ok_or_else(|| Error::Validation(format!("non-integral Betti coefficient {c}")))
        })
        .collect()
}

fn int_geom_power(s: usize, order: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(order + 1);
    let mut c = BigInt::one();
    out.push(c.clone());
    for k in 1..=order {
        c = if s == 0 {
            BigInt::zero()
        } else {
            c * BigInt::from(s - 1 + k) / BigInt::from(k)
        };
        out.push(c.clone());
    }
    out
}

/// Product of two coefficient vectors, truncated to degree `order`.
fn int_mul_trunc(a: &[BigInt], b: &[BigInt], order: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn pascal_table(n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut row = vec![BigUint::one(); m + 1];
        for k in 1..m {
            row[k] = &rows[m - 1][k - 1] + &rows[m - 1][k];
        }
        rows.push(row);
    }
    rows
}

fn global_engine() -> &'static BettiEngine {
    static ENGINE: OnceLock<BettiEngine> = OnceLock::new();
    ENGINE.get_or_init(BettiEngine::default)
}

/// `P(X^r_n)` with the default margin, memoized process-wide.
pub fn poincare(r: usize, n: usize) -> Result<PoincarePoly> {
    global_engine().poincare(r, n).map(|p| (*p).clone())
}

pub fn recursion_residual(r: usize, n: usize, margin: usize) -> Result<TruncatedSeries> {
    global_engine().recursion_residual(r, n, margin)
}

/// Rank-2 closed form: the recursion written out with explicit sums, kept
/// independent of the general engine so the two can be compared.
pub fn poincare_rank2(n: usize) -> Result<PoincarePoly> {
    poincare_rank2_with_margin(n, DEFAULT_MARGIN)
}

pub fn poincare_rank2_with_margin(n: usize, margin: usize) -> Result<PoincarePoly> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "rank-2 formula needs n >= 3 (got {n})"
        )));
    }
    let mut memo: HashMap<usize, DensePoly<BigRational, U>> = HashMap::new();
    let poly = rank2_series(n, margin, &mut memo).to_poly();
    Ok(PoincarePoly { r: 2, n, poly })
}

fn rank2_series(
    n: usize,
    margin: usize,
    memo: &mut HashMap<usize, DensePoly<BigRational, U>>,
) -> TruncatedSeries {
    let order = (n - 3) + margin;
    let int = |v: u128| BigRational::from_integer(BigInt::from(v));
    let choose = |a: usize, b: usize| -> u128 {
        if b > a {
            return 0;
        }
        (0..b).fold(1u128, |acc, i| acc * (a - i) as u128 / (i as u128 + 1))
    };

    // P(Gr(2, n)) = (1 - u^n)(1 - u^(n-1)) / ((1 - u)(1 - u^2))
    let mut gr = TruncatedSeries::one(order);
    gr = &gr - &TruncatedSeries::monomial(BigRational::one(), n, order);
    let second =
        &TruncatedSeries::one(order) - &TruncatedSeries::monomial(BigRational::one(), n - 1, order);
    gr = &gr * &second;
    gr = &gr * &geom_power(1, order);
    let inv_one_minus_u2 = TruncatedSeries::from_coeffs(
        (0..=order)
            .map(|k| {
                if k % 2 == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect(),
        order,
    );
    gr = &gr * &inv_one_minus_u2;
    let mut total = &gr * &geom_power(n - 1, order);

    for k in 3..n {
        let pk = match memo.get(&k) {
            Some(p) => p.clone(),
            None => {
                let p = rank2_series(k, margin, memo).to_poly();
                memo.insert(k, p.clone());
                p
            }
        };
        let mut term = TruncatedSeries::monomial(int(choose(n, k)), 2 * (n - k), order);
        term = &term * &geom_power(n - k, order);
        term = &term * &TruncatedSeries::from_poly(&pk, order);
        total = &total - &term;
    }

    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for k1 in 1..n {
        for k2 in 1..=(n - k1) {
            let deg = 2 * n - 2 - k1 - k2;
            let c = int(choose(n, k1) * choose(n - k1, k2)) * &half;
            let term =
                &TruncatedSeries::monomial(c, deg, order) * &geom_power(n + 1 - k1 - k2, order);
            total = &total - &term;
        }
    }
    total
}

/// Positive rational length vector.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthVector(Vec<BigRational>);

impl LengthVector {
    pub fn new(entries: Vec<BigRational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("length vector is empty".into()));
        }
        if let Some(bad) = entries.iter().find(|a| !a.is_positive()) {
            return Err(Error::InvalidArgument(format!(
                "length vector entries must be positive (got {bad})"
            )));
        }
        Ok(Self(entries))
    }

    /// Parse a comma-separated list of `p/q` or integer entries.
    pub fn parse(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn from_ints(v: &[i64]) -> Result<Self> {
        Self::new(
            v.iter()
                .map(|&a| BigRational::from_integer(BigInt::from(a)))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> BigRational {
        self.0.iter().fold(BigRational::zero(), |acc, a| acc + a)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.0
            .iter()
            .map(|a| a.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub rprime: usize,
    /// One-based indices.
    #[serde(rename = "S")]
    pub subset: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityReport {
    pub generic: bool,
    pub witness: Option<Witness>,
}

/// Largest `n` accepted by the exhaustive subset scan.
pub const MAX_GENERICITY_N: usize = 24;

/// Exhaustive check of `r' * alpha_[n] - r * alpha_S != 0` over
/// `0 <= r' <= r` and proper subsets `S` with `(r' - 1)(#S - r' - 1) >= 0`,
/// skipping `(r', S) = (0, {})`. Subsets are scanned in bitmask order.
pub fn genericity_check(r: usize, alpha: &LengthVector) -> Result<GenericityReport> {
    let n = alpha.len();
    if r < 1 {
        return Err(Error::InvalidArgument("rank must be >= 1".into()));
    }
    if n > MAX_GENERICITY_N {
        return Err(Error::InvalidArgument(format!(
            "genericity scan supports n <= {MAX_GENERICITY_N}"
        )));
    }
    let total = alpha.total();
    let full: u64 = (1u64 << n) - 1;
    let rr = BigRational::from_integer(BigInt::from(r));
    for rprime in 0..=r {
        let lhs = BigRational::from_integer(BigInt::from(rprime)) * &total;
        for mask in 0..full {
            if rprime == 0 && mask == 0 {
                continue;
            }
            let size = mask.count_ones() as i64;
            let rp = rprime as i64;
            if (rp - 1) * (size - rp - 1) < 0 {
                continue;
            }
            let alpha_s = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .fold(BigRational::zero(), |acc, i| acc + &alpha.entries()[i]);
            if lhs == &rr * &alpha_s {
                let subset = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| i + 1)
                    .collect();
                return Ok(GenericityReport {
                    generic: false,
                    witness: Some(Witness { rprime, subset }),
                });
            }
        }
    }
    Ok(GenericityReport {
        generic: true,
        witness: None,
    })
}

/// `(dim_C X, dim B)` with `dim X = 2(r-1)(n-r-1)` and
/// `dim B = sum_{i=2}^{r} (n - 2i + 1)`.
pub fn dimensions(r: usize, n: usize) -> Result<(i64, i64)> {
    if r < 2 || n <= r {
        return Err(Error::InvalidArgument(format!(
            "dimensions need r >= 2 and n > r (got r = {r}, n = {n})"
        )));
    }
    let (ri, ni) = (r as i64, n as i64);
    let dim_x = 2 * (ri - 1) * (ni - ri - 1);
    let dim_b = (2..=ri).map(|i| ni - 2 * i + 1).sum();
    Ok((dim_x, dim_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn u_poly(cs: &[i64]) -> DensePoly<BigRational, U> {
        DensePoly::from_i64s(cs)
    }

    #[test]
    fn poincare_fixtures() {
        assert_eq!(poincare(2, 4).unwrap().poly, u_poly(&[1, 4]));
        assert_eq!(poincare(2, 3).unwrap().poly, u_poly(&[1]));
        assert_eq!(poincare(1, 7).unwrap().poly, u_poly(&[1]));
        assert!(poincare(3, 3).unwrap().poly.is_zero());
        assert!(poincare(0, 4).is_err());
        assert!(poincare(2, 0).is_err());
    }

    #[test]
    fn rank2_formula_fixtures() {
        assert_eq!(poincare_rank2(3).unwrap().poly, u_poly(&[1]));
        assert_eq!(poincare_rank2(4).unwrap().poly, u_poly(&[1, 4]));
        assert_eq!(poincare_rank2(5).unwrap(), poincare(2, 5).unwrap());
        assert!(poincare_rank2(2).is_err());
    }

    #[test]
    fn residual_examples() {
        assert!(recursion_residual(2, 5, 5).unwrap().is_zero());
        assert!(recursion_residual(1, 3, 5).unwrap().is_zero());
        assert!(recursion_residual(3, 6, 5).unwrap().is_zero());
    }

    /// Rank 1 in closed form: sum_k C(n,k) u^(n-k) / (1-u)^(n-k) = P(P^(n-1)) / (1-u)^(n-1).
    #[test]
    fn rank_one_identity_holds_independently() {
        for n in 1..10usize {
            let order = 12;
            let mut rhs = TruncatedSeries::zero(order);
            for k in 1..=n {
                let c = BigRational::from_integer(BigInt::from(crate::combinat::binomial(n, k)));
                let t = &TruncatedSeries::monomial(c, n - k, order) * &geom_power(n - k, order);
                rhs = &rhs + &t;
            }
            let proj = TruncatedSeries::from_coeffs(vec![BigRational::one(); n], order);
            let lhs = &proj * &geom_power(n - 1, order);
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn genericity_examples() {
        let a = LengthVector::from_ints(&[1, 1, 1, 1]).unwrap();
        assert_eq!(
            genericity_check(2, &a).unwrap(),
            GenericityReport {
                generic: false,
                witness: Some(Witness {
                    rprime: 1,
                    subset: vec![1, 2]
                })
            }
        );
        let a = LengthVector::from_ints(&[1, 1, 1, 2]).unwrap();
        assert!(genericity_check(2, &a).unwrap().generic);
        let a = LengthVector::from_ints(&[3, 1, 1, 1]).unwrap();
        assert_eq!(
            genericity_check(2, &a).unwrap().witness,
            Some(Witness {
                rprime: 1,
                subset: vec![1]
            })
        );
        assert!(LengthVector::from_ints(&[1, 0, 2]).is_err());
        assert!(LengthVector::new(vec![rat(-1, 2)]).is_err());
    }

    #[test]
    fn witness_satisfies_its_defining_equation() {
        for v in [
            [1i64, 2, 3, 4, 5, 6],
            [2, 2, 2, 3, 3, 6],
            [1, 1, 1, 1, 1, 1],
        ] {
            let a = LengthVector::from_ints(&v).unwrap();
            for r in 2..=4 {
                let rep = genericity_check(r, &a).unwrap();
                if let Some(w) = rep.witness {
                    let alpha_s: i64 = w.subset.iter().map(|&i| v[i - 1]).sum();
                    let total: i64 = v.iter().sum();
                    assert_eq!(w.rprime as i64 * total, r as i64 * alpha_s);
                    let (rp, s) = (w.rprime as i64, w.subset.len() as i64);
                    assert!((rp - 1) * (s - rp - 1) >= 0);
                    assert!(w.subset.len() < v.len());
                }
            }
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimensions(3, 6).unwrap(), (8, 4));
        assert_eq!(dimensions(2, 4).unwrap(), (2, 1));
        assert_eq!(dimensions(5, 6).unwrap(), (0, 0));
        assert!(dimensions(3, 3).is_err());
        for r in 2..50 {
            for n in r + 1..=50 {
                let (x, b) = dimensions(r, n).unwrap();
                assert_eq!(2 * b, x);
                assert_eq!(b, ((r - 1) * (n - r - 1)) as i64);
            }
        }
    }

    #[test]
    fn json_shape() {
        let p = poincare(2, 4).unwrap();
        let s = serde_json::to_string(&PoincareJson::from(&p)).unwrap();
        assert_eq!(s, r#"{"r":2,"n":4,"coeffs_u":[1,4]}"#);
    }
}
