use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{DensePoly, U};

/// Power series in `u` with exact rational coefficients, known modulo
/// `u^(order+1)`.
///
/// Binary operations between series of different orders truncate to the
/// smaller order.
#[derive(Clone, PartialEq, Debug)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

/// Operation selector for [`series_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(BigRational::one(), 0, order)
    }

    /// `c * u^k`, which is zero when `k > order`.
    pub fn monomial(c: BigRational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        Self { coeffs }
    }

    pub fn from_poly(p: &DensePoly<BigRational, U>, order: usize) -> Self {
        Self::from_coeffs(p.coeffs().iter().take(order + 1).cloned().collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn to_poly(&self) -> DensePoly<BigRational, U> {
        DensePoly::new(self.coeffs.clone())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiply by `u^k`, dropping terms past the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![BigRational::zero(); n];
        for i in 0..n.saturating_sub(k) {
            out[i + k] = self.coeffs[i].clone();
        }
        Self { coeffs: out }
    }

    /// Accumulate `c * u^k * other` into `self` in place.
    pub fn add_scaled_shifted(&mut self, other: &Self, c: &BigRational, k: usize) {
        let n = self.coeffs.len().min(other.coeffs.len());
        for i in 0..n.saturating_sub(k) {
            if !other.coeffs[i].is_zero() {
                self.coeffs[i + k] += &other.coeffs[i] * c;
            }
        }
    }

    fn effective_len(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .map_or(0, |p| p + 1)
    }
}

/// `(1 - u)^(-s) mod u^(order+1)`, i.e. `sum_k C(s-1+k, k) u^k`.
pub fn geom_power(s: usize, order: usize) -> TruncatedSeries {
    if s == 0 {
        return TruncatedSeries::one(order);
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = BigInt::one();
    coeffs.push(BigRational::from_integer(c.clone()));
    for k in 1..=order {
        c = c * BigInt::from(s - 1 + k) / BigInt::from(k);
        coeffs.push(BigRational::from_integer(c.clone()));
    }
    TruncatedSeries { coeffs }
}

pub fn series_arith(a: &TruncatedSeries, b: &TruncatedSeries, op: SeriesOp) -> TruncatedSeries {
    match op {
        SeriesOp::Add => a + b,
        SeriesOp::Sub => a - b,
        SeriesOp::Mul => a * b,
    }
}

impl<'a> Add<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, o: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, o: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<'a> Mul<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, o: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len().min(o.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        let la = self.effective_len().min(n);
        let lb = o.effective_len().min(n);
        for i in 0..la {
            let a = &self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for j in 0..lb.min(n - i) {
                let b = &o.coeffs[j];
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::rat;
    use proptest::prelude::*;

    fn s(cs: &[i64], order: usize) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(cs.iter().map(|&c| rat(c, 1)).collect(), order)
    }

    #[test]
    fn geom_power_examples() {
        assert_eq!(geom_power(0, 3), s(&[1], 3));
        assert_eq!(geom_power(1, 3), s(&[1, 1, 1, 1], 3));
        assert_eq!(geom_power(2, 2), s(&[1, 2, 3], 2));
    }

    #[test]
    fn arith_examples() {
        let a = s(&[1, 1], 2);
        let b = s(&[1, -1], 2);
        assert_eq!(series_arith(&a, &b, SeriesOp::Mul), s(&[1, 0, -1], 2));
        assert_eq!(
            series_arith(&a, &TruncatedSeries::zero(2), SeriesOp::Add),
            a
        );
        assert_eq!(&s(&[1, -1], 5) * &geom_power(1, 5), TruncatedSeries::one(5));
        assert_eq!(
            series_arith(&a, &a, SeriesOp::Sub),
            TruncatedSeries::zero(2)
        );
    }

    #[test]
    fn mixed_orders_truncate_to_smaller() {
        let a = s(&[1, 1, 1, 1], 3);
        let b = s(&[1, 1], 1);
        assert_eq!((&a * &b).order(), 1);
        assert_eq!(&a + &b, s(&[2, 2], 1));
    }

    #[test]
    fn shift_drops_overflow() {
        assert_eq!(s(&[1, 2, 3], 2).shift(1), s(&[0, 1, 2], 2));
        assert_eq!(s(&[1], 2).shift(5), TruncatedSeries::zero(2));
    }

    fn arb_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec(-9i64..9, order + 1).prop_map(move |v| s(&v, order))
    }

    proptest! {
        #[test]
        fn series_ring_laws(a in arb_series(6), b in arb_series(6), c in arb_series(6)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }
    }

    #[test]
    fn geom_power_inverts_binomial_power() {
        for order in [0usize, 1, 7, 23, 50] {
            for sp in 0..=20usize {
                let one_minus_u = s(&[1, -1], order);
                let mut prod = geom_power(sp, order);
                for _ in 0..sp {
                    prod = &prod * &one_minus_u;
                }
                assert_eq!(prod, TruncatedSeries::one(order), "s={sp} order={order}");
            }
        }
    }
}
