use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, Ring};

/// Tag for the variable a polynomial is written in.
pub trait Variable:
    Clone + Copy + PartialEq + Eq + fmt::Debug + Default + Send + Sync + 'static
{
    const NAME: &'static str;
}

/// `u = t^2`, the variable of Poincaré polynomials.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct U;

/// `z`, the affine coordinate on the projective line.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Z;

/// `lambda_fiber`, the fibre coordinate of spectral curves.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Lambda;

impl Variable for U {
    const NAME: &'static str = "u";
}
impl Variable for Z {
    const NAME: &'static str = "z";
}
impl Variable for Lambda {
    const NAME: &'static str = "lambda_fiber";
}

/// Multiplicity of a root; the zero polynomial vanishes to infinite order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum VanishingOrder {
    Finite(usize),
    Infinite,
}

impl VanishingOrder {
    pub fn finite(self) -> Option<usize> {
        match self {
            VanishingOrder::Finite(k) => Some(k),
            VanishingOrder::Infinite => None,
        }
    }
}

impl fmt::Display for VanishingOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VanishingOrder::Finite(k) => write!(f, "{k}"),
            VanishingOrder::Infinite => write!(f, "inf"),
        }
    }
}

/// Dense univariate polynomial, coefficients lowest degree first.
///
/// Trailing zeros are always stripped, so structural equality is polynomial
/// equality and the zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq)]
pub struct DensePoly<F, V = Z> {
    coeffs: Vec<F>,
    _var: PhantomData<V>,
}

impl<F: Field, V: Variable> DensePoly<F, V> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self {
            coeffs,
            _var: PhantomData,
        }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| F::from_i64(c)).collect())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: F, k: usize) -> Self {
        let mut cs = vec![F::zero(); k + 1];
        cs[k] = c;
        Self::new(cs)
    }

    /// The polynomial `var - a`.
    pub fn linear_root(a: F) -> Self {
        Self::new(vec![-a, F::one()])
    }

    /// `prod_j (var - a_j)`.
    pub fn from_roots<'a, I: IntoIterator<Item = &'a F>>(roots: I) -> Self {
        roots.into_iter().fold(Self::constant(F::one()), |acc, a| {
            &acc * &Self::linear_root(a.clone())
        })
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    /// Coefficient of `var^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Multiply by `var^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut cs = vec![F::zero(); k];
        cs.extend(self.coeffs.iter().cloned());
        Self::new(cs)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::constant(F::one()), |acc, _| &acc * self)
    }

    /// Keep only the terms of degree `<= max_deg`.
    pub fn truncate(&self, max_deg: usize) -> Self {
        Self::new(self.coeffs.iter().take(max_deg + 1).cloned().collect())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> DensePoly<G, V> {
        DensePoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&nd| nd >= dd) else {
            return (Self::zero(), self.clone());
        };
        let mut quot = vec![F::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Quotient when `divisor` divides `self` exactly (zero remainder).
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Largest `k` with `(var - a)^k` dividing `self`, by repeated synthetic
    /// division.
    pub fn vanishing_order(&self, a: &F) -> VanishingOrder {
        if self.is_zero() {
            return VanishingOrder::Infinite;
        }
        let mut cur = self.coeffs.clone();
        let mut k = 0;
        loop {
            // synthetic division by (var - a)
            let n = cur.len();
            let mut q = vec![F::zero(); n - 1];
            let mut acc = F::zero();
            for i in (0..n).rev() {
                acc = acc * a.clone() + cur[i].clone();
                if i > 0 {
                    q[i - 1] = acc.clone();
                }
            }
            if !acc.is_zero() {
                return VanishingOrder::Finite(k);
            }
            k += 1;
            cur = q;
        }
    }

    /// Interpolating polynomial through `(xs[k], ys[k])`, by divided differences.
    pub fn interpolate(xs: &[F], ys: &[F]) -> Self {
        assert_eq!(xs.len(), ys.len(), "interpolation needs one value per node");
        let k = xs.len();
        let mut c = ys.to_vec();
        for j in 1..k {
            for i in (j..k).rev() {
                c[i] = (c[i].clone() - c[i - 1].clone()) / (xs[i].clone() - xs[i - j].clone());
            }
        }
        let mut p = Self::zero();
        for i in (0..k).rev() {
            p = &(&p * &Self::linear_root(xs[i].clone())) + &Self::constant(c[i].clone());
        }
        p
    }

    /// Monic greatest common divisor; zero when both inputs are zero.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        match a.leading().cloned() {
            Some(l) => a.scale(&(F::one() / l)),
            None => a,
        }
    }

    /// `self / gcd(self, self')`: same roots, all simple.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides its argument")
    }
}

impl<F: Field, V: Variable> fmt::Debug for DensePoly<F, V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c:?})")?,
                1 => write!(f, "({c:?}){}", V::NAME)?,
                _ => write!(f, "({c:?}){}^{k}", V::NAME)?,
            }
        }
        Ok(())
    }
}

impl<'a, F: Field, V: Variable> Add<&'a DensePoly<F, V>> for &'a DensePoly<F, V> {
    type Output = DensePoly<F, V>;
    fn add(self, o: &DensePoly<F, V>) -> DensePoly<F, V> {
        let n = self.coeffs.len().max(o.coeffs.len());
        DensePoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<'a, F: Field, V: Variable> Sub<&'a DensePoly<F, V>> for &'a DensePoly<F, V> {
    type Output = DensePoly<F, V>;
    fn sub(self, o: &DensePoly<F, V>) -> DensePoly<F, V> {
        let n = self.coeffs.len().max(o.coeffs.len());
        DensePoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<'a, F: Field, V: Variable> Mul<&'a DensePoly<F, V>> for &'a DensePoly<F, V> {
    type Output = DensePoly<F, V>;
    fn mul(self, o: &DensePoly<F, V>) -> DensePoly<F, V> {
        if self.is_zero() || o.is_zero() {
            return DensePoly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        DensePoly::new(out)
    }
}

macro_rules! forward_owned_poly {
    ($tr:ident, $m:ident) => {
        impl<F: Field, V: Variable> $tr for DensePoly<F, V> {
            type Output = DensePoly<F, V>;
            fn $m(self, o: DensePoly<F, V>) -> DensePoly<F, V> {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned_poly!(Add, add);
forward_owned_poly!(Sub, sub);
forward_owned_poly!(Mul, mul);

impl<F: Field, V: Variable> Neg for DensePoly<F, V> {
    type Output = DensePoly<F, V>;
    fn neg(self) -> DensePoly<F, V> {
        DensePoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<F: Field, V: Variable> Ring for DensePoly<F, V> {
    fn zero() -> Self {
        DensePoly::zero()
    }
    fn one() -> Self {
        DensePoly::constant(F::one())
    }
    fn is_zero(&self) -> bool {
        DensePoly::is_zero(self)
    }
    fn from_i64(v: i64) -> Self {
        DensePoly::constant(F::from_i64(v))
    }
}
