//! Index data of the Betti recursion: partitions of the rank, admissible
//! size tuples, and their combinatorial weights.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactalg::{DensePoly, U};

/// A partition of `r` as a weakly decreasing list of positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the parts; rejects empty input and zero parts.
    pub fn new(mut parts: Vec<usize>) -> Option<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return None;
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Some(Self(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    /// Multiplicities of the distinct part values, largest value first.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Ordered tuple of subset sizes, one per part of a companion partition.
pub type SizeTuple = Vec<usize>;

/// All partitions of `r`, in decreasing lexicographic order.
pub fn partitions(r: usize) -> Vec<Partition> {
    fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            go(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r > 0 {
        go(r, r, &mut Vec::new(), &mut out);
    }
    out
}

/// Iterator over tuples `rho` with `rho_j >= lambda_j` and `sum rho_j <= n`,
/// in lexicographic order. Cloning a fresh iterator restarts the stream.
#[derive(Clone, Debug)]
pub struct AdmissibleRho {
    lower: Vec<usize>,
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for AdmissibleRho {
    type Item = SizeTuple;

    fn next(&mut self) -> Option<SizeTuple> {
        let cur = self.current.take()?;
        // odometer: bump the last coordinate that still has room, reset the tail
        let mut next = cur.clone();
        let mut advanced = false;
        for j in (0..next.len()).rev() {
            next[j] += 1;
            for k in j + 1..next.len() {
                next[k] = self.lower[k];
            }
            if next.iter().sum::<usize>() <= self.n {
                advanced = true;
                break;
            }
        }
        if advanced {
            self.current = Some(next);
        }
        Some(cur)
    }
}

pub fn admissible_rho(lambda: &Partition, n: usize) -> AdmissibleRho {
    let lower = lambda.parts().to_vec();
    let current = (lambda.sum() <= n).then(|| lower.clone());
    AdmissibleRho { lower, n, current }
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `C(n, rho_1) C(n - rho_1, rho_2) ...`, zero when `sum rho > n`.
pub fn multinomial(n: usize, rho: &[usize]) -> BigUint {
    let mut rem = n;
    let mut acc = BigUint::one();
    for &k in rho {
        if k > rem {
            return BigUint::zero();
        }
        acc *= binomial(rem, k);
        rem -= k;
    }
    acc
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Product over distinct part values of (multiplicity)!.
pub fn mult_factorial(lambda: &Partition) -> BigUint {
    lambda
        .multiplicities()
        .into_iter()
        .fold(BigUint::one(), |acc, (_, m)| acc * factorial(m))
}

/// Complex Morse index `beta` and residual torus dimension `s` of the
/// critical set labelled by `(lambda, rho)` at twist `n`.
///
/// Returns `None` if either would be negative, which cannot happen for
/// admissible `rho`.
pub fn morse_data(lambda: &Partition, rho: &[usize], n: usize) -> Option<(usize, usize)> {
    assert_eq!(
        lambda.len(),
        rho.len(),
        "size tuple length must match partition"
    );
    let r = lambda.sum() as i64;
    let n = n as i64;
    let beta = r * (n - r)
        + lambda
            .parts()
            .iter()
            .zip(rho)
            .map(|(&l, &p)| l as i64 * (l as i64 - p as i64))
            .sum::<i64>();
    let s = lambda.len() as i64 + n - 1 - rho.iter().sum::<usize>() as i64;
    (beta >= 0 && s >= 0).then_some((beta as usize, s as usize))
}

/// One labelled critical set of the recursion with all its derived data.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalDatum {
    pub lambda: Partition,
    pub rho: SizeTuple,
    pub n: usize,
    pub beta: usize,
    pub s: usize,
    pub weight: BigUint,
    pub multfact: BigUint,
}

/// Every `(lambda, rho)` with `lambda` a partition of `r` and `rho` admissible at `n`.
pub fn critical_data(r: usize, n: usize) -> impl Iterator<Item = CriticalDatum> {
    partitions(r).into_iter().flat_map(move |lambda| {
        let multfact = mult_factorial(&lambda);
        admissible_rho(&lambda, n).map(move |rho| {
            let (beta, s) = morse_data(&lambda, &rho, n)
                .expect("admissible tuples have nonnegative Morse data");
            CriticalDatum {
                weight: multinomial(n, &rho),
                lambda: lambda.clone(),
                rho,
                n,
                beta,
                s,
                multfact: multfact.clone(),
            }
        })
    })
}

/// Gaussian binomial `[n choose r]_u`, the Poincaré polynomial of the
/// Grassmannian `Gr(r, n)` in `u = t^2`.
pub fn gaussian_binomial(r: usize, n: usize) -> DensePoly<BigRational, U> {
    assert!(r <= n, "gaussian_binomial requires r <= n");
    // [m, k] = [m-1, k-1] + u^k [m-1, k], row by row in m
    let mut row: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let mut c = vec![BigUint::zero(); k * (m - k) + 1];
            if k >= 1 {
                for (i, x) in row[k - 1].iter().enumerate() {
                    c[i] += x;
                }
            }
            if k < m {
                for (i, x) in row[k].iter().enumerate() {
                    c[i + k] += x;
                }
            }
            next.push(c);
        }
        row = next;
    }
    DensePoly::new(
        row[r]
            .iter()
            .map(|c| BigRational::from_integer(c.clone().into()))
            .collect(),
    )
}

/// Number of partitions of `r` by Euler's pentagonal recurrence; used to
/// cross-check [`partitions`].
pub fn partition_count(r: usize) -> u64 {
    let mut p = vec![0i64; r + 1];
    p[0] = 1;
    for m in 1..=r {
        let mut acc = 0i64;
        for k in 1.. {
            let k = k as i64;
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * p[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                acc += sign * p[m - g2];
            }
        }
        p[m] = acc;
    }
    p[r] as u64
}
