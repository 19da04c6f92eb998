use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::QuiverPoint;
use crate::error::{Error, Result};
use crate::exactalg::{GaussianRational, Matrix, Ring};

/// Resampling bound for rank-deficient `x`.
pub const MAX_SAMPLE_ATTEMPTS: usize = 32;

/// Expected dimension `nr - n - r^2 + 1` of the space of `y` solving the
/// complex moment-map equations for a full-rank `x`.
pub fn solution_space_dim(r: usize, n: usize) -> i64 {
    let (r, n) = (r as i64, n as i64);
    n * r - n - r * r + 1
}

/// Exact point of the complex moment-map zero level: small random Gaussian
/// integer `x`, then `y` from the linear system `y_i x_i = 0`, `x y = 0`.
pub fn sample_exact(r: usize, n: usize, seed: u64) -> Result<QuiverPoint<GaussianRational>> {
    if r == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "rank and number of edges must be positive".into(),
        ));
    }
    if solution_space_dim(r, n) < 1 {
        return Err(Error::TrivialFiber);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let x = Matrix::from_fn(r, n, |_, _| {
            GaussianRational::from_ints(rng.random_range(-3..=3), rng.random_range(-1..=1))
        });
        if x.rank() < r {
            continue;
        }
        return sample_exact_with_x(x, &mut rng);
    }
    Err(Error::DegenerateX {
        attempts: MAX_SAMPLE_ATTEMPTS,
    })
}

/// Solve for `y` given `x`. A one-dimensional solution space yields the
/// primitive Gaussian-integer generator; larger spaces a random integer
/// combination of the basis.
pub fn sample_exact_with_x(
    x: Matrix<GaussianRational>,
    rng: &mut impl Rng,
) -> Result<QuiverPoint<GaussianRational>> {
    let (r, n) = (x.rows(), x.cols());
    // unknown y_{i,a} sits at column i * r + a
    let mut rows = Vec::with_capacity(n + r * r);
    for i in 0..n {
        let mut row = vec![GaussianRational::zero(); n * r];
        for a in 0..r {
            row[i * r + a] = x[(a, i)].clone();
        }
        rows.push(row);
    }
    for a in 0..r {
        for b in 0..r {
            let mut row = vec![GaussianRational::zero(); n * r];
            for i in 0..n {
                row[i * r + b] = x[(a, i)].clone();
            }
            rows.push(row);
        }
    }
    let basis = Matrix::from_rows(rows).nullspace();
    let v = match basis.len() {
        0 => return Err(Error::TrivialFiber),
        1 => basis[0].clone(),
        _ => loop {
            // combine primitive generators so entries stay small
            let mut acc = vec![GaussianRational::zero(); n * r];
            for b in basis.iter().map(|b| primitive(b.clone())) {
                let c = GaussianRational::from_i64(rng.random_range(-3..=3));
                for (s, e) in acc.iter_mut().zip(&b) {
                    *s = s.clone() + c.clone() * e.clone();
                }
            }
            if acc.iter().any(|e| !e.is_zero()) {
                break acc;
            }
        },
    };
    let v = primitive(v);
    let y = Matrix::from_vec(n, r, v);
    QuiverPoint::new(x, y)
}

/// The rank-2, four-edge reference point: `x = [[1,0,1,1],[0,1,1,2]]` with
/// `y` rows `(0,-1), (-2,0), (-2,2), (2,-1)` and marked points `1..4`.
pub fn rank2_fixture() -> QuiverPoint<GaussianRational> {
    let m = |rows: &[&[i64]]| {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| GaussianRational::from_i64(v)).collect())
                .collect(),
        )
    };
    let x = m(&[&[1, 0, 1, 1], &[0, 1, 1, 2]]);
    let y = m(&[&[0, -1], &[-2, 0], &[-2, 2], &[2, -1]]);
    QuiverPoint::new(x, y).expect("fixture is well formed")
}

/// Scale to coprime Gaussian-integer coordinates whose first nonzero entry
/// has positive real part (or zero real part and positive imaginary part).
fn primitive(v: Vec<GaussianRational>) -> Vec<GaussianRational> {
    let parts = || v.iter().flat_map(|g| [&g.re, &g.im]);
    let den = parts().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = parts()
        .map(|q| (q * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, k| acc.gcd(k));
    if g.is_zero() {
        return v;
    }
    let lead = ints.iter().find(|k| !k.is_zero()).expect("nonzero");
    let g = if lead.is_negative() { -g } else { g };
    ints.chunks(2)
        .map(|c| {
            GaussianRational::new(
                BigRational::from_integer(&c[0] / &g),
                BigRational::from_integer(&c[1] / &g),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betti::LengthVector;
    use crate::quiver::moment_residual;

    fn gm(rows: Vec<Vec<i64>>) -> Matrix<GaussianRational> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(GaussianRational::from_i64).collect())
                .collect(),
        )
    }

    #[test]
    fn fixture_solution() {
        let x = gm(vec![vec![1, 0, 1, 1], vec![0, 1, 1, 2]]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = sample_exact_with_x(x, &mut rng).unwrap();
        let expected = gm(vec![vec![0, -1], vec![-2, 0], vec![-2, 2], vec![2, -1]]);
        assert!(p.y == expected || p.y == -expected);
    }

    #[test]
    fn samples_satisfy_complex_equations() {
        for (r, n) in [(2, 4), (2, 5), (3, 6), (3, 7), (4, 8)] {
            for seed in 0..3 {
                let p = sample_exact(r, n, seed).unwrap();
                assert!((&p.x * &p.y).is_zero());
                for i in 0..n {
                    assert!(p.edge_pairing(i).is_zero());
                    let phi = p.residue(i);
                    assert!((&phi * &phi).is_zero());
                }
                assert!(!p.y.is_zero());
                let a = LengthVector::from_ints(&vec![1; n]).unwrap();
                assert!(moment_residual(&p, &a).unwrap().complex_zero);
            }
        }
    }

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(
            sample_exact(3, 6, 9).unwrap(),
            sample_exact(3, 6, 9).unwrap()
        );
        assert_ne!(
            sample_exact(3, 6, 9).unwrap(),
            sample_exact(3, 6, 10).unwrap()
        );
    }

    #[test]
    fn trivial_fiber() {
        assert_eq!(solution_space_dim(2, 3), 0);
        assert_eq!(sample_exact(2, 3, 1), Err(Error::TrivialFiber));
        assert!(sample_exact(0, 3, 1).is_err());
    }

    #[test]
    fn zero_y_is_on_level_set() {
        let p =
            QuiverPoint::new(gm(vec![vec![1, 2, 3], vec![0, 1, 5]]), Matrix::zeros(3, 2)).unwrap();
        let a = LengthVector::from_ints(&[1, 1, 1]).unwrap();
        assert!(moment_residual(&p, &a).unwrap().complex_zero);
    }
}
