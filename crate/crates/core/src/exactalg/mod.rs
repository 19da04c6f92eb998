//! Exact arithmetic substrate: rationals, Gaussian rationals, dense
//! polynomials, truncated power series and matrices over them.

pub mod field;
pub mod matrix;
pub mod poly;
pub mod series;

pub use field::{format_rational, parse_rational, rat, Field, GaussianRational, Ring, FLOAT_TOL};
pub use matrix::{charpoly, numerical_rank, poly_matrix_charpoly, Matrix, PolyMatrix};
pub use num_rational::BigRational;
pub use poly::{DensePoly, Lambda, VanishingOrder, Variable, U, Z};
pub use series::{geom_power, series_arith, SeriesOp, TruncatedSeries};
