//! Scalars, series and linear algebra over exact fields.

mod coeff;
mod cyc;
mod eps;
pub mod fit;
pub mod linalg;
mod poly;
mod series;
mod trunc;

pub use coeff::{binomial, factorial, fmt_q, parse_q, q, qi, Coeff, Q};
pub use cyc::Cyc;
pub use eps::{Eps, DEFAULT_EPS_DEPTH};
pub use poly::Poly;
pub use series::Series;
pub use trunc::{Rule, TruncSeries};
