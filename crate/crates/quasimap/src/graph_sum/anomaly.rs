//! Polynomiality of 𝖥̄₂ in A₂ and the genus-two anomaly identity
//! (1/C₁²)∂𝖥̄₂/∂A₂ = ½𝖥̄_{1,1}² + ½𝖥̄_{1,2}.

use crate::algebra::fit::fit_in_basis;
use crate::algebra::{q, Series, Q};
use crate::{Error, Result};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct AnomalyReport {
    /// `lift[k]` is the L-Laurent coefficient of A₂^k, if a lift was found.
    pub lift: Option<Vec<BTreeMap<i64, Q>>>,
    /// Why no lift was found.
    pub lift_error: Option<String>,
    /// LHS − RHS, when a lift exists.
    pub residual: Option<Series<Q>>,
}

impl AnomalyReport {
    /// Highest A₂-power with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.lift.as_ref().map(|l| l.iter().rposition(|p| !p.is_empty()).unwrap_or(0))
    }

    pub fn holds(&self) -> bool {
        self.residual.as_ref().is_some_and(Series::is_zero)
    }
}

/// Fit `f2` = Σ_{k≤max_deg} p_k(L) A₂^k with p_k supported on `window`, then
/// compare (1/C₁²)∂𝖥̄₂/∂A₂ with ½f11² + ½f12.
#[allow(clippy::too_many_arguments)]
pub fn anomaly_check(
    f2: &Series<Q>,
    f11: &Series<Q>,
    f12: &Series<Q>,
    l: &Series<Q>,
    a2: &Series<Q>,
    c1: &Series<Q>,
    window: (i64, i64),
    max_deg: usize,
    surplus: usize,
) -> Result<AnomalyReport> {
    let n = [f2, f11, f12, l, a2, c1].iter().map(|s| s.order()).min().unwrap_or(0);
    let (l, a2) = (l.truncate(n), a2.truncate(n));
    let lp: Vec<Series<Q>> = (window.0..=window.1).map(|j| l.pow_int(j)).collect::<Result<_>>()?;
    let ap: Vec<Series<Q>> = (0..=max_deg).map(|k| a2.pow_int(k as i64)).collect::<Result<_>>()?;
    let basis: Vec<Series<Q>> = ap.iter().flat_map(|a| lp.iter().map(move |x| x.mul(a))).collect();
    let coeffs = match fit_in_basis(&f2.truncate(n), &basis, surplus) {
        Ok(c) => c,
        Err(e @ (Error::NoSolution(_) | Error::InsufficientOrder(_))) => {
            return Ok(AnomalyReport { lift: None, lift_error: Some(format!("no lift found within degree window: {e}")), residual: None });
        }
        Err(e) => return Err(e),
    };
    let width = lp.len();
    let lift: Vec<BTreeMap<i64, Q>> = (0..=max_deg)
        .map(|k| {
            (window.0..=window.1)
                .zip(&coeffs[k * width..(k + 1) * width])
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(j, c)| (j, c.clone()))
                .collect()
        })
        .collect();
    let mut d = Series::zero(n);
    for (k, p) in lift.iter().enumerate().skip(1) {
        for (j, c) in p {
            let idx = (j - window.0) as usize;
            d = d.add(&lp[idx].mul(&ap[k - 1]).scale_q(&(c * Q::from_integer((k as i64).into()))));
        }
    }
    let c1 = c1.truncate(n);
    let lhs = d.div(&c1.mul(&c1))?;
    let rhs = f11.truncate(n).mul(&f11.truncate(n)).add(&f12.truncate(n)).scale_q(&q(1, 2));
    Ok(AnomalyReport { lift: Some(lift), lift_error: None, residual: Some(lhs.sub(&rhs)) })
}
