//! Overdetermined exact fits of q-series against a finite basis.

use super::linalg::{self, Solve};
use super::{Coeff, Series};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Coefficients `p` with `Σ p_j basis_j = target` through the common order.
/// Requires at least `basis.len() + min_surplus` coefficient equations.
pub fn fit_in_basis<C: Coeff>(target: &Series<C>, basis: &[Series<C>], min_surplus: usize) -> Result<Vec<C>> {
    let order = basis.iter().map(Series::order).fold(target.order(), usize::min);
    let rows = order + 1;
    if rows < basis.len() + min_surplus.max(1) {
        return Err(Error::InsufficientOrder(format!("{rows} equations for {} unknowns, surplus {min_surplus} required", basis.len())));
    }
    let a: Vec<Vec<C>> = (0..rows).map(|d| basis.iter().map(|b| b.coeff(d).clone()).collect()).collect();
    let b: Vec<C> = (0..rows).map(|d| target.coeff(d).clone()).collect();
    linalg::solve(&a, &b).map_err(|e| match e {
        Solve::Underdetermined { rank, unknowns } => Error::InsufficientOrder(format!("rank {rank} < {unknowns} unknowns")),
        Solve::Inconsistent { row } => Error::NoSolution(format!("first failing equation at q^{row}")),
    })
}

/// Exact Laurent polynomial `Σ_{j=lo}^{hi} p_j gen^j` matching `target`; zero
/// coefficients are omitted from the result.
pub fn fit_laurent_in_generator<C: Coeff>(target: &Series<C>, generator: &Series<C>, window: (i64, i64), min_surplus: usize) -> Result<BTreeMap<i64, C>> {
    let (lo, hi) = window;
    let order = target.order().min(generator.order());
    let g = generator.truncate(order);
    let basis: Vec<Series<C>> = (lo..=hi).map(|j| g.pow_int(j)).collect::<Result<_>>()?;
    let p = fit_in_basis(&target.truncate(order), &basis, min_surplus)?;
    Ok((lo..=hi).zip(p).filter(|(_, c)| !c.is_zero()).collect())
}

/// Evaluate `Σ p_j gen^j`.
pub fn eval_laurent<C: Coeff>(p: &BTreeMap<i64, C>, generator: &Series<C>) -> Result<Series<C>> {
    let mut acc = Series::zero(generator.order());
    for (j, c) in p {
        acc = acc.add(&generator.pow_int(*j)?.scale(c));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi, Q};

    fn l(order: usize) -> Series<Q> {
        let base = Series::from_fn(order, |k| match k {
            0 => qi(1),
            1 => qi(-16),
            _ => qi(0),
        });
        base.pow(&q(-1, 4)).unwrap()
    }

    #[test]
    fn recovers_square() {
        let g = l(12);
        let t = g.mul(&g);
        let p = fit_laurent_in_generator(&t, &g, (0, 3), 5).unwrap();
        assert_eq!(p, BTreeMap::from([(2, qi(1))]));
    }

    #[test]
    fn stable_across_orders() {
        let g = l(20);
        let target = eval_laurent(&BTreeMap::from([(-1, q(3, 32)), (0, q(1, 24)), (3, q(-13, 96))]), &g).unwrap();
        let a = fit_laurent_in_generator(&target.truncate(14), &g, (-2, 4), 5).unwrap();
        let b = fit_laurent_in_generator(&target, &g, (-2, 4), 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(&3), Some(&q(-13, 96)));
    }

    #[test]
    fn errors() {
        let g = l(4);
        assert!(matches!(fit_laurent_in_generator(&g, &g, (0, 3), 5), Err(Error::InsufficientOrder(_))));
        let mut t = g.mul(&g);
        t = t.add(&Series::from_fn(4, |k| if k == 4 { qi(1) } else { qi(0) }));
        assert!(matches!(fit_laurent_in_generator(&t, &g, (0, 1), 1), Err(Error::NoSolution(_))));
    }
}
