//! Dense univariate power series in q, known through a fixed order.

use super::{Coeff, Q};
use crate::{Error, Result};
use std::fmt;

/// Coefficients of q⁰..q^order; `len() == order + 1` always.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    c: Vec<C>,
}

impl<C: Coeff> Series<C> {
    pub fn new(mut c: Vec<C>) -> Self {
        if c.is_empty() {
            c.push(C::zero());
        }
        Series { c }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> C) -> Self {
        Series { c: (0..=order).map(f).collect() }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_| C::zero())
    }

    pub fn constant(v: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.c[0] = v;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    /// q itself (or zero when order is 0).
    pub fn var(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.c[1] = C::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeff(&self, d: usize) -> &C {
        &self.c[d]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Series { c: self.c[..=order.min(self.order())].to_vec() }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series { c: self.c.iter().map(f).collect() }
    }

    fn zip(&self, o: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let n = self.order().min(o.order());
        Self::from_fn(n, |d| f(&self.c[d], &o.c[d]))
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, C::add)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, C::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(C::neg)
    }

    pub fn scale(&self, k: &C) -> Self {
        self.map(|x| x.mul(k))
    }

    pub fn scale_q(&self, r: &Q) -> Self {
        self.map(|x| x.scale(r))
    }

    pub fn add_const(&self, k: &C) -> Self {
        let mut s = self.clone();
        s.c[0] = s.c[0].add(k);
        s
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.c.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Series { c: out }
    }

    /// Multiply by q^k, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        Self::from_fn(self.order(), |d| if d >= k { self.c[d - k].clone() } else { C::zero() })
    }

    pub fn inv(&self) -> Result<Self> {
        let a0 = self.c[0].inv().ok_or(Error::NonUnitDivisor)?;
        let n = self.order();
        let mut w: Vec<C> = Vec::with_capacity(n + 1);
        w.push(a0.clone());
        for k in 1..=n {
            let mut s = C::zero();
            for j in 1..=k {
                if !self.c[j].is_zero() {
                    s = s.add(&self.c[j].mul(&w[k - j]));
                }
            }
            w.push(s.mul(&a0).neg());
        }
        Ok(Series { c: w })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow_int(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.order());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// The operator D = q d/dq.
    pub fn d(&self) -> Self {
        Self::from_fn(self.order(), |k| self.c[k].scale(&super::qi(k as i64)))
    }

    /// Inverse of D on series without constant term; the result has zero constant term.
    pub fn d_inv(&self) -> Result<Self> {
        if !self.c[0].is_zero() {
            return Err(Error::NonNormalized("D⁻¹ needs zero constant term".into()));
        }
        Ok(Self::from_fn(self.order(), |k| if k == 0 { C::zero() } else { self.c[k].scale(&super::q(1, k as i64)) }))
    }

    pub fn exp(&self) -> Result<Self> {
        if !self.c[0].is_zero() {
            return Err(Error::NonNormalized("exp needs zero constant term".into()));
        }
        // k E_k = Σ j A_j E_{k-j}
        let n = self.order();
        let mut e = vec![C::one()];
        for k in 1..=n {
            let mut s = C::zero();
            for j in 1..=k {
                if !self.c[j].is_zero() {
                    s = s.add(&self.c[j].scale(&super::qi(j as i64)).mul(&e[k - j]));
                }
            }
            e.push(s.scale(&super::q(1, k as i64)));
        }
        Ok(Series { c: e })
    }

    pub fn log(&self) -> Result<Self> {
        if !self.c[0].is_one() {
            return Err(Error::NonNormalized("log needs constant term 1".into()));
        }
        self.d().div(self)?.d_inv()
    }

    /// `self^r` for constant term 1.
    pub fn pow(&self, r: &Q) -> Result<Self> {
        if !self.c[0].is_one() {
            return Err(Error::NonNormalized("pow needs constant term 1".into()));
        }
        // k y_k = Σ_{j≥1} (r j − (k − j)) a_j y_{k−j}
        let n = self.order();
        let mut y = vec![C::one()];
        for k in 1..=n {
            let mut s = C::zero();
            for j in 1..=k {
                if !self.c[j].is_zero() {
                    let f = r * super::qi(j as i64) - super::qi((k - j) as i64);
                    s = s.add(&self.c[j].mul(&y[k - j]).scale(&f));
                }
            }
            y.push(s.scale(&super::q(1, k as i64)));
        }
        Ok(Series { c: y })
    }

    /// Substitute q ↦ g(q) with g(0) = 0.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.c[0].is_zero() {
            return Err(Error::NonNormalized("inner series must vanish at 0".into()));
        }
        let n = self.order().min(g.order());
        let mut acc = Self::zero(n);
        let mut p = Self::one(n);
        let g = g.truncate(n);
        for k in 0..=n {
            acc = acc.add(&p.scale(&self.c[k]));
            p = p.mul(&g);
        }
        Ok(acc)
    }
}

impl<C: Coeff> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| match k {
                0 => format!("{x}"),
                1 => format!("({x})*q"),
                _ => format!("({x})*q^{k}"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", parts.join(" + "))?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{binomial, q, qi};
    use proptest::prelude::*;

    fn s(v: &[i64]) -> Series<Q> {
        Series::new(v.iter().map(|&x| qi(x)).collect())
    }

    #[test]
    fn geometric_series() {
        let a = s(&[1, -4, 0, 0]);
        assert_eq!(a.inv().unwrap(), s(&[1, 4, 16, 64]));
        assert_eq!(s(&[1, 1]).mul(&s(&[1, -1])), s(&[1, 0]));
        assert_eq!(s(&[0, 1]).inv(), Err(Error::NonUnitDivisor));
    }

    #[test]
    fn binomial_power() {
        // (1 − 16q)^{−1/4}: coefficients C(−1/4, k)(−16)^k.
        let l = s(&[1, -16, 0, 0]).pow(&q(-1, 4)).unwrap();
        assert_eq!(l, s(&[1, 4, 40, 480]));
        for k in 0..4u64 {
            let oracle = binomial(&q(-1, 4), k) * qi(-16).pow(k as i32);
            assert_eq!(l.coeff(k as usize), &oracle);
        }
    }

    #[test]
    fn d_of_log_geometric() {
        let g = s(&[1, -4, 0, 0, 0, 0]);
        // log 1/(1−4q) = Σ 4^k q^k / k, so D of it is Σ 4^k q^k.
        let lg = g.inv().unwrap().log().unwrap();
        let oracle = Series::from_fn(5, |k| if k == 0 { qi(0) } else { qi(4).pow(k as i32) / qi(k as i64) });
        assert_eq!(lg, oracle);
        assert_eq!(lg.d(), s(&[0, 4, 0, 0, 0, 0]).mul(&g.inv().unwrap()));
        assert_eq!(s(&[0, 4, 18]).d(), s(&[0, 4, 36]));
    }

    #[test]
    fn exp_log_small() {
        assert_eq!(s(&[0, 0, 0]).exp().unwrap(), s(&[1, 0, 0]));
        let x = s(&[0, 1, 1, 0, 0]);
        assert_eq!(x.exp().unwrap().log().unwrap(), x);
        assert!(matches!(s(&[2, 1]).log(), Err(Error::NonNormalized(_))));
        assert!(matches!(s(&[1, 1]).exp(), Err(Error::NonNormalized(_))));
    }

    fn arb_series(order: usize) -> impl Strategy<Value = Series<Q>> {
        proptest::collection::vec((-20i64..20, 1i64..6), order + 1).prop_map(|v| Series::new(v.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    fn normalized(order: usize) -> impl Strategy<Value = Series<Q>> {
        arb_series(order).prop_map(|mut s| {
            s.c[0] = qi(1);
            s
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn ring_axioms(a in arb_series(6), b in arb_series(6), c in arb_series(6)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn analytic_round_trips(a in normalized(6), r in (-7i64..7, 1i64..5)) {
            let r = q(r.0, r.1);
            prop_assert_eq!(a.log().unwrap().exp().unwrap(), a.clone());
            prop_assert_eq!(a.pow(&r).unwrap().mul(&a.pow(&-r.clone()).unwrap()), Series::one(6));
            prop_assert_eq!(a.div(&a).unwrap(), Series::one(6));
        }
    }
}
