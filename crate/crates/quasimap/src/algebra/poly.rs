//! Dense univariate polynomials, normally in z.

use super::{Coeff, Q};
use crate::{Error, Result};
use std::fmt;

/// Coefficients low to high with no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C> {
    c: Vec<C>,
}

impl<C: Coeff> Poly<C> {
    pub fn new(mut c: Vec<C>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(v: C) -> Self {
        Self::new(vec![v])
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    /// `a + b·z`.
    pub fn linear(a: C, b: C) -> Self {
        Self::new(vec![a, b])
    }

    pub fn monomial(v: C, k: usize) -> Self {
        let mut c = vec![C::zero(); k + 1];
        c[k] = v;
        Self::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> C {
        self.c.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn lead(&self) -> Option<&C> {
        self.c.last()
    }

    /// Largest k with z^k dividing self.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.c.iter().map(f).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect())
    }

    pub fn neg(&self) -> Self {
        self.map(C::neg)
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::new(self.c.iter().map(|x| x.mul(k)).collect())
    }

    pub fn scale_q(&self, r: &Q) -> Self {
        Self::new(self.c.iter().map(|x| x.scale(r)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Multiply by z^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![C::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn eval(&self, x: &C) -> C {
        self.c.iter().rev().fold(C::zero(), |acc, a| acc.mul(x).add(a))
    }

    /// Composition `self(g(z))`.
    pub fn compose(&self, g: &Self) -> Self {
        self.c.iter().rev().fold(Self::zero(), |acc, a| acc.mul(g).add(&Self::constant(a.clone())))
    }

    /// Euclidean division; the divisor's leading coefficient must be a unit.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let lead_inv = d.lead().and_then(C::inv).ok_or(Error::NonUnitDivisor)?;
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quo = vec![C::zero(); r.len() - dd];
        for i in (0..quo.len()).rev() {
            let t = r[i + dd].mul(&lead_inv);
            if !t.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[i + j] = r[i + j].sub(&t.mul(b));
                }
            }
            quo[i] = t;
        }
        r.truncate(dd);
        Ok((Self::new(quo), Self::new(r)))
    }

    /// Laurent expansion of `self / den` at z = 0: returns `(v, c)` with
    /// `self/den = Σ_k c[k] z^{v+k}` for `v + k <= hi`.
    pub fn laurent(&self, den: &Self, hi: i64) -> Result<(i64, Vec<C>)> {
        let vd = den.valuation().ok_or(Error::NonUnitDivisor)?;
        let Some(vn) = self.valuation() else {
            return Ok((hi + 1, Vec::new()));
        };
        let v = vn as i64 - vd as i64;
        let len = (hi - v + 1).max(0) as usize;
        let a = &self.c[vn..];
        let b = &den.c[vd..];
        let b0 = b[0].inv().ok_or(Error::NonUnitDivisor)?;
        let mut out: Vec<C> = Vec::with_capacity(len);
        for k in 0..len {
            let mut s = a.get(k).cloned().unwrap_or_else(C::zero);
            for j in 1..=k.min(b.len() - 1) {
                if !b[j].is_zero() {
                    s = s.sub(&b[j].mul(&out[k - j]));
                }
            }
            out.push(s.mul(&b0));
        }
        Ok((v, out))
    }
}

impl<C: Coeff> Poly<C> {
    /// Coefficients in reverse order: z^deg · p(1/z).
    pub fn reversed(&self) -> Self {
        Self::new(self.c.iter().rev().cloned().collect())
    }

    /// Expansion of `self / den` at z = ∞ in w = 1/z: returns `(v, c)` with
    /// `self/den = Σ_k c[k] w^{v+k}` for `v + k <= hi`.
    pub fn laurent_at_infinity(&self, den: &Self, hi: i64) -> Result<(i64, Vec<C>)> {
        let (Some(dn), Some(dd)) = (self.degree(), den.degree()) else {
            return if den.is_zero() { Err(Error::NonUnitDivisor) } else { Ok((hi + 1, Vec::new())) };
        };
        let shift = dd as i64 - dn as i64;
        let (v, c) = self.reversed().laurent(&den.reversed(), hi - shift)?;
        Ok((v + shift, c))
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| match k {
                0 => format!("{x}"),
                _ => format!("({x})*z^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
