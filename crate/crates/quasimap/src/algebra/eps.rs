//! Truncated Laurent series in a regulator ε over cyclotomic coefficients.

use super::{Coeff, Cyc, Q};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Relative depth used when inverting an exact element that is not a monomial.
pub const DEFAULT_EPS_DEPTH: i32 = 16;

/// `Σ terms[k] ε^k`, known for exponents `< prec`; `prec == i32::MAX` means exact.
#[derive(Clone, Debug, PartialEq)]
pub struct Eps {
    terms: BTreeMap<i32, Cyc>,
    prec: i32,
}

const EXACT: i32 = i32::MAX;

fn sat_add(a: i32, b: i32) -> i32 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a.saturating_add(b)
    }
}

impl Eps {
    pub fn constant(c: Cyc) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Cyc, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Eps { terms, prec: EXACT }
    }

    /// Zero known only below `prec`, i.e. `O(ε^prec)`.
    pub fn zero_to(prec: i32) -> Self {
        Eps { terms: BTreeMap::new(), prec }
    }

    /// The regulator itself, scaled: `c·ε`.
    pub fn eps(c: Q) -> Self {
        Self::monomial(Cyc::rat(c), 1)
    }

    pub fn precision(&self) -> Option<i32> {
        (self.prec != EXACT).then_some(self.prec)
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Cyc)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, k: i32) -> Cyc {
        self.terms.get(&k).cloned().unwrap_or_else(Cyc::zero)
    }

    /// Lowest exponent present, or the precision bound for a (possibly inexact) zero.
    pub fn valuation(&self) -> i32 {
        self.terms.keys().next().copied().unwrap_or(self.prec)
    }

    /// Order of the surviving pole, 0 if none.
    pub fn pole_order(&self) -> i32 {
        (-self.valuation()).max(0)
    }

    /// The ε⁰ coefficient, failing on a pole or on missing precision.
    pub fn finite_part(&self) -> Result<Cyc> {
        if let Some((&k, _)) = self.terms.iter().next().filter(|(k, _)| **k < 0) {
            return Err(Error::LimitDoesNotExist { exponent: vec![], pole_order: -k });
        }
        if self.prec <= 0 {
            return Err(Error::InsufficientPrecision(format!("ε-precision {}", self.prec)));
        }
        Ok(self.coeff(0))
    }

    fn truncated(mut terms: BTreeMap<i32, Cyc>, prec: i32) -> Self {
        if prec != EXACT {
            terms.retain(|k, _| *k < prec);
        }
        terms.retain(|_, v| !v.is_zero());
        Eps { terms, prec }
    }

    /// Inverse of an element whose leading coefficient is a unit, to relative `depth`.
    pub fn inv_depth(&self, depth: i32) -> Option<Self> {
        let (&v, lead) = self.terms.iter().next()?;
        let lead_inv = lead.inv()?;
        if self.is_exact() && self.terms.len() == 1 {
            return Some(Self::monomial(lead_inv, -v));
        }
        let rel = if self.is_exact() { depth } else { self.prec - v };
        // u = self / (lead ε^v) = 1 + f; 1/u by the usual recursion.
        let u: Vec<Cyc> = (0..rel).map(|k| self.coeff(v + k).mul(&lead_inv)).collect();
        let mut w = vec![Cyc::zero(); rel as usize];
        w[0] = Cyc::one();
        for k in 1..rel as usize {
            let mut s = Cyc::zero();
            for j in 1..=k {
                if !u[j].is_zero() {
                    s = s.add(&u[j].mul(&w[k - j]));
                }
            }
            w[k] = s.neg();
        }
        let terms = w.into_iter().enumerate().map(|(k, c)| (k as i32 - v, c.mul(&lead_inv))).collect();
        Some(Self::truncated(terms, rel - v))
    }
}

impl Coeff for Eps {
    fn zero() -> Self {
        Eps { terms: BTreeMap::new(), prec: EXACT }
    }
    fn one() -> Self {
        Self::constant(Cyc::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &o.terms {
            let e = terms.entry(*k).or_insert_with(Cyc::zero);
            *e = e.add(c);
        }
        Self::truncated(terms, self.prec.min(o.prec))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let prec = sat_add(self.valuation(), o.prec).min(sat_add(o.valuation(), self.prec));
        let mut terms: BTreeMap<i32, Cyc> = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                if prec != EXACT && i + j >= prec {
                    continue;
                }
                let e = terms.entry(i + j).or_insert_with(Cyc::zero);
                *e = e.add(&a.mul(b));
            }
        }
        Self::truncated(terms, prec)
    }
    fn neg(&self) -> Self {
        Eps { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(), prec: self.prec }
    }
    fn inv(&self) -> Option<Self> {
        self.inv_depth(DEFAULT_EPS_DEPTH)
    }
    fn from_rat(r: &Q) -> Self {
        Self::constant(Cyc::rat(r.clone()))
    }
    fn scale(&self, r: &Q) -> Self {
        let c = Cyc::rat(r.clone());
        Self::truncated(self.terms.iter().map(|(k, v)| (*k, v.mul(&c))).collect(), self.prec)
    }
}

impl From<Cyc> for Eps {
    fn from(c: Cyc) -> Self {
        Eps::constant(c)
    }
}

impl fmt::Display for Eps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() && self.is_exact() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                _ => format!("({c})*eps^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join("+"))?;
        if !self.is_exact() {
            write!(f, "{}O(eps^{})", if parts.is_empty() { "" } else { "+" }, self.prec)?;
        }
        Ok(())
    }
}
