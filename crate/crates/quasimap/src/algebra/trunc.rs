//! Sparse multivariate truncated power series with named variables.

use super::{binomial, Coeff, Cyc, Eps, Q};
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Same-type substitutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Set a variable to zero (t = 0, q₂ = 0, ...).
    Zero(String),
    /// Identify two variables into a new one (q₁ = q₂ = q).
    Diagonal { a: String, b: String, into: String },
}

/// Zero coefficients are never stored, so equality is structural.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C> {
    vars: Vec<String>,
    trunc: Vec<u32>,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Coeff> TruncSeries<C> {
    pub fn zero(vars: &[&str], trunc: &[u32]) -> Self {
        assert_eq!(vars.len(), trunc.len());
        TruncSeries { vars: vars.iter().map(|s| s.to_string()).collect(), trunc: trunc.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(v: C, vars: &[&str], trunc: &[u32]) -> Self {
        let mut s = Self::zero(vars, trunc);
        s.set(&vec![0; vars.len()], v);
        s
    }

    /// A single variable as a series.
    pub fn var(name: &str, vars: &[&str], trunc: &[u32]) -> Result<Self> {
        let mut s = Self::zero(vars, trunc);
        let i = s.index(name)?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        s.set(&e, C::one());
        Ok(s)
    }

    pub fn from_terms(vars: &[&str], trunc: &[u32], terms: impl IntoIterator<Item = (Vec<u32>, C)>) -> Self {
        let mut s = Self::zero(vars, trunc);
        for (e, c) in terms {
            let old = s.coeff(&e);
            s.set(&e, old.add(&c));
        }
        s
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn truncation(&self) -> &[u32] {
        &self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.vars.iter().position(|v| v == name).ok_or_else(|| Error::VariableMismatch(format!("unknown variable {name}")))
    }

    fn fits(&self, e: &[u32]) -> bool {
        e.iter().zip(&self.trunc).all(|(a, t)| a <= t)
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    /// Store a coefficient; out-of-range exponents are silently dropped.
    pub fn set(&mut self, e: &[u32], v: C) {
        if !self.fits(e) || v.is_zero() {
            self.terms.remove(e);
        } else {
            self.terms.insert(e.to_vec(), v);
        }
    }

    fn check(&self, o: &Self) -> Result<Vec<u32>> {
        if self.vars != o.vars {
            return Err(Error::VariableMismatch(format!("{:?} vs {:?}", self.vars, o.vars)));
        }
        Ok(self.trunc.iter().zip(&o.trunc).map(|(a, b)| *a.min(b)).collect())
    }

    fn with_trunc(&self, trunc: Vec<u32>) -> Self {
        let mut s = TruncSeries { vars: self.vars.clone(), trunc, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            if s.fits(e) {
                s.terms.insert(e.clone(), c.clone());
            }
        }
        s
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut s = self.with_trunc(self.check(o)?);
        for (e, c) in &o.terms {
            if s.fits(e) {
                let v = s.coeff(e).add(c);
                s.set(e, v);
            }
        }
        Ok(s)
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for v in s.terms.values_mut() {
            *v = v.neg();
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut s = self.with_trunc(self.trunc.clone());
        s.terms = self.terms.iter().map(|(e, c)| (e.clone(), c.mul(k))).filter(|(_, c)| !c.is_zero()).collect();
        s
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let trunc = self.check(o)?;
        let mut out: BTreeMap<Vec<u32>, C> = BTreeMap::new();
        for (ea, a) in &self.terms {
            for (eb, b) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if e.iter().zip(&trunc).all(|(x, t)| x <= t) {
                    let slot = out.entry(e).or_insert_with(C::zero);
                    *slot = slot.add(&a.mul(b));
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(TruncSeries { vars: self.vars.clone(), trunc, terms: out })
    }

    fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.vars.len()])
    }

    /// Σ_k w_k f^k for the part f without constant term, stopping once f^k vanishes.
    fn power_sum(&self, f: &Self, mut w: impl FnMut(u64) -> C) -> Result<Self> {
        let mut acc = Self::constant(w(0), &self.refs(), &self.trunc);
        let mut p = Self::constant(C::one(), &self.refs(), &self.trunc);
        let mut k = 1;
        loop {
            p = p.mul(f)?;
            if p.is_zero() {
                return Ok(acc);
            }
            acc = acc.add(&p.scale(&w(k)))?;
            k += 1;
        }
    }

    fn refs(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    fn without_constant(&self) -> Self {
        let mut f = self.clone();
        f.terms.remove(&vec![0; self.vars.len()]);
        f
    }

    pub fn inv(&self) -> Result<Self> {
        let a0 = self.constant_term().inv().ok_or(Error::NonUnitDivisor)?;
        let f = self.without_constant().scale(&a0.neg());
        Ok(self.power_sum(&f, |_| C::one())?.scale(&a0))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        self.mul(&o.inv()?)
    }

    /// D = v ∂/∂v.
    pub fn d_op(&self, var: &str) -> Result<Self> {
        let i = self.index(var)?;
        let mut s = self.with_trunc(self.trunc.clone());
        s.terms = self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| (e.clone(), c.scale(&super::qi(e[i] as i64)))).collect();
        Ok(s)
    }

    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonNormalized("exp needs zero constant term".into()));
        }
        let mut fact = Q::from_integer(1.into());
        self.power_sum(self, |k| {
            if k > 0 {
                fact = &fact * super::qi(k as i64);
            }
            C::from_rat(&fact.recip())
        })
    }

    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::NonNormalized("log needs constant term 1".into()));
        }
        let f = self.without_constant();
        self.power_sum(&f, |k| match k {
            0 => C::zero(),
            _ => C::from_rat(&super::q(if k % 2 == 1 { 1 } else { -1 }, k as i64)),
        })
    }

    pub fn pow(&self, r: &Q) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::NonNormalized("pow needs constant term 1".into()));
        }
        let f = self.without_constant();
        self.power_sum(&f, |k| C::from_rat(&binomial(r, k)))
    }

    pub fn specialize(&self, rule: &Rule) -> Result<Self> {
        match rule {
            Rule::Zero(v) => {
                let i = self.index(v)?;
                let mut s = self.clone();
                s.terms.retain(|e, _| e[i] == 0);
                Ok(s)
            }
            Rule::Diagonal { a, b, into } => {
                let (i, j) = (self.index(a)?, self.index(b)?);
                let mut vars = self.vars.clone();
                let mut trunc = self.trunc.clone();
                vars[i] = into.clone();
                trunc[i] = trunc[i].min(trunc[j]);
                vars.remove(j);
                trunc.remove(j);
                let mut out: Self = TruncSeries { vars, trunc, terms: BTreeMap::new() };
                for (e, c) in &self.terms {
                    let mut f = e.clone();
                    f[i] += e[j];
                    f.remove(j);
                    if out.fits(&f) {
                        let v = out.coeff(&f).add(c);
                        out.set(&f, v);
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        TruncSeries {
            vars: self.vars.clone(),
            trunc: self.trunc.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), f(c))).filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl TruncSeries<Cyc> {
    /// Substitute λ_i := c_i·ε for the named variables; the result has them removed.
    pub fn lambda_scale(&self, lambdas: &[&str], c: &[Q]) -> Result<TruncSeries<Eps>> {
        let distinct: BTreeSet<&Q> = c.iter().collect();
        if distinct.len() != c.len() {
            let dup = c.iter().find(|x| c.iter().filter(|y| y == x).count() > 1).unwrap();
            return Err(Error::NonGenericRegulator(super::fmt_q(dup)));
        }
        if lambdas.len() != c.len() || c.iter().any(num_traits::Zero::is_zero) {
            return Err(Error::NonGenericRegulator("need one nonzero value per variable".into()));
        }
        let idx: Vec<usize> = lambdas.iter().map(|v| self.index(v)).collect::<Result<_>>()?;
        let keep: Vec<usize> = (0..self.vars.len()).filter(|i| !idx.contains(i)).collect();
        let vars: Vec<&str> = keep.iter().map(|&i| self.vars[i].as_str()).collect();
        let trunc: Vec<u32> = keep.iter().map(|&i| self.trunc[i]).collect();
        let mut out = TruncSeries::<Eps>::zero(&vars, &trunc);
        for (e, v) in &self.terms {
            let mut w = Eps::constant(v.clone());
            for (k, &i) in idx.iter().enumerate() {
                w = w.mul(&Eps::eps(c[k].clone()).pow(e[i]));
            }
            let f: Vec<u32> = keep.iter().map(|&i| e[i]).collect();
            let total = out.coeff(&f).add(&w);
            out.set(&f, total);
        }
        Ok(out)
    }
}

impl TruncSeries<Eps> {
    /// The ε⁰ part of every coefficient, after checking that no pole survives.
    pub fn eps_finite_part(&self) -> Result<TruncSeries<Cyc>> {
        let mut out = TruncSeries::<Cyc>::zero(&self.refs(), &self.trunc);
        for (e, c) in &self.terms {
            let v = c.finite_part().map_err(|err| match err {
                Error::LimitDoesNotExist { pole_order, .. } => Error::LimitDoesNotExist { exponent: e.clone(), pole_order },
                other => other,
            })?;
            out.set(e, v);
        }
        Ok(out)
    }
}

impl<C: Coeff> fmt::Display for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> =
                    e.iter().zip(&self.vars).filter(|(k, _)| **k > 0).map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") }).collect();
                if mono.is_empty() {
                    format!("{c}")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
