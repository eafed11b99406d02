//! Elements of cyclotomic fields Q(ζ_n), stored reduced modulo Φ_n.

use super::coeff::{abs_q, fmt_q};
use super::linalg;
use super::{Coeff, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// `Σ c[j] ζ_n^j`, with `c.len() < φ(n)` and no trailing zeros.
/// Rational elements always carry `n = 1`.
#[derive(Clone, Debug)]
pub struct Cyc {
    n: u32,
    c: Vec<Q>,
}

fn cyclotomic(n: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut p = vec![BigInt::from(0); n as usize + 1];
    p[0] = -BigInt::from(1);
    p[n as usize] = BigInt::from(1);
    for d in (1..n).filter(|d| n % d == 0) {
        p = div_exact(&p, &cyclotomic(d));
    }
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut out = vec![BigInt::from(0); a.len() - db];
    for i in (0..out.len()).rev() {
        let t = r[i + db].clone();
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &t * bj;
        }
        out[i] = t;
    }
    debug_assert!(r.iter().all(|x| *x == BigInt::from(0)));
    out
}

/// Euler's totient, i.e. the degree of Φ_n.
pub fn phi(n: u32) -> usize {
    cyclotomic(n).len() - 1
}

fn reduce(n: u32, mut v: Vec<Q>) -> Vec<Q> {
    let p = cyclotomic(n);
    let d = p.len() - 1;
    while v.len() > d {
        let t = v.pop().unwrap();
        if t.is_zero() {
            continue;
        }
        let base = v.len() - d;
        for (j, pj) in p.iter().enumerate().take(d) {
            v[base + j] -= &t * Q::from_integer(pj.clone());
        }
    }
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
    v
}

impl Cyc {
    fn make(n: u32, c: Vec<Q>) -> Self {
        let c = reduce(n, c);
        if c.len() <= 1 {
            Cyc { n: 1, c }
        } else {
            Cyc { n, c }
        }
    }

    pub fn rat(r: Q) -> Self {
        Self::make(1, vec![r])
    }

    /// ζ_n^k for the primitive root ζ_n = exp(2πi/n).
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        let k = k.rem_euclid(n as i64) as usize;
        let mut c = vec![Q::zero(); k + 1];
        c[k] = Q::one();
        Self::make(n, c)
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn as_rational(&self) -> Option<Q> {
        match self.c.len() {
            0 => Some(Q::zero()),
            1 if self.n == 1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    /// Coordinates on 1, ζ_n, …, ζ_n^{φ(n)−1}; `n` must be a multiple of the order.
    pub fn coords(&self, n: u32) -> Vec<Q> {
        assert_eq!(n % self.n, 0, "Q(ζ_{}) does not contain ζ_{}", n, self.n);
        let mut v = self.lift(n);
        v.resize(phi(n), Q::zero());
        v
    }

    fn lift(&self, to: u32) -> Vec<Q> {
        if to == self.n {
            return self.c.clone();
        }
        let step = (to / self.n) as usize;
        let mut v = vec![Q::zero(); (self.c.len().max(1) - 1) * step + 1];
        for (j, x) in self.c.iter().enumerate() {
            v[j * step] = x.clone();
        }
        reduce(to, v)
    }

    fn common(&self, o: &Self) -> (u32, Vec<Q>, Vec<Q>) {
        let l = self.n.lcm(&o.n);
        (l, self.lift(l), o.lift(l))
    }

    fn mul_x(n: u32, v: &[Q], w: &[Q]) -> Vec<Q> {
        if v.is_empty() || w.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Q::zero(); v.len() + w.len() - 1];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in w.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        reduce(n, out)
    }
}

impl PartialEq for Cyc {
    fn eq(&self, o: &Self) -> bool {
        let (_, a, b) = self.common(o);
        a == b
    }
}

impl Coeff for Cyc {
    fn zero() -> Self {
        Cyc { n: 1, c: Vec::new() }
    }
    fn one() -> Self {
        Cyc::rat(Q::one())
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let (l, mut a, b) = self.common(o);
        if a.len() < b.len() {
            a.resize(b.len(), Q::zero());
        }
        for (x, y) in a.iter_mut().zip(&b) {
            *x += y;
        }
        Self::make(l, a)
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let (l, a, b) = self.common(o);
        Self::make(l, Self::mul_x(l, &a, &b))
    }
    fn neg(&self) -> Self {
        Cyc { n: self.n, c: self.c.iter().map(|x| -x).collect() }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Cyc::rat(r.recip()));
        }
        // Solve self · y = 1 through the multiplication matrix on 1, ζ, …, ζ^{d-1}.
        let d = phi(self.n);
        let mut cols = Vec::with_capacity(d);
        for j in 0..d {
            let mut e = vec![Q::zero(); j + 1];
            e[j] = Q::one();
            let mut col = Self::mul_x(self.n, &self.c, &e);
            col.resize(d, Q::zero());
            cols.push(col);
        }
        let a: Vec<Vec<Q>> = (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
        let mut b = vec![Q::zero(); d];
        b[0] = Q::one();
        let y = linalg::solve(&a, &b).ok()?;
        Some(Self::make(self.n, y))
    }
    fn from_rat(r: &Q) -> Self {
        Cyc::rat(r.clone())
    }
    fn scale(&self, r: &Q) -> Self {
        Self::make(self.n, self.c.iter().map(|x| x * r).collect())
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let body = if first { fmt_q(x) } else { fmt_q(&abs_q(x)) };
            if !first {
                write!(f, "{}", if x.is_negative() { "-" } else { "+" })?;
            }
            if j == 0 {
                write!(f, "{body}")?;
            } else {
                write!(f, "{body}*zeta{}^{j}", self.n)?;
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    #[test]
    fn cyclotomic_polynomials() {
        let as_i = |n| cyclotomic(n).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        assert_eq!(as_i(1), "-1,1");
        assert_eq!(as_i(4), "1,0,1");
        assert_eq!(as_i(3), "1,1,1");
        assert_eq!(as_i(12), "1,0,-1,0,1");
        assert_eq!(phi(8), 4);
    }

    #[test]
    fn roots_of_unity() {
        let i = Cyc::zeta_pow(4, 1);
        assert_eq!(i.mul(&i), Cyc::rat(qi(-1)));
        assert_eq!(i.pow(4), Cyc::one());
        let w = Cyc::zeta_pow(3, 1);
        assert_eq!(Cyc::one().add(&w).add(&w.mul(&w)), Cyc::zero());
        // ζ_12^3 = ζ_4 after lifting.
        assert_eq!(Cyc::zeta_pow(12, 3), i);
        assert_eq!(Cyc::zeta_pow(4, 2).as_rational(), Some(qi(-1)));
    }

    #[test]
    fn inverse() {
        let a = Cyc::rat(q(1, 2)).add(&Cyc::zeta_pow(4, 1).scale(&qi(3)));
        let b = a.inv().unwrap();
        assert_eq!(a.mul(&b), Cyc::one());
        let w = Cyc::zeta_pow(3, 1).add(&Cyc::rat(qi(2)));
        assert_eq!(w.mul(&w.inv().unwrap()), Cyc::one());
        assert!(Cyc::zero().inv().is_none());
    }

    #[test]
    fn display() {
        let a = Cyc::rat(q(1, 2)).sub(&Cyc::zeta_pow(4, 1).scale(&q(3, 4)));
        assert_eq!(a.to_string(), "1/2-3/4*zeta4^1");
        assert_eq!(Cyc::rat(q(-5, 3)).to_string(), "-5/3");
    }
}
