//! Descendent correlators ⟨⟨ψ^{a₁},…,ψ^{aₙ} | γ⟩⟩_{g,n} at t₀ = 0 and their
//! unique expressions in the genus-zero generators s_i = ⟨⟨1,…,1⟩⟩_{0,i+3}.
//!
//! At t₀ = 0 the t₁-insertions resum by the dilaton equation into powers of
//! u = 1/(1 − t₁), and only finitely many t_{≥2} insertions fit the dimension.

use super::hodge::{HodgeTable, LambdaMono};
use crate::algebra::{factorial, fmt_q, qi, Coeff, Series, Q};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Σ c · u^p · Π_{i≥2} t_i^{e_i}; the key is (p, [e₂, e₃, …]).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct TPoly {
    terms: BTreeMap<(i64, Vec<u32>), Q>,
}

fn trim<T: PartialEq + Default>(mut v: Vec<T>) -> Vec<T> {
    while v.last().is_some_and(|x| *x == T::default()) {
        v.pop();
    }
    v
}

impl TPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// c · u^p · Π t_i^{e} for `(i, e)` in `t`.
    pub fn term(c: Q, p: i64, t: &[(usize, u32)]) -> Self {
        let mut out = Self::zero();
        let mut e = Vec::new();
        for &(i, k) in t {
            assert!(i >= 2, "t₀ and t₁ are not free variables here");
            if e.len() <= i - 2 {
                e.resize(i - 1, 0);
            }
            e[i - 2] += k;
        }
        out.push(p, e, c);
        out
    }

    fn push(&mut self, p: i64, e: Vec<u32>, c: Q) {
        let k = (p, trim(e));
        let v = self.terms.remove(&k).unwrap_or_else(|| qi(0)) + c;
        if !num_traits::Zero::is_zero(&v) {
            self.terms.insert(k, v);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((p, e), c) in &o.terms {
            out.push(*p, e.clone(), c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &[u32], &Q)> {
        self.terms.iter().map(|((p, e), c)| (*p, e.as_slice(), c))
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((p, e), c)| {
                let mut s = fmt_q(c);
                for (i, k) in e.iter().enumerate().filter(|(_, k)| **k > 0) {
                    s += &format!("*t{}", i + 2);
                    if *k > 1 {
                        s += &format!("^{k}");
                    }
                }
                s + &format!("/(1-t1)^{p}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A Laurent polynomial in s₀ times a polynomial in s₁, s₂, …, i.e. a rational
/// function whose denominator is a power of s₀. Keys are exponent vectors
/// [e₀, e₁, …] without trailing zeros.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PFunction {
    terms: BTreeMap<Vec<i64>, Q>,
}

impl PFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, &[])
    }

    /// c · Π s_i^{e_i} for `(i, e)` in `s`.
    pub fn monomial(c: Q, s: &[(usize, i64)]) -> Self {
        let mut e = Vec::new();
        for &(i, k) in s {
            if e.len() <= i {
                e.resize(i + 1, 0);
            }
            e[i] += k;
        }
        let mut out = Self::zero();
        out.push(trim(e), c);
        out
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(qi(1), &[(i, 1)])
    }

    fn push(&mut self, e: Vec<i64>, c: Q) {
        let v = self.terms.remove(&e).unwrap_or_else(|| qi(0)) + c;
        if !num_traits::Zero::is_zero(&v) {
            self.terms.insert(e, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.push(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&qi(-1)))
    }

    pub fn scale(&self, r: &Q) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.push(e.clone(), c * r);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let n = e1.len().max(e2.len());
                let e: Vec<i64> = (0..n).map(|i| e1.get(i).unwrap_or(&0) + e2.get(i).unwrap_or(&0)).collect();
                out.push(trim(e), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(qi(1)), |acc, _| acc.mul(self))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &Q)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Numerator polynomial and the power k of the denominator s₀^k.
    pub fn numerator_denominator(&self) -> (PFunction, i64) {
        let k = self.terms.keys().map(|e| -e.first().copied().unwrap_or(0)).max().unwrap_or(0).max(0);
        (self.mul(&Self::monomial(qi(1), &[(0, k)])), k)
    }

    /// The common weight Σ i·e_i of all monomials, if homogeneous.
    pub fn weight(&self) -> Option<i64> {
        let mut w = None;
        for e in self.terms.keys() {
            let x: i64 = e.iter().enumerate().map(|(i, k)| i as i64 * k).sum();
            match w {
                None => w = Some(x),
                Some(y) if y != x => return None,
                _ => {}
            }
        }
        w.or(Some(0))
    }

    /// Substitute series for s₀, s₁, …; s₀ must be invertible.
    pub fn eval<C: Coeff>(&self, s: &[Series<C>]) -> Result<Series<C>> {
        let order = s.iter().map(Series::order).min().unwrap_or(0);
        let mut acc = Series::zero(order);
        for (e, c) in &self.terms {
            let mut t = Series::constant(C::from_rat(c), order);
            for (i, k) in e.iter().enumerate() {
                if *k != 0 {
                    let si = s.get(i).ok_or_else(|| Error::InsufficientOrder(format!("s{i} not supplied")))?;
                    t = t.mul(&si.truncate(order).pow_int(*k)?);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

impl fmt::Display for PFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut s = fmt_q(c);
                for (i, k) in e.iter().enumerate().filter(|(_, k)| **k != 0) {
                    s += &format!("*s{i}");
                    if *k != 1 {
                        s += &format!("^{k}");
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Non-increasing sequences of positive integers summing to `total`.
fn partitions(total: u32) -> Vec<Vec<u32>> {
    fn rec(rem: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for x in (1..=rem.min(cap)).rev() {
            cur.push(x);
            rec(rem - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, &mut Vec::new(), &mut out);
    out
}

/// 1/Π m_j! for the multiplicities of a sorted sequence.
fn multiset_weight<T: PartialEq>(xs: &[T]) -> Q {
    let mut w = qi(1);
    let mut run = 1u64;
    for k in 1..=xs.len() {
        if k < xs.len() && xs[k] == xs[k - 1] {
            run += 1;
        } else {
            w /= Q::from_integer(factorial(run));
            run = 1;
        }
    }
    w
}

fn stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

/// ⟨⟨ψ^{a₁},…,ψ^{aₙ} | λ^lam⟩⟩_{g,n} at t₀ = 0.
pub fn correlator_t(g: u32, a: &[u32], lam: LambdaMono, table: &HodgeTable) -> Result<TPoly> {
    let n = a.len();
    if !stable(g, n) {
        return Err(Error::Unstable(format!("(g, n) = ({g}, {n})")));
    }
    let defect = 3 * g as i64 - 3 + n as i64 - a.iter().map(|&x| x as i64).sum::<i64>() - lam.0 as i64 - 2 * lam.1 as i64;
    let mut out = TPoly::zero();
    if defect < 0 {
        return Ok(out);
    }
    for parts in partitions(defect as u32) {
        let mut psi = a.to_vec();
        psi.extend(parts.iter().map(|p| p + 1));
        let v = table.integral(g, &psi, lam)?;
        if num_traits::Zero::is_zero(&v) {
            continue;
        }
        let mut e = vec![0u32; parts.first().copied().unwrap_or(0) as usize];
        for p in &parts {
            e[*p as usize - 1] += 1;
        }
        let chi = 2 * g as i64 - 2 + n as i64 + parts.len() as i64;
        out.push(chi, e, v * multiset_weight(&parts));
    }
    Ok(out)
}

/// t_i (i ≥ 2) in terms of s₀, s₁, …, for i = 2..=max.
pub fn t_in_s(max: usize, table: &HodgeTable) -> Result<Vec<PFunction>> {
    let mut ts: Vec<PFunction> = Vec::new();
    for i in 2..=max {
        // ⟨⟨1^{i+2}⟩⟩_{0,i+2} = t_i u^{i+1} + (terms in t₂ … t_{i−1})
        let k = i - 1;
        let corr = correlator_t(0, &vec![0; k + 3], (0, 0), table)?;
        let lead = TPoly::term(qi(1), k as i64 + 2, &[(i, 1)]);
        let lower = corr.add(&TPoly { terms: lead.terms.iter().map(|(key, c)| (key.clone(), -c.clone())).collect() });
        if lower.terms.len() + 1 != corr.terms.len() {
            return Err(Error::NoSolution(format!("⟨⟨1^{}⟩⟩ lacks the leading t{i} term", k + 3)));
        }
        let rest = substitute(&lower, &ts)?;
        ts.push(PFunction::var(k).sub(&rest).mul(&PFunction::monomial(qi(1), &[(0, -(k as i64) - 2)])));
    }
    Ok(ts)
}

/// Replace u by s₀ and t_i by `ts[i − 2]`.
pub fn substitute(p: &TPoly, ts: &[PFunction]) -> Result<PFunction> {
    let mut out = PFunction::zero();
    for (u, e, c) in p.terms() {
        let mut t = PFunction::monomial(c.clone(), &[(0, u)]);
        for (i, k) in e.iter().enumerate().filter(|(_, k)| **k > 0) {
            let ti = ts.get(i).ok_or_else(|| Error::InsufficientOrder(format!("t{} not expressed", i + 2)))?;
            t = t.mul(&ti.pow(*k));
        }
        out = out.add(&t);
    }
    Ok(out)
}

/// The P-function 𝖯^{a₁…aₙ, λ^lam}_{g,n}.
pub fn reduce_correlator(g: u32, a: &[u32], lam: LambdaMono, table: &HodgeTable) -> Result<PFunction> {
    let t = correlator_t(g, a, lam, table)?;
    let max = t.terms().map(|(_, e, _)| e.len() + 1).max().unwrap_or(1);
    let ts = t_in_s(max, table)?;
    substitute(&t, &ts)
}

/// The genus-zero, genus-one and genus-two correlator displays, each compared
/// with the reduction. The (0,n) entries are compared in the t-variables.
pub fn correlator_displays(table: &HodgeTable) -> Result<Vec<(String, bool)>> {
    let q = |n: i64, d: i64| crate::algebra::q(n, d);
    let t = |c: i64, p: i64, v: &[(usize, u32)]| TPoly::term(qi(c), p, v);
    let mut out = Vec::new();
    let genus0 = [
        (3, t(1, 1, &[])),
        (4, t(1, 3, &[(2, 1)])),
        (5, t(1, 4, &[(3, 1)]).add(&t(3, 5, &[(2, 2)]))),
        (6, t(1, 5, &[(4, 1)]).add(&t(10, 6, &[(2, 1), (3, 1)])).add(&t(15, 7, &[(2, 3)]))),
    ];
    for (n, want) in genus0 {
        let got = correlator_t(0, &vec![0; n], (0, 0), table)?;
        out.push((format!("<<1^{n}>>_(0,{n})"), got == want));
    }
    let m = |c: Q, s: &[(usize, i64)]| PFunction::monomial(c, s);
    let g11 = m(q(1, 24), &[(1, 1), (0, -1)]);
    let g12 = m(q(1, 24), &[(2, 1), (0, -1)]).sub(&m(q(1, 24), &[(1, 2), (0, -2)]));
    let g20 = m(q(1, 1152), &[(3, 1), (0, -2)]).sub(&m(q(7, 1920), &[(2, 1), (1, 1), (0, -3)])).add(&m(q(1, 360), &[(1, 3), (0, -4)]));
    out.push(("<<1>>_(1,1)".into(), reduce_correlator(1, &[0], (0, 0), table)? == g11));
    out.push(("<<1,1>>_(1,2)".into(), reduce_correlator(1, &[0, 0], (0, 0), table)? == g12));
    out.push(("<<>>_(2,0)".into(), reduce_correlator(2, &[], (0, 0), table)? == g20));
    Ok(out)
}

/// Polynomial in t₀, t₁, … (exponent vectors), truncated by total degree.
type TFull = BTreeMap<Vec<u32>, Q>;

fn tfull_mul(a: &TFull, b: &TFull, max_deg: u32) -> TFull {
    let mut out = TFull::new();
    for (e1, c1) in a {
        for (e2, c2) in b {
            let n = e1.len().max(e2.len());
            let e: Vec<u32> = (0..n).map(|i| e1.get(i).unwrap_or(&0) + e2.get(i).unwrap_or(&0)).collect();
            if e.iter().sum::<u32>() > max_deg {
                continue;
            }
            let v = out.remove(&e).unwrap_or_else(|| qi(0)) + c1 * c2;
            if !num_traits::Zero::is_zero(&v) {
                out.insert(e, v);
            }
        }
    }
    out
}

/// Non-increasing length-k sequences of non-negative integers summing to `total`.
fn compositions(total: u32, k: usize) -> Vec<Vec<u32>> {
    fn rec(rem: u32, slots: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in (0..=rem.min(cap)).rev() {
            cur.push(x);
            rec(rem - x, slots - 1, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, k, total, &mut Vec::new(), &mut out);
    out
}

/// ⟨⟨ψ^a, ψ^b⟩⟩_{0,2} with full t-dependence, through t-degree `max_deg`.
fn two_point(a: u32, b: u32, max_deg: u32) -> TFull {
    let mut out = TFull::new();
    for k in 1..=max_deg as usize {
        let Some(total) = (k as u32).checked_sub(1 + a + b) else { continue };
        for c in compositions(total, k) {
            // ∫_{M̄_{0,k+2}} ψ₁^a ψ₂^b Π ψ^{c_j} = (k − 1)!/(a! b! Π c_j!)
            let mut v = Q::from_integer(factorial(k as u64 - 1)) / Q::from_integer(factorial(a as u64) * factorial(b as u64));
            for cj in &c {
                v /= Q::from_integer(factorial(*cj as u64));
            }
            v *= multiset_weight(&c);
            let mut e = vec![0u32; c[0] as usize + 1];
            for cj in &c {
                e[*cj as usize] += 1;
            }
            out.insert(e, v);
        }
    }
    out
}

/// The unstable two-point closed form: with W = ⟨⟨1,1⟩⟩_{0,2},
/// Σ_{a,b} ⟨⟨ψ^a,ψ^b⟩⟩ x^{−a−1} y^{−b−1} + 1/(x+y) = e^{W(1/x+1/y)}/(x+y),
/// i.e. ⟨⟨ψ^a,ψ^b⟩⟩_{0,2} = W^{a+b+1}/(a! b! (a+b+1)). Checked as polynomials
/// in all t_i through total degree `max_deg`, for a + b ≤ `ab_max`.
pub fn two_point_closed_form(max_deg: u32, ab_max: u32) -> Vec<((u32, u32), bool)> {
    let w = two_point(0, 0, max_deg);
    let mut out = Vec::new();
    for s in 0..=ab_max {
        let mut wp = TFull::from([(Vec::new(), qi(1))]);
        for _ in 0..=s {
            wp = tfull_mul(&wp, &w, max_deg);
        }
        for a in 0..=s {
            let b = s - a;
            let c = qi(1) / Q::from_integer(factorial(a as u64) * factorial(b as u64) * (s as i64 + 1));
            let rhs: TFull = wp.iter().map(|(e, v)| (e.clone(), v * &c)).collect();
            out.push(((a, b), two_point(a, b, max_deg) == rhs));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn displays_are_reproduced() {
        let table = HodgeTable::builtin();
        for (name, ok) in correlator_displays(&table).unwrap() {
            assert!(ok, "{name}");
        }
    }

    #[test]
    fn generators_invert() {
        let table = HodgeTable::builtin();
        let ts = t_in_s(6, &table).unwrap();
        assert_eq!(ts[0], PFunction::monomial(qi(1), &[(1, 1), (0, -3)]));
        // s_k expressed back through the t's is s_k itself.
        for k in 1..=5usize {
            let corr = correlator_t(0, &vec![0; k + 3], (0, 0), &table).unwrap();
            assert_eq!(substitute(&corr, &ts).unwrap(), PFunction::var(k));
        }
    }

    #[test]
    fn reductions_are_homogeneous() {
        let table = HodgeTable::builtin();
        for (g, a, lam, w) in [(1u32, vec![0u32, 0], (0, 0), 2i64), (2, vec![1], (1, 0), 2), (2, vec![0, 0], (0, 1), 3), (1, vec![2, 0, 0], (1, 0), 0)] {
            let p = reduce_correlator(g, &a, lam, &table).unwrap();
            assert_eq!(p.weight(), Some(w), "{g} {a:?} {lam:?}: {p}");
            let (num, k) = p.numerator_denominator();
            assert!(num.terms().all(|(e, _)| e.iter().all(|x| *x >= 0)));
            assert!(k >= 0);
        }
    }

    #[test]
    fn dimension_bound_gives_zero() {
        let table = HodgeTable::builtin();
        assert!(reduce_correlator(1, &[2], (0, 0), &table).unwrap().is_zero());
        assert!(reduce_correlator(0, &[1, 0, 0], (0, 0), &table).unwrap().is_zero());
        assert!(matches!(reduce_correlator(0, &[0, 0], (0, 0), &table), Err(Error::Unstable(_))));
    }

    #[test]
    fn genus_one_with_lambda() {
        // ⟨⟨1 | λ₁⟩⟩_{1,1} = ∫λ₁ · u^1 = s₀/24
        let table = HodgeTable::builtin();
        assert_eq!(reduce_correlator(1, &[0], (1, 0), &table).unwrap(), PFunction::monomial(q(1, 24), &[(0, 1)]));
    }

    #[test]
    fn two_point_function() {
        assert!(two_point_closed_form(6, 3).iter().all(|(_, ok)| *ok));
        // W = t₀ + t₀t₁ + …, with no t₀² term
        let w = two_point(0, 0, 2);
        assert_eq!(w.get(&vec![1]), Some(&qi(1)));
        assert_eq!(w.get(&vec![1, 1]), Some(&qi(1)));
        assert_eq!(w.get(&vec![2]), None);
        assert_eq!(two_point(1, 0, 2).get(&vec![2]), Some(&q(1, 2)));
    }

    #[test]
    fn evaluation_uses_s0_inverse() {
        let p = PFunction::monomial(q(1, 24), &[(1, 1), (0, -1)]);
        let s0 = Series::new(vec![qi(1), qi(1)]);
        let s1 = Series::new(vec![qi(0), qi(2)]);
        let v = p.eval(&[s0, s1]).unwrap();
        assert_eq!(v.coeffs(), &[qi(0), q(1, 12)]);
    }
}
