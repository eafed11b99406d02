//! I-functions restricted to fixed points, stored exactly per q-degree as
//! N_d(z) / D_d(z) with D_d = B_1 ⋯ B_d.

use super::{root, Geometry, Regulator};
use crate::algebra::{qi, Coeff, Cyc, Eps, Poly};
use crate::{Error, Result};

/// The operator P(D̂) − q·Q(D̂), with D̂ = z d/dt acting on the q^d term as h + d z.
/// Each operator is stored as coefficients of D̂^j, each a polynomial in z.
#[derive(Clone, Debug, PartialEq)]
pub struct PfOperator<C> {
    pub p: Vec<Poly<C>>,
    pub q: Vec<Poly<C>>,
}

fn op_mul<C: Coeff>(a: &[Poly<C>], b: &[Poly<C>]) -> Vec<Poly<C>> {
    let mut out = vec![Poly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// The linear operator `s·D̂ + (c + k z)`.
fn op_linear<C: Coeff>(s: i64, c: C, k: i64) -> Vec<Poly<C>> {
    vec![Poly::linear(c, C::from_int(k)), Poly::constant(C::from_int(s))]
}

fn op_eval<C: Coeff>(op: &[Poly<C>], x: &Poly<C>) -> Poly<C> {
    op.iter().rev().fold(Poly::zero(), |acc, c| acc.mul(x).add(c))
}

/// One fixed-point restriction of a normalized I-function.
#[derive(Clone, Debug)]
pub struct PointI<C> {
    pub label: String,
    /// Weight of the t-direction class at this point.
    pub h: C,
    pub num: Vec<Poly<C>>,
    /// B_d, with `b[0] = 1`.
    pub b: Vec<Poly<C>>,
    pub den: Vec<Poly<C>>,
    pub pf: Option<PfOperator<C>>,
}

impl<C: Coeff> PointI<C> {
    fn build(label: String, h: C, order: usize, factor: impl Fn(usize) -> (Poly<C>, Poly<C>)) -> Self {
        let mut num = vec![Poly::one()];
        let mut b = vec![Poly::one()];
        let mut den = vec![Poly::one()];
        for d in 1..=order {
            let (f, bd) = factor(d);
            num.push(num[d - 1].mul(&f));
            den.push(den[d - 1].mul(&bd));
            b.push(bd);
        }
        PointI { label, h, num, b, den, pf: None }
    }

    pub fn order(&self) -> usize {
        self.num.len() - 1
    }

    /// D̂ on the q^d coefficient: h + d z.
    pub fn dhat(&self, d: usize) -> Poly<C> {
        Poly::linear(self.h.clone(), C::from_int(d as i64))
    }

    /// Value at z = ∞ of each q-coefficient, failing if a positive power of z survives.
    pub fn at_infinity(&self) -> Result<Vec<C>> {
        self.num
            .iter()
            .zip(&self.den)
            .map(|(n, d)| {
                let (v, c) = n.laurent_at_infinity(d, 0)?;
                if v < 0 && c.iter().any(|x| !x.is_zero()) {
                    return Err(Error::BirkhoffBreakdown("positive power of z at infinity".into()));
                }
                Ok(if v == 0 { c[0].clone() } else { C::zero() })
            })
            .collect()
    }
}

/// A family of fixed-point restrictions, plus what was divided out to normalize.
#[derive(Clone, Debug)]
pub struct IFamily<C> {
    pub geometry: Geometry,
    pub points: Vec<PointI<C>>,
    pub removed_factor: String,
}

impl<C: Coeff> IFamily<C> {
    pub fn order(&self) -> usize {
        self.points.first().map_or(0, PointI::order)
    }
}

/// Twisted P³ at H = ξ, normalized by the d = 0 factor 2H.
pub fn i_twisted_p3_at<C: Coeff>(xi: C, order: usize) -> PointI<C> {
    let two_xi = xi.scale(&qi(2));
    let lin = |c: &C, k: i64| Poly::linear(c.clone(), C::from_int(k));
    let mut p = PointI::build(format!("{xi}"), xi.clone(), order, |d| {
        let d = d as i64;
        let f = lin(&two_xi.neg(), -(2 * d - 2)).mul(&lin(&two_xi.neg(), -(2 * d - 1))).mul(&lin(&two_xi, 2 * d - 1)).mul(&lin(&two_xi, 2 * d));
        let bd = lin(&xi, d).pow(4).sub(&Poly::one());
        (f, bd)
    });
    let mut pop = vec![Poly::zero(); 5];
    pop[0] = Poly::constant(C::from_int(-1));
    pop[4] = Poly::one();
    let qop = [op_linear(2, C::zero(), 1), op_linear(2, C::zero(), 2), op_linear(-2, C::zero(), 0), op_linear(-2, C::zero(), -1)]
        .iter()
        .fold(vec![Poly::one()], |acc, f| op_mul(&acc, f));
    p.pf = Some(PfOperator { p: pop, q: qop });
    p
}

pub fn i_twisted_p3(order: usize) -> IFamily<Cyc> {
    IFamily {
        geometry: Geometry::TwistedP3,
        points: (0..4)
            .map(|i| {
                let mut p = i_twisted_p3_at(root(4, i), order);
                p.label = format!("xi{i}");
                p
            })
            .collect(),
        removed_factor: "2H".into(),
    }
}

/// Degree-(m,n) hypersurface at q₂ = 0, restricted to H₁ = α, H₂ = λ.
pub fn i_hypersurface_at<C: Coeff>(m: u32, n: u32, alpha: C, lambda: C, order: usize) -> PointI<C> {
    let base = alpha.scale(&qi(m as i64)).add(&lambda.scale(&qi(n as i64)));
    let mi = m as i64;
    let mut p = PointI::build(format!("{alpha}"), alpha.clone(), order, |d| {
        let d = d as i64;
        let f = ((mi * (d - 1) + 1)..=(mi * d)).fold(Poly::one(), |acc, l| acc.mul(&Poly::linear(base.clone(), C::from_int(l))));
        let bd = Poly::linear(alpha.clone(), C::from_int(d)).pow(m).sub(&Poly::one());
        (f, bd)
    });
    let mut pop = vec![Poly::zero(); m as usize + 1];
    pop[0] = Poly::constant(C::from_int(-1));
    pop[m as usize] = Poly::one();
    let nl = lambda.scale(&qi(n as i64));
    let qop = (1..=mi).fold(vec![Poly::one()], |acc, l| op_mul(&acc, &op_linear(mi, nl.clone(), l)));
    p.pf = Some(PfOperator { p: pop, q: qop });
    p
}

/// All m·n fixed points p_{ki}, with λ_i from the regulator.
pub fn i_hypersurface(m: u32, n: u32, order: usize, reg: &Regulator) -> IFamily<Eps> {
    let mut points = Vec::new();
    for k in 0..m as i64 {
        for i in 0..n as usize {
            let mut p = i_hypersurface_at(m, n, Eps::constant(root(m, k)), reg.lambda(i), order);
            p.label = format!("p{k}{i}");
            points.push(p);
        }
    }
    IFamily { geometry: Geometry::Hypersurface { m, n }, points, removed_factor: "1".into() }
}

/// Residual numerators of the PF operator, over the common denominator D_d.
/// The family is annihilated exactly when every entry is zero.
pub fn picard_fuchs_residual<C: Coeff>(fam: &IFamily<C>) -> Result<Vec<Vec<Poly<C>>>> {
    fam.points
        .iter()
        .map(|p| {
            let op = p.pf.as_ref().ok_or(Error::NoPfStructure)?;
            Ok((0..=p.order())
                .map(|d| {
                    let main = op_eval(&op.p, &p.dhat(d)).mul(&p.num[d]);
                    if d == 0 {
                        return main;
                    }
                    main.sub(&op_eval(&op.q, &p.dhat(d - 1)).mul(&p.num[d - 1]).mul(&p.b[d]))
                })
                .collect())
        })
        .collect()
}

/// Residual of the two-variable PF operator on the full (q₁, q₂) I-function at
/// p_{ki}; returns the nonzero residual numerators indexed by (d₁, d₂).
pub fn i_hypersurface_bivariate_residual<C: Coeff>(
    m: u32,
    n: u32,
    orders: (usize, usize),
    alpha: &C,
    lambdas: &[C],
    i: usize,
) -> Vec<((usize, usize), Poly<C>)> {
    let (mi, ni) = (m as i64, n as i64);
    let base = alpha.scale(&qi(mi)).add(&lambdas[i].scale(&qi(ni)));
    let lin = |k: i64| Poly::linear(base.clone(), C::from_int(k));
    let numer = |d1: usize, d2: usize| (1..=mi * d1 as i64 + ni * d2 as i64).fold(Poly::one(), |acc, k| acc.mul(&lin(k)));
    let b1 = |d1: usize| Poly::linear(alpha.clone(), C::from_int(d1 as i64)).pow(m).sub(&Poly::one());
    let mut out = Vec::new();
    for d2 in 0..=orders.1 {
        for d1 in 0..=orders.0 {
            let dh1 = Poly::linear(alpha.clone(), C::from_int(d1 as i64));
            let lead = dh1.pow(m).sub(&Poly::one()).mul(&numer(d1, d2));
            let r = if d1 == 0 {
                lead
            } else {
                // D̂₁ and D̂₂ on the (d₁−1, d₂) term.
                let x1 = Poly::linear(alpha.clone(), C::from_int(d1 as i64 - 1)).scale(&C::from_int(mi));
                let x2 = Poly::linear(lambdas[i].clone(), C::from_int(d2 as i64)).scale(&C::from_int(ni));
                let q = (1..=mi).fold(Poly::one(), |acc, l| acc.mul(&x1.add(&x2).add(&Poly::monomial(C::from_int(l), 1))));
                lead.sub(&q.mul(&numer(d1 - 1, d2)).mul(&b1(d1)))
            };
            if !r.is_zero() {
                out.push(((d1, d2), r));
            }
        }
    }
    out
}
