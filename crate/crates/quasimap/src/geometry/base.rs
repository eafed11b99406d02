//! Named base series: L, I₁, C₁, A₂ for local P¹×P¹ and I₀, I₁, Ĩ₁, 𝒴 for
//! the (2,n) hypersurfaces.

use super::ifun::i_hypersurface_at;
use super::Geometry;
use crate::algebra::{factorial, q, qi, Coeff, Eps, Series, Q};
use crate::{Error, Result};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct BaseSeries {
    pub geometry: Geometry,
    pub order: usize,
    pub series: BTreeMap<String, Series<Q>>,
}

impl BaseSeries {
    pub fn get(&self, name: &str) -> &Series<Q> {
        &self.series[name]
    }
}

fn q_of(c: &Eps) -> Result<Q> {
    if !c.is_exact() || c.terms().any(|(k, _)| k != 0) {
        return Err(Error::InsufficientPrecision(format!("expected a constant, got {c}")));
    }
    c.coeff(0).as_rational().ok_or_else(|| Error::InsufficientPrecision(format!("not rational: {c}")))
}

/// (1 − a q)^{−1/m}.
fn root_series(a: i64, m: u32, order: usize) -> Series<Q> {
    Series::from_fn(order, |k| match k {
        0 => qi(1),
        1 => qi(-a),
        _ => qi(0),
    })
    .pow(&q(-1, m as i64))
    .expect("constant term is 1")
}

/// L = (1 − m^m q)^{−1/m}.
pub fn l_series(m: u32, order: usize) -> Series<Q> {
    root_series((m as i64).pow(m), m, order)
}

/// L = (1 − 16q)^{−1/4}, shared by local P¹×P¹ and twisted P³.
pub fn l_series_16(order: usize) -> Series<Q> {
    root_series(16, 4, order)
}

/// Σ 2(2d)!(2d−1)!/(d!)⁴ q^d, d ≥ 1.
pub fn i1_local(order: usize) -> Series<Q> {
    Series::from_fn(order, |d| {
        if d == 0 {
            return qi(0);
        }
        let d = d as u64;
        Q::from_integer(2 * factorial(2 * d) * factorial(2 * d - 1)) / Q::from_integer(factorial(d).pow(4))
    })
}

/// I₀, I₁, Ĩ₁ read off the (2,n) I-function: the z⁰ and z⁻¹ coefficients as
/// classes A + B·H₁ + C·H₂ + D·H₁H₂ + …, from the points α = ±1, λ = ε.
fn hypersurface_two(n: u32, order: usize) -> Result<(Series<Q>, Series<Q>, Series<Q>)> {
    let lam = Eps::eps(qi(1));
    let pts: Vec<_> = [1i64, -1].iter().map(|&a| i_hypersurface_at(2, n, Eps::from_rat(&qi(a)), lam.clone(), order)).collect();
    let mut i0 = Vec::new();
    let mut i1 = Vec::new();
    let mut i1t = Vec::new();
    for d in 0..=order {
        let mut c0 = Vec::new();
        let mut c1 = Vec::new();
        for p in &pts {
            let (v, c) = p.num[d].laurent_at_infinity(&p.den[d], 1)?;
            let at = |k: i64| if k >= v { c[(k - v) as usize].clone() } else { Eps::zero() };
            if v < 0 {
                return Err(Error::BirkhoffBreakdown("positive power of z".into()));
            }
            c0.push(at(0));
            c1.push(at(1));
        }
        if c0[0] != c0[1] {
            return Err(Error::NoSolution(format!("z⁰ term is not a constant at q^{d}")));
        }
        i0.push(q_of(&c0[0])?);
        let half = q(1, 2);
        let part = |k: i32, sign: i64| -> Result<Q> {
            let a = c1[0].coeff(k);
            let b = c1[1].coeff(k).scale(&qi(sign));
            let s = a.add(&b).scale(&half);
            s.as_rational().ok_or_else(|| Error::InsufficientPrecision("irrational".into()))
        };
        let (a, b, c, dd) = (part(0, 1)?, part(0, -1)?, part(1, 1)?, part(1, -1)?);
        if !num_traits::Zero::is_zero(&a) || !num_traits::Zero::is_zero(&dd) {
            return Err(Error::NoSolution(format!("z⁻¹ term has unexpected classes at q^{d}")));
        }
        i1.push(b);
        i1t.push(c);
    }
    Ok((Series::new(i0), Series::new(i1), Series::new(i1t)))
}

pub fn base_series(geom: &Geometry, order: usize) -> Result<BaseSeries> {
    let mut s = BTreeMap::new();
    match *geom {
        Geometry::LocalP1P1 => {
            let l = l_series_16(order);
            let i1 = i1_local(order);
            let c1 = i1.d().add_const(&qi(1));
            let chi = c1.d().div(&c1)?;
            let l4 = l.pow_int(4)?;
            let a2 = chi.sub(&l4.scale(&q(1, 4))).add_const(&q(1, 2)).div(&l4)?;
            s.insert("L".into(), l);
            s.insert("I1".into(), i1.clone());
            s.insert("C1".into(), c1);
            s.insert("A2".into(), a2);
            // T − log q
            s.insert("T".into(), i1);
        }
        Geometry::TwistedP3 => {
            s.insert("L".into(), l_series_16(order));
        }
        Geometry::Hypersurface { m, n } => {
            s.insert("L".into(), l_series(m, order));
            if m == 2 {
                let (i0, i1, i1t) = hypersurface_two(n, order)?;
                let y = i1t.div(&i0)?.d();
                s.insert("I0".into(), i0);
                s.insert("I1".into(), i1);
                s.insert("I1t".into(), i1t);
                s.insert("Y".into(), y);
            }
        }
    }
    Ok(BaseSeries { geometry: *geom, order, series: s })
}

/// The three (2,n) identities: I₀ = (1−4q)^{−1/2}, 1 + D(I₁/I₀) = (1−4q)^{−1/2},
/// 𝒴 = n(4q/(1−4q) − 1/(2√(1−4q)) + 1/2).
pub fn hypersurface_identities(base: &BaseSeries) -> Result<Vec<(String, bool)>> {
    let Geometry::Hypersurface { m: 2, n } = base.geometry else {
        return Err(Error::Parse("identities need a (2,n) hypersurface".into()));
    };
    let o = base.order;
    let one_minus = Series::from_fn(o, |k| match k {
        0 => qi(1),
        1 => qi(-4),
        _ => qi(0),
    });
    let r = one_minus.pow(&q(-1, 2))?;
    let (i0, i1, y) = (base.get("I0"), base.get("I1"), base.get("Y"));
    let geo = one_minus.inv()?.shift(1).scale_q(&qi(4));
    let y_closed = geo.sub(&r.scale_q(&q(1, 2))).add_const(&q(1, 2)).scale_q(&qi(n as i64));
    Ok(vec![
        ("I0 = (1-4q)^(-1/2)".into(), *i0 == r),
        ("1 + D(I1/I0) = (1-4q)^(-1/2)".into(), i1.div(i0)?.d().add_const(&qi(1)) == r),
        ("Y closed form".into(), *y == y_closed),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic(k: u64) -> Q {
        (1..=k).map(|j| q(1, j as i64)).fold(qi(0), |a, b| a + b)
    }

    #[test]
    fn local_series_leading_terms() {
        let b = base_series(&Geometry::LocalP1P1, 3).unwrap();
        assert_eq!(b.get("I1").coeffs()[..3], [qi(0), qi(4), qi(18)]);
        assert_eq!(b.get("L").coeffs(), &[qi(1), qi(4), qi(40), qi(480)]);
        assert_eq!(b.get("A2").coeff(0), &q(1, 4));
        assert_eq!(b.get("C1").coeffs()[..3], [qi(1), qi(4), qi(36)]);
    }

    #[test]
    fn two_n_series_match_sums() {
        let n = 3;
        let b = base_series(&Geometry::Hypersurface { m: 2, n }, 6).unwrap();
        for d in 0..=6u64 {
            let cd = Q::from_integer(factorial(2 * d) / factorial(d).pow(2));
            assert_eq!(b.get("I0").coeff(d as usize), &cd);
            assert_eq!(b.get("I1").coeff(d as usize), &(qi(2) * &cd * (harmonic(2 * d) - harmonic(d))));
            assert_eq!(b.get("I1t").coeff(d as usize), &(qi(n as i64) * &cd * harmonic(2 * d)));
        }
        assert_eq!(b.get("I1t").coeff(1), &qi(3 * n as i64));
        assert!(hypersurface_identities(&b).unwrap().iter().all(|(_, ok)| *ok));
    }
}
