//! Target geometries, torus fixed points and localization weights.

mod base;
mod ifun;

pub use base::{base_series, hypersurface_identities, i1_local, l_series, l_series_16, BaseSeries};
pub use ifun::{
    i_hypersurface, i_hypersurface_at, i_hypersurface_bivariate_residual, i_twisted_p3, i_twisted_p3_at, picard_fuchs_residual, IFamily, PfOperator, PointI,
};

use crate::algebra::{q, qi, Coeff, Cyc, Eps, Q};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "geometry", rename_all = "kebab-case")]
pub enum Geometry {
    LocalP1P1,
    TwistedP3,
    Hypersurface { m: u32, n: u32 },
}

#[derive(Debug, Deserialize)]
struct Descriptor {
    geometry: String,
    m: Option<u32>,
    n: Option<u32>,
    order: Option<usize>,
}

impl Geometry {
    /// Parse `{"geometry": "...", "m": .., "n": .., "order": ..}`; returns the order too.
    pub fn from_json(s: &str) -> Result<(Geometry, Option<usize>)> {
        let d: Descriptor = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let g = Self::from_name(&d.geometry, d.m, d.n)?;
        Ok((g, d.order))
    }

    pub fn from_name(name: &str, m: Option<u32>, n: Option<u32>) -> Result<Geometry> {
        match name {
            "local-p1p1" => Ok(Geometry::LocalP1P1),
            "twisted-p3" => Ok(Geometry::TwistedP3),
            "hypersurface" => {
                let (m, n) = (m.unwrap_or(2), n.ok_or_else(|| Error::Parse("hypersurface needs n".into()))?);
                if m < 2 || n < 2 {
                    return Err(Error::Parse(format!("need m, n >= 2, got ({m}, {n})")));
                }
                Ok(Geometry::Hypersurface { m, n })
            }
            other => Err(Error::Parse(format!("unknown geometry {other}"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Geometry::LocalP1P1 => "local-p1p1".into(),
            Geometry::TwistedP3 => "twisted-p3".into(),
            Geometry::Hypersurface { m, n } => format!("hypersurface-{m}-{n}"),
        }
    }

    pub fn num_points(&self) -> usize {
        match self {
            Geometry::LocalP1P1 | Geometry::TwistedP3 => 4,
            Geometry::Hypersurface { m, n } => (m * n) as usize,
        }
    }
}

/// λ_i := c_i·ε, known through ε^{depth-1}.
#[derive(Clone, Debug, PartialEq)]
pub struct Regulator {
    pub c: Vec<Q>,
    pub depth: i32,
}

impl Regulator {
    pub fn new(c: Vec<Q>, depth: i32) -> Result<Self> {
        for (i, a) in c.iter().enumerate() {
            if num_traits::Zero::is_zero(a) {
                return Err(Error::NonGenericRegulator("zero value".into()));
            }
            if c[..i].contains(a) {
                return Err(Error::NonGenericRegulator(crate::algebra::fmt_q(a)));
            }
        }
        Ok(Regulator { c, depth })
    }

    /// c_i = 1, 2, …, n.
    pub fn standard(n: usize) -> Self {
        Regulator { c: (1..=n as i64).map(qi).collect(), depth: 4 }
    }

    /// A second generic choice, c_i = (2i+3)/(i+2).
    pub fn alternate(n: usize) -> Self {
        Regulator { c: (0..n as i64).map(|i| q(2 * i + 3, i + 2)).collect(), depth: 4 }
    }

    pub fn lambda(&self, i: usize) -> Eps {
        let exact = Eps::eps(self.c[i].clone());
        if self.depth == i32::MAX {
            exact
        } else {
            exact.add(&Eps::zero_to(self.depth))
        }
    }
}

/// Restrictions of classes to one torus-fixed point.
#[derive(Clone, Debug)]
pub struct FixedPoint {
    pub label: String,
    /// H (twisted P³), H₁+H₂ (local P¹×P¹), or H₁ (hypersurface).
    pub h: Cyc,
    /// H₂ for hypersurfaces, as an index into the regulator.
    pub lambda: Option<usize>,
    pub tangent: Vec<Eps>,
    /// Roots of the twisting class with exponent ±1: e(Ẽ) = Π w^s.
    pub twist: Vec<(Eps, i32)>,
}

/// ζ_n^k with the convention ζ_1 = ζ_2^2 = 1.
pub fn root(n: u32, k: i64) -> Cyc {
    Cyc::zeta_pow(n, k)
}

impl Geometry {
    pub fn fixed_points(&self, reg: &Regulator) -> Result<Vec<FixedPoint>> {
        let c = |x: Cyc| Eps::constant(x);
        match *self {
            Geometry::TwistedP3 => Ok((0..4)
                .map(|i| {
                    let xi = root(4, i);
                    FixedPoint {
                        label: format!("xi{i}"),
                        h: xi.clone(),
                        lambda: None,
                        tangent: (0..4).filter(|&j| j != i).map(|j| c(xi.sub(&root(4, j)))).collect(),
                        // O(2) ⊕ O(-2) contributes 2ξ / (-2ξ) = -1.
                        twist: vec![(c(xi.scale(&qi(2))), 1), (c(xi.scale(&qi(-2))), -1)],
                    }
                })
                .collect()),
            Geometry::LocalP1P1 => {
                let half = |s: i64, t: i64| Cyc::rat(q(s, 2)).add(&root(4, 1).scale(&q(t, 2)));
                let lam = [half(1, 1), half(-1, -1), half(1, -1), half(-1, 1)];
                let mut out = Vec::new();
                for a in 0..2 {
                    for b in 2..4 {
                        let (a2, b2) = (1 - a, 5 - b);
                        let xi = lam[a].add(&lam[b]);
                        out.push(FixedPoint {
                            label: format!("p{a}{b}"),
                            h: xi.clone(),
                            lambda: None,
                            tangent: vec![c(lam[a].sub(&lam[a2])), c(lam[b].sub(&lam[b2]))],
                            // K = O(-2,-2): the pairing divides by its Euler class.
                            twist: vec![(c(xi.scale(&qi(-2))), -1)],
                        });
                    }
                }
                Ok(out)
            }
            Geometry::Hypersurface { m, n } => {
                if reg.c.len() < n as usize {
                    return Err(Error::NonGenericRegulator(format!("need {n} regulator values")));
                }
                let mut out = Vec::new();
                for k in 0..m as i64 {
                    for i in 0..n as usize {
                        let alpha = root(m, k);
                        let mut tangent: Vec<Eps> = (0..m as i64).filter(|&j| j != k).map(|j| c(alpha.sub(&root(m, j)))).collect();
                        tangent.extend((0..n as usize).filter(|&j| j != i).map(|j| reg.lambda(i).sub(&reg.lambda(j))));
                        let w = c(alpha.scale(&qi(m as i64))).add(&reg.lambda(i).scale(&qi(n as i64)));
                        out.push(FixedPoint { label: format!("p{k}{i}"), h: alpha, lambda: Some(i), tangent, twist: vec![(w, 1)] });
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Pairing data at one fixed point.
#[derive(Clone, Debug)]
pub struct Pairing {
    pub label: String,
    /// e_i = e(T_p) / e(Ẽ_p).
    pub e: Eps,
    /// c_i(λ) from the genus-one Hodge twist.
    pub c: Eps,
}

pub fn pairing_data(geom: &Geometry, reg: &Regulator) -> Result<Vec<Pairing>> {
    geom.fixed_points(reg)?
        .into_iter()
        .map(|p| {
            let mut e = Eps::one();
            let mut c = Eps::zero();
            for w in &p.tangent {
                let inv = w.inv().filter(|_| !w.is_zero()).ok_or_else(|| Error::DegenerateTorus(format!("zero tangent weight at {}", p.label)))?;
                e = e.mul(w);
                c = c.sub(&inv);
            }
            for (w, s) in &p.twist {
                let inv = w.inv().ok_or_else(|| Error::DegenerateTorus(format!("zero twist weight at {}", p.label)))?;
                e = if *s > 0 { e.mul(&inv) } else { e.mul(w) };
                c = if *s > 0 { c.add(&inv) } else { c.sub(&inv) };
            }
            Ok(Pairing { label: p.label, e, c })
        })
        .collect()
}

/// φ_i restricted to p_j, and φ^i = e_i φ_i restricted to p_j.
pub fn basis_restrictions(pairing: &[Pairing]) -> (Vec<Vec<Eps>>, Vec<Vec<Eps>>) {
    let n = pairing.len();
    let phi = (0..n).map(|i| (0..n).map(|j| if i == j { Eps::one() } else { Eps::zero() }).collect()).collect();
    let dual = (0..n).map(|i| (0..n).map(|j| if i == j { pairing[i].e.clone() } else { Eps::zero() }).collect()).collect();
    (phi, dual)
}
