//! S-operators as normalized derivative towers of the I-function, the C_k
//! series, the mirror map, and the two-point numerators Σ S(φ_k)⊗S(φ^k).

use crate::algebra::{qi, Coeff, Cyc, Poly, Series, Q};
use crate::geometry::{i1_local, i_hypersurface_at, i_twisted_p3, l_series_16, root, Geometry, IFamily, PointI};
use crate::{Error, Result};

/// S(H^k) at every fixed point, as numerators over the I-function denominators.
#[derive(Clone, Debug)]
pub struct STower {
    pub geometry: Geometry,
    pub points: Vec<PointI<Cyc>>,
    /// `stages[k][i][d]` is the numerator of the q^d term of S_i(H^k) over `points[i].den[d]`.
    /// The last stage is the closing one, S(H^depth), and should agree with S(1).
    pub stages: Vec<Vec<Vec<Poly<Cyc>>>>,
    /// C₀, …, C_depth.
    pub c: Vec<Series<Q>>,
}

fn hat(p: &PointI<Cyc>, num: &[Poly<Cyc>]) -> Vec<Poly<Cyc>> {
    num.iter().enumerate().map(|(d, n)| n.mul(&p.dhat(d))).collect()
}

fn at_infinity(p: &PointI<Cyc>, num: &[Poly<Cyc>]) -> Result<Vec<Cyc>> {
    let mut tmp = p.clone();
    tmp.num = num.to_vec();
    tmp.at_infinity()
}

/// Divide a fixed-point series by a scalar q-series.
fn divide(p: &PointI<Cyc>, num: &[Poly<Cyc>], c: &Series<Q>) -> Result<Vec<Poly<Cyc>>> {
    let inv = c.inv()?;
    Ok((0..num.len())
        .map(|d| {
            let mut acc = Poly::zero();
            let mut lift = Poly::one();
            for j in 0..=d {
                if j > 0 {
                    lift = lift.mul(&p.b[d - j + 1]);
                }
                let cj = inv.coeff(j);
                if !num_traits::Zero::is_zero(cj) {
                    acc = acc.add(&num[d - j].mul(&lift).scale_q(cj));
                }
            }
            acc
        })
        .collect())
}

/// The H = 1 value at z = ∞ of a stage that restricts to c·h^k: the same
/// rational series must come out of every point.
fn normalizer(points: &[PointI<Cyc>], nums: &[Vec<Poly<Cyc>>], k: u32) -> Result<Series<Q>> {
    let mut out: Option<Vec<Q>> = None;
    for (p, num) in points.iter().zip(nums) {
        let hk = p.h.pow(k).inv().ok_or(Error::NonUnitDivisor)?;
        let vals = at_infinity(p, num)?
            .iter()
            .map(|v| v.mul(&hk).as_rational().ok_or_else(|| Error::BirkhoffBreakdown(format!("irrational normalization at {}", p.label))))
            .collect::<Result<Vec<Q>>>()?;
        match &out {
            None => out = Some(vals),
            Some(o) if *o != vals => {
                return Err(Error::BirkhoffBreakdown(format!("normalization of stage {k} differs at {}", p.label)));
            }
            _ => {}
        }
    }
    let c = Series::new(out.unwrap_or_default());
    if num_traits::Zero::is_zero(c.coeff(0)) {
        return Err(Error::BirkhoffBreakdown(format!("vanishing normalization at stage {k}")));
    }
    Ok(c)
}

pub fn build_s_tower(fam: &IFamily<Cyc>, depth: usize) -> Result<STower> {
    let points = fam.points.clone();
    let nums0: Vec<_> = points.iter().map(|p| p.num.clone()).collect();
    let c0 = normalizer(&points, &nums0, 0)?;
    let mut stages = vec![points.iter().zip(&nums0).map(|(p, n)| divide(p, n, &c0)).collect::<Result<Vec<_>>>()?];
    let mut c = vec![c0];
    for k in 1..=depth {
        let raw: Vec<_> = points.iter().zip(&stages[k - 1]).map(|(p, n)| hat(p, n)).collect();
        let ck = normalizer(&points, &raw, k as u32)?;
        stages.push(points.iter().zip(&raw).map(|(p, n)| divide(p, n, &ck)).collect::<Result<Vec<_>>>()?);
        c.push(ck);
    }
    Ok(STower { geometry: fam.geometry, points, stages, c })
}

/// The (m,n) I-function at q₂ = 0 and λ = 0: the m points H₁ = ζ_m^k.
pub fn hypersurface_mod_lambda(m: u32, n: u32, order: usize) -> IFamily<Cyc> {
    let points = (0..m as i64)
        .map(|k| {
            let mut p = i_hypersurface_at(m, n, root(m, k), Cyc::zero(), order);
            p.label = format!("p{k}");
            p
        })
        .collect();
    IFamily { geometry: Geometry::Hypersurface { m, n }, points, removed_factor: "1".into() }
}

/// S-tower of a geometry. Local P¹×P¹ goes through twisted P³ (the S-operators
/// of (H₁+H₂)^k are pulled back from those of H^k).
pub fn s_tower(geom: &Geometry, order: usize) -> Result<STower> {
    match *geom {
        Geometry::TwistedP3 => build_s_tower(&i_twisted_p3(order), 4),
        Geometry::LocalP1P1 => {
            let mut t = build_s_tower(&i_twisted_p3(order), 4)?;
            t.geometry = Geometry::LocalP1P1;
            Ok(t)
        }
        Geometry::Hypersurface { m, n } => build_s_tower(&hypersurface_mod_lambda(m, n, order), m as usize),
    }
}

impl STower {
    pub fn order(&self) -> usize {
        self.points.first().map_or(0, PointI::order)
    }

    pub fn depth(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn c_series(&self) -> &[Series<Q>] {
        &self.c
    }

    /// S_i(H^k) as a point family (numerators over the shared denominators).
    pub fn stage(&self, k: usize, i: usize) -> PointI<Cyc> {
        let mut p = self.points[i].clone();
        p.num = self.stages[k][i].clone();
        p
    }

    /// Whether the closing stage S(H^depth) reproduces S(1).
    pub fn closes(&self) -> bool {
        self.stages[self.depth()] == self.stages[0]
    }
}

/// C₁ = C₃ and C₁C₂C₃ = L⁴ for the twisted P³ tower.
pub fn twisted_relations(t: &STower) -> Result<Vec<(String, bool)>> {
    if t.depth() < 3 {
        return Err(Error::InsufficientOrder("tower depth below 3".into()));
    }
    let l4 = l_series_16(t.order()).pow_int(4)?;
    let c = &t.c;
    Ok(vec![("C1 = C3".into(), c[1] == c[3]), ("C1 C2 C3 = L^4".into(), c[1].mul(&c[2]).mul(&c[3]) == l4)])
}

#[derive(Clone, Debug)]
pub struct MirrorMap {
    /// T − log q.
    pub i1: Series<Q>,
    /// Q = q·exp(I₁).
    pub big_q: Series<Q>,
    pub c1: Series<Q>,
}

impl MirrorMap {
    /// ∂f/∂T = (1/C₁)·Df.
    pub fn d_t(&self, f: &Series<Q>) -> Result<Series<Q>> {
        f.d().div(&self.c1)
    }
}

/// The local P¹×P¹ mirror map, with I₁ recovered from the tower via C₁ = 1 + DI₁.
pub fn mirror_map(t: &STower) -> Result<MirrorMap> {
    if t.geometry != Geometry::LocalP1P1 && t.geometry != Geometry::TwistedP3 {
        return Err(Error::Parse("mirror map is defined for local P1xP1".into()));
    }
    let c1 = t.c[1].clone();
    let i1 = c1.add_const(&qi(-1)).d_inv()?;
    if i1 != i1_local(t.order()) {
        return Err(Error::BirkhoffBreakdown("C1 disagrees with 1 + D I1".into()));
    }
    let big_q = i1.exp()?.shift(1);
    Ok(MirrorMap { i1, big_q, c1 })
}

/// Polynomial in x with coefficients polynomial in y.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly {
    pub c: Vec<Poly<Cyc>>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { c: Vec::new() }
    }

    pub fn outer(px: &Poly<Cyc>, py: &Poly<Cyc>) -> Self {
        BiPoly { c: px.coeffs().iter().map(|a| py.scale(a)).collect() }.trim()
    }

    fn trim(mut self) -> Self {
        while self.c.last().is_some_and(Poly::is_zero) {
            self.c.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = Poly::zero();
        BiPoly { c: (0..n).map(|k| self.c.get(k).unwrap_or(&z).add(o.c.get(k).unwrap_or(&z))).collect() }.trim()
    }

    pub fn scale_q(&self, r: &Q) -> Self {
        BiPoly { c: self.c.iter().map(|p| p.scale_q(r)).collect() }.trim()
    }

    /// Coefficient of x^a y^b.
    pub fn coeff(&self, a: usize, b: usize) -> Cyc {
        self.c.get(a).map_or_else(Cyc::zero, |p| p.coeff(b))
    }

    /// P(y, x).
    pub fn swap(&self) -> Self {
        let deg = self.c.iter().filter_map(Poly::degree).max();
        let Some(deg) = deg else { return BiPoly::zero() };
        BiPoly { c: (0..=deg).map(|b| Poly::new((0..self.c.len()).map(|a| self.coeff(a, b)).collect())).collect() }.trim()
    }

    /// Quotient and remainder under division by x + y; the remainder is P(−y, y).
    pub fn div_x_plus_y(&self) -> (Self, Poly<Cyc>) {
        if self.c.is_empty() {
            return (BiPoly::zero(), Poly::zero());
        }
        let y = Poly::monomial(Cyc::one(), 1);
        let n = self.c.len() - 1;
        let mut qs = vec![Poly::zero(); n];
        let mut carry = self.c[n].clone();
        for k in (0..n).rev() {
            qs[k] = carry.clone();
            carry = self.c[k].sub(&y.mul(&carry));
        }
        (BiPoly { c: qs }.trim(), carry)
    }
}

/// One q-degree of a two-point series: num(x, y) / (den_x(x) den_y(y)).
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeTerm {
    pub num: BiPoly,
    pub den_x: Poly<Cyc>,
    pub den_y: Poly<Cyc>,
}

/// Σ_k φ_k ⊗ φ^k = −Σ_a H^a ⊗ H^{3−a} for the twisted pairing on P³.
pub fn twisted_p3_pairs() -> Vec<(usize, usize, Q)> {
    (0..4).map(|a| (a, 3 - a, qi(-1))).collect()
}

/// e_i = Σ coef·h_i^a·h_i^b, the q⁰ diagonal value of the numerator.
pub fn pair_weight(t: &STower, pairs: &[(usize, usize, Q)], i: usize) -> Cyc {
    let h = &t.points[i].h;
    pairs.iter().fold(Cyc::zero(), |acc, (a, b, c)| acc.add(&h.pow(*a as u32).mul(&h.pow(*b as u32)).scale(c)))
}

/// Σ_k S_i(φ_k)|_{z=x} S_j(φ^k)|_{z=y}, per total q-degree.
pub fn edge_numerator(t: &STower, pairs: &[(usize, usize, Q)], i: usize, j: usize) -> Vec<EdgeTerm> {
    let (pi, pj) = (&t.points[i], &t.points[j]);
    (0..=t.order())
        .map(|d| {
            let mut num = BiPoly::zero();
            for d1 in 0..=d {
                let d2 = d - d1;
                let lift_x = ((d1 + 1)..=d).fold(Poly::one(), |acc, l| acc.mul(&pi.b[l]));
                let lift_y = ((d2 + 1)..=d).fold(Poly::one(), |acc, l| acc.mul(&pj.b[l]));
                for (a, b, c) in pairs {
                    let fx = t.stages[*a][i][d1].mul(&lift_x);
                    let fy = t.stages[*b][j][d2].mul(&lift_y);
                    num = num.add(&BiPoly::outer(&fx, &fy).scale_q(c));
                }
            }
            EdgeTerm { num, den_x: pi.den[d].clone(), den_y: pj.den[d].clone() }
        })
        .collect()
}

/// (N_ij − δ_ij e_i)/(x + y) per q-degree, which is e_i V_ij e_j − δ_ij e_i/(x+y).
/// Non-divisibility means the quadratic identity fails.
pub fn v_from_s(t: &STower, pairs: &[(usize, usize, Q)], i: usize, j: usize) -> Result<Vec<EdgeTerm>> {
    let e = pair_weight(t, pairs, i);
    edge_numerator(t, pairs, i, j)
        .into_iter()
        .enumerate()
        .map(|(d, mut term)| {
            if i == j && d == 0 {
                let corr = BiPoly::outer(&term.den_x, &term.den_y);
                term.num = term.num.add(&BiPoly { c: corr.c.iter().map(|p| p.scale(&e).neg()).collect() });
            }
            let (quot, rem) = term.num.div_x_plus_y();
            if !rem.is_zero() {
                return Err(Error::QuadraticIdentity(format!("pair ({i},{j}) at q^{d}")));
            }
            Ok(EdgeTerm { num: quot, ..term })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twisted_relations_hold() {
        let t = s_tower(&Geometry::TwistedP3, 5).unwrap();
        assert!(t.closes());
        assert!(twisted_relations(&t).unwrap().iter().all(|(_, ok)| *ok));
        assert!(t.c.iter().all(|c| c.coeff(0) == &qi(1)));
        assert_eq!(t.c[0], Series::one(5));
    }

    #[test]
    fn local_c1_and_mirror_map() {
        let t = s_tower(&Geometry::LocalP1P1, 4).unwrap();
        assert_eq!(t.c[1].coeffs()[..3], [qi(1), qi(4), qi(36)]);
        let mm = mirror_map(&t).unwrap();
        // q·exp(4q + 18q² + …) = q + 4q² + 26q³ + …
        assert_eq!(mm.big_q.coeffs()[..4], [qi(0), qi(1), qi(4), qi(26)]);
        let t_series = mm.i1.clone();
        // DT = C₁ with T = log q + I₁
        assert_eq!(t_series.d().add_const(&qi(1)), mm.c1);
    }

    #[test]
    fn hypersurface_c0_is_central_binomial() {
        let t = s_tower(&Geometry::Hypersurface { m: 2, n: 3 }, 5).unwrap();
        assert_eq!(t.c[0].coeffs(), &[qi(1), qi(2), qi(6), qi(20), qi(70), qi(252)]);
        assert!(t.closes());
    }

    #[test]
    fn quadratic_identity_divisible() {
        let t = s_tower(&Geometry::TwistedP3, 3).unwrap();
        let pairs = twisted_p3_pairs();
        for i in 0..4 {
            assert_eq!(pair_weight(&t, &pairs, i), t.points[i].h.pow(3).scale(&qi(-4)));
            for j in 0..4 {
                let n = edge_numerator(&t, &pairs, i, j);
                let m = edge_numerator(&t, &pairs, j, i);
                for (a, b) in n.iter().zip(&m) {
                    assert_eq!(a.num, b.num.swap());
                }
                v_from_s(&t, &pairs, i, j).unwrap();
            }
        }
    }

    #[test]
    fn bipoly_division() {
        let x = Poly::linear(Cyc::zero(), Cyc::one());
        let p = BiPoly::outer(&x, &Poly::one()).add(&BiPoly::outer(&Poly::one(), &x));
        let (qq, r) = p.div_x_plus_y();
        assert!(r.is_zero());
        assert_eq!(qq, BiPoly::outer(&Poly::one(), &Poly::one()));
        let (_, r) = BiPoly::outer(&x, &x).div_x_plus_y();
        assert!(!r.is_zero());
    }
}
