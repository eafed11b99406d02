//! Edge and leg terms of the local P¹×P¹ graph sum, built from the twisted P³
//! S-tower.
//!
//! Two independent routes produce the edge coefficients
//! [e^{−U_i/x} e^{−U_j/y} (e_i V_ij e_j − δ_ij e_i/(x+y))]_{x^k y^l}:
//! expanding the exact two-point series V_ij at x, y = 0, or dividing
//! Σ_a W_i^{(a)}(x) W_j^{(3−a)}(y) − δ_ij e_i by x + y, where W^{(a)} is the
//! regular part of S(H^a) after removing e^{U/z}.

use crate::algebra::fit::fit_laurent_in_generator;
use crate::algebra::{q, qi, Coeff, Cyc, Poly, Series, Q};
use crate::asymptotics::{chi, extract, extract_twisted};
use crate::birkhoff::{edge_numerator, pair_weight, s_tower, twisted_p3_pairs, v_from_s, EdgeTerm, STower};
use crate::geometry::{l_series_16, Geometry};
use crate::{Error, Result};

/// S-tower data at the four fixed points.
#[derive(Clone, Debug)]
pub struct EdgeData {
    pub tower: STower,
    pub pairs: Vec<(usize, usize, Q)>,
    /// e_i = Σ_k φ_k|_i φ^k|_i.
    pub e: Vec<Cyc>,
    pub u: Vec<Series<Cyc>>,
    /// `w[i][a][k]`: the z^k coefficient of e^{−U_i/z} S_i(H^a).
    pub w: Vec<Vec<Vec<Series<Cyc>>>>,
}

/// Coefficients `m[k][l]` of x^k y^l, each a q-series.
pub type EdgeMatrix = Vec<Vec<Series<Cyc>>>;

impl EdgeData {
    pub fn new(order: usize, depth: usize) -> Result<Self> {
        let tower = s_tower(&Geometry::LocalP1P1, order)?;
        let pairs = twisted_p3_pairs();
        let n = tower.points.len();
        let e = (0..n).map(|i| pair_weight(&tower, &pairs, i)).collect();
        let mut u = Vec::with_capacity(n);
        let mut w = Vec::with_capacity(n);
        for i in 0..n {
            let mut ui: Option<Series<Cyc>> = None;
            let mut wi = Vec::new();
            for a in 0..4 {
                let ex = extract(&tower.stage(a, i), depth)?;
                match &ui {
                    None => ui = Some(ex.u.clone()),
                    Some(u0) if *u0 != ex.u => {
                        return Err(Error::NotNormalizable(format!("U differs between stages at point {i}")));
                    }
                    _ => {}
                }
                wi.push(ex.w);
            }
            u.push(ui.expect("four stages"));
            w.push(wi);
        }
        Ok(EdgeData { tower, pairs, e, u, w })
    }

    pub fn order(&self) -> usize {
        self.tower.order()
    }

    pub fn depth(&self) -> usize {
        self.w[0][0].len() - 1
    }

    pub fn points(&self) -> usize {
        self.u.len()
    }

    /// G(x, y) = Σ_a c_a W_i^{(a)}(x) W_j^{(b)}(y) − δ_ij e_i, for k, l ≤ depth.
    pub fn regular_numerator(&self, i: usize, j: usize) -> EdgeMatrix {
        let n = self.order();
        let depth = self.depth();
        let mut g = vec![vec![Series::zero(n); depth + 1]; depth + 1];
        for (k, row) in g.iter_mut().enumerate() {
            for (l, slot) in row.iter_mut().enumerate() {
                for (a, b, c) in &self.pairs {
                    *slot = slot.add(&self.w[i][*a][k].mul(&self.w[j][*b][l]).scale(&Cyc::from_rat(c)));
                }
            }
        }
        if i == j {
            g[0][0] = g[0][0].sub(&Series::constant(self.e[i].clone(), n));
        }
        g
    }

    /// G/(x + y) on the triangle k + l < depth; fails if G does not vanish on x = −y.
    pub fn edge_from_asymptotics(&self, i: usize, j: usize) -> Result<EdgeMatrix> {
        let g = self.regular_numerator(i, j);
        let depth = self.depth();
        let n = self.order();
        if !g[0][0].is_zero() {
            return Err(Error::QuadraticIdentity(format!("constant term at ({i},{j})")));
        }
        let mut q = vec![vec![Series::zero(n); depth]; depth];
        for total in 1..=depth {
            q[0][total - 1] = g[0][total].clone();
            for k in 1..total {
                q[k][total - 1 - k] = g[k][total - k].sub(&q[k - 1][total - k]);
            }
            if g[total][0] != q[total - 1][0] {
                return Err(Error::QuadraticIdentity(format!("x + y does not divide at ({i},{j}), degree {total}")));
            }
        }
        for (k, row) in q.iter_mut().enumerate() {
            row.truncate(depth - k);
        }
        Ok(q)
    }

    /// [q^d] (−U_i)^r / r! for r ≤ d.
    fn exp_coeffs(&self, i: usize) -> Vec<Vec<Cyc>> {
        let n = self.order();
        let neg = self.u[i].neg();
        let mut pw = vec![Series::one(n)];
        for r in 1..=n {
            pw.push(pw[r - 1].mul(&neg).scale_q(&q(1, r as i64)));
        }
        (0..=n).map(|d| (0..=d).map(|r| pw[r].coeff(d).clone()).collect()).collect()
    }

    /// e^{−U_i/x − U_j/y}·Σ_d q^d terms[d] on the window lo ≤ X, Y ≤ hi.
    fn dress(&self, i: usize, j: usize, terms: &[EdgeTerm], lo: i64, hi: i64) -> Result<Grid> {
        let n = self.order();
        let (exi, exj) = (self.exp_coeffs(i), self.exp_coeffs(j));
        let top = hi + n as i64;
        // the q^{d3} term is only needed up to hi + (n − d3)
        let expanded: Vec<Laurent2> = terms.iter().enumerate().map(|(d3, t)| Laurent2::new(t, top - d3 as i64)).collect::<Result<_>>()?;
        let size = (hi - lo + 1) as usize;
        let mut data = vec![vec![vec![Cyc::zero(); n + 1]; size]; size];
        for d in 0..=n {
            for d3 in 0..=d {
                let t = &expanded[d3];
                for d1 in 0..=(d - d3) {
                    let d2 = d - d3 - d1;
                    for (r, er) in exi[d1].iter().enumerate() {
                        if er.is_zero() {
                            continue;
                        }
                        for (s, es) in exj[d2].iter().enumerate() {
                            if es.is_zero() {
                                continue;
                            }
                            let f = er.mul(es);
                            for x in lo..=hi {
                                for y in lo..=hi {
                                    let c = t.at(x + r as i64, y + s as i64);
                                    if !c.is_zero() {
                                        let slot = &mut data[(x - lo) as usize][(y - lo) as usize][d];
                                        *slot = slot.add(&f.mul(&c));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(Grid { lo, data })
    }

    /// Coefficients k, l ≤ kmax of e^{−U_i/x − U_j/y}(e_i V_ij e_j − δ_ij e_i/(x+y)),
    /// starting from the exact two-point series.
    pub fn edge_from_v(&self, i: usize, j: usize, kmax: usize) -> Result<EdgeMatrix> {
        let v = v_from_s(&self.tower, &self.pairs, i, j)?;
        let grid = self.dress(i, j, &v, 0, kmax as i64)?;
        Ok((0..=kmax).map(|k| (0..=kmax).map(|l| grid.series(k as i64, l as i64)).collect()).collect())
    }

    /// e^{−U_i/x − U_j/y}·(x+y) e_i V_ij e_j: its coefficients with a negative
    /// exponent (which must vanish) and its regular part for k, l ≤ depth.
    pub fn dressed_numerator(&self, i: usize, j: usize) -> Result<(Vec<Series<Cyc>>, EdgeMatrix)> {
        let terms = edge_numerator(&self.tower, &self.pairs, i, j);
        let pole = terms.iter().map(|t| t.den_x.valuation().unwrap_or(0).max(t.den_y.valuation().unwrap_or(0))).max().unwrap_or(0);
        let lo = -(pole as i64) - self.order() as i64;
        let depth = self.depth() as i64;
        let grid = self.dress(i, j, &terms, lo, depth)?;
        let mut singular = Vec::new();
        for x in lo..=depth {
            for y in lo..=depth {
                if x < 0 || y < 0 {
                    singular.push(grid.series(x, y));
                }
            }
        }
        let regular = (0..=depth).map(|k| (0..=depth).map(|l| grid.series(k, l)).collect()).collect();
        Ok((singular, regular))
    }
}

struct Grid {
    lo: i64,
    /// `data[x − lo][y − lo][d]`
    data: Vec<Vec<Vec<Cyc>>>,
}

impl Grid {
    fn series(&self, x: i64, y: i64) -> Series<Cyc> {
        Series::new(self.data[(x - self.lo) as usize][(y - self.lo) as usize].clone())
    }
}

/// num(x, y)/(den_x(x) den_y(y)) expanded at x = y = 0.
struct Laurent2 {
    vx: i64,
    vy: i64,
    /// `c[a][b]` multiplies x^{vx+a} y^{vy+b}.
    c: Vec<Vec<Cyc>>,
}

impl Laurent2 {
    fn new(t: &EdgeTerm, hi: i64) -> Result<Self> {
        let (vy, ly) = Poly::one().laurent(&t.den_y, hi)?;
        let (vx, lx) = Poly::one().laurent(&t.den_x, hi)?;
        let ny = ly.len();
        let nx = lx.len();
        let rows: Vec<Vec<Cyc>> = t
            .num
            .c
            .iter()
            .take(nx)
            .map(|p| {
                let mut row = vec![Cyc::zero(); ny];
                for (b, pb) in p.coeffs().iter().enumerate() {
                    if pb.is_zero() {
                        continue;
                    }
                    for k in 0..ny.saturating_sub(b) {
                        row[k + b] = row[k + b].add(&pb.mul(&ly[k]));
                    }
                }
                row
            })
            .collect();
        let mut c = vec![vec![Cyc::zero(); ny]; nx];
        for (a, row) in rows.iter().enumerate() {
            for k in 0..nx.saturating_sub(a) {
                if lx[k].is_zero() {
                    continue;
                }
                for (b, rb) in row.iter().enumerate() {
                    if !rb.is_zero() {
                        c[k + a][b] = c[k + a][b].add(&lx[k].mul(rb));
                    }
                }
            }
        }
        Ok(Laurent2 { vx, vy, c })
    }

    fn at(&self, x: i64, y: i64) -> Cyc {
        let (a, b) = (x - self.vx, y - self.vy);
        if a < 0 || b < 0 {
            return Cyc::zero();
        }
        self.c.get(a as usize).and_then(|r| r.get(b as usize)).cloned().unwrap_or_else(Cyc::zero)
    }
}

/// Cont(e) for half-edge values (b₁, b₂) ≥ 1: (−1)^{b₁+b₂} times the
/// x^{b₁−1} y^{b₂−1} edge coefficient.
pub fn edge_contribution(m: &EdgeMatrix, b1: usize, b2: usize) -> Result<Series<Cyc>> {
    let have = m.len();
    let s = m.get(b1 - 1).and_then(|r| r.get(b2 - 1)).ok_or(Error::InsufficientZDepth { need: b1 + b2 - 1, have })?;
    Ok(if (b1 + b2) % 2 == 0 { s.clone() } else { s.neg() })
}

/// Cont(l) = (−1)^{a−1} [e^{−U/z} S_p(H^class)]_{z^{a−1}}.
pub fn leg_contribution(ed: &EdgeData, point: usize, class: usize, a: usize) -> Result<Series<Cyc>> {
    assert!(a >= 1, "flag values start at 1");
    let depth = ed.depth();
    let w = ed.w[point].get(class).ok_or(Error::InsufficientZDepth { need: class, have: 3 })?;
    let s = w.get(a - 1).ok_or(Error::InsufficientZDepth { need: a - 1, have: depth })?;
    Ok(if a % 2 == 1 { s.clone() } else { s.neg() })
}

/// Outcome of the edge checks for one ordered pair of fixed points.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeCheck {
    pub i: usize,
    pub j: usize,
    /// e^{−U_i/x − U_j/y}(x+y) e_i V_ij e_j has no negative powers of x or y.
    pub regular: bool,
    /// ... and its regular part is Σ_a W^{(a)} ⊗ W^{(3−a)}.
    pub numerator_matches: bool,
    /// The expansion of V_ij agrees with the division of the R-series by x + y.
    pub resummation_matches: bool,
    /// Coefficient (k, l) at (i, j) equals coefficient (l, k) at (j, i).
    pub symmetric: bool,
    /// q⁰ coefficient of x⁰y⁰ vanishes on the diagonal.
    pub degenerate_cancels: bool,
}

impl EdgeCheck {
    pub fn pass(&self) -> bool {
        self.regular && self.numerator_matches && self.resummation_matches && self.symmetric && self.degenerate_cancels
    }
}

/// Edge checks for all ordered pairs.
pub fn edge_checks(ed: &EdgeData) -> Result<Vec<EdgeCheck>> {
    let depth = ed.depth();
    let np = ed.points();
    let mut from_v = vec![Vec::new(); np];
    for i in 0..np {
        for j in 0..np {
            from_v[i].push(ed.edge_from_v(i, j, depth - 1)?);
        }
    }
    let mut out = Vec::new();
    for i in 0..np {
        for j in 0..np {
            let (singular, regular) = ed.dressed_numerator(i, j)?;
            let mut g = ed.regular_numerator(i, j);
            if i == j {
                g[0][0] = g[0][0].add(&Series::constant(ed.e[i].clone(), ed.order()));
            }
            let tri = ed.edge_from_asymptotics(i, j)?;
            let a = &from_v[i][j];
            let resummation_matches = tri.iter().enumerate().all(|(k, row)| row.iter().enumerate().all(|(l, s)| a[k][l] == *s));
            let b = &from_v[j][i];
            let symmetric = (0..depth).all(|k| (0..depth).all(|l| a[k][l] == b[l][k]));
            let degenerate_cancels = i != j || a[0][0].coeff(0).is_zero();
            out.push(EdgeCheck {
                i,
                j,
                regular: singular.iter().all(Series::is_zero),
                numerator_matches: regular == g,
                resummation_matches,
                symmetric,
                degenerate_cancels,
            });
        }
    }
    Ok(out)
}

/// The 𝒳-derivative of an edge coefficient for one pair and half-edge values.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffCheck {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    /// Cont(e) itself is not a Laurent polynomial in L (it really involves 𝒳).
    pub depends_on_x: bool,
    /// Cont(e) − 𝒳·(−1)^{k+l} R_{1,k−1} R_{1,l−1} / (L² λ_i^{k−2} λ_j^{l−2}) ∈ ℂ[L^{±1}].
    pub derived: bool,
    /// The same with L in place of L².
    pub literal: bool,
}

fn fits_laurent(s: &Series<Cyc>, l: &Series<Q>, window: (i64, i64), surplus: usize) -> Result<bool> {
    for c in 0..2 {
        let coord = Series::new(s.coeffs().iter().map(|x| x.coords(4)[c].clone()).collect());
        match fit_laurent_in_generator(&coord, l, window, surplus) {
            Ok(_) => {}
            Err(Error::NoSolution(_)) => return Ok(false),
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

/// Per-edge 𝒳-derivative identity for all ordered pairs and k + l ≤ 3,
/// by overdetermined fits in L with `surplus` spare equations. The edge
/// coefficients come from the R-series (see `edge_checks` for the
/// comparison with the exact two-point series).
pub fn coefficient_identity(ed: &EdgeData, surplus: usize) -> Result<Vec<CoeffCheck>> {
    let n = ed.order();
    let asym = extract_twisted(&ed.tower, 0, 2)?;
    let l = l_series_16(n);
    let x = chi(&ed.tower.c[1])?;
    let r1 = &asym.r[1];
    let np = ed.points();
    let mut out = Vec::new();
    for i in 0..np {
        for j in 0..np {
            let m = ed.edge_from_asymptotics(i, j)?;
            for (k, lv) in [(1usize, 1usize), (1, 2), (2, 1)] {
                let cont = edge_contribution(&m, k, lv)?;
                let big_n = (k + lv - 1) as i64;
                let window = (-big_n, 3 * big_n);
                let (xi, xj) = (&ed.tower.points[i].h, &ed.tower.points[j].h);
                let lam = |x: &Cyc, e: usize| -> Cyc {
                    // λ^{2−e} for e ∈ {1, 2}
                    if e == 1 {
                        x.clone()
                    } else {
                        Cyc::one()
                    }
                };
                let sign = if (k + lv) % 2 == 0 { qi(1) } else { qi(-1) };
                let rr = r1[k - 1].mul(&r1[lv - 1]).scale_q(&sign);
                let scal = lam(xi, k).mul(&lam(xj, lv));
                let rhs = |p: i64| -> Result<Series<Cyc>> {
                    let base = rr.div(&l.pow_int(p)?)?.mul(&x);
                    Ok(base.map(|c| scal.scale(c)))
                };
                let depends_on_x = !fits_laurent(&cont, &l, window, surplus)?;
                let derived = fits_laurent(&cont.sub(&rhs(2)?), &l, window, surplus)?;
                let literal = fits_laurent(&cont.sub(&rhs(1)?), &l, window, surplus)?;
                out.push(CoeffCheck { i, j, k, l: lv, depends_on_x, derived, literal });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_routes_agree() {
        let ed = EdgeData::new(3, 3).unwrap();
        for c in edge_checks(&ed).unwrap() {
            assert!(c.pass(), "{c:?}");
        }
    }

    #[test]
    fn legs() {
        let ed = EdgeData::new(2, 2).unwrap();
        for p in 0..4 {
            let one = leg_contribution(&ed, p, 0, 1).unwrap();
            assert_eq!(one.coeff(0), &Cyc::one());
            let h = leg_contribution(&ed, p, 1, 1).unwrap();
            assert_eq!(h.coeff(0), &ed.tower.points[p].h);
        }
        assert!(matches!(leg_contribution(&ed, 0, 0, 4), Err(Error::InsufficientZDepth { need: 3, have: 2 })));
    }

    #[test]
    fn edge_contribution_signs() {
        let ed = EdgeData::new(2, 2).unwrap();
        let m = ed.edge_from_v(0, 1, 1).unwrap();
        assert_eq!(edge_contribution(&m, 1, 2).unwrap(), m[0][1].neg());
        assert_eq!(edge_contribution(&m, 2, 2).unwrap(), m[1][1]);
        assert!(edge_contribution(&m, 3, 1).is_err());
    }
}
