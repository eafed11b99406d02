//! Asymptotic expansions e^{U/z}(W₀ + W₁z + …) of fixed-point series at z = 0,
//! the R-series of the twisted P³ tower, and the relations they satisfy.

use crate::algebra::fit::fit_laurent_in_generator;
use crate::algebra::{q, qi, Coeff, Cyc, Series, Q};
use crate::birkhoff::STower;
use crate::geometry::{i1_local, l_series_16, PointI};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// F = e^{U/z}·Σ_k w[k] z^k to the recorded orders.
#[derive(Clone, Debug, PartialEq)]
pub struct Extraction<C> {
    pub u: Series<C>,
    pub w: Vec<Series<C>>,
}

/// Split a fixed-point series into its exponential and regular parts, keeping
/// z^0 … z^depth of the regular part.
pub fn extract<C: Coeff>(p: &PointI<C>, depth: usize) -> Result<Extraction<C>> {
    let n = p.order();
    let top = (depth + n) as i64;
    let f: Vec<(i64, Vec<C>)> = (0..=n).map(|d| p.num[d].laurent(&p.den[d], top - d as i64)).collect::<Result<_>>()?;
    let at = |s: &(i64, Vec<C>), k: i64| if k < s.0 { C::zero() } else { s.1.get((k - s.0) as usize).cloned().unwrap_or_else(C::zero) };

    let w0 = at(&f[0], 0);
    if (f[0].0..=top).any(|k| k != 0 && !at(&f[0], k).is_zero()) {
        return Err(Error::NotNormalizable(format!("q⁰ term at {} is not constant in z", p.label)));
    }
    let w0_inv = w0.inv().ok_or_else(|| Error::NotNormalizable(format!("vanishing leading term at {}", p.label)))?;

    let mut u = vec![C::zero(); n + 1];
    // w[d][k] for k = 0..=top-d
    let mut w: Vec<Vec<C>> = vec![(0..=top).map(|k| if k == 0 { w0.clone() } else { C::zero() }).collect()];
    for d in 1..=n {
        // pw[r][j] = [q^j] U^r with the current U (U_d still zero)
        let mut pw: Vec<Vec<C>> = vec![(0..=d).map(|j| if j == 0 { C::one() } else { C::zero() }).collect()];
        for r in 1..=d {
            let prev = &pw[r - 1];
            let next = (0..=d).map(|j| (1..=j).fold(C::zero(), |acc, i| acc.add(&u[i].mul(&prev[j - i])))).collect();
            pw.push(next);
        }
        let mut fact = Q::from_integer(1.into());
        let mut einv = vec![qi(1)];
        for r in 1..=d {
            fact *= Q::from_integer((r as i64).into());
            einv.push(qi(1) / fact.clone());
        }
        let lo = -(d as i64);
        let hi = top - d as i64;
        let mut t: Vec<C> = (lo..=hi).map(|k| at(&f[d], k)).collect();
        for j in 1..=d {
            for r in 1..=j {
                let e = pw[r][j].scale(&einv[r]);
                if e.is_zero() {
                    continue;
                }
                for k in lo..=hi {
                    let idx = k + r as i64;
                    if idx < 0 {
                        continue;
                    }
                    let wv = &w[d - j][idx as usize];
                    if !wv.is_zero() {
                        let slot = &mut t[(k - lo) as usize];
                        *slot = slot.sub(&e.mul(wv));
                    }
                }
            }
        }
        if let Some(k) = (lo..-1).find(|&k| !t[(k - lo) as usize].is_zero()) {
            return Err(Error::NotNormalizable(format!("z^{k} survives at q^{d} at {}", p.label)));
        }
        u[d] = t[(-1 - lo) as usize].mul(&w0_inv);
        w.push((0..=hi).map(|k| t[(k - lo) as usize].clone()).collect());
    }
    Ok(Extraction { u: Series::new(u), w: (0..=depth).map(|k| Series::new((0..=n).map(|d| w[d][k].clone()).collect())).collect() })
}

fn rational(s: &Series<Cyc>, what: &str) -> Result<Series<Q>> {
    let c = s.coeffs().iter().map(|x| x.as_rational().ok_or_else(|| Error::NotNormalizable(format!("{what} is not rational")))).collect::<Result<Vec<_>>>()?;
    Ok(Series::new(c))
}

/// μ and R_{jk} of the twisted P³ tower at one fixed point:
/// S_i(H^j) = e^{μξ/z}·(L^jξ^j/(C₁⋯C_j))·Σ_k R_{jk}(z/ξ)^k.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticExpansion {
    pub mu: Series<Q>,
    /// `r[j][k]`.
    pub r: Vec<Vec<Series<Q>>>,
    /// L^j/(C₁⋯C_j).
    pub prefactor: Vec<Series<Q>>,
}

pub fn extract_twisted(t: &STower, point: usize, depth: usize) -> Result<AsymptoticExpansion> {
    let n = t.order();
    let xi = t.points[point].h.clone();
    let xi_inv = xi.inv().ok_or(Error::NonUnitDivisor)?;
    let l = l_series_16(n);
    let mut pre = vec![Series::one(n)];
    for j in 1..4 {
        pre.push(pre[j - 1].mul(&l).div(&t.c[j])?);
    }
    let mut mu = None;
    let mut r = Vec::new();
    for (j, pj) in pre.iter().enumerate() {
        let ex = extract(&t.stage(j, point), depth)?;
        let m = rational(&ex.u.scale(&xi_inv), "μ")?;
        match &mu {
            None => mu = Some(m),
            Some(m0) if *m0 != m => return Err(Error::NotNormalizable(format!("μ differs between stages at stage {j}"))),
            _ => {}
        }
        let pinv = pj.inv()?;
        let row =
            ex.w.iter()
                .enumerate()
                .map(|(k, wk)| {
                    let s = wk.scale(&xi.pow(k as u32).mul(&xi_inv.pow(j as u32)));
                    Ok(rational(&s, "R")?.mul(&pinv))
                })
                .collect::<Result<Vec<_>>>()?;
        r.push(row);
    }
    Ok(AsymptoticExpansion { mu: mu.unwrap_or_else(|| Series::zero(n)), r, prefactor: pre })
}

/// 𝒳 = DC₁/C₁.
pub fn chi(c1: &Series<Q>) -> Result<Series<Q>> {
    c1.d().div(c1)
}

/// Residuals of the four R-recursions for p = 0..=p_max, in the order
/// R_{1,p+1}, R_{2,p+1}, R_{3,p+1}, R_{0,p+1}.
pub fn verify_recursions(e: &AsymptoticExpansion, c1: &Series<Q>, p_max: usize) -> Result<Vec<(String, Series<Q>)>> {
    let n = e.mu.order();
    let l = l_series_16(n);
    let li = l.inv()?;
    let x = chi(&c1.truncate(n))?;
    let dl_l2 = l.d().mul(&li).mul(&li);
    let x_l = x.mul(&li);
    let r = &e.r;
    if r.iter().any(|row| row.len() < p_max + 2) {
        return Err(Error::InsufficientOrder("not enough z-depth for the requested p".into()));
    }
    let mut out = Vec::new();
    for p in 0..=p_max {
        let rhs1 = r[0][p + 1].add(&r[0][p].d().mul(&li));
        let rhs2 = r[1][p + 1].add(&r[1][p].d().mul(&li)).add(&dl_l2.sub(&x_l).mul(&r[1][p]));
        let rhs3 = r[2][p + 1].add(&r[2][p].d().mul(&li)).add(&x_l.sub(&dl_l2.scale_q(&qi(2))).mul(&r[2][p]));
        let rhs0 = r[3][p + 1].add(&r[3][p].d().mul(&li)).sub(&dl_l2.mul(&r[3][p]));
        out.push((format!("R1,{} (p={p})", p + 1), r[1][p + 1].sub(&rhs1)));
        out.push((format!("R2,{} (p={p})", p + 1), r[2][p + 1].sub(&rhs2)));
        out.push((format!("R3,{} (p={p})", p + 1), r[3][p + 1].sub(&rhs3)));
        out.push((format!("R0,{} (p={p})", p + 1), r[0][p + 1].sub(&rhs0)));
    }
    Ok(out)
}

/// 𝒳² − (L⁴−1)𝒳 − ¼(L⁴−1) + D𝒳, from the closed-form C₁.
pub fn drule_residual(order: usize) -> Result<Series<Q>> {
    let c1 = i1_local(order).d().add_const(&qi(1));
    let x = chi(&c1)?;
    let l4m1 = l_series_16(order).pow_int(4)?.add_const(&qi(-1));
    Ok(x.mul(&x).sub(&l4m1.mul(&x)).sub(&l4m1.scale_q(&q(1, 4))).add(&x.d()))
}

/// 𝒳 from the tower's C₁ and A₂ = (𝒳 + 1/2 − L⁴/4)/L⁴.
pub fn a2_and_chi(t: &STower) -> Result<(Series<Q>, Series<Q>)> {
    let x = chi(&t.c[1])?;
    let l4 = l_series_16(t.order()).pow_int(4)?;
    let a2 = x.add_const(&q(1, 2)).sub(&l4.scale_q(&q(1, 4))).div(&l4)?;
    Ok((x, a2))
}

/// Outcome of one structural fit.
#[derive(Clone, Debug)]
pub struct Fitted {
    pub name: String,
    pub result: Result<BTreeMap<i64, Q>>,
}

/// Laurent-polynomial fits in L of R_{jk}/L^{1/2} for j = 0, 1, 3, and of
/// Q_{2k}/L^{1/2} where R_{2k} = Q_{2k} − (R_{1,k−1}/L)𝒳.
pub fn structure_check(e: &AsymptoticExpansion, c1: &Series<Q>, k_max: usize, window: impl Fn(usize) -> (i64, i64), surplus: usize) -> Result<Vec<Fitted>> {
    let n = e.mu.order();
    let l = l_series_16(n);
    let sqrt_l = l.pow(&q(1, 2))?;
    let x = chi(&c1.truncate(n))?;
    let mut out = Vec::new();
    for k in 0..=k_max {
        let w = window(k);
        out.push(Fitted { name: format!("R0{k}/L^(1/2)"), result: fit_laurent_in_generator(&e.r[0][k].div(&sqrt_l)?, &l, w, surplus) });
        out.push(Fitted { name: format!("R1{k}/L^(1/2)"), result: fit_laurent_in_generator(&e.r[1][k].div(&sqrt_l)?, &l, w, surplus) });
        out.push(Fitted { name: format!("R3{k}/L^(1/2)"), result: fit_laurent_in_generator(&e.r[3][k].div(&sqrt_l)?, &l, w, surplus) });
        // R_{2k} + (R_{1,k−1}/L)𝒳 must lie in C[L^{±1}].
        let target = if k == 0 { e.r[2][0].clone() } else { e.r[2][k].add(&e.r[1][k - 1].div(&l)?.mul(&x)) };
        out.push(Fitted { name: format!("Q2{k}/L^(1/2)"), result: fit_laurent_in_generator(&target.div(&sqrt_l)?, &l, w, surplus) });
    }
    Ok(out)
}

/// R₁ = L^{1/2}(3/(32L) + 1/24 − 13L³/96).
pub fn r1_closed_form(order: usize) -> Result<Series<Q>> {
    let l = l_series_16(order);
    let inner = l.inv()?.scale_q(&q(3, 32)).add_const(&q(1, 24)).sub(&l.pow_int(3)?.scale_q(&q(13, 96)));
    Ok(l.pow(&q(1, 2))?.mul(&inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birkhoff::s_tower;
    use crate::geometry::{base_series, i_twisted_p3_at, Geometry};

    #[test]
    fn trivial_exponential_is_recovered() {
        // F = e^{a q/z}(1 + b q z): q-terms 1, a/z + b z
        let mut p = i_twisted_p3_at(qi(1), 1);
        let (a, b) = (qi(3), qi(5));
        p.den = vec![crate::algebra::Poly::one(), crate::algebra::Poly::monomial(qi(1), 1)];
        p.num = vec![crate::algebra::Poly::one(), crate::algebra::Poly::new(vec![a.clone(), qi(0), b.clone()])];
        let ex = extract(&p, 2).unwrap();
        assert_eq!(ex.u.coeffs(), &[qi(0), a]);
        assert_eq!(ex.w[1].coeffs(), &[qi(0), b]);
        assert!(ex.w[2].is_zero());
    }

    #[test]
    fn twisted_r0_r1_mu() {
        let n = 5;
        let t = s_tower(&Geometry::TwistedP3, n).unwrap();
        let e = extract_twisted(&t, 1, 3).unwrap();
        let l = l_series_16(n);
        assert_eq!(e.mu.d().add_const(&qi(1)), l);
        assert_eq!(e.r[0][0], l.pow(&q(1, 2)).unwrap());
        assert_eq!(e.r[0][1], r1_closed_form(n).unwrap());
        assert_eq!(e.r[0][1].coeff(0), &qi(0));
        assert!(e.r.iter().all(|row| row[0].coeff(0) == &qi(1)));
        // point independence
        assert_eq!(e, extract_twisted(&t, 2, 3).unwrap());
    }

    #[test]
    fn recursion_residuals_vanish() {
        let n = 4;
        let t = s_tower(&Geometry::TwistedP3, n).unwrap();
        let e = extract_twisted(&t, 0, 3).unwrap();
        for (name, r) in verify_recursions(&e, &t.c[1], 1).unwrap() {
            assert!(r.is_zero(), "{name}: {r}");
        }
    }

    #[test]
    fn low_structure_fits() {
        let t = s_tower(&Geometry::TwistedP3, 9).unwrap();
        let e = extract_twisted(&t, 0, 1).unwrap();
        let fits = structure_check(&e, &t.c[1], 1, |k| (-(k as i64), 3 * k as i64), 5).unwrap();
        for f in &fits {
            assert!(f.result.is_ok(), "{}: {:?}", f.name, f.result);
        }
        let r11 = fits.iter().find(|f| f.name.starts_with("R11")).unwrap();
        let want: BTreeMap<i64, Q> = [(-1, q(-1, 32)), (0, q(1, 24)), (3, q(-1, 96))].into_iter().collect();
        assert_eq!(r11.result.as_ref().unwrap(), &want);
    }

    #[test]
    fn drule_and_a2() {
        assert!(drule_residual(8).unwrap().is_zero());
        let t = s_tower(&Geometry::LocalP1P1, 4).unwrap();
        let (x, a2) = a2_and_chi(&t).unwrap();
        assert_eq!(x.coeff(0), &qi(0));
        assert_eq!(a2.coeff(0), &q(1, 4));
        assert_eq!(&a2, base_series(&Geometry::LocalP1P1, 4).unwrap().get("A2"));
    }
}
