//! Vertex contributions and the sum over decorated graphs.

use super::correlator::reduce_correlator;
use super::edge::{edge_contribution, leg_contribution, EdgeData, EdgeMatrix};
use super::graphs::{enumerate_graphs_over, DecoratedGraph, FlagKind};
use super::hodge::{HodgeTable, LambdaMono};
use crate::algebra::{factorial, parse_q, Coeff, Cyc, Series, Q};
use crate::{Error, Result};
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::BTreeMap;

/// Π_w Σ_{i≤g} (−1)^i λ_i w^{g−1−i}, expanded in λ-monomials (g ≤ 2).
pub fn hodge_class(g: u32, weights: &[Cyc]) -> Result<BTreeMap<LambdaMono, Cyc>> {
    if g > 2 {
        return Err(Error::MissingHodge(format!("Hodge class in genus {g}")));
    }
    let mut out = BTreeMap::from([((0, 0), Cyc::one())]);
    for w in weights {
        let winv = w.inv().ok_or(Error::NonUnitDivisor)?;
        let power = |e: i64| if e >= 0 { w.pow(e as u32) } else { winv.pow((-e) as u32) };
        let factor: Vec<(LambdaMono, Cyc)> = (0..=g)
            .map(|i| {
                let mono = match i {
                    0 => (0, 0),
                    1 => (1, 0),
                    _ => (0, 1),
                };
                let c = power(g as i64 - 1 - i as i64);
                (mono, if i % 2 == 0 { c } else { c.neg() })
            })
            .collect();
        let mut next = BTreeMap::new();
        for ((a1, a2), c) in &out {
            for ((b1, b2), d) in &factor {
                let slot: &mut Cyc = next.entry((a1 + b1, a2 + b2)).or_insert_with(Cyc::zero);
                *slot = slot.add(&c.mul(d));
            }
        }
        out = next;
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// Genus-zero local data at the torus-fixed points.
pub trait LocalCorrelatorProvider {
    fn points(&self) -> usize;
    fn order(&self) -> usize;
    /// ⟨⟨1,1⟩⟩_{0,2} at the point.
    fn u(&self, point: usize) -> &Series<Cyc>;
    /// s_k = ⟨⟨1,…,1⟩⟩_{0,k+3} at the point, k = 0, 1, ….
    fn s(&self, point: usize) -> &[Series<Cyc>];
    /// The weights w entering the Hodge class at the point.
    fn hodge_weights(&self, point: usize) -> &[Cyc];
}

/// Provider data read from JSON. Elements of Q(i) are `[re, im]` pairs of
/// rationals written as strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProviderCache {
    pub order: usize,
    pub points: Vec<PointCache>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCache {
    pub weights: Vec<[String; 2]>,
    pub u: Vec<[String; 2]>,
    pub s: Vec<Vec<[String; 2]>>,
}

/// Provider data held in memory.
#[derive(Clone, Debug, PartialEq)]
pub struct TableProvider {
    order: usize,
    u: Vec<Series<Cyc>>,
    s: Vec<Vec<Series<Cyc>>>,
    weights: Vec<Vec<Cyc>>,
}

fn gauss(c: &[String; 2]) -> Result<Cyc> {
    let p = |s: &str| parse_q(s).ok_or_else(|| Error::Parse(format!("bad rational {s}")));
    Ok(Cyc::rat(p(&c[0])?).add(&Cyc::zeta_pow(4, 1).scale(&p(&c[1])?)))
}

fn ungauss(c: &Cyc) -> [String; 2] {
    let v = c.coords(4);
    [crate::algebra::fmt_q(&v[0]), crate::algebra::fmt_q(&v[1])]
}

impl TableProvider {
    pub fn new(order: usize, u: Vec<Series<Cyc>>, s: Vec<Vec<Series<Cyc>>>, weights: Vec<Vec<Cyc>>) -> Result<Self> {
        if u.len() != s.len() || u.len() != weights.len() {
            return Err(Error::Parse("provider: point counts differ".into()));
        }
        let short = u.iter().chain(s.iter().flatten()).any(|x| x.order() < order);
        if short {
            return Err(Error::InsufficientOrder(format!("provider series shorter than q^{order}")));
        }
        Ok(TableProvider { order, u, s, weights })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: ProviderCache = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let series = |v: &[[String; 2]]| -> Result<Series<Cyc>> { Ok(Series::new(v.iter().map(gauss).collect::<Result<_>>()?)) };
        let mut u = Vec::new();
        let mut s = Vec::new();
        let mut weights = Vec::new();
        for p in &c.points {
            weights.push(p.weights.iter().map(gauss).collect::<Result<_>>()?);
            u.push(series(&p.u)?);
            s.push(p.s.iter().map(|x| series(x)).collect::<Result<_>>()?);
        }
        Self::new(c.order, u, s, weights)
    }

    pub fn to_json(&self) -> String {
        let series = |x: &Series<Cyc>| x.coeffs().iter().take(self.order + 1).map(ungauss).collect();
        let c = ProviderCache {
            order: self.order,
            points: (0..self.u.len())
                .map(|p| PointCache {
                    weights: self.weights[p].iter().map(ungauss).collect(),
                    u: series(&self.u[p]),
                    s: self.s[p].iter().map(series).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&c).expect("provider cache serializes")
    }

    /// Whether U_i agrees with the exponent extracted from the S-tower.
    pub fn matches_tower(&self, ed: &EdgeData) -> bool {
        let n = self.order.min(ed.order());
        self.u.len() == ed.points() && self.u.iter().zip(&ed.u).all(|(a, b)| a.truncate(n) == b.truncate(n))
    }
}

impl LocalCorrelatorProvider for TableProvider {
    fn points(&self) -> usize {
        self.u.len()
    }
    fn order(&self) -> usize {
        self.order
    }
    fn u(&self, point: usize) -> &Series<Cyc> {
        &self.u[point]
    }
    fn s(&self, point: usize) -> &[Series<Cyc>] {
        &self.s[point]
    }
    fn hodge_weights(&self, point: usize) -> &[Cyc] {
        &self.weights[point]
    }
}

/// 𝖯[ψ^{a₁−1},…,ψ^{aₙ−1} | 𝖧_g] evaluated on the provider's series at `point`.
/// Genus-zero vertices with two flags use ⟨⟨ψ^a,ψ^b⟩⟩ = U^{a+b+1}/(a! b! (a+b+1)).
pub fn vertex_contribution(g: u32, point: usize, a: &[usize], provider: &impl LocalCorrelatorProvider, table: &HodgeTable) -> Result<Series<Cyc>> {
    assert!(a.iter().all(|&x| x >= 1), "flag values start at 1");
    let n = provider.order();
    let class = hodge_class(g, provider.hodge_weights(point))?;
    let psi: Vec<u32> = a.iter().map(|&x| x as u32 - 1).collect();
    if g == 0 && a.len() == 2 {
        let (p, r) = (psi[0] as u64, psi[1] as u64);
        let k = p + r + 1;
        let c = Q::from_integer(1.into()) / Q::from_integer(factorial(p) * factorial(r) * num_bigint::BigInt::from(k));
        let scalar = class.get(&(0, 0)).cloned().unwrap_or_else(Cyc::zero);
        return Ok(provider.u(point).truncate(n).pow_int(k as i64)?.scale(&scalar.scale(&c)));
    }
    if 2 * g as i64 - 2 + a.len() as i64 <= 0 {
        return Err(Error::Unstable(format!("vertex of genus {g} with {} flags", a.len())));
    }
    let mut acc = Series::zero(n);
    for (lam, c) in &class {
        let pf = reduce_correlator(g, &psi, *lam, table)?;
        if pf.is_zero() {
            continue;
        }
        acc = acc.add(&pf.eval(provider.s(point))?.truncate(n).scale(c));
    }
    Ok(acc)
}

/// The three local factors of a graph contribution.
pub trait GraphWeights {
    /// q-order of every contribution.
    fn order(&self) -> usize;
    /// `a` lists the flag values at the vertex in flag order.
    fn vertex(&self, genus: u32, point: usize, a: &[usize]) -> Result<Series<Cyc>>;
    /// Must satisfy edge(i, j, b₁, b₂) = edge(j, i, b₂, b₁).
    fn edge(&self, i: usize, j: usize, b1: usize, b2: usize) -> Result<Series<Cyc>>;
    fn leg(&self, point: usize, class: usize, a: usize) -> Result<Series<Cyc>>;
}

/// Local P¹×P¹ weights: legs and edges from the S-tower, vertices from a provider.
pub struct LocalWeights<'a, P> {
    pub edges: &'a EdgeData,
    pub provider: &'a P,
    pub table: &'a HodgeTable,
    cache: RefCell<BTreeMap<(usize, usize), EdgeMatrix>>,
}

impl<'a, P: LocalCorrelatorProvider> LocalWeights<'a, P> {
    pub fn new(edges: &'a EdgeData, provider: &'a P, table: &'a HodgeTable) -> Self {
        LocalWeights { edges, provider, table, cache: RefCell::new(BTreeMap::new()) }
    }
}

impl<P: LocalCorrelatorProvider> GraphWeights for LocalWeights<'_, P> {
    fn order(&self) -> usize {
        self.edges.order().min(self.provider.order())
    }
    fn vertex(&self, genus: u32, point: usize, a: &[usize]) -> Result<Series<Cyc>> {
        vertex_contribution(genus, point, a, self.provider, self.table)
    }
    fn edge(&self, i: usize, j: usize, b1: usize, b2: usize) -> Result<Series<Cyc>> {
        let mut cache = self.cache.borrow_mut();
        if !cache.contains_key(&(i, j)) {
            cache.insert((i, j), self.edges.edge_from_asymptotics(i, j)?);
        }
        edge_contribution(&cache[&(i, j)], b1, b2)
    }
    fn leg(&self, point: usize, class: usize, a: usize) -> Result<Series<Cyc>> {
        leg_contribution(self.edges, point, class, a)
    }
}

/// Value vectors a ≥ 1 of length `len` with Σ(a − 1) ≤ bound.
fn flag_values(len: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for extra in 0..=left {
            cur.push(extra + 1);
            rec(len, left - extra, cur, out);
            cur.pop();
        }
    }
    rec(len, bound, &mut cur, &mut out);
    out
}

/// Σ_A Π_v Cont(v) Π_e Cont(e) Π_l Cont(l) for one graph, without 1/|Aut|.
/// Marking i carries the class (H₁+H₂)^{insertions[i]}.
pub fn graph_contribution(gr: &DecoratedGraph, insertions: &[usize], w: &impl GraphWeights) -> Result<Series<Cyc>> {
    let order = w.order();
    let flags = gr.flags();
    let at: Vec<Vec<usize>> = (0..gr.vertices()).map(|v| (0..flags.len()).filter(|&f| flags[f].vertex == v).collect()).collect();
    let per_vertex: Vec<Vec<Vec<usize>>> = at
        .iter()
        .enumerate()
        .map(|(v, fs)| {
            let g = gr.genus[v] as i64;
            let dim = 3 * g - 3 + fs.len() as i64;
            // unstable genus-zero vertices are bounded by the q-order instead
            let bound = if 2 * g - 2 + fs.len() as i64 > 0 { dim.max(0) as usize } else { order.saturating_sub(1) };
            flag_values(fs.len(), bound)
        })
        .collect();
    let mut vertex_cache: BTreeMap<(usize, Vec<usize>), Series<Cyc>> = BTreeMap::new();
    let mut acc = Series::zero(order);
    for choice in per_vertex.iter().map(|c| c.iter()).multi_cartesian_product() {
        let mut val = vec![0; flags.len()];
        for (fs, vals) in at.iter().zip(&choice) {
            for (f, a) in fs.iter().zip(vals.iter()) {
                val[*f] = *a;
            }
        }
        let mut term = Series::one(order);
        for (v, vals) in choice.iter().enumerate() {
            let key = (v, (*vals).clone());
            if !vertex_cache.contains_key(&key) {
                vertex_cache.insert(key.clone(), w.vertex(gr.genus[v], gr.point[v], vals)?.truncate(order));
            }
            term = term.mul(&vertex_cache[&key]);
        }
        for (e, &(a, b)) in gr.edges.iter().enumerate() {
            let half = |side| flags.iter().position(|f| f.kind == FlagKind::Half { edge: e, side }).map(|f| val[f]).expect("edge flags");
            term = term.mul(&w.edge(gr.point[a], gr.point[b], half(0), half(1))?.truncate(order));
        }
        for (f, flag) in flags.iter().enumerate() {
            if let FlagKind::Leg(i) = flag.kind {
                term = term.mul(&w.leg(gr.point[flag.vertex], insertions[i], val[f])?.truncate(order));
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Σ_Γ Cont_Γ/|Aut Γ| over decorated graphs of type (g, insertions.len()).
pub fn assemble(g: u32, insertions: &[usize], points: usize, w: &impl GraphWeights) -> Result<Series<Cyc>> {
    let mut acc = Series::zero(w.order());
    for (gr, aut) in enumerate_graphs_over(g, insertions.len(), points) {
        let c = graph_contribution(&gr, insertions, w)?;
        acc = acc.add(&c.scale_q(&Q::new(1.into(), (aut as i64).into())));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    #[test]
    fn hodge_class_expansion() {
        let w = [Cyc::rat(qi(2)), Cyc::rat(qi(3)), Cyc::rat(qi(-5))];
        let c0 = hodge_class(0, &w).unwrap();
        assert_eq!(c0, BTreeMap::from([((0, 0), Cyc::rat(q(-1, 30)))]));
        // genus one: Π (1 − λ₁/w) = 1 − λ₁ Σ 1/w (λ₁² = 0 is left to the table)
        let c1 = hodge_class(1, &w).unwrap();
        assert_eq!(c1[&(1, 0)], Cyc::rat(-(q(1, 2) + q(1, 3) - q(1, 5))));
        assert_eq!(c1[&(0, 0)], Cyc::one());
        let c2 = hodge_class(2, &w).unwrap();
        assert_eq!(c2[&(0, 0)], Cyc::rat(qi(-30)));
        assert_eq!(c2[&(0, 3)], Cyc::rat(q(-1, 30)));
        assert!(hodge_class(3, &w).is_err());
    }

    fn provider() -> TableProvider {
        let n = 3;
        let ser = |c: &[i64]| Series::new(c.iter().map(|&x| Cyc::rat(qi(x))).collect());
        let u = vec![ser(&[0, 1, 2, 3]), ser(&[0, -1, 5, 1])];
        let s = vec![vec![ser(&[1, 2, 0, 1]), ser(&[0, 1, 1, 1]), ser(&[0, 0, 1, 2])], vec![ser(&[2, 1, 1, 0]), ser(&[1, 0, 0, 3]), ser(&[0, 1, 0, 0])]];
        let i = Cyc::zeta_pow(4, 1);
        let weights = vec![vec![Cyc::one(), i.clone(), i.neg().add(&Cyc::one().neg())], vec![Cyc::rat(qi(2)), Cyc::rat(qi(-1)), Cyc::rat(qi(-1))]];
        TableProvider::new(n, u, s, weights).unwrap()
    }

    #[test]
    fn vertex_examples() {
        let p = provider();
        let t = HodgeTable::builtin();
        // ⟨⟨1,1,1⟩⟩_{0,3} is s₀ itself
        let v = vertex_contribution(0, 1, &[1, 1, 1], &p, &t).unwrap();
        assert_eq!(v, p.s(1)[0].scale(&Cyc::rat(q(1, 2))));
        // beyond the dimension bound
        let z = vertex_contribution(0, 0, &[2, 2, 1], &p, &t).unwrap();
        assert!(z.is_zero());
        // unstable two-point vertex: U^{a+b+1}/(a! b! (a+b+1)) times the class
        let two = vertex_contribution(0, 1, &[2, 1], &p, &t).unwrap();
        assert_eq!(two, p.u(1).pow_int(2).unwrap().scale(&Cyc::rat(q(1, 4))));
        assert!(matches!(vertex_contribution(1, 0, &[], &p, &t), Err(Error::Unstable(_))));
    }

    #[test]
    fn genus_one_vertex_uses_lambda() {
        // (1,1) with class 1 − λ₁Σ1/w: (1/24)s₁/s₀ − (Σ1/w)·⟨⟨1|λ₁⟩⟩_{1,1}
        let p = provider();
        let t = HodgeTable::builtin();
        let v = vertex_contribution(1, 1, &[1], &p, &t).unwrap();
        let s = p.s(1);
        let psi = s[1].div(&s[0]).unwrap().scale(&Cyc::rat(q(1, 24)));
        let lam = reduce_correlator(1, &[0], (1, 0), &t).unwrap().eval(s).unwrap();
        // Σ 1/w = 1/2 − 1 − 1
        assert_eq!(v, psi.add(&lam.scale(&Cyc::rat(q(3, 2)))));
    }

    #[test]
    fn provider_round_trip() {
        let p = provider();
        assert_eq!(TableProvider::from_json(&p.to_json()).unwrap(), p);
        assert!(TableProvider::from_json("{\"order\": 2}").is_err());
    }

    /// Rational stand-ins with the symmetries real contributions have.
    struct Synthetic;

    impl GraphWeights for Synthetic {
        fn order(&self) -> usize {
            3
        }
        fn vertex(&self, genus: u32, point: usize, a: &[usize]) -> Result<Series<Cyc>> {
            let sym: i64 = a.iter().map(|&x| (x * x) as i64).sum::<i64>() + a.iter().product::<usize>() as i64;
            let c = (genus as i64 + 2) * (point as i64 + 1) + sym;
            Ok(Series::new(vec![Cyc::rat(q(c, 7)), Cyc::rat(qi(point as i64 - 1)), Cyc::rat(qi(sym)), Cyc::one()]))
        }
        fn edge(&self, i: usize, j: usize, b1: usize, b2: usize) -> Result<Series<Cyc>> {
            let f = |p: usize, b: usize| (p as i64 + 1) * (b as i64) - 2 * (p as i64);
            let c = f(i, b1) + f(j, b2) + f(i, b1) * f(j, b2);
            Ok(Series::new(vec![Cyc::rat(qi(1)), Cyc::rat(q(c, 3)), Cyc::rat(qi((i * j) as i64 + b1 as i64 * b2 as i64))]))
        }
        fn leg(&self, point: usize, class: usize, a: usize) -> Result<Series<Cyc>> {
            Ok(Series::new(vec![Cyc::rat(qi(point as i64 + 1)), Cyc::rat(qi((class + a) as i64))]))
        }
    }

    /// The sum over all vertex-labelled graphs with weight 1/(V! Π mult! 2^{loops}).
    fn labelled_sum(g: u32, insertions: &[usize], points: usize, w: &impl GraphWeights) -> Series<Cyc> {
        let n = insertions.len();
        let max_v = (2 * g as usize + n).saturating_sub(2).max(1);
        let mut acc = Series::zero(w.order());
        for v in 1..=max_v {
            let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
            let vfact: i64 = (1..=v as i64).product();
            for genus in (0..v).map(|_| 0..=g).multi_cartesian_product() {
                let sum: u32 = genus.iter().sum();
                if sum > g {
                    continue;
                }
                for edges in pairs.iter().copied().combinations_with_replacement((g - sum) as usize + v - 1) {
                    for marks in (0..n).map(|_| 0..v).multi_cartesian_product() {
                        for point in (0..v).map(|_| 0..points).multi_cartesian_product() {
                            let gr = DecoratedGraph { genus: genus.clone(), point, edges: edges.clone(), marks: marks.clone() };
                            if !(gr.is_connected() && gr.is_stable()) {
                                continue;
                            }
                            let mut d: i64 = 1 << edges.iter().filter(|(a, b)| a == b).count();
                            for (_, grp) in &edges.iter().chunk_by(|x| **x) {
                                d *= (1..=grp.count() as i64).product::<i64>();
                            }
                            let c = graph_contribution(&gr, insertions, w).unwrap();
                            acc = acc.add(&c.scale_q(&Q::new(1.into(), (d * vfact).into())));
                        }
                    }
                }
            }
        }
        acc
    }

    #[test]
    fn automorphism_factors() {
        for (g, ins, points) in [(1u32, vec![0usize], 3usize), (1, vec![1, 0], 2), (2, vec![], 2)] {
            let a = assemble(g, &ins, points, &Synthetic).unwrap();
            let b = labelled_sum(g, &ins, points, &Synthetic);
            assert_eq!(a, b, "g={g} insertions={ins:?}");
        }
    }

    /// Synthetic weights precomposed with a permutation of the fixed points.
    struct Relabeled<'a>(&'a Synthetic, [usize; 4]);

    impl GraphWeights for Relabeled<'_> {
        fn order(&self) -> usize {
            self.0.order()
        }
        fn vertex(&self, genus: u32, point: usize, a: &[usize]) -> Result<Series<Cyc>> {
            self.0.vertex(genus, self.1[point], a)
        }
        fn edge(&self, i: usize, j: usize, b1: usize, b2: usize) -> Result<Series<Cyc>> {
            self.0.edge(self.1[i], self.1[j], b1, b2)
        }
        fn leg(&self, point: usize, class: usize, a: usize) -> Result<Series<Cyc>> {
            self.0.leg(self.1[point], class, a)
        }
    }

    #[test]
    fn point_relabeling_invariance() {
        let base = assemble(1, &[1], 4, &Synthetic).unwrap();
        let swapped = assemble(1, &[1], 4, &Relabeled(&Synthetic, [0, 2, 1, 3])).unwrap();
        assert_eq!(base, swapped);
    }

    #[test]
    fn flag_value_bounds() {
        assert_eq!(flag_values(2, 1), vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
        assert_eq!(flag_values(0, 3), vec![Vec::<usize>::new()]);
        assert_eq!(flag_values(3, 2).len(), 10);
    }
}
