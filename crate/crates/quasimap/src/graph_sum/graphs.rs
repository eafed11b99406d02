//! Decorated localization graphs: vertices with genus and fixed-point labels,
//! edges (self-edges and multi-edges allowed) and markings.

use itertools::Itertools;
use std::collections::BTreeSet;

/// Torus-fixed points of P¹×P¹.
pub const FIXED_POINTS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoratedGraph {
    pub genus: Vec<u32>,
    pub point: Vec<usize>,
    /// `(u, v)` with `u ≤ v`, sorted; `u == v` is a self-edge.
    pub edges: Vec<(usize, usize)>,
    /// `marks[i]` carries marking i + 1.
    pub marks: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlagKind {
    /// Side 0 sits at `edges[edge].0`, side 1 at `edges[edge].1`.
    Half {
        edge: usize,
        side: usize,
    },
    Leg(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flag {
    pub vertex: usize,
    pub kind: FlagKind,
}

impl DecoratedGraph {
    pub fn vertices(&self) -> usize {
        self.genus.len()
    }

    pub fn h1(&self) -> u32 {
        (self.edges.len() + 1 - self.vertices()) as u32
    }

    /// Σ g(v) + h¹(Γ).
    pub fn total_genus(&self) -> u32 {
        self.genus.iter().sum::<u32>() + self.h1()
    }

    pub fn valence(&self, v: usize) -> usize {
        let e: usize = self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum();
        e + self.marks.iter().filter(|&&m| m == v).count()
    }

    pub fn flags(&self) -> Vec<Flag> {
        let mut out = Vec::new();
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            out.push(Flag { vertex: a, kind: FlagKind::Half { edge: e, side: 0 } });
            out.push(Flag { vertex: b, kind: FlagKind::Half { edge: e, side: 1 } });
        }
        for (i, &v) in self.marks.iter().enumerate() {
            out.push(Flag { vertex: v, kind: FlagKind::Leg(i) });
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            for &(a, b) in &self.edges {
                if a == v && !seen[b] {
                    stack.push(b);
                }
                if b == v && !seen[a] {
                    stack.push(a);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Every vertex satisfies 2g(v) − 2 + val(v) > 0.
    pub fn is_stable(&self) -> bool {
        (0..self.vertices()).all(|v| 2 * self.genus[v] as i64 - 2 + self.valence(v) as i64 > 0)
    }

    /// Relabel vertex v as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.vertices();
        let mut genus = vec![0; n];
        let mut point = vec![0; n];
        for v in 0..n {
            genus[perm[v]] = self.genus[v];
            point[perm[v]] = self.point[v];
        }
        let mut edges: Vec<_> = self.edges.iter().map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b]))).collect();
        edges.sort_unstable();
        DecoratedGraph { genus, point, edges, marks: self.marks.iter().map(|&m| perm[m]).collect() }
    }

    pub fn canonical(&self) -> Self {
        (0..self.vertices()).permutations(self.vertices()).map(|p| self.permuted(&p)).min().expect("non-empty graph")
    }

    /// |Aut Γ|: vertex relabelings fixing Γ, times the permutations of parallel
    /// edges and the flips of self-edges.
    pub fn automorphisms(&self) -> u64 {
        let fixing = (0..self.vertices()).permutations(self.vertices()).filter(|p| self.permuted(p) == *self).count() as u64;
        let mut extra = 1u64;
        for (_, group) in &self.edges.iter().chunk_by(|e| **e) {
            extra *= (1..=group.count() as u64).product::<u64>();
        }
        extra *= 1 << self.edges.iter().filter(|(a, b)| a == b).count();
        fixing * extra
    }
}

/// Undecorated graphs (all vertices at point 0) of type (g, n), up to isomorphism.
fn topologies(g: u32, n: usize) -> Vec<DecoratedGraph> {
    let max_v = (2 * g as usize + n).saturating_sub(2).max(1);
    let mut found = BTreeSet::new();
    for v in 1..=max_v {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
        for genus in (0..v).map(|_| 0..=g).multi_cartesian_product() {
            let sum: u32 = genus.iter().sum();
            if sum > g {
                continue;
            }
            let e = (g - sum) as usize + v - 1;
            for edges in pairs.iter().copied().combinations_with_replacement(e) {
                for marks in (0..n).map(|_| 0..v).multi_cartesian_product() {
                    let gr = DecoratedGraph { genus: genus.clone(), point: vec![0; v], edges: edges.clone(), marks };
                    if gr.is_connected() && gr.is_stable() {
                        found.insert(gr.canonical());
                    }
                }
            }
        }
    }
    found.into_iter().collect()
}

fn decorate(top: &DecoratedGraph, points: usize) -> Vec<DecoratedGraph> {
    let mut found = BTreeSet::new();
    for labels in (0..top.vertices()).map(|_| 0..points).multi_cartesian_product() {
        let gr = DecoratedGraph { point: labels, ..top.clone() };
        found.insert(gr.canonical());
    }
    found.into_iter().collect()
}

/// Decorated graphs of type (g, n) over `points` fixed points, with |Aut|.
///
/// In the stable range every vertex is stable. The two unstable types use
/// the following sets: (0,2) is two vertices joined by one edge, one marking
/// on each; (1,0) is a lone genus-one vertex or a genus-zero vertex with a
/// self-edge.
pub fn enumerate_graphs_over(g: u32, n: usize, points: usize) -> Vec<(DecoratedGraph, u64)> {
    let tops = match (g, n) {
        (0, 0) | (0, 1) => Vec::new(),
        (0, 2) => vec![DecoratedGraph { genus: vec![0, 0], point: vec![0, 0], edges: vec![(0, 1)], marks: vec![0, 1] }],
        (1, 0) => vec![
            DecoratedGraph { genus: vec![1], point: vec![0], edges: vec![], marks: vec![] },
            DecoratedGraph { genus: vec![0], point: vec![0], edges: vec![(0, 0)], marks: vec![] },
        ],
        _ => topologies(g, n),
    };
    let mut out: Vec<_> = tops
        .iter()
        .flat_map(|t| decorate(t, points))
        .map(|gr| {
            let a = gr.automorphisms();
            (gr, a)
        })
        .collect();
    out.sort();
    out
}

pub fn enumerate_graphs(g: u32, n: usize) -> Vec<(DecoratedGraph, u64)> {
    enumerate_graphs_over(g, n, FIXED_POINTS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{qi, Q};

    /// Σ_V 1/V! Σ over labelled graphs of 1/(Π mult! · 2^{loops}), computed
    /// without any isomorphism test.
    fn labelled_mass(g: u32, n: usize, points: usize) -> Q {
        let max_v = (2 * g as usize + n).saturating_sub(2).max(1);
        let mut total = qi(0);
        for v in 1..=max_v {
            let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
            let vfact: i64 = (1..=v as i64).product();
            for genus in (0..v).map(|_| 0..=g).multi_cartesian_product() {
                let sum: u32 = genus.iter().sum();
                if sum > g {
                    continue;
                }
                let e = (g - sum) as usize + v - 1;
                for edges in pairs.iter().copied().combinations_with_replacement(e) {
                    for marks in (0..n).map(|_| 0..v).multi_cartesian_product() {
                        let gr = DecoratedGraph { genus: genus.clone(), point: vec![0; v], edges: edges.clone(), marks };
                        if !(gr.is_connected() && gr.is_stable()) {
                            continue;
                        }
                        let mut w: i64 = 1 << edges.iter().filter(|(a, b)| a == b).count();
                        for (_, grp) in &edges.iter().chunk_by(|x| **x) {
                            w *= (1..=grp.count() as i64).product::<i64>();
                        }
                        let labellings = (points as i64).pow(v as u32);
                        total += Q::new(labellings.into(), (w * vfact).into());
                    }
                }
            }
        }
        total
    }

    fn mass(gs: &[(DecoratedGraph, u64)]) -> Q {
        gs.iter().map(|(_, a)| Q::new(1.into(), (*a as i64).into())).sum()
    }

    #[test]
    fn two_point_unstable_type() {
        let gs = enumerate_graphs(0, 2);
        assert_eq!(gs.len(), 16);
        assert!(gs.iter().all(|(_, a)| *a == 1));
    }

    #[test]
    fn genus_one_no_markings() {
        let gs = enumerate_graphs(1, 0);
        assert_eq!(gs.len(), 8);
        assert_eq!(gs.iter().filter(|(g, a)| g.edges.len() == 1 && *a == 2).count(), 4);
    }

    #[test]
    fn genus_two_bridge_has_swap() {
        let gs = enumerate_graphs(2, 0);
        let bridge = gs.iter().find(|(g, _)| g.genus == vec![1, 1] && g.point == vec![2, 2] && g.edges == vec![(0, 1)]).unwrap();
        assert_eq!(bridge.1, 2);
        for (gr, _) in &gs {
            assert_eq!(gr.total_genus(), 2);
            assert!(gr.is_stable() && gr.is_connected());
        }
    }

    #[test]
    fn mass_formula_matches_brute_force() {
        for (g, n, p) in [(0, 3, 4), (0, 4, 2), (1, 1, 4), (1, 2, 3), (2, 0, 4), (2, 1, 2), (2, 2, 1)] {
            let gs = enumerate_graphs_over(g, n, p);
            assert_eq!(mass(&gs), labelled_mass(g, n, p), "(g, n, points) = ({g}, {n}, {p})");
        }
    }

    #[test]
    fn classes_are_distinct_and_canonical() {
        let gs = enumerate_graphs(2, 1);
        let set: BTreeSet<_> = gs.iter().map(|(g, _)| g.clone()).collect();
        assert_eq!(set.len(), gs.len());
        assert!(gs.iter().all(|(g, _)| g.canonical() == *g));
    }
}
