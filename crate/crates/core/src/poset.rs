//! Finite posets on at most 64 elements, their order and chain polytopes and
//! the parametric families `Pi1`..`Pi4`.
//!
//! Elements are 0-based internally; documents and family parameters use
//! 1-based labels `p_1..p_d`.

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, Canonical};
use crate::error::{Error, Result};
use crate::graph::{bits, indicator, SimpleGraph};
use crate::polytope::LatticePolytope;

pub const ENUMERATION_LIMIT: usize = 24;

/// `above[i]` holds every `j` with `p_i < p_j`; `covers` is the transitive
/// reduction, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    size: usize,
    above: Vec<u64>,
    below: Vec<u64>,
    covers: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDoc {
    pub size: usize,
    pub covers: Vec<[usize; 2]>,
}

impl Poset {
    /// Builds the poset generated by `relations` (`(i, j)` means `p_i < p_j`, 0-based).
    pub fn new(size: usize, relations: &[(usize, usize)]) -> Result<Self> {
        if size > 64 {
            return Err(Error::TooLarge(format!("{size} elements (limit 64)")));
        }
        let mut above = vec![0u64; size];
        for &(i, j) in relations {
            if i >= size || j >= size {
                return Err(Error::BadInput(format!("relation ({}, {}) outside 1..{size}", i + 1, j + 1)));
            }
            above[i] |= 1 << j;
        }
        // Warshall closure over bitmasks
        for k in 0..size {
            for i in 0..size {
                if above[i] >> k & 1 == 1 {
                    above[i] |= above[k];
                }
            }
        }
        if (0..size).any(|i| above[i] >> i & 1 == 1) {
            return Err(Error::BadInput("relations contain a cycle".into()));
        }
        let mut below = vec![0u64; size];
        for i in 0..size {
            for j in bits(above[i]) {
                below[j] |= 1 << i;
            }
        }
        let mut covers = Vec::new();
        for i in 0..size {
            let implied = bits(above[i]).fold(0u64, |m, k| m | above[k]);
            covers.extend(bits(above[i] & !implied).map(|j| (i, j)));
        }
        Ok(Poset { size, above, below, covers })
    }

    pub fn from_labels(size: usize, relations: &[(usize, usize)]) -> Result<Self> {
        if relations.iter().any(|&(a, b)| a == 0 || b == 0) {
            return Err(Error::BadInput("labels are 1-based".into()));
        }
        Self::new(size, &relations.iter().map(|&(a, b)| (a - 1, b - 1)).collect::<Vec<_>>())
    }

    pub fn antichain(size: usize) -> Self {
        Self::new(size, &[]).unwrap()
    }

    pub fn chain(size: usize) -> Self {
        Self::new(size, &(1..size).map(|i| (i - 1, i)).collect::<Vec<_>>()).unwrap()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        self.above[i] >> j & 1 == 1
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.less(i, j) || self.less(j, i)
    }

    pub fn above(&self, i: usize) -> u64 {
        self.above[i]
    }

    pub fn below(&self, i: usize) -> u64 {
        self.below[i]
    }

    pub fn minimal(&self) -> u64 {
        (0..self.size).filter(|&i| self.below[i] == 0).fold(0, |m, i| m | 1 << i)
    }

    pub fn maximal(&self) -> u64 {
        (0..self.size).filter(|&i| self.above[i] == 0).fold(0, |m, i| m | 1 << i)
    }

    /// Edges of the Hasse diagram of the poset with a new bottom and top adjoined.
    pub fn hasse_edge_count(&self) -> usize {
        if self.size == 0 {
            return 1;
        }
        self.covers.len() + self.minimal().count_ones() as usize + self.maximal().count_ones() as usize
    }

    pub fn hibi_rank(&self) -> usize {
        self.hasse_edge_count() - self.size - 1
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.size > ENUMERATION_LIMIT {
            return Err(Error::TooLarge(format!("{} elements (enumeration limit {ENUMERATION_LIMIT})", self.size)));
        }
        Ok(())
    }

    /// Down-closed subsets as bitmasks in increasing order.
    pub fn ideals(&self) -> Result<Vec<u64>> {
        self.check_enumerable()?;
        let mut out = Vec::new();
        // top-down: v may stay out only while nothing above it is in
        fn rec(p: &Poset, order: &[usize], k: usize, inside: u64, out: &mut Vec<u64>) {
            let Some(&v) = order.get(k) else {
                out.push(inside);
                return;
            };
            if p.above[v] & inside == 0 {
                rec(p, order, k + 1, inside, out);
            }
            rec(p, order, k + 1, inside | 1 << v, out);
        }
        let top_down: Vec<usize> = self.linear_extension().into_iter().rev().collect();
        rec(self, &top_down, 0, 0, &mut out);
        out.sort();
        Ok(out)
    }

    pub fn antichains(&self) -> Result<Vec<u64>> {
        self.check_enumerable()?;
        let mut out = Vec::new();
        fn rec(p: &Poset, v: usize, cur: u64, out: &mut Vec<u64>) {
            if v == p.size {
                out.push(cur);
                return;
            }
            rec(p, v + 1, cur, out);
            if (p.above[v] | p.below[v]) & cur == 0 {
                rec(p, v + 1, cur | 1 << v, out);
            }
        }
        rec(self, 0, 0, &mut out);
        out.sort();
        Ok(out)
    }

    /// A linear extension, smallest available label first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut placed = 0u64;
        let mut out = Vec::with_capacity(self.size);
        while out.len() < self.size {
            let v = (0..self.size).find(|&v| placed >> v & 1 == 0 && self.below[v] & !placed == 0).unwrap();
            placed |= 1 << v;
            out.push(v);
        }
        out
    }

    pub fn order_polytope(&self) -> Result<LatticePolytope> {
        let pts: Vec<Vec<i64>> = self.ideals()?.into_iter().map(|m| indicator(m, self.size)).collect();
        LatticePolytope::from_points(&pts, self.size)
    }

    pub fn chain_polytope(&self) -> Result<LatticePolytope> {
        let pts: Vec<Vec<i64>> = self.antichains()?.into_iter().map(|m| indicator(m, self.size)).collect();
        LatticePolytope::from_points(&pts, self.size)
    }

    /// Some element has two incomparable elements below it and two above it.
    pub fn contains_x_shape(&self) -> bool {
        let has_incomparable_pair = |m: u64| {
            bits(m).any(|a| (m & !(1 << a) & !self.above[a] & !self.below[a]) != 0)
        };
        (0..self.size).any(|c| has_incomparable_pair(self.below[c]) && has_incomparable_pair(self.above[c]))
    }

    pub fn comparability_graph(&self) -> SimpleGraph {
        SimpleGraph::from_adjacency((0..self.size).map(|i| self.above[i] | self.below[i]).collect())
    }

    /// Canonical form of the strict order relation.
    pub fn canonical(&self) -> Canonical {
        canonical_form(&self.above)
    }

    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        self.size == other.size
            && self.covers.len() == other.covers.len()
            && self.canonical().code == other.canonical().code
    }

    pub fn disjoint_union(&self, other: &Poset) -> Poset {
        let rel: Vec<(usize, usize)> = self
            .covers
            .iter()
            .copied()
            .chain(other.covers.iter().map(|&(a, b)| (a + self.size, b + self.size)))
            .collect();
        Poset::new(self.size + other.size, &rel).unwrap()
    }

    /// Adds a new element `p_{size+1}` above exactly the elements of `down`.
    pub fn with_maximal(&self, down: u64) -> Poset {
        let n = self.size;
        let rel: Vec<(usize, usize)> = self.covers.iter().copied().chain(bits(down).map(|i| (i, n))).collect();
        Poset::new(n + 1, &rel).unwrap()
    }

    pub fn to_doc(&self) -> PosetDoc {
        PosetDoc { size: self.size, covers: self.covers.iter().map(|&(a, b)| [a + 1, b + 1]).collect() }
    }

    pub fn from_doc(doc: &PosetDoc) -> Result<Self> {
        let p = Self::from_labels(doc.size, &doc.covers.iter().map(|c| (c[0], c[1])).collect::<Vec<_>>())?;
        if p.covers.len() != doc.covers.len() {
            return Err(Error::BadInput("cover list is redundant".into()));
        }
        Ok(p)
    }

    /// Hasse diagram, bottom to top; `hat` adds `0̂` and `1̂`.
    pub fn to_dot(&self, hat: bool) -> String {
        let mut s = String::from("digraph P {\n  rankdir=BT;\n");
        for v in 0..self.size {
            s += &format!("  p{};\n", v + 1);
        }
        for &(a, b) in &self.covers {
            s += &format!("  p{} -> p{};\n", a + 1, b + 1);
        }
        if hat {
            s += "  bottom [label=\"0\"];\n  top [label=\"1\"];\n";
            for v in bits(self.minimal()) {
                s += &format!("  bottom -> p{};\n", v + 1);
            }
            for v in bits(self.maximal()) {
                s += &format!("  p{} -> top;\n", v + 1);
            }
            if self.size == 0 {
                s += "  bottom -> top;\n";
            }
        }
        s + "}\n"
    }
}

/// Poset families with the element labels of their defining constructions.
pub mod families {
    use super::*;

    fn check(cond: bool, msg: &str) -> Result<()> {
        if cond {
            Ok(())
        } else {
            Err(Error::BadParams(msg.into()))
        }
    }

    /// Cover relations of the chain `p_a < p_{a+1} < ... < p_b` (1-based, inclusive).
    fn chain_rel(a: usize, b: usize, out: &mut Vec<(usize, usize)>) {
        for i in a..b {
            out.push((i, i + 1));
        }
    }

    fn build(d: usize, rel: &[(usize, usize)]) -> Poset {
        Poset::from_labels(d, rel).expect("family relations are acyclic")
    }

    /// Disjoint chains of lengths `s1` and `s2`.
    pub fn pi1(s1: usize, s2: usize) -> Result<Poset> {
        check(s1 >= 1 && s2 >= 1, "Pi1 needs s1, s2 > 0")?;
        let mut r = Vec::new();
        chain_rel(1, s1, &mut r);
        chain_rel(s1 + 1, s1 + s2, &mut r);
        Ok(build(s1 + s2, &r))
    }

    /// A chain of length `t` below two chains of lengths `s1`, `s2`, plus a
    /// separate chain of length `s3`.
    pub fn pi2(s1: usize, s2: usize, s3: usize, t: usize) -> Result<Poset> {
        check(s1 >= 1 && s2 >= 1 && s3 >= 1, "Pi2 needs s1, s2, s3 > 0")?;
        let d = s1 + s2 + s3 + t;
        let mut r = Vec::new();
        chain_rel(1, t, &mut r);
        chain_rel(t + 1, t + s1, &mut r);
        chain_rel(t + s1 + 1, t + s1 + s2, &mut r);
        if t > 0 {
            r.push((t, t + 1));
            r.push((t, t + s1 + 1));
        }
        chain_rel(t + s1 + s2 + 1, d, &mut r);
        Ok(build(d, &r))
    }

    /// Chains `p_1..p_{t1+s1}` and `p_{t1+s1+1}..p_{t1+s1+s2+t2}` joined by a
    /// chain of `t3` elements from `p_{t1}` to `p_{t1+s1+s2+1}`.
    pub fn pi3(s1: usize, s2: usize, t1: usize, t2: usize, t3: usize) -> Result<Poset> {
        check(s1 >= 1 && s2 >= 1 && t1 >= 1 && t2 >= 1, "Pi3 needs s1, s2, t1, t2 > 0")?;
        let d = s1 + s2 + t1 + t2 + t3;
        let mut r = Vec::new();
        chain_rel(1, t1 + s1, &mut r);
        chain_rel(t1 + s1 + 1, t1 + s1 + s2 + t2, &mut r);
        let mut link = vec![t1];
        link.extend(t1 + s1 + s2 + t2 + 1..=d);
        link.push(t1 + s1 + s2 + 1);
        for w in link.windows(2) {
            r.push((w[0], w[1]));
        }
        Ok(build(d, &r))
    }

    /// Two chains below `p_{d+1}` and two chains above it.
    pub fn pi4(s1: usize, s2: usize, t1: usize, t2: usize) -> Result<Poset> {
        check(s1 >= 1 && s2 >= 1 && t1 >= 1 && t2 >= 1, "Pi4 needs s1, s2, t1, t2 > 0")?;
        let d = s1 + s2 + t1 + t2;
        let c = d + 1;
        let mut r = Vec::new();
        chain_rel(1, t1, &mut r);
        chain_rel(t1 + 1, t1 + t2, &mut r);
        chain_rel(t1 + t2 + 1, t1 + t2 + s1, &mut r);
        chain_rel(t1 + t2 + s1 + 1, d, &mut r);
        r.extend([(t1, c), (t1 + t2, c), (c, t1 + t2 + 1), (c, t1 + t2 + s1 + 1)]);
        Ok(build(c, &r))
    }

    pub fn x_shape() -> Poset {
        pi4(1, 1, 1, 1).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    fn labels(p: &Poset) -> Vec<(usize, usize)> {
        p.covers().iter().map(|&(a, b)| (a + 1, b + 1)).collect()
    }

    #[test]
    fn family_instances() {
        assert_eq!(pi1(1, 1).unwrap(), Poset::antichain(2));
        assert_eq!(labels(&pi3(1, 1, 1, 1, 0).unwrap()), vec![(1, 2), (1, 4), (3, 4)]);
        let x = x_shape();
        assert_eq!(labels(&x), vec![(1, 5), (2, 5), (5, 3), (5, 4)]);
        assert!(x.contains_x_shape());
        assert!(!Poset::chain(6).contains_x_shape());
        assert!(!pi3(2, 2, 1, 1, 0).unwrap().contains_x_shape());
        assert_eq!(labels(&pi2(1, 1, 1, 0).unwrap()), vec![]);
        assert_eq!(labels(&pi2(1, 1, 1, 2).unwrap()), vec![(1, 2), (2, 3), (2, 4)]);
        assert!(pi2(0, 1, 1, 0).is_err());
    }

    #[test]
    fn closure_and_reduction() {
        let p = Poset::from_labels(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(labels(&p), vec![(1, 2), (2, 3)]);
        assert!(p.less(0, 2));
        assert!(Poset::from_labels(2, &[(1, 2), (2, 1)]).is_err());
        let doc = PosetDoc { size: 3, covers: vec![[1, 2], [2, 3], [1, 3]] };
        assert!(Poset::from_doc(&doc).is_err());
    }

    #[test]
    fn ideals_and_antichains() {
        let c2 = Poset::chain(2);
        assert_eq!(c2.ideals().unwrap(), vec![0b00, 0b01, 0b11]);
        assert_eq!(c2.antichains().unwrap(), vec![0b00, 0b01, 0b10]);
        let xp = x_shape().disjoint_union(&Poset::antichain(1));
        assert_eq!(xp.ideals().unwrap().len(), 16);
        assert_eq!(xp.order_polytope().unwrap().vertex_count(), 16);
    }

    #[test]
    fn hibi_ranks() {
        assert_eq!(Poset::chain(5).hibi_rank(), 0);
        assert_eq!(pi1(2, 2).unwrap().hibi_rank(), 1);
        let xp = x_shape().disjoint_union(&Poset::antichain(1));
        assert_eq!((xp.hasse_edge_count(), xp.hibi_rank()), (10, 3));
    }

    #[test]
    fn comparability_graphs() {
        assert_eq!(Poset::antichain(3).comparability_graph().edge_count(), 0);
        assert_eq!(Poset::chain(3).comparability_graph().edge_count(), 3);
        let g = pi2(1, 1, 1, 2).unwrap().comparability_graph();
        let e: Vec<(usize, usize)> = g.edges().iter().map(|&(a, b)| (a + 1, b + 1)).collect();
        assert_eq!(e, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)]);
    }

    #[test]
    fn chain_polytope_is_stable_set_polytope() {
        let p = pi3(1, 2, 1, 1, 1).unwrap();
        let a = p.chain_polytope().unwrap();
        let b = p.comparability_graph().stable_set_polytope().unwrap();
        assert_eq!(a.generators(), b.generators());
    }

    #[test]
    fn isomorphism() {
        let a = Poset::from_labels(3, &[(1, 2)]).unwrap();
        let b = Poset::from_labels(3, &[(3, 1)]).unwrap();
        let c = Poset::from_labels(3, &[(1, 2), (1, 3)]).unwrap();
        assert!(a.is_isomorphic(&b));
        assert!(!a.is_isomorphic(&c));
    }
}
