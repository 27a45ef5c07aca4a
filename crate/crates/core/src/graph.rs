//! Simple graphs on at most 64 vertices: structure tests, facet data of
//! stable-set and edge polytopes, and the parametric families.
//!
//! Vertices are 0-based internally; documents and family parameters use
//! 1-based labels.

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, Canonical};
use crate::error::{Error, Result};
use crate::polytope::LatticePolytope;

pub const PERFECT_LIMIT: usize = 10;
pub const INDEPENDENT_SET_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u64>,
}

pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexStatus {
    pub regular: Vec<bool>,
    pub ordinary: Vec<bool>,
    pub cut: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialKind {
    Fundamental,
    Acceptable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialSet {
    pub kind: SpecialKind,
    /// Vertex bitmask of `T`.
    pub members: u64,
    /// Vertex bitmask of `T ∪ N(T)`.
    pub closure: u64,
    pub spanning: bool,
}

/// `x ↦ (⟨coeffs, x⟩ + constant) / divisor` on ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialFacet {
    pub coeffs: Vec<i64>,
    pub constant: i64,
    pub divisor: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Vertex bitmasks, sorted by their sorted member lists.
    pub blocks: Vec<u64>,
    pub cut_vertices: u64,
    /// Edges `(cut vertex, block index)` of the block graph.
    pub block_graph: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= 64, "at most 64 vertices");
        SimpleGraph { n, adj: vec![0; n] }
    }

    /// Edges use 0-based vertices.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > 64 {
            return Err(Error::TooLarge(format!("{n} vertices (limit 64)")));
        }
        let mut g = Self::empty(n);
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::BadInput(format!("invalid edge {{{}, {}}}", a + 1, b + 1)));
            }
            g.adj[a] |= 1 << b;
            g.adj[b] |= 1 << a;
        }
        Ok(g)
    }

    /// Edges use 1-based labels.
    pub fn from_labels(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if edges.iter().any(|&(a, b)| a == 0 || b == 0) {
            return Err(Error::BadInput("labels are 1-based".into()));
        }
        Self::new(n, &edges.iter().map(|&(a, b)| (a - 1, b - 1)).collect::<Vec<_>>())
    }

    pub fn from_adjacency(adj: Vec<u64>) -> Self {
        SimpleGraph { n: adj.len(), adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b && a < self.n && b < self.n);
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
    }

    /// Sorted 0-based pairs with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|a| bits(self.adj[a] >> a >> 1).map(move |k| (a, a + 1 + k))).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn all(&self) -> u64 {
        full(self.n)
    }

    pub fn complement(&self) -> SimpleGraph {
        let all = self.all();
        SimpleGraph { n: self.n, adj: (0..self.n).map(|v| all & !self.adj[v] & !(1 << v)).collect() }
    }

    /// Subgraph induced on `mask`, relabeled in increasing order.
    pub fn induced(&self, mask: u64) -> SimpleGraph {
        let verts: Vec<usize> = bits(mask).collect();
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let adj = verts.iter().map(|&v| bits(self.adj[v] & mask).fold(0u64, |m, w| m | 1 << pos[w])).collect();
        SimpleGraph { n: verts.len(), adj }
    }

    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc { n: self.n, edges: self.edges().into_iter().map(|(a, b)| [a + 1, b + 1]).collect() }
    }

    pub fn from_doc(doc: &GraphDoc) -> Result<Self> {
        Self::from_labels(doc.n, &doc.edges.iter().map(|e| (e[0], e[1])).collect::<Vec<_>>())
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.n {
            s += &format!("  {};\n", v + 1);
        }
        for (a, b) in self.edges() {
            s += &format!("  {} -- {};\n", a + 1, b + 1);
        }
        s + "}\n"
    }

    pub fn canonical(&self) -> Canonical {
        canonical_form(&self.adj)
    }

    /// Relabeled so that vertex `i` is the old vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> SimpleGraph {
        let mut pos = vec![0; self.n];
        for (i, &v) in perm.iter().enumerate() {
            pos[v] = i;
        }
        let adj = perm.iter().map(|&v| bits(self.adj[v]).fold(0u64, |m, w| m | 1 << pos[w])).collect();
        SimpleGraph { n: self.n, adj }
    }

    pub fn canonical_graph(&self) -> SimpleGraph {
        SimpleGraph { n: self.n, adj: self.canonical().code }
    }

    pub fn is_isomorphic(&self, other: &SimpleGraph) -> bool {
        self.n == other.n && self.edge_count() == other.edge_count() && self.canonical().code == other.canonical().code
    }

    /// Connected components of the subgraph induced on `mask`.
    pub fn components_in(&self, mask: u64) -> Vec<u64> {
        let mut left = mask;
        let mut out = Vec::new();
        while left != 0 {
            let mut comp = left & left.wrapping_neg();
            let mut frontier = comp;
            while frontier != 0 {
                let next = bits(frontier).fold(0u64, |m, v| m | self.adj[v]) & mask & !comp;
                comp |= next;
                frontier = next;
            }
            out.push(comp);
            left &= !comp;
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components_in(self.all()).len() <= 1
    }

    /// 2-coloring of the subgraph on `mask` as the bitmask of color-1
    /// vertices (smallest vertex of each component gets color 0).
    pub fn two_coloring_in(&self, mask: u64) -> Option<u64> {
        let mut side = 0u64;
        for comp in self.components_in(mask) {
            let mut seen = comp & comp.wrapping_neg();
            let mut layer = seen;
            let mut odd = false;
            while layer != 0 {
                let fresh = bits(layer).fold(0u64, |m, v| m | self.adj[v]) & comp & !seen;
                odd = !odd;
                if odd {
                    side |= fresh;
                }
                seen |= fresh;
                layer = fresh;
            }
        }
        for v in bits(mask) {
            let same = if side >> v & 1 == 1 { side } else { mask & !side };
            if self.adj[v] & same != 0 {
                return None;
            }
        }
        Some(side)
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring_in(self.all()).is_some()
    }

    /// `(V1, V2)` with `V1` the side holding the smallest vertex; requires a
    /// connected bipartite graph.
    pub fn bipartition(&self) -> Option<(u64, u64)> {
        let side = self.two_coloring_in(self.all())?;
        Some((self.all() & !side, side))
    }

    /// Number of bipartite connected components (isolated vertices count).
    pub fn bipartite_components(&self) -> usize {
        self.components_in(self.all()).into_iter().filter(|&c| self.two_coloring_in(c).is_some()).count()
    }

    pub fn maximal_cliques(&self) -> Vec<u64> {
        let mut out = Vec::new();
        bron_kerbosch(&self.adj, 0, self.all(), 0, &mut out);
        out.sort_by_key(|&m| bits(m).collect::<Vec<_>>());
        out
    }

    /// All independent sets including the empty set, as bitmasks in increasing order.
    pub fn independent_sets(&self) -> Result<Vec<u64>> {
        if self.n > INDEPENDENT_SET_LIMIT {
            return Err(Error::TooLarge(format!("{} vertices (independent-set limit {INDEPENDENT_SET_LIMIT})", self.n)));
        }
        let mut out = Vec::new();
        fn rec(adj: &[u64], v: usize, cur: u64, out: &mut Vec<u64>) {
            if v == adj.len() {
                out.push(cur);
                return;
            }
            rec(adj, v + 1, cur, out);
            if adj[v] & cur == 0 {
                rec(adj, v + 1, cur | 1 << v, out);
            }
        }
        rec(&self.adj, 0, 0, &mut out);
        out.sort();
        Ok(out)
    }

    pub fn nontrivial_independent_set_count(&self) -> Result<usize> {
        Ok(self.independent_sets()?.into_iter().filter(|m| m.count_ones() >= 2).count())
    }

    /// Vertex sets inducing a chordless cycle of odd length ≥ `min_len`.
    pub fn induced_odd_cycles(&self, min_len: u32) -> Vec<u64> {
        let mut out = Vec::new();
        for mask in 1..=self.all() {
            let k = mask.count_ones();
            if k < min_len || k % 2 == 0 {
                continue;
            }
            if bits(mask).all(|v| (self.adj[v] & mask).count_ones() == 2) && self.components_in(mask).len() == 1 {
                out.push(mask);
            }
        }
        out
    }

    pub fn is_perfect(&self) -> Result<bool> {
        if self.n > PERFECT_LIMIT {
            return Err(Error::TooLarge(format!("{} vertices (perfectness limit {PERFECT_LIMIT})", self.n)));
        }
        Ok(self.induced_odd_cycles(5).is_empty() && self.complement().induced_odd_cycles(5).is_empty())
    }

    /// Every two vertex-disjoint odd cycles are joined by an edge. Chordless
    /// odd cycles suffice: every odd cycle contains one on a subset of its
    /// vertices.
    pub fn odd_cycle_condition(&self) -> bool {
        let cyc = self.induced_odd_cycles(3);
        for (i, &a) in cyc.iter().enumerate() {
            for &b in &cyc[i + 1..] {
                if a & b == 0 && !bits(a).any(|v| self.adj[v] & b != 0) {
                    return false;
                }
            }
        }
        true
    }

    pub fn blocks(&self) -> BlockDecomposition {
        let mut st = Dfs {
            adj: &self.adj,
            disc: vec![usize::MAX; self.n],
            low: vec![0; self.n],
            time: 0,
            stack: Vec::new(),
            blocks: Vec::new(),
        };
        for v in 0..self.n {
            if st.disc[v] == usize::MAX {
                if self.adj[v] == 0 {
                    st.blocks.push(1 << v);
                    st.disc[v] = 0;
                } else {
                    st.visit(v, usize::MAX);
                }
            }
        }
        let mut blocks = st.blocks;
        blocks.sort_by_key(|&m| bits(m).collect::<Vec<_>>());
        let mut cut = 0u64;
        for v in 0..self.n {
            if blocks.iter().filter(|&&b| b >> v & 1 == 1).count() > 1 {
                cut |= 1 << v;
            }
        }
        let block_graph = bits(cut)
            .flat_map(|v| blocks.iter().enumerate().filter(move |(_, &b)| b >> v & 1 == 1).map(move |(i, _)| (v, i)))
            .collect();
        BlockDecomposition { blocks, cut_vertices: cut, block_graph }
    }

    pub fn is_two_connected(&self) -> bool {
        self.n >= 3 && self.is_connected() && self.blocks().cut_vertices == 0
    }

    pub fn vertex_status(&self) -> Result<VertexStatus> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let bip = self.is_bipartite();
        let all = self.all();
        let mut st = VertexStatus { regular: vec![false; self.n], ordinary: vec![false; self.n], cut: vec![false; self.n] };
        for v in 0..self.n {
            let rest = all & !(1 << v);
            let comps = self.components_in(rest);
            st.ordinary[v] = comps.len() <= 1;
            st.cut[v] = !st.ordinary[v];
            if !bip {
                st.regular[v] = comps.iter().all(|&c| self.two_coloring_in(c).is_none());
            }
        }
        Ok(st)
    }

    /// Fundamental sets (non-bipartite) or acceptable sets inside `V1`
    /// (bipartite), ordered by member bitmask.
    pub fn special_sets(&self) -> Result<Vec<SpecialSet>> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let all = self.all();
        let parts = self.bipartition();
        let mut out = Vec::new();
        for t in self.independent_sets()? {
            if t == 0 {
                continue;
            }
            if let Some((v1, _)) = parts {
                if t & !v1 != 0 {
                    continue;
                }
            }
            let nt = bits(t).fold(0u64, |m, v| m | self.adj[v]);
            let closure = t | nt;
            if !self.bt_connected(t, nt) {
                continue;
            }
            let rest = all & !closure;
            let spanning = rest == 0;
            let kind = match parts {
                None => {
                    let ok = spanning
                        || self.components_in(rest).into_iter().all(|c| self.two_coloring_in(c).is_none());
                    if !ok {
                        continue;
                    }
                    SpecialKind::Fundamental
                }
                Some(_) => {
                    let comps = self.components_in(rest);
                    let has_edge = bits(rest).any(|v| self.adj[v] & rest != 0);
                    if comps.len() != 1 || !has_edge {
                        continue;
                    }
                    SpecialKind::Acceptable
                }
            };
            out.push(SpecialSet { kind, members: t, closure, spanning });
        }
        Ok(out)
    }

    /// Connectivity of the bipartite graph on `T ⊔ N(T)` with the `T`–`N(T)` edges.
    fn bt_connected(&self, t: u64, nt: u64) -> bool {
        let start = t & t.wrapping_neg();
        let mut seen = start;
        let mut frontier = start;
        while frontier != 0 {
            let mut next = 0u64;
            for v in bits(frontier) {
                let across = if t >> v & 1 == 1 { nt } else { t };
                next |= self.adj[v] & across;
            }
            next &= !seen;
            seen |= next;
            frontier = next;
        }
        seen == t | nt
    }

    /// Coordinate forms and one clique form per maximal clique; the facets of
    /// the stable set polytope when the graph is perfect.
    pub fn stable_set_facets(&self) -> Vec<CombinatorialFacet> {
        let mut out: Vec<CombinatorialFacet> =
            (0..self.n).map(|i| CombinatorialFacet { coeffs: indicator(1 << i, self.n), constant: 0, divisor: 1 }).collect();
        for q in self.maximal_cliques() {
            let coeffs = indicator(q, self.n).into_iter().map(|x| -x).collect();
            out.push(CombinatorialFacet { coeffs, constant: 1, divisor: 1 });
        }
        out
    }

    /// Coordinate forms at regular (ordinary) vertices and `H_T` forms at
    /// fundamental (acceptable) sets; spanning fundamental sets carry divisor 2.
    pub fn edge_facets(&self) -> Result<Vec<CombinatorialFacet>> {
        let st = self.vertex_status()?;
        let flags = if self.is_bipartite() { &st.ordinary } else { &st.regular };
        let mut out: Vec<CombinatorialFacet> = (0..self.n)
            .filter(|&i| flags[i])
            .map(|i| CombinatorialFacet { coeffs: indicator(1 << i, self.n), constant: 0, divisor: 1 })
            .collect();
        for s in self.special_sets()? {
            let nt = s.closure & !s.members;
            let coeffs = (0..self.n).map(|v| (nt >> v & 1) as i64 - (s.members >> v & 1) as i64).collect();
            let divisor = if s.kind == SpecialKind::Fundamental && s.spanning { 2 } else { 1 };
            out.push(CombinatorialFacet { coeffs, constant: 0, divisor });
        }
        Ok(out)
    }

    pub fn stable_set_polytope(&self) -> Result<LatticePolytope> {
        let pts: Vec<Vec<i64>> = self.independent_sets()?.into_iter().map(|m| indicator(m, self.n)).collect();
        LatticePolytope::from_points(&pts, self.n)
    }

    pub fn edge_polytope(&self) -> Result<LatticePolytope> {
        let edges = self.edges();
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let pts: Vec<Vec<i64>> = edges.iter().map(|&(a, b)| indicator(1 << a | 1 << b, self.n)).collect();
        LatticePolytope::from_points(&pts, self.n)
    }

    /// Adds a path of `len ≥ 1` edges between `a` and `b` through fresh vertices.
    pub fn with_path(&self, a: usize, b: usize, len: usize) -> Result<SimpleGraph> {
        if len == 0 {
            return Err(Error::BadParams("path length must be positive".into()));
        }
        if len == 1 && self.has_edge(a, b) {
            return Err(Error::BadParams(format!("edge {{{}, {}}} already present", a + 1, b + 1)));
        }
        let mut g = SimpleGraph::empty(self.n + len - 1);
        for (x, y) in self.edges() {
            g.add_edge(x, y);
        }
        let mut prev = a;
        for k in 0..len - 1 {
            g.add_edge(prev, self.n + k);
            prev = self.n + k;
        }
        g.add_edge(prev, b);
        Ok(g)
    }

    /// Disjoint union, `other` shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &SimpleGraph) -> SimpleGraph {
        let mut g = SimpleGraph::empty(self.n + other.n);
        for (a, b) in self.edges() {
            g.add_edge(a, b);
        }
        for (a, b) in other.edges() {
            g.add_edge(self.n + a, self.n + b);
        }
        g
    }

    /// Merges vertex `b` into `a` and drops `b`; `a` and `b` must be non-adjacent.
    pub fn identify(&self, a: usize, b: usize) -> SimpleGraph {
        assert!(a != b && !self.has_edge(a, b));
        let map = |v: usize| -> usize {
            let v = if v == b { a } else { v };
            if v > b {
                v - 1
            } else {
                v
            }
        };
        let mut g = SimpleGraph::empty(self.n - 1);
        for (x, y) in self.edges() {
            let (x, y) = (map(x), map(y));
            if x != y && !g.has_edge(x, y) {
                g.add_edge(x, y);
            }
        }
        g
    }
}

pub(crate) fn indicator(mask: u64, n: usize) -> Vec<i64> {
    (0..n).map(|i| (mask >> i & 1) as i64).collect()
}

fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = bits(p | x).max_by_key(|&u| (adj[u] & p).count_ones()).unwrap();
    for v in bits(p & !adj[pivot]) {
        bron_kerbosch(adj, r | 1 << v, p & adj[v], x & adj[v], out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

struct Dfs<'a> {
    adj: &'a [u64],
    disc: Vec<usize>,
    low: Vec<usize>,
    time: usize,
    stack: Vec<(usize, usize)>,
    blocks: Vec<u64>,
}

impl Dfs<'_> {
    fn visit(&mut self, u: usize, parent: usize) {
        self.disc[u] = self.time;
        self.low[u] = self.time;
        self.time += 1;
        for v in bits(self.adj[u]) {
            if self.disc[v] == usize::MAX {
                self.stack.push((u, v));
                self.visit(v, u);
                self.low[u] = self.low[u].min(self.low[v]);
                if self.low[v] >= self.disc[u] {
                    let mut block = 0u64;
                    while let Some((a, b)) = self.stack.pop() {
                        block |= 1 << a | 1 << b;
                        if (a, b) == (u, v) {
                            break;
                        }
                    }
                    self.blocks.push(block);
                }
            } else if v != parent && self.disc[v] < self.disc[u] {
                self.stack.push((u, v));
                self.low[u] = self.low[u].min(self.disc[v]);
            }
        }
    }
}

/// Graph families, labeled as in their defining constructions (1-based).
pub mod families {
    use super::*;

    fn check(cond: bool, msg: impl Into<String>) -> Result<()> {
        if cond {
            Ok(())
        } else {
            Err(Error::BadParams(msg.into()))
        }
    }

    fn from_pred(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> SimpleGraph {
        let mut g = SimpleGraph::empty(n);
        for i in 1..=n {
            for j in i + 1..=n {
                if adjacent(i, j) {
                    g.add_edge(i - 1, j - 1);
                }
            }
        }
        g
    }

    pub fn complete(n: usize) -> SimpleGraph {
        from_pred(n, |_, _| true)
    }

    pub fn path(n: usize) -> SimpleGraph {
        from_pred(n, |i, j| j == i + 1)
    }

    pub fn cycle(n: usize) -> Result<SimpleGraph> {
        check(n >= 3, "a cycle needs at least 3 vertices")?;
        Ok(from_pred(n, |i, j| j == i + 1 || (i == 1 && j == n)))
    }

    /// Sides `{1..s1}` and `{s1+1..s1+s2}`.
    pub fn complete_bipartite(s1: usize, s2: usize) -> Result<SimpleGraph> {
        check(s1 >= 1 && s2 >= 1, "complete bipartite sides must be nonempty")?;
        Ok(from_pred(s1 + s2, |i, j| i <= s1 && j > s1))
    }

    pub fn complete_multipartite(parts: &[usize]) -> Result<SimpleGraph> {
        check(!parts.is_empty() && parts.iter().all(|&p| p >= 1), "parts must be nonempty")?;
        let mut part_of = Vec::new();
        for (k, &p) in parts.iter().enumerate() {
            part_of.extend(std::iter::repeat_n(k, p));
        }
        Ok(from_pred(part_of.len(), |i, j| part_of[i - 1] != part_of[j - 1]))
    }

    /// `V1 = [s1+t1]`, `V2 = [s1+t1+1, d]`; the vertices `s1+1..s1+t1` and
    /// `s1+t1+1..s1+t1+t2` are pairwise non-adjacent, all other cross pairs
    /// are edges.
    pub fn k_s1s2_t1t2(s1: usize, s2: usize, t1: usize, t2: usize) -> Result<SimpleGraph> {
        check(s1 >= 1 && s2 >= 1, "s1, s2 must be positive")?;
        let d = s1 + s2 + t1 + t2;
        Ok(from_pred(d, |i, j| {
            (i <= s1 + t1 && j > s1 + t1 + t2) || (i <= s1 && j > s1 + t1)
        }))
    }

    /// `k_s1s2_t1t2` plus vertex `d+1` adjacent to `1..s1` and `s1+t1+t2+1..d`.
    pub fn k_1s1s2_t1t2(s1: usize, s2: usize, t1: usize, t2: usize) -> Result<SimpleGraph> {
        let base = k_s1s2_t1t2(s1, s2, t1, t2)?;
        let d = base.n();
        let mut g = SimpleGraph::empty(d + 1);
        for (a, b) in base.edges() {
            g.add_edge(a, b);
        }
        for i in (1..=s1).chain(s1 + t1 + t2 + 1..=d) {
            g.add_edge(i - 1, d);
        }
        Ok(g)
    }

    /// Bipartite graph on `[d+3]` whose edge polytope matches the order
    /// polytope of `Pi4(s1, s2, t1, t2)`.
    pub fn k_x_shape(s1: usize, s2: usize, t1: usize, t2: usize) -> Result<SimpleGraph> {
        check(s1 >= 1 && s2 >= 1 && t1 >= 1 && t2 >= 1, "all parameters must be positive")?;
        let d = s1 + s2 + t1 + t2;
        let a = |i: usize| (1..=t1).contains(&i) || i == d + 2;
        let b = |j: usize| (t1 + 1..=t1 + t2).contains(&j) || j == d + 3;
        let c = |i: usize| (t1 + t2 + 1..=t1 + t2 + s1).contains(&i) || i == d + 3;
        let e = |j: usize| (t1 + t2 + s1 + 1..=d).contains(&j) || j == d + 1;
        Ok(from_pred(d + 3, |i, j| (a(i) && b(j)) || (a(j) && b(i)) || (c(i) && e(j)) || (c(j) && e(i))))
    }

    /// Chordal graph on 6 vertices with four maximal cliques.
    pub fn gamma() -> SimpleGraph {
        let e = [(1, 5), (1, 6), (2, 4), (2, 6), (3, 4), (3, 5), (4, 5), (4, 6), (5, 6)];
        SimpleGraph::from_labels(6, &e).unwrap()
    }

    /// Two 4-cycles `1-2-6-7` and `7-4-3-5` sharing vertex 7.
    pub fn h_graph() -> SimpleGraph {
        let e = [(1, 2), (1, 7), (2, 6), (6, 7), (4, 7), (5, 7), (3, 4), (3, 5)];
        SimpleGraph::from_labels(7, &e).unwrap()
    }

    /// Edge list `{12,17,26,34,47,56,57,67}`: one edge away from [`h_graph`],
    /// with a triangle `5-6-7`, so not bipartite.
    pub fn h_graph_printed() -> SimpleGraph {
        let e = [(1, 2), (1, 7), (2, 6), (3, 4), (4, 7), (5, 6), (5, 7), (6, 7)];
        SimpleGraph::from_labels(7, &e).unwrap()
    }

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum GluedCase {
        C11,
        C12,
        C21,
        C22,
        C23,
        C24,
        C25,
        C26,
    }

    impl GluedCase {
        pub fn from_code(code: usize) -> Result<Self> {
            Ok(match code {
                11 => Self::C11,
                12 => Self::C12,
                21 => Self::C21,
                22 => Self::C22,
                23 => Self::C23,
                24 => Self::C24,
                25 => Self::C25,
                26 => Self::C26,
                _ => return Err(Error::BadParams(format!("unknown construction case {code}"))),
            })
        }

        pub fn code(self) -> usize {
            match self {
                Self::C11 => 11,
                Self::C12 => 12,
                Self::C21 => 21,
                Self::C22 => 22,
                Self::C23 => 23,
                Self::C24 => 24,
                Self::C25 => 25,
                Self::C26 => 26,
            }
        }

        /// Class group rank the construction yields.
        pub fn rank(self) -> usize {
            match self {
                Self::C11 | Self::C12 => 1,
                _ => 2,
            }
        }
    }

    fn same_side(g: &SimpleGraph, a: usize, b: usize) -> bool {
        let (v1, _) = g.bipartition().expect("base graph is bipartite");
        (v1 >> a & 1) == (v1 >> b & 1)
    }

    fn label(g: &SimpleGraph, l: usize) -> Result<usize> {
        check(l >= 1 && l <= g.n(), format!("vertex {l} outside 1..{}", g.n()))?;
        Ok(l - 1)
    }

    /// Non-bipartite graphs obtained by attaching paths to complete bipartite
    /// graphs, one variant per case. Parameters:
    /// - 11, 12: `s1, s2, L [, i, j]`
    /// - 21, 22, 23: `s1, s2, t1, t2, L1, L2 [, i, j, k, l]`
    /// - 24, 25: `s1, s2, t1, t2, L [, i, j]`
    /// - 26: `s1, s2, t1, t2`
    ///
    /// Endpoint labels are local to each base graph; defaults pick the first
    /// admissible vertices.
    pub fn glued(case: GluedCase, p: &[usize]) -> Result<SimpleGraph> {
        use GluedCase::*;
        match case {
            C11 | C12 => {
                check(p.len() == 3 || p.len() == 5, "expected s1,s2,L[,i,j]")?;
                let (s1, s2, len) = (p[0], p[1], p[2]);
                check(s1 >= 2 && s2 >= 2, "s1, s2 must be at least 2")?;
                let k = complete_bipartite(s1, s2)?;
                let (i, j) = if p.len() == 5 {
                    (label(&k, p[3])?, label(&k, p[4])?)
                } else if case == C11 {
                    (0, s1)
                } else {
                    (0, 1)
                };
                attach(&k, i, j, len, case == C11)
            }
            C24 | C25 => {
                check(p.len() == 5 || p.len() == 7, "expected s1,s2,t1,t2,L[,i,j]")?;
                let (s1, s2, t1, t2, len) = (p[0], p[1], p[2], p[3], p[4]);
                check(s1 >= 2 && s2 >= 2 && t1 >= 1 && t2 >= 1, "need s1, s2 >= 2 and t1, t2 >= 1")?;
                let k = k_s1s2_t1t2(s1, s2, t1, t2)?;
                let (i, j) = if p.len() == 7 {
                    (label(&k, p[5])?, label(&k, p[6])?)
                } else if case == C24 {
                    (s1 + t1 - 1, s1 + t1)
                } else {
                    (k.n() - 1, s1 + t1 + t2 - 1)
                };
                attach(&k, i, j, len, case == C24)
            }
            C26 => {
                check(p.len() == 4, "expected s1,s2,t1,t2")?;
                check(p[0] >= 2 && p[1] >= 2, "s1, s2 must be at least 2")?;
                k_1s1s2_t1t2(p[0], p[1], p[2], p[3])
            }
            C21 | C22 | C23 => {
                check(p.len() == 6 || p.len() == 10, "expected s1,s2,t1,t2,L1,L2[,i,j,k,l]")?;
                check(p[..4].iter().all(|&x| x >= 2), "s1, s2, t1, t2 must be at least 2")?;
                let a = complete_bipartite(p[0], p[1])?;
                let b = complete_bipartite(p[2], p[3])?;
                let (l1, l2) = (p[4], p[5]);
                let (i, j, k, l) = if p.len() == 10 {
                    (label(&a, p[6])?, label(&a, p[7])?, label(&b, p[8])?, label(&b, p[9])?)
                } else {
                    let (i, j) = if case == C21 { (0, p[0]) } else { (0, 1) };
                    let (k, l) = if case == C23 { (0, 1) } else { (0, p[2]) };
                    (i, j, k, l)
                };
                check(i != j && k != l, "path endpoints must be distinct")?;
                let ij_same = same_side(&a, i, j);
                let kl_same = same_side(&b, k, l);
                let (want_ij, want_kl, odd) = match case {
                    C21 => (false, false, true),
                    C22 => (true, false, false),
                    _ => (true, true, true),
                };
                check(ij_same == want_ij && kl_same == want_kl, "endpoints violate the partition condition")?;
                check((l1 + l2) % 2 == usize::from(odd), "total path length has the wrong parity")?;
                glue(&a, &b, (i, j), (k, l), l1, l2)
            }
        }
    }

    fn attach(k: &SimpleGraph, i: usize, j: usize, len: usize, different_sides: bool) -> Result<SimpleGraph> {
        check(i != j, "path endpoints must be distinct")?;
        let same = same_side(k, i, j);
        check(same != different_sides, "endpoints violate the partition condition")?;
        if different_sides {
            check(len >= 2 && len.is_multiple_of(2), "path length must be even and at least 2")?;
        } else {
            check(len % 2 == 1, "path length must be odd")?;
        }
        k.with_path(i, j, len)
    }

    fn glue(
        a: &SimpleGraph,
        b: &SimpleGraph,
        (i, j): (usize, usize),
        (k, l): (usize, usize),
        l1: usize,
        l2: usize,
    ) -> Result<SimpleGraph> {
        let off = a.n();
        let mut g = a.disjoint_union(b);
        let (k, l) = (k + off, l + off);
        // attach positive-length paths first so identification indices stay valid
        if l1 > 0 {
            g = g.with_path(i, k, l1)?;
        }
        if l2 > 0 {
            g = g.with_path(j, l, l2)?;
        }
        if l1 == 0 {
            g = g.identify(i, k);
        }
        if l2 == 0 {
            // dropping k shifts every later index down by one
            g = g.identify(j, if l1 == 0 && l > k { l - 1 } else { l });
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    fn set(labels: &[usize]) -> u64 {
        labels.iter().fold(0, |m, &l| m | 1 << (l - 1))
    }

    #[test]
    fn k_s1s2_t1t2_small() {
        let g = k_s1s2_t1t2(2, 2, 1, 1).unwrap();
        assert_eq!((g.n(), g.edge_count()), (6, 8));
        assert!(!g.has_edge(2, 3));
        assert!(g.is_bipartite());
    }

    #[test]
    fn named_graphs() {
        let gamma = gamma();
        let e: Vec<(usize, usize)> = gamma.edges().iter().map(|&(a, b)| (a + 1, b + 1)).collect();
        assert_eq!(e, vec![(1, 5), (1, 6), (2, 4), (2, 6), (3, 4), (3, 5), (4, 5), (4, 6), (5, 6)]);
        assert_eq!(gamma.maximal_cliques(), vec![set(&[1, 5, 6]), set(&[2, 4, 6]), set(&[3, 4, 5]), set(&[4, 5, 6])]);
        assert!(gamma.is_perfect().unwrap());
        let t = h_graph_printed();
        let e: Vec<(usize, usize)> = t.edges().iter().map(|&(a, b)| (a + 1, b + 1)).collect();
        assert_eq!(e, vec![(1, 2), (1, 7), (2, 6), (3, 4), (4, 7), (5, 6), (5, 7), (6, 7)]);
        assert!(h_graph().is_bipartite());
        assert!(!t.is_bipartite());
    }

    #[test]
    fn cliques_and_perfectness() {
        assert_eq!(complete(4).maximal_cliques(), vec![0b1111]);
        assert_eq!(SimpleGraph::empty(3).maximal_cliques(), vec![1, 2, 4]);
        assert!(!cycle(5).unwrap().is_perfect().unwrap());
        assert!(complete_bipartite(3, 4).unwrap().is_perfect().unwrap());
        assert!(!cycle(7).unwrap().complement().is_perfect().unwrap());
        assert!(matches!(SimpleGraph::empty(11).is_perfect(), Err(Error::TooLarge(_))));
    }

    #[test]
    fn block_decompositions() {
        let tri = complete(3);
        let b = tri.blocks();
        assert_eq!((b.blocks.len(), b.cut_vertices), (1, 0));
        let p = path(4);
        let b = p.blocks();
        assert_eq!((b.blocks.len(), b.cut_vertices.count_ones()), (3, 2));
        // the drawn graph: two 4-cycles glued at 7
        let b = h_graph().blocks();
        assert_eq!(b.blocks, vec![set(&[1, 2, 6, 7]), set(&[3, 4, 5, 7])]);
        assert_eq!(b.cut_vertices, set(&[7]));
        // the printed edge list: the 4-cycle and triangle share edge 67
        let b = h_graph_printed().blocks();
        assert_eq!(b.blocks, vec![set(&[1, 2, 5, 6, 7]), set(&[3, 4]), set(&[4, 7])]);
        assert_eq!(b.cut_vertices, set(&[4, 7]));
    }

    #[test]
    fn odd_cycle_conditions() {
        assert!(complete_bipartite(3, 3).unwrap().odd_cycle_condition());
        let mut two = complete(3).disjoint_union(&complete(3)).with_path(0, 3, 2).unwrap();
        assert!(!two.odd_cycle_condition());
        two.add_edge(1, 4);
        assert!(two.odd_cycle_condition());
        assert!(complete_multipartite(&[2, 2, 2]).unwrap().odd_cycle_condition());
    }

    #[test]
    fn vertex_statuses() {
        let k3 = complete(3).vertex_status().unwrap();
        assert!(k3.regular.iter().all(|&r| !r));
        let k222 = complete_multipartite(&[2, 2, 2]).unwrap().vertex_status().unwrap();
        assert!(k222.regular.iter().all(|&r| r));
        let k23 = complete_bipartite(2, 3).unwrap().vertex_status().unwrap();
        assert!(k23.ordinary.iter().all(|&o| o));
        assert_eq!(SimpleGraph::empty(2).vertex_status().unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn special_set_examples() {
        for (a, b) in [(2, 2), (2, 3), (3, 4)] {
            assert!(complete_bipartite(a, b).unwrap().special_sets().unwrap().is_empty());
        }
        let s = k_s1s2_t1t2(2, 2, 1, 1).unwrap().special_sets().unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].kind, s[0].members), (SpecialKind::Acceptable, set(&[3])));
        let s = complete(3).special_sets().unwrap();
        let m: Vec<u64> = s.iter().map(|x| x.members).collect();
        assert_eq!(m, vec![1, 2, 4]);
        assert!(s.iter().all(|x| x.spanning && x.kind == SpecialKind::Fundamental));
    }

    #[test]
    fn polytopes_of_graphs() {
        let cube = SimpleGraph::empty(3).stable_set_polytope().unwrap();
        assert_eq!((cube.dim(), cube.vertex_count(), cube.facet_count()), (3, 8, 6));
        let k3 = complete(3).edge_polytope().unwrap();
        assert_eq!((k3.dim(), k3.ambient_dim()), (2, 3));
        let stab = gamma().stable_set_polytope().unwrap();
        assert_eq!((stab.dim(), stab.facet_count()), (6, 10));
        assert_eq!(SimpleGraph::empty(3).edge_polytope().unwrap_err(), Error::EmptyGraph);
    }

    #[test]
    fn glued_parity_is_enforced() {
        assert!(glued(GluedCase::C11, &[2, 2, 3]).is_err());
        assert!(glued(GluedCase::C11, &[2, 2, 2]).is_ok());
        assert!(glued(GluedCase::C12, &[2, 2, 2]).is_err());
        assert_eq!(glued(GluedCase::C12, &[2, 2, 1]).unwrap().edge_count(), 5);
        assert!(glued(GluedCase::C21, &[2, 2, 2, 2, 1, 1]).is_err());
        let g = glued(GluedCase::C21, &[2, 2, 2, 2, 0, 1]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (7, 9));
        assert!(g.is_two_connected() && !g.is_bipartite());
        assert!(glued(GluedCase::C11, &[2, 2, 2, 1, 2]).is_err());
        // two squares sharing a vertex pair: same side in one, adjacent in the other
        let g = glued(GluedCase::C22, &[2, 2, 2, 2, 0, 0, 1, 2, 1, 3]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (6, 8));
        assert!(g.is_two_connected() && !g.is_bipartite());
    }

    #[test]
    fn doc_round_trip() {
        let g = gamma();
        assert_eq!(SimpleGraph::from_doc(&g.to_doc()).unwrap(), g);
    }
}
