//! Sweeps over whole census levels: torsion, facet systems, column
//! relations, block additivity and the rank bound for several odd blocks.

use std::collections::VecDeque;

use rayon::prelude::*;

use super::enumerate::GraphFilter;
use super::verify::{graph_label, graphs_upto, poset_label, posets_upto, Bounds, Outcome};
use crate::classgroup::{class_group, class_group_rank, shortcut_rank, AbelianGroup, IdpPolicy, Shortcut};
use crate::error::Result;
use crate::graph::{bits, CombinatorialFacet, SimpleGraph};
use crate::lattice::gcd_slice;
use crate::polytope::LatticePolytope;

fn connected_occ() -> GraphFilter {
    GraphFilter { connected: true, occ: true, ..Default::default() }
}

fn perfect() -> GraphFilter {
    GraphFilter { perfect: true, ..Default::default() }
}

/// Class group torsion-free, with free rank equal to both the facet count
/// formula and the combinatorial formula.
fn check_ranks(p: &LatticePolytope, short: usize, what: &str, out: &mut Outcome) -> Result<()> {
    // order, stable (perfect) and edge (odd cycle condition) polytopes are normal
    let cg = class_group(p, IdpPolicy::Assume)?;
    let facet = class_group_rank(p, IdpPolicy::Assume)?;
    if !cg.torsion.is_empty() {
        out.fail(format!("{what}: torsion {:?}", cg.torsion));
    }
    if cg.free_rank != short || cg.free_rank != facet {
        out.fail(format!("{what}: rank {} vs formula {short} vs facet count {facet}", cg.free_rank));
    }
    Ok(())
}

pub(crate) fn torsion(b: &Bounds) -> Result<Outcome> {
    let mut out = Outcome::default();
    let posets = posets_upto(b.max_elements)?;
    out.each(&posets, |p| {
        let mut o = Outcome::one();
        check_ranks(&p.order_polytope()?, shortcut_rank(Shortcut::Hibi(p))?, &format!("order {}", poset_label(p)), &mut o)?;
        Ok(o)
    })?;
    let stable = graphs_upto(1, b.max_vertices, &perfect())?;
    out.each(&stable, |g| {
        let mut o = Outcome::one();
        let what = format!("stable {}", graph_label(g));
        check_ranks(&g.stable_set_polytope()?, shortcut_rank(Shortcut::Stable(g))?, &what, &mut o)?;
        Ok(o)
    })?;
    let edge = graphs_upto(2, b.max_vertices, &connected_occ())?;
    out.each(&edge, |g| {
        let mut o = Outcome::one();
        let what = format!("edge {}", graph_label(g));
        check_ranks(&g.edge_polytope()?, shortcut_rank(Shortcut::Edge(g))?, &what, &mut o)?;
        Ok(o)
    })?;
    out.note(format!("{} posets, {} perfect graphs, {} connected graphs with the odd cycle condition", posets.len(), stable.len(), edge.len()));
    Ok(out)
}

/// Compares geometric facets with a combinatorial system as sets of
/// normalized value rows, and their divisors.
fn compare_facets(p: &LatticePolytope, comb: &[CombinatorialFacet], what: &str, out: &mut Outcome) -> Result<()> {
    let amb = &p.lattice_points().ambient;
    let mut geo: Vec<(Vec<i64>, i64)> =
        p.value_matrix()?.into_iter().zip(p.facets()?.forms.iter().map(|f| f.divisor)).collect();
    let mut ours = Vec::new();
    for c in comb {
        let raw: Vec<i64> =
            amb.iter().map(|x| x.iter().zip(&c.coeffs).map(|(a, b)| a * b).sum::<i64>() + c.constant).collect();
        let g = gcd_slice(&raw);
        if g != c.divisor {
            out.fail(format!("{what}: form {:?}{:+} has content {g}, expected divisor {}", c.coeffs, c.constant, c.divisor));
            return Ok(());
        }
        ours.push((raw.iter().map(|v| v / g).collect::<Vec<_>>(), c.divisor));
    }
    geo.sort();
    ours.sort();
    if geo != ours {
        out.fail(format!("{what}: {} geometric facets vs {} combinatorial forms disagree", geo.len(), ours.len()));
    }
    Ok(())
}

pub(crate) fn facets(b: &Bounds) -> Result<Outcome> {
    let mut out = Outcome::default();
    let stable = graphs_upto(1, b.max_vertices, &perfect())?;
    out.each(&stable, |g| {
        let mut o = Outcome::one();
        compare_facets(&g.stable_set_polytope()?, &g.stable_set_facets(), &format!("stable {}", graph_label(g)), &mut o)?;
        Ok(o)
    })?;
    // K2 has a point as edge polytope, without facets
    let edge = graphs_upto(3, b.max_vertices, &connected_occ())?;
    out.each(&edge, |g| {
        let mut o = Outcome::one();
        compare_facets(&g.edge_polytope()?, &g.edge_facets()?, &format!("edge {}", graph_label(g)), &mut o)?;
        Ok(o)
    })?;
    Ok(out)
}

/// Simple cycles as vertex sequences, each listed once.
pub(crate) fn simple_cycles(g: &SimpleGraph) -> Vec<Vec<usize>> {
    fn extend(g: &SimpleGraph, start: usize, path: &mut Vec<usize>, used: u64, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        for w in bits(g.neighbors(last)) {
            if w == start && path.len() >= 3 && path[1] < last {
                out.push(path.clone());
            } else if w > start && used >> w & 1 == 0 {
                path.push(w);
                extend(g, start, path, used | 1 << w, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..g.n() {
        extend(g, s, &mut vec![s], 1 << s, &mut out);
    }
    out
}

/// Cyclic vertex order of a chordless cycle, starting at `start`.
fn cycle_order(g: &SimpleGraph, mask: u64, start: usize) -> Vec<usize> {
    let mut order = vec![start];
    let mut cur = start;
    while let Some(w) = bits(g.neighbors(cur) & mask).find(|w| !order.contains(w)) {
        order.push(w);
        cur = w;
    }
    order
}

fn shortest_path(g: &SimpleGraph, a: usize, b: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; g.n()];
    parent[a] = a;
    let mut q = VecDeque::from([a]);
    while let Some(v) = q.pop_front() {
        for w in bits(g.neighbors(v)) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                q.push_back(w);
            }
        }
    }
    let mut path = vec![b];
    while *path.last().unwrap() != a {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    path
}

/// Signed edge combination along a closed or open walk:
/// `Σ_{i ≥ 1} sign · (−1)^i · e_i`.
fn alternate(walk: &[usize], closed: bool, sign: i64, acc: &mut Vec<((usize, usize), i64)>) {
    let k = if closed { walk.len() } else { walk.len() - 1 };
    for i in 0..k {
        let (a, b) = (walk[i], walk[(i + 1) % walk.len()]);
        let s = if (i + 1) % 2 == 0 { 1 } else { -1 };
        acc.push(((a.min(b), a.max(b)), sign * s));
    }
}

/// Checks every linear relation among the divisor-matrix columns of `P_G`
/// produced from even cycles, and from pairs of chordless odd cycles that
/// meet in one vertex or are joined by a shortest path.
fn relations_of(g: &SimpleGraph, out: &mut Outcome) -> Result<usize> {
    let p = g.edge_polytope()?;
    let amb = &p.lattice_points().ambient;
    let vm = p.value_matrix()?;
    let col = |(a, b): (usize, usize)| -> usize {
        let mut x = vec![0i64; g.n()];
        x[a] = 1;
        x[b] = 1;
        amb.binary_search(&x).expect("edge is a lattice point")
    };
    let mut count = 0;
    let mut check = |terms: Vec<((usize, usize), i64)>, what: String| {
        count += 1;
        let coef_sum: i64 = terms.iter().map(|t| t.1).sum();
        let ok = coef_sum == 0
            && vm.iter().all(|row| terms.iter().map(|&(e, c)| c * row[col(e)]).sum::<i64>() == 0);
        if !ok {
            out.fail(format!("{}: relation from {what} fails", graph_label(g)));
        }
    };
    for c in simple_cycles(g).into_iter().filter(|c| c.len() % 2 == 0) {
        let mut t = Vec::new();
        alternate(&c, true, 1, &mut t);
        check(t, format!("even cycle {c:?}"));
    }
    let odd = g.induced_odd_cycles(3);
    for (i, &a) in odd.iter().enumerate() {
        for &b in &odd[i + 1..] {
            let common = a & b;
            if common.count_ones() == 1 {
                let v = common.trailing_zeros() as usize;
                let mut t = Vec::new();
                alternate(&cycle_order(g, a, v), true, 1, &mut t);
                alternate(&cycle_order(g, b, v), true, -1, &mut t);
                check(t, format!("odd cycles {a:#b}, {b:#b} through {v}"));
            } else if common == 0 {
                for p0 in bits(a) {
                    for q0 in bits(b) {
                        let path = shortest_path(g, p0, q0);
                        let m = path.len() - 1;
                        let mut t = Vec::new();
                        alternate(&cycle_order(g, a, p0), true, 1, &mut t);
                        alternate(&cycle_order(g, b, q0), true, if m.is_multiple_of(2) { -1 } else { 1 }, &mut t);
                        alternate(&path, false, -2, &mut t);
                        check(t, format!("odd cycles {a:#b}, {b:#b} joined {p0}-{q0}"));
                    }
                }
            }
        }
    }
    Ok(count)
}

pub(crate) fn column_relations(b: &Bounds) -> Result<Outcome> {
    let mut out = Outcome::default();
    let graphs = graphs_upto(3, b.max_vertices, &connected_occ())?;
    let results: Vec<(usize, Outcome)> = graphs
        .par_iter()
        .map(|g| {
            let mut o = Outcome::one();
            Ok((relations_of(g, &mut o)?, o))
        })
        .collect::<Result<_>>()?;
    let mut total = 0;
    for (c, o) in results {
        total += c;
        out.merge(o);
    }
    out.note(format!("{total} relations checked"));
    Ok(out)
}

fn non_bipartite_blocks(g: &SimpleGraph) -> Vec<u64> {
    g.blocks().blocks.into_iter().filter(|&m| !g.induced(m).is_bipartite()).collect()
}

fn group_of(g: &SimpleGraph) -> Result<AbelianGroup> {
    Ok(class_group(&g.edge_polytope()?, IdpPolicy::Assume)?.group())
}

pub(crate) fn block_additivity(b: &Bounds) -> Result<Outcome> {
    let mut out = Outcome::default();
    let connected = graphs_upto(2, b.max_census_vertices, &connected_occ())?;
    let eligible: Vec<&SimpleGraph> = connected.iter().filter(|g| non_bipartite_blocks(g).len() <= 1).collect();
    out.each(&eligible, |g| {
        let mut o = Outcome::one();
        let whole = group_of(g)?;
        let mut sum = AbelianGroup::free(0);
        for m in g.blocks().blocks {
            sum = sum.direct_sum(&group_of(&g.induced(m))?);
        }
        if whole != sum {
            o.fail(format!("{}: {whole} but blocks sum to {sum}", graph_label(g)));
        }
        Ok(o)
    })?;
    let no_isolated = GraphFilter { no_isolated: true, ..Default::default() };
    let disconnected: Vec<SimpleGraph> = graphs_upto(4, b.max_census_vertices, &no_isolated)?
        .into_iter()
        .filter(|g| !g.is_connected())
        // two odd components violate the odd cycle condition of the whole graph
        .filter(|g| non_bipartite_blocks(g).len() <= 1)
        .filter(|g| g.components_in(g.all()).iter().all(|&c| g.induced(c).odd_cycle_condition()))
        .collect();
    out.each(&disconnected, |g| {
        let mut o = Outcome::one();
        let whole = group_of(g)?;
        let mut sum = AbelianGroup::free(0);
        for c in g.components_in(g.all()) {
            sum = sum.direct_sum(&group_of(&g.induced(c))?);
        }
        if whole != sum {
            o.fail(format!("{}: {whole} but components sum to {sum}", graph_label(g)));
        }
        Ok(o)
    })?;
    out.note(format!("{} connected graphs by blocks, {} disconnected graphs by components", eligible.len(), disconnected.len()));
    Ok(out)
}

pub(crate) fn rank_bound(b: &Bounds) -> Result<Outcome> {
    let mut out = Outcome::default();
    let graphs: Vec<SimpleGraph> = graphs_upto(2, b.max_census_vertices, &connected_occ())?
        .into_iter()
        .filter(|g| non_bipartite_blocks(g).len() >= 2)
        .collect();
    out.each(&graphs, |g| {
        let mut o = Outcome::one();
        let cg = class_group(&g.edge_polytope()?, IdpPolicy::Assume)?;
        if cg.free_rank < 4 {
            o.fail(format!("{}: rank {}", graph_label(g), cg.free_rank));
        }
        Ok(o)
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families as gf;

    #[test]
    fn cycles_are_listed_once() {
        assert_eq!(simple_cycles(&gf::complete(4)).len(), 7);
        assert_eq!(simple_cycles(&gf::cycle(5).unwrap()).len(), 1);
        let c5 = gf::cycle(5).unwrap();
        assert_eq!(cycle_order(&c5, c5.all(), 2).len(), 5);
    }

    #[test]
    fn small_sweeps_pass() {
        let b = Bounds { max_elements: 4, max_vertices: 5, max_census_vertices: 5, ..Default::default() };
        for f in [torsion, facets, column_relations, block_additivity, rank_bound] {
            let o = f(&b).unwrap();
            assert!(o.counterexamples.is_empty(), "{:?}", o.counterexamples);
        }
    }
}
