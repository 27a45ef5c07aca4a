//! Characterization checks for small class group ranks and the comparisons
//! between order, stable set and edge polytopes of rank one to three.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::enumerate::{all_graphs, all_posets, GraphFilter};
use super::verify::{core, graph_label, graphs_upto, poset_label, posets_upto, Bounds, Library, Outcome};
use crate::classgroup::{class_group, AbelianGroup, IdpPolicy};
use crate::equivalence::{unimodular_equivalent, verify_witness};
use crate::error::{Error, Result};
use crate::graph::families::{self as gf, GluedCase};
use crate::graph::SimpleGraph;
use crate::polytope::LatticePolytope;
use crate::poset::families as pf;
use crate::poset::Poset;

fn group(p: &LatticePolytope) -> Result<AbelianGroup> {
    Ok(class_group(p, IdpPolicy::Assume)?.group())
}

fn expect_group(p: &LatticePolytope, rank: usize, what: &str, out: &mut Outcome) -> Result<()> {
    let g = group(p)?;
    if g != AbelianGroup::free(rank) {
        out.fail(format!("{what}: class group {g}, expected {}", AbelianGroup::free(rank)));
    }
    Ok(())
}

fn expect_equivalent(p: &LatticePolytope, q: &LatticePolytope, what: &str, budget: u64, out: &mut Outcome) -> Result<()> {
    match unimodular_equivalent(p, q, budget) {
        Ok(Some(w)) if verify_witness(p, q, &w) => {}
        Ok(Some(_)) => out.fail(format!("{what}: witness fails verification")),
        Ok(None) => out.fail(format!("{what}: not unimodularly equivalent")),
        Err(Error::SearchBudgetExceeded(n)) => {
            out.budget_exits.push(format!("{what} after {n} nodes"));
            out.fail(format!("{what}: undecided within budget"));
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// poset families, every isomorphism class up to `max` elements at least once

type Named<T> = Vec<(String, T)>;

fn pi1_family(max: usize) -> Result<Named<Poset>> {
    let mut out = Vec::new();
    for s1 in 1..=max {
        for s2 in s1..=max {
            if s1 + s2 <= max {
                out.push((format!("Pi1({s1},{s2})"), pf::pi1(s1, s2)?));
            }
        }
    }
    Ok(out)
}

fn pi2_family(max: usize) -> Result<Named<Poset>> {
    let mut out = Vec::new();
    for s1 in 1..=max {
        for s2 in s1..=max {
            for s3 in 1..=max {
                for t in 0..=max {
                    if s1 + s2 + s3 + t <= max {
                        out.push((format!("Pi2({s1},{s2},{s3},{t})"), pf::pi2(s1, s2, s3, t)?));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn pi3_family(max: usize) -> Result<Named<Poset>> {
    let mut out = Vec::new();
    for s1 in 1..=max {
        for s2 in 1..=max {
            for t1 in 1..=max {
                for t2 in 1..=max {
                    for t3 in 0..=max {
                        if s1 + s2 + t1 + t2 + t3 <= max {
                            out.push((format!("Pi3({s1},{s2},{t1},{t2},{t3})"), pf::pi3(s1, s2, t1, t2, t3)?));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn pi4_family(max: usize) -> Result<Named<Poset>> {
    let mut out = Vec::new();
    for s1 in 1..=max {
        for s2 in 1..=max {
            for t1 in 1..=max {
                for t2 in 1..=max {
                    if s1 + s2 + t1 + t2 < max {
                        out.push((format!("Pi4({s1},{s2},{t1},{t2})"), pf::pi4(s1, s2, t1, t2)?));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn order_library(posets: &Named<Poset>) -> Result<Library> {
    let items = posets.par_iter().map(|(l, p)| Ok((format!("O_{l}"), p.order_polytope()?))).collect::<Result<_>>()?;
    Library::new(items)
}

// ---------------------------------------------------------------------------

pub(crate) fn order_small_rank(b: &Bounds) -> Result<Outcome> {
    let m = b.max_elements;
    let mut out = Outcome::default();
    let one = pi1_family(m)?;
    let mut two = pi2_family(m)?;
    two.extend(pi3_family(m)?);
    two.extend(pi4_family(m)?);
    for (fam, rank) in [(&one, 1), (&two, 2)] {
        out.each(fam, |(l, p)| {
            let mut o = Outcome::one();
            expect_group(&p.order_polytope()?, rank, &format!("O_{l}"), &mut o)?;
            Ok(o)
        })?;
    }
    let (lib1, lib2) = (order_library(&one)?, order_library(&two)?);
    let posets = posets_upto(m)?;
    out.each(&posets, |p| {
        let mut o = Outcome::one();
        let o_p = p.order_polytope()?;
        let g = group(&o_p)?;
        let lib = if g == AbelianGroup::free(1) {
            &lib1
        } else if g == AbelianGroup::free(2) {
            &lib2
        } else {
            return Ok(o);
        };
        lib.expect_match(&core(&o_p), &format!("core of O_{}", poset_label(p)), b.budget, &mut o)?;
        Ok(o)
    })?;
    Ok(out)
}

pub(crate) fn order_vs_chain(b: &Bounds) -> Result<Outcome> {
    let m = b.max_elements;
    let mut fam = pi1_family(m)?;
    fam.extend(pi2_family(m)?);
    fam.extend(pi3_family(m)?);
    let mut out = Outcome::default();
    out.each(&fam, |(l, p)| {
        let mut o = Outcome::one();
        let c = p.chain_polytope()?;
        if !c.same_points(&p.comparability_graph().stable_set_polytope()?) {
            o.fail(format!("C_{l} differs from the stable set polytope of its comparability graph"));
        }
        expect_equivalent(&p.order_polytope()?, &c, &format!("O_{l} vs C_{l}"), b.budget, &mut o)?;
        Ok(o)
    })?;
    Ok(out)
}

pub(crate) fn stable_small_rank(b: &Bounds) -> Result<Outcome> {
    let m = b.max_vertices;
    let mut out = Outcome::default();
    let one = pi1_family(m)?;
    let mut two = pi2_family(m)?;
    two.extend(pi3_family(m)?);
    for (fam, rank) in [(&one, 1), (&two, 2)] {
        out.each(fam, |(l, p)| {
            let mut o = Outcome::one();
            let g = p.comparability_graph();
            if !g.is_perfect()? {
                o.fail(format!("G({l}) is not perfect"));
            }
            expect_group(&g.stable_set_polytope()?, rank, &format!("Stab G({l})"), &mut o)?;
            Ok(o)
        })?;
    }
    let (lib1, lib2) = (order_library(&one)?, order_library(&two)?);
    let graphs = graphs_upto(1, m, &GraphFilter { perfect: true, ..Default::default() })?;
    out.each(&graphs, |g| {
        let mut o = Outcome::one();
        let s = g.stable_set_polytope()?;
        let cg = group(&s)?;
        let lib = if cg == AbelianGroup::free(1) {
            &lib1
        } else if cg == AbelianGroup::free(2) {
            &lib2
        } else {
            return Ok(o);
        };
        lib.expect_match(&core(&s), &format!("core of Stab {}", graph_label(g)), b.budget, &mut o)?;
        Ok(o)
    })?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// graph families compared up to isomorphism

/// Canonical code to the labels of the constructions producing it.
type CodeMap = BTreeMap<Vec<u64>, Vec<String>>;

fn insert(map: &mut CodeMap, g: &SimpleGraph, label: String) {
    map.entry(g.canonical().code).or_default().push(label);
}

fn bipartite_families(max: usize) -> Result<(CodeMap, CodeMap)> {
    let (mut one, mut two) = (CodeMap::new(), CodeMap::new());
    for s1 in 2..=max {
        for s2 in 2..=max {
            if s1 + s2 <= max {
                insert(&mut one, &gf::complete_bipartite(s1, s2)?, format!("K_{s1},{s2}"));
            }
            for t1 in 1..=max {
                for t2 in 1..=max {
                    if s1 + s2 + t1 + t2 <= max {
                        insert(&mut two, &gf::k_s1s2_t1t2(s1, s2, t1, t2)?, format!("K_{s1},{s2}^{t1},{t2}"));
                    }
                }
            }
        }
    }
    Ok((one, two))
}

/// Checks both directions of a graph characterization: every family member
/// is admissible with the expected class group, and every admissible graph
/// of class group `Z^r` (`r = 1, 2`) is isomorphic to a member.
fn characterize(
    families: [&CodeMap; 2],
    admissible: &[SimpleGraph],
    is_admissible: impl Fn(&SimpleGraph) -> Result<bool> + Sync + Send,
    out: &mut Outcome,
) -> Result<()> {
    for (rank, fam) in [(1, families[0]), (2, families[1])] {
        let members: Vec<(&Vec<u64>, &Vec<String>)> = fam.iter().collect();
        out.each(&members, |(code, labels)| {
            let mut o = Outcome::one();
            let g = SimpleGraph::from_adjacency(code.to_vec());
            if !is_admissible(&g)? {
                o.fail(format!("{} is outside the admissible class", labels[0]));
                return Ok(o);
            }
            expect_group(&g.edge_polytope()?, rank, &labels[0], &mut o)?;
            Ok(o)
        })?;
    }
    out.each(admissible, |g| {
        let mut o = Outcome::one();
        let cg = group(&g.edge_polytope()?)?;
        for (rank, fam) in [(1, families[0]), (2, families[1])] {
            if cg == AbelianGroup::free(rank) && !fam.contains_key(&g.canonical().code) {
                o.fail(format!("{} has class group {cg} but is no family member", graph_label(g)));
            }
        }
        Ok(o)
    })?;
    Ok(())
}

pub(crate) fn bipartite_small_rank(b: &Bounds) -> Result<Outcome> {
    let mut out = Outcome::default();
    let (one, two) = bipartite_families(b.max_vertices)?;
    let filter = GraphFilter { two_connected: true, bipartite: Some(true), ..Default::default() };
    let graphs = graphs_upto(3, b.max_vertices, &filter)?;
    characterize([&one, &two], &graphs, |g| Ok(g.is_two_connected() && g.is_bipartite()), &mut out)?;
    let wide: Vec<&String> = two.values().flatten().filter(|l| t_not_below_s(l)).collect();
    if !wide.is_empty() {
        out.note(format!(
            "{} members need t_i >= s_i in K_s1,s2^t1,t2, e.g. {}",
            wide.len(),
            wide.iter().take(3).map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
        ));
    }
    Ok(out)
}

fn t_not_below_s(label: &str) -> bool {
    let nums: Vec<usize> = label
        .split(|c: char| !c.is_ascii_digit())
        .filter(|s| !s.is_empty())
        .filter_map(|s| s.parse().ok())
        .collect();
    // labels K_s1,s2^t1,t2 and glued(2x: s1,s2,t1,t2,...)
    match label.strip_prefix("glued(") {
        Some(_) => nums.len() >= 5 && (nums[0] == 24 || nums[0] == 25 || nums[0] == 26) && (nums[3] >= nums[1] || nums[4] >= nums[2]),
        None => nums.len() == 4 && (nums[2] >= nums[0] || nums[3] >= nums[1]),
    }
}

/// Vertex count of a glued construction before building it.
fn glued_size(case: GluedCase, p: &[usize]) -> usize {
    use GluedCase::*;
    match case {
        C11 | C12 => p[0] + p[1] + p[2] - 1,
        C21 | C22 | C23 => (p[0] + p[1] + p[2] + p[3] + p[4] + p[5]).saturating_sub(2),
        C24 | C25 => p[0] + p[1] + p[2] + p[3] + p[4] - 1,
        C26 => p[0] + p[1] + p[2] + p[3] + 1,
    }
}

/// Every glued construction on at most `max` vertices, all endpoint choices.
fn glued_families(max: usize) -> Result<(CodeMap, CodeMap)> {
    use GluedCase::*;
    let mut params: Vec<(GluedCase, Vec<usize>)> = Vec::new();
    let r = 0..=max;
    for s1 in 2..=max {
        for s2 in 2..=max {
            for l in r.clone() {
                for case in [C11, C12] {
                    if glued_size(case, &[s1, s2, l]) <= max {
                        for i in 1..=s1 + s2 {
                            for j in i + 1..=s1 + s2 {
                                params.push((case, vec![s1, s2, l, i, j]));
                            }
                        }
                    }
                }
            }
            for t1 in r.clone() {
                for t2 in r.clone() {
                    let base = [s1, s2, t1, t2];
                    if t1 >= 1 && t2 >= 1 {
                        for l in r.clone() {
                            for case in [C24, C25] {
                                if glued_size(case, &[s1, s2, t1, t2, l]) <= max {
                                    let n = s1 + s2 + t1 + t2;
                                    for i in 1..=n {
                                        for j in i + 1..=n {
                                            params.push((case, vec![s1, s2, t1, t2, l, i, j]));
                                        }
                                    }
                                }
                            }
                        }
                    }
                    if glued_size(C26, &base) <= max {
                        params.push((C26, base.to_vec()));
                    }
                    if t1 >= 2 && t2 >= 2 {
                        for l1 in r.clone() {
                            for l2 in r.clone() {
                                for case in [C21, C22, C23] {
                                    if glued_size(case, &[s1, s2, t1, t2, l1, l2]) > max {
                                        continue;
                                    }
                                    for i in 1..=s1 + s2 {
                                        for j in 1..=s1 + s2 {
                                            for k in 1..=t1 + t2 {
                                                for l in 1..=t1 + t2 {
                                                    params.push((case, vec![s1, s2, t1, t2, l1, l2, i, j, k, l]));
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let built: Vec<Option<(usize, SimpleGraph, String)>> = params
        .par_iter()
        .map(|(case, p)| match gf::glued(*case, p) {
            Ok(g) => {
                let ps: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                Ok(Some((case.rank(), g, format!("glued({}: {})", case.code(), ps.join(",")))))
            }
            Err(Error::BadParams(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let (mut one, mut two) = (CodeMap::new(), CodeMap::new());
    for (rank, g, label) in built.into_iter().flatten() {
        if g.n() <= max {
            insert(if rank == 1 { &mut one } else { &mut two }, &g, label);
        }
    }
    Ok((one, two))
}

pub(crate) fn nonbipartite_small_rank(b: &Bounds) -> Result<Outcome> {
    let mut out = Outcome::default();
    let (one, two) = glued_families(b.max_vertices)?;
    let filter = GraphFilter { two_connected: true, bipartite: Some(false), occ: true, ..Default::default() };
    let graphs = graphs_upto(3, b.max_vertices, &filter)?;
    let admissible = |g: &SimpleGraph| Ok(g.is_two_connected() && !g.is_bipartite() && g.odd_cycle_condition());
    characterize([&one, &two], &graphs, admissible, &mut out)?;
    out.note(format!("{} rank-one and {} rank-two constructions up to isomorphism", one.len(), two.len()));
    let wide: Vec<&String> = two.values().filter(|ls| ls.iter().all(|l| t_not_below_s(l))).flatten().collect();
    if !wide.is_empty() {
        out.note(format!(
            "{} constructions only arise with t_i >= s_i, e.g. {}",
            wide.len(),
            wide.iter().take(3).map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------

pub(crate) fn rank_one_classes(b: &Bounds) -> Result<Outcome> {
    let mut out = Outcome::default();
    let one = pi1_family(b.max_vertices)?;
    out.each(&one, |(l, p)| {
        let mut o = Outcome::one();
        let (s1, s2) = pi1_params(l);
        let order = p.order_polytope()?;
        if s1 + s2 + 2 <= b.max_vertices {
            let k = gf::complete_bipartite(s1 + 1, s2 + 1)?.edge_polytope()?;
            expect_equivalent(&k, &order, &format!("P_K_{},{} vs O_{l}", s1 + 1, s2 + 1), b.budget, &mut o)?;
        }
        let stab = p.comparability_graph().stable_set_polytope()?;
        expect_equivalent(&stab, &order, &format!("Stab G({l}) vs O_{l}"), b.budget, &mut o)?;
        Ok(o)
    })?;
    let lib = order_library(&one)?;
    let rank_one = |p: &LatticePolytope, what: String| -> Result<Outcome> {
        let mut o = Outcome::one();
        if group(p)? == AbelianGroup::free(1) {
            lib.expect_match(&core(p), &format!("core of {what}"), b.budget, &mut o)?;
        }
        Ok(o)
    };
    let posets = posets_upto(b.max_elements)?;
    out.each(&posets, |p| rank_one(&p.order_polytope()?, format!("O_{}", poset_label(p))))?;
    let perfect = graphs_upto(1, b.max_vertices, &GraphFilter { perfect: true, ..Default::default() })?;
    out.each(&perfect, |g| rank_one(&g.stable_set_polytope()?, format!("Stab {}", graph_label(g))))?;
    let conn = graphs_upto(2, b.max_vertices, &GraphFilter { connected: true, occ: true, ..Default::default() })?;
    out.each(&conn, |g| rank_one(&g.edge_polytope()?, format!("P {}", graph_label(g))))?;
    Ok(out)
}

fn pi1_params(label: &str) -> (usize, usize) {
    let inner = &label[4..label.len() - 1];
    let (a, b) = inner.split_once(',').expect("Pi1 label");
    (a.parse().unwrap(), b.parse().unwrap())
}

pub(crate) fn three_way_equivalences(b: &Bounds) -> Result<Outcome> {
    let mut tuples = Vec::new();
    for s1 in 1..=b.max_vertices {
        for s2 in 1..=b.max_vertices {
            for t1 in 1..=b.max_vertices {
                for t2 in 1..=b.max_vertices {
                    if s1 + s2 + t1 + t2 + 2 <= b.max_vertices {
                        tuples.push((s1, s2, t1, t2));
                    }
                }
            }
        }
    }
    let mut out = Outcome::default();
    out.each(&tuples, |&(s1, s2, t1, t2)| {
        let mut o = Outcome::one();
        let bip = gf::k_s1s2_t1t2(s1 + 1, s2 + 1, t1, t2)?.edge_polytope()?;
        let tri = gf::k_1s1s2_t1t2(s1 + 1, s2 + 1, t1 - 1, t2 - 1)?.edge_polytope()?;
        let ord = pf::pi3(s1, s2, t1, t2, 0)?.order_polytope()?;
        let tag = format!("({s1},{s2},{t1},{t2})");
        expect_equivalent(&bip, &ord, &format!("bipartite vs order {tag}"), b.budget, &mut o)?;
        expect_equivalent(&tri, &ord, &format!("tripartite vs order {tag}"), b.budget, &mut o)?;
        expect_equivalent(&bip, &tri, &format!("bipartite vs tripartite {tag}"), b.budget, &mut o)?;
        Ok(o)
    })?;
    Ok(out)
}

/// Order polytopes of all posets with Hibi rank 2 on at most `max` elements.
fn rank_two_orders(max: usize) -> Result<Library> {
    let mut items = Vec::new();
    for n in 1..=max {
        for p in all_posets(n)?.iter().filter(|p| p.hibi_rank() == 2) {
            items.push((poset_label(p), p.clone()));
        }
    }
    order_library(&items)
}

pub(crate) fn rank_two_classes(b: &Bounds) -> Result<Outcome> {
    let mut out = Outcome::default();
    let orders = rank_two_orders(b.max_vertices.min(super::enumerate::MAX_POSET_ELEMENTS))?;
    let two = AbelianGroup::free(2);

    let perfect = graphs_upto(1, b.max_vertices, &GraphFilter { perfect: true, ..Default::default() })?;
    out.each(&perfect, |g| {
        let mut o = Outcome::one();
        let s = g.stable_set_polytope()?;
        if group(&s)? == two {
            orders.expect_match(&s, &format!("Stab {}", graph_label(g)), b.budget, &mut o)?;
        }
        Ok(o)
    })?;

    let filter = GraphFilter { two_connected: true, occ: true, ..Default::default() };
    let two_conn = graphs_upto(3, b.max_vertices, &filter)?;
    out.each(&two_conn, |g| {
        let mut o = Outcome::one();
        let e = g.edge_polytope()?;
        if group(&e)? == two {
            orders.expect_match(&e, &format!("P {}", graph_label(g)), b.budget, &mut o)?;
        }
        Ok(o)
    })?;

    let mut x_members = Vec::new();
    for s1 in 1..=b.max_elements {
        for s2 in 1..=b.max_elements {
            for t1 in 1..=b.max_elements {
                for t2 in 1..=b.max_elements {
                    if s1 + s2 + t1 + t2 < b.max_elements {
                        x_members.push((format!("P_K_X({s1},{s2},{t1},{t2})"), gf::k_x_shape(s1, s2, t1, t2)?.edge_polytope()?));
                    }
                }
            }
        }
    }
    let x_lib = Library::new(x_members)?;
    let posets: Vec<Poset> = posets_upto(b.max_elements)?;
    let fallback = std::sync::Mutex::new(0usize);
    out.each(&posets, |p| {
        let mut o = Outcome::one();
        let op = p.order_polytope()?;
        if group(&op)? != two {
            return Ok(o);
        }
        let what = format!("O_{}", poset_label(p));
        let stab = p.comparability_graph().stable_set_polytope()?;
        if let Ok(Some(w)) = unimodular_equivalent(&op, &stab, b.budget) {
            if verify_witness(&op, &stab, &w) {
                return Ok(o);
            }
        }
        if let super::verify::Found::Member(_) = x_lib.find(&core(&op), b.budget)? {
            return Ok(o);
        }
        *fallback.lock().unwrap() += 1;
        // a pendant edge puts an apex back, so matching the core suffices
        let oc = core(&op);
        let (pool, complete) = edge_pool(oc.lattice_points().ambient.len(), oc.dim())?;
        if !complete {
            o.fail(format!("{what}: edge candidate pool not provably complete"));
        }
        let lib = Library::new(pool.iter().map(|g| Ok((graph_label(g), g.edge_polytope()?))).collect::<Result<_>>()?)?;
        lib.expect_match(&oc, &format!("core of {what} (neither its chain polytope nor an X-shape edge polytope)"), b.budget, &mut o)?;
        Ok(o)
    })?;
    out.note(format!(
        "{} rank-two order polytopes matched only through the enumerated edge pool",
        fallback.into_inner().unwrap()
    ));
    Ok(out)
}

// ---------------------------------------------------------------------------
// candidate pools for non-membership

/// Most edges of a graph on `d` vertices without isolated vertices having
/// exactly `b` bipartite components.
fn max_edges(d: usize, b: usize) -> Option<usize> {
    let mut best: Vec<Vec<Option<usize>>> = vec![vec![None; b + 1]; d + 1];
    best[0][0] = Some(0);
    for v in 0..d {
        for k in 0..=b {
            let Some(cur) = best[v][k] else { continue };
            for s in 2..=d - v {
                if k < b {
                    let e = cur + s * s / 4;
                    let slot = &mut best[v + s][k + 1];
                    *slot = Some(slot.map_or(e, |x| x.max(e)));
                }
                if s >= 3 {
                    let e = cur + s * (s - 1) / 2;
                    let slot = &mut best[v + s][k];
                    *slot = Some(slot.map_or(e, |x| x.max(e)));
                }
            }
        }
    }
    best[d][b]
}

/// Graphs without isolated vertices whose edge polytope has `points`
/// lattice points and dimension `dim`, up to the enumeration limit; the
/// flag tells whether larger graphs are excluded by edge counting.
pub(crate) fn edge_pool(points: usize, dim: usize) -> Result<(Vec<SimpleGraph>, bool)> {
    let limit = super::enumerate::MAX_GRAPH_VERTICES;
    let mut pool = Vec::new();
    for n in 2..=limit {
        for g in all_graphs(n)?.iter() {
            if g.edge_count() == points
                && g.adjacency().iter().all(|&m| m != 0)
                && n == dim + 1 + g.bipartite_components()
            {
                pool.push(g.clone());
            }
        }
    }
    // `b` bipartite components need `2b ≤ d`, so `d ≤ 2·dim + 2`
    let complete = (limit + 1..=2 * dim + 2).all(|d| max_edges(d, d - dim - 1).is_none_or(|e| e < points));
    Ok((pool, complete))
}

fn stable_pool(n: usize, points: usize) -> Result<Vec<SimpleGraph>> {
    all_graphs(n)?
        .iter()
        .filter_map(|g| match g.independent_sets() {
            Ok(s) if s.len() == points => Some(Ok(g.clone())),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}

fn order_pool(n: usize, points: usize) -> Result<Vec<Poset>> {
    all_posets(n)?
        .iter()
        .filter_map(|p| match p.ideals() {
            Ok(s) if s.len() == points => Some(Ok(p.clone())),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}

fn union_graphs(parts: Vec<Vec<SimpleGraph>>) -> Vec<SimpleGraph> {
    let mut seen: HashMap<Vec<u64>, SimpleGraph> = HashMap::new();
    for g in parts.into_iter().flatten() {
        seen.entry(g.canonical().code).or_insert(g);
    }
    let mut v: Vec<(Vec<u64>, SimpleGraph)> = seen.into_iter().collect();
    v.sort_by(|a, b| (a.1.n(), &a.0).cmp(&(b.1.n(), &b.0)));
    v.into_iter().map(|(_, g)| g).collect()
}

fn edge_library(pool: &[SimpleGraph]) -> Result<Library> {
    Library::new(pool.par_iter().map(|g| Ok((format!("P {}", graph_label(g)), g.edge_polytope()?))).collect::<Result<_>>()?)
}

fn stable_library(pool: &[SimpleGraph]) -> Result<Library> {
    Library::new(pool.par_iter().map(|g| Ok((format!("Stab {}", graph_label(g)), g.stable_set_polytope()?))).collect::<Result<_>>()?)
}

/// Connected graphs on `n` vertices with the given bipartiteness and at most
/// one non-bipartite block; edge count optional.
fn stated_edge_pool(n: usize, bipartite: bool, edges: Option<usize>) -> Result<Vec<SimpleGraph>> {
    let filter = GraphFilter { connected: true, bipartite: Some(bipartite), edge_count: edges, ..Default::default() };
    Ok(super::enumerate::enumerate_graphs(n, &filter)?
        .into_iter()
        .filter(|g| g.blocks().blocks.iter().filter(|&&m| !g.induced(m).is_bipartite()).count() <= 1)
        .collect())
}

/// `q` is equivalent to no edge polytope.
fn not_edge(q: &LatticePolytope, what: &str, stated: Vec<SimpleGraph>, stated_desc: &str, b: &Bounds, out: &mut Outcome) -> Result<()> {
    let (n_pts, dim) = (q.lattice_points().ambient.len(), q.dim());
    let (derived, complete) = edge_pool(n_pts, dim)?;
    if !complete {
        out.fail(format!("{what}: derived edge pool ({n_pts} edges, dim {dim}) not provably complete"));
    }
    let (ns, nd) = (stated.len(), derived.len());
    let pool = union_graphs(vec![stated, derived]);
    out.note(format!(
        "{what} vs edge polytopes: stated pool ({stated_desc}) {ns}, derived pool ({n_pts} edges, dim {dim}) {nd}, union {}",
        pool.len()
    ));
    out.instances += pool.len();
    edge_library(&pool)?.expect_no_match(q, what, b.budget, out)
}

/// `q` is equivalent to no stable set polytope.
fn not_stable(q: &LatticePolytope, what: &str, stated: Vec<SimpleGraph>, stated_desc: &str, b: &Bounds, out: &mut Outcome) -> Result<()> {
    let (n_pts, dim) = (q.lattice_points().ambient.len(), q.dim());
    let derived = stable_pool(dim, n_pts)?;
    let (ns, nd) = (stated.len(), derived.len());
    let pool = union_graphs(vec![stated, derived]);
    out.note(format!(
        "{what} vs stable set polytopes: stated pool ({stated_desc}) {ns}, derived pool ({dim} vertices, {n_pts} independent sets) {nd}, union {}",
        pool.len()
    ));
    out.instances += pool.len();
    stable_library(&pool)?.expect_no_match(q, what, b.budget, out)
}

/// `q` is equivalent to no order polytope.
fn not_order(q: &LatticePolytope, what: &str, b: &Bounds, out: &mut Outcome) -> Result<()> {
    let (n_pts, dim) = (q.lattice_points().ambient.len(), q.dim());
    let stated: Vec<Poset> = all_posets(dim)?.as_ref().clone();
    let derived = order_pool(dim, n_pts)?;
    out.note(format!(
        "{what} vs order polytopes: stated pool (all posets on {dim} elements) {}, derived pool ({n_pts} ideals) {}",
        stated.len(),
        derived.len()
    ));
    out.instances += stated.len();
    let named: Named<Poset> = stated.iter().map(|p| (poset_label(p), p.clone())).collect();
    order_library(&named)?.expect_no_match(q, what, b.budget, out)
}

pub(crate) fn stable_not_edge(b: &Bounds) -> Result<Outcome> {
    let mut out = Outcome::default();
    let g = pf::pi2(1, 1, 1, 2)?.comparability_graph();
    let s = g.stable_set_polytope()?;
    expect_group(&s, 2, "Stab G(Pi2(1,1,1,2))", &mut out)?;
    let mut stated = stated_edge_pool(7, true, Some(12))?;
    stated.extend(stated_edge_pool(6, false, Some(12))?);
    not_edge(&s, "Stab G(Pi2(1,1,1,2))", stated, "bipartite 7v/12e or non-bipartite 6v/12e", b, &mut out)?;
    Ok(out)
}

pub(crate) fn edge_not_stable(b: &Bounds) -> Result<Outcome> {
    let mut out = Outcome::default();
    let p = gf::h_graph().edge_polytope()?;
    expect_group(&p, 2, "P_H", &mut out)?;
    let mut stated = stable_pool(5, 8)?;
    stated.extend(stable_pool(6, 8)?);
    not_stable(&p, "P_H", stated, "5 or 6 vertices, 8 independent sets", b, &mut out)?;
    let printed = gf::h_graph_printed();
    let pp = printed.edge_polytope()?;
    out.note(format!(
        "the printed edge list for H gives dim {} with class group {}; the drawn H is used",
        pp.dim(),
        group(&pp)?
    ));
    Ok(out)
}

pub(crate) fn rank_three_witnesses(b: &Bounds) -> Result<Outcome> {
    let mut out = Outcome::default();
    let o = pf::x_shape().disjoint_union(&Poset::antichain(1)).order_polytope()?;
    let s = gf::gamma().stable_set_polytope()?;
    let e = gf::complete_multipartite(&[2, 2, 2])?.edge_polytope()?;
    let (on, sn, en) = ("O_(X-shape + point)", "Stab_Gamma", "P_K2,2,2");
    for (p, w) in [(&o, on), (&s, sn), (&e, en)] {
        expect_group(p, 3, w, &mut out)?;
    }

    let nontrivial4: Vec<SimpleGraph> = all_graphs(6)?
        .iter()
        .filter(|g| g.nontrivial_independent_set_count().is_ok_and(|k| k == 4))
        .cloned()
        .collect();
    not_stable(&o, on, nontrivial4, "6 vertices, 4 nontrivial independent sets", b, &mut out)?;
    let mut stated = stated_edge_pool(8, true, None)?;
    stated.extend(stated_edge_pool(7, false, None)?);
    not_edge(&o, on, stated, "bipartite on 8 or non-bipartite on 7, at most one non-bipartite block", b, &mut out)?;

    not_order(&s, sn, b, &mut out)?;
    let mut stated = stated_edge_pool(8, true, None)?;
    stated.extend(stated_edge_pool(7, false, None)?);
    not_edge(&s, sn, stated, "by analogy: bipartite on 8 or non-bipartite on 7", b, &mut out)?;

    not_order(&e, en, b, &mut out)?;
    let all5: Vec<SimpleGraph> = all_graphs(5)?.as_ref().clone();
    not_stable(&e, en, all5, "by analogy: all graphs on 5 vertices", b, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        assert_eq!(pi1_family(4).unwrap().len(), 4);
        assert!(pi4_family(4).unwrap().is_empty());
        assert_eq!(pi4_family(5).unwrap().len(), 1);
        assert_eq!(pi4_family(6).unwrap().len(), 5);
    }

    #[test]
    fn edge_count_bound() {
        assert_eq!(max_edges(4, 1), Some(4));
        assert_eq!(max_edges(6, 0), Some(15));
        assert_eq!(max_edges(9, 2), Some(13));
        assert_eq!(max_edges(3, 2), None);
        let (pool, complete) = edge_pool(12, 5).unwrap();
        assert!(complete);
        assert!(pool.iter().all(|g| g.edge_count() == 12));
    }

    #[test]
    fn width_labels() {
        assert!(t_not_below_s("K_2,2^2,1"));
        assert!(!t_not_below_s("K_3,2^2,1"));
        assert!(t_not_below_s("glued(24: 2,2,2,1,2,1,5)"));
    }
}
