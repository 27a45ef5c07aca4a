//! Isomorphism classes of small graphs and posets.
//!
//! Graphs on `n` vertices arise from graphs on `n − 1` vertices by adding a
//! vertex with an arbitrary neighbourhood; posets on `n` elements arise from
//! posets on `n − 1` elements by adding a maximal element above an ideal.
//! Each level is deduplicated by canonical code and memoized per process.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::poset::Poset;

pub const MAX_GRAPH_VERTICES: usize = 8;
pub const MAX_POSET_ELEMENTS: usize = 7;

type Level<T> = Mutex<HashMap<usize, Arc<Vec<T>>>>;

fn graph_levels() -> &'static Level<SimpleGraph> {
    static L: OnceLock<Level<SimpleGraph>> = OnceLock::new();
    L.get_or_init(Default::default)
}

fn poset_levels() -> &'static Level<Poset> {
    static L: OnceLock<Level<Poset>> = OnceLock::new();
    L.get_or_init(Default::default)
}

/// One canonically labeled graph per isomorphism class on exactly `n`
/// vertices, sorted by canonical code.
pub fn all_graphs(n: usize) -> Result<Arc<Vec<SimpleGraph>>> {
    if n > MAX_GRAPH_VERTICES {
        return Err(Error::TooLarge(format!("graph census on {n} vertices (limit {MAX_GRAPH_VERTICES})")));
    }
    if let Some(v) = graph_levels().lock().unwrap().get(&n) {
        return Ok(v.clone());
    }
    let level: Vec<SimpleGraph> = if n == 0 {
        vec![SimpleGraph::empty(0)]
    } else {
        let prev = all_graphs(n - 1)?;
        let mut codes: Vec<Vec<u64>> = prev
            .par_iter()
            .flat_map_iter(|g| {
                let base: Vec<u64> = g.adjacency().iter().copied().chain([0]).collect();
                (0..1u64 << (n - 1)).map(move |nb| {
                    let mut adj = base.clone();
                    adj[n - 1] = nb;
                    for v in crate::graph::bits(nb) {
                        adj[v] |= 1 << (n - 1);
                    }
                    crate::canon::canonical_form(&adj).code
                })
            })
            .collect();
        codes.par_sort_unstable();
        codes.dedup();
        codes.into_iter().map(SimpleGraph::from_adjacency).collect()
    };
    let level = Arc::new(level);
    graph_levels().lock().unwrap().insert(n, level.clone());
    Ok(level)
}

/// One poset per isomorphism class on exactly `n` elements, labeled by its
/// canonical form, sorted by canonical code.
pub fn all_posets(n: usize) -> Result<Arc<Vec<Poset>>> {
    if n > MAX_POSET_ELEMENTS {
        return Err(Error::TooLarge(format!("poset census on {n} elements (limit {MAX_POSET_ELEMENTS})")));
    }
    if let Some(v) = poset_levels().lock().unwrap().get(&n) {
        return Ok(v.clone());
    }
    let level: Vec<Poset> = if n == 0 {
        vec![Poset::antichain(0)]
    } else {
        let prev = all_posets(n - 1)?;
        let mut codes: Vec<Vec<u64>> = prev
            .par_iter()
            .flat_map_iter(|p| {
                let ideals = p.ideals().expect("small poset");
                ideals.into_iter().map(move |down| p.with_maximal(down).canonical().code)
            })
            .collect();
        codes.par_sort_unstable();
        codes.dedup();
        codes.into_iter().map(|c| poset_from_code(&c)).collect()
    };
    let level = Arc::new(level);
    poset_levels().lock().unwrap().insert(n, level.clone());
    Ok(level)
}

fn poset_from_code(code: &[u64]) -> Poset {
    let rel: Vec<(usize, usize)> =
        code.iter().enumerate().flat_map(|(i, &m)| crate::graph::bits(m).map(move |j| (i, j))).collect();
    Poset::new(code.len(), &rel).expect("canonical code of a poset")
}

/// Conjunction of structural conditions on graphs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphFilter {
    pub connected: bool,
    pub two_connected: bool,
    pub bipartite: Option<bool>,
    pub perfect: bool,
    pub occ: bool,
    pub no_isolated: bool,
    pub edge_count: Option<usize>,
    pub nontrivial_independent_sets: Option<usize>,
}

impl GraphFilter {
    pub fn matches(&self, g: &SimpleGraph) -> Result<bool> {
        if self.edge_count.is_some_and(|e| g.edge_count() != e) {
            return Ok(false);
        }
        if self.no_isolated && g.adjacency().contains(&0) {
            return Ok(false);
        }
        if self.connected && !g.is_connected() {
            return Ok(false);
        }
        if self.two_connected && !g.is_two_connected() {
            return Ok(false);
        }
        if self.bipartite.is_some_and(|b| g.is_bipartite() != b) {
            return Ok(false);
        }
        if self.occ && !g.odd_cycle_condition() {
            return Ok(false);
        }
        if self.perfect && !g.is_perfect()? {
            return Ok(false);
        }
        if let Some(k) = self.nontrivial_independent_sets {
            if g.nontrivial_independent_set_count()? != k {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for GraphFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (on, name) in [
            (self.connected, "connected"),
            (self.two_connected, "two_connected"),
            (self.perfect, "perfect"),
            (self.occ, "occ"),
            (self.no_isolated, "no_isolated"),
        ] {
            if on {
                parts.push(name.into());
            }
        }
        match self.bipartite {
            Some(true) => parts.push("bipartite".into()),
            Some(false) => parts.push("non_bipartite".into()),
            None => {}
        }
        if let Some(e) = self.edge_count {
            parts.push(format!("edge_count={e}"));
        }
        if let Some(k) = self.nontrivial_independent_sets {
            parts.push(format!("nontrivial_independent_sets={k}"));
        }
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for GraphFilter {
    type Err = Error;

    /// Comma-separated flags, e.g. `connected,bipartite,edge_count=12`.
    fn from_str(s: &str) -> Result<Self> {
        let mut f = GraphFilter::default();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (key, val) = match item.split_once('=') {
                Some((k, v)) => (k.trim(), Some(v.trim())),
                None => (item, None),
            };
            let num = || -> Result<usize> {
                val.ok_or_else(|| Error::BadInput(format!("filter {key} needs a value")))?
                    .parse()
                    .map_err(|_| Error::BadInput(format!("filter {key}: expected an integer")))
            };
            match (key, val) {
                ("connected", None) => f.connected = true,
                ("two_connected", None) => f.two_connected = true,
                ("bipartite", None) => f.bipartite = Some(true),
                ("non_bipartite", None) => f.bipartite = Some(false),
                ("perfect", None) => f.perfect = true,
                ("occ", None) => f.occ = true,
                ("no_isolated", None) => f.no_isolated = true,
                ("edge_count", Some(_)) => f.edge_count = Some(num()?),
                ("nontrivial_independent_sets", Some(_)) => f.nontrivial_independent_sets = Some(num()?),
                _ => return Err(Error::BadInput(format!("unknown filter '{item}'"))),
            }
        }
        Ok(f)
    }
}

/// Isomorphism classes on exactly `n` vertices passing `filter`, in census order.
pub fn enumerate_graphs(n: usize, filter: &GraphFilter) -> Result<Vec<SimpleGraph>> {
    let all = all_graphs(n)?;
    let keep: Vec<bool> = all.par_iter().map(|g| filter.matches(g)).collect::<Result<_>>()?;
    Ok(all.iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| g.clone()).collect())
}

pub fn enumerate_posets(n: usize) -> Result<Vec<Poset>> {
    Ok(all_posets(n)?.as_ref().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        let graphs: Vec<usize> = (1..=6).map(|n| all_graphs(n).unwrap().len()).collect();
        assert_eq!(graphs, vec![1, 2, 4, 11, 34, 156]);
        let posets: Vec<usize> = (1..=5).map(|n| all_posets(n).unwrap().len()).collect();
        assert_eq!(posets, vec![1, 2, 5, 16, 63]);
        assert!(matches!(all_graphs(9), Err(Error::TooLarge(_))));
    }

    #[test]
    fn filters_round_trip() {
        let f: GraphFilter = "connected,bipartite,edge_count=12".parse().unwrap();
        assert_eq!(f.to_string().parse::<GraphFilter>().unwrap(), f);
        assert!("colourful".parse::<GraphFilter>().is_err());
        let conn = enumerate_graphs(4, &"connected".parse().unwrap()).unwrap();
        assert_eq!(conn.len(), 6);
    }
}
