//! Registry of exhaustive checks and the report they produce.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::{enumerate_graphs, enumerate_posets, GraphFilter};
use super::{properties, suites, theorems};
use crate::equivalence::{cheap_fingerprint, unimodular_equivalent, verify_witness, Fingerprint, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::polytope::LatticePolytope;
use crate::poset::Poset;

/// Size limits for a verification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest poset enumerated.
    pub max_elements: usize,
    /// Largest graph enumerated by the characterization checks.
    pub max_vertices: usize,
    /// Largest graph enumerated by the additivity and rank-bound sweeps.
    pub max_census_vertices: usize,
    /// Node budget per equivalence search.
    pub budget: u64,
    /// Seed of the randomized suites.
    #[serde(default)]
    pub seed: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_elements: 6, max_vertices: 7, max_census_vertices: 8, budget: DEFAULT_BUDGET, seed: 0 }
    }
}

impl Bounds {
    fn validate(&self) -> Result<()> {
        use super::enumerate::{MAX_GRAPH_VERTICES, MAX_POSET_ELEMENTS};
        if self.max_elements > MAX_POSET_ELEMENTS {
            return Err(Error::TooLarge(format!("posets up to {} (limit {MAX_POSET_ELEMENTS})", self.max_elements)));
        }
        if self.max_vertices.max(self.max_census_vertices) > MAX_GRAPH_VERTICES {
            return Err(Error::TooLarge(format!("graphs up to {} (limit {MAX_GRAPH_VERTICES})", self.max_vertices)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub theorem_id: String,
    pub bounds: Bounds,
    pub instance_count: usize,
    /// Empty exactly when the check passes.
    pub counterexamples: Vec<String>,
    /// Equivalence searches that ran out of budget; never counted as passes.
    pub budget_exits: Vec<String>,
    pub notes: Vec<String>,
    /// Excluded from JSON so reports do not depend on the machine.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn summary(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{status} {}: {} instances, {} counterexamples, {} budget exits, {:.1}s\n",
            self.theorem_id,
            self.instance_count,
            self.counterexamples.len(),
            self.budget_exits.len(),
            self.wall_time.as_secs_f64()
        );
        for c in &self.counterexamples {
            s += &format!("  counterexample: {c}\n");
        }
        for b in &self.budget_exits {
            s += &format!("  budget exit: {b}\n");
        }
        for n in &self.notes {
            s += &format!("  note: {n}\n");
        }
        s
    }
}

/// Accumulated results of one check, merged in instance order.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub instances: usize,
    pub counterexamples: Vec<String>,
    pub budget_exits: Vec<String>,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn one() -> Self {
        Outcome { instances: 1, ..Default::default() }
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.counterexamples.push(msg.into());
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn merge(&mut self, other: Outcome) {
        self.instances += other.instances;
        self.counterexamples.extend(other.counterexamples);
        self.budget_exits.extend(other.budget_exits);
        self.notes.extend(other.notes);
    }

    /// Runs `f` on every item in parallel and merges in item order.
    pub fn each<T: Sync>(&mut self, items: &[T], f: impl Fn(&T) -> Result<Outcome> + Sync + Send) -> Result<()> {
        let parts: Vec<Outcome> = items.par_iter().map(f).collect::<Result<_>>()?;
        for p in parts {
            self.merge(p);
        }
        Ok(())
    }
}

pub const VERIFY_IDS: &[&str] = &[
    "torsion",
    "facets",
    "lemma3.3",
    "prop3.6",
    "prop4.4",
    "prop4.1",
    "prop4.2",
    "thm4.3",
    "thm4.6",
    "thm4.8",
    "prop5.1",
    "lemma5.2",
    "prop5.3",
    "prop5.3_4_stab_not_edge",
    "prop5.3_4_edge_not_stab",
    "sec5.3_witnesses",
    "snf_oracle",
    "equiv_soundness",
];

pub fn verify(theorem_id: &str, bounds: &Bounds) -> Result<VerifyReport> {
    bounds.validate()?;
    let start = Instant::now();
    let out = match theorem_id {
        "torsion" => suites::torsion(bounds)?,
        "facets" => suites::facets(bounds)?,
        "lemma3.3" => suites::column_relations(bounds)?,
        "prop3.6" => suites::block_additivity(bounds)?,
        "prop4.4" => suites::rank_bound(bounds)?,
        "prop4.1" => theorems::order_small_rank(bounds)?,
        "prop4.2" => theorems::order_vs_chain(bounds)?,
        "thm4.3" => theorems::stable_small_rank(bounds)?,
        "thm4.6" => theorems::bipartite_small_rank(bounds)?,
        "thm4.8" => theorems::nonbipartite_small_rank(bounds)?,
        "prop5.1" => theorems::rank_one_classes(bounds)?,
        "lemma5.2" => theorems::three_way_equivalences(bounds)?,
        "prop5.3" => theorems::rank_two_classes(bounds)?,
        "prop5.3_4_stab_not_edge" => theorems::stable_not_edge(bounds)?,
        "prop5.3_4_edge_not_stab" => theorems::edge_not_stable(bounds)?,
        "sec5.3_witnesses" => theorems::rank_three_witnesses(bounds)?,
        "snf_oracle" => properties::snf_oracle(bounds)?,
        "equiv_soundness" => properties::equiv_soundness(bounds)?,
        _ => {
            return Err(Error::BadInput(format!("unknown theorem id '{theorem_id}'; known: {}", VERIFY_IDS.join(", "))))
        }
    };
    Ok(VerifyReport {
        theorem_id: theorem_id.to_string(),
        bounds: *bounds,
        instance_count: out.instances,
        counterexamples: out.counterexamples,
        budget_exits: out.budget_exits,
        notes: out.notes,
        wall_time: start.elapsed(),
    })
}

// ---------------------------------------------------------------------------
// shared helpers

pub(crate) fn graphs_upto(min: usize, max: usize, filter: &GraphFilter) -> Result<Vec<SimpleGraph>> {
    let mut out = Vec::new();
    for n in min..=max {
        out.extend(enumerate_graphs(n, filter)?);
    }
    Ok(out)
}

pub(crate) fn posets_upto(max: usize) -> Result<Vec<Poset>> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.extend(enumerate_posets(n)?);
    }
    Ok(out)
}

pub(crate) fn graph_label(g: &SimpleGraph) -> String {
    let e: Vec<String> = g.edges().iter().map(|(a, b)| format!("{}{}", a + 1, b + 1)).collect();
    format!("graph[n={}; {}]", g.n(), e.join(","))
}

pub(crate) fn poset_label(p: &Poset) -> String {
    let c: Vec<String> = p.covers().iter().map(|(a, b)| format!("{}<{}", a + 1, b + 1)).collect();
    format!("poset[n={}; {}]", p.size(), c.join(","))
}

pub(crate) fn core(p: &LatticePolytope) -> LatticePolytope {
    p.pyramid_reduce().0
}

pub(crate) struct Member {
    pub label: String,
    pub poly: LatticePolytope,
    cheap: Fingerprint,
}

/// Labeled polytopes searched by fingerprint, then by the equivalence oracle.
pub(crate) struct Library {
    pub members: Vec<Member>,
}

pub(crate) enum Found {
    Member(String),
    None,
    /// No equivalent member found, but some searches ran out of budget.
    Budget(Vec<String>),
}

impl Library {
    pub fn new(items: Vec<(String, LatticePolytope)>) -> Result<Self> {
        let members = items
            .into_par_iter()
            .map(|(label, poly)| Ok(Member { cheap: cheap_fingerprint(&poly)?, label, poly }))
            .collect::<Result<_>>()?;
        Ok(Library { members })
    }

    pub fn find(&self, q: &LatticePolytope, budget: u64) -> Result<Found> {
        let cq = cheap_fingerprint(q)?;
        let mut exits = Vec::new();
        for m in self.members.iter().filter(|m| m.cheap == cq) {
            match unimodular_equivalent(q, &m.poly, budget) {
                Ok(Some(w)) => {
                    if !verify_witness(q, &m.poly, &w) {
                        return Err(Error::BadInput(format!("unsound witness against {}", m.label)));
                    }
                    return Ok(Found::Member(m.label.clone()));
                }
                Ok(None) => {}
                Err(Error::SearchBudgetExceeded(_)) => exits.push(m.label.clone()),
                Err(e) => return Err(e),
            }
        }
        Ok(if exits.is_empty() { Found::None } else { Found::Budget(exits) })
    }

    /// Records a failure unless `q` matches a member.
    pub fn expect_match(&self, q: &LatticePolytope, what: &str, budget: u64, out: &mut Outcome) -> Result<Option<String>> {
        match self.find(q, budget)? {
            Found::Member(l) => return Ok(Some(l)),
            Found::None => out.fail(format!("{what}: no equivalent family member")),
            Found::Budget(ls) => {
                out.budget_exits.push(format!("{what} vs {}", ls.join(", ")));
                out.fail(format!("{what}: undecided within budget"));
            }
        }
        Ok(None)
    }

    /// Records a failure if `q` matches any member, and budget exits.
    pub fn expect_no_match(&self, q: &LatticePolytope, what: &str, budget: u64, out: &mut Outcome) -> Result<()> {
        match self.find(q, budget)? {
            Found::Member(l) => out.fail(format!("{what} is equivalent to {l}")),
            Found::None => {}
            Found::Budget(ls) => {
                out.budget_exits.push(format!("{what} vs {}", ls.join(", ")));
                out.fail(format!("{what}: undecided within budget"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_ids_and_bounds_are_rejected() {
        assert!(matches!(verify("thm9.9", &Bounds::default()), Err(Error::BadInput(_))));
        let b = Bounds { max_vertices: 9, ..Default::default() };
        assert!(matches!(verify("thm4.6", &b), Err(Error::TooLarge(_))));
    }

    #[test]
    fn report_round_trips_without_wall_time() {
        let b = Bounds { max_elements: 3, max_vertices: 4, max_census_vertices: 4, ..Default::default() };
        let r = verify("thm4.6", &b).unwrap();
        assert!(r.passed(), "{}", r.summary());
        let back: VerifyReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, VerifyReport { wall_time: Duration::ZERO, ..r });
    }
}
