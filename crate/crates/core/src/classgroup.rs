//! Divisor class groups of toric rings of IDP lattice polytopes, via the
//! Smith form of the facet-by-lattice-point value matrix, and the
//! combinatorial rank formulas for Hibi, stable set and edge rings.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::lattice::{smith_normal_form, IntMatrix};
use crate::polytope::{IdpCertificate, LatticePolytope};
use crate::poset::Poset;

/// `Z^free_rank ⊕ ⊕ Z/d_i`, factors `> 1` in divisibility order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// Canonical form of `Z^free_rank ⊕ ⊕ Z/c_i` for arbitrary positive `c_i`.
    pub fn from_cyclic(free_rank: usize, cyclic: &[u64]) -> Self {
        let diag: Vec<Vec<i64>> = cyclic
            .iter()
            .enumerate()
            .map(|(i, &c)| (0..cyclic.len()).map(|j| if i == j { c as i64 } else { 0 }).collect())
            .collect();
        let snf = smith_normal_form(&IntMatrix::from_rows(&diag, cyclic.len()), false);
        let torsion = snf.invariant_factors.iter().filter_map(|f| f.to_u64()).filter(|&f| f > 1).collect();
        AbelianGroup { free_rank, torsion }
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut c = self.torsion.clone();
        c.extend(&other.torsion);
        Self::from_cyclic(self.free_rank + other.free_rank, &c)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Rows are facets in `FacetSystem` order, columns lattice points in sorted
/// order; entries are the normalized facet values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorMatrix {
    pub rows: Vec<Vec<i64>>,
}

impl DivisorMatrix {
    pub fn of(p: &LatticePolytope) -> Result<Self> {
        Ok(DivisorMatrix { rows: p.value_matrix()? })
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.rows.iter().map(|r| r[j]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
    pub psi_size: usize,
    pub matrix_rank: usize,
}

impl ClassGroup {
    pub fn group(&self) -> AbelianGroup {
        AbelianGroup { free_rank: self.free_rank, torsion: self.torsion.clone() }
    }
}

/// How the IDP hypothesis is established before computing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdpPolicy {
    /// Run the sum-closure check up to the bound (default `dim P`).
    Check(Option<usize>),
    /// Caller guarantees IDP, e.g. for families known to be normal.
    Assume,
}

fn ensure_idp(p: &LatticePolytope, policy: IdpPolicy) -> Result<()> {
    match policy {
        IdpPolicy::Assume => Ok(()),
        IdpPolicy::Check(bound) => match p.is_idp(bound) {
            IdpCertificate::Idp => Ok(()),
            IdpCertificate::NotIdp { witness, degree } => Err(Error::NotIdp { witness, degree }),
            IdpCertificate::Inconclusive { bound } => Err(Error::IdpInconclusive(bound)),
        },
    }
}

pub fn class_group(p: &LatticePolytope, policy: IdpPolicy) -> Result<ClassGroup> {
    ensure_idp(p, policy)?;
    // a point: the toric ring is a polynomial ring in one variable
    if p.dim() == 0 {
        return Ok(ClassGroup { free_rank: 0, torsion: Vec::new(), psi_size: 0, matrix_rank: 0 });
    }
    if !p.lattice_points_generate() {
        return Err(Error::LatticeDeficient);
    }
    let m = DivisorMatrix::of(p)?;
    let cols = p.lattice_points().reduced.len();
    let snf = smith_normal_form(&IntMatrix::from_rows(&m.rows, cols), false);
    let mut torsion = Vec::new();
    for f in &snf.invariant_factors {
        let f = f.to_u64().ok_or(Error::Overflow)?;
        if f > 1 {
            torsion.push(f);
        }
    }
    Ok(ClassGroup { free_rank: m.rows.len() - snf.rank, torsion, psi_size: m.rows.len(), matrix_rank: snf.rank })
}

/// `|facets| − (dim P + 1)`.
pub fn class_group_rank(p: &LatticePolytope, policy: IdpPolicy) -> Result<usize> {
    ensure_idp(p, policy)?;
    if p.dim() == 0 {
        return Ok(0);
    }
    let f = p.facets()?.len();
    Ok(f - (p.dim() + 1))
}

/// Source objects for the combinatorial rank formulas.
#[derive(Debug, Clone, Copy)]
pub enum Shortcut<'a> {
    Hibi(&'a Poset),
    Stable(&'a SimpleGraph),
    Edge(&'a SimpleGraph),
}

pub fn shortcut_rank(src: Shortcut<'_>) -> Result<usize> {
    match src {
        Shortcut::Hibi(p) => Ok(p.hibi_rank()),
        Shortcut::Stable(g) => {
            if !g.is_perfect()? {
                return Err(Error::NotPerfect);
            }
            Ok(g.maximal_cliques().len() - 1)
        }
        Shortcut::Edge(g) => {
            if !g.is_connected() {
                return Err(Error::Disconnected);
            }
            if !g.odd_cycle_condition() {
                return Err(Error::OddCycleConditionFails);
            }
            // a single edge: the edge ring is a polynomial ring
            if g.edge_count() == 1 {
                return Ok(0);
            }
            let st = g.vertex_status()?;
            let bip = g.is_bipartite();
            let vertex_facets = if bip { &st.ordinary } else { &st.regular }.iter().filter(|&&b| b).count();
            let psi = vertex_facets + g.special_sets()?.len();
            let dim_ring = g.n() - usize::from(bip);
            Ok(psi - dim_ring)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families as gf;
    use crate::poset::families as pf;

    fn cube(d: usize) -> LatticePolytope {
        SimpleGraph::empty(d).stable_set_polytope().unwrap()
    }

    #[test]
    fn cubes_and_simplices() {
        let c = class_group(&cube(3), IdpPolicy::Check(None)).unwrap();
        assert_eq!((c.free_rank, c.torsion.len(), c.psi_size), (2, 0, 6));
        assert_eq!(class_group_rank(&cube(2), IdpPolicy::Assume).unwrap(), 1);
        let edge = gf::path(2).stable_set_polytope().unwrap();
        assert_eq!(class_group_rank(&edge, IdpPolicy::Assume).unwrap(), 0);
    }

    #[test]
    fn witnesses_of_rank_three() {
        let stab = gf::gamma().stable_set_polytope().unwrap();
        assert_eq!(class_group(&stab, IdpPolicy::Assume).unwrap().group(), AbelianGroup::free(3));
        let k222 = gf::complete_multipartite(&[2, 2, 2]).unwrap().edge_polytope().unwrap();
        assert_eq!(class_group(&k222, IdpPolicy::Check(None)).unwrap().group(), AbelianGroup::free(3));
        let xp = pf::x_shape().disjoint_union(&Poset::antichain(1));
        assert_eq!(class_group_rank(&xp.order_polytope().unwrap(), IdpPolicy::Assume).unwrap(), 3);
    }

    #[test]
    fn torsion_shows_up() {
        // the Reeve-type simplex is not IDP; a lattice-deficient simplex is rejected
        let tri = LatticePolytope::from_points(&[vec![0, 0], vec![2, 0], vec![0, 2]], 2).unwrap();
        assert_eq!(class_group(&tri, IdpPolicy::Check(None)).unwrap().group(), AbelianGroup::from_cyclic(0, &[2]));
        let reeve = LatticePolytope::from_points(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]], 3).unwrap();
        assert!(matches!(class_group(&reeve, IdpPolicy::Check(None)), Err(Error::NotIdp { .. })));
        assert_eq!(class_group(&reeve, IdpPolicy::Assume).unwrap_err(), Error::LatticeDeficient);
    }

    #[test]
    fn shortcuts() {
        assert_eq!(shortcut_rank(Shortcut::Hibi(&pf::pi1(2, 2).unwrap())).unwrap(), 1);
        let g = pf::pi2(1, 1, 1, 2).unwrap().comparability_graph();
        assert_eq!(shortcut_rank(Shortcut::Stable(&g)).unwrap(), 2);
        assert_eq!(shortcut_rank(Shortcut::Edge(&gf::h_graph())).unwrap(), 2);
        assert_eq!(shortcut_rank(Shortcut::Edge(&gf::complete(3))).unwrap(), 0);
        assert_eq!(shortcut_rank(Shortcut::Stable(&gf::cycle(5).unwrap())).unwrap_err(), Error::NotPerfect);
        let two = gf::complete(3).disjoint_union(&gf::complete(3)).with_path(0, 3, 2).unwrap();
        assert_eq!(shortcut_rank(Shortcut::Edge(&two)).unwrap_err(), Error::OddCycleConditionFails);
    }

    #[test]
    fn group_canonical_form() {
        assert_eq!(AbelianGroup::from_cyclic(1, &[6, 4]), AbelianGroup { free_rank: 1, torsion: vec![2, 12] });
        assert_eq!(AbelianGroup::from_cyclic(0, &[1, 1]).to_string(), "0");
        assert_eq!(AbelianGroup::from_cyclic(2, &[3]).to_string(), "Z^2 + Z/3");
        let a = AbelianGroup::from_cyclic(0, &[2]);
        assert_eq!(a.direct_sum(&a), AbelianGroup { free_rank: 0, torsion: vec![2, 2] });
    }
}
