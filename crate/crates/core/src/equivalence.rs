//! Unimodular equivalence of lattice polytopes by matching their lattice
//! points through the facet value matrices.
//!
//! An affine unimodular map sends facets to facets and preserves normalized
//! facet values, so an equivalence induces a row and column permutation
//! carrying one value matrix onto the other. The search fixes an affinely
//! spanning set of lattice points of `P`, enumerates images compatible with
//! the value matrices, and accepts a candidate only after solving for the
//! affine map and checking it is integral, unimodular and onto `Q`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::LatticePolytope;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// `y = matrix · x + translation`. With `reduced` set the map acts on the
/// reduced lattice coordinates of the two polytopes; otherwise on ambient
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivWitness {
    pub matrix: Vec<Vec<i64>>,
    pub translation: Vec<i64>,
    pub reduced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub vertices: usize,
    pub lattice_points: usize,
    pub facets: usize,
    /// Sorted counts of lattice points on each facet.
    pub points_per_facet: Vec<usize>,
    /// Sorted counts of facets through each vertex.
    pub facets_per_vertex: Vec<usize>,
    pub normalized_volume: u64,
}

/// Everything but the volume, which costs a triangulation.
pub fn cheap_fingerprint(p: &LatticePolytope) -> Result<Fingerprint> {
    let lp = p.lattice_points().reduced.len();
    if p.dim() == 0 {
        return Ok(Fingerprint {
            dim: 0,
            vertices: 1,
            lattice_points: lp,
            facets: 0,
            points_per_facet: Vec::new(),
            facets_per_vertex: vec![0],
            normalized_volume: 1,
        });
    }
    let m = p.value_matrix()?;
    let mut ppf: Vec<usize> = m.iter().map(|row| row.iter().filter(|&&x| x == 0).count()).collect();
    ppf.sort();
    let mut fpv: Vec<usize> = p.vertex_facet_incidence().iter().map(|f| f.len()).collect();
    fpv.sort();
    Ok(Fingerprint {
        dim: p.dim(),
        vertices: p.vertex_count(),
        lattice_points: lp,
        facets: m.len(),
        points_per_facet: ppf,
        facets_per_vertex: fpv,
        normalized_volume: 0,
    })
}

pub fn fingerprint(p: &LatticePolytope) -> Result<Fingerprint> {
    let mut f = cheap_fingerprint(p)?;
    f.normalized_volume = p.normalized_volume()?;
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
}

/// `Ok(None)` means proven inequivalent.
pub fn unimodular_equivalent(p: &LatticePolytope, q: &LatticePolytope, budget: u64) -> Result<Option<EquivWitness>> {
    Ok(equivalence_search(p, q, budget)?.0)
}

pub fn equivalence_search(
    p: &LatticePolytope,
    q: &LatticePolytope,
    budget: u64,
) -> Result<(Option<EquivWitness>, SearchStats)> {
    let none = |nodes| Ok((None, SearchStats { nodes }));
    let (fp, fq) = (cheap_fingerprint(p)?, cheap_fingerprint(q)?);
    if fp != fq {
        return none(0);
    }
    let k = p.dim();
    let pp = &p.lattice_points().reduced;
    let qp = &q.lattice_points().reduced;
    if k == 0 {
        return Ok((Some(finish(p, q, Vec::new(), Vec::new())), SearchStats { nodes: 0 }));
    }
    if p.normalized_volume()? != q.normalized_volume()? {
        return none(0);
    }
    let (mp, mq) = (p.value_matrix()?, q.value_matrix()?);
    let col = |m: &Vec<Vec<i64>>, j: usize| -> Vec<i64> {
        let mut c: Vec<i64> = m.iter().map(|r| r[j]).collect();
        c.sort();
        c
    };
    let sig_p: Vec<Vec<i64>> = (0..pp.len()).map(|j| col(&mp, j)).collect();
    let sig_q: Vec<Vec<i64>> = (0..qp.len()).map(|j| col(&mq, j)).collect();
    let mut count_p: HashMap<&Vec<i64>, usize> = HashMap::new();
    for s in &sig_p {
        *count_p.entry(s).or_default() += 1;
    }
    let mut count_q: HashMap<&Vec<i64>, usize> = HashMap::new();
    for s in &sig_q {
        *count_q.entry(s).or_default() += 1;
    }
    if count_p != count_q {
        return none(0);
    }

    // basis points: rarest signature first, then greedily affinely independent
    let mut order: Vec<usize> = (0..pp.len()).collect();
    order.sort_by_key(|&j| (count_p[&sig_p[j]], j));
    let basis = affine_basis(pp, &order, k);
    debug_assert_eq!(basis.len(), k + 1);

    let mut st = Search {
        mp: &mp,
        mq: &mq,
        sig_p: &sig_p,
        sig_q: &sig_q,
        pp,
        qp,
        q_set: qp.iter().collect(),
        basis: &basis,
        image: Vec::with_capacity(k + 1),
        used: vec![false; qp.len()],
        nodes: 0,
        budget,
        found: None,
    };
    st.dfs()?;
    let nodes = st.nodes;
    match st.found {
        Some((a, t)) => Ok((Some(finish(p, q, a, t)), SearchStats { nodes })),
        None => none(nodes),
    }
}

fn affine_basis(pts: &[Vec<i64>], order: &[usize], k: usize) -> Vec<usize> {
    let mut chosen = vec![order[0]];
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for &j in &order[1..] {
        if chosen.len() == k + 1 {
            break;
        }
        let mut v: Vec<BigRational> =
            pts[j].iter().zip(&pts[order[0]]).map(|(a, b)| BigRational::from_integer(BigInt::from(a - b))).collect();
        for r in &rows {
            let p = r.iter().position(|x| !x.is_zero()).unwrap();
            if !v[p].is_zero() {
                let f = &v[p] / &r[p];
                for (x, y) in v.iter_mut().zip(r) {
                    *x -= &f * y;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            rows.push(v);
            chosen.push(j);
        }
    }
    chosen
}

struct Search<'a> {
    mp: &'a [Vec<i64>],
    mq: &'a [Vec<i64>],
    sig_p: &'a [Vec<i64>],
    sig_q: &'a [Vec<i64>],
    pp: &'a [Vec<i64>],
    qp: &'a [Vec<i64>],
    q_set: HashSet<&'a Vec<i64>>,
    basis: &'a [usize],
    image: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
    found: Option<(Vec<Vec<i64>>, Vec<i64>)>,
}

impl Search<'_> {
    fn joint(m: &[Vec<i64>], a: usize, b: usize) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = m.iter().map(|r| (r[a], r[b])).collect();
        v.sort();
        v
    }

    fn dfs(&mut self) -> Result<()> {
        let depth = self.image.len();
        if depth == self.basis.len() {
            if let Some(w) = self.solve() {
                self.found = Some(w);
            }
            return Ok(());
        }
        let src = self.basis[depth];
        for c in 0..self.qp.len() {
            if self.used[c] || self.sig_q[c] != self.sig_p[src] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::SearchBudgetExceeded(self.budget));
            }
            let consistent = (0..depth).all(|i| {
                Self::joint(self.mp, self.basis[i], src) == Self::joint(self.mq, self.image[i], c)
            });
            if !consistent {
                continue;
            }
            self.used[c] = true;
            self.image.push(c);
            self.dfs()?;
            self.image.pop();
            self.used[c] = false;
            if self.found.is_some() {
                return Ok(());
            }
        }
        Ok(())
    }

    /// Affine map sending the basis to its images, if it is a lattice
    /// automorphism carrying all points of `P` onto points of `Q`.
    fn solve(&self) -> Option<(Vec<Vec<i64>>, Vec<i64>)> {
        let k = self.basis.len() - 1;
        let b0 = &self.pp[self.basis[0]];
        let c0 = &self.qp[self.image[0]];
        let diff = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
        let bcols: Vec<Vec<i64>> = self.basis[1..].iter().map(|&j| diff(&self.pp[j], b0)).collect();
        let ccols: Vec<Vec<i64>> = self.image[1..].iter().map(|&j| diff(&self.qp[j], c0)).collect();
        // A · B = C with B, C having the difference vectors as columns; solve Bᵀ Aᵀ = Cᵀ
        let bt = rational_inverse(&bcols)?;
        let mut a = vec![vec![0i64; k]; k];
        for r in 0..k {
            for s in 0..k {
                // A[r][s] = Σ_i C[r][i] · (B⁻¹)[i][s]
                let mut acc = BigRational::zero();
                for i in 0..k {
                    acc += BigRational::from_integer(BigInt::from(ccols[i][r])) * &bt[i][s];
                }
                if !acc.is_integer() {
                    return None;
                }
                a[r][s] = acc.to_integer().to_i64()?;
            }
        }
        let det = crate::lattice::IntMatrix::from_rows(&a, k).determinant();
        if !det.abs().is_one() {
            return None;
        }
        let t: Vec<i64> = (0..k).map(|r| c0[r] - (0..k).map(|s| a[r][s] * b0[s]).sum::<i64>()).collect();
        let apply = |x: &[i64]| -> Vec<i64> { (0..k).map(|r| (0..k).map(|s| a[r][s] * x[s]).sum::<i64>() + t[r]).collect() };
        // injective and equal cardinality, so containment is bijection
        if self.pp.iter().all(|x| self.q_set.contains(&apply(x))) {
            Some((a, t))
        } else {
            None
        }
    }
}

/// Inverse of the matrix whose columns are `cols`, as rows of rationals
/// indexed `[i][s]` with `Σ_s inv[i][s] · cols[j][s] = δ_ij`.
fn rational_inverse(cols: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let k = cols.len();
    // m = B with B[s][j] = cols[j][s]; augment with identity and reduce
    let mut m: Vec<Vec<BigRational>> = (0..k)
        .map(|s| {
            let mut row: Vec<BigRational> = (0..k).map(|j| BigRational::from_integer(BigInt::from(cols[j][s]))).collect();
            row.extend((0..k).map(|j| if j == s { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..k {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * k {
                    let t = &m[c][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[k..].to_vec()).collect())
}

/// Converts a reduced-coordinate map to ambient coordinates when both
/// polytopes are full-dimensional in the same ambient space.
fn finish(p: &LatticePolytope, q: &LatticePolytope, a: Vec<Vec<i64>>, t: Vec<i64>) -> EquivWitness {
    let w = EquivWitness { matrix: a, translation: t, reduced: true };
    let d = p.ambient_dim();
    if p.dim() == d && q.dim() == d && q.ambient_dim() == d {
        // full rank reduced lattices are Z^d with identity basis, shifted by the origin
        let (op, oq) = (&p.reduction().origin, &q.reduction().origin);
        debug_assert!(p.reduction().basis.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == i64::from(i == j))));
        let t: Vec<i64> =
            (0..d).map(|r| w.translation[r] + oq[r] - (0..d).map(|s| w.matrix[r][s] * op[s]).sum::<i64>()).collect();
        let out = EquivWitness { matrix: w.matrix, translation: t, reduced: false };
        debug_assert!(verify_witness(p, q, &out));
        return out;
    }
    debug_assert!(verify_witness(p, q, &w));
    w
}

/// Applies the witness to the lattice points of `P` and compares with `Q`.
pub fn verify_witness(p: &LatticePolytope, q: &LatticePolytope, w: &EquivWitness) -> bool {
    let (src, dst) = if w.reduced {
        (&p.lattice_points().reduced, &q.lattice_points().reduced)
    } else {
        (&p.lattice_points().ambient, &q.lattice_points().ambient)
    };
    let k = w.matrix.len();
    if src.len() != dst.len() || src.first().is_some_and(|x| x.len() != k) || dst.first().is_some_and(|x| x.len() != k) {
        return false;
    }
    let det = crate::lattice::IntMatrix::from_rows(&w.matrix, k).determinant();
    if !det.abs().is_one() {
        return false;
    }
    let mut img: Vec<Vec<i64>> = src
        .iter()
        .map(|x| (0..k).map(|r| (0..k).map(|s| w.matrix[r][s] * x[s]).sum::<i64>() + w.translation[r]).collect())
        .collect();
    img.sort();
    let mut want = dst.clone();
    want.sort();
    img == want
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families as gf;
    use crate::poset::families as pf;

    fn square() -> LatticePolytope {
        LatticePolytope::from_points(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]], 2).unwrap()
    }

    #[test]
    fn fingerprints() {
        let f = fingerprint(&square()).unwrap();
        assert_eq!((f.dim, f.vertices, f.lattice_points, f.facets, f.normalized_volume), (2, 4, 4, 4, 2));
        let tri = LatticePolytope::from_points(&[vec![0, 0], vec![1, 0], vec![0, 1]], 2).unwrap();
        assert_eq!(fingerprint(&tri).unwrap().vertices, 3);
        let a = gf::complete_bipartite(2, 2).unwrap().edge_polytope().unwrap();
        let b = pf::pi1(1, 1).unwrap().order_polytope().unwrap();
        assert_eq!(fingerprint(&a).unwrap(), fingerprint(&b).unwrap());
        let cube = crate::graph::SimpleGraph::empty(3).stable_set_polytope().unwrap();
        assert_eq!(cube.normalized_volume().unwrap(), 6);
    }

    #[test]
    fn sheared_square() {
        let s = square();
        let t = LatticePolytope::from_points(&[vec![5, 1], vec![6, 1], vec![7, 2], vec![8, 2]], 2).unwrap();
        let w = unimodular_equivalent(&s, &t, DEFAULT_BUDGET).unwrap().unwrap();
        assert!(!w.reduced);
        assert!(verify_witness(&s, &t, &w));
        let par = LatticePolytope::from_points(&[vec![0, 0], vec![1, 0], vec![1, 2], vec![2, 2]], 2).unwrap();
        assert_eq!(unimodular_equivalent(&s, &par, DEFAULT_BUDGET).unwrap(), None);
    }

    #[test]
    fn edge_polytope_vs_order_polytope() {
        let a = gf::complete_bipartite(2, 2).unwrap().edge_polytope().unwrap();
        let b = pf::pi1(1, 1).unwrap().order_polytope().unwrap();
        let w = unimodular_equivalent(&a, &b, DEFAULT_BUDGET).unwrap().unwrap();
        assert!(w.reduced && verify_witness(&a, &b, &w));
    }

    #[test]
    fn budget_is_a_distinct_outcome() {
        let c = crate::graph::SimpleGraph::empty(4).stable_set_polytope().unwrap();
        assert_eq!(unimodular_equivalent(&c, &c, 1).unwrap_err(), Error::SearchBudgetExceeded(1));
    }
}
