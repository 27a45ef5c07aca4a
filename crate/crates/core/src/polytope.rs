//! Lattice polytopes: exact hull by double description on the homogenized
//! cone, facet forms, lattice points, IDP certificates and lattice pyramids.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{gcd_slice, saturate, saturated_affine_span, AffineLatticeBasis, IntMatrix};

/// Affine form `α ↦ (⟨normal, α⟩ + offset) / divisor` on reduced coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FacetForm {
    pub normal: Vec<i64>,
    pub offset: i64,
    pub divisor: i64,
}

impl FacetForm {
    pub fn eval(&self, reduced: &[i64]) -> i64 {
        let raw: i64 = self.normal.iter().zip(reduced).map(|(a, b)| a * b).sum::<i64>() + self.offset;
        debug_assert_eq!(raw % self.divisor, 0);
        raw / self.divisor
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetSystem {
    /// Same order as the facet incidences of the polytope.
    pub forms: Vec<FacetForm>,
}

impl FacetSystem {
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdpCertificate {
    Idp,
    /// Ambient coordinates of a point of `degree·P` with no decomposition.
    NotIdp { witness: Vec<i64>, degree: usize },
    Inconclusive { bound: usize },
}

#[derive(Debug, Clone)]
pub struct LatticePoints {
    /// Sorted lexicographically.
    pub ambient: Vec<Vec<i64>>,
    /// Same order as `ambient`.
    pub reduced: Vec<Vec<i64>>,
}

/// Interchange form: the polytope is the convex hull of `generators`. The
/// remaining fields are derived, written on output and ignored on input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeDoc {
    pub ambient_dim: usize,
    pub generators: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<i64>>>,
    /// Reduced coordinates are taken against `lattice_basis`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_basis: Option<LatticeBasisDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<FacetForm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_points: Option<Vec<Vec<i64>>>,
}

/// Ambient point `origin + Σ c_i · basis_i` has reduced coordinates `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBasisDoc {
    pub origin: Vec<i64>,
    pub basis: Vec<Vec<i64>>,
}

#[derive(Debug, Clone)]
pub struct LatticePolytope {
    ambient_dim: usize,
    generators: Vec<Vec<i64>>,
    reduction: AffineLatticeBasis,
    coords: Vec<Vec<i64>>,
    vertices: Vec<usize>,
    /// Primitive functionals on `(reduced, 1)`, sorted; one per facet.
    rays: Vec<Vec<i64>>,
    /// Generators on which the homogenized cone was seeded; affinely independent.
    seed: Vec<usize>,
    facets: OnceLock<FacetSystem>,
    points: OnceLock<LatticePoints>,
}

impl LatticePolytope {
    pub fn from_points(points: &[Vec<i64>], ambient_dim: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::BadInput("polytope needs at least one point".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != ambient_dim) {
            return Err(Error::BadInput(format!("point {p:?} is not of length {ambient_dim}")));
        }
        let mut generators = points.to_vec();
        generators.sort();
        generators.dedup();
        let reduction = saturated_affine_span(&generators)?;
        let coords: Vec<Vec<i64>> = generators
            .iter()
            .map(|g| reduction.coordinates(g).expect("generator outside its own affine lattice"))
            .collect();
        let k = reduction.rank();
        let (rays, seed) = if k == 0 {
            (Vec::new(), vec![0])
        } else {
            let homog: Vec<Vec<i64>> = coords.iter().map(|c| homogenize(c, 1)).collect();
            cone_facets(&homog)?
        };
        let vertices = if k == 0 {
            vec![0]
        } else {
            let tight: Vec<FixedBitSet> = coords
                .iter()
                .map(|c| {
                    let mut s = FixedBitSet::with_capacity(rays.len());
                    for (f, r) in rays.iter().enumerate() {
                        if pair(r, c, 1) == 0 {
                            s.insert(f);
                        }
                    }
                    s
                })
                .collect();
            // generators are distinct, so p is a vertex iff no other generator's
            // tight set contains p's
            (0..generators.len())
                .filter(|&i| (0..generators.len()).all(|j| j == i || !tight[i].is_subset(&tight[j])))
                .collect()
        };
        Ok(LatticePolytope {
            ambient_dim,
            generators,
            reduction,
            coords,
            vertices,
            rays,
            seed,
            facets: OnceLock::new(),
            points: OnceLock::new(),
        })
    }

    pub fn from_doc(doc: &PolytopeDoc) -> Result<Self> {
        Self::from_points(&doc.generators, doc.ambient_dim)
    }

    /// Vertices as generators; `from_doc` rebuilds the same polytope.
    pub fn to_doc(&self) -> PolytopeDoc {
        PolytopeDoc {
            ambient_dim: self.ambient_dim,
            generators: self.vertices(),
            vertices: None,
            lattice_basis: None,
            facets: None,
            lattice_points: None,
        }
    }

    /// `to_doc` plus vertices, facets and lattice points.
    pub fn to_full_doc(&self) -> PolytopeDoc {
        let facets = if self.dim() == 0 { Vec::new() } else { self.facets().map(|f| f.forms.clone()).unwrap_or_default() };
        PolytopeDoc {
            vertices: Some(self.vertices()),
            lattice_basis: Some(LatticeBasisDoc {
                origin: self.reduction.origin.clone(),
                basis: self.reduction.basis.clone(),
            }),
            facets: Some(facets),
            lattice_points: Some(self.lattice_points().ambient.clone()),
            ..self.to_doc()
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.reduction.rank()
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn reduction(&self) -> &AffineLatticeBasis {
        &self.reduction
    }

    /// Vertices in ambient coordinates, sorted.
    pub fn vertices(&self) -> Vec<Vec<i64>> {
        self.vertices.iter().map(|&i| self.generators[i].clone()).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Reduced coordinates of the vertices, in the order of [`Self::vertices`].
    pub fn reduced_vertices(&self) -> Vec<Vec<i64>> {
        self.vertices.iter().map(|&i| self.coords[i].clone()).collect()
    }

    pub fn facet_count(&self) -> usize {
        self.rays.len()
    }

    /// For each facet, the indices of the vertices on it.
    pub fn vertex_facet_incidence(&self) -> Vec<Vec<usize>> {
        self.rays
            .iter()
            .map(|r| {
                self.vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, &g)| pair(r, &self.coords[g], 1) == 0)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect()
    }

    /// Reduced coordinates of an ambient point lying in the affine lattice.
    pub fn reduce(&self, p: &[i64]) -> Option<Vec<i64>> {
        self.reduction.coordinates(p)
    }

    pub fn lattice_points(&self) -> &LatticePoints {
        self.points.get_or_init(|| {
            let reduced = self.scan(1);
            let mut pts: Vec<(Vec<i64>, Vec<i64>)> =
                reduced.into_iter().map(|c| (self.reduction.point(&c), c)).collect();
            pts.sort();
            let (ambient, reduced) = pts.into_iter().unzip();
            LatticePoints { ambient, reduced }
        })
    }

    /// Lattice points of `n·P` in reduced coordinates, by bounding-box scan.
    fn scan(&self, n: i64) -> Vec<Vec<i64>> {
        let k = self.dim();
        if k == 0 {
            return vec![Vec::new()];
        }
        let (lo, hi): (Vec<i64>, Vec<i64>) = (0..k)
            .map(|j| {
                let it = self.vertices.iter().map(|&v| self.coords[v][j]);
                (it.clone().min().unwrap() * n, it.max().unwrap() * n)
            })
            .unzip();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self.rays.iter().all(|r| pair(r, &cur, n) >= 0) {
                out.push(cur.clone());
            }
            let mut j = k;
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                if cur[j] < hi[j] {
                    cur[j] += 1;
                    break;
                }
                cur[j] = lo[j];
            }
        }
    }

    /// Whether the affine hull avoids the origin; facet divisors are then
    /// measured against the linear span instead of the homogenized cone.
    pub fn linear_picture(&self) -> bool {
        self.reduction.coordinates(&vec![0; self.ambient_dim]).is_none()
    }

    pub fn facets(&self) -> Result<&FacetSystem> {
        if self.dim() == 0 {
            return Err(Error::DegeneratePolytope);
        }
        Ok(self.facets.get_or_init(|| self.build_facets()))
    }

    fn build_facets(&self) -> FacetSystem {
        let pts = &self.lattice_points().reduced;
        let mut forms: Vec<FacetForm> = self
            .rays
            .iter()
            .map(|r| {
                let k = r.len() - 1;
                let vals: Vec<i64> = pts.iter().map(|p| pair(r, p, 1)).collect();
                let g0 = gcd_slice(&vals).max(1);
                FacetForm { normal: r[..k].to_vec(), offset: r[k], divisor: g0 }
            })
            .collect();
        if self.linear_picture() {
            let lin = self.linear_denominators(&forms);
            for (f, g) in forms.iter_mut().zip(lin) {
                // (normal, offset) becomes g * (ray / g0), still integral
                for x in f.normal.iter_mut() {
                    *x = *x * g / f.divisor;
                }
                f.offset = f.offset * g / f.divisor;
                f.divisor = g;
            }
        }
        FacetSystem { forms }
    }

    /// For each form (normalized by its divisor), the least positive integer
    /// making its linear extension integral on `Z^d ∩ lin(P)`.
    fn linear_denominators(&self, forms: &[FacetForm]) -> Vec<i64> {
        let q: Vec<Vec<i64>> = self.seed.iter().map(|&i| self.generators[i].clone()).collect();
        let n_basis = saturate(&IntMatrix::from_rows(&q, self.ambient_dim));
        let mus: Vec<Vec<BigRational>> = (0..n_basis.rows())
            .map(|i| {
                let b: Vec<BigInt> = n_basis.row(i).to_vec();
                solve_combination(&q, &b).expect("lattice vector outside the linear span")
            })
            .collect();
        forms
            .iter()
            .map(|f| {
                let vq: Vec<BigRational> = self
                    .seed
                    .iter()
                    .map(|&i| {
                        let raw = f.normal.iter().zip(&self.coords[i]).map(|(a, b)| a * b).sum::<i64>() + f.offset;
                        BigRational::new(BigInt::from(raw), BigInt::from(f.divisor))
                    })
                    .collect();
                let mut den = BigInt::one();
                for mu in &mus {
                    let v: BigRational = mu.iter().zip(&vq).map(|(a, b)| a * b).sum();
                    den = den.lcm(v.denom());
                }
                den.to_i64().expect("divisor overflow")
            })
            .collect()
    }

    /// Normalized facet values: rows are facets, columns lattice points.
    pub fn value_matrix(&self) -> Result<Vec<Vec<i64>>> {
        let fs = self.facets()?;
        let pts = &self.lattice_points().reduced;
        Ok(fs.forms.iter().map(|f| pts.iter().map(|p| f.eval(p)).collect()).collect())
    }

    /// Whether the lattice points affinely generate the reduced lattice.
    pub fn lattice_points_generate(&self) -> bool {
        let pts = &self.lattice_points().reduced;
        let k = self.dim();
        if k == 0 {
            return true;
        }
        let diffs: Vec<Vec<i64>> =
            pts[1..].iter().map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect()).collect();
        let b = crate::lattice::row_lattice_basis(&IntMatrix::from_rows(&diffs, k));
        b.rows() == k && b.determinant().magnitude().is_one()
    }

    pub fn is_idp(&self, degree_bound: Option<usize>) -> IdpCertificate {
        let k = self.dim();
        let bound = degree_bound.unwrap_or(k);
        let base = self.lattice_points().reduced.clone();
        let mut prev: HashSet<Vec<i64>> = base.iter().cloned().collect();
        for n in 2..=bound {
            let mut sums: HashSet<Vec<i64>> = HashSet::with_capacity(prev.len() * 2);
            for p in &prev {
                for q in &base {
                    sums.insert(p.iter().zip(q).map(|(a, b)| a + b).collect());
                }
            }
            let mut missing: Vec<Vec<i64>> =
                self.scan(n as i64).into_iter().filter(|x| !sums.contains(x)).map(|x| self.scaled_point(&x, n)).collect();
            if !missing.is_empty() {
                missing.sort();
                return IdpCertificate::NotIdp { witness: missing.swap_remove(0), degree: n };
            }
            prev = sums;
        }
        // lattice points of a fundamental parallelepiped of any triangulation
        // have degree at most dim P
        if bound >= k {
            IdpCertificate::Idp
        } else {
            IdpCertificate::Inconclusive { bound }
        }
    }

    fn scaled_point(&self, reduced: &[i64], n: usize) -> Vec<i64> {
        let mut p: Vec<i64> = self.reduction.origin.iter().map(|x| x * n as i64).collect();
        for (c, row) in reduced.iter().zip(&self.reduction.basis) {
            for (x, b) in p.iter_mut().zip(row) {
                *x += c * b;
            }
        }
        p
    }

    pub fn pyramid(&self) -> LatticePolytope {
        let d = self.ambient_dim;
        let mut pts: Vec<Vec<i64>> = self.generators.iter().map(|g| homogenize(g, 0)).collect();
        let mut apex = vec![0; d + 1];
        apex[d] = 1;
        pts.push(apex);
        LatticePolytope::from_points(&pts, d + 1).expect("pyramid of a valid polytope")
    }

    /// Strips lattice-pyramid apexes until none remains.
    pub fn pyramid_reduce(&self) -> (LatticePolytope, usize) {
        let mut cur = self.clone();
        let mut count = 0;
        while let Some(base) = cur.pyramid_base() {
            cur = base;
            count += 1;
        }
        (cur, count)
    }

    /// The base facet if `P` is a lattice pyramid; the apex is the
    /// lexicographically first vertex that qualifies.
    pub fn pyramid_base(&self) -> Option<LatticePolytope> {
        if self.dim() == 0 {
            return None;
        }
        for &v in &self.vertices {
            for r in &self.rays {
                if pair(r, &self.coords[v], 1) != 1 {
                    continue;
                }
                if self.vertices.iter().all(|&w| w == v || pair(r, &self.coords[w], 1) == 0) {
                    let rest: Vec<Vec<i64>> =
                        self.vertices.iter().filter(|&&w| w != v).map(|&w| self.generators[w].clone()).collect();
                    return Some(LatticePolytope::from_points(&rest, self.ambient_dim).expect("facet of a polytope"));
                }
            }
        }
        None
    }

    /// Primitive facet functionals on `(reduced, 1)`; their values are lattice distances.
    pub fn facet_functionals(&self) -> &[Vec<i64>] {
        &self.rays
    }

    /// Reduced coordinates of the generators, in generator order.
    pub fn generator_coords(&self) -> &[Vec<i64>] {
        &self.coords
    }

    /// Normalized volume (`dim! ·` Euclidean volume in the reduced lattice),
    /// by pulling the first vertex. Faces shared between pulls are memoized
    /// by vertex set.
    pub fn normalized_volume(&self) -> Result<u64> {
        let verts: Vec<Vec<i64>> = self.vertices.iter().map(|&v| self.coords[v].clone()).collect();
        let mut memo = HashMap::new();
        pulling_volume(verts, self.dim(), &mut memo)
    }

    /// Same lattice point set, compared in ambient coordinates.
    pub fn same_points(&self, other: &LatticePolytope) -> bool {
        self.ambient_dim == other.ambient_dim && self.lattice_points().ambient == other.lattice_points().ambient
    }
}

/// `verts` are in a common coordinate system of dimension `ambient`.
fn pulling_volume(mut verts: Vec<Vec<i64>>, ambient: usize, memo: &mut HashMap<Vec<Vec<i64>>, u64>) -> Result<u64> {
    verts.sort();
    if let Some(&v) = memo.get(&verts) {
        return Ok(v);
    }
    let p = LatticePolytope::from_points(&verts, ambient)?;
    let k = p.dim();
    let own: Vec<&Vec<i64>> = p.vertices.iter().map(|&v| &p.coords[v]).collect();
    let vol = if k == 0 {
        1
    } else if own.len() == k + 1 {
        let rows: Vec<Vec<i64>> =
            own[1..].iter().map(|v| v.iter().zip(own[0]).map(|(a, b)| a - b).collect()).collect();
        IntMatrix::from_rows(&rows, k).determinant().magnitude().to_u64().ok_or(Error::Overflow)?
    } else {
        let apex = own[0];
        let mut total = 0u64;
        for r in &p.rays {
            let h = pair(r, apex, 1);
            if h == 0 {
                continue;
            }
            let face: Vec<Vec<i64>> =
                p.vertices.iter().filter(|&&v| pair(r, &p.coords[v], 1) == 0).map(|&v| p.generators[v].clone()).collect();
            let sub = pulling_volume(face, ambient, memo)?;
            total = (h as u64).checked_mul(sub).and_then(|x| x.checked_add(total)).ok_or(Error::Overflow)?;
        }
        total
    };
    memo.insert(verts, vol);
    Ok(vol)
}

fn homogenize(c: &[i64], last: i64) -> Vec<i64> {
    let mut v = c.to_vec();
    v.push(last);
    v
}

/// `⟨r, (c, h)⟩` for a functional on homogenized coordinates.
fn pair(r: &[i64], c: &[i64], h: i64) -> i64 {
    let k = c.len();
    r[..k].iter().zip(c).map(|(a, b)| a * b).sum::<i64>() + r[k] * h
}

fn dot128(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

fn primitive(v: Vec<i128>) -> Result<Vec<i64>> {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    let g = if g == 0 { 1 } else { g };
    v.into_iter().map(|x| i64::try_from(x / g).map_err(|_| Error::Overflow)).collect()
}

/// Indices of a maximal linearly independent subset, chosen greedily in order.
fn independent_rows(rows: &[Vec<i64>]) -> Vec<usize> {
    let mut echelon: Vec<(usize, Vec<i128>)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, r) in rows.iter().enumerate() {
        let mut v: Vec<i128> = r.iter().map(|&x| x as i128).collect();
        for (p, e) in &echelon {
            if v[*p] != 0 {
                let (a, b) = (e[*p], v[*p]);
                for (x, y) in v.iter_mut().zip(e) {
                    *x = a * *x - b * y;
                }
                let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
                if g > 1 {
                    v.iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        if let Some(p) = v.iter().position(|&x| x != 0) {
            echelon.push((p, v));
            chosen.push(idx);
        }
    }
    chosen
}

/// Solves `Σ μ_i q_i = b` over the rationals.
fn solve_combination(q: &[Vec<i64>], b: &[BigInt]) -> Option<Vec<BigRational>> {
    let m = q.len();
    let d = b.len();
    // augmented system: d equations, m unknowns
    let mut a: Vec<Vec<BigRational>> = (0..d)
        .map(|j| {
            let mut row: Vec<BigRational> = q.iter().map(|qi| BigRational::from_integer(BigInt::from(qi[j]))).collect();
            row.push(BigRational::from_integer(b[j].clone()));
            row
        })
        .collect();
    let mut piv_cols = Vec::new();
    let mut r = 0;
    for c in 0..m {
        let Some(p) = (r..d).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..d {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=m {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        piv_cols.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[m].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); m];
    for (i, &c) in piv_cols.iter().enumerate() {
        x[c] = a[i][m].clone();
    }
    Some(x)
}

/// Facets of the pointed full-dimensional cone spanned by `gens`, as the
/// extreme rays of the dual cone, via double description. Also returns the
/// generators used to seed the computation.
fn cone_facets(gens: &[Vec<i64>]) -> Result<(Vec<Vec<i64>>, Vec<usize>)> {
    let r = gens[0].len();
    let seed = independent_rows(gens);
    debug_assert_eq!(seed.len(), r, "homogenized generators must span");
    let n = gens.len();

    let q: Vec<Vec<i64>> = seed.iter().map(|&i| gens[i].clone()).collect();
    // seed rays: columns of the inverse, i.e. y_j with ⟨q_i, y_j⟩ = δ_ij
    let qt: Vec<Vec<i64>> = (0..r).map(|j| q.iter().map(|row| row[j]).collect()).collect();
    let mut rays: Vec<Vec<i64>> = Vec::with_capacity(r);
    let mut zeros: Vec<FixedBitSet> = Vec::with_capacity(r);
    for j in 0..r {
        let mut e = vec![BigInt::zero(); r];
        e[j] = BigInt::one();
        let y = solve_combination(&qt, &e).expect("seed is invertible");
        let den = y.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ints: Vec<i128> = y
            .iter()
            .map(|x| (x.numer() * (&den / x.denom())).to_i128().ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        rays.push(primitive(ints)?);
        let mut z = FixedBitSet::with_capacity(n);
        for (i, &s) in seed.iter().enumerate() {
            if i != j {
                z.insert(s);
            }
        }
        zeros.push(z);
    }

    let in_seed: HashSet<usize> = seed.iter().copied().collect();
    for (idx, a) in gens.iter().enumerate() {
        if in_seed.contains(&idx) {
            continue;
        }
        let s: Vec<i128> = rays.iter().map(|y| dot128(a, y)).collect();
        if s.iter().all(|&x| x >= 0) {
            for (z, &v) in zeros.iter_mut().zip(&s) {
                if v == 0 {
                    z.insert(idx);
                }
            }
            continue;
        }
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| s[i] > 0).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| s[i] < 0).collect();
        let mut new_rays = Vec::new();
        let mut new_zeros = Vec::new();
        for &p in &plus {
            for &m in &minus {
                let mut common = zeros[p].clone();
                common.intersect_with(&zeros[m]);
                if common.count_ones(..) + 2 < r {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|t| t == p || t == m || !common.is_subset(&zeros[t]));
                if !adjacent {
                    continue;
                }
                let v: Vec<i128> = rays[m]
                    .iter()
                    .zip(&rays[p])
                    .map(|(&ym, &yp)| s[p] * ym as i128 - s[m] * yp as i128)
                    .collect();
                new_rays.push(primitive(v)?);
                common.insert(idx);
                new_zeros.push(common);
            }
        }
        let mut kept_rays = Vec::with_capacity(rays.len() + new_rays.len());
        let mut kept_zeros = Vec::with_capacity(rays.len() + new_rays.len());
        for (i, (y, mut z)) in rays.into_iter().zip(zeros).enumerate() {
            if s[i] >= 0 {
                if s[i] == 0 {
                    z.insert(idx);
                }
                kept_rays.push(y);
                kept_zeros.push(z);
            }
        }
        kept_rays.extend(new_rays);
        kept_zeros.extend(new_zeros);
        rays = kept_rays;
        zeros = kept_zeros;
    }
    rays.sort();
    rays.dedup();
    Ok((rays, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[&[i64]]) -> LatticePolytope {
        let v: Vec<Vec<i64>> = pts.iter().map(|p| p.to_vec()).collect();
        LatticePolytope::from_points(&v, v[0].len()).unwrap()
    }

    fn cube(d: usize) -> LatticePolytope {
        let pts: Vec<Vec<i64>> = (0..1u32 << d).map(|m| (0..d).map(|i| ((m >> i) & 1) as i64).collect()).collect();
        LatticePolytope::from_points(&pts, d).unwrap()
    }

    #[test]
    fn square_and_duplicates() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!((sq.dim(), sq.vertex_count(), sq.facet_count()), (2, 4, 4));
        let dup = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[1, 0]]);
        assert_eq!(dup.vertices(), sq.vertices());
        let forms: Vec<(Vec<i64>, i64)> = sq.facets().unwrap().forms.iter().map(|f| (f.normal.clone(), f.offset)).collect();
        assert_eq!(forms, vec![(vec![-1, 0], 1), (vec![0, -1], 1), (vec![0, 1], 0), (vec![1, 0], 0)]);
        assert_eq!(sq.lattice_points().ambient.len(), 4);
        let sq2 = poly(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        assert_eq!(sq2.lattice_points().ambient.len(), 9);
    }

    #[test]
    fn interior_generators_are_not_vertices() {
        let p = poly(&[&[0, 0], &[2, 0], &[0, 2], &[1, 1], &[1, 0], &[0, 1]]);
        assert_eq!(p.vertices(), vec![vec![0, 0], vec![0, 2], vec![2, 0]]);
    }

    #[test]
    fn triangle_of_single_edge_stab() {
        let t = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        let forms: Vec<(Vec<i64>, i64, i64)> =
            t.facets().unwrap().forms.iter().map(|f| (f.normal.clone(), f.offset, f.divisor)).collect();
        assert_eq!(forms, vec![(vec![-1, -1], 1, 1), (vec![0, 1], 0, 1), (vec![1, 0], 0, 1)]);
    }

    #[test]
    fn edge_polytope_of_triangle_halves() {
        let k3 = poly(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(k3.dim(), 2);
        assert!(k3.linear_picture());
        let fs = k3.facets().unwrap();
        assert_eq!(fs.len(), 3);
        assert!(fs.forms.iter().all(|f| f.divisor == 2));
        for f in &fs.forms {
            let vals: Vec<i64> = k3.lattice_points().reduced.iter().map(|p| f.eval(p)).collect();
            let mut s = vals.clone();
            s.sort();
            assert_eq!(s, vec![0, 0, 1]);
        }
    }

    #[test]
    fn idp_certificates() {
        assert_eq!(cube(3).is_idp(None), IdpCertificate::Idp);
        let reeve = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]);
        assert_eq!(reeve.lattice_points().ambient.len(), 4);
        assert_eq!(reeve.is_idp(None), IdpCertificate::NotIdp { witness: vec![1, 1, 1], degree: 2 });
        assert_eq!(cube(3).is_idp(Some(2)), IdpCertificate::Inconclusive { bound: 2 });
    }

    #[test]
    fn pyramids() {
        let pt = poly(&[&[0, 0]]);
        let seg = pt.pyramid();
        assert_eq!((seg.dim(), seg.lattice_points().ambient.len()), (1, 2));
        let sq = cube(2);
        let pyr = sq.pyramid();
        assert_eq!(pyr.vertex_count(), 5);
        assert_eq!(pyr.facet_count(), sq.facet_count() + 1);
        let (core, n) = pyr.pyramid_reduce();
        assert_eq!((core.dim(), core.vertex_count(), n), (2, 4, 1));
        assert_eq!(sq.pyramid_reduce().1, 0);
        let simplex = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let (core, n) = simplex.pyramid_reduce();
        assert_eq!((core.dim(), n), (0, 3));
    }

    #[test]
    fn degenerate_has_no_facets() {
        assert_eq!(poly(&[&[3, 4]]).facets().unwrap_err(), Error::DegeneratePolytope);
    }
}
