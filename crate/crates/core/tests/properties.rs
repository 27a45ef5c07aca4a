use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use toriclass::canon::canonical_form;
use toriclass::classgroup::{class_group, IdpPolicy};
use toriclass::equivalence::{unimodular_equivalent, verify_witness, DEFAULT_BUDGET};
use toriclass::graph::SimpleGraph;
use toriclass::lattice::{affine_lattice_span, smith_normal_form, IntMatrix};
use toriclass::polytope::LatticePolytope;
use toriclass::poset::Poset;

fn matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

fn minors_gcd(a: &[Vec<i64>], k: usize) -> BigInt {
    let (r, c) = (a.len(), a[0].len());
    let subsets = |n: usize| (0u32..1 << n).filter(move |m| m.count_ones() as usize == k);
    let mut g = BigInt::zero();
    for rm in subsets(r) {
        for cm in subsets(c) {
            let rows: Vec<Vec<i64>> = (0..r)
                .filter(|i| rm >> i & 1 == 1)
                .map(|i| (0..c).filter(|j| cm >> j & 1 == 1).map(|j| a[i][j]).collect())
                .collect();
            g = g.gcd(&IntMatrix::from_rows(&rows, k).determinant());
        }
    }
    g
}

fn factors(rows: &[Vec<i64>]) -> Vec<BigInt> {
    smith_normal_form(&IntMatrix::from_rows(rows, rows[0].len()), false).invariant_factors
}

/// Row-operation images of the identity: `I + t·E_ij` products with a sign flip.
fn unimodular(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec((0..n, 0..n, -2i64..=2), 0..6).prop_map(move |ops| {
        let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        for (i, j, t) in ops {
            if i == j {
                m[i].iter_mut().for_each(|x| *x = -*x);
            } else {
                let src = m[j].clone();
                for (x, s) in m[i].iter_mut().zip(src) {
                    *x += t * s;
                }
            }
        }
        m
    })
}

fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter().map(|r| (0..b[0].len()).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect()).collect()
}

fn points(dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(0i64..=3, dim), 2..=7)
}

fn graph(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = SimpleGraph::empty(n);
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if bits[k] {
                        g.add_edge(a, b);
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn poset(max_n: usize) -> impl Strategy<Value = Poset> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            // relations only go upward in index order, so the closure is acyclic
            let mut rel = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if bits[k] {
                        rel.push((a, b));
                    }
                    k += 1;
                }
            }
            Poset::new(n, &rel).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn determinantal_divisors(a in matrix(4)) {
        let f = factors(&a);
        let mut prod = BigInt::one();
        for k in 1..=a.len().min(a[0].len()) {
            let expect = match f.get(k - 1) {
                Some(x) => { prod *= x; prod.clone() }
                None => BigInt::zero(),
            };
            prop_assert_eq!(minors_gcd(&a, k), expect);
        }
        prop_assert!(f.iter().all(|x| x.is_positive()));
        prop_assert!(f.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    }

    #[test]
    fn snf_invariant_under_permutation_and_unimodular_maps(
        (a, u, v, rp, cp) in matrix(4).prop_flat_map(|a| {
            let (r, c) = (a.len(), a[0].len());
            (
                Just(a),
                unimodular(r),
                unimodular(c),
                Just((0..r).collect::<Vec<usize>>()).prop_shuffle(),
                Just((0..c).collect::<Vec<usize>>()).prop_shuffle(),
            )
        })
    ) {
        let base = factors(&a);
        let permuted: Vec<Vec<i64>> = rp.iter().map(|&i| cp.iter().map(|&j| a[i][j]).collect()).collect();
        prop_assert_eq!(factors(&permuted), base.clone());
        prop_assert_eq!(factors(&mul(&mul(&u, &a), &v)), base);
    }

    #[test]
    fn affine_span_contains_its_points(pts in (1usize..=4).prop_flat_map(points)) {
        let b = affine_lattice_span(&pts).unwrap();
        for p in &pts {
            let c = b.coordinates(p);
            prop_assert!(c.is_some(), "{:?} not in span", p);
            prop_assert_eq!(&b.point(&c.unwrap()), p);
        }
    }

    #[test]
    fn facets_and_vertices_are_dual(pts in (1usize..=3).prop_flat_map(points)) {
        let p = LatticePolytope::from_points(&pts, pts[0].len()).unwrap();
        prop_assume!(p.dim() >= 1);
        let inc = p.vertex_facet_incidence();
        let verts = p.vertices();
        for v in 0..verts.len() {
            prop_assert!(inc.iter().filter(|f| f.contains(&v)).count() >= p.dim());
        }
        for f in &inc {
            let tight: Vec<Vec<i64>> = f.iter().map(|&v| verts[v].clone()).collect();
            prop_assert_eq!(affine_lattice_span(&tight).unwrap().rank(), p.dim() - 1);
        }
    }

    #[test]
    fn pyramids_add_one_facet_and_reduce_back(pts in (1usize..=3).prop_flat_map(points)) {
        let p = LatticePolytope::from_points(&pts, pts[0].len()).unwrap();
        prop_assume!(p.dim() >= 1);
        let pyr = p.pyramid();
        prop_assert_eq!(pyr.facet_count(), p.facet_count() + 1);
        let (core, apexes) = pyr.pyramid_reduce();
        let (own, own_apexes) = p.pyramid_reduce();
        prop_assert_eq!(apexes, own_apexes + 1);
        prop_assert!(unimodular_equivalent(&core, &own, DEFAULT_BUDGET).unwrap().is_some());
    }

    #[test]
    fn class_group_survives_pyramids(q in poset(5)) {
        let p = q.order_polytope().unwrap();
        let a = class_group(&p, IdpPolicy::Assume).unwrap();
        let b = class_group(&p.pyramid(), IdpPolicy::Check(None)).unwrap();
        prop_assert_eq!(a.group(), b.group());
    }

    #[test]
    fn canonical_form_ignores_labels(
        (g, perm) in graph(8).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        })
    ) {
        let h = g.permuted(&perm);
        prop_assert_eq!(canonical_form(g.adjacency()).code, canonical_form(h.adjacency()).code);
    }

    #[test]
    fn equivalent_images_have_equal_class_groups(
        (q, u, shift) in poset(5).prop_flat_map(|q| {
            let n = q.size();
            (Just(q), unimodular(n), prop::collection::vec(-3i64..=3, n))
        })
    ) {
        let p = q.chain_polytope().unwrap();
        let img: Vec<Vec<i64>> = p
            .vertices()
            .iter()
            .map(|v| u.iter().zip(&shift).map(|(r, t)| r.iter().zip(v).map(|(a, x)| a * x).sum::<i64>() + t).collect())
            .collect();
        let image = LatticePolytope::from_points(&img, q.size()).unwrap();
        let w = unimodular_equivalent(&p, &image, DEFAULT_BUDGET).unwrap();
        prop_assert!(w.as_ref().is_some_and(|w| verify_witness(&p, &image, w)));
        let back = unimodular_equivalent(&image, &p, DEFAULT_BUDGET).unwrap();
        prop_assert!(back.is_some());
        prop_assert_eq!(
            class_group(&p, IdpPolicy::Assume).unwrap(),
            class_group(&image, IdpPolicy::Check(None)).unwrap()
        );
    }

    #[test]
    fn acceptable_sets_pair_up_across_sides(g in graph(7)) {
        prop_assume!(g.is_connected() && g.is_bipartite());
        let (v1, v2) = g.bipartition().unwrap();
        let first_v2 = v2.trailing_zeros() as usize;
        let mut perm: Vec<usize> = vec![first_v2];
        perm.extend((0..g.n()).filter(|&v| v != first_v2));
        let swapped = g.permuted(&perm);
        let unmap = |m: u64| (0..g.n()).filter(|&i| m >> i & 1 == 1).fold(0u64, |acc, i| acc | 1 << perm[i]);
        let mut in_v1: Vec<u64> = g.special_sets().unwrap().iter().map(|s| s.members).collect();
        let mut in_v2: Vec<u64> = swapped.special_sets().unwrap().iter().map(|s| unmap(s.members)).collect();
        prop_assert!(in_v1.iter().all(|&t| t & !v1 == 0));
        prop_assert!(in_v2.iter().all(|&t| t & !v2 == 0));
        let mut mapped: Vec<u64> = in_v1
            .iter()
            .map(|&t| v2 & !(0..g.n()).filter(|&v| t >> v & 1 == 1).fold(0u64, |m, v| m | g.neighbors(v)))
            .collect();
        mapped.sort();
        in_v2.sort();
        in_v1.sort();
        prop_assert_eq!(mapped, in_v2);
    }
}

#[test]
fn edge_polytope_dimensions() {
    for n in 2..=8 {
        for g in toriclass::census::enumerate_graphs(n, &"connected".parse().unwrap()).unwrap() {
            let p = g.edge_polytope().unwrap();
            assert_eq!(p.dim(), n - g.bipartite_components() - 1, "{:?}", g.edges());
        }
    }
}

#[test]
fn vertices_of_zero_one_polytopes_are_all_their_lattice_points() {
    for n in 1..=5 {
        for q in toriclass::census::enumerate_posets(n).unwrap() {
            for p in [q.order_polytope().unwrap(), q.chain_polytope().unwrap()] {
                assert_eq!(p.lattice_points().ambient, p.vertices());
            }
        }
    }
}

#[test]
fn order_and_chain_polytopes_agree_exactly_without_x_shape() {
    for n in 1..=6 {
        for q in toriclass::census::enumerate_posets(n).unwrap() {
            let same = unimodular_equivalent(&q.order_polytope().unwrap(), &q.chain_polytope().unwrap(), DEFAULT_BUDGET)
                .unwrap()
                .is_some();
            assert_eq!(same, !q.contains_x_shape(), "{:?}", q.covers());
        }
    }
}

#[test]
fn census_counts() {
    let graphs: Vec<usize> = (1..=7).map(|n| toriclass::census::all_graphs(n).unwrap().len()).collect();
    assert_eq!(graphs, vec![1, 2, 4, 11, 34, 156, 1044]);
    let posets: Vec<usize> = (1..=6).map(|n| toriclass::census::all_posets(n).unwrap().len()).collect();
    assert_eq!(posets, vec![1, 2, 5, 16, 63, 318]);
}
