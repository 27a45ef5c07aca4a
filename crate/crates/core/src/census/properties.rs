//! Randomized suites: Smith form against determinantal divisors, and the
//! equivalence oracle against random unimodular images. Seeded by `Bounds::seed`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::verify::{graph_label, poset_label, Bounds, Outcome};
use crate::equivalence::{unimodular_equivalent, verify_witness};
use crate::error::{Error, Result};
use crate::lattice::{smith_normal_form, IntMatrix};
use crate::polytope::LatticePolytope;

pub const SNF_SAMPLES: usize = 1000;
pub const EQUIV_SAMPLES: usize = 200;

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

/// `d_k`: gcd of all k×k minors.
fn determinantal_divisor(a: &IntMatrix, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rows in subsets(a.rows(), k) {
        for cols in subsets(a.cols(), k) {
            let mut m = IntMatrix::zeros(k, k);
            for (i, &r) in rows.iter().enumerate() {
                for (j, &c) in cols.iter().enumerate() {
                    m.set(i, j, a.get(r, c).clone());
                }
            }
            g = g.gcd(&m.determinant());
        }
    }
    g
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
    // sparse rows exercise rank deficiency
    let zero_bias = rng.gen_range(0..=2);
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|_| (0..c).map(|_| if rng.gen_range(0..4) < zero_bias { 0 } else { rng.gen_range(-9..=9) }).collect())
        .collect();
    IntMatrix::from_rows(&rows, c)
}

/// Product of elementary unimodular operations on `n` coordinates.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut p = IntMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p.set(i, j, if rng.gen_bool(0.5) { BigInt::one() } else { -BigInt::one() });
    }
    m = m.mul(&p);
    if n < 2 {
        return m;
    }
    for _ in 0..rng.gen_range(1..=2 * n) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut e = IntMatrix::identity(n);
        e.set(i, j, BigInt::from(rng.gen_range(-2i64..=2)));
        m = m.mul(&e);
    }
    m
}

fn matrix_label(a: &IntMatrix) -> String {
    let rows: Vec<String> = (0..a.rows())
        .map(|i| a.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        .collect();
    format!("[{}]", rows.join(";"))
}

fn check_snf(a: &IntMatrix, rng: &mut ChaCha8Rng, out: &mut Outcome) {
    let what = matrix_label(a);
    let s = smith_normal_form(a, true);
    let f = &s.invariant_factors;
    if f.len() != s.rank || f.iter().any(|x| !x.is_positive()) || f.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
        out.fail(format!("{what}: malformed invariant factors {f:?}"));
        return;
    }
    let mut prod = BigInt::one();
    for k in 1..=a.rows().min(a.cols()) {
        let d = determinantal_divisor(a, k);
        let expect = if k <= s.rank {
            prod *= &f[k - 1];
            prod.clone()
        } else {
            BigInt::zero()
        };
        if d != expect {
            out.fail(format!("{what}: d_{k} = {d} but invariant factors give {expect}"));
        }
    }
    if let Some((u, v)) = &s.transforms {
        let d = u.mul(a).mul(v);
        let diag_ok = (0..d.rows()).all(|i| {
            (0..d.cols()).all(|j| {
                let want = if i == j && i < s.rank { f[i].clone() } else { BigInt::zero() };
                d.get(i, j).abs() == want
            })
        });
        if !diag_ok || u.determinant().abs() != BigInt::one() || v.determinant().abs() != BigInt::one() {
            out.fail(format!("{what}: transforms do not diagonalize"));
        }
    }
    let b = random_unimodular(rng, a.rows()).mul(a).mul(&random_unimodular(rng, a.cols()));
    if smith_normal_form(&b, false).invariant_factors != *f {
        out.fail(format!("{what}: factors change under unimodular multiplication to {}", matrix_label(&b)));
    }
}

pub(crate) fn snf_oracle(b: &Bounds) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    // draw every input sequentially so the run is independent of thread count
    let cases: Vec<(IntMatrix, u64)> = (0..SNF_SAMPLES).map(|_| (random_matrix(&mut rng), rng.gen())).collect();
    let mut out = Outcome::default();
    out.each(&cases, |(a, s)| {
        let mut o = Outcome::one();
        check_snf(a, &mut ChaCha8Rng::seed_from_u64(*s), &mut o);
        Ok(o)
    })?;
    Ok(out)
}

fn apply(points: &[Vec<i64>], m: &IntMatrix, shift: &[i64]) -> Result<Vec<Vec<i64>>> {
    let rows = m.to_i64_rows()?;
    Ok(points
        .iter()
        .map(|p| rows.iter().zip(shift).map(|(r, t)| r.iter().zip(p).map(|(a, x)| a * x).sum::<i64>() + t).collect())
        .collect())
}

fn random_source(rng: &mut ChaCha8Rng) -> Result<(String, LatticePolytope)> {
    Ok(match rng.gen_range(0..4) {
        0 | 1 => {
            let n = rng.gen_range(1..=5);
            let ps = super::enumerate::all_posets(n)?;
            let p = ps.choose(rng).expect("nonempty level");
            if rng.gen_bool(0.5) {
                (format!("order {}", poset_label(p)), p.order_polytope()?)
            } else {
                (format!("chain {}", poset_label(p)), p.chain_polytope()?)
            }
        }
        2 => {
            let n = rng.gen_range(1..=5);
            let gs = super::enumerate::all_graphs(n)?;
            let g = gs.choose(rng).expect("nonempty level");
            (format!("stable {}", graph_label(g)), g.stable_set_polytope()?)
        }
        _ => loop {
            let n = rng.gen_range(2..=6);
            let gs = super::enumerate::all_graphs(n)?;
            let g = gs.choose(rng).expect("nonempty level");
            if g.edge_count() > 0 {
                break (format!("edge {}", graph_label(g)), g.edge_polytope()?);
            }
        },
    })
}

struct Pair {
    label: String,
    p: LatticePolytope,
    image: LatticePolytope,
    other_label: String,
    other: LatticePolytope,
}

pub(crate) fn equiv_soundness(b: &Bounds) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    let mut pairs = Vec::with_capacity(EQUIV_SAMPLES);
    for _ in 0..EQUIV_SAMPLES {
        let (label, p) = random_source(&mut rng)?;
        let d = p.ambient_dim();
        let u = random_unimodular(&mut rng, d);
        let shift: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
        let mut pts = apply(&p.vertices(), &u, &shift)?;
        pts.shuffle(&mut rng);
        let image = LatticePolytope::from_points(&pts, d)?;
        let (other_label, other) = random_source(&mut rng)?;
        pairs.push(Pair { label, p, image, other_label, other });
    }
    let budget = b.budget;
    let mut out = Outcome::default();
    let parts: Vec<Outcome> = pairs
        .par_iter()
        .map(|x| -> Result<Outcome> {
            let mut o = Outcome::one();
            let what = format!("{} under a unimodular map", x.label);
            match unimodular_equivalent(&x.p, &x.image, budget) {
                Ok(Some(w)) if verify_witness(&x.p, &x.image, &w) => {}
                Ok(Some(_)) => o.fail(format!("{what}: unsound witness")),
                Ok(None) => o.fail(format!("{what}: reported inequivalent")),
                Err(Error::SearchBudgetExceeded(_)) => {
                    o.budget_exits.push(what.clone());
                    o.fail(format!("{what}: undecided within budget"));
                }
                Err(e) => return Err(e),
            }
            let fwd = unimodular_equivalent(&x.p, &x.other, budget);
            let back = unimodular_equivalent(&x.other, &x.p, budget);
            let what = format!("{} vs {}", x.label, x.other_label);
            match (fwd, back) {
                (Ok(f), Ok(r)) => {
                    if f.is_some() != r.is_some() {
                        o.fail(format!("{what}: asymmetric answer"));
                    }
                    if f.as_ref().is_some_and(|w| !verify_witness(&x.p, &x.other, w))
                        || r.as_ref().is_some_and(|w| !verify_witness(&x.other, &x.p, w))
                    {
                        o.fail(format!("{what}: unsound witness"));
                    }
                }
                (Err(Error::SearchBudgetExceeded(_)), _) | (_, Err(Error::SearchBudgetExceeded(_))) => {
                    o.budget_exits.push(what.clone());
                    o.fail(format!("{what}: undecided within budget"));
                }
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
            Ok(o)
        })
        .collect::<Result<_>>()?;
    for p in parts {
        out.merge(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinantal_divisors_of_a_known_matrix() {
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]], 2);
        assert_eq!(determinantal_divisor(&a, 1), BigInt::from(2));
        assert_eq!(determinantal_divisor(&a, 2), BigInt::from(8));
    }

    #[test]
    fn random_unimodular_has_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=5 {
            assert_eq!(random_unimodular(&mut rng, n).determinant().abs(), BigInt::one());
        }
    }
}
