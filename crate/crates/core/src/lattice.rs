//! Exact integer linear algebra: Smith and Hermite normal forms, integer
//! kernels, saturation and affine lattice spans.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from equal-length rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix row");
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Converts to machine integers, failing instead of truncating.
    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect())
            .collect()
    }

    /// Determinant of a square matrix by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * prev
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = s * q;
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let v = s * q;
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Positive, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    /// `(U, V)` with `U·A·V` diagonal, present only when requested.
    pub transforms: Option<(IntMatrix, IntMatrix)>,
}

/// Smith normal form by smallest-pivot elimination.
pub fn smith_normal_form(a: &IntMatrix, with_transforms: bool) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut tr = with_transforms.then(|| (IntMatrix::identity(m), IntMatrix::identity(n)));
    let mut t = 0;
    while t < m.min(n) {
        // global pivot: smallest |entry|, ties by (row, col)
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let v = d.get(i, j);
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| v.magnitude() < d.get(bi, bj).magnitude()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rc(&mut d, &mut tr, t, pi, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -(d.get(i, t) / d.get(t, t));
                d.add_row(i, t, &q);
                if let Some((u, _)) = tr.as_mut() {
                    u.add_row(i, t, &q);
                }
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -(d.get(t, j) / d.get(t, t));
                d.add_col(j, t, &q);
                if let Some((_, v)) = tr.as_mut() {
                    v.add_col(j, t, &q);
                }
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                // smaller remainder left in row/column t: move it to the pivot
                let mut best = (t, t);
                for i in t + 1..m {
                    let v = d.get(i, t);
                    if !v.is_zero() && v.magnitude() < d.get(best.0, best.1).magnitude() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    let v = d.get(t, j);
                    if !v.is_zero() && v.magnitude() < d.get(best.0, best.1).magnitude() {
                        best = (t, j);
                    }
                }
                swap_rc(&mut d, &mut tr, t, best.0, best.1);
                continue;
            }
            let p = d.get(t, t).clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    if let Some((u, _)) = tr.as_mut() {
                        u.add_row(t, i, &one);
                    }
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            if let Some((u, _)) = tr.as_mut() {
                u.negate_row(t);
            }
        }
        t += 1;
    }
    let invariant_factors: Vec<BigInt> = (0..t).map(|i| d.get(i, i).clone()).collect();
    SmithForm { rank: invariant_factors.len(), invariant_factors, transforms: tr }
}

fn swap_rc(d: &mut IntMatrix, tr: &mut Option<(IntMatrix, IntMatrix)>, t: usize, i: usize, j: usize) {
    d.swap_rows(t, i);
    d.swap_cols(t, j);
    if let Some((u, v)) = tr.as_mut() {
        u.swap_rows(t, i);
        v.swap_cols(t, j);
    }
}

/// Row-style Hermite normal form `H = U·A` with `U` unimodular.
///
/// The first `rank` rows of `H` are in echelon form with positive pivots and
/// entries above each pivot reduced into `[0, pivot)`; the remaining rows are
/// zero, so the matching rows of `U` span the left kernel of `A`.
pub struct Hermite {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn hermite_normal_form(a: &IntMatrix) -> Hermite {
    let (m, n) = (a.rows, a.cols);
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            // smallest nonzero magnitude in column c at or below r
            let mut best: Option<usize> = None;
            for i in r..m {
                if !h.get(i, c).is_zero()
                    && best.is_none_or(|b| h.get(i, c).magnitude() < h.get(b, c).magnitude())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            u.swap_rows(r, b);
            let mut done = true;
            for i in r + 1..m {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = -(h.get(i, c).div_floor(h.get(r, c)));
                h.add_row(i, r, &q);
                u.add_row(i, r, &q);
                done &= h.get(i, c).is_zero();
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -(h.get(i, c).div_floor(h.get(r, c)));
            h.add_row(i, r, &q);
            u.add_row(i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    Hermite { h, u, rank: r, pivots }
}

/// Basis (as rows) of `{x ∈ Z^cols : A·x = 0}`; the result is saturated.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let hnf = hermite_normal_form(&a.transpose());
    let n = a.cols;
    let mut k = IntMatrix::zeros(n - hnf.rank, n);
    for (out, i) in (hnf.rank..n).enumerate() {
        for j in 0..n {
            k.set(out, j, hnf.u.get(i, j).clone());
        }
    }
    k
}

/// Echelon basis of the lattice spanned by the rows of `a`.
pub fn row_lattice_basis(a: &IntMatrix) -> IntMatrix {
    let hnf = hermite_normal_form(a);
    let mut b = IntMatrix::zeros(hnf.rank, a.cols);
    for i in 0..hnf.rank {
        for j in 0..a.cols {
            b.set(i, j, hnf.h.get(i, j).clone());
        }
    }
    b
}

/// Echelon basis of `span_R(rows of a) ∩ Z^cols`.
pub fn saturate(a: &IntMatrix) -> IntMatrix {
    let orth = integer_kernel(a);
    if orth.rows() == 0 {
        return IntMatrix::identity(a.cols);
    }
    row_lattice_basis(&integer_kernel(&orth))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineLatticeBasis {
    pub origin: Vec<i64>,
    /// Echelon rows with positive pivots.
    pub basis: Vec<Vec<i64>>,
}

impl AffineLatticeBasis {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Integer coordinates of `p` relative to the basis, if `p` lies in the affine lattice.
    pub fn coordinates(&self, p: &[i64]) -> Option<Vec<i64>> {
        let mut rest: Vec<i128> = p.iter().zip(&self.origin).map(|(&a, &b)| a as i128 - b as i128).collect();
        let mut coords = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let piv = row.iter().position(|&x| x != 0)?;
            let (q, r) = (rest[piv].div_euclid(row[piv] as i128), rest[piv].rem_euclid(row[piv] as i128));
            if r != 0 {
                return None;
            }
            for (x, &b) in rest.iter_mut().zip(row) {
                *x -= q * b as i128;
            }
            coords.push(i64::try_from(q).ok()?);
        }
        rest.iter().all(|&x| x == 0).then_some(coords)
    }

    pub fn point(&self, coords: &[i64]) -> Vec<i64> {
        let mut p = self.origin.clone();
        for (c, row) in coords.iter().zip(&self.basis) {
            for (x, &b) in p.iter_mut().zip(row) {
                *x += c * b;
            }
        }
        p
    }
}

/// Origin is the first point; the basis generates all pairwise differences.
pub fn affine_lattice_span(points: &[Vec<i64>]) -> Result<AffineLatticeBasis> {
    let origin = points.first().ok_or_else(|| Error::BadInput("no points".into()))?.clone();
    let diffs: Vec<Vec<i64>> =
        points[1..].iter().map(|p| p.iter().zip(&origin).map(|(a, b)| a - b).collect()).collect();
    let basis = row_lattice_basis(&IntMatrix::from_rows(&diffs, origin.len())).to_i64_rows()?;
    Ok(AffineLatticeBasis { origin, basis })
}

/// The affine span of `points` intersected with `Z^d`, origin at the first point.
pub fn saturated_affine_span(points: &[Vec<i64>]) -> Result<AffineLatticeBasis> {
    let span = affine_lattice_span(points)?;
    if span.basis.is_empty() {
        return Ok(span);
    }
    let m = IntMatrix::from_rows(&span.basis, span.origin.len());
    let basis = saturate(&m).to_i64_rows()?;
    Ok(AffineLatticeBasis { origin: span.origin, basis })
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn gcd_slice(xs: &[i64]) -> i64 {
    xs.iter().fold(0i64, |g, &x| g.gcd(&x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(rows: &[Vec<i64>], cols: usize) -> Vec<i64> {
        smith_normal_form(&IntMatrix::from_rows(rows, cols), false)
            .invariant_factors
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn snf_small_cases() {
        assert_eq!(factors(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], 3), vec![1, 1, 1]);
        assert_eq!(factors(&[vec![0, 0], vec![0, 0]], 2), Vec::<i64>::new());
        assert_eq!(factors(&[vec![2, 4], vec![6, 8]], 2), vec![2, 4]);
        assert_eq!(factors(&[], 3), Vec::<i64>::new());
        assert_eq!(factors(&[vec![6], vec![4]], 1), vec![2]);
    }

    #[test]
    fn snf_transforms_diagonalize() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        let s = smith_normal_form(&a, true);
        let (u, v) = s.transforms.unwrap();
        let d = u.mul(&a).mul(&v);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j && i < s.rank { s.invariant_factors[i].clone() } else { BigInt::zero() };
                assert_eq!(d.get(i, j), &want);
            }
        }
        assert_eq!(u.determinant().magnitude(), BigInt::one().magnitude());
        assert_eq!(v.determinant().magnitude(), BigInt::one().magnitude());
        let f: Vec<i64> = s.invariant_factors.iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(f, vec![2, 6, 12]);
    }

    #[test]
    fn kernel_and_saturation() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 1]], 3);
        let k = integer_kernel(&a);
        assert_eq!(k.rows(), 2);
        for i in 0..2 {
            let s: BigInt = k.row(i).iter().sum();
            assert!(s.is_zero());
        }
        let sat = saturate(&IntMatrix::from_rows(&[vec![2, 0]], 2)).to_i64_rows().unwrap();
        assert_eq!(sat, vec![vec![1, 0]]);
    }

    #[test]
    fn affine_spans() {
        let s = affine_lattice_span(&[vec![0, 0]]).unwrap();
        assert_eq!(s.origin, vec![0, 0]);
        assert!(s.basis.is_empty());

        let s = affine_lattice_span(&[vec![0, 0], vec![2, 0], vec![0, 2], vec![1, 1]]).unwrap();
        assert_eq!(s.rank(), 2);
        // every difference has even coordinate sum: index-2 sublattice of Z^2
        let det = IntMatrix::from_rows(&s.basis, 2).determinant();
        assert_eq!(det.magnitude(), BigInt::from(2).magnitude());
        assert!(s.coordinates(&[1, 0]).is_none());

        let k3 = vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]];
        let s = affine_lattice_span(&k3).unwrap();
        assert_eq!(s.rank(), 2);
        for p in &k3 {
            let c = s.coordinates(p).unwrap();
            assert_eq!(&s.point(&c), p);
        }
        assert!(s.coordinates(&[1, 1, 1]).is_none());
    }

    #[test]
    fn saturation_recovers_missing_points() {
        let s = affine_lattice_span(&[vec![0, 0], vec![2, 0]]).unwrap();
        assert!(s.coordinates(&[1, 0]).is_none());
        let t = saturated_affine_span(&[vec![0, 0], vec![2, 0]]).unwrap();
        assert_eq!(t.coordinates(&[1, 0]), Some(vec![1]));
    }
}
