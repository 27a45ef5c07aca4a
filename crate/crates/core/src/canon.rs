//! Canonical labeling of small directed graphs by equitable refinement and
//! individualization, pruning only twin transpositions; sizes stay ≤ ~10.

/// `perm[new] = old`; `code[i]` is the out-neighbourhood of new vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub perm: Vec<usize>,
    pub code: Vec<u64>,
}

/// `adj[v]` is the out-neighbour bitmask of `v`; at most 64 vertices.
pub fn canonical_form(adj: &[u64]) -> Canonical {
    let n = adj.len();
    assert!(n <= 64, "canonical_form supports at most 64 vertices");
    let mut radj = vec![0u64; n];
    for (v, &row) in adj.iter().enumerate() {
        for w in bits(row) {
            radj[w] |= 1 << v;
        }
    }
    let mut best: Option<Canonical> = None;
    let start = if n == 0 { Vec::new() } else { vec![(0..n).collect::<Vec<_>>()] };
    search(adj, &radj, start, &mut best);
    best.unwrap_or(Canonical { perm: Vec::new(), code: Vec::new() })
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

fn refine(adj: &[u64], radj: &[u64], mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let masks: Vec<u64> = cells.iter().map(|c| c.iter().fold(0, |m, &v| m | 1 << v)).collect();
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    let sig = masks
                        .iter()
                        .flat_map(|&m| [(adj[v] & m).count_ones(), (radj[v] & m).count_ones()])
                        .collect();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut group = vec![keyed[0].1];
            for w in keyed.windows(2) {
                if w[0].0 != w[1].0 {
                    next.push(std::mem::take(&mut group));
                }
                group.push(w[1].1);
            }
            next.push(group);
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn twins(adj: &[u64], radj: &[u64], v: usize, w: usize) -> bool {
    let mask = !(1u64 << v | 1u64 << w);
    adj[v] & mask == adj[w] & mask
        && radj[v] & mask == radj[w] & mask
        && (adj[v] >> w & 1) == (adj[w] >> v & 1)
        && (adj[v] >> v & 1) == (adj[w] >> w & 1)
}

fn search(adj: &[u64], radj: &[u64], cells: Vec<Vec<usize>>, best: &mut Option<Canonical>) {
    let cells = refine(adj, radj, cells);
    match cells.iter().position(|c| c.len() > 1) {
        None => {
            let perm: Vec<usize> = cells.into_iter().map(|c| c[0]).collect();
            let mut pos = vec![0usize; perm.len()];
            for (i, &v) in perm.iter().enumerate() {
                pos[v] = i;
            }
            let code: Vec<u64> = perm.iter().map(|&v| bits(adj[v]).fold(0, |m, w| m | 1 << pos[w])).collect();
            if best.as_ref().is_none_or(|b| code < b.code) {
                *best = Some(Canonical { perm, code });
            }
        }
        Some(i) => {
            let mut tried: Vec<usize> = Vec::new();
            for &v in &cells[i] {
                // swapping twins is an automorphism fixing every individualized vertex
                if tried.iter().any(|&w| twins(adj, radj, v, w)) {
                    continue;
                }
                tried.push(v);
                let mut next = Vec::with_capacity(cells.len() + 1);
                next.extend_from_slice(&cells[..i]);
                next.push(vec![v]);
                next.push(cells[i].iter().copied().filter(|&w| w != v).collect());
                next.extend_from_slice(&cells[i + 1..]);
                search(adj, radj, next, best);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn relabel(adj: &[u64], p: &[usize]) -> Vec<u64> {
        let mut out = vec![0u64; adj.len()];
        for (v, &row) in adj.iter().enumerate() {
            for w in bits(row) {
                out[p[v]] |= 1 << p[w];
            }
        }
        out
    }

    #[test]
    fn invariant_under_relabeling() {
        // path 0-1-2-3 plus chord 0-2
        let adj = vec![0b0110, 0b0101, 0b1011, 0b0100];
        let c = canonical_form(&adj);
        for p in [[1, 2, 3, 0], [3, 2, 1, 0], [2, 0, 3, 1]] {
            assert_eq!(canonical_form(&relabel(&adj, &p)).code, c.code);
        }
        assert_eq!(relabel(&adj, &inverse(&c.perm)), c.code);
    }

    fn inverse(p: &[usize]) -> Vec<usize> {
        let mut q = vec![0; p.len()];
        for (i, &v) in p.iter().enumerate() {
            q[v] = i;
        }
        q
    }

    #[test]
    fn distinguishes_nonisomorphic() {
        let path = vec![0b010, 0b101, 0b010];
        let tri = vec![0b110, 0b101, 0b011];
        assert_ne!(canonical_form(&path).code, canonical_form(&tri).code);
        let up = vec![0b10, 0b00];
        let down = vec![0b00, 0b01];
        assert_eq!(canonical_form(&up).code, canonical_form(&down).code);
    }
}
