//! Finite posets: validation, up-sets, linear extensions and the order
//! complex.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::cw::CwComplex;
use crate::error::Error;
use crate::Result;

/// A finite strict partial order, stored as its full transitive closure.
///
/// Elements are indexed by their input position; labels are kept for
/// display and file round-trips.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    /// `lt[a * n + b]` holds exactly when `a < b`.
    lt: Vec<bool>,
}

impl Poset {
    /// Validates raw `<` pairs: duplicates are rejected, the transitive
    /// closure is computed, and any cycle is reported with a witness.
    pub fn new(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Poset> {
        let n = labels.len();
        let mut seen = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateElement(l.clone()));
            }
        }
        let mut lt = vec![false; n * n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::UnknownElement(format!("pair ({a}, {b})")));
            }
            lt[a * n + b] = true;
        }
        // Warshall closure
        for k in 0..n {
            for i in 0..n {
                if lt[i * n + k] {
                    for j in 0..n {
                        if lt[k * n + j] {
                            lt[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            if lt[i * n + i] {
                let cycle = witness_cycle(n, pairs, i, &labels);
                return Err(Error::CycleDetected(cycle));
            }
        }
        Ok(Poset { labels, lt })
    }

    pub fn from_label_pairs(labels: Vec<String>, pairs: &[(String, String)]) -> Result<Poset> {
        let index: BTreeMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mut raw = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let ia = *index
                .get(a.as_str())
                .ok_or_else(|| Error::UnknownElement(a.clone()))?;
            let ib = *index
                .get(b.as_str())
                .ok_or_else(|| Error::UnknownElement(b.clone()))?;
            raw.push((ia, ib));
        }
        Poset::new(labels, &raw)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.lt[a * self.len() + b]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b) || self.lt(b, a)
    }

    /// All strict order pairs `(a, b)` with `a < b`.
    pub fn lt_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt[a * n + b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Element ids `>= j` (or `> j` when `strict`).
    pub fn upset_ids(&self, j: usize, strict: bool) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| if strict { self.lt(j, v) } else { self.leq(j, v) })
            .collect()
    }

    /// Induced subposet on an id set; returns the poset together with the
    /// map from new ids to original ids.
    pub fn induced(&self, ids: &[usize]) -> (Poset, Vec<usize>) {
        let labels = ids.iter().map(|&i| self.labels[i].clone()).collect();
        let mut pairs = Vec::new();
        for (a, &ia) in ids.iter().enumerate() {
            for (b, &ib) in ids.iter().enumerate() {
                if self.lt(ia, ib) {
                    pairs.push((a, b));
                }
            }
        }
        let sub = Poset::new(labels, &pairs).expect("induced subposet is valid");
        (sub, ids.to_vec())
    }

    /// The subposet `Q_{>=j}` (`strict = false`) or `Q_{>j}` (`strict = true`).
    pub fn upset(&self, j: usize, strict: bool) -> Result<(Poset, Vec<usize>)> {
        if j >= self.len() {
            return Err(Error::UnknownElement(format!("id {j}")));
        }
        Ok(self.induced(&self.upset_ids(j, strict)))
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| (0..self.len()).all(|b| !self.lt(a, b)))
            .collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| (0..self.len()).all(|b| !self.lt(b, a)))
            .collect()
    }

    /// Minimum element if the poset has one.
    pub fn minimum(&self) -> Option<usize> {
        let mins = self.minimal_elements();
        match mins.as_slice() {
            [m] if (0..self.len()).all(|b| self.leq(*m, b)) => Some(*m),
            _ => None,
        }
    }

    /// Deterministic linear extension: Kahn's algorithm taking the
    /// smallest-id available element first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut remaining: Vec<bool> = vec![true; n];
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let next = (0..n)
                .find(|&a| remaining[a] && (0..n).all(|b| !(remaining[b] && self.lt(b, a))))
                .expect("acyclic poset always has a minimal element");
            remaining[next] = false;
            out.push(next);
        }
        out
    }

    /// Reverse linear extension: maximal elements first, ties broken by
    /// input order. This is the processing order of every inductive
    /// panel construction.
    pub fn reverse_linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut remaining: Vec<bool> = vec![true; n];
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let next = (0..n)
                .find(|&a| remaining[a] && (0..n).all(|b| !(remaining[b] && self.lt(a, b))))
                .expect("acyclic poset always has a maximal element");
            remaining[next] = false;
            out.push(next);
        }
        out
    }

    /// All nonempty chains, grouped by length - 1 (simplex dimension),
    /// each chain ascending, lexicographically ordered within a dimension.
    pub fn chains(&self) -> Vec<Vec<Vec<usize>>> {
        let n = self.len();
        let mut by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..n).rev().map(|i| vec![i]).collect();
        while let Some(chain) = stack.pop() {
            let dim = chain.len() - 1;
            while by_dim.len() <= dim {
                by_dim.push(Vec::new());
            }
            by_dim[dim].push(chain.clone());
            let last = *chain.last().expect("nonempty");
            for next in (0..n).rev() {
                if self.lt(last, next) {
                    let mut c = chain.clone();
                    c.push(next);
                    stack.push(c);
                }
            }
        }
        for cells in by_dim.iter_mut() {
            cells.sort();
        }
        by_dim
    }

    /// Geometric realisation: the simplicial complex whose k-cells are the
    /// (k+1)-chains of the poset. Every cell is labelled with the minimum
    /// element of its chain.
    pub fn order_complex(&self) -> CwComplex {
        let chains = self.chains();
        let mut complex = CwComplex::new();
        // position lookup per dimension
        let mut index: Vec<BTreeMap<&[usize], usize>> = Vec::new();
        for (dim, cells) in chains.iter().enumerate() {
            index.push(BTreeMap::new());
            for (i, chain) in cells.iter().enumerate() {
                index[dim].insert(chain.as_slice(), i);
            }
            for chain in cells {
                let name = chain
                    .iter()
                    .map(|&e| self.labels[e].clone())
                    .collect::<Vec<_>>()
                    .join("<");
                let label = Some(chain[0]);
                let mut boundary = Vec::new();
                if dim > 0 {
                    for (omit, _) in chain.iter().enumerate() {
                        let mut face: Vec<usize> = chain.clone();
                        face.remove(omit);
                        let fi = index[dim - 1][face.as_slice()];
                        let sign = if omit % 2 == 0 { 1 } else { -1 };
                        boundary.push((fi, BigInt::from(sign)));
                    }
                }
                complex
                    .add_cell(dim, name, label, boundary)
                    .expect("order complex boundaries are cycles");
            }
        }
        complex
    }
}

fn witness_cycle(n: usize, pairs: &[(usize, usize)], start: usize, labels: &[String]) -> String {
    // BFS from start back to start through the raw relation
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in pairs {
        adj[a].push(b);
    }
    let mut prev: Vec<Option<usize>> = vec![None; n];
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if y == start {
                let mut path = vec![start, x];
                let mut cur = x;
                while let Some(p) = prev[cur] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                let mut names: Vec<&str> = path.iter().map(|&i| labels[i].as_str()).collect();
                names.push(labels[start].as_str());
                return names.join(" < ");
            }
            if prev[y].is_none() && y != start {
                prev[y] = Some(x);
                queue.push_back(y);
            }
        }
    }
    format!("{0} < {0}", labels[start])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn closure_is_computed() {
        let p = Poset::new(labels(&["a", "b", "c"]), &[(0, 1), (1, 2)]).unwrap();
        assert!(p.lt(0, 2));
        assert!(!p.lt(2, 0));
    }

    #[test]
    fn cycles_are_rejected_with_witness() {
        let err = Poset::new(labels(&["a", "b"]), &[(0, 1), (1, 0)]).unwrap_err();
        match err {
            Error::CycleDetected(w) => assert!(w.contains('a') && w.contains('b')),
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn duplicates_are_rejected() {
        let err = Poset::new(labels(&["a", "a"]), &[]).unwrap_err();
        assert!(matches!(err, Error::DuplicateElement(_)));
    }

    #[test]
    fn antichain_has_no_relations() {
        let p = Poset::new(labels(&["x", "y", "z"]), &[]).unwrap();
        assert_eq!(p.lt_pairs(), vec![]);
        assert_eq!(p.maximal_elements(), vec![0, 1, 2]);
        let oc = p.order_complex();
        assert_eq!(oc.cell_counts(), vec![3]);
    }

    #[test]
    fn upsets_of_edge_poset() {
        // simplices of an edge plus the empty face: 0 = {}, 1 = v1, 2 = v2, 3 = e
        let p = Poset::new(
            labels(&["0", "v1", "v2", "e"]),
            &[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)],
        )
        .unwrap();
        let (strict, map) = p.upset(0, true).unwrap();
        assert_eq!(strict.len(), 3);
        assert_eq!(map, vec![1, 2, 3]);
        let (maximal, _) = p.upset(3, true).unwrap();
        assert!(maximal.is_empty());
        let (all, _) = p.upset(0, false).unwrap();
        assert_eq!(all.len(), 4);
        assert!(p.upset(9, true).is_err());
    }

    #[test]
    fn chain_gives_full_simplex() {
        let p = Poset::new(labels(&["a", "b", "c"]), &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let oc = p.order_complex();
        assert_eq!(oc.cell_counts(), vec![3, 3, 1]);
        assert!(oc.chain_complex().unwrap().is_acyclic(Ring::Integers).unwrap());
    }

    /// Independent chain oracle: enumerate subsets by bitmask and keep the
    /// totally ordered ones.
    fn brute_force_chain_count(p: &Poset, dim: usize) -> usize {
        let n = p.len();
        let mut count = 0;
        for mask in 1u32..(1 << n) {
            let ids: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            if ids.len() != dim + 1 {
                continue;
            }
            let chain = ids
                .iter()
                .all(|&a| ids.iter().all(|&b| a == b || p.comparable(a, b)));
            if chain {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn order_complex_matches_brute_force_chains() {
        let p = Poset::new(
            labels(&["0", "a", "b", "ab", "c"]),
            &[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3), (0, 4)],
        )
        .unwrap();
        let oc = p.order_complex();
        let counts = oc.cell_counts();
        for (dim, &c) in counts.iter().enumerate() {
            assert_eq!(c, brute_force_chain_count(&p, dim), "dimension {dim}");
        }
        assert_eq!(counts.iter().sum::<usize>(), {
            let mut total = 0;
            for d in 0..p.len() {
                total += brute_force_chain_count(&p, d);
            }
            total
        });
    }

    #[test]
    fn linear_extensions_respect_order() {
        let p = Poset::new(labels(&["a", "b", "c", "d"]), &[(1, 0), (2, 0), (0, 3)]).unwrap();
        let ext = p.linear_extension();
        for (i, &a) in ext.iter().enumerate() {
            for &b in &ext[i + 1..] {
                assert!(!p.lt(b, a), "linear extension violates order");
            }
        }
        let rev = p.reverse_linear_extension();
        for (i, &a) in rev.iter().enumerate() {
            for &b in &rev[i + 1..] {
                assert!(!p.lt(a, b), "reverse extension violates order");
            }
        }
    }
}
