//! Chain-level CW complexes: cells with integer boundary chains, closed
//! subcomplexes, cones, cell attachment, and relative cohomology of pairs.
//!
//! Complexes are regular at chain level only: a cell is its boundary chain,
//! not an attaching map. Every cell may carry a provenance label (a poset
//! element id) recording which construction step created it; panel
//! membership and stabilisers are read off these labels.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Error;
use crate::homology::{ChainComplex, HomologySummary};
use crate::matrix::ExactMatrix;
use crate::ring::{Ring, Scalar};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub name: String,
    /// Poset element that created this cell, when known.
    pub label: Option<usize>,
    /// Sparse boundary chain: (index in dimension - 1, coefficient).
    pub boundary: Vec<(usize, BigInt)>,
}

/// A finite CW complex at chain level.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CwComplex {
    cells: Vec<Vec<Cell>>,
}

impl CwComplex {
    pub fn new() -> Self {
        CwComplex { cells: Vec::new() }
    }

    pub fn dim(&self) -> Option<usize> {
        (0..self.cells.len())
            .rev()
            .find(|&k| !self.cells[k].is_empty())
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        match self.dim() {
            None => vec![],
            Some(top) => (0..=top).map(|k| self.cells[k].len()).collect(),
        }
    }

    pub fn count(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, Vec::len)
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn cell(&self, dim: usize, idx: usize) -> &Cell {
        &self.cells[dim][idx]
    }

    pub fn cells(&self, dim: usize) -> &[Cell] {
        self.cells.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn is_empty(&self) -> bool {
        self.total_cells() == 0
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, cs)| if k % 2 == 0 { cs.len() as i64 } else { -(cs.len() as i64) })
            .sum()
    }

    /// Adds a cell, checking that the boundary chain is a cycle: empty in
    /// dimension 0, augmentation zero in dimension 1, `d(chain) = 0` above.
    pub fn add_cell(
        &mut self,
        dim: usize,
        name: String,
        label: Option<usize>,
        boundary: Vec<(usize, BigInt)>,
    ) -> Result<usize> {
        if dim == 0 {
            if !boundary.is_empty() {
                return Err(Error::NotACycle { degree: dim });
            }
        } else {
            let lower = self.count(dim - 1);
            for &(i, _) in &boundary {
                if i >= lower {
                    return Err(Error::DimensionMismatch(format!(
                        "boundary of {name} references cell {i} in dimension {}",
                        dim - 1
                    )));
                }
            }
            if dim == 1 {
                let aug: BigInt = boundary.iter().map(|(_, c)| c.clone()).sum();
                if !aug.is_zero() {
                    return Err(Error::NotACycle { degree: dim });
                }
            } else {
                let mut image: Vec<BigInt> = vec![BigInt::zero(); self.count(dim - 2)];
                for &(i, ref c) in &boundary {
                    for &(j, ref e) in &self.cells[dim - 1][i].boundary {
                        image[j] += c * e;
                    }
                }
                if image.iter().any(|v| !v.is_zero()) {
                    return Err(Error::NotACycle { degree: dim });
                }
            }
        }
        while self.cells.len() <= dim {
            self.cells.push(Vec::new());
        }
        let mut b = boundary;
        b.retain(|(_, c)| !c.is_zero());
        b.sort_by_key(|&(i, _)| i);
        self.cells[dim].push(Cell { name, label, boundary: b });
        Ok(self.cells[dim].len() - 1)
    }

    /// Boundary map `C_k -> C_{k-1}` as an integer matrix.
    pub fn boundary_matrix(&self, k: usize) -> ExactMatrix {
        let rows = if k == 0 { 0 } else { self.count(k - 1) };
        let cols = self.count(k);
        let mut m = ExactMatrix::zero(Ring::Integers, rows, cols);
        if k == 0 {
            return m;
        }
        for (j, cell) in self.cells(k).iter().enumerate() {
            for &(i, ref c) in &cell.boundary {
                m.set(i, j, Scalar::Int(c.clone()));
            }
        }
        m
    }

    pub fn chain_complex(&self) -> Result<ChainComplex> {
        let top = match self.dim() {
            None => return ChainComplex::new(Ring::Integers, vec![0], vec![]),
            Some(t) => t,
        };
        let sizes: Vec<usize> = (0..=top).map(|k| self.count(k)).collect();
        let d: Vec<ExactMatrix> = (1..=top).map(|k| self.boundary_matrix(k)).collect();
        ChainComplex::new(Ring::Integers, sizes, d)
    }

    pub fn homology(&self, k: i64, ring: Ring, reduced: bool) -> Result<HomologySummary> {
        self.chain_complex()?.homology(k, ring, reduced)
    }

    pub fn is_acyclic(&self, ring: Ring) -> Result<bool> {
        self.chain_complex()?.is_acyclic(ring)
    }

    /// The cone over this complex: one apex vertex plus one (k+1)-cell per
    /// k-cell. The boundary of a coned cell is the original cell minus the
    /// cone of its boundary. The original complex sits inside the result
    /// with unchanged indices.
    pub fn cone(&self, apex_name: &str, apex_label: Option<usize>) -> CwComplex {
        let mut out = self.clone();
        let apex = out
            .add_cell(0, apex_name.to_string(), apex_label, vec![])
            .expect("vertex is always a cycle");
        let top = self.dim().map_or(0, |t| t + 1);
        // index of the coned copy of cell (k, i) in dimension k+1
        let offsets: Vec<usize> = (0..=top).map(|k| out.count(k + 1)).collect();
        for k in 0..=self.dim().map_or(0, |t| t) {
            for (i, cell) in self.cells(k).iter().enumerate() {
                let mut boundary: Vec<(usize, BigInt)> = vec![(i, BigInt::from(1))];
                if k == 0 {
                    boundary.push((apex, BigInt::from(-1)));
                } else {
                    for &(f, ref c) in &cell.boundary {
                        boundary.push((offsets[k - 1] + f, -c.clone()));
                    }
                }
                let name = format!("{}*{}", apex_name, cell.name);
                out.add_cell(k + 1, name, apex_label, boundary)
                    .expect("cone boundaries are cycles");
            }
        }
        out
    }
}

/// A subcomplex of a shared parent complex, stored as per-dimension index
/// sets and closed under boundary.
#[derive(Debug, Clone)]
pub struct Subcomplex {
    parent: Arc<CwComplex>,
    members: Vec<BTreeSet<usize>>,
}

impl PartialEq for Subcomplex {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.members == other.members
    }
}
impl Eq for Subcomplex {}

impl Subcomplex {
    pub fn empty(parent: Arc<CwComplex>) -> Self {
        let members = vec![BTreeSet::new(); parent.cells.len()];
        Subcomplex { parent, members }
    }

    pub fn full(parent: Arc<CwComplex>) -> Self {
        let members = parent
            .cells
            .iter()
            .map(|cs| (0..cs.len()).collect())
            .collect();
        Subcomplex { parent, members }
    }

    /// Builds a subcomplex from explicit cell sets, verifying closure under
    /// boundary.
    pub fn from_cells(parent: Arc<CwComplex>, cells: Vec<BTreeSet<usize>>) -> Result<Self> {
        let mut members = cells;
        members.resize(parent.cells.len(), BTreeSet::new());
        let sub = Subcomplex { parent, members };
        sub.check_closed()?;
        Ok(sub)
    }

    pub fn parent(&self) -> &Arc<CwComplex> {
        &self.parent
    }

    pub fn members(&self, dim: usize) -> &BTreeSet<usize> {
        static EMPTY: BTreeSet<usize> = BTreeSet::new();
        self.members.get(dim).unwrap_or(&EMPTY)
    }

    pub fn contains(&self, dim: usize, idx: usize) -> bool {
        self.members.get(dim).is_some_and(|s| s.contains(&idx))
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        let top = (0..self.members.len())
            .rev()
            .find(|&k| !self.members[k].is_empty());
        match top {
            None => vec![],
            Some(t) => (0..=t).map(|k| self.members[k].len()).collect(),
        }
    }

    pub fn total_cells(&self) -> usize {
        self.members.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_cells() == 0
    }

    pub fn dim(&self) -> Option<usize> {
        (0..self.members.len())
            .rev()
            .find(|&k| !self.members[k].is_empty())
    }

    fn check_closed(&self) -> Result<()> {
        for (k, set) in self.members.iter().enumerate() {
            if k == 0 {
                continue;
            }
            for &i in set {
                for &(f, _) in &self.parent.cells[k][i].boundary {
                    if !self.members[k - 1].contains(&f) {
                        return Err(Error::NotClosedSubcomplex {
                            witness: self.parent.cells[k][i].name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn union(&self, other: &Subcomplex) -> Result<Subcomplex> {
        self.check_parent(other)?;
        let members = self
            .members
            .iter()
            .zip(other.members.iter())
            .map(|(a, b)| a.union(b).copied().collect())
            .collect();
        Ok(Subcomplex { parent: self.parent.clone(), members })
    }

    pub fn intersection(&self, other: &Subcomplex) -> Result<Subcomplex> {
        self.check_parent(other)?;
        let members: Vec<BTreeSet<usize>> = self
            .members
            .iter()
            .zip(other.members.iter())
            .map(|(a, b)| a.intersection(b).copied().collect())
            .collect();
        let sub = Subcomplex { parent: self.parent.clone(), members };
        sub.check_closed()?;
        Ok(sub)
    }

    pub fn is_subset_of(&self, other: &Subcomplex) -> Result<bool> {
        self.check_parent(other)?;
        Ok(self
            .members
            .iter()
            .zip(other.members.iter())
            .all(|(a, b)| a.is_subset(b)))
    }

    fn check_parent(&self, other: &Subcomplex) -> Result<()> {
        if !Arc::ptr_eq(&self.parent, &other.parent) {
            return Err(Error::ParentMismatch);
        }
        Ok(())
    }

    /// Materialises the subcomplex as a standalone complex, returning the
    /// per-dimension maps from new indices to parent indices.
    pub fn to_complex(&self) -> (CwComplex, Vec<Vec<usize>>) {
        let mut out = CwComplex::new();
        let mut maps: Vec<Vec<usize>> = Vec::new();
        let mut inverse: Vec<std::collections::BTreeMap<usize, usize>> = Vec::new();
        for (k, set) in self.members.iter().enumerate() {
            let map: Vec<usize> = set.iter().copied().collect();
            let inv: std::collections::BTreeMap<usize, usize> =
                map.iter().enumerate().map(|(new, &old)| (old, new)).collect();
            for &old in &map {
                let cell = &self.parent.cells[k][old];
                let boundary = cell
                    .boundary
                    .iter()
                    .map(|&(f, ref c)| (inverse[k - 1][&f], c.clone()))
                    .collect();
                out.add_cell(k, cell.name.clone(), cell.label, boundary)
                    .expect("closed subcomplex keeps cycles");
            }
            maps.push(map);
            inverse.push(inv);
        }
        (out, maps)
    }

    pub fn homology(&self, k: i64, ring: Ring, reduced: bool) -> Result<HomologySummary> {
        self.to_complex().0.homology(k, ring, reduced)
    }

    pub fn is_acyclic(&self, ring: Ring) -> Result<bool> {
        self.to_complex().0.is_acyclic(ring)
    }

    /// Smallest vertex index of the subcomplex, used as the canonical
    /// basepoint in chain-map construction.
    pub fn min_vertex(&self) -> Option<usize> {
        self.members.first().and_then(|s| s.iter().next().copied())
    }
}

/// The quotient chain complex `C_*(X) / C_*(A)` for a closed subcomplex `A`.
pub fn quotient_chain_complex(x: &Arc<CwComplex>, a: &Subcomplex) -> Result<ChainComplex> {
    if !Arc::ptr_eq(x, a.parent()) {
        return Err(Error::ParentMismatch);
    }
    a.check_closed()?;
    let top = match x.dim() {
        None => return ChainComplex::new(Ring::Integers, vec![0], vec![]),
        Some(t) => t,
    };
    // indices of cells surviving the quotient
    let kept: Vec<Vec<usize>> = (0..=top)
        .map(|k| (0..x.count(k)).filter(|i| !a.contains(k, *i)).collect())
        .collect();
    let sizes: Vec<usize> = kept.iter().map(Vec::len).collect();
    let mut d = Vec::new();
    for k in 1..=top {
        let full = x.boundary_matrix(k);
        d.push(full.submatrix(&kept[k - 1], &kept[k]));
    }
    ChainComplex::new(Ring::Integers, sizes, d)
}

/// Relative cohomology `H^k(X, A; R)` of a pair, computed from the quotient
/// chain complex. When `A` is empty this is the unreduced cohomology of `X`.
pub fn relative_cohomology(
    x: &Arc<CwComplex>,
    a: &Subcomplex,
    ring: Ring,
    k: i64,
) -> Result<HomologySummary> {
    quotient_chain_complex(x, a)?.cohomology(k, ring, false)
}

/// Reduced relative cohomology: relative cohomology for nonempty `A`,
/// reduced cohomology of `X` when `A` is empty. This is the convention
/// under which the long exact sequence of the pair holds with reduced
/// groups on both ends.
pub fn reduced_relative_cohomology(
    x: &Arc<CwComplex>,
    a: &Subcomplex,
    ring: Ring,
    k: i64,
) -> Result<HomologySummary> {
    if a.is_empty() {
        x.chain_complex()?.cohomology(k, ring, true)
    } else {
        relative_cohomology(x, a, ring, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> CwComplex {
        let mut c = CwComplex::new();
        for name in ["p", "q", "r"] {
            c.add_cell(0, name.into(), None, vec![]).unwrap();
        }
        c.add_cell(1, "pq".into(), None, vec![(0, (-1).into()), (1, 1.into())]).unwrap();
        c.add_cell(1, "qr".into(), None, vec![(1, (-1).into()), (2, 1.into())]).unwrap();
        c.add_cell(1, "rp".into(), None, vec![(2, (-1).into()), (0, 1.into())]).unwrap();
        c
    }

    #[test]
    fn cone_of_empty_is_point() {
        let c = CwComplex::new().cone("a", None);
        assert_eq!(c.cell_counts(), vec![1]);
        assert!(c.is_acyclic(Ring::Integers).unwrap());
    }

    #[test]
    fn cone_of_two_points_is_path() {
        let mut c = CwComplex::new();
        c.add_cell(0, "p".into(), None, vec![]).unwrap();
        c.add_cell(0, "q".into(), None, vec![]).unwrap();
        let cone = c.cone("a", None);
        assert_eq!(cone.cell_counts(), vec![3, 2]);
        assert!(cone.is_acyclic(Ring::Integers).unwrap());
    }

    #[test]
    fn cone_of_circle_is_disk() {
        let cone = circle().cone("a", None);
        assert_eq!(cone.euler_characteristic(), 1);
        for ring in [Ring::Integers, Ring::Rationals, Ring::PrimeField(2)] {
            assert!(cone.is_acyclic(ring).unwrap());
        }
    }

    #[test]
    fn attach_disk_kills_loop() {
        let mut c = circle();
        let chi = c.euler_characteristic();
        c.add_cell(2, "disk".into(), None, vec![(0, 1.into()), (1, 1.into()), (2, 1.into())])
            .unwrap();
        assert_eq!(c.euler_characteristic(), chi + 1);
        assert!(c.is_acyclic(Ring::Integers).unwrap());
    }

    #[test]
    fn attach_along_double_loop_creates_torsion() {
        let mut c = circle();
        c.add_cell(2, "rp2".into(), None, vec![(0, 2.into()), (1, 2.into()), (2, 2.into())])
            .unwrap();
        let h1 = c.homology(1, Ring::Integers, true).unwrap();
        assert_eq!(h1.betti, 0);
        assert_eq!(h1.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn attach_rejects_non_cycles() {
        let mut c = circle();
        let err = c.add_cell(2, "bad".into(), None, vec![(0, 1.into())]);
        assert!(matches!(err, Err(Error::NotACycle { degree: 2 })));
        let err = c.add_cell(1, "bad".into(), None, vec![(0, 1.into())]);
        assert!(matches!(err, Err(Error::NotACycle { degree: 1 })));
    }

    #[test]
    fn attach_edge_merges_components() {
        let mut c = CwComplex::new();
        c.add_cell(0, "p".into(), None, vec![]).unwrap();
        c.add_cell(0, "q".into(), None, vec![]).unwrap();
        assert_eq!(c.homology(0, Ring::Integers, true).unwrap().betti, 1);
        c.add_cell(1, "pq".into(), None, vec![(0, (-1).into()), (1, 1.into())]).unwrap();
        assert!(c.is_acyclic(Ring::Integers).unwrap());
    }

    #[test]
    fn relative_cohomology_of_interval_mod_boundary() {
        let mut c = CwComplex::new();
        c.add_cell(0, "p".into(), None, vec![]).unwrap();
        c.add_cell(0, "q".into(), None, vec![]).unwrap();
        c.add_cell(1, "e".into(), None, vec![(0, (-1).into()), (1, 1.into())]).unwrap();
        let x = Arc::new(c);
        let ends = Subcomplex::from_cells(x.clone(), vec![[0usize, 1].into_iter().collect()]).unwrap();
        let h1 = relative_cohomology(&x, &ends, Ring::Integers, 1).unwrap();
        assert_eq!(h1.betti, 1);
        let full = Subcomplex::full(x.clone());
        for k in 0..=1 {
            assert!(relative_cohomology(&x, &full, Ring::Integers, k).unwrap().is_trivial());
        }
        // (X, empty) recovers unreduced cohomology
        let empty = Subcomplex::empty(x.clone());
        let h0 = relative_cohomology(&x, &empty, Ring::Integers, 0).unwrap();
        assert_eq!(h0.betti, 1);
    }

    #[test]
    fn relative_cohomology_of_four_cycle_mod_two_points() {
        // 4-cycle a-c-b-d with subcomplex {c, d}; the long exact sequence
        // 0 -> coker(Z -> Z^2) -> H^1(rel) -> H^1(S^1) -> 0 forces betti 2.
        let mut c = CwComplex::new();
        for name in ["a", "c", "b", "d"] {
            c.add_cell(0, name.into(), None, vec![]).unwrap();
        }
        let cycle = [(0usize, 1usize), (1, 2), (2, 3), (3, 0)];
        for (i, &(s, t)) in cycle.iter().enumerate() {
            c.add_cell(1, format!("e{i}"), None, vec![(s, (-1).into()), (t, 1.into())])
                .unwrap();
        }
        let x = Arc::new(c);
        let pts = Subcomplex::from_cells(x.clone(), vec![[1usize, 3].into_iter().collect()]).unwrap();
        let h1 = relative_cohomology(&x, &pts, Ring::Integers, 1).unwrap();
        assert_eq!(h1.betti, 2);
        assert!(h1.torsion.is_empty());
    }

    #[test]
    fn subcomplex_operations() {
        let x = Arc::new(circle());
        let a = Subcomplex::from_cells(x.clone(), vec![[0usize, 1].into_iter().collect()]).unwrap();
        let b = Subcomplex::from_cells(x.clone(), vec![[1usize, 2].into_iter().collect()]).unwrap();
        let u = a.union(&b).unwrap();
        assert_eq!(u.members(0).len(), 3);
        let i = a.intersection(&b).unwrap();
        assert_eq!(i.members(0).iter().copied().collect::<Vec<_>>(), vec![1]);
        let e = Subcomplex::empty(x.clone());
        assert_eq!(a.union(&e).unwrap(), a);

        let y = Arc::new(circle());
        let c = Subcomplex::empty(y);
        assert!(matches!(a.union(&c), Err(Error::ParentMismatch)));
    }

    #[test]
    fn open_subcomplex_is_rejected() {
        let x = Arc::new(circle());
        let err = Subcomplex::from_cells(
            x,
            vec![BTreeSet::new(), [0usize].into_iter().collect()],
        );
        assert!(matches!(err, Err(Error::NotClosedSubcomplex { .. })));
    }
}
