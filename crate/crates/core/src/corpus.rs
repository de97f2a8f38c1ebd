//! Bundled example inputs: the posets, flag complexes and group data used
//! by the verification suite and shipped as data files with the CLI.

use std::collections::BTreeSet;

use crate::poset::Poset;
use crate::scog::FlagComplex;

fn named(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn graph_poset(names: Vec<String>, edges: &[(usize, usize)]) -> Poset {
    FlagComplex::from_graph(names, edges)
        .expect("bundled graphs are valid")
        .face_poset_with_bottom()
}

/// Hexagon built out of six triangles: rim `s1..s6`, centre `s7`.
/// 25 simplices, so the poset has 26 elements.
pub fn hexagon_graph() -> (Vec<String>, Vec<(usize, usize)>) {
    let names = named(&["s1", "s2", "s3", "s4", "s5", "s6", "s7"]);
    let mut edges = Vec::new();
    for i in 0..6 {
        edges.push((i, (i + 1) % 6)); // rim
        edges.push((i, 6)); // spokes
    }
    (names, edges)
}

pub fn hexagon_poset() -> Poset {
    let (names, edges) = hexagon_graph();
    graph_poset(names, &edges)
}

/// A disjoint vertex `a` together with an edge `bc`.
pub fn vertex_edge_graph() -> (Vec<String>, Vec<(usize, usize)>) {
    (named(&["a", "b", "c"]), vec![(1, 2)])
}

pub fn vertex_edge_poset() -> Poset {
    let (names, edges) = vertex_edge_graph();
    graph_poset(names, &edges)
}

/// The full `n`-simplex as the clique complex of the complete graph on
/// `n + 1` vertices.
pub fn simplex_graph(n: usize) -> (Vec<String>, Vec<(usize, usize)>) {
    let names: Vec<String> = (1..=n + 1).map(|i| format!("s{i}")).collect();
    let mut edges = Vec::new();
    for a in 0..=n {
        for b in a + 1..=n {
            edges.push((a, b));
        }
    }
    (names, edges)
}

pub fn simplex_poset(n: usize) -> Poset {
    let (names, edges) = simplex_graph(n);
    graph_poset(names, &edges)
}

/// Two 3-simplices sharing a 1-simplex: complete graphs on `{1,2,3,4}` and
/// `{3,4,5,6}` glued along the edge `{3,4}`.
pub fn glued_simplices_graph() -> (Vec<String>, Vec<(usize, usize)>) {
    let names: Vec<String> = (1..=6).map(|i| format!("s{i}")).collect();
    let mut edges = BTreeSet::new();
    for group in [[0usize, 1, 2, 3], [2, 3, 4, 5]] {
        for i in 0..4 {
            for j in i + 1..4 {
                edges.insert((group[i].min(group[j]), group[i].max(group[j])));
            }
        }
    }
    (names, edges.into_iter().collect())
}

pub fn glued_simplices_poset() -> Poset {
    let (names, edges) = glued_simplices_graph();
    graph_poset(names, &edges)
}

/// Two isolated vertices; the right-angled Coxeter group is the infinite
/// dihedral group.
pub fn two_points_graph() -> (Vec<String>, Vec<(usize, usize)>) {
    (named(&["a", "b"]), vec![])
}

pub fn two_points_poset() -> Poset {
    let (names, edges) = two_points_graph();
    graph_poset(names, &edges)
}

/// Star poset: a bottom below three incomparable elements.
pub fn star_poset() -> Poset {
    Poset::new(named(&["{}", "{a}", "{b}", "{c}"]), &[(0, 1), (0, 2), (0, 3)])
        .expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagon_has_26_elements() {
        let q = hexagon_poset();
        assert_eq!(q.len(), 26);
        // 7 vertices, 12 edges, 6 triangles + bottom
        let oc = q.order_complex();
        assert_eq!(oc.cell_counts(), vec![26, 85, 96, 36]);
    }

    #[test]
    fn vertex_edge_poset_shape() {
        let q = vertex_edge_poset();
        assert_eq!(q.len(), 5);
        assert_eq!(q.minimum(), Some(0));
    }

    #[test]
    fn simplex_posets_have_maximum() {
        for n in 1..=4 {
            let q = simplex_poset(n);
            assert_eq!(q.len(), (1usize << (n + 1)) - 1 + 1);
            let oc = q.order_complex();
            assert_eq!(oc.dim(), Some(n + 1));
        }
    }

    #[test]
    fn glued_simplices_count() {
        let q = glued_simplices_poset();
        // faces of two tetrahedra sharing an edge: 15 + 15 - 3 = 27, plus bottom
        assert_eq!(q.len(), 28);
        let oc = q.order_complex();
        assert_eq!(oc.dim(), Some(4));
    }
}
