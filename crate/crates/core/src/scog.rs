//! Simple complexes of finite groups: a poset of local groups inside an
//! ambient group, with the right-angled Coxeter and graph-product
//! frontends that realise strict developability by construction.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::Error;
use crate::perm::{Perm, PermGroup};
use crate::poset::Poset;
use crate::word::{LocalTable, SymbolicGroup};
use crate::Result;

/// A finite flag simplicial complex, stored as all of its nonempty faces.
#[derive(Debug, Clone)]
pub struct FlagComplex {
    vertex_names: Vec<String>,
    faces: Vec<BTreeSet<usize>>,
    edges: Vec<(usize, usize)>,
}

impl FlagComplex {
    /// The clique complex of a graph; flag by construction.
    pub fn from_graph(vertex_names: Vec<String>, edges: &[(usize, usize)]) -> Result<FlagComplex> {
        let n = vertex_names.len();
        check_names(&vertex_names)?;
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidInput(format!("bad edge ({a}, {b})")));
            }
        }
        if n > 24 {
            return Err(Error::InvalidInput(
                "flag complexes are enumerated exhaustively; at most 24 vertices supported".into(),
            ));
        }
        let faces = cliques(n, edges);
        Ok(FlagComplex { vertex_names, faces, edges: edges.to_vec() })
    }

    /// Builds from an explicit face list, verifying downward closure and
    /// flagness: every clique of the 1-skeleton must span a face.
    pub fn from_faces(
        vertex_names: Vec<String>,
        faces: Vec<BTreeSet<usize>>,
    ) -> Result<FlagComplex> {
        check_names(&vertex_names)?;
        let n = vertex_names.len();
        let face_set: BTreeSet<&BTreeSet<usize>> = faces.iter().collect();
        for f in &faces {
            if f.is_empty() || f.iter().any(|&v| v >= n) {
                return Err(Error::InvalidInput(format!("bad face {f:?}")));
            }
            for &skip in f {
                if f.len() > 1 {
                    let mut sub = f.clone();
                    sub.remove(&skip);
                    if !face_set.contains(&sub) {
                        return Err(Error::InvalidInput(format!(
                            "face list is not downward closed at {sub:?}"
                        )));
                    }
                }
            }
        }
        let mut edges = Vec::new();
        for f in &faces {
            if f.len() == 2 {
                let v: Vec<usize> = f.iter().copied().collect();
                edges.push((v[0], v[1]));
            }
        }
        for clique in cliques(n, &edges) {
            if !face_set.contains(&clique) {
                let named: Vec<&str> =
                    clique.iter().map(|&i| vertex_names[i].as_str()).collect();
                return Err(Error::NotFlag(named.join(",")));
            }
        }
        let mut sorted = faces;
        sorted.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        sorted.dedup();
        Ok(FlagComplex { vertex_names, faces: sorted, edges })
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn faces(&self) -> &[BTreeSet<usize>] {
        &self.faces
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Poset of nonempty faces plus an adjoined smallest element `{}`.
    /// Element ids: 0 is the bottom, then faces by (size, vertex set).
    pub fn face_poset_with_bottom(&self) -> Poset {
        let mut labels = vec!["{}".to_string()];
        labels.extend(self.faces.iter().map(|f| face_label(&self.vertex_names, f)));
        let mut pairs = Vec::new();
        for i in 1..labels.len() {
            pairs.push((0, i));
        }
        for (a, fa) in self.faces.iter().enumerate() {
            for (b, fb) in self.faces.iter().enumerate() {
                if fa.len() < fb.len() && fa.is_subset(fb) {
                    pairs.push((a + 1, b + 1));
                }
            }
        }
        Poset::new(labels, &pairs).expect("face posets are acyclic")
    }

    /// The clique (face) of each poset element; `None` for the bottom.
    fn spherical_sets(&self) -> Vec<BTreeSet<usize>> {
        let mut out = vec![BTreeSet::new()];
        out.extend(self.faces.iter().cloned());
        out
    }
}

fn check_names(names: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::DuplicateElement(n.clone()));
        }
    }
    Ok(())
}

/// All nonempty cliques of a graph, sorted by (size, vertex set).
pub fn cliques(vertex_count: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![vec![false; vertex_count]; vertex_count];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let mut out: Vec<BTreeSet<usize>> = Vec::new();
    for mask in 1u64..(1 << vertex_count) {
        let ids: Vec<usize> = (0..vertex_count).filter(|&i| mask & (1 << i) != 0).collect();
        if ids.iter().all(|&a| ids.iter().all(|&b| a == b || adj[a][b])) {
            out.push(ids.into_iter().collect());
        }
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

/// Canonical label of a face: vertex names in braces, the empty face `{}`.
pub fn face_label(names: &[String], face: &BTreeSet<usize>) -> String {
    let inner: Vec<&str> = face.iter().map(|&i| names[i].as_str()).collect();
    format!("{{{}}}", inner.join(","))
}

/// The group data of a simple complex of finite groups.
#[derive(Debug, Clone)]
pub enum GroupModel {
    /// Local groups are generated subgroups of an explicit finite
    /// permutation group.
    Explicit {
        group: PermGroup,
        /// generator names of the local group at each poset element
        subgroup_generators: Vec<Vec<String>>,
    },
    /// Local groups are the spherical (clique) subgroups of a graph
    /// product; an explicit permutation model is attached when the
    /// fundamental group is finite.
    Symbolic {
        group: SymbolicGroup,
        spherical: Vec<BTreeSet<usize>>,
        explicit: Option<Box<(PermGroup, Vec<Vec<String>>)>>,
    },
    /// Only the poset is known; local groups are pairwise distinct by
    /// convention.
    Opaque,
}

/// A simple complex of finite groups over a poset, strictly developable by
/// construction: local groups are realised as subgroups of the ambient
/// group.
#[derive(Debug, Clone)]
pub struct Scog {
    poset: Arc<Poset>,
    model: GroupModel,
}

impl Scog {
    pub fn poset_only(poset: Arc<Poset>) -> Scog {
        Scog { poset, model: GroupModel::Opaque }
    }

    pub fn explicit(
        poset: Arc<Poset>,
        group: PermGroup,
        subgroup_generators: Vec<Vec<String>>,
    ) -> Result<Scog> {
        if subgroup_generators.len() != poset.len() {
            return Err(Error::InvalidInput(
                "one subgroup generator list required per poset element".into(),
            ));
        }
        for gens in &subgroup_generators {
            for g in gens {
                group.generator(g)?;
            }
        }
        Ok(Scog { poset, model: GroupModel::Explicit { group, subgroup_generators } })
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    /// Elements of the local group at a poset element (explicit models).
    pub fn local_elements(&self, j: usize) -> Result<BTreeSet<Perm>> {
        match &self.model {
            GroupModel::Explicit { group, subgroup_generators } => {
                group.subgroup_elements(&subgroup_generators[j])
            }
            GroupModel::Symbolic { explicit: Some(boxed), .. } => {
                let (group, gens) = boxed.as_ref();
                group.subgroup_elements(&gens[j])
            }
            _ => Err(Error::InfiniteGroupRequiresRadius),
        }
    }

    pub fn local_order(&self, j: usize) -> Result<Option<usize>> {
        match &self.model {
            GroupModel::Explicit { .. } => Ok(Some(self.local_elements(j)?.len())),
            GroupModel::Symbolic { group, spherical, .. } => Ok(Some(
                spherical[j].iter().map(|&s| group.local(s).order()).product(),
            )),
            GroupModel::Opaque => Ok(None),
        }
    }

    /// Whether two elements carry the same local subgroup of the ambient
    /// group. For symbolic and opaque models distinct elements have
    /// distinct local groups.
    pub fn same_local_group(&self, a: usize, b: usize) -> Result<bool> {
        if a == b {
            return Ok(true);
        }
        match &self.model {
            GroupModel::Explicit { .. } => {
                Ok(self.local_elements(a)? == self.local_elements(b)?)
            }
            GroupModel::Symbolic { .. } | GroupModel::Opaque => Ok(false),
        }
    }

    /// Checks Def-style validity: whenever `J < T` the local group at `J`
    /// must be a proper subgroup of the one at `T`.
    pub fn validate(&self) -> Result<ScogReport> {
        let mut report = ScogReport::default();
        let q = &self.poset;
        match &self.model {
            GroupModel::Explicit { .. } => {
                let mut cache: Vec<BTreeSet<Perm>> = Vec::with_capacity(q.len());
                for j in 0..q.len() {
                    cache.push(self.local_elements(j)?);
                }
                for a in 0..q.len() {
                    for b in 0..q.len() {
                        if q.lt(a, b) {
                            if !cache[a].is_subset(&cache[b]) {
                                report.violations.push(format!(
                                    "local({}) is not contained in local({})",
                                    q.label(a),
                                    q.label(b)
                                ));
                            } else if cache[a].len() == cache[b].len() {
                                report.violations.push(format!(
                                    "inclusion local({}) -> local({}) is surjective",
                                    q.label(a),
                                    q.label(b)
                                ));
                            }
                        }
                    }
                }
            }
            GroupModel::Symbolic { spherical, group, .. } => {
                for a in 0..q.len() {
                    for b in 0..q.len() {
                        if q.lt(a, b) {
                            if !spherical[a].is_subset(&spherical[b]) {
                                report.violations.push(format!(
                                    "spherical set of {} not contained in that of {}",
                                    q.label(a),
                                    q.label(b)
                                ));
                            } else if spherical[a] == spherical[b] {
                                report.violations.push(format!(
                                    "inclusion local({}) -> local({}) is surjective",
                                    q.label(a),
                                    q.label(b)
                                ));
                            }
                        }
                    }
                }
                for s in 0..group.vertex_count() {
                    if group.local(s).order() < 2 {
                        report
                            .violations
                            .push(format!("vertex group {} is trivial", group.vertex_name(s)));
                    }
                }
            }
            GroupModel::Opaque => {}
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ScogReport {
    pub violations: Vec<String>,
}

impl ScogReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Right-angled Coxeter group of a flag complex: the poset of faces plus a
/// bottom, with local group `C_2^{|J|}` at the face `J`. When the complex
/// is a full simplex the group is finite and an explicit permutation model
/// is attached.
pub fn racg_from_flag(flag: &FlagComplex) -> Result<Scog> {
    let poset = Arc::new(flag.face_poset_with_bottom());
    let group = SymbolicGroup::racg(flag.vertex_names().to_vec(), flag.edges())?;
    let spherical = flag.spherical_sets();
    let explicit = if group.is_complete() {
        Some(Box::new(explicit_product_model(&group, &spherical)?))
    } else {
        None
    };
    Ok(Scog { poset, model: GroupModel::Symbolic { group, spherical, explicit } })
}

/// Graph product of finite vertex groups over a graph: the poset of
/// cliques plus a bottom, with the product of the vertex groups as local
/// group. Vertex groups are given as permutation generators.
pub fn graph_product_scog(
    vertex_names: Vec<String>,
    edges: &[(usize, usize)],
    vertex_groups: Vec<(usize, BTreeMap<String, Perm>)>,
) -> Result<Scog> {
    if vertex_groups.len() != vertex_names.len() {
        return Err(Error::InvalidInput("one vertex group per vertex".into()));
    }
    let mut locals = Vec::new();
    for (s, (degree, gens)) in vertex_groups.iter().enumerate() {
        let table = LocalTable::from_permutations(*degree, gens);
        if table.order() < 2 {
            return Err(Error::TrivialVertexGroup(vertex_names[s].clone()));
        }
        locals.push(table);
    }
    let flag = FlagComplex::from_graph(vertex_names.clone(), edges)?;
    let poset = Arc::new(flag.face_poset_with_bottom());
    let group = SymbolicGroup::new(vertex_names, edges, locals)?;
    let spherical = flag.spherical_sets();
    let explicit = if group.is_complete() {
        Some(Box::new(explicit_product_model_from(
            &spherical,
            &vertex_groups,
        )?))
    } else {
        None
    };
    Ok(Scog { poset, model: GroupModel::Symbolic { group, spherical, explicit } })
}

/// Permutation model of a finite right-angled Coxeter group: one
/// transposition per vertex on a private pair of points.
fn explicit_product_model(
    group: &SymbolicGroup,
    spherical: &[BTreeSet<usize>],
) -> Result<(PermGroup, Vec<Vec<String>>)> {
    let n = group.vertex_count();
    let degree = 2 * n;
    let mut gens = BTreeMap::new();
    for s in 0..n {
        gens.insert(
            group.vertex_name(s).to_string(),
            Perm::from_cycles(degree, &[vec![2 * s, 2 * s + 1]])?,
        );
    }
    let pg = PermGroup::new(degree, gens)?;
    let subgroup_gens = spherical
        .iter()
        .map(|c| c.iter().map(|&s| group.vertex_name(s).to_string()).collect())
        .collect();
    Ok((pg, subgroup_gens))
}

/// Permutation model of a finite graph product: vertex groups act on
/// disjoint point blocks.
fn explicit_product_model_from(
    spherical: &[BTreeSet<usize>],
    vertex_groups: &[(usize, BTreeMap<String, Perm>)],
) -> Result<(PermGroup, Vec<Vec<String>>)> {
    let offsets: Vec<usize> = vertex_groups
        .iter()
        .scan(0, |acc, (d, _)| {
            let off = *acc;
            *acc += d;
            Some(off)
        })
        .collect();
    let degree: usize = vertex_groups.iter().map(|(d, _)| d).sum();
    let mut gens = BTreeMap::new();
    let mut names_per_vertex: Vec<Vec<String>> = Vec::new();
    for (s, (d, vg)) in vertex_groups.iter().enumerate() {
        let mut names = Vec::new();
        for (name, p) in vg {
            let global = format!("{s}:{name}");
            let mut images: Vec<usize> = (0..degree).collect();
            for i in 0..*d {
                images[offsets[s] + i] = offsets[s] + p.apply(i);
            }
            gens.insert(global.clone(), Perm::new(images)?);
            names.push(global);
        }
        names_per_vertex.push(names);
    }
    let pg = PermGroup::new(degree, gens)?;
    let subgroup_gens = spherical
        .iter()
        .map(|c| {
            c.iter()
                .flat_map(|&s| names_per_vertex[s].iter().cloned())
                .collect()
        })
        .collect();
    Ok((pg, subgroup_gens))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagon_racg_has_26_elements() {
        let names: Vec<String> = (1..=7).map(|i| format!("s{i}")).collect();
        let mut edges = Vec::new();
        for i in 0..6 {
            edges.push((i, (i + 1) % 6));
            edges.push((i, 6));
        }
        let flag = FlagComplex::from_graph(names, &edges).unwrap();
        let scog = racg_from_flag(&flag).unwrap();
        assert_eq!(scog.poset().len(), 26);
        assert!(scog.validate().unwrap().is_valid());
        // hexagon Coxeter group is infinite: no explicit model
        assert!(matches!(
            scog.model(),
            GroupModel::Symbolic { explicit: None, .. }
        ));
    }

    #[test]
    fn edge_racg_is_finite_of_order_four() {
        let flag =
            FlagComplex::from_graph(vec!["a".into(), "b".into()], &[(0, 1)]).unwrap();
        let scog = racg_from_flag(&flag).unwrap();
        assert_eq!(scog.poset().len(), 4);
        let top = scog.poset().index_of("{a,b}").unwrap();
        assert_eq!(scog.local_order(top).unwrap(), Some(4));
        let full = scog.local_elements(top).unwrap();
        assert_eq!(full.len(), 4);
    }

    #[test]
    fn two_vertices_racg_is_symbolic_only() {
        let flag = FlagComplex::from_graph(vec!["a".into(), "b".into()], &[]).unwrap();
        let scog = racg_from_flag(&flag).unwrap();
        assert_eq!(scog.poset().len(), 3);
        assert!(scog.local_elements(0).is_err());
    }

    #[test]
    fn non_flag_complex_is_rejected() {
        // empty triangle: three edges, no 2-face
        let faces: Vec<BTreeSet<usize>> = vec![
            [0].into_iter().collect(),
            [1].into_iter().collect(),
            [2].into_iter().collect(),
            [0, 1].into_iter().collect(),
            [1, 2].into_iter().collect(),
            [0, 2].into_iter().collect(),
        ];
        let err = FlagComplex::from_faces(
            vec!["a".into(), "b".into(), "c".into()],
            faces,
        );
        match err {
            Err(Error::NotFlag(w)) => assert_eq!(w, "a,b,c"),
            other => panic!("expected NotFlag, got {other:?}"),
        }
    }

    #[test]
    fn graph_product_with_mixed_groups() {
        let c2: BTreeMap<String, Perm> =
            [("t".to_string(), Perm::from_cycles(2, &[vec![0, 1]]).unwrap())].into();
        let c3: BTreeMap<String, Perm> =
            [("r".to_string(), Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap())].into();
        let scog = graph_product_scog(
            vec!["a".into(), "b".into()],
            &[(0, 1)],
            vec![(2, c2), (3, c3)],
        )
        .unwrap();
        let top = scog.poset().index_of("{a,b}").unwrap();
        assert_eq!(scog.local_order(top).unwrap(), Some(6));
        assert_eq!(scog.local_elements(top).unwrap().len(), 6);
        assert!(scog.validate().unwrap().is_valid());
    }

    #[test]
    fn triangle_product_of_c2_has_order_eight() {
        let c2 = || -> BTreeMap<String, Perm> {
            [("t".to_string(), Perm::from_cycles(2, &[vec![0, 1]]).unwrap())].into()
        };
        let scog = graph_product_scog(
            vec!["x".into(), "y".into(), "z".into()],
            &[(0, 1), (0, 2), (1, 2)],
            vec![(2, c2()), (2, c2()), (2, c2())],
        )
        .unwrap();
        let top = scog.poset().index_of("{x,y,z}").unwrap();
        assert_eq!(scog.local_elements(top).unwrap().len(), 8);
    }

    #[test]
    fn trivial_vertex_group_is_rejected() {
        let trivial: BTreeMap<String, Perm> = BTreeMap::new();
        let err = graph_product_scog(vec!["a".into()], &[], vec![(1, trivial)]);
        assert!(matches!(err, Err(Error::TrivialVertexGroup(_))));
    }

    #[test]
    fn explicit_scog_with_equal_locals_fails_validation() {
        // a < c with local(a) = local(c): surjective inclusion flagged
        let poset = Arc::new(
            Poset::new(vec!["a".into(), "c".into()], &[(0, 1)]).unwrap(),
        );
        let mut gens = BTreeMap::new();
        gens.insert("x".to_string(), Perm::from_cycles(2, &[vec![0, 1]]).unwrap());
        let group = PermGroup::new(2, gens).unwrap();
        let scog = Scog::explicit(
            poset,
            group,
            vec![vec!["x".to_string()], vec!["x".to_string()]],
        )
        .unwrap();
        let report = scog.validate().unwrap();
        assert!(!report.is_valid());
        assert!(report.violations[0].contains("surjective"));
    }
}
