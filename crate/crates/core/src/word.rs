//! Word arithmetic in graph products of finite groups.
//!
//! Elements are syllable sequences (vertex, nontrivial local element).
//! The normal form merges and cancels syllables that can be shuffled
//! together and then takes the lexicographically least shuffle under the
//! fixed vertex order, so every group element has a unique representative
//! of minimal syllable length.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::Error;
use crate::perm::{close_under_products, Perm};
use crate::Result;

/// Multiplication data of one vertex group: element 0 is the identity.
#[derive(Debug, Clone)]
pub struct LocalTable {
    pub names: Vec<String>,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl LocalTable {
    /// The two-element group.
    pub fn involution(generator_name: &str) -> LocalTable {
        LocalTable {
            names: vec!["e".to_string(), generator_name.to_string()],
            mult: vec![vec![0, 1], vec![1, 0]],
            inv: vec![0, 1],
        }
    }

    /// Builds the table from a permutation model; elements are indexed in
    /// the lexicographic order of their permutations, identity first.
    pub fn from_permutations(degree: usize, generators: &BTreeMap<String, Perm>) -> LocalTable {
        let elements: Vec<Perm> =
            close_under_products(degree, generators.values().cloned()).into_iter().collect();
        let index: BTreeMap<&Perm, usize> = elements.iter().zip(0..).collect();
        let names = elements.iter().map(|p| p.to_string()).collect();
        let mult = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&a.compose(b)]).collect())
            .collect();
        let inv = elements.iter().map(|a| index[&a.inverse()]).collect();
        LocalTable { names, mult, inv }
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn invert(&self, a: usize) -> usize {
        self.inv[a]
    }
}

/// One syllable: a vertex together with a nontrivial element index of its
/// vertex group.
pub type Syllable = (usize, usize);

/// A graph product of finite groups presented symbolically: vertex groups
/// commute along the edges of the defining graph.
#[derive(Debug, Clone)]
pub struct SymbolicGroup {
    vertex_names: Vec<String>,
    adjacent: Vec<Vec<bool>>,
    locals: Vec<LocalTable>,
}

impl SymbolicGroup {
    pub fn new(
        vertex_names: Vec<String>,
        edges: &[(usize, usize)],
        locals: Vec<LocalTable>,
    ) -> Result<SymbolicGroup> {
        let n = vertex_names.len();
        if locals.len() != n {
            return Err(Error::InvalidInput(
                "one local table required per vertex".into(),
            ));
        }
        for (s, table) in locals.iter().enumerate() {
            if table.order() < 2 {
                return Err(Error::TrivialVertexGroup(vertex_names[s].clone()));
            }
        }
        let mut adjacent = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidInput(format!("bad edge ({a}, {b})")));
            }
            adjacent[a][b] = true;
            adjacent[b][a] = true;
        }
        Ok(SymbolicGroup { vertex_names, adjacent, locals })
    }

    /// Right-angled Coxeter group of a graph: every vertex group is C2.
    pub fn racg(vertex_names: Vec<String>, edges: &[(usize, usize)]) -> Result<SymbolicGroup> {
        let locals = vertex_names
            .iter()
            .map(|n| LocalTable::involution(n))
            .collect();
        SymbolicGroup::new(vertex_names, edges, locals)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_name(&self, s: usize) -> &str {
        &self.vertex_names[s]
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertex_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn local(&self, s: usize) -> &LocalTable {
        &self.locals[s]
    }

    pub fn commute(&self, s: usize, t: usize) -> bool {
        s != t && self.adjacent[s][t]
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertex_count();
        (0..n).all(|a| (a + 1..n).all(|b| self.adjacent[a][b]))
    }

    fn check_syllables(&self, word: &[Syllable]) -> Result<()> {
        for &(s, e) in word {
            if s >= self.vertex_count() {
                return Err(Error::UnknownGenerator(format!("vertex {s}")));
            }
            if e == 0 || e >= self.locals[s].order() {
                return Err(Error::UnknownGenerator(format!(
                    "element {e} of vertex group {}",
                    self.vertex_names[s]
                )));
            }
        }
        Ok(())
    }

    /// The unique normal form: merge and cancel whatever can be shuffled
    /// together, then take the lexicographically least shuffle.
    pub fn normal_form(&self, word: &[Syllable]) -> Result<Vec<Syllable>> {
        self.check_syllables(word)?;
        let mut w: Vec<Syllable> = word.to_vec();
        // merge pass: two same-vertex syllables merge as soon as every
        // syllable between them commutes with that vertex
        'merge: loop {
            for i in 0..w.len() {
                'next_j: for j in i + 1..w.len() {
                    let v = w[j].0;
                    for k in i + 1..j {
                        if !self.commute(w[k].0, v) {
                            continue 'next_j;
                        }
                    }
                    if v == w[i].0 {
                        let merged = self.locals[v].multiply(w[i].1, w[j].1);
                        w.remove(j);
                        if merged == 0 {
                            w.remove(i);
                        } else {
                            w[i].1 = merged;
                        }
                        continue 'merge;
                    }
                }
            }
            break;
        }
        // lexicographically least shuffle: repeatedly emit the smallest
        // syllable that commutes with everything before it
        let mut out = Vec::with_capacity(w.len());
        let mut rest: VecDeque<Syllable> = w.into();
        while !rest.is_empty() {
            let mut best: Option<usize> = None;
            for k in 0..rest.len() {
                let movable = (0..k).all(|i| self.commute(rest[i].0, rest[k].0));
                if movable {
                    match best {
                        None => best = Some(k),
                        Some(b) if rest[k] < rest[b] => best = Some(k),
                        _ => {}
                    }
                }
            }
            let k = best.expect("the first syllable is always movable");
            out.push(rest.remove(k).expect("index in range"));
        }
        Ok(out)
    }

    pub fn multiply(&self, a: &[Syllable], b: &[Syllable]) -> Result<Vec<Syllable>> {
        let mut w = a.to_vec();
        w.extend_from_slice(b);
        self.normal_form(&w)
    }

    pub fn invert(&self, a: &[Syllable]) -> Result<Vec<Syllable>> {
        let w: Vec<Syllable> = a
            .iter()
            .rev()
            .map(|&(s, e)| (s, self.locals[s].invert(e)))
            .collect();
        self.normal_form(&w)
    }

    /// All elements whose normal form has at most `radius` syllables.
    pub fn ball(&self, radius: usize) -> Vec<Vec<Syllable>> {
        let mut seen: BTreeSet<Vec<Syllable>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<Syllable>> = VecDeque::new();
        seen.insert(vec![]);
        queue.push_back(vec![]);
        while let Some(w) = queue.pop_front() {
            for s in 0..self.vertex_count() {
                for e in 1..self.locals[s].order() {
                    let next = self
                        .multiply(&w, &[(s, e)])
                        .expect("syllables are valid");
                    if next.len() <= radius && seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        let mut out: Vec<Vec<Syllable>> = seen.into_iter().collect();
        out.sort_by(|a, b| shortlex(a, b));
        out
    }

    /// Elements of the spherical (clique) subgroup on the given vertices,
    /// each already in normal form.
    pub fn spherical_elements(&self, clique: &BTreeSet<usize>) -> Vec<Vec<Syllable>> {
        let verts: Vec<usize> = clique.iter().copied().collect();
        let mut out: Vec<Vec<Syllable>> = vec![vec![]];
        for &s in &verts {
            let mut next = Vec::new();
            for w in &out {
                for e in 0..self.locals[s].order() {
                    let mut nw = w.clone();
                    if e > 0 {
                        nw.push((s, e));
                    }
                    next.push(nw);
                }
            }
            out = next;
        }
        // vertices ascend inside each word, which is the normal form for
        // a clique
        out.sort_by(|a, b| shortlex(a, b));
        out
    }

    /// Shortlex-minimal representative of the coset `g * <clique>`.
    pub fn coset_representative(
        &self,
        g: &[Syllable],
        clique: &BTreeSet<usize>,
    ) -> Result<Vec<Syllable>> {
        let mut best: Option<Vec<Syllable>> = None;
        for p in self.spherical_elements(clique) {
            let candidate = self.multiply(g, &p)?;
            match &best {
                None => best = Some(candidate),
                Some(b) if shortlex(&candidate, b) == std::cmp::Ordering::Less => {
                    best = Some(candidate)
                }
                _ => {}
            }
        }
        Ok(best.expect("spherical subgroup contains the identity"))
    }

    pub fn word_display(&self, w: &[Syllable]) -> String {
        if w.is_empty() {
            return "e".to_string();
        }
        w.iter()
            .map(|&(s, e)| {
                if self.locals[s].order() == 2 {
                    self.vertex_names[s].clone()
                } else {
                    format!("{}:{}", self.vertex_names[s], e)
                }
            })
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Shortlex order on syllable words: length first, then lexicographic.
pub fn shortlex(a: &[Syllable], b: &[Syllable]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_racg() -> SymbolicGroup {
        SymbolicGroup::racg(vec!["s1".into(), "s2".into()], &[(0, 1)]).unwrap()
    }

    fn two_gen_free_racg() -> SymbolicGroup {
        SymbolicGroup::racg(vec!["a".into(), "b".into()], &[]).unwrap()
    }

    #[test]
    fn involutions_cancel() {
        let g = two_gen_free_racg();
        assert_eq!(g.normal_form(&[(0, 1), (0, 1)]).unwrap(), vec![]);
        assert_eq!(g.normal_form(&[]).unwrap(), vec![]);
    }

    #[test]
    fn commuting_generators_merge_across() {
        // s1 s2 s1 = s2 when s1 and s2 commute
        let g = edge_racg();
        let w = g.normal_form(&[(0, 1), (1, 1), (0, 1)]).unwrap();
        assert_eq!(w, vec![(1, 1)]);
        // oracle: multiply in the explicit C2 x C2 permutation model
        let p1 = Perm::from_cycles(4, &[vec![0, 1]]).unwrap();
        let p2 = Perm::from_cycles(4, &[vec![2, 3]]).unwrap();
        let image = p1.compose(&p2).compose(&p1);
        assert_eq!(image, p2);
    }

    #[test]
    fn normal_form_is_idempotent_and_canonical() {
        let g = two_gen_free_racg();
        let w = g.normal_form(&[(1, 1), (0, 1), (1, 1)]).unwrap();
        assert_eq!(g.normal_form(&w).unwrap(), w);
        assert_eq!(w.len(), 3);
        // left-greedy: the least shuffle puts commuting smaller vertices first
        let h = SymbolicGroup::racg(
            vec!["a".into(), "b".into(), "c".into()],
            &[(0, 1), (1, 2)],
        )
        .unwrap();
        // c b a: b,c commute and a,b commute but a,c do not
        let w = h.normal_form(&[(2, 1), (1, 1), (0, 1)]).unwrap();
        assert_eq!(w, vec![(1, 1), (2, 1), (0, 1)]);
    }

    #[test]
    fn infinite_dihedral_ball_sizes() {
        let g = two_gen_free_racg();
        // alternating words: 1 + 2r elements of length <= r
        for r in 0..5 {
            assert_eq!(g.ball(r).len(), 1 + 2 * r);
        }
    }

    #[test]
    fn finite_racg_ball_saturates() {
        let g = edge_racg();
        assert_eq!(g.ball(2).len(), 4);
        assert_eq!(g.ball(5).len(), 4);
    }

    #[test]
    fn mixed_graph_product_orders() {
        // edge with C2 and C3: the direct product of order 6
        let c3 = {
            let mut gens = BTreeMap::new();
            gens.insert("r".to_string(), Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap());
            LocalTable::from_permutations(3, &gens)
        };
        let g = SymbolicGroup::new(
            vec!["a".into(), "b".into()],
            &[(0, 1)],
            vec![LocalTable::involution("a"), c3],
        )
        .unwrap();
        assert_eq!(g.ball(2).len(), 6);
        let clique: BTreeSet<usize> = [0usize, 1].into_iter().collect();
        assert_eq!(g.spherical_elements(&clique).len(), 6);
    }

    #[test]
    fn coset_representatives_in_infinite_dihedral() {
        let g = two_gen_free_racg();
        let clique: BTreeSet<usize> = [0usize].into_iter().collect();
        // coset (b a) <a>: contains b a and b; representative is b
        let rep = g.coset_representative(&[(1, 1), (0, 1)], &clique).unwrap();
        assert_eq!(rep, vec![(1, 1)]);
        let rep = g.coset_representative(&[], &clique).unwrap();
        assert_eq!(rep, vec![]);
    }

    /// Exhaustive agreement with the explicit permutation model on the
    /// C2 x C2 x C2 triangle product: every pair of ball elements
    /// multiplies compatibly.
    #[test]
    fn symbolic_multiplication_agrees_with_permutations() {
        let g = SymbolicGroup::racg(
            vec!["x".into(), "y".into(), "z".into()],
            &[(0, 1), (0, 2), (1, 2)],
        )
        .unwrap();
        let perms = [
            Perm::from_cycles(6, &[vec![0, 1]]).unwrap(),
            Perm::from_cycles(6, &[vec![2, 3]]).unwrap(),
            Perm::from_cycles(6, &[vec![4, 5]]).unwrap(),
        ];
        let to_perm = |w: &[Syllable]| -> Perm {
            w.iter().fold(Perm::identity(6), |acc, &(s, _)| acc.compose(&perms[s]))
        };
        let ball = g.ball(3);
        assert_eq!(ball.len(), 8);
        for a in &ball {
            for b in &ball {
                let prod = g.multiply(a, b).unwrap();
                assert_eq!(to_perm(&prod), to_perm(a).compose(&to_perm(b)));
                // normal forms are unique: same permutation implies same word
                for c in &ball {
                    if to_perm(c) == to_perm(&prod) {
                        assert_eq!(c, &prod);
                    }
                }
            }
        }
    }
}
