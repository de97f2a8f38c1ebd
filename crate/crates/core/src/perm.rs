//! Permutations on a finite point set and the finite groups they generate.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::Error;
use crate::Result;

/// A permutation in one-line notation: `p.apply(i) = images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm { images: (0..degree).collect() }
    }

    pub fn new(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidInput(format!(
                    "not a permutation: {images:?}"
                )));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                if a >= degree || b >= degree {
                    return Err(Error::InvalidInput(format!(
                        "cycle point out of range: {cycle:?}"
                    )));
                }
                images[a] = b;
            }
        }
        Perm::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self * other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm {
            images: (0..self.degree()).map(|i| self.apply(other.apply(i))).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Perm { images }
    }

    pub fn one_line(&self) -> &[usize] {
        &self.images
    }
}

impl std::fmt::Display for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let strs: Vec<String> = self.images.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", strs.join(","))
    }
}

/// A finite permutation group with named generators; elements are
/// enumerated on demand and cached.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: BTreeMap<String, Perm>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: BTreeMap<String, Perm>) -> Result<PermGroup> {
        for p in generators.values() {
            if p.degree() != degree {
                return Err(Error::InvalidInput(format!(
                    "generator degree {} does not match group degree {degree}",
                    p.degree()
                )));
            }
        }
        Ok(PermGroup { degree, generators })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generator(&self, name: &str) -> Result<&Perm> {
        self.generators
            .get(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.generators.keys().map(String::as_str).collect()
    }

    pub fn generators(&self) -> &BTreeMap<String, Perm> {
        &self.generators
    }

    /// All group elements by breadth-first closure.
    pub fn elements(&self) -> BTreeSet<Perm> {
        close_under_products(self.degree, self.generators.values().cloned())
    }

    pub fn order(&self) -> usize {
        self.elements().len()
    }

    /// Elements of the subgroup generated by the named generators.
    pub fn subgroup_elements(&self, names: &[String]) -> Result<BTreeSet<Perm>> {
        let gens: Vec<Perm> = names
            .iter()
            .map(|n| self.generator(n).cloned())
            .collect::<Result<_>>()?;
        Ok(close_under_products(self.degree, gens))
    }
}

/// Closure of a generating set under products; inverses come for free in
/// a finite group.
pub fn close_under_products(
    degree: usize,
    generators: impl IntoIterator<Item = Perm>,
) -> BTreeSet<Perm> {
    let gens: Vec<Perm> = generators.into_iter().collect();
    let mut elements = BTreeSet::new();
    let mut queue = VecDeque::new();
    let id = Perm::identity(degree);
    elements.insert(id.clone());
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        for gen in &gens {
            let h = gen.compose(&g);
            if elements.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    elements
}
