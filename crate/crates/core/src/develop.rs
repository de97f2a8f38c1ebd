//! The basic construction: developing a panel complex along a simple
//! complex of finite groups, either in full (explicit finite ambient
//! group) or truncated to a word-length ball (symbolic ambient group).
//!
//! Cells of the development are pairs (coset representative, base cell);
//! the stabiliser of `[g, x]` is the conjugate by `g` of the local group
//! at the provenance element of `x`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::cw::{CwComplex, Subcomplex};
use crate::error::Error;
use crate::panel::PanelComplex;
use crate::perm::Perm;
use crate::scog::{GroupModel, Scog};
use crate::word::{shortlex, Syllable, SymbolicGroup};
use crate::Result;

/// How far to develop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Full,
    Radius(usize),
}

/// Coset representative naming one copy of the fundamental domain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum CosetRep {
    Perm(Perm),
    Word(Vec<Syllable>),
}

/// One cell of the development.
#[derive(Debug, Clone)]
pub struct DevCell {
    pub rep: CosetRep,
    /// index of the base cell in its dimension of the panel complex
    pub base: usize,
    /// provenance element of the base cell (the stabiliser type)
    pub stabiliser: usize,
}

/// A development `D(X, G(Q))`, fully or radius-truncated.
#[derive(Debug, Clone)]
pub struct Development {
    bound: Bound,
    complex: CwComplex,
    cells: Vec<Vec<DevCell>>,
    /// generator name -> per-dimension partial cell maps (`None` where the
    /// image leaves the truncation)
    action: BTreeMap<String, Vec<Vec<Option<usize>>>>,
}

impl Development {
    pub fn bound(&self) -> Bound {
        self.bound
    }

    pub fn complex(&self) -> &CwComplex {
        &self.complex
    }

    pub fn cells(&self, dim: usize) -> &[DevCell] {
        self.cells.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.complex.cell_counts()
    }

    pub fn action(&self) -> &BTreeMap<String, Vec<Vec<Option<usize>>>> {
        &self.action
    }
}

/// Develops a panel complex along a simple complex of groups.
///
/// `Full` requires an explicit finite ambient model and checks the strict
/// fundamental domain property; `Radius(r)` requires a symbolic ambient
/// group and keeps the cosets whose shortlex-minimal representative has at
/// most `r` syllables.
pub fn develop(x: &PanelComplex, s: &Scog, bound: Bound) -> Result<Development> {
    if x.poset() != s.poset() && **x.poset() != **s.poset() {
        return Err(Error::InvalidInput(
            "development requires the panel complex and group data to share a poset".into(),
        ));
    }
    match bound {
        Bound::Full => develop_full(x, s),
        Bound::Radius(r) => develop_truncated(x, s, r),
    }
}

fn develop_full(x: &PanelComplex, s: &Scog) -> Result<Development> {
    let (group, _) = match s.model() {
        GroupModel::Explicit { group, subgroup_generators } => (group, subgroup_generators),
        GroupModel::Symbolic { explicit: Some(boxed), .. } => {
            let (g, gens) = boxed.as_ref();
            (g, gens)
        }
        _ => return Err(Error::InfiniteGroupRequiresRadius),
    };
    let elements: Vec<Perm> = group.elements().into_iter().collect();
    let order = elements.len();
    // local subgroup elements per poset element
    let mut locals: Vec<BTreeSet<Perm>> = Vec::with_capacity(s.poset().len());
    for j in 0..s.poset().len() {
        locals.push(s.local_elements(j)?);
    }

    let rep_of = |g: &Perm, j: usize| -> Perm {
        locals[j]
            .iter()
            .map(|p| g.compose(p))
            .min()
            .expect("local groups contain the identity")
    };

    let top = x.complex().dim().map_or(0, |t| t);
    let mut cells: Vec<Vec<DevCell>> = Vec::with_capacity(top + 1);
    let mut index: Vec<BTreeMap<(usize, Perm), usize>> = Vec::with_capacity(top + 1);
    let mut complex = CwComplex::new();
    for dim in 0..=top {
        cells.push(Vec::new());
        index.push(BTreeMap::new());
        for (base, cell) in x.complex().cells(dim).iter().enumerate() {
            let j = cell
                .label
                .ok_or_else(|| Error::MissingProvenance(cell.name.clone()))?;
            let mut reps: BTreeSet<Perm> = BTreeSet::new();
            for g in &elements {
                reps.insert(rep_of(g, j));
            }
            // orbit-counting check: |G| / |P_J| cosets
            if reps.len() * locals[j].len() != order {
                return Err(Error::InvalidInput(format!(
                    "coset count mismatch at cell {}",
                    cell.name
                )));
            }
            for rep in reps {
                let boundary = cell
                    .boundary
                    .iter()
                    .map(|&(f, ref c)| {
                        let fj = x.complex().cell(dim - 1, f).label.expect("labels checked");
                        let frep = rep_of(&rep, fj);
                        (index[dim - 1][&(f, frep)], c.clone())
                    })
                    .collect::<Vec<(usize, BigInt)>>();
                let name = format!("[{}|{}]", rep, cell.name);
                let ni = complex.add_cell(dim, name, Some(j), boundary)?;
                debug_assert_eq!(ni, cells[dim].len());
                index[dim].insert((base, rep.clone()), ni);
                cells[dim].push(DevCell { rep: CosetRep::Perm(rep), base, stabiliser: j });
            }
        }
    }

    // strict fundamental domain: every orbit {cells with a fixed base}
    // meets the identity copy exactly once
    for dim in 0..=top {
        let mut identity_hits: BTreeMap<usize, usize> = BTreeMap::new();
        for cell in &cells[dim] {
            let CosetRep::Perm(p) = &cell.rep else { unreachable!() };
            let j = cell.stabiliser;
            if rep_of(&Perm::identity(group.degree()), j) == *p {
                *identity_hits.entry(cell.base).or_insert(0) += 1;
            }
        }
        for base in 0..x.complex().count(dim) {
            if identity_hits.get(&base) != Some(&1) {
                return Err(Error::InvalidInput(format!(
                    "strict fundamental domain violated at dimension {dim}, cell {base}"
                )));
            }
        }
    }

    // the action of each generator permutes the cells
    let mut action = BTreeMap::new();
    for name in group.generator_names() {
        let sigma = group.generator(name)?;
        let mut maps = Vec::with_capacity(top + 1);
        for (dim, dim_cells) in cells.iter().enumerate() {
            let mut m = Vec::with_capacity(dim_cells.len());
            for cell in dim_cells {
                let CosetRep::Perm(p) = &cell.rep else { unreachable!() };
                let moved = rep_of(&sigma.compose(p), cell.stabiliser);
                m.push(index[dim].get(&(cell.base, moved)).copied());
            }
            maps.push(m);
        }
        action.insert(name.to_string(), maps);
    }

    Ok(Development { bound: Bound::Full, complex, cells, action })
}

fn develop_truncated(x: &PanelComplex, s: &Scog, radius: usize) -> Result<Development> {
    let (group, spherical) = match s.model() {
        GroupModel::Symbolic { group, spherical, .. } => (group, spherical),
        _ => return Err(Error::RadiusRequiresNormalForms),
    };
    let ball = group.ball(radius);
    let top = x.complex().dim().map_or(0, |t| t);
    let mut cells: Vec<Vec<DevCell>> = Vec::with_capacity(top + 1);
    let mut index: Vec<BTreeMap<(usize, Vec<Syllable>), usize>> = Vec::with_capacity(top + 1);
    let mut complex = CwComplex::new();
    for dim in 0..=top {
        cells.push(Vec::new());
        index.push(BTreeMap::new());
        for (base, cell) in x.complex().cells(dim).iter().enumerate() {
            let j = cell
                .label
                .ok_or_else(|| Error::MissingProvenance(cell.name.clone()))?;
            let clique = &spherical[j];
            let mut reps: BTreeSet<Vec<Syllable>> = BTreeSet::new();
            for g in &ball {
                let rep = group.coset_representative(g, clique)?;
                if rep.len() <= radius {
                    reps.insert(rep);
                }
            }
            let mut sorted: Vec<Vec<Syllable>> = reps.into_iter().collect();
            sorted.sort_by(|a, b| shortlex(a, b));
            for rep in sorted {
                let boundary = cell
                    .boundary
                    .iter()
                    .map(|&(f, ref c)| -> Result<(usize, BigInt)> {
                        let fj = x.complex().cell(dim - 1, f).label.expect("labels checked");
                        let frep = group.coset_representative(&rep, &spherical[fj])?;
                        Ok((index[dim - 1][&(f, frep)], c.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let name = format!("[{}|{}]", group.word_display(&rep), cell.name);
                let ni = complex.add_cell(dim, name, Some(j), boundary)?;
                debug_assert_eq!(ni, cells[dim].len());
                index[dim].insert((base, rep.clone()), ni);
                cells[dim].push(DevCell { rep: CosetRep::Word(rep), base, stabiliser: j });
            }
        }
    }

    // partial generator action: one entry per vertex-group generator
    let mut action = BTreeMap::new();
    for v in 0..group.vertex_count() {
        for e in 1..group.local(v).order() {
            let gen_name = group.word_display(&[(v, e)]);
            let mut maps = Vec::with_capacity(top + 1);
            for (dim, dim_cells) in cells.iter().enumerate() {
                let mut m = Vec::with_capacity(dim_cells.len());
                for cell in dim_cells {
                    let CosetRep::Word(w) = &cell.rep else { unreachable!() };
                    let moved = group.multiply(&[(v, e)], w)?;
                    let rep = group.coset_representative(&moved, &spherical[cell.stabiliser])?;
                    m.push(index[dim].get(&(cell.base, rep)).copied());
                }
                maps.push(m);
            }
            action.insert(gen_name, maps);
        }
    }

    Ok(Development { bound: Bound::Radius(radius), complex, cells, action })
}

/// Cells of a full development fixed by the subgroup generated by the
/// given permutations: `[g, x]` is fixed exactly when `g^{-1} H g` lies in
/// the local group at the provenance of `x`. The result is a closed
/// subcomplex.
pub fn fixed_point_complex(
    d: &Development,
    s: &Scog,
    subgroup_gens: &[Perm],
) -> Result<Subcomplex> {
    if d.bound() != Bound::Full {
        return Err(Error::InfiniteGroupRequiresRadius);
    }
    let group = match s.model() {
        GroupModel::Explicit { group, .. } => group,
        GroupModel::Symbolic { explicit: Some(boxed), .. } => &boxed.as_ref().0,
        _ => return Err(Error::InfiniteGroupRequiresRadius),
    };
    let all = group.elements();
    for h in subgroup_gens {
        if !all.contains(h) {
            return Err(Error::NotASubgroup(h.to_string()));
        }
    }
    let mut locals: Vec<BTreeSet<Perm>> = Vec::with_capacity(s.poset().len());
    for j in 0..s.poset().len() {
        locals.push(s.local_elements(j)?);
    }
    let complex = std::sync::Arc::new(d.complex().clone());
    let mut members = Vec::new();
    for dim in 0..d.cell_counts().len() {
        let mut set = BTreeSet::new();
        for (i, cell) in d.cells(dim).iter().enumerate() {
            let CosetRep::Perm(g) = &cell.rep else { unreachable!() };
            let ginv = g.inverse();
            let fixed = subgroup_gens
                .iter()
                .all(|h| locals[cell.stabiliser].contains(&ginv.compose(h).compose(g)));
            if fixed {
                set.insert(i);
            }
        }
        members.push(set);
    }
    Subcomplex::from_cells(complex, members)
}
