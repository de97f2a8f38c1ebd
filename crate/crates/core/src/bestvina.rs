//! Acyclic hulls and the inductive construction of the Bestvina complex,
//! its dimension formula, and the tree construction with an explicit
//! embedding into the standard complex when the dimension is at most one.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::cw::CwComplex;
use crate::error::Error;
use crate::homology::HomologySummary;
use crate::matrix::ExactMatrix;
use crate::panel::PanelComplex;
use crate::poset::Poset;
use crate::ring::{Ring, Scalar};
use crate::snf::smith_normal_form;
use crate::Result;

/// One cell attached by the hull algorithm, boundary given by face names.
#[derive(Debug, Clone, Serialize)]
pub struct AttachedCell {
    pub dim: usize,
    pub name: String,
    pub boundary: Vec<(String, String)>,
}

/// Per-element record of the Bestvina build.
#[derive(Debug, Clone, Serialize)]
pub struct BestvinaStep {
    pub element: String,
    pub union_cell_counts: Vec<usize>,
    /// Reduced cohomology of the upper-panel union, degrees -1..=dim.
    pub union_cohomology: Vec<HomologySummary>,
    pub hull_dimension: usize,
    /// Chain-level hulls of dimension two carry no contractibility
    /// certificate, only acyclicity.
    pub geometric_uncertified: bool,
    pub attached: Vec<AttachedCell>,
}

/// Audit trail of a Bestvina build.
#[derive(Debug, Clone, Serialize)]
pub struct BestvinaTrace {
    pub ring: Ring,
    pub steps: Vec<BestvinaStep>,
}

/// Minimal generating set of reduced homology `H~_k(x; ring)`, returned as
/// integer cycles. Generators are read off a Smith normal form of the
/// boundary pair, in divisibility order, so the output is deterministic.
fn homology_generators(
    x: &CwComplex,
    k: i64,
    ring: Ring,
) -> Result<Vec<Vec<(usize, BigInt)>>> {
    if k == -1 {
        // the empty complex has H~_{-1} = R, killed by a single vertex
        return Ok(if x.is_empty() { vec![vec![]] } else { vec![] });
    }
    let k = k as usize;
    let n = x.count(k);
    if n == 0 {
        return Ok(vec![]);
    }
    let d_out = if k == 0 {
        let mut aug = ExactMatrix::zero(Ring::Integers, 1, n);
        for j in 0..n {
            aug.set(0, j, Ring::Integers.one());
        }
        aug
    } else {
        x.boundary_matrix(k)
    };
    let d_in = x.boundary_matrix(k + 1);

    let snf_out = smith_normal_form(&d_out);
    let diag_len = d_out.rows().min(d_out.cols());
    let ring_unit = |v: &Scalar| v.inv().is_some();
    // positions of the kernel basis of d_out over the ring
    let kernel_positions: Vec<usize> = (0..n)
        .filter(|&i| {
            if i >= diag_len {
                true
            } else {
                ring.from_int(&big_at(&snf_out.d, i, i)).is_zero()
            }
        })
        .collect();
    if kernel_positions.is_empty() {
        return Ok(vec![]);
    }
    // coordinates of the incoming image in the kernel basis; rows outside
    // the kernel positions vanish because boundaries are cycles
    let coords = snf_out.v_inv.mul(&d_in)?;
    let mut reduced = ExactMatrix::zero(Ring::Integers, kernel_positions.len(), d_in.cols());
    for (r, &pos) in kernel_positions.iter().enumerate() {
        for c in 0..d_in.cols() {
            reduced.set(r, c, coords.get(pos, c).clone());
        }
    }
    let snf_in = smith_normal_form(&reduced);
    let inner_diag = reduced.rows().min(reduced.cols());
    let mut generators = Vec::new();
    for i in 0..kernel_positions.len() {
        let factor = if i < inner_diag { big_at(&snf_in.d, i, i) } else { BigInt::from(0) };
        if ring_unit(&ring.from_int(&factor)) {
            continue;
        }
        // generator = kernel_basis * (column i of U1^{-1})
        let coeffs = snf_in.u_inv.column(i);
        let mut gen: Vec<BigInt> = vec![BigInt::from(0); n];
        for (slot, coeff) in coeffs.iter().enumerate() {
            let Scalar::Int(c) = coeff else { unreachable!() };
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            let basis_col = snf_out.v.column(kernel_positions[slot]);
            for (row, b) in basis_col.iter().enumerate() {
                let Scalar::Int(bv) = b else { unreachable!() };
                gen[row] += c * bv;
            }
        }
        let sparse: Vec<(usize, BigInt)> = gen
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !num_traits::Zero::is_zero(v))
            .collect();
        generators.push(sparse);
    }
    Ok(generators)
}

fn big_at(m: &ExactMatrix, i: usize, j: usize) -> BigInt {
    match m.get(i, j) {
        Scalar::Int(v) => v.clone(),
        _ => unreachable!("integer matrix"),
    }
}

/// Runs the hull loop in place: for k = -1, 0, ... attach (k+1)-cells along
/// a minimal generating set of `H~_k` until the complex is acyclic over
/// `ring`. New cells carry `label` and names prefixed by `prefix`.
fn acyclic_hull_in_place(
    x: &mut CwComplex,
    ring: Ring,
    label: Option<usize>,
    prefix: &str,
) -> Result<Vec<AttachedCell>> {
    let input_dim = x.dim().map_or(-1, |d| d as i64);
    let mut attached = Vec::new();
    let mut k: i64 = -1;
    loop {
        let top = x.dim().map_or(-1, |d| d as i64);
        if k > top {
            break;
        }
        if k > input_dim + 1 {
            return Err(Error::ExtensionFailed(format!(
                "hull exceeded dimension {} over {ring}",
                input_dim + 1
            )));
        }
        let generators = homology_generators(x, k, ring)?;
        for gen in generators {
            let dim = (k + 1) as usize;
            let name = format!("{prefix}d{dim}n{}", attached.len());
            let boundary_names: Vec<(String, String)> = gen
                .iter()
                .map(|&(i, ref c)| (x.cell(dim - 1, i).name.clone(), c.to_string()))
                .collect();
            x.add_cell(dim, name.clone(), label, gen)?;
            attached.push(AttachedCell { dim, name, boundary: boundary_names });
        }
        k += 1;
    }
    if !x.is_acyclic(ring)? {
        return Err(Error::ExtensionFailed(format!(
            "hull failed to become acyclic over {ring}"
        )));
    }
    Ok(attached)
}

/// Embeds `l` into an `R`-acyclic complex of the smallest possible
/// dimension: `dim l` when the top reduced cohomology over `R` vanishes,
/// `dim l + 1` otherwise. The input sits inside the output with unchanged
/// cell indices.
pub fn acyclic_hull(l: &CwComplex, ring: Ring) -> Result<(CwComplex, Vec<AttachedCell>)> {
    let mut x = l.clone();
    let attached = acyclic_hull_in_place(&mut x, ring, None, "hull:")?;
    Ok((x, attached))
}

fn expected_hull_dim(union: &CwComplex, ring: Ring) -> Result<usize> {
    match union.dim() {
        None => Ok(0),
        Some(n) => {
            let top = union.chain_complex()?.cohomology(n as i64, ring, true)?;
            Ok(if top.is_trivial() { n } else { n + 1 })
        }
    }
}

/// Builds the Bestvina complex over `ring`: processing elements in reverse
/// linear extension, each maximal element receives a point and every other
/// element receives the acyclic hull of the union of the strictly higher
/// panels, new cells tagged with the element. The result satisfies the
/// panel axioms and has `R`-acyclic panels.
pub fn build_bestvina(q: Arc<Poset>, ring: Ring) -> Result<(PanelComplex, BestvinaTrace)> {
    if q.is_empty() {
        return Err(Error::InvalidInput("empty poset".into()));
    }
    let mut b = CwComplex::new();
    let mut steps = Vec::new();
    for &j in &q.reverse_linear_extension() {
        // the union of the strictly higher panels: cells tagged > j
        let (union, mut local_to_global) = sub_by_label(&b, |l| q.lt(j, l));
        let union_counts = union.cell_counts();
        let union_cohomology = union.chain_complex()?.reduced_cohomology_all(ring)?;
        let expected = expected_hull_dim(&union, ring)?;

        let mut local = union;
        let before_counts: Vec<usize> = local_to_global.iter().map(Vec::len).collect();
        let attached = acyclic_hull_in_place(
            &mut local,
            ring,
            Some(j),
            &format!("B[{}]", q.label(j)),
        )?;
        let hull_dim = local.dim().map_or(0, |d| d);
        if hull_dim != expected {
            return Err(Error::ExtensionFailed(format!(
                "hull at {} reached dimension {hull_dim}, dimension formula gives {expected}",
                q.label(j)
            )));
        }
        // replay the new cells onto the global complex
        let mut local_seen: Vec<usize> = before_counts.clone();
        for cell in &attached {
            let dim = cell.dim;
            while local_to_global.len() <= dim {
                local_to_global.push(Vec::new());
                local_seen.push(0);
            }
            let local_idx = local_seen[dim];
            local_seen[dim] += 1;
            let local_cell = local.cell(dim, local_idx).clone();
            let boundary: Vec<(usize, BigInt)> = local_cell
                .boundary
                .iter()
                .map(|&(f, ref c)| (local_to_global[dim - 1][f], c.clone()))
                .collect();
            let gi = b.add_cell(dim, local_cell.name, Some(j), boundary)?;
            local_to_global[dim].push(gi);
        }
        steps.push(BestvinaStep {
            element: q.label(j).to_string(),
            union_cell_counts: union_counts,
            union_cohomology,
            hull_dimension: hull_dim,
            geometric_uncertified: hull_dim == 2,
            attached,
        });
    }
    let pc = PanelComplex::from_labeled_complex(q, b)?;
    let report = pc.validate();
    if !report.is_valid() {
        return Err(Error::InvalidInput(format!(
            "built complex violates panel axioms: {report}"
        )));
    }
    for j in 0..pc.poset().len() {
        if !pc.panel(j).is_acyclic(ring)? {
            return Err(Error::ExtensionFailed(format!(
                "panel {} is not acyclic over {ring}",
                pc.poset().label(j)
            )));
        }
    }
    Ok((pc, BestvinaTrace { ring, steps }))
}

/// Standalone copy of the cells whose label satisfies the predicate,
/// together with per-dimension maps from new indices to original ones.
fn sub_by_label(
    b: &CwComplex,
    include: impl Fn(usize) -> bool,
) -> (CwComplex, Vec<Vec<usize>>) {
    let mut out = CwComplex::new();
    let dims = b.cell_counts().len();
    let mut to_global: Vec<Vec<usize>> = vec![Vec::new(); dims];
    let mut to_local: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); dims];
    for k in 0..dims {
        for (i, cell) in b.cells(k).iter().enumerate() {
            let Some(l) = cell.label else { continue };
            if !include(l) {
                continue;
            }
            let boundary = cell
                .boundary
                .iter()
                .map(|&(f, ref c)| (to_local[k - 1][&f], c.clone()))
                .collect();
            let ni = out
                .add_cell(k, cell.name.clone(), cell.label, boundary)
                .expect("label subcomplexes are closed");
            to_local[k].insert(i, ni);
            to_global[k].push(i);
        }
    }
    (out, to_global)
}

/// How the dimension of the Bestvina complex relates to the formula value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Dichotomy {
    /// The geometric complex attains exactly this dimension.
    Exact(usize),
    /// Formula value 2 over the integers: the geometric complex has
    /// dimension 2 or 3, and chain-level builds attain 2.
    TwoOrThree,
}

/// Output of the dimension formula.
#[derive(Debug, Clone, Serialize)]
pub struct BestvinaDimension {
    pub d: usize,
    pub dichotomy: Dichotomy,
    /// For each element, the top `n` with nonvanishing reduced
    /// `H^{n-1}` of its strict link in the standard complex; `None` when
    /// the link is fully acyclic.
    pub per_element: BTreeMap<String, Option<i64>>,
}

/// `d = max { n : H~^{n-1}(K_{>J}; R) != 0 }`, clamped at 0, evaluated on
/// the standard complex. Over the integers the value 2 is reported as the
/// dichotomy `TwoOrThree`; over a field or the rationals the value is
/// always exact.
pub fn bestvina_dimension(q: Arc<Poset>, ring: Ring) -> Result<BestvinaDimension> {
    let k = PanelComplex::standard(q.clone())?;
    bestvina_dimension_on(&k, ring)
}

/// Same as [`bestvina_dimension`] but reusing an already built standard
/// complex.
pub fn bestvina_dimension_on(k: &PanelComplex, ring: Ring) -> Result<BestvinaDimension> {
    let q = k.poset();
    let mut d = 0usize;
    let mut per_element = BTreeMap::new();
    for j in 0..q.len() {
        let link = k.strict_upper_union(j).to_complex().0;
        let cohomology = link.chain_complex()?.reduced_cohomology_all(ring)?;
        let top_nonzero = cohomology
            .iter()
            .rev()
            .find(|h| !h.is_trivial())
            .map(|h| h.degree + 1);
        per_element.insert(q.label(j).to_string(), top_nonzero);
        if let Some(n) = top_nonzero {
            d = d.max(n.max(0) as usize);
        }
    }
    let dichotomy = if ring == Ring::Integers && d == 2 {
        Dichotomy::TwoOrThree
    } else {
        Dichotomy::Exact(d)
    };
    Ok(BestvinaDimension { d, dichotomy, per_element })
}

/// Injective panel map of the tree Bestvina complex into the standard
/// complex: per-dimension maps from tree cell indices to `K` cell indices.
#[derive(Debug, Clone, Serialize)]
pub struct TreeEmbedding {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

/// Builds the Bestvina complex by the explicit tree recipe, valid when the
/// dimension formula gives at most 1 over the integers: whenever the union
/// of the strictly higher panels is empty or disconnected, a new vertex is
/// added and joined to the smallest vertex of every connected component;
/// a connected union is reused as the panel unchanged. Returns the tree
/// together with a panel-preserving embedding into the standard complex
/// sending each added vertex to the cone vertex of its element.
pub fn tree_bestvina(q: Arc<Poset>) -> Result<(PanelComplex, TreeEmbedding)> {
    let dims = bestvina_dimension(q.clone(), Ring::Integers)?;
    if dims.d > 1 {
        return Err(Error::DimensionTooLarge(dims.d));
    }
    let mut b = CwComplex::new();
    // vertex_element[i] = poset element whose cone vertex carries B vertex i
    let mut vertex_element: Vec<usize> = Vec::new();
    // edge_chain[i] = (j, t) with j < t, the K edge carrying B edge i
    let mut edge_chain: Vec<(usize, usize)> = Vec::new();
    for &j in &q.reverse_linear_extension() {
        let upper: Vec<usize> = (0..b.count(0))
            .filter(|&v| b.cell(0, v).label.map(|l| q.lt(j, l)).unwrap_or(false))
            .collect();
        if upper.is_empty() {
            let v = b.add_cell(0, format!("v[{}]", q.label(j)), Some(j), vec![])?;
            debug_assert_eq!(v, vertex_element.len());
            vertex_element.push(j);
            continue;
        }
        let components = vertex_components(&b, &upper, |l| q.lt(j, l));
        if components.len() == 1 {
            // already a tree; reuse it as the panel
            continue;
        }
        let v = b.add_cell(0, format!("v[{}]", q.label(j)), Some(j), vec![])?;
        debug_assert_eq!(v, vertex_element.len());
        vertex_element.push(j);
        for comp in components {
            let rep = *comp.iter().min().expect("nonempty component");
            let e = b.add_cell(
                1,
                format!("e[{}--{}]", q.label(j), b.cell(0, rep).name),
                Some(j),
                vec![(v, BigInt::from(-1)), (rep, BigInt::from(1))],
            )?;
            debug_assert_eq!(e, edge_chain.len());
            edge_chain.push((j, vertex_element[rep]));
        }
    }
    let pc = PanelComplex::from_labeled_complex(q.clone(), b)?;

    // The embedding: vertex v[T] -> vertex T of K, edge (v[J], v[T]) ->
    // the K edge J < T.
    let k = PanelComplex::standard(q.clone())?;
    let chains = q.chains();
    let vertex_map = vertex_element.clone();
    let mut edge_map = Vec::new();
    for &(j, t) in &edge_chain {
        let idx = chains[1]
            .iter()
            .position(|c| c == &vec![j, t])
            .ok_or_else(|| Error::InvalidInput("embedding edge missing in K".into()))?;
        edge_map.push(idx);
    }
    let embedding = TreeEmbedding { vertex_map, edge_map };
    verify_tree_embedding(&pc, &k, &embedding)?;
    Ok((pc, embedding))
}

fn vertex_components(
    b: &CwComplex,
    vertices: &[usize],
    include: impl Fn(usize) -> bool,
) -> Vec<Vec<usize>> {
    let mut parent: BTreeMap<usize, usize> = vertices.iter().map(|&v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<usize, usize>, v: usize) -> usize {
        let p = parent[&v];
        if p == v {
            v
        } else {
            let r = find(parent, p);
            parent.insert(v, r);
            r
        }
    }
    for cell in b.cells(1) {
        let Some(l) = cell.label else { continue };
        if !include(l) {
            continue;
        }
        let ends: Vec<usize> = cell.boundary.iter().map(|&(v, _)| v).collect();
        if let [a, b2] = ends.as_slice() {
            let ra = find(&mut parent, *a);
            let rb = find(&mut parent, *b2);
            if ra != rb {
                parent.insert(ra, rb);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in vertices {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}

fn verify_tree_embedding(
    b: &PanelComplex,
    k: &PanelComplex,
    emb: &TreeEmbedding,
) -> Result<()> {
    // injectivity on cells
    let mut seen = std::collections::BTreeSet::new();
    for &v in &emb.vertex_map {
        if !seen.insert(v) {
            return Err(Error::InvalidInput("tree embedding not injective".into()));
        }
    }
    let mut seen_e = std::collections::BTreeSet::new();
    for &e in &emb.edge_map {
        if !seen_e.insert(e) {
            return Err(Error::InvalidInput("tree embedding not injective".into()));
        }
    }
    // panel preservation and per-panel acyclicity on both sides
    for j in 0..b.poset().len() {
        for &v in b.panel(j).members(0) {
            if !k.panel(j).contains(0, emb.vertex_map[v]) {
                return Err(Error::InvalidInput(format!(
                    "tree embedding leaves panel {}",
                    b.poset().label(j)
                )));
            }
        }
        for &e in b.panel(j).members(1) {
            if !k.panel(j).contains(1, emb.edge_map[e]) {
                return Err(Error::InvalidInput(format!(
                    "tree embedding leaves panel {}",
                    b.poset().label(j)
                )));
            }
        }
        if !b.panel(j).is_acyclic(Ring::Integers)? || !k.panel(j).is_acyclic(Ring::Integers)? {
            return Err(Error::ExtensionFailed(format!(
                "panel {} is not acyclic",
                b.poset().label(j)
            )));
        }
    }
    Ok(())
}
