//! Panel complexes over a finite poset: the standard complex `K`, the
//! panel axioms, and chain maps / chain homotopies between panel complexes
//! with acyclic panels.
//!
//! Panel membership follows the provenance rule throughout: a cell created
//! at step `U` belongs to the panel of `J` exactly when `J <= U`. For the
//! standard complex the provenance of a chain is its minimum element, so
//! the rule reproduces `K_J = |Q_{>=J}|`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::cw::{CwComplex, Subcomplex};
use crate::error::Error;
use crate::matrix::ExactMatrix;
use crate::poset::Poset;
use crate::ring::{Ring, Scalar};
use crate::snf::{smith_normal_form, Snf};
use crate::Result;

/// A complex together with its panels, one closed subcomplex per poset
/// element.
#[derive(Debug, Clone)]
pub struct PanelComplex {
    poset: Arc<Poset>,
    complex: Arc<CwComplex>,
    panels: Vec<Subcomplex>,
}

impl PanelComplex {
    /// Wraps a fully labelled complex, deriving panels from provenance:
    /// `cell in panel(J) <=> J <= label(cell)`.
    pub fn from_labeled_complex(poset: Arc<Poset>, complex: CwComplex) -> Result<PanelComplex> {
        let complex = Arc::new(complex);
        let mut panels = Vec::with_capacity(poset.len());
        for j in 0..poset.len() {
            panels.push(panel_of(&poset, &complex, |l| poset.leq(j, l))?);
        }
        Ok(PanelComplex { poset, complex, panels })
    }

    /// The standard complex `K = |Q|` with `K_J = |Q_{>=J}|`, including the
    /// verification that each panel is the cone with apex `J` over the
    /// union of the strictly higher panels.
    pub fn standard(poset: Arc<Poset>) -> Result<PanelComplex> {
        let complex = poset.order_complex();
        let pc = PanelComplex::from_labeled_complex(poset, complex)?;
        pc.verify_cone_recursion()?;
        Ok(pc)
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn complex(&self) -> &Arc<CwComplex> {
        &self.complex
    }

    pub fn panel(&self, j: usize) -> &Subcomplex {
        &self.panels[j]
    }

    /// The union of all panels strictly above `j`; by the provenance rule
    /// these are exactly the cells with label `> j`.
    pub fn strict_upper_union(&self, j: usize) -> Subcomplex {
        panel_of(&self.poset, &self.complex, |l| self.poset.lt(j, l))
            .expect("labels already verified")
    }

    /// Checks the three panel axioms, reporting every violation.
    pub fn validate(&self) -> PanelReport {
        let mut report = PanelReport::default();
        let n = self.poset.len();
        // (1) the complex is the union of its panels
        let mut union = Subcomplex::empty(self.complex.clone());
        for p in &self.panels {
            union = union.union(p).expect("same parent");
        }
        if union != Subcomplex::full(self.complex.clone()) {
            for dim in 0..self.complex.cell_counts().len() {
                for i in 0..self.complex.count(dim) {
                    if !union.contains(dim, i) {
                        report.union_violations.push(format!(
                            "cell {} (dim {dim}) lies in no panel",
                            self.complex.cell(dim, i).name
                        ));
                    }
                }
            }
        }
        // (2) nesting
        for j in 0..n {
            for t in 0..n {
                if self.poset.leq(j, t)
                    && !self.panels[t].is_subset_of(&self.panels[j]).expect("same parent")
                {
                    report.nesting_violations.push(format!(
                        "panel({}) not contained in panel({})",
                        self.poset.label(t),
                        self.poset.label(j)
                    ));
                }
            }
        }
        // (3) nonempty pairwise intersections are unions of panels
        for j in 0..n {
            for t in j + 1..n {
                let inter = match self.panels[j].intersection(&self.panels[t]) {
                    Ok(i) => i,
                    Err(_) => {
                        report.intersection_violations.push(format!(
                            "panel({}) * panel({}) is not closed",
                            self.poset.label(j),
                            self.poset.label(t)
                        ));
                        continue;
                    }
                };
                if inter.is_empty() {
                    continue;
                }
                let mut covered = Subcomplex::empty(self.complex.clone());
                for u in 0..n {
                    if self.panels[u].is_subset_of(&inter).expect("same parent") {
                        covered = covered.union(&self.panels[u]).expect("same parent");
                    }
                }
                if covered != inter {
                    report.intersection_violations.push(format!(
                        "panel({}) * panel({}) is not a union of panels",
                        self.poset.label(j),
                        self.poset.label(t)
                    ));
                }
            }
        }
        report
    }

    /// Confirms the cone recursion of the standard complex: for every `J`,
    /// `panel(J)` equals the cone with apex the vertex `J` over the union
    /// of the strictly higher panels, cell for cell and sign for sign.
    pub fn verify_cone_recursion(&self) -> Result<()> {
        let chains = self.poset.chains();
        let mut chain_index: Vec<BTreeMap<Vec<usize>, usize>> = Vec::new();
        for cells in &chains {
            chain_index.push(cells.iter().cloned().zip(0..).collect());
        }
        for j in 0..self.poset.len() {
            let upper = self.strict_upper_union(j);
            let (upper_cx, maps) = upper.to_complex();
            let cone = upper_cx.cone(self.poset.label(j), Some(j));

            // canonical bijection: base cells keep their parent chain, the
            // apex is the vertex chain [j], the cone over a base cell with
            // chain c is the chain [j] + c.
            let top = cone.cell_counts().len();
            let mut to_parent: Vec<Vec<usize>> = vec![Vec::new(); top];
            for (k, map) in maps.iter().enumerate() {
                for &parent in map {
                    to_parent[k].push(parent);
                }
            }
            to_parent[0].push(j); // apex
            for (k, map) in maps.iter().enumerate() {
                for &parent in map {
                    let mut chain = chains[k][parent].clone();
                    chain.insert(0, j);
                    let idx = chain_index[k + 1]
                        .get(&chain)
                        .copied()
                        .ok_or_else(|| Error::InvalidInput(format!(
                            "cone recursion: chain missing for panel {}",
                            self.poset.label(j)
                        )))?;
                    to_parent[k + 1].push(idx);
                }
            }

            // cell counts must match the panel exactly
            let panel = self.panel(j);
            let panel_counts = panel.cell_counts();
            let cone_counts = cone.cell_counts();
            if panel_counts != cone_counts {
                return Err(Error::InvalidInput(format!(
                    "cone recursion: panel({}) has counts {:?}, cone has {:?}",
                    self.poset.label(j),
                    panel_counts,
                    cone_counts
                )));
            }
            for (k, m) in to_parent.iter().enumerate() {
                for (i, &parent) in m.iter().enumerate() {
                    if !panel.contains(k, parent) {
                        return Err(Error::InvalidInput(format!(
                            "cone recursion: image cell outside panel({})",
                            self.poset.label(j)
                        )));
                    }
                    // boundaries agree under the bijection
                    let mut mapped: Vec<(usize, BigInt)> = cone
                        .cell(k, i)
                        .boundary
                        .iter()
                        .map(|&(f, ref c)| (to_parent[k - 1][f], c.clone()))
                        .collect();
                    mapped.sort_by_key(|&(f, _)| f);
                    let expected = &self.complex.cell(k, parent).boundary;
                    if &mapped != expected {
                        return Err(Error::InvalidInput(format!(
                            "cone recursion: boundary mismatch at {} in panel({})",
                            self.complex.cell(k, parent).name,
                            self.poset.label(j)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Per-dimension multiset of provenance labels; the rank ledger of the
    /// free resolution carried by the complex.
    pub fn stabiliser_census(&self) -> Result<Vec<Vec<String>>> {
        let top = match self.complex.dim() {
            None => return Ok(vec![]),
            Some(t) => t,
        };
        let mut census = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let mut labels = Vec::new();
            for cell in self.complex.cells(k) {
                let l = cell
                    .label
                    .ok_or_else(|| Error::MissingProvenance(cell.name.clone()))?;
                labels.push(self.poset.label(l).to_string());
            }
            labels.sort();
            census.push(labels);
        }
        Ok(census)
    }
}

fn panel_of(
    poset: &Arc<Poset>,
    complex: &Arc<CwComplex>,
    include: impl Fn(usize) -> bool,
) -> Result<Subcomplex> {
    let counts = complex.cell_counts();
    let mut members = Vec::with_capacity(counts.len());
    for dim in 0..counts.len() {
        let mut set = std::collections::BTreeSet::new();
        for (i, cell) in complex.cells(dim).iter().enumerate() {
            let label = cell
                .label
                .ok_or_else(|| Error::MissingProvenance(cell.name.clone()))?;
            if label >= poset.len() {
                return Err(Error::UnknownElement(format!("label {label}")));
            }
            if include(label) {
                set.insert(i);
            }
        }
        members.push(set);
    }
    Subcomplex::from_cells(complex.clone(), members)
}

/// Validation report for the three panel axioms.
#[derive(Debug, Clone, Default)]
pub struct PanelReport {
    pub union_violations: Vec<String>,
    pub nesting_violations: Vec<String>,
    pub intersection_violations: Vec<String>,
}

impl PanelReport {
    pub fn is_valid(&self) -> bool {
        self.union_violations.is_empty()
            && self.nesting_violations.is_empty()
            && self.intersection_violations.is_empty()
    }

    pub fn violations(&self) -> Vec<String> {
        let mut all = Vec::new();
        all.extend(self.union_violations.iter().cloned());
        all.extend(self.nesting_violations.iter().cloned());
        all.extend(self.intersection_violations.iter().cloned());
        all
    }
}

impl fmt::Display for PanelReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "panel axioms hold")
        } else {
            write!(f, "{}", self.violations().join("; "))
        }
    }
}

/// Solver for `d x = rhs` restricted to a panel, factored once through the
/// integer Smith normal form and then solved over any of the three rings.
struct PanelSolver {
    rows: Vec<usize>,
    cols: Vec<usize>,
    u: ExactMatrix,
    v: ExactMatrix,
    diag: Vec<BigInt>,
}

impl PanelSolver {
    fn new(boundary: &ExactMatrix, rows: Vec<usize>, cols: Vec<usize>, ring: Ring) -> PanelSolver {
        let sub = boundary.submatrix(&rows, &cols);
        let snf = smith_normal_form(&sub);
        let Snf { u, v, d, .. } = snf;
        let k = d.rows().min(d.cols());
        let diag = (0..k)
            .map(|i| match d.get(i, i) {
                Scalar::Int(v) => v.clone(),
                _ => unreachable!(),
            })
            .collect();
        PanelSolver {
            rows,
            cols,
            u: u.cast(ring).expect("integer matrix casts"),
            v: v.cast(ring).expect("integer matrix casts"),
            diag,
        }
    }

    /// Solves for a full-length rhs supported on the panel; returns a
    /// solution vector of length `full_cols` supported on the panel.
    fn solve(&self, rhs: &[Scalar], ring: Ring, full_cols: usize) -> Option<Vec<Scalar>> {
        // any rhs support outside the panel is a contract violation
        let mut in_rows = vec![false; rhs.len()];
        for &i in &self.rows {
            in_rows[i] = true;
        }
        for (i, s) in rhs.iter().enumerate() {
            if !s.is_zero() && !in_rows[i] {
                return None;
            }
        }
        let restricted: Vec<Scalar> = self.rows.iter().map(|&i| rhs[i].clone()).collect();
        let uv = self.u.mul_vec(&restricted).expect("shapes agree");
        let mut y = vec![ring.zero(); self.cols.len()];
        for (i, uvi) in uv.iter().enumerate() {
            let d_ring = self
                .diag
                .get(i)
                .map(|d| ring.from_int(d))
                .unwrap_or_else(|| ring.zero());
            if d_ring.is_zero() {
                if !uvi.is_zero() {
                    return None;
                }
            } else {
                y[i] = uvi.div_exact(&d_ring)?;
            }
        }
        let x_sub = self.v.mul_vec(&y).expect("shapes agree");
        let mut result = vec![ring.zero(); full_cols];
        for (slot, &col) in self.cols.iter().enumerate() {
            result[col] = x_sub[slot].clone();
        }
        Some(result)
    }
}

/// Per-degree matrices of a chain map between two complexes; index `k`
/// maps `C_k(X) -> C_k(Y)`.
pub type ChainMap = Vec<ExactMatrix>;

fn zero_maps(ring: Ring, x: &CwComplex, y: &CwComplex, top: usize) -> ChainMap {
    (0..=top)
        .map(|k| ExactMatrix::zero(ring, y.count(k), x.count(k)))
        .collect()
}

/// Builds a panel chain map `C_*(X; R) -> C_*(Y; R)`: each cell of `X`
/// created at step `J` is sent into the panel `Y_J`, extending over panels
/// in reverse linear extension order and over cell dimension within one
/// panel. Requires every panel of `Y` to be `R`-acyclic.
pub fn panel_chain_map(x: &PanelComplex, y: &PanelComplex, ring: Ring) -> Result<ChainMap> {
    if x.poset() != y.poset() && **x.poset() != **y.poset() {
        return Err(Error::InvalidInput(
            "panel chain maps require complexes over the same poset".into(),
        ));
    }
    for j in 0..y.poset().len() {
        if !y.panel(j).is_acyclic(ring)? {
            return Err(Error::TargetPanelNotAcyclic(y.poset().label(j).to_string()));
        }
    }
    build_chain_map(x, y, ring)
}

fn build_chain_map(x: &PanelComplex, y: &PanelComplex, ring: Ring) -> Result<ChainMap> {
    let top = x.complex().dim().map_or(0, |t| t);
    let mut f = zero_maps(ring, x.complex(), y.complex(), top);
    let y_boundaries: Vec<ExactMatrix> = (0..=y.complex().dim().map_or(0, |t| t) + 1)
        .map(|k| y.complex().boundary_matrix(k))
        .collect();
    let mut solvers: BTreeMap<(usize, usize), PanelSolver> = BTreeMap::new();

    for &j in &x.poset().reverse_linear_extension() {
        for k in 0..=top {
            for (ci, cell) in x.complex().cells(k).iter().enumerate() {
                let label = cell
                    .label
                    .ok_or_else(|| Error::MissingProvenance(cell.name.clone()))?;
                if label != j {
                    continue;
                }
                let image = if k == 0 {
                    // send a vertex to the canonical basepoint of the panel
                    let target = y.panel(j).min_vertex().ok_or_else(|| {
                        Error::ExtensionFailed(cell.name.clone())
                    })?;
                    let mut col = vec![ring.zero(); y.complex().count(0)];
                    col[target] = ring.one();
                    col
                } else {
                    // rhs = f(d c), a cycle inside the target panel
                    let mut rhs = vec![ring.zero(); y.complex().count(k - 1)];
                    for &(face, ref coef) in &cell.boundary {
                        let col = f[k - 1].column(face);
                        let c = ring.from_int(coef);
                        for (r, v) in col.iter().enumerate() {
                            if !v.is_zero() {
                                rhs[r] = rhs[r].add(&c.mul(v));
                            }
                        }
                    }
                    let solver = solvers.entry((j, k)).or_insert_with(|| {
                        let rows: Vec<usize> =
                            y.panel(j).members(k - 1).iter().copied().collect();
                        let cols: Vec<usize> = y.panel(j).members(k).iter().copied().collect();
                        PanelSolver::new(&y_boundaries[k], rows, cols, ring)
                    });
                    solver
                        .solve(&rhs, ring, y.complex().count(k))
                        .ok_or_else(|| Error::ExtensionFailed(cell.name.clone()))?
                };
                f[k].set_column(ci, &image);
            }
        }
    }
    Ok(f)
}

/// Builds a panel chain homotopy `psi` on `X` with
/// `d psi + psi d = h` degreewise, where `h` is a panel-preserving chain
/// self-map of `X` (typically a composite minus the identity). Requires
/// every panel of `X` to be `R`-acyclic.
pub fn panel_chain_homotopy(x: &PanelComplex, h: &[ExactMatrix], ring: Ring) -> Result<ChainMap> {
    for j in 0..x.poset().len() {
        if !x.panel(j).is_acyclic(ring)? {
            return Err(Error::TargetPanelNotAcyclic(x.poset().label(j).to_string()));
        }
    }
    let top = x.complex().dim().map_or(0, |t| t);
    // psi[k] : C_k(X) -> C_{k+1}(X)
    let mut psi: Vec<ExactMatrix> = (0..=top)
        .map(|k| ExactMatrix::zero(ring, x.complex().count(k + 1), x.complex().count(k)))
        .collect();
    let boundaries: Vec<ExactMatrix> = (0..=top + 1)
        .map(|k| x.complex().boundary_matrix(k))
        .collect();
    let mut solvers: BTreeMap<(usize, usize), PanelSolver> = BTreeMap::new();

    for &j in &x.poset().reverse_linear_extension() {
        for k in 0..=top {
            for (ci, cell) in x.complex().cells(k).iter().enumerate() {
                let label = cell
                    .label
                    .ok_or_else(|| Error::MissingProvenance(cell.name.clone()))?;
                if label != j {
                    continue;
                }
                // rhs = h(c) - psi(d c)
                let mut rhs: Vec<Scalar> = h
                    .get(k)
                    .map(|m| m.column(ci))
                    .unwrap_or_else(|| vec![ring.zero(); x.complex().count(k)]);
                for &(face, ref coef) in &cell.boundary {
                    let col = psi[k - 1].column(face);
                    let c = ring.from_int(coef).neg();
                    for (r, v) in col.iter().enumerate() {
                        if !v.is_zero() {
                            rhs[r] = rhs[r].add(&c.mul(v));
                        }
                    }
                }
                let solver = solvers.entry((j, k + 1)).or_insert_with(|| {
                    let rows: Vec<usize> = x.panel(j).members(k).iter().copied().collect();
                    let cols: Vec<usize> = x.panel(j).members(k + 1).iter().copied().collect();
                    PanelSolver::new(&boundaries[k + 1], rows, cols, ring)
                });
                let sol = solver
                    .solve(&rhs, ring, x.complex().count(k + 1))
                    .ok_or_else(|| Error::ExtensionFailed(cell.name.clone()))?;
                psi[k].set_column(ci, &sol);
            }
        }
    }
    Ok(psi)
}

/// Explicit chain maps and chain homotopies realising the homotopy
/// equivalence `K ~ B`: `f : C_*(B) -> C_*(K)`, `g : C_*(K) -> C_*(B)`,
/// with `f g - id = d psi + psi d` on `K` and `g f - id = d phi + phi d`
/// on `B`.
#[derive(Debug, Clone)]
pub struct PanelChainEquivalence {
    pub ring: Ring,
    pub f: ChainMap,
    pub g: ChainMap,
    pub psi: ChainMap,
    pub phi: ChainMap,
}

/// Builds the equivalence pack between two panel complexes with
/// `R`-acyclic panels over the same poset.
pub fn panel_equivalence(
    k_pc: &PanelComplex,
    b_pc: &PanelComplex,
    ring: Ring,
) -> Result<PanelChainEquivalence> {
    let f = panel_chain_map(b_pc, k_pc, ring)?;
    let g = panel_chain_map(k_pc, b_pc, ring)?;
    let top_k = k_pc.complex().dim().map_or(0, |t| t);
    let top_b = b_pc.complex().dim().map_or(0, |t| t);
    // h = f g - id on K
    let mut h_k = Vec::new();
    for k in 0..=top_k {
        let n = k_pc.complex().count(k);
        let fg = compose_at(&f, &g, k, ring, n, n)?;
        h_k.push(fg.sub(&ExactMatrix::identity(ring, n))?);
    }
    let psi = panel_chain_homotopy(k_pc, &h_k, ring)?;
    // h = g f - id on B
    let mut h_b = Vec::new();
    for k in 0..=top_b {
        let n = b_pc.complex().count(k);
        let gf = compose_at(&g, &f, k, ring, n, n)?;
        h_b.push(gf.sub(&ExactMatrix::identity(ring, n))?);
    }
    let phi = panel_chain_homotopy(b_pc, &h_b, ring)?;
    Ok(PanelChainEquivalence { ring, f, g, psi, phi })
}

fn compose_at(
    outer: &ChainMap,
    inner: &ChainMap,
    k: usize,
    ring: Ring,
    rows: usize,
    cols: usize,
) -> Result<ExactMatrix> {
    match (outer.get(k), inner.get(k)) {
        (Some(o), Some(i)) => o.mul(i),
        _ => Ok(ExactMatrix::zero(ring, rows, cols)),
    }
}

impl PanelChainEquivalence {
    /// Verifies all four matrix identities exactly, plus the panel
    /// restriction of every map and homotopy.
    pub fn verify(&self, k_pc: &PanelComplex, b_pc: &PanelComplex) -> Result<()> {
        verify_chain_map(&self.f, b_pc, k_pc, self.ring, "f")?;
        verify_chain_map(&self.g, k_pc, b_pc, self.ring, "g")?;
        verify_homotopy(&self.f, &self.g, &self.psi, k_pc, self.ring, "psi")?;
        verify_homotopy(&self.g, &self.f, &self.phi, b_pc, self.ring, "phi")?;
        verify_panel_support(&self.f, b_pc, k_pc, "f")?;
        verify_panel_support(&self.g, k_pc, b_pc, "g")?;
        verify_homotopy_support(&self.psi, k_pc, "psi")?;
        verify_homotopy_support(&self.phi, b_pc, "phi")?;
        Ok(())
    }
}

/// `d_Y f_k = f_{k-1} d_X` for every degree.
fn verify_chain_map(
    f: &ChainMap,
    x: &PanelComplex,
    y: &PanelComplex,
    ring: Ring,
    name: &str,
) -> Result<()> {
    let top = x.complex().dim().map_or(0, |t| t);
    for k in 1..=top {
        let dx = x.complex().boundary_matrix(k).cast(ring)?;
        let dy = y.complex().boundary_matrix(k).cast(ring)?;
        let lhs = dy.mul(&f[k])?;
        let rhs = f[k - 1].mul(&dx)?;
        if lhs != rhs {
            return Err(Error::InvalidInput(format!(
                "{name} is not a chain map in degree {k}"
            )));
        }
    }
    Ok(())
}

/// `outer inner - id = d psi + psi d` on the complex carrying `psi`.
fn verify_homotopy(
    outer: &ChainMap,
    inner: &ChainMap,
    psi: &ChainMap,
    x: &PanelComplex,
    ring: Ring,
    name: &str,
) -> Result<()> {
    let top = x.complex().dim().map_or(0, |t| t);
    for k in 0..=top {
        let n = x.complex().count(k);
        let comp = compose_at(outer, inner, k, ring, n, n)?;
        let lhs = comp.sub(&ExactMatrix::identity(ring, n))?;
        let d_above = x.complex().boundary_matrix(k + 1).cast(ring)?;
        let mut rhs = d_above.mul(&psi[k])?;
        if k > 0 {
            let d_here = x.complex().boundary_matrix(k).cast(ring)?;
            rhs = rhs.add(&psi[k - 1].mul(&d_here)?)?;
        }
        if lhs != rhs {
            return Err(Error::InvalidInput(format!(
                "{name} fails the homotopy identity in degree {k}"
            )));
        }
    }
    Ok(())
}

/// Columns indexed by cells of `X_J` must be supported inside `Y_J`.
fn verify_panel_support(
    f: &ChainMap,
    x: &PanelComplex,
    y: &PanelComplex,
    name: &str,
) -> Result<()> {
    let top = x.complex().dim().map_or(0, |t| t);
    for j in 0..x.poset().len() {
        for k in 0..=top {
            for &ci in x.panel(j).members(k) {
                for r in 0..f[k].rows() {
                    if !f[k].get(r, ci).is_zero() && !y.panel(j).contains(k, r) {
                        return Err(Error::InvalidInput(format!(
                            "{name} leaves panel {} in degree {k}",
                            x.poset().label(j)
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

fn verify_homotopy_support(psi: &ChainMap, x: &PanelComplex, name: &str) -> Result<()> {
    let top = x.complex().dim().map_or(0, |t| t);
    for j in 0..x.poset().len() {
        for k in 0..=top {
            for &ci in x.panel(j).members(k) {
                for r in 0..psi[k].rows() {
                    if !psi[k].get(r, ci).is_zero() && !x.panel(j).contains(k + 1, r) {
                        return Err(Error::InvalidInput(format!(
                            "{name} leaves panel {} in degree {k}",
                            x.poset().label(j)
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Reduced homology of the mapping cone of `f : C_*(X) -> C_*(Y)`; the
/// cone is acyclic exactly when `f` induces isomorphisms on all homology,
/// which is the quasi-isomorphism check used by the verification suite.
pub fn mapping_cone_is_acyclic(
    f: &ChainMap,
    x: &PanelComplex,
    y: &PanelComplex,
    ring: Ring,
) -> Result<bool> {
    let top_x = x.complex().dim().map_or(0, |t| t);
    let top_y = y.complex().dim().map_or(0, |t| t);
    let top = top_x.max(top_y) + 1;
    // Cone_k = X_{k-1} (+) Y_k with d(a, b) = (-d a, f a + d b).
    let count_x = |k: usize| x.complex().count(k);
    let count_y = |k: usize| y.complex().count(k);
    let sizes: Vec<usize> = (0..=top)
        .map(|k| (if k > 0 { count_x(k - 1) } else { 0 }) + count_y(k))
        .collect();
    let mut d = Vec::new();
    for k in 1..=top {
        let (rows, cols) = (sizes[k - 1], sizes[k]);
        let mut m = ExactMatrix::zero(ring, rows, cols);
        let x_off_col = 0;
        let y_off_col = if k > 0 { count_x(k - 1) } else { 0 };
        let x_off_row = 0;
        let y_off_row = if k > 1 { count_x(k - 2) } else { 0 };
        // -d_X block: X_{k-1} -> X_{k-2}
        if k > 1 {
            let dx = x.complex().boundary_matrix(k - 1).cast(ring)?;
            for i in 0..dx.rows() {
                for jj in 0..dx.cols() {
                    let v = dx.get(i, jj);
                    if !v.is_zero() {
                        m.set(x_off_row + i, x_off_col + jj, v.neg());
                    }
                }
            }
        }
        // f block: X_{k-1} -> Y_{k-1}
        if k >= 1 {
            if let Some(fk) = f.get(k - 1) {
                for i in 0..fk.rows() {
                    for jj in 0..fk.cols() {
                        let v = fk.get(i, jj);
                        if !v.is_zero() {
                            m.set(y_off_row + i, x_off_col + jj, v.clone());
                        }
                    }
                }
            }
        }
        // d_Y block
        let dy = y.complex().boundary_matrix(k).cast(ring)?;
        for i in 0..dy.rows() {
            for jj in 0..dy.cols() {
                let v = dy.get(i, jj);
                if !v.is_zero() {
                    m.set(y_off_row + i, y_off_col + jj, v.clone());
                }
            }
        }
        d.push(m);
    }
    let cone = crate::homology::ChainComplex::new(ring, sizes, d)?;
    // unreduced homology: the cone is not augmentable, and vanishing of
    // every H_k already encodes the isomorphism on unreduced homology
    for k in 0..=top as i64 {
        if !cone.homology(k, ring, false)?.is_trivial() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn arc(p: Poset) -> Arc<Poset> {
        Arc::new(p)
    }

    #[test]
    fn standard_hexagon_counts() {
        let q = arc(corpus::hexagon_poset());
        let k = PanelComplex::standard(q.clone()).unwrap();
        assert_eq!(k.complex().cell_counts(), vec![26, 85, 96, 36]);
        // panel of the bottom element is the whole complex
        let bottom = q.minimum().unwrap();
        assert_eq!(k.panel(bottom), &Subcomplex::full(k.complex().clone()));
        assert!(k.validate().is_valid());
    }

    #[test]
    fn standard_two_branch_poset_is_path() {
        // {} < a, {} < b realises a path a -- {} -- b
        let q = arc(Poset::new(
            vec!["{}".into(), "a".into(), "b".into()],
            &[(0, 1), (0, 2)],
        )
        .unwrap());
        let k = PanelComplex::standard(q.clone()).unwrap();
        assert_eq!(k.complex().cell_counts(), vec![3, 2]);
        let a = q.index_of("a").unwrap();
        assert_eq!(k.panel(a).cell_counts(), vec![1]);
        assert_eq!(k.panel(a).min_vertex(), Some(a));
    }

    #[test]
    fn standard_singleton_is_point() {
        let q = arc(Poset::new(vec!["x".into()], &[]).unwrap());
        let k = PanelComplex::standard(q).unwrap();
        assert_eq!(k.complex().cell_counts(), vec![1]);
    }

    #[test]
    fn panels_match_upset_order_complexes() {
        // panel(J) equals order_complex(upset(Q, J, false)) cell for cell
        let q = arc(corpus::vertex_edge_poset());
        let k = PanelComplex::standard(q.clone()).unwrap();
        for j in 0..q.len() {
            let (sub, _) = q.upset(j, false).unwrap();
            let oc = sub.order_complex();
            assert_eq!(k.panel(j).cell_counts(), oc.cell_counts(), "panel {j}");
        }
    }

    #[test]
    fn hexagon_disjoint_panels() {
        let q = arc(corpus::hexagon_poset());
        let k = PanelComplex::standard(q.clone()).unwrap();
        let s3 = q.index_of("{s3}").unwrap();
        let s1s7 = q.index_of("{s1,s7}").unwrap();
        let inter = k.panel(s3).intersection(k.panel(s1s7)).unwrap();
        assert!(inter.is_empty());
        // two edge panels meeting in the triangle panel, a single vertex
        let s1s2 = q.index_of("{s1,s2}").unwrap();
        let tri = q.index_of("{s1,s2,s7}").unwrap();
        let both = k.panel(s1s2).intersection(k.panel(s1s7)).unwrap();
        assert_eq!(both, *k.panel(tri));
        assert_eq!(both.cell_counts(), vec![1]);
    }

    #[test]
    fn validation_flags_unlabelled_and_uncovered_cells() {
        // a complex with a cell whose label is outside every panel's reach
        let q = arc(Poset::new(vec!["a".into(), "b".into()], &[(0, 1)]).unwrap());
        let mut cx = CwComplex::new();
        cx.add_cell(0, "va".into(), Some(0), vec![]).unwrap();
        cx.add_cell(0, "stray".into(), None, vec![]).unwrap();
        let err = PanelComplex::from_labeled_complex(q, cx);
        assert!(matches!(err, Err(Error::MissingProvenance(_))));
    }

    fn two_branch_k_and_b() -> (PanelComplex, PanelComplex) {
        let q = arc(Poset::new(
            vec!["{}".into(), "a".into(), "b".into()],
            &[(0, 1), (0, 2)],
        )
        .unwrap());
        let k = PanelComplex::standard(q.clone()).unwrap();
        let mut b = CwComplex::new();
        b.add_cell(0, "va".into(), Some(1), vec![]).unwrap();
        b.add_cell(0, "vb".into(), Some(2), vec![]).unwrap();
        b.add_cell(1, "join".into(), Some(0), vec![(0, (-1).into()), (1, 1.into())])
            .unwrap();
        let b = PanelComplex::from_labeled_complex(q, b).unwrap();
        assert!(b.validate().is_valid());
        (k, b)
    }

    #[test]
    fn chain_map_identity_candidate() {
        let (k, _) = two_branch_k_and_b();
        for ring in [Ring::Integers, Ring::Rationals, Ring::PrimeField(2)] {
            let f = panel_chain_map(&k, &k, ring).unwrap();
            verify_chain_map(&f, &k, &k, ring, "f").unwrap();
            verify_panel_support(&f, &k, &k, "f").unwrap();
        }
    }

    #[test]
    fn equivalence_on_two_branch_example() {
        let (k, b) = two_branch_k_and_b();
        for ring in [Ring::Integers, Ring::Rationals, Ring::PrimeField(2)] {
            let eq = panel_equivalence(&k, &b, ring).unwrap();
            eq.verify(&k, &b).unwrap();
            assert!(mapping_cone_is_acyclic(&eq.f, &b, &k, ring).unwrap());
            assert!(mapping_cone_is_acyclic(&eq.g, &k, &b, ring).unwrap());
        }
    }

    #[test]
    fn equivalence_of_complex_with_itself() {
        let q = arc(corpus::vertex_edge_poset());
        let k = PanelComplex::standard(q).unwrap();
        let eq = panel_equivalence(&k, &k, Ring::Integers).unwrap();
        eq.verify(&k, &k).unwrap();
    }

    #[test]
    fn chain_map_requires_acyclic_targets() {
        // a panel complex whose bottom panel is a circle is rejected
        let q = arc(Poset::new(vec!["o".into()], &[]).unwrap());
        let mut cx = CwComplex::new();
        for n in ["p", "q", "r"] {
            cx.add_cell(0, n.into(), Some(0), vec![]).unwrap();
        }
        cx.add_cell(1, "pq".into(), Some(0), vec![(0, (-1).into()), (1, 1.into())]).unwrap();
        cx.add_cell(1, "qr".into(), Some(0), vec![(1, (-1).into()), (2, 1.into())]).unwrap();
        cx.add_cell(1, "rp".into(), Some(0), vec![(2, (-1).into()), (0, 1.into())]).unwrap();
        let circle = PanelComplex::from_labeled_complex(q.clone(), cx).unwrap();
        let point = PanelComplex::standard(q).unwrap();
        let err = panel_chain_map(&point, &circle, Ring::Integers);
        assert!(matches!(err, Err(Error::TargetPanelNotAcyclic(_))));
    }

    #[test]
    fn census_of_standard_complex() {
        let q = arc(corpus::simplex_poset(1));
        let k = PanelComplex::standard(q).unwrap();
        let census = k.stabiliser_census().unwrap();
        // chains of length 3 in the edge poset all start at the bottom
        assert_eq!(census[2], vec!["{}".to_string(), "{}".to_string()]);
    }
}
