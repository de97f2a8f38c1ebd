//! Homology and cohomology of finite chain complexes, with torsion over
//! the integers.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::Error;
use crate::matrix::ExactMatrix;
use crate::ring::Ring;
use crate::snf::smith_normal_form;
use crate::Result;

/// Betti number and invariant-factor torsion of a single (co)homology group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub degree: i64,
    pub betti: usize,
    /// Invariant factors > 1 in divisibility order; empty unless computed
    /// over the integers.
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: Vec<BigInt>,
}

fn serialize_torsion<S: serde::Serializer>(t: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(t.iter().map(|v| v.to_string()))
}

impl HomologySummary {
    pub fn zero(degree: i64) -> Self {
        HomologySummary { degree, betti: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

/// A finite chain complex `C_0 <- C_1 <- ... <- C_top`.
///
/// `d[k]` is the boundary map `C_{k+1} -> C_k`. The composition rule
/// `d_k . d_{k+1} = 0` is verified at construction.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    ring: Ring,
    sizes: Vec<usize>,
    d: Vec<ExactMatrix>,
}

impl ChainComplex {
    pub fn new(ring: Ring, sizes: Vec<usize>, d: Vec<ExactMatrix>) -> Result<Self> {
        if sizes.is_empty() {
            return Ok(ChainComplex { ring, sizes: vec![0], d: vec![] });
        }
        if d.len() + 1 != sizes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} degrees need {} boundary maps, got {}",
                sizes.len(),
                sizes.len() - 1,
                d.len()
            )));
        }
        for (k, m) in d.iter().enumerate() {
            if m.ring() != ring {
                return Err(Error::RingMismatch(ring.to_string(), m.ring().to_string()));
            }
            if m.rows() != sizes[k] || m.cols() != sizes[k + 1] {
                return Err(Error::DimensionMismatch(format!(
                    "boundary {} has shape {}x{}, expected {}x{}",
                    k + 1,
                    m.rows(),
                    m.cols(),
                    sizes[k],
                    sizes[k + 1]
                )));
            }
        }
        let cc = ChainComplex { ring, sizes, d };
        cc.check_composition()?;
        Ok(cc)
    }

    fn check_composition(&self) -> Result<()> {
        for k in 1..self.d.len() {
            if !self.d[k - 1].mul(&self.d[k]).expect("shapes checked").is_zero() {
                return Err(Error::NotAChainComplex { degree: k });
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn top_degree(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn size(&self, k: usize) -> usize {
        self.sizes.get(k).copied().unwrap_or(0)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn boundary(&self, k: usize) -> Option<&ExactMatrix> {
        // d_k : C_k -> C_{k-1}
        if k == 0 || k > self.d.len() {
            None
        } else {
            Some(&self.d[k - 1])
        }
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.iter().all(|&s| s == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.sizes
            .iter()
            .enumerate()
            .map(|(k, &s)| if k % 2 == 0 { s as i64 } else { -(s as i64) })
            .sum()
    }

    fn cast_boundary(&self, k: usize, ring: Ring) -> Result<ExactMatrix> {
        match self.boundary(k) {
            Some(m) => m.cast(ring),
            None => {
                let rows = if k == 0 { 0 } else { self.size(k - 1) };
                Ok(ExactMatrix::zero(ring, rows, self.size(k)))
            }
        }
    }

    fn coerce(&self, ring: Ring) -> Result<()> {
        if ring != self.ring && self.ring != Ring::Integers {
            return Err(Error::RingMismatch(self.ring.to_string(), ring.to_string()));
        }
        Ok(())
    }

    /// Homology in degree `k` over `ring`. Degree `-1` is meaningful for
    /// reduced homology: it is `R` exactly when the complex is empty.
    pub fn homology(&self, k: i64, ring: Ring, reduced: bool) -> Result<HomologySummary> {
        self.coerce(ring)?;
        if k < -1 || (k == -1 && !reduced) {
            return Ok(HomologySummary::zero(k));
        }
        if k == -1 {
            let betti = if self.is_empty() { 1 } else { 0 };
            return Ok(HomologySummary { degree: k, betti, torsion: Vec::new() });
        }
        let k = k as usize;
        if k > self.top_degree() {
            return Ok(HomologySummary::zero(k as i64));
        }
        let n = self.size(k);
        let d_out = if k == 0 && reduced {
            self.check_augmentable()?;
            self.augmentation(ring)
        } else {
            self.cast_boundary(k, ring)?
        };
        let d_in = self.cast_boundary(k + 1, ring)?;
        let (betti, torsion) = quotient_invariants(n, &d_out, &d_in, ring);
        Ok(HomologySummary { degree: k as i64, betti, torsion })
    }

    /// Cohomology in degree `k` over `ring`, computed from the transposed
    /// boundary maps.
    pub fn cohomology(&self, k: i64, ring: Ring, reduced: bool) -> Result<HomologySummary> {
        self.coerce(ring)?;
        if k < -1 || (k == -1 && !reduced) {
            return Ok(HomologySummary::zero(k));
        }
        if k == -1 {
            // kernel of the coaugmentation R -> C^0
            let betti = if self.is_empty() { 1 } else { 0 };
            return Ok(HomologySummary { degree: k, betti, torsion: Vec::new() });
        }
        let k = k as usize;
        if k > self.top_degree() {
            return Ok(HomologySummary::zero(k as i64));
        }
        let n = self.size(k);
        // delta^k = (d_{k+1})^T out of degree k, delta^{k-1} = (d_k)^T into it
        let d_out = self.cast_boundary(k + 1, ring)?.transpose();
        let d_in = if k == 0 {
            if reduced {
                self.check_augmentable()?;
                self.augmentation(ring).transpose()
            } else {
                ExactMatrix::zero(ring, n, 0)
            }
        } else {
            self.cast_boundary(k, ring)?.transpose()
        };
        let (betti, torsion) = quotient_invariants(n, &d_out, &d_in, ring);
        Ok(HomologySummary { degree: k as i64, betti, torsion })
    }

    /// Reduced homology in all degrees `-1..=top`.
    pub fn reduced_homology_all(&self, ring: Ring) -> Result<Vec<HomologySummary>> {
        (-1..=self.top_degree() as i64)
            .map(|k| self.homology(k, ring, true))
            .collect()
    }

    /// Reduced cohomology in all degrees `-1..=top`.
    pub fn reduced_cohomology_all(&self, ring: Ring) -> Result<Vec<HomologySummary>> {
        (-1..=self.top_degree() as i64)
            .map(|k| self.cohomology(k, ring, true))
            .collect()
    }

    /// True when every reduced homology group over `ring` vanishes.
    pub fn is_acyclic(&self, ring: Ring) -> Result<bool> {
        Ok(self
            .reduced_homology_all(ring)?
            .iter()
            .all(HomologySummary::is_trivial))
    }

    /// Reduced homology needs the augmentation to extend the complex:
    /// every boundary column must have coefficient sum zero.
    fn check_augmentable(&self) -> Result<()> {
        if let Some(d1) = self.boundary(1) {
            for j in 0..d1.cols() {
                let mut sum = self.ring.zero();
                for i in 0..d1.rows() {
                    sum = sum.add(d1.get(i, j));
                }
                if !sum.is_zero() {
                    return Err(Error::NotAChainComplex { degree: 0 });
                }
            }
        }
        Ok(())
    }

    fn augmentation(&self, ring: Ring) -> ExactMatrix {
        let n = self.size(0);
        let mut m = ExactMatrix::zero(ring, if n == 0 { 0 } else { 1 }, n);
        for j in 0..n {
            m.set(0, j, ring.one());
        }
        m
    }
}

/// Betti number and torsion of `ker(d_out) / im(d_in)` in a free module of
/// rank `n`. Requires `d_out . d_in = 0`.
fn quotient_invariants(
    n: usize,
    d_out: &ExactMatrix,
    d_in: &ExactMatrix,
    ring: Ring,
) -> (usize, Vec<BigInt>) {
    debug_assert_eq!(d_out.cols(), n);
    debug_assert_eq!(d_in.rows(), n);
    let rank_out = d_out.rank();
    let rank_in = d_in.rank();
    let betti = n - rank_out - rank_in;
    let torsion = if ring == Ring::Integers {
        smith_normal_form(d_in)
            .invariant_factors()
            .into_iter()
            .filter(|f| !f.is_one())
            .collect()
    } else {
        Vec::new()
    };
    (betti, torsion)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> ChainComplex {
        // triangle: 3 vertices, 3 edges a->b, b->c, c->a
        let d1 = ExactMatrix::from_rows_i64(
            Ring::Integers,
            &[vec![-1, 0, 1], vec![1, -1, 0], vec![0, 1, -1]],
        );
        ChainComplex::new(Ring::Integers, vec![3, 3], vec![d1]).unwrap()
    }

    fn sphere() -> ChainComplex {
        // boundary of the tetrahedron on vertices 0..4
        let vertices = 4usize;
        let edges: Vec<(usize, usize)> =
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let faces: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        let mut d1 = ExactMatrix::zero(Ring::Integers, vertices, edges.len());
        for (j, &(a, b)) in edges.iter().enumerate() {
            d1.set(a, j, Ring::Integers.from_int(&BigInt::from(-1)));
            d1.set(b, j, Ring::Integers.from_int(&BigInt::from(1)));
        }
        let mut d2 = ExactMatrix::zero(Ring::Integers, edges.len(), faces.len());
        for (j, f) in faces.iter().enumerate() {
            // faces of [a,b,c]: [b,c] - [a,c] + [a,b]
            let sub = [(f[1], f[2], 1), (f[0], f[2], -1), (f[0], f[1], 1)];
            for &(a, b, sgn) in &sub {
                let e = edges.iter().position(|&x| x == (a, b)).unwrap();
                d2.set(e, j, Ring::Integers.from_int(&BigInt::from(sgn)));
            }
        }
        ChainComplex::new(Ring::Integers, vec![4, 6, 4], vec![d1, d2]).unwrap()
    }

    /// 6-vertex triangulation of the projective plane (antipodal quotient of
    /// the icosahedron): 6 vertices, all 15 edges of K6, 10 triangles.
    pub(crate) fn projective_plane() -> ChainComplex {
        let faces: [[usize; 3]; 10] = [
            [0, 1, 4],
            [0, 1, 5],
            [0, 2, 3],
            [0, 2, 5],
            [0, 3, 4],
            [1, 2, 3],
            [1, 2, 4],
            [1, 3, 5],
            [2, 4, 5],
            [3, 4, 5],
        ];
        let mut edges = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                edges.push((a, b));
            }
        }
        let mut d1 = ExactMatrix::zero(Ring::Integers, 6, edges.len());
        for (j, &(a, b)) in edges.iter().enumerate() {
            d1.set(a, j, Ring::Integers.from_int(&BigInt::from(-1)));
            d1.set(b, j, Ring::Integers.from_int(&BigInt::from(1)));
        }
        let mut d2 = ExactMatrix::zero(Ring::Integers, edges.len(), faces.len());
        for (j, f) in faces.iter().enumerate() {
            let sub = [(f[1], f[2], 1i64), (f[0], f[2], -1), (f[0], f[1], 1)];
            for &(a, b, sgn) in &sub {
                let e = edges.iter().position(|&x| x == (a, b)).unwrap();
                d2.set(e, j, Ring::Integers.from_int(&BigInt::from(sgn)));
            }
        }
        ChainComplex::new(Ring::Integers, vec![6, 15, 10], vec![d1, d2]).unwrap()
    }

    #[test]
    fn circle_has_one_loop() {
        let c = circle();
        let h1 = c.homology(1, Ring::Integers, true).unwrap();
        assert_eq!(h1.betti, 1);
        assert!(h1.torsion.is_empty());
        let h0 = c.homology(0, Ring::Integers, true).unwrap();
        assert!(h0.is_trivial());
    }

    #[test]
    fn sphere_has_h2() {
        let c = sphere();
        let h2 = c.homology(2, Ring::Integers, true).unwrap();
        assert_eq!(h2.betti, 1);
        assert!(c.homology(1, Ring::Integers, true).unwrap().is_trivial());
        assert_eq!(c.euler_characteristic(), 2);
    }

    #[test]
    fn projective_plane_torsion() {
        let c = projective_plane();
        // oracle: direct SNF of the 15x10 boundary matrix
        let snf = smith_normal_form(c.boundary(2).unwrap());
        let nontrivial: Vec<BigInt> = snf
            .invariant_factors()
            .into_iter()
            .filter(|f| !f.is_one())
            .collect();
        assert_eq!(nontrivial, vec![BigInt::from(2)]);

        let h1 = c.homology(1, Ring::Integers, true).unwrap();
        assert_eq!(h1.betti, 0);
        assert_eq!(h1.torsion, vec![BigInt::from(2)]);

        let h2z = c.cohomology(2, Ring::Integers, true).unwrap();
        assert_eq!(h2z.betti, 0);
        assert_eq!(h2z.torsion, vec![BigInt::from(2)]);

        let h2f2 = c.cohomology(2, Ring::PrimeField(2), true).unwrap();
        assert_eq!(h2f2.betti, 1);

        let h1q = c.homology(1, Ring::Rationals, true).unwrap();
        assert!(h1q.is_trivial());
    }

    #[test]
    fn circle_cohomology() {
        let c = circle();
        let h1 = c.cohomology(1, Ring::Integers, true).unwrap();
        assert_eq!(h1.betti, 1);
        assert!(h1.torsion.is_empty());
    }

    #[test]
    fn empty_complex_reduced_minus_one() {
        let c = ChainComplex::new(Ring::Integers, vec![0], vec![]).unwrap();
        let h = c.homology(-1, Ring::Integers, true).unwrap();
        assert_eq!(h.betti, 1);
        assert!(!c.is_acyclic(Ring::Integers).unwrap());
        let point = ChainComplex::new(Ring::Integers, vec![1], vec![]).unwrap();
        assert!(point.is_acyclic(Ring::Integers).unwrap());
        assert!(point.homology(-1, Ring::Integers, true).unwrap().is_trivial());
    }

    #[test]
    fn rejects_non_complexes() {
        let d1 = ExactMatrix::from_rows_i64(Ring::Integers, &[vec![1]]);
        let d2 = ExactMatrix::from_rows_i64(Ring::Integers, &[vec![1]]);
        let err = ChainComplex::new(Ring::Integers, vec![1, 1, 1], vec![d1, d2]);
        assert!(matches!(err, Err(Error::NotAChainComplex { degree: 1 })));
    }

    #[test]
    fn universal_coefficients_cross_check() {
        // betti^k = betti_k and torsion^k = torsion_{k-1} over the integers
        let c = projective_plane();
        for k in 0..=2i64 {
            let h = c.homology(k, Ring::Integers, true).unwrap();
            let ch = c.cohomology(k, Ring::Integers, true).unwrap();
            assert_eq!(ch.betti, h.betti, "betti mismatch in degree {k}");
            let lower = c.homology(k - 1, Ring::Integers, true).unwrap();
            assert_eq!(ch.torsion, lower.torsion, "torsion mismatch in degree {k}");
        }
    }
}
