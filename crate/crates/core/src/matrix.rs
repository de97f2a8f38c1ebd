use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::ring::{Ring, Scalar};
use crate::Result;

/// Dense matrix with exact scalar entries over a fixed [`Ring`].
///
/// Row-major storage. All entries are kept reduced (lowest terms over the
/// rationals, `0..p` over a prime field).
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} over {}", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ExactMatrix {
    pub fn zero(ring: Ring, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            ring,
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// Builds an integer matrix from `i64` rows; handy in tests and
    /// boundary-matrix assembly.
    pub fn from_rows_i64(ring: Ring, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(ring, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, ring.from_int(&BigInt::from(*v)));
            }
        }
        m
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert_eq!(v.ring(), self.ring);
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// Reinterprets an integer matrix over another ring (entry-wise image).
    pub fn cast(&self, ring: Ring) -> Result<ExactMatrix> {
        if self.ring == ring {
            return Ok(self.clone());
        }
        if self.ring != Ring::Integers {
            return Err(Error::RingMismatch(self.ring.to_string(), ring.to_string()));
        }
        let mut m = ExactMatrix::zero(ring, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if let Scalar::Int(v) = self.get(i, j) {
                    m.set(i, j, ring.from_int(v));
                }
            }
        }
        Ok(m)
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zero(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.check_same_ring(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = self.clone();
        for (a, b) in m.entries.iter_mut().zip(other.entries.iter()) {
            *a = a.add(b);
        }
        Ok(m)
    }

    pub fn neg(&self) -> ExactMatrix {
        let mut m = self.clone();
        for a in m.entries.iter_mut() {
            *a = a.neg();
        }
        m
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.check_same_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = ExactMatrix::zero(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = m.get(i, j).add(&a.mul(b));
                    m.set(i, j, cur);
                }
            }
        }
        Ok(m)
    }

    /// Matrix-vector product, the vector given as a column slice.
    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * vec{}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![self.ring.zero(); self.rows];
        for i in 0..self.rows {
            for (j, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                out[i] = out[i].add(&a.mul(x));
            }
        }
        Ok(out)
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Scalar]) {
        assert_eq!(col.len(), self.rows);
        for (i, v) in col.iter().enumerate() {
            self.set(i, j, v.clone());
        }
    }

    /// Submatrix with the given row and column index sets (in order).
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> ExactMatrix {
        let mut m = ExactMatrix::zero(self.ring, row_idx.len(), col_idx.len());
        for (i, &ri) in row_idx.iter().enumerate() {
            for (j, &cj) in col_idx.iter().enumerate() {
                m.set(i, j, self.get(ri, cj).clone());
            }
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.check_same_ring(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = ExactMatrix::zero(self.ring, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(m)
    }

    /// Rank over the fraction field of the ring.
    ///
    /// Integer matrices are ranked by fraction-free elimination; field
    /// matrices by ordinary Gaussian elimination.
    pub fn rank(&self) -> usize {
        match self.ring {
            Ring::Integers => self.rank_bareiss(),
            _ => self.clone().rank_field_in_place(),
        }
    }

    fn rank_bareiss(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| match self.get(i, j) {
                        Scalar::Int(v) => v.clone(),
                        _ => unreachable!(),
                    })
                    .collect()
            })
            .collect();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        let mut row = 0;
        for col in 0..n {
            if row >= m {
                break;
            }
            // pick the smallest nonzero pivot in this column for stability
            let pivot = (row..m)
                .filter(|&i| !a[i][col].is_zero())
                .min_by_key(|&i| a[i][col].abs());
            let Some(p) = pivot else { continue };
            a.swap(row, p);
            for i in row + 1..m {
                for j in col + 1..n {
                    let t = &a[row][col] * &a[i][j] - &a[i][col] * &a[row][j];
                    a[i][j] = &t / &prev;
                }
                a[i][col] = BigInt::zero();
            }
            prev = a[row][col].clone();
            row += 1;
            rank += 1;
        }
        rank
    }

    fn rank_field_in_place(mut self) -> usize {
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        let mut row = 0;
        for col in 0..n {
            if row >= m {
                break;
            }
            let Some(p) = (row..m).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            for j in 0..n {
                let tmp = self.get(row, j).clone();
                self.set(row, j, self.get(p, j).clone());
                self.set(p, j, tmp);
            }
            let inv = self.get(row, col).inv().expect("field element invertible");
            for i in row + 1..m {
                let factor = self.get(i, col).mul(&inv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = self.get(i, j).add(&factor.neg().mul(self.get(row, j)));
                    self.set(i, j, v);
                }
            }
            row += 1;
            rank += 1;
        }
        rank
    }

    /// Solves `self * x = v` exactly; `None` when `v` is not in the image.
    ///
    /// Over the integers solvability is decided through the Smith normal
    /// form; over a field by Gaussian elimination. The solution is
    /// deterministic for a fixed input.
    pub fn solve(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve {}x{} with rhs of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        for s in v {
            if s.ring() != self.ring {
                return Err(Error::RingMismatch(self.ring.to_string(), s.ring().to_string()));
            }
        }
        match self.ring {
            Ring::Integers => Ok(self.solve_integers(v)),
            _ => Ok(self.solve_field(v)),
        }
    }

    fn solve_integers(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let snf = crate::snf::smith_normal_form(self);
        // U * M * V = D, so M x = v  <=>  D (V^-1 x) = U v.
        let uv = snf.u.mul_vec(v).expect("dimensions agree");
        let k = self.rows.min(self.cols);
        let mut y = vec![Ring::Integers.zero(); self.cols];
        for (i, uvi) in uv.iter().enumerate() {
            let d = if i < k { snf.d.get(i, i) } else { &Scalar::Int(BigInt::zero()) };
            if d.is_zero() {
                if !uvi.is_zero() {
                    return None;
                }
            } else if i < self.cols {
                match uvi.div_exact(d) {
                    Some(q) => y[i] = q,
                    None => return None,
                }
            }
        }
        Some(snf.v.mul_vec(&y).expect("dimensions agree"))
    }

    fn solve_field(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let ring = self.ring;
        let (m, n) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut b: Vec<Scalar> = v.to_vec();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row >= m {
                break;
            }
            let Some(p) = (row..m).find(|&i| !a.get(i, col).is_zero()) else {
                continue;
            };
            for j in 0..n {
                let tmp = a.get(row, j).clone();
                a.set(row, j, a.get(p, j).clone());
                a.set(p, j, tmp);
            }
            b.swap(row, p);
            let inv = a.get(row, col).inv().expect("field element invertible");
            for j in col..n {
                let v = a.get(row, j).mul(&inv);
                a.set(row, j, v);
            }
            b[row] = b[row].mul(&inv);
            for i in 0..m {
                if i == row || a.get(i, col).is_zero() {
                    continue;
                }
                let factor = a.get(i, col).clone();
                for j in col..n {
                    let v = a.get(i, j).add(&factor.neg().mul(a.get(row, j)));
                    a.set(i, j, v);
                }
                b[i] = b[i].add(&factor.neg().mul(&b[row]));
            }
            pivots.push((row, col));
            row += 1;
        }
        for i in row..m {
            if !b[i].is_zero() {
                return None;
            }
        }
        let mut x = vec![ring.zero(); n];
        for (r, c) in pivots {
            x[c] = b[r].clone();
        }
        Some(x)
    }

    fn check_same_ring(&self, other: &ExactMatrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }
}

/// Integer determinant by fraction-free elimination; used in tests to
/// certify unimodularity of transformation matrices.
pub fn det_bareiss(m: &ExactMatrix) -> BigInt {
    assert_eq!(m.ring(), Ring::Integers);
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match m.get(i, j) {
                    Scalar::Int(v) => v.clone(),
                    _ => unreachable!(),
                })
                .collect()
        })
        .collect();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = &t / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_and_transpose() {
        let a = ExactMatrix::from_rows_i64(Ring::Integers, &[vec![1, 2], vec![3, 4]]);
        let b = ExactMatrix::from_rows_i64(Ring::Integers, &[vec![0, 1], vec![1, 0]]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(
            ab,
            ExactMatrix::from_rows_i64(Ring::Integers, &[vec![2, 1], vec![4, 3]])
        );
        assert_eq!(a.transpose().get(0, 1), a.get(1, 0));
    }

    #[test]
    fn rank_over_various_rings() {
        let m = ExactMatrix::from_rows_i64(Ring::Integers, &[vec![2, 4], vec![1, 2]]);
        assert_eq!(m.rank(), 1);
        let m2 = m.cast(Ring::PrimeField(2)).unwrap();
        assert_eq!(m2.rank(), 1);
        let m3 = m.cast(Ring::Rationals).unwrap();
        assert_eq!(m3.rank(), 1);
        let even = ExactMatrix::from_rows_i64(Ring::Integers, &[vec![2, 4], vec![6, 8]]);
        assert_eq!(even.cast(Ring::PrimeField(2)).unwrap().rank(), 0);
    }

    #[test]
    fn solve_diag_over_integers() {
        // diag(2,3) x = (4,3) has the integer solution (2,1)
        let m = ExactMatrix::from_rows_i64(Ring::Integers, &[vec![2, 0], vec![0, 3]]);
        let v = vec![
            Ring::Integers.from_int(&BigInt::from(4)),
            Ring::Integers.from_int(&BigInt::from(3)),
        ];
        let x = m.solve(&v).unwrap().unwrap();
        assert_eq!(
            x,
            vec![
                Ring::Integers.from_int(&BigInt::from(2)),
                Ring::Integers.from_int(&BigInt::from(1))
            ]
        );
    }

    #[test]
    fn solve_unsolvable_over_z_but_solvable_over_q() {
        // [2] x = (1): no integer solution, rational solution 1/2
        let m = ExactMatrix::from_rows_i64(Ring::Integers, &[vec![2]]);
        let v = vec![Ring::Integers.one()];
        assert_eq!(m.solve(&v).unwrap(), None);

        let mq = m.cast(Ring::Rationals).unwrap();
        let vq = vec![Ring::Rationals.one()];
        let x = mq.solve(&vq).unwrap().unwrap();
        let expected = Scalar::Rat(num_rational::BigRational::new(1.into(), 2.into()));
        assert_eq!(x, vec![expected]);
    }

    #[test]
    fn solve_respects_dimension_checks() {
        let m = ExactMatrix::from_rows_i64(Ring::Integers, &[vec![1, 0]]);
        let v = vec![Ring::Integers.one(), Ring::Integers.one()];
        assert!(matches!(m.solve(&v), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn determinant() {
        let m = ExactMatrix::from_rows_i64(Ring::Integers, &[vec![2, 1], vec![7, 4]]);
        assert_eq!(det_bareiss(&m), BigInt::from(1));
        let s = ExactMatrix::from_rows_i64(Ring::Integers, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(det_bareiss(&s), BigInt::from(-1));
    }
}
