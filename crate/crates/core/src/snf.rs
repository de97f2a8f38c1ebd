//! Smith normal form over the integers with unimodular transforms.
//!
//! Pivoting picks the smallest nonzero entry in absolute value, reducing
//! rows and columns by Euclidean division until the pivot divides the whole
//! remaining block. Deterministic scan order makes every decomposition (and
//! every homology-generator lift built on it) reproducible.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::matrix::ExactMatrix;
use crate::ring::{Ring, Scalar};

/// Decomposition `u * m * v = d` with `u`, `v` unimodular and `d` diagonal
/// satisfying the divisibility chain `d_1 | d_2 | ...`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: ExactMatrix,
    pub u: ExactMatrix,
    pub v: ExactMatrix,
    pub u_inv: ExactMatrix,
    pub v_inv: ExactMatrix,
}

impl Snf {
    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k)
            .filter_map(|i| match self.d.get(i, i) {
                Scalar::Int(v) if !v.is_zero() => Some(v.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Basis of the integer kernel lattice of `m`, as columns.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let n = self.v.rows();
        let k = self.d.rows().min(self.d.cols());
        let mut basis = Vec::new();
        for i in 0..n {
            let in_kernel = i >= k || self.d.get(i, i).is_zero();
            if in_kernel {
                basis.push(self.v.column(i));
            }
        }
        basis
    }
}

struct Grid {
    rows: usize,
    cols: usize,
    a: Vec<BigInt>,
}

impl Grid {
    fn identity(n: usize) -> Grid {
        let mut a = vec![BigInt::zero(); n * n];
        for i in 0..n {
            a[i * n + i] = BigInt::from(1);
        }
        Grid { rows: n, cols: n, a }
    }

    fn from_matrix(m: &ExactMatrix) -> Grid {
        let mut a = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                match m.get(i, j) {
                    Scalar::Int(v) => a.push(v.clone()),
                    _ => panic!("smith normal form requires an integer matrix"),
                }
            }
        }
        Grid { rows: m.rows(), cols: m.cols(), a }
    }

    fn to_matrix(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zero(Ring::Integers, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, Scalar::Int(self.a[i * self.cols + j].clone()));
            }
        }
        m
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.a[i * self.cols + j]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.a.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.a.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i += q * row_k
    fn add_row(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let t = q * self.at(k, c);
            self.a[i * self.cols + c] += t;
        }
    }

    /// col_j += q * col_k
    fn add_col(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let t = q * self.at(r, k);
            self.a[r * self.cols + j] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let idx = i * self.cols + c;
            let v = std::mem::take(&mut self.a[idx]);
            self.a[idx] = -v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let idx = r * self.cols + j;
            let v = std::mem::take(&mut self.a[idx]);
            self.a[idx] = -v;
        }
    }
}

struct Calc {
    a: Grid,
    u: Grid,
    u_inv: Grid,
    v: Grid,
    v_inv: Grid,
}

impl Calc {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row_i -= q * row_k, kept unimodular on (u, u_inv)
    fn sub_row(&mut self, i: usize, k: usize, q: &BigInt) {
        let nq = -q.clone();
        self.a.add_row(i, k, &nq);
        self.u.add_row(i, k, &nq);
        self.u_inv.add_col(k, i, q);
    }

    /// col_j -= q * col_k
    fn sub_col(&mut self, j: usize, k: usize, q: &BigInt) {
        let nq = -q.clone();
        self.a.add_col(j, k, &nq);
        self.v.add_col(j, k, &nq);
        self.v_inv.add_row(k, j, q);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Smallest nonzero |entry| in the trailing block, first in scan order.
    fn find_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut best_abs = BigInt::zero();
        for i in k..self.a.rows {
            for j in k..self.a.cols {
                let v = self.a.at(i, j);
                if v.is_zero() {
                    continue;
                }
                let a = v.abs();
                if best.is_none() || a < best_abs {
                    best = Some((i, j));
                    best_abs = a;
                }
            }
        }
        best
    }
}

/// Rounded division: quotient minimizing |a - q*b|.
fn div_rounded(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_rem(a, b);
    let two_r = r.abs() * 2;
    if two_r > b.abs() {
        if (r.sign() == b.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Computes the Smith normal form of an integer matrix.
///
/// Total on integer matrices; panics only if handed a non-integer ring.
pub fn smith_normal_form(m: &ExactMatrix) -> Snf {
    let rows = m.rows();
    let cols = m.cols();
    let mut c = Calc {
        a: Grid::from_matrix(m),
        u: Grid::identity(rows),
        u_inv: Grid::identity(rows),
        v: Grid::identity(cols),
        v_inv: Grid::identity(cols),
    };

    let steps = rows.min(cols);
    for k in 0..steps {
        'pivot: loop {
            let Some((pi, pj)) = c.find_pivot(k) else {
                break 'pivot;
            };
            c.swap_rows(k, pi);
            c.swap_cols(k, pj);

            // clear column k below the pivot
            let mut dirty = false;
            for i in k + 1..rows {
                if c.a.at(i, k).is_zero() {
                    continue;
                }
                let q = div_rounded(c.a.at(i, k), c.a.at(k, k));
                c.sub_row(i, k, &q);
                if !c.a.at(i, k).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // clear row k right of the pivot
            for j in k + 1..cols {
                if c.a.at(k, j).is_zero() {
                    continue;
                }
                let q = div_rounded(c.a.at(k, j), c.a.at(k, k));
                c.sub_col(j, k, &q);
                if !c.a.at(k, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // pivot must divide the remaining block
            let p = c.a.at(k, k).clone();
            for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(c.a.at(i, j) % &p).is_zero() {
                        c.a.add_row(k, i, &BigInt::from(1));
                        c.u.add_row(k, i, &BigInt::from(1));
                        c.u_inv.add_col(i, k, &BigInt::from(-1));
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if c.a.at(k, k).is_negative() {
            c.negate_row(k);
        }
        if c.a.at(k, k).is_zero() {
            break;
        }
    }

    Snf {
        d: c.a.to_matrix(),
        u: c.u.to_matrix(),
        v: c.v.to_matrix(),
        u_inv: c.u_inv.to_matrix(),
        v_inv: c.v_inv.to_matrix(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::det_bareiss;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn check_decomposition(m: &ExactMatrix, snf: &Snf) {
        // u * m * v = d
        let umv = snf.u.mul(m).unwrap().mul(&snf.v).unwrap();
        assert_eq!(umv, snf.d, "u*m*v != d");
        // unimodularity
        assert_eq!(det_bareiss(&snf.u).abs(), BigInt::from(1));
        assert_eq!(det_bareiss(&snf.v).abs(), BigInt::from(1));
        // tracked inverses are actual inverses
        let id_r = ExactMatrix::identity(Ring::Integers, m.rows());
        let id_c = ExactMatrix::identity(Ring::Integers, m.cols());
        assert_eq!(snf.u.mul(&snf.u_inv).unwrap(), id_r);
        assert_eq!(snf.v.mul(&snf.v_inv).unwrap(), id_c);
        // diagonal, nonnegative, divisibility chain
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    assert!(snf.d.get(i, j).is_zero(), "off-diagonal entry");
                }
            }
        }
        let facs = snf.invariant_factors();
        for w in facs.windows(2) {
            assert!(
                w[1].is_multiple_of(&w[0]),
                "divisibility chain broken: {} !| {}",
                w[0],
                w[1]
            );
        }
    }

    /// Independent oracle: the k-th determinantal divisor (gcd of all k x k
    /// minors) equals d_1 * ... * d_k.
    fn determinantal_divisor(m: &ExactMatrix, k: usize) -> BigInt {
        fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut idx: Vec<usize> = (0..k).collect();
            if k > n {
                return out;
            }
            loop {
                out.push(idx.clone());
                let mut i = k;
                loop {
                    if i == 0 {
                        return out;
                    }
                    i -= 1;
                    if idx[i] != i + n - k {
                        break;
                    }
                    if i == 0 {
                        return out;
                    }
                }
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        let mut g = BigInt::zero();
        for rows in combinations(m.rows(), k) {
            for cols in combinations(m.cols(), k) {
                let minor = det_bareiss(&m.submatrix(&rows, &cols));
                g = g.gcd(&minor);
            }
        }
        g
    }

    #[test]
    fn worked_two_by_two() {
        // gcd of entries 2, |det| = 8 - 24 = 16... the invariant factors are
        // derived from the minor-gcd oracle below: d1 = 2, d2 = 4.
        let m = ExactMatrix::from_rows_i64(Ring::Integers, &[vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(&m);
        check_decomposition(&m, &snf);
        assert_eq!(determinantal_divisor(&m, 1), BigInt::from(2));
        assert_eq!(determinantal_divisor(&m, 2), BigInt::from(8));
        assert_eq!(
            snf.invariant_factors(),
            vec![BigInt::from(2), BigInt::from(4)]
        );
    }

    #[test]
    fn identity_is_fixed() {
        let m = ExactMatrix::identity(Ring::Integers, 3);
        let snf = smith_normal_form(&m);
        check_decomposition(&m, &snf);
        assert_eq!(snf.d, m);
    }

    #[test]
    fn zero_matrix() {
        let m = ExactMatrix::zero(Ring::Integers, 2, 3);
        let snf = smith_normal_form(&m);
        check_decomposition(&m, &snf);
        assert!(snf.d.is_zero());
        assert_eq!(snf.rank(), 0);
        assert_eq!(snf.kernel_basis().len(), 3);
    }

    #[test]
    fn kernel_basis_spans_kernel() {
        let m = ExactMatrix::from_rows_i64(Ring::Integers, &[vec![1, 1, 1]]);
        let snf = smith_normal_form(&m);
        check_decomposition(&m, &snf);
        let basis = snf.kernel_basis();
        assert_eq!(basis.len(), 2);
        for b in &basis {
            let img = m.mul_vec(b).unwrap();
            assert!(img.iter().all(Scalar::is_zero));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn snf_properties_hold(rows in 1usize..5, cols in 1usize..5,
                               seed in proptest::collection::vec(-9i64..10, 16)) {
            let data: Vec<Vec<i64>> = (0..rows)
                .map(|i| (0..cols).map(|j| seed[(i * cols + j) % seed.len()]).collect())
                .collect();
            let m = ExactMatrix::from_rows_i64(Ring::Integers, &data);
            let snf = smith_normal_form(&m);
            check_decomposition(&m, &snf);
            // cross-check every invariant factor against the minor-gcd oracle
            let facs = snf.invariant_factors();
            let mut prod = BigInt::from(1);
            for (k, f) in facs.iter().enumerate() {
                prod *= f;
                prop_assert_eq!(determinantal_divisor(&m, k + 1), prod.clone());
            }
        }
    }
}
