//! Exact integer linear algebra on small dense matrices.
//!
//! Fraction-free throughout: Hermite form by unimodular column operations,
//! Smith form with both transforms recorded, determinants by the Bareiss
//! sweep, and complete integral solution sets via the Smith form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense matrix of unbounded integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(
            rows * cols,
            data.len(),
            "dimensions inconsistent with entry count"
        );
        assert!(rows > 0 && cols > 0);
        Self { rows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| BigInt::from(x)).collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n, vec![BigInt::zero(); n * n]);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::new(
            self.rows,
            other.cols,
            vec![BigInt::zero(); self.rows * other.cols],
        );
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let delta = q * self.get(src, j);
            let v = self.get(dst, j) - delta;
            self.set(dst, j, v);
        }
    }

    /// col[dst] -= q * col[src]
    fn col_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let delta = q * self.get(i, src);
            let v = self.get(i, dst) - delta;
            self.set(i, dst, v);
        }
    }

    fn row_add(&mut self, dst: usize, src: usize) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + self.get(src, j);
            self.set(dst, j, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }
}

/// Hermite and Smith normal forms of one matrix; `u * m * v = snf` with
/// unimodular transforms.
#[derive(Debug, Clone)]
pub struct HnfSmith {
    pub hnf: IntMatrix,
    pub snf: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

/// Computes the column-style Hermite form together with the Smith form and
/// its unimodular transforms.
pub fn hnf_smith(m: &IntMatrix) -> HnfSmith {
    let (snf, u, v) = smith(m);
    HnfSmith {
        hnf: hnf(m),
        snf,
        u,
        v,
    }
}

/// Column-style Hermite normal form: unimodular column operations only.
/// Pivots are positive with zeros to their right; entries left of a pivot
/// in its row are reduced into [0, pivot).
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let mut h = m.clone();
    let mut pc = 0usize; // next pivot column
    for row in 0..h.rows {
        if pc >= h.cols {
            break;
        }
        // Euclidean sweep across columns pc.. on this row
        loop {
            let mut best: Option<usize> = None;
            for j in pc..h.cols {
                if !h.get(row, j).is_zero()
                    && best.is_none_or(|b| h.get(row, j).abs() < h.get(row, b).abs())
                {
                    best = Some(j);
                }
            }
            let Some(j) = best else { break };
            h.swap_cols(pc, j);
            let mut clean = true;
            for j in pc + 1..h.cols {
                if !h.get(row, j).is_zero() {
                    let q = h.get(row, j).div_floor(h.get(row, pc));
                    h.col_sub(j, pc, &q);
                    if !h.get(row, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if h.get(row, pc).is_zero() {
            continue; // row has no pivot; stay on the same pivot column
        }
        if h.get(row, pc).is_negative() {
            h.negate_col(pc);
        }
        let pivot = h.get(row, pc).clone();
        for j in 0..pc {
            let q = h.get(row, j).div_floor(&pivot);
            if !q.is_zero() {
                h.col_sub(j, pc, &q);
            }
        }
        pc += 1;
    }
    h
}

/// Smith normal form with recorded transforms: returns (s, u, v) with
/// u * m * v = s, u and v unimodular, s diagonal with d1 | d2 | ...
fn smith(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(s.rows);
    let mut v = IntMatrix::identity(s.cols);
    let mn = s.rows.min(s.cols);
    'outer: for k in 0..mn {
        loop {
            // smallest nonzero entry of the trailing submatrix becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in k..s.rows {
                for j in k..s.cols {
                    if !s.get(i, j).is_zero()
                        && best.is_none_or(|(bi, bj)| s.get(i, j).abs() < s.get(bi, bj).abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'outer };
            s.swap_rows(k, pi);
            u.swap_rows(k, pi);
            s.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let mut again = false;
            for i in k + 1..s.rows {
                if !s.get(i, k).is_zero() {
                    let q = s.get(i, k).div_floor(s.get(k, k));
                    s.row_sub(i, k, &q);
                    u.row_sub(i, k, &q);
                    if !s.get(i, k).is_zero() {
                        again = true;
                    }
                }
            }
            if again {
                continue;
            }
            for j in k + 1..s.cols {
                if !s.get(k, j).is_zero() {
                    let q = s.get(k, j).div_floor(s.get(k, k));
                    s.col_sub(j, k, &q);
                    v.col_sub(j, k, &q);
                    if !s.get(k, j).is_zero() {
                        again = true;
                    }
                }
            }
            if again {
                continue;
            }
            // successive divisibility: fold an offending row into the pivot row
            let offender = (k + 1..s.rows)
                .find(|&i| (k + 1..s.cols).any(|j| !(s.get(i, j) % s.get(k, k)).is_zero()));
            match offender {
                Some(i) => {
                    s.row_add(k, i);
                    u.row_add(k, i);
                }
                None => break,
            }
        }
    }
    for k in 0..mn {
        if s.get(k, k).is_negative() {
            s.negate_row(k);
            u.negate_row(k);
        }
    }
    (s, u, v)
}

/// Complete description of { x in Z^n : A x = b }.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    /// No integral solution exists.
    Inconsistent,
    /// particular + Z-span(kernel) enumerates all solutions.
    Solution {
        particular: Vec<BigInt>,
        kernel: Vec<Vec<BigInt>>,
    },
}

/// Solves A x = b over the integers via the Smith form.
pub fn integer_solve(a: &IntMatrix, b: &[BigInt]) -> LinearSolution {
    assert_eq!(b.len(), a.rows(), "dimension mismatch");
    let (s, u, v) = smith(a);
    let ub = u.mul_vec(b);
    let mn = a.rows().min(a.cols());
    let mut rank = 0usize;
    while rank < mn && !s.get(rank, rank).is_zero() {
        rank += 1;
    }
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        if i < rank {
            let (q, r) = ubi.div_rem(s.get(i, i));
            if !r.is_zero() {
                return LinearSolution::Inconsistent;
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return LinearSolution::Inconsistent;
        }
    }
    let particular = v.mul_vec(&y);
    let kernel = (rank..a.cols())
        .map(|j| (0..a.cols()).map(|i| v.get(i, j).clone()).collect())
        .collect();
    LinearSolution::Solution { particular, kernel }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_of_diag_2_3() {
        let m = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        let r = hnf_smith(&m);
        assert_eq!(r.snf, IntMatrix::from_i64(2, 2, &[1, 0, 0, 6]));
        assert_eq!(r.u.mul(&m).mul(&r.v), r.snf);
        assert!(r.u.is_unimodular());
        assert!(r.v.is_unimodular());
    }

    #[test]
    fn identity_is_fixed() {
        let m = IntMatrix::identity(3);
        let r = hnf_smith(&m);
        assert_eq!(r.hnf, m);
        assert_eq!(r.snf, m);
        assert_eq!(r.u, m);
        assert_eq!(r.v, m);
    }

    #[test]
    fn swap_matrix_hnf_is_identity() {
        let m = IntMatrix::from_i64(2, 2, &[0, 1, 1, 0]);
        assert_eq!(hnf(&m), IntMatrix::identity(2));
    }

    #[test]
    fn hnf_shape() {
        let m = IntMatrix::from_i64(2, 2, &[4, 6, 1, 1]);
        let h = hnf(&m);
        // column style: pivot in row 0 positive, zero to its right
        assert!(h.get(0, 1).is_zero());
        assert!(h.get(0, 0).is_positive());
        assert_eq!(h.det().abs(), m.det().abs());
    }

    #[test]
    fn solve_examples() {
        // 2x = 4
        let a = IntMatrix::from_i64(1, 1, &[2]);
        match integer_solve(&a, &big(&[4])) {
            LinearSolution::Solution { particular, kernel } => {
                assert_eq!(particular, big(&[2]));
                assert!(kernel.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
        // 2x = 3 has no integral solution
        assert_eq!(integer_solve(&a, &big(&[3])), LinearSolution::Inconsistent);
        // x - y = 0
        let a = IntMatrix::from_i64(1, 2, &[1, -1]);
        match integer_solve(&a, &big(&[0])) {
            LinearSolution::Solution { particular, kernel } => {
                assert_eq!(particular, big(&[0, 0]));
                assert_eq!(kernel.len(), 1);
                let k = &kernel[0];
                assert_eq!(k[0], k[1]);
                assert_eq!(k[0].abs(), BigInt::from(1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn solve_checks_exactly() {
        let a = IntMatrix::from_i64(2, 3, &[2, 4, 6, 1, 2, 4]);
        let b = big(&[4, 3]);
        if let LinearSolution::Solution { particular, kernel } = integer_solve(&a, &b) {
            assert_eq!(a.mul_vec(&particular), b);
            for k in &kernel {
                assert!(a.mul_vec(k).iter().all(|x| x.is_zero()));
            }
        } else {
            panic!("system is solvable: x = (2 - 2t, t, 0) + ...");
        }
    }

    #[test]
    fn random_smith_invariants() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            let data: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-50..=50)).collect();
            let m = IntMatrix::from_i64(rows, cols, &data);
            let r = hnf_smith(&m);
            assert_eq!(r.u.mul(&m).mul(&r.v), r.snf);
            assert!(r.u.is_unimodular());
            assert!(r.v.is_unimodular());
            let mn = rows.min(cols);
            for k in 0..mn {
                for i in 0..rows {
                    for j in 0..cols {
                        if i != j && (i == k || j == k) {
                            assert!(r.snf.get(i, j).is_zero());
                        }
                    }
                }
                if k + 1 < mn && !r.snf.get(k + 1, k + 1).is_zero() {
                    assert!(!r.snf.get(k, k).is_zero());
                    assert!((r.snf.get(k + 1, k + 1) % r.snf.get(k, k)).is_zero());
                }
            }
        }
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_i64(3, 3, &[2, 0, 1, 1, 3, 2, 0, 1, 4]);
        assert_eq!(m.det(), BigInt::from(21)); // cofactor expansion by hand
        let singular = IntMatrix::from_i64(2, 2, &[2, 4, 1, 2]);
        assert_eq!(singular.det(), BigInt::zero());
    }
}
