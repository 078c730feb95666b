//! Dense integer matrices and Smith normal form.
//!
//! The Smith form is the single workhorse behind spans, saturations, integer
//! kernels, coordinate solving and finite quotients in [`crate::lattice`].
//! Everything here works over `i64`; the matrices this crate feeds in are at
//! most 9x9 with tiny entries, so overflow is not a practical concern, and
//! debug builds trap if it ever happens.

use std::fmt;
use std::ops::{Index, IndexMut};

/// Row-major dense integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from row slices. All rows must have length `cols`.
    pub fn from_rows<R: AsRef<[i64]>>(cols: usize, rows: &[R]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += vi * self[(i, j)];
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
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

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: i64) {
        if factor == 0 {
            return;
        }
        for j in 0..self.cols {
            let s = self[(src, j)];
            self[(dst, j)] += factor * s;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: i64) {
        if factor == 0 {
            return;
        }
        for i in 0..self.rows {
            let s = self[(i, src)];
            self[(i, dst)] += factor * s;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i128 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Smith decomposition `U * A * V = D` with `U`, `V` unimodular.
///
/// `D` is diagonal with positive entries `d_0 | d_1 | ... | d_{rank-1}`
/// followed by zeros. `v_inv` is kept alongside `v` so callers can read off a
/// basis of the saturated row space without inverting anything.
#[derive(Clone, Debug)]
pub struct Smith {
    pub invariant_factors: Vec<i64>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

pub fn smith_normal_form(matrix: &IntMatrix) -> Smith {
    let (m, n) = (matrix.rows(), matrix.cols());
    let mut a = matrix.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    // Column operations are mirrored on V (as column ops) and on V^{-1}
    // (as the inverse row op), so the identity V * V_inv = I is maintained.
    let swap_cols = |a: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, x, y| {
        a.swap_cols(x, y);
        v.swap_cols(x, y);
        vi.swap_rows(x, y);
    };
    let add_col = |a: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, dst, src, q: i64| {
        a.add_col(dst, src, q);
        v.add_col(dst, src, q);
        vi.add_row(src, dst, -q);
    };

    let mut rank = 0;
    for k in 0..m.min(n) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                let x = a[(i, j)].abs();
                if x != 0 && best.is_none_or(|(bi, bj)| x < a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(k, pi);
        u.swap_rows(k, pi);
        swap_cols(&mut a, &mut v, &mut v_inv, k, pj);

        loop {
            let mut dirty = false;
            for i in k + 1..m {
                let q = a[(i, k)].div_euclid(a[(k, k)]);
                if q != 0 {
                    a.add_row(i, k, -q);
                    u.add_row(i, k, -q);
                }
                if a[(i, k)] != 0 {
                    dirty = true;
                }
            }
            for j in k + 1..n {
                let q = a[(k, j)].div_euclid(a[(k, k)]);
                if q != 0 {
                    add_col(&mut a, &mut v, &mut v_inv, j, k, -q);
                }
                if a[(k, j)] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // Divisibility: every remaining entry must be a multiple of the pivot.
                let offender = (k + 1..m)
                    .flat_map(|i| (k + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| a[(i, j)] % a[(k, k)] != 0);
                match offender {
                    None => break,
                    Some((i, _)) => {
                        a.add_row(k, i, 1);
                        u.add_row(k, i, 1);
                        continue;
                    }
                }
            }
            // Move the smallest nonzero entry of row/column k onto the diagonal.
            let mut best = (k, k);
            for i in k + 1..m {
                if a[(i, k)] != 0 && a[(i, k)].abs() < a[best].abs() {
                    best = (i, k);
                }
            }
            for j in k + 1..n {
                if a[(k, j)] != 0 && a[(k, j)].abs() < a[best].abs() {
                    best = (k, j);
                }
            }
            if best.0 != k {
                a.swap_rows(k, best.0);
                u.swap_rows(k, best.0);
            } else if best.1 != k {
                swap_cols(&mut a, &mut v, &mut v_inv, k, best.1);
            }
        }
        if a[(k, k)] < 0 {
            a.negate_row(k);
            u.negate_row(k);
        }
        rank += 1;
    }

    let invariant_factors = (0..rank).map(|i| a[(i, i)]).collect();
    Smith {
        invariant_factors,
        u,
        v,
        v_inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag(smith: &Smith, rows: usize, cols: usize) -> IntMatrix {
        let mut d = IntMatrix::zeros(rows, cols);
        for (i, &x) in smith.invariant_factors.iter().enumerate() {
            d[(i, i)] = x;
        }
        d
    }

    #[test]
    fn textbook_example() {
        let a = IntMatrix::from_rows(3, &[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.invariant_factors, vec![2, 6, 12]);
        assert_eq!(s.u.mul(&a).mul(&s.v), diag(&s, 3, 3));
    }

    #[test]
    fn zero_and_empty() {
        let s = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert_eq!(s.rank(), 0);
        let s = smith_normal_form(&IntMatrix::zeros(0, 4));
        assert_eq!(s.rank(), 0);
        assert_eq!(s.v, IntMatrix::identity(4));
    }

    #[test]
    fn bareiss_determinant() {
        let a = IntMatrix::from_rows(3, &[[2, -1, 0], [-1, 2, -1], [0, -1, 2]]);
        assert_eq!(a.determinant(), 4);
        let b = IntMatrix::from_rows(2, &[[0, 1], [1, 0]]);
        assert_eq!(b.determinant(), -1);
    }

    proptest! {
        #[test]
        fn decomposition_holds(rows in 1usize..5, cols in 1usize..6,
                               seed in proptest::collection::vec(-4i64..5, 30)) {
            let mut a = IntMatrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a[(i, j)] = seed[i * cols + j];
                }
            }
            let s = smith_normal_form(&a);
            prop_assert_eq!(s.u.mul(&a).mul(&s.v), diag(&s, rows, cols));
            prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(cols));
            prop_assert_eq!(s.u.determinant().abs(), 1);
            for w in s.invariant_factors.windows(2) {
                prop_assert!(w[0] > 0 && w[1] % w[0] == 0);
            }
        }
    }
}
