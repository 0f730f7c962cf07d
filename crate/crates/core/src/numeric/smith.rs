use super::{Matrix, Scalar};

/// Invariant factors `d_1 | d_2 | ...` of an integer matrix.
///
/// `diagonal` has length `min(rows, cols)`; the nonzero entries come first
/// and are positive, followed by zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SmithForm<T> {
    pub diagonal: Vec<T>,
    pub rank: usize,
}

impl<T: Scalar> SmithForm<T> {
    /// Nonzero invariant factors that are not units.
    pub fn torsion(&self) -> Vec<T> {
        self.diagonal[..self.rank]
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

/// Smith form together with unimodular transforms: `left · M · right = D`.
#[derive(Debug, Clone)]
pub struct SmithDecomposition<T> {
    pub form: SmithForm<T>,
    pub left: Matrix<T>,
    pub right: Matrix<T>,
}

impl<T: Scalar> SmithDecomposition<T> {
    /// Columns of `right` spanning the integer kernel of `M` (as a map on
    /// column vectors). These form a basis of the full kernel lattice.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        (self.form.rank..self.right.cols())
            .map(|j| self.right.column(j))
            .collect()
    }

    /// The diagonal matrix `D` with the shape of the input.
    pub fn diagonal_matrix(&self) -> Matrix<T> {
        let (r, c) = (self.left.rows(), self.right.rows());
        Matrix::from_fn(r, c, |i, j| {
            if i == j {
                self.form.diagonal[i].clone()
            } else {
                T::zero()
            }
        })
    }
}

pub fn smith_normal_form<T: Scalar>(m: &Matrix<T>) -> SmithForm<T> {
    SmithCalc::new(m, false).run().form
}

pub fn smith_decomposition<T: Scalar>(m: &Matrix<T>) -> SmithDecomposition<T> {
    SmithCalc::new(m, true).run()
}

struct Dense<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Dense<T> {
    fn from_matrix(m: Matrix<T>) -> Self {
        let (rows, cols, data) = m.into_data();
        Self { rows, cols, data }
    }

    fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &T) {
        for j in 0..self.cols {
            let v = self.at(src, j).clone() * k.clone();
            let idx = dst * self.cols + j;
            self.data[idx] = self.data[idx].clone() + v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &T) {
        for i in 0..self.rows {
            let v = self.at(i, src).clone() * k.clone();
            let idx = i * self.cols + dst;
            self.data[idx] = self.data[idx].clone() + v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -self.data[idx].clone();
        }
    }

    fn into_matrix(self) -> Matrix<T> {
        Matrix::from_data(self.rows, self.cols, self.data)
    }
}

struct SmithCalc<T> {
    a: Dense<T>,
    left: Option<Dense<T>>,
    right: Option<Dense<T>>,
}

impl<T: Scalar> SmithCalc<T> {
    fn new(m: &Matrix<T>, track: bool) -> Self {
        let left = track.then(|| Dense::from_matrix(Matrix::identity(m.rows())));
        let right = track.then(|| Dense::from_matrix(Matrix::identity(m.cols())));
        Self {
            a: Dense::from_matrix(m.clone()),
            left,
            right,
        }
    }

    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        if let Some(l) = &mut self.left {
            l.swap_rows(x, y);
        }
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        if let Some(r) = &mut self.right {
            r.swap_cols(x, y);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &T) {
        self.a.add_row(dst, src, k);
        if let Some(l) = &mut self.left {
            l.add_row(dst, src, k);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &T) {
        self.a.add_col(dst, src, k);
        if let Some(r) = &mut self.right {
            r.add_col(dst, src, k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(l) = &mut self.left {
            l.negate_row(i);
        }
    }

    /// Nonzero entry of smallest absolute value in the block `[t.., t..]`.
    fn smallest_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), T)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let v = self.a.at(i, j).abs();
                if v.is_zero() {
                    continue;
                }
                if best.as_ref().is_none_or(|(_, b)| v < *b) {
                    best = Some(((i, j), v));
                }
            }
        }
        best.map(|(pos, _)| pos)
    }

    fn run(mut self) -> SmithDecomposition<T> {
        let n = self.a.rows.min(self.a.cols);
        let mut rank = 0;
        for t in 0..n {
            let Some((pi, pj)) = self.smallest_pivot(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                if !self.clear_column(t) || !self.clear_row(t) {
                    continue;
                }
                // Row and column are clear; enforce divisibility on the block.
                let p = self.a.at(t, t).clone();
                let offender = (t + 1..self.a.rows).find(|&i| {
                    (t + 1..self.a.cols).any(|j| !self.a.at(i, j).is_multiple_of(&p))
                });
                match offender {
                    Some(i) => self.add_row(t, i, &T::one()),
                    None => break,
                }
            }
            if self.a.at(t, t).is_negative() {
                self.negate_row(t);
            }
            rank += 1;
        }
        let diagonal = (0..n).map(|i| self.a.at(i, i).clone()).collect();
        let identity_left = || Matrix::identity(self.a.rows);
        let identity_right = || Matrix::identity(self.a.cols);
        SmithDecomposition {
            form: SmithForm { diagonal, rank },
            left: self.left.take().map_or_else(identity_left, Dense::into_matrix),
            right: self.right.take().map_or_else(identity_right, Dense::into_matrix),
        }
    }

    /// Reduces entries below the pivot. Returns false if the pivot moved.
    fn clear_column(&mut self, t: usize) -> bool {
        for i in t + 1..self.a.rows {
            if self.a.at(i, t).is_zero() {
                continue;
            }
            let q = self.a.at(i, t).div_floor(self.a.at(t, t));
            self.add_row(i, t, &-q);
            if !self.a.at(i, t).is_zero() {
                // Remainder is strictly smaller than the pivot.
                self.swap_rows(t, i);
                return false;
            }
        }
        true
    }

    /// Reduces entries right of the pivot. Returns false if the pivot moved.
    fn clear_row(&mut self, t: usize) -> bool {
        for j in t + 1..self.a.cols {
            if self.a.at(t, j).is_zero() {
                continue;
            }
            let q = self.a.at(t, j).div_floor(self.a.at(t, t));
            self.add_col(j, t, &-q);
            if !self.a.at(t, j).is_zero() {
                self.swap_cols(t, j);
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn m(rows: &[&[i64]]) -> Matrix<i64> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn identity_has_unit_factors() {
        let f = smith_normal_form(&Matrix::<i64>::identity(2));
        assert_eq!(f.diagonal, vec![1, 1]);
        assert_eq!(f.rank, 2);
    }

    #[test]
    fn lens_linking_matrix() {
        let f = smith_normal_form(&m(&[&[-3, 1], &[1, -4]]));
        assert_eq!(f.diagonal, vec![1, 11]);
        assert_eq!(f.rank, 2);
        assert_eq!(f.torsion(), vec![11]);
    }

    #[test]
    fn zero_map() {
        let f = smith_normal_form(&Matrix::<i64>::zeros(3, 2));
        assert_eq!(f.diagonal, vec![0, 0]);
        assert_eq!(f.rank, 0);
    }

    #[test]
    fn bigint_instantiation_agrees() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let small = smith_normal_form(&a);
        let big = smith_normal_form(&a.map(|v| BigInt::from(*v)));
        assert_eq!(small.diagonal, vec![2, 6, 12]);
        assert_eq!(
            big.diagonal,
            small.diagonal.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn decomposition_reproduces_diagonal() {
        let a = m(&[&[1, 1, 1, 1], &[1, 1, 0, 0], &[1, 0, 1, 1], &[0, 1, 0, 0]]);
        let d = smith_decomposition(&a.transpose());
        let prod = &(&d.left * &a.transpose()) * &d.right;
        assert_eq!(prod, d.diagonal_matrix());
        for v in d.kernel_basis() {
            assert!(a.transpose().mul_vec(&v).unwrap().iter().all(|x| *x == 0));
        }
    }
}
