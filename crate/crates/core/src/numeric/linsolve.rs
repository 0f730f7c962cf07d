use num_rational::Ratio;
use num_traits::{One, Zero};

use super::{Matrix, NumericError, Scalar};

fn require_square<T: Scalar>(m: &Matrix<T>) -> Result<(), NumericError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(NumericError::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", m.rows(), m.cols()),
        })
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant<T: Scalar>(m: &Matrix<T>) -> Result<T, NumericError> {
    require_square(m)?;
    let n = m.rows();
    let mut a = m.to_rows();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(T::zero());
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    Ok(if n == 0 { T::one() } else { sign * a[n - 1][n - 1].clone() })
}

/// Solves `M · x = b` exactly over the rationals.
#[allow(clippy::needless_range_loop)]
pub fn solve_rational<T: Scalar>(m: &Matrix<T>, b: &[T]) -> Result<Vec<Ratio<T>>, NumericError> {
    require_square(m)?;
    let n = m.rows();
    if b.len() != n {
        return Err(NumericError::DimensionMismatch {
            expected: format!("vector of length {n}"),
            found: format!("length {}", b.len()),
        });
    }
    let mut aug: Vec<Vec<Ratio<T>>> = (0..n)
        .map(|i| {
            m.row(i)
                .iter()
                .chain(std::iter::once(&b[i]))
                .map(|v| Ratio::from_integer(v.clone()))
                .collect()
        })
        .collect();
    for k in 0..n {
        let p = (k..n)
            .find(|&i| !aug[i][k].is_zero())
            .ok_or(NumericError::SingularMatrix)?;
        aug.swap(k, p);
        let pivot = aug[k][k].clone();
        for v in aug[k].iter_mut().skip(k) {
            *v = v.clone() / pivot.clone();
        }
        for i in 0..n {
            if i == k || aug[i][k].is_zero() {
                continue;
            }
            let f = aug[i][k].clone();
            for j in k..=n {
                let d = f.clone() * aug[k][j].clone();
                aug[i][j] = aug[i][j].clone() - d;
            }
        }
    }
    Ok(aug.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Signature (positive minus negative inertia) of a symmetric matrix,
/// computed by rational congruence diagonalization.
pub fn signature<T: Scalar>(s: &Matrix<T>) -> Result<i64, NumericError> {
    Ok(inertia(s)?.signature())
}

pub fn is_negative_definite<T: Scalar>(s: &Matrix<T>) -> Result<bool, NumericError> {
    let i = inertia(s)?;
    Ok(i.negative == s.rows())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Inertia {
    positive: usize,
    negative: usize,
}

impl Inertia {
    fn signature(self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

fn inertia<T: Scalar>(s: &Matrix<T>) -> Result<Inertia, NumericError> {
    if !s.is_symmetric() {
        return Err(NumericError::NotSymmetric);
    }
    let n = s.rows();
    let mut a: Vec<Vec<Ratio<T>>> = s
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(Ratio::from_integer).collect())
        .collect();
    let mut out = Inertia {
        positive: 0,
        negative: 0,
    };
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                symmetric_swap(&mut a, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // Diagonal of the trailing block vanishes; adding e_j to e_k
                // makes the pivot 2·a[k][j] ≠ 0.
                symmetric_add(&mut a, k, j, &Ratio::one());
            } else {
                continue;
            }
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = -(a[i][k].clone() / pivot.clone());
            symmetric_add(&mut a, i, k, &f);
        }
        if pivot > Ratio::zero() {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
    }
    Ok(out)
}

fn symmetric_swap<T: Scalar>(a: &mut [Vec<Ratio<T>>], x: usize, y: usize) {
    a.swap(x, y);
    for row in a.iter_mut() {
        row.swap(x, y);
    }
}

/// e_dst ← e_dst + f·e_src, applied as a congruence.
#[allow(clippy::needless_range_loop)]
fn symmetric_add<T: Scalar>(a: &mut [Vec<Ratio<T>>], dst: usize, src: usize, f: &Ratio<T>) {
    let n = a.len();
    for j in 0..n {
        let v = a[src][j].clone() * f.clone();
        a[dst][j] = a[dst][j].clone() + v;
    }
    for row in a.iter_mut() {
        let v = row[src].clone() * f.clone();
        row[dst] = row[dst].clone() + v;
    }
}
