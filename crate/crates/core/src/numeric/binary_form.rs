use super::{is_negative_definite, Matrix, NumericError, Scalar};

/// Reduced representative of a negative definite binary form, with the
/// unimodular witness `U` satisfying `Uᵀ · input · U = reduced`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryFormReduction<T> {
    pub reduced: Matrix<T>,
    pub witness: Matrix<T>,
}

/// Gauss reduction of a 2×2 symmetric negative definite matrix `[[a,b],[b,c]]`
/// under GL₂(ℤ) congruence.
///
/// The output satisfies `|2b| ≤ |a| ≤ |c|` and `b ≥ 0`. With these
/// conventions two inputs are integrally congruent iff their reduced
/// matrices are equal.
pub fn reduce_binary_form<T: Scalar>(
    s: &Matrix<T>,
) -> Result<BinaryFormReduction<T>, NumericError> {
    if s.rows() != 2 || s.cols() != 2 {
        return Err(NumericError::DimensionMismatch {
            expected: "2x2 matrix".into(),
            found: format!("{}x{}", s.rows(), s.cols()),
        });
    }
    if !is_negative_definite(s)? {
        return Err(NumericError::NotNegativeDefinite);
    }
    // Work with the positive definite form a x² + 2b xy + c y² = -s.
    let mut a = -s.get(0, 0).clone();
    let mut b = -s.get(0, 1).clone();
    let mut c = -s.get(1, 1).clone();
    // Witness columns are the current basis vectors in input coordinates.
    let mut u = [[T::one(), T::zero()], [T::zero(), T::one()]];
    let two = T::one() + T::one();

    loop {
        if c < a {
            std::mem::swap(&mut a, &mut c);
            for row in u.iter_mut() {
                row.swap(0, 1);
            }
        }
        if (two.clone() * b.clone()).abs() <= a {
            break;
        }
        // e2 ← e2 − k·e1 with k the nearest integer to b/a.
        let k = (two.clone() * b.clone() + a.clone()).div_floor(&(two.clone() * a.clone()));
        c = c - two.clone() * k.clone() * b.clone() + k.clone() * k.clone() * a.clone();
        b = b - k.clone() * a.clone();
        for row in u.iter_mut() {
            row[1] = row[1].clone() - k.clone() * row[0].clone();
        }
    }
    // Negative-definite off-diagonal is -b; make it non-negative.
    if b.is_positive() {
        b = -b;
        for row in u.iter_mut() {
            row[1] = -row[1].clone();
        }
    }
    let reduced = Matrix::from_rows(vec![vec![-a, -b.clone()], vec![-b, -c]])?;
    let witness = Matrix::from_rows(u.into_iter().map(Vec::from).collect())?;
    Ok(BinaryFormReduction { reduced, witness })
}
