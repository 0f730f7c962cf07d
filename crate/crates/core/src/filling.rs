//! Topology of the Stein filling carried by a positive factorization.
//!
//! Holes of the page are the 1-handles and twist curves the 2-handles of the
//! Lefschetz fibration. Each twist is attached with page framing −1 and
//! distinct twists are unlinked, so on the kernel lattice of the incidence
//! map the intersection form is minus the standard Gram matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::json::{ints, matrix_rows, JsonInt};
use crate::numeric::{self, determinant, signature, smith_decomposition};
use crate::openbook::Factorization;
use crate::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillingInvariants {
    pub b2: usize,
    pub chi: i64,
    pub sigma: i64,
    /// Invariant factors of `H₁`, zeros marking free summands. Empty means
    /// the trivial group.
    pub h1_factors: Vec<BigInt>,
    /// Intersection form on `basis`.
    pub q: IntMatrix,
    /// Integral basis of `H₂`, in curve coordinates (one entry per twist).
    pub basis: Vec<Vec<BigInt>>,
    pub det_abs: BigInt,
}

impl FillingInvariants {
    pub fn h1_is_trivial(&self) -> bool {
        self.h1_factors.is_empty()
    }

    /// Order of `H₁`, `None` when infinite.
    pub fn h1_order(&self) -> Option<BigInt> {
        if self.h1_factors.iter().any(Zero::is_zero) {
            None
        } else {
            Some(self.h1_factors.iter().product())
        }
    }

    pub fn is_even(&self) -> bool {
        (0..self.q.rows()).all(|i| self.q.get(i, i).is_even())
    }

    pub fn is_negative_definite(&self) -> bool {
        numeric::is_negative_definite(&self.q).expect("form is symmetric")
    }

    pub fn to_report(&self) -> FillingReport {
        FillingReport {
            b2: self.b2,
            chi: self.chi,
            sigma: self.sigma,
            h1: ints(&self.h1_factors),
            intersection_form: matrix_rows(&self.q),
            basis: self.basis.iter().map(|v| ints(v)).collect(),
            det_abs: JsonInt(self.det_abs.clone()),
            even: self.is_even(),
        }
    }
}

/// Serialized form of [`FillingInvariants`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FillingReport {
    pub b2: usize,
    pub chi: i64,
    pub sigma: i64,
    pub h1: Vec<JsonInt>,
    pub intersection_form: Vec<Vec<JsonInt>>,
    pub basis: Vec<Vec<JsonInt>>,
    pub det_abs: JsonInt,
    pub even: bool,
}

/// Twist-by-hole zero-one matrix, rows in canonical curve order.
pub fn incidence_matrix(f: &Factorization) -> IntMatrix {
    let rows = f.occurrences();
    IntMatrix::from_fn(rows.len(), f.page().len(), |i, j| {
        BigInt::from(u8::from(rows[i].encloses(j)))
    })
}

pub fn filling_invariants(f: &Factorization) -> FillingInvariants {
    let incidence = incidence_matrix(f);
    let curves = incidence.rows();
    let holes = incidence.cols();
    // Boundary map from 2-chains to 1-chains.
    let boundary = incidence.transpose();
    let snf = smith_decomposition(&boundary);
    let rank = snf.form.rank;

    let mut h1_factors = snf.form.torsion();
    h1_factors.extend(std::iter::repeat_n(BigInt::zero(), holes - rank));

    let basis = snf.kernel_basis();
    let b2 = basis.len();
    let q = IntMatrix::from_fn(b2, b2, |i, j| {
        -basis[i]
            .iter()
            .zip(&basis[j])
            .map(|(x, y)| x * y)
            .sum::<BigInt>()
    });
    let sigma = signature(&q).expect("Gram matrix is symmetric");
    let det_abs = determinant(&q).expect("Gram matrix is square").abs();

    FillingInvariants {
        b2,
        chi: 1 - holes as i64 + curves as i64,
        sigma,
        h1_factors,
        q,
        basis,
        det_abs,
    }
}
