//! Contact (−1)-surgery on a linear chain of stabilized Legendrian unknots.
//!
//! A chain with framings `−a_1, …, −a_n` presents the lens space `L(p,q)`
//! with `p/q = [a_1, …, a_n]` (negative continued fraction). Each component
//! is a Legendrian unknot stabilized `a_i − 2` times; the split of those
//! stabilizations into positive and negative ones determines the rotation
//! number and, through it, the tight contact structure on the result.
//!
//! The `d3` invariant uses `(c₁² − 3σ − 2χ)/4` with no extra correction
//! term, since only contact (−1)-surgeries are modeled.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{self, NumericError};
use crate::{IntMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LegendrianError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

impl LegendrianError {
    pub fn name(&self) -> &'static str {
        match self {
            LegendrianError::InvalidInput(_) => "InvalidInput",
            LegendrianError::Numeric(e) => e.name(),
        }
    }
}

/// Negative continued fraction `[a_1, …, a_n]`, all terms at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct ContinuedFraction(Vec<i64>);

impl ContinuedFraction {
    pub fn new(terms: Vec<i64>) -> Result<Self, LegendrianError> {
        if terms.is_empty() {
            return Err(LegendrianError::InvalidInput(
                "continued fraction needs at least one term".into(),
            ));
        }
        if let Some(a) = terms.iter().find(|&&a| a < 2) {
            return Err(LegendrianError::InvalidInput(format!(
                "continued fraction term {a} is below 2"
            )));
        }
        Ok(Self(terms))
    }

    pub fn terms(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<i64>> for ContinuedFraction {
    type Error = LegendrianError;

    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<ContinuedFraction> for Vec<i64> {
    fn from(cf: ContinuedFraction) -> Self {
        cf.0
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Expands `p/q` as `a_1 − 1/(a_2 − 1/(…))` with every `a_i ≥ 2`.
pub fn cf_expand(p: i64, q: i64) -> Result<ContinuedFraction, LegendrianError> {
    if !(p > q && q >= 1) {
        return Err(LegendrianError::InvalidInput(format!(
            "need p > q >= 1, got p={p}, q={q}"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(LegendrianError::InvalidInput(format!(
            "p={p} and q={q} are not coprime"
        )));
    }
    let (mut p, mut q) = (p, q);
    let mut terms = Vec::new();
    while q != 0 {
        let a = Integer::div_ceil(&p, &q);
        terms.push(a);
        (p, q) = (q, a * q - p);
    }
    ContinuedFraction::new(terms)
}

/// Evaluates the continued fraction to a reduced pair `(p, q)`.
pub fn cf_value(cf: &ContinuedFraction) -> (i64, i64) {
    // Fold from the tail: x = a − 1/x' with x' = p'/q' gives (a·p' − q', p').
    let mut terms = cf.terms().iter().rev();
    let last = *terms.next().expect("nonempty continued fraction");
    terms.fold((last, 1), |(p, q), &a| (a * p - q, p))
}

/// One unknot in the chain: framing `−a`, stabilized `splus` times
/// positively and `sminus` times negatively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LegendrianComponent {
    a: i64,
    splus: u32,
    sminus: u32,
}

impl LegendrianComponent {
    pub fn new(a: i64, splus: u32, sminus: u32) -> Result<Self, LegendrianError> {
        if a < 2 {
            return Err(LegendrianError::InvalidInput(format!(
                "framing parameter a={a} is below 2"
            )));
        }
        if i64::from(splus) + i64::from(sminus) != a - 2 {
            return Err(LegendrianError::InvalidInput(format!(
                "component with a={a} needs {} stabilizations, got {splus}+{sminus}",
                a - 2
            )));
        }
        Ok(Self { a, splus, sminus })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn splus(&self) -> u32 {
        self.splus
    }

    pub fn sminus(&self) -> u32 {
        self.sminus
    }

    pub fn tb(&self) -> i64 {
        1 - self.a
    }

    pub fn rot(&self) -> i64 {
        i64::from(self.splus) - i64::from(self.sminus)
    }

    /// Stabilized on both sides.
    pub fn is_mixed(&self) -> bool {
        self.splus > 0 && self.sminus > 0
    }

    /// Same component with all stabilization signs flipped.
    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a,
            splus: self.sminus,
            sminus: self.splus,
        }
    }
}

/// A linear chain of Legendrian unknots, consecutive ones linked once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainSurgery {
    components: Vec<LegendrianComponent>,
}

impl ChainSurgery {
    pub fn new(components: Vec<LegendrianComponent>) -> Result<Self, LegendrianError> {
        if components.is_empty() {
            return Err(LegendrianError::InvalidInput("empty chain".into()));
        }
        Ok(Self { components })
    }

    /// Builds from framing parameters and `(splus, sminus)` pairs.
    pub fn from_parts(a: &[i64], stabs: &[(u32, u32)]) -> Result<Self, LegendrianError> {
        if a.len() != stabs.len() {
            return Err(LegendrianError::InvalidInput(format!(
                "{} framings but {} stabilization pairs",
                a.len(),
                stabs.len()
            )));
        }
        a.iter()
            .zip(stabs)
            .map(|(&a, &(sp, sm))| LegendrianComponent::new(a, sp, sm))
            .collect::<Result<Vec<_>, _>>()
            .and_then(Self::new)
    }

    pub fn components(&self) -> &[LegendrianComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn continued_fraction(&self) -> ContinuedFraction {
        ContinuedFraction(self.components.iter().map(|c| c.a).collect())
    }

    pub fn rot(&self) -> Vec<i64> {
        self.components.iter().map(LegendrianComponent::rot).collect()
    }

    pub fn tb(&self) -> Vec<i64> {
        self.components.iter().map(LegendrianComponent::tb).collect()
    }

    pub fn conjugate(&self) -> Self {
        Self {
            components: self.components.iter().map(|c| c.conjugate()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ContactClass {
    UniversallyTight,
    VirtuallyOvertwisted,
}

impl fmt::Display for ContactClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContactClass::UniversallyTight => "UniversallyTight",
            ContactClass::VirtuallyOvertwisted => "VirtuallyOvertwisted",
        })
    }
}

/// Linking matrix of the chain: `−a_i` on the diagonal, 1 between neighbors.
pub fn linking_matrix(chain: &ChainSurgery) -> IntMatrix {
    let a: Vec<i64> = chain.components.iter().map(|c| c.a).collect();
    IntMatrix::from_fn(a.len(), a.len(), |i, j| {
        if i == j {
            BigInt::from(-a[i])
        } else if i.abs_diff(j) == 1 {
            BigInt::from(1)
        } else {
            BigInt::from(0)
        }
    })
}

/// Universally tight iff all stabilizations across the chain have one sign.
pub fn classify_structure(chain: &ChainSurgery) -> ContactClass {
    let any_plus = chain.components.iter().any(|c| c.splus > 0);
    let any_minus = chain.components.iter().any(|c| c.sminus > 0);
    if any_plus && any_minus {
        ContactClass::VirtuallyOvertwisted
    } else {
        ContactClass::UniversallyTight
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureEntry {
    pub stabs: Vec<(u32, u32)>,
    pub rot: Vec<i64>,
    pub class: ContactClass,
}

/// All tight structures presented by a chain, plus their grouping into
/// contactomorphism classes under `rot ↦ −rot`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureEnumeration {
    pub entries: Vec<StructureEntry>,
    /// Indices into `entries`, one orbit per class, ordered by first member.
    pub contactomorphism_classes: Vec<Vec<usize>>,
}

pub fn enumerate_structures(cf: &ContinuedFraction) -> StructureEnumeration {
    let mut stabs_list: Vec<Vec<(u32, u32)>> = vec![Vec::new()];
    for &a in cf.terms() {
        let total = (a - 2) as u32;
        stabs_list = stabs_list
            .into_iter()
            .flat_map(|prefix| {
                // splus ascending gives rot ascending.
                (0..=total).map(move |sp| {
                    let mut s = prefix.clone();
                    s.push((sp, total - sp));
                    s
                })
            })
            .collect();
    }
    let entries: Vec<StructureEntry> = stabs_list
        .into_iter()
        .map(|stabs| {
            let chain = ChainSurgery::from_parts(cf.terms(), &stabs)
                .expect("stabilization counts match framings");
            StructureEntry {
                rot: chain.rot(),
                class: classify_structure(&chain),
                stabs,
            }
        })
        .collect();

    let mut seen = vec![false; entries.len()];
    let mut classes = Vec::new();
    for i in 0..entries.len() {
        if seen[i] {
            continue;
        }
        seen[i] = true;
        let neg: Vec<i64> = entries[i].rot.iter().map(|r| -r).collect();
        let mut orbit = vec![i];
        if let Some(j) = entries.iter().position(|e| e.rot == neg) {
            if !seen[j] {
                seen[j] = true;
                orbit.push(j);
            }
        }
        classes.push(orbit);
    }
    StructureEnumeration {
        entries,
        contactomorphism_classes: classes,
    }
}

/// Data entering the `d3` formula for a 4-manifold built from 2-handles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D3Input {
    /// Intersection (linking) matrix, symmetric and nonsingular.
    pub q: IntMatrix,
    pub rot: Vec<BigInt>,
    pub chi: i64,
    pub sigma: i64,
}

impl D3Input {
    /// `χ = n + 1` (one 0-handle plus a 2-handle per component) and `σ`
    /// from the linking matrix.
    pub fn from_chain(chain: &ChainSurgery) -> Self {
        let q = linking_matrix(chain);
        let sigma = numeric::signature(&q).expect("linking matrix is symmetric");
        Self {
            rot: chain.rot().into_iter().map(BigInt::from).collect(),
            chi: chain.len() as i64 + 1,
            sigma,
            q,
        }
    }

    /// `c₁² = rot · Q⁻¹ · rot`.
    pub fn c1_squared(&self) -> Result<Rational, LegendrianError> {
        if !self.q.is_symmetric() {
            return Err(NumericError::NotSymmetric.into());
        }
        let x = numeric::solve_rational(&self.q, &self.rot)?;
        Ok(self
            .rot
            .iter()
            .zip(x)
            .fold(Rational::from_integer(0.into()), |acc, (r, xi)| {
                acc + Rational::from_integer(r.clone()) * xi
            }))
    }
}

/// `d3 = (c₁² − 3σ − 2χ) / 4`, exactly.
pub fn d3(input: &D3Input) -> Result<Rational, LegendrianError> {
    let c1sq = input.c1_squared()?;
    let correction = BigInt::from(3 * input.sigma + 2 * input.chi);
    Ok((c1sq - Rational::from_integer(correction)) / Rational::from_integer(4.into()))
}

pub fn d3_of_chain(chain: &ChainSurgery) -> Rational {
    // Chain linking matrices have determinant ±p, never zero.
    d3(&D3Input::from_chain(chain)).expect("chain linking matrix is nonsingular")
}
