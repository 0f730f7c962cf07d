//! Stein filling classification for virtually overtwisted structures on
//! lens spaces from Legendrian surgery on the Hopf link.
//!
//! Decision tree for a two-component chain:
//!
//! 1. universally tight: out of scope, `d3` still reported;
//! 2. both components stabilized on both sides: unique filling (`MenkeA`);
//! 3. one component stabilized on both sides, the other with `a ≠ 4`:
//!    unique filling (`MenkeB`);
//! 4. one component stabilized on both sides, the other with `a = 4`: two
//!    fillings with `b2 ∈ {1, 2}` (`MenkeC`);
//! 5. each component stabilized on one side only, opposite sides: unique
//!    filling when `a1 ≠ 4 ≠ a2` (`OppositeSidesUnique`), otherwise two
//!    homeomorphism classes, the larger-`b2` one unique up to
//!    diffeomorphism (`OppositeSidesExtra`).

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::filling::{filling_invariants, FillingInvariants};
use crate::json::rational_string;
use crate::legendrian::{
    cf_value, classify_structure, d3_of_chain, ChainSurgery, ContactClass, ContinuedFraction,
};
use crate::openbook::{canonical_hopf_factorization, lantern_substitute};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("case {0} is not modeled by the Hopf-link page")]
    CaseUnsupported(FillingCase),
    #[error("inconsistent prediction: {0}")]
    Inconsistent(String),
}

impl ClassifyError {
    pub fn name(&self) -> &'static str {
        match self {
            ClassifyError::InvalidInput(_) => "InvalidInput",
            ClassifyError::CaseUnsupported(_) => "CaseUnsupported",
            ClassifyError::Inconsistent(_) => "Inconsistent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FillingCase {
    MenkeA,
    MenkeB,
    MenkeC,
    OppositeSidesUnique,
    OppositeSidesExtra,
    UniversallyTightOutOfScope,
}

impl fmt::Display for FillingCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Uniqueness {
    #[serde(rename = "unique-diffeo")]
    UniqueDiffeo,
    #[serde(rename = "unique-homeo")]
    UniqueHomeo,
}

impl fmt::Display for Uniqueness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Uniqueness::UniqueDiffeo => "unique-diffeo",
            Uniqueness::UniqueHomeo => "unique-homeo",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FillingClass {
    pub b2: u32,
    pub status: Uniqueness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub lens: (i64, i64),
    pub cf: ContinuedFraction,
    pub stabs: Vec<(u32, u32)>,
    pub rot: Vec<i64>,
    pub structure: ContactClass,
    pub case: FillingCase,
    /// Sorted by decreasing `b2`; empty for universally tight input.
    pub filling_classes: Vec<FillingClass>,
    pub d3: Rational,
}

impl ClassificationReport {
    pub fn b2_values(&self) -> Vec<u32> {
        self.filling_classes.iter().map(|c| c.b2).collect()
    }

    pub fn to_document(&self) -> ReportDocument {
        ReportDocument {
            lens: [self.lens.0, self.lens.1],
            cf: self.cf.terms().to_vec(),
            stabs: self.stabs.iter().map(|&(a, b)| [a, b]).collect(),
            rot: self.rot.clone(),
            structure: self.structure,
            case: self.case,
            filling_classes: self.filling_classes.clone(),
            d3: rational_string(&self.d3),
        }
    }
}

/// Serialized report. Field names are part of the CLI contract.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportDocument {
    pub lens: [i64; 2],
    pub cf: Vec<i64>,
    pub stabs: Vec<[u32; 2]>,
    pub rot: Vec<i64>,
    pub structure: ContactClass,
    pub case: FillingCase,
    pub filling_classes: Vec<FillingClass>,
    pub d3: String,
}

fn unique() -> Vec<FillingClass> {
    vec![FillingClass {
        b2: 2,
        status: Uniqueness::UniqueDiffeo,
    }]
}

pub fn classify(chain: &ChainSurgery) -> Result<ClassificationReport, ClassifyError> {
    let [c1, c2] = chain.components() else {
        return Err(ClassifyError::InvalidInput(format!(
            "classification needs a two-component chain, got {}",
            chain.len()
        )));
    };
    let structure = classify_structure(chain);
    let (case, filling_classes) = match structure {
        ContactClass::UniversallyTight => (FillingCase::UniversallyTightOutOfScope, Vec::new()),
        ContactClass::VirtuallyOvertwisted => match (c1.is_mixed(), c2.is_mixed()) {
            (true, true) => (FillingCase::MenkeA, unique()),
            (true, false) | (false, true) => {
                let other = if c1.is_mixed() { c2 } else { c1 };
                if other.a() == 4 {
                    // Attaching a 2-handle to either filling of L(4,1).
                    let classes = vec![
                        FillingClass {
                            b2: 2,
                            status: Uniqueness::UniqueDiffeo,
                        },
                        FillingClass {
                            b2: 1,
                            status: Uniqueness::UniqueDiffeo,
                        },
                    ];
                    (FillingCase::MenkeC, classes)
                } else {
                    (FillingCase::MenkeB, unique())
                }
            }
            (false, false) => {
                if c1.a() == 4 || c2.a() == 4 {
                    let classes = vec![
                        FillingClass {
                            b2: 2,
                            status: Uniqueness::UniqueDiffeo,
                        },
                        FillingClass {
                            b2: 1,
                            status: Uniqueness::UniqueHomeo,
                        },
                    ];
                    (FillingCase::OppositeSidesExtra, classes)
                } else {
                    (FillingCase::OppositeSidesUnique, unique())
                }
            }
        },
    };
    let cf = chain.continued_fraction();
    Ok(ClassificationReport {
        lens: cf_value(&cf),
        stabs: chain
            .components()
            .iter()
            .map(|c| (c.splus(), c.sminus()))
            .collect(),
        rot: chain.rot(),
        cf,
        structure,
        case,
        filling_classes,
        d3: d3_of_chain(chain),
    })
}

/// Invariants of the predicted fillings in the opposite-sides cases, taken
/// from the canonical page and, when some `a_i = 4`, its lantern
/// substitution.
pub fn expected_filling_profile(
    report: &ClassificationReport,
) -> Result<Vec<FillingInvariants>, ClassifyError> {
    if !matches!(
        report.case,
        FillingCase::OppositeSidesUnique | FillingCase::OppositeSidesExtra
    ) {
        return Err(ClassifyError::CaseUnsupported(report.case));
    }
    let &[a1, a2] = report.cf.terms() else {
        return Err(ClassifyError::InvalidInput("report is not for a two-component chain".into()));
    };
    let canonical = canonical_hopf_factorization(a1, a2)
        .map_err(|e| ClassifyError::InvalidInput(e.to_string()))?;
    let mut fillings = vec![filling_invariants(&canonical)];
    if report.case == FillingCase::OppositeSidesExtra {
        let page = canonical.page();
        let c = |ls: &[&str]| page.curve(ls).expect("canonical labels");
        let inner = if a2 == 4 {
            [c(&["n1"]), c(&["n2"]), page.curve(&positive_side(page.holes())).unwrap()]
        } else {
            [c(&["p1"]), c(&["p2"]), page.curve(&negative_side(page.holes())).unwrap()]
        };
        let lantern = lantern_substitute(&canonical, inner)
            .map_err(|e| ClassifyError::Inconsistent(e.to_string()))?;
        fillings.push(filling_invariants(&lantern));
    }
    let predicted: Vec<u32> = report.b2_values();
    let computed: Vec<u32> = fillings.iter().map(|f| f.b2 as u32).collect();
    if predicted != computed {
        return Err(ClassifyError::Inconsistent(format!(
            "predicted b2 {predicted:?}, page model gives {computed:?}"
        )));
    }
    Ok(fillings)
}

fn positive_side(holes: &[String]) -> Vec<&str> {
    holes
        .iter()
        .filter(|h| *h == "s" || h.starts_with('p'))
        .map(String::as_str)
        .collect()
}

fn negative_side(holes: &[String]) -> Vec<&str> {
    holes
        .iter()
        .filter(|h| *h == "s" || h.starts_with('n'))
        .map(String::as_str)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::IntMatrix;
    use num_bigint::BigInt;

    fn report(a: [i64; 2], stabs: [(u32, u32); 2]) -> ClassificationReport {
        classify(&ChainSurgery::from_parts(&a, &stabs).unwrap()).unwrap()
    }

    #[test]
    fn three_four_opposite_sides() {
        let r = report([3, 4], [(1, 0), (0, 2)]);
        assert_eq!(r.case, FillingCase::OppositeSidesExtra);
        assert_eq!(
            r.filling_classes,
            vec![
                FillingClass { b2: 2, status: Uniqueness::UniqueDiffeo },
                FillingClass { b2: 1, status: Uniqueness::UniqueHomeo },
            ]
        );
        assert_eq!(r.d3, Rational::new((-3).into(), 11.into()));
        assert_eq!(r.lens, (11, 4));
    }

    #[test]
    fn decision_tree_examples() {
        assert_eq!(report([3, 3], [(1, 0), (0, 1)]).case, FillingCase::OppositeSidesUnique);
        assert_eq!(report([3, 3], [(1, 0), (0, 1)]).b2_values(), vec![2]);
        assert_eq!(report([5, 5], [(1, 2), (2, 1)]).case, FillingCase::MenkeA);
        assert_eq!(report([5, 4], [(3, 0), (1, 1)]).case, FillingCase::MenkeB);
        let c = report([4, 5], [(2, 0), (2, 1)]);
        assert_eq!(c.case, FillingCase::MenkeC);
        assert_eq!(c.b2_values(), vec![2, 1]);
        let b = report([4, 5], [(1, 1), (3, 0)]);
        assert_eq!(b.case, FillingCase::MenkeB);
        assert_eq!(b.b2_values(), vec![2]);
        let ut = report([3, 4], [(1, 0), (2, 0)]);
        assert_eq!(ut.case, FillingCase::UniversallyTightOutOfScope);
        assert!(ut.filling_classes.is_empty());
        assert_eq!(ut.d3, Rational::new((-5).into(), 11.into()));
        // a = 2 partner of a mixed component.
        assert_eq!(report([2, 5], [(0, 0), (1, 2)]).case, FillingCase::MenkeB);
    }

    #[test]
    fn rejects_wrong_length() {
        let chain = ChainSurgery::from_parts(&[3], &[(1, 0)]).unwrap();
        assert_eq!(classify(&chain).unwrap_err().name(), "InvalidInput");
    }

    #[test]
    fn expected_fillings_three_four() {
        let f = expected_filling_profile(&report([3, 4], [(1, 0), (0, 2)])).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!((f[0].b2, f[0].chi, f[0].sigma), (2, 3, -2));
        assert_eq!((f[1].b2, f[1].chi, f[1].sigma), (1, 2, -1));
        assert_eq!(f[1].q, IntMatrix::from_i64_rows(&[[-11]]));
    }

    #[test]
    fn expected_fillings_four_first() {
        let f = expected_filling_profile(&report([4, 3], [(0, 2), (1, 0)])).unwrap();
        assert_eq!(f[1].q, IntMatrix::from_i64_rows(&[[-11]]));
    }

    #[test]
    fn expected_fillings_three_three() {
        let f = expected_filling_profile(&report([3, 3], [(1, 0), (0, 1)])).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!((f[0].b2, f[0].chi, f[0].sigma), (2, 3, -2));
        assert_eq!(f[0].det_abs, BigInt::from(8));
    }

    #[test]
    fn expected_fillings_unsupported_for_menke() {
        let e = expected_filling_profile(&report([5, 5], [(1, 2), (2, 1)])).unwrap_err();
        assert_eq!(e, ClassifyError::CaseUnsupported(FillingCase::MenkeA));
    }
}
