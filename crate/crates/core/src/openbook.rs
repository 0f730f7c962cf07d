//! Planar pages, positive factorizations and the lantern relation, all at
//! the level of homology classes.
//!
//! A curve on a planar page is recorded by the set of holes it encloses; a
//! factorization is a multiset of such curves, one positive Dehn twist per
//! occurrence. Multisets are unordered, so commutation relations need no
//! representation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Pages are limited by the width of the [`Curve`] bitmask.
pub const MAX_HOLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpenBookError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unknown hole label {0:?}")]
    UnknownHole(String),
    #[error("curve class {0} is not present in the factorization")]
    MissingCurve(String),
    #[error("classes are not pairwise unions of disjoint sets: {0}")]
    InconsistentPairs(String),
    #[error("malformed factorization document: {0}")]
    Parse(String),
}

impl OpenBookError {
    pub fn name(&self) -> &'static str {
        match self {
            OpenBookError::InvalidInput(_) => "InvalidInput",
            OpenBookError::UnknownHole(_) => "UnknownHole",
            OpenBookError::MissingCurve(_) => "MissingCurve",
            OpenBookError::InconsistentPairs(_) => "InconsistentPairs",
            OpenBookError::Parse(_) => "Parse",
        }
    }
}

/// Genus-zero page: labeled interior holes. The outer boundary is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlanarPage {
    holes: Vec<String>,
}

impl PlanarPage {
    pub fn new<S: Into<String>>(holes: impl IntoIterator<Item = S>) -> Result<Self, OpenBookError> {
        let holes: Vec<String> = holes.into_iter().map(Into::into).collect();
        if holes.is_empty() {
            return Err(OpenBookError::InvalidInput("page has no holes".into()));
        }
        if holes.len() > MAX_HOLES {
            return Err(OpenBookError::InvalidInput(format!(
                "page has {} holes, at most {MAX_HOLES} supported",
                holes.len()
            )));
        }
        let mut seen = HashSet::new();
        for h in &holes {
            if h.is_empty() {
                return Err(OpenBookError::InvalidInput("empty hole label".into()));
            }
            if !seen.insert(h.as_str()) {
                return Err(OpenBookError::InvalidInput(format!("duplicate hole label {h:?}")));
            }
        }
        Ok(Self { holes })
    }

    /// Page of the rolled-up Hopf link: `s, p1..pk, n1..nl`.
    pub fn hopf(k: usize, l: usize) -> Self {
        let holes = std::iter::once("s".to_string())
            .chain((1..=k).map(|i| format!("p{i}")))
            .chain((1..=l).map(|j| format!("n{j}")));
        Self::new(holes).expect("canonical labels are distinct")
    }

    pub fn holes(&self) -> &[String] {
        &self.holes
    }

    pub fn len(&self) -> usize {
        self.holes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.holes.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.holes.iter().position(|h| h == label)
    }

    pub fn curve<S: AsRef<str>>(&self, labels: &[S]) -> Result<Curve, OpenBookError> {
        let mut mask = 0u64;
        for l in labels {
            let l = l.as_ref();
            let i = self
                .index_of(l)
                .ok_or_else(|| OpenBookError::UnknownHole(l.to_string()))?;
            mask |= 1 << i;
        }
        Curve::from_mask(mask)
            .ok_or_else(|| OpenBookError::InvalidInput("curve encloses no holes".into()))
    }

    /// The curve enclosing every hole (parallel to the outer boundary).
    pub fn outer(&self) -> Curve {
        Curve(full_mask(self.len()))
    }

    pub fn labels(&self, c: Curve) -> Vec<&str> {
        c.holes().map(|i| self.holes[i].as_str()).collect()
    }

    pub fn describe(&self, c: Curve) -> String {
        format!("{{{}}}", self.labels(c).join(","))
    }

    fn contains(&self, c: Curve) -> bool {
        c.0 & !full_mask(self.len()) == 0
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Homology class of a simple closed curve: the nonempty set of enclosed
/// holes, as a bitmask over hole indices.
///
/// Ordered lexicographically by ascending hole indices, so `{0} < {0,1} <
/// {0,1,2} < {0,2} < {1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Curve(u64);

impl Curve {
    pub fn from_mask(mask: u64) -> Option<Self> {
        (mask != 0).then_some(Self(mask))
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Option<Self> {
        Self::from_mask(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn size(self) -> u32 {
        self.0.count_ones()
    }

    pub fn encloses(self, hole: usize) -> bool {
        self.0 >> hole & 1 == 1
    }

    pub fn holes(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            (m != 0).then(|| {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                i
            })
        })
    }

    pub fn is_disjoint(self, other: Curve) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Curve) -> Curve {
        Curve(self.0 | other.0)
    }

    pub fn intersection(self, other: Curve) -> Option<Curve> {
        Curve::from_mask(self.0 & other.0)
    }
}

impl Ord for Curve {
    fn cmp(&self, other: &Self) -> Ordering {
        self.holes().cmp(other.holes())
    }
}

impl PartialOrd for Curve {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A positive factorization: multiset of curves on a planar page.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    page: PlanarPage,
    curves: BTreeMap<Curve, u32>,
}

impl Factorization {
    pub fn new(
        page: PlanarPage,
        curves: impl IntoIterator<Item = (Curve, u32)>,
    ) -> Result<Self, OpenBookError> {
        let mut map = BTreeMap::new();
        for (c, m) in curves {
            if !page.contains(c) {
                return Err(OpenBookError::InvalidInput(format!(
                    "curve mask {:#x} lies outside a page with {} holes",
                    c.0,
                    page.len()
                )));
            }
            if m > 0 {
                *map.entry(c).or_insert(0) += m;
            }
        }
        if map.is_empty() {
            return Err(OpenBookError::InvalidInput("factorization has no curves".into()));
        }
        Ok(Self { page, curves: map })
    }

    /// Convenience constructor from label lists, one entry per twist.
    pub fn from_labels<S: AsRef<str>>(
        page: PlanarPage,
        curves: &[&[S]],
    ) -> Result<Self, OpenBookError> {
        let cs = curves
            .iter()
            .map(|ls| page.curve(ls).map(|c| (c, 1)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(page, cs)
    }

    pub fn page(&self) -> &PlanarPage {
        &self.page
    }

    /// Distinct curves with multiplicities, in canonical order.
    pub fn curves(&self) -> impl Iterator<Item = (Curve, u32)> + '_ {
        self.curves.iter().map(|(&c, &m)| (c, m))
    }

    /// Every twist, repeated by multiplicity, in canonical order.
    pub fn occurrences(&self) -> Vec<Curve> {
        self.curves()
            .flat_map(|(c, m)| std::iter::repeat_n(c, m as usize))
            .collect()
    }

    pub fn multiplicity(&self, c: Curve) -> u32 {
        self.curves.get(&c).copied().unwrap_or(0)
    }

    /// Total number of twists.
    pub fn curve_count(&self) -> u32 {
        self.curves.values().sum()
    }

    /// Sum over twists of the indicator vectors of their curves.
    pub fn homology_class(&self) -> Vec<u32> {
        let mut v = vec![0; self.page.len()];
        for (c, m) in self.curves() {
            for h in c.holes() {
                v[h] += m;
            }
        }
        v
    }

    fn with_changes(&self, remove: &[Curve], add: &[Curve]) -> Result<Self, OpenBookError> {
        let mut map = self.curves.clone();
        for &c in remove {
            match map.get_mut(&c) {
                Some(m) if *m > 1 => *m -= 1,
                Some(_) => {
                    map.remove(&c);
                }
                None => return Err(OpenBookError::MissingCurve(self.page.describe(c))),
            }
        }
        Self::new(self.page.clone(), map.into_iter().chain(add.iter().map(|&c| (c, 1))))
    }

    pub fn to_document(&self) -> FactorizationDocument {
        FactorizationDocument {
            holes: self.page.holes.clone(),
            curves: self
                .curves()
                .map(|(c, m)| CurveEntry {
                    encloses: self.page.labels(c).into_iter().map(String::from).collect(),
                    multiplicity: m,
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &FactorizationDocument) -> Result<Self, OpenBookError> {
        let page = PlanarPage::new(doc.holes.iter().cloned())?;
        let curves = doc
            .curves
            .iter()
            .map(|e| {
                if e.multiplicity == 0 {
                    return Err(OpenBookError::Parse("multiplicity must be positive".into()));
                }
                page.curve(&e.encloses).map(|c| (c, e.multiplicity))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(page, curves)
    }

    /// Canonical JSON serialization, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_document()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, OpenBookError> {
        let doc: FactorizationDocument =
            serde_json::from_str(text).map_err(|e| OpenBookError::Parse(e.to_string()))?;
        Self::from_document(&doc)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .curves()
            .map(|(c, m)| {
                if m == 1 {
                    self.page.describe(c)
                } else {
                    format!("{}^{m}", self.page.describe(c))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// On-disk form of a factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizationDocument {
    pub holes: Vec<String>,
    pub curves: Vec<CurveEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveEntry {
    pub encloses: Vec<String>,
    pub multiplicity: u32,
}

/// Monodromy of contact (−1)-surgery on the Hopf link with framings
/// `−a1, −a2`, the first component stabilized only positively and the second
/// only negatively.
///
/// Curves: the outer class, `{s, p_i}`, `{s, n_j}`, and one boundary-parallel
/// twist per `p_i` and `n_j`. When `a1 = 2` or `a2 = 2` the corresponding
/// class collapses onto `{s}`.
pub fn canonical_hopf_factorization(a1: i64, a2: i64) -> Result<Factorization, OpenBookError> {
    if a1 < 2 || a2 < 2 {
        return Err(OpenBookError::InvalidInput(format!(
            "framing parameters must be at least 2, got ({a1}, {a2})"
        )));
    }
    let (k, l) = ((a1 - 2) as usize, (a2 - 2) as usize);
    if 1 + k + l > MAX_HOLES {
        return Err(OpenBookError::InvalidInput(format!(
            "page would need {} holes, at most {MAX_HOLES} supported",
            1 + k + l
        )));
    }
    let page = PlanarPage::hopf(k, l);
    let positives = Curve::from_indices(0..=k).expect("contains s");
    let negatives = Curve::from_indices(std::iter::once(0).chain(k + 1..=k + l)).expect("contains s");
    let mut curves = vec![(page.outer(), 1), (positives, 1), (negatives, 1)];
    curves.extend((1..=k + l).map(|i| (Curve::from_indices([i]).unwrap(), 1)));
    Factorization::new(page, curves)
}

/// Single and joint multiplicities of a factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiplicityProfile {
    holes: Vec<String>,
    /// Symmetric; the diagonal holds the single multiplicities.
    table: Vec<Vec<u32>>,
}

impl MultiplicityProfile {
    /// Builds a profile from a symmetric table whose diagonal holds `m(h)`.
    pub fn from_table(page: &PlanarPage, table: Vec<Vec<u32>>) -> Result<Self, OpenBookError> {
        let n = page.len();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(OpenBookError::InvalidInput(format!(
                "profile table must be {n}x{n}"
            )));
        }
        for i in 0..n {
            for j in 0..n {
                if table[i][j] != table[j][i] {
                    return Err(OpenBookError::InvalidInput("profile table is not symmetric".into()));
                }
                if table[i][j] > table[i][i].min(table[j][j]) {
                    return Err(OpenBookError::InvalidInput(format!(
                        "joint multiplicity of {} and {} exceeds a single multiplicity",
                        page.holes[i], page.holes[j]
                    )));
                }
            }
        }
        Ok(Self {
            holes: page.holes.clone(),
            table,
        })
    }

    pub fn holes(&self) -> &[String] {
        &self.holes
    }

    pub fn single(&self, h: usize) -> u32 {
        self.table[h][h]
    }

    pub fn joint(&self, h: usize, k: usize) -> u32 {
        self.table[h][k]
    }

    pub fn single_by_label(&self, h: &str) -> Option<u32> {
        let i = self.holes.iter().position(|x| x == h)?;
        Some(self.single(i))
    }

    pub fn joint_by_label(&self, h: &str, k: &str) -> Option<u32> {
        let i = self.holes.iter().position(|x| x == h)?;
        let j = self.holes.iter().position(|x| x == k)?;
        Some(self.joint(i, j))
    }

    pub fn max_single(&self) -> u32 {
        (0..self.holes.len()).map(|i| self.single(i)).max().unwrap_or(0)
    }

    pub fn to_document(&self) -> ProfileDocument {
        let n = self.holes.len();
        let mut joint = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                joint.push(JointEntry {
                    holes: [self.holes[i].clone(), self.holes[j].clone()],
                    multiplicity: self.joint(i, j),
                });
            }
        }
        ProfileDocument {
            single: self
                .holes
                .iter()
                .enumerate()
                .map(|(i, h)| SingleEntry {
                    hole: h.clone(),
                    multiplicity: self.single(i),
                })
                .collect(),
            joint,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileDocument {
    pub single: Vec<SingleEntry>,
    pub joint: Vec<JointEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingleEntry {
    pub hole: String,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointEntry {
    pub holes: [String; 2],
    pub multiplicity: u32,
}

/// `m(h)` counts twists whose curve encloses `h`; `m(h,h')` those enclosing
/// both.
pub fn multiplicity_profile(f: &Factorization) -> MultiplicityProfile {
    let n = f.page.len();
    let mut table = vec![vec![0u32; n]; n];
    for (c, m) in f.curves() {
        let hs: Vec<usize> = c.holes().collect();
        for &i in &hs {
            for &j in &hs {
                table[i][j] += m;
            }
        }
    }
    MultiplicityProfile {
        holes: f.page.holes.clone(),
        table,
    }
}

/// Replaces the four twists about `S1, S2, S3, S1∪S2∪S3` by the three twists
/// about `S1∪S2, S1∪S3, S2∪S3`.
pub fn lantern_substitute(f: &Factorization, inner: [Curve; 3]) -> Result<Factorization, OpenBookError> {
    let [a, b, c] = inner;
    if !(a.is_disjoint(b) && a.is_disjoint(c) && b.is_disjoint(c)) {
        return Err(OpenBookError::InvalidInput(format!(
            "inner classes {}, {}, {} are not pairwise disjoint",
            f.page.describe(a),
            f.page.describe(b),
            f.page.describe(c)
        )));
    }
    let outer = a.union(b).union(c);
    for x in [a, b, c, outer] {
        if f.multiplicity(x) == 0 {
            return Err(OpenBookError::MissingCurve(f.page.describe(x)));
        }
    }
    f.with_changes(&[a, b, c, outer], &[a.union(b), a.union(c), b.union(c)])
}

/// Recovers `S1, S2, S3` from the three classes `S1∪S2, S1∪S3, S2∪S3`
/// (given in any order).
pub fn lantern_inner_classes(
    page: &PlanarPage,
    pairs: [Curve; 3],
) -> Result<[Curve; 3], OpenBookError> {
    let [x, y, z] = pairs;
    let inconsistent = || {
        OpenBookError::InconsistentPairs(format!(
            "{}, {}, {}",
            page.describe(x),
            page.describe(y),
            page.describe(z)
        ))
    };
    let s1 = x.intersection(y).ok_or_else(inconsistent)?;
    let s2 = x.intersection(z).ok_or_else(inconsistent)?;
    let s3 = y.intersection(z).ok_or_else(inconsistent)?;
    let disjoint = s1.is_disjoint(s2) && s1.is_disjoint(s3) && s2.is_disjoint(s3);
    if !disjoint || x != s1.union(s2) || y != s1.union(s3) || z != s2.union(s3) {
        return Err(inconsistent());
    }
    Ok([s1, s2, s3])
}

/// Inverse of [`lantern_substitute`].
pub fn lantern_unsubstitute(
    f: &Factorization,
    pairs: [Curve; 3],
) -> Result<Factorization, OpenBookError> {
    let [s1, s2, s3] = lantern_inner_classes(&f.page, pairs)?;
    for p in pairs {
        if f.multiplicity(p) == 0 {
            return Err(OpenBookError::MissingCurve(f.page.describe(p)));
        }
    }
    f.with_changes(&pairs, &[s1, s2, s3, s1.union(s2).union(s3)])
}
