//! Enumeration of homology configurations realizing a multiplicity profile.
//!
//! A configuration is a multiset of nonempty hole subsets whose single and
//! joint multiplicities match the profile. Once the multiplicities of all
//! subsets with at least three holes are fixed, the profile determines the
//! rest: the count of a two-hole curve `{h,h'}` is `m(h,h')` minus the
//! contribution of larger curves, and likewise for one-hole curves. The
//! search therefore runs depth-first over the larger subsets only (largest
//! first, canonical order within a size), pruned by the per-pair and
//! per-hole budgets, and fills in the small curves at each leaf.
//!
//! For a hole `h` the forced one-hole count is `slack(h) = hole_left(h) −
//! Σ_g pair_left(h,g)`. A curve of size `k` through `h` raises the slack by
//! `k − 2` per twist while consuming `k − 1` units of pair budget, so a
//! negative slack that cannot be recovered from the remaining pair budget
//! prunes the branch.
//!
//! Configurations are homology-level data; several may correspond to no
//! actual factorization of the monodromy.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::openbook::{multiplicity_profile, Curve, Factorization, MultiplicityProfile, PlanarPage};

pub const MAX_SEARCH_HOLES: usize = 12;
pub const MAX_SEARCH_MULTIPLICITY: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search bounds exceeded: {0}")]
    BoundsExceeded(String),
    #[error("profile does not match the page: {0}")]
    ProfileMismatch(String),
}

impl SearchError {
    pub fn name(&self) -> &'static str {
        match self {
            SearchError::BoundsExceeded(_) => "BoundsExceeded",
            SearchError::ProfileMismatch(_) => "ProfileMismatch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    /// Every labeled configuration is reported.
    Raw,
    /// One representative per orbit of hole relabelings preserving the
    /// profile.
    UpToProfileSymmetry,
}

#[derive(Debug, Clone)]
pub struct ConfigQuery {
    pub page: PlanarPage,
    pub profile: MultiplicityProfile,
    pub symmetry: Symmetry,
}

impl ConfigQuery {
    /// Query for the profile of an existing factorization.
    pub fn for_factorization(f: &Factorization, symmetry: Symmetry) -> Self {
        Self {
            page: f.page().clone(),
            profile: multiplicity_profile(f),
            symmetry,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConfigResult {
    /// All configurations (raw) or one per symmetry class, in canonical order.
    pub configurations: Vec<Factorization>,
    pub count_raw: usize,
    pub count_up_to_symmetry: usize,
}

pub fn verify_config(f: &Factorization, profile: &MultiplicityProfile) -> bool {
    multiplicity_profile(f) == *profile
}

pub fn enumerate_configs(q: &ConfigQuery) -> Result<ConfigResult, SearchError> {
    let n = q.page.len();
    if q.profile.holes() != q.page.holes() {
        return Err(SearchError::ProfileMismatch(format!(
            "profile holes {:?} differ from page holes {:?}",
            q.profile.holes(),
            q.page.holes()
        )));
    }
    if n > MAX_SEARCH_HOLES {
        return Err(SearchError::BoundsExceeded(format!(
            "{n} holes, at most {MAX_SEARCH_HOLES} supported"
        )));
    }
    if q.profile.max_single() > MAX_SEARCH_MULTIPLICITY {
        return Err(SearchError::BoundsExceeded(format!(
            "multiplicity {} exceeds {MAX_SEARCH_MULTIPLICITY}",
            q.profile.max_single()
        )));
    }

    let raw = Search::new(&q.profile).run();
    let raw: Vec<Factorization> = raw
        .into_iter()
        .map(|curves| Factorization::new(q.page.clone(), curves).expect("curves lie on the page"))
        .collect();

    let mut representatives: Vec<usize> = Vec::new();
    for (i, f) in raw.iter().enumerate() {
        if !representatives
            .iter()
            .any(|&j| related_by_profile_symmetry(&raw[j], f, &q.profile))
        {
            representatives.push(i);
        }
    }
    let count_raw = raw.len();
    let count_up_to_symmetry = representatives.len();
    let configurations = match q.symmetry {
        Symmetry::Raw => raw,
        Symmetry::UpToProfileSymmetry => {
            let keep: BTreeSet<usize> = representatives.into_iter().collect();
            raw.into_iter()
                .enumerate()
                .filter(|(i, _)| keep.contains(i))
                .map(|(_, f)| f)
                .collect()
        }
    };
    Ok(ConfigResult {
        configurations,
        count_raw,
        count_up_to_symmetry,
    })
}

struct Search<'a> {
    profile: &'a MultiplicityProfile,
    n: usize,
    /// Subsets with at least three holes, every pair of which may co-occur.
    candidates: Vec<Curve>,
    pair_left: Vec<Vec<u32>>,
    hole_left: Vec<u32>,
    chosen: Vec<(Curve, u32)>,
    out: Vec<Vec<(Curve, u32)>>,
}

impl<'a> Search<'a> {
    fn new(profile: &'a MultiplicityProfile) -> Self {
        let n = profile.holes().len();
        let mut candidates: Vec<Curve> = (1u64..1 << n)
            .filter(|m| m.count_ones() >= 3)
            .map(|m| Curve::from_mask(m).unwrap())
            .filter(|c| {
                let hs: Vec<usize> = c.holes().collect();
                hs.iter()
                    .enumerate()
                    .all(|(i, &h)| hs[i + 1..].iter().all(|&k| profile.joint(h, k) > 0))
            })
            .collect();
        candidates.sort_by(|a, b| b.size().cmp(&a.size()).then(a.cmp(b)));
        Self {
            profile,
            n,
            candidates,
            pair_left: (0..n)
                .map(|i| (0..n).map(|j| profile.joint(i, j)).collect())
                .collect(),
            hole_left: (0..n).map(|i| profile.single(i)).collect(),
            chosen: Vec::new(),
            out: Vec::new(),
        }
    }

    fn run(mut self) -> Vec<Vec<(Curve, u32)>> {
        self.descend(0);
        self.out.sort();
        self.out
    }

    fn capacity(&self, c: Curve) -> u32 {
        let hs: Vec<usize> = c.holes().collect();
        let mut cap = u32::MAX;
        for (i, &h) in hs.iter().enumerate() {
            cap = cap.min(self.hole_left[h]);
            for &k in &hs[i + 1..] {
                cap = cap.min(self.pair_left[h][k]);
            }
        }
        cap
    }

    fn apply(&mut self, c: Curve, k: u32, sign: bool) {
        let hs: Vec<usize> = c.holes().collect();
        let upd = |v: &mut u32| {
            if sign {
                *v -= k
            } else {
                *v += k
            }
        };
        for (i, &h) in hs.iter().enumerate() {
            upd(&mut self.hole_left[h]);
            for &g in &hs[i + 1..] {
                upd(&mut self.pair_left[h][g]);
                upd(&mut self.pair_left[g][h]);
            }
        }
    }

    /// False when some hole's slack can no longer reach zero using curves of
    /// at most `max_size` holes.
    fn recoverable(&self, max_size: u32) -> bool {
        (0..self.n).all(|h| {
            let budget: u32 = self.pair_left[h].iter().enumerate()
                .filter(|&(g, _)| g != h)
                .map(|(_, &v)| v)
                .sum();
            let deficit = i64::from(budget) - i64::from(self.hole_left[h]);
            if deficit <= 0 {
                return true;
            }
            if max_size < 3 {
                return false;
            }
            deficit * i64::from(max_size - 1) <= i64::from(budget) * i64::from(max_size - 2)
        })
    }

    fn descend(&mut self, idx: usize) {
        let max_size = self.candidates.get(idx).map_or(2, |c| c.size());
        if !self.recoverable(max_size) {
            return;
        }
        if idx == self.candidates.len() {
            self.complete();
            return;
        }
        let c = self.candidates[idx];
        let cap = self.capacity(c);
        self.descend(idx + 1);
        for k in 1..=cap {
            self.apply(c, k, true);
            self.chosen.push((c, k));
            self.descend(idx + 1);
            self.chosen.pop();
            self.apply(c, k, false);
        }
    }

    /// Forced counts of two-hole and one-hole curves; records the
    /// configuration when they are all non-negative.
    fn complete(&mut self) {
        let n = self.n;
        let mut curves = self.chosen.clone();
        let mut hole_left = self.hole_left.clone();
        for h in 0..n {
            for g in h + 1..n {
                let k = self.pair_left[h][g];
                if k == 0 {
                    continue;
                }
                if hole_left[h] < k || hole_left[g] < k {
                    return;
                }
                hole_left[h] -= k;
                hole_left[g] -= k;
                curves.push((Curve::from_indices([h, g]).unwrap(), k));
            }
        }
        for (h, &k) in hole_left.iter().enumerate() {
            if k > 0 {
                curves.push((Curve::from_indices([h]).unwrap(), k));
            }
        }
        if curves.is_empty() {
            return;
        }
        curves.sort();
        debug_assert!(self.profile_matches(&curves));
        self.out.push(curves);
    }

    fn profile_matches(&self, curves: &[(Curve, u32)]) -> bool {
        let n = self.n;
        let mut table = vec![vec![0u32; n]; n];
        for &(c, m) in curves {
            for h in c.holes() {
                for g in c.holes() {
                    table[h][g] += m;
                }
            }
        }
        (0..n).all(|h| (0..n).all(|g| table[h][g] == self.profile.joint(h, g)))
    }
}

/// Whether some hole permutation preserving `profile` carries the curve
/// multiset of `a` onto that of `b`.
pub fn related_by_profile_symmetry(
    a: &Factorization,
    b: &Factorization,
    profile: &MultiplicityProfile,
) -> bool {
    if a.curve_count() != b.curve_count() || a.curves().count() != b.curves().count() {
        return false;
    }
    let n = profile.holes().len();
    let ca: Vec<(Curve, u32)> = a.curves().collect();
    let cb: Vec<(Curve, u32)> = b.curves().collect();
    // Per-hole signature: sorted (curve size, multiplicity) of curves through it.
    let signature = |cs: &[(Curve, u32)], h: usize| {
        let mut s: Vec<(u32, u32)> = cs
            .iter()
            .filter(|(c, _)| c.encloses(h))
            .map(|&(c, m)| (c.size(), m))
            .collect();
        s.sort_unstable();
        s
    };
    let sig_a: Vec<_> = (0..n).map(|h| signature(&ca, h)).collect();
    let sig_b: Vec<_> = (0..n).map(|h| signature(&cb, h)).collect();

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_isomorphism(0, &mut image, &mut used, &ca, &cb, &sig_a, &sig_b, profile)
}

#[allow(clippy::too_many_arguments)]
fn extend_isomorphism(
    h: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    ca: &[(Curve, u32)],
    cb: &[(Curve, u32)],
    sig_a: &[Vec<(u32, u32)>],
    sig_b: &[Vec<(u32, u32)>],
    profile: &MultiplicityProfile,
) -> bool {
    let n = image.len();
    if h == n {
        let mut mapped: Vec<(Curve, u32)> = ca
            .iter()
            .map(|&(c, m)| (Curve::from_indices(c.holes().map(|i| image[i])).unwrap(), m))
            .collect();
        mapped.sort();
        return mapped == cb;
    }
    for t in 0..n {
        if used[t] || sig_a[h] != sig_b[t] || profile.single(h) != profile.single(t) {
            continue;
        }
        if (0..h).any(|g| profile.joint(g, h) != profile.joint(image[g], t)) {
            continue;
        }
        image[h] = t;
        used[t] = true;
        if partial_consistent(h + 1, image, ca, cb)
            && extend_isomorphism(h + 1, image, used, ca, cb, sig_a, sig_b, profile)
        {
            return true;
        }
        used[t] = false;
        image[h] = usize::MAX;
    }
    false
}

/// Curves restricted to the assigned holes must agree as multisets of
/// (restricted set, size, multiplicity).
fn partial_consistent(assigned: usize, image: &[usize], ca: &[(Curve, u32)], cb: &[(Curve, u32)]) -> bool {
    let dom = crate::openbook::full_mask(assigned);
    let img_mask: u64 = image[..assigned].iter().fold(0, |m, &t| m | (1 << t));
    let mut left: Vec<(u64, u32, u32)> = ca
        .iter()
        .map(|&(c, m)| {
            let r = c.mask() & dom;
            let mapped = (0..assigned)
                .filter(|&i| r >> i & 1 == 1)
                .fold(0u64, |acc, i| acc | (1 << image[i]));
            (mapped, c.size(), m)
        })
        .collect();
    let mut right: Vec<(u64, u32, u32)> = cb
        .iter()
        .map(|&(c, m)| (c.mask() & img_mask, c.size(), m))
        .collect();
    left.sort_unstable();
    right.sort_unstable();
    left == right
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::openbook::{canonical_hopf_factorization, lantern_substitute};

    fn counts(a1: i64, a2: i64) -> (usize, usize) {
        let f = canonical_hopf_factorization(a1, a2).unwrap();
        let r = enumerate_configs(&ConfigQuery::for_factorization(&f, Symmetry::Raw)).unwrap();
        (r.count_raw, r.count_up_to_symmetry)
    }

    #[test]
    fn unique_for_three_three() {
        let f = canonical_hopf_factorization(3, 3).unwrap();
        let r = enumerate_configs(&ConfigQuery::for_factorization(&f, Symmetry::Raw)).unwrap();
        assert_eq!(r.count_raw, 1);
        assert_eq!(r.configurations, vec![f]);
    }

    #[test]
    fn two_for_three_four() {
        let f = canonical_hopf_factorization(3, 4).unwrap();
        let r = enumerate_configs(&ConfigQuery::for_factorization(
            &f,
            Symmetry::UpToProfileSymmetry,
        ))
        .unwrap();
        assert_eq!(r.count_up_to_symmetry, 2);
        let p = f.page().clone();
        let g = lantern_substitute(
            &f,
            [
                p.curve(&["n1"]).unwrap(),
                p.curve(&["n2"]).unwrap(),
                p.curve(&["s", "p1"]).unwrap(),
            ],
        )
        .unwrap();
        assert!(r.configurations.contains(&f));
        assert!(r.configurations.contains(&g));
    }

    #[test]
    fn four_four_up_to_symmetry() {
        assert_eq!(counts(4, 4).1, 2);
    }

    #[test]
    fn one_hole_page() {
        let page = PlanarPage::new(["s"]).unwrap();
        let f = Factorization::from_labels(page, &[&["s"], &["s"], &["s"]]).unwrap();
        let r = enumerate_configs(&ConfigQuery::for_factorization(&f, Symmetry::Raw)).unwrap();
        assert_eq!(r.configurations, vec![f]);
    }

    #[test]
    fn verify_examples() {
        let f = canonical_hopf_factorization(3, 4).unwrap();
        let prof = multiplicity_profile(&f);
        assert!(verify_config(&f, &prof));
        let p = f.page().clone();
        let missing: Vec<(Curve, u32)> = f
            .curves()
            .filter(|&(c, _)| c != p.curve(&["n2"]).unwrap())
            .collect();
        let g = Factorization::new(p, missing).unwrap();
        assert!(!verify_config(&g, &prof));
    }

    #[test]
    fn bounds_enforced() {
        let f = canonical_hopf_factorization(8, 8).unwrap();
        let e = enumerate_configs(&ConfigQuery::for_factorization(&f, Symmetry::Raw));
        assert!(matches!(e, Err(SearchError::BoundsExceeded(_))));

        let page = PlanarPage::new(["s"]).unwrap();
        let f = Factorization::new(page.clone(), [(page.outer(), 9)]).unwrap();
        let e = enumerate_configs(&ConfigQuery::for_factorization(&f, Symmetry::Raw));
        assert!(matches!(e, Err(SearchError::BoundsExceeded(_))));
    }
}
