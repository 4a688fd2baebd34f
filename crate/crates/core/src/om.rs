//! The oriented-matroid container and its cocircuit-level operations.
//!
//! Cocircuits are the stored representation. Covectors are produced on
//! demand by [`OrientedMatroid::covector_span`], which is only practical on
//! small ground sets.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{OmError, Result};
use crate::sign::{GroundSet, Sign, SignVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedMatroid {
    ground: GroundSet,
    rank: usize,
    cocircuits: Vec<SignVector>,
}

impl OrientedMatroid {
    /// Builds a matroid from cocircuits, restoring missing negation partners.
    /// The stored list is sorted and duplicate-free. No axioms are checked here.
    pub fn new(ground: GroundSet, rank: usize, cocircuits: Vec<SignVector>) -> Result<Self> {
        let n = ground.len();
        let mut set: HashSet<SignVector> = HashSet::with_capacity(cocircuits.len() * 2);
        for c in cocircuits {
            if c.len() != n {
                return Err(OmError::GroundMismatch { left: n, right: c.len() });
            }
            if c.is_zero() {
                return Err(OmError::InvalidMatroid("zero vector listed as a cocircuit".into()));
            }
            set.insert(-&c);
            set.insert(c);
        }
        let mut cocircuits: Vec<SignVector> = set.into_iter().collect();
        cocircuits.sort();
        Ok(OrientedMatroid { ground, rank, cocircuits })
    }

    /// Builds without restoring negation partners; used to exhibit broken inputs.
    pub fn new_raw(ground: GroundSet, rank: usize, mut cocircuits: Vec<SignVector>) -> Self {
        cocircuits.sort();
        cocircuits.dedup();
        OrientedMatroid { ground, rank, cocircuits }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cocircuits(&self) -> &[SignVector] {
        &self.cocircuits
    }

    pub fn contains_cocircuit(&self, x: &SignVector) -> bool {
        self.cocircuits.binary_search(x).is_ok()
    }

    /// Closure of `cocircuits ∪ {0}` under composition.
    pub fn covector_span(&self, limit: usize) -> Result<Vec<SignVector>> {
        let mut seen: HashSet<SignVector> = HashSet::new();
        let mut queue = VecDeque::new();
        let zero = SignVector::zero(self.len());
        seen.insert(zero.clone());
        queue.push_back(zero);
        while let Some(x) = queue.pop_front() {
            for z in &self.cocircuits {
                let y = x.compose_unchecked(z);
                if !seen.contains(&y) {
                    if seen.len() >= limit {
                        return Err(OmError::SpanLimit(limit));
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<SignVector> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// Restriction to the elements at `indices` (in that order). The
    /// cocircuits of the restriction are the minimal nonzero restrictions of
    /// cocircuits.
    pub fn restriction(&self, indices: &[usize]) -> Result<OrientedMatroid> {
        let mut seen = HashSet::new();
        for &i in indices {
            if i >= self.len() || !seen.insert(i) {
                return Err(OmError::NotSubset(format!("index {i}")));
            }
        }
        let ground = self.ground.select(indices);
        let mut restricted: Vec<SignVector> = self
            .cocircuits
            .iter()
            .map(|c| c.restrict(indices))
            .filter(|c| !c.is_zero())
            .collect();
        restricted.sort();
        restricted.dedup();
        let minimal = minimal_elements(&restricted);
        let provisional = OrientedMatroid::new(ground, 0, minimal)?;
        let rank = provisional.profile().rank;
        Ok(OrientedMatroid { rank, ..provisional })
    }

    /// Restriction by element tokens.
    pub fn restriction_by_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> Result<OrientedMatroid> {
        let idx = tokens
            .iter()
            .map(|t| {
                self.ground
                    .index_of(t.as_ref())
                    .ok_or_else(|| OmError::NotSubset(t.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.restriction(&idx)
    }

    /// Rank, loops, coloops and uniformity computed from the cocircuits.
    pub fn profile(&self) -> Profile {
        let n = self.len();
        let loops: Vec<usize> = (0..n)
            .filter(|&e| self.cocircuits.iter().all(|c| c.get(e).is_zero()))
            .collect();
        let coloops: Vec<usize> = (0..n)
            .filter(|&e| {
                self.cocircuits
                    .iter()
                    .any(|c| c.support_len() == 1 && !c.get(e).is_zero())
            })
            .collect();
        // Greedy maximal independent set; each member needs a cocircuit
        // nonzero on it and zero on the other members.
        let mut basis: Vec<usize> = Vec::new();
        for e in 0..n {
            let mut candidate = basis.clone();
            candidate.push(e);
            if self.is_independent(&candidate) {
                basis = candidate;
            }
        }
        let rank = basis.len();
        let is_uniform = rank > 0 && self.has_uniform_profile(rank);
        Profile { rank, loops, coloops, is_uniform, basis }
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().all(|&e| {
            self.cocircuits.iter().any(|c| {
                !c.get(e).is_zero() && set.iter().all(|&o| o == e || c.get(o).is_zero())
            })
        })
    }

    /// Every cocircuit vanishes on exactly `rank - 1` elements and each
    /// `(rank-1)`-subset is the zero set of exactly one negation pair.
    pub fn has_uniform_profile(&self, rank: usize) -> bool {
        let n = self.len();
        if rank == 0 || rank > n {
            return false;
        }
        let mut zero_sets: HashMap<Vec<usize>, usize> = HashMap::new();
        for c in &self.cocircuits {
            let z = c.zero_set();
            if z.len() != rank - 1 {
                return false;
            }
            *zero_sets.entry(z).or_default() += 1;
        }
        zero_sets.len() == binomial(n, rank - 1) && zero_sets.values().all(|&k| k == 2)
    }

    /// Rank-preserving weak map `self ⇝ other`: every cocircuit of `other`
    /// lies below a cocircuit of `self`. For equal ranks this is the
    /// chirotope condition `χ_other ∈ {0, ±χ_self}`, hence equivalent to
    /// every covector of `other` lying below a covector of `self`.
    ///
    /// Lying below a covector is not enough at the cocircuit level: near a
    /// vertex almost any matroid has a tope above it.
    pub fn weak_map_leq(&self, other: &OrientedMatroid) -> Result<bool> {
        self.check_same_ground(other)?;
        if self.rank != other.rank {
            return Err(OmError::Precondition(format!(
                "ranks {} and {} differ; use the exhaustive check",
                self.rank, other.rank
            )));
        }
        let k = self.rank.saturating_sub(1);
        // each cocircuit of `self` under every k-subset of its zero set
        let mut index: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        let indexed = k > 0
            && self.cocircuits.iter().all(|x| binomial(x.len() - x.support_len(), k) <= SUBSET_BUDGET);
        if indexed {
            for (i, x) in self.cocircuits.iter().enumerate() {
                for_each_k_subset(&x.zero_set(), k, &mut |t| index.entry(t.to_vec()).or_default().push(i));
            }
        }
        Ok(other.cocircuits.iter().all(|y| {
            let zeros = y.zero_set();
            if indexed && binomial(zeros.len(), k) <= SUBSET_BUDGET {
                // a cocircuit above `y` vanishes on at least k of its zeros
                let mut found = false;
                for_each_k_subset(&zeros, k, &mut |t| {
                    found = found
                        || index.get(t).is_some_and(|xs| xs.iter().any(|&i| y.precedes(&self.cocircuits[i])));
                });
                found
            } else {
                self.cocircuits.iter().any(|x| y.precedes(x))
            }
        }))
    }

    /// Weak map check over every covector of `other` (span-limited).
    pub fn weak_map_leq_exhaustive(&self, other: &OrientedMatroid, limit: usize) -> Result<bool> {
        self.check_same_ground(other)?;
        let span = other.covector_span(limit)?;
        Ok(span.iter().all(|y| self.has_covector_above(y)))
    }

    /// Whether some covector `X` of `self` satisfies `X ≥ y`.
    pub fn has_covector_above(&self, y: &SignVector) -> bool {
        let yp = y.pos_words();
        let yn = y.neg_words();
        let words = yp.len();
        let mut covered: smallvec::SmallVec<[u64; 2]> = smallvec::smallvec![0; words];
        for z in &self.cocircuits {
            let zp = z.pos_words();
            let zn = z.neg_words();
            let supp_y = |w: usize| yp[w] | yn[w];
            // conformal on supp(y): no position where z disagrees with y
            let conformal = (0..words).all(|w| {
                let s = supp_y(w);
                (zp[w] & s & !yp[w]) == 0 && (zn[w] & s & !yn[w]) == 0
            });
            if conformal {
                for (w, c) in covered.iter_mut().enumerate() {
                    *c |= (zp[w] | zn[w]) & supp_y(w);
                }
            }
        }
        (0..words).all(|w| covered[w] == yp[w] | yn[w])
    }

    pub(crate) fn check_same_ground(&self, other: &OrientedMatroid) -> Result<()> {
        if self.ground != other.ground {
            return Err(OmError::GroundMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    /// Same matroid with a different rank label.
    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = rank;
        self
    }

    pub fn to_json(&self) -> MatroidFile {
        MatroidFile {
            elements: self.ground.elements().to_vec(),
            rank: self.rank,
            cocircuits: self.cocircuits.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn from_json(file: &MatroidFile) -> Result<Self> {
        let ground = GroundSet::new(file.elements.iter().cloned())?;
        let cocircuits = file
            .cocircuits
            .iter()
            .map(|s| SignVector::parse(s))
            .collect::<Result<Vec<_>>>()?;
        OrientedMatroid::new(ground, file.rank, cocircuits)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string(&self.to_json()).expect("matroid serializes");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: MatroidFile = serde_json::from_str(text)?;
        Self::from_json(&file)
    }
}

/// On-disk matroid format.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatroidFile {
    pub elements: Vec<String>,
    pub rank: usize,
    pub cocircuits: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub rank: usize,
    pub loops: Vec<usize>,
    pub coloops: Vec<usize>,
    pub is_uniform: bool,
    /// A maximal independent set witnessing the rank.
    pub basis: Vec<usize>,
}

/// Minimal elements of a set of sign vectors under the product order.
/// Pairwise O(k²); this is the scaling bottleneck on large inputs.
pub fn minimal_elements(vectors: &[SignVector]) -> Vec<SignVector> {
    vectors
        .iter()
        .filter(|x| !vectors.iter().any(|y| y != *x && y.precedes(x)))
        .cloned()
        .collect()
}

/// Above this many candidate zero sets per cocircuit the weak map check
/// scans instead of indexing.
const SUBSET_BUDGET: usize = 64;

fn for_each_k_subset(set: &[usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    let mut buf = Vec::with_capacity(k);
    crate::dual::for_each_subset(set.len(), k, &mut |pos| {
        buf.clear();
        buf.extend(pos.iter().map(|&i| set[i]));
        f(&buf);
    });
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Sign vector with the given signs at the given positions and zero elsewhere.
pub fn sparse_vector(len: usize, entries: &[(usize, Sign)]) -> SignVector {
    let mut v = SignVector::zero(len);
    for &(i, s) in entries {
        v.set(i, s);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn om(n: usize, rank: usize, cocs: &[&str]) -> OrientedMatroid {
        OrientedMatroid::new(
            GroundSet::numbered(n),
            rank,
            cocs.iter().map(|s| SignVector::parse(s).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn two_coordinate_elements_span_all_nine() {
        let m = om(2, 2, &["+0", "0+"]);
        assert_eq!(m.cocircuits().len(), 4);
        assert_eq!(m.covector_span(100).unwrap().len(), 9);
    }

    #[test]
    fn span_limit_is_reported() {
        let m = om(2, 2, &["+0", "0+"]);
        assert!(matches!(m.covector_span(5), Err(OmError::SpanLimit(5))));
    }

    #[test]
    fn profile_detects_loops_coloops_and_rank() {
        let m = om(3, 2, &["+00", "0+0"]);
        let p = m.profile();
        assert_eq!(p.rank, 2);
        assert_eq!(p.loops, vec![2]);
        assert_eq!(p.coloops, vec![0, 1]);
        assert!(!p.is_uniform);
    }

    #[test]
    fn restriction_to_everything_is_identity() {
        let m = om(3, 2, &["0+-", "+0-", "+-0"]);
        let r = m.restriction(&[0, 1, 2]).unwrap();
        assert_eq!(r, m);
        let single = m.restriction(&[1]).unwrap();
        assert_eq!(single.rank(), 1);
        assert_eq!(single.cocircuits().len(), 2);
        assert!(m.restriction(&[0, 0]).is_err());
        assert!(m.restriction(&[3]).is_err());
    }

    #[test]
    fn weak_map_reflexive() {
        let m = om(3, 2, &["0+-", "+0-", "+-0"]);
        assert!(m.weak_map_leq(&m).unwrap());
        assert!(m.weak_map_leq_exhaustive(&m, 1000).unwrap());
    }

    #[test]
    fn json_roundtrip_restores_partners() {
        let text = r#"{"elements":["a","b"],"rank":2,"cocircuits":["+0","0+"]}"#;
        let m = OrientedMatroid::from_json_str(text).unwrap();
        assert_eq!(m.cocircuits().len(), 4);
        let back = OrientedMatroid::from_json_str(&m.to_json_string()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(102, 4), 4_249_575);
        assert_eq!(binomial(3, 5), 0);
    }
}
