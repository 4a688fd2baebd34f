//! Flips between uniform liftings and the flip graph.
//!
//! A flip of a uniform rank-4 lifting is given by its support, a 4-set
//! `D ⊆ E`. The four cocircuits vanishing on the 3-subsets of `D`, taken
//! with `X(f) = +`, must agree outside `D`; the flip negates each of them
//! on `D`.

mod graph;

pub use graph::{flip_graph_bfs, flip_graph_resume, Budget, EdgeRecord, FlipGraph, GraphStatus, VertexRecord};

use sha2::{Digest, Sha256};
use smallvec::SmallVec;

use crate::error::{OmError, Result};
use crate::om::OrientedMatroid;
use crate::realize::lifting::{LiftingOM, TripleLookup};
use crate::sign::{Sign, SignVector};
use crate::validate::EliminationIndex;

/// A flip support: four elements of the base ground set, sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlipSupport(pub [usize; 4]);

impl FlipSupport {
    pub fn new(mut d: [usize; 4]) -> Self {
        d.sort_unstable();
        FlipSupport(d)
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.contains(&e)
    }

    /// `D ∖ {d_a}`.
    pub fn face(&self, a: usize) -> [usize; 3] {
        let mut out = [0; 3];
        let mut k = 0;
        for (b, &e) in self.0.iter().enumerate() {
            if b != a {
                out[k] = e;
                k += 1;
            }
        }
        out
    }

    pub fn tokens(&self, l: &LiftingOM) -> [String; 4] {
        self.0.map(|e| l.matroid().ground().token(e).to_string())
    }

    pub fn from_tokens<S: AsRef<str>>(l: &LiftingOM, tokens: &[S]) -> Result<Self> {
        if tokens.len() != 4 {
            return Err(OmError::NotASupport(format!("{} elements", tokens.len())));
        }
        let g = l.matroid().ground();
        let mut d = [0; 4];
        for (a, t) in tokens.iter().enumerate() {
            d[a] = g.index_of(t.as_ref()).ok_or_else(|| OmError::MissingElement(t.as_ref().to_string()))?;
        }
        Ok(FlipSupport::new(d))
    }
}

/// The support with its cocircuits `X_a`, `X_a` vanishing on `D ∖ {d_a}`
/// and positive at `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipWitness {
    pub support: FlipSupport,
    pub cocircuits: [SignVector; 4],
}

/// SHA-256 over the ground tokens and the sorted negation-pair
/// representatives.
pub fn canonical_key(m: &OrientedMatroid) -> String {
    let mut reps: Vec<String> = m
        .cocircuits()
        .iter()
        .filter(|c| **c <= -*c)
        .map(|c| c.to_string())
        .collect();
    reps.sort();
    let mut h = Sha256::new();
    for t in m.ground().elements() {
        h.update(t.as_bytes());
        h.update(b",");
    }
    h.update(format!(";{};", m.rank()).as_bytes());
    for r in &reps {
        h.update(r.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn lifting_key(l: &LiftingOM) -> String {
    canonical_key(l.matroid())
}

type Words = SmallVec<[u64; 2]>;

fn mask_of(len: usize, elems: &[usize]) -> Words {
    let mut w: Words = SmallVec::from_elem(0, len.div_ceil(64));
    for &e in elems {
        w[e / 64] |= 1 << (e % 64);
    }
    w
}

fn agree_outside(x: &SignVector, y: &SignVector, mask: &Words) -> bool {
    let (xp, xn, yp, yn) = (x.pos_words(), x.neg_words(), y.pos_words(), y.neg_words());
    (0..mask.len()).all(|w| (xp[w] ^ yp[w]) & !mask[w] == 0 && (xn[w] ^ yn[w]) & !mask[w] == 0)
}

fn check_uniform_lifting(l: &LiftingOM) -> Result<()> {
    if l.matroid().rank() != 4 {
        return Err(OmError::Precondition(format!("flips need rank 4, got {}", l.matroid().rank())));
    }
    Ok(())
}

/// Every flip support of a uniform rank-4 lifting, with witnesses, after
/// asserting the blocking property at each one.
pub fn find_flip_supports(l: &LiftingOM) -> Result<Vec<FlipWitness>> {
    let out = find_flip_supports_unchecked(l)?;
    for w in &out {
        if let Some(y) = blocking_violation(l.matroid(), w) {
            return Err(OmError::Verification(format!(
                "cocircuit {y} conforms to the flip at {:?} without being one of its cocircuits",
                w.support.tokens(l)
            )));
        }
    }
    Ok(out)
}

/// The support scan without the blocking assertion.
pub fn find_flip_supports_unchecked(l: &LiftingOM) -> Result<Vec<FlipWitness>> {
    check_uniform_lifting(l)?;
    let lookup = TripleLookup::new(l)?;
    let cocs = l.matroid().cocircuits();
    let n = l.matroid().len();
    let base: Vec<usize> = l.base_indices();
    let mut out = Vec::new();
    let m = base.len();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                let x3 = &cocs[lookup.get(base[a], base[b], base[c])];
                for d in c + 1..m {
                    let support = FlipSupport([base[a], base[b], base[c], base[d]]);
                    let mask = mask_of(n, &support.0);
                    let x2 = &cocs[lookup.get(base[a], base[b], base[d])];
                    if !agree_outside(x3, x2, &mask) {
                        continue;
                    }
                    let x1 = &cocs[lookup.get(base[a], base[c], base[d])];
                    if !agree_outside(x3, x1, &mask) {
                        continue;
                    }
                    let x0 = &cocs[lookup.get(base[b], base[c], base[d])];
                    if !agree_outside(x3, x0, &mask) {
                        continue;
                    }
                    out.push(FlipWitness { support, cocircuits: [x0.clone(), x1.clone(), x2.clone(), x3.clone()] });
                }
            }
        }
    }
    Ok(out)
}

/// A cocircuit `Y` outside the witness with `Y(d_a) ∈ {X_a(d_a), 0}` for
/// every `a`, if any.
pub fn blocking_violation(m: &OrientedMatroid, w: &FlipWitness) -> Option<SignVector> {
    let d = w.support.0;
    let want: [Sign; 4] = std::array::from_fn(|a| w.cocircuits[a].get(d[a]));
    m.cocircuits()
        .iter()
        .find(|y| {
            (0..4).all(|a| {
                let s = y.get(d[a]);
                s.is_zero() || s == want[a]
            }) && !w.cocircuits.contains(y)
        })
        .cloned()
}

/// The witness for `support`, if it is one.
pub fn witness_for(l: &LiftingOM, support: FlipSupport) -> Result<FlipWitness> {
    check_uniform_lifting(l)?;
    if support.0.contains(&l.lift_index()) {
        return Err(OmError::NotASupport("contains the lifting element".into()));
    }
    let lookup = TripleLookup::new(l)?;
    let cocs = l.matroid().cocircuits();
    let xs: [SignVector; 4] = std::array::from_fn(|a| {
        let [p, q, r] = support.face(a);
        cocs[lookup.get(p, q, r)].clone()
    });
    let mask = mask_of(l.matroid().len(), &support.0);
    if (1..4).all(|a| agree_outside(&xs[0], &xs[a], &mask)) {
        Ok(FlipWitness { support, cocircuits: xs })
    } else {
        Err(OmError::NotASupport(format!("{:?}", support.tokens(l))))
    }
}

fn negate_on(x: &SignVector, d: &[usize]) -> SignVector {
    let mut y = x.clone();
    for &e in d {
        y.set(e, -x.get(e));
    }
    y
}

fn replace_witness(m: &OrientedMatroid, w: &FlipWitness, new: Vec<SignVector>) -> Vec<SignVector> {
    let mut cocs: Vec<SignVector> = m
        .cocircuits()
        .iter()
        .filter(|c| !w.cocircuits.iter().any(|x| *c == x || **c == -x))
        .cloned()
        .collect();
    cocs.extend(new);
    cocs
}

/// The flipped lifting, checked for the uniform profile and the lifting
/// condition.
pub fn apply_flip(l: &LiftingOM, support: FlipSupport) -> Result<LiftingOM> {
    flip_with(l, support, false)
}

/// [`apply_flip`] plus elimination between each new cocircuit and every
/// other cocircuit, the only pairs a flip can break.
pub fn apply_flip_validated(l: &LiftingOM, support: FlipSupport) -> Result<LiftingOM> {
    flip_with(l, support, true)
}

fn flip_with(l: &LiftingOM, support: FlipSupport, eliminate: bool) -> Result<LiftingOM> {
    let w = witness_for(l, support)?;
    let flipped: Vec<SignVector> = w.cocircuits.iter().map(|x| negate_on(x, &support.0)).collect();
    let m = l.matroid();
    let negated: Vec<SignVector> = flipped.iter().map(|x| -x).collect();
    let mut cocs = replace_witness(m, &w, flipped.clone());
    cocs.extend(negated);
    let out = OrientedMatroid::new_raw(m.ground().clone(), m.rank(), cocs);
    if out.cocircuits().len() != m.cocircuits().len() || !out.has_uniform_profile(4) {
        return Err(OmError::Verification("flip broke the uniform profile".into()));
    }
    if eliminate {
        let index = EliminationIndex::new(out.cocircuits());
        for z in &flipped {
            let nz = -z;
            for y in out.cocircuits().iter().filter(|y| **y != *z && **y != nz) {
                if let Some(e) = index.failing_element(z, y) {
                    return Err(OmError::Verification(format!("elimination fails between {z} and {y} at {e}")));
                }
            }
        }
    }
    LiftingOM::new(out, l.lift_token(), l.base().clone())
}

/// The non-uniform matroid between `l` and its flip at `support`.
pub fn flip_midpoint(l: &LiftingOM, support: FlipSupport) -> Result<OrientedMatroid> {
    let w = witness_for(l, support)?;
    let mut x0 = w.cocircuits[0].clone();
    for &e in &support.0 {
        x0.set(e, Sign::Zero);
    }
    let m = l.matroid();
    let cocs = replace_witness(m, &w, vec![x0]);
    let out = OrientedMatroid::new(m.ground().clone(), m.rank(), cocs)?;
    debug_assert_eq!(out.cocircuits().len(), m.cocircuits().len() - 6);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::affine::{lifting_from_affine, AffineArrangement};
    use crate::realize::config::RationalVectorConfig;
    use crate::realize::rational::{int, rational, Rational};
    use crate::sign::GroundSet;
    use crate::validate::{validate, ValidationMode};
    use std::sync::Arc;

    /// Six planes in general position in 3-space with random integer data.
    fn planes() -> LiftingOM {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let ground = GroundSet::numbered(6);
        loop {
            let normals: Vec<Vec<Rational>> =
                (0..6).map(|_| (0..3).map(|_| int(rng.gen_range(-9..=9))).collect()).collect();
            let offsets: Vec<Rational> = (0..6).map(|_| rational(rng.gen_range(-20..=20), 3)).collect();
            let Ok(base) = RationalVectorConfig::new(ground.clone(), normals.clone()).unwrap().om_of_config() else {
                continue;
            };
            if !base.has_uniform_profile(3) {
                continue;
            }
            let arr = AffineArrangement::new(ground.clone(), normals, offsets).unwrap();
            let l = lifting_from_affine(&arr, Arc::new(base)).unwrap();
            if l.matroid().has_uniform_profile(4) {
                return l;
            }
        }
    }

    #[test]
    fn flips_are_involutions_with_midpoints() {
        let l = planes();
        assert!(l.matroid().has_uniform_profile(4));
        let supports = find_flip_supports(&l).unwrap();
        assert!(!supports.is_empty());
        for w in supports {
            let flipped = apply_flip(&l, w.support).unwrap();
            assert_ne!(lifting_key(&flipped), lifting_key(&l));
            assert!(validate(flipped.matroid(), ValidationMode::Full, true).unwrap().is_valid());
            let back = apply_flip(&flipped, w.support).unwrap();
            assert_eq!(back.matroid(), l.matroid());
            let mid = flip_midpoint(&l, w.support).unwrap();
            assert_eq!(mid.cocircuits().len(), l.matroid().cocircuits().len() - 6);
            assert!(!mid.has_uniform_profile(4));
            assert!(l.matroid().weak_map_leq(&mid).unwrap());
            assert!(flipped.matroid().weak_map_leq(&mid).unwrap());
            assert!(validate(&mid, ValidationMode::Full, false).unwrap().is_valid());
        }
    }

    #[test]
    fn non_support_is_rejected() {
        let l = planes();
        let supports: Vec<FlipSupport> = find_flip_supports(&l).unwrap().into_iter().map(|w| w.support).collect();
        let n = l.base_indices().len();
        let mut rejected = 0;
        crate::dual::for_each_subset(n, 4, &mut |s| {
            let d = FlipSupport::new([s[0], s[1], s[2], s[3]]);
            if !supports.contains(&d) {
                assert!(matches!(apply_flip(&l, d), Err(OmError::NotASupport(_))));
                rejected += 1;
            }
        });
        assert!(rejected > 0);
    }

    #[test]
    fn key_ignores_listing_order() {
        let l = planes();
        let m = l.matroid();
        let reversed: Vec<SignVector> = m.cocircuits().iter().rev().map(|c| -c).collect();
        let again = OrientedMatroid::new(m.ground().clone(), 4, reversed).unwrap();
        assert_eq!(canonical_key(m), canonical_key(&again));
    }
}
