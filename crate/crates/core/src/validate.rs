//! Axiom checking for oriented matroids given by cocircuits.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{OmError, Result};
use crate::om::OrientedMatroid;
use crate::sign::SignVector;

/// Largest ground set on which the covector-level check may run.
pub const FULL_MODE_MAX_ELEMENTS: usize = 25;
const FULL_MODE_SPAN_LIMIT: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationMode {
    /// All four covector axioms on the composition span.
    Full,
    /// Negation closure, minimality, uniform profile, elimination on every pair.
    CocircuitOnly,
    /// As `CocircuitOnly`, with elimination on seeded random pairs.
    Sampled { pairs: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    ZeroVector,
    NegationClosure,
    CompositionClosure,
    Elimination,
    Minimality,
    UniformProfile,
    CocircuitsMatchSpan,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::ZeroVector => "zero-vector",
            Axiom::NegationClosure => "negation-closure",
            Axiom::CompositionClosure => "composition-closure",
            Axiom::Elimination => "elimination",
            Axiom::Minimality => "minimality",
            Axiom::UniformProfile => "uniform-profile",
            Axiom::CocircuitsMatchSpan => "cocircuits-match-span",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    /// Witness sign vectors (and an element index for elimination failures).
    pub witness: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub pairs_checked: usize,
    pub failures: Vec<AxiomFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed(&self, axiom: Axiom) -> bool {
        self.failures.iter().any(|f| f.axiom == axiom)
    }

    pub fn into_result(self) -> Result<Self> {
        if self.is_valid() {
            Ok(self)
        } else {
            let f = &self.failures[0];
            Err(OmError::InvalidMatroid(format!(
                "{} failed ({} failures), witness {:?}",
                f.axiom,
                self.failures.len(),
                f.witness
            )))
        }
    }
}

const MAX_REPORTED: usize = 16;

fn push(failures: &mut Vec<AxiomFailure>, axiom: Axiom, witness: Vec<String>) {
    if failures.iter().filter(|f| f.axiom == axiom).count() < MAX_REPORTED {
        failures.push(AxiomFailure { axiom, witness });
    }
}

/// Validates `m`. When `uniform` is set the uniform zero-set profile is
/// required as well.
pub fn validate(m: &OrientedMatroid, mode: ValidationMode, uniform: bool) -> Result<ValidationReport> {
    match mode {
        ValidationMode::Full => validate_full(m, uniform),
        _ => Ok(validate_cocircuits(m, mode, uniform)),
    }
}

fn validate_cocircuits(m: &OrientedMatroid, mode: ValidationMode, uniform: bool) -> ValidationReport {
    let cocs = m.cocircuits();
    let mut failures = Vec::new();
    for c in cocs {
        if c.is_zero() {
            push(&mut failures, Axiom::ZeroVector, vec![c.to_string()]);
        }
        if !m.contains_cocircuit(&-c) {
            push(&mut failures, Axiom::NegationClosure, vec![c.to_string()]);
        }
    }
    let profile_ok = m.has_uniform_profile(m.rank());
    if uniform && !profile_ok {
        push(
            &mut failures,
            Axiom::UniformProfile,
            vec![format!("rank {} on {} elements, {} cocircuits", m.rank(), m.len(), cocs.len())],
        );
    }
    // Equal-size zero sets with distinct supports cannot be nested, so the
    // pairwise scan is only needed without the uniform profile.
    if !profile_ok {
        for x in cocs {
            if let Some(y) = cocs.iter().find(|y| *y != x && y.precedes(x)) {
                push(&mut failures, Axiom::Minimality, vec![y.to_string(), x.to_string()]);
            }
        }
    }
    let index = EliminationIndex::new(cocs);
    let reps: Vec<usize> = (0..cocs.len())
        .filter(|&i| cocs[i] <= -&cocs[i])
        .collect();
    let mut pairs_checked = 0;
    let mut check = |x: &SignVector, y: &SignVector, failures: &mut Vec<AxiomFailure>| {
        pairs_checked += 1;
        if let Some(e) = index.failing_element(x, y) {
            push(
                failures,
                Axiom::Elimination,
                vec![x.to_string(), y.to_string(), format!("element {e}")],
            );
        }
    };
    match mode {
        ValidationMode::Sampled { pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if reps.len() >= 2 {
                for _ in 0..pairs {
                    let a = rng.gen_range(0..reps.len());
                    let mut b = rng.gen_range(0..reps.len() - 1);
                    if b >= a {
                        b += 1;
                    }
                    let x = &cocs[reps[a]];
                    let y = if rng.gen::<bool>() { cocs[reps[b]].clone() } else { -&cocs[reps[b]] };
                    check(x, &y, &mut failures);
                }
            }
        }
        _ => {
            for a in 0..reps.len() {
                for b in a + 1..reps.len() {
                    let x = &cocs[reps[a]];
                    let y = &cocs[reps[b]];
                    check(x, y, &mut failures);
                    check(x, &-y, &mut failures);
                }
            }
        }
    }
    ValidationReport { mode, pairs_checked, failures }
}

/// Lookup structure for cocircuit elimination: cocircuits grouped by the
/// elements they vanish on, and by pairs of such elements.
pub struct EliminationIndex<'a> {
    cocs: &'a [SignVector],
    by_zero: Vec<Vec<u32>>,
    by_zero_pair: HashMap<(u32, u32), Vec<u32>>,
    pairs_complete: bool,
}

impl<'a> EliminationIndex<'a> {
    pub fn new(cocs: &'a [SignVector]) -> Self {
        let n = cocs.first().map_or(0, |c| c.len());
        let mut by_zero = vec![Vec::new(); n];
        let mut by_zero_pair: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        let small_zero_sets = cocs.iter().all(|c| c.len() - c.support_len() <= 4);
        for (i, c) in cocs.iter().enumerate() {
            let z = c.zero_set();
            for &e in &z {
                by_zero[e].push(i as u32);
            }
            // Pair lists only pay off when zero sets are small.
            if small_zero_sets {
                for a in 0..z.len() {
                    for b in a + 1..z.len() {
                        by_zero_pair.entry((z[a] as u32, z[b] as u32)).or_default().push(i as u32);
                    }
                }
            }
        }
        EliminationIndex { cocs, by_zero, by_zero_pair, pairs_complete: small_zero_sets }
    }

    /// First element `e` at which elimination between `x` and `y` fails.
    pub fn failing_element(&self, x: &SignVector, y: &SignVector) -> Option<usize> {
        let sep = x.separation_set(y);
        if sep.is_empty() {
            return None;
        }
        let xp = x.pos_words();
        let xn = x.neg_words();
        let yp = y.pos_words();
        let yn = y.neg_words();
        let words = xp.len();
        let allow_p: smallvec::SmallVec<[u64; 2]> = (0..words).map(|w| xp[w] | yp[w]).collect();
        let allow_n: smallvec::SmallVec<[u64; 2]> = (0..words).map(|w| xn[w] | yn[w]).collect();
        let common_zero = (0..x.len()).find(|&g| x.get(g).is_zero() && y.get(g).is_zero());
        for &e in &sep {
            let list: &[u32] = match common_zero {
                Some(k) if self.pairs_complete => {
                    let key = if k < e { (k as u32, e as u32) } else { (e as u32, k as u32) };
                    self.by_zero_pair.get(&key).map_or(&[], |l| l.as_slice())
                }
                _ => &self.by_zero[e],
            };
            let found = list.iter().any(|&zi| {
                let z = &self.cocs[zi as usize];
                let zp = z.pos_words();
                let zn = z.neg_words();
                (0..words).all(|w| zp[w] & !allow_p[w] == 0 && zn[w] & !allow_n[w] == 0)
            });
            if !found {
                return Some(e);
            }
        }
        None
    }
}

fn validate_full(m: &OrientedMatroid, uniform: bool) -> Result<ValidationReport> {
    if m.len() > FULL_MODE_MAX_ELEMENTS {
        return Err(OmError::Precondition(format!(
            "full validation is limited to {FULL_MODE_MAX_ELEMENTS} elements, got {}",
            m.len()
        )));
    }
    let span = m.covector_span(FULL_MODE_SPAN_LIMIT)?;
    let set: HashSet<&SignVector> = span.iter().collect();
    let mut failures = Vec::new();
    let zero = SignVector::zero(m.len());
    if !set.contains(&zero) {
        push(&mut failures, Axiom::ZeroVector, vec![]);
    }
    for x in &span {
        if !set.contains(&-x) {
            push(&mut failures, Axiom::NegationClosure, vec![x.to_string()]);
        }
    }
    let mut zero_at: Vec<Vec<usize>> = vec![Vec::new(); m.len()];
    for (i, z) in span.iter().enumerate() {
        for e in z.zero_set() {
            zero_at[e].push(i);
        }
    }
    let mut pairs_checked = 0;
    for (a, x) in span.iter().enumerate() {
        for y in &span[a + 1..] {
            pairs_checked += 1;
            let xy = x.compose_unchecked(y);
            if !set.contains(&xy) {
                push(&mut failures, Axiom::CompositionClosure, vec![x.to_string(), y.to_string()]);
            }
            let sep = x.separation_set(y);
            if sep.is_empty() {
                continue;
            }
            let sep_words = x.separation_words(y);
            let words = sep_words.len();
            for &e in &sep {
                // Z(e) = 0 and Z = X∘Y off the separation set.
                let ok = zero_at[e].iter().any(|&zi| {
                    let z = &span[zi];
                    (0..words).all(|w| {
                        let keep = !sep_words[w];
                        (z.pos_words()[w] & keep) == (xy.pos_words()[w] & keep)
                            && (z.neg_words()[w] & keep) == (xy.neg_words()[w] & keep)
                    })
                });
                if !ok {
                    push(
                        &mut failures,
                        Axiom::Elimination,
                        vec![x.to_string(), y.to_string(), format!("element {e}")],
                    );
                }
            }
        }
    }
    let nonzero: Vec<SignVector> = span.iter().filter(|v| !v.is_zero()).cloned().collect();
    let mut minimal = crate::om::minimal_elements(&nonzero);
    minimal.sort();
    if minimal != m.cocircuits() {
        push(
            &mut failures,
            Axiom::CocircuitsMatchSpan,
            vec![format!("{} minimal covectors vs {} cocircuits", minimal.len(), m.cocircuits().len())],
        );
    }
    if uniform && !m.has_uniform_profile(m.rank()) {
        push(&mut failures, Axiom::UniformProfile, vec![format!("rank {}", m.rank())]);
    }
    Ok(ValidationReport { mode: ValidationMode::Full, pairs_checked, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sign::GroundSet;

    fn om(n: usize, rank: usize, cocs: &[&str]) -> OrientedMatroid {
        OrientedMatroid::new(
            GroundSet::numbered(n),
            rank,
            cocs.iter().map(|s| SignVector::parse(s).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn uniform_rank_two_on_three_is_valid_in_all_modes() {
        // three vectors (1,0), (0,1), (1,-1)
        let m = om(3, 2, &["0+-", "+0+", "++0"]);
        for mode in [
            ValidationMode::Full,
            ValidationMode::CocircuitOnly,
            ValidationMode::Sampled { pairs: 50, seed: 1 },
        ] {
            let r = validate(&m, mode, true).unwrap();
            assert!(r.is_valid(), "{mode:?}: {:?}", r.failures);
        }
    }

    #[test]
    fn deleted_negation_partner_is_reported() {
        let m = OrientedMatroid::new_raw(
            GroundSet::numbered(2),
            2,
            ["+0", "-0", "0+"].iter().map(|s| SignVector::parse(s).unwrap()).collect(),
        );
        let r = validate(&m, ValidationMode::CocircuitOnly, false).unwrap();
        assert!(r.failed(Axiom::NegationClosure));
        let w = &r.failures.iter().find(|f| f.axiom == Axiom::NegationClosure).unwrap().witness;
        assert_eq!(w, &vec!["0+".to_string()]);
    }

    #[test]
    fn broken_elimination_is_reported() {
        // eliminating (0,+,-) and (+,0,+) at the last element needs (+,+,0)
        let bad = om(3, 2, &["0+-", "+0+", "+-0"]);
        let r = validate(&bad, ValidationMode::CocircuitOnly, true).unwrap();
        assert!(r.failed(Axiom::Elimination));
        let full = validate(&bad, ValidationMode::Full, true).unwrap();
        assert!(!full.is_valid());
    }

    #[test]
    fn non_minimal_cocircuit_is_reported() {
        let m = om(2, 2, &["+0", "++"]);
        let r = validate(&m, ValidationMode::CocircuitOnly, false).unwrap();
        assert!(r.failed(Axiom::Minimality));
    }

    #[test]
    fn full_mode_is_gated() {
        let m = om(26, 1, &[&"+".repeat(26)]);
        assert!(matches!(validate(&m, ValidationMode::Full, false), Err(OmError::Precondition(_))));
    }
}
