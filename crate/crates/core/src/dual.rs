//! Duality by orthogonal complement.

use crate::error::{OmError, Result};
use crate::om::OrientedMatroid;
use crate::sign::{Sign, SignVector};

/// Dual matroid: its cocircuits are the support-minimal nonzero sign vectors
/// orthogonal to every cocircuit of `m` (the circuits of `m`).
///
/// Candidate supports are enumerated by increasing size up to `rank + 1`,
/// so the cost grows like `C(n, rank + 1) · 2^rank`.
pub fn dual(m: &OrientedMatroid) -> Result<OrientedMatroid> {
    for c in m.cocircuits() {
        if !m.contains_cocircuit(&-c) {
            return Err(OmError::InvalidMatroid(format!("cocircuit {c} lacks its negation")));
        }
    }
    let n = m.len();
    let rank = m.rank();
    let mut circuits: Vec<SignVector> = Vec::new();
    let mut circuit_supports: Vec<u128> = Vec::new();
    if n > 128 {
        return Err(OmError::Precondition("dual supports at most 128 elements".into()));
    }
    for size in 1..=(rank + 1).min(n) {
        let mut found_now = Vec::new();
        for_each_subset(n, size, &mut |subset| {
            let mask: u128 = subset.iter().fold(0, |acc, &i| acc | (1u128 << i));
            if circuit_supports.iter().any(|&s| s & mask == s) {
                return;
            }
            // first entry fixed to +; negations are restored by the container
            for pattern in 0..(1u64 << (size - 1)) {
                let mut v = SignVector::zero(n);
                v.set(subset[0], Sign::Pos);
                for (bit, &e) in subset[1..].iter().enumerate() {
                    let s = if pattern >> bit & 1 == 1 { Sign::Neg } else { Sign::Pos };
                    v.set(e, s);
                }
                if m.cocircuits().iter().all(|c| c.orthogonal_unchecked(&v)) {
                    found_now.push((mask, v));
                }
            }
        });
        for (mask, v) in found_now {
            circuit_supports.push(mask);
            circuits.push(v);
        }
    }
    let ground = m.ground().clone();
    OrientedMatroid::new(ground, n - rank, circuits)
}

pub(crate) fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let need = k - cur.len();
        for i in start..=n - need {
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sign::GroundSet;

    /// Oracle: all `3^n` sign vectors orthogonal to the whole covector span,
    /// minimal nonzero elements kept.
    fn dual_by_enumeration(m: &OrientedMatroid) -> Vec<SignVector> {
        let span = m.covector_span(1 << 20).unwrap();
        let n = m.len();
        let mut perp = Vec::new();
        let total = 3usize.pow(n as u32);
        for code in 1..total {
            let mut c = code;
            let mut v = SignVector::zero(n);
            for e in 0..n {
                v.set(e, Sign::of_i64((c % 3) as i64 - 1));
                c /= 3;
            }
            if span.iter().all(|y| y.orthogonal_unchecked(&v)) && !v.is_zero() {
                perp.push(v);
            }
        }
        let mut min = crate::om::minimal_elements(&perp);
        min.sort();
        min
    }

    fn om(n: usize, rank: usize, cocs: &[&str]) -> OrientedMatroid {
        OrientedMatroid::new(
            GroundSet::numbered(n),
            rank,
            cocs.iter().map(|s| SignVector::parse(s).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn uniform_rank_one_on_two() {
        let m = om(2, 1, &["++"]);
        let d = dual(&m).unwrap();
        assert_eq!(d.rank(), 1);
        assert_eq!(d.cocircuits(), &[SignVector::parse("+-").unwrap(), SignVector::parse("-+").unwrap()]);
        assert_eq!(dual_by_enumeration(&m), d.cocircuits());
    }

    #[test]
    fn dual_matches_enumeration_and_is_involutive() {
        let cases = [
            om(3, 2, &["0+-", "+0+", "++0"]),
            om(3, 2, &["+00", "0+0"]),
            om(4, 2, &["0+-+", "+0++", "++0+", "+-+0"]),
        ];
        for m in cases {
            let d = dual(&m).unwrap();
            assert_eq!(dual_by_enumeration(&m), d.cocircuits(), "{m:?}");
            for x in d.cocircuits() {
                for y in m.cocircuits() {
                    assert!(x.orthogonal(y).unwrap());
                }
            }
            assert_eq!(dual(&d).unwrap().cocircuits(), m.cocircuits());
        }
    }

    #[test]
    fn subsets_are_enumerated_once() {
        let mut count = 0;
        for_each_subset(6, 3, &mut |_| count += 1);
        assert_eq!(count, 20);
    }
}
