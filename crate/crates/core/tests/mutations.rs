//! Deliberately broken inputs must be caught.

use std::sync::Arc;

use num_bigint::BigInt;

use omflip::entangle::build::{build_with_retries, BuildOptions};
use omflip::entangle::{omega_set, sample_instance};
use omflip::flips::{apply_flip, find_flip_supports, FlipSupport};
use omflip::harness::gdagger_check;
use omflip::realize::{lifting_from_affine, AffineArrangement, LiftingOM, Rational, RationalVectorConfig, LIFT_TOKEN};
use omflip::validate::{validate, Axiom, ValidationMode};
use omflip::{GroundSet, OmError, OrientedMatroid, Sign, SignVector};

fn q(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

const ROWS: [[i64; 3]; 6] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3], [2, -1, 5]];

fn base() -> OrientedMatroid {
    let vectors = ROWS.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
    RationalVectorConfig::new(GroundSet::numbered(ROWS.len()), vectors).unwrap().om_of_config().unwrap()
}

fn lifting() -> LiftingOM {
    let normals = ROWS.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
    let offsets = [3, -2, 5, 1, -4, 7].iter().map(|&b| Rational::new(BigInt::from(b), BigInt::from(3))).collect();
    let arr = AffineArrangement::new(GroundSet::numbered(ROWS.len()), normals, offsets).unwrap();
    lifting_from_affine(&arr, Arc::new(base())).unwrap()
}

/// Replaces the pair `±x` by `±x'`, where `x'` has the sign at `e` reversed.
fn flip_entry(m: &OrientedMatroid, x: &SignVector, e: usize) -> OrientedMatroid {
    let mut y = x.clone();
    y.set(e, -x.get(e));
    let rest = m.cocircuits().iter().filter(|c| *c != x && **c != -x).cloned();
    OrientedMatroid::new(m.ground().clone(), m.rank(), rest.chain([y]).collect()).unwrap()
}

#[test]
fn reversed_cocircuit_sign_fails_validation() {
    let m = base();
    assert!(validate(&m, ValidationMode::Full, true).unwrap().is_valid());
    for x in m.cocircuits() {
        for e in x.support() {
            let bad = flip_entry(&m, x, e);
            let report = validate(&bad, ValidationMode::Full, true).unwrap();
            assert!(!report.is_valid(), "reversing {x} at {e} went unnoticed");
            assert!(!validate(&bad, ValidationMode::CocircuitOnly, true).unwrap().is_valid());
        }
    }
}

#[test]
fn missing_negation_fails_validation() {
    let m = base();
    let mut cocircuits = m.cocircuits().to_vec();
    cocircuits.remove(0);
    let bad = OrientedMatroid::new_raw(m.ground().clone(), m.rank(), cocircuits);
    let report = validate(&bad, ValidationMode::CocircuitOnly, true).unwrap();
    assert!(report.failed(Axiom::NegationClosure));
}

#[test]
fn altered_cocircuit_at_infinity_is_not_a_lifting() {
    let l = lifting();
    let m = l.matroid();
    let f = l.lift_index();
    let x = m.cocircuits().iter().find(|x| x.get(f) == Sign::Zero).unwrap();
    let e = x.support()[0];
    let bad = flip_entry(m, x, e);
    let err = LiftingOM::new(bad, LIFT_TOKEN, Arc::clone(l.base())).unwrap_err();
    assert!(matches!(err, OmError::NotALifting(_)), "{err}");
}

#[test]
fn flip_outside_a_support_is_refused() {
    let l = lifting();
    let supports: Vec<[usize; 4]> = find_flip_supports(&l).unwrap().iter().map(|w| w.support.0).collect();
    let n = l.matroid().len();
    let mut refused = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if supports.contains(&[a, b, c, d]) {
                        continue;
                    }
                    let err = apply_flip(&l, FlipSupport::new([a, b, c, d])).unwrap_err();
                    assert!(matches!(err, OmError::NotASupport(_)), "{err}");
                    refused += 1;
                }
            }
        }
    }
    assert!(refused > 0 && !supports.is_empty());
}

#[test]
fn corrupted_vertex_cocircuit_leaves_g_dagger() {
    let inst = (0..).map(|s| sample_instance(2, s, 20)).find(|i| !omega_set(i).is_empty()).unwrap();
    let built = build_with_retries(&inst, &BuildOptions::minimal()).unwrap();
    let (inst, l) = (built.instance, built.lifting);
    let report = gdagger_check(&l, &inst).unwrap();
    assert!(report.is_member());
    let check = report.b.iter().find(|c| c.y == Some(c.x) && c.satisfied && !c.vacuous).unwrap();
    let x = SignVector::parse(&check.witness).unwrap();
    let [_, j, k] = check.rotation;
    let e = inst.index().named(j, k, check.x.diff(j, k)).unwrap();
    let bad = l.with_matroid(flip_entry(l.matroid(), &x, e));
    match gdagger_check(&bad, &inst) {
        Ok(r) => assert!(!r.is_member(), "corrupting {x} at {e} went unnoticed"),
        Err(_) => {}
    }
}
