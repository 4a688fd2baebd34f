//! Independent oracles: literal membership counts, the gluing of local
//! models, and flip supports read off the geometry of small arrangements.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use omflip::entangle::instance::DEFAULT_DELTA_EXP;
use omflip::entangle::lattice::{certificate, triangle_orientation};
use omflip::entangle::prob::exact_point_probability;
use omflip::entangle::{gamma_of_point, q_star, sample_instance, CyclicTriple, LatticePoint};
use omflip::flips::{find_flip_supports, FlipSupport};
use omflip::realize::{braid_offset, lifting_from_affine, AffineArrangement, Rational, RationalVectorConfig};
use omflip::GroundSet;

fn o_table(g: CyclicTriple, missing: usize) -> CyclicTriple {
    let [i, j, k] = g.entries();
    let l = g.missing();
    match missing {
        m if m == l => g,
        m if m == k => CyclicTriple::new(i, j, l),
        m if m == i => CyclicTriple::new(j, k, l),
        _ => CyclicTriple::new(k, i, l),
    }
}

const PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

/// Exhausts the `g` bit and `u` index of the six elements through `x`
/// (`2⁶ · 6⁶` atoms), evaluating the literal membership predicate, and
/// compares with the closed form for every orientation.
fn literal_point_check(n: usize, x: LatticePoint) {
    let mut inst = sample_instance(n, 0, DEFAULT_DELTA_EXP);
    let idx = inst.index();
    let through: Vec<usize> = PAIRS.iter().map(|&(p, q)| idx.named(p, q, x.diff(p, q)).unwrap()).collect();
    let all = CyclicTriple::all();
    let mut hits = [0u64; 8];
    let mut total = [0u64; 8];
    for bits in 0..64u32 {
        for (b, &e) in through.iter().enumerate() {
            inst.g[e] = bits >> b & 1 == 1;
        }
        for code in 0..6u32.pow(6) {
            let mut c = code;
            for &e in &through {
                inst.u[e] = (c % 6) as u8;
                c /= 6;
            }
            let cert = certificate(&inst, &x);
            for (a, &gamma) in all.iter().enumerate() {
                if o_table(cert.gamma, gamma.missing()) == gamma {
                    total[a] += 1;
                    if cert.gamma == gamma && cert.is_member() {
                        hits[a] += 1;
                    }
                }
            }
        }
    }
    for (a, &gamma) in all.iter().enumerate() {
        let literal = Rational::new(BigInt::from(hits[a]), BigInt::from(total[a]));
        assert_eq!(exact_point_probability(&x, n, gamma), literal, "x = {x}, γ = {gamma}");
    }
}

#[test]
fn point_probability_matches_literal_membership_at_the_origin() {
    literal_point_check(2, LatticePoint::new([0, 0, 0, 0]));
}

#[test]
fn point_probability_matches_literal_membership_off_center() {
    // short rays on some axes, so some targets fail the R-size condition
    literal_point_check(2, LatticePoint::new([2, 1, 0, 0]));
}

/// Two points sharing the planes `(i,j,r), (j,k,s), (k,i,t)` see the same
/// orientation of that triangle and hence the same shifts of its planes.
#[test]
fn local_models_agree_on_shared_triangles() {
    for seed in 0..6 {
        let n = 2;
        let inst = sample_instance(n, seed, DEFAULT_DELTA_EXP);
        let idx = inst.index();
        let points = q_star(n);
        let mut pairs = 0;
        for l in 1..=4 {
            let tri: Vec<usize> = (1..=4).filter(|&a| a != l).collect();
            let (i, j, k) = (tri[0], tri[1], tri[2]);
            for x1 in &points {
                let elements = [
                    idx.named(i, j, x1.diff(i, j)).unwrap(),
                    idx.named(j, k, x1.diff(j, k)).unwrap(),
                    idx.named(i, k, x1.diff(i, k)).unwrap(),
                ];
                let g1 = gamma_of_point(&inst, x1).unwrap();
                assert_eq!(g1.orient(l), triangle_orientation(&inst, l, elements));
                for x2 in points.iter().filter(|x2| x2.diff(i, j) == x1.diff(i, j) && x2.diff(j, k) == x1.diff(j, k)) {
                    let g2 = gamma_of_point(&inst, x2).unwrap();
                    assert_eq!(o_table(g1, l), o_table(g2, l), "x1 = {x1}, x2 = {x2}");
                    if g1.missing() == l && g2.missing() == l {
                        for (p, q) in [(i, j), (j, k), (i, k)] {
                            assert_eq!(braid_offset(g1, p, q), braid_offset(g2, p, q));
                        }
                    }
                    pairs += 1;
                }
            }
        }
        assert!(pairs > points.len());
    }
}

type Q = Rational;

fn solve3(a: [[Q; 3]; 3], b: [Q; 3]) -> Option<[Q; 3]> {
    let det = |m: &[[Q; 3]; 3]| {
        m[0][0].clone() * (m[1][1].clone() * &m[2][2] - m[1][2].clone() * &m[2][1])
            - m[0][1].clone() * (m[1][0].clone() * &m[2][2] - m[1][2].clone() * &m[2][0])
            + m[0][2].clone() * (m[1][0].clone() * &m[2][1] - m[1][1].clone() * &m[2][0])
    };
    let d = det(&a);
    if d.is_zero() {
        return None;
    }
    // Cramer's rule
    Some(std::array::from_fn(|c| {
        let mut m = a.clone();
        for r in 0..3 {
            m[r][c] = b[r].clone();
        }
        det(&m) / &d
    }))
}

/// Supports of flips are the 4-subsets bounding a tetrahedron that no
/// other plane meets: the bounded simplicial cells.
fn simplicial_cells(normals: &[[Q; 3]], offsets: &[Q]) -> BTreeSet<[usize; 4]> {
    let m = normals.len();
    let value = |e: usize, p: &[Q; 3]| -> Q {
        normals[e].iter().zip(p).fold(Q::zero(), |acc, (a, b)| acc + a * b) - &offsets[e]
    };
    let mut out = BTreeSet::new();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                for d in c + 1..m {
                    let s = [a, b, c, d];
                    let corners: Vec<[Q; 3]> = (0..4)
                        .map(|skip| {
                            let t: Vec<usize> = s.iter().copied().filter(|&e| e != s[skip]).collect();
                            solve3(
                                [normals[t[0]].clone(), normals[t[1]].clone(), normals[t[2]].clone()],
                                [offsets[t[0]].clone(), offsets[t[1]].clone(), offsets[t[2]].clone()],
                            )
                            .expect("generic normals")
                        })
                        .collect();
                    let clean = (0..m).filter(|e| !s.contains(e)).all(|e| {
                        let v: Vec<Q> = corners.iter().map(|p| value(e, p)).collect();
                        v.iter().all(|x| x.is_positive()) || v.iter().all(|x| x.is_negative())
                    });
                    if clean {
                        out.insert(s);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn flip_supports_are_the_bounded_simplicial_cells() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cases = 0;
    let mut supports = 0;
    while cases < 24 {
        let m = 5 + cases % 3;
        let int = |v: i64| Q::from_integer(BigInt::from(v));
        let normals: Vec<[Q; 3]> = (0..m).map(|_| [0; 3].map(|_: i32| int(rng.gen_range(-6..=6)))).collect();
        let offsets: Vec<Q> = (0..m).map(|_| Q::new(BigInt::from(rng.gen_range(-30..=30)), BigInt::from(7))).collect();
        let ground = GroundSet::numbered(m);
        let rows: Vec<Vec<Q>> = normals.iter().map(|n| n.to_vec()).collect();
        let Ok(base) = RationalVectorConfig::new(ground.clone(), rows.clone()).and_then(|c| c.om_of_config()) else {
            continue;
        };
        if !base.has_uniform_profile(3) {
            continue;
        }
        let arr = AffineArrangement::new(ground, rows, offsets.clone()).unwrap();
        let l = lifting_from_affine(&arr, Arc::new(base)).unwrap();
        if !l.matroid().has_uniform_profile(4) {
            continue;
        }
        cases += 1;
        let found: BTreeSet<[usize; 4]> = find_flip_supports(&l).unwrap().into_iter().map(|w| w.support.0).collect();
        let expected = simplicial_cells(&normals, &offsets);
        assert_eq!(found, expected, "{m} planes");
        supports += found.len();
        for s in expected {
            assert_eq!(FlipSupport::new(s).0, s);
        }
    }
    assert!(supports > 0);
}
