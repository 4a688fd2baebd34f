//! Lattice points of `B`, the local orientations `γ(x)`, the signs `β`, and
//! the sets `R`, `Ω` and `S`.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use super::gamma::{alpha, CyclicTriple, GroupElement, OGammaTable, PAIRS};
use super::instance::{ConstructionInstance, ElementIndex};
use crate::error::{OmError, Result};
use crate::sign::Sign;

/// A point of `Z⁴/(1,1,1,1)` normalized to minimum coordinate 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LatticePoint(pub [i64; 4]);

impl LatticePoint {
    pub fn new(c: [i64; 4]) -> Self {
        let m = *c.iter().min().unwrap();
        LatticePoint(c.map(|x| x - m))
    }

    pub fn coord(&self, a: usize) -> i64 {
        self.0[a - 1]
    }

    pub fn diff(&self, p: usize, q: usize) -> i64 {
        self.coord(p) - self.coord(q)
    }

    /// Sorted consecutive gaps are at most `n`.
    pub fn in_q(&self, n: usize) -> bool {
        let mut s = self.0;
        s.sort_unstable();
        s.windows(2).all(|w| w[1] - w[0] <= n as i64)
    }

    /// All pairwise differences are at most `n`.
    pub fn in_q_star(&self, n: usize) -> bool {
        *self.0.iter().max().unwrap() <= n as i64
    }

    /// `x + k·e_a`.
    pub fn shifted(&self, a: usize, k: i64) -> LatticePoint {
        let mut c = self.0;
        c[a - 1] += k;
        LatticePoint::new(c)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{}]", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// `Q★` in lexicographic order; it has `(N+1)⁴ − N⁴` points.
pub fn q_star(n: usize) -> Vec<LatticePoint> {
    let n = n as i64;
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=n {
            for c in 0..=n {
                for d in 0..=n {
                    if a.min(b).min(c).min(d) == 0 {
                        out.push(LatticePoint([a, b, c, d]));
                    }
                }
            }
        }
    }
    out
}

fn table() -> &'static OGammaTable {
    static T: OnceLock<OGammaTable> = OnceLock::new();
    T.get_or_init(OGammaTable::new)
}

/// `o_γ` of `g·(123)`, cached for the sixteen parity vectors.
fn act_on_123(g: GroupElement) -> CyclicTriple {
    static T: OnceLock<Vec<CyclicTriple>> = OnceLock::new();
    let t = T.get_or_init(|| {
        let base = CyclicTriple::new(1, 2, 3);
        let o = table().get(base);
        (0..16u8)
            .map(|mask| {
                let flipped: [CyclicTriple; 4] =
                    std::array::from_fn(|m| if mask >> m & 1 == 1 { o[m].neg() } else { o[m] });
                table().recover(&flipped).unwrap_or(base)
            })
            .collect()
    });
    t[g.mask() as usize]
}

/// The product of the `g` factors at `x`; factors of elements outside `E`
/// are the identity.
pub fn group_element_at(inst: &ConstructionInstance, x: &LatticePoint) -> GroupElement {
    let idx = inst.index();
    let mut g = GroupElement::IDENTITY;
    for &(p, q) in &PAIRS {
        if let Some(k) = idx.named(p, q, x.diff(p, q)) {
            if inst.g[k] {
                g = g.compose(GroupElement::pi(p, q));
            }
        }
    }
    g
}

/// `γ(x)`.
pub fn gamma_of_point(inst: &ConstructionInstance, x: &LatticePoint) -> Result<CyclicTriple> {
    if !x.in_q(inst.n) {
        return Err(OmError::NotInQ(x.to_string()));
    }
    Ok(gamma_unchecked(inst, x))
}

pub(crate) fn gamma_unchecked(inst: &ConstructionInstance, x: &LatticePoint) -> CyclicTriple {
    let g = group_element_at(inst, x);
    // only parity vectors realized by the group occur
    debug_assert!(table().recover(&std::array::from_fn(|m| {
        let o = table().get(CyclicTriple::new(1, 2, 3))[m];
        if g.flips(m + 1) {
            o.neg()
        } else {
            o
        }
    }))
    .is_some());
    act_on_123(g)
}

/// Orientation of the triangle missing axis `l` at every point whose planes
/// are the three given ones: fixed by the triangle's own `g` bits.
pub fn triangle_orientation(inst: &ConstructionInstance, l: usize, elements: [usize; 3]) -> CyclicTriple {
    let flips = elements.iter().filter(|&&k| inst.g[k]).count() % 2 == 1;
    let o = CyclicTriple::new(1, 2, 3).orient(l);
    if flips {
        o.neg()
    } else {
        o
    }
}

/// `α_ab · u^l` of the element named `(a, b, r)`.
pub fn beta_term(inst: &ConstructionInstance, a: usize, b: usize, r: i64, l: usize) -> Result<i64> {
    let k = inst.index().named(a, b, r).ok_or_else(|| OmError::MissingElement(format!("({a},{b},{r})")))?;
    Ok(alpha(a, b) * inst.u_at(k, l))
}

/// `β_ijk(r, s, t)`, the sign of a sum of three odd terms.
pub fn beta(inst: &ConstructionInstance, (i, j, k): (usize, usize, usize), (r, s, t): (i64, i64, i64)) -> Result<Sign> {
    let l = 10 - i - j - k;
    let sum = beta_term(inst, i, j, r, l)? + beta_term(inst, j, k, s, l)? + beta_term(inst, k, i, t, l)?;
    Ok(Sign::of_i64(sum))
}

/// `β_p(x)` for every axis `p` (index `p − 1`).
pub fn betas_at(inst: &ConstructionInstance, x: &LatticePoint, gamma: CyclicTriple) -> [Sign; 4] {
    std::array::from_fn(|m| {
        let [i, j, k] = gamma.orient(m + 1).entries();
        beta(inst, (i, j, k), (x.diff(i, j), x.diff(j, k), x.diff(k, i))).expect("x in Q★")
    })
}

/// `(|R_{a,+}(x)|, |R_{a,−}(x)|)`.
pub fn r_sizes(x: &LatticePoint, a: usize, n: usize) -> (usize, usize) {
    let count = |step: i64| (1..).take_while(|&k| x.shifted(a, step * k).in_q_star(n)).count();
    (count(1), count(-1))
}

pub fn r_set(x: &LatticePoint, a: usize, dir: Sign, n: usize) -> Vec<LatticePoint> {
    let step = dir.to_i64();
    (1..).map(|k| x.shifted(a, step * k)).take_while(|y| y.in_q_star(n)).collect()
}

/// Membership data of one point of `Q★`.
#[derive(Clone, Debug, Serialize)]
pub struct OmegaCertificate {
    pub x: LatticePoint,
    pub gamma: CyclicTriple,
    /// `β_p(x)` per axis.
    pub beta: [Sign; 4],
    /// `(|R_{p,+}|, |R_{p,−}|)` per axis.
    pub r_sizes: [(usize, usize); 4],
    /// The three R-size conditions, in the order of `γ`'s entries.
    pub r_ok: [bool; 3],
    /// The six sign conditions, for `(i,l), (l,i), (j,l), (l,j), (k,l), (l,k)`.
    pub sign_conditions: [bool; 6],
    /// `S_p(x)` for `p` in the order of `γ`'s entries (filled for members).
    pub s_sets: [Vec<LatticePoint>; 3],
}

impl OmegaCertificate {
    pub fn is_member(&self) -> bool {
        self.r_ok.iter().all(|&b| b) && self.sign_conditions.iter().all(|&b| b)
    }

    /// `S_p(x)` for an axis of the triple.
    pub fn s_set(&self, p: usize) -> &[LatticePoint] {
        let pos = self.gamma.entries().iter().position(|&a| a == p).expect("axis of γ(x)");
        &self.s_sets[pos]
    }

    pub fn s_sets_nonempty(&self) -> bool {
        self.s_sets.iter().all(|s| !s.is_empty())
    }
}

/// The literal membership data at `x ∈ Q★` without the S-sets.
pub fn certificate(inst: &ConstructionInstance, x: &LatticePoint) -> OmegaCertificate {
    let n = inst.n;
    let gamma = gamma_unchecked(inst, x);
    let beta = betas_at(inst, x, gamma);
    let r_sizes: [(usize, usize); 4] = std::array::from_fn(|m| r_sizes(x, m + 1, n));
    let [i, j, k] = gamma.entries();
    let l = gamma.missing();
    let r_ok = [i, j, k].map(|p| {
        let (plus, minus) = r_sizes[p - 1];
        let size = if beta[p - 1] == Sign::Pos { plus } else { minus };
        2 * size >= n
    });
    let cond = |a: usize, b: usize, target_axis: usize| -> bool {
        let term = beta_term(inst, a, b, x.diff(a, b), target_axis).expect("x in Q★");
        Sign::of_i64(term) == beta[target_axis - 1]
    };
    let sign_conditions =
        [cond(i, l, j), cond(l, i, k), cond(j, l, k), cond(l, j, i), cond(k, l, i), cond(l, k, j)];
    OmegaCertificate { x: *x, gamma, beta, r_sizes, r_ok, sign_conditions, s_sets: Default::default() }
}

/// `Ω` with certificates, in lexicographic order of points, S-sets filled.
pub fn omega_set(inst: &ConstructionInstance) -> Vec<OmegaCertificate> {
    let mut members: Vec<OmegaCertificate> =
        q_star(inst.n).iter().map(|x| certificate(inst, x)).filter(|c| c.is_member()).collect();
    let gammas: HashMap<LatticePoint, CyclicTriple> = members.iter().map(|c| (c.x, c.gamma)).collect();
    for c in members.iter_mut() {
        let l = c.gamma.missing();
        c.s_sets = std::array::from_fn(|pos| {
            let [p, a, b] = c.gamma.rotated_to(c.gamma.entries()[pos]);
            let want = CyclicTriple::new(a, b, l);
            r_set(&c.x, p, c.beta[p - 1], inst.n)
                .into_iter()
                .filter(|y| gammas.get(y) == Some(&want))
                .collect()
        });
    }
    members
}

/// `Q★` points as element indices of the six planes through them.
pub fn planes_through(idx: &ElementIndex, x: &LatticePoint) -> Vec<usize> {
    PAIRS.iter().filter_map(|&(p, q)| idx.named(p, q, x.diff(p, q))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::instance::{sample_instance, DEFAULT_DELTA_EXP};

    #[test]
    fn q_star_sizes_match_brute_force() {
        for n in 0..4usize {
            let brute = (0..(n as i64 + 1).pow(4))
                .map(|c| {
                    let b = n as i64 + 1;
                    [c % b, c / b % b, c / b / b % b, c / b / b / b]
                })
                .filter(|c| *c.iter().min().unwrap() == 0)
                .count();
            assert_eq!(q_star(n).len(), brute);
            assert_eq!(brute, (n + 1).pow(4) - n.pow(4));
        }
    }

    #[test]
    fn identity_bits_give_123_everywhere() {
        let mut inst = sample_instance(2, 4, DEFAULT_DELTA_EXP);
        inst.g.iter_mut().for_each(|b| *b = false);
        for x in q_star(2) {
            assert_eq!(gamma_of_point(&inst, &x).unwrap(), CyclicTriple::new(1, 2, 3));
        }
        assert!(gamma_of_point(&inst, &LatticePoint::new([0, 5, 0, 0])).is_err());
    }

    #[test]
    fn single_factor_applies_pi() {
        let mut inst = sample_instance(1, 4, DEFAULT_DELTA_EXP);
        inst.g.iter_mut().for_each(|b| *b = false);
        let x = LatticePoint::new([1, 0, 0, 0]);
        let k = inst.index().named(1, 2, 1).unwrap();
        inst.g[k] = true;
        assert_eq!(gamma_of_point(&inst, &x).unwrap(), CyclicTriple::new(2, 1, 4));
    }

    #[test]
    fn some_r_direction_is_long() {
        for n in 1..5usize {
            for x in q_star(n) {
                for a in 1..=4 {
                    let (p, m) = r_sizes(&x, a, n);
                    assert!(2 * p.max(m) >= n, "{x} axis {a}");
                    assert_eq!(r_set(&x, a, Sign::Pos, n).len(), p);
                }
            }
        }
    }

    #[test]
    fn triangle_orientation_is_local() {
        let inst = sample_instance(3, 12, DEFAULT_DELTA_EXP);
        let idx = inst.index();
        for x in q_star(3) {
            let g = gamma_unchecked(&inst, &x);
            for l in 1..=4 {
                let tri: Vec<usize> = (1..=4).filter(|&a| a != l).collect();
                let (a, b, c) = (tri[0], tri[1], tri[2]);
                let els = [
                    idx.named(a, b, x.diff(a, b)).unwrap(),
                    idx.named(b, c, x.diff(b, c)).unwrap(),
                    idx.named(a, c, x.diff(a, c)).unwrap(),
                ];
                assert_eq!(g.orient(l), triangle_orientation(&inst, l, els));
            }
        }
    }

    #[test]
    fn beta_is_never_zero() {
        let inst = sample_instance(2, 3, DEFAULT_DELTA_EXP);
        for r in -2..=2 {
            for s in -2..=2 {
                for t in -2..=2 {
                    assert!(!beta(&inst, (1, 2, 3), (r, s, t)).unwrap().is_zero());
                }
            }
        }
        assert!(beta(&inst, (1, 2, 3), (3, 0, 0)).is_err());
    }
}
