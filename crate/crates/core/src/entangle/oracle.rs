//! Cocircuits of the entangled lifting `M̃′`, one pair per 3-subset of `E ∪ {f}`.
//!
//! Triples through `f` come from `M̃`. A triple of planes whose pairs form a
//! spanning tree of `[4]` meets at a lattice point `x*` and is read off the
//! local model `B_{γ(x*)}`. All other triples meet outside the sphere of
//! radius `100·max(N,1)` and are solved exactly in the tilted arrangement
//! `⟨x, ṽ_e⟩ = r_e`; a triangle with offsets summing to 0 is first opened into
//! a prism by moving each plane `λ = 1/100` along the triangle's orientation.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::gamma::CyclicTriple;
use super::instance::{ConstructionInstance, Element, ElementIndex};
use super::lattice::{gamma_unchecked, triangle_orientation, LatticePoint};
use crate::dual::for_each_subset;
use crate::error::{OmError, Result};
use crate::om::OrientedMatroid;
use crate::realize::braid::braid_offset;
use crate::realize::perturb::perturbed_vector;
use crate::realize::rational::sign_of_int;
use crate::sign::{GroundSet, Sign, SignVector};

/// `1/λ` for the prism shift of degenerate triangles.
pub const PRISM_SCALE: i64 = 100;
/// Far vertices must leave the sphere of radius `SPHERE_FACTOR·max(N,1)`.
pub const SPHERE_FACTOR: i64 = 100;

/// How a 3-subset of `E` is resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TripleKind {
    /// Contains `f`.
    AtInfinity,
    /// Pairs form a spanning tree; local model at the meeting point.
    Tree,
    /// Pairs form a triangle with offsets summing to 0.
    DegenerateTriangle,
    /// Pairs form a triangle with nonzero offset sum.
    Triangle,
    /// Some pair repeats.
    RepeatedPair,
}

/// Precomputed data for evaluating the oracle.
pub struct EntangledModel<'a> {
    inst: &'a ConstructionInstance,
    idx: ElementIndex,
    elems: Vec<Element>,
    /// `L_e·ṽ_e` with `L_e > 0` integral.
    v: Vec<[BigInt; 3]>,
    /// `L_e`.
    scale: Vec<BigInt>,
}

impl<'a> EntangledModel<'a> {
    pub fn new(inst: &'a ConstructionInstance) -> Self {
        let idx = inst.index();
        let elems: Vec<Element> = idx.elements().collect();
        let mut v = Vec::with_capacity(elems.len());
        let mut scale = Vec::with_capacity(elems.len());
        for k in 0..elems.len() {
            let pv = perturbed_vector(inst, k);
            let l = pv.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            v.push(std::array::from_fn(|a| pv[a].numer() * (&l / pv[a].denom())));
            scale.push(l);
        }
        EntangledModel { inst, idx, elems, v, scale }
    }

    pub fn instance(&self) -> &ConstructionInstance {
        self.inst
    }

    pub fn element_index(&self) -> &ElementIndex {
        &self.idx
    }

    /// Number of elements of `E ∪ {f}`; `f` is last.
    pub fn len(&self) -> usize {
        self.elems.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn f_index(&self) -> usize {
        self.elems.len()
    }

    pub fn ground(&self) -> GroundSet {
        let mut t: Vec<String> = self.elems.iter().map(|e| e.token()).collect();
        t.push(crate::realize::LIFT_TOKEN.to_string());
        GroundSet::new(t).expect("distinct")
    }

    pub fn classify(&self, t: [usize; 3]) -> TripleKind {
        if t.contains(&self.f_index()) {
            return TripleKind::AtInfinity;
        }
        let pairs = t.map(|k| self.elems[k].pair());
        if pairs[0] == pairs[1] || pairs[1] == pairs[2] || pairs[0] == pairs[2] {
            return TripleKind::RepeatedPair;
        }
        match self.triangle(t) {
            Some((_, sum)) if sum == 0 => TripleKind::DegenerateTriangle,
            Some(_) => TripleKind::Triangle,
            None => TripleKind::Tree,
        }
    }

    /// For three planes on the pairs of a triangle: the missing axis and the
    /// offset sum along `(a b c)`, `a < b < c`.
    fn triangle(&self, t: [usize; 3]) -> Option<(usize, i64)> {
        let mut axes = [0usize; 5];
        for &k in &t {
            axes[self.elems[k].i] += 1;
            axes[self.elems[k].j] += 1;
        }
        let l = (1..=4).find(|&a| axes[a] == 0)?;
        let mut sum = 0;
        for &k in &t {
            let e = self.elems[k];
            // (a,b) and (b,c) run along the order, (a,c) against it
            let against = e.i == (1..=4).find(|&a| a != l).unwrap() && e.j == (1..=4).rev().find(|&a| a != l).unwrap();
            sum += if against { -e.r } else { e.r };
        }
        Some((l, sum))
    }

    /// The cocircuit vanishing exactly on `t`, with `X(f) = +` unless `f ∈ t`.
    pub fn cocircuit(&self, t: [usize; 3]) -> Result<SignVector> {
        match self.classify(t) {
            TripleKind::AtInfinity => self.at_infinity(t),
            TripleKind::Tree => self.local(t),
            TripleKind::DegenerateTriangle => {
                let (l, _) = self.triangle(t).unwrap();
                let o = self.orientation_of(l, t);
                let shifts = t.map(|k| {
                    let e = self.elems[k];
                    braid_offset(o, e.i, e.j)
                });
                self.far(t, shifts)
            }
            TripleKind::Triangle | TripleKind::RepeatedPair => self.far(t, [0; 3]),
        }
    }

    /// Orientation of the triangle missing `l` along the planes of `t`.
    pub fn orientation_of(&self, l: usize, t: [usize; 3]) -> CyclicTriple {
        triangle_orientation(self.inst, l, t)
    }

    fn at_infinity(&self, t: [usize; 3]) -> Result<SignVector> {
        let f = self.f_index();
        let rest: Vec<usize> = t.iter().copied().filter(|&k| k != f).collect();
        let (a, b) = (&self.v[rest[0]], &self.v[rest[1]]);
        let w = [&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]];
        let mut x = SignVector::zero(self.len());
        for k in 0..self.elems.len() {
            if rest.contains(&k) {
                continue;
            }
            let s = sign_of_int(&(&w[0] * &self.v[k][0] + &w[1] * &self.v[k][1] + &w[2] * &self.v[k][2]));
            if s.is_zero() {
                return Err(OmError::Degenerate(format!(
                    "perturbed normals of {}, {}, {} are dependent",
                    self.elems[rest[0]], self.elems[rest[1]], self.elems[k]
                )));
            }
            x.set(k, s);
        }
        Ok(x)
    }

    /// Solves `x_p − x_q = c` along the tree edges with `x₄ = 0`.
    fn tree_solve(&self, t: [usize; 3], offset: impl Fn(&Element) -> i64) -> Option<[i64; 4]> {
        let mut val: [Option<i64>; 5] = [None; 5];
        val[4] = Some(0);
        for _ in 0..3 {
            for &k in &t {
                let e = self.elems[k];
                let c = offset(&e);
                match (val[e.i], val[e.j]) {
                    (Some(a), None) => val[e.j] = Some(a - c),
                    (None, Some(b)) => val[e.i] = Some(b + c),
                    _ => {}
                }
            }
        }
        Some([val[1]?, val[2]?, val[3]?, val[4]?])
    }

    /// The meeting point of a tree triple.
    pub fn meeting_point(&self, t: [usize; 3]) -> Option<LatticePoint> {
        self.tree_solve(t, |e| e.r).map(LatticePoint::new)
    }

    fn local(&self, t: [usize; 3]) -> Result<SignVector> {
        let x = self.meeting_point(t).ok_or_else(|| OmError::Verification("tree triple without a meeting point".into()))?;
        if !x.in_q(self.inst.n) {
            return Err(OmError::Verification(format!("tree triple meets at {x}, outside Q")));
        }
        let gamma = gamma_unchecked(self.inst, &x);
        let y = self
            .tree_solve(t, |e| braid_offset(gamma, e.i, e.j))
            .ok_or_else(|| OmError::Verification("local system is singular".into()))?;
        let mut out = SignVector::zero(self.len());
        for (k, e) in self.elems.iter().enumerate() {
            let through = x.diff(e.i, e.j) == e.r;
            let s = if through {
                Sign::of_i64(y[e.i - 1] - y[e.j - 1] - braid_offset(gamma, e.i, e.j))
            } else {
                Sign::of_i64(x.diff(e.i, e.j) - e.r)
            };
            let in_t = t.contains(&k);
            if in_t != s.is_zero() {
                return Err(OmError::Verification(format!(
                    "local model at {x} ({gamma}): plane {e} {} the vertex",
                    if in_t { "misses" } else { "also passes through" }
                )));
            }
            out.set(k, s);
        }
        out.set(self.f_index(), Sign::Pos);
        Ok(out)
    }

    /// Solves the tilted planes of `t`, plane `e` moved by `shift_e/100`.
    fn far(&self, t: [usize; 3], shifts: [i64; 3]) -> Result<SignVector> {
        let rows = t.map(|k| &self.v[k]);
        let rhs: [BigInt; 3] = std::array::from_fn(|a| {
            let e = self.elems[t[a]];
            &self.scale[t[a]] * BigInt::from(PRISM_SCALE * e.r + shifts[a])
        });
        let det3 = |c0: [&BigInt; 3], c1: [&BigInt; 3], c2: [&BigInt; 3]| -> BigInt {
            c0[0] * (c1[1] * c2[2] - c1[2] * c2[1]) - c1[0] * (c0[1] * c2[2] - c0[2] * c2[1])
                + c2[0] * (c0[1] * c1[2] - c0[2] * c1[1])
        };
        // columns of the coefficient matrix
        let col = |a: usize| [&rows[0][a], &rows[1][a], &rows[2][a]];
        let b = [&rhs[0], &rhs[1], &rhs[2]];
        let d = det3(col(0), col(1), col(2));
        if d.is_zero() {
            return Err(OmError::Degenerate(format!(
                "tilted planes {}, {}, {} have dependent normals",
                self.elems[t[0]], self.elems[t[1]], self.elems[t[2]]
            )));
        }
        // x = num / (100·d)
        let num = [det3(b, col(1), col(2)), det3(col(0), b, col(2)), det3(col(0), col(1), b)];
        let zero = BigInt::zero();
        let coords = [&num[0], &num[1], &num[2], &zero];
        let hi = coords.iter().copied().max().unwrap();
        let lo = coords.iter().copied().min().unwrap();
        let radius = BigInt::from(SPHERE_FACTOR * self.inst.n.max(1) as i64 * PRISM_SCALE) * d.abs();
        if hi - lo <= radius {
            return Err(OmError::ScaleSeparation(format!(
                "tilted planes {}, {}, {} meet inside the model sphere",
                self.elems[t[0]], self.elems[t[1]], self.elems[t[2]]
            )));
        }
        let dsign = sign_of_int(&d);
        let hundred_d = &d * BigInt::from(PRISM_SCALE);
        let mut out = SignVector::zero(self.len());
        for (k, e) in self.elems.iter().enumerate() {
            if t.contains(&k) {
                continue;
            }
            let vk = &self.v[k];
            let lhs = &num[0] * &vk[0] + &num[1] * &vk[1] + &num[2] * &vk[2];
            let s = sign_of_int(&(lhs - &hundred_d * &self.scale[k] * BigInt::from(e.r)));
            if s.is_zero() {
                return Err(OmError::Degenerate(format!(
                    "plane {e} passes through the far vertex of {}, {}, {}",
                    self.elems[t[0]], self.elems[t[1]], self.elems[t[2]]
                )));
            }
            out.set(k, s.mul(dsign));
        }
        out.set(self.f_index(), Sign::Pos);
        Ok(out)
    }

    /// All cocircuit pairs, as the matroid on `E ∪ {f}`.
    pub fn assemble(&self) -> Result<OrientedMatroid> {
        let mut cocircuits = Vec::with_capacity(crate::om::binomial(self.len(), 3));
        let mut err = None;
        for_each_subset(self.len(), 3, &mut |s| {
            if err.is_some() {
                return;
            }
            match self.cocircuit([s[0], s[1], s[2]]) {
                Ok(x) => cocircuits.push(x),
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        OrientedMatroid::new(self.ground(), 4, cocircuits)
    }

    /// The base `M̃` on `E`, read from the triples through `f`.
    pub fn base_from_infinity(&self) -> Result<Arc<OrientedMatroid>> {
        let f = self.f_index();
        let mut cocs = Vec::new();
        for a in 0..f {
            for b in a + 1..f {
                let x = self.at_infinity([a, b, f])?;
                cocs.push(x.restrict(&(0..f).collect::<Vec<_>>()));
            }
        }
        Ok(Arc::new(OrientedMatroid::new(self.idx.ground(), 3, cocs)?))
    }
}

/// `cocircuit_oracle` as a free function over element indices of `E ∪ {f}`.
pub fn cocircuit_oracle(inst: &ConstructionInstance, t: [usize; 3]) -> Result<(SignVector, SignVector)> {
    let x = EntangledModel::new(inst).cocircuit(t)?;
    let neg = -&x;
    Ok((x, neg))
}
