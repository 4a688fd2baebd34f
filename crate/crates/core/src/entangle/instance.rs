//! The random data of one sample of the construction.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gamma::{pair_index, PAIRS};
use crate::error::{OmError, Result};
use crate::realize::rational::{format_rational, parse_rational, Rational};
use crate::sign::GroundSet;

/// Default `K` in `δ = 2^-K / max(N, 1)`.
pub const DEFAULT_DELTA_EXP: u32 = 20;
/// `|ε| ≤ δ² / 2^EPS_EXP` per component.
pub const EPS_EXP: u32 = 20;
/// Resolution of the random numerators of `ε`.
const EPS_BITS: u32 = 24;

/// A hyperplane `x_i − x_j = r`, stored with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    pub i: usize,
    pub j: usize,
    pub r: i64,
}

impl Element {
    /// `(p, q, r)` identified with `(q, p, −r)`.
    pub fn named(p: usize, q: usize, r: i64) -> Element {
        assert!(p != q);
        if p < q {
            Element { i: p, j: q, r }
        } else {
            Element { i: q, j: p, r: -r }
        }
    }

    pub fn pair(&self) -> usize {
        pair_index(self.i, self.j)
    }

    pub fn token(&self) -> String {
        format!("({},{},{})", self.i, self.j, self.r)
    }

    pub fn parse(text: &str) -> Result<Element> {
        let bad = || OmError::Parse(format!("bad element {text:?}"));
        let inner = text.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let p: usize = parts[0].parse().map_err(|_| bad())?;
        let q: usize = parts[1].parse().map_err(|_| bad())?;
        let r: i64 = parts[2].parse().map_err(|_| bad())?;
        if p == q || !(1..=4).contains(&p) || !(1..=4).contains(&q) {
            return Err(bad());
        }
        Ok(Element::named(p, q, r))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

/// The index set `E` for a given `N`, ordered by pair then offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementIndex {
    n: usize,
}

impl ElementIndex {
    pub fn new(n: usize) -> Self {
        ElementIndex { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn per_pair(&self) -> usize {
        2 * self.n + 1
    }

    pub fn len(&self) -> usize {
        6 * self.per_pair()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn element(&self, idx: usize) -> Element {
        let (i, j) = PAIRS[idx / self.per_pair()];
        Element { i, j, r: (idx % self.per_pair()) as i64 - self.n as i64 }
    }

    pub fn index(&self, e: Element) -> Option<usize> {
        if e.r.unsigned_abs() as usize > self.n {
            return None;
        }
        Some(e.pair() * self.per_pair() + (e.r + self.n as i64) as usize)
    }

    /// Index of the element named `(p, q, r)`, if it exists.
    pub fn named(&self, p: usize, q: usize, r: i64) -> Option<usize> {
        self.index(Element::named(p, q, r))
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.len()).map(|i| self.element(i))
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::new(self.elements().map(|e| e.token())).expect("distinct tokens")
    }
}

/// `N`, the seed, `δ`, and per element the bit `g_e`, the index `u_e` into
/// `Δ` and the perturbation `ε_e` (chart coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionInstance {
    pub n: usize,
    pub seed: u64,
    pub delta: Rational,
    pub g: Vec<bool>,
    pub u: Vec<u8>,
    pub eps: Vec<[Rational; 3]>,
}

/// `u^m` for the element `u` of `Δ` whose positive pair is `PAIRS[u]`.
pub fn u_coord(u: u8, m: usize) -> i64 {
    let (a, b) = PAIRS[u as usize];
    if m == a || m == b {
        1
    } else {
        -1
    }
}

pub fn delta_for(n: usize, k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2u8).pow(k) * BigInt::from(n.max(1)))
}

impl ConstructionInstance {
    pub fn index(&self) -> ElementIndex {
        ElementIndex::new(self.n)
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    /// `u^m_e` for the element at `idx`.
    pub fn u_at(&self, idx: usize, m: usize) -> i64 {
        u_coord(self.u[idx], m)
    }

    /// Fresh `ε` for `attempt`, scaled to the current `δ`.
    pub fn resample_eps(&mut self, attempt: u64) {
        self.eps = sample_eps(self.seed, attempt, self.len(), &self.delta);
    }

    /// Halves `δ` and redraws `ε` at the new scale.
    pub fn shrink_delta(&mut self, attempt: u64) {
        self.delta = &self.delta / Rational::from_integer(BigInt::from(2));
        self.resample_eps(attempt);
    }

    /// The same instance with fresh `g` bits; `u`, `ε` and hence `M̃` unchanged.
    pub fn with_resampled_g(&self, seed: u64) -> ConstructionInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::MAX);
        let g = (0..self.len()).map(|_| rng.gen::<bool>()).collect();
        ConstructionInstance { g, ..self.clone() }
    }

    pub fn to_file(&self) -> InstanceFile {
        let idx = self.index();
        let mut g = BTreeMap::new();
        let mut u = BTreeMap::new();
        let mut eps = BTreeMap::new();
        for (k, e) in idx.elements().enumerate() {
            g.insert(e.token(), self.g[k] as u8);
            u.insert(e.token(), self.u[k]);
            eps.insert(e.token(), self.eps[k].iter().map(format_rational).collect());
        }
        InstanceFile { n: self.n, seed: self.seed, delta: format_rational(&self.delta), g, u, eps }
    }

    pub fn from_file(file: &InstanceFile) -> Result<Self> {
        let idx = ElementIndex::new(file.n);
        let mut g = Vec::with_capacity(idx.len());
        let mut u = Vec::with_capacity(idx.len());
        let mut eps = Vec::with_capacity(idx.len());
        let count = |m: usize, what: &str| {
            if m != idx.len() {
                Err(OmError::Parse(format!("{what} has {m} entries, expected {}", idx.len())))
            } else {
                Ok(())
            }
        };
        count(file.g.len(), "g")?;
        count(file.u.len(), "u")?;
        count(file.eps.len(), "eps")?;
        for e in idx.elements() {
            let t = e.token();
            let missing = || OmError::MissingElement(t.clone());
            match file.g.get(&t).ok_or_else(missing)? {
                0 => g.push(false),
                1 => g.push(true),
                v => return Err(OmError::Parse(format!("g{t} = {v}"))),
            }
            let uv = *file.u.get(&t).ok_or_else(missing)?;
            if uv > 5 {
                return Err(OmError::Parse(format!("u{t} = {uv}")));
            }
            u.push(uv);
            let ev = file.eps.get(&t).ok_or_else(missing)?;
            if ev.len() != 3 {
                return Err(OmError::Parse(format!("eps{t} needs 3 components")));
            }
            eps.push([parse_rational(&ev[0])?, parse_rational(&ev[1])?, parse_rational(&ev[2])?]);
        }
        let delta = parse_rational(&file.delta)?;
        Ok(ConstructionInstance { n: file.n, seed: file.seed, delta, g, u, eps })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub delta: String,
    pub g: BTreeMap<String, u8>,
    pub u: BTreeMap<String, u8>,
    pub eps: BTreeMap<String, Vec<String>>,
}

fn sample_eps(seed: u64, attempt: u64, len: usize, delta: &Rational) -> Vec<[Rational; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt + 1);
    let bound = 1i64 << EPS_BITS;
    let scale = delta * delta / Rational::from_integer(BigInt::from(2u8).pow(EPS_EXP + EPS_BITS));
    (0..len)
        .map(|_| std::array::from_fn(|_| Rational::from_integer(BigInt::from(rng.gen_range(-bound..=bound))) * &scale))
        .collect()
}

/// Deterministic in `(n, seed, k)`: fair `g` bits, uniform `u` over `Δ`, and
/// `ε` components uniform on a `2^-24` grid inside `[−δ²/2²⁰, δ²/2²⁰]`.
pub fn sample_instance(n: usize, seed: u64, k: u32) -> ConstructionInstance {
    let len = ElementIndex::new(n).len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Vec::with_capacity(len);
    let mut u = Vec::with_capacity(len);
    for _ in 0..len {
        g.push(rng.gen::<bool>());
        u.push(rng.gen_range(0..6u8));
    }
    let delta = delta_for(n, k);
    let eps = sample_eps(seed, 0, len, &delta);
    ConstructionInstance { n, seed, delta, g, u, eps }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_identification() {
        assert_eq!(Element::named(3, 1, 2), Element { i: 1, j: 3, r: -2 });
        assert_eq!(Element::parse("(3,1,2)").unwrap().token(), "(1,3,-2)");
        let idx = ElementIndex::new(2);
        assert_eq!(idx.len(), 30);
        for k in 0..idx.len() {
            assert_eq!(idx.index(idx.element(k)), Some(k));
        }
        assert_eq!(idx.named(2, 1, 3), None);
    }

    #[test]
    fn deterministic_and_roundtrips() {
        let a = sample_instance(1, 7, DEFAULT_DELTA_EXP);
        let b = sample_instance(1, 7, DEFAULT_DELTA_EXP);
        assert_eq!(a.to_json_string(), b.to_json_string());
        let back = ConstructionInstance::from_json_str(&a.to_json_string()).unwrap();
        assert_eq!(back, a);
        assert_eq!(sample_instance(0, 3, DEFAULT_DELTA_EXP).len(), 6);
    }

    #[test]
    fn eps_respects_schedule() {
        let inst = sample_instance(2, 1, DEFAULT_DELTA_EXP);
        let bound = &inst.delta * &inst.delta / Rational::from_integer(BigInt::from(1u64 << EPS_EXP));
        for e in &inst.eps {
            for c in e {
                assert!(num_traits::Signed::abs(c) <= bound);
            }
        }
    }

    #[test]
    fn u_coordinates_follow_the_positive_pair() {
        for u in 0..6u8 {
            let v: Vec<i64> = (1..=4).map(|m| u_coord(u, m)).collect();
            assert_eq!(v.iter().sum::<i64>(), 0);
            let (a, b) = PAIRS[u as usize];
            assert_eq!(v[a - 1], 1);
            assert_eq!(v[b - 1], 1);
        }
    }
}
