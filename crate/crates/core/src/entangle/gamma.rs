//! Cyclic triples of `[4]`, their orientation functions and the group
//! generated by the pair permutations.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{OmError, Result};

/// The six pairs of `[4]` in the fixed order used throughout.
pub const PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

pub fn pair_index(p: usize, q: usize) -> usize {
    let (a, b) = if p < q { (p, q) } else { (q, p) };
    PAIRS.iter().position(|&x| x == (a, b)).expect("pair of distinct axes in 1..=4")
}

/// `α_pq`: `+1` if `p < q`, else `−1`.
pub fn alpha(p: usize, q: usize) -> i64 {
    if p < q {
        1
    } else {
        -1
    }
}

/// An element of `Γ₄³`, stored as the rotation with the smallest leading entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicTriple([usize; 3]);

impl CyclicTriple {
    pub fn new(i: usize, j: usize, k: usize) -> Self {
        assert!(i != j && j != k && k != i && (1..=4).contains(&i) && (1..=4).contains(&j) && (1..=4).contains(&k));
        let t = [i, j, k];
        let m = (0..3).min_by_key(|&r| t[r]).unwrap();
        CyclicTriple([t[m], t[(m + 1) % 3], t[(m + 2) % 3]])
    }

    pub fn all() -> Vec<CyclicTriple> {
        let mut v = BTreeSet::new();
        for i in 1..=4 {
            for j in 1..=4 {
                for k in 1..=4 {
                    if i != j && j != k && k != i {
                        v.insert(CyclicTriple::new(i, j, k));
                    }
                }
            }
        }
        v.into_iter().collect()
    }

    pub fn entries(&self) -> [usize; 3] {
        self.0
    }

    /// Rotation starting at `i`, which must belong to the triple.
    pub fn rotated_to(&self, i: usize) -> [usize; 3] {
        let r = self.0.iter().position(|&x| x == i).expect("axis in triple");
        [self.0[r], self.0[(r + 1) % 3], self.0[(r + 2) % 3]]
    }

    /// The three rotations `(ijk), (jki), (kij)`.
    pub fn rotations(&self) -> [[usize; 3]; 3] {
        [self.rotated_to(self.0[0]), self.rotated_to(self.0[1]), self.rotated_to(self.0[2])]
    }

    /// The axis not in the triple.
    pub fn missing(&self) -> usize {
        10 - self.0.iter().sum::<usize>()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.0.contains(&a)
    }

    /// Whether `a → b` is a step of the cyclic order.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        let r = self.rotated_to(a);
        r[1] == b
    }

    pub fn neg(&self) -> CyclicTriple {
        CyclicTriple::new(self.0[2], self.0[1], self.0[0])
    }

    /// `o_γ(A)` for a 3-subset `A`, given by its missing axis.
    pub fn orient(&self, missing: usize) -> CyclicTriple {
        let l = self.missing();
        if missing == l {
            return *self;
        }
        // A = {a, b, l} with a → b in γ
        let r = self.rotated_to(missing);
        CyclicTriple::new(r[1], r[2], l)
    }

    /// `π_{(pq)}(γ)`.
    pub fn pi(&self, p: usize, q: usize) -> CyclicTriple {
        assert!(p != q);
        let l = self.missing();
        if p == l || q == l {
            let other = if p == l { q } else { p };
            let t = self.0.map(|x| if x == other { l } else { x });
            CyclicTriple::new(t[0], t[1], t[2])
        } else {
            let (a, b) = if self.precedes(p, q) { (p, q) } else { (q, p) };
            CyclicTriple::new(b, a, l)
        }
    }

    pub fn parse(text: &str) -> Result<CyclicTriple> {
        let digits: Vec<usize> = text
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .chars()
            .filter(|c| !matches!(c, ',' | ' '))
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| OmError::Parse(format!("bad cyclic triple {text:?}")))?;
        match digits[..] {
            [i, j, k] if i != j && j != k && k != i && [i, j, k].iter().all(|x| (1..=4).contains(x)) => {
                Ok(CyclicTriple::new(i, j, k))
            }
            _ => Err(OmError::Parse(format!("bad cyclic triple {text:?}"))),
        }
    }
}

impl fmt::Display for CyclicTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{}{})", self.0[0], self.0[1], self.0[2])
    }
}

impl serde::Serialize for CyclicTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The orientation functions `o_γ` of all eight classes.
#[derive(Clone, Debug)]
pub struct OGammaTable {
    rows: Vec<(CyclicTriple, [CyclicTriple; 4])>,
}

impl OGammaTable {
    pub fn new() -> Self {
        let rows = CyclicTriple::all().into_iter().map(|g| (g, std::array::from_fn(|m| g.orient(m + 1)))).collect();
        OGammaTable { rows }
    }

    /// `o_γ` indexed by missing axis minus one.
    pub fn get(&self, g: CyclicTriple) -> [CyclicTriple; 4] {
        self.rows.iter().find(|(h, _)| *h == g).unwrap().1
    }

    /// The class with the given orientation function.
    pub fn recover(&self, o: &[CyclicTriple; 4]) -> Option<CyclicTriple> {
        self.rows.iter().find(|(_, p)| p == o).map(|(g, _)| *g)
    }
}

impl Default for OGammaTable {
    fn default() -> Self {
        Self::new()
    }
}

/// An element of the group, as the set of triangles whose orientation it
/// reverses (bit `m − 1` for the triangle missing axis `m`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupElement(u8);

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement(0);

    pub fn pi(p: usize, q: usize) -> GroupElement {
        let mut mask = 0;
        for m in 1..=4 {
            if m != p && m != q {
                mask |= 1 << (m - 1);
            }
        }
        GroupElement(mask)
    }

    pub fn mask(&self) -> u8 {
        self.0
    }

    pub fn compose(self, other: GroupElement) -> GroupElement {
        GroupElement(self.0 ^ other.0)
    }

    pub fn flips(&self, missing: usize) -> bool {
        self.0 >> (missing - 1) & 1 == 1
    }

    pub fn act(&self, g: CyclicTriple) -> CyclicTriple {
        let o: [CyclicTriple; 4] = std::array::from_fn(|m| {
            let t = g.orient(m + 1);
            if self.flips(m + 1) {
                t.neg()
            } else {
                t
            }
        });
        OGammaTable::new().recover(&o).expect("parity-flipped orientation function is realized")
    }
}

#[derive(Clone, Debug, Default)]
pub struct GroupReport {
    pub involutions: usize,
    pub distinct_generators: usize,
    pub commuting_pairs: usize,
    pub orbit_of_123: usize,
    pub flip_table_ok: bool,
    pub h_orbits: Vec<(CyclicTriple, usize, usize, bool)>,
    pub failures: Vec<String>,
}

impl GroupReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exhaustive check of the group-action claims on `Γ₄³`.
pub fn group_properties_check() -> GroupReport {
    let all = CyclicTriple::all();
    let mut rep = GroupReport { flip_table_ok: true, ..Default::default() };
    let mut ordered = Vec::new();
    for p in 1..=4 {
        for q in 1..=4 {
            if p != q {
                ordered.push((p, q));
            }
        }
    }
    let perm = |p: usize, q: usize| -> Vec<CyclicTriple> { all.iter().map(|g| g.pi(p, q)).collect() };
    let mut distinct = BTreeSet::new();
    for &(p, q) in &ordered {
        let img = perm(p, q);
        if all.iter().all(|g| g.pi(p, q).pi(p, q) == *g) && img.iter().collect::<BTreeSet<_>>().len() == 8 {
            rep.involutions += 1;
        } else {
            rep.failures.push(format!("pi({p}{q}) is not an involutive permutation"));
        }
        distinct.insert(img);
        // the embedding into parity vectors
        for g in &all {
            if GroupElement::pi(p, q).act(*g) != g.pi(p, q) {
                rep.failures.push(format!("parity model disagrees at pi({p}{q}){g}"));
            }
        }
    }
    rep.distinct_generators = distinct.len();
    for &(p, q) in &ordered {
        for &(r, s) in &ordered {
            if all.iter().all(|g| g.pi(p, q).pi(r, s) == g.pi(r, s).pi(p, q)) {
                rep.commuting_pairs += 1;
            } else {
                rep.failures.push(format!("pi({p}{q}) and pi({r}{s}) do not commute"));
            }
        }
    }
    let orbit = |start: CyclicTriple, gens: &[(usize, usize)]| -> BTreeSet<CyclicTriple> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(g) = stack.pop() {
            for &(p, q) in gens {
                let h = g.pi(p, q);
                if seen.insert(h) {
                    stack.push(h);
                }
            }
        }
        seen
    };
    rep.orbit_of_123 = orbit(CyclicTriple::new(1, 2, 3), &ordered).len();
    if rep.orbit_of_123 != 8 {
        rep.failures.push(format!("orbit of (123) has size {}", rep.orbit_of_123));
    }
    for g in &all {
        for &(i, j) in &ordered {
            for m in 1..=4 {
                if m == i || m == j {
                    continue;
                }
                let before = g.orient(m);
                let after = g.pi(i, j).orient(m);
                if after != before.neg() {
                    rep.flip_table_ok = false;
                    rep.failures.push(format!("o on triangle without {m} not reversed by pi({i}{j}) at {g}"));
                }
            }
            for m in [i, j] {
                if g.pi(i, j).orient(m) != g.orient(m) {
                    rep.flip_table_ok = false;
                    rep.failures.push(format!("o on triangle without {m} changed by pi({i}{j}) at {g}"));
                }
            }
        }
    }
    for l in 1..=4 {
        let gens: Vec<(usize, usize)> = (1..=4).filter(|&i| i != l).map(|i| (i, l)).collect();
        let rest: Vec<usize> = (1..=4).filter(|&i| i != l).collect();
        for t in [CyclicTriple::new(rest[0], rest[1], rest[2]), CyclicTriple::new(rest[0], rest[2], rest[1])] {
            let class: BTreeSet<CyclicTriple> = all.iter().copied().filter(|g| g.orient(l) == t).collect();
            let start = *class.iter().next().unwrap();
            let is_orbit = orbit(start, &gens) == class;
            if class.len() != 4 || !is_orbit {
                rep.failures.push(format!("class {t} for l = {l}: size {}, orbit {is_orbit}", class.len()));
            }
            rep.h_orbits.push((t, l, class.len(), is_orbit));
        }
    }
    rep
}
