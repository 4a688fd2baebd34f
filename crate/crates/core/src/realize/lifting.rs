use std::sync::Arc;

use crate::error::{OmError, Result};
use crate::om::OrientedMatroid;
use crate::sign::{Sign, SignVector};

/// A one-element lifting: `matroid` lives on `E ∪ {f}` and its cocircuits
/// vanishing at `f` restrict to the cocircuits of `base` on `E`.
#[derive(Clone, Debug)]
pub struct LiftingOM {
    matroid: OrientedMatroid,
    lift: usize,
    base: Arc<OrientedMatroid>,
}

impl LiftingOM {
    /// Checks the lifting condition and that `f` is not a loop.
    pub fn new(matroid: OrientedMatroid, lift_token: &str, base: Arc<OrientedMatroid>) -> Result<Self> {
        let l = Self::new_unchecked(matroid, lift_token, base)?;
        l.verify()?;
        Ok(l)
    }

    /// Reads the base off the cocircuits vanishing at `f`.
    pub fn from_matroid(matroid: OrientedMatroid, lift_token: &str) -> Result<Self> {
        let lift = matroid
            .ground()
            .index_of(lift_token)
            .ok_or_else(|| OmError::MissingElement(lift_token.to_string()))?;
        let rest: Vec<usize> = (0..matroid.len()).filter(|&i| i != lift).collect();
        let at_infinity: Vec<SignVector> = matroid
            .cocircuits()
            .iter()
            .filter(|x| x.get(lift).is_zero())
            .map(|x| x.restrict(&rest))
            .collect();
        let rank = matroid.rank().saturating_sub(1);
        let base = OrientedMatroid::new(matroid.ground().select(&rest), rank, at_infinity)?;
        Self::new(matroid, lift_token, Arc::new(base))
    }

    /// Resolves `f` and checks the ground sets, nothing else.
    pub fn new_unchecked(matroid: OrientedMatroid, lift_token: &str, base: Arc<OrientedMatroid>) -> Result<Self> {
        let lift = matroid
            .ground()
            .index_of(lift_token)
            .ok_or_else(|| OmError::MissingElement(lift_token.to_string()))?;
        let rest: Vec<&String> =
            matroid.ground().elements().iter().enumerate().filter(|&(i, _)| i != lift).map(|(_, t)| t).collect();
        if rest.len() != base.len() || rest.iter().zip(base.ground().elements()).any(|(a, b)| *a != b) {
            return Err(OmError::NotALifting("ground set is not the base ground set plus f".into()));
        }
        Ok(LiftingOM { matroid, lift, base })
    }

    pub fn matroid(&self) -> &OrientedMatroid {
        &self.matroid
    }

    pub fn into_matroid(self) -> OrientedMatroid {
        self.matroid
    }

    pub fn lift_index(&self) -> usize {
        self.lift
    }

    pub fn lift_token(&self) -> &str {
        self.matroid.ground().token(self.lift)
    }

    pub fn base(&self) -> &Arc<OrientedMatroid> {
        &self.base
    }

    /// Matroid indices of the base elements, in base order.
    pub fn base_indices(&self) -> Vec<usize> {
        (0..self.matroid.len()).filter(|&i| i != self.lift).collect()
    }

    /// Same base and lift element, different cocircuits.
    pub fn with_matroid(&self, matroid: OrientedMatroid) -> LiftingOM {
        LiftingOM { matroid, lift: self.lift, base: Arc::clone(&self.base) }
    }

    /// Cocircuits with `X(f) = +`.
    pub fn positive_cocircuits(&self) -> impl Iterator<Item = &SignVector> {
        self.matroid.cocircuits().iter().filter(move |x| x.get(self.lift) == Sign::Pos)
    }

    pub fn verify(&self) -> Result<()> {
        let idx = self.base_indices();
        let mut at_infinity: Vec<SignVector> = self
            .matroid
            .cocircuits()
            .iter()
            .filter(|x| x.get(self.lift).is_zero())
            .map(|x| x.restrict(&idx))
            .collect();
        at_infinity.sort();
        at_infinity.dedup();
        if at_infinity != self.base.cocircuits() {
            let missing = self.base.cocircuits().iter().find(|c| at_infinity.binary_search(c).is_err());
            let extra = at_infinity.iter().find(|c| !self.base.contains_cocircuit(c));
            return Err(OmError::NotALifting(format!(
                "cocircuits at f = 0 differ from the base (missing {}, extra {})",
                missing.map_or("none".into(), |c| c.to_string()),
                extra.map_or("none".into(), |c| c.to_string()),
            )));
        }
        if self.matroid.cocircuits().iter().all(|x| x.get(self.lift).is_zero()) {
            return Err(OmError::NotALifting("f is a loop".into()));
        }
        Ok(())
    }
}

/// Cocircuit lookup by zero set for uniform rank-4 liftings: each sorted
/// zero triple maps to its representative with `X(f) = +` (or, for triples
/// through `f`, the lexicographically smaller of the pair).
#[derive(Clone, Debug)]
pub struct TripleLookup {
    n: usize,
    slots: Vec<u32>,
}

impl TripleLookup {
    pub fn new(l: &LiftingOM) -> Result<Self> {
        let m = l.matroid();
        let n = m.len();
        let mut slots = vec![u32::MAX; crate::om::binomial(n, 3)];
        for (ci, x) in m.cocircuits().iter().enumerate() {
            let z = x.zero_set();
            if z.len() != 3 {
                return Err(OmError::NotUniform(format!("cocircuit {x} has {} zeros", z.len())));
            }
            let keep = match x.get(l.lift_index()) {
                Sign::Pos => true,
                Sign::Neg => false,
                Sign::Zero => *x <= -x,
            };
            if keep {
                let slot = &mut slots[colex3(z[0], z[1], z[2])];
                if *slot != u32::MAX {
                    return Err(OmError::NotUniform(format!("two cocircuit pairs vanish on {z:?}")));
                }
                *slot = ci as u32;
            }
        }
        if slots.iter().any(|&s| s == u32::MAX) {
            return Err(OmError::NotUniform("some 3-subset is not a zero set".into()));
        }
        Ok(TripleLookup { n, slots })
    }

    /// Index into the matroid's cocircuit list.
    pub fn get(&self, a: usize, b: usize, c: usize) -> usize {
        let mut t = [a, b, c];
        t.sort_unstable();
        debug_assert!(t[0] < t[1] && t[1] < t[2] && t[2] < self.n);
        self.slots[colex3(t[0], t[1], t[2])] as usize
    }
}

pub(crate) fn colex3(a: usize, b: usize, c: usize) -> usize {
    a + b * (b - 1) / 2 + c * (c - 1) * (c - 2) / 6
}
