//! Signs, ground sets and packed sign vectors.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use smallvec::SmallVec;

use crate::error::{OmError, Result};

/// An element of `{+, -, 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of_i64(v: i64) -> Sign {
        match v.cmp(&0) {
            Ordering::Less => Sign::Neg,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Pos,
        }
    }

    pub fn of_ordering(o: Ordering) -> Sign {
        match o {
            Ordering::Less => Sign::Neg,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Pos,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    /// Product of two signs.
    pub fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Pos,
            _ => Sign::Neg,
        }
    }

    /// Partial order with `0 < +` and `0 < -`; `+` and `-` incomparable.
    pub fn precedes(self, other: Sign) -> bool {
        self == Sign::Zero || self == other
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
            Sign::Zero => '0',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Pos),
            '-' => Some(Sign::Neg),
            '0' => Some(Sign::Zero),
            _ => None,
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
            Sign::Zero => 0,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
        }
    }
}

impl serde::Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Ordered, duplicate-free list of element tokens. The order is the
/// indexing order of every sign vector over this ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    elements: Vec<String>,
}

impl GroundSet {
    pub fn new<I, S>(elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::new();
        for e in &elements {
            if !seen.insert(e.as_str()) {
                return Err(OmError::DuplicateElement(e.clone()));
            }
        }
        Ok(GroundSet { elements })
    }

    /// Ground set `"1", "2", ..., "n"`.
    pub fn numbered(n: usize) -> Self {
        GroundSet {
            elements: (1..=n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == token)
    }

    pub fn token(&self, idx: usize) -> &str {
        &self.elements[idx]
    }

    /// Sub-ground-set in the order of `indices`.
    pub fn select(&self, indices: &[usize]) -> GroundSet {
        GroundSet {
            elements: indices.iter().map(|&i| self.elements[i].clone()).collect(),
        }
    }
}

type Words = SmallVec<[u64; 2]>;

fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

/// Dense sign vector stored as two bitsets (positive and negative support).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignVector {
    len: usize,
    pos: Words,
    neg: Words,
}

impl SignVector {
    pub fn zero(len: usize) -> Self {
        let w = words_for(len);
        SignVector {
            len,
            pos: SmallVec::from_elem(0, w),
            neg: SmallVec::from_elem(0, w),
        }
    }

    pub fn from_signs(signs: &[Sign]) -> Self {
        let mut v = SignVector::zero(signs.len());
        for (i, &s) in signs.iter().enumerate() {
            v.set(i, s);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> Sign {
        debug_assert!(i < self.len);
        let (w, b) = (i / 64, 1u64 << (i % 64));
        if self.pos[w] & b != 0 {
            Sign::Pos
        } else if self.neg[w] & b != 0 {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, s: Sign) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let (w, b) = (i / 64, 1u64 << (i % 64));
        self.pos[w] &= !b;
        self.neg[w] &= !b;
        match s {
            Sign::Pos => self.pos[w] |= b,
            Sign::Neg => self.neg[w] |= b,
            Sign::Zero => {}
        }
    }

    pub fn signs(&self) -> Vec<Sign> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.pos.iter().all(|&w| w == 0) && self.neg.iter().all(|&w| w == 0)
    }

    pub fn pos_words(&self) -> &[u64] {
        &self.pos
    }

    pub fn neg_words(&self) -> &[u64] {
        &self.neg
    }

    pub fn support_len(&self) -> usize {
        self.pos
            .iter()
            .zip(&self.neg)
            .map(|(p, n)| (p | n).count_ones() as usize)
            .sum()
    }

    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i).is_zero()).collect()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| !self.get(i).is_zero()).collect()
    }

    fn check_len(&self, other: &SignVector) -> Result<()> {
        if self.len != other.len {
            return Err(OmError::GroundMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(())
    }

    /// `X ∘ Y`: entries of `self` where nonzero, otherwise entries of `other`.
    pub fn compose(&self, other: &SignVector) -> Result<SignVector> {
        self.check_len(other)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &SignVector) -> SignVector {
        let mut out = self.clone();
        for w in 0..self.pos.len() {
            let supp = self.pos[w] | self.neg[w];
            out.pos[w] |= other.pos[w] & !supp;
            out.neg[w] |= other.neg[w] & !supp;
        }
        out
    }

    /// Orthogonality: the products `X(e)Y(e)` are all zero, or contain both signs.
    pub fn orthogonal(&self, other: &SignVector) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.orthogonal_unchecked(other))
    }

    pub(crate) fn orthogonal_unchecked(&self, other: &SignVector) -> bool {
        let mut plus = false;
        let mut minus = false;
        for w in 0..self.pos.len() {
            let pp = (self.pos[w] & other.pos[w]) | (self.neg[w] & other.neg[w]);
            let pm = (self.pos[w] & other.neg[w]) | (self.neg[w] & other.pos[w]);
            plus |= pp != 0;
            minus |= pm != 0;
        }
        plus == minus
    }

    /// Product order: entrywise `≤` with zero below both signs.
    pub fn precedes(&self, other: &SignVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        (0..self.pos.len())
            .all(|w| self.pos[w] & !other.pos[w] == 0 && self.neg[w] & !other.neg[w] == 0)
    }

    /// Mask of positions where the two vectors have opposite nonzero signs.
    pub(crate) fn separation_words(&self, other: &SignVector) -> Words {
        (0..self.pos.len())
            .map(|w| (self.pos[w] & other.neg[w]) | (self.neg[w] & other.pos[w]))
            .collect()
    }

    pub fn separation_set(&self, other: &SignVector) -> Vec<usize> {
        let sep = self.separation_words(other);
        (0..self.len)
            .filter(|&i| sep[i / 64] & (1u64 << (i % 64)) != 0)
            .collect()
    }

    /// Restriction to the given positions, in that order.
    pub fn restrict(&self, indices: &[usize]) -> SignVector {
        let mut out = SignVector::zero(indices.len());
        for (k, &i) in indices.iter().enumerate() {
            out.set(k, self.get(i));
        }
        out
    }

    /// Same vector with one extra coordinate appended.
    pub fn extended(&self, s: Sign) -> SignVector {
        let mut signs = self.signs();
        signs.push(s);
        SignVector::from_signs(&signs)
    }

    pub fn parse(text: &str) -> Result<SignVector> {
        let signs = text
            .chars()
            .map(|c| Sign::from_char(c).ok_or_else(|| OmError::Parse(format!("bad sign {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(SignVector::from_signs(&signs))
    }

    /// Of `self` and `-self`, the one whose string form is smaller.
    pub fn pair_representative(&self) -> SignVector {
        let n = -self;
        if n.to_string() < self.to_string() {
            n
        } else {
            self.clone()
        }
    }
}

impl Neg for &SignVector {
    type Output = SignVector;
    fn neg(self) -> SignVector {
        SignVector {
            len: self.len,
            pos: self.neg.clone(),
            neg: self.pos.clone(),
        }
    }
}

impl Neg for SignVector {
    type Output = SignVector;
    fn neg(self) -> SignVector {
        -&self
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector({self})")
    }
}

impl PartialOrd for SignVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used for sorting and canonical output: string order of the
/// `+-0` form.
impl Ord for SignVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for i in 0..self.len {
                let a = self.get(i).as_char();
                let b = other.get(i).as_char();
                if a != b {
                    return a.cmp(&b);
                }
            }
            Ordering::Equal
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sv(s: &str) -> SignVector {
        SignVector::parse(s).unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(sv("+0-").compose(&sv("--+")).unwrap(), sv("+--"));
        let x = sv("+-0+");
        assert_eq!(x.compose(&SignVector::zero(4)).unwrap(), x);
        assert_eq!(x.compose(&x).unwrap(), x);
        assert!(sv("+0").compose(&sv("+00")).is_err());
    }

    #[test]
    fn orthogonality_examples() {
        assert!(sv("+-").orthogonal(&SignVector::zero(2)).unwrap());
        assert!(sv("++").orthogonal(&sv("+-")).unwrap());
        assert!(!sv("++").orthogonal(&sv("+0")).unwrap());
        assert!(sv("+").orthogonal(&sv("+-")).is_err());
    }

    #[test]
    fn sign_order_and_negation() {
        assert!(Sign::Zero.precedes(Sign::Pos) && Sign::Zero.precedes(Sign::Neg));
        assert!(!Sign::Pos.precedes(Sign::Neg) && !Sign::Neg.precedes(Sign::Pos));
        assert_eq!(-Sign::Zero, Sign::Zero);
        for s in [Sign::Pos, Sign::Neg, Sign::Zero] {
            assert_eq!(-(-s), s);
        }
    }

    #[test]
    fn wide_vectors_cross_word_boundary() {
        let mut x = SignVector::zero(130);
        x.set(0, Sign::Pos);
        x.set(64, Sign::Neg);
        x.set(129, Sign::Pos);
        assert_eq!(x.support(), vec![0, 64, 129]);
        assert_eq!((-&x).get(64), Sign::Pos);
        assert_eq!(SignVector::parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn duplicate_ground_elements_rejected() {
        assert!(GroundSet::new(["a", "b", "a"]).is_err());
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = SignVector> {
        proptest::collection::vec(0..3i64, n)
            .prop_map(|v| SignVector::from_signs(&v.into_iter().map(|k| Sign::of_i64(k - 1)).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn compose_is_associative_and_idempotent(
            (x, y, z) in (1usize..90).prop_flat_map(|n| (arb_vec(n), arb_vec(n), arb_vec(n)))
        ) {
            let l = x.compose(&y).unwrap().compose(&z).unwrap();
            let r = x.compose(&y.compose(&z).unwrap()).unwrap();
            prop_assert_eq!(l, r);
            prop_assert_eq!(x.compose(&x).unwrap(), x.clone());
            prop_assert!(x.precedes(&x.compose(&y).unwrap()));
        }

        #[test]
        fn orthogonality_is_symmetric_and_negation_invariant(
            (x, y) in (1usize..70).prop_flat_map(|n| (arb_vec(n), arb_vec(n)))
        ) {
            let o = x.orthogonal(&y).unwrap();
            prop_assert_eq!(o, y.orthogonal(&x).unwrap());
            prop_assert_eq!(o, (-&x).orthogonal(&y).unwrap());
        }
    }
}
