//! Points and vectors of tropical projective 3-space, `R⁴` modulo `(1,1,1,1)`.

use std::fmt;

use num_traits::Zero;

use super::rational::{format_rational, int, Rational};

/// A class in `R⁴/(1,1,1,1)` stored with fourth coordinate 0.
///
/// Points are read in the chart `x ↦ (x₁−x₄, x₂−x₄, x₃−x₄)`. Used as a
/// normal vector, the class acts through its sum-zero representative, whose
/// first three coordinates are the chart functional.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalPoint {
    coords: [Rational; 4],
}

impl TropicalPoint {
    pub fn new(coords: [Rational; 4]) -> Self {
        let shift = coords[3].clone();
        TropicalPoint { coords: coords.map(|c| c - &shift) }
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        Self::new(c.map(int))
    }

    pub fn origin() -> Self {
        Self::from_ints([0; 4])
    }

    /// The basis class `e_i`, `i ∈ 1..=4`.
    pub fn basis(i: usize) -> Self {
        let mut c = [0; 4];
        c[i - 1] = 1;
        Self::from_ints(c)
    }

    /// `e_ij = e_i − e_j`.
    pub fn pair(i: usize, j: usize) -> Self {
        let mut c = [0; 4];
        c[i - 1] += 1;
        c[j - 1] -= 1;
        Self::from_ints(c)
    }

    pub fn coords(&self) -> &[Rational; 4] {
        &self.coords
    }

    pub fn chart(&self) -> [Rational; 3] {
        [self.coords[0].clone(), self.coords[1].clone(), self.coords[2].clone()]
    }

    pub fn from_chart(c: [Rational; 3]) -> Self {
        let [a, b, d] = c;
        TropicalPoint { coords: [a, b, d, Rational::zero()] }
    }

    pub fn sum_zero(&self) -> [Rational; 4] {
        let mean = self.coords.iter().fold(Rational::zero(), |a, c| a + c) / int(4);
        self.coords.clone().map(|c| c - &mean)
    }

    /// Chart coordinates of the linear functional `x ↦ ⟨x, self⟩`.
    pub fn functional(&self) -> Vec<Rational> {
        self.sum_zero()[..3].to_vec()
    }

    pub fn inner(&self, other: &TropicalPoint) -> Rational {
        let a = self.sum_zero();
        let b = other.sum_zero();
        a.iter().zip(b.iter()).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
    }

    /// Coordinate difference `x_i − x_j`, well defined on classes.
    pub fn diff(&self, i: usize, j: usize) -> Rational {
        &self.coords[i - 1] - &self.coords[j - 1]
    }

    pub fn add(&self, other: &TropicalPoint) -> TropicalPoint {
        TropicalPoint::new(std::array::from_fn(|a| &self.coords[a] + &other.coords[a]))
    }

    pub fn scale(&self, s: &Rational) -> TropicalPoint {
        TropicalPoint::new(std::array::from_fn(|a| &self.coords[a] * s))
    }
}

impl fmt::Display for TropicalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::rational::dot;

    #[test]
    fn classes_are_normalized() {
        let a = TropicalPoint::from_ints([3, 4, 5, 1]);
        let b = TropicalPoint::from_ints([2, 3, 4, 0]);
        assert_eq!(a, b);
        assert_eq!(TropicalPoint::pair(1, 4), TropicalPoint::from_ints([2, 1, 1, 0]));
    }

    #[test]
    fn chart_functional_agrees_with_inner_product() {
        let x = TropicalPoint::from_ints([5, -2, 7, 3]);
        for i in 1..=4 {
            for j in 1..=4 {
                if i == j {
                    continue;
                }
                let n = TropicalPoint::pair(i, j);
                assert_eq!(x.inner(&n), x.diff(i, j));
                assert_eq!(dot(&x.chart(), &n.functional()), x.diff(i, j));
            }
        }
    }
}
