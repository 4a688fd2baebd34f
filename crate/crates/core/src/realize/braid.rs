//! The braid configuration and its shifted models `B_γ`.

use std::sync::Arc;

use num_traits::Zero;

use super::affine::{lifting_from_affine, AffineArrangement};
use super::config::RationalVectorConfig;
use super::lifting::LiftingOM;
use super::rational::{int, solve, Rational};
use super::tropical::TropicalPoint;
use crate::dual::for_each_subset;
use crate::entangle::gamma::{CyclicTriple, PAIRS};
use crate::error::Result;
use crate::om::OrientedMatroid;
use crate::sign::GroundSet;

/// Ground set `{(1,2), (1,3), …, (3,4)}` of the braid matroid.
pub fn braid_ground() -> GroundSet {
    GroundSet::new(PAIRS.iter().map(|(i, j)| format!("({i},{j})"))).expect("distinct")
}

pub fn braid_config() -> RationalVectorConfig {
    let normals: Vec<TropicalPoint> = PAIRS.iter().map(|&(i, j)| TropicalPoint::pair(i, j)).collect();
    RationalVectorConfig::from_tropical(braid_ground(), &normals).expect("six normals")
}

/// `M₀`.
pub fn braid_matroid() -> OrientedMatroid {
    braid_config().om_of_config().expect("nonzero configuration")
}

/// Offset of the canonical plane `x_p − x_q = c` (`p < q`) in `B_γ`:
/// `±1` on the pairs of the triple, following its cyclic order, `0` on pairs
/// through the missing axis.
pub fn braid_offset(gamma: CyclicTriple, p: usize, q: usize) -> i64 {
    debug_assert!(p < q);
    if gamma.contains(p) && gamma.contains(q) {
        if gamma.precedes(p, q) {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

/// `B_γ` with planes in canonical orientation.
pub fn braid_model(gamma: CyclicTriple) -> AffineArrangement {
    let normals: Vec<TropicalPoint> = PAIRS.iter().map(|&(i, j)| TropicalPoint::pair(i, j)).collect();
    let offsets = PAIRS.iter().map(|&(i, j)| int(braid_offset(gamma, i, j))).collect();
    AffineArrangement::from_tropical(braid_ground(), &normals, offsets).expect("six planes")
}

/// `M_γ`, the lifting of `M₀` represented by `B_γ`.
pub fn braid_lifting(gamma: CyclicTriple) -> Result<LiftingOM> {
    lifting_from_affine(&braid_model(gamma), Arc::new(braid_matroid()))
}

#[derive(Clone, Debug)]
pub struct VertexAudit {
    /// Each vertex with the planes through it.
    pub vertices: Vec<(Vec<Rational>, Vec<usize>)>,
    pub max_concurrence: usize,
}

/// All vertices of an arrangement, from every `dim`-subset of planes with
/// independent normals.
pub fn vertex_audit(arr: &AffineArrangement) -> VertexAudit {
    let d = arr.dim();
    let mut vertices: Vec<(Vec<Rational>, Vec<usize>)> = Vec::new();
    for_each_subset(arr.ground().len(), d, &mut |s| {
        let a: Vec<Vec<Rational>> = s.iter().map(|&e| arr.normals()[e].clone()).collect();
        let b: Vec<Rational> = s.iter().map(|&e| arr.offsets()[e].clone()).collect();
        let Some(x) = solve(&a, &b) else { return };
        if vertices.iter().any(|(v, _)| *v == x) {
            return;
        }
        let through = (0..arr.ground().len()).filter(|&e| arr.sign_at(e, &x).is_zero()).collect();
        vertices.push((x, through));
    });
    let max_concurrence = vertices.iter().map(|(_, t)| t.len()).max().unwrap_or(0);
    VertexAudit { vertices, max_concurrence }
}

/// `x_i − x_j` at a chart point.
pub fn chart_diff(x: &[Rational], i: usize, j: usize) -> Rational {
    let c = |a: usize| if a == 4 { Rational::zero() } else { x[a - 1].clone() };
    c(i) - c(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sign::Sign;

    #[test]
    fn braid_matroid_shape() {
        let m = braid_matroid();
        assert_eq!(m.rank(), 3);
        assert_eq!(m.cocircuits().len(), 14);
        let p = m.profile();
        assert!(p.loops.is_empty() && p.coloops.is_empty() && !p.is_uniform);
    }

    #[test]
    fn tabulated_planes_for_123() {
        let arr = braid_model(CyclicTriple::new(1, 2, 3));
        // (1,2): x1 − x2 = 1, (1,3): x3 − x1 = 1 stored as offset −1, (1,4): 0
        assert_eq!(arr.offsets()[0], int(1));
        assert_eq!(arr.offsets()[1], int(-1));
        assert_eq!(arr.offsets()[2], int(0));
        assert_eq!(arr.offsets()[3], int(1));
    }

    #[test]
    fn origin_vertex_of_m123() {
        let l = braid_lifting(CyclicTriple::new(1, 2, 3)).unwrap();
        let g = l.matroid().ground();
        let at = |t: &str| g.index_of(t).unwrap();
        let x = l
            .positive_cocircuits()
            .find(|x| [at("(1,4)"), at("(2,4)"), at("(3,4)")].iter().all(|&e| x.get(e).is_zero()))
            .unwrap();
        // α₃₂ on (2,3), α₁₃ on (1,3), α₂₁ on (1,2)
        assert_eq!(x.get(at("(2,3)")), Sign::Neg);
        assert_eq!(x.get(at("(1,3)")), Sign::Pos);
        assert_eq!(x.get(at("(1,2)")), Sign::Neg);
    }
}
