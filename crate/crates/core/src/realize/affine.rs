use std::sync::Arc;

use num_traits::{One, Zero};

use super::config::{RationalVectorConfig, TROPICAL_CHART};
use super::lifting::LiftingOM;
use super::rational::{dot, sign_of, Rational};
use super::tropical::TropicalPoint;
use crate::error::{OmError, Result};
use crate::om::OrientedMatroid;
use crate::sign::{GroundSet, Sign};

/// Token of the lifting element added by homogenization.
pub const LIFT_TOKEN: &str = "f";

/// Oriented affine hyperplanes `⟨x, n_e⟩ = b_e`, positive where `⟨x, n_e⟩ > b_e`.
/// Normals are chart functionals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineArrangement {
    ground: GroundSet,
    chart: String,
    normals: Vec<Vec<Rational>>,
    offsets: Vec<Rational>,
}

impl AffineArrangement {
    pub fn new(ground: GroundSet, normals: Vec<Vec<Rational>>, offsets: Vec<Rational>) -> Result<Self> {
        Self::with_chart(ground, super::config::IDENTITY_CHART, normals, offsets)
    }

    pub fn from_tropical(ground: GroundSet, normals: &[TropicalPoint], offsets: Vec<Rational>) -> Result<Self> {
        Self::with_chart(ground, TROPICAL_CHART, normals.iter().map(|n| n.functional()).collect(), offsets)
    }

    fn with_chart(
        ground: GroundSet,
        chart: &str,
        normals: Vec<Vec<Rational>>,
        offsets: Vec<Rational>,
    ) -> Result<Self> {
        if normals.len() != ground.len() || offsets.len() != ground.len() {
            return Err(OmError::GroundMismatch { left: ground.len(), right: normals.len().min(offsets.len()) });
        }
        if let Some(e) = normals.iter().position(|n| n.iter().all(|c| c.is_zero())) {
            return Err(OmError::Dimension(format!("normal of {} is zero", ground.token(e))));
        }
        let dim = normals.first().map_or(0, |n| n.len());
        if normals.iter().any(|n| n.len() != dim) {
            return Err(OmError::Dimension("normals of different dimensions".into()));
        }
        Ok(AffineArrangement { ground, chart: chart.to_string(), normals, offsets })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn normals(&self) -> &[Vec<Rational>] {
        &self.normals
    }

    pub fn offsets(&self) -> &[Rational] {
        &self.offsets
    }

    pub fn dim(&self) -> usize {
        self.normals[0].len()
    }

    /// Side of `point` (chart coordinates) relative to plane `e`.
    pub fn sign_at(&self, e: usize, point: &[Rational]) -> Sign {
        sign_of(&(dot(point, &self.normals[e]) - &self.offsets[e]))
    }

    /// The arrangement moved by `t`: every offset grows by `⟨t, n_e⟩`.
    pub fn translated(&self, t: &[Rational]) -> AffineArrangement {
        let offsets = self.offsets.iter().zip(&self.normals).map(|(b, n)| b + dot(t, n)).collect();
        AffineArrangement { offsets, ..self.clone() }
    }

    pub fn normal_config(&self) -> RationalVectorConfig {
        RationalVectorConfig::with_chart(self.ground.clone(), &self.chart, self.normals.clone())
            .expect("arrangement invariants")
    }

    /// `e ↦ (n_e, −b_e)` and `f ↦ (0, …, 0, 1)`.
    pub fn homogenized(&self) -> Result<RationalVectorConfig> {
        if self.ground.index_of(LIFT_TOKEN).is_some() {
            return Err(OmError::DuplicateElement(LIFT_TOKEN.into()));
        }
        let mut tokens = self.ground.elements().to_vec();
        tokens.push(LIFT_TOKEN.to_string());
        let mut vectors: Vec<Vec<Rational>> = self
            .normals
            .iter()
            .zip(&self.offsets)
            .map(|(n, b)| {
                let mut v = n.clone();
                v.push(-b.clone());
                v
            })
            .collect();
        let mut fv = vec![Rational::zero(); self.dim()];
        fv.push(Rational::one());
        vectors.push(fv);
        RationalVectorConfig::new(GroundSet::new(tokens)?, vectors)
    }
}

/// The realizable lifting of `base` given by an affine arrangement whose
/// normals realize `base`.
pub fn lifting_from_affine(arr: &AffineArrangement, base: Arc<OrientedMatroid>) -> Result<LiftingOM> {
    let normals = arr.normal_config().om_of_config()?;
    if normals.cocircuits() != base.cocircuits() || normals.ground() != base.ground() {
        return Err(OmError::NotALifting("normals do not realize the base matroid".into()));
    }
    let m = arr.homogenized()?.om_of_config()?;
    LiftingOM::new(m, LIFT_TOKEN, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::rational::int;
    use crate::validate::{validate, ValidationMode};

    fn generic_five() -> AffineArrangement {
        let normals = [[1, 0], [0, 1], [1, 1], [1, -2], [3, 1]];
        let offsets = [0, 1, 3, -1, 2];
        AffineArrangement::new(
            GroundSet::numbered(5),
            normals.iter().map(|n| n.iter().map(|&x| int(x)).collect()).collect(),
            offsets.iter().map(|&b| int(b)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn central_arrangement_has_one_affine_vertex() {
        let central = generic_five().translated(&[int(0), int(0)]);
        let central = AffineArrangement { offsets: vec![int(0); 5], ..central };
        let base = Arc::new(central.normal_config().om_of_config().unwrap());
        let l = lifting_from_affine(&central, base).unwrap();
        let positive: Vec<_> = l.positive_cocircuits().collect();
        assert_eq!(positive.len(), 1);
        assert_eq!(positive[0].support_len(), 1);
    }

    #[test]
    fn generic_lines_lift_and_validate() {
        let arr = generic_five();
        let base = Arc::new(arr.normal_config().om_of_config().unwrap());
        let l = lifting_from_affine(&arr, Arc::clone(&base)).unwrap();
        assert_eq!(l.matroid().rank(), 3);
        assert_eq!(l.matroid().cocircuits().len(), 2 * 15);
        assert!(validate(l.matroid(), ValidationMode::Full, true).unwrap().is_valid());
        // translation leaves the directions at infinity alone
        let moved = arr.translated(&[int(5), int(-7)]);
        let l2 = lifting_from_affine(&moved, base).unwrap();
        assert_eq!(l2.base().cocircuits(), l.base().cocircuits());
    }

    #[test]
    fn wrong_base_is_rejected() {
        let arr = generic_five();
        let other = generic_five().normal_config();
        let mut vs = other.vectors().to_vec();
        vs[4] = vec![int(-3), int(-1)];
        let bad = RationalVectorConfig::new(GroundSet::numbered(5), vs).unwrap().om_of_config().unwrap();
        assert!(matches!(lifting_from_affine(&arr, Arc::new(bad)), Err(OmError::NotALifting(_))));
    }
}
