use num_bigint::BigInt;
use num_traits::Zero;

use super::config::RationalVectorConfig;
use super::rational::{integer_scaled, Rational};
use crate::entangle::gamma::PAIRS;
use crate::entangle::instance::{u_coord, ConstructionInstance, ElementIndex};
use crate::error::{OmError, Result};
use crate::om::OrientedMatroid;
use crate::realize::tropical::TropicalPoint;

/// `v_e = e_ij` for every element of `E`: the configuration of `M`.
pub fn unperturbed_config(n: usize) -> RationalVectorConfig {
    let idx = ElementIndex::new(n);
    let normals: Vec<TropicalPoint> = idx.elements().map(|e| TropicalPoint::pair(e.i, e.j)).collect();
    RationalVectorConfig::from_tropical(idx.ground(), &normals).expect("nonempty")
}

/// Chart functional of `ṽ_e = e_ij + δ·u_e + ε_e` for the element at `k`.
pub fn perturbed_vector(inst: &ConstructionInstance, k: usize) -> [Rational; 3] {
    let e = inst.index().element(k);
    let base = TropicalPoint::pair(e.i, e.j).functional();
    // u is a sum-zero 4-vector; its chart functional is its first three entries
    std::array::from_fn(|a| {
        &base[a] + &inst.delta * Rational::from_integer(BigInt::from(u_coord(inst.u[k], a + 1))) + &inst.eps[k][a]
    })
}

pub fn perturbed_config(inst: &ConstructionInstance) -> RationalVectorConfig {
    let idx = inst.index();
    let vectors = (0..idx.len()).map(|k| perturbed_vector(inst, k).to_vec()).collect();
    RationalVectorConfig::with_chart(idx.ground(), super::config::TROPICAL_CHART, vectors).expect("consistent")
}

/// `ṽ_e` scaled to integers by a positive factor.
pub fn perturbed_integer_vectors(inst: &ConstructionInstance) -> Vec<[BigInt; 3]> {
    (0..inst.len())
        .map(|k| {
            let v = integer_scaled(&perturbed_vector(inst, k));
            [v[0].clone(), v[1].clone(), v[2].clone()]
        })
        .collect()
}

/// `M̃`, required to be uniform of rank 3 and to weakly map to `M`.
pub fn perturbed_matroid(inst: &ConstructionInstance) -> Result<OrientedMatroid> {
    let m = perturbed_config(inst).om_of_config()?;
    if m.rank() != 3 || !m.has_uniform_profile(3) {
        let zero_det = m.cocircuits().iter().find(|c| c.len() - c.support_len() != 2);
        return Err(OmError::Degenerate(format!(
            "perturbed configuration is not uniform{}",
            zero_det.map_or(String::new(), |c| format!(" (cocircuit {c})"))
        )));
    }
    let unperturbed = unperturbed_config(inst.n).om_of_config()?;
    if !m.weak_map_leq(&unperturbed)? {
        return Err(OmError::ScaleSeparation("perturbed matroid does not weakly map to the braid matroid".into()));
    }
    Ok(m)
}

/// Whether `⟨x, ṽ_e − ṽ_e′⟩` has the sign of `δ⟨x, u_e − u_e′⟩` at `x`, for
/// every pair of same-pair elements with `u_e ≠ u_e′`.
pub fn perturbation_dominated(inst: &ConstructionInstance, x: &[Rational; 3]) -> bool {
    let idx = inst.index();
    for p in 0..PAIRS.len() {
        let members: Vec<usize> = (0..idx.per_pair()).map(|r| p * idx.per_pair() + r).collect();
        for &a in &members {
            for &b in &members {
                if a >= b || inst.u[a] == inst.u[b] {
                    continue;
                }
                let du: Vec<Rational> = (1..=3)
                    .map(|m| &inst.delta * Rational::from_integer(BigInt::from(u_coord(inst.u[a], m) - u_coord(inst.u[b], m))))
                    .collect();
                let va = perturbed_vector(inst, a);
                let vb = perturbed_vector(inst, b);
                let full: Rational = (0..3).map(|c| &x[c] * (&va[c] - &vb[c])).fold(Rational::zero(), |s, t| s + t);
                let lead: Rational = (0..3).map(|c| &x[c] * &du[c]).fold(Rational::zero(), |s, t| s + t);
                if lead.is_zero() {
                    continue;
                }
                if (full > Rational::zero()) != (lead > Rational::zero()) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::instance::{sample_instance, DEFAULT_DELTA_EXP};

    #[test]
    fn zero_perturbation_is_the_braid_configuration() {
        let mut inst = sample_instance(1, 5, DEFAULT_DELTA_EXP);
        inst.delta = Rational::zero();
        for e in inst.eps.iter_mut() {
            *e = std::array::from_fn(|_| Rational::zero());
        }
        assert_eq!(perturbed_config(&inst).vectors(), unperturbed_config(1).vectors());
    }

    #[test]
    fn small_instances_are_uniform() {
        let m = perturbed_matroid(&sample_instance(0, 1, DEFAULT_DELTA_EXP)).unwrap();
        assert_eq!(m.cocircuits().len(), 30);
        let m = perturbed_matroid(&sample_instance(1, 2, DEFAULT_DELTA_EXP)).unwrap();
        assert_eq!(m.cocircuits().len(), 2 * 18 * 17 / 2);
    }

    #[test]
    fn delta_dominates_eps() {
        let inst = sample_instance(2, 9, DEFAULT_DELTA_EXP);
        for x in [[1, 2, 3], [-4, 0, 7], [5, 5, -1]] {
            let x = x.map(|c| Rational::from_integer(BigInt::from(c)));
            assert!(perturbation_dominated(&inst, &x));
        }
    }
}
