//! Literal evaluation of the three membership conditions for the component
//! `G†` of the flip graph.
//!
//! In a uniform rank-4 lifting the cocircuit with `X(f) = +` vanishing on
//! three given elements of `E` is unique, so each "there exists a cocircuit
//! with these zeros and these signs" reduces to one lookup and a sign test.
//! A failed test is its own absence proof: the only candidate is reported.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::entangle::gamma::alpha;
use crate::entangle::{omega_set, ConstructionInstance, ElementIndex, LatticePoint, OmegaCertificate};
use crate::error::{OmError, Result};
use crate::om::OrientedMatroid;
use crate::realize::affine::LIFT_TOKEN;
use crate::realize::lifting::{LiftingOM, TripleLookup};
use crate::realize::perturb::perturbed_matroid;
use crate::sign::{Sign, SignVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    A,
    /// Clause (i), (ii) or (iii).
    B(u8),
    C,
}

/// One quantifier instance of a condition.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub x: LatticePoint,
    /// `γ(x)` rotated so that the first entry plays `i`.
    pub rotation: [usize; 3],
    pub y: Option<LatticePoint>,
    pub p: Option<usize>,
    /// Number of `(z, p)` pairs tested; `(c)` only.
    pub z_pairs: usize,
    pub satisfied: bool,
    /// Nothing to test: `S_i(x)` is empty.
    pub vacuous: bool,
    /// The cocircuit that satisfies the condition, or the only candidate
    /// when it does not.
    pub witness: String,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GDaggerReport {
    pub omega: usize,
    pub a: Vec<ConditionCheck>,
    pub b: Vec<ConditionCheck>,
    pub c: Vec<ConditionCheck>,
}

impl GDaggerReport {
    pub fn is_member(&self) -> bool {
        self.checks().all(|c| c.satisfied)
    }

    /// Membership holds only because `Ω` is empty.
    pub fn is_vacuous(&self) -> bool {
        self.omega == 0
    }

    pub fn checks(&self) -> impl Iterator<Item = &ConditionCheck> {
        self.a.iter().chain(&self.b).chain(&self.c)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionCheck> {
        self.checks().filter(|c| !c.satisfied)
    }

    pub fn vacuous_count(&self) -> usize {
        self.checks().filter(|c| c.vacuous).count()
    }

    pub fn summary(&self) -> GDaggerSummary {
        let count = |v: &[ConditionCheck]| (v.len(), v.iter().filter(|c| !c.satisfied).count());
        GDaggerSummary {
            member: self.is_member(),
            omega: self.omega,
            a: count(&self.a),
            b: count(&self.b),
            c: count(&self.c),
            vacuous: self.vacuous_count(),
        }
    }
}

/// `(instances, failures)` per condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GDaggerSummary {
    pub member: bool,
    pub omega: usize,
    pub a: (usize, usize),
    pub b: (usize, usize),
    pub c: (usize, usize),
    pub vacuous: usize,
}

fn alpha_sign(p: usize, q: usize) -> Sign {
    Sign::of_i64(alpha(p, q))
}

/// `Ω` and `M̃` of one instance, shared across many liftings.
pub struct GDagger {
    idx: ElementIndex,
    omega: Vec<OmegaCertificate>,
    base: Arc<OrientedMatroid>,
}

/// A flip support that the blocking argument rules out.
#[derive(Clone, Debug, Serialize)]
pub struct BlockedSupport {
    pub x: LatticePoint,
    pub rotation: [usize; 3],
    pub y: LatticePoint,
    pub p: usize,
    /// The four elements: `(j,k,y_j−y_k)`, `(k,i,x_k−x_i)`, `(i,j,x_i−x_j)`, `(p,l,x_p−x_l)`.
    pub support: [usize; 4],
}

impl GDagger {
    pub fn new(inst: &ConstructionInstance) -> Result<Self> {
        Ok(GDagger { idx: inst.index(), omega: omega_set(inst), base: Arc::new(perturbed_matroid(inst)?) })
    }

    pub fn omega(&self) -> &[OmegaCertificate] {
        &self.omega
    }

    pub fn base(&self) -> &Arc<OrientedMatroid> {
        &self.base
    }

    /// Both non-vacuity hypotheses: `Ω ≠ ∅` and every S-set nonempty.
    pub fn hypotheses_hold(&self) -> bool {
        !self.omega.is_empty() && self.omega.iter().all(|c| c.s_sets_nonempty())
    }

    fn el(&self, p: usize, q: usize, r: i64) -> usize {
        self.idx.named(p, q, r).expect("differences of Q★ points are offsets of E")
    }

    fn require_lifting_of_base(&self, l: &LiftingOM) -> Result<()> {
        let ground = l.matroid().ground();
        let tokens_ok = ground.len() == self.idx.len() + 1
            && ground.token(self.idx.len()) == LIFT_TOKEN
            && self.idx.elements().enumerate().all(|(e, el)| ground.token(e) == el.token());
        if !tokens_ok {
            return Err(OmError::NotALifting("lifting is not over the instance's element order".into()));
        }
        if !Arc::ptr_eq(l.base(), &self.base) && l.base().cocircuits() != self.base.cocircuits() {
            return Err(OmError::NotALifting("base differs from the perturbed configuration's matroid".into()));
        }
        Ok(())
    }

    /// Every quantifier instance of the three conditions.
    pub fn check(&self, l: &LiftingOM) -> Result<GDaggerReport> {
        self.require_lifting_of_base(l)?;
        let lookup = TripleLookup::new(l)?;
        let cocs = l.matroid().cocircuits();
        let vertex = |a: usize, b: usize, c: usize| -> &SignVector { &cocs[lookup.get(a, b, c)] };
        let test = |x: &SignVector, checks: &[(usize, Sign)]| -> Option<String> {
            checks.iter().find(|&&(e, s)| x.get(e) != s).map(|&(e, s)| {
                format!("sign {} at {}, required {s}", x.get(e), self.idx.element(e))
            })
        };
        let mut report = GDaggerReport { omega: self.omega.len(), a: Vec::new(), b: Vec::new(), c: Vec::new() };

        for cx in &self.omega {
            let x = &cx.x;
            let l4 = cx.gamma.missing();
            // (b): one cocircuit per x, tested against every qualifying y
            {
                let [i, j, k] = cx.gamma.entries();
                let xb = vertex(self.el(i, l4, x.diff(i, l4)), self.el(j, l4, x.diff(j, l4)), self.el(k, l4, x.diff(k, l4)));
                for (clause, (p, q, want)) in [(j, k, alpha_sign(k, j)), (k, i, alpha_sign(i, k)), (i, j, alpha_sign(j, i))]
                    .into_iter()
                    .enumerate()
                {
                    for cy in self.omega.iter().filter(|cy| cy.x.diff(p, q) >= x.diff(p, q)) {
                        let failure = test(xb, &[(self.el(p, q, cy.x.diff(p, q)), want)]);
                        report.b.push(ConditionCheck {
                            condition: Condition::B(clause as u8 + 1),
                            x: *x,
                            rotation: [i, j, k],
                            y: Some(cy.x),
                            p: None,
                            z_pairs: 0,
                            satisfied: failure.is_none(),
                            vacuous: false,
                            witness: xb.to_string(),
                            failure,
                        });
                    }
                }
            }
            for [i, j, k] in cx.gamma.rotations() {
                let ki = self.el(k, i, x.diff(k, i));
                let ij = self.el(i, j, x.diff(i, j));
                let kl = self.el(k, l4, x.diff(k, l4));
                let lj = self.el(l4, j, x.diff(l4, j));
                let s_i = cx.s_set(i);
                let beta_i = cx.beta[i - 1];
                for cy in self.omega.iter().filter(|cy| cy.x.diff(j, k) >= x.diff(j, k)) {
                    let jk = self.el(j, k, cy.x.diff(j, k));
                    // (a)
                    for p in [i, j, k] {
                        let pl = self.el(p, l4, x.diff(p, l4));
                        let x1 = vertex(ki, ij, pl);
                        let x2 = vertex(jk, ij, pl);
                        let x3 = vertex(jk, ki, pl);
                        let failure = test(x1, &[(jk, alpha_sign(k, j))])
                            .map(|m| format!("X1: {m}"))
                            .or_else(|| test(x2, &[(ki, alpha_sign(i, k))]).map(|m| format!("X2: {m}")))
                            .or_else(|| test(x3, &[(ij, alpha_sign(j, i))]).map(|m| format!("X3: {m}")));
                        report.a.push(ConditionCheck {
                            condition: Condition::A,
                            x: *x,
                            rotation: [i, j, k],
                            y: Some(cy.x),
                            p: Some(p),
                            z_pairs: 0,
                            satisfied: failure.is_none(),
                            vacuous: false,
                            witness: format!("{} {} {}", x1, x2, x3),
                            failure,
                        });
                    }
                    // (c)
                    let xc = vertex(jk, kl, lj);
                    let wants: Vec<(usize, Sign)> = s_i
                        .iter()
                        .flat_map(|z| [j, k, l4].map(|p| (self.el(i, p, z.diff(i, p)), alpha_sign(i, p).mul(beta_i))))
                        .collect();
                    let failure = test(xc, &wants);
                    report.c.push(ConditionCheck {
                        condition: Condition::C,
                        x: *x,
                        rotation: [i, j, k],
                        y: Some(cy.x),
                        p: None,
                        z_pairs: wants.len(),
                        satisfied: failure.is_none(),
                        vacuous: s_i.is_empty(),
                        witness: xc.to_string(),
                        failure,
                    });
                }
            }
        }
        Ok(report)
    }

    /// The four-element sets that the blocking argument forbids as flip
    /// supports: the zero pattern of an `(a)` family whenever the `(b)`
    /// cocircuit at `x` carries the three cyclic signs and vanishes at the
    /// fourth element.
    pub fn blocked_supports(&self, l: &LiftingOM) -> Result<Vec<BlockedSupport>> {
        self.require_lifting_of_base(l)?;
        let lookup = TripleLookup::new(l)?;
        let cocs = l.matroid().cocircuits();
        let mut out = Vec::new();
        for cx in &self.omega {
            let x = &cx.x;
            let l4 = cx.gamma.missing();
            let [a, b, c] = cx.gamma.entries();
            let xb = &cocs[lookup.get(
                self.el(a, l4, x.diff(a, l4)),
                self.el(b, l4, x.diff(b, l4)),
                self.el(c, l4, x.diff(c, l4)),
            )];
            for [i, j, k] in cx.gamma.rotations() {
                let ki = self.el(k, i, x.diff(k, i));
                let ij = self.el(i, j, x.diff(i, j));
                for cy in self.omega.iter().filter(|cy| cy.x.diff(j, k) >= x.diff(j, k)) {
                    let jk = self.el(j, k, cy.x.diff(j, k));
                    let cyclic = xb.get(jk) == alpha_sign(k, j)
                        && xb.get(ki) == alpha_sign(i, k)
                        && xb.get(ij) == alpha_sign(j, i);
                    for p in [i, j, k] {
                        let pl = self.el(p, l4, x.diff(p, l4));
                        if cyclic && xb.get(pl).is_zero() {
                            out.push(BlockedSupport { x: *x, rotation: [i, j, k], y: cy.x, p, support: [jk, ki, ij, pl] });
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// [`GDagger::check`] for a single lifting.
pub fn gdagger_check(l: &LiftingOM, inst: &ConstructionInstance) -> Result<GDaggerReport> {
    GDagger::new(inst)?.check(l)
}

/// Blocked supports keyed by their sorted element set.
pub fn blocked_index(blocked: &[BlockedSupport]) -> HashMap<[usize; 4], usize> {
    let mut out = HashMap::new();
    for (n, b) in blocked.iter().enumerate() {
        let mut s = b.support;
        s.sort_unstable();
        out.entry(s).or_insert(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::build::{build_with_retries, BuildOptions};
    use crate::entangle::sample_instance;

    fn member_instance() -> (ConstructionInstance, LiftingOM) {
        for seed in 0.. {
            let inst = sample_instance(2, seed, 20);
            if omega_set(&inst).is_empty() {
                continue;
            }
            let built = build_with_retries(&inst, &BuildOptions::minimal()).unwrap();
            return (built.instance, built.lifting);
        }
        unreachable!()
    }

    #[test]
    fn built_lifting_is_a_member() {
        let (inst, l) = member_instance();
        let r = gdagger_check(&l, &inst).unwrap();
        assert!(r.omega > 0 && !r.a.is_empty() && !r.b.is_empty() && !r.c.is_empty());
        assert!(r.is_member(), "{:?}", r.failures().next());
    }

    #[test]
    fn b_at_y_equal_x_is_the_vertex_pattern() {
        let (inst, l) = member_instance();
        let r = gdagger_check(&l, &inst).unwrap();
        for c in r.b.iter().filter(|c| c.y == Some(c.x)) {
            let x = SignVector::parse(&c.witness).unwrap();
            let [i, j, k] = c.rotation;
            let l4 = 10 - i - j - k;
            let idx = inst.index();
            for p in [i, j, k] {
                assert!(x.get(idx.named(p, l4, c.x.diff(p, l4)).unwrap()).is_zero());
            }
            assert_eq!(x.get(idx.named(j, k, c.x.diff(j, k)).unwrap()), alpha_sign(k, j));
            assert_eq!(x.get(idx.named(k, i, c.x.diff(k, i)).unwrap()), alpha_sign(i, k));
            assert_eq!(x.get(idx.named(i, j, c.x.diff(i, j)).unwrap()), alpha_sign(j, i));
        }
    }

    #[test]
    fn empty_omega_is_vacuous() {
        let inst = (0..).map(|s| sample_instance(1, s, 20)).find(|i| omega_set(i).is_empty()).unwrap();
        let built = build_with_retries(&inst, &BuildOptions::minimal()).unwrap();
        let r = gdagger_check(&built.lifting, &built.instance).unwrap();
        assert!(r.is_member() && r.is_vacuous());
        assert_eq!(r.checks().count(), 0);
    }

    #[test]
    fn other_base_is_rejected() {
        let (inst, l) = member_instance();
        let other = build_with_retries(&sample_instance(inst.n, inst.seed + 1000, 20), &BuildOptions::minimal()).unwrap();
        assert!(gdagger_check(&other.lifting, &inst).is_err());
        assert!(gdagger_check(&l, &inst).is_ok());
    }
}
