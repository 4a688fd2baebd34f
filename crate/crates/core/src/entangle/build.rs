//! Assembly of `M̃′`, its validation, the local-pattern and far-vertex
//! checks, and the degeneracy retry loop.

use std::sync::Arc;

use serde::Serialize;

use super::gamma::{alpha, CyclicTriple};
use super::instance::{ConstructionInstance, Element, ElementIndex};
use super::lattice::{beta, gamma_unchecked, q_star, triangle_orientation, LatticePoint};
use super::oracle::{EntangledModel, TripleKind};
use crate::dual::for_each_subset;
use crate::error::{OmError, Result};
use crate::om::{binomial, OrientedMatroid};
use crate::realize::lifting::{LiftingOM, TripleLookup};
use crate::realize::perturb::{perturbed_matroid, unperturbed_config};
use crate::realize::LIFT_TOKEN;
use crate::sign::{Sign, SignVector};
use crate::validate::{validate, ValidationMode};

/// Attempts before the retry loop gives up.
pub const MAX_ATTEMPTS: usize = 16;
/// Elimination pairs sampled when the full check is too large.
pub const SAMPLED_PAIRS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EliminationCheck {
    /// Every pair for `N ≤ 1`, otherwise `SAMPLED_PAIRS` seeded pairs.
    Auto,
    All,
    Sampled { pairs: usize, seed: u64 },
    Skip,
}

/// How the far-vertex hypothesis is decided before checking its conclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypothesisMode {
    /// Searched for in the unperturbed lifting (local vertices and the
    /// cocircuits of `M` at infinity), and compared with the prediction.
    Evaluate,
    /// Read from the offsets and the triangle orientation only.
    Predict,
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub elimination: EliminationCheck,
    pub local_patterns: bool,
    pub far_vertices: bool,
    /// `None` picks `Evaluate` for `N ≤ 4`.
    pub hypothesis: Option<HypothesisMode>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { elimination: EliminationCheck::Auto, local_patterns: true, far_vertices: true, hypothesis: None }
    }
}

impl BuildOptions {
    /// Assembly and the lifting check only.
    pub fn minimal() -> Self {
        BuildOptions { elimination: EliminationCheck::Skip, local_patterns: false, far_vertices: false, hypothesis: None }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BuildReport {
    pub n: usize,
    pub elements: usize,
    pub cocircuits: usize,
    pub tree_triples: usize,
    pub triangle_triples: usize,
    pub degenerate_triangles: usize,
    pub repeated_pair_triples: usize,
    pub elimination_pairs: usize,
    pub elimination_mode: String,
    /// Cocircuit patterns checked at points of `Q★`: first three-cocircuit
    /// families, then the single vertex pattern.
    pub local_family_checks: usize,
    pub local_vertex_checks: usize,
    pub far_hypotheses_true: usize,
    pub far_sign_checks: usize,
}

/// A built lifting with the instance it was finally built from.
#[derive(Clone, Debug)]
pub struct EntangledLifting {
    pub instance: ConstructionInstance,
    pub lifting: LiftingOM,
    pub report: BuildReport,
    /// 1 if no retry was needed.
    pub attempts: usize,
}

/// Builds `M̃′` from `inst` and runs the checks selected by `opts`.
pub fn build_entangled_lifting(inst: &ConstructionInstance, opts: &BuildOptions) -> Result<(LiftingOM, BuildReport)> {
    let base = Arc::new(perturbed_matroid(inst)?);
    let model = EntangledModel::new(inst);
    let mut report = BuildReport { n: inst.n, elements: model.len(), ..Default::default() };
    for_each_subset(model.len() - 1, 3, &mut |s| match model.classify([s[0], s[1], s[2]]) {
        TripleKind::Tree => report.tree_triples += 1,
        TripleKind::Triangle => report.triangle_triples += 1,
        TripleKind::DegenerateTriangle => report.degenerate_triangles += 1,
        TripleKind::RepeatedPair => report.repeated_pair_triples += 1,
        TripleKind::AtInfinity => {}
    });
    let matroid = model.assemble()?;
    let expected = 2 * binomial(model.len(), 3);
    if matroid.cocircuits().len() != expected {
        return Err(OmError::Verification(format!(
            "{} cocircuits, expected {expected}",
            matroid.cocircuits().len()
        )));
    }
    if !matroid.has_uniform_profile(4) {
        return Err(OmError::Verification("assembled matroid is not uniform of rank 4".into()));
    }
    report.cocircuits = expected;
    let lifting = LiftingOM::new(matroid, LIFT_TOKEN, base)?;

    let mode = match opts.elimination {
        EliminationCheck::Auto if inst.n <= 1 => Some(ValidationMode::CocircuitOnly),
        EliminationCheck::Auto => Some(ValidationMode::Sampled { pairs: SAMPLED_PAIRS, seed: inst.seed }),
        EliminationCheck::All => Some(ValidationMode::CocircuitOnly),
        EliminationCheck::Sampled { pairs, seed } => Some(ValidationMode::Sampled { pairs, seed }),
        EliminationCheck::Skip => None,
    };
    if let Some(mode) = mode {
        let r = validate(lifting.matroid(), mode, true)?.into_result()?;
        report.elimination_pairs = r.pairs_checked;
        report.elimination_mode = match mode {
            ValidationMode::Sampled { .. } => "sampled".into(),
            _ => "all".into(),
        };
    } else {
        report.elimination_mode = "skipped".into();
    }

    if opts.local_patterns || opts.far_vertices {
        let lookup = TripleLookup::new(&lifting)?;
        let checker = PatternChecker { inst, idx: inst.index(), lifting: &lifting, lookup };
        if opts.local_patterns {
            let (families, vertices) = checker.local_patterns()?;
            report.local_family_checks = families;
            report.local_vertex_checks = vertices;
        }
        if opts.far_vertices {
            let mode = opts.hypothesis.unwrap_or(if inst.n <= 4 { HypothesisMode::Evaluate } else { HypothesisMode::Predict });
            let (hyp, signs) = checker.far_vertices(&model, mode)?;
            report.far_hypotheses_true = hyp;
            report.far_sign_checks = signs;
        }
    }
    Ok((lifting, report))
}

/// Rebuilds on degeneracy: fresh `ε` after an exact zero, half the `δ`
/// after a scale-separation failure, at most `MAX_ATTEMPTS` builds.
pub fn build_with_retries(inst: &ConstructionInstance, opts: &BuildOptions) -> Result<EntangledLifting> {
    let mut current = inst.clone();
    let mut last = String::new();
    for attempt in 1..=MAX_ATTEMPTS {
        match build_entangled_lifting(&current, opts) {
            Ok((lifting, report)) => {
                return Ok(EntangledLifting { instance: current, lifting, report, attempts: attempt })
            }
            Err(OmError::Degenerate(msg)) => {
                last = msg;
                current.resample_eps(attempt as u64);
            }
            Err(OmError::ScaleSeparation(msg)) => {
                last = msg;
                current.shrink_delta(attempt as u64);
            }
            Err(e) => return Err(e),
        }
    }
    Err(OmError::RetriesExhausted { attempts: MAX_ATTEMPTS, last })
}

struct PatternChecker<'a> {
    inst: &'a ConstructionInstance,
    idx: ElementIndex,
    lifting: &'a LiftingOM,
    lookup: TripleLookup,
}

fn sign_of_alpha(p: usize, q: usize) -> Sign {
    Sign::of_i64(alpha(p, q))
}

impl PatternChecker<'_> {
    fn el(&self, p: usize, q: usize, r: i64) -> usize {
        self.idx.named(p, q, r).expect("offset within range")
    }

    /// The cocircuit with `X(f) = +` vanishing on three elements of `E`.
    fn vertex(&self, z: [usize; 3]) -> &SignVector {
        &self.lifting.matroid().cocircuits()[self.lookup.get(z[0], z[1], z[2])]
    }

    fn expect(&self, x: &SignVector, e: usize, want: Sign, what: &dyn Fn() -> String) -> Result<()> {
        if x.get(e) == want {
            Ok(())
        } else {
            Err(OmError::Verification(format!(
                "{}: sign {} at {}, expected {want}",
                what(),
                x.get(e),
                self.idx.element(e)
            )))
        }
    }

    /// The three-cocircuit families and the vertex pattern at every point of `Q★`.
    fn local_patterns(&self) -> Result<(usize, usize)> {
        let n = self.inst.n as i64;
        let mut families = 0;
        let mut vertices = 0;
        for x in q_star(self.inst.n) {
            let gamma = gamma_unchecked(self.inst, &x);
            let l = gamma.missing();
            for [i, j, k] in gamma.rotations() {
                let ki = self.el(k, i, x.diff(k, i));
                let ij = self.el(i, j, x.diff(i, j));
                for r in x.diff(j, k)..=n {
                    let jk = self.el(j, k, r);
                    for p in [i, j, k] {
                        let pl = self.el(p, l, x.diff(p, l));
                        let what = || format!("three-cocircuit family at {x}, γ = ({i}{j}{k}), r = {r}, p = {p}");
                        self.expect(self.vertex([ki, ij, pl]), jk, sign_of_alpha(k, j), &what)?;
                        self.expect(self.vertex([jk, ij, pl]), ki, sign_of_alpha(i, k), &what)?;
                        self.expect(self.vertex([jk, ki, pl]), ij, sign_of_alpha(j, i), &what)?;
                        families += 1;
                    }
                }
            }
            self.vertex_pattern(&x, gamma)?;
            vertices += 1;
        }
        Ok((families, vertices))
    }

    fn vertex_pattern(&self, x: &LatticePoint, gamma: CyclicTriple) -> Result<()> {
        let [i, j, k] = gamma.entries();
        let l = gamma.missing();
        let zeros = [i, j, k].map(|p| self.el(p, l, x.diff(p, l)));
        let v = self.vertex(zeros);
        let what = || format!("vertex pattern at {x}, γ = {gamma}");
        self.expect(v, self.el(j, k, x.diff(j, k)), sign_of_alpha(k, j), &what)?;
        self.expect(v, self.el(k, i, x.diff(k, i)), sign_of_alpha(i, k), &what)?;
        self.expect(v, self.el(i, j, x.diff(i, j)), sign_of_alpha(j, i), &what)?;
        for (e, el) in self.idx.elements().enumerate() {
            let d = x.diff(el.i, el.j);
            if d == el.r {
                continue;
            }
            self.expect(v, e, Sign::of_i64(d - el.r), &what)?;
        }
        Ok(())
    }

    /// Far-vertex signs on every triangle for which the hypothesis holds.
    fn far_vertices(&self, model: &EntangledModel, mode: HypothesisMode) -> Result<(usize, usize)> {
        let n = self.inst.n as i64;
        let candidates = if mode == HypothesisMode::Evaluate { Some(self.unperturbed_candidates(model)) } else { None };
        let mut hyp_true = 0;
        let mut checks = 0;
        for l in 1..=4 {
            let [a, b, c]: [usize; 3] = {
                let v: Vec<usize> = (1..=4).filter(|&m| m != l).collect();
                [v[0], v[1], v[2]]
            };
            for r_ab in -n..=n {
                for r_bc in -n..=n {
                    for r_ac in -n..=n {
                        let els = [self.el(a, b, r_ab), self.el(b, c, r_bc), self.el(a, c, r_ac)];
                        let o = triangle_orientation(self.inst, l, els);
                        for (i, j, k) in [(a, b, c), (a, c, b)] {
                            let elems = [(i, j), (j, k), (k, i)].map(|(p, q)| {
                                let e = els.iter().copied().find(|&e| {
                                    let el = self.idx.element(e);
                                    (el.i, el.j) == (p.min(q), p.max(q))
                                });
                                e.expect("triangle element")
                            });
                            let off = |e: usize, p: usize| {
                                let el: Element = self.idx.element(e);
                                if el.i == p {
                                    el.r
                                } else {
                                    -el.r
                                }
                            };
                            let (r, s, t) = (off(elems[0], i), off(elems[1], j), off(elems[2], k));
                            let sum = r + s + t;
                            let predicted = sum > 0 || (sum == 0 && o == CyclicTriple::new(i, j, k));
                            if let Some(cands) = &candidates {
                                let target = [sign_of_alpha(j, i), sign_of_alpha(k, j), sign_of_alpha(i, k)];
                                let found = conformal_cover(cands, elems, target, model.f_index());
                                if found != predicted {
                                    return Err(OmError::Verification(format!(
                                        "cell below ({i},{j},{r}), ({j},{k},{s}), ({k},{i},{t}) {} in the unperturbed lifting but is {}predicted",
                                        if found { "exists" } else { "is missing" },
                                        if predicted { "" } else { "not " }
                                    )));
                                }
                            }
                            if !predicted {
                                continue;
                            }
                            hyp_true += 1;
                            let bsign = beta(self.inst, (i, j, k), (r, s, t))?;
                            let v = self.vertex(elems);
                            for p in [i, j, k] {
                                for u in -n..=n {
                                    let what = || format!("far vertex of ({i},{j},{r}), ({j},{k},{s}), ({k},{i},{t})");
                                    self.expect(v, self.el(l, p, u), sign_of_alpha(l, p).mul(bsign), &what)?;
                                    checks += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok((hyp_true, checks))
    }

    /// Cocircuits of the unperturbed lifting relevant to cells: its local
    /// vertices (read from the tree triples) and the directions of `M`.
    fn unperturbed_candidates(&self, model: &EntangledModel) -> Vec<SignVector> {
        let f = model.f_index();
        let mut out: Vec<SignVector> = Vec::new();
        for_each_subset(f, 3, &mut |s| {
            if model.classify([s[0], s[1], s[2]]) == TripleKind::Tree {
                out.push(self.vertex([s[0], s[1], s[2]]).clone());
            }
        });
        let m: OrientedMatroid = unperturbed_config(self.inst.n).om_of_config().expect("braid configuration");
        out.extend(m.cocircuits().iter().map(|c| c.extended(Sign::Zero)));
        out
    }
}

/// Whether cocircuits conforming to `target` on `elems` and to `+` on `f`
/// cover all four positions.
fn conformal_cover(cands: &[SignVector], elems: [usize; 3], target: [Sign; 3], f: usize) -> bool {
    let mut covered = 0u8;
    for c in cands {
        let cf = c.get(f);
        if cf == Sign::Neg {
            continue;
        }
        let s = elems.map(|e| c.get(e));
        if (0..3).any(|a| !s[a].is_zero() && s[a] != target[a]) {
            continue;
        }
        let mut bits = (cf == Sign::Pos) as u8;
        for a in 0..3 {
            if !s[a].is_zero() {
                bits |= 2 << a;
            }
        }
        covered |= bits;
        if covered == 15 {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::instance::{sample_instance, DEFAULT_DELTA_EXP};
    use crate::realize::perturb::perturbed_matroid;

    #[test]
    fn n0_builds_with_all_checks() {
        for seed in 0..8 {
            let inst = sample_instance(0, seed, DEFAULT_DELTA_EXP);
            let built = build_with_retries(&inst, &BuildOptions::default()).unwrap();
            assert_eq!(built.lifting.matroid().cocircuits().len(), 70);
            assert_eq!(built.report.local_vertex_checks, 1);
            let full = validate(built.lifting.matroid(), ValidationMode::Full, true).unwrap();
            assert!(full.is_valid(), "{:?}", full.failures);
        }
    }

    #[test]
    fn n1_builds_and_restricts_to_perturbed_matroid() {
        let inst = sample_instance(1, 11, DEFAULT_DELTA_EXP);
        let built = build_with_retries(&inst, &BuildOptions::default()).unwrap();
        assert_eq!(built.lifting.matroid().cocircuits().len(), 1938);
        let base = perturbed_matroid(&built.instance).unwrap();
        assert_eq!(built.lifting.base().cocircuits(), base.cocircuits());
        assert!(built.report.far_hypotheses_true > 0);
    }

    #[test]
    fn identity_bits_give_the_123_pattern_everywhere() {
        let mut inst = sample_instance(1, 3, DEFAULT_DELTA_EXP);
        inst.g.iter_mut().for_each(|g| *g = false);
        let built = build_with_retries(&inst, &BuildOptions::default()).unwrap();
        let lookup = TripleLookup::new(&built.lifting).unwrap();
        let idx = inst.index();
        for x in q_star(1) {
            let z = [1, 2, 3].map(|p| idx.named(p, 4, x.diff(p, 4)).unwrap());
            let v = &built.lifting.matroid().cocircuits()[lookup.get(z[0], z[1], z[2])];
            // (2,3) gets α₃₂, (3,1) gets α₁₃, (1,2) gets α₂₁
            assert_eq!(v.get(idx.named(2, 3, x.diff(2, 3)).unwrap()), Sign::Neg);
            assert_eq!(v.get(idx.named(1, 3, x.diff(1, 3)).unwrap()), Sign::Pos);
            assert_eq!(v.get(idx.named(1, 2, x.diff(1, 2)).unwrap()), Sign::Neg);
        }
    }
}
