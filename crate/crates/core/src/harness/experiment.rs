//! Flip-closure experiments, the search for a non-member, and the records
//! they emit.

use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::gdagger::{blocked_index, GDagger, GDaggerSummary};
use crate::entangle::build::{build_entangled_lifting, BuildOptions, EntangledLifting};
use crate::entangle::ConstructionInstance;
use crate::error::{OmError, Result};
use crate::flips::{flip_graph_bfs, Budget, GraphStatus};
use crate::flips::{find_flip_supports, lifting_key};
use crate::realize::lifting::LiftingOM;

/// SHA-256 of the canonical instance file.
pub fn instance_hash(inst: &ConstructionInstance) -> String {
    format!("{:x}", Sha256::digest(inst.to_json_string().as_bytes()))
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaSummary {
    pub size: usize,
    /// Members whose three S-sets are all nonempty.
    pub with_nonempty_s_sets: usize,
    pub hypotheses_hold: bool,
}

impl OmegaSummary {
    pub fn of(g: &GDagger) -> Self {
        OmegaSummary {
            size: g.omega().len(),
            with_nonempty_s_sets: g.omega().iter().filter(|c| c.s_sets_nonempty()).count(),
            hypotheses_hold: g.hypotheses_hold(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexVerdict {
    pub key: String,
    pub depth: usize,
    pub membership: GDaggerSummary,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureResult {
    pub depth: usize,
    pub status: GraphStatus,
    pub vertices: Vec<VertexVerdict>,
    /// Flips of the seed lifting.
    pub seed_flips: usize,
    pub all_members: bool,
    /// `Some` only when the non-vacuity hypotheses hold; otherwise the
    /// outcome is an observation.
    pub closure_verified: Option<bool>,
    /// Supports scanned against the blocked sets, per expanded vertex.
    pub scanned_supports: usize,
    pub blocked_sets: usize,
    /// Flip supports that coincide with a blocked set.
    pub blocking_violations: Vec<String>,
}

impl ClosureResult {
    /// Nothing contradicts closure: verified where the hypotheses hold, and
    /// no blocked set is ever a support.
    pub fn passed(&self) -> bool {
        self.closure_verified != Some(false) && self.blocking_violations.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRecord {
    pub instance_hash: String,
    pub n: usize,
    pub seed: u64,
    pub build_attempts: usize,
    pub omega: OmegaSummary,
    pub membership: GDaggerSummary,
    pub closure: Option<ClosureResult>,
    pub non_member: Option<NonMemberSearch>,
    pub seconds: f64,
}

/// Breadth-first search from `built` to `depth`, with the membership check
/// at every vertex and the blocking assertion at every expanded vertex.
pub fn flip_closure_experiment(built: &EntangledLifting, depth: usize, max_vertices: usize) -> Result<ClosureResult> {
    if depth == 0 {
        return Err(OmError::Precondition("depth must be at least 1".into()));
    }
    let gd = GDagger::new(&built.instance)?;
    let mut vertices = Vec::new();
    let mut scanned = 0;
    let mut blocked_total = 0;
    let mut violations = Vec::new();
    let budget = Budget { max_vertices, max_depth: Some(depth), max_seconds: None, validation: None };
    let graph = flip_graph_bfs(
        &built.lifting,
        &budget,
        &mut |l, rec| {
            let report = gd.check(l)?;
            vertices.push(VertexVerdict { key: rec.key.clone(), depth: rec.depth, membership: report.summary() });
            if rec.depth < depth {
                let blocked = gd.blocked_supports(l)?;
                blocked_total += blocked.len();
                let index = blocked_index(&blocked);
                for w in find_flip_supports(l)? {
                    scanned += 1;
                    let mut s = w.support.0;
                    s.sort_unstable();
                    if let Some(&b) = index.get(&s) {
                        let b = &blocked[b];
                        violations.push(format!(
                            "support {:?} at vertex {} is the zero pattern for x = {}, rotation {:?}, y = {}, p = {}",
                            w.support.tokens(l),
                            rec.key,
                            b.x,
                            b.rotation,
                            b.y,
                            b.p
                        ));
                    }
                }
            }
            Ok(())
        },
        None,
    )?;
    let seed_flips = graph.edges.iter().filter(|e| e.a == graph.seed).count();
    let all_members = vertices.iter().all(|v| v.membership.member);
    let seed_member = vertices.first().is_some_and(|v| v.membership.member);
    let closure_verified = (gd.hypotheses_hold() && seed_member).then_some(all_members);
    Ok(ClosureResult {
        depth,
        status: graph.status,
        vertices,
        seed_flips,
        all_members,
        closure_verified,
        scanned_supports: scanned,
        blocked_sets: blocked_total,
        blocking_violations: violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NonMemberSearch {
    pub tried: usize,
    /// Rebuilds that hit a degeneracy and were skipped; a retry would
    /// change `M̃`.
    pub skipped: usize,
    /// The `g` seed of the first non-member found.
    pub found_seed: Option<u64>,
    pub key: Option<String>,
    pub membership: Option<GDaggerSummary>,
    /// First failing condition instance.
    pub failure: Option<String>,
    #[serde(skip)]
    pub lifting: Option<LiftingOM>,
}

/// Rebuilds with fresh `g` bits (same `u` and `ε`, hence the same `M̃`)
/// until a lifting fails the membership check against `inst`'s `Ω`.
pub fn find_non_member(inst: &ConstructionInstance, seeds: std::ops::Range<u64>) -> Result<NonMemberSearch> {
    let gd = GDagger::new(inst)?;
    if gd.omega().is_empty() {
        return Err(OmError::Precondition("Ω is empty, so every lifting is a member".into()));
    }
    let mut out =
        NonMemberSearch { tried: 0, skipped: 0, found_seed: None, key: None, membership: None, failure: None, lifting: None };
    for s in seeds {
        out.tried += 1;
        let candidate = inst.with_resampled_g(s);
        let l = match build_entangled_lifting(&candidate, &BuildOptions::minimal()) {
            Ok((l, _)) => l,
            Err(OmError::Degenerate(_)) | Err(OmError::ScaleSeparation(_)) => {
                out.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let report = gd.check(&l)?;
        if !report.is_member() {
            let f = report.failures().next().expect("non-member has a failing check");
            out.failure = Some(format!(
                "{:?} at x = {}, rotation {:?}, y = {:?}: {}",
                f.condition,
                f.x,
                f.rotation,
                f.y.map(|y| y.to_string()),
                f.failure.clone().unwrap_or_default()
            ));
            out.found_seed = Some(s);
            out.key = Some(lifting_key(&l));
            out.membership = Some(report.summary());
            out.lifting = Some(l);
            break;
        }
    }
    Ok(out)
}

/// Build, membership, and optionally closure and non-member search, timed.
pub fn run_experiment(
    built: &EntangledLifting,
    closure_depth: Option<usize>,
    max_vertices: usize,
    non_member_seeds: Option<std::ops::Range<u64>>,
) -> Result<ExperimentRecord> {
    let start = Instant::now();
    let gd = GDagger::new(&built.instance)?;
    let membership = gd.check(&built.lifting)?.summary();
    let closure = closure_depth.map(|d| flip_closure_experiment(built, d, max_vertices)).transpose()?;
    let non_member = match non_member_seeds {
        Some(seeds) if !gd.omega().is_empty() => Some(find_non_member(&built.instance, seeds)?),
        _ => None,
    };
    Ok(ExperimentRecord {
        instance_hash: instance_hash(&built.instance),
        n: built.instance.n,
        seed: built.instance.seed,
        build_attempts: built.attempts,
        omega: OmegaSummary::of(&gd),
        membership,
        closure,
        non_member,
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::build::build_with_retries;
    use crate::entangle::{omega_set, sample_instance};

    fn built(n: usize, need_omega: bool) -> EntangledLifting {
        let inst = (0..)
            .map(|s| sample_instance(n, s, 20))
            .find(|i| omega_set(i).is_empty() != need_omega)
            .unwrap();
        build_with_retries(&inst, &BuildOptions::minimal()).unwrap()
    }

    #[test]
    fn depth_one_closure_has_no_contradiction() {
        let b = built(2, true);
        let r = flip_closure_experiment(&b, 1, 100_000).unwrap();
        assert_eq!(r.vertices.len(), r.seed_flips + 1);
        assert!(r.vertices[0].membership.member);
        assert!(r.blocked_sets > 0);
        assert!(r.passed(), "{:?}", r.blocking_violations);
    }

    #[test]
    fn refuses_empty_omega() {
        let b = built(1, false);
        assert!(matches!(find_non_member(&b.instance, 0..4), Err(OmError::Precondition(_))));
    }

    #[test]
    fn non_member_search_is_reproducible() {
        let b = built(2, true);
        let first = find_non_member(&b.instance, 0..40).unwrap();
        let second = find_non_member(&b.instance, 0..40).unwrap();
        assert_eq!(first.found_seed, second.found_seed);
        assert_eq!(first.key, second.key);
        if let Some(l) = &first.lifting {
            assert_eq!(l.base().cocircuits(), b.lifting.base().cocircuits());
        }
    }

    #[test]
    fn hash_tracks_the_instance_file() {
        let a = sample_instance(1, 3, 20);
        assert_eq!(instance_hash(&a), instance_hash(&a.clone()));
        assert_ne!(instance_hash(&a), instance_hash(&a.with_resampled_g(1)));
    }
}
