//! Command-line front end. Exit codes: 0 success, 1 verification failure,
//! 2 usage or input error, 3 degeneracy retries exhausted.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use super::experiment::{find_non_member, flip_closure_experiment, instance_hash, OmegaSummary};
use super::gdagger::GDagger;
use crate::dual::dual;
use crate::entangle::build::{build_with_retries, BuildOptions, EntangledLifting};
use crate::entangle::instance::DEFAULT_DELTA_EXP;
use crate::entangle::prob::{all_target_probabilities, min_n_threshold, montecarlo_omega, claimed_lower_bound};
use crate::entangle::{sample_instance, ConstructionInstance};
use crate::error::{OmError, Result};
use crate::flips::{flip_graph_bfs, flip_graph_resume, Budget};
use crate::om::OrientedMatroid;
use crate::realize::affine::LIFT_TOKEN;
use crate::realize::lifting::LiftingOM;
use crate::validate::{validate, ValidationMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RETRIES: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "omflip", version, about = "Exact oriented-matroid workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a construction instance.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_DELTA_EXP)]
        delta_exp: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and check the entangled lifting of an instance.
    Build {
        #[command(flatten)]
        instance: InstanceArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Checks to run after assembly.
        #[arg(long, value_enum, default_value_t = Checks::Full)]
        checks: Checks,
        /// The instance actually built, after any degeneracy retries.
        #[arg(long)]
        instance_out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check the oriented-matroid axioms.
    Validate {
        /// Matroid file; stdin when omitted.
        #[arg(long)]
        matroid: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Cocircuit)]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        pairs: usize,
        /// Required for sampled mode.
        #[arg(long)]
        seed: Option<u64>,
        /// Also require the uniform profile.
        #[arg(long)]
        uniform: bool,
        /// Also check the lifting condition for the element `f`.
        #[arg(long)]
        lifting: bool,
    },
    /// Breadth-first flip graph from a lifting.
    Flipgraph {
        /// Lifting matroid file (the seed vertex).
        #[arg(long)]
        seed: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        budget_vertices: usize,
        #[arg(long)]
        budget_seconds: Option<f64>,
        #[arg(long)]
        depth: Option<usize>,
        /// JSON-lines graph log.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Continue the search logged in `--out`.
        #[arg(long, requires = "out")]
        resume: bool,
        /// Skip the axiom check of discovered vertices.
        #[arg(long)]
        no_validate: bool,
    },
    /// List `Ω` with certificates.
    Omega {
        #[command(flatten)]
        instance: InstanceArg,
    },
    /// Membership of a lifting (default: the built one) in `G†`.
    Gdagger {
        #[command(flatten)]
        instance: InstanceArg,
        #[arg(long)]
        matroid: Option<PathBuf>,
        /// Full per-instance report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Flip-closure experiment from the built lifting.
    Closure {
        #[command(flatten)]
        instance: InstanceArg,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        max_vertices: usize,
        /// Resampled `g` seeds to try for a non-member.
        #[arg(long, default_value_t = 0)]
        non_member_seeds: u64,
        /// First seed of the non-member search; required with it.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Exact event probabilities for every orientation and sign target.
    ProbEnum,
    /// Least `N` for which the existence bound drops below 1.
    MinN,
    /// Empirical membership frequencies along a line.
    Montecarlo {
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Plain oriented-matroid operations.
    Om {
        #[command(subcommand)]
        op: OmOp,
    },
}

#[derive(Subcommand, Debug)]
enum OmOp {
    Dual {
        #[arg(long)]
        matroid: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Restrict {
        #[arg(long)]
        matroid: Option<PathBuf>,
        /// Comma-separated element tokens to keep.
        #[arg(long, value_delimiter = ',')]
        elements: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank, loops, coloops, uniformity.
    Check {
        #[arg(long)]
        matroid: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct InstanceArg {
    /// Instance file; stdin when omitted.
    #[arg(long)]
    instance: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Checks {
    Full,
    Minimal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Full,
    Cocircuit,
    Sampled,
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn input(&mut self, path: Option<&Path>) -> Result<String> {
        match path {
            Some(p) if p != Path::new("-") => Ok(fs::read_to_string(p)?),
            _ => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s)?;
                Ok(s)
            }
        }
    }

    fn output(&mut self, path: Option<&Path>, text: &str) -> Result<()> {
        match path {
            Some(p) if p != Path::new("-") => fs::write(p, text)?,
            _ => self.stdout.write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn json<T: Serialize>(&mut self, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.output(None, &s)
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

/// Exit code for an error.
pub fn exit_code(e: &OmError) -> i32 {
    match e {
        OmError::RetriesExhausted { .. } => EXIT_RETRIES,
        OmError::Io(_) | OmError::Json(_) | OmError::Parse(_) | OmError::Precondition(_) => EXIT_USAGE,
        _ => EXIT_VERIFICATION,
    }
}

/// Runs one command line. Diagnostics go to stderr, results to `stdout`.
pub fn cli_dispatch<I, T>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(stdout, "{}", if code == EXIT_OK { e.to_string() } else { String::new() });
            if code != EXIT_OK {
                eprint!("{e}");
            }
            return code;
        }
    };
    let mut io = Io { stdin, stdout };
    match run(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn read_instance(io: &mut Io, arg: &InstanceArg) -> Result<ConstructionInstance> {
    ConstructionInstance::from_json_str(&io.input(arg.instance.as_deref())?)
}

fn read_matroid(io: &mut Io, path: Option<&Path>) -> Result<OrientedMatroid> {
    OrientedMatroid::from_json_str(&io.input(path)?)
}

fn build(inst: &ConstructionInstance, opts: &BuildOptions) -> Result<EntangledLifting> {
    let built = build_with_retries(inst, opts)?;
    if built.attempts > 1 {
        eprintln!("note: built after {} attempts; the instance was adjusted", built.attempts);
    }
    Ok(built)
}

fn verdict(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    }
}

fn run(command: Command, io: &mut Io) -> Result<i32> {
    match command {
        Command::Construct { n, seed, delta_exp, out } => {
            let inst = sample_instance(n, seed, delta_exp);
            io.output(out.as_deref(), &inst.to_json_string())?;
            Ok(EXIT_OK)
        }
        Command::Build { instance, out, checks, instance_out, report } => {
            let inst = read_instance(io, &instance)?;
            let opts = match checks {
                Checks::Full => BuildOptions::default(),
                Checks::Minimal => BuildOptions::minimal(),
            };
            let built = build(&inst, &opts)?;
            if let Some(p) = instance_out {
                fs::write(p, built.instance.to_json_string())?;
            }
            if let Some(p) = report {
                write_json(
                    &p,
                    &json!({
                        "instance_hash": instance_hash(&built.instance),
                        "attempts": built.attempts,
                        "build": built.report,
                    }),
                )?;
            }
            io.output(out.as_deref(), &built.lifting.matroid().to_json_string())?;
            Ok(EXIT_OK)
        }
        Command::Validate { matroid, mode, pairs, seed, uniform, lifting } => {
            let m = read_matroid(io, matroid.as_deref())?;
            let mode = match mode {
                Mode::Full => ValidationMode::Full,
                Mode::Cocircuit => ValidationMode::CocircuitOnly,
                Mode::Sampled => {
                    let seed = seed.ok_or_else(|| OmError::Precondition("sampled mode needs --seed".into()))?;
                    ValidationMode::Sampled { pairs, seed }
                }
            };
            let r = validate(&m, mode, uniform)?;
            let lifting_ok = if lifting {
                Some(LiftingOM::from_matroid(m.clone(), LIFT_TOKEN).map_err(|e| e.to_string()))
            } else {
                None
            };
            let failures: Vec<_> =
                r.failures.iter().map(|f| json!({"axiom": f.axiom.to_string(), "witness": f.witness})).collect();
            io.json(&json!({
                "elements": m.len(),
                "rank": m.rank(),
                "cocircuits": m.cocircuits().len(),
                "pairs_checked": r.pairs_checked,
                "valid": r.is_valid(),
                "failures": failures,
                "lifting": lifting_ok.as_ref().map(|l| match l { Ok(_) => "ok".to_string(), Err(e) => e.clone() }),
            }))?;
            Ok(verdict(r.is_valid() && lifting_ok.is_none_or(|l| l.is_ok())))
        }
        Command::Flipgraph { seed, budget_vertices, budget_seconds, depth, out, resume, no_validate } => {
            let m = read_matroid(io, Some(&seed))?;
            let l = LiftingOM::from_matroid(m, LIFT_TOKEN)?;
            let budget = Budget {
                max_vertices: budget_vertices,
                max_depth: depth,
                max_seconds: budget_seconds,
                validation: (!no_validate).then_some(ValidationMode::CocircuitOnly),
            };
            let mut visit = |_: &LiftingOM, _: &crate::flips::VertexRecord| Ok(());
            let g = if resume {
                flip_graph_resume(&l, &budget, &mut visit, out.as_deref().expect("required by clap"))?
            } else {
                flip_graph_bfs(&l, &budget, &mut visit, out.as_deref())?
            };
            io.json(&json!({
                "seed": g.seed,
                "status": g.status,
                "vertices": g.vertex_count(),
                "edges": g.undirected_edges().len(),
                "symmetric": g.is_symmetric(),
            }))?;
            Ok(verdict(g.is_symmetric()))
        }
        Command::Omega { instance } => {
            let inst = read_instance(io, &instance)?;
            let members = crate::entangle::omega_set(&inst);
            if inst.n < 2 {
                eprintln!("note: N < 2, the size conditions on the R-sets are (nearly) vacuous");
            }
            io.json(&json!({ "instance_hash": instance_hash(&inst), "n": inst.n, "omega": members }))?;
            Ok(EXIT_OK)
        }
        Command::Gdagger { instance, matroid, report } => {
            let inst = read_instance(io, &instance)?;
            let gd = GDagger::new(&inst)?;
            let l = match matroid {
                Some(p) => {
                    let m = read_matroid(io, Some(&p))?;
                    LiftingOM::new(m, LIFT_TOKEN, gd.base().clone())?
                }
                None => {
                    let built = build(&inst, &BuildOptions::minimal())?;
                    if built.attempts > 1 {
                        return Err(OmError::Precondition(
                            "the instance needed degeneracy retries; build it first and pass --matroid".into(),
                        ));
                    }
                    built.lifting
                }
            };
            let r = gd.check(&l)?;
            if let Some(p) = report {
                write_json(&p, &json!({ "instance_hash": instance_hash(&inst), "report": r }))?;
            }
            io.json(&json!({
                "instance_hash": instance_hash(&inst),
                "omega": OmegaSummary::of(&gd),
                "membership": r.summary(),
                "vacuous": r.is_vacuous(),
                "first_failure": r.failures().next(),
            }))?;
            Ok(verdict(r.is_member()))
        }
        Command::Closure { instance, depth, max_vertices, non_member_seeds, seed, report } => {
            let inst = read_instance(io, &instance)?;
            let built = build(&inst, &BuildOptions::minimal())?;
            let gd = GDagger::new(&built.instance)?;
            let start = std::time::Instant::now();
            let membership = gd.check(&built.lifting)?.summary();
            let closure = flip_closure_experiment(&built, depth, max_vertices)?;
            let non_member = if non_member_seeds > 0 {
                let s = seed.ok_or_else(|| OmError::Precondition("the non-member search needs --seed".into()))?;
                if gd.omega().is_empty() {
                    None
                } else {
                    Some(find_non_member(&built.instance, s..s + non_member_seeds)?)
                }
            } else {
                None
            };
            let unreached = match (&non_member, &closure) {
                (Some(nm), c) => nm.key.as_ref().map(|k| c.vertices.iter().all(|v| &v.key != k)),
                _ => None,
            };
            let ok = closure.passed() && membership.member;
            let record = super::experiment::ExperimentRecord {
                instance_hash: instance_hash(&built.instance),
                n: built.instance.n,
                seed: built.instance.seed,
                build_attempts: built.attempts,
                omega: OmegaSummary::of(&gd),
                membership,
                closure: Some(closure),
                non_member,
                seconds: start.elapsed().as_secs_f64(),
            };
            if let Some(p) = report {
                write_json(&p, &record)?;
            }
            let c = record.closure.as_ref().expect("set above");
            io.json(&json!({
                "instance_hash": record.instance_hash,
                "omega": record.omega,
                "seed_member": record.membership.member,
                "status": c.status,
                "vertices": c.vertices.len(),
                "seed_flips": c.seed_flips,
                "all_members": c.all_members,
                "closure_verified": c.closure_verified,
                "blocked_sets": c.blocked_sets,
                "blocking_violations": c.blocking_violations.len(),
                "non_member_seed": record.non_member.as_ref().and_then(|n| n.found_seed),
                "non_member_unreached": unreached,
            }))?;
            Ok(verdict(ok))
        }
        Command::ProbEnum => {
            let all = all_target_probabilities();
            let bound = claimed_lower_bound();
            let min = all.iter().map(|t| t.probability.clone()).min().expect("64 entries");
            let ok = all.iter().all(|t| t.probability >= bound);
            io.json(&json!({ "bound": bound.to_string(), "minimum": min.to_string(), "all_above_bound": ok, "targets": all }))?;
            Ok(verdict(ok))
        }
        Command::MinN => {
            let t = min_n_threshold();
            io.json(&t)?;
            Ok(verdict(t.exact_at_n && !t.exact_below))
        }
        Command::Montecarlo { trials, n, seed } => {
            if n == 0 || trials == 0 {
                return Err(OmError::Precondition("need N ≥ 1 and at least one trial".into()));
            }
            let r = montecarlo_omega(trials, n, seed);
            io.json(&json!({ "within_4_sigma": r.within(4.0), "report": r }))?;
            Ok(verdict(r.within(4.0)))
        }
        Command::Om { op } => match op {
            OmOp::Dual { matroid, out } => {
                let m = read_matroid(io, matroid.as_deref())?;
                io.output(out.as_deref(), &dual(&m)?.to_json_string())?;
                Ok(EXIT_OK)
            }
            OmOp::Restrict { matroid, elements, out } => {
                let m = read_matroid(io, matroid.as_deref())?;
                io.output(out.as_deref(), &m.restriction_by_tokens(&elements)?.to_json_string())?;
                Ok(EXIT_OK)
            }
            OmOp::Check { matroid } => {
                let m = read_matroid(io, matroid.as_deref())?;
                let p = m.profile();
                let tok = |v: &[usize]| v.iter().map(|&i| m.ground().token(i).to_string()).collect::<Vec<_>>();
                io.json(&json!({
                    "elements": m.len(),
                    "rank": p.rank,
                    "loops": tok(&p.loops),
                    "coloops": tok(&p.coloops),
                    "uniform": p.is_uniform,
                    "basis": tok(&p.basis),
                    "cocircuits": m.cocircuits().len(),
                }))?;
                Ok(EXIT_OK)
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str], input: &str) -> (i32, String) {
        let mut stdin = input.as_bytes();
        let mut out = Vec::new();
        let code = cli_dispatch(std::iter::once("omflip").chain(args.iter().copied()), &mut stdin, &mut out);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn construct_build_validate_pipeline() {
        let (c, inst) = run_cli(&["construct", "--n", "1", "--seed", "7"], "");
        assert_eq!(c, 0);
        let (c, m) = run_cli(&["build"], &inst);
        assert_eq!(c, 0);
        let (c, report) = run_cli(&["validate", "--uniform", "--lifting"], &m);
        assert_eq!(c, 0, "{report}");
        assert!(report.contains("\"valid\": true"));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_cli(&["construct", "--n", "1"], "").0, EXIT_USAGE);
        assert_eq!(run_cli(&["frobnicate"], "").0, EXIT_USAGE);
        assert_eq!(run_cli(&["build"], "not json").0, EXIT_USAGE);
        let (_, m) = run_cli(&["build"], &sample_instance(0, 1, 20).to_json_string());
        assert_eq!(run_cli(&["validate", "--mode", "sampled"], &m).0, EXIT_USAGE);
    }

    #[test]
    fn broken_matroid_exits_1() {
        let text = r#"{"elements":["a","b"],"rank":1,"cocircuits":["++","+-"]}"#;
        assert_eq!(run_cli(&["validate"], text).0, EXIT_VERIFICATION);
    }

    #[test]
    fn om_subcommands() {
        let text = r#"{"elements":["a","b"],"rank":1,"cocircuits":["++"]}"#;
        let (c, d) = run_cli(&["om", "dual"], text);
        assert_eq!(c, 0);
        let d = OrientedMatroid::from_json_str(&d).unwrap();
        assert_eq!(d.cocircuits().len(), 2);
        assert!(d.cocircuits().iter().any(|x| x.to_string() == "+-"));
        let (c, r) = run_cli(&["om", "restrict", "--elements", "b"], text);
        assert_eq!(c, 0);
        assert_eq!(OrientedMatroid::from_json_str(&r).unwrap().len(), 1);
        let (c, p) = run_cli(&["om", "check"], text);
        assert_eq!(c, 0);
        assert!(p.contains("\"uniform\": true"));
    }

    #[test]
    fn help_is_not_an_error() {
        assert_eq!(run_cli(&["--help"], "").0, EXIT_OK);
    }
}
