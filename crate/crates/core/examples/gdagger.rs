//! Membership of the entangled lifting, closure to depth one, and a search
//! for a lifting outside the component.

use omflip::entangle::build::{build_with_retries, BuildOptions};
use omflip::entangle::{omega_set, sample_instance};
use omflip::harness::{find_non_member, flip_closure_experiment, gdagger_check};

fn main() -> omflip::Result<()> {
    let inst = (0..).map(|s| sample_instance(2, s, 20)).find(|i| !omega_set(i).is_empty()).unwrap();
    println!("N = 2, seed {}: |Omega| = {}", inst.seed, omega_set(&inst).len());
    let built = build_with_retries(&inst, &BuildOptions::minimal())?;

    let r = gdagger_check(&built.lifting, &built.instance)?;
    println!("{:?}", r.summary());

    let c = flip_closure_experiment(&built, 1, 100_000)?;
    println!(
        "{} neighbours, all members {}, closure verified {:?}, {} blocked sets, {} violations",
        c.seed_flips,
        c.all_members,
        c.closure_verified,
        c.blocked_sets,
        c.blocking_violations.len()
    );

    let nm = find_non_member(&built.instance, 0..50)?;
    match (&nm.found_seed, &nm.failure) {
        (Some(s), Some(f)) => println!("g seed {s} gives a non-member: {f}"),
        _ => println!("no non-member among {} rebuilds", nm.tried),
    }
    Ok(())
}
