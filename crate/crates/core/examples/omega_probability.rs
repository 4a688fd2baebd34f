//! The anchor set of an instance, the exact event probabilities, the size
//! threshold, and a Monte Carlo cross-check.

use omflip::entangle::prob::{all_target_probabilities, min_n_threshold, montecarlo_omega, claimed_lower_bound};
use omflip::entangle::{omega_set, sample_instance};

fn main() {
    for seed in 0..5 {
        let inst = sample_instance(3, seed, 20);
        let omega = omega_set(&inst);
        let full = omega.iter().filter(|c| c.s_sets_nonempty()).count();
        println!("N = 3, seed {seed}: |Omega| = {}, {full} with all S-sets nonempty", omega.len());
    }

    let all = all_target_probabilities();
    let min = all.iter().map(|t| t.probability.clone()).min().unwrap();
    println!("{} targets, minimum probability {min}, bound {}", all.len(), claimed_lower_bound());

    let t = min_n_threshold();
    println!("threshold N = {} (expression {:.6} there, {:.6} below)", t.n, t.value_at_n, t.value_below);

    let mc = montecarlo_omega(20_000, 3, 1);
    println!(
        "Monte Carlo: empirical {:?} vs exact {:?}, z = {:?}, correlation z = {:.2}",
        mc.empirical, mc.exact, mc.z, mc.correlation_z
    );
}
