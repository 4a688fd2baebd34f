//! The action of the transposition involutions on cyclic triples.

use omflip::entangle::{group_properties_check, CyclicTriple};

fn main() {
    let g = CyclicTriple::new(1, 2, 3);
    println!("pi_(12)(123) = {}", g.pi(1, 2));
    println!("pi_(34)(123) = {}", g.pi(3, 4));
    let r = group_properties_check();
    println!(
        "{} involutions, {} commuting pairs, flip table ok: {}",
        r.involutions, r.commuting_pairs, r.flip_table_ok
    );
    for (t, l, size, orbit) in &r.h_orbits {
        println!("  orientation {t} (missing {l}): {size} classes, single orbit {orbit}");
    }
    println!("all checks passed: {}", r.ok());
}
