//! The eight shifted braid arrangements and their liftings of the braid matroid.

use omflip::entangle::CyclicTriple;
use omflip::flips::lifting_key;
use omflip::realize::{braid_lifting, braid_model, vertex_audit};
use std::collections::BTreeSet;

fn main() -> omflip::Result<()> {
    let mut keys = BTreeSet::new();
    for gamma in CyclicTriple::all() {
        let l = braid_lifting(gamma)?;
        let audit = vertex_audit(&braid_model(gamma));
        println!(
            "{gamma}: {} cocircuits, {} vertices, at most {} planes through a vertex",
            l.matroid().cocircuits().len(),
            audit.vertices.len(),
            audit.max_concurrence
        );
        keys.insert(lifting_key(&l));
    }
    println!("{} distinct liftings", keys.len());
    Ok(())
}
