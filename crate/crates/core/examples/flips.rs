//! Flip supports of a lifting, one flip with its midpoint, and the weak maps.

use omflip::entangle::build::{build_with_retries, BuildOptions};
use omflip::entangle::sample_instance;
use omflip::flips::{apply_flip, find_flip_supports, flip_midpoint, lifting_key};

fn main() -> omflip::Result<()> {
    let built = build_with_retries(&sample_instance(1, 3, 20), &BuildOptions::minimal())?;
    let l = &built.lifting;
    let supports = find_flip_supports(l)?;
    println!("{} cocircuits, {} flip supports", l.matroid().cocircuits().len(), supports.len());

    let w = &supports[0];
    println!("support {:?}", w.support.tokens(l));
    let flipped = apply_flip(l, w.support)?;
    let mid = flip_midpoint(l, w.support)?;
    println!("midpoint: {} cocircuits, uniform {}", mid.cocircuits().len(), mid.profile().is_uniform);
    println!(
        "weak maps to the midpoint: {} {}",
        l.matroid().weak_map_leq(&mid)?,
        flipped.matroid().weak_map_leq(&mid)?
    );
    let back = apply_flip(&flipped, w.support)?;
    println!("flipping back restores the lifting: {}", lifting_key(&back) == lifting_key(l));
    Ok(())
}
