//! Oriented matroids of exact rational configurations, chirotopes, and the
//! weak map from a perturbed configuration to the unperturbed one.

use omflip::entangle::sample_instance;
use omflip::realize::perturb::unperturbed_config;
use omflip::realize::rational::int;
use omflip::realize::{perturbed_config, RationalVectorConfig};
use omflip::GroundSet;

fn main() -> omflip::Result<()> {
    let ground = GroundSet::new(["a", "b", "c", "d"])?;
    let vectors = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 2, 3]]
        .iter()
        .map(|v| v.iter().map(|&c| int(c)).collect())
        .collect();
    let config = RationalVectorConfig::new(ground, vectors)?;
    let chi = config.chirotope_of(3)?;
    let m = config.om_of_config()?;
    println!("4 vectors in 3-space: uniform chirotope {}, {} cocircuits", chi.is_uniform(), m.cocircuits().len());
    for c in m.cocircuits() {
        println!("  {c}");
    }

    let inst = sample_instance(1, 11, 20);
    let tilde = perturbed_config(&inst).om_of_config()?;
    let plain = unperturbed_config(1).om_of_config()?;
    println!(
        "N = 1: perturbed matroid has {} cocircuits (uniform {}), unperturbed {}",
        tilde.cocircuits().len(),
        tilde.profile().is_uniform,
        plain.cocircuits().len()
    );
    println!("weak map perturbed -> unperturbed: {}", tilde.weak_map_leq(&plain)?);
    Ok(())
}
