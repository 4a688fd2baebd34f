//! Duals, restrictions and the rank/loop/coloop profile.

use omflip::dual::dual;
use omflip::realize::braid_matroid;
use omflip::{GroundSet, OrientedMatroid, SignVector};

fn main() -> omflip::Result<()> {
    let m = OrientedMatroid::new(GroundSet::new(["a", "b"])?, 1, vec![SignVector::parse("++")?])?;
    let d = dual(&m)?;
    println!("dual of rank-1 (++) has rank {} and cocircuits {:?}", d.rank(), d.cocircuits());
    assert_eq!(dual(&d)?.cocircuits(), m.cocircuits());

    let braid = braid_matroid();
    let p = braid.profile();
    println!(
        "braid matroid: {} elements, rank {}, uniform {}, {} cocircuits",
        braid.len(),
        p.rank,
        p.is_uniform,
        braid.cocircuits().len()
    );
    let bd = dual(&braid)?;
    println!("its dual has rank {} and {} cocircuits", bd.rank(), bd.cocircuits().len());

    let cyclic = braid.restriction_by_tokens(&["(1,2)", "(2,3)", "(1,3)"])?;
    println!("restriction to a cyclic triple: rank {}", cyclic.profile().rank);
    Ok(())
}
