//! Composition, orthogonality, covector spans and axiom validation.

use omflip::validate::{validate, ValidationMode};
use omflip::{GroundSet, OrientedMatroid, SignVector};

fn main() -> omflip::Result<()> {
    let x = SignVector::parse("+0-")?;
    let y = SignVector::parse("--+")?;
    println!("{x} o {y} = {}", x.compose(&y)?);
    println!("{x} orthogonal to {y}: {}", x.orthogonal(&y)?);

    // two coordinate hyperplanes in the plane
    let m = OrientedMatroid::new(
        GroundSet::new(["a", "b"])?,
        2,
        vec![SignVector::parse("+0")?, SignVector::parse("0+")?],
    )?;
    let span = m.covector_span(1000)?;
    println!("{} cocircuits span {} covectors", m.cocircuits().len(), span.len());

    for mode in [ValidationMode::Full, ValidationMode::CocircuitOnly] {
        let r = validate(&m, mode, true)?;
        println!("{mode:?}: valid = {}", r.is_valid());
    }

    // drop a negation partner and the check reports it
    let broken = OrientedMatroid::new_raw(
        m.ground().clone(),
        2,
        m.cocircuits().iter().filter(|c| c.to_string() != "-0").cloned().collect(),
    );
    let r = validate(&broken, ValidationMode::CocircuitOnly, false)?;
    for f in &r.failures {
        println!("broken: {} with witness {:?}", f.axiom, f.witness);
    }
    Ok(())
}
