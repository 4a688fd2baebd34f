//! Sample an instance, build the entangled lifting with every check, and
//! write both files.

use omflip::entangle::build::{build_with_retries, BuildOptions};
use omflip::entangle::sample_instance;

fn main() -> omflip::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1);
    let inst = sample_instance(n, 7, 20);
    let built = build_with_retries(&inst, &BuildOptions::default())?;
    println!("{}", serde_json::to_string_pretty(&built.report)?);
    println!("attempts: {}", built.attempts);
    let dir = std::env::temp_dir();
    std::fs::write(dir.join("instance.json"), built.instance.to_json_string())?;
    std::fs::write(dir.join("lifting.json"), built.lifting.matroid().to_json_string())?;
    println!("wrote instance.json and lifting.json to {}", dir.display());
    Ok(())
}
