//! Exhaustive flip graph of a small lifting, logged and resumed.

use omflip::entangle::build::{build_with_retries, BuildOptions};
use omflip::entangle::sample_instance;
use omflip::flips::{flip_graph_bfs, flip_graph_resume, Budget};

fn main() -> omflip::Result<()> {
    let built = build_with_retries(&sample_instance(0, 3, 20), &BuildOptions::default())?;
    let log = std::env::temp_dir().join("flipgraph.jsonl");

    let partial = Budget { max_vertices: 30, ..Budget::default() };
    let g = flip_graph_bfs(&built.lifting, &partial, &mut |_, _| Ok(()), Some(&log))?;
    println!("first run: {:?} after {} vertices", g.status, g.vertex_count());

    let g = flip_graph_resume(&built.lifting, &Budget::default(), &mut |_, _| Ok(()), &log)?;
    println!(
        "resumed: {:?}, {} vertices, {} edges, symmetric {}",
        g.status,
        g.vertex_count(),
        g.undirected_edges().len(),
        g.is_symmetric()
    );
    let depth = g.vertices.iter().map(|v| v.depth).max().unwrap_or(0);
    println!("diameter from the seed: {depth}; log at {}", log.display());
    Ok(())
}
