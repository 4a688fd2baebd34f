//! Breadth-first exploration of the flip graph with JSON-lines persistence.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{apply_flip, find_flip_supports, lifting_key, FlipSupport};
use crate::error::{OmError, Result};
use crate::realize::lifting::LiftingOM;
use crate::validate::{validate, ValidationMode};

#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_vertices: usize,
    /// Vertices at this depth are recorded but not expanded.
    pub max_depth: Option<usize>,
    pub max_seconds: Option<f64>,
    /// Axiom check for every newly discovered vertex.
    pub validation: Option<ValidationMode>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_vertices: 10_000, max_depth: None, max_seconds: None, validation: Some(ValidationMode::CocircuitOnly) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphStatus {
    Complete,
    VertexBudget,
    DepthLimit,
    TimeBudget,
}

/// How a vertex is reached: from the seed, or by a flip of its parent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CocircuitsRef {
    Seed(String),
    Flip { parent: String, support: [String; 4] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub key: String,
    pub depth: usize,
    #[serde(rename = "cocircuits-ref")]
    pub cocircuits_ref: CocircuitsRef,
    /// Filled once the vertex is expanded.
    pub supports: Option<Vec<[String; 4]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub a: String,
    pub b: String,
    pub support: [String; 4],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum Line {
    Seed { key: String },
    Vertex(VertexRecord),
    Edge(EdgeRecord),
}

#[derive(Clone, Debug)]
pub struct FlipGraph {
    pub seed: String,
    /// In discovery order.
    pub vertices: Vec<VertexRecord>,
    /// One record per discovery; an edge between two expanded vertices is
    /// discovered from both ends.
    pub edges: Vec<EdgeRecord>,
    pub status: GraphStatus,
}

impl FlipGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_complete(&self) -> bool {
        self.status == GraphStatus::Complete
    }

    /// Undirected edges as `(min key, max key, support)`.
    pub fn undirected_edges(&self) -> BTreeSet<(String, String, [String; 4])> {
        self.edges
            .iter()
            .map(|e| {
                let (a, b) = if e.a <= e.b { (&e.a, &e.b) } else { (&e.b, &e.a) };
                (a.clone(), b.clone(), e.support.clone())
            })
            .collect()
    }

    /// Every edge between expanded vertices was found from both ends.
    pub fn is_symmetric(&self) -> bool {
        let expanded: BTreeSet<&str> =
            self.vertices.iter().filter(|v| v.supports.is_some()).map(|v| v.key.as_str()).collect();
        let directed: BTreeSet<(&str, &str, &[String; 4])> =
            self.edges.iter().map(|e| (e.a.as_str(), e.b.as_str(), &e.support)).collect();
        self.edges.iter().all(|e| {
            !(expanded.contains(e.a.as_str()) && expanded.contains(e.b.as_str()))
                || directed.contains(&(e.b.as_str(), e.a.as_str(), &e.support))
        })
    }

    pub fn write_jsonl(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "{}", serde_json::to_string(&Line::Seed { key: self.seed.clone() })?)?;
        for v in &self.vertices {
            writeln!(w, "{}", serde_json::to_string(&Line::Vertex(v.clone()))?)?;
        }
        for e in &self.edges {
            writeln!(w, "{}", serde_json::to_string(&Line::Edge(e.clone()))?)?;
        }
        w.flush()?;
        Ok(())
    }
}

struct Log {
    out: Option<BufWriter<File>>,
}

impl Log {
    fn line(&mut self, l: &Line) -> Result<()> {
        if let Some(w) = &mut self.out {
            writeln!(w, "{}", serde_json::to_string(l)?)?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        if let Some(w) = &mut self.out {
            w.flush()?;
        }
        Ok(())
    }
}

struct State {
    vertices: Vec<VertexRecord>,
    position: HashMap<String, usize>,
    edges: Vec<EdgeRecord>,
    edge_set: BTreeSet<EdgeRecord>,
    queue: VecDeque<(usize, LiftingOM)>,
}

/// Breadth-first search from `seed`. `visit` sees every discovered vertex
/// once, the seed first. With `log`, records are appended as the search
/// proceeds so that [`flip_graph_resume`] can continue an interrupted run.
pub fn flip_graph_bfs(
    seed: &LiftingOM,
    budget: &Budget,
    visit: &mut dyn FnMut(&LiftingOM, &VertexRecord) -> Result<()>,
    log: Option<&Path>,
) -> Result<FlipGraph> {
    let key = lifting_key(seed);
    let mut log = Log { out: log.map(File::create).transpose()?.map(BufWriter::new) };
    log.line(&Line::Seed { key: key.clone() })?;
    let root = VertexRecord { key: key.clone(), depth: 0, cocircuits_ref: CocircuitsRef::Seed(key.clone()), supports: None };
    visit(seed, &root)?;
    let mut st = State {
        vertices: vec![root],
        position: HashMap::from([(key.clone(), 0)]),
        edges: Vec::new(),
        edge_set: BTreeSet::new(),
        queue: VecDeque::from([(0, seed.clone())]),
    };
    run(&key, &mut st, budget, visit, &mut log)
}

/// Continues a search logged by [`flip_graph_bfs`]: vertices discovered but
/// not expanded are rebuilt by replaying flips from the seed.
pub fn flip_graph_resume(
    seed: &LiftingOM,
    budget: &Budget,
    visit: &mut dyn FnMut(&LiftingOM, &VertexRecord) -> Result<()>,
    log: &Path,
) -> Result<FlipGraph> {
    let key = lifting_key(seed);
    let mut expanded: HashMap<String, VertexRecord> = HashMap::new();
    let mut edges: Vec<EdgeRecord> = Vec::new();
    for line in BufReader::new(File::open(log)?).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        // a torn last line from an interrupted run is dropped
        let Ok(parsed) = serde_json::from_str::<Line>(&line) else { break };
        match parsed {
            Line::Seed { key: k } if k != key => {
                return Err(OmError::Precondition("log belongs to a different seed".into()));
            }
            Line::Seed { .. } => {}
            Line::Vertex(v) => {
                expanded.insert(v.key.clone(), v);
            }
            Line::Edge(e) => edges.push(e),
        }
    }
    // rediscover in log order so parents precede children
    let mut st = State {
        vertices: Vec::new(),
        position: HashMap::new(),
        edges: Vec::new(),
        edge_set: BTreeSet::new(),
        queue: VecDeque::new(),
    };
    let root = VertexRecord { key: key.clone(), depth: 0, cocircuits_ref: CocircuitsRef::Seed(key.clone()), supports: None };
    st.position.insert(key.clone(), 0);
    st.vertices.push(root);
    for e in edges {
        if !expanded.contains_key(&e.a) || !st.position.contains_key(&e.a) {
            continue;
        }
        if !st.position.contains_key(&e.b) {
            let depth = st.vertices[st.position[&e.a]].depth + 1;
            st.position.insert(e.b.clone(), st.vertices.len());
            st.vertices.push(VertexRecord {
                key: e.b.clone(),
                depth,
                cocircuits_ref: CocircuitsRef::Flip { parent: e.a.clone(), support: e.support.clone() },
                supports: None,
            });
        }
        if st.edge_set.insert(e.clone()) {
            st.edges.push(e);
        }
    }
    for v in st.vertices.iter_mut() {
        if let Some(done) = expanded.get(&v.key) {
            v.supports = done.supports.clone();
        }
    }
    // rebuild matroids along parent chains, then queue the unexpanded ones
    let mut built: HashMap<String, LiftingOM> = HashMap::from([(key.clone(), seed.clone())]);
    for i in 0..st.vertices.len() {
        let v = st.vertices[i].clone();
        if let CocircuitsRef::Flip { parent, support } = &v.cocircuits_ref {
            let p = built.get(parent).ok_or_else(|| OmError::Parse(format!("parent {parent} missing")))?;
            let l = apply_flip(p, FlipSupport::from_tokens(p, support)?)?;
            if lifting_key(&l) != v.key {
                return Err(OmError::Verification(format!("replayed flip does not reproduce {}", v.key)));
            }
            built.insert(v.key.clone(), l);
        }
        if v.supports.is_none() {
            st.queue.push_back((i, built[&v.key].clone()));
        }
    }
    let mut log = Log { out: Some(BufWriter::new(OpenOptions::new().append(true).open(log)?)) };
    run(&key, &mut st, budget, visit, &mut log)
}

fn run(
    seed_key: &str,
    st: &mut State,
    budget: &Budget,
    visit: &mut dyn FnMut(&LiftingOM, &VertexRecord) -> Result<()>,
    log: &mut Log,
) -> Result<FlipGraph> {
    let start = Instant::now();
    let mut status = GraphStatus::Complete;
    while let Some((i, l)) = st.queue.pop_front() {
        if budget.max_depth.is_some_and(|d| st.vertices[i].depth >= d) {
            status = GraphStatus::DepthLimit;
            continue;
        }
        if budget.max_seconds.is_some_and(|s| start.elapsed().as_secs_f64() > s) {
            st.queue.push_front((i, l));
            status = GraphStatus::TimeBudget;
            break;
        }
        let witnesses = find_flip_supports(&l)?;
        let mut new_vertices = Vec::new();
        let mut stopped = false;
        for w in &witnesses {
            let neighbor = apply_flip(&l, w.support)?;
            let nk = lifting_key(&neighbor);
            let edge = EdgeRecord { a: st.vertices[i].key.clone(), b: nk.clone(), support: w.support.tokens(&l) };
            if !st.position.contains_key(&nk) {
                if st.vertices.len() >= budget.max_vertices {
                    stopped = true;
                    continue;
                }
                if let Some(mode) = budget.validation {
                    validate(neighbor.matroid(), mode, true)?.into_result()?;
                }
                let rec = VertexRecord {
                    key: nk.clone(),
                    depth: st.vertices[i].depth + 1,
                    cocircuits_ref: CocircuitsRef::Flip { parent: edge.a.clone(), support: edge.support.clone() },
                    supports: None,
                };
                visit(&neighbor, &rec)?;
                st.position.insert(nk.clone(), st.vertices.len());
                st.vertices.push(rec);
                new_vertices.push((st.vertices.len() - 1, neighbor));
            }
            log.line(&Line::Edge(edge.clone()))?;
            if st.edge_set.insert(edge.clone()) {
                st.edges.push(edge);
            }
        }
        if stopped {
            // a partially expanded vertex stays unexpanded so a resume redoes it
            log.flush()?;
            status = GraphStatus::VertexBudget;
            break;
        }
        st.vertices[i].supports = Some(witnesses.iter().map(|w| w.support.tokens(&l)).collect());
        log.line(&Line::Vertex(st.vertices[i].clone()))?;
        log.flush()?;
        st.queue.extend(new_vertices);
    }
    if status == GraphStatus::Complete && st.vertices.iter().any(|v| v.supports.is_none()) {
        status = GraphStatus::DepthLimit;
    }
    Ok(FlipGraph { seed: seed_key.to_string(), vertices: st.vertices.clone(), edges: st.edges.clone(), status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::build::{build_with_retries, BuildOptions};
    use crate::entangle::sample_instance;

    fn seed(s: u64) -> LiftingOM {
        build_with_retries(&sample_instance(0, s, 20), &BuildOptions::default()).unwrap().lifting
    }

    fn keys(g: &FlipGraph) -> BTreeSet<String> {
        g.vertices.iter().map(|v| v.key.clone()).collect()
    }

    #[test]
    fn full_search_is_symmetric_and_stable() {
        let l = seed(3);
        let mut seen = 0;
        let g = flip_graph_bfs(&l, &Budget::default(), &mut |_, _| {
            seen += 1;
            Ok(())
        }, None)
        .unwrap();
        assert!(g.is_complete());
        assert!(g.is_symmetric());
        assert_eq!(seen, g.vertex_count());
        let again = flip_graph_bfs(&l, &Budget::default(), &mut |_, _| Ok(()), None).unwrap();
        assert_eq!(keys(&g), keys(&again));
        assert_eq!(g.undirected_edges(), again.undirected_edges());
    }

    #[test]
    fn depth_limit_stops_expansion() {
        let l = seed(3);
        let budget = Budget { max_depth: Some(1), ..Budget::default() };
        let g = flip_graph_bfs(&l, &budget, &mut |_, _| Ok(()), None).unwrap();
        assert_eq!(g.status, GraphStatus::DepthLimit);
        let n = find_flip_supports(&l).unwrap().len();
        assert_eq!(g.vertex_count(), n + 1);
        assert!(g.vertices.iter().skip(1).all(|v| v.depth == 1 && v.supports.is_none()));
    }

    #[test]
    fn resume_reaches_the_full_graph() {
        let l = seed(5);
        let dir = tempfile::tempdir().unwrap();
        let log = dir.path().join("graph.jsonl");
        let partial = Budget { max_vertices: 20, ..Budget::default() };
        let g = flip_graph_bfs(&l, &partial, &mut |_, _| Ok(()), Some(&log)).unwrap();
        assert_eq!(g.status, GraphStatus::VertexBudget);
        let resumed = flip_graph_resume(&l, &Budget::default(), &mut |_, _| Ok(()), &log).unwrap();
        let full = flip_graph_bfs(&l, &Budget::default(), &mut |_, _| Ok(()), None).unwrap();
        assert!(resumed.is_complete());
        assert_eq!(keys(&resumed), keys(&full));
        assert_eq!(resumed.undirected_edges(), full.undirected_edges());

        let out = dir.path().join("full.jsonl");
        full.write_jsonl(&out).unwrap();
        let again = flip_graph_resume(&l, &Budget::default(), &mut |_, _| Ok(()), &out).unwrap();
        assert_eq!(keys(&again), keys(&full));
    }

    #[test]
    fn foreign_log_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let log = dir.path().join("g.jsonl");
        let budget = Budget { max_vertices: 2, ..Budget::default() };
        flip_graph_bfs(&seed(1), &budget, &mut |_, _| Ok(()), Some(&log)).unwrap();
        assert!(flip_graph_resume(&seed(2), &budget, &mut |_, _| Ok(()), &log).is_err());
    }
}
