//! Level graphs: validation, properization, critical pairs and limits.
//!
//! Vertices and edges are addressed by dense indices internally. Vertex
//! names ([`VertexId`]) are only used at the boundaries and for the
//! deterministic "ascending id" tie-breaks used throughout the crate.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::GraphFile;

/// Name of a vertex. Ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(name: impl Into<String>) -> Self {
        VertexId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::borrow::Borrow<str> for VertexId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_owned())
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(s)
    }
}

/// A single broken invariant of a level graph description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoLevels,
    DuplicateVertex(String),
    LevelOutOfRange { vertex: String, level: i64, k: usize },
    UnknownVertex { vertex: String },
    SelfLoop(String),
    EdgeNotUpward { tail: String, head: String },
    DuplicateEdge { tail: String, head: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoLevels => write!(f, "graph must have at least one level"),
            Violation::DuplicateVertex(v) => write!(f, "duplicate vertex: {v}"),
            Violation::LevelOutOfRange { vertex, level, k } => {
                write!(f, "level out of range: {vertex} on level {level}, expected 1..={k}")
            }
            Violation::UnknownVertex { vertex } => write!(f, "edge references unknown vertex: {vertex}"),
            Violation::SelfLoop(v) => write!(f, "self-loop at {v}"),
            Violation::EdgeNotUpward { tail, head } => write!(f, "edge not upward: {tail} -> {head}"),
            Violation::DuplicateEdge { tail, head } => write!(f, "duplicate edge: {tail} -> {head}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid level graph: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("graph is not proper: edge {tail} -> {head} spans more than one level")]
    NotProper { tail: String, head: String },
    #[error("edges {0} and {1} are not a critical pair")]
    NotCritical(String, String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Checks a raw graph description and returns every violation found.
pub fn validate(file: &GraphFile) -> Vec<Violation> {
    let mut out = Vec::new();
    if file.levels == 0 {
        out.push(Violation::NoLevels);
    }
    let mut levels: HashMap<&str, i64> = HashMap::new();
    for v in &file.vertices {
        if levels.insert(v.id.as_str(), v.level).is_some() {
            out.push(Violation::DuplicateVertex(v.id.clone()));
        }
        if v.level < 1 || v.level > file.levels as i64 {
            out.push(Violation::LevelOutOfRange { vertex: v.id.clone(), level: v.level, k: file.levels });
        }
    }
    let mut seen = HashSet::new();
    for [tail, head] in &file.edges {
        let (Some(&lt), Some(&lh)) = (levels.get(tail.as_str()), levels.get(head.as_str())) else {
            for name in [tail, head] {
                if !levels.contains_key(name.as_str()) {
                    out.push(Violation::UnknownVertex { vertex: name.clone() });
                }
            }
            continue;
        };
        if tail == head {
            out.push(Violation::SelfLoop(tail.clone()));
        } else if lt >= lh {
            out.push(Violation::EdgeNotUpward { tail: tail.clone(), head: head.clone() });
        }
        if !seen.insert((tail.as_str(), head.as_str())) {
            out.push(Violation::DuplicateEdge { tail: tail.clone(), head: head.clone() });
        }
    }
    out
}

/// A leveled DAG: every edge goes from a lower to a strictly higher level.
///
/// Levels are 1-based. Empty levels are allowed.
#[derive(Clone, Debug)]
pub struct LevelGraph {
    k: usize,
    names: Vec<VertexId>,
    level: Vec<usize>,
    edges: Vec<(usize, usize)>,
    lookup: HashMap<VertexId, usize>,
    edge_lookup: HashMap<(usize, usize), usize>,
    by_level: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl PartialEq for LevelGraph {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.names == other.names && self.level == other.level && self.edges == other.edges
    }
}

impl Eq for LevelGraph {}

impl LevelGraph {
    /// Builds a validated level graph from named vertices and edges.
    pub fn new<V, E>(k: usize, vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = (VertexId, usize)>,
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let file = GraphFile {
            levels: k,
            vertices: vertices
                .into_iter()
                .map(|(id, level)| crate::io::VertexEntry { id: id.0, level: level as i64 })
                .collect(),
            edges: edges.into_iter().map(|(a, b)| [a.0, b.0]).collect(),
        };
        Self::from_file(&file)
    }

    pub fn from_file(file: &GraphFile) -> Result<Self, GraphError> {
        let violations = validate(file);
        if !violations.is_empty() {
            return Err(GraphError::Invalid(violations));
        }
        let names: Vec<VertexId> = file.vertices.iter().map(|v| VertexId(v.id.clone())).collect();
        let level: Vec<usize> = file.vertices.iter().map(|v| v.level as usize).collect();
        let lookup: HashMap<VertexId, usize> = names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        let edges = file.edges.iter().map(|[a, b]| (lookup[a.as_str()], lookup[b.as_str()])).collect();
        Ok(Self::from_parts(file.levels, names, level, edges))
    }

    /// Assembles a graph from index data that is already known to be valid.
    pub(crate) fn from_parts(k: usize, names: Vec<VertexId>, level: Vec<usize>, edges: Vec<(usize, usize)>) -> Self {
        let n = names.len();
        let lookup: HashMap<VertexId, usize> = names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        debug_assert_eq!(lookup.len(), n, "vertex names must be unique");
        let mut by_level = vec![Vec::new(); k];
        for v in 0..n {
            debug_assert!(level[v] >= 1 && level[v] <= k);
            by_level[level[v] - 1].push(v);
        }
        for lv in &mut by_level {
            lv.sort_by(|&a, &b| names[a].cmp(&names[b]));
        }
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        let mut edge_lookup = HashMap::with_capacity(edges.len());
        for (i, &(a, b)) in edges.iter().enumerate() {
            debug_assert!(level[a] < level[b]);
            out_edges[a].push(i);
            in_edges[b].push(i);
            edge_lookup.insert((a, b), i);
        }
        LevelGraph { k, names, level, edges, lookup, edge_lookup, by_level, out_edges, in_edges }
    }

    pub fn num_levels(&self) -> usize {
        self.k
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: usize) -> &VertexId {
        &self.names[v]
    }

    pub fn names(&self) -> &[VertexId] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }

    /// Level of `v`, 1-based.
    pub fn level(&self, v: usize) -> usize {
        self.level[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edge_index(&self, tail: usize, head: usize) -> Option<usize> {
        self.edge_lookup.get(&(tail, head)).copied()
    }

    /// Vertices on level `i` (1-based) in ascending id order.
    pub fn level_vertices(&self, i: usize) -> &[usize] {
        &self.by_level[i - 1]
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    /// Edges whose tail lies on level `i`.
    pub fn gap_edges(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.by_level[i - 1].iter().flat_map(move |&v| self.out_edges[v].iter().copied())
    }

    pub fn is_proper(&self) -> bool {
        self.edges.iter().all(|&(a, b)| self.level[b] == self.level[a] + 1)
    }

    /// True when the two edges share no endpoint.
    pub fn independent(&self, e: usize, f: usize) -> bool {
        let (a, b) = self.edges[e];
        let (c, d) = self.edges[f];
        a != c && a != d && b != c && b != d
    }

    pub fn edge_label(&self, e: usize) -> String {
        let (a, b) = self.edges[e];
        format!("{}->{}", self.names[a], self.names[b])
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            levels: self.k,
            vertices: (0..self.num_vertices())
                .map(|v| crate::io::VertexEntry { id: self.names[v].0.clone(), level: self.level[v] as i64 })
                .collect(),
            edges: self.edges.iter().map(|&(a, b)| [self.names[a].0.clone(), self.names[b].0.clone()]).collect(),
        }
    }

    /// A copy of this graph with extra edges appended.
    pub fn with_edges(&self, extra: &[(usize, usize)]) -> LevelGraph {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(extra);
        LevelGraph::from_parts(self.k, self.names.clone(), self.level.clone(), edges)
    }
}

/// A level graph in which every edge joins consecutive levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperLevelGraph(LevelGraph);

impl ProperLevelGraph {
    pub fn new(g: LevelGraph) -> Result<Self, GraphError> {
        if let Some(&(a, b)) = g.edges.iter().find(|&&(a, b)| g.level[b] != g.level[a] + 1) {
            return Err(GraphError::NotProper { tail: g.names[a].0.clone(), head: g.names[b].0.clone() });
        }
        Ok(ProperLevelGraph(g))
    }

    pub fn into_inner(self) -> LevelGraph {
        self.0
    }
}

impl Deref for ProperLevelGraph {
    type Target = LevelGraph;

    fn deref(&self) -> &LevelGraph {
        &self.0
    }
}

/// Result of subdividing long edges.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub graph: ProperLevelGraph,
    /// New vertex name to the edge it subdivides.
    pub origin: BTreeMap<VertexId, (VertexId, VertexId)>,
    /// For every input edge, its vertex path in the output.
    pub paths: Vec<Vec<usize>>,
    /// For every output edge, the input edge it belongs to.
    pub edge_owner: Vec<usize>,
    /// For every output vertex, the input edge it subdivides, if any.
    pub subdivides: Vec<Option<usize>>,
}

impl Subdivision {
    /// Vertex of the path of input edge `e` on level `level`, if the edge spans it.
    pub fn path_vertex(&self, e: usize, level: usize) -> Option<usize> {
        let path = &self.paths[e];
        let start = self.graph.level(path[0]);
        level.checked_sub(start).and_then(|off| path.get(off).copied())
    }
}

/// Replaces every edge spanning `d > 1` levels by a path through `d - 1`
/// fresh vertices named `<tail>~<head>~<level>`.
///
/// Original vertices keep their indices; new vertices are appended in edge
/// order. A proper input is returned unchanged.
pub fn properize(g: &LevelGraph) -> Subdivision {
    let mut names = g.names.clone();
    let mut level = g.level.clone();
    let mut taken: HashSet<VertexId> = names.iter().cloned().collect();
    let mut origin = BTreeMap::new();
    let mut edges = Vec::with_capacity(g.edges.len());
    let mut edge_owner = Vec::with_capacity(g.edges.len());
    let mut subdivides = vec![None; g.num_vertices()];
    let mut paths = Vec::with_capacity(g.edges.len());
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        let mut path = vec![a];
        for l in g.level[a] + 1..g.level[b] {
            let mut name = VertexId(format!("{}~{}~{}", g.names[a], g.names[b], l));
            while taken.contains(&name) {
                name.0.push('\'');
            }
            taken.insert(name.clone());
            origin.insert(name.clone(), (g.names[a].clone(), g.names[b].clone()));
            names.push(name);
            level.push(l);
            subdivides.push(Some(e));
            path.push(names.len() - 1);
        }
        path.push(b);
        for w in path.windows(2) {
            edges.push((w[0], w[1]));
            edge_owner.push(e);
        }
        paths.push(path);
    }
    let graph = ProperLevelGraph(LevelGraph::from_parts(g.k, names, level, edges));
    Subdivision { graph, origin, paths, edge_owner, subdivides }
}

/// Two independent edges whose level spans overlap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CriticalPair {
    pub e: usize,
    pub f: usize,
}

pub fn is_critical(g: &LevelGraph, e: usize, f: usize) -> bool {
    if e == f || !g.independent(e, f) {
        return false;
    }
    let (u, v) = g.edges[e];
    let (w, x) = g.edges[f];
    g.level[u] <= g.level[x] && g.level[v] >= g.level[w]
}

/// All critical pairs, each unordered pair once with `e < f`.
pub fn critical_pairs(g: &LevelGraph) -> Vec<CriticalPair> {
    let m = g.num_edges();
    let mut out = Vec::new();
    for e in 0..m {
        for f in e + 1..m {
            if is_critical(g, e, f) {
                out.push(CriticalPair { e, f });
            }
        }
    }
    out
}

/// Limits of a critical pair: the vertices of both subdivision paths on the
/// lowest and highest level the two edges share.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub u_prime: usize,
    pub v_prime: usize,
    pub w_prime: usize,
    pub x_prime: usize,
}

/// Limits of `pair` (critical in the graph `sub` was built from) in its subdivision.
pub fn limits(g: &LevelGraph, pair: CriticalPair, sub: &Subdivision) -> Result<Limits, GraphError> {
    if !is_critical(g, pair.e, pair.f) {
        return Err(GraphError::NotCritical(g.edge_label(pair.e), g.edge_label(pair.f)));
    }
    let (u, v) = g.edges[pair.e];
    let (w, x) = g.edges[pair.f];
    let low = g.level[u].max(g.level[w]);
    let high = g.level[v].min(g.level[x]);
    let at = |e: usize, l: usize| sub.path_vertex(e, l).expect("critical pair spans its window");
    Ok(Limits {
        u_prime: at(pair.e, low),
        v_prime: at(pair.e, high),
        w_prime: at(pair.f, low),
        x_prime: at(pair.f, high),
    })
}
