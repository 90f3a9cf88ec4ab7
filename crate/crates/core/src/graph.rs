//! Weighted graphs, their shortest-path metric, girth and the treelike
//! additivity property.

use crate::ratio::{parse_ratio, Ratio};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph has no edges")]
    Empty,
    #[error("graph is disconnected: `{0}` is unreachable from `{1}`")]
    Disconnected(String, String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge `{0}`-`{1}`")]
    DuplicateEdge(String, String),
    #[error("edge `{0}`-`{1}` has non-positive length {2}")]
    NonPositiveLength(String, String, Ratio),
    #[error("edge `{u}`-`{v}` has length {length} but the path {} has length {shorter}", .path.join("-"))]
    MetricViolation {
        u: String,
        v: String,
        length: Ratio,
        shorter: Ratio,
        path: Vec<String>,
    },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("`{0}` and `{1}` are not adjacent")]
    NotAdjacent(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub length: Ratio,
}

impl Edge {
    pub fn other(&self, x: Vertex) -> Vertex {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Combinatorial girth: `Finite(k)` for a shortest cycle of `k` edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn at_least(self, k: usize) -> bool {
        match self {
            Girth::Finite(g) => g >= k,
            Girth::Infinite => true,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("infinity"),
        }
    }
}

/// A failure of the treelike identity `d(k,l) = d(k,x) + d(x,y) + d(y,l)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreelikeWitness {
    pub edge: (Vertex, Vertex),
    pub k: Vertex,
    pub l: Vertex,
    pub distance: Ratio,
    pub detour: Ratio,
}

/// A finite, connected, simple graph with positive rational edge lengths.
///
/// Construction computes the all-pairs shortest-path metric and rejects any
/// edge that is longer than an alternate path between its endpoints.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    edges: Vec<Edge>,
    /// Sorted by neighbor index: `(neighbor, edge index)`.
    adjacency: Vec<Vec<(Vertex, usize)>>,
    metric: Vec<Vec<Ratio>>,
}

/// Serializable mirror of a graph: vertex names and `(u, v, length)` edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    #[serde(default)]
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDocument {
    pub u: String,
    pub v: String,
    pub length: String,
}

impl WeightedGraph {
    /// Builds a graph from named edges. Vertices are indexed in order of
    /// first appearance.
    pub fn from_edges<S: AsRef<str>>(edges: &[(S, S, Ratio)]) -> Result<Self, GraphError> {
        Self::build(
            Vec::new(),
            edges
                .iter()
                .map(|(u, v, d)| (u.as_ref(), v.as_ref(), d.clone())),
        )
    }

    /// Integer-labelled convenience constructor; vertex `i` is named `i`.
    pub fn from_indexed(n: usize, edges: &[(usize, usize, Ratio)]) -> Result<Self, GraphError> {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let named: Vec<(String, String, Ratio)> = edges
            .iter()
            .map(|(u, v, d)| (names[*u].clone(), names[*v].clone(), d.clone()))
            .collect();
        Self::build(
            names.clone(),
            named
                .iter()
                .map(|(u, v, d)| (u.as_str(), v.as_str(), d.clone())),
        )
    }

    /// Parses `u v d` lines; `#` starts a comment line.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(GraphError::Parse {
                    line: i + 1,
                    message: format!("expected `u v length`, found `{line}`"),
                });
            }
            let length = parse_ratio(fields[2]).map_err(|e| GraphError::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            edges.push((fields[0].to_string(), fields[1].to_string(), length));
        }
        Self::from_edges(&edges)
    }

    pub fn from_document(doc: &GraphDocument) -> Result<Self, GraphError> {
        let mut edges = Vec::with_capacity(doc.edges.len());
        for (i, e) in doc.edges.iter().enumerate() {
            let length = parse_ratio(&e.length).map_err(|err| GraphError::Parse {
                line: i + 1,
                message: err.to_string(),
            })?;
            edges.push((e.u.as_str(), e.v.as_str(), length));
        }
        Self::build(doc.vertices.clone(), edges.into_iter())
    }

    /// Accepts either the edge-list text format or a JSON [`GraphDocument`]
    /// (including a full report, which embeds one under `graph`).
    pub fn load(text: &str) -> Result<(Self, Option<String>), GraphError> {
        if text.trim_start().starts_with('{') {
            let doc = parse_document(text)?;
            let weight = doc.weight.clone();
            Ok((Self::from_document(&doc)?, weight))
        } else {
            Ok((Self::parse_edge_list(text)?, None))
        }
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            vertices: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDocument {
                    u: self.names[e.u].clone(),
                    v: self.names[e.v].clone(),
                    length: e.length.to_string(),
                })
                .collect(),
            weight: None,
        }
    }

    fn build<'a>(
        declared: Vec<String>,
        edges: impl Iterator<Item = (&'a str, &'a str, Ratio)>,
    ) -> Result<Self, GraphError> {
        let mut names = Vec::new();
        let mut index = HashMap::new();
        let mut intern = |name: &str, names: &mut Vec<String>| -> Vertex {
            *index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                names.len() - 1
            })
        };
        for name in &declared {
            intern(name, &mut names);
        }
        let mut raw = Vec::new();
        for (u, v, length) in edges {
            let (a, b) = (intern(u, &mut names), intern(v, &mut names));
            raw.push((a, b, length));
        }
        let index: HashMap<String, Vertex> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        if raw.is_empty() {
            return Err(GraphError::Empty);
        }

        let n = names.len();
        let mut adjacency: Vec<Vec<(Vertex, usize)>> = vec![Vec::new(); n];
        let mut out_edges = Vec::with_capacity(raw.len());
        for (a, b, length) in raw {
            if a == b {
                return Err(GraphError::SelfLoop(names[a].clone()));
            }
            if !length.is_positive() {
                return Err(GraphError::NonPositiveLength(
                    names[a].clone(),
                    names[b].clone(),
                    length,
                ));
            }
            if adjacency[a].iter().any(|(w, _)| *w == b) {
                return Err(GraphError::DuplicateEdge(
                    names[a].clone(),
                    names[b].clone(),
                ));
            }
            let (u, v) = (a.min(b), a.max(b));
            let id = out_edges.len();
            adjacency[u].push((v, id));
            adjacency[v].push((u, id));
            out_edges.push(Edge { u, v, length });
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let mut g = Self {
            names,
            index,
            edges: out_edges,
            adjacency,
            metric: Vec::new(),
        };
        let mut metric = Vec::with_capacity(n);
        for s in 0..n {
            let (dist, _) = g.dijkstra(s, None);
            if let Some(t) = dist.iter().position(Option::is_none) {
                return Err(GraphError::Disconnected(
                    g.names[t].clone(),
                    g.names[s].clone(),
                ));
            }
            metric.push(dist.into_iter().map(Option::unwrap).collect::<Vec<_>>());
        }
        g.metric = metric;
        for e in &g.edges {
            if g.metric[e.u][e.v] < e.length {
                let (shorter, path) = g.shortest_detour(e.u, e.v);
                return Err(GraphError::MetricViolation {
                    u: g.names[e.u].clone(),
                    v: g.names[e.v].clone(),
                    length: e.length.clone(),
                    shorter,
                    path: path.into_iter().map(|x| g.names[x].clone()).collect(),
                });
            }
        }
        Ok(g)
    }

    /// Single-source shortest paths, optionally ignoring one edge. Ties are
    /// broken toward the smaller predecessor index.
    fn dijkstra(
        &self,
        source: Vertex,
        skip_edge: Option<usize>,
    ) -> (Vec<Option<Ratio>>, Vec<Option<Vertex>>) {
        let n = self.names.len();
        let mut dist: Vec<Option<Ratio>> = vec![None; n];
        let mut pred: Vec<Option<Vertex>> = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[source] = Some(Ratio::zero());
        heap.push(Reverse(HeapEntry(Ratio::zero(), source)));
        while let Some(Reverse(HeapEntry(d, x))) = heap.pop() {
            if done[x] {
                continue;
            }
            done[x] = true;
            for &(y, id) in &self.adjacency[x] {
                if Some(id) == skip_edge || done[y] {
                    continue;
                }
                let cand = &d + &self.edges[id].length;
                let improve = match &dist[y] {
                    None => true,
                    Some(cur) => cand < *cur || (cand == *cur && pred[y].is_some_and(|p| x < p)),
                };
                if improve {
                    dist[y] = Some(cand.clone());
                    pred[y] = Some(x);
                    heap.push(Reverse(HeapEntry(cand, y)));
                }
            }
        }
        (dist, pred)
    }

    /// Shortest `u`-`v` path avoiding the direct edge.
    fn shortest_detour(&self, u: Vertex, v: Vertex) -> (Ratio, Vec<Vertex>) {
        let id = self.edge_index(u, v);
        let (dist, pred) = self.dijkstra(u, id);
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = pred[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        (dist[v].clone().unwrap_or_else(Ratio::zero), path)
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn name(&self, x: Vertex) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Result<Vertex, GraphError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    /// Neighbors of `x` in increasing index order.
    pub fn neighbors(&self, x: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adjacency[x].iter().map(|(y, _)| *y)
    }

    pub fn degree(&self, x: Vertex) -> usize {
        self.adjacency[x].len()
    }

    pub fn incident_edges(&self, x: Vertex) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[x].iter().map(|(_, id)| *id)
    }

    pub fn edge_index(&self, x: Vertex, y: Vertex) -> Option<usize> {
        self.adjacency
            .get(x)?
            .binary_search_by_key(&y, |(w, _)| *w)
            .ok()
            .map(|i| self.adjacency[x][i].1)
    }

    pub fn adjacent(&self, x: Vertex, y: Vertex) -> bool {
        self.edge_index(x, y).is_some()
    }

    /// `N(x)`: the neighbors of `x` together with `x`, sorted.
    pub fn closed_neighborhood(&self, x: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.neighbors(x).collect();
        let pos = out.partition_point(|&y| y < x);
        out.insert(pos, x);
        out
    }

    /// Weighted shortest-path distance.
    pub fn distance(&self, x: Vertex, y: Vertex) -> &Ratio {
        &self.metric[x][y]
    }

    pub fn shortest_distance(&self, x: &str, y: &str) -> Result<Ratio, GraphError> {
        Ok(self.distance(self.vertex(x)?, self.vertex(y)?).clone())
    }

    pub fn is_tree(&self) -> bool {
        self.num_edges() + 1 == self.num_vertices()
    }

    pub fn uniform_length(&self) -> bool {
        self.edges.iter().all(|e| e.length == self.edges[0].length)
    }

    /// Distinct edge lengths, ascending.
    pub fn occurring_lengths(&self) -> Vec<Ratio> {
        let mut lens: Vec<Ratio> = self.edges.iter().map(|e| e.length.clone()).collect();
        lens.sort();
        lens.dedup();
        lens
    }

    /// Combinatorial girth by breadth-first search from every vertex.
    pub fn girth(&self) -> Girth {
        let n = self.num_vertices();
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut depth = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            let mut queue = VecDeque::from([s]);
            depth[s] = 0;
            while let Some(x) = queue.pop_front() {
                for y in self.neighbors(x) {
                    if depth[y] == usize::MAX {
                        depth[y] = depth[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        let cycle = depth[x] + depth[y] + 1;
                        best = Some(best.map_or(cycle, |b| b.min(cycle)));
                    }
                }
            }
        }
        best.map_or(Girth::Infinite, Girth::Finite)
    }

    /// Checks `d(k,l) = d(k,x) + d(x,y) + d(y,l)` for every edge `xy` (in both
    /// orientations), `k ∈ N(x) \ {y}` and `l ∈ N(y) \ {x}`. Returns the first
    /// failure in edge/index order.
    pub fn treelike_witness(&self) -> Option<TreelikeWitness> {
        for e in &self.edges {
            for (x, y) in [(e.u, e.v), (e.v, e.u)] {
                for k in self.closed_neighborhood(x).into_iter().filter(|&k| k != y) {
                    for l in self.closed_neighborhood(y).into_iter().filter(|&l| l != x) {
                        let detour = self.distance(k, x) + &e.length + self.distance(y, l);
                        let distance = self.distance(k, l);
                        if *distance != detour {
                            return Some(TreelikeWitness {
                                edge: (x, y),
                                k,
                                l,
                                distance: distance.clone(),
                                detour,
                            });
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_treelike(&self) -> bool {
        self.treelike_witness().is_none()
    }

    /// Same graph with every length multiplied by `factor`.
    pub fn scaled(&self, factor: &Ratio) -> Self {
        assert!(factor.is_positive());
        let mut g = self.clone();
        for e in &mut g.edges {
            e.length *= factor;
        }
        for row in &mut g.metric {
            for d in row.iter_mut() {
                *d *= factor;
            }
        }
        g
    }
}

fn parse_document(text: &str) -> Result<GraphDocument, GraphError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| GraphError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    // A report embeds its input under `graph`.
    let inner = value.get("graph").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| GraphError::Parse {
        line: 0,
        message: e.to_string(),
    })
}

#[derive(Debug, PartialEq, Eq)]
struct HeapEntry(Ratio, Vertex);

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
