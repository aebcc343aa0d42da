//! Oriented graphs with a normal/special partition on vertices and edges.
//!
//! A [`SpecialGraph`] carries undirected normal edges and directed special
//! edges. Well-formedness is checked verdict-style by
//! [`SpecialGraph::validate`]: a special vertex must be the target of at
//! least one special edge, a special edge must point at a special vertex,
//! no two special vertices may be adjacent (so every clique of the
//! underlying undirected graph contains at most one special vertex), and
//! loops are forbidden.
//!
//! Forgetting orientations and the partition yields the [`NaiveGraph`],
//! which is where chordality, maximal cliques, and clique trees live.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util;

/// Rule name reported when a special vertex has no incoming special edge.
pub const RULE_SPECIAL_VERTEX: &str = "special-vertex-without-incoming-special-edge";
/// Rule name reported when a special edge points at a normal vertex.
pub const RULE_SPECIAL_EDGE: &str = "special-edge-with-normal-target";
/// Rule name reported when two special vertices are adjacent.
pub const RULE_CLIQUE: &str = "two-special-vertices-in-a-clique";
/// Rule name reported for an edge from a vertex to itself.
pub const RULE_LOOP: &str = "loop-edge";

/// Vertex entry in the JSON wire format.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub id: String,
    #[serde(default)]
    pub special: bool,
}

/// Edge entry in the JSON wire format.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub special: bool,
}

/// Wire format for a special graph:
/// `{"vertices":[{"id","special"}],"edges":[{"from","to","special"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecialGraphSpec {
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<EdgeSpec>,
}

/// One violated well-formedness rule together with the offending piece.
#[derive(Debug, Clone, Serialize)]
pub struct RuleViolation {
    pub rule: &'static str,
    pub witness: String,
}

/// Outcome of [`SpecialGraph::validate`]; empty means well-formed.
#[derive(Debug, Clone, Serialize)]
pub struct Validation {
    pub violations: Vec<RuleViolation>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// The first violated rule, if any.
    pub fn first(&self) -> Option<&RuleViolation> {
        self.violations.first()
    }
}

impl fmt::Display for Validation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        write!(f, "invalid:")?;
        for v in &self.violations {
            write!(f, " {} ({});", v.rule, v.witness)?;
        }
        Ok(())
    }
}

/// How two vertices of a special graph are joined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjacency {
    None,
    Normal,
    /// A special edge; `origin` is the normal end, `target` the special end.
    Special { origin: usize, target: usize },
}

/// A finite graph whose vertices and edges are split into normal and
/// special parts: normal edges are undirected, special edges directed.
#[derive(Debug, Clone)]
pub struct SpecialGraph {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    special: Vec<bool>,
    /// Undirected normal edges, stored with the smaller index first.
    normal_edges: BTreeSet<(usize, usize)>,
    /// Directed special edges as (origin, target).
    special_edges: BTreeSet<(usize, usize)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum DeclaredKind {
    Normal,
    Special,
}

impl SpecialGraph {
    /// Builds a graph from named vertices (with their special flags) and
    /// edges `(from, to, special)`. Normal edges are symmetrized: declaring
    /// one orientation or both yields the same single undirected edge.
    ///
    /// Construction only rejects what cannot be represented (duplicate
    /// ids, unknown endpoints, a pair declared both normal and special);
    /// semantic rules are the job of [`validate`](Self::validate), so that
    /// ill-formed graphs can still be built and diagnosed.
    pub fn new(vertices: &[(&str, bool)], edges: &[(&str, &str, bool)]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyInput("vertices"));
        }
        let mut names = Vec::with_capacity(vertices.len());
        let mut index = BTreeMap::new();
        let mut special = Vec::with_capacity(vertices.len());
        for &(name, flag) in vertices {
            if name.is_empty() {
                return Err(Error::InvalidGraph("empty vertex id".into()));
            }
            if index.insert(name.to_string(), names.len()).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex id '{name}'")));
            }
            names.push(name.to_string());
            special.push(flag);
        }

        let resolve = |name: &str| -> Result<usize> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(name.to_string()))
        };

        let mut declared: BTreeMap<(usize, usize), DeclaredKind> = BTreeMap::new();
        let mut record = |pair: (usize, usize), kind: DeclaredKind| -> Result<()> {
            if let Some(&prev) = declared.get(&pair) {
                if prev != kind {
                    return Err(Error::InvalidGraph(format!(
                        "edge between '{}' and '{}' declared both normal and special",
                        names[pair.0], names[pair.1]
                    )));
                }
            } else {
                declared.insert(pair, kind);
            }
            Ok(())
        };

        let mut normal_edges = BTreeSet::new();
        let mut special_edges = BTreeSet::new();
        for &(from, to, is_special) in edges {
            let u = resolve(from)?;
            let v = resolve(to)?;
            if is_special {
                record((u, v), DeclaredKind::Special)?;
                special_edges.insert((u, v));
            } else {
                record((u, v), DeclaredKind::Normal)?;
                record((v, u), DeclaredKind::Normal)?;
                normal_edges.insert((u.min(v), u.max(v)));
            }
        }

        Ok(SpecialGraph {
            names,
            index,
            special,
            normal_edges,
            special_edges,
        })
    }

    pub fn from_spec(spec: &SpecialGraphSpec) -> Result<Self> {
        let vertices: Vec<(&str, bool)> = spec
            .vertices
            .iter()
            .map(|v| (v.id.as_str(), v.special))
            .collect();
        let edges: Vec<(&str, &str, bool)> = spec
            .edges
            .iter()
            .map(|e| (e.from.as_str(), e.to.as_str(), e.special))
            .collect();
        Self::new(&vertices, &edges)
    }

    pub fn to_spec(&self) -> SpecialGraphSpec {
        let vertices = self
            .names
            .iter()
            .enumerate()
            .map(|(i, id)| VertexSpec {
                id: id.clone(),
                special: self.special[i],
            })
            .collect();
        let mut edges: Vec<EdgeSpec> = self
            .normal_edges
            .iter()
            .map(|&(u, v)| EdgeSpec {
                from: self.names[u].clone(),
                to: self.names[v].clone(),
                special: false,
            })
            .collect();
        edges.extend(self.special_edges.iter().map(|&(o, t)| EdgeSpec {
            from: self.names[o].clone(),
            to: self.names[t].clone(),
            special: true,
        }));
        SpecialGraphSpec { vertices, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn is_special(&self, v: usize) -> bool {
        self.special[v]
    }

    pub fn special_vertices(&self) -> Vec<usize> {
        (0..self.names.len()).filter(|&v| self.special[v]).collect()
    }

    pub fn normal_vertices(&self) -> Vec<usize> {
        (0..self.names.len()).filter(|&v| !self.special[v]).collect()
    }

    /// Undirected normal edges with the smaller index first.
    pub fn normal_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.normal_edges
    }

    /// Directed special edges as (origin, target).
    pub fn special_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.special_edges
    }

    /// The kind of edge joining `u` and `v`, if any.
    pub fn adjacency_between(&self, u: usize, v: usize) -> Adjacency {
        if u == v {
            return Adjacency::None;
        }
        if self.normal_edges.contains(&(u.min(v), u.max(v))) {
            return Adjacency::Normal;
        }
        if self.special_edges.contains(&(u, v)) {
            return Adjacency::Special {
                origin: u,
                target: v,
            };
        }
        if self.special_edges.contains(&(v, u)) {
            return Adjacency::Special {
                origin: v,
                target: u,
            };
        }
        Adjacency::None
    }

    /// Checks all well-formedness rules and reports every violation, in
    /// rule order, each with a witness. An empty report means the graph
    /// is a valid special graph.
    pub fn validate(&self) -> Validation {
        let n = self.names.len();
        let mut violations = Vec::new();

        let mut has_incoming = vec![false; n];
        for &(_, t) in &self.special_edges {
            has_incoming[t] = true;
        }
        for v in 0..n {
            if self.special[v] && !has_incoming[v] {
                violations.push(RuleViolation {
                    rule: RULE_SPECIAL_VERTEX,
                    witness: self.names[v].clone(),
                });
            }
        }

        for &(o, t) in &self.special_edges {
            if !self.special[t] {
                violations.push(RuleViolation {
                    rule: RULE_SPECIAL_EDGE,
                    witness: format!("{} -> {}", self.names[o], self.names[t]),
                });
            }
        }

        // A pair of adjacent special vertices is itself a clique, and any
        // clique holding two special vertices contains such a pair, so
        // checking edges decides the at-most-one-special-per-clique rule.
        let mut pairs: BTreeSet<(usize, usize)> = self.normal_edges.clone();
        for &(o, t) in &self.special_edges {
            if o != t {
                pairs.insert((o.min(t), o.max(t)));
            }
        }
        for &(u, v) in &pairs {
            if u != v && self.special[u] && self.special[v] {
                violations.push(RuleViolation {
                    rule: RULE_CLIQUE,
                    witness: format!("{}, {}", self.names[u], self.names[v]),
                });
            }
        }

        for &(u, v) in self.normal_edges.iter().chain(&self.special_edges) {
            if u == v {
                violations.push(RuleViolation {
                    rule: RULE_LOOP,
                    witness: self.names[u].clone(),
                });
            }
        }

        Validation { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// Errors with the first violated rule unless the graph is valid.
    /// Constructions that only make sense on well-formed graphs call
    /// this as their gate.
    pub fn require_valid(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidGraph(format!("{} ({})", v.rule, v.witness))),
        }
    }

    /// Forgets orientation and the normal/special partition, keeping one
    /// undirected edge per joined pair. Loops (which only ill-formed
    /// graphs carry) are dropped, since the result stores 2-subsets.
    pub fn naive(&self) -> NaiveGraph {
        let mut edges = BTreeSet::new();
        for &(u, v) in &self.normal_edges {
            if u != v {
                edges.insert((u, v));
            }
        }
        for &(o, t) in &self.special_edges {
            if o != t {
                edges.insert((o.min(t), o.max(t)));
            }
        }
        NaiveGraph {
            names: self.names.clone(),
            index: self.index.clone(),
            edges,
        }
    }

    /// The subgraph induced on a vertex subset: kinds are kept as-is and
    /// exactly the edges with both ends inside survive. The result can
    /// fail [`validate`](Self::validate) even when the whole graph passes
    /// (a special vertex may lose its incoming special edge), which is
    /// fine for uses that only read vertices and edges.
    pub fn induced(&self, vertices: &[usize]) -> Result<SpecialGraph> {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(Error::EmptyInput("vertices"));
        }
        if let Some(&v) = keep.iter().find(|&&v| v >= self.names.len()) {
            return Err(Error::Domain(format!("vertex {v} is out of range")));
        }
        let mut position = BTreeMap::new();
        for (p, &v) in keep.iter().enumerate() {
            position.insert(v, p);
        }
        let names: Vec<String> = keep.iter().map(|&v| self.names[v].clone()).collect();
        let index: BTreeMap<String, usize> = names
            .iter()
            .enumerate()
            .map(|(p, n)| (n.clone(), p))
            .collect();
        let special: Vec<bool> = keep.iter().map(|&v| self.special[v]).collect();
        let normal_edges: BTreeSet<(usize, usize)> = self
            .normal_edges
            .iter()
            .filter_map(|&(u, v)| Some((*position.get(&u)?, *position.get(&v)?)))
            .collect();
        let special_edges: BTreeSet<(usize, usize)> = self
            .special_edges
            .iter()
            .filter_map(|&(o, t)| Some((*position.get(&o)?, *position.get(&t)?)))
            .collect();
        Ok(SpecialGraph {
            names,
            index,
            special,
            normal_edges,
            special_edges,
        })
    }

    /// Vertices with at least one incident edge, all of whose incident
    /// edges are special and point into them.
    pub fn attractors(&self) -> Vec<usize> {
        (0..self.names.len())
            .filter(|&v| {
                let touches_normal = self.normal_edges.iter().any(|&(a, b)| a == v || b == v);
                let outgoing = self.special_edges.iter().any(|&(o, _)| o == v);
                let incoming = self.special_edges.iter().any(|&(_, t)| t == v);
                incoming && !touches_normal && !outgoing
            })
            .collect()
    }

    pub fn attractor_names(&self) -> Vec<String> {
        self.attractors()
            .into_iter()
            .map(|v| self.names[v].clone())
            .collect()
    }
}

/// An undirected simple graph on named vertices; edges are 2-subsets.
#[derive(Debug, Clone)]
pub struct NaiveGraph {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl NaiveGraph {
    pub fn new(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyInput("vertices"));
        }
        let mut names = Vec::with_capacity(vertices.len());
        let mut index = BTreeMap::new();
        for &name in vertices {
            if name.is_empty() {
                return Err(Error::InvalidGraph("empty vertex id".into()));
            }
            if index.insert(name.to_string(), names.len()).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex id '{name}'")));
            }
            names.push(name.to_string());
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            let u = index
                .get(a)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(a.to_string()))?;
            let v = index
                .get(b)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(b.to_string()))?;
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at '{a}'")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(NaiveGraph {
            names,
            index,
            edges: set,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.names.len())
            .filter(|&w| self.has_edge(v, w))
            .collect()
    }

    /// Bitmask adjacency rows; fails beyond 64 vertices.
    pub fn adjacency(&self) -> Result<Vec<u64>> {
        let n = self.names.len();
        if n > 64 {
            return Err(Error::InvalidGraph(format!(
                "{n} vertices exceed the 64-vertex clique enumeration cap"
            )));
        }
        let mut adj = vec![0u64; n];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(adj)
    }

    /// Decides chordality (every cycle of length at least four has a
    /// chord) via maximum-cardinality search: the reverse of the visit
    /// order is a perfect elimination ordering exactly for chordal
    /// graphs, and the elimination property only needs to be checked
    /// against each vertex's first later neighbor.
    pub fn is_chordal(&self) -> bool {
        let n = self.names.len();
        let adj: Vec<BTreeSet<usize>> = (0..n)
            .map(|v| self.neighbors(v).into_iter().collect())
            .collect();

        // alpha = elimination position; the first vertex visited gets n.
        let mut alpha = vec![0usize; n];
        let mut chosen = vec![false; n];
        let mut weight = vec![0usize; n];
        for number in (1..=n).rev() {
            let v = (0..n)
                .filter(|&v| !chosen[v])
                .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
                .expect("an unvisited vertex remains");
            alpha[v] = number;
            chosen[v] = true;
            for &w in &adj[v] {
                if !chosen[w] {
                    weight[w] += 1;
                }
            }
        }

        for v in 0..n {
            let later: Vec<usize> = adj[v]
                .iter()
                .copied()
                .filter(|&w| alpha[w] > alpha[v])
                .collect();
            if let Some(&p) = later.iter().min_by_key(|&&w| alpha[w]) {
                for &w in &later {
                    if w != p && !adj[p].contains(&w) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Number of cliques with d vertices, for d = 0..=max_size; the
    /// empty clique counts once in degree 0.
    pub fn clique_count_vector(&self, max_size: usize) -> Result<Vec<u64>> {
        let adj = self.adjacency()?;
        let mut counts = vec![0u64; max_size + 1];
        let all = if self.names.len() == 64 {
            !0u64
        } else {
            (1u64 << self.names.len()) - 1
        };
        count_cliques(&adj, all, 0, &mut counts);
        Ok(counts)
    }

    /// Vertex names of a clique, sorted lexicographically.
    pub fn clique_label(&self, clique: &[usize]) -> Vec<String> {
        let mut label: Vec<String> = clique.iter().map(|&v| self.names[v].clone()).collect();
        label.sort();
        label
    }

    /// All maximal cliques as sorted index lists, ordered by their
    /// lexicographic name labels so downstream structures are stable
    /// under vertex reordering.
    pub fn maximal_cliques(&self) -> Result<Vec<Vec<usize>>> {
        let adj = self.adjacency()?;
        let mut cliques: Vec<Vec<usize>> = util::maximal_cliques(self.names.len(), &adj)
            .into_iter()
            .map(|mask| util::bits(mask).collect())
            .collect();
        cliques.sort_by_key(|c| self.clique_label(c));
        Ok(cliques)
    }

    /// Builds a clique tree: a maximum-weight spanning tree on the
    /// maximal cliques, weighted by intersection size, with ties broken
    /// by lexicographic clique labels. Zero-weight edges are allowed so
    /// disconnected graphs still yield a spanning tree (the intersection
    /// property is vacuous across components). The result is re-checked
    /// by the exhaustive verifier before being returned.
    pub fn clique_tree(&self) -> Result<CliqueTree> {
        if !self.is_chordal() {
            return Err(Error::NotChordal);
        }
        let cliques = self.maximal_cliques()?;
        let k = cliques.len();
        let mut candidates: Vec<(usize, usize, usize)> = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                candidates.push((intersection_size(&cliques[i], &cliques[j]), i, j));
            }
        }
        // Cliques are already label-sorted, so index order is label order.
        candidates.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

        let mut parent: Vec<usize> = (0..k).collect();
        let mut edges = Vec::new();
        for (_, i, j) in candidates {
            let (ri, rj) = (find_root(&mut parent, i), find_root(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
                edges.push((i, j));
            }
        }
        edges.sort_unstable();

        let tree = CliqueTree { cliques, edges };
        tree.verify()?;
        Ok(tree)
    }

    /// Every clique tree of the graph: all maximum-weight spanning trees
    /// on the maximal cliques, each checked by the verifier. Intended for
    /// exhaustive testing at small sizes; the number of spanning trees
    /// grows fast with the clique count.
    pub fn all_clique_trees(&self) -> Result<Vec<CliqueTree>> {
        if !self.is_chordal() {
            return Err(Error::NotChordal);
        }
        let cliques = self.maximal_cliques()?;
        let k = cliques.len();
        if k == 1 {
            return Ok(vec![CliqueTree {
                cliques,
                edges: Vec::new(),
            }]);
        }
        let mut pairs = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                pairs.push((i, j, intersection_size(&cliques[i], &cliques[j])));
            }
        }
        assert!(pairs.len() <= 20, "clique-tree enumeration is desk-scale");

        let mut best = 0usize;
        let mut trees = Vec::new();
        for mask in 0u32..(1 << pairs.len()) {
            if mask.count_ones() as usize != k - 1 {
                continue;
            }
            let chosen: Vec<(usize, usize, usize)> = util::bits(u64::from(mask))
                .map(|b| pairs[b])
                .collect();
            let mut parent: Vec<usize> = (0..k).collect();
            let mut acyclic = true;
            for &(i, j, _) in &chosen {
                let (ri, rj) = (find_root(&mut parent, i), find_root(&mut parent, j));
                if ri == rj {
                    acyclic = false;
                    break;
                }
                parent[ri] = rj;
            }
            if !acyclic {
                continue;
            }
            let weight: usize = chosen.iter().map(|&(_, _, w)| w).sum();
            if weight > best {
                best = weight;
                trees.clear();
            }
            if weight == best {
                let mut edges: Vec<(usize, usize)> =
                    chosen.into_iter().map(|(i, j, _)| (i, j)).collect();
                edges.sort_unstable();
                trees.push(CliqueTree {
                    cliques: cliques.clone(),
                    edges,
                });
            }
        }
        for tree in &trees {
            tree.verify()?;
        }
        Ok(trees)
    }
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|v| b.contains(v)).count()
}

/// Counts cliques by size: the current clique has `depth` vertices and
/// `cand` holds the vertices that extend it (all adjacent to every member,
/// all with higher index than the last member, so each clique is visited
/// exactly once in ascending order).
fn count_cliques(adj: &[u64], cand: u64, depth: usize, counts: &mut [u64]) {
    counts[depth] += 1;
    if depth + 1 >= counts.len() {
        return;
    }
    let mut rest = cand;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        count_cliques(adj, rest & adj[v], depth + 1, counts);
    }
}

fn find_root(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// A tree whose nodes are the maximal cliques of a graph, satisfying the
/// intersection property: for any two cliques, their intersection is
/// contained in every clique on the tree path between them.
#[derive(Debug, Clone)]
pub struct CliqueTree {
    /// Maximal cliques as sorted vertex index lists, label-ordered.
    pub cliques: Vec<Vec<usize>>,
    /// Tree edges between clique positions, smaller index first.
    pub edges: Vec<(usize, usize)>,
}

impl CliqueTree {
    pub fn node_count(&self) -> usize {
        self.cliques.len()
    }

    /// Vertices shared by the two cliques of a tree edge.
    pub fn edge_intersection(&self, edge: (usize, usize)) -> Vec<usize> {
        self.cliques[edge.0]
            .iter()
            .copied()
            .filter(|v| self.cliques[edge.1].contains(v))
            .collect()
    }

    /// Exhaustive independent check: the edge set forms a tree, and for
    /// every pair of cliques the intersection is contained in every
    /// clique along the connecting path.
    pub fn verify(&self) -> Result<()> {
        let k = self.cliques.len();
        if k == 0 {
            return Err(Error::IntersectionProperty("no cliques".into()));
        }
        if self.edges.len() + 1 != k {
            return Err(Error::IntersectionProperty(format!(
                "not a tree: {} nodes with {} edges",
                k,
                self.edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); k];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for start in 0..k {
            let parent = bfs_parents(&adj, start);
            if start == 0 && parent.iter().any(Option::is_none) {
                return Err(Error::IntersectionProperty("not a tree: disconnected".into()));
            }
            for other in start + 1..k {
                let shared: Vec<usize> = self.cliques[start]
                    .iter()
                    .copied()
                    .filter(|v| self.cliques[other].contains(v))
                    .collect();
                if shared.is_empty() {
                    continue;
                }
                let mut node = other;
                loop {
                    if let Some(missing) = shared
                        .iter()
                        .find(|v| !self.cliques[node].contains(v))
                    {
                        return Err(Error::IntersectionProperty(format!(
                            "vertex {missing} shared by cliques {start} and {other} \
                             is missing from clique {node} on their path"
                        )));
                    }
                    if node == start {
                        break;
                    }
                    node = parent[node].expect("path nodes stay connected");
                }
            }
        }
        Ok(())
    }
}

fn bfs_parents(adj: &[Vec<usize>], start: usize) -> Vec<Option<usize>> {
    let mut parent = vec![None; adj.len()];
    parent[start] = Some(start);
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if parent[w].is_none() {
                parent[w] = Some(u);
                queue.push_back(w);
            }
        }
    }
    parent
}
