//! Tree-of-groups decompositions along clique trees.
//!
//! A chordal graph's group splits over its clique tree: each maximal
//! clique carries the subgroup its vertices generate, each tree edge
//! carries the subgroup on the shared vertices, and the edge group
//! includes into both endpoint groups by matching generator names.
//! Because the underlying graph is a tree, the fundamental group of the
//! arrangement needs no extra stable letters: it is presented by the
//! node presentations glued along the identifications, and it should
//! recover the whole graph group. [`pi1_presentation`] performs the
//! gluing honestly (union-find over generator slots, so a failure of
//! the intersection property is detected rather than papered over) and
//! [`compare_presentations`] decides equality up to the symmetries a
//! presentation admits without changing its meaning.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::raag::{self, CliqueGroup, EmbeddingReport, Presentation, Word};
use crate::special_graph::{CliqueTree, SpecialGraph};

/// One edge of the tree of groups: the presentation on the shared
/// vertices plus the positions its generators occupy in each endpoint's
/// generator list. Both maps are inclusions by name.
#[derive(Debug, Clone)]
pub struct GroupEdge {
    /// Endpoint node positions, smaller first.
    pub ends: (usize, usize),
    /// Shared graph vertices, ascending.
    pub shared: Vec<usize>,
    pub presentation: Presentation,
    /// Position of each edge generator in `nodes[ends.0]`'s generators.
    pub into_first: Vec<usize>,
    /// Position of each edge generator in `nodes[ends.1]`'s generators.
    pub into_second: Vec<usize>,
}

/// A tree of groups over a clique tree: one presentation per maximal
/// clique, one per tree edge on the clique intersection.
#[derive(Debug, Clone)]
pub struct GraphOfGroups {
    /// Maximal cliques as graph vertex indices, label-ordered as in the
    /// clique tree they came from.
    pub cliques: Vec<Vec<usize>>,
    pub nodes: Vec<Presentation>,
    pub edges: Vec<GroupEdge>,
}

/// Assembles the tree of groups for a valid graph over one of its
/// clique trees. The tree is re-verified first (tree shape plus the
/// intersection property), so a hand-built tree that merely spans the
/// cliques is rejected. Node and edge presentations are built from the
/// induced edges alone: a special vertex whose origin lies outside the
/// clique still generates, it just carries its twisting relator in some
/// other node.
pub fn build(graph: &SpecialGraph, tree: &CliqueTree) -> Result<GraphOfGroups> {
    graph.require_valid()?;
    tree.verify()?;

    let mut nodes = Vec::with_capacity(tree.cliques.len());
    for clique in &tree.cliques {
        nodes.push(raag::presentation_from_edges(&graph.induced(clique)?));
    }

    let mut edges = Vec::with_capacity(tree.edges.len());
    for &(i, j) in &tree.edges {
        let shared = tree.edge_intersection((i, j));
        let presentation = if shared.is_empty() {
            // Cliques in different components share nothing; the edge
            // group is trivial and includes trivially.
            Presentation {
                generators: Vec::new(),
                relators: Vec::new(),
            }
        } else {
            raag::presentation_from_edges(&graph.induced(&shared)?)
        };
        let into_first = inclusion(&presentation, &nodes[i])?;
        let into_second = inclusion(&presentation, &nodes[j])?;
        edges.push(GroupEdge {
            ends: (i, j),
            shared,
            presentation,
            into_first,
            into_second,
        });
    }

    Ok(GraphOfGroups {
        cliques: tree.cliques.clone(),
        nodes,
        edges,
    })
}

fn inclusion(sub: &Presentation, ambient: &Presentation) -> Result<Vec<usize>> {
    sub.generators
        .iter()
        .map(|name| {
            ambient.generator_index(name).ok_or_else(|| {
                Error::IntersectionProperty(format!(
                    "shared generator '{name}' is missing from an endpoint clique"
                ))
            })
        })
        .collect()
}

/// The fundamental presentation of the tree of groups: all node
/// presentations side by side, generators identified along the edge
/// inclusions, relators re-expressed over the identified generators and
/// deduplicated. Tree shape means no stable letters appear.
///
/// The identifications are computed by union-find over generator slots,
/// not by name: if two cliques both contain a vertex but the tree never
/// glues their copies together (a failed intersection property), the
/// result would have two same-named generators, and that is reported as
/// an error instead of being silently merged.
pub fn pi1_presentation(gog: &GraphOfGroups) -> Result<Presentation> {
    let mut offsets = Vec::with_capacity(gog.nodes.len());
    let mut total = 0usize;
    for node in &gog.nodes {
        offsets.push(total);
        total += node.generators.len();
    }

    let mut parent: Vec<usize> = (0..total).collect();
    for edge in &gog.edges {
        for g in 0..edge.presentation.generators.len() {
            let a = offsets[edge.ends.0] + edge.into_first[g];
            let b = offsets[edge.ends.1] + edge.into_second[g];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }

    // Name the classes in first-appearance order. Slots glued together
    // always carry one vertex's name, since every inclusion matches
    // names; the defensive check keeps that assumption visible.
    let mut class_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut generators: Vec<String> = Vec::new();
    let mut slot_class = vec![0usize; total];
    for (n, node) in gog.nodes.iter().enumerate() {
        for (i, name) in node.generators.iter().enumerate() {
            let slot = offsets[n] + i;
            let root = find(&mut parent, slot);
            let class = *class_of_root.entry(root).or_insert_with(|| {
                generators.push(name.clone());
                generators.len() - 1
            });
            if generators[class] != *name {
                return Err(Error::IntersectionProperty(format!(
                    "generators '{}' and '{name}' were glued together",
                    generators[class]
                )));
            }
            slot_class[slot] = class;
        }
    }
    let mut first_class: BTreeMap<&str, usize> = BTreeMap::new();
    for (class, name) in generators.iter().enumerate() {
        if let Some(&prev) = first_class.get(name.as_str()) {
            if prev != class {
                return Err(Error::IntersectionProperty(format!(
                    "vertex '{name}' appears in cliques the tree never glues"
                )));
            }
        }
        first_class.insert(name, class);
    }

    let mut relators: Vec<Word> = Vec::new();
    for (n, node) in gog.nodes.iter().enumerate() {
        for word in &node.relators {
            let mapped = Word::new(
                word.letters()
                    .iter()
                    .map(|&(g, e)| (slot_class[offsets[n] + g], e))
                    .collect(),
            );
            if !relators.contains(&mapped) {
                relators.push(mapped);
            }
        }
    }

    Ok(Presentation {
        generators,
        relators,
    })
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Whether two presentations agree up to renumbering: same generator
/// names, and the same relators once each is freely and cyclically
/// reduced and taken up to inversion, rotation, and repetition.
pub fn compare_presentations(p: &Presentation, q: &Presentation) -> bool {
    p.canonical() == q.canonical()
}

/// The even-exponent audit for one clique of the tree: the squares of
/// the generators span a free abelian subgroup whose index matches
/// `2^{vertices}`, tying the finite quotient's order to the rank.
#[derive(Debug, Clone)]
pub struct RowCheck {
    /// Vertex names of the clique, ascending.
    pub label: Vec<String>,
    pub embedding: EmbeddingReport,
    pub expected_index: u64,
    pub passed: bool,
}

/// A [`RowCheck`] for a tree edge, plus whether every edge generator is
/// present in both endpoint generator lists. With name-matching
/// inclusions, that containment is exactly what makes the square of
/// maps into the finite quotients commute on generators.
#[derive(Debug, Clone)]
pub struct EdgeRowCheck {
    pub ends: (usize, usize),
    pub row: RowCheck,
    pub included_in_both: bool,
}

#[derive(Debug, Clone)]
pub struct ExactRowsReport {
    pub nodes: Vec<RowCheck>,
    pub edges: Vec<EdgeRowCheck>,
    pub passed: bool,
}

/// Runs the even-exponent audit over every node and edge clique of the
/// tree. Errors if some clique's restriction is not itself a valid
/// complete graph (a special vertex separated from its origin), since
/// the audit is defined on standalone clique groups.
pub fn exact_rows_check(graph: &SpecialGraph, gog: &GraphOfGroups) -> Result<ExactRowsReport> {
    let mut nodes = Vec::with_capacity(gog.cliques.len());
    for clique in &gog.cliques {
        nodes.push(row_check(graph, clique)?);
    }
    let mut edges = Vec::with_capacity(gog.edges.len());
    for edge in &gog.edges {
        let row = row_check(graph, &edge.shared)?;
        let included_in_both = inclusion(&edge.presentation, &gog.nodes[edge.ends.0]).is_ok()
            && inclusion(&edge.presentation, &gog.nodes[edge.ends.1]).is_ok();
        edges.push(EdgeRowCheck {
            ends: edge.ends,
            row,
            included_in_both,
        });
    }
    let passed = nodes.iter().all(|r| r.passed)
        && edges.iter().all(|e| e.row.passed && e.included_in_both);
    Ok(ExactRowsReport {
        nodes,
        edges,
        passed,
    })
}

fn row_check(graph: &SpecialGraph, vertices: &[usize]) -> Result<RowCheck> {
    let expected_index = 1u64 << vertices.len();
    if vertices.is_empty() {
        // Trivial group: empty rank, index 1, nothing to audit.
        let embedding = EmbeddingReport {
            generator_count: 0,
            box_injective: true,
            images_in_kernel: true,
            coset_count: 1,
            coxeter_order: 1,
        };
        return Ok(RowCheck {
            label: Vec::new(),
            embedding,
            expected_index,
            passed: true,
        });
    }
    let label = vertices
        .iter()
        .map(|&v| graph.vertex_name(v).to_string())
        .collect();
    let sub = graph.induced(vertices)?;
    let group = CliqueGroup::new(&sub)?;
    let embedding = raag::embedding_index_check(&group)?;
    let passed = embedding.passed() && embedding.coset_count == expected_index;
    Ok(RowCheck {
        label,
        embedding,
        expected_index,
        passed,
    })
}
