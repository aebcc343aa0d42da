//! Graded algebras over the two-element field presented by quadratic
//! relations in commuting variables.
//!
//! An algebra is a quotient F2[x_1, ..., x_k] / I where the ideal I is
//! generated in degree two.  Everything here is desk-scale linear algebra:
//! the degree-d slice of I is spanned by the products of the quadratic
//! generators with monomials of degree d - 2, and ranks over F2 are
//! computed by bitset Gaussian elimination.  Monomial bases are ordered
//! degree-reverse-lexicographically with respect to the generator list.
//!
//! [`build_gamma_algebra`] attaches such an algebra to a directed special
//! graph; its graded dimensions can then be compared against the clique
//! counts of the underlying undirected graph via [`conjecture_probe`].
//! The comparison is exploratory evidence and is labeled as such — a
//! mismatch is reported, never treated as an error.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::raag::generator_order;
use crate::special_graph::SpecialGraph;

/// A quadratic relation: a set of degree-two monomials (i, j) with i <= j
/// over the generator indices, summed over F2.
pub type Relation = BTreeSet<(usize, usize)>;

/// A commutative graded F2-algebra presented by quadratic relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadAlgebraF2 {
    generators: Vec<String>,
    relations: Vec<Relation>,
}

impl QuadAlgebraF2 {
    /// Builds an algebra from generator names and relations given as lists
    /// of degree-two monomials.  Monomials may appear in either index
    /// order; repeated monomials within one relation cancel in pairs.
    /// Duplicate and empty relations are dropped.
    pub fn new(generators: Vec<String>, relations: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for name in &generators {
            if name.is_empty() {
                return Err(Error::Domain("empty generator name".into()));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::Domain(format!("duplicate generator name: {name}")));
            }
        }
        let k = generators.len();
        let mut canon: Vec<Relation> = Vec::new();
        for terms in relations {
            let mut set = Relation::new();
            for (i, j) in terms {
                if i >= k || j >= k {
                    return Err(Error::Domain(format!(
                        "monomial ({i}, {j}) out of range for {k} generators"
                    )));
                }
                let key = (i.min(j), i.max(j));
                if !set.insert(key) {
                    set.remove(&key);
                }
            }
            if !set.is_empty() && !canon.contains(&set) {
                canon.push(set);
            }
        }
        canon.sort();
        Ok(QuadAlgebraF2 {
            generators,
            relations: canon,
        })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Human-readable relation list, e.g. `x*y + y^2`.
    pub fn relation_strings(&self) -> Vec<String> {
        self.relations
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&(i, j)| {
                        if i == j {
                            format!("{}^2", self.generators[i])
                        } else {
                            format!("{}*{}", self.generators[i], self.generators[j])
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" + ")
            })
            .collect()
    }

    /// Dimensions of the graded pieces of the quotient in degrees
    /// 0..=maxdeg.
    pub fn hilbert_dims(&self, maxdeg: usize) -> Vec<u64> {
        (0..=maxdeg)
            .map(|d| {
                let monos = monomials(self.generators.len(), d);
                let rank = self.slice_rref(d, &monos).len();
                (monos.len() - rank) as u64
            })
            .collect()
    }

    /// Reduced row-echelon form of the degree-d slice of the ideal, rows
    /// as bitsets over the degree-d monomial basis.  Canonical: two slices
    /// are equal as subspaces iff their forms are equal row for row.
    fn slice_rref(&self, d: usize, monos: &[Vec<u32>]) -> Vec<Vec<u64>> {
        if d < 2 || monos.is_empty() {
            return Vec::new();
        }
        let index: BTreeMap<&[u32], usize> = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.as_slice(), i))
            .collect();
        let words = monos.len().div_ceil(64);
        let mut rows = Vec::new();
        for rel in &self.relations {
            for m in monomials(self.generators.len(), d - 2) {
                let mut row = vec![0u64; words];
                for &(i, j) in rel {
                    let mut e = m.clone();
                    e[i] += 1;
                    e[j] += 1;
                    let col = index[e.as_slice()];
                    row[col / 64] ^= 1 << (col % 64);
                }
                rows.push(row);
            }
        }
        rref(&mut rows, monos.len());
        rows
    }
}

impl fmt::Display for QuadAlgebraF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F2[{}] / ({})",
            self.generators.join(", "),
            self.relation_strings().join(", ")
        )
    }
}

/// All exponent vectors of length k summing to d, sorted
/// degree-reverse-lexicographically (largest first).
fn monomials(k: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut prefix = vec![0u32; k];
    fill(&mut prefix, 0, d as u32, &mut out);
    out.sort_by(|a, b| {
        for i in (0..k).rev() {
            if a[i] != b[i] {
                // smaller exponent in the last differing position wins
                return a[i].cmp(&b[i]);
            }
        }
        std::cmp::Ordering::Equal
    });
    out
}

fn fill(prefix: &mut Vec<u32>, pos: usize, rest: u32, out: &mut Vec<Vec<u32>>) {
    if pos == prefix.len() {
        if rest == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    if pos + 1 == prefix.len() {
        prefix[pos] = rest;
        out.push(prefix.clone());
        prefix[pos] = 0;
        return;
    }
    for e in 0..=rest {
        prefix[pos] = e;
        fill(prefix, pos + 1, rest - e, out);
        prefix[pos] = 0;
    }
}

/// In-place reduced row echelon form over F2; drops zero rows and sorts
/// rows by pivot column, so the output is canonical for the row space.
fn rref(rows: &mut Vec<Vec<u64>>, ncols: usize) {
    let mut rank = 0;
    for col in 0..ncols {
        let word = col / 64;
        let bit = 1u64 << (col % 64);
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][word] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[word] & bit != 0 {
                for (w, p) in row.iter_mut().zip(&pivot_row) {
                    *w ^= p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
}

/// Tensor product: disjoint union of generators, union of relations.
/// Errors if the generator names collide.
pub fn tensor(a: &QuadAlgebraF2, b: &QuadAlgebraF2) -> Result<QuadAlgebraF2> {
    let offset = a.generators.len();
    let mut generators = a.generators.clone();
    generators.extend(b.generators.iter().cloned());
    let mut relations: Vec<Vec<(usize, usize)>> = a
        .relations
        .iter()
        .map(|r| r.iter().copied().collect())
        .collect();
    for r in &b.relations {
        relations.push(r.iter().map(|&(i, j)| (i + offset, j + offset)).collect());
    }
    QuadAlgebraF2::new(generators, relations)
}

/// Convolution of two dimension sequences; the graded dimensions of a
/// tensor product are the convolution of the factors' dimensions.
pub fn convolve(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Whether two presentations generate the same ideal, i.e. whether their
/// degree-d ideal slices agree as linear subspaces for every d <= maxdeg.
/// The algebras must have the same generator sets; if the lists are
/// ordered differently, the second is reindexed by name.
pub fn ideal_equal(a: &QuadAlgebraF2, b: &QuadAlgebraF2, maxdeg: usize) -> Result<bool> {
    let b = align_generators(a, b)?;
    for d in 2..=maxdeg {
        let monos = monomials(a.generators.len(), d);
        if a.slice_rref(d, &monos) != b.slice_rref(d, &monos) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn align_generators(a: &QuadAlgebraF2, b: &QuadAlgebraF2) -> Result<QuadAlgebraF2> {
    if a.generators == b.generators {
        return Ok(b.clone());
    }
    let mut sa = a.generators.clone();
    let mut sb = b.generators.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return Err(Error::Domain(
            "ideal comparison requires identical generator sets".into(),
        ));
    }
    let map: Vec<usize> = b
        .generators
        .iter()
        .map(|name| a.generators.iter().position(|n| n == name).unwrap())
        .collect();
    let relations = b
        .relations
        .iter()
        .map(|r| r.iter().map(|&(i, j)| (map[i], map[j])).collect())
        .collect();
    QuadAlgebraF2::new(a.generators.clone(), relations)
}

/// Cohomology-style ring of the (m+1)-dimensional Klein-type group with m
/// flipped generators: F2[R, V1..Vm] / (R^2, Vi^2 + R*Vi).
pub fn klein_ring(m: usize) -> Result<QuadAlgebraF2> {
    if m < 1 {
        return Err(Error::Domain("klein_ring needs m >= 1".into()));
    }
    let mut generators = vec!["R".to_string()];
    generators.extend((1..=m).map(|i| format!("V{i}")));
    let mut relations = vec![vec![(0, 0)]];
    for i in 1..=m {
        relations.push(vec![(i, i), (0, i)]);
    }
    QuadAlgebraF2::new(generators, relations)
}

/// Ring of the m-generator clique group with l flipped generators and
/// m - l - 1 commuting ones:
/// F2[R, V1..Vl, W1..W_{m-l-1}] / (R^2, Vi^2 + R*Vi, Wj^2).
pub fn kml_ring(m: usize, l: usize) -> Result<QuadAlgebraF2> {
    if m < 1 || l > m - 1 {
        return Err(Error::Domain(format!(
            "kml_ring needs m >= 1 and l <= m - 1, got ({m}, {l})"
        )));
    }
    let mut generators = vec!["R".to_string()];
    generators.extend((1..=l).map(|i| format!("V{i}")));
    generators.extend((1..=(m - l - 1)).map(|j| format!("W{j}")));
    let mut relations = vec![vec![(0, 0)]];
    for i in 1..=l {
        relations.push(vec![(i, i), (0, i)]);
    }
    for j in 1..=(m - l - 1) {
        relations.push(vec![(l + j, l + j)]);
    }
    QuadAlgebraF2::new(generators, relations)
}

/// Exterior algebra on n generators (over F2: all squares vanish),
/// generators named e1..en.
pub fn exterior_algebra(n: usize) -> QuadAlgebraF2 {
    let generators = (1..=n).map(|i| format!("e{i}")).collect();
    let relations = (0..n).map(|i| vec![(i, i)]).collect();
    QuadAlgebraF2::new(generators, relations).expect("exterior presentation is well formed")
}

/// The quadratic F2-algebra attached to a valid special graph.  Generators
/// are the vertices in the group-presentation order (plain vertices first).
/// Relations:
///
/// 1. every vertex that is not the origin of a special edge squares to
///    zero;
/// 2. every special edge o -> t imposes t*o + o^2 = 0;
/// 3. every non-adjacent pair imposes v*w = 0;
/// 4. for every special edge o -> t and every neighbor u of o that is
///    distinct from t and not adjacent to t, the products t*o and u*o are
///    identified: t*o + u*o = 0.
///
/// When several u qualify in rule 4 one relation is imposed per qualifying
/// u; [`conjecture_probe`] flags graphs where that multiplicity occurs.
pub fn build_gamma_algebra(graph: &SpecialGraph) -> Result<QuadAlgebraF2> {
    graph.require_valid()?;
    let order = generator_order(graph);
    let mut pos = vec![0usize; graph.vertex_count()];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let generators = order
        .iter()
        .map(|&v| graph.vertex_name(v).to_string())
        .collect();
    let naive = graph.naive();
    let origins: BTreeSet<usize> = graph.special_edges().iter().map(|&(o, _)| o).collect();

    let mut relations: Vec<Vec<(usize, usize)>> = Vec::new();
    for &v in &order {
        if !origins.contains(&v) {
            relations.push(vec![(pos[v], pos[v])]);
        }
    }
    for &(o, t) in graph.special_edges() {
        relations.push(vec![(pos[t], pos[o]), (pos[o], pos[o])]);
        for u in rule4_neighbors(&naive, o, t) {
            relations.push(vec![(pos[t], pos[o]), (pos[u], pos[o])]);
        }
    }
    let n = graph.vertex_count();
    for v in 0..n {
        for w in (v + 1)..n {
            if !naive.has_edge(v, w) {
                relations.push(vec![(pos[v], pos[w])]);
            }
        }
    }
    QuadAlgebraF2::new(generators, relations)
}

fn rule4_neighbors(naive: &crate::special_graph::NaiveGraph, o: usize, t: usize) -> Vec<usize> {
    (0..naive.vertex_count())
        .filter(|&u| u != t && naive.has_edge(u, o) && !naive.has_edge(u, t))
        .collect()
}

/// For each special edge (o, t), the vertices that trigger rule 4 of
/// [`build_gamma_algebra`].  Sites with more than one entry mean the
/// construction imposed several identifications at one edge.
pub fn rule4_sites(graph: &SpecialGraph) -> Result<Vec<((usize, usize), Vec<usize>)>> {
    graph.require_valid()?;
    let naive = graph.naive();
    Ok(graph
        .special_edges()
        .iter()
        .map(|&(o, t)| ((o, t), rule4_neighbors(&naive, o, t)))
        .collect())
}

/// Side-by-side comparison of the graded dimensions of the graph algebra
/// with the clique counts of the underlying undirected graph.  Evidence
/// for or against an open conjecture — a mismatch is data, not a failure.
#[derive(Debug, Clone, Serialize)]
pub struct ConjectureProbe {
    /// Graded dimensions of the graph algebra in degrees 0..=maxdeg.
    pub dims: Vec<u64>,
    /// Number of d-vertex cliques of the underlying undirected graph.
    pub clique_counts: Vec<u64>,
    /// Per-degree agreement between the two vectors.
    pub degree_match: Vec<bool>,
    /// Whether every compared degree agreed.
    pub all_match: bool,
    /// True when rule 4 imposed more than one identification at some
    /// special edge, where the construction is least settled.
    pub ambiguous_rule4: bool,
}

impl fmt::Display for ConjectureProbe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra dims:  {:?}", self.dims)?;
        writeln!(f, "clique counts: {:?}", self.clique_counts)?;
        write!(
            f,
            "evidence: {}{}",
            if self.all_match {
                "vectors agree on all compared degrees (consistent with the conjecture)"
            } else {
                "vectors disagree (recorded as-is; the comparison is heuristic)"
            },
            if self.ambiguous_rule4 {
                "; note: several identifications were imposed at one special edge"
            } else {
                ""
            }
        )
    }
}

/// Runs the clique-count comparison for a valid special graph up to the
/// given degree.
pub fn conjecture_probe(graph: &SpecialGraph, maxdeg: usize) -> Result<ConjectureProbe> {
    let algebra = build_gamma_algebra(graph)?;
    let dims = algebra.hilbert_dims(maxdeg);
    let clique_counts = graph.naive().clique_count_vector(maxdeg)?;
    let degree_match: Vec<bool> = dims
        .iter()
        .zip(&clique_counts)
        .map(|(a, b)| a == b)
        .collect();
    let all_match = degree_match.iter().all(|&m| m);
    let ambiguous_rule4 = rule4_sites(graph)?.iter().any(|(_, us)| us.len() > 1);
    Ok(ConjectureProbe {
        dims,
        clique_counts,
        degree_match,
        all_match,
        ambiguous_rule4,
    })
}
