//! Shared enumerators and independent oracles for the integration suites.
//!
//! Everything here is deliberately written against first definitions —
//! induced-cycle chordality, subset-circumball enclosing balls, rank by a
//! different elimination order — so that agreement with the library is
//! evidence rather than tautology.

#![allow(dead_code)]

use orart::complexes::SimplicialComplex;
use orart::metric_graph::MetricGraph;
use orart::raag::Word;
use orart::report::DistanceOracle;
use orart::special_graph::SpecialGraph;
use rand::Rng;

/// Euclidean point lists with exact midpoints, as a distance oracle.
pub struct EuclideanPoints;

impl DistanceOracle for EuclideanPoints {
    type Point = Vec<f64>;

    fn distance(&self, a: &Vec<f64>, b: &Vec<f64>) -> f64 {
        euclid(a, b)
    }

    fn midpoints(&self, a: &Vec<f64>, b: &Vec<f64>) -> Vec<Vec<f64>> {
        vec![a.iter().zip(b).map(|(x, y)| (x + y) / 2.0).collect()]
    }

    fn label(&self, p: &Vec<f64>) -> String {
        format!("{p:.3?}")
    }
}

pub const VERTEX_NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

/// Compact encoding of one candidate mixed graph on `n` named vertices:
/// a special-vertex bitmask plus one kind digit per unordered pair in
/// lexicographic order (0 = absent, 1 = plain edge, 2 = directed edge
/// into the special endpoint).
#[derive(Debug, Clone)]
pub struct GraphCode {
    pub n: usize,
    pub special: u32,
    pub pair_kinds: Vec<u8>,
}

impl GraphCode {
    pub fn pairs(n: usize) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        pairs
    }

    /// Underlying undirected adjacency, packed row-major into one word
    /// (fits because the enumerators stop at 7 vertices).
    pub fn naive_key(&self) -> u64 {
        let mut key = 0u64;
        for (p, &(i, j)) in Self::pairs(self.n).iter().enumerate() {
            if self.pair_kinds[p] != 0 {
                key |= 1 << (i * self.n + j);
            }
        }
        key
    }

    pub fn build(&self) -> SpecialGraph {
        let vertices: Vec<(&str, bool)> = (0..self.n)
            .map(|v| (VERTEX_NAMES[v], self.special >> v & 1 == 1))
            .collect();
        let mut edges: Vec<(&str, &str, bool)> = Vec::new();
        for (p, &(i, j)) in Self::pairs(self.n).iter().enumerate() {
            match self.pair_kinds[p] {
                0 => {}
                1 => edges.push((VERTEX_NAMES[i], VERTEX_NAMES[j], false)),
                2 => {
                    // The directed edge points into the special endpoint.
                    if self.special >> j & 1 == 1 {
                        edges.push((VERTEX_NAMES[i], VERTEX_NAMES[j], true));
                    } else {
                        edges.push((VERTEX_NAMES[j], VERTEX_NAMES[i], true));
                    }
                }
                k => unreachable!("pair kind {k}"),
            }
        }
        SpecialGraph::new(&vertices, &edges).expect("enumerated codes are representable")
    }
}

/// Calls `f` once per valid graph on exactly `n` vertices: every
/// special vertex keeps at least one incoming directed edge, directed
/// edges only point at special vertices, and no two special vertices
/// are adjacent. The enumeration is over labeled graphs.
pub fn for_each_valid_special_graph(n: usize, f: &mut impl FnMut(&GraphCode)) {
    assert!((1..=7).contains(&n), "enumerator is sized for 1..=7");
    let pairs = GraphCode::pairs(n);
    for special in 0u32..(1 << n) {
        let mut code = GraphCode {
            n,
            special,
            pair_kinds: vec![0; pairs.len()],
        };
        let mut incoming = vec![0u32; n];
        recurse_pairs(&pairs, 0, &mut code, &mut incoming, f);
    }
}

fn recurse_pairs(
    pairs: &[(usize, usize)],
    idx: usize,
    code: &mut GraphCode,
    incoming: &mut [u32],
    f: &mut impl FnMut(&GraphCode),
) {
    if idx == pairs.len() {
        let all_fed = (0..code.n)
            .all(|v| code.special >> v & 1 == 0 || incoming[v] > 0);
        if all_fed {
            f(code);
        }
        return;
    }
    let (i, j) = pairs[idx];
    let si = code.special >> i & 1 == 1;
    let sj = code.special >> j & 1 == 1;

    code.pair_kinds[idx] = 0;
    recurse_pairs(pairs, idx + 1, code, incoming, f);

    if !(si && sj) {
        code.pair_kinds[idx] = 1;
        recurse_pairs(pairs, idx + 1, code, incoming, f);
        if si != sj {
            let target = if si { i } else { j };
            code.pair_kinds[idx] = 2;
            incoming[target] += 1;
            recurse_pairs(pairs, idx + 1, code, incoming, f);
            incoming[target] -= 1;
        }
    }
    code.pair_kinds[idx] = 0;
}

/// All complete valid graphs with up to `max_n` vertices: the all-plain
/// clique, and for each size the cliques with one special vertex fed by
/// every nonempty subset of the others (remaining edges plain).
pub fn complete_special_graphs(max_n: usize) -> Vec<SpecialGraph> {
    let mut graphs = Vec::new();
    for n in 1..=max_n {
        let plain: Vec<(&str, bool)> = (0..n).map(|v| (VERTEX_NAMES[v], false)).collect();
        let mut edges: Vec<(&str, &str, bool)> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((VERTEX_NAMES[i], VERTEX_NAMES[j], false));
            }
        }
        graphs.push(SpecialGraph::new(&plain, &edges).unwrap());

        if n < 2 {
            continue;
        }
        // Last vertex special; directed in-edges from a nonempty subset.
        let s = n - 1;
        for mask in 1u32..(1 << s) {
            let vertices: Vec<(&str, bool)> = (0..n).map(|v| (VERTEX_NAMES[v], v == s)).collect();
            let mut edges: Vec<(&str, &str, bool)> = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if j == s {
                        edges.push((VERTEX_NAMES[i], VERTEX_NAMES[j], mask >> i & 1 == 1));
                    } else {
                        edges.push((VERTEX_NAMES[i], VERTEX_NAMES[j], false));
                    }
                }
            }
            graphs.push(SpecialGraph::new(&vertices, &edges).unwrap());
        }
    }
    graphs
}

/// Calls `f` with the adjacency rows of every labeled undirected graph
/// on `n` vertices.
pub fn for_each_naive_graph(n: usize, f: &mut impl FnMut(&[u64])) {
    let pairs = GraphCode::pairs(n);
    for mask in 0u64..(1 << pairs.len()) {
        let mut adj = vec![0u64; n];
        for (p, &(i, j)) in pairs.iter().enumerate() {
            if mask >> p & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
        f(&adj);
    }
}

/// First-definition chordality: a graph is chordal when no vertex subset
/// induces a cycle of length at least four. A subset induces a cycle
/// exactly when it is connected and 2-regular inside itself.
pub fn chordal_by_induced_cycles(n: usize, adj: &[u64]) -> bool {
    for s in 0u64..(1 << n) {
        if (s.count_ones() as usize) < 4 {
            continue;
        }
        let mut two_regular = true;
        for v in 0..n {
            if s >> v & 1 == 1 && (adj[v] & s).count_ones() != 2 {
                two_regular = false;
                break;
            }
        }
        if !two_regular {
            continue;
        }
        // Connectivity of the induced subgraph.
        let start = s.trailing_zeros() as usize;
        let mut seen = 1u64 << start;
        let mut frontier = 1u64 << start;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adj[v] & s & !seen;
            seen |= new;
            frontier |= new;
        }
        if seen == s {
            return false;
        }
    }
    true
}

/// Decodes a Prüfer sequence (entries in `0..n`) into the labeled tree
/// on `n` vertices it encodes.
pub fn prufer_tree_edges(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    assert_eq!(seq.len(), n.saturating_sub(2));
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut used = vec![false; n];
    for &v in seq {
        let leaf = (0..n)
            .find(|&u| degree[u] == 1 && !used[u])
            .expect("a leaf always remains");
        edges.push((leaf, v));
        used[leaf] = true;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| !used[u] && degree[u] == 1).collect();
    assert_eq!(rest.len(), 2);
    edges.push((rest[0], rest[1]));
    edges
}

/// Every labeled tree on `n >= 2` vertices, with edge lengths assigned
/// by `length(u, v)`.
pub fn for_each_tree(
    n: usize,
    length: impl Fn(usize, usize) -> f64,
    f: &mut impl FnMut(&MetricGraph),
) {
    let names: Vec<String> = (0..n).map(|v| VERTEX_NAMES[v].to_string()).collect();
    let build = |edges: &[(usize, usize)], f: &mut dyn FnMut(&MetricGraph)| {
        let edge_list: Vec<(String, String, f64)> = edges
            .iter()
            .map(|&(u, v)| (names[u].clone(), names[v].clone(), length(u, v)))
            .collect();
        f(&MetricGraph::new(names.clone(), edge_list).unwrap());
    };
    if n == 2 {
        build(&[(0, 1)], f);
        return;
    }
    let mut seq = vec![0usize; n - 2];
    loop {
        build(&prufer_tree_edges(n, &seq), f);
        let mut i = 0;
        loop {
            if i == seq.len() {
                return;
            }
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

/// Exact smallest enclosing ball by first principles: the optimal ball
/// is the circumball of some subset of at most `dim + 1` points, so try
/// them all and keep the smallest one that contains everything.
pub fn brute_meb(points: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let dim = points[0].len();
    let m = points.len();
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut subset = Vec::new();
    brute_meb_subsets(points, 0, dim + 1, &mut subset, &mut |chosen| {
        if let Some(center) = circumcenter(points, chosen) {
            let radius = chosen
                .iter()
                .map(|&i| euclid(&center, &points[i]))
                .fold(0.0f64, f64::max);
            let covers = (0..m).all(|i| euclid(&center, &points[i]) <= radius + 1e-9);
            if covers && best.as_ref().is_none_or(|(_, r)| radius < *r) {
                best = Some((center, radius));
            }
        }
    });
    best.expect("some subset always covers")
}

fn brute_meb_subsets(
    points: &[Vec<f64>],
    from: usize,
    cap: usize,
    subset: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if !subset.is_empty() {
        f(subset);
    }
    if subset.len() == cap {
        return;
    }
    for i in from..points.len() {
        subset.push(i);
        brute_meb_subsets(points, i + 1, cap, subset, f);
        subset.pop();
    }
}

/// Center equidistant from the chosen points, constrained to their
/// affine hull; `None` when the points are affinely degenerate.
fn circumcenter(points: &[Vec<f64>], chosen: &[usize]) -> Option<Vec<f64>> {
    let p0 = &points[chosen[0]];
    let k = chosen.len() - 1;
    if k == 0 {
        return Some(p0.clone());
    }
    let rows: Vec<Vec<f64>> = chosen[1..]
        .iter()
        .map(|&i| {
            points[i]
                .iter()
                .zip(p0)
                .map(|(a, b)| a - b)
                .collect::<Vec<f64>>()
        })
        .collect();
    // Solve 2 (A A^T) lambda = diag(A A^T): center = p0 + A^T lambda.
    let mut m = vec![vec![0.0f64; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            m[i][j] = 2.0 * dot(&rows[i], &rows[j]);
        }
        m[i][k] = dot(&rows[i], &rows[i]);
    }
    let lambda = solve_dense(&mut m)?;
    let mut center = p0.clone();
    for (i, row) in rows.iter().enumerate() {
        for (c, x) in center.iter_mut().zip(row) {
            *c += lambda[i] * x;
        }
    }
    Some(center)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Gaussian elimination on an augmented k x (k+1) system; `None` when
/// the matrix is singular at working precision.
fn solve_dense(m: &mut [Vec<f64>]) -> Option<Vec<f64>> {
    let k = m.len();
    for col in 0..k {
        let pivot = (col..k).max_by(|&a, &b| {
            m[a][col]
                .abs()
                .partial_cmp(&m[b][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[pivot][col].abs() < 1e-10 {
            return None;
        }
        m.swap(col, pivot);
        for row in 0..k {
            if row != col {
                let factor = m[row][col] / m[col][col];
                for c in col..=k {
                    m[row][c] -= factor * m[col][c];
                }
            }
        }
    }
    Some((0..k).map(|i| m[i][k] / m[i][i]).collect())
}

/// Independent graded dimension count for a quadratic quotient of
/// F2[x_1..x_k]: monomials ordered lexicographically ascending (the
/// library orders them the other way round), ranks computed by boolean
/// elimination pivoting on the last set position.
pub fn hilbert_oracle(k: usize, relations: &[Vec<(usize, usize)>], maxdeg: usize) -> Vec<u64> {
    let mut dims = Vec::with_capacity(maxdeg + 1);
    for d in 0..=maxdeg {
        let basis = exponent_vectors(k, d);
        let index: std::collections::BTreeMap<Vec<usize>, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let mut rows: Vec<Vec<bool>> = Vec::new();
        if d >= 2 {
            for factor in exponent_vectors(k, d - 2) {
                for rel in relations {
                    let mut row = vec![false; basis.len()];
                    for &(i, j) in rel {
                        let mut e = factor.clone();
                        e[i] += 1;
                        e[j] += 1;
                        row[index[&e]] ^= true;
                    }
                    rows.push(row);
                }
            }
        }
        let rank = boolean_rank(rows);
        dims.push((basis.len() - rank) as u64);
    }
    dims
}

fn exponent_vectors(k: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; k];
    fill_exponents(k, d, 0, &mut current, &mut out);
    out
}

fn fill_exponents(k: usize, left: usize, at: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if at == k {
        if left == 0 {
            out.push(current.clone());
        }
        return;
    }
    for e in 0..=left {
        current[at] = e;
        fill_exponents(k, left - e, at + 1, current, out);
        current[at] = 0;
    }
}

fn boolean_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, Vec::len);
    for col in (0..width).rev() {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col]) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] {
                let (a, b) = if r < rank {
                    let (lo, hi) = rows.split_at_mut(rank);
                    (&mut lo[r], &hi[0])
                } else {
                    let (lo, hi) = rows.split_at_mut(r);
                    (&mut hi[0], &lo[rank])
                };
                for (x, y) in a.iter_mut().zip(b) {
                    *x ^= *y;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Calls `f` once for every simplicial complex on exactly `n` labeled
/// vertices (all singletons present). Complexes are generated as
/// downward-closed families over the subsets of size two and up.
pub fn for_each_complex(n: usize, f: &mut impl FnMut(&SimplicialComplex)) {
    let mut subsets: Vec<u32> = (1u32..(1 << n)).filter(|s| s.count_ones() >= 2).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    let mut chosen = vec![false; subsets.len()];
    let index: std::collections::BTreeMap<u32, usize> = subsets
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i))
        .collect();
    recurse_complexes(n, &subsets, &index, 0, &mut chosen, f);
}

fn recurse_complexes(
    n: usize,
    subsets: &[u32],
    index: &std::collections::BTreeMap<u32, usize>,
    at: usize,
    chosen: &mut Vec<bool>,
    f: &mut impl FnMut(&SimplicialComplex),
) {
    if at == subsets.len() {
        let faces: Vec<Vec<usize>> = subsets
            .iter()
            .enumerate()
            .filter(|&(i, _)| chosen[i])
            .map(|(_, &s)| (0..n).filter(|&v| s >> v & 1 == 1).collect())
            .collect();
        f(&SimplicialComplex::from_faces(n, faces).unwrap());
        return;
    }
    recurse_complexes(n, subsets, index, at + 1, chosen, f);
    // Include subsets[at] only when all its facets of size >= 2 are in.
    let s = subsets[at];
    let closed = (0..32u32)
        .filter(|&v| s >> v & 1 == 1)
        .all(|v| s.count_ones() == 2 || chosen[index[&(s & !(1 << v))]]);
    if closed {
        chosen[at] = true;
        recurse_complexes(n, subsets, index, at + 1, chosen, f);
        chosen[at] = false;
    }
}

/// A freely reduced word with at most `max_letters` unit letters over
/// `num_gens` generators.
pub fn random_word(rng: &mut impl Rng, num_gens: usize, max_letters: usize) -> Word {
    let len = rng.gen_range(0..=max_letters);
    let letters: Vec<(usize, i64)> = (0..len)
        .map(|_| {
            (
                rng.gen_range(0..num_gens),
                if rng.gen_bool(0.5) { 1 } else { -1 },
            )
        })
        .collect();
    Word::new(letters)
}
