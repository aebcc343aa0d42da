//! Simplicial complexes, the flag condition and its obstruction hierarchy,
//! and strict cube complexes with the vertex-link curvature test.
//!
//! A simplicial complex here is a downward-closed family of nonempty sorted
//! vertex lists over `0..n_vertices` (singletons always included). A cube
//! complex is a set of combinatorial cubes — a d-cube is a tuple of `2^d`
//! distinct vertices where the corner at tuple index `i` has coordinate `j`
//! equal to bit `j` of `i` — closed under taking faces, with cubes
//! identified up to the symmetries of the model cube and required to
//! intersect each other in a single common face. The curvature test asks
//! every vertex link to be flag.

use crate::error::{Error, Result};
use crate::util::{bits, maximal_cliques};
use serde::Serialize;
use std::collections::BTreeSet;

/// Flag-style checks use bitmask adjacency and cap out here.
const MAX_FLAG_VERTICES: usize = 64;
/// Combinatorial cubes above this dimension are rejected.
const MAX_CUBE_DIM: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    n_vertices: usize,
    faces: BTreeSet<Vec<usize>>,
}

/// Obstruction witness: peeling the chain of vertices (taking the link at
/// each in turn) leaves a complex where the triangle is three mutually
/// joined vertices spanning no face. All ids refer to the original complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiWitness {
    pub chain: Vec<usize>,
    pub triangle: [usize; 3],
}

impl SimplicialComplex {
    /// Builds the downward closure of the given faces, with every vertex
    /// present as a singleton. Faces must list distinct vertices below
    /// `n_vertices`.
    pub fn from_faces<I>(n_vertices: usize, faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut set = BTreeSet::new();
        for v in 0..n_vertices {
            set.insert(vec![v]);
        }
        let mut queue: Vec<Vec<usize>> = Vec::new();
        for mut face in faces {
            face.sort_unstable();
            let before = face.len();
            face.dedup();
            if face.len() != before {
                return Err(Error::InvalidComplex(format!(
                    "face {face:?} repeats a vertex"
                )));
            }
            if face.is_empty() {
                return Err(Error::InvalidComplex("empty face".into()));
            }
            if *face.last().expect("nonempty") >= n_vertices {
                return Err(Error::InvalidComplex(format!(
                    "face {face:?} exceeds vertex count {n_vertices}"
                )));
            }
            queue.push(face);
        }
        while let Some(face) = queue.pop() {
            if !set.insert(face.clone()) {
                continue;
            }
            if face.len() > 1 {
                for skip in 0..face.len() {
                    let mut sub = face.clone();
                    sub.remove(skip);
                    queue.push(sub);
                }
            }
        }
        Ok(SimplicialComplex { n_vertices, faces: set })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn faces(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.faces.iter()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Largest face size minus one; -1 for the empty complex.
    pub fn dim(&self) -> isize {
        self.faces
            .iter()
            .map(|f| f.len() as isize - 1)
            .max()
            .unwrap_or(-1)
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        let mut sorted = face.to_vec();
        sorted.sort_unstable();
        self.faces.contains(&sorted)
    }

    /// Number of faces of each size: entry k counts faces with k+1 vertices.
    pub fn face_vector(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for f in &self.faces {
            if f.len() > out.len() {
                out.resize(f.len(), 0);
            }
            out[f.len() - 1] += 1;
        }
        out
    }

    fn adjacency(&self) -> Result<Vec<u64>> {
        if self.n_vertices > MAX_FLAG_VERTICES {
            return Err(Error::InvalidComplex(format!(
                "flag checks support at most {MAX_FLAG_VERTICES} vertices, got {}",
                self.n_vertices
            )));
        }
        let mut adj = vec![0u64; self.n_vertices];
        for f in &self.faces {
            if let [u, v] = f[..] {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        Ok(adj)
    }

    /// A complex is flag when every set of pairwise-joined vertices spans a
    /// face; by downward closure it is enough that every maximal clique of
    /// the one-skeleton does.
    pub fn is_flag(&self) -> Result<bool> {
        if self.n_vertices == 0 {
            return Ok(true);
        }
        let adj = self.adjacency()?;
        for clique in maximal_cliques(self.n_vertices, &adj) {
            let verts: Vec<usize> = bits(clique).collect();
            if !self.faces.contains(&verts) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The smallest clique of the one-skeleton spanning no face, preferring
    /// fewer vertices and then lexicographic order; `None` when flag.
    pub fn flag_witness(&self) -> Result<Option<Vec<usize>>> {
        if self.n_vertices == 0 {
            return Ok(None);
        }
        let adj = self.adjacency()?;
        for size in 3..=self.n_vertices {
            let mut any = false;
            let mut cur = Vec::with_capacity(size);
            if let Some(w) = self.first_missing(&adj, size, 0, &mut cur, &mut any) {
                return Ok(Some(w));
            }
            if !any {
                return Ok(None);
            }
        }
        Ok(None)
    }

    fn first_missing(
        &self,
        adj: &[u64],
        size: usize,
        start: usize,
        cur: &mut Vec<usize>,
        any: &mut bool,
    ) -> Option<Vec<usize>> {
        if cur.len() == size {
            *any = true;
            if !self.faces.contains(cur) {
                return Some(cur.clone());
            }
            return None;
        }
        for v in start..self.n_vertices {
            if cur.iter().all(|&u| adj[u] >> v & 1 == 1) {
                cur.push(v);
                let hit = self.first_missing(adj, size, v + 1, cur, any);
                cur.pop();
                if hit.is_some() {
                    return hit;
                }
            }
        }
        None
    }

    /// Link of a vertex, with vertices renumbered `0..k`; the second return
    /// maps link ids back to original ids.
    pub fn link(&self, v: usize) -> (SimplicialComplex, Vec<usize>) {
        assert!(v < self.n_vertices, "vertex {v} out of range");
        let neighbors: Vec<usize> = (0..self.n_vertices)
            .filter(|&u| u != v && self.faces.contains(&sorted_pair(u, v)))
            .collect();
        let position: std::collections::BTreeMap<usize, usize> = neighbors
            .iter()
            .enumerate()
            .map(|(i, &u)| (u, i))
            .collect();
        let mut faces = BTreeSet::new();
        for u in 0..neighbors.len() {
            faces.insert(vec![u]);
        }
        for f in &self.faces {
            if f.binary_search(&v).is_ok() && f.len() > 1 {
                let mapped: Vec<usize> = f
                    .iter()
                    .filter(|&&u| u != v)
                    .map(|u| position[u])
                    .collect();
                faces.insert(mapped);
            }
        }
        (
            SimplicialComplex {
                n_vertices: neighbors.len(),
                faces,
            },
            neighbors,
        )
    }

    /// Witness for the level-`n` obstruction: a chain of `n` vertices whose
    /// iterated link contains an empty triangle. Level 0 is the empty
    /// triangle itself; a complex is flag exactly when no level has a
    /// witness (levels above `n_vertices` are vacuous).
    pub fn phi_witness(&self, level: usize) -> Result<Option<PhiWitness>> {
        if level == 0 {
            let adj = self.adjacency()?;
            for a in 0..self.n_vertices {
                for b in a + 1..self.n_vertices {
                    if adj[a] >> b & 1 == 0 {
                        continue;
                    }
                    for c in b + 1..self.n_vertices {
                        if adj[a] >> c & 1 == 1
                            && adj[b] >> c & 1 == 1
                            && !self.faces.contains(&vec![a, b, c])
                        {
                            return Ok(Some(PhiWitness {
                                chain: Vec::new(),
                                triangle: [a, b, c],
                            }));
                        }
                    }
                }
            }
            return Ok(None);
        }
        for v in 0..self.n_vertices {
            let (link, back) = self.link(v);
            if let Some(w) = link.phi_witness(level - 1)? {
                let mut chain = vec![v];
                chain.extend(w.chain.iter().map(|&u| back[u]));
                let triangle = [
                    back[w.triangle[0]],
                    back[w.triangle[1]],
                    back[w.triangle[2]],
                ];
                return Ok(Some(PhiWitness { chain, triangle }));
            }
        }
        Ok(None)
    }
}

fn sorted_pair(a: usize, b: usize) -> Vec<usize> {
    if a < b {
        vec![a, b]
    } else {
        vec![b, a]
    }
}

/// A strict cube complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeComplex {
    n_vertices: usize,
    /// Canonical cube tuples (minimal under model-cube symmetries),
    /// closed under faces; includes every vertex as a 0-cube.
    cubes: BTreeSet<Vec<usize>>,
}

/// One vertex whose link fails the flag condition, with the smallest
/// non-spanning clique of link vertices (original ids).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkFailure {
    pub vertex: usize,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GromovReport {
    pub all_links_flag: bool,
    pub failures: Vec<LinkFailure>,
}

/// All permutations of `0..d` in lexicographic order.
fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    let mut used = vec![false; d];
    fn rec(d: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for v in 0..d {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(d, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(d, &mut cur, &mut used, &mut out);
    out
}

/// Minimal tuple representing the same cube under coordinate permutations
/// and reflections.
fn canonical_cube(tuple: &[usize]) -> Vec<usize> {
    let d = tuple.len().trailing_zeros() as usize;
    if d == 0 {
        return tuple.to_vec();
    }
    let mut best: Option<Vec<usize>> = None;
    for perm in permutations(d) {
        for flips in 0u32..(1 << d) {
            let mut cand = vec![0usize; tuple.len()];
            for (i, &vert) in tuple.iter().enumerate() {
                let mut target = 0usize;
                for (j, &pj) in perm.iter().enumerate() {
                    let bit = (i >> j) & 1;
                    let bit = bit ^ ((flips >> j) as usize & 1);
                    target |= bit << pj;
                }
                cand[target] = vert;
            }
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.expect("at least the identity symmetry")
}

/// Subfaces of a cube tuple: every assignment of each coordinate to 0, 1,
/// or free, returned as canonical tuples (the full cube included).
fn subfaces(tuple: &[usize]) -> Vec<Vec<usize>> {
    let d = tuple.len().trailing_zeros() as usize;
    let mut out = Vec::new();
    // Ternary counter over coordinates: 0 -> fix 0, 1 -> fix 1, 2 -> free.
    let mut assignment = vec![0u8; d];
    loop {
        let free: Vec<usize> = (0..d).filter(|&j| assignment[j] == 2).collect();
        let fixed: usize = (0..d)
            .filter(|&j| assignment[j] == 1)
            .map(|j| 1usize << j)
            .sum();
        let mut face = Vec::with_capacity(1 << free.len());
        for m in 0..(1usize << free.len()) {
            let mut idx = fixed;
            for (bit_pos, &coord) in free.iter().enumerate() {
                idx |= ((m >> bit_pos) & 1) << coord;
            }
            face.push(tuple[idx]);
        }
        out.push(canonical_cube(&face));
        // Increment the ternary counter.
        let mut j = 0;
        loop {
            if j == d {
                return out;
            }
            if assignment[j] < 2 {
                assignment[j] += 1;
                break;
            }
            assignment[j] = 0;
            j += 1;
        }
    }
}

/// Facets only: fix one coordinate to one value.
fn facets(tuple: &[usize]) -> Vec<Vec<usize>> {
    let d = tuple.len().trailing_zeros() as usize;
    let mut out = Vec::new();
    for j in 0..d {
        for side in 0..2usize {
            let face: Vec<usize> = (0..tuple.len())
                .filter(|i| (i >> j) & 1 == side)
                .map(|i| tuple[i])
                .collect();
            out.push(canonical_cube(&face));
        }
    }
    out
}

impl CubeComplex {
    /// Builds the face closure of the given cells and checks strictness:
    /// every cell has distinct vertices, and any two cells meet in the
    /// vertex set of a single common face (or not at all).
    pub fn new(n_vertices: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut cubes = BTreeSet::new();
        for v in 0..n_vertices {
            cubes.insert(vec![v]);
        }
        let mut queue = Vec::new();
        for cell in cells {
            if cell.is_empty() || !cell.len().is_power_of_two() {
                return Err(Error::InvalidComplex(format!(
                    "cell of size {} is not a power of two",
                    cell.len()
                )));
            }
            let d = cell.len().trailing_zeros() as usize;
            if d > MAX_CUBE_DIM {
                return Err(Error::InvalidComplex(format!(
                    "cube dimension {d} above the supported maximum {MAX_CUBE_DIM}"
                )));
            }
            if cell.iter().any(|&v| v >= n_vertices) {
                return Err(Error::InvalidComplex(format!(
                    "cell {cell:?} exceeds vertex count {n_vertices}"
                )));
            }
            let mut seen = cell.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != cell.len() {
                return Err(Error::InvalidComplex(format!(
                    "cell {cell:?} repeats a vertex"
                )));
            }
            queue.push(canonical_cube(&cell));
        }
        while let Some(cube) = queue.pop() {
            if !cubes.insert(cube.clone()) {
                continue;
            }
            if cube.len() > 1 {
                queue.extend(facets(&cube));
            }
        }
        let complex = CubeComplex { n_vertices, cubes };
        complex.check_intersections()?;
        Ok(complex)
    }

    fn check_intersections(&self) -> Result<()> {
        let list: Vec<&Vec<usize>> = self.cubes.iter().collect();
        for (i, a) in list.iter().enumerate() {
            for b in list.iter().skip(i + 1) {
                let sa: BTreeSet<usize> = a.iter().copied().collect();
                let common: BTreeSet<usize> =
                    b.iter().copied().filter(|v| sa.contains(v)).collect();
                if common.is_empty() {
                    continue;
                }
                let face_a = face_with_vertex_set(a, &common);
                let face_b = face_with_vertex_set(b, &common);
                match (face_a, face_b) {
                    (Some(fa), Some(fb)) if fa == fb => {}
                    _ => {
                        return Err(Error::InvalidComplex(format!(
                            "cells {a:?} and {b:?} meet in {common:?}, \
                             which is not a single common face"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn cubes(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.cubes.iter()
    }

    /// Number of cubes of each dimension; entry d counts d-cubes.
    pub fn cube_vector(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for c in &self.cubes {
            let d = c.len().trailing_zeros() as usize;
            if d + 1 > out.len() {
                out.resize(d + 1, 0);
            }
            out[d] += 1;
        }
        out
    }

    pub fn dim(&self) -> isize {
        self.cube_vector().len() as isize - 1
    }

    /// Link of a vertex as a simplicial complex on its edge-neighbors: each
    /// corner of a d-cube at the vertex contributes the (d-1)-simplex of
    /// its adjacent corners. Returns the link and the original ids of its
    /// vertices.
    pub fn vertex_link(&self, v: usize) -> Result<(SimplicialComplex, Vec<usize>)> {
        if v >= self.n_vertices {
            return Err(Error::InvalidComplex(format!("vertex {v} out of range")));
        }
        let mut neighbors: BTreeSet<usize> = BTreeSet::new();
        for cube in &self.cubes {
            if let [a, b] = cube[..] {
                if a == v {
                    neighbors.insert(b);
                } else if b == v {
                    neighbors.insert(a);
                }
            }
        }
        let ids: Vec<usize> = neighbors.iter().copied().collect();
        let position: std::collections::BTreeMap<usize, usize> =
            ids.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let mut faces: Vec<Vec<usize>> = Vec::new();
        for cube in &self.cubes {
            let d = cube.len().trailing_zeros() as usize;
            if d == 0 {
                continue;
            }
            for (i, &corner) in cube.iter().enumerate() {
                if corner != v {
                    continue;
                }
                let simplex: Vec<usize> = (0..d)
                    .map(|j| position[&cube[i ^ (1 << j)]])
                    .collect();
                faces.push(simplex);
            }
        }
        let link = SimplicialComplex::from_faces(ids.len(), faces)?;
        Ok((link, ids))
    }

    /// The locally-flag curvature test: every vertex link must be a flag
    /// complex. Failures carry the smallest non-spanning clique per vertex.
    pub fn gromov_report(&self) -> Result<GromovReport> {
        let mut failures = Vec::new();
        for v in 0..self.n_vertices {
            let (link, ids) = self.vertex_link(v)?;
            if !link.is_flag()? {
                let witness = link
                    .flag_witness()?
                    .expect("non-flag link has a witness")
                    .into_iter()
                    .map(|u| ids[u])
                    .collect();
                failures.push(LinkFailure { vertex: v, witness });
            }
        }
        Ok(GromovReport {
            all_links_flag: failures.is_empty(),
            failures,
        })
    }
}

/// The subface of `tuple` whose vertex set is exactly `want`, if any.
fn face_with_vertex_set(tuple: &[usize], want: &BTreeSet<usize>) -> Option<Vec<usize>> {
    subfaces(tuple)
        .into_iter()
        .find(|f| f.len() == want.len() && f.iter().all(|v| want.contains(v)))
}
