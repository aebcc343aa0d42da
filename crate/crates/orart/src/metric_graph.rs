//! Finite metric graphs: connected graphs with positive edge lengths,
//! their path metric on vertices *and* edge-interior points, midpoint
//! enumeration, canonical geodesics, and sampled curvature-bound tests.
//!
//! Points are either vertices or interior points of a specific edge at a
//! fractional position `t` in `(0, 1)` measured from the edge's first
//! endpoint. Parallel edges are allowed (they matter: a two-edge multigraph
//! is a circle); self-loops are not, since every loop can be modeled by
//! subdividing it with an extra vertex.

use crate::error::{Error, Result};
use crate::model_spaces::{
    self, comparison_point, comparison_triangle, Kappa, ModelPoint, TriangleSides,
};
use crate::report::{CatReport, DistanceOracle};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::collections::BinaryHeap;

/// Relative tolerance used when matching path lengths and midpoint
/// equations; scaled by (1 + distance) at each use.
const GEOM_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeData {
    pub u: usize,
    pub v: usize,
    pub len: f64,
}

/// A point of the geometric realization of a metric graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "on", rename_all = "snake_case")]
pub enum GraphPoint {
    Vertex { vertex: usize },
    Edge { edge: usize, t: f64 },
}

impl GraphPoint {
    fn sort_key(&self) -> (u8, usize, f64) {
        match *self {
            GraphPoint::Vertex { vertex } => (0, vertex, 0.0),
            GraphPoint::Edge { edge, t } => (1, edge, t),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MetricGraph {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: Vec<EdgeData>,
    /// Incident edge ids per vertex, ascending.
    incident: Vec<Vec<usize>>,
    /// All-pairs shortest vertex-to-vertex distances.
    dist: Vec<Vec<f64>>,
}

#[derive(PartialEq)]
struct HeapEntry {
    d: f64,
    v: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we want smallest distance.
        other
            .d
            .total_cmp(&self.d)
            .then_with(|| other.v.cmp(&self.v))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl MetricGraph {
    /// Build a graph from vertex names and `(from, to, length)` edges.
    /// Names must be unique, lengths positive and finite, and the resulting
    /// graph connected.
    pub fn new(vertices: Vec<String>, edge_list: Vec<(String, String, f64)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyInput("vertex list"));
        }
        let mut index = BTreeMap::new();
        for (i, name) in vertices.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidGraph("empty vertex name".into()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex {name:?}")));
            }
        }
        let mut edges = Vec::with_capacity(edge_list.len());
        for (a, b, len) in &edge_list {
            let &u = index.get(a).ok_or_else(|| Error::UnknownVertex(a.clone()))?;
            let &v = index.get(b).ok_or_else(|| Error::UnknownVertex(b.clone()))?;
            if u == v {
                return Err(Error::InvalidGraph(format!(
                    "self-loop at {a:?}; subdivide loops with an extra vertex"
                )));
            }
            if !(len.is_finite() && *len > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "edge {a:?} -- {b:?} has nonpositive length {len}"
                )));
            }
            edges.push(EdgeData { u, v, len: *len });
        }
        let mut incident = vec![Vec::new(); vertices.len()];
        for (eid, e) in edges.iter().enumerate() {
            incident[e.u].push(eid);
            incident[e.v].push(eid);
        }
        let mut graph = MetricGraph {
            names: vertices,
            index,
            edges,
            incident,
            dist: Vec::new(),
        };
        graph.dist = (0..graph.names.len())
            .map(|src| graph.dijkstra(src))
            .collect();
        if graph.dist[0].iter().any(|d| !d.is_finite()) {
            return Err(Error::Disconnected);
        }
        Ok(graph)
    }

    fn dijkstra(&self, src: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.names.len()];
        dist[src] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(HeapEntry { d: 0.0, v: src });
        while let Some(HeapEntry { d, v }) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &eid in &self.incident[v] {
                let e = &self.edges[eid];
                let w = if e.u == v { e.v } else { e.u };
                let nd = d + e.len;
                if nd < dist[w] {
                    dist[w] = nd;
                    heap.push(HeapEntry { d: nd, v: w });
                }
            }
        }
        dist
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn edge_data(&self, edge: usize) -> &EdgeData {
        &self.edges[edge]
    }

    /// The point at the named vertex.
    pub fn vertex(&self, name: &str) -> Result<GraphPoint> {
        let &v = self
            .index
            .get(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))?;
        Ok(GraphPoint::Vertex { vertex: v })
    }

    /// Lowest-numbered edge joining the two named vertices, in either
    /// orientation.
    pub fn edge_between(&self, a: &str, b: &str) -> Result<usize> {
        let &u = self
            .index
            .get(a)
            .ok_or_else(|| Error::UnknownVertex(a.to_string()))?;
        let &v = self
            .index
            .get(b)
            .ok_or_else(|| Error::UnknownVertex(b.to_string()))?;
        self.incident[u]
            .iter()
            .copied()
            .find(|&eid| {
                let e = &self.edges[eid];
                (e.u, e.v) == (u, v) || (e.u, e.v) == (v, u)
            })
            .ok_or_else(|| Error::InvalidGraph(format!("no edge {a:?} -- {b:?}")))
    }

    /// The point at fraction `t` along `edge` (from its first endpoint);
    /// `t` of exactly 0 or 1 normalizes to the endpoint vertex.
    pub fn point_on_edge(&self, edge: usize, t: f64) -> Result<GraphPoint> {
        if edge >= self.edges.len() {
            return Err(Error::InvalidGraph(format!("edge index {edge} out of range")));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("edge parameter {t} out of [0, 1]")));
        }
        if t == 0.0 {
            Ok(GraphPoint::Vertex { vertex: self.edges[edge].u })
        } else if t == 1.0 {
            Ok(GraphPoint::Vertex { vertex: self.edges[edge].v })
        } else {
            Ok(GraphPoint::Edge { edge, t })
        }
    }

    pub fn label_point(&self, p: &GraphPoint) -> String {
        match *p {
            GraphPoint::Vertex { vertex } => self.names[vertex].clone(),
            GraphPoint::Edge { edge, t } => {
                let e = &self.edges[edge];
                format!("({}--{})@{:.6}", self.names[e.u], self.names[e.v], t)
            }
        }
    }

    fn check_point(&self, p: &GraphPoint) {
        match *p {
            GraphPoint::Vertex { vertex } => assert!(vertex < self.names.len()),
            GraphPoint::Edge { edge, t } => {
                assert!(edge < self.edges.len());
                assert!(t > 0.0 && t < 1.0, "interior parameter expected, got {t}");
            }
        }
    }

    /// Exits from a point: `(vertex, cost to reach it)`. A vertex exits to
    /// itself at cost zero; an interior point exits to both endpoints.
    fn exits(&self, p: &GraphPoint) -> Vec<(usize, f64)> {
        match *p {
            GraphPoint::Vertex { vertex } => vec![(vertex, 0.0)],
            GraphPoint::Edge { edge, t } => {
                let e = &self.edges[edge];
                vec![(e.u, t * e.len), (e.v, (1.0 - t) * e.len)]
            }
        }
    }

    fn dist_point_vertex(&self, p: &GraphPoint, w: usize) -> f64 {
        self.exits(p)
            .into_iter()
            .map(|(x, cx)| cx + self.dist[x][w])
            .fold(f64::INFINITY, f64::min)
    }

    /// Path-metric distance between any two points.
    pub fn distance(&self, p: &GraphPoint, q: &GraphPoint) -> f64 {
        self.check_point(p);
        self.check_point(q);
        let mut best = f64::INFINITY;
        for (x, cx) in self.exits(p) {
            for (y, cy) in self.exits(q) {
                best = best.min(cx + self.dist[x][y] + cy);
            }
        }
        if let (GraphPoint::Edge { edge: e1, t: t1 }, GraphPoint::Edge { edge: e2, t: t2 }) =
            (p, q)
        {
            if e1 == e2 {
                best = best.min((t1 - t2).abs() * self.edges[*e1].len);
            }
        }
        best
    }

    /// Every midpoint of `(p, q)`: points `m` with
    /// `d(p,m) = d(q,m) = d(p,q)/2`. The list is finite because the
    /// distance functions are piecewise linear with slopes of magnitude
    /// one, and it is returned in canonical order (vertices first).
    pub fn midpoints(&self, p: &GraphPoint, q: &GraphPoint) -> Vec<GraphPoint> {
        let d = self.distance(p, q);
        let h = d / 2.0;
        let tol = GEOM_EPS * (1.0 + d);
        let mut found: Vec<GraphPoint> = Vec::new();
        for w in 0..self.names.len() {
            if (self.dist_point_vertex(p, w) - h).abs() <= tol
                && (self.dist_point_vertex(q, w) - h).abs() <= tol
            {
                found.push(GraphPoint::Vertex { vertex: w });
            }
        }
        for (eid, e) in self.edges.iter().enumerate() {
            let mut cands: Vec<f64> = Vec::new();
            for endpoint_ref in [p, q] {
                // Crossing points of the two linear pieces with level h,
                // entering through either endpoint of this edge.
                let du = self.dist_point_vertex(endpoint_ref, e.u);
                let dv = self.dist_point_vertex(endpoint_ref, e.v);
                cands.push((h - du) / e.len);
                cands.push(1.0 - (h - dv) / e.len);
                // Same-edge direct paths.
                if let GraphPoint::Edge { edge, t } = endpoint_ref {
                    if *edge == eid {
                        cands.push(t + h / e.len);
                        cands.push(t - h / e.len);
                    }
                }
            }
            let t_eps = tol / e.len;
            cands.retain(|t| *t > t_eps && *t < 1.0 - t_eps);
            cands.sort_by(f64::total_cmp);
            cands.dedup_by(|a, b| (*a - *b).abs() <= t_eps);
            for t in cands {
                let m = GraphPoint::Edge { edge: eid, t };
                if (self.distance(p, &m) - h).abs() <= tol
                    && (self.distance(q, &m) - h).abs() <= tol
                {
                    found.push(m);
                }
            }
        }
        found.sort_by(|a, b| {
            let (ka, ia, ta) = a.sort_key();
            let (kb, ib, tb) = b.sort_key();
            ka.cmp(&kb).then(ia.cmp(&ib)).then(ta.total_cmp(&tb))
        });
        found
    }

    /// Shortest entry cost into `q` from vertex `x`.
    fn min_entry(&self, x: usize, entries: &[(usize, f64)]) -> f64 {
        entries
            .iter()
            .map(|&(y, cy)| self.dist[x][y] + cy)
            .fold(f64::INFINITY, f64::min)
    }

    /// The canonical geodesic from `p` to `q`: among all shortest paths,
    /// the one whose vertex-name sequence is lexicographically least
    /// (shorter sequences beat their extensions). Parallel edges of equal
    /// length are resolved toward the lower edge id.
    pub fn geodesic(&self, p: &GraphPoint, q: &GraphPoint) -> Result<Geodesic> {
        self.check_point(p);
        self.check_point(q);
        let total = self.distance(p, q);
        let tol = GEOM_EPS * (1.0 + total);
        if total == 0.0 {
            return Ok(Geodesic {
                start: *p,
                end: *q,
                via: Vec::new(),
                legs: Vec::new(),
                total,
            });
        }
        // Direct same-edge segment: the empty vertex sequence, which beats
        // every alternative when it realizes the distance.
        if let (GraphPoint::Edge { edge: e1, t: t1 }, GraphPoint::Edge { edge: e2, t: t2 }) =
            (p, q)
        {
            if e1 == e2 && ((t1 - t2).abs() * self.edges[*e1].len - total).abs() <= tol {
                return Ok(Geodesic {
                    start: *p,
                    end: *q,
                    via: Vec::new(),
                    legs: vec![GeodesicLeg {
                        edge: *e1,
                        from_t: *t1,
                        to_t: *t2,
                        len: total,
                    }],
                    total,
                });
            }
        }
        let entries = self.exits(q);
        // First vertex: cheapest completion through each exit, ties broken
        // by name.
        let mut first: Option<(usize, f64)> = None;
        for (x, cx) in self.exits(p) {
            if (cx + self.min_entry(x, &entries) - total).abs() <= tol {
                let better = match first {
                    None => true,
                    Some((bx, _)) => self.names[x] < self.names[bx],
                };
                if better {
                    first = Some((x, cx));
                }
            }
        }
        let (mut at, mut consumed) =
            first.ok_or_else(|| Error::NotGeodesic("no shortest entry vertex".into()))?;
        let mut via = vec![at];
        let mut legs: Vec<GeodesicLeg> = Vec::new();
        if let GraphPoint::Edge { edge, t } = p {
            let e = &self.edges[*edge];
            let to_t = if at == e.u { 0.0 } else { 1.0 };
            legs.push(GeodesicLeg {
                edge: *edge,
                from_t: *t,
                to_t,
                len: consumed,
            });
        }
        let cap = self.names.len() + 2;
        for _ in 0..cap {
            // Terminate when q is reachable directly from `at`; ending the
            // vertex sequence beats extending it in the lexicographic order.
            if let Some(&(_, cy)) = entries
                .iter()
                .find(|&&(y, cy)| y == at && (consumed + cy - total).abs() <= tol)
            {
                if let GraphPoint::Edge { edge, t } = q {
                    let e = &self.edges[*edge];
                    let from_t = if at == e.u { 0.0 } else { 1.0 };
                    legs.push(GeodesicLeg {
                        edge: *edge,
                        from_t,
                        to_t: *t,
                        len: cy,
                    });
                }
                return Ok(Geodesic {
                    start: *p,
                    end: *q,
                    via,
                    legs,
                    total,
                });
            }
            // Otherwise advance to the lex-least viable neighbor.
            let mut step: Option<(usize, usize)> = None; // (next vertex, edge id)
            for &eid in &self.incident[at] {
                let e = &self.edges[eid];
                let w = if e.u == at { e.v } else { e.u };
                if (consumed + e.len + self.min_entry(w, &entries) - total).abs() <= tol {
                    let better = match step {
                        None => true,
                        Some((bw, beid)) => {
                            match self.names[w].cmp(&self.names[bw]) {
                                Ordering::Less => true,
                                Ordering::Greater => false,
                                Ordering::Equal => {
                                    // Same vertex through a parallel edge.
                                    let be = &self.edges[beid];
                                    (e.len, eid) < (be.len, beid)
                                }
                            }
                        }
                    };
                    if better {
                        step = Some((w, eid));
                    }
                }
            }
            let (w, eid) =
                step.ok_or_else(|| Error::NotGeodesic("dead end on a shortest path".into()))?;
            let e = &self.edges[eid];
            let (from_t, to_t) = if e.u == at { (0.0, 1.0) } else { (1.0, 0.0) };
            legs.push(GeodesicLeg {
                edge: eid,
                from_t,
                to_t,
                len: e.len,
            });
            consumed += e.len;
            at = w;
            via.push(w);
        }
        Err(Error::NotGeodesic(
            "geodesic reconstruction exceeded the vertex budget".into(),
        ))
    }

    /// Vertex names visited by a geodesic, in order.
    pub fn via_names(&self, g: &Geodesic) -> Vec<String> {
        g.via.iter().map(|&v| self.names[v].clone()).collect()
    }

    fn leg_point(&self, leg: &GeodesicLeg, frac: f64) -> GraphPoint {
        let t = leg.from_t + frac * (leg.to_t - leg.from_t);
        let e = &self.edges[leg.edge];
        if t < 1e-12 {
            GraphPoint::Vertex { vertex: e.u }
        } else if t > 1.0 - 1e-12 {
            GraphPoint::Vertex { vertex: e.v }
        } else {
            GraphPoint::Edge { edge: leg.edge, t }
        }
    }

    /// Point at arclength `s` from the start of a geodesic.
    pub fn point_along(&self, g: &Geodesic, s: f64) -> Result<GraphPoint> {
        let tol = GEOM_EPS * (1.0 + g.total);
        if s < -tol || s > g.total + tol {
            return Err(Error::Domain(format!(
                "arclength {s} out of [0, {}]",
                g.total
            )));
        }
        let mut s = s.clamp(0.0, g.total);
        if g.legs.is_empty() {
            return Ok(g.start);
        }
        for leg in &g.legs {
            if s <= leg.len {
                let frac = if leg.len == 0.0 { 0.0 } else { s / leg.len };
                return Ok(self.leg_point(leg, frac));
            }
            s -= leg.len;
        }
        let last = g.legs.last().expect("nonempty legs");
        Ok(self.leg_point(last, 1.0))
    }

    /// Sampled comparison test for one geodesic triangle. Geodesics are the
    /// canonical ones; each side is sampled at `density + 1` evenly spaced
    /// arclengths, and all cross-side pairs are compared against the model
    /// triangle of curvature `kappa`.
    pub fn triangle_report(
        &self,
        kappa: Kappa,
        corners: (&GraphPoint, &GraphPoint, &GraphPoint),
        density: usize,
        tol: f64,
    ) -> Result<CatReport> {
        let mut report = CatReport::new("triangle-comparison", tol);
        self.check_one_triangle(&mut report, kappa, corners, density)?;
        Ok(report.finish())
    }

    /// Sampled comparison test over every unordered triple of distinct
    /// vertices.
    pub fn cat_test(&self, kappa: Kappa, density: usize, tol: f64) -> Result<CatReport> {
        let mut report = CatReport::new("triangle-comparison", tol);
        let n = self.names.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (p, q, r) = (
                        GraphPoint::Vertex { vertex: i },
                        GraphPoint::Vertex { vertex: j },
                        GraphPoint::Vertex { vertex: k },
                    );
                    self.check_one_triangle(&mut report, kappa, (&p, &q, &r), density)?;
                }
            }
        }
        Ok(report.finish())
    }

    fn check_one_triangle(
        &self,
        report: &mut CatReport,
        kappa: Kappa,
        (p, q, r): (&GraphPoint, &GraphPoint, &GraphPoint),
        density: usize,
    ) -> Result<()> {
        if density == 0 {
            return Err(Error::Domain("sampling density must be at least 1".into()));
        }
        let a = self.distance(p, q);
        let b = self.distance(p, r);
        let c = self.distance(q, r);
        let sides = TriangleSides::new(a, b, c)?;
        if kappa.is_spherical() && sides.perimeter() >= 2.0 * kappa.diameter() {
            report.skipped += 1;
            return Ok(());
        }
        let tri = comparison_triangle(kappa, &sides)?;
        // Each side: (endpoints in the graph, model side indices, length).
        let side_specs: [((&GraphPoint, &GraphPoint), (usize, usize), f64); 3] = [
            ((p, q), (0, 1), a),
            ((p, r), (0, 2), b),
            ((q, r), (1, 2), c),
        ];
        let mut samples: Vec<Vec<(GraphPoint, ModelPoint)>> = Vec::with_capacity(3);
        for &((x, y), (mi, mj), len) in &side_specs {
            let geo = self.geodesic(x, y)?;
            let mut side_samples = Vec::with_capacity(density + 1);
            for k in 0..=density {
                let s = len * k as f64 / density as f64;
                let gp = self.point_along(&geo, s)?;
                let mp = comparison_point(&tri, (mi, mj), s.min(len))?;
                side_samples.push((gp, mp));
            }
            samples.push(side_samples);
        }
        for s1 in 0..3 {
            for s2 in s1 + 1..3 {
                for (gx, mx) in &samples[s1] {
                    for (gy, my) in &samples[s2] {
                        let measured = self.distance(gx, gy);
                        let model = model_spaces::distance(mx, my)?;
                        report.record(
                            vec![self.label_point(gx), self.label_point(gy)],
                            model - measured,
                        );
                    }
                }
            }
        }
        Ok(())
    }

    /// Convexity of the distance between two geodesics, sampled at
    /// `density + 1` matched parameters: for indices i < j of equal parity
    /// the value at (i+j)/2 must not exceed the average of the values at i
    /// and j.
    pub fn convexity_report(
        &self,
        g1: &Geodesic,
        g2: &Geodesic,
        density: usize,
        tol: f64,
    ) -> Result<CatReport> {
        if density < 2 {
            return Err(Error::Domain(
                "convexity sampling needs density at least 2".into(),
            ));
        }
        let mut report = CatReport::new("convexity", tol);
        let mut values = Vec::with_capacity(density + 1);
        let mut points = Vec::with_capacity(density + 1);
        for k in 0..=density {
            let f = k as f64 / density as f64;
            let x = self.point_along(g1, f * g1.total)?;
            let y = self.point_along(g2, f * g2.total)?;
            values.push(self.distance(&x, &y));
            points.push((x, y));
        }
        for i in 0..=density {
            for j in (i + 2..=density).step_by(2) {
                let m = (i + j) / 2;
                let slack = (values[i] + values[j]) / 2.0 - values[m];
                report.record(
                    vec![
                        self.label_point(&points[m].0),
                        self.label_point(&points[m].1),
                        format!("chord {i}..{j} of {density}"),
                    ],
                    slack,
                );
            }
        }
        Ok(report.finish())
    }
}

impl DistanceOracle for MetricGraph {
    type Point = GraphPoint;

    fn distance(&self, a: &GraphPoint, b: &GraphPoint) -> f64 {
        MetricGraph::distance(self, a, b)
    }

    fn midpoints(&self, a: &GraphPoint, b: &GraphPoint) -> Vec<GraphPoint> {
        MetricGraph::midpoints(self, a, b)
    }

    fn label(&self, p: &GraphPoint) -> String {
        self.label_point(p)
    }
}

/// One edge-confined segment of a geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicLeg {
    pub edge: usize,
    pub from_t: f64,
    pub to_t: f64,
    pub len: f64,
}

/// A shortest path with a concrete parametrization by arclength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    pub start: GraphPoint,
    pub end: GraphPoint,
    /// Vertices visited, in order (empty for a single-edge segment).
    pub via: Vec<usize>,
    pub legs: Vec<GeodesicLeg>,
    pub total: f64,
}

impl Geodesic {
    pub fn length(&self) -> f64 {
        self.total
    }
}
