//! Finite simplicial trees with positive real edge lengths.
//!
//! A [`TreePoint`] is either a vertex or an interior position on an edge;
//! offsets `0` and `len` canonicalize to the corresponding vertex, so every
//! point has a unique representation. Distances and geodesics are computed by
//! explicit path walks; tree sizes here are desk-scale.

mod subtree;

pub use subtree::Subtree;
pub(crate) use subtree::SubtreeBuilder;

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::GEOM_TOL;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: f64,
}

/// A point of the tree: a vertex, or an interior position on an edge measured
/// from the edge's `u` endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TreePoint {
    Vertex(usize),
    OnEdge { edge: usize, offset: f64 },
}

/// A directed piece of a geodesic: the part of `edge` from offset `from` to
/// offset `to` (either direction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSegment {
    pub edge: usize,
    pub from: f64,
    pub to: f64,
}

impl GeodesicSegment {
    pub fn len(&self) -> f64 {
        (self.to - self.from).abs()
    }
}

/// Finite simplicial tree: connected, acyclic, every edge length positive.
#[derive(Debug, Clone)]
pub struct Tree {
    labels: Vec<String>,
    label_index: HashMap<String, usize>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>, // (edge id, neighbor vertex)
}

impl Tree {
    /// Build a tree from vertex labels and `(u, v, len)` edges given by label.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S, f64)]) -> Result<Self> {
        let labels: Vec<String> = vertices.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut label_index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if label_index.insert(l.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate vertex id {l:?}")));
            }
        }
        if labels.is_empty() {
            return Err(Error::invalid("tree needs at least one vertex"));
        }
        if edges.len() + 1 != labels.len() {
            return Err(Error::invalid(format!(
                "{} edges for {} vertices; a tree needs exactly |V|-1",
                edges.len(),
                labels.len()
            )));
        }
        let mut es = Vec::with_capacity(edges.len());
        let mut adj = vec![Vec::new(); labels.len()];
        for (u, v, len) in edges {
            let iu = *label_index
                .get(u.as_ref())
                .ok_or_else(|| Error::invalid(format!("unknown vertex id {:?}", u.as_ref())))?;
            let iv = *label_index
                .get(v.as_ref())
                .ok_or_else(|| Error::invalid(format!("unknown vertex id {:?}", v.as_ref())))?;
            if iu == iv {
                return Err(Error::invalid("self-loop edge"));
            }
            if !(len.is_finite() && *len > 0.0) {
                return Err(Error::invalid(format!("edge length {len} must be positive and finite")));
            }
            let id = es.len();
            es.push(Edge { u: iu, v: iv, len: *len });
            adj[iu].push((id, iv));
            adj[iv].push((id, iu));
        }
        let tree = Tree { labels, label_index, edges: es, adj };
        // |E| = |V|-1 plus connectivity rules out cycles.
        let seen = tree.vertex_distances(0);
        if seen.iter().any(|d| !d.is_finite()) {
            return Err(Error::invalid("edge list does not connect all vertices"));
        }
        Ok(tree)
    }

    /// Convenience constructor with `0..n` vertex labels.
    pub fn from_indexed_edges(n_vertices: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let labels: Vec<String> = (0..n_vertices).map(|i| i.to_string()).collect();
        let edges: Vec<(String, String, f64)> = edges
            .iter()
            .map(|&(u, v, l)| (u.to_string(), v.to_string(), l))
            .collect();
        Tree::new(&labels, &edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_len(&self, e: usize) -> f64 {
        self.edges[e].len
    }

    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        (self.edges[e].u, self.edges[e].v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Incident `(edge id, neighbor vertex)` pairs of a vertex.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.label_index.get(label).copied()
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.len).sum()
    }

    /// Snap offsets within tolerance of an endpoint to the vertex and
    /// validate ids and ranges.
    pub fn canonical(&self, p: &TreePoint) -> Result<TreePoint> {
        match *p {
            TreePoint::Vertex(v) => {
                if v >= self.labels.len() {
                    return Err(Error::invalid(format!("vertex index {v} out of range")));
                }
                Ok(TreePoint::Vertex(v))
            }
            TreePoint::OnEdge { edge, offset } => {
                if edge >= self.edges.len() {
                    return Err(Error::invalid(format!("edge index {edge} out of range")));
                }
                let Edge { u, v, len } = self.edges[edge];
                if !offset.is_finite() || offset < -GEOM_TOL || offset > len + GEOM_TOL {
                    return Err(Error::invalid(format!(
                        "offset {offset} outside [0, {len}] on edge {edge}"
                    )));
                }
                if offset <= GEOM_TOL {
                    Ok(TreePoint::Vertex(u))
                } else if offset >= len - GEOM_TOL {
                    Ok(TreePoint::Vertex(v))
                } else {
                    Ok(TreePoint::OnEdge { edge, offset })
                }
            }
        }
    }

    /// Equality of canonical points within geometric tolerance.
    pub fn points_eq(&self, p: &TreePoint, q: &TreePoint) -> bool {
        match (*p, *q) {
            (TreePoint::Vertex(a), TreePoint::Vertex(b)) => a == b,
            (
                TreePoint::OnEdge { edge: e1, offset: o1 },
                TreePoint::OnEdge { edge: e2, offset: o2 },
            ) => e1 == e2 && (o1 - o2).abs() <= GEOM_TOL,
            _ => false,
        }
    }

    /// Distances from a vertex to all vertices (unreachable = +inf).
    pub fn vertex_distances(&self, root: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.labels.len()];
        dist[root] = 0.0;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &(e, y) in &self.adj[x] {
                if dist[y].is_infinite() {
                    dist[y] = dist[x] + self.edges[e].len;
                    stack.push(y);
                }
            }
        }
        dist
    }

    /// Parent vertex and connecting edge of every vertex in the DFS tree
    /// rooted at `root`.
    fn parents(&self, root: usize) -> Vec<Option<(usize, usize)>> {
        let mut par = vec![None; self.labels.len()];
        let mut seen = vec![false; self.labels.len()];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &(e, y) in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    par[y] = Some((x, e));
                    stack.push(y);
                }
            }
        }
        par
    }

    /// Distance field from an arbitrary point: distance to every vertex.
    pub fn distances_from_point(&self, p: &TreePoint) -> PointDistances {
        let p = self.canonical(p).expect("canonical point");
        let vdist = match p {
            TreePoint::Vertex(v) => self.vertex_distances(v),
            TreePoint::OnEdge { edge, offset } => {
                let Edge { u, v, len } = self.edges[edge];
                let du = self.vertex_distances(u);
                let dv = self.vertex_distances(v);
                du.iter()
                    .zip(&dv)
                    .map(|(&a, &b)| (a + offset).min(b + (len - offset)))
                    .collect()
            }
        };
        PointDistances { src: p, vdist }
    }

    /// Length of the unique geodesic between two points.
    pub fn distance(&self, p: &TreePoint, q: &TreePoint) -> Result<f64> {
        let p = self.canonical(p)?;
        let q = self.canonical(q)?;
        Ok(self.distances_from_point(&p).to_point(self, &q))
    }

    /// The geodesic from `p` to `q` as directed edge pieces. Empty when
    /// `p = q`; consecutive pieces share endpoints and the total length equals
    /// `distance(p, q)`.
    pub fn geodesic(&self, p: &TreePoint, q: &TreePoint) -> Result<Vec<GeodesicSegment>> {
        let p = self.canonical(p)?;
        let q = self.canonical(q)?;
        if self.points_eq(&p, &q) {
            return Ok(Vec::new());
        }
        // Both strictly inside the same edge: a single piece.
        if let (TreePoint::OnEdge { edge: e1, offset: o1 }, TreePoint::OnEdge { edge: e2, offset: o2 }) =
            (p, q)
        {
            if e1 == e2 {
                return Ok(vec![GeodesicSegment { edge: e1, from: o1, to: o2 }]);
            }
        }

        // Exit options: (exit vertex, lead-in cost, lead segment).
        let exits = |pt: &TreePoint, outgoing: bool| -> Vec<(usize, f64, Option<GeodesicSegment>)> {
            match *pt {
                TreePoint::Vertex(v) => vec![(v, 0.0, None)],
                TreePoint::OnEdge { edge, offset } => {
                    let Edge { u, v, len } = self.edges[edge];
                    let seg = |a, b| GeodesicSegment { edge, from: a, to: b };
                    if outgoing {
                        vec![
                            (u, offset, Some(seg(offset, 0.0))),
                            (v, len - offset, Some(seg(offset, len))),
                        ]
                    } else {
                        vec![
                            (u, offset, Some(seg(0.0, offset))),
                            (v, len - offset, Some(seg(len, offset))),
                        ]
                    }
                }
            }
        };
        let from_p = exits(&p, true);
        let into_q = exits(&q, false);

        let mut best: Option<(f64, usize, usize)> = None;
        for (i, &(a, ca, _)) in from_p.iter().enumerate() {
            let da = self.vertex_distances(a);
            for (j, &(b, cb, _)) in into_q.iter().enumerate() {
                let total = ca + da[b] + cb;
                if best.map_or(true, |(t, ..)| total < t) {
                    best = Some((total, i, j));
                }
            }
        }
        let (_, i, j) = best.unwrap();
        let (a, _, lead_in) = from_p[i];
        let (b, _, lead_out) = into_q[j];

        let mut segs = Vec::new();
        if let Some(s) = lead_in {
            segs.push(s);
        }
        // Vertex path a -> b via parents of the DFS rooted at b.
        let par = self.parents(b);
        let mut x = a;
        while x != b {
            let (nx, e) = par[x].expect("connected tree");
            let Edge { u, len, .. } = self.edges[e];
            if u == x {
                segs.push(GeodesicSegment { edge: e, from: 0.0, to: len });
            } else {
                segs.push(GeodesicSegment { edge: e, from: len, to: 0.0 });
            }
            x = nx;
        }
        if let Some(s) = lead_out {
            segs.push(s);
        }
        Ok(segs)
    }

    /// The point at arc length `s` from `p` along the geodesic to `q`.
    /// Clamps `s` to `[0, d(p, q)]`.
    pub fn point_along(&self, p: &TreePoint, q: &TreePoint, s: f64) -> Result<TreePoint> {
        if s <= 0.0 {
            return self.canonical(p);
        }
        let segs = self.geodesic(p, q)?;
        let mut left = s;
        for seg in &segs {
            let l = seg.len();
            if left <= l {
                let dir = if seg.to >= seg.from { 1.0 } else { -1.0 };
                return self.canonical(&TreePoint::OnEdge {
                    edge: seg.edge,
                    offset: seg.from + dir * left,
                });
            }
            left -= l;
        }
        self.canonical(q)
    }

    /// Closures of the connected components of `T \ {z}`: each returned
    /// subtree is `{z} ∪ T'`. Their count is the local degree of `z` (the
    /// vertex degree, or 2 for an interior edge point).
    pub fn components_at(&self, z: &TreePoint) -> Result<Vec<Subtree>> {
        let z = self.canonical(z)?;
        // Flood from `anchor`, never crossing `blocked_edge`. In a tree this
        // visits exactly one component.
        let flood = |b: &mut SubtreeBuilder, anchor: usize, blocked_edge: usize| {
            let mut seen = vec![false; self.labels.len()];
            seen[anchor] = true;
            b.add_vertex(anchor);
            let mut stack = vec![anchor];
            while let Some(x) = stack.pop() {
                for &(e, y) in &self.adj[x] {
                    if e != blocked_edge && !seen[y] {
                        seen[y] = true;
                        b.add_vertex(y);
                        b.add_full_edge(self, e);
                        stack.push(y);
                    }
                }
            }
        };
        match z {
            TreePoint::Vertex(v) => {
                let mut out = Vec::new();
                for &(e0, nbr) in &self.adj[v] {
                    let mut b = SubtreeBuilder::new();
                    b.add_vertex(v);
                    b.add_full_edge(self, e0);
                    flood(&mut b, nbr, e0);
                    out.push(b.finish(self));
                }
                Ok(out)
            }
            TreePoint::OnEdge { edge, offset } => {
                let Edge { u, v, len } = self.edges[edge];
                let mut out = Vec::new();
                for (anchor, lo, hi) in [(u, 0.0, offset), (v, offset, len)] {
                    let mut b = SubtreeBuilder::new();
                    b.add_segment(self, edge, lo, hi);
                    flood(&mut b, anchor, edge);
                    out.push(b.finish(self));
                }
                Ok(out)
            }
        }
    }

    /// Closed metric ball of radius `r` about `c`, as a subtree.
    pub fn ball(&self, c: &TreePoint, r: f64) -> Result<Subtree> {
        if r < 0.0 || !r.is_finite() {
            return Err(Error::invalid(format!("ball radius {r} must be >= 0")));
        }
        let c = self.canonical(&c.clone())?;
        if r == 0.0 {
            return Ok(Subtree::point(self, &c));
        }
        let field = self.distances_from_point(&c);
        let mut b = SubtreeBuilder::new();
        for v in 0..self.labels.len() {
            if field.to_vertex(v) <= r + GEOM_TOL {
                b.add_vertex(v);
            }
        }
        for (e, &Edge { u, v, len }) in self.edges.iter().enumerate() {
            if let TreePoint::OnEdge { edge, offset } = c {
                if edge == e {
                    b.add_segment(self, e, (offset - r).max(0.0), (offset + r).min(len));
                    continue;
                }
            }
            let du = field.to_vertex(u);
            let dv = field.to_vertex(v);
            if du <= dv {
                if du <= r {
                    b.add_segment(self, e, 0.0, (r - du).min(len));
                }
            } else if dv <= r {
                b.add_segment(self, e, (len - (r - dv)).max(0.0), len);
            }
        }
        Ok(b.finish(self))
    }

    /// The unique point of `sub` nearest to `p`; `p` itself when `p ∈ sub`.
    pub fn metric_projection(&self, sub: &Subtree, p: &TreePoint) -> Result<TreePoint> {
        if sub.is_empty() {
            return Err(Error::invalid("projection onto an empty subtree"));
        }
        let p = self.canonical(p)?;
        if sub.contains(&p) {
            return Ok(p);
        }
        let target = sub.any_point().unwrap();
        let segs = self.geodesic(&p, &target)?;
        for seg in &segs {
            // Junction vertex at the start of this piece.
            let start = self.canonical(&TreePoint::OnEdge { edge: seg.edge, offset: seg.from })?;
            if sub.contains(&start) {
                return Ok(start);
            }
            if let Some((lo, hi)) = sub.segments().find(|&(e, _)| e == seg.edge).map(|(_, iv)| iv) {
                let (a, b) = (seg.from, seg.to);
                let contact = if a <= b {
                    let x = a.max(lo);
                    (x <= b.min(hi) + GEOM_TOL).then_some(x)
                } else {
                    let x = a.min(hi);
                    (x >= b.max(lo) - GEOM_TOL).then_some(x)
                };
                if let Some(x) = contact {
                    return self.canonical(&TreePoint::OnEdge { edge: seg.edge, offset: x });
                }
            }
        }
        Ok(self.canonical(&target)?)
    }

    /// Smallest subtree containing all the given points: the union of the
    /// geodesics from the first point to every other.
    pub fn spanning_subtree(&self, pts: &[TreePoint]) -> Result<Subtree> {
        if pts.is_empty() {
            return Err(Error::invalid("spanning subtree of an empty point set"));
        }
        let mut b = SubtreeBuilder::new();
        let p0 = self.canonical(&pts[0])?;
        match p0 {
            TreePoint::Vertex(v) => b.add_vertex(v),
            TreePoint::OnEdge { edge, offset } => b.add_segment(self, edge, offset, offset),
        }
        for p in &pts[1..] {
            for seg in self.geodesic(&p0, p)? {
                b.add_segment(self, seg.edge, seg.from, seg.to);
            }
        }
        Ok(b.finish(self))
    }
}

/// Distance field from a fixed source point.
pub struct PointDistances {
    src: TreePoint,
    vdist: Vec<f64>,
}

impl PointDistances {
    pub fn to_vertex(&self, v: usize) -> f64 {
        self.vdist[v]
    }

    /// Distance from the source to an arbitrary canonical point.
    pub fn to_point(&self, tree: &Tree, q: &TreePoint) -> f64 {
        match *q {
            TreePoint::Vertex(v) => self.vdist[v],
            TreePoint::OnEdge { edge, offset } => {
                if let TreePoint::OnEdge { edge: se, offset: so } = self.src {
                    if se == edge {
                        return (so - offset).abs();
                    }
                }
                let Edge { u, v, len } = tree.edges[edge];
                (self.vdist[u] + offset).min(self.vdist[v] + (len - offset))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------------

fn id_string(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::invalid(format!("vertex id must be a string or number, got {other}"))),
    }
}

impl Tree {
    /// Parse `{ "vertices": [id...], "edges": [[u, v, length]...] }`.
    pub fn from_json(value: &Value) -> Result<Tree> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::invalid("tree JSON must be an object"))?;
        let verts = obj
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invalid("tree JSON needs a \"vertices\" array"))?;
        let labels: Vec<String> = verts.iter().map(id_string).collect::<Result<_>>()?;
        let edges_json = obj
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invalid("tree JSON needs an \"edges\" array"))?;
        let mut edges = Vec::new();
        for e in edges_json {
            let trip = e
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| Error::invalid("each edge must be [u, v, length]"))?;
            let u = id_string(&trip[0])?;
            let v = id_string(&trip[1])?;
            let len = trip[2]
                .as_f64()
                .ok_or_else(|| Error::invalid("edge length must be a number"))?;
            edges.push((u, v, len));
        }
        Tree::new(&labels, &edges)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.labels,
            "edges": self
                .edges
                .iter()
                .map(|e| json!([self.labels[e.u], self.labels[e.v], e.len]))
                .collect::<Vec<_>>(),
        })
    }

    /// Parse a point: `"v:<id>"` or `{"edge": [u, v], "offset": t}` with the
    /// offset measured from the first listed endpoint.
    pub fn point_from_json(&self, value: &Value) -> Result<TreePoint> {
        match value {
            Value::String(s) => {
                let id = s
                    .strip_prefix("v:")
                    .ok_or_else(|| Error::invalid(format!("point string must look like \"v:<id>\", got {s:?}")))?;
                let v = self
                    .vertex_by_label(id)
                    .ok_or_else(|| Error::invalid(format!("unknown vertex id {id:?}")))?;
                Ok(TreePoint::Vertex(v))
            }
            Value::Object(obj) => {
                let pair = obj
                    .get("edge")
                    .and_then(Value::as_array)
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::invalid("point object needs \"edge\": [u, v]"))?;
                let ul = id_string(&pair[0])?;
                let vl = id_string(&pair[1])?;
                let offset = obj
                    .get("offset")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| Error::invalid("point object needs a numeric \"offset\""))?;
                let iu = self
                    .vertex_by_label(&ul)
                    .ok_or_else(|| Error::invalid(format!("unknown vertex id {ul:?}")))?;
                let iv = self
                    .vertex_by_label(&vl)
                    .ok_or_else(|| Error::invalid(format!("unknown vertex id {vl:?}")))?;
                let (e, flipped) = self
                    .edge_between(iu, iv)
                    .ok_or_else(|| Error::invalid(format!("no edge between {ul:?} and {vl:?}")))?;
                let off = if flipped { self.edges[e].len - offset } else { offset };
                self.canonical(&TreePoint::OnEdge { edge: e, offset: off })
            }
            other => Err(Error::invalid(format!("cannot parse tree point from {other}"))),
        }
    }

    pub fn point_to_json(&self, p: &TreePoint) -> Value {
        match *p {
            TreePoint::Vertex(v) => Value::String(format!("v:{}", self.labels[v])),
            TreePoint::OnEdge { edge, offset } => {
                let Edge { u, v, .. } = self.edges[edge];
                json!({"edge": [self.labels[u], self.labels[v]], "offset": offset})
            }
        }
    }

    /// Edge joining two vertices, with a flag telling whether the stored
    /// orientation is (v, u) rather than (u, v).
    pub fn edge_between(&self, u: usize, v: usize) -> Option<(usize, bool)> {
        self.adj[u]
            .iter()
            .find(|&&(_, y)| y == v)
            .map(|&(e, _)| (e, self.edges[e].u != u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_tree() -> Tree {
        // a --1-- b --2-- c
        Tree::new(&["a", "b", "c"], &[("a", "b", 1.0), ("b", "c", 2.0)]).unwrap()
    }

    fn star3() -> Tree {
        // center "c" with unit edges to leaves l0, l1, l2
        Tree::new(
            &["c", "l0", "l1", "l2"],
            &[("c", "l0", 1.0), ("c", "l1", 1.0), ("c", "l2", 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn path_distance_vertices() {
        let t = path_tree();
        let a = TreePoint::Vertex(0);
        let c = TreePoint::Vertex(2);
        assert_eq!(t.distance(&a, &c).unwrap(), 3.0);
        assert_eq!(t.distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn path_distance_edge_points() {
        let t = path_tree();
        let p = TreePoint::OnEdge { edge: 0, offset: 0.5 };
        let q = TreePoint::OnEdge { edge: 1, offset: 1.0 };
        assert!((t.distance(&p, &q).unwrap() - 1.5).abs() < 1e-12);
        // same edge
        let r = TreePoint::OnEdge { edge: 1, offset: 0.25 };
        assert!((t.distance(&q, &r).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Tree::new(&["a", "b"], &[("a", "b", 0.0)]).is_err());
        assert!(Tree::new(&["a", "b", "c"], &[("a", "b", 1.0)]).is_err());
        let t = path_tree();
        assert!(t.canonical(&TreePoint::OnEdge { edge: 5, offset: 0.1 }).is_err());
        assert!(t.canonical(&TreePoint::OnEdge { edge: 0, offset: 1.5 }).is_err());
    }

    #[test]
    fn geodesic_structure() {
        let t = star3();
        let p = TreePoint::Vertex(1);
        let q = TreePoint::Vertex(2);
        let segs = t.geodesic(&p, &q).unwrap();
        assert_eq!(segs.len(), 2);
        let total: f64 = segs.iter().map(|s| s.len()).sum();
        assert!((total - 2.0).abs() < 1e-12);
        assert!(t.geodesic(&p, &p).unwrap().is_empty());
        // adjacent vertices: one full edge
        let segs = t.geodesic(&TreePoint::Vertex(0), &TreePoint::Vertex(1)).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].len(), 1.0);
    }

    #[test]
    fn components_counts() {
        let t = star3();
        assert_eq!(t.components_at(&TreePoint::Vertex(0)).unwrap().len(), 3);
        assert_eq!(
            t.components_at(&TreePoint::OnEdge { edge: 0, offset: 0.5 }).unwrap().len(),
            2
        );
        let comps = t.components_at(&TreePoint::Vertex(1)).unwrap();
        assert_eq!(comps.len(), 1);
        // leaf component closure is the whole tree
        for v in 0..4 {
            assert!(comps[0].contains_vertex(v));
        }
    }

    #[test]
    fn single_vertex_tree() {
        let t = Tree::new::<&str>(&["only"], &[]).unwrap();
        let p = TreePoint::Vertex(0);
        assert_eq!(t.distance(&p, &p).unwrap(), 0.0);
        assert!(t.components_at(&p).unwrap().is_empty());
        let b = t.ball(&p, 1.0).unwrap();
        assert!(b.contains(&p));
    }

    #[test]
    fn ball_examples() {
        let t = star3();
        let center = TreePoint::Vertex(0);
        let whole = t.ball(&center, 1.0).unwrap();
        for v in 0..4 {
            assert!(whole.contains_vertex(v));
        }
        // ball of radius 0.5 around a leaf: half edge
        let leaf = TreePoint::Vertex(1);
        let half = t.ball(&leaf, 0.5).unwrap();
        assert!(half.contains(&TreePoint::OnEdge { edge: 0, offset: 0.75 }));
        assert!(!half.contains(&TreePoint::OnEdge { edge: 0, offset: 0.25 }));
        assert!(!half.contains_vertex(0));
        let r0 = t.ball(&center, 0.0).unwrap();
        assert!(r0.contains(&center) && !r0.contains_vertex(1));
    }

    #[test]
    fn intersection_examples() {
        let t = Tree::new(&["u", "v"], &[("u", "v", 1.0)]).unwrap();
        let bu = t.ball(&TreePoint::Vertex(0), 0.6).unwrap();
        let bv = t.ball(&TreePoint::Vertex(1), 0.6).unwrap();
        let mid = bu.intersection(&bv, &t).unwrap();
        let (lo, hi) = mid.segments().next().unwrap().1;
        assert!((lo - 0.4).abs() < 1e-12 && (hi - 0.6).abs() < 1e-12);
        // identical subtrees intersect to themselves
        assert_eq!(bu.intersection(&bu, &t).unwrap(), bu);
        // disjoint balls on a long path
        let t2 = path_tree();
        let b1 = t2.ball(&TreePoint::Vertex(0), 0.1).unwrap();
        let b2 = t2.ball(&TreePoint::Vertex(2), 0.1).unwrap();
        assert!(b1.intersection(&b2, &t2).is_none());
    }

    #[test]
    fn projection_examples() {
        let t = path_tree();
        // S = edge (a,b); p = c, nearest point is b
        let s = t.spanning_subtree(&[TreePoint::Vertex(0), TreePoint::Vertex(1)]).unwrap();
        let proj = t.metric_projection(&s, &TreePoint::Vertex(2)).unwrap();
        assert_eq!(proj, TreePoint::Vertex(1));
        // p in S projects to itself
        let p = TreePoint::OnEdge { edge: 0, offset: 0.3 };
        assert_eq!(t.metric_projection(&s, &p).unwrap(), p);
        // star: leaves project to the center subtree
        let t = star3();
        let s = Subtree::point(&t, &TreePoint::Vertex(0));
        assert_eq!(t.metric_projection(&s, &TreePoint::Vertex(2)).unwrap(), TreePoint::Vertex(0));
    }

    #[test]
    fn spanning_examples() {
        let t = star3();
        let s = t
            .spanning_subtree(&[TreePoint::Vertex(1), TreePoint::Vertex(2), TreePoint::Vertex(3)])
            .unwrap();
        for v in 0..4 {
            assert!(s.contains_vertex(v));
        }
        let single = t.spanning_subtree(&[TreePoint::Vertex(2)]).unwrap();
        assert!(single.contains_vertex(2) && !single.contains_vertex(0));
        assert!(t.spanning_subtree(&[]).is_err());
    }

    #[test]
    fn point_along_walks() {
        let t = path_tree();
        let a = TreePoint::Vertex(0);
        let c = TreePoint::Vertex(2);
        let mid = t.point_along(&a, &c, 1.5).unwrap();
        assert!(t.points_eq(&mid, &TreePoint::OnEdge { edge: 1, offset: 0.5 }));
        assert!(t.points_eq(&t.point_along(&a, &c, 0.0).unwrap(), &a));
        assert!(t.points_eq(&t.point_along(&a, &c, 99.0).unwrap(), &c));
    }

    #[test]
    fn json_round_trip() {
        let t = star3();
        let t2 = Tree::from_json(&t.to_json()).unwrap();
        assert_eq!(t2.num_vertices(), 4);
        let p = TreePoint::OnEdge { edge: 1, offset: 0.25 };
        let back = t2.point_from_json(&t.point_to_json(&p)).unwrap();
        assert!(t2.points_eq(&p, &back));
        // offset is measured from the first listed endpoint
        let q = t2
            .point_from_json(&serde_json::json!({"edge": ["l1", "c"], "offset": 0.25}))
            .unwrap();
        assert!(t2.points_eq(&q, &TreePoint::OnEdge { edge: 1, offset: 0.75 }));
    }
}
