//! Closed convex subsets of a tree.

use std::collections::{BTreeMap, BTreeSet};

use super::{Tree, TreePoint};
use crate::GEOM_TOL;

/// A closed convex subset of a [`Tree`].
///
/// Stored as the set of member vertices plus, per edge, the closed offset
/// interval `[lo, hi]` of member points. Canonical form: an interval endpoint
/// at offset `0` or `len` implies the corresponding vertex is a member, and a
/// degenerate interval only appears for a single-point subset in the interior
/// of an edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Subtree {
    verts: BTreeSet<usize>,
    segs: BTreeMap<usize, (f64, f64)>,
}

impl Subtree {
    /// The subtree consisting of a single point.
    pub fn point(tree: &Tree, p: &TreePoint) -> Self {
        let mut b = SubtreeBuilder::new();
        match *p {
            TreePoint::Vertex(v) => b.add_vertex(v),
            TreePoint::OnEdge { edge, offset } => b.add_segment(tree, edge, offset, offset),
        }
        b.finish(tree)
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty() && self.segs.is_empty()
    }

    /// Member vertices, ascending.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.verts.iter().copied()
    }

    /// Per-edge closed member intervals, keyed by edge id.
    pub fn segments(&self) -> impl Iterator<Item = (usize, (f64, f64))> + '_ {
        self.segs.iter().map(|(&e, &iv)| (e, iv))
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.verts.contains(&v)
    }

    pub fn contains(&self, p: &TreePoint) -> bool {
        self.contains_tol(p, GEOM_TOL)
    }

    pub fn contains_tol(&self, p: &TreePoint, tol: f64) -> bool {
        match *p {
            TreePoint::Vertex(v) => self.verts.contains(&v),
            TreePoint::OnEdge { edge, offset } => match self.segs.get(&edge) {
                Some(&(lo, hi)) => offset >= lo - tol && offset <= hi + tol,
                None => false,
            },
        }
    }

    /// Some member point, deterministically chosen.
    pub fn any_point(&self) -> Option<TreePoint> {
        if let Some(&v) = self.verts.iter().next() {
            return Some(TreePoint::Vertex(v));
        }
        self.segs.iter().next().map(|(&e, &(lo, hi))| TreePoint::OnEdge {
            edge: e,
            offset: 0.5 * (lo + hi),
        })
    }

    /// Intersection of two subtrees; `None` when it is empty.
    ///
    /// The intersection of convex sets is convex, so the interval-wise
    /// intersection is again a subtree.
    pub fn intersection(&self, other: &Subtree, tree: &Tree) -> Option<Subtree> {
        let mut b = SubtreeBuilder::new();
        for &v in self.verts.intersection(&other.verts) {
            b.add_vertex(v);
        }
        for (&e, &(lo_a, hi_a)) in &self.segs {
            if let Some(&(lo_b, hi_b)) = other.segs.get(&e) {
                let lo = lo_a.max(lo_b);
                let hi = hi_a.min(hi_b);
                if hi >= lo - GEOM_TOL {
                    let mid = 0.5 * (lo + hi.max(lo));
                    if hi >= lo {
                        b.add_segment(tree, e, lo, hi);
                    } else {
                        b.add_segment(tree, e, mid, mid);
                    }
                }
            }
        }
        let out = b.finish(tree);
        if out.is_empty() {
            None
        } else {
            Some(out)
        }
    }
}

/// Accumulates vertices and edge intervals and canonicalizes at the end.
///
/// Intervals added to the same edge are merged by their convex hull, which is
/// correct for all construction paths used here (components, balls, unions of
/// geodesics through a common root).
pub(crate) struct SubtreeBuilder {
    verts: BTreeSet<usize>,
    segs: BTreeMap<usize, (f64, f64)>,
}

impl SubtreeBuilder {
    pub(crate) fn new() -> Self {
        SubtreeBuilder {
            verts: BTreeSet::new(),
            segs: BTreeMap::new(),
        }
    }

    pub(crate) fn add_vertex(&mut self, v: usize) {
        self.verts.insert(v);
    }

    pub(crate) fn add_segment(&mut self, tree: &Tree, edge: usize, a: f64, b: f64) {
        let len = tree.edge_len(edge);
        let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
        lo = lo.clamp(0.0, len);
        hi = hi.clamp(0.0, len);
        let entry = self.segs.entry(edge).or_insert((lo, hi));
        entry.0 = entry.0.min(lo);
        entry.1 = entry.1.max(hi);
    }

    pub(crate) fn add_full_edge(&mut self, tree: &Tree, edge: usize) {
        self.add_segment(tree, edge, 0.0, tree.edge_len(edge));
    }

    pub(crate) fn finish(self, tree: &Tree) -> Subtree {
        let mut verts = self.verts;
        let mut segs = BTreeMap::new();
        for (e, (mut lo, mut hi)) in self.segs {
            let len = tree.edge_len(e);
            let (u, v) = tree.edge_endpoints(e);
            if lo <= GEOM_TOL {
                lo = 0.0;
                verts.insert(u);
            }
            if hi >= len - GEOM_TOL {
                hi = len;
                verts.insert(v);
            }
            // Degenerate intervals at an endpoint collapse into the vertex.
            if hi - lo <= GEOM_TOL && (lo == 0.0 || hi == len) {
                continue;
            }
            segs.insert(e, (lo, hi));
        }
        Subtree { verts, segs }
    }
}
