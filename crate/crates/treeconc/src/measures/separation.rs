//! Exact separation distances.
//!
//! `Sep(nu; k1, k2)` is the largest `d(A, B)` over nonempty support subsets
//! with masses at least `k1` and `k2`. Exact routes:
//!
//! - General finite supports go through a three-way assignment search
//!   (A / B / out) with sound pruning: exhaustive up to the incumbent bound,
//!   exponential only in the worst case.
//! - On trees and on the line the search is seeded by a cut-point scan:
//!   around every vertex and atom position, splitting the local components
//!   into two families and taking far-mass quantiles yields an achievable
//!   pair, which usually is the optimum and makes the search prune almost
//!   everything. (The scan alone is not complete: one side may interleave
//!   with the other, as in atoms at 0, 4, 6, 10 split {0,10} vs {4,6}.)
//! - On the uniform hypercube, the vertex-isoperimetric minimizer (weight
//!   order refined lexicographically) turns feasibility at threshold `t`
//!   into a neighborhood-size comparison.

use crate::measures::{TreeMeasure, MASS_TOL};
use crate::rtree::{Tree, TreePoint};
use crate::GEOM_TOL;

/// Largest unstructured space accepted by the exact search.
pub(crate) const EXACT_SEARCH_CAP: usize = 18;

/// Largest group count handled by exhaustive bipartition enumeration before
/// switching to branch-and-bound.
const EXHAUSTIVE_GROUPS: usize = 15;

// ---------------------------------------------------------------------------
// Far quantiles and bipartition search shared by the tree and line solvers
// ---------------------------------------------------------------------------

/// One cut-point candidate: atoms sorted by decreasing distance from the cut,
/// each carrying its component group.
struct Candidate {
    /// (distance, mass, group), sorted by distance descending.
    flat: Vec<(f64, f64, u32)>,
    n_groups: usize,
}

impl Candidate {
    fn from_labels(mut atoms: Vec<(f64, f64, u32)>, n_groups: usize) -> Self {
        atoms.sort_by(|a, b| b.0.total_cmp(&a.0));
        Candidate { flat: atoms, n_groups }
    }

    /// Value of one bipartition: side A = groups in `mask`, side B = the rest.
    /// `None` when either side cannot reach its mass target.
    fn eval_mask(&self, mask: u64, k1: f64, k2: f64) -> Option<f64> {
        let mut cum_a = 0.0;
        let mut cum_b = 0.0;
        let mut r_a = None;
        let mut r_b = None;
        for &(d, w, g) in &self.flat {
            if mask >> g & 1 == 1 {
                if r_a.is_none() {
                    cum_a += w;
                    if cum_a >= k1 - MASS_TOL {
                        r_a = Some(d);
                    }
                }
            } else if r_b.is_none() {
                cum_b += w;
                if cum_b >= k2 - MASS_TOL {
                    r_b = Some(d);
                }
            }
            if r_a.is_some() && r_b.is_some() {
                break;
            }
        }
        Some(r_a? + r_b?)
    }

    /// Optimistic value when `decided` groups are fixed and all others may
    /// still join either side.
    fn bound(&self, decided: u64, mask: u64, k1: f64, k2: f64) -> Option<f64> {
        let mut cum_a = 0.0;
        let mut cum_b = 0.0;
        let mut r_a = None;
        let mut r_b = None;
        for &(d, w, g) in &self.flat {
            let free = decided >> g & 1 == 0;
            let in_a = mask >> g & 1 == 1;
            if r_a.is_none() && (free || in_a) {
                cum_a += w;
                if cum_a >= k1 - MASS_TOL {
                    r_a = Some(d);
                }
            }
            if r_b.is_none() && (free || !in_a) {
                cum_b += w;
                if cum_b >= k2 - MASS_TOL {
                    r_b = Some(d);
                }
            }
            if r_a.is_some() && r_b.is_some() {
                break;
            }
        }
        Some(r_a? + r_b?)
    }

    fn best_value(&self, k1: f64, k2: f64) -> f64 {
        let mut best = 0.0f64;
        if self.n_groups <= EXHAUSTIVE_GROUPS {
            for mask in 0..(1u64 << self.n_groups) {
                if let Some(v) = self.eval_mask(mask, k1, k2) {
                    best = best.max(v);
                }
            }
            return best;
        }
        // Branch and bound over groups, strongest-first.
        let mut group_max = vec![0.0f64; self.n_groups];
        for &(d, _, g) in &self.flat {
            group_max[g as usize] = group_max[g as usize].max(d);
        }
        let mut order: Vec<usize> = (0..self.n_groups).collect();
        order.sort_by(|&a, &b| group_max[b].total_cmp(&group_max[a]));
        self.bnb(&order, 0, 0, 0, k1, k2, &mut best);
        best
    }

    #[allow(clippy::too_many_arguments)]
    fn bnb(
        &self,
        order: &[usize],
        depth: usize,
        decided: u64,
        mask: u64,
        k1: f64,
        k2: f64,
        best: &mut f64,
    ) {
        match self.bound(decided, mask, k1, k2) {
            Some(b) if b > *best => {}
            _ => return,
        }
        if depth == order.len() {
            if let Some(v) = self.eval_mask(mask, k1, k2) {
                *best = best.max(v);
            }
            return;
        }
        let g = order[depth];
        self.bnb(order, depth + 1, decided | 1 << g, mask | 1 << g, k1, k2, best);
        self.bnb(order, depth + 1, decided | 1 << g, mask, k1, k2, best);
    }
}

// ---------------------------------------------------------------------------
// Tree measures
// ---------------------------------------------------------------------------

/// Reusable exact separation solver for one tree measure: a cut-point scan
/// provides an achievable seed value, and the assignment search closes the
/// gap. Precomputes candidates and the atom distance matrix so that many
/// `(k1, k2)` pairs can be queried cheaply.
pub struct TreeSepSolver {
    candidates: Vec<Candidate>,
    dist: Vec<Vec<f64>>,
    mass: Vec<f64>,
}

impl TreeSepSolver {
    pub fn new(tree: &Tree, nu: &TreeMeasure) -> Self {
        let mut candidates = Vec::new();
        for v in 0..tree.num_vertices() {
            candidates.push(vertex_candidate(tree, nu, v));
        }
        for &(p, _) in nu.atoms() {
            if let TreePoint::OnEdge { edge, offset } = p {
                candidates.push(edge_candidate(tree, nu, edge, offset));
            }
        }
        TreeSepSolver {
            candidates,
            dist: nu.atom_distances(tree),
            mass: nu.atoms().iter().map(|&(_, w)| w).collect(),
        }
    }

    /// The cut-point scan alone: a sound lower bound.
    pub fn scan(&self, k1: f64, k2: f64) -> f64 {
        let mut best = 0.0f64;
        for c in &self.candidates {
            best = best.max(c.best_value(k1, k2));
        }
        best
    }

    pub fn solve(&self, k1: f64, k2: f64) -> f64 {
        let seed = self.scan(k1, k2);
        seeded_search(&self.dist, &self.mass, k1, k2, seed).0
    }
}

/// Component labels around a vertex: one group per incident edge, plus a
/// group for atoms sitting exactly at the vertex.
fn vertex_candidate(tree: &Tree, nu: &TreeMeasure, v: usize) -> Candidate {
    // branch[w] = id of the first edge on the path v -> w
    let mut branch = vec![usize::MAX; tree.num_vertices()];
    let mut stack: Vec<usize> = vec![v];
    let mut seen = vec![false; tree.num_vertices()];
    seen[v] = true;
    while let Some(x) = stack.pop() {
        for (e, y) in tree.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                branch[y] = if x == v { e } else { branch[x] };
                stack.push(y);
            }
        }
    }
    let field = tree.distances_from_point(&TreePoint::Vertex(v));
    let mut group_of_edge = std::collections::HashMap::new();
    let mut atoms = Vec::new();
    let mut n_groups = 0u32;
    let mut self_group: Option<u32> = None;
    for &(p, w) in nu.atoms() {
        let d = field.to_point(tree, &p);
        let edge_label = match p {
            TreePoint::Vertex(w) if w == v => None,
            TreePoint::Vertex(w) => Some(branch[w]),
            TreePoint::OnEdge { edge, .. } => {
                let (x, y) = tree.edge_endpoints(edge);
                if x == v || y == v {
                    Some(edge)
                } else {
                    Some(branch[x])
                }
            }
        };
        let g = match edge_label {
            None => *self_group.get_or_insert_with(|| {
                n_groups += 1;
                n_groups - 1
            }),
            Some(e) => *group_of_edge.entry(e).or_insert_with(|| {
                n_groups += 1;
                n_groups - 1
            }),
        };
        atoms.push((d, w, g));
    }
    Candidate::from_labels(atoms, n_groups as usize)
}

/// Component labels around an interior edge point: u-side, v-side, and atoms
/// at the point itself.
fn edge_candidate(tree: &Tree, nu: &TreeMeasure, edge: usize, offset: f64) -> Candidate {
    let (u, v) = tree.edge_endpoints(edge);
    let len = tree.edge_len(edge);
    let du = tree.vertex_distances(u);
    let dv = tree.vertex_distances(v);
    let mut atoms = Vec::new();
    for &(p, w) in nu.atoms() {
        let (d, g) = match p {
            TreePoint::OnEdge { edge: e, offset: s } if e == edge => {
                if (s - offset).abs() <= GEOM_TOL {
                    (0.0, 2)
                } else if s < offset {
                    (offset - s, 0)
                } else {
                    (s - offset, 1)
                }
            }
            _ => {
                let anchor = match p {
                    TreePoint::Vertex(w) => w,
                    TreePoint::OnEdge { edge: e, .. } => tree.edge_endpoints(e).0,
                };
                if du[anchor] <= dv[anchor] {
                    let d = match p {
                        TreePoint::Vertex(w) => du[w] + offset,
                        TreePoint::OnEdge { edge: e, offset: s } => {
                            let (x, y) = tree.edge_endpoints(e);
                            (du[x] + s).min(du[y] + tree.edge_len(e) - s) + offset
                        }
                    };
                    (d, 0)
                } else {
                    let d = match p {
                        TreePoint::Vertex(w) => dv[w] + (len - offset),
                        TreePoint::OnEdge { edge: e, offset: s } => {
                            let (x, y) = tree.edge_endpoints(e);
                            (dv[x] + s).min(dv[y] + tree.edge_len(e) - s) + (len - offset)
                        }
                    };
                    (d, 1)
                }
            }
        };
        atoms.push((d, w, g));
    }
    Candidate::from_labels(atoms, 3)
}

// ---------------------------------------------------------------------------
// Line measures
// ---------------------------------------------------------------------------

/// Exact separation of an atomic measure on the real line.
pub fn separation_line_points(pos: &[f64], mass: &[f64], k1: f64, k2: f64) -> f64 {
    let mut seed = 0.0f64;
    for &z in pos {
        let mut atoms = Vec::with_capacity(pos.len());
        for (&x, &w) in pos.iter().zip(mass) {
            let d = (x - z).abs();
            let g = if d <= GEOM_TOL {
                2
            } else if x < z {
                0
            } else {
                1
            };
            atoms.push((d, w, g));
        }
        let c = Candidate::from_labels(atoms, 3);
        seed = seed.max(c.best_value(k1, k2));
    }
    let n = pos.len();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            dist[i][j] = (pos[i] - pos[j]).abs();
        }
    }
    seeded_search(&dist, mass, k1, k2, seed).0
}

// ---------------------------------------------------------------------------
// Small general metric spaces
// ---------------------------------------------------------------------------

/// Exact separation by a pruned three-way assignment search (A / B / out).
///
/// Sound pruning only: a branch is cut when its running cross-distance can no
/// longer beat the incumbent, or when the remaining mass cannot reach a
/// target. Exponential in the worst case; intended for supports up to
/// [`EXACT_SEARCH_CAP`] unless seeded with a strong incumbent.
pub fn separation_search(dist: &[Vec<f64>], mass: &[f64], k1: f64, k2: f64) -> f64 {
    seeded_search(dist, mass, k1, k2, 0.0).0
}

/// As [`separation_search`], additionally returning the witness pair of
/// index sets (empty when the optimum is zero).
pub fn separation_search_witness(
    dist: &[Vec<f64>],
    mass: &[f64],
    k1: f64,
    k2: f64,
) -> (f64, Vec<usize>, Vec<usize>) {
    seeded_search(dist, mass, k1, k2, 0.0)
}

fn seeded_search(
    dist: &[Vec<f64>],
    mass: &[f64],
    k1: f64,
    k2: f64,
    seed: f64,
) -> (f64, Vec<usize>, Vec<usize>) {
    let n = mass.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| mass[b].total_cmp(&mass[a]));
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + mass[order[i]];
    }
    struct S<'a> {
        dist: &'a [Vec<f64>],
        mass: &'a [f64],
        order: &'a [usize],
        suffix: &'a [f64],
        k1: f64,
        k2: f64,
        a: Vec<usize>,
        b: Vec<usize>,
        best: f64,
        wit: (Vec<usize>, Vec<usize>),
    }
    fn rec(s: &mut S, i: usize, mass_a: f64, mass_b: f64, min_cross: f64) {
        if min_cross <= s.best {
            return;
        }
        if mass_a >= s.k1 - MASS_TOL
            && mass_b >= s.k2 - MASS_TOL
            && !s.a.is_empty()
            && !s.b.is_empty()
        {
            s.best = min_cross;
            s.wit = (s.a.clone(), s.b.clone());
            return;
        }
        if i == s.order.len() {
            return;
        }
        let rest = s.suffix[i];
        if mass_a + rest < s.k1 - MASS_TOL || mass_b + rest < s.k2 - MASS_TOL {
            return;
        }
        let p = s.order[i];
        let to_a = s.b.iter().map(|&q| s.dist[p][q]).fold(min_cross, f64::min);
        s.a.push(p);
        rec(s, i + 1, mass_a + s.mass[p], mass_b, to_a);
        s.a.pop();
        let to_b = s.a.iter().map(|&q| s.dist[p][q]).fold(min_cross, f64::min);
        s.b.push(p);
        rec(s, i + 1, mass_a, mass_b + s.mass[p], to_b);
        s.b.pop();
        rec(s, i + 1, mass_a, mass_b, min_cross);
    }
    let mut s = S {
        dist,
        mass,
        order: &order,
        suffix: &suffix,
        k1,
        k2,
        a: Vec::new(),
        b: Vec::new(),
        best: seed,
        wit: (Vec::new(), Vec::new()),
    };
    rec(&mut s, 0, 0.0, 0.0, f64::INFINITY);
    (s.best, s.wit.0, s.wit.1)
}

/// Plain ternary enumeration of all (A, B, out) assignments. Test oracle for
/// supports of a dozen points.
pub fn separation_bruteforce(dist: &[Vec<f64>], mass: &[f64], k1: f64, k2: f64) -> f64 {
    let n = mass.len();
    let total = 3usize.pow(n as u32);
    let mut best = 0.0f64;
    for code in 0..total {
        let mut c = code;
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut mass_a = 0.0;
        let mut mass_b = 0.0;
        for i in 0..n {
            match c % 3 {
                1 => {
                    a.push(i);
                    mass_a += mass[i];
                }
                2 => {
                    b.push(i);
                    mass_b += mass[i];
                }
                _ => {}
            }
            c /= 3;
        }
        if a.is_empty() || b.is_empty() || mass_a < k1 - MASS_TOL || mass_b < k2 - MASS_TOL {
            continue;
        }
        let mut min_cross = f64::INFINITY;
        for &p in &a {
            for &q in &b {
                min_cross = min_cross.min(dist[p][q]);
            }
        }
        best = best.max(min_cross);
    }
    best
}

// ---------------------------------------------------------------------------
// Uniform hypercube
// ---------------------------------------------------------------------------

/// Vertex-isoperimetric machinery for `{0,1}^dim` with uniform mass.
///
/// Vertices are ordered by Hamming weight and, within a weight class, by the
/// set-lexicographic order (smallest differing element wins). Closed
/// neighborhoods of initial segments of this order are again initial
/// segments and have the minimum size among sets of their cardinality, which
/// makes threshold feasibility exactly computable.
pub struct HypercubeSep {
    dim: u32,
    order: Vec<u32>,
}

fn set_lex_less(a: u32, b: u32) -> bool {
    let d = a ^ b;
    if d == 0 {
        return false;
    }
    let low = d & d.wrapping_neg();
    a & low != 0
}

impl HypercubeSep {
    pub fn new(dim: u32) -> Self {
        assert!((1..=24).contains(&dim), "hypercube dimension out of range");
        let mut order: Vec<u32> = (0..(1u32 << dim)).collect();
        order.sort_by(|&a, &b| {
            a.count_ones()
                .cmp(&b.count_ones())
                .then_with(|| {
                    if set_lex_less(a, b) {
                        std::cmp::Ordering::Less
                    } else if a == b {
                        std::cmp::Ordering::Equal
                    } else {
                        std::cmp::Ordering::Greater
                    }
                })
        });
        HypercubeSep { dim, order }
    }

    fn size(&self) -> usize {
        1usize << self.dim
    }

    /// `|Γ_t(IS(s))|` for all `t` in `0..=dim`: sizes of iterated closed
    /// neighborhoods of the initial segment of size `s`.
    pub fn gamma_profile(&self, s: usize) -> Vec<usize> {
        let words = (self.size() + 63) / 64;
        let mut cur = vec![0u64; words];
        for &v in self.order.iter().take(s) {
            cur[(v as usize) / 64] |= 1u64 << (v % 64);
        }
        let mut out = vec![s];
        for _ in 0..self.dim {
            let mut next = cur.clone();
            for v in 0..self.size() {
                if cur[v / 64] >> (v % 64) & 1 == 1 {
                    for bit in 0..self.dim {
                        let w = v ^ (1usize << bit);
                        next[w / 64] |= 1u64 << (w % 64);
                    }
                }
            }
            cur = next;
            out.push(cur.iter().map(|w| w.count_ones() as usize).sum());
        }
        out
    }

    /// Minimum `|Γ_t(A)|` over `|A| = s`.
    pub fn min_gamma(&self, s: usize, t: usize) -> usize {
        self.gamma_profile(s)[t.min(self.dim as usize)]
    }

    /// Checks that closed neighborhoods of initial segments are initial
    /// segments; the exactness of [`Self::min_gamma`] rests on this.
    pub fn closure_property_holds(&self) -> bool {
        let words = (self.size() + 63) / 64;
        for s in 0..=self.size() {
            let mut cur = vec![0u64; words];
            for &v in self.order.iter().take(s) {
                cur[(v as usize) / 64] |= 1u64 << (v % 64);
            }
            let mut next = cur.clone();
            for v in 0..self.size() {
                if cur[v / 64] >> (v % 64) & 1 == 1 {
                    for bit in 0..self.dim {
                        let w = v ^ (1usize << bit);
                        next[w / 64] |= 1u64 << (w % 64);
                    }
                }
            }
            let count: usize = next.iter().map(|w| w.count_ones() as usize).sum();
            for &v in self.order.iter().take(count) {
                if next[(v as usize) / 64] >> (v % 64) & 1 == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// First `s` vertices of the isoperimetric order, as bitmask indices.
    pub fn initial_segment(&self, s: usize) -> Vec<usize> {
        self.order.iter().take(s).map(|&v| v as usize).collect()
    }

    /// Largest integer `t` such that two sets of at least `s1` and `s2`
    /// vertices can sit at Hamming distance `>= t`; 0 when infeasible.
    pub fn separation_counts(&self, s1: usize, s2: usize) -> u32 {
        if s1 == 0 || s2 == 0 || s1 > self.size() || s2 > self.size() {
            return 0;
        }
        let profile = self.gamma_profile(s1);
        for t in (1..=self.dim as usize).rev() {
            if self.size() - profile[t - 1] >= s2 {
                return t as u32;
            }
        }
        0
    }
}

/// Exact `Sep` for the uniform measure on `{0,1}^dim` in raw Hamming
/// distance; scale externally for normalized metrics.
pub fn hypercube_separation(dim: u32, k1: f64, k2: f64) -> u32 {
    let cube = HypercubeSep::new(dim);
    let n = 1u64 << dim;
    let count = |k: f64| -> usize {
        if k <= 0.0 {
            return 1;
        }
        let c = (k * n as f64 - 1e-9).ceil();
        c.max(1.0) as usize
    };
    let s1 = count(k1);
    let s2 = count(k2);
    if s1 > n as usize || s2 > n as usize {
        return 0;
    }
    cube.separation_counts(s1, s2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::LineMeasure;
    use crate::rtree::Tree;

    #[test]
    fn line_examples() {
        // 4 unit-spaced atoms of mass 1/4: Sep(1/4, 1/4) = 3 (the endpoints)
        let pos = [0.0, 1.0, 2.0, 3.0];
        let mass = [0.25; 4];
        assert_eq!(separation_line_points(&pos, &mass, 0.25, 0.25), 3.0);
        // kappa > m/2 -> 0
        assert_eq!(separation_line_points(&pos, &mass, 0.6, 0.6), 0.0);
        // two-point space: masses 0.9/0.1 at distance 10
        let pos = [0.0, 10.0];
        let mass = [0.9, 0.1];
        assert_eq!(separation_line_points(&pos, &mass, 0.1, 0.1), 10.0);
        assert_eq!(separation_line_points(&pos, &mass, 0.95, 0.1), 0.0);
    }

    #[test]
    fn line_matches_bruteforce() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let k = rng.gen_range(2..=8);
            let pos: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..10.0)).collect();
            let mass: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = mass.iter().sum();
            let mut dist = vec![vec![0.0; k]; k];
            for i in 0..k {
                for j in 0..k {
                    dist[i][j] = (pos[i] - pos[j]).abs();
                }
            }
            for frac in [0.1, 0.25, 0.4, 0.6] {
                let kap = frac * total;
                let fast = separation_line_points(&pos, &mass, kap, kap);
                let slow = separation_bruteforce(&dist, &mass, kap, kap);
                assert!(
                    (fast - slow).abs() < 1e-9,
                    "line sep {fast} vs brute {slow} at kappa {kap}"
                );
            }
        }
    }

    #[test]
    fn tree_sep_matches_bruteforce() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for round in 0..30 {
            let n = rng.gen_range(2..=9);
            let mut edges = Vec::new();
            for v in 1..n {
                let parent = rng.gen_range(0..v);
                edges.push((parent, v, rng.gen_range(0.2..2.0)));
            }
            let tree = Tree::from_indexed_edges(n, &edges).unwrap();
            let k = rng.gen_range(2..=7);
            let atoms: Vec<(TreePoint, f64)> = (0..k)
                .map(|_| {
                    let p = if rng.gen_bool(0.5) || tree.num_edges() == 0 {
                        TreePoint::Vertex(rng.gen_range(0..n))
                    } else {
                        let e = rng.gen_range(0..tree.num_edges());
                        TreePoint::OnEdge {
                            edge: e,
                            offset: rng.gen_range(0.0..tree.edge_len(e)),
                        }
                    };
                    (p, rng.gen_range(0.1..1.0))
                })
                .collect();
            let nu = TreeMeasure::new(&tree, atoms).unwrap();
            let total = nu.total_mass();
            let d = nu.atom_distances(&tree);
            let w: Vec<f64> = nu.atoms().iter().map(|&(_, m)| m).collect();
            let solver = TreeSepSolver::new(&tree, &nu);
            for frac in [0.05, 0.2, 1.0 / 3.0, 0.45, 0.7] {
                let kap = frac * total;
                let fast = solver.solve(kap, kap * 0.5);
                let slow = separation_bruteforce(&d, &w, kap, kap * 0.5);
                assert!(
                    (fast - slow).abs() < 1e-9,
                    "round {round}: tree sep {fast} vs brute {slow} at kappa {kap}"
                );
            }
        }
    }

    #[test]
    fn search_matches_bruteforce() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..25 {
            let k = rng.gen_range(2..=8);
            // random metric with distances in [1, 2]: triangle holds for free
            let mut dist = vec![vec![0.0; k]; k];
            for i in 0..k {
                for j in (i + 1)..k {
                    let d = rng.gen_range(1.0..2.0);
                    dist[i][j] = d;
                    dist[j][i] = d;
                }
            }
            let mass: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = mass.iter().sum();
            for frac in [0.1, 0.3, 0.5] {
                let kap = frac * total;
                let fast = separation_search(&dist, &mass, kap, kap);
                let slow = separation_bruteforce(&dist, &mass, kap, kap);
                assert!((fast - slow).abs() < 1e-9, "search {fast} vs brute {slow}");
            }
        }
    }

    #[test]
    fn hypercube_closure_property() {
        for dim in 1..=10 {
            assert!(
                HypercubeSep::new(dim).closure_property_holds(),
                "closure fails at dim {dim}"
            );
        }
    }

    #[test]
    fn hypercube_min_gamma_is_minimum() {
        // exhaustive check of the isoperimetric minimum at dim 4
        let dim = 4u32;
        let cube = HypercubeSep::new(dim);
        let n = 1usize << dim;
        for s in 1..=n {
            for t in 1..=dim as usize {
                // brute force: min over all subsets of size s (16 choose s)
                let mut best = usize::MAX;
                let mut comb: Vec<usize> = (0..s).collect();
                loop {
                    let mut set = vec![false; n];
                    for &v in &comb {
                        set[v] = true;
                    }
                    for _ in 0..t {
                        let prev = set.clone();
                        for v in 0..n {
                            if prev[v] {
                                for bit in 0..dim {
                                    set[v ^ (1 << bit)] = true;
                                }
                            }
                        }
                    }
                    best = best.min(set.iter().filter(|&&x| x).count());
                    // next combination
                    let mut i = s;
                    loop {
                        if i == 0 {
                            break;
                        }
                        i -= 1;
                        if comb[i] != i + n - s {
                            comb[i] += 1;
                            for j in (i + 1)..s {
                                comb[j] = comb[j - 1] + 1;
                            }
                            break;
                        }
                    }
                    if comb[0] == n - s && i == 0 {
                        break;
                    }
                }
                assert_eq!(
                    cube.min_gamma(s, t),
                    best,
                    "min gamma mismatch at s={s} t={t}"
                );
            }
        }
    }

    #[test]
    fn hypercube_sep_matches_bruteforce() {
        for dim in 2..=4u32 {
            let n = 1usize << dim;
            let mut dist = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    dist[i][j] = ((i ^ j) as u32).count_ones() as f64;
                }
            }
            let mass = vec![1.0 / n as f64; n];
            for k in [0.05, 0.1, 0.2, 0.3, 0.45] {
                let fast = hypercube_separation(dim, k, k) as f64;
                let slow = if dim <= 3 {
                    separation_bruteforce(&dist, &mass, k, k)
                } else {
                    separation_search(&dist, &mass, k, k)
                };
                assert!(
                    (fast - slow).abs() < 1e-9,
                    "dim {dim} kappa {k}: harper {fast} vs search {slow}"
                );
            }
        }
    }

    #[test]
    fn hypercube_small_values() {
        // dim 4, kappa = 0.1: two antipodal near-singleton families reach 3
        assert_eq!(hypercube_separation(4, 0.1, 0.1), 4 - 1);
        // dim 5: intersections of unit balls cap it at 3
        assert_eq!(hypercube_separation(5, 0.1, 0.1), 3);
        // dim 6: opposite radius-1 balls of 7 points each reach 4
        assert_eq!(hypercube_separation(6, 0.1, 0.1), 4);
    }

    #[test]
    fn mmspace_line_structure_dispatch() {
        let nu = LineMeasure::from_scalars(vec![(0.0, 0.25), (1.0, 0.25), (2.0, 0.25), (3.0, 0.25)])
            .unwrap();
        assert_eq!(nu.separation(0.25, 0.25).unwrap(), 3.0);
    }
}
