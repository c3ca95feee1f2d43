//! Wasserstein-1 distances between equal-mass atomic measures.
//!
//! Three independent routes: the edge-cut identity on trees, the CDF
//! difference on the line, and an exact successive-shortest-path solver for
//! the underlying transportation problem which doubles as the small-instance
//! oracle for the other two.

use crate::error::{Error, Result};
use crate::measures::{LineMeasure, TreeMeasure};
use crate::rtree::{Tree, TreePoint};

/// Mass tolerance for the equal-total-mass precondition.
const MASS_EQ_TOL: f64 = 1e-12;

/// An explicit coupling between two atomic measures: `moves[k] = (i, j, w)`
/// ships mass `w` from source atom `i` to target atom `j`. Row sums equal the
/// source masses and column sums the target masses.
#[derive(Debug, Clone)]
pub struct TransportPlan {
    pub moves: Vec<(usize, usize, f64)>,
    pub cost: f64,
}

impl TransportPlan {
    /// Checks the marginal constraints within `tol`.
    pub fn is_coupling(&self, supplies: &[f64], demands: &[f64], tol: f64) -> bool {
        let mut row = vec![0.0; supplies.len()];
        let mut col = vec![0.0; demands.len()];
        for &(i, j, w) in &self.moves {
            if w < -tol {
                return false;
            }
            row[i] += w;
            col[j] += w;
        }
        row.iter().zip(supplies).all(|(a, b)| (a - b).abs() <= tol)
            && col.iter().zip(demands).all(|(a, b)| (a - b).abs() <= tol)
    }
}

fn check_equal_mass(a: f64, b: f64) -> Result<()> {
    if (a - b).abs() > MASS_EQ_TOL * a.abs().max(b.abs()).max(1.0) {
        return Err(Error::invalid(format!(
            "W1 needs equal total masses, got {a} and {b}"
        )));
    }
    Ok(())
}

/// W1 on a tree by the edge-cut identity: refine every edge at the atom
/// positions of both measures, and sum `|μ(one side) − ν(one side)| · length`
/// over the elementary segments.
pub fn w1_tree(tree: &Tree, mu: &TreeMeasure, nu: &TreeMeasure) -> Result<f64> {
    check_equal_mass(mu.total_mass(), nu.total_mass())?;
    let n = tree.num_vertices();
    // Rooted orientation at vertex 0.
    let mut parent_edge = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            order.push(x);
            for (e, y) in tree.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    parent_edge[y] = e;
                    stack.push(y);
                }
            }
        }
    }

    // Atom mass at vertices and on edges (by stored offset), per measure.
    let collect = |m: &TreeMeasure| {
        let mut at_vertex = vec![0.0; n];
        let mut on_edge: Vec<Vec<(f64, f64)>> = vec![Vec::new(); tree.num_edges()];
        for &(p, w) in m.atoms() {
            match p {
                TreePoint::Vertex(v) => at_vertex[v] += w,
                TreePoint::OnEdge { edge, offset } => on_edge[edge].push((offset, w)),
            }
        }
        (at_vertex, on_edge)
    };
    let (mu_v, mu_e) = collect(mu);
    let (nu_v, nu_e) = collect(nu);

    // Mass in the rooted subtree of each vertex, children before parents,
    // counting atoms on descending edges.
    let subtree = |at_vertex: &[f64], on_edge: &[Vec<(f64, f64)>]| {
        let mut sub = at_vertex.to_vec();
        for &x in order.iter().rev() {
            for (e, y) in tree.neighbors(x) {
                if y != 0 && parent_edge[y] == e {
                    sub[x] += sub[y] + on_edge[e].iter().map(|&(_, w)| w).sum::<f64>();
                }
            }
        }
        sub
    };
    let mu_sub = subtree(&mu_v, &mu_e);
    let nu_sub = subtree(&nu_v, &nu_e);

    let mut cost = 0.0;
    for e in 0..tree.num_edges() {
        let (u, v) = tree.edge_endpoints(e);
        let len = tree.edge_len(e);
        // the child endpoint of this edge in the rooted orientation
        let (child, child_at_v) = if v != 0 && parent_edge[v] == e { (v, true) } else { (u, false) };
        let mut cuts: Vec<f64> = vec![0.0, len];
        for list in [&mu_e[e], &nu_e[e]] {
            cuts.extend(list.iter().map(|&(o, _)| o));
        }
        cuts.sort_by(f64::total_cmp);
        // mass strictly on the child side of a cut at offset x
        let side = |sub: &[f64], list: &[(f64, f64)], x: f64| -> f64 {
            let beyond: f64 = list
                .iter()
                .filter(|&&(o, _)| if child_at_v { o > x } else { o < x })
                .map(|&(_, w)| w)
                .sum();
            sub[child] + beyond
        };
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b - a <= 0.0 {
                continue;
            }
            let mid = 0.5 * (a + b);
            let diff = side(&mu_sub, &mu_e[e], mid) - side(&nu_sub, &nu_e[e], mid);
            cost += diff.abs() * (b - a);
        }
    }
    Ok(cost)
}

/// W1 on the line: the integral of `|F_μ − F_ν|` over the merged breakpoint
/// grid.
pub fn w1_line(mu: &LineMeasure, nu: &LineMeasure) -> Result<f64> {
    if mu.dim() != 1 || nu.dim() != 1 {
        return Err(Error::invalid("w1_line needs one-dimensional measures"));
    }
    check_equal_mass(mu.total_mass(), nu.total_mass())?;
    let mut events: Vec<(f64, f64, f64)> = Vec::new();
    for (x, w) in mu.scalar_atoms() {
        events.push((x, w, 0.0));
    }
    for (x, w) in nu.scalar_atoms() {
        events.push((x, 0.0, w));
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut cost = 0.0;
    let mut f_mu = 0.0;
    let mut f_nu = 0.0;
    for i in 0..events.len() {
        let (x, wm, wn) = events[i];
        f_mu += wm;
        f_nu += wn;
        if let Some(&(x2, ..)) = events.get(i + 1) {
            cost += (f_mu - f_nu).abs() * (x2 - x);
        }
    }
    Ok(cost)
}

/// Exact optimal transport between explicit marginals by successive shortest
/// augmenting paths (Bellman–Ford on the residual graph). Supports up to 64
/// atoms per side.
pub fn w1_oracle(
    dist: &[Vec<f64>],
    supplies: &[f64],
    demands: &[f64],
) -> Result<(f64, TransportPlan)> {
    let ns = supplies.len();
    let nt = demands.len();
    if ns == 0 || nt == 0 {
        return Err(Error::invalid("transport needs nonempty marginals"));
    }
    if ns > 64 || nt > 64 {
        return Err(Error::invalid("oracle supports at most 64 atoms per side"));
    }
    if dist.len() != ns || dist.iter().any(|r| r.len() != nt) {
        return Err(Error::invalid("cost matrix shape mismatch"));
    }
    if supplies.iter().chain(demands).any(|&w| !(w.is_finite() && w >= 0.0)) {
        return Err(Error::invalid("masses must be nonnegative and finite"));
    }
    check_equal_mass(supplies.iter().sum(), demands.iter().sum())?;

    let mut flow = vec![vec![0.0f64; nt]; ns];
    let mut surplus: Vec<f64> = supplies.to_vec();
    let mut deficit: Vec<f64> = demands.to_vec();
    let residual_eps = 1e-15 * supplies.iter().sum::<f64>().max(1.0);

    let cap = 4 * (ns + nt) * (ns + nt) + 64;
    for _ in 0..cap {
        if surplus.iter().all(|&s| s <= residual_eps) {
            break;
        }
        // Bellman-Ford over nodes: sources 0..ns, sinks ns..ns+nt.
        let nn = ns + nt;
        let mut dist_to = vec![f64::INFINITY; nn];
        let mut pred: Vec<Option<usize>> = vec![None; nn];
        for (i, &s) in surplus.iter().enumerate() {
            if s > residual_eps {
                dist_to[i] = 0.0;
            }
        }
        for _ in 0..nn {
            let mut changed = false;
            for i in 0..ns {
                if dist_to[i].is_finite() {
                    for j in 0..nt {
                        let nd = dist_to[i] + dist[i][j];
                        if nd < dist_to[ns + j] - 1e-15 {
                            dist_to[ns + j] = nd;
                            pred[ns + j] = Some(i);
                            changed = true;
                        }
                    }
                }
            }
            for j in 0..nt {
                if dist_to[ns + j].is_finite() {
                    for i in 0..ns {
                        if flow[i][j] > residual_eps {
                            let nd = dist_to[ns + j] - dist[i][j];
                            if nd < dist_to[i] - 1e-15 {
                                dist_to[i] = nd;
                                pred[i] = Some(ns + j);
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        // Cheapest reachable sink with remaining demand.
        let sink = (0..nt)
            .filter(|&j| deficit[j] > residual_eps && dist_to[ns + j].is_finite())
            .min_by(|&a, &b| dist_to[ns + a].total_cmp(&dist_to[ns + b]));
        let Some(sink) = sink else {
            return Err(Error::invalid("transport marginals are infeasible"));
        };
        // Walk predecessors back to a source, collecting the path.
        let mut path = vec![ns + sink];
        let mut node = ns + sink;
        while let Some(p) = pred[node] {
            path.push(p);
            node = p;
        }
        path.reverse();
        let src = path[0];
        debug_assert!(src < ns && surplus[src] > residual_eps);
        let mut amount = surplus[src].min(deficit[sink]);
        for pair in path.windows(2) {
            if pair[0] >= ns {
                // backward arc sink -> source
                amount = amount.min(flow[pair[1]][pair[0] - ns]);
            }
        }
        for pair in path.windows(2) {
            if pair[0] < ns {
                flow[pair[0]][pair[1] - ns] += amount;
            } else {
                flow[pair[1]][pair[0] - ns] -= amount;
            }
        }
        surplus[src] -= amount;
        deficit[sink] -= amount;
    }
    if surplus
        .iter()
        .any(|&s| s > 1e-9 * supplies.iter().sum::<f64>().max(1.0))
    {
        return Err(Error::invalid("transport solver failed to exhaust supply"));
    }

    let mut moves = Vec::new();
    let mut cost = 0.0;
    for (i, row) in flow.iter().enumerate() {
        for (j, &w) in row.iter().enumerate() {
            if w > residual_eps {
                moves.push((i, j, w));
                cost += w * dist[i][j];
            }
        }
    }
    Ok((cost, TransportPlan { moves, cost }))
}

/// Oracle route for two tree measures: explicit atom distance matrix plus the
/// transportation solver.
pub fn w1_tree_oracle(
    tree: &Tree,
    mu: &TreeMeasure,
    nu: &TreeMeasure,
) -> Result<(f64, TransportPlan)> {
    let dist: Vec<Vec<f64>> = mu
        .atoms()
        .iter()
        .map(|(p, _)| {
            let field = tree.distances_from_point(p);
            nu.atoms().iter().map(|(q, _)| field.to_point(tree, q)).collect()
        })
        .collect();
    let supplies: Vec<f64> = mu.atoms().iter().map(|&(_, w)| w).collect();
    let demands: Vec<f64> = nu.atoms().iter().map(|&(_, w)| w).collect();
    w1_oracle(&dist, &supplies, &demands)
}
