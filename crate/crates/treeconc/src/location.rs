//! Location estimators on trees: the mass median, the center of mass via the
//! directional-imbalance condition, and the signed distance function that
//! transfers tree measures to the line.
//!
//! The barycenter walk replaces a non-constructive existence argument with an
//! exact finite algorithm: between support atoms and vertices the objective
//! `F(x) = ∫ d(x,y)² dν(y)` restricted to an edge is an explicit quadratic,
//! so the walk only ever visits event points and closed-form minima.

use crate::error::{Error, Result};
use crate::measures::{LineMeasure, TreeMeasure, MASS_TOL};
use crate::rtree::{Subtree, SubtreeBuilder, Tree, TreePoint};
use crate::{CERT_TOL, GEOM_TOL};

/// A median point together with its certifying two-subtree decomposition:
/// the parts cover the tree, meet exactly in the point, and each carries at
/// least a third of the mass.
#[derive(Debug, Clone)]
pub struct MedianResult {
    pub point: TreePoint,
    pub part_a: Subtree,
    pub part_b: Subtree,
}

/// Output of the barycenter walk: the minimizer of `∫ d(x,y)² dν(y)`, its
/// objective value, and the largest directional imbalance at the returned
/// point (the optimality certificate).
#[derive(Debug, Clone)]
pub struct BarycenterResult {
    pub point: TreePoint,
    pub objective: f64,
    pub max_violation: f64,
}

/// `∫_C d(z,w) dν(w) − ∫_{T∖C} d(z,w) dν(w)` for a component closure `C` at
/// `z`. Atoms at `z` contribute zero either way.
pub fn directional_imbalance(
    tree: &Tree,
    nu: &TreeMeasure,
    z: &TreePoint,
    comp: &Subtree,
) -> Result<f64> {
    let z = tree.canonical(z)?;
    let comps = tree.components_at(&z)?;
    if !comps.iter().any(|c| c == comp) {
        return Err(Error::invalid("subtree is not a component closure at z"));
    }
    Ok(imbalance_unchecked(tree, nu, &z, comp))
}

fn imbalance_unchecked(tree: &Tree, nu: &TreeMeasure, z: &TreePoint, comp: &Subtree) -> f64 {
    let field = tree.distances_from_point(z);
    let mut inside = 0.0;
    let mut outside = 0.0;
    for (p, w) in nu.atoms() {
        let d = field.to_point(tree, p);
        if comp.contains(p) {
            inside += w * d;
        } else {
            outside += w * d;
        }
    }
    inside - outside
}

/// Maximum directional imbalance over all components at `z`; a value below
/// the certificate tolerance certifies `z` as the center of mass.
pub fn verify_sturm(tree: &Tree, nu: &TreeMeasure, z: &TreePoint) -> Result<f64> {
    let z = tree.canonical(z)?;
    let comps = tree.components_at(&z)?;
    let mut worst = 0.0f64;
    for c in &comps {
        worst = worst.max(imbalance_unchecked(tree, nu, &z, c));
    }
    Ok(worst)
}

/// The objective `F(x) = ∫ d(x,y)² dν(y)`.
pub fn objective(tree: &Tree, nu: &TreeMeasure, x: &TreePoint) -> Result<f64> {
    let field = tree.distances_from_point(&tree.canonical(x)?);
    Ok(nu
        .atoms()
        .iter()
        .map(|(p, w)| {
            let d = field.to_point(tree, p);
            w * d * d
        })
        .sum())
}

/// Certificate scale: tolerances are `CERT_TOL` times mass times support
/// diameter.
pub fn instance_scale(tree: &Tree, nu: &TreeMeasure) -> f64 {
    nu.total_mass() * nu.support_diameter(tree)
}

/// Direction of travel from `z` into the component with index `comp_idx` (in
/// `components_at` order): the edge, the starting offset on it, and ±1.
fn entry_edge(tree: &Tree, z: &TreePoint, comp_idx: usize) -> (usize, f64, f64) {
    match *z {
        TreePoint::Vertex(v) => {
            let (e, _) = tree.neighbors(v).nth(comp_idx).expect("component index");
            let (u, _) = tree.edge_endpoints(e);
            if u == v {
                (e, 0.0, 1.0)
            } else {
                (e, tree.edge_len(e), -1.0)
            }
        }
        TreePoint::OnEdge { edge, offset } => {
            if comp_idx == 0 {
                (edge, offset, -1.0)
            } else {
                (edge, offset, 1.0)
            }
        }
    }
}

/// Arc distance from `from` to the next event on the edge in direction
/// `dir`: the nearest strictly-ahead atom on the edge, else the edge end.
fn next_event(tree: &Tree, nu: &TreeMeasure, edge: usize, from: f64, dir: f64) -> f64 {
    let len = tree.edge_len(edge);
    let to_end = if dir > 0.0 { len - from } else { from };
    let mut step = to_end;
    for &(p, _) in nu.atoms() {
        if let TreePoint::OnEdge { edge: e, offset } = p {
            if e == edge {
                let ahead = (offset - from) * dir;
                if ahead > GEOM_TOL {
                    step = step.min(ahead);
                }
            }
        }
    }
    step
}

/// The center of mass of `nu`: walks from an atom along strictly descending
/// directions, minimizing the edge-restricted quadratic in closed form, and
/// stops when every directional imbalance is within tolerance.
pub fn tree_barycenter(tree: &Tree, nu: &TreeMeasure) -> Result<BarycenterResult> {
    let total = nu.total_mass();
    let tol = CERT_TOL * instance_scale(tree, nu);
    let mut z = tree.canonical(&nu.atoms()[0].0)?;
    let step_cap = 4 * (tree.num_vertices() + nu.len()) + 16;
    for _ in 0..step_cap {
        let comps = tree.components_at(&z)?;
        let mut worst: Option<(usize, f64)> = None;
        for (i, c) in comps.iter().enumerate() {
            let v = imbalance_unchecked(tree, nu, &z, c);
            if worst.map_or(true, |(_, w)| v > w) {
                worst = Some((i, v));
            }
        }
        let (dir_idx, violation) = match worst {
            None => break, // single-vertex tree
            Some(w) => w,
        };
        if violation <= tol {
            break;
        }
        let (edge, from, dir) = entry_edge(tree, &z, dir_idx);
        let event = next_event(tree, nu, edge, from, dir);
        // F(δ) = Σ_in w (d−δ)² + Σ_out w (d+δ)² has its minimum at δ = c/m.
        let delta = (violation / total).min(event);
        z = tree.canonical(&TreePoint::OnEdge { edge, offset: from + dir * delta })?;
    }
    let max_violation = verify_sturm(tree, nu, &z)?;
    Ok(BarycenterResult {
        point: z,
        objective: objective(tree, nu, &z)?,
        max_violation,
    })
}

/// Mass of atoms sitting exactly at `z`.
fn mass_at(tree: &Tree, nu: &TreeMeasure, z: &TreePoint) -> f64 {
    nu.atoms()
        .iter()
        .filter(|(p, _)| tree.points_eq(p, z))
        .map(|&(_, w)| w)
        .sum()
}

/// A median of `nu`: a point whose components can be grouped into two
/// subtrees, each of mass at least `m/3` (atoms at the point count for both
/// parts). The walk steps toward the unique too-heavy component until the
/// grouping becomes possible.
pub fn tree_median(tree: &Tree, nu: &TreeMeasure) -> Result<MedianResult> {
    let total = nu.total_mass();
    let third = total / 3.0;
    let mut z = tree.canonical(&nu.atoms()[0].0)?;
    let step_cap = 4 * (tree.num_vertices() + nu.len()) + 16;
    for _ in 0..step_cap {
        let comps = tree.components_at(&z)?;
        let mass_z = mass_at(tree, nu, &z);
        let open: Vec<f64> = comps
            .iter()
            .map(|c| {
                nu.atoms()
                    .iter()
                    .filter(|(p, _)| c.contains(p) && !tree.points_eq(p, &z))
                    .map(|&(_, w)| w)
                    .sum()
            })
            .collect();
        let heaviest = open
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, &m)| (i, m));
        if let Some((i, m)) = heaviest {
            if m > 2.0 * total / 3.0 + MASS_TOL {
                let (edge, from, dir) = entry_edge(tree, &z, i);
                let step = next_event(tree, nu, edge, from, dir);
                z = tree.canonical(&TreePoint::OnEdge { edge, offset: from + dir * step })?;
                continue;
            }
        }
        // Group components into two families, heaviest first, so that both
        // closures reach m/3.
        let mut order: Vec<usize> = (0..comps.len()).collect();
        order.sort_by(|&a, &b| open[b].total_cmp(&open[a]));
        let mut fam_a = Vec::new();
        let mut mass_a = mass_z;
        let mut rest: Vec<usize> = Vec::new();
        for &i in &order {
            if mass_a < third - MASS_TOL {
                fam_a.push(i);
                mass_a += open[i];
            } else {
                rest.push(i);
            }
        }
        let mass_b = mass_z + rest.iter().map(|&i| open[i]).sum::<f64>();
        debug_assert!(mass_a >= third - MASS_TOL && mass_b >= third - MASS_TOL);
        let part = |family: &[usize]| -> Subtree {
            let mut b = SubtreeBuilder::new();
            match z {
                TreePoint::Vertex(v) => b.add_vertex(v),
                TreePoint::OnEdge { edge, offset } => b.add_segment(tree, edge, offset, offset),
            }
            for &i in family {
                for v in comps[i].vertices() {
                    b.add_vertex(v);
                }
                for (e, (lo, hi)) in comps[i].segments() {
                    b.add_segment(tree, e, lo, hi);
                }
            }
            b.finish(tree)
        };
        return Ok(MedianResult {
            point: z,
            part_a: part(&fam_a),
            part_b: part(&rest),
        });
    }
    Err(Error::invalid("median walk failed to terminate"))
}

/// The measure of a subtree: total mass of the atoms it contains.
pub fn subtree_mass(nu: &TreeMeasure, s: &Subtree) -> f64 {
    nu.atoms()
        .iter()
        .filter(|(p, _)| s.contains_tol(p, GEOM_TOL))
        .map(|&(_, w)| w)
        .sum()
}

/// Signed distance from the center of mass, positive on the component that
/// contains the median. 1-Lipschitz on the whole tree, and `|φ(w)|` equals
/// the distance from the center of mass exactly.
#[derive(Debug, Clone)]
pub struct PhiNu {
    base: TreePoint,
    positive: Option<Subtree>,
    /// True when the median sat at the center of mass and the positive
    /// component was chosen as the one of largest mass.
    pub tie_broken: bool,
}

impl PhiNu {
    pub fn new(
        tree: &Tree,
        nu: &TreeMeasure,
        median: &MedianResult,
        bary: &BarycenterResult,
    ) -> Result<PhiNu> {
        let base = tree.canonical(&bary.point)?;
        let comps = tree.components_at(&base)?;
        if comps.is_empty() {
            return Ok(PhiNu { base, positive: None, tie_broken: false });
        }
        let med = tree.canonical(&median.point)?;
        if !tree.points_eq(&med, &base) {
            let positive = comps
                .into_iter()
                .find(|c| c.contains(&med))
                .ok_or_else(|| Error::invalid("median not covered by any component"))?;
            return Ok(PhiNu { base, positive: Some(positive), tie_broken: false });
        }
        // The median sits at the center of mass, which lies in every
        // component closure; take the heaviest component.
        let heaviest = comps
            .into_iter()
            .max_by(|a, b| subtree_mass(nu, a).total_cmp(&subtree_mass(nu, b)))
            .unwrap();
        Ok(PhiNu { base, positive: Some(heaviest), tie_broken: true })
    }

    /// Builds the function with an explicitly chosen positive component
    /// (index into `components_at` order at the center of mass).
    pub fn with_component(tree: &Tree, bary: &BarycenterResult, comp_idx: usize) -> Result<PhiNu> {
        let base = tree.canonical(&bary.point)?;
        let comps = tree.components_at(&base)?;
        if comp_idx >= comps.len() {
            return Err(Error::invalid("component index out of range"));
        }
        Ok(PhiNu {
            base,
            positive: Some(comps[comp_idx].clone()),
            tie_broken: false,
        })
    }

    pub fn base_point(&self) -> &TreePoint {
        &self.base
    }

    pub fn eval(&self, tree: &Tree, w: &TreePoint) -> Result<f64> {
        let w = tree.canonical(w)?;
        let d = tree.distance(&self.base, &w)?;
        match &self.positive {
            Some(c) if c.contains(&w) => Ok(d),
            _ => Ok(-d),
        }
    }

    /// The push-forward `φ_*(ν)` on the line.
    pub fn pushforward(&self, tree: &Tree, nu: &TreeMeasure) -> Result<LineMeasure> {
        let atoms = nu
            .atoms()
            .iter()
            .map(|(p, w)| Ok((self.eval(tree, p)?, *w)))
            .collect::<Result<Vec<_>>>()?;
        LineMeasure::from_scalars(atoms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star3(masses: [f64; 3]) -> (Tree, TreeMeasure) {
        let t = Tree::new(
            &["c", "l0", "l1", "l2"],
            &[("c", "l0", 1.0), ("c", "l1", 1.0), ("c", "l2", 1.0)],
        )
        .unwrap();
        let nu = TreeMeasure::new(
            &t,
            vec![
                (TreePoint::Vertex(1), masses[0]),
                (TreePoint::Vertex(2), masses[1]),
                (TreePoint::Vertex(3), masses[2]),
            ],
        )
        .unwrap();
        (t, nu)
    }

    #[test]
    fn imbalance_star_examples() {
        let (t, nu) = star3([1.0 / 3.0; 3]);
        let center = TreePoint::Vertex(0);
        let comps = t.components_at(&center).unwrap();
        for c in &comps {
            let v = directional_imbalance(&t, &nu, &center, c).unwrap();
            assert!((v - (-1.0 / 3.0)).abs() < 1e-12);
        }
        // at a leaf, the single component holds everything else
        let leaf = TreePoint::Vertex(1);
        let comps = t.components_at(&leaf).unwrap();
        let v = directional_imbalance(&t, &nu, &leaf, &comps[0]).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-12);
        // wrong component is an input error
        assert!(directional_imbalance(&t, &nu, &center, &comps[0]).is_err());
    }

    #[test]
    fn barycenter_two_mass_edge() {
        let t = Tree::new(&["a", "b"], &[("a", "b", 1.0)]).unwrap();
        let nu = TreeMeasure::new(
            &t,
            vec![(TreePoint::Vertex(0), 1.0), (TreePoint::Vertex(1), 3.0)],
        )
        .unwrap();
        let res = tree_barycenter(&t, &nu).unwrap();
        match res.point {
            TreePoint::OnEdge { edge: 0, offset } => assert!((offset - 0.75).abs() < 1e-9),
            other => panic!("expected interior point, got {other:?}"),
        }
        // objective = 1·(3/4)² + 3·(1/4)² = 0.75
        assert!((res.objective - 0.75).abs() < 1e-9);
        assert!(res.max_violation <= 1e-9 * instance_scale(&t, &nu));
    }

    #[test]
    fn barycenter_star_and_point_mass() {
        let (t, nu) = star3([1.0 / 3.0; 3]);
        let res = tree_barycenter(&t, &nu).unwrap();
        assert_eq!(res.point, TreePoint::Vertex(0));
        let one = TreeMeasure::new(&t, vec![(TreePoint::Vertex(2), 2.0)]).unwrap();
        let res = tree_barycenter(&t, &one).unwrap();
        assert_eq!(res.point, TreePoint::Vertex(2));
        assert_eq!(res.objective, 0.0);
        assert_eq!(verify_sturm(&t, &one, &res.point).unwrap(), 0.0);
    }

    #[test]
    fn sturm_err_at_non_barycenter() {
        let (t, nu) = star3([1.0 / 3.0; 3]);
        let v = verify_sturm(&t, &nu, &TreePoint::Vertex(1)).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn median_examples() {
        // uniform star: the walk's answer must certify (a leaf with exactly
        // m/3 is itself a median here)
        let (t, nu) = star3([1.0 / 3.0; 3]);
        let med = tree_median(&t, &nu).unwrap();
        let a = subtree_mass(&nu, &med.part_a);
        let b = subtree_mass(&nu, &med.part_b);
        assert!(a >= 1.0 / 3.0 - 1e-12 && b >= 1.0 / 3.0 - 1e-12);

        // tilted star: only the center works
        let (t1, nu1) = star3([0.32, 0.34, 0.34]);
        let med = tree_median(&t1, &nu1).unwrap();
        assert_eq!(med.point, TreePoint::Vertex(0));
        let a = subtree_mass(&nu1, &med.part_a);
        let b = subtree_mass(&nu1, &med.part_b);
        assert!(a >= 1.0 / 3.0 - 1e-12 && b >= 1.0 / 3.0 - 1e-12);

        // heavy/light pair: the heavy atom is a median
        let t2 = Tree::new(&["a", "b"], &[("a", "b", 2.0)]).unwrap();
        let nu2 = TreeMeasure::new(
            &t2,
            vec![(TreePoint::Vertex(0), 0.9), (TreePoint::Vertex(1), 0.1)],
        )
        .unwrap();
        let med = tree_median(&t2, &nu2).unwrap();
        assert_eq!(med.point, TreePoint::Vertex(0));

        // four uniform atoms on a path: a median lies in the middle stretch
        let t3 = Tree::from_indexed_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let nu3 =
            TreeMeasure::new(&t3, (0..4).map(|i| (TreePoint::Vertex(i), 0.25)).collect()).unwrap();
        let med = tree_median(&t3, &nu3).unwrap();
        let x = t3.distance(&TreePoint::Vertex(0), &med.point).unwrap();
        assert!((1.0..=2.0).contains(&x));
        for part in [&med.part_a, &med.part_b] {
            assert!(subtree_mass(&nu3, part) >= 0.25 * 4.0 / 3.0 - 1e-12);
        }
    }

    #[test]
    fn median_single_vertex_tree() {
        let t = Tree::new::<&str>(&["only"], &[]).unwrap();
        let nu = TreeMeasure::new(&t, vec![(TreePoint::Vertex(0), 5.0)]).unwrap();
        let med = tree_median(&t, &nu).unwrap();
        assert_eq!(med.point, TreePoint::Vertex(0));
        assert!(subtree_mass(&nu, &med.part_a) >= 5.0 / 3.0);
    }

    #[test]
    fn phi_sign_structure() {
        let (t, nu) = star3([0.5, 0.3, 0.2]);
        let bary = tree_barycenter(&t, &nu).unwrap();
        let med = tree_median(&t, &nu).unwrap();
        let phi = PhiNu::new(&t, &nu, &med, &bary).unwrap();
        assert_eq!(phi.eval(&t, &bary.point).unwrap(), 0.0);
        let d_med = t.distance(&bary.point, &med.point).unwrap();
        assert!((phi.eval(&t, &med.point).unwrap() - d_med).abs() < 1e-12);
        // one branch positive, two negative
        let vals: Vec<f64> = (1..4)
            .map(|v| phi.eval(&t, &TreePoint::Vertex(v)).unwrap())
            .collect();
        assert_eq!(vals.iter().filter(|&&x| x > 0.0).count(), 1);
        assert_eq!(vals.iter().filter(|&&x| x < 0.0).count(), 2);
        // |φ| = d(bary, ·) exactly on atoms
        for (p, _) in nu.atoms() {
            let d = t.distance(&bary.point, p).unwrap();
            assert!((phi.eval(&t, p).unwrap().abs() - d).abs() < 1e-12);
        }
    }

    #[test]
    fn barycenter_interior_atoms_on_edge() {
        // atoms strictly inside one edge; barycenter must land between them
        let t = Tree::new(&["a", "b"], &[("a", "b", 4.0)]).unwrap();
        let nu = TreeMeasure::new(
            &t,
            vec![
                (TreePoint::OnEdge { edge: 0, offset: 1.0 }, 1.0),
                (TreePoint::OnEdge { edge: 0, offset: 3.0 }, 1.0),
            ],
        )
        .unwrap();
        let res = tree_barycenter(&t, &nu).unwrap();
        match res.point {
            TreePoint::OnEdge { edge: 0, offset } => assert!((offset - 2.0).abs() < 1e-9),
            other => panic!("unexpected barycenter {other:?}"),
        }
    }
}
