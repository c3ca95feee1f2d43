//! Finite metric measure spaces, finitely supported measures on trees and on
//! Euclidean space, and the scalar functionals attached to them: `V_p`,
//! partial diameter, separation distance, central radius, push-forwards and
//! net coarsening.

mod separation;

pub use separation::{
    hypercube_separation, separation_bruteforce, separation_search_witness, HypercubeSep,
    TreeSepSolver,
};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rtree::{Tree, TreePoint};
use crate::GEOM_TOL;

/// Mass comparisons resolve in favor of the closed conditions (`>=`).
pub(crate) const MASS_TOL: f64 = 1e-12;

/// Structural fast paths for exact separation on generated spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Structure {
    General,
    /// `{0,1}^dim` with Hamming distance, scaled by `scale` (1 for the raw
    /// metric, `1/dim` for the diameter-normalized one).
    Hypercube { dim: u32, scale: f64 },
    /// Points isometric to the real line at the given coordinates.
    Line(Vec<f64>),
}

/// A finite metric measure space: a symmetric distance matrix with a positive
/// mass on every point.
#[derive(Debug, Clone)]
pub struct MmSpace {
    dist: Vec<Vec<f64>>,
    mass: Vec<f64>,
    total: f64,
    structure: Structure,
}

impl MmSpace {
    /// Validates metric axioms: zero diagonal, symmetry, strictly positive
    /// off-diagonal entries and the triangle inequality within `1e-12`.
    /// The cubic triangle scan is skipped above 256 points.
    pub fn new(dist: Vec<Vec<f64>>, mass: Vec<f64>) -> Result<Self> {
        let n = dist.len();
        if n == 0 {
            return Err(Error::invalid("mm-space needs at least one point"));
        }
        if mass.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::invalid("distance matrix and mass vector sizes disagree"));
        }
        for (i, row) in dist.iter().enumerate() {
            if row[i] != 0.0 {
                return Err(Error::invalid(format!("dist[{i}][{i}] must be 0")));
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::invalid(format!("dist[{i}][{j}] = {d} is not a distance")));
                }
                if (d - dist[j][i]).abs() > MASS_TOL {
                    return Err(Error::invalid(format!("dist[{i}][{j}] != dist[{j}][{i}]")));
                }
                if i != j && d <= 0.0 {
                    return Err(Error::invalid(format!("off-diagonal dist[{i}][{j}] must be positive")));
                }
            }
        }
        if n <= 256 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if dist[i][j] > dist[i][k] + dist[k][j] + MASS_TOL {
                            return Err(Error::invalid(format!(
                                "triangle inequality fails on ({i},{j},{k})"
                            )));
                        }
                    }
                }
            }
        }
        for (i, &w) in mass.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::invalid(format!("mass[{i}] = {w} must be positive")));
            }
        }
        let total = mass.iter().sum();
        Ok(MmSpace { dist, mass, total, structure: Structure::General })
    }

    pub(crate) fn with_structure(mut self, structure: Structure) -> Self {
        self.structure = structure;
        self
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.mass[i]
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for row in &self.dist {
            for &x in row {
                d = d.max(x);
            }
        }
        d
    }

    /// Smallest strictly positive pairwise distance.
    pub fn min_positive_distance(&self) -> f64 {
        let mut d = f64::INFINITY;
        for (i, row) in self.dist.iter().enumerate() {
            for &x in row.iter().skip(i + 1) {
                if x > 0.0 {
                    d = d.min(x);
                }
            }
        }
        d
    }

    /// Exact separation distance `Sep(X; k1, k2)`: the largest distance
    /// between two nonempty subsets of the support with masses at least `k1`
    /// and `k2`.
    pub fn separation(&self, k1: f64, k2: f64) -> Result<f64> {
        match &self.structure {
            Structure::Line(pos) => Ok(separation::separation_line_points(pos, &self.mass, k1, k2)),
            Structure::Hypercube { dim, scale } => {
                Ok(hypercube_separation(*dim, k1, k2) as f64 * scale)
            }
            Structure::General => {
                if self.len() <= separation::EXACT_SEARCH_CAP {
                    Ok(separation::separation_search(&self.dist, &self.mass, k1, k2))
                } else {
                    Err(Error::Unsupported(format!(
                        "exact separation on an unstructured space with {} > {} points",
                        self.len(),
                        separation::EXACT_SEARCH_CAP
                    )))
                }
            }
        }
    }

    /// Parse `{ "dist": [[...]], "mass": [...] }`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::invalid("mm-space JSON must be an object"))?;
        let dist = obj
            .get("dist")
            .ok_or_else(|| Error::invalid("mm-space JSON needs \"dist\""))?;
        let dist: Vec<Vec<f64>> = serde_json::from_value(dist.clone())?;
        let mass = obj
            .get("mass")
            .ok_or_else(|| Error::invalid("mm-space JSON needs \"mass\""))?;
        let mass: Vec<f64> = serde_json::from_value(mass.clone())?;
        MmSpace::new(dist, mass)
    }

    pub fn to_json(&self) -> Value {
        json!({ "dist": self.dist, "mass": self.mass })
    }
}

/// A finitely supported measure on a tree. Atom points are pairwise distinct
/// in canonical form; duplicates merge at construction.
#[derive(Debug, Clone)]
pub struct TreeMeasure {
    atoms: Vec<(TreePoint, f64)>,
    total: f64,
}

impl TreeMeasure {
    pub fn new(tree: &Tree, atoms: Vec<(TreePoint, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("measure needs at least one atom"));
        }
        let mut merged: Vec<(TreePoint, f64)> = Vec::new();
        for (p, w) in atoms {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::invalid(format!("atom mass {w} must be positive")));
            }
            let p = tree.canonical(&p)?;
            match merged.iter_mut().find(|(q, _)| tree.points_eq(q, &p)) {
                Some((_, m)) => *m += w,
                None => merged.push((p, w)),
            }
        }
        let total = merged.iter().map(|(_, w)| w).sum();
        Ok(TreeMeasure { atoms: merged, total })
    }

    pub fn atoms(&self) -> &[(TreePoint, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    /// Pairwise atom distance matrix.
    pub fn atom_distances(&self, tree: &Tree) -> Vec<Vec<f64>> {
        let k = self.atoms.len();
        let mut m = vec![vec![0.0; k]; k];
        for i in 0..k {
            let field = tree.distances_from_point(&self.atoms[i].0);
            for j in 0..k {
                if i != j {
                    m[i][j] = field.to_point(tree, &self.atoms[j].0);
                }
            }
        }
        m
    }

    /// Diameter of the support.
    pub fn support_diameter(&self, tree: &Tree) -> f64 {
        let d = self.atom_distances(tree);
        let mut best = 0.0f64;
        for row in &d {
            for &x in row {
                best = best.max(x);
            }
        }
        best
    }

    /// `V_p`: the double-integral `p`-variation of the measure.
    pub fn vp(&self, tree: &Tree, p: f64) -> Result<f64> {
        let d = self.atom_distances(tree);
        vp_from_matrix(&d, &self.masses(), p)
    }

    fn masses(&self) -> Vec<f64> {
        self.atoms.iter().map(|&(_, w)| w).collect()
    }

    /// Partial diameter: the smallest diameter of a support subset carrying
    /// mass at least `m - kappa`.
    ///
    /// In a tree a set of diameter `D` lies in a closed ball of radius `D/2`
    /// centered at the midpoint of a diametral pair, so scanning atoms and
    /// pairwise geodesic midpoints as ball centers is exact.
    pub fn partial_diameter(&self, tree: &Tree, kappa: f64) -> Result<f64> {
        check_kappa(kappa, self.total)?;
        if kappa >= self.total - MASS_TOL {
            return Ok(0.0);
        }
        let k = self.atoms.len();
        if k == 1 {
            return Ok(0.0);
        }
        let mut centers: Vec<TreePoint> = self.atoms.iter().map(|&(p, _)| p).collect();
        for i in 0..k {
            for j in (i + 1)..k {
                let d = tree.distance(&self.atoms[i].0, &self.atoms[j].0)?;
                if d > 0.0 {
                    centers.push(tree.point_along(&self.atoms[i].0, &self.atoms[j].0, d / 2.0)?);
                }
            }
        }
        let need = self.total - kappa;
        let mut best = f64::INFINITY;
        for c in &centers {
            let field = tree.distances_from_point(c);
            let mut da: Vec<(f64, f64)> = self
                .atoms
                .iter()
                .map(|(p, w)| (field.to_point(tree, p), *w))
                .collect();
            da.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut cum = 0.0;
            for &(d, w) in &da {
                cum += w;
                if cum >= need - MASS_TOL {
                    best = best.min(2.0 * d);
                    break;
                }
            }
        }
        Ok(best)
    }

    /// Smallest radius whose closed ball about `c` captures mass `>= m - kappa`.
    pub fn central_radius(&self, tree: &Tree, kappa: f64, c: &TreePoint) -> Result<f64> {
        let field = tree.distances_from_point(&tree.canonical(c)?);
        let dists: Vec<f64> = self.atoms.iter().map(|(p, _)| field.to_point(tree, p)).collect();
        Ok(central_radius_from_dists(&dists, &self.masses(), self.total, kappa))
    }

    /// Mass inside the closed ball `B(c, r)`.
    pub fn ball_mass(&self, tree: &Tree, c: &TreePoint, r: f64) -> Result<f64> {
        let field = tree.distances_from_point(&tree.canonical(c)?);
        Ok(self
            .atoms
            .iter()
            .filter(|(p, _)| field.to_point(tree, p) <= r + GEOM_TOL)
            .map(|&(_, w)| w)
            .sum())
    }

    /// Exact separation distance of the measure on its tree.
    pub fn separation(&self, tree: &Tree, k1: f64, k2: f64) -> f64 {
        TreeSepSolver::new(tree, self).solve(k1, k2)
    }

    /// Moves every atom to a greedily built `eps`-net of the support; mass is
    /// preserved and no atom moves farther than `eps`.
    pub fn coarsen(&self, tree: &Tree, eps: f64) -> Result<TreeMeasure> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::invalid(format!("coarsening radius {eps} must be positive")));
        }
        let mut net: Vec<(TreePoint, f64)> = Vec::new();
        for &(p, w) in &self.atoms {
            let field = tree.distances_from_point(&p);
            match net
                .iter_mut()
                .find(|(q, _)| field.to_point(tree, q) <= eps + GEOM_TOL)
            {
                Some((_, m)) => *m += w,
                None => net.push((p, w)),
            }
        }
        TreeMeasure::new(tree, net)
    }

    /// Parse `{ "atoms": [[point, mass], ...] }` against a tree.
    pub fn from_json(tree: &Tree, value: &Value) -> Result<Self> {
        let atoms = parse_atoms(value)?;
        let atoms = atoms
            .into_iter()
            .map(|(pv, w)| Ok((tree.point_from_json(&pv)?, w)))
            .collect::<Result<Vec<_>>>()?;
        TreeMeasure::new(tree, atoms)
    }

    pub fn to_json(&self, tree: &Tree) -> Value {
        json!({
            "atoms": self
                .atoms
                .iter()
                .map(|(p, w)| json!([tree.point_to_json(p), w]))
                .collect::<Vec<_>>(),
        })
    }
}

/// A finitely supported measure on `R^d`.
#[derive(Debug, Clone)]
pub struct LineMeasure {
    atoms: Vec<(Vec<f64>, f64)>,
    dim: usize,
    total: f64,
}

impl LineMeasure {
    pub fn new(atoms: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("measure needs at least one atom"));
        }
        let dim = atoms[0].0.len();
        if dim == 0 {
            return Err(Error::invalid("atom positions need dimension >= 1"));
        }
        let mut merged: Vec<(Vec<f64>, f64)> = Vec::new();
        for (x, w) in atoms {
            if x.len() != dim {
                return Err(Error::invalid("atom positions have mixed dimensions"));
            }
            if x.iter().any(|c| !c.is_finite()) {
                return Err(Error::invalid("atom position must be finite"));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::invalid(format!("atom mass {w} must be positive")));
            }
            match merged.iter_mut().find(|(y, _)| euclid(&x, y) <= GEOM_TOL) {
                Some((_, m)) => *m += w,
                None => merged.push((x, w)),
            }
        }
        let total = merged.iter().map(|(_, w)| w).sum();
        Ok(LineMeasure { atoms: merged, dim, total })
    }

    pub fn from_scalars(atoms: Vec<(f64, f64)>) -> Result<Self> {
        LineMeasure::new(atoms.into_iter().map(|(x, w)| (vec![x], w)).collect())
    }

    pub fn atoms(&self) -> &[(Vec<f64>, f64)] {
        &self.atoms
    }

    /// Scalar positions; only valid for `dim == 1`.
    pub fn scalar_atoms(&self) -> Vec<(f64, f64)> {
        assert_eq!(self.dim, 1, "scalar view of a d>1 measure");
        self.atoms.iter().map(|(x, w)| (x[0], *w)).collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    /// Mass-weighted mean of the atom positions.
    pub fn mean(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for (x, w) in &self.atoms {
            for (ci, xi) in c.iter_mut().zip(x) {
                *ci += w * xi;
            }
        }
        for ci in &mut c {
            *ci /= self.total;
        }
        c
    }

    pub fn vp(&self, p: f64) -> Result<f64> {
        let k = self.atoms.len();
        let mut d = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in (i + 1)..k {
                let x = euclid(&self.atoms[i].0, &self.atoms[j].0);
                d[i][j] = x;
                d[j][i] = x;
            }
        }
        let w: Vec<f64> = self.atoms.iter().map(|&(_, w)| w).collect();
        vp_from_matrix(&d, &w, p)
    }

    /// Partial diameter. Exact by a sliding window over the sorted support in
    /// dimension 1, and by subset enumeration (support of at most 15 atoms)
    /// in higher dimension.
    pub fn partial_diameter(&self, kappa: f64) -> Result<f64> {
        check_kappa(kappa, self.total)?;
        if kappa >= self.total - MASS_TOL {
            return Ok(0.0);
        }
        let need = self.total - kappa;
        if self.dim == 1 {
            let mut pts = self.scalar_atoms();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut best = f64::INFINITY;
            // window covers atoms i..=j inclusive
            let mut j = 0usize;
            let mut window = pts[0].1;
            for i in 0..pts.len() {
                if j < i {
                    j = i;
                    window = pts[i].1;
                }
                while window < need - MASS_TOL && j + 1 < pts.len() {
                    j += 1;
                    window += pts[j].1;
                }
                if window >= need - MASS_TOL {
                    best = best.min(pts[j].0 - pts[i].0);
                }
                window -= pts[i].1;
            }
            return Ok(best);
        }
        let k = self.atoms.len();
        if k > 15 {
            return Err(Error::Unsupported(format!(
                "partial diameter in dimension {} limited to 15 atoms, got {k}",
                self.dim
            )));
        }
        let mut d = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in 0..k {
                d[i][j] = euclid(&self.atoms[i].0, &self.atoms[j].0);
            }
        }
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << k) {
            let mass: f64 = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| self.atoms[i].1)
                .sum();
            if mass < need - MASS_TOL {
                continue;
            }
            let mut diam = 0.0f64;
            for i in 0..k {
                if mask >> i & 1 == 0 {
                    continue;
                }
                for j in (i + 1)..k {
                    if mask >> j & 1 == 1 {
                        diam = diam.max(d[i][j]);
                    }
                }
            }
            best = best.min(diam);
        }
        Ok(best)
    }

    /// Smallest radius whose closed ball about `c` captures mass `>= m - kappa`.
    pub fn central_radius(&self, kappa: f64, c: &[f64]) -> Result<f64> {
        if c.len() != self.dim {
            return Err(Error::invalid("center dimension mismatch"));
        }
        let dists: Vec<f64> = self.atoms.iter().map(|(x, _)| euclid(x, c)).collect();
        let w: Vec<f64> = self.atoms.iter().map(|&(_, w)| w).collect();
        Ok(central_radius_from_dists(&dists, &w, self.total, kappa))
    }

    /// Mass inside the closed ball `B(c, r)`.
    pub fn ball_mass(&self, c: &[f64], r: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|(x, _)| euclid(x, c) <= r + GEOM_TOL)
            .map(|&(_, w)| w)
            .sum()
    }

    /// Exact separation distance (dimension 1 only).
    pub fn separation(&self, k1: f64, k2: f64) -> Result<f64> {
        if self.dim != 1 {
            let k = self.len();
            if k > separation::EXACT_SEARCH_CAP {
                return Err(Error::Unsupported(
                    "separation in dimension > 1 limited to small supports".into(),
                ));
            }
            let mut d = vec![vec![0.0; k]; k];
            for i in 0..k {
                for j in 0..k {
                    d[i][j] = euclid(&self.atoms[i].0, &self.atoms[j].0);
                }
            }
            let w: Vec<f64> = self.atoms.iter().map(|&(_, w)| w).collect();
            return Ok(separation::separation_search(&d, &w, k1, k2));
        }
        let pts = self.scalar_atoms();
        let pos: Vec<f64> = pts.iter().map(|&(x, _)| x).collect();
        let w: Vec<f64> = pts.iter().map(|&(_, m)| m).collect();
        Ok(separation::separation_line_points(&pos, &w, k1, k2))
    }

    /// Parse `{ "atoms": [[position, mass], ...] }` with scalar or vector
    /// positions.
    pub fn from_json(value: &Value) -> Result<Self> {
        let atoms = parse_atoms(value)?;
        let atoms = atoms
            .into_iter()
            .map(|(pv, w)| {
                let pos = match &pv {
                    Value::Number(x) => vec![x.as_f64().unwrap()],
                    Value::Array(xs) => xs
                        .iter()
                        .map(|x| x.as_f64().ok_or_else(|| Error::invalid("position must be numeric")))
                        .collect::<Result<Vec<_>>>()?,
                    other => return Err(Error::invalid(format!("bad atom position {other}"))),
                };
                Ok((pos, w))
            })
            .collect::<Result<Vec<_>>>()?;
        LineMeasure::new(atoms)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "atoms": self
                .atoms
                .iter()
                .map(|(x, w)| {
                    if self.dim == 1 {
                        json!([x[0], w])
                    } else {
                        json!([x, w])
                    }
                })
                .collect::<Vec<_>>(),
        })
    }
}

/// A validated 1-Lipschitz function from an mm-space into the line.
#[derive(Debug, Clone)]
pub struct LipschitzFunction {
    values: Vec<f64>,
}

/// Validation slack for 1-Lipschitz constraints.
pub const LIP_TOL: f64 = 1e-9;

impl LipschitzFunction {
    pub fn new(space: &MmSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::invalid("function values and space size disagree"));
        }
        for (i, a) in values.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::invalid(format!("value[{i}] must be finite")));
            }
            for (j, b) in values.iter().enumerate().skip(i + 1) {
                if (a - b).abs() > space.dist(i, j) + LIP_TOL {
                    return Err(Error::invalid(format!(
                        "|f({i}) - f({j})| = {} exceeds d = {}",
                        (a - b).abs(),
                        space.dist(i, j)
                    )));
                }
            }
        }
        Ok(LipschitzFunction { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The push-forward measure `f_*(mu_X)` on the line.
    pub fn pushforward(&self, space: &MmSpace) -> LineMeasure {
        let atoms = self
            .values
            .iter()
            .zip(space.masses())
            .map(|(&x, &w)| (x, w))
            .collect();
        LineMeasure::from_scalars(atoms).expect("pushforward of a nonempty space")
    }
}

/// A validated 1-Lipschitz map from an mm-space into a tree.
#[derive(Debug, Clone)]
pub struct LipschitzTreeMap {
    images: Vec<TreePoint>,
}

impl LipschitzTreeMap {
    pub fn new(space: &MmSpace, tree: &Tree, images: Vec<TreePoint>) -> Result<Self> {
        if images.len() != space.len() {
            return Err(Error::invalid("map images and space size disagree"));
        }
        let images = images
            .iter()
            .map(|p| tree.canonical(p))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..images.len() {
            let field = tree.distances_from_point(&images[i]);
            for (j, q) in images.iter().enumerate().skip(i + 1) {
                let dt = field.to_point(tree, q);
                if dt > space.dist(i, j) + LIP_TOL {
                    return Err(Error::invalid(format!(
                        "d_T(f({i}), f({j})) = {dt} exceeds d_X = {}",
                        space.dist(i, j)
                    )));
                }
            }
        }
        Ok(LipschitzTreeMap { images })
    }

    pub fn images(&self) -> &[TreePoint] {
        &self.images
    }

    /// The push-forward measure `f_*(mu_X)` on the tree.
    pub fn pushforward(&self, space: &MmSpace, tree: &Tree) -> TreeMeasure {
        let atoms = self
            .images
            .iter()
            .zip(space.masses())
            .map(|(&p, &w)| (p, w))
            .collect();
        TreeMeasure::new(tree, atoms).expect("pushforward of a nonempty space")
    }
}

pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn vp_from_matrix(d: &[Vec<f64>], w: &[f64], p: f64) -> Result<f64> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::invalid(format!("V_p exponent {p} must be positive")));
    }
    let mut s = 0.0;
    for (i, wi) in w.iter().enumerate() {
        for (j, wj) in w.iter().enumerate() {
            if i != j {
                s += wi * wj * d[i][j].powf(p);
            }
        }
    }
    Ok(s.powf(1.0 / p))
}

fn central_radius_from_dists(dists: &[f64], w: &[f64], total: f64, kappa: f64) -> f64 {
    if kappa >= total - MASS_TOL {
        return 0.0;
    }
    let need = total - kappa;
    let mut dw: Vec<(f64, f64)> = dists.iter().copied().zip(w.iter().copied()).collect();
    dw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut cum = 0.0;
    for &(d, m) in &dw {
        cum += m;
        if cum >= need - MASS_TOL {
            return d;
        }
    }
    dw.last().map(|&(d, _)| d).unwrap_or(0.0)
}

fn check_kappa(kappa: f64, total: f64) -> Result<()> {
    if !(kappa.is_finite() && kappa >= -MASS_TOL && kappa <= total + MASS_TOL) {
        return Err(Error::invalid(format!(
            "kappa = {kappa} outside [0, {total}]"
        )));
    }
    Ok(())
}

fn parse_atoms(value: &Value) -> Result<Vec<(Value, f64)>> {
    let arr = value
        .as_object()
        .and_then(|o| o.get("atoms"))
        .and_then(Value::as_array)
        .ok_or_else(|| Error::invalid("measure JSON needs an \"atoms\" array"))?;
    arr.iter()
        .map(|a| {
            let pair = a
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::invalid("each atom must be [point, mass]"))?;
            let w = pair[1]
                .as_f64()
                .ok_or_else(|| Error::invalid("atom mass must be numeric"))?;
            Ok((pair[0].clone(), w))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rtree::Tree;

    fn line_tree(k: usize) -> (Tree, Vec<TreePoint>) {
        // path of k atoms at integer positions 0..k-1, unit edges
        let edges: Vec<(usize, usize, f64)> = (0..k - 1).map(|i| (i, i + 1, 1.0)).collect();
        let t = Tree::from_indexed_edges(k, &edges).unwrap();
        let pts = (0..k).map(TreePoint::Vertex).collect();
        (t, pts)
    }

    #[test]
    fn vp_examples() {
        // two unit atoms at distance D: V_p = 2^{1/p} D
        let (t, pts) = line_tree(2);
        let nu = TreeMeasure::new(&t, vec![(pts[0], 1.0), (pts[1], 1.0)]).unwrap();
        for p in [1.0, 2.0, 3.0] {
            let expect = 2f64.powf(1.0 / p) * 1.0;
            assert!((nu.vp(&t, p).unwrap() - expect).abs() < 1e-12);
        }
        // half/half at 0 and 1, p = 2: V_2 = 1/sqrt(2)
        let nu = LineMeasure::from_scalars(vec![(0.0, 0.5), (1.0, 0.5)]).unwrap();
        assert!((nu.vp(2.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        // single atom
        let nu = LineMeasure::from_scalars(vec![(3.0, 2.0)]).unwrap();
        assert_eq!(nu.vp(2.0).unwrap(), 0.0);
    }

    #[test]
    fn partial_diameter_line_window() {
        // uniform 0.1 atoms at 0..9, kappa = 0.2 -> 7
        let nu =
            LineMeasure::from_scalars((0..10).map(|i| (i as f64, 0.1)).collect()).unwrap();
        assert!((nu.partial_diameter(0.2).unwrap() - 7.0).abs() < 1e-12);
        assert_eq!(nu.partial_diameter(1.0).unwrap(), 0.0);
        assert!(nu.partial_diameter(-0.5).is_err());
        assert!(nu.partial_diameter(1.5).is_err());
        // single atom
        let one = LineMeasure::from_scalars(vec![(0.0, 1.0)]).unwrap();
        assert_eq!(one.partial_diameter(0.3).unwrap(), 0.0);
    }

    #[test]
    fn partial_diameter_tree_matches_line() {
        let (t, pts) = line_tree(10);
        let atoms = pts.iter().map(|&p| (p, 0.1)).collect();
        let nu = TreeMeasure::new(&t, atoms).unwrap();
        assert!((nu.partial_diameter(&t, 0.2).unwrap() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn central_radius_two_point() {
        // masses 0.9 at 0 and 0.1 at n, mean = 1 (n = 10)
        let nu = LineMeasure::from_scalars(vec![(0.0, 0.9), (10.0, 0.1)]).unwrap();
        let c = nu.mean();
        assert!((c[0] - 1.0).abs() < 1e-12);
        assert_eq!(nu.ball_mass(&c, 0.5), 0.0);
        for kappa in [0.1, 0.3, 0.5, 0.8] {
            assert!((nu.central_radius(kappa, &c).unwrap() - 1.0).abs() < 1e-12);
        }
        // kappa >= m -> 0
        assert_eq!(nu.central_radius(1.0, &c).unwrap(), 0.0);
        // point mass at center
        let one = LineMeasure::from_scalars(vec![(2.0, 1.0)]).unwrap();
        assert_eq!(one.central_radius(0.5, &[2.0]).unwrap(), 0.0);
    }

    #[test]
    fn coarsen_examples() {
        let (t, pts) = line_tree(3);
        // atoms at 0 and 0.5 (on edge 0), eps = 1 -> one atom
        let nu = TreeMeasure::new(
            &t,
            vec![
                (pts[0], 0.3),
                (TreePoint::OnEdge { edge: 0, offset: 0.5 }, 0.7),
            ],
        )
        .unwrap();
        let c = nu.coarsen(&t, 1.0).unwrap();
        assert_eq!(c.len(), 1);
        assert!((c.total_mass() - 1.0).abs() < 1e-12);
        // eps below all pairwise distances: unchanged
        let c = nu.coarsen(&t, 0.4).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn pushforward_merges() {
        let x = MmSpace::new(
            vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]],
            vec![0.25, 0.5, 0.25],
        )
        .unwrap();
        // constant map -> single atom of total mass
        let f = LipschitzFunction::new(&x, vec![1.0, 1.0, 1.0]).unwrap();
        let nu = f.pushforward(&x);
        assert_eq!(nu.len(), 1);
        assert!((nu.total_mass() - 1.0).abs() < 1e-12);
        // two points to one value
        let f = LipschitzFunction::new(&x, vec![0.0, 1.0, 0.0]).unwrap();
        let nu = f.pushforward(&x);
        assert_eq!(nu.len(), 2);
        let w0: f64 = nu
            .atoms()
            .iter()
            .find(|(p, _)| p[0] == 0.0)
            .map(|&(_, w)| w)
            .unwrap();
        assert!((w0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lipschitz_validation() {
        let x = MmSpace::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![0.5, 0.5]).unwrap();
        assert!(LipschitzFunction::new(&x, vec![0.0, 1.0]).is_ok());
        assert!(LipschitzFunction::new(&x, vec![0.0, 1.5]).is_err());
    }

    #[test]
    fn mmspace_validation() {
        assert!(MmSpace::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![1.0, -1.0]).is_err());
        assert!(MmSpace::new(vec![vec![0.0, 1.0], vec![2.0, 0.0]], vec![1.0, 1.0]).is_err());
        // triangle violation
        assert!(MmSpace::new(
            vec![
                vec![0.0, 1.0, 5.0],
                vec![1.0, 0.0, 1.0],
                vec![5.0, 1.0, 0.0]
            ],
            vec![1.0, 1.0, 1.0]
        )
        .is_err());
    }
}
