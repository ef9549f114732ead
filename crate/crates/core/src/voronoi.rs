//! Voronoi cells, covering radius, deep holes and Delaunay cells.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{Rat, RatVec};
use crate::lattice::{GramLattice, LatticePoint};
use crate::polytope::{HalfSpace, Polytope};

/// The Voronoi cell of the origin, bounded by the bisectors of the relevant vectors.
pub fn voronoi_cell(lattice: &GramLattice, cap: usize) -> Result<Polytope> {
    let n = lattice.dim();
    if n > cap {
        return Err(Error::DimensionCapExceeded { n, cap });
    }
    let g = lattice.gram();
    let two = Rat::from_int(2);
    let hs = lattice
        .relevant_vectors()
        .iter()
        .map(|v| {
            let v = v.to_ratvec();
            HalfSpace::new(g.mul_vec(&v), g.quad(&v) / &two)
        })
        .collect::<Result<Vec<_>>>()?;
    Polytope::from_halfspaces_capped(hs, cap)
}

/// `R²`: the largest `Q_G` over the cell's vertices.
pub fn covering_radius_sq(lattice: &GramLattice, cell: &Polytope) -> Rat {
    cell.vertices().iter().map(|v| lattice.norm_sq(v)).max().expect("cell has vertices")
}

/// A point `t` with `Q_G(t) = dist²(t, Λ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeepHole {
    pub t: RatVec,
    pub r_sq: Rat,
}

impl DeepHole {
    /// Checks that `t` is as far from the lattice as it is from the origin.
    pub fn new(lattice: &GramLattice, t: RatVec) -> Result<Self> {
        let r_sq = lattice.norm_sq(&t);
        let (d, _) = lattice.closest_vectors(&t);
        if d != r_sq {
            return Err(Error::NotADeepHole(format!("{t:?}: Q(t) = {r_sq} but dist² = {d}")));
        }
        Ok(DeepHole { t, r_sq })
    }
}

/// All cell vertices attaining `R²`, sorted lexicographically.
pub fn deep_holes(lattice: &GramLattice, cell: &Polytope) -> Result<Vec<DeepHole>> {
    let r_sq = covering_radius_sq(lattice, cell);
    cell.vertices().iter().filter(|v| lattice.norm_sq(v) == r_sq).map(|v| DeepHole::new(lattice, v.clone())).collect()
}

/// Lattice points on an empty sphere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelaunayCell {
    pub center: RatVec,
    pub r_sq: Rat,
    pub vertices: Vec<LatticePoint>,
}

impl DelaunayCell {
    pub fn vertex_vectors(&self) -> Vec<RatVec> {
        self.vertices.iter().map(LatticePoint::to_ratvec).collect()
    }
}

/// The Delaunay cell on the sphere of radius `‖t‖` centred at `−t`.
pub fn delaunay_cell_at(lattice: &GramLattice, hole: &DeepHole) -> Result<DelaunayCell> {
    if lattice.norm_sq(&hole.t) != hole.r_sq {
        return Err(Error::NotADeepHole(format!("{:?}: stored R² does not match Q(t)", hole.t)));
    }
    let center = -&hole.t;
    let (d, vertices) = lattice.closest_vectors(&center);
    if d != hole.r_sq {
        return Err(Error::NotADeepHole(format!("{:?}: dist² = {d}, R² = {}", hole.t, hole.r_sq)));
    }
    Ok(DelaunayCell { center, r_sq: hole.r_sq.clone(), vertices })
}

/// Result of an emptiness check; `Err` carries a lattice point strictly inside.
pub type EmptySphereCheck = std::result::Result<(), LatticePoint>;

/// Passes iff no lattice point lies strictly inside the cell's sphere.
pub fn verify_empty_sphere(lattice: &GramLattice, cell: &DelaunayCell) -> EmptySphereCheck {
    lattice
        .enumerate_in_ball(&cell.center, &cell.r_sq)
        .into_iter()
        .find(|w| lattice.dist_sq(&w.to_ratvec(), &cell.center) < cell.r_sq)
        .map_or(Ok(()), Err)
}
