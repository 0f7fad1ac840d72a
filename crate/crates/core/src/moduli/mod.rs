//! Volumes of moduli spaces of flat connections on surfaces with boundary,
//! by four independent routes: the κ-sum, its toric reorganization, the
//! Witten character series and gluing integrals.
//!
//! A marking `μ_j` is a point of the closed alcove; the holonomy around the
//! `j`th boundary lies in the conjugacy class of `exp(μ_j)`.

mod glue;
mod pants;
mod report;
mod sum;
mod toric;
pub(crate) mod witten;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{AlcoveMembership, RootSystem};
use crate::rational::CartanVec;

pub use glue::{glue_volume, Decomposition};
pub use pants::{
    marking_volume_kappa, mixed_characteristic_number, pants_function, pants_volume_kappa, pants_volume_poly,
};
pub use report::{ConventionStamp, Method, Parameters, VolumeReport};
pub use sum::{KappaTerm, LinearKappaSum, PantsFunction};
pub use toric::{toric_decomposition, toric_radius, SignedToricTerm, ToricDecomposition};
pub use witten::{conjugacy_volume, witten_volume, WittenOptions, CONVERGENCE_WARNING};

/// The compact oriented surface `Σ_h^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Surface {
    pub genus: u32,
    pub boundary: u32,
}

impl Surface {
    pub fn new(genus: u32, boundary: u32) -> Self {
        Surface { genus, boundary }
    }

    pub fn pants() -> Self {
        Surface { genus: 0, boundary: 3 }
    }

    /// `−χ(Σ) = 2h − 2 + b`.
    pub fn neg_euler(&self) -> i64 {
        2 * i64::from(self.genus) - 2 + i64::from(self.boundary)
    }

    /// The Witten formula needs `2h + b ≥ 3`.
    pub fn check_stable(&self) -> Result<()> {
        if 2 * self.genus + self.boundary < 3 {
            return Err(Error::Hypothesis(format!("2h + b ≥ 3 fails for h = {}, b = {}", self.genus, self.boundary)));
        }
        Ok(())
    }
}

/// Boundary markings with their exact position in the alcove.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Marking {
    pub points: Vec<CartanVec>,
    pub interior: Vec<bool>,
    pub regular: Vec<bool>,
}

impl Marking {
    pub fn new(rs: &RootSystem, points: Vec<CartanVec>) -> Result<Self> {
        let mut interior = Vec::with_capacity(points.len());
        for p in &points {
            if p.rank() != rs.rank() {
                return Err(Error::Invalid(format!("marking {p:?} has rank {} instead of {}", p.rank(), rs.rank())));
            }
            match rs.alcove_membership(p) {
                AlcoveMembership::Outside => return Err(Error::OutsideAlcove(format!("{p:?}"))),
                m => interior.push(m.is_interior()),
            }
        }
        let regular = points.iter().map(|p| rs.is_regular(p)).collect();
        Ok(Marking { points, interior, regular })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn all_interior(&self) -> bool {
        self.interior.iter().all(|&b| b)
    }
}

/// Complex dimension of the pants moduli space, `(dim G − 3 rank)/2`.
pub fn moduli_dimension(rs: &RootSystem, surface: Surface) -> Result<usize> {
    if surface != Surface::pants() {
        return Err(Error::UnsupportedDecomposition(format!(
            "dimension is only provided for the pair of pants, not h = {}, b = {}",
            surface.genus, surface.boundary
        )));
    }
    Ok((rs.dim_g() - 3 * rs.rank()) / 2)
}
