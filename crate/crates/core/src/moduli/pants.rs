use num_traits::Zero;

use super::report::{Method, VolumeReport};
use super::sum::PantsFunction;
use super::{moduli_dimension, Marking, Surface};
use crate::error::{Error, Result};
use crate::lie::RootSystem;
use crate::piecewise::{apply_operator, pullback_operator, Chamber, Piece, PiecewiseFunction, PiecewisePolynomial};
use crate::polytope::{subdivide, Halfspace, Polytope};
use crate::rational::{CartanVec, Surd};
use crate::symmetric::{symmetric_extension, ElementarySymmetricPoly};

/// The pants volume as a function of `μ3`, with `μ1, μ2` fixed.
pub fn pants_function(rs: &RootSystem, mu1: &CartanVec, mu2: &CartanVec) -> Result<PantsFunction> {
    PantsFunction::new(rs, &[mu1.clone(), mu2.clone()])
}

/// Exact volume of the moduli space of the three-holed sphere.
pub fn pants_volume_kappa(rs: &RootSystem, mu1: &CartanVec, mu2: &CartanVec, mu3: &CartanVec) -> Result<VolumeReport> {
    marking_volume_kappa(rs, &[mu1.clone(), mu2.clone(), mu3.clone()])
}

/// Exact volume for the sphere with `b ≥ 3` holes by the κ-sum with
/// multiplicity `b − 2`.
pub fn marking_volume_kappa(rs: &RootSystem, points: &[CartanVec]) -> Result<VolumeReport> {
    if points.len() < 3 {
        return Err(Error::Hypothesis(format!("need at least three markings, got {}", points.len())));
    }
    let marking = Marking::new(rs, points.to_vec())?;
    let (last, fixed) = points.split_last().unwrap();
    let f = PantsFunction::new(rs, fixed)?;
    let ls = f.lattice_vectors(last);
    let sum = f.sum_over(&ls);
    let value = sum.value(&last.0)?;
    let surface = Surface::new(0, points.len() as u32);
    let mut report = VolumeReport::new(rs, surface, &marking, Method::KappaSum, 0.0).with_exact(&value);
    report.parameters.truncation_radius = Some(f.support_radius());
    report.parameters.lattice_terms = Some(ls.len());
    if !marking.all_interior() {
        report.warnings.push("marking on the alcove boundary: value is the continuous extension".into());
    }
    Ok(report)
}

/// The pants volume in `μ3` over the closed alcove, one polynomial per cell
/// of the arrangement of all κ walls met by the sum.
pub fn pants_volume_poly(rs: &RootSystem, mu1: &CartanVec, mu2: &CartanVec) -> Result<PiecewisePolynomial> {
    Marking::new(rs, vec![mu1.clone(), mu2.clone()])?;
    let f = pants_function(rs, mu1, mu2)?;
    let global = f.sum_over(&f.alcove_lattice_vectors());
    let alcove = Polytope::simplex(rs.alcove().vertices.iter().map(|v| v.0.clone()).collect())
        .ok_or_else(|| Error::Invalid("degenerate alcove".into()))?;
    let cuts: Vec<_> = global
        .hyperplanes()
        .into_iter()
        .filter(|(n, b)| {
            let s: Vec<_> = alcove.vertices.iter().map(|v| crate::polytope::dot(n, v) - b).collect();
            s.iter().any(|x| x > &Zero::zero()) && s.iter().any(|x| x < &Zero::zero())
        })
        .collect();
    let mut pieces = Vec::new();
    for cell in subdivide(alcove.clone(), &cuts) {
        let x = cell.centroid();
        let polynomial = global.polynomial_near(&x, None)?;
        if polynomial.is_zero() {
            continue;
        }
        pieces.push(Piece { chamber: Chamber { inequalities: cell.halfspaces.clone(), interior_point: CartanVec(x) }, polynomial });
    }
    let walls = cuts.into_iter().map(|(n, b)| Halfspace::new(n, b)).collect();
    Ok(PiecewisePolynomial::new(rs.rank(), alcove.halfspaces, walls, pieces, f.normalization()))
}

/// `(φ*p)(∂/∂μ3)` applied to the pants volume function at `μ3`, for `p`
/// symmetric in `k = dim_C M` variables.
pub fn mixed_characteristic_number(
    rs: &RootSystem,
    mu1: &CartanVec,
    mu2: &CartanVec,
    mu3: &CartanVec,
    p: &ElementarySymmetricPoly,
) -> Result<Surd> {
    Marking::new(rs, vec![mu1.clone(), mu2.clone(), mu3.clone()])?;
    let k = moduli_dimension(rs, Surface::pants())?;
    let d = p.degree().unwrap_or(0) as usize;
    if d > k {
        return Err(Error::Degree(format!("polynomial of degree {d} exceeds the complex dimension {k}")));
    }
    let ext = symmetric_extension(p, rs.num_positive())?;
    let op = pullback_operator(rs, &ext)?;
    let f = pants_function(rs, mu1, mu2)?;
    apply_operator(&op, &f, mu3)
}
