use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::report::{Method, VolumeReport};
use super::sum::{sphere_normalization, KappaTerm, LinearKappaSum, PantsFunction};
use super::{Marking, Surface};
use crate::error::{Error, Result};
use crate::kappa::Kappa;
use crate::lie::RootSystem;
use crate::piecewise::PiecewiseFunction;
use crate::polytope::{subdivide, Polytope};
use crate::quadrature::{gauss_legendre, triangle_rule};
use crate::rational::{to_f64, CartanVec, Q};

/// A surface together with the single gluing that produces it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decomposition {
    /// `Σ₁¹`: two boundary circles of one pair of pants glued together.
    Torus1,
    /// `Σ₀⁴`: two pairs of pants glued along one boundary circle.
    Sphere4,
}

impl Decomposition {
    pub fn surface(self) -> Surface {
        match self {
            Decomposition::Torus1 => Surface::new(1, 1),
            Decomposition::Sphere4 => Surface::new(0, 4),
        }
    }
}

impl FromStr for Decomposition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torus1" => Ok(Decomposition::Torus1),
            "sphere4" => Ok(Decomposition::Sphere4),
            _ => Err(Error::UnsupportedDecomposition(format!("{s:?}; expected torus1 or sphere4"))),
        }
    }
}

/// `(1/k) ∫_A Vol(M(Σ̂, …, ν, *ν)) |dν|`, where `|dν|` gives `t/Λ*` mass 1
/// and `k` is 1 for a connected cut surface and `#Z` otherwise.
///
/// The integrand is piecewise polynomial; the alcove is cut along every
/// breakpoint hyperplane and each cell is integrated with a Gauss rule of
/// `nodes` points per direction.
pub fn glue_volume(rs: &RootSystem, decomposition: Decomposition, marking: &Marking, nodes: usize) -> Result<VolumeReport> {
    let surface = decomposition.surface();
    if marking.len() != surface.boundary as usize {
        return Err(Error::Invalid(format!("{} markings for {} boundary components", marking.len(), surface.boundary)));
    }
    if rs.rank() > 2 {
        return Err(Error::UnsupportedDecomposition(format!("alcove quadrature is implemented up to rank 2, not {}", rs.spec)));
    }
    if nodes == 0 {
        return Err(Error::Invalid("at least one quadrature node is needed".into()));
    }
    let neg_w0: Vec<Vec<Q>> = (0..rs.rank())
        .map(|i| (0..rs.rank()).map(|j| -rs.longest_element().apply(&CartanVec::unit(rs.rank(), j)).0[i].clone()).collect())
        .collect();
    let (factors, k) = match decomposition {
        Decomposition::Torus1 => (vec![torus_integrand(rs, &marking.points[0], &neg_w0)], 1),
        Decomposition::Sphere4 => {
            let p = &marking.points;
            let f1 = PantsFunction::new(rs, &[p[0].clone(), p[1].clone()])?;
            let f2 = PantsFunction::new(rs, &[p[2].clone(), p[3].clone()])?;
            let a = f1.sum_over(&f1.alcove_lattice_vectors());
            let mut b = f2.sum_over(&f2.alcove_lattice_vectors());
            for t in &mut b.terms {
                t.matrix = Some(neg_w0.clone());
            }
            (vec![a, b], rs.center_order)
        }
    };
    let alcove = Polytope::simplex(rs.alcove().vertices.iter().map(|v| v.0.clone()).collect())
        .ok_or_else(|| Error::Invalid("degenerate alcove".into()))?;
    let cuts: Vec<(Vec<Q>, Q)> = factors.iter().flat_map(|f| f.hyperplanes()).unique().collect();
    let cells = subdivide(alcove, &cuts);
    let mut total = 0.0;
    let mut max_degree = 0;
    for cell in &cells {
        let x = cell.centroid();
        let mut poly = crate::poly::Polynomial::one(rs.rank());
        for f in &factors {
            poly = poly.mul(&f.polynomial_near(&x, None)?);
        }
        if poly.is_zero() {
            continue;
        }
        max_degree = max_degree.max(poly.degree().unwrap_or(0));
        for s in cell.triangulate() {
            let v: Vec<Vec<f64>> = s.iter().map(|&i| cell.vertices[i].iter().map(to_f64).collect()).collect();
            if rs.rank() == 1 {
                for (t, w) in gauss_legendre(nodes, v[0][0], v[1][0]) {
                    total += w.abs() * poly.eval_f64(&[t]);
                }
            } else {
                for (p, w) in triangle_rule([[v[0][0], v[0][1]], [v[1][0], v[1][1]], [v[2][0], v[2][1]]], nodes) {
                    total += w * poly.eval_f64(&p);
                }
            }
        }
    }
    let norm: f64 = factors.iter().map(|f| f.normalization.to_f64()).product();
    // |dν| = #Z · (Lebesgue measure in simple-root coordinates)
    let value = total * norm * rs.center_order as f64 / k as f64;
    let mut report = VolumeReport::new(rs, surface, marking, Method::GluingQuadrature, value);
    report.parameters.quadrature_nodes = Some(nodes);
    report.parameters.quadrature_cells = Some(cells.len());
    if (max_degree as usize) > 2 * nodes - 1 {
        report.warnings.push(format!("{nodes} nodes do not integrate degree {max_degree} exactly"));
    }
    Ok(report)
}

/// `ν ↦ Vol(M(Σ₀³; ν, *ν, μ))` as a κ-sum in `ν`:
/// `Σ_l Σ_{w1,w2} ε κ((w1 − w2 w0) ν + μ + l)`.
fn torus_integrand(rs: &RootSystem, mu: &CartanVec, neg_w0: &[Vec<Q>]) -> LinearKappaSum {
    let r = rs.rank();
    let kappa = Kappa::for_roots(rs, 1);
    let mut by_matrix: std::collections::BTreeMap<Vec<Vec<Q>>, i64> = Default::default();
    for w1 in rs.weyl_group() {
        for w2 in rs.weyl_group() {
            let m: Vec<Vec<Q>> = (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| {
                            let e = CartanVec::unit(r, j);
                            let a = &w1.apply(&e).0[i];
                            let b: Q = (0..r).map(|k| &w2.apply(&CartanVec::unit(r, k)).0[i] * &neg_w0[k][j]).sum();
                            a + b
                        })
                        .collect()
                })
                .collect();
            *by_matrix.entry(m).or_insert(0) += i64::from(w1.sign() * w2.sign());
        }
    }
    // |μ + l| ≤ |ν| + |*ν| ≤ 2 max_A |ν|
    let far = rs.alcove().vertices.iter().map(|v| to_f64(&rs.norm2(v)).sqrt()).fold(0.0, f64::max);
    let bound = (2.0 * far + 1e-9).powi(2);
    let ls = rs.lattice_points_where(mu, bound, |l| to_f64(&rs.norm2(&(mu + l))) <= bound);
    let mut terms = Vec::new();
    for (m, c) in by_matrix.into_iter().filter(|(_, c)| *c != 0) {
        for l in &ls {
            terms.push(KappaTerm { coeff: c, matrix: Some(m.clone()), shift: (mu + l).0 });
        }
    }
    LinearKappaSum { kappa, rank: r, terms, normalization: sphere_normalization(rs, 3) }
}
