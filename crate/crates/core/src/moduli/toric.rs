use num_traits::Zero;
use serde::Serialize;

use super::report::{Method, VolumeReport};
use super::{Marking, Surface};
use crate::error::{Error, Result};
use crate::kappa::Kappa;
use crate::lie::RootSystem;
use crate::linalg;
use crate::rational::{qi, to_f64, CartanVec, Surd, Q};

/// One reduced space in the toric decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct SignedToricTerm {
    /// `(−1)^{|R⁺|} det(u) det(w1) det(w2)` for `w = u ∘ t_l`.
    pub sign: i8,
    pub lattice: CartanVec,
    /// The κ argument `w1μ1 + w2μ2 + w(τ)`.
    pub shift: CartanVec,
    /// κ at `shift`, in inner-product normalization, times `#Z/Vol(T)`.
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ToricDecomposition {
    pub terms: Vec<SignedToricTerm>,
    /// Signed sum in simple-root coordinates before normalization.
    #[serde(skip)]
    pub coordinate: Q,
    pub report: VolumeReport,
}

impl ToricDecomposition {
    pub fn total(&self) -> f64 {
        self.report.value
    }
}

/// The pants volume reorganized over `w ∈ Waff⁺` with `|l| ≤ radius`.
/// The alternating double sum is anti-invariant under `W`, so the term for
/// the lattice vector `l` equals `det(u)` times the same sum at `u(τ + l)`;
/// each κ is computed by the vertex-cone route. Terms are grouped by `l`
/// and a group whose sum vanishes is left out.
pub fn toric_decomposition(
    rs: &RootSystem,
    mu1: &CartanVec,
    mu2: &CartanVec,
    tau: &CartanVec,
    radius: &Q,
) -> Result<ToricDecomposition> {
    let marking = Marking::new(rs, vec![mu1.clone(), mu2.clone(), tau.clone()])?;
    if !marking.interior[2] {
        return Err(Error::NotRegular(format!("τ = {tau:?} is not interior to the alcove")));
    }
    let kappa = Kappa::for_roots(rs, 1);
    let sign0: i8 = if rs.num_positive() % 2 == 0 { 1 } else { -1 };
    let collect = |radius: &Q| -> Result<(Vec<SignedToricTerm>, Q)> {
        let mut terms = Vec::new();
        let mut total = Q::zero();
        let zero = CartanVec::zero(rs.rank());
        for l in rs.lattice_ball(&zero, &(radius * radius)) {
            let w = rs.waff_positive_for(&l);
            let wt = w.apply(tau);
            let mut group = Vec::new();
            let mut group_total = Q::zero();
            for w1 in rs.weyl_group() {
                let a = w1.apply(mu1);
                for w2 in rs.weyl_group() {
                    let shift = &(&a + &w2.apply(mu2)) + &wt;
                    if kappa.degree() == 0 && kappa.wall_containing(&shift.0).is_some() {
                        return Err(Error::OnWall(format!("toric term argument {shift:?} lies on a wall")));
                    }
                    let c = kappa.point_coordinate(&shift.0, None);
                    if c.is_zero() {
                        continue;
                    }
                    let sign = sign0 * w.sign * w1.sign() * w2.sign();
                    group_total += qi(i64::from(sign)) * &c;
                    group.push(SignedToricTerm { sign, lattice: l.clone(), shift, value: to_f64(&c) });
                }
            }
            // far from the support the terms of one w cancel exactly
            if !group_total.is_zero() {
                total += group_total;
                terms.extend(group);
            }
        }
        Ok((terms, total))
    };
    let norm = Surd::inv_sqrt(&linalg::det(&rs.coroot_gram())).mul(&kappa.normalization()).scale(&qi(rs.center_order as i64));
    let (mut terms, total) = collect(radius)?;
    let scale = norm.to_f64();
    for t in &mut terms {
        t.value *= scale;
    }
    let mut report = VolumeReport::new(rs, Surface::pants(), &marking, Method::ToricDecomposition, 0.0).with_exact(&norm.scale(&total));
    report.parameters.truncation_radius = Some(to_f64(radius));
    report.parameters.lattice_terms = Some(terms.len());
    let (_, wider) = collect(&(radius + qi(1)))?;
    if wider != total {
        report.warnings.push(format!("total changes when the radius grows past {}", to_f64(radius)));
    }
    Ok(ToricDecomposition { terms, coordinate: total, report })
}

/// A radius past which no further affine Weyl element contributes.
pub fn toric_radius(rs: &RootSystem, mu1: &CartanVec, mu2: &CartanVec, tau: &CartanVec) -> Q {
    let r: f64 = [mu1, mu2, tau].iter().map(|m| to_f64(&rs.norm2(m)).sqrt()).sum();
    Q::from_integer(num_bigint::BigInt::from(r.ceil() as i64 + 1))
}
