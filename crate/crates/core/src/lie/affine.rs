use num_traits::ToPrimitive;
use serde::Serialize;

use super::{RootSystem, WeylElement};
use crate::linalg;
use crate::rational::{qi, to_f64, CartanVec, Q};

/// `μ ↦ linear(μ) + translation`, with `translation ∈ Λ`.
#[derive(Clone, Debug, Serialize)]
pub struct AffineWeylElement {
    pub translation: CartanVec,
    pub linear: WeylElement,
    /// `det(linear)`.
    pub sign: i8,
}

impl AffineWeylElement {
    pub fn apply(&self, mu: &CartanVec) -> CartanVec {
        &self.linear.apply(mu) + &self.translation
    }
}

impl RootSystem {
    /// Lattice vectors `l` with `keep(l)`, searched in the box that contains
    /// `{l : |center + l|² ≤ bound}`. `bound` only sizes the search.
    pub fn lattice_points_where(
        &self,
        center: &CartanVec,
        bound: f64,
        keep: impl Fn(&CartanVec) -> bool,
    ) -> Vec<CartanVec> {
        let r = self.rank();
        let gc = self.coroot_gram();
        let inv = linalg::inverse(&gc).expect("coroot Gram is invertible");
        let k0: Vec<f64> = (0..r)
            .map(|i| to_f64(&(&center.0[i] * &self.gram[i][i] / qi(2))))
            .collect();
        let bound = bound.max(0.0);
        let ranges: Vec<(i64, i64)> = (0..r)
            .map(|i| {
                let b = (bound * to_f64(&inv[i][i])).sqrt() + 1e-9;
                ((-k0[i] - b).floor() as i64, (-k0[i] + b).ceil() as i64)
            })
            .collect();
        let mut out = Vec::new();
        let mut k: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            let mut l = CartanVec::zero(r);
            for (i, &ki) in k.iter().enumerate() {
                if ki != 0 {
                    l = &l + &self.coroot_basis[i].scale(&qi(ki));
                }
            }
            if keep(&l) {
                out.push(l);
            }
            let mut i = 0;
            loop {
                if i == r {
                    return out;
                }
                if k[i] < ranges[i].1 {
                    k[i] += 1;
                    break;
                }
                k[i] = ranges[i].0;
                i += 1;
            }
        }
    }

    /// Lattice vectors in the closed ball `|center + l|² ≤ radius2`.
    pub fn lattice_ball(&self, center: &CartanVec, radius2: &Q) -> Vec<CartanVec> {
        self.lattice_points_where(center, to_f64(radius2) + 1e-9, |l| {
            &self.norm2(&(center + l)) <= radius2
        })
    }

    /// One element of `Waff⁺` per lattice vector `l` with `|l| ≤ radius`:
    /// `w_l = u_l ∘ t_l` with `u_l ∈ W` moving the alcove `l + A` into the
    /// dominant chamber.
    pub fn enumerate_waff_positive(&self, radius: &Q) -> Vec<AffineWeylElement> {
        let r2 = radius * radius;
        let zero = CartanVec::zero(self.rank());
        self.lattice_ball(&zero, &r2)
            .into_iter()
            .map(|l| self.waff_positive_for(&l))
            .collect()
    }

    pub fn waff_positive_for(&self, l: &CartanVec) -> AffineWeylElement {
        let p = self.alcove_barycenter();
        let (u, _) = self.to_dominant(&(&p + l));
        let sign = u.sign();
        AffineWeylElement { translation: u.apply(l), linear: u, sign }
    }

    /// Number of affine root hyperplanes separating `A` from `w(A)`.
    pub fn affine_length(&self, w: &AffineWeylElement) -> usize {
        let p = self.alcove_barycenter();
        let wp = w.apply(&p);
        self.positive_roots
            .iter()
            .map(|a| {
                let x = self.pairing(a, &p);
                let y = self.pairing(a, &wp);
                let (lo, hi) = if x < y { (x, y) } else { (y, x) };
                // integers strictly between lo and hi; neither endpoint is an integer
                (hi.floor() - lo.floor()).to_integer().to_usize().unwrap()
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn rs(name: &str) -> RootSystem {
        RootSystem::from_name(name).unwrap()
    }

    #[test]
    fn radius_zero_is_identity() {
        let r = rs("A2");
        let ws = r.enumerate_waff_positive(&qi(0));
        assert_eq!(ws.len(), 1);
        assert!(ws[0].translation.is_zero());
        assert_eq!(ws[0].linear.length, 0);
    }

    #[test]
    fn a1_radius_sqrt2() {
        let r = rs("A1");
        let ball = r.lattice_ball(&CartanVec::zero(1), &qi(2));
        assert_eq!(ball.len(), 3);
    }

    #[test]
    fn signs_match_affine_length_parity() {
        let r = rs("A2");
        let ws = r.lattice_ball(&CartanVec::zero(2), &qi(8));
        assert!(ws.len() > 1);
        for l in ws {
            let w = r.waff_positive_for(&l);
            assert_eq!(i64::from(w.sign), w.linear.det());
            let parity = if r.affine_length(&w) % 2 == 0 { 1 } else { -1 };
            assert_eq!(w.sign, parity);
            let img = w.apply(&r.alcove_barycenter());
            assert!(r.simple_roots.iter().all(|a| r.pairing(a, &img) > Q::from(qi(0))));
        }
    }

    #[test]
    fn ball_count_matches_brute_force() {
        let r = rs("B2");
        let center = CartanVec::from_ratios(&[(1, 3), (1, 5)]);
        let rad2 = q(17, 2);
        let got = r.lattice_ball(&center, &rad2).len();
        let mut brute = 0;
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                let l = &r.coroot_basis[0].scale(&qi(a)) + &r.coroot_basis[1].scale(&qi(b));
                if r.norm2(&(&center + &l)) <= rad2 {
                    brute += 1;
                }
            }
        }
        assert_eq!(got, brute);
    }
}
