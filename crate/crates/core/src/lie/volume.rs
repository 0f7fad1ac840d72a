//! Riemannian volumes under the basic inner product.
//!
//! `exp: t → T` is `μ ↦ e^{2πiμ}`, so `T = t/Λ` and `Vol(T)` is the
//! covolume of `Λ`. The flag manifold carries the metric induced from `G`;
//! its volume is `∏_{α>0} 1/(2π⟨ρ,α⟩)`, and `Vol(G) = Vol(T)·Vol(G/T)`.
//! The regular class through `e^{2πiμ}` has volume
//! `Vol(G/T)·∏_{α>0} (2 sin π⟨α,μ⟩)²`, which integrates over the alcove
//! against `Vol(T)`-normalized measure to give Weyl's integration formula.

use std::f64::consts::PI;

use super::RootSystem;
use crate::rational::{to_f64, CartanVec};

/// Exponent of `2 sin π⟨α,μ⟩` in the volume of a regular conjugacy class.
pub const CLASS_SINE_POWER: i32 = 2;

impl RootSystem {
    /// `Vol(G/T) = ∏_{α>0} 1/(2π⟨ρ,α⟩)`.
    pub fn volume_g_over_t(&self) -> f64 {
        self.positive_roots
            .iter()
            .map(|a| 1.0 / (2.0 * PI * to_f64(&self.pairing(&self.rho, a))))
            .product()
    }

    pub fn volume_g(&self) -> f64 {
        self.covolume_t() * self.volume_g_over_t()
    }

    /// `∏_{α>0} 2 sin π⟨α,μ⟩`, the Weyl denominator up to a phase.
    pub fn sine_product(&self, mu: &CartanVec) -> f64 {
        self.positive_roots
            .iter()
            .map(|a| 2.0 * (PI * to_f64(&self.pairing(a, mu))).sin())
            .product()
    }

    /// Riemannian volume of the conjugacy class of `exp(μ)` for regular `μ`.
    pub fn class_volume(&self, mu: &CartanVec) -> f64 {
        self.volume_g_over_t() * self.sine_product(mu).powi(CLASS_SINE_POWER)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn su2_is_a_three_sphere() {
        let r = RootSystem::from_name("A1").unwrap();
        let vol = r.volume_g();
        assert!((vol - 1.0 / (2f64.sqrt() * PI)).abs() < 1e-15);
        // circle of length Vol(T) = 2πR is a great circle of the 3-sphere of radius R
        let radius = r.covolume_t() / (2.0 * PI);
        assert!((vol - 2.0 * PI * PI * radius.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn su2_equatorial_class_is_a_great_two_sphere() {
        let r = RootSystem::from_name("A1").unwrap();
        let radius = r.covolume_t() / (2.0 * PI);
        let mu = r.from_fundamental(&[q(1, 2)]);
        assert!((r.class_volume(&mu) - 4.0 * PI * radius * radius).abs() < 1e-15);
    }

    #[test]
    fn weyl_integration_identity() {
        // ∫_{t/Λ} |Δ|² = |W| Vol(T), with |Δ|² = ∏ (2 sin π⟨α,μ⟩)²; A1: ∫₀¹ 4 sin²(πt) dt·|dμ/dt|
        let r = RootSystem::from_name("A1").unwrap();
        let n = 2000;
        let mut acc = 0.0;
        for k in 0..n {
            let t = (k as f64 + 0.5) / n as f64;
            acc += 4.0 * (PI * t).sin().powi(2) / n as f64;
        }
        // t ∈ [0,1] parametrizes the alcove; its metric length is |ω| = 1/√2, and t/Λ is two alcoves
        let integral = 2.0 * acc / 2f64.sqrt();
        assert!((integral - 2.0 * r.covolume_t()).abs() < 1e-9);
        assert!(r.volume_g() / (r.covolume_t() * r.volume_g_over_t()) > 0.0);
    }
}
