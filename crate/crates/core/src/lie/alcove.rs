use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use super::RootSystem;
use crate::rational::{q, CartanVec, Q};

/// The fundamental alcove `{μ : ⟨α_i, μ⟩ ≥ 0, ⟨α₀, μ⟩ ≤ 1}`.
#[derive(Clone, Debug, Serialize)]
pub struct Alcove {
    /// Facet `i < rank` is `⟨α_i, μ⟩ = 0`; facet `rank` is `⟨α₀, μ⟩ = 1`.
    pub vertices: Vec<CartanVec>,
}

/// Exact position of a point relative to the closed alcove.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AlcoveMembership {
    Interior,
    /// Indices of the facets containing the point.
    Boundary(Vec<usize>),
    Outside,
}

impl AlcoveMembership {
    pub fn is_interior(&self) -> bool {
        matches!(self, AlcoveMembership::Interior)
    }

    pub fn in_closure(&self) -> bool {
        !matches!(self, AlcoveMembership::Outside)
    }
}

impl RootSystem {
    pub fn alcove(&self) -> Alcove {
        let mut vertices = vec![CartanVec::zero(self.rank())];
        for w in &self.fundamental_weights {
            let h = self.pairing(&self.highest_root, w);
            vertices.push(w.scale(&h.recip()));
        }
        Alcove { vertices }
    }

    /// Values `⟨α_1,μ⟩, …, ⟨α_r,μ⟩, 1 − ⟨α₀,μ⟩`; all nonnegative on the closed alcove.
    pub fn alcove_slacks(&self, mu: &CartanVec) -> Vec<Q> {
        let mut s: Vec<Q> = self.simple_roots.iter().map(|a| self.pairing(a, mu)).collect();
        s.push(Q::one() - self.pairing(&self.highest_root, mu));
        s
    }

    pub fn alcove_membership(&self, mu: &CartanVec) -> AlcoveMembership {
        let s = self.alcove_slacks(mu);
        if s.iter().any(Q::is_negative) {
            return AlcoveMembership::Outside;
        }
        let faces: Vec<usize> = (0..s.len()).filter(|&i| s[i].is_zero()).collect();
        if faces.is_empty() {
            AlcoveMembership::Interior
        } else {
            AlcoveMembership::Boundary(faces)
        }
    }

    /// Barycenter of the alcove: an interior point with rational coordinates.
    pub fn alcove_barycenter(&self) -> CartanVec {
        let v = self.alcove().vertices;
        let n = v.len() as i64;
        v.iter()
            .fold(CartanVec::zero(self.rank()), |acc, x| &acc + x)
            .scale(&q(1, n))
    }

    /// `Σ_i c_i v_i / Σ_i c_i` over the alcove vertices `v_i`.
    pub fn alcove_point(&self, weights: &[i64]) -> CartanVec {
        assert_eq!(weights.len(), self.rank() + 1, "one weight per alcove vertex");
        let total: i64 = weights.iter().sum();
        assert!(total > 0 && weights.iter().all(|&c| c >= 0), "weights must be nonnegative and not all zero");
        self.alcove()
            .vertices
            .iter()
            .zip(weights)
            .fold(CartanVec::zero(self.rank()), |acc, (v, &c)| &acc + &v.scale(&q(c, total)))
    }

    /// A random regular interior point with integer barycentric weights
    /// below `max_weight`.
    pub fn random_regular_point<R: Rng>(&self, rng: &mut R, max_weight: i64) -> CartanVec {
        loop {
            let w: Vec<i64> = (0..=self.rank()).map(|_| rng.gen_range(1..max_weight.max(2))).collect();
            let mu = self.alcove_point(&w);
            if self.is_regular(&mu) {
                return mu;
            }
        }
    }

    /// `⟨α, μ⟩ ∉ Z` for every root `α`.
    pub fn is_regular(&self, mu: &CartanVec) -> bool {
        self.positive_roots.iter().all(|a| !self.pairing(a, mu).is_integer())
    }
}
