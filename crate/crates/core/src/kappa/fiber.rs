//! Fiber-polytope volumes by a signed decomposition into vertex cones.
//!
//! For `ξ` off every wall the fiber `{x ≥ 0 : Σ x_j X_j = ξ}` is a simple
//! polytope of dimension `d = n − r` whose vertices are the feasible bases
//! `B`. With a generic objective `c`,
//!
//! `vol = Σ_B (c_B M_B⁻¹ ξ)^d / (d! |det M_B| ∏_{j∉B} −(c_j − c_B M_B⁻¹ X_j))`,
//!
//! measured in the coordinates complementary to the simple-root basis.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::linalg::{self, QMat};
use crate::rational::{qi, Q};

#[derive(Clone, Debug)]
pub(crate) struct BasisData {
    pub inv: QMat,
    /// Row vector `c_B M_B⁻¹`.
    pub objective: Vec<Q>,
    /// `1 / (d! |det M_B| ∏ −reduced costs)`.
    pub weight: Q,
    /// `M_B⁻¹ g_k` for every perturbation direction.
    pub perturbed: Vec<Vec<Q>>,
}

#[derive(Clone, Debug)]
pub(crate) struct FiberEvaluator {
    pub degree: u32,
    pub bases: Vec<BasisData>,
}

impl FiberEvaluator {
    pub fn new(vectors: &[Vec<Q>], rank: usize, directions: &[Vec<Q>]) -> Self {
        let n = vectors.len();
        let degree = (n - rank) as u32;
        let mut fact = Q::one();
        for i in 2..=degree {
            fact *= qi(i64::from(i));
        }
        let subsets: Vec<(Vec<usize>, QMat, Q)> = (0..n)
            .combinations(rank)
            .filter_map(|b| {
                let m: QMat = (0..rank).map(|i| b.iter().map(|&j| vectors[j][i].clone()).collect()).collect();
                let det = linalg::det(&m);
                if det.is_zero() {
                    return None;
                }
                let inv = linalg::inverse(&m)?;
                Some((b, inv, det.abs()))
            })
            .collect();
        // Deterministic search for an objective with no vanishing reduced cost.
        let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
        'search: loop {
            let c: Vec<Q> = (0..n)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    qi(((state >> 33) % 10_007) as i64 + 1)
                })
                .collect();
            let mut bases = Vec::with_capacity(subsets.len());
            for (b, inv, det) in &subsets {
                let cb: Vec<Q> = b.iter().map(|&j| c[j].clone()).collect();
                let objective: Vec<Q> = (0..rank)
                    .map(|k| (0..rank).map(|i| &cb[i] * &inv[i][k]).sum())
                    .collect();
                let mut denom = fact.clone() * det;
                for j in (0..n).filter(|j| !b.contains(j)) {
                    let reduced = &c[j] - dot(&objective, &vectors[j]);
                    if reduced.is_zero() {
                        continue 'search;
                    }
                    denom *= -reduced;
                }
                let perturbed = directions.iter().map(|g| linalg::mat_vec(inv, g)).collect();
                bases.push(BasisData { inv: inv.clone(), objective, weight: denom.recip(), perturbed });
            }
            return FiberEvaluator { degree, bases };
        }
    }

    /// Indices of bases feasible at `ξ` perturbed lexicographically along
    /// `lead` (if given) and then the fixed generic directions.
    pub fn feasible(&self, xi: &[Q], lead: Option<&[Q]>) -> Vec<usize> {
        let mut out = Vec::new();
        'b: for (k, b) in self.bases.iter().enumerate() {
            let x = linalg::mat_vec(&b.inv, xi);
            let lead_x = lead.map(|d| linalg::mat_vec(&b.inv, d));
            for i in 0..x.len() {
                let mut s = x[i].clone();
                if s.is_zero() {
                    if let Some(l) = &lead_x {
                        s = l[i].clone();
                    }
                }
                let mut g = 0;
                while s.is_zero() && g < b.perturbed.len() {
                    s = b.perturbed[g][i].clone();
                    g += 1;
                }
                if !s.is_positive() {
                    continue 'b;
                }
            }
            out.push(k);
        }
        out
    }

    /// `Σ_{B ∈ set} weight_B (objective_B · ξ)^d`.
    pub fn sum_over(&self, set: &[usize], xi: &[Q]) -> Q {
        set.iter()
            .map(|&k| {
                let b = &self.bases[k];
                &b.weight * num_traits::pow(dot(&b.objective, xi), self.degree as usize)
            })
            .sum()
    }

    pub fn volume(&self, xi: &[Q], lead: Option<&[Q]>) -> Q {
        let set = self.feasible(xi, lead);
        self.sum_over(&set, xi)
    }
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
