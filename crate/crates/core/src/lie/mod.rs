//! Root systems of the supported simple types, with exact rational data.
//!
//! Vectors live in the simple-root basis of `t*`. The invariant inner product
//! is the basic one: long roots have squared length 2. Through it `t` and `t*`
//! are identified, so coroots, weights and lattice vectors share one type.

mod affine;
mod alcove;
mod volume;
mod weyl;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use affine::AffineWeylElement;
pub use alcove::{Alcove, AlcoveMembership};
pub use weyl::WeylElement;

use crate::error::{Error, Result};
use crate::linalg::{self, QMat};
use crate::rational::{q, qi, CartanVec, Surd, Q};

/// Series letter of a simple Lie type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    G,
}

/// A supported simple, simply connected type such as `A2` or `G2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupSpec {
    pub series: Series,
    pub rank: usize,
}

/// Every type the engine accepts.
pub const SUPPORTED: &[(Series, usize)] = &[
    (Series::A, 1),
    (Series::A, 2),
    (Series::A, 3),
    (Series::A, 4),
    (Series::B, 2),
    (Series::C, 2),
    (Series::C, 3),
    (Series::D, 4),
    (Series::G, 2),
];

impl GroupSpec {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let spec = GroupSpec { series, rank };
        if SUPPORTED.contains(&(series, rank)) {
            Ok(spec)
        } else {
            Err(Error::UnsupportedType(spec.to_string()))
        }
    }

    /// Gram matrix of the simple roots under the basic inner product.
    fn gram(&self) -> QMat {
        let n = self.rank;
        let mut g = vec![vec![Q::zero(); n]; n];
        let link = |g: &mut QMat, i: usize, j: usize, v: Q| {
            g[i][j] = v.clone();
            g[j][i] = v;
        };
        match self.series {
            Series::A => {
                for i in 0..n {
                    g[i][i] = qi(2);
                    if i + 1 < n {
                        link(&mut g, i, i + 1, qi(-1));
                    }
                }
            }
            Series::B => {
                for i in 0..n {
                    g[i][i] = if i + 1 < n { qi(2) } else { qi(1) };
                    if i + 1 < n {
                        link(&mut g, i, i + 1, qi(-1));
                    }
                }
            }
            Series::C => {
                for i in 0..n {
                    g[i][i] = if i + 1 < n { qi(1) } else { qi(2) };
                    if i + 2 < n {
                        link(&mut g, i, i + 1, q(-1, 2));
                    } else if i + 1 < n {
                        link(&mut g, i, i + 1, qi(-1));
                    }
                }
            }
            Series::D => {
                for i in 0..n {
                    g[i][i] = qi(2);
                }
                for i in 0..n - 2 {
                    link(&mut g, i, i + 1, qi(-1));
                }
                link(&mut g, n - 3, n - 1, qi(-1));
            }
            Series::G => {
                g[0][0] = q(2, 3);
                g[1][1] = qi(2);
                link(&mut g, 0, 1, qi(-1));
            }
        }
        g
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.series, self.rank)
    }
}

impl FromStr for GroupSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnsupportedType(s.to_string());
        let mut chars = s.chars();
        let series = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Series::A,
            Some('B') => Series::B,
            Some('C') => Series::C,
            Some('D') => Series::D,
            Some('G') => Series::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        GroupSpec::new(series, rank)
    }
}

/// Root, weight and lattice data of a simple type. Immutable once built.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub spec: GroupSpec,
    pub gram: QMat,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub simple_roots: Vec<CartanVec>,
    /// Ordered by height, then lexicographically by coordinates.
    pub positive_roots: Vec<CartanVec>,
    pub highest_root: CartanVec,
    pub fundamental_weights: Vec<CartanVec>,
    /// Simple coroots; a basis of the integral lattice.
    pub coroot_basis: Vec<CartanVec>,
    pub center_order: u64,
    pub rho: CartanVec,
    weyl: Vec<WeylElement>,
    longest: usize,
}

/// Identifier of the positive-root ordering.
pub const ROOT_ORDERING_ID: &str = "height-then-lex";

pub fn build_root_system(spec: GroupSpec) -> Result<RootSystem> {
    RootSystem::new(spec)
}

impl RootSystem {
    pub fn new(spec: GroupSpec) -> Result<Self> {
        let spec = GroupSpec::new(spec.series, spec.rank)?;
        let r = spec.rank;
        let gram = spec.gram();
        let cartan_matrix: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let a = qi(2) * &gram[i][j] / &gram[j][j];
                        assert!(a.is_integer());
                        a.to_integer().to_i64().unwrap()
                    })
                    .collect()
            })
            .collect();
        let simple_roots: Vec<CartanVec> = (0..r).map(|i| CartanVec::unit(r, i)).collect();
        let coroot_basis: Vec<CartanVec> = (0..r)
            .map(|i| simple_roots[i].scale(&(qi(2) / &gram[i][i])))
            .collect();

        let positive_roots = positive_roots_by_closure(&simple_roots, &cartan_matrix);
        let highest_root = positive_roots.last().cloned().expect("nonempty");

        let a_q: QMat = cartan_matrix
            .iter()
            .map(|row| row.iter().map(|&x| qi(x)).collect())
            .collect();
        let a_inv = linalg::inverse(&a_q).expect("Cartan matrix is invertible");
        let fundamental_weights: Vec<CartanVec> =
            (0..r).map(|i| CartanVec(a_inv[i].clone())).collect();
        let det = linalg::det(&a_q);
        let center_order = det.to_integer().to_u64().expect("positive determinant");

        let mut rho = CartanVec::zero(r);
        for a in &positive_roots {
            rho = &rho + a;
        }
        rho = rho.scale(&q(1, 2));

        let weyl = weyl::generate(&cartan_matrix);
        let longest = (0..weyl.len()).max_by_key(|&i| weyl[i].length).unwrap();

        let rs = RootSystem {
            spec,
            gram,
            cartan_matrix,
            simple_roots,
            positive_roots,
            highest_root,
            fundamental_weights,
            coroot_basis,
            center_order,
            rho,
            weyl,
            longest,
        };
        debug_assert!(rs.check_invariants().is_ok());
        Ok(rs)
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::new(name.parse()?)
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    /// Number of positive roots.
    pub fn num_positive(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn dim_g(&self) -> usize {
        self.rank() + 2 * self.num_positive()
    }

    /// The invariant inner product.
    pub fn pairing(&self, u: &CartanVec, v: &CartanVec) -> Q {
        let mut s = Q::zero();
        for (i, ui) in u.0.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.0.iter().enumerate() {
                if !self.gram[i][j].is_zero() && !vj.is_zero() {
                    s += ui * &self.gram[i][j] * vj;
                }
            }
        }
        s
    }

    pub fn norm2(&self, u: &CartanVec) -> Q {
        self.pairing(u, u)
    }

    /// Linear functional `v ↦ ⟨u, v⟩` as a coordinate covector.
    pub fn covector(&self, u: &CartanVec) -> Vec<Q> {
        let r = self.rank();
        (0..r)
            .map(|j| (0..r).map(|i| &u.0[i] * &self.gram[i][j]).sum())
            .collect()
    }

    pub fn coroot(&self, alpha: &CartanVec) -> CartanVec {
        alpha.scale(&(qi(2) / self.norm2(alpha)))
    }

    /// `⟨μ, α_i∨⟩` for every simple coroot: coordinates in the fundamental-weight basis.
    pub fn to_fundamental(&self, mu: &CartanVec) -> Vec<Q> {
        self.coroot_basis.iter().map(|c| self.pairing(mu, c)).collect()
    }

    pub fn from_fundamental(&self, coeffs: &[Q]) -> CartanVec {
        let mut v = CartanVec::zero(self.rank());
        for (c, w) in coeffs.iter().zip(&self.fundamental_weights) {
            v = &v + &w.scale(c);
        }
        v
    }

    /// Determinant of the Gram matrix of the simple roots.
    pub fn gram_det(&self) -> Q {
        linalg::det(&self.gram)
    }

    /// Gram matrix of the simple coroots.
    pub fn coroot_gram(&self) -> QMat {
        self.coroot_basis
            .iter()
            .map(|a| self.coroot_basis.iter().map(|b| self.pairing(a, b)).collect())
            .collect()
    }

    pub fn weyl_group(&self) -> &[WeylElement] {
        &self.weyl
    }

    pub fn longest_element(&self) -> &WeylElement {
        &self.weyl[self.longest]
    }

    /// `*μ = −w₀ μ`.
    pub fn star(&self, mu: &CartanVec) -> CartanVec {
        -self.longest_element().apply(mu)
    }

    /// Squared length ratio of long to short roots.
    pub fn length_ratio(&self) -> Q {
        let mut lo = qi(2);
        for a in &self.positive_roots {
            let n = self.norm2(a);
            if n < lo {
                lo = n;
            }
        }
        qi(2) / lo
    }

    /// Checks the structural invariants; returns a description of the first failure.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let r = self.rank();
        if 2 * self.num_positive() + r != self.dim_g() {
            return Err("dimension".into());
        }
        if self.norm2(&self.highest_root) != qi(2) {
            return Err("highest root is not long".into());
        }
        for s in &self.simple_roots {
            if self.pairing(&self.highest_root, s).is_negative() {
                return Err("highest root is not dominant".into());
            }
        }
        for (i, w) in self.fundamental_weights.iter().enumerate() {
            for (j, c) in self.coroot_basis.iter().enumerate() {
                let expect = if i == j { Q::one() } else { Q::zero() };
                if self.pairing(w, c) != expect {
                    return Err(format!("<w{i}, a{j}v> wrong"));
                }
            }
        }
        for a in &self.positive_roots {
            if a.0.iter().any(|c| c.is_negative() || !c.is_integer()) {
                return Err(format!("root {a:?} not a nonnegative integer combination"));
            }
            let n = self.norm2(a);
            if n != qi(2) && n != qi(2) / self.length_ratio() {
                return Err(format!("root {a:?} has norm {n}"));
            }
        }
        Ok(())
    }

    /// Covolume of the integral lattice: `Vol(T)` as a surd.
    pub fn covolume_t_exact(&self) -> Surd {
        Surd::sqrt(&linalg::det(&self.coroot_gram()))
    }

    pub fn covolume_t(&self) -> f64 {
        self.covolume_t_exact().to_f64()
    }
}

fn positive_roots_by_closure(simple: &[CartanVec], cartan: &[Vec<i64>]) -> Vec<CartanVec> {
    let r = simple.len();
    let mut roots: Vec<CartanVec> = simple.to_vec();
    let mut frontier = roots.clone();
    while let Some(beta) = frontier.pop() {
        for i in 0..r {
            // <β, α_i∨> = Σ_k β_k a_{ki}
            let pair: Q = (0..r).map(|k| &beta.0[k] * qi(cartan[k][i])).sum();
            let mut img = beta.clone();
            img.0[i] -= pair;
            if img.0.iter().all(|c| !c.is_negative()) && !img.is_zero() && !roots.contains(&img) {
                roots.push(img.clone());
                frontier.push(img);
            }
        }
    }
    roots.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| a.cmp(b)));
    roots
}
