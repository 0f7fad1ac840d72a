//! Signed sums of translated truncated powers, the common shape of every
//! κ-side volume formula.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use itertools::Itertools;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kappa::{dot, generic_directions, Kappa};
use crate::lie::RootSystem;
use crate::linalg;
use crate::piecewise::PiecewiseFunction;
use crate::poly::Polynomial;
use crate::rational::{qi, to_f64, CartanVec, Surd, Q};

/// `coeff · κ(M x + shift)`; `M = None` is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct KappaTerm {
    pub coeff: i64,
    pub matrix: Option<Vec<Vec<Q>>>,
    pub shift: Vec<Q>,
}

impl KappaTerm {
    fn argument(&self, x: &[Q]) -> Vec<Q> {
        let y = match &self.matrix {
            Some(m) => linalg::mat_vec(m, x),
            None => x.to_vec(),
        };
        y.iter().zip(&self.shift).map(|(a, b)| a + b).collect()
    }

    fn map_direction(&self, d: &[Q]) -> Vec<Q> {
        match &self.matrix {
            Some(m) => linalg::mat_vec(m, d),
            None => d.to_vec(),
        }
    }

    /// `Mᵀn`, the pullback of a covector.
    fn pull_covector(&self, n: &[Q]) -> Vec<Q> {
        match &self.matrix {
            Some(m) => (0..m[0].len()).map(|j| m.iter().zip(n).map(|(row, a)| &row[j] * a).sum()).collect(),
            None => n.to_vec(),
        }
    }
}

/// `normalization · Σ_t coeff_t κ(M_t x + s_t)` as a function of `x`.
#[derive(Clone, Debug)]
pub struct LinearKappaSum {
    pub kappa: Arc<Kappa>,
    pub rank: usize,
    pub terms: Vec<KappaTerm>,
    pub normalization: Surd,
}

impl LinearKappaSum {
    /// The exact coordinate sum at `x`; a degree-0 κ evaluated on one of its
    /// walls is an error.
    pub fn coordinate(&self, x: &[Q]) -> Result<Q> {
        let degree0 = self.kappa.degree() == 0;
        self.terms
            .par_iter()
            .map(|t| {
                let y = t.argument(x);
                if degree0 {
                    if let Some(i) = self.kappa.wall_containing(&y) {
                        return Err(Error::OnWall(format!(
                            "κ argument {:?} lies on the wall with normal {:?}",
                            CartanVec(y),
                            CartanVec(self.kappa.walls()[i].0.clone())
                        )));
                    }
                }
                let p = self.kappa.chamber_polynomial(&y, None)?;
                Ok(qi(t.coeff) * p.eval(&y))
            })
            .try_reduce(Q::zero, |a, b| Ok(a + b))
    }

    pub fn value(&self, x: &[Q]) -> Result<Surd> {
        Ok(self.normalization.scale(&self.coordinate(x)?))
    }

    /// Every hyperplane in `x`-space across which some term can change
    /// polynomial, as primitive `(n, b)` with `n·x = b`.
    pub fn hyperplanes(&self) -> Vec<(Vec<Q>, Q)> {
        let mut out = BTreeSet::new();
        for t in &self.terms {
            for (n, _) in self.kappa.walls() {
                let m = t.pull_covector(n);
                if m.iter().all(Zero::is_zero) {
                    continue;
                }
                let b = -dot(n, &t.shift);
                out.insert(primitive_hyperplane(&m, &b));
            }
        }
        out.into_iter().collect()
    }
}

/// `(n, b)` scaled so that `n` is a primitive integer vector with first
/// nonzero entry positive.
fn primitive_hyperplane(n: &[Q], b: &Q) -> (Vec<Q>, Q) {
    let p: Vec<Q> = linalg::primitive_oriented(n).into_iter().map(Q::from_integer).collect();
    let k = n.iter().position(|a| !a.is_zero()).expect("nonzero normal");
    let ratio = &p[k] / &n[k];
    (p, b * ratio)
}

impl PiecewiseFunction for LinearKappaSum {
    fn rank(&self) -> usize {
        self.rank
    }

    fn normalization(&self) -> Surd {
        self.normalization.clone()
    }

    fn polynomial_near(&self, x: &[Q], lead: Option<&[Q]>) -> Result<Polynomial> {
        let mut dirs: Vec<Vec<Q>> = lead.map(|l| vec![l.to_vec()]).unwrap_or_default();
        dirs.extend(generic_directions(self.rank));
        let mut out = Polynomial::zero(self.rank);
        for t in &self.terms {
            let y = t.argument(x);
            let leads: Vec<Vec<Q>> = dirs.iter().map(|d| t.map_direction(d)).collect();
            let p = self.kappa.chamber_polynomial_along(&y, &leads)?;
            if p.is_zero() {
                continue;
            }
            let mut local = p.translate(&t.shift).scale(&qi(t.coeff));
            if let Some(m) = &t.matrix {
                local = local.substitute_linear(m);
            }
            out.add_assign(&local);
        }
        Ok(out)
    }

    fn hyperplanes_through(&self, x: &[Q]) -> Vec<Vec<Q>> {
        let mut out = BTreeSet::new();
        for t in &self.terms {
            let y = t.argument(x);
            for (n, _) in self.kappa.walls() {
                if dot(n, &y).is_zero() {
                    let m = t.pull_covector(n);
                    if !m.iter().all(Zero::is_zero) {
                        out.insert(primitive_hyperplane(&m, &Q::zero()).0);
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}

/// `(−1)^{|R⁺|} #Z/Vol(T)` times the normalization of `κ_{b−2}`.
pub(crate) fn sphere_normalization(rs: &RootSystem, _b: usize) -> Surd {
    let n = rs.num_positive();
    let sign = if n % 2 == 0 { 1 } else { -1 };
    Surd::inv_sqrt(&linalg::det(&rs.coroot_gram()))
        .mul(&Surd::inv_sqrt(&rs.gram_det()))
        .scale(&qi(sign * rs.center_order as i64))
}

/// The volume of the sphere with `b ≥ 3` holes as a function of the last
/// marking, the others held fixed:
/// `(−1)^{|R⁺|} (#Z/Vol(T)) Σ_{l∈Λ} Σ_{w_j∈W} ε(w_1⋯w_{b−1}) κ_{b−2}(Σ_j w_j μ_j + x + l)`,
/// with `κ_m` the truncated power of the positive roots repeated `m` times.
///
/// For each `l` the alternating sum is supported in `|x + l| ≤ Σ_j |μ_j|`,
/// so only those `l` are enumerated.
#[derive(Clone, Debug)]
pub struct PantsFunction {
    rs: RootSystem,
    kappa: Arc<Kappa>,
    /// `Σ_j w_j μ_j` with the summed signs of all `(w_j)` reaching it.
    shifts: Vec<(Vec<Q>, i64)>,
    radius: f64,
    extra_radius: f64,
    normalization: Surd,
}

impl PantsFunction {
    pub fn new(rs: &RootSystem, fixed: &[CartanVec]) -> Result<Self> {
        if fixed.len() < 2 {
            return Err(Error::Invalid("at least two fixed markings are needed".into()));
        }
        let kappa = Kappa::for_roots(rs, fixed.len() - 1);
        let images: Vec<Vec<(Vec<Q>, i64)>> = fixed
            .iter()
            .map(|mu| rs.weyl_group().iter().map(|w| (w.apply(mu).0, i64::from(w.sign()))).collect())
            .collect();
        let mut acc: BTreeMap<Vec<Q>, i64> = BTreeMap::new();
        for combo in images.iter().map(|v| v.iter()).multi_cartesian_product() {
            let mut s = vec![Q::zero(); rs.rank()];
            let mut sign = 1;
            for (v, e) in combo {
                for (a, b) in s.iter_mut().zip(v) {
                    *a += b;
                }
                sign *= e;
            }
            *acc.entry(s).or_insert(0) += sign;
        }
        let shifts = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        let radius = fixed.iter().map(|m| to_f64(&rs.norm2(m)).sqrt()).sum();
        let normalization = sphere_normalization(rs, fixed.len() + 1);
        Ok(PantsFunction { rs: rs.clone(), kappa, shifts, radius, extra_radius: 0.0, normalization })
    }

    /// Enlarges the enumerated ball; the value must not change.
    pub fn with_extra_radius(mut self, extra: f64) -> Self {
        self.extra_radius = extra;
        self
    }

    /// `Σ_j |μ_j|`.
    pub fn support_radius(&self) -> f64 {
        self.radius
    }

    pub fn num_shifts(&self) -> usize {
        self.shifts.len()
    }

    pub fn kappa(&self) -> &Arc<Kappa> {
        &self.kappa
    }

    /// Lattice vectors `l` whose alternating sum can be nonzero near `x`.
    /// The float test has slack, so the set only ever over-covers.
    pub fn lattice_vectors(&self, x: &CartanVec) -> Vec<CartanVec> {
        let r = self.radius + self.extra_radius;
        let bound = (r + 1e-9 * (1.0 + r)).powi(2);
        self.rs.lattice_points_where(x, bound, |l| to_f64(&self.rs.norm2(&(x + l))) <= bound)
    }

    /// The sum restricted to lattice vectors within the ball around `x`.
    pub fn local_sum(&self, x: &CartanVec) -> LinearKappaSum {
        self.sum_over(&self.lattice_vectors(x))
    }

    /// The sum restricted to the given lattice vectors.
    pub fn sum_over(&self, ls: &[CartanVec]) -> LinearKappaSum {
        let terms = ls
            .iter()
            .flat_map(|l| {
                self.shifts.iter().map(move |(s, c)| KappaTerm {
                    coeff: *c,
                    matrix: None,
                    shift: s.iter().zip(&l.0).map(|(a, b)| a + b).collect(),
                })
            })
            .collect();
        LinearKappaSum { kappa: self.kappa.clone(), rank: self.rs.rank(), terms, normalization: self.normalization.clone() }
    }

    /// Lattice vectors that matter anywhere on the closed alcove.
    pub fn alcove_lattice_vectors(&self) -> Vec<CartanVec> {
        let far = self.rs.alcove().vertices.iter().map(|v| to_f64(&self.rs.norm2(v)).sqrt()).fold(0.0, f64::max);
        let r = self.radius + self.extra_radius + far;
        let bound = (r + 1e-9 * (1.0 + r)).powi(2);
        let zero = CartanVec::zero(self.rs.rank());
        self.rs.lattice_points_where(&zero, bound, |l| to_f64(&self.rs.norm2(l)) <= bound)
    }

    pub fn coordinate(&self, x: &CartanVec) -> Result<Q> {
        self.local_sum(x).coordinate(&x.0)
    }

    pub fn value(&self, x: &CartanVec) -> Result<Surd> {
        Ok(self.normalization.scale(&self.coordinate(x)?))
    }
}

impl PiecewiseFunction for PantsFunction {
    fn rank(&self) -> usize {
        self.rs.rank()
    }

    fn normalization(&self) -> Surd {
        self.normalization.clone()
    }

    fn polynomial_near(&self, x: &[Q], lead: Option<&[Q]>) -> Result<Polynomial> {
        self.local_sum(&CartanVec(x.to_vec())).polynomial_near(x, lead)
    }

    fn hyperplanes_through(&self, x: &[Q]) -> Vec<Vec<Q>> {
        self.local_sum(&CartanVec(x.to_vec())).hyperplanes_through(x)
    }
}
