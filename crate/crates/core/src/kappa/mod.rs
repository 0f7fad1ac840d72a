//! The truncated power κ: the density of the pushforward of Lebesgue measure
//! on the orthant `R₊ⁿ` under `x ↦ Σ x_j X_j`, for a configuration `X` of
//! vectors (the positive roots, possibly repeated).
//!
//! Two independent evaluators are provided.
//!
//! * [`Kappa::point`] computes the fiber-polytope volume from its vertex
//!   cones, one per feasible basis of `X`.
//! * [`Kappa::chamber_polynomial`] interpolates the polynomial of a whole
//!   chamber from values on a principal lattice inside it.
//!
//! Values are densities with respect to Lebesgue measure in simple-root
//! coordinates; [`VectorConfig::normalization`] converts to the measure of
//! the invariant inner product.

mod fiber;
mod spline;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lie::RootSystem;
use crate::linalg;
use crate::poly::Polynomial;
use crate::polytope::{Halfspace, Polytope};
use crate::rational::{q, qi, CartanVec, Surd, Q};

pub use spline::{kappa_build, load_chamber_cache, store_chamber_cache, CACHE_DIR_ENV};

use fiber::FiberEvaluator;

/// A finite list of nonzero vectors spanning `t*`, all in the closed
/// positive orthant of simple-root coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorConfig {
    pub rank: usize,
    pub vectors: Vec<CartanVec>,
    /// Determinant of the Gram matrix of the coordinate basis.
    pub gram_det: Q,
}

impl VectorConfig {
    pub fn new(rank: usize, vectors: Vec<CartanVec>, gram_det: Q) -> Result<Self> {
        if vectors.iter().any(|v| v.rank() != rank || v.is_zero() || v.0.iter().any(Signed::is_negative)) {
            return Err(Error::Invalid("configuration vectors must be nonzero and in the positive orthant".into()));
        }
        let rows: Vec<Vec<Q>> = vectors.iter().map(|v| v.0.clone()).collect();
        if linalg::rank(&rows) != rank {
            return Err(Error::Invalid("configuration does not span".into()));
        }
        if !gram_det.is_positive() {
            return Err(Error::Invalid("Gram determinant must be positive".into()));
        }
        Ok(VectorConfig { rank, vectors, gram_det })
    }

    /// The positive roots, each repeated `multiplicity` times.
    pub fn positive_roots(rs: &RootSystem, multiplicity: usize) -> Self {
        let vectors = (0..multiplicity).flat_map(|_| rs.positive_roots.iter().cloned()).collect();
        VectorConfig { rank: rs.rank(), vectors, gram_det: rs.gram_det() }
    }

    /// Concatenation; the pushforward of the union is the convolution.
    pub fn union(&self, other: &VectorConfig) -> Self {
        assert_eq!(self.rank, other.rank);
        assert_eq!(self.gram_det, other.gram_det);
        let vectors = self.vectors.iter().chain(&other.vectors).cloned().collect();
        VectorConfig { rank: self.rank, vectors, gram_det: self.gram_det.clone() }
    }

    pub fn degree(&self) -> u32 {
        (self.vectors.len() - self.rank) as u32
    }

    /// `1/√det(Gram)`: coordinate density to inner-product density.
    pub fn normalization(&self) -> Surd {
        Surd::inv_sqrt(&self.gram_det)
    }
}

/// Fixed generic directions used to break ties on walls. Diagonally
/// dominant, hence a basis.
pub fn generic_directions(rank: usize) -> Vec<Vec<Q>> {
    const P: [i64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    (0..rank)
        .map(|i| (0..rank).map(|j| if i == j { qi(1) } else { q(1, P[(i * 4 + j) % 16] * 3) }).collect())
        .collect()
}

/// Signs of `n·x − b` for each hyperplane; zeros resolved along `lead`
/// and then the generic directions. Returns the resolved signs and whether
/// any raw sign was zero.
pub fn lex_signs(hyperplanes: &[(Vec<Q>, Q)], x: &[Q], lead: Option<&[Q]>) -> (Vec<i8>, bool) {
    lex_signs_along(hyperplanes, x, &lead_list(lead))
}

fn lead_list(lead: Option<&[Q]>) -> Vec<Vec<Q>> {
    lead.map(|l| vec![l.to_vec()]).unwrap_or_default()
}

/// As [`lex_signs`], with a sequence of leading directions.
pub fn lex_signs_along(hyperplanes: &[(Vec<Q>, Q)], x: &[Q], leads: &[Vec<Q>]) -> (Vec<i8>, bool) {
    let dirs = generic_directions(x.len());
    let mut on_wall = false;
    let signs = hyperplanes
        .iter()
        .map(|(n, b)| {
            let mut s = dot(n, x) - b;
            if s.is_zero() {
                on_wall = true;
                for d in leads.iter().chain(&dirs) {
                    if !s.is_zero() {
                        break;
                    }
                    s = dot(n, d);
                }
            }
            if s.is_positive() {
                1
            } else {
                -1
            }
        })
        .collect();
    (signs, on_wall)
}

/// A point strictly inside the chamber reached from `x` by the lexicographic
/// perturbation along `lead` and then the generic directions.
pub fn lex_interior_point(hyperplanes: &[(Vec<Q>, Q)], x: &[Q], lead: Option<&[Q]>) -> Vec<Q> {
    lex_interior_point_along(hyperplanes, x, &lead_list(lead))
}

pub fn lex_interior_point_along(hyperplanes: &[(Vec<Q>, Q)], x: &[Q], leads: &[Vec<Q>]) -> Vec<Q> {
    let (target, on_wall) = lex_signs_along(hyperplanes, x, leads);
    if !on_wall {
        return x.to_vec();
    }
    let mut dirs: Vec<Vec<Q>> = leads.to_vec();
    dirs.extend(generic_directions(x.len()));
    let mut eps = q(1, 16);
    loop {
        let mut p = x.to_vec();
        let mut e = eps.clone();
        for d in &dirs {
            for (pi, di) in p.iter_mut().zip(d) {
                *pi += &e * di;
            }
            e *= &eps;
        }
        let raw: Vec<Q> = hyperplanes.iter().map(|(n, b)| dot(n, &p) - b).collect();
        if raw.iter().zip(&target).all(|(s, &t)| (s.is_positive() && t > 0) || (s.is_negative() && t < 0)) {
            return p;
        }
        eps /= qi(8);
    }
}

pub(crate) fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact κ engine for one configuration. Chamber polynomials are computed
/// on first use and cached by chamber sign vector; all methods take `&self`
/// and are safe to call concurrently.
pub struct Kappa {
    config: VectorConfig,
    coords: Vec<Vec<Q>>,
    /// Primitive integer normals of the hyperplanes spanned by
    /// `rank − 1` configuration vectors.
    walls: Vec<(Vec<Q>, Q)>,
    fiber: FiberEvaluator,
    chambers: RwLock<HashMap<Vec<i8>, Arc<Polynomial>>>,
}

impl std::fmt::Debug for Kappa {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Kappa")
            .field("rank", &self.config.rank)
            .field("vectors", &self.config.vectors.len())
            .field("walls", &self.walls.len())
            .finish()
    }
}

impl Kappa {
    pub fn new(config: VectorConfig) -> Self {
        let r = config.rank;
        let coords: Vec<Vec<Q>> = config.vectors.iter().map(|v| v.0.clone()).collect();
        let walls = wall_normals(r, &coords).into_iter().map(|n| (n, Q::zero())).collect();
        let fiber = FiberEvaluator::new(&coords, r, &generic_directions(r));
        Kappa { config, coords, walls, fiber, chambers: RwLock::new(HashMap::new()) }
    }

    /// Shared engine for the positive roots of `rs` with multiplicity `m`.
    pub fn for_roots(rs: &RootSystem, multiplicity: usize) -> Arc<Kappa> {
        static CACHE: OnceLock<Mutex<HashMap<(String, usize), Arc<Kappa>>>> = OnceLock::new();
        let key = (rs.spec.to_string(), multiplicity);
        let cache = CACHE.get_or_init(Default::default);
        if let Some(k) = cache.lock().unwrap().get(&key) {
            return k.clone();
        }
        let k = Arc::new(Kappa::new(VectorConfig::positive_roots(rs, multiplicity)));
        cache.lock().unwrap().entry(key).or_insert(k).clone()
    }

    pub fn config(&self) -> &VectorConfig {
        &self.config
    }

    pub fn rank(&self) -> usize {
        self.config.rank
    }

    pub fn degree(&self) -> u32 {
        self.config.degree()
    }

    pub fn normalization(&self) -> Surd {
        self.config.normalization()
    }

    /// Wall hyperplanes `n·ξ = 0`.
    pub fn walls(&self) -> &[(Vec<Q>, Q)] {
        &self.walls
    }

    /// Index of a wall containing `ξ`, if any.
    pub fn wall_containing(&self, xi: &[Q]) -> Option<usize> {
        self.walls.iter().position(|(n, _)| dot(n, xi).is_zero())
    }

    /// Coordinate density at `ξ` by the vertex-cone route. On a wall the
    /// value is the limit from the lexicographically perturbed side, which
    /// equals the value at `ξ` whenever the degree is positive.
    pub fn point_coordinate(&self, xi: &[Q], lead: Option<&[Q]>) -> Q {
        self.fiber.volume(xi, lead)
    }

    /// κ at `ξ` by the vertex-cone route, as an exact real.
    pub fn point(&self, xi: &CartanVec) -> Result<KappaValue> {
        let on_wall = self.wall_containing(&xi.0).is_some();
        if on_wall && self.degree() == 0 {
            return Err(Error::OnWall(format!("κ has degree 0 and {xi:?} lies on a wall")));
        }
        Ok(KappaValue { coordinate: self.point_coordinate(&xi.0, None), normalization: self.normalization(), on_wall })
    }

    /// Coordinate density by triangulating the fiber polytope, expressed in
    /// the coordinates complementary to a fixed basis. Slow; for testing.
    pub fn point_triangulated(&self, xi: &[Q]) -> Q {
        let r = self.rank();
        let n = self.coords.len();
        if xi.iter().all(Zero::is_zero) {
            return Q::zero();
        }
        let basis = (0..n)
            .combinations(r)
            .find(|b| {
                let m: Vec<Vec<Q>> = (0..r).map(|i| b.iter().map(|&j| self.coords[j][i].clone()).collect()).collect();
                !linalg::det(&m).is_zero()
            })
            .expect("configuration spans");
        let m: Vec<Vec<Q>> = (0..r).map(|i| basis.iter().map(|&j| self.coords[j][i].clone()).collect()).collect();
        let inv = linalg::inverse(&m).unwrap();
        let det = linalg::det(&m).abs();
        let free: Vec<usize> = (0..n).filter(|j| !basis.contains(j)).collect();
        let d = free.len();
        let xb = linalg::mat_vec(&inv, xi);
        if d == 0 {
            return if xb.iter().all(|x| x.is_positive()) { det.recip() } else { Q::zero() };
        }
        // x_B = M_B⁻¹ξ − Σ_j x_j M_B⁻¹X_j ≥ 0 and x_free ≥ 0.
        let mut hs = Vec::new();
        for (i, xbi) in xb.iter().enumerate() {
            let normal: Vec<Q> = free.iter().map(|&j| dot(&inv[i], &self.coords[j])).collect();
            hs.push(Halfspace::new(normal, xbi.clone()));
        }
        for k in 0..d {
            let mut normal = vec![Q::zero(); d];
            normal[k] = -Q::one();
            hs.push(Halfspace::new(normal, Q::zero()));
        }
        match Polytope::from_halfspaces(d, &hs) {
            Some(p) => p.volume() / det,
            None => Q::zero(),
        }
    }

    /// The polynomial (coordinate normalization) of the chamber reached from
    /// `ξ` by lexicographic perturbation; zero outside the cone.
    pub fn chamber_polynomial(&self, xi: &[Q], lead: Option<&[Q]>) -> Result<Arc<Polynomial>> {
        self.chamber_polynomial_along(xi, &lead_list(lead))
    }

    /// As [`Kappa::chamber_polynomial`], perturbing along each of `leads` in
    /// turn before the generic directions.
    pub fn chamber_polynomial_along(&self, xi: &[Q], leads: &[Vec<Q>]) -> Result<Arc<Polynomial>> {
        let (signs, _) = lex_signs_along(&self.walls, xi, leads);
        if let Some(p) = self.chambers.read().unwrap().get(&signs) {
            return Ok(p.clone());
        }
        let interior = lex_interior_point_along(&self.walls, xi, leads);
        let poly = Arc::new(self.interpolate(&interior)?);
        let mut map = self.chambers.write().unwrap();
        Ok(map.entry(signs).or_insert(poly).clone())
    }

    /// κ at `ξ` through the chamber polynomials.
    pub fn spline_point(&self, xi: &CartanVec) -> Result<KappaValue> {
        let on_wall = self.wall_containing(&xi.0).is_some();
        if on_wall && self.degree() == 0 {
            return Err(Error::OnWall(format!("κ has degree 0 and {xi:?} lies on a wall")));
        }
        let p = self.chamber_polynomial(&xi.0, None)?;
        Ok(KappaValue { coordinate: p.eval(&xi.0), normalization: self.normalization(), on_wall })
    }

    /// Every chamber polynomial computed so far, keyed by sign vector.
    pub(crate) fn chamber_entries(&self) -> Vec<(Vec<i8>, Polynomial)> {
        let mut v: Vec<_> = self.chambers.read().unwrap().iter().map(|(k, p)| (k.clone(), (**p).clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub(crate) fn insert_chambers(&self, entries: Vec<(Vec<i8>, Polynomial)>) {
        let mut map = self.chambers.write().unwrap();
        for (k, p) in entries {
            map.entry(k).or_insert_with(|| Arc::new(p));
        }
    }

    /// Number of chamber polynomials computed so far.
    pub fn cached_chambers(&self) -> usize {
        self.chambers.read().unwrap().len()
    }

    /// Interpolates the homogeneous chamber polynomial from values on the
    /// principal lattice of a small simplex around the interior point `p`,
    /// then cross-checks at points off that lattice.
    fn interpolate(&self, p: &[Q]) -> Result<Polynomial> {
        let r = self.rank();
        let d = self.degree();
        let feasible = self.fiber.feasible(p, None);
        if feasible.is_empty() {
            return Ok(Polynomial::zero(r));
        }
        let value = |x: &[Q]| self.fiber.sum_over(&feasible, x);
        if d == 0 {
            return Ok(Polynomial::constant(r, value(p)));
        }
        let dq = qi(i64::from(d));
        // Nodes P + (y, 0), y ∈ Z≥0^{r−1}, |y| ≤ d, stay in the chamber of the
        // integer point P because every wall normal has entries ≤ m.
        let m = self.walls.iter().flat_map(|(n, _)| n.iter().map(Signed::abs)).max().unwrap_or_else(Q::one);
        let base: Vec<Q> = integer_point_in_chamber(&self.walls, p).iter().map(|x| x * qi(2) * &dq * &m).collect();
        let lattice = lower_set(r - 1, d);
        let values: HashMap<Vec<u32>, Q> = lattice
            .iter()
            .map(|y| {
                let mut x = base.clone();
                for (xi, &yi) in x.iter_mut().zip(y) {
                    *xi += qi(i64::from(yi));
                }
                (y.clone(), value(&x))
            })
            .collect();
        // Newton form of q(y) = P(P + (y, 0)) on the corner lattice:
        // q = Σ_k Δ^k q(0) ∏_i binom(y_i, k_i).
        let falling: Vec<Vec<Polynomial>> = (0..r - 1)
            .map(|i| {
                let mut out = vec![Polynomial::one(r - 1)];
                for j in 0..d {
                    let mut lin = vec![Q::zero(); r - 1];
                    lin[i] = Q::one();
                    let f = Polynomial::linear(&lin).add(&Polynomial::constant(r - 1, -qi(i64::from(j))));
                    let next = out.last().unwrap().mul(&f).scale(&qi(i64::from(j) + 1).recip());
                    out.push(next);
                }
                out
            })
            .collect();
        let mut slice = Polynomial::zero(r - 1);
        for k in &lattice {
            let mut a = Q::zero();
            for mm in lower_box(k) {
                let sgn = if (k.iter().sum::<u32>() - mm.iter().sum::<u32>()) % 2 == 0 { 1 } else { -1 };
                let mult: i64 = k.iter().zip(&mm).map(|(&ki, &mi)| binom_i(ki, mi)).product();
                a += qi(sgn * mult) * &values[&mm];
            }
            if a.is_zero() {
                continue;
            }
            let mut term = Polynomial::constant(r - 1, a);
            for (i, &ki) in k.iter().enumerate() {
                if ki > 0 {
                    term = term.mul(&falling[i][ki as usize]);
                }
            }
            slice.add_assign(&term);
        }
        // On c_r = s: P(c) = q(c_{<r} − P_{<r}); then homogenize with c_r/s.
        let s = base[r - 1].clone();
        let shift: Vec<Q> = base[..r - 1].iter().map(|x| -x).collect();
        let slice = slice.translate(&shift);
        let mut out = Polynomial::zero(r);
        for (e, c) in slice.terms() {
            let deg: u32 = e.iter().sum();
            let mut ex = e.clone();
            ex.push(d - deg);
            out.add_term(ex, c / num_traits::pow(s.clone(), (d - deg) as usize));
        }
        let p = &base[..];
        let h = Q::one();
        // Cross-validation against the full vertex-cone evaluation.
        let checks = [p.to_vec(), {
            let mut x = p.to_vec();
            let denom = qi((r * (r + 1)) as i64);
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += &h * &dq * qi(i as i64 + 1) / &denom;
            }
            x
        }];
        for x in &checks {
            if out.eval(x) != self.fiber.volume(x, None) {
                return Err(Error::DegenerateArrangement(format!(
                    "chamber interpolation failed its cross-check at {:?}",
                    CartanVec(x.clone())
                )));
            }
        }
        Ok(out)
    }
}

/// κ as an exact real `coordinate × normalization`.
#[derive(Clone, Debug, PartialEq)]
pub struct KappaValue {
    pub coordinate: Q,
    pub normalization: Surd,
    pub on_wall: bool,
}

impl KappaValue {
    pub fn exact(&self) -> Surd {
        self.normalization.scale(&self.coordinate)
    }

    pub fn value(&self) -> f64 {
        self.exact().to_f64()
    }
}

/// κ at `ξ` for the positive roots of `rs`, relative to inner-product
/// Lebesgue measure.
pub fn kappa_point(rs: &RootSystem, xi: &CartanVec) -> Result<KappaValue> {
    Kappa::for_roots(rs, 1).point(xi)
}

/// Distinct primitive normals of hyperplanes spanned by `rank − 1` vectors.
pub fn wall_normals(rank: usize, vectors: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if rank == 1 {
        return vec![vec![Q::one()]];
    }
    let distinct: Vec<&Vec<Q>> = vectors.iter().unique().collect();
    let mut seen = std::collections::BTreeSet::new();
    for sub in distinct.iter().combinations(rank - 1) {
        let rows: Vec<Vec<Q>> = sub.iter().map(|v| (**v).clone()).collect();
        if linalg::rank(&rows) != rank - 1 {
            continue;
        }
        let k = linalg::kernel(&rows, rank).pop().unwrap();
        seen.insert(linalg::primitive_oriented(&k));
    }
    seen.into_iter()
        .map(|n| n.into_iter().map(Q::from_integer).collect())
        .collect()
}

/// An integer point with the same strict wall signs as the interior point `p`.
fn integer_point_in_chamber(walls: &[(Vec<Q>, Q)], p: &[Q]) -> Vec<Q> {
    let target: Vec<bool> = walls.iter().map(|(n, _)| dot(n, p).is_positive()).collect();
    let mut scale = Q::one();
    loop {
        let c: Vec<Q> = p.iter().map(|x| (x * &scale).round()).collect();
        let ok = walls.iter().zip(&target).all(|((n, _), &t)| {
            let s = dot(n, &c);
            !s.is_zero() && s.is_positive() == t
        });
        if ok {
            return c;
        }
        scale *= qi(2);
    }
}

/// `{y ∈ Z≥0^m : |y| ≤ d}` in lexicographic order.
fn lower_set(m: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// `{m : 0 ≤ m ≤ k}` componentwise.
fn lower_box(k: &[u32]) -> Vec<Vec<u32>> {
    k.iter().map(|&ki| 0..=ki).multi_cartesian_product().collect::<Vec<_>>().into_iter().chain(
        // multi_cartesian_product yields nothing for an empty product
        if k.is_empty() { vec![vec![]] } else { vec![] },
    ).collect()
}

fn binom_i(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * i64::from(n - i) / i64::from(i + 1))
}

#[cfg(test)]
mod tests;
