//! Monte-Carlo distribution of the class of a product of two random
//! conjugacy-class elements in `SU(2)` or `SU(3)`.
//!
//! Class parameters are the fundamental coordinates `t_i = ⟨α_i, μ⟩` of the
//! alcove point `μ` with `g ~ exp(μ)`, where `exp μ = e^{2πiμ}`. For `SU(n)`
//! the alcove is `{t_i ≥ 0, Σ t_i ≤ 1}`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2, Matrix3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{RootSystem, Series};
use crate::moduli::pants_volume_poly;
use crate::piecewise::PiecewisePolynomial;
use crate::quadrature::{gauss_legendre, triangle_rule};
use crate::rational::{fmt_q, to_f64, CartanVec};

#[cfg(test)]
mod tests;

/// Samples per independent random stream.
pub const CHUNK: usize = 1 << 16;

/// The matrix groups the oracle samples from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OracleGroup {
    #[serde(rename = "SU(2)")]
    Su2,
    #[serde(rename = "SU(3)")]
    Su3,
}

impl OracleGroup {
    pub fn of(rs: &RootSystem) -> Result<Self> {
        match (rs.spec.series, rs.rank()) {
            (Series::A, 1) => Ok(OracleGroup::Su2),
            (Series::A, 2) => Ok(OracleGroup::Su3),
            _ => Err(Error::UnsupportedType(format!("the sampler supports A1 and A2, not {}", rs.spec))),
        }
    }

    pub fn rank(self) -> usize {
        match self {
            OracleGroup::Su2 => 1,
            OracleGroup::Su3 => 2,
        }
    }
}

/// A group element together with its recovered class parameter.
#[derive(Clone, Debug)]
pub struct ClassSample {
    pub matrix: DMatrix<Complex64>,
    pub class: Vec<f64>,
}

/// `‖g*g − 1‖_max`.
pub fn unitarity_defect(g: &DMatrix<Complex64>) -> f64 {
    let p = g.adjoint() * g;
    let n = g.nrows();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (p[(i, j)] - if i == j { 1.0 } else { 0.0 }).norm()).fold(0.0, f64::max)
}

/// `e^{2πiμ}` as a diagonal matrix, `μ` in fundamental coordinates.
pub fn torus_element(t: &[f64]) -> DMatrix<Complex64> {
    // ε-coordinates: a_k − a_{k+1} = t_k, Σ a_k = 0
    let n = t.len() + 1;
    let mut a = vec![0.0; n];
    for k in 1..n {
        a[k] = a[k - 1] - t[k - 1];
    }
    let mean = a.iter().sum::<f64>() / n as f64;
    DMatrix::from_fn(n, n, |i, j| if i == j { Complex64::from_polar(1.0, 2.0 * PI * (a[i] - mean)) } else { Complex64::new(0.0, 0.0) })
}

/// A Haar-random element of `SU(n)`, `n ∈ {2, 3}`.
pub fn haar<R: Rng>(group: OracleGroup, rng: &mut R) -> DMatrix<Complex64> {
    let mut gauss = || -> f64 { rng.sample(StandardNormal) };
    match group {
        OracleGroup::Su2 => {
            // uniform unit quaternion
            let v: [f64; 4] = [gauss(), gauss(), gauss(), gauss()];
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let (z, w) = (Complex64::new(v[0], v[1]) / r, Complex64::new(v[2], v[3]) / r);
            DMatrix::from_row_slice(2, 2, &[z, w, -w.conj(), z.conj()])
        }
        OracleGroup::Su3 => {
            // QR of a complex Gaussian matrix, with R's diagonal phases moved into Q
            let m = Matrix3::<Complex64>::from_fn(|_, _| Complex64::new(gauss(), gauss()));
            let qr = m.qr();
            let (mut q, r) = (qr.q(), qr.r());
            for j in 0..3 {
                let d = r[(j, j)];
                let phase = d / d.norm();
                for i in 0..3 {
                    q[(i, j)] *= phase;
                }
            }
            let det = q.determinant();
            let root = Complex64::from_polar(1.0, -det.arg() / 3.0);
            DMatrix::from_iterator(3, 3, q.iter().map(|x| x * root))
        }
    }
}

/// Fundamental coordinates of the alcove point of the class of `g`.
pub fn class_parameter(g: &DMatrix<Complex64>) -> Vec<f64> {
    match g.nrows() {
        2 => {
            // g = [[z, w], [−w̄, z̄]] has eigenvalues e^{±iφ}, cos φ = Re z
            let z = g[(0, 0)];
            let s = (z.im * z.im + g[(0, 1)].norm_sqr()).sqrt();
            vec![s.atan2(z.re) / PI]
        }
        3 => {
            let m = Matrix3::<Complex64>::from_fn(|i, j| g[(i, j)]);
            let ev = m.schur().eigenvalues().expect("complex Schur form is triangular");
            let mut theta: Vec<f64> = ev.iter().map(|l| l.arg().rem_euclid(2.0 * PI) / (2.0 * PI)).collect();
            alcove_from_phases(&mut theta)
        }
        n => panic!("class recovery for {n}×{n} matrices is not implemented"),
    }
}

/// Phases `θ_k ∈ [0, 1)` with integer sum to fundamental coordinates: the
/// `m = Σθ` largest are lowered by one, then `a` is sorted descending.
fn alcove_from_phases(theta: &mut [f64]) -> Vec<f64> {
    theta.sort_by(|a, b| a.total_cmp(b));
    let n = theta.len();
    let m = theta.iter().sum::<f64>().round() as usize;
    for x in theta.iter_mut().skip(n - m.min(n)) {
        *x -= 1.0;
    }
    theta.sort_by(|a, b| b.total_cmp(a));
    theta.windows(2).map(|w| (w[0] - w[1]).max(0.0)).collect()
}

/// `h·exp(μ)·h⁻¹` with `h` Haar-random.
pub fn sample_class<R: Rng>(rs: &RootSystem, mu: &CartanVec, rng: &mut R) -> Result<ClassSample> {
    let group = OracleGroup::of(rs)?;
    let t = fundamental_f64(rs, mu)?;
    let h = haar(group, rng);
    let matrix = &h * torus_element(&t) * h.adjoint();
    let class = class_parameter(&matrix);
    Ok(ClassSample { matrix, class })
}

fn fundamental_f64(rs: &RootSystem, mu: &CartanVec) -> Result<Vec<f64>> {
    if !rs.alcove_membership(mu).in_closure() {
        return Err(Error::OutsideAlcove(format!("{mu:?}")));
    }
    Ok(rs.to_fundamental(mu).iter().map(to_f64).collect())
}

/// Uniform bins on the alcove: `divisions` intervals for `SU(2)`, and for
/// `SU(3)` the `divisions²` triangles cut out by the lines `t_1, t_2, t_1 + t_2 ∈ Z/divisions`.
#[derive(Clone, Debug, Serialize)]
pub struct ClassHistogram {
    pub group: OracleGroup,
    pub divisions: usize,
    pub counts: Vec<u64>,
    pub total: u64,
    pub seed: u64,
    /// The two markings, in fundamental coordinates.
    pub markings: Vec<Vec<String>>,
}

impl ClassHistogram {
    fn empty(group: OracleGroup, divisions: usize, seed: u64, markings: Vec<Vec<String>>) -> Self {
        let n = match group {
            OracleGroup::Su2 => divisions,
            OracleGroup::Su3 => divisions * divisions,
        };
        ClassHistogram { group, divisions, counts: vec![0; n], total: 0, seed, markings }
    }

    pub fn num_bins(&self) -> usize {
        self.counts.len()
    }

    /// Index of the bin containing the class parameter `t`.
    pub fn bin_of(&self, t: &[f64]) -> usize {
        let b = self.divisions;
        let cell = |x: f64| ((x * b as f64).floor().max(0.0) as usize).min(b - 1);
        match self.group {
            OracleGroup::Su2 => cell(t[0]),
            OracleGroup::Su3 => {
                let (mut i, mut j) = (cell(t[0]), cell(t[1]));
                // rounding can put a point of the long edge into a cell past it
                while i + j > b - 1 {
                    if i >= j {
                        i -= 1;
                    } else {
                        j -= 1;
                    }
                }
                let upper = (t[0] + t[1]) * b as f64 > (i + j + 1) as f64 && i + j + 1 < b;
                triangle_index(b, i, j, upper)
            }
        }
    }

    /// The bin's cell: an interval `[lo, hi]` or a triangle, in fundamental coordinates.
    pub fn cell(&self, k: usize) -> Vec<Vec<f64>> {
        // k/d rather than k·(1/d): edges such as 3/10 print as 0.3
        let d = self.divisions as f64;
        let at = |k: usize| k as f64 / d;
        match self.group {
            OracleGroup::Su2 => vec![vec![at(k)], vec![at(k + 1)]],
            OracleGroup::Su3 => {
                let (i, j, upper) = triangle_cell(self.divisions, k);
                if upper {
                    vec![vec![at(i + 1), at(j)], vec![at(i + 1), at(j + 1)], vec![at(i), at(j + 1)]]
                } else {
                    vec![vec![at(i), at(j)], vec![at(i + 1), at(j)], vec![at(i), at(j + 1)]]
                }
            }
        }
    }

    fn merge(&mut self, o: &ClassHistogram) {
        for (a, b) in self.counts.iter_mut().zip(&o.counts) {
            *a += b;
        }
        self.total += o.total;
    }

    /// One row per bin. For `SU(2)`: `bin,lo,hi,count`; for `SU(3)`:
    /// `bin,i,j,upper,t1,t2,count` with `(t1, t2)` the triangle's centroid.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self.group {
            OracleGroup::Su2 => {
                out.push_str("bin,lo,hi,count\n");
                for k in 0..self.num_bins() {
                    let c = self.cell(k);
                    out.push_str(&format!("{k},{},{},{}\n", c[0][0], c[1][0], self.counts[k]));
                }
            }
            OracleGroup::Su3 => {
                out.push_str("bin,i,j,upper,t1,t2,count\n");
                for k in 0..self.num_bins() {
                    let (i, j, upper) = triangle_cell(self.divisions, k);
                    let c = self.cell(k);
                    let t1 = (c[0][0] + c[1][0] + c[2][0]) / 3.0;
                    let t2 = (c[0][1] + c[1][1] + c[2][1]) / 3.0;
                    out.push_str(&format!("{k},{i},{j},{},{t1},{t2},{}\n", u8::from(upper), self.counts[k]));
                }
            }
        }
        out
    }

    /// Seed, bin specification and totals, for a sidecar next to the CSV.
    pub fn sidecar_json(&self) -> String {
        let v = serde_json::json!({
            "group": self.group,
            "bins": { "kind": match self.group { OracleGroup::Su2 => "interval", OracleGroup::Su3 => "triangle" }, "divisions": self.divisions, "count": self.num_bins() },
            "total": self.total,
            "seed": self.seed,
            "chunk": CHUNK,
            "markings": self.markings,
        });
        serde_json::to_string_pretty(&v).expect("json")
    }

    /// The piecewise-constant density of the histogram itself.
    pub fn empirical_density(&self) -> impl Fn(&[f64]) -> f64 + Sync + '_ {
        move |t: &[f64]| self.counts[self.bin_of(t)] as f64
    }
}

/// Lower triangles `(i, j)` with `i + j < b` come first in row-major order,
/// then the upper triangles with `i + j < b − 1`.
fn triangle_index(b: usize, i: usize, j: usize, upper: bool) -> usize {
    let lower_before = |i: usize| (0..i).map(|r| b - r).sum::<usize>();
    if !upper {
        lower_before(i) + j
    } else {
        b * (b + 1) / 2 + (0..i).map(|r| b - 1 - r).sum::<usize>() + j
    }
}

fn triangle_cell(b: usize, mut k: usize) -> (usize, usize, bool) {
    let lower = b * (b + 1) / 2;
    let upper = k >= lower;
    if upper {
        k -= lower;
    }
    let mut i = 0;
    loop {
        let row = if upper { b - 1 - i } else { b - i };
        if k < row {
            return (i, k, upper);
        }
        k -= row;
        i += 1;
    }
}

/// Histogram of the class of `g1·g2`, `g_i` independent and uniform on the
/// class of `exp μ_i`. Chunk `c` draws from the ChaCha8 stream `c` of
/// `seed`, so the result does not depend on the thread count.
pub fn product_class_histogram(rs: &RootSystem, mu1: &CartanVec, mu2: &CartanVec, divisions: usize, n_samples: u64, seed: u64) -> Result<ClassHistogram> {
    let group = OracleGroup::of(rs)?;
    if n_samples == 0 || divisions == 0 {
        return Err(Error::Invalid("need at least one sample and one bin".into()));
    }
    let (t1, t2) = (fundamental_f64(rs, mu1)?, fundamental_f64(rs, mu2)?);
    let (d1, d2) = (torus_element(&t1), torus_element(&t2));
    let markings = [mu1, mu2].iter().map(|m| rs.to_fundamental(m).iter().map(fmt_q).collect()).collect();
    let empty = ClassHistogram::empty(group, divisions, seed, markings);
    let chunks = n_samples.div_ceil(CHUNK as u64);
    let parts: Vec<ClassHistogram> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut h = empty.clone();
            let n = (n_samples - c * CHUNK as u64).min(CHUNK as u64);
            for _ in 0..n {
                let t = match group {
                    OracleGroup::Su2 => {
                        let p = conj2(&haar(group, &mut rng), &d1) * conj2(&haar(group, &mut rng), &d2);
                        class_parameter(&DMatrix::from_iterator(2, 2, p.iter().cloned()))
                    }
                    OracleGroup::Su3 => {
                        let (h1, h2) = (haar(group, &mut rng), haar(group, &mut rng));
                        class_parameter(&(&h1 * &d1 * h1.adjoint() * &h2 * &d2 * h2.adjoint()))
                    }
                };
                let k = h.bin_of(&t);
                h.counts[k] += 1;
                h.total += 1;
            }
            h
        })
        .collect();
    let mut out = empty;
    for p in &parts {
        out.merge(p);
    }
    Ok(out)
}

fn conj2(h: &DMatrix<Complex64>, d: &DMatrix<Complex64>) -> Matrix2<Complex64> {
    let h = Matrix2::from_fn(|i, j| h[(i, j)]);
    let d = Matrix2::from_fn(|i, j| d[(i, j)]);
    h * d * h.adjoint()
}

/// Sup-distance between the empirical CDF of `hist` and the CDF of the
/// density proportional to `density` over the alcove. For `SU(3)` the CDF
/// is `F(a, b) = P(t_1 ≤ a, t_2 ≤ b)`, compared at every grid point.
pub fn shape_compare<F: Fn(&[f64]) -> f64 + Sync>(hist: &ClassHistogram, density: F) -> Result<f64> {
    let masses: Vec<f64> = (0..hist.num_bins()).into_par_iter().map(|k| cell_integral(hist, k, &density)).collect();
    let total: f64 = masses.iter().sum();
    if !(total > 0.0) || masses.iter().any(|m| *m < -1e-12 * total.abs()) {
        return Err(Error::DegenerateDensity(format!("density integrates to {total}")));
    }
    let n = hist.total as f64;
    match hist.group {
        OracleGroup::Su2 => {
            let (mut fe, mut fm, mut d) = (0.0, 0.0, 0.0f64);
            for k in 0..hist.num_bins() {
                fe += hist.counts[k] as f64 / n;
                fm += masses[k] / total;
                d = d.max((fe - fm).abs());
            }
            Ok(d)
        }
        OracleGroup::Su3 => {
            let b = hist.divisions;
            // per grid cell (i, j): the two triangles inside it
            let mut emp = vec![vec![0.0; b]; b];
            let mut model = vec![vec![0.0; b]; b];
            for k in 0..hist.num_bins() {
                let (i, j, _) = triangle_cell(b, k);
                emp[i][j] += hist.counts[k] as f64 / n;
                model[i][j] += masses[k] / total;
            }
            let mut d = 0.0f64;
            let mut ce = vec![vec![0.0; b + 1]; b + 1];
            let mut cm = vec![vec![0.0; b + 1]; b + 1];
            for i in 0..b {
                for j in 0..b {
                    ce[i + 1][j + 1] = emp[i][j] + ce[i][j + 1] + ce[i + 1][j] - ce[i][j];
                    cm[i + 1][j + 1] = model[i][j] + cm[i][j + 1] + cm[i + 1][j] - cm[i][j];
                    d = d.max((ce[i + 1][j + 1] - cm[i + 1][j + 1]).abs());
                }
            }
            Ok(d)
        }
    }
}

fn cell_integral<F: Fn(&[f64]) -> f64>(hist: &ClassHistogram, k: usize, f: &F) -> f64 {
    let c = hist.cell(k);
    match hist.group {
        OracleGroup::Su2 => {
            // subintervals keep a jump inside the bin from costing more than 1/16 of it
            let (lo, hi) = (c[0][0], c[1][0]);
            let s = 16;
            (0..s)
                .map(|i| {
                    let (a, b) = (lo + (hi - lo) * i as f64 / s as f64, lo + (hi - lo) * (i + 1) as f64 / s as f64);
                    gauss_legendre(4, a, b).iter().map(|(x, w)| w * f(&[*x])).sum::<f64>()
                })
                .sum()
        }
        OracleGroup::Su3 => {
            let v = [[c[0][0], c[0][1]], [c[1][0], c[1][1]], [c[2][0], c[2][1]]];
            // split into four congruent triangles
            let mid = |a: [f64; 2], b: [f64; 2]| [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
            let (m01, m12, m20) = (mid(v[0], v[1]), mid(v[1], v[2]), mid(v[2], v[0]));
            [[v[0], m01, m20], [m01, v[1], m12], [m20, m12, v[2]], [m01, m12, m20]]
                .iter()
                .flat_map(|t| triangle_rule(*t, 4))
                .map(|(p, w)| w * f(&p))
                .sum()
        }
    }
}

/// Floating-point evaluation of a piecewise polynomial.
struct FloatPieces {
    pieces: Vec<(Vec<(Vec<f64>, f64)>, Vec<(Vec<u32>, f64)>)>,
    scale: f64,
}

impl FloatPieces {
    fn new(pp: &PiecewisePolynomial) -> Self {
        let pieces = pp
            .pieces
            .iter()
            .map(|p| {
                let ineq = p.chamber.inequalities.iter().map(|h| (h.normal.iter().map(to_f64).collect(), to_f64(&h.offset))).collect();
                let poly = p.polynomial.terms().map(|(e, c)| (e.clone(), to_f64(c))).collect();
                (ineq, poly)
            })
            .collect();
        FloatPieces { pieces, scale: pp.normalization.to_f64() }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let inside = |(n, b): &(Vec<f64>, f64)| b - n.iter().zip(x).map(|(a, y)| a * y).sum::<f64>() >= -1e-12;
        self.pieces.iter().find(|(ineq, _)| ineq.iter().all(inside)).map_or(0.0, |(_, poly)| {
            self.scale * poly.iter().map(|(e, c)| c * e.iter().zip(x).map(|(&k, y)| y.powi(k as i32)).product::<f64>()).sum::<f64>()
        })
    }
}

/// The density of the class of `g1·g2` predicted by the κ method, up to a
/// constant: `Vol(M(μ1, μ2, *ν))·∏_{α>0} 2 sin π⟨α, ν⟩` in fundamental
/// coordinates `ν`. The sine factor is the class volume `∏(2 sin)²` times
/// the boundary factor `∏(2 sin)^{−1}`.
pub fn pants_density(rs: &RootSystem, mu1: &CartanVec, mu2: &CartanVec) -> Result<impl Fn(&[f64]) -> f64 + Sync> {
    OracleGroup::of(rs)?;
    let f = FloatPieces::new(&pants_volume_poly(rs, mu1, mu2)?);
    let r = rs.rank();
    // fundamental coordinates of ν to simple-root coordinates of *ν
    let star_omega: Vec<Vec<f64>> = rs.fundamental_weights.iter().map(|w| rs.star(w).0.iter().map(to_f64).collect()).collect();
    // simply laced: ⟨α, ν⟩ = Σ a_i t_i for α = Σ a_i α_i
    let roots: Vec<Vec<f64>> = rs.positive_roots.iter().map(|a| a.0.iter().map(to_f64).collect()).collect();
    Ok(move |t: &[f64]| {
        let x: Vec<f64> = (0..r).map(|i| (0..r).map(|k| t[k] * star_omega[k][i]).sum()).collect();
        let sines: f64 = roots.iter().map(|a| 2.0 * (PI * a.iter().zip(t).map(|(p, q)| p * q).sum::<f64>()).sin()).product();
        f.eval(&x) * sines
    })
}
