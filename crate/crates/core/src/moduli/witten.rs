use std::f64::consts::{PI, SQRT_2};

use itertools::Itertools;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::report::{Method, VolumeReport};
use super::{Marking, Surface};
use crate::characters::{enumerate_dominant, CharacterEvaluator, WeightMetric};
use crate::error::{Error, Result};
use crate::lie::RootSystem;
use crate::kappa::wall_normals;
use crate::linalg;
use crate::polytope::dot;
use crate::rational::{to_f64, CartanVec, Q};

/// Riemannian volume of the class of `exp(μ)`, `μ` regular.
pub fn conjugacy_volume(rs: &RootSystem, mu: &CartanVec) -> Result<f64> {
    if !rs.alcove_membership(mu).is_interior() || !rs.is_regular(mu) {
        return Err(Error::NotRegular(format!("{mu:?}")));
    }
    Ok(rs.class_volume(mu))
}

#[derive(Clone, Debug, PartialEq)]
pub struct WittenOptions {
    /// Bound on `|λ+ρ|²`. With boundary, defaults to `40/ε_min`; without,
    /// to `N²|ρ|²` with `N = 10^{4/rank}`, which is `n ≤ 10⁴` for `A1`.
    pub casimir_cutoff: Option<f64>,
    /// Heat-kernel parameters, used when the surface has boundary.
    pub eps_schedule: Vec<f64>,
    /// Relative extrapolation residual above which a warning is issued.
    pub tolerance: f64,
}

impl Default for WittenOptions {
    fn default() -> Self {
        // ratio 2^{1/3} from 1e-5 to 2.5e-6
        let eps_schedule = (0..7).map(|k| 1e-5 * 2f64.powf(-f64::from(k) / 3.0)).collect();
        WittenOptions { casimir_cutoff: None, eps_schedule, tolerance: 1e-4 }
    }
}

/// Warning prefix for a failed convergence check.
pub const CONVERGENCE_WARNING: &str = "convergence";

/// `#Z·Vol(G)^{2h−2}·∏_j Vol(G/T)·∏_{α>0} 2 sin π⟨α,μ_j⟩·Σ_λ d_λ^{−(2h−2+b)} ∏_j χ_λ(exp μ_j)`.
///
/// With boundary the series is damped by `e^{−ε|λ+ρ|²}` and its limit at
/// `ε = 0` is fitted, including the smoothing of nearby singularities. Closed surfaces converge absolutely; their
/// partial sums over geometrically growing cutoffs are Aitken-accelerated.
pub fn witten_volume(rs: &RootSystem, surface: Surface, marking: &Marking, opts: &WittenOptions) -> Result<VolumeReport> {
    surface.check_stable()?;
    if marking.len() != surface.boundary as usize {
        return Err(Error::Invalid(format!("{} markings for {} boundary components", marking.len(), surface.boundary)));
    }
    for (p, (&i, &r)) in marking.points.iter().zip(marking.interior.iter().zip(&marking.regular)) {
        if !i || !r {
            return Err(Error::NotRegular(format!("marking {p:?} must be regular")));
        }
    }
    let e = surface.neg_euler() as i32;
    let vol_g = rs.volume_g();
    let mut prefactor = rs.center_order as f64 * vol_g.powi(2 * surface.genus as i32 - 2);
    for mu in &marking.points {
        prefactor *= rs.volume_g_over_t() * rs.sine_product(mu);
    }
    let closed = marking.is_empty();
    let eps_min = opts.eps_schedule.iter().cloned().fold(f64::INFINITY, f64::min);
    if !closed && !(eps_min > 0.0) {
        return Err(Error::Invalid("the ε schedule must be nonempty and positive".into()));
    }
    let default_cutoff = if closed {
        let steps = 10f64.powf(4.0 / rs.rank() as f64).round();
        steps * steps * to_f64(&rs.norm2(&rs.rho))
    } else {
        40.0 / eps_min
    };
    let cutoff = opts.casimir_cutoff.unwrap_or(default_cutoff);
    if cutoff < to_f64(&rs.norm2(&rs.rho)) {
        return Err(Error::Invalid(format!("Casimir cutoff {cutoff} admits no weights")));
    }
    let evals: Vec<CharacterEvaluator> = marking.points.iter().map(|m| CharacterEvaluator::new(rs, m)).collect();
    let metric = WeightMetric::new(rs);

    let mut warnings = Vec::new();
    let mut report = VolumeReport::new(rs, surface, marking, Method::WittenSeries, 0.0);
    report.parameters.casimir_cutoff = Some(cutoff);
    let (sum, residual) = if closed {
        let weights = enumerate_dominant(rs, cutoff);
        report.parameters.dominant_weights = Some(weights.len());
        let terms: Vec<(f64, Complex64)> = weights
            .par_iter()
            .map(|l| (metric.casimir_f64(l), Complex64::new(metric.dimension_f64(l).powi(-e), 0.0)))
            .collect();
        // cutoffs C, C/4, C/16, C/64: the weight norm halves each step
        let partial: Vec<Complex64> = (0..4)
            .rev()
            .map(|k| {
                let c = cutoff / 4f64.powi(k);
                let n = terms.partition_point(|(x, _)| *x <= c);
                pairwise_sum(&terms[..n].iter().map(|t| t.1).collect::<Vec<_>>())
            })
            .collect();
        let a1 = aitken(partial[0], partial[1], partial[2]);
        let a2 = aitken(partial[1], partial[2], partial[3]);
        (a2, (a2 - a1).norm())
    } else {
        if opts.casimir_cutoff.is_some_and(|c| c < 40.0 / eps_min) {
            warnings.push(format!("Casimir cutoff {cutoff} truncates the damped series at ε = {eps_min}"));
        }
        let (sums, count) = damped_sums(&metric, &evals, e, cutoff, &opts.eps_schedule);
        report.parameters.dominant_weights = Some(count);
        report.parameters.eps_schedule = Some(opts.eps_schedule.clone());
        let samples: Vec<(f64, Complex64)> = opts.eps_schedule.iter().cloned().zip(sums).collect();
        let eps_max = opts.eps_schedule.iter().cloned().fold(0.0, f64::max);
        let singular = singular_distances(rs, &marking.points, e, SINGULAR_REACH * smoothing_width(eps_max));
        let smooth = smooth_terms(rs, e);
        report.parameters.singular_terms = Some(singular.len());
        let full = fit_limit(&samples, smooth, &singular);
        // drop the largest ε
        let mut sorted = samples.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        sorted.pop();
        let residual = match (full, fit_limit(&sorted, smooth, &singular)) {
            (Some(a), Some(b)) => (a - b).norm(),
            _ => f64::NAN,
        };
        let Some(full) = full.or_else(|| fit_limit(&samples, 0, &[])) else {
            return Err(Error::Invalid("the ε schedule must be nonempty and positive".into()));
        };
        if residual.is_nan() {
            warnings.push(format!(
                "{CONVERGENCE_WARNING}: {} ε samples cannot separate {} singular and {smooth} smooth terms",
                samples.len(),
                singular.len()
            ));
        }
        (full, residual)
    };
    let total = sum * prefactor;
    if !total.re.is_finite() {
        return Err(Error::Convergence(format!("series value is not finite: {total}")));
    }
    let residual = residual * prefactor.abs();
    if !closed && residual.is_nan() {
        report.parameters.extrapolation_residual = None;
    } else if residual.is_finite() {
        report.parameters.extrapolation_residual = Some(residual);
        let relative = residual / (total.re.abs() + 1e-12);
        if relative > opts.tolerance {
            warnings.push(format!("{CONVERGENCE_WARNING}: relative residual {relative:.3e} exceeds tolerance {:e}", opts.tolerance));
        }
    }
    report.value = total.re;
    report.parameters.imaginary_part = Some(total.im);
    report.warnings = warnings;
    Ok(report)
}

/// `Σ_{|ν|² ≤ cutoff} d_ν^{−e} ∏_j χ(μ_j) e^{−ε|ν|²}` for each `ε`, over
/// shifted weights `ν = λ + ρ`. Rows along `ω_1` are summed sequentially and
/// row totals pairwise, so the result does not depend on thread count.
pub(crate) fn damped_sums(metric: &WeightMetric, evals: &[CharacterEvaluator], e: i32, cutoff: f64, schedule: &[f64]) -> (Vec<Complex64>, usize) {
    let r = metric.coroot_coeffs()[0].len();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut prefix = vec![1i64; r];
    fn rec(i: usize, nu: &mut Vec<i64>, m: &WeightMetric, cutoff: f64, out: &mut Vec<Vec<i64>>) {
        if i == nu.len() {
            out.push(nu.clone());
            return;
        }
        loop {
            let mut probe = nu.clone();
            for x in probe.iter_mut().skip(i + 1) {
                *x = 1;
            }
            if m.norm_f64(&probe) > cutoff {
                break;
            }
            rec(i + 1, nu, m, cutoff, out);
            nu[i] += 1;
        }
        nu[i] = 1;
    }
    rec(1, &mut prefix, metric, cutoff, &mut rows);
    let dens: Vec<Complex64> = evals.iter().map(|ev| ev.denominator()).collect();
    let rho_pairings: Vec<f64> = metric.coroot_coeffs().iter().map(|c| c.iter().sum::<i64>() as f64).collect();
    let per_row: Vec<(Vec<Complex64>, usize)> = rows
        .par_iter()
        .map(|start| {
            let mut len = 0usize;
            let mut nu = start.clone();
            while metric.norm_f64(&nu) <= cutoff {
                len += 1;
                nu[0] += 1;
            }
            let nums: Vec<Vec<Complex64>> = evals.iter().map(|ev| ev.numerators_along(start, len)).collect();
            let base: Vec<f64> =
                metric.coroot_coeffs().iter().map(|c| c.iter().zip(start).map(|(a, b)| a * b).sum::<i64>() as f64).collect();
            let step: Vec<f64> = metric.coroot_coeffs().iter().map(|c| c[0] as f64).collect();
            let mut acc = vec![Complex64::zero(); schedule.len()];
            let inv_den: Complex64 = dens.iter().map(|d| d.inv()).product();
            // e^{−ε|ν + kω₁|²} = g_k with g_{k+1} = g_k r_k, r_{k+1} = r_k q
            let x0 = metric.norm_f64(start);
            let (a, b) = {
                let mut one = start.clone();
                one[0] += 1;
                let x1 = metric.norm_f64(&one);
                one[0] += 1;
                let x2 = metric.norm_f64(&one);
                ((x2 - 2.0 * x1 + x0) / 2.0, x1 - x0 - (x2 - 2.0 * x1 + x0) / 2.0)
            };
            let mut g = vec![0.0; schedule.len()];
            let mut ratio = vec![0.0; schedule.len()];
            let q: Vec<f64> = schedule.iter().map(|eps| (-2.0 * eps * a).exp()).collect();
            for k in 0..len {
                let kf = k as f64;
                if k % 256 == 0 {
                    for (i, eps) in schedule.iter().enumerate() {
                        let x = x0 + b * kf + a * kf * kf;
                        g[i] = (-eps * x).exp();
                        ratio[i] = (-eps * (b + a * (2.0 * kf + 1.0))).exp();
                    }
                }
                let d: f64 = base.iter().zip(&step).zip(&rho_pairings).map(|((b, s), p)| (b + kf * s) / p).product();
                let mut t = inv_den * d.powi(-e);
                for n in &nums {
                    t *= n[k];
                }
                for i in 0..schedule.len() {
                    acc[i] += t * g[i];
                    g[i] *= ratio[i];
                    ratio[i] *= q[i];
                }
            }
            (acc, len)
        })
        .collect();
    let count = per_row.iter().map(|r| r.1).sum();
    let sums = (0..schedule.len()).map(|i| pairwise_sum(&per_row.iter().map(|r| r.0[i]).collect::<Vec<_>>())).collect();
    (sums, count)
}

/// Walls of the lattice sum within this many smoothing widths enter the fit.
const SINGULAR_REACH: f64 = 6.0;

/// Highest smoothing order `ε^k` fitted; higher ones are below rounding.
const MAX_SMOOTH_ORDER: usize = 2;

/// Highest singularity order `σ^m` fitted.
const MAX_SINGULAR_ORDER: u32 = 2;

/// Damping by `e^{−ε|ν|²}` is convolution with an isotropic Gaussian of this
/// standard deviation.
fn smoothing_width(eps: f64) -> f64 {
    (eps / 2.0).sqrt() / PI
}

/// `E[(u + Z)₊^m]` for a standard normal `Z`.
fn ramp_moment(m: u32, u: f64) -> f64 {
    let density = (-u * u / 2.0).exp() / (2.0 * PI).sqrt();
    let cdf = 0.5 * libm::erfc(-u / SQRT_2);
    match m {
        0 => cdf,
        1 => u * cdf + density,
        _ => (u * u + 1.0) * cdf + u * density,
    }
}

/// Number of `ε^k` terms in the smoothing of the polynomial pieces of the
/// lattice sum, which have degree `e|R⁺|`.
fn smooth_terms(rs: &RootSystem, e: i32) -> usize {
    (e as usize * rs.num_positive() / 2).min(MAX_SMOOTH_ORDER)
}

/// The summand is a sum over `w ∈ W^b` of `e^{2πi⟨ν, Σ_j w_j μ_j⟩}/d_ν^e`. As a
/// function of `x = Σ_j w_j μ_j` the lattice sum is piecewise polynomial,
/// singular on the translates by the coroot lattice of the hyperplanes
/// spanned by roots; across such a hyperplane `H` its
/// `(e·#{α ∉ H} − 1)`-th derivative jumps. Returns each distance below
/// `reach` from some `x` to its nearest singular translate, with that order;
/// equal pairs are merged.
fn singular_distances(rs: &RootSystem, points: &[CartanVec], e: i32, reach: f64) -> Vec<(f64, u32)> {
    let r = rs.rank();
    let roots: Vec<Vec<Q>> = rs.positive_roots.iter().map(|a| a.0.clone()).collect();
    let coroots: Vec<CartanVec> = rs.simple_roots.iter().map(|a| rs.coroot(a)).collect();
    let gram_inv = linalg::inverse(&rs.gram).expect("the Gram matrix is invertible");
    let mut out: Vec<(f64, u32)> = Vec::new();
    for n in wall_normals(r, &roots) {
        // scale n so that n·Q∨ = Z
        let vals: Vec<Q> = coroots.iter().map(|c| dot(&n, &c.0)).collect();
        let l = vals.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let g = vals.iter().fold(BigInt::zero(), |acc, v| acc.gcd(&(v * Q::from_integer(l.clone())).to_integer()));
        let scale = Q::new(l, g);
        let n: Vec<Q> = n.iter().map(|x| x * &scale).collect();
        let dual_norm = to_f64(&dot(&n, &linalg::mat_vec(&gram_inv, &n))).sqrt();
        let outside = roots.iter().filter(|a| !dot(&n, a).is_zero()).count() as i64;
        let Ok(order) = u32::try_from(i64::from(e) * outside - 1) else { continue };
        if order > MAX_SINGULAR_ORDER {
            continue;
        }
        let orbits: Vec<Vec<Q>> = points
            .iter()
            .map(|mu| rs.weyl_group().iter().map(|w| dot(&n, &w.apply(mu).0)).sorted().dedup().collect())
            .collect();
        for combo in orbits.iter().multi_cartesian_product() {
            let t: Q = combo.into_iter().sum();
            let frac = (&t - t.round()).abs();
            let d = to_f64(&frac) / dual_norm;
            if d < reach && !out.iter().any(|&(x, o)| o == order && (x - d).abs() <= 1e-12 * reach) {
                out.push((d, order));
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    out
}

/// Least-squares limit at `ε = 0` of the damped sums under
/// `S(ε) = V + Σ_k c_k ε^k + Σ_{(d, D)} Σ_{m ≥ D} a σ^m E[(Z − d/σ)₊^m]`,
/// `σ` the smoothing width: the polynomial pieces smooth to polynomials in
/// `ε` and each nearby singular hyperplane adds its one-sided moments.
/// `None` when the samples do not determine the terms.
fn fit_limit(samples: &[(f64, Complex64)], smooth: usize, singular: &[(f64, u32)]) -> Option<Complex64> {
    let mut columns: Vec<Box<dyn Fn(f64) -> f64 + '_>> = vec![Box::new(|_| 1.0)];
    for k in 1..=smooth {
        columns.push(Box::new(move |eps: f64| eps.powi(k as i32)));
    }
    for &(d, order) in singular {
        for m in order..=(order + 1).min(MAX_SINGULAR_ORDER) {
            if d == 0.0 && m % 2 == 0 {
                // a constant or a multiple of ε
                continue;
            }
            columns.push(Box::new(move |eps: f64| {
                let s = smoothing_width(eps);
                s.powi(m as i32) * ramp_moment(m, -d / s)
            }));
        }
    }
    let (rows, cols) = (samples.len(), columns.len());
    if rows < cols || rows == 0 {
        return None;
    }
    let mut a = DMatrix::from_fn(rows, cols, |i, j| columns[j](samples[i].0));
    let scales: Vec<f64> = (0..cols).map(|j| a.column(j).amax().max(f64::MIN_POSITIVE)).collect();
    for (j, s) in scales.iter().enumerate() {
        a.column_mut(j).unscale_mut(*s);
    }
    let b = DMatrix::from_fn(rows, 2, |i, j| if j == 0 { samples[i].1.re } else { samples[i].1.im });
    let svd = a.svd(true, true);
    let tol = 1e-13 * svd.singular_values.max();
    let x = svd.solve(&b, tol).ok()?;
    Some(Complex64::new(x[(0, 0)], x[(0, 1)]) / scales[0])
}

/// Fixed-order pairwise summation: bitwise reproducible for a given input.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 16 {
        return xs.iter().fold(Complex64::zero(), |a, b| a + b);
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

fn aitken(s0: Complex64, s1: Complex64, s2: Complex64) -> Complex64 {
    let d = s2 - 2.0 * s1 + s0;
    if d.norm() == 0.0 {
        return s2;
    }
    s2 - (s2 - s1) * (s2 - s1) / d
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn ramp_moments_match_their_limits() {
        assert!((ramp_moment(0, 0.0) - 0.5).abs() < 1e-15);
        assert!((ramp_moment(1, 0.0) - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        assert!((ramp_moment(2, 0.0) - 0.5).abs() < 1e-15);
        assert!((ramp_moment(1, 12.0) - 12.0).abs() < 1e-12);
        assert!((ramp_moment(2, 12.0) - 145.0).abs() < 1e-10);
        assert!(ramp_moment(2, -12.0) < 1e-30);
    }

    #[test]
    fn fit_recovers_a_smoothed_kink() {
        let (v, d) = (0.25, 3e-4);
        let samples: Vec<(f64, Complex64)> = (0..7)
            .map(|k| 1e-5 * 2f64.powf(-f64::from(k) / 3.0))
            .map(|eps| {
                let s = smoothing_width(eps);
                (eps, Complex64::new(v + 3.0 * eps + 0.7 * s * ramp_moment(1, -d / s), -v))
            })
            .collect();
        let fit = fit_limit(&samples, 1, &[(d, 1)]).unwrap();
        assert!((fit - Complex64::new(v, -v)).norm() < 1e-10, "{fit}");
        assert!(fit_limit(&samples[..2], 2, &[(d, 1)]).is_none());
    }

    #[test]
    fn a1_singular_hyperplanes_are_half_integers_in_t() {
        let r = RootSystem::from_name("A1").unwrap();
        let half = r.from_fundamental(&[q(1, 2)]);
        let found = singular_distances(&r, &[half.clone(), half.clone(), half], 1, 1.0);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].1, 0);
        assert!((found[0].0 - 0.25 * SQRT_2).abs() < 1e-15);
        assert!(singular_distances(&r, &[r.from_fundamental(&[q(1, 2)])], 1, 0.1).is_empty());
    }
}
