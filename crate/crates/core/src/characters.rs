//! Weyl characters and dimensions, and dominant weights ordered by the
//! shifted Casimir `|λ + ρ|²`.
//!
//! Characters are evaluated at `exp(μ)` with the pairing `e^{2πi⟨λ,μ⟩}`:
//! `χ_λ(μ) = Σ_w ε(w) e^{2πi⟨w(λ+ρ),μ⟩} / Σ_w ε(w) e^{2πi⟨wρ,μ⟩}`.
//! At singular `μ` the quotient is replaced by its limit along `ρ`, which
//! is a ratio of derivatives of the same order and is computed in closed
//! form.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::RootSystem;
use crate::rational::{from_f64, qi, CartanVec, Q};

/// A dominant integral weight, stored by its fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DominantWeight {
    pub fundamental: Vec<u32>,
}

impl DominantWeight {
    pub fn new(fundamental: Vec<u32>) -> Self {
        DominantWeight { fundamental }
    }

    pub fn zero(rank: usize) -> Self {
        DominantWeight { fundamental: vec![0; rank] }
    }

    /// Checks integrality and dominance of a weight given in root coordinates.
    pub fn from_weight(rs: &RootSystem, w: &CartanVec) -> Result<Self> {
        let f = rs.to_fundamental(w);
        let fundamental = f
            .iter()
            .map(|x| {
                if x.is_integer() && !x.is_negative() {
                    Ok(x.to_integer().to_u32().unwrap())
                } else {
                    Err(Error::Invalid(format!("{w:?} is not dominant integral")))
                }
            })
            .collect::<Result<_>>()?;
        Ok(DominantWeight { fundamental })
    }

    pub fn weight(&self, rs: &RootSystem) -> CartanVec {
        rs.from_fundamental(&self.fundamental.iter().map(|&a| qi(i64::from(a))).collect::<Vec<_>>())
    }

    /// Fundamental coordinates of `λ + ρ`.
    pub fn shifted(&self) -> Vec<i64> {
        self.fundamental.iter().map(|&a| i64::from(a) + 1).collect()
    }
}

/// `∏_{α>0} ⟨λ+ρ,α⟩/⟨ρ,α⟩`.
pub fn weyl_dimension(rs: &RootSystem, lambda: &DominantWeight) -> BigInt {
    WeightMetric::new(rs).dimension(lambda)
}

/// Integer tables for dimensions and shifted Casimirs of many weights.
#[derive(Clone, Debug)]
pub struct WeightMetric {
    /// `⟨ω_i, α∨⟩` for each positive root.
    coroot_coeffs: Vec<Vec<i64>>,
    /// `denom·⟨ω_i, ω_j⟩`.
    gram: Vec<Vec<i64>>,
    denom: i64,
}

impl WeightMetric {
    pub fn new(rs: &RootSystem) -> Self {
        let r = rs.rank();
        let coroot_coeffs = rs
            .positive_roots
            .iter()
            .map(|a| {
                let c = rs.coroot(a);
                (0..r).map(|i| rs.pairing(&rs.fundamental_weights[i], &c).to_integer().to_i64().unwrap()).collect()
            })
            .collect();
        let f: Vec<Vec<Q>> = (0..r)
            .map(|i| (0..r).map(|j| rs.pairing(&rs.fundamental_weights[i], &rs.fundamental_weights[j])).collect())
            .collect();
        let denom = f.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let gram = f
            .iter()
            .map(|row| row.iter().map(|x| (x * Q::from_integer(denom.clone())).to_integer().to_i64().unwrap()).collect())
            .collect();
        WeightMetric { coroot_coeffs, gram, denom: denom.to_i64().unwrap() }
    }

    /// `⟨ω_i, α∨⟩`, one row per positive root.
    pub fn coroot_coeffs(&self) -> &[Vec<i64>] {
        &self.coroot_coeffs
    }

    /// `|ν|²` for `ν` in fundamental coordinates.
    pub fn norm_f64(&self, nu: &[i64]) -> f64 {
        self.scaled_norm(nu) as f64 / self.denom as f64
    }

    /// `∏_{α>0} ⟨ν,α∨⟩/⟨ρ,α∨⟩` for `ν` in fundamental coordinates.
    pub fn shifted_dimension_f64(&self, nu: &[i64]) -> f64 {
        let r = nu.len();
        self.pairings(nu).zip(self.pairings(&vec![1; r])).map(|(a, b)| a as f64 / b as f64).product()
    }

    /// `denom·|ν|²` for `ν` in fundamental coordinates.
    fn scaled_norm(&self, nu: &[i64]) -> i128 {
        let mut s: i128 = 0;
        for (i, row) in self.gram.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                s += i128::from(*g) * i128::from(nu[i]) * i128::from(nu[j]);
            }
        }
        s
    }

    /// `|λ + ρ|²`.
    pub fn casimir(&self, lambda: &DominantWeight) -> Q {
        Q::new(BigInt::from(self.scaled_norm(&lambda.shifted())), BigInt::from(self.denom))
    }

    pub fn casimir_f64(&self, lambda: &DominantWeight) -> f64 {
        self.scaled_norm(&lambda.shifted()) as f64 / self.denom as f64
    }

    fn pairings(&self, nu: &[i64]) -> impl Iterator<Item = i64> + '_ {
        let nu = nu.to_vec();
        self.coroot_coeffs.iter().map(move |c| c.iter().zip(&nu).map(|(a, b)| a * b).sum())
    }

    pub fn dimension(&self, lambda: &DominantWeight) -> BigInt {
        let r = lambda.fundamental.len();
        let num: BigInt = self.pairings(&lambda.shifted()).map(BigInt::from).product();
        let den: BigInt = self.pairings(&vec![1; r]).map(BigInt::from).product();
        let (d, rem) = num.div_rem(&den);
        assert!(rem.is_zero() && d.is_positive(), "Weyl dimension must be a positive integer");
        d
    }

    pub fn dimension_f64(&self, lambda: &DominantWeight) -> f64 {
        self.shifted_dimension_f64(&lambda.shifted())
    }
}

/// Which formula produced a character value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evaluation {
    Regular,
    Limit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterValue {
    pub re: f64,
    pub im: f64,
    pub flag: Evaluation,
}

impl CharacterValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

struct Term {
    sign: f64,
    /// `⟨ω_i, wμ⟩ = num_i / den`.
    num: Vec<i128>,
    den: i128,
    /// `⟨ω_i, wρ⟩`.
    rho: Vec<f64>,
}

/// Weyl numerators at a fixed `μ`, reusable across many weights.
pub struct CharacterEvaluator {
    terms: Vec<Term>,
    /// Number of positive roots with `⟨α, μ⟩ ∈ Z`: the vanishing order of
    /// the denominator along `ρ`.
    order: u32,
    denominator: Complex64,
}

impl CharacterEvaluator {
    pub fn new(rs: &RootSystem, mu: &CartanVec) -> Self {
        let half: Vec<Q> = (0..rs.rank()).map(|i| &rs.gram[i][i] / qi(2)).collect();
        let terms = rs
            .weyl_group()
            .iter()
            .map(|w| {
                let x = w.apply(mu);
                let y = w.apply(&rs.rho);
                let pair: Vec<Q> = x.0.iter().zip(&half).map(|(a, h)| a * h).collect();
                let den = pair.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
                let num: Vec<i128> = pair
                    .iter()
                    .map(|p| (p.numer() * (&den / p.denom())).to_i128().expect("marking denominator too large"))
                    .collect();
                let rho = y.0.iter().zip(&half).map(|(a, h)| crate::rational::to_f64(&(a * h))).collect();
                Term { sign: f64::from(w.sign()), num, den: den.to_i128().expect("marking denominator too large"), rho }
            })
            .collect();
        let order = rs.positive_roots.iter().filter(|a| rs.pairing(a, mu).is_integer()).count() as u32;
        let mut ev = CharacterEvaluator { terms, order, denominator: Complex64::zero() };
        ev.denominator = ev.sum(&vec![1; rs.rank()]);
        ev
    }

    pub fn is_regular(&self) -> bool {
        self.order == 0
    }

    /// `Σ_w ε(w) e^{2πi⟨ν,wμ⟩} ⟨ν,wρ⟩^order` for `ν` in fundamental coordinates.
    fn sum(&self, nu: &[i64]) -> Complex64 {
        let mut acc = Complex64::zero();
        for t in &self.terms {
            let mut p: i128 = 0;
            for (a, n) in nu.iter().zip(&t.num) {
                p = (p + i128::from(*a) * n).rem_euclid(t.den);
            }
            let phase = 2.0 * PI * (p as f64) / (t.den as f64);
            let mut z = Complex64::from_polar(t.sign, phase);
            if self.order > 0 {
                let s: f64 = nu.iter().zip(&t.rho).map(|(&a, r)| a as f64 * r).sum();
                z *= s.powi(self.order as i32);
            }
            acc += z;
        }
        acc
    }

    /// `Σ_w ε(w) e^{2πi⟨ν + k ω_1, wμ⟩}` for `k = 0..len`, with `ν` in
    /// fundamental coordinates. Phases advance by multiplication and are
    /// recomputed exactly every 256 steps.
    pub fn numerators_along(&self, nu: &[i64], len: usize) -> Vec<Complex64> {
        assert_eq!(self.order, 0, "row numerators need a regular point");
        let mut out = vec![Complex64::zero(); len];
        for t in &self.terms {
            let mut p0: i128 = 0;
            for (a, n) in nu.iter().zip(&t.num) {
                p0 = (p0 + i128::from(*a) * n).rem_euclid(t.den);
            }
            let angle = |p: i128| 2.0 * PI * (p as f64) / (t.den as f64);
            let step = Complex64::from_polar(1.0, angle(t.num[0].rem_euclid(t.den)));
            let mut z = Complex64::zero();
            for (k, o) in out.iter_mut().enumerate() {
                if k % 256 == 0 {
                    let p = (p0 + (k as i128) * t.num[0]).rem_euclid(t.den);
                    z = Complex64::from_polar(t.sign, angle(p));
                }
                *o += z;
                z *= step;
            }
        }
        out
    }

    /// The Weyl denominator `Σ_w ε(w) e^{2πi⟨wρ, μ⟩}`.
    pub fn denominator(&self) -> Complex64 {
        self.denominator
    }

    /// The Weyl numerator at `λ + ρ` (regular `μ` only meaningful).
    pub fn numerator(&self, lambda: &DominantWeight) -> Complex64 {
        self.sum(&lambda.shifted())
    }

    pub fn eval(&self, lambda: &DominantWeight) -> CharacterValue {
        let z = self.sum(&lambda.shifted()) / self.denominator;
        let flag = if self.order == 0 { Evaluation::Regular } else { Evaluation::Limit };
        CharacterValue { re: z.re, im: z.im, flag }
    }
}

/// `χ_λ(exp μ)`.
pub fn character_eval(rs: &RootSystem, lambda: &DominantWeight, mu: &CartanVec) -> CharacterValue {
    CharacterEvaluator::new(rs, mu).eval(lambda)
}

/// Dominant weights with `|λ+ρ|² ≤ cutoff`, sorted by `|λ+ρ|²` and then
/// lexicographically.
pub fn enumerate_dominant(rs: &RootSystem, casimir_cutoff: f64) -> Vec<DominantWeight> {
    let r = rs.rank();
    let m = WeightMetric::new(rs);
    let bound = (from_f64(casimir_cutoff.max(0.0)) * qi(m.denom)).floor().to_integer();
    let bound = bound.to_i128().unwrap_or(i128::MAX);
    let mut found: Vec<(i128, Vec<u32>)> = Vec::new();
    // Every ⟨ω_i, ω_j⟩ is positive, so the norm increases in each coordinate.
    let mut a = vec![1i64; r];
    fn rec(i: usize, a: &mut Vec<i64>, bound: i128, m: &WeightMetric, out: &mut Vec<(i128, Vec<u32>)>) {
        if i == a.len() {
            let n = m.scaled_norm(a);
            if n <= bound {
                out.push((n, a.iter().map(|&x| (x - 1) as u32).collect()));
            }
            return;
        }
        loop {
            let mut probe = a.clone();
            for x in probe.iter_mut().skip(i + 1) {
                *x = 1;
            }
            if m.scaled_norm(&probe) > bound {
                break;
            }
            rec(i + 1, a, bound, m, out);
            a[i] += 1;
        }
        a[i] = 1;
    }
    rec(0, &mut a, bound, &m, &mut found);
    found.sort();
    found.into_iter().map(|(_, f)| DominantWeight::new(f)).collect()
}

/// `|λ + ρ|²`.
pub fn shifted_casimir(rs: &RootSystem, lambda: &DominantWeight) -> Q {
    rs.norm2(&(&lambda.weight(rs) + &rs.rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{gauss_legendre, triangle_rule};
    use crate::rational::{q, to_f64};

    fn rs(n: &str) -> RootSystem {
        RootSystem::from_name(n).unwrap()
    }

    #[test]
    fn dimensions() {
        let a1 = rs("A1");
        for m in 0..10 {
            assert_eq!(weyl_dimension(&a1, &DominantWeight::new(vec![m])), BigInt::from(m + 1));
        }
        assert_eq!(weyl_dimension(&rs("A2"), &DominantWeight::new(vec![1, 1])), BigInt::from(8));
        assert_eq!(weyl_dimension(&rs("G2"), &DominantWeight::new(vec![1, 0])), BigInt::from(7));
        assert_eq!(weyl_dimension(&rs("G2"), &DominantWeight::new(vec![0, 1])), BigInt::from(14));
        assert_eq!(weyl_dimension(&rs("D4"), &DominantWeight::new(vec![0, 1, 0, 0])), BigInt::from(28));
        for name in ["A3", "B2", "C3", "D4"] {
            assert_eq!(weyl_dimension(&rs(name), &DominantWeight::zero(rs(name).rank())), BigInt::one());
        }
    }

    #[test]
    fn a1_closed_forms() {
        let a1 = rs("A1");
        for t in [q(1, 7), q(1, 3), q(1, 2), q(5, 6)] {
            let mu = CartanVec(vec![&t / qi(2)]);
            let tf = to_f64(&t);
            let v = character_eval(&a1, &DominantWeight::new(vec![1]), &mu);
            assert_eq!(v.flag, Evaluation::Regular);
            assert!((v.re - 2.0 * (PI * tf).cos()).abs() < 1e-12 && v.im.abs() < 1e-12);
        }
        let v = character_eval(&a1, &DominantWeight::new(vec![2]), &CartanVec(vec![q(1, 4)]));
        assert!((v.re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_gives_dimension() {
        for name in ["A1", "A2", "B2", "G2", "A3", "C3", "D4"] {
            let r = rs(name);
            let ev = CharacterEvaluator::new(&r, &CartanVec::zero(r.rank()));
            for l in enumerate_dominant(&r, to_f64(&r.norm2(&r.rho)) * 6.0) {
                let d = weyl_dimension(&r, &l).to_f64().unwrap();
                if d > 1e4 {
                    continue;
                }
                let v = ev.eval(&l);
                assert_eq!(v.flag, Evaluation::Limit);
                assert!((v.re - d).abs() < 1e-9 * d, "{name} {l:?}: {} vs {d}", v.re);
            }
        }
    }

    #[test]
    fn singular_points_use_the_limit() {
        // A2 on the wall ⟨α1, μ⟩ = 0 with a weight whose character is known:
        // χ_{ω1} = e^{2πi⟨ε_k,μ⟩} summed over the three weights of C³.
        let a2 = rs("A2");
        let mu = a2.from_fundamental(&[qi(0), q(1, 5)]);
        let v = character_eval(&a2, &DominantWeight::new(vec![1, 0]), &mu);
        assert_eq!(v.flag, Evaluation::Limit);
        let weights = [a2.fundamental_weights[0].clone(), &a2.fundamental_weights[0] - &a2.simple_roots[0], -&a2.fundamental_weights[1]];
        let direct: Complex64 =
            weights.iter().map(|w| Complex64::from_polar(1.0, 2.0 * PI * to_f64(&a2.pairing(w, &mu)))).sum();
        assert!((v.value() - direct).norm() < 1e-12);
    }

    #[test]
    fn invariance_and_duality() {
        for name in ["A2", "B2", "G2", "A3"] {
            let r = rs(name);
            let mu = r.from_fundamental(&(0..r.rank()).map(|i| q(2 + i as i64, 17 + 3 * i as i64)).collect::<Vec<_>>());
            let base = CharacterEvaluator::new(&r, &mu);
            let dual = CharacterEvaluator::new(&r, &r.star(&mu));
            for l in enumerate_dominant(&r, to_f64(&r.norm2(&r.rho)) * 4.0) {
                let v = base.eval(&l).value();
                for w in r.weyl_group() {
                    let u = character_eval(&r, &l, &w.apply(&mu)).value();
                    assert!((u - v).norm() < 1e-10);
                }
                assert!((dual.eval(&l).value() - v.conj()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn enumeration() {
        let a1 = rs("A1");
        let rho2 = to_f64(&a1.norm2(&a1.rho));
        assert_eq!(enumerate_dominant(&a1, rho2), vec![DominantWeight::zero(1)]);
        let five = enumerate_dominant(&a1, rho2 * 25.0);
        assert_eq!(five.len(), 5);
        assert_eq!(five[4], DominantWeight::new(vec![4]));
        for name in ["A2", "B2", "G2", "A3"] {
            let r = rs(name);
            let rho2 = to_f64(&r.norm2(&r.rho));
            assert_eq!(enumerate_dominant(&r, rho2).len(), 1);
            let big = enumerate_dominant(&r, rho2 * 30.0);
            let norms: Vec<Q> = big.iter().map(|l| shifted_casimir(&r, l)).collect();
            assert!(norms.windows(2).all(|w| w[0] <= w[1]));
            let brute = (0..40u32)
                .flat_map(|a| (0..40u32).map(move |b| (a, b)))
                .filter(|&(a, b)| r.rank() == 2 && to_f64(&shifted_casimir(&r, &DominantWeight::new(vec![a, b]))) <= rho2 * 30.0)
                .count();
            if r.rank() == 2 {
                assert_eq!(big.len(), brute);
            }
            assert!(enumerate_dominant(&r, rho2 * 60.0).len() > big.len());
        }
    }

    #[test]
    fn orthogonality_a1() {
        // ∫_A χ_λ χ̄_σ |Δ|² dμ = Vol(T) δ, μ = tω with |ω| = 1/√2.
        let a1 = rs("A1");
        let nodes = gauss_legendre(100, 0.0, 1.0);
        let ws: Vec<DominantWeight> = (0..6).map(|m| DominantWeight::new(vec![m])).collect();
        for l in &ws {
            for s in &ws {
                let mut acc = Complex64::zero();
                for &(t, w) in &nodes {
                    let mu = CartanVec(vec![from_f64(t / 2.0)]);
                    let d2 = a1.sine_product(&mu).powi(2);
                    acc += character_eval(&a1, l, &mu).value() * character_eval(&a1, s, &mu).value().conj() * d2 * w;
                }
                acc /= 2f64.sqrt();
                let want = if l == s { a1.covolume_t() } else { 0.0 };
                assert!((acc - want).norm() < 1e-6, "{l:?} {s:?} {acc}");
            }
        }
    }

    #[test]
    fn orthogonality_a2() {
        let a2 = rs("A2");
        let v: Vec<[f64; 2]> = [CartanVec::zero(2), a2.fundamental_weights[0].clone(), a2.fundamental_weights[1].clone()]
            .iter()
            .map(|p| [to_f64(&p.0[0]), to_f64(&p.0[1])])
            .collect();
        let rule = triangle_rule([v[0], v[1], v[2]], 100);
        let jac = to_f64(&a2.gram_det()).sqrt();
        let ws: Vec<DominantWeight> = enumerate_dominant(&a2, 40.0).into_iter().take(6).collect();
        let evs: Vec<(CharacterEvaluator, f64, f64)> = rule
            .iter()
            .map(|(p, w)| {
                let mu = CartanVec(vec![from_f64(p[0]), from_f64(p[1])]);
                let d2 = a2.sine_product(&mu).powi(2);
                (CharacterEvaluator::new(&a2, &mu), d2, *w)
            })
            .collect();
        for l in &ws {
            for s in &ws {
                let acc: Complex64 =
                    evs.iter().map(|(e, d2, w)| e.eval(l).value() * e.eval(s).value().conj() * d2 * w * jac).sum();
                let want = if l == s { a2.covolume_t() } else { 0.0 };
                assert!((acc - want).norm() < 1e-6, "{l:?} {s:?} {acc}");
            }
        }
    }
}
