//! Multivariate polynomials with exact rational coefficients, and
//! constant-coefficient differential operators.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_q, qi, serde_q, to_f64, Q};

/// `Σ c_e x^e`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Q) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// `Σ a_i x_i`.
    pub fn linear(coeffs: &[Q]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Q) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn add_assign(&mut self, o: &Polynomial) {
        for (e, c) in &o.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), -c.clone());
        }
        p
    }

    pub fn scale(&self, s: &Q) -> Polynomial {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        let mut p = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            s += t;
        }
        s
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                to_f64(c) * x.iter().zip(e).map(|(xi, &k)| xi.powi(k as i32)).product::<f64>()
            })
            .sum()
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            p.add_term(e2, c * qi(i64::from(e[i])));
        }
        p
    }

    /// `y ↦ p(L y)` where row `i` of `L` expresses `x_i` in the new variables.
    pub fn substitute_linear(&self, l: &[Vec<Q>]) -> Polynomial {
        let m = l.first().map_or(0, Vec::len);
        let forms: Vec<Polynomial> = l.iter().map(|row| Polynomial::linear(row)).collect();
        let mut powers: Vec<Vec<Polynomial>> = forms.iter().map(|f| vec![Polynomial::one(m), f.clone()]).collect();
        let mut out = Polynomial::zero(m);
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&forms[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            out.add_assign(&t);
        }
        out
    }

    /// `x ↦ p(x + s)`.
    pub fn translate(&self, s: &[Q]) -> Polynomial {
        if s.iter().all(Zero::is_zero) {
            return self.clone();
        }
        let n = self.nvars;
        let mut out = Polynomial::zero(n);
        for (e, c) in &self.terms {
            // ∏ (x_i + s_i)^{e_i}
            let mut t = Polynomial::constant(n, c.clone());
            for i in 0..n {
                if e[i] == 0 {
                    continue;
                }
                let mut f = Polynomial::zero(n);
                for j in 0..=e[i] {
                    let mut ex = vec![0; n];
                    ex[i] = j;
                    let coef = binom(e[i], j) * num_traits::pow(s[i].clone(), (e[i] - j) as usize);
                    f.add_term(ex, coef);
                }
                t = t.mul(&f);
            }
            out.add_assign(&t);
        }
        out
    }

    /// `t ↦ p(x0 + Σ t_j b_j)`: restriction to an affine subspace.
    pub fn restrict(&self, x0: &[Q], basis: &[Vec<Q>]) -> Polynomial {
        let l: Vec<Vec<Q>> = (0..self.nvars)
            .map(|i| basis.iter().map(|b| b[i].clone()).collect())
            .collect();
        let shifted = self.translate(x0);
        if basis.is_empty() {
            return Polynomial::constant(0, shifted.eval(&vec![Q::zero(); self.nvars]));
        }
        shifted.substitute_linear(&l)
    }
}

fn binom(n: u32, k: u32) -> Q {
    let mut r = Q::one();
    for i in 0..k {
        r = r * qi(i64::from(n - i)) / qi(i64::from(i + 1));
    }
    r
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{}*{}", c, mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exponents: Vec<u32>,
    #[serde(with = "serde_q")]
    coefficient: Q,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    nvars: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRepr {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr { exponents: e.clone(), coefficient: c.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        let mut p = Polynomial::zero(r.nvars);
        for t in r.terms {
            if t.exponents.len() != r.nvars {
                return Err(serde::de::Error::custom("exponent length mismatch"));
            }
            p.add_term(t.exponents, t.coefficient);
        }
        Ok(p)
    }
}

/// `P(∂/∂c_1, …, ∂/∂c_r)` with constant rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DiffOperator {
    pub symbol: Polynomial,
}

impl DiffOperator {
    pub fn identity(nvars: usize) -> Self {
        DiffOperator { symbol: Polynomial::one(nvars) }
    }

    /// Derivative along the direction with the given coordinates.
    pub fn directional(dir: &[Q]) -> Self {
        DiffOperator { symbol: Polynomial::linear(dir) }
    }

    pub fn order(&self) -> Option<u32> {
        self.symbol.degree()
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(f.nvars());
        for (e, c) in self.symbol.terms() {
            let mut g = f.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    if g.is_zero() {
                        break;
                    }
                    g = g.derivative(i);
                }
            }
            out.add_assign(&g.scale(c));
        }
        out
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol.to_string().replace('x', "d"))
    }
}

/// Formats a coefficient list for messages.
pub fn fmt_coeffs(c: &[Q]) -> String {
    c.iter().map(fmt_q).collect::<Vec<_>>().join(", ")
}
