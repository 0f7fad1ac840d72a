//! Symmetric polynomials in the elementary-symmetric basis.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::{parse_q, Q};

/// A symmetric polynomial in `nvars` variables, stored as a polynomial in
/// the generators `e_1, …, e_nvars` (generator `e_l` is variable `l − 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementarySymmetricPoly {
    pub nvars: usize,
    pub poly: Polynomial,
}

impl ElementarySymmetricPoly {
    pub fn one(nvars: usize) -> Self {
        ElementarySymmetricPoly { nvars, poly: Polynomial::one(nvars) }
    }

    /// The generator `e_l`, `1 ≤ l ≤ nvars`.
    pub fn e(nvars: usize, l: usize) -> Self {
        ElementarySymmetricPoly { nvars, poly: Polynomial::var(nvars, l - 1) }
    }

    /// Parses expressions such as `"1"`, `"e1"`, `"e1^2+e2"`, `"3/2*e1*e2 - e3"`.
    pub fn parse(s: &str, nvars: usize) -> Result<Self> {
        let mut p = Parser { s: s.as_bytes(), i: 0, nvars, src: s };
        let poly = p.expr()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(ElementarySymmetricPoly { nvars, poly })
    }

    /// Degree in the original variables, where `e_l` has degree `l`.
    pub fn degree(&self) -> Option<u32> {
        self.poly
            .terms()
            .map(|(e, _)| e.iter().enumerate().map(|(i, &k)| (i as u32 + 1) * k).sum())
            .max()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        ElementarySymmetricPoly { nvars: self.nvars, poly: self.poly.add(&o.poly) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        ElementarySymmetricPoly { nvars: self.nvars, poly: self.poly.mul(&o.poly) }
    }

    /// Expansion as an ordinary polynomial in `nvars` variables.
    pub fn to_monomials(&self) -> Polynomial {
        let n = self.nvars;
        let gens: Vec<Polynomial> = (1..=n).map(|l| elementary(n, l)).collect();
        let mut out = Polynomial::zero(n);
        for (e, c) in self.poly.terms() {
            let mut t = Polynomial::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&gens[i].pow(k));
                }
            }
            out.add_assign(&t);
        }
        out
    }

    /// Rewrites a symmetric polynomial in the elementary basis.
    pub fn from_monomials(p: &Polynomial) -> Result<Self> {
        let n = p.nvars();
        let mut rest = p.clone();
        let mut out = Polynomial::zero(n);
        while let Some((lead, c)) = rest.terms().last().map(|(e, c)| (e.clone(), c.clone())) {
            if lead.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::NotSymmetric(format!("leading exponent {lead:?} is not a partition")));
            }
            let mut ge = vec![0u32; n];
            for l in 0..n {
                let next = if l + 1 < n { lead[l + 1] } else { 0 };
                ge[l] = lead[l] - next;
            }
            let g = ElementarySymmetricPoly { nvars: n, poly: Polynomial::monomial(ge.clone(), Q::one()) };
            rest = rest.sub(&g.to_monomials().scale(&c));
            out.add_term(ge, c);
        }
        Ok(ElementarySymmetricPoly { nvars: n, poly: out })
    }
}

/// `e_l(x_1, …, x_n)` as a polynomial.
pub fn elementary(n: usize, l: usize) -> Polynomial {
    let mut p = Polynomial::zero(n);
    if l > n {
        return p;
    }
    let mut idx: Vec<usize> = (0..l).collect();
    loop {
        let mut e = vec![0u32; n];
        for &i in &idx {
            e[i] = 1;
        }
        p.add_term(e, Q::one());
        // next l-subset in lexicographic order
        let mut j = l;
        loop {
            if j == 0 {
                return p;
            }
            j -= 1;
            if idx[j] < n - l + j {
                idx[j] += 1;
                for t in j + 1..l {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Reinterprets `p`, a symmetric polynomial in `k ≤ n` variables written in
/// elementary generators, as the same expression in `n` variables.
pub fn symmetric_extension(p: &ElementarySymmetricPoly, n: usize) -> Result<ElementarySymmetricPoly> {
    if p.nvars > n {
        return Err(Error::Invalid(format!("cannot extend from {} to {} variables", p.nvars, n)));
    }
    let mut poly = Polynomial::zero(n);
    for (e, c) in p.poly.terms() {
        let mut ex = e.clone();
        ex.resize(n, 0);
        poly.add_term(ex, c.clone());
    }
    Ok(ElementarySymmetricPoly { nvars: n, poly })
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    nvars: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {} in {:?}", self.i, self.src))
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.nvars);
        let mut sign = Q::one();
        if self.peek() == Some(b'-') {
            self.i += 1;
            sign = -sign;
        } else if self.peek() == Some(b'+') {
            self.i += 1;
        }
        loop {
            let t = self.term()?;
            acc.add_assign(&t.scale(&sign));
            match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    sign = Q::one();
                }
                Some(b'-') => {
                    self.i += 1;
                    sign = -Q::one();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.i += 1;
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            self.ws();
            let k = self.digits()?;
            return Ok(base.pow(k as u32));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Result<usize> {
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i])
            .unwrap()
            .parse()
            .map_err(|_| self.err("expected an integer"))
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(b'e') => {
                self.i += 1;
                let l = self.digits()?;
                if l == 0 {
                    return Err(self.err("generators start at e1"));
                }
                if l > self.nvars {
                    return Err(Error::Degree(format!(
                        "e{l} needs at least {l} variables but only {} are available",
                        self.nvars
                    )));
                }
                Ok(Polynomial::var(self.nvars, l - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.i;
                while self.i < self.s.len() && (self.s[self.i].is_ascii_digit() || b"/.".contains(&self.s[self.i])) {
                    self.i += 1;
                }
                let txt = std::str::from_utf8(&self.s[start..self.i]).unwrap();
                Ok(Polynomial::constant(self.nvars, parse_q(txt)?))
            }
            _ => Err(self.err("expected a number, a generator e<l>, or '('")),
        }
    }
}

impl ElementarySymmetricPoly {
    /// The constant term, when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Q> {
        match self.degree() {
            None => Some(Q::zero()),
            Some(0) => Some(self.poly.coeff(&vec![0; self.nvars])),
            _ => None,
        }
    }
}
