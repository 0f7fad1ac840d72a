//! Piecewise polynomials on chamber complexes, and constant-coefficient
//! differential operators applied chamber-wise.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kappa::{lex_signs, Kappa};
use crate::lie::RootSystem;
use crate::poly::{DiffOperator, Polynomial};
use crate::polytope::Halfspace;
use crate::rational::{CartanVec, Surd, Q};
use crate::symmetric::ElementarySymmetricPoly;

/// A full-dimensional cell: `normal·x ≤ offset` for every inequality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chamber {
    pub inequalities: Vec<Halfspace>,
    pub interior_point: CartanVec,
}

impl Chamber {
    pub fn contains_interior(&self, x: &[Q]) -> bool {
        self.inequalities.iter().all(|h| h.slack(x).is_positive())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub chamber: Chamber,
    pub polynomial: Polynomial,
}

/// One polynomial per chamber of a hyperplane arrangement restricted to a
/// convex support; zero outside the support. Polynomials are relative to
/// simple-root coordinates and `normalization` converts values.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PiecewisePolynomial {
    pub rank: usize,
    /// The closed support region.
    pub support: Vec<Halfspace>,
    /// Hyperplanes `normal·x = offset` whose complement the chambers tile.
    pub walls: Vec<Halfspace>,
    pub pieces: Vec<Piece>,
    pub normalization: Surd,
    #[serde(skip)]
    index: OnceLock<HashMap<Vec<i8>, usize>>,
}

impl PartialEq for PiecewisePolynomial {
    fn eq(&self, o: &Self) -> bool {
        self.rank == o.rank
            && self.support == o.support
            && self.walls == o.walls
            && self.pieces == o.pieces
            && self.normalization == o.normalization
    }
}

impl PiecewisePolynomial {
    pub fn new(rank: usize, support: Vec<Halfspace>, walls: Vec<Halfspace>, pieces: Vec<Piece>, normalization: Surd) -> Self {
        PiecewisePolynomial { rank, support, walls, pieces, normalization, index: OnceLock::new() }
    }

    fn hyperplanes(&self) -> Vec<(Vec<Q>, Q)> {
        self.walls.iter().map(|h| (h.normal.clone(), h.offset.clone())).collect()
    }

    fn index(&self) -> &HashMap<Vec<i8>, usize> {
        self.index.get_or_init(|| {
            let hp = self.hyperplanes();
            self.pieces
                .iter()
                .enumerate()
                .map(|(i, p)| (lex_signs(&hp, &p.chamber.interior_point.0, None).0, i))
                .collect()
        })
    }

    /// Maximum polynomial degree over the pieces.
    pub fn degree(&self) -> Option<u32> {
        self.pieces.iter().filter_map(|p| p.polynomial.degree()).max()
    }

    /// The piece whose chamber is reached from `x` by lexicographic
    /// perturbation along `lead` and then the generic directions.
    pub fn locate(&self, x: &[Q], lead: Option<&[Q]>) -> Option<&Piece> {
        let (signs, _) = lex_signs(&self.hyperplanes(), x, lead);
        self.index().get(&signs).map(|&i| &self.pieces[i])
    }

    pub fn on_wall(&self, x: &[Q]) -> bool {
        self.walls.iter().any(|h| h.slack(x).is_zero())
    }

    /// Exact value at `x`. On a wall the value is the limit from the
    /// perturbed side, except for piecewise-constant functions where it is
    /// undefined.
    pub fn eval(&self, x: &CartanVec) -> Result<Surd> {
        if self.on_wall(&x.0) && self.degree().unwrap_or(0) == 0 {
            return Err(Error::OnWall(format!("{x:?} lies on a wall of a piecewise-constant function")));
        }
        let c = self.locate(&x.0, None).map_or_else(Q::zero, |p| p.polynomial.eval(&x.0));
        Ok(self.normalization.scale(&c))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Functions that are polynomial on the chambers of an arrangement.
pub trait PiecewiseFunction {
    fn rank(&self) -> usize;
    fn normalization(&self) -> Surd;
    /// Polynomial of the chamber reached from `x` by lexicographic
    /// perturbation along `lead` and then the generic directions.
    fn polynomial_near(&self, x: &[Q], lead: Option<&[Q]>) -> Result<Polynomial>;
    /// Normals of the arrangement hyperplanes through `x`.
    fn hyperplanes_through(&self, x: &[Q]) -> Vec<Vec<Q>>;
}

impl PiecewiseFunction for PiecewisePolynomial {
    fn rank(&self) -> usize {
        self.rank
    }

    fn normalization(&self) -> Surd {
        self.normalization.clone()
    }

    fn polynomial_near(&self, x: &[Q], lead: Option<&[Q]>) -> Result<Polynomial> {
        Ok(self.locate(x, lead).map_or_else(|| Polynomial::zero(self.rank), |p| p.polynomial.clone()))
    }

    fn hyperplanes_through(&self, x: &[Q]) -> Vec<Vec<Q>> {
        self.walls.iter().filter(|h| h.slack(x).is_zero()).map(|h| h.normal.clone()).collect()
    }
}

impl PiecewiseFunction for Kappa {
    fn rank(&self) -> usize {
        Kappa::rank(self)
    }

    fn normalization(&self) -> Surd {
        Kappa::normalization(self)
    }

    fn polynomial_near(&self, x: &[Q], lead: Option<&[Q]>) -> Result<Polynomial> {
        Ok((*self.chamber_polynomial(x, lead)?).clone())
    }

    fn hyperplanes_through(&self, x: &[Q]) -> Vec<Vec<Q>> {
        self.walls().iter().filter(|(n, _)| crate::kappa::dot(n, x).is_zero()).map(|(n, _)| n.clone()).collect()
    }
}

/// The chamber polynomial at a point that must not lie on a genuine wall:
/// a hyperplane through `x` is a wall when the polynomials on its two sides
/// differ.
pub fn regular_polynomial<F: PiecewiseFunction + ?Sized>(f: &F, x: &[Q]) -> Result<Polynomial> {
    let base = f.polynomial_near(x, None)?;
    for n in f.hyperplanes_through(x) {
        let neg: Vec<Q> = n.iter().map(|a| -a).collect();
        let plus = f.polynomial_near(x, Some(&n))?;
        let minus = f.polynomial_near(x, Some(&neg))?;
        if plus != minus {
            return Err(Error::OnWall(format!(
                "{:?} lies on the wall with normal {:?}",
                CartanVec(x.to_vec()),
                CartanVec(n)
            )));
        }
    }
    Ok(base)
}

/// `op` applied to the chamber polynomial of `f` containing `μ`, evaluated at `μ`.
pub fn apply_operator<F: PiecewiseFunction + ?Sized>(op: &DiffOperator, f: &F, mu: &CartanVec) -> Result<Surd> {
    let p = regular_polynomial(f, &mu.0)?;
    Ok(f.normalization().scale(&op.apply(&p).eval(&mu.0)))
}

/// `(φ*p)(∂/∂μ)` for `φ(μ) = (⟨α_1, μ⟩, …, ⟨α_n, μ⟩)`: the variable `x_i`
/// becomes the derivative along `α_i`, with roots in the canonical order.
pub fn pullback_operator(rs: &RootSystem, p: &ElementarySymmetricPoly) -> Result<DiffOperator> {
    let n = rs.num_positive();
    if p.nvars != n {
        return Err(Error::Invalid(format!("expected a polynomial in {n} variables, got {}", p.nvars)));
    }
    let rows: Vec<Vec<Q>> = rs.positive_roots.iter().map(|a| a.0.clone()).collect();
    Ok(DiffOperator { symbol: p.to_monomials().substitute_linear(&rows) })
}
