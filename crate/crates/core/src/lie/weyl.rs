use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::RootSystem;
use crate::rational::{qi, CartanVec, Q};

/// An element of the finite Weyl group, acting on simple-root coordinates.
///
/// Entries are integers because every simple reflection preserves the root lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WeylElement {
    pub matrix: Vec<Vec<i64>>,
    pub length: usize,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        let matrix = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        WeylElement { matrix, length: 0 }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, v: &CartanVec) -> CartanVec {
        CartanVec(
            self.matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&v.0)
                        .filter(|(a, x)| **a != 0 && !x.is_zero())
                        .map(|(&a, x)| x * qi(a))
                        .sum()
                })
                .collect(),
        )
    }

    /// Matrix of `self ∘ other`; the length is not tracked.
    pub fn compose_matrix(&self, other: &WeylElement) -> Vec<Vec<i64>> {
        mat_mul(&self.matrix, &other.matrix)
    }

    /// `(−1)^length`.
    pub fn sign(&self) -> i8 {
        if self.length % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn det(&self) -> i64 {
        int_det(&self.matrix)
    }
}

pub(crate) fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub(crate) fn simple_reflection(cartan: &[Vec<i64>], i: usize) -> Vec<Vec<i64>> {
    let r = cartan.len();
    // s_i(e_k) = e_k − a_{ki} e_i, stored column-wise.
    let mut m: Vec<Vec<i64>> = (0..r).map(|a| (0..r).map(|b| i64::from(a == b)).collect()).collect();
    for k in 0..r {
        m[i][k] -= cartan[k][i];
    }
    m
}

/// Breadth-first closure from the identity; BFS depth is the length.
pub(crate) fn generate(cartan: &[Vec<i64>]) -> Vec<WeylElement> {
    let r = cartan.len();
    let gens: Vec<_> = (0..r).map(|i| simple_reflection(cartan, i)).collect();
    let mut seen: HashMap<Vec<Vec<i64>>, usize> = HashMap::new();
    let mut out = vec![WeylElement::identity(r)];
    seen.insert(out[0].matrix.clone(), 0);
    let mut head = 0;
    while head < out.len() {
        let cur = out[head].clone();
        head += 1;
        for g in &gens {
            let m = mat_mul(g, &cur.matrix);
            if !seen.contains_key(&m) {
                seen.insert(m.clone(), out.len());
                out.push(WeylElement { matrix: m, length: cur.length + 1 });
            }
        }
    }
    out
}

fn int_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * int_det(&minor)
        })
        .sum()
}

impl RootSystem {
    /// Number of positive roots sent to negative roots; equals the length.
    pub fn inversion_count(&self, w: &WeylElement) -> usize {
        self.positive_roots
            .iter()
            .filter(|a| w.apply(a).0.iter().any(Q::is_negative))
            .count()
    }

    /// Index in `weyl_group()` of the element with the given matrix.
    pub fn weyl_index(&self, matrix: &[Vec<i64>]) -> Option<usize> {
        self.weyl_group().iter().position(|w| w.matrix == matrix)
    }

    /// An element `u` with `u(x)` dominant, built from simple reflections.
    pub fn to_dominant(&self, x: &CartanVec) -> (WeylElement, CartanVec) {
        let r = self.rank();
        let mut m = WeylElement::identity(r).matrix;
        let mut y = x.clone();
        let mut steps = 0usize;
        loop {
            let covs: Vec<Q> = self.simple_roots.iter().map(|a| self.pairing(a, &y)).collect();
            let Some(i) = covs.iter().position(Q::is_negative) else {
                break;
            };
            let s = simple_reflection(&self.cartan_matrix, i);
            m = mat_mul(&s, &m);
            let cor = &self.coroot_basis[i];
            let c = self.pairing(&y, cor);
            y = &y - &self.simple_roots[i].scale(&c);
            steps += 1;
        }
        let length = self
            .weyl_index(&m)
            .map(|k| self.weyl_group()[k].length)
            .unwrap_or(steps);
        (WeylElement { matrix: m, length }, y)
    }
}
