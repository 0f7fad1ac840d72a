//! Exact convex polytopes in low dimension: vertex and facet descriptions,
//! hyperplane splitting, and volume by pulling triangulation.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::rational::{qi, serde_q, serde_qvec, Q};

/// `normal · x ≤ offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Halfspace {
    #[serde(with = "serde_qvec")]
    pub normal: Vec<Q>,
    #[serde(with = "serde_q")]
    pub offset: Q,
}

impl Halfspace {
    pub fn new(normal: Vec<Q>, offset: Q) -> Self {
        Halfspace { normal, offset }
    }

    /// `offset − normal·x`: nonnegative inside.
    pub fn slack(&self, x: &[Q]) -> Q {
        &self.offset - dot(&self.normal, x)
    }

    pub fn flipped(&self) -> Halfspace {
        Halfspace {
            normal: self.normal.iter().map(|a| -a).collect(),
            offset: -self.offset.clone(),
        }
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A full-dimensional bounded polytope with both descriptions kept in sync.
#[derive(Clone, Debug)]
pub struct Polytope {
    pub dim: usize,
    /// Facet-defining halfspaces only.
    pub halfspaces: Vec<Halfspace>,
    pub vertices: Vec<Vec<Q>>,
}

impl Polytope {
    /// Builds a polytope from an inequality description by enumerating
    /// `dim`-subsets of constraints. `None` if the result is not full-dimensional.
    pub fn from_halfspaces(dim: usize, hs: &[Halfspace]) -> Option<Polytope> {
        let mut verts: BTreeSet<Vec<Q>> = BTreeSet::new();
        if dim == 0 {
            return None;
        }
        for subset in itertools::Itertools::combinations(0..hs.len(), dim) {
            let m: Vec<Vec<Q>> = subset.iter().map(|&i| hs[i].normal.clone()).collect();
            let b: Vec<Q> = subset.iter().map(|&i| hs[i].offset.clone()).collect();
            if let Some(x) = linalg::solve(&m, &b) {
                if hs.iter().all(|h| !h.slack(&x).is_negative()) {
                    verts.insert(x);
                }
            }
        }
        let p = Polytope { dim, halfspaces: hs.to_vec(), vertices: verts.into_iter().collect() };
        if affine_rank(&p.vertices) < dim {
            return None;
        }
        Some(p.prune())
    }

    /// The simplex with the given `dim + 1` vertices.
    pub fn simplex(vertices: Vec<Vec<Q>>) -> Option<Polytope> {
        let dim = vertices.len().checked_sub(1)?;
        if dim == 0 || affine_rank(&vertices) < dim {
            return None;
        }
        let mut hs = Vec::new();
        for skip in 0..=dim {
            let pts: Vec<&Vec<Q>> = vertices.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, v)| v).collect();
            let rows: Vec<Vec<Q>> = pts[1..].iter().map(|p| sub(p, pts[0])).collect();
            let n = linalg::kernel(&rows, dim).pop()?;
            let off = dot(&n, pts[0]);
            let h = Halfspace::new(n, off);
            hs.push(if h.slack(&vertices[skip]).is_negative() { h.flipped() } else { h });
        }
        Some(Polytope { dim, halfspaces: hs, vertices })
    }

    /// Drops redundant or duplicate halfspaces.
    fn prune(mut self) -> Polytope {
        let mut keep: Vec<Halfspace> = Vec::new();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for h in &self.halfspaces {
            let key: Vec<usize> = (0..self.vertices.len()).filter(|&i| h.slack(&self.vertices[i]).is_zero()).collect();
            let tight: Vec<Vec<Q>> = key.iter().map(|&i| self.vertices[i].clone()).collect();
            if tight.len() < self.dim || affine_rank(&tight) + 1 < self.dim {
                continue;
            }
            if seen.insert(key) {
                keep.push(h.clone());
            }
        }
        self.halfspaces = keep;
        self
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.halfspaces.iter().all(|h| !h.slack(x).is_negative())
    }

    pub fn contains_interior(&self, x: &[Q]) -> bool {
        self.halfspaces.iter().all(|h| h.slack(x).is_positive())
    }

    /// Vertex centroid, an interior point.
    pub fn centroid(&self) -> Vec<Q> {
        let n = qi(self.vertices.len() as i64);
        (0..self.dim)
            .map(|j| self.vertices.iter().map(|v| &v[j]).sum::<Q>() / &n)
            .collect()
    }

    fn tight_set(&self, x: &[Q]) -> Vec<usize> {
        (0..self.halfspaces.len()).filter(|&i| self.halfspaces[i].slack(x).is_zero()).collect()
    }

    /// Pairs of vertex indices spanning edges.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let tight: Vec<Vec<usize>> = self.vertices.iter().map(|v| self.tight_set(v)).collect();
        let mut out = Vec::new();
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                let common: Vec<Vec<Q>> = tight[i]
                    .iter()
                    .filter(|k| tight[j].contains(k))
                    .map(|&k| self.halfspaces[k].normal.clone())
                    .collect();
                if common.len() + 1 >= self.dim && linalg::rank(&common) + 1 == self.dim {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Splits by `normal·x = offset` into the `≤` and `≥` sides; a side is
    /// `None` when it is not full-dimensional.
    pub fn split(&self, normal: &[Q], offset: &Q) -> (Option<Polytope>, Option<Polytope>) {
        let s: Vec<Q> = self.vertices.iter().map(|v| dot(normal, v) - offset).collect();
        let neg = s.iter().any(Q::is_negative);
        let pos = s.iter().any(Q::is_positive);
        if !pos {
            return (Some(self.clone()), None);
        }
        if !neg {
            return (None, Some(self.clone()));
        }
        let mut cut: BTreeSet<Vec<Q>> = BTreeSet::new();
        for (i, j) in self.edges() {
            if (s[i].is_negative() && s[j].is_positive()) || (s[i].is_positive() && s[j].is_negative()) {
                let t = &s[i] / (&s[i] - &s[j]);
                let p: Vec<Q> = self.vertices[i]
                    .iter()
                    .zip(&self.vertices[j])
                    .map(|(a, b)| a + &t * (b - a))
                    .collect();
                cut.insert(p);
            }
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if s[i].is_zero() {
                cut.insert(v.clone());
            }
        }
        let h = Halfspace::new(normal.to_vec(), offset.clone());
        let side = |keep_neg: bool| {
            let mut verts: BTreeSet<Vec<Q>> = cut.clone();
            for (i, v) in self.vertices.iter().enumerate() {
                if (keep_neg && s[i].is_negative()) || (!keep_neg && s[i].is_positive()) {
                    verts.insert(v.clone());
                }
            }
            let mut hs = self.halfspaces.clone();
            hs.push(if keep_neg { h.clone() } else { h.flipped() });
            Polytope { dim: self.dim, halfspaces: hs, vertices: verts.into_iter().collect() }.prune()
        };
        (Some(side(true)), Some(side(false)))
    }

    /// Pulling triangulation: simplices as lists of vertex indices.
    pub fn triangulate(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let tight: Vec<Vec<usize>> = self.vertices.iter().map(|v| self.tight_set(v)).collect();
        self.triangulate_face(&all, self.dim, &tight)
    }

    fn triangulate_face(&self, face: &[usize], k: usize, tight: &[Vec<usize>]) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![face[0]]];
        }
        let apex = face[0];
        let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
        for h in 0..self.halfspaces.len() {
            let sub: Vec<usize> = face.iter().copied().filter(|&v| tight[v].contains(&h)).collect();
            if sub.len() == face.len() || sub.contains(&apex) || sub.len() < k {
                continue;
            }
            let pts: Vec<Vec<Q>> = sub.iter().map(|&v| self.vertices[v].clone()).collect();
            if affine_rank(&pts) + 1 == k {
                facets.insert(sub);
            }
        }
        let mut out = Vec::new();
        for f in facets {
            for mut s in self.triangulate_face(&f, k - 1, tight) {
                s.push(apex);
                out.push(s);
            }
        }
        out
    }

    pub fn volume(&self) -> Q {
        let mut fact = Q::from(qi(1));
        for i in 2..=self.dim {
            fact *= qi(i as i64);
        }
        self.triangulate()
            .iter()
            .map(|s| {
                let v0 = &self.vertices[s[0]];
                let rows: Vec<Vec<Q>> = s[1..].iter().map(|&i| sub(&self.vertices[i], v0)).collect();
                linalg::det(&rows).abs()
            })
            .sum::<Q>()
            / fact
    }
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Dimension of the affine hull of `pts`.
pub fn affine_rank(pts: &[Vec<Q>]) -> usize {
    if pts.len() < 2 {
        return 0;
    }
    let rows: Vec<Vec<Q>> = pts[1..].iter().map(|p| sub(p, &pts[0])).collect();
    linalg::rank(&rows)
}

/// Cuts `region` by every hyperplane `normal·x = offset`; returns the cells.
pub fn subdivide(region: Polytope, hyperplanes: &[(Vec<Q>, Q)]) -> Vec<Polytope> {
    let mut cells = vec![region];
    for (n, b) in hyperplanes {
        let mut next = Vec::with_capacity(cells.len());
        for c in cells {
            match c.split(n, b) {
                (Some(a), Some(b)) => {
                    next.push(a);
                    next.push(b);
                }
                (Some(a), None) | (None, Some(a)) => next.push(a),
                (None, None) => {}
            }
        }
        cells = next;
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| qi(x)).collect()
    }

    fn cube(d: usize) -> Polytope {
        let mut hs = Vec::new();
        for i in 0..d {
            let mut n = vec![qi(0); d];
            n[i] = qi(1);
            hs.push(Halfspace::new(n.clone(), qi(1)));
            hs.push(Halfspace::new(n.iter().map(|a| -a).collect(), qi(0)));
        }
        Polytope::from_halfspaces(d, &hs).unwrap()
    }

    #[test]
    fn cube_volume_and_vertices() {
        for d in 1..=4 {
            let c = cube(d);
            assert_eq!(c.vertices.len(), 1 << d);
            assert_eq!(c.volume(), qi(1));
            assert_eq!(c.halfspaces.len(), 2 * d);
        }
    }

    #[test]
    fn simplex_volume() {
        let s = Polytope::simplex(vec![v(&[0, 0, 0]), v(&[2, 0, 0]), v(&[0, 3, 0]), v(&[0, 0, 1])]).unwrap();
        assert_eq!(s.volume(), qi(1));
        assert!(s.contains_interior(&s.centroid()));
    }

    #[test]
    fn split_conserves_volume() {
        let c = cube(3);
        let (a, b) = c.split(&[qi(1), qi(2), qi(-1)], &q(1, 2));
        let (a, b) = (a.unwrap(), b.unwrap());
        assert_eq!(a.volume() + b.volume(), qi(1));
        let (x, y) = c.split(&[qi(1), qi(0), qi(0)], &qi(1));
        assert!(x.is_some() && y.is_none());
    }

    #[test]
    fn subdivision_by_diagonals() {
        let sq = cube(2);
        let cells = subdivide(sq, &[(v(&[1, -1]), qi(0)), (v(&[1, 1]), qi(1))]);
        assert_eq!(cells.len(), 4);
        assert_eq!(cells.iter().map(Polytope::volume).sum::<Q>(), qi(1));
        for c in &cells {
            assert_eq!(c.vertices.len(), 3);
            assert_eq!(c.volume(), q(1, 4));
        }
    }
}
