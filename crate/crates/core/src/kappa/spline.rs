//! Materialization of κ as a [`PiecewisePolynomial`] with an on-disk cache.

use std::path::PathBuf;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::Kappa;
use crate::error::Result;
use crate::lie::RootSystem;
use crate::linalg;
use crate::piecewise::{Chamber, Piece, PiecewisePolynomial};
use crate::polytope::{subdivide, Halfspace, Polytope};
use crate::poly::Polynomial;
use crate::rational::{fmt_q, CartanVec, Q};

/// Directory for serialized κ splines; unset disables the cache.
pub const CACHE_DIR_ENV: &str = "FLATVOL_CACHE_DIR";

impl Kappa {
    /// Enumerates the chambers inside the positive orthant by cutting the
    /// slice `{c ≥ 0, Σc = 1}` with every wall, and attaches one
    /// interpolated polynomial to each.
    pub fn build(&self) -> Result<PiecewisePolynomial> {
        let r = self.rank();
        let support: Vec<Halfspace> = (0..r)
            .map(|i| {
                let mut n = vec![Q::zero(); r];
                n[i] = -Q::one();
                Halfspace::new(n, Q::zero())
            })
            .collect();
        let walls: Vec<Halfspace> = self.walls().iter().map(|(n, b)| Halfspace::new(n.clone(), b.clone())).collect();
        let mut pieces = Vec::new();
        if r == 1 {
            let x = vec![Q::one()];
            let poly = (*self.chamber_polynomial(&x, None)?).clone();
            let chamber = Chamber { inequalities: support.clone(), interior_point: CartanVec(x) };
            pieces.push(Piece { chamber, polynomial: poly });
        } else {
            // slice coordinates y = (c_1, …, c_{r−1}), c_r = 1 − Σy
            let mut verts = vec![vec![Q::zero(); r - 1]];
            for i in 0..r - 1 {
                let mut v = vec![Q::zero(); r - 1];
                v[i] = Q::one();
                verts.push(v);
            }
            let slice = Polytope::simplex(verts).expect("standard simplex");
            let cuts: Vec<(Vec<Q>, Q)> = self
                .walls()
                .iter()
                .map(|(n, _)| ((0..r - 1).map(|i| &n[i] - &n[r - 1]).collect(), -n[r - 1].clone()))
                .collect();
            for cell in subdivide(slice, &cuts) {
                let lift = |y: &[Q]| -> Vec<Q> {
                    let mut c = y.to_vec();
                    c.push(Q::one() - y.iter().sum::<Q>());
                    c
                };
                let x = lift(&cell.centroid());
                let poly = (*self.chamber_polynomial(&x, None)?).clone();
                if poly.is_zero() {
                    continue;
                }
                // a·y ≤ b on the slice becomes (a, 0)·c − b Σc ≤ 0.
                let inequalities = cell
                    .halfspaces
                    .iter()
                    .map(|h| {
                        let mut n: Vec<Q> = h.normal.iter().map(|a| a - &h.offset).collect();
                        n.push(-h.offset.clone());
                        let p = linalg::primitive(&n);
                        Halfspace::new(p.into_iter().map(Q::from_integer).collect(), Q::zero())
                    })
                    .collect();
                pieces.push(Piece { chamber: Chamber { inequalities, interior_point: CartanVec(x) }, polynomial: poly });
            }
        }
        Ok(PiecewisePolynomial::new(r, support, walls, pieces, self.normalization()))
    }
}

/// κ of `rs` as a piecewise polynomial. Reads and writes
/// `$FLATVOL_CACHE_DIR/kappa-<type>.json` when the variable is set.
pub fn kappa_build(rs: &RootSystem) -> Result<PiecewisePolynomial> {
    let path = std::env::var_os(CACHE_DIR_ENV).map(|d| PathBuf::from(d).join(format!("kappa-{}.json", rs.spec)));
    if let Some(p) = &path {
        if let Ok(s) = std::fs::read_to_string(p) {
            if let Ok(pp) = PiecewisePolynomial::from_json(&s) {
                return Ok(pp);
            }
        }
    }
    let pp = Kappa::for_roots(rs, 1).build()?;
    if let Some(p) = &path {
        if let Some(dir) = p.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(p, pp.to_json()?)?;
    }
    Ok(pp)
}

#[derive(Serialize, Deserialize)]
struct ChamberFile {
    /// Wall normals as `p/q` strings; a mismatch invalidates the file.
    walls: Vec<Vec<String>>,
    chambers: Vec<(Vec<i8>, Polynomial)>,
}

fn chamber_cache_path(rs: &RootSystem, multiplicity: usize) -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).map(|d| PathBuf::from(d).join(format!("kappa-{}-m{multiplicity}-chambers.json", rs.spec)))
}

fn wall_strings(k: &Kappa) -> Vec<Vec<String>> {
    k.walls().iter().map(|(n, _)| n.iter().map(fmt_q).collect()).collect()
}

/// Seeds the chamber polynomials of `Kappa::for_roots(rs, multiplicity)`
/// from `$FLATVOL_CACHE_DIR`. Returns how many were loaded; a missing or
/// stale file loads nothing.
pub fn load_chamber_cache(rs: &RootSystem, multiplicity: usize) -> Result<usize> {
    let Some(path) = chamber_cache_path(rs, multiplicity) else { return Ok(0) };
    let Ok(s) = std::fs::read_to_string(&path) else { return Ok(0) };
    let k = Kappa::for_roots(rs, multiplicity);
    match serde_json::from_str::<ChamberFile>(&s) {
        Ok(f) if f.walls == wall_strings(&k) => {
            let n = f.chambers.len();
            k.insert_chambers(f.chambers);
            Ok(n)
        }
        _ => Ok(0),
    }
}

/// Writes every chamber polynomial of `Kappa::for_roots(rs, multiplicity)`
/// computed so far to `$FLATVOL_CACHE_DIR`. Returns how many were written.
pub fn store_chamber_cache(rs: &RootSystem, multiplicity: usize) -> Result<usize> {
    let Some(path) = chamber_cache_path(rs, multiplicity) else { return Ok(0) };
    let k = Kappa::for_roots(rs, multiplicity);
    let f = ChamberFile { walls: wall_strings(&k), chambers: k.chamber_entries() };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    // write then rename so a concurrent reader never sees a partial file
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, serde_json::to_string(&f)?)?;
    std::fs::rename(&tmp, &path)?;
    Ok(f.chambers.len())
}
