//! Gauss–Legendre rules on intervals and triangles.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights of the `n`-point rule on `[a, b]`, sorted by node
/// (Golub–Welsch: eigenpairs of the Jacobi matrix).
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let kf = k as f64;
        let beta = kf / (4.0 * kf * kf - 1.0).sqrt();
        j[(k, k - 1)] = beta;
        j[(k - 1, k)] = beta;
    }
    let eig = SymmetricEigen::new(j);
    let (h, m) = ((b - a) / 2.0, (a + b) / 2.0);
    let mut out: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (m + h * eig.eigenvalues[i], h * 2.0 * v0 * v0)
        })
        .collect();
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

/// Collapsed tensor rule on the triangle with vertices `v`, exact for
/// polynomials of degree `≤ 2n − 2`. Returns points and weights.
pub fn triangle_rule(v: [[f64; 2]; 3], n: usize) -> Vec<([f64; 2], f64)> {
    let area2 = ((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1])).abs();
    let g = gauss_legendre(n, 0.0, 1.0);
    let mut out = Vec::with_capacity(n * n);
    for &(u, wu) in &g {
        for &(s, ws) in &g {
            // Duffy: (u, s) ↦ barycentric (1 − u, u(1 − s), us), Jacobian u
            let (l0, l1, l2) = (1.0 - u, u * (1.0 - s), u * s);
            let p = [
                l0 * v[0][0] + l1 * v[1][0] + l2 * v[2][0],
                l0 * v[0][1] + l1 * v[1][1] + l2 * v[2][1],
            ];
            out.push((p, wu * ws * u * area2));
        }
    }
    out
}
