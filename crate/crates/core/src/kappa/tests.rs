use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::lie::RootSystem;
use crate::quadrature::triangle_rule;
use crate::rational::{to_f64, CartanVec};

fn rand_point(rng: &mut ChaCha8Rng, r: usize, lo: i64) -> CartanVec {
    CartanVec((0..r).map(|_| q(rng.gen_range(lo..1000), rng.gen_range(1..200))).collect())
}

#[test]
fn a1_is_inverse_root_length() {
    let rs = RootSystem::from_name("A1").unwrap();
    let v = kappa_point(&rs, &CartanVec::from_ratios(&[(3, 7)])).unwrap();
    assert_eq!(v.coordinate, Q::one());
    assert!((v.value() - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    assert_eq!(v.normalization, Surd::new(q(1, 2), qi(2)));
    assert!(matches!(kappa_point(&rs, &CartanVec::from_ints(&[0])), Err(Error::OnWall(_))));
    assert!(kappa_point(&rs, &CartanVec::from_ints(&[-1])).unwrap().coordinate.is_zero());
}

#[test]
fn a2_is_min_of_coordinates() {
    let rs = RootSystem::from_name("A2").unwrap();
    let k = Kappa::for_roots(&rs, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let x = rand_point(&mut rng, 2, -300);
        let want = if x.0.iter().any(Signed::is_negative) { Q::zero() } else { x.0.iter().min().unwrap().clone() };
        assert_eq!(k.point(&x).unwrap().coordinate, want);
        assert_eq!(k.spline_point(&x).unwrap().coordinate, want);
    }
    assert_eq!(k.config().degree(), 1);
    assert_eq!(k.normalization(), Surd::inv_sqrt(&qi(3)));
}

#[test]
fn a2_chambers() {
    let rs = RootSystem::from_name("A2").unwrap();
    let pp = Kappa::for_roots(&rs, 1).build().unwrap();
    // walls along α1, α2 and α1+α2; the last one splits the orthant
    assert_eq!(pp.walls.len(), 3);
    assert_eq!(pp.pieces.len(), 2);
    for piece in &pp.pieces {
        assert!(piece.polynomial.is_homogeneous(1));
        assert!(piece.chamber.contains_interior(&piece.chamber.interior_point.0));
    }
}

#[test]
fn a2_matches_monte_carlo_fiber_area() {
    // fiber over ξ = α1 + α2: x_{α1+α2} = s ∈ [0, 1], the others 1 − s.
    // Sample the pushforward: x uniform on [0, 2]³, count hits near ξ.
    let rs = RootSystem::from_name("A2").unwrap();
    let xi = CartanVec::from_ints(&[1, 1]);
    let exact = to_f64(&kappa_point(&rs, &xi).unwrap().coordinate);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (n, h) = (1_000_000usize, 0.1f64);
    let hits = (0..n)
        .filter(|_| {
            let (a, b, c): (f64, f64, f64) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
            ((a + c) - 1.0).abs() < h / 2.0 && ((b + c) - 1.0).abs() < h / 2.0
        })
        .count();
    let p = hits as f64 / n as f64;
    let est = p * 8.0 / (h * h);
    let sigma = (p * (1.0 - p) / n as f64).sqrt() * 8.0 / (h * h);
    assert!((est - exact).abs() < 3.0 * sigma + 1e-3, "{est} vs {exact} ± {sigma}");
}

#[test]
fn routes_agree_with_triangulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for name in ["A2", "B2", "C2", "G2", "A3"] {
        let rs = RootSystem::from_name(name).unwrap();
        let k = Kappa::for_roots(&rs, 1);
        for _ in 0..15 {
            let x = rand_point(&mut rng, rs.rank(), -50);
            let a = k.point_coordinate(&x.0, None);
            assert_eq!(a, k.point_triangulated(&x.0), "{name} {x:?}");
            assert_eq!(a, k.spline_point(&x).unwrap().coordinate, "{name} {x:?}");
        }
    }
}

#[test]
fn routes_agree_on_walls() {
    for name in ["A2", "B2", "A3"] {
        let rs = RootSystem::from_name(name).unwrap();
        let k = Kappa::for_roots(&rs, 1);
        for a in &rs.positive_roots {
            let x = a.scale(&q(5, 3));
            let v = k.point(&x).unwrap();
            assert!(v.on_wall);
            assert_eq!(v.coordinate, k.spline_point(&x).unwrap().coordinate);
            assert_eq!(v.coordinate, k.point_triangulated(&x.0));
        }
    }
}

#[test]
fn homogeneity_and_support() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["A2", "B2", "G2", "A3", "C3"] {
        let rs = RootSystem::from_name(name).unwrap();
        let k = Kappa::for_roots(&rs, 1);
        let d = k.degree() as usize;
        assert_eq!(d, rs.num_positive() - rs.rank());
        for _ in 0..10 {
            let x = rand_point(&mut rng, rs.rank(), 1);
            let t = q(rng.gen_range(1..50), rng.gen_range(1..50));
            let lhs = k.point_coordinate(&x.scale(&t).0, None);
            assert_eq!(lhs, num_traits::pow(t, d) * k.point_coordinate(&x.0, None));
            let mut y = x.clone();
            y.0[0] = -y.0[0].clone();
            assert!(k.point_coordinate(&y.0, None).is_zero());
            assert!(k.spline_point(&y).unwrap().coordinate.is_zero());
        }
    }
}

/// Restriction of `p` to the hyperplane `n·x = 0` vanishes identically.
fn vanishes_on(p: &Polynomial, n: &[Q]) -> bool {
    let basis = crate::linalg::kernel(&[n.to_vec()], n.len());
    p.restrict(&vec![Q::zero(); n.len()], &basis).is_zero()
}

#[test]
fn continuity_across_walls() {
    for name in ["A2", "B2", "A3"] {
        let rs = RootSystem::from_name(name).unwrap();
        let pp = Kappa::for_roots(&rs, 1).build().unwrap();
        let hp: Vec<(Vec<Q>, Q)> = pp.walls.iter().map(|h| (h.normal.clone(), h.offset.clone())).collect();
        let mut checked = 0;
        for piece in &pp.pieces {
            for h in &piece.chamber.inequalities {
                // the neighbor across this facet, reached from a facet point
                let across: Vec<Q> = h.normal.clone();
                let x = &piece.chamber.interior_point.0;
                let facet_point = facet_point(&piece.chamber, h, x);
                let (_, on) = lex_signs(&hp, &facet_point, None);
                assert!(on);
                let other = pp.polynomial_near_point(&facet_point, &across);
                let diff = piece.polynomial.sub(&other);
                assert!(vanishes_on(&diff, &h.normal), "{name}: jump across {:?}", h.normal);
                checked += 1;
            }
        }
        assert!(checked >= pp.pieces.len() * rs.rank());
    }
}

/// A point in the relative interior of the facet `h` of `chamber`.
fn facet_point(chamber: &crate::piecewise::Chamber, h: &Halfspace, x: &[Q]) -> Vec<Q> {
    // Move from the interior point along a generic direction tilted toward
    // the facet until it is hit; tilt until no other facet is hit first.
    let dirs = generic_directions(x.len());
    for scale in 1..50i64 {
        let mut d: Vec<Q> = h.normal.clone();
        for (j, g) in dirs.iter().enumerate() {
            for (di, gi) in d.iter_mut().zip(g) {
                *di += gi * q(1, scale * (j as i64 + 2));
            }
        }
        let rate = dot(&h.normal, &d);
        if !rate.is_positive() {
            continue;
        }
        let t = h.slack(x) / rate;
        let p: Vec<Q> = x.iter().zip(&d).map(|(a, b)| a + &t * b).collect();
        if chamber.inequalities.iter().all(|g| g == h || g.slack(&p).is_positive()) {
            return p;
        }
    }
    panic!("no relative-interior facet point found");
}

impl crate::piecewise::PiecewisePolynomial {
    fn polynomial_near_point(&self, x: &[Q], lead: &[Q]) -> Polynomial {
        self.locate(x, Some(lead)).map_or_else(|| Polynomial::zero(self.rank), |p| p.polynomial.clone())
    }
}

#[test]
fn convolution_of_union() {
    // A1×A1 with every root doubled: κ = quadrant indicator * itself = c1 c2.
    let base = VectorConfig::new(2, vec![CartanVec::from_ints(&[1, 0]), CartanVec::from_ints(&[0, 1])], qi(4)).unwrap();
    let k = Kappa::new(base.union(&base));
    let xi = [q(7, 10), q(3, 10)];
    let conv = quad_convolve(&Kappa::new(base.clone()), &Kappa::new(base), &xi);
    assert!((conv - to_f64(&k.point_coordinate(&xi, None))).abs() < 1e-6);
    assert_eq!(k.point_coordinate(&xi, None), q(21, 100));

    // A2 doubled: κ₂ = κ * κ, by quadrature over the kinked integrand.
    let rs = RootSystem::from_name("A2").unwrap();
    let k1 = Kappa::for_roots(&rs, 1);
    let k2 = Kappa::for_roots(&rs, 2);
    for xi in [[q(1, 2), q(1, 3)], [q(2, 5), q(9, 10)], [qi(1), qi(1)]] {
        let conv = quad_convolve(&k1, &k1, &xi);
        let exact = to_f64(&k2.point_coordinate(&xi, None));
        assert!((conv - exact).abs() < 1e-6, "{conv} vs {exact}");
    }
}

/// `∫ κ_a(y) κ_b(ξ − y) dy` over `[0, ξ]`, cut along every wall of both
/// factors so that the integrand is polynomial on each triangle.
fn quad_convolve(a: &Kappa, b: &Kappa, xi: &[Q]) -> f64 {
    use crate::polytope::{subdivide, Polytope};
    let bx = Polytope::from_halfspaces(
        2,
        &[
            Halfspace::new(vec![qi(-1), qi(0)], qi(0)),
            Halfspace::new(vec![qi(0), qi(-1)], qi(0)),
            Halfspace::new(vec![qi(1), qi(0)], xi[0].clone()),
            Halfspace::new(vec![qi(0), qi(1)], xi[1].clone()),
        ],
    )
    .unwrap();
    let mut cuts: Vec<(Vec<Q>, Q)> = a.walls().to_vec();
    cuts.extend(b.walls().iter().map(|(n, _)| (n.clone(), dot(n, xi))));
    let mut total = 0.0;
    for cell in subdivide(bx, &cuts) {
        for s in cell.triangulate() {
            let v: Vec<[f64; 2]> = s.iter().map(|&i| [to_f64(&cell.vertices[i][0]), to_f64(&cell.vertices[i][1])]).collect();
            let c = cell.centroid();
            let pa = a.chamber_polynomial(&c, None).unwrap();
            let rest: Vec<Q> = xi.iter().zip(&c).map(|(x, y)| x - y).collect();
            let pb = b.chamber_polynomial(&rest, None).unwrap();
            for (p, w) in triangle_rule([v[0], v[1], v[2]], 6) {
                let r = [to_f64(&xi[0]) - p[0], to_f64(&xi[1]) - p[1]];
                total += w * pa.eval_f64(&p) * pb.eval_f64(&r);
            }
        }
    }
    total
}
