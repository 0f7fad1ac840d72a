use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::rational::q;

fn rs(name: &str) -> RootSystem {
    RootSystem::from_name(name).unwrap()
}

fn a1(n: i64, d: i64) -> CartanVec {
    rs("A1").from_fundamental(&[q(n, d)])
}

#[test]
fn central_class_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for name in ["A1", "A2"] {
        let r = rs(name);
        for _ in 0..20 {
            let s = sample_class(&r, &CartanVec::zero(r.rank()), &mut rng).unwrap();
            let n = s.matrix.nrows();
            assert!((s.matrix.clone() - DMatrix::identity(n, n)).iter().all(|x| x.norm() < 1e-12));
        }
    }
}

#[test]
fn equatorial_class_is_traceless() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let s = sample_class(&rs("A1"), &a1(1, 2), &mut rng).unwrap();
        assert!(s.matrix.trace().norm() < 1e-10);
        assert!((s.class[0] - 0.5).abs() < 1e-10);
    }
}

#[test]
fn classes_are_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["A1", "A2"] {
        let r = rs(name);
        for _ in 0..50 {
            let mu = r.random_regular_point(&mut rng, 30);
            let want: Vec<f64> = r.to_fundamental(&mu).iter().map(to_f64).collect();
            let s = sample_class(&r, &mu, &mut rng).unwrap();
            assert!(unitarity_defect(&s.matrix) < 1e-12);
            assert!((s.matrix.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            for (a, b) in s.class.iter().zip(&want) {
                assert!((a - b).abs() < 1e-10, "{name}: {:?} vs {want:?}", s.class);
            }
        }
    }
}

#[test]
fn haar_second_moment() {
    // E|tr g|² = 1 on SU(n)
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for g in [OracleGroup::Su2, OracleGroup::Su3] {
        let n = 200_000;
        let m: f64 = (0..n).map(|_| haar(g, &mut rng).trace().norm_sqr()).sum::<f64>() / n as f64;
        assert!((m - 1.0).abs() < 0.02, "{g:?}: {m}");
    }
}

#[test]
fn rank_three_is_rejected() {
    let r = rs("A3");
    let mu = r.alcove_barycenter();
    assert!(product_class_histogram(&r, &mu, &mu, 10, 10, 0).is_err());
    assert!(product_class_histogram(&rs("A1"), &a1(1, 2), &a1(1, 2), 10, 0, 0).is_err());
}

#[test]
fn trivial_factor_fills_one_bin() {
    // off the bin edges
    for (name, mu) in [("A1", a1(31, 100)), ("A2", rs("A2").from_fundamental(&[q(23, 100), q(31, 100)]))] {
        let r = rs(name);
        let h = product_class_histogram(&r, &mu, &CartanVec::zero(r.rank()), 20, 2000, 7).unwrap();
        let t: Vec<f64> = r.to_fundamental(&mu).iter().map(to_f64).collect();
        let k = h.bin_of(&t);
        assert_eq!(h.counts[k], 2000, "{name}");
        assert_eq!(h.counts.iter().sum::<u64>(), h.total);
    }
}

#[test]
fn seeds_determine_histograms() {
    let r = rs("A2");
    let (m1, m2) = (r.alcove_barycenter(), r.from_fundamental(&[q(1, 4), q(1, 2)]));
    let a = product_class_histogram(&r, &m1, &m2, 8, 150_000, 11).unwrap();
    let b = product_class_histogram(&r, &m1, &m2, 8, 150_000, 11).unwrap();
    let c = product_class_histogram(&r, &m1, &m2, 8, 150_000, 12).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_ne!(a.counts, c.counts);
    assert_eq!(a.counts.iter().sum::<u64>(), 150_000);
}

#[test]
fn su2_half_half_is_the_sine_law() {
    // tr g1g2 = −2 u·v for independent uniform u, v ∈ S²: cos πt3 is uniform on [−1, 1]
    let h = product_class_histogram(&rs("A1"), &a1(1, 2), &a1(1, 2), 1000, 1_000_000, 5).unwrap();
    let ks = shape_compare(&h, |t: &[f64]| (PI * t[0]).sin()).unwrap();
    assert!(ks < 0.005, "{ks}");
    let flat = shape_compare(&h, |_: &[f64]| 1.0).unwrap();
    assert!(flat > 0.1, "{flat}");
}

#[test]
fn su2_support_is_the_triangle_interval() {
    let h = product_class_histogram(&rs("A1"), &a1(1, 5), &a1(3, 10), 100, 200_000, 6).unwrap();
    let occupied: Vec<usize> = (0..100).filter(|&k| h.counts[k] > 0).collect();
    assert_eq!(*occupied.first().unwrap(), 10);
    assert_eq!(*occupied.last().unwrap(), 49);
}

#[test]
fn kappa_density_fits_and_shifted_does_not() {
    let r = rs("A1");
    let (m1, m2) = (a1(1, 5), a1(3, 10));
    let h = product_class_histogram(&r, &m1, &m2, 500, 300_000, 8).unwrap();
    let dens = pants_density(&r, &m1, &m2).unwrap();
    let ks = shape_compare(&h, &dens).unwrap();
    assert!(ks < 0.01, "{ks}");
    let shifted = shape_compare(&h, |t: &[f64]| dens(&[t[0] - 0.4])).unwrap();
    assert!(shifted > 0.2, "{shifted}");
}

#[test]
fn su3_kappa_density_fits() {
    let r = rs("A2");
    let m1 = r.from_fundamental(&[q(1, 5), q(3, 10)]);
    let m2 = r.from_fundamental(&[q(2, 5), q(1, 4)]);
    let h = product_class_histogram(&r, &m1, &m2, 20, 200_000, 9).unwrap();
    let dens = pants_density(&r, &m1, &m2).unwrap();
    let ks = shape_compare(&h, &dens).unwrap();
    assert!(ks < 0.01, "{ks}");
    // the unstarred density puts the mass in the wrong place
    let f = FloatPieces::new(&pants_volume_poly(&r, &m1, &m2).unwrap());
    let omega: Vec<Vec<f64>> = r.fundamental_weights.iter().map(|w| w.0.iter().map(to_f64).collect()).collect();
    let wrong = shape_compare(&h, |t: &[f64]| {
        let x: Vec<f64> = (0..2).map(|i| t[0] * omega[0][i] + t[1] * omega[1][i]).collect();
        f.eval(&x) * (PI * t[0]).sin() * (PI * t[1]).sin() * (PI * (t[0] + t[1])).sin()
    })
    .unwrap();
    assert!(wrong > ks, "{wrong} vs {ks}");
}

#[test]
fn own_density_has_tiny_statistic() {
    for (name, mu) in [("A1", a1(2, 5)), ("A2", rs("A2").from_fundamental(&[q(1, 3), q(1, 5)]))] {
        let r = rs(name);
        let h = product_class_histogram(&r, &mu, &mu, 12, 30_000, 10).unwrap();
        let d = h.empirical_density();
        // bins have equal size, so counts are proportional to mass
        let ks = shape_compare(&h, d).unwrap();
        assert!(ks < 1.0 / 12.0, "{name}: {ks}");
        assert!(ks < 1e-9, "{name}: {ks}");
    }
}

#[test]
fn conjugation_invariance() {
    // conjugating both factors by a common element leaves the product class unchanged
    let r = rs("A2");
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (m1, m2) = (r.alcove_barycenter(), r.from_fundamental(&[q(1, 4), q(1, 2)]));
    for _ in 0..200 {
        let (a, b) = (sample_class(&r, &m1, &mut rng).unwrap(), sample_class(&r, &m2, &mut rng).unwrap());
        let c = haar(OracleGroup::Su3, &mut rng);
        let p = class_parameter(&(&a.matrix * &b.matrix));
        let pc = class_parameter(&(&c * &a.matrix * c.adjoint() * &c * &b.matrix * c.adjoint()));
        for (x, y) in p.iter().zip(&pc) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}

#[test]
fn degenerate_density_is_an_error() {
    let h = product_class_histogram(&rs("A1"), &a1(1, 2), &a1(1, 2), 10, 100, 1).unwrap();
    assert!(matches!(shape_compare(&h, |_: &[f64]| 0.0), Err(Error::DegenerateDensity(_))));
}

#[test]
fn triangle_bins_tile_the_alcove() {
    let b = 7;
    let mut seen = vec![false; b * b];
    for k in 0..b * b {
        let (i, j, up) = triangle_cell(b, k);
        assert_eq!(triangle_index(b, i, j, up), k);
        seen[k] = true;
    }
    assert!(seen.iter().all(|&x| x));
    let h = ClassHistogram::empty(OracleGroup::Su3, b, 0, vec![]);
    for k in 0..b * b {
        let c = h.cell(k);
        let centroid = [(c[0][0] + c[1][0] + c[2][0]) / 3.0, (c[0][1] + c[1][1] + c[2][1]) / 3.0];
        assert_eq!(h.bin_of(&centroid), k);
    }
    assert_eq!(h.bin_of(&[0.5, 0.5]), h.bin_of(&[0.5 - 1e-12, 0.5 - 1e-12]));
}

#[test]
fn csv_and_sidecar() {
    let h = product_class_histogram(&rs("A1"), &a1(1, 2), &a1(1, 3), 4, 100, 3).unwrap();
    let csv = h.to_csv();
    assert_eq!(csv.lines().next().unwrap(), "bin,lo,hi,count");
    assert_eq!(csv.lines().nth(1).unwrap().split(',').nth(2).unwrap(), "0.25");
    let j: serde_json::Value = serde_json::from_str(&h.sidecar_json()).unwrap();
    assert_eq!(j["seed"], 3);
    assert_eq!(j["markings"][1][0], "1/3");
}
