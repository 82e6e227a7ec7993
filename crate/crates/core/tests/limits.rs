use cyclespin::variational::{
    beta_critical, big_r, big_r_convexity, convexity_check, dominance_neighbor, dominance_vertices,
    g, linspace, maximize_phi, phi, phi_coords, scan_beta_critical, z, z_derivatives, SimplexPoint,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn uniform_value(beta: f64, theta: usize) -> f64 {
    let t = theta as f64;
    t.ln() + beta / 2.0 * (1.0 / t - 1.0)
}

#[test]
fn scanned_critical_point_matches_closed_form() {
    for theta in 2..=5 {
        let a = beta_critical(theta).unwrap();
        let b = scan_beta_critical(theta).unwrap();
        assert!((a - b).abs() <= 1e-6, "theta {theta}");
    }
}

#[test]
fn transition_order() {
    let bc = beta_critical(3).unwrap();
    assert!((z_derivatives(bc, 3).0 - 1.0 / 3.0).abs() <= 1e-6);
    assert!(z_derivatives(2.0, 2).0.abs() <= 1e-9);
    assert!(z_derivatives(2.0 + 1e-4, 2).0 <= 0.02);
    for theta in 3..=5usize {
        let bc = beta_critical(theta).unwrap();
        let jump = (theta - 2) as f64 / theta as f64 * (1.0 - 1e-3);
        assert_eq!(z_derivatives(bc - 1e-6, theta).0, 0.0);
        assert!(z_derivatives(bc + 1e-6, theta).0 >= jump);
    }
}

#[test]
fn critical_maximizer_is_the_predicted_two_level_point() {
    for theta in 3..=6usize {
        let report = maximize_phi(beta_critical(theta).unwrap(), theta);
        let target = (theta - 1) as f64 / theta as f64;
        assert!(report.maximizers.iter().any(
            |&i| report.candidates[i].r == 1 && (report.candidates[i].t - target).abs() < 1e-6
        ));
    }
}

#[test]
fn maximizers_attain_the_value() {
    for theta in 2..=5usize {
        for &beta in &[0.5, 2.0, 2.9, 3.5, 6.0] {
            let r = maximize_phi(beta, theta);
            assert!((phi(&r.x_up, beta) - r.value).abs() <= 1e-10);
            assert!((phi(&r.x_down, beta) - r.value).abs() <= 1e-10);
            for c in &r.candidates {
                assert!(
                    c.residual <= 1e-12,
                    "theta {theta} beta {beta} residual {}",
                    c.residual
                );
            }
        }
    }
}

#[test]
fn low_temperature_maximizer_is_near_a_corner() {
    assert!(maximize_phi(60.0, 4).x_up.first() > 0.99);
}

#[test]
fn derivative_signs_and_subcritical_zero() {
    for theta in 2..=5usize {
        for i in 1..=40 {
            let beta = 0.25 * i as f64;
            let (plus, minus) = z_derivatives(beta, theta);
            assert!(plus >= 0.0 && minus <= 0.0);
        }
        assert_eq!(z_derivatives(0.1, theta), (0.0, 0.0));
    }
}

#[test]
fn zero_field_free_energy_versus_uniform_point() {
    for theta in 2..=5usize {
        let bc = beta_critical(theta).unwrap();
        assert!((z(bc / 2.0, 0.0, theta) - uniform_value(bc / 2.0, theta)).abs() < 1e-14);
        assert!(z(2.0 * bc, 0.0, theta) > uniform_value(2.0 * bc, theta) + 1e-6);
    }
}

#[test]
fn field_dependence() {
    for theta in 2..=4usize {
        for &beta in &[1.0, 3.0] {
            let mut prev = z(beta, 0.0, theta);
            for i in 1..=8 {
                let cur = z(beta, 0.25 * i as f64, theta);
                assert!(cur >= prev - 1e-10);
                prev = cur;
            }
            let zero = z(beta, 0.0, theta);
            assert!((z(beta, 1e-9, theta) - zero).abs() < 1e-8);
            assert!((z(beta, -1e-9, theta) - zero).abs() < 1e-8);
        }
        let h = 1e3;
        let ratio = z(1.0, h, theta) / h;
        assert!((ratio - (1.0 - 1.0 / theta as f64)).abs() < 1e-2);
    }
}

#[test]
fn field_reformulation_matches_nested_definition() {
    // max over x of h (x_1 - 1/theta) + g(x), with x on a coarse grid, never
    // exceeds z and comes within the grid resolution of it
    let (beta, h) = (2.0, 0.6);
    let best = z(beta, h, 3);
    let mut nested = f64::NEG_INFINITY;
    let m = 30;
    for i in 0..=m {
        for j in 0..=(m - i) {
            let k = m - i - j;
            let mut c = vec![
                i as f64 / m as f64,
                j as f64 / m as f64,
                k as f64 / m as f64,
            ];
            c.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let x = SimplexPoint::new(c).unwrap();
            nested = nested.max(h * (x.first() - 1.0 / 3.0) + g(&x, beta));
        }
    }
    assert!(nested <= best + 1e-9);
    assert!(best - nested < 0.02);
}

#[test]
fn g_examples_and_bounds() {
    let beta = 1.0;
    assert!((g(&SimplexPoint::uniform(3), beta) - maximize_phi(beta, 3).value).abs() < 1e-14);
    assert_eq!(g(&SimplexPoint::extreme(4), beta), 0.0);
    let x = SimplexPoint::new(vec![0.9, 0.1]).unwrap();
    assert!((g(&x, beta) - phi(&x, beta)).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let theta = rng.random_range(2..=4);
        let beta = rng.random_range(0.5..5.0);
        let x = random_point(&mut rng, theta);
        assert!(g(&x, beta) >= phi(&x, beta) - 1e-12);
    }
    let r = maximize_phi(4.0, 3);
    assert!((g(&r.x_up, 4.0) - phi(&r.x_up, 4.0)).abs() < 1e-12);
}

fn random_point(rng: &mut ChaCha8Rng, theta: usize) -> SimplexPoint {
    let e: Vec<f64> = (0..theta)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let s: f64 = e.iter().sum();
    SimplexPoint::from_unsorted(e.iter().map(|v| v / s).collect()).unwrap()
}

#[test]
fn phi_is_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let x = random_point(&mut rng, 5);
        let mut shuffled = x.coords().to_vec();
        shuffled.reverse();
        shuffled.swap(0, 2);
        assert!((phi_coords(&shuffled, 2.2) - phi(&x, 2.2)).abs() < 1e-14);
    }
}

#[test]
fn big_r_shape() {
    // R stays finite at 1/r while its slope blows up, and is flat at its minimum
    for &(r, theta) in &[(1usize, 3usize), (1, 4), (2, 5)] {
        let (tf, rf) = (theta as f64, r as f64);
        let top = 1.0 / rf;
        let end = 2.0 * tf * (tf - rf) / rf * (tf / rf).ln() / (tf / rf - 1.0).powi(2);
        assert!((big_r(top - 1e-12, r, theta) - end).abs() < 1e-8);
        let slope = (big_r(top - 1e-10, r, theta) - big_r(top - 2e-10, r, theta)) / 1e-10;
        assert!(slope > 10.0);
        let t0 = (theta - r) as f64 / (r * theta) as f64;
        if t0 > 1.0 / theta as f64 {
            let d = (big_r(t0 + 1e-6, r, theta) - big_r(t0 - 1e-6, r, theta)) / 2e-6;
            assert!(d.abs() < 1e-5);
        }
    }
    let grid = linspace(0.5 + 1e-6, 0.999, 20_000);
    let inf = grid
        .iter()
        .map(|&t| big_r(t, 1, 2))
        .fold(f64::INFINITY, f64::min);
    assert!((inf - 2.0).abs() < 1e-6);
}

#[test]
fn entropy_ratio_convexity() {
    let grid = linspace(0.01, 0.99, 10_000);
    let report = convexity_check(2.0, 2.0, &grid).unwrap();
    assert!(report.passes(1e-8), "{report:?}");
    for &(p, q) in &[(3.0, 1.5), (4.0, 4.0 / 3.0), (1.25, 5.0)] {
        let report = convexity_check(p, q, &grid).unwrap();
        assert!(report.passes(1e-8), "{report:?}");
    }
    let report = big_r_convexity(1, 4, &linspace(0.26, 0.99, 10_000)).unwrap();
    assert!(report.passes(1e-8), "{report:?}");
    assert!(convexity_check(2.0, 3.0, &grid).is_err());
}

#[test]
fn dominance_neighbor_construction() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..10_000 {
        let theta = rng.random_range(2..=5usize);
        let eps = rng.random::<f64>() * 0.999 / (theta * theta) as f64;
        let x = random_point(&mut rng, theta);
        let y = perturb(&mut rng, &x, eps);
        let vertices = dominance_vertices(x.coords());
        let w: Vec<f64> = vertices.iter().map(|_| rng.random::<f64>()).collect();
        let s: f64 = w.iter().sum();
        let mut zc = vec![0.0; theta];
        for (v, wi) in vertices.iter().zip(&w) {
            for (a, b) in zc.iter_mut().zip(v) {
                *a += wi / s * b;
            }
        }
        let zp = SimplexPoint::new(zc).unwrap();
        assert!(zp.dominates(&x));
        let zn = dominance_neighbor(&zp, &y, eps).unwrap();
        assert!(zn.dominates(&y));
        let bound = (theta - 1) as f64 * eps.sqrt();
        assert!(zp.distance(&zn) <= bound + 1e-12);
        assert!(zp.distance(&zn) < theta as f64 * eps.sqrt());
    }
}

/// A point of the simplex within sup-distance `eps` of `x`.
fn perturb(rng: &mut ChaCha8Rng, x: &SimplexPoint, eps: f64) -> SimplexPoint {
    loop {
        let noise: Vec<f64> = x
            .coords()
            .iter()
            .map(|_| (rng.random::<f64>() - 0.5) * eps)
            .collect();
        let mean = noise.iter().sum::<f64>() / noise.len() as f64;
        let c: Vec<f64> = x
            .coords()
            .iter()
            .zip(&noise)
            .map(|(a, n)| a + n - mean)
            .collect();
        if c.iter().all(|&v| v >= 0.0) {
            let y = SimplexPoint::from_unsorted(c).unwrap();
            if y.distance(x) <= eps {
                return y;
            }
        }
    }
}
