//! Density diagnostic behavior over the generator families: monotone growth
//! in the coefficient budget up to saturation, and sphere-point validity of
//! every generated point.

use expoly::geometry::{density_diagnostic, kronecker_generators, SpherePoint};

#[test]
fn fill_ratio_grows_to_saturation_in_coeff_bound() {
    let gens = kronecker_generators(2, 1.0, 3).unwrap();
    let pts: Vec<Vec<f64>> = gens.iter().map(|p| p.coords.clone()).collect();
    let budgets = [4u32, 8, 13, 18, 25, 50];
    let fills: Vec<f64> = budgets
        .iter()
        .map(|&b| density_diagnostic(&pts, 1.0, 0.05, b).unwrap())
        .collect();
    for w in fills.windows(2) {
        assert!(w[1] >= w[0], "fill must be nondecreasing: {fills:?}");
    }
    let mut saturated = false;
    for w in fills.windows(2) {
        if saturated {
            continue;
        }
        if w[0] >= 0.99 {
            saturated = true;
        } else {
            assert!(w[1] > w[0], "fill must strictly increase below 0.99: {fills:?}");
        }
    }
    assert!(*fills.last().unwrap() >= 0.99);
}

#[test]
fn generated_points_satisfy_the_sphere_invariant() {
    for (d, t, delta) in [(2usize, 3usize, 1.0f64), (2, 4, 0.25), (3, 4, 2.0)] {
        let gens = kronecker_generators(d, delta, t).unwrap();
        assert_eq!(gens.len(), 2 * t);
        for p in gens {
            // re-validating through the constructor enforces the invariant
            SpherePoint::new(p.coords.clone(), delta).unwrap();
        }
    }
}

#[test]
fn generator_pairs_reproduce_their_differences() {
    let gens = kronecker_generators(2, 1.0, 3).unwrap();
    // pairs (h_{2i}, h_{2i+1}) were built from small vectors y_i = q − p
    for pair in gens.chunks(2) {
        let diff: Vec<f64> = pair[1]
            .coords
            .iter()
            .zip(&pair[0].coords)
            .map(|(q, p)| q - p)
            .collect();
        let norm = diff.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert!(norm > 0.0 && norm <= 2.0, "difference norm {norm}");
    }
}
