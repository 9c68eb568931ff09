//! Monte Carlo side: estimate invariants, seeded reproducibility, test
//! calibration under the null, and the falsification-form round trip —
//! Gaussian data with independence-producing forms passes every diagnostic,
//! non-Gaussian data with the same forms trips at least one.

mod support;

use expoly::operators::RationalMatrix;
use expoly::probability::{
    empirical_cf, independence_test, marcinkiewicz_fit, simulate_linear_forms, simulate_vectors,
    RandomVectorSpec,
};

fn id1() -> RationalMatrix {
    RationalMatrix::identity(1)
}

fn neg1() -> RationalMatrix {
    RationalMatrix::scalar_int(1, -1)
}

#[test]
fn cf_invariants_hold_on_random_estimates() {
    for seed in 0..10u64 {
        let spec = match seed % 3 {
            0 => RandomVectorSpec::gaussian_std(2, seed),
            1 => RandomVectorSpec::uniform_symmetric(2, 1.5, seed),
            _ => RandomVectorSpec::laplace_std(2, seed),
        };
        let samples = simulate_vectors(&[spec], 500, None).unwrap();
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![-0.5, 2.0],
            vec![3.0, -1.0],
        ];
        let est = empirical_cf(&samples[0], &pts).unwrap();
        est.validate().unwrap();
    }
}

#[test]
fn identical_seeds_reproduce_samples_bit_exactly() {
    let specs = vec![
        RandomVectorSpec::gaussian_std(2, 5),
        RandomVectorSpec::laplace_std(2, 6),
    ];
    let bs = vec![RationalMatrix::identity(2), RationalMatrix::identity(2)];
    let cs = vec![RationalMatrix::identity(2), RationalMatrix::scalar_int(2, -1)];
    let (a1, a2) = simulate_linear_forms(&specs, &bs, &cs, 200).unwrap();
    let (b1, b2) = simulate_linear_forms(&specs, &bs, &cs, 200).unwrap();
    for r in 0..200 {
        assert_eq!(a1.row(r), b1.row(r));
        assert_eq!(a2.row(r), b2.row(r));
    }
}

#[test]
fn permutation_test_is_calibrated_under_the_null() {
    // Independent forms: p > 0.01 must hold in at least 95 of 100 seeded runs.
    let mut ok = 0;
    for seed in 0..100u64 {
        let specs = vec![
            RandomVectorSpec::gaussian_std(1, 1000 + seed),
            RandomVectorSpec::gaussian_std(1, 2000 + seed),
        ];
        let (l1, l2) =
            simulate_linear_forms(&specs, &[id1(), id1()], &[id1(), neg1()], 250).unwrap();
        let rep = independence_test(&l1, &l2).unwrap();
        if rep.p_value > 0.01 {
            ok += 1;
        }
    }
    assert!(ok >= 95, "null calibration failed: {ok}/100");
}

#[test]
fn round_trip_gaussian_passes_non_gaussian_flags() {
    let n = 20000;
    let noise = 5.0 / (n as f64).sqrt();
    let bs = [id1(), id1()];
    let cs = [id1(), neg1()];
    let pts: Vec<Vec<f64>> = (0..5).map(|i| vec![-1.0 + 0.5 * i as f64]).collect();

    // Gaussian: independence holds, quadratic excess at noise level.
    let gauss = vec![
        RandomVectorSpec::gaussian_std(1, 51),
        RandomVectorSpec::gaussian_std(1, 52),
    ];
    let (l1, l2) = simulate_linear_forms(&gauss, &bs, &cs, n).unwrap();
    let ind = independence_test(&l1, &l2).unwrap();
    assert!(ind.p_value > 0.01);
    let sres =
        expoly::probability::skitovich_residual(&gauss, &bs, &cs, &pts, &pts, n).unwrap();
    assert!(sres <= noise, "gaussian residual {sres}");
    let cf_pts: Vec<Vec<f64>> = (0..9).map(|i| vec![-1.0 + 0.25 * i as f64]).collect();
    let cf = empirical_cf(&l1, &cf_pts).unwrap();
    let fit = marcinkiewicz_fit(&cf, 6).unwrap();
    assert!(fit.quadratic_excess <= noise);

    // Same forms with non-Gaussian inputs: at least one diagnostic trips.
    for (name, specs) in [
        (
            "uniform",
            vec![
                RandomVectorSpec::uniform_symmetric(1, 1.0, 61),
                RandomVectorSpec::uniform_symmetric(1, 1.0, 62),
            ],
        ),
        (
            "laplace",
            vec![
                RandomVectorSpec::laplace_std(1, 71),
                RandomVectorSpec::laplace_std(1, 72),
            ],
        ),
    ] {
        let (l1, l2) = simulate_linear_forms(&specs, &bs, &cs, n).unwrap();
        let ind = independence_test(&l1, &l2).unwrap();
        let sres =
            expoly::probability::skitovich_residual(&specs, &bs, &cs, &pts, &pts, n).unwrap();
        let flagged = ind.p_value <= 0.005 || ind.statistic >= 0.02 || sres > noise;
        assert!(flagged, "{name} was not flagged: p={} sres={sres}", ind.p_value);
    }
}
