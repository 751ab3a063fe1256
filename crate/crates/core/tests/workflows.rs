//! End-to-end flows through the public API.

use mellin_core::dist::{read_xy_csv, sample, survival, DistributionSpec as D};
use mellin_core::excess::excess;
use mellin_core::ks::ks_one_sample;
use mellin_core::limit::{convergence_report, limit_law, normalized_family, FamilyKind};
use mellin_core::mellin::{default_lambda_grid, mellin, mellin_distance, mellin_with, MellinPath};
use mellin_core::size_bias::size_bias;
use mellin_core::tmono::{beta_mix, recover_mixing_mellin, recovered_distance};

#[test]
fn specs_survive_a_json_round_trip() {
    let specs = [
        D::gamma(2.5),
        D::excess(D::size_biased(D::lognormal(0.1, 0.4), 1.5), 2.0),
        D::product(D::beta_t(3.0), D::uniform(0.5, 2.0)),
        D::perturbed_lognormal(0.0, 1.0, 0.5),
        D::power(D::exponential(2.0), 0.5),
    ];
    for spec in specs {
        let back = D::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }
    assert!(D::from_json(r#"{"variant":"Gamma","shape":-1}"#).is_err());
    assert!(D::from_json("not json").is_err());
}

#[test]
fn tabulated_survival_tracks_the_exponential() {
    let rows: String = (0..=400)
        .map(|i| {
            let x = i as f64 * 0.05;
            format!("{x},{}\n", (-x).exp())
        })
        .collect();
    let points = read_xy_csv(rows.as_bytes()).unwrap();
    let grid = D::grid(&points).unwrap();
    for x in [0.3, 1.0, 4.2] {
        assert!((survival(&grid, x).unwrap() - (-x as f64).exp()).abs() < 1e-4);
    }
    let m = mellin(&grid, 1.0, 1e-8).unwrap().value;
    assert!((m - 1.0).abs() < 1e-3, "{m}");
}

#[test]
fn size_biased_samples_follow_the_biased_survival() {
    let spec = size_bias(&D::lognormal(0.0, 0.5), 2.0).unwrap();
    let batch = sample(&spec, 20_000, 11).unwrap();
    let d = ks_one_sample(&batch.values, |x| 1.0 - survival(&spec, x).unwrap()).unwrap();
    // 1.63 / sqrt(n) is the 1% critical value
    assert!(d < 1.63 / (20_000f64).sqrt(), "{d}");
}

#[test]
fn excess_of_uniform_by_every_path() {
    let e = excess(&D::uniform(0.0, 1.0), 2.5).unwrap();
    for l in [0.5, 1.0, 3.0] {
        let auto = mellin(&e, l, 1e-10).unwrap().value;
        let surv = mellin_with(&e, l, 1e-9, MellinPath::Survival).unwrap().value;
        let dens = mellin_with(&e, l, 1e-9, MellinPath::Density).unwrap().value;
        let exact = mellin(&D::beta_t(3.5), l, 1e-12).unwrap().value;
        for v in [auto, surv, dens] {
            assert!((v / exact - 1.0).abs() < 1e-7, "{l}: {v} vs {exact}");
        }
    }
}

#[test]
fn normalized_lognormal_is_already_the_limit() {
    let law = limit_law(1.0, 1.0).unwrap();
    for t in [1.0, 7.5, 30.0] {
        let x_t = normalized_family(&D::lognormal(0.0, 1.0), 1.0, t, FamilyKind::Bias).unwrap();
        let d = mellin_distance(&x_t, &law.x_inf(), &default_lambda_grid()).unwrap();
        assert!(d < 1e-12, "{t}: {d}");
    }
}

#[test]
fn report_serializes_and_is_seed_stable() {
    let run = |seed| {
        convergence_report(&D::gamma(2.0), 1.0, &[2.0, 4.0, 8.0], &[0.5, 1.0], 500, seed, 1.0)
            .unwrap()
    };
    let a = run(3);
    assert_eq!(a.to_json().unwrap(), run(3).to_json().unwrap());
    assert_ne!(a.ks_stats, run(4).ks_stats);
    let mut csv = Vec::new();
    a.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("kind,t,lambda,x,value,reference,error\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("ks,")).count(), 3);
}

#[test]
fn recovery_undoes_beta_mixing() {
    let y = D::gamma(1.7);
    for t in [0.5, 2.0, 4.5] {
        let z = beta_mix(&y, t).unwrap();
        let rec = recover_mixing_mellin(&z, t, &default_lambda_grid()).unwrap();
        assert!(rec.certificate.passed);
        assert!(recovered_distance(&rec, &y).unwrap() < 1e-10);
    }
}
