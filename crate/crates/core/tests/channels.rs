mod common;

use common::{
    alpha_eta_mu_pdf, gamma, gg_pointing_pdf, ks_grid_bound, ks_pvalue, log_simpson, lower_gamma,
    rel_err,
};
use proptest::prelude::*;
use rffso_secrecy::channels::*;
use rffso_secrecy::specfun::Precision;
use rffso_secrecy::Error;

fn prec() -> Precision {
    Precision::default()
}

fn rf(alpha: f64, eta: f64, mu: f64, omega: f64) -> RfFadingParams {
    RfFadingParams::new(alpha, eta, mu, omega).unwrap()
}

fn fso(a: f64, b: u32, eps: f64, det: Detection, u_r_db: f64) -> FsoChannelParams {
    FsoChannelParams::new(a, b, 2.0, 2.0, eps, det, db_to_linear(u_r_db)).unwrap()
}

fn sorted(v: Vec<SnrSample>) -> Vec<f64> {
    let mut x: Vec<f64> = v.into_iter().map(SnrSample::value).collect();
    x.sort_by(f64::total_cmp);
    x
}

#[test]
fn rayleigh_reduction() {
    let p = rf(2.0, 1.0001, 0.5, 1.0);
    assert!((rf_pdf(&p, 1.0, &prec()).unwrap() - (-1f64).exp()).abs() < 1e-3);
    assert!((rf_cdf(&p, 1.0, &prec()).unwrap() - (1.0 - (-1f64).exp())).abs() < 1e-3);
    assert_eq!(rf_cdf(&p, 0.0, &prec()).unwrap(), 0.0);
}

#[test]
fn rf_pdf_against_two_gamma_convolution() {
    for (a, e, m, w, g) in [
        (4.0, 1.0001, 1.0, 10.0, 1.0),
        (4.0, 1.0001, 1.0, 10.0, 12.0),
        (2.0, 2.0, 1.5, 3.0, 2.0),
        (3.0, 0.4, 0.5, 1.0, 0.7),
        (6.0, 1.0001, 3.0, 2.0, 1.9),
    ] {
        let got = rf_pdf(&rf(a, e, m, w), g, &prec()).unwrap();
        let want = alpha_eta_mu_pdf(a, e, m, w, g);
        assert!(
            rel_err(got, want) < 1e-8,
            "({a},{e},{m},{w}) at {g}: {got} vs {want}"
        );
    }
    // Bessel form of the density, η > 1 only.
    let p = rf(2.0, 2.0, 1.5, 3.0);
    let bessel = p.pdf_bessel_form(2.0).unwrap();
    assert!(rel_err(bessel, alpha_eta_mu_pdf(2.0, 2.0, 1.5, 3.0, 2.0)) < 1e-8);
    assert!(rf(2.0, 0.5, 1.0, 1.0).pdf_bessel_form(1.0).is_err());
}

#[test]
fn rf_pdf_normalizes() {
    for (a, e, m, w) in [
        (4.0, 1.0001, 1.0, 10.0),
        (2.0, 0.3, 0.75, 1.0),
        (8.0, 3.0, 2.5, 100.0),
        (2.0, 1.0001, 0.5, 0.01),
    ] {
        let p = rf(a, e, m, w);
        let s = p.series(&prec()).unwrap();
        let lw = w.ln();
        let total = log_simpson(|g| s.pdf(g), lw - 40.0, lw + 8.0, 200_000);
        assert!((total - 1.0).abs() < 1e-6, "({a},{e},{m},{w}): {total}");
    }
}

#[test]
fn rf_cdf_matches_integrated_pdf() {
    // Figure-10 main link at 5 dB.
    let p = RfFadingParams::with_omega_db(2.0, 1.0001, 1.0, 5.0).unwrap();
    let s = p.series(&prec()).unwrap();
    let x: f64 = 3.1623;
    let want = log_simpson(|g| s.pdf(g), -40.0, x.ln(), 200_000);
    assert!((rf_cdf(&p, x, &prec()).unwrap() - want).abs() < 1e-9);
}

#[test]
fn rf_finite_sum_agrees_with_incomplete_gamma() {
    for (a, e, m, w) in [
        (4.0, 1.0001, 1.0, 10.0),
        (2.0, 2.0, 0.5, 1.0),
        (6.0, 0.5, 1.5, 3.0),
        (2.0, 1.0001, 3.0, 0.5),
    ] {
        let s = rf(a, e, m, w).series(&prec()).unwrap();
        assert!(s.has_integer_shapes());
        for t in &s.terms {
            assert!((t.shape - 2.0 * (m + t.index as f64)).abs() < 1e-12);
        }
        for g in [0.01, 0.3, 1.0, w, 5.0 * w] {
            let a1 = s.cdf(g);
            let a2 = s.cdf_finite_sum(g).unwrap();
            assert!((a1 - a2).abs() < 1e-9, "{a1} vs {a2}");
        }
    }
    let s = rf(2.0, 2.0, 0.8, 1.0).series(&prec()).unwrap();
    assert!(matches!(s.cdf_finite_sum(1.0), Err(Error::Precondition(_))));
}

#[test]
fn table_rf_reductions() {
    let w = 2.0;
    // Nakagami-m, m = 2μ
    let p = rf(2.0, 1.0001, 1.0, w);
    for g in [0.5, 2.0, 5.0] {
        let want = lower_gamma(2.0, 2.0 * g / w) / gamma(2.0);
        assert!((rf_cdf(&p, g, &prec()).unwrap() - want).abs() < 1e-3);
    }
    // Weibull, α = 4, μ = 0.5
    let p = rf(4.0, 1.0001, 0.5, w);
    for g in [0.5, 2.0, 5.0] {
        let want = 1.0 - (-(g / w).powi(2)).exp();
        assert!((rf_cdf(&p, g, &prec()).unwrap() - want).abs() < 1e-3);
    }
    // α-μ: with η ≈ 1 the two components merge into Gamma(2μ)
    let p = rf(3.0, 1.0001, 1.0, w);
    for g in [0.5, 2.0, 5.0] {
        let want = lower_gamma(2.0, 2.0 * (g / w).powf(1.5)) / gamma(2.0);
        assert!((rf_cdf(&p, g, &prec()).unwrap() - want).abs() < 1e-3);
    }
}

#[test]
fn eavesdropper_uses_same_operations() {
    let a = rf(4.0, 1.0001, 1.0, 3.0);
    let b = RfFadingParams::with_omega_db(4.0, 1.0001, 1.0, linear_to_db(3.0)).unwrap();
    let sa = a.series(&prec()).unwrap();
    let sb = b.series(&prec()).unwrap();
    assert_eq!(sa.terms.len(), sb.terms.len());
    for g in [0.1, 1.0, 10.0] {
        assert!(rel_err(sa.pdf(g), sb.pdf(g)) < 1e-12);
    }
}

#[test]
fn rf_sampler() {
    let p = rf(2.0, 1.0001, 0.5, 1.0);
    let n = 1_000_000;
    let x = sorted(rf_sample(&p, SeedStream::new(42, 0), n).unwrap());
    let mean = x.iter().sum::<f64>() / n as f64;
    // Exponential SNR: standard deviation equals the mean.
    assert!((mean - 1.0).abs() < 3.0 / (n as f64).sqrt());
    let s = p.series(&prec()).unwrap();
    let (d, pv) = ks_pvalue(&x, |g| s.cdf(g));
    assert!(d < 1.95 / (n as f64).sqrt(), "D = {d}");
    assert!(pv > 1e-3);

    let p = rf(4.0, 2.5, 1.5, 10.0);
    let x = sorted(rf_sample(&p, SeedStream::new(7, 3), 200_000).unwrap());
    let s = p.series(&prec()).unwrap();
    assert!(ks_pvalue(&x, |g| s.cdf(g)).1 > 1e-3);

    assert!(rf_sample(&p, SeedStream::new(1, 0), 0).unwrap().is_empty());
    assert_eq!(
        rf_sample(&p, SeedStream::new(9, 1), 100).unwrap(),
        rf_sample(&p, SeedStream::new(9, 1), 100).unwrap()
    );
    assert_ne!(
        rf_sample(&p, SeedStream::new(9, 1), 100).unwrap(),
        rf_sample(&p, SeedStream::new(9, 2), 100).unwrap()
    );
}

#[test]
fn fso_pdf_normalizes() {
    for p in [
        fso(2.296, 2, 6.7, Detection::Heterodyne, 10.0),
        fso(4.2, 3, 1.0, Detection::IntensityModulation, 10.0),
        fso(8.0, 4, 1.0, Detection::Heterodyne, 0.0),
    ] {
        let lu = p.u_r.ln();
        let total = log_simpson(
            |g| fso_pdf(&p, g, &prec()).unwrap(),
            lu - 45.0,
            lu + 12.0,
            6_000,
        );
        assert!((total - 1.0).abs() < 1e-6, "{p:?}: {total}");
    }
}

#[test]
fn fso_cdf_derivative_is_pdf() {
    let p = fso(2.296, 2, 6.7, Detection::Heterodyne, 10.0);
    for k in 0..20 {
        let g = 10f64.powf(-2.0 + 4.0 * k as f64 / 19.0);
        let h = 1e-4 * g;
        let d = (fso_cdf_eval(&p, g + h, &prec()).unwrap().value
            - fso_cdf_eval(&p, g - h, &prec()).unwrap().value)
            / (2.0 * h);
        let f = fso_pdf(&p, g, &prec()).unwrap();
        assert!(rel_err(d, f) < 1e-4, "γ = {g}: {d} vs {f}");
    }
}

#[test]
fn fso_cdf_limits_and_weak_turbulence() {
    let p = fso(8.0, 4, 6.7, Detection::Heterodyne, 10.0);
    assert_eq!(fso_cdf(&p, 0.0, &prec()).unwrap(), 0.0);
    let v = fso_cdf(&p, 10.0 * p.u_r, &prec()).unwrap();
    assert!((0.9..=1.0).contains(&v), "{v}");
    let mut last = 0.0;
    for k in 0..200 {
        let g = 10f64.powf(-6.0 + 0.05 * k as f64);
        let c = fso_cdf(&p, g, &prec()).unwrap();
        assert!(c >= last - 1e-12);
        last = c;
    }
    assert!((fso_cdf(&p, 1e6 * p.u_r, &prec()).unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn fso_small_snr_power_law() {
    // ε² below every other pole: f ∝ γ^{ε²/r − 1}
    for (det, want) in [
        (Detection::Heterodyne, -0.75),
        (Detection::IntensityModulation, -0.875),
    ] {
        let p = FsoChannelParams::new(2.296, 2, 2.0, 2.0, 0.5, det, 10.0).unwrap();
        let (g1, g2) = (1e-8, 1e-7);
        let slope = (fso_pdf(&p, g2, &prec()).unwrap() / fso_pdf(&p, g1, &prec()).unwrap()).ln()
            / (g2 / g1).ln();
        assert!((slope - want).abs() < 1e-2, "{det:?}: {slope}");
    }
}

#[test]
fn gamma_gamma_reduction() {
    let p = FsoChannelParams::from_constituents(
        2.296,
        2,
        0.0,
        1.0,
        1.0,
        0.0,
        6.7,
        Detection::Heterodyne,
        1.0,
    )
    .unwrap();
    assert_eq!(p.g_d, 0.0);
    let guarded = FsoChannelParams { g_d: 1e-4, ..p };
    for g in [0.3, 1.0, 2.5] {
        let want = gg_pointing_pdf(2.296, 2.0, 6.7, 1.0, g);
        for q in [p, guarded] {
            let got = fso_pdf(&q, g, &prec()).unwrap();
            assert!(
                (got - want).abs() < 1e-3 * want.max(1.0),
                "{g}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn fso_samplers() {
    let p = fso(2.296, 2, 6.7, Detection::IntensityModulation, 10.0);
    let n = 1_000_000;
    let x = sorted(fso_sample(&p, SeedStream::new(3, 0), n, &prec()).unwrap());
    let (d, pv, _) = ks_grid_bound(&x, |g| fso_cdf(&p, g, &prec()).unwrap(), 2.5e-4);
    assert!(d < 1.95 / (n as f64).sqrt(), "D = {d}");
    assert!(pv > 1e-3);
    assert_eq!(
        fso_sample(&p, SeedStream::new(3, 1), 50, &prec()).unwrap(),
        fso_sample(&p, SeedStream::new(3, 1), 50, &prec()).unwrap()
    );

    // The physical-model sampler must follow the same law.
    for q in [p, fso(4.2, 3, 1.0, Detection::Heterodyne, 5.0)] {
        let x = sorted(fso_sample_generative(&q, SeedStream::new(4, 0), 200_000).unwrap());
        let (_, pv, _) = ks_grid_bound(&x, |g| fso_cdf(&q, g, &prec()).unwrap(), 5e-4);
        assert!(pv > 1e-3, "{q:?}: p = {pv}");
    }
}

#[test]
fn pointing_factor_concentrates_for_large_epsilon() {
    // Same stream, so both samplers see identical X, Y and U draws and the
    // ratio isolates U^{1/ε²} up to the mean normalisation.
    let wide = fso(2.296, 2, 1e3, Detection::Heterodyne, 10.0);
    let none = fso(2.296, 2, 1e9, Detection::Heterodyne, 10.0);
    let a = fso_sample_generative(&wide, SeedStream::new(5, 0), 100_000).unwrap();
    let b = fso_sample_generative(&none, SeedStream::new(5, 0), 100_000).unwrap();
    let r: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.0 / y.0).collect();
    let m = r.iter().sum::<f64>() / r.len() as f64;
    let sd = (r.iter().map(|v| (v - m).powi(2)).sum::<f64>() / r.len() as f64).sqrt();
    assert!(sd / m < 0.01, "cv = {}", sd / m);
}

#[test]
fn dual_hop_cdf_against_simulation() {
    let pr = RfFadingParams::with_omega_db(4.0, 1.0001, 1.0, 10.0).unwrap();
    let pd = fso(2.296, 2, 6.7, Detection::Heterodyne, 10.0);
    assert_eq!(dual_hop_cdf(&pr, &pd, 0.0, &prec()).unwrap(), 0.0);
    let n = 1_000_000;
    let a = rf_sample(&pr, SeedStream::new(11, 0), n).unwrap();
    let b = fso_sample(&pd, SeedStream::new(11, 1), n, &prec()).unwrap();
    let mut m: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.0.min(y.0)).collect();
    m.sort_by(f64::total_cmp);
    for k in 0..20 {
        let g = 10f64.powf(-1.0 + 2.5 * k as f64 / 19.0);
        let emp = m.partition_point(|&v| v <= g) as f64 / n as f64;
        let f = dual_hop_cdf(&pr, &pd, g, &prec()).unwrap();
        let se = (f * (1.0 - f) / n as f64).sqrt().max(1e-6);
        assert!((emp - f).abs() < 3.0 * se + 1e-6, "γ = {g}: {emp} vs {f}");
        let sf = dual_hop_sf(&pr, &pd, g, &prec()).unwrap();
        assert!((sf + f - 1.0).abs() < 1e-15);
    }
}

#[test]
fn invalid_parameters_rejected() {
    assert!(RfFadingParams::new(2.0, 1.0, 1.0, 1.0).is_err());
    assert!(RfFadingParams::new(-2.0, 2.0, 1.0, 1.0).is_err());
    assert!(RfFadingParams::new(2.0, 2.0, 0.3, 1.0).is_err());
    assert!(FsoChannelParams::new(2.0, 0, 1.0, 1.0, 1.0, Detection::Heterodyne, 1.0).is_err());
    assert!(FsoChannelParams::new(2.0, 2, 0.0, 0.0, 1.0, Detection::Heterodyne, 1.0).is_err());
    assert!(FsoChannelParams::new(2.0, 2, 1.0, 1.0, 0.0, Detection::Heterodyne, 1.0).is_err());
    let p = fso(2.296, 2, 6.7, Detection::IntensityModulation, 10.0);
    assert_eq!(p.l1().len(), 2);
    assert_eq!(p.l2(1).len(), 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rf_pdf_cdf_consistent(
        alpha in 1.0f64..8.0,
        eta in 0.1f64..5.0,
        mu in 0.5f64..3.0,
        omega_db in -10.0f64..30.0,
        lo in -3.0f64..2.0,
        width in 0.1f64..3.0,
    ) {
        prop_assume!((eta - 1.0).abs() > 1e-3);
        let p = RfFadingParams::with_omega_db(alpha, eta, mu, omega_db).unwrap();
        let s = p.series(&prec()).unwrap();
        let w = p.omega;
        let mut last = 0.0;
        for k in 0..1000 {
            let g = w * 10f64.powf(-6.0 + 9.0 * k as f64 / 999.0);
            prop_assert!(s.pdf(g) >= 0.0);
            let c = s.cdf(g);
            prop_assert!(c >= last - 1e-12 && c <= 1.0);
            last = c;
        }
        prop_assert!((s.cdf(1e12 * w) - 1.0).abs() < 1e-6);
        let (a, b) = (w * 10f64.powf(lo), w * 10f64.powf(lo + width));
        let area = log_simpson(|g| s.pdf(g), a.ln(), b.ln(), 20_000);
        prop_assert!((area - (s.cdf(b) - s.cdf(a))).abs() < 1e-7, "{} vs {}", area, s.cdf(b) - s.cdf(a));
    }

    #[test]
    fn fso_pdf_cdf_consistent(
        turb in 0usize..3,
        imdd in proptest::bool::ANY,
        eps in 0.8f64..7.0,
        lo in -2.0f64..1.0,
        width in 0.2f64..1.5,
    ) {
        let (a, b) = [(2.296, 2), (4.2, 3), (8.0, 4)][turb];
        let det = if imdd { Detection::IntensityModulation } else { Detection::Heterodyne };
        let p = FsoChannelParams::new(a, b, 2.0, 2.0, eps, det, 10.0).unwrap();
        let mut last = 0.0;
        for k in 0..60 {
            let g = p.u_r * 10f64.powf(-6.0 + 9.0 * k as f64 / 59.0);
            prop_assert!(fso_pdf(&p, g, &prec()).unwrap() >= 0.0);
            let c = fso_cdf(&p, g, &prec()).unwrap();
            prop_assert!(c >= last - 1e-9);
            last = c;
        }
        let (x0, x1) = (p.u_r * 10f64.powf(lo), p.u_r * 10f64.powf(lo + width));
        let area = log_simpson(|g| fso_pdf(&p, g, &prec()).unwrap(), x0.ln(), x1.ln(), 400);
        let diff = fso_cdf(&p, x1, &prec()).unwrap() - fso_cdf(&p, x0, &prec()).unwrap();
        prop_assert!((area - diff).abs() < 1e-7, "{} vs {}", area, diff);
    }
}
