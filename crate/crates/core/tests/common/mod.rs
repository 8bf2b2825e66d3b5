//! Oracles shared by the integration tests. Nothing here calls into the
//! library's numerical routines except to build the values under test.

#![allow(dead_code)]

use rffso_secrecy::specfun::{
    bivariate_fox_h, fox_h, meijer_g, BivariateHSpec, Evaluation, GammaTriple, JointGroup,
    Precision,
};
use rffso_secrecy::Result;
use std::f64::consts::PI;

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * k as f64);
    }
    s * h / 3.0
}

/// Lanczos Γ for positive real arguments (g = 7, n = 9).
pub fn gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = G[0];
    let t = x + 7.5;
    for (i, g) in G.iter().enumerate().skip(1) {
        a += g / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// `γ(a, x) = ∫₀ˣ t^{a−1} e^{−t} dt` by Simpson after `t = u²`, which keeps
/// the integrand `2u^{2a−1} e^{−u²}` smooth for half-integer and integer `a`.
pub fn lower_gamma(a: f64, x: f64) -> f64 {
    simpson(
        |u| 2.0 * u.powf(2.0 * a - 1.0) * (-u * u).exp(),
        0.0,
        x.sqrt(),
        40_000,
    )
}

/// `Γ(a, x)` for `a ≥ 1` by Simpson on `[x, x + 80]`.
pub fn upper_gamma(a: f64, x: f64) -> f64 {
    simpson(|t| t.powf(a - 1.0) * (-t).exp(), x, x + 80.0, 40_000)
}

/// `K_ν(z) = ∫₀^∞ e^{−z cosh t} cosh(νt) dt`.
pub fn bessel_k(nu: f64, z: f64) -> f64 {
    simpson(
        |t| (-z * t.cosh()).exp() * (nu * t).cosh(),
        0.0,
        12.0,
        20_000,
    )
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}

pub struct IdentityCase {
    pub name: String,
    pub expected: f64,
    pub eval: Box<dyn Fn(&Precision) -> Result<Evaluation>>,
}

fn case(
    name: impl Into<String>,
    expected: f64,
    eval: impl Fn(&Precision) -> Result<Evaluation> + 'static,
) -> IdentityCase {
    IdentityCase {
        name: name.into(),
        expected,
        eval: Box::new(eval),
    }
}

fn g(
    an: &[f64],
    ap: &[f64],
    bm: &[f64],
    bq: &[f64],
    x: f64,
) -> impl Fn(&Precision) -> Result<Evaluation> {
    let spec = GammaTriple::meijer(an, ap, bm, bq);
    move |p| meijer_g(&spec, x, p)
}

fn h(
    an: &[(f64, f64)],
    ap: &[(f64, f64)],
    bm: &[(f64, f64)],
    bq: &[(f64, f64)],
    x: f64,
) -> impl Fn(&Precision) -> Result<Evaluation> {
    let spec = GammaTriple::fox(an, ap, bm, bq);
    move |p| fox_h(&spec, x, p)
}

/// Reductions of Meijer G / Fox H / bivariate H with independently computed
/// reference values.
pub fn identity_corpus() -> Vec<IdentityCase> {
    let mut v = Vec::new();

    for x in [0.1_f64, 1.0, 5.0] {
        v.push(case(
            format!("exp x={x}"),
            (-x).exp(),
            g(&[], &[], &[0.0], &[], x),
        ));
    }
    for x in [0.2_f64, 1.0, 3.0] {
        v.push(case(
            format!("1/(1+x) x={x}"),
            1.0 / (1.0 + x),
            g(&[0.0], &[], &[0.0], &[], x),
        ));
    }
    for (a, x) in [(0.5, 0.8), (1.0, 1.0), (2.5, 2.5)] {
        v.push(case(
            format!("lower incomplete gamma a={a} x={x}"),
            lower_gamma(a, x),
            g(&[1.0], &[], &[a], &[0.0], x),
        ));
    }
    for (a, x) in [(1.0, 0.5), (2.0, 1.5)] {
        v.push(case(
            format!("upper incomplete gamma a={a} x={x}"),
            upper_gamma(a, x),
            g(&[], &[1.0], &[0.0, a], &[], x),
        ));
    }
    for (nu, x) in [(0.0_f64, 0.4_f64), (0.5, 1.3), (1.0, 2.0), (1.5, 0.7)] {
        v.push(case(
            format!("bessel K nu={nu} x={x}"),
            2.0 * bessel_k(nu, 2.0 * x.sqrt()),
            g(&[], &[], &[nu / 2.0, -nu / 2.0], &[], x),
        ));
    }
    for x in [0.5_f64, 2.0] {
        v.push(case(
            format!("ln(1+x) x={x}"),
            x.ln_1p(),
            g(&[1.0, 1.0], &[], &[1.0], &[0.0], x),
        ));
    }
    for (a, b, x) in [(0.3_f64, 0.7_f64, 2.0_f64), (-0.5, 0.2, 0.6)] {
        v.push(case(
            format!("power form a={a} b={b} x={x}"),
            gamma(1.0 - a + b) * x.powf(b) * (1.0 + x).powf(a - b - 1.0),
            g(&[a], &[], &[b], &[], x),
        ));
    }
    for (k, x) in [(2usize, 0.7_f64), (3, 2.0)] {
        let kf = k as f64;
        let bm: Vec<f64> = (0..k).map(|j| j as f64 / kf).collect();
        v.push(case(
            format!("multiplication theorem k={k} x={x}"),
            (2.0 * PI).powf((kf - 1.0) / 2.0) / kf.sqrt() * (-kf * x.powf(1.0 / kf)).exp(),
            g(&[], &[], &bm, &[], x),
        ));
    }

    for x in [2.0_f64, 0.3] {
        v.push(case(
            format!("fox exp x={x}"),
            (-x).exp(),
            h(&[], &[], &[(0.0, 1.0)], &[], x),
        ));
    }
    for (b, scale, x) in [
        (0.0_f64, 0.5_f64, 1.0_f64),
        (1.0, 0.5, 0.7),
        (0.5, 2.0, 3.0),
    ] {
        v.push(case(
            format!("fox scaled exp b={b} B={scale} x={x}"),
            x.powf(b / scale) * (-x.powf(1.0 / scale)).exp() / scale,
            h(&[], &[], &[(b, scale)], &[], x),
        ));
    }
    for (scale, x) in [(1.0_f64, 3.0_f64), (0.5, 2.0), (2.0, 4.0)] {
        v.push(case(
            format!("fox 1/(1+x^(1/B)) B={scale} x={x}"),
            1.0 / (scale * (1.0 + x.powf(1.0 / scale))),
            h(&[(0.0, scale)], &[], &[(0.0, scale)], &[], x),
        ));
    }
    // Unit-scale Fox H against the Meijer G route on Málaga-like shapes.
    let shapes: [(&[f64], &[f64], &[f64], &[f64], f64); 3] = [
        (&[1.0], &[45.89], &[44.89, 2.3, 2.0], &[0.0], 0.9),
        (&[], &[46.89], &[44.89, 4.2, 3.0], &[], 30.0),
        (&[0.4], &[1.2], &[0.8, 1.5], &[0.1], 1.7),
    ];
    for (i, (an, ap, bm, bq, x)) in shapes.into_iter().enumerate() {
        let reference = meijer_g(
            &GammaTriple::meijer(an, ap, bm, bq),
            x,
            &Precision::default().tightened(1e-3),
        )
        .map(|e| e.value)
        .unwrap_or(f64::NAN);
        let unit = |l: &[f64]| l.iter().map(|&a| (a, 1.0)).collect::<Vec<_>>();
        v.push(case(
            format!("fox unit scale = meijer #{i}"),
            reference,
            h(&unit(an), &unit(ap), &unit(bm), &unit(bq), x),
        ));
    }

    let separable: [(GammaTriple, f64, GammaTriple, f64, f64); 3] = [
        (
            GammaTriple::meijer(&[], &[], &[0.0], &[]),
            0.7,
            GammaTriple::meijer(&[0.0], &[], &[0.0], &[]),
            2.0,
            (-0.7f64).exp() / 3.0,
        ),
        (
            GammaTriple::meijer(&[1.0], &[], &[1.5], &[0.0]),
            1.2,
            GammaTriple::meijer(&[], &[], &[0.0], &[]),
            0.5,
            lower_gamma(1.5, 1.2) * (-0.5f64).exp(),
        ),
        (
            GammaTriple::meijer(&[], &[], &[0.25, -0.25], &[]),
            0.9,
            GammaTriple::meijer(&[1.0, 1.0], &[], &[1.0], &[0.0]),
            1.5,
            2.0 * bessel_k(0.5, 2.0 * 0.9f64.sqrt()) * 1.5f64.ln_1p(),
        ),
    ];
    for (i, (kx, x, ky, y, want)) in separable.into_iter().enumerate() {
        let spec = BivariateHSpec {
            outer: JointGroup::default(),
            inner_x: kx,
            inner_y: ky,
            x,
            y,
        };
        v.push(case(format!("separable bivariate #{i}"), want, move |p| {
            bivariate_fox_h(&spec, p)
        }));
    }
    v
}

/// Asymptotic Kolmogorov survival function `Q_KS(λ)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = 2.0 * (-2.0 * kf * kf * lambda * lambda).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    s.clamp(0.0, 1.0)
}

/// KS p-value of a sorted sample against a continuous CDF, using the
/// Stephens small-sample correction.
pub fn ks_pvalue(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    let sn = n.sqrt();
    (d, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d))
}

/// `∫_{e^lo}^{e^hi} f(x) dx` by Simpson on `u = ln x`.
pub fn log_simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    simpson(
        |u| {
            let x = u.exp();
            f(x) * x
        },
        lo,
        hi,
        n,
    )
}

/// Density of `X + Y` with `X ~ Gamma(k, s1)`, `Y ~ Gamma(k, s2)` by direct
/// convolution, after `x = w v²` so the integrand stays smooth at both ends
/// for `k ≥ 0.5`.
pub fn gamma_sum_pdf(k: f64, s1: f64, s2: f64, w: f64) -> f64 {
    let norm = 1.0 / (gamma(k).powi(2) * (s1 * s2).powf(k));
    // x = w sin²φ, w − x = w cos²φ
    let v = simpson(
        |phi| {
            let (s, c) = (phi.sin(), phi.cos());
            let x = w * s * s;
            let y = w * c * c;
            2.0 * w * (s * c).powf(2.0 * k - 1.0) * w.powf(2.0 * k - 2.0) * (-x / s1 - y / s2).exp()
        },
        0.0,
        PI / 2.0,
        4_000,
    );
    norm * v
}

/// α-η-μ SNR density through the two-Gamma representation.
pub fn alpha_eta_mu_pdf(alpha: f64, eta: f64, mu: f64, omega: f64, g: f64) -> f64 {
    let at = alpha / 2.0;
    let s1 = 1.0 / (mu * (1.0 + eta));
    let s2 = eta * s1;
    let w = (g / omega).powf(at);
    gamma_sum_pdf(mu, s1, s2, w) * at * w / g
}

/// Density of `Z = X·Y`, `X, Y` unit-mean Gamma(a), Gamma(b).
pub fn gamma_gamma_pdf(a: f64, b: f64, z: f64) -> f64 {
    2.0 * (a * b).powf(0.5 * (a + b)) / (gamma(a) * gamma(b))
        * z.powf(0.5 * (a + b) - 1.0)
        * bessel_k(a - b, 2.0 * (a * b * z).sqrt())
}

/// Gamma-Gamma turbulence with pointing error, `γ = u (h / E[h])`,
/// `h = Z·U^{1/ε²}`, heterodyne detection.
pub fn gg_pointing_pdf(a: f64, b: f64, eps: f64, u: f64, g: f64) -> f64 {
    let e2 = eps * eps;
    let mean = e2 / (e2 + 1.0);
    let h = g * mean / u;
    // f_h(h) = ∫_h^∞ ε² h^{ε²−1} z^{−ε²} f_Z(z) dz, with z = h e^v
    let fh = simpson(
        |v| {
            let z = h * v.exp();
            e2 * h.powf(e2 - 1.0) * z.powf(-e2) * gamma_gamma_pdf(a, b, z) * z
        },
        0.0,
        (60.0 / h).ln().max(1.0),
        4_000,
    );
    fh * mean / u
}

/// Upper bound on the KS distance `sup |F_n − F|` of a sorted sample from a
/// continuous CDF that is expensive to evaluate.
///
/// `F` is evaluated on a grid started at empirical quantiles and bisected in
/// `ln x` until every cell carries at most `max_step` probability. On each
/// cell `[a, b]` monotonicity gives `F_n − F ≤ F_n(b⁻) − F(a)` and
/// `F − F_n ≤ F(b) − F_n(a⁻)`, so the result never understates `D`. Returns
/// `(D bound, p-value of the bound, CDF evaluations)`.
pub fn ks_grid_bound(sorted: &[f64], cdf: impl Fn(f64) -> f64, max_step: f64) -> (f64, f64, usize) {
    let n = sorted.len();
    let nf = n as f64;
    let m = ((1.0 / max_step).ceil() as usize).min(n);
    let mut grid: Vec<(f64, f64)> = (0..=m)
        .map(|k| sorted[((k * (n - 1)) / m).min(n - 1)])
        .filter(|&x| x > 0.0)
        .map(|x| (x, cdf(x)))
        .collect();
    grid.dedup_by(|a, b| a.0 == b.0);
    let mut evals = grid.len();
    let mut i = 0;
    while i + 1 < grid.len() {
        let (a, fa) = grid[i];
        let (b, fb) = grid[i + 1];
        if fb - fa > max_step && b / a > 1.0 + 1e-12 {
            let mid = (a * b).sqrt();
            grid.insert(i + 1, (mid, cdf(mid)));
            evals += 1;
        } else {
            i += 1;
        }
    }
    let below = |x: f64| sorted.partition_point(|&v| v < x) as f64 / nf;
    let first = grid[0];
    let last = grid[grid.len() - 1];
    // Outer cells (0, g0] and [g_K, ∞).
    let mut d = first.1.max(below(first.0)).max(1.0 - last.1);
    for w in grid.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        d = d.max(below(b) - fa).max(fb - below(a));
    }
    let sn = nf.sqrt();
    (d, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d), evals)
}
