//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.
//!
//! Globally adaptive: the panel with the largest error estimate is bisected
//! until the summed estimate meets `max(abs_tol, rel_tol * |I|)` or the
//! evaluation budget runs out. Error estimates follow the QUADPACK `qk15`
//! heuristics, which are conservative for smooth integrands.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    /// Integral of `|f|`, used to bound cancellation error by callers.
    pub abs_integral: f64,
    pub evals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
    frozen: bool,
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let hl = half.abs();
    let value = resk * half;
    resabs *= hl;
    resasc *= hl;
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    if !value.is_finite() || !err.is_finite() {
        err = f64::INFINITY;
    }
    Panel {
        a,
        b,
        value,
        error: err,
        abs: resabs,
        frozen: false,
    }
}

/// Integrate `f` over `[a, b]`.
///
/// Never fails: a non-finite integrand or an exhausted budget is reported via
/// `converged = false` so callers can map it onto their own error.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_evals: usize,
) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            abs_integral: 0.0,
            evals: 0,
            converged: true,
        };
    }
    let first = kronrod15(&mut f, a, b);
    let mut panels = vec![first];
    let mut evals = 15;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let tol = abs_tol.max(rel_tol * value.abs());
        let done = error <= tol;
        if done || evals + 30 > max_evals {
            let abs_integral = panels.iter().map(|p| p.abs).sum();
            return QuadResult {
                value,
                error,
                abs_integral,
                evals,
                converged: done,
            };
        }
        let Some((idx, worst)) = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.frozen)
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, p)| (i, *p))
        else {
            let abs_integral = panels.iter().map(|p| p.abs).sum();
            return QuadResult {
                value,
                error,
                abs_integral,
                evals,
                converged: false,
            };
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            panels[idx].frozen = true;
            continue;
        }
        let left = kronrod15(&mut f, worst.a, mid);
        let right = kronrod15(&mut f, mid, worst.b);
        evals += 30;
        panels[idx] = left;
        panels.push(right);
    }
}

/// Integrate `f` over `[0, ∞)` on a logarithmic axis, `x = e^u`.
///
/// The `u`-range is grown outward from `center` in unit steps until the
/// transformed integrand `x f(x)` stays below `cutoff` relative to its
/// running peak for several consecutive steps on each side. Returns the
/// quadrature result together with the chosen `[u_lo, u_hi]`.
pub fn integrate_log_axis<F: FnMut(f64) -> f64>(
    mut f: F,
    center: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_evals: usize,
) -> (QuadResult, f64, f64) {
    let mut g = |u: f64| {
        let x = u.exp();
        let v = f(x) * x;
        if v.is_finite() {
            v
        } else {
            f64::NAN
        }
    };
    let cutoff = 1e-18;
    let mut peak = g(center).abs();
    let mut extend = |dir: f64, peak: &mut f64| -> f64 {
        let mut u = center;
        let mut quiet = 0;
        let mut step = 0.5;
        for _ in 0..400 {
            u += dir * step;
            let v = g(u).abs();
            if v.is_nan() {
                quiet = 0;
                continue;
            }
            *peak = peak.max(v);
            if v <= cutoff * *peak {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
            step = (step * 1.25).min(4.0);
        }
        u
    };
    let hi = extend(1.0, &mut peak);
    let lo = extend(-1.0, &mut peak);
    let res = integrate(g, lo, hi, abs_tol, rel_tol, max_evals);
    (res, lo, hi)
}
