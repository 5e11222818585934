//! Adaptive Gauss–Kronrod quadrature and the special functions the analytic
//! oracles need.
//!
//! The Fourier-type integrals in this crate (the level-density transform
//! `g`, the cluster-function transform) are evaluated with a 7–15 point
//! Gauss–Kronrod rule under adaptive bisection. Oscillatory integrands are
//! pre-split into half-period panels so the rule never sees more than one
//! sign change of the oscillating factor per panel.

/// Kronrod-15 abscissae (positive half, descending), Gauss-7 embedded.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Gauss–Kronrod 7–15 evaluation on `[a, b]`; returns (estimate, error).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);

    let fc = f(c);
    let mut res_g = WG[3] * fc;
    let mut res_k = WGK[7] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        res_k += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    res_g *= h;
    res_k *= h;
    (res_k, (res_k - res_g).abs())
}

/// Adaptive quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Returns the integral estimate; panics only on NaN bounds. The interval
/// budget is generous (2^16 panels) and overshoot falls back to the best
/// estimate, which is fine for the smooth integrands used here.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let mut intervals = vec![(a, b)];
    let mut results: Vec<(f64, f64)> = Vec::new();
    let mut budget = 1usize << 16;
    while let Some((lo, hi)) = intervals.pop() {
        let (val, err) = gk15(&f, lo, hi);
        let local_tol = tol * ((hi - lo) / (b - a)).abs();
        if err <= local_tol.max(1e-300) || budget == 0 {
            results.push((val, err));
        } else {
            budget -= 1;
            let mid = 0.5 * (lo + hi);
            intervals.push((lo, mid));
            intervals.push((mid, hi));
        }
    }
    // Sorted accumulation keeps the result independent of traversal order.
    results.sort_by(|x, y| x.0.abs().partial_cmp(&y.0.abs()).unwrap());
    results.iter().map(|r| r.0).sum()
}

/// Adaptive quadrature of `f(x) = smooth(x) * cos-like(omega * x)` over
/// `[a, b]`: the range is first cut into half-period panels of the
/// oscillation frequency `omega`, then each panel is integrated adaptively.
pub fn integrate_oscillatory<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, omega: f64, tol: f64) -> f64 {
    let span = (b - a).abs();
    if span == 0.0 {
        return 0.0;
    }
    let half_period = if omega.abs() > 0.0 {
        std::f64::consts::PI / omega.abs()
    } else {
        span
    };
    let n_panels = (span / half_period).ceil().max(1.0) as usize;
    let n_panels = n_panels.min(1 << 20);
    let h = (b - a) / n_panels as f64;
    let mut total = 0.0;
    for k in 0..n_panels {
        let lo = a + k as f64 * h;
        let hi = if k + 1 == n_panels { b } else { lo + h };
        total += integrate(&f, lo, hi, tol / n_panels as f64);
    }
    total
}

/// Sine integral Si(x) = ∫_0^x sin(t)/t dt.
///
/// Power series for |x| <= 12 (alternating; about 3 digits lost to
/// cancellation at the top of the range), Lentz continued fraction for
/// E1(ix) beyond (the asymptotic rational fits stop near 1e-7, which is not
/// enough for the 1e-10 quadrature budget downstream).
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x <= 12.0 {
        // Si(x) = sum_k (-1)^k x^(2k+1) / ((2k+1)(2k+1)!)
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut k = 1u32;
        loop {
            let two_k = 2 * k as u64;
            term *= -x2 / ((two_k * (two_k + 1)) as f64);
            let contribution = term / (two_k + 1) as f64;
            sum += contribution;
            if contribution.abs() < 1e-17 * sum.abs().max(1.0) || k > 60 {
                break;
            }
            k += 1;
        }
        return sum;
    }
    // Si(x) = pi/2 + Im E1(ix); E1 by modified Lentz on the standard CF
    //   E1(z) = exp(-z) / (z + 1/(1 + 1/(z + 2/(1 + 2/(z + ...)))))
    use num_complex::Complex64;
    let z = Complex64::new(0.0, x);
    let tiny = Complex64::new(1e-290, 0.0);
    let mut b = z + 1.0;
    let mut c = Complex64::new(1e290, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..200 {
        let a = -(i as f64) * (i as f64);
        b += 2.0;
        d = a * d + b;
        if d.norm() < 1e-290 {
            d = tiny;
        }
        c = b + a / c;
        if c.norm() < 1e-290 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    let e1 = (-z).exp() * h;
    std::f64::consts::FRAC_PI_2 + e1.im
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x * x, 0.0, 1.0, 1e-12);
        assert!((v - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_cos() {
        // ∫_0^{10.5 pi} cos x dx = sin(10.5 pi) = -1? sin(10.5π) = sin(π/2 + 10π) = 1... use exact
        let b = 33.0;
        let v = integrate_oscillatory(|x| x.cos(), 0.0, b, 1.0, 1e-11);
        assert!((v - b.sin()).abs() < 1e-10, "v = {v}");
    }

    #[test]
    fn sqrt_endpoint() {
        // ∫_0^1 sqrt(1 - x^2) dx = pi/4
        let v = integrate(|x| (1.0 - x * x).max(0.0).sqrt(), 0.0, 1.0, 1e-11);
        assert!((v - std::f64::consts::FRAC_PI_4).abs() < 1e-9);
    }

    #[test]
    fn sine_integral_reference_values() {
        // Reference values from the defining series/CF cross-checked digits.
        let cases = [
            (0.5, 0.493107418043067),
            (1.0, 0.946083070367183),
            (2.0, 1.605412976802695),
            (5.0, 1.549931244944674),
            (8.0, 1.574186821706942),
            (10.0, 1.658347594218874),
            (20.0, 1.548241701043440),
            (50.0, 1.551617072485936),
        ];
        for (x, want) in cases {
            let got = sine_integral(x);
            assert!((got - want).abs() < 1e-12, "Si({x}) = {got}, want {want}");
        }
        assert_eq!(sine_integral(0.0), 0.0);
        assert!((sine_integral(-2.0) + sine_integral(2.0)).abs() < 1e-15);
    }

    #[test]
    fn si_branches_agree_near_crossover() {
        // series branch just below 12, continued fraction just above
        let below = sine_integral(11.9);
        let above = sine_integral(12.1);
        assert!(
            (below - 1.509807198728928).abs() < 5e-11,
            "series branch: {below}"
        );
        assert!(
            (above - 1.500875104727267).abs() < 5e-11,
            "cf branch: {above}"
        );
    }
}
