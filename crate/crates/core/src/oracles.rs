//! Independent verification routes used by the test suites.
//!
//! Everything here is deliberately computed by a different method than the
//! implementation path it cross-checks:
//!
//! - [`bessel_j1`]: ascending series / Miller backward recurrence. The
//!   quadrature `analytics::g` must agree with `2 J1(tau)/tau`.
//! - [`cluster_fourier_closed_form`]: the closed-form Fourier transform of
//!   the two-level cluster function, against the quadrature route.
//! - [`gaussian_profile_ft`], [`rectangular_profile_ft`]: closed-form
//!   transforms for the ETH band profiles.
//!
//! None of these functions are called by the implementation paths they
//! verify.

use crate::ensemble::EnsembleKind;

/// Bessel function of the first kind, order one.
///
/// Ascending series for |x| <= 9 (alternating, ~1e-14 there), Miller
/// backward recurrence with even-order normalization beyond.
pub fn bessel_j1(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_j1(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x <= 9.0 {
        let half = 0.5 * x;
        let mut term = half;
        let mut sum = half;
        for k in 1..200 {
            term *= -(half * half) / (k as f64 * (k as f64 + 1.0));
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-30) && k as f64 > half {
                break;
            }
        }
        return sum;
    }
    // Miller: recur J_{k-1} = (2k/x) J_k - J_{k+1} downward from well above x,
    // normalize with J_0 + 2 sum_{even k >= 2} J_k = 1.
    let start = (x + 20.0 + 12.0 * x.sqrt()) as usize;
    let start = start + (start % 2); // even start
    let mut fkp1 = 0.0f64;
    let mut fk = 1e-280f64;
    let mut norm = 0.0f64;
    let mut j1 = 0.0f64;
    for k in (1..=start).rev() {
        let fkm1 = (2.0 * k as f64 / x) * fk - fkp1;
        fkp1 = fk;
        fk = fkm1;
        // after this step, fk = J_{k-1} (unnormalized), fkp1 = J_k
        if (k - 1) % 2 == 0 && k - 1 >= 2 {
            norm += 2.0 * fk;
        }
        if k - 1 == 1 {
            j1 = fk;
        }
        if fk.abs() > 1e260 {
            let scale = 1e-260;
            fk *= scale;
            fkp1 *= scale;
            norm *= scale;
            j1 *= scale;
        }
    }
    norm += fk; // J_0 term
    j1 / norm
}

/// Closed-form Fourier transform of the two-level cluster function,
/// `b2(k) = ∫ Y2(r) e^{2 pi i k r} dr` on the unfolded scale.
///
/// GOE: `1 - 2|k| + |k| ln(1+2|k|)` for |k| <= 1, `-1 + |k| ln((2|k|+1)/(2|k|-1))` beyond.
/// GUE: `max(0, 1 - |k|)`.
pub fn b2_closed_form(kind: EnsembleKind, k: f64) -> f64 {
    let k = k.abs();
    match kind {
        EnsembleKind::Goe => {
            if k <= 1.0 {
                1.0 - 2.0 * k + k * (1.0 + 2.0 * k).ln()
            } else {
                -1.0 + k * ((2.0 * k + 1.0) / (2.0 * k - 1.0)).ln()
            }
        }
        EnsembleKind::Gue => (1.0 - k).max(0.0),
    }
}

/// Closed form of `∫ Y2(y) cos(x y) dy`; equals `b2(x / 2π)`.
pub fn cluster_fourier_closed_form(kind: EnsembleKind, x: f64) -> f64 {
    b2_closed_form(kind, x / (2.0 * std::f64::consts::PI))
}

/// Normalized Fourier transform of a Gaussian band profile of width `w`:
/// `exp(-w^2 t^2 / 2)` (hbar = 1).
pub fn gaussian_profile_ft(w: f64, t: f64) -> f64 {
    (-0.5 * w * w * t * t).exp()
}

/// Normalized Fourier transform of the rectangular band profile supported on
/// `[-w/2, w/2]`: `sinc(w t / 2)`, zeros at `t = 2 pi k / w`.
pub fn rectangular_profile_ft(w: f64, t: f64) -> f64 {
    let u = 0.5 * w * t;
    if u.abs() < 1e-8 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}
