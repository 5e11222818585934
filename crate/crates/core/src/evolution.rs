//! Exact time evolution in the sampled eigenbasis.
//!
//! With the eigendecomposition `H = V E V^dag`, the test function is the
//! double sum `Tr(A rho(t)) = sum_ab W_ab exp(i (E_a - E_b)(t + t0))` with
//! `W_ab = (V^dag A V)_ab (V^dag Pi V)_ba`. After the one-time `O(N^3)`
//! basis change each time point costs `O(N^2)`.
//!
//! For the GOE the sum is arranged as `c^T W c + s^T W s` with
//! `c_a = cos(E_a t)`, `s_a = sin(E_a t)`, which is real by construction and
//! bit-exactly even in `t`; the GUE path evaluates the complex quadratic form
//! `v^dag W v`, `v_a = exp(-i E_a t)`, whose imaginary residue is recorded as
//! a diagnostic.

use faer::prelude::*;
use num_complex::Complex64;

use crate::ensemble::{EigenBasis, SpectralDecomposition};
use crate::states::{Observable, StatOperator};
use crate::{Result, RmtError};

/// `f(t) = (1/N) sum_a exp(-i E_a t)` for one realization.
///
/// `|f| <= 1`, `f(0) = 1`, and `f(-t) = conj(f(t))` bit-exactly (cosine is
/// even and sine odd in IEEE evaluation).
pub fn f_of_t(eigenvalues: &[f64], t: f64) -> Complex64 {
    assert!(!eigenvalues.is_empty(), "f_of_t needs a nonempty spectrum");
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for &e in eigenvalues {
        let phase = e * t;
        re += phase.cos();
        im -= phase.sin();
    }
    let n = eigenvalues.len() as f64;
    Complex64::new(re / n, im / n)
}

/// Time grid plus per-time values of `Tr(A rho(t))` for one realization.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Times in units of `tau_lambda`.
    pub times: Vec<f64>,
    /// `Tr(A rho(t))`, real part (reality is an invariant, see
    /// `max_imag_residual`).
    pub values: Vec<f64>,
    /// Per-time `f(t)` (computed on the shifted grid).
    pub f_values: Vec<Complex64>,
    /// Time shift `t0` in units of `tau_lambda`.
    pub shift: f64,
    /// Largest imaginary residue of the trace over the grid (zero for GOE by
    /// construction).
    pub max_imag_residual: f64,
    pub pi_label: String,
    pub a_label: String,
    /// Realization index, when the trajectory belongs to a seeded sweep.
    pub realization: Option<u64>,
}

impl Trajectory {
    /// Write the frozen CSV format: `t_over_tau_lambda,value,f_real,f_imag`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t_over_tau_lambda,value,f_real,f_imag")?;
        for (k, &t) in self.times.iter().enumerate() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                t, self.values[k], self.f_values[k].re, self.f_values[k].im
            )?;
        }
        Ok(())
    }
}

/// Basis-changed operators of one realization, ready for repeated trace
/// evaluation. `W_ab = (V^dag A V)_ab (V^dag Pi V)_ba`.
pub enum TraceEvaluator {
    Real {
        w: Mat<f64>,
        eigenvalues: Vec<f64>,
        tau_lambda: f64,
    },
    Complex {
        w: Mat<Complex64>,
        eigenvalues: Vec<f64>,
        tau_lambda: f64,
    },
}

impl TraceEvaluator {
    /// Perform the `O(N^3)` basis change once.
    pub fn new(
        decomp: &SpectralDecomposition,
        pi: &StatOperator,
        a: &Observable,
        spectral_scale: f64,
    ) -> Result<Self> {
        crate::init_linalg();
        let n = decomp.dim();
        if pi.dim() != n {
            return Err(RmtError::DimensionMismatch {
                context: "Pi vs decomposition",
                got: pi.dim(),
                expected: n,
            });
        }
        if a.dim() != n {
            return Err(RmtError::DimensionMismatch {
                context: "A vs decomposition",
                got: a.dim(),
                expected: n,
            });
        }
        if decomp.eigenvalues.iter().any(|e| !e.is_finite()) {
            return Err(RmtError::NonFinite("eigenvalues".into()));
        }
        if !(spectral_scale > 0.0) {
            return Err(RmtError::InvalidSpec(format!(
                "spectral_scale must be positive, got {spectral_scale}"
            )));
        }
        let tau_lambda = 0.5 / spectral_scale;
        match &decomp.basis {
            EigenBasis::Orthogonal(o) => {
                let a_t = o.transpose() * &a.matrix * o;
                let pi_t = o.transpose() * &pi.matrix * o;
                let mut w = Mat::<f64>::zeros(n, n);
                for b in 0..n {
                    for aa in 0..n {
                        w[(aa, b)] = a_t[(aa, b)] * pi_t[(b, aa)];
                    }
                }
                Ok(TraceEvaluator::Real {
                    w,
                    eigenvalues: decomp.eigenvalues.clone(),
                    tau_lambda,
                })
            }
            EigenBasis::Unitary(u) => {
                let a_c = real_to_complex(&a.matrix);
                let pi_c = real_to_complex(&pi.matrix);
                let a_t = u.adjoint() * &a_c * u;
                let pi_t = u.adjoint() * &pi_c * u;
                let mut w = Mat::<Complex64>::zeros(n, n);
                for b in 0..n {
                    for aa in 0..n {
                        w[(aa, b)] = a_t[(aa, b)] * pi_t[(b, aa)];
                    }
                }
                Ok(TraceEvaluator::Complex {
                    w,
                    eigenvalues: decomp.eigenvalues.clone(),
                    tau_lambda,
                })
            }
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        match self {
            TraceEvaluator::Real { eigenvalues, .. } => eigenvalues,
            TraceEvaluator::Complex { eigenvalues, .. } => eigenvalues,
        }
    }

    pub fn tau_lambda(&self) -> f64 {
        match self {
            TraceEvaluator::Real { tau_lambda, .. } => *tau_lambda,
            TraceEvaluator::Complex { tau_lambda, .. } => *tau_lambda,
        }
    }

    /// Evaluate `Tr(A rho(t))` on a grid of times (units of `tau_lambda`)
    /// with shift `t0` (same units). Returns the real values and the largest
    /// imaginary residue encountered.
    pub fn values(&self, times_tau: &[f64], shift_tau: f64) -> (Vec<f64>, f64) {
        match self {
            TraceEvaluator::Real {
                w,
                eigenvalues,
                tau_lambda,
            } => {
                let n = eigenvalues.len();
                let nt = times_tau.len();
                let mut c = Mat::<f64>::zeros(n, nt);
                let mut s = Mat::<f64>::zeros(n, nt);
                for (k, &tau) in times_tau.iter().enumerate() {
                    let t_phys = (tau + shift_tau) * tau_lambda;
                    for (i, &e) in eigenvalues.iter().enumerate() {
                        let phase = e * t_phys;
                        c[(i, k)] = phase.cos();
                        s[(i, k)] = phase.sin();
                    }
                }
                let wc = w * &c;
                let ws = w * &s;
                let mut out = Vec::with_capacity(nt);
                for k in 0..nt {
                    let mut acc = 0.0;
                    for i in 0..n {
                        acc += c[(i, k)] * wc[(i, k)] + s[(i, k)] * ws[(i, k)];
                    }
                    out.push(acc);
                }
                (out, 0.0)
            }
            TraceEvaluator::Complex {
                w,
                eigenvalues,
                tau_lambda,
            } => {
                let n = eigenvalues.len();
                let nt = times_tau.len();
                let mut v = Mat::<Complex64>::zeros(n, nt);
                for (k, &tau) in times_tau.iter().enumerate() {
                    let t_phys = (tau + shift_tau) * tau_lambda;
                    for (i, &e) in eigenvalues.iter().enumerate() {
                        let phase = e * t_phys;
                        v[(i, k)] = Complex64::new(phase.cos(), -phase.sin());
                    }
                }
                let wv = w * &v;
                let mut out = Vec::with_capacity(nt);
                let mut max_im: f64 = 0.0;
                for k in 0..nt {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        acc += v[(i, k)].conj() * wv[(i, k)];
                    }
                    max_im = max_im.max(acc.im.abs());
                    out.push(acc.re);
                }
                (out, max_im)
            }
        }
    }
}

fn real_to_complex(m: &Mat<f64>) -> Mat<Complex64> {
    let (r, c) = (m.nrows(), m.ncols());
    let mut out = Mat::<Complex64>::zeros(r, c);
    for j in 0..c {
        for i in 0..r {
            out[(i, j)] = Complex64::new(m[(i, j)], 0.0);
        }
    }
    out
}

/// Evolve `Tr(A rho(t))` on an explicit grid of times in `tau_lambda` units,
/// with time shift `t0` (same units).
pub fn evolve_trace(
    decomp: &SpectralDecomposition,
    pi: &StatOperator,
    a: &Observable,
    times_tau: &[f64],
    shift_tau: f64,
    spectral_scale: f64,
) -> Result<Trajectory> {
    let eval = TraceEvaluator::new(decomp, pi, a, spectral_scale)?;
    let (values, max_imag_residual) = eval.values(times_tau, shift_tau);
    let tau_lambda = eval.tau_lambda();
    let f_values = times_tau
        .iter()
        .map(|&tau| f_of_t(eval.eigenvalues(), (tau + shift_tau) * tau_lambda))
        .collect();
    Ok(Trajectory {
        times: times_tau.to_vec(),
        values,
        f_values,
        shift: shift_tau,
        max_imag_residual,
        pi_label: pi.label.clone(),
        a_label: a.label.clone(),
        realization: None,
    })
}

/// Unitary evolution operator `U(t) = V exp(-i E t) V^dag` (physical time).
pub fn evolve_operator(decomp: &SpectralDecomposition, t: f64) -> Mat<Complex64> {
    crate::init_linalg();
    let n = decomp.dim();
    match &decomp.basis {
        EigenBasis::Orthogonal(o) => {
            // U = O cos(Et) O^T - i O sin(Et) O^T via two real products
            let mut oc = Mat::<f64>::zeros(n, n);
            let mut os = Mat::<f64>::zeros(n, n);
            for a in 0..n {
                let phase = decomp.eigenvalues[a] * t;
                let (sin, cos) = phase.sin_cos();
                for i in 0..n {
                    oc[(i, a)] = o[(i, a)] * cos;
                    os[(i, a)] = o[(i, a)] * sin;
                }
            }
            let re = &oc * o.transpose();
            let im = &os * o.transpose();
            let mut u = Mat::<Complex64>::zeros(n, n);
            for j in 0..n {
                for i in 0..n {
                    u[(i, j)] = Complex64::new(re[(i, j)], -im[(i, j)]);
                }
            }
            u
        }
        EigenBasis::Unitary(v) => {
            let mut scaled = Mat::<Complex64>::zeros(n, n);
            for a in 0..n {
                let phase = decomp.eigenvalues[a] * t;
                let factor = Complex64::new(phase.cos(), -phase.sin());
                for i in 0..n {
                    scaled[(i, a)] = v[(i, a)] * factor;
                }
            }
            &scaled * v.adjoint()
        }
    }
}

/// Long-time average of `Tr(A rho(t))^m` for `m = 1, 2`.
#[derive(Debug, Clone, Copy)]
pub struct LongTimeAverage {
    pub value: f64,
    /// True when the spectrum had numerically degenerate gaps and the
    /// average was computed over degenerate blocks.
    pub degenerate: bool,
}

/// Diagonal-ensemble long-time average.
///
/// `m = 1`: `sum_a W_aa` (exact `T -> infinity` limit for nondegenerate
/// spectra). `m = 2`: adds the `a != b` resonant pairs that survive
/// averaging of the squared trace, `(sum_a W_aa)^2 + sum_{a != b} W_ab W_ba`.
/// Numerically degenerate eigenvalues (gap below `1e-12` of the spectral
/// spread) are merged into blocks and flagged; accidental cross-block
/// resonances have measure zero and are ignored.
pub fn long_time_average(
    decomp: &SpectralDecomposition,
    pi: &StatOperator,
    a: &Observable,
    power: u32,
) -> Result<LongTimeAverage> {
    if power != 1 && power != 2 {
        return Err(RmtError::InvalidInput(format!(
            "long_time_average supports m in {{1, 2}}, got {power}"
        )));
    }
    // spectral_scale only fixes time units, which the infinite-time average
    // does not depend on; any positive value works here.
    let eval = TraceEvaluator::new(decomp, pi, a, 1.0)?;
    let ev = decomp.eigenvalues.clone();
    let n = ev.len();
    let spread = (ev[n - 1] - ev[0]).abs().max(1e-300);
    let gap_tol = 1e-12 * spread;

    // block index per eigenvalue
    let mut block = vec![0usize; n];
    let mut nblocks = 1usize;
    for i in 1..n {
        if (ev[i] - ev[i - 1]).abs() > gap_tol {
            nblocks += 1;
        }
        block[i] = nblocks - 1;
    }
    let degenerate = nblocks < n;

    let w_at = |i: usize, j: usize| -> Complex64 {
        match &eval {
            TraceEvaluator::Real { w, .. } => Complex64::new(w[(i, j)], 0.0),
            TraceEvaluator::Complex { w, .. } => w[(i, j)],
        }
    };

    // m = 1: all pairs within a block (just the diagonal when nondegenerate)
    let mut m1 = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            if block[i] == block[j] {
                m1 += w_at(i, j);
            }
        }
    }
    if power == 1 {
        return Ok(LongTimeAverage {
            value: m1.re,
            degenerate,
        });
    }
    let mut m2 = m1 * m1;
    for i in 0..n {
        for j in 0..n {
            if block[i] != block[j] {
                m2 += w_at(i, j) * w_at(j, i);
            }
        }
    }
    Ok(LongTimeAverage {
        value: m2.re,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{decompose, sample_hamiltonian, EnsembleKind, EnsembleSpec, Hamiltonian};
    use crate::states::{make_observable, make_pi, ObservableKind, PiKind};

    fn goe_decomp(n: usize, seed: u64) -> SpectralDecomposition {
        let spec = EnsembleSpec::new(EnsembleKind::Goe, n, 1.0, seed).unwrap();
        decompose(&sample_hamiltonian(&spec, 0).unwrap()).unwrap()
    }

    fn gue_decomp(n: usize, seed: u64) -> SpectralDecomposition {
        let spec = EnsembleSpec::new(EnsembleKind::Gue, n, 1.0, seed).unwrap();
        decompose(&sample_hamiltonian(&spec, 0).unwrap()).unwrap()
    }

    #[test]
    fn f_at_zero_is_one() {
        let f = f_of_t(&[0.3, -1.2, 0.9], 0.0);
        assert_eq!(f.re, 1.0);
        assert_eq!(f.im, 0.0);
    }

    #[test]
    fn f_symmetric_pair_is_cosine() {
        let e0 = 0.77;
        for t in [0.1, 1.0, 13.7] {
            let f = f_of_t(&[-e0, e0], t);
            assert_eq!(f.im, 0.0);
            assert!((f.re - (e0 * t).cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn f_time_reversal_is_conjugation_bit_exact() {
        let d = goe_decomp(100, 41);
        let t = 5.0 * 0.5; // 5 tau_lambda at lambda = 1
        let fp = f_of_t(&d.eigenvalues, t);
        let fm = f_of_t(&d.eigenvalues, -t);
        assert_eq!(fp.re.to_bits(), fm.re.to_bits());
        assert_eq!(fp.im.to_bits(), (-fm.im).to_bits());
        assert_eq!(
            (fp.re * fp.re + fp.im * fp.im).to_bits(),
            (fm.re * fm.re + fm.im * fm.im).to_bits()
        );
    }

    #[test]
    fn identity_observable_gives_constant_one() {
        let n = 60;
        let d = goe_decomp(n, 7);
        let pi = make_pi(&PiKind::HalfFilled, n).unwrap();
        let a = make_observable(
            &ObservableKind::Diagonal {
                values: vec![1.0; n],
            },
            n,
        )
        .unwrap();
        let times: Vec<f64> = (0..40).map(|k| -10.0 + 0.5 * k as f64).collect();
        let traj = evolve_trace(&d, &pi, &a, &times, 0.0, 1.0).unwrap();
        for &v in &traj.values {
            assert!((v - 1.0).abs() < 1e-10, "trace preservation violated: {v}");
        }
    }

    #[test]
    fn equilibrium_pi_is_frozen() {
        let n = 60;
        let d = goe_decomp(n, 8);
        let pi = make_pi(&PiKind::Equilibrium, n).unwrap();
        let a = make_observable(&ObservableKind::Projector { subspace_dim: 20 }, n).unwrap();
        let times: Vec<f64> = (0..30).map(|k| k as f64 * 0.7).collect();
        let traj = evolve_trace(&d, &pi, &a, &times, 0.0, 1.0).unwrap();
        let want = a.trace / n as f64;
        for &v in &traj.values {
            assert!((v - want).abs() < 1e-10);
        }
    }

    #[test]
    fn value_at_zero_is_tr_a_pi() {
        let n = 80;
        let d = goe_decomp(n, 9);
        let pi = make_pi(&PiKind::HalfFilled, n).unwrap();
        let a = make_observable(
            &ObservableKind::Projector {
                subspace_dim: n / 2,
            },
            n,
        )
        .unwrap();
        let traj = evolve_trace(&d, &pi, &a, &[0.0, 1.0, 2.0], 0.0, 1.0).unwrap();
        // Tr(A Pi) = 1 for these choices
        assert!((traj.values[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn goe_trajectory_is_even_bit_exact() {
        let n = 50;
        let d = goe_decomp(n, 10);
        let pi = make_pi(&PiKind::HalfFilled, n).unwrap();
        let a = make_observable(
            &ObservableKind::Projector {
                subspace_dim: n / 2,
            },
            n,
        )
        .unwrap();
        let taus: Vec<f64> = (1..20).map(|k| 0.37 * k as f64).collect();
        let neg: Vec<f64> = taus.iter().map(|&t| -t).collect();
        let plus = evolve_trace(&d, &pi, &a, &taus, 0.0, 1.0).unwrap();
        let minus = evolve_trace(&d, &pi, &a, &neg, 0.0, 1.0).unwrap();
        for (p, m) in plus.values.iter().zip(&minus.values) {
            assert_eq!(p.to_bits(), m.to_bits());
        }
        assert_eq!(plus.max_imag_residual, 0.0);
    }

    #[test]
    fn shift_covariance_exact() {
        let n = 40;
        let d = goe_decomp(n, 11);
        let pi = make_pi(&PiKind::PureState, n).unwrap();
        let a = make_observable(
            &ObservableKind::Projector {
                subspace_dim: n / 2,
            },
            n,
        )
        .unwrap();
        let taus: Vec<f64> = (0..25).map(|k| -6.0 + 0.5 * k as f64).collect();
        let shift = 3.25;
        let shifted = evolve_trace(&d, &pi, &a, &taus, shift, 1.0).unwrap();
        let moved: Vec<f64> = taus.iter().map(|&t| t + shift).collect();
        let unshifted = evolve_trace(&d, &pi, &a, &moved, 0.0, 1.0).unwrap();
        for (x, y) in shifted.values.iter().zip(&unshifted.values) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn eigenbasis_sum_matches_direct_product() {
        for (label, d) in [("goe", goe_decomp(40, 12)), ("gue", gue_decomp(40, 13))] {
            let n = 40;
            let pi = make_pi(&PiKind::HalfFilled, n).unwrap();
            let a = make_observable(&ObservableKind::Projector { subspace_dim: 10 }, n).unwrap();
            let taus = [0.8, 2.9];
            let traj = evolve_trace(&d, &pi, &a, &taus, 0.0, 1.0).unwrap();
            for (k, &tau) in taus.iter().enumerate() {
                let u = evolve_operator(&d, tau * 0.5);
                // Tr(A U Pi U^dag)
                let mut acc = Complex64::new(0.0, 0.0);
                let pi_c = real_to_complex(&pi.matrix);
                let a_c = real_to_complex(&a.matrix);
                let rho = &u * &pi_c * u.adjoint();
                let prod = &a_c * &rho;
                for i in 0..n {
                    acc += prod[(i, i)];
                }
                assert!(
                    (acc.re - traj.values[k]).abs() < 1e-9,
                    "{label}: eigenbasis {} vs direct {}",
                    traj.values[k],
                    acc.re
                );
                assert!(acc.im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn evolve_operator_properties() {
        let d = goe_decomp(30, 14);
        let u0 = evolve_operator(&d, 0.0);
        for i in 0..30 {
            for j in 0..30 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((u0[(i, j)].re - want).abs() < 1e-12);
                assert!(u0[(i, j)].im.abs() < 1e-12);
            }
        }
        let t = 3.0 * 0.5;
        let u = evolve_operator(&d, t);
        let um = evolve_operator(&d, -t);
        let prod = &u * u.adjoint();
        for i in 0..30 {
            for j in 0..30 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)].re - want).abs() < 1e-9, "unitarity");
                assert!(prod[(i, j)].im.abs() < 1e-9);
                assert!(
                    (um[(i, j)] - u[(j, i)].conj()).norm() < 1e-12,
                    "U(-t) = U(t)^dag"
                );
            }
        }
    }

    #[test]
    fn evolve_operator_diagonal_hamiltonian() {
        let mut m = Mat::<f64>::zeros(3, 3);
        m[(0, 0)] = -0.5;
        m[(1, 1)] = 0.25;
        m[(2, 2)] = 1.5;
        let d = decompose(&Hamiltonian::Real(m)).unwrap();
        let t = 1.3;
        let u = evolve_operator(&d, t);
        for (i, &e) in [-0.5, 0.25, 1.5].iter().enumerate() {
            let want = Complex64::new((e * t).cos(), -(e * t).sin());
            assert!((u[(i, i)] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn long_time_average_equilibrium() {
        let n = 50;
        let d = goe_decomp(n, 15);
        let pi = make_pi(&PiKind::Equilibrium, n).unwrap();
        let a = make_observable(&ObservableKind::Projector { subspace_dim: 20 }, n).unwrap();
        let lta = long_time_average(&d, &pi, &a, 1).unwrap();
        assert!((lta.value - a.trace / n as f64).abs() < 1e-12);
        assert!(!lta.degenerate);
        assert!(long_time_average(&d, &pi, &a, 3).is_err());
    }

    #[test]
    fn long_time_average_matches_time_grid_average() {
        // brute-force oracle: average evolve_trace over t in [0, 200 tau_d]
        let n = 50;
        let d = goe_decomp(n, 16);
        let pi = make_pi(&PiKind::PureState, n).unwrap();
        let a = make_observable(
            &ObservableKind::Projector {
                subspace_dim: n / 2,
            },
            n,
        )
        .unwrap();
        let lta = long_time_average(&d, &pi, &a, 1).unwrap();

        let tau_d_over_tau_lambda = 2.0 * n as f64 / std::f64::consts::PI;
        let t_max = 200.0 * tau_d_over_tau_lambda;
        let m = 6000;
        let times: Vec<f64> = (0..m)
            .map(|k| (k as f64 + 0.5) * t_max / m as f64)
            .collect();
        let traj = evolve_trace(&d, &pi, &a, &times, 0.0, 1.0).unwrap();
        let grid_avg: f64 = traj.values.iter().sum::<f64>() / m as f64;
        assert!(
            (grid_avg - lta.value).abs() < 0.02 * lta.value.abs().max(0.02),
            "diagonal ensemble {} vs grid average {grid_avg}",
            lta.value
        );

        // m = 2 exceeds m = 1 squared by the resonant pair sum (both routes real)
        let lta2 = long_time_average(&d, &pi, &a, 2).unwrap();
        let grid_avg2: f64 = traj.values.iter().map(|v| v * v).sum::<f64>() / m as f64;
        assert!(
            (grid_avg2 - lta2.value).abs() < 0.02 * lta2.value.abs().max(0.02),
            "m=2 {} vs grid {grid_avg2}",
            lta2.value
        );
    }

    #[test]
    fn degenerate_spectrum_flagged() {
        let mut m = Mat::<f64>::zeros(4, 4);
        m[(0, 0)] = 1.0;
        m[(1, 1)] = 1.0;
        m[(2, 2)] = 2.0;
        m[(3, 3)] = 3.0;
        let d = decompose(&Hamiltonian::Real(m)).unwrap();
        let pi = make_pi(&PiKind::HalfFilled, 4).unwrap();
        let a = make_observable(&ObservableKind::Projector { subspace_dim: 2 }, 4).unwrap();
        let lta = long_time_average(&d, &pi, &a, 1).unwrap();
        assert!(lta.degenerate);
        // block sum includes the off-diagonal elements inside the E = 1 block
        assert!(lta.value.is_finite());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let d = goe_decomp(20, 17);
        let pi = make_pi(&PiKind::Equilibrium, 30).unwrap();
        let a = make_observable(&ObservableKind::Projector { subspace_dim: 5 }, 20).unwrap();
        assert!(evolve_trace(&d, &pi, &a, &[0.0], 0.0, 1.0).is_err());
    }

    #[test]
    fn csv_header_frozen() {
        let d = goe_decomp(10, 18);
        let pi = make_pi(&PiKind::Equilibrium, 10).unwrap();
        let a = make_observable(&ObservableKind::Projector { subspace_dim: 5 }, 10).unwrap();
        let traj = evolve_trace(&d, &pi, &a, &[0.0, 1.0], 0.0, 1.0).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t_over_tau_lambda,value,f_real,f_imag\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
