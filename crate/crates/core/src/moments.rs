//! Monte Carlo estimators for the low moments of `U(t)` and for the
//! mean/variance of `Tr(A rho(t))` across realizations.
//!
//! Estimator conventions:
//! - plain moments are sample means over realizations (unbiased);
//! - correlated (cumulant-style) parts subtract products of lower moments
//!   estimated on an *independent* batch of realizations, so the subtraction
//!   introduces no correlation bias;
//! - standard errors combine the sample scatter of the main batch with the
//!   propagated scatter of the subtraction batch;
//! - the realization loop is the parallel axis; per-realization results are
//!   collected by index and reduced in index order, so estimates are
//!   bit-identical for any worker count.
//!
//! The Monte Carlo averages here are over the full ensemble (eigenvectors
//! and eigenvalues together): Gaussian ensembles cannot hold a spectrum
//! fixed while resampling eigenvectors, and eigenvector/eigenvalue
//! independence makes the combined averages the ones the mean and
//! correlation predictions consume.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::ensemble::{
    decompose, sample_hamiltonian, EigenBasis, EnsembleSpec, SpectralDecomposition,
};
use crate::evolution::TraceEvaluator;
use crate::states::{Observable, StatOperator};
use crate::{Result, RmtError};

/// One estimated moment of the evolution operator.
#[derive(Debug, Clone)]
pub struct MomentEstimate {
    /// Which moment (human-readable, e.g. `first`, `second_uu_star`).
    pub target: String,
    /// Flattened index tuple (mu, nu, mu', nu', ...).
    pub indices: Vec<usize>,
    /// Physical time.
    pub t: f64,
    pub estimate: Complex64,
    pub std_error: f64,
    pub realizations: usize,
}

/// Conjugation pattern of the second moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondMomentPattern {
    /// `<U U>` (correlated part carries `f(2t)`).
    UU,
    /// `<U U*>` (correlated part is time-independent).
    UUStar,
}

/// `U_{mu nu}(t)` for one realization, `O(N)` given the decomposition.
pub fn u_element(decomp: &SpectralDecomposition, t: f64, mu: usize, nu: usize) -> Complex64 {
    let n = decomp.dim();
    assert!(mu < n && nu < n, "matrix element indices out of range");
    match &decomp.basis {
        EigenBasis::Orthogonal(o) => u_element_raw(o, &decomp.eigenvalues, t, mu, nu),
        EigenBasis::Unitary(v) => {
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for a in 0..n {
                let w = v[(mu, a)] * v[(nu, a)].conj();
                let phase = decomp.eigenvalues[a] * t;
                let e = Complex64::new(phase.cos(), -phase.sin());
                let z = w * e;
                re += z.re;
                im += z.im;
            }
            Complex64::new(re, im)
        }
    }
}

/// `sum_a V_{mu a} V_{nu a} exp(-i E_a t)` for an arbitrary real frame `V`
/// (the frame need not be orthogonal; the Gaussian eigenvector model uses
/// this too).
fn u_element_raw(
    o: &faer::Mat<f64>,
    eigenvalues: &[f64],
    t: f64,
    mu: usize,
    nu: usize,
) -> Complex64 {
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for (a, &e) in eigenvalues.iter().enumerate() {
        let w = o[(mu, a)] * o[(nu, a)];
        let phase = e * t;
        re += w * phase.cos();
        im -= w * phase.sin();
    }
    Complex64::new(re, im)
}

fn decompositions(
    spec: &EnsembleSpec,
    offset: u64,
    count: usize,
) -> Result<Vec<SpectralDecomposition>> {
    (0..count as u64)
        .into_par_iter()
        .map(|r| decompose(&sample_hamiltonian(spec, offset + r)?))
        .collect()
}

fn mean_and_se(values: &[Complex64]) -> (Complex64, f64) {
    let m = values.len() as f64;
    let mut mean = Complex64::new(0.0, 0.0);
    for v in values {
        mean += v;
    }
    mean /= m;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let mut var = 0.0;
    for v in values {
        var += (v - mean).norm_sqr();
    }
    var /= m - 1.0;
    (mean, (var / m).sqrt())
}

/// Ensemble average of `U_{mu nu}(t)` over `M` realizations.
///
/// Expected `delta_{mu nu} g(t / tau_lambda)` after the full average.
pub fn estimate_first_moment(
    spec: &EnsembleSpec,
    t: f64,
    mu: usize,
    nu: usize,
    realizations: usize,
) -> Result<MomentEstimate> {
    if realizations < 100 {
        return Err(RmtError::InvalidInput(format!(
            "first-moment estimator needs M >= 100, got {realizations}"
        )));
    }
    let decomps = decompositions(spec, 0, realizations)?;
    let samples: Vec<Complex64> = decomps.iter().map(|d| u_element(d, t, mu, nu)).collect();
    let (estimate, std_error) = mean_and_se(&samples);
    Ok(MomentEstimate {
        target: "first".into(),
        indices: vec![mu, nu],
        t,
        estimate,
        std_error,
        realizations,
    })
}

/// Correlated part of the second moment, `<U U>_corr` or `<U U*>_corr`,
/// with the first-moment products subtracted from an independent batch.
pub fn estimate_second_moment_corr(
    spec: &EnsembleSpec,
    t: f64,
    indices: (usize, usize, usize, usize),
    pattern: SecondMomentPattern,
    realizations: usize,
) -> Result<MomentEstimate> {
    if realizations < 100 {
        return Err(RmtError::InvalidInput(format!(
            "second-moment estimator needs M >= 100, got {realizations}"
        )));
    }
    let (mu, nu, mup, nup) = indices;
    let m_sub = realizations / 2;
    let m_main = realizations - m_sub;

    // subtraction batch: first moments
    let sub = decompositions(spec, 1_000_000_000, m_sub)?;
    let u1_sub: Vec<Complex64> = sub.iter().map(|d| u_element(d, t, mu, nu)).collect();
    let u2_sub: Vec<Complex64> = sub
        .iter()
        .map(|d| {
            let u = u_element(d, t, mup, nup);
            match pattern {
                SecondMomentPattern::UU => u,
                SecondMomentPattern::UUStar => u.conj(),
            }
        })
        .collect();
    let (m1, se1) = mean_and_se(&u1_sub);
    let (m2, se2) = mean_and_se(&u2_sub);

    // main batch: the product
    let main = decompositions(spec, 0, m_main)?;
    let prods: Vec<Complex64> = main
        .iter()
        .map(|d| {
            let a = u_element(d, t, mu, nu);
            let b = u_element(d, t, mup, nup);
            match pattern {
                SecondMomentPattern::UU => a * b,
                SecondMomentPattern::UUStar => a * b.conj(),
            }
        })
        .collect();
    let (prod_mean, prod_se) = mean_and_se(&prods);

    let estimate = prod_mean - m1 * m2;
    // first-order error propagation for the subtracted product
    let std_error =
        (prod_se.powi(2) + (m2.norm() * se1).powi(2) + (m1.norm() * se2).powi(2)).sqrt();
    Ok(MomentEstimate {
        target: match pattern {
            SecondMomentPattern::UU => "second_uu".into(),
            SecondMomentPattern::UUStar => "second_uu_star".into(),
        },
        indices: vec![mu, nu, mup, nup],
        t,
        estimate,
        std_error,
        realizations,
    })
}

/// Totally correlated third moment (two `U`, one `U*`) or fourth moment
/// (bilinear, two `U`, two `U*`) with all lower-moment subtractions taken
/// from an independent batch.
pub fn estimate_higher_corr(
    spec: &EnsembleSpec,
    t: f64,
    order: u32,
    indices: &[(usize, usize)],
    realizations: usize,
) -> Result<MomentEstimate> {
    if order != 3 && order != 4 {
        return Err(RmtError::InvalidInput(format!(
            "order must be 3 or 4, got {order}"
        )));
    }
    if indices.len() != order as usize {
        return Err(RmtError::DimensionMismatch {
            context: "higher-moment index tuple",
            got: indices.len(),
            expected: order as usize,
        });
    }
    if realizations < 1000 {
        return Err(RmtError::InvalidInput(format!(
            "order-{order} estimator needs M >= 1000, got {realizations}"
        )));
    }
    let m_sub = realizations / 2;
    let m_main = realizations - m_sub;
    let k = order as usize;

    // factor extractor: first (order - 2) factors are U, the rest U*
    // (order 3: U U U*; order 4: U U U* U*)
    let conj_from = k - (k / 2);
    let factors = |d: &SpectralDecomposition| -> Vec<Complex64> {
        indices
            .iter()
            .enumerate()
            .map(|(i, &(mu, nu))| {
                let u = u_element(d, t, mu, nu);
                if i >= conj_from {
                    u.conj()
                } else {
                    u
                }
            })
            .collect()
    };

    let sub = decompositions(spec, 2_000_000_000, m_sub)?;
    let sub_factors: Vec<Vec<Complex64>> = sub.iter().map(|d| factors(d)).collect();
    let main = decompositions(spec, 0, m_main)?;
    let main_factors: Vec<Vec<Complex64>> = main.iter().map(|d| factors(d)).collect();

    // means of single factors and of sub-products on the subtraction batch
    let single = |i: usize| -> Complex64 {
        let vals: Vec<Complex64> = sub_factors.iter().map(|f| f[i]).collect();
        mean_and_se(&vals).0
    };
    let pair = |i: usize, j: usize| -> Complex64 {
        let vals: Vec<Complex64> = sub_factors.iter().map(|f| f[i] * f[j]).collect();
        mean_and_se(&vals).0
    };
    let triple = |i: usize, j: usize, l: usize| -> Complex64 {
        let vals: Vec<Complex64> = sub_factors.iter().map(|f| f[i] * f[j] * f[l]).collect();
        mean_and_se(&vals).0
    };

    let top_vals: Vec<Complex64> = main_factors
        .iter()
        .map(|f| f.iter().copied().product::<Complex64>())
        .collect();
    let (top, top_se) = mean_and_se(&top_vals);

    let estimate = if order == 3 {
        // k(1,2,3) = E123 - E1 E23 - E2 E13 - E3 E12 + 2 E1 E2 E3
        top - single(0) * pair(1, 2) - single(1) * pair(0, 2) - single(2) * pair(0, 1)
            + 2.0 * single(0) * single(1) * single(2)
    } else {
        // k(1,2,3,4) = E1234 - sum_4 E_i E_jkl - sum_3 E_ij E_kl
        //            + 2 sum_6 E_i E_j E_kl - 6 E1 E2 E3 E4
        let e1234 = top;
        let mut acc = e1234;
        acc -= single(0) * triple(1, 2, 3);
        acc -= single(1) * triple(0, 2, 3);
        acc -= single(2) * triple(0, 1, 3);
        acc -= single(3) * triple(0, 1, 2);
        acc -= pair(0, 1) * pair(2, 3);
        acc -= pair(0, 2) * pair(1, 3);
        acc -= pair(0, 3) * pair(1, 2);
        acc += 2.0
            * (single(0) * single(1) * pair(2, 3)
                + single(0) * single(2) * pair(1, 3)
                + single(0) * single(3) * pair(1, 2)
                + single(1) * single(2) * pair(0, 3)
                + single(1) * single(3) * pair(0, 2)
                + single(2) * single(3) * pair(0, 1));
        acc -= 6.0 * single(0) * single(1) * single(2) * single(3);
        acc
    };

    Ok(MomentEstimate {
        target: format!("order{order}_totally_correlated"),
        indices: indices.iter().flat_map(|&(a, b)| [a, b]).collect(),
        t,
        estimate,
        // the top-moment scatter dominates; subtraction terms are products of
        // near-zero means for the index patterns of interest
        std_error: top_se,
        realizations,
    })
}

/// Variance-reduced cyclic cumulant: the order-3 estimator averaged over the
/// disjoint cyclic tuples `(3q, 3q+1, 3q+2)` (order 4 analogously), one
/// average per realization. Used for the `1/N^2`, `1/N^3` scaling checks,
/// where a single tuple would drown in noise.
pub fn cyclic_cumulant_averaged(
    spec: &EnsembleSpec,
    t: f64,
    order: u32,
    realizations: usize,
) -> Result<MomentEstimate> {
    let mut out = cyclic_cumulants_streaming(spec, &[(order, t)], realizations)?;
    Ok(out.remove(0))
}

/// Cyclic cumulants in the independent-Gaussian eigenvector model: the
/// frame entries are drawn i.i.d. zero-centered with variance `1/N` (the
/// stated large-`N` eigenvector statistics), independent of a spectrum
/// sampled from the ensemble.
///
/// This is the statistical model in which the totally-correlated moment
/// contraction algebra holds with its nominal prefactors (`f(t)/N^2` for the
/// cyclic third moment, `1/N^3` for the bilinear cyclic fourth moment). The
/// exact ensemble (Haar-orthogonal eigenvectors) carries orthogonality
/// corrections of the *same* order that cancel the leading fourth-moment
/// term at times below the dephasing scale; the acceptance suite measures
/// both and records the contrast.
pub fn cyclic_cumulants_gaussian_model(
    spec: &EnsembleSpec,
    targets: &[(u32, f64)],
    realizations: usize,
) -> Result<Vec<MomentEstimate>> {
    use rand::prelude::*;
    use rand_distr::StandardNormal;
    for &(order, _) in targets {
        if order != 3 && order != 4 {
            return Err(RmtError::InvalidInput(format!(
                "order must be 3 or 4, got {order}"
            )));
        }
    }
    let n = spec.dimension;
    let per_real: Vec<Vec<Complex64>> = (0..realizations as u64)
        .into_par_iter()
        .map(|r| -> Result<Vec<Complex64>> {
            let ev = crate::ensemble::eigenvalues_only(&sample_hamiltonian(spec, r)?)?;
            // independent frame stream, decoupled from the spectrum stream
            let seed = crate::ensemble::realization_seed(spec.master_seed ^ 0xD5D5_D5D5, r);
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let scale = 1.0 / (n as f64).sqrt();
            let mut frame = faer::Mat::<f64>::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let z: f64 = rng.sample(StandardNormal);
                    frame[(i, j)] = scale * z;
                }
            }
            let mut out = Vec::with_capacity(targets.len());
            for &(order, t) in targets {
                let k = order as usize;
                let tuples = n / k;
                let mut acc = Complex64::new(0.0, 0.0);
                for q in 0..tuples {
                    let base = k * q;
                    let mut prod = Complex64::new(1.0, 0.0);
                    for i in 0..k {
                        let mu = base + i;
                        let nu = base + (i + 1) % k;
                        let u = u_element_raw(&frame, &ev, t, mu, nu);
                        prod *= if i >= k - k / 2 { u.conj() } else { u };
                    }
                    acc += prod;
                }
                out.push(acc / tuples as f64);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(targets
        .iter()
        .enumerate()
        .map(|(j, &(order, t))| {
            let samples: Vec<Complex64> = per_real.iter().map(|row| row[j]).collect();
            let (estimate, std_error) = mean_and_se(&samples);
            MomentEstimate {
                target: format!("order{order}_cyclic_gaussian_model"),
                indices: (0..order as usize).collect(),
                t,
                estimate,
                std_error,
                realizations,
            }
        })
        .collect())
}

/// Streaming variant of [`cyclic_cumulant_averaged`]: one decomposition per
/// realization, evaluated for several `(order, t)` targets at once.
pub fn cyclic_cumulants_streaming(
    spec: &EnsembleSpec,
    targets: &[(u32, f64)],
    realizations: usize,
) -> Result<Vec<MomentEstimate>> {
    for &(order, _) in targets {
        if order != 3 && order != 4 {
            return Err(RmtError::InvalidInput(format!(
                "order must be 3 or 4, got {order}"
            )));
        }
        if spec.dimension / order as usize == 0 {
            return Err(RmtError::InvalidSpec(format!(
                "dimension {} too small for order {order}",
                spec.dimension
            )));
        }
    }
    let per_real: Vec<Vec<Complex64>> = (0..realizations as u64)
        .into_par_iter()
        .map(|r| -> Result<Vec<Complex64>> {
            let d = decompose(&sample_hamiltonian(spec, r)?)?;
            let mut out = Vec::with_capacity(targets.len());
            for &(order, t) in targets {
                let k = order as usize;
                let tuples = spec.dimension / k;
                let mut acc = Complex64::new(0.0, 0.0);
                for q in 0..tuples {
                    let base = k * q;
                    let mut prod = Complex64::new(1.0, 0.0);
                    for i in 0..k {
                        let mu = base + i;
                        let nu = base + (i + 1) % k;
                        let u = u_element(&d, t, mu, nu);
                        prod *= if i >= k - k / 2 { u.conj() } else { u };
                    }
                    acc += prod;
                }
                out.push(acc / tuples as f64);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(targets
        .iter()
        .enumerate()
        .map(|(j, &(order, t))| {
            let samples: Vec<Complex64> = per_real.iter().map(|row| row[j]).collect();
            let (estimate, std_error) = mean_and_se(&samples);
            MomentEstimate {
                target: format!("order{order}_cyclic_averaged"),
                indices: (0..order as usize).collect(),
                t,
                estimate,
                std_error,
                realizations,
            }
        })
        .collect())
}

/// Per-time mean and variance of `Tr(A rho(t))` across realizations.
#[derive(Debug, Clone)]
pub struct TraceStats {
    /// Times in units of `tau_lambda`.
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    /// Unbiased sample variance across realizations.
    pub variance: Vec<f64>,
    /// Standard error of the mean.
    pub se_mean: Vec<f64>,
    /// Standard error of the variance (Gaussian approximation,
    /// `var * sqrt(2/(M-1))`).
    pub se_variance: Vec<f64>,
    pub realizations: usize,
}

/// Sample `M` realizations and accumulate mean/variance of the trace on the
/// given grid (times in `tau_lambda` units, shift in the same units).
/// Variance estimates below `M = 50` are too noisy to gate on, so smaller
/// sweeps are rejected.
pub fn estimate_mean_and_variance_of_trace(
    spec: &EnsembleSpec,
    pi: &StatOperator,
    a: &Observable,
    times_tau: &[f64],
    shift_tau: f64,
    realizations: usize,
) -> Result<TraceStats> {
    if realizations < 50 {
        return Err(RmtError::InvalidInput(format!(
            "trace statistics need M >= 50, got {realizations}"
        )));
    }
    let per_real: Vec<Vec<f64>> = (0..realizations as u64)
        .into_par_iter()
        .map(|r| -> Result<Vec<f64>> {
            let d = decompose(&sample_hamiltonian(spec, r)?)?;
            let eval = TraceEvaluator::new(&d, pi, a, spec.spectral_scale)?;
            Ok(eval.values(times_tau, shift_tau).0)
        })
        .collect::<Result<Vec<_>>>()?;

    let m = realizations as f64;
    let nt = times_tau.len();
    let mut mean = vec![0.0; nt];
    for row in &per_real {
        for (k, &v) in row.iter().enumerate() {
            mean[k] += v;
        }
    }
    for v in &mut mean {
        *v /= m;
    }
    let mut variance = vec![0.0; nt];
    for row in &per_real {
        for (k, &v) in row.iter().enumerate() {
            let d = v - mean[k];
            variance[k] += d * d;
        }
    }
    for v in &mut variance {
        *v /= m - 1.0;
    }
    let se_mean = variance.iter().map(|&v| (v / m).sqrt()).collect();
    let se_variance = variance
        .iter()
        .map(|&v| v * (2.0 / (m - 1.0)).sqrt())
        .collect();
    Ok(TraceStats {
        times: times_tau.to_vec(),
        mean,
        variance,
        se_mean,
        se_variance,
        realizations,
    })
}
