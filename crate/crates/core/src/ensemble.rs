//! GOE/GUE Hamiltonian sampling and diagonalization.
//!
//! The GOE is sampled by symmetrizing an i.i.d. Gaussian matrix,
//! `H = (G + G^T)/sqrt(2)` with `G_ij ~ N(0, lambda^2/N)`, which realizes the
//! second moments `<H_mn H_m'n'> = (lambda^2/N)(d_mm' d_nn' + d_mn' d_nm')`
//! (diagonal variance `2 lambda^2/N`, off-diagonal `lambda^2/N`). The GUE
//! draws independent real/imaginary parts of variance `lambda^2/(2N)` off the
//! diagonal and a real diagonal of variance `lambda^2/N`, so that
//! `<|H_mn|^2> = lambda^2/N`.
//!
//! Per-realization seeds are a pure function of `(master_seed, index)`
//! (splitmix64-derived), so a sweep produces bit-identical matrices no matter
//! how its realizations are scheduled across threads.

use faer::prelude::*;
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::{Result, RmtError};

/// Which Gaussian ensemble a spec refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnsembleKind {
    /// Gaussian Orthogonal Ensemble (real symmetric, time-reversal invariant).
    Goe,
    /// Gaussian Unitary Ensemble (complex Hermitian).
    Gue,
}

impl EnsembleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::Goe => "goe",
            EnsembleKind::Gue => "gue",
        }
    }
}

/// Which ensemble to draw from, its dimension and spectral scale, and the
/// master seed all realization seeds derive from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub dimension: usize,
    /// Spectral scale `lambda` (the average spectrum covers `[-2 lambda, 2 lambda]`).
    pub spectral_scale: f64,
    pub master_seed: u64,
}

impl EnsembleSpec {
    pub fn new(
        kind: EnsembleKind,
        dimension: usize,
        spectral_scale: f64,
        master_seed: u64,
    ) -> Result<Self> {
        let spec = Self {
            kind,
            dimension,
            spectral_scale,
            master_seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension < 2 {
            return Err(RmtError::InvalidSpec(format!(
                "dimension must be >= 2, got {}",
                self.dimension
            )));
        }
        if !(self.spectral_scale > 0.0) || !self.spectral_scale.is_finite() {
            return Err(RmtError::InvalidSpec(format!(
                "spectral_scale must be positive and finite, got {}",
                self.spectral_scale
            )));
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-realization seed: a pure function of `(master_seed, index)`.
pub fn realization_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master_seed) ^ splitmix64(index.wrapping_add(1)))
}

/// A sampled Hamiltonian: real symmetric (GOE) or complex Hermitian (GUE).
#[derive(Debug, Clone)]
pub enum Hamiltonian {
    Real(Mat<f64>),
    Complex(Mat<Complex64>),
}

impl Hamiltonian {
    pub fn dim(&self) -> usize {
        match self {
            Hamiltonian::Real(m) => m.nrows(),
            Hamiltonian::Complex(m) => m.nrows(),
        }
    }

    /// Largest entry magnitude, used as the Hermiticity tolerance scale.
    pub fn max_abs(&self) -> f64 {
        match self {
            Hamiltonian::Real(m) => {
                let mut v: f64 = 0.0;
                for j in 0..m.ncols() {
                    for i in 0..m.nrows() {
                        v = v.max(m[(i, j)].abs());
                    }
                }
                v
            }
            Hamiltonian::Complex(m) => {
                let mut v: f64 = 0.0;
                for j in 0..m.ncols() {
                    for i in 0..m.nrows() {
                        v = v.max(m[(i, j)].norm());
                    }
                }
                v
            }
        }
    }

    /// Max-norm deviation from (conjugate) symmetry.
    pub fn asymmetry(&self) -> f64 {
        match self {
            Hamiltonian::Real(m) => {
                let mut v: f64 = 0.0;
                for j in 0..m.ncols() {
                    for i in 0..m.nrows() {
                        v = v.max((m[(i, j)] - m[(j, i)]).abs());
                    }
                }
                v
            }
            Hamiltonian::Complex(m) => {
                let mut v: f64 = 0.0;
                for j in 0..m.ncols() {
                    for i in 0..m.nrows() {
                        v = v.max((m[(i, j)] - m[(j, i)].conj()).norm());
                    }
                }
                v
            }
        }
    }
}

/// Draw realization `index` of the ensemble. Deterministic in
/// `(spec.master_seed, index)` regardless of caller threading.
pub fn sample_hamiltonian(spec: &EnsembleSpec, index: u64) -> Result<Hamiltonian> {
    spec.validate()?;
    let n = spec.dimension;
    let lam = spec.spectral_scale;
    let mut rng = ChaCha12Rng::seed_from_u64(realization_seed(spec.master_seed, index));
    match spec.kind {
        EnsembleKind::Goe => {
            // Fill the full matrix row-major, then symmetrize.
            let sigma = lam / (n as f64).sqrt();
            let mut g = Mat::<f64>::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let z: f64 = rng.sample(StandardNormal);
                    g[(i, j)] = sigma * z;
                }
            }
            let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
            let mut h = Mat::<f64>::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let v = (g[(i, j)] + g[(j, i)]) * inv_sqrt2;
                    h[(i, j)] = v;
                    h[(j, i)] = v;
                }
            }
            Ok(Hamiltonian::Real(h))
        }
        EnsembleKind::Gue => {
            let sigma_off = lam / (2.0 * n as f64).sqrt();
            let sigma_diag = lam / (n as f64).sqrt();
            let mut h = Mat::<Complex64>::zeros(n, n);
            for i in 0..n {
                for j in 0..i {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    let z = Complex64::new(sigma_off * re, sigma_off * im);
                    h[(i, j)] = z;
                    h[(j, i)] = z.conj();
                }
                let d: f64 = rng.sample(StandardNormal);
                h[(i, i)] = Complex64::new(sigma_diag * d, 0.0);
            }
            Ok(Hamiltonian::Complex(h))
        }
    }
}

/// Eigenvector matrix of a decomposition: orthogonal (GOE) or unitary (GUE).
#[derive(Debug, Clone)]
pub enum EigenBasis {
    Orthogonal(Mat<f64>),
    Unitary(Mat<Complex64>),
}

/// Eigenvalues (ascending) and eigenvectors of one sampled Hamiltonian.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub basis: EigenBasis,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_complex(&self) -> bool {
        matches!(self.basis, EigenBasis::Unitary(_))
    }

    /// Max-norm residual of `V^T V - I` (conjugate transpose for GUE).
    pub fn orthogonality_residual(&self) -> f64 {
        match &self.basis {
            EigenBasis::Orthogonal(v) => {
                let p = v.transpose() * v;
                max_abs_minus_identity_real(&p)
            }
            EigenBasis::Unitary(v) => {
                let p = v.adjoint() * v;
                let n = p.nrows();
                let mut worst: f64 = 0.0;
                for j in 0..n {
                    for i in 0..n {
                        let want = if i == j { 1.0 } else { 0.0 };
                        worst = worst.max((p[(i, j)] - want).norm());
                    }
                }
                worst
            }
        }
    }

    /// Max-norm residual of `sum_a V_:a E_a V_:a^dag - H`.
    pub fn reconstruction_residual(&self, h: &Hamiltonian) -> f64 {
        match (&self.basis, h) {
            (EigenBasis::Orthogonal(v), Hamiltonian::Real(hm)) => {
                let n = v.nrows();
                let mut scaled = Mat::<f64>::zeros(n, n);
                for a in 0..n {
                    let e = self.eigenvalues[a];
                    for i in 0..n {
                        scaled[(i, a)] = v[(i, a)] * e;
                    }
                }
                let rec = &scaled * v.transpose();
                let mut worst: f64 = 0.0;
                for j in 0..n {
                    for i in 0..n {
                        worst = worst.max((rec[(i, j)] - hm[(i, j)]).abs());
                    }
                }
                worst
            }
            (EigenBasis::Unitary(v), Hamiltonian::Complex(hm)) => {
                let n = v.nrows();
                let mut scaled = Mat::<Complex64>::zeros(n, n);
                for a in 0..n {
                    let e = self.eigenvalues[a];
                    for i in 0..n {
                        scaled[(i, a)] = v[(i, a)] * e;
                    }
                }
                let rec = &scaled * v.adjoint();
                let mut worst: f64 = 0.0;
                for j in 0..n {
                    for i in 0..n {
                        worst = worst.max((rec[(i, j)] - hm[(i, j)]).norm());
                    }
                }
                worst
            }
            _ => f64::INFINITY,
        }
    }
}

/// Relative Hermiticity tolerance for [`decompose`], against the largest
/// entry magnitude (the spec states it against `lambda`, which a bare matrix
/// does not carry; the largest entry of a Gaussian-ensemble matrix is a few
/// `lambda/sqrt(N)`, so this check is the stricter one).
pub const HERMITICITY_RTOL: f64 = 1e-8;

/// Diagonalize a Hermitian matrix; eigenvalues ascending, eigenvector columns
/// permuted consistently.
pub fn decompose(h: &Hamiltonian) -> Result<SpectralDecomposition> {
    crate::init_linalg();
    let scale = h.max_abs().max(1.0);
    let asym = h.asymmetry();
    let tol = HERMITICITY_RTOL * scale;
    if asym > tol {
        return Err(RmtError::NonHermitian {
            asymmetry: asym,
            tolerance: tol,
        });
    }
    match h {
        Hamiltonian::Real(m) => {
            let evd = m
                .self_adjoint_eigen(faer::Side::Lower)
                .map_err(|_| RmtError::EigenFailed)?;
            let n = m.nrows();
            let raw: Vec<f64> = (0..n).map(|i| evd.S().column_vector()[i]).collect();
            if raw.iter().any(|v| !v.is_finite()) {
                return Err(RmtError::NonFinite("eigenvalues".into()));
            }
            let order = sort_order(&raw);
            let eigenvalues: Vec<f64> = order.iter().map(|&k| raw[k]).collect();
            let u = evd.U();
            let mut vecs = Mat::<f64>::zeros(n, n);
            for (dst, &src) in order.iter().enumerate() {
                for i in 0..n {
                    vecs[(i, dst)] = u[(i, src)];
                }
            }
            Ok(SpectralDecomposition {
                eigenvalues,
                basis: EigenBasis::Orthogonal(vecs),
            })
        }
        Hamiltonian::Complex(m) => {
            let evd = m
                .self_adjoint_eigen(faer::Side::Lower)
                .map_err(|_| RmtError::EigenFailed)?;
            let n = m.nrows();
            let raw: Vec<f64> = (0..n).map(|i| evd.S().column_vector()[i].re).collect();
            if raw.iter().any(|v| !v.is_finite()) {
                return Err(RmtError::NonFinite("eigenvalues".into()));
            }
            let order = sort_order(&raw);
            let eigenvalues: Vec<f64> = order.iter().map(|&k| raw[k]).collect();
            let u = evd.U();
            let mut vecs = Mat::<Complex64>::zeros(n, n);
            for (dst, &src) in order.iter().enumerate() {
                for i in 0..n {
                    vecs[(i, dst)] = u[(i, src)];
                }
            }
            Ok(SpectralDecomposition {
                eigenvalues,
                basis: EigenBasis::Unitary(vecs),
            })
        }
    }
}

/// Eigenvalues only (ascending); cheaper than [`decompose`] when eigenvectors
/// are not needed (form-factor statistics).
pub fn eigenvalues_only(h: &Hamiltonian) -> Result<Vec<f64>> {
    crate::init_linalg();
    match h {
        Hamiltonian::Real(m) => {
            let mut ev = m
                .self_adjoint_eigenvalues(faer::Side::Lower)
                .map_err(|_| RmtError::EigenFailed)?;
            ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
            Ok(ev)
        }
        Hamiltonian::Complex(_) => Ok(decompose(h)?.eigenvalues),
    }
}

fn sort_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    // Stable sort keeps solver order for (numerically) degenerate eigenvalues.
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    order
}

fn max_abs_minus_identity_real(p: &Mat<f64>) -> f64 {
    let n = p.nrows();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for i in 0..n {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p[(i, j)] - want).abs());
        }
    }
    worst
}

/// Eigenvalue histogram over `[lo, hi)`, density normalized so the total
/// mass equals the number of states `N` when all eigenvalues fall in range.
#[derive(Debug, Clone)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// `counts / (realizations * bin_width)`; integrates to `N`.
    pub density: Vec<f64>,
    pub realizations: usize,
}

impl Histogram {
    pub fn bin_center(&self, i: usize) -> f64 {
        0.5 * (self.edges[i] + self.edges[i + 1])
    }
}

/// Histogram the eigenvalues of a collection of decompositions.
///
/// Density comparisons should use a few dozen bins; the only hard
/// requirement here is a nonempty input and at least one bin.
pub fn empirical_density(
    decomps: &[SpectralDecomposition],
    bins: usize,
    lo: f64,
    hi: f64,
) -> Result<Histogram> {
    let spectra: Vec<&[f64]> = decomps.iter().map(|d| d.eigenvalues.as_slice()).collect();
    histogram_spectra(&spectra, bins, lo, hi)
}

/// Same histogram over bare eigenvalue lists (one per realization).
pub fn histogram_spectra(spectra: &[&[f64]], bins: usize, lo: f64, hi: f64) -> Result<Histogram> {
    if spectra.is_empty() {
        return Err(RmtError::InvalidInput(
            "empirical_density: no spectra".into(),
        ));
    }
    if bins == 0 {
        return Err(RmtError::InvalidInput(
            "empirical_density: bins must be >= 1".into(),
        ));
    }
    if !(hi > lo) {
        return Err(RmtError::InvalidInput(
            "empirical_density: empty range".into(),
        ));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for spectrum in spectra {
        for &e in *spectrum {
            if e >= lo && e < hi {
                let mut k = ((e - lo) / width) as usize;
                if k >= bins {
                    k = bins - 1;
                }
                counts[k] += 1;
            }
        }
    }
    let m = spectra.len() as f64;
    let density = counts.iter().map(|&c| c as f64 / (m * width)).collect();
    let edges = (0..=bins).map(|k| lo + k as f64 * width).collect();
    Ok(Histogram {
        edges,
        counts,
        density,
        realizations: spectra.len(),
    })
}

/// Mean level spacing at the spectrum center, `d = pi lambda / N`.
pub fn mean_spacing(dimension: usize, spectral_scale: f64) -> Result<f64> {
    if dimension < 2 {
        return Err(RmtError::InvalidSpec(format!(
            "dimension must be >= 2, got {dimension}"
        )));
    }
    if !(spectral_scale > 0.0) {
        return Err(RmtError::InvalidSpec(format!(
            "spectral_scale must be positive, got {spectral_scale}"
        )));
    }
    Ok(std::f64::consts::PI * spectral_scale / dimension as f64)
}
