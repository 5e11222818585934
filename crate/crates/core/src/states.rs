//! Statistical operators `Pi` and test observables `A`.
//!
//! Both live in the fixed basis; all randomness sits in the evolution
//! operator. The four canonical `Pi` constructions (equilibrium,
//! half-filled, pure state, power law) have `Tr Pi^2 = 1/k` exactly, with
//! `k` the rank. Power-law weights are renormalized to unit trace (the bare
//! `N^-alpha` weights miss unit trace when `N^alpha` is not an integer),
//! which makes them uniform `1/k` over the occupied block; the half-filled
//! case with odd `N` gets the same treatment.

use faer::prelude::*;

use crate::{Result, RmtError};

/// Recipe for a statistical operator.
#[derive(Debug, Clone)]
pub enum PiKind {
    /// `pi_k = 1/N` for all k: statistical equilibrium at infinite temperature.
    Equilibrium,
    /// `pi_k = 1/floor(N/2)` on the lower half of the basis, zero above.
    HalfFilled,
    /// Rank one: `pi_1 = 1`, rest zero.
    PureState,
    /// `pi_k = 1/k` with `k = floor(N^alpha)`, `0 < alpha < 1`.
    PowerLaw { alpha: f64 },
    /// Explicit eigenvalues, optionally in a supplied orthonormal frame
    /// (columns); defaults to the computational basis.
    Custom {
        eigenvalues: Vec<f64>,
        basis: Option<Mat<f64>>,
    },
}

impl PiKind {
    pub fn label(&self) -> String {
        match self {
            PiKind::Equilibrium => "equilibrium".into(),
            PiKind::HalfFilled => "half_filled".into(),
            PiKind::PureState => "pure_state".into(),
            PiKind::PowerLaw { alpha } => format!("power_law(alpha={alpha})"),
            PiKind::Custom { .. } => "custom".into(),
        }
    }
}

/// Hermitian statistical operator with unit trace.
#[derive(Debug, Clone)]
pub struct StatOperator {
    pub matrix: Mat<f64>,
    /// Eigenvalues in construction order.
    pub eigenvalues: Vec<f64>,
    /// Number of nonzero eigenvalues.
    pub rank: usize,
    pub label: String,
}

impl StatOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `Tr Pi` (construction keeps this at 1 up to rounding).
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)]).sum()
    }

    /// Purity `Tr Pi^2 = sum pi_k^2`.
    pub fn purity(&self) -> f64 {
        self.eigenvalues.iter().map(|p| p * p).sum()
    }

    pub fn is_equilibrium(&self) -> bool {
        let n = self.dim() as f64;
        self.eigenvalues
            .iter()
            .all(|&p| (p - 1.0 / n).abs() < 1e-14)
    }
}

/// Build a statistical operator of the requested kind and dimension.
pub fn make_pi(kind: &PiKind, n: usize) -> Result<StatOperator> {
    if n < 1 {
        return Err(RmtError::InvalidStatOperator(
            "dimension must be >= 1".into(),
        ));
    }
    let label = kind.label();
    let (weights, basis): (Vec<f64>, Option<&Mat<f64>>) = match kind {
        PiKind::Equilibrium => ((0..n).map(|_| 1.0 / n as f64).collect(), None),
        PiKind::HalfFilled => {
            let k = (n / 2).max(1);
            (block_weights(n, k), None)
        }
        PiKind::PureState => (block_weights(n, 1), None),
        PiKind::PowerLaw { alpha } => {
            if !(*alpha > 0.0 && *alpha < 1.0) {
                return Err(RmtError::InvalidStatOperator(format!(
                    "power_law alpha must be in (0, 1), got {alpha}"
                )));
            }
            let k = ((n as f64).powf(*alpha).floor() as usize).clamp(1, n);
            (block_weights(n, k), None)
        }
        PiKind::Custom { eigenvalues, basis } => {
            if eigenvalues.len() != n {
                return Err(RmtError::DimensionMismatch {
                    context: "custom Pi eigenvalues",
                    got: eigenvalues.len(),
                    expected: n,
                });
            }
            if eigenvalues.iter().any(|&p| p < 0.0 || !p.is_finite()) {
                return Err(RmtError::InvalidStatOperator(
                    "custom Pi eigenvalues must be nonnegative and finite".into(),
                ));
            }
            let sum: f64 = eigenvalues.iter().sum();
            if (sum - 1.0).abs() > 1e-10 {
                return Err(RmtError::InvalidStatOperator(format!(
                    "custom Pi eigenvalues must sum to 1 (got {sum})"
                )));
            }
            // exact unit trace after the tolerance gate
            (
                eigenvalues.iter().map(|p| p / sum).collect(),
                basis.as_ref(),
            )
        }
    };

    let matrix = match basis {
        None => {
            let mut m = Mat::<f64>::zeros(n, n);
            for (i, &w) in weights.iter().enumerate() {
                m[(i, i)] = w;
            }
            m
        }
        Some(b) => {
            if b.nrows() != n || b.ncols() != n {
                return Err(RmtError::DimensionMismatch {
                    context: "custom Pi basis",
                    got: b.nrows(),
                    expected: n,
                });
            }
            let p = b.transpose() * b;
            let mut worst: f64 = 0.0;
            for j in 0..n {
                for i in 0..n {
                    let want = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((p[(i, j)] - want).abs());
                }
            }
            if worst > 1e-10 * n as f64 {
                return Err(RmtError::InvalidStatOperator(format!(
                    "custom Pi basis is not orthonormal (residual {worst:.3e})"
                )));
            }
            let mut scaled = Mat::<f64>::zeros(n, n);
            for (a, &w) in weights.iter().enumerate() {
                for i in 0..n {
                    scaled[(i, a)] = b[(i, a)] * w;
                }
            }
            &scaled * b.transpose()
        }
    };

    let rank = weights.iter().filter(|&&w| w > 0.0).count();
    Ok(StatOperator {
        matrix,
        eigenvalues: weights,
        rank,
        label,
    })
}

fn block_weights(n: usize, k: usize) -> Vec<f64> {
    let w = 1.0 / k as f64;
    (0..n).map(|i| if i < k { w } else { 0.0 }).collect()
}

/// Recipe for a test observable.
#[derive(Debug, Clone)]
pub enum ObservableKind {
    /// Diagonal matrix with the given entries.
    Diagonal { values: Vec<f64> },
    /// Projector onto the first `m` basis states.
    Projector { subspace_dim: usize },
    /// Near-diagonal family `A_j = a0 + spread * u_j` with a fixed
    /// equidistributed sequence `u_j` in [-1, 1]; `spread ~ 1/N` realizes
    /// diagonal elements differing by terms of order `1/N`.
    NearDiagonal { a0: f64, spread: f64 },
    /// Explicit symmetric matrix.
    Custom { matrix: Mat<f64> },
}

impl ObservableKind {
    pub fn label(&self) -> String {
        match self {
            ObservableKind::Diagonal { .. } => "diagonal".into(),
            ObservableKind::Projector { subspace_dim } => format!("projector(m={subspace_dim})"),
            ObservableKind::NearDiagonal { a0, spread } => {
                format!("near_diagonal(a0={a0},spread={spread})")
            }
            ObservableKind::Custom { .. } => "custom".into(),
        }
    }
}

/// Hermitian test operator in the fixed basis with cached traces.
#[derive(Debug, Clone)]
pub struct Observable {
    pub matrix: Mat<f64>,
    pub trace: f64,
    pub trace_sq: f64,
    pub label: String,
}

impl Observable {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Deterministic equidistributed sequence on [-1, 1] (golden-ratio rotation).
pub fn near_diagonal_offset(j: usize) -> f64 {
    const PHI_CONJ: f64 = 0.618_033_988_749_894_9;
    let frac = ((j + 1) as f64 * PHI_CONJ).fract();
    2.0 * frac - 1.0
}

/// Build an observable of the requested kind and dimension.
pub fn make_observable(kind: &ObservableKind, n: usize) -> Result<Observable> {
    if n < 1 {
        return Err(RmtError::InvalidObservable("dimension must be >= 1".into()));
    }
    let label = kind.label();
    let matrix = match kind {
        ObservableKind::Diagonal { values } => {
            if values.len() != n {
                return Err(RmtError::DimensionMismatch {
                    context: "diagonal observable values",
                    got: values.len(),
                    expected: n,
                });
            }
            diag(values)
        }
        ObservableKind::Projector { subspace_dim } => {
            if *subspace_dim > n {
                return Err(RmtError::DimensionMismatch {
                    context: "projector subspace",
                    got: *subspace_dim,
                    expected: n,
                });
            }
            let vals: Vec<f64> = (0..n)
                .map(|i| if i < *subspace_dim { 1.0 } else { 0.0 })
                .collect();
            diag(&vals)
        }
        ObservableKind::NearDiagonal { a0, spread } => {
            if *spread < 0.0 {
                return Err(RmtError::InvalidObservable("spread must be >= 0".into()));
            }
            let vals: Vec<f64> = (0..n)
                .map(|j| a0 + spread * near_diagonal_offset(j))
                .collect();
            diag(&vals)
        }
        ObservableKind::Custom { matrix } => {
            if matrix.nrows() != n || matrix.ncols() != n {
                return Err(RmtError::DimensionMismatch {
                    context: "custom observable",
                    got: matrix.nrows(),
                    expected: n,
                });
            }
            let mut scale: f64 = 0.0;
            let mut asym: f64 = 0.0;
            for j in 0..n {
                for i in 0..n {
                    scale = scale.max(matrix[(i, j)].abs());
                    asym = asym.max((matrix[(i, j)] - matrix[(j, i)]).abs());
                }
            }
            if asym > 1e-12 * scale.max(1.0) {
                return Err(RmtError::NonHermitian {
                    asymmetry: asym,
                    tolerance: 1e-12 * scale.max(1.0),
                });
            }
            matrix.clone()
        }
    };
    let trace = (0..n).map(|i| matrix[(i, i)]).sum();
    let mut trace_sq = 0.0;
    for j in 0..n {
        for i in 0..n {
            trace_sq += matrix[(i, j)] * matrix[(j, i)];
        }
    }
    Ok(Observable {
        matrix,
        trace,
        trace_sq,
        label,
    })
}

fn diag(values: &[f64]) -> Mat<f64> {
    let n = values.len();
    let mut m = Mat::<f64>::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = v;
    }
    m
}

/// Condition-(c5) diagnostic: `Tr(A^2) / (Tr A)^2`.
///
/// Small values mean the near-diagonal constraint holds; a traceless
/// observable returns the `+inf` sentinel (maximal violation). The zero
/// operator is rejected.
pub fn c5_ratio(a: &Observable) -> Result<f64> {
    if !(a.trace_sq > 0.0) {
        return Err(RmtError::InvalidObservable(
            "c5_ratio requires Tr(A^2) > 0 (zero operator rejected)".into(),
        ));
    }
    if a.trace == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(a.trace_sq / (a.trace * a.trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{
        decompose, sample_hamiltonian, EigenBasis, EnsembleKind, EnsembleSpec, Hamiltonian,
    };

    #[test]
    fn equilibrium_is_identity_over_n() {
        let pi = make_pi(&PiKind::Equilibrium, 4).unwrap();
        for i in 0..4 {
            assert!((pi.matrix[(i, i)] - 0.25).abs() < 1e-15);
        }
        assert!((pi.purity() - 0.25).abs() < 1e-15);
        assert_eq!(pi.rank, 4);
        assert!(pi.is_equilibrium());
    }

    #[test]
    fn pure_state_purity_one() {
        let pi = make_pi(&PiKind::PureState, 4).unwrap();
        assert!((pi.purity() - 1.0).abs() < 1e-15);
        assert_eq!(pi.rank, 1);
        assert!((pi.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn power_law_renormalized() {
        let pi = make_pi(&PiKind::PowerLaw { alpha: 0.5 }, 100).unwrap();
        assert_eq!(pi.rank, 10);
        assert!((pi.purity() - 0.1).abs() < 1e-14);
        assert!((pi.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_kinds_unit_trace_and_purity() {
        for n in [2usize, 5, 64, 101] {
            for kind in [
                PiKind::Equilibrium,
                PiKind::HalfFilled,
                PiKind::PureState,
                PiKind::PowerLaw { alpha: 0.37 },
            ] {
                let pi = make_pi(&kind, n).unwrap();
                assert!((pi.trace() - 1.0).abs() < 1e-12, "{} N={n}", pi.label);
                assert!(
                    (pi.purity() - 1.0 / pi.rank as f64).abs() < 1e-12,
                    "{} N={n}",
                    pi.label
                );
                for &p in &pi.eigenvalues {
                    assert!((0.0..=1.0).contains(&p));
                }
            }
        }
    }

    #[test]
    fn custom_pi_round_trip_eigenvalues() {
        let n = 16;
        let mut weights: Vec<f64> = (0..n).map(|i| (i + 1) as f64).collect();
        let sum: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= sum);

        // random orthogonal frame from a GOE decomposition
        let spec = EnsembleSpec::new(EnsembleKind::Goe, n, 1.0, 2024).unwrap();
        let d = decompose(&sample_hamiltonian(&spec, 0).unwrap()).unwrap();
        let frame = match d.basis {
            EigenBasis::Orthogonal(q) => q,
            _ => unreachable!(),
        };
        let pi = make_pi(
            &PiKind::Custom {
                eigenvalues: weights.clone(),
                basis: Some(frame),
            },
            n,
        )
        .unwrap();
        assert!((pi.trace() - 1.0).abs() < 1e-12);

        // eigenvalues of the built matrix match the input multiset
        let back = decompose(&Hamiltonian::Real(pi.matrix.clone())).unwrap();
        let mut want = weights;
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in back.eigenvalues.iter().zip(&want) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn custom_pi_rejects_bad_probability_vector() {
        let bad = PiKind::Custom {
            eigenvalues: vec![0.5, 0.6],
            basis: None,
        };
        assert!(make_pi(&bad, 2).is_err());
        let neg = PiKind::Custom {
            eigenvalues: vec![1.5, -0.5],
            basis: None,
        };
        assert!(make_pi(&neg, 2).is_err());
    }

    #[test]
    fn identity_observable() {
        let a = make_observable(
            &ObservableKind::Diagonal {
                values: vec![1.0; 5],
            },
            5,
        )
        .unwrap();
        assert!((a.trace - 5.0).abs() < 1e-15);
        assert!((a.trace_sq - 5.0).abs() < 1e-15);
    }

    #[test]
    fn projector_traces() {
        let a = make_observable(&ObservableKind::Projector { subspace_dim: 3 }, 10).unwrap();
        assert!((a.trace - 3.0).abs() < 1e-15);
        assert!((a.trace_sq - 3.0).abs() < 1e-15);
    }

    #[test]
    fn near_diagonal_c5() {
        let n = 100;
        let a = make_observable(
            &ObservableKind::NearDiagonal {
                a0: 1.0,
                spread: 1.0 / n as f64,
            },
            n,
        )
        .unwrap();
        let ratio = c5_ratio(&a).unwrap();
        // (Tr A)^2 / Tr A^2 >= 99  <=>  ratio <= 1/99
        assert!(ratio <= 1.0 / 99.0, "ratio {ratio}");
    }

    #[test]
    fn c5_sentinel_and_values() {
        let id = make_observable(
            &ObservableKind::Diagonal {
                values: vec![1.0; 100],
            },
            100,
        )
        .unwrap();
        assert!((c5_ratio(&id).unwrap() - 0.01).abs() < 1e-15);

        let alternating: Vec<f64> = (0..100)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let alt = make_observable(
            &ObservableKind::Diagonal {
                values: alternating,
            },
            100,
        )
        .unwrap();
        assert_eq!(c5_ratio(&alt).unwrap(), f64::INFINITY);

        let proj1 = make_observable(&ObservableKind::Projector { subspace_dim: 1 }, 100).unwrap();
        assert!((c5_ratio(&proj1).unwrap() - 1.0).abs() < 1e-15);

        let zero = make_observable(
            &ObservableKind::Diagonal {
                values: vec![0.0; 4],
            },
            4,
        );
        assert!(c5_ratio(&zero.unwrap()).is_err());
    }

    #[test]
    fn c5_invariant_under_rotation() {
        let n = 24;
        let vals: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.3 * near_diagonal_offset(i))
            .collect();
        let a = make_observable(&ObservableKind::Diagonal { values: vals }, n).unwrap();
        let r0 = c5_ratio(&a).unwrap();

        let spec = EnsembleSpec::new(EnsembleKind::Goe, n, 1.0, 7777).unwrap();
        let d = decompose(&sample_hamiltonian(&spec, 2).unwrap()).unwrap();
        let q = match d.basis {
            EigenBasis::Orthogonal(q) => q,
            _ => unreachable!(),
        };
        let rotated = &q * &a.matrix * q.transpose();
        let ar = make_observable(&ObservableKind::Custom { matrix: rotated }, n).unwrap();
        let r1 = c5_ratio(&ar).unwrap();
        assert!((r0 - r1).abs() < 1e-10 * r0.abs().max(1.0), "{r0} vs {r1}");
    }

    #[test]
    fn custom_observable_rejects_asymmetric() {
        let mut m = Mat::<f64>::zeros(3, 3);
        m[(0, 1)] = 1.0;
        let err = make_observable(&ObservableKind::Custom { matrix: m }, 3);
        assert!(err.is_err());
    }
}
