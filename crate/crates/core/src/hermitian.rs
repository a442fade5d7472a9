//! Hermitean operators, projectors, density matrices and the spectral
//! machinery (eigendecomposition, pseudo-inverse, PSD ordering) shared by
//! every other module.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{adjoint_defect, check_same_dim, fro_norm, symmetrize, ComplexMatrix};

/// Tolerance bundle used by all constructors and checks.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    pub eps_herm: f64,
    pub eps_proj: f64,
    pub eps_psd: f64,
    pub eps_trace: f64,
    /// Relative rank cut for the pseudo-inverse, in units of the largest
    /// absolute eigenvalue per dimension (scaled by dim * machine epsilon).
    pub eps_rank: f64,
    /// Half-width of the eigenvalue bands used for block classification.
    pub eps_band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eps_herm: 1e-10,
            eps_proj: 1e-10,
            eps_psd: 1e-10,
            eps_trace: 1e-10,
            eps_rank: f64::EPSILON,
            eps_band: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.eps_herm,
            self.eps_proj,
            self.eps_psd,
            self.eps_trace,
            self.eps_rank,
            self.eps_band,
        ];
        if all.iter().all(|&e| e > 0.0 && e.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidTolerance)
        }
    }

    /// A uniformly scaled bundle, for validating results of approximate
    /// algorithms (e.g. the iterated-limit intersection).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            eps_herm: self.eps_herm * factor,
            eps_proj: self.eps_proj * factor,
            eps_psd: self.eps_psd * factor,
            eps_trace: self.eps_trace * factor,
            eps_rank: self.eps_rank,
            eps_band: self.eps_band,
        }
    }

    /// Absolute eigenvalue cut for the pseudo-inverse of a matrix with the
    /// given dimension and spectral radius.
    pub fn rank_cut(&self, dim: usize, max_abs_eig: f64) -> f64 {
        (dim as f64) * self.eps_rank * max_abs_eig
    }
}

/// A matrix validated to be hermitean within `eps_herm`; stored symmetrized.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    hermiticity_defect: f64,
}

impl HermitianOperator {
    /// Symmetrizes to (M + M^dagger)/2 and checks the defect.
    pub fn new(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let defect = adjoint_defect(m.as_ref());
        if defect > tol.eps_herm {
            return Err(Error::NotHermitian {
                defect,
                tol: tol.eps_herm,
            });
        }
        let sym = ComplexMatrix::new(symmetrize(m.as_ref()))?;
        Ok(Self {
            matrix: sym,
            hermiticity_defect: defect,
        })
    }

    /// Wraps a matrix already known to be hermitean by construction
    /// (it is still symmetrized to keep the representation exact).
    pub fn from_parts_unchecked(m: DMatrix<Complex64>) -> Self {
        let defect = adjoint_defect(&m);
        Self {
            matrix: ComplexMatrix::new(symmetrize(&m)).expect("finite square matrix"),
            hermiticity_defect: defect,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        self.matrix.as_ref()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    pub fn trace(&self) -> f64 {
        self.matrix().trace().re
    }
}

/// Result of the hermitean eigendecomposition H = V diag(eigenvalues) V^dagger,
/// eigenvalues ascending, eigenvector phases normalized deterministically.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Columns are the orthonormal eigenvectors, in eigenvalue order.
    pub eigenvectors: DMatrix<Complex64>,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let n = self.eigenvalues.len();
        let lambda = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(self.eigenvalues[i], 0.0)
            } else {
                Complex64::default()
            }
        });
        &self.eigenvectors * lambda * self.eigenvectors.adjoint()
    }
}

/// Hermitean eigendecomposition with ascending eigenvalues and a
/// deterministic phase convention: in each eigenvector the first component of
/// largest modulus is made real positive.
pub fn eigh(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    eigh_matrix(h.matrix())
}

pub(crate) fn eigh_matrix(m: &DMatrix<Complex64>) -> Result<SpectralDecomposition> {
    let sym = symmetrize(m);
    let scale = crate::matrix::fro_norm(&sym).max(1.0);
    // Fast path via the nalgebra backend, but verified: on some complex
    // hermitean inputs its symmetric eigensolver silently returns eigenpairs
    // with O(1e-2) residuals, so any inaccurate result is discarded and the
    // matrix is rediagonalized with cyclic Jacobi rotations.
    let backend = sym
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .map(|se| (se.eigenvalues.iter().copied().collect::<Vec<f64>>(), se.eigenvectors));
    let (raw_values, raw_vectors) = match backend {
        Some((values, vectors)) if eigenpair_residual(&sym, &values, &vectors) <= 1e-11 * scale => {
            (values, vectors)
        }
        _ => jacobi_hermitian(&sym)?,
    };
    let n = sym.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw_values[a].total_cmp(&raw_values[b]));
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = DMatrix::<Complex64>::zeros(n, n);
    for (k, &idx) in order.iter().enumerate() {
        eigenvalues.push(raw_values[idx]);
        let col = raw_vectors.column(idx);
        // Phase normalization: first component of largest modulus made real
        // positive, so repeated runs agree entrywise.
        let mut best = 0;
        let mut best_mod = 0.0;
        for (i, z) in col.iter().enumerate() {
            let m = z.norm();
            if m > best_mod + 1e-12 {
                best_mod = m;
                best = i;
            }
        }
        let pivot = col[best];
        let phase = if pivot.norm() > 0.0 {
            pivot.conj() / pivot.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            eigenvectors[(i, k)] = col[i] * phase;
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Worst residual |A v - lambda v| over the eigenpairs.
fn eigenpair_residual(a: &DMatrix<Complex64>, values: &[f64], vectors: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0_f64;
    for (k, &lam) in values.iter().enumerate() {
        let v = vectors.column(k);
        let res = a * v - v * Complex64::new(lam, 0.0);
        worst = worst.max(res.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
    }
    worst
}

const JACOBI_SWEEPS: usize = 60;

/// Cyclic two-sided Jacobi diagonalization of a hermitean matrix. Slower
/// than the QR-based backend but unconditionally accurate at the small
/// dimensions this library works with.
fn jacobi_hermitian(a: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let n = a.nrows();
    let mut a = a.clone();
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let scale = crate::matrix::fro_norm(&a).max(1.0);
    for _ in 0..JACOBI_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            let values = (0..n).map(|i| a[(i, i)].re).collect();
            return Ok((values, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-18 * scale {
                    continue;
                }
                // 2x2 hermitean block [[alpha, r e^{i phi}], [r e^{-i phi},
                // beta]]; the rotation angle is the real Jacobi one, with
                // the phase folded into the off-diagonal rotation entries.
                let phase = apq / Complex64::new(r, 0.0);
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let tau = (beta - alpha) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let cp = Complex64::new(c, 0.0);
                let sp = phase * Complex64::new(s, 0.0);
                // A <- U^dagger A U with U = [[c, s e^{i phi}],
                // [-s e^{-i phi}, c]] acting on rows/columns (p, q).
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * cp - aiq * sp.conj();
                    a[(i, q)] = aip * sp + aiq * cp;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * cp - aqj * sp;
                    a[(q, j)] = apj * sp.conj() + aqj * cp;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * cp - viq * sp.conj();
                    v[(i, q)] = vip * sp + viq * cp;
                }
            }
        }
    }
    Err(Error::ConvergenceFailure)
}

/// A hermitean idempotent with its computed rank.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Projector {
    operator: HermitianOperator,
    rank: usize,
}

impl Projector {
    pub fn operator(&self) -> &HermitianOperator {
        &self.operator
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        self.operator.matrix()
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            operator: HermitianOperator::from_parts_unchecked(DMatrix::identity(dim, dim)),
            rank: dim,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            operator: HermitianOperator::from_parts_unchecked(DMatrix::zeros(dim, dim)),
            rank: 0,
        }
    }

    /// I - P.
    pub fn complement(&self) -> Self {
        let n = self.dim();
        Self {
            operator: HermitianOperator::from_parts_unchecked(
                DMatrix::identity(n, n) - self.matrix(),
            ),
            rank: n - self.rank,
        }
    }
}

/// Validates a matrix as a projector: symmetrizes, checks idempotency and
/// that the spectrum sits within `eps_proj` of {0, 1}; the rank is the count
/// of eigenvalues near 1.
pub fn validate_projector(m: ComplexMatrix, tol: &Tolerances) -> Result<Projector> {
    tol.validate()?;
    let operator = HermitianOperator::new(m, tol)?;
    let h = operator.matrix();
    let idem_defect = fro_norm(&(h * h - h));
    if idem_defect > tol.eps_proj {
        return Err(Error::NotIdempotent {
            defect: idem_defect,
            tol: tol.eps_proj,
        });
    }
    let spec = eigh(&operator)?;
    let mut rank = 0;
    for &lam in &spec.eigenvalues {
        if (lam - 1.0).abs() <= tol.eps_proj {
            rank += 1;
        } else if lam.abs() > tol.eps_proj {
            return Err(Error::SpectrumOutOfBand {
                eigenvalue: lam,
                tol: tol.eps_proj,
            });
        }
    }
    Ok(Projector { operator, rank })
}

/// A hermitean PSD unit-trace matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityMatrix {
    operator: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        tol.validate()?;
        let operator = HermitianOperator::new(m, tol)?;
        let spec = eigh(&operator)?;
        let min_eig = spec.eigenvalues.first().copied().unwrap_or(0.0);
        if min_eig < -tol.eps_psd {
            return Err(Error::NotPositive { min_eig });
        }
        let trace = operator.trace();
        if (trace - 1.0).abs() > tol.eps_trace {
            return Err(Error::TraceNotOne {
                trace,
                tol: tol.eps_trace,
            });
        }
        Ok(Self { operator })
    }

    /// The maximally mixed state I/dim.
    pub fn maximally_mixed(dim: usize) -> Self {
        let m = DMatrix::<Complex64>::identity(dim, dim) / Complex64::new(dim as f64, 0.0);
        Self {
            operator: HermitianOperator::from_parts_unchecked(m),
        }
    }

    /// Pure state built from a (normalized) state vector.
    pub fn pure(state: &nalgebra::DVector<Complex64>) -> Result<Self> {
        let norm = state.norm();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::Malformed("state vector must be nonzero".into()));
        }
        let v = state / Complex64::new(norm, 0.0);
        let m = &v * v.adjoint();
        Ok(Self {
            operator: HermitianOperator::from_parts_unchecked(m),
        })
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.operator
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        self.operator.matrix()
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    /// tr(rho A).
    pub fn expectation(&self, a: &DMatrix<Complex64>) -> f64 {
        (self.matrix() * a).trace().re
    }
}

/// Moore-Penrose pseudo-inverse of a hermitean operator: eigenvalues with
/// |lambda| <= rank_tol * max|lambda| map to 0, the rest to 1/lambda.
pub fn pseudo_inverse(h: &HermitianOperator, rank_tol: f64) -> Result<HermitianOperator> {
    let spec = eigh(h)?;
    let max_abs = spec.eigenvalues.iter().fold(0.0_f64, |a, &l| a.max(l.abs()));
    let cut = rank_tol * max_abs;
    let n = h.dim();
    let lambda = DMatrix::from_fn(n, n, |i, j| {
        if i == j && spec.eigenvalues[i].abs() > cut {
            Complex64::new(1.0 / spec.eigenvalues[i], 0.0)
        } else {
            Complex64::default()
        }
    });
    let m = &spec.eigenvectors * lambda * spec.eigenvectors.adjoint();
    Ok(HermitianOperator::from_parts_unchecked(m))
}

/// Pseudo-inverse with the default relative cut dim * eps * max|lambda|.
pub fn pseudo_inverse_default(h: &HermitianOperator, tol: &Tolerances) -> Result<HermitianOperator> {
    // rank_cut is relative to max|lambda| inside pseudo_inverse already.
    pseudo_inverse(h, (h.dim() as f64) * tol.eps_rank)
}

/// Verdict of the PSD ordering test Y >= Z.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum OrderVerdict {
    Holds,
    /// Carries the offending (most negative) eigenvalue of Y - Z.
    Fails { min_eig: f64 },
}

impl OrderVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, OrderVerdict::Holds)
    }
}

/// Tests Y >= Z: holds iff the minimal eigenvalue of Y - Z is >= -tol.
pub fn psd_order(y: &HermitianOperator, z: &HermitianOperator, tol: f64) -> Result<OrderVerdict> {
    check_same_dim(y.dim(), z.dim())?;
    let diff = HermitianOperator::from_parts_unchecked(y.matrix() - z.matrix());
    let spec = eigh(&diff)?;
    let min_eig = spec.eigenvalues.first().copied().unwrap_or(0.0);
    if min_eig >= -tol {
        Ok(OrderVerdict::Holds)
    } else {
        Ok(OrderVerdict::Fails { min_eig })
    }
}

/// Projector onto the span of eigenvectors of H with |lambda - target| <= band.
///
/// An eigenvalue that is neither clearly inside the band (<= band/3 from the
/// target) nor clearly outside (>= 3*band) signals a misconfigured band and
/// yields `BandAmbiguity`.
pub fn spectral_projector(h: &HermitianOperator, target: f64, band: f64) -> Result<Projector> {
    let spec = eigh(h)?;
    let n = h.dim();
    let mut cols = Vec::new();
    for (k, &lam) in spec.eigenvalues.iter().enumerate() {
        let d = (lam - target).abs();
        if d > band / 3.0 && d < 3.0 * band {
            return Err(Error::BandAmbiguity {
                eigenvalue: lam,
                target,
                band,
            });
        }
        if d <= band {
            cols.push(k);
        }
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for &k in &cols {
        let v = spec.eigenvectors.column(k);
        m += &v * v.adjoint();
    }
    Ok(Projector {
        operator: HermitianOperator::from_parts_unchecked(m),
        rank: cols.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn real(dim: usize, rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(dim, rows).unwrap()
    }

    #[test]
    fn identity_is_full_rank_projector() {
        let p = validate_projector(ComplexMatrix::identity(3), &tol()).unwrap();
        assert_eq!(p.rank(), 3);
    }

    #[test]
    fn diag_100_is_rank_one_projector() {
        let m = real(3, &[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
        let p = validate_projector(m, &tol()).unwrap();
        assert_eq!(p.rank(), 1);
    }

    #[test]
    fn half_identity_is_not_idempotent() {
        let m = real(2, &[&[0.5, 0.0], &[0.0, 0.5]]);
        assert!(matches!(
            validate_projector(m, &tol()),
            Err(Error::NotIdempotent { .. })
        ));
    }

    #[test]
    fn eigh_sorts_ascending() {
        let h = HermitianOperator::new(
            real(3, &[&[3.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0]]),
            &tol(),
        )
        .unwrap();
        let spec = eigh(&h).unwrap();
        assert_abs_diff_eq!(spec.eigenvalues[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spec.eigenvalues[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spec.eigenvalues[2], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn pseudo_inverse_of_diag_2_0() {
        let h = HermitianOperator::new(real(2, &[&[2.0, 0.0], &[0.0, 0.0]]), &tol()).unwrap();
        let pinv = pseudo_inverse(&h, 1e-12).unwrap();
        assert_abs_diff_eq!(pinv.matrix()[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(pinv.matrix()[(1, 1)].re, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn pseudo_inverse_of_zero_is_zero() {
        let zero_row = [0.0; 3];
        let h = HermitianOperator::new(real(3, &[&zero_row, &zero_row, &zero_row]), &tol()).unwrap();
        let pinv = pseudo_inverse(&h, 1e-12).unwrap();
        assert_eq!(fro_norm(pinv.matrix()), 0.0);
    }

    #[test]
    fn identity_dominates_any_projector() {
        let m = real(2, &[&[1.0, 0.0], &[0.0, 0.0]]);
        let p = validate_projector(m, &tol()).unwrap();
        let i = HermitianOperator::from_parts_unchecked(DMatrix::identity(2, 2));
        assert!(psd_order(&i, p.operator(), 1e-10).unwrap().holds());
    }

    #[test]
    fn psd_order_reports_offending_eigenvalue() {
        let y = HermitianOperator::new(real(2, &[&[0.0, 0.0], &[0.0, 0.0]]), &tol()).unwrap();
        let z = HermitianOperator::new(real(2, &[&[1.0, 0.0], &[0.0, 0.0]]), &tol()).unwrap();
        match psd_order(&y, &z, 1e-10).unwrap() {
            OrderVerdict::Fails { min_eig } => assert_abs_diff_eq!(min_eig, -1.0, epsilon = 1e-12),
            OrderVerdict::Holds => panic!("ordering should fail"),
        }
    }

    #[test]
    fn spectral_projector_picks_commuting_intersection() {
        // p = diag(1,1,0), q = diag(1,0,0): eigenvalue-2 subspace of p+q is pq.
        let sum = HermitianOperator::new(
            real(3, &[&[2.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]),
            &tol(),
        )
        .unwrap();
        let g = spectral_projector(&sum, 2.0, 1e-8).unwrap();
        assert_eq!(g.rank(), 1);
        assert_abs_diff_eq!(g.matrix()[(0, 0)].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn spectral_projector_flags_ambiguous_band() {
        let h = HermitianOperator::new(real(2, &[&[2.0 - 1e-8, 0.0], &[0.0, 0.0]]), &tol()).unwrap();
        assert!(matches!(
            spectral_projector(&h, 2.0, 1e-8),
            Err(Error::BandAmbiguity { .. })
        ));
    }

    #[test]
    fn density_matrix_requires_unit_trace() {
        let m = real(2, &[&[0.6, 0.0], &[0.0, 0.6]]);
        assert!(matches!(
            DensityMatrix::new(m, &tol()),
            Err(Error::TraceNotOne { .. })
        ));
    }
}
