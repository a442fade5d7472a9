//! Geometry of a projector pair: the five-block canonical (CS) form,
//! intersection and range-sum projectors by several independent algorithms,
//! principal angles, and the eigenvalue pairing between p-q and pq.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{
    eigh, pseudo_inverse, spectral_projector, validate_projector, HermitianOperator,
    Projector, Tolerances,
};
use crate::matrix::{check_same_dim, fro_norm, ComplexMatrix};

/// Guard threshold for the internal reconstruction consistency check.
const RECONSTRUCTION_GUARD: f64 = 1e-8;

/// Five-block canonical data for a projector pair: the change of basis U,
/// block dimensions, the commuting cosine/sine matrices of the generic block
/// and the four common-eigenvector block projectors in the original basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwoProjectorDecomposition {
    pub u: ComplexMatrix,
    /// Half-dimension of the generic block.
    pub m: usize,
    pub m11: usize,
    pub m10: usize,
    pub m01: usize,
    pub m00: usize,
    /// m x m cosine matrix (diagonal in this convention).
    pub c: ComplexMatrix,
    /// m x m sine matrix.
    pub s: ComplexMatrix,
    pub pi_11: Projector,
    pub pi_10: Projector,
    pub pi_01: Projector,
    pub pi_00: Projector,
    /// Ascending principal angles in (0, pi/2), length m.
    pub principal_angles: Vec<f64>,
    /// Frobenius reconstruction errors for p and q.
    pub reconstruction_error_p: f64,
    pub reconstruction_error_q: f64,
}

impl TwoProjectorDecomposition {
    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    /// Canonical form of p: blockdiag([[C^2, CS], [CS, S^2]], I_m11, I_m10, 0, 0).
    pub fn canonical_p(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let m = self.m;
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        let c = self.c.as_ref();
        let s = self.s.as_ref();
        for i in 0..m {
            for j in 0..m {
                let cc = (c.row(i) * c.column(j))[(0, 0)];
                let cs = (c.row(i) * s.column(j))[(0, 0)];
                let ss = (s.row(i) * s.column(j))[(0, 0)];
                out[(i, j)] = cc;
                out[(i, m + j)] = cs;
                out[(m + i, j)] = cs;
                out[(m + i, m + j)] = ss;
            }
        }
        for i in 0..self.m11 + self.m10 {
            out[(2 * m + i, 2 * m + i)] = Complex64::new(1.0, 0.0);
        }
        out
    }

    /// Canonical form of q: blockdiag([[I, 0], [0, 0]], I_m11, 0, I_m01, 0).
    pub fn canonical_q(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let m = self.m;
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..m {
            out[(i, i)] = Complex64::new(1.0, 0.0);
        }
        let mut k = 2 * m;
        for _ in 0..self.m11 {
            out[(k, k)] = Complex64::new(1.0, 0.0);
            k += 1;
        }
        k += self.m10;
        for _ in 0..self.m01 {
            out[(k, k)] = Complex64::new(1.0, 0.0);
            k += 1;
        }
        out
    }
}

/// Orthonormal eigenvectors of `h` with eigenvalue within `band` of `value`,
/// as matrix columns.
fn eigenbasis_near(h: &HermitianOperator, value: f64, band: f64) -> Result<DMatrix<Complex64>> {
    let spec = eigh(h)?;
    let cols: Vec<usize> = spec
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| (l - value).abs() <= band)
        .map(|(k, _)| k)
        .collect();
    let n = h.dim();
    let mut out = DMatrix::<Complex64>::zeros(n, cols.len());
    for (j, &k) in cols.iter().enumerate() {
        out.set_column(j, &spec.eigenvectors.column(k));
    }
    Ok(out)
}

/// CS decomposition of a projector pair into the five-block canonical form.
///
/// The four common-eigenvector blocks are obtained spectrally (eigenvalue 2
/// and 0 of p+q, eigenvalue +1 and -1 of p-q); the generic block is brought
/// to the cosine-sine form via the polar decomposition of its off-diagonal
/// block and a final diagonalization of C^2.
pub fn cs_decompose(p: &Projector, q: &Projector, tol: &Tolerances) -> Result<TwoProjectorDecomposition> {
    check_same_dim(p.dim(), q.dim())?;
    tol.validate()?;
    let n = p.dim();
    let band = tol.eps_band;

    let sum = HermitianOperator::from_parts_unchecked(p.matrix() + q.matrix());
    let diff = HermitianOperator::from_parts_unchecked(p.matrix() - q.matrix());
    let pi_11 = spectral_projector(&sum, 2.0, band)?;
    let pi_00 = spectral_projector(&sum, 0.0, band)?;
    let pi_10 = spectral_projector(&diff, 1.0, band)?;
    let pi_01 = spectral_projector(&diff, -1.0, band)?;
    let (m11, m10, m01, m00) = (pi_11.rank(), pi_10.rank(), pi_01.rank(), pi_00.rank());

    let block_sum = m11 + m10 + m01 + m00;
    if block_sum > n || (n - block_sum) % 2 != 0 {
        return Err(Error::DecompositionInconsistent {
            defect: (n - block_sum) as f64,
            tol: 0.0,
        });
    }
    let m = (n - block_sum) / 2;

    // Basis of the generic block: kernel of the summed block projectors.
    let pi_sum = HermitianOperator::from_parts_unchecked(
        pi_11.matrix() + pi_10.matrix() + pi_01.matrix() + pi_00.matrix(),
    );
    let generic_basis = eigenbasis_near(&pi_sum, 0.0, 0.5)?;
    if generic_basis.ncols() != 2 * m {
        return Err(Error::DecompositionInconsistent {
            defect: generic_basis.ncols() as f64,
            tol: 2.0 * m as f64,
        });
    }

    let mut u = DMatrix::<Complex64>::zeros(n, n);
    let (mut c_diag, mut s_diag, mut angles) = (Vec::new(), Vec::new(), Vec::new());

    if m > 0 {
        // q restricted to the generic block, diagonalized: range part first.
        let q_restricted = HermitianOperator::from_parts_unchecked(
            generic_basis.adjoint() * q.matrix() * &generic_basis,
        );
        let range_q = eigenbasis_near(&q_restricted, 1.0, 0.5)?;
        let kernel_q = eigenbasis_near(&q_restricted, 0.0, 0.5)?;
        if range_q.ncols() != m || kernel_q.ncols() != m {
            return Err(Error::DecompositionInconsistent {
                defect: range_q.ncols() as f64,
                tol: m as f64,
            });
        }
        let top = &generic_basis * range_q; // n x m, spans ran(q) within H'
        let bottom = &generic_basis * kernel_q; // n x m, spans ker(q) within H'

        // p in this basis has blocks [[K', B], [B^dagger, L]].
        let b = top.adjoint() * p.matrix() * &bottom;

        // Polar decomposition B = V Bhat with Bhat = sqrt(B^dagger B) > 0.
        let btb = HermitianOperator::from_parts_unchecked(b.adjoint() * &b);
        let btb_spec = eigh(&btb)?;
        let mut inv_sqrt = DMatrix::<Complex64>::zeros(m, m);
        for k in 0..m {
            let lam = btb_spec.eigenvalues[k].max(0.0);
            if lam.sqrt() <= tol.eps_band * tol.eps_band {
                // ker(B) = 0 is guaranteed when the common-eigenvector
                // directions were split off correctly.
                return Err(Error::DecompositionInconsistent {
                    defect: lam,
                    tol: tol.eps_band,
                });
            }
            let v = btb_spec.eigenvectors.column(k);
            inv_sqrt += &v * v.adjoint() * Complex64::new(1.0 / lam.sqrt(), 0.0);
        }
        let v_polar = &b * &inv_sqrt; // m x m unitary

        let top_rot = &top * &v_polar;
        // After the polar rotation p reads [[K, Bhat], [Bhat, L]] with
        // K = C^2; diagonalize K, angles ascending means cosines descending.
        let k_block = HermitianOperator::from_parts_unchecked(
            top_rot.adjoint() * p.matrix() * &top_rot,
        );
        let k_spec = eigh(&k_block)?;
        let order: Vec<usize> = (0..m).rev().collect(); // cos^2 descending
        let mut rot = DMatrix::<Complex64>::zeros(m, m);
        for (j, &k) in order.iter().enumerate() {
            rot.set_column(j, &k_spec.eigenvectors.column(k));
        }
        let final_top = &top_rot * &rot;
        let final_bottom = &bottom * &rot;

        for (j, &k) in order.iter().enumerate() {
            let c2 = k_spec.eigenvalues[k].clamp(0.0, 1.0);
            let c = c2.sqrt();
            let s = (1.0 - c2).max(0.0).sqrt();
            if c <= band || c >= 1.0 - band {
                // C and S must be invertible; directions this close to a
                // common eigenvector belong to the spectral blocks.
                return Err(Error::BandAmbiguity {
                    eigenvalue: c2,
                    target: if c <= band { 0.0 } else { 1.0 },
                    band,
                });
            }
            c_diag.push(c);
            s_diag.push(s);
            angles.push(c.acos());
            u.set_column(j, &final_top.column(j));
            u.set_column(m + j, &final_bottom.column(j));
        }
    }

    let mut col = 2 * m;
    for (pi, count) in [(&pi_11, m11), (&pi_10, m10), (&pi_01, m01), (&pi_00, m00)] {
        if count > 0 {
            let basis = eigenbasis_near(
                &HermitianOperator::from_parts_unchecked(pi.matrix().clone()),
                1.0,
                0.5,
            )?;
            for j in 0..count {
                u.set_column(col, &basis.column(j));
                col += 1;
            }
        }
    }

    let diag_mat = |d: &[f64]| {
        DMatrix::from_fn(d.len(), d.len(), |i, j| {
            if i == j {
                Complex64::new(d[i], 0.0)
            } else {
                Complex64::default()
            }
        })
    };

    let decomposition = TwoProjectorDecomposition {
        u: ComplexMatrix::new(u.clone())?,
        m,
        m11,
        m10,
        m01,
        m00,
        c: ComplexMatrix::new(diag_mat(&c_diag))?,
        s: ComplexMatrix::new(diag_mat(&s_diag))?,
        pi_11,
        pi_10,
        pi_01,
        pi_00,
        principal_angles: angles,
        reconstruction_error_p: 0.0,
        reconstruction_error_q: 0.0,
    };

    let err_p = fro_norm(&(&u * decomposition.canonical_p() * u.adjoint() - p.matrix()));
    let err_q = fro_norm(&(&u * decomposition.canonical_q() * u.adjoint() - q.matrix()));
    let unitary_defect = fro_norm(&(&u * u.adjoint() - DMatrix::identity(n, n)));
    let worst = err_p.max(err_q).max(unitary_defect);
    if worst > RECONSTRUCTION_GUARD {
        return Err(Error::DecompositionInconsistent {
            defect: worst,
            tol: RECONSTRUCTION_GUARD,
        });
    }
    Ok(TwoProjectorDecomposition {
        reconstruction_error_p: err_p,
        reconstruction_error_q: err_q,
        ..decomposition
    })
}

/// Algorithm selector for the intersection projector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntersectionMethod {
    /// Eigenvalue-2 subspace of p + q. The canonical, oracle-grade route.
    Spectral,
    /// Operator harmonic mean 2 p (p + q)^- q.
    HarmonicMean,
    /// Limit of q (p q)^n.
    IteratedLimit,
    /// Schur complement in the eigenbasis of q.
    SchurBlock,
}

impl IntersectionMethod {
    pub const ALL: [IntersectionMethod; 4] = [
        IntersectionMethod::Spectral,
        IntersectionMethod::HarmonicMean,
        IntersectionMethod::IteratedLimit,
        IntersectionMethod::SchurBlock,
    ];
}

impl std::str::FromStr for IntersectionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spectral" => Ok(Self::Spectral),
            "harmonic" | "harmonic-mean" => Ok(Self::HarmonicMean),
            "limit" | "iterated-limit" => Ok(Self::IteratedLimit),
            "schur" | "schur-block" => Ok(Self::SchurBlock),
            other => Err(Error::Malformed(format!("unknown method '{other}'"))),
        }
    }
}

const LIMIT_CAP: usize = 100_000;
const LIMIT_STEP_TOL: f64 = 1e-12;

/// Projector onto ran(p) and ran(q), by the selected algorithm.
pub fn intersection_projector(
    p: &Projector,
    q: &Projector,
    method: IntersectionMethod,
) -> Result<Projector> {
    check_same_dim(p.dim(), q.dim())?;
    let tol = Tolerances::default();
    match method {
        IntersectionMethod::Spectral => {
            let sum = HermitianOperator::from_parts_unchecked(p.matrix() + q.matrix());
            spectral_projector(&sum, 2.0, tol.eps_band)
        }
        IntersectionMethod::HarmonicMean => {
            let sum = HermitianOperator::from_parts_unchecked(p.matrix() + q.matrix());
            // Rank cut at eps_band, not machine precision: true zeros of the
            // sum come out of the eigensolver around 1e-13 and must not be
            // inverted.
            let pinv = pseudo_inverse(&sum, tol.eps_band)?;
            let g = p.matrix() * pinv.matrix() * q.matrix() * Complex64::new(2.0, 0.0);
            validate_projector(ComplexMatrix::new(g)?, &tol.scaled(1e4))
        }
        IntersectionMethod::IteratedLimit => {
            // q (p q)^n is hermitean for every n, since it equals (q p q)^n.
            let mut x = q.matrix().clone();
            let step = p.matrix() * q.matrix();
            for _ in 0..LIMIT_CAP {
                let next = &x * &step;
                let delta = fro_norm(&(&next - &x));
                x = next;
                if delta < LIMIT_STEP_TOL {
                    return validate_projector(ComplexMatrix::new(x)?, &tol.scaled(1e4));
                }
            }
            Err(Error::LimitNotConverged {
                iterations: LIMIT_CAP,
            })
        }
        IntersectionMethod::SchurBlock => {
            let n = p.dim();
            let q_herm = HermitianOperator::from_parts_unchecked(q.matrix().clone());
            let range = eigenbasis_near(&q_herm, 1.0, 0.5)?;
            let kernel = eigenbasis_near(&q_herm, 0.0, 0.5)?;
            let n1 = range.ncols();
            if n1 == 0 {
                return Ok(Projector::zero(n));
            }
            let p11 = range.adjoint() * p.matrix() * &range;
            let p12 = range.adjoint() * p.matrix() * &kernel;
            let p22 = HermitianOperator::from_parts_unchecked(
                kernel.adjoint() * p.matrix() * &kernel,
            );
            // Same eps_band rank cut as above: p22 has true zeros whenever
            // ker(q) meets ker(p) or ran(p).
            let p22_pinv = pseudo_inverse(&p22, tol.eps_band)?;
            let schur = p11 - &p12 * p22_pinv.matrix() * p12.adjoint();
            let g = &range * schur * range.adjoint();
            validate_projector(ComplexMatrix::new(g)?, &tol.scaled(1e4))
        }
    }
}

/// Projector onto ran(p) + ran(q): the span of the two ranges, equal to
/// I - g(I-p, I-q).
pub fn span_sum_projector(p: &Projector, q: &Projector) -> Result<Projector> {
    check_same_dim(p.dim(), q.dim())?;
    let tol = Tolerances::default();
    let sum = HermitianOperator::from_parts_unchecked(p.matrix() + q.matrix());
    let spec = eigh(&sum)?;
    let n = p.dim();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    let mut rank = 0;
    for (k, &lam) in spec.eigenvalues.iter().enumerate() {
        if lam > tol.eps_band {
            let v = spec.eigenvectors.column(k);
            m += &v * v.adjoint();
            rank += 1;
        }
    }
    let _ = rank;
    validate_projector(ComplexMatrix::new(m)?, &tol)
}

/// Ascending principal angles between ran(p) and ran(q) within the generic
/// block; empty when the projectors commute.
pub fn principal_angles(p: &Projector, q: &Projector) -> Result<Vec<f64>> {
    Ok(cs_decompose(p, q, &Tolerances::default())?.principal_angles)
}

/// One verified eigenvalue pairing between p - q and pq.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenvaluePair {
    /// Eigenvalue of p - q with 0 < |lambda| < 1.
    pub lambda: f64,
    /// The paired eigenvalue 1 - lambda^2 of pq.
    pub paired: f64,
    /// Relative residual of pq (p x) = (1 - lambda^2)(p x).
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DifferenceSpectrumPairing {
    pub pairs: Vec<EigenvaluePair>,
    /// Worst mismatch when matching eigenvalues in +/- pairs.
    pub sign_pairing_defect: f64,
}

/// For each eigenpair (lambda, x) of p - q with 0 < |lambda| < 1, verifies
/// that p x is an eigenvector of pq with eigenvalue 1 - lambda^2, and that
/// the nontrivial eigenvalues come in +/- pairs. Residuals are reported, not
/// thrown.
pub fn difference_spectrum_pairing(p: &Projector, q: &Projector) -> Result<DifferenceSpectrumPairing> {
    check_same_dim(p.dim(), q.dim())?;
    let band = Tolerances::default().eps_band;
    let diff = HermitianOperator::from_parts_unchecked(p.matrix() - q.matrix());
    let spec = eigh(&diff)?;
    let pq = p.matrix() * q.matrix();
    let mut pairs = Vec::new();
    let mut nontrivial = Vec::new();
    for (k, &lam) in spec.eigenvalues.iter().enumerate() {
        if lam.abs() <= band || lam.abs() >= 1.0 - band {
            continue;
        }
        nontrivial.push(lam);
        let x = spec.eigenvectors.column(k);
        let px = p.matrix() * x;
        let norm = px.norm();
        let residual = (&pq * &px - &px * Complex64::new(1.0 - lam * lam, 0.0)).norm() / norm;
        pairs.push(EigenvaluePair {
            lambda: lam,
            paired: 1.0 - lam * lam,
            residual,
        });
    }
    // Ascending spectrum pairs lambda_k with -lambda from the other end.
    let mut defect = 0.0_f64;
    let half = nontrivial.len() / 2;
    for i in 0..half {
        defect = defect.max((nontrivial[i] + nontrivial[nontrivial.len() - 1 - i]).abs());
    }
    if nontrivial.len() % 2 != 0 {
        defect = f64::INFINITY;
    }
    Ok(DifferenceSpectrumPairing {
        pairs,
        sign_pairing_defect: defect,
    })
}
