//! Measurement models: projective resolutions of the identity, the no-go
//! certificate for additive joint probabilities, two-time probabilities and
//! their marginal defect, and the mean-incompatibility witness search.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{eigh, DensityMatrix, HermitianOperator, Projector, Tolerances};
use crate::improb::lower_operator;
use crate::matrix::{check_same_dim, fro_norm, trace_re};
use crate::random::{random_commuting_density, random_projector, rng_from_seed};

/// Resolutions with defects below this are accepted.
pub const RESOLUTION_TOL: f64 = 1e-10;
/// Resolutions with defects up to here are rejected as "near-resolutions"
/// with a diagnostic; larger defects are plain malformed input.
pub const NEAR_RESOLUTION_TOL: f64 = 1e-6;

/// A family of mutually orthogonal projectors summing to the identity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectiveResolution {
    elements: Vec<Projector>,
}

impl ProjectiveResolution {
    pub fn new(elements: Vec<Projector>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::ResolutionInvalid("no projectors given".into()));
        }
        let dim = elements[0].dim();
        for e in &elements {
            check_same_dim(dim, e.dim())?;
        }
        let mut sum = DMatrix::<Complex64>::zeros(dim, dim);
        for e in &elements {
            sum += e.matrix();
        }
        let sum_defect = fro_norm(&(sum - DMatrix::<Complex64>::identity(dim, dim)));
        let mut orth_defect: f64 = 0.0;
        for (i, a) in elements.iter().enumerate() {
            for b in elements.iter().skip(i + 1) {
                orth_defect = orth_defect.max(fro_norm(&(a.matrix() * b.matrix())));
            }
        }
        let defect = sum_defect.max(orth_defect);
        if defect > RESOLUTION_TOL {
            let kind = if defect <= NEAR_RESOLUTION_TOL {
                "near-resolution"
            } else {
                "not a resolution"
            };
            return Err(Error::ResolutionInvalid(format!(
                "{kind}: sum defect {sum_defect:e}, orthogonality defect {orth_defect:e} \
                 (accepted below {RESOLUTION_TOL:e})"
            )));
        }
        Ok(Self { elements })
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Projector] {
        &self.elements
    }
}

/// Certificate that no additive joint probability exists for two
/// resolutions: the defect operator D = I - sum_{k,i} g(P_k, Q_i), which
/// vanishes exactly when the resolutions commute elementwise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoGoCertificate {
    pub defect: HermitianOperator,
    pub defect_spectrum: Vec<f64>,
    pub trace_deficit: f64,
    /// Index pairs (k, i) whose ranges intersect trivially, forcing the
    /// candidate joint operator to vanish.
    pub forced_zero: Vec<(usize, usize)>,
    pub no_go: bool,
}

pub fn no_go_certificate(
    p_res: &ProjectiveResolution,
    q_res: &ProjectiveResolution,
    tol: &Tolerances,
) -> Result<NoGoCertificate> {
    check_same_dim(p_res.dim(), q_res.dim())?;
    let n = p_res.dim();
    let mut total = DMatrix::<Complex64>::zeros(n, n);
    let mut forced_zero = Vec::new();
    for (k, p) in p_res.elements().iter().enumerate() {
        for (i, q) in q_res.elements().iter().enumerate() {
            let g = lower_operator(p, q)?;
            if g.trace() < 0.5 {
                forced_zero.push((k, i));
            }
            total += g.matrix();
        }
    }
    let defect =
        HermitianOperator::from_parts_unchecked(DMatrix::<Complex64>::identity(n, n) - total);
    let spectral = eigh(&defect)?;
    let trace_deficit = defect.trace();
    let no_go = trace_deficit > tol.eps_trace * (n as f64);
    Ok(NoGoCertificate {
        defect,
        defect_spectrum: spectral.eigenvalues,
        trace_deficit,
        forced_zero,
        no_go,
    })
}

/// Which successive-measurement expression to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwoTimeOrder {
    /// Measure the P family first: tr(Q_i P_k rho P_k).
    Pq,
    /// Measure the Q family first: tr(P_k Q_i rho Q_i).
    Qp,
    /// Arithmetic mean of both orders.
    Mean,
}

impl std::str::FromStr for TwoTimeOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pq" => Ok(Self::Pq),
            "qp" => Ok(Self::Qp),
            "mean" => Ok(Self::Mean),
            other => Err(Error::Malformed(format!(
                "unknown two-time order {other:?}; expected pq, qp or mean"
            ))),
        }
    }
}

/// Two-time probability of the single outcome pair (p, q) on rho.
pub fn two_time_probability(
    rho: &DensityMatrix,
    p: &Projector,
    q: &Projector,
    order: TwoTimeOrder,
) -> Result<f64> {
    check_same_dim(rho.dim(), p.dim())?;
    check_same_dim(p.dim(), q.dim())?;
    let value = match order {
        TwoTimeOrder::Pq => trace_re(&(q.matrix() * p.matrix() * rho.matrix() * p.matrix())),
        TwoTimeOrder::Qp => trace_re(&(p.matrix() * q.matrix() * rho.matrix() * q.matrix())),
        TwoTimeOrder::Mean => {
            (two_time_probability(rho, p, q, TwoTimeOrder::Pq)?
                + two_time_probability(rho, p, q, TwoTimeOrder::Qp)?)
                / 2.0
        }
    };
    Ok(value)
}

/// The symmetrized two-time mean mu = tr(rho (pqp + qpq) / 2).
pub fn two_time_mean(rho: &DensityMatrix, p: &Projector, q: &Projector) -> Result<f64> {
    two_time_probability(rho, p, q, TwoTimeOrder::Mean)
}

/// The full table of two-time probabilities, rows indexed by the first
/// resolution, columns by the second.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwoTimeTable {
    pub order: TwoTimeOrder,
    pub values: Vec<Vec<f64>>,
    pub total: f64,
}

pub fn two_time_table(
    rho: &DensityMatrix,
    p_res: &ProjectiveResolution,
    q_res: &ProjectiveResolution,
    order: TwoTimeOrder,
) -> Result<TwoTimeTable> {
    check_same_dim(rho.dim(), p_res.dim())?;
    check_same_dim(p_res.dim(), q_res.dim())?;
    let mut values = Vec::with_capacity(p_res.len());
    for p in p_res.elements() {
        let mut row = Vec::with_capacity(q_res.len());
        for q in q_res.elements() {
            row.push(two_time_probability(rho, p, q, order)?);
        }
        values.push(row);
    }
    let total = values.iter().flatten().sum();
    Ok(TwoTimeTable {
        order,
        values,
        total,
    })
}

/// Marginal behaviour of the first-P-then-Q two-time table: the first
/// marginal is reproduced exactly, the second generically is not.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarginalReport {
    /// max_k | sum_i tr(Q_i P_k rho P_k) - tr(rho P_k) |.
    pub first_marginal_defect: f64,
    /// d_i = sum_k tr(Q_i P_k rho P_k) - tr(rho Q_i), per element of Q.
    pub second_marginal_defects: Vec<f64>,
    pub max_second_defect: f64,
}

pub fn marginal_defect(
    rho: &DensityMatrix,
    p_res: &ProjectiveResolution,
    q_res: &ProjectiveResolution,
) -> Result<MarginalReport> {
    let table = two_time_table(rho, p_res, q_res, TwoTimeOrder::Pq)?;
    let mut first = 0.0_f64;
    for (k, p) in p_res.elements().iter().enumerate() {
        let marginal: f64 = table.values[k].iter().sum();
        first = first.max((marginal - rho.expectation(p.matrix())).abs());
    }
    let second_marginal_defects: Vec<f64> = q_res
        .elements()
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let marginal: f64 = table.values.iter().map(|row| row[i]).sum();
            marginal - rho.expectation(q.matrix())
        })
        .collect();
    let max_second_defect = second_marginal_defects
        .iter()
        .fold(0.0_f64, |acc, d| acc.max(d.abs()));
    Ok(MarginalReport {
        first_marginal_defect: first,
        second_marginal_defects,
        max_second_defect,
    })
}

/// A state/projector triple on which the two-time mean disagrees with the
/// well-defined joint probability tr(rho p q).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeanIncompatibilityWitness {
    pub rho: DensityMatrix,
    pub p: Projector,
    pub q: Projector,
    /// mu(rho; p, q) - tr(rho p q).
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeanIncompatibilityReport {
    /// Witness with mu > tr(rho p q).
    pub above: Option<MeanIncompatibilityWitness>,
    /// Witness with mu < tr(rho p q).
    pub below: Option<MeanIncompatibilityWitness>,
    pub trials_used: usize,
}

impl MeanIncompatibilityReport {
    pub fn both_found(&self) -> bool {
        self.above.is_some() && self.below.is_some()
    }
}

const MEAN_GAP_MARGIN: f64 = 1e-6;

/// Searches random triples (rho, p, q) with [rho, p] = 0 for both signs of
/// mu - tr(rho p q). Absence of a witness within the trial budget is
/// reported by leaving the slot empty, not treated as an error.
pub fn mean_incompatibility_search(
    dim: usize,
    max_trials: usize,
    seed: u64,
) -> Result<MeanIncompatibilityReport> {
    if dim < 2 {
        return Err(Error::Malformed("dimension must be at least 2".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut above = None;
    let mut below = None;
    let mut trials_used = 0;
    for _ in 0..max_trials {
        trials_used += 1;
        let p = random_projector(dim, &mut rng);
        let q = random_projector(dim, &mut rng);
        let rho = random_commuting_density(p.operator(), &mut rng);
        // tr(rho p q) = tr(rho q p) is real when [rho, p] = 0.
        let joint = trace_re(&(rho.matrix() * p.matrix() * q.matrix()));
        let gap = two_time_mean(&rho, &p, &q)? - joint;
        if gap > MEAN_GAP_MARGIN && above.is_none() {
            above = Some(MeanIncompatibilityWitness {
                rho: rho.clone(),
                p: p.clone(),
                q: q.clone(),
                gap,
            });
        }
        if gap < -MEAN_GAP_MARGIN && below.is_none() {
            below = Some(MeanIncompatibilityWitness { rho, p, q, gap });
        }
        if above.is_some() && below.is_some() {
            break;
        }
    }
    Ok(MeanIncompatibilityReport {
        above,
        below,
        trials_used,
    })
}
