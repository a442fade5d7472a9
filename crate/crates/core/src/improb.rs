//! Lower/upper probability operators for a projector pair, probability
//! intervals on states, conditional intervals, Hausdorff distances,
//! comparative queries and the machine-checkable axiom suite.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{intersection_projector, IntersectionMethod};
use crate::hermitian::{
    eigh, psd_order, DensityMatrix, HermitianOperator, Projector, Tolerances,
};
use crate::matrix::{check_same_dim, commutator, fro_norm, ComplexMatrix};
use crate::random::{random_commuting_density, rng_from_seed};

/// Division floor for conditional probabilities.
const EPS_DIV: f64 = 1e-12;

/// Rounding slack allowed before a computed probability outside [0, 1] is an
/// error rather than a value to clamp.
const INTERVAL_SLACK: f64 = 1e-12;

/// Lower probability operator: the projector onto ran(p) and ran(q).
pub fn lower_operator(p: &Projector, q: &Projector) -> Result<HermitianOperator> {
    let g = intersection_projector(p, q, IntersectionMethod::Spectral)?;
    Ok(g.operator().clone())
}

/// Upper probability operator: I - (p - q)^2 - g(I-p, I-q).
pub fn upper_operator(p: &Projector, q: &Projector) -> Result<HermitianOperator> {
    check_same_dim(p.dim(), q.dim())?;
    let n = p.dim();
    let g_comp = intersection_projector(
        &p.complement(),
        &q.complement(),
        IntersectionMethod::Spectral,
    )?;
    let diff = p.matrix() - q.matrix();
    let m = DMatrix::<Complex64>::identity(n, n) - &diff * &diff - g_comp.matrix();
    Ok(HermitianOperator::from_parts_unchecked(m))
}

/// The operator pair (lower, upper) for a projector pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbabilityOperatorPair {
    pub lower: HermitianOperator,
    pub upper: HermitianOperator,
}

/// Computes both probability operators.
pub fn bounds(p: &Projector, q: &Projector) -> Result<ProbabilityOperatorPair> {
    Ok(ProbabilityOperatorPair {
        lower: lower_operator(p, q)?,
        upper: upper_operator(p, q)?,
    })
}

/// A probability interval 0 <= lp <= up <= 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityInterval {
    pub lp: f64,
    pub up: f64,
}

impl ProbabilityInterval {
    /// Validates ordering and range, clamping only within rounding slack.
    pub fn new(lp: f64, up: f64) -> Result<Self> {
        for v in [lp, up] {
            if !(-INTERVAL_SLACK..=1.0 + INTERVAL_SLACK).contains(&v) {
                return Err(Error::IntervalOutOfRange { value: v });
            }
        }
        if lp > up + INTERVAL_SLACK {
            return Err(Error::IntervalOutOfRange { value: lp - up });
        }
        let clamp = |v: f64| v.clamp(0.0, 1.0);
        let (lp, up) = (clamp(lp), clamp(up));
        Ok(Self {
            lp: lp.min(up),
            up,
        })
    }

    pub fn width(&self) -> f64 {
        self.up - self.lp
    }
}

/// Interval of joint probability for (p, q) on the state rho.
pub fn probability_interval(
    rho: &DensityMatrix,
    p: &Projector,
    q: &Projector,
) -> Result<ProbabilityInterval> {
    check_same_dim(rho.dim(), p.dim())?;
    check_same_dim(p.dim(), q.dim())?;
    let pair = bounds(p, q)?;
    ProbabilityInterval::new(
        rho.expectation(pair.lower.matrix()),
        rho.expectation(pair.upper.matrix()),
    )
}

/// Conditional interval: both bounds divided by tr(rho q).
pub fn conditional_interval(
    rho: &DensityMatrix,
    p: &Projector,
    q: &Projector,
) -> Result<ProbabilityInterval> {
    let weight = rho.expectation(q.matrix());
    if weight <= EPS_DIV {
        return Err(Error::ConditionOnNullEvent { weight });
    }
    let plain = probability_interval(rho, p, q)?;
    ProbabilityInterval::new(plain.lp / weight, plain.up / weight)
}

/// Hausdorff distance between two probability intervals.
pub fn interval_distance(a: &ProbabilityInterval, b: &ProbabilityInterval) -> f64 {
    (a.lp - b.lp).abs().max((a.up - b.up).abs())
}

/// Verdict of a sure-dominance query, with the achieved margin.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DominanceVerdict {
    pub surely_more_probable: bool,
    /// tr(rho lower_1) - tr(rho upper_2).
    pub margin: f64,
}

const DOMINANCE_TIE: f64 = 1e-12;

/// Is (p1, q1) surely more probable than (p2, q2) on rho?
pub fn sure_dominance(
    rho: &DensityMatrix,
    pair1: (&Projector, &Projector),
    pair2: (&Projector, &Projector),
) -> Result<DominanceVerdict> {
    check_same_dim(rho.dim(), pair1.0.dim())?;
    check_same_dim(pair1.0.dim(), pair2.0.dim())?;
    let lower = lower_operator(pair1.0, pair1.1)?;
    let upper = upper_operator(pair2.0, pair2.1)?;
    let margin = rho.expectation(lower.matrix()) - rho.expectation(upper.matrix());
    Ok(DominanceVerdict {
        surely_more_probable: margin > DOMINANCE_TIE,
        margin,
    })
}

/// Ascending eigenvalues of lower(pair1) - upper(pair2). A positive
/// eigenvalue certifies a dominating state (its eigenvector, as a pure state).
pub fn dominance_spectrum(
    p1: &Projector,
    q1: &Projector,
    p2: &Projector,
    q2: &Projector,
) -> Result<Vec<f64>> {
    check_same_dim(p1.dim(), p2.dim())?;
    let lower = lower_operator(p1, q1)?;
    let upper = upper_operator(p2, q2)?;
    let diff = HermitianOperator::from_parts_unchecked(lower.matrix() - upper.matrix());
    Ok(eigh(&diff)?.eigenvalues)
}

/// Outcome of one axiom check: worst margin over everything probed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub pass: bool,
    pub worst_margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ComplexMatrix>,
}

impl AxiomCheck {
    fn from_margin(margin: f64, tol: f64) -> Self {
        Self {
            pass: margin <= tol,
            worst_margin: margin,
            witness: None,
        }
    }
}

/// Per-axiom report for a projector pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxiomReport {
    /// 0 <= lower <= upper <= I.
    pub ordering: AxiomCheck,
    /// Symmetry under swapping p and q.
    pub symmetry: AxiomCheck,
    /// Reduction to pq for commuting pairs (skipped for noncommuting input).
    pub commuting_reduction: Option<AxiomCheck>,
    /// Sandwich tr(rho lower) <= tr(rho p q) <= tr(rho upper) on states
    /// commuting with p or q. Sampling evidence, not proof; backed by the
    /// operator-level pinching check below.
    pub sandwich: AxiomCheck,
    /// Pinched operator-level sandwich: compressing pq - lower and
    /// upper - pq by the eigenprojectors of q (and of p) stays PSD.
    pub sandwich_pinched: AxiomCheck,
    /// Commutation of both operators with p and q.
    pub operator_commutation: AxiomCheck,
    /// Mutual commutation of lower and upper.
    pub mutual_commutation: AxiomCheck,
    /// lower(p, I) = upper(p, I) = p and lower(p, 0) = upper(p, 0) = 0.
    pub marginal_identities: AxiomCheck,
    pub all_pass: bool,
}

impl AxiomReport {
    pub fn checks(&self) -> Vec<(&'static str, &AxiomCheck)> {
        let mut out = vec![
            ("ordering", &self.ordering),
            ("symmetry", &self.symmetry),
        ];
        if let Some(check) = &self.commuting_reduction {
            out.push(("commuting_reduction", check));
        }
        out.push(("sandwich", &self.sandwich));
        out.push(("sandwich_pinched", &self.sandwich_pinched));
        out.push(("operator_commutation", &self.operator_commutation));
        out.push(("mutual_commutation", &self.mutual_commutation));
        out.push(("marginal_identities", &self.marginal_identities));
        out
    }
}

const AXIOM_TOL: f64 = 1e-8;

/// Pinching of `x` by the eigenprojectors of `h`: sum of E_k x E_k.
fn pinch(x: &DMatrix<Complex64>, h: &HermitianOperator) -> Result<DMatrix<Complex64>> {
    let spec = eigh(h)?;
    let n = h.dim();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    // Group eigenvectors into eigenprojectors of (numerically) equal
    // eigenvalues, then compress.
    let mut start = 0;
    while start < n {
        let mut stop = start + 1;
        while stop < n && (spec.eigenvalues[stop] - spec.eigenvalues[start]).abs() < 1e-8 {
            stop += 1;
        }
        let mut e = DMatrix::<Complex64>::zeros(n, n);
        for k in start..stop {
            let v = spec.eigenvectors.column(k);
            e += &v * v.adjoint();
        }
        out += &e * x * &e;
        start = stop;
    }
    Ok(out)
}

fn min_eig(m: DMatrix<Complex64>) -> Result<f64> {
    let spec = eigh(&HermitianOperator::from_parts_unchecked(m))?;
    Ok(spec.eigenvalues.first().copied().unwrap_or(0.0))
}

/// Runs the full axiom suite on a projector pair.
///
/// The sandwich axiom is probed on the supplied states that commute with p
/// or q, plus `synthetic_states` deterministically generated commuting states
/// (diagonal in the eigenbasis of q, then of p) from the given seed.
pub fn check_axioms(
    p: &Projector,
    q: &Projector,
    states: &[DensityMatrix],
    synthetic_states: usize,
    seed: u64,
) -> Result<AxiomReport> {
    check_same_dim(p.dim(), q.dim())?;
    let pair = bounds(p, q)?;
    let n = p.dim();
    let identity = HermitianOperator::from_parts_unchecked(DMatrix::identity(n, n));
    let zero = HermitianOperator::from_parts_unchecked(DMatrix::zeros(n, n));

    let neg = |v: &crate::hermitian::OrderVerdict| match v {
        crate::hermitian::OrderVerdict::Holds => 0.0,
        crate::hermitian::OrderVerdict::Fails { min_eig } => -min_eig,
    };
    let ordering_margin = [
        neg(&psd_order(&pair.lower, &zero, AXIOM_TOL)?),
        neg(&psd_order(&pair.upper, &pair.lower, AXIOM_TOL)?),
        neg(&psd_order(&identity, &pair.upper, AXIOM_TOL)?),
    ]
    .into_iter()
    .fold(0.0_f64, f64::max);
    let ordering = AxiomCheck::from_margin(ordering_margin, AXIOM_TOL);

    let swapped = bounds(q, p)?;
    let symmetry_margin = fro_norm(&(pair.lower.matrix() - swapped.lower.matrix()))
        .max(fro_norm(&(pair.upper.matrix() - swapped.upper.matrix())));
    let symmetry = AxiomCheck::from_margin(symmetry_margin, AXIOM_TOL);

    let pq = p.matrix() * q.matrix();
    let commuting = fro_norm(&commutator(p.matrix(), q.matrix())) <= AXIOM_TOL;
    let commuting_reduction = if commuting {
        let margin = fro_norm(&(pair.lower.matrix() - &pq))
            .max(fro_norm(&(pair.upper.matrix() - &pq)));
        Some(AxiomCheck::from_margin(margin, AXIOM_TOL))
    } else {
        None
    };

    // Sandwich on commuting states: supplied ones that qualify, plus
    // synthesized ones diagonal in the eigenbasis of q and of p.
    let mut probes: Vec<DensityMatrix> = states
        .iter()
        .filter(|rho| {
            fro_norm(&commutator(rho.matrix(), p.matrix())) <= AXIOM_TOL
                || fro_norm(&commutator(rho.matrix(), q.matrix())) <= AXIOM_TOL
        })
        .cloned()
        .collect();
    let mut rng = rng_from_seed(seed);
    for k in 0..synthetic_states {
        let anchor = if k % 2 == 0 { q } else { p };
        probes.push(random_commuting_density(anchor.operator(), &mut rng));
    }
    let mut sandwich_margin = 0.0_f64;
    let mut witness = None;
    for rho in &probes {
        let mid = rho.expectation(&pq);
        let low = rho.expectation(pair.lower.matrix());
        let high = rho.expectation(pair.upper.matrix());
        let violation = (low - mid).max(mid - high).max(0.0);
        if violation > sandwich_margin {
            sandwich_margin = violation;
            if violation > AXIOM_TOL {
                witness = Some(ComplexMatrix::new(rho.matrix().clone())?);
            }
        }
    }
    let mut sandwich = AxiomCheck::from_margin(sandwich_margin, AXIOM_TOL);
    sandwich.witness = witness;

    // Operator-level sufficient condition: pinching by the eigenprojectors
    // of q (resp. p) must keep pq - lower and upper - pq PSD.
    let lower_gap = symmetrized_gap(&pq, pair.lower.matrix(), false);
    let upper_gap = symmetrized_gap(&pq, pair.upper.matrix(), true);
    let mut pinched_margin = 0.0_f64;
    for anchor in [q, p] {
        for gap in [&lower_gap, &upper_gap] {
            let compressed = pinch(gap, anchor.operator())?;
            pinched_margin = pinched_margin.max(-min_eig(compressed)?);
        }
    }
    let sandwich_pinched = AxiomCheck::from_margin(pinched_margin, AXIOM_TOL);

    let mut commutation_margin = 0.0_f64;
    for op in [&pair.lower, &pair.upper] {
        for proj in [p, q] {
            commutation_margin =
                commutation_margin.max(fro_norm(&commutator(op.matrix(), proj.matrix())));
        }
    }
    let operator_commutation = AxiomCheck::from_margin(commutation_margin, AXIOM_TOL);

    let mutual = fro_norm(&commutator(pair.lower.matrix(), pair.upper.matrix()));
    let mutual_commutation = AxiomCheck::from_margin(mutual, AXIOM_TOL);

    let with_identity = bounds(p, &Projector::identity(n))?;
    let with_zero = bounds(p, &Projector::zero(n))?;
    let marginal_margin = [
        fro_norm(&(with_identity.lower.matrix() - p.matrix())),
        fro_norm(&(with_identity.upper.matrix() - p.matrix())),
        fro_norm(with_zero.lower.matrix()),
        fro_norm(with_zero.upper.matrix()),
    ]
    .into_iter()
    .fold(0.0_f64, f64::max);
    let marginal_identities = AxiomCheck::from_margin(marginal_margin, AXIOM_TOL);

    let all_pass = [
        &ordering,
        &symmetry,
        &sandwich,
        &sandwich_pinched,
        &operator_commutation,
        &mutual_commutation,
        &marginal_identities,
    ]
    .into_iter()
    .all(|c| c.pass)
        && commuting_reduction.as_ref().map_or(true, |c| c.pass);

    Ok(AxiomReport {
        ordering,
        symmetry,
        commuting_reduction,
        sandwich,
        sandwich_pinched,
        operator_commutation,
        mutual_commutation,
        marginal_identities,
        all_pass,
    })
}

/// (pq + qp)/2 - lower, or upper - (pq + qp)/2.
fn symmetrized_gap(
    pq: &DMatrix<Complex64>,
    bound: &DMatrix<Complex64>,
    upper: bool,
) -> DMatrix<Complex64> {
    let sym = (pq + pq.adjoint()) * Complex64::new(0.5, 0.0);
    if upper {
        bound - sym
    } else {
        sym - bound
    }
}

/// A found violation of subadditivity for the span function in dimension 3.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubadditivityWitness {
    pub p: ComplexMatrix,
    /// Max eigenvalue of g(I-p, I-q) + g(I-p, I-k); exceeding 1 shows the
    /// excess over I.
    pub max_eigenvalue: f64,
    pub trials_used: usize,
}

/// Searches dimension 3 for a rank-1 p such that, for the fixed orthogonal
/// rank-1 pair q = diag(1,0,0) and k = diag(0,0,1), the sum
/// g(I-p, I-q) + g(I-p, I-k) has an eigenvalue above 1.
pub fn non_subadditivity_witness_search(
    max_trials: usize,
    seed: u64,
) -> Result<Option<SubadditivityWitness>> {
    let tol = Tolerances::default();
    let q = crate::hermitian::validate_projector(
        ComplexMatrix::from_real_rows(3, &[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]])?,
        &tol,
    )?;
    let k = crate::hermitian::validate_projector(
        ComplexMatrix::from_real_rows(3, &[&[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 1.0]])?,
        &tol,
    )?;
    let mut rng = rng_from_seed(seed);
    for trial in 0..max_trials {
        let p = crate::random::random_projector_with_rank(3, 1, &mut rng);
        let comp = p.complement();
        let g1 = intersection_projector(&comp, &q.complement(), IntersectionMethod::Spectral)?;
        let g2 = intersection_projector(&comp, &k.complement(), IntersectionMethod::Spectral)?;
        let sum = HermitianOperator::from_parts_unchecked(g1.matrix() + g2.matrix());
        let max_eig = eigh(&sum)?.eigenvalues.last().copied().unwrap_or(0.0);
        if max_eig > 1.0 + 1e-6 {
            return Ok(Some(SubadditivityWitness {
                p: ComplexMatrix::new(p.matrix().clone())?,
                max_eigenvalue: max_eig,
                trials_used: trial + 1,
            }));
        }
    }
    Ok(None)
}
