//! Classical imprecise probability over finite event spaces: generalized
//! Kolmogorov axioms, derived inequalities, credal-set envelopes and
//! classical joint probabilities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::improb::ProbabilityInterval;

/// Hard cap on the number of elementary outcomes (2^n stored values).
pub const MAX_OUTCOMES: usize = 20;
/// Up to this size, pairwise checks are exhaustive; above it, seeded
/// sampling of pairs is used.
pub const EXHAUSTIVE_LIMIT: usize = 10;
const SAMPLED_PAIRS: usize = 100_000;

/// Numerical slack for the classical inequality checks.
const CLASSICAL_TOL: f64 = 1e-9;

/// A finite event space; events are subsets encoded as bitmasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventSpace {
    pub n: usize,
}

impl EventSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Malformed("event space needs at least one outcome".into()));
        }
        if n > MAX_OUTCOMES {
            return Err(Error::EventSpaceTooLarge { n, max: MAX_OUTCOMES });
        }
        Ok(Self { n })
    }

    pub fn num_events(&self) -> usize {
        1usize << self.n
    }

    pub fn full(&self) -> u32 {
        (self.num_events() - 1) as u32
    }

    pub fn contains(&self, event: u32) -> bool {
        event <= self.full()
    }

    pub fn check_event(&self, event: u32) -> Result<()> {
        if self.contains(event) {
            Ok(())
        } else {
            Err(Error::EventOutOfSpace { mask: event, n: self.n })
        }
    }
}

/// Lower/upper set functions over all 2^n events, indexed by bitmask.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImpreciseMeasure {
    pub n: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ImpreciseMeasure {
    pub fn space(&self) -> EventSpace {
        EventSpace { n: self.n }
    }

    pub fn validate_shape(&self) -> Result<()> {
        let space = EventSpace::new(self.n)?;
        if self.lower.len() != space.num_events() || self.upper.len() != space.num_events() {
            return Err(Error::Malformed(format!(
                "expected {} lower/upper values",
                space.num_events()
            )));
        }
        if !self
            .lower
            .iter()
            .chain(self.upper.iter())
            .all(|v| v.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(())
    }
}

/// A non-empty set of precise distributions over the same outcomes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CredalSet {
    pub n: usize,
    pub distributions: Vec<Vec<f64>>,
}

impl CredalSet {
    pub fn new(n: usize, distributions: Vec<Vec<f64>>) -> Result<Self> {
        EventSpace::new(n)?;
        if distributions.is_empty() {
            return Err(Error::EmptyCredalSet);
        }
        for d in &distributions {
            if d.len() != n {
                return Err(Error::InvalidDistribution(format!(
                    "expected {n} weights, got {}",
                    d.len()
                )));
            }
            if d.iter().any(|&w| !w.is_finite() || w < -1e-15) {
                return Err(Error::InvalidDistribution("negative weight".into()));
            }
            let total: f64 = d.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
            }
        }
        Ok(Self { n, distributions })
    }

    pub fn event_probability(dist: &[f64], event: u32) -> f64 {
        dist.iter()
            .enumerate()
            .filter(|(i, _)| event & (1 << i) != 0)
            .map(|(_, &w)| w)
            .sum()
    }
}

/// Pointwise envelope: lower(A) = min over distributions of P(A), upper = max.
pub fn envelope(c: &CredalSet) -> Result<ImpreciseMeasure> {
    if c.distributions.is_empty() {
        return Err(Error::EmptyCredalSet);
    }
    let space = EventSpace::new(c.n)?;
    let events = space.num_events();
    let mut lower = vec![f64::INFINITY; events];
    let mut upper = vec![f64::NEG_INFINITY; events];
    for dist in &c.distributions {
        // One subset-sum sweep per distribution.
        let mut probs = vec![0.0_f64; events];
        for mask in 1..events {
            let low_bit = mask & mask.wrapping_neg();
            let idx = low_bit.trailing_zeros() as usize;
            probs[mask] = probs[mask ^ low_bit] + dist[idx];
        }
        for (mask, &p) in probs.iter().enumerate() {
            lower[mask] = lower[mask].min(p);
            upper[mask] = upper[mask].max(p);
        }
    }
    for v in lower.iter_mut().chain(upper.iter_mut()) {
        *v = v.clamp(0.0, 1.0);
    }
    Ok(ImpreciseMeasure {
        n: c.n,
        lower,
        upper,
    })
}

/// One checked condition with the worst violation found.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassicalCheck {
    pub name: String,
    pub pass: bool,
    pub worst_violation: f64,
    /// Event pair realizing the worst violation, if applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(u32, u32)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassicalReport {
    pub checks: Vec<ClassicalCheck>,
    pub all_pass: bool,
    /// True when every event pair was checked, false under sampling.
    pub exhaustive: bool,
}

struct CheckAccumulator {
    name: &'static str,
    worst: f64,
    witness: Option<(u32, u32)>,
}

impl CheckAccumulator {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            worst: 0.0,
            witness: None,
        }
    }

    fn observe(&mut self, violation: f64, a: u32, b: u32) {
        if violation > self.worst {
            self.worst = violation;
            self.witness = Some((a, b));
        }
    }

    fn finish(self) -> ClassicalCheck {
        ClassicalCheck {
            name: self.name.to_string(),
            pass: self.worst <= CLASSICAL_TOL,
            worst_violation: self.worst,
            witness: if self.worst > CLASSICAL_TOL {
                self.witness
            } else {
                None
            },
        }
    }
}

fn event_pairs(space: EventSpace, seed: u64) -> (Vec<(u32, u32)>, bool) {
    let events = space.num_events() as u32;
    if space.n <= EXHAUSTIVE_LIMIT {
        let mut pairs = Vec::with_capacity((events as usize) * (events as usize));
        for a in 0..events {
            for b in 0..events {
                pairs.push((a, b));
            }
        }
        (pairs, true)
    } else {
        use rand::Rng;
        let mut rng = crate::random::rng_from_seed(seed);
        let pairs = (0..SAMPLED_PAIRS)
            .map(|_| (rng.gen_range(0..events), rng.gen_range(0..events)))
            .collect();
        (pairs, false)
    }
}

/// Verifies the generalized Kolmogorov axioms: boundary values, conjugacy,
/// superadditivity of lower and subadditivity of upper on disjoint pairs.
pub fn check_axioms_classical(m: &ImpreciseMeasure) -> Result<ClassicalReport> {
    check_axioms_classical_seeded(m, 0)
}

pub fn check_axioms_classical_seeded(m: &ImpreciseMeasure, seed: u64) -> Result<ClassicalReport> {
    m.validate_shape()?;
    let space = m.space();
    let full = space.full() as usize;

    let mut boundary = CheckAccumulator::new("boundary: lower(empty)=0, upper(full)=1");
    boundary.observe(m.lower[0].abs(), 0, 0);
    boundary.observe((m.upper[full] - 1.0).abs(), space.full(), space.full());

    let mut range = CheckAccumulator::new("range: 0 <= lower <= upper <= 1");
    for a in 0..=space.full() {
        let (lo, up) = (m.lower[a as usize], m.upper[a as usize]);
        range.observe((-lo).max(lo - up).max(up - 1.0).max(0.0), a, a);
    }

    let mut conjugacy = CheckAccumulator::new("conjugacy: upper(A) = 1 - lower(complement)");
    for a in 0..=space.full() {
        let comp = space.full() & !a;
        conjugacy.observe(
            (m.upper[a as usize] - (1.0 - m.lower[comp as usize])).abs(),
            a,
            comp,
        );
    }

    let (pairs, exhaustive) = event_pairs(space, seed);
    let mut superadd = CheckAccumulator::new("lower superadditive on disjoint pairs");
    let mut subadd = CheckAccumulator::new("upper subadditive on disjoint pairs");
    for &(a, b) in &pairs {
        if a & b != 0 {
            continue;
        }
        let union = (a | b) as usize;
        superadd.observe(
            m.lower[a as usize] + m.lower[b as usize] - m.lower[union],
            a,
            b,
        );
        subadd.observe(
            m.upper[union] - m.upper[a as usize] - m.upper[b as usize],
            a,
            b,
        );
    }

    let checks: Vec<ClassicalCheck> = [boundary, range, conjugacy, superadd, subadd]
        .into_iter()
        .map(CheckAccumulator::finish)
        .collect();
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(ClassicalReport {
        checks,
        all_pass,
        exhaustive,
    })
}

/// Verifies the inequalities derived from the axioms: monotonicity, the
/// mixed disjoint bound, the modular inequality, subadditivity of the
/// interval width, and the three two-event chains.
pub fn check_derived_inequalities(m: &ImpreciseMeasure) -> Result<ClassicalReport> {
    check_derived_inequalities_seeded(m, 0)
}

pub fn check_derived_inequalities_seeded(m: &ImpreciseMeasure, seed: u64) -> Result<ClassicalReport> {
    m.validate_shape()?;
    let space = m.space();
    let lo = |a: u32| m.lower[a as usize];
    let up = |a: u32| m.upper[a as usize];

    let mut mono_upper = CheckAccumulator::new("monotonicity of upper");
    let mut mono_lower = CheckAccumulator::new("monotonicity of lower");
    let mut mixed = CheckAccumulator::new("upper(A|B) >= upper(A)+lower(B) >= lower(A|B), disjoint");
    let mut pointwise = CheckAccumulator::new("upper(A) >= lower(A)");
    let mut modular = CheckAccumulator::new("lower(A)+lower(B) <= upper(A|B)+lower(A&B)");
    let mut width = CheckAccumulator::new("interval width subadditive on disjoint pairs");
    let mut chain1 = CheckAccumulator::new("chain: lower(A|B)+lower(A&B) <= lower(A)+upper(B) <= upper(A|B)+upper(A&B)");
    let mut chain2 = CheckAccumulator::new("chain: lower(A)+lower(B) <= lower(A|B)+upper(A&B) <= upper(A)+upper(B)");
    let mut chain3 = CheckAccumulator::new("chain: lower(A)+lower(B) <= upper(A|B)+lower(A&B) <= upper(A)+upper(B)");

    for a in 0..=space.full() {
        pointwise.observe(lo(a) - up(a), a, a);
    }

    let (pairs, exhaustive) = event_pairs(space, seed);
    for &(a, b) in &pairs {
        let (u, i) = (a | b, a & b);
        if b & !a == 0 {
            // b is a subset of a
            mono_upper.observe(up(b) - up(a), a, b);
            mono_lower.observe(lo(b) - lo(a), a, b);
        }
        if i == 0 {
            mixed.observe(
                (up(a) + lo(b) - up(u)).max(lo(u) - up(a) - lo(b)),
                a,
                b,
            );
            let dp = |e: u32| up(e) - lo(e);
            width.observe(dp(u) - dp(a) - dp(b), a, b);
        }
        modular.observe(lo(a) + lo(b) - up(u) - lo(i), a, b);
        chain1.observe(
            (lo(u) + lo(i) - lo(a) - up(b)).max(lo(a) + up(b) - up(u) - up(i)),
            a,
            b,
        );
        chain2.observe(
            (lo(a) + lo(b) - lo(u) - up(i)).max(lo(u) + up(i) - up(a) - up(b)),
            a,
            b,
        );
        chain3.observe(
            (lo(a) + lo(b) - up(u) - lo(i)).max(up(u) + lo(i) - up(a) - up(b)),
            a,
            b,
        );
    }

    let checks: Vec<ClassicalCheck> = [
        pointwise, mono_upper, mono_lower, mixed, modular, width, chain1, chain2, chain3,
    ]
    .into_iter()
    .map(CheckAccumulator::finish)
    .collect();
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(ClassicalReport {
        checks,
        all_pass,
        exhaustive,
    })
}

/// Joint probabilities of two events: (lower(A&B), upper(A&B)).
pub fn classical_joint(m: &ImpreciseMeasure, a: u32, b: u32) -> Result<ProbabilityInterval> {
    m.validate_shape()?;
    let space = m.space();
    space.check_event(a)?;
    space.check_event(b)?;
    let i = (a & b) as usize;
    ProbabilityInterval::new(m.lower[i], m.upper[i])
}

/// The vacuous measure: lower 0 and upper 1 except at the boundary events.
pub fn vacuous_measure(n: usize) -> Result<ImpreciseMeasure> {
    let space = EventSpace::new(n)?;
    let events = space.num_events();
    let mut lower = vec![0.0; events];
    let mut upper = vec![1.0; events];
    lower[events - 1] = 1.0;
    upper[0] = 0.0;
    Ok(ImpreciseMeasure { n, lower, upper })
}
