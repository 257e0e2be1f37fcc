//! Evaluation of decision-support hypotheses and comparison of fusion
//! subsystems.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::bba::MassFunction;
use crate::error::{Error, Result};
use crate::frames::{Frame, Subset};
use crate::fusion::common_frame;
use crate::intervals::{interval_bel_pl, interval_dsmp, IntervalMass, IntervalMassFunction};
use crate::scalar::MassScalar;
use crate::transforms::{betp, dsmp};

/// Threshold on the probability of a hypothesis for the DSmP and BetP
/// criteria.
const PROBABILITY_THRESHOLD: f64 = 0.5;
/// Two comparison values closer than this count as a tie.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Accept,
    Reject,
    Undecidable,
}

impl Decision {
    /// Accept when `a` exceeds `b`, reject when it is below, undecidable
    /// on a tie.
    pub fn compare(a: f64, b: f64) -> Self {
        if (a - b).abs() <= TIE_TOLERANCE {
            Decision::Undecidable
        } else if a > b {
            Decision::Accept
        } else {
            Decision::Reject
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Accept => "accept",
            Decision::Reject => "reject",
            Decision::Undecidable => "undecidable",
        }
    }
}

/// Named hypothesis whose acceptance triggers `action`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionHypothesis {
    pub name: String,
    pub set: Subset,
    pub action: String,
}

impl DecisionHypothesis {
    pub fn new(
        frame: &Frame,
        name: impl Into<String>,
        set: Subset,
        action: impl Into<String>,
    ) -> Result<Self> {
        let name = name.into();
        frame.check(&set)?;
        if set.is_empty() || set.is_full() {
            return Err(Error::InvalidHypothesis(name));
        }
        Ok(Self {
            name,
            set,
            action: action.into(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisEvaluation {
    pub name: String,
    pub bel: f64,
    pub pl: f64,
    pub delta: f64,
    pub complement_bel: f64,
    pub complement_pl: f64,
    pub dsmp: f64,
    pub betp: f64,
    pub max_bel: Decision,
    pub max_pl: Decision,
    pub max_dsmp: Decision,
    pub max_betp: Decision,
}

/// Belief, plausibility and probability of each hypothesis, with the
/// decision of every criterion.
pub fn evaluate(
    m: &MassFunction,
    hypotheses: &[DecisionHypothesis],
    eps: f64,
) -> Result<Vec<HypothesisEvaluation>> {
    let p_dsmp = dsmp(m, eps)?;
    let p_betp = betp(m)?;
    hypotheses
        .iter()
        .map(|h| {
            let bi = m.belief_interval(&h.set)?;
            let bar = h.set.complement();
            let complement_bel = m.bel(&bar)?;
            let complement_pl = m.pl(&bar)?;
            let dsmp = p_dsmp.probability_of(&h.set)?;
            let betp = p_betp.probability_of(&h.set)?;
            Ok(HypothesisEvaluation {
                name: h.name.clone(),
                bel: bi.bel,
                pl: bi.pl,
                delta: bi.delta,
                complement_bel,
                complement_pl,
                dsmp,
                betp,
                max_bel: Decision::compare(bi.bel, complement_bel),
                max_pl: Decision::compare(bi.pl, complement_pl),
                max_dsmp: Decision::compare(dsmp, PROBABILITY_THRESHOLD),
                max_betp: Decision::compare(betp, PROBABILITY_THRESHOLD),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalHypothesisEvaluation {
    pub name: String,
    /// Unclamped interval belief and plausibility.
    pub bel: IntervalMass,
    pub pl: IntervalMass,
    /// Probability range `[bel.lo, min(1, pl.hi)]`.
    pub probability: IntervalMass,
    /// Probability range of the complement.
    pub complement_probability: IntervalMass,
    /// Unclamped interval DSmP of the hypothesis.
    pub dsmp: IntervalMass,
    pub max_bel: Decision,
    pub max_pl: Decision,
    pub max_dsmp: Decision,
}

/// Interval counterpart of [`evaluate`]. Max-Bel compares the lower ends of
/// the probability ranges of `H` and `H̄`, max-Pl their upper ends. DSmP
/// accepts when the whole range is above one half and rejects when it is
/// below.
pub fn evaluate_interval(
    m: &IntervalMassFunction,
    hypotheses: &[DecisionHypothesis],
    eps: f64,
) -> Result<Vec<IntervalHypothesisEvaluation>> {
    let p = interval_dsmp(m, eps)?;
    hypotheses
        .iter()
        .map(|h| {
            let (bel, pl) = interval_bel_pl(m, &h.set)?;
            let upper = pl.hi().min(1.0);
            let lower = bel.lo().min(1.0);
            let probability = IntervalMass::new(lower, upper.max(lower))?;
            let complement_probability = IntervalMass::new(1.0 - upper.max(lower), 1.0 - lower)?;
            let dsmp = h
                .set
                .atoms()
                .fold(IntervalMass::zero(), |acc, i| acc.iadd(&p[i]));
            let shown = dsmp.clamp_unit();
            let max_dsmp = if shown.lo() > PROBABILITY_THRESHOLD {
                Decision::Accept
            } else if shown.hi() < PROBABILITY_THRESHOLD {
                Decision::Reject
            } else {
                Decision::Undecidable
            };
            Ok(IntervalHypothesisEvaluation {
                name: h.name.clone(),
                bel,
                pl,
                max_bel: Decision::compare(probability.lo(), complement_probability.lo()),
                max_pl: Decision::compare(probability.hi(), complement_probability.hi()),
                probability,
                complement_probability,
                dsmp,
                max_dsmp,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsystemMetrics {
    pub name: String,
    /// Imprecision on each hypothesis, in hypothesis order.
    pub deltas: Vec<f64>,
    /// Shannon entropy of the DSmP of the fused result.
    pub entropy: f64,
    pub pic: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsystemComparison {
    pub key_hypothesis: String,
    /// Metrics sorted by subsystem name.
    pub metrics: Vec<SubsystemMetrics>,
    /// Smallest imprecision on the key hypothesis, ties broken by entropy.
    pub preferred: String,
    /// Most precise subsystem on the key hypothesis alone.
    pub most_precise: String,
    /// Most informative subsystem (lowest DSmP entropy).
    pub most_informative: String,
    /// Precision and informativeness point to different subsystems.
    pub criterion_conflict: bool,
    /// The preferred subsystem is not strictly better than another one on
    /// both criteria.
    pub tie: bool,
}

/// Compares fused results of several subsystems on the imprecision of the
/// key hypothesis and the entropy of their DSmP.
pub fn compare_subsystems(
    results: &[(String, MassFunction)],
    hypotheses: &[DecisionHypothesis],
    key: usize,
    eps: f64,
) -> Result<SubsystemComparison> {
    if results.len() < 2 {
        return Err(Error::TooFewSources);
    }
    common_frame(results.iter().map(|(_, m)| m.frame()))?;
    let key_h = hypotheses
        .get(key)
        .ok_or_else(|| Error::InvalidHypothesis(key.to_string()))?;

    let mut sorted: Vec<&(String, MassFunction)> = results.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let metrics = sorted
        .iter()
        .map(|(name, m)| {
            let deltas = hypotheses
                .iter()
                .map(|h| m.belief_interval(&h.set).map(|b| b.delta))
                .collect::<Result<Vec<_>>>()?;
            let p = dsmp(m, eps)?;
            Ok(SubsystemMetrics {
                name: name.clone(),
                deltas,
                entropy: p.entropy(),
                pic: p.pic(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let lexi = |a: &SubsystemMetrics, b: &SubsystemMetrics| {
        let d = a.deltas[key] - b.deltas[key];
        if d.abs() > TIE_TOLERANCE {
            return d < 0.0;
        }
        a.entropy < b.entropy - TIE_TOLERANCE
    };
    let mut best = &metrics[0];
    for m in &metrics[1..] {
        if lexi(m, best) {
            best = m;
        }
    }
    let tie = metrics
        .iter()
        .filter(|m| m.name != best.name)
        .any(|m| !lexi(best, m));

    let mut most_precise = &metrics[0];
    let mut most_informative = &metrics[0];
    for m in &metrics[1..] {
        if m.deltas[key] < most_precise.deltas[key] - TIE_TOLERANCE {
            most_precise = m;
        }
        if m.entropy < most_informative.entropy - TIE_TOLERANCE {
            most_informative = m;
        }
    }
    let criterion_conflict = most_precise.name != most_informative.name
        && (most_informative.deltas[key] - most_precise.deltas[key]).abs() > TIE_TOLERANCE
        && (most_precise.entropy - most_informative.entropy).abs() > TIE_TOLERANCE;

    Ok(SubsystemComparison {
        key_hypothesis: key_h.name.clone(),
        preferred: best.name.clone(),
        most_precise: most_precise.name.clone(),
        most_informative: most_informative.name.clone(),
        criterion_conflict,
        tie,
        metrics,
    })
}
