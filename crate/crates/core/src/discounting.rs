//! Reliability and importance discounting.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::bba::MassFunction;
use crate::error::{Error, Result};
use crate::fusion::{fuse, FusionOptions, FusionResult, FusionRule};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiscountProfile {
    /// Discounted mass goes to total ignorance.
    Reliability(f64),
    /// Discounted mass goes to the empty set.
    Importance(f64),
}

impl DiscountProfile {
    pub fn factor(&self) -> f64 {
        match *self {
            DiscountProfile::Reliability(x) | DiscountProfile::Importance(x) => x,
        }
    }

    pub fn apply(&self, m: &MassFunction) -> Result<MassFunction> {
        match *self {
            DiscountProfile::Reliability(a) => reliability_discount(m, a),
            DiscountProfile::Importance(b) => importance_discount(m, b),
        }
    }
}

fn check_factor(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::FactorOutOfRange(x))
    }
}

fn scaled(m: &MassFunction, factor: f64) -> BTreeMap<u32, f64> {
    m.focal_bits()
        .iter()
        .map(|(&b, &v)| (b, v * factor))
        .collect()
}

/// `m_α(X) = α·m(X)`, with the remaining `1 − α` added to total ignorance.
pub fn reliability_discount(m: &MassFunction, alpha: f64) -> Result<MassFunction> {
    check_factor(alpha)?;
    if !m.is_normalized() {
        return Err(Error::NotNormalized {
            total: m.total_mass(),
        });
    }
    let mut focal = scaled(m, alpha);
    *focal.entry(m.frame().mask()).or_insert(0.0) += 1.0 - alpha;
    MassFunction::from_focal(m.frame().clone(), focal, false)
}

/// `m_β(X) = β·m(X)`, with the remaining `1 − β` added to `∅`.
pub fn importance_discount(m: &MassFunction, beta: f64) -> Result<MassFunction> {
    check_factor(beta)?;
    let mut focal = scaled(m, beta);
    *focal.entry(0).or_insert(0.0) += 1.0 - beta;
    MassFunction::from_focal(m.frame().clone(), focal, true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceFusion {
    /// Normalized fused mass function.
    pub fused: MassFunction,
    /// PCR output on the discounted sources before normalization.
    pub raw: FusionResult,
    /// Total mass of `raw`, used as the normalizing divisor.
    pub raw_total: f64,
}

/// Importance-discounted fusion in three steps: discount each source, drop
/// the mass put on `∅` and fuse the sub-normal sources, then rescale the
/// result to sum to one.
pub fn importance_fuse(
    sources: &[MassFunction],
    betas: &[f64],
    rule: FusionRule,
    options: &FusionOptions,
) -> Result<ImportanceFusion> {
    if rule == FusionRule::Conjunctive {
        return Err(Error::UnsupportedRule);
    }
    if sources.len() != betas.len() {
        return Err(Error::TooFewSources);
    }
    let discounted = sources
        .iter()
        .zip(betas)
        .map(|(m, &b)| importance_discount(m, b).map(|d| d.without_empty()))
        .collect::<Result<Vec<_>>>()?;
    if discounted.iter().any(MassFunction::is_empty) {
        return Err(Error::SuppressedEvidence);
    }
    let raw = fuse(rule, &discounted, options)?;
    let raw_total = raw.fused.total_mass();
    if raw_total <= 0.0 {
        return Err(Error::SuppressedEvidence);
    }
    let fused = raw.fused.normalize()?;
    Ok(ImportanceFusion {
        fused,
        raw,
        raw_total,
    })
}
