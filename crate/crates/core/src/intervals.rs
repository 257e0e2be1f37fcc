//! Interval-valued masses with naive endpoint arithmetic.
//!
//! Every operation runs through the same kernels as precise masses. Values
//! may leave `[0, 1]` mid-computation; use [`IntervalMass::clamp_unit`] when
//! reporting.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::bba::{MassFunction, NORMALIZATION_TOLERANCE};
use crate::error::{Error, Result};
use crate::frames::{Frame, Subset};
use crate::fusion::{combine_raw, common_frame, ConflictLedgerEntry, FusionOptions, FusionRule};
use crate::scalar::MassScalar;
use crate::transforms::{check_epsilon, dsmp_raw};

/// Closed interval `[lo, hi]` of non-negative reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalMass {
    lo: f64,
    hi: f64,
}

impl IntervalMass {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Result<Self> {
        Self::new(x, x)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, other: &IntervalMass) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_value(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Intersection with `[0, 1]`, for reporting probabilities.
    pub fn clamp_unit(&self) -> IntervalMass {
        IntervalMass {
            lo: self.lo.min(1.0),
            hi: self.hi.min(1.0),
        }
    }

    pub fn iadd(&self, other: &IntervalMass) -> IntervalMass {
        IntervalMass {
            lo: self.lo + other.lo,
            hi: self.hi + other.hi,
        }
    }

    pub fn imul(&self, other: &IntervalMass) -> IntervalMass {
        IntervalMass {
            lo: self.lo * other.lo,
            hi: self.hi * other.hi,
        }
    }

    /// Quotient of positive intervals, `[a.lo / b.hi, a.hi / b.lo]`.
    pub fn idiv(&self, other: &IntervalMass) -> Result<IntervalMass> {
        if other.lo <= 0.0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(IntervalMass {
            lo: self.lo / other.hi,
            hi: self.hi / other.lo,
        })
    }
}

impl fmt::Display for IntervalMass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "[{:.*}, {:.*}]", p, self.lo, p, self.hi),
            None => write!(f, "[{}, {}]", self.lo, self.hi),
        }
    }
}

impl MassScalar for IntervalMass {
    fn zero() -> Self {
        IntervalMass { lo: 0.0, hi: 0.0 }
    }

    fn one() -> Self {
        IntervalMass { lo: 1.0, hi: 1.0 }
    }

    fn add(&self, other: &Self) -> Self {
        self.iadd(other)
    }

    fn mul(&self, other: &Self) -> Self {
        self.imul(other)
    }

    fn div(&self, other: &Self) -> Result<Self> {
        self.idiv(other)
    }

    fn is_zero(&self) -> bool {
        self.lo == 0.0 && self.hi == 0.0
    }
}

/// Mass function whose masses are intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMassFunction {
    frame: Frame,
    focal: BTreeMap<u32, IntervalMass>,
}

impl IntervalMassFunction {
    /// Requires no mass on `∅` and `Σ lo ≤ 1 ≤ Σ hi`, so that some precise
    /// selection sums to one.
    pub fn new<I>(frame: &Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, IntervalMass)>,
    {
        let mut focal: BTreeMap<u32, IntervalMass> = BTreeMap::new();
        for (s, m) in entries {
            frame.check(&s)?;
            if m.lo > 1.0 + NORMALIZATION_TOLERANCE {
                return Err(Error::InvalidInterval { lo: m.lo, hi: m.hi });
            }
            focal
                .entry(s.bits())
                .and_modify(|v| *v = v.iadd(&m))
                .or_insert(m);
        }
        focal.retain(|_, m| !m.is_zero());
        if focal.contains_key(&0) {
            return Err(Error::EmptySetMass);
        }
        let r = Self {
            frame: frame.clone(),
            focal,
        };
        let (lo, hi) = (r.lower_total(), r.upper_total());
        if lo > 1.0 + NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { total: lo });
        }
        if hi < 1.0 - NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { total: hi });
        }
        Ok(r)
    }

    /// Degenerate intervals around a precise mass function.
    pub fn from_precise(m: &MassFunction) -> Self {
        Self {
            frame: m.frame().clone(),
            focal: m
                .focal_bits()
                .iter()
                .map(|(&b, &v)| (b, IntervalMass { lo: v, hi: v }))
                .collect(),
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn mass(&self, x: &Subset) -> Result<IntervalMass> {
        self.frame.check(x)?;
        Ok(self
            .focal
            .get(&x.bits())
            .copied()
            .unwrap_or(IntervalMass::zero()))
    }

    pub fn focal(&self) -> impl Iterator<Item = (Subset, IntervalMass)> + '_ {
        let id = self.frame.id();
        let n = self.frame.len();
        self.focal
            .iter()
            .map(move |(&b, &m)| (Subset::raw(id, n, b), m))
    }

    pub fn len(&self) -> usize {
        self.focal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.focal.is_empty()
    }

    pub fn lower_total(&self) -> f64 {
        self.focal.values().map(|m| m.lo).sum()
    }

    pub fn upper_total(&self) -> f64 {
        self.focal.values().map(|m| m.hi).sum()
    }

    fn focal_list(&self) -> Vec<(u32, IntervalMass)> {
        self.focal.iter().map(|(&b, &m)| (b, m)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalFusion {
    pub rule: FusionRule,
    pub fused: IntervalMassFunction,
    pub ledger: Vec<ConflictLedgerEntry<IntervalMass>>,
    pub total_conflict: IntervalMass,
}

/// Interval version of [`fuse`](crate::fuse). Repeated-set weights combine
/// with interval addition (PCR6) or multiplication (PCR5).
pub fn interval_fuse(
    rule: FusionRule,
    sources: &[IntervalMassFunction],
    options: &FusionOptions,
) -> Result<IntervalFusion> {
    if sources.len() < 2 {
        return Err(Error::TooFewSources);
    }
    let frame = common_frame(sources.iter().map(IntervalMassFunction::frame))?;
    let lists: Vec<_> = sources.iter().map(IntervalMassFunction::focal_list).collect();
    let raw = combine_raw(frame.len(), &lists, rule, options)?;
    let ledger = raw
        .ledger
        .into_iter()
        .map(|e| e.into_entry(&frame))
        .collect();
    Ok(IntervalFusion {
        rule,
        fused: IntervalMassFunction {
            frame,
            focal: raw.focal,
        },
        ledger,
        total_conflict: raw.conflict,
    })
}

pub fn interval_pcr6(sources: &[IntervalMassFunction]) -> Result<IntervalMassFunction> {
    interval_fuse(FusionRule::Pcr6, sources, &quiet()).map(|r| r.fused)
}

pub fn interval_pcr5(sources: &[IntervalMassFunction]) -> Result<IntervalMassFunction> {
    interval_fuse(FusionRule::Pcr5, sources, &quiet()).map(|r| r.fused)
}

fn quiet() -> FusionOptions {
    FusionOptions {
        record_ledger: false,
        ..FusionOptions::default()
    }
}

/// Unclamped interval belief and plausibility of `x`.
pub fn interval_bel_pl(
    m: &IntervalMassFunction,
    x: &Subset,
) -> Result<(IntervalMass, IntervalMass)> {
    m.frame.check(x)?;
    let mut bel = IntervalMass::zero();
    let mut pl = IntervalMass::zero();
    for (&y, v) in &m.focal {
        if y == 0 {
            continue;
        }
        if y & !x.bits() == 0 {
            bel = bel.iadd(v);
        }
        if y & x.bits() != 0 {
            pl = pl.iadd(v);
        }
    }
    Ok((bel, pl))
}

/// Unclamped interval DSmP of every atom.
pub fn interval_dsmp(m: &IntervalMassFunction, eps: f64) -> Result<Vec<IntervalMass>> {
    check_epsilon(eps)?;
    dsmp_raw(m.frame.len(), &m.focal, &IntervalMass { lo: eps, hi: eps })
}
