//! Qualitative masses expressed with equidistant labels.
//!
//! Labels `L_0 … L_{m+1}` map to `i/(m+1)`. Fusion maps the labels to
//! numbers, runs the precise pipeline and maps the result back, either as
//! refined (real-indexed) labels or rounded to the nearest label.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bba::MassFunction;
use crate::error::{Error, Result};
use crate::frames::{Frame, Subset};
use crate::fusion::{fuse, FusionOptions, FusionRule};
use crate::transforms::dsmp;

/// Slack on refined-label normalization `Σ index = m + 1`.
const INDEX_TOLERANCE: f64 = 1e-6;

/// Equidistant label set with `m` interior labels plus `L_0 ≡ 0` and
/// `L_{m+1} ≡ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LabelSet {
    interior: usize,
}

impl LabelSet {
    pub fn new(interior: usize) -> Result<Self> {
        if interior == 0 {
            return Err(Error::InvalidLabelSet);
        }
        Ok(Self { interior })
    }

    pub fn interior(&self) -> usize {
        self.interior
    }

    /// Index of the top label `L_{m+1}`.
    pub fn top(&self) -> usize {
        self.interior + 1
    }

    pub fn value_of(&self, index: usize) -> Result<f64> {
        if index > self.top() {
            return Err(Error::LabelOutOfRange(index as f64));
        }
        Ok(index as f64 / self.top() as f64)
    }

    /// Refined label carrying the number `x ∈ [0, 1]`.
    pub fn refine(&self, x: f64) -> Result<RefinedLabel> {
        RefinedLabel::new(*self, x * self.top() as f64)
    }

    /// Parses `L<i>` into a label index.
    pub fn parse(&self, token: &str) -> Result<usize> {
        let digits = token
            .strip_prefix('L')
            .ok_or_else(|| Error::UnknownAtom(String::from(token)))?;
        let index: usize = digits
            .parse()
            .map_err(|_| Error::UnknownAtom(String::from(token)))?;
        if index > self.top() {
            return Err(Error::LabelOutOfRange(index as f64));
        }
        Ok(index)
    }
}

/// Label with a real index in `[0, m + 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedLabel {
    index: f64,
    set: LabelSet,
}

impl RefinedLabel {
    pub fn new(set: LabelSet, index: f64) -> Result<Self> {
        let top = set.top() as f64;
        if !index.is_finite() || index < -1e-9 || index > top + 1e-9 {
            return Err(Error::LabelOutOfRange(index));
        }
        Ok(Self {
            index: index.clamp(0.0, top),
            set,
        })
    }

    pub fn index(&self) -> f64 {
        self.index
    }

    pub fn label_set(&self) -> LabelSet {
        self.set
    }

    pub fn value(&self) -> f64 {
        self.index / self.set.top() as f64
    }

    pub fn crude(&self) -> usize {
        crude_round(self)
    }
}

impl fmt::Display for RefinedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L_{:.*}", f.precision().unwrap_or(2), self.index)
    }
}

/// Nearest label index; exact halves go to the larger index.
pub fn crude_round(r: &RefinedLabel) -> usize {
    let i = libm::floor(r.index + 0.5) as usize;
    i.min(r.set.top())
}

/// A source whose masses are labels of one label set.
#[derive(Debug, Clone, PartialEq)]
pub struct QualitativeSource {
    set: LabelSet,
    labels: Vec<(Subset, usize)>,
    numeric: MassFunction,
}

impl QualitativeSource {
    /// Labels must add up to the top label `L_{m+1}`.
    pub fn new<I>(frame: &Frame, set: LabelSet, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, usize)>,
    {
        let mut labels: Vec<(Subset, usize)> = Vec::new();
        for (s, i) in entries {
            frame.check(&s)?;
            set.value_of(i)?;
            if i == 0 {
                continue;
            }
            match labels.iter_mut().find(|(x, _)| *x == s) {
                Some((_, j)) => *j += i,
                None => labels.push((s, i)),
            }
        }
        let total: usize = labels.iter().map(|(_, i)| i).sum();
        if total != set.top() {
            return Err(Error::NotNormalized {
                total: total as f64 / set.top() as f64,
            });
        }
        let numeric = MassFunction::new(
            frame,
            labels
                .iter()
                .map(|&(s, i)| (s, i as f64 / set.top() as f64)),
        )?;
        Ok(Self {
            set,
            labels,
            numeric,
        })
    }

    pub fn label_set(&self) -> LabelSet {
        self.set
    }

    pub fn labels(&self) -> &[(Subset, usize)] {
        &self.labels
    }

    /// Equivalent precise mass function.
    pub fn numeric(&self) -> &MassFunction {
        &self.numeric
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelMode {
    Refined,
    Crude,
}

/// A mass expressed both as a refined label and as its nearest label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelMass {
    pub refined: RefinedLabel,
    pub crude: usize,
}

impl LabelMass {
    fn from_value(set: LabelSet, x: f64) -> Result<Self> {
        let refined = set.refine(x)?;
        Ok(Self {
            refined,
            crude: crude_round(&refined),
        })
    }

    pub fn index(&self, mode: LabelMode) -> f64 {
        match mode {
            LabelMode::Refined => self.refined.index(),
            LabelMode::Crude => self.crude as f64,
        }
    }
}

/// Qualitative belief and plausibility of a hypothesis and its complement,
/// as label indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualitativeBelief {
    pub bel: f64,
    pub pl: f64,
    /// `L_{m+1} − pl`.
    pub complement_bel: f64,
    /// `L_{m+1} − bel`.
    pub complement_pl: f64,
    /// False when the labels do not add up to `L_{m+1}`, in which case the
    /// complement bounds are only indicative.
    pub normalized: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualitativeFusion {
    pub set: LabelSet,
    pub mode: LabelMode,
    /// Precise fused mass function behind the labels.
    pub numeric: MassFunction,
    pub labels: Vec<(Subset, LabelMass)>,
    /// Whether the label indices of `mode` add up to `L_{m+1}`.
    pub normalized: bool,
}

impl QualitativeFusion {
    pub fn index_total(&self) -> f64 {
        self.labels.iter().map(|(_, l)| l.index(self.mode)).sum()
    }

    pub fn label(&self, x: &Subset) -> Option<LabelMass> {
        self.labels.iter().find(|(s, _)| s == x).map(|&(_, l)| l)
    }

    /// Label-index sums over the subsets of `x` and the sets meeting `x`.
    /// Complement bounds follow from duality with the top label.
    pub fn belief(&self, x: &Subset) -> Result<QualitativeBelief> {
        self.numeric.frame().check(x)?;
        let mut bel = 0.0;
        let mut pl = 0.0;
        for (y, l) in &self.labels {
            let v = l.index(self.mode);
            if y.bits() & !x.bits() == 0 {
                bel += v;
            }
            if y.bits() & x.bits() != 0 {
                pl += v;
            }
        }
        let top = self.set.top() as f64;
        Ok(QualitativeBelief {
            bel,
            pl,
            complement_bel: top - pl,
            complement_pl: top - bel,
            normalized: self.normalized,
        })
    }
}

/// Fuses qualitative sources through the equivalent precise masses.
pub fn qualitative_fuse(
    sources: &[QualitativeSource],
    rule: FusionRule,
    mode: LabelMode,
) -> Result<QualitativeFusion> {
    let set = sources.first().ok_or(Error::TooFewSources)?.set;
    if sources.iter().any(|s| s.set != set) {
        return Err(Error::InvalidLabelSet);
    }
    let numeric: Vec<MassFunction> = sources.iter().map(|s| s.numeric.clone()).collect();
    let options = FusionOptions {
        record_ledger: false,
        ..FusionOptions::default()
    };
    let fused = fuse(rule, &numeric, &options)?.fused;
    let labels = fused
        .focal()
        .map(|(s, v)| LabelMass::from_value(set, v).map(|l| (s, l)))
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = labels.iter().map(|(_, l)| l.index(mode)).sum();
    let normalized = (total - set.top() as f64).abs() <= INDEX_TOLERANCE;
    Ok(QualitativeFusion {
        set,
        mode,
        numeric: fused,
        labels,
        normalized,
    })
}

/// DSmP of the fused masses, expressed per atom as labels.
pub fn qualitative_dsmp(fusion: &QualitativeFusion, eps: f64) -> Result<Vec<LabelMass>> {
    let numeric = if fusion.numeric.is_normalized() {
        fusion.numeric.clone()
    } else {
        fusion.numeric.normalize()?
    };
    dsmp(&numeric, eps)?
        .values()
        .iter()
        .map(|&p| LabelMass::from_value(fusion.set, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;
    use crate::transforms::DEFAULT_EPSILON;

    fn source(frame: &Frame, ls: LabelSet, entries: &[(u32, usize)]) -> QualitativeSource {
        QualitativeSource::new(frame, ls, entries.iter().map(|&(b, i)| (set(frame, b), i)))
            .unwrap()
    }

    fn inputs(frame: &Frame, m: usize) -> Vec<QualitativeSource> {
        let ls = LabelSet::new(m).unwrap();
        let (hi, lo) = (m, 1);
        let top = m + 1;
        alloc::vec![
            source(frame, ls, &[(F1, top)]),
            source(frame, ls, &[(F2, hi), (IT, lo)]),
            source(frame, ls, &[(F1, lo), (F3, hi)]),
            source(frame, ls, &[(F2, lo), (IT, hi)]),
        ]
    }

    fn index(f: &QualitativeFusion, bits: u32) -> f64 {
        f.label(&set(f.numeric.frame(), bits)).unwrap().refined.index()
    }

    fn crude(f: &QualitativeFusion, bits: u32) -> usize {
        f.label(&set(f.numeric.frame(), bits)).unwrap().crude
    }

    #[test]
    fn label_mapping() {
        let l2 = LabelSet::new(2).unwrap();
        assert_eq!(l2.value_of(1).unwrap(), 1.0 / 3.0);
        assert_eq!(l2.value_of(3).unwrap(), 1.0);
        assert!(l2.value_of(4).is_err());
        let r = l2.refine(0.36145).unwrap();
        assert!(close(r.index(), 1.08, 5e-3));
        assert_eq!(l2.refine(0.0).unwrap().index(), 0.0);
        for i in 0..=3 {
            let r = l2.refine(l2.value_of(i).unwrap()).unwrap();
            assert!(close(r.index(), i as f64, 1e-15));
        }
        let r = RefinedLabel::new(l2, 1.0843).unwrap();
        assert!(close(l2.refine(r.value()).unwrap().index(), 1.0843, 1e-15));
        assert!(l2.refine(1.2).is_err());
        assert_eq!(l2.parse("L2").unwrap(), 2);
        assert!(l2.parse("L7").is_err());
        assert!(l2.parse("High").is_err());
        assert_eq!(LabelSet::new(0).unwrap_err(), Error::InvalidLabelSet);
    }

    #[test]
    fn crude_rounding() {
        let l2 = LabelSet::new(2).unwrap();
        let r = |x| RefinedLabel::new(l2, x).unwrap();
        assert_eq!(crude_round(&r(0.79)), 1);
        assert_eq!(crude_round(&r(2.51)), 3);
        assert_eq!(crude_round(&r(1.5)), 2);
        assert_eq!(crude_round(&r(0.49)), 0);
        assert_eq!(crude_round(&r(3.0)), 3);
    }

    #[test]
    fn source_validation() {
        let j = joint();
        let l2 = LabelSet::new(2).unwrap();
        let bad = QualitativeSource::new(&j, l2, [(set(&j, F2), 1), (set(&j, IT), 1)]);
        assert!(matches!(bad, Err(Error::NotNormalized { .. })));
        let s = source(&j, l2, &[(F2, 2), (IT, 1), (F1, 0)]);
        assert_eq!(s.labels().len(), 2);
        assert!(close(s.numeric().mass(&set(&j, F2)).unwrap(), 2.0 / 3.0, 1e-15));
    }

    #[test]
    fn two_interior_labels() {
        let j = joint();
        let s = inputs(&j, 2);
        let r5 = qualitative_fuse(&s, FusionRule::Pcr5, LabelMode::Refined).unwrap();
        assert!(close(index(&r5, F1), 1.08, 0.01));
        // θ8 carries 7/27, i.e. index 7/9.
        assert!(close(index(&r5, T8), 7.0 / 9.0, 1e-12));
        assert!(close(index(&r5, F3), 0.57, 0.01));
        assert!(close(index(&r5, F2), 0.28, 0.01));
        assert!(close(index(&r5, IT), 0.28, 0.01));
        assert!(r5.normalized);
        assert!(close(r5.index_total(), 3.0, 1e-6));

        let c5 = qualitative_fuse(&s, FusionRule::Pcr5, LabelMode::Crude).unwrap();
        assert_eq!(
            [crude(&c5, F1), crude(&c5, T8), crude(&c5, F3), crude(&c5, F2), crude(&c5, IT)],
            [1, 1, 1, 0, 0]
        );
        assert!(c5.normalized);
        let c6 = qualitative_fuse(&s, FusionRule::Pcr6, LabelMode::Crude).unwrap();
        assert_eq!(
            [crude(&c6, F1), crude(&c6, T8), crude(&c6, F3), crude(&c6, F2), crude(&c6, IT)],
            [1, 1, 0, 0, 0]
        );
        assert!(!c6.normalized);
        assert_eq!(c6.index_total(), 2.0);

        let r6 = qualitative_fuse(&s, FusionRule::Pcr6, LabelMode::Refined).unwrap();
        assert!(close(index(&r6, F1), 0.95, 0.01));
        assert!(close(index(&r6, F2), 0.39, 0.01));
        assert!(close(index(&r6, F3), 0.48, 0.01));
        assert!(r6.normalized);
    }

    #[test]
    fn crude_belief_ranges() {
        let j = joint();
        let s = inputs(&j, 2);
        let h = atoms(&j, &[6, 7, 8]);
        let t8 = atoms(&j, &[8]);
        let c5 = qualitative_fuse(&s, FusionRule::Pcr5, LabelMode::Crude).unwrap();
        let b = c5.belief(&h).unwrap();
        assert_eq!((b.bel, b.pl, b.complement_bel, b.complement_pl), (1.0, 3.0, 0.0, 2.0));
        let b = c5.belief(&t8).unwrap();
        assert_eq!((b.bel, b.pl, b.complement_bel, b.complement_pl), (1.0, 2.0, 1.0, 2.0));
        let c6 = qualitative_fuse(&s, FusionRule::Pcr6, LabelMode::Crude).unwrap();
        for x in [h, atoms(&j, &[7, 8]), t8] {
            let b = c6.belief(&x).unwrap();
            assert_eq!((b.bel, b.pl, b.complement_bel, b.complement_pl), (1.0, 2.0, 1.0, 2.0));
            assert!(!b.normalized);
        }
    }

    #[test]
    fn refined_belief_ranges() {
        let j = joint();
        let s = inputs(&j, 2);
        let r5 = qualitative_fuse(&s, FusionRule::Pcr5, LabelMode::Refined).unwrap();
        let b = r5.belief(&atoms(&j, &[8])).unwrap();
        assert!(close(b.bel, 7.0 / 9.0, 1e-12));
        assert!(close(b.pl, 2.43, 0.01));
        assert!(close(b.complement_bel, 0.57, 0.01));
        assert!(close(b.complement_pl, 3.0 - 7.0 / 9.0, 1e-12));
        let r6 = qualitative_fuse(&s, FusionRule::Pcr6, LabelMode::Refined).unwrap();
        let b = r6.belief(&atoms(&j, &[6, 7, 8])).unwrap();
        assert!(close(b.bel, 1.18, 0.01));
        assert!(close(b.pl, 3.0, 1e-9));
    }

    #[test]
    fn qualitative_dsmp_labels() {
        let j = joint();
        let l2 = inputs(&j, 2);
        let f = qualitative_fuse(&l2, FusionRule::Pcr5, LabelMode::Refined).unwrap();
        let p = qualitative_dsmp(&f, DEFAULT_EPSILON).unwrap();
        assert!(close(p[7].refined.value(), 0.8042, 1e-4));
        assert_eq!(p[7].crude, 2);
        assert!(p[..7].iter().all(|l| l.crude == 0));
        let f = qualitative_fuse(&l2, FusionRule::Pcr6, LabelMode::Refined).unwrap();
        let p = qualitative_dsmp(&f, DEFAULT_EPSILON).unwrap();
        assert!(close(p[7].refined.index(), 2.51, 0.01));
        assert_eq!(p[7].crude, 3);

        let l3 = inputs(&j, 3);
        let f = qualitative_fuse(&l3, FusionRule::Pcr5, LabelMode::Refined).unwrap();
        let p = qualitative_dsmp(&f, DEFAULT_EPSILON).unwrap();
        assert!(close(p[7].refined.index(), 3.09, 0.01));
        assert_eq!(p[7].crude, 3);
        let f = qualitative_fuse(&l3, FusionRule::Pcr6, LabelMode::Refined).unwrap();
        let p = qualitative_dsmp(&f, DEFAULT_EPSILON).unwrap();
        assert!(close(p[7].refined.index(), 3.21, 0.01));
        let total: f64 = p.iter().map(|l| l.refined.index()).sum();
        assert!(close(total, 4.0, 1e-6));
    }

    #[test]
    fn three_interior_labels() {
        let j = joint();
        let s = inputs(&j, 3);
        let c5 = qualitative_fuse(&s, FusionRule::Pcr5, LabelMode::Crude).unwrap();
        assert_eq!(
            [crude(&c5, T8), crude(&c5, F1), crude(&c5, F2), crude(&c5, F3), crude(&c5, IT)],
            [1, 1, 0, 1, 0]
        );
        let c6 = qualitative_fuse(&s, FusionRule::Pcr6, LabelMode::Crude).unwrap();
        assert_eq!(
            [crude(&c6, T8), crude(&c6, F1), crude(&c6, F2), crude(&c6, F3), crude(&c6, IT)],
            [1, 1, 1, 1, 1]
        );
        assert!(!c6.normalized);
        let r5 = qualitative_fuse(&s, FusionRule::Pcr5, LabelMode::Refined).unwrap();
        assert!(close(index(&r5, T8), 0.81, 0.01));
        assert!(close(index(&r5, F1), 1.37, 0.01));
        assert!(close(index(&r5, F3), 0.88, 0.01));
        assert!(close(r5.index_total(), 4.0, 1e-6));
    }
}
