//! Basic belief assignments with precise masses.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frames::{ExtensionPlan, Frame, Subset};

/// Slack allowed on `Σ m = 1` when a mass function is built.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Mass function over the power-set of one frame.
///
/// Focal elements are kept sorted by bitmask and zero masses are dropped,
/// so two mass functions are equal exactly when their focal maps are.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    frame: Frame,
    focal: BTreeMap<u32, f64>,
    allow_empty_focal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeliefInterval {
    pub bel: f64,
    pub pl: f64,
    /// Imprecision `pl - bel` of the unknown probability.
    pub delta: f64,
}

impl MassFunction {
    /// Normalized mass function: no mass on `∅` and `Σ m = 1`.
    pub fn new<I>(frame: &Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, f64)>,
    {
        let focal = collect(frame, entries)?;
        Self::from_focal(frame.clone(), focal, false)
    }

    /// Mass function that may carry mass on `∅` and sum to less than one.
    /// Used mid-pipeline by importance discounting.
    pub fn new_unnormalized<I>(frame: &Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, f64)>,
    {
        let focal = collect(frame, entries)?;
        Self::from_focal(frame.clone(), focal, true)
    }

    pub(crate) fn from_focal(
        frame: Frame,
        mut focal: BTreeMap<u32, f64>,
        allow_empty_focal: bool,
    ) -> Result<Self> {
        for &m in focal.values() {
            if !m.is_finite() || m < 0.0 {
                return Err(Error::InvalidMass(m));
            }
        }
        focal.retain(|_, m| *m > 0.0);
        let total: f64 = focal.values().sum();
        if allow_empty_focal {
            if total > 1.0 + NORMALIZATION_TOLERANCE {
                return Err(Error::NotNormalized { total });
            }
        } else {
            if focal.contains_key(&0) {
                return Err(Error::EmptySetMass);
            }
            if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(Error::NotNormalized { total });
            }
        }
        Ok(Self {
            frame,
            focal,
            allow_empty_focal,
        })
    }

    /// Builds a normalized mass function when the total is one, otherwise a
    /// sub-normal one.
    pub(crate) fn from_fused(frame: Frame, focal: BTreeMap<u32, f64>) -> Result<Self> {
        let total: f64 = focal.values().sum();
        let strict = !focal.contains_key(&0) && (total - 1.0).abs() <= NORMALIZATION_TOLERANCE;
        Self::from_focal(frame, focal, !strict)
    }

    /// Total ignorance: `m(I_t) = 1`.
    pub fn vacuous(frame: &Frame) -> Self {
        let mut focal = BTreeMap::new();
        focal.insert(frame.mask(), 1.0);
        Self {
            frame: frame.clone(),
            focal,
            allow_empty_focal: false,
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn allow_empty_focal(&self) -> bool {
        self.allow_empty_focal
    }

    /// Mass of `x` (zero when `x` is not focal).
    pub fn mass(&self, x: &Subset) -> Result<f64> {
        self.frame.check(x)?;
        Ok(self.focal.get(&x.bits()).copied().unwrap_or(0.0))
    }

    /// Focal elements with their masses, ordered by bitmask.
    pub fn focal(&self) -> impl Iterator<Item = (Subset, f64)> + '_ {
        let id = self.frame.id();
        let n = self.frame.len();
        self.focal
            .iter()
            .map(move |(&b, &m)| (Subset::raw(id, n, b), m))
    }

    pub(crate) fn focal_bits(&self) -> &BTreeMap<u32, f64> {
        &self.focal
    }

    pub(crate) fn focal_list(&self) -> Vec<(u32, f64)> {
        self.focal.iter().map(|(&b, &m)| (b, m)).collect()
    }

    pub fn len(&self) -> usize {
        self.focal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.focal.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.focal.values().sum()
    }

    pub fn empty_mass(&self) -> f64 {
        self.focal.get(&0).copied().unwrap_or(0.0)
    }

    pub fn is_normalized(&self) -> bool {
        self.empty_mass() == 0.0 && (self.total_mass() - 1.0).abs() <= NORMALIZATION_TOLERANCE
    }

    /// Same focal elements without the mass on `∅`.
    pub fn without_empty(&self) -> Self {
        let mut focal = self.focal.clone();
        focal.remove(&0);
        Self {
            frame: self.frame.clone(),
            focal,
            allow_empty_focal: true,
        }
    }

    /// Drops the mass on `∅` and rescales the rest to sum to one.
    pub fn normalize(&self) -> Result<Self> {
        let mut focal = self.focal.clone();
        focal.remove(&0);
        let total: f64 = focal.values().sum();
        if total <= 0.0 {
            return Err(Error::SuppressedEvidence);
        }
        for m in focal.values_mut() {
            *m /= total;
        }
        Self::from_focal(self.frame.clone(), focal, false)
    }

    fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized {
                total: self.total_mass(),
            })
        }
    }

    /// Belief: total mass of the focal elements included in `x`.
    pub fn bel(&self, x: &Subset) -> Result<f64> {
        self.frame.check(x)?;
        self.require_normalized()?;
        Ok(self
            .focal
            .iter()
            .filter(|(&y, _)| y != 0 && y & !x.bits() == 0)
            .map(|(_, &m)| m)
            .sum())
    }

    /// Plausibility: total mass of the focal elements meeting `x`.
    pub fn pl(&self, x: &Subset) -> Result<f64> {
        self.frame.check(x)?;
        self.require_normalized()?;
        Ok(self
            .focal
            .iter()
            .filter(|(&y, _)| y & x.bits() != 0)
            .map(|(_, &m)| m)
            .sum())
    }

    pub fn belief_interval(&self, x: &Subset) -> Result<BeliefInterval> {
        let bel = self.bel(x)?;
        let pl = self.pl(x)?;
        Ok(BeliefInterval {
            bel,
            pl,
            delta: pl - bel,
        })
    }

    /// Vacuous extension onto a product frame containing this frame's
    /// factors. Masses are carried over unchanged to the cylinder sets.
    pub fn vacuous_extension(&self, target: &Frame) -> Result<Self> {
        let plan = ExtensionPlan::new(&self.frame, target)?;
        let mut focal = BTreeMap::new();
        for (&b, &m) in &self.focal {
            *focal.entry(plan.extend(b)).or_insert(0.0) += m;
        }
        Ok(Self {
            frame: target.clone(),
            focal,
            allow_empty_focal: self.allow_empty_focal,
        })
    }
}

fn collect<I>(frame: &Frame, entries: I) -> Result<BTreeMap<u32, f64>>
where
    I: IntoIterator<Item = (Subset, f64)>,
{
    let mut focal = BTreeMap::new();
    for (s, m) in entries {
        frame.check(&s)?;
        if !m.is_finite() || !(0.0..=1.0 + NORMALIZATION_TOLERANCE).contains(&m) {
            return Err(Error::InvalidMass(m));
        }
        *focal.entry(s.bits()).or_insert(0.0) += m;
    }
    Ok(focal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn joint() -> (Frame, Frame) {
        let people = Frame::new(["notA", "A"]).unwrap();
        let vehicle = Frame::new(["notV", "V"]).unwrap();
        let position = Frame::new(["notB", "B"]).unwrap();
        let pv = Frame::product(&[people.clone(), vehicle.clone()]).unwrap();
        let joint = Frame::product(&[people, vehicle, position]).unwrap();
        (pv, joint)
    }

    fn bits(f: &Frame, ks: &[usize]) -> Subset {
        f.subset_from_bits(ks.iter().fold(0, |b, k| b | 1 << (k - 1)))
            .unwrap()
    }

    #[test]
    fn vacuous_mass() {
        let (_, j) = joint();
        let v = MassFunction::vacuous(&j);
        assert_eq!(v.mass(&j.full()).unwrap(), 1.0);
        assert_eq!(v.len(), 1);
        assert_eq!(v.bel(&bits(&j, &[1, 2, 3])).unwrap(), 0.0);
        assert_eq!(v.pl(&bits(&j, &[1])).unwrap(), 1.0);
        let two = Frame::new(["a", "b"]).unwrap();
        assert_eq!(MassFunction::vacuous(&two).mass(&two.full()).unwrap(), 1.0);
    }

    #[test]
    fn construction_rules() {
        let (_, j) = joint();
        let f1 = bits(&j, &[4, 8]);
        let zero_dropped =
            MassFunction::new(&j, [(f1, 1.0), (bits(&j, &[1]), 0.0)]).unwrap();
        assert_eq!(zero_dropped.len(), 1);
        assert!(matches!(
            MassFunction::new(&j, [(f1, 0.9)]),
            Err(Error::NotNormalized { .. })
        ));
        assert_eq!(
            MassFunction::new(&j, [(j.empty_set(), 0.5), (f1, 0.5)]).unwrap_err(),
            Error::EmptySetMass
        );
        assert!(matches!(
            MassFunction::new(&j, [(f1, -0.1), (j.full(), 1.1)]),
            Err(Error::InvalidMass(_))
        ));
        let sub = MassFunction::new_unnormalized(&j, [(j.empty_set(), 0.1), (f1, 0.6)]).unwrap();
        assert!(!sub.is_normalized());
        assert!(sub.bel(&f1).is_err());
        let n = sub.normalize().unwrap();
        assert_eq!(n.mass(&f1).unwrap(), 1.0);
    }

    #[test]
    fn vacuous_extension_of_anpr_source() {
        let (pv, j) = joint();
        let av = pv.subset(["(A,V)"]).unwrap();
        let rest = pv.subset(["(notA,V)", "(A,notV)", "(notA,notV)"]).unwrap();
        let m2p = MassFunction::new(&pv, [(av, 0.3), (rest, 0.7)]).unwrap();
        let m2 = m2p.vacuous_extension(&j).unwrap();
        assert_eq!(m2.mass(&bits(&j, &[4, 8])).unwrap(), 0.3);
        assert_eq!(m2.mass(&bits(&j, &[1, 2, 3, 5, 6, 7])).unwrap(), 0.7);
        // Belief of the cylinder set is preserved.
        assert!((m2.bel(&bits(&j, &[4, 8])).unwrap() - m2p.bel(&av).unwrap()).abs() < 1e-15);
        assert_eq!(
            MassFunction::vacuous(&pv).vacuous_extension(&j).unwrap(),
            MassFunction::vacuous(&j)
        );
    }

    #[test]
    fn bel_pl_on_fused_example() {
        // Fused PCR5 result of the four-source scenario, as printed.
        let (_, j) = joint();
        let m = MassFunction::new(
            &j,
            [
                (bits(&j, &[1, 2, 3, 5, 6, 7]), 0.19741),
                (bits(&j, &[8]), 0.24375),
                (bits(&j, &[4, 8]), 0.33826),
                (bits(&j, &[6, 8]), 0.11029),
                (j.full(), 0.11029),
            ],
        )
        .unwrap();
        let danger = bits(&j, &[6, 7, 8]);
        let bi = m.belief_interval(&danger).unwrap();
        assert!((bi.bel - 0.35404).abs() < 1e-9);
        assert!((bi.pl - 1.0).abs() < 1e-9);
        let t8 = m.belief_interval(&bits(&j, &[8])).unwrap();
        assert!((t8.bel - 0.24375).abs() < 1e-9);
        assert!((t8.pl - 0.80259).abs() < 1e-9);
        assert!((t8.delta - 0.55884).abs() < 1e-9);
        assert!((m.bel(&j.full()).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(m.bel(&j.empty_set()).unwrap(), 0.0);
    }
}
