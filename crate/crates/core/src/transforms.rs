//! Probabilistic transformations of a mass function and their information
//! content.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::bba::MassFunction;
use crate::error::{Error, Result};
use crate::frames::{Frame, Subset};
use crate::scalar::MassScalar;

pub const DEFAULT_EPSILON: f64 = 0.001;

/// Probability of each atom of a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    frame: Frame,
    p: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn probability(&self, atom: usize) -> f64 {
        self.p[atom]
    }

    /// Probability of a union of atoms.
    pub fn probability_of(&self, x: &Subset) -> Result<f64> {
        self.frame.check(x)?;
        Ok(x.atoms().map(|i| self.p[i]).sum())
    }

    pub fn entropy(&self) -> f64 {
        entropy(self)
    }

    pub fn pic(&self) -> f64 {
        pic(self)
    }
}

pub(crate) fn check_epsilon(eps: f64) -> Result<()> {
    if eps.is_finite() && eps >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(eps))
    }
}

/// Scalar-generic DSmP: each focal set hands its mass to its atoms in
/// proportion to `m({s}) + ε`. Singletons keep their own mass unchanged,
/// which interval arithmetic would otherwise widen.
pub(crate) fn dsmp_raw<S: MassScalar>(
    atoms: usize,
    focal: &BTreeMap<u32, S>,
    eps: &S,
) -> Result<Vec<S>> {
    let weight = |i: usize| match focal.get(&(1u32 << i)) {
        Some(m) => m.add(eps),
        None => eps.clone(),
    };
    let mut p = alloc::vec![S::zero(); atoms];
    for (&y, my) in focal {
        if y == 0 {
            continue;
        }
        if y.is_power_of_two() {
            let i = y.trailing_zeros() as usize;
            p[i] = p[i].add(my);
            continue;
        }
        let members = (0..atoms).filter(|i| y & (1 << i) != 0);
        let den = members.clone().fold(S::zero(), |acc, i| acc.add(&weight(i)));
        let ratio = my.div(&den)?;
        for i in members {
            p[i] = p[i].add(&weight(i).mul(&ratio));
        }
    }
    Ok(p)
}

fn require_normalized(m: &MassFunction) -> Result<()> {
    if m.is_normalized() {
        Ok(())
    } else {
        Err(Error::NotNormalized {
            total: m.total_mass(),
        })
    }
}

pub fn dsmp(m: &MassFunction, eps: f64) -> Result<ProbabilityDistribution> {
    check_epsilon(eps)?;
    require_normalized(m)?;
    let p = dsmp_raw(m.frame().len(), m.focal_bits(), &eps)?;
    Ok(ProbabilityDistribution {
        frame: m.frame().clone(),
        p,
    })
}

/// Pignistic probability: each focal set is split evenly among its atoms.
pub fn betp(m: &MassFunction) -> Result<ProbabilityDistribution> {
    require_normalized(m)?;
    let mut p = alloc::vec![0.0; m.frame().len()];
    for (y, v) in m.focal() {
        let share = v / f64::from(y.cardinality());
        for i in y.atoms() {
            p[i] += share;
        }
    }
    Ok(ProbabilityDistribution {
        frame: m.frame().clone(),
        p,
    })
}

/// Shannon entropy in bits.
pub fn entropy(p: &ProbabilityDistribution) -> f64 {
    -p.p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * libm::log2(x))
        .sum::<f64>()
}

/// Probabilistic information content `1 − H/log2(n)`.
pub fn pic(p: &ProbabilityDistribution) -> f64 {
    let n = p.p.len();
    if n < 2 {
        return 1.0;
    }
    (1.0 - entropy(p) / libm::log2(n as f64)).clamp(0.0, 1.0)
}
