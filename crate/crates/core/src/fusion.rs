//! Conjunctive combination and proportional conflict redistribution.
//!
//! All rules enumerate the full Cartesian product of the sources' focal
//! elements in one pass; PCR rules are not associative, so sources are never
//! folded pairwise.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::bba::MassFunction;
use crate::error::{Error, Result};
use crate::frames::{full_mask, Frame, Subset};
use crate::scalar::MassScalar;

/// Default cap on the number of focal tuples enumerated by one fusion.
pub const DEFAULT_MAX_TUPLES: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FusionRule {
    Conjunctive,
    Pcr5,
    Pcr6,
}

impl FusionRule {
    pub fn name(self) -> &'static str {
        match self {
            FusionRule::Conjunctive => "conj",
            FusionRule::Pcr5 => "pcr5",
            FusionRule::Pcr6 => "pcr6",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FusionOptions {
    /// Keep one ledger entry per conflicting tuple.
    pub record_ledger: bool,
    pub max_tuples: u64,
}

impl Default for FusionOptions {
    fn default() -> Self {
        Self {
            record_ledger: true,
            max_tuples: DEFAULT_MAX_TUPLES,
        }
    }
}

/// Redistribution of one conflicting product.
#[derive(Debug, Clone, PartialEq)]
pub struct ConflictLedgerEntry<S = f64> {
    /// Focal element contributed by each source, in source order.
    pub tuple: Vec<Subset>,
    pub product: S,
    /// Always empty for a conflicting tuple; kept for reporting.
    pub intersection: Subset,
    /// Share returned to each distinct set of the tuple, in first-appearance
    /// order. Empty under the conjunctive rule.
    pub shares: Vec<(Subset, S)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionResult {
    pub rule: FusionRule,
    pub fused: MassFunction,
    /// Entries in lexicographic order of the focal tuples.
    pub ledger: Vec<ConflictLedgerEntry>,
    /// Total mass of the conflicting products.
    pub total_conflict: f64,
}

pub(crate) struct RawEntry<S> {
    pub(crate) tuple: Vec<u32>,
    pub(crate) product: S,
    pub(crate) shares: Vec<(u32, S)>,
}

pub(crate) struct RawFusion<S> {
    pub(crate) focal: BTreeMap<u32, S>,
    pub(crate) ledger: Vec<RawEntry<S>>,
    pub(crate) conflict: S,
}

impl<S> RawEntry<S> {
    pub(crate) fn into_entry(self, frame: &Frame) -> ConflictLedgerEntry<S> {
        let id = frame.id();
        let n = frame.len();
        ConflictLedgerEntry {
            tuple: self.tuple.iter().map(|&b| Subset::raw(id, n, b)).collect(),
            product: self.product,
            intersection: Subset::raw(id, n, 0),
            shares: self
                .shares
                .into_iter()
                .map(|(b, s)| (Subset::raw(id, n, b), s))
                .collect(),
        }
    }
}

/// Scalar-generic combination kernel shared by precise and interval masses.
///
/// `sources` hold each source's focal list sorted by bitmask. Tuples are
/// visited in lexicographic order (last source varying fastest) and every
/// accumulation follows that order, so results are bit-reproducible.
pub(crate) fn combine_raw<S: MassScalar>(
    atoms: usize,
    sources: &[Vec<(u32, S)>],
    rule: FusionRule,
    options: &FusionOptions,
) -> Result<RawFusion<S>> {
    if sources.len() < 2 {
        return Err(Error::TooFewSources);
    }
    let tuples = sources
        .iter()
        .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128));
    if tuples > options.max_tuples as u128 {
        return Err(Error::TooManyTuples {
            tuples,
            limit: options.max_tuples,
        });
    }
    let mut raw = RawFusion {
        focal: BTreeMap::new(),
        ledger: Vec::new(),
        conflict: S::zero(),
    };
    if tuples == 0 {
        return Ok(raw);
    }
    if rule != FusionRule::Conjunctive
        && sources.iter().flatten().any(|(b, _)| *b == 0)
    {
        return Err(Error::EmptySetMass);
    }

    let full = full_mask(atoms);
    let mut odometer = alloc::vec![0usize; sources.len()];
    let mut groups: Vec<(u32, S)> = Vec::with_capacity(sources.len());
    loop {
        let mut product = S::one();
        let mut meet = full;
        for (src, &k) in sources.iter().zip(&odometer) {
            let (bits, m) = &src[k];
            product = product.mul(m);
            meet &= bits;
        }

        if meet != 0 || rule == FusionRule::Conjunctive {
            accrue(&mut raw.focal, meet, &product);
            if meet == 0 {
                raw.conflict = raw.conflict.add(&product);
                if options.record_ledger {
                    raw.ledger.push(RawEntry {
                        tuple: tuple_bits(sources, &odometer),
                        product,
                        shares: Vec::new(),
                    });
                }
            }
        } else {
            groups.clear();
            for (src, &k) in sources.iter().zip(&odometer) {
                let (bits, m) = &src[k];
                match groups.iter_mut().find(|(b, _)| b == bits) {
                    Some((_, w)) => {
                        *w = if rule == FusionRule::Pcr6 {
                            w.add(m)
                        } else {
                            w.mul(m)
                        }
                    }
                    None => groups.push((*bits, m.clone())),
                }
            }
            let total = groups
                .iter()
                .fold(S::zero(), |acc, (_, w)| acc.add(w));
            let ratio = product.div(&total)?;
            let mut shares = Vec::with_capacity(groups.len());
            for (bits, w) in &groups {
                let share = w.mul(&ratio);
                accrue(&mut raw.focal, *bits, &share);
                shares.push((*bits, share));
            }
            raw.conflict = raw.conflict.add(&product);
            if options.record_ledger {
                raw.ledger.push(RawEntry {
                    tuple: tuple_bits(sources, &odometer),
                    product,
                    shares,
                });
            }
        }

        // Advance the odometer, last source fastest.
        let mut i = sources.len();
        loop {
            if i == 0 {
                return Ok(raw);
            }
            i -= 1;
            odometer[i] += 1;
            if odometer[i] < sources[i].len() {
                break;
            }
            odometer[i] = 0;
        }
    }
}

fn accrue<S: MassScalar>(focal: &mut BTreeMap<u32, S>, bits: u32, value: &S) {
    match focal.get_mut(&bits) {
        Some(v) => *v = v.add(value),
        None => {
            focal.insert(bits, value.clone());
        }
    }
}

fn tuple_bits<S>(sources: &[Vec<(u32, S)>], odometer: &[usize]) -> Vec<u32> {
    sources
        .iter()
        .zip(odometer)
        .map(|(s, &k)| s[k].0)
        .collect()
}

pub(crate) fn common_frame<'a, I>(frames: I) -> Result<Frame>
where
    I: IntoIterator<Item = &'a Frame>,
{
    let mut it = frames.into_iter();
    let first = it.next().ok_or(Error::TooFewSources)?;
    for f in it {
        if f != first {
            return Err(Error::FrameMismatch);
        }
    }
    Ok(first.clone())
}

/// Combines the sources with `rule`.
///
/// PCR rules accept sub-normal sources (total mass below one) but no mass on
/// `∅`; the output then sums to the product of the source totals.
pub fn fuse(
    rule: FusionRule,
    sources: &[MassFunction],
    options: &FusionOptions,
) -> Result<FusionResult> {
    if sources.len() < 2 {
        return Err(Error::TooFewSources);
    }
    let frame = common_frame(sources.iter().map(MassFunction::frame))?;
    let lists: Vec<Vec<(u32, f64)>> = sources.iter().map(MassFunction::focal_list).collect();
    let raw = combine_raw(frame.len(), &lists, rule, options)?;
    let ledger = raw
        .ledger
        .into_iter()
        .map(|e| e.into_entry(&frame))
        .collect();
    let fused = MassFunction::from_fused(frame, raw.focal)?;
    Ok(FusionResult {
        rule,
        fused,
        ledger,
        total_conflict: raw.conflict,
    })
}

fn fuse_quiet(rule: FusionRule, sources: &[MassFunction]) -> Result<MassFunction> {
    let options = FusionOptions {
        record_ledger: false,
        ..FusionOptions::default()
    };
    fuse(rule, sources, &options).map(|r| r.fused)
}

/// Unnormalized conjunctive rule; the conflict is left on `∅`.
pub fn conjunctive(sources: &[MassFunction]) -> Result<MassFunction> {
    fuse_quiet(FusionRule::Conjunctive, sources)
}

/// PCR5: repeated sets in a conflicting tuple weigh the product of their
/// masses.
pub fn pcr5(sources: &[MassFunction]) -> Result<MassFunction> {
    fuse_quiet(FusionRule::Pcr5, sources)
}

/// PCR6: repeated sets in a conflicting tuple weigh the sum of their masses.
pub fn pcr6(sources: &[MassFunction]) -> Result<MassFunction> {
    fuse_quiet(FusionRule::Pcr6, sources)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    fn m(f: &MassFunction, bits: u32) -> f64 {
        f.mass(&set(f.frame(), bits)).unwrap()
    }

    #[test]
    fn conjunctive_four_sources() {
        let j = joint();
        let c = conjunctive(&table1(&j)).unwrap();
        // Non-conflicting tuples: θ8 from f1∩f2 and f1 when both cameras
        // are ignorant.
        let theta8 = 0.3 * (0.75 * 0.25 + 0.75 * 0.75 + 0.25 * 0.25);
        let f1 = 0.25 * 0.3 * 0.75;
        assert!(close(m(&c, T8), theta8, 1e-15));
        assert!(close(m(&c, F1), f1, 1e-15));
        assert!(close(m(&c, 0), 1.0 - theta8 - f1, 1e-12));
        assert!(close(m(&c, 0), 0.70, 1e-12));
        assert!(close(c.total_mass(), 1.0, 1e-12));
    }

    #[test]
    fn conjunctive_trivia() {
        let j = joint();
        let a = bba(&j, &[(F1, 0.4), (F3, 0.6)]);
        let v = MassFunction::vacuous(&j);
        let c = conjunctive(&[a.clone(), v.clone()]).unwrap();
        assert_eq!(c, a);
        let x = bba(&j, &[(T8, 1.0)]);
        let y = bba(&j, &[(T6, 1.0)]);
        assert_eq!(m(&conjunctive(&[x, y]).unwrap(), 0), 1.0);
        let r = fuse(FusionRule::Conjunctive, &[v.clone(), v.clone()], &FusionOptions::default())
            .unwrap();
        assert_eq!(r.fused, v);
        assert!(r.ledger.is_empty());
    }

    #[test]
    fn pcr_four_sources() {
        let j = joint();
        let s = table1(&j);
        let p5 = pcr5(&s).unwrap();
        for (b, v) in [(F3, 0.19741), (T8, 0.24375), (F1, 0.33826), (F2, 0.11029), (IT, 0.11029)]
        {
            assert!(close(m(&p5, b), v, 1e-4), "pcr5 {b:#x}");
        }
        let p6 = pcr6(&s).unwrap();
        for (b, v) in [(F3, 0.16811), (T8, 0.24375), (F1, 0.29641), (F2, 0.14587), (IT, 0.14587)]
        {
            assert!(close(m(&p6, b), v, 1e-4), "pcr6 {b:#x}");
        }
        assert_eq!(p5.len(), 5);
        assert!(p5.is_normalized() && p6.is_normalized());
    }

    fn entry<'a>(r: &'a FusionResult, tuple: &[u32]) -> &'a ConflictLedgerEntry {
        r.ledger
            .iter()
            .find(|e| e.tuple.iter().map(Subset::bits).eq(tuple.iter().copied()))
            .expect("ledger entry")
    }

    fn share(e: &ConflictLedgerEntry, bits: u32) -> f64 {
        e.shares.iter().find(|(s, _)| s.bits() == bits).unwrap().1
    }

    #[test]
    fn ledger_shares() {
        let j = joint();
        let s = table1(&j);
        let r6 = fuse(FusionRule::Pcr6, &s, &FusionOptions::default()).unwrap();
        // Four conflicting tuples, all involving f3 from the ANPR source.
        assert_eq!(r6.ledger.len(), 4);
        assert!(close(r6.total_conflict, 0.70, 1e-12));

        let e = entry(&r6, &[F1, F2, F3, IT]);
        let pi = 0.75 * 0.7 * 0.75;
        assert!(close(e.product, pi, 1e-15));
        assert!(close(e.product, 0.39375, 1e-12));
        assert_eq!(e.shares.len(), 4);
        // Weights 1, 0.75, 0.7, 0.75 summing to 3.2.
        assert!(close(share(e, F1), pi / 3.2, 1e-12));
        assert!(close(share(e, F1), 0.12305, 1e-5));
        assert!(close(share(e, F2), 0.09229, 1e-5));
        assert!(close(share(e, F3), 0.08613, 1e-5));
        assert!(close(share(e, IT), 0.09229, 1e-5));

        let e = entry(&r6, &[F1, F2, F3, F2]);
        assert!(close(e.product, 0.13125, 1e-12));
        assert!(close(share(e, F2), 0.13125 * 1.0 / 2.7, 1e-12));
        assert!(close(share(e, F2), 0.048611, 1e-6));

        let r5 = fuse(FusionRule::Pcr5, &s, &FusionOptions::default()).unwrap();
        let e = entry(&r5, &[F1, F2, F3, F2]);
        assert!(close(share(e, F2), 0.13125 * 0.1875 / 1.8875, 1e-12));
        assert!(close(share(e, F2), 0.013038, 1e-6));

        for e in r5.ledger.iter().chain(&r6.ledger) {
            let total: f64 = e.shares.iter().map(|(_, v)| v).sum();
            assert!(close(total, e.product, 1e-15));
            assert!(e.intersection.is_empty());
            for (z, _) in &e.shares {
                assert!(e.tuple.contains(z));
            }
        }
    }

    #[test]
    fn ledger_is_lexicographic() {
        let j = joint();
        let r = fuse(FusionRule::Pcr5, &table1(&j), &FusionOptions::default()).unwrap();
        let keys: Vec<Vec<u32>> = r
            .ledger
            .iter()
            .map(|e| e.tuple.iter().map(Subset::bits).collect())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn subsystems() {
        let j = joint();
        let s = table1(&j);
        let r = fuse(FusionRule::Pcr6, &[s[0].clone(), s[2].clone()], &FusionOptions::default())
            .unwrap();
        assert!(close(m(&r.fused, F3), 0.28824, 1e-5));
        assert!(close(m(&r.fused, F1), 0.71176, 1e-5));
        let r = fuse(
            FusionRule::Pcr5,
            &[s[0].clone(), s[1].clone(), s[3].clone()],
            &FusionOptions::default(),
        )
        .unwrap();
        assert!(close(m(&r.fused, T8), 0.8125, 1e-12));
        assert!(close(m(&r.fused, F1), 0.1875, 1e-12));
        assert_eq!(r.total_conflict, 0.0);
    }

    #[test]
    fn no_prior_has_no_conflict() {
        let j = joint();
        let s = table1(&j);
        let rest = [s[1].clone(), s[2].clone(), s[3].clone()];
        let c = conjunctive(&rest).unwrap();
        let p5 = pcr5(&rest).unwrap();
        let p6 = pcr6(&rest).unwrap();
        assert_eq!(c, p5);
        assert_eq!(c, p6);
        for (b, v) in [(T6, 0.56875), (F3, 0.13125), (T8, 0.24375), (F1, 0.05625)] {
            assert!(close(m(&p5, b), v, 1e-12));
        }
        let with_vacuous = [MassFunction::vacuous(&j), rest[0].clone(), rest[1].clone(), rest[2].clone()];
        let v5 = pcr5(&with_vacuous).unwrap();
        for (b, x) in p5.focal() {
            assert!(close(m(&v5, b.bits()), x, 1e-15));
        }
    }

    #[test]
    fn errors() {
        let j = joint();
        let s = table1(&j);
        assert_eq!(pcr5(&s[..1]).unwrap_err(), Error::TooFewSources);
        let other = Frame::new(["x", "y"]).unwrap();
        let o = MassFunction::vacuous(&other);
        assert_eq!(pcr6(&[s[0].clone(), o]).unwrap_err(), Error::FrameMismatch);
        let tight = FusionOptions {
            record_ledger: false,
            max_tuples: 3,
        };
        assert!(matches!(
            fuse(FusionRule::Pcr5, &s, &tight),
            Err(Error::TooManyTuples { tuples: 8, limit: 3 })
        ));
        let with_empty = MassFunction::new_unnormalized(&j, [(j.empty_set(), 0.5), (j.full(), 0.5)])
            .unwrap();
        assert_eq!(pcr6(&[s[0].clone(), with_empty]).unwrap_err(), Error::EmptySetMass);
    }
}
