//! Frames of discernment and their power-set.
//!
//! A [`Frame`] is an ordered list of mutually exclusive atoms. Subsets of the
//! frame are bitmasks: bit `i` set means atom `i` (the paper-style `θ_{i+1}`)
//! belongs to the subset. Product frames enumerate tuples with the first
//! factor varying fastest, so with three binary factors the atom index is
//! `[x1] + 2·[x2] + 4·[x3]`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

/// Largest supported frame. Every subset fits in a `u32`.
pub const MAX_ATOMS: usize = 24;

static NEXT_FRAME_ID: AtomicUsize = AtomicUsize::new(1);

/// Identity token of a frame. Clones of a frame share it; two frames built
/// separately never do, even with the same labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrameId(usize);

struct FrameData {
    id: FrameId,
    atoms: Vec<String>,
    factors: Vec<Frame>,
    /// For product frames, the per-factor atom index of every atom.
    coords: Vec<Vec<usize>>,
}

#[derive(Clone)]
pub struct Frame(Arc<FrameData>);

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = labels.into_iter().map(Into::into).collect();
        validate_labels(&atoms)?;
        Ok(Self::from_parts(atoms, Vec::new(), Vec::new()))
    }

    /// Cartesian product of `factors`, first factor varying fastest.
    pub fn product(factors: &[Frame]) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::TooFewFactors);
        }
        let mut total: usize = 1;
        for f in factors {
            total = total.saturating_mul(f.len());
            if total > MAX_ATOMS {
                return Err(Error::FrameTooLarge { atoms: total });
            }
        }
        let mut atoms = Vec::with_capacity(total);
        let mut coords = Vec::with_capacity(total);
        for index in 0..total {
            let mut rest = index;
            let mut c = Vec::with_capacity(factors.len());
            for f in factors {
                c.push(rest % f.len());
                rest /= f.len();
            }
            let label = c
                .iter()
                .zip(factors)
                .map(|(&k, f)| f.atom(k))
                .collect::<Vec<_>>()
                .join(",");
            atoms.push(format!("({label})"));
            coords.push(c);
        }
        validate_labels(&atoms)?;
        Ok(Self::from_parts(atoms, factors.to_vec(), coords))
    }

    fn from_parts(atoms: Vec<String>, factors: Vec<Frame>, coords: Vec<Vec<usize>>) -> Self {
        let id = FrameId(NEXT_FRAME_ID.fetch_add(1, Ordering::Relaxed));
        Frame(Arc::new(FrameData {
            id,
            atoms,
            factors,
            coords,
        }))
    }

    pub fn id(&self) -> FrameId {
        self.0.id
    }

    pub fn len(&self) -> usize {
        self.0.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.0.atoms
    }

    pub fn atom(&self, index: usize) -> &str {
        &self.0.atoms[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.atoms.iter().position(|a| a == label)
    }

    /// Factor frames of a product frame; empty for a plain frame.
    pub fn factors(&self) -> &[Frame] {
        &self.0.factors
    }

    pub fn is_product(&self) -> bool {
        !self.0.factors.is_empty()
    }

    /// Per-factor coordinates of atom `index` in a product frame.
    pub fn coordinates(&self, index: usize) -> Option<&[usize]> {
        self.0.coords.get(index).map(Vec::as_slice)
    }

    pub(crate) fn mask(&self) -> u32 {
        full_mask(self.len())
    }

    /// Total ignorance `I_t`.
    pub fn full(&self) -> Subset {
        Subset::raw(self.id(), self.len(), self.mask())
    }

    pub fn empty_set(&self) -> Subset {
        Subset::raw(self.id(), self.len(), 0)
    }

    pub fn singleton(&self, index: usize) -> Result<Subset> {
        if index >= self.len() {
            return Err(Error::SubsetOutOfRange {
                bits: 1u32.checked_shl(index as u32).unwrap_or(u32::MAX),
                atoms: self.len(),
            });
        }
        Ok(Subset::raw(self.id(), self.len(), 1 << index))
    }

    pub fn subset_from_bits(&self, bits: u32) -> Result<Subset> {
        if bits & !self.mask() != 0 {
            return Err(Error::SubsetOutOfRange {
                bits,
                atoms: self.len(),
            });
        }
        Ok(Subset::raw(self.id(), self.len(), bits))
    }

    /// Subset made of the named atoms.
    pub fn subset<I, S>(&self, labels: I) -> Result<Subset>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut bits = 0u32;
        for l in labels {
            let l = l.as_ref();
            let i = self
                .index_of(l)
                .ok_or_else(|| Error::UnknownAtom(l.to_string()))?;
            bits |= 1 << i;
        }
        Ok(Subset::raw(self.id(), self.len(), bits))
    }

    /// Checks that `s` was built on this frame.
    pub fn check(&self, s: &Subset) -> Result<()> {
        if s.frame == self.id() {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    /// Labels of the atoms in `s`, in atom order.
    pub fn labels_of(&self, s: &Subset) -> Result<Vec<&str>> {
        self.check(s)?;
        Ok(s.atoms().map(|i| self.atom(i)).collect())
    }

    /// Cylindrical (vacuous) extension of `s` onto this product frame.
    ///
    /// `s` may live on one of this frame's factors or on a product of some of
    /// them. The result holds every atom whose projection onto the source
    /// factors falls in `s`.
    pub fn cylinder_extend(&self, source: &Frame, s: &Subset) -> Result<Subset> {
        source.check(s)?;
        let plan = ExtensionPlan::new(source, self)?;
        Ok(Subset::raw(self.id(), self.len(), plan.extend(s.bits())))
    }
}

/// Precomputed projection from target atoms to source atoms.
pub(crate) struct ExtensionPlan {
    /// Source atom index of each target atom.
    projection: Vec<usize>,
}

impl ExtensionPlan {
    pub(crate) fn new(source: &Frame, target: &Frame) -> Result<Self> {
        if source.id() == target.id() {
            return Ok(Self {
                projection: (0..target.len()).collect(),
            });
        }
        if !target.is_product() {
            return Err(Error::IncompatibleFrames);
        }
        let source_factors: Vec<Frame> = if source.is_product() {
            source.factors().to_vec()
        } else {
            alloc::vec![source.clone()]
        };
        // Position of every source factor among the target factors.
        let mut positions = Vec::with_capacity(source_factors.len());
        for f in &source_factors {
            let p = target
                .factors()
                .iter()
                .position(|t| t.id() == f.id())
                .ok_or(Error::IncompatibleFrames)?;
            if positions.contains(&p) {
                return Err(Error::IncompatibleFrames);
            }
            positions.push(p);
        }
        let projection = (0..target.len())
            .map(|t| {
                let c = target.coordinates(t).expect("product frame coordinates");
                let mut index = 0;
                let mut stride = 1;
                for (f, &p) in source_factors.iter().zip(&positions) {
                    index += c[p] * stride;
                    stride *= f.len();
                }
                index
            })
            .collect();
        Ok(Self { projection })
    }

    pub(crate) fn extend(&self, source_bits: u32) -> u32 {
        self.projection
            .iter()
            .enumerate()
            .filter(|(_, &src)| source_bits & (1 << src) != 0)
            .fold(0, |acc, (t, _)| acc | (1 << t))
    }
}

fn validate_labels(atoms: &[String]) -> Result<()> {
    if atoms.is_empty() {
        return Err(Error::EmptyFrame);
    }
    if atoms.len() > MAX_ATOMS {
        return Err(Error::FrameTooLarge { atoms: atoms.len() });
    }
    for (i, a) in atoms.iter().enumerate() {
        if a.is_empty() {
            return Err(Error::EmptyAtomLabel);
        }
        if atoms[..i].contains(a) {
            return Err(Error::DuplicateAtom(a.clone()));
        }
    }
    Ok(())
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        self.id() == other.id()
    }
}

impl Eq for Frame {}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Frame")
            .field("id", &self.0.id.0)
            .field("atoms", &self.0.atoms)
            .finish()
    }
}

/// Element of the power-set `2^Θ` of a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset {
    frame: FrameId,
    atoms: u8,
    bits: u32,
}

impl Subset {
    pub(crate) fn raw(frame: FrameId, atoms: usize, bits: u32) -> Self {
        Subset {
            frame,
            atoms: atoms as u8,
            bits,
        }
    }

    pub fn frame_id(&self) -> FrameId {
        self.frame
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    fn same_frame(&self, other: &Subset) -> Result<()> {
        if self.frame == other.frame {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    fn with_bits(&self, bits: u32) -> Subset {
        Subset { bits, ..*self }
    }

    pub fn union(&self, other: &Subset) -> Result<Subset> {
        self.same_frame(other)?;
        Ok(self.with_bits(self.bits | other.bits))
    }

    pub fn intersect(&self, other: &Subset) -> Result<Subset> {
        self.same_frame(other)?;
        Ok(self.with_bits(self.bits & other.bits))
    }

    pub fn complement(&self) -> Subset {
        self.with_bits(!self.bits & full_mask(self.atoms as usize))
    }

    pub fn is_subset_of(&self, other: &Subset) -> Result<bool> {
        self.same_frame(other)?;
        Ok(self.bits & !other.bits == 0)
    }

    pub fn intersects(&self, other: &Subset) -> Result<bool> {
        self.same_frame(other)?;
        Ok(self.bits & other.bits != 0)
    }

    pub fn cardinality(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == full_mask(self.atoms as usize)
    }

    pub fn contains(&self, atom: usize) -> bool {
        atom < 32 && self.bits & (1 << atom) != 0
    }

    /// Indices of the atoms in the subset, ascending.
    pub fn atoms(&self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..32).filter(move |i| bits & (1 << i) != 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn vbied() -> (Frame, Frame, Frame, Frame) {
        let people = Frame::new(["notA", "A"]).unwrap();
        let vehicle = Frame::new(["notV", "V"]).unwrap();
        let position = Frame::new(["notB", "B"]).unwrap();
        let joint = Frame::product(&[people.clone(), vehicle.clone(), position.clone()]).unwrap();
        (people, vehicle, position, joint)
    }

    fn theta(frame: &Frame, ks: &[usize]) -> Subset {
        frame
            .subset_from_bits(ks.iter().fold(0, |b, k| b | 1 << (k - 1)))
            .unwrap()
    }

    #[test]
    fn make_frame_examples() {
        assert_eq!(Frame::new(["B", "notB"]).unwrap().len(), 2);
        assert_eq!(Frame::new(Vec::<String>::new()).unwrap_err(), Error::EmptyFrame);
        assert_eq!(
            Frame::new(["x", "x"]).unwrap_err(),
            Error::DuplicateAtom("x".into())
        );
        assert_eq!(Frame::new(["x", ""]).unwrap_err(), Error::EmptyAtomLabel);
        let many: Vec<String> = (0..25).map(|i| format!("a{i}")).collect();
        assert_eq!(
            Frame::new(many).unwrap_err(),
            Error::FrameTooLarge { atoms: 25 }
        );
    }

    #[test]
    fn product_ordering_matches_triplet_enumeration() {
        let (_, _, _, joint) = vbied();
        assert_eq!(joint.len(), 8);
        assert_eq!(joint.atom(0), "(notA,notV,notB)");
        assert_eq!(joint.atom(1), "(A,notV,notB)");
        assert_eq!(joint.atom(3), "(A,V,notB)");
        assert_eq!(joint.atom(5), "(A,notV,B)");
        assert_eq!(joint.atom(6), "(notA,V,B)");
        assert_eq!(joint.atom(7), "(A,V,B)");
        assert_eq!(joint.coordinates(7), Some(&[1, 1, 1][..]));
    }

    #[test]
    fn product_of_two_and_errors() {
        let x = Frame::new(["x1", "x2"]).unwrap();
        let y = Frame::new(["y1", "y2"]).unwrap();
        let xy = Frame::product(&[x.clone(), y]).unwrap();
        assert_eq!(xy.len(), 4);
        assert_eq!(Frame::product(&[x]).unwrap_err(), Error::TooFewFactors);
        let big = Frame::new(["a", "b", "c", "d", "e"]).unwrap();
        assert_eq!(
            Frame::product(&[big.clone(), big]).unwrap_err(),
            Error::FrameTooLarge { atoms: 25 }
        );
    }

    #[test]
    fn subset_operations() {
        let (_, _, _, joint) = vbied();
        let f1 = theta(&joint, &[4, 8]);
        let f2 = theta(&joint, &[6, 8]);
        let f3 = theta(&joint, &[1, 2, 3, 5, 6, 7]);
        assert_eq!(f1.complement(), f3);
        assert_eq!(f1.intersect(&f2).unwrap(), theta(&joint, &[8]));
        assert_eq!(f1.union(&joint.empty_set()).unwrap(), f1);
        assert_eq!(f3.cardinality(), 6);
        assert!(theta(&joint, &[8]).is_subset_of(&f1).unwrap());
        assert!(!f1.is_subset_of(&f2).unwrap());
        assert!(joint.full().is_full());
        assert!(joint.empty_set().is_empty());
        assert_eq!(f2.atoms().collect::<Vec<_>>(), vec![5, 7]);
    }

    #[test]
    fn cross_frame_operations_fail() {
        let a = Frame::new(["x", "y"]).unwrap();
        let b = Frame::new(["x", "y"]).unwrap();
        let err = a.full().union(&b.full()).unwrap_err();
        assert_eq!(err, Error::FrameMismatch);
        assert_eq!(a.check(&b.full()).unwrap_err(), Error::FrameMismatch);
        assert!(a.subset_from_bits(0b100).is_err());
        assert!(a.subset(["z"]).is_err());
    }

    #[test]
    fn cylinder_extension_examples() {
        let (people, vehicle, position, joint) = vbied();
        let pv = Frame::product(&[people.clone(), vehicle.clone()]).unwrap();
        let av = pv.subset(["(A,V)"]).unwrap();
        assert_eq!(joint.cylinder_extend(&pv, &av).unwrap(), theta(&joint, &[4, 8]));
        let rest = pv.subset(["(notA,V)", "(A,notV)", "(notA,notV)"]).unwrap();
        assert_eq!(
            joint.cylinder_extend(&pv, &rest).unwrap(),
            theta(&joint, &[1, 2, 3, 5, 6, 7])
        );
        assert_eq!(joint.cylinder_extend(&pv, &pv.full()).unwrap(), joint.full());

        // A single marginal factor also extends.
        let near = position.subset(["B"]).unwrap();
        assert_eq!(
            joint.cylinder_extend(&position, &near).unwrap(),
            theta(&joint, &[5, 6, 7, 8])
        );

        // Factor order in the source product need not match the target.
        let vp = Frame::product(&[vehicle, people]).unwrap();
        let va = vp.subset(["(V,A)"]).unwrap();
        assert_eq!(joint.cylinder_extend(&vp, &va).unwrap(), theta(&joint, &[4, 8]));

        let stranger = Frame::new(["u", "w"]).unwrap();
        assert_eq!(
            joint.cylinder_extend(&stranger, &stranger.full()).unwrap_err(),
            Error::IncompatibleFrames
        );
    }
}
