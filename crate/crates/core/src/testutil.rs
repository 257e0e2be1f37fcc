//! Shared fixtures for unit tests: the three-factor threat frame and the
//! four standard sources.

use alloc::vec::Vec;

use crate::{Frame, MassFunction, Subset};

pub(crate) const F1: u32 = (1 << 3) | (1 << 7);
pub(crate) const F2: u32 = (1 << 5) | (1 << 7);
pub(crate) const IT: u32 = 0xFF;
pub(crate) const F3: u32 = IT & !F1;
pub(crate) const T8: u32 = 1 << 7;
pub(crate) const T6: u32 = 1 << 5;

pub(crate) fn joint() -> Frame {
    let people = Frame::new(["notA", "A"]).unwrap();
    let vehicle = Frame::new(["notV", "V"]).unwrap();
    let position = Frame::new(["notB", "B"]).unwrap();
    Frame::product(&[people, vehicle, position]).unwrap()
}

pub(crate) fn set(frame: &Frame, bits: u32) -> Subset {
    frame.subset_from_bits(bits).unwrap()
}

/// Subset from 1-based atom numbers.
pub(crate) fn atoms(frame: &Frame, ks: &[usize]) -> Subset {
    set(frame, ks.iter().fold(0, |b, k| b | 1 << (k - 1)))
}

pub(crate) fn bba(frame: &Frame, entries: &[(u32, f64)]) -> MassFunction {
    MassFunction::new(frame, entries.iter().map(|&(b, m)| (set(frame, b), m))).unwrap()
}

/// Prior, camera, ANPR and witness sources parameterised by the mass each
/// puts on its specific focal element.
pub(crate) fn sources(frame: &Frame, m0: f64, m1: f64, m2: f64, m3: f64) -> Vec<MassFunction> {
    alloc::vec![
        bba(frame, &[(F1, m0), (IT, 1.0 - m0)]),
        bba(frame, &[(F2, m1), (IT, 1.0 - m1)]),
        bba(frame, &[(F1, m2), (F3, 1.0 - m2)]),
        bba(frame, &[(F2, m3), (IT, 1.0 - m3)]),
    ]
}

pub(crate) fn table1(frame: &Frame) -> Vec<MassFunction> {
    sources(frame, 1.0, 0.75, 0.3, 0.25)
}

pub(crate) fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
