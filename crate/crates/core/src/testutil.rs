//! Shared fixtures for unit tests.

use crate::group::{enumerate_ball, GenSet};
use crate::linalg::Mat2;
use crate::psv::{assemble, AssembledSurface};
use crate::scalar::int;

pub fn rot90() -> GenSet {
    GenSet::validate(&[Mat2::rot90()]).unwrap()
}

pub fn minus_id() -> GenSet {
    GenSet::validate(&[Mat2::scalar(int(-1))]).unwrap()
}

pub fn diag2() -> GenSet {
    GenSet::validate(&[Mat2::diag(int(2), int(1))]).unwrap()
}

pub fn sanov() -> GenSet {
    GenSet::validate(&[Mat2::from_ints(1, 2, 0, 1), Mat2::from_ints(1, 0, 2, 1)]).unwrap()
}

pub fn surface(h: &GenSet, radius: usize) -> AssembledSurface {
    assemble(&enumerate_ball(h, radius).unwrap(), h).unwrap()
}
