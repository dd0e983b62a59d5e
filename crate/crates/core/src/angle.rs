//! Azimuthal angles reduced to the canonical range `[0, 2pi)`.

use std::f64::consts::TAU;
use std::fmt;

/// Absolute tolerance for comparing angles, in radians.
pub const ANGLE_TOLERANCE: f64 = 1e-12;

/// An azimuthal angle in radians, always stored in `[0, 2pi)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    /// Reduces `radians` modulo 2pi.
    pub fn new(radians: f64) -> Self {
        Angle(reduce(radians))
    }

    pub fn from_degrees(degrees: f64) -> Self {
        Angle::new(degrees.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    /// Shortest distance around the circle.
    pub fn circular_distance(self, other: Angle) -> f64 {
        circular_distance(self.0, other.0)
    }
}

impl std::ops::Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle::new(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle::new(self.0 - rhs.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rad", self.0)
    }
}

/// `x mod 2pi` in `[0, 2pi)`.
pub(crate) fn reduce(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

pub(crate) fn circular_distance(a: f64, b: f64) -> f64 {
    let d = reduce(a - b);
    d.min(TAU - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduces_into_range() {
        assert_eq!(Angle::new(TAU).radians(), 0.0);
        assert_eq!(Angle::new(-1e-300).radians(), 0.0);
        assert!((Angle::new(-std::f64::consts::FRAC_PI_2).radians() - 1.5 * std::f64::consts::PI).abs() < 1e-15);
        assert!((Angle::from_degrees(450.0).radians() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn circular_distance_wraps() {
        assert!(circular_distance(0.0, TAU - 1e-13) < 2e-13);
        assert!((circular_distance(0.1, 0.3) - 0.2).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent(x in -1e3f64..1e3) {
            let once = Angle::new(x);
            prop_assert!(once.radians() >= 0.0 && once.radians() < TAU);
            prop_assert_eq!(Angle::new(once.radians()), once);
        }
    }
}
