use std::fmt;
use std::ops::{Add, AddAssign, Sub};

/// Milliseconds of real Internet delay represented by one abstract unit.
///
/// The model draws hop delays from 1..=10 units and the worst-case regional
/// delay is 500 ms, so the top of the unit range is pinned to 500 ms.
pub const MS_PER_UNIT: u64 = 50;

/// A point (or span) on the simulator's virtual clock, in abstract units.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VirtualTime(pub u64);

impl VirtualTime {
    pub const ZERO: VirtualTime = VirtualTime(0);

    pub const fn units(self) -> u64 {
        self.0
    }

    pub const fn to_ms(self) -> u64 {
        units_to_ms(self.0)
    }

    pub fn saturating_sub(self, other: VirtualTime) -> VirtualTime {
        VirtualTime(self.0.saturating_sub(other.0))
    }
}

/// Converts abstract units to milliseconds (`units × 50`).
pub const fn units_to_ms(units: u64) -> u64 {
    units * MS_PER_UNIT
}

/// Fractional variant of [`units_to_ms`] for Monte Carlo means.
pub fn mean_units_to_ms(units: f64) -> f64 {
    units * MS_PER_UNIT as f64
}

impl Add for VirtualTime {
    type Output = VirtualTime;

    fn add(self, rhs: VirtualTime) -> VirtualTime {
        VirtualTime(self.0 + rhs.0)
    }
}

impl AddAssign for VirtualTime {
    fn add_assign(&mut self, rhs: VirtualTime) {
        self.0 += rhs.0;
    }
}

impl Sub for VirtualTime {
    type Output = VirtualTime;

    fn sub(self, rhs: VirtualTime) -> VirtualTime {
        VirtualTime(self.0 - rhs.0)
    }
}

impl From<u64> for VirtualTime {
    fn from(units: u64) -> Self {
        VirtualTime(units)
    }
}

impl fmt::Display for VirtualTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
