//! Integer picosecond time base for the analytic latency model.
//!
//! The per-packet inter-BS cost is 7.5 ns, which `std::time::Duration`
//! cannot represent; picosecond integers keep every sum exact, so the
//! model's equalities (constant group-handover time, exact linearity for
//! LTE) hold with zero tolerance instead of floating-point slack.

use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};

pub const PICOS_PER_SECOND: u64 = 1_000_000_000_000;

/// A duration in whole picoseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SimTime {
    picos: u64,
}

impl SimTime {
    pub const ZERO: SimTime = SimTime { picos: 0 };

    pub const fn from_picos(picos: u64) -> Self {
        SimTime { picos }
    }

    pub const fn from_nanos(nanos: u64) -> Self {
        SimTime {
            picos: nanos * 1_000,
        }
    }

    pub const fn from_micros(micros: u64) -> Self {
        SimTime {
            picos: micros * 1_000_000,
        }
    }

    pub const fn from_millis(millis: u64) -> Self {
        SimTime {
            picos: millis * 1_000_000_000,
        }
    }

    pub const fn picos(&self) -> u64 {
        self.picos
    }

    pub const fn mul(self, count: u64) -> SimTime {
        SimTime {
            picos: self.picos * count,
        }
    }

    /// Decimal seconds with full picosecond resolution, e.g.
    /// `0.050000000000`. Fixed width keeps CSV output byte-stable.
    pub fn seconds_string(&self) -> String {
        format!(
            "{}.{:012}",
            self.picos / PICOS_PER_SECOND,
            self.picos % PICOS_PER_SECOND
        )
    }
}

impl Add for SimTime {
    type Output = SimTime;
    fn add(self, rhs: SimTime) -> SimTime {
        SimTime {
            picos: self.picos + rhs.picos,
        }
    }
}

impl AddAssign for SimTime {
    fn add_assign(&mut self, rhs: SimTime) {
        self.picos += rhs.picos;
    }
}

impl Sub for SimTime {
    type Output = SimTime;
    fn sub(self, rhs: SimTime) -> SimTime {
        SimTime {
            picos: self.picos - rhs.picos,
        }
    }
}

impl Sum for SimTime {
    fn sum<I: Iterator<Item = SimTime>>(iter: I) -> SimTime {
        iter.fold(SimTime::ZERO, Add::add)
    }
}

/// The measured latency constants driving the analytic model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatencyModel {
    /// One inter-BS control packet: 7.5 ns.
    pub bs_bs_per_packet: SimTime,
    /// Fixed cost per handover batch (UE start + core update): 0.05 s.
    pub base_handover_time: SimTime,
    /// The target-BS completion acknowledgment, charged once per batch: 10 us.
    pub completion_ack: SimTime,
}

impl Default for LatencyModel {
    fn default() -> Self {
        LatencyModel {
            bs_bs_per_packet: SimTime::from_picos(7_500),
            base_handover_time: SimTime::from_millis(50),
            completion_ack: SimTime::from_micros(10),
        }
    }
}

impl LatencyModel {
    pub fn is_valid(&self) -> bool {
        self.bs_bs_per_packet > SimTime::ZERO
            && self.base_handover_time > SimTime::ZERO
            && self.completion_ack > SimTime::ZERO
    }
}
